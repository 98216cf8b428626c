//! One function per subcommand. Data goes to `out`, diagnostics to `err`;
//! each returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::Path;

use qsd_core::bounds::bounds_report;
use qsd_core::optimality::check_holevo_with_tol;
use qsd_core::povm::{construct_mj, success_probability};
use qsd_core::tolerance::ToleranceSet;

use crate::error::{exit, CliError, Result};
use crate::example::run_example;
use crate::format::{load_ensemble, load_povm, Construction, PovmFile};
use crate::report::ReportFile;
use crate::sweep::{run_sweep, write_atomic};
use crate::{cert_tol, render};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        })
}

fn tolerances() -> Result<ToleranceSet> {
    Ok(ToleranceSet {
        certificate: cert_tol()?,
        ..ToleranceSet::default()
    })
}

pub fn bounds(
    path: &Path,
    out_path: Option<&Path>,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<i32> {
    let (ensemble, text) = load_ensemble(path)?;
    let report = bounds_report(&ensemble)?;
    let file = ReportFile::new(&report, text.as_bytes(), tolerances()?);
    let json = file.to_json() + "\n";
    if let Some(p) = out_path {
        write_atomic(p, json.as_bytes())?;
    }
    match format {
        OutputFormat::Json => emit(out, &json)?,
        OutputFormat::Table => emit(out, &render::bounds_table(&report))?,
    }
    Ok(exit::OK)
}

pub fn certify(ensemble_path: &Path, povm_path: &Path, out: &mut dyn Write) -> Result<i32> {
    let (ensemble, _) = load_ensemble(ensemble_path)?;
    let povm = load_povm(povm_path)?;
    povm.check_against(&ensemble)
        .map_err(|e| CliError::Mismatch(format!("POVM does not fit the ensemble: {e}")))?;
    let cert = check_holevo_with_tol(&ensemble, &povm, cert_tol()?)?;
    let report = bounds_report(&ensemble)?;
    emit(out, &render::certificate(&cert, &report.bracket))?;
    Ok(if cert.passed() {
        exit::OK
    } else {
        exit::CHECK_FAILED
    })
}

/// Which `M_j` to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    One(usize),
    All,
}

pub fn povm(
    path: &Path,
    selection: Selection,
    out_dir: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let (ensemble, _) = load_ensemble(path)?;
    let report = bounds_report(&ensemble)?;
    let indices: Vec<usize> = match selection {
        Selection::One(j) => vec![j],
        Selection::All => (0..ensemble.len()).collect(),
    };
    let mut files = Vec::with_capacity(indices.len());
    for &j in &indices {
        let m = construct_mj(&ensemble, j)?;
        let achieved = success_probability(&ensemble, &m)?;
        files.push(PovmFile::from_povm(
            &m,
            Some(Construction {
                j,
                achieved_success: achieved,
            }),
        ));
    }

    let argmax = report.ties.l1_new.index;
    let mut summary = String::new();
    for file in &files {
        let c = file.construction.as_ref().expect("constructed");
        let mark = if c.j == argmax {
            format!("  argmax, L1_new = {:.9} (Eq. 15)", report.lower.l1_new)
        } else {
            String::new()
        };
        summary.push_str(&format!(
            "M_{}: achieved success {:.9} (Eq. 20){mark}\n",
            c.j, c.achieved_success
        ));
    }

    match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|source| CliError::Write {
                path: dir.to_path_buf(),
                source,
            })?;
            for file in &files {
                let j = file.construction.as_ref().expect("constructed").j;
                let target = dir.join(format!("povm_j{j}.json"));
                let json = serde_json::to_string_pretty(file).expect("povm serializes") + "\n";
                write_atomic(&target, json.as_bytes())?;
                summary.push_str(&format!("wrote {}\n", target.display()));
            }
            emit(out, &summary)?;
        }
        None => {
            let json = match selection {
                Selection::One(_) => serde_json::to_string_pretty(&files[0]),
                Selection::All => serde_json::to_string_pretty(&files),
            }
            .expect("povm serializes");
            emit(out, &(json + "\n"))?;
            emit(err, &summary)?;
        }
    }
    Ok(exit::OK)
}

pub fn example(out: &mut dyn Write) -> Result<i32> {
    let run = run_example()?;
    emit(out, &run.text)?;
    if run.mismatches > 0 {
        return Err(CliError::SelfCheck(run.mismatches));
    }
    Ok(exit::OK)
}

pub fn sweep(config: &Path, out: &mut dyn Write) -> Result<i32> {
    let outcome = run_sweep(config, cert_tol()?)?;
    let s = &outcome.summary;
    let mut text = format!(
        "{} rows written to {}\n{} invariant violation(s)\n",
        s.rows,
        outcome.output.display(),
        s.total_violations
    );
    for (name, count) in &s.violations {
        if *count > 0 {
            text.push_str(&format!("  {count:>5}  {name}\n"));
        }
    }
    if let Some(w) = s.tightness.get("bracket width") {
        text.push_str(&format!(
            "bracket width: mean {:.6}, max {:.6}\n",
            w.mean, w.max
        ));
    }
    emit(out, &text)?;
    Ok(if s.total_violations == 0 {
        exit::OK
    } else {
        exit::CHECK_FAILED
    })
}
