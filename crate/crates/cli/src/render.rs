//! Human-readable rendering of reports and certificates.

use std::fmt::Write;

use qsd_core::bounds::{BoundsReport, Bracket};
use qsd_core::Certificate;

use crate::report::status_str;

/// Equation label printed next to each bound.
pub fn equation_label(name: &str) -> &'static str {
    match name {
        "L1" => "Eq. 28.1",
        "L2" => "Eq. 28.2",
        "L3" => "Eq. 28.3",
        "L1_new" => "Eq. 15",
        "L2_new" => "Eq. 17",
        "Q2" => "Eq. 40",
        "Q3" => "Eq. 41",
        "Q4" => "Eq. 30",
        "Q5" => "Eq. 42",
        "Q_new" => "Eq. 32",
        _ => "",
    }
}

const HELSTROM_ROWS: [&str; 4] = ["L1_new", "L2_new", "Q4", "Q_new"];

fn fmt_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn pair_table(out: &mut String, title: &str, rows: &[Vec<f64>]) {
    let _ = writeln!(out, "{title}");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>10.6}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

pub fn bounds_table(report: &BoundsReport) -> String {
    let mut out = String::new();
    let helstrom = (report.r == 2).then(|| 0.5 * (1.0 + report.table.trace_distances[0][1]));
    let _ = writeln!(
        out,
        "r = {}, dim = {}, priors = {}",
        report.r,
        report.dim,
        fmt_list(&report.priors)
    );
    if report.equiprobable {
        let _ = writeln!(out, "equal priors");
    }
    let _ = writeln!(out);

    let row = |out: &mut String, name: &str, value: f64, note: &str| {
        let mut note = note.to_string();
        if let Some(h) = helstrom {
            if HELSTROM_ROWS.contains(&name) && (value - h).abs() <= 1e-9 {
                note.push_str(" Helstrom");
            }
        }
        let label = format!("({})", equation_label(name));
        let line = format!("  {name:<7} {value:>10.6}  {label:<12}{}", note.trim());
        let _ = writeln!(out, "{}", line.trim_end());
    };

    let _ = writeln!(out, "lower bounds");
    let lower = &report.lower;
    row(&mut out, "L1", lower.l1, "");
    let clamp_note = if lower.l2_was_clamped {
        format!("raw {:.6}, clamped to 0", lower.l2)
    } else {
        String::new()
    };
    row(&mut out, "L2", lower.l2_clamped, &clamp_note);
    row(&mut out, "L3", lower.l3, "");
    row(
        &mut out,
        "L1_new",
        lower.l1_new,
        &format!("argmax j = {}", report.ties.l1_new.index),
    );
    row(&mut out, "L2_new", lower.l2_new, "");

    let _ = writeln!(out, "upper bounds");
    let upper = &report.upper;
    row(&mut out, "Q2", upper.q2, "");
    row(&mut out, "Q3", upper.q3, "");
    row(
        &mut out,
        "Q4",
        upper.q4,
        &format!("argmin j = {}", report.ties.q4.index),
    );
    row(&mut out, "Q5", upper.q5, "");
    row(&mut out, "Q_new", upper.q_new, "");
    let _ = writeln!(out);

    let b = report.bracket;
    let _ = writeln!(
        out,
        "bracket  [{:.6}, {:.6}]  width {:.6}",
        b.low,
        b.high,
        b.width()
    );
    match report.exact {
        Some(x) => {
            let _ = writeln!(out, "exact    {:.6}  ({})", x.value, x.method.as_str());
        }
        None => {
            let _ = writeln!(out, "exact    unavailable (states do not commute)");
        }
    }
    if let Some(h) = helstrom {
        let _ = writeln!(out, "Helstrom {h:.6}  (Eq. 6)");
    }
    let _ = writeln!(out);

    pair_table(
        &mut out,
        "weighted trace norms ||q_i rho_i - q_j rho_j||_1",
        &report.table.trace_distances,
    );
    pair_table(
        &mut out,
        "fidelities ||sqrt(rho_i) sqrt(rho_j)||_1",
        &report.table.fidelities,
    );
    let _ = writeln!(out, "sum_(i<j) T_ij = {:.6}", report.pair_sum);
    let _ = writeln!(out);

    let _ = writeln!(out, "checks");
    for flag in &report.flags {
        let kind = if flag.asserted { "" } else { " (recorded)" };
        let _ = writeln!(
            out,
            "  {:<9} {}{kind}",
            status_str(flag.status),
            flag.relation
        );
    }
    out
}

pub fn certificate(cert: &Certificate, bracket: &Bracket) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tolerance {:e}", cert.tolerance);
    let _ = writeln!(out, "outcome  orthogonality  domination");
    for (i, (o, d)) in cert
        .orthogonality_residuals
        .iter()
        .zip(&cert.domination_residuals)
        .enumerate()
    {
        let _ = writeln!(out, "  {i:<6} {o:>13.3e}  {d:>10.3e}");
    }
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    let _ = writeln!(
        out,
        "(Lambda - q_i rho_i) M(i) = 0: {}",
        verdict(cert.orthogonality_pass)
    );
    let _ = writeln!(
        out,
        "Lambda >= q_i rho_i:           {}",
        verdict(cert.domination_pass)
    );
    let _ = writeln!(out, "claimed value tr(Lambda) = {:.9}", cert.claimed_value);
    let _ = writeln!(out, "bracket [{:.9}, {:.9}]", bracket.low, bracket.high);
    if cert.passed() {
        let _ = writeln!(out, "verdict: optimal");
    } else {
        let position = if cert.claimed_value < bracket.low - 1e-9 {
            "below the bracket"
        } else if cert.claimed_value > bracket.high + 1e-9 {
            "above the bracket"
        } else {
            "inside the bracket"
        };
        let _ = writeln!(out, "claimed value is {position}");
        let _ = writeln!(out, "verdict: not certified");
    }
    out
}
