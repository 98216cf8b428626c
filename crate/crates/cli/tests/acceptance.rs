//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use qsd::sweep::{RowSpec, SweepConfig};
use qsd_core::bounds::{bounds_report, helstrom, BoundsReport};
use qsd_core::operator::{positive_part_norm, trace_norm, trace_of_product, CMatrix};
use qsd_core::optimality::{check_holevo, commuting_optimum};
use qsd_core::povm::{
    averaged_representation, construct_helstrom_povm, construct_mj, jth_representation,
    success_probability,
};
use qsd_core::random::{
    random_ensemble, random_povm, random_unitary, PriorMode, Purity, RandomSpec, SplitMix64,
};
use qsd_core::tolerance::{COMPLETENESS_TOL, PSD_TOL};
use qsd_core::{Ensemble, HermitianOperator, Povm};

const TOL: f64 = 1e-9;
const SUITE_SEED: u64 = 0x0ACC_E97A_1CE5;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || {
        format!("{name}: got {got:.15}, expected {want:.15} (tolerance {tol:e})")
    })
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn example() -> Ensemble {
    let third = 1.0 / 3.0;
    Ensemble::from_states(
        &[third, third, third],
        &[
            HermitianOperator::from_real_diagonal(&[7.0 / 8.0, 1.0 / 8.0]),
            HermitianOperator::from_real_diagonal(&[5.0 / 8.0, 3.0 / 8.0]),
            HermitianOperator::from_real_diagonal(&[3.0 / 4.0, 1.0 / 4.0]),
        ],
    )
    .unwrap()
}

fn sweep_config() -> SweepConfig {
    let text = std::fs::read_to_string(data_dir().join("sweep_default.json")).unwrap();
    SweepConfig::parse(&text).unwrap()
}

struct SweepCase {
    spec: RowSpec,
    ensemble: Ensemble,
    report: BoundsReport,
}

fn sweep_cases() -> Vec<SweepCase> {
    sweep_config()
        .rows()
        .into_iter()
        .map(|spec| {
            let ensemble = random_ensemble(&spec.random_spec().unwrap()).unwrap();
            let report = bounds_report(&ensemble).unwrap();
            SweepCase {
                spec,
                ensemble,
                report,
            }
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let e = example();
    let rep = bounds_report(&e).map_err(|x| x.to_string())?;
    let s = f64::sqrt;
    let d = &rep.table.state_distances;
    close("||rho1-rho2||", d[0][1], 0.5, TOL)?;
    close("||rho1-rho3||", d[0][2], 0.25, TOL)?;
    close("||rho2-rho3||", d[1][2], 0.25, TOL)?;
    close("L1_new", rep.lower.l1_new, 19.0 / 48.0, TOL)?;
    close("L2_new", rep.lower.l2_new, 7.0 / 18.0, TOL)?;
    close("Q_new", rep.upper.q_new, 4.0 / 9.0, TOL)?;
    close("Q4", rep.upper.q4, 5.0 / 12.0, TOL)?;
    close("Q2", rep.upper.q2, 7.0 / 12.0, TOL)?;
    close("L1", rep.lower.l1, 1.0 / 3.0, TOL)?;
    let f12 = (s(35.0) + s(3.0)) / 8.0;
    let f13 = (s(42.0) + s(2.0)) / 8.0;
    let f23 = (s(30.0) + s(6.0)) / 8.0;
    let f = &rep.table.fidelities;
    close("F12", f[0][1], f12, TOL)?;
    close("F13", f[0][2], f13, TOL)?;
    close("F23", f[1][2], f23, TOL)?;
    let root = (s(110.0) + s(14.0)) / 8.0;
    close("tr sqrt(sum rho^2)", 3.0 * rep.root_trace, root, TOL)?;
    let q3 = 1.0 - (f12 * f12 + f13 * f13 + f23 * f23) / 9.0;
    let q5 = root / 3.0;
    let l2 = 1.0 - (f12 + f13 + f23) / 3.0;
    close("Q3", rep.upper.q3, q3, TOL)?;
    close("Q5", rep.upper.q5, q5, TOL)?;
    close("L2", rep.lower.l2, l2, TOL)?;
    close("L3", rep.lower.l3, q5 * q5, TOL)?;
    // printed four-digit values are roundings of the closed forms
    for (name, got, shown) in [
        ("Q3", q3, 0.6812),
        ("Q5", q5, 0.5929),
        ("L2", l2, 0.0221),
        ("L3", q5 * q5, 0.3515),
    ] {
        close(name, got, shown, 5e-5)?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("all closed forms within 1e-9 in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let e = example();
    let rep = bounds_report(&e).map_err(|x| x.to_string())?;
    let (l, u) = (&rep.lower, &rep.upper);
    let upper = [u.q4, u.q_new, u.q2, u.q5, u.q3];
    let lower = [l.l1_new, l.l2_new, l.l3, l.l1, l.l2];
    let margin = 1e-6;
    ensure(upper.windows(2).all(|w| w[1] - w[0] > margin), || {
        format!("upper chain {upper:?}")
    })?;
    ensure(lower.windows(2).all(|w| w[0] - w[1] > margin), || {
        format!("lower chain {lower:?}")
    })?;
    let (value, povm) = commuting_optimum(&e).map_err(|x| x.to_string())?;
    close("optimum", value, 5.0 / 12.0, TOL)?;
    close("optimum vs Q4", value, u.q4, TOL)?;
    ensure(value - l.l1_new > margin, || {
        "optimum not above L1_new".into()
    })?;
    let cert = check_holevo(&e, &povm).map_err(|x| x.to_string())?;
    ensure(cert.passed(), || format!("certificate failed: {cert:?}"))?;
    close("certified value", cert.claimed_value, 5.0 / 12.0, TOL)?;
    Ok("Q4 < Q_new < Q2 < Q5 < Q3, L1_new > L2_new > L3 > L1 > L2, 5/12 certified".into())
}

fn criterion_3() -> Outcome {
    let mut seeds = SplitMix64::new(SUITE_SEED ^ 3);
    let purities = [Purity::Pure, Purity::Mixed, Purity::Commuting];
    let mut worst: f64 = 0.0;
    for k in 0..500 {
        let spec = RandomSpec {
            seed: seeds.next_u64(),
            dim: 2 + k % 2,
            r: 2,
            purity: purities[k % 3],
            priors: PriorMode::RandomSimplex,
        };
        let e = random_ensemble(&spec).map_err(|x| x.to_string())?;
        let q = e.priors();
        let diff = e.states()[0]
            .operator()
            .scale(q[0])
            .sub(&e.states()[1].operator().scale(q[1]))
            .unwrap();
        let h = 0.5 * (1.0 + trace_norm(&diff).unwrap());
        let rep = bounds_report(&e).unwrap();
        for (name, b) in [
            ("L1_new", rep.lower.l1_new),
            ("L2_new", rep.lower.l2_new),
            ("Q4", rep.upper.q4),
            ("Q_new", rep.upper.q_new),
        ] {
            close(&format!("case {k} {name}"), b, h, TOL)?;
            worst = worst.max((b - h).abs());
        }
        close(
            &format!("case {k} helstrom()"),
            helstrom(&e).unwrap(),
            h,
            TOL,
        )?;
        let m = construct_helstrom_povm(&e).map_err(|x| x.to_string())?;
        let achieved = success_probability(&e, &m).unwrap();
        close(&format!("case {k} Helstrom measurement"), achieved, h, TOL)?;
        worst = worst.max((achieved - h).abs());
        let cert = check_holevo(&e, &m).unwrap();
        ensure(cert.passed(), || {
            format!("case {k}: Helstrom measurement not certified")
        })?;
    }
    Ok(format!("500 pairs, worst deviation {worst:.2e}"))
}

fn criterion_4(cases: &[SweepCase], generation: Duration) -> Outcome {
    let start = Instant::now();
    ensure(cases.len() >= 1000, || {
        format!("only {} ensembles", cases.len())
    })?;
    for (dims, what) in [(2..=4, "dim"), (2..=5, "r")] {
        for v in dims {
            let present = cases.iter().any(|c| {
                if what == "dim" {
                    c.spec.dim == v
                } else {
                    c.spec.r == v
                }
            });
            ensure(present, || format!("no ensemble with {what} = {v}"))?;
        }
    }
    let mut violations = Vec::new();
    for (k, c) in cases.iter().enumerate() {
        let (l, u) = (&c.report.lower, &c.report.upper);
        let r = c.spec.r as f64;
        let checks = [
            ("L2_new <= L1_new", l.l2_new <= l.l1_new + TOL),
            ("L1_new <= Q4", l.l1_new <= u.q4 + TOL),
            ("Q4 <= Q_new", u.q4 <= u.q_new + TOL),
            ("Q_new <= Q2", u.q_new <= u.q2 + TOL),
            ("L1_new >= L1", l.l1 <= l.l1_new + TOL),
            ("sum T <= r - 1", c.report.pair_sum <= r - 1.0 + TOL),
        ];
        for (name, ok) in checks {
            if !ok {
                violations.push(format!("row {k}: {name}"));
            }
        }
    }
    ensure(violations.is_empty(), || violations.join("; "))?;
    let elapsed = generation + start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} ensembles, zero violations, {elapsed:?}",
        cases.len()
    ))
}

fn check_povm_valid(m: &Povm, dim: usize) -> Result<(), String> {
    let mut total = CMatrix::zeros(dim, dim);
    for effect in m.effects() {
        let min = effect.min_eigenvalue().map_err(|x| x.to_string())?;
        ensure(min >= -PSD_TOL, || format!("effect eigenvalue {min}"))?;
        total += effect.matrix();
    }
    let gap = (total - CMatrix::identity(dim, dim))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    ensure(gap <= COMPLETENESS_TOL, || {
        format!("completeness gap {gap:e}")
    })
}

fn criterion_5(cases: &[SweepCase]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (k, c) in cases.iter().enumerate() {
        let e = &c.ensemble;
        let r = e.len();
        let mut best = f64::NEG_INFINITY;
        for j in 0..r {
            let m = construct_mj(e, j).map_err(|x| format!("row {k}, j {j}: {x}"))?;
            check_povm_valid(&m, e.dim()).map_err(|x| format!("row {k}, j {j}: {x}"))?;
            let achieved = success_probability(e, &m).unwrap();
            let mut expected = e.priors()[j];
            for i in (0..r).filter(|&i| i != j) {
                let diff = e.pairwise_difference(i, j).unwrap();
                expected += positive_part_norm(&diff).unwrap() / (r - 1) as f64;
            }
            close(&format!("row {k}, j {j}"), achieved, expected, TOL)?;
            worst = worst.max((achieved - expected).abs());
            best = best.max(achieved);
            count += 1;
        }
        close(&format!("row {k} max_j"), best, c.report.lower.l1_new, TOL)?;
    }
    Ok(format!("{count} measurements, worst deviation {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    let mut seeds = SplitMix64::new(SUITE_SEED ^ 6);
    let purities = [Purity::Pure, Purity::Mixed, Purity::Commuting];
    let mut worst: f64 = 0.0;
    for k in 0..500 {
        let spec = RandomSpec {
            seed: seeds.next_u64(),
            dim: 2 + k % 3,
            r: 2 + k % 4,
            purity: purities[k % 3],
            priors: if k % 2 == 0 {
                PriorMode::Uniform
            } else {
                PriorMode::RandomSimplex
            },
        };
        let e = random_ensemble(&spec).map_err(|x| x.to_string())?;
        let m = random_povm(&spec, spec.r).map_err(|x| x.to_string())?;
        let direct: f64 = e
            .priors()
            .iter()
            .zip(e.states())
            .zip(m.effects())
            .map(|((q, rho), eff)| q * trace_of_product(rho.operator().matrix(), eff.matrix()).re)
            .sum();
        let mut values = vec![averaged_representation(&e, &m).unwrap()];
        for j in 0..spec.r {
            values.push(jth_representation(&e, &m, j).unwrap());
        }
        for v in values {
            close(&format!("pair {k}"), v, direct, TOL)?;
            worst = worst.max((v - direct).abs());
        }
    }
    Ok(format!("500 pairs, worst deviation {worst:.2e}"))
}

/// Commuting family with known spectra `lambda[i][n]` in a random basis.
fn commuting_fixture(seed: u64, dim: usize, r: usize) -> (Ensemble, Vec<f64>, Vec<Vec<f64>>) {
    let mut rng = SplitMix64::new(seed);
    let u = random_unitary(&mut rng, dim);
    let raw: Vec<f64> = (0..r).map(|_| 0.05 + rng.next_f64()).collect();
    let total: f64 = raw.iter().sum();
    let priors: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let spectra: Vec<Vec<f64>> = (0..r)
        .map(|_| {
            let v: Vec<f64> = (0..dim).map(|_| rng.next_f64()).collect();
            let s: f64 = v.iter().sum();
            v.iter().map(|x| x / s).collect()
        })
        .collect();
    let states: Vec<HermitianOperator> = spectra
        .iter()
        .map(|l| {
            let d = HermitianOperator::from_real_diagonal(l);
            HermitianOperator::symmetrized(&u * d.matrix() * u.adjoint())
        })
        .collect();
    (
        Ensemble::from_states(&priors, &states).unwrap(),
        priors,
        spectra,
    )
}

/// Best assignment of basis vectors to outcomes, by enumerating all `r^dim` of them.
#[allow(clippy::needless_range_loop)]
fn brute_force(priors: &[f64], spectra: &[Vec<f64>]) -> f64 {
    let r = priors.len();
    let dim = spectra[0].len();
    let mut best = f64::NEG_INFINITY;
    for code in 0..r.pow(dim as u32) {
        let mut rest = code;
        let mut value = 0.0;
        for n in 0..dim {
            let i = rest % r;
            rest /= r;
            value += priors[i] * spectra[i][n];
        }
        best = best.max(value);
    }
    best
}

fn criterion_7() -> Outcome {
    let mut seeds = SplitMix64::new(SUITE_SEED ^ 7);
    for k in 0..200 {
        let dim = 1 + k % 3;
        let r = 2 + (k / 3) % 3;
        let (e, priors, spectra) = commuting_fixture(seeds.next_u64(), dim, r);
        let oracle = brute_force(&priors, &spectra);
        let (value, povm) = commuting_optimum(&e).map_err(|x| format!("case {k}: {x}"))?;
        close(&format!("case {k} optimum"), value, oracle, TOL)?;
        let b = bounds_report(&e).unwrap().bracket;
        ensure(b.low - 1e-8 <= value && value <= b.high + 1e-8, || {
            format!("case {k}: {value} outside [{}, {}]", b.low, b.high)
        })?;
        let cert = check_holevo(&e, &povm).unwrap();
        ensure(cert.passed(), || format!("case {k}: optimum not certified"))?;
    }
    Ok("200 commuting ensembles match the brute-force oracle".into())
}

fn criterion_8(cases: &[SweepCase]) -> Outcome {
    let mut covered = 0;
    for (k, c) in cases.iter().enumerate() {
        let r = c.spec.r as f64;
        if c.report.pair_sum <= (r - 1.0) * (r - 1.0) / (r + 1.0) {
            covered += 1;
            let (l2_new, l2) = (c.report.lower.l2_new, c.report.lower.l2);
            ensure(l2_new >= l2 - TOL, || {
                format!("row {k}: L2_new {l2_new} < L2 {l2}")
            })?;
        }
    }
    ensure(covered > 0, || "no ensemble meets the condition".into())?;
    Ok(format!(
        "{covered} ensembles meet the condition, zero counterexamples"
    ))
}

fn criterion_9(cases: &[SweepCase]) -> Outcome {
    let mut covered = 0;
    for (k, c) in cases.iter().enumerate() {
        if c.ensemble.is_equiprobable() {
            covered += 1;
            let (q_new, q3) = (c.report.upper.q_new, c.report.upper.q3);
            ensure(q_new <= q3 + TOL, || {
                format!("row {k}: Q_new {q_new} > Q3 {q3}")
            })?;
        }
    }
    ensure(covered > 0, || "no equiprobable ensemble".into())?;
    Ok(format!("{covered} equiprobable ensembles, zero violations"))
}

fn run_sweep_binary(config: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qsd"))
        .arg("sweep")
        .arg(config)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || {
        format!(
            "sweep exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    std::fs::read(config.with_file_name("results.jsonl")).map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut config = sweep_config();
    config.output = "results.jsonl".into();
    let path = dir.path().join("sweep.json");
    std::fs::write(&path, serde_json::to_string(&config).unwrap()).map_err(|e| e.to_string())?;
    let first = run_sweep_binary(&path)?;
    let second = run_sweep_binary(&path)?;
    ensure(first == second, || "results differ between runs".into())?;
    Ok(format!("two runs, {} identical bytes", first.len()))
}

fn main() {
    let start = Instant::now();
    let cases = sweep_cases();
    let generation = start.elapsed();
    let criteria: Vec<Criterion> = vec![
        ("worked example values", Box::new(criterion_1)),
        (
            "worked example orderings and certified optimum",
            Box::new(criterion_2),
        ),
        (
            "r = 2 collapse to the Helstrom bound",
            Box::new(criterion_3),
        ),
        (
            "bound chain on random ensembles",
            Box::new(|| criterion_4(&cases, generation)),
        ),
        (
            "constructive measurements",
            Box::new(|| criterion_5(&cases)),
        ),
        ("representation identities", Box::new(criterion_6)),
        (
            "commuting optimum against brute force",
            Box::new(criterion_7),
        ),
        (
            "L2_new >= L2 under the sufficient condition",
            Box::new(|| criterion_8(&cases)),
        ),
        (
            "Q_new <= Q3 for equal priors",
            Box::new(|| criterion_9(&cases)),
        ),
        ("sweep determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
