//! Built-in three-state qubit example and its self-check.

use std::fmt::Write;

use qsd_core::bounds::{bounds_report, BoundsReport};
use qsd_core::optimality::{check_holevo_with_tol, commuting_optimum};
use qsd_core::{Ensemble, HermitianOperator};

use crate::error::Result;

/// Agreement required between computed and closed-form values.
pub const MATCH_TOL: f64 = 1e-9;
/// Minimum gap for each strict inequality in the orderings.
pub const ORDER_MARGIN: f64 = 1e-6;

/// `rho_1 = diag(7/8, 1/8)`, `rho_2 = diag(5/8, 3/8)`, `rho_3 = diag(3/4, 1/4)`, equal priors.
pub fn example_ensemble() -> Ensemble {
    let third = 1.0 / 3.0;
    Ensemble::from_states(
        &[third, third, third],
        &[
            HermitianOperator::from_real_diagonal(&[7.0 / 8.0, 1.0 / 8.0]),
            HermitianOperator::from_real_diagonal(&[5.0 / 8.0, 3.0 / 8.0]),
            HermitianOperator::from_real_diagonal(&[0.75, 0.25]),
        ],
    )
    .expect("example ensemble is valid")
}

#[derive(Debug, Default)]
pub struct ExampleRun {
    pub text: String,
    pub mismatches: usize,
}

impl ExampleRun {
    fn mark(&mut self, ok: bool) -> &'static str {
        if !ok {
            self.mismatches += 1;
        }
        if ok {
            "✓"
        } else {
            "✗ MISMATCH"
        }
    }

    fn exact(&mut self, name: &str, form: &str, eq: &str, expected: f64, computed: f64) {
        let mark = self.mark((computed - expected).abs() <= MATCH_TOL);
        let _ = writeln!(
            self.text,
            "{name} = {form} ({eq})  computed {computed:.12} {mark}"
        );
    }

    fn approx(&mut self, name: &str, form: &str, eq: &str, expected: f64, computed: f64) {
        let mark = self.mark((computed - expected).abs() <= MATCH_TOL);
        let _ = writeln!(
            self.text,
            "{name} = {form} ≈ {expected:.4} ({eq})  computed {computed:.12} {mark}"
        );
    }

    fn ordering(&mut self, eq: &str, chain: &[(&str, f64)], symbol: &str) {
        let ok = chain.windows(2).all(|w| {
            if symbol == "<" {
                w[1].1 - w[0].1 > ORDER_MARGIN
            } else {
                w[0].1 - w[1].1 > ORDER_MARGIN
            }
        });
        let names: Vec<&str> = chain.iter().map(|c| c.0).collect();
        let mark = self.mark(ok);
        let _ = writeln!(
            self.text,
            "ordering {eq}: {} {mark}",
            names.join(&format!(" {symbol} "))
        );
    }
}

fn unweighted_sums(report: &BoundsReport) -> Vec<f64> {
    let d = &report.table.state_distances;
    (0..d.len())
        .map(|j| d.iter().map(|row| row[j]).sum())
        .collect()
}

/// Recompute every value of the worked example and compare against closed forms.
pub fn run_example() -> Result<ExampleRun> {
    let ensemble = example_ensemble();
    let report = bounds_report(&ensemble)?;
    let mut run = ExampleRun::default();
    let s = f64::sqrt;
    let _ = writeln!(
        run.text,
        "rho_1 = diag(7/8, 1/8), rho_2 = diag(5/8, 3/8), rho_3 = diag(3/4, 1/4), q_i = 1/3 (Eq. 51)"
    );

    let d = &report.table.state_distances;
    run.exact("||rho_1 - rho_2||_1", "1/2", "Eq. 52", 0.5, d[0][1]);
    run.exact("||rho_1 - rho_3||_1", "1/4", "Eq. 52", 0.25, d[0][2]);
    run.exact("||rho_2 - rho_3||_1", "1/4", "Eq. 52", 0.25, d[1][2]);
    let pair_sum = d[0][1] + d[0][2] + d[1][2];
    run.exact(
        "sum_(i<j) ||rho_i - rho_j||_1",
        "1",
        "Eq. 52",
        1.0,
        pair_sum,
    );
    let sums = unweighted_sums(&report);
    let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    run.exact("min_j sum_i ||rho_i - rho_j||_1", "1/2", "Eq. 52", 0.5, min);
    run.exact(
        "max_j sum_i ||rho_i - rho_j||_1",
        "3/4",
        "Eq. 52",
        0.75,
        max,
    );

    let lower = &report.lower;
    let upper = &report.upper;
    run.exact("L1_new", "19/48", "Eq. 53", 19.0 / 48.0, lower.l1_new);
    run.exact("L2_new", "7/18", "Eq. 53", 7.0 / 18.0, lower.l2_new);
    run.exact("Q_new", "4/9", "Eq. 53", 4.0 / 9.0, upper.q_new);
    run.exact("Q4", "5/12", "Eq. 54", 5.0 / 12.0, upper.q4);
    run.exact("Q2", "7/12", "Eq. 54", 7.0 / 12.0, upper.q2);
    run.exact("L1", "1/3", "Eq. 54", 1.0 / 3.0, lower.l1);

    let (optimum, povm) = commuting_optimum(&ensemble)?;
    run.exact("P_opt", "5/12", "Eq. 55", 5.0 / 12.0, optimum);

    let f12 = (s(35.0) + s(3.0)) / 8.0;
    let f13 = (s(42.0) + s(2.0)) / 8.0;
    let f23 = (s(30.0) + s(6.0)) / 8.0;
    let f = &report.table.fidelities;
    run.approx("F_12", "(√35+√3)/8", "Eq. 56", f12, f[0][1]);
    run.approx("F_13", "(√42+√2)/8", "Eq. 56", f13, f[0][2]);
    run.approx("F_23", "(√30+√6)/8", "Eq. 56", f23, f[1][2]);

    let root = (s(110.0) + s(14.0)) / 8.0;
    // the report holds tr sqrt(sum q_i^2 rho_i^2) = (1/3) tr sqrt(sum rho_i^2)
    run.approx(
        "tr sqrt(sum_i rho_i^2)",
        "(√110+√14)/8",
        "Eq. 57",
        root,
        3.0 * report.root_trace,
    );

    let q3 = 1.0 - (f12 * f12 + f13 * f13 + f23 * f23) / 9.0;
    let q5 = root / 3.0;
    let l2 = 1.0 - (f12 + f13 + f23) / 3.0;
    run.approx("Q3", "1 - (1/9) sum F_ij^2", "Eq. 58", q3, upper.q3);
    run.approx("Q5", "(1/3) tr sqrt(sum_i rho_i^2)", "Eq. 58", q5, upper.q5);
    run.approx("L2", "1 - (1/3) sum F_ij", "Eq. 58", l2, lower.l2);
    run.approx("L3", "Q5^2", "Eq. 58", q5 * q5, lower.l3);

    let cert = check_holevo_with_tol(&ensemble, &povm, crate::cert_tol()?)?;
    let mark = run.mark(cert.passed() && (cert.claimed_value - upper.q4).abs() <= MATCH_TOL);
    let _ = writeln!(
        run.text,
        "P_opt = Q4 = 5/12 certified optimal by the Holevo conditions (Eq. 55) {mark}"
    );

    run.ordering(
        "Eq. 59",
        &[
            ("Q4", upper.q4),
            ("Qnew", upper.q_new),
            ("Q2", upper.q2),
            ("Q5", upper.q5),
            ("Q3", upper.q3),
        ],
        "<",
    );
    run.ordering(
        "Eq. 60",
        &[
            ("P_opt", optimum),
            ("L1new", lower.l1_new),
            ("L2new", lower.l2_new),
            ("L3", lower.l3),
            ("L1", lower.l1),
            ("L2", lower.l2),
        ],
        ">",
    );
    Ok(run)
}
