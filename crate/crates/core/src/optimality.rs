//! Holevo optimality certificates and the cases with a closed-form optimum.
//!
//! A measurement `M` is optimal iff some self-adjoint `Lambda` satisfies
//! `(Lambda - q_i rho_i) M(i) = 0` and `Lambda >= q_i rho_i` for every `i`; the
//! optimum is then `tr(Lambda)` with `Lambda = sum_i q_i rho_i M(i)`.

use alloc::vec::Vec;

use crate::bounds::{self, Bracket, ExactMethod};
use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::operator::{max_abs, CMatrix, HermitianOperator};
use crate::povm::Povm;
use crate::tolerance::CERT_TOL;

/// `sum_i q_i rho_i M(i)` before symmetrization.
pub fn lambda0_raw(ensemble: &Ensemble, povm: &Povm) -> Result<CMatrix> {
    povm.check_against(ensemble)?;
    let dim = ensemble.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for ((q, rho), m) in ensemble
        .priors()
        .iter()
        .zip(ensemble.states())
        .zip(povm.effects())
    {
        acc += (rho.operator().matrix() * m.matrix()).scale(*q);
    }
    Ok(acc)
}

/// Hermitian part of `sum_i q_i rho_i M(i)`. Its trace is the success probability.
pub fn lambda0(ensemble: &Ensemble, povm: &Povm) -> Result<HermitianOperator> {
    Ok(HermitianOperator::symmetrized(lambda0_raw(ensemble, povm)?))
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub lambda0: HermitianOperator,
    /// `max|Lambda - Lambda^dagger|` of the unsymmetrized operator.
    pub anti_hermitian: f64,
    /// `max|(Lambda - q_i rho_i) M(i)|` per outcome.
    pub orthogonality_residuals: Vec<f64>,
    /// `min(0, lambda_min(Lambda - q_i rho_i))` per outcome.
    pub domination_residuals: Vec<f64>,
    pub orthogonality_pass: bool,
    pub domination_pass: bool,
    /// `tr(Lambda)`.
    pub claimed_value: f64,
    pub tolerance: f64,
}

impl Certificate {
    /// Both conditions hold, so the measurement is optimal.
    pub fn passed(&self) -> bool {
        self.orthogonality_pass && self.domination_pass
    }
}

pub fn check_holevo(ensemble: &Ensemble, povm: &Povm) -> Result<Certificate> {
    check_holevo_with_tol(ensemble, povm, CERT_TOL)
}

pub fn check_holevo_with_tol(
    ensemble: &Ensemble,
    povm: &Povm,
    tolerance: f64,
) -> Result<Certificate> {
    let raw = lambda0_raw(ensemble, povm)?;
    let anti_hermitian = max_abs(&(&raw - raw.adjoint()));
    let lambda = HermitianOperator::symmetrized(raw);

    let mut orthogonality_residuals = Vec::with_capacity(ensemble.len());
    let mut domination_residuals = Vec::with_capacity(ensemble.len());
    for (i, m) in povm.effects().iter().enumerate() {
        let gap = lambda.sub(&ensemble.weighted_state(i)?)?;
        orthogonality_residuals.push(max_abs(&(gap.matrix() * m.matrix())));
        domination_residuals.push(f64::min(gap.min_eigenvalue()?, 0.0));
    }
    let orthogonality_pass = orthogonality_residuals.iter().all(|&x| x <= tolerance);
    let domination_pass = domination_residuals.iter().all(|&x| x >= -tolerance);
    Ok(Certificate {
        claimed_value: lambda.trace(),
        lambda0: lambda,
        anti_hermitian,
        orthogonality_residuals,
        domination_residuals,
        orthogonality_pass,
        domination_pass,
        tolerance,
    })
}

/// Optimum for pairwise commuting states: in the shared eigenbasis `{|n>}` each
/// basis vector is assigned to the state maximizing `q_i <n|rho_i|n>` (smallest
/// index on ties), and the optimum is the sum of those maxima.
pub fn commuting_optimum(ensemble: &Ensemble) -> Result<(f64, Povm)> {
    let basis = ensemble.common_eigenbasis().ok_or(Error::NotCommuting)?;
    let dim = ensemble.dim();
    let r = ensemble.len();
    let mut effects = alloc::vec![CMatrix::zeros(dim, dim); r];
    let mut value = 0.0;
    for n in 0..dim {
        let column: Vec<_> = basis.column(n).iter().copied().collect();
        let weights: Vec<f64> = ensemble
            .priors()
            .iter()
            .zip(ensemble.states())
            .map(|(q, rho)| {
                let m = rho.operator().matrix();
                let mut diag = num_complex::Complex64::new(0.0, 0.0);
                for a in 0..dim {
                    for b in 0..dim {
                        diag += column[a].conj() * m[(a, b)] * column[b];
                    }
                }
                q * diag.re
            })
            .collect();
        let mut best = 0;
        for (i, &w) in weights.iter().enumerate() {
            if w > weights[best] {
                best = i;
            }
        }
        value += weights[best];
        effects[best] += HermitianOperator::projector_onto(&column).into_matrix();
    }
    let povm = Povm::new(
        effects
            .into_iter()
            .map(HermitianOperator::symmetrized)
            .collect(),
    )?;
    Ok((value, povm))
}

/// Exact optimum when one of the closed forms applies, otherwise the tightest
/// bracket from the analytical bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Assessment {
    Exact { value: f64, method: ExactMethod },
    Bracket(Bracket),
}

pub fn exact_or_bracket(ensemble: &Ensemble) -> Result<Assessment> {
    let report = bounds::bounds_report(ensemble)?;
    Ok(match report.exact {
        Some(x) => Assessment::Exact {
            value: x.value,
            method: x.method,
        },
        None => Assessment::Bracket(report.bracket),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::{construct_helstrom_povm, success_probability};
    use num_complex::Complex64;

    fn diag(d: &[f64]) -> HermitianOperator {
        HermitianOperator::from_real_diagonal(d)
    }

    fn example() -> Ensemble {
        let third = 1.0 / 3.0;
        Ensemble::from_states(
            &[third, third, third],
            &[
                diag(&[7.0 / 8.0, 1.0 / 8.0]),
                diag(&[5.0 / 8.0, 3.0 / 8.0]),
                diag(&[0.75, 0.25]),
            ],
        )
        .unwrap()
    }

    fn basis_povm() -> Povm {
        Povm::new(alloc::vec![
            diag(&[1.0, 0.0]),
            diag(&[0.0, 1.0]),
            diag(&[0.0, 0.0])
        ])
        .unwrap()
    }

    fn trine() -> Ensemble {
        let states: Vec<HermitianOperator> = (0..3)
            .map(|k| {
                let angle = 2.0 * core::f64::consts::PI * k as f64 / 3.0;
                HermitianOperator::projector_onto(&[
                    Complex64::new(libm::cos(angle / 2.0), 0.0),
                    Complex64::new(libm::sin(angle / 2.0), 0.0),
                ])
            })
            .collect();
        let third = 1.0 / 3.0;
        Ensemble::from_states(&[third, third, third], &states).unwrap()
    }

    #[test]
    fn lambda0_of_basis_measurement() {
        let l = lambda0(&example(), &basis_povm()).unwrap();
        assert!(max_abs(&(l.matrix() - diag(&[7.0 / 24.0, 1.0 / 8.0]).matrix())) < 1e-15);
        assert!((l.trace() - 5.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn lambda0_of_trivial_measurement() {
        let e = example();
        let third = diag(&[1.0 / 3.0, 1.0 / 3.0]);
        let trivial = Povm::new(alloc::vec![third.clone(), third.clone(), third]).unwrap();
        let l = lambda0(&e, &trivial).unwrap();
        let expected = e.mixture().operator().scale(1.0 / 3.0);
        assert!(max_abs(&(l.matrix() - expected.matrix())) < 1e-15);

        let cert = check_holevo(&e, &trivial).unwrap();
        assert!(!cert.passed());
        assert!(!cert.domination_pass);
        assert!((cert.claimed_value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn basis_measurement_is_certified() {
        let cert = check_holevo(&example(), &basis_povm()).unwrap();
        assert!(cert.passed());
        assert!((cert.claimed_value - 5.0 / 12.0).abs() < 1e-15);
        assert_eq!(cert.orthogonality_residuals.len(), 3);
        assert_eq!(cert.anti_hermitian, 0.0);
    }

    #[test]
    fn helstrom_measurement_is_certified() {
        let s = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let plus = HermitianOperator::projector_onto(&[s, s]);
        let e = Ensemble::from_states(&[0.4, 0.6], &[diag(&[0.8, 0.2]), plus]).unwrap();
        let m = construct_helstrom_povm(&e).unwrap();
        let cert = check_holevo(&e, &m).unwrap();
        assert!(cert.passed());
        assert!((cert.claimed_value - bounds::helstrom(&e).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn commuting_optimum_examples() {
        let (value, povm) = commuting_optimum(&example()).unwrap();
        assert!((value - 5.0 / 12.0).abs() < 1e-14);
        assert!(check_holevo(&example(), &povm).unwrap().passed());

        let third = 1.0 / 3.0;
        let cyclic = Ensemble::from_states(
            &[third, third, third],
            &[
                diag(&[0.7, 0.2, 0.1]),
                diag(&[0.1, 0.7, 0.2]),
                diag(&[0.2, 0.1, 0.7]),
            ],
        )
        .unwrap();
        let (value, povm) = commuting_optimum(&cyclic).unwrap();
        assert!((value - 0.7).abs() < 1e-14);
        assert!((success_probability(&cyclic, &povm).unwrap() - 0.7).abs() < 1e-14);

        let rho = diag(&[0.3, 0.3, 0.4]);
        let same = Ensemble::from_states(&[0.25; 4], &[rho.clone(), rho.clone(), rho.clone(), rho])
            .unwrap();
        assert!((commuting_optimum(&same).unwrap().0 - 0.25).abs() < 1e-14);

        assert!(matches!(
            commuting_optimum(&trine()),
            Err(Error::NotCommuting)
        ));
    }

    #[test]
    fn dispatch() {
        match exact_or_bracket(&example()).unwrap() {
            Assessment::Exact { value, method } => {
                assert!((value - 5.0 / 12.0).abs() < 1e-14);
                assert_eq!(method, ExactMethod::Commuting);
            }
            other => panic!("unexpected {other:?}"),
        }
        match exact_or_bracket(&trine()).unwrap() {
            Assessment::Bracket(b) => assert!(b.low <= b.high + 1e-9),
            other => panic!("unexpected {other:?}"),
        }
        let pair =
            Ensemble::from_states(&[0.5, 0.5], &[diag(&[1.0, 0.0]), diag(&[0.5, 0.5])]).unwrap();
        assert!(matches!(
            exact_or_bracket(&pair).unwrap(),
            Assessment::Exact {
                method: ExactMethod::Binary,
                ..
            }
        ));
    }
}
