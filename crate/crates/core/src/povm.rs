//! Measurements, success probabilities, and the measurements that attain the
//! pairwise lower bounds.

use alloc::vec::Vec;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::operator::{hermitian_eig, max_abs, trace_of_product, CMatrix, HermitianOperator};
use crate::tolerance::{COMPLETENESS_TOL, PSD_TOL};

/// Positive operator-valued measure: PSD effects summing to the identity.
/// Outcome `i` is the guess "state `i` was sent".
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<HermitianOperator>,
}

impl Povm {
    pub fn new(effects: Vec<HermitianOperator>) -> Result<Self> {
        let first = effects.first().ok_or(Error::EmptyPovm)?;
        let dim = first.dim();
        let mut total = CMatrix::zeros(dim, dim);
        for (index, effect) in effects.iter().enumerate() {
            first.check_dim(effect)?;
            let min = effect.min_eigenvalue()?;
            if min < -PSD_TOL {
                return Err(Error::EffectNotPsd {
                    index,
                    min_eigenvalue: min,
                });
            }
            total += effect.matrix();
        }
        let deviation = max_abs(&(total - CMatrix::identity(dim, dim)));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::NotComplete(deviation));
        }
        Ok(Self { effects })
    }

    pub fn from_matrices(matrices: Vec<CMatrix>) -> Result<Self> {
        Self::new(
            matrices
                .into_iter()
                .map(HermitianOperator::new)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn effects(&self) -> &[HermitianOperator] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    /// Fails unless the POVM has one outcome per state and matching dimension.
    pub fn check_against(&self, ensemble: &Ensemble) -> Result<()> {
        if self.len() != ensemble.len() {
            return Err(Error::ArityMismatch {
                povm: self.len(),
                ensemble: ensemble.len(),
            });
        }
        if self.dim() != ensemble.dim() {
            return Err(Error::DimensionMismatch {
                expected: ensemble.dim(),
                found: self.dim(),
            });
        }
        Ok(())
    }
}

fn tr_real(a: &HermitianOperator, b: &HermitianOperator) -> f64 {
    trace_of_product(a.matrix(), b.matrix()).re
}

/// `sum_i q_i tr(rho_i M(i))`.
pub fn success_probability(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    povm.check_against(ensemble)?;
    Ok(ensemble
        .priors()
        .iter()
        .zip(ensemble.states())
        .zip(povm.effects())
        .map(|((q, rho), m)| q * tr_real(rho.operator(), m))
        .sum())
}

pub fn error_probability(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    Ok(1.0 - success_probability(ensemble, povm)?)
}

/// Success probability rewritten around state `j`:
/// `q_j + sum_i tr((q_i rho_i - q_j rho_j) M(i))`.
pub fn jth_representation(ensemble: &Ensemble, povm: &Povm, j: usize) -> Result<f64> {
    povm.check_against(ensemble)?;
    if j >= ensemble.len() {
        return Err(Error::IndexOutOfRange {
            index: j,
            len: ensemble.len(),
        });
    }
    let mut value = ensemble.priors()[j];
    for (i, m) in povm.effects().iter().enumerate() {
        if i != j {
            value += tr_real(&ensemble.weighted_difference(i, j), m);
        }
    }
    Ok(value)
}

/// Average of the `r` rewritings:
/// `(1/r)(1 + sum_{i,j} tr((q_i rho_i - q_j rho_j) M(i)))`.
pub fn averaged_representation(ensemble: &Ensemble, povm: &Povm) -> Result<f64> {
    povm.check_against(ensemble)?;
    let r = ensemble.len();
    let mut total = 0.0;
    for (i, m) in povm.effects().iter().enumerate() {
        for j in 0..r {
            if i != j {
                total += tr_real(&ensemble.weighted_difference(i, j), m);
            }
        }
    }
    Ok((1.0 + total) / r as f64)
}

/// Measurement built around state `j`: outcome `i != j` gets
/// `P_ij / (r - 1)`, where `P_ij` projects onto the strictly positive eigenspace
/// of `q_i rho_i - q_j rho_j`, and outcome `j` gets the remainder.
pub fn construct_mj(ensemble: &Ensemble, j: usize) -> Result<Povm> {
    let r = ensemble.len();
    if j >= r {
        return Err(Error::IndexOutOfRange { index: j, len: r });
    }
    let dim = ensemble.dim();
    let share = 1.0 / (r - 1) as f64;
    let mut effects = Vec::with_capacity(r);
    let mut remainder = CMatrix::identity(dim, dim);
    for i in 0..r {
        if i == j {
            effects.push(HermitianOperator::zeros(dim));
            continue;
        }
        let projector = hermitian_eig(&ensemble.weighted_difference(i, j))?.positive_projector();
        let effect = projector.scale(share);
        remainder -= effect.matrix();
        effects.push(effect);
    }
    effects[j] = HermitianOperator::symmetrized(remainder);
    Povm::new(effects)
}

/// Two-outcome measurement attaining the Helstrom value: outcome 0 projects on
/// the positive eigenspace of `q_0 rho_0 - q_1 rho_1`, outcome 1 takes the rest,
/// kernel included.
pub fn construct_helstrom_povm(ensemble: &Ensemble) -> Result<Povm> {
    if ensemble.len() != 2 {
        return Err(Error::WrongArity(ensemble.len()));
    }
    construct_mj(ensemble, 1)
}
