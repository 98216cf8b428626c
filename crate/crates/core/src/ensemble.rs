//! Validated ensembles `{(q_i, rho_i)}` and the operators derived from them.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operator::{commutator_max, hermitian_eig, CMatrix, HermitianOperator};
use crate::random::SplitMix64;
use crate::tolerance::{COMMUTE_TOL, DIAGONAL_TOL, EQUIPROBABLE_TOL, PSD_TOL, TRACE_TOL};

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne(trace));
        }
        let min = op.min_eigenvalue()?;
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { op })
    }

    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(matrix)?)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        crate::operator::trace_of_product(self.op.matrix(), self.op.matrix()).re
    }
}

/// States `rho_1..rho_r` of a common dimension, prepared with priors `q_i > 0`
/// summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    priors: Vec<f64>,
    states: Vec<DensityMatrix>,
}

fn density_reason(err: &Error) -> &'static str {
    match err {
        Error::TraceNotOne(_) => "trace is not 1",
        Error::NotPsd(_) => "not positive semidefinite",
        Error::NonHermitian(_) => "not Hermitian",
        Error::NotSquare { .. } => "not square",
        Error::NonFinite => "non-finite entry",
        Error::Empty => "empty matrix",
        _ => "spectral decomposition failed",
    }
}

impl Ensemble {
    /// Validate raw `(prior, matrix)` pairs.
    pub fn validate(raw: Vec<(f64, CMatrix)>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::TooFewStates(raw.len()));
        }
        let mut priors = Vec::with_capacity(raw.len());
        let mut states = Vec::with_capacity(raw.len());
        for (index, (prior, matrix)) in raw.into_iter().enumerate() {
            let state =
                DensityMatrix::from_matrix(matrix).map_err(|e| Error::NotDensityMatrix {
                    index,
                    reason: density_reason(&e),
                })?;
            priors.push(prior);
            states.push(state);
        }
        Self::new(priors, states)
    }

    pub fn from_states(priors: &[f64], states: &[HermitianOperator]) -> Result<Self> {
        if priors.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: priors.len(),
            });
        }
        Self::validate(
            priors
                .iter()
                .zip(states)
                .map(|(&q, s)| (q, s.matrix().clone()))
                .collect(),
        )
    }

    pub fn new(priors: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::TooFewStates(states.len()));
        }
        if priors.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: states.len(),
                found: priors.len(),
            });
        }
        if let Some((index, &value)) = priors
            .iter()
            .enumerate()
            .find(|(_, &q)| !(q > 0.0 && q <= 1.0 + TRACE_TOL))
        {
            return Err(Error::PriorNotPositive { index, value });
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::PriorsNotNormalized(total));
        }
        Ok(Self { priors, states })
    }

    /// Number of states `r`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// `q_i rho_i`.
    pub fn weighted_state(&self, i: usize) -> Result<HermitianOperator> {
        self.check_index(i)?;
        Ok(self.states[i].operator().scale(self.priors[i]))
    }

    /// `rho = sum_i q_i rho_i`.
    pub fn mixture(&self) -> DensityMatrix {
        let mut acc = HermitianOperator::zeros(self.dim()).into_matrix();
        for (q, s) in self.priors.iter().zip(&self.states) {
            acc += s.operator().matrix().scale(*q);
        }
        DensityMatrix {
            op: HermitianOperator::symmetrized(acc),
        }
    }

    /// `q_i rho_i - q_j rho_j`.
    pub fn pairwise_difference(&self, i: usize, j: usize) -> Result<HermitianOperator> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::SameIndex(i));
        }
        Ok(self.weighted_difference(i, j))
    }

    pub(crate) fn weighted_difference(&self, i: usize, j: usize) -> HermitianOperator {
        let a = self.states[i].operator().matrix().scale(self.priors[i]);
        let b = self.states[j].operator().matrix().scale(self.priors[j]);
        HermitianOperator::symmetrized(a - b)
    }

    /// True when every prior equals `1/r` to within `EQUIPROBABLE_TOL`.
    pub fn is_equiprobable(&self) -> bool {
        let uniform = 1.0 / self.len() as f64;
        self.priors
            .iter()
            .all(|q| (q - uniform).abs() <= EQUIPROBABLE_TOL)
    }

    /// A unitary whose columns simultaneously diagonalize every state, if the
    /// states pairwise commute.
    pub fn common_eigenbasis(&self) -> Option<CMatrix> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if commutator_max(self.states[i].operator(), self.states[j].operator())
                    > COMMUTE_TOL
                {
                    return None;
                }
            }
        }
        let mut rng = SplitMix64::new(0x5EED_C0DE_u64);
        for _ in 0..3 {
            let mut combo = HermitianOperator::zeros(self.dim()).into_matrix();
            for s in &self.states {
                let weight = 1.0 + rng.next_f64();
                combo += s.operator().matrix().scale(weight);
            }
            let Ok(eig) = hermitian_eig(&HermitianOperator::symmetrized(combo)) else {
                continue;
            };
            let basis = eig.eigenvectors;
            if self
                .states
                .iter()
                .all(|s| is_diagonal_in(s.operator(), &basis))
            {
                return Some(basis);
            }
        }
        None
    }

    pub fn is_commuting_family(&self) -> bool {
        self.common_eigenbasis().is_some()
    }

    /// Reorder entries so that entry `k` of the result is entry `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: order.len(),
            });
        }
        for &k in order {
            self.check_index(k)?;
        }
        Self::new(
            order.iter().map(|&k| self.priors[k]).collect(),
            order.iter().map(|&k| self.states[k].clone()).collect(),
        )
    }

    /// Every state replaced by `U^dagger rho_i U`.
    pub fn conjugated_by(&self, unitary: &CMatrix) -> Result<Self> {
        let states = self
            .states
            .iter()
            .map(|s| DensityMatrix::new(s.operator().conjugate_by(unitary)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.priors.clone(), states)
    }
}

fn is_diagonal_in(op: &HermitianOperator, basis: &CMatrix) -> bool {
    let rotated = op.conjugate_by(basis);
    let m = rotated.matrix();
    let n = m.nrows();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= DIAGONAL_TOL))
}
