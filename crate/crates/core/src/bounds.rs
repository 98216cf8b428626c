//! Analytical lower and upper bounds on the optimal success probability.
//!
//! Everything is a function of three pairwise tables: the trace norms
//! `T_ij = ||q_i rho_i - q_j rho_j||_1`, the positive-part norms
//! `||(q_i rho_i - q_j rho_j)^(+)||_1`, and the state fidelities `F_ij`.
//!
//! | bound    | kind  | formula |
//! |----------|-------|---------|
//! | `L1`     | lower | `max_j q_j` |
//! | `L2`     | lower | `1 - sum_{i<j} sqrt(q_i q_j) F_ij` |
//! | `L3`     | lower | `(tr sqrt(sum_i q_i^2 rho_i^2))^2` |
//! | `L1_new` | lower | `max_j { q_j + 1/(r-1) sum_i ||(q_i rho_i - q_j rho_j)^(+)||_1 }` |
//! | `L2_new` | lower | `(1/r)(1 + 1/(r-1) sum_{i<j} T_ij)` |
//! | `Q2`     | upper | `(1/2)(1 + 1/(r-1) sum_{i<j} T_ij)` |
//! | `Q3`     | upper | `1 - sum_{i<j} q_i q_j F_ij^2` |
//! | `Q4`     | upper | `min_j { q_j + sum_i ||(q_i rho_i - q_j rho_j)^(+)||_1 }` |
//! | `Q5`     | upper | `tr sqrt(sum_i q_i^2 rho_i^2)` |
//! | `Q_new`  | upper | `(1/r)(1 + sum_{i<j} T_ij)` |

use alloc::vec;
use alloc::vec::Vec;

use crate::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::operator::{hermitian_eig, sqrt_psd, CMatrix, HermitianOperator};
use crate::optimality;
use crate::tolerance::{BRACKET_TOL, ORDER_TOL};

/// Candidates within this distance of an extremum are recorded as tied.
const TIE_TOL: f64 = 1e-12;

/// Symmetric pairwise quantities of an ensemble, indexed `[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseTable {
    /// `||q_i rho_i - q_j rho_j||_1`, zero on the diagonal.
    pub trace_distances: Vec<Vec<f64>>,
    /// `||rho_i - rho_j||_1` without priors.
    pub state_distances: Vec<Vec<f64>>,
    /// `||(q_i rho_i - q_j rho_j)^(+)||_1`; not symmetric.
    pub positive_parts: Vec<Vec<f64>>,
    /// `F(rho_i, rho_j)`, one on the diagonal.
    pub fidelities: Vec<Vec<f64>>,
}

impl PairwiseTable {
    pub fn len(&self) -> usize {
        self.trace_distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trace_distances.is_empty()
    }

    /// `sum_{i<j} T_ij`.
    pub fn pair_sum(&self) -> f64 {
        let r = self.len();
        (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
            .map(|(i, j)| self.trace_distances[i][j])
            .sum()
    }
}

/// An extremum over `j` together with the index that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremum {
    pub value: f64,
    /// Smallest attaining index.
    pub index: usize,
    /// Every index within `1e-12` of the extremum.
    pub tied: Vec<usize>,
}

fn extremum(values: &[f64], maximize: bool) -> Extremum {
    let mut index = 0;
    for (k, &v) in values.iter().enumerate() {
        let better = if maximize {
            v > values[index]
        } else {
            v < values[index]
        };
        if better {
            index = k;
        }
    }
    let value = values[index];
    let tied = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - value).abs() <= TIE_TOL)
        .map(|(k, _)| k)
        .collect();
    Extremum { value, index, tied }
}

fn fidelity_of_roots(a: &HermitianOperator, b: &HermitianOperator) -> f64 {
    let product: CMatrix = a.matrix() * b.matrix();
    product.svd(false, false).singular_values.iter().sum()
}

pub fn pairwise_table(ensemble: &Ensemble) -> Result<PairwiseTable> {
    let r = ensemble.len();
    let mut trace_distances = vec![vec![0.0; r]; r];
    let mut state_distances = vec![vec![0.0; r]; r];
    let mut positive_parts = vec![vec![0.0; r]; r];
    let mut fidelities = vec![vec![1.0; r]; r];

    let roots = ensemble
        .states()
        .iter()
        .map(|s| sqrt_psd(s.operator()))
        .collect::<Result<Vec<_>>>()?;

    for i in 0..r {
        for j in i + 1..r {
            let eig = hermitian_eig(&ensemble.weighted_difference(i, j))?;
            let norm: f64 = eig.eigenvalues.iter().map(|l| l.abs()).sum();
            trace_distances[i][j] = norm;
            trace_distances[j][i] = norm;
            positive_parts[i][j] = eig.positive_sum();
            positive_parts[j][i] = eig.negative_sum();

            let raw = ensemble.states()[i]
                .operator()
                .sub(ensemble.states()[j].operator())?;
            let d: f64 = hermitian_eig(&raw)?
                .eigenvalues
                .iter()
                .map(|l| l.abs())
                .sum();
            state_distances[i][j] = d;
            state_distances[j][i] = d;

            let f = fidelity_of_roots(&roots[i], &roots[j]);
            fidelities[i][j] = f;
            fidelities[j][i] = f;
        }
    }
    Ok(PairwiseTable {
        trace_distances,
        state_distances,
        positive_parts,
        fidelities,
    })
}

fn l1_new_candidates(table: &PairwiseTable, priors: &[f64]) -> Vec<f64> {
    let share = 1.0 / (priors.len() - 1) as f64;
    (0..priors.len())
        .map(|j| {
            priors[j]
                + share
                    * (0..priors.len())
                        .map(|i| table.positive_parts[i][j])
                        .sum::<f64>()
        })
        .collect()
}

fn q4_candidates(table: &PairwiseTable, priors: &[f64]) -> Vec<f64> {
    (0..priors.len())
        .map(|j| {
            priors[j]
                + (0..priors.len())
                    .map(|i| table.positive_parts[i][j])
                    .sum::<f64>()
        })
        .collect()
}

/// `L1_new` through the trace norms only:
/// `1/(2(r-1)) + 1/(2(r-1)) max_j { sum_i T_ij + q_j (r-2) }`.
pub fn l1_new_via_trace_norms(table: &PairwiseTable, priors: &[f64]) -> f64 {
    let r = priors.len() as f64;
    let best = (0..priors.len())
        .map(|j| table.trace_distances[j].iter().sum::<f64>() + priors[j] * (r - 2.0))
        .fold(f64::MIN, f64::max);
    (1.0 + best) / (2.0 * (r - 1.0))
}

/// `Q4` through the trace norms only:
/// `1/2 + 1/2 min_j { sum_i T_ij - q_j (r-2) }`.
pub fn q4_via_trace_norms(table: &PairwiseTable, priors: &[f64]) -> f64 {
    let r = priors.len() as f64;
    let best = (0..priors.len())
        .map(|j| table.trace_distances[j].iter().sum::<f64>() - priors[j] * (r - 2.0))
        .fold(f64::MAX, f64::min);
    0.5 * (1.0 + best)
}

/// Optimal success probability for two states, `(1 + ||q_0 rho_0 - q_1 rho_1||_1) / 2`.
pub fn helstrom(ensemble: &Ensemble) -> Result<f64> {
    if ensemble.len() != 2 {
        return Err(Error::WrongArity(ensemble.len()));
    }
    let norm = crate::operator::trace_norm(&ensemble.weighted_difference(0, 1))?;
    Ok(0.5 * (1.0 + norm))
}

pub fn lower_l1_new(ensemble: &Ensemble) -> Result<f64> {
    let table = pairwise_table(ensemble)?;
    Ok(extremum(&l1_new_candidates(&table, ensemble.priors()), true).value)
}

pub fn lower_l2_new(ensemble: &Ensemble) -> Result<f64> {
    let table = pairwise_table(ensemble)?;
    let r = ensemble.len() as f64;
    Ok((1.0 + table.pair_sum() / (r - 1.0)) / r)
}

pub fn upper_q4(ensemble: &Ensemble) -> Result<f64> {
    let table = pairwise_table(ensemble)?;
    Ok(extremum(&q4_candidates(&table, ensemble.priors()), false).value)
}

pub fn upper_q_new(ensemble: &Ensemble) -> Result<f64> {
    let table = pairwise_table(ensemble)?;
    Ok((1.0 + table.pair_sum()) / ensemble.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownLowerBounds {
    pub l1: f64,
    /// May be negative for large `r`.
    pub l2: f64,
    pub l2_clamped: f64,
    pub l2_was_clamped: bool,
    pub l3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnownUpperBounds {
    pub q2: f64,
    pub q3: f64,
    pub q5: f64,
}

/// `tr sqrt(sum_i q_i^2 rho_i^2)`.
pub fn root_trace_of_weighted_squares(ensemble: &Ensemble) -> Result<f64> {
    let dim = ensemble.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for (q, rho) in ensemble.priors().iter().zip(ensemble.states()) {
        let m = rho.operator().matrix();
        acc += (m * m).scale(q * q);
    }
    Ok(sqrt_psd(&HermitianOperator::symmetrized(acc))?.trace())
}

fn known_lower_from(table: &PairwiseTable, priors: &[f64], root_trace: f64) -> KnownLowerBounds {
    let r = priors.len();
    let l1 = priors.iter().copied().fold(f64::MIN, f64::max);
    let mut overlap = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            overlap += libm::sqrt(priors[i] * priors[j]) * table.fidelities[i][j];
        }
    }
    let l2 = 1.0 - overlap;
    KnownLowerBounds {
        l1,
        l2,
        l2_clamped: f64::max(l2, 0.0),
        l2_was_clamped: l2 < 0.0,
        l3: root_trace * root_trace,
    }
}

fn known_upper_from(table: &PairwiseTable, priors: &[f64], root_trace: f64) -> KnownUpperBounds {
    let r = priors.len();
    let mut overlap = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            let f = table.fidelities[i][j];
            overlap += priors[i] * priors[j] * f * f;
        }
    }
    KnownUpperBounds {
        q2: 0.5 * (1.0 + table.pair_sum() / (r - 1) as f64),
        q3: 1.0 - overlap,
        q5: root_trace,
    }
}

pub fn known_lower_bounds(ensemble: &Ensemble) -> Result<KnownLowerBounds> {
    let table = pairwise_table(ensemble)?;
    let root = root_trace_of_weighted_squares(ensemble)?;
    Ok(known_lower_from(&table, ensemble.priors(), root))
}

pub fn known_upper_bounds(ensemble: &Ensemble) -> Result<KnownUpperBounds> {
    let table = pairwise_table(ensemble)?;
    let root = root_trace_of_weighted_squares(ensemble)?;
    Ok(known_upper_from(&table, ensemble.priors(), root))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBounds {
    pub l1: f64,
    pub l2: f64,
    pub l2_clamped: f64,
    pub l2_was_clamped: bool,
    pub l3: f64,
    pub l1_new: f64,
    pub l2_new: f64,
}

impl LowerBounds {
    /// `(name, value)` pairs; `L2` enters with its clamped value.
    pub fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("L1", self.l1),
            ("L2", self.l2_clamped),
            ("L3", self.l3),
            ("L1_new", self.l1_new),
            ("L2_new", self.l2_new),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBounds {
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
    pub q5: f64,
    pub q_new: f64,
}

impl UpperBounds {
    pub fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("Q2", self.q2),
            ("Q3", self.q3),
            ("Q4", self.q4),
            ("Q5", self.q5),
            ("Q_new", self.q_new),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub low: f64,
    pub high: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.high - self.low
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.low - slack && value <= self.high + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactMethod {
    /// Two states: Helstrom formula.
    Binary,
    /// Commuting states: per-eigenvector maximum of `q_i lambda_n^(i)`.
    Commuting,
}

impl ExactMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExactMethod::Binary => "binary",
            ExactMethod::Commuting => "commuting",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactValue {
    pub value: f64,
    pub method: ExactMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Holds,
    Violated,
    /// The relation's premise does not apply to this ensemble.
    NotApplicable,
}

/// One ordering relation between bounds, evaluated with `1e-9` slack.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingFlag {
    pub relation: &'static str,
    /// False for comparisons that are recorded but not guaranteed.
    pub asserted: bool,
    pub status: CheckStatus,
}

impl OrderingFlag {
    fn holds(relation: &'static str, ok: bool) -> Self {
        Self {
            relation,
            asserted: true,
            status: if ok {
                CheckStatus::Holds
            } else {
                CheckStatus::Violated
            },
        }
    }

    fn le(relation: &'static str, lhs: f64, rhs: f64) -> Self {
        Self::holds(relation, lhs <= rhs + ORDER_TOL)
    }

    fn when(mut self, premise: bool) -> Self {
        if !premise {
            self.status = CheckStatus::NotApplicable;
        }
        self
    }

    fn recorded(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn is_violation(&self) -> bool {
        self.asserted && self.status == CheckStatus::Violated
    }
}

pub const REL_L2NEW_LE_L1NEW: &str = "L2_new <= L1_new";
pub const REL_L1NEW_LE_Q4: &str = "L1_new <= Q4";
pub const REL_Q4_LE_QNEW: &str = "Q4 <= Q_new";
pub const REL_QNEW_LE_Q2: &str = "Q_new <= Q2";
pub const REL_Q2_LE_Q3_FORM: &str = "Q2 <= 1 - (1 - Q3)/(r - 1)";
pub const REL_QNEW_LE_Q3_EQUIPROBABLE: &str = "Q_new <= Q3 (equal priors)";
pub const REL_L1NEW_GE_L1: &str = "L1_new >= L1";
pub const REL_L2NEW_GE_L2_SUFFICIENT: &str = "L2_new >= L2 (sum T <= (r-1)^2/(r+1))";
pub const REL_L2NEW_GE_L2_OTHERWISE: &str = "L2_new >= L2 ((r-1)^2/(r+1) < sum T)";
pub const REL_PAIR_SUM_LE_R_MINUS_1: &str = "sum T <= r - 1";
pub const REL_L1NEW_FORMS_AGREE: &str = "L1_new positive-part form = trace-norm form";
pub const REL_Q4_FORMS_AGREE: &str = "Q4 positive-part form = trace-norm form";
pub const REL_EXACT_IN_BRACKET: &str = "exact value inside bracket (+/- 1e-8)";

/// Indices that realize the extrema over `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TieBreaks {
    pub l1_new: Extremum,
    pub q4: Extremum,
}

/// Every bound for one ensemble, the bracket they imply, and the ordering checks.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub r: usize,
    pub dim: usize,
    pub priors: Vec<f64>,
    pub equiprobable: bool,
    pub table: PairwiseTable,
    pub pair_sum: f64,
    /// `tr sqrt(sum_i q_i^2 rho_i^2)`.
    pub root_trace: f64,
    pub lower: LowerBounds,
    pub upper: UpperBounds,
    /// `(max of lower bounds, min of upper bounds)`.
    pub bracket: Bracket,
    pub exact: Option<ExactValue>,
    pub flags: Vec<OrderingFlag>,
    pub ties: TieBreaks,
    /// `L1_new` and `Q4` evaluated through trace norms alone.
    pub l1_new_via_trace_norms: f64,
    pub q4_via_trace_norms: f64,
}

impl BoundsReport {
    pub fn violations(&self) -> impl Iterator<Item = &OrderingFlag> {
        self.flags.iter().filter(|f| f.is_violation())
    }

    pub fn flag(&self, relation: &str) -> Option<&OrderingFlag> {
        self.flags.iter().find(|f| f.relation == relation)
    }
}

pub fn bounds_report(ensemble: &Ensemble) -> Result<BoundsReport> {
    let priors = ensemble.priors();
    let r = ensemble.len();
    let rf = r as f64;
    let table = pairwise_table(ensemble)?;
    let root_trace = root_trace_of_weighted_squares(ensemble)?;
    let pair_sum = table.pair_sum();

    let l1_new = extremum(&l1_new_candidates(&table, priors), true);
    let q4 = extremum(&q4_candidates(&table, priors), false);
    let known_lower = known_lower_from(&table, priors, root_trace);
    let known_upper = known_upper_from(&table, priors, root_trace);

    let lower = LowerBounds {
        l1: known_lower.l1,
        l2: known_lower.l2,
        l2_clamped: known_lower.l2_clamped,
        l2_was_clamped: known_lower.l2_was_clamped,
        l3: known_lower.l3,
        l1_new: l1_new.value,
        l2_new: (1.0 + pair_sum / (rf - 1.0)) / rf,
    };
    let upper = UpperBounds {
        q2: known_upper.q2,
        q3: known_upper.q3,
        q4: q4.value,
        q5: known_upper.q5,
        q_new: (1.0 + pair_sum) / rf,
    };
    let bracket = Bracket {
        low: lower.named().iter().map(|p| p.1).fold(f64::MIN, f64::max),
        high: upper.named().iter().map(|p| p.1).fold(f64::MAX, f64::min),
    };

    let exact = if r == 2 {
        Some(ExactValue {
            value: 0.5 * (1.0 + table.trace_distances[0][1]),
            method: ExactMethod::Binary,
        })
    } else {
        match optimality::commuting_optimum(ensemble) {
            Ok((value, _)) => Some(ExactValue {
                value,
                method: ExactMethod::Commuting,
            }),
            Err(Error::NotCommuting) => None,
            Err(e) => return Err(e),
        }
    };

    let l1_alt = l1_new_via_trace_norms(&table, priors);
    let q4_alt = q4_via_trace_norms(&table, priors);
    let sufficient = pair_sum <= (rf - 1.0) * (rf - 1.0) / (rf + 1.0);
    let agree = |a: f64, b: f64| (a - b).abs() <= ORDER_TOL;
    let mut flags = vec![
        OrderingFlag::le(REL_L2NEW_LE_L1NEW, lower.l2_new, lower.l1_new),
        OrderingFlag::le(REL_L1NEW_LE_Q4, lower.l1_new, upper.q4),
        OrderingFlag::le(REL_Q4_LE_QNEW, upper.q4, upper.q_new),
        OrderingFlag::le(REL_QNEW_LE_Q2, upper.q_new, upper.q2),
        OrderingFlag::le(
            REL_Q2_LE_Q3_FORM,
            upper.q2,
            1.0 - (1.0 - upper.q3) / (rf - 1.0),
        ),
        OrderingFlag::le(REL_QNEW_LE_Q3_EQUIPROBABLE, upper.q_new, upper.q3)
            .when(ensemble.is_equiprobable()),
        OrderingFlag::le(REL_L1NEW_GE_L1, lower.l1, lower.l1_new),
        OrderingFlag::le(REL_L2NEW_GE_L2_SUFFICIENT, lower.l2, lower.l2_new).when(sufficient),
        OrderingFlag::le(REL_L2NEW_GE_L2_OTHERWISE, lower.l2, lower.l2_new)
            .when(!sufficient)
            .recorded(),
        OrderingFlag::le(REL_PAIR_SUM_LE_R_MINUS_1, pair_sum, rf - 1.0),
        OrderingFlag::holds(REL_L1NEW_FORMS_AGREE, agree(l1_new.value, l1_alt)),
        OrderingFlag::holds(REL_Q4_FORMS_AGREE, agree(q4.value, q4_alt)),
    ];
    if let Some(x) = exact {
        flags.push(OrderingFlag::holds(
            REL_EXACT_IN_BRACKET,
            bracket.contains(x.value, BRACKET_TOL),
        ));
    }

    Ok(BoundsReport {
        r,
        dim: ensemble.dim(),
        priors: priors.to_vec(),
        equiprobable: ensemble.is_equiprobable(),
        table,
        pair_sum,
        root_trace,
        lower,
        upper,
        bracket,
        exact,
        flags,
        ties: TieBreaks { l1_new, q4 },
        l1_new_via_trace_norms: l1_alt,
        q4_via_trace_norms: q4_alt,
    })
}
