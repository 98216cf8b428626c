//! Deterministic pseudorandom states, ensembles and POVMs.
//!
//! Every draw comes from a SplitMix64 stream keyed by `(seed, stream index)`:
//!
//! ```text
//! state_0     = seed ^ mix(index * 0x9E3779B97F4A7C15 + 0xD1B54A32D192ED03)
//! state_{k+1} = state_k + 0x9E3779B97F4A7C15            (wrapping)
//! output_k    = mix(state_{k+1})
//! mix(z)      = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!               z ^= z >> 27; z *= 0x94D049BB133111EB; z ^ (z >> 31)
//! ```
//!
//! Uniform doubles take the top 53 bits; Gaussians use Box-Muller on
//! consecutive uniforms with `libm` transcendental functions, so the output is
//! reproducible bit for bit across platforms.
//!
//! Stream indices: state `i` of an ensemble uses index `i`; priors use
//! [`PRIOR_STREAM`]; the shared eigenbasis of a commuting ensemble uses
//! [`BASIS_STREAM`]; POVM draws start at [`POVM_STREAM`].

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ensemble::{DensityMatrix, Ensemble};
use crate::error::{Error, Result};
use crate::operator::{hermitian_eig, CMatrix, HermitianOperator};
use crate::povm::Povm;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const STREAM_SALT: u64 = 0xD1B5_4A32_D192_ED03;

pub const PRIOR_STREAM: u64 = 1 << 32;
pub const BASIS_STREAM: u64 = (1 << 32) + 1;
pub const POVM_STREAM: u64 = 1 << 40;

/// Smallest prior kept by random-simplex sampling before renormalization.
pub const MIN_RANDOM_PRIOR: f64 = 1e-3;

const POVM_ATTEMPTS: u64 = 3;
const NORMALIZER_COND: f64 = 1e-12;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(state: u64) -> Self {
        Self { state }
    }

    /// Independent stream `index` derived from `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::new(seed ^ mix(index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(STREAM_SALT)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`.
    fn next_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Pair of independent standard normals.
    pub fn next_gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.next_open_f64();
        let u2 = self.next_f64();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        (radius * libm::cos(theta), radius * libm::sin(theta))
    }

    /// Complex normal with independent standard real and imaginary parts.
    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        let (re, im) = self.next_gaussian_pair();
        Complex64::new(re, im)
    }

    /// Standard exponential variate.
    pub fn next_exponential(&mut self) -> f64 {
        -libm::log(self.next_open_f64())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purity {
    Pure,
    Mixed,
    /// Random spectra on one shared random eigenbasis.
    Commuting,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PriorMode {
    Uniform,
    /// Normalized exponentials, floored at [`MIN_RANDOM_PRIOR`].
    RandomSimplex,
    Fixed(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub seed: u64,
    pub dim: usize,
    pub r: usize,
    pub purity: Purity,
    pub priors: PriorMode,
}

fn ginibre(rng: &mut SplitMix64, dim: usize) -> CMatrix {
    // row-major fill so the draw order does not depend on nalgebra's storage
    let entries: Vec<Complex64> = (0..dim * dim)
        .map(|_| rng.next_complex_gaussian())
        .collect();
    DMatrix::from_row_slice(dim, dim, &entries)
}

fn normalized_psd(matrix: CMatrix) -> DensityMatrix {
    let op = HermitianOperator::symmetrized(matrix);
    let trace = op.trace();
    DensityMatrix::new(op.scale(1.0 / trace)).expect("Gram matrix is a valid state")
}

/// Haar-distributed direction `|psi><psi|` drawn from stream `index`.
pub fn random_pure_state(spec: &RandomSpec, index: u64) -> DensityMatrix {
    let mut rng = SplitMix64::stream(spec.seed, index);
    let v: Vec<Complex64> = (0..spec.dim).map(|_| rng.next_complex_gaussian()).collect();
    let op = HermitianOperator::projector_onto(&v);
    let trace = op.trace();
    DensityMatrix::new(op.scale(1.0 / trace)).expect("projector is a valid state")
}

/// Ginibre state `G G^dagger / tr(G G^dagger)` drawn from stream `index`.
pub fn random_mixed_state(spec: &RandomSpec, index: u64) -> DensityMatrix {
    let mut rng = SplitMix64::stream(spec.seed, index);
    let g = ginibre(&mut rng, spec.dim);
    let gram = &g * g.adjoint();
    normalized_psd(gram)
}

/// Haar-random unitary by Gram-Schmidt on complex Gaussian columns.
pub fn random_unitary(rng: &mut SplitMix64, dim: usize) -> CMatrix {
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| rng.next_complex_gaussian()).collect();
        for _ in 0..2 {
            for u in &columns {
                let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vk, uk) in v.iter_mut().zip(u) {
                    *vk -= overlap * uk;
                }
            }
        }
        let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm < 1e-8 {
            continue;
        }
        columns.push(v.into_iter().map(|z| z / norm).collect());
    }
    CMatrix::from_fn(dim, dim, |row, col| columns[col][row])
}

fn priors_for(spec: &RandomSpec) -> Vec<f64> {
    match &spec.priors {
        PriorMode::Uniform => alloc::vec![1.0 / spec.r as f64; spec.r],
        PriorMode::Fixed(list) => list.clone(),
        PriorMode::RandomSimplex => {
            let mut rng = SplitMix64::stream(spec.seed, PRIOR_STREAM);
            let raw: Vec<f64> = (0..spec.r).map(|_| rng.next_exponential()).collect();
            let total: f64 = raw.iter().sum();
            let clipped: Vec<f64> = raw
                .iter()
                .map(|w| f64::max(w / total, MIN_RANDOM_PRIOR))
                .collect();
            let total: f64 = clipped.iter().sum();
            clipped.into_iter().map(|q| q / total).collect()
        }
    }
}

pub fn random_ensemble(spec: &RandomSpec) -> Result<Ensemble> {
    let states: Vec<DensityMatrix> = match spec.purity {
        Purity::Pure => (0..spec.r as u64)
            .map(|i| random_pure_state(spec, i))
            .collect(),
        Purity::Mixed => (0..spec.r as u64)
            .map(|i| random_mixed_state(spec, i))
            .collect(),
        Purity::Commuting => {
            let mut basis_rng = SplitMix64::stream(spec.seed, BASIS_STREAM);
            let unitary = random_unitary(&mut basis_rng, spec.dim);
            (0..spec.r as u64)
                .map(|i| {
                    let mut rng = SplitMix64::stream(spec.seed, i);
                    let spectrum: Vec<f64> =
                        (0..spec.dim).map(|_| rng.next_exponential()).collect();
                    let total: f64 = spectrum.iter().sum();
                    let spectrum: Vec<f64> = spectrum.iter().map(|l| l / total).collect();
                    let d = HermitianOperator::from_real_diagonal(&spectrum);
                    normalized_psd(&unitary * d.matrix() * unitary.adjoint())
                })
                .collect()
        }
    };
    Ensemble::new(priors_for(spec), states)
}

/// `{S^(-1/2) A_k S^(-1/2)}` for Ginibre-PSD `A_k` and `S = sum_k A_k`.
pub fn random_povm(spec: &RandomSpec, arity: usize) -> Result<Povm> {
    for attempt in 0..POVM_ATTEMPTS {
        let base = POVM_STREAM + (attempt << 20);
        let parts: Vec<CMatrix> = (0..arity as u64)
            .map(|k| {
                let mut rng = SplitMix64::stream(spec.seed, base + k);
                let g = ginibre(&mut rng, spec.dim);
                &g * g.adjoint()
            })
            .collect();
        let mut total = CMatrix::zeros(spec.dim, spec.dim);
        for a in &parts {
            total += a;
        }
        let eig = hermitian_eig(&HermitianOperator::symmetrized(total))?;
        let largest = eig.eigenvalues[spec.dim - 1];
        if eig.eigenvalues[0] <= NORMALIZER_COND * largest {
            continue;
        }
        let inv_sqrt = eig.map(|l| 1.0 / libm::sqrt(l)).into_matrix();
        let effects: Vec<HermitianOperator> = parts
            .iter()
            .map(|a| HermitianOperator::symmetrized(&inv_sqrt * a * &inv_sqrt))
            .collect();
        return Povm::new(effects);
    }
    Err(Error::SingularNormalizer)
}
