//! Numerical tolerances shared by every module.

/// Eigenvalues at or below this value count as non-positive when splitting an
/// operator into positive and negative parts.
pub const ZERO_TOL: f64 = 1e-10;
/// Relative bound on `max|A - A^dagger|` accepted as Hermitian.
pub const HERM_TOL: f64 = 1e-9;
/// Most negative eigenvalue tolerated for a positive semidefinite operator.
pub const PSD_TOL: f64 = 1e-9;
/// Reconstruction tolerance for spectral decompositions and identities.
pub const RECON_TOL: f64 = 1e-8;
/// Allowed overshoot of fidelity above 1.
pub const FID_TOL: f64 = 1e-9;
/// Allowed deviation of a trace or prior sum from 1.
pub const TRACE_TOL: f64 = 1e-9;
/// Allowed deviation of `sum(effects)` from the identity.
pub const COMPLETENESS_TOL: f64 = 1e-8;
/// Largest commutator entry for two states to count as commuting.
pub const COMMUTE_TOL: f64 = 1e-8;
/// Largest off-diagonal entry after rotating into a candidate common eigenbasis.
pub const DIAGONAL_TOL: f64 = 1e-7;
/// Default residual tolerance for the Holevo optimality conditions.
pub const CERT_TOL: f64 = 1e-7;
/// Priors within this distance of `1/r` count as equiprobable.
pub const EQUIPROBABLE_TOL: f64 = 1e-12;
/// Slack used when recording ordering relations between bounds.
pub const ORDER_TOL: f64 = 1e-9;
/// Slack for an exact optimum against the analytical bracket.
pub const BRACKET_TOL: f64 = 1e-8;

/// Snapshot of the tolerance set, for reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSet {
    pub zero: f64,
    pub hermitian: f64,
    pub psd: f64,
    pub reconstruction: f64,
    pub fidelity: f64,
    pub commute: f64,
    pub certificate: f64,
    pub equiprobable: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            zero: ZERO_TOL,
            hermitian: HERM_TOL,
            psd: PSD_TOL,
            reconstruction: RECON_TOL,
            fidelity: FID_TOL,
            commute: COMMUTE_TOL,
            certificate: CERT_TOL,
            equiprobable: EQUIPROBABLE_TOL,
        }
    }
}
