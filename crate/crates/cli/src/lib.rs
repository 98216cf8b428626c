//! Command-line front end for `qsd-core`: file formats, reports,
//! certification, the built-in example and random sweeps.

pub mod commands;
pub mod error;
pub mod example;
pub mod format;
pub mod render;
pub mod report;
pub mod sweep;

use qsd_core::tolerance::CERT_TOL;

use crate::error::{CliError, Result};

/// Environment variable overriding the certificate tolerance.
pub const TOL_ENV: &str = "QSD_TOL";

/// Certificate tolerance: `QSD_TOL` when set, otherwise `1e-7`.
pub fn cert_tol() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(text) => parse_tol(&text),
        Err(_) => Ok(CERT_TOL),
    }
}

fn parse_tol(text: &str) -> Result<f64> {
    let tol: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("{TOL_ENV}={text:?} is not a number")))?;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(CliError::Invalid(format!(
            "{TOL_ENV} must be positive and finite, got {tol}"
        )));
    }
    Ok(tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_override() {
        assert_eq!(parse_tol("1e-5").unwrap(), 1e-5);
        assert!(matches!(parse_tol("abc"), Err(CliError::Parse(_))));
        assert!(matches!(parse_tol("-1"), Err(CliError::Invalid(_))));
    }
}
