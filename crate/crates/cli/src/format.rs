//! JSON ensemble and POVM files.
//!
//! ```json
//! { "dim": 2,
//!   "states": [ [[0.875, 0], [0, 0.125]], [[0.5, [0, -0.5]], [[0, 0.5], 0.5]] ],
//!   "priors": ["1/3", "2/3"] }
//! ```
//!
//! A matrix is an array of rows; an entry is a real number, a string holding
//! an exact decimal or fraction, or an `[re, im]` pair. Commuting families can
//! use `"diagonal": [[l_0, l_1, ...], ...]` instead of `"states"`.

use std::fs;
use std::path::Path;

use qsd_core::{CMatrix, Complex64, Ensemble, Povm};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// A real given either as a JSON number or as a string such as `"1/3"` or `"0.125"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Number(f64),
    Text(String),
}

impl Real {
    pub fn value(&self) -> Result<f64> {
        match self {
            Real::Number(x) => Ok(*x),
            Real::Text(s) => parse_exact(s),
        }
    }
}

/// Parse a decimal or a fraction `a/b` of decimals, converting to `f64` once.
pub fn parse_exact(text: &str) -> Result<f64> {
    let text = text.trim();
    let bad = || CliError::Parse(format!("not a number or fraction: {text:?}"));
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(CliError::Parse(format!("zero denominator in {text:?}")));
            }
            num / den
        }
        None => text.parse().map_err(|_| bad())?,
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(Real),
    Complex([Real; 2]),
}

impl Entry {
    fn value(&self) -> Result<Complex64> {
        match self {
            Entry::Real(x) => Ok(Complex64::new(x.value()?, 0.0)),
            Entry::Complex([re, im]) => Ok(Complex64::new(re.value()?, im.value()?)),
        }
    }

    fn from_complex(z: Complex64) -> Self {
        if z.im == 0.0 {
            Entry::Real(Real::Number(z.re))
        } else {
            Entry::Complex([Real::Number(z.re), Real::Number(z.im)])
        }
    }
}

pub type MatrixJson = Vec<Vec<Entry>>;

fn to_matrix(rows: &MatrixJson, dim: usize, what: &str) -> Result<CMatrix> {
    if rows.len() != dim || rows.iter().any(|row| row.len() != dim) {
        return Err(CliError::Invalid(format!("{what} is not {dim}x{dim}")));
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            m[(i, j)] = entry.value()?;
        }
    }
    Ok(m)
}

pub fn from_matrix(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| Entry::from_complex(m[(i, j)]))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<Vec<Real>>>,
    pub priors: Vec<Real>,
}

impl EnsembleFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        match (&file.states, &file.diagonal) {
            (Some(_), Some(_)) => Err(CliError::Parse(
                "give either \"states\" or \"diagonal\", not both".into(),
            )),
            (None, None) => Err(CliError::Parse("missing \"states\" or \"diagonal\"".into())),
            _ => Ok(file),
        }
    }

    pub fn to_ensemble(&self) -> Result<Ensemble> {
        let matrices: Vec<CMatrix> = match (&self.states, &self.diagonal) {
            (Some(states), _) => states
                .iter()
                .enumerate()
                .map(|(i, s)| to_matrix(s, self.dim, &format!("state {i}")))
                .collect::<Result<_>>()?,
            (None, Some(diagonals)) => diagonals
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    if d.len() != self.dim {
                        return Err(CliError::Invalid(format!(
                            "diagonal {i} has {} entries, expected {}",
                            d.len(),
                            self.dim
                        )));
                    }
                    let mut m = CMatrix::zeros(self.dim, self.dim);
                    for (k, x) in d.iter().enumerate() {
                        m[(k, k)] = Complex64::new(x.value()?, 0.0);
                    }
                    Ok(m)
                })
                .collect::<Result<_>>()?,
            (None, None) => return Err(CliError::Parse("no states".into())),
        };
        if matrices.len() != self.priors.len() {
            return Err(CliError::Invalid(format!(
                "{} states but {} priors",
                matrices.len(),
                self.priors.len()
            )));
        }
        let priors = self
            .priors
            .iter()
            .map(Real::value)
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble::validate(
            priors.into_iter().zip(matrices).collect(),
        )?)
    }

    pub fn from_ensemble(ensemble: &Ensemble) -> Self {
        Self {
            dim: ensemble.dim(),
            states: Some(
                ensemble
                    .states()
                    .iter()
                    .map(|s| from_matrix(s.operator().matrix()))
                    .collect(),
            ),
            diagonal: None,
            priors: ensemble.priors().iter().map(|&q| Real::Number(q)).collect(),
        }
    }
}

/// Where a written POVM came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub j: usize,
    pub achieved_success: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmFile {
    pub dim: usize,
    pub effects: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<Construction>,
}

impl PovmFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_povm(&self) -> Result<Povm> {
        let matrices = self
            .effects
            .iter()
            .enumerate()
            .map(|(i, m)| to_matrix(m, self.dim, &format!("effect {i}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Povm::from_matrices(matrices)?)
    }

    pub fn from_povm(povm: &Povm, construction: Option<Construction>) -> Self {
        Self {
            dim: povm.dim(),
            effects: povm
                .effects()
                .iter()
                .map(|e| from_matrix(e.matrix()))
                .collect(),
            construction,
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_ensemble(path: &Path) -> Result<(Ensemble, String)> {
    let text = read_text(path)?;
    let ensemble = EnsembleFile::parse(&text)?.to_ensemble()?;
    Ok((ensemble, text))
}

pub fn load_povm(path: &Path) -> Result<Povm> {
    PovmFile::parse(&read_text(path)?)?.to_povm()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "dim": 2,
        "diagonal": [["7/8", "1/8"], ["5/8", "3/8"], [0.75, 0.25]],
        "priors": ["1/3", "1/3", "1/3"]
    }"#;

    #[test]
    fn fractions_and_decimals() {
        assert_eq!(parse_exact("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_exact(" 0.125 ").unwrap(), 0.125);
        assert_eq!(parse_exact("-7/8").unwrap(), -0.875);
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("one").is_err());
        assert!(parse_exact("inf").is_err());
    }

    #[test]
    fn diagonal_shorthand() {
        let e = EnsembleFile::parse(EXAMPLE).unwrap().to_ensemble().unwrap();
        assert_eq!(e.len(), 3);
        assert!(e.is_equiprobable());
        assert_eq!(e.states()[0].operator().matrix()[(0, 0)].re, 0.875);
    }

    #[test]
    fn complex_entries() {
        let text = r#"{"dim": 2,
            "states": [[[0.5, [0, -0.5]], [[0, 0.5], 0.5]], [[1, 0], [0, 0]]],
            "priors": [0.5, "1/2"]}"#;
        let e = EnsembleFile::parse(text).unwrap().to_ensemble().unwrap();
        assert_eq!(
            e.states()[0].operator().matrix()[(0, 1)],
            Complex64::new(0.0, -0.5)
        );
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(EnsembleFile::parse("{"), Err(CliError::Parse(_))));
        assert!(matches!(
            EnsembleFile::parse(r#"{"dim": 2, "priors": [1]}"#),
            Err(CliError::Parse(_))
        ));
        let wrong_dim = r#"{"dim": 3, "diagonal": [[1, 0], [0, 1]], "priors": [0.5, 0.5]}"#;
        assert!(matches!(
            EnsembleFile::parse(wrong_dim).unwrap().to_ensemble(),
            Err(CliError::Invalid(_))
        ));
        let unnormalized = r#"{"dim": 2, "diagonal": [[1, 0], [0, 1]], "priors": [0.5, 0.6]}"#;
        assert!(matches!(
            EnsembleFile::parse(unnormalized).unwrap().to_ensemble(),
            Err(CliError::Invalid(_))
        ));
    }

    #[test]
    fn povm_round_trip() {
        let text = r#"{"dim": 2, "effects": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}"#;
        let povm = PovmFile::parse(text).unwrap().to_povm().unwrap();
        let again = PovmFile::from_povm(&povm, None);
        assert_eq!(again.to_povm().unwrap(), povm);
        let bad = r#"{"dim": 2, "effects": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]}"#;
        assert!(matches!(
            PovmFile::parse(bad).unwrap().to_povm(),
            Err(CliError::Invalid(_))
        ));
    }
}
