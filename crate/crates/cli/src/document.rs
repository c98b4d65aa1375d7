//! JSON sequence documents. Complex entries are `[re, im]` pairs, matrices are row-major
//! nested arrays.

use hmom_core::{CMatrix, MomentSequence, Tolerances};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

/// Tolerance fields a document or the environment may override.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_herm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_psd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtol_rank: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_range: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, mut tol: Tolerances) -> Tolerances {
        if let Some(x) = self.tol_herm {
            tol.tol_herm = x;
        }
        if let Some(x) = self.tol_psd {
            tol.tol_psd = x;
        }
        if let Some(x) = self.rtol_rank {
            tol.rtol_rank = x;
        }
        if let Some(x) = self.tol_range {
            tol.tol_range = x;
        }
        tol
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDocument {
    pub q: usize,
    pub alpha: f64,
    pub beta: f64,
    pub moments: Vec<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

pub fn matrix_from_json(m: &JsonMatrix, q: usize, what: &str) -> Result<CMatrix, String> {
    if m.len() != q || m.iter().any(|row| row.len() != q) {
        return Err(format!("{what} must be a {q}x{q} array of [re, im] pairs"));
    }
    let mut out = CMatrix::zeros(q, q);
    for (i, row) in m.iter().enumerate() {
        for (k, [a, b]) in row.iter().enumerate() {
            if !a.is_finite() || !b.is_finite() {
                return Err(format!("{what} has a non-finite entry at ({i}, {k})"));
            }
            out[(i, k)] = Complex64::new(*a, *b);
        }
    }
    Ok(out)
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|k| [m[(i, k)].re, m[(i, k)].im])
                .collect()
        })
        .collect()
}

/// Parses a bare `q x q` matrix, as used by `--k-file`.
pub fn parse_matrix(text: &str, q: usize, what: &str) -> Result<CMatrix, String> {
    let m: JsonMatrix = serde_json::from_str(text).map_err(|e| format!("{what}: {e}"))?;
    matrix_from_json(&m, q, what)
}

impl SequenceDocument {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid sequence document: {e}"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents hold finite numbers");
        s.push('\n');
        s
    }

    pub fn from_sequence(seq: &MomentSequence, tolerances: Option<ToleranceOverrides>) -> Self {
        Self {
            q: seq.q(),
            alpha: seq.alpha(),
            beta: seq.beta(),
            moments: seq.moments().iter().map(matrix_to_json).collect(),
            tolerances: tolerances.filter(|t| !t.is_empty()),
        }
    }

    /// Builds the sequence with tolerances `tol`, which the caller has already resolved.
    pub fn to_sequence(&self, tol: Tolerances) -> Result<MomentSequence, String> {
        if self.q == 0 {
            return Err("q must be at least 1".into());
        }
        if self.moments.is_empty() {
            return Err("moments must not be empty".into());
        }
        let moments = self
            .moments
            .iter()
            .enumerate()
            .map(|(j, m)| matrix_from_json(m, self.q, &format!("moment {j}")))
            .collect::<Result<Vec<_>, _>>()?;
        MomentSequence::new(self.alpha, self.beta, moments, tol).map_err(|e| e.to_string())
    }
}
