use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every test in the crate.
///
/// `rtol_rank` is a per-dimension factor: the effective relative rank cutoff for an
/// `r x c` matrix is `rtol_rank * max(r, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub tol_herm: f64,
    pub tol_psd: f64,
    pub rtol_rank: f64,
    pub tol_range: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_herm: 1e-10,
            tol_psd: 1e-9,
            rtol_rank: 1e-10,
            tol_range: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("tol_herm", self.tol_herm),
            ("tol_psd", self.tol_psd),
            ("rtol_rank", self.rtol_rank),
            ("tol_range", self.tol_range),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    pub fn rank_cutoff(&self, rows: usize, cols: usize) -> f64 {
        self.rtol_rank * rows.max(cols).max(1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        let t = Tolerances {
            tol_psd: 0.0,
            ..Default::default()
        };
        assert!(t.validate().is_err());
        let t = Tolerances {
            tol_range: 1.5,
            ..Default::default()
        };
        assert!(t.validate().is_err());
        let t = Tolerances {
            tol_herm: f64::NAN,
            ..Default::default()
        };
        assert!(t.validate().is_err());
    }
}
