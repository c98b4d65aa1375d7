use crate::error::{Error, Result};
use crate::matrix::{self, norm2, CMatrix};
use crate::tolerance::Tolerances;

/// A finite sequence `s_0, ..., s_m` of `q x q` complex matrices attached to `[alpha, beta]`.
///
/// The constructor checks shapes, finiteness and `alpha < beta`; it does not check
/// Hermitian-ness, which is a class property.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    q: usize,
    alpha: f64,
    beta: f64,
    moments: Vec<CMatrix>,
    tol: Tolerances,
}

impl MomentSequence {
    pub fn new(alpha: f64, beta: f64, moments: Vec<CMatrix>, tol: Tolerances) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidSequence(
                "interval bounds must be finite".into(),
            ));
        }
        if alpha >= beta {
            return Err(Error::InvalidSequence(format!(
                "need alpha < beta, got [{alpha}, {beta}]"
            )));
        }
        tol.validate()?;
        let first = moments
            .first()
            .ok_or_else(|| Error::InvalidSequence("empty moment list".into()))?;
        let q = first.nrows();
        if q == 0 {
            return Err(Error::InvalidSequence("q must be at least 1".into()));
        }
        for (j, s) in moments.iter().enumerate() {
            if s.shape() != (q, q) {
                return Err(Error::InvalidSequence(format!(
                    "moment {j} has shape {:?}, expected ({q}, {q})",
                    s.shape()
                )));
            }
            if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidSequence(format!(
                    "moment {j} has non-finite entries"
                )));
            }
        }
        Ok(Self {
            q,
            alpha,
            beta,
            moments,
            tol,
        })
    }

    /// Scalar sequence with default tolerances.
    pub fn scalar(alpha: f64, beta: f64, values: &[f64]) -> Result<Self> {
        Self::new(
            alpha,
            beta,
            values.iter().map(|&x| matrix::scalar(x)).collect(),
            Tolerances::default(),
        )
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn width(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn tol(&self) -> &Tolerances {
        &self.tol
    }

    pub fn moments(&self) -> &[CMatrix] {
        &self.moments
    }

    /// Highest index `m`.
    pub fn m(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn get(&self, j: usize) -> &CMatrix {
        &self.moments[j]
    }

    /// `s_0, ..., s_l`.
    pub fn prefix(&self, l: usize) -> Result<Self> {
        if l > self.m() {
            return Err(Error::IndexOutOfRange {
                what: "prefix",
                index: l,
                max: self.m(),
            });
        }
        Ok(Self {
            moments: self.moments[..=l].to_vec(),
            ..self.clone()
        })
    }

    /// Same interval and tolerances, new moments.
    pub fn with_moments(&self, moments: Vec<CMatrix>) -> Result<Self> {
        Self::new(self.alpha, self.beta, moments, self.tol)
    }

    /// Appends `s_{m+1}`.
    pub fn pushed(&self, next: CMatrix) -> Result<Self> {
        let mut moments = self.moments.clone();
        moments.push(next);
        self.with_moments(moments)
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Result<Self> {
        tol.validate()?;
        self.tol = tol;
        Ok(self)
    }

    /// Largest moment norm, the reference magnitude for rank decisions on derived
    /// quantities.
    pub fn magnitude(&self) -> f64 {
        self.moments.iter().map(norm2).fold(0.0, f64::max)
    }

    /// Reference used for floor-based rank decisions on differences of moments.
    pub fn rank_reference(&self) -> f64 {
        self.magnitude()
    }
}
