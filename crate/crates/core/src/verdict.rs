use std::fmt;

use serde::{Deserialize, Serialize};

/// Tri-state outcome of a tolerance-based test.
///
/// Ordered so that `Outside < Boundary < Inside`; conjunction takes the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Outside,
    Boundary,
    Inside,
}

impl Status {
    /// Inside or on the boundary.
    pub fn holds(self) -> bool {
        self != Status::Outside
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Outside => "outside",
            Status::Boundary => "boundary",
            Status::Inside => "inside",
        }
    }

    /// Classify a signed margin against a symmetric threshold.
    pub fn classify(margin: f64, threshold: f64) -> Status {
        if margin < -threshold {
            Status::Outside
        } else if margin <= threshold {
            Status::Boundary
        } else {
            Status::Inside
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of a single class or matrix test.
///
/// `witness_eig` is the smallest eigenvalue of the deciding matrix for eigenvalue tests,
/// and the negated residual for range or Hermitian-ness tests. `scale` is the normalising
/// factor `max(1, ||A||_2)` the threshold was multiplied with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub status: Status,
    pub witness_eig: f64,
    pub scale: f64,
    pub detail: String,
    pub failing_index: Option<usize>,
}

impl ClassVerdict {
    pub fn new(status: Status, witness_eig: f64, scale: f64, detail: impl Into<String>) -> Self {
        Self {
            status,
            witness_eig,
            scale,
            detail: detail.into(),
            failing_index: None,
        }
    }

    /// A condition that holds trivially (empty block, order zero).
    pub fn vacuous(detail: impl Into<String>) -> Self {
        Self::new(Status::Inside, 0.0, 1.0, detail)
    }

    pub fn at(mut self, index: usize) -> Self {
        self.failing_index = Some(index);
        self
    }

    pub fn labelled(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    /// Witness divided by its scale; comparable across tests.
    pub fn margin(&self) -> f64 {
        self.witness_eig / self.scale
    }

    /// Tri-state conjunction: the weaker status wins, ties go to the smaller margin.
    pub fn and(self, other: ClassVerdict) -> ClassVerdict {
        match self.status.cmp(&other.status) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                if other.margin() < self.margin() {
                    other
                } else {
                    self
                }
            }
        }
    }

    pub fn all(verdicts: impl IntoIterator<Item = ClassVerdict>) -> Option<ClassVerdict> {
        verdicts.into_iter().reduce(ClassVerdict::and)
    }
}
