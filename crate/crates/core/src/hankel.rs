//! Block Hankel matrices and Schur complements.
//!
//! Functions take plain moment slices so they apply equally to a sequence and to its
//! derived (shifted, transformed, reflected) sequences.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, pinv_floor, range_included, zeros, CMatrix};
use crate::sequence::MomentSequence;
use crate::tolerance::Tolerances;
use crate::verdict::Status;

fn block_size(s: &[CMatrix]) -> Result<usize> {
    s.first()
        .map(|x| x.nrows())
        .ok_or_else(|| Error::InvalidSequence("empty moment list".into()))
}

fn need(what: &'static str, index: usize, s: &[CMatrix]) -> Result<()> {
    if s.is_empty() || index > s.len() - 1 {
        Err(Error::IndexOutOfRange {
            what,
            index,
            max: s.len().saturating_sub(1),
        })
    } else {
        Ok(())
    }
}

/// `[s_{j+k+shift}]_{j,k=0..n}`; `shift` 0, 1, 2 give the H, K, G blocks.
pub fn block_hankel(s: &[CMatrix], n: usize, shift: usize) -> Result<CMatrix> {
    need("block_hankel", 2 * n + shift, s)?;
    let q = block_size(s)?;
    let mut out = zeros((n + 1) * q, (n + 1) * q);
    for j in 0..=n {
        for k in 0..=n {
            out.view_mut((j * q, k * q), (q, q))
                .copy_from(&s[j + k + shift]);
        }
    }
    Ok(out)
}

/// Column `y_{l,m} = [s_l; ...; s_m]`.
pub fn block_column(s: &[CMatrix], l: usize, m: usize) -> Result<CMatrix> {
    need("block_column", m, s)?;
    if l > m {
        return Err(Error::IndexOutOfRange {
            what: "block_column start",
            index: l,
            max: m,
        });
    }
    let q = block_size(s)?;
    let mut out = zeros((m - l + 1) * q, q);
    for (i, j) in (l..=m).enumerate() {
        out.view_mut((i * q, 0), (q, q)).copy_from(&s[j]);
    }
    Ok(out)
}

/// Row `z_{l,m} = [s_l, ..., s_m]`.
pub fn block_row(s: &[CMatrix], l: usize, m: usize) -> Result<CMatrix> {
    need("block_row", m, s)?;
    if l > m {
        return Err(Error::IndexOutOfRange {
            what: "block_row start",
            index: l,
            max: m,
        });
    }
    let q = block_size(s)?;
    let mut out = zeros(q, (m - l + 1) * q);
    for (i, j) in (l..=m).enumerate() {
        out.view_mut((0, i * q), (q, q)).copy_from(&s[j]);
    }
    Ok(out)
}

/// `Θ_n = z_{n,2n-1} H_{n-1}^+ y_{n,2n-1}`, zero for `n = 0`. Needs `s_0..s_{2n-1}`.
pub fn theta(s: &[CMatrix], n: usize, tol: &Tolerances) -> Result<CMatrix> {
    theta_floor(s, n, tol, 0.0)
}

/// [`theta`] with the pseudo-inverse cutoff taken relative to
/// `max(||H_{n-1}||_2, reference)`.
///
/// Derived sequences can be pure rounding noise (for instance the two-sided transform of
/// a point mass at an endpoint); `reference` should then be the size of the original
/// moments so that the noise is not inverted.
pub fn theta_floor(s: &[CMatrix], n: usize, tol: &Tolerances, reference: f64) -> Result<CMatrix> {
    let q = block_size(s)?;
    if n == 0 {
        return Ok(zeros(q, q));
    }
    need("theta", 2 * n - 1, s)?;
    let h = block_hankel(s, n - 1, 0)?;
    let hp = pinv_floor(&h, tol, reference);
    Ok(block_row(s, n, 2 * n - 1)? * hp * block_column(s, n, 2 * n - 1)?)
}

/// `M_n = z_{n,2n-1} H_{n-1}^+ y_{n+1,2n}`, zero for `n = 0`. Needs `s_0..s_{2n}`.
pub fn m_term(s: &[CMatrix], n: usize, tol: &Tolerances) -> Result<CMatrix> {
    m_term_floor(s, n, tol, 0.0)
}

pub fn m_term_floor(s: &[CMatrix], n: usize, tol: &Tolerances, reference: f64) -> Result<CMatrix> {
    let q = block_size(s)?;
    if n == 0 {
        return Ok(zeros(q, q));
    }
    need("m_term", 2 * n, s)?;
    let h = block_hankel(s, n - 1, 0)?;
    let hp = pinv_floor(&h, tol, reference);
    Ok(block_row(s, n, 2 * n - 1)? * hp * block_column(s, n + 1, 2 * n)?)
}

/// Schur complement `L_n = s_{2n} - Θ_n`. Needs `s_0..s_{2n}`.
pub fn schur_complement(s: &[CMatrix], n: usize, tol: &Tolerances) -> Result<CMatrix> {
    schur_complement_floor(s, n, tol, 0.0)
}

pub fn schur_complement_floor(
    s: &[CMatrix],
    n: usize,
    tol: &Tolerances,
    reference: f64,
) -> Result<CMatrix> {
    need("schur_complement", 2 * n, s)?;
    Ok(&s[2 * n] - theta_floor(s, n, tol, reference)?)
}

/// Hankel blocks of order `n` for one sequence.
#[derive(Debug, Clone)]
pub struct HankelView {
    pub n: usize,
    pub h: CMatrix,
    pub k: Option<CMatrix>,
    pub g: Option<CMatrix>,
    moments: Vec<CMatrix>,
}

impl HankelView {
    pub fn y(&self, l: usize, m: usize) -> Result<CMatrix> {
        block_column(&self.moments, l, m)
    }

    pub fn z(&self, l: usize, m: usize) -> Result<CMatrix> {
        block_row(&self.moments, l, m)
    }
}

pub fn build_hankel(seq: &MomentSequence, n: usize) -> Result<HankelView> {
    let s = seq.moments();
    Ok(HankelView {
        n,
        h: block_hankel(s, n, 0)?,
        k: block_hankel(s, n, 1).ok(),
        g: block_hankel(s, n, 2).ok(),
        moments: s.to_vec(),
    })
}

/// `Θ_n`, `L_n`, `M_n` for `n = 0..=upto_n`.
#[derive(Debug, Clone)]
pub struct SchurChain {
    pub theta: Vec<CMatrix>,
    pub l: Vec<CMatrix>,
    pub m: Vec<CMatrix>,
    /// Orders `n` where `R(y_{n,2n-1}) ⊆ R(H_{n-1})` fails numerically; `Θ_n` there
    /// depends on the pseudo-inverse choice.
    pub range_warnings: Vec<usize>,
}

impl SchurChain {
    pub fn from_moments(s: &[CMatrix], upto_n: usize, tol: &Tolerances) -> Result<Self> {
        need("schur_chain", 2 * upto_n, s)?;
        let mut chain = SchurChain {
            theta: Vec::with_capacity(upto_n + 1),
            l: Vec::with_capacity(upto_n + 1),
            m: Vec::with_capacity(upto_n + 1),
            range_warnings: Vec::new(),
        };
        for n in 0..=upto_n {
            let th = theta(s, n, tol)?;
            chain.l.push(&s[2 * n] - &th);
            chain.theta.push(th);
            chain.m.push(m_term(s, n, tol)?);
            if n >= 1 {
                let y = block_column(s, n, 2 * n - 1)?;
                let h = block_hankel(s, n - 1, 0)?;
                if range_included(&y, &h, tol)?.status == Status::Outside {
                    chain.range_warnings.push(n);
                }
            }
        }
        Ok(chain)
    }
}

pub fn schur_chain(seq: &MomentSequence, upto_n: usize) -> Result<SchurChain> {
    SchurChain::from_moments(seq.moments(), upto_n, seq.tol())
}

/// Sign matrix `J` and the shift embeddings `Δ = [I; 0]`, `∇ = [0; I]` of order `n`.
#[derive(Debug, Clone)]
pub struct StructuralMatrices {
    /// `diag((-1)^j I_q)`, size `(n+1)q`.
    pub j: CMatrix,
    /// `(n+1)q x nq`.
    pub delta: CMatrix,
    /// `(n+1)q x nq`.
    pub nabla: CMatrix,
}

pub fn structural(q: usize, n: usize) -> StructuralMatrices {
    let size = (n + 1) * q;
    let j = CMatrix::from_fn(size, size, |r, c| {
        if r == c {
            let sign = if (r / q).is_multiple_of(2) { 1.0 } else { -1.0 };
            Complex64::new(sign, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut delta = zeros(size, n * q);
    let mut nabla = zeros(size, n * q);
    let eye = matrix::identity(n * q);
    if n > 0 {
        delta.view_mut((0, 0), (n * q, n * q)).copy_from(&eye);
        nabla.view_mut((q, 0), (n * q, n * q)).copy_from(&eye);
    }
    StructuralMatrices { j, delta, nabla }
}
