//! The matricial interval `[a_j, b_j]` of admissible next moments.
//!
//! `a_j`, `b_j` are computed from Schur data of the sequence and its transforms; the
//! midpoint `c_j`, length `d_j` and the lower/upper gaps `u_j = s_j - a_{j-1}`,
//! `o_j = b_{j-1} - s_j` follow from them.

use num_complex::Complex64;
use serde::Serialize;

use crate::classes::{ab_transform, alpha_transform, beta_transform, is_f_nnd};
use crate::error::{Error, Result};
use crate::hankel::theta_floor;
use crate::matrix::{
    herm_deviation, hermitian_part, loewner_leq, norm2, parallel_sum_floor, pinv_floor, zeros,
    CMatrix,
};
use crate::sequence::MomentSequence;
use crate::tolerance::Tolerances;
use crate::verdict::{ClassVerdict, Status};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn theta_or_zero(
    s: &[CMatrix],
    n: usize,
    q: usize,
    tol: &Tolerances,
    reference: f64,
) -> Result<CMatrix> {
    if n == 0 {
        Ok(zeros(q, q))
    } else {
        theta_floor(s, n, tol, reference)
    }
}

/// Lower and upper endpoints `(a_j, b_j)` built from `s_0, ..., s_j`, returned as
/// Hermitian parts.
pub fn endpoint_pair(
    s: &[CMatrix],
    alpha: f64,
    beta: f64,
    j: usize,
    tol: &Tolerances,
) -> Result<(CMatrix, CMatrix)> {
    if j >= s.len() {
        return Err(Error::IndexOutOfRange {
            what: "endpoint index",
            index: j,
            max: s.len().saturating_sub(1),
        });
    }
    let q = s[0].nrows();
    let p = &s[..=j];
    let reference = p.iter().map(norm2).fold(0.0, f64::max);
    if j.is_multiple_of(2) {
        let k = j / 2;
        let ta = theta_or_zero(&alpha_transform(p, alpha), k, q, tol, reference)?;
        let tb = theta_or_zero(&beta_transform(p, beta), k, q, tol, reference)?;
        let (a, b) = (&s[j] * re(alpha) + ta, &s[j] * re(beta) - tb);
        Ok((hermitian_part(&a), hermitian_part(&b)))
    } else {
        let k = (j - 1) / 2;
        let a = theta_floor(p, k + 1, tol, reference)?;
        let tab = theta_or_zero(&ab_transform(p, alpha, beta), k, q, tol, reference)?;
        let b = &s[2 * k] * re(-alpha * beta) + &s[2 * k + 1] * re(alpha + beta) - tab;
        Ok((hermitian_part(&a), hermitian_part(&b)))
    }
}

/// Endpoint data for one index `j`.
#[derive(Debug, Clone)]
pub struct SectionInterval {
    pub index: usize,
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    /// `s_j - a_{j-1}` (`s_0` for `j = 0`).
    pub u: CMatrix,
    /// `b_{j-1} - s_j`, absent for `j = 0`.
    pub o: Option<CMatrix>,
    /// False when `s_0..s_j` is not in the nonnegative Hausdorff class.
    pub reliable: bool,
}

/// Endpoints for every index `0..=m`.
#[derive(Debug, Clone)]
pub struct IntervalTable {
    pub a: Vec<CMatrix>,
    pub b: Vec<CMatrix>,
    pub c: Vec<CMatrix>,
    pub d: Vec<CMatrix>,
    pub u: Vec<CMatrix>,
    /// `o[0]` is unused and set to zero.
    pub o: Vec<CMatrix>,
}

impl IntervalTable {
    /// `max(1, ||a_k||, ||b_k||, ||d_k||)`: the size of the operands the interval length
    /// at index `k` is computed from.
    pub fn scale(&self, k: usize) -> f64 {
        1f64.max(norm2(&self.a[k]))
            .max(norm2(&self.b[k]))
            .max(norm2(&self.d[k]))
    }

    pub fn new(seq: &MomentSequence) -> Result<Self> {
        let (s, tol) = (seq.moments(), seq.tol());
        let q = seq.q();
        let mut t = IntervalTable {
            a: Vec::new(),
            b: Vec::new(),
            c: Vec::new(),
            d: Vec::new(),
            u: Vec::new(),
            o: Vec::new(),
        };
        for j in 0..=seq.m() {
            let (a, b) = endpoint_pair(s, seq.alpha(), seq.beta(), j, tol)?;
            if j == 0 {
                t.u.push(s[0].clone());
                t.o.push(zeros(q, q));
            } else {
                t.u.push(&s[j] - &t.a[j - 1]);
                t.o.push(&t.b[j - 1] - &s[j]);
            }
            t.c.push((&a + &b) * re(0.5));
            t.d.push(&b - &a);
            t.a.push(a);
            t.b.push(b);
        }
        Ok(t)
    }

    pub fn m(&self) -> usize {
        self.a.len() - 1
    }
}

pub fn endpoints(seq: &MomentSequence, j: usize) -> Result<SectionInterval> {
    let prefix = seq.prefix(j)?;
    let reliable = is_f_nnd(&prefix)?.status.holds();
    let table = IntervalTable::new(&prefix)?;
    Ok(SectionInterval {
        index: j,
        a: table.a[j].clone(),
        b: table.b[j].clone(),
        c: table.c[j].clone(),
        d: table.d[j].clone(),
        u: table.u[j].clone(),
        o: (j > 0).then(|| table.o[j].clone()),
        reliable,
    })
}

fn require_f_nnd(seq: &MomentSequence, what: &str) -> Result<()> {
    let v = is_f_nnd(seq)?;
    if v.status == Status::Outside {
        return Err(Error::Precondition(format!(
            "{what} needs a nonnegative Hausdorff sequence ({} fails at order {:?}, eigenvalue {:e})",
            v.detail, v.failing_index, v.witness_eig
        )));
    }
    Ok(())
}

/// Whether `X` is an admissible next moment, i.e. `a_m ≼ X ≼ b_m`.
///
/// The interval test is cross-checked against the direct class test of the extended
/// sequence. A disagreement degrades to `boundary` when one side is `boundary` or when
/// both margins lie within `2 tol_psd`; an `inside`/`outside` split beyond that is
/// reported as [`Error::Inconsistent`].
pub fn membership(seq: &MomentSequence, candidate: &CMatrix) -> Result<ClassVerdict> {
    let tol = seq.tol();
    if candidate.shape() != (seq.q(), seq.q()) {
        return Err(Error::ShapeMismatch {
            op: "membership",
            left: candidate.shape(),
            right: (seq.q(), seq.q()),
        });
    }
    let dev = herm_deviation(candidate);
    if dev > tol.tol_herm * 1f64.max(norm2(candidate)) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    require_f_nnd(seq, "membership")?;
    let m = seq.m();
    let table = IntervalTable::new(seq)?;
    let by_interval = loewner_leq(&table.a[m], candidate, tol)?
        .labelled("above_lower")
        .at(m)
        .and(
            loewner_leq(candidate, &table.b[m], tol)?
                .labelled("below_upper")
                .at(m),
        );
    let direct = is_f_nnd(&seq.pushed(candidate.clone())?)?;
    if by_interval.status == direct.status {
        return Ok(by_interval);
    }
    let limit = 2.0 * tol.tol_psd;
    let near = by_interval.margin().abs() <= limit && direct.margin().abs() <= limit;
    if near || by_interval.status == Status::Boundary || direct.status == Status::Boundary {
        return Ok(ClassVerdict::new(
            Status::Boundary,
            by_interval.witness_eig,
            by_interval.scale,
            "interval_direct_tie",
        )
        .at(m));
    }
    Err(Error::Inconsistent(format!(
        "interval test says {} (margin {:e}) but direct test says {} (margin {:e})",
        by_interval.status,
        by_interval.margin(),
        direct.status,
        direct.margin()
    )))
}

/// Residuals of `d_0 = (beta-alpha) u_0` and `d_k = (beta-alpha) (u_k ∥ o_k)`.
#[derive(Debug, Clone, Serialize)]
pub struct ParallelResidual {
    pub d0: f64,
    /// Entry `k-1` holds the residual for index `k`.
    pub per_index: Vec<f64>,
}

impl ParallelResidual {
    pub fn max(&self) -> f64 {
        self.per_index.iter().copied().fold(self.d0, f64::max)
    }
}

pub fn verify_parallel_identity(seq: &MomentSequence) -> Result<ParallelResidual> {
    require_f_nnd(seq, "parallel identity")?;
    let table = IntervalTable::new(seq)?;
    parallel_residuals(seq, &table)
}

pub(crate) fn parallel_residuals(
    seq: &MomentSequence,
    table: &IntervalTable,
) -> Result<ParallelResidual> {
    let (tol, w, reference) = (seq.tol(), seq.width(), seq.rank_reference());
    let rel = |k: usize, x: &CMatrix| {
        let d = &table.d[k];
        norm2(&(d - x)) / table.scale(k).max(norm2(x))
    };
    let d0 = rel(0, &(&table.u[0] * re(w)));
    let mut per_index = Vec::with_capacity(seq.m());
    for k in 1..=seq.m() {
        let ps = parallel_sum_floor(&table.u[k], &table.o[k], tol, reference)?;
        per_index.push(rel(k, &(ps.value * re(w))));
    }
    Ok(ParallelResidual { d0, per_index })
}

/// Right-hand side of the length recursion
/// `d_{j+1} = (beta-alpha)/4 d_j - (beta-alpha) (s_{j+1} - c_j) d_j^+ (s_{j+1} - c_j)`.
pub fn length_recursion(seq: &MomentSequence, j: usize) -> Result<CMatrix> {
    if j + 1 > seq.m() {
        return Err(Error::IndexOutOfRange {
            what: "length recursion index",
            index: j,
            max: seq.m().saturating_sub(1),
        });
    }
    require_f_nnd(seq, "length recursion")?;
    let table = IntervalTable::new(&seq.prefix(j)?)?;
    Ok(recursion_rhs(seq, &table.c[j], &table.d[j], j))
}

pub(crate) fn recursion_rhs(seq: &MomentSequence, c: &CMatrix, d: &CMatrix, j: usize) -> CMatrix {
    let w = seq.width();
    let gap = seq.get(j + 1) - c;
    let dp = pinv_floor(d, seq.tol(), seq.rank_reference());
    d * re(w / 4.0) - &gap * dp * &gap * re(w)
}

/// Inside when `||d_m||_2 <= tol_psd * max(1, ||s_0||_2)`.
pub fn is_completely_degenerate(seq: &MomentSequence) -> Result<ClassVerdict> {
    require_f_nnd(seq, "degeneracy test")?;
    let table = IntervalTable::new(seq)?;
    Ok(degeneracy_verdict(seq, &table.d[seq.m()]).at(seq.m()))
}

pub(crate) fn degeneracy_verdict(seq: &MomentSequence, d: &CMatrix) -> ClassVerdict {
    let scale = 1f64.max(norm2(seq.get(0)));
    let nd = norm2(d);
    let status = if nd <= seq.tol().tol_psd * scale {
        Status::Inside
    } else {
        Status::Outside
    };
    ClassVerdict::new(status, -nd, scale, "interval_length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::scalar;

    fn sc(v: &[f64]) -> MomentSequence {
        MomentSequence::scalar(0.0, 1.0, v).unwrap()
    }

    fn val(x: &CMatrix) -> f64 {
        x[(0, 0)].re
    }

    #[test]
    fn first_endpoints() {
        let (alpha, beta) = (-2.0, 3.0);
        let s = MomentSequence::scalar(alpha, beta, &[2.0, 1.0]).unwrap();
        let t = IntervalTable::new(&s).unwrap();
        assert_eq!(val(&t.a[0]), alpha * 2.0);
        assert_eq!(val(&t.b[0]), beta * 2.0);
        assert!((val(&t.a[1]) - 0.5).abs() < 1e-15);
        assert!((val(&t.b[1]) - (-alpha * beta * 2.0 + (alpha + beta))).abs() < 1e-14);
    }

    #[test]
    fn arcsine_lengths() {
        let t = IntervalTable::new(&sc(&[1.0, 0.5, 0.375])).unwrap();
        assert_eq!(val(&t.d[0]), 1.0);
        assert!((val(&t.d[1]) - 0.25).abs() < 1e-15);
        assert!((val(&t.d[2]) - 0.0625).abs() < 1e-15);
        assert!((val(&t.c[2]) - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn degenerate_after_boundary_value() {
        let s = sc(&[1.0, 0.0]);
        assert_eq!(is_completely_degenerate(&s).unwrap().status, Status::Inside);
        let s = sc(&[1.0, 0.5]);
        assert_eq!(
            is_completely_degenerate(&s).unwrap().status,
            Status::Outside
        );
    }

    #[test]
    fn membership_probes() {
        let s = sc(&[1.0, 0.5]);
        assert_eq!(
            membership(&s, &scalar(0.375)).unwrap().status,
            Status::Inside
        );
        assert_eq!(
            membership(&s, &scalar(0.25)).unwrap().status,
            Status::Boundary
        );
        assert_eq!(
            membership(&s, &scalar(0.5)).unwrap().status,
            Status::Boundary
        );
        assert_eq!(
            membership(&s, &scalar(0.6)).unwrap().status,
            Status::Outside
        );
        assert!(membership(&s, &crate::matrix::identity(2)).is_err());
    }

    #[test]
    fn preconditions_are_enforced() {
        let bad = sc(&[1.0, 2.0]);
        assert!(matches!(
            verify_parallel_identity(&bad),
            Err(Error::Precondition(_))
        ));
        let e = endpoints(&bad, 1).unwrap();
        assert!(!e.reliable);
        assert!(length_recursion(&sc(&[1.0, 0.5]), 1).is_err());
    }

    #[test]
    fn recursion_on_arcsine() {
        let s = sc(&[1.0, 0.5, 0.375]);
        let rhs = length_recursion(&s, 1).unwrap();
        assert!((val(&rhs) - 0.0625).abs() < 1e-15);
    }
}
