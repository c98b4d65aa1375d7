//! One-step and multi-step extensions inside the admissible interval, and a seeded
//! random generator of Hausdorff sequences.
//!
//! Random generation: `rand_chacha::ChaCha8Rng::seed_from_u64(seed)`. The head moment is
//! `G G* + 0.1 I` with `G` filled row-major by complex normals (real and imaginary parts
//! drawn in that order, each with variance 1/2). Every later moment is a ball point
//! `a + sqrt(d) K sqrt(d)` where `K = U diag(lambda) U*`, `U` the Q factor of another
//! complex normal matrix and `lambda` uniform on `[0, 1]` (or `[0.25, 0.75]` for the
//! positive-definite variant).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::classes::is_f_nnd;
use crate::error::{Error, Result};
use crate::hankel::schur_complement_floor;
use crate::intervals::{degeneracy_verdict, IntervalTable};
use crate::matrix::{
    hermitian_part, identity, is_hermitian, loewner_leq, norm2, psd_sqrt_floor, real_diag,
    rel_diff, CMatrix,
};
use crate::sequence::MomentSequence;
use crate::tolerance::Tolerances;
use crate::verdict::Status;

/// Eigenvalue margin of the contraction used for positive-definite random sequences.
pub const PD_MARGIN: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionMode {
    Lower,
    Upper,
    Central,
    /// `a + sqrt(d) K sqrt(d)` with `0 ≼ K ≼ I`.
    Ball(CMatrix),
    /// A given next moment; must lie in the interval.
    Explicit(CMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionPolicy {
    pub mode: ExtensionMode,
    pub steps: usize,
}

impl ExtensionPolicy {
    pub fn new(mode: ExtensionMode, steps: usize, tol: &Tolerances) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Rejected("steps must be at least 1".into()));
        }
        match &mode {
            ExtensionMode::Ball(k) => {
                if !k.is_square() {
                    return Err(Error::NotSquare {
                        op: "ball parameter",
                        rows: k.nrows(),
                        cols: k.ncols(),
                    });
                }
                if is_hermitian(k, tol)?.status == Status::Outside {
                    return Err(Error::NotHermitian {
                        deviation: -is_hermitian(k, tol)?.witness_eig,
                    });
                }
                let lo = loewner_leq(&CMatrix::zeros(k.nrows(), k.ncols()), k, tol)?;
                let hi = loewner_leq(k, &identity(k.nrows()), tol)?;
                if !lo.and(hi).status.holds() {
                    return Err(Error::Rejected(
                        "ball parameter must satisfy 0 <= K <= I".into(),
                    ));
                }
            }
            ExtensionMode::Explicit(_) if steps != 1 => {
                return Err(Error::Rejected(
                    "an explicit moment extends by exactly one step".into(),
                ));
            }
            _ => {}
        }
        Ok(Self { mode, steps })
    }
}

/// `a + sqrt(d) K sqrt(d)`; eigenvalues of `d` below the rank cutoff relative to
/// `max(||d||_2, reference)` are treated as zero.
pub fn ball_point(
    a: &CMatrix,
    d: &CMatrix,
    k: &CMatrix,
    tol: &Tolerances,
    reference: f64,
) -> Result<CMatrix> {
    let r = psd_sqrt_floor(d, tol, reference)?;
    Ok(a + &r * k * &r)
}

/// The moment appended by one step of `mode`.
///
/// Once the current interval has collapsed (`d_m ≈ 0`) the midpoint is returned
/// whatever the mode, except that explicit candidates are still validated.
pub fn next_moment(seq: &MomentSequence, mode: &ExtensionMode) -> Result<CMatrix> {
    let v = is_f_nnd(seq)?;
    if v.status == Status::Outside {
        return Err(Error::Precondition(format!(
            "extension needs a nonnegative Hausdorff sequence ({} fails with eigenvalue {:e})",
            v.detail, v.witness_eig
        )));
    }
    let tol = seq.tol();
    let q = seq.q();
    if let ExtensionMode::Ball(k) | ExtensionMode::Explicit(k) = mode {
        if k.shape() != (q, q) {
            return Err(Error::ShapeMismatch {
                op: "extension",
                left: k.shape(),
                right: (q, q),
            });
        }
    }
    let table = IntervalTable::new(seq)?;
    let m = seq.m();
    if let ExtensionMode::Explicit(x) = mode {
        let verdict = crate::intervals::membership(seq, x)?;
        if verdict.status == Status::Outside {
            return Err(Error::Rejected(format!(
                "explicit moment lies outside the interval ({}, eigenvalue {:e})",
                verdict.detail, verdict.witness_eig
            )));
        }
        return Ok(x.clone());
    }
    let next = if degeneracy_verdict(seq, &table.d[m]).status == Status::Inside {
        table.c[m].clone()
    } else {
        match mode {
            ExtensionMode::Lower => table.a[m].clone(),
            ExtensionMode::Upper => table.b[m].clone(),
            ExtensionMode::Central => table.c[m].clone(),
            ExtensionMode::Ball(k) => {
                ball_point(&table.a[m], &table.d[m], k, tol, seq.rank_reference())?
            }
            ExtensionMode::Explicit(_) => unreachable!(),
        }
    };
    Ok(hermitian_part(&next))
}

pub fn extend(seq: &MomentSequence, policy: &ExtensionPolicy) -> Result<MomentSequence> {
    let mut out = seq.clone();
    for _ in 0..policy.steps {
        let next = next_moment(&out, &policy.mode)?;
        out = out.pushed(next)?;
    }
    Ok(out)
}

fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// `q x q` matrix of i.i.d. complex normals, filled row-major.
pub fn gaussian_matrix<R: Rng>(rng: &mut R, q: usize) -> CMatrix {
    let data: Vec<Complex64> = (0..q * q).map(|_| complex_normal(rng)).collect();
    DMatrix::from_row_slice(q, q, &data)
}

/// Hermitian `K` with eigenvalues uniform on `[lo, hi]` and a random unitary eigenbasis.
pub fn random_contraction<R: Rng>(rng: &mut R, q: usize, lo: f64, hi: f64) -> CMatrix {
    let u = gaussian_matrix(rng, q).qr().q();
    let values: Vec<f64> = (0..q).map(|_| rng.random_range(lo..=hi)).collect();
    hermitian_part(&(&u * real_diag(&values) * u.adjoint()))
}

/// Random head moment `G G* + 0.1 I`.
pub fn random_head<R: Rng>(rng: &mut R, q: usize) -> CMatrix {
    let g = gaussian_matrix(rng, q);
    hermitian_part(&(&g * g.adjoint() + identity(q) * Complex64::new(0.1, 0.0)))
}

/// Seeded random sequence `s_0..s_m` in the nonnegative (or, with `pd`, positive)
/// Hausdorff class on `[alpha, beta]`.
pub fn random_f(
    q: usize,
    alpha: f64,
    beta: f64,
    m: usize,
    seed: u64,
    pd: bool,
) -> Result<MomentSequence> {
    if q == 0 {
        return Err(Error::InvalidSequence("q must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = if pd {
        (PD_MARGIN, 1.0 - PD_MARGIN)
    } else {
        (0.0, 1.0)
    };
    let mut seq = MomentSequence::new(
        alpha,
        beta,
        vec![random_head(&mut rng, q)],
        Tolerances::default(),
    )?;
    for _ in 0..m {
        let k = random_contraction(&mut rng, q, lo, hi);
        let next = next_moment(&seq, &ExtensionMode::Ball(k))?;
        seq = seq.pushed(next)?;
    }
    Ok(seq)
}

/// What happens after the interval first collapses.
#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    /// First index `j` with `d_j ≈ 0`.
    pub degenerate_index: Option<usize>,
    /// Largest relative deviation of a later moment from `a`, `b` or `c` of the previous index.
    pub max_tail_residual: f64,
    pub tail_consistent: bool,
    /// Hankel order `n+1` whose Schur complement must vanish, if enough moments are present.
    pub hankel_order: Option<usize>,
    /// Relative norm of that Schur complement.
    pub hankel_residual: Option<f64>,
}

/// Tolerance on forced-tail residuals.
pub const TAIL_TOL: f64 = 1e-7;

pub fn degenerate_tail_check(seq: &MomentSequence) -> Result<TailReport> {
    let table = IntervalTable::new(seq)?;
    let m = seq.m();
    let degenerate_index =
        (0..=m).find(|&j| degeneracy_verdict(seq, &table.d[j]).status == Status::Inside);
    let mut report = TailReport {
        degenerate_index,
        max_tail_residual: 0.0,
        tail_consistent: true,
        hankel_order: None,
        hankel_residual: None,
    };
    let Some(m0) = degenerate_index else {
        return Ok(report);
    };
    for j in m0 + 1..=m {
        let s = seq.get(j);
        for x in [&table.a[j - 1], &table.b[j - 1], &table.c[j - 1]] {
            report.max_tail_residual = report.max_tail_residual.max(rel_diff(s, x));
        }
    }
    report.tail_consistent = report.max_tail_residual <= TAIL_TOL;
    let order = m0 / 2 + 1;
    if 2 * order <= m {
        let l = schur_complement_floor(seq.moments(), order, seq.tol(), seq.rank_reference())?;
        report.hankel_order = Some(order);
        report.hankel_residual = Some(norm2(&l) / 1f64.max(norm2(seq.get(2 * order))));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::scalar;

    fn unit() -> MomentSequence {
        MomentSequence::scalar(0.0, 1.0, &[1.0]).unwrap()
    }

    fn values(seq: &MomentSequence) -> Vec<f64> {
        seq.moments().iter().map(|x| x[(0, 0)].re).collect()
    }

    fn run(mode: ExtensionMode, steps: usize) -> MomentSequence {
        let p = ExtensionPolicy::new(mode, steps, &Tolerances::default()).unwrap();
        extend(&unit(), &p).unwrap()
    }

    #[test]
    fn lower_and_upper_give_dirac_moments() {
        assert_eq!(
            values(&run(ExtensionMode::Lower, 3)),
            vec![1.0, 0.0, 0.0, 0.0]
        );
        assert_eq!(
            values(&run(ExtensionMode::Upper, 3)),
            vec![1.0, 1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn central_gives_arcsine_moments() {
        let v = values(&run(ExtensionMode::Central, 3));
        for (x, y) in v.iter().zip([1.0, 0.5, 0.375, 0.3125]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn half_ball_matches_central() {
        let a = run(ExtensionMode::Central, 4);
        let b = run(ExtensionMode::Ball(scalar(0.5)), 4);
        for (x, y) in a.moments().iter().zip(b.moments()) {
            assert!(rel_diff(x, y) < 1e-12);
        }
    }

    #[test]
    fn policy_validation() {
        let t = Tolerances::default();
        assert!(ExtensionPolicy::new(ExtensionMode::Ball(scalar(1.5)), 1, &t).is_err());
        assert!(ExtensionPolicy::new(ExtensionMode::Central, 0, &t).is_err());
        assert!(ExtensionPolicy::new(ExtensionMode::Explicit(scalar(0.5)), 2, &t).is_err());
        let p = ExtensionPolicy::new(ExtensionMode::Explicit(scalar(2.0)), 1, &t).unwrap();
        assert!(matches!(extend(&unit(), &p), Err(Error::Rejected(_))));
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_f(2, -1.0, 2.0, 4, 7, true).unwrap();
        let b = random_f(2, -1.0, 2.0, 4, 7, true).unwrap();
        assert_eq!(a, b);
        let c = random_f(2, -1.0, 2.0, 4, 8, true).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_pd_sequences_are_pd() {
        for seed in 0..10 {
            let s = random_f(2, 0.0, 1.0, 5, seed, true).unwrap();
            assert_eq!(crate::classes::is_f_pd(&s).unwrap().status, Status::Inside);
        }
    }

    #[test]
    fn tail_after_lower_step() {
        let s = run(ExtensionMode::Lower, 3);
        let r = degenerate_tail_check(&s).unwrap();
        assert_eq!(r.degenerate_index, Some(1));
        assert!(r.tail_consistent);
        assert_eq!(r.hankel_order, Some(1));
        assert_eq!(r.hankel_residual, Some(0.0));
        let r = degenerate_tail_check(&run(ExtensionMode::Central, 3)).unwrap();
        assert_eq!(r.degenerate_index, None);
    }
}
