//! Dense complex matrix kernels.
//!
//! Hermitian eigen-decompositions come from `nalgebra`; singular value decompositions are
//! derived from them. Everything built on top (pseudo-inverse with rank cutoff, parallel
//! sum, range tests, Loewner comparisons, block positivity) lives here.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::verdict::{ClassVerdict, Status};

pub type CMatrix = DMatrix<Complex64>;

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// 1x1 real matrix.
pub fn scalar(x: f64) -> CMatrix {
    CMatrix::from_element(1, 1, Complex64::new(x, 0.0))
}

/// Real matrix from row-major data.
pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> CMatrix {
    assert_eq!(data.len(), rows * cols);
    CMatrix::from_fn(rows, cols, |i, j| Complex64::new(data[i * cols + j], 0.0))
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Spectral norm; zero for empty matrices.
pub fn norm2(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let gram = if a.nrows() <= a.ncols() {
        a * a.adjoint()
    } else {
        a.adjoint() * a
    };
    let top = gram.symmetric_eigen().eigenvalues.max();
    top.max(0.0).sqrt()
}

/// `||A - A*||_2`.
pub fn herm_deviation(a: &CMatrix) -> f64 {
    norm2(&(a - a.adjoint()))
}

/// `||X - Y||_2 / max(1, ||X||_2, ||Y||_2)`.
pub fn rel_diff(x: &CMatrix, y: &CMatrix) -> f64 {
    norm2(&(x - y)) / 1f64.max(norm2(x)).max(norm2(y))
}

pub fn hstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn vstack(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.ncols());
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// Block matrix `[[A, B], [C, D]]`.
pub fn block2x2(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
    vstack(&hstack(a, b), &hstack(c, d))
}

fn require_square(op: &'static str, a: &CMatrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            op,
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

fn require_same_shape(op: &'static str, a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() == b.shape() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        })
    }
}

/// Eigen-decomposition of the Hermitian part, eigenvalues ascending.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = hermitian_part(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_eig(a: &CMatrix) -> f64 {
    eigh(a).0.first().copied().unwrap_or(0.0)
}

struct Svd {
    u: CMatrix,
    sigma: Vec<f64>,
    v_t: CMatrix,
}

/// Thin SVD from the eigen-decomposition of the Hermitian dilation `[[0, A], [A*, 0]]`,
/// whose eigenpairs are `±sigma_i` with vectors `[u_i; ±v_i] / sqrt(2)`.
///
/// `nalgebra`'s complex SVD can return mismatched left and right singular vectors for
/// nearly Hermitian rank-deficient inputs, so it is not used.
fn svd(a: &CMatrix) -> Svd {
    let (r, c) = a.shape();
    let k = r.min(c);
    let mut dil = zeros(r + c, r + c);
    dil.view_mut((0, r), (r, c)).copy_from(a);
    dil.view_mut((r, 0), (c, r)).copy_from(&a.adjoint());
    let (values, vectors) = eigh(&dil);
    let mut u = zeros(r, k);
    let mut v_t = zeros(k, c);
    let mut sigma = Vec::with_capacity(k);
    for i in 0..k {
        let col = vectors.column(r + c - 1 - i);
        let x = col.rows(0, r).into_owned();
        let y = col.rows(r, c).into_owned();
        let (nx, ny) = (x.norm(), y.norm());
        if nx > 0.0 && ny > 0.0 {
            u.set_column(i, &(x / Complex64::new(nx, 0.0)));
            v_t.set_row(i, &(y / Complex64::new(ny, 0.0)).adjoint());
        }
        sigma.push(values[r + c - 1 - i].max(0.0));
    }
    Svd { u, sigma, v_t }
}

/// Singular values above `cutoff_factor * max(sigma_max, reference)` count as nonzero.
fn kept(sigma: &[f64], cutoff_factor: f64, reference: f64) -> Vec<usize> {
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = cutoff_factor * smax.max(reference);
    (0..sigma.len())
        .filter(|&i| sigma[i] > cutoff && sigma[i] > 0.0)
        .collect()
}

/// Moore-Penrose pseudo-inverse; singular values `<= rtol_rank * max(r, c) * sigma_max`
/// are treated as zero.
pub fn pinv(a: &CMatrix, tol: &Tolerances) -> CMatrix {
    pinv_floor(a, tol, 0.0)
}

/// Pseudo-inverse whose rank cutoff is taken relative to `max(sigma_max, reference)`.
///
/// Used for quantities that are differences of much larger terms, so that a numerically
/// vanishing matrix is recognised as zero instead of being inverted.
pub fn pinv_floor(a: &CMatrix, tol: &Tolerances, reference: f64) -> CMatrix {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return zeros(c, r);
    }
    let s = svd(a);
    let idx = kept(&s.sigma, tol.rank_cutoff(r, c), reference);
    let mut out = zeros(c, r);
    for i in idx {
        let v = s.v_t.row(i).adjoint();
        let u = s.u.column(i).adjoint();
        out += (v * u) * Complex64::new(1.0 / s.sigma[i], 0.0);
    }
    out
}

/// Orthonormal basis of the numerical range.
pub fn range_basis(a: &CMatrix, tol: &Tolerances, reference: f64) -> CMatrix {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return zeros(r, 0);
    }
    let s = svd(a);
    let idx = kept(&s.sigma, tol.rank_cutoff(r, c), reference);
    CMatrix::from_fn(r, idx.len(), |i, k| s.u[(i, idx[k])])
}

pub fn numerical_rank(a: &CMatrix, tol: &Tolerances) -> usize {
    range_basis(a, tol, 0.0).ncols()
}

/// Orthogonal projector `A A^+` onto the range of `A`.
pub fn proj_range(a: &CMatrix, tol: &Tolerances) -> CMatrix {
    proj_range_floor(a, tol, 0.0)
}

pub fn proj_range_floor(a: &CMatrix, tol: &Tolerances, reference: f64) -> CMatrix {
    let u = range_basis(a, tol, reference);
    &u * u.adjoint()
}

/// `||(I - B B^+) A||_2`.
pub fn range_residual(a: &CMatrix, b: &CMatrix, tol: &Tolerances, reference: f64) -> f64 {
    let p = proj_range_floor(b, tol, reference);
    norm2(&(a - &p * a))
}

/// Tests `R(A) ⊆ R(B)`: inside iff `||(I - B B^+) A||_2 <= tol_range * max(1, ||A||_2)`.
pub fn range_included(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<ClassVerdict> {
    range_included_floor(a, b, tol, 0.0)
}

pub fn range_included_floor(
    a: &CMatrix,
    b: &CMatrix,
    tol: &Tolerances,
    reference: f64,
) -> Result<ClassVerdict> {
    if a.nrows() != b.nrows() {
        return Err(Error::ShapeMismatch {
            op: "range_included",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let scale = 1f64.max(norm2(a));
    let res = range_residual(a, b, tol, reference);
    let status = if res <= tol.tol_range * scale {
        Status::Inside
    } else {
        Status::Outside
    };
    Ok(ClassVerdict::new(status, -res, scale, "range"))
}

/// Tests `N(B) ⊆ N(A)` via `||A - A B^+ B||_2`.
pub fn null_included_floor(
    b: &CMatrix,
    a: &CMatrix,
    tol: &Tolerances,
    reference: f64,
) -> Result<ClassVerdict> {
    if a.ncols() != b.ncols() {
        return Err(Error::ShapeMismatch {
            op: "null_included",
            left: b.shape(),
            right: a.shape(),
        });
    }
    let scale = 1f64.max(norm2(a));
    let res = norm2(&(a - a * pinv_floor(b, tol, reference) * b));
    let status = if res <= tol.tol_range * scale {
        Status::Inside
    } else {
        Status::Outside
    };
    Ok(ClassVerdict::new(status, -res, scale, "nullspace"))
}

pub fn is_hermitian(a: &CMatrix, tol: &Tolerances) -> Result<ClassVerdict> {
    require_square("is_hermitian", a)?;
    let scale = 1f64.max(norm2(a));
    let dev = herm_deviation(a);
    let status = if dev <= tol.tol_herm * scale {
        Status::Inside
    } else {
        Status::Outside
    };
    Ok(ClassVerdict::new(status, -dev, scale, "hermitian"))
}

fn eig_verdict(a: &CMatrix, tol: &Tolerances, op: &'static str) -> Result<ClassVerdict> {
    require_square(op, a)?;
    if a.is_empty() {
        return Ok(ClassVerdict::vacuous(op));
    }
    let scale = 1f64.max(norm2(a));
    let dev = herm_deviation(a);
    if dev > tol.tol_herm * scale {
        return Ok(ClassVerdict::new(
            Status::Outside,
            -dev,
            scale,
            "not_hermitian",
        ));
    }
    let lmin = min_eig(a);
    Ok(ClassVerdict::new(
        Status::classify(lmin, tol.tol_psd * scale),
        lmin,
        scale,
        op,
    ))
}

/// Positive semidefiniteness: `boundary` when the smallest eigenvalue is within
/// `tol_psd * max(1, ||A||_2)` of zero.
pub fn is_psd(a: &CMatrix, tol: &Tolerances) -> Result<ClassVerdict> {
    eig_verdict(a, tol, "psd")
}

/// Positive definiteness: `inside` only when the smallest eigenvalue clears the threshold.
pub fn is_pd(a: &CMatrix, tol: &Tolerances) -> Result<ClassVerdict> {
    eig_verdict(a, tol, "pd")
}

/// `A ≼ B` in the Loewner order.
pub fn loewner_leq(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<ClassVerdict> {
    require_same_shape("loewner_leq", a, b)?;
    Ok(is_psd(&(b - a), tol)?.labelled("loewner"))
}

/// Unique PSD square root; negative eigenvalues within tolerance are clamped.
pub fn psd_sqrt(a: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let v = is_psd(a, tol)?;
    if v.status == Status::Outside {
        return Err(Error::NotPsd {
            min_eig: v.witness_eig,
        });
    }
    let (values, vectors) = eigh(a);
    let roots: Vec<f64> = values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok(&vectors * real_diag(&roots) * vectors.adjoint())
}

/// PSD square root of the Hermitian part with every decision taken relative to
/// `max(1, ||A||_2, reference)`: a Hermitian deviation above `tol_herm` or eigenvalues below `-tol_psd` times that scale are an error, and eigenvalues at or
/// below the rank cutoff are zeroed.
///
/// A square root turns an eigenvalue of size `eps` into `sqrt(eps)`, so numerically null
/// directions must be removed before taking it.
pub fn psd_sqrt_floor(a: &CMatrix, tol: &Tolerances, reference: f64) -> Result<CMatrix> {
    require_square("psd_sqrt", a)?;
    let dev = herm_deviation(a);
    if dev > tol.tol_herm * norm2(a).max(reference).max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let (values, vectors) = eigh(a);
    let top = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(&low) = values.first() {
        if low < -tol.tol_psd * top.max(reference).max(1.0) {
            return Err(Error::NotPsd { min_eig: low });
        }
    }
    let cutoff = tol.rank_cutoff(a.nrows(), a.ncols()) * top.max(reference);
    let roots: Vec<f64> = values
        .iter()
        .map(|&x| if x > cutoff { x.sqrt() } else { 0.0 })
        .collect();
    Ok(&vectors * real_diag(&roots) * vectors.adjoint())
}

#[derive(Debug, Clone)]
pub struct ParallelSum {
    pub value: CMatrix,
    /// Whether `R(A) ⊆ R(A+B)` and `N(A+B) ⊆ N(A)` hold numerically.
    pub in_ps: bool,
}

/// `A ∥ B = A (A+B)^+ B`.
pub fn parallel_sum(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<ParallelSum> {
    parallel_sum_floor(a, b, tol, 0.0)
}

pub fn parallel_sum_floor(
    a: &CMatrix,
    b: &CMatrix,
    tol: &Tolerances,
    reference: f64,
) -> Result<ParallelSum> {
    require_same_shape("parallel_sum", a, b)?;
    let sum = a + b;
    let sp = pinv_floor(&sum, tol, reference);
    let value = a * &sp * b;
    let scale = 1f64.max(norm2(a));
    let range_ok = range_residual(a, &sum, tol, reference) <= tol.tol_range * scale;
    let null_ok = norm2(&(a - a * &sp * &sum)) <= tol.tol_range * scale;
    Ok(ParallelSum {
        value,
        in_ps: range_ok && null_ok,
    })
}

/// Principal-angle threshold used when intersecting numerical subspaces.
fn intersection_angle(tol: &Tolerances) -> f64 {
    tol.tol_range.sqrt()
}

/// Projector onto `R(A) ∩ R(B)` from orthonormal range bases: directions whose principal
/// angle is below `sqrt(tol_range)` are kept.
pub fn subspace_intersection_projector(
    a: &CMatrix,
    b: &CMatrix,
    tol: &Tolerances,
    reference: f64,
) -> CMatrix {
    let n = a.nrows();
    let ua = range_basis(a, tol, reference);
    let ub = range_basis(b, tol, reference);
    if ua.ncols() == 0 || ub.ncols() == 0 {
        return zeros(n, n);
    }
    let m = ua.adjoint() * &ub;
    let s = svd(&m);
    let threshold = intersection_angle(tol).cos();
    let mut p = zeros(n, n);
    for (i, &sigma) in s.sigma.iter().enumerate() {
        if sigma >= threshold {
            let v = &ua * s.u.column(i);
            p += &v * v.adjoint();
        }
    }
    p
}

/// Projector onto `R(A) ∩ R(B)`: the range of `A ∥ B` when the pair lies in PS, the
/// principal-angle construction otherwise.
pub fn range_intersection_projector(a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let ps = parallel_sum(a, b, tol)?;
    if ps.in_ps {
        Ok(proj_range(&ps.value, tol))
    } else {
        Ok(subspace_intersection_projector(a, b, tol, 0.0))
    }
}

/// Projector onto `R(A) + R(B)`.
pub fn range_sum_projector(a: &CMatrix, b: &CMatrix, tol: &Tolerances, reference: f64) -> CMatrix {
    proj_range_floor(&hstack(a, b), tol, reference)
}

/// Positive semidefiniteness of `[[A, B], [C, D]]` through the generalized Schur
/// complement: `A ≽ 0`, `R(B) ⊆ R(A)`, `C = B*`, `D - C A^+ B ≽ 0`.
pub fn block_psd(
    a: &CMatrix,
    b: &CMatrix,
    c: &CMatrix,
    d: &CMatrix,
    tol: &Tolerances,
) -> Result<ClassVerdict> {
    require_square("block_psd", a)?;
    require_square("block_psd", d)?;
    let (p, q) = (a.nrows(), d.nrows());
    if b.shape() != (p, q) || c.shape() != (q, p) {
        return Err(Error::ShapeMismatch {
            op: "block_psd",
            left: b.shape(),
            right: c.shape(),
        });
    }
    let top = is_psd(a, tol)?.labelled("block_a").at(0);
    let range = range_included(b, a, tol)?.labelled("block_range").at(1);
    let bscale = 1f64.max(norm2(b));
    let dev = norm2(&(c - b.adjoint()));
    let adj = ClassVerdict::new(
        if dev <= tol.tol_herm * bscale {
            Status::Inside
        } else {
            Status::Outside
        },
        -dev,
        bscale,
        "block_adjoint",
    )
    .at(2);
    let schur = d - c * pinv(a, tol) * b;
    let bottom = is_psd(&schur, tol)?.labelled("block_schur").at(3);
    Ok(top.and(range).and(adj).and(bottom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pinv_of_rank_one() {
        let a = from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let p = pinv(&a, &t());
        assert!(rel_diff(&p, &a) < 1e-15);
        let z = zeros(3, 2);
        assert_eq!(pinv(&z, &t()).shape(), (2, 3));
        assert_eq!(norm2(&pinv(&z, &t())), 0.0);
    }

    #[test]
    fn pinv_penrose_conditions() {
        let a = CMatrix::from_row_slice(
            3,
            2,
            &[
                c(1.0, 1.0),
                c(2.0, 0.0),
                c(0.0, -1.0),
                c(1.0, 0.5),
                c(1.0, 1.0),
                c(2.0, 0.0),
            ],
        );
        let x = pinv(&a, &t());
        assert!(norm2(&(&a * &x * &a - &a)) < 1e-12);
        assert!(norm2(&(&x * &a * &x - &x)) < 1e-12);
        assert!(herm_deviation(&(&a * &x)) < 1e-12);
        assert!(herm_deviation(&(&x * &a)) < 1e-12);
    }

    #[test]
    fn pinv_of_nearly_hermitian_rank_one() {
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(2.220392030845929, -2.1094237467877974e-15),
                c(0.9667251365458229, 2.766906024304024),
                c(0.9667251365458496, -2.766906024304122),
                c(3.8688332139648693, -8.715250743307479e-15),
            ],
        );
        let x = pinv(&a, &t());
        assert!(norm2(&(&a * &x * &a - &a)) < 1e-12);
        assert!(norm2(&(&x * &a * &x - &x)) < 1e-12);
        let p = proj_range(&a, &t());
        assert!(norm2(&(&p * &a - &a)) < 1e-12);
        assert!((norm2(&a) - 6.089225244810814).abs() < 1e-12);
    }

    #[test]
    fn psd_and_pd_verdicts() {
        let d = real_diag(&[1.0, 2.0]);
        assert_eq!(is_psd(&d, &t()).unwrap().status, Status::Inside);
        assert_eq!(is_pd(&d, &t()).unwrap().status, Status::Inside);
        let z = zeros(2, 2);
        assert_eq!(is_psd(&z, &t()).unwrap().status, Status::Boundary);
        assert!(is_pd(&z, &t()).unwrap().status != Status::Inside);
        let n = real_diag(&[1.0, -1.0]);
        let v = is_psd(&n, &t()).unwrap();
        assert_eq!(v.status, Status::Outside);
        assert!((v.witness_eig + 1.0).abs() < 1e-12);
        assert!(is_psd(&zeros(2, 3), &t()).is_err());
    }

    #[test]
    fn non_hermitian_is_outside() {
        let a =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let v = is_psd(&a, &t()).unwrap();
        assert_eq!(v.status, Status::Outside);
        assert_eq!(v.detail, "not_hermitian");
    }

    #[test]
    fn parallel_sum_of_identities() {
        let i = identity(2);
        let ps = parallel_sum(&i, &i, &t()).unwrap();
        assert!(rel_diff(&ps.value, &(identity(2) * c(0.5, 0.0))) < 1e-15);
        assert!(ps.in_ps);
    }

    #[test]
    fn parallel_sum_disjoint_ranges_vanish() {
        let a = real_diag(&[1.0, 0.0]);
        let b = real_diag(&[0.0, 1.0]);
        let ps = parallel_sum(&a, &b, &t()).unwrap();
        assert!(norm2(&ps.value) < 1e-15);
        assert!(ps.in_ps);
    }

    #[test]
    fn range_inclusion_examples() {
        let a = from_real(2, 1, &[1.0, 0.0]);
        let b = real_diag(&[1.0, 0.0]);
        assert_eq!(range_included(&a, &b, &t()).unwrap().status, Status::Inside);
        let a = from_real(2, 1, &[0.0, 1.0]);
        assert_eq!(
            range_included(&a, &b, &t()).unwrap().status,
            Status::Outside
        );
        assert!(range_included(&a, &zeros(3, 3), &t()).is_err());
    }

    #[test]
    fn loewner_self_is_boundary() {
        let a = real_diag(&[3.0, 1.0]);
        assert_eq!(loewner_leq(&a, &a, &t()).unwrap().status, Status::Boundary);
        assert_eq!(
            loewner_leq(&a, &real_diag(&[4.0, 2.0]), &t())
                .unwrap()
                .status,
            Status::Inside
        );
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let r = psd_sqrt(&a, &t()).unwrap();
        assert!(rel_diff(&(&r * &r), &a) < 1e-14);
        assert!(psd_sqrt(&real_diag(&[1.0, -1.0]), &t()).is_err());
    }

    #[test]
    fn block_psd_examples() {
        let one = scalar(1.0);
        assert_eq!(
            block_psd(&one, &one, &one, &one, &t()).unwrap().status,
            Status::Boundary
        );
        let z = scalar(0.0);
        assert_eq!(
            block_psd(&z, &one, &one, &one, &t()).unwrap().status,
            Status::Outside
        );
        let v = block_psd(&one, &one, &scalar(2.0), &scalar(4.0), &t()).unwrap();
        assert_eq!(v.status, Status::Outside);
        assert_eq!(v.detail, "block_adjoint");
    }

    #[test]
    fn intersection_projector_of_coordinate_planes() {
        let a = real_diag(&[1.0, 1.0, 0.0]);
        let b = real_diag(&[0.0, 1.0, 1.0]);
        let p = subspace_intersection_projector(&a, &b, &t(), 0.0);
        assert!(rel_diff(&p, &real_diag(&[0.0, 1.0, 0.0])) < 1e-12);
        let q = range_intersection_projector(&a, &b, &t()).unwrap();
        assert!(rel_diff(&q, &p) < 1e-12);
        let s = range_sum_projector(&a, &b, &t(), 0.0);
        assert!(rel_diff(&s, &identity(3)) < 1e-12);
    }

    #[test]
    fn floor_suppresses_noise() {
        let noise = real_diag(&[1e-17, 0.0]);
        assert_eq!(numerical_rank(&noise, &t()), 1);
        assert_eq!(range_basis(&noise, &t(), 1.0).ncols(), 0);
        assert_eq!(norm2(&pinv_floor(&noise, &t(), 1.0)), 0.0);
    }
}
