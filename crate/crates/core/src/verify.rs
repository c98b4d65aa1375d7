//! Identity suites evaluated numerically on a sequence, and batch runs over seeded corpora.
//!
//! Each check reports a normalised residual next to the tolerance it is held to. The
//! recursive Schur formulas that relate a sequence to its shifted transforms are only
//! used here, as cross-checks against the direct Hankel computations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classes::{
    ab_transform, alpha_transform, beta_transform, is_f_nnd, is_k_nnd, is_k_nnd_extendable,
    is_l_nnd, is_l_nnd_extendable, reflect_class_dual,
};
use crate::error::{Error, Result};
use crate::extensions::{ball_point, random_head};
use crate::hankel::{block_hankel, m_term_floor, schur_complement_floor, structural, theta_floor};
use crate::intervals::{degeneracy_verdict, parallel_residuals, recursion_rhs, IntervalTable};
use crate::matrix::{
    eigh, hermitian_part, identity, norm2, parallel_sum_floor, pinv_floor, proj_range_floor,
    range_sum_projector, real_diag, rel_diff, subspace_intersection_projector, CMatrix,
};
use crate::par;
use crate::sequence::MomentSequence;
use crate::tolerance::Tolerances;
use crate::verdict::Status;

/// Tolerances the suites hold their residuals to.
pub mod limits {
    /// Parallel-sum and product forms of the interval length.
    pub const PARALLEL: f64 = 1e-7;
    /// Length recursion and recursive Schur formulas.
    pub const RECURSION: f64 = 1e-7;
    /// Loewner orderings: `lambda_min >= -MONOTONE * scale`.
    pub const MONOTONE: f64 = 1e-8;
    /// Projector distances between ranges.
    pub const RANGE: f64 = 1e-6;
    /// Linear Hankel identities.
    pub const LINEAR: f64 = 1e-12;
    /// Identities that go through a pseudo-inverse.
    pub const PSEUDO_INVERSE: f64 = 1e-10;
    /// Identities that go through a parallel sum of Hankel blocks.
    pub const HANKEL_PARALLEL: f64 = 1e-7;
    /// Distance below which a step counts as a central step.
    pub const CENTRAL_STEP: f64 = 1e-12;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Parallel,
    Recursion,
    Reflection,
    Ranges,
    Ordering,
    HankelIdentities,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Parallel,
        Suite::Recursion,
        Suite::Reflection,
        Suite::Ranges,
        Suite::Ordering,
        Suite::HankelIdentities,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Parallel => "parallel",
            Suite::Recursion => "recursion",
            Suite::Reflection => "reflection",
            Suite::Ranges => "ranges",
            Suite::Ordering => "ordering",
            Suite::HankelIdentities => "hankel-identities",
        }
    }

    /// Whether the suite presupposes a nonnegative Hausdorff sequence.
    pub fn needs_membership(self) -> bool {
        !matches!(self, Suite::Reflection | Suite::HankelIdentities)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.as_str()).collect();
                format!("unknown suite '{s}', expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    /// Largest residual-to-tolerance ratio.
    pub fn worst(&self) -> Option<&Check> {
        self.checks
            .iter()
            .max_by(|a, b| (a.residual / a.tolerance).total_cmp(&(b.residual / b.tolerance)))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: String, residual: f64, tolerance: f64) {
        self.0.push(Check {
            name,
            residual,
            tolerance,
        });
    }

    fn rel(&mut self, name: String, x: &CMatrix, y: &CMatrix, tolerance: f64) {
        self.push(name, rel_diff(x, y), tolerance);
    }

    /// Like [`Checks::rel`] with the denominator also bounded below by `scale`.
    fn rel_to(&mut self, name: String, x: &CMatrix, y: &CMatrix, scale: f64, tolerance: f64) {
        let denom = scale.max(1.0).max(norm2(x)).max(norm2(y));
        self.push(name, norm2(&(x - y)) / denom, tolerance);
    }

    /// `X ≼ Y`: residual `max(0, -lambda_min(Y - X)) / max(1, ||X||, ||Y||)`.
    fn leq(&mut self, name: String, x: &CMatrix, y: &CMatrix) {
        self.leq_to(name, x, y, 1.0);
    }

    fn leq_to(&mut self, name: String, x: &CMatrix, y: &CMatrix, scale: f64) {
        let scale = scale.max(1.0).max(norm2(x)).max(norm2(y));
        let lmin = eigh(&hermitian_part(&(y - x))).0[0];
        self.push(name, (-lmin).max(0.0) / scale, limits::MONOTONE);
    }

    fn same_status(&mut self, name: String, a: Status, b: Status) {
        self.push(name, if a == b { 0.0 } else { 1.0 }, 0.5);
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Runs one suite. Suites marked by [`Suite::needs_membership`] fail with
/// [`Error::Precondition`] on sequences outside the nonnegative Hausdorff class.
pub fn run_suite(seq: &MomentSequence, suite: Suite) -> Result<SuiteReport> {
    let member = is_f_nnd(seq)?.status.holds();
    if suite.needs_membership() && !member {
        return Err(Error::Precondition(format!(
            "suite {suite} needs a nonnegative Hausdorff sequence"
        )));
    }
    let mut c = Checks(Vec::new());
    match suite {
        Suite::Parallel => parallel_suite(seq, &mut c)?,
        Suite::Recursion => recursion_suite(seq, &mut c)?,
        Suite::Reflection => reflection_suite(seq, &mut c)?,
        Suite::Ranges => ranges_suite(seq, &mut c)?,
        Suite::Ordering => ordering_suite(seq, &mut c)?,
        Suite::HankelIdentities => hankel_suite(seq, member, &mut c)?,
    }
    Ok(SuiteReport { suite, checks: c.0 })
}

pub fn run_suites(seq: &MomentSequence, suites: &[Suite]) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(seq, s)).collect()
}

fn parallel_suite(seq: &MomentSequence, c: &mut Checks) -> Result<()> {
    let t = IntervalTable::new(seq)?;
    let (tol, w, reference) = (seq.tol(), seq.width(), seq.rank_reference());
    let pr = parallel_residuals(seq, &t)?;
    c.push("length_head".into(), pr.d0, limits::PARALLEL);
    for (i, r) in pr.per_index.iter().enumerate() {
        c.push(format!("length_parallel[{}]", i + 1), *r, limits::PARALLEL);
    }
    for j in 1..=seq.m() {
        let uo = parallel_sum_floor(&t.u[j], &t.o[j], tol, reference)?.value;
        let ou = parallel_sum_floor(&t.o[j], &t.u[j], tol, reference)?.value;
        c.rel_to(
            format!("parallel_commutes[{j}]"),
            &uo,
            &ou,
            t.scale(j),
            limits::PARALLEL,
        );
        let dp = pinv_floor(&t.d[j - 1], tol, reference);
        let lhs = &t.d[j];
        c.rel_to(
            format!("length_product_uo[{j}]"),
            lhs,
            &(&t.u[j] * &dp * &t.o[j] * re(w)),
            t.scale(j),
            limits::PARALLEL,
        );
        c.rel_to(
            format!("length_product_ou[{j}]"),
            lhs,
            &(&t.o[j] * &dp * &t.u[j] * re(w)),
            t.scale(j),
            limits::PARALLEL,
        );
    }
    Ok(())
}

fn recursion_suite(seq: &MomentSequence, c: &mut Checks) -> Result<()> {
    let t = IntervalTable::new(seq)?;
    let w = seq.width();
    for j in 0..seq.m() {
        let rhs = recursion_rhs(seq, &t.c[j], &t.d[j], j);
        let scale = t.scale(j + 1);
        c.rel_to(
            format!("length_recursion[{j}]"),
            &t.d[j + 1],
            &rhs,
            scale,
            limits::RECURSION,
        );
        let quarter = &t.d[j] * re(w / 4.0);
        c.leq_to(
            format!("length_monotone[{j}]"),
            &t.d[j + 1],
            &quarter,
            scale,
        );
        if rel_diff(seq.get(j + 1), &t.c[j]) <= limits::CENTRAL_STEP {
            c.rel_to(
                format!("central_equality[{j}]"),
                &t.d[j + 1],
                &quarter,
                scale,
                limits::RECURSION,
            );
        }
    }
    schur_recursions(seq, c)
}

/// Recursive formulas linking the Schur data of `s` with that of its two shifts.
fn schur_recursions(seq: &MomentSequence, c: &mut Checks) -> Result<()> {
    let (s, m, tol) = (seq.moments(), seq.m(), seq.tol());
    let (alpha, beta) = (seq.alpha(), seq.beta());
    let reference = seq.rank_reference();
    let sa = alpha_transform(s, alpha);
    let sb = beta_transform(s, beta);
    let q = seq.q();
    let eye = identity(q);
    let pf = |x: &CMatrix| pinv_floor(x, tol, reference);
    let tolr = limits::RECURSION;
    let size = |k: usize| s[..=k.min(m)].iter().map(norm2).fold(1.0, f64::max);
    let mut n = 1;
    while 2 * n - 1 <= m {
        let l_prev = schur_complement_floor(s, n - 1, tol, reference)?;
        let la_prev = schur_complement_floor(&sa, n - 1, tol, reference)?;
        let lb_prev = schur_complement_floor(&sb, n - 1, tol, reference)?;
        let gap = &s[2 * n - 1] - m_term_floor(s, n - 1, tol, reference)?;
        let ma_prev = m_term_floor(&sa, n - 1, tol, reference)?;
        let mb_prev = m_term_floor(&sb, n - 1, tol, reference)?;
        let lpp = pf(&l_prev);
        let th = theta_floor(s, n, tol, reference)?;
        let rhs = &s[2 * n - 1] * re(alpha) + &ma_prev + &la_prev * &lpp * &gap;
        c.rel_to(format!("theta_left[{n}]"), &th, &rhs, size(2 * n - 1), tolr);
        let rhs = &s[2 * n - 1] * re(beta) - (&mb_prev + &lb_prev * &lpp * &gap);
        c.rel_to(
            format!("theta_right[{n}]"),
            &th,
            &rhs,
            size(2 * n - 1),
            tolr,
        );
        if 2 * n <= m {
            let l = schur_complement_floor(s, n, tol, reference)?;
            let rhs = &sa[2 * n - 1] - &ma_prev - &la_prev * &lpp * &gap;
            c.rel_to(format!("schur_left[{n}]"), &l, &rhs, size(2 * n), tolr);
            let rhs = -(&sb[2 * n - 1] - &mb_prev) + &lb_prev * &lpp * &gap;
            c.rel_to(format!("schur_right[{n}]"), &l, &rhs, size(2 * n), tolr);
            let mn = m_term_floor(s, n, tol, reference)?;
            let fa = &eye * re(alpha) + pf(&la_prev) * (&sa[2 * n - 1] - &ma_prev);
            let fb = &eye * re(beta) + pf(&lb_prev) * (&sb[2 * n - 1] - &mb_prev);
            let rhs = &s[2 * n] * re(-alpha) + &mn + &l * &fa;
            c.rel_to(
                format!("theta_left_shift[{n}]"),
                &theta_floor(&sa, n, tol, reference)?,
                &rhs,
                size(2 * n),
                tolr,
            );
            let rhs = &s[2 * n] * re(beta) - (&mn + &l * &fb);
            c.rel_to(
                format!("theta_right_shift[{n}]"),
                &theta_floor(&sb, n, tol, reference)?,
                &rhs,
                size(2 * n),
                tolr,
            );
            if 2 * n < m {
                let top = &s[2 * n + 1] - &mn;
                let rhs = &top - &l * &fa;
                c.rel_to(
                    format!("schur_left_shift[{n}]"),
                    &schur_complement_floor(&sa, n, tol, reference)?,
                    &rhs,
                    size(2 * n + 1),
                    tolr,
                );
                let rhs = -top + &l * &fb;
                c.rel_to(
                    format!("schur_right_shift[{n}]"),
                    &schur_complement_floor(&sb, n, tol, reference)?,
                    &rhs,
                    size(2 * n + 1),
                    tolr,
                );
            }
        }
        n += 1;
    }
    Ok(())
}

fn reflection_suite(seq: &MomentSequence, c: &mut Checks) -> Result<()> {
    let r = reflect_class_dual(seq)?;
    let (s, rs, m, tol, q) = (seq.moments(), r.moments(), seq.m(), seq.tol(), seq.q());
    let reference = seq.rank_reference();
    c.same_status(
        "class_full".into(),
        is_f_nnd(seq)?.status,
        is_f_nnd(&r)?.status,
    );
    c.same_status(
        "class_left_right".into(),
        is_k_nnd(seq)?.status,
        is_l_nnd(&r)?.status,
    );
    c.same_status(
        "class_right_left".into(),
        is_l_nnd(seq)?.status,
        is_k_nnd(&r)?.status,
    );
    c.same_status(
        "class_left_right_ext".into(),
        is_k_nnd_extendable(seq)?.status,
        is_l_nnd_extendable(&r)?.status,
    );
    c.same_status(
        "class_right_left_ext".into(),
        is_l_nnd_extendable(seq)?.status,
        is_k_nnd_extendable(&r)?.status,
    );
    let (sa, sb, sab) = (
        alpha_transform(s, seq.alpha()),
        beta_transform(s, seq.beta()),
        ab_transform(s, seq.alpha(), seq.beta()),
    );
    let (ra, rb, rab) = (
        alpha_transform(rs, r.alpha()),
        beta_transform(rs, r.beta()),
        ab_transform(rs, r.alpha(), r.beta()),
    );
    let lin = limits::LINEAR;
    let coeff = 1f64.max(seq.alpha().abs()).max(seq.beta().abs()).powi(2);
    for n in 0..=m / 2 {
        let j = structural(q, n).j;
        let conj = |x: &CMatrix| &j * x * &j;
        let top = (0..3)
            .filter(|&shift| 2 * n + shift <= m)
            .map(|shift| block_hankel(s, n, shift).map(|x| norm2(&x)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let scale = coeff * top;
        c.rel_to(
            format!("reflect_h[{n}]"),
            &block_hankel(rs, n, 0)?,
            &conj(&block_hankel(s, n, 0)?),
            scale,
            lin,
        );
        if 2 * n < m {
            let k = block_hankel(s, n, 1)?;
            c.rel_to(
                format!("reflect_k[{n}]"),
                &block_hankel(rs, n, 1)?,
                &(-conj(&k)),
                scale,
                lin,
            );
            c.rel_to(
                format!("reflect_left_shift[{n}]"),
                &block_hankel(&ra, n, 0)?,
                &conj(&block_hankel(&sb, n, 0)?),
                scale,
                lin,
            );
            c.rel_to(
                format!("reflect_right_shift[{n}]"),
                &block_hankel(&rb, n, 0)?,
                &conj(&block_hankel(&sa, n, 0)?),
                scale,
                lin,
            );
        }
        if 2 * n + 2 <= m {
            c.rel_to(
                format!("reflect_g[{n}]"),
                &block_hankel(rs, n, 2)?,
                &conj(&block_hankel(s, n, 2)?),
                scale,
                lin,
            );
            c.rel_to(
                format!("reflect_two_sided_shift[{n}]"),
                &block_hankel(&rab, n, 0)?,
                &conj(&block_hankel(&sab, n, 0)?),
                scale,
                lin,
            );
        }
        let pinv_tol = limits::PSEUDO_INVERSE;
        let size = |k: usize| s[..=k].iter().map(norm2).fold(1.0, f64::max);
        if n >= 1 {
            c.rel_to(
                format!("reflect_theta[{n}]"),
                &theta_floor(rs, n, tol, reference)?,
                &theta_floor(s, n, tol, reference)?,
                size(2 * n),
                pinv_tol,
            );
        }
        c.rel_to(
            format!("reflect_schur[{n}]"),
            &schur_complement_floor(rs, n, tol, reference)?,
            &schur_complement_floor(s, n, tol, reference)?,
            size(2 * n),
            pinv_tol,
        );
        c.rel_to(
            format!("reflect_m[{n}]"),
            &m_term_floor(rs, n, tol, reference)?,
            &(-m_term_floor(s, n, tol, reference)?),
            size((2 * n + 1).min(m)),
            pinv_tol,
        );
    }
    Ok(())
}

fn ranges_suite(seq: &MomentSequence, c: &mut Checks) -> Result<()> {
    let t = IntervalTable::new(seq)?;
    let (tol, reference) = (seq.tol(), seq.rank_reference());
    let proj = |x: &CMatrix| proj_range_floor(x, tol, reference);
    let dist = |x: &CMatrix, y: &CMatrix| norm2(&(x - y));
    let m = seq.m();
    c.push(
        "range_head".into(),
        dist(&proj(&t.d[0]), &proj(&t.u[0])),
        limits::RANGE,
    );
    for j in 0..=m {
        let pd = proj(&t.d[j]);
        if j >= 1 {
            let cap = subspace_intersection_projector(&t.u[j], &t.o[j], tol, reference);
            c.push(
                format!("range_intersection[{j}]"),
                dist(&pd, &cap),
                limits::RANGE,
            );
            let ps = parallel_sum_floor(&t.u[j], &t.o[j], tol, reference)?.value;
            c.push(
                format!("range_parallel_sum[{j}]"),
                dist(&proj(&ps), &cap),
                limits::RANGE,
            );
        }
        if j < m {
            let sum = range_sum_projector(&t.u[j + 1], &t.o[j + 1], tol, reference);
            c.push(format!("range_sum[{j}]"), dist(&pd, &sum), limits::RANGE);
        }
    }
    Ok(())
}

fn ordering_suite(seq: &MomentSequence, c: &mut Checks) -> Result<()> {
    let t = IntervalTable::new(seq)?;
    let (s, m, q) = (seq.moments(), seq.m(), seq.q());
    let (alpha, beta) = (seq.alpha(), seq.beta());
    let zero = CMatrix::zeros(q, q);
    for j in 0..=m {
        let (lo, hi) = if j % 2 == 0 {
            (&s[j] * re(alpha), &s[j] * re(beta))
        } else {
            (
                zero.clone(),
                &s[j - 1] * re(-alpha * beta) + &s[j] * re(alpha + beta),
            )
        };
        c.leq(format!("order_low_a[{j}]"), &lo, &t.a[j]);
        c.leq(format!("order_a_c[{j}]"), &t.a[j], &t.c[j]);
        c.leq(format!("order_c_b[{j}]"), &t.c[j], &t.b[j]);
        c.leq(format!("order_b_high[{j}]"), &t.b[j], &hi);
        c.leq(format!("gap_lower[{j}]"), &zero, &t.u[j]);
        if j >= 1 {
            c.leq(format!("gap_upper[{j}]"), &zero, &t.o[j]);
        }
        if j < m {
            c.leq(format!("next_above_a[{j}]"), &t.a[j], &s[j + 1]);
            c.leq(format!("next_below_b[{j}]"), &s[j + 1], &t.b[j]);
        }
    }
    Ok(())
}

fn hankel_suite(seq: &MomentSequence, member: bool, c: &mut Checks) -> Result<()> {
    let (s, m, tol, q) = (seq.moments(), seq.m(), seq.tol(), seq.q());
    let reference = seq.rank_reference();
    let (alpha, beta) = (seq.alpha(), seq.beta());
    let w = beta - alpha;
    let (sa, sb, sab) = (
        alpha_transform(s, alpha),
        beta_transform(s, beta),
        ab_transform(s, alpha, beta),
    );
    let lin = limits::LINEAR;
    let coeff = 1f64.max(alpha.abs()).max(beta.abs()).powi(2);
    let mut n = 0;
    while 2 * n < m {
        let h = block_hankel(s, n, 0)?;
        let k = block_hankel(s, n, 1)?;
        let ha = block_hankel(&sa, n, 0)?;
        let hb = block_hankel(&sb, n, 0)?;
        let top = if 2 * n + 2 <= m {
            norm2(&block_hankel(s, n, 2)?)
        } else {
            0.0
        };
        let scale = coeff * norm2(&h).max(norm2(&k)).max(top);
        c.rel_to(
            format!("left_shift_block[{n}]"),
            &ha,
            &(&h * re(-alpha) + &k),
            scale,
            lin,
        );
        c.rel_to(
            format!("right_shift_block[{n}]"),
            &hb,
            &(&h * re(beta) - &k),
            scale,
            lin,
        );
        c.rel_to(
            format!("width_h[{n}]"),
            &(&h * re(w)),
            &(&ha + &hb),
            scale,
            lin,
        );
        c.rel_to(
            format!("width_k[{n}]"),
            &(&k * re(w)),
            &(&ha * re(beta) + &hb * re(alpha)),
            scale,
            lin,
        );
        if 2 * n + 2 <= m {
            let g = block_hankel(s, n, 2)?;
            let hab = block_hankel(&sab, n, 0)?;
            let ka = block_hankel(&sa, n, 1)?;
            let kb = block_hankel(&sb, n, 1)?;
            c.rel_to(
                format!("two_sided_block[{n}]"),
                &hab,
                &(&h * re(-alpha * beta) + &k * re(alpha + beta) - &g),
                scale,
                lin,
            );
            c.rel_to(
                format!("two_sided_from_right[{n}]"),
                &hab,
                &(&hb * re(-alpha) + &kb),
                scale,
                lin,
            );
            c.rel_to(
                format!("two_sided_from_left[{n}]"),
                &hab,
                &(&ha * re(beta) - &ka),
                scale,
                lin,
            );
            c.rel_to(
                format!("width_g[{n}]"),
                &(&g * re(w)),
                &(&ha * re(beta * beta) + &hb * re(alpha * alpha) - &hab * re(w)),
                scale,
                lin,
            );
            let st = structural(q, n + 1);
            let h1 = block_hankel(s, n + 1, 0)?;
            let left = &st.nabla - &st.delta * re(alpha);
            let right = &st.delta * re(beta) - &st.nabla;
            c.rel_to(
                format!("left_shift_congruence[{n}]"),
                &(&ha * re(w)),
                &(left.adjoint() * &h1 * &left + &hab),
                scale,
                lin,
            );
            c.rel_to(
                format!("right_shift_congruence[{n}]"),
                &(&hb * re(w)),
                &(right.adjoint() * &h1 * &right + &hab),
                scale,
                lin,
            );
        }
        if member && n >= 1 {
            let delta = structural(q, n).delta;
            let ps = parallel_sum_floor(&ha, &hb, tol, reference)?.value;
            let hab_prev = block_hankel(&sab, n - 1, 0)?;
            c.rel(
                format!("two_sided_parallel[{n}]"),
                &hab_prev,
                &(delta.adjoint() * ps * &delta * re(w)),
                limits::HANKEL_PARALLEL,
            );
        }
        n += 1;
    }
    let t = IntervalTable::new(seq)?;
    let pinv_tol = limits::PSEUDO_INVERSE;
    let size = |k: usize| s[..=k.min(m)].iter().map(norm2).fold(1.0, f64::max);
    for n in 0..=m / 2 {
        c.rel_to(
            format!("gap_is_schur[{n}]"),
            &t.u[2 * n],
            &schur_complement_floor(s, n, tol, reference)?,
            size(2 * n),
            pinv_tol,
        );
        if 2 * n < m {
            c.rel_to(
                format!("gap_is_left_schur[{n}]"),
                &t.u[2 * n + 1],
                &schur_complement_floor(&sa, n, tol, reference)?,
                size(2 * n + 1),
                pinv_tol,
            );
            c.rel_to(
                format!("gap_is_right_schur[{n}]"),
                &t.o[2 * n + 1],
                &schur_complement_floor(&sb, n, tol, reference)?,
                size(2 * n + 1),
                pinv_tol,
            );
        }
        if 2 * n + 2 <= m {
            c.rel_to(
                format!("gap_is_two_sided_schur[{n}]"),
                &t.o[2 * n + 2],
                &schur_complement_floor(&sab, n, tol, reference)?,
                size(2 * n + 2),
                pinv_tol,
            );
        }
    }
    Ok(())
}

/// How a corpus moment was produced from its predecessors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Ball,
    /// Ball point whose parameter has an eigenvalue at 0 or 1.
    BoundaryBall,
    Central,
    Lower,
    Upper,
    /// The interval had already collapsed, so the midpoint was forced.
    Forced,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub seed: u64,
    pub seq: MomentSequence,
    /// `steps[i]` describes how `s_{i+1}` was produced.
    pub steps: Vec<StepKind>,
}

/// Intervals the mixed corpus draws from.
/// Ball steps of the corpus draw contraction eigenvalues from `[STEP_MARGIN, 1 - STEP_MARGIN]`.
pub const STEP_MARGIN: f64 = 0.05;

pub const CORPUS_INTERVALS: [(f64, f64); 5] = [
    (0.0, 1.0),
    (-1.0, 1.0),
    (-2.0, 3.0),
    (0.5, 2.5),
    (-3.0, -1.0),
];

/// Sizes the mixed corpus draws from.
#[derive(Debug, Clone, Copy)]
pub struct CorpusShape {
    pub q_max: usize,
    pub m_max: usize,
}

impl Default for CorpusShape {
    fn default() -> Self {
        Self { q_max: 3, m_max: 6 }
    }
}

fn contraction_with_values<R: Rng>(rng: &mut R, values: &[f64]) -> CMatrix {
    let q = values.len();
    let u = crate::extensions::gaussian_matrix(rng, q).qr().q();
    hermitian_part(&(&u * real_diag(values) * u.adjoint()))
}

/// One corpus sequence: `q` in `1..=q_max`, `m` in `1..=m_max`, an interval from
/// [`CORPUS_INTERVALS`], and a mix of ball, boundary-ball, central, lower and upper steps.
pub fn corpus_entry(seed: u64, shape: CorpusShape) -> Result<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = rng.random_range(1..=shape.q_max);
    let m = rng.random_range(1..=shape.m_max);
    let (alpha, beta) = CORPUS_INTERVALS[rng.random_range(0..CORPUS_INTERVALS.len())];
    let mut seq = MomentSequence::new(
        alpha,
        beta,
        vec![random_head(&mut rng, q)],
        Tolerances::default(),
    )?;
    let mut steps = Vec::with_capacity(m);
    for _ in 0..m {
        let t = IntervalTable::new(&seq)?;
        let j = seq.m();
        let roll: f64 = rng.random();
        let values: Vec<f64> = (0..q)
            .map(|_| rng.random_range(STEP_MARGIN..=1.0 - STEP_MARGIN))
            .collect();
        let (kind, next) = if degeneracy_verdict(&seq, &t.d[j]).status == Status::Inside {
            (StepKind::Forced, t.c[j].clone())
        } else if roll < 0.5 {
            let k = contraction_with_values(&mut rng, &values);
            (
                StepKind::Ball,
                ball_point(&t.a[j], &t.d[j], &k, seq.tol(), seq.rank_reference())?,
            )
        } else if roll < 0.65 {
            let mut v = values;
            v[0] = if rng.random::<bool>() { 0.0 } else { 1.0 };
            let k = contraction_with_values(&mut rng, &v);
            (
                StepKind::BoundaryBall,
                ball_point(&t.a[j], &t.d[j], &k, seq.tol(), seq.rank_reference())?,
            )
        } else if roll < 0.8 {
            (StepKind::Central, t.c[j].clone())
        } else if roll < 0.9 {
            (StepKind::Lower, t.a[j].clone())
        } else {
            (StepKind::Upper, t.b[j].clone())
        };
        steps.push(kind);
        seq = seq.pushed(hermitian_part(&next))?;
    }
    Ok(CorpusEntry { seed, seq, steps })
}

/// Corpus entries for seeds `base_seed..base_seed + count`, generated in parallel.
pub fn generate_corpus(
    count: usize,
    base_seed: u64,
    shape: CorpusShape,
) -> Result<Vec<CorpusEntry>> {
    par::map_indexed(count, |i| corpus_entry(base_seed + i as u64, shape))
        .into_iter()
        .collect()
}

/// Outcome of running suites over many sequences.
#[derive(Debug, Clone, Serialize)]
pub struct BatchOutcome {
    pub index: usize,
    pub reports: Vec<SuiteReport>,
    pub error: Option<String>,
}

impl BatchOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.reports.iter().all(SuiteReport::passed)
    }
}

fn outcome(index: usize, seq: &MomentSequence, suites: &[Suite]) -> BatchOutcome {
    match run_suites(seq, suites) {
        Ok(reports) => BatchOutcome {
            index,
            reports,
            error: None,
        },
        Err(e) => BatchOutcome {
            index,
            reports: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

/// Runs `suites` on every sequence; parallel when the `parallel` feature is on.
pub fn run_batch(seqs: &[MomentSequence], suites: &[Suite]) -> Vec<BatchOutcome> {
    par::map_indexed(seqs.len(), |i| outcome(i, &seqs[i], suites))
}

/// Same as [`run_batch`], always on the calling thread.
pub fn run_batch_sequential(seqs: &[MomentSequence], suites: &[Suite]) -> Vec<BatchOutcome> {
    par::map_sequential(seqs.len(), |i| outcome(i, &seqs[i], suites))
}

/// Largest residual per suite over a batch.
pub fn max_residuals(outcomes: &[BatchOutcome]) -> Vec<(Suite, f64)> {
    let mut out: Vec<(Suite, f64)> = Vec::new();
    for r in outcomes.iter().flat_map(|o| &o.reports) {
        match out.iter_mut().find(|(s, _)| *s == r.suite) {
            Some(entry) => entry.1 = entry.1.max(r.max_residual()),
            None => out.push((r.suite, r.max_residual())),
        }
    }
    out
}
