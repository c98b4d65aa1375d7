//! Membership tests for the moment-sequence classes.
//!
//! Every test returns a tri-state [`ClassVerdict`]; composite conditions are combined
//! with [`ClassVerdict::and`]. `failing_index` carries the Hankel order of the deciding
//! block and `detail` names it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hankel::{block_column, block_hankel, schur_complement_floor};
use crate::matrix::{
    is_hermitian, is_pd, is_psd, null_included_floor, range_included_floor, CMatrix,
};
use crate::sequence::MomentSequence;
use crate::tolerance::Tolerances;
use crate::verdict::{ClassVerdict, Status};

/// `-alpha s_j + s_{j+1}`, one entry shorter than `s`.
pub fn alpha_transform(s: &[CMatrix], alpha: f64) -> Vec<CMatrix> {
    s.windows(2)
        .map(|w| &w[1] - &w[0] * Complex64::new(alpha, 0.0))
        .collect()
}

/// `beta s_j - s_{j+1}`, one entry shorter than `s`.
pub fn beta_transform(s: &[CMatrix], beta: f64) -> Vec<CMatrix> {
    s.windows(2)
        .map(|w| &w[0] * Complex64::new(beta, 0.0) - &w[1])
        .collect()
}

/// `-alpha beta s_j + (alpha + beta) s_{j+1} - s_{j+2}`, two entries shorter than `s`.
pub fn ab_transform(s: &[CMatrix], alpha: f64, beta: f64) -> Vec<CMatrix> {
    s.windows(3)
        .map(|w| {
            &w[0] * Complex64::new(-alpha * beta, 0.0) + &w[1] * Complex64::new(alpha + beta, 0.0)
                - &w[2]
        })
        .collect()
}

/// `(-1)^j s_j`.
pub fn reflect(s: &[CMatrix]) -> Vec<CMatrix> {
    s.iter()
        .enumerate()
        .map(|(j, x)| if j % 2 == 0 { x.clone() } else { -x })
        .collect()
}

#[derive(Debug, Clone)]
pub struct DerivedSequences {
    pub s_alpha: Vec<CMatrix>,
    pub s_beta: Vec<CMatrix>,
    /// Empty when `m < 2`.
    pub s_ab: Vec<CMatrix>,
    pub reflected: Vec<CMatrix>,
}

pub fn derive(seq: &MomentSequence) -> Result<DerivedSequences> {
    if seq.m() < 1 {
        return Err(Error::Precondition(
            "derived sequences need at least two moments".into(),
        ));
    }
    let s = seq.moments();
    Ok(DerivedSequences {
        s_alpha: alpha_transform(s, seq.alpha()),
        s_beta: beta_transform(s, seq.beta()),
        s_ab: ab_transform(s, seq.alpha(), seq.beta()),
        reflected: reflect(s),
    })
}

/// The reflected sequence `(-1)^j s_j` on `[-beta, -alpha]`.
pub fn reflect_class_dual(seq: &MomentSequence) -> Result<MomentSequence> {
    MomentSequence::new(
        -seq.beta(),
        -seq.alpha(),
        reflect(seq.moments()),
        *seq.tol(),
    )
}

fn block_test(
    s: &[CMatrix],
    n: usize,
    tol: &Tolerances,
    strict: bool,
    label: &str,
) -> Result<ClassVerdict> {
    let h = block_hankel(s, n, 0)?;
    let v = if strict {
        is_pd(&h, tol)?
    } else {
        is_psd(&h, tol)?
    };
    Ok(v.labelled(label).at(n))
}

/// `H_n ≽ 0` (or `≻ 0` when `strict`).
pub fn is_hankel_nnd(seq: &MomentSequence, n: usize) -> Result<ClassVerdict> {
    block_test(seq.moments(), n, seq.tol(), false, "H")
}

pub fn is_hankel_pd(seq: &MomentSequence, n: usize) -> Result<ClassVerdict> {
    block_test(seq.moments(), n, seq.tol(), true, "H")
}

fn f_test(seq: &MomentSequence, strict: bool) -> Result<ClassVerdict> {
    let (s, m, tol) = (seq.moments(), seq.m(), seq.tol());
    if m % 2 == 1 {
        let n = (m - 1) / 2;
        let a = block_test(&alpha_transform(s, seq.alpha()), n, tol, strict, "H_alpha")?;
        let b = block_test(&beta_transform(s, seq.beta()), n, tol, strict, "H_beta")?;
        Ok(a.and(b))
    } else {
        let n = m / 2;
        let mut v = block_test(s, n, tol, strict, "H")?;
        if n >= 1 {
            let ab = ab_transform(s, seq.alpha(), seq.beta());
            v = v.and(block_test(&ab, n - 1, tol, strict, "H_alpha_beta")?);
        }
        Ok(v)
    }
}

/// Hausdorff nonnegative-definite class on `[alpha, beta]`.
pub fn is_f_nnd(seq: &MomentSequence) -> Result<ClassVerdict> {
    f_test(seq, false)
}

/// Hausdorff positive-definite class on `[alpha, beta]`.
pub fn is_f_pd(seq: &MomentSequence) -> Result<ClassVerdict> {
    f_test(seq, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl Side {
    fn transform(self, seq: &MomentSequence) -> Vec<CMatrix> {
        match self {
            Side::Left => alpha_transform(seq.moments(), seq.alpha()),
            Side::Right => beta_transform(seq.moments(), seq.beta()),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Side::Left => "H_alpha",
            Side::Right => "H_beta",
        }
    }
}

fn one_sided(seq: &MomentSequence, side: Side) -> Result<ClassVerdict> {
    let (s, m, tol) = (seq.moments(), seq.m(), seq.tol());
    let t = side.transform(seq);
    let n = m / 2;
    let mut v = block_test(s, n, tol, false, "H")?;
    if m % 2 == 1 {
        v = v.and(block_test(&t, n, tol, false, side.label())?);
    } else if n >= 1 {
        v = v.and(block_test(&t, n - 1, tol, false, side.label())?);
    }
    Ok(v)
}

fn one_sided_extendable(seq: &MomentSequence, side: Side) -> Result<ClassVerdict> {
    let base = one_sided(seq, side)?;
    let m = seq.m();
    if m == 0 {
        return Ok(base);
    }
    let (s, tol, reference) = (seq.moments(), seq.tol(), seq.rank_reference());
    let t = side.transform(seq);
    let range = if m % 2 == 1 {
        let n = m.div_ceil(2);
        let l = schur_complement_floor(s, n - 1, tol, reference)?;
        let lt = schur_complement_floor(&t, n - 1, tol, reference)?;
        range_included_floor(&lt, &l, tol, reference)?.at(n - 1)
    } else {
        let n = m / 2;
        let l = schur_complement_floor(s, n, tol, reference)?;
        let lt = schur_complement_floor(&t, n - 1, tol, reference)?;
        range_included_floor(&l, &lt, tol, reference)?.at(n)
    };
    Ok(base.and(range.labelled("schur_range")))
}

/// Left one-sided Stieltjes class (the `alpha`-shifted block is nonnegative).
pub fn is_k_nnd(seq: &MomentSequence) -> Result<ClassVerdict> {
    one_sided(seq, Side::Left)
}

/// Right one-sided Stieltjes class (the `beta`-shifted block is nonnegative).
pub fn is_l_nnd(seq: &MomentSequence) -> Result<ClassVerdict> {
    one_sided(seq, Side::Right)
}

pub fn is_k_nnd_extendable(seq: &MomentSequence) -> Result<ClassVerdict> {
    one_sided_extendable(seq, Side::Left)
}

pub fn is_l_nnd_extendable(seq: &MomentSequence) -> Result<ClassVerdict> {
    one_sided_extendable(seq, Side::Right)
}

/// Hankel nonnegative-definite extendability.
///
/// For even `m` both the range form and the Schur-complement null-space form are
/// evaluated; if they disagree the verdict is `boundary` with detail
/// `range_nullspace_disagree`.
pub fn is_hankel_nnd_extendable(seq: &MomentSequence) -> Result<ClassVerdict> {
    let (s, m, tol, reference) = (seq.moments(), seq.m(), seq.tol(), seq.rank_reference());
    let n = m / 2;
    let psd = block_test(s, n, tol, false, "H")?;
    if m == 0 {
        return Ok(psd);
    }
    if m % 2 == 0 {
        let y = block_column(s, n + 1, 2 * n)?;
        let h = block_hankel(s, n - 1, 0)?;
        let by_range = range_included_floor(&y, &h, tol, reference)?
            .labelled("hankel_range")
            .at(n);
        let l_prev = schur_complement_floor(s, n - 1, tol, reference)?;
        let l_top = schur_complement_floor(s, n, tol, reference)?;
        let by_null = null_included_floor(&l_prev, &l_top, tol, reference)?
            .labelled("schur_nullspace")
            .at(n);
        let cond = if by_range.status == by_null.status {
            by_range
        } else {
            let scale = by_range.scale;
            ClassVerdict::new(Status::Boundary, 0.0, scale, "range_nullspace_disagree").at(n)
        };
        Ok(psd.and(cond))
    } else {
        let herm = is_hermitian(&s[m], tol)?.labelled("last_hermitian").at(m);
        let y = block_column(s, n + 1, m)?;
        let h = block_hankel(s, n, 0)?;
        let range = range_included_floor(&y, &h, tol, reference)?
            .labelled("hankel_range")
            .at(n);
        Ok(psd.and(herm).and(range))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassName {
    Hnnd,
    Hpd,
    #[serde(rename = "Hnnd_ext")]
    HnndExt,
    Fnnd,
    Fpd,
    Knnd,
    #[serde(rename = "Knnd_ext")]
    KnndExt,
    Lnnd,
    #[serde(rename = "Lnnd_ext")]
    LnndExt,
}

impl ClassName {
    pub const ALL: [ClassName; 9] = [
        ClassName::Hnnd,
        ClassName::Hpd,
        ClassName::HnndExt,
        ClassName::Fnnd,
        ClassName::Fpd,
        ClassName::Knnd,
        ClassName::KnndExt,
        ClassName::Lnnd,
        ClassName::LnndExt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassName::Hnnd => "Hnnd",
            ClassName::Hpd => "Hpd",
            ClassName::HnndExt => "Hnnd_ext",
            ClassName::Fnnd => "Fnnd",
            ClassName::Fpd => "Fpd",
            ClassName::Knnd => "Knnd",
            ClassName::KnndExt => "Knnd_ext",
            ClassName::Lnnd => "Lnnd",
            ClassName::LnndExt => "Lnnd_ext",
        }
    }

    pub fn evaluate(self, seq: &MomentSequence) -> Result<ClassVerdict> {
        let top = seq.m() / 2;
        match self {
            ClassName::Hnnd => is_hankel_nnd(seq, top),
            ClassName::Hpd => is_hankel_pd(seq, top),
            ClassName::HnndExt => is_hankel_nnd_extendable(seq),
            ClassName::Fnnd => is_f_nnd(seq),
            ClassName::Fpd => is_f_pd(seq),
            ClassName::Knnd => is_k_nnd(seq),
            ClassName::KnndExt => is_k_nnd_extendable(seq),
            ClassName::Lnnd => is_l_nnd(seq),
            ClassName::LnndExt => is_l_nnd_extendable(seq),
        }
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ClassName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ClassName::ALL.iter().map(|c| c.as_str()).collect();
                format!("unknown class '{s}', expected one of {}", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub verdicts: BTreeMap<ClassName, ClassVerdict>,
    /// Implications between classes that the verdicts violate.
    pub inconsistencies: Vec<String>,
}

impl ClassReport {
    pub fn get(&self, name: ClassName) -> &ClassVerdict {
        &self.verdicts[&name]
    }

    fn check_implications(&mut self, m: usize) {
        use ClassName::*;
        let holds = |c: ClassName| self.verdicts[&c].status.holds();
        let mut found = Vec::new();
        let implications = [
            (Fpd, Fnnd),
            (Fnnd, KnndExt),
            (Fnnd, LnndExt),
            (Fnnd, HnndExt),
            (KnndExt, Knnd),
            (LnndExt, Lnnd),
            (HnndExt, Hnnd),
            (Hpd, Hnnd),
        ];
        for (a, b) in implications {
            if holds(a) && !holds(b) {
                found.push(format!("{a} holds but {b} does not"));
            }
        }
        if m % 2 == 1 && holds(Fnnd) != (holds(Knnd) && holds(Lnnd)) {
            found.push("odd order: Fnnd differs from Knnd and Lnnd".to_string());
        }
        self.inconsistencies = found;
    }
}

/// Evaluates every class and cross-checks the implications between them.
pub fn classify(seq: &MomentSequence) -> Result<ClassReport> {
    let mut verdicts = BTreeMap::new();
    for name in ClassName::ALL {
        verdicts.insert(name, name.evaluate(seq)?);
    }
    let mut report = ClassReport {
        verdicts,
        inconsistencies: Vec::new(),
    };
    report.check_implications(seq.m());
    Ok(report)
}
