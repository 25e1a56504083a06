//! Admissible nu-monomial combinatorics, the monomial sets `M(d, l)`, and
//! the strong/weak conjecture checkers together with the cited minor-ideal
//! theorem for the full tensor boundary matrix.
//!
//! Checkers report evidence; a FAIL carries a serialized witness and is a
//! first-class outcome, never an assertion failure.

use crate::complex::{fitt_shift1_from_complex, morphism_tensor_f, pruned_complex_d};
use crate::error::{Error, Result};
use crate::group::{GroupElement, Subgroup};
use crate::ideal::{
    frac_ideal_equal, ideal_equal, minors, DenomFactor, FractionalIdeal, IdealHandle,
};
use crate::matrix::RingMatrix;
use crate::ring::{gamma_power_poly, norm_element, RingContext, RingElement};
use std::fmt;
use std::sync::Arc;

/// A nu-monomial `nu_1^{f_1} ... nu_r^{f_r}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NuMonomial {
    pub exps: Vec<u32>,
}

impl NuMonomial {
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Number of indices that actually occur.
    pub fn support_size(&self) -> usize {
        self.exps.iter().filter(|&&f| f > 0).count()
    }

    /// Admissibility: after sorting the exponents in descending order, every
    /// partial sum is bounded by `(r-1) + (r-2) + ...`.
    pub fn is_admissible(&self) -> bool {
        let r = self.exps.len();
        let mut sorted = self.exps.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut partial: u64 = 0;
        let mut bound: u64 = 0;
        for (i, &f) in sorted.iter().enumerate() {
            partial += f as u64;
            bound += (r - 1 - i) as u64;
            if partial > bound {
                return false;
            }
        }
        true
    }
}

/// A `(tau, nu)`-monomial with disjoint supports; a shared index would make
/// the product vanish.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TauNuMonomial {
    pub tau: Vec<u32>,
    pub nu: Vec<u32>,
}

impl TauNuMonomial {
    pub fn new(tau: Vec<u32>, nu: Vec<u32>) -> Result<Self> {
        if tau.len() != nu.len() {
            return Err(Error::Dimension("exponent tuple lengths differ".into()));
        }
        if tau.iter().zip(&nu).any(|(&a, &b)| a > 0 && b > 0) {
            return Err(Error::Hypothesis(
                "tau and nu supports must be disjoint".into(),
            ));
        }
        Ok(TauNuMonomial { tau, nu })
    }

    pub fn degree(&self) -> u32 {
        self.tau.iter().sum::<u32>() + self.nu.iter().sum::<u32>()
    }

    pub fn nu_part(&self) -> NuMonomial {
        NuMonomial {
            exps: self.nu.clone(),
        }
    }
}

impl fmt::Debug for TauNuMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &a) in self.tau.iter().enumerate() {
            if a == 1 {
                parts.push(format!("t{}", i + 1));
            } else if a > 1 {
                parts.push(format!("t{}^{}", i + 1, a));
            }
        }
        for (i, &b) in self.nu.iter().enumerate() {
            if b == 1 {
                parts.push(format!("n{}", i + 1));
            } else if b > 1 {
                parts.push(format!("n{}^{}", i + 1, b));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

fn compositions_u32(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for rest in compositions_u32(total - first, parts - 1) {
            let mut c = Vec::with_capacity(parts);
            c.push(first);
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

/// `M(d, l)`: all degree-`d` `(tau, nu)`-monomials in `r` indices whose
/// nu-part is admissible and mentions at least `l` distinct indices.
/// Non-positive `l` imposes no constraint.
pub fn enumerate_m(d: u32, l: i64, r: usize) -> Vec<TauNuMonomial> {
    let mut out = Vec::new();
    for nu_deg in 0..=d {
        for nu in compositions_u32(nu_deg, r) {
            let nm = NuMonomial { exps: nu.clone() };
            if !nm.is_admissible() {
                continue;
            }
            if (nm.support_size() as i64) < l {
                continue;
            }
            let free: Vec<usize> = (0..r).filter(|&i| nu[i] == 0).collect();
            for tc in compositions_u32(d - nu_deg, free.len()) {
                let mut tau = vec![0u32; r];
                for (k, &i) in free.iter().enumerate() {
                    tau[i] = tc[k];
                }
                out.push(TauNuMonomial {
                    tau,
                    nu: nu.clone(),
                });
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Ring interpretation of monomial indices: per index `i`, the generator
/// used for `tau_i` and the subgroup norm used for `nu_i`.
#[derive(Clone)]
pub struct MonomialInterp {
    pub taus: Vec<RingElement>,
    pub nus: Vec<RingElement>,
}

impl MonomialInterp {
    /// Interpretation from a list of cyclic-subgroup generators inside the
    /// context's group: `tau_i = sigma_i - 1`, `nu_i = N_{<sigma_i>}`.
    pub fn from_generators(ctx: &Arc<RingContext>, sigmas: &[GroupElement]) -> Result<Self> {
        let mut taus = Vec::new();
        let mut nus = Vec::new();
        for s in sigmas {
            let sub = Subgroup::new(ctx.group().clone(), vec![s.clone()])?;
            taus.push(RingElement::from_group_element(ctx, s).sub(&RingElement::one(ctx)));
            nus.push(norm_element(ctx, &sub));
        }
        Ok(MonomialInterp { taus, nus })
    }

    pub fn element(&self, ctx: &Arc<RingContext>, z: &TauNuMonomial) -> RingElement {
        let mut acc = RingElement::one(ctx);
        for (i, &a) in z.tau.iter().enumerate() {
            for _ in 0..a {
                acc = acc.mul(&self.taus[i]);
            }
        }
        for (i, &b) in z.nu.iter().enumerate() {
            for _ in 0..b {
                acc = acc.mul(&self.nus[i]);
            }
        }
        acc
    }

    pub fn ideal_of(&self, ctx: &Arc<RingContext>, set: &[TauNuMonomial]) -> IdealHandle {
        IdealHandle::new(ctx, set.iter().map(|z| self.element(ctx, z)).collect())
    }
}

/// Degree-3 boundary of the full tensor complex: rows labeled by all
/// degree-3 monomials, columns by all degree-2 monomials, pure powers
/// included.
pub fn build_mtilde(ctx: &Arc<RingContext>, sigmas: &[GroupElement]) -> Result<RingMatrix> {
    let c = crate::complex::product_complex_c(ctx, sigmas, 3)?;
    Ok(c.boundary(3).clone())
}

/// The pruned matrix: rows with pure-cube labels and columns with
/// pure-square labels removed; equals the degree-3 boundary of the pruned
/// complex.
pub fn build_a(ctx: &Arc<RingContext>, sigmas: &[GroupElement]) -> Result<RingMatrix> {
    let f = morphism_tensor_f(ctx, sigmas, 3)?;
    let d = pruned_complex_d(&f)?;
    Ok(d.boundary(3).clone())
}

/// One comparison outcome. `witness` serializes a generator of one side
/// that the other side misses.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub label: String,
    pub e: Option<usize>,
    pub pass: bool,
    pub monomial_count: usize,
    pub lhs_span_log_p: u64,
    pub rhs_span_log_p: u64,
    pub witness: Option<String>,
}

fn compare_ideals(
    label: String,
    e: Option<usize>,
    monomial_count: usize,
    lhs: &IdealHandle,
    rhs: &IdealHandle,
) -> Result<CheckReport> {
    let pass = ideal_equal(lhs, rhs)?;
    let witness = if pass {
        None
    } else {
        let mut w = None;
        for g in rhs.generators() {
            if !lhs.contains(g) {
                w = Some(format!(
                    "monomial-side generator not in minors: {}",
                    g.render()
                ));
                break;
            }
        }
        if w.is_none() {
            for g in lhs.generators() {
                if !rhs.contains(g) {
                    w = Some(format!("minor not in monomial ideal: {}", g.render()));
                    break;
                }
            }
        }
        w.or_else(|| Some("spans differ".into()))
    };
    Ok(CheckReport {
        label,
        e,
        pass,
        monomial_count,
        lhs_span_log_p: lhs.span_log_p(),
        rhs_span_log_p: rhs.span_log_p(),
        witness,
    })
}

/// Minor theorem for the full matrix: `Min_e` of it equals the ideal of all
/// degree-`e` `(tau, nu)`-monomials with admissible nu-part.
pub fn gkt_minor_check(
    ctx: &Arc<RingContext>,
    sigmas: &[GroupElement],
    e: usize,
) -> Result<CheckReport> {
    let mt = build_mtilde(ctx, sigmas)?;
    if e > mt.rows().min(mt.cols()) {
        return Err(Error::Dimension(format!(
            "minor size {e} exceeds the matrix dimensions"
        )));
    }
    let interp = MonomialInterp::from_generators(ctx, sigmas)?;
    let lhs = minors(&mt, e)?;
    let set = enumerate_m(e as u32, 0, sigmas.len());
    let rhs = interp.ideal_of(ctx, &set);
    compare_ideals(
        format!("minors-vs-admissible e={e}"),
        Some(e),
        set.len(),
        &lhs,
        &rhs,
    )
}

/// Strong form: for every `0 <= e <= t2 = r(r-1)/2`, compare `Min_e` of the
/// pruned matrix with the ideal of `M(e, r - 1 - t2 + e)`.
pub fn strong_conjecture_check(
    ctx: &Arc<RingContext>,
    sigmas: &[GroupElement],
) -> Result<Vec<CheckReport>> {
    let r = sigmas.len();
    let t2 = r * (r - 1) / 2;
    let a = build_a(ctx, sigmas)?;
    let interp = MonomialInterp::from_generators(ctx, sigmas)?;
    let mut reports = Vec::new();
    for e in 0..=t2 {
        let lhs = minors(&a, e)?;
        let l = r as i64 - 1 - t2 as i64 + e as i64;
        let set = enumerate_m(e as u32, l, r);
        let rhs = interp.ideal_of(ctx, &set);
        reports.push(compare_ideals(
            format!("strong e={e}"),
            Some(e),
            set.len(),
            &lhs,
            &rhs,
        )?);
    }
    Ok(reports)
}

/// Weak form: the shifted Fitting ideal of the pruned complex is compared
/// with the fractional ideal generated by
/// `w^{1-r} M(t2, r-1), w^{2-r} M(t2-1, r-2), ..., w^{t2+1-r} M(0, ...)`.
pub fn weak_conjecture_check(
    ctx: &Arc<RingContext>,
    sigmas: &[GroupElement],
    n: u32,
) -> Result<CheckReport> {
    let r = sigmas.len();
    let t2 = r * (r - 1) / 2;
    let f = morphism_tensor_f(ctx, sigmas, 4)?;
    let d = pruned_complex_d(&f)?;
    let lhs = fitt_shift1_from_complex(&d, n)?;
    let interp = MonomialInterp::from_generators(ctx, sigmas)?;
    let w = gamma_power_poly(ctx, n);
    let mut gens: Vec<RingElement> = Vec::new();
    let mut count = 0usize;
    let mut w_pow = RingElement::one(ctx);
    for k in 0..=t2 {
        let l = r as i64 - 1 - k as i64;
        let set = enumerate_m((t2 - k) as u32, l, r);
        count += set.len();
        for z in &set {
            gens.push(interp.element(ctx, z).mul(&w_pow));
        }
        w_pow = w_pow.mul(&w);
    }
    let rhs = FractionalIdeal::new(
        IdealHandle::new(ctx, gens),
        vec![DenomFactor::GammaPow(n); r - 1],
    );
    let pass = frac_ideal_equal(&lhs, &rhs)?;
    Ok(CheckReport {
        label: "weak".into(),
        e: None,
        pass,
        monomial_count: count,
        lhs_span_log_p: lhs.numerator().span_log_p(),
        rhs_span_log_p: rhs.numerator().span_log_p(),
        witness: if pass {
            None
        } else {
            Some(format!("lhs {} vs rhs {}", lhs.render(), rhs.render()))
        },
    })
}
