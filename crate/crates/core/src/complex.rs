//! Construction and validation of non-negatively graded complexes of free
//! modules: bar resolutions, cyclic complexes, tensor products with Koszul
//! signs, induced complexes, mapping cones, the pruned cokernel complex,
//! and homology computation at truncation.
//!
//! Boundary matrices follow the row-vector convention: `d_n` is a
//! `rank_n x rank_{n-1}` matrix and `d_{n-1} o d_n = 0` reads
//! `boundary(n) * boundary(n-1) = 0`.

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupEmbedding, Subgroup};
use crate::howell::{howell_form, kernel, smith_valuations, ResidueMatrix};
use crate::ideal::{fitt_shift1_from_matrix, minors, FractionalIdeal, IdealHandle};
use crate::matrix::RingMatrix;
use crate::ring::{gamma_norm_poly, norm_element, RingContext, RingElement};
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

/// Default cap on the per-degree rank of a bar resolution.
pub const BAR_RANK_BUDGET: usize = 2000;

/// A bounded, non-negatively graded complex of labeled free modules with
/// exactly verified boundaries.
#[derive(Clone)]
pub struct FreeComplex {
    ctx: Arc<RingContext>,
    ranks: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// boundaries[d-1] is `d_d : degree d -> degree d-1`.
    boundaries: Vec<RingMatrix>,
}

impl FreeComplex {
    pub fn new(
        ctx: &Arc<RingContext>,
        labels: Vec<Vec<String>>,
        boundaries: Vec<RingMatrix>,
    ) -> Result<Self> {
        let ranks: Vec<usize> = labels.iter().map(|l| l.len()).collect();
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::ComplexCheck(format!(
                "{} degrees need {} boundary maps, got {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        for (d, b) in boundaries.iter().enumerate() {
            let (src, tgt) = (d + 1, d);
            if b.rows() != ranks[src] || b.cols() != ranks[tgt] {
                return Err(Error::ComplexCheck(format!(
                    "boundary d_{src} has shape {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    ranks[src],
                    ranks[tgt]
                )));
            }
        }
        for d in 2..ranks.len() {
            let prod = boundaries[d - 1].mul(&boundaries[d - 2])?;
            if !prod.is_zero() {
                return Err(Error::ComplexCheck(format!(
                    "d_{} o d_{} is nonzero",
                    d - 1,
                    d
                )));
            }
        }
        Ok(FreeComplex {
            ctx: ctx.clone(),
            ranks,
            labels,
            boundaries,
        })
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn max_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, d: usize) -> usize {
        self.ranks.get(d).copied().unwrap_or(0)
    }

    pub fn labels(&self, d: usize) -> &[String] {
        &self.labels[d]
    }

    /// `d_d` for `1 <= d <= max_degree`.
    pub fn boundary(&self, d: usize) -> &RingMatrix {
        &self.boundaries[d - 1]
    }

    /// Plain-text description: degree, labels, boundary entries.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for d in 0..=self.max_degree() {
            out.push_str(&format!(
                "degree {d}: rank {} [{}]\n",
                self.rank(d),
                self.labels[d].join(", ")
            ));
            if d >= 1 {
                let b = self.boundary(d);
                for i in 0..b.rows() {
                    let entries: Vec<String> = (0..b.cols())
                        .filter(|&j| !b.at(i, j).is_zero())
                        .map(|j| format!("{} -> {}: {}", i, j, b.at(i, j).render()))
                        .collect();
                    if !entries.is_empty() {
                        out.push_str(&format!("  d_{d}: {}\n", entries.join("; ")));
                    }
                }
            }
        }
        out
    }
}

/// Degree-wise map of complexes with exactly verified commuting squares.
#[derive(Clone)]
pub struct ComplexMorphism {
    pub source: FreeComplex,
    pub target: FreeComplex,
    /// maps[d] is `f_d : source^d -> target^d`.
    pub maps: Vec<RingMatrix>,
}

impl ComplexMorphism {
    pub fn new(source: FreeComplex, target: FreeComplex, maps: Vec<RingMatrix>) -> Result<Self> {
        let degrees = source.max_degree().min(target.max_degree());
        if maps.len() != degrees + 1 {
            return Err(Error::MorphismCheck(format!(
                "expected {} degree maps, got {}",
                degrees + 1,
                maps.len()
            )));
        }
        for (d, f) in maps.iter().enumerate() {
            if f.rows() != source.rank(d) || f.cols() != target.rank(d) {
                return Err(Error::MorphismCheck(format!(
                    "map in degree {d} has shape {}x{}",
                    f.rows(),
                    f.cols()
                )));
            }
        }
        for d in 1..=degrees {
            let lhs = source.boundary(d).mul(&maps[d - 1])?;
            let rhs = maps[d].mul(target.boundary(d))?;
            if lhs != rhs {
                return Err(Error::MorphismCheck(format!(
                    "square at degree {d} does not commute"
                )));
            }
        }
        Ok(ComplexMorphism {
            source,
            target,
            maps,
        })
    }

    pub fn degrees(&self) -> usize {
        self.maps.len() - 1
    }

    /// Kernel triviality of `f_d` over the flattened coefficients.
    pub fn injective_in_degree(&self, d: usize) -> bool {
        let m_eff = self.maps[d].natural_t_slices();
        let flat = self.maps[d].flatten_action(m_eff);
        howell_form(&kernel(&flat)).row_count() == 0
    }
}

// ---------------------------------------------------------------------------
// basic builders
// ---------------------------------------------------------------------------

/// The rank-one complex `... -> R -> R -> R -> 0` with boundaries
/// alternating `sigma - 1` (odd to even) and the norm of `<sigma>`
/// (even to odd). For `sigma` of order one this degenerates to
/// alternating `0` and `1`.
pub fn cyclic_complex(
    ctx: &Arc<RingContext>,
    sigma: &GroupElement,
    max_degree: usize,
) -> Result<FreeComplex> {
    let group = ctx.group().clone();
    if !group.contains(sigma) {
        return Err(Error::InvalidGroup("generator outside the group".into()));
    }
    let sub = Subgroup::new(group, vec![sigma.clone()])?;
    let tau = RingElement::from_group_element(ctx, sigma).sub(&RingElement::one(ctx));
    let nu = norm_element(ctx, &sub);
    let labels: Vec<Vec<String>> = (0..=max_degree).map(|d| vec![format!("x^{d}")]).collect();
    let boundaries: Vec<RingMatrix> = (1..=max_degree)
        .map(|d| {
            let e = if d % 2 == 1 { tau.clone() } else { nu.clone() };
            RingMatrix::from_rows(ctx, vec![vec![e]]).expect("1x1 matrix")
        })
        .collect();
    FreeComplex::new(ctx, labels, boundaries)
}

/// Standard (bar) resolution of the subgroup `h`, base-changed to the
/// ambient group ring: degree `n` is free on the `n`-tuples of elements of
/// `h`, listed lexicographically.
pub fn bar_resolution(
    ctx: &Arc<RingContext>,
    h: &Subgroup,
    max_degree: usize,
    rank_budget: usize,
) -> Result<FreeComplex> {
    if h.parent() != ctx.group() {
        return Err(Error::InvalidGroup("subgroup of a different group".into()));
    }
    let order = h.order() as usize;
    match order.checked_pow(max_degree as u32) {
        Some(r) if r <= rank_budget => {}
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "bar resolution rank {order}^{max_degree} exceeds budget {rank_budget}"
            )))
        }
    }
    let els: Vec<GroupElement> = h.elements().to_vec();
    let mut tuples: Vec<Vec<Vec<GroupElement>>> = vec![vec![vec![]]];
    for d in 1..=max_degree {
        let mut next = Vec::with_capacity(order.pow(d as u32));
        for t in &tuples[d - 1] {
            for e in &els {
                let mut t2 = t.clone();
                t2.push(e.clone());
                next.push(t2);
            }
        }
        next.sort();
        tuples.push(next);
    }
    let labels: Vec<Vec<String>> = tuples
        .iter()
        .map(|ts| ts.iter().map(|t| format!("{t:?}")).collect())
        .collect();
    let group = ctx.group().clone();
    let mut boundaries = Vec::new();
    for d in 1..=max_degree {
        let index: HashMap<&[GroupElement], usize> = tuples[d - 1]
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_slice(), i))
            .collect();
        let mut b = RingMatrix::zero(ctx, tuples[d].len(), tuples[d - 1].len());
        for (row, t) in tuples[d].iter().enumerate() {
            // g_1 (g_2, ..., g_n)
            let head = RingElement::from_group_element(ctx, &t[0]);
            let col = index[&t[1..]];
            *b.at_mut(row, col) = b.at(row, col).add(&head);
            // interior contractions with alternating signs
            for j in 1..d {
                let mut s = t.clone();
                s[j - 1] = group.mul(&s[j - 1], &s[j]);
                s.remove(j);
                let col = index[&s[..]];
                let one = RingElement::one(ctx);
                let term = if j % 2 == 1 { one.neg() } else { one };
                *b.at_mut(row, col) = b.at(row, col).add(&term);
            }
            // drop the last entry
            let col = index[&t[..d - 1]];
            let one = RingElement::one(ctx);
            let term = if d % 2 == 1 { one.neg() } else { one };
            *b.at_mut(row, col) = b.at(row, col).add(&term);
        }
        boundaries.push(b);
    }
    FreeComplex::new(ctx, labels, boundaries)
}

/// Reinterpret a complex over a smaller group ring inside a larger one,
/// along a homomorphism given on factor generators.
pub fn induce_complex(
    c: &FreeComplex,
    target_ctx: &Arc<RingContext>,
    embedding: &GroupEmbedding,
) -> Result<FreeComplex> {
    if embedding.source() != c.context().group() || embedding.target() != target_ctx.group() {
        return Err(Error::InvalidGroup(
            "embedding does not connect the two contexts".into(),
        ));
    }
    let map_element = |e: &RingElement| -> RingElement {
        let mut out = RingElement::zero(target_ctx);
        for (j, g, coeff) in e.terms() {
            let src = c.context().group().element_at(g as usize);
            let img = embedding.apply(&src);
            out = out.add(&RingElement::monomial(target_ctx, coeff, &img, j));
        }
        out
    };
    let labels = (0..=c.max_degree()).map(|d| c.labels(d).to_vec()).collect();
    let boundaries = (1..=c.max_degree())
        .map(|d| {
            let b = c.boundary(d);
            let mut out = RingMatrix::zero(target_ctx, b.rows(), b.cols());
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    *out.at_mut(i, j) = map_element(b.at(i, j));
                }
            }
            out
        })
        .collect();
    FreeComplex::new(target_ctx, labels, boundaries)
}

// ---------------------------------------------------------------------------
// tensor products
// ---------------------------------------------------------------------------

/// Compositions of `n` into `k` parts, first part descending. For rank-one
/// factors this lists the degree-`n` monomials with `x_1` powers first and
/// the pure power of the last variable last.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for rest in compositions(n - first, k - 1) {
            let mut c = Vec::with_capacity(k);
            c.push(first);
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

type TensorBasisElement = (Vec<usize>, Vec<usize>); // (composition, per-factor index)

fn tensor_basis(factors: &[&FreeComplex], degree: usize) -> Vec<TensorBasisElement> {
    let mut out = Vec::new();
    for comp in compositions(degree, factors.len()) {
        if comp
            .iter()
            .zip(factors)
            .any(|(&a, f)| a > f.max_degree() || f.rank(a) == 0)
        {
            continue;
        }
        let mut idxs: Vec<Vec<usize>> = vec![vec![]];
        for (&a, f) in comp.iter().zip(factors) {
            let mut next = Vec::new();
            for base in &idxs {
                for b in 0..f.rank(a) {
                    let mut nb = base.clone();
                    nb.push(b);
                    next.push(nb);
                }
            }
            idxs = next;
        }
        for b in idxs {
            out.push((comp.clone(), b));
        }
    }
    out
}

fn tensor_label(factors: &[&FreeComplex], el: &TensorBasisElement) -> String {
    let all_rank_one = factors
        .iter()
        .all(|f| (0..=f.max_degree()).all(|d| f.rank(d) <= 1));
    if all_rank_one {
        let mut parts = Vec::new();
        for (i, &a) in el.0.iter().enumerate() {
            if a == 1 {
                parts.push(format!("x{}", i + 1));
            } else if a > 1 {
                parts.push(format!("x{}^{}", i + 1, a));
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    } else {
        format!("{:?}@{:?}", el.0, el.1)
    }
}

/// Tensor product over the coefficient ring with Koszul signs:
/// `d(x_1 ox .. ox x_k) = sum_i (-1)^{deg x_1 + .. + deg x_{i-1}}
/// x_1 ox .. d x_i .. ox x_k`.
pub fn tensor_complexes(factors: &[&FreeComplex], max_degree: usize) -> Result<FreeComplex> {
    if factors.is_empty() {
        return Err(Error::ComplexCheck("tensor of no factors".into()));
    }
    let ctx = factors[0].context().clone();
    for f in factors {
        if **f.context() != *ctx {
            return Err(Error::ContextMismatch("tensor factors".into()));
        }
    }
    let bases: Vec<Vec<TensorBasisElement>> = (0..=max_degree)
        .map(|d| tensor_basis(factors, d))
        .collect();
    let labels: Vec<Vec<String>> = bases
        .iter()
        .map(|bs| bs.iter().map(|b| tensor_label(factors, b)).collect())
        .collect();
    let mut boundaries = Vec::new();
    for d in 1..=max_degree {
        let tgt_index: HashMap<&TensorBasisElement, usize> = bases[d - 1]
            .iter()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        let mut b = RingMatrix::zero(&ctx, bases[d].len(), bases[d - 1].len());
        for (row, (comp, idxs)) in bases[d].iter().enumerate() {
            let mut sign_exp = 0usize;
            for (i, (&a, f)) in comp.iter().zip(factors).enumerate() {
                if a >= 1 {
                    let db = f.boundary(a);
                    for tb in 0..f.rank(a - 1) {
                        let coeff = db.at(idxs[i], tb);
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut tcomp = comp.clone();
                        tcomp[i] -= 1;
                        let mut tidxs = idxs.clone();
                        tidxs[i] = tb;
                        let key = (tcomp, tidxs);
                        let col = tgt_index[&key];
                        let signed = if sign_exp % 2 == 0 {
                            coeff.clone()
                        } else {
                            coeff.neg()
                        };
                        *b.at_mut(row, col) = b.at(row, col).add(&signed);
                    }
                }
                sign_exp += a;
            }
        }
        boundaries.push(b);
    }
    FreeComplex::new(&ctx, labels, boundaries)
}

/// Tensor product of degree-zero chain morphisms along matching factor
/// lists: entries multiply, no signs.
pub fn tensor_morphisms(
    factor_maps: &[ComplexMorphism],
    max_degree: usize,
) -> Result<ComplexMorphism> {
    if factor_maps.is_empty() {
        return Err(Error::MorphismCheck("tensor of no morphisms".into()));
    }
    let sources: Vec<&FreeComplex> = factor_maps.iter().map(|m| &m.source).collect();
    let targets: Vec<&FreeComplex> = factor_maps.iter().map(|m| &m.target).collect();
    let source = tensor_complexes(&sources, max_degree)?;
    let target = tensor_complexes(&targets, max_degree)?;
    let ctx = source.context().clone();
    let mut maps = Vec::new();
    for d in 0..=max_degree {
        let src_basis = tensor_basis(&sources, d);
        let tgt_basis = tensor_basis(&targets, d);
        let tgt_index: HashMap<&TensorBasisElement, usize> =
            tgt_basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut f = RingMatrix::zero(&ctx, src_basis.len(), tgt_basis.len());
        for (row, (comp, idxs)) in src_basis.iter().enumerate() {
            let mut acc: Vec<(Vec<usize>, RingElement)> = vec![(vec![], RingElement::one(&ctx))];
            for (i, (&a, fm)) in comp.iter().zip(factor_maps).enumerate() {
                let comp_map = &fm.maps[a];
                let mut next = Vec::new();
                for (tidxs, coeff) in &acc {
                    for tb in 0..fm.target.rank(a) {
                        let entry = comp_map.at(idxs[i], tb);
                        if entry.is_zero() {
                            continue;
                        }
                        let mut nt = tidxs.clone();
                        nt.push(tb);
                        next.push((nt, coeff.mul(entry)));
                    }
                }
                acc = next;
            }
            for (tidxs, coeff) in acc {
                let key = (comp.clone(), tidxs);
                let col = tgt_index[&key];
                *f.at_mut(row, col) = f.at(row, col).add(&coeff);
            }
        }
        maps.push(f);
    }
    ComplexMorphism::new(source, target, maps)
}

/// Direct sum of complexes; blocks are laid out in input order.
pub fn direct_sum(parts: &[&FreeComplex]) -> Result<FreeComplex> {
    if parts.is_empty() {
        return Err(Error::ComplexCheck("direct sum of no parts".into()));
    }
    let ctx = parts[0].context().clone();
    let max_degree = parts.iter().map(|c| c.max_degree()).min().unwrap();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for d in 0..=max_degree {
        let mut l = Vec::new();
        for (k, c) in parts.iter().enumerate() {
            for lab in c.labels(d) {
                l.push(format!("{k}:{lab}"));
            }
        }
        labels.push(l);
    }
    let mut boundaries = Vec::new();
    for d in 1..=max_degree {
        let rows: usize = parts.iter().map(|c| c.rank(d)).sum();
        let cols: usize = parts.iter().map(|c| c.rank(d - 1)).sum();
        let mut b = RingMatrix::zero(&ctx, rows, cols);
        let mut ro = 0;
        let mut co = 0;
        for c in parts {
            let pb = c.boundary(d);
            for i in 0..pb.rows() {
                for j in 0..pb.cols() {
                    *b.at_mut(ro + i, co + j) = pb.at(i, j).clone();
                }
            }
            ro += c.rank(d);
            co += c.rank(d - 1);
        }
        boundaries.push(b);
    }
    FreeComplex::new(&ctx, labels, boundaries)
}

// ---------------------------------------------------------------------------
// the product setting: C, C_i, f, pruned D
// ---------------------------------------------------------------------------

/// `C = E_1 ox ... ox E_r` for the cyclic complexes of the given
/// generators.
pub fn product_complex_c(
    ctx: &Arc<RingContext>,
    sigmas: &[GroupElement],
    max_degree: usize,
) -> Result<FreeComplex> {
    let es: Vec<FreeComplex> = sigmas
        .iter()
        .map(|s| cyclic_complex(ctx, s, max_degree))
        .collect::<Result<_>>()?;
    let refs: Vec<&FreeComplex> = es.iter().collect();
    tensor_complexes(&refs, max_degree)
}

/// The complex `E_1' ox .. ox E_i ox .. ox E_r'`: rank one per degree,
/// boundaries those of `E_i`.
pub fn product_complex_ci(
    ctx: &Arc<RingContext>,
    sigmas: &[GroupElement],
    i: usize,
    max_degree: usize,
) -> Result<FreeComplex> {
    let mut parts: Vec<FreeComplex> = Vec::new();
    for (j, s) in sigmas.iter().enumerate() {
        if j == i {
            parts.push(cyclic_complex(ctx, s, max_degree)?);
        } else {
            parts.push(degree_zero_complex(ctx, max_degree)?);
        }
    }
    let refs: Vec<&FreeComplex> = parts.iter().collect();
    tensor_complexes(&refs, max_degree)
}

/// `R` concentrated in degree zero, padded with zero components.
fn degree_zero_complex(ctx: &Arc<RingContext>, max_degree: usize) -> Result<FreeComplex> {
    let mut labels: Vec<Vec<String>> = vec![vec!["1".into()]];
    let mut boundaries = Vec::new();
    for d in 1..=max_degree {
        labels.push(vec![]);
        boundaries.push(RingMatrix::zero(ctx, 0, if d == 1 { 1 } else { 0 }));
    }
    FreeComplex::new(ctx, labels, boundaries)
}

/// The morphism `f : (+) C_i -> C` of the product setting: the degree-`n`
/// basis element of `C_i` goes to the pure-power basis element `x_i^n`.
/// Commuting squares are verified exactly.
pub fn morphism_tensor_f(
    ctx: &Arc<RingContext>,
    sigmas: &[GroupElement],
    max_degree: usize,
) -> Result<ComplexMorphism> {
    let c = product_complex_c(ctx, sigmas, max_degree)?;
    let cis: Vec<FreeComplex> = (0..sigmas.len())
        .map(|i| product_complex_ci(ctx, sigmas, i, max_degree))
        .collect::<Result<_>>()?;
    let ci_refs: Vec<&FreeComplex> = cis.iter().collect();
    let source = direct_sum(&ci_refs)?;
    let mut maps = Vec::new();
    for d in 0..=max_degree {
        let mut f = RingMatrix::zero(ctx, source.rank(d), c.rank(d));
        for (i, _) in sigmas.iter().enumerate() {
            let target_label = if d == 0 {
                "1".to_string()
            } else if d == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, d)
            };
            let col = c
                .labels(d)
                .iter()
                .position(|l| *l == target_label)
                .ok_or_else(|| Error::MorphismCheck(format!("missing label {target_label}")))?;
            *f.at_mut(i, col) = RingElement::one(ctx);
        }
        maps.push(f);
    }
    ComplexMorphism::new(source, c, maps)
}

/// The pruned complex `D`: modify `C` to `C' = C (+) Y` with `Y` the
/// two-term identity complex in degrees one and zero, extend `f` so its
/// degree-zero component on `Y` is the identity, and take the degree-wise
/// cokernel. In degrees `>= 2` this throws the pure powers out of the
/// monomial basis; in degree one the boundary picks up a `-tau_i` twist.
pub fn pruned_complex_d(f: &ComplexMorphism) -> Result<FreeComplex> {
    let ctx = f.target.context().clone();
    let max_degree = f.degrees();
    let r = f.source.rank(1);
    if f.source.rank(0) != r {
        return Err(Error::ComplexCheck(
            "source is not a sum of rank-one complexes".into(),
        ));
    }
    for d in 1..=max_degree {
        if !f.injective_in_degree(d) {
            return Err(Error::MorphismCheck(format!(
                "f is not injective in degree {d}"
            )));
        }
    }
    // per-degree image column of each source block, from the single nonzero
    // unit entry of each row
    let mut image_cols: Vec<Vec<usize>> = Vec::new();
    for d in 0..=max_degree {
        let fd = &f.maps[d];
        let mut cols = Vec::new();
        for i in 0..fd.rows() {
            let nz: Vec<usize> = (0..fd.cols())
                .filter(|&j| !fd.at(i, j).is_zero())
                .collect();
            if nz.len() != 1 || !fd.at(i, nz[0]).is_unit() {
                return Err(Error::ComplexCheck(
                    "f rows are not unit-coordinate maps".into(),
                ));
            }
            cols.push(nz[0]);
        }
        image_cols.push(cols);
    }
    // tau_i from the diagonal of the source degree-1 boundary
    let taus: Vec<RingElement> = (0..r)
        .map(|i| f.source.boundary(1).at(i, i).clone())
        .collect();

    let mut labels: Vec<Vec<String>> = Vec::new();
    labels.push(vec!["1".into()]);
    labels.push((0..r).map(|i| format!("e{}", i + 1)).collect());
    for d in 2..=max_degree {
        let keep: Vec<String> = f
            .target
            .labels(d)
            .iter()
            .enumerate()
            .filter(|(j, _)| !image_cols[d].contains(j))
            .map(|(_, l)| l.clone())
            .collect();
        labels.push(keep);
    }

    let mut boundaries: Vec<RingMatrix> = Vec::new();
    // d_1 : e_i -> -1
    let mut d1 = RingMatrix::zero(&ctx, r, 1);
    for i in 0..r {
        *d1.at_mut(i, 0) = RingElement::one(&ctx).neg();
    }
    boundaries.push(d1);
    // d_2 : a non-pure monomial row m with d_C(m) = sum_i c_i x_i goes to
    // sum_i c_i (-tau_i) e_i
    let keep2: Vec<usize> = (0..f.target.rank(2))
        .filter(|j| !image_cols[2].contains(j))
        .collect();
    let mut d2 = RingMatrix::zero(&ctx, keep2.len(), r);
    let c_d2 = f.target.boundary(2);
    for (row, &m) in keep2.iter().enumerate() {
        for i in 0..r {
            let xi_col = image_cols[1][i];
            let c = c_d2.at(m, xi_col);
            if !c.is_zero() {
                *d2.at_mut(row, i) = c.mul(&taus[i]).neg();
            }
        }
    }
    boundaries.push(d2);
    // d_n for n >= 3: delete pure rows and columns
    for d in 3..=max_degree {
        boundaries.push(
            f.target
                .boundary(d)
                .delete_rows_cols(&image_cols[d], &image_cols[d - 1]),
        );
    }
    FreeComplex::new(&ctx, labels, boundaries)
}

/// Standard mapping cone of `f : X -> C`: degree `n` is `C^n (+) X^{n-1}`
/// with boundary `(y, x) |-> (d y + f x, -d x)`.
pub fn mapping_cone(f: &ComplexMorphism) -> Result<FreeComplex> {
    let ctx = f.target.context().clone();
    let max_degree = f.degrees();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for d in 0..=max_degree {
        let mut l: Vec<String> = f.target.labels(d).to_vec();
        if d >= 1 {
            l.extend(f.source.labels(d - 1).iter().map(|s| format!("s({s})")));
        }
        labels.push(l);
    }
    let mut boundaries = Vec::new();
    for d in 1..=max_degree {
        let rows = f.target.rank(d) + f.source.rank(d - 1);
        let cols = f.target.rank(d - 1) + if d >= 2 { f.source.rank(d - 2) } else { 0 };
        let mut b = RingMatrix::zero(&ctx, rows, cols);
        let dt = f.target.boundary(d);
        for i in 0..dt.rows() {
            for j in 0..dt.cols() {
                *b.at_mut(i, j) = dt.at(i, j).clone();
            }
        }
        let fm = &f.maps[d - 1];
        for i in 0..fm.rows() {
            for j in 0..fm.cols() {
                *b.at_mut(f.target.rank(d) + i, j) = fm.at(i, j).clone();
            }
        }
        if d >= 2 {
            let ds = f.source.boundary(d - 1);
            for i in 0..ds.rows() {
                for j in 0..ds.cols() {
                    *b.at_mut(f.target.rank(d) + i, f.target.rank(d - 1) + j) =
                        ds.at(i, j).neg();
                }
            }
        }
        boundaries.push(b);
    }
    FreeComplex::new(&ctx, labels, boundaries)
}

/// Per-factor morphism of the second special setting: identity in even
/// degrees, multiplication by `mu = 1 + sigma + ... + sigma^{m-1}` in odd
/// degrees, from the cyclic complex of `sigma^m` to that of `sigma`.
pub fn special_morphism_s(
    ctx: &Arc<RingContext>,
    sigma: &GroupElement,
    index_m: u64,
    max_degree: usize,
) -> Result<ComplexMorphism> {
    let group = ctx.group().clone();
    let order = group.element_order(sigma);
    if index_m == 0 || order % index_m != 0 {
        return Err(Error::Hypothesis(format!(
            "index {index_m} does not divide the generator order {order}"
        )));
    }
    let sub_gen = group.pow(sigma, index_m);
    let source = cyclic_complex(ctx, &sub_gen, max_degree)?;
    let target = cyclic_complex(ctx, sigma, max_degree)?;
    let mut mu = RingElement::zero(ctx);
    for k in 0..index_m {
        mu = mu.add(&RingElement::from_group_element(ctx, &group.pow(sigma, k)));
    }
    let maps: Vec<RingMatrix> = (0..=max_degree)
        .map(|d| {
            let e = if d % 2 == 0 {
                RingElement::one(ctx)
            } else {
                mu.clone()
            };
            RingMatrix::from_rows(ctx, vec![vec![e]]).expect("1x1 matrix")
        })
        .collect();
    ComplexMorphism::new(source, target, maps)
}

// ---------------------------------------------------------------------------
// homology
// ---------------------------------------------------------------------------

/// Homology evidence at one degree: elementary divisors of the quotient as
/// a `Z/p^N`-module, plus the head of the Fitting profile of a group-ring
/// presentation.
#[derive(Clone, Debug)]
pub struct HomologyProfile {
    pub degree: usize,
    pub trivial: bool,
    /// Orders of the nontrivial cyclic `Z/p^N`-factors.
    pub divisors: Vec<u64>,
    pub generator_count: usize,
    pub fitt0: IdealHandle,
    pub fitt1: IdealHandle,
}

/// Homology at `degree` over the flattened `Z/p^N` basis. Any coefficient
/// spanning set of the kernel generates the homology over the group ring a
/// fortiori, so kernel rows serve as module generators and image rows as
/// relations.
pub fn homology_profile(c: &FreeComplex, degree: usize) -> Result<HomologyProfile> {
    if degree >= c.max_degree() {
        return Err(Error::ComplexCheck(format!(
            "degree {degree} needs the boundary from degree {}",
            degree + 1
        )));
    }
    let ctx = c.context().clone();
    let m_eff = effective_slices(c, degree);
    let n = ctx.group_order();
    let block = n * m_eff as usize;
    let kernel_rows: ResidueMatrix = if degree == 0 {
        ResidueMatrix::identity(ctx.p(), ctx.coeff_precision(), c.rank(0) * block)
    } else {
        kernel(&c.boundary(degree).flatten_action(m_eff))
    };
    let image = c.boundary(degree + 1).flatten_action(m_eff);
    let k_form = howell_form(&kernel_rows);
    let i_form = howell_form(&image);
    if k_form == i_form {
        return Ok(HomologyProfile {
            degree,
            trivial: true,
            divisors: vec![],
            generator_count: 0,
            fitt0: IdealHandle::unit(&ctx),
            fitt1: IdealHandle::unit(&ctx),
        });
    }
    // Z/p^N elementary divisors: relations of the kernel generators modulo
    // the image, i.e. the head block of the kernel of [K; I]
    let gens = k_form.rows.clone();
    let t = gens.len();
    let width = kernel_rows.width;
    let mut stacked_rows = gens.clone();
    stacked_rows.extend(image.rows.iter().cloned());
    let stacked = ResidueMatrix::new(ctx.p(), ctx.coeff_precision(), width, stacked_rows);
    let rel_full = kernel(&stacked);
    let rel_zpn: Vec<Vec<u64>> = rel_full.rows.iter().map(|r| r[..t].to_vec()).collect();
    let rel_mat = ResidueMatrix::new(ctx.p(), ctx.coeff_precision(), t, rel_zpn);
    let mut divisors: Vec<u64> = smith_valuations(&rel_mat, t)
        .into_iter()
        .filter(|&v| v > 0)
        .map(|v| ctx.p().pow(v.min(ctx.coeff_precision())))
        .collect();
    divisors.sort_unstable();
    // group-ring presentation: generators = kernel rows as ring vectors,
    // relations from the kernel of [Phi_K; I]
    let gen_ring: Vec<Vec<RingElement>> = gens
        .iter()
        .map(|row| unflatten_module_vector(&ctx, row, c.rank(degree), block, m_eff))
        .collect();
    let gen_mat = RingMatrix::from_rows(&ctx, gen_ring)?;
    let phi = gen_mat.flatten_action(m_eff);
    let mut rows2 = phi.rows.clone();
    rows2.extend(image.rows.iter().cloned());
    let stacked2 = ResidueMatrix::new(ctx.p(), ctx.coeff_precision(), width, rows2);
    let rel2 = kernel(&stacked2);
    let head = t * block;
    let rel_ring_rows: Vec<Vec<RingElement>> = rel2
        .rows
        .iter()
        .map(|row| unflatten_module_vector(&ctx, &row[..head], t, block, m_eff))
        .filter(|r| r.iter().any(|e| !e.is_zero()))
        .collect();
    let rel_ring = RingMatrix::from_rows(&ctx, rel_ring_rows)?;
    let rel_pruned = crate::ideal::prune_rows_to_generators(&rel_ring)?;
    let fitt0 = crate::ideal::fitt0(&rel_pruned)?;
    let fitt1 = if t >= 1 {
        minors(&rel_pruned, t - 1)?
    } else {
        IdealHandle::unit(&ctx)
    };
    Ok(HomologyProfile {
        degree,
        trivial: false,
        divisors,
        generator_count: t,
        fitt0,
        fitt1,
    })
}

fn effective_slices(c: &FreeComplex, degree: usize) -> u32 {
    let upper = c.boundary(degree + 1).natural_t_slices();
    if degree >= 1 {
        c.boundary(degree).natural_t_slices().max(upper)
    } else {
        upper
    }
}

fn unflatten_module_vector(
    ctx: &Arc<RingContext>,
    row: &[u64],
    rank: usize,
    block: usize,
    m_eff: u32,
) -> Vec<RingElement> {
    let n = ctx.group_order();
    let mut out = Vec::with_capacity(rank);
    for c in 0..rank {
        let mut e = RingElement::zero(ctx);
        for j in 0..m_eff as usize {
            for g in 0..n {
                let v = row[c * block + j * n + g];
                if v != 0 {
                    e = e.add(&RingElement::monomial(
                        ctx,
                        v,
                        &ctx.group().element_at(g),
                        j as u32,
                    ));
                }
            }
        }
        out.push(e);
    }
    out
}

/// Exactness report: homology triviality per checkable degree
/// (`0 .. max_degree - 1`), with a pass verdict relative to the allowed set.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub degrees: Vec<(usize, bool)>,
    pub pass: bool,
}

pub fn check_exactness(c: &FreeComplex, allowed: &[usize]) -> Result<ExactnessReport> {
    let degrees: Vec<(usize, bool)> = (0..c.max_degree())
        .into_par_iter()
        .map(|d| homology_trivial(c, d).map(|t| (d, t)))
        .collect::<Result<Vec<_>>>()?;
    let pass = degrees.iter().all(|&(d, t)| t || allowed.contains(&d));
    Ok(ExactnessReport { degrees, pass })
}

/// Cheap triviality test: kernel span equals image span.
pub fn homology_trivial(c: &FreeComplex, degree: usize) -> Result<bool> {
    if degree >= c.max_degree() {
        return Err(Error::ComplexCheck(format!(
            "degree {degree} needs the boundary from degree {}",
            degree + 1
        )));
    }
    let ctx = c.context();
    let m_eff = effective_slices(c, degree);
    let n = ctx.group_order();
    let block = n * m_eff as usize;
    let kernel_rows = if degree == 0 {
        ResidueMatrix::identity(ctx.p(), ctx.coeff_precision(), c.rank(0) * block)
    } else {
        kernel(&c.boundary(degree).flatten_action(m_eff))
    };
    let image = c.boundary(degree + 1).flatten_action(m_eff);
    Ok(howell_form(&kernel_rows) == howell_form(&image))
}

/// `Fitt^[1]` of `H_1(D)` by the complex formula: checks exactness in
/// degrees 0 and 2 (the degrees the derivation uses), then applies
/// `w^{t2-t1+t0} sum_e w^{-e} Min_e(A~)` with `A` the boundary from degree
/// three.
pub fn fitt_shift1_from_complex(d: &FreeComplex, n: u32) -> Result<FractionalIdeal> {
    if d.max_degree() < 3 {
        return Err(Error::ComplexCheck(
            "the formula needs the boundary from degree three".into(),
        ));
    }
    for degree in [0usize, 2] {
        if !homology_trivial(d, degree)? {
            return Err(Error::ComplexCheck(format!(
                "complex is not exact in degree {degree}"
            )));
        }
    }
    let t0 = d.rank(0);
    let t1 = d.rank(1);
    if t1 < t0 {
        return Err(Error::ComplexCheck("rank(D^1) < rank(D^0)".into()));
    }
    fitt_shift1_from_matrix(d.boundary(3), (t1 - t0) as u32, n)
}

// ---------------------------------------------------------------------------
// the cyclic-extension complexes of the layer computation
// ---------------------------------------------------------------------------

/// Complexes and matrices of the cyclic totally-ramified layer computation:
/// `C_1` alternating `(delta - 1, N_H)`, the two-factor tensor `C` with the
/// layer direction, the injective `C_1 -> C`, the quotient `D`, the lift of
/// its degree-3 boundary, and the resulting shifted Fitting ideal.
pub struct LayerComplexes {
    pub c1: FreeComplex,
    pub c: FreeComplex,
    pub morphism: ComplexMorphism,
    pub d: FreeComplex,
    /// 3x2 lift of `d_3'` over the Iwasawa variable.
    pub d3_lift: RingMatrix,
    /// The 5x2 stack of the lift over `w_n I`.
    pub stacked: RingMatrix,
    pub minors2: IdealHandle,
    pub fitt: FractionalIdeal,
}

/// Build the layer complexes for a cyclic group `H` (the context's group)
/// and layer index `n`. The returned complexes live over `H x C_{p^n}`
/// (plain `H` for `n = 0`, where the layer direction degenerates to the
/// identity).
pub fn thm46_complexes(ctx_h: &Arc<RingContext>, n: u32) -> Result<LayerComplexes> {
    let h_group = ctx_h.group().clone();
    if h_group.rank() != 1 {
        return Err(Error::Hypothesis(
            "the layer computation needs a cyclic group".into(),
        ));
    }
    let p = ctx_h.p();
    let (layer_ctx, gamma_el): (Arc<RingContext>, GroupElement) = if n == 0 {
        (ctx_h.clone(), h_group.identity())
    } else {
        let mut orders = h_group.factor_orders().to_vec();
        orders.push(p.pow(n));
        let g = crate::group::PGroup::new(p, orders)?;
        let ctx = RingContext::with_gamma(
            g.clone(),
            ctx_h.coeff_precision(),
            ctx_h.t_precision(),
            Some(1),
        )?;
        (ctx, g.factor_generator(1))
    };
    let delta = layer_ctx.group().factor_generator(0);
    let max_degree = 4;
    // C = E_gamma ox E_delta; the layer factor comes first so the deleted
    // pure powers of the second variable sit last in each degree
    let e_gamma = cyclic_complex(&layer_ctx, &gamma_el, max_degree)?;
    let e_delta = cyclic_complex(&layer_ctx, &delta, max_degree)?;
    let c = tensor_complexes(&[&e_gamma, &e_delta], max_degree)?;
    let c1 = product_complex_ci(&layer_ctx, &[gamma_el.clone(), delta.clone()], 1, max_degree)?;
    let mut maps = Vec::new();
    for d in 0..=max_degree {
        let mut f = RingMatrix::zero(&layer_ctx, 1, c.rank(d));
        let label = if d == 0 {
            "1".to_string()
        } else if d == 1 {
            "x2".to_string()
        } else {
            format!("x2^{d}")
        };
        let col = c
            .labels(d)
            .iter()
            .position(|l| *l == label)
            .ok_or_else(|| Error::MorphismCheck(format!("missing label {label}")))?;
        *f.at_mut(0, col) = RingElement::one(&layer_ctx);
        maps.push(f);
    }
    let morphism = ComplexMorphism::new(c1.clone(), c.clone(), maps)?;
    for d in 0..=max_degree {
        if !morphism.injective_in_degree(d) {
            return Err(Error::MorphismCheck(format!(
                "layer morphism not injective in degree {d}"
            )));
        }
    }
    let d_complex = quotient_by_coordinate_image(&morphism)?;
    // lift of d_3' over the Iwasawa variable: the layer generator goes to
    // 1 + T, so gamma - 1 lifts to T and the layer norm to
    // 1 + (1+T) + ... + (1+T)^{p^n - 1}
    let t = RingElement::t(&layer_ctx);
    let delta_m1 =
        RingElement::from_group_element(&layer_ctx, &delta).sub(&RingElement::one(&layer_ctx));
    let nn = gamma_norm_poly(&layer_ctx, p.pow(n) as u32);
    let h_sub = Subgroup::new(layer_ctx.group().clone(), vec![delta.clone()])?;
    let nh = norm_element(&layer_ctx, &h_sub);
    let zero = RingElement::zero(&layer_ctx);
    let d3_lift = RingMatrix::from_rows(
        &layer_ctx,
        vec![
            vec![t.clone(), zero.clone()],
            vec![delta_m1, nn.neg()],
            vec![zero.clone(), nh],
        ],
    )?;
    let w = crate::ring::gamma_power_poly(&layer_ctx, n);
    let stacked = d3_lift.stack_vertical(&RingMatrix::scalar(&layer_ctx, 2, &w))?;
    let minors2 = minors(&stacked, 2)?;
    let fitt = FractionalIdeal::new(
        minors2.clone(),
        vec![crate::ideal::DenomFactor::GammaPow(n)],
    );
    Ok(LayerComplexes {
        c1,
        c,
        morphism,
        d: d_complex,
        d3_lift,
        stacked,
        minors2,
        fitt,
    })
}

/// Degree-wise cokernel of a morphism that maps each source basis element
/// onto a distinct unit multiple of a target basis element in every degree,
/// with the image closed under the boundary. The quotient deletes the image
/// coordinates.
pub fn quotient_by_coordinate_image(f: &ComplexMorphism) -> Result<FreeComplex> {
    let ctx = f.target.context().clone();
    let max_degree = f.degrees();
    let mut image_cols: Vec<Vec<usize>> = Vec::new();
    for d in 0..=max_degree {
        let fd = &f.maps[d];
        let mut cols = Vec::new();
        for i in 0..fd.rows() {
            let nz: Vec<usize> = (0..fd.cols()).filter(|&j| !fd.at(i, j).is_zero()).collect();
            if nz.len() != 1 || !fd.at(i, nz[0]).is_unit() {
                return Err(Error::ComplexCheck(
                    "image is not spanned by unit coordinates".into(),
                ));
            }
            cols.push(nz[0]);
        }
        cols.sort_unstable();
        cols.dedup();
        if cols.len() != fd.rows() {
            return Err(Error::ComplexCheck("image coordinates collide".into()));
        }
        image_cols.push(cols);
    }
    // subcomplex check: boundaries of image coordinates stay inside the image
    for d in 1..=max_degree {
        let b = f.target.boundary(d);
        for &row in &image_cols[d] {
            for j in 0..b.cols() {
                if !b.at(row, j).is_zero() && !image_cols[d - 1].contains(&j) {
                    return Err(Error::ComplexCheck(
                        "image is not a subcomplex; cannot take the quotient".into(),
                    ));
                }
            }
        }
    }
    let labels: Vec<Vec<String>> = (0..=max_degree)
        .map(|d| {
            f.target
                .labels(d)
                .iter()
                .enumerate()
                .filter(|(j, _)| !image_cols[d].contains(j))
                .map(|(_, l)| l.clone())
                .collect()
        })
        .collect();
    let boundaries: Vec<RingMatrix> = (1..=max_degree)
        .map(|d| {
            f.target
                .boundary(d)
                .delete_rows_cols(&image_cols[d], &image_cols[d - 1])
        })
        .collect();
    FreeComplex::new(&ctx, labels, boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PGroup;
    use crate::ideal::{frac_ideal_equal, ideal_equal, DenomFactor};
    use crate::ring::tau_element;

    fn ctx(orders: Vec<u64>, n: u32, m: u32) -> Arc<RingContext> {
        RingContext::new(PGroup::new(3, orders).unwrap(), n, m).unwrap()
    }

    #[test]
    fn cyclic_complex_structure() {
        let cx = ctx(vec![9], 2, 4);
        let sigma = cx.group().factor_generator(0);
        let e = cyclic_complex(&cx, &sigma, 4).unwrap();
        assert_eq!(e.rank(2), 1);
        assert_eq!(e.boundary(1).at(0, 0).clone(), tau_element(&cx, &sigma));
        // homology vanishes in degrees 1..3
        for d in 1..=3 {
            assert!(homology_trivial(&e, d).unwrap(), "degree {d}");
        }
        // but not in degree 0
        assert!(!homology_trivial(&e, 0).unwrap());
        let report = check_exactness(&e, &[0]).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn bar_resolution_of_c3() {
        let cx = ctx(vec![3], 2, 2);
        let full = cx.group().full_subgroup();
        let b = bar_resolution(&cx, &full, 3, BAR_RANK_BUDGET).unwrap();
        assert_eq!(
            (0..=3).map(|d| b.rank(d)).collect::<Vec<_>>(),
            vec![1, 3, 9, 27]
        );
        let report = check_exactness(&b, &[0]).unwrap();
        assert!(report.pass, "{:?}", report.degrees);
    }

    #[test]
    fn bar_resolution_ranks_product() {
        let cx = ctx(vec![3, 3], 2, 2);
        let full = cx.group().full_subgroup();
        let b = bar_resolution(&cx, &full, 2, BAR_RANK_BUDGET).unwrap();
        assert_eq!(
            (0..=2).map(|d| b.rank(d)).collect::<Vec<_>>(),
            vec![1, 9, 81]
        );
    }

    #[test]
    fn bar_resolution_budget() {
        let cx = ctx(vec![9], 2, 2);
        let full = cx.group().full_subgroup();
        assert!(matches!(
            bar_resolution(&cx, &full, 4, 100),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn trivial_group_bar_resolution() {
        let cx = RingContext::new(PGroup::trivial(3).unwrap(), 2, 2).unwrap();
        let triv = cx.group().trivial_subgroup();
        let b = bar_resolution(&cx, &triv, 3, 10).unwrap();
        assert!((0..=3).all(|d| b.rank(d) == 1));
    }

    #[test]
    fn induce_complex_examples() {
        // E over C3 induced into C3 x C3 along the first factor
        let small = ctx(vec![3], 2, 4);
        let big = ctx(vec![3, 3], 2, 4);
        let e = cyclic_complex(&small, &small.group().factor_generator(0), 3).unwrap();
        let embed = GroupEmbedding::new(
            small.group().clone(),
            big.group().clone(),
            vec![big.group().factor_generator(0)],
        )
        .unwrap();
        let ind = induce_complex(&e, &big, &embed).unwrap();
        assert_eq!(ind.rank(1), 1);
        let sub =
            Subgroup::new(big.group().clone(), vec![big.group().factor_generator(0)]).unwrap();
        assert_eq!(ind.boundary(2).at(0, 0).clone(), norm_element(&big, &sub));
        // identity embedding is the identity on complexes
        let id_embed = GroupEmbedding::identity(small.group());
        let same = induce_complex(&e, &small, &id_embed).unwrap();
        assert_eq!(same.boundary(1), e.boundary(1));
    }

    #[test]
    fn tensor_ranks_and_single_factor() {
        let cx = ctx(vec![3, 3], 2, 4);
        let s1 = cx.group().factor_generator(0);
        let s2 = cx.group().factor_generator(1);
        let c = product_complex_c(&cx, &[s1, s2], 4).unwrap();
        // rank of degree n is C(n + r - 1, n)
        assert_eq!(
            (0..=4).map(|d| c.rank(d)).collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 5]
        );
        let e = cyclic_complex(&cx, &cx.group().factor_generator(0), 3).unwrap();
        let t = tensor_complexes(&[&e], 3).unwrap();
        assert_eq!(t.boundary(2), e.boundary(2));
    }

    #[test]
    fn tensor_rank_stars_and_bars() {
        let cx = ctx(vec![3, 3, 3], 2, 2);
        let gens: Vec<GroupElement> = (0..3).map(|k| cx.group().factor_generator(k)).collect();
        let c = product_complex_c(&cx, &gens, 3).unwrap();
        assert_eq!(c.rank(2), 6);
        assert_eq!(c.rank(3), 10);
    }

    #[test]
    fn morphism_f_structure() {
        let cx = ctx(vec![3, 3], 2, 4);
        let gens: Vec<GroupElement> = (0..2).map(|k| cx.group().factor_generator(k)).collect();
        let f = morphism_tensor_f(&cx, &gens, 4).unwrap();
        // degree 0: both blocks map to the single basis element
        assert!(!f.maps[0].at(0, 0).is_zero());
        assert!(!f.maps[0].at(1, 0).is_zero());
        // degree 1: image coordinates are exactly x_1, x_2
        let lbls = f.target.labels(1);
        for i in 0..2 {
            let cols: Vec<usize> = (0..f.maps[1].cols())
                .filter(|&j| !f.maps[1].at(i, j).is_zero())
                .collect();
            assert_eq!(cols.len(), 1);
            assert_eq!(lbls[cols[0]], format!("x{}", i + 1));
        }
        for d in 1..=4 {
            assert!(f.injective_in_degree(d));
        }
    }

    #[test]
    fn pruned_complex_r2() {
        let cx = ctx(vec![3, 3], 2, 6);
        let gens: Vec<GroupElement> = (0..2).map(|k| cx.group().factor_generator(k)).collect();
        let f = morphism_tensor_f(&cx, &gens, 4).unwrap();
        let d = pruned_complex_d(&f).unwrap();
        assert_eq!(
            (0..=4).map(|k| d.rank(k)).collect::<Vec<_>>(),
            vec![1, 2, 1, 2, 3]
        );
        // degree 3 -> 2 boundary is the column (nu1; nu2) up to sign
        let a = d.boundary(3);
        let g1 = Subgroup::new(cx.group().clone(), vec![cx.group().factor_generator(0)]).unwrap();
        let g2 = Subgroup::new(cx.group().clone(), vec![cx.group().factor_generator(1)]).unwrap();
        let nu1 = norm_element(&cx, &g1);
        let nu2 = norm_element(&cx, &g2);
        for e in [a.at(0, 0).clone(), a.at(1, 0).clone()] {
            assert!(
                e == nu1 || e == nu1.neg() || e == nu2 || e == nu2.neg(),
                "unexpected entry {e:?}"
            );
        }
        // exact outside degree 1
        for deg in [0usize, 2, 3] {
            assert!(homology_trivial(&d, deg).unwrap(), "degree {deg}");
        }
        assert!(!homology_trivial(&d, 1).unwrap());
    }

    #[test]
    fn pruned_complex_r3_and_r4_ranks() {
        let cx3 = ctx(vec![3, 3, 3], 2, 2);
        let gens3: Vec<GroupElement> = (0..3).map(|k| cx3.group().factor_generator(k)).collect();
        let f3 = morphism_tensor_f(&cx3, &gens3, 4).unwrap();
        let d3 = pruned_complex_d(&f3).unwrap();
        assert_eq!(d3.rank(2), 3);
        assert_eq!(d3.boundary(3).rows(), 7);

        let cx4 = ctx(vec![3, 3, 3, 3], 2, 1);
        let gens4: Vec<GroupElement> = (0..4).map(|k| cx4.group().factor_generator(k)).collect();
        let f4 = morphism_tensor_f(&cx4, &gens4, 4).unwrap();
        let d4 = pruned_complex_d(&f4).unwrap();
        assert_eq!(d4.rank(2), 6);
        assert_eq!(d4.rank(3), 16);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let cx = ctx(vec![9], 2, 4);
        let e = cyclic_complex(&cx, &cx.group().factor_generator(0), 4).unwrap();
        let id_maps: Vec<RingMatrix> = (0..=4).map(|_| RingMatrix::identity(&cx, 1)).collect();
        let f = ComplexMorphism::new(e.clone(), e.clone(), id_maps).unwrap();
        let cone = mapping_cone(&f).unwrap();
        assert_eq!(cone.rank(0), 1);
        assert_eq!(cone.rank(3), 2);
        let report = check_exactness(&cone, &[]).unwrap();
        assert!(report.pass, "{:?}", report.degrees);
    }

    #[test]
    fn special_morphism_examples() {
        let cx = ctx(vec![9], 3, 4);
        let sigma = cx.group().factor_generator(0);
        // index 1 gives the identity morphism
        let m1 = special_morphism_s(&cx, &sigma, 1, 4).unwrap();
        assert_eq!(m1.maps[1].at(0, 0).clone(), RingElement::one(&cx));
        // index 3 on C9: odd-degree multiplier 1 + sigma + sigma^2;
        // commuting squares are verified inside the constructor
        let m3 = special_morphism_s(&cx, &sigma, 3, 4).unwrap();
        let mut mu = RingElement::zero(&cx);
        for k in 0..3u64 {
            mu = mu.add(&RingElement::from_group_element(
                &cx,
                &cx.group().pow(&sigma, k),
            ));
        }
        assert_eq!(m3.maps[1].at(0, 0).clone(), mu);
        assert!(special_morphism_s(&cx, &sigma, 2, 4).is_err());
    }

    #[test]
    fn section45_s1_cone() {
        // C9 with subgroup C3: t_0 = 1, t_n = 2, Fitt^[1] = (1, nu~ tau / T)
        let cx = ctx(vec![9], 3, 8);
        let sigma = cx.group().factor_generator(0);
        let f = special_morphism_s(&cx, &sigma, 3, 4).unwrap();
        let cone = mapping_cone(&f).unwrap();
        assert_eq!(cone.rank(0), 1);
        for d in 1..=4 {
            assert_eq!(cone.rank(d), 2);
        }
        for deg in [0usize, 2, 3] {
            assert!(homology_trivial(&cone, deg).unwrap());
        }
        assert!(!homology_trivial(&cone, 1).unwrap());
        let fitt = fitt_shift1_from_complex(&cone, 0).unwrap();
        let g = cx.group().clone();
        let sub = Subgroup::new(g.clone(), vec![g.pow(&sigma, 3)]).unwrap();
        let nu_tilde = norm_element(&cx, &sub);
        let tau = tau_element(&cx, &sigma);
        let expected = FractionalIdeal::new(
            IdealHandle::new(&cx, vec![RingElement::t(&cx), nu_tilde.mul(&tau)]),
            vec![DenomFactor::t()],
        );
        assert!(frac_ideal_equal(&fitt, &expected).unwrap());
    }

    #[test]
    fn layer_complexes_shapes() {
        // H = C3, n = 1
        let cx = ctx(vec![3], 2, 10);
        let data = thm46_complexes(&cx, 1).unwrap();
        assert_eq!(
            (0..=4).map(|d| data.d.rank(d)).collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4]
        );
        for deg in [0usize, 2, 3] {
            assert!(homology_trivial(&data.d, deg).unwrap(), "degree {deg}");
        }
        // the lifted boundary and the group-level boundary generate the same
        // minor ideals
        let lifted = data.d.boundary(3).lift_gamma();
        let sym = &data.d3_lift;
        for e in 1..=2usize {
            let a = minors(&lifted, e).unwrap();
            let b = minors(sym, e).unwrap();
            assert!(ideal_equal(&a, &b).unwrap(), "minor size {e}");
        }
    }

    #[test]
    fn describe_golden_text() {
        let cx = ctx(vec![3], 2, 2);
        let e = cyclic_complex(&cx, &cx.group().factor_generator(0), 2).unwrap();
        let expected = "\
degree 0: rank 1 [x^0]
degree 1: rank 1 [x^1]
  d_1: 0 -> 0: -1 + g1
degree 2: rank 1 [x^2]
  d_2: 0 -> 0: 1 + g1 + g1^2
";
        assert_eq!(e.describe(), expected);
    }

    #[test]
    fn homology_profile_divisors() {
        // cyclic complex of C9 at degree 0: H_0 = Z_p presented by
        // (sigma - 1); one copy of Z/9 at N = 2
        let cx = ctx(vec![9], 2, 2);
        let e = cyclic_complex(&cx, &cx.group().factor_generator(0), 3).unwrap();
        let prof = homology_profile(&e, 0).unwrap();
        assert!(!prof.trivial);
        assert_eq!(prof.divisors, vec![9]);
        assert!(!prof.fitt0.is_unit_ideal());
    }
}
