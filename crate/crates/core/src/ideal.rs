//! Ideals of the truncated ring with cached canonical spans, minor ideals,
//! Fitting ideals, fractional ideals, and the shifted Fitting ideal
//! computed from a step of a free resolution.

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::howell::{HowellBuilder, HowellForm};
use crate::matrix::RingMatrix;
use crate::ring::{gamma_power_poly, one_plus_t_pow, RingContext, RingElement};
use itertools::Itertools;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

/// Hard cap on determinant dimensions; Berkowitz keeps cost polynomial but
/// the minor enumeration around it does not.
pub const MAX_DET_DIM: usize = 24;

/// Dimension at which the determinant switches from memoized cofactor
/// expansion to the division-free Berkowitz algorithm.
pub const COFACTOR_LIMIT: usize = 8;

/// Column count up to which the shifted-Fitting numerator is assembled by
/// literal minor enumeration; wider presentations go through unit-pivot
/// collapse first (the Fitting ideal is presentation-invariant).
pub const MINOR_SUM_LIMIT: usize = 8;

/// Finitely generated ideal with its canonical `Z/p^N`-span over the
/// flattened basis `{(g, T^j) : j < M}` cached at construction.
#[derive(Clone)]
pub struct IdealHandle {
    ctx: Arc<RingContext>,
    generators: Vec<RingElement>,
    span: HowellForm,
}

impl PartialEq for IdealHandle {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.span == other.span
    }
}
impl Eq for IdealHandle {}

fn term_key(e: &RingElement) -> Vec<(u32, u32, u64)> {
    e.terms().collect()
}

impl IdealHandle {
    pub fn new(ctx: &Arc<RingContext>, gens: Vec<RingElement>) -> Self {
        let mut builder = HowellBuilder::new(ctx.p(), ctx.coeff_precision(), ctx.flat_width());
        let mut kept: Vec<RingElement> = Vec::new();
        let mut seen: HashSet<Vec<(u32, u32, u64)>> = HashSet::new();
        for g in gens {
            debug_assert!(**g.context() == **ctx, "ideal generator context");
            if g.is_zero() {
                continue;
            }
            if !seen.insert(term_key(&g)) {
                continue;
            }
            insert_translates(&mut builder, ctx, &g);
            kept.push(g);
        }
        IdealHandle {
            ctx: ctx.clone(),
            generators: kept,
            span: builder.finish(),
        }
    }

    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        Self::new(ctx, vec![])
    }

    pub fn unit(ctx: &Arc<RingContext>) -> Self {
        Self::new(ctx, vec![RingElement::one(ctx)])
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    pub fn span(&self) -> &HowellForm {
        &self.span
    }

    pub fn is_zero(&self) -> bool {
        self.span.row_count() == 0
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.contains(&RingElement::one(&self.ctx))
    }

    /// Membership of the element's image in `(Z/p^N)[G][T]/(T^M)`.
    pub fn contains(&self, e: &RingElement) -> bool {
        self.span
            .contains(&e.flatten())
            .expect("flattened width matches the context")
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    /// log_p of the span cardinality; a cheap comparison diagnostic.
    pub fn span_log_p(&self) -> u64 {
        self.span.span_log_p()
    }

    pub fn sum(&self, other: &IdealHandle) -> IdealHandle {
        let gens = self
            .generators
            .iter()
            .chain(&other.generators)
            .cloned()
            .collect();
        IdealHandle::new(&self.ctx, gens)
    }

    pub fn product(&self, other: &IdealHandle) -> IdealHandle {
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.mul(b));
            }
        }
        IdealHandle::new(&self.ctx, gens)
    }

    pub fn scale(&self, e: &RingElement) -> IdealHandle {
        IdealHandle::new(
            &self.ctx,
            self.generators.iter().map(|g| g.mul(e)).collect(),
        )
    }

    /// Same ideal with a reduced generating list: generators are sorted by
    /// ascending T-degree and any generator already spanned by the earlier
    /// ones is dropped. This keeps cross-multiplication degrees small.
    pub fn reduced(&self) -> IdealHandle {
        let mut gens = self.generators.clone();
        gens.sort_by_cached_key(render_key);
        gens.sort_by_key(|g| (g.t_degree().unwrap_or(0), g.term_count()));
        let mut builder =
            HowellBuilder::new(self.ctx.p(), self.ctx.coeff_precision(), self.ctx.flat_width());
        let mut kept = Vec::new();
        for g in gens {
            if builder.contains(&g.flatten()) {
                continue;
            }
            insert_translates(&mut builder, &self.ctx, &g);
            kept.push(g);
        }
        IdealHandle {
            ctx: self.ctx.clone(),
            generators: kept,
            span: builder.finish(),
        }
    }

    /// Largest exact T-degree among the defining generators.
    pub fn max_generator_degree(&self) -> u32 {
        self.generators
            .iter()
            .filter_map(|g| g.t_degree())
            .max()
            .unwrap_or(0)
    }

    /// Defining generators, deterministically sorted and rendered.
    pub fn render_generators(&self) -> Vec<String> {
        let mut keyed: Vec<(RenderKey, String)> = self
            .generators
            .iter()
            .map(|g| (render_key(g), g.render()))
            .collect();
        keyed.sort();
        keyed.into_iter().map(|(_, s)| s).collect()
    }
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.render_generators().join(", "))
    }
}

type RenderKey = (u32, u32, u64, String);

/// Sort key: leading T-degree, leading group index, leading coefficient,
/// then the full rendering.
fn render_key(g: &RingElement) -> RenderKey {
    let (j, gi, c) = g.terms().next().unwrap_or((0, 0, 0));
    (j, gi, c, g.render())
}

fn insert_translates(builder: &mut HowellBuilder, ctx: &Arc<RingContext>, g: &RingElement) {
    let flat = g.flatten();
    if builder.contains(&flat) {
        // The cached family is closed under multiplication by basis
        // monomials, so membership of the generator implies membership of
        // every translate.
        return;
    }
    let n = ctx.group_order() as u32;
    for j in 0..ctx.t_precision() {
        for gi in 0..n {
            let t = g.mul_basis(gi, j);
            builder.insert(&t.flatten());
        }
    }
}

/// Ideal equality at the context's truncation `(N, M)`.
pub fn ideal_equal(a: &IdealHandle, b: &IdealHandle) -> Result<bool> {
    if *a.ctx != *b.ctx {
        return Err(Error::ContextMismatch(
            "ideal comparison across contexts".into(),
        ));
    }
    Ok(a.span == b.span)
}

pub fn ideal_sum(a: &IdealHandle, b: &IdealHandle) -> IdealHandle {
    a.sum(b)
}

pub fn ideal_product(a: &IdealHandle, b: &IdealHandle) -> IdealHandle {
    a.product(b)
}

// ---------------------------------------------------------------------------
// determinants
// ---------------------------------------------------------------------------

fn det_cofactor<F>(m: &RingMatrix, mul: &F) -> RingElement
where
    F: Fn(&RingElement, &RingElement) -> RingElement,
{
    let n = m.rows();
    let ctx = m.context();
    if n == 0 {
        return RingElement::one(ctx);
    }
    // dp over column subsets, expanding row by row
    let mut dp: BTreeMap<u32, RingElement> = BTreeMap::new();
    dp.insert(0, RingElement::one(ctx));
    for row in 0..n {
        let mut next: BTreeMap<u32, RingElement> = BTreeMap::new();
        for (mask, val) in dp {
            if val.is_zero() {
                continue;
            }
            let mut sign_pos = true;
            for col in 0..n {
                let bit = 1u32 << col;
                if mask & bit != 0 {
                    continue;
                }
                let e = m.at(row, col);
                if !e.is_zero() {
                    let term = mul(&val, e);
                    let term = if sign_pos { term } else { term.neg() };
                    let entry = next
                        .entry(mask | bit)
                        .or_insert_with(|| RingElement::zero(ctx));
                    *entry = entry.add(&term);
                }
                sign_pos = !sign_pos;
            }
        }
        dp = next;
    }
    dp.remove(&((1u32 << n) - 1))
        .unwrap_or_else(|| RingElement::zero(ctx))
}

/// Division-free Berkowitz determinant, O(n^4) ring multiplications.
fn det_berkowitz<F>(m: &RingMatrix, mul: &F) -> RingElement
where
    F: Fn(&RingElement, &RingElement) -> RingElement,
{
    let n = m.rows();
    let ctx = m.context();
    if n == 0 {
        return RingElement::one(ctx);
    }
    // c holds the characteristic polynomial coefficients of the leading
    // principal r x r block, c[0] = 1.
    let mut c: Vec<RingElement> = vec![RingElement::one(ctx), m.at(0, 0).neg()];
    for r in 2..=n {
        let k = r - 1;
        // Toeplitz column: q[0] = 1, q[1] = -a_kk, q[j] = -(R B^{j-2} S)
        let mut q: Vec<RingElement> = Vec::with_capacity(r + 1);
        q.push(RingElement::one(ctx));
        q.push(m.at(k, k).neg());
        let mut v: Vec<RingElement> = (0..k).map(|i| m.at(i, k).clone()).collect(); // S
        for _ in 2..=r {
            // t = R . v
            let mut t = RingElement::zero(ctx);
            for (i, vi) in v.iter().enumerate() {
                if !vi.is_zero() && !m.at(k, i).is_zero() {
                    t = t.add(&mul(m.at(k, i), vi));
                }
            }
            q.push(t.neg());
            // v = B . v
            let mut nv: Vec<RingElement> = vec![RingElement::zero(ctx); k];
            for (i, nvi) in nv.iter_mut().enumerate() {
                for (j, vj) in v.iter().enumerate() {
                    if !vj.is_zero() && !m.at(i, j).is_zero() {
                        *nvi = nvi.add(&mul(m.at(i, j), vj));
                    }
                }
            }
            v = nv;
        }
        // c_new[i] = sum_j q[i - j] c[j]
        let mut cn: Vec<RingElement> = vec![RingElement::zero(ctx); r + 1];
        for (i, cni) in cn.iter_mut().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                if j <= i && i - j < q.len() && !cj.is_zero() && !q[i - j].is_zero() {
                    *cni = cni.add(&mul(&q[i - j], cj));
                }
            }
        }
        c = cn;
    }
    // det(A) = (-1)^n * charpoly(0)
    let last = c.pop().expect("coefficients nonempty");
    if n % 2 == 1 {
        last.neg()
    } else {
        last
    }
}

fn det_dispatch<F>(m: &RingMatrix, mul: &F) -> Result<RingElement>
where
    F: Fn(&RingElement, &RingElement) -> RingElement,
{
    if m.rows() != m.cols() {
        return Err(Error::Dimension("determinant of non-square matrix".into()));
    }
    if m.rows() > MAX_DET_DIM {
        return Err(Error::DimensionOverflow(m.rows(), MAX_DET_DIM));
    }
    Ok(if m.rows() <= COFACTOR_LIMIT {
        det_cofactor(m, mul)
    } else {
        det_berkowitz(m, mul)
    })
}

/// Exact determinant: cofactor expansion with subset memoization up to
/// dimension 8, Berkowitz beyond.
pub fn determinant(m: &RingMatrix) -> Result<RingElement> {
    det_dispatch(m, &|a, b| a.mul(b))
}

/// Determinant in `Lambda/(T^bound)`.
pub fn determinant_trunc(m: &RingMatrix, bound: u32) -> Result<RingElement> {
    det_dispatch(m, &|a, b| a.mul_trunc(b, bound))
}

// ---------------------------------------------------------------------------
// minor ideals
// ---------------------------------------------------------------------------

/// All `e x e` minors of `m`, in lexicographic (row subset, column subset)
/// order. Determinants are evaluated in parallel; the output order is
/// deterministic.
pub fn minor_list(m: &RingMatrix, e: usize) -> Result<Vec<RingElement>> {
    if e > m.rows().min(m.cols()) {
        return Ok(vec![]);
    }
    if e == 0 {
        return Ok(vec![RingElement::one(m.context())]);
    }
    if e > MAX_DET_DIM {
        return Err(Error::DimensionOverflow(e, MAX_DET_DIM));
    }
    let row_subsets: Vec<Vec<usize>> = (0..m.rows()).combinations(e).collect();
    let col_subsets: Vec<Vec<usize>> = (0..m.cols()).combinations(e).collect();
    let pairs: Vec<(usize, usize)> = (0..row_subsets.len())
        .flat_map(|i| (0..col_subsets.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| determinant(&m.submatrix(&row_subsets[i], &col_subsets[j])))
        .collect::<Result<Vec<_>>>()
}

/// Ideal generated by all `e x e` minors.
pub fn minors(m: &RingMatrix, e: usize) -> Result<IdealHandle> {
    Ok(IdealHandle::new(m.context(), minor_list(m, e)?))
}

/// Map from minor size `e` to `Min_e(m)` for `0 <= e <= min(rows, cols)`.
#[derive(Clone, Debug)]
pub struct MinorProfile {
    pub ideals: BTreeMap<usize, IdealHandle>,
}

impl MinorProfile {
    pub fn get(&self, e: usize) -> Option<&IdealHandle> {
        self.ideals.get(&e)
    }
}

pub fn minor_profile(m: &RingMatrix) -> Result<MinorProfile> {
    let mut ideals = BTreeMap::new();
    for e in 0..=m.rows().min(m.cols()) {
        ideals.insert(e, minors(m, e)?);
    }
    Ok(MinorProfile { ideals })
}

/// `Fitt_0` of the module presented by the rows of `presentation` inside a
/// free module of rank `cols`: the ideal of maximal minors, `(0)` when there
/// are fewer relation rows than the rank.
pub fn fitt0(presentation: &RingMatrix) -> Result<IdealHandle> {
    let b = presentation.cols();
    if presentation.rows() < b {
        return Ok(IdealHandle::zero(presentation.context()));
    }
    minors(presentation, b)
}

// ---------------------------------------------------------------------------
// fractional ideals
// ---------------------------------------------------------------------------

/// Designated non-zero-divisor denominators: `T = GammaPow(0)`,
/// `(1+T)^{p^n} - 1`, and lifts `g(1+T)^{p^n} - 1` of Frobenius elements.
/// The family is closed under products by construction, and each member is
/// monic in `T` up to a unit leading coefficient, so exact division is
/// decidable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DenomFactor {
    GammaPow(u32),
    FrobLift { group: GroupElement, n: u32 },
}

impl DenomFactor {
    pub fn t() -> Self {
        DenomFactor::GammaPow(0)
    }

    pub fn frob(group: GroupElement, n: u32) -> Self {
        if group.is_identity() {
            DenomFactor::GammaPow(n)
        } else {
            DenomFactor::FrobLift { group, n }
        }
    }

    pub fn element(&self, ctx: &Arc<RingContext>) -> RingElement {
        match self {
            DenomFactor::GammaPow(n) => gamma_power_poly(ctx, *n),
            DenomFactor::FrobLift { group, n } => {
                let pn = ctx.p().pow(*n) as u32;
                RingElement::from_group_element(ctx, group)
                    .mul(&one_plus_t_pow(ctx, pn))
                    .sub(&RingElement::one(ctx))
            }
        }
    }

    pub fn t_degree(&self, ctx: &Arc<RingContext>) -> u32 {
        match self {
            DenomFactor::GammaPow(n) | DenomFactor::FrobLift { n, .. } => ctx.p().pow(*n) as u32,
        }
    }

    pub fn render(&self) -> String {
        match self {
            DenomFactor::GammaPow(0) => "T".into(),
            DenomFactor::GammaPow(n) => format!("((1+T)^(p^{n})-1)"),
            DenomFactor::FrobLift { group, n } => format!("({:?}*(1+T)^(p^{n})-1)", group),
        }
    }
}

/// Formal quotient (ideal, denominator) with the denominator restricted to
/// the structurally closed non-zero-divisor family.
#[derive(Clone)]
pub struct FractionalIdeal {
    num: IdealHandle,
    factors: Vec<DenomFactor>,
}

impl FractionalIdeal {
    pub fn new(num: IdealHandle, mut factors: Vec<DenomFactor>) -> Self {
        factors.sort();
        let mut f = FractionalIdeal {
            num: num.reduced(),
            factors,
        };
        f.normalize();
        f
    }

    pub fn integral(num: IdealHandle) -> Self {
        Self::new(num, vec![])
    }

    pub fn unit(ctx: &Arc<RingContext>) -> Self {
        Self::integral(IdealHandle::unit(ctx))
    }

    pub fn numerator(&self) -> &IdealHandle {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[DenomFactor] {
        &self.factors
    }

    pub fn context(&self) -> &Arc<RingContext> {
        self.num.context()
    }

    pub fn denominator_element(&self) -> RingElement {
        let ctx = self.context();
        self.factors
            .iter()
            .fold(RingElement::one(ctx), |acc, f| acc.mul(&f.element(ctx)))
    }

    pub fn denominator_degree(&self) -> u32 {
        let ctx = self.context();
        self.factors.iter().map(|f| f.t_degree(ctx)).sum()
    }

    /// Cancel denominator factors that divide every numerator generator.
    fn normalize(&mut self) {
        let ctx = self.context().clone();
        loop {
            let mut cancelled = false;
            for idx in 0..self.factors.len() {
                let d = self.factors[idx].element(&ctx);
                let divided: Option<Vec<RingElement>> = self
                    .num
                    .generators()
                    .iter()
                    .map(|g| g.try_div_exact(&d))
                    .collect();
                if let Some(gens) = divided {
                    self.num = IdealHandle::new(&ctx, gens).reduced();
                    self.factors.remove(idx);
                    cancelled = true;
                    break;
                }
            }
            if !cancelled {
                return;
            }
        }
    }

    pub fn mul(&self, other: &FractionalIdeal) -> FractionalIdeal {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FractionalIdeal::new(self.num.product(&other.num), factors)
    }

    pub fn mul_ideal(&self, i: &IdealHandle) -> FractionalIdeal {
        FractionalIdeal::new(self.num.product(i), self.factors.clone())
    }

    /// Divide by a designated non-zero-divisor.
    pub fn div_factor(&self, f: DenomFactor) -> FractionalIdeal {
        let mut factors = self.factors.clone();
        factors.push(f);
        FractionalIdeal::new(self.num.clone(), factors)
    }

    pub fn add(&self, other: &FractionalIdeal) -> FractionalIdeal {
        if self.factors == other.factors {
            return FractionalIdeal::new(self.num.sum(&other.num), self.factors.clone());
        }
        let a = self.num.scale(&other.denominator_element());
        let b = other.num.scale(&self.denominator_element());
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FractionalIdeal::new(a.sum(&b), factors)
    }

    pub fn render(&self) -> String {
        let gens = self.num.render_generators().join(", ");
        if self.factors.is_empty() {
            format!("({gens})")
        } else {
            let den: Vec<String> = self.factors.iter().map(|f| f.render()).collect();
            format!("({gens}) / {}", den.join("*"))
        }
    }
}

impl fmt::Debug for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Equality of fractional ideals at the context truncation, by
/// cross-multiplication. Requires enough `T`-precision: `M` must exceed the
/// largest exact generator degree after cross-multiplication by the slack
/// margin (default 2), otherwise the comparison is refused.
pub fn frac_ideal_equal(x: &FractionalIdeal, y: &FractionalIdeal) -> Result<bool> {
    frac_ideal_equal_margin(x, y, 2)
}

pub fn frac_ideal_equal_margin(
    x: &FractionalIdeal,
    y: &FractionalIdeal,
    margin: u32,
) -> Result<bool> {
    if *x.context() != *y.context() {
        return Err(Error::ContextMismatch(
            "fractional ideal comparison across contexts".into(),
        ));
    }
    let m = x.context().t_precision();
    if x.factors == y.factors {
        let needed = x
            .num
            .max_generator_degree()
            .max(y.num.max_generator_degree())
            + margin;
        if m < needed {
            return Err(Error::InsufficientPrecision { needed, have: m });
        }
        return ideal_equal(&x.num, &y.num);
    }
    let a = x.num.scale(&y.denominator_element());
    let b = y.num.scale(&x.denominator_element());
    let needed = a.max_generator_degree().max(b.max_generator_degree()) + margin;
    if m < needed {
        return Err(Error::InsufficientPrecision { needed, have: m });
    }
    ideal_equal(&a, &b)
}

// ---------------------------------------------------------------------------
// shifted Fitting ideals
// ---------------------------------------------------------------------------

/// `Fitt^[1]` from one step of a free resolution over the layer group ring:
/// given `R^{t3} --A--> R^{t2} --> R^{t1} --> X --> 0` exact, with
/// `R = Lambda/(w_n)` and `w_n = (1+T)^{p^n} - 1`, returns
/// `w^{t2-t1} sum_e w^{-e} Min_e(A~)` where `A~` is the canonical lift.
pub fn fitt_shift1_from_resolution(a: &RingMatrix, t1: usize, n: u32) -> Result<FractionalIdeal> {
    fitt_shift1_from_matrix(a, t1 as u32, n)
}

/// Shared core: numerator `Fitt_Lambda(Cok A) = sum_e w^{t2-e} Min_e(A~)`,
/// denominator `w^{den_exponent}` (`t1` for resolutions, `t1 - t0` for
/// complexes satisfying the exactness conditions).
///
/// Narrow presentations use exact arithmetic throughout. Wide ones go
/// through the truncated collapse, whose numerator carries `w`-powers up to
/// the denominator degree; those are computed at an internal precision of
/// `M + deg(w^{den_exponent})` so normalization can cancel them before the
/// result is certified back at `(N, M)`.
pub fn fitt_shift1_from_matrix(
    a: &RingMatrix,
    den_exponent: u32,
    n: u32,
) -> Result<FractionalIdeal> {
    let ctx = a.context().clone();
    let factors = vec![DenomFactor::GammaPow(n); den_exponent as usize];
    if a.cols() <= MINOR_SUM_LIMIT {
        let lifted = a.lift_gamma();
        let num = fitt0_lambda_of_cokernel(&lifted, n)?;
        return Ok(FractionalIdeal::new(num, factors));
    }
    let den_degree = (ctx.p().pow(n) as u32) * den_exponent;
    let ctx_big = ctx.with_t_precision(ctx.t_precision() + den_degree)?;
    let a_big = a.with_context(&ctx_big);
    let lifted = a_big.lift_gamma();
    let num_big = fitt0_lambda_of_cokernel(&lifted, n)?;
    let f_big = FractionalIdeal::new(num_big, factors);
    // re-certify at the caller's truncation
    let gens: Vec<RingElement> = f_big
        .numerator()
        .generators()
        .iter()
        .map(|g| g.truncate(ctx.t_precision()).with_context(&ctx))
        .collect();
    Ok(FractionalIdeal::new(
        IdealHandle::new(&ctx, gens),
        f_big.denominator_factors().to_vec(),
    ))
}

/// `Fitt_Lambda(Lambda^{t2} / (rows(a) + w_n Lambda^{t2}))`, i.e. the
/// Fitting ideal of `Cok(a : R^{t3} -> R^{t2})` viewed over Lambda. The
/// input must already be lifted.
///
/// Narrow presentations are expanded literally as
/// `sum_e w^{t2-e} Min_e(a)`; wider ones are first collapsed on unit
/// pivots, which leaves the cokernel, hence the Fitting ideal, unchanged.
pub fn fitt0_lambda_of_cokernel(a: &RingMatrix, n: u32) -> Result<IdealHandle> {
    let ctx = a.context().clone();
    let w = gamma_power_poly(&ctx, n);
    let t2 = a.cols();
    if t2 == 0 {
        return Ok(IdealHandle::unit(&ctx));
    }
    if t2 <= MINOR_SUM_LIMIT {
        let mut gens: Vec<RingElement> = Vec::new();
        let mut w_pow = vec![RingElement::one(&ctx)];
        for _ in 0..t2 {
            let nx = w_pow.last().unwrap().mul(&w);
            w_pow.push(nx);
        }
        for e in 0..=t2.min(a.rows()) {
            let scale = &w_pow[t2 - e];
            for m in minor_list(a, e)? {
                gens.push(m.mul(scale));
            }
        }
        Ok(IdealHandle::new(&ctx, gens))
    } else {
        let stacked = a.stack_vertical(&RingMatrix::scalar(&ctx, t2, &w))?;
        fitt0_lambda_presentation(&stacked)
    }
}

/// `Fitt_0` of the Lambda-module presented by the rows of `p`, computed in
/// `Lambda/(T^M)`: collapse unit pivots, prune redundant relation rows, then
/// enumerate maximal minors of what remains.
pub fn fitt0_lambda_presentation(p: &RingMatrix) -> Result<IdealHandle> {
    let ctx = p.context().clone();
    let bound = ctx.t_precision();
    let collapsed = collapse_unit_pivots(p, bound)?;
    if collapsed.cols() == 0 {
        return Ok(IdealHandle::unit(&ctx));
    }
    let pruned = prune_rows_to_generators(&collapsed)?;
    if pruned.rows() < pruned.cols() {
        return Ok(IdealHandle::zero(&ctx));
    }
    let cols = pruned.cols();
    if cols > MAX_DET_DIM {
        return Err(Error::DimensionOverflow(cols, MAX_DET_DIM));
    }
    let row_subsets: Vec<Vec<usize>> = (0..pruned.rows()).combinations(cols).collect();
    let all_cols: Vec<usize> = (0..cols).collect();
    let gens: Vec<RingElement> = row_subsets
        .par_iter()
        .map(|rs| determinant_trunc(&pruned.submatrix(rs, &all_cols), bound))
        .collect::<Result<Vec<_>>>()?;
    Ok(IdealHandle::new(&ctx, gens))
}

/// Unit-pivot elimination in `Lambda/(T^bound)`. Each step clears a column
/// on a unit entry and deletes the pivot row and column; the cokernel of the
/// presentation is unchanged. Pivots are chosen by a Markowitz fill
/// estimate.
pub fn collapse_unit_pivots(p: &RingMatrix, bound: u32) -> Result<RingMatrix> {
    let ctx = p.context().clone();
    let mut ncols = p.cols();
    let mut rows: Vec<Vec<RingElement>> = (0..p.rows())
        .map(|i| (0..p.cols()).map(|j| p.at(i, j).truncate(bound)).collect())
        .collect();
    loop {
        rows.retain(|r| r.iter().any(|e| !e.is_zero()));
        if rows.is_empty() || ncols == 0 {
            break;
        }
        let mut col_nnz = vec![0usize; ncols];
        for r in &rows {
            for (j, e) in r.iter().enumerate() {
                if !e.is_zero() {
                    col_nnz[j] += 1;
                }
            }
        }
        let mut best: Option<(usize, usize, usize)> = None; // (score, i, j)
        for (i, r) in rows.iter().enumerate() {
            let rn = r.iter().filter(|e| !e.is_zero()).count();
            for (j, e) in r.iter().enumerate() {
                if e.is_unit() {
                    let score = (rn - 1) * (col_nnz[j] - 1);
                    if best.map(|(s, _, _)| score < s).unwrap_or(true) {
                        best = Some((score, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            break;
        };
        let inv = rows[pi][pj].inverse_trunc(bound)?;
        let pivot_row: Vec<RingElement> =
            rows[pi].iter().map(|e| e.mul_trunc(&inv, bound)).collect();
        for (i, r) in rows.iter_mut().enumerate() {
            if i == pi || r[pj].is_zero() {
                continue;
            }
            let factor = r[pj].clone();
            for (x, pe) in r.iter_mut().zip(&pivot_row) {
                if !pe.is_zero() {
                    *x = x.sub(&factor.mul_trunc(pe, bound));
                }
            }
        }
        rows.remove(pi);
        for r in rows.iter_mut() {
            r.remove(pj);
        }
        ncols -= 1;
    }
    if rows.is_empty() {
        return Ok(RingMatrix::zero(&ctx, 0, ncols));
    }
    RingMatrix::from_rows(&ctx, rows)
}

/// Keep a Nakayama-minimal generating subset of the row module: a row is
/// dropped exactly when it lies in `m*W + (kept rows)`, where `m` is the
/// maximal ideal `(p, sigma_k - 1, T)` of the local ring and `W` the module
/// generated by all rows.
pub fn prune_rows_to_generators(p: &RingMatrix) -> Result<RingMatrix> {
    prune_rows_param(p, p.context().t_precision(), true)
}

/// Same pruning over the bare group ring: `T`-degree-zero rows viewed as a
/// module over `(Z/p^N)[G]`, maximal ideal `(p, sigma_k - 1)`.
pub fn prune_rows_group_ring(p: &RingMatrix) -> Result<RingMatrix> {
    prune_rows_param(p, 1, false)
}

fn prune_rows_param(p: &RingMatrix, m_eff: u32, with_t: bool) -> Result<RingMatrix> {
    let ctx = p.context().clone();
    if p.rows() == 0 {
        return Ok(p.clone());
    }
    let n = ctx.group_order();
    let m_t = m_eff as usize;
    let block = n * m_t;
    let width = p.cols() * block;
    let flatten_row = |row: &[RingElement]| -> Vec<u64> {
        let mut v = vec![0u64; width];
        for (c, e) in row.iter().enumerate() {
            for (j, g, coeff) in e.terms() {
                if (j as usize) < m_t {
                    v[c * block + j as usize * n + g as usize] = coeff;
                }
            }
        }
        v
    };
    // maximal-ideal multipliers
    let mut multipliers: Vec<RingElement> = vec![RingElement::constant(&ctx, ctx.p())];
    if with_t {
        multipliers.push(RingElement::t(&ctx));
    }
    for k in 0..ctx.group().rank() {
        multipliers.push(
            RingElement::from_group_element(&ctx, &ctx.group().factor_generator(k))
                .sub(&RingElement::one(&ctx)),
        );
    }
    let bound = m_eff;
    let mut builder = HowellBuilder::new(ctx.p(), ctx.coeff_precision(), width);
    // span of m * W
    for i in 0..p.rows() {
        for mu in &multipliers {
            let scaled: Vec<RingElement> =
                p.row(i).iter().map(|e| e.mul_trunc(mu, bound)).collect();
            insert_row_translates(&mut builder, &ctx, &scaled, &flatten_row, m_eff);
        }
    }
    // greedy Nakayama selection, sparser rows first
    let mut kept: Vec<Vec<RingElement>> = Vec::new();
    let mut order: Vec<usize> = (0..p.rows()).collect();
    order.sort_by_key(|&i| p.row(i).iter().filter(|e| !e.is_zero()).count());
    for i in order {
        let row: Vec<RingElement> = p.row(i).to_vec();
        let flat = flatten_row(&row);
        if builder.contains(&flat) {
            continue;
        }
        insert_row_translates(&mut builder, &ctx, &row, &flatten_row, m_eff);
        kept.push(row);
    }
    RingMatrix::from_rows(&ctx, kept)
}

fn insert_row_translates<F: Fn(&[RingElement]) -> Vec<u64>>(
    builder: &mut HowellBuilder,
    ctx: &Arc<RingContext>,
    row: &[RingElement],
    flatten_row: &F,
    m_eff: u32,
) {
    if row.iter().all(|e| e.is_zero()) {
        return;
    }
    if builder.contains(&flatten_row(row)) {
        return;
    }
    let n = ctx.group_order() as u32;
    for j in 0..m_eff {
        for g in 0..n {
            let t: Vec<RingElement> = row.iter().map(|e| e.mul_basis(g, j)).collect();
            builder.insert(&flatten_row(&t));
        }
    }
}

/// `Fitt^[1](Z_v)` from the inertia subgroup and the Frobenius lift:
/// `(sigma~ - 1)^{-1} (N_{T_v}, sigma~ - 1)`.
pub fn zv_fitt1(
    ctx: &Arc<RingContext>,
    tv: &crate::group::Subgroup,
    frob_group: &GroupElement,
    frob_n: u32,
) -> Result<FractionalIdeal> {
    if !tv.is_cyclic() {
        return Err(Error::NonCyclicInertia(format!("{tv:?}")));
    }
    let factor = DenomFactor::frob(frob_group.clone(), frob_n);
    let sigma_minus_1 = factor.element(ctx);
    let num = IdealHandle::new(ctx, vec![crate::ring::norm_element(ctx, tv), sigma_minus_1]);
    Ok(FractionalIdeal::new(num, vec![factor]))
}
