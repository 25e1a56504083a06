//! Exact arithmetic in `(Z/p^N)[G][T]`: the group ring of a finite abelian
//! p-group extended by a polynomial variable `T`, the desk-scale stand-in
//! for the Iwasawa algebra `Z_p[G][[T]]`.
//!
//! Elements store their exact `T`-degree; truncation at `T^M` happens only
//! when flattening into coordinate vectors for span computations.

use crate::error::{Error, Result};
use crate::group::{GroupElement, PGroup, Subgroup};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Ambient ring data: the group `G`, the coefficient precision `N`
/// (coefficients live in `Z/p^N`) and the `T`-precision `M` used by
/// membership and equality tests.
pub struct RingContext {
    group: PGroup,
    coeff_precision: u32,
    t_precision: u32,
    modulus: u64,
    /// Index of the group factor that models the cyclotomic layer direction,
    /// if any. The canonical lift to the Iwasawa algebra sends that factor's
    /// generator to `1 + T`.
    gamma_factor: Option<usize>,
    mul_table: OnceLock<Vec<u32>>,
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
            && self.coeff_precision == other.coeff_precision
            && self.t_precision == other.t_precision
            && self.gamma_factor == other.gamma_factor
    }
}
impl Eq for RingContext {}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z/{}^{}[{:?}][T]/(T^{} in tests)",
            self.group.p(),
            self.coeff_precision,
            self.group,
            self.t_precision
        )
    }
}

impl RingContext {
    pub fn new(group: PGroup, coeff_precision: u32, t_precision: u32) -> Result<Arc<Self>> {
        Self::with_gamma(group, coeff_precision, t_precision, None)
    }

    pub fn with_gamma(
        group: PGroup,
        coeff_precision: u32,
        t_precision: u32,
        gamma_factor: Option<usize>,
    ) -> Result<Arc<Self>> {
        if coeff_precision == 0 || t_precision == 0 {
            return Err(Error::InvalidGroup(
                "coefficient and T precisions must be >= 1".into(),
            ));
        }
        if let Some(k) = gamma_factor {
            if k >= group.rank() {
                return Err(Error::InvalidGroup(format!(
                    "gamma factor index {k} out of range"
                )));
            }
        }
        let modulus = group
            .p()
            .checked_pow(coeff_precision)
            .ok_or_else(|| Error::InvalidGroup("p^N overflows u64".into()))?;
        Ok(Arc::new(RingContext {
            group,
            coeff_precision,
            t_precision,
            modulus,
            gamma_factor,
            mul_table: OnceLock::new(),
        }))
    }

    pub fn group(&self) -> &PGroup {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.group.p()
    }

    /// N, the exponent of the coefficient modulus `p^N`.
    pub fn coeff_precision(&self) -> u32 {
        self.coeff_precision
    }

    /// M, the `T`-truncation used by membership and equality tests.
    pub fn t_precision(&self) -> u32 {
        self.t_precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn gamma_factor(&self) -> Option<usize> {
        self.gamma_factor
    }

    pub fn group_order(&self) -> usize {
        self.group.order() as usize
    }

    /// Width of the flattened `Z/p^N`-basis `{(g, T^j) : g in G, j < M}`.
    pub fn flat_width(&self) -> usize {
        self.group_order() * self.t_precision as usize
    }

    fn table(&self) -> &[u32] {
        self.mul_table.get_or_init(|| {
            let n = self.group_order();
            let els = self.group.elements();
            let mut t = vec![0u32; n * n];
            for (i, a) in els.iter().enumerate() {
                for (j, b) in els.iter().enumerate() {
                    t[i * n + j] = self.group.index_of(&self.group.mul(a, b)) as u32;
                }
            }
            t
        })
    }

    fn mul_idx(&self, a: u32, b: u32) -> u32 {
        let n = self.group_order();
        self.table()[a as usize * n + b as usize]
    }

    pub fn same_as(&self, other: &RingContext) -> bool {
        self == other
    }

    /// Same group and coefficient precision, different `T`-truncation.
    /// Used by pipelines that need extra internal precision before
    /// normalizing a fractional ideal back down.
    pub fn with_t_precision(&self, t_precision: u32) -> Result<Arc<Self>> {
        RingContext::with_gamma(
            self.group.clone(),
            self.coeff_precision,
            t_precision,
            self.gamma_factor,
        )
    }
}

/// Key of a stored monomial: `T`-degree major, then dense group index.
type TermKey = (u32, u32);

/// Element of `(Z/p^N)[G][T]` as a finitely supported coefficient map.
/// Stored residues are nonzero and reduced mod `p^N`.
#[derive(Clone)]
pub struct RingElement {
    ctx: Arc<RingContext>,
    terms: BTreeMap<TermKey, u64>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.terms == other.terms
    }
}
impl Eq for RingElement {}

impl RingElement {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        RingElement {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::constant(ctx, 1)
    }

    pub fn constant(ctx: &Arc<RingContext>, c: u64) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(0, 0, c);
        e
    }

    pub fn from_group_element(ctx: &Arc<RingContext>, g: &GroupElement) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(0, ctx.group().index_of(g) as u32, 1);
        e
    }

    /// `c * g * T^j`.
    pub fn monomial(ctx: &Arc<RingContext>, c: u64, g: &GroupElement, j: u32) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(j, ctx.group().index_of(g) as u32, c);
        e
    }

    /// The polynomial variable `T`.
    pub fn t(ctx: &Arc<RingContext>) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(1, 0, 1);
        e
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, u64)> + '_ {
        self.terms.iter().map(|(&(j, g), &c)| (j, g, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Exact `T`-degree, or None for the zero element.
    pub fn t_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|&(j, _)| j)
    }

    fn add_term(&mut self, j: u32, g: u32, c: u64) {
        let m = self.ctx.modulus();
        let c = c % m;
        if c == 0 {
            return;
        }
        let e = self.terms.entry((j, g)).or_insert(0);
        *e = (*e + c) % m;
        if *e == 0 {
            self.terms.remove(&(j, g));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_ctx(self, other);
        let mut out = self.clone();
        for (&(j, g), &c) in &other.terms {
            out.add_term(j, g, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let m = self.ctx.modulus();
        let mut out = Self::zero(&self.ctx);
        for (&k, &c) in &self.terms {
            out.terms.insert(k, m - c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.ctx.modulus();
        let c = c % m;
        let mut out = Self::zero(&self.ctx);
        for (&k, &v) in &self.terms {
            let w = ((v as u128 * c as u128) % m as u128) as u64;
            if w != 0 {
                out.terms.insert(k, w);
            }
        }
        out
    }

    /// Exact convolution product; `T`-degrees add.
    pub fn mul(&self, other: &Self) -> Self {
        assert_ctx(self, other);
        let m = self.ctx.modulus();
        let mut out = Self::zero(&self.ctx);
        for (&(j1, g1), &c1) in &self.terms {
            for (&(j2, g2), &c2) in &other.terms {
                let c = ((c1 as u128 * c2 as u128) % m as u128) as u64;
                if c != 0 {
                    out.add_term(j1 + j2, self.ctx.mul_idx(g1, g2), c);
                }
            }
        }
        out
    }

    /// Product truncated at `T^bound`; used by pipelines that work in
    /// `Lambda/(T^M)` throughout.
    pub fn mul_trunc(&self, other: &Self, bound: u32) -> Self {
        assert_ctx(self, other);
        let m = self.ctx.modulus();
        let mut out = Self::zero(&self.ctx);
        for (&(j1, g1), &c1) in &self.terms {
            if j1 >= bound {
                continue;
            }
            for (&(j2, g2), &c2) in &other.terms {
                if j1 + j2 >= bound {
                    continue;
                }
                let c = ((c1 as u128 * c2 as u128) % m as u128) as u64;
                if c != 0 {
                    out.add_term(j1 + j2, self.ctx.mul_idx(g1, g2), c);
                }
            }
        }
        out
    }

    /// Drop all terms of `T`-degree >= `bound`.
    pub fn truncate(&self, bound: u32) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (&(j, g), &c) in &self.terms {
            if j < bound {
                out.terms.insert((j, g), c);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Ring homomorphism sending every group element to 1 and `T` to 0.
    pub fn augmentation(&self) -> u64 {
        let m = self.ctx.modulus();
        let mut s: u64 = 0;
        for (&(j, _), &c) in &self.terms {
            if j == 0 {
                s = (s + c) % m;
            }
        }
        s
    }

    /// Units of the local ring `(Z/p^N)[G][T]/(T^M)`: elements whose
    /// degree-zero augmentation is prime to p.
    pub fn is_unit(&self) -> bool {
        self.augmentation() % self.ctx.p() != 0
    }

    /// Inverse in `Lambda/(T^bound)` by Newton iteration from the inverse of
    /// the augmentation scalar. The maximal ideal is nilpotent at finite
    /// precision, so the iteration terminates exactly.
    pub fn inverse_trunc(&self, bound: u32) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let m = self.ctx.modulus();
        let a0 = inv_mod_prime_power(self.augmentation(), m, self.ctx.p())?;
        let mut x = Self::constant(&self.ctx, a0);
        let one = Self::one(&self.ctx);
        for _ in 0..64 {
            let prod = self.mul_trunc(&x, bound);
            if prod == one {
                return Ok(x);
            }
            // x <- x(2 - self*x)
            let two_minus = Self::constant(&self.ctx, 2).sub(&prod);
            x = x.mul_trunc(&two_minus, bound);
        }
        Err(Error::NotAUnit)
    }

    /// Substitute `T -> s` (ring endomorphism fixing the group).
    pub fn substitute_t(&self, s: &Self) -> Self {
        let mut out = Self::zero(&self.ctx);
        let mut powers: Vec<Self> = vec![Self::one(&self.ctx)];
        for (&(j, g), &c) in &self.terms {
            while powers.len() <= j as usize {
                let next = powers.last().unwrap().mul(s);
                powers.push(next);
            }
            let term = powers[j as usize].mul(&Self::monomial(
                &self.ctx,
                c,
                &self.ctx.group().element_at(g as usize),
                0,
            ));
            out = out.add(&term);
        }
        out
    }

    /// Canonical lift along the context's gamma factor: a group exponent `e`
    /// on that factor becomes a multiplicative factor `(1+T)^e`. Elements of
    /// contexts without a gamma factor are returned unchanged (the canonical
    /// `T`-degree-zero lift).
    pub fn lift_gamma(&self) -> Self {
        let Some(k) = self.ctx.gamma_factor() else {
            return self.clone();
        };
        let group = self.ctx.group().clone();
        let mut out = Self::zero(&self.ctx);
        for (&(j, g), &c) in &self.terms {
            let el = group.element_at(g as usize);
            let e = el.exponents()[k];
            let mut stripped = el.exponents().to_vec();
            stripped[k] = 0;
            let base = group.element(stripped).expect("stripped exponents valid");
            let factor = one_plus_t_pow(&self.ctx, e as u32);
            let term = factor.mul(&Self::monomial(&self.ctx, c, &base, j));
            out = out.add(&term);
        }
        out
    }

    /// Leading `T`-coefficient as an element of the group-ring slice.
    fn leading_t_coeff(&self) -> Option<(u32, Self)> {
        let d = self.t_degree()?;
        let mut lead = Self::zero(&self.ctx);
        for (&(j, g), &c) in &self.terms {
            if j == d {
                lead.terms.insert((0, g), c);
            }
        }
        Some((d, lead))
    }

    /// Exact division by a divisor that is monic in `T` up to a unit leading
    /// coefficient. Returns None when the division leaves a remainder.
    pub fn try_div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_ctx(self, divisor);
        if self.is_zero() {
            return Some(Self::zero(&self.ctx));
        }
        let (dd, lead) = divisor.leading_t_coeff()?;
        if !lead.is_unit() {
            return None;
        }
        // The leading coefficient lives in the T-degree-zero slice; its
        // inverse there is exact (no truncation involved).
        let lead_inv = lead.inverse_trunc(1).ok()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while let Some((rd, rlead)) = rem.leading_t_coeff() {
            if rd < dd {
                return None;
            }
            let factor = rlead.mul(&lead_inv);
            let shifted = factor.mul(&Self::monomial(
                &self.ctx,
                1,
                &self.ctx.group().identity(),
                rd - dd,
            ));
            quot = quot.add(&shifted);
            rem = rem.sub(&shifted.mul(divisor));
            if rem
                .t_degree()
                .map(|d| d >= rd && !rem.is_zero())
                .unwrap_or(false)
            {
                // Degree failed to drop; the division cannot terminate.
                return None;
            }
        }
        Some(quot)
    }

    /// The same element in a context that differs only in `T`-precision.
    pub fn with_context(&self, ctx2: &Arc<RingContext>) -> RingElement {
        assert!(
            self.ctx.group() == ctx2.group() && self.ctx.modulus() == ctx2.modulus(),
            "context conversion requires the same group and coefficient ring"
        );
        RingElement {
            ctx: ctx2.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Coordinates over the flattened basis `{(g, T^j) : j < M}`,
    /// `T`-degree major. Terms of degree >= M are dropped.
    pub fn flatten(&self) -> Vec<u64> {
        let n = self.ctx.group_order();
        let m = self.ctx.t_precision() as usize;
        let mut v = vec![0u64; n * m];
        for (&(j, g), &c) in &self.terms {
            if (j as usize) < m {
                v[j as usize * n + g as usize] = c;
            }
        }
        v
    }

    pub fn unflatten(ctx: &Arc<RingContext>, v: &[u64]) -> Self {
        let n = ctx.group_order();
        let mut e = Self::zero(ctx);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                e.add_term((i / n) as u32, (i % n) as u32, c);
            }
        }
        e
    }

    /// Multiply by the basis monomial `g * T^j`.
    pub fn mul_basis(&self, g: u32, j: u32) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (&(j1, g1), &c) in &self.terms {
            out.terms.insert((j1 + j, self.ctx.mul_idx(g1, g)), c);
        }
        out
    }

    /// Render as a signed sum of monomials `c*g1^e1*...*T^j`, T-degree major.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let m = self.ctx.modulus();
        let mut parts: Vec<String> = Vec::new();
        for (&(j, g), &c) in &self.terms {
            // signed representative, exact since p is odd in normal use
            let (neg, mag) = if c > m / 2 { (true, m - c) } else { (false, c) };
            let mut factors: Vec<String> = Vec::new();
            let el = self.ctx.group().element_at(g as usize);
            for (k, &e) in el.exponents().iter().enumerate() {
                if e == 1 {
                    factors.push(format!("g{}", k + 1));
                } else if e > 1 {
                    factors.push(format!("g{}^{}", k + 1, e));
                }
            }
            if j == 1 {
                factors.push("T".into());
            } else if j > 1 {
                factors.push(format!("T^{j}"));
            }
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag == 1 {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{}{}", if neg { " - " } else { " + " }, body));
            }
        }
        parts.concat()
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn assert_ctx(a: &RingElement, b: &RingElement) {
    assert!(
        *a.ctx == *b.ctx,
        "ring context mismatch: {:?} vs {:?}",
        a.ctx,
        b.ctx
    );
}

/// Checked variant of the context guard for public entry points.
pub fn check_ctx(a: &RingElement, b: &RingElement) -> Result<()> {
    if *a.context() == *b.context() {
        Ok(())
    } else {
        Err(Error::ContextMismatch(format!(
            "{:?} vs {:?}",
            a.context(),
            b.context()
        )))
    }
}

fn inv_mod_prime_power(a: u64, modulus: u64, p: u64) -> Result<u64> {
    if a % p == 0 {
        return Err(Error::NotAUnit);
    }
    // Fermat-style iteration: lift the inverse mod p by Newton steps.
    let mut x = {
        // inverse mod p by search (p is small)
        let ap = a % p;
        (1..p).find(|&x| (ap * x) % p == 1).ok_or(Error::NotAUnit)?
    };
    loop {
        let ax = ((a as u128 * x as u128) % modulus as u128) as u64;
        if ax == 1 {
            return Ok(x);
        }
        let two_minus = (2 + modulus - ax) % modulus;
        x = ((x as u128 * two_minus as u128) % modulus as u128) as u64;
    }
}

/// Sum over the subgroup's elements, each with coefficient 1, T-degree 0.
pub fn norm_element(ctx: &Arc<RingContext>, h: &Subgroup) -> RingElement {
    let mut e = RingElement::zero(ctx);
    for x in h.elements() {
        e.add_term(0, ctx.group().index_of(x) as u32, 1);
    }
    e
}

/// `sigma - 1` for a group element sigma.
pub fn tau_element(ctx: &Arc<RingContext>, sigma: &GroupElement) -> RingElement {
    RingElement::from_group_element(ctx, sigma).sub(&RingElement::one(ctx))
}

/// `(1+T)^k` with exact binomial coefficients mod `p^N`.
pub fn one_plus_t_pow(ctx: &Arc<RingContext>, k: u32) -> RingElement {
    let m = ctx.modulus();
    // Pascal row k mod p^N
    let mut row = vec![1u64];
    for _ in 0..k {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = (row[i - 1] + row[i]) % m;
        }
        row = next;
    }
    let mut e = RingElement::zero(ctx);
    for (j, &c) in row.iter().enumerate() {
        e.add_term(j as u32, 0, c);
    }
    e
}

/// `(1+T)^{p^n} - 1`, the group-trivial polynomial with exact T-degree `p^n`
/// and vanishing augmentation.
pub fn gamma_power_poly(ctx: &Arc<RingContext>, n: u32) -> RingElement {
    let k = ctx
        .p()
        .checked_pow(n)
        .expect("p^n fits in u64 for supported layer indices");
    one_plus_t_pow(ctx, k as u32).sub(&RingElement::one(ctx))
}

/// `1 + (1+T) + ... + (1+T)^{k-1}`, the truncated norm in the gamma direction.
pub fn gamma_norm_poly(ctx: &Arc<RingContext>, k: u32) -> RingElement {
    let mut acc = RingElement::zero(ctx);
    let mut pw = RingElement::one(ctx);
    let step = one_plus_t_pow(ctx, 1);
    for _ in 0..k {
        acc = acc.add(&pw);
        pw = pw.mul(&step);
    }
    acc
}
