//! Finite abelian p-groups given as products of cyclic p-power factors,
//! their elements, subgroups and coset transversals.

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A finite abelian p-group `C_{p^{a_1}} x ... x C_{p^{a_s}}`.
///
/// Elements are exponent tuples reduced modulo the factor orders; the
/// enumeration order is lexicographic on those tuples, with the first
/// coordinate most significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PGroup {
    p: u64,
    factor_orders: Vec<u64>,
}

impl PGroup {
    pub fn new(p: u64, factor_orders: Vec<u64>) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidGroup(
                "p = 2 requires the explicit even-prime override".into(),
            ));
        }
        Self::new_with_even_override(p, factor_orders)
    }

    /// Same as [`PGroup::new`] but admits p = 2. The paper identities are
    /// only asserted for odd p; callers opting in take responsibility.
    pub fn new_with_even_override(p: u64, factor_orders: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("{p} is not prime")));
        }
        for &o in &factor_orders {
            let mut m = o;
            if m < p {
                return Err(Error::InvalidGroup(format!(
                    "factor order {o} is smaller than p = {p}"
                )));
            }
            while m % p == 0 {
                m /= p;
            }
            if m != 1 {
                return Err(Error::InvalidGroup(format!(
                    "factor order {o} is not a power of {p}"
                )));
            }
        }
        Ok(PGroup { p, factor_orders })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, vec![])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn factor_orders(&self) -> &[u64] {
        &self.factor_orders
    }

    /// Number of cyclic factors (the p-rank when all orders are > 1).
    pub fn rank(&self) -> usize {
        self.factor_orders.len()
    }

    pub fn order(&self) -> u64 {
        self.factor_orders.iter().product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            exponents: vec![0; self.factor_orders.len()],
        }
    }

    /// The element with exponent 1 on factor `k` and 0 elsewhere.
    pub fn factor_generator(&self, k: usize) -> GroupElement {
        let mut e = self.identity();
        e.exponents[k] = 1;
        e
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        e.exponents.len() == self.factor_orders.len()
            && e.exponents
                .iter()
                .zip(&self.factor_orders)
                .all(|(&x, &o)| x < o)
    }

    pub fn element(&self, exponents: Vec<u64>) -> Result<GroupElement> {
        if exponents.len() != self.factor_orders.len() {
            return Err(Error::InvalidGroup(format!(
                "exponent tuple has length {}, group has rank {}",
                exponents.len(),
                self.factor_orders.len()
            )));
        }
        let exponents = exponents
            .into_iter()
            .zip(&self.factor_orders)
            .map(|(x, &o)| x % o)
            .collect();
        Ok(GroupElement { exponents })
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let exponents = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .zip(&self.factor_orders)
            .map(|((&x, &y), &o)| (x + y) % o)
            .collect();
        GroupElement { exponents }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        let exponents = a
            .exponents
            .iter()
            .zip(&self.factor_orders)
            .map(|(&x, &o)| if x == 0 { 0 } else { o - x })
            .collect();
        GroupElement { exponents }
    }

    pub fn pow(&self, a: &GroupElement, mut k: u64) -> GroupElement {
        let mut acc = self.identity();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.exponents
            .iter()
            .zip(&self.factor_orders)
            .map(|(&x, &o)| {
                if x == 0 {
                    1
                } else {
                    o / gcd(x, o)
                }
            })
            .fold(1, lcm)
    }

    /// Dense index of an element: mixed-radix value of the exponent tuple,
    /// first coordinate most significant. Compatible with the enumeration
    /// order of [`PGroup::elements`].
    pub fn index_of(&self, e: &GroupElement) -> usize {
        let mut idx: u64 = 0;
        for (&x, &o) in e.exponents.iter().zip(&self.factor_orders) {
            idx = idx * o + x;
        }
        idx as usize
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut exponents = vec![0u64; self.factor_orders.len()];
        for k in (0..self.factor_orders.len()).rev() {
            let o = self.factor_orders[k] as usize;
            exponents[k] = (idx % o) as u64;
            idx /= o;
        }
        GroupElement { exponents }
    }

    /// All elements in lexicographic order on exponent tuples.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order() as usize)
            .map(|i| self.element_at(i))
            .collect()
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let gens = (0..self.rank()).map(|k| self.factor_generator(k)).collect();
        Subgroup::new(self.clone(), gens).expect("factor generators lie in the group")
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::new(self.clone(), vec![]).expect("empty generating set")
    }
}

impl fmt::Debug for PGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factor_orders.is_empty() {
            return write!(f, "C1");
        }
        let s: Vec<String> = self.factor_orders.iter().map(|o| format!("C{o}")).collect();
        write!(f, "{}", s.join("x"))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Element of a [`PGroup`], stored as a reduced exponent tuple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    exponents: Vec<u64>,
}

impl GroupElement {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Subgroup of a [`PGroup`] given by a generating set, with the element set
/// cached at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: PGroup,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn new(parent: PGroup, generators: Vec<GroupElement>) -> Result<Self> {
        for g in &generators {
            if !parent.contains(g) {
                return Err(Error::InvalidGroup(format!(
                    "generator {g:?} does not lie in {parent:?}"
                )));
            }
        }
        let mut set: BTreeSet<GroupElement> = BTreeSet::new();
        set.insert(parent.identity());
        let mut frontier = vec![parent.identity()];
        while let Some(x) = frontier.pop() {
            for g in &generators {
                let y = parent.mul(&x, g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let elements: Vec<GroupElement> = set.into_iter().collect();
        Ok(Subgroup {
            parent,
            generators,
            elements,
        })
    }

    pub fn parent(&self) -> &PGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Elements in lexicographic order.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, e: &GroupElement) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.elements.iter().all(|e| other.contains(e))
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// Lexicographically least element whose order equals the subgroup order.
    pub fn cyclic_generator(&self) -> Option<GroupElement> {
        let n = self.order();
        self.elements
            .iter()
            .find(|e| self.parent.element_order(e) == n)
            .cloned()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g:?}")?;
        }
        write!(f, "> in {:?}", self.parent)
    }
}

/// One representative per coset of `h` in `g`: the lexicographically least
/// element of each coset, listed in lexicographic order.
pub fn coset_transversal(g: &PGroup, h: &Subgroup) -> Result<Vec<GroupElement>> {
    if h.parent() != g {
        return Err(Error::InvalidGroup(
            "subgroup does not belong to the given group".into(),
        ));
    }
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    let mut reps = Vec::new();
    for x in g.elements() {
        if seen.contains(&x) {
            continue;
        }
        for t in h.elements() {
            seen.insert(g.mul(&x, t));
        }
        reps.push(x);
    }
    Ok(reps)
}

/// Least representative of the coset `x·h`.
pub fn coset_min(g: &PGroup, h: &Subgroup, x: &GroupElement) -> GroupElement {
    h.elements()
        .iter()
        .map(|t| g.mul(x, t))
        .min()
        .expect("subgroup is nonempty")
}

/// A homomorphism between p-groups determined by images of the source's
/// factor generators. Used to reinterpret complexes over a subgroup ring
/// inside a larger group ring.
#[derive(Clone, Debug)]
pub struct GroupEmbedding {
    source: PGroup,
    target: PGroup,
    images: Vec<GroupElement>,
}

impl GroupEmbedding {
    pub fn new(source: PGroup, target: PGroup, images: Vec<GroupElement>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::InvalidGroup(
                "one image per source factor generator is required".into(),
            ));
        }
        for (k, img) in images.iter().enumerate() {
            if !target.contains(img) {
                return Err(Error::InvalidGroup(format!(
                    "image {img:?} does not lie in the target group"
                )));
            }
            let o = target.element_order(img);
            if source.factor_orders()[k] % o != 0 {
                return Err(Error::InvalidGroup(format!(
                    "image order {o} does not divide the factor order {}",
                    source.factor_orders()[k]
                )));
            }
        }
        Ok(GroupEmbedding {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: &PGroup) -> Self {
        let images = (0..g.rank()).map(|k| g.factor_generator(k)).collect();
        GroupEmbedding {
            source: g.clone(),
            target: g.clone(),
            images,
        }
    }

    pub fn source(&self) -> &PGroup {
        &self.source
    }

    pub fn target(&self) -> &PGroup {
        &self.target
    }

    pub fn apply(&self, e: &GroupElement) -> GroupElement {
        let mut acc = self.target.identity();
        for (k, &x) in e.exponents().iter().enumerate() {
            acc = self.target.mul(&acc, &self.target.pow(&self.images[k], x));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c9() -> PGroup {
        PGroup::new(3, vec![9]).unwrap()
    }

    fn c3c3() -> PGroup {
        PGroup::new(3, vec![3, 3]).unwrap()
    }

    #[test]
    fn trivial_group_has_one_element() {
        let g = PGroup::trivial(3).unwrap();
        let els = g.elements();
        assert_eq!(els.len(), 1);
        assert!(els[0].is_identity());
    }

    #[test]
    fn elements_are_lexicographic() {
        let g = c3c3();
        let els = g.elements();
        assert_eq!(els.len(), 9);
        assert_eq!(els[0].exponents(), &[0, 0]);
        assert_eq!(els[8].exponents(), &[2, 2]);
        for w in els.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn product_group_order() {
        let g = PGroup::new(3, vec![9, 3]).unwrap();
        assert_eq!(g.elements().len(), 27);
    }

    #[test]
    fn index_roundtrip() {
        let g = PGroup::new(3, vec![9, 3]).unwrap();
        for (i, e) in g.elements().into_iter().enumerate() {
            assert_eq!(g.index_of(&e), i);
            assert_eq!(g.element_at(i), e);
        }
    }

    #[test]
    fn subgroup_trivial_generators() {
        let g = c9();
        let h = Subgroup::new(g.clone(), vec![]).unwrap();
        assert_eq!(h.elements().len(), 1);
        assert!(h.elements()[0].is_identity());
    }

    #[test]
    fn subgroup_of_c9_by_cube() {
        let g = c9();
        let h = Subgroup::new(g.clone(), vec![g.element(vec![3]).unwrap()]).unwrap();
        let exps: Vec<u64> = h.elements().iter().map(|e| e.exponents()[0]).collect();
        assert_eq!(exps, vec![0, 3, 6]);
        assert_eq!(g.order() % h.order(), 0);
    }

    #[test]
    fn subgroup_full_span() {
        let g = c3c3();
        let h = Subgroup::new(
            g.clone(),
            vec![g.element(vec![1, 0]).unwrap(), g.element(vec![0, 1]).unwrap()],
        )
        .unwrap();
        assert_eq!(h.order(), 9);
    }

    /// Brute-force coset partition: group elements by coset, take the least
    /// member of each, sort.
    fn transversal_oracle(g: &PGroup, h: &Subgroup) -> Vec<GroupElement> {
        let mut reps = BTreeSet::new();
        for x in g.elements() {
            reps.insert(coset_min(g, h, &x));
        }
        reps.into_iter().collect()
    }

    #[test]
    fn transversal_full_subgroup() {
        let g = c9();
        let h = g.full_subgroup();
        let t = coset_transversal(&g, &h).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].is_identity());
    }

    #[test]
    fn transversal_trivial_subgroup() {
        let g = c3c3();
        let h = g.trivial_subgroup();
        let t = coset_transversal(&g, &h).unwrap();
        assert_eq!(t, g.elements());
    }

    #[test]
    fn transversal_c9_mod_c3() {
        let g = c9();
        let h = Subgroup::new(g.clone(), vec![g.element(vec![3]).unwrap()]).unwrap();
        let t = coset_transversal(&g, &h).unwrap();
        let exps: Vec<u64> = t.iter().map(|e| e.exponents()[0]).collect();
        assert_eq!(exps, vec![0, 1, 2]);
        assert_eq!(t, transversal_oracle(&g, &h));
    }

    #[test]
    fn transversal_matches_oracle_on_products() {
        let g = PGroup::new(3, vec![9, 3]).unwrap();
        for gens in [
            vec![g.element(vec![3, 0]).unwrap()],
            vec![g.element(vec![1, 1]).unwrap()],
            vec![g.element(vec![3, 1]).unwrap(), g.element(vec![0, 1]).unwrap()],
        ] {
            let h = Subgroup::new(g.clone(), gens).unwrap();
            assert_eq!(
                coset_transversal(&g, &h).unwrap(),
                transversal_oracle(&g, &h)
            );
        }
    }

    #[test]
    fn cyclic_generator_detection() {
        let g = c3c3();
        let diag = Subgroup::new(g.clone(), vec![g.element(vec![1, 1]).unwrap()]).unwrap();
        assert!(diag.is_cyclic());
        let full = g.full_subgroup();
        assert!(!full.is_cyclic());
    }

    #[test]
    fn even_p_needs_override() {
        assert!(PGroup::new(2, vec![4]).is_err());
        assert!(PGroup::new_with_even_override(2, vec![4]).is_ok());
    }
}
