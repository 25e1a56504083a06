//! Canonical linear algebra over `Z/p^N`: Howell normal form, span
//! membership, kernels and span equality.
//!
//! Row echelon forms are not canonical over rings with zero divisors; the
//! Howell form is. Two matrices have equal row spans over `Z/p^N` exactly
//! when their Howell forms are identical, which turns every downstream
//! ideal comparison into a plain equality of canonical rows.

use crate::error::{Error, Result};

/// Matrix of residues mod `p^N` with explicitly tracked modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueMatrix {
    pub modulus: u64,
    pub p: u64,
    pub n_exp: u32,
    pub width: usize,
    pub rows: Vec<Vec<u64>>,
}

impl ResidueMatrix {
    pub fn new(p: u64, n_exp: u32, width: usize, rows: Vec<Vec<u64>>) -> Self {
        let modulus = p.pow(n_exp);
        let rows = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), width, "row width mismatch");
                r.into_iter().map(|x| x % modulus).collect()
            })
            .collect();
        ResidueMatrix {
            modulus,
            p,
            n_exp,
            width,
            rows,
        }
    }

    pub fn zero(p: u64, n_exp: u32, width: usize) -> Self {
        Self::new(p, n_exp, width, Vec::new())
    }

    pub fn identity(p: u64, n_exp: u32, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0u64; n];
                r[i] = 1;
                r
            })
            .collect();
        Self::new(p, n_exp, n, rows)
    }
}

fn val_p(mut x: u64, p: u64, n_exp: u32) -> u32 {
    if x == 0 {
        return n_exp;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn inv_unit(a: u64, modulus: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    let mut x = (1..p).find(|&x| (a % p * x) % p == 1).unwrap();
    loop {
        let ax = ((a as u128 * x as u128) % modulus as u128) as u64;
        if ax == 1 {
            return x;
        }
        let t = (2 + modulus - ax) % modulus;
        x = ((x as u128 * t as u128) % modulus as u128) as u64;
    }
}

/// Canonical Howell normal form over `Z/p^N`.
///
/// Rows are nonzero, ordered by pivot column; each pivot entry is a power
/// of p; entries above a pivot are reduced modulo the pivot; and the span
/// is closed under leading-coefficient annihilation. Two row spans agree
/// exactly when the forms are entry-wise identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellForm {
    pub modulus: u64,
    pub p: u64,
    pub n_exp: u32,
    pub width: usize,
    pub rows: Vec<Vec<u64>>,
    /// (pivot column, valuation of the pivot entry) per row.
    pub pivots: Vec<(usize, u32)>,
}

impl HowellForm {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// log_p of the span cardinality: sum of (N - pivot valuation).
    pub fn span_log_p(&self) -> u64 {
        self.pivots
            .iter()
            .map(|&(_, v)| (self.n_exp - v) as u64)
            .sum()
    }

    /// True if the vector lies in the row span. Reduction by pivots is a
    /// complete membership test on a Howell form.
    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                got: v.len(),
            });
        }
        Ok(self.reduce(v).iter().all(|&x| x == 0))
    }

    /// Remainder of `v` after reduction by the form's rows.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut w: Vec<u64> = v.iter().map(|&x| x % m).collect();
        for (row, &(c, vp)) in self.rows.iter().zip(&self.pivots) {
            let x = w[c];
            if x == 0 {
                continue;
            }
            if val_p(x, self.p, self.n_exp) < vp {
                continue;
            }
            let q = x / self.p.pow(vp);
            for (wi, ri) in w.iter_mut().zip(row) {
                let sub = ((q as u128 * *ri as u128) % m as u128) as u64;
                *wi = (*wi + m - sub) % m;
            }
        }
        w
    }
}

/// Incremental Howell builder. Rows can be fed one at a time; membership of
/// a candidate against the current partial span is exact at every point.
pub struct HowellBuilder {
    modulus: u64,
    p: u64,
    n_exp: u32,
    width: usize,
    /// pivot column -> row, not yet reduced upward
    pivot_rows: Vec<Option<Vec<u64>>>,
}

impl HowellBuilder {
    pub fn new(p: u64, n_exp: u32, width: usize) -> Self {
        HowellBuilder {
            modulus: p.pow(n_exp),
            p,
            n_exp,
            width,
            pivot_rows: vec![None; width],
        }
    }

    fn leading(&self, row: &[u64]) -> Option<usize> {
        row.iter().position(|&x| x != 0)
    }

    /// Reduce `row` by the current pivots without inserting it.
    /// Returns the remainder; an all-zero remainder means membership.
    pub fn reduce(&self, row: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut w: Vec<u64> = row.iter().map(|&x| x % m).collect();
        while let Some(c) = self.leading(&w) {
            let Some(pr) = &self.pivot_rows[c] else {
                return w;
            };
            let pv = val_p(pr[c], self.p, self.n_exp);
            let wv = val_p(w[c], self.p, self.n_exp);
            if wv < pv {
                return w;
            }
            let q = w[c] / self.p.pow(pv);
            for (wi, ri) in w.iter_mut().zip(pr) {
                let sub = ((q as u128 * *ri as u128) % m as u128) as u64;
                *wi = (*wi + m - sub) % m;
            }
        }
        w
    }

    pub fn contains(&self, row: &[u64]) -> bool {
        self.reduce(row).iter().all(|&x| x == 0)
    }

    /// Insert a row into the span. Returns true if the span grew.
    pub fn insert(&mut self, row: &[u64]) -> bool {
        let mut grew = false;
        let mut stack = vec![row.to_vec()];
        while let Some(mut w) = stack.pop() {
            for x in w.iter_mut() {
                *x %= self.modulus;
            }
            while let Some(c) = self.leading(&w) {
                let wv = val_p(w[c], self.p, self.n_exp);
                match &self.pivot_rows[c] {
                    None => {
                        // normalize pivot to p^wv and install
                        let u = w[c] / self.p.pow(wv);
                        let uinv = inv_unit(u, self.modulus, self.p);
                        for x in w.iter_mut() {
                            *x = ((*x as u128 * uinv as u128) % self.modulus as u128) as u64;
                        }
                        // leading-coefficient annihilator keeps the span
                        // closed in the Howell sense
                        if wv > 0 {
                            let ann_scale = self.p.pow(self.n_exp - wv);
                            let ann: Vec<u64> = w
                                .iter()
                                .map(|&x| {
                                    ((x as u128 * ann_scale as u128) % self.modulus as u128) as u64
                                })
                                .collect();
                            if ann.iter().any(|&x| x != 0) {
                                stack.push(ann);
                            }
                        }
                        self.pivot_rows[c] = Some(w);
                        grew = true;
                        break;
                    }
                    Some(pr) => {
                        let pv = val_p(pr[c], self.p, self.n_exp);
                        if wv >= pv {
                            let q = w[c] / self.p.pow(pv);
                            let pr = pr.clone();
                            for (wi, ri) in w.iter_mut().zip(&pr) {
                                let sub =
                                    ((q as u128 * *ri as u128) % self.modulus as u128) as u64;
                                *wi = (*wi + self.modulus - sub) % self.modulus;
                            }
                        } else {
                            // smaller valuation: swap roles
                            let u = w[c] / self.p.pow(wv);
                            let uinv = inv_unit(u, self.modulus, self.p);
                            for x in w.iter_mut() {
                                *x = ((*x as u128 * uinv as u128) % self.modulus as u128) as u64;
                            }
                            let old = self.pivot_rows[c].replace(w).unwrap();
                            if wv > 0 {
                                let ann_scale = self.p.pow(self.n_exp - wv);
                                let new_ref = self.pivot_rows[c].as_ref().unwrap();
                                let ann: Vec<u64> = new_ref
                                    .iter()
                                    .map(|&x| {
                                        ((x as u128 * ann_scale as u128) % self.modulus as u128)
                                            as u64
                                    })
                                    .collect();
                                if ann.iter().any(|&x| x != 0) {
                                    stack.push(ann);
                                }
                            }
                            stack.push(old);
                            grew = true;
                            break;
                        }
                    }
                }
            }
        }
        grew
    }

    /// Finish: reduce entries above each pivot and emit the canonical form.
    pub fn finish(&self) -> HowellForm {
        let m = self.modulus;
        let cols: Vec<usize> = (0..self.width)
            .filter(|&c| self.pivot_rows[c].is_some())
            .collect();
        let mut rows: Vec<Vec<u64>> = cols
            .iter()
            .map(|&c| self.pivot_rows[c].clone().unwrap())
            .collect();
        let pivots: Vec<(usize, u32)> = cols
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, val_p(rows[i][c], self.p, self.n_exp)))
            .collect();
        // Bottom-up: when row i is processed, all later rows are already in
        // reduced form, and reducing at pivot columns left to right cannot
        // disturb columns handled earlier (pivot rows vanish left of their
        // pivot).
        for i in (0..rows.len()).rev() {
            for k in i + 1..rows.len() {
                let (c, v) = pivots[k];
                let q = rows[i][c] / self.p.pow(v);
                if q == 0 {
                    continue;
                }
                let rk = rows[k].clone();
                for (wi, ri) in rows[i].iter_mut().zip(&rk) {
                    let sub = ((q as u128 * *ri as u128) % m as u128) as u64;
                    *wi = (*wi + m - sub) % m;
                }
            }
        }
        HowellForm {
            modulus: m,
            p: self.p,
            n_exp: self.n_exp,
            width: self.width,
            rows,
            pivots,
        }
    }
}

/// Canonical Howell normal form of the row span of `m`.
pub fn howell_form(m: &ResidueMatrix) -> HowellForm {
    let mut b = HowellBuilder::new(m.p, m.n_exp, m.width);
    for r in &m.rows {
        b.insert(r);
    }
    b.finish()
}

/// True iff the row spans of `a` and `b` coincide.
pub fn span_equal(a: &ResidueMatrix, b: &ResidueMatrix) -> Result<bool> {
    if a.width != b.width || a.modulus != b.modulus {
        return Err(Error::WidthMismatch {
            expected: a.width,
            got: b.width,
        });
    }
    Ok(howell_form(a) == howell_form(b))
}

/// Generators of the left kernel `{x : x . m = 0}` as a `Z/p^N`-module,
/// computed from the Howell form of the augmented rows `(m_i | e_i)`.
pub fn kernel(m: &ResidueMatrix) -> ResidueMatrix {
    let n = m.rows.len();
    let aug_width = m.width + n;
    let mut b = HowellBuilder::new(m.p, m.n_exp, aug_width);
    for (i, r) in m.rows.iter().enumerate() {
        let mut row = vec![0u64; aug_width];
        row[..m.width].copy_from_slice(r);
        row[m.width + i] = 1;
        b.insert(&row);
    }
    let form = b.finish();
    let rows: Vec<Vec<u64>> = form
        .rows
        .iter()
        .zip(&form.pivots)
        .filter(|(_, &(c, _))| c >= m.width)
        .map(|(r, _)| r[m.width..].to_vec())
        .collect();
    ResidueMatrix::new(m.p, m.n_exp, n, rows)
}

/// Smith-style diagonalization over `Z/p^N`. Returns the valuation of the
/// diagonal entry per column of the presentation: `v` means an elementary
/// divisor `p^v`, with `v = N` for columns without any relation.
pub fn smith_valuations(m: &ResidueMatrix, cols: usize) -> Vec<u32> {
    let modulus = m.modulus;
    let p = m.p;
    let n_exp = m.n_exp;
    let mut a: Vec<Vec<u64>> = m.rows.clone();
    let mut vals = Vec::new();
    let mut active_rows: Vec<usize> = (0..a.len()).collect();
    let mut active_cols: Vec<usize> = (0..cols).collect();
    while !active_rows.is_empty() && !active_cols.is_empty() {
        // entry of minimal valuation
        let mut best: Option<(u32, usize, usize)> = None;
        for &i in &active_rows {
            for &j in &active_cols {
                let x = a[i][j];
                if x == 0 {
                    continue;
                }
                let v = val_p(x, p, n_exp);
                if best.map(|(bv, _, _)| v < bv).unwrap_or(true) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            break;
        };
        // normalize pivot row so the pivot is p^v
        let u = a[pi][pj] / p.pow(v);
        let uinv = inv_unit(u, modulus, p);
        for x in a[pi].iter_mut() {
            *x = ((*x as u128 * uinv as u128) % modulus as u128) as u64;
        }
        let pk = p.pow(v);
        // clear the pivot column (all other entries have valuation >= v)
        let pivot_row = a[pi].clone();
        for &i in &active_rows {
            if i == pi || a[i][pj] == 0 {
                continue;
            }
            let q = a[i][pj] / pk;
            for (x, r) in a[i].iter_mut().zip(&pivot_row) {
                let sub = ((q as u128 * *r as u128) % modulus as u128) as u64;
                *x = (*x + modulus - sub) % modulus;
            }
        }
        // clear the pivot row (column operations do not change the cokernel)
        vals.push(v);
        active_rows.retain(|&i| i != pi);
        active_cols.retain(|&j| j != pj);
    }
    // pivotless columns are free Z/p^N factors
    for _ in 0..active_cols.len() {
        vals.push(n_exp);
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeSet;

    fn mat(p: u64, n: u32, width: usize, rows: Vec<Vec<u64>>) -> ResidueMatrix {
        ResidueMatrix::new(p, n, width, rows)
    }

    /// Every vector in the row span, by closure under addition and scaling.
    fn enumerate_span(m: &ResidueMatrix) -> BTreeSet<Vec<u64>> {
        let modulus = m.modulus;
        let mut set = BTreeSet::new();
        set.insert(vec![0u64; m.width]);
        let mut frontier: Vec<Vec<u64>> = vec![vec![0u64; m.width]];
        while let Some(v) = frontier.pop() {
            for r in &m.rows {
                let w: Vec<u64> = v.iter().zip(r).map(|(&a, &b)| (a + b) % modulus).collect();
                if set.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        set
    }

    #[test]
    fn identity_is_its_own_form() {
        let m = ResidueMatrix::identity(3, 2, 3);
        let h = howell_form(&m);
        assert_eq!(h.rows, m.rows);
        assert_eq!(h.span_log_p(), 6);
    }

    #[test]
    fn zero_matrix_gives_empty_form() {
        let m = mat(3, 2, 3, vec![vec![0, 0, 0]]);
        let h = howell_form(&m);
        assert!(h.rows.is_empty());
    }

    #[test]
    fn z4_span_matches_enumeration() {
        let m = mat(2, 2, 2, vec![vec![2, 0], vec![0, 2], vec![1, 1]]);
        let h = howell_form(&m);
        let span = enumerate_span(&m);
        // the form's span, enumerated fully, equals the closure of the input rows
        let form_mat = mat(2, 2, 2, h.rows.clone());
        assert_eq!(enumerate_span(&form_mat), span);
        for v in &span {
            assert!(h.contains(v).unwrap());
        }
        assert_eq!(1usize << h.span_log_p() as usize, span.len());
    }

    #[test]
    fn membership_examples() {
        let m = mat(3, 2, 2, vec![vec![3, 0]]);
        let h = howell_form(&m);
        assert!(h.contains(&[0, 0]).unwrap());
        assert!(h.contains(&[3, 0]).unwrap());
        assert!(!h.contains(&[1, 0]).unwrap());
        assert!(h.contains(&[6, 0]).unwrap());
        assert!(h.contains(&[1, 1]).is_err() == false);
        assert!(h.contains(&[1]).is_err());
    }

    #[test]
    fn membership_of_source_rows() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..20 {
            let rows: Vec<Vec<u64>> = (0..3)
                .map(|_| (0..4).map(|_| rng.gen_range(0..9u64)).collect())
                .collect();
            let m = mat(3, 2, 4, rows.clone());
            let h = howell_form(&m);
            for r in &rows {
                assert!(h.contains(r).unwrap());
            }
        }
    }

    #[test]
    fn kernel_of_invertible_matrix_is_trivial() {
        let m = mat(3, 2, 2, vec![vec![1, 1], vec![0, 1]]);
        let k = kernel(&m);
        assert!(howell_form(&k).rows.is_empty());
    }

    #[test]
    fn kernel_of_p_over_p2() {
        // annihilator of p in Z/p^2 is (p)
        let m = mat(3, 2, 1, vec![vec![3]]);
        let k = kernel(&m);
        let h = howell_form(&k);
        assert_eq!(h.rows, vec![vec![3]]);
    }

    /// Exhaustive left-kernel oracle over all 9^rows row vectors.
    fn kernel_oracle(m: &ResidueMatrix) -> BTreeSet<Vec<u64>> {
        let modulus = m.modulus;
        let n = m.rows.len();
        let mut out = BTreeSet::new();
        let total = (modulus as usize).pow(n as u32);
        for mut code in 0..total {
            let mut x = vec![0u64; n];
            for xi in x.iter_mut() {
                *xi = (code % modulus as usize) as u64;
                code /= modulus as usize;
            }
            let mut prod = vec![0u64; m.width];
            for (xi, row) in x.iter().zip(&m.rows) {
                for (pj, rj) in prod.iter_mut().zip(row) {
                    *pj = (*pj + (*xi as u128 * *rj as u128 % modulus as u128) as u64) % modulus;
                }
            }
            if prod.iter().all(|&v| v == 0) {
                out.insert(x);
            }
        }
        out
    }

    #[test]
    fn kernel_matches_exhaustive_oracle() {
        let mut rng = StdRng::seed_from_u64(1234);
        for _ in 0..15 {
            let rows: Vec<Vec<u64>> = (0..3)
                .map(|_| (0..4).map(|_| rng.gen_range(0..9u64)).collect())
                .collect();
            let m = mat(3, 2, 4, rows);
            let k = kernel(&m);
            let got = enumerate_span(&k);
            let want = kernel_oracle(&m);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn span_equal_under_permutation_and_scaling() {
        let a = mat(3, 2, 3, vec![vec![1, 2, 3], vec![0, 3, 6]]);
        let b = mat(3, 2, 3, vec![vec![0, 3, 6], vec![1, 2, 3]]);
        assert!(span_equal(&a, &b).unwrap());
        // scaling a row by the unit 2
        let c = mat(3, 2, 3, vec![vec![2, 4, 6], vec![0, 3, 6]]);
        assert!(span_equal(&a, &c).unwrap());
        let d = mat(3, 2, 2, vec![vec![3, 0]]);
        let e = mat(3, 2, 2, vec![vec![1, 0]]);
        assert!(!span_equal(&d, &e).unwrap());
    }

    #[test]
    fn idempotence() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..30 {
            let rows: Vec<Vec<u64>> = (0..4)
                .map(|_| (0..3).map(|_| rng.gen_range(0..27u64)).collect())
                .collect();
            let m = mat(3, 3, 3, rows);
            let h = howell_form(&m);
            let again = howell_form(&mat(3, 3, 3, h.rows.clone()));
            assert_eq!(h, again);
        }
    }

    #[test]
    fn canonicity_vs_enumeration() {
        // random small matrices over Z/9: equal enumerated spans iff equal forms
        let mut rng = StdRng::seed_from_u64(77);
        let mut samples = Vec::new();
        for _ in 0..40 {
            let rows: Vec<Vec<u64>> = (0..rng.gen_range(1..4usize))
                .map(|_| (0..3).map(|_| rng.gen_range(0..9u64)).collect())
                .collect();
            let m = mat(3, 2, 3, rows);
            samples.push((enumerate_span(&m), howell_form(&m)));
        }
        for (si, hi) in &samples {
            for (sj, hj) in &samples {
                assert_eq!(si == sj, hi == hj);
            }
        }
    }

    #[test]
    fn kernel_span_counting() {
        // |span(kernel)| * |span(m)| = (p^N)^rows
        let mut rng = StdRng::seed_from_u64(2024);
        for _ in 0..20 {
            let nrows = rng.gen_range(1..=4usize);
            let rows: Vec<Vec<u64>> = (0..nrows)
                .map(|_| (0..3).map(|_| rng.gen_range(0..9u64)).collect())
                .collect();
            let m = mat(3, 2, 3, rows);
            let hk = howell_form(&kernel(&m));
            let hm = howell_form(&m);
            assert_eq!(
                hk.span_log_p() + hm.span_log_p(),
                2 * nrows as u64 // (p^2)^rows
            );
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = ResidueMatrix> {
            proptest::collection::vec(proptest::collection::vec(0u64..27, 3), 1..5)
                .prop_map(|rows| ResidueMatrix::new(3, 3, 3, rows))
        }

        proptest! {
            #[test]
            fn howell_is_idempotent(m in arb_matrix()) {
                let h = howell_form(&m);
                let again = howell_form(&ResidueMatrix::new(3, 3, 3, h.rows.clone()));
                prop_assert_eq!(h, again);
            }

            #[test]
            fn span_equal_is_reflexive_and_unit_stable(m in arb_matrix(), unit in prop_oneof![Just(2u64), Just(4), Just(5)]) {
                prop_assert!(span_equal(&m, &m).unwrap());
                let scaled_rows: Vec<Vec<u64>> = m
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|&x| x * unit % 27).collect())
                    .collect();
                let scaled = ResidueMatrix::new(3, 3, 3, scaled_rows);
                prop_assert!(span_equal(&m, &scaled).unwrap());
            }

            #[test]
            fn kernel_rows_annihilate(m in arb_matrix()) {
                let k = kernel(&m);
                for x in &k.rows {
                    let mut prod = vec![0u64; m.width];
                    for (xi, row) in x.iter().zip(&m.rows) {
                        for (pj, rj) in prod.iter_mut().zip(row) {
                            *pj = (*pj + xi * rj) % m.modulus;
                        }
                    }
                    prop_assert!(prod.iter().all(|&v| v == 0));
                }
            }
        }
    }

    #[test]
    fn smith_valuations_examples() {
        // diag(1, p) over Z/p^2
        let m = mat(3, 2, 2, vec![vec![1, 0], vec![0, 3]]);
        let mut v = smith_valuations(&m, 2);
        v.sort_unstable();
        assert_eq!(v, vec![0, 1]);
        // no relations: one free column
        let m = mat(3, 2, 1, vec![]);
        assert_eq!(smith_valuations(&m, 1), vec![2]);
    }
}
