//! Arithmetic-flavored module builders and theorem-level ideal identities,
//! expressed purely from place data: a finite abelian p-group `H`, per
//! place an inertia subgroup of `H`, a Frobenius lift
//! `g (1+T)^{p^{n_v}}`, and a working layer that turns everything into
//! finite linear algebra over a group ring `H x C_{p^L}`.

use crate::complex::{
    bar_resolution, fitt_shift1_from_complex, mapping_cone, morphism_tensor_f, pruned_complex_d,
    special_morphism_s, tensor_morphisms, ComplexMorphism, FreeComplex, BAR_RANK_BUDGET,
};
use crate::error::{Error, Result};
use crate::group::{coset_min, GroupElement, PGroup, Subgroup};
use crate::howell::{howell_form, kernel, HowellBuilder, ResidueMatrix};
use crate::ideal::{
    fitt_shift1_from_resolution, minors, prune_rows_group_ring, DenomFactor, FractionalIdeal,
    IdealHandle,
};
use crate::matrix::RingMatrix;
use crate::ring::{norm_element, one_plus_t_pow, RingContext, RingElement};
use std::collections::HashMap;
use std::sync::Arc;

/// Frobenius lift `g * (1+T)^{p^{n_v}}` with `g` in the group `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusLift {
    pub group_part: GroupElement,
    pub n_v: u32,
}

/// One place: a cyclic inertia subgroup of `H` and a Frobenius lift.
#[derive(Clone, Debug)]
pub struct PlaceDatum {
    pub label: String,
    pub inertia_generators: Vec<GroupElement>,
    pub frobenius: FrobeniusLift,
}

/// Scenario data over the base group `H` (context without a layer factor).
#[derive(Clone)]
pub struct ScenarioConfig {
    pub ctx_h: Arc<RingContext>,
    pub places: Vec<PlaceDatum>,
}

impl ScenarioConfig {
    pub fn new(ctx_h: Arc<RingContext>, places: Vec<PlaceDatum>) -> Result<Self> {
        if places.is_empty() {
            return Err(Error::InvalidScenario("the place set must be nonempty".into()));
        }
        if ctx_h.gamma_factor().is_some() {
            return Err(Error::InvalidScenario(
                "the base context must not carry a layer factor".into(),
            ));
        }
        let h = ctx_h.group().clone();
        for pd in &places {
            let sub = Subgroup::new(h.clone(), pd.inertia_generators.clone())?;
            if !sub.is_cyclic() {
                return Err(Error::NonCyclicInertia(pd.label.clone()));
            }
            if !h.contains(&pd.frobenius.group_part) {
                return Err(Error::InvalidScenario(format!(
                    "Frobenius group part of {} lies outside H",
                    pd.label
                )));
            }
        }
        Ok(ScenarioConfig { ctx_h, places })
    }

    /// Smallest layer at which every place is non-split: `L >= n_v` and
    /// `g_v^{p^{L - n_v}}` lies in the inertia subgroup.
    pub fn min_valid_layer(&self) -> u32 {
        let h = self.ctx_h.group().clone();
        let mut layer = self.places.iter().map(|p| p.frobenius.n_v).max().unwrap_or(0);
        'outer: loop {
            for pd in &self.places {
                let sub = Subgroup::new(h.clone(), pd.inertia_generators.clone())
                    .expect("validated at construction");
                let e = h.pow(
                    &pd.frobenius.group_part,
                    h.p().pow(layer - pd.frobenius.n_v),
                );
                if !sub.contains(&e) {
                    layer += 1;
                    continue 'outer;
                }
            }
            return layer;
        }
    }
}

/// Place data embedded into the working layer group.
#[derive(Clone)]
pub struct LayerPlace {
    pub label: String,
    pub inertia: Subgroup,
    /// Chosen generator of the inertia subgroup.
    pub delta: GroupElement,
    pub frob_group_part: GroupElement,
    pub n_v: u32,
    /// Image of the Frobenius lift in the layer group.
    pub frob_layer: GroupElement,
    /// Decomposition subgroup `<T_v, frob_layer>` of the layer group.
    pub decomposition: Subgroup,
}

/// A scenario pinned to a working layer `L`: all modules live over the
/// group ring of `H x C_{p^L}` (plain `H` for `L = 0`), with the layer
/// factor flagged as the Iwasawa direction for canonical lifts.
#[derive(Clone)]
pub struct Scenario {
    pub ctx: Arc<RingContext>,
    pub layer: u32,
    pub places: Vec<LayerPlace>,
    /// Image of `H` inside the layer group.
    pub h_image: Subgroup,
    /// Ranks of the base group, for embedding bookkeeping.
    h_rank: usize,
}

impl Scenario {
    pub fn from_config(cfg: &ScenarioConfig, layer: Option<u32>) -> Result<Scenario> {
        let min_layer = cfg.min_valid_layer();
        let layer = layer.unwrap_or(min_layer);
        if layer < min_layer {
            return Err(Error::InvalidScenario(format!(
                "layer {layer} splits a place; the minimal valid layer is {min_layer}"
            )));
        }
        let h = cfg.ctx_h.group().clone();
        let h_rank = h.rank();
        let (group, gamma_factor) = if layer == 0 {
            (h.clone(), None)
        } else {
            let mut orders = h.factor_orders().to_vec();
            orders.push(h.p().pow(layer));
            (PGroup::new(h.p(), orders)?, Some(h_rank))
        };
        let ctx = RingContext::with_gamma(
            group.clone(),
            cfg.ctx_h.coeff_precision(),
            cfg.ctx_h.t_precision(),
            gamma_factor,
        )?;
        let embed = |e: &GroupElement| -> GroupElement {
            let mut exps = e.exponents().to_vec();
            if layer > 0 {
                exps.push(0);
            }
            group.element(exps).expect("embedding stays in range")
        };
        let mut places = Vec::new();
        for pd in &cfg.places {
            let gens: Vec<GroupElement> = pd.inertia_generators.iter().map(&embed).collect();
            let inertia = Subgroup::new(group.clone(), gens)?;
            let delta = inertia
                .cyclic_generator()
                .ok_or_else(|| Error::NonCyclicInertia(pd.label.clone()))?;
            let frob_group_part = embed(&pd.frobenius.group_part);
            let frob_layer = if layer == 0 {
                frob_group_part.clone()
            } else {
                let mut exps = pd.frobenius.group_part.exponents().to_vec();
                exps.push(h.p().pow(pd.frobenius.n_v) % h.p().pow(layer));
                group.element(exps)?
            };
            let mut dec_gens = inertia.generators().to_vec();
            dec_gens.push(frob_layer.clone());
            let decomposition = Subgroup::new(group.clone(), dec_gens)?;
            places.push(LayerPlace {
                label: pd.label.clone(),
                inertia,
                delta,
                frob_group_part,
                n_v: pd.frobenius.n_v,
                frob_layer,
                decomposition,
            });
        }
        let h_gens: Vec<GroupElement> = (0..h_rank).map(|k| group.factor_generator(k)).collect();
        let h_image = Subgroup::new(group.clone(), h_gens)?;
        Ok(Scenario {
            ctx,
            layer,
            places,
            h_image,
            h_rank,
        })
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    /// The Iwasawa-algebra lift `g (1+T)^{p^{n_v}}` of the place's
    /// Frobenius.
    pub fn sigma_tilde(&self, v: usize) -> RingElement {
        let p = &self.places[v];
        RingElement::from_group_element(&self.ctx, &p.frob_group_part)
            .mul(&one_plus_t_pow(&self.ctx, self.ctx.p().pow(p.n_v) as u32))
    }

    pub fn sigma_tilde_minus_one(&self, v: usize) -> RingElement {
        self.sigma_tilde(v).sub(&RingElement::one(&self.ctx))
    }

    pub fn denom_factor(&self, v: usize) -> DenomFactor {
        let p = &self.places[v];
        DenomFactor::frob(p.frob_group_part.clone(), p.n_v)
    }

    /// Norm element of the place's inertia subgroup.
    pub fn nu(&self, v: usize) -> RingElement {
        norm_element(&self.ctx, &self.places[v].inertia)
    }
}

// ---------------------------------------------------------------------------
// coset modules and the direct resolution
// ---------------------------------------------------------------------------

/// Direct sum of the coset modules `Z_v = Z_p[G/G_v]` over the layer group,
/// with coordinates indexed by least coset representatives.
pub struct CosetModules {
    pub transversals: Vec<Vec<GroupElement>>,
    rep_index: Vec<HashMap<GroupElement, usize>>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

impl CosetModules {
    pub fn build(s: &Scenario) -> Result<CosetModules> {
        let g = s.ctx.group().clone();
        let mut transversals = Vec::new();
        let mut rep_index = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0usize;
        for p in &s.places {
            let t = crate::group::coset_transversal(&g, &p.decomposition)?;
            let mut idx = HashMap::new();
            for (i, r) in t.iter().enumerate() {
                idx.insert(r.clone(), i);
            }
            offsets.push(dim);
            dim += t.len();
            transversals.push(t);
            rep_index.push(idx);
        }
        Ok(CosetModules {
            transversals,
            rep_index,
            offsets,
            dim,
        })
    }

    /// `g . vec` where `g` acts on each summand by permuting cosets.
    pub fn act(&self, s: &Scenario, g: &GroupElement, vec: &[u64]) -> Vec<u64> {
        let group = s.ctx.group();
        let mut out = vec![0u64; self.dim];
        for (k, t) in self.transversals.iter().enumerate() {
            let off = self.offsets[k];
            let sub = &s.places[k].decomposition;
            for (i, rep) in t.iter().enumerate() {
                let x = vec[off + i];
                if x == 0 {
                    continue;
                }
                let target = coset_min(group, sub, &group.mul(g, rep));
                let j = self.rep_index[k][&target];
                out[off + j] = (out[off + j] + x) % s.ctx.modulus();
            }
        }
        out
    }

    /// Apply a T-degree-zero ring element coordinate-wise.
    pub fn apply_ring(&self, s: &Scenario, e: &RingElement, vec: &[u64]) -> Vec<u64> {
        let m = s.ctx.modulus();
        let mut out = vec![0u64; self.dim];
        for (j, gidx, c) in e.terms() {
            assert_eq!(j, 0, "module action is defined on the group-ring slice");
            let g = s.ctx.group().element_at(gidx as usize);
            let moved = self.act(s, &g, vec);
            for (o, v) in out.iter_mut().zip(&moved) {
                *o = (*o + (c as u128 * *v as u128 % m as u128) as u64) % m;
            }
        }
        out
    }
}

/// Presentation data of `Z^0`: minimal generators (as coefficient vectors
/// in the direct-sum coordinates) and the relation matrix over the layer
/// group ring, plus the coefficient-rank check.
pub struct Z0Presentation {
    pub modules: CosetModules,
    pub generators: Vec<Vec<u64>>,
    pub relations: RingMatrix,
    /// Coefficient rank of `Z^0` (number of free `Z/p^N` summands).
    pub rank: usize,
    /// True when the rank equals (sum of coset counts) - 1.
    pub rank_ok: bool,
}

/// Rank-one presentation of a single `Z_v`: relation rows
/// `sigma~_v - 1` and `delta_v - 1` over the Iwasawa variable.
pub fn build_zv(s: &Scenario, v: usize) -> Result<RingMatrix> {
    let delta_m1 = RingElement::from_group_element(&s.ctx, &s.places[v].delta)
        .sub(&RingElement::one(&s.ctx));
    RingMatrix::from_rows(
        &s.ctx,
        vec![vec![s.sigma_tilde_minus_one(v)], vec![delta_m1]],
    )
}

fn nakayama_minimal_vectors(
    s: &Scenario,
    mods: &CosetModules,
    vectors: &[Vec<u64>],
) -> Vec<Vec<u64>> {
    let ctx = &s.ctx;
    let group = ctx.group().clone();
    let mut multipliers: Vec<RingElement> = vec![RingElement::constant(ctx, ctx.p())];
    for k in 0..group.rank() {
        multipliers.push(
            RingElement::from_group_element(ctx, &group.factor_generator(k))
                .sub(&RingElement::one(ctx)),
        );
    }
    let mut builder = HowellBuilder::new(ctx.p(), ctx.coeff_precision(), mods.dim);
    let insert_orbit = |builder: &mut HowellBuilder, v: &[u64]| {
        if v.iter().all(|&x| x == 0) || builder.contains(v) {
            return;
        }
        for g in group.elements() {
            builder.insert(&mods.act(s, &g, v));
        }
    };
    for v in vectors {
        for mu in &multipliers {
            let w = mods.apply_ring(s, mu, v);
            insert_orbit(&mut builder, &w);
        }
    }
    let mut kept = Vec::new();
    for v in vectors {
        if builder.contains(v) {
            continue;
        }
        insert_orbit(&mut builder, v);
        kept.push(v.clone());
    }
    kept
}

/// Relations of a generating family inside the coset modules: the left
/// kernel of the map `R^t -> Z`, returned as a ring matrix.
fn module_relations(s: &Scenario, mods: &CosetModules, gens: &[Vec<u64>]) -> Result<RingMatrix> {
    let ctx = &s.ctx;
    let group = ctx.group().clone();
    let n = group.order() as usize;
    let mut rows = Vec::with_capacity(gens.len() * n);
    for z in gens {
        for gi in 0..n {
            rows.push(mods.act(s, &group.element_at(gi), z));
        }
    }
    let flat = ResidueMatrix::new(ctx.p(), ctx.coeff_precision(), mods.dim, rows);
    let ker = kernel(&flat);
    let ring_rows: Vec<Vec<RingElement>> = ker
        .rows
        .iter()
        .map(|row| {
            (0..gens.len())
                .map(|i| {
                    let mut e = RingElement::zero(ctx);
                    for gi in 0..n {
                        let c = row[i * n + gi];
                        if c != 0 {
                            e = e.add(&RingElement::monomial(
                                ctx,
                                c,
                                &group.element_at(gi),
                                0,
                            ));
                        }
                    }
                    e
                })
                .collect()
        })
        .filter(|r: &Vec<RingElement>| r.iter().any(|e| !e.is_zero()))
        .collect();
    let mat = RingMatrix::from_rows(ctx, ring_rows)?;
    prune_rows_group_ring(&mat)
}

/// Generators and relations of the augmentation kernel `Z^0` inside the
/// direct sum of coset modules.
pub fn build_z0(s: &Scenario) -> Result<Z0Presentation> {
    let mods = CosetModules::build(s)?;
    let ctx = &s.ctx;
    // kernel of the augmentation: all vectors with coordinate sum zero
    let ones = ResidueMatrix::new(
        ctx.p(),
        ctx.coeff_precision(),
        1,
        vec![vec![1u64]; mods.dim],
    );
    let ker = kernel(&ones);
    let form = howell_form(&ker);
    let rank_ok = form.pivots.iter().all(|&(_, v)| v == 0) && form.row_count() == mods.dim - 1;
    let rank = form.row_count();
    let generators = nakayama_minimal_vectors(s, &mods, &form.rows);
    let relations = module_relations(s, &mods, &generators)?;
    Ok(Z0Presentation {
        modules: mods,
        generators,
        relations,
        rank,
        rank_ok,
    })
}

/// The construction route used for a shifted-Fitting computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FittMethod {
    Direct,
    Tensor,
    Bar,
    Cone,
}

impl FittMethod {
    pub fn name(&self) -> &'static str {
        match self {
            FittMethod::Direct => "direct",
            FittMethod::Tensor => "tensor",
            FittMethod::Bar => "bar",
            FittMethod::Cone => "cone",
        }
    }
}

/// `Fitt^[1](Z^0)` via a two-step minimal free presentation of the
/// augmentation kernel over the layer group ring.
pub fn fitt1_direct(s: &Scenario) -> Result<FractionalIdeal> {
    let z0 = build_z0(s)?;
    let t1 = z0.generators.len();
    if t1 == 0 {
        // Z^0 = 0
        return Ok(FractionalIdeal::unit(&s.ctx));
    }
    let b = &z0.relations;
    let a_raw = b.kernel_matrix(1);
    let a = prune_rows_group_ring(&a_raw)?;
    fitt_shift1_from_resolution(&a, t1, s.layer)
}

/// Cyclic generators of the per-place subgroups in the product setting,
/// after checking the tensor hypotheses: layer 0, Frobenius inside inertia,
/// cyclic inertia subgroups forming an internal direct product of `H`.
pub fn product_generators(s: &Scenario) -> Result<Vec<GroupElement>> {
    if s.layer != 0 {
        return Err(Error::MethodInapplicable(
            "the product setting needs every place non-split at layer zero".into(),
        ));
    }
    let g = s.ctx.group().clone();
    let mut all_gens = Vec::new();
    let mut order_product: u64 = 1;
    let mut sigmas = Vec::new();
    for (v, p) in s.places.iter().enumerate() {
        if p.n_v != 0 || !p.inertia.contains(&p.frob_group_part) {
            return Err(Error::MethodInapplicable(format!(
                "place {} is not inert-at-layer-zero with Frobenius in inertia",
                p.label
            )));
        }
        let sigma = p
            .inertia
            .cyclic_generator()
            .ok_or_else(|| Error::NonCyclicInertia(p.label.clone()))?;
        order_product = order_product.saturating_mul(p.inertia.order());
        all_gens.extend(p.inertia.generators().iter().cloned());
        sigmas.push(sigma);
        let _ = v;
    }
    let span = Subgroup::new(g.clone(), all_gens)?;
    if order_product != g.order() || span.order() != g.order() {
        return Err(Error::MethodInapplicable(
            "the decomposition subgroups do not form a direct product of H".into(),
        ));
    }
    Ok(sigmas)
}

/// `Fitt^[1](Z^0)` from the pruned tensor complex.
pub fn fitt1_tensor(s: &Scenario) -> Result<FractionalIdeal> {
    let sigmas = product_generators(s)?;
    let f = morphism_tensor_f(&s.ctx, &sigmas, 4)?;
    let d = pruned_complex_d(&f)?;
    fitt_shift1_from_complex(&d, 0)
}

/// `Fitt^[1](Z^0)` from the cone over the bar resolutions.
pub fn fitt1_bar(s: &Scenario, budget: usize) -> Result<FractionalIdeal> {
    let sigmas = product_generators(s)?;
    let _ = sigmas;
    let g = s.ctx.group().clone();
    let full = g.full_subgroup();
    let c = bar_resolution(&s.ctx, &full, 3, budget)?;
    let cis: Vec<FreeComplex> = s
        .places
        .iter()
        .map(|p| bar_resolution(&s.ctx, &p.inertia, 3, budget))
        .collect::<Result<_>>()?;
    let ci_refs: Vec<&FreeComplex> = cis.iter().collect();
    let source = crate::complex::direct_sum(&ci_refs)?;
    // f maps a tuple over the subgroup to the same tuple over the group
    let mut maps = Vec::new();
    for d in 0..=3usize {
        let mut fm = RingMatrix::zero(&s.ctx, source.rank(d), c.rank(d));
        let mut row = 0usize;
        let target_index: HashMap<&str, usize> = c
            .labels(d)
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        for ci in &cis {
            for lab in ci.labels(d) {
                let col = *target_index.get(lab.as_str()).ok_or_else(|| {
                    Error::MorphismCheck(format!("bar tuple {lab} missing in the full resolution"))
                })?;
                *fm.at_mut(row, col) = RingElement::one(&s.ctx);
                row += 1;
            }
        }
        maps.push(fm);
    }
    let f = ComplexMorphism::new(source, c, maps)?;
    let cone = mapping_cone(&f)?;
    fitt_shift1_from_complex(&cone, 0)
}

/// `Fitt^[1](Z^0)` from a mapping cone: the single-place product-of-cyclic
/// setting when `r = 1`, the cyclic ramification-and-splitting shape
/// otherwise.
pub fn fitt1_cone(s: &Scenario) -> Result<FractionalIdeal> {
    if s.place_count() == 1 {
        return fitt1_cone_single_place(s);
    }
    thm47_fitt(s)
}

fn fitt1_cone_single_place(s: &Scenario) -> Result<FractionalIdeal> {
    if s.layer != 0 {
        return Err(Error::MethodInapplicable(
            "the cone setting needs the place non-split at layer zero".into(),
        ));
    }
    let p = &s.places[0];
    if p.n_v != 0 || !p.inertia.contains(&p.frob_group_part) {
        return Err(Error::MethodInapplicable(
            "the cone setting needs an inert place with Frobenius in inertia".into(),
        ));
    }
    let g = s.ctx.group().clone();
    // split the subgroup along the cyclic factors of H
    let mut factor_morphisms = Vec::new();
    let mut order_product = 1u64;
    for k in 0..g.rank() {
        let sigma = g.factor_generator(k);
        // elements of the subgroup supported on factor k only
        let sub_part: Vec<&GroupElement> = p
            .inertia
            .elements()
            .iter()
            .filter(|e| {
                e.exponents()
                    .iter()
                    .enumerate()
                    .all(|(j, &x)| j == k || x == 0)
            })
            .collect();
        let part_order = sub_part.len() as u64;
        order_product *= part_order;
        let m_k = g.factor_orders()[k] / part_order;
        factor_morphisms.push(special_morphism_s(&s.ctx, &sigma, m_k, 4)?);
    }
    if order_product != p.inertia.order() {
        return Err(Error::MethodInapplicable(
            "the subgroup does not decompose along the cyclic factors of H".into(),
        ));
    }
    let f = tensor_morphisms(&factor_morphisms, 4)?;
    let cone = mapping_cone(&f)?;
    fitt_shift1_from_complex(&cone, 0)
}

/// Dispatch on the construction method.
pub fn fitt1_z0(s: &Scenario, method: FittMethod) -> Result<FractionalIdeal> {
    match method {
        FittMethod::Direct => fitt1_direct(s),
        FittMethod::Tensor => fitt1_tensor(s),
        FittMethod::Bar => fitt1_bar(s, BAR_RANK_BUDGET),
        FittMethod::Cone => fitt1_cone(s),
    }
}

// ---------------------------------------------------------------------------
// splitting off a dominant place
// ---------------------------------------------------------------------------

/// Outcome of the splitting construction: the section is checked to be a
/// genuine section landing inside the augmentation kernel, and the shifted
/// Fitting ideal factors as the product over the summands.
pub struct SplitData {
    pub section_is_section: bool,
    pub section_lands_in_z0: bool,
    pub fitt_product: FractionalIdeal,
}

pub fn split_z0(s: &Scenario, v_star: usize) -> Result<SplitData> {
    for (v, p) in s.places.iter().enumerate() {
        if v != v_star && !p.decomposition.is_subgroup_of(&s.places[v_star].decomposition) {
            return Err(Error::Hypothesis(format!(
                "decomposition subgroup of {} is not contained in that of {}",
                p.label, s.places[v_star].label
            )));
        }
    }
    let mods = CosetModules::build(s)?;
    let g = s.ctx.group().clone();
    let m = s.ctx.modulus();
    let star_sub = &s.places[v_star].decomposition;
    let star_off = mods.offsets[v_star];
    // the section: identity on each summand away from v*, and
    // minus the coset projection into the v* block
    let mut section_is_section = true;
    let mut section_lands_in_z0 = true;
    for (v, t) in mods.transversals.iter().enumerate() {
        if v == v_star {
            continue;
        }
        for (i, rep) in t.iter().enumerate() {
            let mut vec = vec![0u64; mods.dim];
            vec[mods.offsets[v] + i] = 1;
            // s(basis) = basis - projection into the v* block
            let target = coset_min(&g, star_sub, rep);
            let j = mods.rep_index[v_star][&target];
            vec[star_off + j] = (vec[star_off + j] + m - 1) % m;
            // projection back equals the original basis vector
            let mut proj_ok = true;
            for (vv, tt) in mods.transversals.iter().enumerate() {
                if vv == v_star {
                    continue;
                }
                for (ii, _) in tt.iter().enumerate() {
                    let expect = u64::from(vv == v && ii == i);
                    if vec[mods.offsets[vv] + ii] != expect {
                        proj_ok = false;
                    }
                }
            }
            section_is_section &= proj_ok;
            let aug: u64 = vec.iter().fold(0, |a, &x| (a + x) % m);
            section_lands_in_z0 &= aug == 0;
        }
    }
    // Fitt^[1] factors over the direct sum
    let star_scenario = Scenario {
        ctx: s.ctx.clone(),
        layer: s.layer,
        places: vec![s.places[v_star].clone()],
        h_image: s.h_image.clone(),
        h_rank: s.h_rank,
    };
    let mut fitt = fitt1_direct(&star_scenario)?;
    for (v, p) in s.places.iter().enumerate() {
        if v == v_star {
            continue;
        }
        let zv = crate::ideal::zv_fitt1(&s.ctx, &p.inertia, &p.frob_group_part, p.n_v)?;
        fitt = fitt.mul(&zv);
    }
    Ok(SplitData {
        section_is_section,
        section_lands_in_z0,
        fitt_product: fitt,
    })
}

// ---------------------------------------------------------------------------
// the cyclic-extension identities
// ---------------------------------------------------------------------------

/// The dominant-place right-hand side:
/// `(1, nu_H (gamma-1)/(sigma_{v*}-1)) prod_{v != v*} (1, nu_v/(sigma_v-1))`.
pub fn thm46_rhs(s: &Scenario, v_star: usize) -> Result<FractionalIdeal> {
    let star = &s.places[v_star];
    if star.inertia.order() != s.h_image.order() {
        return Err(Error::Hypothesis(format!(
            "{} is not totally ramified",
            star.label
        )));
    }
    for (v, p) in s.places.iter().enumerate() {
        if v != v_star && !p.decomposition.is_subgroup_of(&star.decomposition) {
            return Err(Error::Hypothesis(format!(
                "decomposition subgroup of {} not contained in that of {}",
                p.label, star.label
            )));
        }
    }
    let t = RingElement::t(&s.ctx);
    // since v* is totally ramified, nu_H = nu_{v*}
    let mut num = IdealHandle::new(
        &s.ctx,
        vec![s.sigma_tilde_minus_one(v_star), s.nu(v_star).mul(&t)],
    );
    let mut factors = vec![s.denom_factor(v_star)];
    for (v, _) in s.places.iter().enumerate() {
        if v == v_star {
            continue;
        }
        let term = IdealHandle::new(&s.ctx, vec![s.sigma_tilde_minus_one(v), s.nu(v)]);
        num = num.product(&term);
        factors.push(s.denom_factor(v));
    }
    Ok(FractionalIdeal::new(num, factors))
}

/// The symmetric sum form over all choices of the distinguished place:
/// `sum_{v'} (1, nu_H (gamma-1)/(sigma_{v'}-1)) prod_{v != v'}
/// (1, nu_H/(sigma_v-1))`, assembled over the common denominator.
pub fn thm45_rhs(s: &Scenario) -> Result<FractionalIdeal> {
    for p in &s.places {
        if p.inertia.order() != s.h_image.order() {
            return Err(Error::Hypothesis(format!(
                "{} is not totally ramified",
                p.label
            )));
        }
    }
    let t = RingElement::t(&s.ctx);
    let mut num_sum = IdealHandle::zero(&s.ctx);
    for v_prime in 0..s.place_count() {
        let mut term = IdealHandle::new(
            &s.ctx,
            vec![
                s.sigma_tilde_minus_one(v_prime),
                s.nu(v_prime).mul(&t),
            ],
        );
        for v in 0..s.place_count() {
            if v == v_prime {
                continue;
            }
            term = term.product(&IdealHandle::new(
                &s.ctx,
                vec![s.sigma_tilde_minus_one(v), s.nu(v)],
            ));
        }
        num_sum = num_sum.sum(&term);
    }
    let factors: Vec<DenomFactor> = (0..s.place_count()).map(|v| s.denom_factor(v)).collect();
    Ok(FractionalIdeal::new(num_sum, factors))
}

fn require_ramification_and_splitting(s: &Scenario) -> Result<GroupElement> {
    if s.h_rank > 1 {
        return Err(Error::Hypothesis(
            "the splitting-shape identity needs a cyclic H".into(),
        ));
    }
    for p in &s.places {
        if !p.frob_group_part.is_identity() {
            return Err(Error::Hypothesis(format!(
                "place {} has a nontrivial inertial degree",
                p.label
            )));
        }
    }
    let delta = if s.h_rank == 0 {
        s.ctx.group().identity()
    } else {
        s.ctx.group().factor_generator(0)
    };
    Ok(delta)
}

/// The `(2r+2) x (r+1)` presentation matrix of the
/// ramification-and-splitting shape, all blank entries zero.
pub fn thm47_b_matrix(s: &Scenario) -> Result<RingMatrix> {
    let delta = require_ramification_and_splitting(s)?;
    let r = s.place_count();
    let ctx = &s.ctx;
    let mut b = RingMatrix::zero(ctx, 2 * r + 2, r + 1);
    for i in 0..r {
        *b.at_mut(i, i) = s.nu(i).neg();
        *b.at_mut(i, r) = RingElement::one(ctx);
    }
    *b.at_mut(r, r) =
        RingElement::from_group_element(ctx, &delta).sub(&RingElement::one(ctx));
    for i in 0..r {
        *b.at_mut(r + 1 + i, i) = s.sigma_tilde_minus_one(i);
    }
    *b.at_mut(2 * r + 1, r) = RingElement::t(ctx);
    Ok(b)
}

/// The explicit generator list: `T prod nu_i`, `(delta-1) prod nu_i`, and
/// `prod_{i in J} nu_i prod_{i not in J} (sigma~_i - 1)` over all proper
/// subsets `J`.
pub fn thm47_generators(s: &Scenario) -> Result<Vec<RingElement>> {
    let delta = require_ramification_and_splitting(s)?;
    let ctx = &s.ctx;
    let r = s.place_count();
    let all_nu = (0..r).fold(RingElement::one(ctx), |acc, i| acc.mul(&s.nu(i)));
    let mut gens = vec![
        RingElement::t(ctx).mul(&all_nu),
        RingElement::from_group_element(ctx, &delta)
            .sub(&RingElement::one(ctx))
            .mul(&all_nu),
    ];
    for mask in 0..(1u32 << r) - 1 {
        let mut g = RingElement::one(ctx);
        for i in 0..r {
            if mask & (1 << i) != 0 {
                g = g.mul(&s.nu(i));
            } else {
                g = g.mul(&s.sigma_tilde_minus_one(i));
            }
        }
        gens.push(g);
    }
    Ok(gens)
}

/// `Fitt^[1](Z^0)` of the ramification-and-splitting shape:
/// `prod (sigma~_i - 1)^{-1}` times the maximal-minor ideal of the
/// presentation matrix.
pub fn thm47_fitt(s: &Scenario) -> Result<FractionalIdeal> {
    let b = thm47_b_matrix(s)?;
    let num = minors(&b, s.place_count() + 1)?;
    let factors: Vec<DenomFactor> = (0..s.place_count()).map(|v| s.denom_factor(v)).collect();
    Ok(FractionalIdeal::new(num, factors))
}

// ---------------------------------------------------------------------------
// independence of the auxiliary place set
// ---------------------------------------------------------------------------

pub struct IndependenceReport {
    pub pass: bool,
    pub lhs: FractionalIdeal,
    pub rhs: FractionalIdeal,
}

/// Adding unramified places multiplies the shifted Fitting ideal by
/// `prod (1 - sigma~_v)^{-1}`; both sides are computed at a common layer
/// and compared exactly at the truncation.
pub fn independence_check(
    cfg: &ScenarioConfig,
    extra_places: &[PlaceDatum],
) -> Result<IndependenceReport> {
    for pd in extra_places {
        if !pd.inertia_generators.is_empty() {
            return Err(Error::Hypothesis(format!(
                "extra place {} must be unramified",
                pd.label
            )));
        }
    }
    let mut enlarged_places = cfg.places.clone();
    enlarged_places.extend(extra_places.iter().cloned());
    let enlarged = ScenarioConfig::new(cfg.ctx_h.clone(), enlarged_places)?;
    let layer = cfg.min_valid_layer().max(enlarged.min_valid_layer());
    let s_base = Scenario::from_config(cfg, Some(layer))?;
    let s_big = Scenario::from_config(&enlarged, Some(layer))?;
    let lhs = fitt1_direct(&s_big)?;
    let mut rhs = fitt1_direct(&s_base)?;
    for (k, pd) in extra_places.iter().enumerate() {
        let v = cfg.places.len() + k;
        debug_assert_eq!(s_big.places[v].label, pd.label);
        rhs = rhs.div_factor(s_big.denom_factor(v));
    }
    let pass = crate::ideal::frac_ideal_equal(&lhs, &rhs)?;
    Ok(IndependenceReport { pass, lhs, rhs })
}

// ---------------------------------------------------------------------------
// convenience constructors for common configurations
// ---------------------------------------------------------------------------

/// The product configuration: `H` with the given factor orders, one totally
/// ramified-at-its-factor place per factor (inertia the factor subgroup,
/// Frobenius `gamma`).
pub fn product_config(
    p: u64,
    orders: &[u64],
    coeff_precision: u32,
    t_precision: u32,
) -> Result<ScenarioConfig> {
    let h = PGroup::new(p, orders.to_vec())?;
    let ctx = RingContext::new(h.clone(), coeff_precision, t_precision)?;
    let places = (0..orders.len())
        .map(|k| PlaceDatum {
            label: format!("v{}", k + 1),
            inertia_generators: vec![h.factor_generator(k)],
            frobenius: FrobeniusLift {
                group_part: h.identity(),
                n_v: 0,
            },
        })
        .collect();
    ScenarioConfig::new(ctx, places)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology_profile;
    use crate::ideal::{fitt0, frac_ideal_equal, ideal_equal, zv_fitt1};

    fn base_r2() -> ScenarioConfig {
        product_config(3, &[3, 3], 2, 6).unwrap()
    }

    #[test]
    fn zv_presentations() {
        // totally ramified place with n_v = 0: relations (T, delta - 1)
        let cfg = base_r2();
        let s = Scenario::from_config(&cfg, None).unwrap();
        assert_eq!(s.layer, 0);
        let zv = build_zv(&s, 0).unwrap();
        assert_eq!(zv.at(0, 0).clone(), RingElement::t(&s.ctx));
        let delta_m1 = RingElement::from_group_element(&s.ctx, &s.places[0].delta)
            .sub(&RingElement::one(&s.ctx));
        let f0 = fitt0(&zv).unwrap();
        let expected = IdealHandle::new(&s.ctx, vec![RingElement::t(&s.ctx), delta_m1]);
        assert!(ideal_equal(&f0, &expected).unwrap());
    }

    #[test]
    fn zv_unramified_presentation() {
        // trivial inertia: Z_v is presented by (sigma~ - 1) alone
        let h = PGroup::new(3, vec![3]).unwrap();
        let ctx = RingContext::new(h.clone(), 2, 6).unwrap();
        let cfg = ScenarioConfig::new(
            ctx,
            vec![PlaceDatum {
                label: "w".into(),
                inertia_generators: vec![],
                frobenius: FrobeniusLift {
                    group_part: h.factor_generator(0),
                    n_v: 0,
                },
            }],
        )
        .unwrap();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let zv = build_zv(&s, 0).unwrap();
        // the delta row vanishes, leaving (sigma~ - 1)
        assert!(zv.at(1, 0).is_zero());
        let f0 = fitt0(&zv).unwrap();
        let expected = IdealHandle::new(&s.ctx, vec![s.sigma_tilde_minus_one(0)]);
        assert!(ideal_equal(&f0, &expected).unwrap());
    }

    #[test]
    fn cone_and_direct_agree_single_place() {
        // C9 with C3 inertia: the single-place cone route against the
        // module-theoretic direct route
        let h = PGroup::new(3, vec![9]).unwrap();
        let ctx = RingContext::new(h.clone(), 3, 8).unwrap();
        let cfg = ScenarioConfig::new(
            ctx,
            vec![PlaceDatum {
                label: "v".into(),
                inertia_generators: vec![h.element(vec![3]).unwrap()],
                frobenius: FrobeniusLift {
                    group_part: h.identity(),
                    n_v: 0,
                },
            }],
        )
        .unwrap();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let cone = fitt1_z0(&s, FittMethod::Cone).unwrap();
        let direct = fitt1_z0(&s, FittMethod::Direct).unwrap();
        assert!(frac_ideal_equal(&cone, &direct).unwrap());
    }

    #[test]
    fn distinct_scenarios_have_distinct_fitt() {
        // an r=2 and an r=3 configuration over the same group produce
        // different fractional ideals
        let h = PGroup::new(3, vec![3, 3, 3]).unwrap();
        let ctx = RingContext::new(h.clone(), 2, 6).unwrap();
        let place = |k: usize| PlaceDatum {
            label: format!("v{k}"),
            inertia_generators: vec![h.factor_generator(k)],
            frobenius: FrobeniusLift {
                group_part: h.identity(),
                n_v: 0,
            },
        };
        let cfg2 = ScenarioConfig::new(ctx.clone(), vec![place(0), place(1)]).unwrap();
        let cfg3 = ScenarioConfig::new(ctx, vec![place(0), place(1), place(2)]).unwrap();
        let f2 = fitt1_direct(&Scenario::from_config(&cfg2, None).unwrap()).unwrap();
        let f3 = fitt1_direct(&Scenario::from_config(&cfg3, None).unwrap()).unwrap();
        assert!(!frac_ideal_equal(&f2, &f3).unwrap());
    }

    #[test]
    fn z0_single_full_place_vanishes() {
        // one place with decomposition group all of G
        let h = PGroup::new(3, vec![3]).unwrap();
        let ctx = RingContext::new(h.clone(), 2, 6).unwrap();
        let cfg = ScenarioConfig::new(
            ctx,
            vec![PlaceDatum {
                label: "v".into(),
                inertia_generators: vec![h.factor_generator(0)],
                frobenius: FrobeniusLift {
                    group_part: h.identity(),
                    n_v: 0,
                },
            }],
        )
        .unwrap();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let z0 = build_z0(&s).unwrap();
        assert_eq!(z0.generators.len(), 0);
        let fitt = fitt1_direct(&s).unwrap();
        assert!(frac_ideal_equal(&fitt, &FractionalIdeal::unit(&s.ctx)).unwrap());
    }

    #[test]
    fn z0_rank_pattern() {
        let cfg = base_r2();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let z0 = build_z0(&s).unwrap();
        // coefficient rank = 3 + 3 - 1
        assert_eq!(z0.rank, 5);
        assert!(z0.rank_ok);
        // rank = -1 mod p when all quotients are nontrivial
        assert_eq!((z0.rank as u64) % 3, 3 - 1);
        // minimal generator count for the product shape is one
        assert_eq!(z0.generators.len(), 1);
    }

    #[test]
    fn direct_route_matches_worked_r2_value() {
        let cfg = base_r2();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let fitt = fitt1_direct(&s).unwrap();
        let expected = FractionalIdeal::new(
            IdealHandle::new(
                &s.ctx,
                vec![RingElement::t(&s.ctx), s.nu(0), s.nu(1)],
            ),
            vec![DenomFactor::t()],
        );
        assert!(frac_ideal_equal(&fitt, &expected).unwrap());
    }

    #[test]
    fn tensor_and_direct_agree_r2() {
        let cfg = base_r2();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let a = fitt1_tensor(&s).unwrap();
        let b = fitt1_direct(&s).unwrap();
        assert!(frac_ideal_equal(&a, &b).unwrap());
    }

    #[test]
    fn pruned_complex_homology_matches_z0() {
        // H_1 of the pruned complex presents the same module as the direct
        // Z^0 presentation: same Fitt_0 and the free coefficient profile
        let cfg = base_r2();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let sigmas = vec![
            s.ctx.group().factor_generator(0),
            s.ctx.group().factor_generator(1),
        ];
        let f = morphism_tensor_f(&s.ctx, &sigmas, 4).unwrap();
        let d = pruned_complex_d(&f).unwrap();
        let prof = homology_profile(&d, 1).unwrap();
        assert!(!prof.trivial);
        // Z^0 is coefficient-free of rank 5: five factors of order p^N
        assert_eq!(prof.divisors, vec![9, 9, 9, 9, 9]);
        let z0 = build_z0(&s).unwrap();
        let fitt_direct = fitt0(&z0.relations).unwrap();
        assert!(ideal_equal(&prof.fitt0, &fitt_direct).unwrap());
    }

    #[test]
    fn split_violated_hypothesis_errors_but_direct_works() {
        let cfg = base_r2();
        let s = Scenario::from_config(&cfg, None).unwrap();
        // neither factor contains the other
        assert!(matches!(split_z0(&s, 0), Err(Error::Hypothesis(_))));
        assert!(fitt1_direct(&s).is_ok());
    }

    fn nested_cfg() -> ScenarioConfig {
        // H = C9, v1 totally ramified (T = H), v2 with T = C3 inside
        let h = PGroup::new(3, vec![9]).unwrap();
        let ctx = RingContext::new(h.clone(), 2, 8).unwrap();
        ScenarioConfig::new(
            ctx,
            vec![
                PlaceDatum {
                    label: "vstar".into(),
                    inertia_generators: vec![h.factor_generator(0)],
                    frobenius: FrobeniusLift {
                        group_part: h.identity(),
                        n_v: 0,
                    },
                },
                PlaceDatum {
                    label: "v2".into(),
                    inertia_generators: vec![h.element(vec![3]).unwrap()],
                    frobenius: FrobeniusLift {
                        group_part: h.identity(),
                        n_v: 0,
                    },
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn split_r1_and_nested_product_formula() {
        let cfg = nested_cfg();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let split = split_z0(&s, 0).unwrap();
        assert!(split.section_is_section);
        assert!(split.section_lands_in_z0);
        let direct = fitt1_direct(&s).unwrap();
        assert!(frac_ideal_equal(&split.fitt_product, &direct).unwrap());
        // r = 1: the decomposition is just the single summand
        let single = ScenarioConfig::new(cfg.ctx_h.clone(), vec![cfg.places[0].clone()]).unwrap();
        let s1 = Scenario::from_config(&single, None).unwrap();
        let sp1 = split_z0(&s1, 0).unwrap();
        let d1 = fitt1_direct(&s1).unwrap();
        assert!(frac_ideal_equal(&sp1.fitt_product, &d1).unwrap());
    }

    #[test]
    fn thm46_rhs_matches_direct_for_nested_config() {
        let cfg = nested_cfg();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let rhs = thm46_rhs(&s, 0).unwrap();
        let direct = fitt1_direct(&s).unwrap();
        assert!(
            frac_ideal_equal(&rhs, &direct).unwrap(),
            "rhs {:?} direct {:?}",
            rhs,
            direct
        );
    }

    #[test]
    fn thm46_rhs_r1_layer0_value() {
        // r = 1, n = 0: the value reduces to (1, nu_H)
        let h = PGroup::new(3, vec![3]).unwrap();
        let ctx = RingContext::new(h.clone(), 2, 6).unwrap();
        let cfg = ScenarioConfig::new(
            ctx,
            vec![PlaceDatum {
                label: "v".into(),
                inertia_generators: vec![h.factor_generator(0)],
                frobenius: FrobeniusLift {
                    group_part: h.identity(),
                    n_v: 0,
                },
            }],
        )
        .unwrap();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let rhs = thm46_rhs(&s, 0).unwrap();
        let expected = FractionalIdeal::integral(IdealHandle::new(
            &s.ctx,
            vec![RingElement::one(&s.ctx), s.nu(0)],
        ));
        assert!(frac_ideal_equal(&rhs, &expected).unwrap());
    }

    fn degree_p_cfg(n_vs: &[u32], m: u32) -> ScenarioConfig {
        let h = PGroup::new(3, vec![3]).unwrap();
        let ctx = RingContext::new(h.clone(), 2, m).unwrap();
        let places = n_vs
            .iter()
            .enumerate()
            .map(|(k, &n)| PlaceDatum {
                label: format!("v{}", k + 1),
                inertia_generators: vec![h.factor_generator(0)],
                frobenius: FrobeniusLift {
                    group_part: h.identity(),
                    n_v: n,
                },
            })
            .collect();
        ScenarioConfig::new(ctx, places).unwrap()
    }

    #[test]
    fn thm45_equals_thm46_at_minimal_place() {
        for n_vs in [vec![0, 0], vec![0, 1], vec![1, 1]] {
            let cfg = degree_p_cfg(&n_vs, 10);
            let s = Scenario::from_config(&cfg, Some(cfg.min_valid_layer())).unwrap();
            let sum_form = thm45_rhs(&s).unwrap();
            let min_n = n_vs.iter().min().copied().unwrap();
            for (v, &n) in n_vs.iter().enumerate() {
                if n == min_n {
                    let star_form = thm46_rhs(&s, v).unwrap();
                    assert!(
                        frac_ideal_equal(&sum_form, &star_form).unwrap(),
                        "n_vs {:?} v* {}",
                        n_vs,
                        v
                    );
                }
            }
        }
    }

    #[test]
    fn thm45_symmetric_under_swap() {
        let cfg = degree_p_cfg(&[1, 1], 10);
        let s = Scenario::from_config(&cfg, None).unwrap();
        let a = thm45_rhs(&s).unwrap();
        let swapped = ScenarioConfig::new(
            cfg.ctx_h.clone(),
            vec![cfg.places[1].clone(), cfg.places[0].clone()],
        )
        .unwrap();
        let s2 = Scenario::from_config(&swapped, None).unwrap();
        let b = thm45_rhs(&s2).unwrap();
        assert!(frac_ideal_equal(&a, &b).unwrap());
    }

    #[test]
    fn thm47_minors_match_generator_list() {
        // r = 2, mixed inertia orders in H = C9, mixed n_v
        let h = PGroup::new(3, vec![9]).unwrap();
        let ctx = RingContext::new(h.clone(), 2, 12).unwrap();
        let cfg = ScenarioConfig::new(
            ctx,
            vec![
                PlaceDatum {
                    label: "v1".into(),
                    inertia_generators: vec![h.factor_generator(0)],
                    frobenius: FrobeniusLift {
                        group_part: h.identity(),
                        n_v: 0,
                    },
                },
                PlaceDatum {
                    label: "v2".into(),
                    inertia_generators: vec![h.element(vec![3]).unwrap()],
                    frobenius: FrobeniusLift {
                        group_part: h.identity(),
                        n_v: 1,
                    },
                },
            ],
        )
        .unwrap();
        let s = Scenario::from_config(&cfg, Some(1)).unwrap();
        let b = thm47_b_matrix(&s).unwrap();
        assert_eq!((b.rows(), b.cols()), (6, 3));
        let min = minors(&b, 3).unwrap();
        let gens = IdealHandle::new(&s.ctx, thm47_generators(&s).unwrap());
        assert!(ideal_equal(&min, &gens).unwrap());
    }

    #[test]
    fn thm47_r1_reduces_to_zv_value() {
        let h = PGroup::new(3, vec![9]).unwrap();
        let ctx = RingContext::new(h.clone(), 2, 8).unwrap();
        let cfg = ScenarioConfig::new(
            ctx,
            vec![PlaceDatum {
                label: "v".into(),
                inertia_generators: vec![h.factor_generator(0)],
                frobenius: FrobeniusLift {
                    group_part: h.identity(),
                    n_v: 0,
                },
            }],
        )
        .unwrap();
        let s = Scenario::from_config(&cfg, None).unwrap();
        let fitt = thm47_fitt(&s).unwrap();
        // T_1 = H: with sigma~ = gamma this is the worked single-place
        // value (1, nu_H (gamma-1)/(gamma-1)) ... = (1, nu_H) times the
        // augmentation correction; compare against the direct route
        let direct = fitt1_direct(&s).unwrap();
        assert!(frac_ideal_equal(&fitt, &direct).unwrap());
        // and against the inertia-only formula cross-check via zv_fitt1 on
        // the augmentation-kernel shape: Fitt^[1](Z_v^0) here, not Z_v, so
        // equality with the direct route is the meaningful check; the plain
        // Z_v value is still well-formed
        let zv = zv_fitt1(&s.ctx, &s.places[0].inertia, &s.places[0].frob_group_part, 0).unwrap();
        let _ = zv;
    }

    #[test]
    fn independence_zero_extras_trivial() {
        let cfg = base_r2();
        let rep = independence_check(&cfg, &[]).unwrap();
        assert!(rep.pass);
    }

    fn r2_cfg_at(n: u32, m: u32) -> ScenarioConfig {
        let h = PGroup::new(3, vec![3, 3]).unwrap();
        let ctx = RingContext::new(h.clone(), n, m).unwrap();
        ScenarioConfig::new(
            ctx,
            (0..2)
                .map(|k| PlaceDatum {
                    label: format!("v{}", k + 1),
                    inertia_generators: vec![h.factor_generator(k)],
                    frobenius: FrobeniusLift {
                        group_part: h.identity(),
                        n_v: 0,
                    },
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn independence_one_extra_place_group_trivial() {
        // unramified extra place with Frobenius gamma: stays at layer zero
        let cfg = r2_cfg_at(3, 10);
        let extra = PlaceDatum {
            label: "w1".into(),
            inertia_generators: vec![],
            frobenius: FrobeniusLift {
                group_part: cfg.ctx_h.group().identity(),
                n_v: 0,
            },
        };
        let rep = independence_check(&cfg, &[extra]).unwrap();
        assert!(rep.pass, "lhs {:?} rhs {:?}", rep.lhs, rep.rhs);
    }

    #[test]
    fn independence_one_extra_place_with_group_part() {
        // Frobenius with a nontrivial group part forces working layer one
        // and correspondingly more T-precision
        let cfg = r2_cfg_at(3, 12);
        let extra = PlaceDatum {
            label: "w1".into(),
            inertia_generators: vec![],
            frobenius: FrobeniusLift {
                group_part: cfg.ctx_h.group().factor_generator(0),
                n_v: 0,
            },
        };
        let rep = independence_check(&cfg, &[extra]).unwrap();
        assert!(rep.pass, "lhs {:?} rhs {:?}", rep.lhs, rep.rhs);
    }

    #[test]
    fn independence_refuses_at_insufficient_precision() {
        // the same layer-one configuration at M = 10 is refused, not
        // mis-certified
        let cfg = r2_cfg_at(3, 10);
        let extra = PlaceDatum {
            label: "w1".into(),
            inertia_generators: vec![],
            frobenius: FrobeniusLift {
                group_part: cfg.ctx_h.group().factor_generator(0),
                n_v: 0,
            },
        };
        assert!(matches!(
            independence_check(&cfg, &[extra]),
            Err(Error::InsufficientPrecision { .. })
        ));
    }
}
