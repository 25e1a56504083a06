//! Task kinds, dispatch, and the registry of canned reproductions.

use crate::config::{ConfigFile, PlaceSpec};
use iwafitt::complex::{
    bar_resolution, check_exactness, cyclic_complex, mapping_cone, morphism_tensor_f,
    product_complex_c, pruned_complex_d, special_morphism_s, thm46_complexes, ComplexMorphism,
};
use iwafitt::group::PGroup;
use iwafitt::ideal::{
    frac_ideal_equal, ideal_equal, minor_list, minors, DenomFactor, FractionalIdeal, IdealHandle,
};
use iwafitt::matrix::RingMatrix;
use iwafitt::monomial::{
    build_a, build_mtilde, gkt_minor_check, strong_conjecture_check, weak_conjecture_check,
    MonomialInterp,
};
use iwafitt::ring::{gamma_power_poly, norm_element, tau_element, RingContext, RingElement};
use iwafitt::scenario::{
    build_z0, fitt1_z0, independence_check, product_config, product_generators, thm45_rhs,
    thm46_rhs, thm47_b_matrix, thm47_fitt, thm47_generators, FittMethod, Scenario, ScenarioConfig,
};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TaskSpec {
    /// Compute `Fitt^[1](Z^0)` by the requested construction methods and
    /// require pairwise agreement.
    Fitt1 {
        #[serde(default)]
        methods: Vec<String>,
    },
    /// Minor ideals of the pruned (`target: "pruned"`) or full
    /// (`target: "full"`) tensor boundary matrix.
    Minors {
        #[serde(default = "default_target")]
        target: String,
        #[serde(default)]
        e: Option<usize>,
    },
    StrongConjecture {},
    WeakConjecture {
        #[serde(default)]
        n: u32,
    },
    GktMinors {
        #[serde(default)]
        e_list: Vec<usize>,
    },
    /// The cyclic totally-ramified layer identities for the config group.
    Thm46 {
        #[serde(default = "default_layers")]
        n_layers: Vec<u32>,
    },
    Thm45 {},
    Thm47 {},
    Independence {
        extra_places: Vec<PlaceSpec>,
    },
    Exactness {
        target: String,
        /// Maximum complex degree; defaults to the --max-degree flag.
        #[serde(default)]
        max_degree: Option<usize>,
        /// Degrees where nontrivial homology is allowed; defaults to the
        /// target's natural set.
        #[serde(default)]
        allowed: Option<Vec<usize>>,
    },
    Reproduce {
        id: String,
    },
}

fn default_target() -> String {
    "pruned".into()
}
fn default_layers() -> Vec<u32> {
    vec![0, 1]
}

impl TaskSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TaskSpec::Fitt1 { .. } => "fitt1",
            TaskSpec::Minors { .. } => "minors",
            TaskSpec::StrongConjecture {} => "strong-conjecture",
            TaskSpec::WeakConjecture { .. } => "weak-conjecture",
            TaskSpec::GktMinors { .. } => "gkt-minors",
            TaskSpec::Thm46 { .. } => "thm46",
            TaskSpec::Thm45 {} => "thm45",
            TaskSpec::Thm47 {} => "thm47",
            TaskSpec::Independence { .. } => "independence",
            TaskSpec::Exactness { .. } => "exactness",
            TaskSpec::Reproduce { .. } => "reproduce",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealRender {
    pub role: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct TaskOutcome {
    pub status: Status,
    pub lines: Vec<String>,
    pub ideals: Vec<IdealRender>,
    pub witness: Option<String>,
}

impl TaskOutcome {
    fn pass() -> Self {
        TaskOutcome {
            status: Status::Pass,
            lines: vec![],
            ideals: vec![],
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        TaskOutcome {
            status: Status::Fail,
            lines: vec![],
            ideals: vec![],
            witness: Some(witness),
        }
    }

    fn line(mut self, s: String) -> Self {
        self.lines.push(s);
        self
    }

    fn ideal(mut self, role: &str, f: &FractionalIdeal) -> Self {
        let mut gens = f.numerator().render_generators();
        if !f.denominator_factors().is_empty() {
            let den: Vec<String> = f
                .denominator_factors()
                .iter()
                .map(|d| d.render())
                .collect();
            gens.push(format!("denominator: {}", den.join("*")));
        }
        self.ideals.push(IdealRender {
            role: role.into(),
            generators: gens,
        });
        self
    }

    fn integral_ideal(mut self, role: &str, i: &IdealHandle) -> Self {
        self.ideals.push(IdealRender {
            role: role.into(),
            generators: i.render_generators(),
        });
        self
    }

    fn and(self, other: TaskOutcome) -> TaskOutcome {
        let status = match (self.status, other.status) {
            (Status::Error, _) | (_, Status::Error) => Status::Error,
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            _ => Status::Pass,
        };
        TaskOutcome {
            status,
            lines: [self.lines, other.lines].concat(),
            ideals: [self.ideals, other.ideals].concat(),
            witness: self.witness.or(other.witness),
        }
    }
}

fn error_outcome(e: impl std::fmt::Display) -> TaskOutcome {
    TaskOutcome {
        status: Status::Error,
        lines: vec![],
        ideals: vec![],
        witness: Some(e.to_string()),
    }
}

pub struct RunOptions {
    pub max_degree: usize,
    pub budget: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_degree: 4,
            budget: iwafitt::complex::BAR_RANK_BUDGET,
        }
    }
}

pub fn run_task(cfg: &ConfigFile, spec: &TaskSpec, opts: &RunOptions) -> TaskOutcome {
    let result = match spec {
        TaskSpec::Fitt1 { methods } => task_fitt1(cfg, methods),
        TaskSpec::Minors { target, e } => task_minors(cfg, target, *e),
        TaskSpec::StrongConjecture {} => task_strong(cfg),
        TaskSpec::WeakConjecture { n } => task_weak(cfg, *n),
        TaskSpec::GktMinors { e_list } => task_gkt(cfg, e_list),
        TaskSpec::Thm46 { n_layers } => task_thm46(cfg, n_layers),
        TaskSpec::Thm45 {} => task_thm45(cfg),
        TaskSpec::Thm47 {} => task_thm47(cfg),
        TaskSpec::Independence { extra_places } => task_independence(cfg, extra_places),
        TaskSpec::Exactness {
            target,
            max_degree,
            allowed,
        } => task_exactness(
            cfg,
            target,
            max_degree.unwrap_or(opts.max_degree),
            allowed.as_deref(),
            opts,
        ),
        TaskSpec::Reproduce { id } => reproduce(id),
    };
    match result {
        Ok(o) => o,
        Err(e) => error_outcome(e),
    }
}

fn scenario_of(cfg: &ConfigFile) -> anyhow::Result<Scenario> {
    let sc = cfg.scenario_config()?;
    Ok(Scenario::from_config(&sc, None)?)
}

fn parse_method(name: &str) -> anyhow::Result<FittMethod> {
    Ok(match name {
        "direct" => FittMethod::Direct,
        "tensor" => FittMethod::Tensor,
        "bar" => FittMethod::Bar,
        "cone" => FittMethod::Cone,
        other => anyhow::bail!("unknown method {other}"),
    })
}

fn task_fitt1(cfg: &ConfigFile, methods: &[String]) -> anyhow::Result<TaskOutcome> {
    let s = scenario_of(cfg)?;
    let requested: Vec<FittMethod> = if methods.is_empty() {
        vec![
            FittMethod::Direct,
            FittMethod::Tensor,
            FittMethod::Bar,
            FittMethod::Cone,
        ]
    } else {
        methods
            .iter()
            .map(|m| parse_method(m))
            .collect::<anyhow::Result<_>>()?
    };
    let explicit = !methods.is_empty();
    let mut results: Vec<(FittMethod, FractionalIdeal)> = Vec::new();
    let mut out = TaskOutcome::pass();
    for m in requested {
        match fitt1_z0(&s, m) {
            Ok(f) => {
                out = out
                    .line(format!("fitt1[{}] computed", m.name()))
                    .ideal(&format!("fitt1[{}]", m.name()), &f);
                results.push((m, f));
            }
            Err(iwafitt::Error::MethodInapplicable(why)) if !explicit => {
                out = out.line(format!("fitt1[{}] not applicable: {why}", m.name()));
            }
            Err(e) => return Ok(error_outcome(e)),
        }
    }
    if results.is_empty() {
        return Ok(error_outcome("no applicable construction method"));
    }
    for i in 1..results.len() {
        let agree = frac_ideal_equal(&results[0].1, &results[i].1)?;
        out = out.line(format!(
            "{} vs {}: {}",
            results[0].0.name(),
            results[i].0.name(),
            if agree { "agree" } else { "DISAGREE" }
        ));
        if !agree {
            return Ok(out.and(TaskOutcome::fail(format!(
                "methods {} and {} disagree",
                results[0].0.name(),
                results[i].0.name()
            ))));
        }
    }
    Ok(out)
}

fn task_minors(cfg: &ConfigFile, target: &str, e: Option<usize>) -> anyhow::Result<TaskOutcome> {
    let s = scenario_of(cfg)?;
    let sigmas = product_generators(&s)?;
    let m = match target {
        "pruned" => build_a(&s.ctx, &sigmas)?,
        "full" => build_mtilde(&s.ctx, &sigmas)?,
        other => anyhow::bail!("unknown minors target {other}"),
    };
    let sizes: Vec<usize> = match e {
        Some(e) => vec![e],
        None => (0..=m.rows().min(m.cols())).collect(),
    };
    let mut out = TaskOutcome::pass().line(format!(
        "matrix {target}: {} x {}",
        m.rows(),
        m.cols()
    ));
    for e in sizes {
        let ideal = minors(&m, e)?;
        out = out
            .line(format!("Min_{e}: span log_p = {}", ideal.span_log_p()))
            .integral_ideal(&format!("Min_{e}({target})"), &ideal);
    }
    Ok(out)
}

fn task_strong(cfg: &ConfigFile) -> anyhow::Result<TaskOutcome> {
    let s = scenario_of(cfg)?;
    let sigmas = product_generators(&s)?;
    let reports = strong_conjecture_check(&s.ctx, &sigmas)?;
    let mut out = TaskOutcome::pass();
    let mut all = true;
    for r in reports {
        out = out.line(format!(
            "e={} |M|={} spans {}/{}: {}",
            r.e.unwrap_or(0),
            r.monomial_count,
            r.lhs_span_log_p,
            r.rhs_span_log_p,
            if r.pass { "PASS" } else { "FAIL" }
        ));
        if !r.pass {
            all = false;
            out.witness = r.witness;
        }
    }
    if !all {
        out.status = Status::Fail;
    }
    Ok(out)
}

fn task_weak(cfg: &ConfigFile, n: u32) -> anyhow::Result<TaskOutcome> {
    let s = scenario_of(cfg)?;
    let sigmas = product_generators(&s)?;
    let r = weak_conjecture_check(&s.ctx, &sigmas, n)?;
    let mut out = TaskOutcome::pass().line(format!(
        "weak form at n={n}: |M union|={} spans {}/{}: {}",
        r.monomial_count,
        r.lhs_span_log_p,
        r.rhs_span_log_p,
        if r.pass { "PASS" } else { "FAIL" }
    ));
    if !r.pass {
        out.status = Status::Fail;
        out.witness = r.witness;
    }
    Ok(out)
}

fn task_gkt(cfg: &ConfigFile, e_list: &[usize]) -> anyhow::Result<TaskOutcome> {
    let s = scenario_of(cfg)?;
    let sigmas = product_generators(&s)?;
    let mt = build_mtilde(&s.ctx, &sigmas)?;
    let sizes: Vec<usize> = if e_list.is_empty() {
        (0..=mt.rows().min(mt.cols())).collect()
    } else {
        e_list.to_vec()
    };
    let mut out = TaskOutcome::pass();
    let mut all = true;
    for e in sizes {
        let r = gkt_minor_check(&s.ctx, &sigmas, e)?;
        out = out.line(format!(
            "e={e} |M|={} spans {}/{}: {}",
            r.monomial_count,
            r.lhs_span_log_p,
            r.rhs_span_log_p,
            if r.pass { "PASS" } else { "FAIL" }
        ));
        if !r.pass {
            all = false;
            out.witness = r.witness;
        }
    }
    if !all {
        out.status = Status::Fail;
    }
    Ok(out)
}

fn task_thm46(cfg: &ConfigFile, n_layers: &[u32]) -> anyhow::Result<TaskOutcome> {
    let ctx = cfg.base_context()?;
    let mut out = TaskOutcome::pass();
    for &n in n_layers {
        let check = thm46_check(&ctx, n)?;
        out = out.and(check);
    }
    Ok(out)
}

/// The two layer identities: the 2x2 minors of the stacked matrix generate
/// `(w_n, N_H (gamma - 1))`, and the resulting shifted Fitting ideal equals
/// `(1, nu_H (gamma - 1) / w_n)`.
pub fn thm46_check(ctx_h: &Arc<RingContext>, n: u32) -> anyhow::Result<TaskOutcome> {
    let data = thm46_complexes(ctx_h, n)?;
    let lctx = data.stacked.context().clone();
    let h_sub = iwafitt::group::Subgroup::new(
        lctx.group().clone(),
        vec![lctx.group().factor_generator(0)],
    )?;
    let nh = norm_element(&lctx, &h_sub);
    let w = gamma_power_poly(&lctx, n);
    let t = RingElement::t(&lctx);
    let expected_minors = IdealHandle::new(&lctx, vec![w.clone(), nh.mul(&t)]);
    let minors_ok = ideal_equal(&data.minors2, &expected_minors)?;
    let expected_fitt = FractionalIdeal::new(
        IdealHandle::new(&lctx, vec![w, nh.mul(&t)]),
        vec![DenomFactor::GammaPow(n)],
    );
    let fitt_ok = frac_ideal_equal(&data.fitt, &expected_fitt)?;
    let mut out = TaskOutcome::pass()
        .line(format!(
            "n={n}: 2x2 minors generate (w_n, N_H(gamma-1)): {}",
            if minors_ok { "PASS" } else { "FAIL" }
        ))
        .line(format!(
            "n={n}: Fitt^[1] = (1, nu_H(gamma-1)/w_n): {}",
            if fitt_ok { "PASS" } else { "FAIL" }
        ))
        .ideal(&format!("thm46 fitt (n={n})"), &data.fitt);
    if !(minors_ok && fitt_ok) {
        out.status = Status::Fail;
        out.witness = Some(format!("layer identity failed at n={n}"));
    }
    Ok(out)
}

fn task_thm45(cfg: &ConfigFile) -> anyhow::Result<TaskOutcome> {
    let s = scenario_of(cfg)?;
    let sum_form = thm45_rhs(&s)?;
    // evaluate the dominant-place form at every minimizer and require
    // pairwise agreement with the sum form
    let min_n = s.places.iter().map(|p| p.n_v).min().unwrap();
    let mut out = TaskOutcome::pass().ideal("thm45 sum form", &sum_form);
    let mut all = true;
    for v in 0..s.place_count() {
        if s.places[v].n_v != min_n {
            continue;
        }
        match thm46_rhs(&s, v) {
            Ok(star) => {
                let ok = frac_ideal_equal(&sum_form, &star)?;
                out = out.line(format!(
                    "sum form vs v*={}: {}",
                    s.places[v].label,
                    if ok { "PASS" } else { "FAIL" }
                ));
                all &= ok;
            }
            Err(e) => {
                out = out.line(format!("v*={} skipped: {e}", s.places[v].label));
            }
        }
    }
    if !all {
        out.status = Status::Fail;
        out.witness = Some("sum form disagrees with a dominant-place form".into());
    }
    Ok(out)
}

fn task_thm47(cfg: &ConfigFile) -> anyhow::Result<TaskOutcome> {
    let s = scenario_of(cfg)?;
    let b = thm47_b_matrix(&s)?;
    let min = minors(&b, s.place_count() + 1)?;
    let gens = IdealHandle::new(&s.ctx, thm47_generators(&s)?);
    let ok = ideal_equal(&min, &gens)?;
    let fitt = thm47_fitt(&s)?;
    let mut out = TaskOutcome::pass()
        .line(format!(
            "B is {} x {}; Min_{}(B) = explicit generator list: {}",
            b.rows(),
            b.cols(),
            s.place_count() + 1,
            if ok { "PASS" } else { "FAIL" }
        ))
        .integral_ideal("maximal minors of B", &min)
        .ideal("thm47 fitt", &fitt);
    if !ok {
        out.status = Status::Fail;
        out.witness = Some("maximal minors differ from the generator list".into());
    }
    Ok(out)
}

fn task_independence(cfg: &ConfigFile, extras: &[PlaceSpec]) -> anyhow::Result<TaskOutcome> {
    let sc = cfg.scenario_config()?;
    let extra_places = extras
        .iter()
        .map(|ps| cfg.convert_place(ps))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let rep = independence_check(&sc, &extra_places)?;
    let mut out = TaskOutcome::pass()
        .line(format!(
            "adding {} unramified place(s): {}",
            extras.len(),
            if rep.pass { "PASS" } else { "FAIL" }
        ))
        .ideal("enlarged", &rep.lhs)
        .ideal("base times inverse factors", &rep.rhs);
    if !rep.pass {
        out.status = Status::Fail;
        out.witness = Some("enlarged scenario does not match the product formula".into());
    }
    Ok(out)
}

fn task_exactness(
    cfg: &ConfigFile,
    target: &str,
    max_degree: usize,
    allowed_override: Option<&[usize]>,
    opts: &RunOptions,
) -> anyhow::Result<TaskOutcome> {
    let ctx = cfg.base_context()?;
    let (complex, allowed): (_, Vec<usize>) = match target {
        "bar" => {
            let full = ctx.group().full_subgroup();
            (bar_resolution(&ctx, &full, max_degree, opts.budget)?, vec![0])
        }
        "cyclic" => {
            let sigma = ctx.group().factor_generator(0);
            (cyclic_complex(&ctx, &sigma, max_degree)?, vec![0])
        }
        "tensor" => {
            let gens: Vec<_> = (0..ctx.group().rank())
                .map(|k| ctx.group().factor_generator(k))
                .collect();
            (product_complex_c(&ctx, &gens, max_degree)?, vec![0])
        }
        "pruned" => {
            let gens: Vec<_> = (0..ctx.group().rank())
                .map(|k| ctx.group().factor_generator(k))
                .collect();
            let f = morphism_tensor_f(&ctx, &gens, max_degree)?;
            (pruned_complex_d(&f)?, vec![1])
        }
        "cone" => {
            let sigma = ctx.group().factor_generator(0);
            let e = cyclic_complex(&ctx, &sigma, max_degree)?;
            let id_maps: Vec<RingMatrix> = (0..=max_degree)
                .map(|d| RingMatrix::identity(&ctx, e.rank(d)))
                .collect();
            let f = ComplexMorphism::new(e.clone(), e, id_maps)?;
            (mapping_cone(&f)?, vec![])
        }
        other => anyhow::bail!("unknown exactness target {other}"),
    };
    let allowed = allowed_override.map(|a| a.to_vec()).unwrap_or(allowed);
    let report = check_exactness(&complex, &allowed)?;
    let mut out = TaskOutcome::pass();
    for (d, trivial) in &report.degrees {
        out = out.line(format!(
            "degree {d}: H = {}",
            if *trivial { "0" } else { "nontrivial" }
        ));
    }
    if !report.pass {
        out.status = Status::Fail;
        out.witness = Some(format!(
            "homology outside the allowed degrees {allowed:?}"
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// canned reproductions
// ---------------------------------------------------------------------------

pub const REPRODUCE_IDS: &[&str] = &[
    "ex-4.5",
    "ex-4.6",
    "prop-1.9",
    "s1",
    "s2-5minors",
    "thm46-minors",
    "thm47-B",
    "independence",
];

pub fn reproduce(id: &str) -> anyhow::Result<TaskOutcome> {
    match id {
        "ex-4.5" => reproduce_ex45(),
        "ex-4.6" => reproduce_ex46(),
        "prop-1.9" => reproduce_prop19(),
        "s1" => reproduce_s1(),
        "s2-5minors" => reproduce_s2_minors(),
        "thm46-minors" => reproduce_thm46_minors(),
        "thm47-B" => reproduce_thm47_b(),
        "independence" => reproduce_independence(),
        other => anyhow::bail!(
            "unknown example id {other}; registered: {}",
            REPRODUCE_IDS.join(", ")
        ),
    }
}

fn reproduce_ex45() -> anyhow::Result<TaskOutcome> {
    let cfg = product_config(3, &[3, 3], 2, 6)?;
    let s = Scenario::from_config(&cfg, None)?;
    let fitt = fitt1_z0(&s, FittMethod::Tensor)?;
    let expected = FractionalIdeal::new(
        IdealHandle::new(&s.ctx, vec![RingElement::t(&s.ctx), s.nu(0), s.nu(1)]),
        vec![DenomFactor::t()],
    );
    let ok = frac_ideal_equal(&fitt, &expected)?;
    let mut out = TaskOutcome::pass()
        .line(format!(
            "r=2 tensor route equals (1, nu_1/T, nu_2/T): {}",
            if ok { "PASS" } else { "FAIL" }
        ))
        .ideal("fitt1", &fitt);
    if !ok {
        out.status = Status::Fail;
    }
    Ok(out)
}

fn reproduce_ex46() -> anyhow::Result<TaskOutcome> {
    let cfg = product_config(3, &[3, 3, 3], 2, 6)?;
    let s = Scenario::from_config(&cfg, None)?;
    let sigmas = product_generators(&s)?;
    let ctx = &s.ctx;
    let interp = MonomialInterp::from_generators(ctx, &sigmas)?;
    let a = build_a(ctx, &sigmas)?;
    let j = IdealHandle::new(
        ctx,
        interp
            .nus
            .iter()
            .chain(interp.taus.iter())
            .cloned()
            .collect(),
    );
    let nus = IdealHandle::new(ctx, interp.nus.clone());
    let pairs = IdealHandle::new(
        ctx,
        vec![
            interp.nus[0].mul(&interp.nus[1]),
            interp.nus[1].mul(&interp.nus[2]),
            interp.nus[2].mul(&interp.nus[0]),
        ],
    );
    let expected: Vec<(usize, IdealHandle)> = vec![
        (0, IdealHandle::unit(ctx)),
        (1, j.clone()),
        (2, nus.product(&j)),
        (3, pairs.product(&j)),
    ];
    let mut out = TaskOutcome::pass();
    let mut all = true;
    for (e, want) in &expected {
        let got = minors(&a, *e)?;
        let ok = ideal_equal(&got, want)?;
        all &= ok;
        out = out.line(format!(
            "Min_{e}(A) matches the worked ideal: {}",
            if ok { "PASS" } else { "FAIL" }
        ));
    }
    // assembled Fitt^[1] equals the four-term sum
    let fitt = fitt1_z0(&s, FittMethod::Tensor)?;
    let t = RingElement::t(ctx);
    let t2 = t.mul(&t);
    let mut gens: Vec<RingElement> = Vec::new();
    for g in pairs.product(&j).generators() {
        gens.push(g.clone());
    }
    for g in nus.product(&j).generators() {
        gens.push(g.mul(&t));
    }
    for g in j.generators() {
        gens.push(g.mul(&t2));
    }
    gens.push(t2.mul(&t));
    let expected_fitt = FractionalIdeal::new(
        IdealHandle::new(ctx, gens),
        vec![DenomFactor::t(), DenomFactor::t()],
    );
    let ok = frac_ideal_equal(&fitt, &expected_fitt)?;
    all &= ok;
    out = out
        .line(format!(
            "Fitt^[1] equals the displayed four-term sum: {}",
            if ok { "PASS" } else { "FAIL" }
        ))
        .ideal("fitt1", &fitt);
    if !all {
        out.status = Status::Fail;
        out.witness = Some("a worked r=3 identity failed".into());
    }
    Ok(out)
}

fn reproduce_prop19() -> anyhow::Result<TaskOutcome> {
    let h = PGroup::new(3, vec![3])?;
    let ctx = RingContext::new(h.clone(), 2, 6)?;
    let full = h.full_subgroup();
    let fitt = iwafitt::ideal::zv_fitt1(&ctx, &full, &h.identity(), 0)?;
    let expected = FractionalIdeal::new(
        IdealHandle::new(
            &ctx,
            vec![RingElement::t(&ctx), norm_element(&ctx, &full)],
        ),
        vec![DenomFactor::t()],
    );
    let ok = frac_ideal_equal(&fitt, &expected)?;
    // cross-check against the three-term resolution: Fitt_0 of the
    // presentation (N_H, sigma~ - 1) over (sigma~ - 1)
    let pres = RingMatrix::from_rows(
        &ctx,
        vec![
            vec![norm_element(&ctx, &full)],
            vec![RingElement::t(&ctx)],
        ],
    )?;
    let alt = FractionalIdeal::new(iwafitt::ideal::fitt0(&pres)?, vec![DenomFactor::t()]);
    let ok2 = frac_ideal_equal(&fitt, &alt)?;
    let mut out = TaskOutcome::pass()
        .line(format!(
            "Fitt^[1](Z_v) = (1, N_H/T): {}",
            if ok { "PASS" } else { "FAIL" }
        ))
        .line(format!(
            "agrees with the explicit resolution route: {}",
            if ok2 { "PASS" } else { "FAIL" }
        ))
        .ideal("zv fitt1", &fitt);
    if !(ok && ok2) {
        out.status = Status::Fail;
    }
    Ok(out)
}

fn reproduce_s1() -> anyhow::Result<TaskOutcome> {
    let h = PGroup::new(3, vec![9])?;
    let ctx = RingContext::new(h.clone(), 3, 8)?;
    let sigma = h.factor_generator(0);
    let f = special_morphism_s(&ctx, &sigma, 3, 4)?;
    let cone = mapping_cone(&f)?;
    let fitt = iwafitt::complex::fitt_shift1_from_complex(&cone, 0)?;
    let sub = iwafitt::group::Subgroup::new(h.clone(), vec![h.pow(&sigma, 3)])?;
    let expected = FractionalIdeal::new(
        IdealHandle::new(
            &ctx,
            vec![
                RingElement::t(&ctx),
                norm_element(&ctx, &sub).mul(&tau_element(&ctx, &sigma)),
            ],
        ),
        vec![DenomFactor::t()],
    );
    let ok = frac_ideal_equal(&fitt, &expected)?;
    let mut out = TaskOutcome::pass()
        .line(format!(
            "s=1 cone yields (1, nu~ tau / T): {}",
            if ok { "PASS" } else { "FAIL" }
        ))
        .ideal("fitt1", &fitt);
    if !ok {
        out.status = Status::Fail;
    }
    Ok(out)
}

fn reproduce_s2_minors() -> anyhow::Result<TaskOutcome> {
    let h = PGroup::new(3, vec![9, 9])?;
    let ctx = RingContext::new(h.clone(), 2, 4)?;
    let f1 = special_morphism_s(&ctx, &h.factor_generator(0), 3, 4)?;
    let f2 = special_morphism_s(&ctx, &h.factor_generator(1), 3, 4)?;
    let f = iwafitt::complex::tensor_morphisms(&[f1, f2], 4)?;
    let cone = mapping_cone(&f)?;
    let a = cone.boundary(3);
    anyhow::ensure!(a.rows() == 7 && a.cols() == 5, "expected a 7 x 5 matrix");
    let fives = minor_list(a, 5)?;
    let count = fives.len();
    let all_zero = fives.iter().all(|m| m.is_zero());
    let mut out = TaskOutcome::pass().line(format!(
        "all {count} 5-minors vanish: {}",
        if all_zero { "PASS" } else { "FAIL" }
    ));
    if !all_zero {
        out.status = Status::Fail;
        out.witness = Some("a 5-minor is nonzero".into());
    }
    Ok(out)
}

fn reproduce_thm46_minors() -> anyhow::Result<TaskOutcome> {
    let h = PGroup::new(3, vec![3])?;
    let mut out = TaskOutcome::pass();
    for n in [0u32, 1] {
        let m = 2 * 3u32.pow(n) + 4;
        let ctx = RingContext::new(h.clone(), 2, m)?;
        out = out.and(thm46_check(&ctx, n)?);
    }
    Ok(out)
}

fn reproduce_thm47_b() -> anyhow::Result<TaskOutcome> {
    let h = PGroup::new(3, vec![9])?;
    let ctx = RingContext::new(h.clone(), 2, 12)?;
    let cfg = ScenarioConfig::new(
        ctx,
        vec![
            iwafitt::scenario::PlaceDatum {
                label: "v1".into(),
                inertia_generators: vec![h.factor_generator(0)],
                frobenius: iwafitt::scenario::FrobeniusLift {
                    group_part: h.identity(),
                    n_v: 0,
                },
            },
            iwafitt::scenario::PlaceDatum {
                label: "v2".into(),
                inertia_generators: vec![h.element(vec![3])?],
                frobenius: iwafitt::scenario::FrobeniusLift {
                    group_part: h.identity(),
                    n_v: 1,
                },
            },
        ],
    )?;
    let s = Scenario::from_config(&cfg, Some(1))?;
    let b = thm47_b_matrix(&s)?;
    let min = minors(&b, 3)?;
    let gens = IdealHandle::new(&s.ctx, thm47_generators(&s)?);
    let ok = ideal_equal(&min, &gens)?;
    let mut out = TaskOutcome::pass()
        .line(format!(
            "Min_3(B) equals the explicit generator list: {}",
            if ok { "PASS" } else { "FAIL" }
        ))
        .integral_ideal("Min_3(B)", &min);
    if !ok {
        out.status = Status::Fail;
    }
    Ok(out)
}

fn reproduce_independence() -> anyhow::Result<TaskOutcome> {
    let cfg = product_config(3, &[3, 3], 3, 10)?;
    let extra = iwafitt::scenario::PlaceDatum {
        label: "w1".into(),
        inertia_generators: vec![],
        frobenius: iwafitt::scenario::FrobeniusLift {
            group_part: cfg.ctx_h.group().identity(),
            n_v: 0,
        },
    };
    let rep = independence_check(&cfg, &[extra])?;
    let mut out = TaskOutcome::pass()
        .line(format!(
            "one extra unramified place: {}",
            if rep.pass { "PASS" } else { "FAIL" }
        ))
        .ideal("enlarged", &rep.lhs);
    if !rep.pass {
        out.status = Status::Fail;
    }
    Ok(out)
}

// Z^0 diagnostics are exposed through the fitt1 task; re-export for tests.
#[allow(unused)]
pub fn z0_rank(cfg: &ConfigFile) -> anyhow::Result<(usize, bool)> {
    let s = scenario_of(cfg)?;
    let z0 = build_z0(&s)?;
    Ok((z0.rank, z0.rank_ok))
}
