//! Cross-route agreement beyond the acceptance scenarios: the explicit
//! splitting-shape formula against the module-theoretic direct route, on
//! mixed inertia orders and mixed layers.

use iwafitt::group::PGroup;
use iwafitt::ideal::frac_ideal_equal;
use iwafitt::ring::RingContext;
use iwafitt::scenario::{
    fitt1_direct, thm47_fitt, FrobeniusLift, PlaceDatum, Scenario, ScenarioConfig,
};

fn cyclic_cfg(m: u32, exps: &[u64], n_vs: &[u32]) -> ScenarioConfig {
    let h = PGroup::new(3, vec![9]).unwrap();
    let ctx = RingContext::new(h.clone(), 2, m).unwrap();
    let places: Vec<PlaceDatum> = exps
        .iter()
        .zip(n_vs)
        .enumerate()
        .map(|(k, (&e, &n))| PlaceDatum {
            label: format!("v{k}"),
            inertia_generators: vec![h.element(vec![e]).unwrap()],
            frobenius: FrobeniusLift {
                group_part: h.identity(),
                n_v: n,
            },
        })
        .collect();
    ScenarioConfig::new(ctx, places).unwrap()
}

#[test]
fn splitting_shape_agrees_with_direct_route() {
    let cases: [(u32, Vec<u64>, Vec<u32>); 3] = [
        (14, vec![1], vec![0]),
        (14, vec![1, 3], vec![0, 1]),
        (18, vec![3, 1, 3], vec![1, 0, 1]),
    ];
    for (m, exps, n_vs) in cases {
        let cfg = cyclic_cfg(m, &exps, &n_vs);
        let s = Scenario::from_config(&cfg, None).unwrap();
        let a = thm47_fitt(&s).unwrap();
        let b = fitt1_direct(&s).unwrap();
        assert!(
            frac_ideal_equal(&a, &b).unwrap(),
            "inertia exponents {exps:?}, layers {n_vs:?}"
        );
    }
}
