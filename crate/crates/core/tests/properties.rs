use std::sync::Arc;

use proptest::prelude::*;
use recurlab_core::generators::{
    random_sequence, random_tower_function, random_weights, rng, sample_recipe, SeededRng,
};
use recurlab_core::orbits::hits_from_distances;
use recurlab_core::{
    apply_composition, apply_shift, build_periodic_point, chaos_criterion, classify, derive_weights,
    factor_map, frequent_recurrence_evidence, hypercyclicity_criterion, lift, lower_density, orbit_distances,
    recurrence_hits, tower_from_profile, tower_from_weights, upper_banach_density, BilateralSequence,
    CompositionOperator, CriteriaConfig, Evidence, EvidenceConfig, Family, HitSet, LevelProfile,
    MeasureTower, SampleBounds, Status, TowerFunction, TowerSpec, WeightSequence, WeightedShift,
};

const REL: f64 = 1e-12;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) || (a - b).abs() <= f64::MIN_POSITIVE
}

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), 1.0..4.0]
}

/// A random tower with the generator's parameter ranges.
fn tower(family: Family, seed: u64, p: f64, max_cells: usize, max_distortion: f64) -> Arc<MeasureTower> {
    let bounds = SampleBounds {
        window: 64,
        max_cells,
        max_distortion,
        exponent: p,
    };
    tower_from_profile(&sample_recipe(family, &mut rng(seed), &bounds)).unwrap()
}

fn function_on(tower: &Arc<MeasureTower>, r: &mut SeededRng, lo: i64, hi: i64) -> TowerFunction {
    random_tower_function(r, tower, lo, hi).unwrap()
}

fn seq_close(a: &BilateralSequence, b: &BilateralSequence, p: f64, rel: f64) -> bool {
    let diff = (a - b).p_norm(p).unwrap();
    diff <= rel * a.p_norm(p).unwrap().max(b.p_norm(p).unwrap())
}

fn fn_close(a: &TowerFunction, b: &TowerFunction, p: f64, rel: f64) -> bool {
    let diff = a.combine(b, -1.0).unwrap().p_norm(p).unwrap();
    diff <= rel * a.p_norm(p).unwrap().max(b.p_norm(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_is_homogeneous_and_subadditive(seed in any::<u64>(), p in exponent(), alpha in -1e3..1e3f64) {
        let mut r = rng(seed);
        let x = random_sequence(&mut r, -20, 20, 64).unwrap();
        let y = random_sequence(&mut r, -5, 30, 64).unwrap();
        let nx = x.p_norm(p).unwrap();
        prop_assert!(close(x.scale(alpha).p_norm(p).unwrap(), alpha.abs() * nx, REL));
        prop_assert!((&x + &y).p_norm(p).unwrap() <= (nx + y.p_norm(p).unwrap()) * (1.0 + REL));

        let t = tower(Family::RandomDistorted, seed, p, 3, 1.0);
        let f = function_on(&t, &mut r, -10, 10);
        let g = function_on(&t, &mut r, 0, 30);
        let nf = f.p_norm(p).unwrap();
        prop_assert!(close(f.scale(alpha).p_norm(p).unwrap(), alpha.abs() * nf, REL));
        prop_assert!(f.combine(&g, 1.0).unwrap().p_norm(p).unwrap() <= (nf + g.p_norm(p).unwrap()) * (1.0 + REL));
    }

    #[test]
    fn star_constants_bound_the_weights(fam in family(), seed in any::<u64>(), p in exponent()) {
        let t = tower(fam, seed, p, 4, 2.0);
        let star = t.star();
        prop_assert!(star.c * star.d >= 1.0 - REL);
        let w = derive_weights(&t).unwrap();
        for k in -63..=64 {
            let wk = w.weight(k).unwrap();
            prop_assert!(wk <= star.c.powf(1.0 / p) * (1.0 + REL));
            prop_assert!(1.0 / wk <= star.d.powf(1.0 / p) * (1.0 + REL));
        }
        if !t.has_cell_table() {
            prop_assert_eq!(star.distortion, 1.0);
        }
    }

    #[test]
    fn shift_group_law_and_inverse(seed in any::<u64>(), m in -40i64..40, n in -40i64..40, p in exponent()) {
        let mut r = rng(seed);
        let w = WeightSequence::split(0.3 + (seed % 7) as f64 * 0.2, 1.7, 64).unwrap();
        let x = random_sequence(&mut r, -10, 10, 64).unwrap();
        let two_steps = apply_shift(&w, &apply_shift(&w, &x, m).unwrap(), n).unwrap();
        prop_assert!(seq_close(&two_steps, &apply_shift(&w, &x, m + n).unwrap(), p, REL));
        let back = apply_shift(&w, &apply_shift(&w, &x, n).unwrap(), -n).unwrap();
        prop_assert!(seq_close(&back, &x, p, REL));
    }

    #[test]
    fn composition_group_law_and_inverse(fam in family(), seed in any::<u64>(), m in -20i64..20, n in -20i64..20) {
        let t = tower(fam, seed, 1.0, 3, 1.0);
        let mut r = rng(seed ^ 1);
        let phi = function_on(&t, &mut r, -10, 10);
        let two = apply_composition(&apply_composition(&phi, m).unwrap(), n).unwrap();
        prop_assert!(fn_close(&two, &apply_composition(&phi, m + n).unwrap(), 1.0, REL));
        let back = apply_composition(&apply_composition(&phi, n).unwrap(), -n).unwrap();
        prop_assert!(fn_close(&back, &phi, 1.0, REL));
    }

    #[test]
    fn lift_is_an_isometric_right_inverse(fam in family(), seed in any::<u64>(), p in exponent()) {
        let t = tower(fam, seed, p, 4, 1.0);
        let mut r = rng(seed ^ 2);
        let y = random_sequence(&mut r, -64, 64, 64).unwrap();
        let l = lift(&t, &y).unwrap();
        prop_assert!(close(l.p_norm(p).unwrap(), y.p_norm(p).unwrap(), REL));
        prop_assert!(seq_close(&factor_map(&t, &l).unwrap(), &y, p, REL));
    }

    #[test]
    fn semiconjugacy_identity(fam in family(), seed in any::<u64>(), p in exponent()) {
        let t = tower(fam, seed, p, 4, 2.0);
        let mut r = rng(seed ^ 3);
        let phi = function_on(&t, &mut r, -63, 64);
        let w = derive_weights(&t).unwrap();
        let left = factor_map(&t, &apply_composition(&phi, 1).unwrap()).unwrap();
        let right = apply_shift(&w, &factor_map(&t, &phi).unwrap(), 1).unwrap();
        prop_assert!(seq_close(&left, &right, p, REL));
    }

    #[test]
    fn factor_map_is_a_contraction_at_k_one(fam in family(), seed in any::<u64>(), p in exponent()) {
        let t = tower(fam, seed, p, 4, 1.0);
        let mut r = rng(seed ^ 4);
        let phi = function_on(&t, &mut r, -30, 30);
        prop_assert!(factor_map(&t, &phi).unwrap().p_norm(p).unwrap() <= phi.p_norm(p).unwrap() * (1.0 + REL));
    }

    #[test]
    fn weights_round_trip(seed in any::<u64>(), p in exponent(), base in 0.1..10.0f64) {
        let mut r = rng(seed);
        let w = Arc::new(random_weights(&mut r, 32, 0.2, 5.0).unwrap());
        let t = tower_from_weights(Arc::clone(&w), p, base).unwrap();
        let back = derive_weights(&t).unwrap();
        for k in -31..=32 {
            prop_assert!(close(back.weight(k).unwrap(), w.weight(k).unwrap(), REL));
        }
    }

    #[test]
    fn tower_round_trip(fam in family(), seed in any::<u64>(), p in exponent()) {
        let t = tower(fam, seed, p, 1, 1.0);
        let w = Arc::new(derive_weights(&t).unwrap());
        let again = tower_from_weights(w, p, t.base_mass()).unwrap();
        for k in -64..=64 {
            prop_assert!(close(again.level_mass(k).unwrap(), t.level_mass(k).unwrap(), REL));
        }
    }

    #[test]
    fn density_invariants(bits in prop::collection::vec(any::<bool>(), 8..400), extra in any::<u64>()) {
        let horizon = bits.len() as u64;
        let h = HitSet::from_predicate(horizon, |n| bits[n as usize - 1]);
        let tail = horizon / 2 + 1;
        let largest = horizon - tail + 1;
        let lengths: Vec<u64> = {
            let mut v = vec![1, largest / 2, largest];
            v.retain(|&l| l > 0);
            v.dedup();
            v
        };
        let lower = lower_density(&h, tail).unwrap().estimate;
        let banach = upper_banach_density(&h, &lengths).unwrap().estimate;
        prop_assert!((0.0..=1.0).contains(&lower));
        prop_assert!(lower <= banach && banach <= 1.0);

        // Adding a hit never lowers either value.
        let added = 1 + extra % horizon;
        let more = HitSet::from_predicate(horizon, |n| bits[n as usize - 1] || n == added);
        prop_assert!(lower_density(&more, tail).unwrap().estimate >= lower);
        prop_assert!(upper_banach_density(&more, &lengths).unwrap().estimate >= banach);
    }

    #[test]
    fn hits_grow_with_delta(seed in any::<u64>(), d1 in 0.01..2.0f64, d2 in 0.01..2.0f64) {
        let (small, large) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let mut r = rng(seed);
        let w = Arc::new(WeightSequence::split(0.5, 1.5, 400).unwrap());
        let op = WeightedShift::new(w, 1.0).unwrap();
        let x = random_sequence(&mut r, -5, 5, 400).unwrap();
        let d = orbit_distances(&op, &x, 100, None).unwrap();
        prop_assert!(hits_from_distances(&d, small).is_subset_of(&hits_from_distances(&d, large)));
    }

    #[test]
    fn horizon_and_epsilon_only_help(fam in family(), seed in any::<u64>(), h in 40u64..400, extra in 0u64..400) {
        let t = tower(fam, seed, 1.0, 1, 1.0);
        let limit = if t.extends() { h + extra } else { 50 };
        let h = h.min(limit);
        let short = hypercyclicity_criterion(&t, &[1, 4], &[0.1, 0.01], h).unwrap();
        let long = hypercyclicity_criterion(&t, &[1, 4], &[0.1, 0.01], limit).unwrap();
        let loose = hypercyclicity_criterion(&t, &[1, 4], &[0.2, 0.02], h).unwrap();
        if short.is_satisfied() {
            prop_assert!(long.is_satisfied());
            prop_assert_eq!(long.witness, short.witness);
            prop_assert!(loose.is_satisfied());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_norm_bound(fam in family(), seed in any::<u64>(), p in exponent()) {
        let t = tower(fam, seed, p, 4, 2.0);
        let mut r = rng(seed ^ 5);
        let phi = function_on(&t, &mut r, -63, 63);
        let (c, d) = recurlab_core::operator_norm_bound(&t);
        let norm = phi.p_norm(p).unwrap();
        prop_assert!(apply_composition(&phi, 1).unwrap().p_norm(p).unwrap() <= c * norm * (1.0 + REL));
        prop_assert!(apply_composition(&phi, -1).unwrap().p_norm(p).unwrap() <= d * norm * (1.0 + REL));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_is_consistent_and_matches_shift_route(fam in family(), seed in any::<u64>(), cells in 1usize..4) {
        let t = tower(fam, seed, 1.0, cells, 1.0);
        let mut config = CriteriaConfig::default();
        config.horizon = config.max_horizon(&t).unwrap();
        let c = classify(&t, &config).unwrap();
        prop_assert!(c.invariant_violations().is_empty());
        let shifted = recurlab_core::classify_via_shift(&t, &config).unwrap();
        prop_assert_eq!(shifted.statuses(), c.statuses());
        prop_assert_eq!(shifted.hypercyclic.witness, c.hypercyclic.witness);
    }

    #[test]
    fn hits_transport_through_the_factor_map(fam in family(), seed in any::<u64>(), delta in 0.05..3.0f64) {
        let t = tower(fam, seed, 1.0, 3, 1.0);
        let mut r = rng(seed ^ 6);
        let phi = function_on(&t, &mut r, -8, 8);
        let n_max = 40;
        let radius = Some(64 - n_max);
        let tf = CompositionOperator::new(Arc::clone(&t));
        let bw = WeightedShift::new(Arc::new(derive_weights(&t).unwrap()), 1.0).unwrap();
        let y = factor_map(&t, &phi).unwrap();
        let h_tower = recurrence_hits(&tf, &phi, delta, n_max, radius).unwrap();
        let h_shift = recurrence_hits(&bw, &y, delta * (1.0 + REL), n_max, radius).unwrap();
        prop_assert!(h_tower.is_subset_of(&h_shift));
    }

    #[test]
    fn chaotic_geometric_towers_have_dense_periodic_returns(ratio in 0.2..0.9f64, p in exponent()) {
        let mut spec = TowerSpec::simple(LevelProfile::Geometric { ratio }, 64, p);
        spec.scale = 1.0;
        let t = MeasureTower::new(spec).unwrap();
        prop_assert!(chaos_criterion(&t, 2000, 0.999).unwrap().is_satisfied());
        let w = Arc::new(derive_weights(&t).unwrap());
        let x = build_periodic_point(&w, 1, 1.0, 400, p).unwrap();
        prop_assert!(x.stabilizes);
        let op = WeightedShift::new(w, p).unwrap();
        let config = EvidenceConfig { n_max: 200, radius: Some(200), ..EvidenceConfig::default() };
        let report = frequent_recurrence_evidence(&op, &x.point, &config).unwrap();
        prop_assert_eq!(report.evidence, Evidence::EvidenceFor);
        for d in &report.per_delta {
            prop_assert_eq!(d.lower.estimate, 1.0);
        }
    }
}

#[test]
fn chaos_agrees_with_periodic_point_stabilization() {
    let horizon: u64 = 2000;
    let mut towers: Vec<(String, Arc<MeasureTower>)> = vec![
        (
            "flat".into(),
            MeasureTower::new(TowerSpec::simple(LevelProfile::Flat, 64, 1.0)).unwrap(),
        ),
        (
            "harmonic".into(),
            MeasureTower::new(TowerSpec::simple(LevelProfile::Harmonic, 64, 1.0)).unwrap(),
        ),
        (
            "weight two".into(),
            tower_from_weights(Arc::new(WeightSequence::constant(2.0, 64).unwrap()), 1.0, 1.0).unwrap(),
        ),
    ];
    for ratio in [0.3, 0.5, 0.8, 0.95] {
        towers.push((
            format!("geometric {ratio}"),
            MeasureTower::new(TowerSpec::simple(LevelProfile::Geometric { ratio }, 64, 1.0)).unwrap(),
        ));
    }
    // Cell tables stop at the window, so these towers get one spare level.
    let bounds = SampleBounds {
        window: horizon + 1,
        max_cells: 3,
        max_distortion: 2.0,
        exponent: 1.0,
    };
    for seed in 0..12 {
        let recipe = sample_recipe(Family::RandomDistorted, &mut rng(seed), &bounds);
        towers.push((
            format!("random_distorted {seed}"),
            tower_from_profile(&recipe).unwrap(),
        ));
    }
    for (name, t) in towers {
        let verdict = chaos_criterion(&t, horizon, 0.999).unwrap();
        let w = derive_weights(&t).unwrap();
        let pp = build_periodic_point(&w, 1, 1.0, horizon, 1.0).unwrap();
        assert_eq!(
            verdict.status == Status::SatisfiedWithWitness,
            pp.stabilizes,
            "{name}"
        );
    }
}
