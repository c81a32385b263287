//! Acceptance run: every criterion prints one PASS/FAIL line, and the
//! process fails if any criterion does.

use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use recurlab_cli::conjugacy::cmd_conjugacy_check;
use recurlab_cli::sweep::cmd_sweep;
use recurlab_cli::{run_config, Command, Config, Overrides, Report};
use recurlab_core::generators::{
    random_span, random_tower_function, random_weights, rng, sample_recipe, Profile, TowerRecipe,
};
use recurlab_core::verdict::Diagnostics;
use recurlab_core::{
    build_periodic_point, chaos_criterion, classify, derive_weights, factor_map, hypercyclicity_criterion,
    lower_density, recurrence_hits, tower_from_profile, tower_from_weights, upper_banach_density,
    CompositionOperator, CriteriaConfig, Family, HitSet, MeasureTower, SampleBounds, Status, WeightSequence,
    WeightedShift,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn text(e: impl Display) -> String {
    e.to_string()
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let started = Instant::now();
    let value = f();
    (value, started.elapsed())
}

fn config(json: &str) -> Result<Config, String> {
    Config::from_json(json).map_err(text)
}

fn semiconjugacy() -> Outcome {
    let mut details = Vec::new();
    for p in [1.0, 2.0] {
        let config = config(&format!(
            r#"{{ "p": {p}, "seed": 2024,
                 "conjugacy": {{ "trials": 1000, "lift_trials": 0, "window": 64, "max_cells": 4,
                                 "max_distortion": 1.0,
                                 "profiles": ["geometric", "flat", "harmonic", "random_distorted"] }} }}"#
        ))?;
        let (out, elapsed) = timed(|| cmd_conjugacy_check(&config));
        let out = out.map_err(text)?;
        let s = &out.body.semiconjugacy;
        ensure(s.trials >= 1000, || format!("only {} trials", s.trials))?;
        ensure(s.per_family.iter().all(|f| f.trials > 0), || {
            "a profile got no trials".into()
        })?;
        ensure(s.max_relative_residual <= 1e-9, || {
            format!("p = {p}: relative residual {:e}", s.max_relative_residual)
        })?;
        ensure(s.failures == 0 && out.violations.is_empty(), || {
            format!("{:?}", out.violations)
        })?;
        ensure(elapsed < Duration::from_secs(10), || {
            format!("p = {p}: took {elapsed:?}")
        })?;
        details.push(format!(
            "p={p}: {} trials, max rel residual {:.1e}, {:.2?}",
            s.trials, s.max_relative_residual, elapsed
        ));
    }
    Ok(details.join("; "))
}

fn lift_isometry() -> Outcome {
    let mut details = Vec::new();
    for p in [1.0, 2.0] {
        let config = config(&format!(
            r#"{{ "p": {p}, "seed": 77,
                 "conjugacy": {{ "trials": 1, "lift_trials": 1000, "window": 64, "max_cells": 4 }} }}"#
        ))?;
        let (out, elapsed) = timed(|| cmd_conjugacy_check(&config));
        let out = out.map_err(text)?;
        let l = &out.body.lift;
        ensure(l.trials >= 1000, || format!("only {} lifts", l.trials))?;
        ensure(l.max_norm_error <= 1e-12, || {
            format!("p = {p}: norm error {:e}", l.max_norm_error)
        })?;
        ensure(l.max_roundtrip_error <= 1e-12, || {
            format!("p = {p}: round-trip error {:e}", l.max_roundtrip_error)
        })?;
        ensure(elapsed < Duration::from_secs(5), || {
            format!("p = {p}: took {elapsed:?}")
        })?;
        details.push(format!(
            "p={p}: {} lifts, norm err {:.1e}, round trip {:.1e}, {:.2?}",
            l.trials, l.max_norm_error, l.max_roundtrip_error, elapsed
        ));
    }
    Ok(details.join("; "))
}

fn weights_round_trip() -> Outcome {
    const M: i64 = 64;
    let mut r = rng(3);
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for case in 0..1000 {
        let p = [1.0, 2.0, 3.5][case % 3];
        let w = random_weights(&mut r, M as u64, 0.25, 4.0).map_err(text)?;
        let base = r.gen_range(0.25..=1.0);
        let tower = tower_from_weights(Arc::new(w.clone()), p, base).map_err(text)?;
        let back = derive_weights(&tower).map_err(text)?;
        for k in -M..=M {
            let err = relative(w.weight(k).map_err(text)?, back.weight(k).map_err(text)?);
            worst = worst.max(err);
        }
        cases += 1;
    }
    let bounds = |p| SampleBounds {
        window: M as u64,
        max_cells: 1,
        max_distortion: 1.0,
        exponent: p,
    };
    for case in 0..1000u64 {
        let family = Family::ALL[case as usize % 4];
        let p = [1.0, 2.0, 3.5][case as usize % 3];
        let tower = tower_from_profile(&sample_recipe(family, &mut rng(case), &bounds(p))).map_err(text)?;
        let w = derive_weights(&tower).map_err(text)?;
        let rebuilt = tower_from_weights(Arc::new(w), p, tower.base_mass()).map_err(text)?;
        for k in -M..=M {
            let err = relative(
                tower.level_mass(k).map_err(text)?,
                rebuilt.level_mass(k).map_err(text)?,
            );
            worst = worst.max(err);
        }
        cases += 1;
    }
    ensure(worst <= 1e-12, || format!("worst relative error {worst:e}"))?;
    Ok(format!("{cases} cases, worst relative error {worst:.1e}"))
}

fn witnesses() -> Outcome {
    let geometric =
        tower_from_profile(&TowerRecipe::new(Profile::Geometric { ratio: 0.5 }, 64)).map_err(text)?;
    let v = hypercyclicity_criterion(&geometric, &[1], &[0.1], 20_000).map_err(text)?;
    ensure(v.witness == Some(6), || {
        format!("geometric witness {:?}", v.witness)
    })?;
    let flat = tower_from_profile(&TowerRecipe::new(Profile::Flat, 64)).map_err(text)?;
    let epsilons = [2.999, 2.5, 2.0, 1.0, 0.1, 1e-3];
    for eps in epsilons {
        let v = hypercyclicity_criterion(&flat, &[1], &[eps], 20_000).map_err(text)?;
        ensure(v.status == Status::FailedAtHorizon, || {
            format!("flat at eps {eps}: {:?}", v.status)
        })?;
    }
    Ok(format!(
        "geometric(1/2) witness n=6; flat FailedAtHorizon for eps in {epsilons:?}"
    ))
}

fn sweep_consistency() -> Outcome {
    let config = config(
        r#"{ "p": 1.0, "seed": 5,
             "sweep": { "profiles": ["geometric", "flat", "harmonic", "random_distorted"], "seeds": 100,
                        "window": 64, "max_cells": 3, "max_distortion": 2.0 } }"#,
    )?;
    let (out, elapsed) = timed(|| cmd_sweep(&config));
    let out = out.map_err(text)?;
    let body = &out.body;
    ensure(body.total_trials >= 300, || {
        format!("only {} towers", body.total_trials)
    })?;
    ensure(
        body.total_invariant_violations == 0 && out.violations.is_empty(),
        || format!("violations: {:?}", out.violations),
    )?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    let hypercyclic: usize = body.summary.iter().map(|r| r.hypercyclic).sum();
    let chaotic: usize = body.summary.iter().map(|r| r.chaotic).sum();
    Ok(format!(
        "{} towers, 0 violations, {hypercyclic} hypercyclic, {chaotic} chaotic, {elapsed:.2?}",
        body.total_trials
    ))
}

fn harmonic_separation() -> Outcome {
    let tower = tower_from_profile(&TowerRecipe::new(Profile::Harmonic, 64)).map_err(text)?;
    let c = classify(&tower, &CriteriaConfig::default()).map_err(text)?;
    ensure(c.recurrent.is_satisfied() && c.hypercyclic.is_satisfied(), || {
        format!(
            "recurrent {:?}, hypercyclic {:?}",
            c.recurrent.status, c.hypercyclic.status
        )
    })?;
    ensure(
        !c.chaotic.is_satisfied() && !c.frequently_hypercyclic.is_satisfied(),
        || {
            format!(
                "chaotic {:?}, FHC {:?}",
                c.chaotic.status, c.frequently_hypercyclic.status
            )
        },
    )?;
    let Diagnostics::SeriesTail(tail) = &c.chaotic.diagnostics else {
        return Err("chaos verdict carries no series diagnostics".into());
    };
    // Harmonic partial sums still grow by about 2 ln(10/9) over the last tenth.
    let growth = tail.partial_sum - tail.partial_sum_at_tail_start;
    ensure(growth > 0.2, || format!("tail growth {growth}"))?;
    Ok(format!(
        "hypercyclic witness {:?}, chaotic {:?}, partial sum {:.4} (grew {growth:.4} over the tail)",
        c.hypercyclic.witness, c.chaotic.status, tail.partial_sum
    ))
}

fn chaos_oracle() -> Outcome {
    const H: u64 = 2000;
    let closed = |profile| tower_from_profile(&TowerRecipe::new(profile, 64));
    let mut towers: Vec<(String, Arc<MeasureTower>)> = Vec::new();
    for ratio in [0.3, 0.5, 0.8, 0.95] {
        towers.push((
            format!("geometric({ratio})"),
            closed(Profile::Geometric { ratio }).map_err(text)?,
        ));
    }
    towers.push(("flat".into(), closed(Profile::Flat).map_err(text)?));
    towers.push(("harmonic".into(), closed(Profile::Harmonic).map_err(text)?));
    // Tables stop at their window, and B_w x at level -H reads w_{-H}.
    let window = H + 1;
    let masses = (-(window as i32)..=window as i32)
        .map(|k| 0.8f64.powi(k.abs()))
        .collect();
    let custom = tower_from_profile(&TowerRecipe::new(Profile::Custom { masses }, window)).map_err(text)?;
    towers.push(("custom(0.8^|k|)".into(), custom));
    let two = WeightSequence::constant(2.0, 64).map_err(text)?;
    towers.push((
        "weights(2)".into(),
        tower_from_weights(Arc::new(two), 1.0, 1.0).map_err(text)?,
    ));
    let bounds = SampleBounds {
        window,
        max_cells: 3,
        max_distortion: 2.0,
        exponent: 1.0,
    };
    for seed in 0..12 {
        let recipe = sample_recipe(Family::RandomDistorted, &mut rng(seed), &bounds);
        towers.push((
            format!("random_distorted#{seed}"),
            tower_from_profile(&recipe).map_err(text)?,
        ));
    }

    let mut satisfied = Vec::new();
    for (name, tower) in &towers {
        let verdict = chaos_criterion(tower, H, 0.999).map_err(text)?;
        let w = derive_weights(tower).map_err(text)?;
        let pp = build_periodic_point(&w, 1, 1.0, H, tower.exponent()).map_err(text)?;
        ensure(verdict.is_satisfied() == pp.stabilizes, || {
            format!(
                "{name}: chaos {:?} but tail increment {:e}",
                verdict.status, pp.tail_increment
            )
        })?;
        if verdict.is_satisfied() {
            satisfied.push(name.as_str());
        }
    }

    // Exactness is checked where 2^-|k| is still a normal double; deeper
    // entries are subnormal and the next level underflows.
    let geometric = &towers[1].1;
    let w = derive_weights(geometric).map_err(text)?;
    let pp = build_periodic_point(&w, 1, 1.0, 1000, 1.0).map_err(text)?;
    ensure(pp.residual == 0.0, || {
        format!("geometric(1/2) residual {:e}", pp.residual)
    })?;
    ensure(
        (-1000..=1000).all(|k: i64| pp.point.get(k) == 0.5f64.powi(k.abs() as i32)),
        || "geometric(1/2) fixed point is not 2^-|k|".into(),
    )?;
    for name in ["flat", "weights(2)"] {
        let (_, tower) = towers.iter().find(|(n, _)| n == name).expect("listed above");
        let verdict = chaos_criterion(tower, H, 0.999).map_err(text)?;
        let w = derive_weights(tower).map_err(text)?;
        let pp = build_periodic_point(&w, 1, 1.0, H, 1.0).map_err(text)?;
        ensure(!verdict.is_satisfied() && !pp.stabilizes, || {
            format!("{name} looks summable")
        })?;
    }
    Ok(format!(
        "{} towers agree; satisfied: {}; geometric(1/2) fixed point exact with residual 0 on |k| <= 1000",
        towers.len(),
        satisfied.join(", ")
    ))
}

fn densities() -> Outcome {
    const HORIZON: u64 = 100_000;
    const TAIL: u64 = 1000;
    for q in [2u64, 3, 5, 7] {
        let h = HitSet::from_predicate(HORIZON, |n| n % q == 0);
        let lower = lower_density(&h, TAIL).map_err(text)?.estimate;
        let banach = upper_banach_density(&h, &[TAIL, 10 * TAIL]).map_err(text)?;
        let want = 1.0 / q as f64;
        ensure((lower - want).abs() <= 1.0 / TAIL as f64, || {
            format!("q = {q}: lower {lower}")
        })?;
        for w in &banach.profile {
            ensure((w.density - want).abs() <= 1.0 / TAIL as f64, || {
                format!("q = {q}: Banach {} at length {}", w.density, w.length)
            })?;
        }
    }
    let top = 1u64 << 16;
    let blocks = HitSet::from_predicate(top, |n| (0..=16).any(|k| n >= 1 << k && n <= (1 << k) + k));
    let lower = lower_density(&blocks, TAIL).map_err(text)?.estimate;
    ensure(lower <= 0.01, || format!("block set lower density {lower}"))?;
    let banach = upper_banach_density(&blocks, &[4, 8, 16]).map_err(text)?;
    for w in &banach.profile {
        ensure(w.density == 1.0, || {
            format!("block set Banach {} at length {}", w.density, w.length)
        })?;
    }
    Ok(format!(
        "periodic q in {{2,3,5,7}} within 1/{TAIL}; blocks: lower {lower:.4}, Banach 1 at lengths 4, 8, 16"
    ))
}

fn hit_transport() -> Outcome {
    const TRIPLES: u64 = 240;
    const N_MAX: u64 = 40;
    let mut hits = 0;
    for i in 0..TRIPLES {
        let mut r = rng(10_000 + i);
        let p = [1.0, 2.0, 3.0][i as usize % 3];
        let bounds = SampleBounds {
            window: 64,
            max_cells: 3,
            max_distortion: 1.0,
            exponent: p,
        };
        let tower =
            tower_from_profile(&sample_recipe(Family::ALL[i as usize % 4], &mut r, &bounds)).map_err(text)?;
        ensure(tower.star().distortion == 1.0, || {
            format!("triple {i}: K = {}", tower.star().distortion)
        })?;
        let (lo, hi) = random_span(&mut r, -12, 12, 6);
        let phi = random_tower_function(&mut r, &tower, lo, hi).map_err(text)?;
        let norm = phi.p_norm(p).map_err(text)?;
        if norm == 0.0 {
            continue;
        }
        let delta = norm * r.gen_range((1e-3f64).ln()..=(2.5f64).ln()).exp();
        let upstairs = recurrence_hits(
            &CompositionOperator::new(Arc::clone(&tower)),
            &phi,
            delta,
            N_MAX,
            None,
        )
        .map_err(text)?;
        let shift = WeightedShift::new(Arc::new(derive_weights(&tower).map_err(text)?), p).map_err(text)?;
        let y = factor_map(&tower, &phi).map_err(text)?;
        let downstairs = recurrence_hits(&shift, &y, delta, N_MAX, None).map_err(text)?;
        ensure(upstairs.is_subset_of(&downstairs), || {
            format!(
                "triple {i}: {:?} not inside {:?}",
                upstairs.hits(),
                downstairs.hits()
            )
        })?;
        hits += upstairs.len();
    }
    ensure(hits > 0, || "no hits at all; the check is vacuous".into())?;
    Ok(format!("{TRIPLES} triples, {hits} upstairs hits all transported"))
}

fn reports_for(command: Command, config: &Config, threads: usize) -> Result<Vec<(String, String)>, String> {
    let dir = tempfile::tempdir().map_err(text)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(text)?;
    let outcome = pool
        .install(|| run_config(command, config.clone(), &Overrides::default(), dir.path()))
        .map_err(text)?;
    let report =
        Report::from_json(&std::fs::read_to_string(&outcome.report_path).map_err(text)?).map_err(text)?;
    let mut files = vec![("body".to_string(), report.body.to_string())];
    for path in &outcome.files {
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        files.push((name, std::fs::read_to_string(path).map_err(text)?));
    }
    Ok(files)
}

fn determinism() -> Outcome {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let load = |name: &str| Config::load(&configs.join(name)).map_err(text);
    let cases = [
        (Command::Classify, load("geometric.json")?),
        (Command::Classify, load("harmonic.json")?),
        (Command::Orbit, load("fixed_point_orbit.json")?),
        (Command::Orbit, load("unit_orbit.json")?),
        (
            Command::ConjugacyCheck,
            config(
                r#"{ "seed": 8, "conjugacy": { "trials": 300, "max_cells": 3, "max_distortion": 2.0 } }"#,
            )?,
        ),
        (
            Command::Sweep,
            config(
                r#"{ "seed": 8, "sweep": { "profiles": ["geometric", "flat", "harmonic", "random_distorted"],
                                           "seeds": 15, "max_cells": 3, "max_distortion": 2.0 } }"#,
            )?,
        ),
    ];
    for (command, config) in &cases {
        let first = reports_for(*command, config, 1)?;
        let second = reports_for(*command, config, 4)?;
        ensure(first == second, || {
            format!("{} differs between runs", command.name())
        })?;
    }
    Ok(format!(
        "{} runs of classify, orbit, conjugacy-check, sweep repeated with 1 and 4 threads: identical bodies and CSVs",
        cases.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("semiconjugacy residual", semiconjugacy),
        ("lift isometry and right inverse", lift_isometry),
        ("weights round trip", weights_round_trip),
        ("criterion witnesses", witnesses),
        ("sweep classification invariants", sweep_consistency),
        ("harmonic separation", harmonic_separation),
        ("chaos oracle agreement", chaos_oracle),
        ("density calculators", densities),
        ("hit transport at K = 1", hit_transport),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (result, elapsed) = timed(|| catch_unwind(AssertUnwindSafe(check)));
        let result = result.unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {reason} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
