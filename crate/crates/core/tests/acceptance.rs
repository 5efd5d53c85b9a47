//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod support;

use std::time::{Duration, Instant};

use learncomp::classes::{default_schedule, goedel_class, halting_class, materialize, step_class, Concept, FiniteClass, Window};
use learncomp::dimensions::{
    compute, escape_witness, littlestone_dim, teaching_set, tree_witness, Certificate, Labeling, LittlestoneTree,
    Measure,
};
use learncomp::enumeration::{index_of_pattern, pair, seq_bit, unpair};
use learncomp::formal_system::{active_index, consistent_toy, inconsistent_toy};
use learncomp::games::{
    pac_experiment, play_online_game, sample_size_bound, Adversary, ConstantLearner, Distribution, Learner,
    MajorityFlipAdversary, PacConfig, RandomConsistentAdversary, RandomLearner, SoaLearner, TreeAdversary,
};
use learncomp::reduction::{agreement_check, class_code, HaltingVerdict};
use learncomp::turing::{fixtures, parse_tm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{oracle, random_classes};

const MEASURE_LIMIT: Duration = Duration::from_secs(10);
const ORACLE_LIMIT: Duration = Duration::from_secs(60);
const TREE_LIMIT: Duration = Duration::from_secs(5);
const PAC_LIMIT: Duration = Duration::from_secs(60);
const PAC_SLACK: f64 = 0.05;
const RANDOM_SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn optimal_tree(fc: &FiniteClass) -> Result<LittlestoneTree, String> {
    match littlestone_dim(fc).map_err(|e| e.to_string())?.certificate {
        Certificate::Tree { tree } => Ok(tree),
        _ => Err("littlestone report without a tree".into()),
    }
}

fn halting_identity() -> Outcome {
    let mut slowest = Duration::ZERO;
    for k in 1..=4u64 {
        let fc = materialize(&halting_class(fixtures::chain_halter(k)), Window::saturating(k + 2))
            .map_err(|e| e.to_string())?;
        for m in Measure::ALL {
            let t = Instant::now();
            let r = compute(&fc, m).map_err(|e| e.to_string())?;
            let took = t.elapsed();
            slowest = slowest.max(took);
            ensure(u64::from(r.value) == k, || format!("K={k}: {m} = {}", r.value))?;
            ensure(took < MEASURE_LIMIT, || format!("K={k}: {m} took {took:?}"))?;
            r.verify(&fc).map_err(|e| e.to_string())?;
        }
    }
    Ok(format!("K=1..4 all measures exact, slowest {slowest:?}"))
}

fn consistency_collapse() -> Outcome {
    let class = goedel_class(consistent_toy());
    for w in default_schedule() {
        let fc = materialize(&class, w).map_err(|e| e.to_string())?;
        ensure(fc.len() == 1, || format!("{w}: {} concepts", fc.len()))?;
        for m in Measure::ALL {
            let v = compute(&fc, m).map_err(|e| e.to_string())?.value;
            ensure(v == 0, || format!("{w}: {m} = {v}"))?;
        }
    }
    Ok("1 concept and all measures 0 on every default window".into())
}

fn inconsistency_growth() -> Outcome {
    let fs = inconsistent_toy();
    let class = goedel_class(fs.clone());
    let mut values = Vec::new();
    let mut counts = Vec::new();
    for w in default_schedule() {
        let fc = materialize(&class, w).map_err(|e| e.to_string())?;
        let vc = compute(&fc, Measure::Vc).map_err(|e| e.to_string())?.value;
        let active = (0..=w.domain_max).filter(|&n| active_index(&fs, n)).count() as u32;
        ensure(vc == active, || format!("{w}: VC {vc} but {active} active indices"))?;
        values.push(vc);
        counts.push(active);
    }
    // Supplementary: the first windows past the next active indices.
    let extended: Vec<String> = [17u64, 18]
        .into_iter()
        .map(|n| {
            let v = materialize(&class, Window::saturating(n))
                .ok()
                .and_then(|fc| compute(&fc, Measure::Vc).ok())
                .map_or("?".to_string(), |r| r.value.to_string());
            format!("N={n}: {v}")
        })
        .collect();
    ensure(values.windows(2).all(|p| p[0] < p[1]), || {
        format!(
            "VC = active count holds ({values:?}), but it is not strictly increasing over N=3..7; \
             extended windows {}",
            extended.join(", ")
        )
    })?;
    Ok(format!("VC per window {values:?}"))
}

fn teaching_identities() -> Outcome {
    let fc = materialize(&step_class(), Window::new(8, 12)).map_err(|e| e.to_string())?;
    for k in 1..=3u64 {
        let c = fc
            .concept_of(&fc.row_of(&Concept::Threshold(k)))
            .ok_or_else(|| format!("threshold {k} missing"))?;
        let t = teaching_set(&fc, c).map_err(|e| e.to_string())?;
        ensure(t.examples == [(k - 1, false), (k, true)], || format!("k={k}: {:?}", t.examples))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    for _ in 0..50 {
        let len = rng.random_range(1..=10);
        let sample: Vec<(u64, bool)> = (0..len).map(|_| (rng.random_range(0..1000), false)).collect();
        let largest = sample.iter().map(|s| s.0).max().unwrap();
        match escape_witness(&sample).map_err(|e| e.to_string())? {
            Concept::Threshold(k) if k == largest + 1 => {}
            other => return Err(format!("sample max {largest}: got {other:?}")),
        }
    }
    Ok("thresholds 1..3 and 50 escape samples exact".into())
}

fn inequality_chain(classes: &[FiniteClass]) -> Outcome {
    for (i, fc) in classes.iter().enumerate() {
        let vc = compute(fc, Measure::Vc).map_err(|e| e.to_string())?.value;
        let ld = compute(fc, Measure::Littlestone).map_err(|e| e.to_string())?.value;
        let log = fc.len().ilog2();
        ensure(vc <= ld && ld <= log, || format!("class {i}: VC {vc}, Ldim {ld}, log2|C| {log}"))?;
    }
    Ok(format!("{} classes, 0 violations", classes.len()))
}

fn oracle_equivalence(classes: &[FiniteClass]) -> Outcome {
    let t = Instant::now();
    for (i, fc) in classes.iter().enumerate() {
        let got: Vec<u32> = Measure::ALL
            .iter()
            .map(|&m| compute(fc, m).map(|r| r.value))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let want = [oracle::vc(fc), oracle::ldim(fc), oracle::tdim(fc)];
        ensure(got == want, || format!("class {i}: got {got:?}, oracle {want:?}"))?;
    }
    let took = t.elapsed();
    ensure(took < ORACLE_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("{} classes, 0 disagreements, {took:?}", classes.len()))
}

fn game_bounds(classes: &[FiniteClass]) -> Outcome {
    let mut all: Vec<FiniteClass> = classes.to_vec();
    all.extend((0..=5).map(FiniteClass::hypercube));
    for (i, fc) in all.iter().enumerate() {
        let ld = compute(fc, Measure::Littlestone).map_err(|e| e.to_string())?.value as usize;
        let rounds = 3 * fc.domain().len() + 3;
        let tree = optimal_tree(fc)?;
        let adversaries: Vec<Box<dyn Adversary + '_>> = vec![
            Box::new(TreeAdversary::new(fc, tree.clone()).map_err(|e| e.to_string())?),
            Box::new(RandomConsistentAdversary::new(fc, RANDOM_SEED + i as u64)),
            Box::new(MajorityFlipAdversary::new(fc)),
        ];
        for mut adv in adversaries {
            let t = play_online_game(fc, &mut SoaLearner::new(fc), adv.as_mut(), rounds).map_err(|e| e.to_string())?;
            ensure(t.mistakes <= ld, || format!("class {i}: SOA made {} > {ld} vs {}", t.mistakes, t.adversary))?;
            t.verify(fc).map_err(|e| e.to_string())?;
        }
        let learners: Vec<Box<dyn Learner + '_>> = vec![
            Box::new(SoaLearner::new(fc)),
            Box::new(ConstantLearner(false)),
            Box::new(ConstantLearner(true)),
            Box::new(RandomLearner::new(RANDOM_SEED + i as u64)),
        ];
        for mut l in learners {
            let mut adv = TreeAdversary::new(fc, tree.clone()).map_err(|e| e.to_string())?;
            let t = play_online_game(fc, l.as_mut(), &mut adv, ld).map_err(|e| e.to_string())?;
            ensure(t.mistakes >= ld, || format!("class {i}: tree forced {} < {ld} on {}", t.mistakes, t.learner))?;
        }
    }
    Ok(format!("{} classes, 0 violations", all.len()))
}

fn tree_witnesses() -> Outcome {
    let t = Instant::now();
    let looper = halting_class(fixtures::loop_machine());
    tree_witness(&looper, 5, Labeling::ByLayerIndex)
        .and_then(|w| w.verify(&looper))
        .map_err(|e| format!("loop: {e}"))?;
    let goedel = goedel_class(inconsistent_toy());
    let w = tree_witness(&goedel, 4, Labeling::ActiveIndices { scan_limit: 10_000 })
        .map_err(|e| format!("inconsistent: {e}"))?;
    w.verify(&goedel).map_err(|e| format!("inconsistent: {e}"))?;
    let took = t.elapsed();
    ensure(took < TREE_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("loop depth 5, inconsistent depth 4 (layers {:?}), {took:?}", layers(&w.tree)))
}

fn layers(tree: &LittlestoneTree) -> Vec<u64> {
    (0..tree.depth()).map(|k| tree.labels()[(1 << k) - 1]).collect()
}

fn reduction_fidelity() -> Outcome {
    let suite = fixtures::suite();
    let halters = suite.iter().filter(|f| f.halts_at.is_some()).count();
    ensure(suite.len() == 15 && halters == 10, || format!("suite has {} machines, {halters} halters", suite.len()))?;
    let r = agreement_check(&suite, 10_000);
    ensure(r.halts == 10 && r.no_answer == 5 && r.disagreements == 0, || {
        format!("halts {}, no answer {}, disagreements {}", r.halts, r.no_answer, r.disagreements)
    })?;
    for budget in 0..=30 {
        let r = agreement_check(&suite, budget);
        for (e, f) in r.entries.iter().zip(&suite) {
            if let HaltingVerdict::Halts { vc_dim } = e.verdict {
                ensure(f.halts_at == Some(vc_dim), || format!("budget {budget}: {} answered {}", f.name, e.verdict))?;
            }
            ensure(e.agrees, || format!("budget {budget}: {} disagrees", f.name))?;
        }
    }
    Ok("10 Halts, 5 NoAnswer, sound over budgets 0..30".into())
}

fn pac_experiment_check() -> Outcome {
    let fc = FiniteClass::hypercube(3);
    let bound = sample_size_bound(3, 0.25, 0.1).map_err(|e| e.to_string())? as usize;
    let target = fc.len() - 1;
    let config = PacConfig {
        epsilon: 0.25,
        delta: 0.1,
        trials: 2000,
        sample_sizes: vec![1, 2, 4, 8, 16, 32, 64, 128, 256, bound],
        seed: RANDOM_SEED,
    };
    let t = Instant::now();
    let r = pac_experiment(&fc, target, &Distribution::uniform(&fc), &config).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    let at_bound = r.row(bound).ok_or("no row at the bound")?.frequency;
    let floor = 1.0 - config.delta - PAC_SLACK;
    ensure(at_bound >= floor, || format!("frequency {at_bound} at m={bound} below {floor}"))?;
    ensure(took < PAC_LIMIT, || format!("took {took:?}"))?;
    let freqs: Vec<f64> = r.rows.iter().map(|row| row.frequency).collect();
    ensure(freqs.windows(2).all(|p| p[1] >= p[0] - PAC_SLACK), || format!("not monotone: {freqs:?}"))?;
    Ok(format!("m={bound}: frequency {at_bound:.4} >= {floor:.2}, {took:?}"))
}

fn round_trips() -> Outcome {
    for n in 0..1_000_000u64 {
        let (i, j) = unpair(n);
        ensure(pair(i, j) == Ok(n), || format!("pair(unpair({n}))"))?;
    }
    for len in 0..=10usize {
        for bits in 0u32..1 << len {
            let pattern: Vec<bool> = (0..len).map(|b| bits >> b & 1 == 1).collect();
            let m = index_of_pattern(&pattern).map_err(|e| e.to_string())?;
            ensure((0..len).all(|n| seq_bit(m, n as u64) == pattern[n]), || format!("pattern {pattern:?}"))?;
            ensure((len..64).all(|n| !seq_bit(m, n as u64)), || format!("pattern {pattern:?} tail"))?;
        }
    }
    for f in fixtures::collection() {
        let back = parse_tm(&f.machine.to_canonical_text()).map_err(|e| e.to_string())?;
        ensure(back == f.machine, || format!("{} text round trip", f.name))?;
        let code = class_code(&f.machine);
        ensure(code.machine().map_err(|e| e.to_string())? == f.machine, || format!("{} class code", f.name))?;
        let decoded = code.decode().map_err(|e| e.to_string())?;
        let direct = halting_class(f.machine.clone());
        ensure(
            (0..60).all(|m| (0..60).all(|n| decoded.eval(m, n) == direct.eval(m, n))),
            || format!("{} decoded class differs", f.name),
        )?;
    }
    Ok("pairing < 10^6, patterns <= 10, machine and class codes exact".into())
}

fn main() {
    let classes = random_classes(500, RANDOM_SEED);
    let criteria: Vec<(&str, Check)> = vec![
        ("halting-dimension identity", Box::new(halting_identity)),
        ("consistency collapse", Box::new(consistency_collapse)),
        ("inconsistency growth", Box::new(inconsistency_growth)),
        ("teaching identities", Box::new(teaching_identities)),
        ("inequality chain", Box::new(|| inequality_chain(&classes))),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&classes))),
        ("online game bounds", Box::new(|| game_bounds(&classes[..100]))),
        ("littlestone-tree witnesses", Box::new(tree_witnesses)),
        ("reduction fidelity", Box::new(reduction_fidelity)),
        ("pac experiment", Box::new(pac_experiment_check)),
        ("encoding round-trips", Box::new(round_trips)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
