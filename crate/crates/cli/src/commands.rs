use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use learncomp::classes::{default_schedule, materialize_with_budget, ClassSpec, FiniteClass, IndexedClass, Window};
use learncomp::dimensions::{
    compute_with_budget, escape_witness, saturation_scan, teaching_dim_with_budget, tree_witness, Certificate,
    DimensionError, DimensionReport, Labeling, LdimSolver, Measure, ScanReport, TeachingSet, TreeWitness,
    DEFAULT_STEP_BUDGET,
};
use learncomp::games::{
    pac_experiment, play_online_game, sample_size_bound, Adversary, ConstantLearner, Distribution, GameTranscript,
    Learner, MajorityFlipAdversary, PacConfig, PacReport, RandomConsistentAdversary, RandomLearner, SoaLearner,
    TreeAdversary,
};
use learncomp::reduction::{agreement_check, budgeted_vc_decider, class_code, halting_from_vc, AgreementReport};
use learncomp::turing::fixtures::{self, Fixture};
use learncomp::turing::{parse_tm, run_bounded, RunResult, TuringMachine};
use learncomp::{Concept, DeciderVerdict, HaltingVerdict};
use serde::Serialize;

use crate::output::{emit, Report};
use crate::{AdversaryKind, ClassArgs, Global, LabelingKind, LearnerKind, EXIT_BUDGET, EXIT_ERROR, EXIT_STILL_RUNNING};

const DEFAULT_MACHINE_BUDGET: u64 = 10_000;
const DEFAULT_WINDOW: u64 = 5;
const MAX_HYPERCUBE: u32 = 16;

fn read_machine(path: &Path) -> Result<TuringMachine> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_tm(&text).with_context(|| format!("{}", path.display()))
}

enum Source {
    Indexed(IndexedClass),
    Hypercube(u32),
}

fn load_class(spec: &str) -> Result<Source> {
    if let Some(k) = spec.strip_prefix("hypercube:") {
        let k: u32 = k.parse().with_context(|| format!("bad hypercube size `{k}`"))?;
        if k > MAX_HYPERCUBE {
            bail!("hypercube size {k} is above the limit of {MAX_HYPERCUBE}");
        }
        return Ok(Source::Hypercube(k));
    }
    let spec: ClassSpec = match spec.strip_prefix('@') {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            serde_json::from_str(&text).with_context(|| format!("class spec in {path}"))?
        }
        None => spec.parse()?,
    };
    Ok(Source::Indexed(spec.build()?))
}

fn window_of(args: &ClassArgs) -> Window {
    let n = args.window.unwrap_or(DEFAULT_WINDOW);
    match args.indices {
        Some(m) => Window::new(n, m),
        None => Window::saturating(n),
    }
}

struct Loaded {
    name: String,
    fc: FiniteClass,
    indexed: Option<IndexedClass>,
}

fn load_finite(g: &Global, args: &ClassArgs) -> Result<Loaded> {
    match load_class(&args.class)? {
        Source::Hypercube(k) => Ok(Loaded {
            name: args.class.clone(),
            fc: FiniteClass::hypercube(k),
            indexed: None,
        }),
        Source::Indexed(class) => {
            let fc = materialize_with_budget(&class, window_of(args), g.eval_budget).map_err(DimensionError::from)?;
            Ok(Loaded {
                name: class.name().to_owned(),
                fc,
                indexed: Some(class),
            })
        }
    }
}

/// Position of the concept that index `m` gives on the window.
fn concept_position(loaded: &Loaded, m: u64) -> Result<usize> {
    let fc = &loaded.fc;
    let found = match &loaded.indexed {
        Some(class) => {
            let row: Vec<bool> = fc.domain().iter().map(|&n| class.eval(m, n)).collect();
            fc.concept_of(&row)
        }
        None => fc.witnesses().iter().position(|&w| w == m),
    };
    found.ok_or_else(|| anyhow!("index {m} does not name a concept of this class"))
}

fn search_budget(g: &Global) -> u64 {
    g.budget.unwrap_or(DEFAULT_STEP_BUDGET)
}

fn bits(row: &[bool]) -> String {
    row.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

// ---- simulate

#[derive(Serialize)]
struct SimulateReport {
    machine: PathBuf,
    budget: u64,
    result: RunResult,
}

impl Report for SimulateReport {
    fn text(&self) -> String {
        format!("{}\n", self.result)
    }

    fn csv(&self) -> String {
        match self.result {
            RunResult::Halted { steps } => format!("status,steps\nhalted,{steps}\n"),
            RunResult::StillRunning { budget } => format!("status,steps\nstill_running,{budget}\n"),
        }
    }
}

pub fn simulate(g: &Global, path: &Path) -> Result<u8> {
    let tm = read_machine(path)?;
    let budget = g.budget.unwrap_or(DEFAULT_MACHINE_BUDGET);
    let result = run_bounded(&tm, budget);
    emit(
        &SimulateReport {
            machine: path.to_owned(),
            budget,
            result,
        },
        g.format,
        g.out.as_deref(),
    )?;
    Ok(match result {
        RunResult::Halted { .. } => 0,
        RunResult::StillRunning { .. } => EXIT_STILL_RUNNING,
    })
}

// ---- dim

#[derive(Serialize)]
struct WindowDim {
    class: String,
    #[serde(flatten)]
    report: DimensionReport,
}

impl Report for WindowDim {
    fn text(&self) -> String {
        let r = &self.report;
        let window = r.window.map_or_else(|| "full class".to_string(), |w| w.to_string());
        format!("{} = {} on {window}, {} concepts\n", r.measure, r.value, r.class_size)
    }

    fn csv(&self) -> String {
        let r = &self.report;
        let (n, m) = r.window.map_or((String::new(), String::new()), |w| {
            (w.domain_max.to_string(), w.index_count.to_string())
        });
        format!("domain_max,index_count,value,class_size\n{n},{m},{},{}\n", r.value, r.class_size)
    }
}

impl Report for ScanReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(s, "{}: {} = {} ({} concepts)", e.window, self.measure, e.value, e.class_size);
        }
        if let Some(why) = &self.stopped {
            let _ = writeln!(s, "stopped early: {why}");
        }
        if let Some(last) = self.entries.last() {
            let state = if self.stabilized { "stabilized" } else { "not stabilized" };
            let _ = writeln!(s, "{}: {state} value {}", self.class, last.value);
        }
        if let Some(k) = self.closed_form {
            let _ = writeln!(s, "closed form: {k}");
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("domain_max,index_count,value,class_size\n");
        for e in &self.entries {
            let _ = writeln!(s, "{},{},{},{}", e.window.domain_max, e.window.index_count, e.value, e.class_size);
        }
        s
    }
}

fn parse_schedule(s: &str) -> Result<Vec<Window>> {
    if s == "default" {
        return Ok(default_schedule());
    }
    s.split(',')
        .map(|n| {
            n.trim()
                .parse::<u64>()
                .map(Window::saturating)
                .with_context(|| format!("bad schedule entry `{n}`"))
        })
        .collect()
}

pub fn dim(g: &Global, args: &ClassArgs, measure: Measure, schedule: Option<&str>) -> Result<u8> {
    let budget = search_budget(g);
    let single = args.window.is_some() || args.class.starts_with("hypercube:");
    if single {
        let loaded = load_finite(g, args)?;
        let report = compute_with_budget(&loaded.fc, measure, budget)?;
        return emit(
            &WindowDim {
                class: loaded.name,
                report,
            },
            g.format,
            g.out.as_deref(),
        )
        .map(|()| 0);
    }
    let Source::Indexed(class) = load_class(&args.class)? else {
        unreachable!("hypercubes are handled above")
    };
    let schedule = parse_schedule(schedule.unwrap_or("default"))?;
    let report = saturation_scan(&class, measure, &schedule, g.eval_budget, budget)?;
    emit(&report, g.format, g.out.as_deref())?;
    Ok(if report.complete { 0 } else { EXIT_BUDGET })
}

// ---- teach

#[derive(Serialize)]
struct TeachReport {
    class: String,
    window: Option<Window>,
    teaching_dim: Option<u32>,
    sets: Vec<TeachingSet>,
}

impl Report for TeachReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for t in &self.sets {
            let examples: Vec<String> = t.examples.iter().map(|&(x, y)| format!("({x},{})", u8::from(y))).collect();
            let _ = writeln!(s, "index {}: {{{}}} size {}", t.witness, examples.join(", "), t.size());
        }
        if let Some(d) = self.teaching_dim {
            let _ = writeln!(s, "teaching dimension: {d}");
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("witness,point,label\n");
        for t in &self.sets {
            for &(x, y) in &t.examples {
                let _ = writeln!(s, "{},{x},{}", t.witness, u8::from(y));
            }
        }
        s
    }
}

#[derive(Serialize)]
struct EscapeReport {
    sample: Vec<u64>,
    threshold: u64,
}

impl Report for EscapeReport {
    fn text(&self) -> String {
        format!("threshold at {} fits every zero label and is not the zero function\n", self.threshold)
    }

    fn csv(&self) -> String {
        format!("threshold\n{}\n", self.threshold)
    }
}

pub fn teach(g: &Global, args: Option<&ClassArgs>, witness: Option<u64>, escape: Option<Vec<u64>>) -> Result<u8> {
    if let Some(sample) = escape {
        let labelled: Vec<(u64, bool)> = sample.iter().map(|&x| (x, false)).collect();
        let Concept::Threshold(threshold) = escape_witness(&labelled)? else {
            unreachable!("escape witnesses are thresholds")
        };
        emit(&EscapeReport { sample, threshold }, g.format, g.out.as_deref())?;
        return Ok(0);
    }
    let args = args.ok_or_else(|| anyhow!("teach needs --class or --escape"))?;
    let loaded = load_finite(g, args)?;
    let report = teaching_dim_with_budget(&loaded.fc, search_budget(g))?;
    let Certificate::TeachingSets { sets } = report.certificate else {
        unreachable!("teaching reports carry teaching sets")
    };
    let (sets, teaching_dim) = match witness {
        Some(m) => {
            let c = concept_position(&loaded, m)?;
            let mut set = sets[c].clone();
            set.witness = m;
            (vec![set], None)
        }
        None => (sets, Some(report.value)),
    };
    emit(
        &TeachReport {
            class: loaded.name,
            window: loaded.fc.window(),
            teaching_dim,
            sets,
        },
        g.format,
        g.out.as_deref(),
    )?;
    Ok(0)
}

// ---- tree

#[derive(Serialize)]
struct TreeReport {
    class: String,
    verified: bool,
    #[serde(flatten)]
    witness: TreeWitness,
}

impl Report for TreeReport {
    fn text(&self) -> String {
        let t = &self.witness.tree;
        let layers: Vec<u64> = (0..t.depth()).map(|k| t.labels()[(1 << k) - 1]).collect();
        format!(
            "depth {} tree for {}: layers {layers:?}, {} paths verified\n",
            t.depth(),
            self.class,
            self.witness.path_indices.len()
        )
    }

    fn csv(&self) -> String {
        let mut s = String::from("path,answers,index\n");
        for (p, m) in self.witness.path_indices.iter().enumerate() {
            let _ = writeln!(s, "{p},{},{m}", bits(&self.witness.tree.path(p as u64)));
        }
        s
    }
}

pub fn tree(g: &Global, args: &ClassArgs, depth: u32, labeling: LabelingKind, scan_limit: u64) -> Result<u8> {
    let Source::Indexed(class) = load_class(&args.class)? else {
        bail!("tree witnesses need an indexed class");
    };
    let labeling = match labeling {
        LabelingKind::Layer => Labeling::ByLayerIndex,
        LabelingKind::Active => Labeling::ActiveIndices { scan_limit },
    };
    let witness = tree_witness(&class, depth, labeling)?;
    witness.verify(&class)?;
    emit(
        &TreeReport {
            class: class.name().to_owned(),
            verified: true,
            witness,
        },
        g.format,
        g.out.as_deref(),
    )?;
    Ok(0)
}

// ---- game

#[derive(Serialize)]
struct GameReport {
    class: String,
    window: Option<Window>,
    ldim: u32,
    #[serde(flatten)]
    transcript: GameTranscript,
}

impl Report for GameReport {
    fn text(&self) -> String {
        format!("mistakes: {}, Ldim: {}\n", self.transcript.mistakes, self.ldim)
    }

    fn csv(&self) -> String {
        let mut s = String::from("round,point,prediction,label,witness\n");
        for (t, r) in self.transcript.rounds.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                t + 1,
                r.point,
                u8::from(r.prediction),
                u8::from(r.label),
                r.witness
            );
        }
        s
    }
}

pub fn game(g: &Global, args: &ClassArgs, learner: LearnerKind, adversary: AdversaryKind, rounds: usize) -> Result<u8> {
    let loaded = load_finite(g, args)?;
    let fc = &loaded.fc;
    let mut solver = LdimSolver::with_budget(fc, search_budget(g));
    let all = solver.all();
    let ldim = solver.ldim(&all)?;
    let mut learner: Box<dyn Learner> = match learner {
        LearnerKind::Soa => Box::new(SoaLearner::new(fc)),
        LearnerKind::Constant0 => Box::new(ConstantLearner(false)),
        LearnerKind::Constant1 => Box::new(ConstantLearner(true)),
        LearnerKind::Random => Box::new(RandomLearner::new(g.seed)),
    };
    let mut adversary: Box<dyn Adversary> = match adversary {
        AdversaryKind::Tree => Box::new(TreeAdversary::new(fc, solver.tree(&all, ldim)?)?),
        AdversaryKind::RandomConsistent => Box::new(RandomConsistentAdversary::new(fc, g.seed.wrapping_add(1))),
        AdversaryKind::MajorityFlip => Box::new(MajorityFlipAdversary::new(fc)),
    };
    let transcript = play_online_game(fc, learner.as_mut(), adversary.as_mut(), rounds)?;
    emit(
        &GameReport {
            class: loaded.name,
            window: fc.window(),
            ldim,
            transcript,
        },
        g.format,
        g.out.as_deref(),
    )?;
    Ok(0)
}

// ---- pac

#[derive(Serialize)]
struct PacOutput {
    class: String,
    window: Option<Window>,
    vc_dim: u32,
    sample_size_bound: u64,
    #[serde(flatten)]
    report: PacReport,
}

impl Report for PacOutput {
    fn text(&self) -> String {
        let r = &self.report;
        let mut s = format!(
            "VCdim {}, bound m = {} for epsilon {} delta {}, {} trials\n",
            self.vc_dim, self.sample_size_bound, r.epsilon, r.delta, r.trials
        );
        let _ = writeln!(s, "{:>8} {:>10} {:>10} {:>10}", "m", "successes", "frequency", "mean_err");
        for row in &r.rows {
            let _ = writeln!(
                s,
                "{:>8} {:>10} {:>10.4} {:>10.4}",
                row.sample_size, row.successes, row.frequency, row.mean_error
            );
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("sample_size,successes,frequency,mean_error\n");
        for row in &self.report.rows {
            let _ = writeln!(s, "{},{},{},{}", row.sample_size, row.successes, row.frequency, row.mean_error);
        }
        s
    }
}

pub fn pac(
    g: &Global,
    args: &ClassArgs,
    target: Option<u64>,
    epsilon: f64,
    delta: f64,
    trials: usize,
    sizes: Option<Vec<usize>>,
) -> Result<u8> {
    let loaded = load_finite(g, args)?;
    let fc = &loaded.fc;
    let vc_dim = compute_with_budget(fc, Measure::Vc, search_budget(g))?.value;
    let bound = sample_size_bound(vc_dim, epsilon, delta)?;
    let target = match target {
        Some(m) => concept_position(&loaded, m)?,
        None => fc.len() - 1,
    };
    let config = PacConfig {
        epsilon,
        delta,
        trials,
        sample_sizes: sizes.unwrap_or_else(|| vec![bound as usize]),
        seed: g.seed,
    };
    let report = pac_experiment(fc, target, &Distribution::uniform(fc), &config)?;
    emit(
        &PacOutput {
            class: loaded.name,
            window: fc.window(),
            vc_dim,
            sample_size_bound: bound,
            report,
        },
        g.format,
        g.out.as_deref(),
    )?;
    Ok(0)
}

// ---- reduce

#[derive(Serialize)]
struct ReduceReport {
    machine: PathBuf,
    budget: u64,
    code_bytes: usize,
    decider: DeciderVerdict,
    verdict: HaltingVerdict,
}

impl Report for ReduceReport {
    fn text(&self) -> String {
        format!("{}\n", self.verdict)
    }

    fn csv(&self) -> String {
        match self.verdict {
            HaltingVerdict::Halts { vc_dim } => format!("verdict,vc_dim\nhalts,{vc_dim}\n"),
            HaltingVerdict::NoAnswer => "verdict,vc_dim\nno_answer,\n".into(),
        }
    }
}

pub fn reduce(g: &Global, path: &Path) -> Result<u8> {
    let tm = read_machine(path)?;
    let budget = g.budget.unwrap_or(DEFAULT_MACHINE_BUDGET);
    let code = class_code(&tm);
    let decider = budgeted_vc_decider(&code, budget)?;
    let verdict = halting_from_vc(|_| Ok::<_, anyhow::Error>(decider), &tm)?;
    emit(
        &ReduceReport {
            machine: path.to_owned(),
            budget,
            code_bytes: code.as_bytes().len(),
            decider,
            verdict,
        },
        g.format,
        g.out.as_deref(),
    )?;
    Ok(0)
}

// ---- suite

impl Report for AgreementReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let mark = if e.agrees { "" } else { "  DISAGREES" };
            let _ = writeln!(s, "{:<16} {:<20} {}{mark}", e.name, e.verdict.to_string(), e.direct);
        }
        let _ = writeln!(
            s,
            "{} machines: {} Halts, {} NoAnswer, {} disagreements",
            self.entries.len(),
            self.halts,
            self.no_answer,
            self.disagreements
        );
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("name,verdict,direct,agrees\n");
        for e in &self.entries {
            let _ = writeln!(s, "{},{},{},{}", e.name, e.verdict, e.direct, e.agrees);
        }
        s
    }
}

pub fn suite(g: &Global, paths: &[PathBuf]) -> Result<u8> {
    let machines: Vec<Fixture> = if paths.is_empty() {
        fixtures::suite()
    } else {
        paths
            .iter()
            .map(|p| {
                Ok(Fixture {
                    name: p.display().to_string(),
                    machine: read_machine(p)?,
                    halts_at: None,
                })
            })
            .collect::<Result<_>>()?
    };
    let report = agreement_check(&machines, g.budget.unwrap_or(DEFAULT_MACHINE_BUDGET));
    emit(&report, g.format, g.out.as_deref())?;
    Ok(if report.disagreements == 0 { 0 } else { EXIT_ERROR })
}
