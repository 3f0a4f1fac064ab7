//! Threshold arithmetic and seeded Monte-Carlo experiments on `G(n, p)`.
//!
//! Trials are indexed by (cell, trial) and draw their own seed from the run
//! seed, so a run is reproducible bit for bit and the parallel path merges
//! to exactly the sequential output.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::breaker::deterministic_breaker;
use crate::copies::{enumerate_copies, enumerate_copies_capped};
use crate::density::{d2, is_strictly_2_balanced, two_density};
use crate::error::{HgameError, Result};
use crate::game::{build_h_game, play, EsBreaker, GameState, GraphGame, GreedyMaker, Player, RandomStrategy, SmallestFirst, Strategy};
use crate::graph::{gnp_sample, Graph, SampleSpec};
use crate::hcore::{composite_breaker, core_components, preprocess, BaseStrategy};
use crate::maker::{hp_construct, hp_phase_maker, triangle_maker_on_k5minus, PhaseConfig};
use crate::rational::Ratio;
use crate::solver::{optimal_strategy_with_cap, solve_with_cap, DEFAULT_CAP};

pub const SCHEMA_VERSION: u32 = 1;

/// `1 / m2(H)`.
pub fn threshold_exponent(h: &Graph) -> Result<Ratio> {
    let (m2, _) = two_density(h)?;
    Ok(m2.recip())
}

fn is_tree(g: &Graph) -> bool {
    g.is_connected() && g.edge_count() + 1 == g.vertex_count()
}

fn is_triangle(g: &Graph) -> bool {
    g.vertex_count() == 3 && g.edge_count() == 3
}

/// A subgraph `H'` with `d2(H') = m2(H)` that is strictly 2-balanced and is
/// neither a tree nor a triangle, given by edge ids of `h`.
pub fn main_theorem_witness(h: &Graph) -> Result<Option<Vec<usize>>> {
    let m = h.edge_count();
    if m > 16 {
        return Err(HgameError::Capability(format!(
            "checking every subgraph of a {m}-edge pattern is out of reach"
        )));
    }
    let (m2, _) = two_density(h)?;
    for mask in (1u32..(1 << m)).rev() {
        let ids: Vec<usize> = (0..m).filter(|&e| mask & (1 << e) != 0).collect();
        let (sub, _) = h.compact_edge_subgraph(&ids);
        if sub.vertex_count() < 3 || is_tree(&sub) || is_triangle(&sub) {
            continue;
        }
        if d2(&sub)? == m2 && is_strictly_2_balanced(&sub)? {
            return Ok(Some(ids));
        }
    }
    Ok(None)
}

/// `min(5/9, 1 / m2(H))` for patterns covered by the main theorem.
pub fn hp_threshold_exponent(h: &Graph) -> Result<Ratio> {
    if main_theorem_witness(h)?.is_none() {
        return Err(HgameError::Precondition(
            "no subgraph H' with d2(H') = m2(H) is strictly 2-balanced and neither a tree nor a triangle".into(),
        ));
    }
    Ok(threshold_exponent(h)?.min(Ratio::new(5, 9)))
}

/// Edge probabilities of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PGrid {
    /// `c * n^(-exponent)` for each multiplier `c`.
    Scaled {
        #[serde(with = "crate::rational::as_str")]
        exponent: Ratio,
        multipliers: Vec<f64>,
    },
    Explicit(Vec<f64>),
}

impl PGrid {
    /// `(p, multiplier)` pairs for order `n`.
    pub fn values(&self, n: usize) -> Vec<(f64, Option<f64>)> {
        match self {
            PGrid::Scaled { exponent, multipliers } => {
                let t = *exponent.numer() as f64 / *exponent.denom() as f64;
                multipliers
                    .iter()
                    .map(|&c| ((c * (n as f64).powf(-t)).min(1.0), Some(c)))
                    .collect()
            }
            PGrid::Explicit(ps) => ps.iter().map(|&p| (p, None)).collect(),
        }
    }

    fn len(&self) -> usize {
        match self {
            PGrid::Scaled { multipliers, .. } => multipliers.len(),
            PGrid::Explicit(ps) => ps.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub pattern: Graph,
    pub ns: Vec<usize>,
    pub grid: PGrid,
    pub trials: usize,
    pub seed: u64,
    /// Strategy names for full games.
    pub maker: String,
    pub breaker: String,
    pub first: Player,
    /// Largest live board handed to the exact solver.
    pub cap: usize,
    /// Random Makers replayed against the composite Breaker per certified
    /// trial.
    pub audit_games: usize,
    /// Play the `H_P`-game instead of the `H`-game in full games.
    pub hp_game: bool,
}

impl ExperimentConfig {
    /// Certificate defaults: `p = 0.1 n^(-1/m2(H))`.
    pub fn certificate(pattern: Graph, ns: Vec<usize>, trials: usize, seed: u64) -> Result<Self> {
        let exponent = threshold_exponent(&pattern)?;
        Ok(ExperimentConfig {
            pattern,
            ns,
            grid: PGrid::Scaled {
                exponent,
                multipliers: vec![0.1],
            },
            trials,
            seed,
            maker: "random".into(),
            breaker: "composite".into(),
            first: Player::Maker,
            cap: DEFAULT_CAP,
            audit_games: 10,
            hp_game: false,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(HgameError::InvalidInput("trials must be at least 1".into()));
        }
        if self.ns.is_empty() || self.grid.len() == 0 {
            return Err(HgameError::InvalidInput("empty n list or p grid".into()));
        }
        for &n in &self.ns {
            for (p, _) in self.grid.values(n) {
                if !(p > 0.0 && p < 1.0) && p != 0.0 {
                    return Err(HgameError::InvalidInput(format!("p = {p} for n = {n} is outside (0, 1)")));
                }
            }
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, f64, Option<f64>)> {
        self.ns
            .iter()
            .flat_map(|&n| self.grid.values(n).into_iter().map(move |(p, c)| (n, p, c)))
            .collect()
    }
}

/// How trials are run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Worker threads; 0 lets the pool decide. Without the `parallel`
    /// feature this runs sequentially.
    Parallel { jobs: usize },
}

fn run_all<T, F>(tasks: &[(usize, usize)], exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => Ok(tasks.iter().map(|&(c, t)| f(c, t)).collect()),
        #[cfg(feature = "parallel")]
        Execution::Parallel { jobs } => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| HgameError::Internal(format!("thread pool: {e}")))?;
            Ok(pool.install(|| tasks.par_iter().map(|&(c, t)| f(c, t)).collect()))
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel { .. } => Ok(tasks.iter().map(|&(c, t)| f(c, t)).collect()),
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of trial `trial` in cell `cell`.
pub fn trial_seed(seed: u64, cell: usize, trial: usize) -> u64 {
    splitmix64(seed ^ splitmix64(((cell as u64) << 32) ^ trial as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Breaker,
    Maker,
    Uncertified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub edges: usize,
    pub verdict: Verdict,
    pub component_sizes: Vec<usize>,
    /// Why the trial is uncertified, or which game forfeited.
    pub notes: Vec<String>,
    pub audit_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: usize,
    pub p: f64,
    pub c: Option<f64>,
    pub trials: usize,
    pub breaker_wins: usize,
    pub maker_wins: usize,
    pub uncertified: usize,
    pub max_component: usize,
    /// Component size in edges to number of components.
    pub component_histogram: BTreeMap<usize, usize>,
    pub audit_failures: usize,
    pub records: Vec<TrialRecord>,
    pub wall_ms: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// Winners proven by exact solving.
    Certified,
    /// Win rates of named strategies; depends on the strategies.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCurve {
    pub schema_version: u32,
    pub kind: CurveKind,
    pub pattern: Graph,
    pub seed: u64,
    pub maker: Option<String>,
    pub breaker: Option<String>,
    pub cells: Vec<CellResult>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    schema_version: u32,
    kind: &'a str,
    n: usize,
    p: f64,
    c: Option<f64>,
    trials: usize,
    breaker_wins: usize,
    maker_wins: usize,
    uncertified: usize,
    max_component: usize,
    audit_failures: usize,
    wall_ms: u128,
}

impl ThresholdCurve {
    /// One row per cell.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let kind = match self.kind {
            CurveKind::Certified => "certified",
            CurveKind::Heuristic => "heuristic",
        };
        for c in &self.cells {
            w.serialize(CsvRow {
                schema_version: self.schema_version,
                kind,
                n: c.n,
                p: c.p,
                c: c.c,
                trials: c.trials,
                breaker_wins: c.breaker_wins,
                maker_wins: c.maker_wins,
                uncertified: c.uncertified,
                max_component: c.max_component,
                audit_failures: c.audit_failures,
                wall_ms: c.wall_ms,
            })
            .map_err(|e| HgameError::Internal(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| HgameError::Internal(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| HgameError::Internal(format!("csv: {e}")))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The same curve with wall times zeroed, for comparing runs.
    pub fn without_timing(mut self) -> Self {
        for c in &mut self.cells {
            c.wall_ms = 0;
        }
        self
    }
}

fn aggregate(cells: &[(usize, f64, Option<f64>)], records: Vec<(usize, TrialRecord, u128)>) -> Vec<CellResult> {
    let mut out: Vec<CellResult> = cells
        .iter()
        .map(|&(n, p, c)| CellResult {
            n,
            p,
            c,
            trials: 0,
            breaker_wins: 0,
            maker_wins: 0,
            uncertified: 0,
            max_component: 0,
            component_histogram: BTreeMap::new(),
            audit_failures: 0,
            records: Vec::new(),
            wall_ms: 0,
        })
        .collect();
    for (cell, r, ms) in records {
        let c = &mut out[cell];
        c.trials += 1;
        c.wall_ms += ms;
        match r.verdict {
            Verdict::Breaker => c.breaker_wins += 1,
            Verdict::Maker => c.maker_wins += 1,
            Verdict::Uncertified => c.uncertified += 1,
        }
        for &s in &r.component_sizes {
            *c.component_histogram.entry(s).or_default() += 1;
            c.max_component = c.max_component.max(s);
        }
        c.audit_failures += r.audit_failures;
        c.records.push(r);
    }
    out
}

fn tasks(cells: usize, trials: usize) -> Vec<(usize, usize)> {
    (0..cells).flat_map(|c| (0..trials).map(move |t| (c, t))).collect()
}

/// Decides one sampled instance by exact solving of its core components.
///
/// In the composite strategy Breaker only ever answers inside the component
/// Maker just played in, so each component is solved with Maker moving
/// first. All components Breaker wins certify a Breaker win for the whole
/// board; one component Maker wins certifies a Maker win, since Maker can
/// stay inside it.
pub fn certify_instance(g: &Graph, h: &Graph, seed: u64, cap: usize, audit_games: usize) -> Result<TrialRecord> {
    let pre = preprocess(g, h, seed);
    let components = core_components(g, &pre.core_edges, h)?;
    let mut record = TrialRecord {
        seed,
        edges: g.edge_count(),
        verdict: Verdict::Breaker,
        component_sizes: components.iter().map(|c| c.edges.len()).collect(),
        notes: Vec::new(),
        audit_failures: 0,
    };
    let mut oversized = false;
    for (i, comp) in components.iter().enumerate() {
        let (local, _) = g.compact_edge_subgraph(&comp.edges);
        let system = build_h_game(&local, h);
        match solve_with_cap(&system, Player::Maker, cap) {
            Ok(out) if out.winner == Player::Maker => {
                record.verdict = Verdict::Maker;
                record.notes.push(format!("component {i} ({} edges) is a Maker win", comp.edges.len()));
            }
            Ok(_) => {}
            Err(HgameError::Capability(msg)) => {
                oversized = true;
                record.notes.push(format!("component {i} refused: {msg}"));
            }
            Err(e) => return Err(e),
        }
    }
    if record.verdict == Verdict::Breaker && oversized {
        record.verdict = Verdict::Uncertified;
    }
    if record.verdict == Verdict::Breaker && audit_games > 0 {
        let game = GraphGame {
            g: g.clone(),
            h: h.clone(),
        };
        let copies = enumerate_copies(g, h);
        for k in 0..audit_games {
            let (mut breaker, _) = composite_breaker(g, h, &pre, BaseStrategy::Solver, cap)?;
            let mut maker = RandomStrategy::new(seed ^ splitmix64(k as u64 + 1));
            let r = play(&game, &mut maker, &mut breaker, Player::Maker);
            let end = GameState::replay(g.edge_count(), Player::Maker, &r.transcript)?;
            let covered = copies
                .iter()
                .all(|c| c.edge_ids.iter().any(|&e| end.owner(e) == Some(Player::Breaker)));
            if r.winner != Player::Breaker || !covered {
                record.audit_failures += 1;
                record.notes.push(format!("audit game {k}: Maker completed a copy"));
            }
        }
    }
    Ok(record)
}

/// Samples `G(n, p)` per trial and certifies the winner where exact solving
/// of every core component is within the cap.
pub fn breaker_certificate_experiment(cfg: &ExperimentConfig, exec: Execution) -> Result<ThresholdCurve> {
    cfg.validate()?;
    let cells = cfg.cells();
    let results = run_all(&tasks(cells.len(), cfg.trials), exec, |cell, trial| {
        let start = Instant::now();
        let (n, p, _) = cells[cell];
        let seed = trial_seed(cfg.seed, cell, trial);
        let g = gnp_sample(&SampleSpec::new(n, p, seed)?);
        let record = certify_instance(&g, &cfg.pattern, seed, cfg.cap, cfg.audit_games)?;
        Ok((cell, record, start.elapsed().as_millis()))
    })?;
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ThresholdCurve {
        schema_version: SCHEMA_VERSION,
        kind: CurveKind::Certified,
        pattern: cfg.pattern.clone(),
        seed: cfg.seed,
        maker: None,
        breaker: None,
        cells: aggregate(&cells, records),
    })
}

/// Strategy names accepted by [`make_strategy`].
pub const STRATEGY_NAMES: &[&str] = &[
    "random",
    "smallest",
    "greedy",
    "es",
    "solver",
    "deterministic",
    "composite",
    "hp-phase",
    "k5minus-triangle",
];

/// Builds a named strategy for `player` on the board `E(g)`. `h` is the
/// pattern whose copies are the winning sets; `hp-phase` takes the base
/// pattern and is meant for the `H_P`-game.
pub fn make_strategy(name: &str, player: Player, g: &Graph, h: &Graph, seed: u64, cap: usize) -> Result<Box<dyn Strategy>> {
    let role = |want: Player| -> Result<()> {
        if player == want {
            Ok(())
        } else {
            Err(HgameError::InvalidInput(format!("strategy {name} only plays {want:?}")))
        }
    };
    let system = || build_h_game(g, h);
    Ok(match name {
        "random" => Box::new(RandomStrategy::new(seed)),
        "smallest" => Box::new(SmallestFirst),
        "greedy" => {
            role(Player::Maker)?;
            Box::new(GreedyMaker::new(system()))
        }
        "es" => {
            role(Player::Breaker)?;
            Box::new(EsBreaker::new(system()))
        }
        "solver" => Box::new(optimal_strategy_with_cap(&system(), player, cap)?),
        "deterministic" => {
            role(Player::Breaker)?;
            Box::new(deterministic_breaker(g, h)?.0)
        }
        "composite" => {
            role(Player::Breaker)?;
            let pre = preprocess(g, h, seed);
            Box::new(composite_breaker(g, h, &pre, BaseStrategy::Solver, cap)?.0)
        }
        "hp-phase" => {
            role(Player::Maker)?;
            let n = g.vertex_count();
            let p = if n < 2 { 0.0 } else { 2.0 * g.edge_count() as f64 / (n * (n - 1)) as f64 };
            Box::new(hp_phase_maker(g, h, PhaseConfig::for_gnp(n, p))?)
        }
        "k5minus-triangle" => {
            role(Player::Maker)?;
            Box::new(triangle_maker_on_k5minus(g)?)
        }
        other => {
            return Err(HgameError::InvalidInput(format!(
                "unknown strategy {other}; known: {}",
                STRATEGY_NAMES.join(", ")
            )))
        }
    })
}

/// Plays one full game on `g` between named strategies.
pub fn play_named(cfg: &ExperimentConfig, g: &Graph, seed: u64) -> Result<TrialRecord> {
    let h = &cfg.pattern;
    let game_pattern = if cfg.hp_game { hp_construct(h, 0)? } else { h.clone() };
    let strategy_pattern = |name: &str| if name == "hp-phase" { h } else { &game_pattern };
    let mut maker = make_strategy(&cfg.maker, Player::Maker, g, strategy_pattern(&cfg.maker), seed, cfg.cap)?;
    let mut breaker = make_strategy(
        &cfg.breaker,
        Player::Breaker,
        g,
        strategy_pattern(&cfg.breaker),
        splitmix64(seed),
        cfg.cap,
    )?;
    let game = GraphGame {
        g: g.clone(),
        h: game_pattern,
    };
    let r = play(&game, &mut maker, &mut breaker, cfg.first);
    let mut notes = r.notes.clone();
    if let Some(f) = &r.forfeit {
        notes.push(format!("{:?} forfeited by claiming {}", f.player, f.attempted));
    }
    Ok(TrialRecord {
        seed,
        edges: g.edge_count(),
        verdict: match r.winner {
            Player::Maker => Verdict::Maker,
            Player::Breaker => Verdict::Breaker,
        },
        component_sizes: Vec::new(),
        notes,
        audit_failures: 0,
    })
}

/// Plays full games between named strategies in every cell. Win rates
/// describe the strategies, not the value of the game.
pub fn full_game_experiment(cfg: &ExperimentConfig, exec: Execution) -> Result<ThresholdCurve> {
    cfg.validate()?;
    let cells = cfg.cells();
    let results = run_all(&tasks(cells.len(), cfg.trials), exec, |cell, trial| {
        let start = Instant::now();
        let (n, p, _) = cells[cell];
        let seed = trial_seed(cfg.seed, cell, trial);
        let g = gnp_sample(&SampleSpec::new(n, p, seed)?);
        let record = play_named(cfg, &g, seed)?;
        Ok((cell, record, start.elapsed().as_millis()))
    })?;
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ThresholdCurve {
        schema_version: SCHEMA_VERSION,
        kind: CurveKind::Heuristic,
        pattern: cfg.pattern.clone(),
        seed: cfg.seed,
        maker: Some(cfg.maker.clone()),
        breaker: Some(cfg.breaker.clone()),
        cells: aggregate(&cells, records),
    })
}

/// Number of copies of `h` in `g`, or `None` past `limit`.
pub fn copy_count(g: &Graph, h: &Graph, limit: usize) -> Option<usize> {
    enumerate_copies_capped(g, h, limit).map(|c| c.len())
}
