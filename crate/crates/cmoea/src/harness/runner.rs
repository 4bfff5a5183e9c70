//! Single-run driver: initialize, then loop select-action / breed / select /
//! reward / train until the next generation no longer fits the budget.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

use super::config::{RunConfig, Variant};
use crate::agent::{
    compute_reward, extract_state, DdpgAgent, StateNormalizer, Transition,
};
use crate::error::{Error, Result};
use crate::evo::{HostState, Solution};
use crate::metrics::{hypervolume, igd, IndicatorConfig};
use crate::operators::OperatorParams;
use crate::problems::{builtin, ideal_point, load_or_generate_front, nondominated_filter};

/// One trace line per generation.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub gen: usize,
    pub fe: u64,
    pub hv: f64,
    pub igd: f64,
    pub feasible_ratio: f64,
    /// Portfolio proportions (SBX, DE/rand/1, DE/best/1).
    pub action: [f64; 3],
    pub reward: f64,
    /// NaN when no training step happened this generation.
    pub critic_loss: f64,
}

/// Final-population member in a result snapshot.
#[derive(Debug, Clone)]
pub struct SnapshotMember {
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
    pub cv: f64,
}

/// Everything a finished run reports.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub problem: String,
    pub variant: String,
    pub seed: u64,
    pub pop_size: usize,
    pub fe_max: u64,
    pub consumed_fe: u64,
    pub final_population: Vec<SnapshotMember>,
    pub trace: Vec<TraceRow>,
    pub final_igd: f64,
    pub final_hv: f64,
    pub feasible_ratio: f64,
    pub wall_clock: Duration,
}

/// Derives the run's RNG from (global seed, problem, variant, seed index),
/// so a run's stream never depends on what else a batch contains.
pub fn run_rng(global_seed: u64, problem: &str, variant: &str, seed: u64) -> ChaCha12Rng {
    let mut hasher = Sha256::new();
    hasher.update(global_seed.to_le_bytes());
    hasher.update(problem.as_bytes());
    hasher.update([0u8]);
    hasher.update(variant.as_bytes());
    hasher.update([0u8]);
    hasher.update(seed.to_le_bytes());
    let digest: [u8; 32] = hasher.finalize().into();
    use rand::SeedableRng;
    ChaCha12Rng::from_seed(digest)
}

/// Feasible nondominated objective vectors of a population; the attained
/// set IGD is measured against.
fn attained_set(pop: &[Solution]) -> Vec<Vec<f64>> {
    let feasible: Vec<Vec<f64>> = pop
        .iter()
        .filter(|s| s.is_feasible())
        .map(|s| s.objectives().to_vec())
        .collect();
    nondominated_filter(feasible)
}

fn feasible_ratio(pop: &[Solution]) -> f64 {
    pop.iter().filter(|s| s.is_feasible()).count() as f64 / pop.len() as f64
}

fn population_objectives(pop: &[Solution]) -> Vec<Vec<f64>> {
    pop.iter().map(|s| s.objectives().to_vec()).collect()
}

/// Executes one run to completion. Deterministic in (config, seed); no
/// filesystem output besides the front cache.
pub fn run_single(config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let started = Instant::now();
    let problem = builtin(&config.problem)
        .ok_or_else(|| Error::Config(format!("unknown problem `{}`", config.problem)))?;

    let front = load_or_generate_front(
        &config.fronts_dir,
        problem.as_ref(),
        config.front_size,
        false,
    )?;
    let indicator = IndicatorConfig::new(
        ideal_point(&front),
        crate::problems::hv_reference_from_front(&front),
    )?;

    let variant_label = config.variant.label();
    let mut rng = run_rng(
        config.global_seed,
        &config.problem,
        &variant_label,
        config.seed,
    );

    let mut agent = match config.variant {
        Variant::Aop => Some(DdpgAgent::new(
            2 * problem.objectives() + 2,
            config.agent,
            &mut rng,
        )?),
        _ => None,
    };

    let params = OperatorParams::for_dimension(problem.variables());
    let mut host = HostState::new(
        problem.clone(),
        config.pop_size,
        config.fe_max,
        params,
        &mut rng,
    )?;

    let mut normalizer = StateNormalizer::new();
    let raw = extract_state(
        host.constrained_population(),
        host.consumed(),
        host.budget(),
        config.dispersion,
    );
    let mut state = normalizer.normalize(&raw);
    let mut prev_hv = hypervolume(
        &population_objectives(host.constrained_population()),
        &indicator,
    );

    let mut trace: Vec<TraceRow> = Vec::new();
    let mut gen = 0usize;
    while host.can_step() {
        let action = match &config.variant {
            Variant::Aop => agent
                .as_ref()
                .expect("aop runs own an agent")
                .select_action(&state, true, &mut rng)?,
            fixed => fixed.fixed_action().expect("non-aop variants are fixed"),
        };

        host.step_generation(&action, &mut rng)?;
        gen += 1;

        let hv = hypervolume(
            &population_objectives(host.constrained_population()),
            &indicator,
        );
        let reward = compute_reward(prev_hv, hv);
        prev_hv = hv;

        let raw = extract_state(
            host.constrained_population(),
            host.consumed(),
            host.budget(),
            config.dispersion,
        );
        let next_state = normalizer.normalize(&raw);
        let terminal = !host.can_step();

        let mut critic_loss = f64::NAN;
        if let Some(agent) = agent.as_mut() {
            agent.store_transition(Transition {
                state: state.clone(),
                action,
                reward,
                next_state: next_state.clone(),
                terminal,
            });
            if let Some(diagnostics) = agent.train_step(&mut rng)? {
                critic_loss = diagnostics.critic_loss;
            }
        }

        trace.push(TraceRow {
            gen,
            fe: host.consumed(),
            hv,
            igd: igd(&front, &attained_set(host.constrained_population())),
            feasible_ratio: feasible_ratio(host.constrained_population()),
            action: action.proportions(),
            reward,
            critic_loss,
        });
        state = next_state;
    }

    let final_population: Vec<SnapshotMember> = host
        .constrained_population()
        .iter()
        .map(|s| SnapshotMember {
            x: s.x.clone(),
            objectives: s.objectives().to_vec(),
            cv: s.cv(),
        })
        .collect();
    let snapshot_objectives: Vec<Vec<f64>> = final_population
        .iter()
        .filter(|m| m.cv == 0.0)
        .map(|m| m.objectives.clone())
        .collect();
    let final_igd = igd(&front, &nondominated_filter(snapshot_objectives));

    Ok(RunResult {
        problem: config.problem.clone(),
        variant: variant_label,
        seed: config.seed,
        pop_size: config.pop_size,
        fe_max: config.fe_max,
        consumed_fe: host.consumed(),
        feasible_ratio: feasible_ratio(host.constrained_population()),
        final_hv: prev_hv,
        final_population,
        trace,
        final_igd,
        wall_clock: started.elapsed(),
    })
}

/// Exact trace CSV encoding; the column order is part of the interface.
pub fn trace_csv(trace: &[TraceRow]) -> String {
    let mut out =
        String::from("gen,fe,hv,igd,feasible_ratio,p_sbx,p_derand,p_debest,reward,critic_loss\n");
    for r in trace {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.gen,
            r.fe,
            r.hv,
            r.igd,
            r.feasible_ratio,
            r.action[0],
            r.action[1],
            r.action[2],
            r.reward,
            r.critic_loss
        ));
    }
    out
}

fn population_csv(members: &[SnapshotMember]) -> String {
    if members.is_empty() {
        return String::new();
    }
    let d = members[0].x.len();
    let m = members[0].objectives.len();
    let mut header: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
    header.extend((0..m).map(|i| format!("f{i}")));
    header.push("cv".into());
    let mut out = header.join(",");
    out.push('\n');
    for member in members {
        let mut row: Vec<String> = member.x.iter().map(|v| v.to_string()).collect();
        row.extend(member.objectives.iter().map(|v| v.to_string()));
        row.push(member.cv.to_string());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn summary_text(result: &RunResult) -> String {
    format!(
        "problem = {}\nvariant = {}\nseed = {}\npop = {}\nfe_max = {}\nconsumed_fe = {}\n\
         generations = {}\nfinal_igd = {}\nfinal_hv = {}\nfeasible_ratio = {}\nwall_clock_ms = {}\n",
        result.problem,
        result.variant,
        result.seed,
        result.pop_size,
        result.fe_max,
        result.consumed_fe,
        result.trace.len(),
        result.final_igd,
        result.final_hv,
        result.feasible_ratio,
        result.wall_clock.as_millis()
    )
}

/// File-name stem for a run's outputs.
pub fn run_stem(result: &RunResult) -> String {
    format!("{}_{}_s{}", result.problem, result.variant, result.seed)
}

/// Writes `<stem>_trace.csv`, `<stem>_pop.csv`, and `<stem>_summary.txt`.
pub fn write_run_files(result: &RunResult, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let stem = run_stem(result);
    fs::write(
        out_dir.join(format!("{stem}_trace.csv")),
        trace_csv(&result.trace),
    )?;
    fs::write(
        out_dir.join(format!("{stem}_pop.csv")),
        population_csv(&result.final_population),
    )?;
    fs::write(
        out_dir.join(format!("{stem}_summary.txt")),
        summary_text(result),
    )?;
    Ok(())
}

/// Minimal per-run record parsed back from a summary file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub problem: String,
    pub variant: String,
    pub seed: u64,
    pub final_igd: f64,
    pub final_hv: f64,
    pub feasible_ratio: f64,
    pub consumed_fe: u64,
    pub fe_max: u64,
}

/// Parses a `_summary.txt` file.
pub fn parse_summary(path: &Path) -> Result<RunSummary> {
    let text = fs::read_to_string(path)?;
    let mut fields = std::collections::BTreeMap::new();
    for line in text.lines() {
        if let Some((k, v)) = line.split_once('=') {
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    let get = |key: &str| {
        fields
            .get(key)
            .cloned()
            .ok_or_else(|| Error::InvalidInput(format!("{}: missing `{key}`", path.display())))
    };
    let num = |key: &str| -> Result<f64> {
        get(key)?
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{}: bad `{key}`", path.display())))
    };
    Ok(RunSummary {
        problem: get("problem")?,
        variant: get("variant")?,
        seed: num("seed")? as u64,
        final_igd: num("final_igd")?,
        final_hv: num("final_hv")?,
        feasible_ratio: num("feasible_ratio")?,
        consumed_fe: num("consumed_fe")? as u64,
        fe_max: num("fe_max")? as u64,
    })
}
