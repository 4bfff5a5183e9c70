//! Reference-front generation and caching.
//!
//! Fronts come from a problem's candidate generator: evaluate every
//! candidate, keep the feasible ones, filter to the nondominated set, and
//! subsample to the requested size. Cached files are plain text with a
//! `# problem=<name> n=<count> M=<M>` header and one point per line.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use super::{evaluate, Cmop};
use crate::error::{Error, Result};

/// A front sample: the decision vector and its objective image.
#[derive(Debug, Clone)]
pub struct FrontPoint {
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
}

/// Componentwise minimum over a set of objective vectors.
pub fn ideal_point(points: &[Vec<f64>]) -> Vec<f64> {
    fold_componentwise(points, f64::min)
}

/// Componentwise maximum over a set of objective vectors.
pub fn nadir_point(points: &[Vec<f64>]) -> Vec<f64> {
    fold_componentwise(points, f64::max)
}

fn fold_componentwise(points: &[Vec<f64>], op: fn(f64, f64) -> f64) -> Vec<f64> {
    let mut acc = points[0].clone();
    for p in &points[1..] {
        for (a, &v) in acc.iter_mut().zip(p) {
            *a = op(*a, v);
        }
    }
    acc
}

/// Keeps the points no other point strictly dominates (minimization).
/// Exact duplicates collapse to one representative.
pub fn nondominated_filter(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    if points.is_empty() {
        return points;
    }
    if points[0].len() == 2 {
        return nondominated_2d(points);
    }
    nondominated_generic(points)
}

fn nondominated_2d(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap()
            .then(a[1].partial_cmp(&b[1]).unwrap())
    });
    let mut kept: Vec<Vec<f64>> = Vec::new();
    let mut best_f2 = f64::INFINITY;
    for p in points {
        if p[1] < best_f2 {
            best_f2 = p[1];
            kept.push(p);
        }
    }
    kept
}

fn nondominated_generic(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut kept: Vec<Vec<f64>> = Vec::new();
    'outer: for p in &points {
        for q in &points {
            if strictly_dominates(q, p) {
                continue 'outer;
            }
        }
        if !kept.iter().any(|k| k == p) {
            kept.push(p.clone());
        }
    }
    kept
}

fn strictly_dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Generates `n` mutually nondominated, feasible points approximating the
/// constrained Pareto front, with their decision-space preimages.
///
/// The dense front is deterministic per problem, so it is computed once per
/// process (keyed by problem name) and subsampled per request.
pub fn generate_front(problem: &dyn Cmop, n: usize) -> Result<Vec<FrontPoint>> {
    if n == 0 {
        return Err(Error::InvalidInput("front size must be >= 1".into()));
    }
    static DENSE: OnceLock<Mutex<HashMap<String, Arc<Vec<FrontPoint>>>>> = OnceLock::new();
    let memo = DENSE.get_or_init(|| Mutex::new(HashMap::new()));
    let cached = memo.lock().unwrap().get(problem.name()).cloned();
    let dense = match cached {
        Some(dense) => dense,
        None => {
            let dense = Arc::new(dense_front(problem)?);
            memo.lock()
                .unwrap()
                .insert(problem.name().to_string(), Arc::clone(&dense));
            dense
        }
    };
    Ok(subsample(dense.as_ref().clone(), n))
}

fn dense_front(problem: &dyn Cmop) -> Result<Vec<FrontPoint>> {
    let candidates = problem.front_candidates().ok_or_else(|| {
        Error::Unsupported(format!(
            "problem `{}` has no reference-front generator",
            problem.name()
        ))
    })?;

    let mut feasible: Vec<FrontPoint> = Vec::new();
    for x in candidates {
        let eval = evaluate(problem, &x)?;
        if eval.is_feasible() {
            feasible.push(FrontPoint {
                x,
                objectives: eval.objectives,
            });
        }
    }
    if feasible.is_empty() {
        return Err(Error::Unsupported(format!(
            "front generator for `{}` produced no feasible points",
            problem.name()
        )));
    }

    // Filter on objective vectors, then map survivors back to preimages.
    let objectives: Vec<Vec<f64>> = feasible.iter().map(|p| p.objectives.clone()).collect();
    let kept = nondominated_filter(objectives);
    let mut front: Vec<FrontPoint> = Vec::with_capacity(kept.len());
    for target in kept {
        let idx = feasible
            .iter()
            .position(|p| p.objectives == target)
            .expect("filtered point originates from the feasible set");
        front.push(feasible.swap_remove(idx));
    }
    front.sort_by(|a, b| a.objectives[0].partial_cmp(&b.objectives[0]).unwrap());
    Ok(front)
}

/// Evenly spaced subsample keeping both extremes, so the ideal and nadir
/// of the dense front survive.
fn subsample(front: Vec<FrontPoint>, n: usize) -> Vec<FrontPoint> {
    if front.len() <= n {
        return front;
    }
    if n == 1 {
        return vec![front[0].clone()];
    }
    (0..n)
        .map(|i| {
            let idx = (i as f64 * (front.len() - 1) as f64 / (n - 1) as f64).round() as usize;
            front[idx].clone()
        })
        .collect()
}

/// Objective-space reference front of size `n` (or fewer, when the dense
/// nondominated set is smaller).
pub fn sample_reference_front(problem: &dyn Cmop, n: usize) -> Result<Vec<Vec<f64>>> {
    Ok(generate_front(problem, n)?
        .into_iter()
        .map(|p| p.objectives)
        .collect())
}

fn cache_path(dir: &Path, problem_name: &str, n: usize) -> PathBuf {
    dir.join(format!("{problem_name}_n{n}.txt"))
}

/// Writes a front cache file.
pub fn save_front(path: &Path, problem_name: &str, points: &[Vec<f64>]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidInput("cannot cache an empty front".into()));
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let m = points[0].len();
    let mut out = String::new();
    out.push_str(&format!("# problem={problem_name} n={} M={m}\n", points.len()));
    for p in points {
        let line: Vec<String> = p.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// Reads a front cache file back as (problem name, points).
pub fn load_front(path: &Path) -> Result<(String, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput(format!("{}: empty front cache", path.display())))?;
    let fields = parse_header(header)
        .ok_or_else(|| Error::InvalidInput(format!("{}: malformed header", path.display())))?;
    let (name, n, m) = fields;
    let mut points = Vec::with_capacity(n);
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let p: std::result::Result<Vec<f64>, _> =
            line.split_whitespace().map(str::parse::<f64>).collect();
        let p = p.map_err(|e| {
            Error::InvalidInput(format!("{}: bad front line: {e}", path.display()))
        })?;
        if p.len() != m {
            return Err(Error::InvalidInput(format!(
                "{}: expected {m} objectives per line",
                path.display()
            )));
        }
        points.push(p);
    }
    if points.len() != n {
        return Err(Error::InvalidInput(format!(
            "{}: header promises {n} points, found {}",
            path.display(),
            points.len()
        )));
    }
    Ok((name, points))
}

fn parse_header(header: &str) -> Option<(String, usize, usize)> {
    let rest = header.strip_prefix('#')?.trim();
    let mut name = None;
    let mut n = None;
    let mut m = None;
    for field in rest.split_whitespace() {
        let (key, value) = field.split_once('=')?;
        match key {
            "problem" => name = Some(value.to_string()),
            "n" => n = value.parse().ok(),
            "M" => m = value.parse().ok(),
            _ => return None,
        }
    }
    Some((name?, n?, m?))
}

/// Loads the cached front for (problem, n) from `dir`, generating and
/// caching it on a miss. `force` regenerates unconditionally.
pub fn load_or_generate_front(
    dir: &Path,
    problem: &dyn Cmop,
    n: usize,
    force: bool,
) -> Result<Vec<Vec<f64>>> {
    let path = cache_path(dir, problem.name(), n);
    if !force && path.is_file() {
        let (name, points) = load_front(&path)?;
        if name != problem.name() {
            return Err(Error::InvalidInput(format!(
                "{}: cache holds front for `{name}`, expected `{}`",
                path.display(),
                problem.name()
            )));
        }
        return Ok(points);
    }
    let front = sample_reference_front(problem, n)?;
    save_front(&path, problem.name(), &front)?;
    Ok(front)
}
