//! Comparison tables and trace emission.
//!
//! Tables follow the convention of the statistical summaries in the
//! optimization literature: per problem and variant the mean and standard
//! deviation of final IGD in scientific notation, a rank-sum verdict
//! against a baseline (`+` better, `-` worse, `≈` similar at alpha 0.05),
//! the per-row best highlighted, and a footer counting verdicts.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::batch::BatchOutcome;
use super::runner::{parse_summary, run_stem, trace_csv};
use crate::error::{Error, Result};
use crate::metrics::{wilcoxon_rank_sum, Verdict};

pub const SIGNIFICANCE: f64 = 0.05;

/// IGD samples per (problem, variant).
pub type SampleMap = BTreeMap<(String, String), Vec<f64>>;

/// A rendered comparison: aligned plain text plus a long-format CSV.
#[derive(Debug, Clone)]
pub struct ComparisonTable {
    pub text: String,
    pub csv: String,
}

fn mean_std_over_finite(sample: &[f64]) -> (f64, f64) {
    let finite: Vec<f64> = sample.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = finite.len() as f64;
    let mean = finite.iter().sum::<f64>() / n;
    let std = if finite.len() < 2 {
        0.0
    } else {
        (finite.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (mean, std)
}

fn format_cell(mean: f64, std: f64) -> String {
    if mean.is_nan() {
        "NaN (NaN)".to_string()
    } else {
        format!("{mean:.4e} ({std:.2e})")
    }
}

fn problem_order(name: &str) -> (usize, String) {
    let registry = crate::problems::builtin_names();
    let idx = registry
        .iter()
        .position(|&p| p == name)
        .unwrap_or(registry.len());
    (idx, name.to_string())
}

fn variant_order(label: &str) -> (usize, String) {
    let idx = match label {
        "ga-only" => 0,
        "de-rand-only" => 1,
        "de-best-only" => 2,
        l if l.starts_with("fixed-") => 3,
        "aop" => 4,
        _ => 5,
    };
    (idx, label.to_string())
}

/// Builds the comparison table from per-cell IGD samples. `baseline` names
/// the variant every other variant is tested against; it renders last.
pub fn compare_table(samples: &SampleMap, baseline: &str) -> Result<ComparisonTable> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no samples to compare".into()));
    }
    let mut problems: Vec<String> = samples.keys().map(|(p, _)| p.clone()).collect();
    problems.sort_by_key(|p| problem_order(p));
    problems.dedup();
    let mut variants: Vec<String> = samples.keys().map(|(_, v)| v.clone()).collect();
    variants.sort_by_key(|v| variant_order(v));
    variants.dedup();
    if !variants.iter().any(|v| v == baseline) {
        return Err(Error::InvalidInput(format!(
            "baseline `{baseline}` absent from the results (variants: {})",
            variants.join(", ")
        )));
    }
    variants.retain(|v| v != baseline);
    variants.push(baseline.to_string());

    let mut csv = String::from("problem,variant,mean_igd,std_igd,verdict,best\n");
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut counts: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();

    for problem in &problems {
        let baseline_sample = samples
            .get(&(problem.clone(), baseline.to_string()))
            .ok_or_else(|| {
                Error::InvalidInput(format!("baseline `{baseline}` has no runs on {problem}"))
            })?;

        let mut cells: Vec<(String, f64, f64, Option<Verdict>)> = Vec::new();
        for variant in &variants {
            let sample = samples
                .get(&(problem.clone(), variant.clone()))
                .ok_or_else(|| {
                    Error::InvalidInput(format!("no runs for {variant} on {problem}"))
                })?;
            let (mean, std) = mean_std_over_finite(sample);
            let verdict = if variant == baseline {
                None
            } else {
                let (_, verdict) = wilcoxon_rank_sum(sample, baseline_sample, SIGNIFICANCE);
                let c = counts.entry(variant.clone()).or_insert((0, 0, 0));
                match verdict {
                    Verdict::Better => c.0 += 1,
                    Verdict::Worse => c.1 += 1,
                    Verdict::Similar => c.2 += 1,
                }
                Some(verdict)
            };
            cells.push((variant.clone(), mean, std, verdict));
        }

        let best = cells
            .iter()
            .enumerate()
            .filter(|(_, (_, mean, _, _))| mean.is_finite())
            .min_by(|(_, a), (_, b)| a.1.partial_cmp(&b.1).unwrap())
            .map(|(i, _)| i);

        let mut row = vec![problem.clone()];
        for (i, (variant, mean, std, verdict)) in cells.iter().enumerate() {
            let mut text_cell = format_cell(*mean, *std);
            if let Some(v) = verdict {
                text_cell.push(' ');
                text_cell.push_str(v.symbol());
            }
            if best == Some(i) {
                text_cell = format!("*{text_cell}*");
            }
            row.push(text_cell);
            csv.push_str(&format!(
                "{problem},{variant},{},{},{},{}\n",
                if mean.is_nan() {
                    "NaN".into()
                } else {
                    format!("{mean:.6e}")
                },
                if std.is_nan() {
                    "NaN".into()
                } else {
                    format!("{std:.6e}")
                },
                verdict.map(|v| v.symbol()).unwrap_or(""),
                if best == Some(i) { 1 } else { 0 },
            ));
        }
        rows.push(row);
    }

    let mut footer = vec!["+/-/≈".to_string()];
    for variant in &variants {
        footer.push(match counts.get(variant) {
            Some((b, w, s)) => format!("{b}/{w}/{s}"),
            None => String::new(),
        });
    }
    rows.push(footer);

    let mut header = vec!["problem".to_string()];
    header.extend(variants.iter().cloned());
    let text = render_aligned(&header, &rows);
    Ok(ComparisonTable { text, csv })
}

#[allow(clippy::needless_range_loop)]
fn render_aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let columns = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let render_row = |row: &[String]| -> String {
        let mut line = String::new();
        for i in 0..columns {
            let cell = row.get(i).map(String::as_str).unwrap_or("");
            line.push_str(cell);
            if i + 1 < columns {
                line.push_str(&" ".repeat(widths[i] - cell.chars().count() + 2));
            }
        }
        line.trim_end().to_string()
    };
    let mut out = render_row(header);
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (columns - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&render_row(row));
        out.push('\n');
    }
    out
}

/// Reads every `*_summary.txt` under `dir` into IGD samples, keyed by
/// (problem, variant), seeds kept in ascending order.
pub fn collect_summaries(dir: &Path) -> Result<SampleMap> {
    let mut per_cell: BTreeMap<(String, String), Vec<(u64, f64)>> = BTreeMap::new();
    let mut entries: Vec<_> = fs::read_dir(dir)?
        .collect::<std::result::Result<Vec<_>, _>>()?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.ends_with("_summary.txt"))
        })
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no `*_summary.txt` run records under {}",
            dir.display()
        )));
    }
    for path in entries {
        let s = parse_summary(&path)?;
        per_cell
            .entry((s.problem, s.variant))
            .or_default()
            .push((s.seed, s.final_igd));
    }
    Ok(per_cell
        .into_iter()
        .map(|(key, mut runs)| {
            runs.sort_by_key(|(seed, _)| *seed);
            (key, runs.into_iter().map(|(_, igd)| igd).collect())
        })
        .collect())
}

/// Writes one trace CSV per run plus one aggregate per (problem, variant)
/// with mean HV and IGD against consumed evaluations, aligned on the
/// generation index.
pub fn emit_traces(outcome: &BatchOutcome, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let mut cells: BTreeMap<(String, String), Vec<&super::runner::RunResult>> = BTreeMap::new();
    for ((problem, variant, _), result) in &outcome.results {
        fs::write(
            out_dir.join(format!("{}_trace.csv", run_stem(result))),
            trace_csv(&result.trace),
        )?;
        cells
            .entry((problem.clone(), variant.clone()))
            .or_default()
            .push(result);
    }
    for ((problem, variant), results) in &cells {
        let generations = results.iter().map(|r| r.trace.len()).min().unwrap_or(0);
        let mut out = String::from("gen,fe,mean_hv,mean_igd\n");
        for g in 0..generations {
            let fe = results[0].trace[g].fe;
            let n = results.len() as f64;
            let mean_hv: f64 = results.iter().map(|r| r.trace[g].hv).sum::<f64>() / n;
            let mean_igd: f64 = results.iter().map(|r| r.trace[g].igd).sum::<f64>() / n;
            out.push_str(&format!("{},{fe},{mean_hv},{mean_igd}\n", g + 1));
        }
        fs::write(out_dir.join(format!("{problem}_{variant}_agg.csv")), out)?;
    }
    Ok(())
}
