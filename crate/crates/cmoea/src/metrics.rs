//! Quality indicators and the statistical test used for rewards and
//! reporting: hypervolume (exact 2-D sweep, seeded Monte Carlo for M >= 3),
//! inverted generational distance, and the two-sided Wilcoxon rank-sum test.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Normalization box and estimator settings shared by reward and report HV.
#[derive(Debug, Clone)]
pub struct IndicatorConfig {
    /// Componentwise lower corner of the normalization box.
    pub ideal: Vec<f64>,
    /// Hypervolume reference point; upper corner of the box.
    pub hv_reference: Vec<f64>,
    /// Monte Carlo sample count for M >= 3.
    pub mc_samples: usize,
    /// Fixed seed so HV is identical across runs.
    pub mc_seed: u64,
}

impl IndicatorConfig {
    pub fn new(ideal: Vec<f64>, hv_reference: Vec<f64>) -> Result<Self> {
        if ideal.len() != hv_reference.len() {
            return Err(Error::InvalidInput(
                "ideal and reference must have equal dimension".into(),
            ));
        }
        if ideal.iter().zip(&hv_reference).any(|(i, r)| i >= r) {
            return Err(Error::InvalidInput(
                "ideal must be componentwise below the reference".into(),
            ));
        }
        Ok(Self {
            ideal,
            hv_reference,
            mc_samples: 10_000,
            mc_seed: 0x5eed_cafe,
        })
    }

    /// Raw volume of the normalization box.
    pub fn box_volume(&self) -> f64 {
        self.ideal
            .iter()
            .zip(&self.hv_reference)
            .map(|(i, r)| r - i)
            .product()
    }
}

/// Hypervolume as the dominated fraction of the unit normalization box.
///
/// Points are mapped into the box, clamped below at the ideal, and dropped
/// when they fail to dominate the reference. An empty effective set yields 0.
#[allow(clippy::needless_range_loop)]
pub fn hypervolume(points: &[Vec<f64>], config: &IndicatorConfig) -> f64 {
    let m = config.ideal.len();
    let mut normalized: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    'point: for p in points {
        debug_assert_eq!(p.len(), m);
        let mut z = Vec::with_capacity(m);
        for k in 0..m {
            let span = config.hv_reference[k] - config.ideal[k];
            let v = (p[k] - config.ideal[k]) / span;
            if v >= 1.0 {
                continue 'point;
            }
            z.push(v.max(0.0));
        }
        normalized.push(z);
    }
    if normalized.is_empty() {
        return 0.0;
    }
    if m == 2 {
        hv2d_exact(normalized)
    } else {
        hv_monte_carlo(&normalized, config.mc_samples, config.mc_seed)
    }
}

/// Exact sweep over the normalized unit box: sort by the first coordinate
/// and accumulate the staircase strips.
fn hv2d_exact(mut points: Vec<Vec<f64>>) -> f64 {
    points.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap()
            .then(a[1].partial_cmp(&b[1]).unwrap())
    });
    let mut volume = 0.0;
    let mut best_f2 = 1.0;
    for p in &points {
        if p[1] < best_f2 {
            volume += (1.0 - p[0]) * (best_f2 - p[1]);
            best_f2 = p[1];
        }
    }
    volume
}

fn hv_monte_carlo(points: &[Vec<f64>], samples: usize, seed: u64) -> f64 {
    let m = points[0].len();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut u = vec![0.0; m];
    for _ in 0..samples {
        for v in u.iter_mut() {
            *v = rng.gen::<f64>();
        }
        if points
            .iter()
            .any(|p| p.iter().zip(&u).all(|(pv, uv)| pv <= uv))
        {
            hits += 1;
        }
    }
    hits as f64 / samples as f64
}

/// Inverted generational distance: mean over reference points of the
/// Euclidean distance to the nearest attained point. An empty attained set
/// is an undefined indicator, reported as NaN.
pub fn igd(reference_front: &[Vec<f64>], attained: &[Vec<f64>]) -> f64 {
    if attained.is_empty() {
        return f64::NAN;
    }
    debug_assert!(!reference_front.is_empty());
    let total: f64 = reference_front
        .iter()
        .map(|r| {
            attained
                .iter()
                .map(|a| {
                    r.iter()
                        .zip(a)
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    total / reference_front.len() as f64
}

/// Statistical verdict of a sample against a baseline: `+` significantly
/// better, `-` significantly worse, `≈` indistinguishable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Better,
    Worse,
    Similar,
}

impl Verdict {
    pub fn symbol(&self) -> &'static str {
        match self {
            Verdict::Better => "+",
            Verdict::Worse => "-",
            Verdict::Similar => "≈",
        }
    }

    pub fn flipped(&self) -> Verdict {
        match self {
            Verdict::Better => Verdict::Worse,
            Verdict::Worse => Verdict::Better,
            Verdict::Similar => Verdict::Similar,
        }
    }
}

/// Two-sided Wilcoxon rank-sum test at significance `alpha`.
///
/// Uses exact enumeration of the rank-sum distribution when the smaller
/// sample has at most 10 observations and the pooled values are tie-free;
/// otherwise a tie-corrected normal approximation with continuity
/// correction. NaN observations rank worst (treated as +infinity, matching
/// the convention that a failed run is the worst outcome). The verdict
/// direction follows the lower (better) median.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> (f64, Verdict) {
    assert!(!a.is_empty() && !b.is_empty(), "samples must be nonempty");
    let a: Vec<f64> = a.iter().map(|&v| sanitize(v)).collect();
    let b: Vec<f64> = b.iter().map(|&v| sanitize(v)).collect();

    let tie_free = {
        let mut pooled: Vec<f64> = a.iter().chain(&b).copied().collect();
        pooled.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pooled.windows(2).all(|w| w[0] != w[1])
    };

    let p = if a.len().min(b.len()) <= 10 && tie_free {
        wilcoxon_exact_p(&a, &b)
    } else {
        wilcoxon_normal_p(&a, &b)
    };

    let verdict = if p >= alpha {
        Verdict::Similar
    } else {
        let med_a = median(&a);
        let med_b = median(&b);
        if med_a < med_b {
            Verdict::Better
        } else if med_a > med_b {
            Verdict::Worse
        } else {
            Verdict::Similar
        }
    };
    (p, verdict)
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn median(sample: &[f64]) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Exact two-sided p: enumerate the distribution of the rank sum of `a`
/// over all C(n+m, n) equally likely rank assignments via a subset-count
/// recurrence, then double the smaller tail (capped at 1).
pub(crate) fn wilcoxon_exact_p(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let total = n + b.len();
    let w_obs: f64 = ranks_of_a(a, b).iter().sum();
    let w_obs = w_obs.round() as usize;

    let max_sum = total * (total + 1) / 2;
    // ways[k][s] = number of k-subsets of {1..r} with rank sum s.
    let mut ways = vec![vec![0.0_f64; max_sum + 1]; n + 1];
    ways[0][0] = 1.0;
    for rank in 1..=total {
        for k in (1..=n.min(rank)).rev() {
            for s in (rank..=max_sum).rev() {
                let add = ways[k - 1][s - rank];
                if add > 0.0 {
                    ways[k][s] += add;
                }
            }
        }
    }
    let dist = &ways[n];
    let all: f64 = dist.iter().sum();
    let below: f64 = dist[..=w_obs.min(max_sum)].iter().sum();
    let above: f64 = dist[w_obs.min(max_sum)..].iter().sum();
    (2.0 * below.min(above) / all).min(1.0)
}

/// Normal approximation with midrank ties, tie-corrected variance, and
/// continuity correction.
pub(crate) fn wilcoxon_normal_p(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let m = b.len() as f64;
    let total = n + m;
    let ranks = ranks_of_a(a, b);
    let w: f64 = ranks.iter().sum();
    let mean = n * (total + 1.0) / 2.0;

    // Tie correction from the pooled sample's group sizes.
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j] == pooled[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let variance = n * m / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    if variance <= 0.0 {
        return 1.0;
    }
    let z = ((w - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    statrs::function::erf::erfc(z / std::f64::consts::SQRT_2).min(1.0)
}

/// Midranks of sample `a` within the pooled sample.
fn ranks_of_a(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut tagged: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    tagged.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut ranks = vec![0.0; tagged.len()];
    let mut i = 0;
    while i < tagged.len() {
        let mut j = i + 1;
        while j < tagged.len() && tagged[j].0 == tagged[i].0 {
            j += 1;
        }
        let midrank = (i + 1 + j) as f64 / 2.0;
        for r in ranks.iter_mut().take(j).skip(i) {
            *r = midrank;
        }
        i = j;
    }
    tagged
        .iter()
        .zip(&ranks)
        .filter(|((_, from_a), _)| *from_a)
        .map(|(_, &r)| r)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn config(ideal: Vec<f64>, reference: Vec<f64>) -> IndicatorConfig {
        IndicatorConfig::new(ideal, reference).unwrap()
    }

    #[test]
    fn hv_two_point_case() {
        let cfg = config(vec![0.0, 0.0], vec![3.0, 3.0]);
        let hv = hypervolume(&[vec![1.0, 2.0], vec![2.0, 1.0]], &cfg);
        assert!((hv - 1.0 / 3.0).abs() < 1e-12);
        assert!((hv * cfg.box_volume() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn hv_ideal_point_dominates_whole_box() {
        let cfg = config(vec![0.0, 0.0], vec![1.0, 1.0]);
        assert_eq!(hypervolume(&[vec![0.0, 0.0]], &cfg), 1.0);
    }

    #[test]
    fn hv_outside_box_is_zero() {
        let cfg = config(vec![0.0, 0.0], vec![1.0, 1.0]);
        assert_eq!(hypervolume(&[vec![1.5, 0.2], vec![0.2, 2.0]], &cfg), 0.0);
        assert_eq!(hypervolume(&[], &cfg), 0.0);
    }

    #[test]
    fn hv_monotone_under_point_addition() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let cfg = config(vec![0.0, 0.0], vec![1.0, 1.0]);
        for _ in 0..200 {
            let set: Vec<Vec<f64>> = (0..10)
                .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let base = hypervolume(&set, &cfg);
            let mut bigger = set.clone();
            bigger.push(vec![rng.gen::<f64>(), rng.gen::<f64>()]);
            assert!(hypervolume(&bigger, &cfg) >= base - 1e-15);
        }
    }

    #[test]
    fn hv_dominated_point_changes_nothing() {
        let cfg = config(vec![0.0, 0.0], vec![1.0, 1.0]);
        let set = vec![vec![0.2, 0.5], vec![0.5, 0.2]];
        let base = hypervolume(&set, &cfg);
        let mut bigger = set;
        bigger.push(vec![0.6, 0.6]);
        assert_eq!(hypervolume(&bigger, &cfg), base);
    }

    #[test]
    fn hv_exact_and_monte_carlo_agree_in_2d() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for case in 0..5 {
            let mut cfg = config(vec![0.0, 0.0], vec![1.0, 1.0]);
            cfg.mc_samples = 100_000;
            cfg.mc_seed = 1000 + case;
            let set: Vec<Vec<f64>> = (0..20)
                .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
                .collect();
            let exact = hv2d_exact(set.clone());
            let mc = hv_monte_carlo(&set, cfg.mc_samples, cfg.mc_seed);
            assert!(
                (exact - mc).abs() < 1e-2,
                "exact {exact} vs monte carlo {mc}"
            );
        }
    }

    #[test]
    fn igd_identity_is_zero() {
        let r = vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]];
        assert_eq!(igd(&r, &r), 0.0);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn igd_two_point_case() {
        let r = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let attained = vec![vec![0.0, 1.0]];
        let expected = (0.0 + 2.0_f64.sqrt()) / 2.0;
        assert!((igd(&r, &attained) - expected).abs() < 1e-12);
        assert!((igd(&r, &attained) - 0.70711).abs() < 1e-5);
    }

    #[test]
    fn igd_superset_never_increases() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        let r: Vec<Vec<f64>> = (0..30)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let attained: Vec<Vec<f64>> = (0..10)
            .map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])
            .collect();
        let base = igd(&r, &attained);
        let mut bigger = attained;
        bigger.push(vec![rng.gen::<f64>(), rng.gen::<f64>()]);
        assert!(igd(&r, &bigger) <= base);
    }

    #[test]
    fn igd_empty_attained_is_nan() {
        let r = vec![vec![0.0, 1.0]];
        assert!(igd(&r, &[]).is_nan());
    }

    #[test]
    fn igd_translation_invariant() {
        let r = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let a = vec![vec![0.3, 0.4]];
        let shift = |s: &[Vec<f64>]| -> Vec<Vec<f64>> {
            s.iter().map(|p| vec![p[0] + 5.0, p[1] - 2.0]).collect()
        };
        assert!((igd(&r, &a) - igd(&shift(&r), &shift(&a))).abs() < 1e-12);
    }

    #[test]
    fn wilcoxon_exact_enumeration_case() {
        let (p, verdict) = wilcoxon_rank_sum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], 0.05);
        assert!((p - 0.1).abs() < 1e-12, "p = {p}");
        assert_eq!(verdict, Verdict::Similar);
    }

    #[test]
    fn wilcoxon_identical_samples() {
        let s = [1.0, 2.0, 3.0];
        let (p, verdict) = wilcoxon_rank_sum(&s, &s, 0.05);
        assert_eq!(p, 1.0);
        assert_eq!(verdict, Verdict::Similar);
    }

    #[test]
    fn wilcoxon_symmetry() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..50 {
            let a: Vec<f64> = (0..7).map(|_| rng.gen::<f64>()).collect();
            let b: Vec<f64> = (0..9).map(|_| rng.gen::<f64>() + 0.3).collect();
            let (p_ab, v_ab) = wilcoxon_rank_sum(&a, &b, 0.05);
            let (p_ba, v_ba) = wilcoxon_rank_sum(&b, &a, 0.05);
            assert!((p_ab - p_ba).abs() < 1e-12);
            assert_eq!(v_ab, v_ba.flipped());
        }
    }

    #[test]
    fn wilcoxon_normal_close_to_exact_on_small_tie_free_samples() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(23);
        for _ in 0..100 {
            let a: Vec<f64> = (0..8).map(|_| rng.gen::<f64>()).collect();
            let b: Vec<f64> = (0..8).map(|_| rng.gen::<f64>() * 1.5).collect();
            let exact = wilcoxon_exact_p(&a, &b);
            let approx = wilcoxon_normal_p(&a, &b);
            assert!(
                (exact - approx).abs() <= 0.02,
                "exact {exact} vs normal {approx}"
            );
        }
    }

    #[test]
    fn wilcoxon_nan_ranks_worst() {
        // Lower is better: the clean sample beats the one with failures.
        let a = [0.1, 0.2, 0.15, 0.12, 0.18, 0.11, 0.14, 0.13, 0.16, 0.17, 0.19];
        let b = [
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
        ];
        let (p, verdict) = wilcoxon_rank_sum(&a, &b, 0.05);
        assert!(p < 0.05);
        assert_eq!(verdict, Verdict::Better);
    }
}
