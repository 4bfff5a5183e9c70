//! Built-in benchmark problems.
//!
//! All are minimization problems with inequality constraints expressed in
//! `g(x) <= 0` form. Each ships a front-candidate generator: decision
//! vectors that densely cover the constrained Pareto set, fed through the
//! shared evaluate/feasible/nondominated pipeline in `front`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use super::front::{generate_front, ideal_point, nadir_point};
use super::{Cmop, ProblemDescriptor, ProblemHandle, DEFAULT_DELTA};

/// Grid resolution per axis for two-variable front generators.
const GRID_2D: usize = 1000;
/// Samples per analytic front segment.
const SEGMENT_STEPS: usize = 6000;
/// Reference-front size used when deriving descriptor metadata.
const DESCRIPTOR_FRONT_N: usize = 1000;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

fn grid_2d(lower: &[f64], upper: &[f64], n: usize) -> Vec<Vec<f64>> {
    let xs = linspace(lower[0], upper[0], n);
    let ys = linspace(lower[1], upper[1], n);
    let mut out = Vec::with_capacity(n * n);
    for &x in &xs {
        for &y in &ys {
            out.push(vec![x, y]);
        }
    }
    out
}

/// Binh and Korn's two-variable problem: two quadratic objectives, one
/// disk constraint and one excluded disk.
struct Bnh {
    lower: [f64; 2],
    upper: [f64; 2],
}

impl Cmop for Bnh {
    fn name(&self) -> &str {
        "bnh"
    }
    fn objectives(&self) -> usize {
        2
    }
    fn variables(&self) -> usize {
        2
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn inequalities(&self) -> usize {
        2
    }
    fn equalities(&self) -> usize {
        0
    }
    fn evaluate_raw(&self, x: &[f64], f: &mut [f64], g: &mut [f64], _h: &mut [f64]) {
        let (x1, x2) = (x[0], x[1]);
        f[0] = 4.0 * x1 * x1 + 4.0 * x2 * x2;
        f[1] = (x1 - 5.0).powi(2) + (x2 - 5.0).powi(2);
        g[0] = (x1 - 5.0).powi(2) + x2 * x2 - 25.0;
        g[1] = 7.7 - (x1 - 8.0).powi(2) - (x2 + 3.0).powi(2);
    }
    fn front_candidates(&self) -> Option<Vec<Vec<f64>>> {
        Some(grid_2d(&self.lower, &self.upper, GRID_2D))
    }
}

/// Srinivas' two-variable problem with a disk constraint and a linear cut.
struct Srn {
    lower: [f64; 2],
    upper: [f64; 2],
}

impl Cmop for Srn {
    fn name(&self) -> &str {
        "srn"
    }
    fn objectives(&self) -> usize {
        2
    }
    fn variables(&self) -> usize {
        2
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn inequalities(&self) -> usize {
        2
    }
    fn equalities(&self) -> usize {
        0
    }
    fn evaluate_raw(&self, x: &[f64], f: &mut [f64], g: &mut [f64], _h: &mut [f64]) {
        let (x1, x2) = (x[0], x[1]);
        f[0] = 2.0 + (x1 - 2.0).powi(2) + (x2 - 1.0).powi(2);
        f[1] = 9.0 * x1 - (x2 - 1.0).powi(2);
        g[0] = x1 * x1 + x2 * x2 - 225.0;
        g[1] = x1 - 3.0 * x2 + 10.0;
    }
    fn front_candidates(&self) -> Option<Vec<Vec<f64>>> {
        Some(grid_2d(&self.lower, &self.upper, GRID_2D))
    }
}

/// Tanaka's problem: identity objectives on a wavy ring intersected with a
/// disk, giving a disconnected front.
struct Tnk {
    lower: [f64; 2],
    upper: [f64; 2],
}

impl Cmop for Tnk {
    fn name(&self) -> &str {
        "tnk"
    }
    fn objectives(&self) -> usize {
        2
    }
    fn variables(&self) -> usize {
        2
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn inequalities(&self) -> usize {
        2
    }
    fn equalities(&self) -> usize {
        0
    }
    fn evaluate_raw(&self, x: &[f64], f: &mut [f64], g: &mut [f64], _h: &mut [f64]) {
        let (x1, x2) = (x[0], x[1]);
        f[0] = x1;
        f[1] = x2;
        // atan2 keeps the angle finite on the x2 = 0 edge.
        let angle = 16.0 * f64::atan2(x1, x2);
        g[0] = -(x1 * x1 + x2 * x2 - 1.0 - 0.1 * angle.cos());
        g[1] = (x1 - 0.5).powi(2) + (x2 - 0.5).powi(2) - 0.5;
    }
    fn front_candidates(&self) -> Option<Vec<Vec<f64>>> {
        Some(grid_2d(&self.lower, &self.upper, GRID_2D))
    }
}

/// Osyczka and Kundu's six-variable problem with six linear/quadratic
/// constraints. Front candidates sweep its five known optimal segments.
struct Osy {
    lower: [f64; 6],
    upper: [f64; 6],
}

impl Cmop for Osy {
    fn name(&self) -> &str {
        "osy"
    }
    fn objectives(&self) -> usize {
        2
    }
    fn variables(&self) -> usize {
        6
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn inequalities(&self) -> usize {
        6
    }
    fn equalities(&self) -> usize {
        0
    }
    fn evaluate_raw(&self, x: &[f64], f: &mut [f64], g: &mut [f64], _h: &mut [f64]) {
        f[0] = -(25.0 * (x[0] - 2.0).powi(2)
            + (x[1] - 2.0).powi(2)
            + (x[2] - 1.0).powi(2)
            + (x[3] - 4.0).powi(2)
            + (x[4] - 1.0).powi(2));
        f[1] = x.iter().map(|v| v * v).sum();
        g[0] = 2.0 - x[0] - x[1];
        g[1] = x[0] + x[1] - 6.0;
        g[2] = x[1] - x[0] - 2.0;
        g[3] = x[0] - 3.0 * x[1] - 2.0;
        g[4] = (x[2] - 3.0).powi(2) + x[3] - 4.0;
        g[5] = 4.0 - (x[4] - 3.0).powi(2) - x[5];
    }
    fn front_candidates(&self) -> Option<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(5 * SEGMENT_STEPS);
        for &t in &linspace(1.0, 5.0, SEGMENT_STEPS) {
            out.push(vec![5.0, 1.0, t, 0.0, 5.0, 0.0]);
            out.push(vec![5.0, 1.0, t, 0.0, 1.0, 0.0]);
            out.push(vec![0.0, 2.0, t, 0.0, 1.0, 0.0]);
        }
        for &t in &linspace(2.0, 5.0, SEGMENT_STEPS) {
            out.push(vec![t, (t - 2.0) / 3.0, 1.0, 0.0, 1.0, 0.0]);
        }
        for &t in &linspace(0.0, 1.0, SEGMENT_STEPS) {
            out.push(vec![t, 2.0 - t, 1.0, 0.0, 1.0, 0.0]);
        }
        Some(out)
    }
}

/// Deb's two-variable ratio problem with two linear constraints.
struct Constr {
    lower: [f64; 2],
    upper: [f64; 2],
}

impl Cmop for Constr {
    fn name(&self) -> &str {
        "constr"
    }
    fn objectives(&self) -> usize {
        2
    }
    fn variables(&self) -> usize {
        2
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn inequalities(&self) -> usize {
        2
    }
    fn equalities(&self) -> usize {
        0
    }
    fn evaluate_raw(&self, x: &[f64], f: &mut [f64], g: &mut [f64], _h: &mut [f64]) {
        let (x1, x2) = (x[0], x[1]);
        f[0] = x1;
        f[1] = (1.0 + x2) / x1;
        g[0] = 6.0 - 9.0 * x1 - x2;
        g[1] = 1.0 - 9.0 * x1 + x2;
    }
    fn front_candidates(&self) -> Option<Vec<Vec<f64>>> {
        Some(grid_2d(&self.lower, &self.upper, GRID_2D))
    }
}

/// Synthetic multimodal problem: a Rastrigin tail drives the distance
/// function `g`, and a wavy band above the unconstrained front is cut out,
/// leaving a disconnected constrained front.
struct SynthMm {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

const SYNTH_MM_DIM: usize = 10;

impl SynthMm {
    fn distance_term(x: &[f64]) -> f64 {
        let d = x.len();
        let tail: f64 = x[1..]
            .iter()
            .map(|&v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum();
        1.0 + 10.0 * (d - 1) as f64 + tail
    }
}

impl Cmop for SynthMm {
    fn name(&self) -> &str {
        "synth-mm"
    }
    fn objectives(&self) -> usize {
        2
    }
    fn variables(&self) -> usize {
        SYNTH_MM_DIM
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn inequalities(&self) -> usize {
        1
    }
    fn equalities(&self) -> usize {
        0
    }
    fn evaluate_raw(&self, x: &[f64], f: &mut [f64], g: &mut [f64], _h: &mut [f64]) {
        let gx = Self::distance_term(x);
        f[0] = x[0];
        f[1] = gx * (1.0 - (x[0] / gx).sqrt());
        g[0] = 1.0 + 0.3 * (5.0 * PI * f[0]).sin() - f[0] - f[1];
    }
    fn front_candidates(&self) -> Option<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(2 * SEGMENT_STEPS);
        // Family (a): zero tail, the unconstrained front f2 = 1 - sqrt(f1);
        // the feasibility filter keeps the parts outside the wavy band.
        for &t in &linspace(0.0, 1.0, SEGMENT_STEPS) {
            let mut x = vec![0.0; SYNTH_MM_DIM];
            x[0] = t;
            out.push(x);
        }
        // Family (b): points sitting on the constraint boundary where the
        // band covers the unconstrained front. Invert f2 = g - sqrt(f1*g)
        // for g, then solve the per-variable tail level by bisection.
        for &t in &linspace(0.0, 1.0, SEGMENT_STEPS) {
            let f2b = 1.0 + 0.3 * (5.0 * PI * t).sin() - t + 1e-9;
            if f2b < 0.0 {
                continue;
            }
            let u = (t.sqrt() + (t + 4.0 * f2b).sqrt()) / 2.0;
            let g_target = u * u;
            if g_target < 1.0 {
                continue;
            }
            let phi_target = (g_target - 1.0 - 10.0 * (SYNTH_MM_DIM - 1) as f64)
                / (SYNTH_MM_DIM - 1) as f64;
            let phi = |s: f64| s * s - 10.0 * (2.0 * PI * s).cos();
            // phi increases from -10 at s=0 to 10.25 at s=0.5.
            let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if phi(mid) < phi_target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s = 0.5 * (lo + hi);
            let mut x = vec![s; SYNTH_MM_DIM];
            x[0] = t;
            out.push(x);
        }
        Some(out)
    }
}

/// Registry order is fixed; harness output tables follow it.
pub fn builtin_names() -> &'static [&'static str] {
    &["bnh", "srn", "tnk", "osy", "constr", "synth-mm"]
}

/// Looks up a built-in problem by (case-insensitive) name.
pub fn builtin(name: &str) -> Option<ProblemHandle> {
    let handle: ProblemHandle = match name.to_ascii_lowercase().as_str() {
        "bnh" => Arc::new(Bnh {
            lower: [0.0, 0.0],
            upper: [5.0, 3.0],
        }),
        "srn" => Arc::new(Srn {
            lower: [-20.0, -20.0],
            upper: [20.0, 20.0],
        }),
        "tnk" => Arc::new(Tnk {
            lower: [0.0, 0.0],
            upper: [PI, PI],
        }),
        "osy" => Arc::new(Osy {
            lower: [0.0, 0.0, 1.0, 0.0, 1.0, 0.0],
            upper: [10.0, 10.0, 5.0, 6.0, 5.0, 10.0],
        }),
        "constr" => Arc::new(Constr {
            lower: [0.1, 0.0],
            upper: [1.0, 5.0],
        }),
        "synth-mm" => Arc::new(SynthMm {
            lower: {
                let mut lo = vec![-1.0; SYNTH_MM_DIM];
                lo[0] = 0.0;
                lo
            },
            upper: vec![1.0; SYNTH_MM_DIM],
        }),
        _ => return None,
    };
    Some(handle)
}

/// Hypervolume reference point derived from a reference front: the nadir
/// pushed outward by 10% of the front's span per objective. Degenerate
/// spans fall back to a unit margin so ideal < reference always holds.
pub fn hv_reference_from_front(front: &[Vec<f64>]) -> Vec<f64> {
    let ideal = ideal_point(front);
    let nadir = nadir_point(front);
    nadir
        .iter()
        .zip(&ideal)
        .map(|(&n, &i)| {
            let span = n - i;
            n + 0.1 * if span > 1e-12 { span } else { 1.0 }
        })
        .collect()
}

fn descriptor_for(problem: &dyn Cmop) -> ProblemDescriptor {
    let front = generate_front(problem, DESCRIPTOR_FRONT_N)
        .expect("built-in problems ship a front generator");
    let objectives: Vec<Vec<f64>> = front.into_iter().map(|p| p.objectives).collect();
    ProblemDescriptor {
        name: problem.name().to_string(),
        objectives: problem.objectives(),
        variables: problem.variables(),
        lower: problem.lower().to_vec(),
        upper: problem.upper().to_vec(),
        inequalities: problem.inequalities(),
        equalities: problem.equalities(),
        hv_reference: hv_reference_from_front(&objectives),
        delta: DEFAULT_DELTA,
    }
}

/// Descriptors for every built-in problem, in registry order. Reference
/// fronts are generated once per process to derive `hv_reference`.
pub fn builtin_problems() -> &'static [ProblemDescriptor] {
    static DESCRIPTORS: OnceLock<Vec<ProblemDescriptor>> = OnceLock::new();
    DESCRIPTORS.get_or_init(|| {
        builtin_names()
            .iter()
            .map(|name| descriptor_for(builtin(name).unwrap().as_ref()))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::evaluate;

    #[test]
    fn bnh_at_origin() {
        let p = builtin("bnh").unwrap();
        let e = evaluate(p.as_ref(), &[0.0, 0.0]).unwrap();
        assert_eq!(e.objectives, vec![0.0, 50.0]);
        // (0-5)^2 + 0^2 = 25 <= 25 and (0-8)^2 + (0+3)^2 = 73 >= 7.7.
        assert_eq!(e.g_values[0], 0.0);
        assert_eq!(e.g_values[1], 7.7 - 73.0);
        assert_eq!(e.cv, 0.0);
    }

    #[test]
    fn constr_at_known_point() {
        let p = builtin("constr").unwrap();
        let e = evaluate(p.as_ref(), &[1.0, 0.0]).unwrap();
        assert_eq!(e.objectives, vec![1.0, 1.0]);
        assert_eq!(e.cv, 0.0);
    }

    #[test]
    fn tnk_descriptor_shape() {
        let p = builtin("tnk").unwrap();
        assert_eq!(p.objectives(), 2);
        assert_eq!(p.variables(), 2);
        assert_eq!(p.lower(), &[0.0, 0.0]);
        assert_eq!(p.upper(), &[PI, PI]);
    }

    #[test]
    fn osy_descriptor_shape() {
        let p = builtin("osy").unwrap();
        assert_eq!(p.objectives(), 2);
        assert_eq!(p.variables(), 6);
        assert_eq!(p.inequalities(), 6);
    }

    #[test]
    fn evaluate_is_pure() {
        let p = builtin("synth-mm").unwrap();
        let x: Vec<f64> = (0..10).map(|i| 0.05 * i as f64).collect();
        let a = evaluate(p.as_ref(), &x).unwrap();
        let b = evaluate(p.as_ref(), &x).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn every_descriptor_passes_its_invariants() {
        let descriptors = builtin_problems();
        assert_eq!(descriptors.len(), builtin_names().len());
        for d in descriptors {
            d.validate().unwrap();
        }
    }

    #[test]
    fn hv_reference_covers_front() {
        for name in builtin_names() {
            let p = builtin(name).unwrap();
            let front = crate::problems::sample_reference_front(p.as_ref(), 500).unwrap();
            let reference = hv_reference_from_front(&front);
            for point in &front {
                for (v, r) in point.iter().zip(&reference) {
                    assert!(v <= r, "{name}: front point exceeds hv reference");
                }
            }
        }
    }

    #[test]
    fn unknown_problem_is_none() {
        assert!(builtin("nope").is_none());
    }
}
