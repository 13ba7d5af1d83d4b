//! Numerical search for maximal-min-distance configurations on the torus.
//!
//! The max-min objective is optimized restart by restart: a smooth soft-min
//! surrogate of the pairwise squared distances is ascended while its
//! sharpness is annealed, then the exact minimal distance is polished with
//! supergradient steps. Runs are deterministic for a fixed seed: every
//! restart draws from its own counter-based random stream.

pub mod refine;
pub mod survey;

use thiserror::Error;

use crate::packing::{Configuration, NumericConfiguration};
use crate::torus::{min_displacement, TorusPoint};

pub use refine::{refine_contacts, RefineError, RefineOptions, RefineOutcome};
pub use survey::{uniqueness_survey, SurveyClass, SurveyParams, SurveyResult, SurveyTarget};

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("point count {0} out of range 2..=64")]
    BadPointCount(usize),
    #[error("invalid parameters: {0}")]
    BadParams(String),
}

/// Step-size policy for the surrogate ascent: multiplicative growth on
/// accepted steps, backtracking on rejected ones.
#[derive(Debug, Clone)]
pub struct StepRule {
    pub initial: f64,
    pub grow: f64,
    pub shrink: f64,
    pub min_step: f64,
}

impl Default for StepRule {
    fn default() -> Self {
        StepRule {
            initial: 0.05,
            grow: 1.2,
            shrink: 0.5,
            min_step: 1e-14,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizerParams {
    pub restarts: usize,
    /// Iteration cap per annealing stage (and for the final polish).
    pub max_iterations: usize,
    /// Strictly increasing sharpness schedule for the soft-min surrogate.
    pub softmin_beta_schedule: Vec<f64>,
    pub step_rule: StepRule,
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerParams {
    fn default() -> Self {
        OptimizerParams {
            restarts: 20,
            max_iterations: 400,
            softmin_beta_schedule: vec![50.0, 100.0, 200.0, 400.0, 800.0, 1600.0, 3200.0],
            step_rule: StepRule::default(),
            convergence_tol: 1e-12,
            seed: 0,
        }
    }
}

impl OptimizerParams {
    fn validate(&self) -> Result<(), OptimizeError> {
        if self.restarts < 1 {
            return Err(OptimizeError::BadParams("restarts must be >= 1".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(OptimizeError::BadParams(
                "convergence_tol must be positive".into(),
            ));
        }
        if self.softmin_beta_schedule.is_empty()
            || self.softmin_beta_schedule.windows(2).any(|w| w[1] <= w[0])
            || self.softmin_beta_schedule[0] <= 0.0
        {
            return Err(OptimizeError::BadParams(
                "beta schedule must be positive and strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// Counter-based splittable generator: SplitMix64 keyed by (seed, stream),
/// so parallel and serial trial orders agree bit for bit.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Stream `index` of the generator family keyed by `seed`.
    pub fn keyed(seed: u64, index: u64) -> Self {
        let mut mixer = SplitMix64::new(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let state = mixer.next_u64() ^ seed.rotate_left(32);
        SplitMix64 { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-half_width, half_width)`.
    pub fn next_centered(&mut self, half_width: f64) -> f64 {
        (self.next_f64() * 2.0 - 1.0) * half_width
    }
}

/// Raw coordinates used internally by the ascent (wrapped on demand).
type RawPoints = Vec<(f64, f64)>;

fn to_points(raw: &RawPoints) -> Vec<TorusPoint<f64>> {
    raw.iter()
        .map(|&(x, y)| TorusPoint::wrap(x, y).expect("ascent keeps coordinates finite"))
        .collect()
}

fn pairwise_d2(points: &[TorusPoint<f64>]) -> Vec<f64> {
    let n = points.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = min_displacement(&points[i], &points[j]);
            out.push(d.dx * d.dx + d.dy * d.dy);
        }
    }
    out
}

fn min_distance(points: &[TorusPoint<f64>]) -> f64 {
    pairwise_d2(points)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Soft minimum of the pairwise squared distances:
/// `-(1/beta) * ln sum exp(-beta * d2_ij)`, computed with a max shift for
/// stability. Approaches `min d2` from below as `beta` grows.
pub fn softmin_value(config: &NumericConfiguration, beta: f64) -> f64 {
    softmin_value_points(config.points(), beta)
}

fn softmin_value_points(points: &[TorusPoint<f64>], beta: f64) -> f64 {
    let d2 = pairwise_d2(points);
    let m = d2.iter().copied().fold(f64::INFINITY, f64::min);
    let s: f64 = d2.iter().map(|v| (-beta * (v - m)).exp()).sum();
    m - s.ln() / beta
}

/// Gradient of the soft-min surrogate with respect to the point coordinates.
pub fn softmin_gradient(config: &NumericConfiguration, beta: f64) -> Vec<(f64, f64)> {
    softmin_gradient_points(config.points(), beta)
}

fn softmin_gradient_points(points: &[TorusPoint<f64>], beta: f64) -> Vec<(f64, f64)> {
    let n = points.len();
    let d2 = pairwise_d2(points);
    let m = d2.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = d2.iter().map(|v| (-beta * (v - m)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut grad = vec![(0.0, 0.0); n];
    let mut idx = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let w = weights[idx] / total;
            idx += 1;
            let d = min_displacement(&points[i], &points[j]);
            // d(d2_ij)/d p_i = -2 d, d(d2_ij)/d p_j = +2 d.
            grad[i].0 += w * (-2.0 * d.dx);
            grad[i].1 += w * (-2.0 * d.dy);
            grad[j].0 += w * (2.0 * d.dx);
            grad[j].1 += w * (2.0 * d.dy);
        }
    }
    grad
}

/// Ascend the surrogate at fixed `beta` with the adaptive step rule.
fn ascend_stage(raw: &mut RawPoints, beta: f64, params: &OptimizerParams) {
    let rule = &params.step_rule;
    let mut step = rule.initial;
    let mut value = softmin_value_points(&to_points(raw), beta);
    for _ in 0..params.max_iterations {
        let grad = softmin_gradient_points(&to_points(raw), beta);
        let trial: RawPoints = raw
            .iter()
            .zip(&grad)
            .map(|(&(x, y), &(gx, gy))| (x + step * gx, y + step * gy))
            .collect();
        let trial_value = softmin_value_points(&to_points(&trial), beta);
        if trial_value > value {
            let gain = trial_value - value;
            *raw = trial;
            value = trial_value;
            step = (step * rule.grow).min(0.25);
            if gain < params.convergence_tol * value.abs().max(1.0) {
                break;
            }
        } else {
            step *= rule.shrink;
            if step < rule.min_step {
                break;
            }
        }
    }
}

/// Relative window that counts a pair as active during polishing.
const ACTIVE_PAIR_WINDOW: f64 = 1e-7;

/// Every lattice-translate displacement of the pair within the squared
/// cutoff. Optimal configurations are pinned by tangencies realized through
/// several translates at once, so polishing must push along all of them.
fn active_displacements(
    p: &TorusPoint<f64>,
    q: &TorusPoint<f64>,
    cutoff2: f64,
) -> Vec<(f64, f64)> {
    let (px, py) = (*p.x(), *p.y());
    let (qx, qy) = (*q.x(), *q.y());
    let mut out = Vec::new();
    for mx in -1i32..=1 {
        for my in -1i32..=1 {
            let dx = qx + mx as f64 - px;
            let dy = qy + my as f64 - py;
            if dx * dx + dy * dy <= cutoff2 {
                out.push((dx, dy));
            }
        }
    }
    out
}

/// Collective exact min-distance steps: push apart every pair currently at
/// (or tied with) the minimum, accepting only strict improvements.
fn collective_steps(raw: &mut RawPoints, params: &OptimizerParams) {
    let mut step = 0.02;
    for _ in 0..params.max_iterations {
        let points = to_points(raw);
        let n = points.len();
        let d2 = pairwise_d2(&points);
        let m = d2.iter().copied().fold(f64::INFINITY, f64::min);
        let cutoff = m * (1.0 + ACTIVE_PAIR_WINDOW);
        let mut grad = vec![(0.0, 0.0); n];
        for i in 0..n {
            for j in (i + 1)..n {
                for (dx, dy) in active_displacements(&points[i], &points[j], cutoff) {
                    let norm = (dx * dx + dy * dy).sqrt();
                    if norm == 0.0 {
                        continue;
                    }
                    grad[i].0 -= dx / norm;
                    grad[i].1 -= dy / norm;
                    grad[j].0 += dx / norm;
                    grad[j].1 += dy / norm;
                }
            }
        }
        let gnorm: f64 = grad
            .iter()
            .map(|&(x, y)| x * x + y * y)
            .sum::<f64>()
            .sqrt();
        if gnorm < 1e-15 {
            break;
        }
        let current = m.sqrt();
        let mut improved = false;
        while step >= 1e-16 {
            let trial: RawPoints = raw
                .iter()
                .zip(&grad)
                .map(|(&(x, y), &(gx, gy))| (x + step * gx / gnorm, y + step * gy / gnorm))
                .collect();
            if min_distance(&to_points(&trial)) > current {
                *raw = trial;
                step = (step * 1.5).min(0.05);
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
}

/// One-point-at-a-time coordinate ascent: move each point to enlarge its own
/// minimal distance, others fixed. Escapes the zigzag stalls the collective
/// direction hits on flat ridges.
fn single_point_sweeps(raw: &mut RawPoints, params: &OptimizerParams) {
    let n = raw.len();
    for _ in 0..params.max_iterations {
        let mut improved_any = false;
        for k in 0..n {
            let mut step = 0.02;
            for _ in 0..60 {
                let points = to_points(raw);
                let own_min = |p: &TorusPoint<f64>| -> f64 {
                    (0..n)
                        .filter(|&j| j != k)
                        .map(|j| {
                            let d = min_displacement(p, &points[j]);
                            d.dx * d.dx + d.dy * d.dy
                        })
                        .fold(f64::INFINITY, f64::min)
                };
                let current = own_min(&points[k]);
                let cutoff = current * (1.0 + ACTIVE_PAIR_WINDOW);
                let mut g = (0.0, 0.0);
                for j in 0..n {
                    if j == k {
                        continue;
                    }
                    for (dx, dy) in active_displacements(&points[k], &points[j], cutoff) {
                        let norm = (dx * dx + dy * dy).sqrt();
                        if norm == 0.0 {
                            continue;
                        }
                        g.0 -= dx / norm;
                        g.1 -= dy / norm;
                    }
                }
                let gnorm = (g.0 * g.0 + g.1 * g.1).sqrt();
                if gnorm < 1e-15 {
                    break;
                }
                let mut moved = false;
                while step >= 1e-16 {
                    let cand = TorusPoint::wrap(
                        raw[k].0 + step * g.0 / gnorm,
                        raw[k].1 + step * g.1 / gnorm,
                    )
                    .expect("finite");
                    if own_min(&cand) > current {
                        raw[k] = (*cand.x(), *cand.y());
                        step = (step * 1.5).min(0.05);
                        moved = true;
                        improved_any = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !moved {
                    break;
                }
            }
        }
        if !improved_any {
            break;
        }
    }
}

/// Window for collecting the tangency constraints the equalizer pins.
const TANGENCY_WINDOW: f64 = 1e-5;

/// Precision finisher: collect every displacement constraint near the
/// current minimum and Newton-equalize them. At a rigid optimum the active
/// constraints pin the configuration, so this lands at machine accuracy;
/// the result is kept only if the exact minimum actually improved.
fn tangency_polish(raw: &mut RawPoints) {
    let opts = refine::RefineOptions {
        tol: 5e-15,
        max_iterations: 60,
        ..refine::RefineOptions::default()
    };
    for _ in 0..3 {
        let points = to_points(raw);
        let current = min_distance(&points);
        let cutoff2 = current * current * (1.0 + TANGENCY_WINDOW);
        let n = points.len();
        let mut constraints = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let (px, py) = points[i].to_f64();
                let (qx, qy) = points[j].to_f64();
                for mx in -1i32..=1 {
                    for my in -1i32..=1 {
                        let dx = qx + mx as f64 - px;
                        let dy = qy + my as f64 - py;
                        if dx * dx + dy * dy <= cutoff2 {
                            constraints.push((i, j, (mx, my)));
                        }
                    }
                }
            }
        }
        let config = Configuration::new(points, None).expect("valid point count");
        let Ok(outcome) = refine::equalize_tangencies(&config, &constraints, &opts) else {
            return;
        };
        let refined: RawPoints = outcome
            .configuration
            .points()
            .iter()
            .map(|p| (*p.x(), *p.y()))
            .collect();
        if min_distance(&to_points(&refined)) > current {
            *raw = refined;
        } else {
            return;
        }
    }
}

/// Polish a configuration after annealing: continue sharpening the smooth
/// surrogate well past the user schedule (the smooth ascent cannot stall on
/// the flat ridges degenerate optima sit on), then finish with exact
/// min-distance local steps, collective and per-point, and a final
/// tangency equalization.
fn polish(raw: &mut RawPoints, params: &OptimizerParams) {
    let last_beta = *params
        .softmin_beta_schedule
        .last()
        .expect("schedule validated non-empty");
    let mut beta = last_beta;
    while beta < 2.0e8 {
        beta *= 4.0;
        ascend_stage(raw, beta, params);
    }
    for _ in 0..2 {
        collective_steps(raw, params);
        single_point_sweeps(raw, params);
    }
    tangency_polish(raw);
}

/// Result of a max-min search.
#[derive(Debug, Clone)]
pub struct Optimum {
    pub configuration: NumericConfiguration,
    pub diameter: f64,
    /// Restart index that produced the best configuration.
    pub best_restart: usize,
}

/// Maximize the minimal pairwise toroidal distance of `n` points.
///
/// Deterministic for fixed `params.seed`: restart `r` draws from the stream
/// keyed `(seed, r)`, and the best result is chosen by (diameter, restart
/// index), so any execution order agrees.
pub fn maximize_min_distance(
    n: usize,
    params: &OptimizerParams,
) -> Result<Optimum, OptimizeError> {
    if !(2..=64).contains(&n) {
        return Err(OptimizeError::BadPointCount(n));
    }
    params.validate()?;
    let mut best: Option<(f64, usize, RawPoints)> = None;
    for restart in 0..params.restarts {
        let mut rng = SplitMix64::keyed(params.seed, restart as u64);
        let mut raw: RawPoints = (0..n)
            .map(|_| (rng.next_f64() - 0.5, rng.next_f64() - 0.5))
            .collect();
        for &beta in &params.softmin_beta_schedule {
            ascend_stage(&mut raw, beta, params);
        }
        polish(&mut raw, params);
        let diameter = min_distance(&to_points(&raw));
        let better = match &best {
            None => true,
            Some((best_d, _, _)) => diameter > *best_d,
        };
        if better {
            best = Some((diameter, restart, raw));
        }
    }
    let (diameter, best_restart, raw) = best.expect("at least one restart");
    let configuration =
        Configuration::new(to_points(&raw), None).expect("n is within configuration limits");
    Ok(Optimum {
        configuration,
        diameter,
        best_restart,
    })
}
