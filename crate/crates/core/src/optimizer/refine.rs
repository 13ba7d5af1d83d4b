//! Contact-equation refinement: damped Gauss-Newton on the equal-length
//! residuals of a target contact graph.
//!
//! Residuals are `|p_j + m_ij - p_i|^2 - l^2` over the target's edges, with
//! the lattice offsets `m_ij` frozen from the initial guess, the common
//! length `l` an unknown, and point 0 pinned to remove the translational
//! gauge. Damping is accepted only on a decrease of the residual norm, so
//! the recorded history is monotone.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::graph::SmallGraph;
use crate::packing::{Configuration, NumericConfiguration};
use crate::torus::min_displacement;

#[derive(Debug, Error)]
pub enum RefineError {
    #[error("contact structure incompatible with target: {0}")]
    Structure(String),
    #[error("no convergence after {iterations} iterations (max residual {max_residual:.3e})")]
    NonConvergence { iterations: usize, max_residual: f64 },
}

#[derive(Debug, Clone)]
pub struct RefineOptions {
    /// Convergence threshold on the maximal absolute residual.
    pub tol: f64,
    pub max_iterations: usize,
    pub initial_damping: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            tol: 1e-12,
            max_iterations: 100,
            initial_damping: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RefineOutcome {
    pub configuration: NumericConfiguration,
    /// Common contact length the refinement converged to.
    pub contact_length: f64,
    pub iterations: usize,
    /// Residual sum of squares after every accepted step (including the
    /// initial state); strictly decreasing.
    pub residual_history: Vec<f64>,
}

struct FrozenSystem {
    /// Raw (lifted) coordinates; index 0 stays pinned.
    coords: Vec<(f64, f64)>,
    /// Per constraint: endpoints and frozen lattice offset. A pair may
    /// appear several times with different offsets (tangency through
    /// several translates).
    edges: Vec<(usize, usize, (f64, f64))>,
    length: f64,
}

impl FrozenSystem {
    fn new(initial: &NumericConfiguration, target: &SmallGraph) -> Result<Self, RefineError> {
        if initial.len() != target.n() {
            return Err(RefineError::Structure(format!(
                "configuration has {} points, target graph has {} vertices",
                initial.len(),
                target.n()
            )));
        }
        let pts = initial.points();
        let mut constraints = Vec::with_capacity(target.edge_count());
        for (i, j) in target.edges() {
            let d = min_displacement(&pts[i], &pts[j]);
            if d.norm_squared() == 0.0 {
                return Err(RefineError::Structure(format!(
                    "points {i} and {j} coincide in the initial guess"
                )));
            }
            constraints.push((i, j, d.offset));
        }
        Self::from_constraints(initial, &constraints)
    }

    fn from_constraints(
        initial: &NumericConfiguration,
        constraints: &[(usize, usize, (i32, i32))],
    ) -> Result<Self, RefineError> {
        if constraints.is_empty() {
            return Err(RefineError::Structure("no constraints to refine".into()));
        }
        let pts = initial.points();
        let coords: Vec<(f64, f64)> = pts.iter().map(|p| (*p.x(), *p.y())).collect();
        let mut edges = Vec::with_capacity(constraints.len());
        let mut sum2 = 0.0;
        for &(i, j, (mx, my)) in constraints {
            if i >= pts.len() || j >= pts.len() {
                return Err(RefineError::Structure(format!(
                    "constraint ({i}, {j}) out of range"
                )));
            }
            let vx = coords[j].0 + mx as f64 - coords[i].0;
            let vy = coords[j].1 + my as f64 - coords[i].1;
            let n2 = vx * vx + vy * vy;
            if n2 == 0.0 {
                return Err(RefineError::Structure(format!(
                    "points {i} and {j} coincide in the initial guess"
                )));
            }
            edges.push((i, j, (mx as f64, my as f64)));
            sum2 += n2;
        }
        let length = (sum2 / edges.len() as f64).sqrt();
        Ok(FrozenSystem {
            coords,
            edges,
            length,
        })
    }

    fn edge_vector(&self, e: usize) -> (f64, f64) {
        let (i, j, (mx, my)) = self.edges[e];
        (
            self.coords[j].0 + mx - self.coords[i].0,
            self.coords[j].1 + my - self.coords[i].1,
        )
    }

    fn residuals(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.edges.len(),
            (0..self.edges.len()).map(|e| {
                let (vx, vy) = self.edge_vector(e);
                vx * vx + vy * vy - self.length * self.length
            }),
        )
    }

    /// Unknowns: coordinates of points 1..n (2(n-1)) followed by `l`.
    fn unknown_count(&self) -> usize {
        2 * (self.coords.len() - 1) + 1
    }

    fn jacobian(&self) -> DMatrix<f64> {
        let m = self.edges.len();
        let p = self.unknown_count();
        let mut jac = DMatrix::zeros(m, p);
        for e in 0..m {
            let (i, j, _) = self.edges[e];
            let (vx, vy) = self.edge_vector(e);
            if i >= 1 {
                jac[(e, 2 * (i - 1))] = -2.0 * vx;
                jac[(e, 2 * (i - 1) + 1)] = -2.0 * vy;
            }
            if j >= 1 {
                jac[(e, 2 * (j - 1))] = 2.0 * vx;
                jac[(e, 2 * (j - 1) + 1)] = 2.0 * vy;
            }
            jac[(e, p - 1)] = -2.0 * self.length;
        }
        jac
    }

    fn apply_step(&mut self, delta: &DVector<f64>) {
        for k in 1..self.coords.len() {
            self.coords[k].0 += delta[2 * (k - 1)];
            self.coords[k].1 += delta[2 * (k - 1) + 1];
        }
        self.length += delta[self.unknown_count() - 1];
    }

    fn to_configuration(&self, label: Option<String>) -> NumericConfiguration {
        Configuration::from_raw(&self.coords, label).expect("refined coordinates are finite")
    }
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Refine a configuration toward equal contact lengths on the target graph.
pub fn refine_contacts(
    initial: &NumericConfiguration,
    target: &SmallGraph,
    opts: &RefineOptions,
) -> Result<RefineOutcome, RefineError> {
    let sys = FrozenSystem::new(initial, target)?;
    drive_lm(sys, initial.label().map(str::to_owned), opts)
}

/// Equalize an explicit set of tangency constraints (pair plus lattice
/// offset, so double tangencies enter individually). Used as the precision
/// finisher of the max-min search: at a rigid optimum the system is square
/// or overdetermined and Newton lands on it to machine accuracy.
pub fn equalize_tangencies(
    initial: &NumericConfiguration,
    constraints: &[(usize, usize, (i32, i32))],
    opts: &RefineOptions,
) -> Result<RefineOutcome, RefineError> {
    let sys = FrozenSystem::from_constraints(initial, constraints)?;
    drive_lm(sys, initial.label().map(str::to_owned), opts)
}

fn drive_lm(
    mut sys: FrozenSystem,
    label: Option<String>,
    opts: &RefineOptions,
) -> Result<RefineOutcome, RefineError> {
    let mut damping = opts.initial_damping;
    let mut residuals = sys.residuals();
    let mut history = vec![residuals.norm_squared()];
    if max_abs(&residuals) < opts.tol {
        return Ok(RefineOutcome {
            configuration: sys.to_configuration(label),
            contact_length: sys.length,
            iterations: 0,
            residual_history: history,
        });
    }
    for iteration in 1..=opts.max_iterations {
        let jac = sys.jacobian();
        let grad = jac.transpose() * &residuals;
        let hess = jac.transpose() * &jac;
        let mut stepped = false;
        for _ in 0..60 {
            let mut damped = hess.clone();
            for k in 0..damped.nrows() {
                damped[(k, k)] += damping;
            }
            let Some(delta) = damped.lu().solve(&(-&grad)) else {
                damping *= 10.0;
                continue;
            };
            let mut trial = FrozenSystem {
                coords: sys.coords.clone(),
                edges: sys.edges.clone(),
                length: sys.length,
            };
            trial.apply_step(&delta);
            let trial_residuals = trial.residuals();
            if trial_residuals.norm_squared() < residuals.norm_squared() {
                sys = trial;
                residuals = trial_residuals;
                history.push(residuals.norm_squared());
                damping = (damping / 3.0).max(1e-14);
                stepped = true;
                break;
            }
            damping *= 10.0;
            if damping > 1e14 {
                break;
            }
        }
        if max_abs(&residuals) < opts.tol {
            return Ok(RefineOutcome {
                configuration: sys.to_configuration(label),
                contact_length: sys.length.abs(),
                iterations: iteration,
                residual_history: history,
            });
        }
        if !stepped {
            return Err(RefineError::NonConvergence {
                iterations: iteration,
                max_residual: max_abs(&residuals),
            });
        }
    }
    Err(RefineError::NonConvergence {
        iterations: opts.max_iterations,
        max_residual: max_abs(&residuals),
    })
}

/// The fixed-length equations are singular at their solutions (the length
/// is critical there), so residuals shrink quadratically in the remaining
/// position error; driving them to machine level is what buys positions
/// good to ~1e-8.
const SNAP_TOL: f64 = 2e-15;

/// Newton projection onto the target's contact equations at a *fixed*
/// contact length, by truncated-SVD least-squares steps.
///
/// Used by the survey to land on a prescribed diameter: the free-length
/// system is a solution family along which the length varies, and pinning
/// the length selects the locally unique configuration on it.
pub fn refine_at_length(
    initial: &NumericConfiguration,
    target: &SmallGraph,
    length: f64,
    opts: &RefineOptions,
) -> Result<RefineOutcome, RefineError> {
    let mut sys = FrozenSystem::new(initial, target)?;
    sys.length = length;
    let mut history = Vec::new();
    let mut best_coords = sys.coords.clone();
    let mut best = f64::INFINITY;
    let mut stalled = 0usize;
    let max_iterations = opts.max_iterations.max(200);
    for _ in 0..max_iterations {
        let residuals = sys.residuals();
        history.push(residuals.norm_squared());
        let m = max_abs(&residuals);
        if m < best {
            best = m;
            best_coords = sys.coords.clone();
            stalled = 0;
        } else {
            stalled += 1;
        }
        if best < SNAP_TOL || stalled >= 6 {
            break;
        }
        // Coordinate block of the Jacobian only; l is held fixed.
        let jac_full = sys.jacobian();
        let p = sys.unknown_count();
        let jac = jac_full.columns(0, p - 1).into_owned();
        let svd = nalgebra::SVD::new(jac, true, true);
        let Ok(delta_coords) = svd.solve(&(-&residuals), 1e-8) else {
            break;
        };
        let mut delta = DVector::zeros(p);
        for k in 0..(p - 1) {
            delta[k] = delta_coords[k];
        }
        sys.apply_step(&delta);
    }
    sys.coords = best_coords;
    if best < SNAP_TOL {
        return Ok(RefineOutcome {
            configuration: sys.to_configuration(initial.label().map(str::to_owned)),
            contact_length: length,
            iterations: history.len(),
            residual_history: history,
        });
    }
    Err(RefineError::NonConvergence {
        iterations: history.len(),
        max_residual: best,
    })
}
