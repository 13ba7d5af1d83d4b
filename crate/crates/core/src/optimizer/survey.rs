//! Uniqueness survey: random restarts of contact refinement, clustered into
//! isometry classes.
//!
//! Every trial samples a configuration, relabels it toward the target's
//! contact structure, refines the equal-length system, and then projects
//! onto the target's known diameter. Accepted solutions are clustered by
//! `find_isometry`. Two views are reported: `classes` (diameter filter plus
//! exact contact-graph check, the fixed-diameter reading of uniqueness) and
//! `relaxed_classes` (equal-tangency solutions of the free-length phase,
//! any diameter).

use crate::catalog;
use crate::graph::{self, SmallGraph};
use crate::packing::{self, Configuration, NumericConfiguration};
use crate::torus::isometry::find_isometry;

use super::refine::{refine_at_length, refine_contacts, RefineOptions};
use super::SplitMix64;

/// Survey targets: contact graph plus the diameter of its cataloged
/// embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurveyTarget {
    K33,
    K5,
}

impl SurveyTarget {
    pub fn parse(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "k33" | "k3,3" => Some(SurveyTarget::K33),
            "k5" => Some(SurveyTarget::K5),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurveyTarget::K33 => "K3,3",
            SurveyTarget::K5 => "K5",
        }
    }

    pub fn point_count(&self) -> usize {
        match self {
            SurveyTarget::K33 => 6,
            SurveyTarget::K5 => 5,
        }
    }

    pub fn graph(&self) -> SmallGraph {
        let name = match self {
            SurveyTarget::K33 => "K33",
            SurveyTarget::K5 => "K5",
        };
        graph::named_graph(name).expect("catalog name")
    }

    /// Packing diameter of the cataloged embedding.
    pub fn expected_diameter(&self) -> f64 {
        match self {
            SurveyTarget::K33 => (25.0f64 / 162.0).sqrt(),
            SurveyTarget::K5 => 0.2f64.sqrt(),
        }
    }

    fn catalog_configuration(&self) -> NumericConfiguration {
        match self {
            SurveyTarget::K33 => catalog::k33_config().to_numeric(),
            SurveyTarget::K5 => catalog::k5_config().to_numeric(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SurveyParams {
    pub seed: u64,
    pub refine: RefineOptions,
    /// Contact classification tolerance for the maximal-contact check.
    pub contact_tol: f64,
    /// Acceptance window around the target's expected diameter.
    pub diameter_tol: f64,
    /// Equivalence tolerance for isometry clustering; looser than the
    /// refinement tolerance so one true class does not split numerically.
    pub cluster_tol: f64,
    /// Perturbation half-width for the trial seeded from the catalog.
    pub seed_noise: f64,
}

impl Default for SurveyParams {
    fn default() -> Self {
        SurveyParams {
            seed: 0,
            refine: RefineOptions::default(),
            contact_tol: 1e-9,
            diameter_tol: 1e-9,
            cluster_tol: 1e-7,
            seed_noise: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SurveyClass {
    pub representative: NumericConfiguration,
    pub hits: usize,
    pub diameter: f64,
    pub first_trial: usize,
}

#[derive(Debug, Clone)]
pub struct SurveyResult {
    pub trials: usize,
    /// Fixed-diameter classes: solutions whose contact graph is exactly the
    /// target and whose diameter matches the expected value.
    pub classes: Vec<SurveyClass>,
    /// Equal-tangency classes from the free-length phase, no diameter
    /// filter.
    pub relaxed_classes: Vec<SurveyClass>,
    /// Trials whose refinement did not converge.
    pub failures: usize,
    /// Trials that converged but failed the contact-graph check.
    pub rejected: usize,
}

fn cluster(
    classes: &mut Vec<SurveyClass>,
    solution: &NumericConfiguration,
    diameter: f64,
    trial: usize,
    tol: f64,
) {
    for class in classes.iter_mut() {
        if find_isometry(class.representative.points(), solution.points(), tol)
            .ok()
            .flatten()
            .is_some()
        {
            class.hits += 1;
            return;
        }
    }
    classes.push(SurveyClass {
        representative: solution.clone(),
        hits: 1,
        diameter,
        first_trial: trial,
    });
}

/// Relabel a configuration so its shortest pairs align with the target's
/// edges: the `|E|` closest pairs are matched to the target by isomorphism
/// when possible, otherwise the labeling is left alone.
fn match_labels_to_target(
    config: &NumericConfiguration,
    target: &SmallGraph,
) -> NumericConfiguration {
    let n = config.len();
    let pts = config.points();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((crate::torus::distance_squared(&pts[i], &pts[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"));
    let take = target.edge_count().min(pairs.len());
    let Ok(mut candidate) = SmallGraph::new(n) else {
        return config.clone();
    };
    for &(_, i, j) in pairs.iter().take(take) {
        let _ = candidate.add_edge(i, j);
    }
    match graph::is_isomorphic(target, &candidate) {
        Some(perm) => config.permuted(&perm),
        None => config.clone(),
    }
}

/// Run the survey: `trials` refinement attempts, the first seeded from the
/// cataloged embedding of the target (perturbed), the rest from uniform
/// random configurations.
pub fn uniqueness_survey(
    target: SurveyTarget,
    trials: usize,
    params: &SurveyParams,
) -> SurveyResult {
    let n = target.point_count();
    let target_graph = target.graph();
    let expected = target.expected_diameter();
    let mut result = SurveyResult {
        trials,
        classes: Vec::new(),
        relaxed_classes: Vec::new(),
        failures: 0,
        rejected: 0,
    };
    for trial in 0..trials {
        let mut rng = SplitMix64::keyed(params.seed, trial as u64);
        let start: NumericConfiguration = if trial == 0 {
            let base = target.catalog_configuration();
            let coords: Vec<(f64, f64)> = base
                .points()
                .iter()
                .map(|p| {
                    (
                        p.x() + rng.next_centered(params.seed_noise),
                        p.y() + rng.next_centered(params.seed_noise),
                    )
                })
                .collect();
            Configuration::from_raw(&coords, None).expect("finite")
        } else {
            let coords: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                .collect();
            Configuration::from_raw(&coords, None).expect("finite")
        };
        let relabeled = match_labels_to_target(&start, &target_graph);
        let Ok(free) = refine_contacts(&relabeled, &target_graph, &params.refine) else {
            result.failures += 1;
            continue;
        };
        // Maximal-contact check on the free-length solution: its contact
        // graph at the classification tolerance must be exactly the target.
        let free_ok = packing::contact_graph(&free.configuration, &params.contact_tol)
            .ok()
            .and_then(|cg| cg.to_small_graph().ok())
            .is_some_and(|small| graph::is_isomorphic(&small, &target_graph).is_some());
        if !free_ok {
            result.rejected += 1;
            continue;
        }
        let free_diameter = packing::packing_diameter(&free.configuration)
            .expect("refined configuration has >= 2 points");
        cluster(
            &mut result.relaxed_classes,
            &free.configuration,
            free_diameter,
            trial,
            params.cluster_tol,
        );
        // Project onto the expected diameter for the fixed-diameter reading.
        let Ok(snapped) =
            refine_at_length(&free.configuration, &target_graph, expected, &params.refine)
        else {
            continue;
        };
        let diameter = match packing::packing_diameter(&snapped.configuration) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if (diameter - expected).abs() > params.diameter_tol {
            continue;
        }
        let snapped_ok = packing::contact_graph(&snapped.configuration, &params.contact_tol)
            .ok()
            .and_then(|cg| cg.to_small_graph().ok())
            .is_some_and(|small| graph::is_isomorphic(&small, &target_graph).is_some());
        if !snapped_ok {
            continue;
        }
        cluster(
            &mut result.classes,
            &snapped.configuration,
            diameter,
            trial,
            params.cluster_tol,
        );
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_trial_lands_in_the_catalog_class() {
        let result = uniqueness_survey(SurveyTarget::K33, 1, &SurveyParams::default());
        assert_eq!(result.failures, 0);
        assert_eq!(result.classes.len(), 1);
        let table = catalog::k33_config().to_numeric();
        assert!(find_isometry(
            result.classes[0].representative.points(),
            table.points(),
            1e-7
        )
        .unwrap()
        .is_some());
    }

    #[test]
    fn pathological_iteration_cap_fails_every_trial() {
        let params = SurveyParams {
            refine: RefineOptions {
                max_iterations: 1,
                ..RefineOptions::default()
            },
            ..SurveyParams::default()
        };
        let result = uniqueness_survey(SurveyTarget::K33, 5, &params);
        assert!(result.classes.is_empty());
        assert_eq!(result.failures, 5);
    }

    #[test]
    fn k5_survey_finds_single_class() {
        let result = uniqueness_survey(SurveyTarget::K5, 12, &SurveyParams::default());
        assert!(!result.classes.is_empty());
        let table = catalog::k5_config().to_numeric();
        assert!(result.classes.iter().any(|c| {
            find_isometry(c.representative.points(), table.points(), 1e-6)
                .unwrap()
                .is_some()
        }));
    }

    #[test]
    fn class_representatives_are_pairwise_distinct() {
        let params = SurveyParams::default();
        let result = uniqueness_survey(SurveyTarget::K33, 60, &params);
        for list in [&result.classes, &result.relaxed_classes] {
            for a in 0..list.len() {
                for b in (a + 1)..list.len() {
                    assert!(find_isometry(
                        list[a].representative.points(),
                        list[b].representative.points(),
                        params.cluster_tol
                    )
                    .unwrap()
                    .is_none());
                }
            }
        }
    }

    #[test]
    fn survey_is_deterministic() {
        let params = SurveyParams::default();
        let a = uniqueness_survey(SurveyTarget::K33, 8, &params);
        let b = uniqueness_survey(SurveyTarget::K33, 8, &params);
        assert_eq!(a.classes.len(), b.classes.len());
        assert_eq!(a.failures, b.failures);
        assert_eq!(a.rejected, b.rejected);
        for (x, y) in a.classes.iter().zip(&b.classes) {
            assert_eq!(x.hits, y.hits);
            assert_eq!(x.diameter.to_bits(), y.diameter.to_bits());
        }
    }
}
