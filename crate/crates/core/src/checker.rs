//! The convexity certifier: enumerate cells and facets, read off the
//! per-neuron sign conditions observed on single-switch facets, and
//! classify the network as convex, not convex, or inconclusive on the box.
//!
//! A violated condition is conclusive on its own: it exhibits a facet
//! across which gradient monotonicity fails. The full set of conditions is
//! also sufficient for convexity provided every facet where the slope
//! actually changes is a single-switch facet; when that degeneracy check
//! fails the exact region-pair oracle resolves the verdict (it needs no
//! single-switch structure), which leaves "inconclusive" only for
//! enumerations that reported incompleteness.

use serde::Serialize;
use serde_json::json;

use crate::network::{sample_gaussian, Architecture, Network, NeuronId, NeuronKind};
use crate::oracle::cpwl_convex_oracle;
use crate::parallel::parallel_map;
use crate::pathlift::{inner_product_fast, ActivationRestriction};
use crate::regions::{
    enumerate_regions, extract_frontiers, isolated_data, DomainBox, Frontier, Region,
    RegionOptions,
};
use crate::rng;
use crate::{geometry, AnalysisError, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Convex,
    NotConvex,
    Inconclusive,
}

/// One evaluated sign condition: the inner product of the path weight
/// products after `neuron` with one downstream activation state observed
/// where only `neuron` switches.
#[derive(Debug, Clone)]
pub struct ConditionRecord {
    pub neuron: NeuronId,
    pub restriction: ActivationRestriction,
    pub value: f64,
    pub satisfied: bool,
    /// Satisfied only thanks to the decision tolerance (value in
    /// `(-decision_tol, 0)`).
    pub marginal: bool,
}

/// Multi-switch facet diagnostic.
#[derive(Debug, Clone)]
pub struct Degeneracy {
    pub regions: (usize, usize),
    pub switching: Vec<NeuronId>,
    pub slope_change: bool,
}

#[derive(Debug, Clone)]
pub struct ConvexityReport {
    pub status: Status,
    pub conditions: Vec<ConditionRecord>,
    pub degeneracies: Vec<Degeneracy>,
    /// Hidden neurons that never switch inside the box; they impose no
    /// condition and do not block a convex verdict.
    pub vacuous_neurons: Vec<NeuronId>,
    pub assumption_holds: bool,
    /// Set when the exact oracle resolved a verdict the conditions alone
    /// could not (degenerate facets); holds the oracle's answer.
    pub oracle_cross_check: Option<bool>,
    /// Number of distinct affine pieces: activation cells merged across
    /// facets where the function's slope does not change.
    pub region_count: usize,
    /// Number of facet pieces across which the slope actually changes.
    pub frontier_count: usize,
    /// Raw activation-cell and facet counts before merging.
    pub cell_count: usize,
    pub facet_count: usize,
    pub complete: bool,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub tol: Tolerances,
    pub seed: u64,
    pub seed_points: usize,
    pub mc_samples: usize,
    /// Resolve degenerate cases with the exact region-pair oracle.
    pub fallback_oracle: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        let r = RegionOptions::default();
        CheckOptions {
            tol: r.tol,
            seed: r.seed,
            seed_points: r.seed_points,
            mc_samples: r.mc_samples,
            fallback_oracle: true,
        }
    }
}

impl CheckOptions {
    pub fn region_options(&self) -> RegionOptions {
        RegionOptions {
            tol: self.tol,
            seed: self.seed,
            seed_points: self.seed_points,
            mc_samples: self.mc_samples,
        }
    }
}

/// Everything the pipeline produced, for callers that want the geometry
/// alongside the report (demo, cross-checks).
pub struct CheckOutcome {
    pub report: ConvexityReport,
    pub regions: Vec<Region>,
    pub frontiers: Vec<Frontier>,
}

pub fn check_convexity(
    net: &Network,
    box_: &DomainBox,
    opts: &CheckOptions,
) -> Result<ConvexityReport, AnalysisError> {
    check_convexity_full(net, box_, opts).map(|o| o.report)
}

pub fn check_convexity_full(
    net: &Network,
    box_: &DomainBox,
    opts: &CheckOptions,
) -> Result<CheckOutcome, AnalysisError> {
    let enumeration = enumerate_regions(net, box_, &opts.region_options())?;
    let frontiers = extract_frontiers(net, &enumeration.regions, box_, &opts.tol)?;
    let iso = isolated_data(net, &frontiers, &enumeration.regions)?;
    let regions = enumeration.regions;

    let conditions = evaluate_conditions(net, &iso, &opts.tol)?;
    let violated = conditions.iter().any(|c| !c.satisfied);

    let slope_changes: Vec<bool> = frontiers
        .iter()
        .map(|f| slope_change(&regions[f.region_a], &regions[f.region_b], opts.tol.slope_tol))
        .collect();
    let assumption_holds = frontiers
        .iter()
        .zip(&slope_changes)
        .all(|(f, &changes)| !changes || f.is_single_switch());

    let degeneracies: Vec<Degeneracy> = frontiers
        .iter()
        .zip(&slope_changes)
        .filter(|(f, _)| !f.is_single_switch())
        .map(|(f, &changes)| Degeneracy {
            regions: (f.region_a, f.region_b),
            switching: f.switching.clone(),
            slope_change: changes,
        })
        .collect();

    let vacuous_neurons: Vec<NeuronId> = iso
        .per_neuron
        .iter()
        .filter(|(_, n)| n.never_switches)
        .map(|(&id, _)| id)
        .collect();

    let (region_count, frontier_count) = merged_counts(&regions, &frontiers, &slope_changes);

    let mut oracle_cross_check = None;
    let status = if violated {
        Status::NotConvex
    } else if assumption_holds && enumeration.complete {
        Status::Convex
    } else if opts.fallback_oracle && enumeration.complete {
        let verdict = cpwl_convex_oracle(&regions, &frontiers)?;
        oracle_cross_check = Some(verdict.convex);
        if verdict.convex {
            Status::Convex
        } else {
            Status::NotConvex
        }
    } else {
        Status::Inconclusive
    };

    let report = ConvexityReport {
        status,
        conditions,
        degeneracies,
        vacuous_neurons,
        assumption_holds,
        oracle_cross_check,
        region_count,
        frontier_count,
        cell_count: regions.len(),
        facet_count: frontiers.len(),
        complete: enumeration.complete,
        tolerances: opts.tol,
    };
    Ok(CheckOutcome { report, regions, frontiers })
}

/// Runs the same pipeline but stops after evaluating the sign conditions;
/// the records are necessary conditions only, with no sufficiency claim.
pub fn check_necessary(
    net: &Network,
    box_: &DomainBox,
    opts: &CheckOptions,
) -> Result<Vec<ConditionRecord>, AnalysisError> {
    let enumeration = enumerate_regions(net, box_, &opts.region_options())?;
    let frontiers = extract_frontiers(net, &enumeration.regions, box_, &opts.tol)?;
    let iso = isolated_data(net, &frontiers, &enumeration.regions)?;
    evaluate_conditions(net, &iso, &opts.tol)
}

fn evaluate_conditions(
    net: &Network,
    iso: &crate::regions::IsolatedData,
    tol: &Tolerances,
) -> Result<Vec<ConditionRecord>, AnalysisError> {
    let mut pairs: Vec<(NeuronId, ActivationRestriction)> = Vec::new();
    for (&id, data) in &iso.per_neuron {
        for r in &data.restrictions {
            pairs.push((id, r.clone()));
        }
    }
    let values = parallel_map(&pairs, |(id, r)| inner_product_fast(net, *id, r));
    let mut records = Vec::with_capacity(pairs.len());
    for ((neuron, restriction), value) in pairs.into_iter().zip(values) {
        let value = value?;
        let satisfied = value >= -tol.decision_tol;
        records.push(ConditionRecord {
            neuron,
            restriction,
            value,
            satisfied,
            marginal: satisfied && value < 0.0,
        });
    }
    Ok(records)
}

fn slope_change(a: &Region, b: &Region, slope_tol: f64) -> bool {
    a.f_affine
        .slope
        .iter()
        .zip(&b.f_affine.slope)
        .any(|(ua, ub)| (ua - ub).abs() > slope_tol)
}

/// Merges cells across slope-preserving facets (union-find) and counts the
/// resulting affine pieces and the slope-changing facet pieces.
fn merged_counts(
    regions: &[Region],
    frontiers: &[Frontier],
    slope_changes: &[bool],
) -> (usize, usize) {
    let mut parent: Vec<usize> = (0..regions.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut frontier_count = 0;
    for (f, &changes) in frontiers.iter().zip(slope_changes) {
        if changes {
            frontier_count += 1;
        } else {
            let (a, b) = (root(&mut parent, f.region_a), root(&mut parent, f.region_b));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = (0..regions.len()).map(|i| root(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    (roots.len(), frontier_count)
}

impl ConvexityReport {
    pub fn status_str(&self) -> &'static str {
        match self.status {
            Status::Convex => "convex",
            Status::NotConvex => "not_convex",
            Status::Inconclusive => "inconclusive",
        }
    }

    /// Report JSON; neuron ids are rendered with their names.
    pub fn to_json(&self, net: &Network) -> serde_json::Value {
        let conditions: Vec<serde_json::Value> = self
            .conditions
            .iter()
            .map(|c| {
                let restriction: serde_json::Map<String, serde_json::Value> = c
                    .restriction
                    .bits
                    .iter()
                    .map(|(&id, &b)| (net.name(id).to_string(), json!(if b { 1 } else { 0 })))
                    .collect();
                json!({
                    "neuron": net.name(c.neuron),
                    "restriction": restriction,
                    "value": c.value,
                    "satisfied": c.satisfied,
                    "marginal": c.marginal,
                })
            })
            .collect();
        let degeneracies: Vec<serde_json::Value> = self
            .degeneracies
            .iter()
            .map(|d| {
                json!({
                    "regions": [d.regions.0, d.regions.1],
                    "switching": d.switching.iter().map(|&id| net.name(id)).collect::<Vec<_>>(),
                    "slope_change": d.slope_change,
                })
            })
            .collect();
        json!({
            "status": self.status_str(),
            "region_count": self.region_count,
            "frontier_count": self.frontier_count,
            "cell_count": self.cell_count,
            "facet_count": self.facet_count,
            "conditions": conditions,
            "degeneracies": degeneracies,
            "vacuous_neurons": self.vacuous_neurons.iter().map(|&id| net.name(id)).collect::<Vec<_>>(),
            "assumption_holds": self.assumption_holds,
            "oracle_cross_check": self.oracle_cross_check,
            "complete": self.complete,
            "tolerances": self.tolerances,
        })
    }
}

/// Outcome counts of the one-hidden-layer verification run.
#[derive(Debug, Clone, Default)]
pub struct OneLayerSummary {
    pub trials: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// Draws rejected by the colinearity screen before reaching `trials`.
    pub screened_colinear: usize,
    /// Draws rejected because some hyperplane misses the test box, so the
    /// whole-space sign formula says nothing about convexity there.
    pub screened_unreachable: usize,
}

const ONE_LAYER_DIM: usize = 2;
const ONE_LAYER_WIDTH: usize = 4;
const ONE_LAYER_BOX: f64 = 10.0;
const COLINEARITY_TOL: f64 = 1e-9;

/// Samples one-hidden-layer Gaussian networks and asserts that the checker
/// verdict equals entrywise non-negativity of the output layer, which
/// characterizes convexity for such networks when no two first-layer
/// hyperplanes coincide. Draws failing that colinearity screen (probability
/// zero under the Gaussian) are skipped and counted, as are draws where a
/// neuron's hyperplane lies outside the test box: the sign formula
/// characterizes convexity on the whole space, and a kink beyond the box
/// cannot be seen (nor violated) inside it.
pub fn verify_one_hidden_layer_theorem(trials: usize, seed: u64) -> OneLayerSummary {
    let arch = Architecture::new(ONE_LAYER_DIM, vec![ONE_LAYER_WIDTH], false).unwrap();
    let box_ = DomainBox::centered(ONE_LAYER_DIM, ONE_LAYER_BOX);
    let mut summary = OneLayerSummary::default();
    let mut draw: u64 = 0;
    while summary.trials < trials {
        let net_seed = rng::derive_seed(&[seed, draw]);
        draw += 1;
        let net = sample_gaussian(&arch, net_seed);
        if !passes_colinearity_screen(&net) {
            summary.screened_colinear += 1;
            continue;
        }
        if !every_hyperplane_reaches(&net, ONE_LAYER_BOX) {
            summary.screened_unreachable += 1;
            continue;
        }
        summary.trials += 1;
        let expected = if net
            .edges()
            .iter()
            .filter(|e| net.kind(e.src) == NeuronKind::Hidden)
            .all(|e| e.weight >= 0.0)
        {
            Status::Convex
        } else {
            Status::NotConvex
        };
        let opts = CheckOptions { seed: net_seed, ..CheckOptions::default() };
        match check_convexity(&net, &box_, &opts) {
            Ok(report) if report.status == expected => summary.agreements += 1,
            _ => summary.disagreements += 1,
        }
    }
    summary
}

/// True iff every first-layer hyperplane `<w, x> + b = 0` crosses the open
/// box `[-half, half]^d`, i.e. `|b| < half * ||w||_1`.
fn every_hyperplane_reaches(net: &Network, half: f64) -> bool {
    net.hidden_ids().iter().all(|&id| {
        let w_l1: f64 = net
            .input_ids()
            .iter()
            .map(|&inp| {
                net.incoming(id)
                    .iter()
                    .find(|&&(src, _)| src == inp)
                    .map_or(0.0, |&(_, w)| w.abs())
            })
            .sum();
        net.bias(id).abs() < half * w_l1
    })
}

/// Augmented first-layer rows `(W[nu,:] | b[nu])` must be nonzero and
/// pairwise non-colinear.
pub fn passes_colinearity_screen(net: &Network) -> bool {
    let rows: Vec<Vec<f64>> = net
        .hidden_ids()
        .iter()
        .map(|&id| {
            let mut row: Vec<f64> = net
                .input_ids()
                .iter()
                .map(|&inp| {
                    net.incoming(id)
                        .iter()
                        .find(|&&(src, _)| src == inp)
                        .map_or(0.0, |&(_, w)| w)
                })
                .collect();
            row.push(net.bias(id));
            row
        })
        .collect();
    for row in &rows {
        // The weight part must be nonzero for the zero set to be a hyperplane.
        if row[..row.len() - 1].iter().all(|w| w.abs() <= COLINEARITY_TOL) {
            return false;
        }
    }
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            if geometry::row_rank(&[rows[i].clone(), rows[j].clone()], COLINEARITY_TOL) < 2 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{demo_network, NetworkBuilder};

    fn demo_box() -> DomainBox {
        DomainBox::centered(2, 3.0)
    }

    #[test]
    fn demo_network_is_certified_convex() {
        let net = demo_network();
        let report = check_convexity(&net, &demo_box(), &CheckOptions::default()).unwrap();
        assert_eq!(report.status, Status::Convex);
        assert!(report.assumption_holds);
        assert!(report.oracle_cross_check.is_none());
        assert_eq!(report.region_count, 6);
        assert_eq!(report.frontier_count, 8);
        assert_eq!(report.cell_count, 9);
        assert_eq!(report.facet_count, 12);
        assert!(report.conditions.iter().all(|c| c.satisfied));
        assert!(report.vacuous_neurons.is_empty());
        assert!(report.degeneracies.is_empty());
    }

    #[test]
    fn demo_mu1_condition_values() {
        let net = demo_network();
        let report = check_convexity(&net, &demo_box(), &CheckOptions::default()).unwrap();
        let mu1 = net.find("mu1").unwrap();
        let values: Vec<f64> = report
            .conditions
            .iter()
            .filter(|c| c.neuron == mu1)
            .map(|c| c.value)
            .collect();
        // Restrictions sorted: (0,0) -> 0, (0,1) -> 2, (1,1) -> 1.
        assert_eq!(values, vec![0.0, 2.0, 1.0]);
    }

    #[test]
    fn flipped_output_weight_is_not_convex() {
        // Same as the demo network but with output weights (1, -1).
        let mut b = NetworkBuilder::new();
        b.input("x1").input("x2");
        b.hidden("mu1", 0.0).hidden("mu2", 0.0);
        b.hidden("nu1", -1.0).hidden("nu2", -0.5);
        b.output("out", 0.0);
        b.edge("x1", "mu1", 1.0).edge("x2", "mu2", 1.0);
        b.edge("mu1", "nu1", -1.0).edge("mu2", "nu1", 1.0);
        b.edge("mu1", "nu2", 2.0).edge("mu2", "nu2", 1.0);
        b.edge("nu1", "out", 1.0).edge("nu2", "out", -1.0);
        let net = b.build().unwrap();
        let report = check_convexity(&net, &demo_box(), &CheckOptions::default()).unwrap();
        assert_eq!(report.status, Status::NotConvex);
        let nu2 = net.find("nu2").unwrap();
        let violated: Vec<_> = report.conditions.iter().filter(|c| !c.satisfied).collect();
        assert!(violated.iter().any(|c| c.neuron == nu2 && c.value == -1.0));
    }

    #[test]
    fn necessary_conditions_only() {
        let net = demo_network();
        let records = check_necessary(&net, &demo_box(), &CheckOptions::default()).unwrap();
        assert!(!records.is_empty());
        assert!(records.iter().all(|c| c.satisfied));
    }

    #[test]
    fn one_layer_negative_output_weight_violates_its_record() {
        let mut b = NetworkBuilder::new();
        b.input("x1").input("x2");
        b.hidden("h1", 0.3).hidden("h2", -0.2).hidden("h3", 0.1);
        b.output("o", 0.0);
        b.edge("x1", "h1", 1.0).edge("x2", "h1", 0.5);
        b.edge("x1", "h2", -0.7).edge("x2", "h2", 1.1);
        b.edge("x1", "h3", 0.4).edge("x2", "h3", -0.9);
        b.edge("h1", "o", 2.0).edge("h2", "o", -1.5).edge("h3", "o", 0.5);
        let net = b.build().unwrap();
        assert!(passes_colinearity_screen(&net));
        let box_ = DomainBox::centered(2, 5.0);
        let records = check_necessary(&net, &box_, &CheckOptions::default()).unwrap();
        let h2 = net.find("h2").unwrap();
        let rec = records.iter().find(|c| c.neuron == h2).unwrap();
        assert!(!rec.satisfied);
        assert_eq!(rec.value, -1.5);
        for c in records.iter().filter(|c| c.neuron != h2) {
            assert!(c.satisfied);
        }
    }

    #[test]
    fn vacuous_network_has_no_conditions() {
        let mut b = NetworkBuilder::new();
        b.input("x");
        b.hidden("h", 1000.0);
        b.output("o", 0.0);
        b.edge("x", "h", 1.0).edge("h", "o", -1.0);
        let net = b.build().unwrap();
        let box_ = DomainBox::centered(1, 3.0);
        let records = check_necessary(&net, &box_, &CheckOptions::default()).unwrap();
        assert!(records.is_empty());
        // And f is affine on the box, hence convex there, despite the
        // negative output weight of the vacuous neuron.
        let report = check_convexity(&net, &box_, &CheckOptions::default()).unwrap();
        assert_eq!(report.status, Status::Convex);
        assert_eq!(report.vacuous_neurons, vec![net.find("h").unwrap()]);
    }

    #[test]
    fn degenerate_concave_pair_resolved_by_oracle() {
        // f = -|x| built from colinear neurons: no single-switch facet, so
        // the conditions are empty and the oracle must settle it.
        let mut b = NetworkBuilder::new();
        b.input("x");
        b.hidden("p", 0.0).hidden("m", 0.0);
        b.output("o", 0.0);
        b.edge("x", "p", 1.0).edge("x", "m", -1.0);
        b.edge("p", "o", -1.0).edge("m", "o", -1.0);
        let net = b.build().unwrap();
        let box_ = DomainBox::centered(1, 2.0);
        let report = check_convexity(&net, &box_, &CheckOptions::default()).unwrap();
        assert_eq!(report.status, Status::NotConvex);
        assert!(!report.assumption_holds);
        assert_eq!(report.oracle_cross_check, Some(false));
        assert!(report.conditions.iter().all(|c| c.satisfied));

        // Same shape, but convex (f = |x|): oracle resolves to convex.
        let mut b = NetworkBuilder::new();
        b.input("x");
        b.hidden("p", 0.0).hidden("m", 0.0);
        b.output("o", 0.0);
        b.edge("x", "p", 1.0).edge("x", "m", -1.0);
        b.edge("p", "o", 1.0).edge("m", "o", 1.0);
        let net = b.build().unwrap();
        let report = check_convexity(&net, &box_, &CheckOptions::default()).unwrap();
        assert_eq!(report.status, Status::Convex);
        assert_eq!(report.oracle_cross_check, Some(true));
    }

    #[test]
    fn without_fallback_degenerate_cases_stay_inconclusive() {
        let mut b = NetworkBuilder::new();
        b.input("x");
        b.hidden("p", 0.0).hidden("m", 0.0);
        b.output("o", 0.0);
        b.edge("x", "p", 1.0).edge("x", "m", -1.0);
        b.edge("p", "o", -1.0).edge("m", "o", -1.0);
        let net = b.build().unwrap();
        let box_ = DomainBox::centered(1, 2.0);
        let opts = CheckOptions { fallback_oracle: false, ..CheckOptions::default() };
        let report = check_convexity(&net, &box_, &opts).unwrap();
        assert_eq!(report.status, Status::Inconclusive);
    }

    #[test]
    fn verdict_is_invariant_under_neuron_rescaling() {
        let net = demo_network();
        let base = check_convexity(&net, &demo_box(), &CheckOptions::default()).unwrap();
        for (slot, lambda) in [(0usize, 3.0), (2, 0.25)] {
            let id = net.hidden_ids()[slot];
            let scaled = net.rescaled(id, lambda).unwrap();
            let report = check_convexity(&scaled, &demo_box(), &CheckOptions::default()).unwrap();
            assert_eq!(report.status, base.status, "lambda {lambda}");
            assert_eq!(report.region_count, base.region_count);
            // Condition values scale by positive factors; signs survive.
            for (a, b) in base.conditions.iter().zip(&report.conditions) {
                assert_eq!(a.satisfied, b.satisfied);
                assert_eq!(a.value.signum(), b.value.signum());
            }
        }
    }

    #[test]
    fn input_skip_to_output_changes_nothing() {
        let net = demo_network();
        let base = check_convexity(&net, &demo_box(), &CheckOptions::default()).unwrap();
        let x1 = net.find("x1").unwrap();
        let x2 = net.find("x2").unwrap();
        let out = net.output_id();
        let skewed = net
            .adding_edge(x1, out, -0.75)
            .unwrap()
            .adding_edge(x2, out, 1.5)
            .unwrap();
        let report = check_convexity(&skewed, &demo_box(), &CheckOptions::default()).unwrap();
        assert_eq!(report.status, base.status);
        assert_eq!(report.conditions.len(), base.conditions.len());
        for (a, b) in base.conditions.iter().zip(&report.conditions) {
            assert_eq!(a.value, b.value, "condition values must be literally unchanged");
        }
    }

    #[test]
    fn purely_affine_network_is_convex() {
        let mut b = NetworkBuilder::new();
        b.input("x1").input("x2");
        b.output("o", 0.25);
        b.edge("x1", "o", -2.0).edge("x2", "o", 3.0);
        let net = b.build().unwrap();
        let report = check_convexity(&net, &DomainBox::centered(2, 3.0), &CheckOptions::default())
            .unwrap();
        assert_eq!(report.status, Status::Convex);
        assert_eq!(report.region_count, 1);
        assert_eq!(report.frontier_count, 0);
        assert!(report.conditions.is_empty());
    }

    #[test]
    fn one_layer_theorem_smoke() {
        let summary = verify_one_hidden_layer_theorem(25, 2024);
        assert_eq!(summary.trials, 25);
        assert_eq!(summary.disagreements, 0, "{summary:?}");
    }

    #[test]
    fn colinearity_screen_rejects_constructed_degeneracy() {
        // W1 = (1, -1)^T, b1 = 0: augmented rows colinear.
        let mut b = NetworkBuilder::new();
        b.input("x");
        b.hidden("h1", 0.0).hidden("h2", 0.0);
        b.output("o", 0.0);
        b.edge("x", "h1", 1.0).edge("x", "h2", -1.0);
        b.edge("h1", "o", 1.0).edge("h2", "o", -1.0);
        let net = b.build().unwrap();
        assert!(!passes_colinearity_screen(&net));
    }

    #[test]
    fn report_json_shape() {
        let net = demo_network();
        let report = check_convexity(&net, &demo_box(), &CheckOptions::default()).unwrap();
        let value = report.to_json(&net);
        assert_eq!(value["status"], "convex");
        assert_eq!(value["region_count"], 6);
        assert_eq!(value["frontier_count"], 8);
        assert!(value["conditions"].as_array().unwrap().len() >= 6);
        assert!(value["tolerances"]["zero_tol"].as_f64().is_some());
    }
}
