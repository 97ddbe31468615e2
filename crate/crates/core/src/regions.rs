//! Enumeration of the polyhedral cells of the network function on a box,
//! the facets between neighboring cells with their switching neurons, and
//! per-neuron activation restrictions observed on single-switch facets.
//!
//! Cells are activation patterns with nonempty strict interior in the box.
//! Enumeration is a breadth-first search over single-bit flips through
//! facet adjacency, seeded from the box center and a handful of random
//! points; a Monte-Carlo sweep afterwards recovers cells the flip graph
//! missed (possible only in degenerate configurations) and flags the
//! enumeration incomplete when a sampled pattern cannot be certified.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand_chacha::ChaCha12Rng;

use crate::geometry::{strict_feasible, HalfspaceSystem};
use crate::network::{ActivationPattern, AffineForm, Network, NeuronId};
use crate::pathlift::{subgraph_after, ActivationRestriction};
use crate::rng;
use crate::{AnalysisError, Tolerances};

/// Input-dimension guard for region enumeration.
pub const MAX_DIM: usize = 16;
/// Hidden-neuron guard for region enumeration.
pub const MAX_HIDDEN: usize = 24;

/// Axis-aligned compact domain.
#[derive(Debug, Clone)]
pub struct DomainBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl DomainBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, AnalysisError> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(AnalysisError::Domain("box bounds must have equal nonzero length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b || !a.is_finite() || !b.is_finite()) {
            return Err(AnalysisError::Domain("box must satisfy lo < hi componentwise".into()));
        }
        Ok(DomainBox { lo, hi })
    }

    /// `[-half, half]^d`.
    pub fn centered(d: usize, half: f64) -> Self {
        DomainBox { lo: vec![-half; d], hi: vec![half; d] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn sample(&self, rng: &mut ChaCha12Rng) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(&a, &b)| rng::uniform(rng, a, b)).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a <= v && v <= b)
    }

    /// Strict box rows `x_i < hi_i`, `-x_i < -lo_i`.
    fn rows(&self) -> Vec<(Vec<f64>, f64)> {
        let d = self.dim();
        let mut rows = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut a = vec![0.0; d];
            a[i] = 1.0;
            rows.push((a.clone(), self.hi[i]));
            a[i] = -1.0;
            rows.push((a, -self.lo[i]));
        }
        rows
    }
}

/// One activation cell: a feasible pattern, its halfspace description, the
/// affine form of the network function on it, and a strictly interior
/// witness point.
#[derive(Debug, Clone)]
pub struct Region {
    pub pattern: ActivationPattern,
    pub hrep: HalfspaceSystem,
    pub f_affine: AffineForm,
    pub witness: Vec<f64>,
    pub margin: f64,
    /// Preactivation form of every hidden neuron under this pattern,
    /// indexed by hidden slot.
    pub zforms: Vec<AffineForm>,
}

impl Region {
    /// Strict interior membership test against the stored halfspaces.
    pub fn contains_strictly(&self, x: &[f64]) -> bool {
        self.hrep.rows.iter().all(|r| {
            let lhs: f64 = r.a.iter().zip(x).map(|(a, b)| a * b).sum();
            lhs < r.b
        })
    }
}

/// Facet shared by two cells: the set of neurons whose activation switches
/// across it, a point in its relative interior, and the unit normal
/// pointing from `region_a` into `region_b`.
#[derive(Debug, Clone)]
pub struct Frontier {
    pub region_a: usize,
    pub region_b: usize,
    pub switching: Vec<NeuronId>,
    pub witness: Vec<f64>,
    pub normal: Vec<f64>,
}

impl Frontier {
    pub fn is_single_switch(&self) -> bool {
        self.switching.len() == 1
    }
}

/// Result of region enumeration. `complete` is false when a Monte-Carlo
/// point exhibited a pattern whose cell could not be certified feasible at
/// the margin tolerance (razor-thin cell), or a facet led to an
/// unconfirmable neighbor.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub regions: Vec<Region>,
    pub complete: bool,
}

/// Knobs for the enumeration search. Defaults follow the documented
/// tolerances; the seed only influences which interior points seed the
/// search, never the final (canonically sorted) region list on complete
/// enumerations.
#[derive(Debug, Clone)]
pub struct RegionOptions {
    pub tol: Tolerances,
    pub seed: u64,
    pub seed_points: usize,
    pub mc_samples: usize,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions { tol: Tolerances::default(), seed: 0x5eed, seed_points: 64, mc_samples: 4096 }
    }
}

const ZERO_NORMAL: f64 = 1e-12;
/// Monte-Carlo points closer than this to any hyperplane are not used for
/// recovery; anything farther away must sit in a certifiable cell.
const MC_INTERIOR: f64 = 1e-5;

fn neuron_row(form: &AffineForm, active: bool) -> (Vec<f64>, f64) {
    // z > 0  <=>  <-c, x> < e;   z < 0  <=>  <c, x> < -e.
    if active {
        (form.slope.iter().map(|v| -v).collect(), form.offset)
    } else {
        (form.slope.clone(), -form.offset)
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

/// Builds the region for `pattern` if its strict system has interior.
fn build_region(
    net: &Network,
    box_: &DomainBox,
    pattern: &ActivationPattern,
    tol: &Tolerances,
) -> Result<Option<Region>, AnalysisError> {
    let lin = net.linearize(pattern).map_err(AnalysisError::Network)?;
    let zforms: Vec<AffineForm> =
        net.hidden_ids().iter().map(|&id| lin.form(id).clone()).collect();
    let mut sys = HalfspaceSystem::new();
    for (slot, form) in zforms.iter().enumerate() {
        if max_abs(&form.slope) <= ZERO_NORMAL {
            // Constant preactivation: either the pattern bit matches its
            // sign (row vacuous) or the pattern is infeasible outright.
            let consistent =
                if pattern.bit(slot) { form.offset > 0.0 } else { form.offset <= 0.0 };
            if consistent {
                continue;
            }
            return Ok(None);
        }
        let (a, b) = neuron_row(form, pattern.bit(slot));
        sys.push(a, b, true);
    }
    for (a, b) in box_.rows() {
        sys.push(a, b, true);
    }
    let witness = strict_feasible(&sys, &[], tol.margin_tol)?;
    Ok(witness.map(|w| Region {
        pattern: pattern.clone(),
        hrep: sys,
        f_affine: lin.output_form().clone(),
        witness: w.point,
        margin: w.margin,
        zforms,
    }))
}

/// Enumerates every activation cell with nonempty interior in the box.
pub fn enumerate_regions(
    net: &Network,
    box_: &DomainBox,
    opts: &RegionOptions,
) -> Result<Enumeration, AnalysisError> {
    let d = net.input_dim();
    if box_.dim() != d {
        return Err(AnalysisError::Domain(format!(
            "box dimension {} does not match input dimension {d}",
            box_.dim()
        )));
    }
    if d > MAX_DIM {
        return Err(AnalysisError::GuardRail(format!("input dimension {d} exceeds {MAX_DIM}")));
    }
    let h = net.hidden_ids().len();
    if h > MAX_HIDDEN {
        return Err(AnalysisError::GuardRail(format!("{h} hidden neurons exceed {MAX_HIDDEN}")));
    }

    let tol = &opts.tol;
    let mut rng = rng::seeded(rng::derive_seed(&[opts.seed, 0x007e_9105]));
    let mut regions: Vec<Region> = Vec::new();
    let mut by_pattern: BTreeMap<ActivationPattern, usize> = BTreeMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut complete = true;

    let try_add = |pattern: &ActivationPattern,
                       regions: &mut Vec<Region>,
                       by_pattern: &mut BTreeMap<ActivationPattern, usize>,
                       queue: &mut VecDeque<usize>|
     -> Result<Option<bool>, AnalysisError> {
        if by_pattern.contains_key(pattern) {
            return Ok(Some(false));
        }
        match build_region(net, box_, pattern, tol)? {
            Some(region) => {
                let idx = regions.len();
                by_pattern.insert(pattern.clone(), idx);
                regions.push(region);
                queue.push_back(idx);
                Ok(Some(true))
            }
            None => Ok(None),
        }
    };

    // Seed points: box center plus random interior samples.
    let mut seeds = vec![box_.center()];
    for _ in 0..opts.seed_points {
        seeds.push(box_.sample(&mut rng));
    }
    for x in &seeds {
        let fwd = net.forward(x).map_err(AnalysisError::Network)?;
        try_add(&fwd.pattern, &mut regions, &mut by_pattern, &mut queue)?;
    }

    // Single-flip BFS through facet adjacency, interleaved with the
    // Monte-Carlo recovery sweep for cells the flip graph cannot reach.
    let mut mc_left = opts.mc_samples;
    loop {
        while let Some(idx) = queue.pop_front() {
            for slot in 0..h {
                let (facet_sys, equality) = {
                    let region = &regions[idx];
                    let form = &region.zforms[slot];
                    if max_abs(&form.slope) <= ZERO_NORMAL {
                        continue;
                    }
                    let mut sys = HalfspaceSystem::new();
                    for (s, f) in region.zforms.iter().enumerate() {
                        if s == slot || max_abs(&f.slope) <= ZERO_NORMAL {
                            continue;
                        }
                        let (a, b) = neuron_row(f, region.pattern.bit(s));
                        sys.push(a, b, true);
                    }
                    for (a, b) in box_.rows() {
                        sys.push(a, b, true);
                    }
                    (sys, (form.slope.clone(), -form.offset))
                };
                if strict_feasible(&facet_sys, &[equality], tol.margin_tol)?.is_some() {
                    let neighbor = regions[idx].pattern.flipped(slot);
                    if try_add(&neighbor, &mut regions, &mut by_pattern, &mut queue)?.is_none() {
                        // A facet with no certifiable cell on its far side.
                        complete = false;
                    }
                }
            }
        }
        // Recovery sweep: resume BFS as soon as a missing cell shows up.
        let mut found = false;
        while mc_left > 0 {
            mc_left -= 1;
            let x = box_.sample(&mut rng);
            let fwd = net.forward(&x).map_err(AnalysisError::Network)?;
            let min_z = net
                .hidden_ids()
                .iter()
                .map(|id| fwd.preacts[id.index()].abs())
                .fold(f64::INFINITY, f64::min);
            if min_z <= MC_INTERIOR {
                continue;
            }
            if by_pattern.contains_key(&fwd.pattern) {
                continue;
            }
            match try_add(&fwd.pattern, &mut regions, &mut by_pattern, &mut queue)? {
                Some(true) => {
                    found = true;
                    break;
                }
                Some(false) => {}
                None => complete = false,
            }
        }
        if !found {
            break;
        }
    }

    // Canonical order: lexicographic by pattern bits, independent of the
    // search trajectory.
    regions.sort_by(|a, b| a.pattern.cmp(&b.pattern));
    Ok(Enumeration { regions, complete })
}

/// Finds every facet shared by two enumerated cells inside the open box.
///
/// A pair of cells shares a facet iff the preactivation hyperplanes of all
/// neurons on which their patterns differ coincide (rank one) and the
/// common hyperplane cuts a relatively open piece out of both closures.
pub fn extract_frontiers(
    net: &Network,
    regions: &[Region],
    box_: &DomainBox,
    tol: &Tolerances,
) -> Result<Vec<Frontier>, AnalysisError> {
    let mut frontiers = Vec::new();
    for i in 0..regions.len() {
        for j in (i + 1)..regions.len() {
            if let Some(frontier) = facet_between(net, regions, i, j, box_, tol)? {
                frontiers.push(frontier);
            }
        }
    }
    Ok(frontiers)
}

fn facet_between(
    net: &Network,
    regions: &[Region],
    i: usize,
    j: usize,
    box_: &DomainBox,
    tol: &Tolerances,
) -> Result<Option<Frontier>, AnalysisError> {
    let (ra, rb) = (&regions[i], &regions[j]);
    let diff = ra.pattern.diff_slots(&rb.pattern);
    debug_assert!(!diff.is_empty(), "distinct regions share a pattern");

    // All switching hyperplanes must coincide for a (d-1)-face to exist.
    let normals: Vec<Vec<f64>> = diff.iter().map(|&s| ra.zforms[s].slope.clone()).collect();
    if normals.iter().any(|n| max_abs(n) <= ZERO_NORMAL) {
        return Ok(None);
    }
    if crate::geometry::row_rank(&normals, 1e-9) != 1 {
        return Ok(None);
    }
    let augmented: Vec<Vec<f64>> = diff
        .iter()
        .map(|&s| {
            let f = &ra.zforms[s];
            let mut row = f.slope.clone();
            row.push(f.offset);
            row
        })
        .collect();
    if crate::geometry::row_rank(&augmented, 1e-9) != 1 {
        return Ok(None); // parallel but distinct hyperplanes
    }

    let mut sys = HalfspaceSystem::new();
    for (s, f) in ra.zforms.iter().enumerate() {
        if diff.contains(&s) || max_abs(&f.slope) <= ZERO_NORMAL {
            continue;
        }
        let (a, b) = neuron_row(f, ra.pattern.bit(s));
        sys.push(a, b, true);
    }
    for (a, b) in box_.rows() {
        sys.push(a, b, true);
    }
    let equalities: Vec<(Vec<f64>, f64)> =
        diff.iter().map(|&s| (ra.zforms[s].slope.clone(), -ra.zforms[s].offset)).collect();
    let Some(w) = strict_feasible(&sys, &equalities, tol.margin_tol)? else {
        return Ok(None);
    };

    // Orientation: step from region_a toward region_b.
    let rep = diff[0];
    let c = &ra.zforms[rep].slope;
    let len = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let sign = if ra.pattern.bit(rep) { -1.0 } else { 1.0 };
    let normal: Vec<f64> = c.iter().map(|v| sign * v / len).collect();

    let switching: Vec<NeuronId> = diff.iter().map(|&s| net.hidden_ids()[s]).collect();
    Ok(Some(Frontier { region_a: i, region_b: j, switching, witness: w.point, normal }))
}

/// Per-neuron activation data read off the facets.
#[derive(Debug, Clone, Default)]
pub struct NeuronIsolation {
    /// Distinct downstream activation states observed on single-switch
    /// facets of this neuron, sorted.
    pub restrictions: Vec<ActivationRestriction>,
    /// The neuron switches on no facet at all inside the box.
    pub never_switches: bool,
    /// The neuron switches only together with other neurons.
    pub degenerate_only: bool,
    /// Indices (into the frontier list) of multi-switch facets involving
    /// this neuron.
    pub multi_switch_frontiers: Vec<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct IsolatedData {
    pub per_neuron: BTreeMap<NeuronId, NeuronIsolation>,
}

/// Collects, for every hidden neuron, the downstream activation states
/// observed where only that neuron switches. Both cells adjacent to a
/// single-switch facet carry the same bits on the downstream subgraph;
/// a mismatch would mean the facet bookkeeping broke down and is an error.
pub fn isolated_data(
    net: &Network,
    frontiers: &[Frontier],
    regions: &[Region],
) -> Result<IsolatedData, AnalysisError> {
    let mut data = IsolatedData::default();
    for &id in net.hidden_ids() {
        data.per_neuron.insert(id, NeuronIsolation::default());
    }
    let mut seen: BTreeMap<NeuronId, BTreeSet<ActivationRestriction>> = BTreeMap::new();

    for (f_idx, frontier) in frontiers.iter().enumerate() {
        if frontier.is_single_switch() {
            let nu = frontier.switching[0];
            let sub = subgraph_after(net, nu)?;
            let ra = &regions[frontier.region_a];
            let rb = &regions[frontier.region_b];
            let mut bits = BTreeMap::new();
            for id in sub.interior_hidden(net) {
                let slot = net.hidden_slot(id).expect("hidden neuron has a slot");
                if ra.pattern.bit(slot) != rb.pattern.bit(slot) {
                    return Err(AnalysisError::ToleranceBreakdown(format!(
                        "cells adjacent to a single-switch facet of {} disagree on {}",
                        net.name(nu),
                        net.name(id)
                    )));
                }
                bits.insert(id, ra.pattern.bit(slot));
            }
            seen.entry(nu).or_default().insert(ActivationRestriction::new(bits));
        } else {
            for &nu in &frontier.switching {
                data.per_neuron.get_mut(&nu).unwrap().multi_switch_frontiers.push(f_idx);
            }
        }
    }

    for (&id, iso) in data.per_neuron.iter_mut() {
        if let Some(set) = seen.remove(&id) {
            iso.restrictions = set.into_iter().collect();
        }
        iso.never_switches = iso.restrictions.is_empty() && iso.multi_switch_frontiers.is_empty();
        iso.degenerate_only =
            iso.restrictions.is_empty() && !iso.multi_switch_frontiers.is_empty();
    }
    Ok(data)
}

/// Monte-Carlo membership statistics for a region list.
#[derive(Debug, Clone, Default)]
pub struct CoverageStats {
    pub samples: usize,
    /// Points skipped as too close to some hyperplane.
    pub near_boundary: usize,
    /// Points whose pattern matched exactly one region.
    pub matched: usize,
    /// Points (beyond the boundary filter) whose pattern matched no region.
    pub mismatched: usize,
}

/// Samples uniform points and matches their activation patterns against
/// the region list. With complete enumeration every point farther than
/// `z_filter` from all hyperplanes must match exactly one region.
pub fn coverage_check(
    net: &Network,
    regions: &[Region],
    box_: &DomainBox,
    samples: usize,
    seed: u64,
    z_filter: f64,
) -> Result<CoverageStats, AnalysisError> {
    let mut rng = rng::seeded(seed);
    let patterns: BTreeSet<&ActivationPattern> = regions.iter().map(|r| &r.pattern).collect();
    let mut stats = CoverageStats { samples, ..Default::default() };
    for _ in 0..samples {
        let x = box_.sample(&mut rng);
        let fwd = net.forward(&x).map_err(AnalysisError::Network)?;
        let min_z = net
            .hidden_ids()
            .iter()
            .map(|id| fwd.preacts[id.index()].abs())
            .fold(f64::INFINITY, f64::min);
        if min_z <= z_filter {
            stats.near_boundary += 1;
            continue;
        }
        if patterns.contains(&fwd.pattern) {
            stats.matched += 1;
        } else {
            stats.mismatched += 1;
        }
    }
    Ok(stats)
}
