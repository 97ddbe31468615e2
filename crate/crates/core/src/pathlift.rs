//! Products of weights along paths from a hidden neuron to the output, and
//! their inner products with downstream activation states.
//!
//! The quantity this module computes for a hidden neuron `nu` and a binary
//! assignment to the hidden neurons strictly after it is
//!
//! ```text
//!   sum over paths p = nu -> ... -> out  of
//!       (product of bits of the hidden neurons on p after nu)
//!     * (product of edge weights along p)
//! ```
//!
//! Two independent routes are provided: a bias-free forward pass on the
//! downstream subgraph (`inner_product_fast`, linear time) and explicit
//! path enumeration (`enumerate_paths` + `inner_product_explicit`,
//! exponential, used for cross-validation and small demos).

use std::collections::BTreeMap;

use crate::network::{Network, NeuronId, NeuronKind};
use crate::AnalysisError;

/// Path count guard for explicit enumeration.
pub const MAX_PATHS: u128 = 1_000_000;

/// Downstream subgraph of a hidden neuron: every node on a path from the
/// neuron to the output, with the induced edges.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub root: NeuronId,
    member: Vec<bool>,
    /// Nodes in network topological order (root first among them).
    pub nodes: Vec<NeuronId>,
}

impl Subgraph {
    pub fn contains(&self, id: NeuronId) -> bool {
        self.member[id.index()]
    }

    /// Hidden nodes other than the root; the domain of a restriction.
    pub fn interior_hidden<'a>(&'a self, net: &'a Network) -> impl Iterator<Item = NeuronId> + 'a {
        self.nodes
            .iter()
            .copied()
            .filter(move |&id| id != self.root && net.kind(id) == NeuronKind::Hidden)
    }

    /// Induced edges (both endpoints in the subgraph).
    pub fn edges<'a>(&'a self, net: &'a Network) -> impl Iterator<Item = (NeuronId, NeuronId, f64)> + 'a {
        self.nodes.iter().flat_map(move |&src| {
            net.outgoing(src)
                .iter()
                .filter(move |(dst, _)| self.member[dst.index()])
                .map(move |&(dst, w)| (src, dst, w))
        })
    }
}

/// Binary assignment to the hidden neurons of a downstream subgraph,
/// excluding its root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivationRestriction {
    pub bits: BTreeMap<NeuronId, bool>,
}

impl ActivationRestriction {
    pub fn new(bits: BTreeMap<NeuronId, bool>) -> Self {
        ActivationRestriction { bits }
    }

    pub fn get(&self, id: NeuronId) -> Option<bool> {
        self.bits.get(&id).copied()
    }
}

/// All paths from a root neuron to the output with their weight products
/// (the root's bias is not included).
#[derive(Debug, Clone)]
pub struct PathVector {
    pub root: NeuronId,
    pub entries: Vec<(Vec<NeuronId>, f64)>,
}

/// Largest subgraph with `nu` as single entry point and the network output
/// as exit: nodes reachable from `nu` that also reach the output.
pub fn subgraph_after(net: &Network, nu: NeuronId) -> Result<Subgraph, AnalysisError> {
    if net.kind(nu) != NeuronKind::Hidden {
        return Err(AnalysisError::Domain(format!(
            "subgraph root {} is not a hidden neuron",
            net.name(nu)
        )));
    }
    let n = net.num_neurons();
    let mut fwd = vec![false; n];
    fwd[nu.index()] = true;
    for &id in net.topo_order() {
        if fwd[id.index()] {
            for &(dst, _) in net.outgoing(id) {
                fwd[dst.index()] = true;
            }
        }
    }
    let mut back = vec![false; n];
    back[net.output_id().index()] = true;
    for &id in net.topo_order().iter().rev() {
        if back[id.index()] {
            for &(src, _) in net.incoming(id) {
                back[src.index()] = true;
            }
        }
    }
    let member: Vec<bool> = (0..n).map(|i| fwd[i] && back[i]).collect();
    let nodes = net.topo_order().iter().copied().filter(|id| member[id.index()]).collect();
    Ok(Subgraph { root: nu, member, nodes })
}

/// Inner product of the weight products over root-to-output paths with the
/// path activations induced by `restriction`, computed as a forward pass:
/// value 1 is injected at the root and propagated through the subgraph with
/// every bias zeroed and each hidden ReLU replaced by multiplication with
/// its restriction bit.
pub fn inner_product_fast(
    net: &Network,
    nu: NeuronId,
    restriction: &ActivationRestriction,
) -> Result<f64, AnalysisError> {
    let sub = subgraph_after(net, nu)?;
    check_domain(net, &sub, restriction)?;
    let mut val = vec![0.0; net.num_neurons()];
    val[nu.index()] = 1.0;
    for &id in &sub.nodes {
        if id == nu {
            continue;
        }
        let mut z = 0.0;
        for &(src, w) in net.incoming(id) {
            if sub.contains(src) {
                z += w * val[src.index()];
            }
        }
        val[id.index()] = match net.kind(id) {
            NeuronKind::Hidden => {
                if restriction.bits[&id] {
                    z
                } else {
                    0.0
                }
            }
            _ => z,
        };
    }
    Ok(val[net.output_id().index()])
}

/// Explicit enumeration of all root-to-output paths with weight products.
/// Guarded by a path-count DP so runaway networks fail fast.
pub fn enumerate_paths(net: &Network, nu: NeuronId) -> Result<PathVector, AnalysisError> {
    let sub = subgraph_after(net, nu)?;
    let count = count_paths(net, &sub, nu);
    if count > MAX_PATHS {
        return Err(AnalysisError::GuardRail(format!(
            "{count} paths from {} exceed the enumeration limit {MAX_PATHS}",
            net.name(nu)
        )));
    }
    let mut entries = Vec::with_capacity(count as usize);
    let mut prefix = vec![nu];
    walk(net, &sub, nu, 1.0, &mut prefix, &mut entries);
    Ok(PathVector { root: nu, entries })
}

fn walk(
    net: &Network,
    sub: &Subgraph,
    at: NeuronId,
    product: f64,
    prefix: &mut Vec<NeuronId>,
    out: &mut Vec<(Vec<NeuronId>, f64)>,
) {
    if at == net.output_id() {
        out.push((prefix.clone(), product));
        return;
    }
    for &(dst, w) in net.outgoing(at) {
        if sub.contains(dst) {
            prefix.push(dst);
            walk(net, sub, dst, product * w, prefix, out);
            prefix.pop();
        }
    }
}

fn count_paths(net: &Network, sub: &Subgraph, from: NeuronId) -> u128 {
    let mut cnt = vec![0u128; net.num_neurons()];
    cnt[net.output_id().index()] = 1;
    for &id in sub.nodes.iter().rev() {
        if id == net.output_id() {
            continue;
        }
        let mut c = 0u128;
        for &(dst, _) in net.outgoing(id) {
            if sub.contains(dst) {
                c = c.saturating_add(cnt[dst.index()]);
            }
        }
        cnt[id.index()] = c;
    }
    cnt[from.index()]
}

/// Inner product computed from an explicit path vector: each path
/// contributes its weight product times the product of restriction bits of
/// the hidden neurons it visits after the root.
pub fn inner_product_explicit(
    pv: &PathVector,
    restriction: &ActivationRestriction,
) -> f64 {
    let mut total = 0.0;
    'paths: for (path, weight) in &pv.entries {
        for &node in &path[1..] {
            if let Some(false) = restriction.bits.get(&node) {
                continue 'paths;
            }
        }
        total += weight;
    }
    total
}

fn check_domain(
    net: &Network,
    sub: &Subgraph,
    restriction: &ActivationRestriction,
) -> Result<(), AnalysisError> {
    let expected: Vec<NeuronId> = sub.interior_hidden(net).collect();
    let got: Vec<NeuronId> = restriction.bits.keys().copied().collect();
    let mut expected_sorted = expected;
    expected_sorted.sort();
    if expected_sorted != got {
        return Err(AnalysisError::Domain(format!(
            "restriction domain does not match the hidden neurons after {}",
            net.name(sub.root)
        )));
    }
    Ok(())
}

/// Evaluates the network two ways at `x`: the ordinary forward pass, and
/// the sum over all paths ending at the output of
/// `activation(path) * weight-product(path) * (input coordinate or bias)`.
/// The two must agree to roundoff; the identity exercises the full
/// path-product bookkeeping including bias paths.
pub fn full_pathlift_identity_check(
    net: &Network,
    x: &[f64],
) -> Result<(f64, f64), AnalysisError> {
    let total = total_path_count(net);
    if total > MAX_PATHS {
        return Err(AnalysisError::GuardRail(format!(
            "{total} total paths exceed the enumeration limit {MAX_PATHS}"
        )));
    }
    let fwd = net.forward(x).map_err(AnalysisError::Network)?;
    let active = |id: NeuronId| -> f64 {
        match net.kind(id) {
            NeuronKind::Hidden => {
                if fwd.preacts[id.index()] > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            _ => 1.0,
        }
    };

    let mut rhs = 0.0;
    let input_pos: BTreeMap<NeuronId, usize> =
        net.input_ids().iter().enumerate().map(|(i, &id)| (id, i)).collect();
    // DFS over all paths ending at the output, from every start neuron.
    let mut stack: Vec<(NeuronId, f64, f64)> = Vec::new(); // (node, weight product, activation product)
    for start in net.topo_order().iter().copied() {
        let source_term = match net.kind(start) {
            NeuronKind::Input => x[input_pos[&start]],
            _ => net.bias(start),
        };
        stack.push((start, 1.0, active(start)));
        while let Some((at, wprod, aprod)) = stack.pop() {
            if at == net.output_id() {
                rhs += aprod * wprod * source_term;
            }
            for &(dst, w) in net.outgoing(at) {
                stack.push((dst, wprod * w, aprod * active(dst)));
            }
        }
    }
    Ok((fwd.value, rhs))
}

fn total_path_count(net: &Network) -> u128 {
    let mut cnt = vec![0u128; net.num_neurons()];
    cnt[net.output_id().index()] = 1;
    for &id in net.topo_order().iter().rev() {
        if id == net.output_id() {
            continue;
        }
        let mut c = 0u128;
        for &(dst, _) in net.outgoing(id) {
            c = c.saturating_add(cnt[dst.index()]);
        }
        cnt[id.index()] = c;
    }
    cnt.iter().fold(0u128, |a, &b| a.saturating_add(b))
}
