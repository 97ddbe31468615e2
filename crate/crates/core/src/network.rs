//! DAG ReLU network model: exact forward evaluation, activation patterns,
//! per-pattern affine linearization, constructors/samplers and JSON
//! persistence.
//!
//! A network is a weighted DAG of neurons. Input and output neurons are
//! linear; hidden neurons apply ReLU. There is exactly one output neuron.
//! Every hidden neuron must lie on a path from some input to the output;
//! dead neurons are rejected at construction so the neuron set of the model
//! matches the neuron set the convexity conditions quantify over.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::rng;

/// Identifier of a neuron inside one `Network`: a dense index, stable under
/// JSON round-trips because neuron order is preserved by save/load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeuronId(u32);

impl NeuronId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeuronKind {
    Input,
    Hidden,
    Output,
}

/// Activation applied to a neuron's preactivation. Inputs and the output
/// are linear; hidden neurons are ReLU. (A ReLU output is not supported.)
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    ReLU,
    Linear,
}

#[derive(Debug, Clone)]
pub struct Neuron {
    pub name: String,
    pub kind: NeuronKind,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub src: NeuronId,
    pub dst: NeuronId,
    pub weight: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum NetworkError {
    #[error("input has dimension {got}, network expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("edge relation contains a cycle")]
    Cycle,
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("duplicate neuron id {0}")]
    DuplicateName(String),
    #[error("unknown neuron id {0}")]
    UnknownNeuron(String),
    #[error("hidden neuron {0} is not on any input-to-output path")]
    DeadNeuron(String),
    #[error("network must have exactly one output neuron, found {0}")]
    OutputCount(usize),
    #[error("network must have at least one input neuron")]
    NoInputs,
    #[error("bias declared for input neuron {0}")]
    BiasOnInput(String),
    #[error("edge into input neuron {0}")]
    EdgeIntoInput(String),
    #[error("edge out of output neuron {0}")]
    EdgeFromOutput(String),
    #[error("network is not layered: {0}")]
    NotLayered(String),
    #[error("activation pattern does not cover the hidden neurons of this network")]
    PatternDomain,
    #[error("invalid structure: {0}")]
    Structure(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// One affine function `x -> <slope, x> + offset` on the input space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineForm {
    pub slope: Vec<f64>,
    pub offset: f64,
}

impl AffineForm {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.slope.len());
        self.slope.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.offset
    }

    fn zeros(d: usize) -> Self {
        AffineForm { slope: vec![0.0; d], offset: 0.0 }
    }
}

/// Binary activation state of every hidden neuron, 1 iff its preactivation
/// is strictly positive. Bits are ordered like `Network::hidden_ids()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActivationPattern {
    bits: Vec<bool>,
}

impl ActivationPattern {
    pub fn new(bits: Vec<bool>) -> Self {
        ActivationPattern { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, slot: usize) -> bool {
        self.bits[slot]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn flipped(&self, slot: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[slot] = !bits[slot];
        ActivationPattern { bits }
    }

    /// Hidden-neuron slots on which `self` and `other` differ.
    pub fn diff_slots(&self, other: &Self) -> Vec<usize> {
        debug_assert_eq!(self.len(), other.len());
        (0..self.bits.len()).filter(|&i| self.bits[i] != other.bits[i]).collect()
    }
}

/// Layered architecture description used by the samplers.
#[derive(Debug, Clone)]
pub struct Architecture {
    pub d: usize,
    pub widths: Vec<usize>,
    pub skip: bool,
}

impl Architecture {
    pub fn new(d: usize, widths: Vec<usize>, skip: bool) -> Result<Self, NetworkError> {
        if d < 1 {
            return Err(NetworkError::Structure("input dimension must be >= 1".into()));
        }
        if widths.is_empty() || widths.iter().any(|&w| w < 1) {
            return Err(NetworkError::Structure("all hidden widths must be >= 1".into()));
        }
        Ok(Architecture { d, widths, skip })
    }
}

/// Result of a forward pass.
#[derive(Debug, Clone)]
pub struct Forward {
    /// Network output value.
    pub value: f64,
    /// Preactivation per neuron index. For input neurons the entry holds
    /// the input coordinate itself.
    pub preacts: Vec<f64>,
    /// Activation bits, 1 iff the preactivation is strictly positive.
    pub pattern: ActivationPattern,
}

/// Affine forms of every neuron's preactivation under a frozen pattern.
#[derive(Debug, Clone)]
pub struct Linearization {
    forms: Vec<AffineForm>,
    output: NeuronId,
}

impl Linearization {
    /// Form of `z_nu` for hidden/output neurons; for input neurons, the
    /// coordinate projection.
    pub fn form(&self, id: NeuronId) -> &AffineForm {
        &self.forms[id.index()]
    }

    /// Slope and intercept of the network function on any region carrying
    /// the frozen pattern.
    pub fn output_form(&self) -> &AffineForm {
        &self.forms[self.output.index()]
    }
}

/// Immutable weighted DAG of neurons. All operations are pure functions,
/// safe to call concurrently on a shared network.
#[derive(Debug, Clone)]
pub struct Network {
    neurons: Vec<Neuron>,
    edges: Vec<Edge>,
    biases: Vec<f64>,
    incoming: Vec<Vec<(NeuronId, f64)>>,
    outgoing: Vec<Vec<(NeuronId, f64)>>,
    inputs: Vec<NeuronId>,
    output: NeuronId,
    hidden: Vec<NeuronId>,
    hidden_slot: Vec<usize>,
    topo: Vec<NeuronId>,
}

impl Network {
    pub fn input_dim(&self) -> usize {
        self.inputs.len()
    }

    pub fn input_ids(&self) -> &[NeuronId] {
        &self.inputs
    }

    pub fn output_id(&self) -> NeuronId {
        self.output
    }

    /// Hidden neurons in index order; activation patterns align to this.
    pub fn hidden_ids(&self) -> &[NeuronId] {
        &self.hidden
    }

    pub fn num_neurons(&self) -> usize {
        self.neurons.len()
    }

    pub fn neuron(&self, id: NeuronId) -> &Neuron {
        &self.neurons[id.index()]
    }

    pub fn name(&self, id: NeuronId) -> &str {
        &self.neurons[id.index()].name
    }

    pub fn kind(&self, id: NeuronId) -> NeuronKind {
        self.neurons[id.index()].kind
    }

    pub fn activation(&self, id: NeuronId) -> Activation {
        match self.kind(id) {
            NeuronKind::Hidden => Activation::ReLU,
            _ => Activation::Linear,
        }
    }

    pub fn bias(&self, id: NeuronId) -> f64 {
        self.biases[id.index()]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incoming(&self, id: NeuronId) -> &[(NeuronId, f64)] {
        &self.incoming[id.index()]
    }

    pub fn outgoing(&self, id: NeuronId) -> &[(NeuronId, f64)] {
        &self.outgoing[id.index()]
    }

    pub fn topo_order(&self) -> &[NeuronId] {
        &self.topo
    }

    pub fn find(&self, name: &str) -> Option<NeuronId> {
        self.neurons
            .iter()
            .position(|n| n.name == name)
            .map(|i| NeuronId(i as u32))
    }

    /// Slot of a hidden neuron in `hidden_ids()` order.
    pub fn hidden_slot(&self, id: NeuronId) -> Option<usize> {
        if self.kind(id) == NeuronKind::Hidden {
            Some(self.hidden_slot[id.index()])
        } else {
            None
        }
    }

    /// Exact forward pass. Deterministic; activation bit is 0 when the
    /// preactivation is exactly zero.
    pub fn forward(&self, x: &[f64]) -> Result<Forward, NetworkError> {
        if x.len() != self.input_dim() {
            return Err(NetworkError::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
            });
        }
        let n = self.neurons.len();
        let mut pre = vec![0.0; n];
        let mut post = vec![0.0; n];
        for (pos, &id) in self.inputs.iter().enumerate() {
            pre[id.index()] = x[pos];
            post[id.index()] = x[pos];
        }
        for &id in &self.topo {
            if self.kind(id) == NeuronKind::Input {
                continue;
            }
            let i = id.index();
            let mut z = self.biases[i];
            for &(src, w) in &self.incoming[i] {
                z += w * post[src.index()];
            }
            pre[i] = z;
            post[i] = match self.activation(id) {
                Activation::ReLU => z.max(0.0),
                Activation::Linear => z,
            };
        }
        let bits = self.hidden.iter().map(|id| pre[id.index()] > 0.0).collect();
        Ok(Forward {
            value: post[self.output.index()],
            preacts: pre,
            pattern: ActivationPattern::new(bits),
        })
    }

    /// Affine form of every preactivation when each hidden ReLU is replaced
    /// by multiplication with its pattern bit. The output form is the slope
    /// and intercept of the network function on regions with this pattern.
    pub fn linearize(&self, pattern: &ActivationPattern) -> Result<Linearization, NetworkError> {
        if pattern.len() != self.hidden.len() {
            return Err(NetworkError::PatternDomain);
        }
        let d = self.input_dim();
        let n = self.neurons.len();
        let mut pre: Vec<AffineForm> = vec![AffineForm::zeros(d); n];
        let mut post: Vec<AffineForm> = vec![AffineForm::zeros(d); n];
        for (pos, &id) in self.inputs.iter().enumerate() {
            pre[id.index()].slope[pos] = 1.0;
            post[id.index()].slope[pos] = 1.0;
        }
        for &id in &self.topo {
            if self.kind(id) == NeuronKind::Input {
                continue;
            }
            let i = id.index();
            let mut form = AffineForm::zeros(d);
            form.offset = self.biases[i];
            for &(src, w) in &self.incoming[i] {
                let s = &post[src.index()];
                for k in 0..d {
                    form.slope[k] += w * s.slope[k];
                }
                form.offset += w * s.offset;
            }
            post[i] = match self.activation(id) {
                Activation::ReLU => {
                    if pattern.bit(self.hidden_slot[i]) {
                        form.clone()
                    } else {
                        AffineForm::zeros(d)
                    }
                }
                Activation::Linear => form.clone(),
            };
            pre[i] = form;
        }
        Ok(Linearization { forms: pre, output: self.output })
    }

    /// True iff the network is a layered MLP (with optional weighted input
    /// skip connections) whose hidden-to-hidden and hidden-to-output
    /// weights are all non-negative. First-layer and input-skip weights and
    /// all biases are unconstrained.
    ///
    /// Layers are reconstructed from the DAG by longest-path layering; a
    /// non-layerable DAG is an error, not `false`.
    pub fn is_icnn(&self) -> Result<bool, NetworkError> {
        self.layering()?;
        Ok(self
            .edges
            .iter()
            .filter(|e| self.kind(e.src) == NeuronKind::Hidden)
            .all(|e| e.weight >= 0.0))
    }

    /// Longest-path layer index per neuron (inputs at 0). Errors unless
    /// every hidden-to-hidden and hidden-to-output edge connects
    /// consecutive layers; input skip edges may jump.
    pub fn layering(&self) -> Result<Vec<usize>, NetworkError> {
        let mut layer = vec![0usize; self.neurons.len()];
        for &id in &self.topo {
            if self.kind(id) == NeuronKind::Input {
                continue;
            }
            let i = id.index();
            layer[i] = self.incoming[i]
                .iter()
                .map(|&(src, _)| layer[src.index()] + 1)
                .max()
                .unwrap_or(1);
        }
        for e in &self.edges {
            if self.kind(e.src) == NeuronKind::Hidden
                && layer[e.dst.index()] != layer[e.src.index()] + 1
            {
                return Err(NetworkError::NotLayered(format!(
                    "edge {} -> {} skips layers",
                    self.name(e.src),
                    self.name(e.dst)
                )));
            }
        }
        Ok(layer)
    }

    /// Copy of this network with the incoming weights and bias of `id`
    /// multiplied by `lambda` and its outgoing weights by `1/lambda`.
    /// For hidden `id` and `lambda > 0` the implemented function is
    /// unchanged (ReLU positive homogeneity).
    pub fn rescaled(&self, id: NeuronId, lambda: f64) -> Result<Network, NetworkError> {
        if self.kind(id) != NeuronKind::Hidden {
            return Err(NetworkError::Structure("only hidden neurons can be rescaled".into()));
        }
        if lambda <= 0.0 || !lambda.is_finite() {
            return Err(NetworkError::Structure("rescaling factor must be positive".into()));
        }
        let mut b = self.to_builder();
        for e in &mut b.edges {
            if e.1 == self.name(id) {
                e.2 *= lambda;
            } else if e.0 == self.name(id) {
                e.2 /= lambda;
            }
        }
        for (name, bias) in &mut b.biases {
            if name == self.name(id) {
                *bias *= lambda;
            }
        }
        b.build()
    }

    /// Copy of this network with one extra edge.
    pub fn adding_edge(&self, src: NeuronId, dst: NeuronId, w: f64) -> Result<Network, NetworkError> {
        let mut b = self.to_builder();
        b.edges.push((self.name(src).to_string(), self.name(dst).to_string(), w));
        b.build()
    }

    fn to_builder(&self) -> NetworkBuilder {
        let mut b = NetworkBuilder::new();
        for n in &self.neurons {
            b.neurons.push((n.name.clone(), n.kind));
        }
        for e in &self.edges {
            b.edges
                .push((self.name(e.src).to_string(), self.name(e.dst).to_string(), e.weight));
        }
        for &id in self.hidden.iter().chain(std::iter::once(&self.output)) {
            b.biases.push((self.name(id).to_string(), self.biases[id.index()]));
        }
        b
    }

    pub fn to_json(&self) -> String {
        let file = NetworkFile {
            inputs: self.inputs.iter().map(|&i| self.name(i).to_string()).collect(),
            output: self.name(self.output).to_string(),
            neurons: self
                .neurons
                .iter()
                .map(|n| NeuronFile { id: n.name.clone(), kind: n.kind })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeFile {
                    src: self.name(e.src).to_string(),
                    dst: self.name(e.dst).to_string(),
                    w: e.weight,
                })
                .collect(),
            biases: self
                .hidden
                .iter()
                .chain(std::iter::once(&self.output))
                .map(|&id| (self.name(id).to_string(), self.biases[id.index()]))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("network serialization")
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<(), NetworkError> {
        sink.write_all(self.to_json().as_bytes())?;
        sink.write_all(b"\n")?;
        Ok(())
    }

    pub fn save_path<P: AsRef<Path>>(&self, path: P) -> Result<(), NetworkError> {
        let f = std::fs::File::create(path)?;
        self.save(f)
    }

    /// Parses and validates a network. Unknown JSON fields are rejected;
    /// all structural invariants are re-checked.
    pub fn from_json(text: &str) -> Result<Network, NetworkError> {
        let file: NetworkFile = serde_json::from_str(text)?;
        Self::from_file(file)
    }

    pub fn load<R: Read>(mut source: R) -> Result<Network, NetworkError> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        Self::from_json(&text)
    }

    pub fn load_path<P: AsRef<Path>>(path: P) -> Result<Network, NetworkError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn from_file(file: NetworkFile) -> Result<Network, NetworkError> {
        let mut b = NetworkBuilder::new();
        for n in &file.neurons {
            b.neurons.push((n.id.clone(), n.kind));
        }
        for e in &file.edges {
            b.edges.push((e.src.clone(), e.dst.clone(), e.w));
        }
        for (name, &bias) in &file.biases {
            b.biases.push((name.clone(), bias));
        }
        let net = b.build()?;
        // The declared input order and output must match the neuron list.
        let declared: Vec<&str> = file.inputs.iter().map(|s| s.as_str()).collect();
        let actual: Vec<&str> = net.inputs.iter().map(|&i| net.name(i)).collect();
        if declared != actual {
            return Err(NetworkError::Structure(
                "\"inputs\" must list every input neuron in neuron-list order".into(),
            ));
        }
        if file.output != net.name(net.output) {
            return Err(NetworkError::Structure(
                "\"output\" does not name the output neuron".into(),
            ));
        }
        Ok(net)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Network(d={}, hidden={}, edges={})",
            self.input_dim(),
            self.hidden.len(),
            self.edges.len()
        )
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    inputs: Vec<String>,
    output: String,
    neurons: Vec<NeuronFile>,
    edges: Vec<EdgeFile>,
    biases: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NeuronFile {
    id: String,
    kind: NeuronKind,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    src: String,
    dst: String,
    w: f64,
}

/// Incremental network construction; `build` validates every invariant.
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    neurons: Vec<(String, NeuronKind)>,
    edges: Vec<(String, String, f64)>,
    biases: Vec<(String, f64)>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(&mut self, name: &str) -> &mut Self {
        self.neurons.push((name.to_string(), NeuronKind::Input));
        self
    }

    pub fn hidden(&mut self, name: &str, bias: f64) -> &mut Self {
        self.neurons.push((name.to_string(), NeuronKind::Hidden));
        self.biases.push((name.to_string(), bias));
        self
    }

    pub fn output(&mut self, name: &str, bias: f64) -> &mut Self {
        self.neurons.push((name.to_string(), NeuronKind::Output));
        self.biases.push((name.to_string(), bias));
        self
    }

    pub fn edge(&mut self, src: &str, dst: &str, weight: f64) -> &mut Self {
        self.edges.push((src.to_string(), dst.to_string(), weight));
        self
    }

    pub fn build(&self) -> Result<Network, NetworkError> {
        let n = self.neurons.len();
        let mut index: BTreeMap<&str, NeuronId> = BTreeMap::new();
        for (i, (name, _)) in self.neurons.iter().enumerate() {
            if index.insert(name, NeuronId(i as u32)).is_some() {
                return Err(NetworkError::DuplicateName(name.clone()));
            }
        }
        let lookup = |name: &str| -> Result<NeuronId, NetworkError> {
            index.get(name).copied().ok_or_else(|| NetworkError::UnknownNeuron(name.into()))
        };

        let neurons: Vec<Neuron> = self
            .neurons
            .iter()
            .map(|(name, kind)| Neuron { name: name.clone(), kind: *kind })
            .collect();
        let inputs: Vec<NeuronId> = (0..n)
            .filter(|&i| neurons[i].kind == NeuronKind::Input)
            .map(|i| NeuronId(i as u32))
            .collect();
        if inputs.is_empty() {
            return Err(NetworkError::NoInputs);
        }
        let outputs: Vec<NeuronId> = (0..n)
            .filter(|&i| neurons[i].kind == NeuronKind::Output)
            .map(|i| NeuronId(i as u32))
            .collect();
        if outputs.len() != 1 {
            return Err(NetworkError::OutputCount(outputs.len()));
        }
        let output = outputs[0];

        let mut biases = vec![0.0; n];
        for (name, bias) in &self.biases {
            let id = lookup(name)?;
            if neurons[id.index()].kind == NeuronKind::Input {
                return Err(NetworkError::BiasOnInput(name.clone()));
            }
            biases[id.index()] = *bias;
        }

        let mut incoming: Vec<Vec<(NeuronId, f64)>> = vec![Vec::new(); n];
        let mut outgoing: Vec<Vec<(NeuronId, f64)>> = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut seen = std::collections::BTreeSet::new();
        for (src, dst, w) in &self.edges {
            let s = lookup(src)?;
            let t = lookup(dst)?;
            if neurons[t.index()].kind == NeuronKind::Input {
                return Err(NetworkError::EdgeIntoInput(dst.clone()));
            }
            if neurons[s.index()].kind == NeuronKind::Output {
                return Err(NetworkError::EdgeFromOutput(src.clone()));
            }
            if !seen.insert((s, t)) {
                return Err(NetworkError::DuplicateEdge(src.clone(), dst.clone()));
            }
            incoming[t.index()].push((s, *w));
            outgoing[s.index()].push((t, *w));
            edges.push(Edge { src: s, dst: t, weight: *w });
        }

        // Kahn topological sort; leftover nodes mean a cycle.
        let mut indeg: Vec<usize> = incoming.iter().map(|v| v.len()).collect();
        let mut queue: Vec<NeuronId> =
            (0..n).filter(|&i| indeg[i] == 0).map(|i| NeuronId(i as u32)).collect();
        let mut topo = Vec::with_capacity(n);
        let mut head = 0;
        while head < queue.len() {
            let id = queue[head];
            head += 1;
            topo.push(id);
            for &(dst, _) in &outgoing[id.index()] {
                indeg[dst.index()] -= 1;
                if indeg[dst.index()] == 0 {
                    queue.push(dst);
                }
            }
        }
        if topo.len() != n {
            return Err(NetworkError::Cycle);
        }

        // Reachability sweeps for the dead-neuron check.
        let mut from_input = vec![false; n];
        for &id in &inputs {
            from_input[id.index()] = true;
        }
        for &id in &topo {
            if from_input[id.index()] {
                for &(dst, _) in &outgoing[id.index()] {
                    from_input[dst.index()] = true;
                }
            }
        }
        let mut to_output = vec![false; n];
        to_output[output.index()] = true;
        for &id in topo.iter().rev() {
            if to_output[id.index()] {
                for &(src, _) in &incoming[id.index()] {
                    to_output[src.index()] = true;
                }
            }
        }
        let mut hidden = Vec::new();
        let mut hidden_slot = vec![usize::MAX; n];
        for i in 0..n {
            if neurons[i].kind == NeuronKind::Hidden {
                if !(from_input[i] && to_output[i]) {
                    return Err(NetworkError::DeadNeuron(neurons[i].name.clone()));
                }
                hidden_slot[i] = hidden.len();
                hidden.push(NeuronId(i as u32));
            }
        }

        Ok(Network {
            neurons,
            edges,
            biases,
            incoming,
            outgoing,
            inputs,
            output,
            hidden,
            hidden_slot,
            topo,
        })
    }
}

/// The bundled 2-2-2-1 example network: a standard MLP that implements a
/// convex function although one hidden-to-hidden weight is negative, so it
/// is not an ICNN.
pub fn demo_network() -> Network {
    let mut b = NetworkBuilder::new();
    b.input("x1").input("x2");
    b.hidden("mu1", 0.0).hidden("mu2", 0.0);
    b.hidden("nu1", -1.0).hidden("nu2", -0.5);
    b.output("out", 0.0);
    b.edge("x1", "mu1", 1.0).edge("x2", "mu2", 1.0);
    b.edge("mu1", "nu1", -1.0).edge("mu2", "nu1", 1.0);
    b.edge("mu1", "nu2", 2.0).edge("mu2", "nu2", 1.0);
    b.edge("nu1", "out", 1.0).edge("nu2", "out", 1.0);
    b.build().expect("demo network is valid")
}

/// Layered MLP with i.i.d. standard Gaussian weights and biases from a
/// seeded generator. Input skip connections to every layer from the second
/// on (including the output) are added iff `arch.skip`.
///
/// Sampling order is fixed: for each layer, the dense weights row by row,
/// then the skip weights, then the biases.
pub fn sample_gaussian(arch: &Architecture, seed: u64) -> Network {
    let mut rng = rng::seeded(seed);
    let input_names: Vec<String> = (0..arch.d).map(|i| format!("x{}", i + 1)).collect();
    let mut layer_names: Vec<Vec<String>> = arch
        .widths
        .iter()
        .enumerate()
        .map(|(l, &w)| (0..w).map(|j| format!("h{}_{}", l + 1, j + 1)).collect())
        .collect();
    layer_names.push(vec!["out".to_string()]);

    let mut edges: Vec<(String, String, f64)> = Vec::new();
    let mut biases: Vec<(String, f64)> = Vec::new();
    for (l, names) in layer_names.iter().enumerate() {
        let prev: &[String] = if l == 0 { &input_names } else { &layer_names[l - 1] };
        for dst in names {
            for src in prev {
                edges.push((src.clone(), dst.clone(), rng::standard_normal(&mut rng)));
            }
        }
        if arch.skip && l > 0 {
            for dst in names {
                for src in &input_names {
                    edges.push((src.clone(), dst.clone(), rng::standard_normal(&mut rng)));
                }
            }
        }
        for dst in names {
            biases.push((dst.clone(), rng::standard_normal(&mut rng)));
        }
    }

    let mut b = NetworkBuilder::new();
    for name in &input_names {
        b.input(name);
    }
    let bias_of = |name: &str| biases.iter().find(|(n, _)| n == name).map(|&(_, v)| v).unwrap();
    for names in &layer_names[..layer_names.len() - 1] {
        for name in names {
            b.hidden(name, bias_of(name));
        }
    }
    b.output("out", bias_of("out"));
    for (src, dst, w) in &edges {
        b.edge(src, dst, *w);
    }
    b.build().expect("layered sample is structurally valid")
}
