//! Walkthrough of the bundled 2-2-2-1 example network: a convex function
//! implemented with a negative hidden-to-hidden weight. Prints the path
//! structure after each hidden neuron, the downstream activation states
//! observed on its single-switch facets, and every evaluated condition.

use serde_json::json;

use crate::checker::{check_convexity_full, CheckOptions, ConvexityReport};
use crate::network::{demo_network, Network};
use crate::pathlift::{enumerate_paths, inner_product_fast, subgraph_after};
use crate::regions::{isolated_data, DomainBox};
use crate::AnalysisError;

pub const DEMO_BOX_HALFWIDTH: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct NeuronWalkthrough {
    pub neuron: String,
    /// Paths to the output rendered as `a -> b -> out`, with their weight
    /// products.
    pub paths: Vec<(String, f64)>,
    /// Observed downstream activation states (as named bit maps) and the
    /// condition value of each.
    pub conditions: Vec<(Vec<(String, u8)>, f64)>,
}

pub struct Demo {
    pub net: Network,
    pub report: ConvexityReport,
    pub neurons: Vec<NeuronWalkthrough>,
}

pub fn run() -> Result<Demo, AnalysisError> {
    let net = demo_network();
    let box_ = DomainBox::centered(net.input_dim(), DEMO_BOX_HALFWIDTH);
    let opts = CheckOptions::default();
    let outcome = check_convexity_full(&net, &box_, &opts)?;
    let iso = isolated_data(&net, &outcome.frontiers, &outcome.regions)?;

    let mut neurons = Vec::new();
    for &id in net.hidden_ids() {
        let pv = enumerate_paths(&net, id)?;
        let paths = pv
            .entries
            .iter()
            .map(|(path, w)| {
                let rendered: Vec<&str> = path.iter().map(|&n| net.name(n)).collect();
                (rendered.join(" -> "), *w)
            })
            .collect();
        let mut conditions = Vec::new();
        for r in &iso.per_neuron[&id].restrictions {
            let value = inner_product_fast(&net, id, r)?;
            let bits = r
                .bits
                .iter()
                .map(|(&n, &b)| (net.name(n).to_string(), u8::from(b)))
                .collect();
            conditions.push((bits, value));
        }
        let _ = subgraph_after(&net, id)?;
        neurons.push(NeuronWalkthrough { neuron: net.name(id).to_string(), paths, conditions });
    }
    Ok(Demo { net, report: outcome.report, neurons })
}

impl Demo {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let r = &self.report;
        out.push_str("Bundled example: 2-2-2-1 ReLU network, convex but not an ICNN\n");
        out.push_str(&format!(
            "Domain: [-{hw}, {hw}]^2\n\n",
            hw = DEMO_BOX_HALFWIDTH
        ));
        out.push_str(&format!(
            "Affine pieces (regions): {}   slope-changing facets (frontiers): {}\n",
            r.region_count, r.frontier_count
        ));
        out.push_str(&format!(
            "Activation cells: {}   cell facets: {}\n\n",
            r.cell_count, r.facet_count
        ));
        for n in &self.neurons {
            out.push_str(&format!("neuron {}\n", n.neuron));
            for (path, w) in &n.paths {
                out.push_str(&format!("  path {path}   weight product {w}\n"));
            }
            if n.conditions.is_empty() {
                out.push_str("  no single-switch facet in the box\n");
            }
            for (bits, value) in &n.conditions {
                let state = if bits.is_empty() {
                    "()".to_string()
                } else {
                    let inner: Vec<String> =
                        bits.iter().map(|(name, b)| format!("{name}={b}")).collect();
                    format!("({})", inner.join(", "))
                };
                out.push_str(&format!("  activation state {state}   condition value {value}\n"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "All conditions non-negative: {}\n",
            r.conditions.iter().all(|c| c.satisfied)
        ));
        out.push_str(&format!("Verdict: {}\n", r.status_str()));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.report.to_json(&self.net);
        let walk: Vec<serde_json::Value> = self
            .neurons
            .iter()
            .map(|n| {
                json!({
                    "neuron": n.neuron,
                    "paths": n.paths.iter().map(|(p, w)| json!({"path": p, "weight_product": w})).collect::<Vec<_>>(),
                    "conditions": n.conditions.iter().map(|(bits, value)| {
                        let m: serde_json::Map<String, serde_json::Value> =
                            bits.iter().map(|(k, b)| (k.clone(), json!(b))).collect();
                        json!({"activation_state": m, "value": value})
                    }).collect::<Vec<_>>(),
                })
            })
            .collect();
        v["walkthrough"] = json!(walk);
        v
    }
}
