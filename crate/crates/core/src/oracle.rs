//! Independent convexity deciders used to validate the certifier.
//!
//! The exact oracle tests gradient monotonicity across every enumerated
//! facet (single- or multi-switch), which characterizes convexity of a
//! piecewise-linear function on the box. The sampling oracle tests the
//! midpoint inequality on random pairs; a reported violation is a hard
//! certificate of non-convexity, while "convex" from it is only
//! probabilistic evidence.

use crate::network::Network;
use crate::regions::{DomainBox, Frontier, Region};
use crate::rng;
use crate::AnalysisError;

/// Slope products below this threshold count as monotonicity violations.
const EXACT_TOL: f64 = -1e-10;
/// Relative midpoint slack for the sampling oracle.
const SAMPLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Violation {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub violation: f64,
}

#[derive(Debug, Clone)]
pub struct OracleVerdict {
    pub convex: bool,
    pub witness: Option<Violation>,
}

/// Exact region-pair test: for each facet, picks interior points on both
/// sides whose segment crosses it and requires
/// `<grad_b - grad_a, x_b - x_a> >= -1e-10`. The step is bisected from
/// 1e-3 down until both points land strictly inside their cells (thin
/// cells near box corners need small steps).
pub fn cpwl_convex_oracle(
    regions: &[Region],
    frontiers: &[Frontier],
) -> Result<OracleVerdict, AnalysisError> {
    for frontier in frontiers {
        let ra = &regions[frontier.region_a];
        let rb = &regions[frontier.region_b];
        let mut eps = 1e-3;
        let mut placed = None;
        for _ in 0..40 {
            let xb: Vec<f64> =
                frontier.witness.iter().zip(&frontier.normal).map(|(w, n)| w + eps * n).collect();
            let xa: Vec<f64> =
                frontier.witness.iter().zip(&frontier.normal).map(|(w, n)| w - eps * n).collect();
            if rb.contains_strictly(&xb) && ra.contains_strictly(&xa) {
                placed = Some((xa, xb));
                break;
            }
            eps *= 0.5;
        }
        let Some((xa, xb)) = placed else {
            return Err(AnalysisError::OraclePlacement(format!(
                "no interior points around the facet between cells {} and {}",
                frontier.region_a, frontier.region_b
            )));
        };
        let value: f64 = ra
            .f_affine
            .slope
            .iter()
            .zip(&rb.f_affine.slope)
            .zip(xb.iter().zip(&xa))
            .map(|((ua, ub), (pb, pa))| (ub - ua) * (pb - pa))
            .sum();
        if value < EXACT_TOL {
            return Ok(OracleVerdict {
                convex: false,
                witness: Some(Violation { x: xa, y: xb, violation: value }),
            });
        }
    }
    Ok(OracleVerdict { convex: true, witness: None })
}

/// Randomized midpoint test: draws `n_pairs` pairs in the box and checks
/// `f((x+y)/2) <= (f(x)+f(y))/2` up to relative slack.
pub fn sample_convex_oracle(
    net: &Network,
    box_: &DomainBox,
    n_pairs: usize,
    seed: u64,
) -> Result<OracleVerdict, AnalysisError> {
    if n_pairs == 0 {
        return Err(AnalysisError::Domain("n_pairs must be at least 1".into()));
    }
    let mut rng = rng::seeded(seed);
    for _ in 0..n_pairs {
        let x = box_.sample(&mut rng);
        let y = box_.sample(&mut rng);
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
        let fx = net.forward(&x).map_err(AnalysisError::Network)?.value;
        let fy = net.forward(&y).map_err(AnalysisError::Network)?.value;
        let fm = net.forward(&mid).map_err(AnalysisError::Network)?.value;
        let scale = 1.0 + fx.abs().max(fy.abs());
        let violation = fm - 0.5 * (fx + fy);
        if violation > SAMPLE_TOL * scale {
            return Ok(OracleVerdict {
                convex: false,
                witness: Some(Violation { x, y, violation }),
            });
        }
    }
    Ok(OracleVerdict { convex: true, witness: None })
}
