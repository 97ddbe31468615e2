//! Acceptance suite: one test per shipping criterion, each printing a
//! pass line with its measured numbers (run with `--nocapture` to see
//! them). Every tolerance and threshold is pinned here, in code.

use std::time::Instant;

use convexcheck::checker::{
    check_convexity, check_convexity_full, verify_one_hidden_layer_theorem, CheckOptions, Status,
};
use convexcheck::experiment::{run_cell, ExperimentConfig};
use convexcheck::network::{
    demo_network, sample_gaussian, Architecture, Network, NetworkBuilder, NeuronKind,
};
use convexcheck::oracle::{cpwl_convex_oracle, sample_convex_oracle};
use convexcheck::pathlift::{
    enumerate_paths, full_pathlift_identity_check, inner_product_explicit, inner_product_fast,
    subgraph_after, ActivationRestriction,
};
use convexcheck::regions::{coverage_check, DomainBox};
use convexcheck::rng;
use convexcheck::{demo, Tolerances};

fn flipped_demo_network() -> Network {
    let mut b = NetworkBuilder::new();
    b.input("x1").input("x2");
    b.hidden("mu1", 0.0).hidden("mu2", 0.0);
    b.hidden("nu1", -1.0).hidden("nu2", -0.5);
    b.output("out", 0.0);
    b.edge("x1", "mu1", 1.0).edge("x2", "mu2", 1.0);
    b.edge("mu1", "nu1", -1.0).edge("mu2", "nu1", 1.0);
    b.edge("mu1", "nu2", 2.0).edge("mu2", "nu2", 1.0);
    b.edge("nu1", "out", 1.0).edge("nu2", "out", -1.0);
    b.build().unwrap()
}

#[test]
fn criterion_1_demo_certification() {
    let start = Instant::now();
    let demo = demo::run().unwrap();
    let elapsed = start.elapsed();

    assert_eq!(demo.report.status, Status::Convex);
    assert_eq!(demo.report.region_count, 6, "affine pieces");
    assert_eq!(demo.report.frontier_count, 8, "slope-changing facets");

    let mu1 = demo.neurons.iter().find(|n| n.neuron == "mu1").unwrap();
    let restriction_set: Vec<Vec<u8>> =
        mu1.conditions.iter().map(|(bits, _)| bits.iter().map(|&(_, b)| b).collect()).collect();
    assert_eq!(restriction_set, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    let values: Vec<f64> = mu1.conditions.iter().map(|&(_, v)| v).collect();
    let expected = [0.0, 2.0, 1.0];
    for (v, e) in values.iter().zip(expected) {
        assert!((v - e).abs() <= 1e-9, "mu1 condition value {v} != {e}");
    }
    assert!(elapsed.as_secs_f64() < 1.0, "demo took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 PASS - demo: convex, 6 regions, 8 frontiers, mu1 set {{(0,0),(0,1),(1,1)}} values {{0,2,1}}, {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_2_non_convex_detection() {
    let start = Instant::now();
    let net = flipped_demo_network();
    let box_ = DomainBox::centered(2, 3.0);
    let report = check_convexity(&net, &box_, &CheckOptions::default()).unwrap();
    assert_eq!(report.status, Status::NotConvex);

    let sampled = sample_convex_oracle(&net, &box_, 100_000, 4242).unwrap();
    assert!(!sampled.convex, "sampler must find a violation within 1e5 pairs");
    let witness = sampled.witness.expect("violation witness");
    assert!(witness.violation > 0.0);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "detection took {elapsed:?}");
    println!(
        "ACCEPTANCE 2 PASS - flipped output weights: checker not_convex, sampler witness violation {:.3e}, {:.0} ms",
        witness.violation,
        elapsed.as_secs_f64() * 1e3
    );
}

#[test]
fn criterion_3_one_hidden_layer_theorem() {
    let summary = verify_one_hidden_layer_theorem(200, 2024);
    assert_eq!(summary.trials, 200);
    assert_eq!(
        summary.agreements, 200,
        "verdict must equal output-layer sign test in 200/200 cases: {summary:?}"
    );
    println!(
        "ACCEPTANCE 3 PASS - one-hidden-layer theorem: {}/200 agreements, {} colinear / {} box-unreachable draws screened",
        summary.agreements, summary.screened_colinear, summary.screened_unreachable
    );
}

#[test]
fn criterion_4_oracle_agreement() {
    let start = Instant::now();
    let arch = Architecture::new(2, vec![2, 2], false).unwrap();
    let box_ = DomainBox::centered(2, 3.0);
    let n = 500u64;
    let mut inconclusive = 0usize;
    let mut compared = 0usize;
    for draw in 0..n {
        let seed = rng::derive_seed(&[777, 2, 2, draw]);
        let net = sample_gaussian(&arch, seed);
        let opts = CheckOptions { seed, ..CheckOptions::default() };
        let outcome = check_convexity_full(&net, &box_, &opts).unwrap();
        if outcome.report.status == Status::Inconclusive {
            inconclusive += 1;
            continue;
        }
        let exact = cpwl_convex_oracle(&outcome.regions, &outcome.frontiers).unwrap();
        let status_convex = outcome.report.status == Status::Convex;
        assert_eq!(
            exact.convex, status_convex,
            "draw {draw}: checker {:?} vs exact oracle {}",
            outcome.report.status, exact.convex
        );
        if exact.convex {
            // A sampler violation against an exact-convex verdict would be
            // a hard bug, not statistical noise.
            let sampled = sample_convex_oracle(&net, &box_, 100_000, seed ^ 0xd1f).unwrap();
            assert!(sampled.convex, "draw {draw}: sampler contradicts the exact oracle");
        }
        compared += 1;
    }
    let elapsed = start.elapsed();
    assert!(compared + inconclusive == n as usize);
    assert!(
        (inconclusive as f64) < 0.05 * n as f64,
        "inconclusive rate too high: {inconclusive}/{n}"
    );
    assert!(elapsed.as_secs_f64() < 300.0, "agreement run took {elapsed:?}");
    println!(
        "ACCEPTANCE 4 PASS - oracle agreement: {compared}/{compared} non-inconclusive agree, {inconclusive} inconclusive, {:.1} s single-threaded",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_5_pathlifting_identities() {
    // Forward value equals the full path-product expansion.
    let mut rng = rng::seeded(5150);
    let mut identity_checked = 0;
    while identity_checked < 200 {
        let trial = identity_checked as u64;
        let depth = 1 + (identity_checked % 3);
        let widths: Vec<usize> = (0..depth).map(|l| 2 + ((identity_checked + l) % 3)).collect();
        let net = sample_gaussian(
            &Architecture::new(2, widths, identity_checked % 2 == 0).unwrap(),
            rng::derive_seed(&[5400, trial]),
        );
        let x = [rng::uniform(&mut rng, -3.0, 3.0), rng::uniform(&mut rng, -3.0, 3.0)];
        let (lhs, rhs) = full_pathlift_identity_check(&net, &x).unwrap();
        assert!(
            (lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()),
            "identity failed: {lhs} vs {rhs}"
        );
        identity_checked += 1;
    }

    // Forward-pass inner products equal explicit path sums.
    let mut triples_checked = 0;
    while triples_checked < 500 {
        let trial = triples_checked as u64;
        let depth = 1 + (triples_checked % 3);
        let widths: Vec<usize> = (0..depth).map(|l| 2 + ((triples_checked + l) % 3)).collect();
        let net = sample_gaussian(
            &Architecture::new(2, widths, triples_checked % 3 == 0).unwrap(),
            rng::derive_seed(&[5500, trial]),
        );
        let hidden = net.hidden_ids();
        let nu = hidden[triples_checked % hidden.len()];
        let sub = subgraph_after(&net, nu).unwrap();
        let restriction = ActivationRestriction::new(
            sub.interior_hidden(&net)
                .map(|id| (id, rng::unit_open(&mut rng) > 0.5))
                .collect(),
        );
        let fast = inner_product_fast(&net, nu, &restriction).unwrap();
        let explicit =
            inner_product_explicit(&enumerate_paths(&net, nu).unwrap(), &restriction);
        assert!(
            (fast - explicit).abs() <= 1e-9 * (1.0 + explicit.abs()),
            "triple {triples_checked}: {fast} vs {explicit}"
        );
        triples_checked += 1;
    }
    println!(
        "ACCEPTANCE 5 PASS - path identities: 200/200 full expansions, 500/500 fast-vs-explicit products (factorization covered by invariants suite)"
    );
}

#[test]
fn criterion_6_experiment_reproduction() {
    let cfg = ExperimentConfig { draws: 10_000, seed: 0, ..Default::default() };
    let cell22 = run_cell(&cfg, 2, 2).unwrap();
    assert!((cell22.icnn_expected - 156.25).abs() < 1e-9);
    assert!(
        (94..=219).contains(&cell22.icnn_count),
        "icnn count {} outside [94, 219]",
        cell22.icnn_count
    );
    let ratio22 = cell22.convex_count as f64 / cell22.icnn_count as f64;
    assert!(
        (2.5..=6.0).contains(&ratio22),
        "convex/icnn ratio {ratio22:.2} outside [2.5, 6]"
    );
    assert_eq!(cell22.icnn_not_convex, 0);

    let cell33 = run_cell(&cfg, 3, 3).unwrap();
    let ratio33 = cell33.convex_count as f64 / cell33.icnn_count.max(1) as f64;
    assert!(
        ratio33 > ratio22,
        "ratio must grow with width: (3,3) {ratio33:.2} vs (2,2) {ratio22:.2}"
    );
    println!(
        "ACCEPTANCE 6 PASS - experiment (2,2): icnn {} in [94,219], ratio {ratio22:.2} in [2.5,6]; (3,3) ratio {ratio33:.2} > (2,2)",
        cell22.icnn_count
    );
}

#[test]
fn criterion_7_invariant_suites() {
    // Rescaling invariance of forward values.
    let mut rng = rng::seeded(70_001);
    for pair in 0..100u64 {
        let net = sample_gaussian(
            &Architecture::new(2, vec![3, 2], false).unwrap(),
            rng::derive_seed(&[9200, pair]),
        );
        let id = net.hidden_ids()[(pair as usize) % net.hidden_ids().len()];
        let lambda = rng::uniform(&mut rng, 0.05, 10.0);
        let scaled = net.rescaled(id, lambda).unwrap();
        let x = [rng::uniform(&mut rng, -3.0, 3.0), rng::uniform(&mut rng, -3.0, 3.0)];
        let a = net.forward(&x).unwrap().value;
        let b = scaled.forward(&x).unwrap().value;
        assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
    }

    // Rescaling invariance of verdicts.
    let box_ = DomainBox::centered(2, 3.0);
    let mut verdicts = (0, 0);
    for draw in 0..40u64 {
        let seed = rng::derive_seed(&[9300, draw]);
        let net = sample_gaussian(&Architecture::new(2, vec![2, 2], false).unwrap(), seed);
        let opts = CheckOptions { seed, ..CheckOptions::default() };
        let base = check_convexity(&net, &box_, &opts).unwrap();
        let id = net.hidden_ids()[(draw as usize) % net.hidden_ids().len()];
        let lambda = 0.2 + 3.0 * rng::unit_open(&mut rng);
        let scaled = net.rescaled(id, lambda).unwrap();
        let report = check_convexity(&scaled, &box_, &opts).unwrap();
        assert_eq!(report.status, base.status, "verdict changed under rescaling, draw {draw}");
        match base.status {
            Status::Convex => verdicts.0 += 1,
            _ => verdicts.1 += 1,
        }
    }

    // Monte-Carlo coverage: 1e5 points, zero pattern mismatches, >= 99%
    // matched, on the bundled example and random networks.
    let mut nets = vec![(demo_network(), 3.0)];
    for seed in [400u64, 401, 402] {
        nets.push((
            sample_gaussian(&Architecture::new(2, vec![3, 3], false).unwrap(), seed),
            3.0,
        ));
    }
    for (i, (net, half)) in nets.iter().enumerate() {
        let box_ = DomainBox::centered(2, *half);
        let opts = CheckOptions::default();
        let outcome = check_convexity_full(net, &box_, &opts).unwrap();
        assert!(outcome.report.complete, "net {i} enumeration incomplete");
        let stats =
            coverage_check(net, &outcome.regions, &box_, 100_000, 4000 + i as u64, 1e-6).unwrap();
        assert_eq!(stats.mismatched, 0, "net {i}: pattern mismatches");
        assert!(
            stats.matched as f64 >= 0.99 * stats.samples as f64,
            "net {i}: coverage {}/{}",
            stats.matched,
            stats.samples
        );

        // Frontier witness residuals at the stated tolerances.
        let tol = Tolerances::default();
        for f in &outcome.frontiers {
            let fwd = net.forward(&f.witness).unwrap();
            for &id in net.hidden_ids() {
                let z = fwd.preacts[id.index()].abs();
                if f.switching.contains(&id) {
                    assert!(z <= 1e-7, "net {i}: switching residual {z}");
                } else {
                    assert!(z >= tol.margin_tol, "net {i}: non-switching margin {z}");
                }
            }
        }
    }

    // ICNN-constrained draws are never classified not convex.
    let mut icnn_checked = 0;
    for draw in 0..100u64 {
        let seed = rng::derive_seed(&[9500, draw]);
        let net = sample_gaussian(&Architecture::new(2, vec![2, 2], false).unwrap(), seed);
        let icnn = icnn_clip(&net);
        assert!(icnn.is_icnn().unwrap());
        let opts = CheckOptions { seed, ..CheckOptions::default() };
        let report = check_convexity(&icnn, &box_, &opts).unwrap();
        assert_ne!(report.status, Status::NotConvex, "ICNN draw {draw} flagged not convex");
        icnn_checked += 1;
    }
    println!(
        "ACCEPTANCE 7 PASS - invariants: rescaling (100 value pairs, 40 verdicts: {} convex/{} other), coverage 4x100k points clean, witness residuals in tolerance, {icnn_checked} ICNN draws never not_convex",
        verdicts.0, verdicts.1
    );
}

/// ICNN-constrained variant of a sampled network: hidden-to-hidden and
/// hidden-to-output weights replaced by their absolute values.
fn icnn_clip(net: &Network) -> Network {
    let mut b = NetworkBuilder::new();
    for &id in net.input_ids() {
        b.input(net.name(id));
    }
    for &id in net.hidden_ids() {
        b.hidden(net.name(id), net.bias(id));
    }
    b.output(net.name(net.output_id()), net.bias(net.output_id()));
    for e in net.edges() {
        let w = if net.kind(e.src) == NeuronKind::Hidden { e.weight.abs() } else { e.weight };
        b.edge(net.name(e.src), net.name(e.dst), w);
    }
    b.build().unwrap()
}
