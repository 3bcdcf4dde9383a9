use serde_json::json;

use super::*;
use crate::model::load_bundle;
use crate::solver::{solve_bnb, Budget, SolveStatus};

fn scenario(doc: serde_json::Value) -> Scenario {
    load_bundle(&doc.to_string()).expect("fixture loads").normalize_types()
}

fn one_vnf(prices: &[i64]) -> Scenario {
    let flavors: Vec<_> = prices
        .iter()
        .enumerate()
        .map(|(i, p)| json!({"id": format!("f{i}"), "price": p, "demand": {"cpu": 1}}))
        .collect();
    scenario(json!({
        "topology": {"clouds": [{"id": "c0", "capacity": {"cpu": 4}}]},
        "sfcs": [{"id": "s", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 1,
                  "vnfs": [{"id": "v", "type": "fw"}]}],
        "flavors": flavors,
    }))
}

/// Two clouds joined by one link, one chain over the given VNFs.
fn two_clouds(vnfs: serde_json::Value, cap: u64, delay: u64, security: u32, max_delay: u64, min_sec: u32) -> Scenario {
    scenario(json!({
        "topology": {
            "clouds": [{"id": "a", "capacity": {"cpu": cap}}, {"id": "b", "capacity": {"cpu": cap}}],
            "links": [{"a": "a", "b": "b", "delay_ms": delay, "bandwidth_mbps": 100, "security_level": security}],
        },
        "sfcs": [{"id": "s", "traffic_mbps": 1, "max_delay_ms": max_delay, "min_security": min_sec, "vnfs": vnfs}],
        "flavors": [{"id": "small", "price": 2, "demand": {"cpu": 1}}],
    }))
}

fn optimum(s: &Scenario) -> Option<Rational> {
    let m = build_model(s, &BuildOptions::default()).unwrap();
    let r = solve_bnb(&m, &Budget::unlimited()).unwrap();
    match r.status {
        SolveStatus::Optimal => r.objective,
        SolveStatus::Infeasible => None,
        SolveStatus::TimedOut => panic!("tiny model timed out"),
    }
}

fn count_kind(m: &IlpModel, pred: impl Fn(&VarKey) -> bool) -> usize {
    m.vars.keys().iter().filter(|k| pred(k)).count()
}

#[test]
fn minimal_instance_has_one_of_each_family() {
    let s = one_vnf(&[7]);
    let m = build_model(&s, &BuildOptions::default()).unwrap();
    assert_eq!(count_kind(&m, |k| matches!(k, VarKey::X { .. })), 1);
    assert_eq!(count_kind(&m, |k| matches!(k, VarKey::U { .. })), 1);
    assert_eq!(count_kind(&m, |k| matches!(k, VarKey::Phi { .. })), 1);
    assert_eq!(count_kind(&m, |k| matches!(k, VarKey::A { .. })), 1);
    assert_eq!(count_kind(&m, |k| matches!(k, VarKey::Yc { .. })), 1);
    let phi = m.layout().unwrap().phi[0][0];
    assert_eq!(m.objective, vec![(Rational::from_integer(7), phi)]);
}

#[test]
fn variable_counts_follow_closed_forms() {
    for seed in 0..20 {
        let cfg = crate::scenarios::GenConfig { seed, ..Default::default() };
        let s = crate::scenarios::generate(&cfg).unwrap();
        let m = build_model(&s, &BuildOptions::default()).unwrap();
        let v = s.vnf_count();
        let c = s.topology.clouds.len();
        let f = s.flavors.flavors.len();
        let t = s.type_count as usize;
        let pairs: usize = s.sfcs.iter().map(|x| x.vnfs.len().saturating_sub(1)).sum();
        let expect = [
            (v * v, count_kind(&m, |k| matches!(k, VarKey::X { .. }))),
            (s.sfcs.len() * v, count_kind(&m, |k| matches!(k, VarKey::B { .. }))),
            (v * c, count_kind(&m, |k| matches!(k, VarKey::Yc { .. }))),
            (v * t, count_kind(&m, |k| matches!(k, VarKey::A { .. }))),
            (v * c, count_kind(&m, |k| matches!(k, VarKey::U { .. }))),
            (v * f, count_kind(&m, |k| matches!(k, VarKey::Phi { .. }))),
            (v * v * c, count_kind(&m, |k| matches!(k, VarKey::Yvuc { .. }))),
            (v * c * f, count_kind(&m, |k| matches!(k, VarKey::Cucf { .. }))),
            (pairs * c * (c - 1), count_kind(&m, |k| matches!(k, VarKey::Ypair { .. }))),
            (pairs, count_kind(&m, |k| matches!(k, VarKey::Fhop { .. }))),
        ];
        for (i, (want, got)) in expect.iter().enumerate() {
            assert_eq!(want, got, "seed {seed}, family #{i}");
        }
        let total: usize = expect.iter().map(|e| e.0).sum();
        assert_eq!(m.vars.len(), total);
        assert!(m.check_integrity().is_ok());
    }
}

#[test]
fn every_row_carries_a_known_tag() {
    let s = crate::scenarios::generate(&Default::default()).unwrap();
    let opts = BuildOptions { symmetry_breaking: true, bandwidth: true, endpoints: true };
    let m = build_model(&s, &opts).unwrap();
    for c in &m.constraints {
        assert_eq!(Tag::parse(c.tag.as_str()), Some(c.tag));
        assert_ne!(c.tag, Tag::ExtCostcap);
    }
}

#[test]
fn building_is_deterministic() {
    let s = crate::scenarios::generate(&Default::default()).unwrap();
    let a = build_model(&s, &BuildOptions::default()).unwrap();
    let b = build_model(&s.clone(), &BuildOptions::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(lp_format::write_lp(&a), lp_format::write_lp(&b));
    assert_eq!(a.stats(), b.stats());
}

#[test]
fn unnormalized_scenario_is_rejected() {
    let s = load_bundle(
        &json!({
            "topology": {"clouds": [{"id": "c", "capacity": {"cpu": 1}}]},
            "sfcs": [{"id": "s", "traffic_mbps": 1, "max_delay_ms": 1, "min_security": 1,
                      "vnfs": [{"id": "v", "type": "fw"}]}],
            "flavors": [{"id": "f", "price": 1, "demand": {"cpu": 1}}],
        })
        .to_string(),
    )
    .unwrap();
    assert!(matches!(build_model(&s, &BuildOptions::default()), Err(BuildError::NotNormalized)));
}

#[test]
fn cheapest_flavor_wins() {
    assert_eq!(optimum(&one_vnf(&[5, 3])), Some(Rational::from_integer(3)));
}

#[test]
fn no_chains_cost_nothing() {
    let s = scenario(json!({
        "topology": {"clouds": [{"id": "c", "capacity": {"cpu": 1}}]},
        "sfcs": [],
        "flavors": [{"id": "f", "price": 1, "demand": {"cpu": 1}}],
    }));
    assert_eq!(optimum(&s), Some(Rational::from_integer(0)));
}

#[test]
fn shareable_vnfs_pay_one_flavor() {
    let s = scenario(json!({
        "topology": {"clouds": [{"id": "c", "capacity": {"cpu": 4}}]},
        "sfcs": [
            {"id": "s1", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 1, "vnfs": [{"id": "v1", "type": "fw"}]},
            {"id": "s2", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 1, "vnfs": [{"id": "v2", "type": "fw"}]},
        ],
        "flavors": [{"id": "f", "price": 4, "demand": {"cpu": 1}}],
    }));
    assert_eq!(optimum(&s), Some(Rational::from_integer(4)));
}

#[test]
fn different_types_need_two_instances() {
    let s = scenario(json!({
        "topology": {"clouds": [{"id": "c", "capacity": {"cpu": 4}}]},
        "sfcs": [
            {"id": "s1", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 1, "vnfs": [{"id": "v1", "type": "fw"}]},
            {"id": "s2", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 1, "vnfs": [{"id": "v2", "type": "lb"}]},
        ],
        "flavors": [{"id": "f", "price": 4, "demand": {"cpu": 1}}],
    }));
    assert_eq!(optimum(&s), Some(Rational::from_integer(8)));
}

#[test]
fn conflicting_vnfs_never_share() {
    let s = scenario(json!({
        "topology": {"clouds": [{"id": "c", "capacity": {"cpu": 4}}]},
        "sfcs": [
            {"id": "s1", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 1, "vnfs": [{"id": "v1", "type": "fw"}]},
            {"id": "s2", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 1,
             "vnfs": [{"id": "v2", "type": "fw", "conflicts": ["v1"]}]},
        ],
        "flavors": [{"id": "f", "price": 4, "demand": {"cpu": 1}}],
    }));
    assert_eq!(optimum(&s), Some(Rational::from_integer(8)));
    let m = build_model(&s, &BuildOptions::default()).unwrap();
    assert!(m.stats().per_tag.contains_key(&Tag::Conflict));
}

#[test]
fn saturated_cloud_holds_one_instance() {
    // Two instances of demand 2 on clouds of capacity 3: they must split.
    let vnfs = json!([{"id": "v1", "type": "fw"}, {"id": "v2", "type": "lb"}]);
    let mut s = two_clouds(vnfs.clone(), 3, 5, 9, 100, 1);
    s.flavors.flavors[0].demand.insert("cpu".into(), 2);
    assert_eq!(optimum(&s), Some(Rational::from_integer(4)));

    // With a single such cloud there is no room at all.
    let mut one = s.clone();
    one.topology.clouds.truncate(1);
    one.topology.links.clear();
    assert_eq!(optimum(&one), None);
}

#[test]
fn delay_threshold_separates_feasible_from_infeasible() {
    // Three VNFs of three types on clouds that fit only one instance each,
    // connected in a line a-b-c with delays 5 and 7.
    let mk = |max_delay: u64| {
        scenario(json!({
            "topology": {
                "clouds": [{"id": "a", "capacity": {"cpu": 1}}, {"id": "b", "capacity": {"cpu": 1}}, {"id": "c", "capacity": {"cpu": 1}}],
                "links": [
                    {"a": "a", "b": "b", "delay_ms": 5, "bandwidth_mbps": 100, "security_level": 5},
                    {"a": "b", "b": "c", "delay_ms": 7, "bandwidth_mbps": 100, "security_level": 5},
                ],
            },
            "sfcs": [{"id": "s", "traffic_mbps": 1, "max_delay_ms": max_delay, "min_security": 1,
                      "vnfs": [{"id": "v1", "type": 1}, {"id": "v2", "type": 2}, {"id": "v3", "type": 3}]}],
            "flavors": [{"id": "f", "price": 1, "demand": {"cpu": 1}}],
        }))
    };
    assert_eq!(optimum(&mk(10)), None);
    assert_eq!(optimum(&mk(12)), Some(Rational::from_integer(3)));
}

#[test]
fn intra_cloud_hops_cost_no_delay() {
    let s = two_clouds(json!([{"id": "v1", "type": "fw"}, {"id": "v2", "type": "lb"}]), 4, 9, 9, 8, 1);
    // The link alone exceeds the budget, so the pair must share a cloud.
    assert_eq!(optimum(&s), Some(Rational::from_integer(4)));
}

#[test]
fn weak_link_cannot_carry_a_demanding_chain() {
    let vnfs = json!([{"id": "v1", "type": "fw"}, {"id": "v2", "type": "lb"}]);
    // Capacity 1 forces the two instances apart; the link has level 3.
    assert_eq!(optimum(&two_clouds(vnfs.clone(), 1, 1, 3, 100, 5)), None);
    assert_eq!(optimum(&two_clouds(vnfs.clone(), 1, 1, 3, 100, 3)), Some(Rational::from_integer(4)));
    // With room on one cloud the chain stays local regardless of the link.
    assert_eq!(optimum(&two_clouds(vnfs, 2, 1, 3, 100, 5)), Some(Rational::from_integer(4)));
}

#[test]
fn tighter_thresholds_never_lower_the_cost() {
    let base = crate::scenarios::generate(&crate::scenarios::GenConfig {
        seed: 11,
        n_clouds: 3,
        n_sfcs: 2,
        ..Default::default()
    })
    .unwrap();
    let mut last = Some(Rational::from_integer(0));
    for max_delay in [1000, 20, 10, 5, 1] {
        let mut s = base.clone();
        for sfc in &mut s.sfcs {
            sfc.max_delay_ms = Rational::from_integer(max_delay);
        }
        let now = optimum(&s);
        match (&last, &now) {
            (Some(a), Some(b)) => assert!(b >= a, "delay {max_delay}: {b} < {a}"),
            (None, Some(_)) => panic!("tightening restored feasibility"),
            _ => {}
        }
        last = now;
    }
    let mut last = Some(Rational::from_integer(0));
    for level in 1..=base.topology.security_levels {
        let mut s = base.clone();
        for sfc in &mut s.sfcs {
            sfc.min_security = level;
        }
        let now = optimum(&s);
        match (&last, &now) {
            (Some(a), Some(b)) => assert!(b >= a, "security {level}: {b} < {a}"),
            (None, Some(_)) => panic!("tightening restored feasibility"),
            _ => {}
        }
        last = now;
    }
}

#[test]
fn symmetry_breaking_keeps_the_optimum() {
    for seed in 0..15 {
        let cfg = crate::scenarios::GenConfig {
            seed,
            n_clouds: 3,
            n_sfcs: 2,
            chain_len: crate::scenarios::Span::new(1, 2),
            n_flavors: 2,
            ..Default::default()
        };
        let s = crate::scenarios::generate(&cfg).unwrap();
        let on = build_model(&s, &BuildOptions::default()).unwrap();
        let off = build_model(&s, &BuildOptions { symmetry_breaking: false, ..Default::default() }).unwrap();
        assert!(!off.stats().per_tag.contains_key(&Tag::ExtSymbreak));
        let a = solve_bnb(&on, &Budget::unlimited()).unwrap();
        let b = solve_bnb(&off, &Budget::unlimited()).unwrap();
        assert_eq!((a.status, a.objective), (b.status, b.objective), "seed {seed}");
    }
}

#[test]
fn lp_text_names_rows_by_family() {
    let s = one_vnf(&[3, 5]);
    let text = lp_format::write_lp(&build_model(&s, &BuildOptions::default()).unwrap());
    assert!(text.starts_with("\\ sfc-placer model"));
    assert!(text.contains("Minimize\n obj: 3 phi_0_0 + 5 phi_0_1\n"));
    assert!(text.contains(" eq1_0: x_0_0 = 1\n"));
    assert!(text.contains("Binaries\n"));
    assert!(text.ends_with("End\n"));
}
