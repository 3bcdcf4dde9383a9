use serde_json::json;

use super::*;
use crate::model::load_bundle;
use crate::solver::SolveStatus;

fn scenario(doc: serde_json::Value) -> Scenario {
    load_bundle(&doc.to_string()).expect("fixture loads").normalize_types()
}

fn chain(vnfs: serde_json::Value, min_security: u32) -> serde_json::Value {
    json!({"id": "s", "traffic_mbps": 1, "max_delay_ms": 50, "min_security": min_security, "vnfs": vnfs})
}

fn two_clouds(cap: u64, security: u32, sfcs: serde_json::Value) -> Scenario {
    scenario(json!({
        "topology": {
            "clouds": [{"id": "a", "capacity": {"cpu": cap}}, {"id": "b", "capacity": {"cpu": cap}}],
            "links": [{"a": "a", "b": "b", "delay_ms": 4, "bandwidth_mbps": 100, "security_level": security}],
        },
        "sfcs": sfcs,
        "flavors": [{"id": "f", "price": 4, "demand": {"cpu": 1}}],
    }))
}

fn kinds(v: &[Violation]) -> Vec<&'static str> {
    v.iter()
        .map(|v| match v {
            Violation::Conflict { .. } => "conflict",
            Violation::Security { .. } => "security",
            Violation::Capacity { .. } => "capacity",
            Violation::Delay { .. } => "delay",
            Violation::CostMismatch { .. } => "cost",
            Violation::MetricMismatch { .. } => "metric",
            Violation::SfcReusesVnfi { .. } => "reuse",
            Violation::MixedTypes { .. } => "mixed",
            Violation::SplitVnfi { .. } => "split",
            _ => "other",
        })
        .collect()
}

#[test]
fn lone_vnf_within_capacity_is_valid() {
    let s = two_clouds(1, 9, json!([chain(json!([{"id": "v", "type": "fw"}]), 1)]));
    let p = Placement::assemble(&s, &[(0, 0, 0)]);
    assert_eq!(validate_solution(&s, &p).unwrap(), vec![]);
    assert_eq!(p.total_cost, Rational::from_integer(4));
}

#[test]
fn conflicting_vnfs_on_one_instance_are_reported() {
    let s = two_clouds(
        4,
        9,
        json!([
            {"id": "s1", "traffic_mbps": 1, "max_delay_ms": 50, "min_security": 1, "vnfs": [{"id": "v1", "type": "fw"}]},
            {"id": "s2", "traffic_mbps": 1, "max_delay_ms": 50, "min_security": 1,
             "vnfs": [{"id": "v2", "type": "fw", "conflicts": ["v1"]}]},
        ]),
    );
    let p = Placement::assemble(&s, &[(0, 0, 0), (0, 0, 0)]);
    assert_eq!(kinds(&validate_solution(&s, &p).unwrap()), vec!["conflict"]);
}

#[test]
fn hop_over_weak_link_is_reported() {
    let s = two_clouds(4, 3, json!([chain(json!([{"id": "v1", "type": "fw"}, {"id": "v2", "type": "lb"}]), 5)]));
    let split = Placement::assemble(&s, &[(0, 0, 0), (1, 1, 0)]);
    assert_eq!(kinds(&validate_solution(&s, &split).unwrap()), vec!["security"]);
    let local = Placement::assemble(&s, &[(0, 0, 0), (1, 0, 0)]);
    assert!(validate_solution(&s, &local).unwrap().is_empty());
}

#[test]
fn overload_and_wrong_cost_are_reported() {
    let s = two_clouds(1, 9, json!([chain(json!([{"id": "v1", "type": "fw"}, {"id": "v2", "type": "lb"}]), 1)]));
    let mut p = Placement::assemble(&s, &[(0, 0, 0), (1, 0, 0)]);
    assert_eq!(kinds(&validate_solution(&s, &p).unwrap()), vec!["capacity"]);
    p.total_cost = Rational::from_integer(4);
    assert!(kinds(&validate_solution(&s, &p).unwrap()).contains(&"cost"));
}

#[test]
fn unknown_ids_are_structural_errors() {
    let s = two_clouds(1, 9, json!([chain(json!([{"id": "v", "type": "fw"}]), 1)]));
    let mut p = Placement::assemble(&s, &[(0, 0, 0)]);
    p.vnfs[0].cloud = "mars".into();
    assert_eq!(validate_solution(&s, &p), Err(PlacementError::UnknownCloud("mars".into())));
}

#[test]
fn chain_reusing_an_instance_is_reported() {
    let s = two_clouds(4, 9, json!([chain(json!([{"id": "v1", "type": "fw"}, {"id": "v2", "type": "fw"}]), 1)]));
    let p = Placement::assemble(&s, &[(0, 0, 0), (0, 0, 0)]);
    assert!(kinds(&validate_solution(&s, &p).unwrap()).contains(&"reuse"));
}

#[test]
fn no_chains_cost_nothing() {
    let s = two_clouds(1, 9, json!([]));
    let r = brute_force(&s, &Limits::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert_eq!(r.objective, Some(Rational::from_integer(0)));
}

#[test]
fn same_type_vnfs_share_one_instance() {
    let s = scenario(json!({
        "topology": {"clouds": [{"id": "c", "capacity": {"cpu": 4}}]},
        "sfcs": [
            {"id": "s1", "traffic_mbps": 1, "max_delay_ms": 50, "min_security": 1, "vnfs": [{"id": "v1", "type": "fw"}]},
            {"id": "s2", "traffic_mbps": 1, "max_delay_ms": 50, "min_security": 1, "vnfs": [{"id": "v2", "type": "fw"}]},
        ],
        "flavors": [{"id": "f", "price": 4, "demand": {"cpu": 1}}],
    }));
    let r = brute_force(&s, &Limits::default()).unwrap();
    assert_eq!(r.objective, Some(Rational::from_integer(4)));
    let p = r.placement.unwrap();
    assert_eq!(p.hosted().len(), 1);
    assert!(validate_solution(&s, &p).unwrap().is_empty());
}

#[test]
fn weak_links_and_tight_clouds_are_infeasible() {
    let s = two_clouds(1, 2, json!([chain(json!([{"id": "v1", "type": "fw"}, {"id": "v2", "type": "lb"}]), 5)]));
    let r = brute_force(&s, &Limits::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Infeasible);
    assert!(r.placement.is_none());
}

#[test]
fn oversized_space_is_refused() {
    let s = crate::scenarios::generate(&Default::default()).unwrap();
    let limits = Limits { max_points: 1000, ..Limits::default() };
    assert!(matches!(brute_force(&s, &limits), Err(BruteForceError::SpaceTooLarge { .. })));
}

#[test]
fn moving_a_vnf_onto_a_conflicting_instance_breaks_validity() {
    let mut tried = 0;
    for seed in 0..40 {
        let cfg = crate::scenarios::GenConfig {
            seed,
            n_clouds: 3,
            n_sfcs: 2,
            chain_len: crate::scenarios::Span::new(1, 3),
            n_types: 1,
            n_flavors: 2,
            conflict_prob: 0.6,
            ..Default::default()
        };
        let s = crate::scenarios::generate(&cfg).unwrap();
        let Some(p) = brute_force(&s, &Limits::default()).unwrap().placement else { continue };
        for (i, v) in p.vnfs.iter().enumerate() {
            let spec = s.vnfs().nth(i).unwrap();
            for other in p.vnfs.iter().filter(|o| spec.conflicts.contains(&o.vnf)) {
                let mut q = p.clone();
                q.vnfs[i].vnfi = other.vnfi;
                q.vnfs[i].cloud = other.cloud.clone();
                q.vnfs[i].flavor = other.flavor.clone();
                let found = validate_solution(&s, &q).unwrap();
                tried += 1;
                assert!(kinds(&found).contains(&"conflict"), "seed {seed}: moving {} gave {found:?}", v.vnf);
            }
        }
    }
    assert!(tried > 20, "only {tried} mutations");
}
