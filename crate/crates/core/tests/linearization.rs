//! Every 0/1 feasible point of small models respects the product
//! definitions of the linearization variables.

mod common;

use serde_json::json;
use common::{check_products, feasible_points};
use sfc_placer::ilp::VarKind;
use sfc_placer::model::load_bundle;
use sfc_placer::{build_model, BuildOptions, Scenario};

fn scenario(doc: serde_json::Value) -> Scenario {
    load_bundle(&doc.to_string()).unwrap().normalize_types()
}

fn audit(s: &Scenario, options: &BuildOptions) -> usize {
    let model = build_model(s, options).unwrap();
    let points = feasible_points(&model);
    for p in &points {
        check_products(&model, p);
    }
    points.len()
}

fn binaries(s: &Scenario) -> usize {
    let m = build_model(s, &BuildOptions::default()).unwrap();
    m.vars.kinds().iter().filter(|k| matches!(k, VarKind::Binary)).count()
}

#[test]
fn small_models_with_at_most_sixteen_booleans() {
    let shapes = [
        // one VNF, one cloud, one flavor: 8 booleans
        (1, 1, vec!["fw"]),
        // one VNF, two clouds, one flavor: 12 booleans
        (2, 1, vec!["fw"]),
        // one VNF, two clouds, two flavors: 15 booleans
        (2, 2, vec!["fw"]),
        // one VNF, one cloud, two flavors: 11 booleans
        (1, 2, vec!["fw"]),
    ];
    for (clouds, flavors, kinds) in shapes {
        let clouds: Vec<_> = (0..clouds).map(|c| json!({"id": format!("c{c}"), "capacity": {"cpu": 2}})).collect();
        let links: Vec<_> = if clouds.len() == 2 {
            vec![json!({"a": "c0", "b": "c1", "delay_ms": 3, "bandwidth_mbps": 10, "security_level": 4})]
        } else {
            vec![]
        };
        let flavors: Vec<_> =
            (0..flavors).map(|f| json!({"id": format!("f{f}"), "price": f + 1, "demand": {"cpu": 1 + f}})).collect();
        let vnfs: Vec<_> = kinds.iter().enumerate().map(|(i, k)| json!({"id": format!("v{i}"), "type": k})).collect();
        let s = scenario(json!({
            "topology": {"clouds": clouds, "links": links},
            "sfcs": [{"id": "s", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": 1, "vnfs": vnfs}],
            "flavors": flavors,
        }));
        let n = binaries(&s);
        assert!(n <= 16, "{n} booleans");
        for symmetry_breaking in [true, false] {
            let found = audit(&s, &BuildOptions { symmetry_breaking, ..Default::default() });
            assert!(found > 0, "no feasible point");
        }
    }
}

#[test]
fn chained_pairs_across_clouds() {
    // Two VNFs over two clouds exercise the pair variables; the search above
    // stays exhaustive over every boolean.
    for (cap, min_security) in [(1, 1), (2, 1), (1, 9), (2, 9)] {
        let s = scenario(json!({
            "topology": {
                "clouds": [{"id": "a", "capacity": {"cpu": cap}}, {"id": "b", "capacity": {"cpu": cap}}],
                "links": [{"a": "a", "b": "b", "delay_ms": 3, "bandwidth_mbps": 10, "security_level": 4}],
            },
            "sfcs": [{"id": "s", "traffic_mbps": 1, "max_delay_ms": 10, "min_security": min_security,
                      "vnfs": [{"id": "v0", "type": "fw"}, {"id": "v1", "type": "lb"}]}],
            "flavors": [{"id": "f", "price": 1, "demand": {"cpu": 1}}],
        }));
        let found = audit(&s, &BuildOptions { symmetry_breaking: false, ..Default::default() });
        if cap == 1 && min_security == 9 {
            assert_eq!(found, 0);
        } else {
            assert!(found > 0);
        }
    }
}

#[test]
fn generated_tiny_instances() {
    let mut audited = 0;
    for seed in 0..60 {
        let mut cfg = common::tiny_config(seed);
        cfg.n_sfcs = 1;
        cfg.chain_len = sfc_placer::scenarios::Span::new(1, 2);
        cfg.n_clouds = cfg.n_clouds.min(2);
        let s = sfc_placer::scenarios::generate(&cfg).unwrap();
        if binaries(&s) > 48 {
            continue;
        }
        audit(&s, &BuildOptions::default());
        audited += 1;
    }
    assert!(audited >= 30, "{audited}");
}
