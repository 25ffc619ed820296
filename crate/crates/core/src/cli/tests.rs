use super::config::{self, Node};
use super::output::fmt_num;
use super::*;

fn tree(text: &str) -> toml::Value {
    parse(text).unwrap()
}

const RING: &str = "[ring]\np = 2\nr = 2\n";

#[test]
fn fmt_num_handles_signs_and_infinities() {
    assert_eq!(fmt_num(0.12345, 4), "0.1235");
    assert_eq!(fmt_num(-0.00001, 4), "0.0000");
    assert_eq!(fmt_num(f64::INFINITY, 2), "inf");
    assert_eq!(fmt_num(f64::NEG_INFINITY, 2), "-inf");
    assert_eq!(fmt_num(3.0, 0), "3");
}

#[test]
fn q_weights_are_checked_exactly() {
    let v = tree("[aux]\nq = [\"1/3\", \"2/3\"]\n");
    let root = Node::root(&v);
    assert_eq!(
        config::q_weights(&root.get("aux")).unwrap(),
        vec![(1, 3), (2, 3)]
    );
    let v = tree("[aux]\nq = [\"1/3\", \"1/3\"]\n");
    let e = config::q_weights(&Node::root(&v).get("aux")).unwrap_err();
    assert_eq!(e.code, 2);
    assert!(e.message.contains("aux.q"), "{}", e.message);
    let v = tree("[aux]\nq = [\"1/0\"]\n");
    assert!(config::q_weights(&Node::root(&v).get("aux")).is_err());
}

#[test]
fn aux_laws_per_q_value() {
    let text = format!("{RING}[aux]\nq = [\"1/2\", \"1/2\"]\nw1 = [[1, 0, 0, 0], [0, 1, 0, 0]]\nw2 = [0.5, 0.5, 0, 0]\n");
    let v = tree(&text);
    let root = Node::root(&v);
    let md = config::modulus(&root).unwrap();
    let aux = config::aux_pair(&root.get("aux"), md, "w").unwrap();
    assert_eq!(aux.q().len(), 2);
    assert_eq!(aux.laws(0)[1], Pmf::point(4, 1));
    assert_eq!(aux.laws(1)[0], aux.laws(1)[1]);
}

#[test]
fn missing_key_names_its_path() {
    let v = tree(&format!("{RING}[aux]\nw1 = [1, 0, 0, 0]\n"));
    let root = Node::root(&v);
    let md = config::modulus(&root).unwrap();
    let e = config::aux_pair(&root.get("aux"), md, "w").unwrap_err();
    assert_eq!(e.code, 2);
    assert!(e.message.contains("`aux.w2`: missing"), "{}", e.message);
}

#[test]
fn bad_modulus_is_a_validation_error() {
    let v = tree("[ring]\np = 4\nr = 1\n");
    let e = config::modulus(&Node::root(&v)).unwrap_err();
    assert_eq!(e.code, 2);
    assert!(e.message.contains("ring"));
}

#[test]
fn keyed_channel_rows_match_adder_shortcut() {
    let mut text = format!("{RING}[channel.rows]\n");
    for a in 0..4 {
        text += &format!("[channel.rows.{a}]\n");
        for b in 0..4 {
            let mut row = [0.0; 4];
            row[(a + b) % 4] = 1.0;
            text += &format!("{b} = {row:?}\n");
        }
    }
    let v = tree(&text);
    let root = Node::root(&v);
    let md = config::modulus(&root).unwrap();
    let keyed = config::mac(&root, md).unwrap();
    let v2 = tree(&format!("{RING}[channel]\nadder_noise = [1, 0, 0, 0]\n"));
    let short = config::mac(&Node::root(&v2), md).unwrap();
    assert_eq!(keyed, short);
}

#[test]
fn channel_with_missing_row_is_rejected() {
    let v = tree(&format!("{RING}[channel.rows.0]\n0 = [1, 0, 0, 0]\n"));
    let root = Node::root(&v);
    let md = config::modulus(&root).unwrap();
    let e = config::mac(&root, md).unwrap_err();
    assert!(e.message.contains("channel.rows"), "{}", e.message);
}

#[test]
fn source_joint_table_and_noise_agree() {
    let md = crate::regions::presets::z4();
    let noise = [0.06, 0.54, 0.04, 0.36];
    let mut rows = vec![vec![0.0; 4]; 4];
    for (x1, row) in rows.iter_mut().enumerate() {
        for (z, p) in noise.iter().enumerate() {
            row[(z + 4 - x1) % 4] += p / 4.0;
        }
    }
    let v = tree(&format!("{RING}[source]\njoint = {rows:?}\n"));
    let a = config::source(&Node::root(&v), md).unwrap();
    let v = tree(&format!("{RING}[source]\nsum_noise = {noise:?}\n"));
    let b = config::source(&Node::root(&v), md).unwrap();
    let h = |s: &crate::regions::SourcePair| s.joint().entropy(&["x1", "x2"]).unwrap();
    assert!((h(&a) - h(&b)).abs() < 1e-12);
}

#[test]
fn nested_pmf_rows_report_shape() {
    let v = tree("x = [[[1, 0], [0, 1]], [[0.5, 0.5], [1, 0]]]\n");
    let (shape, rows) = Node::root(&v).get("x").pmf_rows(2).unwrap();
    assert_eq!(shape, vec![2, 2]);
    assert_eq!(rows.len(), 4);
    let v = tree("x = [[[1, 0], [0, 1]], [[1, 0]]]\n");
    assert!(Node::root(&v).get("x").pmf_rows(2).is_err());
}

#[test]
fn comp_mac_needs_w_for_non_uniform_inputs() {
    let text = format!("{RING}[channel]\nadder_noise = [1, 0, 0, 0]\n[inputs]\nx1 = [0.5, 0.5, 0, 0]\n[aux]\nv = [0.5, 0.5, 0, 0]\n");
    let e = rates(Problem::CompMac, &tree(&text), false).unwrap_err();
    assert_eq!(e.code, 2);
    assert!(e.message.contains("aux.w"));
}

#[test]
fn cost_violation_names_caps() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/example3.toml"
    ))
    .unwrap();
    let mut v = tree(&text);
    v["costs"]["c1"] = toml::Value::try_from(vec![vec![1.0; 4]; 4]).unwrap();
    let e = rates(Problem::MacStates, &v, false).unwrap_err();
    assert_eq!(e.code, 2);
    assert!(e.message.contains("costs.caps"), "{}", e.message);
}

#[test]
fn simulate_rejects_zero_blocklength() {
    let text = format!("{RING}[sim]\nn = [4, 0]\neps = 1.0\n");
    let e = simulate(Scheme::Covering, &tree(&text), Some(1), 0).unwrap_err();
    assert!(e.message.contains("sim.n"));
}

#[test]
fn covering_guard_exits_with_code_3() {
    let text = format!(
        "{RING}[covering]\nx = [0.25, 0.25, 0.25, 0.25]\n[covering.channel]\n0 = [1, 0, 0, 0]\n1 = [0, 1, 0, 0]\n2 = [0, 0, 1, 0]\n3 = [0, 0, 0, 1]\n[index]\nlaw = [0.25, 0.25, 0.25, 0.25]\n[sim]\nn = 40\nk = 30\neps = 1.0\n"
    );
    let e = simulate(Scheme::Covering, &tree(&text), Some(1), 0).unwrap_err();
    assert_eq!(e.code, 3, "{}", e.message);
}

#[test]
fn unknown_lemma_is_usage_error() {
    assert_eq!(verify("nope", 4).unwrap_err().code, 1);
}
