use super::*;

#[test]
fn pphi_suite_is_exact() {
    for &(p, r, k, n) in &PPHI_SUITE {
        let v = verify_pphi(p, r, k, n).unwrap();
        assert!(v.pass, "{:?}", v.witness);
        assert!(v.checked > 0);
    }
}

#[test]
fn pphi_guards_large_instances() {
    assert!(matches!(verify_pphi(2, 2, 4, 4), Err(Error::Guard { .. })));
}

#[test]
fn next_digits_wraps() {
    let mut d = vec![1, 1];
    assert!(!next_digits(&mut d, 2));
    assert_eq!(d, vec![0, 0]);
}

#[test]
fn sum_typical_point_masses() {
    let v = verify_sum_typical(&Pmf::point(4, 1), &Pmf::point(4, 3), 5, 0.5).unwrap();
    assert!(v.pass);
    assert_eq!(v.get("typical_sums"), Some(1.0));
}

#[test]
fn sum_typical_random_pair() {
    let px = Pmf::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
    let py = Pmf::new(vec![0.1, 0.6, 0.0, 0.3]).unwrap();
    let v = verify_sum_typical(&px, &py, 4, 1.0).unwrap();
    assert!(v.pass, "{:?}", v.witness);
}

#[test]
fn entropy_conv_both_directions() {
    let v = verify_entropy_conv(4, 200, 1).unwrap();
    assert!(v.pass, "{:?}", v.witness);
    assert!(v.get("preserving_cases").unwrap() >= 8.0);
}

#[test]
fn claim_decompositions_hold() {
    let v = verify_claim_decompositions(3);
    assert!(v.pass, "{:?}", v.witness);
    assert!(v.get("min_concavity_margin").unwrap() >= -1e-9);
}

#[test]
fn injectivity_point_mass_is_trivial() {
    let md = Modulus::new(2, 2).unwrap();
    let v = verify_injectivity_condition(md, 1.0, &Pmf::point(4, 0), 0.5, &[3, 4], 4, 0).unwrap();
    assert!(v.pass);
    assert_eq!(v.get("fraction_n4"), Some(1.0));
}

#[test]
fn unknown_lemma_is_rejected() {
    assert!(default_suite("nope").is_err());
}

fn product_joint() -> JointPmf {
    JointPmf::independent(&[
        ("x", &Pmf::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap()),
        ("y", &Pmf::new(vec![0.5, 0.5]).unwrap()),
    ])
    .unwrap()
}

#[test]
fn intersection_sandwich_holds_below_top_level() {
    let md = Modulus::new(2, 2).unwrap();
    for s in 0..2 {
        let v = verify_typical_intersection(md, &product_joint(), 4, s, 1.0).unwrap();
        assert!(v.pass, "s={s}: {:?}", v.witness);
        assert!(v.get("c2_needed").unwrap() <= v.get("c2").unwrap());
        assert!(v.get("c1_limit").unwrap() > v.get("c1").unwrap());
    }
}

#[test]
fn intersection_upper_constant_too_small_at_top_level() {
    let md = Modulus::new(2, 2).unwrap();
    let v = verify_typical_intersection(md, &product_joint(), 4, 2, 1.0).unwrap();
    assert!(!v.pass);
    assert!(v.witness.is_some());
    assert!((v.get("c2_needed").unwrap() - 3.2).abs() < 1e-9);
    assert!(v.get("c2_needed").unwrap() <= 4.0);
}
