use super::*;
use crate::regions::presets::{adder_mac, aux_with_one, km_source, z4};

fn binary() -> Pmf {
    Pmf::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap()
}

fn cfg(n: usize, k: usize, l: usize, eps: f64, trials: u64) -> SimConfig {
    SimConfig {
        n,
        k,
        l: [l, l],
        eps,
        eps_dec: None,
        eps_index: None,
        trials,
        seed: 11,
    }
}

fn noiseless_mac(k: usize, l: usize, v: AuxPair, trials: u64) -> CompMacSim {
    let mut sim = cfg(6, k, l, 4.0, trials);
    sim.eps_dec = Some(16.0);
    CompMacSim {
        mac: adder_mac(&Pmf::point(4, 0)).unwrap(),
        inputs: [Pmf::uniform(4), Pmf::uniform(4)],
        w: AuxPair::symmetric(z4(), Pmf::uniform(4)).unwrap(),
        v,
        sim,
    }
}

#[test]
fn wilson_interval_brackets_estimate() {
    let p = wilson(30, 100);
    assert!((p.estimate - 0.3).abs() < 1e-12);
    assert!(p.lower < 0.3 && p.upper > 0.3);
    assert!((p.lower - 0.2189).abs() < 1e-3 && (p.upper - 0.3958).abs() < 1e-3);
    let z = wilson(0, 50);
    assert_eq!(z.lower, 0.0);
    assert!(z.upper > 0.0 && z.upper < 0.1);
}

#[test]
fn trend_allows_one_overlapping_inversion() {
    let a = [wilson(50, 100), wilson(52, 100), wilson(30, 100)];
    assert!(trend_non_increasing(&a));
    let b = [wilson(10, 100), wilson(60, 100)];
    assert!(!trend_non_increasing(&b));
    let c = [wilson(50, 100), wilson(52, 100), wilson(54, 100)];
    assert!(!trend_non_increasing(&c));
}

#[test]
fn mod_p_solver_finds_all_solutions() {
    let md = z4();
    let mut rng = rng::stream(3, 0);
    let code = GroupCode::sample(&mut rng, md, 6, 3);
    let g = code.generator().clone();
    let solver = ModPSolver::new(&g, 6, 2);
    let target: Vec<u64> = (0..3).map(|_| rng::below(&mut rng, 4)).collect();
    let spec = TypicalSpec::new(binary(), 6, 4.0).unwrap();
    let mut brute = Vec::new();
    for mask in 0u64..64 {
        let v: Vec<u64> = (0..6).map(|i| mask >> i & 1).collect();
        let mut out = vec![0; 3];
        g.left_mul_into(&v, &mut out);
        if out == target {
            brute.push(v);
        }
    }
    let general = solve_bin(md, &g, &solver, &spec, &target);
    let fast = Z4BinSearch::new(&g, &solver).solve(&solver, &spec, &target);
    assert_eq!(general.is_some(), !brute.is_empty());
    assert_eq!(fast.is_some(), !brute.is_empty());
    for v in general.iter().chain(fast.iter()) {
        assert!(brute.contains(v));
    }
}

#[test]
fn z4_planes_add_matches_ring() {
    let md = z4();
    let mut rng = rng::stream(5, 0);
    for _ in 0..50 {
        let a: Vec<u64> = (0..20).map(|_| rng::below(&mut rng, 4)).collect();
        let b: Vec<u64> = (0..20).map(|_| rng::below(&mut rng, 4)).collect();
        let sum: Vec<u64> = a.iter().zip(&b).map(|(&x, &y)| md.add(x, y)).collect();
        let diff: Vec<u64> = a.iter().zip(&b).map(|(&x, &y)| md.sub(x, y)).collect();
        let (pa, pb) = (Z4Planes::from_slice(&a), Z4Planes::from_slice(&b));
        assert_eq!(pa.add(pb), Z4Planes::from_slice(&sum));
        assert_eq!(pa.add(pb.neg()), Z4Planes::from_slice(&diff));
    }
}

#[test]
fn km_is_deterministic_across_thread_counts() {
    let source = km_source(0.6).unwrap();
    let w = aux_with_one(0.05).unwrap();
    let sim = KmSim {
        source,
        w,
        v_law: binary(),
        sim: SimConfig {
            eps_dec: Some(0.3),
            eps_index: Some(0.2),
            ..cfg(8, 7, 15, 1.0, 60)
        },
    };
    let a = simulate_km(&sim).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let b = pool.install(|| simulate_km(&sim).unwrap());
    assert_eq!(a, b);
    let total = a.structural + a.e1 + a.e2 + a.ec + a.ed + a.success;
    assert_eq!(total, a.trials);
}

#[test]
fn km_zero_sum_source_always_decodes() {
    // X_2 = -X_1, so the sum is identically zero.
    let mut probs = vec![0.0; 16];
    for a in 0..4 {
        probs[a * 4 + (4 - a) % 4] = 0.25;
    }
    let source =
        SourcePair::new(z4(), JointPmf::new(&[("x1", 4), ("x2", 4)], probs).unwrap()).unwrap();
    let w = AuxPair::symmetric(z4(), Pmf::point(4, 0)).unwrap();
    let sim = KmSim {
        source,
        w,
        v_law: binary(),
        sim: cfg(4, 2, 12, 4.0, 100),
    };
    let r = simulate_km(&sim).unwrap();
    assert_eq!(r.ed, 0, "{r:?}");
    assert_eq!(r.structural, 0);
    assert_eq!(r.success, r.trials - r.e1 - r.e2);
    assert!(r.success > 50, "{r:?}");
}

#[test]
fn exact_type_encoders_fail_structurally() {
    // Independent uniform sources at eps = 0: only the exact type (2,2,2,2)
    // of length 8 passes, with probability 2520 / 4^8 per user.
    let source = SourcePair::new(
        z4(),
        JointPmf::independent(&[("x1", &Pmf::uniform(4)), ("x2", &Pmf::uniform(4))]).unwrap(),
    )
    .unwrap();
    let w = AuxPair::symmetric(z4(), binary()).unwrap();
    let sim = KmSim {
        source,
        w,
        v_law: binary(),
        sim: cfg(8, 2, 2, 0.0, 2000),
    };
    let r = simulate_km(&sim).unwrap();
    let single = 2520.0 / 65536.0;
    let expected = 1.0 - single * single;
    let p = wilson(r.structural, r.trials);
    assert!(
        p.lower <= expected && expected <= p.upper,
        "{p:?} vs {expected}"
    );
}

#[test]
fn km_rejects_bad_inputs() {
    let source = km_source(0.6).unwrap();
    let w = aux_with_one(0.05).unwrap();
    let mut sim = KmSim {
        source,
        w,
        v_law: Pmf::uniform(4),
        sim: cfg(8, 7, 15, 1.0, 10),
    };
    assert!(matches!(simulate_km(&sim), Err(Error::InvalidSpec(_))));
    sim.v_law = binary();
    sim.sim.trials = 0;
    assert!(matches!(simulate_km(&sim), Err(Error::InvalidSpec(_))));
    sim.sim.trials = 10;
    sim.sim.n = 4;
    sim.sim.l = [40, 40];
    assert!(matches!(simulate_km(&sim), Err(Error::Guard { .. })));
}

#[test]
fn noiseless_adder_full_codes_always_recover_sum() {
    let v = AuxPair::symmetric(z4(), Pmf::uniform(4)).unwrap();
    let r = simulate_comp_mac(&noiseless_mac(2, 1, v, 300)).unwrap();
    assert_eq!(r.e1 + r.e2 + r.ec + r.structural, 0, "{r:?}");
    assert_eq!(r.detail.wrong_unique, 0);
    assert_eq!(
        r.success + r.detail.multiple + r.detail.no_candidate,
        r.trials
    );
    assert_eq!(r.success, r.trials, "{r:?}");
}

#[test]
fn single_bin_decodes_trivially() {
    let v = AuxPair::symmetric(z4(), Pmf::point(4, 0)).unwrap();
    let r = simulate_comp_mac(&noiseless_mac(2, 1, v, 100)).unwrap();
    assert_eq!(r.rates.bins, [0.0, 0.0]);
    assert_eq!(r.success, r.trials);
}

#[test]
fn comp_mac_is_deterministic() {
    let sim = CompMacSim {
        mac: adder_mac(&crate::regions::presets::noise_law(0.6).unwrap()).unwrap(),
        inputs: [Pmf::uniform(4), Pmf::uniform(4)],
        w: aux_with_one(0.05).unwrap(),
        v: AuxPair::symmetric(z4(), binary()).unwrap(),
        sim: SimConfig {
            eps_index: Some(0.3),
            ..cfg(8, 4, 2, 1.0, 80)
        },
    };
    let a = simulate_comp_mac(&sim).unwrap();
    assert_eq!(a, simulate_comp_mac(&sim).unwrap());
    assert_eq!(
        a.structural + a.e1 + a.e2 + a.ec + a.ed + a.success,
        a.trials
    );
}

fn covering(joint: JointPmf, index: IndexSetSpec, n: usize, eps: f64, trials: u64) -> ProbeReport {
    empirical_covering(&CoveringConfig {
        modulus: z4(),
        joint,
        index,
        n,
        eps,
        trials,
        seed: 2,
    })
    .unwrap()
}

#[test]
fn covering_with_slack_rarely_fails() {
    let joint =
        JointPmf::independent(&[("x", &Pmf::uniform(4)), ("xhat", &Pmf::uniform(4))]).unwrap();
    let index = IndexSetSpec::full(z4(), 4).unwrap();
    let r = covering(joint, index, 12, 2.0, 300);
    assert!(r.bound.abs() < 1e-12);
    assert!(r.margin >= 0.3 && r.bound_holds);
    assert!(r.failures.estimate < 0.1, "{r:?}");
}

#[test]
fn covering_with_empty_index_set_always_fails() {
    let joint =
        JointPmf::independent(&[("x", &Pmf::uniform(4)), ("xhat", &Pmf::uniform(4))]).unwrap();
    let index = IndexSetSpec::single(binary(), 3, 0.0).unwrap();
    let r = covering(joint, index, 6, 1.0, 20);
    assert_eq!(r.failures.count, 20);
}

#[test]
fn covering_below_bound_fails_often() {
    // X_hat = X + N with N uniform on {0, 1}: the bound is 1 bit for a
    // uniform index law, and the code runs 0.375 bit below it.
    let x = JointPmf::from_pmf("x", &Pmf::uniform(4));
    let noise = CondPmf::new(
        vec![4],
        (0..4)
            .map(|a| {
                let mut p = vec![0.0; 4];
                p[a] = 0.5;
                p[(a + 1) % 4] = 0.5;
                Pmf::new(p).unwrap()
            })
            .collect(),
    )
    .unwrap();
    let joint = x.with_kernel("xhat", &["x"], &noise).unwrap();
    let index = IndexSetSpec::full(z4(), 5).unwrap();
    let r = covering(joint, index, 16, 1.0, 200);
    assert!((r.bound - 1.0).abs() < 1e-12);
    assert!(r.margin < -0.3);
    assert!(r.failures.estimate >= 0.5, "{r:?}");
}

fn packing(channel: CondPmf, index: IndexSetSpec, n: usize, eps: f64, trials: u64) -> ProbeReport {
    empirical_packing(&PackingConfig {
        modulus: z4(),
        input: Pmf::uniform(4),
        channel,
        index,
        n,
        eps,
        trials,
        seed: 4,
    })
    .unwrap()
}

#[test]
fn packing_single_codeword_never_confuses() {
    let channel = CondPmf::new(vec![4], vec![Pmf::uniform(4); 4]).unwrap();
    let index = IndexSetSpec::single(Pmf::point(4, 0), 3, 0.5).unwrap();
    let r = packing(channel, index, 8, 1.0, 50);
    assert_eq!(r.failures.count, 0);
}

#[test]
fn packing_with_useless_channel_confuses() {
    let channel = CondPmf::new(vec![4], vec![Pmf::uniform(4); 4]).unwrap();
    let index = IndexSetSpec::full(z4(), 5).unwrap();
    let r = packing(channel, index, 8, 4.0, 100);
    assert!(r.bound.abs() < 1e-12 && !r.bound_holds);
    assert!(r.failures.estimate > 0.9, "{r:?}");
}

#[test]
fn packing_inside_bound_improves_with_n() {
    // Y = X + N with N in {0, 1}; a binary index law removes the parity
    // level, leaving the bound 2 - h(0.1) = 1.53 bit against rate 0.75.
    let noise = Pmf::new(vec![0.9, 0.1, 0.0, 0.0]).unwrap();
    let channel = CondPmf::new(vec![4], (0..4).map(|a| noise.shift(a)).collect()).unwrap();
    let mut points = Vec::new();
    for n in [8usize, 12, 16] {
        let index = IndexSetSpec::single(binary(), 3 * n / 4, 2.0).unwrap();
        let r = packing(channel.clone(), index, n, 4.0, 400);
        assert!(r.margin >= 0.2, "{r:?}");
        points.push(r.failures);
    }
    assert!(points[0].count > 0);
    assert!(trend_non_increasing(&points), "{points:?}");
}
