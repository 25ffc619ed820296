//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process exits 0 after printing the report. Set `ACCEPTANCE_STRICT=1`
//! to exit 1 when any criterion fails.

use std::time::{Duration, Instant};

use quasigroup::mcsim::{
    empirical_covering, km_dimensions, simulate_comp_mac, simulate_km, trend_non_increasing,
    CompMacSim, CoveringConfig, KmSim, SimConfig,
};
use quasigroup::oracle::{default_suite, verify_pphi, OracleVerdict};
use quasigroup::prob::{CondPmf, JointPmf, Pmf};
use quasigroup::regions::presets::{
    adder_mac, aux_with_one, km_source, mac_states_example, noise_law, z4,
};
use quasigroup::regions::{
    comp_mac_baselines, comp_mac_corollary_rate, comp_mac_qgc_rate, gp_example_outer_check,
    km_baselines, km_qgc_rate, mac_states_sum_rate, AuxPair, GridSpec, Mac, RateResult,
};
use quasigroup::rng;
use quasigroup::typical::IndexSetSpec;
use quasigroup::zring::Modulus;
use rand::Rng;

const DELTA: f64 = 0.6;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            detail: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.detail
            .push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.detail.push(format!("     {line}"));
    }
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn term(r: &RateResult, label: &str) -> f64 {
    r.trace
        .iter()
        .find(|t| t.label == label)
        .map(|t| t.value)
        .unwrap_or(f64::NAN)
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let src = km_source(DELTA).unwrap();
    let b = km_baselines(&src).unwrap();
    let q = km_qgc_rate(&src, &aux_with_one(0.05).unwrap())
        .unwrap()
        .sum();
    let took = start.elapsed();
    for (name, got, want) in [
        ("unstructured", b.unstructured, 3.44),
        ("linear Z_7", b.linear, 4.12),
        ("group", b.group, 3.88),
        ("qgc", q, 3.34),
    ] {
        o.check(
            within(got, want, 0.02),
            format!("{name}: {got:.4} vs {want} +- 0.02"),
        );
    }
    o.check(b.field == 7, format!("linear field size {}", b.field));
    o.check(
        took < Duration::from_secs(1),
        format!("runtime {:.3} s < 1 s", took.as_secs_f64()),
    );
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mac = adder_mac(&noise_law(DELTA).unwrap()).unwrap();
    let grid = GridSpec::default();
    let b = comp_mac_baselines(&mac, &grid).unwrap();
    let q = comp_mac_corollary_rate(&mac, &aux_with_one(0.05).unwrap())
        .unwrap()
        .rates[0];
    let took = start.elapsed();
    for (name, got, want, tol) in [
        ("unstructured", b.unstructured, 0.28, 0.01),
        ("linear (optimizer)", b.linear, 0.079, 0.01),
        ("group", b.group, 0.06, 0.01),
        ("qgc", q, 0.33, 0.02),
    ] {
        o.check(
            within(got, want, tol),
            format!("{name}: {got:.4} vs {want} +- {tol}"),
        );
    }
    o.note(format!(
        "optimizer grid: step {}, refinement depth {}",
        grid.step, grid.depth
    ));
    o.check(
        took < Duration::from_secs(60),
        format!("runtime {:.3} s < 60 s", took.as_secs_f64()),
    );
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let cfg = mac_states_example().unwrap();
    let r = mac_states_sum_rate(&cfg).unwrap();
    o.check(
        within(r.sum(), 1.0, 1e-9),
        format!("sum-rate {:.6} vs 1.0 +- 1e-9", r.sum()),
    );
    let hv = term(&r, "H(V1+V2|Q)");
    let hz = term(&r, "H(Z1+Z2|Y,Q)");
    o.check(
        within(hv, 1.5, 1e-12),
        format!("H(V1+V2) = {hv:.12} vs 1.5 +- 1e-12"),
    );
    o.check(
        within(hz, 0.0, 1e-12),
        format!("H(V1+V2|Y) = {hz:.12} vs 0 +- 1e-12"),
    );
    for t in r.trace.iter().filter(|t| t.label.contains("penalty")) {
        o.note(format!("{} = {:.4}", t.label, t.value));
    }
    let gp = gp_example_outer_check(0.02);
    o.check(
        gp.below_one,
        format!("GP outer max at step 0.02 is {:.4} < 1", gp.max),
    );
    o.note(format!("GP maximum {:.4} reported, not asserted", gp.max));
    o
}

fn report(o: &mut Outcome, verdicts: &[OracleVerdict]) {
    for v in verdicts {
        let mut line = format!("{} [{}] checked {}", v.lemma, v.instance, v.checked);
        if let Some(w) = &v.witness {
            line.push_str(&format!(": {w}"));
        }
        o.check(v.pass, line);
    }
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let verdicts: Vec<_> = [(2, 2, 1, 1), (2, 2, 1, 2), (2, 2, 2, 1), (3, 1, 1, 2)]
        .iter()
        .map(|&(p, r, k, n)| verify_pphi(p, r, k, n).unwrap())
        .collect();
    report(&mut o, &verdicts);
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    for id in [
        "typical-intersection",
        "sum-typical",
        "entropy-conv",
        "noise-entropy",
        "claim-decomp",
    ] {
        let verdicts = default_suite(id).unwrap();
        let failed: Vec<_> = verdicts.iter().filter(|v| !v.pass).cloned().collect();
        let checked: u64 = verdicts.iter().map(|v| v.checked).sum();
        o.check(
            failed.is_empty(),
            format!(
                "{id}: {}/{} instances pass, {checked} cases",
                verdicts.len() - failed.len(),
                verdicts.len()
            ),
        );
        for v in &failed {
            o.note(format!(
                "  {} c2={:.3} c2_needed={:.3}: {}",
                v.instance,
                v.get("c2").unwrap_or(f64::NAN),
                v.get("c2_needed").unwrap_or(f64::NAN),
                v.witness.as_deref().unwrap_or("")
            ));
        }
        if id == "noise-entropy" {
            let margin = verdicts[0].get("margin").unwrap();
            o.check(
                margin > 0.001,
                format!("noise-entropy grid margin {margin:.4} > 0.001"),
            );
        }
        if id == "sum-typical" {
            o.check(
                verdicts.len() >= 4,
                format!("sum-typical uses {} PMF pairs", verdicts.len()),
            );
        }
    }
    o
}

fn random_pmf(rng: &mut impl Rng, n: usize) -> Pmf {
    let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-9).collect();
    let t: f64 = w.iter().sum();
    Pmf::new(w.iter().map(|x| x / t).collect()).unwrap()
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = rng::stream(606, 0);

    let mut worst = 0.0f64;
    for i in 0..200 {
        let md = if i % 2 == 0 {
            Modulus::new(2, 3).unwrap()
        } else {
            Modulus::new(3, 2).unwrap()
        };
        let m = md.order() as usize;
        let p = random_pmf(&mut rng, m);
        for s in 0..=md.r() {
            let q = md.p_pow(s).unwrap() as usize;
            let j = JointPmf::from_pmf("x", &p)
                .with_derived("t", &["x"], q, |a| a[0] % q)
                .unwrap();
            let rhs = p.project(md, s).unwrap().entropy() + j.cond_entropy(&["x"], &["t"]).unwrap();
            worst = worst.max((p.entropy() - rhs).abs());
        }
    }
    o.check(
        worst <= 1e-9,
        format!("projection chain rule, 200 PMFs on Z_8/Z_9: max error {worst:.2e}"),
    );

    let mut pairs = 0u64;
    let mut bad = 0u64;
    for (p, r) in [(2, 2), (2, 3), (3, 2)] {
        let md = Modulus::new(p, r).unwrap();
        for s in 0..=r {
            let ps = md.p_pow(s).unwrap();
            for a in 0..md.order() {
                for b in 0..md.order() {
                    pairs += 1;
                    let lhs = md.proj(md.add(a, b), s).unwrap();
                    let rhs = (md.proj(a, s).unwrap() + md.proj(b, s).unwrap()) % ps;
                    bad += u64::from(lhs != rhs);
                }
            }
        }
    }
    o.check(
        bad == 0,
        format!("distributive projection, Z_4/Z_8/Z_9 exhaustive: {bad} of {pairs} fail"),
    );

    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let nq = rng.gen_range(1..=3);
        let q = random_pmf(&mut rng, nq);
        let u1 = (0..nq).map(|_| random_pmf(&mut rng, 4)).collect();
        let u2 = (0..nq).map(|_| random_pmf(&mut rng, 4)).collect();
        let aux = AuxPair::new(z4(), q, u1, u2).unwrap();
        for s in 0..=2 {
            let sum = aux.h_sum_given_proj(s).unwrap();
            for i in 0..2 {
                worst = worst.max(aux.h_user_given_proj(i, s).unwrap() - sum);
            }
        }
    }
    o.check(
        worst <= 1e-9,
        format!("H(W_i|Q,[W_i]_s) <= H(W1+W2|Q,[.]_s), 200 aux draws: max excess {worst:.2e}"),
    );

    let u = Pmf::uniform(4);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let rows = (0..16).map(|_| random_pmf(&mut rng, 4)).collect();
        let mac = Mac::new(z4(), CondPmf::new(vec![4, 4], rows).unwrap()).unwrap();
        let v = AuxPair::symmetric(z4(), random_pmf(&mut rng, 4)).unwrap();
        let w = AuxPair::symmetric(z4(), random_pmf(&mut rng, 4)).unwrap();
        let a = comp_mac_qgc_rate(&mac, &u, &u, &v, &w).unwrap();
        let b = comp_mac_corollary_rate(&mac, &v).unwrap();
        for (x, y) in a.rates.iter().zip(&b.rates) {
            worst = worst.max((x - y).abs());
        }
    }
    o.check(
        worst <= 1e-12,
        format!("general vs uniform-input MAC rates, 50 channels: max gap {worst:.2e}"),
    );
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();

    let noiseless = CompMacSim {
        mac: adder_mac(&Pmf::point(4, 0)).unwrap(),
        inputs: [Pmf::uniform(4), Pmf::uniform(4)],
        w: AuxPair::uniform(z4()),
        v: AuxPair::uniform(z4()),
        sim: SimConfig {
            n: 6,
            k: 3,
            l: [1, 1],
            eps: 4.0,
            eps_dec: Some(16.0),
            eps_index: None,
            trials: 1000,
            seed: 71,
        },
    };
    let r = simulate_comp_mac(&noiseless).unwrap();
    let unique = r.success + r.detail.wrong_unique;
    o.check(
        r.detail.wrong_unique == 0 && unique > 0 && r.trials >= 1000,
        format!(
            "(a) noiseless Z_4 adder: {} of {unique} unique-candidate trials decode the true sum ({} trials)",
            r.success, r.trials
        ),
    );

    let src = km_source(DELTA).unwrap();
    let w = aux_with_one(0.05).unwrap();
    let mut points = Vec::new();
    for n in [8, 12, 16] {
        let (k, l) = km_dimensions(&src, &w, n, 0.15).unwrap();
        let r = simulate_km(&KmSim {
            source: src.clone(),
            w: w.clone(),
            v_law: Pmf::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap(),
            sim: SimConfig {
                n,
                k,
                l,
                eps: 1.0,
                eps_dec: Some(0.3),
                eps_index: Some(0.2),
                trials: 1000,
                seed: 7,
            },
        })
        .unwrap();
        let p = r.ed_given_encoded;
        o.note(format!(
            "(b) n={n} k={k} l={l:?}: P(Ed|encoders ok) = {}/{} = {:.3} [{:.3}, {:.3}]",
            p.count, p.trials, p.estimate, p.lower, p.upper
        ));
        points.push(p);
    }
    o.check(
        trend_non_increasing(&points),
        "(b) KM decoding error non-increasing in n".into(),
    );

    let x = JointPmf::from_pmf("x", &Pmf::uniform(4));
    let shift = CondPmf::new(
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
    let cover = empirical_covering(&CoveringConfig {
        modulus: z4(),
        joint: x.with_kernel("xhat", &["x"], &shift).unwrap(),
        index: IndexSetSpec::full(z4(), 8).unwrap(),
        n: 12,
        eps: 2.0,
        trials: 300,
        seed: 73,
    })
    .unwrap();
    o.check(
        cover.margin >= 0.3 && cover.failures.estimate < 0.1,
        format!(
            "(c) covering at n=12, rate {:.3} vs bound {:.3} (slack {:.3}): failure fraction {:.3}",
            cover.code_rate, cover.bound, cover.margin, cover.failures.estimate
        ),
    );

    let took = start.elapsed();
    o.check(
        took < Duration::from_secs(600),
        format!("runtime {:.1} s < 600 s", took.as_secs_f64()),
    );
    o
}

fn cli(args: &[&str]) -> Vec<u8> {
    let mut out = Vec::new();
    let mut full = vec!["qgc"];
    full.extend_from_slice(args);
    let code = quasigroup::cli::run(full, &mut out, &mut Vec::new());
    assert!(code == 0 || code == 4, "qgc {args:?} exited {code}");
    out
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let cfg = |name: &str| format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"));
    let commands: Vec<Vec<String>> = vec![
        vec!["reproduce".into(), "table3".into()],
        vec![
            "rates".into(),
            "dist-src".into(),
            "-c".into(),
            cfg("example1.toml"),
            "--format".into(),
            "json".into(),
        ],
        vec![
            "rates".into(),
            "mac-states".into(),
            "-c".into(),
            cfg("example3.toml"),
        ],
        vec![
            "simulate".into(),
            "km".into(),
            "-c".into(),
            cfg("km_sim.toml"),
            "--trials".into(),
            "60".into(),
            "--seed".into(),
            "3".into(),
        ],
        vec![
            "simulate".into(),
            "comp-mac".into(),
            "-c".into(),
            cfg("comp_mac_sim.toml"),
            "--trials".into(),
            "60".into(),
        ],
        vec![
            "simulate".into(),
            "packing".into(),
            "-c".into(),
            cfg("packing.toml"),
            "--trials".into(),
            "40".into(),
            "--format".into(),
            "json".into(),
        ],
        vec!["verify".into(), "sum-typical".into()],
    ];
    for (i, cmd) in commands.iter().enumerate() {
        let mut files = Vec::new();
        for (run, threads) in ["1", "2"].iter().enumerate() {
            let path = dir.path().join(format!("{i}-{run}.out"));
            let mut args: Vec<&str> = cmd.iter().map(String::as_str).collect();
            let p = path.to_str().unwrap().to_string();
            args.extend(["--out", &p, "--threads", threads]);
            cli(&args);
            files.push(std::fs::read(&path).unwrap());
        }
        let stdout = cli(&cmd.iter().map(String::as_str).collect::<Vec<_>>());
        let same = files[0] == files[1] && files[0] == stdout && !stdout.is_empty();
        o.check(
            same,
            format!(
                "qgc {}: {} bytes, identical across reruns",
                cmd[..2].join(" "),
                stdout.len()
            ),
        );
    }
    o
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("modulo-sum source sum-rates", criterion_1),
        ("adder MAC computation rates", criterion_2),
        ("MAC with states example", criterion_3),
        ("exact P(phi) verification", criterion_4),
        ("lemma oracle suite", criterion_5),
        ("invariant suites", criterion_6),
        ("simulation trends", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {verdict} {name} ({:.2} s)",
            i + 1,
            start.elapsed().as_secs_f64()
        );
        for line in &o.detail {
            println!("    {line}");
        }
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
