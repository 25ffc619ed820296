//! Exhaustive checks of the supporting lemmas on small instances.
//!
//! Each check returns an [`OracleVerdict`]; a failing verdict always carries
//! a concrete witness.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mcsim::{trend_non_increasing, wilson};
use crate::prob::{entropy_preserved_by_conv, JointPmf, Pmf};
use crate::qgc::Qgc;
use crate::regions::{compositions, gp_example_outer_check};
use crate::rng;
use crate::typical::{conditional_typical_set, IndexSetSpec, TypicalSpec};
use crate::zring::Modulus;

/// Largest number of generator matrices enumerated by [`verify_pphi`].
pub const MAX_MATRICES: u64 = 1 << 20;

/// Largest number of sequence tuples visited by a single enumeration.
pub const MAX_TUPLES: f64 = 5e7;

/// Simplex grid step of the noise-entropy search.
pub const NOISE_GRID_STEP: f64 = 0.01;

/// Noise laws of the noise-entropy lemma.
pub const NOISE_LAWS: [[f64; 4]; 3] = [
    [1.0 / 3.0, 0.0, 2.0 / 3.0, 0.0],
    [1.0 / 3.0, 2.0 / 3.0, 0.0, 0.0],
    [0.25, 0.25, 0.5, 0.0],
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleVerdict {
    pub lemma: String,
    pub instance: String,
    pub pass: bool,
    /// Number of elementary cases checked.
    pub checked: u64,
    /// Named numeric findings (maxima, margins, sizes).
    pub metrics: Vec<(String, f64)>,
    pub witness: Option<String>,
}

impl OracleVerdict {
    fn new(lemma: &str, instance: String) -> Self {
        OracleVerdict {
            lemma: lemma.to_string(),
            instance,
            pass: true,
            checked: 0,
            metrics: Vec::new(),
            witness: None,
        }
    }

    fn fail(&mut self, witness: String) {
        if self.pass {
            self.pass = false;
            self.witness = Some(witness);
        }
    }

    fn metric(&mut self, name: &str, value: f64) {
        self.metrics.push((name.to_string(), value));
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.0 == name).map(|m| m.1)
    }
}

fn short(p: &Pmf) -> String {
    let parts: Vec<String> = p.probs().iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(" "))
}

/// Advances a mixed-radix counter with equal radix `base`; false on wrap.
fn next_digits(d: &mut [u64], base: u64) -> bool {
    for x in d.iter_mut() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

/// Enumerates every `k x n` generator over `Z_{p^r}` and checks, for every
/// `u` of level `s` and every `x`, that `#{G : uG = x} p^{n(r-s)}` equals
/// the number of matrices when `x` lies in `H_s^n` and 0 otherwise.
pub fn verify_pphi(p: u64, r: u32, k: usize, n: usize) -> Result<OracleVerdict> {
    let md = Modulus::new(p, r)?;
    let m = md.order();
    let mut v = OracleVerdict::new("pphi", format!("p={p} r={r} k={k} n={n}"));
    let total = (m as f64).powi((k * n) as i32);
    if total > MAX_MATRICES as f64
        || (m as f64).powi(k as i32) * (m as f64).powi(n as i32) > MAX_TUPLES
    {
        return Err(Error::guard(
            "generator matrices",
            total,
            MAX_MATRICES as f64,
        ));
    }
    let total = total as u64;
    let us = (m as usize).pow(k as u32);
    let xs = (m as usize).pow(n as u32);
    let index = |seq: &[u64]| {
        seq.iter()
            .rev()
            .fold(0usize, |a, &d| a * m as usize + d as usize)
    };
    let mut counts = vec![0u64; us * xs];
    let mut g = vec![0u64; k * n];
    let mut u = vec![0u64; k];
    let mut x = vec![0u64; n];
    loop {
        u.iter_mut().for_each(|d| *d = 0);
        for ui in 0..us {
            for (j, xj) in x.iter_mut().enumerate() {
                *xj = (0..k).fold(0, |acc, i| md.add(acc, md.mul(u[i], g[i * n + j])));
            }
            counts[ui * xs + index(&x)] += 1;
            next_digits(&mut u, m);
        }
        if !next_digits(&mut g, m) {
            break;
        }
    }
    u.iter_mut().for_each(|d| *d = 0);
    for ui in 0..us {
        let s = if u.iter().all(|&d| d == 0) {
            r
        } else {
            md.vec_level(&u)?
        };
        let scale = p.pow(n as u32 * (r - s));
        x.iter_mut().for_each(|d| *d = 0);
        for xi in 0..xs {
            let in_h = x.iter().all(|&d| d % p.pow(s) == 0);
            let lhs = counts[ui * xs + xi] as u128 * scale as u128;
            let rhs = if in_h { total as u128 } else { 0 };
            v.checked += 1;
            if lhs != rhs {
                v.fail(format!(
                    "u={u:?} (level {s}), x={x:?}: {} of {total} matrices, expected p^-{} * {}",
                    counts[ui * xs + xi],
                    n as u32 * (r - s),
                    u8::from(in_h)
                ));
            }
            next_digits(&mut x, m);
        }
        next_digits(&mut u, m);
    }
    v.metric("matrices", total as f64);
    Ok(v)
}

/// The default instances `(p, r, k, n)`.
pub const PPHI_SUITE: [(u64, u32, usize, usize); 4] =
    [(2, 2, 1, 1), (2, 2, 1, 2), (2, 2, 2, 1), (3, 1, 1, 2)];

/// Letter typicality of a tuple of sequences (axis-major flattening).
struct Letters {
    spec: TypicalSpec,
    sizes: Vec<usize>,
}

impl Letters {
    fn new(joint: &JointPmf, axes: &[&str], n: usize, eps: f64) -> Result<Self> {
        let marg = joint.marginal(axes)?;
        let sizes = axes
            .iter()
            .map(|a| joint.size_of(a))
            .collect::<Result<_>>()?;
        Ok(Letters {
            spec: TypicalSpec::new(Pmf::new(marg.probs().to_vec())?, n, eps)?,
            sizes,
        })
    }

    fn check(&self, seqs: &[&[usize]]) -> bool {
        let mut counts = vec![0usize; self.sizes.iter().product()];
        for j in 0..self.spec.n() {
            let idx = seqs
                .iter()
                .zip(&self.sizes)
                .fold(0, |a, (s, &z)| a * z + s[j]);
            counts[idx] += 1;
        }
        self.spec.is_typical_type(&counts)
    }

    /// Smallest slack at which the tuple is typical (infinite on a
    /// zero-probability cell).
    fn slack(&self, seqs: &[&[usize]]) -> f64 {
        let mut counts = vec![0usize; self.sizes.iter().product()];
        for j in 0..self.spec.n() {
            let idx = seqs
                .iter()
                .zip(&self.sizes)
                .fold(0, |a, (s, &z)| a * z + s[j]);
            counts[idx] += 1;
        }
        let n = self.spec.n() as f64;
        let pmf = self.spec.pmf();
        let mut worst = 0.0f64;
        for (a, &c) in counts.iter().enumerate() {
            let p = pmf.get(a);
            if p == 0.0 && c > 0 {
                return f64::INFINITY;
            }
            worst = worst.max((c as f64 / n - p).abs());
        }
        worst * counts.len() as f64
    }
}

fn all_sequences(alphabet: usize, n: usize) -> Vec<Vec<usize>> {
    let total = alphabet.pow(n as u32);
    (0..total)
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let d = c % alphabet;
                    c /= alphabet;
                    d
                })
                .collect()
        })
        .collect()
}

/// For every `([x]_s, y)` jointly typical, compares
/// `A = {x' : (x', y) typical, x' - x in H_s^n}` with the conditional typical
/// sets at slacks `c1 eps` and `c2 eps`, where `c1 = 1/(|X| + |Y|)` and
/// `c2 = p^{r-s} (|X| + 1)/|Y|`. `joint` has axes `x` (the ring) and `y`.
pub fn verify_typical_intersection(
    md: Modulus,
    joint: &JointPmf,
    n: usize,
    s: u32,
    eps: f64,
) -> Result<OracleVerdict> {
    md.check_level(s)?;
    let m = md.order() as usize;
    let ny = joint.size_of("y")?;
    if joint.size_of("x")? != m {
        return Err(Error::InvalidSpec("x must live on the ring".into()));
    }
    let q = md.p_pow(s)? as usize;
    let coset = m / q;
    let work =
        (q as f64).powi(n as i32) * (ny as f64).powi(n as i32) * (coset as f64).powi(n as i32);
    if work > MAX_TUPLES {
        return Err(Error::guard(
            "typical-intersection tuples",
            work,
            MAX_TUPLES,
        ));
    }
    let c1 = 1.0 / (m + ny) as f64;
    let c2 = (coset as f64) * (m + 1) as f64 / ny as f64;
    let mut v = OracleVerdict::new(
        "typical-intersection",
        format!("Z_{m} n={n} s={s} eps={eps} |Y|={ny}"),
    );
    let j = joint.with_derived("xs", &["x"], q, move |a| a[0] % q)?;
    let outer = Letters::new(&j, &["xs", "y"], n, eps)?;
    let pair = Letters::new(&j, &["x", "y"], n, eps)?;
    let lo = Letters::new(&j, &["x", "xs", "y"], n, c1 * eps)?;
    let hi = Letters::new(&j, &["x", "xs", "y"], n, c2 * eps)?;
    let reps = all_sequences(q, n);
    let ys = all_sequences(ny, n);
    let lifts = all_sequences(coset, n);
    #[derive(Default)]
    struct Tally {
        cases: u64,
        size_a: u64,
        size_lo: u64,
        size_hi: u64,
        c1_limit: f64,
        c2_needed: f64,
        witness: Option<String>,
    }
    let results: Vec<Tally> = reps
        .par_iter()
        .map(|a| {
            let mut t = Tally { c1_limit: f64::INFINITY, ..Tally::default() };
            for y in &ys {
                if !outer.check(&[a, y]) {
                    continue;
                }
                t.cases += 1;
                for h in &lifts {
                    let xp: Vec<usize> = a.iter().zip(h).map(|(&ai, &hi)| ai + q * hi).collect();
                    let in_a = pair.check(&[&xp, y]);
                    let in_lo = lo.check(&[&xp, a, y]);
                    let in_hi = hi.check(&[&xp, a, y]);
                    let need = lo.slack(&[&xp, a, y]) / eps;
                    t.size_a += u64::from(in_a);
                    t.size_lo += u64::from(in_lo);
                    t.size_hi += u64::from(in_hi);
                    if in_a {
                        t.c2_needed = t.c2_needed.max(need);
                    } else {
                        t.c1_limit = t.c1_limit.min(need);
                    }
                    if t.witness.is_none() {
                        if in_lo && !in_a {
                            t.witness = Some(format!("x'={xp:?} y={y:?}: in the c1-conditional set but not in A"));
                        } else if in_a && !in_hi {
                            t.witness = Some(format!(
                                "x'={xp:?} y={y:?}: in A but not in the c2-conditional set (needs {need:.4})"
                            ));
                        }
                    }
                }
            }
            t
        })
        .collect();
    let (mut a_total, mut lo_total, mut hi_total) = (0, 0, 0);
    let (mut c1_limit, mut c2_needed) = (f64::INFINITY, 0.0f64);
    for t in results {
        v.checked += t.cases;
        a_total += t.size_a;
        lo_total += t.size_lo;
        hi_total += t.size_hi;
        c1_limit = c1_limit.min(t.c1_limit);
        c2_needed = c2_needed.max(t.c2_needed);
        if let Some(w) = t.witness {
            v.fail(w);
        }
    }
    v.metric("c1", c1);
    v.metric("c2", c2);
    v.metric("sum_size_lower", lo_total as f64);
    v.metric("sum_size_a", a_total as f64);
    v.metric("sum_size_upper", hi_total as f64);
    // Largest multiplier for which the lower inclusion is forced, and the
    // smallest one the upper inclusion actually needs.
    v.metric("c1_limit", c1_limit);
    v.metric("c2_needed", c2_needed);
    Ok(v)
}

/// Checks `A_{eps/2}(X+Y)` is contained in `A_eps(X) + A_eps(Y)` by first
/// trying `y` from `A_{eps/2}(Y | z)` and then, if needed, every `y` in
/// `A_eps(Y)`.
pub fn verify_sum_typical(px: &Pmf, py: &Pmf, n: usize, eps: f64) -> Result<OracleVerdict> {
    let m = px.len();
    if py.len() != m {
        return Err(Error::Shape("marginals on different groups".into()));
    }
    let mut v = OracleVerdict::new(
        "sum-typical",
        format!("Z_{m} n={n} eps={eps} px={} py={}", short(px), short(py)),
    );
    let pz = px.circ_conv(py)?;
    let z_set = TypicalSpec::new(pz, n, eps / 2.0)?.enumerate()?;
    let x_spec = TypicalSpec::new(px.clone(), n, eps)?;
    let y_spec = TypicalSpec::new(py.clone(), n, eps)?;
    let y_all = y_spec.enumerate()?;
    let joint = JointPmf::independent(&[("x", px), ("y", py)])?.with_derived(
        "z",
        &["x", "y"],
        m,
        move |a| (a[0] + a[1]) % m,
    )?;
    let (mut constructive, mut fallback) = (0u64, 0u64);
    for z in &z_set {
        v.checked += 1;
        let split = |y: &[usize]| -> Result<bool> {
            let x: Vec<usize> = z.iter().zip(y).map(|(&a, &b)| (a + m - b) % m).collect();
            Ok(x_spec.is_typical(&x)? && y_spec.is_typical(y)?)
        };
        let mut done = false;
        for y in conditional_typical_set(&joint, "y", &["z"], &[z.as_slice()], eps / 2.0)? {
            if split(&y)? {
                done = true;
                break;
            }
        }
        if done {
            constructive += 1;
            continue;
        }
        for y in &y_all {
            if split(y)? {
                done = true;
                break;
            }
        }
        if done {
            fallback += 1;
        } else {
            v.fail(format!("z={z:?} has no split into typical x + y"));
        }
    }
    v.metric("typical_sums", z_set.len() as f64);
    v.metric("constructive", constructive as f64);
    v.metric("fallback", fallback as f64);
    Ok(v)
}

fn random_pmf(rng: &mut impl Rng, m: usize) -> Pmf {
    let w: Vec<f64> = (0..m).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let t: f64 = w.iter().sum();
    Pmf::new(w.into_iter().map(|x| x / t).collect()).expect("normalised weights")
}

/// Both directions of the entropy-preserving convolution characterisation
/// on constructed shift, coset and uniform cases and `random` random pairs.
pub fn verify_entropy_conv(m: usize, random: usize, seed: u64) -> Result<OracleVerdict> {
    let mut v = OracleVerdict::new("entropy-conv", format!("Z_{m} random={random} seed={seed}"));
    let mut rng = rng::stream(seed, 0);
    let mut cases: Vec<(Pmf, Pmf, &str)> = Vec::new();
    for i in 0..m {
        cases.push((Pmf::point(m, i), random_pmf(&mut rng, m), "shift"));
        cases.push((random_pmf(&mut rng, m), Pmf::uniform(m), "uniform"));
    }
    for d in (2..m).filter(|d| m.is_multiple_of(*d)) {
        // q uniform on a coset of the subgroup of order d, p inside that subgroup.
        let step = m / d;
        let mut q = vec![0.0; m];
        for j in 0..d {
            q[(1 + j * step) % m] = 1.0 / d as f64;
        }
        let w = random_pmf(&mut rng, d);
        let mut p = vec![0.0; m];
        for j in 0..d {
            p[j * step] = w.get(j);
        }
        cases.push((Pmf::new(p)?, Pmf::new(q)?, "coset"));
    }
    for _ in 0..random {
        cases.push((random_pmf(&mut rng, m), random_pmf(&mut rng, m), "random"));
    }
    let (mut preserved, mut worst_forward) = (0u64, 0.0f64);
    for (p, q, kind) in &cases {
        v.checked += 1;
        let dh = p.circ_conv(q)?.entropy() - q.entropy();
        let cond = entropy_preserved_by_conv(p, q, 1e-6)?;
        if cond {
            preserved += 1;
            worst_forward = worst_forward.max(dh.abs());
            if dh.abs() >= 1e-7 {
                v.fail(format!(
                    "{kind}: condition holds but dH={dh:e}; p={:?} q={:?}",
                    p.probs(),
                    q.probs()
                ));
            }
        }
        if dh.abs() < 1e-9 && !cond {
            v.fail(format!(
                "{kind}: dH={dh:e} without the shift condition; p={:?} q={:?}",
                p.probs(),
                q.probs()
            ));
        }
        if dh < -1e-12 {
            v.fail(format!("{kind}: convolution lowered entropy by {}", -dh));
        }
    }
    v.metric("preserving_cases", preserved as f64);
    v.metric("max_dh_when_preserving", worst_forward);
    Ok(v)
}

fn h4(p: &[f64; 4]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

fn conv4(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[(i + j) % 4] += a[i] * b[j];
        }
    }
    out
}

/// Grid search over maps `f: Z_4 -> {0, 2}` and state laws on the simplex
/// for `H(S) - H(f(S) + S)` and `H(S) - H(f(S) + S + N)`.
pub fn verify_noise_entropy_bound() -> OracleVerdict {
    let units = (1.0 / NOISE_GRID_STEP).round() as usize;
    let mut v = OracleVerdict::new(
        "noise-entropy",
        format!("grid step {NOISE_GRID_STEP}, 16 maps, 3 noise laws"),
    );
    let grid: Vec<[f64; 4]> = compositions(units, 4)
        .into_iter()
        .map(|c| {
            let mut p = [0.0; 4];
            for (x, u) in p.iter_mut().zip(c) {
                *x = u as f64 / units as f64;
            }
            p
        })
        .collect();
    let maps: Vec<[usize; 4]> = (0..16u32)
        .map(|code| std::array::from_fn(|s| 2 * ((code >> s) & 1) as usize))
        .collect();
    // Per grid point: (max plain, max noisy per law, arg of noisy max).
    let best = grid
        .par_iter()
        .map(|ps| {
            let hs = h4(ps);
            let mut plain = f64::NEG_INFINITY;
            let mut noisy = [(f64::NEG_INFINITY, 0usize); 3];
            for (fi, f) in maps.iter().enumerate() {
                let mut q = [0.0; 4];
                for s in 0..4 {
                    q[(f[s] + s) % 4] += ps[s];
                }
                plain = plain.max(hs - h4(&q));
                for (k, law) in NOISE_LAWS.iter().enumerate() {
                    let val = hs - h4(&conv4(&q, law));
                    if val > noisy[k].0 {
                        noisy[k] = (val, fi);
                    }
                }
            }
            (plain, noisy, *ps)
        })
        .collect::<Vec<_>>();
    let mut plain_max = f64::NEG_INFINITY;
    let mut noisy_max = [(f64::NEG_INFINITY, 0usize, [0.0; 4]); 3];
    for (plain, noisy, ps) in best {
        v.checked += 16;
        plain_max = plain_max.max(plain);
        for k in 0..3 {
            if noisy[k].0 > noisy_max[k].0 {
                noisy_max[k] = (noisy[k].0, noisy[k].1, ps);
            }
        }
    }
    if plain_max > 1.0 + 1e-9 {
        v.fail(format!("H(S) - H(X + S) reached {plain_max}"));
    }
    let mut overall = f64::NEG_INFINITY;
    for (k, (val, f, ps)) in noisy_max.iter().enumerate() {
        v.metric(&format!("max_noisy_{k}"), *val);
        overall = overall.max(*val);
        if *val >= 1.0 {
            v.fail(format!(
                "noise {:?}: value {val} at f={:?} P_S={ps:?}",
                NOISE_LAWS[k], maps[*f]
            ));
        }
    }
    // Equality case of the first bound: S uniform, f(s) = 2 for s in {2, 3}.
    let eq = {
        let ps = [0.25; 4];
        let mut q = [0.0; 4];
        for s in 0..4 {
            q[(s + if s >= 2 { 2 } else { 0 }) % 4] += 0.25;
        }
        h4(&ps) - h4(&q)
    };
    v.metric("max_plain", plain_max);
    v.metric("equality_case_plain", eq);
    v.metric("max_noisy", overall);
    v.metric("margin", 1.0 - overall);
    v
}

/// Exact two- and three-way decompositions of the claim on rational grids,
/// and the concavity inequality for random `q`.
pub fn verify_claim_decompositions(seed: u64) -> OracleVerdict {
    let mut v = OracleVerdict::new(
        "claim-decomp",
        format!("p0 grid 1/300, case-3 grid 1/100, seed {seed}"),
    );
    // Two-way: p0 = a/d with d = 300, a in [d/3, 2d/3]; in units of 1/(3d):
    // p = beta (2/3, 1/3) + (1 - beta)(1/3, 2/3) with beta = (3a - d)/d.
    let d: i64 = 300;
    for a in d / 3..=2 * d / 3 {
        let beta = 3 * a - d;
        let rest = d - beta;
        let first = 2 * beta + rest;
        let second = beta + 2 * rest;
        v.checked += 1;
        if first != 3 * a || second != 3 * (d - a) || !(0..=d).contains(&beta) {
            v.fail(format!(
                "p0 = {a}/{d}: beta*{d} = {beta}, components {first}/{second} (x 1/{})",
                3 * d
            ));
        }
    }
    // Three-way: p_i = a_i/d, a_i >= d/4, beta_i = 4p_i - 1; in units of 1/(4d).
    let d: i64 = 100;
    for a0 in d / 4..=d {
        for a1 in d / 4..=d - a0 {
            let a2 = d - a0 - a1;
            if a2 < d / 4 {
                continue;
            }
            let b = [4 * a0 - d, 4 * a1 - d, 4 * a2 - d];
            let comp = [
                2 * b[0] + b[1] + b[2],
                b[0] + 2 * b[1] + b[2],
                b[0] + b[1] + 2 * b[2],
            ];
            v.checked += 1;
            if comp != [4 * a0, 4 * a1, 4 * a2] || b.iter().sum::<i64>() != d {
                v.fail(format!(
                    "p = ({a0},{a1},{a2})/{d}: components {comp:?} (x 1/{})",
                    4 * d
                ));
            }
        }
    }
    let mut rng = rng::stream(seed, 0);
    let mut worst = f64::INFINITY;
    let pair = |p0: f64, odd: bool| -> (f64, [[f64; 4]; 2], [f64; 4]) {
        let beta = 3.0 * p0 - 1.0;
        if odd {
            (
                beta,
                [
                    [2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0],
                    [1.0 / 3.0, 2.0 / 3.0, 0.0, 0.0],
                ],
                [p0, 1.0 - p0, 0.0, 0.0],
            )
        } else {
            (
                beta,
                [
                    [2.0 / 3.0, 0.0, 1.0 / 3.0, 0.0],
                    [1.0 / 3.0, 0.0, 2.0 / 3.0, 0.0],
                ],
                [p0, 0.0, 1.0 - p0, 0.0],
            )
        }
    };
    for t in 0..1000 {
        let q = random_pmf(&mut rng, 4);
        let q: [f64; 4] = std::array::from_fn(|i| q.get(i));
        let p0 = 1.0 / 3.0 + rng.gen::<f64>() / 3.0;
        let (beta, parts, p) = pair(p0, t % 2 == 1);
        let gap = h4(&conv4(&p, &q))
            - beta * h4(&conv4(&parts[0], &q))
            - (1.0 - beta) * h4(&conv4(&parts[1], &q));
        worst = worst.min(gap);
        let w = random_pmf(&mut rng, 3);
        let p3: [f64; 4] = [
            0.25 + 0.25 * w.get(0),
            0.25 + 0.25 * w.get(1),
            0.25 + 0.25 * w.get(2),
            0.0,
        ];
        let betas: Vec<f64> = p3[..3].iter().map(|x| 4.0 * x - 1.0).collect();
        let bases = [
            [0.5, 0.25, 0.25, 0.0],
            [0.25, 0.5, 0.25, 0.0],
            [0.25, 0.25, 0.5, 0.0],
        ];
        let mix: f64 = betas
            .iter()
            .zip(&bases)
            .map(|(b, base)| b * h4(&conv4(base, &q)))
            .sum();
        let gap3 = h4(&conv4(&p3, &q)) - mix;
        worst = worst.min(gap3);
        v.checked += 2;
        if gap < -1e-9 || gap3 < -1e-9 {
            v.fail(format!("concavity gap {} at q={q:?}", gap.min(gap3)));
        }
    }
    v.metric("min_concavity_margin", worst);
    v
}

/// Injectivity of `u -> uG` on a typical index set at `k = round(c n)`.
/// When the entropy condition holds for every level the unique-preimage
/// fraction must reach 0.9 at the largest `n` without decreasing (up to
/// interval overlap); when it fails by at least 0.3 bit the fraction at
/// the largest `n` must be at most 0.5. Other cases are reported only.
pub fn verify_injectivity_condition(
    md: Modulus,
    c: f64,
    law: &Pmf,
    eps: f64,
    ns: &[usize],
    draws: u64,
    seed: u64,
) -> Result<OracleVerdict> {
    let mut v = OracleVerdict::new(
        "injectivity",
        format!(
            "Z_{} c={c} law={} eps={eps} n={ns:?}",
            md.order(),
            short(law)
        ),
    );
    let mut slack = f64::INFINITY;
    for s in 0..md.r() {
        let h_cond = law.entropy() - law.project(md, s)?.entropy();
        slack = slack.min((md.r() - s) as f64 * md.log2_p() / c - h_cond);
    }
    v.metric("condition_slack", slack);
    let mut points = Vec::new();
    for (t, &n) in ns.iter().enumerate() {
        let k = ((c * n as f64).round() as usize).max(1);
        let index = IndexSetSpec::single(law.clone(), k, eps)?;
        let per_code = 16usize;
        let mut unique = 0u64;
        for d in 0..draws {
            let mut rng = rng::stream(seed, (t as u64) << 32 | d);
            let code = Qgc::sample(&mut rng, md, index.clone(), n)?;
            let frac = code.injectivity_probe(&mut rng, per_code)?;
            unique += (frac * per_code as f64).round() as u64;
        }
        let p = wilson(unique, draws * per_code as u64);
        v.checked += draws;
        v.metric(&format!("fraction_n{n}"), p.estimate);
        points.push(p);
    }
    let last = *points
        .last()
        .ok_or_else(|| Error::InvalidSpec("empty n list".into()))?;
    if slack > 0.0 {
        let misses: Vec<_> = points
            .iter()
            .map(|p| wilson(p.trials - p.count, p.trials))
            .collect();
        if last.estimate < 0.9 || !trend_non_increasing(&misses) {
            v.fail(format!(
                "condition holds but fractions are {:?}",
                points.iter().map(|p| p.estimate).collect::<Vec<_>>()
            ));
        }
    } else if slack <= -0.3 && last.estimate > 0.5 {
        v.fail(format!(
            "condition violated by {} bit but fraction {}",
            -slack, last.estimate
        ));
    }
    Ok(v)
}

/// Runs the default instance suite of one lemma id (see [`LEMMA_IDS`]).
pub fn default_suite(id: &str) -> Result<Vec<OracleVerdict>> {
    let z4 = Modulus::new(2, 2)?;
    match id {
        "pphi" => PPHI_SUITE
            .iter()
            .map(|&(p, r, k, n)| verify_pphi(p, r, k, n))
            .collect(),
        "typical-intersection" => {
            let mut out = Vec::new();
            let product = JointPmf::independent(&[
                ("x", &Pmf::new(vec![0.4, 0.3, 0.2, 0.1])?),
                ("y", &Pmf::new(vec![0.5, 0.5])?),
            ])?;
            let noisy =
                JointPmf::from_pmf("x", &Pmf::uniform(4))
                    .with_derived("y", &["x"], 2, |a| a[0] % 2)?;
            for s in 0..=2 {
                out.push(verify_typical_intersection(z4, &product, 4, s, 1.0)?);
                out.push(verify_typical_intersection(z4, &noisy, 4, s, 1.0)?);
                out.push(verify_typical_intersection(z4, &noisy, 5, s, 2.0)?);
            }
            // Near-boundary slack: the letter windows sit on integer counts.
            out.push(verify_typical_intersection(z4, &product, 4, 1, 0.8)?);
            Ok(out)
        }
        "sum-typical" => {
            let mut rng = rng::stream(17, 0);
            let mut out = vec![verify_sum_typical(
                &Pmf::point(4, 1),
                &Pmf::point(4, 2),
                4,
                0.5,
            )?];
            for n in [4, 6] {
                for _ in 0..3 {
                    let px = random_pmf(&mut rng, 4);
                    let py = random_pmf(&mut rng, 4);
                    out.push(verify_sum_typical(&px, &py, n, 2.0)?);
                }
            }
            Ok(out)
        }
        "entropy-conv" => Ok(vec![
            verify_entropy_conv(4, 1000, 5)?,
            verify_entropy_conv(6, 1000, 6)?,
        ]),
        "noise-entropy" => Ok(vec![verify_noise_entropy_bound()]),
        "claim-decomp" => Ok(vec![verify_claim_decompositions(9)]),
        "injectivity" => {
            let binary = Pmf::new(vec![0.5, 0.5, 0.0, 0.0])?;
            Ok(vec![
                verify_injectivity_condition(z4, 1.0, &binary, 1.0, &[4, 6, 8], 40, 1)?,
                verify_injectivity_condition(z4, 1.5, &Pmf::uniform(4), 4.0, &[2, 4], 20, 2)?,
                verify_injectivity_condition(z4, 1.0, &Pmf::point(4, 0), 0.5, &[4, 6], 10, 3)?,
            ])
        }
        "gp-outer" => {
            let r = gp_example_outer_check(0.02);
            let mut v = OracleVerdict::new("gp-outer", format!("grid step {}", r.step));
            v.checked = r.evaluated_pairs;
            v.metric("max", r.max);
            v.metric("margin", r.margin);
            if !r.below_one {
                v.fail(format!("value {} at laws {:?}", r.max, r.witness));
            }
            Ok(vec![v])
        }
        other => Err(Error::InvalidSpec(format!("unknown lemma id `{other}`"))),
    }
}

/// Lemma ids accepted by [`default_suite`].
pub const LEMMA_IDS: [&str; 8] = [
    "pphi",
    "typical-intersection",
    "sum-typical",
    "entropy-conv",
    "noise-entropy",
    "claim-decomp",
    "injectivity",
    "gp-outer",
];

#[cfg(test)]
mod tests;
