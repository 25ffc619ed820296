//! Monte Carlo simulation of the nested-code schemes at small blocklengths,
//! plus empirical covering and packing probes for single random codes.
//!
//! Every trial draws its own codebooks and data from `rng::stream(seed,
//! trial)`, so reports are reproducible and independent of thread count.

use std::collections::BTreeSet;

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::{CondPmf, JointPmf, Pmf};
use crate::qgc::GroupCode;
use crate::regions::{AuxPair, Mac, SourcePair};
use crate::rng;
use crate::typical::{IndexSetSpec, TypicalSpec};
use crate::zring::{Modulus, RingMatrix};

/// Upper limit on candidate evaluations in a single encoder or decoder search.
pub const MAX_SEARCH: f64 = 5e7;

/// Normal quantile used for the Wilson intervals (95%).
pub const WILSON_Z: f64 = 1.96;

/// An empirical frequency with its Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Proportion {
    pub count: u64,
    pub trials: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Wilson score interval; with no trials the estimate is 0 and the
/// interval is `[0, 1]`.
pub fn wilson(count: u64, trials: u64) -> Proportion {
    if trials == 0 {
        return Proportion {
            count,
            trials,
            estimate: 0.0,
            lower: 0.0,
            upper: 1.0,
        };
    }
    let n = trials as f64;
    let p = count as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let den = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / den;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / den;
    Proportion {
        count,
        trials,
        estimate: p,
        lower: (centre - half).max(0.0),
        upper: (centre + half).min(1.0),
    }
}

/// True if the estimates never increase, except for at most one step up
/// whose intervals overlap.
pub fn trend_non_increasing(points: &[Proportion]) -> bool {
    let mut inversions = 0;
    for w in points.windows(2) {
        if w[1].estimate > w[0].estimate {
            if w[1].lower > w[0].upper {
                return false;
            }
            inversions += 1;
        }
    }
    inversions <= 1
}

/// Shared simulation parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub n: usize,
    /// Inner index length, common to both users.
    pub k: usize,
    /// Bin index lengths.
    pub l: [usize; 2],
    /// Slack of the encoders and index sets.
    pub eps: f64,
    /// Slack of the decoder; `None` uses `eps`.
    pub eps_dec: Option<f64>,
    /// Slack of the inner index sets and the decoder's index set; `None`
    /// uses `eps`.
    pub eps_index: Option<f64>,
    pub trials: u64,
    pub seed: u64,
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 || self.l.contains(&0) || self.trials == 0 {
            return Err(Error::InvalidSpec(
                "n, k, l and trials must be positive".into(),
            ));
        }
        Ok(())
    }

    fn eps_dec(&self) -> f64 {
        self.eps_dec.unwrap_or(self.eps)
    }

    fn eps_index(&self) -> f64 {
        self.eps_index.unwrap_or(self.eps)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DecodeDetail {
    pub no_candidate: u64,
    pub multiple: u64,
    pub wrong_unique: u64,
    /// Trials with both encoders successful whose true sum is not in the
    /// decoder's codebook.
    pub truth_outside: u64,
}

/// Code rates in bits per symbol, from exact index-set sizes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizedRates {
    pub inner: [f64; 2],
    pub bins: [f64; 2],
    pub decoder_index: f64,
}

/// Event counts of a simulation. Each trial lands in exactly one of
/// `structural`, `e1`, `e2`, `ec`, `ed`, `success`, taken in that order of
/// precedence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub scheme: String,
    pub trials: u64,
    pub structural: u64,
    pub e1: u64,
    pub e2: u64,
    pub ec: u64,
    pub ed: u64,
    pub success: u64,
    pub detail: DecodeDetail,
    pub error: Proportion,
    /// `P(Ed | both encoders succeeded and no channel-typicality failure)`.
    pub ed_given_encoded: Proportion,
    pub rates: RealizedRates,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Structural,
    E1,
    E2,
    Ec,
    NoCandidate,
    Multiple,
    WrongUnique,
    Success,
}

fn tally(scheme: &str, outcomes: &[(Outcome, bool)], rates: RealizedRates) -> SimReport {
    let count = |o: Outcome| outcomes.iter().filter(|x| x.0 == o).count() as u64;
    let detail = DecodeDetail {
        no_candidate: count(Outcome::NoCandidate),
        multiple: count(Outcome::Multiple),
        wrong_unique: count(Outcome::WrongUnique),
        truth_outside: outcomes.iter().filter(|x| x.1).count() as u64,
    };
    let ed = detail.no_candidate + detail.multiple + detail.wrong_unique;
    let success = count(Outcome::Success);
    let trials = outcomes.len() as u64;
    SimReport {
        scheme: scheme.to_string(),
        trials,
        structural: count(Outcome::Structural),
        e1: count(Outcome::E1),
        e2: count(Outcome::E2),
        ec: count(Outcome::Ec),
        ed,
        success,
        detail,
        error: wilson(trials - success, trials),
        ed_given_encoded: wilson(ed, ed + success),
        rates,
    }
}

/// Letter typicality of tuples of sequences under a joint law over the
/// product alphabet.
#[derive(Clone, Debug)]
struct TypTest {
    spec: TypicalSpec,
    sizes: Vec<usize>,
    cells: usize,
}

impl TypTest {
    fn new(probs: &[f64], sizes: Vec<usize>, n: usize, eps: f64) -> Result<Self> {
        let cells = sizes.iter().product();
        let spec = TypicalSpec::new(Pmf::new(probs.to_vec())?, n, eps)?;
        Ok(TypTest { spec, sizes, cells })
    }

    fn from_joint(joint: &JointPmf, axes: &[&str], n: usize, eps: f64) -> Result<Self> {
        let marg = joint.marginal(axes)?;
        let sizes = axes
            .iter()
            .map(|a| joint.size_of(a))
            .collect::<Result<_>>()?;
        TypTest::new(marg.probs(), sizes, n, eps)
    }

    fn check(&self, seqs: &[&[u64]]) -> bool {
        let mut counts = vec![0usize; self.cells];
        for j in 0..self.spec.n() {
            let mut idx = 0;
            for (s, &size) in seqs.iter().zip(&self.sizes) {
                idx = idx * size + s[j] as usize;
            }
            counts[idx] += 1;
        }
        self.spec.is_typical_type(&counts)
    }
}

fn trivial_q_laws(aux: &AuxPair, what: &str) -> Result<[Pmf; 2]> {
    if aux.q().len() != 1 {
        return Err(Error::InvalidSpec(format!(
            "simulation needs a trivial Q for {what}"
        )));
    }
    Ok([aux.laws(0)[0].clone(), aux.laws(1)[0].clone()])
}

fn members(spec: &IndexSetSpec) -> Result<Vec<Vec<usize>>> {
    spec.enumerate()
}

fn rate_of(spec: &IndexSetSpec, n: usize) -> Result<f64> {
    Ok(spec.log2_size()? / n as f64)
}

fn shuffled(rng: &mut impl RngCore, len: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = rng::below(rng, i as u64 + 1) as usize;
        order.swap(i, j);
    }
    order
}

fn add_into(md: Modulus, acc: &mut [u64], other: &[u64]) {
    for (a, &b) in acc.iter_mut().zip(other) {
        *a = md.add(*a, b);
    }
}

fn sub_into(md: Modulus, acc: &mut [u64], other: &[u64]) {
    for (a, &b) in acc.iter_mut().zip(other) {
        *a = md.sub(*a, b);
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Solver for `v Gbar = t (mod p)` in `v`, built once per generator.
struct ModPSolver {
    p: u64,
    /// Row operations taking the system to reduced echelon form (`n x n`).
    transform: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    kernel: Vec<Vec<u64>>,
    l: usize,
}

impl ModPSolver {
    fn new(gbar: &RingMatrix, l: usize, p: u64) -> Self {
        let n = gbar.cols();
        // Equation j reads sum_i v_i Gbar[i][j] = t_j.
        let mut a: Vec<Vec<u64>> = (0..n)
            .map(|j| (0..l).map(|i| gbar.get(i, j) % p).collect())
            .collect();
        let mut t: Vec<Vec<u64>> = (0..n)
            .map(|j| (0..n).map(|c| u64::from(c == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..l {
            let Some(pr) = (row..n).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(row, pr);
            t.swap(row, pr);
            let inv = pow_mod(a[row][col], p - 2, p);
            for x in a[row].iter_mut().chain(t[row].iter_mut()) {
                *x = *x * inv % p;
            }
            let (pa, pt) = (a[row].clone(), t[row].clone());
            for r in 0..n {
                if r != row && a[r][col] != 0 {
                    let f = a[r][col];
                    for (x, y) in a[r].iter_mut().zip(&pa).chain(t[r].iter_mut().zip(&pt)) {
                        *x = (*x + (p - f) * y) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        let free: Vec<usize> = (0..l).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; l];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - a[r][f]) % p;
                }
                v
            })
            .collect();
        ModPSolver {
            p,
            transform: t,
            pivots,
            kernel,
            l,
        }
    }

    fn particular(&self, target: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let rhs: Vec<u64> = self
            .transform
            .iter()
            .map(|row| {
                row.iter()
                    .zip(target)
                    .map(|(&a, &b)| a * (b % p))
                    .sum::<u64>()
                    % p
            })
            .collect();
        if rhs[self.pivots.len()..].iter().any(|&x| x != 0) {
            return None;
        }
        let mut v = vec![0u64; self.l];
        for (r, &pc) in self.pivots.iter().enumerate() {
            v[pc] = rhs[r];
        }
        Some(v)
    }
}

/// Searches `v` with `v Gbar = target (mod p^r)`, each `v_i` in `{0..p-1}`
/// and `v` typical for the bin law. Returns the first match in odometer
/// order over the kernel coordinates.
fn solve_bin(
    md: Modulus,
    gbar: &RingMatrix,
    solver: &ModPSolver,
    v_spec: &TypicalSpec,
    target: &[u64],
) -> Option<Vec<u64>> {
    let p = solver.p;
    let mut v = solver.particular(target)?;
    let n = target.len();
    let mut acc = vec![0u64; n];
    let mut counts = vec![0usize; v_spec.pmf().len()];
    for (i, &vi) in v.iter().enumerate() {
        counts[vi as usize] += 1;
        if vi != 0 {
            let row = gbar.row(i);
            for (a, &g) in acc.iter_mut().zip(row) {
                *a = md.add(*a, md.mul(vi, g));
            }
        }
    }
    let f = solver.kernel.len();
    let mut digits = vec![0u64; f];
    loop {
        if v_spec.is_typical_type(&counts) && acc == target {
            return Some(v);
        }
        // Odometer step: add kernel vector j, carrying into j + 1 on wrap.
        let mut j = 0;
        loop {
            if j == f {
                return None;
            }
            for (i, &b) in solver.kernel[j].iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let old = v[i];
                let new = (old + b) % p;
                v[i] = new;
                counts[old as usize] -= 1;
                counts[new as usize] += 1;
                let row = gbar.row(i);
                let (up, delta) = if new >= old {
                    (true, new - old)
                } else {
                    (false, old - new)
                };
                for (a, &g) in acc.iter_mut().zip(row) {
                    let d = md.mul(delta, g);
                    *a = if up { md.add(*a, d) } else { md.sub(*a, d) };
                }
            }
            digits[j] += 1;
            if digits[j] < p {
                break;
            }
            digits[j] = 0;
            j += 1;
        }
    }
}

/// A vector over Z_4 of length at most 64 held as two bit planes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Z4Planes {
    lo: u64,
    hi: u64,
}

impl Z4Planes {
    fn from_slice(x: &[u64]) -> Self {
        let mut out = Z4Planes { lo: 0, hi: 0 };
        for (i, &a) in x.iter().enumerate() {
            out.lo |= (a & 1) << i;
            out.hi |= ((a >> 1) & 1) << i;
        }
        out
    }

    fn add(self, o: Z4Planes) -> Self {
        Z4Planes {
            lo: self.lo ^ o.lo,
            hi: self.hi ^ o.hi ^ (self.lo & o.lo),
        }
    }

    fn neg(self) -> Self {
        Z4Planes {
            lo: self.lo,
            hi: self.hi ^ self.lo,
        }
    }
}

/// Bin search specialised to Z_4 with `n, l <= 64`, binary `v`.
struct Z4BinSearch {
    rows: Vec<Z4Planes>,
    neg_rows: Vec<Z4Planes>,
    kernel: Vec<u64>,
}

impl Z4BinSearch {
    fn new(gbar: &RingMatrix, solver: &ModPSolver) -> Self {
        let rows: Vec<Z4Planes> = (0..gbar.rows())
            .map(|i| Z4Planes::from_slice(gbar.row(i)))
            .collect();
        let neg_rows = rows.iter().map(|r| r.neg()).collect();
        let kernel = solver
            .kernel
            .iter()
            .map(|v| v.iter().enumerate().fold(0u64, |m, (i, &b)| m | (b << i)))
            .collect();
        Z4BinSearch {
            rows,
            neg_rows,
            kernel,
        }
    }

    fn solve(&self, solver: &ModPSolver, v_spec: &TypicalSpec, target: &[u64]) -> Option<Vec<u64>> {
        let v0 = solver.particular(target)?;
        let l = v0.len();
        let want = Z4Planes::from_slice(target);
        let mut v = v0.iter().enumerate().fold(0u64, |m, (i, &b)| m | (b << i));
        let mut acc = Z4Planes { lo: 0, hi: 0 };
        for i in 0..l {
            if v >> i & 1 == 1 {
                acc = acc.add(self.rows[i]);
            }
        }
        let width = v_spec.pmf().len();
        let typical = |v: u64| {
            let ones = v.count_ones() as usize;
            let mut counts = [0usize; 4];
            counts[0] = l - ones;
            counts[1] = ones;
            v_spec.is_typical_type(&counts[..width])
        };
        // Gray-code order: step t flips kernel vector `trailing_zeros(t)`.
        let f = self.kernel.len();
        let total: u64 = 1 << f;
        let mut t: u64 = 0;
        loop {
            if acc == want && typical(v) {
                return Some((0..l).map(|i| v >> i & 1).collect());
            }
            t += 1;
            if t == total {
                return None;
            }
            let mut flip = self.kernel[t.trailing_zeros() as usize];
            while flip != 0 {
                let i = flip.trailing_zeros() as usize;
                flip &= flip - 1;
                acc = if v >> i & 1 == 1 {
                    acc.add(self.neg_rows[i])
                } else {
                    acc.add(self.rows[i])
                };
                v ^= 1 << i;
            }
        }
    }
}

/// Modulo-sum source coding with two nested codes sharing the inner
/// generator and the bin generator.
#[derive(Clone, Debug, PartialEq)]
pub struct KmSim {
    pub source: SourcePair,
    /// Inner-code auxiliaries; `Q` must be trivial.
    pub w: AuxPair,
    /// Bin index law, supported on `{0, .., p-1}`.
    pub v_law: Pmf,
    pub sim: SimConfig,
}

/// Inner and bin index lengths placing both rates `margin` bits inside the
/// achievable region at blocklength `n`: half the margin is taken from the
/// decoder's packing condition and half added to the encoders' covering
/// condition. `v_law` must be uniform on `{0, .., p-1}` for the bin rate to
/// equal `l log p / n`.
pub fn km_dimensions(
    src: &SourcePair,
    w: &AuxPair,
    n: usize,
    margin: f64,
) -> Result<(usize, [usize; 2])> {
    let md = src.modulus();
    let z = src.sum_law();
    let mut kappa = f64::INFINITY;
    for s in 0..md.r() {
        let den = w.h_sum_given_proj(s)?;
        let gap = (md.r() - s) as f64 * md.log2_p() - (z.entropy() - z.project(md, s)?.entropy());
        if den > crate::regions::ZERO_TOL {
            kappa = kappa.min(gap / den);
        }
    }
    let h_max = w.h_user(0).max(w.h_user(1));
    if !kappa.is_finite() || h_max <= crate::regions::ZERO_TOL {
        return Err(Error::InvalidSpec(
            "auxiliaries give no inner-code constraint".into(),
        ));
    }
    let ratio = (kappa - margin / (2.0 * h_max)).max(0.0);
    let k = ((n as f64 * ratio).floor() as usize).max(1);
    let mut l = [0usize; 2];
    for (i, li) in l.iter_mut().enumerate() {
        let mut need = 0.0f64;
        for s in 1..=md.r() {
            need = need.max(s as f64 * md.log2_p() - k as f64 / n as f64 * w.h_user_proj(i, s)?);
        }
        *li = ((n as f64 * (need + margin / 2.0) / md.log2_p()).ceil() as usize).max(1);
    }
    Ok((k, l))
}

pub fn simulate_km(cfg: &KmSim) -> Result<SimReport> {
    let sim = &cfg.sim;
    sim.validate()?;
    let md = cfg.source.modulus();
    let m = md.order() as usize;
    let p = md.p();
    if cfg.v_law.len() != m || cfg.v_law.support().any(|a| a as u64 >= p) {
        return Err(Error::InvalidSpec(
            "bin index law must live on {0, .., p-1} within the ring".into(),
        ));
    }
    let wl = trivial_q_laws(&cfg.w, "the inner code")?;
    let n = sim.n;
    let inner: Vec<IndexSetSpec> = wl
        .iter()
        .map(|p| IndexSetSpec::single(p.clone(), sim.k, sim.eps_index()))
        .collect::<Result<_>>()?;
    let inner_members: Vec<Vec<Vec<usize>>> = inner.iter().map(members).collect::<Result<_>>()?;
    let bins: Vec<IndexSetSpec> = sim
        .l
        .iter()
        .map(|&l| IndexSetSpec::single(cfg.v_law.clone(), l, sim.eps))
        .collect::<Result<_>>()?;
    let v_specs: Vec<TypicalSpec> = sim
        .l
        .iter()
        .map(|&l| TypicalSpec::new(cfg.v_law.clone(), l, sim.eps))
        .collect::<Result<_>>()?;
    let dec_law = wl[0].circ_conv(&wl[1])?;
    let dec_index = IndexSetSpec::single(dec_law, sim.k, sim.eps_index())?;
    let dec_members = members(&dec_index)?;
    let l_max = sim.l[0].max(sim.l[1]);
    let z4_fast = md.order() == 4 && n <= 64 && l_max <= 64;
    for (i, members) in inner_members.iter().enumerate() {
        let work = members.len() as f64 * (p as f64).powi(sim.l[i].saturating_sub(n) as i32);
        if work > MAX_SEARCH {
            return Err(Error::guard("encoder candidates", work, MAX_SEARCH));
        }
    }
    let structural_sets = inner_members.iter().any(|s| s.is_empty())
        || bins
            .iter()
            .map(|b| b.size())
            .collect::<Result<Vec<_>>>()?
            .iter()
            .any(|s| s.bits() == 0)
        || dec_members.is_empty();

    let j = cfg.source.joint();
    let x_tests = [
        TypTest::from_joint(j, &["x1"], n, sim.eps)?,
        TypTest::from_joint(j, &["x2"], n, sim.eps)?,
    ];
    let z_test = TypTest::from_joint(j, &["z"], n, sim.eps_dec())?;
    let src_probs = j.marginal(&["x1", "x2"])?.probs().to_vec();

    let rates = RealizedRates {
        inner: [rate_of(&inner[0], n)?, rate_of(&inner[1], n)?],
        bins: [rate_of(&bins[0], n)?, rate_of(&bins[1], n)?],
        decoder_index: rate_of(&dec_index, n)?,
    };

    let outcomes: Vec<(Outcome, bool)> = (0..sim.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(sim.seed, t);
            let mut x = [vec![0u64; n], vec![0u64; n]];
            let [x0, x1] = &mut x;
            for (a, b) in x0.iter_mut().zip(x1.iter_mut()) {
                let c = rng::categorical(&mut rng, &src_probs);
                *a = (c / m) as u64;
                *b = (c % m) as u64;
            }
            let inner_code = GroupCode::sample(&mut rng, md, sim.k, n);
            let bin_code = GroupCode::sample(&mut rng, md, l_max, n);
            let bbar2: Vec<u64> = (0..n).map(|_| rng::below(&mut rng, md.order())).collect();
            let bbar = [bin_code.translation().as_slice().to_vec(), bbar2];
            if structural_sets || !x_tests[0].check(&[&x[0]]) || !x_tests[1].check(&[&x[1]]) {
                return (Outcome::Structural, false);
            }
            let gbars: Vec<RingMatrix> = sim
                .l
                .iter()
                .map(|&l| {
                    let rows: Vec<Vec<u64>> = (0..l)
                        .map(|i| bin_code.generator().row(i).to_vec())
                        .collect();
                    RingMatrix::from_rows(md, &rows).expect("rows of a sampled generator")
                })
                .collect();
            let mut chosen: Vec<(Vec<usize>, Vec<u64>)> = Vec::with_capacity(2);
            for i in 0..2 {
                let solver = ModPSolver::new(&gbars[i], sim.l[i], p);
                let fast = z4_fast.then(|| Z4BinSearch::new(&gbars[i], &solver));
                let mut base = x[i].clone();
                sub_into(md, &mut base, inner_code.translation().as_slice());
                sub_into(md, &mut base, &bbar[i]);
                let order = shuffled(&mut rng, inner_members[i].len());
                let mut found = None;
                let mut wg = vec![0u64; n];
                for &idx in &order {
                    let w = &inner_members[i][idx];
                    let u64s: Vec<u64> = w.iter().map(|&a| a as u64).collect();
                    inner_code.generator().left_mul_into(&u64s, &mut wg);
                    let mut target = base.clone();
                    sub_into(md, &mut target, &wg);
                    let hit = match &fast {
                        Some(z4) => z4.solve(&solver, &v_specs[i], &target),
                        None => solve_bin(md, &gbars[i], &solver, &v_specs[i], &target),
                    };
                    if let Some(v) = hit {
                        found = Some((w.clone(), v));
                        break;
                    }
                }
                match found {
                    Some(f) => chosen.push(f),
                    None => return (if i == 0 { Outcome::E1 } else { Outcome::E2 }, false),
                }
            }
            // cbar_i = v_i Gbar + bbar_i.
            let mut offset = vec![0u64; n];
            for i in 0..2 {
                let mut c = vec![0u64; n];
                gbars[i].left_mul_into(&chosen[i].1, &mut c);
                add_into(md, &mut offset, &c);
                add_into(md, &mut offset, &bbar[i]);
            }
            add_into(md, &mut offset, inner_code.translation().as_slice());
            add_into(md, &mut offset, inner_code.translation().as_slice());
            let wsum: Vec<usize> = chosen[0]
                .0
                .iter()
                .zip(&chosen[1].0)
                .map(|(&a, &b)| (a + b) % m)
                .collect();
            let outside = !dec_index.contains(&wsum).unwrap_or(false);
            let truth: Vec<u64> = x[0]
                .iter()
                .zip(&x[1])
                .map(|(&a, &b)| md.add(a, b))
                .collect();
            let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
            let mut cand = vec![0u64; n];
            for w in &dec_members {
                let u64s: Vec<u64> = w.iter().map(|&a| a as u64).collect();
                inner_code.generator().left_mul_into(&u64s, &mut cand);
                add_into(md, &mut cand, &offset);
                if z_test.check(&[&cand]) {
                    found.insert(cand.clone());
                    if found.len() > 1 {
                        break;
                    }
                }
            }
            let outcome = match found.len() {
                0 => Outcome::NoCandidate,
                1 if found.contains(&truth) => Outcome::Success,
                1 => Outcome::WrongUnique,
                _ => Outcome::Multiple,
            };
            (outcome, outside)
        })
        .collect();
    Ok(tally("km", &outcomes, rates))
}

/// Computation of the sum over a MAC with two nested codes.
#[derive(Clone, Debug, PartialEq)]
pub struct CompMacSim {
    pub mac: Mac,
    pub inputs: [Pmf; 2],
    /// Inner-code auxiliaries `W_i`.
    pub w: AuxPair,
    /// Bin auxiliaries `V_i`.
    pub v: AuxPair,
    pub sim: SimConfig,
}

pub fn simulate_comp_mac(cfg: &CompMacSim) -> Result<SimReport> {
    let sim = &cfg.sim;
    sim.validate()?;
    if sim.l[0] != sim.l[1] {
        return Err(Error::InvalidSpec(
            "both bin codes share one generator; l must agree".into(),
        ));
    }
    let md = cfg.mac.modulus();
    let m = md.order() as usize;
    let n = sim.n;
    let l = sim.l[0];
    let wl = trivial_q_laws(&cfg.w, "the inner code")?;
    let vl = trivial_q_laws(&cfg.v, "the bin code")?;
    let inner: Vec<IndexSetSpec> = wl
        .iter()
        .map(|p| IndexSetSpec::single(p.clone(), sim.k, sim.eps_index()))
        .collect::<Result<_>>()?;
    let bins: Vec<IndexSetSpec> = vl
        .iter()
        .map(|p| IndexSetSpec::single(p.clone(), l, sim.eps))
        .collect::<Result<_>>()?;
    let inner_members: Vec<Vec<Vec<usize>>> = inner.iter().map(members).collect::<Result<_>>()?;
    let bin_members: Vec<Vec<Vec<usize>>> = bins.iter().map(members).collect::<Result<_>>()?;
    let sums = |a: &[Vec<usize>], b: &[Vec<usize>]| -> Result<Vec<Vec<u64>>> {
        let work = a.len() as f64 * b.len() as f64;
        if work > MAX_SEARCH {
            return Err(Error::guard("index sums", work, MAX_SEARCH));
        }
        let set: BTreeSet<Vec<u64>> = a
            .iter()
            .flat_map(|x| {
                b.iter().map(move |y| {
                    x.iter()
                        .zip(y)
                        .map(|(&p, &q)| ((p + q) % m) as u64)
                        .collect()
                })
            })
            .collect();
        Ok(set.into_iter().collect())
    };
    let sw = sums(&inner_members[0], &inner_members[1])?;
    let sv = sums(&bin_members[0], &bin_members[1])?;
    let work = sw.len() as f64 * sv.len() as f64;
    if work > MAX_SEARCH {
        return Err(Error::guard("decoder candidates", work, MAX_SEARCH));
    }
    let structural_sets = inner_members
        .iter()
        .chain(&bin_members)
        .any(|s| s.is_empty());

    let joint = cfg.mac.joint(&cfg.inputs[0], &cfg.inputs[1])?;
    let x_tests = [
        TypTest::from_joint(&joint, &["x1"], n, sim.eps)?,
        TypTest::from_joint(&joint, &["x2"], n, sim.eps)?,
    ];
    let zy_test = TypTest::from_joint(&joint, &["z", "y"], n, sim.eps_dec())?;
    let channel = cfg.mac.channel();

    let dec_index = IndexSetSpec::single(wl[0].circ_conv(&wl[1])?, sim.k, sim.eps_index())?;
    let rates = RealizedRates {
        inner: [rate_of(&inner[0], n)?, rate_of(&inner[1], n)?],
        bins: [rate_of(&bins[0], n)?, rate_of(&bins[1], n)?],
        decoder_index: rate_of(&dec_index, n)?,
    };

    let outcomes: Vec<(Outcome, bool)> = (0..sim.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(sim.seed, t);
            let inner_code = GroupCode::sample(&mut rng, md, sim.k, n);
            let bin_code = GroupCode::sample(&mut rng, md, l, n);
            let bbar2: Vec<u64> = (0..n).map(|_| rng::below(&mut rng, md.order())).collect();
            let bbar = [bin_code.translation().as_slice().to_vec(), bbar2];
            if structural_sets {
                return (Outcome::Structural, false);
            }
            let mut xs: Vec<Vec<u64>> = Vec::with_capacity(2);
            for i in 0..2 {
                let msg =
                    &bin_members[i][rng::below(&mut rng, bin_members[i].len() as u64) as usize];
                let u64s: Vec<u64> = msg.iter().map(|&a| a as u64).collect();
                let mut c = vec![0u64; n];
                bin_code.generator().left_mul_into(&u64s, &mut c);
                add_into(md, &mut c, &bbar[i]);
                add_into(md, &mut c, inner_code.translation().as_slice());
                let order = shuffled(&mut rng, inner_members[i].len());
                let mut x = vec![0u64; n];
                let mut found = false;
                for &idx in &order {
                    let u64s: Vec<u64> = inner_members[i][idx].iter().map(|&a| a as u64).collect();
                    inner_code.generator().left_mul_into(&u64s, &mut x);
                    add_into(md, &mut x, &c);
                    if x_tests[i].check(&[&x]) {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return (if i == 0 { Outcome::E1 } else { Outcome::E2 }, false);
                }
                xs.push(x);
            }
            let y: Vec<u64> = (0..n)
                .map(|s| {
                    let row = channel.row(&[xs[0][s] as usize, xs[1][s] as usize]);
                    rng::categorical(&mut rng, row.probs()) as u64
                })
                .collect();
            let truth: Vec<u64> = xs[0]
                .iter()
                .zip(&xs[1])
                .map(|(&a, &b)| md.add(a, b))
                .collect();
            if !zy_test.check(&[&truth, &y]) {
                return (Outcome::Ec, false);
            }
            let mut offset = bbar[0].clone();
            add_into(md, &mut offset, &bbar[1]);
            add_into(md, &mut offset, inner_code.translation().as_slice());
            add_into(md, &mut offset, inner_code.translation().as_slice());
            let mut found: BTreeSet<Vec<u64>> = BTreeSet::new();
            let mut vpart = vec![0u64; n];
            let mut cand = vec![0u64; n];
            'outer: for v in &sv {
                bin_code.generator().left_mul_into(v, &mut vpart);
                add_into(md, &mut vpart, &offset);
                for w in &sw {
                    inner_code.generator().left_mul_into(w, &mut cand);
                    add_into(md, &mut cand, &vpart);
                    if zy_test.check(&[&cand, &y]) {
                        found.insert(cand.clone());
                        if found.len() > 1 {
                            break 'outer;
                        }
                    }
                }
            }
            let outcome = match found.len() {
                0 => Outcome::NoCandidate,
                1 if found.contains(&truth) => Outcome::Success,
                1 => Outcome::WrongUnique,
                _ => Outcome::Multiple,
            };
            (outcome, false)
        })
        .collect();
    Ok(tally("comp-mac", &outcomes, rates))
}

/// Result of a covering or packing probe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub failures: Proportion,
    /// `k H(U|Q) / n`.
    pub code_rate: f64,
    /// Rate threshold from the corresponding lemma, without the `eta` term.
    pub bound: f64,
    /// Signed distance to the threshold; positive means the bound holds.
    pub margin: f64,
    pub bound_holds: bool,
}

fn index_proj_entropy(md: Modulus, index: &IndexSetSpec, s: u32) -> Result<f64> {
    let mut h = 0.0;
    for (&(num, den), law) in index.weights().iter().zip(index.laws()) {
        h += num as f64 / den as f64 * law.project(md, s)?.entropy();
    }
    Ok(h)
}

/// Fraction of (codebook, source) draws for which no codeword of a random
/// QGC is jointly typical with `X^n` under `joint` (axes `x`, `xhat`).
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringConfig {
    pub modulus: Modulus,
    pub joint: JointPmf,
    pub index: IndexSetSpec,
    pub n: usize,
    pub eps: f64,
    pub trials: u64,
    pub seed: u64,
}

pub fn empirical_covering(cfg: &CoveringConfig) -> Result<ProbeReport> {
    let md = cfg.modulus;
    let m = md.order() as usize;
    if cfg.joint.size_of("xhat")? != m || cfg.index.alphabet() != m {
        return Err(Error::InvalidSpec(
            "xhat and the index set must live on the ring".into(),
        ));
    }
    if cfg.n == 0 || cfg.trials == 0 {
        return Err(Error::InvalidSpec("n and trials must be positive".into()));
    }
    let h_u = cfg.index.cond_entropy();
    let code_rate = cfg.index.k() as f64 / cfg.n as f64 * h_u;
    let mut bound = f64::NEG_INFINITY;
    for s in 1..=md.r() {
        let q = md.p_pow(s)? as usize;
        let js = cfg.joint.with_derived("xs", &["xhat"], q, |a| a[0] % q)?;
        let gap = s as f64 * md.log2_p() - js.cond_entropy(&["xs"], &["x"])?;
        bound = bound.max(crate::regions::scaled(
            h_u,
            index_proj_entropy(md, &cfg.index, s)?,
            gap,
        ));
    }
    let margin = code_rate - bound;
    let list = members(&cfg.index)?;
    let test = TypTest::from_joint(&cfg.joint, &["x", "xhat"], cfg.n, cfg.eps)?;
    let px = cfg.joint.pmf_of("x")?;
    let n = cfg.n;
    let fails: u64 = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(cfg.seed, t);
            let x: Vec<u64> = (0..n)
                .map(|_| rng::categorical(&mut rng, px.probs()) as u64)
                .collect();
            let code = GroupCode::sample(&mut rng, md, cfg.index.k(), n);
            let mut c = vec![0u64; n];
            let covered = list.iter().any(|u| {
                code.apply_into(u, &mut c);
                test.check(&[&x, &c])
            });
            u64::from(!covered)
        })
        .sum();
    Ok(ProbeReport {
        failures: wilson(fails, cfg.trials),
        code_rate,
        bound,
        margin,
        bound_holds: margin > 0.0,
    })
}

/// Fraction of draws in which some codeword other than the transmitted one
/// is jointly typical with the channel output.
#[derive(Clone, Debug, PartialEq)]
pub struct PackingConfig {
    pub modulus: Modulus,
    /// Law of `X` used for the typicality test.
    pub input: Pmf,
    /// `P(y | x)`, applied to every codeword letter.
    pub channel: CondPmf,
    pub index: IndexSetSpec,
    pub n: usize,
    pub eps: f64,
    pub trials: u64,
    pub seed: u64,
}

pub fn empirical_packing(cfg: &PackingConfig) -> Result<ProbeReport> {
    let md = cfg.modulus;
    let m = md.order() as usize;
    if cfg.input.len() != m || cfg.index.alphabet() != m || cfg.channel.given() != [m] {
        return Err(Error::InvalidSpec(
            "input, index set and channel must live on the ring".into(),
        ));
    }
    if cfg.n == 0 || cfg.trials == 0 {
        return Err(Error::InvalidSpec("n and trials must be positive".into()));
    }
    let joint = JointPmf::from_pmf("x", &cfg.input).with_kernel("y", &["x"], &cfg.channel)?;
    let h_u = cfg.index.cond_entropy();
    let code_rate = cfg.index.k() as f64 / cfg.n as f64 * h_u;
    let mut bound = f64::INFINITY;
    for s in 0..md.r() {
        let q = md.p_pow(s)? as usize;
        let js = joint.with_derived("xs", &["x"], q, |a| a[0] % q)?;
        let gap = (md.r() - s) as f64 * md.log2_p() - js.cond_entropy(&["x"], &["y", "xs"])?;
        let h_cond = h_u - index_proj_entropy(md, &cfg.index, s)?;
        let term = crate::regions::scaled(h_u, h_cond, gap);
        bound = bound.min(term);
    }
    let margin = bound - code_rate;
    let list = members(&cfg.index)?;
    let test = TypTest::from_joint(&joint, &["x", "y"], cfg.n, cfg.eps)?;
    let n = cfg.n;
    let fails: u64 = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::stream(cfg.seed, t);
            let code = GroupCode::sample(&mut rng, md, cfg.index.k(), n);
            if list.is_empty() {
                return 0;
            }
            let sent = code.apply(&list[rng::below(&mut rng, list.len() as u64) as usize]);
            let y: Vec<u64> = sent
                .iter()
                .map(|&x| rng::categorical(&mut rng, cfg.channel.row(&[x as usize]).probs()) as u64)
                .collect();
            let mut c = vec![0u64; n];
            let confused = list.iter().any(|u| {
                code.apply_into(u, &mut c);
                c != sent && test.check(&[&c, &y])
            });
            u64::from(confused)
        })
        .sum();
    Ok(ProbeReport {
        failures: wilson(fails, cfg.trials),
        code_rate,
        bound,
        margin,
        bound_holds: margin > 0.0,
    })
}

#[cfg(test)]
mod tests;
