//! Achievable-rate evaluators.
//!
//! Every evaluator takes explicit distributions and returns a [`RateResult`]
//! carrying the rates together with a trace of the per-level terms that
//! produced them. Ratios whose denominator vanishes are treated as `+inf`;
//! such terms drop out of minimizations, dominate maximizations, and are
//! flagged in the trace.

mod gp;
mod optimize;
pub mod presets;

pub use gp::{gp_example_outer_check, GpOuterCheck};
pub(crate) use optimize::compositions;
pub use optimize::{optimize, GridSpec, OptResult, Sense};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::{CondPmf, JointPmf, Pmf};
use crate::zring::Modulus;

/// Entropies and gaps at or below this are treated as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// How a rate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    /// Every candidate term had a vanishing denominator.
    Degenerate,
    /// A negative bound was raised to zero.
    Clamped,
    /// An unbounded penalty term made the bound `-inf`.
    InfeasibleAux,
}

/// One evaluated term of a rate formula.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub label: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateResult {
    /// Per-user rates, or a single sum-rate.
    pub rates: Vec<f64>,
    pub status: Status,
    pub trace: Vec<Term>,
}

impl RateResult {
    pub fn sum(&self) -> f64 {
        self.rates.iter().sum()
    }
}

#[derive(Default)]
struct Tracer {
    terms: Vec<Term>,
}

impl Tracer {
    fn push(&mut self, label: String, value: f64) {
        self.terms.push(Term {
            label,
            value,
            note: None,
        });
    }

    fn flag(&mut self, label: String, value: f64, note: &str) {
        self.terms.push(Term {
            label,
            value,
            note: Some(note.to_string()),
        });
    }
}

/// `num / den * gap`, with a vanishing gap giving 0 and otherwise a
/// vanishing denominator giving `+inf`.
pub fn scaled(num: f64, den: f64, gap: f64) -> f64 {
    if gap <= ZERO_TOL {
        0.0
    } else if den <= ZERO_TOL {
        f64::INFINITY
    } else {
        num / den * gap
    }
}

fn check_ring_pmf(modulus: Modulus, p: &Pmf, what: &str) -> Result<()> {
    if p.len() as u64 != modulus.order() {
        return Err(Error::InvalidSpec(format!(
            "{what} has {} letters, expected {}",
            p.len(),
            modulus.order()
        )));
    }
    Ok(())
}

/// A pair of auxiliaries `U_1 - Q - U_2` over Z_{p^r}, one law per value of
/// `Q` for each user.
#[derive(Clone, Debug, PartialEq)]
pub struct AuxPair {
    modulus: Modulus,
    q: Pmf,
    laws: [Vec<Pmf>; 2],
}

impl AuxPair {
    pub fn new(modulus: Modulus, q: Pmf, u1: Vec<Pmf>, u2: Vec<Pmf>) -> Result<Self> {
        for (i, rows) in [&u1, &u2].into_iter().enumerate() {
            if rows.len() != q.len() {
                return Err(Error::InvalidSpec(format!(
                    "user {} has {} laws for |Q| = {}",
                    i + 1,
                    rows.len(),
                    q.len()
                )));
            }
            for p in rows {
                check_ring_pmf(modulus, p, "auxiliary law")?;
            }
        }
        Ok(AuxPair {
            modulus,
            q,
            laws: [u1, u2],
        })
    }

    /// Trivial `Q`, both users with the same law.
    pub fn symmetric(modulus: Modulus, law: Pmf) -> Result<Self> {
        AuxPair::new(modulus, Pmf::point(1, 0), vec![law.clone()], vec![law])
    }

    pub fn uniform(modulus: Modulus) -> Self {
        AuxPair::symmetric(modulus, Pmf::uniform(modulus.order() as usize))
            .expect("uniform law lives on the ring")
    }

    pub fn q(&self) -> &Pmf {
        &self.q
    }

    pub fn laws(&self, user: usize) -> &[Pmf] {
        &self.laws[user]
    }

    fn avg(&self, f: impl Fn(usize) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (q, &w) in self.q.probs().iter().enumerate() {
            if w > 0.0 {
                acc += w * f(q)?;
            }
        }
        Ok(acc)
    }

    fn sum_law(&self, q: usize) -> Pmf {
        self.laws[0][q]
            .circ_conv(&self.laws[1][q])
            .expect("laws share the ring")
    }

    /// `H(U_i | Q)`.
    pub fn h_user(&self, user: usize) -> f64 {
        self.avg(|q| Ok(self.laws[user][q].entropy())).unwrap()
    }

    /// `H(U_1 + U_2 | Q)`.
    pub fn h_sum(&self) -> f64 {
        self.avg(|q| Ok(self.sum_law(q).entropy())).unwrap()
    }

    /// `H([U_i]_t | Q)`.
    pub fn h_user_proj(&self, user: usize, t: u32) -> Result<f64> {
        self.avg(|q| Ok(self.laws[user][q].project(self.modulus, t)?.entropy()))
    }

    /// `H(U_i | [U_i]_s, Q)`.
    pub fn h_user_given_proj(&self, user: usize, s: u32) -> Result<f64> {
        self.avg(|q| {
            let p = &self.laws[user][q];
            Ok(p.entropy() - p.project(self.modulus, s)?.entropy())
        })
    }

    /// `H(U_1 + U_2 | [U_1 + U_2]_s, Q)`.
    pub fn h_sum_given_proj(&self, s: u32) -> Result<f64> {
        self.avg(|q| {
            let p = self.sum_law(q);
            Ok(p.entropy() - p.project(self.modulus, s)?.entropy())
        })
    }
}

/// A pair of sources over Z_{p^r} x Z_{p^r}.
#[derive(Clone, Debug, PartialEq)]
pub struct SourcePair {
    modulus: Modulus,
    joint: JointPmf,
}

impl SourcePair {
    /// `joint` must have axes `x1` and `x2`, each over the ring.
    pub fn new(modulus: Modulus, joint: JointPmf) -> Result<Self> {
        let m = modulus.order() as usize;
        for axis in ["x1", "x2"] {
            if joint.size_of(axis)? != m {
                return Err(Error::InvalidSpec(format!(
                    "axis `{axis}` is not over Z_{m}"
                )));
            }
        }
        let joint = joint.marginal(&["x1", "x2"])?;
        let joint = joint.with_derived("z", &["x1", "x2"], m, |a| (a[0] + a[1]) % m)?;
        Ok(SourcePair { modulus, joint })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }

    /// Law of `Z = X_1 + X_2`.
    pub fn sum_law(&self) -> Pmf {
        self.joint.pmf_of("z").expect("z axis exists")
    }
}

/// `R_i >= log p^r - min_s [H(W_i|Q) / H(W|[W]_s,Q)] (log p^{r-s} - H(Z|[Z]_s))`
/// for `W = W_1 + W_2`, `Z = X_1 + X_2`. Returns the two minimal rates.
pub fn km_qgc_rate(src: &SourcePair, aux: &AuxPair) -> Result<RateResult> {
    let md = src.modulus;
    if aux.modulus != md {
        return Err(Error::ModulusMismatch {
            left: md.order(),
            right: aux.modulus.order(),
        });
    }
    let z = src.sum_law();
    let mut tr = Tracer::default();
    let mut rates = Vec::new();
    let mut degenerate = false;
    for user in 0..2 {
        let num = aux.h_user(user);
        let mut best = f64::INFINITY;
        for s in 0..md.r() {
            let den = aux.h_sum_given_proj(s)?;
            let gap =
                (md.r() - s) as f64 * md.log2_p() - (z.entropy() - z.project(md, s)?.entropy());
            let term = scaled(num, den, gap);
            let label = format!("R{} s={s}: ratio*gap", user + 1);
            if term.is_infinite() {
                tr.flag(label, term, "zero denominator; level dropped");
            } else {
                tr.push(label, term);
                best = best.min(term);
            }
        }
        if best.is_infinite() {
            degenerate = true;
            best = 0.0;
        }
        rates.push(md.log2_order() - best);
    }
    Ok(RateResult {
        rates,
        status: if degenerate {
            Status::Degenerate
        } else {
            Status::Ok
        },
        trace: tr.terms,
    })
}

/// Searches symmetric auxiliary laws with trivial `Q` for the smallest
/// sum-rate of [`km_qgc_rate`].
pub fn optimize_km_aux(
    src: &SourcePair,
    grid: &GridSpec,
) -> Result<(AuxPair, RateResult, OptResult)> {
    let md = src.modulus;
    let m = md.order() as usize;
    let opt = optimize(&[m], grid, Sense::Minimize, |p| {
        AuxPair::symmetric(md, p[0].clone())
            .and_then(|aux| km_qgc_rate(src, &aux))
            .map_or(f64::INFINITY, |r| r.sum())
    })?;
    let aux = AuxPair::symmetric(md, opt.point[0].clone())?;
    let rate = km_qgc_rate(src, &aux)?;
    Ok((aux, rate, opt))
}

fn next_prime_at_least(n: u64) -> u64 {
    (n.max(2)..)
        .find(|&c| (2..).take_while(|d| d * d <= c).all(|d| c % d != 0))
        .expect("primes are unbounded")
}

/// Sum-rates of the reference schemes for the modulo-sum source problem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KmBaselines {
    pub unstructured: f64,
    pub linear: f64,
    pub group: f64,
    /// Field used for the linear scheme.
    pub field: u64,
}

pub fn km_baselines(src: &SourcePair) -> Result<KmBaselines> {
    let md = src.modulus;
    let j = &src.joint;
    let unstructured = j.entropy(&["x1", "x2"])?;
    let field = next_prime_at_least(2 * md.order() - 1);
    let jq = j.with_derived("zq", &["x1", "x2"], field as usize, |a| a[0] + a[1])?;
    let linear = 2.0 * jq.entropy(&["zq"])?;
    let z = src.sum_law();
    let mut group = 0.0f64;
    for s in 0..md.r() {
        let h = z.entropy() - z.project(md, s)?.entropy();
        group = group.max(md.r() as f64 / (md.r() - s) as f64 * h);
    }
    Ok(KmBaselines {
        unstructured,
        linear,
        group: 2.0 * group,
        field,
    })
}

/// A two-user channel with inputs over Z_{p^r}.
#[derive(Clone, Debug, PartialEq)]
pub struct Mac {
    modulus: Modulus,
    channel: CondPmf,
}

impl Mac {
    pub fn new(modulus: Modulus, channel: CondPmf) -> Result<Self> {
        let m = modulus.order() as usize;
        if channel.given() != [m, m] {
            return Err(Error::InvalidSpec(format!(
                "channel conditions on {:?}, expected [{m}, {m}]",
                channel.given()
            )));
        }
        Ok(Mac { modulus, channel })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn channel(&self) -> &CondPmf {
        &self.channel
    }

    /// Joint law of `(x1, x2, y, z)` for independent inputs, `z = x1 + x2`.
    pub fn joint(&self, px1: &Pmf, px2: &Pmf) -> Result<JointPmf> {
        check_ring_pmf(self.modulus, px1, "input law")?;
        check_ring_pmf(self.modulus, px2, "input law")?;
        let m = self.modulus.order() as usize;
        JointPmf::independent(&[("x1", px1), ("x2", px2)])?
            .with_kernel("y", &["x1", "x2"], &self.channel)?
            .with_derived("z", &["x1", "x2"], m, |a| (a[0] + a[1]) % m)
    }

    fn uniform_joint(&self) -> Result<JointPmf> {
        let u = Pmf::uniform(self.modulus.order() as usize);
        self.joint(&u, &u)
    }
}

/// `I(Z; Y | [Z]_s)` for each `s` in `0..r`, under the given joint with axes
/// `z` and `y`.
fn sum_info_by_level(md: Modulus, j: &JointPmf) -> Result<Vec<f64>> {
    (0..md.r())
        .map(|s| {
            let q = md.p_pow(s)? as usize;
            let js = j.with_derived("zs", &["z"], q, |a| a[0] % q)?;
            js.cond_mutual_info(&["z"], &["y"], &["zs"])
        })
        .collect()
}

/// Symmetric rates of the reference schemes for computing the sum over a MAC.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MacBaselines {
    pub unstructured: f64,
    pub linear: f64,
    pub group: f64,
    pub field: u64,
    /// Input laws attaining the linear-scheme value.
    pub linear_inputs: [Vec<f64>; 2],
    pub linear_grid_step: f64,
}

/// Linear-scheme objective `min(H(X_1), H(X_2)) - H(X_1 (+)_q X_2 | Y)`.
pub fn mac_linear_objective(mac: &Mac, px1: &Pmf, px2: &Pmf, field: u64) -> Result<f64> {
    check_ring_pmf(mac.modulus, px1, "input law")?;
    check_ring_pmf(mac.modulus, px2, "input law")?;
    let m = mac.modulus.order() as usize;
    if (field as usize) < 2 * m - 1 {
        return Err(Error::InvalidSpec(format!(
            "field {field} cannot hold sums below {}",
            2 * m - 1
        )));
    }
    let ny = mac.channel.target_len();
    // Integer sums never wrap in the field, so tracking x1 + x2 suffices.
    let mut joint = vec![0.0; (2 * m - 1) * ny];
    for a in 0..m {
        for b in 0..m {
            let w = px1.get(a) * px2.get(b);
            if w == 0.0 {
                continue;
            }
            let row = mac.channel.row(&[a, b]).probs();
            let base = (a + b) * ny;
            for (slot, &py) in joint[base..base + ny].iter_mut().zip(row) {
                *slot += w * py;
            }
        }
    }
    let plogp = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    let h_joint: f64 = joint.iter().map(|&x| plogp(x)).sum();
    let h_y: f64 = (0..ny)
        .map(|y| plogp((0..2 * m - 1).map(|z| joint[z * ny + y]).sum()))
        .sum();
    Ok(px1.entropy().min(px2.entropy()) - (h_joint - h_y))
}

pub fn comp_mac_baselines(mac: &Mac, grid: &GridSpec) -> Result<MacBaselines> {
    let md = mac.modulus;
    let j = mac.uniform_joint()?;
    let unstructured = j.mutual_info(&["x1", "x2"], &["y"])? / 2.0;
    let info = sum_info_by_level(md, &j)?;
    let group = info
        .iter()
        .enumerate()
        .map(|(s, &i)| md.r() as f64 / (md.r() - s as u32) as f64 * i)
        .fold(f64::INFINITY, f64::min);
    let field = next_prime_at_least(2 * md.order() - 1);
    let m = md.order() as usize;
    let opt = optimize(&[m, m], grid, Sense::Maximize, |p| {
        mac_linear_objective(mac, &p[0], &p[1], field).unwrap_or(f64::NEG_INFINITY)
    })?;
    Ok(MacBaselines {
        unstructured,
        linear: opt.value,
        group,
        field,
        linear_inputs: [opt.point[0].probs().to_vec(), opt.point[1].probs().to_vec()],
        linear_grid_step: opt.final_step,
    })
}

/// Maximal rates for computing the sum over a MAC with nested codes:
///
/// `R_i <= min_s [H(V_i|Q)/H(V|[V]_s,Q)] (log p^{r-s} - H(X|Y,[X]_s) - B_s)`
///
/// with `B_s = max_{t,j} [H(W|Q,[W]_s)/H([W_j]_t|Q)] (log p^t - H([X_j]_t))`,
/// `V = V_1 + V_2`, `W = W_1 + W_2`, `X = X_1 + X_2`, and `s` ranging over
/// `0..r`. A negative bracket is raised to zero and flagged.
pub fn comp_mac_qgc_rate(
    mac: &Mac,
    px1: &Pmf,
    px2: &Pmf,
    v: &AuxPair,
    w: &AuxPair,
) -> Result<RateResult> {
    let md = mac.modulus;
    if v.q != w.q {
        return Err(Error::InvalidSpec(
            "V and W auxiliaries must share Q".into(),
        ));
    }
    let j = mac.joint(px1, px2)?;
    let logp = md.log2_p();
    let mut tr = Tracer::default();
    let mut clamped = false;

    let mut inner = Vec::new();
    for s in 0..md.r() {
        let q = md.p_pow(s)? as usize;
        let js = j.with_derived("zs", &["z"], q, |a| a[0] % q)?;
        let a_s = (md.r() - s) as f64 * logp - js.cond_entropy(&["z"], &["y", "zs"])?;
        let num = w.h_sum_given_proj(s)?;
        let mut b_s = 0.0f64;
        for t in 1..=md.r() {
            for (user, px) in [px1, px2].into_iter().enumerate() {
                let gap = t as f64 * logp - px.project(md, t)?.entropy();
                let term = scaled(num, w.h_user_proj(user, t)?, gap);
                let label = format!("s={s} t={t} j={}: penalty", user + 1);
                if term.is_infinite() {
                    tr.flag(label, term, "zero denominator; penalty unbounded");
                } else {
                    tr.push(label, term);
                }
                b_s = b_s.max(term);
            }
        }
        let mut bracket = a_s - b_s;
        tr.push(format!("s={s}: log p^(r-s) - H(X|Y,[X]_s)"), a_s);
        if bracket < 0.0 {
            tr.flag(
                format!("s={s}: bracket"),
                bracket,
                "negative; raised to zero",
            );
            bracket = 0.0;
            clamped = true;
        }
        inner.push(bracket);
    }
    let (rates, degenerate) = min_ratio_rates(v, &inner, &mut tr)?;
    Ok(RateResult {
        rates,
        status: if degenerate {
            Status::Degenerate
        } else if clamped {
            Status::Clamped
        } else {
            Status::Ok
        },
        trace: tr.terms,
    })
}

/// `R_i = min_s [H(V_i|Q)/H(V|[V]_s,Q)] gap_s`, zero when every level drops.
fn min_ratio_rates(v: &AuxPair, gaps: &[f64], tr: &mut Tracer) -> Result<(Vec<f64>, bool)> {
    let mut rates = Vec::new();
    let mut degenerate = false;
    for user in 0..2 {
        let num = v.h_user(user);
        let mut best = f64::INFINITY;
        for (s, &gap) in gaps.iter().enumerate() {
            let term = scaled(num, v.h_sum_given_proj(s as u32)?, gap);
            let label = format!("R{} s={s}: ratio*bracket", user + 1);
            if term.is_infinite() {
                tr.flag(label, term, "zero denominator; level dropped");
            } else {
                tr.push(label, term);
                best = best.min(term);
            }
        }
        if best.is_infinite() {
            degenerate = true;
            best = 0.0;
        }
        rates.push(best);
    }
    Ok((rates, degenerate))
}

/// The uniform-input special case,
/// `R_i <= min_s [H(V_i|Q)/H(V|[V]_s,Q)] I(X_1+X_2; Y | [X_1+X_2]_s)`.
pub fn comp_mac_corollary_rate(mac: &Mac, v: &AuxPair) -> Result<RateResult> {
    let md = mac.modulus;
    let info = sum_info_by_level(md, &mac.uniform_joint()?)?;
    let mut tr = Tracer::default();
    for (s, &i) in info.iter().enumerate() {
        tr.push(format!("I(Z;Y|[Z]_{s})"), i);
    }
    let (rates, degenerate) = min_ratio_rates(v, &info, &mut tr)?;
    Ok(RateResult {
        rates,
        status: if degenerate {
            Status::Degenerate
        } else {
            Status::Ok
        },
        trace: tr.terms,
    })
}

/// A two-user MAC with independent states known at the encoders, together
/// with auxiliary laws in the factorized form
/// `P_{S1} P_{S2} P_Q P_{Y|X1X2S1S2} prod_i P_{V_i|Q} P_{Z_i|Q S_i} P_{X_i|Q Z_i S_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MacStates {
    pub modulus: Modulus,
    pub states: [Pmf; 2],
    /// `P(y | x1, x2, s1, s2)`.
    pub channel: CondPmf,
    /// `costs[i][x][s]`.
    pub costs: [Vec<Vec<f64>>; 2],
    pub caps: [f64; 2],
    pub v: AuxPair,
    /// `z_laws[i][q][s]` is `P_{Z_i | Q=q, S_i=s}`.
    pub z_laws: [Vec<Vec<Pmf>>; 2],
    /// `x_laws[i][q][z][s]` is `P_{X_i | Q=q, Z_i=z, S_i=s}`.
    pub x_laws: [Vec<Vec<Vec<Pmf>>>; 2],
}

impl MacStates {
    #[allow(clippy::needless_range_loop)]
    fn validate(&self) -> Result<(usize, [usize; 2])> {
        let md = self.modulus;
        let nq = self.v.q.len();
        let m = md.order() as usize;
        let mut xs = [0usize; 2];
        for i in 0..2 {
            let ns = self.states[i].len();
            let zl = &self.z_laws[i];
            if zl.len() != nq || zl.iter().any(|row| row.len() != ns) {
                return Err(Error::InvalidSpec(format!(
                    "z laws of user {} have the wrong shape",
                    i + 1
                )));
            }
            for row in zl.iter().flatten() {
                check_ring_pmf(md, row, "z law")?;
            }
            let xl = &self.x_laws[i];
            if xl.len() != nq
                || xl
                    .iter()
                    .any(|q| q.len() != m || q.iter().any(|z| z.len() != ns))
            {
                return Err(Error::InvalidSpec(format!(
                    "x laws of user {} have the wrong shape",
                    i + 1
                )));
            }
            xs[i] = xl[0][0][0].len();
            if xl.iter().flatten().flatten().any(|p| p.len() != xs[i]) {
                return Err(Error::InvalidSpec(format!(
                    "x laws of user {} differ in alphabet",
                    i + 1
                )));
            }
            let c = &self.costs[i];
            if c.len() != xs[i] || c.iter().any(|row| row.len() != ns) {
                return Err(Error::InvalidSpec(format!(
                    "cost table of user {} has the wrong shape",
                    i + 1
                )));
            }
        }
        let expect = vec![xs[0], xs[1], self.states[0].len(), self.states[1].len()];
        if self.channel.given() != expect.as_slice() {
            return Err(Error::InvalidSpec(format!(
                "channel conditions on {:?}, expected {:?}",
                self.channel.given(),
                expect
            )));
        }
        Ok((nq, xs))
    }

    /// Joint law over `q, s1, z1, x1, s2, z2, x2, y` plus the derived sum `zsum`.
    pub fn joint(&self) -> Result<JointPmf> {
        let (nq, _) = self.validate()?;
        let m = self.modulus.order() as usize;
        let mut j = JointPmf::from_pmf("q", &self.v.q);
        for i in 0..2 {
            let ns = self.states[i].len();
            let (s, z, x) = (
                format!("s{}", i + 1),
                format!("z{}", i + 1),
                format!("x{}", i + 1),
            );
            j = j.with_kernel(
                &s,
                &["q"],
                &CondPmf::new(vec![nq], vec![self.states[i].clone(); nq])?,
            )?;
            let zrows: Vec<Pmf> = self.z_laws[i].iter().flatten().cloned().collect();
            j = j.with_kernel(&z, &["q", &s], &CondPmf::new(vec![nq, ns], zrows)?)?;
            let xrows: Vec<Pmf> = self.x_laws[i].iter().flatten().flatten().cloned().collect();
            j = j.with_kernel(&x, &["q", &z, &s], &CondPmf::new(vec![nq, m, ns], xrows)?)?;
        }
        j.with_kernel("y", &["x1", "x2", "s1", "s2"], &self.channel)?
            .with_derived("zsum", &["z1", "z2"], m, |a| (a[0] + a[1]) % m)
    }

    /// `E[c_i(X_i, S_i)]` for both users.
    pub fn expected_costs(&self, joint: &JointPmf) -> Result<[f64; 2]> {
        let mut out = [0.0; 2];
        for (i, o) in out.iter_mut().enumerate() {
            let (x, s) = (format!("x{}", i + 1), format!("s{}", i + 1));
            let marg = joint.marginal(&[&x, &s])?;
            let ns = self.states[i].len();
            *o = marg
                .probs()
                .iter()
                .enumerate()
                .map(|(k, &p)| p * self.costs[i][k / ns][k % ns])
                .sum();
        }
        Ok(out)
    }
}

/// `R_1 + R_2 <= r log p - H(Z_1+Z_2|Y,Q)
///   - max_{i,t} [H(V_1+V_2|Q)/H([V_i]_t|Q)] (log p^t - H([Z_i]_t|Q,S_i))`.
pub fn mac_states_sum_rate(cfg: &MacStates) -> Result<RateResult> {
    let md = cfg.modulus;
    if cfg.v.modulus != md {
        return Err(Error::ModulusMismatch {
            left: md.order(),
            right: cfg.v.modulus.order(),
        });
    }
    let j = cfg.joint()?;
    let costs = cfg.expected_costs(&j)?;
    for (i, (&c, &cap)) in costs.iter().zip(&cfg.caps).enumerate() {
        if c > cap + ZERO_TOL {
            return Err(Error::CostViolation {
                user: i + 1,
                expected: c,
                cap,
            });
        }
    }
    let mut tr = Tracer::default();
    let h_vsum = cfg.v.h_sum();
    let h_zsum_y = j.cond_entropy(&["zsum"], &["y", "q"])?;
    tr.push("H(V1+V2|Q)".into(), h_vsum);
    tr.push("H(Z1+Z2|Y,Q)".into(), h_zsum_y);
    let mut penalty = 0.0f64;
    for i in 0..2 {
        let (z, s) = (format!("z{}", i + 1), format!("s{}", i + 1));
        for t in 1..=md.r() {
            let q = md.p_pow(t)? as usize;
            let jt = j.with_derived("zt", &[&z], q, |a| a[0] % q)?;
            let gap = t as f64 * md.log2_p() - jt.cond_entropy(&["zt"], &["q", &s])?;
            let term = scaled(h_vsum, cfg.v.h_user_proj(i, t)?, gap);
            let label = format!("i={} t={t}: penalty", i + 1);
            if term.is_infinite() {
                tr.flag(label, term, "zero denominator; penalty unbounded");
            } else {
                tr.push(label, term);
            }
            penalty = penalty.max(term);
        }
    }
    let value = md.log2_order() - h_zsum_y - penalty;
    let (value, status) = if value == f64::NEG_INFINITY {
        (value, Status::InfeasibleAux)
    } else if value < 0.0 {
        tr.flag("sum-rate".into(), value, "negative; raised to zero");
        (0.0, Status::Clamped)
    } else {
        (value, Status::Ok)
    };
    Ok(RateResult {
        rates: vec![value],
        status,
        trace: tr.terms,
    })
}
