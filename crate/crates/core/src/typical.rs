//! Letter typicality and typicality-based index sets.
//!
//! A sequence `x` of length `n` is ε-typical for `P` when no letter of zero
//! probability occurs and `|N(a|x)/n - P(a)| <= ε/|X|` for every letter `a`.
//! Counting never materializes sequences: it sums multinomial coefficients
//! over admissible types.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::prob::{JointPmf, Pmf};
use crate::zring::Modulus;

/// Maximum number of types visited by [`TypicalSpec::count`].
pub const MAX_COMPOSITIONS: f64 = 1e7;
/// Maximum number of sequences materialized by any enumeration.
pub const MAX_SEQUENCES: f64 = 1e6;

/// Absorbs rounding in `P(a)` read from decimal text.
const SLACK: f64 = 1e-12;

pub(crate) fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).log2() + shift as f64
}

fn letter_ok(count: usize, n: usize, p: f64, slack: f64) -> bool {
    if p == 0.0 {
        return count == 0;
    }
    (count as f64 / n as f64 - p).abs() <= slack + SLACK
}

/// Admissible count range `[lo, hi]` per letter; `None` if a letter admits
/// no count at all.
fn count_box(probs: &[f64], n: usize, slack: f64) -> Option<Vec<(usize, usize)>> {
    probs
        .iter()
        .map(|&p| {
            let ok: Vec<usize> = (0..=n).filter(|&c| letter_ok(c, n, p, slack)).collect();
            Some((*ok.first()?, *ok.last()?))
        })
        .collect()
}

/// Number of integer vectors in the box summing to `n`, as a float.
fn composition_count(bx: &[(usize, usize)], n: usize) -> f64 {
    let mut ways = vec![0.0f64; n + 1];
    ways[0] = 1.0;
    for &(lo, hi) in bx {
        let mut next = vec![0.0; n + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for c in lo..=hi.min(n - t) {
                next[t + c] += w;
            }
        }
        ways = next;
    }
    ways[n]
}

struct Factorials(Vec<BigUint>);

impl Factorials {
    fn new(n: usize) -> Self {
        let mut f = vec![BigUint::one()];
        for i in 1..=n {
            let next = &f[i - 1] * BigUint::from(i);
            f.push(next);
        }
        Factorials(f)
    }

    fn multinomial(&self, n: usize, parts: &[usize]) -> BigUint {
        let mut den = BigUint::one();
        for &c in parts {
            den *= &self.0[c];
        }
        &self.0[n] / den
    }
}

/// Sum of multinomials `n! / prod N_a!` over all count vectors in the box.
fn typed_count(bx: &[(usize, usize)], n: usize, fact: &Factorials) -> BigUint {
    fn rec(
        bx: &[(usize, usize)],
        i: usize,
        left: usize,
        parts: &mut Vec<usize>,
        n: usize,
        fact: &Factorials,
        acc: &mut BigUint,
    ) {
        if i == bx.len() {
            if left == 0 {
                *acc += fact.multinomial(n, parts);
            }
            return;
        }
        let rest_lo: usize = bx[i + 1..].iter().map(|b| b.0).sum();
        let rest_hi: usize = bx[i + 1..].iter().map(|b| b.1).sum();
        let (lo, hi) = bx[i];
        for c in lo..=hi.min(left) {
            let rem = left - c;
            if rem < rest_lo || rem > rest_hi {
                continue;
            }
            parts.push(c);
            rec(bx, i + 1, rem, parts, n, fact, acc);
            parts.pop();
        }
    }
    let mut acc = BigUint::zero();
    rec(bx, 0, n, &mut Vec::new(), n, fact, &mut acc);
    acc
}

/// Lexicographic enumeration of sequences whose positions are split into
/// groups, each group's letter counts constrained to its own box.
fn enumerate_grouped(
    groups: &[usize],
    boxes: &[Vec<(usize, usize)>],
    alphabet: usize,
) -> Vec<Vec<usize>> {
    let n = groups.len();
    let mut remaining = vec![0usize; boxes.len()];
    for &g in groups {
        remaining[g] += 1;
    }
    let mut counts = vec![vec![0usize; alphabet]; boxes.len()];
    let mut seq = Vec::with_capacity(n);
    let mut out = Vec::new();

    fn feasible(cnt: &[usize], bx: &[(usize, usize)], rem: usize) -> bool {
        let need: usize = cnt
            .iter()
            .zip(bx)
            .map(|(&c, &(lo, _))| lo.saturating_sub(c))
            .sum();
        let room: usize = cnt
            .iter()
            .zip(bx)
            .map(|(&c, &(_, hi))| hi.saturating_sub(c))
            .sum();
        cnt.iter().zip(bx).all(|(&c, &(_, hi))| c <= hi) && need <= rem && rem <= room
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        groups: &[usize],
        boxes: &[Vec<(usize, usize)>],
        alphabet: usize,
        remaining: &mut [usize],
        counts: &mut [Vec<usize>],
        seq: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == groups.len() {
            out.push(seq.clone());
            return;
        }
        let g = groups[i];
        remaining[g] -= 1;
        for a in 0..alphabet {
            counts[g][a] += 1;
            if feasible(&counts[g], &boxes[g], remaining[g]) {
                seq.push(a);
                rec(i + 1, groups, boxes, alphabet, remaining, counts, seq, out);
                seq.pop();
            }
            counts[g][a] -= 1;
        }
        remaining[g] += 1;
    }

    for (g, bx) in boxes.iter().enumerate() {
        if remaining[g] > 0 && !feasible(&counts[g], bx, remaining[g]) {
            return out;
        }
    }
    rec(
        0,
        groups,
        boxes,
        alphabet,
        &mut remaining,
        &mut counts,
        &mut seq,
        &mut out,
    );
    out
}

/// Typicality parameters: a law, a blocklength and a slack.
#[derive(Clone, Debug, PartialEq)]
pub struct TypicalSpec {
    pmf: Pmf,
    n: usize,
    eps: f64,
}

impl TypicalSpec {
    pub fn new(pmf: Pmf, n: usize, eps: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("blocklength must be >= 1".into()));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "typicality slack {eps} is invalid"
            )));
        }
        Ok(TypicalSpec { pmf, n, eps })
    }

    pub fn pmf(&self) -> &Pmf {
        &self.pmf
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn slack(&self) -> f64 {
        self.eps / self.pmf.len() as f64
    }

    /// Checks a letter histogram of a length-`n` sequence.
    pub fn is_typical_type(&self, counts: &[usize]) -> bool {
        let slack = self.slack();
        counts
            .iter()
            .zip(self.pmf.probs())
            .all(|(&c, &p)| letter_ok(c, self.n, p, slack))
    }

    pub fn is_typical(&self, x: &[usize]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Shape(format!(
                "sequence of length {} for blocklength {}",
                x.len(),
                self.n
            )));
        }
        let mut counts = vec![0usize; self.pmf.len()];
        for &a in x {
            match counts.get_mut(a) {
                Some(c) => *c += 1,
                None => return Ok(false),
            }
        }
        Ok(self.is_typical_type(&counts))
    }

    fn count_box(&self) -> Option<Vec<(usize, usize)>> {
        count_box(self.pmf.probs(), self.n, self.slack())
    }

    /// Exact size of the typical set.
    pub fn count(&self) -> Result<BigUint> {
        let Some(bx) = self.count_box() else {
            return Ok(BigUint::zero());
        };
        let types = composition_count(&bx, self.n);
        if types > MAX_COMPOSITIONS {
            return Err(Error::guard("typical-set types", types, MAX_COMPOSITIONS));
        }
        Ok(typed_count(&bx, self.n, &Factorials::new(self.n)))
    }

    /// `log2` of the typical-set size; `-inf` when it is empty.
    pub fn log2_count(&self) -> Result<f64> {
        Ok(log2_big(&self.count()?))
    }

    /// All typical sequences in lexicographic order.
    pub fn enumerate(&self) -> Result<Vec<Vec<usize>>> {
        let size = log2_big(&self.count()?).exp2();
        if size > MAX_SEQUENCES {
            return Err(Error::guard("typical sequences", size, MAX_SEQUENCES));
        }
        let Some(bx) = self.count_box() else {
            return Ok(Vec::new());
        };
        Ok(enumerate_grouped(&vec![0; self.n], &[bx], self.pmf.len()))
    }
}

fn flat_tuple(joint: &JointPmf, axes: &[&str], seqs: &[&[usize]]) -> Result<(Vec<usize>, usize)> {
    if axes.len() != seqs.len() || axes.is_empty() {
        return Err(Error::Shape("one sequence per axis required".into()));
    }
    let n = seqs[0].len();
    if seqs.iter().any(|s| s.len() != n) || n == 0 {
        return Err(Error::Shape("sequences of unequal or zero length".into()));
    }
    let sizes: Vec<usize> = axes
        .iter()
        .map(|a| joint.size_of(a))
        .collect::<Result<_>>()?;
    let mut flat = vec![0usize; n];
    for (seq, &size) in seqs.iter().zip(&sizes) {
        for (f, &v) in flat.iter_mut().zip(seq.iter()) {
            if v >= size {
                return Err(Error::Shape(format!(
                    "symbol {v} outside alphabet of {size}"
                )));
            }
            *f = *f * size + v;
        }
    }
    Ok((flat, sizes.iter().product()))
}

/// Joint ε-typicality of the named axes' sequences under their marginal law,
/// with the slack divided by the size of the product alphabet.
pub fn is_jointly_typical(
    joint: &JointPmf,
    axes: &[&str],
    seqs: &[&[usize]],
    eps: f64,
) -> Result<bool> {
    let (flat, _) = flat_tuple(joint, axes, seqs)?;
    let law = joint.marginal(axes)?;
    let pmf = Pmf::new(law.probs().to_vec())?;
    TypicalSpec::new(pmf, flat.len(), eps)?.is_typical(&flat)
}

/// All `x` (sequences over `target`) such that `x` together with the given
/// sequences is jointly ε-typical, in lexicographic order.
pub fn conditional_typical_set(
    joint: &JointPmf,
    target: &str,
    given: &[&str],
    given_seqs: &[&[usize]],
    eps: f64,
) -> Result<Vec<Vec<usize>>> {
    let (groups, gsize) = flat_tuple(joint, given, given_seqs)?;
    let n = groups.len();
    let xsize = joint.size_of(target)?;
    let mut axes = vec![target];
    axes.extend_from_slice(given);
    let law = joint.marginal(&axes)?;
    let probs = law.probs();
    let slack = eps / (xsize * gsize) as f64;

    let mut per_group = vec![0usize; gsize];
    for &g in &groups {
        per_group[g] += 1;
    }
    let fact = Factorials::new(n);
    let mut boxes = Vec::with_capacity(gsize);
    let mut total = BigUint::one();
    for (g, &ng) in per_group.iter().enumerate() {
        // Cell (x, g) lives at x * gsize + g in the marginal table.
        let col: Vec<f64> = (0..xsize).map(|x| probs[x * gsize + g]).collect();
        let Some(bx) = count_box(&col, n, slack) else {
            return Ok(Vec::new());
        };
        let types = composition_count(&bx, ng);
        if types > MAX_COMPOSITIONS {
            return Err(Error::guard("conditional types", types, MAX_COMPOSITIONS));
        }
        total *= typed_count(&bx, ng, &fact);
        boxes.push(bx);
    }
    let size = log2_big(&total).exp2();
    if size > MAX_SEQUENCES {
        return Err(Error::guard(
            "conditional typical sequences",
            size,
            MAX_SEQUENCES,
        ));
    }
    if total.is_zero() {
        return Ok(Vec::new());
    }
    Ok(enumerate_grouped(&groups, &boxes, xsize))
}

/// The index set `U = A(U|Q=q_1) x .. x A(U|Q=q_m)`: the index sequence is
/// split into consecutive blocks, block `q` of length `k P_Q(q)` and typical
/// for `P_{U|Q=q}`. Blocks appear in the declared order of `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexSetSpec {
    weights: Vec<(u64, u64)>,
    cond_u: Vec<Pmf>,
    k: usize,
    eps: Vec<f64>,
    blocks: Vec<usize>,
}

impl IndexSetSpec {
    pub fn new(weights: Vec<(u64, u64)>, cond_u: Vec<Pmf>, k: usize, eps: f64) -> Result<Self> {
        if weights.is_empty() || weights.len() != cond_u.len() {
            return Err(Error::InvalidSpec(format!(
                "{} weights for {} conditional laws",
                weights.len(),
                cond_u.len()
            )));
        }
        if k == 0 {
            return Err(Error::InvalidSpec("index length must be >= 1".into()));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "typicality slack {eps} is invalid"
            )));
        }
        let alphabet = cond_u[0].len();
        if cond_u.iter().any(|p| p.len() != alphabet) {
            return Err(Error::InvalidSpec(
                "conditional laws over different alphabets".into(),
            ));
        }
        let mut blocks = Vec::new();
        for &(num, den) in &weights {
            if num == 0 || den == 0 {
                return Err(Error::InvalidSpec(format!(
                    "weight {num}/{den} must be positive"
                )));
            }
            let scaled = k as u128 * num as u128;
            if !scaled.is_multiple_of(den as u128) {
                return Err(Error::InvalidSpec(format!(
                    "block length {k}*{num}/{den} is not an integer"
                )));
            }
            blocks.push((scaled / den as u128) as usize);
        }
        if blocks.iter().sum::<usize>() != k {
            return Err(Error::InvalidSpec("Q weights do not sum to 1".into()));
        }
        let eps = vec![eps; weights.len()];
        Ok(IndexSetSpec {
            weights,
            cond_u,
            k,
            eps,
            blocks,
        })
    }

    /// Single block, plain typicality.
    pub fn single(pmf: Pmf, k: usize, eps: f64) -> Result<Self> {
        IndexSetSpec::new(vec![(1, 1)], vec![pmf], k, eps)
    }

    /// `T_{s_1}^{k_1} x .. x T_{s_m}^{k_m}` viewed as an index set over
    /// Z_{p^r}: block `i` uniform on the transversal `T_{s_i}`, with a slack
    /// large enough that every type is admitted.
    pub fn transversal(modulus: Modulus, levels: &[(u32, usize)]) -> Result<Self> {
        let k: usize = levels.iter().map(|l| l.1).sum();
        let m = modulus.order() as usize;
        let mut weights = Vec::new();
        let mut laws = Vec::new();
        for &(s, ks) in levels {
            let q = modulus.p_pow(s)? as usize;
            let mut probs = vec![0.0; m];
            probs[..q].iter_mut().for_each(|p| *p = 1.0 / q as f64);
            weights.push((ks as u64, k as u64));
            laws.push(Pmf::new(probs)?);
        }
        IndexSetSpec::new(weights, laws, k, m as f64)
    }

    /// All of Z_{p^r}^k.
    pub fn full(modulus: Modulus, k: usize) -> Result<Self> {
        IndexSetSpec::transversal(modulus, &[(modulus.r(), k)])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest per-block slack.
    pub fn eps(&self) -> f64 {
        self.eps.iter().copied().fold(0.0, f64::max)
    }

    pub fn alphabet(&self) -> usize {
        self.cond_u[0].len()
    }

    pub fn weights(&self) -> &[(u64, u64)] {
        &self.weights
    }

    pub fn laws(&self) -> &[Pmf] {
        &self.cond_u
    }

    pub fn block_lengths(&self) -> &[usize] {
        &self.blocks
    }

    fn block_specs(&self) -> Result<Vec<Option<TypicalSpec>>> {
        self.blocks
            .iter()
            .zip(&self.cond_u)
            .zip(&self.eps)
            .map(|((&kq, p), &eps)| {
                if kq == 0 {
                    Ok(None)
                } else {
                    TypicalSpec::new(p.clone(), kq, eps).map(Some)
                }
            })
            .collect()
    }

    pub fn contains(&self, u: &[usize]) -> Result<bool> {
        if u.len() != self.k {
            return Err(Error::Shape(format!(
                "index of length {} for index length {}",
                u.len(),
                self.k
            )));
        }
        let mut start = 0;
        for spec in self.block_specs()?.into_iter().flatten() {
            let end = start + spec.n();
            if !spec.is_typical(&u[start..end])? {
                return Ok(false);
            }
            start = end;
        }
        Ok(true)
    }

    pub fn size(&self) -> Result<BigUint> {
        let mut total = BigUint::one();
        for spec in self.block_specs()?.into_iter().flatten() {
            total *= spec.count()?;
        }
        Ok(total)
    }

    pub fn log2_size(&self) -> Result<f64> {
        Ok(log2_big(&self.size()?))
    }

    /// `H(U|Q)` under the declared weights.
    pub fn cond_entropy(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.cond_u)
            .map(|(&(num, den), p)| num as f64 / den as f64 * p.entropy())
            .sum()
    }

    /// All members in lexicographic order.
    pub fn enumerate(&self) -> Result<Vec<Vec<usize>>> {
        let size = log2_big(&self.size()?).exp2();
        if size > MAX_SEQUENCES {
            return Err(Error::guard("index-set members", size, MAX_SEQUENCES));
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for spec in self.block_specs()?.into_iter().flatten() {
            let block = spec.enumerate()?;
            out = out
                .iter()
                .flat_map(|prefix| {
                    block.iter().map(move |b| {
                        let mut v = prefix.clone();
                        v.extend_from_slice(b);
                        v
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Concatenation of two index sets, as used for sums of codes: the joint
    /// index `(u_1, u_2)` ranges over `U_1 x U_2`, with the second set's `Q`
    /// blocks following the first's.
    pub fn concat(&self, other: &IndexSetSpec) -> Result<IndexSetSpec> {
        if self.alphabet() != other.alphabet() {
            return Err(Error::InvalidSpec(
                "index sets over different alphabets".into(),
            ));
        }
        let k = self.k + other.k;
        let mut weights = Vec::new();
        let mut laws = Vec::new();
        let mut eps = Vec::new();
        let mut blocks = Vec::new();
        for part in [self, other] {
            for ((&kq, law), &e) in part.blocks.iter().zip(&part.cond_u).zip(&part.eps) {
                // Zero-length blocks carry no constraint and are dropped.
                if kq > 0 {
                    weights.push((kq as u64, k as u64));
                    laws.push(law.clone());
                    eps.push(e);
                    blocks.push(kq);
                }
            }
        }
        Ok(IndexSetSpec {
            weights,
            cond_u: laws,
            k,
            eps,
            blocks,
        })
    }
}
