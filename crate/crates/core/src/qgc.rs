//! Shifted group codes, quasi group codes and nested binning.
//!
//! A quasi group code is the image `{uG + b : u in U}` of a typicality-based
//! index set `U` under an affine map over Z_{p^r}. With `U` the whole space
//! it is an ordinary shifted group code.

use std::collections::BTreeMap;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::rng;
use crate::typical::{log2_big, IndexSetSpec, MAX_SEQUENCES};
use crate::zring::{Modulus, RingMatrix, RingVec};

/// The affine map `u -> uG + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCode {
    g: RingMatrix,
    b: RingVec,
}

impl GroupCode {
    pub fn new(g: RingMatrix, b: RingVec) -> Result<Self> {
        if g.modulus() != b.modulus() {
            return Err(Error::ModulusMismatch {
                left: g.modulus().order(),
                right: b.modulus().order(),
            });
        }
        if g.cols() != b.len() {
            return Err(Error::Shape(format!(
                "{} columns but translation of length {}",
                g.cols(),
                b.len()
            )));
        }
        Ok(GroupCode { g, b })
    }

    /// Draws `G` (row-major, `k n` draws) and then `b` (`n` draws), each
    /// entry uniform on Z_{p^r}.
    pub fn sample(rng: &mut impl RngCore, modulus: Modulus, k: usize, n: usize) -> Self {
        assert!(k >= 1 && n >= 1);
        let m = modulus.order();
        let g: Vec<u64> = (0..k * n).map(|_| rng::below(rng, m)).collect();
        let b: Vec<u64> = (0..n).map(|_| rng::below(rng, m)).collect();
        GroupCode {
            g: RingMatrix::new(modulus, k, n, g).expect("sampled entries are reduced"),
            b: RingVec::from_raw(modulus, b),
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.g.modulus()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn n(&self) -> usize {
        self.g.cols()
    }

    pub fn generator(&self) -> &RingMatrix {
        &self.g
    }

    pub fn translation(&self) -> &RingVec {
        &self.b
    }

    pub fn with_translation(&self, b: RingVec) -> Result<GroupCode> {
        GroupCode::new(self.g.clone(), b)
    }

    /// `uG + b` for an index whose entries are already reduced.
    pub fn apply(&self, u: &[usize]) -> Vec<u64> {
        let mut out = vec![0; self.n()];
        self.apply_into(u, &mut out);
        out
    }

    pub(crate) fn apply_into(&self, u: &[usize], out: &mut [u64]) {
        let u64s: Vec<u64> = u.iter().map(|&x| x as u64).collect();
        self.g.left_mul_into(&u64s, out);
        let md = self.modulus();
        for (o, &b) in out.iter_mut().zip(self.b.as_slice()) {
            *o = md.add(*o, b);
        }
    }
}

/// Distinct codewords with the number of indices mapping to each.
pub type Codebook = BTreeMap<Vec<u64>, usize>;

/// Codeword and index rates, in bits per channel symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CodeRates {
    pub codeword_rate: f64,
    pub index_rate: f64,
}

/// A quasi group code: a group code restricted to an index set.
#[derive(Clone, Debug, PartialEq)]
pub struct Qgc {
    code: GroupCode,
    index: IndexSetSpec,
}

impl Qgc {
    pub fn new(code: GroupCode, index: IndexSetSpec) -> Result<Self> {
        if index.k() != code.k() {
            return Err(Error::Shape(format!(
                "index length {} but generator has {} rows",
                index.k(),
                code.k()
            )));
        }
        if index.alphabet() as u64 != code.modulus().order() {
            return Err(Error::InvalidSpec(format!(
                "index alphabet of size {} is not Z_{}",
                index.alphabet(),
                code.modulus().order()
            )));
        }
        Ok(Qgc { code, index })
    }

    pub fn sample(
        rng: &mut impl RngCore,
        modulus: Modulus,
        index: IndexSetSpec,
        n: usize,
    ) -> Result<Self> {
        let code = GroupCode::sample(rng, modulus, index.k(), n);
        Qgc::new(code, index)
    }

    /// A transversal group code: block `i` of the index ranges over all of
    /// `T_{s_i}`.
    pub fn transversal(code: GroupCode, levels: &[(u32, usize)]) -> Result<Self> {
        let index = IndexSetSpec::transversal(code.modulus(), levels)?;
        Qgc::new(code, index)
    }

    pub fn code(&self) -> &GroupCode {
        &self.code
    }

    pub fn index(&self) -> &IndexSetSpec {
        &self.index
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn modulus(&self) -> Modulus {
        self.code.modulus()
    }

    pub fn encode(&self, u: &[usize]) -> Result<RingVec> {
        if !self.index.contains(u)? {
            return Err(Error::NotInIndexSet);
        }
        Ok(RingVec::from_raw(self.modulus(), self.code.apply(u)))
    }

    pub fn codebook(&self) -> Result<Codebook> {
        let mut book = Codebook::new();
        for u in self.index.enumerate()? {
            *book.entry(self.code.apply(&u)).or_insert(0) += 1;
        }
        Ok(book)
    }

    pub fn rates(&self) -> Result<CodeRates> {
        let distinct = self.codebook()?.len();
        let n = self.n() as f64;
        Ok(CodeRates {
            codeword_rate: (distinct as f64).log2() / n,
            index_rate: self.index.log2_size()? / n,
        })
    }

    /// Fraction of `trials` uniformly drawn indices whose codeword has no
    /// other preimage in the index set.
    pub fn injectivity_probe(&self, rng: &mut impl RngCore, trials: usize) -> Result<f64> {
        let members = self.index.enumerate()?;
        if members.is_empty() || trials == 0 {
            return Ok(0.0);
        }
        let mut book = Codebook::new();
        for u in &members {
            *book.entry(self.code.apply(u)).or_insert(0) += 1;
        }
        let mut unique = 0;
        for _ in 0..trials {
            let u = &members[rng::below(rng, members.len() as u64) as usize];
            if book[&self.code.apply(u)] == 1 {
                unique += 1;
            }
        }
        Ok(unique as f64 / trials as f64)
    }
}

/// The sum `C_1 + C_2`: generator `(G_1; G_2)`, translation `b_1 + b_2`,
/// index `(u_1, u_2)` ranging over `U_1 x U_2`.
pub fn sum_codes(c1: &Qgc, c2: &Qgc) -> Result<Qgc> {
    if c1.n() != c2.n() {
        return Err(Error::Shape(format!(
            "code lengths {} and {}",
            c1.n(),
            c2.n()
        )));
    }
    let g = c1.code.g.vstack(&c2.code.g)?;
    let b = c1.code.b.add(&c2.code.b)?;
    let index = c1.index.concat(&c2.index)?;
    Qgc::new(GroupCode::new(g, b)?, index)
}

/// An inner QGC together with the shift QGC that indexes its bins. Bin `v` is
/// the inner codebook translated by `v Gbar + bbar`; the outer code is the
/// union of all bins.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedQgc {
    inner: Qgc,
    shift: Qgc,
}

/// A bin label and its translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bin {
    pub v: Vec<usize>,
    pub shift: RingVec,
}

impl NestedQgc {
    pub fn new(inner: Qgc, shift: Qgc) -> Result<Self> {
        if inner.modulus() != shift.modulus() {
            return Err(Error::ModulusMismatch {
                left: inner.modulus().order(),
                right: shift.modulus().order(),
            });
        }
        if inner.n() != shift.n() {
            return Err(Error::Shape(format!(
                "inner length {} but shift length {}",
                inner.n(),
                shift.n()
            )));
        }
        Ok(NestedQgc { inner, shift })
    }

    pub fn inner(&self) -> &Qgc {
        &self.inner
    }

    pub fn shift_code(&self) -> &Qgc {
        &self.shift
    }

    pub fn bin_of(&self, v: &[usize]) -> Result<Bin> {
        Ok(Bin {
            v: v.to_vec(),
            shift: self.shift.encode(v)?,
        })
    }

    pub fn bin_members(&self, v: &[usize]) -> Result<Codebook> {
        let bin = self.bin_of(v)?;
        let md = self.inner.modulus();
        Ok(self
            .inner
            .codebook()?
            .into_iter()
            .map(|(w, c)| {
                let w = w
                    .iter()
                    .zip(bin.shift.as_slice())
                    .map(|(&a, &b)| md.add(a, b))
                    .collect();
                (w, c)
            })
            .collect())
    }

    /// The outer code as a single QGC of index length `k + l`.
    pub fn outer(&self) -> Result<Qgc> {
        sum_codes(&self.inner, &self.shift)
    }

    /// Fraction of outer codewords that lie in more than one bin.
    pub fn bin_overlap(&self) -> Result<f64> {
        let bins = self.shift.index.enumerate()?;
        let inner = self.inner.codebook()?;
        let total = bins.len() as f64 * inner.len() as f64;
        if total > MAX_SEQUENCES {
            return Err(Error::guard("outer codewords", total, MAX_SEQUENCES));
        }
        let mut owners: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        for v in &bins {
            for w in self.bin_members(v)?.into_keys() {
                *owners.entry(w).or_insert(0) += 1;
            }
        }
        let shared = owners.values().filter(|&&c| c > 1).count();
        Ok(if owners.is_empty() {
            0.0
        } else {
            shared as f64 / owners.len() as f64
        })
    }

    /// `log2` of the number of bins.
    pub fn log2_bins(&self) -> Result<f64> {
        Ok(log2_big(&self.shift.index.size()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Pmf;
    use std::collections::BTreeSet;

    fn z4() -> Modulus {
        Modulus::new(2, 2).unwrap()
    }

    fn code(rows: &[Vec<u64>], b: Vec<u64>) -> GroupCode {
        GroupCode::new(
            RingMatrix::from_rows(z4(), rows).unwrap(),
            RingVec::new(z4(), b).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = GroupCode::sample(&mut rng::stream(5, 0), z4(), 3, 4);
        let b = GroupCode::sample(&mut rng::stream(5, 0), z4(), 3, 4);
        assert_eq!(a, b);
        assert_ne!(a, GroupCode::sample(&mut rng::stream(5, 1), z4(), 3, 4));
    }

    #[test]
    fn tiny_ensemble_is_uniform_over_pairs() {
        let mut hist = BTreeMap::new();
        let draws = 160_000;
        let mut r = rng::stream(11, 0);
        for _ in 0..draws {
            let c = GroupCode::sample(&mut r, z4(), 1, 1);
            *hist
                .entry((c.g.get(0, 0), c.b.as_slice()[0]))
                .or_insert(0usize) += 1;
        }
        assert_eq!(hist.len(), 16);
        let mean = draws as f64 / 16.0;
        let sd = (draws as f64 / 16.0 * 15.0 / 16.0).sqrt();
        assert!(hist.values().all(|&h| (h as f64 - mean).abs() < 4.0 * sd));
    }

    #[test]
    fn encode_examples() {
        let c = code(&[vec![1, 2], vec![3, 1]], vec![1, 1]);
        let q = Qgc::new(c, IndexSetSpec::full(z4(), 2).unwrap()).unwrap();
        assert_eq!(q.encode(&[0, 0]).unwrap().as_slice(), &[1, 1]);
        // (2,3) * [[1,2],[3,1]] = (2+9, 4+3) = (3, 3); plus (1,1).
        assert_eq!(q.encode(&[2, 3]).unwrap().as_slice(), &[0, 0]);

        let half = Pmf::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let q = Qgc::new(
            code(&[vec![1, 2], vec![3, 1]], vec![0, 0]),
            IndexSetSpec::single(half, 2, 0.1).unwrap(),
        )
        .unwrap();
        assert_eq!(q.encode(&[0, 0]), Err(Error::NotInIndexSet));
        assert!(q.encode(&[0, 1]).is_ok());
    }

    #[test]
    fn full_index_set_gives_shifted_group_code() {
        let c = code(&[vec![1, 2, 0], vec![2, 0, 2]], vec![3, 0, 1]);
        let q = Qgc::new(c.clone(), IndexSetSpec::full(z4(), 2).unwrap()).unwrap();
        let book = q.codebook().unwrap();
        let b = c.translation().clone();
        let words: BTreeSet<Vec<u64>> = book
            .keys()
            .map(|w| {
                RingVec::new(z4(), w.clone())
                    .unwrap()
                    .sub(&b)
                    .unwrap()
                    .into_vec()
            })
            .collect();
        for x in &words {
            for y in &words {
                let s: Vec<u64> = x.iter().zip(y).map(|(a, b)| (a + b) % 4).collect();
                assert!(words.contains(&s));
            }
        }
        assert!(words.contains(&vec![0, 0, 0]));
    }

    #[test]
    fn encode_is_affine() {
        let c = code(&[vec![1, 3], vec![2, 1]], vec![2, 3]);
        let q = Qgc::new(c, IndexSetSpec::full(z4(), 2).unwrap()).unwrap();
        let md = z4();
        for a in 0..16usize {
            for b in 0..16usize {
                let u1 = [a % 4, a / 4];
                let u2 = [b % 4, b / 4];
                let s = [(u1[0] + u2[0]) % 4, (u1[1] + u2[1]) % 4];
                let lhs = q.encode(&u1).unwrap().add(&q.encode(&u2).unwrap()).unwrap();
                let rhs: Vec<u64> = q
                    .encode(&s)
                    .unwrap()
                    .as_slice()
                    .iter()
                    .zip(q.code().translation().as_slice())
                    .map(|(&x, &b)| md.add(x, b))
                    .collect();
                assert_eq!(lhs.as_slice(), rhs.as_slice());
            }
        }
    }

    #[test]
    fn codebook_multiplicities() {
        let zero = code(&[vec![0, 0], vec![0, 0]], vec![1, 2]);
        let q = Qgc::new(zero, IndexSetSpec::full(z4(), 2).unwrap()).unwrap();
        let book = q.codebook().unwrap();
        assert_eq!(book.len(), 1);
        assert_eq!(book[&vec![1, 2]], 16);
        assert_eq!(q.rates().unwrap().codeword_rate, 0.0);

        let twin = code(&[vec![2, 1], vec![2, 1]], vec![0, 0]);
        let q = Qgc::new(twin, IndexSetSpec::full(z4(), 2).unwrap()).unwrap();
        let book = q.codebook().unwrap();
        assert_eq!(book.len(), 4);
        assert!(book.values().all(|&c| c == 4));
        let r = q.rates().unwrap();
        assert!(r.codeword_rate <= r.index_rate);
    }

    #[test]
    fn injective_generator_keeps_index_size() {
        let id = code(&[vec![1, 0], vec![0, 1]], vec![3, 3]);
        let q = Qgc::transversal(id, &[(1, 1), (2, 1)]).unwrap();
        assert_eq!(q.codebook().unwrap().len(), 8);
        assert_eq!(
            q.injectivity_probe(&mut rng::stream(0, 0), 200).unwrap(),
            1.0
        );

        let zero = code(&[vec![0, 0], vec![0, 0]], vec![3, 3]);
        let q = Qgc::transversal(zero, &[(1, 1), (2, 1)]).unwrap();
        assert_eq!(
            q.injectivity_probe(&mut rng::stream(0, 0), 200).unwrap(),
            0.0
        );
    }

    #[test]
    fn sum_size_bounds() {
        let mut r = rng::stream(3, 0);
        let idx = IndexSetSpec::transversal(z4(), &[(1, 2)]).unwrap();
        for _ in 0..30 {
            let c1 = Qgc::sample(&mut r, z4(), idx.clone(), 3).unwrap();
            let c2 = Qgc::sample(&mut r, z4(), idx.clone(), 3).unwrap();
            let s = sum_codes(&c1, &c2).unwrap();
            let (a, b) = (c1.codebook().unwrap().len(), c2.codebook().unwrap().len());
            let sum = s.codebook().unwrap().len();
            let direct: BTreeSet<Vec<u64>> = c1
                .codebook()
                .unwrap()
                .keys()
                .flat_map(|x| {
                    c2.codebook()
                        .unwrap()
                        .into_keys()
                        .map(move |y| x.iter().zip(&y).map(|(p, q)| (p + q) % 4).collect())
                })
                .collect();
            assert_eq!(direct.len(), sum);
            assert!(a.max(b) <= sum && sum <= (a * b).min(64));
        }
    }

    #[test]
    fn sum_with_point_index_is_translate() {
        let c1 = Qgc::new(
            code(&[vec![1, 2], vec![0, 1]], vec![1, 0]),
            IndexSetSpec::full(z4(), 2).unwrap(),
        )
        .unwrap();
        let c2 = Qgc::new(
            code(&[vec![3, 3]], vec![0, 2]),
            IndexSetSpec::single(Pmf::point(4, 1), 1, 0.5).unwrap(),
        )
        .unwrap();
        let s = sum_codes(&c1, &c2).unwrap();
        let expect: BTreeSet<Vec<u64>> = c1
            .codebook()
            .unwrap()
            .into_keys()
            .map(|w| vec![(w[0] + 3) % 4, (w[1] + 1) % 4])
            .collect();
        let got: BTreeSet<Vec<u64>> = s.codebook().unwrap().into_keys().collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn bins_tile_the_outer_code() {
        let mut r = rng::stream(9, 0);
        let inner = Qgc::sample(
            &mut r,
            z4(),
            IndexSetSpec::single(Pmf::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap(), 2, 0.1).unwrap(),
            4,
        )
        .unwrap();
        let shift = Qgc::sample(&mut r, z4(), IndexSetSpec::full(z4(), 1).unwrap(), 4).unwrap();
        let nested = NestedQgc::new(inner.clone(), shift.clone()).unwrap();

        let zero_bin = nested.bin_members(&[0]).unwrap();
        let b = shift.code().translation().as_slice();
        let expect: Codebook = inner
            .codebook()
            .unwrap()
            .into_iter()
            .map(|(w, c)| (w.iter().zip(b).map(|(x, y)| (x + y) % 4).collect(), c))
            .collect();
        assert_eq!(zero_bin, expect);

        let mut union = BTreeSet::new();
        for v in 0..4 {
            let bin = nested.bin_members(&[v]).unwrap();
            assert_eq!(bin.len(), inner.codebook().unwrap().len());
            union.extend(bin.into_keys());
        }
        let outer: BTreeSet<Vec<u64>> = nested
            .outer()
            .unwrap()
            .codebook()
            .unwrap()
            .into_keys()
            .collect();
        assert_eq!(union, outer);
        assert!(nested.bin_overlap().unwrap() <= 1.0);
        assert_eq!(nested.log2_bins().unwrap(), 2.0);
    }
}
