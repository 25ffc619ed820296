//! Exact arithmetic over the cyclic ring Z_{p^r}.
//!
//! Besides the ring operations this module exposes the subgroup chain
//! `H_s = p^s Z_{p^r}` (so `H_0` is the whole ring and `H_r = {0}`), the
//! transversal `T_s = {0, .., p^s - 1}`, and the projection `[a]_s = a mod p^s`
//! that splits every element uniquely as `a = [a]_s + h` with `h` in `H_s`.
//!
//! Values are kept reduced at all times. Moduli are validated once, at
//! construction; combining values from different rings is a programming
//! error and is reported immediately.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported ring order.
pub const MAX_ORDER: u64 = 1 << 32;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime power `p^r` defining Z_{p^r}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus {
    p: u64,
    r: u32,
    m: u64,
}

impl Modulus {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidModulus {
                p,
                r,
                reason: "p is not prime",
            });
        }
        if r == 0 {
            return Err(Error::InvalidModulus {
                p,
                r,
                reason: "exponent must be at least 1",
            });
        }
        let mut m: u64 = 1;
        for _ in 0..r {
            m = match m.checked_mul(p) {
                Some(v) if v <= MAX_ORDER => v,
                _ => {
                    return Err(Error::InvalidModulus {
                        p,
                        r,
                        reason: "p^r exceeds 2^32",
                    })
                }
            };
        }
        Ok(Modulus { p, r, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Ring order `p^r`.
    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn log2_p(&self) -> f64 {
        (self.p as f64).log2()
    }

    /// `log2 p^r`.
    pub fn log2_order(&self) -> f64 {
        self.r as f64 * self.log2_p()
    }

    /// `p^s` for `s <= r`.
    pub fn p_pow(&self, s: u32) -> Result<u64> {
        self.check_level(s)?;
        Ok(self.p.pow(s))
    }

    pub fn check_level(&self, s: u32) -> Result<()> {
        if s > self.r {
            Err(Error::LevelOutOfRange {
                level: s,
                r: self.r,
            })
        } else {
            Ok(())
        }
    }

    pub fn elem(&self, value: u64) -> Result<RingElem> {
        if value >= self.m {
            return Err(Error::Unreduced {
                value,
                modulus: self.m,
            });
        }
        Ok(RingElem {
            value,
            modulus: *self,
        })
    }

    /// Reduces an arbitrary integer into the ring.
    pub fn reduce(&self, value: i64) -> u64 {
        value.rem_euclid(self.m as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.m - b + a
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    /// `[a]_s`, the transversal representative of `a` modulo `H_s`.
    pub fn proj(&self, a: u64, s: u32) -> Result<u64> {
        Ok(a % self.p_pow(s)?)
    }

    /// Splits `a` as `(t, h)` with `t` in `T_s`, `h` in `H_s` and `t + h = a`.
    pub fn decompose(&self, a: u64, s: u32) -> Result<(u64, u64)> {
        let t = self.proj(a, s)?;
        Ok((t, a - t))
    }

    pub fn in_subgroup(&self, a: u64, s: u32) -> Result<bool> {
        Ok(a.is_multiple_of(self.p_pow(s)?))
    }

    /// Elements of `H_s` in ascending order.
    pub fn subgroup(&self, s: u32) -> Result<Vec<u64>> {
        let step = self.p_pow(s)?;
        Ok((0..self.m / step).map(|j| j * step).collect())
    }

    /// Elements of `T_s` in ascending order.
    pub fn transversal(&self, s: u32) -> Result<Vec<u64>> {
        Ok((0..self.p_pow(s)?).collect())
    }

    /// Largest `s` with `a` in `H_s`; the p-adic valuation, which is at most
    /// `r - 1` for a nonzero element.
    pub fn level(&self, a: u64) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let mut s = 0;
        let mut v = a;
        while v.is_multiple_of(self.p) {
            v /= self.p;
            s += 1;
        }
        Ok(s)
    }

    /// Level of a vector: the minimum level over its nonzero coordinates, so
    /// that `u` lies in `H_s^k \ H_{s+1}^k`.
    pub fn vec_level(&self, u: &[u64]) -> Result<u32> {
        u.iter()
            .filter(|&&a| a != 0)
            .map(|&a| self.level(a))
            .try_fold(None, |acc: Option<u32>, l| {
                let l = l?;
                Ok::<_, Error>(Some(acc.map_or(l, |a| a.min(l))))
            })?
            .ok_or(Error::ZeroElement)
    }

    fn same(&self, other: &Modulus) -> Result<()> {
        if self != other {
            Err(Error::ModulusMismatch {
                left: self.m,
                right: other.m,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}^{}", self.p, self.r)
    }
}

/// An element of Z_{p^r} carrying its ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    value: u64,
    modulus: Modulus,
}

impl RingElem {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn try_add(self, other: RingElem) -> Result<RingElem> {
        self.modulus.same(&other.modulus)?;
        Ok(RingElem {
            value: self.modulus.add(self.value, other.value),
            modulus: self.modulus,
        })
    }

    pub fn try_sub(self, other: RingElem) -> Result<RingElem> {
        self.modulus.same(&other.modulus)?;
        Ok(RingElem {
            value: self.modulus.sub(self.value, other.value),
            modulus: self.modulus,
        })
    }

    pub fn try_mul(self, other: RingElem) -> Result<RingElem> {
        self.modulus.same(&other.modulus)?;
        Ok(RingElem {
            value: self.modulus.mul(self.value, other.value),
            modulus: self.modulus,
        })
    }

    pub fn proj(&self, s: u32) -> Result<u64> {
        self.modulus.proj(self.value, s)
    }

    pub fn decompose(&self, s: u32) -> Result<(u64, u64)> {
        self.modulus.decompose(self.value, s)
    }

    pub fn in_subgroup(&self, s: u32) -> Result<bool> {
        self.modulus.in_subgroup(self.value, s)
    }

    pub fn level(&self) -> Result<u32> {
        self.modulus.level(self.value)
    }
}

// The operator impls panic on mixed moduli; use the `try_*` methods when the
// operands come from untrusted input.
impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: RingElem) -> RingElem {
        self.try_add(rhs)
            .expect("ring elements from different moduli")
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, rhs: RingElem) -> RingElem {
        self.try_sub(rhs)
            .expect("ring elements from different moduli")
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: RingElem) -> RingElem {
        self.try_mul(rhs)
            .expect("ring elements from different moduli")
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A vector in Z_{p^r}^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingVec {
    modulus: Modulus,
    data: Vec<u64>,
}

impl RingVec {
    pub fn new(modulus: Modulus, data: Vec<u64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Shape("vectors must have length >= 1".into()));
        }
        if let Some(&v) = data.iter().find(|&&v| v >= modulus.order()) {
            return Err(Error::Unreduced {
                value: v,
                modulus: modulus.order(),
            });
        }
        Ok(RingVec { modulus, data })
    }

    pub fn zeros(modulus: Modulus, n: usize) -> Self {
        assert!(n >= 1, "vectors must have length >= 1");
        RingVec {
            modulus,
            data: vec![0; n],
        }
    }

    pub(crate) fn from_raw(modulus: Modulus, data: Vec<u64>) -> Self {
        debug_assert!(data.iter().all(|&v| v < modulus.order()));
        RingVec { modulus, data }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.data
    }

    pub fn get(&self, i: usize) -> RingElem {
        RingElem {
            value: self.data[i],
            modulus: self.modulus,
        }
    }

    fn check(&self, other: &RingVec) -> Result<()> {
        self.modulus.same(&other.modulus)?;
        if self.len() != other.len() {
            return Err(Error::Shape(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingVec) -> Result<RingVec> {
        self.check(other)?;
        let m = self.modulus;
        Ok(RingVec::from_raw(
            m,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| m.add(a, b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &RingVec) -> Result<RingVec> {
        self.check(other)?;
        let m = self.modulus;
        Ok(RingVec::from_raw(
            m,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| m.sub(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: RingElem) -> Result<RingVec> {
        self.modulus.same(&c.modulus)?;
        let m = self.modulus;
        Ok(RingVec::from_raw(
            m,
            self.data.iter().map(|&a| m.mul(a, c.value)).collect(),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Coordinate-wise `[.]_s`.
    pub fn proj(&self, s: u32) -> Result<Vec<u64>> {
        let q = self.modulus.p_pow(s)?;
        Ok(self.data.iter().map(|&a| a % q).collect())
    }

    /// Largest `s` with the vector in `H_s^n`; rejects the zero vector.
    pub fn level(&self) -> Result<u32> {
        self.modulus.vec_level(&self.data)
    }

    /// `self * g` for a row vector of length `g.rows()`.
    pub fn mul_mat(&self, g: &RingMatrix) -> Result<RingVec> {
        g.left_mul(self)
    }
}

/// A `rows x cols` matrix over Z_{p^r}, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl RingMatrix {
    pub fn new(modulus: Modulus, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix dimensions must be >= 1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(&v) = data.iter().find(|&&v| v >= modulus.order()) {
            return Err(Error::Unreduced {
                value: v,
                modulus: modulus.order(),
            });
        }
        Ok(RingMatrix {
            modulus,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(modulus: Modulus, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        RingMatrix::new(modulus, rows.len(), cols, rows.concat())
    }

    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1);
        RingMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    /// Row-stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.modulus.same(&other.modulus)?;
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "cannot stack {} columns on {}",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(RingMatrix {
            modulus: self.modulus,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// `u * self` with every sum and product reduced mod p^r.
    pub fn left_mul(&self, u: &RingVec) -> Result<RingVec> {
        self.modulus.same(&u.modulus)?;
        if u.len() != self.rows {
            return Err(Error::Shape(format!(
                "vector of length {} times {}x{} matrix",
                u.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![0; self.cols];
        self.left_mul_into(u.as_slice(), &mut out);
        Ok(RingVec::from_raw(self.modulus, out))
    }

    /// Unchecked product on raw slices; `out` must have `cols` entries.
    pub(crate) fn left_mul_into(&self, u: &[u64], out: &mut [u64]) {
        let m = self.modulus.order() as u128;
        let mut acc = vec![0u128; self.cols];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (a, &g) in acc.iter_mut().zip(self.row(i)) {
                *a += ui as u128 * g as u128;
            }
        }
        for (o, a) in out.iter_mut().zip(acc) {
            *o = (a % m) as u64;
        }
    }
}
