//! Exact set arithmetic in `Z/pZ` and `Z`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitVec;
use crate::error::{domain, Error, Result};

/// Largest integer span handled with a dense bit vector in integer sumsets.
const DENSE_SPAN_LIMIT: u64 = 1 << 26;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Reduces an arbitrary integer to its representative in `[0, p)`.
#[inline]
pub fn reduce(x: i64, p: u64) -> u64 {
    (x as i128).rem_euclid(p as i128) as u64
}

/// A subset of `Z/pZ` for a prime `p`.
///
/// Elements are kept sorted and distinct, alongside a bit vector of length `p`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawResidueSet", into = "RawResidueSet")]
pub struct ResidueSet {
    modulus: u64,
    elements: Vec<u64>,
    bits: BitVec,
}

#[derive(Serialize, Deserialize)]
struct RawResidueSet {
    modulus: u64,
    elements: Vec<u64>,
}

impl TryFrom<RawResidueSet> for ResidueSet {
    type Error = Error;

    fn try_from(raw: RawResidueSet) -> Result<Self> {
        if raw.elements.iter().any(|&a| a >= raw.modulus) {
            return domain("residue out of range [0, modulus)");
        }
        ResidueSet::new(raw.modulus, raw.elements.iter().copied())
    }
}

impl From<ResidueSet> for RawResidueSet {
    fn from(s: ResidueSet) -> Self {
        RawResidueSet {
            modulus: s.modulus,
            elements: s.elements,
        }
    }
}

impl ResidueSet {
    /// Builds `{a mod p : a ∈ elems}` after checking that `p` is prime.
    pub fn from_integers(p: i64, elems: &[i64]) -> Result<Self> {
        if p < 2 {
            return domain(format!("modulus must be at least 2, got {p}"));
        }
        let p = p as u64;
        Self::new(p, elems.iter().map(|&a| reduce(a, p)))
    }

    /// Builds a set from residues already in `[0, p)` (or reduces them if not).
    pub fn new<I: IntoIterator<Item = u64>>(p: u64, elems: I) -> Result<Self> {
        if p < 2 {
            return domain(format!("modulus must be at least 2, got {p}"));
        }
        if !is_prime(p) {
            return Err(Error::CompositeModulus(p as i64));
        }
        Ok(Self::new_unchecked(p, elems))
    }

    /// Skips the primality test; for internal use with a modulus known to be prime.
    pub(crate) fn new_unchecked<I: IntoIterator<Item = u64>>(p: u64, elems: I) -> Self {
        let bits = BitVec::from_indices(p as usize, elems.into_iter().map(|a| (a % p) as usize));
        Self::from_bits(p, bits)
    }

    pub(crate) fn from_bits(p: u64, bits: BitVec) -> Self {
        debug_assert_eq!(bits.len(), p as usize);
        let elements = bits.iter_ones().map(|i| i as u64).collect();
        ResidueSet {
            modulus: p,
            elements,
            bits,
        }
    }

    pub fn empty(p: u64) -> Result<Self> {
        Self::new(p, std::iter::empty())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.bits.get(a as usize)
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    /// The density `c = |A| / p`.
    pub fn density(&self) -> f64 {
        self.len() as f64 / self.modulus as f64
    }

    /// `t·A = {t·a mod p}`.
    pub fn dilate(&self, t: i64) -> ResidueSet {
        let p = self.modulus;
        let u = reduce(t, p);
        Self::new_unchecked(p, self.elements.iter().map(|&a| mul_mod(u, a, p)))
    }

    /// `A + v = {a + v mod p}`.
    pub fn translate(&self, v: i64) -> ResidueSet {
        let p = self.modulus;
        let v = reduce(v, p);
        let mut bits = BitVec::zeros(p as usize);
        bits.or_rotated(&self.bits, v as usize);
        Self::from_bits(p, bits)
    }

    /// `u·A + v`.
    pub fn affine_image(&self, u: i64, v: i64) -> ResidueSet {
        self.dilate(u).translate(v)
    }

    /// `A + t·A`, computed with one rotate-OR pass over the bit vector per
    /// distinct element of `t·A`.
    pub fn sum_of_dilates(&self, t: i64) -> Result<ResidueSet> {
        if self.is_empty() {
            return Err(Error::EmptyInput);
        }
        let p = self.modulus;
        let dilated = self.dilate(t);
        let mut acc = BitVec::zeros(p as usize);
        for &s in dilated.elements() {
            acc.or_rotated(&self.bits, s as usize);
        }
        Ok(Self::from_bits(p, acc))
    }

    /// `A ∩ B` for two sets with the same modulus.
    pub fn intersect(&self, other: &ResidueSet) -> ResidueSet {
        assert_eq!(self.modulus, other.modulus, "moduli differ");
        Self::new_unchecked(
            self.modulus,
            self.elements.iter().copied().filter(|&a| other.contains(a)),
        )
    }

    /// The lexicographically smallest sorted element list among all images
    /// `u·A + v` with `u` a unit.
    ///
    /// For each unit `u` only translations sending an element of `u·A` to 0
    /// can be minimal, so those are the only ones compared.
    pub fn canonical_form(&self) -> ResidueSet {
        let p = self.modulus;
        if self.is_empty() {
            return self.clone();
        }
        let mut best: Option<Vec<u64>> = None;
        let mut image = Vec::with_capacity(self.len());
        for u in 1..p {
            let scaled: Vec<u64> = self.elements.iter().map(|&a| mul_mod(u, a, p)).collect();
            for &b in &scaled {
                image.clear();
                image.extend(scaled.iter().map(|&x| (x + p - b) % p));
                image.sort_unstable();
                if best.as_ref().is_none_or(|cur| image < *cur) {
                    best = Some(image.clone());
                }
            }
        }
        Self::new_unchecked(p, best.unwrap_or_default())
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={};{{", self.modulus)?;
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A finite set of integers, sorted and distinct.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntegerSet {
    elements: Vec<i64>,
}

impl From<Vec<i64>> for IntegerSet {
    fn from(mut v: Vec<i64>) -> Self {
        v.sort_unstable();
        v.dedup();
        IntegerSet { elements: v }
    }
}

impl From<IntegerSet> for Vec<i64> {
    fn from(s: IntegerSet) -> Self {
        s.elements
    }
}

impl FromIterator<i64> for IntegerSet {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        IntegerSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl IntegerSet {
    pub fn new(elems: &[i64]) -> Self {
        IntegerSet::from(elems.to_vec())
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn translate(&self, v: i64) -> IntegerSet {
        IntegerSet {
            elements: self.elements.iter().map(|&a| a + v).collect(),
        }
    }

    /// `A + t·A` over the integers.
    pub fn sum_of_dilates(&self, t: i64) -> Result<IntegerSet> {
        let (Some(&lo), Some(&hi)) = (self.elements.first(), self.elements.last()) else {
            return Err(Error::EmptyInput);
        };
        let (tlo, thi) = if t >= 0 { (t * lo, t * hi) } else { (t * hi, t * lo) };
        let base = lo + tlo;
        let span = (hi + thi - base) as u64 + 1;
        if span <= DENSE_SPAN_LIMIT {
            let width = span as usize;
            let shifted = BitVec::from_indices(width, self.elements.iter().map(|&a| (a - lo) as usize));
            let mut acc = BitVec::zeros(width);
            for &b in &self.elements {
                acc.or_shifted_up(&shifted, (t * b - tlo) as usize);
            }
            Ok(IntegerSet {
                elements: acc.iter_ones().map(|i| base + i as i64).collect(),
            })
        } else {
            Ok(self
                .elements
                .iter()
                .flat_map(|&a| self.elements.iter().map(move |&b| a + t * b))
                .collect())
        }
    }

    /// Translate so the minimum is 0, then pick the lexicographically smaller of
    /// the set and its reflection `max − A`. Both moves preserve `|A + t·A|`.
    pub fn normalized(&self) -> IntegerSet {
        let (Some(&lo), Some(&hi)) = (self.elements.first(), self.elements.last()) else {
            return self.clone();
        };
        let forward: Vec<i64> = self.elements.iter().map(|&a| a - lo).collect();
        let mut reflected: Vec<i64> = self.elements.iter().map(|&a| hi - a).collect();
        reflected.reverse();
        IntegerSet {
            elements: forward.min(reflected),
        }
    }
}

impl fmt::Debug for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// `min(|A| + |B| − 1, p)`.
pub fn cauchy_davenport_bound(size_a: u64, size_b: u64, p: u64) -> Result<u64> {
    if size_a == 0 || size_b == 0 {
        return Err(Error::EmptyInput);
    }
    Ok((size_a + size_b - 1).min(p))
}
