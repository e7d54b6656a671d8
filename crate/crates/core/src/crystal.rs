//! Compositions (elements of the crystal `B_ℓ`) and multiplicity arrays.
//!
//! A composition of weight `ℓ` and length `L` is a vector of `L` nonnegative
//! integers summing to `ℓ`; it is pictured as `ℓ` dots distributed in `L`
//! boxes. All enumerations use the reverse-lexicographic order, so the first
//! element of `B_ℓ` is `(ℓ,0,…,0)` and the last is `(0,…,0,ℓ)`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Upper bound on a single entry; entries are stored as `u32`.
pub const MAX_ENTRY: u32 = u32::MAX / 4;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    entries: Vec<u32>,
}

impl Composition {
    /// Builds a composition from its entries. Fails on an empty vector or an
    /// entry above [`MAX_ENTRY`].
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Unsupported("composition of length 0".into()));
        }
        if let Some(pos) = entries.iter().position(|&e| e > MAX_ENTRY) {
            return Err(Error::Parse {
                input: format_entries(&entries),
                position: pos,
                reason: "entry too large".into(),
            });
        }
        Ok(Composition { entries })
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<u32>) -> Self {
        debug_assert!(!entries.is_empty());
        Composition { entries }
    }

    /// The zero composition of length `len`.
    #[must_use]
    pub fn zero(len: usize) -> Self {
        Composition { entries: alloc::vec![0; len.max(1)] }
    }

    #[must_use]
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[must_use]
    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    /// Number of sites `L`.
    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of dots `ℓ`.
    #[must_use]
    pub fn weight(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Entry at a cyclic index (0-based, any integer).
    #[must_use]
    pub fn at(&self, i: isize) -> u32 {
        let l = self.entries.len() as isize;
        self.entries[i.rem_euclid(l) as usize]
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Composition({self})")
    }
}

fn format_entries(entries: &[u32]) -> String {
    if entries.iter().all(|&e| e <= 9) {
        entries.iter().map(|e| char::from(b'0' + *e as u8)).collect()
    } else {
        let parts: Vec<String> = entries.iter().map(ToString::to_string).collect();
        parts.join(",")
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_entries(&self.entries))
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Accepts `0121`, `10,0,2` and the parenthesized `(1,0,2)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')).unwrap_or(t);
        let err = |position: usize, reason: &str| Error::Parse {
            input: s.to_string(),
            position,
            reason: reason.to_string(),
        };
        if t.is_empty() {
            return Err(err(0, "empty composition"));
        }
        let mut entries = Vec::new();
        if t.contains(',') {
            let mut offset = 0;
            for part in t.split(',') {
                let p = part.trim();
                let v: u32 = p.parse().map_err(|_| err(offset, "expected a nonnegative integer"))?;
                entries.push(v);
                offset += part.len() + 1;
            }
        } else {
            for (pos, ch) in t.char_indices() {
                let d = ch.to_digit(10).ok_or_else(|| err(pos, "expected a digit"))?;
                entries.push(d);
            }
        }
        Composition::new(entries)
    }
}

/// Exact binomial coefficient.
#[must_use]
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// Binomial coefficient in `u128`, `None` on overflow.
#[must_use]
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k as u128 {
        // acc * (n-j) / (j+1) is exact at every step
        let num = acc.checked_mul(n as u128 - j)?;
        acc = num / (j + 1);
    }
    Some(acc)
}

/// Number of compositions of `weight` into `len` parts.
#[must_use]
pub fn count_compositions(weight: u32, len: usize) -> BigUint {
    if len == 0 {
        return BigUint::from(u32::from(weight == 0));
    }
    binomial(len as u64 - 1 + u64::from(weight), u64::from(weight))
}

/// All compositions of `weight` into `len ≥ 1` parts in reverse-lexicographic order.
#[must_use]
pub fn enumerate_compositions(weight: u32, len: usize) -> Vec<Composition> {
    let len = len.max(1);
    let mut out = Vec::new();
    let mut cur = alloc::vec![0u32; len];
    fill(&mut cur, 0, weight, &mut out);
    out
}

fn fill(cur: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Composition>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(Composition { entries: cur.to_vec() });
        return;
    }
    for v in (0..=remaining).rev() {
        cur[pos] = v;
        fill(cur, pos + 1, remaining - v, out);
    }
    cur[pos] = 0;
}

/// Position of `c` in [`enumerate_compositions`]`(c.weight(), c.len())`.
pub fn rank(c: &Composition) -> Result<u128> {
    let len = c.len();
    let mut remaining = c.weight();
    let mut r: u128 = 0;
    for (p, &e) in c.entries.iter().enumerate().take(len - 1) {
        let rest = (len - p - 1) as u64;
        // compositions placing v > e at position p come first
        for v in (e + 1)..=remaining {
            let left = u64::from(remaining - v);
            let n = binomial_u128(rest - 1 + left, left).ok_or(Error::Overflow)?;
            r = r.checked_add(n).ok_or(Error::Overflow)?;
        }
        remaining -= e;
    }
    Ok(r)
}

/// Inverse of [`rank`].
pub fn unrank(index: u128, weight: u32, len: usize) -> Result<Composition> {
    if len == 0 {
        return Err(Error::Unsupported("composition of length 0".into()));
    }
    let total = binomial_u128(len as u64 - 1 + u64::from(weight), u64::from(weight))
        .ok_or(Error::Overflow)?;
    if index >= total {
        return Err(Error::IndexOutOfRange { index, len: total });
    }
    let mut idx = index;
    let mut remaining = weight;
    let mut entries = Vec::with_capacity(len);
    for p in 0..len - 1 {
        let rest = (len - p - 1) as u64;
        let mut v = remaining;
        loop {
            let left = u64::from(remaining - v);
            let n = binomial_u128(rest - 1 + left, left).ok_or(Error::Overflow)?;
            if idx < n {
                break;
            }
            idx -= n;
            v -= 1;
        }
        entries.push(v);
        remaining -= v;
    }
    entries.push(remaining);
    Ok(Composition { entries })
}

/// `u ≥ v` componentwise.
pub fn dominance_ge(u: &Composition, v: &Composition) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch { left: u.len(), right: v.len() });
    }
    Ok(u.entries.iter().zip(&v.entries).all(|(a, b)| a >= b))
}

/// Species multiplicities `m = (m_1,…,m_n)` of a basic sector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityArray {
    m: Vec<u32>,
}

impl MultiplicityArray {
    pub fn new(m: Vec<u32>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidMultiplicity("no species".into()));
        }
        if m.contains(&0) {
            return Err(Error::InvalidMultiplicity("every m_a must be at least 1".into()));
        }
        let total: u64 = m.iter().map(|&v| u64::from(v)).sum();
        if total > u64::from(MAX_ENTRY) {
            return Err(Error::InvalidMultiplicity("too many particles".into()));
        }
        Ok(MultiplicityArray { m })
    }

    #[must_use]
    pub fn m(&self) -> &[u32] {
        &self.m
    }

    /// Number of species `n`.
    #[must_use]
    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// `ℓ_a = m_a + … + m_n`, strictly decreasing.
    #[must_use]
    pub fn ell(&self) -> Vec<u32> {
        let mut out = alloc::vec![0; self.m.len()];
        let mut acc = 0;
        for a in (0..self.m.len()).rev() {
            acc += self.m[a];
            out[a] = acc;
        }
        out
    }

    /// Total particle number `ℓ_1`.
    #[must_use]
    pub fn total(&self) -> u32 {
        self.m.iter().sum()
    }
}

impl fmt::Display for MultiplicityArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.m.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MultiplicityArray {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')).unwrap_or(t);
        let mut m = Vec::new();
        let mut offset = 0;
        for part in t.split(',') {
            let v: u32 = part.trim().parse().map_err(|_| Error::Parse {
                input: s.to_string(),
                position: offset,
                reason: "expected a positive integer".into(),
            })?;
            m.push(v);
            offset += part.len() + 1;
        }
        MultiplicityArray::new(m)
    }
}

/// `#B(m) = Π_a binom(L−1+ℓ_a, ℓ_a)`.
#[must_use]
pub fn count_b(m: &MultiplicityArray, len: usize) -> BigUint {
    m.ell().iter().map(|&l| count_compositions(l, len)).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_compositions(0, 3), vec![c("000")]);
        let b2 = enumerate_compositions(2, 3);
        let text: Vec<String> = b2.iter().map(ToString::to_string).collect();
        assert_eq!(text, ["200", "110", "101", "020", "011", "002"]);
        assert!(enumerate_compositions(8, 3).contains(&c("323")));
    }

    #[test]
    fn counts_match_binomials() {
        for l in 0..=6 {
            for len in 1..=5 {
                let n = enumerate_compositions(l, len).len();
                assert_eq!(BigUint::from(n), count_compositions(l, len), "l={l} L={len}");
            }
        }
    }

    #[test]
    fn rank_round_trip() {
        for l in 0..=5 {
            for len in 1..=5 {
                for (i, x) in enumerate_compositions(l, len).iter().enumerate() {
                    assert_eq!(rank(x).unwrap(), i as u128);
                    assert_eq!(&unrank(i as u128, l, len).unwrap(), x);
                }
            }
        }
        assert!(unrank(6, 2, 3).is_err());
    }

    #[test]
    fn dominance() {
        assert!(dominance_ge(&c("1213"), &c("1201")).unwrap());
        assert!(!dominance_ge(&c("10"), &c("01")).unwrap());
        assert!(dominance_ge(&c("10"), &c("100")).is_err());
        let b3 = enumerate_compositions(3, 3);
        let all: Vec<Composition> = (0..=3).flat_map(|l| enumerate_compositions(l, 3)).collect();
        for u in &b3 {
            assert!(dominance_ge(u, u).unwrap());
        }
        for u in &all {
            for v in &all {
                if dominance_ge(u, v).unwrap() && dominance_ge(v, u).unwrap() {
                    assert_eq!(u, v);
                }
                for w in &all {
                    if dominance_ge(u, v).unwrap() && dominance_ge(v, w).unwrap() {
                        assert!(dominance_ge(u, w).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn count_b_values() {
        let m = |s: &str| s.parse::<MultiplicityArray>().unwrap();
        assert_eq!(count_b(&m("1,1"), 2), BigUint::from(6u32));
        assert_eq!(count_b(&m("1,1,2"), 3), BigUint::from(900u32));
        assert_eq!(count_b(&m("4"), 3), BigUint::from(15u32));
        assert_eq!(m("2,1,2,1").ell(), vec![6, 4, 3, 1]);
        assert!("1,0".parse::<MultiplicityArray>().is_err());
    }

    #[test]
    fn text_forms() {
        assert_eq!(c("10,0,2").to_string(), "10,0,2");
        assert_eq!(c("(1,0,2)").to_string(), "102");
        assert!("1a2".parse::<Composition>().is_err());
    }
}
