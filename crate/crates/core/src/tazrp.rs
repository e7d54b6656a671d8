//! The `n`-species TAZRP: local states, sectors, the Markov generator and
//! its exact steady state.
//!
//! Particles hop one site to the left. From a site holding the multiset
//! `β`, the `k` smallest-species particles may leave together for any
//! `1 ≤ k ≤ |β|`, each option at rate 1. Sites are 0-based in this API;
//! the move `τ^k_i` takes particles from site `i+1` (cyclically) to site `i`.
//!
//! # Text form
//!
//! A local state is written as its sorted multiset of species, e.g. `1124`,
//! and the empty site as `-` (`∅` is accepted on input). Sites are joined by
//! `|`, so `3|3|1124`. When some species exceeds 9 the species of a site are
//! separated by `.`. The multiplicity form `mult:0010,0010,2101` lists
//! `(σ^1,…,σ^n)` per site.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::crystal::{count_b, count_compositions, enumerate_compositions, rank, Composition, MultiplicityArray};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// Default bound on the number of states handed to the exact solver.
pub const DEFAULT_SECTOR_LIMIT: u128 = 200_000;

/// Species multiplicities `(σ^1,…,σ^n)` at one site.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalState {
    mult: Vec<u32>,
}

impl LocalState {
    #[must_use]
    pub fn new(mult: Vec<u32>) -> Self {
        LocalState { mult }
    }

    #[must_use]
    pub fn empty(n: usize) -> Self {
        LocalState { mult: vec![0; n] }
    }

    /// From a list of species labels `1..=n` (any order).
    pub fn from_species(species: &[u32], n: usize) -> Result<Self> {
        let mut mult = vec![0; n];
        for &s in species {
            if s == 0 || s as usize > n {
                return Err(Error::Unsupported(format!("species {s} outside 1..={n}")));
            }
            mult[s as usize - 1] += 1;
        }
        Ok(LocalState { mult })
    }

    #[must_use]
    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    /// Number of species `n`.
    #[must_use]
    pub fn n(&self) -> usize {
        self.mult.len()
    }

    /// `|σ|`, the number of particles.
    #[must_use]
    pub fn size(&self) -> u32 {
        self.mult.iter().sum()
    }

    /// Sorted species list (the multiset representation).
    #[must_use]
    pub fn species(&self) -> Vec<u32> {
        self.mult
            .iter()
            .enumerate()
            .flat_map(|(a, &c)| core::iter::repeat(a as u32 + 1).take(c as usize))
            .collect()
    }

    /// Splits off the `k` smallest-species particles: `(taken, rest)`.
    #[must_use]
    pub fn split_smallest(&self, k: u32) -> (LocalState, LocalState) {
        let mut left = k;
        let mut taken = vec![0; self.n()];
        let mut rest = self.mult.clone();
        for a in 0..self.n() {
            let t = rest[a].min(left);
            taken[a] = t;
            rest[a] -= t;
            left -= t;
        }
        (LocalState { mult: taken }, LocalState { mult: rest })
    }

    #[must_use]
    pub fn union(&self, other: &LocalState) -> LocalState {
        LocalState { mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect() }
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, wide: bool) -> fmt::Result {
        let sp = self.species();
        if sp.is_empty() {
            return f.write_str("-");
        }
        if wide {
            let parts: Vec<String> = sp.iter().map(ToString::to_string).collect();
            f.write_str(&parts.join("."))
        } else {
            for s in sp {
                write!(f, "{s}")?;
            }
            Ok(())
        }
    }

    fn parse_site(text: &str, n: Option<usize>, input: &str, offset: usize) -> Result<Vec<u32>> {
        let t = text.trim();
        if t == "-" || t == "∅" || t.is_empty() {
            return Ok(Vec::new());
        }
        let err = |p: usize| Error::Parse {
            input: input.to_string(),
            position: offset + p,
            reason: "expected species labels".into(),
        };
        let species: Vec<u32> = if t.contains('.') {
            t.split('.').map(|s| s.trim().parse::<u32>().map_err(|_| err(0))).collect::<Result<_>>()?
        } else {
            t.char_indices()
                .map(|(p, ch)| ch.to_digit(10).filter(|&d| d > 0).ok_or_else(|| err(p)))
                .collect::<Result<_>>()?
        };
        if let Some(n) = n {
            if let Some(&bad) = species.iter().find(|&&s| s as usize > n || s == 0) {
                return Err(Error::Parse {
                    input: input.to_string(),
                    position: offset,
                    reason: format!("species {bad} outside 1..={n}"),
                });
            }
        }
        Ok(species)
    }
}

impl fmt::Debug for LocalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, self.n() > 9)
    }
}

impl fmt::Display for LocalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, self.n() > 9)
    }
}

/// All `(γ, δ)` with `(α, β) > (γ, δ)`, ordered by the number `k` of moved particles.
#[must_use]
pub fn local_transitions(alpha: &LocalState, beta: &LocalState) -> Vec<(LocalState, LocalState)> {
    (1..=beta.size())
        .map(|k| {
            let (taken, rest) = beta.split_smallest(k);
            (alpha.union(&taken), rest)
        })
        .collect()
}

/// A configuration of `L` sites.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    sites: Vec<LocalState>,
}

impl Configuration {
    /// Fails if the sites disagree on `n` or there are no sites.
    pub fn new(sites: Vec<LocalState>) -> Result<Self> {
        let Some(first) = sites.first() else {
            return Err(Error::Unsupported("configuration with no sites".into()));
        };
        let n = first.n();
        if let Some(s) = sites.iter().find(|s| s.n() != n) {
            return Err(Error::LengthMismatch { left: n, right: s.n() });
        }
        Ok(Configuration { sites })
    }

    /// Parses the multiset or `mult:` text form with a known species count.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        Self::parse_impl(text, Some(n))
    }

    fn parse_impl(text: &str, n: Option<usize>) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("mult:") {
            let mut sites = Vec::new();
            for part in rest.split(',') {
                let c: Composition = part.parse()?;
                sites.push(LocalState::new(c.into_entries()));
            }
            let conf = Configuration::new(sites)?;
            if let Some(n) = n {
                if conf.n() != n {
                    return Err(Error::LengthMismatch { left: conf.n(), right: n });
                }
            }
            return Ok(conf);
        }
        let mut lists = Vec::new();
        let mut offset = 0;
        for part in t.split('|') {
            lists.push(LocalState::parse_site(part, n, text, offset)?);
            offset += part.len() + 1;
        }
        let n = n.unwrap_or_else(|| lists.iter().flatten().copied().max().unwrap_or(1) as usize);
        let sites = lists
            .iter()
            .map(|sp| LocalState::from_species(sp, n))
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(sites)
    }

    #[must_use]
    pub fn sites(&self) -> &[LocalState] {
        &self.sites
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.sites[0].n()
    }

    /// Site at a cyclic index.
    #[must_use]
    pub fn site(&self, i: isize) -> &LocalState {
        let l = self.sites.len() as isize;
        &self.sites[i.rem_euclid(l) as usize]
    }

    /// Per-species totals `(m_1,…,m_n)`.
    #[must_use]
    pub fn species_totals(&self) -> Vec<u32> {
        let mut t = vec![0; self.n()];
        for s in &self.sites {
            for (a, &c) in s.mult.iter().enumerate() {
                t[a] += c;
            }
        }
        t
    }

    /// Occupation of species `a` (1-based) as a composition over sites.
    #[must_use]
    pub fn species_row(&self, a: usize) -> Composition {
        Composition::from_vec_unchecked(self.sites.iter().map(|s| s.mult[a - 1]).collect())
    }

    /// Number of enabled moves `Σ_i |σ_i|`.
    #[must_use]
    pub fn move_count(&self) -> u32 {
        self.sites.iter().map(LocalState::size).sum()
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sites.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Configuration {
    type Err = Error;

    /// Infers `n` from the largest species present (or the `mult:` width).
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_impl(s, None)
    }
}

/// `τ^k_i`: the `k` smallest particles of site `i+1` move to site `i`.
/// Identity when `k` exceeds the occupation of site `i+1`, or when `L = 1`.
#[must_use]
pub fn apply_tau(c: &Configuration, i: usize, k: u32) -> Configuration {
    let len = c.len();
    let i = i % len;
    let j = (i + 1) % len;
    let src = &c.sites[j];
    if k == 0 || k > src.size() || i == j {
        return c.clone();
    }
    let (taken, rest) = src.split_smallest(k);
    let mut sites = c.sites.clone();
    sites[i] = sites[i].union(&taken);
    sites[j] = rest;
    Configuration { sites }
}

/// `C: (σ_1,…,σ_L) ↦ (σ_L, σ_1,…,σ_{L−1})`.
#[must_use]
pub fn cyclic_shift(c: &Configuration) -> Configuration {
    let mut sites = c.sites.clone();
    sites.rotate_right(1);
    Configuration { sites }
}

/// `#S(m) = Π_a binom(L+m_a−1, m_a)`.
#[must_use]
pub fn sector_size(m: &MultiplicityArray, len: usize) -> BigUint {
    m.m().iter().map(|&ma| count_compositions(ma, len)).product()
}

fn sector_size_u128(m: &MultiplicityArray, len: usize) -> u128 {
    u128::try_from(sector_size(m, len)).unwrap_or(u128::MAX)
}

/// All configurations of the sector, species 1 varying slowest, each species
/// occupation in reverse-lexicographic order.
#[must_use]
pub fn enumerate_sector(m: &MultiplicityArray, len: usize) -> Vec<Configuration> {
    let len = len.max(1);
    let n = m.n();
    let per: Vec<Vec<Composition>> = m.m().iter().map(|&ma| enumerate_compositions(ma, len)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let sites = (0..len)
            .map(|i| LocalState { mult: (0..n).map(|a| per[a][idx[a]].entries()[i]).collect() })
            .collect();
        out.push(Configuration { sites });
        let mut a = n;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < per[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// Position of `c` in [`enumerate_sector`] of its own sector.
pub fn sector_index(c: &Configuration) -> Result<usize> {
    let n = c.n();
    let len = c.len();
    let totals = c.species_totals();
    let mut idx: u128 = 0;
    for a in 1..=n {
        let size = u128::try_from(count_compositions(totals[a - 1], len)).map_err(|_| Error::Overflow)?;
        let r = rank(&c.species_row(a))?;
        idx = idx.checked_mul(size).and_then(|v| v.checked_add(r)).ok_or(Error::Overflow)?;
    }
    usize::try_from(idx).map_err(|_| Error::Overflow)
}

/// The generator `H = Σ_i Σ_k (τ^k_i − 1)` on [`enumerate_sector`] order,
/// acting on column vectors.
#[must_use]
pub fn build_h_tazrp(m: &MultiplicityArray, len: usize) -> SparseMatrix {
    let states = enumerate_sector(m, len);
    let mut h = SparseMatrix::zeros(states.len(), states.len());
    for (col, s) in states.iter().enumerate() {
        for i in 0..s.len() {
            let src = s.site(i as isize + 1).size();
            for k in 1..=src {
                let t = apply_tau(s, i, k);
                let row = sector_index(&t).expect("image stays in the sector");
                h.add(row, col, 1);
                h.add(col, col, -1);
            }
        }
    }
    h
}

/// `P(∅,…,∅,all) = Π_{a≥2} binom(L−1+ℓ_a, ℓ_a)`.
#[must_use]
pub fn condensation_probability(m: &MultiplicityArray, len: usize) -> BigUint {
    m.ell().iter().skip(1).map(|&l| count_compositions(l, len)).product()
}

/// The configuration with every particle on the last site.
#[must_use]
pub fn condensed_configuration(m: &MultiplicityArray, len: usize) -> Configuration {
    let mut sites = vec![LocalState::empty(m.n()); len.max(1)];
    let last = sites.len() - 1;
    sites[last] = LocalState { mult: m.m().to_vec() };
    Configuration { sites }
}

/// Scales a one-dimensional kernel to total `#B(m)` and checks integrality.
pub(crate) fn scale_to_normalization(
    kernel: Vec<Vec<BigRational>>,
    normalization: &BigInt,
) -> Result<Vec<BigInt>> {
    if kernel.len() != 1 {
        return Err(Error::KernelDimension(kernel.len()));
    }
    let v = kernel.into_iter().next().expect("one vector");
    let total: BigRational = v.iter().sum();
    if total.is_zero() {
        return Err(Error::NonIntegralWeight);
    }
    let factor = BigRational::from_integer(normalization.clone()) / total;
    v.into_iter()
        .map(|x| {
            let w = x * &factor;
            if w.is_integer() && w.is_positive() {
                Ok(w.to_integer())
            } else {
                Err(Error::NonIntegralWeight)
            }
        })
        .collect()
}

/// Exact steady state by solving `H P = 0`, using [`DEFAULT_SECTOR_LIMIT`].
pub fn steady_state_kernel(m: &MultiplicityArray, len: usize) -> Result<Distribution<Configuration>> {
    steady_state_kernel_with_limit(m, len, DEFAULT_SECTOR_LIMIT)
}

/// Exact steady state by solving `H P = 0`.
///
/// The kernel must be one-dimensional; the weights are scaled to sum to
/// `#B(m)` and must come out as positive integers.
pub fn steady_state_kernel_with_limit(
    m: &MultiplicityArray,
    len: usize,
    limit: u128,
) -> Result<Distribution<Configuration>> {
    let size = sector_size_u128(m, len);
    if size > limit {
        return Err(Error::SectorTooLarge { size, limit });
    }
    let states = enumerate_sector(m, len);
    let h = build_h_tazrp(m, len);
    let norm = BigInt::from(count_b(m, len));
    let weights = scale_to_normalization(h.kernel(), &norm)?;
    debug_assert_eq!(weights.iter().sum::<BigInt>(), norm);
    let w = weights.into_iter().map(BigRational::from_integer).collect();
    Distribution::new(states, w, norm)
}

/// Total over the cyclic orbit: `P̄ = Σ_j C^j ξ` for a table `ξ` of representatives.
#[must_use]
pub fn expand_cyclic(table: &[(Configuration, BigRational)]) -> Vec<(Configuration, BigRational)> {
    let mut out: Vec<(Configuration, BigRational)> = Vec::new();
    for (c, w) in table {
        let mut cur = c.clone();
        for _ in 0..c.len() {
            match out.iter_mut().find(|(s, _)| *s == cur) {
                Some((_, acc)) => *acc += w,
                None => out.push((cur.clone(), w.clone())),
            }
            cur = cyclic_shift(&cur);
        }
    }
    out
}
