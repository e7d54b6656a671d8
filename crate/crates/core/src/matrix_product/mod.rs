//! Corner transfer matrix and matrix product formulas for the steady state.
//!
//! * [`steady_prob_ctm`] counts the crystal configurations whose corner
//!   boundary values are `φ^1(σ), …, φ^n(σ)`.
//! * [`steady_prob_mp`] evaluates `P(σ_1,…,σ_L) = Tr(X_{σ_1} ⋯ X_{σ_L})` with
//!   the q=0 oscillator corner transfer matrices of [`fock::x_sigma`].
//!
//! # Cutoff
//!
//! The Fock spaces are truncated at `C`. Every term of the trace is
//! nonnegative, so truncation can only lose weight. The occupation numbers
//! that contribute count H-lines crossing a corner and stay below `ℓ_1`, so
//! the default `C = ℓ_1` is exact; [`steady_prob_mp`] still recomputes at
//! `C + 1` and reports [`Error::CutoffUnstable`] on any difference.

pub mod fock;
pub mod oscillator;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorial_r::apply_r;
use crate::crystal::{count_b, enumerate_compositions, Composition, MultiplicityArray};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::projection::phi;
use crate::tazrp::{enumerate_sector, Configuration, LocalState};

pub use fock::{trace_of_product, x_sigma, FockOperator};
pub use oscillator::{rhat, Monomial, OscillatorElement};

/// Largest `n` accepted by default by the matrix product evaluation.
pub const DEFAULT_MAX_SPECIES: usize = 4;

fn check_weights(a: &Composition, b: &Composition, i: &Composition, j: &Composition) -> Result<()> {
    for c in [b, i, j] {
        if c.len() != a.len() {
            return Err(Error::LengthMismatch { left: a.len(), right: c.len() });
        }
    }
    if a.weight() != i.weight() {
        return Err(Error::WeightMismatch { expected: i.weight().into(), found: a.weight().into() });
    }
    if b.weight() != j.weight() {
        return Err(Error::WeightMismatch { expected: j.weight().into(), found: b.weight().into() });
    }
    if i.weight() <= j.weight() {
        return Err(Error::NotStrictlyLarger { larger: i.weight().into(), smaller: j.weight().into() });
    }
    Ok(())
}

/// The oscillator product `R̂^{a_1,b_1}_{i_1,j_1} ⋯ R̂^{a_L,b_L}_{i_L,j_L}`.
pub fn r_product(
    a: &Composition,
    b: &Composition,
    i: &Composition,
    j: &Composition,
) -> Result<OscillatorElement> {
    check_weights(a, b, i, j)?;
    let factors: Vec<OscillatorElement> = (0..a.len())
        .map(|r| rhat(a.entries()[r], b.entries()[r], i.entries()[r], j.entries()[r]))
        .collect();
    Ok(OscillatorElement::product(&factors))
}

/// `R^{a,b}_{i,j}` as the trace of [`r_product`]; needs `ℓ > m`.
pub fn r_element_mp(a: &Composition, b: &Composition, i: &Composition, j: &Composition) -> Result<u8> {
    let t = r_product(a, b, i, j)?.trace()?;
    t.to_u8().filter(|&v| v <= 1).ok_or(Error::Overflow)
}

/// `R(i ⊗ j) = b ⊗ a` for `weight(i) > weight(j)` by the fixed point of
/// `c_{r−1} = j_r + (c_r − i_r)_+` around the ring; then
/// `b_r = min(i_r, c_r)` and `a_r = j_r + (i_r − c_r)_+`.
pub fn r_fixed_point(i: &Composition, j: &Composition) -> Result<(Composition, Composition)> {
    if i.len() != j.len() {
        return Err(Error::LengthMismatch { left: i.len(), right: j.len() });
    }
    if i.weight() <= j.weight() {
        return Err(Error::NotStrictlyLarger { larger: i.weight().into(), smaller: j.weight().into() });
    }
    let len = i.len();
    let (is, js) = (i.entries(), j.entries());
    // c[r] is the carry entering site r (0-based) from the right
    let sweep = |start: u32| -> Vec<u32> {
        let mut c = vec![0u32; len + 1];
        c[len] = start;
        for r in (0..len).rev() {
            c[r] = js[r] + c[r + 1].saturating_sub(is[r]);
        }
        c
    };
    let w = sweep(0)[0];
    let c = sweep(w);
    if c[0] != w {
        return Err(Error::Unsupported("carry has no fixed point".into()));
    }
    let b: Vec<u32> = (0..len).map(|r| is[r].min(c[r + 1])).collect();
    let a: Vec<u32> = (0..len).map(|r| js[r] + is[r].saturating_sub(c[r + 1])).collect();
    Ok((Composition::new(b)?, Composition::new(a)?))
}

/// Crystal corner transfer matrix sum: the number of `x ∈ B(m)` whose
/// corner values `π^a(x)` equal `φ^a(σ)` for every `a`.
pub fn steady_prob_ctm(c: &Configuration) -> Result<u64> {
    let target = phi(c)?;
    let n = target.n();
    let len = c.len();
    let ell: Vec<u32> = target.rows().iter().map(Composition::weight).collect();
    let candidates: Vec<Vec<Composition>> = ell.iter().map(|&l| enumerate_compositions(l, len)).collect();
    let mut rows = vec![target.row(1).clone()];
    let mut count = 0u64;
    ctm_level(2, n, &candidates, target.rows(), &mut rows, &mut count)?;
    Ok(count)
}

fn ctm_level(
    a: usize,
    n: usize,
    candidates: &[Vec<Composition>],
    corner: &[Composition],
    rows: &mut Vec<Composition>,
    count: &mut u64,
) -> Result<()> {
    if a > n {
        *count += 1;
        return Ok(());
    }
    for cand in &candidates[a - 1] {
        // carry line a through lines a−1, …, 1
        let mut v = cand.clone();
        for b in (1..a).rev() {
            v = apply_r(&rows[b - 1], &v)?.0;
        }
        if v == corner[a - 1] {
            rows.push(cand.clone());
            ctm_level(a + 1, n, candidates, corner, rows, count)?;
            rows.pop();
        }
    }
    Ok(())
}

/// Cache of corner transfer matrices keyed by local state.
#[derive(Default)]
pub struct XCache {
    cutoff: u32,
    ops: BTreeMap<LocalState, FockOperator>,
}

impl XCache {
    #[must_use]
    pub fn new(cutoff: u32) -> Self {
        XCache { cutoff, ops: BTreeMap::new() }
    }

    #[must_use]
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// `Tr(X_{σ_1} ⋯ X_{σ_L})` at this cache's cutoff.
    pub fn trace(&mut self, c: &Configuration) -> Result<u128> {
        for s in c.sites() {
            if !self.ops.contains_key(s) {
                let x = x_sigma(s, self.cutoff)?;
                self.ops.insert(s.clone(), x);
            }
        }
        let ops: Vec<&FockOperator> = c.sites().iter().map(|s| &self.ops[s]).collect();
        trace_of_product(&ops)
    }
}

fn check_species(c: &Configuration, max_species: usize) -> Result<()> {
    if c.n() > max_species {
        return Err(Error::Unsupported(format!(
            "matrix product evaluation limited to n ≤ {max_species} (got {})",
            c.n()
        )));
    }
    Ok(())
}

/// `Tr(X_{σ_1} ⋯ X_{σ_L})` at the given cutoff, without the stability check.
pub fn steady_prob_mp_at(c: &Configuration, cutoff: u32) -> Result<u128> {
    if c.n() == 1 {
        return Ok(1);
    }
    XCache::new(cutoff).trace(c)
}

/// Matrix product weight with cutoff `ℓ_1` (or `cutoff` if given), checked
/// against the value at one step higher.
pub fn steady_prob_mp(c: &Configuration, cutoff: Option<u32>) -> Result<u128> {
    check_species(c, DEFAULT_MAX_SPECIES)?;
    if c.n() == 1 {
        return Ok(1);
    }
    let cut = cutoff.unwrap_or_else(|| c.species_totals().iter().sum());
    let low = steady_prob_mp_at(c, cut)?;
    let high = steady_prob_mp_at(c, cut + 1)?;
    if low != high {
        return Err(Error::CutoffUnstable { cutoff: cut as usize, low, high });
    }
    Ok(low)
}

/// Options for sector-wide matrix product evaluation.
#[derive(Clone, Copy, Debug)]
pub struct MpOptions {
    pub cutoff: Option<u32>,
    pub check_stability: bool,
    pub max_species: usize,
}

impl Default for MpOptions {
    fn default() -> Self {
        MpOptions { cutoff: None, check_stability: true, max_species: DEFAULT_MAX_SPECIES }
    }
}

/// Matrix product weights over a whole sector, sharing `X_σ` between
/// configurations.
pub fn steady_state_mp(
    m: &MultiplicityArray,
    len: usize,
    opts: MpOptions,
) -> Result<Distribution<Configuration>> {
    let states = enumerate_sector(m, len);
    if m.n() > opts.max_species {
        return Err(Error::Unsupported(format!(
            "matrix product evaluation limited to n ≤ {} (got {})",
            opts.max_species,
            m.n()
        )));
    }
    let cut = opts.cutoff.unwrap_or_else(|| m.total());
    let mut low = XCache::new(cut);
    let mut high = XCache::new(cut + 1);
    let mut weights = Vec::with_capacity(states.len());
    for c in &states {
        let v = if m.n() == 1 { 1 } else { low.trace(c)? };
        if opts.check_stability && m.n() > 1 {
            let h = high.trace(c)?;
            if h != v {
                return Err(Error::CutoffUnstable { cutoff: cut as usize, low: v, high: h });
            }
        }
        weights.push(BigRational::from_integer(BigInt::from(v)));
    }
    Distribution::new(states, weights, BigInt::from(count_b(m, len)))
}

/// Crystal CTM weights over a whole sector.
pub fn steady_state_ctm(m: &MultiplicityArray, len: usize) -> Result<Distribution<Configuration>> {
    let states = enumerate_sector(m, len);
    let weights = states
        .iter()
        .map(|c| steady_prob_ctm(c).map(|v| BigRational::from_integer(BigInt::from(v))))
        .collect::<Result<Vec<_>>>()?;
    Distribution::new(states, weights, BigInt::from(count_b(m, len)))
}

/// True when the trace of `e` is zero or `e` has no identity part.
#[must_use]
pub fn has_finite_trace(e: &OscillatorElement) -> bool {
    e.coefficient(Monomial::Id).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorial_r::r_element;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn conf(s: &str, n: usize) -> Configuration {
        Configuration::parse(s, n).unwrap()
    }

    #[test]
    fn r_element_by_trace() {
        assert_eq!(r_element_mp(&c("1201"), &c("0021"), &c("0121"), &c("1101")).unwrap(), 1);
        assert_eq!(r_element_mp(&c("1111"), &c("0111"), &c("0121"), &c("1101")).unwrap(), 0);
        assert!(r_element_mp(&c("11"), &c("11"), &c("11"), &c("11")).is_err());
    }

    #[test]
    fn fixed_point_route() {
        assert_eq!(r_fixed_point(&c("03221"), &c("20210")).unwrap(), (c("02111"), c("21320")));
        for i in enumerate_compositions(3, 3) {
            for j in enumerate_compositions(1, 3) {
                let (b, a) = r_fixed_point(&i, &j).unwrap();
                assert_eq!(r_element(&a, &b, &i, &j).unwrap(), 1);
                for aa in enumerate_compositions(3, 3) {
                    for bb in enumerate_compositions(1, 3) {
                        assert_eq!(
                            r_element_mp(&aa, &bb, &i, &j).unwrap(),
                            r_element(&aa, &bb, &i, &j).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn point_values() {
        assert_eq!(steady_prob_ctm(&conf("1|2|23", 3)).unwrap(), 5);
        assert_eq!(steady_prob_mp(&conf("1|2|23", 3), None).unwrap(), 5);
        for (s, w) in [("-|-|-|12", 4), ("-|-|1|2", 3), ("-|1|-|2", 2), ("-|-|2|1", 1)] {
            assert_eq!(steady_prob_mp(&conf(s, 2), None).unwrap(), w, "{s}");
        }
        assert_eq!(steady_prob_mp(&conf("1|11", 1), None).unwrap(), 1);
    }

    #[test]
    fn sector_sum() {
        let m: MultiplicityArray = "1,1".parse().unwrap();
        let d = steady_state_mp(&m, 3, MpOptions::default()).unwrap();
        assert_eq!(d.total().to_integer(), BigInt::from(18));
    }
}
