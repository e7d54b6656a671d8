//! The projection `π: B(m) → S(m)` from the `n`-line process to the TAZRP.
//!
//! [`pi`] composes combinatorial R's: `π^a(x)` is obtained by carrying `x^a`
//! leftward through `x^{a−1}, …, x^1`, and `π(x) = φ^{-1}(π^1(x),…,π^n(x))`,
//! where `φ` sends a configuration to its partial sums `σ^a + … + σ^n`.
//! [`pi_queue`] and [`pi_embed`] are the dot-diagram versions (queueing and
//! nested embedding); they exist as independent checks of [`pi`].

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::combinatorial_r::{apply_r, capture, dot_positions};
use crate::crystal::{count_b, Composition, MultiplicityArray};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::multiline::{b_index, build_h_lp, enumerate_b, set_a, MultilineState};
use crate::tazrp::{apply_tau, build_h_tazrp, enumerate_sector, sector_index, Configuration, LocalState};

/// `φ(σ)`: row `a` holds `σ^a_i + … + σ^n_i`. Needs a basic configuration.
pub fn phi(c: &Configuration) -> Result<MultilineState> {
    let n = c.n();
    let mut rows = Vec::with_capacity(n);
    let mut acc = vec![0u32; c.len()];
    for a in (1..=n).rev() {
        for (i, s) in c.sites().iter().enumerate() {
            acc[i] += s.multiplicities()[a - 1];
        }
        rows.push(Composition::from_vec_unchecked(acc.clone()));
    }
    rows.reverse();
    MultilineState::new(rows)
}

/// `φ^{-1}`: `σ^a_i = x^a_i − x^{a+1}_i`. Fails unless `x^1 ≥ x^2 ≥ … ≥ x^n`.
pub fn phi_inverse(x: &MultilineState) -> Result<Configuration> {
    rows_to_configuration(x.rows())
}

fn rows_to_configuration(rows: &[Composition]) -> Result<Configuration> {
    let n = rows.len();
    let len = rows[0].len();
    let mut sites = Vec::with_capacity(len);
    for i in 0..len {
        let mut mult = Vec::with_capacity(n);
        for a in 0..n {
            let hi = rows[a].entries()[i];
            let lo = rows.get(a + 1).map_or(0, |r| r.entries()[i]);
            if hi < lo {
                return Err(Error::DominanceViolated { row: a + 1 });
            }
            mult.push(hi - lo);
        }
        sites.push(LocalState::new(mult));
    }
    Configuration::new(sites)
}

/// The successive R-moves computing `π^a(x)`: entry `t` is the pair
/// `(v, u)` produced when the carried element passes row `a−1−t`.
pub fn pi_a_steps(x: &MultilineState, a: usize) -> Result<Vec<(Composition, Composition)>> {
    if a == 0 || a > x.n() {
        return Err(Error::IndexOutOfRange { index: a as u128, len: x.n() as u128 });
    }
    let mut v = x.row(a).clone();
    let mut steps = Vec::with_capacity(a - 1);
    for b in (1..a).rev() {
        let (nv, u) = apply_r(x.row(b), &v)?;
        steps.push((nv.clone(), u));
        v = nv;
    }
    Ok(steps)
}

/// `π^a(x)`, depending only on the rows `1..=a`.
pub fn pi_a(x: &MultilineState, a: usize) -> Result<Composition> {
    let steps = pi_a_steps(x, a)?;
    Ok(steps.last().map_or_else(|| x.row(a).clone(), |(v, _)| v.clone()))
}

/// `(π^1(x), …, π^n(x))`.
pub fn pi_rows(x: &MultilineState) -> Result<Vec<Composition>> {
    (1..=x.n()).map(|a| pi_a(x, a)).collect()
}

/// `π(x)`.
pub fn pi(x: &MultilineState) -> Result<Configuration> {
    rows_to_configuration(&pi_rows(x)?)
}

/// Queueing form of `π` with the default left-to-right dot order.
pub fn pi_queue(x: &MultilineState) -> Result<Configuration> {
    pi_queue_with(x, &mut |_| {})
}

/// Queueing form of `π`. For `a = n, …, 1` every remaining dot of row `a`
/// draws an H-line down to row 1, each step following the pairing rule among
/// the dots not yet erased; the dots reached in row 1 become species `a`, and
/// every dot on the way is erased. `permute` may reorder the dot positions
/// before each pairing step.
pub fn pi_queue_with(
    x: &MultilineState,
    permute: &mut dyn FnMut(&mut [usize]),
) -> Result<Configuration> {
    let n = x.n();
    let len = x.len();
    let mut free: Vec<Vec<u32>> = x.rows().iter().map(|r| r.entries().to_vec()).collect();
    let mut mult = vec![vec![0u32; n]; len];
    for a in (1..=n).rev() {
        let mut carried = core::mem::replace(&mut free[a - 1], vec![0; len]);
        for b in (1..a).rev() {
            let mut dots = dot_positions(&Composition::from_vec_unchecked(carried.clone()));
            permute(&mut dots);
            let got = capture(&free[b - 1], dots)
                .ok_or(Error::NotStrictlyLarger { larger: 0, smaller: 0 })?;
            for (f, g) in free[b - 1].iter_mut().zip(&got) {
                *f -= g;
            }
            carried = got;
        }
        for i in 0..len {
            mult[i][a - 1] = carried[i];
        }
    }
    Configuration::new(mult.into_iter().map(LocalState::new).collect())
}

/// The embedding rule `Φ_{k, bottom}`: raises every species of `prev` by one,
/// lets the species `k, k−1, …, 2` (larger first) capture dots of `bottom` by
/// the pairing rule, and labels the remaining dots of `bottom` as species 1.
pub fn embed(prev: &Configuration, bottom: &Composition) -> Result<Configuration> {
    if prev.len() != bottom.len() {
        return Err(Error::LengthMismatch { left: prev.len(), right: bottom.len() });
    }
    let total: u32 = prev.species_totals().iter().sum();
    if bottom.weight() < total {
        return Err(Error::NotStrictlyLarger {
            larger: u64::from(bottom.weight()),
            smaller: u64::from(total),
        });
    }
    let k = prev.n() + 1;
    let len = prev.len();
    let mut free = bottom.entries().to_vec();
    let mut mult = vec![vec![0u32; k]; len];
    for a in (2..=k).rev() {
        let dots = dot_positions(&prev.species_row(a - 1));
        let got = capture(&free, dots).expect("enough dots in the bottom row");
        for i in 0..len {
            free[i] -= got[i];
            mult[i][a - 1] = got[i];
        }
    }
    for i in 0..len {
        mult[i][0] = free[i];
    }
    Configuration::new(mult.into_iter().map(LocalState::new).collect())
}

/// `π` as the nested embedding `Φ_{n,x^1} ∘ … ∘ Φ_{2,x^{n−1}}(x^n)`.
pub fn pi_embed(x: &MultilineState) -> Result<Configuration> {
    let n = x.n();
    let top = x.row(n);
    let mut c = Configuration::new(top.entries().iter().map(|&v| LocalState::new(vec![v])).collect())?;
    for k in 2..=n {
        c = embed(&c, x.row(n - k + 1))?;
    }
    Ok(c)
}

/// All `x ∈ B(m)` with `π(x) = c`.
pub fn preimages(c: &Configuration) -> Result<Vec<MultilineState>> {
    let m = MultiplicityArray::new(c.species_totals())?;
    let mut out = Vec::new();
    for x in enumerate_b(&m, c.len()) {
        if &pi(&x)? == c {
            out.push(x);
        }
    }
    Ok(out)
}

/// Fibre sizes `P(σ) = #π^{-1}(σ)` over [`enumerate_sector`] order.
pub fn fiber_counts(m: &MultiplicityArray, len: usize, limit: u128) -> Result<Vec<u64>> {
    let size = u128::try_from(count_b(m, len)).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SectorTooLarge { size, limit });
    }
    let states = enumerate_sector(m, len);
    let mut counts = vec![0u64; states.len()];
    for x in enumerate_b(m, len) {
        counts[sector_index(&pi(&x)?)?] += 1;
    }
    Ok(counts)
}

/// Steady state as preimage counts of the uniform measure on `B(m)`.
pub fn steady_state_by_counting(
    m: &MultiplicityArray,
    len: usize,
    limit: u128,
) -> Result<Distribution<Configuration>> {
    let counts = fiber_counts(m, len, limit)?;
    let states = enumerate_sector(m, len);
    let w = counts.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect();
    Distribution::new(states, w, BigInt::from(count_b(m, len)))
}

/// Checks `π ∘ T^k_{i,a} = τ̃^k_{i,a} ∘ π` for every move of `x`, where
/// `τ̃^k_{i,1} = τ^k_i` and `τ̃^k_{i,a}` is the identity for `a ≥ 2`.
pub fn intertwines_at(x: &MultilineState) -> Result<bool> {
    let base = pi(x)?;
    for p in set_a(x) {
        let y = crate::multiline::evolve(x, p.site, p.a, p.k);
        let want = if p.a == 1 { apply_tau(&base, p.site, p.k) } else { base.clone() };
        if pi(&y)? != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The matrix identity `π H_LP = H_TAZRP π`, with `π` the 0/1 projection matrix.
pub fn intertwining_check(m: &MultiplicityArray, len: usize, limit: u128) -> Result<bool> {
    let h_lp = build_h_lp(m, len, limit)?;
    let h_tz = build_h_tazrp(m, len);
    let states = enumerate_b(m, len);
    let mut proj = crate::linalg::SparseMatrix::zeros(h_tz.nrows(), states.len());
    for (col, x) in states.iter().enumerate() {
        debug_assert_eq!(b_index(x)?, col);
        proj.add(sector_index(&pi(x)?)?, col, 1);
    }
    Ok(proj.mul(&h_lp) == h_tz.mul(&proj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> MultilineState {
        s.parse().unwrap()
    }

    fn conf(s: &str, n: usize) -> Configuration {
        Configuration::parse(s, n).unwrap()
    }

    #[test]
    fn phi_examples() {
        let x = phi(&conf("2|23|1|113", 3)).unwrap();
        assert_eq!(x, st("0101/1201/1213"));
        assert_eq!(phi_inverse(&x).unwrap(), conf("2|23|1|113", 3));
        assert_eq!(phi(&conf("1|2|23", 3)).unwrap(), st("001/012/112"));
        assert!(phi_inverse(&st("10/02")).is_err());
    }

    #[test]
    fn projection_example() {
        let x = st("001/210/202/114");
        let rows: Vec<_> = pi_rows(&x).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(rows, ["114", "112", "111", "001"]);
        assert_eq!(pi(&x).unwrap().to_string(), "3|3|1124");
        assert_eq!(pi_queue(&x).unwrap().to_string(), "3|3|1124");
        assert_eq!(pi_embed(&x).unwrap().to_string(), "3|3|1124");
        let steps = pi_a_steps(&x, 2).unwrap();
        assert_eq!(steps, [("112".parse().unwrap(), "204".parse().unwrap())]);
    }

    #[test]
    fn embedding_step() {
        let x = st("001/210/202/114");
        let upper = MultilineState::new(x.rows()[1..].to_vec()).unwrap();
        let prev = pi(&upper).unwrap();
        assert_eq!(prev, conf("13|-|22", 3));
        let out = embed(&prev, x.row(1)).unwrap();
        assert_eq!(out.to_string(), "3|3|1124");
    }

    #[test]
    fn counting_small() {
        let m: MultiplicityArray = "1,2,1".parse().unwrap();
        let d = steady_state_by_counting(&m, 3, 1_000_000).unwrap();
        let w = d.weight_of(&conf("1|2|23", 3)).unwrap();
        assert_eq!(w, &BigRational::from_integer(5.into()));
        assert_eq!(preimages(&conf("1|2|23", 3)).unwrap().len(), 5);
    }

    #[test]
    fn intertwining_small() {
        let m: MultiplicityArray = "1,1".parse().unwrap();
        assert!(intertwining_check(&m, 2, 1_000).unwrap());
    }
}
