//! Continuous-time Monte Carlo for the TAZRP and the n-line process.
//!
//! Every enabled move fires at rate 1, so a state with `r` enabled moves is
//! held for an `Exp(r)` time and then jumps by a uniformly chosen move. The
//! random source is ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64`; trajectory `t` of a run uses stream `t`, so results are
//! bit-reproducible for a given seed and trajectory count.

use std::thread;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::Exp1;
use tazrp_core::multiline::{b_index, enumerate_b, map_t, set_a, MultilineState, TriplePointer};
use tazrp_core::tazrp::{apply_tau, condensed_configuration, enumerate_sector, sector_index};
use tazrp_core::{Configuration, Distribution, Error, MultiplicityArray, Result};

pub use tazrp_core::tv_distance;

/// Run length and seeding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimOptions {
    /// Jumps recorded after burn-in, per trajectory.
    pub events: u64,
    /// Jumps discarded at the start of each trajectory.
    pub burn_in: u64,
    pub seed: u64,
    /// Independent trajectories, run on separate threads and merged.
    pub trajectories: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { events: 100_000, burn_in: 1_000, seed: 0, trajectories: 1 }
    }
}

/// Empirical occupation measure of a run.
#[derive(Clone, Debug)]
pub struct SimReport<S> {
    /// Time fractions over the enumerated state space (normalization 1).
    pub distribution: Distribution<S>,
    /// Total recorded time over all trajectories.
    pub elapsed: f64,
    /// Recorded jumps over all trajectories.
    pub events: u64,
}

/// TAZRP moves `(i, k)`: the `k` smallest particles of site `i+1` hop to site `i`.
#[must_use]
pub fn enabled_moves_tazrp(c: &Configuration) -> Vec<(usize, u32)> {
    let len = c.len();
    (0..len)
        .flat_map(|i| (1..=c.sites()[(i + 1) % len].size()).map(move |k| (i, k)))
        .collect()
}

/// Line process moves: the set `A_x`.
#[must_use]
pub fn enabled_moves_lp(x: &MultilineState) -> Vec<TriplePointer> {
    set_a(x)
}

trait Chain: Sync {
    type State: Clone + Send + Sync;
    fn rate(&self, s: &Self::State) -> u64;
    fn jump(&self, s: &Self::State, r: u64) -> Self::State;
    fn index(&self, s: &Self::State) -> usize;
}

struct Tazrp;

impl Chain for Tazrp {
    type State = Configuration;

    fn rate(&self, c: &Configuration) -> u64 {
        u64::from(c.move_count())
    }

    fn jump(&self, c: &Configuration, mut r: u64) -> Configuration {
        let len = c.len();
        for i in 0..len {
            let size = u64::from(c.sites()[(i + 1) % len].size());
            if r < size {
                return apply_tau(c, i, r as u32 + 1);
            }
            r -= size;
        }
        unreachable!("move index below the rate")
    }

    fn index(&self, c: &Configuration) -> usize {
        sector_index(c).expect("state stays in its sector")
    }
}

struct LineProcess;

impl Chain for LineProcess {
    type State = MultilineState;

    fn rate(&self, x: &MultilineState) -> u64 {
        if x.len() < 2 { 0 } else { set_a(x).len() as u64 }
    }

    fn jump(&self, x: &MultilineState, r: u64) -> MultilineState {
        let p = set_a(x)[r as usize];
        map_t(x, p).expect("move drawn from A_x").1
    }

    fn index(&self, x: &MultilineState) -> usize {
        b_index(x).expect("state stays in B(m)")
    }
}

fn trajectory<C: Chain>(
    chain: &C,
    initial: &C::State,
    size: usize,
    opts: &SimOptions,
    stream: u64,
) -> Result<Vec<f64>> {
    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    let mut occ = vec![0.0f64; size];
    let mut s = initial.clone();
    for step in 0..opts.burn_in + opts.events {
        let rate = chain.rate(&s);
        if rate == 0 {
            return Err(Error::Unsupported("absorbing state reached".into()));
        }
        let hold: f64 = rng.sample::<f64, _>(Exp1) / rate as f64;
        if step >= opts.burn_in {
            occ[chain.index(&s)] += hold;
        }
        let r = rng.random_range(0..rate);
        s = chain.jump(&s, r);
    }
    Ok(occ)
}

fn run<C: Chain>(
    chain: &C,
    initial: &C::State,
    space: Vec<C::State>,
    opts: &SimOptions,
) -> Result<SimReport<C::State>>
where
    C::State: PartialEq,
{
    let size = space.len();
    let runs = opts.trajectories.max(1);
    let parts: Vec<Result<Vec<f64>>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..runs)
            .map(|t| scope.spawn(move || trajectory(chain, initial, size, opts, t as u64)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("trajectory thread panicked")).collect()
    });
    let mut occ = vec![0.0f64; size];
    for part in parts {
        for (o, v) in occ.iter_mut().zip(part?) {
            *o += v;
        }
    }
    let elapsed: f64 = occ.iter().sum();
    let weights = occ
        .iter()
        .map(|&t| {
            let frac = if elapsed > 0.0 { t / elapsed } else { 0.0 };
            BigRational::from_float(frac).ok_or(Error::Overflow)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimReport {
        distribution: Distribution::new(space, weights, BigInt::from(1))?,
        elapsed,
        events: opts.events * runs as u64,
    })
}

/// Simulates the TAZRP in the sector of `initial`.
pub fn simulate_tazrp(initial: &Configuration, opts: &SimOptions) -> Result<SimReport<Configuration>> {
    let m = MultiplicityArray::new(initial.species_totals())?;
    run(&Tazrp, initial, enumerate_sector(&m, initial.len()), opts)
}

/// Simulates the n-line process in the set `B(m)` containing `initial`.
pub fn simulate_lp(initial: &MultilineState, opts: &SimOptions) -> Result<SimReport<MultilineState>> {
    let m = initial.multiplicities();
    run(&LineProcess, initial, enumerate_b(&m, initial.len()), opts)
}

/// TAZRP run started from the condensed configuration of the sector.
pub fn simulate_tazrp_sector(m: &MultiplicityArray, len: usize, opts: &SimOptions) -> Result<SimReport<Configuration>> {
    simulate_tazrp(&condensed_configuration(m, len), opts)
}

/// Line process run started from the first state of `B(m)`.
pub fn simulate_lp_sector(m: &MultiplicityArray, len: usize, opts: &SimOptions) -> Result<SimReport<MultilineState>> {
    let first = enumerate_b(m, len).into_iter().next().ok_or(Error::Unsupported("empty B(m)".into()))?;
    simulate_lp(&first, opts)
}
