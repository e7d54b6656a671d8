//! The `tazrp` command line.
//!
//! Exit codes: 0 on success, 1 when a verification or method comparison
//! fails, 2 on unusable input.

use std::ffi::OsString;
use std::io::Write;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use tazrp_core::combinatorial_r::{apply_r, apply_r_ny, apply_r_pl, yang_baxter_sides};
use tazrp_core::crystal::enumerate_compositions;
use tazrp_core::matrix_product::{steady_state_ctm, steady_state_mp, MpOptions, DEFAULT_MAX_SPECIES};
use tazrp_core::multiline::{enumerate_b, map_s, map_t, set_a, set_b, verify_uniform, MultilineState};
use tazrp_core::projection::{intertwining_check, pi, pi_embed, pi_queue, pi_rows, steady_state_by_counting};
use tazrp_core::tazrp::{steady_state_kernel_with_limit, DEFAULT_SECTOR_LIMIT};
use tazrp_core::{Composition, Configuration, Distribution, Error, MultiplicityArray};

use crate::output::{render, Format, Values};
use crate::simulate::{simulate_lp_sector, simulate_tazrp_sector, tv_distance, SimOptions};

/// Environment variable holding the default thread count.
pub const THREADS_ENV: &str = "TAZRP_THREADS";

#[derive(Parser, Debug)]
#[command(name = "tazrp", version, about = "Exact steady states of the multispecies TAZRP")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Null vector of the Markov generator.
    Kernel,
    /// Preimage counts of the projection from the n-line process.
    Count,
    /// Crystal corner transfer matrix sum.
    Ctm,
    /// Trace of the oscillator matrix product.
    Mp,
}

impl Method {
    const ALL: [Method; 4] = [Method::Kernel, Method::Count, Method::Ctm, Method::Mp];

    fn name(self) -> &'static str {
        match self {
            Method::Kernel => "kernel",
            Method::Count => "count",
            Method::Ctm => "ctm",
            Method::Mp => "mp",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    YangBaxter,
    BijectionTs,
    UniformLp,
    Intertwining,
    FourWay,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Process {
    Tazrp,
    Lp,
}

#[derive(clap::Args, Debug, Clone)]
struct SectorArgs {
    /// Species multiplicities, e.g. 1,2,1.
    #[arg(long)]
    m: MultiplicityArray,
    /// Number of sites.
    #[arg(long = "L", value_parser = clap::value_parser!(u32).range(1..))]
    len: u32,
    /// Largest state space any method may enumerate.
    #[arg(long, default_value_t = DEFAULT_SECTOR_LIMIT)]
    limit: u128,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact steady-state weights of a sector.
    Steady {
        #[command(flatten)]
        sector: SectorArgs,
        #[arg(long, value_enum, default_value_t = Method::Kernel)]
        method: Method,
        /// Run all four methods and require identical results.
        #[arg(long)]
        all_methods: bool,
        /// Fock space cutoff for the matrix product (default: total particle number).
        #[arg(long)]
        cutoff: Option<u32>,
        /// Allow the matrix product beyond the default species limit.
        #[arg(long, default_value_t = DEFAULT_MAX_SPECIES)]
        max_species: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, env = THREADS_ENV, default_value_t = 1)]
        threads: usize,
    },
    /// Combinatorial R on x ⊗ y, printed as y' / x'.
    R { x: Composition, y: Composition },
    /// Projection of an n-line state to a TAZRP configuration.
    Project {
        /// Rows top first, as 001/210/202/114 or [[0,0,1],[2,1,0],...].
        state: String,
        /// Also print every π^a and the two queueing forms.
        #[arg(long)]
        all: bool,
    },
    /// Exhaustive invariant checks.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        sector: SectorArgs,
    },
    /// Gillespie simulation of the TAZRP or the n-line process.
    Simulate {
        #[arg(long, value_enum, default_value_t = Process::Tazrp)]
        process: Process,
        #[command(flatten)]
        sector: SectorArgs,
        #[arg(long, default_value_t = 100_000)]
        events: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000)]
        burn_in: u64,
        /// Independent trajectories, one per thread.
        #[arg(long, env = THREADS_ENV, default_value_t = 1)]
        threads: usize,
        /// Report the total-variation distance to the exact steady state on stderr.
        #[arg(long)]
        compare: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Input(#[from] Error),
    #[error("{0}")]
    Check(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(
                Error::CutoffUnstable { .. } | Error::KernelDimension(_) | Error::NonIntegralWeight,
            ) => 1,
            Failure::Input(_) => 2,
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Steady { sector, method, all_methods, cutoff, max_species, format, threads } => {
            let mp = MpOptions { cutoff, check_stability: true, max_species };
            steady(&sector, method, all_methods, mp, format, threads, out)
        }
        Command::R { x, y } => cmd_r(&x, &y, out),
        Command::Project { state, all } => project(&state, all, out),
        Command::Verify { suite, sector } => verify(suite, &sector, out),
        Command::Simulate { process, sector, events, seed, burn_in, threads, compare, format } => {
            let opts = SimOptions { events, burn_in, seed, trajectories: threads.max(1) };
            simulate(process, &sector, &opts, compare, format, out, err)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Check(format!("write failed: {e}")))
}

fn solve(sector: &SectorArgs, method: Method, mp: MpOptions) -> tazrp_core::Result<Distribution<Configuration>> {
    let (m, len) = (&sector.m, sector.len as usize);
    match method {
        Method::Kernel => steady_state_kernel_with_limit(m, len, sector.limit),
        Method::Count => steady_state_by_counting(m, len, sector.limit),
        Method::Ctm => steady_state_ctm(m, len),
        Method::Mp => steady_state_mp(m, len, mp),
    }
}

fn steady(
    sector: &SectorArgs,
    method: Method,
    all_methods: bool,
    mp: MpOptions,
    format: Format,
    threads: usize,
    out: &mut dyn Write,
) -> Outcome {
    let d = if all_methods {
        let results: Vec<(Method, tazrp_core::Result<Distribution<Configuration>>)> = if threads > 1 {
            thread::scope(|s| {
                let hs: Vec<_> = Method::ALL.map(|me| (me, s.spawn(move || solve(sector, me, mp)))).into();
                hs.into_iter().map(|(me, h)| (me, h.join().expect("solver thread panicked"))).collect()
            })
        } else {
            Method::ALL.iter().map(|&me| (me, solve(sector, me, mp))).collect()
        };
        let mut resolved = Vec::new();
        for (me, r) in results {
            resolved.push((me, r?));
        }
        let (_, reference) = &resolved[0];
        let mut diffs = Vec::new();
        for (me, d) in &resolved[1..] {
            for ((c, a), (_, b)) in reference.iter().zip(d.iter()) {
                if a != b {
                    diffs.push(format!("{c}: kernel {a} vs {} {b}", me.name()));
                }
            }
        }
        if !diffs.is_empty() {
            return Err(Failure::Check(format!("methods disagree:\n{}", diffs.join("\n"))));
        }
        resolved.swap_remove(0).1
    } else {
        solve(sector, method, mp)?
    };
    emit(out, &render(&d, &sector.m, sector.len as usize, format, Values::Exact))
}

/// `R(x ⊗ y)` by the pairing rule, also when `x` is the lighter factor: then
/// the result is the unique `y' ⊗ x'` that the pairing rule sends to `x ⊗ y`.
fn pairing_rule(x: &Composition, y: &Composition) -> tazrp_core::Result<(Composition, Composition)> {
    if x.weight() >= y.weight() {
        return if x.weight() == y.weight() { Ok((x.clone(), y.clone())) } else { apply_r_ny(x, y) };
    }
    let len = x.len();
    for y2 in enumerate_compositions(y.weight(), len) {
        let x2: Option<Vec<u32>> = (0..len)
            .map(|i| (x.entries()[i] + y.entries()[i]).checked_sub(y2.entries()[i]))
            .collect();
        let Some(x2) = x2 else { continue };
        let x2 = Composition::new(x2)?;
        if apply_r_ny(&y2, &x2)? == (x.clone(), y.clone()) {
            return Ok((y2, x2));
        }
    }
    Err(Error::Unsupported("no preimage under the pairing rule".into()))
}

fn cmd_r(x: &Composition, y: &Composition, out: &mut dyn Write) -> Outcome {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() }.into());
    }
    let ny = pairing_rule(x, y)?;
    let pl = if x.weight() == y.weight() { apply_r(x, y)? } else { apply_r_pl(x, y)? };
    emit(out, &format!("{} / {}\n", ny.0, ny.1))?;
    emit(out, &format!("pairing rule:      {} / {}\n", ny.0, ny.1))?;
    emit(out, &format!("piecewise-linear:  {} / {}\n", pl.0, pl.1))?;
    if ny != pl {
        return Err(Failure::Check("the two algorithms disagree".into()));
    }
    Ok(())
}

fn parse_state(text: &str) -> tazrp_core::Result<MultilineState> {
    let t = text.trim();
    if t.starts_with('[') {
        let matrix: Vec<Vec<u32>> = serde_json::from_str(t).map_err(|e| Error::Parse {
            input: t.to_string(),
            position: e.column().saturating_sub(1),
            reason: format!("expected a JSON matrix of nonnegative integers ({e})"),
        })?;
        MultilineState::from_matrix_top_first(matrix)
    } else {
        t.parse()
    }
}

fn project(text: &str, all: bool, out: &mut dyn Write) -> Outcome {
    let x = parse_state(text)?;
    let p = pi(&x)?;
    emit(out, &format!("{p}\n"))?;
    if all {
        for (a, r) in pi_rows(&x)?.iter().enumerate() {
            emit(out, &format!("pi^{} = {r}\n", a + 1))?;
        }
        emit(out, &format!("queue = {}\n", pi_queue(&x)?))?;
        emit(out, &format!("embed = {}\n", pi_embed(&x)?))?;
    }
    Ok(())
}

fn check_bijection(m: &MultiplicityArray, len: usize, limit: u128) -> Result<(bool, String), Error> {
    if len < 2 {
        return Err(Error::Unsupported("moves need at least two sites".into()));
    }
    let size = tazrp_core::crystal::count_b(m, len);
    if size > limit.into() {
        return Err(Error::SectorTooLarge { size: size.to_u128().unwrap_or(u128::MAX), limit });
    }
    let states = enumerate_b(m, len);
    let mut moves = 0usize;
    for x in &states {
        let (a, b) = (set_a(x), set_b(x));
        if a.len() != b.len() {
            return Ok((false, format!("|A_x| = {} but |B_x| = {} at {x}", a.len(), b.len())));
        }
        for p in a {
            let (q, y) = map_t(x, p)?;
            if map_s(q, &y)? != (x.clone(), p) {
                return Ok((false, format!("S∘T fails at {x}, {p}")));
            }
            moves += 1;
        }
        for q in b {
            let (y, p) = map_s(q, x)?;
            if map_t(&y, p)? != (q, x.clone()) {
                return Ok((false, format!("T∘S fails at {x}, {q}")));
            }
        }
    }
    Ok((true, format!("{} states, {moves} moves", states.len())))
}

fn check_yang_baxter(m: &MultiplicityArray, len: usize) -> Result<(bool, String), Error> {
    let ell = m.ell();
    if ell.len() < 3 {
        return Err(Error::Unsupported("yang-baxter needs three line weights (n ≥ 3)".into()));
    }
    let rows: Vec<Vec<Composition>> = ell[..3].iter().map(|&l| enumerate_compositions(l, len)).collect();
    let mut count = 0usize;
    for x in &rows[0] {
        for y in &rows[1] {
            for z in &rows[2] {
                let (l, r) = yang_baxter_sides(x, y, z)?;
                if l != r {
                    return Ok((false, format!("fails at {x} ⊗ {y} ⊗ {z}")));
                }
                count += 1;
            }
        }
    }
    Ok((true, format!("{count} triples with weights {},{},{}", ell[0], ell[1], ell[2])))
}

fn check_four_way(sector: &SectorArgs) -> Result<(bool, String), Error> {
    let mp = MpOptions::default();
    let reference = solve(sector, Method::Kernel, mp)?;
    for me in &Method::ALL[1..] {
        let d = solve(sector, *me, mp)?;
        if d != reference {
            return Ok((false, format!("{} differs from kernel", me.name())));
        }
    }
    Ok((true, format!("{} configurations", reference.len())))
}

fn verify(suite: Suite, sector: &SectorArgs, out: &mut dyn Write) -> Outcome {
    let suites: Vec<Suite> = if suite == Suite::All {
        vec![Suite::YangBaxter, Suite::BijectionTs, Suite::UniformLp, Suite::Intertwining, Suite::FourWay]
    } else {
        vec![suite]
    };
    let (m, len) = (&sector.m, sector.len as usize);
    let mut failed = false;
    for s in suites {
        let name = s.to_possible_value().expect("named").get_name().to_string();
        let result = match s {
            Suite::YangBaxter => check_yang_baxter(m, len),
            Suite::BijectionTs => check_bijection(m, len, sector.limit),
            Suite::UniformLp => verify_uniform(m, len, sector.limit).map(|ok| (ok, String::new())),
            Suite::Intertwining => intertwining_check(m, len, sector.limit).map(|ok| (ok, String::new())),
            Suite::FourWay => check_four_way(sector),
            Suite::All => unreachable!(),
        };
        let (ok, detail) = match result {
            Ok(r) => r,
            Err(e) if suite == Suite::All && matches!(e, Error::Unsupported(_)) => {
                emit(out, &format!("SKIP {name} m={m} L={len}: {e}\n"))?;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let tag = if ok { "PASS" } else { "FAIL" };
        let detail = if detail.is_empty() { String::new() } else { format!(" ({detail})") };
        emit(out, &format!("{tag} {name} m={m} L={len}{detail}\n"))?;
        failed |= !ok;
    }
    if failed {
        return Err(Failure::Check("verification failed".into()));
    }
    Ok(())
}

fn simulate(
    process: Process,
    sector: &SectorArgs,
    opts: &SimOptions,
    compare: bool,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let (m, len) = (&sector.m, sector.len as usize);
    let tv_report = |tv: tazrp_core::Result<num_rational::BigRational>, err: &mut dyn Write| -> Outcome {
        let tv = tv?.to_f64().unwrap_or(f64::NAN);
        let _ = writeln!(err, "tv_distance {tv:.6}");
        Ok(())
    };
    match process {
        Process::Tazrp => {
            let rep = simulate_tazrp_sector(m, len, opts)?;
            emit(out, &render(&rep.distribution, m, len, format, Values::Float))?;
            if compare {
                let exact = steady_state_kernel_with_limit(m, len, sector.limit)?;
                tv_report(tv_distance(&rep.distribution, &exact), err)?;
            }
        }
        Process::Lp => {
            let rep = simulate_lp_sector(m, len, opts)?;
            emit(out, &render(&rep.distribution, m, len, format, Values::Float))?;
            if compare {
                let space = rep.distribution.space().to_vec();
                let ones = vec![num_bigint::BigInt::from(1); space.len()];
                tv_report(tv_distance(&rep.distribution, &Distribution::from_integers(space, ones)), err)?;
            }
        }
    }
    Ok(())
}
