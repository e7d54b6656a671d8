//! Acceptance suite: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/golden.rs"]
mod golden;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use tazrp::simulate::{simulate_lp_sector, simulate_tazrp_sector, tv_distance, SimOptions};
use tazrp_core::combinatorial_r::{apply_r, apply_r_ny, apply_r_pl, yang_baxter_check};
use tazrp_core::crystal::{count_b, enumerate_compositions};
use tazrp_core::matrix_product::{
    steady_prob_ctm, steady_prob_mp, steady_prob_mp_at, steady_state_ctm, steady_state_mp, MpOptions,
    OscillatorElement as E,
};
use tazrp_core::multiline::{
    enumerate_b, map_s, map_t, set_a, set_b, verify_uniform, verify_uniform_by_elimination, MultilineState,
    TriplePointer,
};
use tazrp_core::projection::{intertwining_check, pi, preimages, steady_state_by_counting};
use tazrp_core::tazrp::{condensation_probability, condensed_configuration, steady_state_kernel};
use tazrp_core::{Composition, Configuration, Distribution, MultiplicityArray};

/// Exact criteria compare integers; this is the only numeric tolerance.
const TV_TOLERANCE: f64 = 0.02;
const SIM_EVENTS: u64 = 1_000_000;
const SIM_BURN_IN: u64 = 10_000;
const SIM_SEED: u64 = 20_240_601;
const BIJECTION_LIMIT: u128 = 10_000;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn ma(s: &str) -> MultiplicityArray {
    s.parse().unwrap()
}

fn comp(s: &str) -> Composition {
    s.parse().unwrap()
}

fn conf(s: &str, n: usize) -> Configuration {
    Configuration::parse(s, n).unwrap()
}

fn state(s: &str) -> MultilineState {
    s.parse().unwrap()
}

fn criterion_one() -> Check {
    let sectors = golden::sectors();
    let mut coefficients = 0;
    for g in &sectors {
        let d = steady_state_kernel(&g.m, g.len).map_err(|e| e.to_string())?;
        ensure(d.len() == g.weights.len(), || format!("m={} L={}: sector size", g.m, g.len))?;
        for (c, w) in &g.weights {
            let got = d.weight_of(c);
            ensure(got == Some(w), || format!("m={} L={} {c}: expected {w}, got {got:?}", g.m, g.len))?;
            coefficients += 1;
        }
    }
    let half_case = steady_state_kernel(&ma("2,2"), 2).map_err(|e| e.to_string())?;
    let w = half_case.weight_of(&conf("12|12", 2)).cloned();
    ensure(w == Some(BigRational::from_integer(1.into())), || format!("P(12,12) = {w:?}"))?;
    Ok(format!("{} sectors, {coefficients} coefficients, P(12|12)=1", sectors.len()))
}

fn four_way_sectors() -> Vec<(MultiplicityArray, usize)> {
    let mut v: Vec<_> = golden::sectors().into_iter().map(|g| (g.m, g.len)).collect();
    v.push((ma("1,1"), 5));
    v
}

fn criterion_two() -> Check {
    let mut configs = 0;
    let sectors = four_way_sectors();
    for (m, len) in &sectors {
        let err = |e: tazrp_core::Error| format!("m={m} L={len}: {e}");
        let kernel = steady_state_kernel(m, *len).map_err(err)?;
        let methods: [(&str, Distribution<Configuration>); 3] = [
            ("count", steady_state_by_counting(m, *len, u128::MAX).map_err(err)?),
            ("ctm", steady_state_ctm(m, *len).map_err(err)?),
            ("mp", steady_state_mp(m, *len, MpOptions::default()).map_err(err)?),
        ];
        for (name, d) in &methods {
            for ((c, a), (c2, b)) in kernel.iter().zip(d.iter()) {
                ensure(c == c2 && a == b, || format!("m={m} L={len} {c}: kernel {a} vs {name} {b}"))?;
            }
            ensure(d.len() == kernel.len(), || format!("m={m} L={len}: {name} size"))?;
        }
        configs += kernel.len();
    }
    Ok(format!("{} sectors, {configs} configurations, 4 methods", sectors.len()))
}

fn criterion_three() -> Check {
    let e = |x: tazrp_core::Error| x.to_string();
    let target = conf("1|2|23", 3);
    let fibre = preimages(&target).map_err(e)?;
    let listed = ["100/300/112", "010/300/112", "001/300/112", "010/201/112", "001/201/112"];
    ensure(fibre.len() == 5, || format!("{} preimages", fibre.len()))?;
    for s in listed {
        ensure(fibre.contains(&state(s)), || format!("preimage {s} missing"))?;
    }
    ensure(steady_prob_ctm(&target).map_err(e)? == 5, || "ctm value".into())?;
    ensure(steady_prob_mp(&target, None).map_err(e)? == 5, || "mp value".into())?;
    let k = steady_state_kernel(&ma("1,2,1"), 3).map_err(e)?;
    ensure(k.weight_of(&target) == Some(&BigRational::from_integer(5.into())), || "kernel value".into())?;

    for (s, w) in [("-|-|-|12", 4u128), ("-|-|1|2", 3), ("-|1|-|2", 2), ("-|-|2|1", 1)] {
        let got = steady_prob_mp(&conf(s, 2), None).map_err(e)?;
        ensure(got == w, || format!("trace at {s}: {got}"))?;
    }

    let (ap, am, kk) = (E::a_plus(), E::a_minus(), E::k());
    let t1 = E::product([&ap, &ap, &kk, &am, &am, &ap, &am]).trace().map_err(e)?;
    let t2 = E::product([&ap, &ap, &am, &kk, &am, &ap, &am]).trace().map_err(e)?;
    ensure(t1 == BigInt::from(1) && t2 == BigInt::from(0), || format!("oscillator traces {t1}, {t2}"))?;

    let p = pi(&state("001/210/202/114")).map_err(e)?;
    ensure(p == conf("3|3|1124", 4), || format!("projection {p}"))?;

    let (x, y) = (comp("03221"), comp("20210"));
    let want = (comp("02111"), comp("21320"));
    ensure(apply_r_ny(&x, &y).map_err(e)? == want, || "pairing rule".into())?;
    ensure(apply_r_pl(&x, &y).map_err(e)? == want, || "piecewise-linear formula".into())?;

    let x = state("001/210/202/114");
    let tp = |t: (usize, usize, u32)| TriplePointer::one_based(t.0, t.1, t.2);
    let a_want: Vec<_> =
        [(1, 1, 1), (2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 1, 4), (2, 2, 1), (3, 1, 1)].map(tp).to_vec();
    let b_want: Vec<_> =
        [(1, 1, 1), (1, 2, 1), (1, 3, 1), (1, 3, 2), (3, 1, 1), (3, 1, 2), (3, 4, 1)].map(tp).to_vec();
    ensure(set_a(&x) == a_want, || format!("A_x = {:?}", set_a(&x)))?;
    ensure(set_b(&x) == b_want, || format!("B_x = {:?}", set_b(&x)))?;

    let images = [
        ((1, 1, 1), (1, 1, 1), "001/210/202/204"),
        ((2, 1, 1), (2, 2, 1), "001/210/211/123"),
        ((2, 1, 2), (2, 2, 1), "001/210/211/132"),
        ((2, 1, 3), (2, 2, 1), "001/210/211/141"),
        ((2, 1, 4), (2, 2, 1), "001/210/211/150"),
        ((2, 2, 1), (2, 2, 1), "001/210/211/114"),
        ((3, 1, 1), (3, 1, 1), "001/210/202/015"),
    ];
    for (from, to, img) in images {
        let (q, yy) = map_t(&x, tp(from)).map_err(e)?;
        ensure(q == tp(to) && yy == state(img), || format!("T at {from:?}: {q} {yy}"))?;
    }
    Ok("P(1|2|23)=5 four ways, traces 4,3,2,1 and 1,0, projection, R example, A_x/B_x, 7 T-images".into())
}

fn criterion_four() -> Check {
    let e = |x: tazrp_core::Error| x.to_string();
    let mut yb = 0;
    let rows: Vec<Vec<Composition>> = [4, 3, 2].iter().map(|&l| enumerate_compositions(l, 3)).collect();
    for x in &rows[0] {
        for y in &rows[1] {
            for z in &rows[2] {
                ensure(yang_baxter_check(x, y, z).map_err(e)?, || format!("Yang-Baxter at {x},{y},{z}"))?;
                yb += 1;
            }
        }
    }

    let mut pairs = 0;
    for len in 1..=4 {
        for l in 1..=5u32 {
            for m in 0..l.min(4) {
                for x in enumerate_compositions(l, len) {
                    for y in enumerate_compositions(m, len) {
                        let ny = apply_r_ny(&x, &y).map_err(e)?;
                        ensure(ny == apply_r_pl(&x, &y).map_err(e)?, || format!("NY ≠ PL at {x},{y}"))?;
                        let back = apply_r(&ny.0, &ny.1).map_err(e)?;
                        ensure(back == (x.clone(), y.clone()), || format!("R∘R ≠ id at {x},{y}"))?;
                        pairs += 1;
                    }
                }
            }
        }
    }

    let mut sectors = Vec::new();
    for n in 1..=3usize {
        let mut m = vec![1u32; n];
        loop {
            for len in 2..=4 {
                sectors.push((MultiplicityArray::new(m.clone()).unwrap(), len));
            }
            let Some(pos) = m.iter().rposition(|&v| v < 3) else { break };
            m[pos] += 1;
            for v in &mut m[pos + 1..] {
                *v = 1;
            }
        }
    }
    sectors.push((ma("1,1,1,1"), 2));
    sectors.push((ma("1,1,1,1"), 3));
    let mut states = 0;
    let mut bij_sectors = 0;
    for (m, len) in sectors {
        if count_b(&m, len) > BIJECTION_LIMIT.into() {
            continue;
        }
        bij_sectors += 1;
        for x in enumerate_b(&m, len) {
            let (a, b) = (set_a(&x), set_b(&x));
            ensure(a.len() == b.len(), || format!("|A_x| ≠ |B_x| at {x}"))?;
            for p in a {
                let (q, y) = map_t(&x, p).map_err(e)?;
                ensure(map_s(q, &y).map_err(e)? == (x.clone(), p), || format!("S∘T at {x} {p}"))?;
            }
            for q in b {
                let (y, p) = map_s(q, &x).map_err(e)?;
                ensure(map_t(&y, p).map_err(e)? == (q, x.clone()), || format!("T∘S at {x} {q}"))?;
            }
            states += 1;
        }
    }

    let mut lp = 0;
    for s in ["1,1", "2,1", "1,1,1"] {
        for len in 1..=3 {
            let m = ma(s);
            ensure(verify_uniform_by_elimination(&m, len, u128::MAX).map_err(e)?, || format!("H_LP kernel m={m} L={len}"))?;
            ensure(verify_uniform(&m, len, u128::MAX).map_err(e)?, || format!("H_LP connectivity m={m} L={len}"))?;
            ensure(intertwining_check(&m, len, u128::MAX).map_err(e)?, || format!("intertwining m={m} L={len}"))?;
            lp += 1;
        }
    }

    let mut cond = 0;
    for (m, len) in four_way_sectors() {
        let d = steady_state_kernel(&m, len).map_err(e)?;
        let want = BigRational::from_integer(condensation_probability(&m, len).into());
        let max = d.weights().iter().max().cloned().unwrap();
        ensure(max == want, || format!("condensation m={m} L={len}: max {max} vs {want}"))?;
        let at = d.weight_of(&condensed_configuration(&m, len)).cloned();
        ensure(at == Some(want), || format!("condensed weight m={m} L={len}"))?;
        cond += 1;
    }
    Ok(format!(
        "YB {yb} triples, NY=PL and R∘R {pairs} pairs, T/S on {states} states in {bij_sectors} sectors, \
         H_LP/intertwining {lp} sectors, condensation {cond} sectors"
    ))
}

fn criterion_five() -> Check {
    let mut configs = 0;
    for (m, len) in four_way_sectors() {
        let cut = m.total();
        for c in tazrp_core::tazrp::enumerate_sector(&m, len) {
            let low = steady_prob_mp_at(&c, cut).map_err(|e| e.to_string())?;
            let high = steady_prob_mp_at(&c, cut + 1).map_err(|e| e.to_string())?;
            ensure(low == high, || format!("{c}: {low} at C={cut}, {high} at C={}", cut + 1))?;
            configs += 1;
        }
    }
    Ok(format!("{configs} configurations stable at C=ℓ_1 vs ℓ_1+1"))
}

fn criterion_six() -> Check {
    let e = |x: tazrp_core::Error| x.to_string();
    let m = ma("1,1");
    let opts = SimOptions { events: SIM_EVENTS, burn_in: SIM_BURN_IN, seed: SIM_SEED, trajectories: 1 };
    let exact = steady_state_kernel(&m, 3).map_err(e)?;
    let sim = simulate_tazrp_sector(&m, 3, &opts).map_err(e)?;
    let tv_tazrp = tv_distance(&sim.distribution, &exact).map_err(e)?.to_f64().unwrap();
    let lp = simulate_lp_sector(&m, 3, &opts).map_err(e)?;
    let space = lp.distribution.space().to_vec();
    let uniform = Distribution::from_integers(space.clone(), vec![BigInt::from(1); space.len()]);
    let tv_lp = tv_distance(&lp.distribution, &uniform).map_err(e)?.to_f64().unwrap();
    let summary = format!("TV tazrp {tv_tazrp:.5}, TV line process {tv_lp:.5} (tolerance {TV_TOLERANCE})");
    ensure(tv_tazrp < TV_TOLERANCE && tv_lp < TV_TOLERANCE, || summary.clone())?;
    Ok(summary)
}

fn run(number: usize, name: &str, budget: Duration, f: fn() -> Check) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panic".into())));
    let elapsed = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over time budget {budget:?}")),
        Err(d) => (false, d),
    };
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {number}: {name} [{:.2}s] {detail}", elapsed.as_secs_f64());
    ok
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("golden tables", Duration::from_secs(10), criterion_one),
        ("four-way agreement", Duration::from_secs(120), criterion_two),
        ("point values", Duration::from_secs(60), criterion_three),
        ("invariant suites", Duration::from_secs(300), criterion_four),
        ("cutoff stability", Duration::from_secs(120), criterion_five),
        ("simulation consistency", Duration::from_secs(30), criterion_six),
    ];
    let mut all = true;
    for (i, (name, budget, f)) in criteria.into_iter().enumerate() {
        all &= run(i + 1, name, budget, f);
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
