//! Reference steady states for small sectors, given as weighted orbit
//! representatives under the cyclic shift.

use num_rational::BigRational;
use tazrp_core::tazrp::{expand_cyclic, Configuration};
use tazrp_core::MultiplicityArray;

pub struct GoldenSector {
    pub m: MultiplicityArray,
    pub len: usize,
    pub weights: Vec<(Configuration, BigRational)>,
}

const TABLE: &str = include_str!("../data/golden.txt");

pub fn sectors() -> Vec<GoldenSector> {
    TABLE
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let mut parts = line.split(';').map(str::trim);
            let m: MultiplicityArray = parts.next().unwrap().parse().unwrap();
            let len: usize = parts.next().unwrap().parse().unwrap();
            let reps: Vec<(Configuration, BigRational)> = parts
                .next()
                .unwrap()
                .split_whitespace()
                .map(|tok| {
                    let (w, c) = tok.split_once('*').unwrap();
                    let c = Configuration::parse(c, m.n()).unwrap();
                    (c, w.parse().unwrap())
                })
                .collect();
            GoldenSector { m, len, weights: expand_cyclic(&reps) }
        })
        .collect()
}
