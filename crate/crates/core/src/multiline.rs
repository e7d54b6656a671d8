//! The `n`-line process on `B(m) = B_{ℓ_1} ⊗ … ⊗ B_{ℓ_n}`.
//!
//! A state is an `n × L` tableau of dot counts. Row `a` (1-based) is `x^a`,
//! with row 1 at the bottom; the text form lists the rows top first joined by
//! `/`, so `001/210/202/114` has `x^1 = 114` and `x^4 = 001`. Rows `0` and
//! `n+1` are identically zero.
//!
//! Pointers `(i,a,k)` index the moves. Their `site` field is 0-based, while
//! their `Display` form is 1-based to match the usual tableau labelling.
//!
//! The moves `T^k_{i,a}` require `L ≥ 2`; on a single site the dynamics is
//! trivial.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::crystal::{count_b, count_compositions, enumerate_compositions, rank, Composition, MultiplicityArray};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// An element of `B(m)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultilineState {
    rows: Vec<Composition>,
}

impl MultilineState {
    /// Rows bottom-up (`rows[0] = x^1`). Weights must strictly decrease
    /// and the top row must be nonzero.
    pub fn new(rows: Vec<Composition>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Unsupported("multiline state with no rows".into()));
        };
        let len = first.len();
        for r in &rows {
            if r.len() != len {
                return Err(Error::LengthMismatch { left: len, right: r.len() });
            }
        }
        for a in 0..rows.len() {
            let next = rows.get(a + 1).map_or(0, Composition::weight);
            if rows[a].weight() <= next {
                return Err(Error::InvalidMultiplicity(format!(
                    "row weights must strictly decrease to a positive value (row {})",
                    a + 1
                )));
            }
        }
        Ok(MultilineState { rows })
    }

    /// From a matrix listed top row first.
    pub fn from_matrix_top_first(matrix: Vec<Vec<u32>>) -> Result<Self> {
        let mut rows = matrix.into_iter().map(Composition::new).collect::<Result<Vec<_>>>()?;
        rows.reverse();
        MultilineState::new(rows)
    }

    /// Rows bottom-up.
    #[must_use]
    pub fn rows(&self) -> &[Composition] {
        &self.rows
    }

    /// Row `a`, 1-based.
    #[must_use]
    pub fn row(&self, a: usize) -> &Composition {
        &self.rows[a - 1]
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of sites `L`.
    #[must_use]
    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `x^a_i` with `a ∈ [0, n+1]` and a cyclic 0-based site.
    #[must_use]
    pub fn x(&self, a: usize, i: isize) -> u32 {
        if a == 0 || a > self.n() {
            0
        } else {
            self.rows[a - 1].at(i)
        }
    }

    /// The multiplicity array `m_a = ℓ_a − ℓ_{a+1}`.
    #[must_use]
    pub fn multiplicities(&self) -> MultiplicityArray {
        let w: Vec<u32> = self.rows.iter().map(Composition::weight).collect();
        let m = (0..w.len()).map(|a| w[a] - w.get(a + 1).copied().unwrap_or(0)).collect();
        MultiplicityArray::new(m).expect("validated at construction")
    }

    /// Matrix of entries, top row first.
    #[must_use]
    pub fn to_matrix_top_first(&self) -> Vec<Vec<u32>> {
        self.rows.iter().rev().map(|r| r.entries().to_vec()).collect()
    }

    fn set(&mut self, a: usize, i: usize, v: u32) {
        let mut e = self.rows[a - 1].entries().to_vec();
        e[i] = v;
        self.rows[a - 1] = Composition::from_vec_unchecked(e);
    }
}

impl fmt::Display for MultilineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.rows.iter().rev().enumerate() {
            if k > 0 {
                f.write_str("/")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultilineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilineState({self})")
    }
}

impl FromStr for MultilineState {
    type Err = Error;

    /// Rows top first, separated by `/`.
    fn from_str(s: &str) -> Result<Self> {
        let mut offset = 0;
        let mut rows = Vec::new();
        for r in s.split('/') {
            let row = r.parse::<Composition>().map_err(|e| match e {
                Error::Parse { position, reason, .. } => {
                    Error::Parse { input: s.to_string(), position: offset + position, reason }
                }
                other => other,
            })?;
            rows.push(row);
            offset += r.len() + 1;
        }
        rows.reverse();
        MultilineState::new(rows)
    }
}

/// A move label `(i,a,k)`: site `i` (0-based), row `a` (1-based), size `k ≥ 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePointer {
    pub site: usize,
    pub a: usize,
    pub k: u32,
}

impl TriplePointer {
    /// From the 1-based site label used in tableau pictures.
    #[must_use]
    pub fn one_based(i: usize, a: usize, k: u32) -> Self {
        TriplePointer { site: i - 1, a, k }
    }
}

impl fmt::Display for TriplePointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.site + 1, self.a, self.k)
    }
}

impl fmt::Debug for TriplePointer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn pos(v: i64) -> u32 {
    u32::try_from(v.max(0)).expect("bounded by an entry")
}

/// Bound on `k` for `(i,a,k) ∈ A_x`: `(x^a_{i+1} − x^{a−1}_i)_+`.
#[must_use]
pub fn a_bound(x: &MultilineState, i: usize, a: usize) -> u32 {
    let i = i as isize;
    pos(i64::from(x.x(a, i + 1)) - i64::from(x.x(a - 1, i)))
}

/// Bound on `k` for `(i,a,k) ∈ B_x`: `(x^a_i − x^{a+1}_{i+1})_+`.
#[must_use]
pub fn b_bound(x: &MultilineState, i: usize, a: usize) -> u32 {
    let i = i as isize;
    pos(i64::from(x.x(a, i)) - i64::from(x.x(a + 1, i + 1)))
}

fn pointers(x: &MultilineState, bound: fn(&MultilineState, usize, usize) -> u32) -> Vec<TriplePointer> {
    let mut out = Vec::new();
    for site in 0..x.len() {
        for a in 1..=x.n() {
            for k in 1..=bound(x, site, a) {
                out.push(TriplePointer { site, a, k });
            }
        }
    }
    out
}

/// `A_x`, ordered by `(i, a, k)`.
#[must_use]
pub fn set_a(x: &MultilineState) -> Vec<TriplePointer> {
    pointers(x, a_bound)
}

/// `B_x`, ordered by `(i, a, k)`.
#[must_use]
pub fn set_b(x: &MultilineState) -> Vec<TriplePointer> {
    pointers(x, b_bound)
}

/// `|A_x|` without listing it.
#[must_use]
pub fn count_a(x: &MultilineState) -> u64 {
    (0..x.len())
        .flat_map(|i| (1..=x.n()).map(move |a| (i, a)))
        .map(|(i, a)| u64::from(a_bound(x, i, a)))
        .sum()
}

fn in_range(x: &MultilineState, p: TriplePointer) -> bool {
    p.site < x.len() && (1..=x.n()).contains(&p.a) && p.k >= 1
}

/// `T: (x, (i,a,k)) ↦ ((i,c,l), y)` for `(i,a,k) ∈ A_x`.
pub fn map_t(x: &MultilineState, p: TriplePointer) -> Result<(TriplePointer, MultilineState)> {
    if x.len() < 2 {
        return Err(Error::Unsupported("moves need at least two sites".into()));
    }
    if !in_range(x, p) || p.k > a_bound(x, p.site, p.a) {
        return Err(Error::NotInA);
    }
    let (i, a, k) = (p.site, p.a, p.k);
    let j = (i + 1) % x.len();
    let (si, sj) = (i as isize, j as isize);
    let n = x.n();
    let mut c = a;
    while x.x(c, si) < x.x(c + 1, sj) {
        c += 1;
    }
    debug_assert!(c <= n);
    let mut y = x.clone();
    y.set(a, i, x.x(a, si) + k);
    y.set(a, j, x.x(a, sj) - k);
    for b in a + 1..=c {
        y.set(b, i, x.x(b, si) + x.x(b, sj) - x.x(b - 1, si));
        y.set(b, j, x.x(b - 1, si));
    }
    let l = if c == a { k } else { x.x(c, sj) - x.x(c - 1, si) };
    Ok((TriplePointer { site: i, a: c, k: l }, y))
}

/// `S: ((i,a,k), x) ↦ (y, (i,d,m))` for `(i,a,k) ∈ B_x`; inverse of [`map_t`].
pub fn map_s(q: TriplePointer, x: &MultilineState) -> Result<(MultilineState, TriplePointer)> {
    if x.len() < 2 {
        return Err(Error::Unsupported("moves need at least two sites".into()));
    }
    if !in_range(x, q) || q.k > b_bound(x, q.site, q.a) {
        return Err(Error::NotInB);
    }
    let (i, a, k) = (q.site, q.a, q.k);
    let j = (i + 1) % x.len();
    let (si, sj) = (i as isize, j as isize);
    let mut d = a;
    while d > 1 && x.x(d - 1, si) > x.x(d, sj) {
        d -= 1;
    }
    let mut y = x.clone();
    y.set(a, i, x.x(a, si) - k);
    y.set(a, j, x.x(a, sj) + k);
    for b in d..a {
        y.set(b, i, x.x(b + 1, sj));
        y.set(b, j, x.x(b, si) + x.x(b, sj) - x.x(b + 1, sj));
    }
    let m = if d == a { k } else { x.x(d, si) - x.x(d + 1, sj) };
    Ok((y, TriplePointer { site: i, a: d, k: m }))
}

/// `T^k_{i,a}(x)`: the image under [`map_t`], or `x` itself when
/// `(i,a,k) ∉ A_x` (or `L = 1`).
#[must_use]
pub fn evolve(x: &MultilineState, site: usize, a: usize, k: u32) -> MultilineState {
    map_t(x, TriplePointer { site, a, k }).map_or_else(|_| x.clone(), |(_, y)| y)
}

/// `B(m)` as the product of per-row orders, row 1 varying slowest.
#[must_use]
pub fn enumerate_b(m: &MultiplicityArray, len: usize) -> Vec<MultilineState> {
    let len = len.max(1);
    let per: Vec<Vec<Composition>> = m.ell().iter().map(|&l| enumerate_compositions(l, len)).collect();
    let n = per.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(MultilineState { rows: (0..n).map(|a| per[a][idx[a]].clone()).collect() });
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

/// Position of `x` in [`enumerate_b`].
pub fn b_index(x: &MultilineState) -> Result<usize> {
    let mut idx: u128 = 0;
    for r in &x.rows {
        let size = u128::try_from(count_compositions(r.weight(), r.len())).map_err(|_| Error::Overflow)?;
        idx = idx
            .checked_mul(size)
            .and_then(|v| v.checked_add(rank(r).ok()?))
            .ok_or(Error::Overflow)?;
    }
    usize::try_from(idx).map_err(|_| Error::Overflow)
}

/// Generator `H_LP = Σ (T^k_{i,a} − 1)` on [`enumerate_b`] order.
pub fn build_h_lp(m: &MultiplicityArray, len: usize, limit: u128) -> Result<SparseMatrix> {
    let size = u128::try_from(count_b(m, len)).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SectorTooLarge { size, limit });
    }
    let states = enumerate_b(m, len);
    let mut h = SparseMatrix::zeros(states.len(), states.len());
    for (col, x) in states.iter().enumerate() {
        for p in set_a(x) {
            let y = evolve(x, p.site, p.a, p.k);
            h.add(b_index(&y)?, col, 1);
            h.add(col, col, -1);
        }
    }
    Ok(h)
}

/// True iff the kernel of `H_LP` is spanned by the all-ones vector.
///
/// `H_LP · 1 = 0` makes inflow equal outflow at every state, so every
/// communicating class is closed and the kernel dimension is the number of
/// connected components of the transition graph.
pub fn verify_uniform(m: &MultiplicityArray, len: usize, limit: u128) -> Result<bool> {
    let h = build_h_lp(m, len, limit)?;
    let ones = vec![1i64; h.ncols()];
    Ok(h.mul_vec(&ones).iter().all(|&e| e == 0) && h.connected_components() == 1)
}

/// [`verify_uniform`] by exact elimination: the null space of `H_LP` is
/// computed and compared with the span of the all-ones vector.
pub fn verify_uniform_by_elimination(m: &MultiplicityArray, len: usize, limit: u128) -> Result<bool> {
    let h = build_h_lp(m, len, limit)?;
    let kernel = h.kernel();
    if kernel.len() != 1 {
        return Ok(false);
    }
    let v = &kernel[0];
    let first = &v[0];
    Ok(v.iter().all(|e| e == first))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> MultilineState {
        s.parse().unwrap()
    }

    fn p(i: usize, a: usize, k: u32) -> TriplePointer {
        TriplePointer::one_based(i, a, k)
    }

    #[test]
    fn text_and_rows() {
        let x = st("001/210/202/114");
        assert_eq!(x.row(1).to_string(), "114");
        assert_eq!(x.row(4).to_string(), "001");
        assert_eq!(x.multiplicities().m(), &[2, 1, 2, 1]);
        assert_eq!(x.to_string(), "001/210/202/114");
        assert!("114/202".parse::<MultilineState>().is_err());
        match "001/21x".parse::<MultilineState>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn example_sets() {
        let x = st("001/210/202/114");
        let a: Vec<_> = [(1, 1, 1), (2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 1, 4), (2, 2, 1), (3, 1, 1)]
            .map(|(i, a, k)| p(i, a, k))
            .to_vec();
        let b: Vec<_> = [(1, 1, 1), (1, 2, 1), (1, 3, 1), (1, 3, 2), (3, 1, 1), (3, 1, 2), (3, 4, 1)]
            .map(|(i, a, k)| p(i, a, k))
            .to_vec();
        assert_eq!(set_a(&x), a);
        assert_eq!(set_b(&x), b);
        assert_eq!(count_a(&x), 7);
    }

    #[test]
    fn t_images() {
        let x = st("001/210/202/114");
        let (q, y) = map_t(&x, p(2, 1, 4)).unwrap();
        assert_eq!(q, p(2, 2, 1));
        assert_eq!(y, st("001/210/211/150"));
        assert_eq!(map_s(q, &y).unwrap(), (x.clone(), p(2, 1, 4)));
        assert!(map_t(&x, p(1, 2, 1)).is_err());
        assert_eq!(evolve(&x, 0, 2, 1), x);
    }

    #[test]
    fn iterated_moves() {
        let x = st("001/210/202/114");
        let twice = evolve(&evolve(&x, 1, 1, 1), 1, 1, 1);
        assert_eq!(evolve(&x, 1, 1, 2), twice);
    }

    #[test]
    fn enumeration_index() {
        let m: MultiplicityArray = "1,1".parse().unwrap();
        let b = enumerate_b(&m, 3);
        assert_eq!(b.len(), 18);
        for (i, x) in b.iter().enumerate() {
            assert_eq!(b_index(x).unwrap(), i);
        }
    }

    #[test]
    fn uniform_small() {
        for s in ["1,1", "1,1,1"] {
            let m: MultiplicityArray = s.parse().unwrap();
            assert!(verify_uniform(&m, 2, 1_000_000).unwrap());
            assert!(verify_uniform_by_elimination(&m, 2, 1_000_000).unwrap());
        }
    }
}
