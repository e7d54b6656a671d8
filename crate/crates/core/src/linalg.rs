//! Sparse integer matrices and an exact null-space solver.
//!
//! The solver eliminates on integer rows: a row is reduced against a pivot row
//! by `row ← p·row − a·pivot` and then divided by the gcd of its entries, so no
//! fractions appear and the entries stay small. Forward elimination leaves an
//! echelon form keyed by leading column; null vectors follow by back
//! substitution over the rationals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Column-major sparse matrix with `i64` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: vec![BTreeMap::new(); cols] }
    }

    #[must_use]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Adds `v` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows, "row out of range");
        let e = self.cols[c].entry(r).or_insert(0);
        *e += v;
        if *e == 0 {
            self.cols[c].remove(&r);
        }
    }

    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.cols[c].get(&r).copied().unwrap_or(0)
    }

    /// Nonzero entries of column `c` as `(row, value)`.
    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.cols[c].iter().map(|(&r, &v)| (r, v))
    }

    #[must_use]
    pub fn column_sums(&self) -> Vec<i64> {
        self.cols.iter().map(|c| c.values().sum()).collect()
    }

    #[must_use]
    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    /// `self · v`.
    #[must_use]
    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.ncols());
        let mut out = vec![0; self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            if v[c] == 0 {
                continue;
            }
            for (&r, &a) in col {
                out[r] += a * v[c];
            }
        }
        out
    }

    /// `self · other`.
    #[must_use]
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.nrows());
        let mut out = SparseMatrix::zeros(self.rows, other.ncols());
        for (c, col) in other.cols.iter().enumerate() {
            for (&k, &b) in col {
                for (&r, &a) in &self.cols[k] {
                    out.add(r, c, a * b);
                }
            }
        }
        out
    }

    /// Connected components of the undirected graph with an edge between `r` and `c` for
    /// every nonzero off-diagonal entry. Needs a square matrix.
    #[must_use]
    pub fn connected_components(&self) -> usize {
        let n = self.ncols();
        assert_eq!(n, self.rows, "square matrix");
        let mut adj = vec![Vec::new(); n];
        for (c, col) in self.cols.iter().enumerate() {
            for &r in col.keys().filter(|&&r| r != c) {
                adj[r].push(c);
                adj[c].push(r);
            }
        }
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    fn integer_rows(&self) -> Vec<BTreeMap<usize, BigInt>> {
        let mut rows = vec![BTreeMap::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (&r, &v) in col {
                rows[r].insert(c, BigInt::from(v));
            }
        }
        rows
    }

    /// A basis of the right null space, one rational vector per free column.
    #[must_use]
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let n = self.ncols();
        let mut pivots: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
        for mut row in self.integer_rows() {
            while let Some(&lead) = row.keys().next() {
                match pivots.get(&lead) {
                    Some(prow) => reduce(&mut row, lead, prow),
                    None => {
                        normalize(&mut row);
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); n];
                v[f] = BigRational::one();
                for (&pc, prow) in pivots.iter().rev() {
                    let s: BigRational = prow
                        .iter()
                        .skip(1)
                        .filter(|(c, _)| !v[**c].is_zero())
                        .map(|(c, a)| &v[*c] * a)
                        .sum();
                    if !s.is_zero() {
                        v[pc] = -s / &prow[&pc];
                    }
                }
                v
            })
            .collect()
    }
}

/// Eliminates column `pc` of `row` using `pivot` (whose entry at `pc` is nonzero).
fn reduce(row: &mut BTreeMap<usize, BigInt>, pc: usize, pivot: &BTreeMap<usize, BigInt>) {
    let Some(a) = row.get(&pc).cloned() else { return };
    let p = &pivot[&pc];
    let g = a.gcd(p);
    let (fa, fp) = (p / &g, &a / &g);
    for v in row.values_mut() {
        *v *= &fa;
    }
    for (&c, pv) in pivot {
        let e = row.entry(c).or_insert_with(BigInt::zero);
        *e -= &fp * pv;
        if e.is_zero() {
            row.remove(&c);
        }
    }
    normalize(row);
}

fn normalize(row: &mut BTreeMap<usize, BigInt>) {
    let mut g = BigInt::zero();
    for v in row.values() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    if row.values().next().is_some_and(Signed::is_negative) {
        g = -g;
    }
    for v in row.values_mut() {
        *v /= &g;
    }
}
