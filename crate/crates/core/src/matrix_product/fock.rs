//! Truncated Fock-space operators and the corner transfer matrices `X_σ`.
//!
//! A basis vector of `F^{⊗N}` truncated at cutoff `C` is a tuple of
//! occupations in `[0, C]`, flattened in mixed radix `C+1` with factor 0 most
//! significant. Matrices are stored column by column.
//!
//! # Staircase layout
//!
//! `X_σ` is a sum over a staircase of `N = n(n−1)/2` vertices `(b, a)`,
//! `1 ≤ b < a ≤ n`: vertical line `a` crosses the horizontal lines
//! `b = 1, …, a−1` from the bottom up. With `p_a = σ^a + … + σ^n`:
//!
//! * the horizontal input of `(a−1, a)` is `p_{a−1}`; the horizontal input of
//!   `(b, a)` for `b < a−1` is the right output of `(b, a−1)`;
//! * the vertical input of `(1, a)` is a free label `j ≥ 0`; that of `(b, a)`
//!   for `b > 1` is the top output of `(b−1, a)`;
//! * the top output of `(a−1, a)` is pinned to `p_a`; right outputs of the
//!   last column are free.
//!
//! A vertex with inputs `(i, j)` and top output `t ≤ i` has right output
//! `i + j − t` and acts on its factor by `R̂ = (a⁺)^j k^{θ(i>t)} (a⁻)^t`.
//! Factors are ordered column by column from `a = n` down to `a = 2`, bottom
//! to top inside a column; for `n = 3` this is
//! `(1,3) ⊗ (2,3) ⊗ (1,2)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::tazrp::LocalState;

/// A square nonnegative integer matrix on `(C+1)^N` basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockOperator {
    cutoff: u32,
    factors: usize,
    columns: Vec<BTreeMap<usize, u128>>,
}

impl FockOperator {
    #[must_use]
    pub fn zeros(cutoff: u32, factors: usize) -> Self {
        let dim = (cutoff as usize + 1).pow(factors as u32);
        FockOperator { cutoff, factors, columns: vec![BTreeMap::new(); dim] }
    }

    #[must_use]
    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    #[must_use]
    pub fn factors(&self) -> usize {
        self.factors
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// Flattened index of an occupation tuple.
    #[must_use]
    pub fn index(&self, occ: &[u32]) -> usize {
        occ.iter().fold(0, |acc, &m| acc * (self.cutoff as usize + 1) + m as usize)
    }

    /// Occupation tuple of a flattened index.
    #[must_use]
    pub fn occupations(&self, mut idx: usize) -> Vec<u32> {
        let base = self.cutoff as usize + 1;
        let mut occ = vec![0; self.factors];
        for f in (0..self.factors).rev() {
            occ[f] = (idx % base) as u32;
            idx /= base;
        }
        occ
    }

    /// `⟨row|X|col⟩`.
    #[must_use]
    pub fn get(&self, row: usize, col: usize) -> u128 {
        self.columns[col].get(&row).copied().unwrap_or(0)
    }

    fn add(&mut self, row: usize, col: usize, v: u128) -> Result<()> {
        let e = self.columns[col].entry(row).or_insert(0);
        *e = e.checked_add(v).ok_or(Error::Overflow)?;
        Ok(())
    }

    /// `X · v` for a sparse vector.
    pub fn apply(&self, v: &BTreeMap<usize, u128>) -> Result<BTreeMap<usize, u128>> {
        let mut out = BTreeMap::new();
        for (&c, &x) in v {
            for (&r, &a) in &self.columns[c] {
                let e = out.entry(r).or_insert(0u128);
                *e = a.checked_mul(x).and_then(|p| e.checked_add(p)).ok_or(Error::Overflow)?;
            }
        }
        Ok(out)
    }

    /// Number of nonzero entries.
    #[must_use]
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }
}

/// `Tr(X_1 X_2 ⋯ X_L)` over the truncated space.
pub fn trace_of_product(ops: &[&FockOperator]) -> Result<u128> {
    let Some(first) = ops.first() else {
        return Err(Error::Unsupported("empty product".into()));
    };
    let dim = first.dim();
    let mut total: u128 = 0;
    for v in 0..dim {
        let mut vec = BTreeMap::new();
        vec.insert(v, 1u128);
        for op in ops.iter().rev() {
            vec = op.apply(&vec)?;
            if vec.is_empty() {
                break;
            }
        }
        if let Some(&d) = vec.get(&v) {
            total = total.checked_add(d).ok_or(Error::Overflow)?;
        }
    }
    Ok(total)
}

/// Staircase vertices `(b, a)` in tensor-factor order.
#[must_use]
pub fn factor_order(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in (2..=n).rev() {
        for b in 1..a {
            out.push((b, a));
        }
    }
    out
}

/// One vertex choice: the factor it acts on and its `R̂` exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct VertexOp {
    factor: usize,
    plus: u32,
    k: bool,
    minus: u32,
}

impl VertexOp {
    fn act(self, m: u32, cutoff: u32) -> Option<u32> {
        let m = m.checked_sub(self.minus)?;
        if self.k && m != 0 {
            return None;
        }
        let m = m + self.plus;
        (m <= cutoff).then_some(m)
    }
}

struct Staircase<'a> {
    n: usize,
    cutoff: u32,
    p: Vec<u32>,
    order: Vec<(usize, usize)>,
    slot: &'a dyn Fn(usize, usize) -> usize,
}

/// `X_σ` truncated at `cutoff`, summed over all staircase labels.
pub fn x_sigma(sigma: &LocalState, cutoff: u32) -> Result<FockOperator> {
    let n = sigma.n();
    if n < 2 {
        return Err(Error::Unsupported("corner transfer matrices need n ≥ 2".into()));
    }
    let mult = sigma.multiplicities();
    // p[a] = σ^a + … + σ^n, 1-based
    let mut p = vec![0u32; n + 2];
    for a in (1..=n).rev() {
        p[a] = p[a + 1] + mult[a - 1];
    }
    let order = factor_order(n);
    let pos: BTreeMap<(usize, usize), usize> = order.iter().enumerate().map(|(f, &v)| (v, f)).collect();
    let slot = move |b: usize, a: usize| pos[&(b, a)];
    let st = Staircase { n, cutoff, p, order: order.clone(), slot: &slot };
    let mut x = FockOperator::zeros(cutoff, order.len());
    let mut right = vec![vec![0u32; n + 1]; n + 1];
    let mut top = vec![vec![0u32; n + 1]; n + 1];
    let mut ops = Vec::with_capacity(order.len());
    walk(&st, 2, 1, &mut right, &mut top, &mut ops, &mut x)?;
    Ok(x)
}

/// Visits vertices column by column (`a = 2..=n`), bottom to top.
fn walk(
    st: &Staircase<'_>,
    a: usize,
    b: usize,
    right: &mut Vec<Vec<u32>>,
    top: &mut Vec<Vec<u32>>,
    ops: &mut Vec<VertexOp>,
    x: &mut FockOperator,
) -> Result<()> {
    if a > st.n {
        return accumulate(st, ops, x);
    }
    let (next_a, next_b) = if b + 1 < a { (a, b + 1) } else { (a + 1, 1) };
    let i = if b + 1 == a { st.p[b] } else { right[b][a - 1] };
    let js: Vec<u32> = if b == 1 { (0..=st.cutoff).collect() } else { vec![top[b - 1][a]] };
    for j in js {
        let tops: Vec<u32> = if b + 1 == a {
            if st.p[a] > i {
                continue;
            }
            vec![st.p[a]]
        } else {
            (0..=i.min(st.cutoff)).collect()
        };
        for t in tops {
            let out = i + j - t;
            right[b][a] = out;
            top[b][a] = t;
            ops.push(VertexOp { factor: (st.slot)(b, a), plus: j, k: out > j, minus: t });
            walk(st, next_a, next_b, right, top, ops, x)?;
            ops.pop();
        }
    }
    Ok(())
}

/// Adds the tensor product of the chosen vertex operators to `x`.
fn accumulate(st: &Staircase<'_>, ops: &[VertexOp], x: &mut FockOperator) -> Result<()> {
    let nf = st.order.len();
    let mut per_factor: Vec<Option<VertexOp>> = vec![None; nf];
    for op in ops {
        per_factor[op.factor] = Some(*op);
    }
    // domain of each factor: inputs m with a defined image
    let mut domains: Vec<Vec<(u32, u32)>> = Vec::with_capacity(nf);
    for op in &per_factor {
        let op = op.expect("every vertex chosen");
        let d: Vec<(u32, u32)> = (0..=st.cutoff).filter_map(|m| op.act(m, st.cutoff).map(|o| (m, o))).collect();
        if d.is_empty() {
            return Ok(());
        }
        domains.push(d);
    }
    let mut pick = vec![0usize; nf];
    let mut input = vec![0u32; nf];
    let mut output = vec![0u32; nf];
    loop {
        for f in 0..nf {
            input[f] = domains[f][pick[f]].0;
            output[f] = domains[f][pick[f]].1;
        }
        let (col, row) = (x.index(&input), x.index(&output));
        x.add(row, col, 1)?;
        let mut f = nf;
        loop {
            if f == 0 {
                return Ok(());
            }
            f -= 1;
            pick[f] += 1;
            if pick[f] < domains[f].len() {
                break;
            }
            pick[f] = 0;
        }
    }
}
