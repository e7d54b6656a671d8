//! The combinatorial R: the bijection `B_ℓ ⊗ B_m → B_m ⊗ B_ℓ`.
//!
//! Two independent algorithms are provided. [`apply_r_ny`] is the dot
//! pairing rule (valid for `ℓ > m`): every dot of `y` is tied by an H-line to
//! the nearest free dot of `x` strictly to its left, cyclically, and the
//! untied dots of `x` move up. [`apply_r_pl`] is the tropical formula
//!
//! ```text
//! Q_i = min_{1≤k≤L} ( Σ_{j=1}^{k-1} x_{i+j} + Σ_{j=k+1}^{L} y_{i+j} )
//! x'_i = x_i + Q_i − Q_{i−1},   y'_i = y_i + Q_{i−1} − Q_i
//! ```
//!
//! valid for all weights. [`apply_r`] dispatches between them.

use alloc::vec::Vec;

use crate::crystal::Composition;
use crate::error::{Error, Result};

fn check_len(x: &Composition, y: &Composition) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    Ok(())
}

/// Box positions of the dots of `y`, left to right.
#[must_use]
pub fn dot_positions(y: &Composition) -> Vec<usize> {
    y.entries()
        .iter()
        .enumerate()
        .flat_map(|(p, &c)| core::iter::repeat(p).take(c as usize))
        .collect()
}

/// Pairs the dots of `upper` (processed in the given box order) with dots of
/// `lower` and returns how many dots of `lower` were captured in each box.
///
/// Each upper dot at box `p` captures a free lower dot from the boxes
/// `p−1, p−2, …` cyclically, with box `p` itself inspected last.
pub(crate) fn capture(lower: &[u32], order: impl IntoIterator<Item = usize>) -> Option<Vec<u32>> {
    let len = lower.len();
    let mut free = lower.to_vec();
    let mut captured = alloc::vec![0u32; len];
    for p in order {
        let q = (1..=len).map(|s| (p + len - s % len) % len).find(|&q| free[q] > 0)?;
        free[q] -= 1;
        captured[q] += 1;
    }
    Some(captured)
}

/// The dots of `lower` captured by H-lines from all dots of `upper`.
/// Needs `weight(lower) ≥ weight(upper)`.
pub fn ny_capture(lower: &Composition, upper: &Composition) -> Result<Composition> {
    check_len(lower, upper)?;
    if lower.weight() < upper.weight() {
        return Err(Error::NotStrictlyLarger {
            larger: u64::from(lower.weight()),
            smaller: u64::from(upper.weight()),
        });
    }
    let got = capture(lower.entries(), dot_positions(upper)).expect("enough free dots");
    Ok(Composition::from_vec_unchecked(got))
}

/// The pairing rule with the dots of `y` processed in a caller-chosen order.
///
/// `order` is a permutation of `0..weight(y)` indexing [`dot_positions`]`(y)`.
pub fn apply_r_ny_ordered(
    x: &Composition,
    y: &Composition,
    order: &[usize],
) -> Result<(Composition, Composition)> {
    check_len(x, y)?;
    let (l, m) = (x.weight(), y.weight());
    if l <= m {
        return Err(Error::NotStrictlyLarger { larger: u64::from(l), smaller: u64::from(m) });
    }
    let dots = dot_positions(y);
    if order.len() != dots.len() {
        return Err(Error::LengthMismatch { left: order.len(), right: dots.len() });
    }
    let paired = capture(x.entries(), order.iter().map(|&k| dots[k])).expect("ℓ > m");
    let x_new: Vec<u32> = x
        .entries()
        .iter()
        .zip(y.entries())
        .zip(&paired)
        .map(|((&a, &b), &p)| a + b - p)
        .collect();
    Ok((Composition::from_vec_unchecked(paired), Composition::from_vec_unchecked(x_new)))
}

/// `R(x ⊗ y) = y' ⊗ x'` by the pairing rule; requires `weight(x) > weight(y)`.
pub fn apply_r_ny(x: &Composition, y: &Composition) -> Result<(Composition, Composition)> {
    let order: Vec<usize> = (0..y.weight() as usize).collect();
    apply_r_ny_ordered(x, y, &order)
}

/// `R(x ⊗ y) = y' ⊗ x'` by the piecewise-linear formula.
pub fn apply_r_pl(x: &Composition, y: &Composition) -> Result<(Composition, Composition)> {
    check_len(x, y)?;
    let len = x.len();
    let xs: Vec<i64> = x.entries().iter().map(|&v| i64::from(v)).collect();
    let ys: Vec<i64> = y.entries().iter().map(|&v| i64::from(v)).collect();
    let q: Vec<i64> = (0..len)
        .map(|i| {
            (1..=len)
                .map(|k| {
                    let a: i64 = (1..k).map(|j| xs[(i + j) % len]).sum();
                    let b: i64 = (k + 1..=len).map(|j| ys[(i + j) % len]).sum();
                    a + b
                })
                .min()
                .expect("L ≥ 1")
        })
        .collect();
    let mut xn = Vec::with_capacity(len);
    let mut yn = Vec::with_capacity(len);
    for i in 0..len {
        let prev = q[(i + len - 1) % len];
        xn.push(xs[i] + q[i] - prev);
        yn.push(ys[i] + prev - q[i]);
    }
    let to_u32 = |v: Vec<i64>| -> Vec<u32> {
        v.into_iter()
            .map(|e| u32::try_from(e).expect("tropical R output is nonnegative"))
            .collect()
    };
    Ok((
        Composition::from_vec_unchecked(to_u32(yn)),
        Composition::from_vec_unchecked(to_u32(xn)),
    ))
}

/// `R(x ⊗ y) = y' ⊗ x'` for arbitrary weights: identity for equal weights,
/// pairing rule when `x` is heavier, piecewise-linear formula otherwise.
pub fn apply_r(x: &Composition, y: &Composition) -> Result<(Composition, Composition)> {
    check_len(x, y)?;
    match x.weight().cmp(&y.weight()) {
        core::cmp::Ordering::Equal => Ok((x.clone(), y.clone())),
        core::cmp::Ordering::Greater => apply_r_ny(x, y),
        core::cmp::Ordering::Less => apply_r_pl(x, y),
    }
}

/// Matrix element `R^{a,b}_{i,j}`: 1 iff `R(i ⊗ j) = b ⊗ a`.
pub fn r_element(a: &Composition, b: &Composition, i: &Composition, j: &Composition) -> Result<u8> {
    check_len(a, b)?;
    check_len(a, i)?;
    check_len(a, j)?;
    let conserved = (0..a.len())
        .all(|r| a.entries()[r] + b.entries()[r] == i.entries()[r] + j.entries()[r]);
    if !conserved {
        return Ok(0);
    }
    let (bb, aa) = apply_r(i, j)?;
    Ok(u8::from(&bb == b && &aa == a))
}

/// Both sides of the Yang-Baxter relation applied to `x ⊗ y ⊗ z`.
///
/// The first triple is `(R⊗1)(1⊗R)(R⊗1)`, the second `(1⊗R)(R⊗1)(1⊗R)`.
pub fn yang_baxter_sides(
    x: &Composition,
    y: &Composition,
    z: &Composition,
) -> Result<([Composition; 3], [Composition; 3])> {
    let (y1, x1) = apply_r(x, y)?;
    let (z1, x2) = apply_r(&x1, z)?;
    let (z2, y2) = apply_r(&y1, &z1)?;
    let left = [z2, y2, x2];

    let (z1, y1) = apply_r(y, z)?;
    let (z2, x1) = apply_r(x, &z1)?;
    let (y2, x2) = apply_r(&x1, &y1)?;
    let right = [z2, y2, x2];
    Ok((left, right))
}

/// True iff both sides of the Yang-Baxter relation agree on `x ⊗ y ⊗ z`.
pub fn yang_baxter_check(x: &Composition, y: &Composition, z: &Composition) -> Result<bool> {
    let (l, r) = yang_baxter_sides(x, y, z)?;
    Ok(l == r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{dominance_ge, enumerate_compositions};

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example_both_rules() {
        let (x, y) = (c("03221"), c("20210"));
        let expect = (c("02111"), c("21320"));
        assert_eq!(apply_r_ny(&x, &y).unwrap(), expect);
        assert_eq!(apply_r_pl(&x, &y).unwrap(), expect);
        assert_eq!(apply_r(&x, &y).unwrap(), expect);
    }

    #[test]
    fn vertex_example() {
        assert_eq!(apply_r_ny(&c("0121"), &c("1101")).unwrap(), (c("0021"), c("1201")));
        assert_eq!(r_element(&c("1201"), &c("0021"), &c("0121"), &c("1101")).unwrap(), 1);
        assert_eq!(r_element(&c("1111"), &c("0111"), &c("0121"), &c("1101")).unwrap(), 0);
        assert_eq!(r_element(&c("2000"), &c("0021"), &c("0121"), &c("1101")).unwrap(), 0);
    }

    #[test]
    fn degenerate_cases() {
        let x = c("300");
        assert_eq!(apply_r_ny(&x, &c("000")).unwrap(), (c("000"), x.clone()));
        assert_eq!(apply_r(&c("10"), &c("01")).unwrap(), (c("10"), c("01")));
        assert_eq!(apply_r_pl(&c("10"), &c("01")).unwrap(), (c("10"), c("01")));
        assert!(apply_r_ny(&c("10"), &c("01")).is_err());
        assert!(apply_r(&c("10"), &c("010")).is_err());
    }

    #[test]
    fn single_site() {
        assert_eq!(apply_r(&c("3"), &c("1")).unwrap(), (c("1"), c("3")));
        assert_eq!(apply_r(&c("1"), &c("3")).unwrap(), (c("3"), c("1")));
    }

    #[test]
    fn yang_baxter_example() {
        let (l, r) = yang_baxter_sides(&c("0121"), &c("1101"), &c("2000")).unwrap();
        assert_eq!(l, [c("0011"), c("0111"), c("3100")]);
        assert_eq!(l, r);
    }

    #[test]
    fn inverse_and_dominance_small() {
        for x in enumerate_compositions(3, 3) {
            for y in enumerate_compositions(1, 3) {
                let (y1, x1) = apply_r(&x, &y).unwrap();
                assert_eq!(apply_r(&y1, &x1).unwrap(), (x.clone(), y.clone()));
                assert!(dominance_ge(&x, &y1).unwrap());
                assert!(dominance_ge(&x1, &y).unwrap());
            }
        }
    }

    #[test]
    fn yang_baxter_small_exhaustive() {
        for x in enumerate_compositions(2, 3) {
            for y in enumerate_compositions(1, 3) {
                let z = c("000");
                assert!(yang_baxter_check(&x, &y, &z).unwrap());
            }
        }
    }
}
