//! The q=0 oscillator algebra `𝒜_0`.
//!
//! Generators `a⁺, a⁻, k` obey `k² = k`, `k a⁺ = 0`, `a⁻ k = 0`,
//! `a⁻ a⁺ = 1` and `a⁺ a⁻ = 1 − k`. A basis is `1`, `(a⁺)^r`, `(a⁻)^r`
//! (`r ≥ 1`) and `(a⁺)^s k (a⁻)^t` (`s, t ≥ 0`). On the Fock space
//! `a⁺|m⟩ = |m+1⟩`, `a⁻|m⟩ = |m−1⟩` (zero for `m = 0`) and `k|m⟩ = δ_{m,0}|m⟩`,
//! so `(a⁺)^s k (a⁻)^t = |s⟩⟨t|`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A basis monomial of `𝒜_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Monomial {
    Id,
    /// `(a⁺)^r`, `r ≥ 1`.
    Plus(u32),
    /// `(a⁻)^r`, `r ≥ 1`.
    Minus(u32),
    /// `(a⁺)^s k (a⁻)^t`.
    Pkm(u32, u32),
}

impl Monomial {
    fn plus(r: u32) -> Monomial {
        if r == 0 { Monomial::Id } else { Monomial::Plus(r) }
    }

    fn minus(r: u32) -> Monomial {
        if r == 0 { Monomial::Id } else { Monomial::Minus(r) }
    }

    /// Image of `|m⟩`, or `None` for zero.
    #[must_use]
    pub fn act(self, m: u32) -> Option<u32> {
        match self {
            Monomial::Id => Some(m),
            Monomial::Plus(r) => Some(m + r),
            Monomial::Minus(r) => m.checked_sub(r),
            Monomial::Pkm(s, t) => (m == t).then_some(s),
        }
    }

    /// `Tr` of the monomial; `None` for the divergent identity.
    #[must_use]
    pub fn trace(self) -> Option<u32> {
        match self {
            Monomial::Id => None,
            Monomial::Plus(_) | Monomial::Minus(_) => Some(0),
            Monomial::Pkm(s, t) => Some(u32::from(s == t)),
        }
    }

    /// Product of two monomials as signed monomial terms.
    #[must_use]
    pub fn times(self, other: Monomial) -> Vec<(Monomial, i64)> {
        use Monomial::{Id, Minus, Pkm, Plus};
        match (self, other) {
            (Id, y) => vec![(y, 1)],
            (x, Id) => vec![(x, 1)],
            (Plus(r), Plus(s)) => vec![(Plus(r + s), 1)],
            (Minus(r), Minus(s)) => vec![(Minus(r + s), 1)],
            (Minus(t), Plus(u)) => {
                let m = if t >= u { Monomial::minus(t - u) } else { Monomial::plus(u - t) };
                vec![(m, 1)]
            }
            (Plus(r), Minus(t)) => {
                // (a⁺)^u (a⁻)^u = 1 − Σ_{v<u} |v⟩⟨v|
                let u = r.min(t);
                let (r0, t0) = (r - u, t - u);
                let head = if r0 > 0 { Monomial::plus(r0) } else { Monomial::minus(t0) };
                let mut out = vec![(head, 1)];
                out.extend((0..u).map(|v| (Pkm(r0 + v, t0 + v), -1)));
                out
            }
            (Plus(r), Pkm(s, t)) => vec![(Pkm(s + r, t), 1)],
            (Pkm(s, t), Minus(r)) => vec![(Pkm(s, t + r), 1)],
            (Pkm(s, t), Plus(u)) => {
                if t >= u { vec![(Pkm(s, t - u), 1)] } else { Vec::new() }
            }
            (Minus(r), Pkm(s, t)) => {
                if s >= r { vec![(Pkm(s - r, t), 1)] } else { Vec::new() }
            }
            (Pkm(s, t), Pkm(u, v)) => {
                if t == u { vec![(Pkm(s, v), 1)] } else { Vec::new() }
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Monomial::Id => f.write_str("1"),
            Monomial::Plus(r) => write!(f, "(a+)^{r}"),
            Monomial::Minus(r) => write!(f, "(a-)^{r}"),
            Monomial::Pkm(s, t) => write!(f, "(a+)^{s} k (a-)^{t}"),
        }
    }
}

/// An integer linear combination of basis monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OscillatorElement {
    terms: BTreeMap<Monomial, BigInt>,
}

impl OscillatorElement {
    #[must_use]
    pub fn zero() -> Self {
        OscillatorElement::default()
    }

    #[must_use]
    pub fn one() -> Self {
        Self::monomial(Monomial::Id)
    }

    #[must_use]
    pub fn monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, BigInt::one());
        OscillatorElement { terms }
    }

    #[must_use]
    pub fn a_plus() -> Self {
        Self::monomial(Monomial::Plus(1))
    }

    #[must_use]
    pub fn a_minus() -> Self {
        Self::monomial(Monomial::Minus(1))
    }

    #[must_use]
    pub fn k() -> Self {
        Self::monomial(Monomial::Pkm(0, 0))
    }

    #[must_use]
    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Product of a list of elements, left to right.
    #[must_use]
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a OscillatorElement>) -> Self {
        factors.into_iter().fold(Self::one(), |acc, f| &acc * f)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[must_use]
    pub fn coefficient(&self, m: Monomial) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// `Tr(X) = Σ_m ⟨m|X|m⟩`; fails when the identity coefficient is nonzero.
    pub fn trace(&self) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            match m.trace() {
                None => return Err(Error::DivergentTrace),
                Some(t) => acc += c * BigInt::from(t),
            }
        }
        Ok(acc)
    }

    /// `⟨c|X|k⟩`.
    #[must_use]
    pub fn matrix_element(&self, c: u32, k: u32) -> BigInt {
        self.terms
            .iter()
            .filter(|(m, _)| m.act(k) == Some(c))
            .map(|(_, v)| v.clone())
            .sum()
    }
}

impl Mul for &OscillatorElement {
    type Output = OscillatorElement;

    fn mul(self, rhs: &OscillatorElement) -> OscillatorElement {
        let mut out = OscillatorElement::zero();
        for (x, cx) in &self.terms {
            for (y, cy) in &rhs.terms {
                for (z, s) in x.times(*y) {
                    out.add_term(z, cx * cy * BigInt::from(s));
                }
            }
        }
        out
    }
}

impl Add for &OscillatorElement {
    type Output = OscillatorElement;

    fn add(self, rhs: &OscillatorElement) -> OscillatorElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl fmt::Display for OscillatorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// `R̂^{a,b}_{i,j} = δ_{a+b,i+j} θ(a ≥ j) (a⁺)^j k^{θ(a>j)} (a⁻)^b`.
#[must_use]
pub fn rhat(a: u32, b: u32, i: u32, j: u32) -> OscillatorElement {
    if a + b != i + j || a < j {
        return OscillatorElement::zero();
    }
    let mut e = OscillatorElement::a_plus().pow(j);
    if a > j {
        e = &e * &OscillatorElement::k();
    }
    &e * &OscillatorElement::a_minus().pow(b)
}
