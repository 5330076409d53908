//! Monomials and sparse homogeneous polynomials over `F_p`.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic. Every listing in this crate (matrix columns, bases,
//! printed polynomials) uses that order, largest monomial first.

mod parse;
mod ring;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

pub use parse::{parse_ideal, parse_poly, ParseError};
pub use ring::{RingFile, RingSpec};

use crate::error::{Error, Result};
use crate::linalg::{FpScalar, PrimeField};

/// Exponent vector, one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    pub fn scale(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// True when some exponent reaches its cap, i.e. the monomial lies in
    /// the ideal generated by the pure powers `x_i^{cap_i}`.
    pub fn exceeds(&self, caps: &[Option<u32>]) -> bool {
        self.0
            .iter()
            .zip(caps)
            .any(|(&e, cap)| cap.is_some_and(|c| e >= c))
    }

    /// If this is a pure power `x_i^e` with `e > 0`, returns `(i, e)`.
    pub fn as_pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    pub fn display(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the first differing
    /// exponent decides (larger exponent in an earlier variable is larger).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `nvars` variables, largest first in
/// graded-lex order. With `caps`, only monomials whose exponent in variable
/// `i` is strictly below `caps[i]` survive.
pub fn monomials_of_degree(nvars: usize, d: u32, caps: Option<&[Option<u32>]>) -> Vec<Monomial> {
    let bound = |i: usize| -> u32 {
        caps.and_then(|c| c[i]).map_or(d, |c| c.saturating_sub(1).min(d))
    };
    let mut out = Vec::new();
    if caps.is_some_and(|c| c.contains(&Some(0))) {
        return out;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    // Suffix capacity: how much degree the variables after `i` can absorb.
    let mut room = vec![0u64; nvars + 1];
    for i in (0..nvars).rev() {
        room[i] = room[i + 1] + bound(i) as u64;
    }
    let mut cur = vec![0u32; nvars];
    fn rec(
        i: usize,
        left: u32,
        cur: &mut Vec<u32>,
        room: &[u64],
        bound: &dyn Fn(usize) -> u32,
        out: &mut Vec<Monomial>,
    ) {
        let n = cur.len();
        if i == n - 1 {
            if left <= bound(i) {
                cur[i] = left;
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let hi = bound(i).min(left);
        for e in (0..=hi).rev() {
            if ((left - e) as u64) > room[i + 1] {
                break;
            }
            cur[i] = e;
            rec(i + 1, left - e, cur, room, bound, out);
        }
        cur[i] = 0;
    }
    if (d as u64) <= room[0] {
        rec(0, d, &mut cur, &room, &bound, &mut out);
    }
    out
}

/// Sparse polynomial with coefficients in `F_p`; zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Monomial, FpScalar>,
}

impl Poly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: FpScalar) -> Self {
        Self::term(field, Monomial::one(nvars), c)
    }

    pub fn term(field: PrimeField, m: Monomial, c: FpScalar) -> Self {
        let nvars = m.nvars();
        let mut p = Self::zero(field, nvars);
        p.add_term(m, c);
        p
    }

    pub fn monomial(field: PrimeField, m: Monomial) -> Self {
        Self::term(field, m, 1)
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, i))
    }

    pub fn from_terms(
        field: PrimeField,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, FpScalar)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms, largest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FpScalar)> + '_ {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn leading(&self) -> Option<(&Monomial, FpScalar)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> FpScalar {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: FpScalar) {
        assert_eq!(m.nvars(), self.nvars, "monomial arity mismatch");
        let c = c % self.field.p();
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree when homogeneous; `None` for the zero polynomial or a
    /// polynomial mixing degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FpScalar) -> Poly {
        let f = self.field;
        Poly::from_terms(
            f,
            self.nvars,
            self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c % f.p()))),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field mismatch");
        assert_eq!(self.nvars, other.nvars, "arity mismatch");
        let f = self.field;
        let mut out = Poly::zero(f, self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.mul(b), f.mul(ca, cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, &c)| (t.mul(m), c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(self.field, self.nvars, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self^q` for `q` a power of the characteristic, computed term by term:
    /// the `p`-th power map is additive in characteristic `p`.
    pub fn frobenius_power(&self, q: u64) -> Result<Poly> {
        let p = self.field.p();
        if !is_power_of(q, p) {
            return Err(Error::NotPowerOfP { q, p });
        }
        let k = u32::try_from(q).map_err(|_| Error::Invalid(format!("q = {q} too large")))?;
        let f = self.field;
        Ok(Poly {
            field: f,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.scale(k), f.pow(c, q)))
                .collect(),
        })
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let mono = m.display(names);
            match (c, mono.as_str()) {
                (c, "1") => s.push_str(&c.to_string()),
                (1, _) => s.push_str(&mono),
                (c, _) => s.push_str(&format!("{c}*{mono}")),
            }
        }
        s
    }
}

/// Whether `q = p^e` for some `e >= 0`.
pub fn is_power_of(mut q: u64, p: u32) -> bool {
    if q == 0 {
        return false;
    }
    while q % p as u64 == 0 {
        q /= p as u64;
    }
    q == 1
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 2, None).len(), 6);
        assert_eq!(monomials_of_degree(4, 0, None), vec![Monomial::one(4)]);
        let capped = monomials_of_degree(2, 2, Some(&[Some(2), Some(2)]));
        assert_eq!(capped, vec![Monomial::new(vec![1, 1])]);
        for n in 1..5 {
            for d in 0..7 {
                assert_eq!(
                    monomials_of_degree(n + 1, d, None).len() as u64,
                    binom(d as u64 + n as u64, n as u64)
                );
            }
        }
    }

    #[test]
    fn monomials_are_sorted_and_distinct() {
        let ms = monomials_of_degree(3, 4, Some(&[Some(3), None, Some(2)]));
        for w in ms.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert!(ms.iter().all(|m| m.degree() == 4 && m.exponents()[0] < 3));
    }

    #[test]
    fn frobenius_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let x = Poly::var(f2, 2, 0);
        let y = Poly::var(f2, 2, 1);
        let s = x.add(&y);
        assert_eq!(s.pow(2), Poly::var(f2, 2, 0).pow(2).add(&y.pow(2)));
        let c = Poly::constant(f2, 2, 1);
        assert_eq!(c.frobenius_power(8).unwrap(), c);
        assert!(matches!(s.frobenius_power(3), Err(Error::NotPowerOfP { q: 3, p: 2 })));
    }

    fn poly_strategy() -> impl Strategy<Value = (u32, Vec<(Vec<u32>, u32)>)> {
        prop::sample::select(vec![2u32, 3, 5]).prop_flat_map(|p| {
            (
                Just(p),
                prop::collection::vec((prop::collection::vec(0u32..3, 3), 1..p), 0..4),
            )
        })
    }

    proptest! {
        #[test]
        fn frobenius_matches_repeated_multiplication((p, terms) in poly_strategy()) {
            let f = PrimeField::new(p).unwrap();
            let a = Poly::from_terms(f, 3, terms.into_iter().map(|(e, c)| (Monomial::new(e), c)));
            for q in [p as u64, (p * p) as u64] {
                prop_assert_eq!(a.frobenius_power(q).unwrap(), a.pow(q as u32));
            }
        }
    }
}
