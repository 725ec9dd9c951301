//! Sparse bivariate polynomials in `k[u, v]`.
//!
//! Terms are kept in a map ordered by graded reverse lexicographic order
//! with `u > v`; zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::error::ParseError;
use crate::field::Field;

/// Exponent pair `u^u * v^v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    pub u: u32,
    pub v: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { u: 0, v: 0 };

    pub const fn new(u: u32, v: u32) -> Self {
        Monomial { u, v }
    }

    pub fn degree(self) -> u32 {
        self.u + self.v
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.u <= other.u && self.v <= other.v
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(self, other: Monomial) -> Option<Monomial> {
        self.divides(other).then(|| Monomial::new(other.u - self.u, other.v - self.v))
    }

    pub fn lcm(self, other: Monomial) -> Monomial {
        Monomial::new(self.u.max(other.u), self.v.max(other.v))
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial::new(self.u + other.u, self.v + other.v)
    }
}

// grevlex, u > v: total degree first; among equal degree the smaller
// v-exponent is larger.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.u {
            0 => {}
            1 => parts.push("u".to_string()),
            e => parts.push(format!("u^{e}")),
        }
        match self.v {
            0 => {}
            1 => parts.push("v".to_string()),
            e => parts.push(format!("v^{e}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// The monomial order used throughout. Only one is supported.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum MonomialOrder {
    #[default]
    GrevlexUV,
}

impl MonomialOrder {
    pub fn id(self) -> &'static str {
        "grevlex(u>v)"
    }
}

/// A polynomial in `k[u, v]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly2<K: Field> {
    terms: BTreeMap<Monomial, K>,
}

impl<K: Field> Default for Poly2<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Field> Poly2<K> {
    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: K, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly2 { terms }
    }

    pub fn monomial(u: u32, v: u32) -> Self {
        Self::term(K::one(), Monomial::new(u, v))
    }

    /// The variable `u`.
    pub fn u() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `v`.
    pub fn v() -> Self {
        Self::monomial(0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, K)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_monomial().map(Monomial::degree)
    }

    /// Total degree with the zero polynomial counted as degree 0.
    pub fn degree_or_zero(&self) -> u32 {
        self.degree().unwrap_or(0)
    }

    pub fn u_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.u).max().unwrap_or(0)
    }

    pub fn v_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.v).max().unwrap_or(0)
    }

    /// Largest `a` with `u^a` dividing `self` (0 for the zero polynomial).
    pub fn u_valuation(&self) -> u32 {
        self.terms.keys().map(|m| m.u).min().unwrap_or(0)
    }

    pub fn coeff(&self, m: Monomial) -> K {
        self.terms.get(&m).cloned().unwrap_or_else(K::zero)
    }

    pub fn constant_term(&self) -> K {
        self.coeff(Monomial::ONE)
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_term(&self) -> Option<(Monomial, &K)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn leading_coeff(&self) -> Option<&K> {
        self.terms.values().next_back()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &K)> + '_ {
        self.terms.iter().rev().map(|(m, c)| (*m, c))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (*m, a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_term(&self, c: &K, m: Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly2 {
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (n.times(m), a.clone() * c.clone()))
                .collect(),
        }
    }

    /// Scales so the leading coefficient is 1. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => self.scale(&lc.try_inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn evaluate(&self, u: &K, v: &K) -> K {
        let mut acc = K::zero();
        for (m, c) in &self.terms {
            acc = acc + c.clone() * pow_k(u, m.u) * pow_k(v, m.v);
        }
        acc
    }

    /// `self(u + alpha, v + beta)`.
    pub fn shift(&self, alpha: &K, beta: &K) -> Self {
        if alpha.is_zero() && beta.is_zero() {
            return self.clone();
        }
        let lin_u = Self::u() + Self::constant(alpha.clone());
        let lin_v = Self::v() + Self::constant(beta.clone());
        let mut upow = vec![Self::one()];
        for i in 1..=self.u_degree() as usize {
            let next = &upow[i - 1] * &lin_u;
            upow.push(next);
        }
        let mut vpow = vec![Self::one()];
        for j in 1..=self.v_degree() as usize {
            let next = &vpow[j - 1] * &lin_v;
            vpow.push(next);
        }
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let piece = (&upow[m.u as usize] * &vpow[m.v as usize]).scale(c);
            out = out + piece;
        }
        out
    }

    /// Drops every term of total degree `>= n`.
    pub fn truncate(&self, n: u32) -> Self {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < n)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Exact quotient by a nonzero divisor, or `None` if it does not divide.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.try_inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading_term() {
            let q = lm.quotient_of(m)?;
            let qc = c.clone() * lc_inv.clone();
            rem = &rem - &divisor.mul_term(&qc, q);
            quot.add_term(q, qc);
        }
        Some(quot)
    }

    /// Canonical text form: terms in descending order, e.g. `u^11*v^2 + u^10*v^3`.
    pub fn to_canonical(&self) -> String {
        self.to_string()
    }

    /// Parses the canonical text form and rejects any other spelling.
    pub fn parse_canonical(s: &str) -> Result<Self, ParseError> {
        let p = Self::parse(s)?;
        let back = p.to_canonical();
        if back != s {
            return Err(ParseError::NonCanonical {
                input: s.to_string(),
                canonical: back,
            });
        }
        Ok(p)
    }

    /// Parses a polynomial written with `u`, `v`, integer or fractional
    /// coefficients, `*`, `^`, `+` and `-`. Terms may come in any order.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParseError::Empty);
        }
        let mut out = Self::zero();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, ch) in compact.chars().enumerate() {
            if ch == '+' || ch == '-' {
                if i > 0 {
                    if current.is_empty() {
                        return Err(ParseError::Syntax(s.to_string()));
                    }
                    chunks.push((negative, std::mem::take(&mut current)));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(ParseError::Syntax(s.to_string()));
        }
        chunks.push((negative, current));

        for (neg, chunk) in chunks {
            let mut coeff = K::one();
            let mut mono = Monomial::ONE;
            for factor in chunk.split('*') {
                match factor.chars().next() {
                    Some('u') | Some('v') => {
                        let exp = match factor.get(1..) {
                            Some("") => 1,
                            Some(rest) => rest
                                .strip_prefix('^')
                                .and_then(|e| e.parse::<u32>().ok())
                                .ok_or_else(|| ParseError::Syntax(s.to_string()))?,
                            None => 1,
                        };
                        if factor.starts_with('u') {
                            mono.u += exp;
                        } else {
                            mono.v += exp;
                        }
                    }
                    Some(c) if c.is_ascii_digit() => {
                        coeff = coeff * parse_coeff::<K>(factor).ok_or_else(|| ParseError::Coefficient(factor.to_string()))?;
                    }
                    _ => return Err(ParseError::Syntax(s.to_string())),
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

fn parse_coeff<K: Field>(token: &str) -> Option<K> {
    if let Some(c) = K::parse_canonical(token) {
        return Some(c);
    }
    let (n, d) = match token.split_once('/') {
        Some((n, d)) => (n.parse::<i64>().ok()?, d.parse::<i64>().ok()?),
        None => (token.parse::<i64>().ok()?, 1),
    };
    Some(K::from_i64(n) * K::from_i64(d).try_inv()?)
}

fn pow_k<K: Field>(x: &K, e: u32) -> K {
    let mut acc = K::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

impl<K: Field> fmt::Display for Poly2<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<K: Field> fmt::Debug for Poly2<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2[{}]({})", K::tag(), self)
    }
}

impl<'a, K: Field> Add<&'a Poly2<K>> for &'a Poly2<K> {
    type Output = Poly2<K>;
    fn add(self, rhs: &Poly2<K>) -> Poly2<K> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, K: Field> Sub<&'a Poly2<K>> for &'a Poly2<K> {
    type Output = Poly2<K>;
    fn sub(self, rhs: &Poly2<K>) -> Poly2<K> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a, K: Field> Mul<&'a Poly2<K>> for &'a Poly2<K> {
    type Output = Poly2<K>;
    fn mul(self, rhs: &Poly2<K>) -> Poly2<K> {
        let mut out = Poly2::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.times(*n), a.clone() * b.clone());
            }
        }
        out
    }
}

impl<K: Field> Neg for &Poly2<K> {
    type Output = Poly2<K>;
    fn neg(self) -> Poly2<K> {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl<K: Field> Neg for Poly2<K> {
    type Output = Poly2<K>;
    fn neg(self) -> Poly2<K> {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<K: Field> $tr<Poly2<K>> for Poly2<K> {
            type Output = Poly2<K>;
            fn $method(self, rhs: Poly2<K>) -> Poly2<K> {
                (&self).$method(&rhs)
            }
        }
        impl<'a, K: Field> $tr<&'a Poly2<K>> for Poly2<K> {
            type Output = Poly2<K>;
            fn $method(self, rhs: &'a Poly2<K>) -> Poly2<K> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<K: Field> std::iter::Sum for Poly2<K> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

impl<'a, K: Field> std::iter::Sum<&'a Poly2<K>> for Poly2<K> {
    fn sum<I: Iterator<Item = &'a Poly2<K>>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, p| acc + p)
    }
}

/// All monomials of total degree `<= d`, ascending.
pub fn monomials_up_to(d: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = (0..=d)
        .flat_map(|deg| (0..=deg).map(move |v| Monomial::new(deg - v, v)))
        .collect();
    out.sort();
    out
}

/// Every polynomial whose support lies in `support`, over a finite field,
/// in a fixed order starting with zero. Returns `None` for infinite fields.
pub fn all_polys_on<K: Field>(support: &[Monomial]) -> Option<impl Iterator<Item = Poly2<K>> + '_> {
    let elems = K::elements()?;
    let q = elems.len() as u64;
    let total = q.checked_pow(support.len() as u32)?;
    Some((0..total).map(move |mut idx| {
        let mut p = Poly2::zero();
        for m in support {
            let digit = (idx % q) as usize;
            idx /= q;
            p.add_term(*m, elems[digit].clone());
        }
        p
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    type P2 = Poly2<Fp<2>>;
    type P3 = Poly2<Fp<3>>;
    type PQ = Poly2<Rational>;

    #[test]
    fn grevlex_order() {
        let m = Monomial::new;
        assert!(m(1, 0) > m(0, 1));
        assert!(m(0, 2) > m(1, 0));
        assert!(m(11, 2) > m(10, 3));
        assert!(m(0, 0) < m(0, 1));
    }

    #[test]
    fn canonical_text() {
        let f = P2::monomial(11, 2) + P2::monomial(10, 3);
        assert_eq!(f.to_canonical(), "u^11*v^2 + u^10*v^3");
        assert_eq!(P2::zero().to_canonical(), "0");
        let g = P3::parse("2 + v + 2*u").unwrap();
        assert_eq!(g.to_canonical(), "2*u + v + 2");
        let h = PQ::parse("1/2*u - 3*v^2 - 1").unwrap();
        assert_eq!(h.to_canonical(), "-3*v^2 + 1/2*u - 1");
    }

    #[test]
    fn canonical_parse_is_strict() {
        assert!(P2::parse_canonical("u^11*v^2 + u^10*v^3").is_ok());
        assert!(matches!(P2::parse_canonical("v*u"), Err(ParseError::NonCanonical { .. })));
        assert!(P2::parse_canonical("v + u").is_err());
        assert!(P2::parse_canonical("u^1").is_err());
        assert!(P2::parse("u +").is_err());
        assert!(P2::parse("w").is_err());
    }

    #[test]
    fn characteristic_two_cancels() {
        let f = P2::u() + P2::v();
        assert_eq!(f.pow(2), P2::monomial(2, 0) + P2::monomial(0, 2));
        assert!((&f + &f).is_zero());
    }

    #[test]
    fn exact_division() {
        let f = PQ::parse("u*v + v^2").unwrap();
        let g = PQ::parse("u + v").unwrap();
        assert_eq!(f.exact_div(&g), Some(PQ::v()));
        assert_eq!(PQ::u().exact_div(&PQ::v()), None);
    }

    #[test]
    fn shift_and_evaluate() {
        let f = PQ::parse("u^2 + v").unwrap();
        let one = Rational::from(num_bigint::BigInt::from(1));
        let g = f.shift(&one, &Rational::from(num_bigint::BigInt::from(0)));
        assert_eq!(g, PQ::parse("u^2 + 2*u + v + 1").unwrap());
        assert_eq!(g.evaluate(&Rational::from_i64(0), &Rational::from_i64(0)), one);
    }

    #[test]
    fn enumerates_all_polys() {
        let support = monomials_up_to(1);
        assert_eq!(support.len(), 3);
        assert_eq!(all_polys_on::<Fp<2>>(&support).unwrap().count(), 8);
        assert!(all_polys_on::<Rational>(&support).is_none());
    }
}
