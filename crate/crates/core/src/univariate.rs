//! Dense univariate polynomials, used for diagonal polynomials, line
//! restrictions and the `k[u]` part of maximal ideals.

use std::fmt;

use num_traits::Zero;

use crate::field::Field;
use crate::poly::{Monomial, Poly2};

/// Coefficients from degree 0 upward, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly1<K: Field> {
    coeffs: Vec<K>,
}

impl<K: Field> Poly1<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly1::new(vec![K::one()])
    }

    /// `t^n`
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![K::zero(); n + 1];
        c[n] = K::one();
        Poly1 { coeffs: c }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &K) -> K {
        self.coeffs
            .iter()
            .rev()
            .fold(K::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly1::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly1::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly1::new(out)
    }

    pub fn scale(&self, c: &K) -> Self {
        Poly1::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let inv = divisor.leading_coeff().unwrap().try_inv().expect("field element");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![K::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d].clone() * inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Poly1::new(quot), Poly1::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Embeds as a polynomial in `u` (`var_is_u`) or in `v`.
    pub fn to_bivariate(&self, var_is_u: bool) -> Poly2<K> {
        Poly2::from_terms(self.coeffs.iter().enumerate().map(|(i, c)| {
            let m = if var_is_u {
                Monomial::new(i as u32, 0)
            } else {
                Monomial::new(0, i as u32)
            };
            (m, c.clone())
        }))
    }

    /// Reads a bivariate polynomial that involves only `u` (or only `v`).
    pub fn from_bivariate(p: &Poly2<K>, var_is_u: bool) -> Option<Self> {
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            let (e, other) = if var_is_u { (m.u, m.v) } else { (m.v, m.u) };
            if other != 0 {
                return None;
            }
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, K::zero());
            }
            coeffs[e] = c.clone();
        }
        Some(Poly1::new(coeffs))
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl<K: Field> fmt::Display for Poly1<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

/// Monic polynomials of exact degree `d` over a finite field.
pub fn monic_of_degree<K: Field>(d: usize) -> Option<Vec<Poly1<K>>> {
    let elems = K::elements()?;
    let q = elems.len();
    let total = q.checked_pow(d as u32)?;
    Some(
        (0..total)
            .map(|mut idx| {
                let mut c = Vec::with_capacity(d + 1);
                for _ in 0..d {
                    c.push(elems[idx % q].clone());
                    idx /= q;
                }
                c.push(K::one());
                Poly1::new(c)
            })
            .collect(),
    )
}

/// Irreducibility over a finite field by trial division with every monic
/// polynomial of degree `1..=deg/2`. `None` for infinite fields of degree >= 2.
pub fn is_irreducible<K: Field>(f: &Poly1<K>) -> Option<bool> {
    let d = f.degree()?;
    if d == 0 {
        return Some(false);
    }
    if d == 1 {
        return Some(true);
    }
    for k in 1..=d / 2 {
        for h in monic_of_degree::<K>(k)? {
            if f.rem(&h).is_zero() {
                return Some(false);
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type P = Poly1<Fp<2>>;
    fn f2(v: &[u64]) -> P {
        Poly1::new(v.iter().map(|&x| Fp::new(x)).collect())
    }

    #[test]
    fn division() {
        // t^3 + 1 = (t + 1)(t^2 + t + 1) over F_2
        let (q, r) = f2(&[1, 0, 0, 1]).div_rem(&f2(&[1, 1]));
        assert_eq!(q, f2(&[1, 1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn irreducibles_over_f2() {
        let count = |d| monic_of_degree::<Fp<2>>(d).unwrap().into_iter().filter(|f| is_irreducible(f).unwrap()).count();
        assert_eq!(count(1), 2);
        assert_eq!(count(2), 1);
        assert_eq!(count(3), 2);
        assert_eq!(count(4), 3);
    }

    #[test]
    fn display_and_eval() {
        let p = f2(&[0, 1, 1]);
        assert_eq!(p.to_string(), "t^2 + t");
        assert_eq!(p.eval(&Fp::new(1)), Fp::new(0));
        assert_eq!(p.display_in("v"), "v^2 + v");
    }
}
