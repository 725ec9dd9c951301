//! Restriction of Taylor truncations at the origin to the lines `u = λv`.
//!
//! Writing `T = sum a_{i,j} u^i v^j`, the restriction to `u = λv` is
//! `sum_n p_n(λ) v^n` with the diagonal polynomial `p_n(t) = sum_i a_{i,n-i} t^i`.
//! If enough lines see a polynomial of bounded degree, every high
//! diagonal has more roots than its degree and must vanish. Over a finite
//! field there may not be enough lines; [`finite_field_evasion_series`]
//! builds a truncation that vanishes on every `F_p`-line without being zero.

use serde::Serialize;

use crate::completions::{Point, TruncatedPointSeries};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, Poly2};
use crate::univariate::Poly1;

/// `T(λv, v)` as a truncated series in `v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LineRestriction<K: Field> {
    pub lambda: K,
    /// Coefficients of `v^0 .. v^(precision-1)`.
    pub series: Vec<K>,
}

impl<K: Field> LineRestriction<K> {
    pub fn is_zero(&self) -> bool {
        self.series.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, n: usize) -> K {
        self.series.get(n).cloned().unwrap_or_else(K::zero)
    }

    pub fn as_poly(&self) -> Poly1<K> {
        Poly1::new(self.series.clone())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalPolynomial<K: Field> {
    pub n: u32,
    pub poly: Poly1<K>,
}

fn require_origin<K: Field>(t: &TruncatedPointSeries<K>) -> Result<()> {
    if *t.center() != Point::origin() {
        return Err(Error::ShapeUnsupported(format!("line restrictions need a series at the origin, got {}", t.center())));
    }
    Ok(())
}

/// Substitutes `u := λv` and collects powers of `v` below the precision.
pub fn restrict_to_line<K: Field>(t: &TruncatedPointSeries<K>, lambda: &K) -> Result<LineRestriction<K>> {
    require_origin(t)?;
    let mut series = vec![K::zero(); t.precision() as usize];
    for (m, c) in t.terms().terms() {
        let n = m.degree() as usize;
        if n < series.len() {
            let mut term = c.clone();
            for _ in 0..m.u {
                term = term * lambda.clone();
            }
            series[n] = series[n].clone() + term;
        }
    }
    Ok(LineRestriction { lambda: lambda.clone(), series })
}

/// `p_n(t) = sum_i a_{i,n-i} t^i`.
pub fn diagonal_polynomial<K: Field>(t: &TruncatedPointSeries<K>, n: u32) -> Result<DiagonalPolynomial<K>> {
    if n >= t.precision() {
        return Err(Error::OutOfRange(format!("diagonal {n} is beyond precision {}", t.precision())));
    }
    let coeffs = (0..=n).map(|i| t.terms().coeff(Monomial::new(i, n - i))).collect();
    Ok(DiagonalPolynomial { n, poly: Poly1::new(coeffs) })
}

/// Rebuilds a truncation at the origin from its diagonals `p_0 .. p_{N-1}`.
pub fn series_from_diagonals<K: Field>(diagonals: &[Poly1<K>]) -> TruncatedPointSeries<K> {
    let mut terms = Poly2::zero();
    for (n, p) in diagonals.iter().enumerate() {
        for (i, c) in p.coeffs().iter().enumerate().take(n + 1) {
            terms.add_term(Monomial::new(i as u32, (n - i) as u32), c.clone());
        }
    }
    TruncatedPointSeries::new(Point::origin(), diagonals.len() as u32, terms)
}

/// A line `u = λv` on which the series is assumed to be a polynomial:
/// every coefficient of `v^n` with `n >= bound` vanishes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LineSample<K: Field> {
    pub lambda: K,
    pub bound: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum DiagonalVerdict {
    /// No sampled line constrains this diagonal.
    Free,
    /// More roots than the degree: `p_n = 0`, confirmed on the coefficients.
    Forced { roots: usize },
    /// Roots present but no more than `n`.
    Inconclusive { roots: usize },
    /// `p_n(λ) != 0` on a line whose bound says it must vanish.
    Contradiction { lambda: String },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DichotomyVerdict {
    /// Every constrained diagonal is forced to vanish.
    ForcedPolynomial,
    Inconclusive,
    Contradiction,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DiagonalEntry {
    pub n: u32,
    #[serde(flatten)]
    pub verdict: DiagonalVerdict,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DichotomyReport {
    pub verdict: DichotomyVerdict,
    /// Diagonals `>= this` are zero when the verdict is forced-polynomial.
    pub forced_from: Option<u32>,
    pub diagonals: Vec<DiagonalEntry>,
}

/// Runs the root-counting argument on every diagonal below the precision.
pub fn dichotomy_check<K: Field>(t: &TruncatedPointSeries<K>, samples: &[LineSample<K>]) -> Result<DichotomyReport> {
    require_origin(t)?;
    for (i, s) in samples.iter().enumerate() {
        if samples[..i].iter().any(|r| r.lambda == s.lambda) {
            return Err(Error::OutOfRange(format!("slope {} is sampled twice", s.lambda)));
        }
    }
    let restrictions = samples
        .iter()
        .map(|s| restrict_to_line(t, &s.lambda))
        .collect::<Result<Vec<_>>>()?;

    let mut diagonals = Vec::new();
    for n in 0..t.precision() {
        let forcing: Vec<usize> = (0..samples.len()).filter(|&k| samples[k].bound <= n).collect();
        let verdict = if forcing.is_empty() {
            DiagonalVerdict::Free
        } else if let Some(&k) = forcing.iter().find(|&&k| !restrictions[k].coeff(n as usize).is_zero()) {
            DiagonalVerdict::Contradiction { lambda: samples[k].lambda.to_string() }
        } else if forcing.len() > n as usize {
            let p = diagonal_polynomial(t, n)?;
            debug_assert!(p.poly.is_zero(), "a degree-{n} polynomial with {} roots", forcing.len());
            if p.poly.is_zero() {
                DiagonalVerdict::Forced { roots: forcing.len() }
            } else {
                DiagonalVerdict::Contradiction { lambda: samples[forcing[0]].lambda.to_string() }
            }
        } else {
            DiagonalVerdict::Inconclusive { roots: forcing.len() }
        };
        diagonals.push(DiagonalEntry { n, verdict });
    }

    let any = |pred: fn(&DiagonalVerdict) -> bool| diagonals.iter().any(|d| pred(&d.verdict));
    let verdict = if any(|v| matches!(v, DiagonalVerdict::Contradiction { .. })) {
        DichotomyVerdict::Contradiction
    } else if any(|v| matches!(v, DiagonalVerdict::Inconclusive { .. })) || !any(|v| matches!(v, DiagonalVerdict::Forced { .. })) {
        DichotomyVerdict::Inconclusive
    } else {
        DichotomyVerdict::ForcedPolynomial
    };
    let forced_from = (verdict == DichotomyVerdict::ForcedPolynomial)
        .then(|| diagonals.iter().find(|d| !matches!(d.verdict, DiagonalVerdict::Free)).map(|d| d.n))
        .flatten();
    Ok(DichotomyReport { verdict, forced_from, diagonals })
}

/// The truncation with `p_n(t) = t^(n-p) (t^p - t)` for `n >= p` and `p_n = 0`
/// below, over `F_p`. Every `p_n` vanishes on all of `F_p`.
pub fn finite_field_evasion_series<K: Field>(precision: u32) -> Result<TruncatedPointSeries<K>> {
    let p = K::order().ok_or_else(|| Error::UnsupportedEnumeration("evasion series needs a finite field".into()))? as u32;
    if precision < p + 1 {
        return Err(Error::OutOfRange(format!("precision must be at least {}", p + 1)));
    }
    let diagonals: Vec<Poly1<K>> = (0..precision)
        .map(|n| {
            if n < p {
                Poly1::zero()
            } else {
                Poly1::monomial(n as usize).sub(&Poly1::monomial((n - p + 1) as usize))
            }
        })
        .collect();
    Ok(series_from_diagonals(&diagonals))
}
