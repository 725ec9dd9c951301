//! Truncated completions of `k[u, v]` at rational points and along
//! irreducible curves, curve valuations, and the evaluation of certified
//! series in those completions.

use std::fmt;


use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::poly::{all_polys_on, monomials_up_to, Poly2};
use crate::primes::{PrimeShape, BRUTE_FORCE_LIMIT};
use crate::projlim::SeriesAdele;

/// `numerator / denominator` with a nonzero denominator; no normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction<K: Field> {
    numerator: Poly2<K>,
    denominator: Poly2<K>,
}

impl<K: Field> RationalFunction<K> {
    pub fn new(numerator: Poly2<K>, denominator: Poly2<K>) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::OutOfRange("rational function with zero denominator".into()));
        }
        Ok(RationalFunction { numerator, denominator })
    }

    pub fn polynomial(p: Poly2<K>) -> Self {
        RationalFunction { numerator: p, denominator: Poly2::one() }
    }

    pub fn numerator(&self) -> &Poly2<K> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly2<K> {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction {
            numerator: &self.numerator * &other.numerator,
            denominator: &self.denominator * &other.denominator,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFunction {
            numerator: &self.numerator * &other.denominator + &other.numerator * &self.denominator,
            denominator: &self.denominator * &other.denominator,
        }
    }
}

/// A `k`-rational point `(alpha, beta)`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Point<K: Field> {
    pub alpha: K,
    pub beta: K,
}

impl<K: Field> Point<K> {
    pub fn new(alpha: K, beta: K) -> Self {
        Point { alpha, beta }
    }

    pub fn origin() -> Self {
        Point { alpha: K::zero(), beta: K::zero() }
    }

    /// Parses `"(a,b)"` with coefficients as in polynomial text (e.g. `(0,1)`, `(1/2,-3)`).
    pub fn parse(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Schema(format!("point {s:?} must look like (a,b)")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Schema(format!("point {s:?} must look like (a,b)")))?;
        let coord = |t: &str| -> Result<K> {
            let p = Poly2::<K>::parse(t)?;
            if !p.is_constant() {
                return Err(Error::Schema(format!("point coordinate {t:?} is not a constant")));
            }
            Ok(p.constant_term())
        };
        Ok(Point { alpha: coord(a)?, beta: coord(b)? })
    }

    /// The maximal ideal `(u - alpha, v - beta)`.
    pub fn maximal_ideal(&self) -> PrimeShape<K> {
        PrimeShape::Maximal {
            f: Poly2::u() - Poly2::constant(self.alpha.clone()),
            g: Poly2::v() - Poly2::constant(self.beta.clone()),
        }
    }
}

impl<K: Field> fmt::Display for Point<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.alpha, self.beta)
    }
}

/// Element of `O_x / m_x^N` at a rational point, written in the local
/// coordinates `u - alpha`, `v - beta` (printed as `u`, `v`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedPointSeries<K: Field> {
    center: Point<K>,
    precision: u32,
    terms: Poly2<K>,
}

impl<K: Field> TruncatedPointSeries<K> {
    /// Truncates `local_terms` to total degree `< precision`.
    pub fn new(center: Point<K>, precision: u32, local_terms: Poly2<K>) -> Self {
        let terms = local_terms.truncate(precision);
        TruncatedPointSeries { center, precision, terms }
    }

    pub fn center(&self) -> &Point<K> {
        &self.center
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn terms(&self) -> &Poly2<K> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.center, other.center, "series at different points");
        let n = self.precision.min(other.precision);
        Self::new(self.center.clone(), n, &self.terms + &other.terms)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.center, other.center, "series at different points");
        let n = self.precision.min(other.precision);
        Self::new(self.center.clone(), n, &self.terms.truncate(n) * &other.terms.truncate(n))
    }

    /// Multiplicative inverse mod `m^N`, when the constant term is nonzero.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.terms.constant_term();
        let c0_inv = c0.try_inv()?;
        let n = self.precision;
        // 1/(c0 (1 + r)) = c0^{-1} * sum_{k<N} (-r)^k, with r in m
        let r = (&self.terms.scale(&c0_inv) - &Poly2::one()).truncate(n);
        let minus_r = -&r;
        let mut acc = Poly2::one();
        let mut power = Poly2::one();
        for _ in 1..n {
            power = (&power * &minus_r).truncate(n);
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Some(Self::new(self.center.clone(), n, acc.scale(&c0_inv)))
    }
}

impl<K: Field> fmt::Display for TruncatedPointSeries<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(m^{}) at {}", self.terms, self.precision, self.center)
    }
}

/// Taylor expansion of `f` at `x` modulo `m_x^N`.
pub fn expand_at_point<K: Field>(f: &RationalFunction<K>, x: &Point<K>, precision: u32) -> Result<TruncatedPointSeries<K>> {
    let num = f.numerator.shift(&x.alpha, &x.beta).truncate(precision);
    let den = f.denominator.shift(&x.alpha, &x.beta).truncate(precision.max(1));
    if den.constant_term().is_zero() {
        return Err(Error::NotRegularAtPoint(x.to_string()));
    }
    let num = TruncatedPointSeries::new(x.clone(), precision, num);
    let den = TruncatedPointSeries::new(x.clone(), precision, den);
    let inv = den.inverse().expect("unit constant term");
    Ok(num.mul(&inv))
}

/// Number of times `c` divides `p` exactly; `p` must be nonzero.
fn order_along<K: Field>(p: &Poly2<K>, c: &Poly2<K>) -> u32 {
    let ideal = Ideal::principal(c.clone()).expect("nonzero curve");
    let mut count = 0;
    let mut rest = p.clone();
    while ideal.contains(&rest) {
        rest = rest.exact_div(c).expect("member of a principal ideal");
        count += 1;
    }
    count
}

/// `ord_c(numerator) - ord_c(denominator)`.
pub fn curve_valuation<K: Field>(f: &RationalFunction<K>, c: &Poly2<K>) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    if c.degree().unwrap_or(0) == 0 {
        return Err(Error::OutOfRange("curve must be a nonconstant polynomial".into()));
    }
    Ok(order_along(&f.numerator, c) as i64 - order_along(&f.denominator, c) as i64)
}

/// Element of the local ring along `c`, modulo `c^M`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveResidue<K: Field> {
    curve: Poly2<K>,
    precision: u32,
    numerator: Poly2<K>,
    denominator: Poly2<K>,
}

impl<K: Field> CurveResidue<K> {
    pub fn new(curve: Poly2<K>, precision: u32, numerator: Poly2<K>, denominator: Poly2<K>) -> Result<Self> {
        if precision == 0 {
            return Err(Error::OutOfRange("curve precision must be at least 1".into()));
        }
        if Ideal::principal(curve.clone())?.contains(&denominator) {
            return Err(Error::OutOfRange("denominator vanishes along the curve".into()));
        }
        Ok(CurveResidue { curve, precision, numerator, denominator })
    }

    pub fn curve(&self) -> &Poly2<K> {
        &self.curve
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn numerator(&self) -> &Poly2<K> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly2<K> {
        &self.denominator
    }

    /// Whether the value is a polynomial residue (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.denominator == Poly2::one()
    }

    /// Equal iff `a d' - a' d ∈ (c^M)` (same curve and precision).
    pub fn equals(&self, other: &Self) -> bool {
        if self.curve != other.curve || self.precision != other.precision {
            return false;
        }
        let diff = &self.numerator * &other.denominator - &other.numerator * &self.denominator;
        diff.is_zero() || diff.exact_div(&self.curve.pow(self.precision)).is_some()
    }
}

/// Value of a series along one of its tower curves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveRestriction<K: Field> {
    pub residue: CurveResidue<K>,
    /// 1-based position of the curve in the tower.
    pub tower_index: usize,
    /// Terms `f_n` with `n >= n0` all lie in `(c^M)`.
    pub stabilization_index: usize,
}

/// Restricts a certified series to `c^M`, where `c` generates a height-1
/// prime of the series' tower.
pub fn restrict_series_to_curve<K: Field>(series: &SeriesAdele<K>, curve: &Poly2<K>, precision: u32) -> Result<CurveRestriction<K>> {
    if precision == 0 {
        return Err(Error::OutOfRange("curve precision must be at least 1".into()));
    }
    let target = curve.monic();
    let m = series
        .tower()
        .primes()
        .iter()
        .position(|p| p.shape.curve().is_some_and(|c| c.monic() == target))
        .map(|i| i + 1)
        .ok_or_else(|| Error::InsufficientCertificate(format!("curve {} is not in the tower prefix", curve)))?;
    if series.tail_exponent(m) < precision {
        return Err(Error::InsufficientPrecision(format!(
            "tail beyond the prefix is only certified in ({})^{}",
            target,
            series.tail_exponent(m)
        )));
    }
    let n0 = series.stabilization_index(m, precision);
    let modulus = Ideal::principal(target.pow(precision))?;
    let value = modulus.normal_form(&series.partial_sum(n0 - 1));
    Ok(CurveRestriction {
        residue: CurveResidue::new(target, precision, value, Poly2::one())?,
        tower_index: m,
        stabilization_index: n0,
    })
}

/// Value of a series in `O_x / m^N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PointValue<K: Field> {
    /// Taylor truncation at a rational point.
    Taylor(TruncatedPointSeries<K>),
    /// Normal form modulo `m^N` for a non-rational closed point.
    Residue { maximal: PrimeShape<K>, precision: u32, value: Poly2<K> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointStabilization<K: Field> {
    pub value: PointValue<K>,
    /// 1-based index of the tower prime `p_j ⊆ m` that controls convergence.
    pub controlling_prime: usize,
    /// Terms `f_n` with `n >= n0` all lie in `m^N`.
    pub stabilization_index: usize,
}

/// Partial sum of the series modulo `m^N`, certified by a tower prime
/// `p_j ⊆ m`: `f_n ∈ p_j^e(n, j) ⊆ m^e(n, j)`.
pub fn stabilized_point_value<K: Field>(series: &SeriesAdele<K>, maximal: &PrimeShape<K>, precision: u32) -> Result<PointStabilization<K>> {
    if !matches!(maximal, PrimeShape::Maximal { .. }) {
        return Err(Error::ShapeUnsupported("point values need a maximal ideal".into()));
    }
    let m_ideal = maximal.ideal();
    let candidates: Vec<usize> = series
        .tower()
        .primes()
        .iter()
        .filter(|p| p.ideal().is_subset_of(&m_ideal))
        .map(|p| p.index)
        .collect();
    if candidates.is_empty() {
        return Err(Error::InsufficientCertificate(format!(
            "no tower prime is contained in ({})",
            maximal.generator_texts().join(", ")
        )));
    }
    let best = candidates
        .iter()
        .filter(|&&j| series.tail_exponent(j) >= precision)
        .map(|&j| (series.stabilization_index(j, precision), j))
        .min()
        .ok_or_else(|| {
            Error::InsufficientPrecision(format!("precision {precision} exceeds the certified schedule; grow the prefix"))
        })?;
    let (n0, j) = best;
    let partial = series.partial_sum(n0 - 1);
    let value = match maximal.rational_point() {
        Some((alpha, beta)) => PointValue::Taylor(expand_at_point(
            &RationalFunction::polynomial(partial),
            &Point::new(alpha, beta),
            precision,
        )?),
        None => {
            let value = if precision == 0 {
                Poly2::zero()
            } else {
                m_ideal.power(precision)?.normal_form(&partial)
            };
            PointValue::Residue { maximal: maximal.clone(), precision, value }
        }
    };
    Ok(PointStabilization { value, controlling_prime: j, stabilization_index: n0 })
}

#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct KrullReport {
    pub field: String,
    pub degree: u32,
    pub checked: u64,
    pub passed: bool,
    pub counterexample: Option<String>,
}

/// Exhaustively checks that no nonzero polynomial of degree `<= d` expands
/// to zero at the origin modulo `m^(d+1)`.
pub fn krull_injectivity_check<K: Field>(d: u32) -> Result<KrullReport> {
    let q = K::order().ok_or_else(|| Error::UnsupportedEnumeration("Krull check needs a finite field".into()))?;
    let support = monomials_up_to(d);
    let total = q.checked_pow(support.len() as u32).filter(|n| *n <= BRUTE_FORCE_LIMIT);
    if total.is_none() {
        return Err(Error::BudgetExceeded(format!(
            "{}^{} polynomials of degree <= {d}",
            K::tag(),
            support.len()
        )));
    }
    let origin = Point::origin();
    let mut report = KrullReport { field: K::tag(), degree: d, checked: 0, passed: true, counterexample: None };
    for f in all_polys_on::<K>(&support).unwrap().skip(1) {
        report.checked += 1;
        let e = expand_at_point(&RationalFunction::polynomial(f.clone()), &origin, d + 1)?;
        if e.is_zero() {
            report.passed = false;
            report.counterexample = Some(f.to_canonical());
            break;
        }
    }
    Ok(report)
}
