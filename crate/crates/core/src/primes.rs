//! Deterministic enumeration of the nonzero prime ideals of `k[u, v]`.
//!
//! Over a finite field every nonzero prime is either principal, generated by
//! an irreducible polynomial, or maximal, presented as `(f(u), g(u, v))`
//! with `f` monic irreducible and `g` monic in `v`, of `u`-degree below
//! `deg f`, irreducible over `k[u]/(f)`. That presentation is unique, so the
//! enumeration is complete and repetition-free.
//!
//! Ordering: by data degree, then height-1 before maximal, then primes
//! through the origin first, then number of terms, then canonical text.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::ideal::Ideal;
use crate::linalg;
use crate::poly::{all_polys_on, monomials_up_to, Monomial, Poly2};
use crate::univariate::{is_irreducible, monic_of_degree, Poly1};

/// Identifier of the enumeration order, recorded in certificates.
pub const ORDERING_ID: &str = "degree>shape>origin>terms>text/v1";
/// Ordering id for caller-supplied prime lists.
pub const SUPPLIED_ORDERING_ID: &str = "supplied/v1";
/// Ordering id for [`PrimeSource::RationalFamily`].
pub const RATIONAL_FAMILY_ORDERING_ID: &str = "rational-family>degree>shape>origin>terms>text/v1";

/// Largest polynomial space (in elements) the brute-force routines will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 22;

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum PrimeShape<K: Field> {
    /// Principal prime `(c)` with `c` irreducible, monic.
    Height1 { curve: Poly2<K> },
    /// Maximal ideal `(f(u), g(u, v))`.
    Maximal { f: Poly2<K>, g: Poly2<K> },
}

impl<K: Field> PrimeShape<K> {
    pub fn tag(&self) -> &'static str {
        match self {
            PrimeShape::Height1 { .. } => "height1",
            PrimeShape::Maximal { .. } => "maximal",
        }
    }

    pub fn generators(&self) -> Vec<Poly2<K>> {
        match self {
            PrimeShape::Height1 { curve } => vec![curve.clone()],
            PrimeShape::Maximal { f, g } => vec![f.clone(), g.clone()],
        }
    }

    pub fn ideal(&self) -> Ideal<K> {
        Ideal::new(self.generators()).expect("prime generators are nonzero")
    }

    /// Largest total degree among the defining polynomials.
    pub fn data_degree(&self) -> u32 {
        self.generators().iter().map(Poly2::degree_or_zero).max().unwrap_or(0)
    }

    pub fn curve(&self) -> Option<&Poly2<K>> {
        match self {
            PrimeShape::Height1 { curve } => Some(curve),
            PrimeShape::Maximal { .. } => None,
        }
    }

    /// `(alpha, beta)` when this is the maximal ideal of a rational point.
    pub fn rational_point(&self) -> Option<(K, K)> {
        match self {
            PrimeShape::Maximal { f, g }
                if f.degree() == Some(1) && g.degree() == Some(1) && g.coeff(Monomial::new(1, 0)).is_zero() =>
            {
                Some((-f.constant_term(), -g.constant_term()))
            }
            _ => None,
        }
    }

    pub fn generator_texts(&self) -> Vec<String> {
        self.generators().iter().map(Poly2::to_canonical).collect()
    }

    fn sort_key(&self) -> (u32, u8, bool, usize, String) {
        let gens = self.generators();
        (
            self.data_degree(),
            matches!(self, PrimeShape::Maximal { .. }) as u8,
            gens.iter().any(|g| !g.constant_term().is_zero()),
            gens.iter().map(Poly2::num_terms).sum(),
            self.generator_texts().join(", "),
        )
    }

    /// Reads a shape from its tag and generator texts, normalizing generators to monic.
    pub fn from_texts(tag: &str, generators: &[String]) -> Result<Self> {
        let polys = generators
            .iter()
            .map(|s| Poly2::<K>::parse(s).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        match (tag, polys.as_slice()) {
            ("height1", [c]) if c.degree().unwrap_or(0) >= 1 => Ok(PrimeShape::Height1 { curve: c.monic() }),
            ("maximal", [f, g]) if !f.is_zero() && !g.is_zero() => Ok(PrimeShape::Maximal { f: f.monic(), g: g.monic() }),
            _ => Err(Error::Schema(format!("bad prime shape {tag:?} with {} generators", polys.len()))),
        }
    }
}

/// The deterministic ordering used by every enumeration.
pub fn compare_shapes<K: Field>(a: &PrimeShape<K>, b: &PrimeShape<K>) -> Ordering {
    a.sort_key().cmp(&b.sort_key())
}

/// An enumerated prime with its 1-based position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimeIdeal<K: Field> {
    pub shape: PrimeShape<K>,
    pub index: usize,
}

impl<K: Field> PrimeIdeal<K> {
    pub fn ideal(&self) -> Ideal<K> {
        self.shape.ideal()
    }

    pub fn record(&self) -> PrimeRecord {
        PrimeRecord {
            index: self.index,
            shape: self.shape.tag().to_string(),
            generators: self.shape.generator_texts(),
        }
    }
}

/// JSON form of a prime.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeRecord {
    pub index: usize,
    pub shape: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EnumerationBudget {
    max_count: usize,
    max_data_degree: u32,
}

impl EnumerationBudget {
    pub fn new(max_count: usize, max_data_degree: u32) -> Result<Self> {
        if max_count == 0 || max_data_degree == 0 {
            return Err(Error::OutOfRange("enumeration budget entries must be at least 1".into()));
        }
        Ok(EnumerationBudget { max_count, max_data_degree })
    }

    pub fn max_count(&self) -> usize {
        self.max_count
    }

    pub fn max_data_degree(&self) -> u32 {
        self.max_data_degree
    }
}

/// Where the primes come from.
#[derive(Clone, Debug)]
pub enum PrimeSource<K: Field> {
    /// Complete enumeration; finite fields only.
    Exhaustive,
    /// Caller-supplied primes, used in the given order.
    Supplied(Vec<PrimeShape<K>>),
    /// Over `Q`: linear height-1 primes and rational points, by height.
    RationalFamily,
}

impl<K: Field> PrimeSource<K> {
    pub fn ordering_id(&self) -> &'static str {
        match self {
            PrimeSource::Exhaustive => ORDERING_ID,
            PrimeSource::Supplied(_) => SUPPLIED_ORDERING_ID,
            PrimeSource::RationalFamily => RATIONAL_FAMILY_ORDERING_ID,
        }
    }
}

/// Height-1 primes of exact data degree `d` over a finite field.
fn height1_of_degree<K: Field>(d: u32) -> Result<Vec<PrimeShape<K>>> {
    let mut out = Vec::new();
    for p in monic_bivariate_of_degree::<K>(d)? {
        if find_factor(&p, d / 2)?.is_none() {
            out.push(PrimeShape::Height1 { curve: p });
        }
    }
    Ok(out)
}

/// Monic bivariate polynomials of exact total degree `d`.
fn monic_bivariate_of_degree<K: Field>(d: u32) -> Result<Vec<Poly2<K>>> {
    let q = K::order().ok_or_else(|| Error::UnsupportedEnumeration(format!("{} is infinite or too large to list", K::tag())))?;
    let all = monomials_up_to(d);
    let mut out = Vec::new();
    for lead in all.iter().filter(|m| m.degree() == d) {
        let below: Vec<Monomial> = all.iter().copied().filter(|m| m < lead).collect();
        if q.checked_pow(below.len() as u32).is_none_or(|n| n > BRUTE_FORCE_LIMIT) {
            return Err(Error::BudgetExceeded(format!("degree {d} polynomials over {}", K::tag())));
        }
        let lead_poly = Poly2::monomial(lead.u, lead.v);
        out.extend(all_polys_on::<K>(&below).unwrap().map(|tail| &lead_poly + &tail));
    }
    Ok(out)
}

/// A monic factor of total degree `1..=max_factor_degree`, if one exists.
fn find_factor<K: Field>(p: &Poly2<K>, max_factor_degree: u32) -> Result<Option<Poly2<K>>> {
    let d = p.degree_or_zero();
    for k in 1..=max_factor_degree.min(d.saturating_sub(1)) {
        for cand in monic_bivariate_of_degree::<K>(k)? {
            if p.exact_div(&cand).is_some() {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

/// Polynomials in `v` with coefficients in `k[u]/(f)`, as coefficient lists.
fn to_v_coeffs<K: Field>(g: &Poly2<K>, f: &Poly1<K>) -> Vec<Poly1<K>> {
    let mut out = vec![Poly1::zero(); g.v_degree() as usize + 1];
    for (m, c) in g.terms() {
        let t = Poly1::monomial(m.u as usize).scale(c);
        out[m.v as usize] = out[m.v as usize].add(&t);
    }
    out.into_iter().map(|c| c.rem(f)).collect()
}

/// Remainder of `g` by a `v`-monic `h`, both over `k[u]/(f)`.
fn rem_over_extension<K: Field>(g: &[Poly1<K>], h: &[Poly1<K>], f: &Poly1<K>) -> Vec<Poly1<K>> {
    let mut r: Vec<Poly1<K>> = g.to_vec();
    let dh = h.len() - 1;
    while r.len() > dh {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - dh;
        if !lead.is_zero() {
            for (j, hc) in h.iter().enumerate() {
                r[shift + j] = r[shift + j].sub(&lead.mul(hc)).rem(f);
            }
        }
        r.pop();
    }
    r
}

/// Irreducibility of a `v`-monic `g` over the field `k[u]/(f)`.
fn irreducible_over_extension<K: Field>(g: &Poly2<K>, f: &Poly1<K>) -> Result<bool> {
    let gc = to_v_coeffs(g, f);
    let dg = gc.len() - 1;
    if dg <= 1 {
        return Ok(dg == 1);
    }
    let df = f.degree().unwrap_or(0);
    let ext_elems = extension_elements::<K>(df)?;
    for k in 1..=dg / 2 {
        let count = (ext_elems.len() as u64).checked_pow(k as u32);
        if count.is_none_or(|n| n > BRUTE_FORCE_LIMIT) {
            return Err(Error::BudgetExceeded("factor search over extension".into()));
        }
        for mut idx in 0..count.unwrap() {
            let mut h = Vec::with_capacity(k + 1);
            for _ in 0..k {
                h.push(ext_elems[(idx % ext_elems.len() as u64) as usize].clone());
                idx /= ext_elems.len() as u64;
            }
            h.push(Poly1::one());
            if rem_over_extension(&gc, &h, f).iter().all(Poly1::is_zero) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All elements of `k[u]/(f)` for `deg f = df`, as polynomials of degree `< df`.
fn extension_elements<K: Field>(df: usize) -> Result<Vec<Poly1<K>>> {
    let elems = K::elements().ok_or_else(|| Error::UnsupportedEnumeration(format!("{} is infinite or too large to list", K::tag())))?;
    let q = elems.len() as u64;
    let total = q
        .checked_pow(df as u32)
        .filter(|n| *n <= BRUTE_FORCE_LIMIT)
        .ok_or_else(|| Error::BudgetExceeded("residue field too large".into()))?;
    Ok((0..total)
        .map(|mut idx| {
            let mut c = Vec::with_capacity(df);
            for _ in 0..df {
                c.push(elems[(idx % q) as usize].clone());
                idx /= q;
            }
            Poly1::new(c)
        })
        .collect())
}

/// Maximal ideals of exact data degree `d` over a finite field.
fn maximal_of_degree<K: Field>(d: u32) -> Result<Vec<PrimeShape<K>>> {
    let mut out = Vec::new();
    for df in 1..=d as usize {
        let fs = monic_of_degree::<K>(df).ok_or_else(|| Error::UnsupportedEnumeration(format!("{} is infinite or too large to list", K::tag())))?;
        for f in fs.into_iter().filter(|f| is_irreducible(f) == Some(true)) {
            let f2 = f.to_bivariate(true);
            // g = v^dg + sum_{j<dg} c_j(u) v^j with deg_u c_j < df and total degree <= d
            for dg in 1..=d {
                let support: Vec<Monomial> = (0..dg)
                    .flat_map(|j| (0..df as u32).map(move |i| Monomial::new(i, j)))
                    .filter(|m| m.degree() <= d)
                    .collect();
                let q = K::order().unwrap();
                if q.checked_pow(support.len() as u32).is_none_or(|n| n > BRUTE_FORCE_LIMIT) {
                    return Err(Error::BudgetExceeded(format!("maximal ideals of data degree {d}")));
                }
                for tail in all_polys_on::<K>(&support).unwrap() {
                    let g = Poly2::monomial(0, dg) + tail;
                    if f2.degree_or_zero().max(g.degree_or_zero()) != d {
                        continue;
                    }
                    if irreducible_over_extension(&g, &f)? {
                        out.push(PrimeShape::Maximal { f: f2.clone(), g });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn rational_family(height: u64) -> Vec<PrimeShape<Rational>> {
    let h = height as i64;
    let int = |n: i64| Rational::from_integer(BigInt::from(n));
    let mut out = Vec::new();
    let range = || -h..=h;
    for a in range() {
        for b in range() {
            for c in range() {
                if a.abs().max(b.abs()).max(c.abs()) != h || (a == 0 && b == 0) {
                    continue;
                }
                if a.gcd(&b).gcd(&c) != 1 {
                    continue;
                }
                // one representative per line: first nonzero of (a, b) positive
                let lead = if a != 0 { a } else { b };
                if lead < 0 {
                    continue;
                }
                let p = Poly2::from_terms([
                    (Monomial::new(1, 0), int(a)),
                    (Monomial::new(0, 1), int(b)),
                    (Monomial::ONE, int(c)),
                ]);
                out.push(PrimeShape::Height1 { curve: p.monic() });
            }
        }
    }
    for x in range() {
        for y in range() {
            if x.abs().max(y.abs()) != h && !(h == 1 && x == 0 && y == 0) {
                continue;
            }
            out.push(PrimeShape::Maximal {
                f: Poly2::u() - Poly2::constant(int(x)),
                g: Poly2::v() - Poly2::constant(int(y)),
            });
        }
    }
    out.sort_by(compare_shapes);
    out.dedup();
    out
}

/// Enumerates nonzero primes in the deterministic order, up to the budget.
pub fn enumerate_primes<K: Field>(source: &PrimeSource<K>, budget: EnumerationBudget) -> Result<Vec<PrimeIdeal<K>>> {
    let shapes: Vec<PrimeShape<K>> = match source {
        PrimeSource::Supplied(list) => {
            for (i, a) in list.iter().enumerate() {
                if list[..i].iter().any(|b| b.ideal().same_ideal(&a.ideal())) {
                    return Err(Error::UnsupportedEnumeration(format!("supplied prime {} repeats an earlier one", i + 1)));
                }
            }
            list.iter().take(budget.max_count).cloned().collect()
        }
        PrimeSource::RationalFamily => {
            if K::tag() != Rational::tag() {
                return Err(Error::UnsupportedEnumeration("the rational family is only defined over q".into()));
            }
            let mut out: Vec<PrimeShape<K>> = Vec::new();
            let mut height = 1;
            while out.len() < budget.max_count {
                for s in rational_family(height) {
                    let gens: Vec<String> = s.generator_texts();
                    out.push(PrimeShape::from_texts(s.tag(), &gens)?);
                }
                height += 1;
            }
            out.truncate(budget.max_count);
            out
        }
        PrimeSource::Exhaustive => {
            if K::order().is_none() {
                return Err(Error::UnsupportedEnumeration(
                    "complete enumeration needs a finite field; supply primes or use the rational family".into(),
                ));
            }
            let mut out = Vec::new();
            for d in 1..=budget.max_data_degree {
                let mut level = height1_of_degree::<K>(d)?;
                level.extend(maximal_of_degree::<K>(d)?);
                level.sort_by(compare_shapes);
                out.extend(level);
                if out.len() >= budget.max_count {
                    break;
                }
            }
            out.truncate(budget.max_count);
            out
        }
    };
    Ok(shapes
        .into_iter()
        .enumerate()
        .map(|(i, shape)| PrimeIdeal { shape, index: i + 1 })
        .collect())
}

/// Verdict of [`is_prime`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PrimalityVerdict<K: Field> {
    Prime,
    /// Principal ideal with a proper factor of its generator.
    Composite { factor: Poly2<K> },
    /// Zero-dimensional ideal whose quotient is not a field (or the unit ideal).
    NotMaximal { quotient_dimension: usize },
    /// The search could not decide within the degree bound.
    Undetermined,
}

impl<K: Field> PrimalityVerdict<K> {
    pub fn is_prime(&self) -> bool {
        matches!(self, PrimalityVerdict::Prime)
    }
}

/// Primality of a principal or zero-dimensional ideal by brute force.
///
/// Principal `(c)`: searches monic factors of degree `1..=min(deg c / 2, degree_bound)`.
/// Zero-dimensional: checks over `F_p` that every nonzero element of the
/// quotient acts invertibly.
pub fn is_prime<K: Field>(ideal: &Ideal<K>, degree_bound: u32) -> Result<PrimalityVerdict<K>> {
    let gb = ideal.groebner();
    if gb.is_unit() {
        return Ok(PrimalityVerdict::NotMaximal { quotient_dimension: 0 });
    }
    if let Some(c) = ideal.principal_generator() {
        let d = c.degree_or_zero();
        if d == 1 {
            return Ok(PrimalityVerdict::Prime);
        }
        if K::order().is_none() {
            return Ok(PrimalityVerdict::Undetermined);
        }
        if let Some(factor) = find_factor(c, (d / 2).min(degree_bound))? {
            return Ok(PrimalityVerdict::Composite { factor });
        }
        return Ok(if d / 2 <= degree_bound { PrimalityVerdict::Prime } else { PrimalityVerdict::Undetermined });
    }
    let Some(basis) = gb.standard_monomials() else {
        return Err(Error::ShapeUnsupported("neither principal nor zero-dimensional".into()));
    };
    let dim = basis.len();
    if dim == 1 {
        return Ok(PrimalityVerdict::Prime);
    }
    let Some(elements) = all_polys_on::<K>(&basis) else {
        return Ok(PrimalityVerdict::Undetermined);
    };
    let q = K::order().unwrap();
    if q.checked_pow(dim as u32).is_none_or(|n| n > 1 << 16) {
        return Err(Error::BudgetExceeded(format!("quotient of dimension {dim} over {}", K::tag())));
    }
    for r in elements.skip(1) {
        let rows: Vec<Vec<K>> = basis
            .iter()
            .map(|m| {
                let prod = gb.normal_form(&r.mul_term(&K::one(), *m));
                basis.iter().map(|b| prod.coeff(*b)).collect()
            })
            .collect();
        if linalg::rank(rows) < dim {
            return Ok(PrimalityVerdict::NotMaximal { quotient_dimension: dim });
        }
    }
    Ok(PrimalityVerdict::Prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F2 = Fp<2>;
    type P2 = Poly2<F2>;

    fn texts(primes: &[PrimeIdeal<F2>]) -> Vec<String> {
        primes.iter().map(|p| p.shape.generator_texts().join(", ")).collect()
    }

    #[test]
    fn first_primes_over_f2() {
        let p = enumerate_primes::<F2>(&PrimeSource::Exhaustive, EnumerationBudget::new(3, 4).unwrap()).unwrap();
        assert_eq!(texts(&p), ["u", "v", "u + v"]);
        let p = enumerate_primes::<F2>(&PrimeSource::Exhaustive, EnumerationBudget::new(1, 4).unwrap()).unwrap();
        assert_eq!(texts(&p), ["u"]);
        assert_eq!(p[0].index, 1);
    }

    #[test]
    fn degree_one_exhaustive() {
        let p = enumerate_primes::<F2>(&PrimeSource::Exhaustive, EnumerationBudget::new(1000, 1).unwrap()).unwrap();
        assert_eq!(
            texts(&p),
            [
                "u", "v", "u + v", "u + 1", "v + 1", "u + v + 1",
                "u, v", "u + 1, v", "u, v + 1", "u + 1, v + 1",
            ]
        );
    }

    #[test]
    fn degree_two_maximals_over_f2() {
        let p = enumerate_primes::<F2>(&PrimeSource::Exhaustive, EnumerationBudget::new(1000, 2).unwrap()).unwrap();
        let maximal2: Vec<String> = p
            .iter()
            .filter(|x| x.shape.tag() == "maximal" && x.shape.data_degree() == 2)
            .map(|x| x.shape.generator_texts().join(", "))
            .collect();
        // six closed points of degree 2 (two over u = 0, 1 and four over u^2 + u + 1),
        // plus six of degree 4 cut out by quadratics in v over F_4
        assert_eq!(maximal2.len(), 12);
        assert!(maximal2.contains(&"u, v^2 + v + 1".to_string()));
        assert!(maximal2.contains(&"u^2 + u + 1, u + v".to_string()));
    }

    #[test]
    fn is_prime_examples() {
        let i = Ideal::principal(P2::parse("u + v").unwrap()).unwrap();
        assert_eq!(is_prime(&i, 3).unwrap(), PrimalityVerdict::Prime);
        let i = Ideal::principal(P2::parse("u^2*v").unwrap()).unwrap();
        assert!(matches!(is_prime(&i, 3).unwrap(), PrimalityVerdict::Composite { .. }));
        let m = Ideal::new(vec![P2::u(), P2::v()]).unwrap();
        assert_eq!(is_prime(&m, 2).unwrap(), PrimalityVerdict::Prime);
        let not_field = Ideal::new(vec![P2::parse("u^2").unwrap(), P2::v()]).unwrap();
        assert_eq!(is_prime(&not_field, 2).unwrap(), PrimalityVerdict::NotMaximal { quotient_dimension: 2 });
        let odd = Ideal::new(vec![P2::parse("u^2").unwrap(), P2::parse("u*v").unwrap()]).unwrap();
        assert!(matches!(is_prime(&odd, 2), Err(Error::ShapeUnsupported(_))));
    }

    #[test]
    fn f4_point_is_maximal() {
        let m = Ideal::new(vec![P2::parse("u^2 + u + 1").unwrap(), P2::parse("v + u").unwrap()]).unwrap();
        assert_eq!(is_prime(&m, 2).unwrap(), PrimalityVerdict::Prime);
        assert_eq!(m.groebner().standard_monomials().unwrap().len(), 2);
    }

    #[test]
    fn rationals_need_a_source() {
        let b = EnumerationBudget::new(3, 1).unwrap();
        assert!(matches!(
            enumerate_primes::<Rational>(&PrimeSource::Exhaustive, b),
            Err(Error::UnsupportedEnumeration(_))
        ));
        let fam = enumerate_primes::<Rational>(&PrimeSource::RationalFamily, EnumerationBudget::new(12, 1).unwrap()).unwrap();
        assert_eq!(fam.len(), 12);
        assert_eq!(fam[0].shape.generator_texts(), ["u"]);
    }

    #[test]
    fn budget_rejects_zero() {
        assert!(EnumerationBudget::new(0, 1).is_err());
        assert!(EnumerationBudget::new(1, 0).is_err());
    }
}
