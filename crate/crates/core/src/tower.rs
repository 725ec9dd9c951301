//! The ideal tower `a_1 = p_1`, `a_n = a_{n-1}^2 * p_n`, its witnesses, and
//! the total-degree filtration with its gap function.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::Ideal;
use crate::poly::{all_polys_on, monomials_up_to, Monomial, Poly2};
use crate::primes::{PrimeIdeal, PrimeRecord, PrimeShape, BRUTE_FORCE_LIMIT};

#[derive(Clone, Debug)]
pub struct IdealTower<K: Field> {
    primes: Vec<PrimeIdeal<K>>,
    ideals: Vec<Ideal<K>>,
    witnesses: Vec<Poly2<K>>,
}

impl<K: Field> IdealTower<K> {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn primes(&self) -> &[PrimeIdeal<K>] {
        &self.primes
    }

    /// `a_1 .. a_N` (0-based slice; `ideals()[n - 1]` is `a_n`).
    pub fn ideals(&self) -> &[Ideal<K>] {
        &self.ideals
    }

    pub fn witnesses(&self) -> &[Poly2<K>] {
        &self.witnesses
    }

    /// `a_n`, 1-based.
    pub fn ideal(&self, n: usize) -> &Ideal<K> {
        &self.ideals[n - 1]
    }

    /// `p_m`, 1-based.
    pub fn prime(&self, m: usize) -> &PrimeIdeal<K> {
        &self.primes[m - 1]
    }

    /// Reassembles a tower from stored parts without recomputing anything.
    pub fn from_parts(primes: Vec<PrimeIdeal<K>>, ideals: Vec<Ideal<K>>, witnesses: Vec<Poly2<K>>) -> Result<Self> {
        if primes.is_empty() || primes.len() != ideals.len() || ideals.len() != witnesses.len() {
            return Err(Error::Schema("tower primes, ideals and witnesses must have equal nonzero length".into()));
        }
        Ok(IdealTower { primes, ideals, witnesses })
    }

    /// The first `n` levels.
    pub fn prefix(&self, n: usize) -> IdealTower<K> {
        IdealTower {
            primes: self.primes[..n].to_vec(),
            ideals: self.ideals[..n].to_vec(),
            witnesses: self.witnesses[..n].to_vec(),
        }
    }

    /// Checks the recursion, `g_n` in `a_n`, `g_n != 0` and `a_n ⊆ a_{n-1}`.
    /// Returns a description of the first violation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for n in 1..=self.len() {
            let expected = if n == 1 {
                self.prime(1).ideal()
            } else {
                let prev = self.ideal(n - 1);
                prev.product(prev).product(&self.prime(n).ideal())
            };
            if !expected.same_ideal(self.ideal(n)) {
                return Err(format!("a_{n} does not match the recursion"));
            }
            let g = &self.witnesses[n - 1];
            if g.is_zero() || !self.ideal(n).contains(g) {
                return Err(format!("witness g_{n} is zero or not in a_{n}"));
            }
            if n > 1 && !self.ideal(n).is_subset_of(self.ideal(n - 1)) {
                return Err(format!("a_{n} is not contained in a_{}", n - 1));
            }
        }
        Ok(())
    }
}

/// JSON form of a tower: primes, generators of each `a_n`, and witnesses.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerRecord {
    pub primes: Vec<PrimeRecord>,
    pub ideals: Vec<Vec<String>>,
    pub witnesses: Vec<String>,
}

impl<K: Field> IdealTower<K> {
    pub fn record(&self) -> TowerRecord {
        TowerRecord {
            primes: self.primes.iter().map(PrimeIdeal::record).collect(),
            ideals: self
                .ideals
                .iter()
                .map(|i| i.generators().iter().map(Poly2::to_canonical).collect())
                .collect(),
            witnesses: self.witnesses.iter().map(Poly2::to_canonical).collect(),
        }
    }

    /// Parses a record without checking any mathematical claim in it.
    /// Non-canonical text is a schema error.
    pub fn from_record(r: &TowerRecord) -> Result<Self> {
        let primes = r
            .primes
            .iter()
            .map(|p| {
                let shape = PrimeShape::from_texts(&p.shape, &p.generators)?;
                if shape.generator_texts() != p.generators {
                    return Err(Error::Schema(format!("prime {} is not in normal form", p.index)));
                }
                Ok(PrimeIdeal { shape, index: p.index })
            })
            .collect::<Result<Vec<_>>>()?;
        let ideals = r
            .ideals
            .iter()
            .map(|gens| {
                let gens = gens.iter().map(|g| Poly2::parse_canonical(g)).collect::<Result<Vec<_>, _>>()?;
                Ideal::new(gens).map_err(|_| Error::Schema("tower ideal without a nonzero generator".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let witnesses = r
            .witnesses
            .iter()
            .map(|g| Poly2::parse_canonical(g))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(primes, ideals, witnesses)
    }
}

/// Builds the first `n` levels of the tower over the given primes.
pub fn build_tower<K: Field>(primes: &[PrimeIdeal<K>], n: usize) -> Result<IdealTower<K>> {
    if primes.is_empty() || n == 0 {
        return Err(Error::PrefixTooShort("the tower needs at least one prime".into()));
    }
    if n > primes.len() {
        return Err(Error::PrefixTooShort(format!("tower depth {n} exceeds {} enumerated primes", primes.len())));
    }
    let mut ideals: Vec<Ideal<K>> = Vec::with_capacity(n);
    for p in &primes[..n] {
        let next = match ideals.last() {
            None => p.ideal(),
            Some(prev) => prev.product(prev).product(&p.ideal()),
        };
        ideals.push(next);
    }
    let witnesses = ideals.iter().map(choose_witness).collect();
    Ok(IdealTower { primes: primes[..n].to_vec(), ideals, witnesses })
}

/// The generator of smallest (total degree, canonical text).
pub fn choose_witness<K: Field>(ideal: &Ideal<K>) -> Poly2<K> {
    ideal
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .min_by_key(|g| (g.degree_or_zero(), g.to_canonical()))
        .cloned()
        .expect("ideals have a nonzero generator")
}

/// `e(n, m) = 2^(n - m)`: `a_n ⊆ a_m^(2^(n-m)) ⊆ p_m^(2^(n-m))` for `m <= n`.
pub fn schedule_exponent(n: usize, m: usize) -> u32 {
    assert!(m >= 1 && m <= n, "schedule is defined for 1 <= m <= n");
    1u32.checked_shl((n - m) as u32).expect("tower depth too large for the schedule")
}

/// Lower-triangular table `e(n, m)` for `1 <= m <= n <= depth`; row `n - 1` holds `m = 1..=n`.
pub fn schedule_table(depth: usize) -> Vec<Vec<u32>> {
    (1..=depth)
        .map(|n| (1..=n).map(|m| schedule_exponent(n, m)).collect())
        .collect()
}

/// The total-degree filtration `F_l = {f : deg f <= l}` with the local
/// parameter `t = u` at the origin.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Filtration;

/// JSON form of a [`Filtration`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationRecord {
    pub rule: String,
    pub point: String,
    pub parameter: String,
}

impl Filtration {
    pub const RULE: &'static str = "total-degree";
    pub const POINT: &'static str = "(0,0)";
    pub const PARAMETER: &'static str = "u";

    pub fn contains<K: Field>(&self, f: &Poly2<K>, level: u32) -> bool {
        f.degree().is_none_or(|d| d <= level)
    }

    /// Smallest level containing `f`.
    pub fn level_of<K: Field>(&self, f: &Poly2<K>) -> u32 {
        f.degree_or_zero()
    }

    /// `t^a`.
    pub fn parameter_power<K: Field>(&self, a: u32) -> Poly2<K> {
        Poly2::monomial(a, 0)
    }

    pub fn record(&self) -> FiltrationRecord {
        FiltrationRecord {
            rule: Self::RULE.into(),
            point: Self::POINT.into(),
            parameter: Self::PARAMETER.into(),
        }
    }

    pub fn from_record(r: &FiltrationRecord) -> Result<Self> {
        if r.rule == Self::RULE && r.point == Self::POINT && r.parameter == Self::PARAMETER {
            Ok(Filtration)
        } else {
            Err(Error::Schema(format!("unsupported filtration {r:?}")))
        }
    }
}

/// `a(l) = l + 1`: the least exponent with `F_l ∩ (u^a) = 0`.
///
/// A polynomial of degree `<= l` divisible by `u^(l+1)` has every monomial
/// with `u`-exponent above its total degree, so it is zero.
pub fn a_of_l(l: u32) -> u32 {
    l + 1
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapStatus {
    /// Every element of `F_l` was checked.
    Verified,
    /// Exhaustive check over budget; only random samples were checked.
    AnalyticOnly,
    /// A nonzero member of `F_l ∩ (u^a)` was found.
    Failed,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GapReport {
    pub field: String,
    pub level: u32,
    pub a: u32,
    pub status: GapStatus,
    pub checked: u64,
    pub counterexample: Option<String>,
}

/// Number of random samples drawn when the exhaustive check is over budget.
pub const GAP_SAMPLES: u64 = 2000;

/// Confirms `F_l ∩ (u^(l+1)) = 0` over a finite field: exhaustively when
/// `|F_l|` fits in the brute-force budget, by seeded random sampling otherwise.
pub fn verify_filtration_gap<K: Field>(l: u32) -> Result<GapReport> {
    let elems = K::elements().ok_or_else(|| Error::UnsupportedEnumeration("gap verification needs a finite field".into()))?;
    let a = a_of_l(l);
    let ideal = Ideal::principal(Filtration.parameter_power::<K>(a)).expect("nonzero");
    let support = monomials_up_to(l);
    let q = elems.len() as u64;
    let size = q.checked_pow(support.len() as u32).filter(|n| *n <= BRUTE_FORCE_LIMIT);

    let mut report = GapReport {
        field: K::tag(),
        level: l,
        a,
        status: GapStatus::Verified,
        checked: 0,
        counterexample: None,
    };
    let check = |f: Poly2<K>, report: &mut GapReport| {
        report.checked += 1;
        if !f.is_zero() && ideal.contains(&f) {
            report.status = GapStatus::Failed;
            report.counterexample = Some(f.to_canonical());
            return false;
        }
        true
    };

    match size {
        Some(_) => {
            for f in all_polys_on::<K>(&support).unwrap() {
                if !check(f, &mut report) {
                    break;
                }
            }
        }
        None => {
            report.status = GapStatus::AnalyticOnly;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ l as u64);
            for _ in 0..GAP_SAMPLES {
                let f = Poly2::from_terms(
                    support
                        .iter()
                        .map(|m: &Monomial| (*m, elems[rng.gen_range(0..elems.len())].clone())),
                );
                if !check(f, &mut report) {
                    break;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::primes::{enumerate_primes, EnumerationBudget, PrimeShape, PrimeSource};

    type F2 = Fp<2>;
    type F3 = Fp<3>;

    fn f2_primes(n: usize) -> Vec<PrimeIdeal<F2>> {
        enumerate_primes(&PrimeSource::Exhaustive, EnumerationBudget::new(n, 3).unwrap()).unwrap()
    }

    #[test]
    fn worked_tower_over_f2() {
        let tower = build_tower(&f2_primes(3), 3).unwrap();
        let gens: Vec<Vec<String>> = tower
            .ideals()
            .iter()
            .map(|i| i.generators().iter().map(|g| g.to_canonical()).collect())
            .collect();
        assert_eq!(gens, [vec!["u"], vec!["u^2*v"], vec!["u^5*v^2 + u^4*v^3"]]);
        let w: Vec<String> = tower.witnesses().iter().map(|g| g.to_canonical()).collect();
        assert_eq!(w, ["u", "u^2*v", "u^5*v^2 + u^4*v^3"]);
        tower.check_invariants().unwrap();
    }

    #[test]
    fn base_case_and_errors() {
        let primes = f2_primes(2);
        let t = build_tower(&primes, 1).unwrap();
        assert!(t.ideal(1).same_ideal(&primes[0].ideal()));
        assert!(matches!(build_tower::<F2>(&[], 1), Err(Error::PrefixTooShort(_))));
        assert!(build_tower(&primes, 3).is_err());
    }

    #[test]
    fn user_primes_over_q() {
        let shapes = vec![
            PrimeShape::<Rational>::from_texts("height1", &["u".into()]).unwrap(),
            PrimeShape::from_texts("height1", &["v".into()]).unwrap(),
        ];
        let primes = enumerate_primes(&PrimeSource::Supplied(shapes), EnumerationBudget::new(2, 1).unwrap()).unwrap();
        let t = build_tower(&primes, 2).unwrap();
        assert_eq!(t.ideal(2).generators()[0].to_canonical(), "u^2*v");
    }

    #[test]
    fn witness_rule_picks_smallest_generator() {
        let i = Ideal::new(vec![
            Poly2::<F2>::parse("u^2").unwrap(),
            Poly2::parse("v").unwrap(),
            Poly2::parse("u").unwrap(),
        ])
        .unwrap();
        assert_eq!(choose_witness(&i).to_canonical(), "u");
    }

    #[test]
    fn tower_sits_in_prime_powers() {
        let tower = build_tower(&f2_primes(5), 5).unwrap();
        for n in 1..=5 {
            for m in 1..=n {
                let power = tower.prime(m).ideal().power(schedule_exponent(n, m)).unwrap();
                assert!(tower.ideal(n).is_subset_of(&power), "a_{n} ⊄ p_{m}^e");
            }
        }
    }

    #[test]
    fn gap_values() {
        assert_eq!(a_of_l(0), 1);
        assert_eq!(a_of_l(3), 4);
        assert_eq!(a_of_l(7), 8);
        assert!((0..50).all(|l| a_of_l(l + 1) > a_of_l(l)));
    }

    #[test]
    fn gap_verification_small_levels() {
        for l in 0..=3 {
            let r = verify_filtration_gap::<F2>(l).unwrap();
            assert_eq!(r.status, GapStatus::Verified);
            assert_eq!(r.checked, 1 << ((l + 1) * (l + 2) / 2));
        }
        for l in 0..=2 {
            assert_eq!(verify_filtration_gap::<F3>(l).unwrap().status, GapStatus::Verified);
        }
        let r = verify_filtration_gap::<F2>(7).unwrap();
        assert_eq!(r.status, GapStatus::AnalyticOnly);
        assert_eq!(r.a, 8);
        assert_eq!(r.checked, GAP_SAMPLES);
        assert!(verify_filtration_gap::<Rational>(1).is_err());
    }

    #[test]
    fn filtration_membership() {
        let f = Poly2::<F2>::parse("u^4*v + u").unwrap();
        assert!(Filtration.contains(&f, 5));
        assert!(!Filtration.contains(&f, 4));
        assert!(Filtration.contains(&Poly2::<F2>::zero(), 0));
    }
}
