//! The recursive construction of a series `f = f_1 + f_2 + ...` that lies in
//! every completion along curves and at points, yet is not a polynomial,
//! together with a self-contained certificate and its verifier.
//!
//! With witnesses `g_n ∈ a_n`: `f_1 = g_1` and `f_n = u^a(l(n)) g_n`, where
//! `l(2) = max(deg f_1, 1)` and `l(n) = max(deg(f_1 + ... + f_{n-1}), l(n-1) + 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, Poly2};
use crate::primes::{
    enumerate_primes, is_prime, EnumerationBudget, PrimalityVerdict, PrimeSource, ORDERING_ID,
    RATIONAL_FAMILY_ORDERING_ID, SUPPLIED_ORDERING_ID,
};
use crate::projlim::{in_prime_power, SeriesAdele};
use crate::tower::{a_of_l, build_tower, schedule_table, Filtration, FiltrationRecord, IdealTower, TowerRecord};

/// Deepest prefix [`forge_counterexample`] will build.
pub const MAX_FORGE_DEPTH: usize = 10;

/// Degree bound used when re-checking supplied primes.
const SUPPLIED_PRIMALITY_BOUND: u32 = 6;

#[derive(Clone, Debug)]
pub struct CounterexampleCertificate<K: Field> {
    pub field: String,
    pub ordering: String,
    pub tower: IdealTower<K>,
    pub filtration: FiltrationRecord,
    /// `l(2) .. l(N)`.
    pub l_of_n: Vec<u32>,
    /// `f_1 .. f_N`.
    pub terms: Vec<Poly2<K>>,
    /// `schedule[n - 1][m - 1] = e(n, m)`.
    pub schedule: Vec<Vec<u32>>,
    /// The report recorded at forging time.
    pub checks: VerificationReport,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexCheck {
    pub n: usize,
    pub passed: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
}

/// Pass/fail per check family and index.
///
/// (a) tail congruence, (b) nonvanishing, (c) convergence, (d) monotonicity,
/// plus the construction checks that tie the certificate to its recursion.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub tail_congruence: Vec<IndexCheck>,
    pub nonvanishing: Vec<IndexCheck>,
    pub convergence: Vec<IndexCheck>,
    pub monotonicity: Vec<IndexCheck>,
    pub construction: Vec<NamedCheck>,
    pub passed: bool,
}

impl VerificationReport {
    fn empty() -> Self {
        VerificationReport {
            tail_congruence: Vec::new(),
            nonvanishing: Vec::new(),
            convergence: Vec::new(),
            monotonicity: Vec::new(),
            construction: Vec::new(),
            passed: false,
        }
    }

    fn all_passed(&self) -> bool {
        [&self.tail_congruence, &self.nonvanishing, &self.convergence, &self.monotonicity]
            .iter()
            .all(|family| family.iter().all(|c| c.passed))
            && self.construction.iter().all(|c| c.passed)
    }

    /// Family-qualified names of the failed checks, e.g. `nonvanishing[2]`.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, family) in [
            ("tail_congruence", &self.tail_congruence),
            ("nonvanishing", &self.nonvanishing),
            ("convergence", &self.convergence),
            ("monotonicity", &self.monotonicity),
        ] {
            out.extend(family.iter().filter(|c| !c.passed).map(|c| format!("{name}[{}]", c.n)));
        }
        out.extend(self.construction.iter().filter(|c| !c.passed).map(|c| format!("construction[{}]", c.name)));
        out
    }

    /// A family by letter (`a` to `d`) or by name.
    pub fn family(&self, name: &str) -> Option<&[IndexCheck]> {
        match name {
            "a" | "tail_congruence" => Some(&self.tail_congruence),
            "b" | "nonvanishing" => Some(&self.nonvanishing),
            "c" | "convergence" => Some(&self.convergence),
            "d" | "monotonicity" => Some(&self.monotonicity),
            _ => None,
        }
    }
}

/// JSON form of a certificate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub field: String,
    pub ordering: String,
    pub tower: TowerRecord,
    pub filtration: FiltrationRecord,
    pub l_of_n: Vec<u32>,
    pub terms: Vec<String>,
    pub schedule: Vec<Vec<u32>>,
    pub checks: VerificationReport,
}

impl CertificateDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// Pretty JSON with a trailing newline; stable under parse and re-emit.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

impl<K: Field> CounterexampleCertificate<K> {
    /// Prefix length `N`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `l(n)` for `2 <= n <= N`.
    pub fn l(&self, n: usize) -> u32 {
        self.l_of_n[n - 2]
    }

    /// `a(l(n))` for `2 <= n <= N`.
    pub fn gap(&self, n: usize) -> u32 {
        a_of_l(self.l(n))
    }

    /// `f_1 + ... + f_n`.
    pub fn partial_sum(&self, n: usize) -> Poly2<K> {
        self.terms[..n].iter().sum()
    }

    /// The terms as a series over the tower, with the recorded schedule.
    pub fn series(&self) -> Result<SeriesAdele<K>> {
        SeriesAdele::new(self.tower.clone(), self.terms.clone(), self.schedule.clone())
    }

    /// The first `n` terms, re-verified.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n < 2 || n > self.len() {
            return Err(Error::OutOfRange(format!("prefix {n} of a certificate of length {}", self.len())));
        }
        let mut cert = CounterexampleCertificate {
            field: self.field.clone(),
            ordering: self.ordering.clone(),
            tower: self.tower.prefix(n),
            filtration: self.filtration.clone(),
            l_of_n: self.l_of_n[..n - 1].to_vec(),
            terms: self.terms[..n].to_vec(),
            schedule: self.schedule[..n].to_vec(),
            checks: VerificationReport::empty(),
        };
        cert.checks = expected_report(&cert)?;
        Ok(cert)
    }

    pub fn to_document(&self) -> CertificateDocument {
        CertificateDocument {
            field: self.field.clone(),
            ordering: self.ordering.clone(),
            tower: self.tower.record(),
            filtration: self.filtration.clone(),
            l_of_n: self.l_of_n.clone(),
            terms: self.terms.iter().map(Poly2::to_canonical).collect(),
            schedule: self.schedule.clone(),
            checks: self.checks.clone(),
        }
    }

    /// Parses a document over `K`. Structure and canonical text are checked
    /// here; mathematical claims are left to [`verify_certificate`].
    pub fn from_document(doc: &CertificateDocument) -> Result<Self> {
        if doc.field != K::tag() {
            return Err(Error::Schema(format!("certificate over {} read as {}", doc.field, K::tag())));
        }
        let tower = IdealTower::from_record(&doc.tower)?;
        let terms = doc.terms.iter().map(|t| Poly2::parse_canonical(t)).collect::<Result<Vec<_>, _>>()?;
        let cert = CounterexampleCertificate {
            field: doc.field.clone(),
            ordering: doc.ordering.clone(),
            tower,
            filtration: doc.filtration.clone(),
            l_of_n: doc.l_of_n.clone(),
            terms,
            schedule: doc.schedule.clone(),
            checks: doc.checks.clone(),
        };
        cert.check_structure()?;
        Ok(cert)
    }

    fn check_structure(&self) -> Result<()> {
        let n = self.terms.len();
        if n < 2 {
            return Err(Error::Schema("a certificate needs at least two terms".into()));
        }
        if self.tower.len() != n {
            return Err(Error::Schema(format!("tower of depth {} for {n} terms", self.tower.len())));
        }
        if self.l_of_n.len() != n - 1 {
            return Err(Error::Schema(format!("l_of_n must list l(2)..l({n})")));
        }
        if self.schedule.len() != n || self.schedule.iter().enumerate().any(|(i, row)| row.len() != i + 1) {
            return Err(Error::Schema("schedule must be lower triangular with one row per term".into()));
        }
        Ok(())
    }
}

/// Runs the recursion over the first `n` primes of `source`.
pub fn forge_counterexample<K: Field>(source: &PrimeSource<K>, n: usize) -> Result<CounterexampleCertificate<K>> {
    if n < 2 {
        return Err(Error::OutOfRange("the construction needs N >= 2".into()));
    }
    if n > MAX_FORGE_DEPTH {
        return Err(Error::BudgetExceeded(format!("N = {n} exceeds the supported depth {MAX_FORGE_DEPTH}")));
    }
    let primes = enumerate_primes(source, EnumerationBudget::new(n, u32::MAX)?)?;
    if primes.len() < n {
        return Err(Error::PrefixTooShort(format!("{} primes available, {n} needed", primes.len())));
    }
    let tower = build_tower(&primes, n)?;
    let g = tower.witnesses();

    let mut terms = vec![g[0].clone()];
    let mut l_of_n: Vec<u32> = Vec::with_capacity(n - 1);
    let mut sum = g[0].clone();
    for k in 2..=n {
        let l = match l_of_n.last() {
            None => terms[0].degree_or_zero().max(1),
            Some(&prev) => sum.degree_or_zero().max(prev + 1),
        };
        let f = g[k - 1].mul_term(&K::one(), Monomial::new(a_of_l(l), 0));
        sum = &sum + &f;
        l_of_n.push(l);
        terms.push(f);
    }

    let mut cert = CounterexampleCertificate {
        field: K::tag(),
        ordering: source.ordering_id().to_string(),
        tower,
        filtration: Filtration.record(),
        l_of_n,
        terms,
        schedule: schedule_table(n),
        checks: VerificationReport::empty(),
    };
    cert.checks = expected_report(&cert)?;
    Ok(cert)
}

fn index_checks(range: impl Iterator<Item = usize>, mut pass: impl FnMut(usize) -> bool) -> Vec<IndexCheck> {
    range.map(|n| IndexCheck { n, passed: pass(n) }).collect()
}

/// The report a correct certificate must carry: every check computed, with
/// the recorded-report check taken as passed.
fn expected_report<K: Field>(cert: &CounterexampleCertificate<K>) -> Result<VerificationReport> {
    cert.check_structure()?;
    let n_max = cert.len();
    let f = &cert.terms;
    let u_power = |a: u32| Poly2::<K>::monomial(a, 0);

    // (a) f_{n+1} + ... + f_N ∈ (u^a(l(n+1)))
    let tail_congruence = index_checks(1..n_max, |n| {
        let tail: Poly2<K> = f[n..].iter().sum();
        tail.is_zero() || tail.u_valuation() >= cert.gap(n + 1)
    });
    // (b) f_n ∉ (u^a(l(n+1)))
    let nonvanishing = index_checks(1..n_max, |n| !f[n - 1].is_zero() && f[n - 1].u_valuation() < cert.gap(n + 1));
    // (c) f_n ∈ p_m^e(n, m)
    let convergence = index_checks(1..=n_max, |n| {
        (1..=n).all(|m| in_prime_power(&f[n - 1], &cert.tower.prime(m).shape, cert.schedule[n - 1][m - 1]))
    });
    // (d) l strictly increasing, f_1 + ... + f_{n-1} ∈ F_l(n), f_{n-1} ∈ F_l(n)
    let monotonicity = index_checks(2..=n_max, |n| {
        let increasing = if n == 2 { cert.l(2) >= 1 } else { cert.l(n) > cert.l(n - 1) };
        increasing
            && Filtration.contains(&cert.partial_sum(n - 1), cert.l(n))
            && Filtration.contains(&f[n - 2], cert.l(n))
    });

    let g = cert.tower.witnesses();
    let mut construction = vec![
        NamedCheck { name: "field".into(), passed: cert.field == K::tag() },
        NamedCheck {
            name: "ordering".into(),
            passed: [ORDERING_ID, SUPPLIED_ORDERING_ID, RATIONAL_FAMILY_ORDERING_ID].contains(&cert.ordering.as_str()),
        },
        NamedCheck { name: "filtration".into(), passed: Filtration::from_record(&cert.filtration).is_ok() },
        NamedCheck { name: "primes".into(), passed: primes_match_ordering(cert) },
        NamedCheck { name: "tower".into(), passed: tower_matches_primes(cert) },
        NamedCheck {
            name: "terms".into(),
            passed: f[0] == g[0]
                && (2..=n_max).all(|n| f[n - 1] == g[n - 1].mul_term(&K::one(), Monomial::new(cert.gap(n), 0))),
        },
        NamedCheck {
            name: "membership".into(),
            passed: (1..=n_max).all(|n| {
                !g[n - 1].is_zero()
                    && cert.tower.ideal(n).contains(&f[n - 1])
                    && (n == 1 || f[n - 1].exact_div(&u_power(cert.gap(n))).is_some())
            }),
        },
        NamedCheck { name: "schedule".into(), passed: cert.schedule == schedule_table(n_max) },
    ];
    construction.push(NamedCheck { name: "recorded-checks".into(), passed: true });

    let mut report = VerificationReport {
        tail_congruence,
        nonvanishing,
        convergence,
        monotonicity,
        construction,
        passed: false,
    };
    report.passed = report.all_passed();
    Ok(report)
}

fn primes_match_ordering<K: Field>(cert: &CounterexampleCertificate<K>) -> bool {
    let primes = cert.tower.primes();
    if primes.iter().enumerate().any(|(i, p)| p.index != i + 1) {
        return false;
    }
    let source = match cert.ordering.as_str() {
        ORDERING_ID => PrimeSource::<K>::Exhaustive,
        RATIONAL_FAMILY_ORDERING_ID => PrimeSource::RationalFamily,
        SUPPLIED_ORDERING_ID => {
            let shapes = primes.iter().map(|p| p.shape.clone()).collect();
            if enumerate_primes(&PrimeSource::Supplied(shapes), EnumerationBudget::new(primes.len(), 1).expect("nonempty")).is_err() {
                return false;
            }
            return primes.iter().all(|p| {
                !matches!(
                    is_prime(&p.ideal(), SUPPLIED_PRIMALITY_BOUND),
                    Ok(PrimalityVerdict::Composite { .. } | PrimalityVerdict::NotMaximal { .. }) | Err(Error::ShapeUnsupported(_))
                )
            });
        }
        _ => return false,
    };
    match enumerate_primes(&source, EnumerationBudget::new(primes.len(), u32::MAX).expect("nonempty")) {
        Ok(expected) => expected.iter().map(|p| p.record()).eq(primes.iter().map(|p| p.record())),
        Err(_) => false,
    }
}

fn tower_matches_primes<K: Field>(cert: &CounterexampleCertificate<K>) -> bool {
    match build_tower(cert.tower.primes(), cert.len()) {
        Ok(expected) => expected.record() == cert.tower.record(),
        Err(_) => false,
    }
}

/// Recomputes every check. The recorded report must match the recomputed
/// one; a mismatch fails the `recorded-checks` construction check.
pub fn verify_certificate<K: Field>(cert: &CounterexampleCertificate<K>) -> Result<VerificationReport> {
    let expected = expected_report(cert)?;
    let mut report = expected.clone();
    if cert.checks != expected {
        report
            .construction
            .iter_mut()
            .filter(|c| c.name == "recorded-checks")
            .for_each(|c| c.passed = false);
        report.passed = false;
    }
    Ok(report)
}

/// Why no polynomial of degree `<= D` equals the series at the origin.
///
/// If `P = f` with `deg P <= D <= l(n)`, then `f_n + f_{n+1} + ...` equals
/// `P - (f_1 + ... + f_{n-1})`, which lies in `F_l(n) ∩ (u^a(l(n))) = 0`.
/// But the tail is `f_n` modulo `u^a(l(n+1))`, and `f_n` is not.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NonPolynomialityProof {
    pub degree_bound: u32,
    pub evidence: Vec<NonPolynomialityEvidence>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NonPolynomialityEvidence {
    pub n: usize,
    pub l_n: u32,
    pub l_next: u32,
    /// `a(l(n+1))`.
    pub modulus_exponent: u32,
    /// `l(n+1)` is the rule's next value rather than a recorded one.
    pub beyond_prefix: bool,
    /// `(f_{n+1} + ... + f_N) / u^a(l(n+1))`.
    pub tail_quotient: String,
    /// `f_n mod u^a(l(n+1))`, nonzero.
    pub residue: String,
}

pub fn certify_not_polynomial<K: Field>(cert: &CounterexampleCertificate<K>, degree_bound: u32) -> Result<NonPolynomialityProof> {
    let report = verify_certificate(cert)?;
    if !report.passed {
        return Err(Error::InsufficientCertificate(format!("certificate fails {}", report.failures().join(", "))));
    }
    let n_max = cert.len();
    if degree_bound >= cert.l(n_max) {
        return Err(Error::PrefixTooShort(format!(
            "D = {degree_bound} is not below l({n_max}) = {}; grow N",
            cert.l(n_max)
        )));
    }
    let n = (2..=n_max).find(|&n| cert.l(n) >= degree_bound).expect("l(N) > D");
    let (l_next, beyond_prefix) = if n < n_max {
        (cert.l(n + 1), false)
    } else {
        (cert.partial_sum(n_max).degree_or_zero().max(cert.l(n_max) + 1), true)
    };
    let a = a_of_l(l_next);
    let tail: Poly2<K> = cert.terms[n..].iter().sum();
    let quotient = tail
        .exact_div(&Poly2::monomial(a, 0))
        .ok_or_else(|| Error::InsufficientCertificate(format!("tail after f_{n} is not divisible by u^{a}")))?;
    let fn_ = &cert.terms[n - 1];
    let residue = Poly2::from_terms(fn_.terms().filter(|(m, _)| m.u < a).map(|(m, c)| (m, c.clone())));
    if residue.is_zero() {
        return Err(Error::InsufficientCertificate(format!("f_{n} vanishes modulo u^{a}")));
    }
    Ok(NonPolynomialityProof {
        degree_bound,
        evidence: vec![NonPolynomialityEvidence {
            n,
            l_n: cert.l(n),
            l_next,
            modulus_exponent: a,
            beyond_prefix,
            tail_quotient: quotient.to_canonical(),
            residue: residue.to_canonical(),
        }],
    })
}
