mod common;

use adelic::completions::{expand_at_point, Point, RationalFunction, TruncatedPointSeries};
use adelic::forge::{forge_counterexample, verify_certificate, CertificateDocument, CounterexampleCertificate};
use adelic::lines::{diagonal_polynomial, restrict_to_line};
use adelic::primes::PrimeSource;
use adelic::projlim::{check_compatibility, residues_from_series, series_from_residues};
use adelic::{Field, Ideal, Monomial, Poly2, Rational, F2, F3};
use proptest::prelude::*;

fn poly_strategy<K: Field>(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly2<K>> {
    prop::collection::vec((0..=max_exp, 0..=max_exp, -4i64..=4), 0..=max_terms)
        .prop_map(|terms| Poly2::from_terms(terms.into_iter().map(|(a, b, c)| (Monomial::new(a, b), K::from_i64(c)))))
}

fn f3(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly2<F3>> {
    poly_strategy::<F3>(max_exp, max_terms)
}

fn q(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly2<Rational>> {
    poly_strategy::<Rational>(max_exp, max_terms)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms_f3(a in f3(4, 6), b in f3(4, 6), c in f3(4, 6)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn ring_axioms_q(a in q(3, 5), b in q(3, 5), c in q(3, 5)) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn canonical_text_round_trips(a in f3(6, 8), b in q(5, 6)) {
        prop_assert_eq!(Poly2::<F3>::parse_canonical(&a.to_canonical()).unwrap(), a);
        prop_assert_eq!(Poly2::<Rational>::parse_canonical(&b.to_canonical()).unwrap(), b);
    }

    #[test]
    fn exact_division_inverts_multiplication(a in q(3, 4), b in q(3, 4)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b), Some(a));
    }

    #[test]
    fn normal_form_is_a_projection(g1 in f3(3, 4), g2 in f3(3, 4), f in f3(5, 8)) {
        prop_assume!(!g1.is_zero() || !g2.is_zero());
        let ideal = Ideal::new(vec![g1.clone(), g2.clone()]).unwrap();
        let r = ideal.normal_form(&f);
        prop_assert!(ideal.contains(&(&f - &r)));
        prop_assert_eq!(ideal.normal_form(&r), r.clone());
        prop_assert_eq!(ideal.normal_form(&(&f + &(&g1 * &f))), r);
        prop_assert!(ideal.contains(&(&g1 * &f)));
    }

    #[test]
    fn membership_agrees_with_cofactor_oracle_q(g1 in q(2, 3), g2 in q(2, 3), c1 in q(2, 3), c2 in q(2, 3), noise in q(3, 2)) {
        prop_assume!(!g1.is_zero() && !g2.is_zero());
        let ideal = Ideal::new(vec![g1.clone(), g2.clone()]).unwrap();
        let member = &(&c1 * &g1) + &(&c2 * &g2);
        prop_assert!(ideal.contains(&member));
        let f = &member + &noise;
        if common::cofactor_member(&f, &[g1, g2], 10) {
            prop_assert!(ideal.contains(&f));
        }
    }

    #[test]
    fn product_sits_in_both_factors(a in f3(2, 3), b in f3(2, 3)) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let i = Ideal::new(vec![a.clone(), Poly2::v()]).unwrap();
        let j = Ideal::principal(b).unwrap();
        let ij = i.product(&j);
        prop_assert!(ij.is_subset_of(&i));
        prop_assert!(ij.is_subset_of(&j));
    }

    #[test]
    fn line_restriction_matches_diagonals_f3(t in f3(7, 20), lambda in 0i64..3) {
        let t = TruncatedPointSeries::new(Point::origin(), 8, t);
        let lambda = F3::from_i64(lambda);
        let r = restrict_to_line(&t, &lambda).unwrap();
        for n in 0..8 {
            prop_assert_eq!(r.coeff(n as usize), diagonal_polynomial(&t, n).unwrap().poly.eval(&lambda));
        }
    }

    #[test]
    fn line_restriction_matches_substitution_q(t in q(4, 8), lambda in -5i64..=5) {
        let lambda = Rational::from_i64(lambda);
        let series = TruncatedPointSeries::new(Point::origin(), 9, t.clone());
        let r = restrict_to_line(&series, &lambda).unwrap();
        // the restriction of a polynomial of degree <= 8 is its substitution; evaluate at several v
        for v in -2i64..=2 {
            let v = Rational::from_i64(v);
            let direct = t.evaluate(&(lambda.clone() * v.clone()), &v);
            prop_assert_eq!(r.as_poly().eval(&v), direct);
        }
    }

    #[test]
    fn taylor_expansion_of_a_polynomial_is_exact(t in q(3, 6), a in -3i64..=3, b in -3i64..=3) {
        let x = Point::new(Rational::from_i64(a), Rational::from_i64(b));
        let s = expand_at_point(&RationalFunction::polynomial(t.clone()), &x, 7).unwrap();
        // local coordinates: t(u, v) = s(u - a, v - b)
        let back = s.terms().shift(&-Rational::from_i64(a), &-Rational::from_i64(b));
        prop_assert_eq!(back, t);
    }

    #[test]
    fn multiplying_by_the_inverse_gives_one(t in q(3, 5), c in 1i64..=4) {
        let unit = &t * &Poly2::u() + Poly2::constant(Rational::from_i64(c));
        let s = TruncatedPointSeries::new(Point::origin(), 6, unit);
        let inv = s.inverse().unwrap();
        prop_assert_eq!(s.mul(&inv).terms().clone(), Poly2::one());
    }
}

fn certificate(n: usize) -> CounterexampleCertificate<F2> {
    forge_counterexample::<F2>(&PrimeSource::Exhaustive, n).unwrap()
}

#[test]
fn forging_is_deterministic_and_prefix_coherent() {
    let six = certificate(6);
    assert_eq!(six.to_document().to_json(), certificate(6).to_document().to_json());
    for n in 2..6 {
        assert_eq!(six.prefix(n).unwrap().to_document(), certificate(n).to_document());
    }
}

#[test]
fn forged_certificates_verify_over_f2_and_f3() {
    for n in 2..=6 {
        assert!(verify_certificate(&certificate(n)).unwrap().passed, "f2 N = {n}");
        let c = forge_counterexample::<F3>(&PrimeSource::Exhaustive, n).unwrap();
        assert!(verify_certificate(&c).unwrap().passed, "f3 N = {n}");
    }
}

#[test]
fn membership_coherence() {
    let c = certificate(6);
    for n in 2..=6 {
        let f = &c.terms[n - 1];
        assert!(c.tower.ideal(n).contains(f));
        assert!(Ideal::principal(Poly2::monomial(c.gap(n), 0)).unwrap().contains(f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn single_mutations_are_detected(n in 4usize..=6, which in 0usize..6, index in 0usize..16, bump in 1u32..3) {
        let c = certificate(n);
        let mut m = c.clone();
        match which {
            0 => {
                let i = index % n;
                m.terms[i] = &m.terms[i] + &Poly2::monomial(bump, 1);
            }
            1 => {
                let i = index % (n - 1);
                m.l_of_n[i] += bump;
            }
            2 => {
                let i = index % n;
                let mut w = m.tower.witnesses().to_vec();
                w[i] = &w[i] * &Poly2::v();
                m.tower = adelic::tower::IdealTower::from_parts(m.tower.primes().to_vec(), m.tower.ideals().to_vec(), w).unwrap();
            }
            3 => {
                let row = index % n;
                m.schedule[row][index % (row + 1)] += bump;
            }
            4 => {
                let i = index % (n - 1);
                m.l_of_n[i] = m.l_of_n[i].saturating_sub(bump).max(if i == 0 { 0 } else { 1 });
                prop_assume!(m.l_of_n[i] != c.l_of_n[i]);
            }
            _ => {
                let i = index % n;
                m.terms[i] = &m.terms[i] * &Poly2::u();
            }
        }
        prop_assert!(!verify_certificate(&m).unwrap().passed);
    }
}

#[test]
fn residues_roundtrip_with_random_lifts() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let c = certificate(5);
    let series = c.series().unwrap();
    let system = residues_from_series(&series).unwrap();
    assert!(check_compatibility(&system).compatible);
    // shifting each lift by an element of its ideal is still a lift
    let lifts: Vec<Poly2<F2>> = (1..=5)
        .map(|n| {
            let g = &c.tower.witnesses()[n - 1];
            &series.partial_sum(n) + &(g * &common::random_poly::<F2, _>(&mut rng, 2, 0.5))
        })
        .collect();
    let back = series_from_residues(&system, Some(&lifts)).unwrap();
    let again = residues_from_series(&back).unwrap();
    assert!(again.equivalent(&system));
    assert_eq!(again.reduced().residues(), system.residues());
}

#[test]
fn certificate_json_is_byte_stable() {
    for n in 2..=6 {
        let json = certificate(n).to_document().to_json();
        let doc = CertificateDocument::from_json(&json).unwrap();
        let back = CounterexampleCertificate::<F2>::from_document(&doc).unwrap();
        assert_eq!(back.to_document().to_json(), json);
    }
}
