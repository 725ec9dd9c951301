//! Ideals of `k[u, v]`, reduced Gröbner bases and membership.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, MonomialOrder, Poly2};

/// Reduced Gröbner basis: monic elements, sorted by ascending leading monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroebnerBasis<K: Field> {
    elements: Vec<Poly2<K>>,
    order: MonomialOrder,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn elements(&self) -> &[Poly2<K>] {
        &self.elements
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.elements.iter().filter_map(Poly2::leading_monomial)
    }

    /// Whether the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    /// Fully reduced remainder of `f` modulo the basis.
    pub fn normal_form(&self, f: &Poly2<K>) -> Poly2<K> {
        normal_form(f, &self.elements)
    }

    /// Monomials not divisible by any leading monomial, if there are finitely many.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let lms: Vec<Monomial> = self.leading_monomials().collect();
        let pure_u = lms.iter().filter(|m| m.v == 0).map(|m| m.u).min()?;
        let pure_v = lms.iter().filter(|m| m.u == 0).map(|m| m.v).min()?;
        let mut out = Vec::new();
        for i in 0..pure_u {
            for j in 0..pure_v {
                let m = Monomial::new(i, j);
                if !lms.iter().any(|l| l.divides(m)) {
                    out.push(m);
                }
            }
        }
        out.sort();
        Some(out)
    }
}

/// Outcome of a membership test. The normal form is returned either way.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Membership<K: Field> {
    pub member: bool,
    pub normal_form: Poly2<K>,
}

fn normal_form<K: Field>(f: &Poly2<K>, basis: &[Poly2<K>]) -> Poly2<K> {
    let mut p = f.clone();
    let mut r = Poly2::zero();
    while let Some((lm, lc)) = p.leading_term() {
        let lc = lc.clone();
        let reducer = basis.iter().find_map(|g| {
            let (glm, glc) = g.leading_term()?;
            glm.quotient_of(lm).map(|q| (g, q, glc.clone()))
        });
        match reducer {
            Some((g, q, glc)) => {
                let c = lc * glc.try_inv().expect("basis element has nonzero leading coefficient");
                p = &p - &g.mul_term(&c, q);
            }
            None => {
                r.add_term(lm, lc.clone());
                p.add_term(lm, -lc);
            }
        }
    }
    r
}

fn s_polynomial<K: Field>(f: &Poly2<K>, g: &Poly2<K>) -> Poly2<K> {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let l = fm.lcm(gm);
    let a = f.mul_term(&fc.try_inv().unwrap(), fm.quotient_of(l).unwrap());
    let b = g.mul_term(&gc.try_inv().unwrap(), gm.quotient_of(l).unwrap());
    a - b
}

/// Buchberger's algorithm, followed by minimalization and interreduction.
pub fn groebner_basis<K: Field>(gens: &[Poly2<K>], order: MonomialOrder) -> Result<GroebnerBasis<K>> {
    let mut basis: Vec<Poly2<K>> = gens.iter().filter(|g| !g.is_zero()).map(Poly2::monic).collect();
    if basis.is_empty() {
        return Err(Error::DegenerateIdeal);
    }
    if let Some(unit) = basis.iter().find(|g| g.is_constant()) {
        return Ok(GroebnerBasis { elements: vec![unit.monic()], order });
    }
    // pairs keyed by (degree of lcm, lcm, i, j) so the smallest lcm goes first
    let mut pairs: BTreeSet<(u32, Monomial, usize, usize)> = BTreeSet::new();
    let push_pairs = |pairs: &mut BTreeSet<_>, basis: &[Poly2<K>], j: usize| {
        let mj = basis[j].leading_monomial().unwrap();
        for (i, gi) in basis.iter().enumerate().take(j) {
            let mi = gi.leading_monomial().unwrap();
            let l = mi.lcm(mj);
            // coprime leading monomials: the S-polynomial reduces to zero
            if l == mi.times(mj) {
                continue;
            }
            pairs.insert((l.degree(), l, i, j));
        }
    };
    for j in 1..basis.len() {
        push_pairs(&mut pairs, &basis, j);
    }
    while let Some(pair) = pairs.pop_first() {
        let (_, _, i, j) = pair;
        let s = s_polynomial(&basis[i], &basis[j]);
        let h = normal_form(&s, &basis);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            return Ok(GroebnerBasis { elements: vec![Poly2::one()], order });
        }
        basis.push(h.monic());
        push_pairs(&mut pairs, &basis, basis.len() - 1);
    }

    // minimal basis: drop elements whose leading monomial is a multiple of another's
    let mut minimal: Vec<Poly2<K>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            let hm = h.leading_monomial().unwrap();
            k != idx && hm.divides(lm) && (hm != lm || k < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    // interreduce
    let mut reduced = Vec::with_capacity(minimal.len());
    for idx in 0..minimal.len() {
        let others: Vec<Poly2<K>> = minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != idx)
            .map(|(_, g)| g.clone())
            .collect();
        let (lm, _) = minimal[idx].leading_term().unwrap();
        let tail = &minimal[idx] - &Poly2::term(minimal[idx].coeff(lm), lm);
        let tail_nf = normal_form(&tail, &others);
        reduced.push((Poly2::monomial(lm.u, lm.v) + tail_nf).monic());
    }
    reduced.sort_by_key(|g| g.leading_monomial().unwrap());
    Ok(GroebnerBasis { elements: reduced, order })
}

/// A finitely generated ideal with a lazily computed reduced basis.
#[derive(Clone, Debug)]
pub struct Ideal<K: Field> {
    generators: Vec<Poly2<K>>,
    basis: OnceLock<GroebnerBasis<K>>,
}

impl<K: Field> Ideal<K> {
    pub fn new(generators: Vec<Poly2<K>>) -> Result<Self> {
        if generators.iter().all(Poly2::is_zero) {
            return Err(Error::DegenerateIdeal);
        }
        Ok(Ideal { generators, basis: OnceLock::new() })
    }

    pub fn principal(g: Poly2<K>) -> Result<Self> {
        Self::new(vec![g])
    }

    pub fn generators(&self) -> &[Poly2<K>] {
        &self.generators
    }

    pub fn groebner(&self) -> &GroebnerBasis<K> {
        self.basis.get_or_init(|| {
            groebner_basis(&self.generators, MonomialOrder::GrevlexUV)
                .expect("constructor guarantees a nonzero generator")
        })
    }

    pub fn membership(&self, f: &Poly2<K>) -> Membership<K> {
        let normal_form = self.groebner().normal_form(f);
        Membership { member: normal_form.is_zero(), normal_form }
    }

    pub fn contains(&self, f: &Poly2<K>) -> bool {
        self.membership(f).member
    }

    pub fn normal_form(&self, f: &Poly2<K>) -> Poly2<K> {
        self.groebner().normal_form(f)
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Ideal<K>) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_ideal(&self, other: &Ideal<K>) -> bool {
        self.groebner().elements() == other.groebner().elements()
    }

    /// The single generator, when the reduced basis has exactly one element.
    pub fn principal_generator(&self) -> Option<&Poly2<K>> {
        match self.groebner().elements() {
            [g] => Some(g),
            _ => None,
        }
    }

    /// Pairwise products of generators, with exact duplicates removed.
    pub fn product(&self, other: &Ideal<K>) -> Ideal<K> {
        let mut gens: Vec<Poly2<K>> = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                let p = a * b;
                if !p.is_zero() && !gens.contains(&p) {
                    gens.push(p);
                }
            }
        }
        Ideal { generators: gens, basis: OnceLock::new() }
    }

    pub fn power(&self, e: u32) -> Result<Ideal<K>> {
        if e == 0 {
            return Err(Error::OutOfRange("ideal power exponent must be at least 1".into()));
        }
        let mut acc: Option<Ideal<K>> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.product(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base);
            }
        }
        Ok(acc.expect("e >= 1"))
    }
}

/// Free-function form of the membership decision.
pub fn ideal_membership<K: Field>(f: &Poly2<K>, ideal: &Ideal<K>) -> Membership<K> {
    ideal.membership(f)
}
