#![allow(dead_code)]

use adelic::{Field, Monomial, Poly2};
use rand::Rng;

/// All monomials of total degree `<= d`.
pub fn monomials(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=d {
        for v in 0..=deg {
            out.push(Monomial::new(deg - v, v));
        }
    }
    out
}

/// Row-reduces `rows` in place and returns the pivot columns.
fn echelon<K: Field>(rows: &mut Vec<Vec<K>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].try_inv().unwrap();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..cols {
                    let sub = factor.clone() * rows[r][j].clone();
                    rows[i][j] = rows[i][j].clone() - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Cofactor oracle: is `f = sum c_i g_i` with every `deg(c_i g_i) <= bound`?
/// Decided by linear algebra on the multiples `m * g_i`.
pub fn cofactor_member<K: Field>(f: &Poly2<K>, gens: &[Poly2<K>], bound: u32) -> bool {
    if f.is_zero() {
        return true;
    }
    if f.degree().unwrap() > bound {
        return false;
    }
    let cols = monomials(bound);
    let index = |m: Monomial| cols.iter().position(|x| *x == m).unwrap();
    let to_row = |p: &Poly2<K>| {
        let mut row = vec![K::zero(); cols.len()];
        for (m, c) in p.terms() {
            row[index(m)] = c.clone();
        }
        row
    };
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let dg = g.degree().unwrap();
        if dg > bound {
            continue;
        }
        for m in monomials(bound - dg) {
            rows.push(to_row(&g.mul_term(&K::one(), m)));
        }
    }
    let rank = if rows.is_empty() { 0 } else { echelon(&mut rows).len() };
    rows.push(to_row(f));
    echelon(&mut rows).len() == rank
}

/// A random coefficient: uniform over `F_p`, or a small integer over `Q`.
pub fn random_scalar<K: Field, R: Rng>(rng: &mut R) -> K {
    match K::order() {
        Some(q) => K::from_i64(rng.gen_range(0..q) as i64),
        None => K::from_i64(rng.gen_range(-4..=4)),
    }
}

/// A random polynomial of degree `<= d` with each monomial present with probability `density`.
pub fn random_poly<K: Field, R: Rng>(rng: &mut R, d: u32, density: f64) -> Poly2<K> {
    let mut p = Poly2::zero();
    for m in monomials(d) {
        if rng.gen_bool(density) {
            p.add_term(m, random_scalar::<K, R>(rng));
        }
    }
    p
}

/// A random nonzero polynomial of degree `<= d`.
pub fn random_nonzero<K: Field, R: Rng>(rng: &mut R, d: u32, density: f64) -> Poly2<K> {
    loop {
        let p = random_poly::<K, R>(rng, d, density);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn poly<K: Field>(s: &str) -> Poly2<K> {
    Poly2::parse(s).unwrap()
}
