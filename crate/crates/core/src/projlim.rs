//! Elements of the projective limit of `k[u, v]/a_n` over the tower, and
//! the two conversions between compatible residue systems and series
//! `sum f_n` with `f_n` in `a_{n-1}`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly2;
use crate::primes::PrimeShape;
use crate::tower::{schedule_exponent, IdealTower};

/// `f ∈ p^e`, with `p^0` the unit ideal.
pub fn in_prime_power<K: Field>(f: &Poly2<K>, prime: &PrimeShape<K>, e: u32) -> bool {
    if e == 0 || f.is_zero() {
        return true;
    }
    if let Some(c) = prime.curve() {
        return f.exact_div(&c.pow(e)).is_some();
    }
    if let Some((a, b)) = prime.rational_point() {
        return f.shift(&a, &b).terms().all(|(m, _)| m.degree() >= e);
    }
    prime.ideal().power(e).map(|p| p.contains(f)).unwrap_or(false)
}

/// A series `f_1 + f_2 + ...` over a tower prefix, with its convergence table.
///
/// `schedule[n - 1][m - 1] = e(n, m)` claims `f_n ∈ p_m^e(n, m)`; every
/// entry is checked on construction.
#[derive(Clone, Debug)]
pub struct SeriesAdele<K: Field> {
    tower: IdealTower<K>,
    terms: Vec<Poly2<K>>,
    schedule: Vec<Vec<u32>>,
}

impl<K: Field> SeriesAdele<K> {
    pub fn new(tower: IdealTower<K>, terms: Vec<Poly2<K>>, schedule: Vec<Vec<u32>>) -> Result<Self> {
        let depth = tower.len();
        if terms.len() != depth {
            return Err(Error::InvalidSeries(format!("{} terms for a tower of depth {depth}", terms.len())));
        }
        if schedule.len() != depth || schedule.iter().enumerate().any(|(i, row)| row.len() != i + 1) {
            return Err(Error::InvalidSeries("schedule must be lower triangular with one row per term".into()));
        }
        for n in 2..=depth {
            if !tower.ideal(n - 1).contains(&terms[n - 1]) {
                return Err(Error::InvalidSeries(format!("f_{n} is not in a_{}", n - 1)));
            }
        }
        for (n, row) in schedule.iter().enumerate() {
            for (m, &e) in row.iter().enumerate() {
                if !in_prime_power(&terms[n], &tower.prime(m + 1).shape, e) {
                    return Err(Error::InvalidSeries(format!("f_{} is not in p_{}^{e}", n + 1, m + 1)));
                }
            }
        }
        Ok(SeriesAdele { tower, terms, schedule })
    }

    /// Series whose terms satisfy `f_n ∈ a_n`, with the schedule `e(n, m) = 2^(n-m)`.
    pub fn with_tower_schedule(tower: IdealTower<K>, terms: Vec<Poly2<K>>) -> Result<Self> {
        let schedule = (1..=tower.len())
            .map(|n| (1..=n).map(|m| schedule_exponent(n, m)).collect())
            .collect();
        Self::new(tower, terms, schedule)
    }

    pub fn zero(tower: IdealTower<K>) -> Self {
        let depth = tower.len();
        let schedule = (1..=depth).map(|n| vec![0; n]).collect();
        SeriesAdele { tower, terms: vec![Poly2::zero(); depth], schedule }
    }

    pub fn tower(&self) -> &IdealTower<K> {
        &self.tower
    }

    pub fn terms(&self) -> &[Poly2<K>] {
        &self.terms
    }

    pub fn schedule(&self) -> &[Vec<u32>] {
        &self.schedule
    }

    /// `e(n, m)`, 1-based.
    pub fn exponent(&self, n: usize, m: usize) -> u32 {
        self.schedule[n - 1][m - 1]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `f_1 + ... + f_n`.
    pub fn partial_sum(&self, n: usize) -> Poly2<K> {
        self.terms[..n].iter().sum()
    }

    /// Exponent `e` with every unseen term `f_n` (`n > N`) in `p_m^e`:
    /// such terms lie in `a_{n-1} ⊆ a_N ⊆ p_m^(2^(N-m))`.
    pub fn tail_exponent(&self, m: usize) -> u32 {
        schedule_exponent(self.len(), m)
    }

    /// Smallest `n0` such that `e(n, m) >= precision` for every `n0 <= n <= N`
    /// (`N + 1` when even `f_N` is not covered).
    pub fn stabilization_index(&self, m: usize, precision: u32) -> usize {
        let mut n0 = self.len() + 1;
        for n in (m..=self.len()).rev() {
            if self.exponent(n, m) >= precision {
                n0 = n;
            } else {
                break;
            }
        }
        n0
    }
}

/// Residues `r_n mod a_n` over a tower prefix.
#[derive(Clone, Debug)]
pub struct ResidueSystem<K: Field> {
    tower: IdealTower<K>,
    residues: Vec<Poly2<K>>,
}

impl<K: Field> ResidueSystem<K> {
    pub fn new(tower: IdealTower<K>, residues: Vec<Poly2<K>>) -> Result<Self> {
        if residues.len() != tower.len() {
            return Err(Error::Schema(format!("{} residues for a tower of depth {}", residues.len(), tower.len())));
        }
        Ok(ResidueSystem { tower, residues })
    }

    pub fn tower(&self) -> &IdealTower<K> {
        &self.tower
    }

    pub fn residues(&self) -> &[Poly2<K>] {
        &self.residues
    }

    /// Same system with every residue replaced by its normal form.
    pub fn reduced(&self) -> Self {
        let residues = self
            .residues
            .iter()
            .enumerate()
            .map(|(i, r)| self.tower.ideal(i + 1).normal_form(r))
            .collect();
        ResidueSystem { tower: self.tower.clone(), residues }
    }

    /// Whether both systems agree modulo every `a_n` of the common tower.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.residues.len() == other.residues.len()
            && self
                .residues
                .iter()
                .zip(&other.residues)
                .enumerate()
                .all(|(i, (a, b))| self.tower.ideal(i + 1).contains(&(a - b)))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Compatibility {
    pub compatible: bool,
    /// First `n` (1-based) with `r_{n+1} - r_n ∉ a_n`.
    pub first_failure: Option<usize>,
}

pub fn check_compatibility<K: Field>(system: &ResidueSystem<K>) -> Compatibility {
    let r = &system.residues;
    let first_failure = (1..r.len()).find(|&n| !system.tower.ideal(n).contains(&(&r[n] - &r[n - 1])));
    Compatibility { compatible: first_failure.is_none(), first_failure }
}

/// `r_m = NF(f_1 + ... + f_m, a_m)`.
pub fn residues_from_series<K: Field>(series: &SeriesAdele<K>) -> Result<ResidueSystem<K>> {
    let tower = series.tower.clone();
    let mut residues = Vec::with_capacity(series.len());
    let mut partial = Poly2::zero();
    for (i, f) in series.terms.iter().enumerate() {
        if i > 0 && !tower.ideal(i).contains(f) {
            return Err(Error::InvalidSeries(format!("f_{} is not in a_{i}", i + 1)));
        }
        partial = &partial + f;
        residues.push(tower.ideal(i + 1).normal_form(&partial));
    }
    Ok(ResidueSystem { tower, residues })
}

/// Telescoping series `f_1 = h_1`, `f_n = h_n - h_{n-1}` from lifts `h_n` of `r_n`.
/// Lifts default to the normal forms of the residues.
pub fn series_from_residues<K: Field>(system: &ResidueSystem<K>, lifts: Option<&[Poly2<K>]>) -> Result<SeriesAdele<K>> {
    let tower = &system.tower;
    let lifts: Vec<Poly2<K>> = match lifts {
        Some(h) => {
            if h.len() != system.residues.len() {
                return Err(Error::Schema(format!("{} lifts for {} residues", h.len(), system.residues.len())));
            }
            for (i, (hn, rn)) in h.iter().zip(&system.residues).enumerate() {
                if !tower.ideal(i + 1).contains(&(hn - rn)) {
                    return Err(Error::BadLift { index: i + 1 });
                }
            }
            h.to_vec()
        }
        None => system.reduced().residues,
    };
    let mut terms = Vec::with_capacity(lifts.len());
    for (i, h) in lifts.iter().enumerate() {
        terms.push(if i == 0 { h.clone() } else { h - &lifts[i - 1] });
    }
    // f_n ∈ a_{n-1} ⊆ p_m^(2^(n-1-m)) for m < n; no claim for m = n
    let schedule = (1..=terms.len())
        .map(|n| (1..=n).map(|m| if m < n { schedule_exponent(n - 1, m) } else { 0 }).collect())
        .collect();
    SeriesAdele::new(tower.clone(), terms, schedule).map_err(|e| match e {
        Error::InvalidSeries(msg) => Error::InvalidSeries(format!("residue system is not compatible: {msg}")),
        other => other,
    })
}
