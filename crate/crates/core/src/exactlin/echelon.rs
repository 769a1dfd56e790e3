//! Reduced row echelon forms with deterministic pivoting.
//!
//! Over ℚ every row is scaled to a primitive integer vector and eliminated by
//! integer cross-multiplication (fraction-free); over 𝔽_p rows are kept monic.
//! The reduced form of a row space is unique, so results do not depend on the
//! order in which rows are fed in.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{Field, Scalar};

/// A sparse row: strictly increasing column indices with nonzero entries.
pub type SparseRow = Vec<(usize, Scalar)>;

trait Entry: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// Scales a nonempty row to its canonical representative.
    fn normalize(row: &mut Vec<(usize, Self)>);
}

impl Entry for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn normalize(row: &mut Vec<(usize, Self)>) {
        let mut content = BigInt::zero();
        for (_, v) in row.iter() {
            content = content.gcd(v);
            if content.is_one() {
                break;
            }
        }
        if row[0].1.is_negative() {
            content = -content;
        }
        if !content.is_one() {
            for (_, v) in row.iter_mut() {
                *v = &*v / &content;
            }
        }
    }
}

#[derive(Clone, Copy)]
struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    fn inv(self) -> Residue {
        let (mut acc, mut base, mut exp) = (1u64, self.value, self.modulus - 2);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.modulus;
            }
            base = base * base % self.modulus;
            exp >>= 1;
        }
        Residue { value: acc, modulus: self.modulus }
    }
}

impl Entry for Residue {
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn mul(&self, other: &Self) -> Self {
        Residue { value: self.value * other.value % self.modulus, modulus: self.modulus }
    }
    fn sub(&self, other: &Self) -> Self {
        Residue { value: (self.value + self.modulus - other.value) % self.modulus, modulus: self.modulus }
    }
    fn normalize(row: &mut Vec<(usize, Self)>) {
        if row[0].1.value != 1 {
            let inv = row[0].1.inv();
            for (_, v) in row.iter_mut() {
                *v = v.mul(&inv);
            }
        }
    }
}

/// `a_coef * a - b_coef * b`, dropping cancelled entries.
fn combine<E: Entry>(a: &[(usize, E)], a_coef: &E, b: &[(usize, E)], b_coef: &E) -> Vec<(usize, E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push((a[i].0, a[i].1.mul(a_coef)));
            i += 1;
        } else if take_b {
            let zero = b[j].1.sub(&b[j].1);
            out.push((b[j].0, zero.sub(&b[j].1.mul(b_coef))));
            j += 1;
        } else {
            let v = a[i].1.mul(a_coef).sub(&b[j].1.mul(b_coef));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup<E>(row: &[(usize, E)], col: usize) -> Option<&E> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

struct Core<E: Entry> {
    pivots: BTreeMap<usize, Vec<(usize, E)>>,
}

impl<E: Entry> Core<E> {
    fn new() -> Self {
        Core { pivots: BTreeMap::new() }
    }

    fn insert(&mut self, mut row: Vec<(usize, E)>) -> bool {
        if row.is_empty() {
            return false;
        }
        E::normalize(&mut row);
        let hits: Vec<usize> = row.iter().map(|(c, _)| *c).filter(|c| self.pivots.contains_key(c)).collect();
        for col in hits {
            let Some(v) = lookup(&row, col).cloned() else { continue };
            let pivot_row = &self.pivots[&col];
            row = combine(&row, &pivot_row[0].1, pivot_row, &v);
            if row.is_empty() {
                return false;
            }
            E::normalize(&mut row);
        }
        let lead = row[0].0;
        let lead_value = row[0].1.clone();
        for existing in self.pivots.values_mut() {
            if let Some(v) = lookup(existing, lead).cloned() {
                *existing = combine(existing, &lead_value, &row, &v);
                E::normalize(existing);
            }
        }
        self.pivots.insert(lead, row);
        true
    }
}

enum Engine {
    Integer(Core<BigInt>),
    Modular(Core<Residue>),
}

/// Reduced row echelon form of the span of a set of sparse rows.
pub struct Echelon {
    field: Field,
    width: usize,
    engine: Engine,
}

impl Echelon {
    pub fn new(field: Field, width: usize) -> Self {
        let engine = match field {
            Field::Rational => Engine::Integer(Core::new()),
            Field::Prime(_) => Engine::Modular(Core::new()),
        };
        Echelon { field, width, engine }
    }

    pub fn from_rows<I: IntoIterator<Item = SparseRow>>(field: Field, width: usize, rows: I) -> Self {
        let mut e = Echelon::new(field, width);
        for r in rows {
            e.push(r);
        }
        e
    }

    /// Adds a row; returns whether it enlarged the row space.
    pub fn push(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(row.iter().all(|(c, v)| *c < self.width && !v.is_zero()));
        match &mut self.engine {
            Engine::Integer(core) => {
                let mut lcm = BigInt::one();
                for (_, v) in &row {
                    lcm = lcm.lcm(v.as_rational().expect("rational row").denom());
                }
                let ints = row
                    .iter()
                    .map(|(c, v)| {
                        let r = v.as_rational().expect("rational row");
                        (*c, r.numer() * (&lcm / r.denom()))
                    })
                    .collect();
                core.insert(ints)
            }
            Engine::Modular(core) => {
                let res = row
                    .iter()
                    .map(|(c, v)| {
                        let (value, modulus) = v.residue().expect("prime-field row");
                        (*c, Residue { value, modulus })
                    })
                    .collect();
                core.insert(res)
            }
        }
    }

    pub fn rank(&self) -> usize {
        match &self.engine {
            Engine::Integer(c) => c.pivots.len(),
            Engine::Modular(c) => c.pivots.len(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        match &self.engine {
            Engine::Integer(c) => c.pivots.keys().copied().collect(),
            Engine::Modular(c) => c.pivots.keys().copied().collect(),
        }
    }

    /// Rows of the reduced form in pivot order, each scaled so its pivot is 1.
    pub fn reduced_rows(&self) -> Vec<(usize, SparseRow)> {
        match &self.engine {
            Engine::Integer(core) => core
                .pivots
                .iter()
                .map(|(&p, row)| {
                    let lead = &row[0].1;
                    let r = row
                        .iter()
                        .map(|(c, v)| (*c, Scalar::Rational(BigRational::new(v.clone(), lead.clone()))))
                        .collect();
                    (p, r)
                })
                .collect(),
            Engine::Modular(core) => {
                let Field::Prime(p) = self.field else { unreachable!() };
                core.pivots
                    .iter()
                    .map(|(&piv, row)| {
                        let r = row.iter().map(|(c, v)| (*c, Scalar::Prime { value: v.value as u32, modulus: p })).collect();
                        (piv, r)
                    })
                    .collect()
            }
        }
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let piv = self.pivot_columns();
        let mut k = 0;
        (0..self.width)
            .filter(|c| {
                if k < piv.len() && piv[k] == *c {
                    k += 1;
                    false
                } else {
                    true
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rational.int(n)
    }

    #[test]
    fn order_independent_reduced_form() {
        let rows = vec![vec![(0, q(2)), (1, q(4)), (2, q(6))], vec![(1, q(1)), (2, q(1))], vec![(0, q(1)), (2, q(5))]];
        let a = Echelon::from_rows(Field::Rational, 3, rows.clone()).reduced_rows();
        let b = Echelon::from_rows(Field::Rational, 3, rows.into_iter().rev()).reduced_rows();
        assert_eq!(a, b);
    }

    #[test]
    fn dependent_rows_do_not_add_rank() {
        let mut e = Echelon::new(Field::Rational, 2);
        assert!(e.push(vec![(0, q(1)), (1, q(1))]));
        assert!(!e.push(vec![(0, q(3)), (1, q(3))]));
        assert_eq!(e.rank(), 1);
        assert_eq!(e.free_columns(), vec![1]);
    }

    #[test]
    fn modular_rows_are_monic() {
        let f7 = Field::prime(7).unwrap();
        let e = Echelon::from_rows(f7, 2, vec![vec![(0, f7.int(3)), (1, f7.int(1))]]);
        let rows = e.reduced_rows();
        assert_eq!(rows[0].1[0].1, f7.one());
        assert_eq!(rows[0].1[1].1, f7.int(5));
    }
}
