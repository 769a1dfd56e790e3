//! Sweedler-style expansions: iterated coproducts and coactions of basis vectors as
//! sparse term lists, and helpers to sum formulas over products of such expansions.

use crate::exactlin::{dense_of, multi_index, sparse_of, Field, Scalar, SparseVec, Vector};

/// One summand `coeff · x_{legs[0]} ⊗ … ⊗ x_{legs[n-1]}` of an expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub legs: Vec<usize>,
    pub coeff: Scalar,
}

/// Calls `f(legs, coeff)` for every combination of one term from each list, with the
/// product of their coefficients.
/// Memoized Sweedler leg lists keyed by `(basis index, number of legs)`.
pub(crate) type LegsCache = std::sync::RwLock<std::collections::HashMap<(usize, usize), std::sync::Arc<[Term]>>>;

pub fn sweep<F>(lists: &[&[Term]], mut f: F)
where
    F: FnMut(&[&[usize]], &Scalar),
{
    fn go<F: FnMut(&[&[usize]], &Scalar)>(lists: &[&[Term]], picked: &mut Vec<usize>, coeff: &Scalar, f: &mut F) {
        let depth = picked.len();
        if depth == lists.len() {
            let legs: Vec<&[usize]> = picked.iter().enumerate().map(|(d, &t)| lists[d][t].legs.as_slice()).collect();
            f(&legs, coeff);
            return;
        }
        for (k, t) in lists[depth].iter().enumerate() {
            let c = coeff * &t.coeff;
            picked.push(k);
            go(lists, picked, &c, f);
            picked.pop();
        }
    }
    let Some(first) = lists.iter().find_map(|l| l.first()) else { return };
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let one = first.coeff.field().one();
    go(lists, &mut Vec::with_capacity(lists.len()), &one, &mut f);
}

/// Dense accumulator for formula outputs.
pub struct Acc {
    field: Field,
    v: Vector,
}

impl Acc {
    pub fn new(field: Field, dim: usize) -> Self {
        Acc { field, v: vec![field.zero(); dim] }
    }

    pub fn add(&mut self, i: usize, c: &Scalar) {
        if !c.is_zero() {
            self.v[i] += c;
        }
    }

    /// Adds `c · x`.
    pub fn add_scaled(&mut self, x: &[(usize, Scalar)], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, a) in x {
            self.v[*i] += &(a * c);
        }
    }

    /// Adds `c · x ⊗ y` where the right factor has dimension `right_dim`.
    pub fn add_tensor(&mut self, x: &[(usize, Scalar)], y: &[(usize, Scalar)], right_dim: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, a) in x {
            let ac = a * c;
            for (j, b) in y {
                self.v[i * right_dim + j] += &(&ac * b);
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn finish(self) -> Vector {
        self.v
    }

    pub fn finish_sparse(self) -> SparseVec {
        sparse_of(&self.v)
    }
}

pub fn basis_vec(field: Field, i: usize) -> SparseVec {
    vec![(i, field.one())]
}

pub fn scale(x: &[(usize, Scalar)], c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, a)| (*i, a * c)).filter(|(_, a)| !a.is_zero()).collect()
}

pub fn add(field: Field, dim: usize, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
    let mut v = dense_of(field, dim, x);
    for (i, a) in y {
        v[*i] += a;
    }
    sparse_of(&v)
}

/// Sparse tensor `x ⊗ y`.
pub fn tensor(x: &[(usize, Scalar)], y: &[(usize, Scalar)], right_dim: usize) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for (i, a) in x {
        for (j, b) in y {
            out.push((i * right_dim + j, a * b));
        }
    }
    out
}

/// Calls `f(index)` for every multi-index in the box `dims`, in left-major order, until it
/// returns `false`.
pub fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize]) -> bool) {
    if dims.contains(&0) {
        return;
    }
    let mut idx = vec![0; dims.len()];
    loop {
        if !f(&idx) {
            return;
        }
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Flat index of a multi-index in the box `dims`.
pub fn flat(idx: &[usize], dims: &[usize]) -> usize {
    multi_index(idx, dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_of_basis_vectors() {
        let f = Field::Rational;
        assert_eq!(tensor(&basis_vec(f, 1), &basis_vec(f, 2), 3), basis_vec(f, 5));
    }

    #[test]
    fn accumulator_cancels() {
        let f = Field::Rational;
        let mut acc = Acc::new(f, 2);
        acc.add(1, &f.int(3));
        acc.add(1, &f.int(-3));
        assert!(acc.finish_sparse().is_empty());
    }

    #[test]
    fn index_walk_visits_everything_once() {
        let mut seen = Vec::new();
        for_each_index(&[2, 3], |ix| {
            seen.push(flat(ix, &[2, 3]));
            true
        });
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
    }
}
