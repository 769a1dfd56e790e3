use std::collections::BTreeMap;

use super::echelon::{Echelon, SparseRow};
use super::linmap::{kernel_basis, particular_solution, Vector};
use super::scalar::{Field, Scalar};

/// An affine system `A x = b` assembled equation by equation.
///
/// Large constraint systems (colinearity of maps between tensor spaces) are very
/// sparse; this keeps them sparse until elimination.
pub struct LinearSystem {
    field: Field,
    unknowns: usize,
    echelon: Echelon,
}

/// One equation under construction: coefficients per unknown plus a right-hand side.
pub struct Equation {
    coeffs: BTreeMap<usize, Scalar>,
    rhs: Scalar,
}

impl Equation {
    pub fn new(field: Field) -> Self {
        Equation { coeffs: BTreeMap::new(), rhs: field.zero() }
    }

    /// Adds `c · x_var` to the left-hand side.
    pub fn term(&mut self, var: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(var).or_insert_with(|| c.field().zero());
        *slot += c;
    }

    /// Adds `c` to the right-hand side.
    pub fn constant(&mut self, c: &Scalar) {
        self.rhs += c;
    }
}

impl LinearSystem {
    pub fn new(field: Field, unknowns: usize) -> Self {
        LinearSystem { field, unknowns, echelon: Echelon::new(field, unknowns + 1) }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn push(&mut self, eq: Equation) {
        let mut row: SparseRow = eq.coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if !eq.rhs.is_zero() {
            row.push((self.unknowns, eq.rhs));
        }
        if !row.is_empty() {
            self.echelon.push(row);
        }
    }

    /// Homogeneous equation from a term list.
    pub fn push_terms(&mut self, terms: impl IntoIterator<Item = (usize, Scalar)>) {
        let mut eq = Equation::new(self.field);
        for (v, c) in terms {
            eq.term(v, &c);
        }
        self.push(eq);
    }

    pub fn is_consistent(&self) -> bool {
        !self.echelon.pivot_columns().contains(&self.unknowns)
    }

    /// Deterministic solution with free variables zero.
    pub fn particular(&self) -> Option<Vector> {
        particular_solution(&self.echelon, self.field, self.unknowns)
    }

    /// Basis of the solution space of the homogeneous part.
    pub fn homogeneous_basis(&self) -> Vec<Vector> {
        let mut basis = kernel_basis(&self.echelon, self.field);
        // The augmented column is never a genuine unknown.
        basis.retain(|v| v[self.unknowns].is_zero());
        basis.into_iter().map(|mut v| {
            v.truncate(self.unknowns);
            v
        }).collect()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }
}
