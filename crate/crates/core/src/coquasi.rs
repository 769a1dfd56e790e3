//! Coalgebras, coquasi-bialgebras and coquasi-Hopf algebras given by structure constants.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::{Arc, RwLock};

use crate::exactlin::{multi_index, split_index, tensor_index, unit_vector, BasedSpace, Field, LinMap, LinearSystem, Scalar, SparseVec, Vector};
use crate::report::CheckReport;
use crate::sweedler::{basis_vec, for_each_index, sweep, Acc, LegsCache, Term};
use crate::Error;

type Split = Vec<(usize, usize, Scalar)>;

/// A finite-dimensional coalgebra `(H, Δ, ε)`.
pub struct Coalgebra {
    space: BasedSpace,
    field: Field,
    comult: LinMap,
    counit: LinMap,
    split: Vec<Split>,
    legs_cache: LegsCache,
}

impl Clone for Coalgebra {
    fn clone(&self) -> Self {
        Coalgebra {
            space: self.space.clone(),
            field: self.field,
            comult: self.comult.clone(),
            counit: self.counit.clone(),
            split: self.split.clone(),
            legs_cache: RwLock::new(HashMap::new()),
        }
    }
}

impl PartialEq for Coalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.comult == other.comult && self.counit == other.counit
    }
}

impl fmt::Debug for Coalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coalgebra(dim {} over {})", self.dim(), self.field)
    }
}

impl Coalgebra {
    pub fn new(space: BasedSpace, comult: LinMap, counit: LinMap) -> Result<Self, Error> {
        let d = space.dim();
        let field = comult.field();
        if counit.field() != field {
            return Err(Error::FieldMismatch);
        }
        if comult.cols() != d || comult.rows() != d * d || counit.cols() != d || counit.rows() != 1 {
            return Err(Error::DimensionMismatch("coalgebra structure maps have wrong shape".into()));
        }
        let comult = comult.relabel(space.clone(), space.tensor(&space))?;
        let counit = counit.relabel(space.clone(), BasedSpace::ground())?;
        let split = (0..d)
            .map(|i| comult.sparse_column(i).into_iter().map(|(k, c)| (k / d, k % d, c)).collect())
            .collect();
        Ok(Coalgebra { space, field, comult, counit, split, legs_cache: RwLock::new(HashMap::new()) })
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn comult(&self) -> &LinMap {
        &self.comult
    }

    pub fn counit(&self) -> &LinMap {
        &self.counit
    }

    pub fn counit_at(&self, i: usize) -> &Scalar {
        self.counit.entry(0, i)
    }

    /// `ε` on a sparse vector.
    pub fn counit_of(&self, x: &[(usize, Scalar)]) -> Scalar {
        x.iter().fold(self.field.zero(), |acc, (i, c)| acc + c * self.counit_at(*i))
    }

    /// Nonzero terms `(left, right, coeff)` of `Δ(e_i)`.
    pub fn split(&self, i: usize) -> &[(usize, usize, Scalar)] {
        &self.split[i]
    }

    /// `Δ^{(n)}(e_i) = Σ e_{i_1} ⊗ … ⊗ e_{i_n}` as a term list; `n = 0` gives `ε(e_i)`.
    pub fn legs(&self, i: usize, n: usize) -> Arc<[Term]> {
        if let Some(t) = self.legs_cache.read().expect("legs cache poisoned").get(&(i, n)) {
            return t.clone();
        }
        let terms: Arc<[Term]> = match n {
            0 => vec![Term { legs: vec![], coeff: self.counit_at(i).clone() }].into_iter().filter(|t| !t.coeff.is_zero()).collect(),
            1 => vec![Term { legs: vec![i], coeff: self.field.one() }].into(),
            _ => {
                let prev = self.legs(i, n - 1);
                let mut out = Vec::new();
                for t in prev.iter() {
                    let last = *t.legs.last().expect("nonempty");
                    for (l, r, c) in &self.split[last] {
                        let mut legs = t.legs[..t.legs.len() - 1].to_vec();
                        legs.push(*l);
                        legs.push(*r);
                        out.push(Term { legs, coeff: &t.coeff * c });
                    }
                }
                merge_terms(out).into()
            }
        };
        self.legs_cache.write().expect("legs cache poisoned").insert((i, n), terms.clone());
        terms
    }

    /// Coproduct on the tensor power `H^{⊗n}`: `Δ(x¹⊗…⊗xⁿ) = (x¹₁⊗…⊗xⁿ₁) ⊗ (x¹₂⊗…⊗xⁿ₂)`,
    /// returned as `(left flat index, right flat index, coeff)`.
    pub fn power_split(&self, flat: usize, n: usize) -> Vec<(usize, usize, Scalar)> {
        let d = self.dim();
        let idx = split_index(flat, &vec![d; n]);
        let mut out = vec![(0usize, 0usize, self.field.one())];
        for &i in &idx {
            let mut next = Vec::with_capacity(out.len() * self.split[i].len());
            for (l, r, c) in &out {
                for (a, b, e) in &self.split[i] {
                    next.push((tensor_index(*l, *a, d), tensor_index(*r, *b, d), c * e));
                }
            }
            out = next;
        }
        out
    }

    /// Counit of `H^{⊗n}` at a flat index.
    pub fn power_counit(&self, flat: usize, n: usize) -> Scalar {
        split_index(flat, &vec![self.dim(); n]).iter().fold(self.field.one(), |acc, &i| acc * self.counit_at(i))
    }

    /// `ε^{⊗n}` as a functional.
    pub fn power_counit_map(&self, n: usize) -> LinMap {
        let space = self.space.power(n);
        let vals = (0..space.dim()).map(|k| self.power_counit(k, n)).collect();
        LinMap::functional(space, self.field, vals)
    }

    fn check_power(&self, n: usize, f: &LinMap) -> Result<(), Error> {
        if f.rows() != 1 || f.cols() != self.dim().pow(n as u32) {
            return Err(Error::HostMismatch(format!("functional on a space of dim {} is not defined on H^⊗{n}", f.cols())));
        }
        if f.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Convolution `(f*g)(x) = f(x₁)g(x₂)` of functionals on `H^{⊗n}`.
    pub fn convolution(&self, n: usize, f: &LinMap, g: &LinMap) -> Result<LinMap, Error> {
        self.check_power(n, f)?;
        self.check_power(n, g)?;
        let (fv, gv) = (f.values(), g.values());
        let vals = (0..fv.len())
            .map(|x| self.power_split(x, n).iter().fold(self.field.zero(), |acc, (l, r, c)| acc + c * &fv[*l] * &gv[*r]))
            .collect();
        Ok(LinMap::functional(f.domain().clone(), self.field, vals))
    }

    /// Two-sided convolution inverse on `H^{⊗n}`, found by solving the linear system `f*x = ε`.
    pub fn convolution_inverse(&self, n: usize, f: &LinMap) -> Result<Option<LinMap>, Error> {
        self.check_power(n, f)?;
        let dim = f.cols();
        let fv = f.values();
        let mut sys = LinearSystem::new(self.field, dim);
        for y in 0..dim {
            let mut eq = crate::exactlin::Equation::new(self.field);
            for (l, r, c) in self.power_split(y, n) {
                eq.term(r, &(c * &fv[l]));
            }
            eq.constant(&self.power_counit(y, n));
            sys.push(eq);
        }
        let Some(x) = sys.particular() else { return Ok(None) };
        let inv = LinMap::functional(f.domain().clone(), self.field, x);
        let left = self.convolution(n, &inv, f)?;
        Ok((left.values() == self.power_counit_map(n).values()).then_some(inv))
    }

    /// `f ⇀ h = h₁ f(h₂)`.
    pub fn harpoon_left(&self, f: &LinMap, h: &[Scalar]) -> Result<Vector, Error> {
        self.check_power(1, f)?;
        let mut acc = Acc::new(self.field, self.dim());
        for (i, c) in h.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (l, r, e) in self.split(i) {
                acc.add(*l, &(c * e * &f.values()[*r]));
            }
        }
        Ok(acc.finish())
    }

    /// `h ↼ f = f(h₁) h₂`.
    pub fn harpoon_right(&self, h: &[Scalar], f: &LinMap) -> Result<Vector, Error> {
        self.check_power(1, f)?;
        let mut acc = Acc::new(self.field, self.dim());
        for (i, c) in h.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (l, r, e) in self.split(i) {
                acc.add(*r, &(c * e * &f.values()[*l]));
            }
        }
        Ok(acc.finish())
    }

    /// `Δ^{(n)}` as a dense map, nested to the left: `(Δ ⊗ id) ∘ … ∘ Δ`.
    pub fn iterated_coproduct(&self, n: usize) -> Result<LinMap, Error> {
        self.nested_coproduct(n, true)
    }

    /// `Δ^{(n)}` nested to the right: `(id ⊗ Δ) ∘ … ∘ Δ`.
    pub fn iterated_coproduct_right(&self, n: usize) -> Result<LinMap, Error> {
        self.nested_coproduct(n, false)
    }

    fn nested_coproduct(&self, n: usize, left: bool) -> Result<LinMap, Error> {
        if n == 0 {
            return Err(Error::InvalidStructure("iterated coproduct of order 0".into()));
        }
        let mut acc = LinMap::identity(self.space.clone(), self.field);
        for k in 1..n {
            let rest = LinMap::identity(self.space.power(k - 1), self.field);
            let step = if left { self.comult.kronecker(&rest)? } else { rest.kronecker(&self.comult)? };
            acc = step.compose(&acc)?;
        }
        Ok(acc)
    }
}

pub(crate) fn merge_terms(terms: Vec<Term>) -> Vec<Term> {
    let mut map: HashMap<Vec<usize>, Scalar> = HashMap::new();
    let mut order = Vec::new();
    for t in terms {
        match map.get_mut(&t.legs) {
            Some(c) => *c += &t.coeff,
            None => {
                order.push(t.legs.clone());
                map.insert(t.legs, t.coeff);
            }
        }
    }
    order
        .into_iter()
        .filter_map(|legs| {
            let c = map.remove(&legs).expect("present");
            (!c.is_zero()).then_some(Term { legs, coeff: c })
        })
        .collect()
}

/// Compares two formulas on every basis multi-index of `dims`, recording the first mismatch.
pub(crate) fn compare<L, R>(report: &mut CheckReport, name: &str, dims: &[usize], mut lhs: L, mut rhs: R)
where
    L: FnMut(&[usize]) -> Vector,
    R: FnMut(&[usize]) -> Vector,
{
    let mut witness = None;
    for_each_index(dims, |idx| {
        if lhs(idx) != rhs(idx) {
            witness = Some(idx.to_vec());
            false
        } else {
            true
        }
    });
    report.record(name, witness);
}

/// Scalar-valued variant of [`compare`].
pub(crate) fn compare_scalar<L, R>(report: &mut CheckReport, name: &str, dims: &[usize], mut lhs: L, mut rhs: R)
where
    L: FnMut(&[usize]) -> Scalar,
    R: FnMut(&[usize]) -> Scalar,
{
    compare(report, name, dims, |i| vec![lhs(i)], |i| vec![rhs(i)]);
}

/// Compares two maps column by column; the witness is the first differing column.
pub(crate) fn compare_maps(report: &mut CheckReport, name: &str, lhs: &LinMap, rhs: &LinMap) {
    let witness = if lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols() {
        Some(vec![])
    } else {
        (0..lhs.cols()).find(|&j| lhs.column(j) != rhs.column(j)).map(|j| vec![j])
    };
    report.record(name, witness);
}

pub fn verify_coalgebra(c: &Coalgebra) -> CheckReport {
    let mut r = CheckReport::new();
    let d = c.dim();
    let f = c.field;
    compare(
        &mut r,
        "coassociativity",
        &[d],
        |i| {
            let mut acc = Acc::new(f, d * d * d);
            for (a, b, x) in c.split(i[0]) {
                for (a1, a2, y) in c.split(*a) {
                    acc.add(multi_index(&[*a1, *a2, *b], &[d, d, d]), &(x * y));
                }
            }
            acc.finish()
        },
        |i| {
            let mut acc = Acc::new(f, d * d * d);
            for (a, b, x) in c.split(i[0]) {
                for (b1, b2, y) in c.split(*b) {
                    acc.add(multi_index(&[*a, *b1, *b2], &[d, d, d]), &(x * y));
                }
            }
            acc.finish()
        },
    );
    compare(
        &mut r,
        "counit left",
        &[d],
        |i| {
            let mut acc = Acc::new(f, d);
            for (a, b, x) in c.split(i[0]) {
                acc.add(*b, &(x * c.counit_at(*a)));
            }
            acc.finish()
        },
        |i| unit_vector(f, d, i[0]),
    );
    compare(
        &mut r,
        "counit right",
        &[d],
        |i| {
            let mut acc = Acc::new(f, d);
            for (a, b, x) in c.split(i[0]) {
                acc.add(*a, &(x * c.counit_at(*b)));
            }
            acc.finish()
        },
        |i| unit_vector(f, d, i[0]),
    );
    r
}

/// A coquasi-bialgebra `(H, Δ, ε, m, 1, ω, ω⁻¹)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoquasiBialgebra {
    coalgebra: Coalgebra,
    mult: LinMap,
    unit: Vector,
    omega: LinMap,
    omega_inv: LinMap,
    mult_sparse: Vec<SparseVec>,
    unit_sparse: SparseVec,
}

impl Deref for CoquasiBialgebra {
    type Target = Coalgebra;
    fn deref(&self) -> &Coalgebra {
        &self.coalgebra
    }
}

impl CoquasiBialgebra {
    /// Builds the structure; a missing `ω⁻¹` is computed as a convolution inverse, a supplied
    /// one is validated.
    pub fn new(coalgebra: Coalgebra, mult: LinMap, unit: Vector, omega: LinMap, omega_inv: Option<LinMap>) -> Result<Self, Error> {
        let d = coalgebra.dim();
        let f = coalgebra.field();
        if mult.field() != f || omega.field() != f || unit.iter().any(|s| s.field() != f) {
            return Err(Error::FieldMismatch);
        }
        if mult.rows() != d || mult.cols() != d * d || unit.len() != d || omega.rows() != 1 || omega.cols() != d * d * d {
            return Err(Error::DimensionMismatch("bialgebra structure maps have wrong shape".into()));
        }
        let space = coalgebra.space().clone();
        let mult = mult.relabel(space.tensor(&space), space.clone())?;
        let omega = omega.relabel(space.power(3), BasedSpace::ground())?;
        let omega_inv = match omega_inv {
            Some(w) => {
                let w = w.relabel(space.power(3), BasedSpace::ground())?;
                let prod = coalgebra.convolution(3, &omega, &w)?;
                let back = coalgebra.convolution(3, &w, &omega)?;
                let eps = coalgebra.power_counit_map(3);
                if prod.values() != eps.values() || back.values() != eps.values() {
                    return Err(Error::InvalidStructure("omegainv is not the convolution inverse of omega".into()));
                }
                w
            }
            None => coalgebra
                .convolution_inverse(3, &omega)?
                .ok_or_else(|| Error::InvalidStructure("omega is not convolution invertible".into()))?,
        };
        let mult_sparse = (0..d * d).map(|k| mult.sparse_column(k)).collect();
        let unit_sparse = crate::exactlin::sparse_of(&unit);
        Ok(CoquasiBialgebra { coalgebra, mult, unit, omega, omega_inv, mult_sparse, unit_sparse })
    }

    pub fn coalgebra(&self) -> &Coalgebra {
        &self.coalgebra
    }

    pub fn mult(&self) -> &LinMap {
        &self.mult
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn unit_sparse(&self) -> &SparseVec {
        &self.unit_sparse
    }

    pub fn omega(&self) -> &LinMap {
        &self.omega
    }

    pub fn omega_inv(&self) -> &LinMap {
        &self.omega_inv
    }

    /// `e_i e_j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult_sparse[tensor_index(i, j, self.dim())]
    }

    pub fn mul(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Acc::new(self.field(), self.dim());
        for (i, a) in x {
            for (j, b) in y {
                acc.add_scaled(self.mul_basis(*i, *j), &(a * b));
            }
        }
        acc.finish_sparse()
    }

    pub fn omega_at(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let d = self.dim();
        &self.omega.values()[multi_index(&[i, j, k], &[d, d, d])]
    }

    pub fn omega_inv_at(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let d = self.dim();
        &self.omega_inv.values()[multi_index(&[i, j, k], &[d, d, d])]
    }

    fn trilinear(&self, w: &LinMap, x: &[(usize, Scalar)], y: &[(usize, Scalar)], z: &[(usize, Scalar)]) -> Scalar {
        let d = self.dim();
        let vals = w.values();
        let mut acc = self.field().zero();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in z {
                    let v = &vals[multi_index(&[*i, *j, *k], &[d, d, d])];
                    if !v.is_zero() {
                        acc += &(&ab * c * v);
                    }
                }
            }
        }
        acc
    }

    /// `ω(x, y, z)` on sparse arguments.
    pub fn omega_of(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)], z: &[(usize, Scalar)]) -> Scalar {
        self.trilinear(&self.omega, x, y, z)
    }

    pub fn omega_inv_of(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)], z: &[(usize, Scalar)]) -> Scalar {
        self.trilinear(&self.omega_inv, x, y, z)
    }

    pub fn basis(&self, i: usize) -> SparseVec {
        basis_vec(self.field(), i)
    }
}

pub fn verify_coquasi_bialgebra(b: &CoquasiBialgebra) -> CheckReport {
    let mut r = CheckReport::new();
    let d = b.dim();
    let f = b.field();
    let e = |i: usize| b.basis(i);
    compare(
        &mut r,
        "mult coalgebra morphism",
        &[d, d],
        |ix| {
            let mut acc = Acc::new(f, d * d);
            for (k, c) in b.mul_basis(ix[0], ix[1]) {
                for (l, rr, x) in b.split(*k) {
                    acc.add(tensor_index(*l, *rr, d), &(c * x));
                }
            }
            acc.finish()
        },
        |ix| {
            let mut acc = Acc::new(f, d * d);
            for (h1, h2, x) in b.split(ix[0]) {
                for (g1, g2, y) in b.split(ix[1]) {
                    acc.add_tensor(b.mul_basis(*h1, *g1), b.mul_basis(*h2, *g2), d, &(x * y));
                }
            }
            acc.finish()
        },
    );
    compare_scalar(&mut r, "mult counit", &[d, d], |ix| b.counit_of(b.mul_basis(ix[0], ix[1])), |ix| b.counit_at(ix[0]) * b.counit_at(ix[1]));
    let one = b.unit_sparse().clone();
    {
        let mut acc = Acc::new(f, d * d);
        for (i, c) in &one {
            for (l, rr, x) in b.split(*i) {
                acc.add(tensor_index(*l, *rr, d), &(c * x));
            }
        }
        let ok = acc.finish() == crate::exactlin::dense_of(f, d * d, &crate::sweedler::tensor(&one, &one, d)) && b.counit_of(&one).is_one();
        r.check("unit coalgebra morphism", ok);
    }
    compare(
        &mut r,
        "asociat multipl",
        &[d, d, d],
        |ix| {
            let mut acc = Acc::new(f, d);
            let (h, g, k) = (b.legs(ix[0], 2), b.legs(ix[1], 2), b.legs(ix[2], 2));
            sweep(&[&h, &g, &k], |l, c| {
                let gk = b.mul(&e(l[1][0]), &e(l[2][0]));
                let w = b.omega_at(l[0][1], l[1][1], l[2][1]);
                acc.add_scaled(&b.mul(&e(l[0][0]), &gk), &(c * w));
            });
            acc.finish()
        },
        |ix| {
            let mut acc = Acc::new(f, d);
            let (h, g, k) = (b.legs(ix[0], 2), b.legs(ix[1], 2), b.legs(ix[2], 2));
            sweep(&[&h, &g, &k], |l, c| {
                let w = b.omega_at(l[0][0], l[1][0], l[2][0]);
                let hg = b.mul_basis(l[0][1], l[1][1]).clone();
                acc.add_scaled(&b.mul(&hg, &e(l[2][1])), &(c * w));
            });
            acc.finish()
        },
    );
    compare(&mut r, "unit laws", &[d], |ix| {
        let mut v = crate::exactlin::dense_of(f, d, &b.mul(&one, &e(ix[0])));
        v.extend(crate::exactlin::dense_of(f, d, &b.mul(&e(ix[0]), &one)));
        v
    }, |ix| {
        let mut v = unit_vector(f, d, ix[0]);
        v.extend(unit_vector(f, d, ix[0]));
        v
    });
    compare_scalar(
        &mut r,
        "cocycle omega",
        &[d, d, d, d],
        |ix| {
            let mut acc = f.zero();
            let (h, g, k, l) = (b.legs(ix[0], 2), b.legs(ix[1], 2), b.legs(ix[2], 2), b.legs(ix[3], 2));
            sweep(&[&h, &g, &k, &l], |s, c| {
                let kl = b.mul_basis(s[2][0], s[3][0]);
                let hg = b.mul_basis(s[0][1], s[1][1]);
                let w1 = b.omega_of(&e(s[0][0]), &e(s[1][0]), kl);
                if w1.is_zero() {
                    return;
                }
                let w2 = b.omega_of(hg, &e(s[2][1]), &e(s[3][1]));
                acc += &(c * &w1 * w2);
            });
            acc
        },
        |ix| {
            let mut acc = f.zero();
            let (h, g, k, l) = (b.legs(ix[0], 2), b.legs(ix[1], 3), b.legs(ix[2], 3), b.legs(ix[3], 2));
            sweep(&[&h, &g, &k, &l], |s, c| {
                let w1 = b.omega_at(s[1][0], s[2][0], s[3][0]);
                let w3 = b.omega_at(s[0][1], s[1][2], s[2][2]);
                if w1.is_zero() || w3.is_zero() {
                    return;
                }
                let gk = b.mul_basis(s[1][1], s[2][1]);
                let w2 = b.omega_of(&e(s[0][0]), gk, &e(s[3][1]));
                acc += &(c * w1 * w2 * w3);
            });
            acc
        },
    );
    compare_scalar(&mut r, "omega normalization", &[d, d], |ix| b.omega_of(&e(ix[0]), &one, &e(ix[1])), |ix| b.counit_at(ix[0]) * b.counit_at(ix[1]));
    compare(
        &mut r,
        "omega normalization derived",
        &[d, d],
        |ix| vec![b.omega_of(&one, &e(ix[0]), &e(ix[1])), b.omega_of(&e(ix[0]), &e(ix[1]), &one)],
        |ix| vec![b.counit_at(ix[0]) * b.counit_at(ix[1]); 2],
    );
    let eps3 = b.power_counit_map(3);
    let ok = b
        .convolution(3, b.omega(), b.omega_inv())
        .map(|p| p.values() == eps3.values())
        .unwrap_or(false)
        && b.convolution(3, b.omega_inv(), b.omega()).map(|p| p.values() == eps3.values()).unwrap_or(false);
    r.check("omega inverse", ok);
    r
}

/// A coquasi-Hopf algebra: a coquasi-bialgebra with antipode data `(S, α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoquasiHopf {
    bialgebra: CoquasiBialgebra,
    antipode: LinMap,
    alpha: LinMap,
    beta: LinMap,
    antipode_inv: Option<LinMap>,
    s_sparse: Vec<SparseVec>,
    s_inv_sparse: Option<Vec<SparseVec>>,
}

impl Deref for CoquasiHopf {
    type Target = CoquasiBialgebra;
    fn deref(&self) -> &CoquasiBialgebra {
        &self.bialgebra
    }
}

impl CoquasiHopf {
    /// Builds the structure, rescaling `α, β` so that `α(1) = β(1) = 1` and computing `S⁻¹`
    /// when `S` is bijective.
    pub fn new(bialgebra: CoquasiBialgebra, antipode: LinMap, alpha: LinMap, beta: LinMap) -> Result<Self, Error> {
        let d = bialgebra.dim();
        let f = bialgebra.field();
        if antipode.field() != f || alpha.field() != f || beta.field() != f {
            return Err(Error::FieldMismatch);
        }
        if antipode.rows() != d || antipode.cols() != d || alpha.rows() != 1 || alpha.cols() != d || beta.rows() != 1 || beta.cols() != d {
            return Err(Error::DimensionMismatch("antipode data has wrong shape".into()));
        }
        let space = bialgebra.space().clone();
        let antipode = antipode.relabel(space.clone(), space.clone())?;
        let one = bialgebra.unit().clone();
        let a1 = alpha.apply(&one)[0].clone();
        let b1 = beta.apply(&one)[0].clone();
        if !(&a1 * &b1).is_one() {
            return Err(Error::InvalidStructure("α(1)β(1) ≠ 1".into()));
        }
        let alpha = alpha.scale(&a1.inv().expect("nonzero")).relabel(space.clone(), BasedSpace::ground())?;
        let beta = beta.scale(&a1).relabel(space.clone(), BasedSpace::ground())?;
        let antipode_inv = antipode.invert()?;
        let s_sparse = (0..d).map(|i| antipode.sparse_column(i)).collect();
        let s_inv_sparse = antipode_inv.as_ref().map(|m| (0..d).map(|i| m.sparse_column(i)).collect());
        Ok(CoquasiHopf { bialgebra, antipode, alpha, beta, antipode_inv, s_sparse, s_inv_sparse })
    }

    pub fn bialgebra(&self) -> &CoquasiBialgebra {
        &self.bialgebra
    }

    pub fn antipode(&self) -> &LinMap {
        &self.antipode
    }

    pub fn antipode_inv(&self) -> Option<&LinMap> {
        self.antipode_inv.as_ref()
    }

    pub fn alpha(&self) -> &LinMap {
        &self.alpha
    }

    pub fn beta(&self) -> &LinMap {
        &self.beta
    }

    pub fn require_bijective_antipode(&self) -> Result<(), Error> {
        self.antipode_inv.as_ref().map(|_| ()).ok_or(Error::AntipodeNotBijective)
    }

    pub fn s(&self, i: usize) -> &SparseVec {
        &self.s_sparse[i]
    }

    /// `S⁻¹(e_i)`; callers must have checked [`Self::require_bijective_antipode`].
    pub fn s_inv(&self, i: usize) -> &SparseVec {
        &self.s_inv_sparse.as_ref().expect("antipode must be bijective")[i]
    }

    pub fn s_of(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Acc::new(self.field(), self.dim());
        for (i, c) in x {
            acc.add_scaled(self.s(*i), c);
        }
        acc.finish_sparse()
    }

    pub fn s_inv_of(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Acc::new(self.field(), self.dim());
        for (i, c) in x {
            acc.add_scaled(self.s_inv(*i), c);
        }
        acc.finish_sparse()
    }

    pub fn alpha_at(&self, i: usize) -> &Scalar {
        self.alpha.entry(0, i)
    }

    pub fn beta_at(&self, i: usize) -> &Scalar {
        self.beta.entry(0, i)
    }

    pub fn alpha_of(&self, x: &[(usize, Scalar)]) -> Scalar {
        x.iter().fold(self.field().zero(), |acc, (i, c)| acc + c * self.alpha_at(*i))
    }

    pub fn beta_of(&self, x: &[(usize, Scalar)]) -> Scalar {
        x.iter().fold(self.field().zero(), |acc, (i, c)| acc + c * self.beta_at(*i))
    }

    /// Same algebra with `(S, α, β)` replaced.
    pub fn with_antipode(&self, antipode: LinMap, alpha: LinMap, beta: LinMap) -> Result<CoquasiHopf, Error> {
        CoquasiHopf::new(self.bialgebra.clone(), antipode, alpha, beta)
    }
}

pub fn verify_antipode(h: &CoquasiHopf) -> CheckReport {
    let mut r = CheckReport::new();
    let d = h.dim();
    let f = h.field();
    let e = |i: usize| h.basis(i);
    compare(
        &mut r,
        "S anti-coalgebra",
        &[d],
        |ix| {
            let mut acc = Acc::new(f, d * d);
            for (k, c) in h.s(ix[0]) {
                for (a, b, x) in h.split(*k) {
                    acc.add(tensor_index(*a, *b, d), &(c * x));
                }
            }
            acc.finish()
        },
        |ix| {
            let mut acc = Acc::new(f, d * d);
            for (a, b, x) in h.split(ix[0]) {
                acc.add_tensor(h.s(*b), h.s(*a), d, x);
            }
            acc.finish()
        },
    );
    compare_scalar(&mut r, "counit S", &[d], |ix| h.counit_of(h.s(ix[0])), |ix| h.counit_at(ix[0]).clone());
    let one = h.unit_sparse().clone();
    compare(
        &mut r,
        "SalfaId",
        &[d],
        |ix| {
            let mut acc = Acc::new(f, d);
            let legs = h.legs(ix[0], 3);
            sweep(&[&legs], |l, c| {
                let a = h.alpha_at(l[0][1]);
                if !a.is_zero() {
                    acc.add_scaled(&h.mul(h.s(l[0][0]), &e(l[0][2])), &(c * a));
                }
            });
            acc.finish()
        },
        |ix| crate::exactlin::dense_of(f, d, &crate::sweedler::scale(&one, h.alpha_at(ix[0]))),
    );
    compare(
        &mut r,
        "IdbetaS",
        &[d],
        |ix| {
            let mut acc = Acc::new(f, d);
            let legs = h.legs(ix[0], 3);
            sweep(&[&legs], |l, c| {
                let b = h.beta_at(l[0][1]);
                if !b.is_zero() {
                    acc.add_scaled(&h.mul(&e(l[0][0]), h.s(l[0][2])), &(c * b));
                }
            });
            acc.finish()
        },
        |ix| crate::exactlin::dense_of(f, d, &crate::sweedler::scale(&one, h.beta_at(ix[0]))),
    );
    compare_scalar(
        &mut r,
        "omega anihileaza S",
        &[d],
        |ix| {
            let mut acc = f.zero();
            let legs = h.legs(ix[0], 5);
            sweep(&[&legs], |l, c| {
                let s = l[0];
                let ab = h.beta_at(s[1]) * h.alpha_at(s[3]);
                if !ab.is_zero() {
                    acc += &(c * &ab * h.omega_of(&e(s[0]), h.s(s[2]), &e(s[4])));
                }
            });
            acc
        },
        |ix| h.counit_at(ix[0]).clone(),
    );
    compare_scalar(
        &mut r,
        "omega anihileaza S [inverse]",
        &[d],
        |ix| {
            let mut acc = f.zero();
            let legs = h.legs(ix[0], 5);
            sweep(&[&legs], |l, c| {
                let s = l[0];
                let ab = h.alpha_at(s[1]) * h.beta_at(s[3]);
                if !ab.is_zero() {
                    acc += &(c * &ab * h.omega_inv_of(h.s(s[0]), &e(s[2]), h.s(s[4])));
                }
            });
            acc
        },
        |ix| h.counit_at(ix[0]).clone(),
    );
    r.check("S unit", h.s_of(&one) == one);
    r.check("alpha beta unit", h.alpha_of(&one).is_one() && h.beta_of(&one).is_one());
    if let Some(inv) = h.antipode_inv() {
        let id = LinMap::identity(h.space().clone(), f);
        let ok = h.antipode().compose(inv).map(|m| m.same_matrix(&id)).unwrap_or(false)
            && inv.compose(h.antipode()).map(|m| m.same_matrix(&id)).unwrap_or(false);
        r.check("antipode inverse", ok);
    }
    r
}

/// Coalgebra, bialgebra and antipode suites together.
pub fn verify_all(h: &CoquasiHopf) -> CheckReport {
    let mut r = verify_coalgebra(h.coalgebra());
    r.extend(verify_coquasi_bialgebra(h.bialgebra()));
    r.extend(verify_antipode(h));
    r
}

/// The three variants with opposite multiplication, opposite comultiplication, or both.
#[derive(Clone, Debug)]
pub struct OppositeVariants {
    pub op: CoquasiHopf,
    pub cop: CoquasiHopf,
    pub op_cop: CoquasiHopf,
}

fn permute_321(h: &CoquasiBialgebra, w: &LinMap) -> LinMap {
    let d = h.dim();
    let vals = (0..d * d * d)
        .map(|k| {
            let ix = split_index(k, &[d, d, d]);
            w.values()[multi_index(&[ix[2], ix[1], ix[0]], &[d, d, d])].clone()
        })
        .collect();
    LinMap::functional(w.domain().clone(), h.field(), vals)
}

fn swap_map(space: &BasedSpace, field: Field) -> LinMap {
    let d = space.dim();
    let sq = space.tensor(space);
    LinMap::from_columns(sq.clone(), sq, field, |k| unit_vector(field, d * d, tensor_index(k % d, k / d, d)))
}

pub fn opposite_variants(h: &CoquasiHopf) -> Result<OppositeVariants, Error> {
    let s_inv = h.antipode_inv().ok_or(Error::AntipodeNotBijective)?.clone();
    let f = h.field();
    let space = h.space().clone();
    let swap = swap_map(&space, f);
    let mult_op = h.mult().compose(&swap)?;
    let comult_cop = swap.compose(h.comult())?;
    let coal = h.coalgebra().clone();
    let coal_cop = Coalgebra::new(space.clone(), comult_cop, h.counit().clone())?;
    let w = h.omega().clone();
    let wi = h.omega_inv().clone();
    let w321 = permute_321(h, &w);
    let wi321 = permute_321(h, &wi);
    let alpha_sinv = h.alpha().compose(&s_inv)?;
    let beta_sinv = h.beta().compose(&s_inv)?;
    let unit = h.unit().clone();

    let op_bi = CoquasiBialgebra::new(coal, mult_op.clone(), unit.clone(), wi321.clone(), Some(w321.clone()))?;
    let op = CoquasiHopf::new(op_bi, s_inv.clone(), alpha_sinv.clone(), beta_sinv.clone())?;
    let cop_bi = CoquasiBialgebra::new(coal_cop.clone(), h.mult().clone(), unit.clone(), wi, Some(w))?;
    let cop = CoquasiHopf::new(cop_bi, s_inv, beta_sinv, alpha_sinv)?;
    let op_cop_bi = CoquasiBialgebra::new(coal_cop, mult_op, unit, w321, Some(wi321))?;
    let op_cop = CoquasiHopf::new(op_cop_bi, h.antipode().clone(), h.beta().clone(), h.alpha().clone())?;
    Ok(OppositeVariants { op, cop, op_cop })
}

/// Replaces `(S, α, β)` by `(U*S*U⁻¹, U*α, β*U⁻¹)` for a convolution-invertible `U`.
pub fn change_antipode(h: &CoquasiHopf, u: &LinMap) -> Result<CoquasiHopf, Error> {
    let u_inv = h.convolution_inverse(1, u)?.ok_or(Error::UNotConvolutionInvertible)?;
    let d = h.dim();
    let f = h.field();
    let (uv, uiv) = (u.values(), u_inv.values());
    let space = h.space().clone();
    let antipode = LinMap::from_columns(space.clone(), space.clone(), f, |i| {
        let mut acc = Acc::new(f, d);
        let legs = h.legs(i, 3);
        sweep(&[&legs], |l, c| {
            let s = l[0];
            acc.add_scaled(h.s(s[1]), &(c * &uv[s[0]] * &uiv[s[2]]));
        });
        acc.finish()
    });
    let conv = |a: &[Scalar], b: &[Scalar]| -> LinMap {
        let vals = (0..d).map(|i| h.split(i).iter().fold(f.zero(), |acc, (x, y, c)| acc + c * &a[*x] * &b[*y])).collect();
        LinMap::functional(space.clone(), f, vals)
    };
    let alpha = conv(uv, h.alpha().values());
    let beta = conv(h.beta().values(), uiv);
    h.with_antipode(antipode, alpha, beta)
}

pub fn convolution(h: &Coalgebra, n: usize, f: &LinMap, g: &LinMap) -> Result<LinMap, Error> {
    h.convolution(n, f, g)
}

pub fn convolution_inverse(h: &Coalgebra, n: usize, f: &LinMap) -> Result<Option<LinMap>, Error> {
    h.convolution_inverse(n, f)
}

pub fn iterated_coproduct(h: &Coalgebra, n: usize) -> Result<LinMap, Error> {
    h.iterated_coproduct(n)
}
