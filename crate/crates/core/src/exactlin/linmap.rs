use std::fmt;

use super::echelon::{Echelon, SparseRow};
use super::scalar::{Field, Scalar};
use super::space::{tensor_index, BasedSpace};
use crate::Error;

/// A coordinate vector.
pub type Vector = Vec<Scalar>;

/// A sparse coordinate vector: `(index, coefficient)` pairs, no zero coefficients.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn zero_vector(field: Field, dim: usize) -> Vector {
    vec![field.zero(); dim]
}

pub fn unit_vector(field: Field, dim: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, dim);
    v[i] = field.one();
    v
}

pub fn sparse_of(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub fn dense_of(field: Field, dim: usize, v: &[(usize, Scalar)]) -> Vector {
    let mut out = zero_vector(field, dim);
    for (i, c) in v {
        out[*i] += c;
    }
    out
}

/// An exact dense matrix `codomain.dim × domain.dim`, stored column by column so that
/// the image of each basis vector is a contiguous slice.
#[derive(Clone, PartialEq, Eq)]
pub struct LinMap {
    domain: BasedSpace,
    codomain: BasedSpace,
    field: Field,
    entries: Vec<Scalar>,
}

impl LinMap {
    /// Builds a map from its columns (images of the domain basis vectors).
    pub fn from_columns<F>(domain: BasedSpace, codomain: BasedSpace, field: Field, mut column: F) -> Self
    where
        F: FnMut(usize) -> Vector,
    {
        let rows = codomain.dim();
        let mut entries = Vec::with_capacity(rows * domain.dim());
        for j in 0..domain.dim() {
            let c = column(j);
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            entries.extend(c);
        }
        LinMap { domain, codomain, field, entries }
    }

    /// Builds a map from sparse columns; repeated indices accumulate.
    pub fn from_sparse_columns<F>(domain: BasedSpace, codomain: BasedSpace, field: Field, mut column: F) -> Self
    where
        F: FnMut(usize) -> SparseVec,
    {
        let rows = codomain.dim();
        Self::from_columns(domain, codomain, field, |j| dense_of(field, rows, &column(j)))
    }

    /// Row-major nested vectors.
    pub fn from_rows(domain: BasedSpace, codomain: BasedSpace, field: Field, rows: &[Vec<Scalar>]) -> Result<Self, Error> {
        if rows.len() != codomain.dim() || rows.iter().any(|r| r.len() != domain.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "expected {}×{} entries",
                codomain.dim(),
                domain.dim()
            )));
        }
        if rows.iter().flatten().any(|s| s.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self::from_columns(domain, codomain, field, |j| rows.iter().map(|r| r[j].clone()).collect()))
    }

    pub fn zero(domain: BasedSpace, codomain: BasedSpace, field: Field) -> Self {
        let n = domain.dim() * codomain.dim();
        LinMap { domain, codomain, field, entries: vec![field.zero(); n] }
    }

    pub fn identity(space: BasedSpace, field: Field) -> Self {
        let n = space.dim();
        Self::from_columns(space.clone(), space, field, |j| unit_vector(field, n, j))
    }

    /// A functional `space → k` given by its values on the basis.
    pub fn functional(space: BasedSpace, field: Field, values: Vector) -> Self {
        assert_eq!(values.len(), space.dim());
        LinMap { domain: space, codomain: BasedSpace::ground(), field, entries: values }
    }

    /// The map `k → space` sending 1 to `v`.
    pub fn vector_map(space: BasedSpace, field: Field, v: Vector) -> Self {
        assert_eq!(v.len(), space.dim());
        LinMap { domain: BasedSpace::ground(), codomain: space, field, entries: v }
    }

    pub fn domain(&self) -> &BasedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &BasedSpace {
        &self.codomain
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.codomain.dim()
    }

    pub fn cols(&self) -> usize {
        self.domain.dim()
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[col * self.rows() + row]
    }

    /// Image of the `j`-th domain basis vector.
    pub fn column(&self, j: usize) -> &[Scalar] {
        let r = self.rows();
        &self.entries[j * r..(j + 1) * r]
    }

    pub fn sparse_column(&self, j: usize) -> SparseVec {
        sparse_of(self.column(j))
    }

    pub fn row(&self, i: usize) -> Vector {
        (0..self.cols()).map(|j| self.entry(i, j).clone()).collect()
    }

    /// For a functional, its values on the basis.
    pub fn values(&self) -> &[Scalar] {
        assert_eq!(self.rows(), 1, "not a functional");
        &self.entries
    }

    /// Same matrix with different basis labels of equal dimension.
    pub fn relabel(&self, domain: BasedSpace, codomain: BasedSpace) -> Result<Self, Error> {
        if domain.dim() != self.cols() || codomain.dim() != self.rows() {
            return Err(Error::DimensionMismatch("relabel must preserve dimensions".into()));
        }
        Ok(LinMap { domain, codomain, field: self.field, entries: self.entries.clone() })
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols());
        let mut out = zero_vector(self.field, self.rows());
        for (j, c) in v.iter().enumerate() {
            if !c.is_zero() {
                for (o, e) in out.iter_mut().zip(self.column(j)) {
                    if !e.is_zero() {
                        *o += &(e * c);
                    }
                }
            }
        }
        out
    }

    pub fn apply_sparse(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut out = zero_vector(self.field, self.rows());
        for (j, c) in v {
            for (o, e) in out.iter_mut().zip(self.column(*j)) {
                if !e.is_zero() {
                    *o += &(e * c);
                }
            }
        }
        sparse_of(&out)
    }

    fn check_field(&self, other: &LinMap) -> Result<(), Error> {
        if self.field != other.field {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &LinMap) -> Result<LinMap, Error> {
        self.check_field(g)?;
        if g.codomain.dim() != self.domain.dim() {
            return Err(Error::DimensionMismatch(format!(
                "compose: inner codomain dim {} vs outer domain dim {}",
                g.codomain.dim(),
                self.domain.dim()
            )));
        }
        Ok(LinMap::from_columns(g.domain.clone(), self.codomain.clone(), self.field, |j| self.apply(g.column(j))))
    }

    /// `self ⊗ g` on the left-major tensor basis.
    pub fn kronecker(&self, g: &LinMap) -> Result<LinMap, Error> {
        self.check_field(g)?;
        let (gr, gc) = (g.rows(), g.cols());
        let dom = self.domain.tensor(&g.domain);
        let cod = self.codomain.tensor(&g.codomain);
        let field = self.field;
        let rows = cod.dim();
        Ok(LinMap::from_columns(dom, cod, field, |j| {
            let (j1, j2) = (j / gc, j % gc);
            let mut col = zero_vector(field, rows);
            for (i1, a) in self.column(j1).iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                for (i2, b) in g.column(j2).iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                    col[tensor_index(i1, i2, gr)] = a * b;
                }
            }
            col
        }))
    }

    fn check_shape(&self, other: &LinMap) -> Result<(), Error> {
        self.check_field(other)?;
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} vs {}×{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &LinMap) -> Result<LinMap, Error> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(LinMap { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &LinMap) -> Result<LinMap, Error> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(LinMap { entries, ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> LinMap {
        LinMap { entries: self.entries.iter().map(|a| a * c).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// First `(row, col)` where two equally shaped maps differ, scanning columns in order.
    pub fn first_difference(&self, other: &LinMap) -> Option<(usize, usize)> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Some((0, 0));
        }
        let r = self.rows().max(1);
        self.entries.iter().zip(&other.entries).position(|(a, b)| a != b).map(|k| (k % r, k / r))
    }

    /// Equality of matrices irrespective of basis labels.
    pub fn same_matrix(&self, other: &LinMap) -> bool {
        self.field == other.field && self.rows() == other.rows() && self.cols() == other.cols() && self.entries == other.entries
    }

    pub fn transpose(&self) -> LinMap {
        LinMap::from_columns(self.codomain.clone(), self.domain.clone(), self.field, |i| self.row(i))
    }

    pub(crate) fn sparse_rows(&self) -> Vec<SparseRow> {
        let mut rows = vec![Vec::new(); self.rows()];
        for j in 0..self.cols() {
            for (i, e) in self.column(j).iter().enumerate() {
                if !e.is_zero() {
                    rows[i].push((j, e.clone()));
                }
            }
        }
        rows
    }

    fn row_echelon(&self) -> Echelon {
        Echelon::from_rows(self.field, self.cols(), self.sparse_rows())
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows()
    }

    pub fn is_bijective(&self) -> bool {
        self.rows() == self.cols() && self.rank() == self.rows()
    }

    /// Null space, with basis vectors indexed by the free columns of the reduced form.
    pub fn kernel(&self) -> Subspace {
        let ech = self.row_echelon();
        let basis = kernel_basis(&ech, self.field);
        Subspace::from_free_basis(self.domain.clone(), self.field, basis, ech.free_columns())
    }

    /// One solution of `self · x = target` with free variables zero.
    pub fn solve(&self, target: &[Scalar]) -> Result<Option<Vector>, Error> {
        if target.len() != self.rows() {
            return Err(Error::DimensionMismatch("solve: target length".into()));
        }
        let n = self.cols();
        let mut rows = self.sparse_rows();
        for (i, t) in target.iter().enumerate() {
            if !t.is_zero() {
                rows[i].push((n, t.clone()));
            }
        }
        let ech = Echelon::from_rows(self.field, n + 1, rows);
        Ok(particular_solution(&ech, self.field, n))
    }

    pub fn invert(&self) -> Result<Option<LinMap>, Error> {
        let n = self.rows();
        if n != self.cols() {
            return Err(Error::NotSquare { rows: n, cols: self.cols() });
        }
        let mut rows = self.sparse_rows();
        for (i, r) in rows.iter_mut().enumerate() {
            r.push((n + i, self.field.one()));
        }
        let ech = Echelon::from_rows(self.field, 2 * n, rows);
        if ech.pivot_columns().iter().filter(|&&p| p < n).count() < n {
            return Ok(None);
        }
        let mut inv = vec![zero_vector(self.field, n); n];
        for (p, row) in ech.reduced_rows() {
            for (c, v) in row {
                if c >= n {
                    inv[p][c - n] = v;
                }
            }
        }
        Ok(Some(LinMap::from_columns(self.codomain.clone(), self.domain.clone(), self.field, |j| {
            inv.iter().map(|r| r[j].clone()).collect()
        })))
    }

    /// Quotient of the codomain by the image, with representatives from the echelon complement.
    pub fn cokernel_quotient(&self) -> Quotient {
        let vectors = (0..self.cols()).map(|j| self.sparse_column(j));
        Quotient::of_span(self.codomain.clone(), self.field, vectors)
    }
}

pub(crate) fn kernel_basis(ech: &Echelon, field: Field) -> Vec<Vector> {
    let n = ech.width();
    let reduced = ech.reduced_rows();
    ech.free_columns()
        .into_iter()
        .map(|f| {
            let mut v = unit_vector(field, n, f);
            for (p, row) in &reduced {
                if let Ok(k) = row.binary_search_by_key(&f, |(c, _)| *c) {
                    v[*p] = -&row[k].1;
                }
            }
            v
        })
        .collect()
}

/// Solution of an augmented system whose last column (index `n`) is the right-hand side.
pub(crate) fn particular_solution(ech: &Echelon, field: Field, n: usize) -> Option<Vector> {
    let reduced = ech.reduced_rows();
    if reduced.iter().any(|(p, _)| *p == n) {
        return None;
    }
    let mut x = zero_vector(field, n);
    for (p, row) in reduced {
        if let Some((_, v)) = row.last().filter(|(c, _)| *c == n) {
            x[p] = v.clone();
        }
    }
    Some(x)
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinMap {}×{} over {}", self.rows(), self.cols(), self.field)?;
        if self.rows() * self.cols() <= 256 {
            for i in 0..self.rows() {
                let row: Vec<String> = (0..self.cols()).map(|j| self.entry(i, j).to_string()).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

/// A subspace with an inclusion and a chosen retraction.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient: BasedSpace,
    pub space: BasedSpace,
    pub basis_vectors: Vec<Vector>,
    pub inclusion: LinMap,
    pub projection: LinMap,
}

impl Subspace {
    /// Basis vectors each carrying a 1 at a distinct "free" coordinate where all others vanish;
    /// the retraction reads off those coordinates.
    fn from_free_basis(ambient: BasedSpace, field: Field, basis: Vec<Vector>, free: Vec<usize>) -> Self {
        let space = ambient.select(&free);
        let k = basis.len();
        let inclusion = LinMap::from_columns(space.clone(), ambient.clone(), field, |j| basis[j].clone());
        let projection = LinMap::from_columns(ambient.clone(), space.clone(), field, |i| match free.iter().position(|&f| f == i) {
            Some(pos) => unit_vector(field, k, pos),
            None => zero_vector(field, k),
        });
        Subspace { ambient, space, basis_vectors: basis, inclusion, projection }
    }

    /// The span of arbitrary vectors, re-based on its reduced echelon basis.
    pub fn span(ambient: BasedSpace, field: Field, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let n = ambient.dim();
        let ech = Echelon::from_rows(field, n, vectors);
        let reduced = ech.reduced_rows();
        let pivots: Vec<usize> = reduced.iter().map(|(p, _)| *p).collect();
        let basis: Vec<Vector> = reduced.iter().map(|(_, r)| dense_of(field, n, r)).collect();
        // Retraction: coordinates at pivot positions (the reduced basis is 1 there and 0 at other pivots).
        let space = ambient.select(&pivots);
        let k = basis.len();
        let inclusion = LinMap::from_columns(space.clone(), ambient.clone(), field, |j| basis[j].clone());
        let projection = LinMap::from_columns(ambient.clone(), space.clone(), field, |i| match pivots.iter().position(|&p| p == i) {
            Some(pos) => unit_vector(field, k, pos),
            None => zero_vector(field, k),
        });
        Subspace { ambient, space, basis_vectors: basis, inclusion, projection }
    }

    pub fn dim(&self) -> usize {
        self.basis_vectors.len()
    }

    pub fn field(&self) -> Field {
        self.inclusion.field()
    }

    /// Whether `v` lies in the subspace.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.inclusion.apply(&self.projection.apply(v)) == v
    }

    /// Coordinates of a member vector, `None` if it lies outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        let c = self.projection.apply(v);
        (self.inclusion.apply(&c) == v).then_some(c)
    }
}

/// A quotient space with stored projection and section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ambient: BasedSpace,
    pub space: BasedSpace,
    pub projection: LinMap,
    pub section: LinMap,
}

impl Quotient {
    /// Quotient of `ambient` by the span of `relations`.
    pub fn of_span(ambient: BasedSpace, field: Field, relations: impl IntoIterator<Item = SparseVec>) -> Self {
        let ech = Echelon::from_rows(field, ambient.dim(), relations);
        let complement = ech.free_columns();
        let reduced = ech.reduced_rows();
        let space = ambient.select(&complement);
        let k = complement.len();
        let position = |c: usize| complement.binary_search(&c).ok();
        let mut proj_cols: Vec<Vector> = (0..ambient.dim())
            .map(|j| match position(j) {
                Some(pos) => unit_vector(field, k, pos),
                None => zero_vector(field, k),
            })
            .collect();
        for (p, row) in &reduced {
            for (c, v) in row {
                if let Some(pos) = position(*c) {
                    proj_cols[*p][pos] = -v;
                }
            }
        }
        let projection = LinMap::from_columns(ambient.clone(), space.clone(), field, |j| proj_cols[j].clone());
        let section = LinMap::from_columns(space.clone(), ambient.clone(), field, |j| unit_vector(field, ambient.dim(), complement[j]));
        Quotient { ambient, space, projection, section }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// `f ∘ g`.
pub fn compose(f: &LinMap, g: &LinMap) -> Result<LinMap, Error> {
    f.compose(g)
}

/// `f ⊗ g`.
pub fn kronecker(f: &LinMap, g: &LinMap) -> Result<LinMap, Error> {
    f.kronecker(g)
}

pub fn kernel(f: &LinMap) -> Subspace {
    f.kernel()
}

pub fn solve(f: &LinMap, target: &[Scalar]) -> Result<Option<Vector>, Error> {
    f.solve(target)
}

pub fn invert(f: &LinMap) -> Result<Option<LinMap>, Error> {
    f.invert()
}

pub fn cokernel_quotient(relations: &LinMap) -> Quotient {
    relations.cokernel_quotient()
}

pub fn rank(f: &LinMap) -> usize {
    f.rank()
}
