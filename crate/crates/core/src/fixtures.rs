//! Built-in example structures.

use std::sync::Arc;

use crate::comodule::{verify_comodule_algebra, ComoduleAlgebra};
use crate::coquasi::{Coalgebra, CoquasiBialgebra, CoquasiHopf};
use crate::exactlin::{unit_vector, BasedSpace, Field, LinMap, Scalar, Vector};
use crate::group::{group_coquasi_hopf, Cocycle3, GroupPresentation};
use crate::twist::{twist_bialgebra, twist_comodule_algebra, GaugeTwist};
use crate::Error;

const CAYLEY_SIGNS: &str = include_str!("../data/cayley_signs.txt");

/// Sparse structure-constant builder for maps between tensor powers of one based space.
pub(crate) struct Table {
    field: Field,
    entries: Vec<(usize, usize, Scalar)>,
    rows: usize,
    cols: usize,
}

impl Table {
    pub(crate) fn new(field: Field, rows: usize, cols: usize) -> Self {
        Table { field, entries: Vec::new(), rows, cols }
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, c: i64) -> &mut Self {
        self.entries.push((row, col, self.field.int(c)));
        self
    }

    pub(crate) fn build(&self, domain: BasedSpace, codomain: BasedSpace) -> LinMap {
        debug_assert_eq!((domain.dim(), codomain.dim()), (self.cols, self.rows));
        let mut cols = vec![Vec::new(); self.cols];
        for (r, c, v) in &self.entries {
            cols[*c].push((*r, v.clone()));
        }
        LinMap::from_sparse_columns(domain, codomain, self.field, |j| std::mem::take(&mut cols[j]))
    }
}

/// `kℤ₂` with trivial reassociator.
pub fn hopf_z2(field: Field) -> CoquasiHopf {
    group_coquasi_hopf(&Cocycle3::trivial(GroupPresentation::cyclic(2), field)).expect("valid fixture")
}

/// `kℤ₂` with `ω(g,g,g) = −1`.
pub fn cq_z2(field: Field) -> CoquasiHopf {
    group_coquasi_hopf(&cq_z2_cocycle(field)).expect("valid fixture")
}

pub fn cq_z2_cocycle(field: Field) -> Cocycle3 {
    Cocycle3::new(GroupPresentation::cyclic(2), field, |x, y, z| {
        if (x, y, z) == (1, 1, 1) { field.int(-1) } else { field.one() }
    })
    .expect("valid cocycle")
}

/// Sweedler's four-dimensional Hopf algebra on `1, g, x, gx` with `g² = 1`, `x² = 0`, `xg = −gx`.
pub fn sweedler_h4(field: Field) -> Result<CoquasiHopf, Error> {
    let space = BasedSpace::new(["1", "g", "x", "gx"].map(String::from).to_vec())?;
    let d = 4;
    let (one, g, x, gx) = (0, 1, 2, 3);
    let t = |i: usize, j: usize| i * d + j;
    let mut delta = Table::new(field, d * d, d);
    delta.set(t(one, one), one, 1).set(t(g, g), g, 1);
    delta.set(t(x, one), x, 1).set(t(g, x), x, 1);
    delta.set(t(gx, g), gx, 1).set(t(one, gx), gx, 1);
    let mut counit = Table::new(field, 1, d);
    counit.set(0, one, 1).set(0, g, 1);
    let coalgebra = Coalgebra::new(space.clone(), delta.build(space.clone(), space.tensor(&space)), counit.build(space.clone(), BasedSpace::ground()))?;
    let mut m = Table::new(field, d, d * d);
    m.set(one, t(one, one), 1);
    for i in 1..d {
        m.set(i, t(one, i), 1).set(i, t(i, one), 1);
    }
    m.set(one, t(g, g), 1).set(gx, t(g, x), 1).set(x, t(g, gx), 1);
    m.set(gx, t(x, g), -1).set(x, t(gx, g), -1);
    let mult = m.build(space.tensor(&space), space.clone());
    let unit = crate::exactlin::unit_vector(field, d, one);
    let eps3 = coalgebra.power_counit_map(3);
    let bialgebra = CoquasiBialgebra::new(coalgebra, mult, unit, eps3.clone(), Some(eps3))?;
    let mut s = Table::new(field, d, d);
    s.set(one, one, 1).set(g, g, 1).set(gx, x, -1).set(x, gx, 1);
    let eps = bialgebra.counit().clone();
    CoquasiHopf::new(bialgebra, s.build(space.clone(), space), eps.clone(), eps)
}

/// The shipped sign table of the doubling basis of dimension `2ⁿ`, `n ∈ 1..=3`.
pub fn cayley_signs(n: u32) -> Result<Vec<Vec<i64>>, Error> {
    let header = format!("n {n}");
    let mut lines = CAYLEY_SIGNS.lines().filter(|l| !l.starts_with('#')).skip_while(|l| l.trim() != header).skip(1);
    let size = 1usize << n;
    let rows: Vec<Vec<i64>> = lines
        .by_ref()
        .take(size)
        .map(|l| l.split_whitespace().map(|t| t.parse::<i64>().unwrap_or(0)).collect())
        .collect();
    if rows.len() != size || rows.iter().any(|r| r.len() != size || r.iter().any(|&v| v != 1 && v != -1)) {
        return Err(Error::InvalidStructure(format!("no sign table for n = {n}")));
    }
    Ok(rows)
}

/// `k(ℤ₂)ⁿ` as a Hopf algebra, the host of the Cayley twists.
pub fn elementary_abelian_hopf(n: u32, field: Field) -> CoquasiHopf {
    group_coquasi_hopf(&Cocycle3::trivial(GroupPresentation::elementary_abelian(n), field)).expect("valid fixture")
}

/// The twist `τ(x,y) = ±1` on `k(ℤ₂)ⁿ` read from the doubling sign table.
pub fn cayley_twist(n: u32, field: Field) -> Result<GaugeTwist, Error> {
    let signs = cayley_signs(n)?;
    let host = elementary_abelian_hopf(n, field);
    let size = 1usize << n;
    let vals = (0..size * size).map(|k| field.int(signs[k / size][k % size])).collect();
    GaugeTwist::new(host.bialgebra(), LinMap::functional(host.space().power(2), field, vals))
}

/// A Cayley twist together with the twisted host and the twisted algebra `k(ℤ₂)ⁿ_{τ⁻¹}`.
#[derive(Clone, Debug)]
pub struct CayleyFixture {
    pub host: Arc<CoquasiHopf>,
    pub twist: GaugeTwist,
    pub twisted_host: Arc<CoquasiHopf>,
    pub algebra: Arc<ComoduleAlgebra>,
    pub twisted_algebra: Arc<ComoduleAlgebra>,
}

pub fn cayley_fixture(n: u32, field: Field) -> Result<CayleyFixture, Error> {
    let host = Arc::new(elementary_abelian_hopf(n, field));
    let twist = cayley_twist(n, field)?;
    let twisted_host = Arc::new(twist_bialgebra(&host, &twist)?);
    let algebra = Arc::new(ComoduleAlgebra::regular(host.clone()));
    let twisted_algebra = Arc::new(twist_comodule_algebra(&algebra, &twist, twisted_host.clone())?);
    Ok(CayleyFixture { host, twist, twisted_host, algebra, twisted_algebra })
}

/// Octonions as a comodule algebra over the Cayley-twisted `k(ℤ₂)³`.
pub fn oct(field: Field) -> Result<CayleyFixture, Error> {
    cayley_fixture(3, field)
}

/// The reassociator of the octonion host as a 3-cocycle on `(ℤ₂)³`.
pub fn oct_cocycle(field: Field) -> Result<Cocycle3, Error> {
    let fx = oct(field)?;
    let h = fx.twisted_host;
    Cocycle3::new(GroupPresentation::elementary_abelian(3), field, |x, y, z| h.omega_at(x, y, z).clone())
}

/// A `G`-graded algebra over the group coquasi-Hopf algebra `host` (basis = group elements):
/// `ρ(a) = a⊗|a|`. Rejects products leaving their degree and failures of quasi-associativity.
pub fn graded_comodule_algebra(
    host: Arc<CoquasiHopf>,
    group: &GroupPresentation,
    labels: Vec<String>,
    degrees: &[usize],
    mult: LinMap,
    one: Vector,
) -> Result<ComoduleAlgebra, Error> {
    let f = host.field();
    let n = group.order();
    if host.dim() != n {
        return Err(Error::HostMismatch(format!("host of dim {} for a group of order {n}", host.dim())));
    }
    let space = BasedSpace::new(labels)?;
    let d = space.dim();
    if degrees.len() != d || degrees.iter().any(|&g| g >= n) {
        return Err(Error::DimensionMismatch("one degree per basis vector".into()));
    }
    if mult.cols() != d * d || mult.rows() != d {
        return Err(Error::DimensionMismatch(format!("multiplication of a {d}-dimensional algebra")));
    }
    for i in 0..d {
        for j in 0..d {
            let target = group.mul(degrees[i], degrees[j]);
            if let Some((k, _)) = mult.sparse_column(i * d + j).into_iter().find(|(k, _)| degrees[*k] != target) {
                return Err(Error::GradingViolation(format!(
                    "{} · {} has a component along {} outside degree {}",
                    space.label(i),
                    space.label(j),
                    space.label(k),
                    group.labels()[target]
                )));
            }
        }
    }
    if let Some(k) = (0..d).find(|&k| !one[k].is_zero() && degrees[k] != group.identity()) {
        return Err(Error::GradingViolation(format!("unit has a component along {} outside degree e", space.label(k))));
    }
    let coaction = LinMap::from_columns(space.clone(), space.tensor(host.space()), f, |i| unit_vector(f, d * n, i * n + degrees[i]));
    let a = ComoduleAlgebra::new(host, space, coaction, mult, one)?;
    let report = verify_comodule_algebra(&a);
    if let Some(e) = report.failures().next() {
        return Err(Error::QuasiAssociativityFailed(format!("{} at {:?}", e.name, e.witness)));
    }
    Ok(a)
}

/// `A = kℤ₂` over `kℤ₂` via `Δ`.
pub fn self_z2(field: Field) -> Arc<ComoduleAlgebra> {
    Arc::new(ComoduleAlgebra::regular(Arc::new(hopf_z2(field))))
}

/// Dual numbers `k[v]/(v²)` with `v` in degree `g` over `kℤ₂` with `ω(g,g,g) = −1`.
pub fn cq_dual(field: Field) -> Arc<ComoduleAlgebra> {
    let host = Arc::new(cq_z2(field));
    let labels = ["1", "v"].map(String::from).to_vec();
    let mut m = Table::new(field, 2, 4);
    m.set(0, 0, 1).set(1, 1, 1).set(1, 2, 1);
    let space = BasedSpace::new(labels.clone()).expect("distinct labels");
    let mult = m.build(space.tensor(&space), space);
    let one = vec![field.one(), field.zero()];
    Arc::new(graded_comodule_algebra(host, &GroupPresentation::cyclic(2), labels, &[0, 1], mult, one).expect("valid fixture"))
}

/// `M₂(k)` graded by `ℤ₂` with diagonal units in degree `e` and off-diagonal ones in degree `g`.
pub fn mat_z2(field: Field) -> Arc<ComoduleAlgebra> {
    let host = Arc::new(hopf_z2(field));
    let group = GroupPresentation::cyclic(2);
    let labels = ["e11", "e12", "e21", "e22"].map(String::from).to_vec();
    let unit_index = |r: usize, c: usize| r * 2 + c;
    let mut m = Table::new(field, 4, 16);
    for (i, j) in (0..2).flat_map(|i| (0..2).map(move |j| (i, j))) {
        for l in 0..2 {
            m.set(unit_index(i, l), unit_index(i, j) * 4 + unit_index(j, l), 1);
        }
    }
    let space = BasedSpace::new(labels.clone()).expect("distinct labels");
    let mult = m.build(space.tensor(&space), space);
    let mut one = vec![field.zero(); 4];
    one[unit_index(0, 0)] = field.one();
    one[unit_index(1, 1)] = field.one();
    let degrees = [0, 1, 1, 0];
    Arc::new(graded_comodule_algebra(host, &group, labels, &degrees, mult, one).expect("valid fixture"))
}

/// `k×k` concentrated in degree `e` over `kℤ₂`: not strongly graded.
pub fn notsg(field: Field) -> Arc<ComoduleAlgebra> {
    let host = Arc::new(hopf_z2(field));
    let group = GroupPresentation::cyclic(2);
    let labels = ["p1", "p2"].map(String::from).to_vec();
    let mut m = Table::new(field, 2, 4);
    m.set(0, 0, 1).set(1, 3, 1);
    let space = BasedSpace::new(labels.clone()).expect("distinct labels");
    let mult = m.build(space.tensor(&space), space);
    Arc::new(graded_comodule_algebra(host, &group, labels, &[0, 0], mult, vec![field.one(), field.one()]).expect("valid fixture"))
}

/// A normalized, non-cocycle twist of Sweedler's algebra with generic rational values.
pub fn h4_generic_twist(h4: &CoquasiHopf) -> Result<GaugeTwist, Error> {
    let f = h4.field();
    let d = 4;
    let mut vals = vec![f.zero(); d * d];
    for i in 0..d {
        vals[i] = h4.counit_at(i).clone();
        vals[i * d] = h4.counit_at(i).clone();
    }
    let generic = [(1, 1, 2, 1), (1, 2, 1, 3), (1, 3, -1, 2), (2, 1, 3, 5), (2, 2, 1, 7), (2, 3, -2, 3), (3, 1, 1, 4), (3, 2, 5, 2), (3, 3, -3, 7)];
    for (i, j, num, den) in generic {
        vals[i * d + j] = f.ratio(num, den).ok_or_else(|| Error::InvalidField("denominator vanishes".into()))?;
    }
    GaugeTwist::new(h4.bialgebra(), LinMap::functional(h4.space().power(2), f, vals))
}

/// Sweedler's algebra twisted by [`h4_generic_twist`]: a non-cocommutative coquasi-Hopf algebra
/// with nontrivial reassociator, and `H4` with twisted product as a comodule algebra over it.
#[derive(Clone, Debug)]
pub struct TwistedH4 {
    pub host: Arc<CoquasiHopf>,
    pub twist: GaugeTwist,
    pub twisted_host: Arc<CoquasiHopf>,
    pub algebra: Arc<ComoduleAlgebra>,
    pub twisted_algebra: Arc<ComoduleAlgebra>,
}

pub fn h4_twisted(field: Field) -> Result<TwistedH4, Error> {
    let host = Arc::new(sweedler_h4(field)?);
    let twist = h4_generic_twist(&host)?;
    let twisted_host = Arc::new(twist_bialgebra(&host, &twist)?);
    let algebra = Arc::new(ComoduleAlgebra::regular(host.clone()));
    let twisted_algebra = Arc::new(twist_comodule_algebra(&algebra, &twist, twisted_host.clone())?);
    Ok(TwistedH4 { host, twist, twisted_host, algebra, twisted_algebra })
}

/// Scalar helper for fixtures written with small integers.
pub fn scalar(field: Field, n: i64) -> Scalar {
    field.int(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_sign_tables_have_doubling_sizes() {
        for n in 1..=3 {
            let t = cayley_signs(n).unwrap();
            assert_eq!(t.len(), 1 << n);
            assert!(t.iter().flatten().all(|s| s.abs() == 1));
        }
    }
}
