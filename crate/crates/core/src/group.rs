//! Finite groups by multiplication table, normalized 3-cocycles, and their coquasi-Hopf group algebras.

use crate::coquasi::{Coalgebra, CoquasiBialgebra, CoquasiHopf};
use crate::exactlin::{multi_index, split_index, unit_vector, BasedSpace, Field, LinMap, Scalar};
use crate::Error;

/// A finite group given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
}

impl GroupPresentation {
    /// Validates the group axioms and derives identity and inverses.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, Error> {
        let n = labels.len();
        let bad = |why: &str| Err(Error::InvalidStructure(format!("not a group: {why}")));
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("table shape");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)) else {
            return bad("no identity");
        };
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            match (0..n).find(|&y| table[x][y] == identity && table[y][x] == identity) {
                Some(y) => inverse.push(y),
                None => return bad("missing inverse"),
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[table[x][y]][z] != table[x][table[y][z]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(GroupPresentation { labels, table, inverse, identity })
    }

    /// `ℤ_n` with labels `e, g, g2, …`.
    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|k| match k { 0 => "e".to_string(), 1 => "g".to_string(), _ => format!("g{k}") }).collect();
        let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
        GroupPresentation::new(labels, table).expect("cyclic group")
    }

    /// `(ℤ₂)ⁿ` with elements as bit masks; labels `e, h1, …, h(2ⁿ−1)`.
    pub fn elementary_abelian(n: u32) -> Self {
        let size = 1usize << n;
        let labels = (0..size).map(|k| if k == 0 { "e".to_string() } else { format!("h{k}") }).collect();
        let table = (0..size).map(|x| (0..size).map(|y| x ^ y).collect()).collect();
        GroupPresentation::new(labels, table).expect("elementary abelian group")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }
}

/// A normalized 3-cocycle `G³ → k^×`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle3 {
    group: GroupPresentation,
    field: Field,
    values: Vec<Scalar>,
}

impl Cocycle3 {
    pub fn new(group: GroupPresentation, field: Field, mut value: impl FnMut(usize, usize, usize) -> Scalar) -> Result<Self, Error> {
        let n = group.order();
        let values: Vec<Scalar> = (0..n * n * n)
            .map(|k| {
                let ix = split_index(k, &[n, n, n]);
                value(ix[0], ix[1], ix[2])
            })
            .collect();
        let c = Cocycle3 { group, field, values };
        c.validate()?;
        Ok(c)
    }

    pub fn trivial(group: GroupPresentation, field: Field) -> Self {
        Cocycle3::new(group, field, |_, _, _| field.one()).expect("trivial cocycle")
    }

    pub fn group(&self) -> &GroupPresentation {
        &self.group
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn value(&self, x: usize, y: usize, z: usize) -> &Scalar {
        let n = self.group.order();
        &self.values[multi_index(&[x, y, z], &[n, n, n])]
    }

    fn validate(&self) -> Result<(), Error> {
        let g = &self.group;
        let n = g.order();
        let e = g.identity();
        let label = |ix: &[usize]| ix.iter().map(|&i| g.labels()[i].as_str()).collect::<Vec<_>>().join(",");
        for k in 0..n * n * n {
            let ix = split_index(k, &[n, n, n]);
            let v = &self.values[k];
            if v.field() != self.field {
                return Err(Error::FieldMismatch);
            }
            if v.is_zero() {
                return Err(Error::CocycleInvalid(format!("zero value at ({})", label(&ix))));
            }
            if ix.contains(&e) && !v.is_one() {
                return Err(Error::CocycleInvalid(format!("not normalized at ({})", label(&ix))));
            }
        }
        for k in 0..n.pow(4) {
            let ix = split_index(k, &[n; 4]);
            let (a, b, c, d) = (ix[0], ix[1], ix[2], ix[3]);
            let lhs = self.value(a, b, g.mul(c, d)) * self.value(g.mul(a, b), c, d);
            let rhs = self.value(b, c, d) * self.value(a, g.mul(b, c), d) * self.value(a, b, c);
            if lhs != rhs {
                return Err(Error::CocycleInvalid(format!("cocycle identity fails at ({})", label(&ix))));
            }
        }
        Ok(())
    }
}

/// The group algebra `kG` with `Δ(x) = x⊗x`, `S(x) = x⁻¹`, reassociator from `w`, `α = ε` and
/// `β(x) = ω⁻¹(x, x⁻¹, x)`.
pub fn group_coquasi_hopf(w: &Cocycle3) -> Result<CoquasiHopf, Error> {
    let g = w.group();
    let f = w.field();
    let n = g.order();
    let space = BasedSpace::new(g.labels().to_vec())?;
    let sq = space.tensor(&space);
    let comult = LinMap::from_columns(space.clone(), sq.clone(), f, |x| unit_vector(f, n * n, x * n + x));
    let ones = vec![f.one(); n];
    let counit = LinMap::functional(space.clone(), f, ones.clone());
    let coalgebra = Coalgebra::new(space.clone(), comult, counit.clone())?;
    let mult = LinMap::from_columns(sq, space.clone(), f, |k| unit_vector(f, n, g.mul(k / n, k % n)));
    let unit = unit_vector(f, n, g.identity());
    let cube = space.power(3);
    let omega_vals: Vec<Scalar> = w.values.clone();
    let inv_vals = omega_vals.iter().map(|v| v.inv().expect("cocycle values are nonzero")).collect::<Vec<_>>();
    let omega = LinMap::functional(cube.clone(), f, omega_vals);
    let omega_inv = LinMap::functional(cube, f, inv_vals);
    let bialgebra = CoquasiBialgebra::new(coalgebra, mult, unit, omega, Some(omega_inv))?;
    let antipode = LinMap::from_columns(space.clone(), space.clone(), f, |x| unit_vector(f, n, g.inverse(x)));
    let beta_vals = (0..n).map(|x| w.value(x, g.inverse(x), x).inv().expect("nonzero")).collect();
    let beta = LinMap::functional(space, f, beta_vals);
    CoquasiHopf::new(bialgebra, antipode, counit, beta)
}
