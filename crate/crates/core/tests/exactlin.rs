use cqh_core::exactlin::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn q(n: i64) -> Scalar {
    Field::Rational.int(n)
}

fn mat(rows: &[&[i64]]) -> LinMap {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    let data: Vec<Vec<Scalar>> = rows.iter().map(|row| row.iter().map(|&v| q(v)).collect()).collect();
    LinMap::from_rows(BasedSpace::numbered("x", c), BasedSpace::numbered("y", r), Field::Rational, &data).unwrap()
}

/// Textbook dense Gauss-Jordan over rationals, independent of the library eliminator.
fn oracle_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for v in m[rank].iter_mut() {
            *v = &*v / &pivot;
        }
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let prow = m[rank].clone();
                for (a, b) in m[i].iter_mut().zip(prow) {
                    *a = &*a - &f * b;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn compose_examples() {
    let id2 = LinMap::identity(BasedSpace::numbered("e", 2), Field::Rational);
    assert_eq!(id2.compose(&id2).unwrap(), id2);
    let k = BasedSpace::ground();
    let half = LinMap::functional(k.clone(), Field::Rational, vec![Field::Rational.ratio(1, 2).unwrap()]);
    let two_thirds = LinMap::functional(k.clone(), Field::Rational, vec![Field::Rational.ratio(2, 3).unwrap()]);
    assert_eq!(half.compose(&two_thirds).unwrap().entry(0, 0), &Field::Rational.ratio(1, 3).unwrap());
    let f5 = Field::prime(5).unwrap();
    let three = LinMap::functional(k.clone(), f5, vec![f5.int(3)]);
    let four = LinMap::functional(k, f5, vec![f5.int(4)]);
    assert_eq!(three.compose(&four).unwrap().entry(0, 0), &f5.int(2));
}

#[test]
fn compose_rejects_bad_shapes_and_fields() {
    let a = mat(&[&[1, 2]]);
    assert!(matches!(a.compose(&a), Err(cqh_core::Error::DimensionMismatch(_))));
    let f5 = Field::prime(5).unwrap();
    let b = LinMap::identity(BasedSpace::numbered("e", 2), f5);
    assert!(matches!(a.compose(&b), Err(cqh_core::Error::FieldMismatch)));
    assert!(matches!(a.kronecker(&b), Err(cqh_core::Error::FieldMismatch)));
}

#[test]
fn kronecker_examples() {
    let id2 = LinMap::identity(BasedSpace::numbered("a", 2), Field::Rational);
    let id3 = LinMap::identity(BasedSpace::numbered("b", 3), Field::Rational);
    let k = id2.kronecker(&id3).unwrap();
    assert!(k.same_matrix(&LinMap::identity(BasedSpace::numbered("c", 6), Field::Rational)));
    let a = LinMap::functional(BasedSpace::ground(), Field::Rational, vec![q(3)]);
    let b = LinMap::functional(BasedSpace::ground(), Field::Rational, vec![q(-2)]);
    assert_eq!(a.kronecker(&b).unwrap().entry(0, 0), &q(-6));
    let f = mat(&[&[1, 2], &[3, 4]]);
    let g = mat(&[&[0, 1], &[5, -1]]);
    // Left-major: (f⊗g)[(i1,i2),(j1,j2)] = f[i1,j1] g[i2,j2].
    let fg = f.kronecker(&g).unwrap();
    assert_eq!(fg.entry(2 + 1, 1), &(q(3) * q(-1)));
}

#[test]
fn kernel_examples() {
    let zero = LinMap::zero(BasedSpace::numbered("e", 3), BasedSpace::numbered("f", 2), Field::Rational);
    assert_eq!(zero.kernel().dim(), 3);
    assert_eq!(LinMap::identity(BasedSpace::numbered("e", 3), Field::Rational).kernel().dim(), 0);
    let k = mat(&[&[1, 1], &[1, 1]]).kernel();
    assert_eq!(k.dim(), 1);
    let v = &k.basis_vectors[0];
    assert_eq!(v[0], -v[1].clone());
    assert!(!v[0].is_zero());
}

#[test]
fn solve_examples() {
    let id = LinMap::identity(BasedSpace::numbered("e", 2), Field::Rational);
    assert_eq!(id.solve(&[q(4), q(-1)]).unwrap(), Some(vec![q(4), q(-1)]));
    let singular = mat(&[&[1, 1], &[1, 1]]);
    assert_eq!(singular.solve(&[q(1), q(2)]).unwrap(), None);
    let two = mat(&[&[2]]);
    assert_eq!(two.solve(&[q(1)]).unwrap(), Some(vec![Field::Rational.ratio(1, 2).unwrap()]));
    assert!(two.solve(&[q(1), q(1)]).is_err());
}

#[test]
fn invert_examples() {
    let id = LinMap::identity(BasedSpace::numbered("e", 3), Field::Rational);
    assert_eq!(id.invert().unwrap().unwrap(), id);
    let swap = mat(&[&[0, 1], &[1, 0]]);
    assert!(swap.invert().unwrap().unwrap().same_matrix(&swap));
    assert!(mat(&[&[1, 1], &[1, 1]]).invert().unwrap().is_none());
    assert!(matches!(mat(&[&[1, 2]]).invert(), Err(cqh_core::Error::NotSquare { .. })));
}

#[test]
fn cokernel_examples() {
    let space = BasedSpace::numbered("e", 2);
    let zero = LinMap::zero(BasedSpace::numbered("r", 1), space.clone(), Field::Rational);
    let qz = zero.cokernel_quotient();
    assert_eq!(qz.dim(), 2);
    assert!(qz.projection.same_matrix(&LinMap::identity(space.clone(), Field::Rational)));
    assert_eq!(LinMap::identity(space.clone(), Field::Rational).cokernel_quotient().dim(), 0);
    let diag = mat(&[&[1], &[1]]);
    let qd = diag.cokernel_quotient();
    assert_eq!(qd.dim(), 1);
    assert!(qd.projection.compose(&diag).unwrap().is_zero());
}

fn small_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r))
}

fn to_map(rows: &[Vec<i64>], field: Field) -> LinMap {
    let data: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&v| field.int(v)).collect()).collect();
    LinMap::from_rows(BasedSpace::numbered("x", rows[0].len()), BasedSpace::numbered("y", rows.len()), field, &data).unwrap()
}

proptest! {
    #[test]
    fn rank_matches_oracle(rows in small_matrix(6)) {
        prop_assert_eq!(to_map(&rows, Field::Rational).rank(), oracle_rank(&rows));
    }

    #[test]
    fn kernel_is_annihilated_and_complementary(rows in small_matrix(6)) {
        let f = to_map(&rows, Field::Rational);
        let k = f.kernel();
        prop_assert_eq!(k.dim() + f.rank(), f.cols());
        prop_assert!(f.compose(&k.inclusion).unwrap().is_zero());
        let id = LinMap::identity(k.space.clone(), Field::Rational);
        prop_assert!(k.projection.compose(&k.inclusion).unwrap().same_matrix(&id));
    }

    #[test]
    fn inverse_is_two_sided(rows in (1usize..=5).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), n))) {
        let f = to_map(&rows, Field::Rational);
        match f.invert().unwrap() {
            Some(inv) => {
                prop_assert!(f.compose(&inv).unwrap().same_matrix(&LinMap::identity(f.codomain().clone(), Field::Rational)));
                prop_assert!(inv.compose(&f).unwrap().same_matrix(&LinMap::identity(f.domain().clone(), Field::Rational)));
            }
            None => prop_assert!(oracle_rank(&rows) < rows.len()),
        }
    }

    #[test]
    fn quotient_kills_relations(rows in small_matrix(6)) {
        let r = to_map(&rows, Field::Rational);
        let quo = r.cokernel_quotient();
        prop_assert!(quo.projection.compose(&r).unwrap().is_zero());
        prop_assert_eq!(quo.projection.rank(), quo.dim());
        prop_assert_eq!(quo.dim(), r.rows() - r.rank());
        let id = LinMap::identity(quo.space.clone(), Field::Rational);
        prop_assert!(quo.projection.compose(&quo.section).unwrap().same_matrix(&id));
    }

    #[test]
    fn solve_returns_a_solution(rows in small_matrix(5), seed in proptest::collection::vec(-3i64..=3, 5)) {
        let f = to_map(&rows, Field::Rational);
        let x: Vec<Scalar> = (0..f.cols()).map(|i| Field::Rational.int(seed[i])).collect();
        let target = f.apply(&x);
        let sol = f.solve(&target).unwrap().expect("consistent by construction");
        prop_assert_eq!(f.apply(&sol), target);
    }

    #[test]
    fn elimination_is_deterministic(rows in small_matrix(5)) {
        let a = to_map(&rows, Field::Rational);
        let b = to_map(&rows, Field::Rational);
        prop_assert_eq!(a.kernel().basis_vectors, b.kernel().basis_vectors);
        prop_assert_eq!(a.cokernel_quotient().projection, b.cokernel_quotient().projection);
    }

    #[test]
    fn kronecker_mixed_product(a in small_matrix(3), b in small_matrix(3)) {
        // (f ⊗ id)(id ⊗ g) = f ⊗ g
        let f = to_map(&a, Field::Rational);
        let g = to_map(&b, Field::Rational);
        let lhs = f.kronecker(&LinMap::identity(g.codomain().clone(), Field::Rational)).unwrap()
            .compose(&LinMap::identity(f.domain().clone(), Field::Rational).kronecker(&g).unwrap()).unwrap();
        prop_assert!(lhs.same_matrix(&f.kronecker(&g).unwrap()));
    }

    #[test]
    fn prime_field_rank_never_exceeds_rational(rows in small_matrix(5)) {
        let f7 = Field::prime(7).unwrap();
        prop_assert!(to_map(&rows, f7).rank() <= oracle_rank(&rows));
    }
}
