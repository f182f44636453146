use matpi::matrix::{mat_add_scale, mat_mul, matrix_unit, nullspace, rref, Matrix};
use matpi::sampling::{random_matrix, random_scalar, rng_from_seed};
use matpi::{Error, RingSpec, Scalar};
use num_traits::One;
use proptest::prelude::*;

fn gf(p: u64) -> RingSpec {
    RingSpec::prime_field(p).unwrap()
}

#[test]
fn unit_products() {
    let r = gf(5);
    let e12 = matrix_unit(2, 1, 2, r).unwrap();
    let e22 = matrix_unit(2, 2, 2, r).unwrap();
    assert_eq!(mat_mul(&e12, &e22).unwrap(), e12);
    let q = RingSpec::rationals();
    let e12 = matrix_unit(2, 1, 2, q).unwrap();
    assert!(mat_mul(&e12, &e12).unwrap().is_zero());
}

#[test]
fn associativity_on_random_triple() {
    let r = gf(7);
    let mut rng = rng_from_seed(11);
    let (a, b, c) = (
        random_matrix(r, 3, 3, &mut rng),
        random_matrix(r, 3, 3, &mut rng),
        random_matrix(r, 3, 3, &mut rng),
    );
    let left = a.mul(&b.mul(&c).unwrap()).unwrap();
    let right = a.mul(&b).unwrap().mul(&c).unwrap();
    assert_eq!(left, right);
}

#[test]
fn add_scale_examples() {
    let q = RingSpec::rationals();
    let e11 = matrix_unit(2, 1, 1, q).unwrap();
    let one = Scalar::one(q);
    assert!(mat_add_scale(&e11, &e11, &one, &-&one).unwrap().is_zero());
    let e12 = matrix_unit(2, 1, 2, q).unwrap();
    assert_eq!(mat_add_scale(&e12, &e11, &one, &Scalar::zero(q)).unwrap(), e12);

    let z4 = RingSpec::integers_mod(4).unwrap();
    let e = matrix_unit(2, 1, 2, z4).unwrap();
    let two = Scalar::from_i64(z4, 2);
    assert!(mat_add_scale(&e, &e, &two, &two).unwrap().is_zero());
}

#[test]
fn mismatches_are_errors() {
    let r = gf(5);
    let a = Matrix::zeros(r, 2, 3);
    assert!(matches!(mat_mul(&a, &a), Err(Error::DimensionMismatch { .. })));
    let b = Matrix::zeros(RingSpec::rationals(), 3, 2);
    assert!(matches!(mat_mul(&a, &b), Err(Error::RingMismatch { .. })));
    assert!(matches!(matrix_unit(2, 3, 1, r), Err(Error::IndexOutOfRange { .. })));
    assert!(matches!(matrix_unit(2, 0, 1, r), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn units_partition_identity() {
    let r = gf(101);
    let sum = (1..=3).fold(Matrix::zeros(r, 3, 3), |acc, i| acc.add(&matrix_unit(3, i, i, r).unwrap()).unwrap());
    assert_eq!(sum, Matrix::identity(r, 3));
    assert_eq!(matrix_unit(3, 3, 3, r).unwrap().support(), vec![(2, 2)]);
}

#[test]
fn rref_examples() {
    let q = RingSpec::rationals();
    let e = rref(&Matrix::identity(q, 3)).unwrap();
    assert_eq!((e.rank, e.pivots.clone()), (3, vec![0, 1, 2]));
    assert_eq!(rref(&Matrix::zeros(q, 2, 3)).unwrap().rank, 0);
    let r = gf(5);
    let v = matrix_unit(2, 1, 2, r).unwrap().vectorize();
    let stacked = Matrix::stack(r, 4, &[v.clone(), v.scale(&Scalar::from_i64(r, 2))]).unwrap();
    assert_eq!(rref(&stacked).unwrap().rank, 1);
    let z4 = RingSpec::integers_mod(4).unwrap();
    assert!(matches!(rref(&Matrix::identity(z4, 2)), Err(Error::UnsupportedRing { .. })));
}

#[test]
fn nullspace_examples() {
    let r = gf(5);
    assert!(nullspace(&Matrix::identity(r, 3)).unwrap().is_empty());
    assert_eq!(nullspace(&Matrix::zeros(r, 2, 2)).unwrap().len(), 2);
    let ones = Matrix::from_i64(r, 1, 2, &[1, 1]).unwrap();
    let ns = nullspace(&ones).unwrap();
    assert_eq!(ns.len(), 1);
    let (x, y) = (&ns[0][0], &ns[0][1]);
    assert!((x + y).is_zero());
    assert!(!x.is_zero());
}

#[test]
fn rational_products_stay_exact() {
    let q = RingSpec::rationals();
    let mut rng = rng_from_seed(50);
    let mut acc = Matrix::identity(q, 4);
    for _ in 0..50 {
        let mut m = random_matrix(q, 4, 4, &mut rng);
        // make denominators appear
        for k in 0..4 {
            let d = Scalar::from_fraction(q, 1, 2 + k as i64).unwrap();
            m.set(k, k, &(&m.get(k, k) + &d));
        }
        acc = acc.mul(&m).unwrap();
    }
    for s in acc.entries() {
        let v = s.as_rational().unwrap();
        assert!(num_integer::Integer::gcd(v.numer(), v.denom()).is_one());
        assert!(v.denom() > &num_bigint::BigInt::from(0));
    }
    assert!(acc.entries().iter().any(|s| s.as_rational().unwrap().numer().bits() > 128));
}

fn ring_strategy() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        Just(RingSpec::prime_field(7).unwrap()),
        Just(RingSpec::prime_field(101).unwrap()),
        Just(RingSpec::prime_field(4294967291).unwrap()),
        Just(RingSpec::rationals()),
        Just(RingSpec::integers_mod(4).unwrap()),
        Just(RingSpec::integers_mod(12).unwrap()),
    ]
}

fn scalars(ring: RingSpec, seed: u64, k: usize) -> Vec<Scalar> {
    let mut rng = rng_from_seed(seed);
    (0..k).map(|_| random_scalar(ring, &mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_axioms(ring in ring_strategy(), seed in any::<u64>()) {
        let v = scalars(ring, seed, 3);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a + &-a).is_zero());
        prop_assert_eq!(a * b, b * a);
        if ring.is_field() && !a.is_zero() {
            prop_assert!((a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_text_round_trip(ring in ring_strategy(), seed in any::<u64>()) {
        let a = scalars(ring, seed, 1).remove(0);
        prop_assert_eq!(Scalar::parse(ring, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn rref_is_idempotent(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, q in any::<bool>()) {
        let ring = if q { RingSpec::rationals() } else { gf(7) };
        let mut rng = rng_from_seed(seed);
        let a = random_matrix(ring, rows, cols, &mut rng);
        let e = rref(&a).unwrap();
        let again = rref(&e.echelon).unwrap();
        prop_assert_eq!(&again.echelon, &e.echelon);
        prop_assert_eq!(again.pivots, e.pivots);
    }

    #[test]
    fn rank_nullity(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..7, sparse in any::<bool>()) {
        let ring = gf(5);
        let mut rng = rng_from_seed(seed);
        let mut a = random_matrix(ring, rows, cols, &mut rng);
        if sparse {
            // force dependencies
            for c in 0..cols {
                a.set(0, c, &Scalar::zero(ring));
            }
        }
        let rank = rref(&a).unwrap().rank;
        let ns = nullspace(&a).unwrap();
        prop_assert_eq!(rank + ns.len(), cols);
        for v in ns {
            let col = Matrix::from_scalars(ring, cols, 1, &v).unwrap();
            prop_assert!(a.mul(&col).unwrap().is_zero());
        }
    }
}
