use matpi::matrix::Matrix;
use matpi::sampling::{random_matrix, random_scalar, rng_from_seed};
use matpi::standard::{consecutive_factor_sum, eval_multilinear, MultilinearPoly, Permutation};
use matpi::{eval_standard_dp, eval_standard_naive, RingSpec, Scalar};
use proptest::prelude::*;

fn gf(p: u64) -> RingSpec {
    RingSpec::prime_field(p).unwrap()
}

fn unit(ring: RingSpec, n: usize, i: usize, j: usize) -> Matrix {
    Matrix::unit(ring, n, i, j).unwrap()
}

fn m2_units(ring: RingSpec) -> Vec<Matrix> {
    (1..=2).flat_map(|i| (1..=2).map(move |j| unit(ring, 2, i, j))).collect()
}

#[test]
fn spec_examples() {
    let q = RingSpec::rationals();
    assert_eq!(eval_standard_naive(&[unit(q, 2, 1, 1), unit(q, 2, 1, 2)]).unwrap(), unit(q, 2, 1, 2));
    let stairs = [unit(q, 2, 1, 1), unit(q, 2, 1, 2), unit(q, 2, 2, 2)];
    assert_eq!(eval_standard_naive(&stairs).unwrap(), unit(q, 2, 1, 2));
    let mut rng = rng_from_seed(1);
    let x = random_matrix(q, 2, 2, &mut rng);
    let y = random_matrix(q, 2, 2, &mut rng);
    assert!(eval_standard_naive(&[x.clone(), y.clone(), x.clone(), y.clone()]).unwrap().is_zero());
    assert!(eval_standard_dp(&[x.clone(), y, x]).unwrap().is_zero());
}

#[test]
fn dp_matches_naive_on_all_unit_tuples_up_to_six() {
    let r = gf(101);
    let units = m2_units(r);
    for t in 1..=6 {
        let total = 4usize.pow(t as u32);
        for mut code in 0..total {
            let tuple: Vec<&Matrix> = (0..t)
                .map(|_| {
                    let u = &units[code % 4];
                    code /= 4;
                    u
                })
                .collect();
            assert_eq!(eval_standard_dp(&tuple).unwrap(), eval_standard_naive(&tuple).unwrap());
        }
    }
}

#[test]
fn dp_matches_naive_on_random_tuples_seven_and_eight() {
    let r = gf(101);
    let mut rng = rng_from_seed(78);
    for t in [7, 8] {
        for _ in 0..500 {
            let tuple: Vec<Matrix> = (0..t).map(|_| random_matrix(r, 2, 2, &mut rng)).collect();
            assert_eq!(eval_standard_dp(&tuple).unwrap(), eval_standard_naive(&tuple).unwrap());
        }
    }
}

#[test]
fn staircase_tail_matches_naive() {
    for ring in [gf(101), RingSpec::rationals()] {
        let tail = matpi::constructions::staircase(3, ring).unwrap().split_off(1);
        assert_eq!(tail.len(), 4);
        let s6_input: Vec<Matrix> = {
            // six arguments: the tail plus two more units of U_3
            let mut v = tail.clone();
            v.push(unit(ring, 3, 1, 3));
            v.push(unit(ring, 3, 1, 1));
            v
        };
        assert_eq!(eval_standard_dp(&s6_input).unwrap(), eval_standard_naive(&s6_input).unwrap());
        assert_eq!(eval_standard_dp(&tail).unwrap(), eval_standard_naive(&tail).unwrap());
    }
}

#[test]
fn multilinear_examples() {
    let r = gf(7);
    let mut rng = rng_from_seed(3);
    let xs: Vec<Matrix> = (0..4).map(|_| random_matrix(r, 2, 2, &mut rng)).collect();
    let s4 = MultilinearPoly::standard(r, 4).unwrap();
    assert_eq!(eval_multilinear(&s4, &xs).unwrap(), eval_standard_naive(&xs).unwrap());

    let mut mono = MultilinearPoly::zero(r, 4);
    mono.set_monomial(&Permutation::identity(4), Scalar::one(r)).unwrap();
    let prod = xs[1..].iter().fold(xs[0].clone(), |acc, x| acc.mul(x).unwrap());
    assert_eq!(eval_multilinear(&mono, &xs).unwrap(), prod);

    let comm = MultilinearPoly::standard(r, 2).unwrap();
    let a = random_matrix(r, 1, 1, &mut rng);
    let b = random_matrix(r, 1, 1, &mut rng);
    assert!(eval_multilinear(&comm, &[a, b]).unwrap().is_zero());
    assert!(eval_multilinear(&comm, &xs[..3]).is_err());
}

#[test]
fn consecutive_factor_examples() {
    let r = gf(7);
    let mut rng = rng_from_seed(4);
    let xs: Vec<Matrix> = (0..4).map(|_| random_matrix(r, 2, 2, &mut rng)).collect();
    let y = xs[1].mul(&xs[2]).unwrap().mul(&xs[3]).unwrap();
    let expected = xs[0].mul(&y).unwrap().sub(&y.mul(&xs[0]).unwrap()).unwrap();
    assert_eq!(consecutive_factor_sum(&xs, 1, 3).unwrap(), expected);
    assert_eq!(consecutive_factor_sum(&xs, 2, 1).unwrap(), eval_standard_naive(&xs).unwrap());
    assert!(consecutive_factor_sum(&xs, 2, 3).is_err());
    assert!(consecutive_factor_sum(&xs, 0, 0).is_err());

    let q = RingSpec::rationals();
    let xs: Vec<Matrix> = (0..5).map(|_| random_matrix(q, 3, 3, &mut rng)).collect();
    let y = xs[0].mul(&xs[1]).unwrap().mul(&xs[2]).unwrap();
    assert_eq!(
        consecutive_factor_sum(&xs, 0, 3).unwrap(),
        eval_standard_dp(&[y, xs[3].clone(), xs[4].clone()]).unwrap()
    );
}

#[test]
fn even_window_is_computed() {
    // no closed form is asserted; the value is the filtered permutation sum
    let r = gf(11);
    let mut rng = rng_from_seed(5);
    let xs: Vec<Matrix> = (0..4).map(|_| random_matrix(r, 2, 2, &mut rng)).collect();
    let v = consecutive_factor_sum(&xs, 0, 2).unwrap();
    let mut manual = Matrix::zeros(r, 2, 2);
    for p in matpi::standard::permutations(4) {
        if p.word().windows(2).any(|w| w == [1, 2]) {
            let term = p.word().iter().fold(Matrix::identity(r, 2), |acc, &k| acc.mul(&xs[k - 1]).unwrap());
            let sign = Scalar::from_i64(r, p.sign() as i64);
            manual = manual.add(&term.scale(&sign)).unwrap();
        }
    }
    assert_eq!(v, manual);
}

fn tuple(ring: RingSpec, n: usize, t: usize, seed: u64) -> Vec<Matrix> {
    let mut rng = rng_from_seed(seed);
    (0..t).map(|_| random_matrix(ring, n, n, &mut rng)).collect()
}

fn small_ring() -> impl Strategy<Value = RingSpec> {
    prop_oneof![Just(gf(7)), Just(gf(101)), Just(RingSpec::rationals())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn alternation(ring in small_ring(), seed in any::<u64>(), t in 2usize..6, n in 1usize..4, i in 0usize..6, j in 0usize..6) {
        let (i, j) = (i % t, j % t);
        prop_assume!(i != j);
        let mut xs = tuple(ring, n, t, seed);
        xs[j] = xs[i].clone();
        prop_assert!(eval_standard_dp(&xs).unwrap().is_zero());
        prop_assert!(eval_standard_naive(&xs).unwrap().is_zero());
    }

    #[test]
    fn antisymmetry(ring in small_ring(), seed in any::<u64>(), t in 2usize..7, i in 0usize..7, j in 0usize..7) {
        let (i, j) = (i % t, j % t);
        prop_assume!(i != j);
        let xs = tuple(ring, 2, t, seed);
        let mut swapped = xs.clone();
        swapped.swap(i, j);
        prop_assert_eq!(eval_standard_dp(&swapped).unwrap(), eval_standard_dp(&xs).unwrap().neg());
    }

    #[test]
    fn multilinearity(ring in small_ring(), seed in any::<u64>(), t in 1usize..7, slot in 0usize..7) {
        let slot = slot % t;
        let mut rng = rng_from_seed(seed ^ 0xabc);
        let xs = tuple(ring, 3, t, seed);
        let y = random_matrix(ring, 3, 3, &mut rng);
        let (a, b) = (random_scalar(ring, &mut rng), random_scalar(ring, &mut rng));
        let mut mixed = xs.clone();
        mixed[slot] = xs[slot].add_scale(&y, &a, &b).unwrap();
        let mut with_y = xs.clone();
        with_y[slot] = y;
        let lhs = eval_standard_dp(&mixed).unwrap();
        let rhs = eval_standard_dp(&xs).unwrap().add_scale(&eval_standard_dp(&with_y).unwrap(), &a, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unital_reduction(ring in small_ring(), seed in any::<u64>(), half in 1usize..4, n in 1usize..4) {
        let xs = tuple(ring, n, 2 * half, seed);
        let mut with_one = vec![Matrix::identity(ring, n)];
        with_one.extend(xs.iter().cloned());
        prop_assert_eq!(eval_standard_dp(&with_one).unwrap(), eval_standard_dp(&xs).unwrap());
    }

    #[test]
    fn permutation_rank_round_trip(t in 1usize..8, r in any::<u32>()) {
        let total = matpi::standard::factorial(t).unwrap();
        let rank = r as usize % total;
        let p = Permutation::from_lex_rank(t, rank).unwrap();
        prop_assert_eq!(p.lex_rank(), rank);
        let inversions = (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j)))
            .filter(|&(i, j)| p.word()[i] > p.word()[j]).count();
        prop_assert_eq!(p.sign(), if inversions % 2 == 0 { 1 } else { -1 });
    }
}
