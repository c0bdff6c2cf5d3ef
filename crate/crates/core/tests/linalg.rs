mod common;

use std::collections::BTreeSet;

use common::{all_vectors, mat_vec, span};
use jordanlab_core::linalg::{howell_form, solve_affine, solve_homogeneous, ResidueMatrix, SolutionModule};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = (u64, usize, Vec<Vec<u64>>)> {
    (2u64..=8, 1usize..=3, 0usize..=4).prop_flat_map(|(m, cols, rows)| {
        (
            Just(m),
            Just(cols),
            proptest::collection::vec(proptest::collection::vec(0..m, cols), rows),
        )
    })
}

fn mat(m: u64, cols: usize, rows: &[Vec<u64>]) -> ResidueMatrix {
    ResidueMatrix::from_rows(m, cols, rows).unwrap()
}

/// Reduced row echelon form over a prime field, written independently.
fn rref_prime(p: u64, cols: usize, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let inv = |x: u64| (1..p).find(|&y| x * y % p == 1).unwrap();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let s = inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - f * y) % p;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

#[test]
fn single_row_mod_6() {
    // span of [2] is {0, 2, 4}; its least nonzero element generates it
    let h = howell_form(&mat(6, 1, &[vec![2]]));
    let s = span(6, 1, &[vec![2]]);
    let least = s.iter().filter(|v| v[0] != 0).map(|v| v[0]).min().unwrap();
    assert_eq!(h.row_vecs(), vec![vec![least]]);
    assert_eq!(span(6, 1, &h.row_vecs()), s);
}

#[test]
fn kernel_and_affine_examples_mod_6() {
    let a = mat(6, 1, &[vec![2]]);
    let brute: Vec<Vec<u64>> = all_vectors(6, 1)
        .into_iter()
        .filter(|x| mat_vec(6, &a.row_vecs(), x) == vec![0])
        .collect();
    assert_eq!(brute, vec![vec![0], vec![3]]);
    let ker = solve_homogeneous(&a);
    assert_eq!(ker.generators().row_vecs(), vec![vec![3]]);

    let (p, hom) = solve_affine(&a, &[4]).unwrap();
    let p = p.unwrap();
    let mut set: Vec<u64> = hom.elements(10).unwrap().iter().map(|h| (h[0] + p[0]) % 6).collect();
    set.sort();
    let brute: Vec<u64> = (0..6).filter(|x| 2 * x % 6 == 4).collect();
    assert_eq!(set, brute);
    assert_eq!(set, vec![2, 5]);
    assert!(solve_affine(&a, &[1]).unwrap().0.is_none());
}

#[test]
fn module_equality_examples_mod_6() {
    let s = |v: u64| SolutionModule::from_generators(6, 1, vec![vec![v]]);
    assert_eq!(span(6, 1, &[vec![2]]), span(6, 1, &[vec![4]]));
    assert!(s(2).equals(&s(4)).unwrap());
    assert!(!s(2).equals(&s(3)).unwrap());
    assert!(s(2).contains(&[4]).unwrap());
    assert!(!s(2).contains(&[1]).unwrap());
    assert!(s(3).contains(&[0]).unwrap());
    let other = SolutionModule::zero(6, 2);
    assert!(s(2).equals(&other).is_err());
}

#[test]
fn json_round_trip_is_bit_exact() {
    let a = mat(9, 3, &[vec![1, 2, 3], vec![0, 8, 4]]);
    let text = serde_json::to_string(&a).unwrap();
    assert_eq!(text, r#"{"m":9,"rows":2,"cols":3,"data":[1,2,3,0,8,4]}"#);
    let back: ResidueMatrix = serde_json::from_str(&text).unwrap();
    assert_eq!(back, a);
    assert!(serde_json::from_str::<ResidueMatrix>(r#"{"m":9,"rows":1,"cols":2,"data":[1,9]}"#).is_err());
    assert!(serde_json::from_str::<ResidueMatrix>(r#"{"m":9,"rows":1,"cols":2,"data":[1]}"#).is_err());
}

proptest! {
    #[test]
    fn howell_is_idempotent((m, cols, rows) in small_matrix()) {
        let h = howell_form(&mat(m, cols, &rows));
        prop_assert_eq!(howell_form(&h), h);
    }

    #[test]
    fn howell_preserves_span((m, cols, rows) in small_matrix()) {
        let h = howell_form(&mat(m, cols, &rows));
        prop_assert!(h.row_vecs().iter().all(|r| r.iter().any(|&x| x != 0)));
        prop_assert_eq!(span(m, cols, &h.row_vecs()), span(m, cols, &rows));
    }

    #[test]
    fn equal_spans_iff_equal_forms(
        (m, cols, a) in small_matrix(),
        seed_rows in proptest::collection::vec(proptest::collection::vec(0u64..8, 3), 0..4),
    ) {
        let b: Vec<Vec<u64>> = seed_rows.iter().map(|r| r[..cols].iter().map(|x| x % m).collect()).collect();
        let same_span = span(m, cols, &a) == span(m, cols, &b);
        let same_form = howell_form(&mat(m, cols, &a)) == howell_form(&mat(m, cols, &b));
        prop_assert_eq!(same_span, same_form);
    }

    #[test]
    fn prime_modulus_matches_rref(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        cols in 1usize..=4,
        raw in proptest::collection::vec(proptest::collection::vec(0u64..11, 4), 0..5),
    ) {
        let rows: Vec<Vec<u64>> = raw.iter().map(|r| r[..cols].iter().map(|x| x % p).collect()).collect();
        prop_assert_eq!(howell_form(&mat(p, cols, &rows)).row_vecs(), rref_prime(p, cols, &rows));
    }

    #[test]
    fn kernel_matches_enumeration((m, cols, rows) in small_matrix()) {
        let a = mat(m, cols, &rows);
        let ker = solve_homogeneous(&a);
        let brute: BTreeSet<Vec<u64>> = all_vectors(m, cols)
            .into_iter()
            .filter(|x| mat_vec(m, &rows, x).iter().all(|&v| v == 0))
            .collect();
        let got: BTreeSet<Vec<u64>> = ker.elements(1 << 12).unwrap().into_iter().collect();
        prop_assert_eq!(&got, &brute);
        for x in all_vectors(m, cols) {
            prop_assert_eq!(ker.contains(&x).unwrap(), brute.contains(&x));
        }
    }

    #[test]
    fn affine_matches_enumeration((m, cols, rows) in small_matrix(), rhs_seed in proptest::collection::vec(0u64..8, 4)) {
        let a = mat(m, cols, &rows);
        let b: Vec<u64> = rhs_seed[..rows.len()].iter().map(|x| x % m).collect();
        let brute: BTreeSet<Vec<u64>> = all_vectors(m, cols)
            .into_iter()
            .filter(|x| mat_vec(m, &rows, x) == b)
            .collect();
        let (p, hom) = solve_affine(&a, &b).unwrap();
        match p {
            None => prop_assert!(brute.is_empty()),
            Some(p) => {
                let got: BTreeSet<Vec<u64>> = hom
                    .elements(1 << 12)
                    .unwrap()
                    .iter()
                    .map(|h| h.iter().zip(&p).map(|(&x, &y)| (x + y) % m).collect())
                    .collect();
                prop_assert_eq!(got, brute);
            }
        }
    }

    #[test]
    fn random_elements_solve_the_system((m, cols, rows) in small_matrix(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let a = mat(m, cols, &rows);
        let ker = solve_homogeneous(&a);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for g in ker.generator_rows() {
            prop_assert!(a.mul_vec(g).unwrap().iter().all(|&v| v == 0));
        }
        for _ in 0..8 {
            let x = ker.random_element(&mut rng);
            prop_assert!(ker.contains(&x).unwrap());
            prop_assert!(a.mul_vec(&x).unwrap().iter().all(|&v| v == 0));
        }
    }
}
