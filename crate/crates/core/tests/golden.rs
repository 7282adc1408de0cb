mod common;

use ito_hopf::fixtures::{lk_algebra, lk_r_series, K, L};
use ito_hopf::quantise::{build_context, deformed_coproduct, DeformedCoproduct};
use ito_hopf::tensor::word;
use ito_hopf::{LinearSpace, MultiTensorElt, Scalar, TensorElt};

const N: usize = 5;

fn deform(letter: usize) -> DeformedCoproduct {
    let ctx = build_context(&lk_algebra(), &lk_r_series(N)).unwrap();
    deformed_coproduct(&ctx, &TensorElt::letter(letter)).unwrap()
}

fn two(a: &[usize], b: &[usize], c: i64) -> MultiTensorElt {
    MultiTensorElt::two_leg(&TensorElt::basis_word(word(a)), &TensorElt::basis_word(word(b)))
        .scale(&Scalar::from_int(c))
}

#[test]
fn every_component_matches_matrix_representation() {
    for (letter, d) in [(L, deform(L)), (K, deform(K))] {
        // ranks are bounded by order + 1 for a single conjugated letter
        for m in 0..=N + 1 {
            for n in 0..=N + 1 - m {
                if m + n == 0 {
                    assert!(d.component(0, 0).is_zero());
                    continue;
                }
                assert_eq!(
                    common::table_of(&d, m, n),
                    common::lk_component(letter as u16, m, n, N),
                    "letter {letter} component ({m},{n})"
                );
            }
        }
        let support = d.components();
        assert!(support.keys().all(|&(m, n)| m + n <= N + 1));
    }
}

#[test]
fn primitive_l_and_low_components_of_k() {
    let dl = deform(L);
    assert_eq!(dl.series.coeff(0), &two(&[L], &[], 1).add(&two(&[], &[L], 1)));
    assert!((1..=N).all(|k| dl.series.coeff(k).is_zero()));
    let dk = deform(K);
    assert_eq!(dk.component(1, 1).coeff(1), &two(&[L], &[K], 1).add(&two(&[K], &[L], -1)));
    assert_eq!(dk.component(2, 1).coeff(2), &two(&[L, K], &[L], 1).add(&two(&[K, L], &[L], -1)));
    assert_eq!(dk.component(3, 1).coeff(3), &two(&[L, L, K], &[L], -1).add(&two(&[L, K, L], &[L], 1)));
    // (1, n) carries the opposite sign to (m, 1) at even order
    assert_eq!(dk.component(1, 2).coeff(2), &two(&[L], &[L, K], -1).add(&two(&[L], &[K, L], 1)));
}

#[test]
fn off_axis_components_leave_symmetric_tensors() {
    let dk = deform(K);
    for (m, n) in [(2, 1), (3, 1), (1, 2), (1, 3)] {
        let c = dk.component(m, n).coeff(m.max(n)).clone();
        assert!(!c.is_zero());
        assert_ne!(c.symmetrize_legs(), c, "({m},{n})");
    }
}

#[test]
fn projection_cross_check_covers_low_ranks() {
    let dk = deform(K);
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 3)] {
        assert!(dk.cross_checked.contains(&(m, n)), "({m},{n}) not cross-checked");
    }
}
