//! Seeded generators for randomized trials. Every generator draws from a
//! caller-owned `ChaCha8Rng`, so a seed fixes the whole trial sequence.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraDef, AlgebraElt, LegTensor};
use crate::hseries::HSeries;
use crate::linear::LinearSpace;
use crate::scalar::Scalar;
use crate::tensor::{TensorElt, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| <= 3`, `1 <= q <= 3`; zero with probability about 1/7.
pub fn small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.random_range(-3..=3), rng.random_range(1..=3))
}

fn nonzero_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = small_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn algebra_elt(rng: &mut ChaCha8Rng, dim: usize) -> AlgebraElt {
    AlgebraElt((0..dim).map(|_| small_scalar(rng)).collect())
}

/// Random element of `L (x) L`.
pub fn leg2(rng: &mut ChaCha8Rng, dim: usize) -> LegTensor {
    let mut out = LegTensor::zero(2);
    for i in 0..dim {
        for j in 0..dim {
            let c = small_scalar(rng);
            out.add_assign(&LegTensor::two_leg(&AlgebraElt::basis(dim, i), &AlgebraElt::basis(dim, j)).scale(&c));
        }
    }
    out
}

/// Random `r[h]` with every coefficient `r_1..r_order` dense.
pub fn generic_r(rng: &mut ChaCha8Rng, dim: usize, order: usize) -> HSeries<LegTensor> {
    let mut r = HSeries::zero(order, LegTensor::zero(2));
    for k in 1..=order {
        r.set_coeff(k, leg2(rng, dim));
    }
    r
}

/// `f(h) x` with `f` a random polynomial without constant term.
pub fn scaled(rng: &mut ChaCha8Rng, x: &LegTensor, order: usize) -> HSeries<LegTensor> {
    let mut r = HSeries::zero(order, LegTensor::zero(2));
    r.set_coeff(1, x.scale(&nonzero_scalar(rng)));
    for k in 2..=order {
        r.set_coeff(k, x.scale(&small_scalar(rng)));
    }
    r
}

/// Draws from a mixture of families so that Yang-Baxter trials see both
/// solutions and failures at varying orders:
/// * `f(h) s` for a known solution `s` (holds when `s` solves the toy equation),
/// * `f(h) a (x) a`, which always holds since `a` generates a commutative subalgebra,
/// * either of those plus a generic perturbation from a random order on,
/// * a generic series.
pub fn trial_r(rng: &mut ChaCha8Rng, alg: &AlgebraDef, known: Option<&LegTensor>, order: usize) -> HSeries<LegTensor> {
    let dim = alg.dim();
    let base = match known {
        Some(s) if rng.random_bool(0.5) => scaled(rng, s, order),
        _ => {
            let a = algebra_elt(rng, dim);
            scaled(rng, &LegTensor::two_leg(&a, &a), order)
        }
    };
    match rng.random_range(0..4) {
        0 | 1 => base,
        2 => {
            let from = rng.random_range(1..=order);
            let mut r = base;
            for k in from..=order {
                let c = r.coeff(k).add(&leg2(rng, dim));
                r.set_coeff(k, c);
            }
            r
        }
        _ => generic_r(rng, dim, order),
    }
}

/// Representatives of two-dimensional associative algebras.
fn seed_algebras() -> Vec<Vec<(usize, usize, usize, i64)>> {
    vec![
        // LK = L, K^2 = K
        vec![(0, 1, 0, 1), (1, 1, 1, 1)],
        // opposite of the above
        vec![(1, 0, 0, 1), (1, 1, 1, 1)],
        // two orthogonal idempotents
        vec![(0, 0, 0, 1), (1, 1, 1, 1)],
        // e1^2 = e2
        vec![(0, 0, 1, 1)],
        // unital: e1 = 1, e2^2 = 0
        vec![(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)],
        // unital: e1 = 1, e2^2 = e2
        vec![(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 1, 1)],
        // e1^2 = e1 only
        vec![(0, 0, 0, 1)],
    ]
}

fn invert2(p: &[[Scalar; 2]; 2]) -> Option<[[Scalar; 2]; 2]> {
    let det = &p[0][0] * &p[1][1] - &p[0][1] * &p[1][0];
    let inv = det.recip()?;
    Some([
        [&p[1][1] * &inv, -(&p[0][1] * &inv)],
        [-(&p[1][0] * &inv), &p[0][0] * &inv],
    ])
}

/// A random two-dimensional associative algebra: a fixed representative in a
/// random rational basis. Associativity holds by construction and is
/// re-validated.
pub fn algebra2(rng: &mut ChaCha8Rng) -> AlgebraDef {
    let seeds = seed_algebras();
    let table = seeds.choose(rng).expect("nonempty");
    // new basis f_a = sum_i p[i][a] e_i
    let (p, q) = loop {
        let p = [[small_scalar(rng), small_scalar(rng)], [small_scalar(rng), small_scalar(rng)]];
        if let Some(q) = invert2(&p) {
            break (p, q);
        }
    };
    // f_a f_b = sum_{i,j} p[i][a] p[j][b] e_i e_j = sum_k c_k e_k = sum_k c_k sum_c q[c][k] f_c
    let mut consts = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            let mut e = [Scalar::zero(), Scalar::zero()];
            for &(i, j, k, c) in table {
                e[k] += &(&p[i][a] * &p[j][b] * Scalar::from_int(c));
            }
            for (c, row) in q.iter().enumerate() {
                let v = &row[0] * &e[0] + &row[1] * &e[1];
                if !v.is_zero() {
                    consts.push((a, b, c, v));
                }
            }
        }
    }
    AlgebraDef::with_dim(2, consts).and_then(AlgebraDef::validated).expect("basis change preserves associativity")
}

/// Random element of `T(L)` with `terms` words of rank at most `max_rank`.
pub fn tensor(rng: &mut ChaCha8Rng, dim: usize, max_rank: usize, terms: usize) -> TensorElt {
    TensorElt::from_terms((0..terms).map(|_| {
        let len = rng.random_range(0..=max_rank);
        let w: Word = (0..len).map(|_| rng.random_range(0..dim) as u16).collect();
        (w, small_scalar(rng))
    }))
}
