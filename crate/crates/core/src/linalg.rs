//! Exact solution of rational linear systems by fraction-free (Bareiss)
//! elimination followed by rational back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Affine solution space `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    /// Free variables set to zero.
    pub particular: Vec<Scalar>,
    /// One vector per free column, with 1 in that column and 0 in the others.
    pub kernel: Vec<Vec<Scalar>>,
    pub free_columns: Vec<usize>,
}

/// Solves `a x = b` exactly; `None` when inconsistent. `a` is row-major with
/// `cols` columns.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar], cols: usize) -> Option<LinearSolution> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    // integer augmented matrix, each row cleared of denominators
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "column count mismatch");
            let entries: Vec<&Scalar> = row.iter().chain(std::iter::once(rhs)).collect();
            let lcm = entries.iter().fold(BigInt::one(), |l, s| l.lcm(&s.denom()));
            entries.iter().map(|s| s.numer() * (&lcm / s.denom())).collect()
        })
        .collect();

    let rows = m.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..=cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }

    let free_columns: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let back_substitute = |rhs_on: bool, free: Option<usize>| -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); cols];
        if let Some(f) = free {
            x[f] = Scalar::one();
        }
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = if rhs_on { Scalar::from_bigints(m[i][cols].clone(), BigInt::one()) } else { Scalar::zero() };
            for j in pc + 1..cols {
                if !m[i][j].is_zero() && !x[j].is_zero() {
                    acc -= &(Scalar::from_bigints(m[i][j].clone(), BigInt::one()) * &x[j]);
                }
            }
            x[pc] = acc / Scalar::from_bigints(m[i][pc].clone(), BigInt::one());
        }
        x
    };
    let particular = back_substitute(true, None);
    let kernel = free_columns.iter().map(|&f| back_substitute(false, Some(f))).collect();
    Some(LinearSolution { particular, kernel, free_columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn apply(a: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
        a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
    }

    #[test]
    fn small_systems() {
        // x + y = 3, x - y = 1
        let a = vec![vec![s(1), s(1)], vec![s(1), s(-1)]];
        let sol = solve(&a, &[s(3), s(1)], 2).unwrap();
        assert_eq!(sol.particular, vec![s(2), s(1)]);
        assert!(sol.kernel.is_empty());

        // rank deficient and consistent
        let a = vec![vec![s(1), s(2)], vec![s(2), s(4)]];
        let sol = solve(&a, &[s(1), s(2)], 2).unwrap();
        assert_eq!(apply(&a, &sol.particular), vec![s(1), s(2)]);
        assert_eq!(sol.kernel.len(), 1);
        assert_eq!(apply(&a, &sol.kernel[0]), vec![s(0), s(0)]);

        assert!(solve(&a, &[s(1), s(3)], 2).is_none());

        // no rows: everything free
        let sol = solve(&[], &[], 3).unwrap();
        assert_eq!(sol.kernel.len(), 3);

        let a = vec![vec![Scalar::ratio(1, 2), Scalar::ratio(1, 3)]];
        let sol = solve(&a, &[Scalar::ratio(5, 6)], 2).unwrap();
        assert_eq!(apply(&a, &sol.particular), vec![Scalar::ratio(5, 6)]);
    }

    proptest! {
        #[test]
        fn solutions_back_substitute(
            a in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 0..6),
            x in proptest::collection::vec(-3i64..=3, 4),
            den in 1i64..5,
        ) {
            let a: Vec<Vec<Scalar>> = a.into_iter().map(|r| r.into_iter().map(|v| Scalar::ratio(v, den)).collect()).collect();
            let x: Vec<Scalar> = x.into_iter().map(s).collect();
            let b = apply(&a, &x);
            let sol = solve(&a, &b, 4).unwrap();
            prop_assert_eq!(apply(&a, &sol.particular), b);
            for k in &sol.kernel {
                prop_assert!(apply(&a, k).iter().all(Scalar::is_zero));
            }
            // x lies in the returned affine space
            let mut rest: Vec<Scalar> = x.iter().zip(&sol.particular).map(|(p, q)| p - q).collect();
            for (k, &f) in sol.kernel.iter().zip(&sol.free_columns) {
                let c = rest[f].clone();
                for (r, v) in rest.iter_mut().zip(k) {
                    *r -= &(&c * v);
                }
            }
            prop_assert!(rest.iter().all(Scalar::is_zero));
        }
    }
}
