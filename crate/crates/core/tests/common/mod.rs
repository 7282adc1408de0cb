//! Independent oracle for the L, K algebra: `L' = span{1, L, K}` embeds
//! faithfully in 2x2 integer matrices (`L = E12`, `K = E22`), so products of
//! leg-embedded factors become Kronecker products of small matrices.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ito_hopf::quantise::DeformedCoproduct;

type M2 = [[i64; 2]; 2];

const ID: M2 = [[1, 0], [0, 1]];
const LM: M2 = [[0, 1], [0, 0]];
const KM: M2 = [[0, 0], [0, 1]];

/// Letter of the basis: 0 is `L`, 1 is `K`.
pub fn letter_matrix(l: u16) -> M2 {
    match l {
        0 => LM,
        1 => KM,
        _ => panic!("two-letter alphabet"),
    }
}

/// Truncated series of `d x d` integer matrices, row-major.
#[derive(Clone, Debug, PartialEq)]
struct MatSeries {
    d: usize,
    c: Vec<Vec<i64>>,
}

impl MatSeries {
    fn identity(d: usize, order: usize) -> Self {
        let mut c = vec![vec![0; d * d]; order + 1];
        for i in 0..d {
            c[0][i * d + i] = 1;
        }
        Self { d, c }
    }

    fn mul(&self, other: &Self) -> Self {
        let (d, order) = (self.d, self.c.len() - 1);
        let mut c = vec![vec![0i64; d * d]; order + 1];
        for i in 0..=order {
            for j in 0..=order - i {
                let (a, b) = (&self.c[i], &other.c[j]);
                if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
                    continue;
                }
                let out = &mut c[i + j];
                for r in 0..d {
                    for k in 0..d {
                        let x = a[r * d + k];
                        if x == 0 {
                            continue;
                        }
                        for s in 0..d {
                            out[r * d + s] += x * b[k * d + s];
                        }
                    }
                }
            }
        }
        Self { d, c }
    }
}

/// Kronecker product of one 2x2 matrix per leg.
fn kron(factors: &[M2]) -> Vec<i64> {
    let t = factors.len();
    let d = 1usize << t;
    let mut out = vec![0; d * d];
    for row in 0..d {
        for col in 0..d {
            let mut v = 1;
            for (leg, m) in factors.iter().enumerate() {
                let shift = t - 1 - leg;
                v *= m[(row >> shift) & 1][(col >> shift) & 1];
                if v == 0 {
                    break;
                }
            }
            out[row * d + col] = v;
        }
    }
    out
}

/// `1 + sign h r1^{a,b}` in `t` legs (0-based positions), `r1 = L(x)K - K(x)L`.
fn rho(a: usize, b: usize, t: usize, sign: i64, order: usize) -> MatSeries {
    let place = |x: M2, y: M2| {
        let mut f = vec![ID; t];
        f[a] = x;
        f[b] = y;
        kron(&f)
    };
    let mut s = MatSeries::identity(1 << t, order);
    let (lk, kl) = (place(LM, KM), place(KM, LM));
    s.c[1] = lk.iter().zip(&kl).map(|(p, q)| sign * (p - q)).collect();
    s
}

/// Coefficient of the pure tensor `letters` in a matrix of the image of
/// `L'^{(x)t}`: per leg, `L` is read off entry (0,1) and `K` as
/// entry (1,1) minus entry (0,0).
fn read_coefficient(m: &[i64], letters: &[u16]) -> i64 {
    let t = letters.len();
    let d = 1usize << t;
    let mut total = 0;
    for choice in 0..(1usize << t) {
        let (mut row, mut col, mut w) = (0usize, 0usize, 1i64);
        for (leg, &l) in letters.iter().enumerate() {
            let second = (choice >> leg) & 1 == 1;
            let (r, c, s) = match (l, second) {
                (0, false) => (0, 1, 1),
                (0, true) => {
                    w = 0;
                    break;
                }
                (1, false) => (1, 1, 1),
                _ => (0, 0, -1),
            };
            row = row * 2 + r;
            col = col * 2 + c;
            w *= s;
        }
        if w != 0 {
            total += w * m[row * d + col];
        }
    }
    total
}

/// `(h-order, letters of both blocks concatenated) -> coefficient`.
pub type Table = BTreeMap<(usize, Vec<u16>), i64>;

/// Joint-rank `(m, n)` component of `Δ[h](letter)` for `r = h r1`, from the
/// grid conjugation `G (x^1 + ... + x^{m+n}) G'` with
/// `G = ∏ (1 + h r1)^{j, m+n+1-k}` (rows outer) and `G'` the reversed
/// product of the inverse factors `(1 - h r1)`.
pub fn lk_component(letter: u16, m: usize, n: usize, order: usize) -> Table {
    let t = m + n;
    let d = 1usize << t;
    let pairs: Vec<(usize, usize)> = (1..=m).flat_map(|j| (1..=n).map(move |k| (j - 1, t - k))).collect();
    let mut g = MatSeries::identity(d, order);
    for &(a, b) in &pairs {
        g = g.mul(&rho(a, b, t, 1, order));
    }
    let mut gi = MatSeries::identity(d, order);
    for &(a, b) in pairs.iter().rev() {
        gi = gi.mul(&rho(a, b, t, -1, order));
    }
    let mut x = MatSeries::identity(d, order);
    x.c[0] = vec![0; d * d];
    for leg in 0..t {
        let mut f = vec![ID; t];
        f[leg] = letter_matrix(letter);
        for (o, v) in x.c[0].iter_mut().zip(kron(&f)) {
            *o += v;
        }
    }
    let p = g.mul(&x).mul(&gi);
    let mut out = Table::new();
    for (k, mat) in p.c.iter().enumerate() {
        for code in 0..(1usize << t) {
            let letters: Vec<u16> = (0..t).map(|i| ((code >> (t - 1 - i)) & 1) as u16).collect();
            let v = read_coefficient(mat, &letters);
            if v != 0 {
                out.insert((k, letters), v);
            }
        }
    }
    out
}

/// The same table read off a computed deformed coproduct.
pub fn table_of(d: &DeformedCoproduct, m: usize, n: usize) -> Table {
    let s = d.component(m, n);
    let mut out = Table::new();
    for k in 0..=s.order() {
        for (key, c) in s.coeff(k).terms() {
            assert!(c.is_integer(), "non-integer coefficient {c}");
            let letters: Vec<u16> = key.iter().flat_map(|w| w.iter().copied()).collect();
            let v: i64 = c.to_string().parse().expect("integer");
            out.insert((k, letters), v);
        }
    }
    out
}
