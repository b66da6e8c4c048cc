//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use framekit::numkernel::{CMatrix, C64};
use framekit::sequences::{FiniteSequence, HVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(case: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// `rows x cols` matrix of rank at most `rank`.
pub fn low_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, rank: usize) -> CMatrix {
    let x = random_matrix(rng, rows, rank);
    let y = random_matrix(rng, rank, cols);
    &x * &y
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn sequence_from(m: &CMatrix) -> FiniteSequence {
    let elements = (0..m.cols())
        .map(|j| HVector::new(m.column(j)).unwrap())
        .collect();
    FiniteSequence::new(m.rows(), elements).unwrap()
}

/// A synthesis matrix with `n <= 8` rows and `m <= 16` columns. About a
/// third of the cases are rank deficient, some repeat a column.
pub fn random_synthesis(case: u64) -> CMatrix {
    let mut r = rng(case, 0x5EED);
    let n = r.random_range(1..=8);
    let m = r.random_range(1..=16);
    match r.random_range(0..3) {
        0 => {
            let k = r.random_range(1..=n.min(m));
            low_rank(&mut r, n, m, k)
        }
        1 if m >= 2 => {
            let mut d = random_matrix(&mut r, n, m);
            let (src, dst) = (r.random_range(0..m), r.random_range(0..m));
            let t = gaussian(&mut r);
            for row in 0..n {
                let v = d.get(row, src) * t;
                d.set(row, dst, v);
            }
            d
        }
        _ => random_matrix(&mut r, n, m),
    }
}

/// A complete sequence (rank `n`): `m >= n` columns, redundant for about
/// half the cases.
pub fn random_complete(case: u64) -> CMatrix {
    let mut r = rng(case, 0xC0DE);
    let n = r.random_range(1..=8);
    let m = if r.random_bool(0.5) {
        n
    } else {
        r.random_range(n..=16)
    };
    random_matrix(&mut r, n, m)
}

pub fn random_rect(case: u64, max: usize) -> CMatrix {
    let mut r = rng(case, 0xAB5);
    let rows = r.random_range(1..=max);
    let cols = r.random_range(1..=max);
    if r.random_bool(0.3) {
        let k = r.random_range(1..=rows.min(cols));
        low_rank(&mut r, rows, cols, k)
    } else {
        random_matrix(&mut r, rows, cols)
    }
}

pub fn frob(m: &CMatrix) -> f64 {
    m.frobenius_norm()
}
