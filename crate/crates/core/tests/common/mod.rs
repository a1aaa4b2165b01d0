#![allow(dead_code)]

use lnnreg::{Matrix64, Vector64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, k: usize, n: usize) -> Matrix64 {
    Matrix64::new(k, n, (0..k * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

pub fn uniform_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector64 {
    Vector64::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

/// K×N matrix of rank at most `r`.
pub fn low_rank(rng: &mut ChaCha8Rng, k: usize, n: usize, r: usize) -> Matrix64 {
    uniform_matrix(rng, k, r).matmul(&uniform_matrix(rng, r, n)).unwrap()
}

/// Independent inverse oracle: Gauss–Jordan elimination on `[A | I]`.
pub fn gauss_jordan_inverse(a: &Matrix64) -> Matrix64 {
    let n = a.n_rows();
    let mut w: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| w[x][c].abs().partial_cmp(&w[y][c].abs()).unwrap())
            .unwrap();
        w.swap(c, p);
        let piv = w[c][c];
        for x in w[c].iter_mut() {
            *x /= piv;
        }
        for r in 0..n {
            if r != c {
                let fct = w[r][c];
                let pivot_row = w[c].clone();
                for (x, y) in w[r].iter_mut().zip(pivot_row) {
                    *x -= fct * y;
                }
            }
        }
    }
    let rows: Vec<Vec<f64>> = w.into_iter().map(|r| r[n..].to_vec()).collect();
    Matrix64::from_rows(&rows).unwrap()
}

pub fn residual(a: &Matrix64, q: &[f64], f: &[f64]) -> f64 {
    let aq = a.matvec(q).unwrap();
    aq.iter().zip(f).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Perturbed instability system: `A_h = [[1,0],[0,eps]]`.
pub fn perturbed_operator(eps: f64) -> Matrix64 {
    Matrix64::from_f64_rows(&[[1.0, 0.0], [0.0, eps]]).unwrap()
}
