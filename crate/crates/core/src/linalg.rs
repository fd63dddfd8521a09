//! Small dense linear algebra for the Schmidt analysis: deterministic
//! block subspace iteration for the leading singular values of a complex
//! matrix, backed by a cyclic Jacobi eigensolver for the projected
//! Hermitian Gram matrix.
//!
//! The bipartite amplitude matrices have rapidly decaying Schmidt
//! spectra, so a truncated method with a cheap matvec is preferred over a
//! full dense SVD; rank growth is driven by the norm-capture criterion at
//! the call site.

use num_complex::Complex64 as C64;

/// Row-major complex matrix view.
#[derive(Debug, Clone, Copy)]
pub struct MatrixView<'a> {
    data: &'a [C64],
    rows: usize,
    cols: usize,
}

impl<'a> MatrixView<'a> {
    pub fn new(data: &'a [C64], rows: usize, cols: usize) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { data, rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// y = M x.
    fn matvec(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = C64::ZERO;
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            *yi = acc;
        }
    }

    /// y = M† x.
    fn adjoint_matvec(&self, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.rows);
        debug_assert_eq!(y.len(), self.cols);
        y.fill(C64::ZERO);
        for (i, xi) in x.iter().enumerate() {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (a, yj) in row.iter().zip(y.iter_mut()) {
                *yj += a.conj() * xi;
            }
        }
    }

    /// Squared Frobenius norm = total Schmidt weight.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// SplitMix64: deterministic start block for the subspace iteration.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_interval(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Modified Gram-Schmidt (two passes) on the columns; columns that
/// collapse numerically are replaced by zero and skipped by the caller
/// through their vanishing singular value.
fn orthonormalize(cols: &mut [Vec<C64>]) {
    let n = cols.first().map_or(0, Vec::len);
    let scale = (n as f64).sqrt();
    for j in 0..cols.len() {
        for _pass in 0..2 {
            for i in 0..j {
                let mut proj = C64::ZERO;
                for k in 0..n {
                    proj += cols[i][k].conj() * cols[j][k];
                }
                for k in 0..n {
                    let d = proj * cols[i][k];
                    cols[j][k] -= d;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-150 * scale {
            let inv = 1.0 / norm;
            for z in &mut cols[j] {
                *z *= inv;
            }
        } else {
            cols[j].fill(C64::ZERO);
        }
    }
}

/// Eigenvalues of a Hermitian matrix (dense, row-major) by cyclic Jacobi
/// rotations, returned in descending order.
pub fn hermitian_eigenvalues(a: &mut [C64], n: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-15 * frob.max(f64::MIN_POSITIVE);
    for _sweep in 0..40 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[p * n + q];
                let babs = b.norm();
                if babs <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * babs);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = (b / babs) * (t * c);
                // Column update: (A J) with J embedding [[c, s], [-s̄, c]].
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * s.conj();
                    a[k * n + q] = akp * s + akq * c;
                }
                // Row update: (J† A).
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * s;
                    a[q * n + k] = apk * s.conj() + aqk * c;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eig
}

/// Leading `rank` squared singular values of `m` (descending), by block
/// subspace iteration on M†M with a deterministic start block.
pub fn top_squared_singular_values(m: &MatrixView, rank: usize, iterations: usize) -> Vec<f64> {
    let rank = rank.min(m.rows).min(m.cols);
    if rank == 0 {
        return Vec::new();
    }
    // Oversampled block for convergence of the trailing wanted values.
    let block = (rank + 8).min(m.rows).min(m.cols);
    let mut seed = 0x5EED_5EED_5EED_5EEDu64;
    let mut x: Vec<Vec<C64>> = (0..block)
        .map(|_| {
            (0..m.cols)
                .map(|_| C64::new(unit_interval(&mut seed) - 0.5, unit_interval(&mut seed) - 0.5))
                .collect()
        })
        .collect();
    orthonormalize(&mut x);

    let mut y = vec![vec![C64::ZERO; m.rows]; block];
    for _ in 0..iterations.max(1) {
        for j in 0..block {
            m.matvec(&x[j], &mut y[j]);
        }
        for j in 0..block {
            m.adjoint_matvec(&y[j], &mut x[j]);
        }
        orthonormalize(&mut x);
    }
    for j in 0..block {
        m.matvec(&x[j], &mut y[j]);
    }
    // Projected Gram matrix G = (MX)†(MX); its eigenvalues approximate
    // the squared singular values.
    let mut g = vec![C64::ZERO; block * block];
    for i in 0..block {
        for j in i..block {
            let mut acc = C64::ZERO;
            for k in 0..m.rows {
                acc += y[i][k].conj() * y[j][k];
            }
            g[i * block + j] = acc;
            g[j * block + i] = acc.conj();
        }
    }
    let mut eig = hermitian_eigenvalues(&mut g, block);
    eig.truncate(rank);
    eig.iter_mut().for_each(|l| *l = l.max(0.0));
    eig
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_known_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let mut a = vec![
            C64::new(2.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, -1.0),
            C64::new(2.0, 0.0),
        ];
        let eig = hermitian_eigenvalues(&mut a, 2);
        assert!((eig[0] - 3.0).abs() < 1e-13);
        assert!((eig[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn subspace_iteration_recovers_constructed_spectrum() {
        // Build M = Σ σ_j u_j v_j† with known singular values on
        // orthonormalized deterministic vectors.
        let (rows, cols) = (60, 45);
        let sigmas = [1.0, 0.4, 0.15, 3e-3, 8e-5, 1e-7];
        let mut seed = 42u64;
        let mut us: Vec<Vec<C64>> = (0..sigmas.len())
            .map(|_| {
                (0..rows)
                    .map(|_| {
                        C64::new(unit_interval(&mut seed) - 0.5, unit_interval(&mut seed) - 0.5)
                    })
                    .collect()
            })
            .collect();
        let mut vs: Vec<Vec<C64>> = (0..sigmas.len())
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        C64::new(unit_interval(&mut seed) - 0.5, unit_interval(&mut seed) - 0.5)
                    })
                    .collect()
            })
            .collect();
        orthonormalize(&mut us);
        orthonormalize(&mut vs);
        let mut m = vec![C64::ZERO; rows * cols];
        for (s, (u, v)) in sigmas.iter().zip(us.iter().zip(&vs)) {
            for i in 0..rows {
                for j in 0..cols {
                    m[i * cols + j] += *s * u[i] * v[j].conj();
                }
            }
        }
        let view = MatrixView::new(&m, rows, cols);
        let got = top_squared_singular_values(&view, sigmas.len(), 8);
        for (g, s) in got.iter().zip(&sigmas) {
            let expect = s * s;
            assert!(
                (g - expect).abs() < 1e-12 * sigmas[0] * sigmas[0] + 1e-9 * expect,
                "got {g:e}, expected {expect:e}"
            );
        }
        // Frobenius mass matches the constructed spectrum.
        let total: f64 = sigmas.iter().map(|s| s * s).sum();
        assert!((view.frobenius_sq() - total).abs() < 1e-12);
    }

    #[test]
    fn rank_capped_by_dimensions() {
        let m = vec![C64::new(1.0, 0.0); 6];
        let view = MatrixView::new(&m, 2, 3);
        let vals = top_squared_singular_values(&view, 10, 6);
        assert_eq!(vals.len(), 2);
        // Rank-one matrix of ones: σ₁² = 6, σ₂ = 0.
        assert!((vals[0] - 6.0).abs() < 1e-12);
        assert!(vals[1].abs() < 1e-12);
    }
}
