//! Restarted Lanczos for the lowest eigenpair of a real symmetric operator.
//!
//! Each cycle builds a Krylov basis of at most `krylov_dim` vectors with full
//! (twice-applied) Gram-Schmidt reorthogonalization, then restarts from the
//! current Ritz vector. The Ritz value therefore never increases between
//! checks. The lowest eigenpair of the tridiagonal projection comes from
//! Sturm bisection plus inverse iteration.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosOptions {
    /// Convergence: Ritz-value shift below `tol` and residual below `10 tol`.
    pub tol: f64,
    pub max_matvecs: usize,
    pub krylov_dim: usize,
    pub seed: u64,
    /// Tridiagonal projection is re-solved every `check_every` steps.
    pub check_every: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-10,
            max_matvecs: 20_000,
            krylov_dim: 200,
            seed: 0x5eed,
            check_every: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖A v - value · v‖₂`, computed explicitly.
    pub residual: f64,
    pub matvecs: usize,
    /// Lowest Ritz value at every convergence check, in order.
    pub history: Vec<f64>,
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale(v: &mut [f64], s: f64) {
    for x in v.iter_mut() {
        *x *= s;
    }
}

/// Removes the components of `w` along every vector in `basis`, twice.
fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>], deflate: &[&[f64]]) {
    for _ in 0..2 {
        for q in basis.iter().map(|v| v.as_slice()).chain(deflate.iter().copied()) {
            let c = dot(q, w);
            axpy(-c, q, w);
        }
    }
}

/// Lowest eigenpair of `op` in the orthogonal complement of `deflate`
/// (vectors there must be orthonormal).
pub fn lowest_eigenpair(
    op: &dyn LinearOperator,
    opts: &LanczosOptions,
    deflate: &[&[f64]],
) -> Result<EigenPair> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::Domain("empty operator"));
    }
    for d in deflate {
        if d.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d.len(),
            });
        }
    }
    let free = n - deflate.len().min(n);
    if free == 0 {
        return Err(Error::Domain("deflation removes the whole space"));
    }
    let m_cap = opts.krylov_dim.max(2).min(free);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    orthogonalize(&mut start, &[], deflate);
    let s = norm(&start);
    if s == 0.0 {
        return Err(Error::Domain("start vector vanished after deflation"));
    }
    scale(&mut start, 1.0 / s);

    let mut matvecs = 0usize;
    let mut history = Vec::new();
    let mut prev_theta = f64::INFINITY;
    let mut best_residual = f64::INFINITY;
    let mut w = vec![0.0; n];

    loop {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_cap);
        let mut alpha: Vec<f64> = Vec::with_capacity(m_cap);
        let mut beta: Vec<f64> = Vec::with_capacity(m_cap);
        basis.push(start);
        let mut ritz: Option<(f64, Vec<f64>)> = None;

        for j in 0..m_cap {
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&basis[j], &w);
            alpha.push(a);
            axpy(-a, &basis[j], &mut w);
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut w);
            }
            orthogonalize(&mut w, &basis, deflate);
            let b = norm(&w);

            let scale_t = alpha.iter().map(|x| x.abs()).fold(1.0, f64::max);
            let breakdown = b <= 1e-13 * scale_t;
            let last = j + 1 == m_cap || breakdown || matvecs >= opts.max_matvecs;
            if (j + 1) % opts.check_every.max(1) == 0 || last {
                let (theta, s) = tridiagonal_lowest(&alpha, &beta);
                history.push(theta);
                let estimate = b * s.last().map(|x| x.abs()).unwrap_or(0.0);
                let shift = (theta - prev_theta).abs();
                prev_theta = theta;
                let converged = shift < opts.tol && estimate < 10.0 * opts.tol;
                if converged || last {
                    ritz = Some((theta, s));
                    break;
                }
            }
            beta.push(b);
            let mut next = core::mem::take(&mut w);
            scale(&mut next, 1.0 / b);
            w = vec![0.0; n];
            basis.push(next);
        }

        let (_, s) = ritz.expect("cycle ends with a Ritz pair");
        let mut y = vec![0.0; n];
        for (q, &c) in basis.iter().zip(&s) {
            axpy(c, q, &mut y);
        }
        let ny = norm(&y);
        scale(&mut y, 1.0 / ny);

        // Rayleigh quotient and residual from an explicit application.
        op.apply(&y, &mut w);
        matvecs += 1;
        let value = dot(&y, &w);
        axpy(-value, &y, &mut w);
        let residual = norm(&w);
        best_residual = best_residual.min(residual);

        if residual < 10.0 * opts.tol {
            return Ok(EigenPair {
                value,
                vector: y,
                residual,
                matvecs,
                history,
            });
        }
        if matvecs >= opts.max_matvecs {
            return Err(Error::NoConvergence {
                matvecs,
                residual: best_residual,
            });
        }
        orthogonalize(&mut y, &[], deflate);
        let ny = norm(&y);
        scale(&mut y, 1.0 / ny);
        start = y;
    }
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`
/// (Sturm count from the LDLᵀ pivots).
fn count_below(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for (i, &a) in alpha.iter().enumerate() {
        let off = if i == 0 { 0.0 } else { beta[i - 1] * beta[i - 1] };
        d = a - x - if i == 0 { 0.0 } else { off / d };
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + x.abs() + 1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `(T - shift I) x = rhs` by Gaussian elimination with partial
/// pivoting on the tridiagonal band.
fn solve_shifted(alpha: &[f64], beta: &[f64], shift: f64, rhs: &mut [f64]) {
    let n = alpha.len();
    // band rows: sub, diag, super, super2
    let mut dl: Vec<f64> = beta.to_vec();
    let mut d: Vec<f64> = alpha.iter().map(|a| a - shift).collect();
    let mut du: Vec<f64> = beta.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let tiny = f64::MIN_POSITIVE * 1e10;
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            let piv = if d[i] == 0.0 { tiny } else { d[i] };
            d[i] = piv;
            let f = dl[i] / piv;
            dl[i] = f;
            d[i + 1] -= f * du[i];
            rhs[i + 1] -= f * rhs[i];
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - f * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            rhs.swap(i, i + 1);
            rhs[i + 1] -= f * rhs[i];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    for i in (0..n).rev() {
        let mut v = rhs[i];
        if i + 1 < n {
            v -= du[i] * rhs[i + 1];
        }
        if i + 2 < n {
            v -= du2[i] * rhs[i + 2];
        }
        rhs[i] = v / d[i];
    }
}

/// Lowest eigenvalue and unit eigenvector of the symmetric tridiagonal
/// matrix with diagonal `alpha` and off-diagonal `beta`.
pub(crate) fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let n = alpha.len();
    debug_assert!(beta.len() + 1 >= n);
    let beta = &beta[..n - 1];
    if n == 1 {
        return (alpha[0], vec![1.0]);
    }
    // Gershgorin interval
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(alpha, beta, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 4.0 * f64::EPSILON * (lo.abs() + hi.abs()).max(span * f64::EPSILON) {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);

    let mut x = vec![1.0; n];
    let shift = theta - 16.0 * f64::EPSILON * (theta.abs() + span);
    for _ in 0..3 {
        solve_shifted(alpha, beta, shift, &mut x);
        let nx = norm(&x);
        scale(&mut x, 1.0 / nx);
    }
    // sign convention: first sizeable component positive
    if let Some(&first) = x.iter().find(|v| v.abs() > 1e-12) {
        if first < 0.0 {
            scale(&mut x, -1.0);
        }
    }
    (theta, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Diag(Vec<f64>);

    impl LinearOperator for Diag {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.0) {
                *yi = d * xi;
            }
        }
    }

    /// 1D Laplacian with Dirichlet ends: eigenvalues 2 - 2cos(kπ/(n+1)).
    struct Laplacian(usize);

    impl LinearOperator for Laplacian {
        fn dim(&self) -> usize {
            self.0
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            let n = self.0;
            for i in 0..n {
                let mut v = 2.0 * x[i];
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < n {
                    v -= x[i + 1];
                }
                y[i] = v;
            }
        }
    }

    #[test]
    fn tridiagonal_lowest_matches_laplacian_spectrum() {
        for n in [1usize, 2, 3, 10, 57] {
            let alpha = vec![2.0; n];
            let beta = vec![-1.0; n.saturating_sub(1)];
            let (theta, v) = tridiagonal_lowest(&alpha, &beta);
            let exact = 2.0 - 2.0 * libm::cos(core::f64::consts::PI / (n as f64 + 1.0));
            assert!((theta - exact).abs() < 1e-13, "n={n}: {theta} vs {exact}");
            let mut tv = vec![0.0; n];
            Laplacian(n).apply(&v, &mut tv);
            let r: f64 = tv.iter().zip(&v).map(|(a, b)| (a - theta * b).powi(2)).sum();
            assert!(r.sqrt() < 1e-12);
        }
    }

    #[test]
    fn tridiagonal_with_zero_coupling() {
        let (theta, v) = tridiagonal_lowest(&[3.0, -1.0, 2.0], &[0.0, 0.0]);
        assert!((theta + 1.0).abs() < 1e-14);
        assert!((v[1].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lowest_of_diagonal_operator() {
        let op = Diag((0..50).map(|i| i as f64 * 0.5 - 3.0).collect());
        let r = lowest_eigenpair(&op, &LanczosOptions::default(), &[]).unwrap();
        assert!((r.value + 3.0).abs() < 1e-12);
        assert!(r.residual < 1e-9);
        assert!((r.vector[0].abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn restarted_and_deflated_laplacian() {
        let n = 400;
        let opts = LanczosOptions {
            krylov_dim: 30,
            ..LanczosOptions::default()
        };
        let op = Laplacian(n);
        let first = lowest_eigenpair(&op, &opts, &[]).unwrap();
        let e = |k: f64| 2.0 - 2.0 * libm::cos(k * core::f64::consts::PI / (n as f64 + 1.0));
        assert!((first.value - e(1.0)).abs() < 1e-10);
        assert!(first.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));

        let second = lowest_eigenpair(&op, &opts, &[&first.vector]).unwrap();
        assert!((second.value - e(2.0)).abs() < 1e-10);
        assert!(dot(&first.vector, &second.vector).abs() < 1e-10);
    }

    #[test]
    fn reports_non_convergence() {
        let opts = LanczosOptions {
            krylov_dim: 3,
            max_matvecs: 8,
            ..LanczosOptions::default()
        };
        let err = lowest_eigenpair(&Laplacian(500), &opts, &[]).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }
}
