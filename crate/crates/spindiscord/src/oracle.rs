//! Dense linear-algebra references for testing: explicit Hamiltonian
//! matrices, full diagonalization, partial traces and measured conditional
//! entropies.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};
use num_complex::Complex64;

use spindiscord_core::xstate::XState;
use spindiscord_core::{Error, Result};

/// Largest sector the dense oracle diagonalizes.
pub const MAX_DENSE_DIM: usize = 1000;
/// Largest ring for the full `2^N` Hilbert space.
pub const MAX_FULL_SITES: usize = 10;

fn check_ring(n_sites: usize) -> Result<()> {
    if n_sites < 4 || !n_sites.is_multiple_of(2) || n_sites > 26 {
        return Err(Error::UnsupportedSize(n_sites));
    }
    Ok(())
}

/// XXZ ring matrix in the half-filled sector, built by applying the bond
/// operators to every configuration. Rows follow ascending bit patterns with
/// a set bit for an up spin on site `bit + 1`.
pub fn dense_sector_hamiltonian(n_sites: usize, delta: f64) -> Result<DMatrix<f64>> {
    check_ring(n_sites)?;
    let states: Vec<u32> = (0u32..1 << n_sites)
        .filter(|s| s.count_ones() as usize == n_sites / 2)
        .collect();
    if states.len() > MAX_DENSE_DIM {
        return Err(Error::TooLarge(states.len()));
    }
    let index: HashMap<u32, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut h = DMatrix::zeros(states.len(), states.len());
    for (col, &s) in states.iter().enumerate() {
        for i in 0..n_sites {
            let j = (i + 1) % n_sites;
            let up_i = s >> i & 1 == 1;
            let up_j = s >> j & 1 == 1;
            let szsz = if up_i == up_j { 0.25 } else { -0.25 };
            h[(col, col)] += delta * szsz;
            if up_i != up_j {
                // (s+ s- + s- s+)/2 swaps the pair
                let row = index[&(s ^ (1 << i) ^ (1 << j))];
                h[(row, col)] += 0.5;
            }
        }
    }
    Ok(h)
}

/// All eigenvalues of the half-filled sector, ascending.
pub fn dense_spectrum_oracle(n_sites: usize, delta: f64) -> Result<Vec<f64>> {
    let h = dense_sector_hamiltonian(n_sites, delta)?;
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

fn site_operator(op: &Matrix2<f64>, site: usize, n_sites: usize) -> DMatrix<f64> {
    let id = DMatrix::<f64>::identity(2, 2);
    let op = DMatrix::from_column_slice(2, 2, op.as_slice());
    let mut m = DMatrix::<f64>::identity(1, 1);
    for k in 0..n_sites {
        m = m.kronecker(if k == site { &op } else { &id });
    }
    m
}

/// XXZ ring on the full tensor-product space. Single-site basis is
/// `(|↑⟩, |↓⟩)` and site 1 is the leftmost factor.
pub fn full_hamiltonian(n_sites: usize, delta: f64) -> Result<DMatrix<f64>> {
    check_ring(n_sites)?;
    if n_sites > MAX_FULL_SITES {
        return Err(Error::TooLarge(1 << n_sites));
    }
    let sz = Matrix2::new(0.5, 0.0, 0.0, -0.5);
    let sp = Matrix2::new(0.0, 1.0, 0.0, 0.0);
    let sm = sp.transpose();
    let dim = 1usize << n_sites;
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..n_sites {
        let j = (i + 1) % n_sites;
        let zi = site_operator(&sz, i, n_sites);
        let zj = site_operator(&sz, j, n_sites);
        let pi = site_operator(&sp, i, n_sites);
        let mi = site_operator(&sm, i, n_sites);
        let pj = site_operator(&sp, j, n_sites);
        let mj = site_operator(&sm, j, n_sites);
        h += (&zi * &zj) * delta + (&pi * &mj + &mi * &pj) * 0.5;
    }
    Ok(h)
}

/// Lowest eigenpair of [`full_hamiltonian`].
pub fn full_ground_state(n_sites: usize, delta: f64) -> Result<(f64, DVector<f64>)> {
    let eig = full_hamiltonian(n_sites, delta)?.symmetric_eigen();
    let k = eig.eigenvalues.imin();
    Ok((eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned()))
}

/// Two-site density matrix of sites `i`, `j` (1-based) from a full-space
/// vector, in the basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` of `(i, j)`.
pub fn partial_trace_pair(psi: &DVector<f64>, n_sites: usize, i: usize, j: usize) -> Matrix4<f64> {
    let local = |idx: usize, site: usize| (idx >> (n_sites - site)) & 1;
    let mut rho = Matrix4::zeros();
    for a in 0..psi.len() {
        for b in 0..psi.len() {
            // environments must agree
            let mask = !((1usize << (n_sites - i)) | (1usize << (n_sites - j)));
            if a & mask != b & mask {
                continue;
            }
            let ra = 2 * local(a, i) + local(a, j);
            let rb = 2 * local(b, i) + local(b, j);
            rho[(ra, rb)] += psi[a] * psi[b];
        }
    }
    rho
}

fn to_dense(s: &XState) -> Matrix4<Complex64> {
    let m = s.to_matrix();
    Matrix4::from_fn(|r, c| m[r][c])
}

/// Eigenvalues of the X state from a dense Hermitian solver, ascending.
pub fn dense_xstate_eigenvalues(s: &XState) -> [f64; 4] {
    let mut ev: Vec<f64> = to_dense(s).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[1], ev[2], ev[3]]
}

fn entropy_bits(eigenvalues: impl Iterator<Item = f64>) -> f64 {
    eigenvalues
        .filter(|&l| l > 1e-300)
        .map(|l| -l * l.log2())
        .sum()
}

pub fn dense_von_neumann_entropy(s: &XState) -> f64 {
    entropy_bits(dense_xstate_eigenvalues(s).into_iter())
}

/// Conditional entropy of A after projecting B onto
/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` and its orthogonal complement,
/// computed from explicit post-measurement states.
pub fn dense_conditional_entropy(s: &XState, theta: f64, phi: f64) -> f64 {
    let rho = to_dense(s);
    let a = Complex64::new((0.5 * theta).cos(), 0.0);
    let b = Complex64::from_polar((0.5 * theta).sin(), phi);
    let outcomes = [[a, b], [-b.conj(), a.conj()]];
    let mut total = 0.0;
    for ket in outcomes {
        // ⟨k|_B ρ |k⟩_B as a 2×2 matrix on A
        let mut cond = nalgebra::Matrix2::<Complex64>::zeros();
        for ra in 0..2 {
            for ca in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for rb in 0..2 {
                    for cb in 0..2 {
                        acc += ket[rb].conj() * rho[(2 * ra + rb, 2 * ca + cb)] * ket[cb];
                    }
                }
                cond[(ra, ca)] = acc;
            }
        }
        let p = (cond[(0, 0)] + cond[(1, 1)]).re;
        if p <= 1e-15 {
            continue;
        }
        let ev = (cond / Complex64::new(p, 0.0)).symmetric_eigenvalues();
        total += p * entropy_bits(ev.iter().copied());
    }
    total
}
