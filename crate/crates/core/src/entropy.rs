//! Shannon and von Neumann entropies in bits.

use crate::{Error, Result};

/// Probabilities within this distance of `[0, 1]` are clamped instead of
/// rejected.
pub const CLAMP_EPS: f64 = 1e-12;

/// `-p log2 p` with `0 log 0 = 0`.
#[inline]
pub fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * libm::log2(p)
    }
}

/// Binary entropy `H(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-CLAMP_EPS..=1.0 + CLAMP_EPS).contains(&p) || p.is_nan() {
        return Err(Error::ProbabilityDomain(p));
    }
    Ok(h2(p))
}

/// Binary entropy that clamps its argument to `[0, 1]`. Used on hot paths
/// where the argument is a probability up to roundoff.
#[inline]
pub fn h2(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    xlog2x(p) + xlog2x(1.0 - p)
}

/// Von Neumann entropy of a spectrum. Negative eigenvalues from roundoff
/// contribute nothing.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().map(|&l| xlog2x(l)).sum()
}
