//! Distribution of the conditional entropy `C_{θ,φ}` over measurement
//! directions on the Bloch sphere of qubit B, with its moments.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlators::two_site_rdm;
use crate::spinchain::GroundStateSource;
use crate::xstate::{conditional_entropy, MeasurementBasis, XState};
use crate::{Error, Result};

pub const DEFAULT_BIN_WIDTH: f64 = 0.005;
/// Fewest measurement directions a scheme may use.
pub const MIN_SAMPLES: usize = 1000;
/// Minimal distance between two reported peaks, in bins.
pub const PEAK_SEPARATION: i64 = 5;

/// How measurement directions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `n` directions uniform on the sphere, reproducible from `seed`.
    UniformSphere { n: usize, seed: u64 },
    /// Gauss-Legendre nodes in `cos θ` times equispaced `φ`; the measure is
    /// `sin θ dθ dφ / 4π`.
    GaussGrid { n_theta: usize, n_phi: usize },
    /// Midpoint rule with equal weight per `dθ dφ` cell; the measure is
    /// `dθ dφ / 2π²`, flat in the angles rather than on the sphere.
    FlatAngles { n_theta: usize, n_phi: usize },
}

impl Default for Scheme {
    fn default() -> Self {
        Scheme::GaussGrid {
            n_theta: 256,
            n_phi: 256,
        }
    }
}

impl Scheme {
    pub fn n_samples(&self) -> usize {
        match *self {
            Scheme::UniformSphere { n, .. } => n,
            Scheme::GaussGrid { n_theta, n_phi } | Scheme::FlatAngles { n_theta, n_phi } => {
                n_theta.saturating_mul(n_phi)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::UniformSphere { .. } => "uniform_sphere",
            Scheme::GaussGrid { .. } => "gauss_grid",
            Scheme::FlatAngles { .. } => "flat_angles",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Scheme::UniformSphere { n, .. } if n < MIN_SAMPLES => {
                Err(Error::InvalidScheme("at least 1000 samples are required"))
            }
            Scheme::GaussGrid { n_theta, n_phi } | Scheme::FlatAngles { n_theta, n_phi }
                if n_theta == 0 || n_phi == 0 =>
            {
                Err(Error::InvalidScheme("grid dimensions must be positive"))
            }
            s if s.n_samples() < MIN_SAMPLES => {
                Err(Error::InvalidScheme("at least 1000 grid points are required"))
            }
            _ => Ok(()),
        }
    }

    /// Measurement directions with their weights, which sum to one.
    pub fn points(&self) -> Result<Vec<(MeasurementBasis, f64)>> {
        self.validate()?;
        let mut out = Vec::with_capacity(self.n_samples());
        match *self {
            Scheme::UniformSphere { n, seed } => {
                let w = 1.0 / n as f64;
                for i in 0..n {
                    let (theta, phi) = sphere_point(seed, i as u64);
                    out.push((MeasurementBasis::new(theta, phi), w));
                }
            }
            Scheme::GaussGrid { n_theta, n_phi } => {
                let (nodes, weights) = gauss_legendre(n_theta);
                for (&c, &wc) in nodes.iter().zip(&weights) {
                    let theta = libm::acos(c);
                    for j in 0..n_phi {
                        let phi = 2.0 * PI * j as f64 / n_phi as f64;
                        out.push((MeasurementBasis::new(theta, phi), 0.5 * wc / n_phi as f64));
                    }
                }
            }
            Scheme::FlatAngles { n_theta, n_phi } => {
                let w = 1.0 / (n_theta * n_phi) as f64;
                for i in 0..n_theta {
                    let theta = PI * (i as f64 + 0.5) / n_theta as f64;
                    for j in 0..n_phi {
                        let phi = 2.0 * PI * j as f64 / n_phi as f64;
                        out.push((MeasurementBasis::new(theta, phi), w));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Direction number `index` of a seeded uniform sphere sample. Every point has
/// its own stream position, so points can be generated in any order.
fn sphere_point(seed: u64, index: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // two f64 draws consume four 32-bit words
    rng.set_word_pos(u128::from(index) * 4);
    let c: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi: f64 = 2.0 * PI * rng.random::<f64>();
    (libm::acos(c.clamp(-1.0, 1.0)), phi)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Binned `P(C)` with moments and extrema of the underlying samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyHistogram {
    pub bin_width: f64,
    /// Bin `b` covers `[b·w, (b+1)·w)`.
    pub bins: BTreeMap<i64, f64>,
    pub mean: f64,
    pub variance: f64,
    pub min_c: f64,
    pub max_c: f64,
    pub n_samples: usize,
    pub scheme: Scheme,
}

impl EntropyHistogram {
    pub fn total_mass(&self) -> f64 {
        self.bins.values().sum()
    }

    /// `(bin_left, bin_right, mass)` for every occupied bin.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.bins.iter().map(move |(&b, &m)| {
            (b as f64 * self.bin_width, (b + 1) as f64 * self.bin_width, m)
        })
    }

    /// Mean and variance of the binned distribution, with bin centers as
    /// values.
    pub fn binned_moments(&self) -> (f64, f64) {
        let center = |b: i64| (b as f64 + 0.5) * self.bin_width;
        let mean: f64 = self.bins.iter().map(|(&b, &m)| m * center(b)).sum();
        let var = self
            .bins
            .iter()
            .map(|(&b, &m)| m * (center(b) - mean) * (center(b) - mean))
            .sum();
        (mean, var)
    }

    fn mass(&self, b: i64) -> f64 {
        self.bins.get(&b).copied().unwrap_or(0.0)
    }

    /// Bins holding the largest mass within `separation` bins on either
    /// side, empty bins counting as zero. Of equal neighbours the lower bin
    /// wins.
    pub fn peaks_with_separation(&self, separation: i64) -> Vec<(i64, f64)> {
        self.bins
            .iter()
            .filter(|&(&b, &m)| {
                m > 0.0
                    && (1..=separation).all(|d| m > self.mass(b - d) && m >= self.mass(b + d))
            })
            .map(|(&b, &m)| (b, m))
            .collect()
    }

    /// Peaks at the default separation of five bins.
    pub fn peaks(&self) -> Vec<(i64, f64)> {
        self.peaks_with_separation(PEAK_SEPARATION)
    }
}

/// Histogram of weighted values.
pub fn histogram_from_samples(
    values: &[(f64, f64)],
    bin_width: f64,
    scheme: Scheme,
) -> Result<EntropyHistogram> {
    if !(bin_width > 0.0) {
        return Err(Error::Domain("bin width must be positive"));
    }
    if values.is_empty() {
        return Err(Error::InvalidScheme("no samples"));
    }
    let total: f64 = values.iter().map(|&(_, w)| w).sum();
    let mean = values.iter().map(|&(c, w)| c * w).sum::<f64>() / total;
    let variance = values
        .iter()
        .map(|&(c, w)| w * (c - mean) * (c - mean))
        .sum::<f64>()
        / total;
    let mut bins = BTreeMap::new();
    let mut min_c = f64::INFINITY;
    let mut max_c = f64::NEG_INFINITY;
    for &(c, w) in values {
        min_c = min_c.min(c);
        max_c = max_c.max(c);
        *bins.entry(libm::floor(c / bin_width) as i64).or_insert(0.0) += w / total;
    }
    Ok(EntropyHistogram {
        bin_width,
        bins,
        mean,
        variance,
        min_c,
        max_c,
        n_samples: values.len(),
        scheme,
    })
}

/// `P(C)` for the state `s` with the default bin width.
pub fn sample_distribution(s: &XState, scheme: Scheme) -> Result<EntropyHistogram> {
    sample_distribution_binned(s, scheme, DEFAULT_BIN_WIDTH)
}

pub fn sample_distribution_binned(
    s: &XState,
    scheme: Scheme,
    bin_width: f64,
) -> Result<EntropyHistogram> {
    s.validate()?;
    let values: Vec<(f64, f64)> = scheme
        .points()?
        .into_iter()
        .map(|(m, w)| (conditional_entropy(s, m), w))
        .collect();
    histogram_from_samples(&values, bin_width, scheme)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentsRow {
    pub delta: f64,
    pub r: usize,
    pub mean: f64,
    pub variance: f64,
    pub min_c: f64,
    pub max_c: f64,
}

/// Moments of `P(C)` for the pairs `(1, 1 + r)` over an anisotropy grid.
/// Points with `Δ ≤ -1` have no unique ground state and are skipped.
pub fn moments_vs_delta(
    source: &mut dyn GroundStateSource,
    n_sites: usize,
    deltas: &[f64],
    rs: &[usize],
    scheme: Scheme,
) -> Result<Vec<MomentsRow>> {
    scheme.validate()?;
    let mut rows = Vec::new();
    for &delta in deltas.iter().filter(|&&d| d > -1.0) {
        rows.extend(moments_at(source, n_sites, delta, rs, scheme)?);
    }
    Ok(rows)
}

/// Rows of [`moments_vs_delta`] for one anisotropy.
pub fn moments_at(
    source: &mut dyn GroundStateSource,
    n_sites: usize,
    delta: f64,
    rs: &[usize],
    scheme: Scheme,
) -> Result<Vec<MomentsRow>> {
    let gs = source.ground_state(n_sites, delta)?;
    rs.iter()
        .map(|&r| {
            let h = sample_distribution(&two_site_rdm(&gs, 1, 1 + r)?, scheme)?;
            Ok(MomentsRow {
                delta,
                r,
                mean: h.mean,
                variance: h.variance,
                min_c: h.min_c,
                max_c: h.max_c,
            })
        })
        .collect()
}
