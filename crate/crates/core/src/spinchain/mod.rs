//! Exact ground states of the periodic XXZ ring in the `S^z = 0` sector.

mod hamiltonian;
pub mod lanczos;
mod sector;

use alloc::vec::Vec;

pub use hamiltonian::{apply_hamiltonian, XxzRing};
pub use lanczos::{lowest_eigenpair, EigenPair, LanczosOptions, LinearOperator};
pub use sector::{binomial, build_sector, SectorBasis, MAX_SITES};

use crate::{Error, Result};

/// Minimal accepted gap between the two lowest levels of the sector.
pub const MIN_GAP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub seed: u64,
    pub max_matvecs: usize,
    /// Run a deflated second solve and refuse degenerate ground states.
    pub check_gap: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            seed: 0x5eed,
            max_matvecs: 50_000,
            check_gap: true,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions {
            tol,
            ..Self::default()
        }
    }

    /// Krylov basis size. Full reorthogonalization keeps every basis vector,
    /// so large sectors get a short basis and more restarts.
    fn krylov_dim(dim: usize) -> usize {
        if dim <= 100_000 {
            200
        } else {
            40
        }
    }

    fn lanczos(&self, dim: usize, tol: f64, seed: u64) -> LanczosOptions {
        LanczosOptions {
            tol,
            max_matvecs: self.max_matvecs,
            krylov_dim: Self::krylov_dim(dim),
            seed,
            check_every: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub basis: SectorBasis,
    pub delta: f64,
    pub energy: f64,
    /// Real amplitudes over `basis`, unit norm. The first amplitude larger
    /// than `1e-10` in magnitude is positive.
    pub amplitudes: Vec<f64>,
    /// `‖Hψ - Eψ‖₂` from an explicit application.
    pub residual: f64,
    pub matvecs: usize,
    /// Distance to the next level in the sector, when it was computed.
    pub gap: Option<f64>,
}

impl GroundState {
    pub fn n_sites(&self) -> usize {
        self.basis.n_sites()
    }

    /// Rebuilds a ground state from stored amplitudes, recomputing energy and
    /// residual.
    pub fn from_amplitudes(basis: SectorBasis, delta: f64, amplitudes: Vec<f64>) -> Result<Self> {
        let h = apply_hamiltonian(&basis, delta, &amplitudes)?;
        let energy = lanczos::dot(&amplitudes, &h);
        let residual = libm::sqrt(
            h.iter()
                .zip(&amplitudes)
                .map(|(a, b)| (a - energy * b) * (a - energy * b))
                .sum::<f64>(),
        );
        Ok(GroundState {
            basis,
            delta,
            energy,
            amplitudes,
            residual,
            matvecs: 1,
            gap: None,
        })
    }
}

/// Anything that can hand out ground states: the plain solver, or a caching
/// wrapper around it.
pub trait GroundStateSource {
    fn ground_state(&mut self, n_sites: usize, delta: f64) -> Result<GroundState>;
}

/// The plain Lanczos solver.
#[derive(Debug, Clone, Default)]
pub struct Solver {
    pub options: SolverOptions,
}

impl Solver {
    pub fn new(options: SolverOptions) -> Self {
        Solver { options }
    }
}

impl GroundStateSource for Solver {
    fn ground_state(&mut self, n_sites: usize, delta: f64) -> Result<GroundState> {
        ground_state_with(n_sites, delta, &self.options)
    }
}

fn fix_sign(v: &mut [f64]) {
    if let Some(&first) = v.iter().find(|a| a.abs() > 1e-10) {
        if first < 0.0 {
            for a in v.iter_mut() {
                *a = -*a;
            }
        }
    }
}

/// Lowest state of the `S^z = 0` sector with default solver settings and the
/// given tolerance.
pub fn ground_state(n_sites: usize, delta: f64, tol: f64) -> Result<GroundState> {
    ground_state_with(n_sites, delta, &SolverOptions::with_tol(tol))
}

pub fn ground_state_with(n_sites: usize, delta: f64, opts: &SolverOptions) -> Result<GroundState> {
    if !delta.is_finite() {
        return Err(Error::Domain("anisotropy must be finite"));
    }
    if delta <= -1.0 {
        return Err(Error::FerromagneticRegime(delta));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive"));
    }
    let basis = build_sector(n_sites, n_sites / 2)?;
    let h = XxzRing::new(&basis, delta);
    let dim = basis.dim();
    let first = lowest_eigenpair(&h, &opts.lanczos(dim, opts.tol, opts.seed), &[])?;

    let gap = if opts.check_gap {
        // The second level only needs to be resolved well enough to tell it
        // apart from the first.
        let loose = opts.tol.max(1e-9);
        let second = lowest_eigenpair(
            &h,
            &opts.lanczos(dim, loose, opts.seed.wrapping_add(1)),
            &[&first.vector],
        )?;
        let gap = second.value - first.value;
        if gap <= MIN_GAP {
            return Err(Error::DegenerateGroundState(gap));
        }
        Some(gap)
    } else {
        None
    };

    let mut amplitudes = first.vector;
    fix_sign(&mut amplitudes);
    Ok(GroundState {
        basis,
        delta,
        energy: first.value,
        amplitudes,
        residual: first.residual,
        matvecs: first.matvecs,
        gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn four_site_heisenberg_ring() {
        let gs = ground_state(4, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(gs.energy, -2.0, epsilon = 1e-10);
        assert!(gs.residual <= 1e-8);
        assert_abs_diff_eq!(gs.gap.unwrap(), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(lanczos::norm(&gs.amplitudes), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn xx_ring_matches_free_fermions() {
        // Jordan-Wigner: N/2 fermions with dispersion cos k; for N/2 even the
        // Sz = 0 sector has antiperiodic boundary conditions.
        for n in [4usize, 6, 8, 10, 12] {
            let gs = ground_state(n, 0.0, 1e-11).unwrap();
            let nf = n / 2;
            let shift = if nf % 2 == 0 { 0.5 } else { 0.0 };
            let mut levels: Vec<f64> = (0..n)
                .map(|m| libm::cos(2.0 * core::f64::consts::PI * (m as f64 + shift) / n as f64))
                .collect();
            levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let exact: f64 = levels[..nf].iter().sum();
            assert_abs_diff_eq!(gs.energy, exact, epsilon = 1e-9);
        }
    }

    #[test]
    fn ferromagnetic_regime_is_refused() {
        assert_eq!(ground_state(8, -1.0, 1e-10), Err(Error::FerromagneticRegime(-1.0)));
        assert!(matches!(ground_state(8, -2.0, 1e-10), Err(Error::FerromagneticRegime(_))));
        assert_eq!(ground_state(5, 1.0, 1e-10), Err(Error::UnsupportedSize(5)));
    }

    #[test]
    fn energy_expectation_and_residual() {
        let gs = ground_state(10, 0.5, 1e-10).unwrap();
        let h = apply_hamiltonian(&gs.basis, 0.5, &gs.amplitudes).unwrap();
        let e = lanczos::dot(&gs.amplitudes, &h);
        assert_abs_diff_eq!(e, gs.energy, epsilon = 1e-8);
        assert!(gs.residual <= 1e-8 * gs.energy.abs().max(1.0));
    }

    #[test]
    fn spin_flip_symmetry() {
        for delta in [-0.5, 0.3, 1.0, 2.0] {
            let gs = ground_state(10, delta, 1e-10).unwrap();
            let full = (1u32 << 10) - 1;
            for (i, &s) in gs.basis.states().iter().enumerate() {
                let j = gs.basis.index_of(!s & full).unwrap();
                assert_abs_diff_eq!(
                    gs.amplitudes[i].abs(),
                    gs.amplitudes[j].abs(),
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = ground_state(10, 0.7, 1e-10).unwrap();
        let b = ground_state(10, 0.7, 1e-10).unwrap();
        assert_eq!(a.amplitudes, b.amplitudes);
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
    }

    #[test]
    fn from_amplitudes_recovers_energy() {
        let gs = ground_state(8, 1.5, 1e-10).unwrap();
        let back = GroundState::from_amplitudes(gs.basis.clone(), 1.5, gs.amplitudes.clone())
            .unwrap();
        assert_abs_diff_eq!(back.energy, gs.energy, epsilon = 1e-12);
        assert!(back.residual < 1e-8);
    }
}
