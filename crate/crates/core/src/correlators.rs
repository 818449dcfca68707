//! Two-site reduced density matrices and correlation functions of ring
//! ground states, plus the symmetric-state closed forms for the discord.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::entropy::{entropy_of_spectrum, h2};
use crate::spinchain::{GroundState, GroundStateSource};
use crate::xstate::{self, ChosenTheta, XState};
use crate::{Error, Result};

/// `|Γᴰ|` below this makes `k = Γᴼ/Γᴰ` undefined.
pub const RATIO_EPS: f64 = 1e-14;
/// `k` closer than this to 2 is treated as the isotropic point.
pub const ISOTROPIC_K_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCorrelations {
    pub r: usize,
    /// `⟨s^z_i s^z_j⟩`
    pub gamma_d: f64,
    /// `⟨s^+_i s^-_j⟩`
    pub gamma_o: Complex64,
    /// `⟨s^+_i s^+_j⟩`
    pub y_corr: Complex64,
    pub mz_i: f64,
    pub mz_j: f64,
}

impl PairCorrelations {
    /// X state assembled from the correlators:
    /// `u, v = 1/4 + Γᴰ ± (m_i + m_j)/2`, `w1, w2 = 1/4 - Γᴰ ± (m_i - m_j)/2`,
    /// `x = Γᴼ`, `y = ⟨s^+ s^+⟩`.
    pub fn to_xstate(&self) -> XState {
        let sum = 0.5 * (self.mz_i + self.mz_j);
        let diff = 0.5 * (self.mz_i - self.mz_j);
        XState {
            u: 0.25 + self.gamma_d + sum,
            v: 0.25 + self.gamma_d - sum,
            w1: 0.25 - self.gamma_d + diff,
            w2: 0.25 - self.gamma_d - diff,
            x: self.gamma_o,
            y: self.y_corr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KRatio {
    pub r: usize,
    pub k: f64,
}

fn check_sites(gs: &GroundState, i: usize, j: usize) -> Result<(u32, u32)> {
    let n = gs.n_sites();
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidSites { i, j, n_sites: n });
    }
    Ok((1 << (i - 1), 1 << (j - 1)))
}

/// Ring distance between sites `i` and `j`, folded into `[0, N/2]`.
pub fn ring_distance(n_sites: usize, i: usize, j: usize) -> usize {
    let d = i.abs_diff(j) % n_sites;
    d.min(n_sites - d)
}

/// Reduced density matrix of sites `i` and `j` (1-based), tracing out the
/// rest of the ring. Site `i` is qubit A, site `j` is qubit B; up is `|0⟩`.
pub fn two_site_rdm(gs: &GroundState, i: usize, j: usize) -> Result<XState> {
    let (bi, bj) = check_sites(gs, i, j)?;
    let basis = &gs.basis;
    let psi = &gs.amplitudes;
    let mut rho = XState {
        u: 0.0,
        v: 0.0,
        w1: 0.0,
        w2: 0.0,
        x: Complex64::new(0.0, 0.0),
        y: Complex64::new(0.0, 0.0),
    };
    for (idx, &s) in basis.states().iter().enumerate() {
        let a = psi[idx];
        let p = a * a;
        match (s & bi != 0, s & bj != 0) {
            (true, true) => rho.u += p,
            (true, false) => rho.w1 += p,
            (false, true) => {
                rho.w2 += p;
                // ⟨↓↑, rest|ρ|↑↓, rest⟩
                if let Some(k) = basis.index_of(s ^ bi ^ bj) {
                    rho.x += a * psi[k];
                }
            }
            (false, false) => {
                rho.v += p;
                // ⟨↓↓, rest|ρ|↑↑, rest⟩, absent inside one magnetization sector
                if let Some(k) = basis.index_of(s | bi | bj) {
                    rho.y += a * psi[k];
                }
            }
        }
    }
    Ok(rho)
}

/// Correlation functions of sites `i` and `j`, evaluated as expectation
/// values of the spin operators.
pub fn pair_correlations(gs: &GroundState, i: usize, j: usize) -> Result<PairCorrelations> {
    let (bi, bj) = check_sites(gs, i, j)?;
    let basis = &gs.basis;
    let psi = &gs.amplitudes;
    let sz = |s: u32, b: u32| if s & b != 0 { 0.5 } else { -0.5 };
    let mut gamma_d = 0.0;
    let mut mz_i = 0.0;
    let mut mz_j = 0.0;
    let mut gamma_o = 0.0;
    let mut y_corr = 0.0;
    for (idx, &s) in basis.states().iter().enumerate() {
        let a = psi[idx];
        let p = a * a;
        let (zi, zj) = (sz(s, bi), sz(s, bj));
        gamma_d += p * zi * zj;
        mz_i += p * zi;
        mz_j += p * zj;
        // s^+_i s^-_j |…↓_i…↑_j…⟩ = |…↑_i…↓_j…⟩
        if s & bi == 0 && s & bj != 0 {
            if let Some(k) = basis.index_of(s ^ bi ^ bj) {
                gamma_o += psi[k] * a;
            }
        }
        // s^+_i s^+_j |…↓_i…↓_j…⟩ = |…↑_i…↑_j…⟩
        if s & bi == 0 && s & bj == 0 {
            if let Some(k) = basis.index_of(s | bi | bj) {
                y_corr += psi[k] * a;
            }
        }
    }
    Ok(PairCorrelations {
        r: ring_distance(gs.n_sites(), i, j),
        gamma_d,
        gamma_o: Complex64::new(gamma_o, 0.0),
        y_corr: Complex64::new(y_corr, 0.0),
        mz_i,
        mz_j,
    })
}

/// `k = Γᴼ/Γᴰ` for the pair `(1, 1 + r)`.
pub fn k_ratio(gs: &GroundState, r: usize) -> Result<KRatio> {
    let c = pair_correlations(gs, 1, 1 + r)?;
    if c.gamma_d.abs() < RATIO_EPS {
        return Err(Error::UndefinedRatio(c.gamma_d.abs()));
    }
    Ok(KRatio {
        r,
        k: c.gamma_o.re / c.gamma_d,
    })
}

/// Spectrum `1/4 + Γ` (twice), `1/4 + (k-1)Γ`, `1/4 - (k+1)Γ` of the
/// symmetric pair state, checked for positivity.
fn symmetric_spectrum(gamma_d: f64, k: f64) -> Result<[f64; 4]> {
    let ev = [
        0.25 + gamma_d,
        0.25 + gamma_d,
        0.25 + (k - 1.0) * gamma_d,
        0.25 - (k + 1.0) * gamma_d,
    ];
    if ev.iter().any(|&l| l < -xstate::POSITIVITY_TOL) || !gamma_d.is_finite() || !k.is_finite() {
        return Err(Error::PositivityViolated { gamma_d, k });
    }
    Ok(ev)
}

/// Discord of a translation-invariant, time-reversal-symmetric pair with
/// `Γᴼ = kΓᴰ`:
/// `1 - S(ρ_AB) + H(1/2 + 2Γ) + θ(|k| - 2)[H(1/2 + kΓ) - H(1/2 + 2Γ)]`.
pub fn symmetric_discord(gamma_d: f64, k: f64) -> Result<f64> {
    let ev = symmetric_spectrum(gamma_d, k)?;
    let s_joint = entropy_of_spectrum(&ev);
    let c_z = h2(0.5 + 2.0 * gamma_d);
    let c_x = h2(0.5 + k * gamma_d);
    let step = if k.abs() > 2.0 { 1.0 } else { 0.0 };
    Ok(1.0 - s_joint + c_z + step * (c_x - c_z))
}

/// Discord of an isotropic (`k = 2`) symmetric pair:
/// `1 + 3(1/4 + Γ) log2(1/4 + Γ) + (1/4 - 3Γ) log2(1/4 - 3Γ) + H(1/2 + 2Γ)`.
pub fn isotropic_discord(gamma_d: f64) -> Result<f64> {
    symmetric_spectrum(gamma_d, 2.0)?;
    let xlogx = |p: f64| if p <= 0.0 { 0.0 } else { p * libm::log2(p) };
    Ok(1.0 + 3.0 * xlogx(0.25 + gamma_d) + xlogx(0.25 - 3.0 * gamma_d) + h2(0.5 + 2.0 * gamma_d))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCheck {
    pub exact: f64,
    /// `2(k² + 4) Γ² / ln 2`
    pub leading: f64,
}

/// Exact symmetric-state discord next to its quadratic small-`Γ` form.
pub fn asymptotic_discord_check(gamma_d: f64, k: f64) -> Result<AsymptoticCheck> {
    let exact = if (k - 2.0).abs() < ISOTROPIC_K_EPS {
        isotropic_discord(gamma_d)?
    } else {
        symmetric_discord(gamma_d, k)?
    };
    let leading = 2.0 * (k * k + 4.0) * gamma_d * gamma_d / core::f64::consts::LN_2;
    Ok(AsymptoticCheck { exact, leading })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub r: usize,
    pub discord: f64,
    pub chosen_theta: ChosenTheta,
    pub gamma_d: f64,
    pub gamma_o: f64,
    /// `None` where `Γᴰ` vanishes.
    pub k: Option<f64>,
    /// Symmetric-state closed form at the measured correlators: the
    /// isotropic formula at `Δ = 1`, the anisotropic one elsewhere.
    pub closed_form: Option<f64>,
}

/// Discord of the pair `(1, 1 + r)` for a single separation.
pub fn discord_at(gs: &GroundState, r: usize) -> Result<ProfilePoint> {
    let rho = two_site_rdm(gs, 1, 1 + r)?;
    let d = xstate::discord(&rho)?;
    let c = pair_correlations(gs, 1, 1 + r)?;
    let k = (c.gamma_d.abs() >= RATIO_EPS).then(|| c.gamma_o.re / c.gamma_d);
    let closed_form = if gs.delta == 1.0 {
        isotropic_discord(c.gamma_d).ok()
    } else {
        k.and_then(|k| symmetric_discord(c.gamma_d, k).ok())
    };
    Ok(ProfilePoint {
        r: ring_distance(gs.n_sites(), 1, 1 + r),
        discord: d.discord,
        chosen_theta: d.chosen_theta,
        gamma_d: c.gamma_d,
        gamma_o: c.gamma_o.re,
        k,
        closed_form,
    })
}

/// Discord of `(1, 1 + r)` for `r = 1..=N/2`.
pub fn discord_profile_vs_r(gs: &GroundState) -> Result<Vec<ProfilePoint>> {
    (1..=gs.n_sites() / 2).map(|r| discord_at(gs, r)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaRow {
    pub delta: f64,
    pub r: usize,
    pub discord: f64,
    pub k: Option<f64>,
    /// `None` in the ferromagnetic regime, where no solve happens.
    pub chosen_theta: Option<ChosenTheta>,
}

/// Discord against anisotropy for each separation in `rs`. Entries with
/// `Δ ≤ -1` are filled with `D = 0` without a solve.
pub fn discord_profile_vs_delta(
    source: &mut dyn GroundStateSource,
    n_sites: usize,
    deltas: &[f64],
    rs: &[usize],
) -> Result<Vec<DeltaRow>> {
    let mut rows = Vec::with_capacity(deltas.len() * rs.len());
    for &delta in deltas {
        rows.extend(delta_rows(source, n_sites, delta, rs)?);
    }
    Ok(rows)
}

/// Rows of [`discord_profile_vs_delta`] for one anisotropy.
pub fn delta_rows(
    source: &mut dyn GroundStateSource,
    n_sites: usize,
    delta: f64,
    rs: &[usize],
) -> Result<Vec<DeltaRow>> {
    if delta <= -1.0 {
        return Ok(rs
            .iter()
            .map(|&r| DeltaRow {
                delta,
                r,
                discord: 0.0,
                k: None,
                chosen_theta: None,
            })
            .collect());
    }
    let gs = source.ground_state(n_sites, delta)?;
    rs.iter()
        .map(|&r| {
            let p = discord_at(&gs, r)?;
            Ok(DeltaRow {
                delta,
                r,
                discord: p.discord,
                k: p.k,
                chosen_theta: Some(p.chosen_theta),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinchain::ground_state;
    use approx::assert_abs_diff_eq;

    #[test]
    fn four_site_singlet_pair() {
        let gs = ground_state(4, 1.0, 1e-11).unwrap();
        let rho = two_site_rdm(&gs, 1, 2).unwrap();
        assert_abs_diff_eq!(rho.u, 1.0 / 12.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rho.v, 1.0 / 12.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rho.w1, 5.0 / 12.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rho.w2, 5.0 / 12.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rho.x.re, -1.0 / 3.0, epsilon = 1e-10);
        assert_eq!(rho.y, Complex64::new(0.0, 0.0));

        let c1 = pair_correlations(&gs, 1, 2).unwrap();
        assert_abs_diff_eq!(c1.gamma_d, -1.0 / 6.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c1.gamma_o.re, -1.0 / 3.0, epsilon = 1e-10);
        let c2 = pair_correlations(&gs, 1, 3).unwrap();
        assert_abs_diff_eq!(c2.gamma_d, 1.0 / 12.0, epsilon = 1e-10);
        assert_eq!(c2.r, 2);

        let p = discord_at(&gs, 1).unwrap();
        assert_abs_diff_eq!(p.discord, 0.442_503_672_008_932_3, epsilon = 1e-9);
    }

    #[test]
    fn reconstruction_identity() {
        for delta in [-0.6, 0.4, 1.0, 1.7] {
            let gs = ground_state(10, delta, 1e-10).unwrap();
            for (i, j) in [(1, 2), (3, 7), (10, 1), (5, 4)] {
                let rho = two_site_rdm(&gs, i, j).unwrap();
                let c = pair_correlations(&gs, i, j).unwrap();
                let rec = c.to_xstate();
                assert_abs_diff_eq!(rho.u, rec.u, epsilon = 1e-10);
                assert_abs_diff_eq!(rho.v, rec.v, epsilon = 1e-10);
                assert_abs_diff_eq!(rho.w1, rec.w1, epsilon = 1e-10);
                assert_abs_diff_eq!(rho.w2, rec.w2, epsilon = 1e-10);
                assert_abs_diff_eq!(rho.x.re, rec.x.re, epsilon = 1e-10);
                assert_eq!(rho.y, rec.y);
                assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
                assert!(c.mz_i.abs() < 1e-10 && c.mz_j.abs() < 1e-10);
                assert!(c.gamma_d.abs() <= 0.25);
            }
        }
    }

    #[test]
    fn invalid_sites() {
        let gs = ground_state(4, 1.0, 1e-10).unwrap();
        assert!(matches!(two_site_rdm(&gs, 2, 2), Err(Error::InvalidSites { .. })));
        assert!(pair_correlations(&gs, 0, 2).is_err());
        assert!(pair_correlations(&gs, 1, 5).is_err());
    }

    #[test]
    fn k_ratio_isotropic_and_undefined() {
        let gs = ground_state(8, 1.0, 1e-11).unwrap();
        for r in 1..=4 {
            assert_abs_diff_eq!(k_ratio(&gs, r).unwrap().k, 2.0, epsilon = 1e-9);
        }
        // Γᴰ vanishes at even separations of the XX ring
        let gs = ground_state(8, 0.0, 1e-11).unwrap();
        assert!(matches!(k_ratio(&gs, 2), Err(Error::UndefinedRatio(_))));
    }

    #[test]
    fn closed_forms() {
        assert_abs_diff_eq!(isotropic_discord(-0.25).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            isotropic_discord(-1.0 / 6.0).unwrap(),
            symmetric_discord(-1.0 / 6.0, 2.0).unwrap(),
            epsilon = 1e-13
        );
        assert!(matches!(
            symmetric_discord(0.2, 2.0),
            Err(Error::PositivityViolated { .. })
        ));
        let a = asymptotic_discord_check(-0.25, 2.0).unwrap();
        assert_abs_diff_eq!(a.exact, 1.0, epsilon = 1e-12);
        let a = asymptotic_discord_check(1e-3, 4.0).unwrap();
        assert_abs_diff_eq!(a.leading, 2.0 * 20.0 * 1e-6 / core::f64::consts::LN_2, epsilon = 1e-18);
        assert!((a.exact / a.leading - 1.0).abs() < 0.01);
    }

    #[test]
    fn closed_form_agrees_with_pipeline() {
        for delta in [0.5, 1.0, 1.5] {
            let gs = ground_state(10, delta, 1e-11).unwrap();
            for p in discord_profile_vs_r(&gs).unwrap() {
                if let Some(cf) = p.closed_form {
                    assert_abs_diff_eq!(p.discord, cf, epsilon = 1e-9);
                }
            }
        }
    }

    #[test]
    fn ferromagnetic_rows_are_zero() {
        let mut solver = crate::spinchain::Solver::default();
        let rows = discord_profile_vs_delta(&mut solver, 8, &[-1.5, -1.0], &[1, 2]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.discord == 0.0 && r.chosen_theta.is_none()));
    }
}
