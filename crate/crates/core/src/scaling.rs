//! Phenomenological critical-scaling model: correlation functions and
//! normalized discord as functions of the reduced temperature `t = T/T_c`.

use alloc::vec::Vec;

use crate::correlators::isotropic_discord;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalForm {
    /// `ξ = ξ₀ |1 - t|^{-ν}`
    PowerLaw,
    /// `ξ = exp(π / √(t - 1))`, defined for `t > 1`
    KosterlitzThouless,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    /// Specific-heat exponent.
    pub alpha: f64,
    /// Correlation-length exponent.
    pub nu: f64,
    /// Correlation-length amplitude in lattice units.
    pub xi0: f64,
    /// Separation of the far pair in lattice units.
    pub r: f64,
    pub form: CriticalForm,
    /// Nearest-neighbour `Γᴰ` at `t = 1`.
    pub gamma_c: f64,
    /// Nearest-neighbour `Γᴰ` at `t = 0`.
    pub gamma_0: f64,
}

impl Default for ScalingParams {
    fn default() -> Self {
        ScalingParams {
            alpha: 0.1,
            nu: 0.6,
            xi0: 4.0,
            r: 20.0,
            form: CriticalForm::PowerLaw,
            gamma_c: -0.25,
            gamma_0: -1.0 / 6.0,
        }
    }
}

impl ScalingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain("alpha must lie in (0, 1)"));
        }
        if !(self.nu > 0.0) {
            return Err(Error::Domain("nu must be positive"));
        }
        if !(self.xi0 > 0.0) {
            return Err(Error::Domain("xi0 must be positive"));
        }
        if !(self.r >= 1.0) {
            return Err(Error::Domain("r must be at least 1"));
        }
        Ok(())
    }
}

/// Correlation length. The power law returns `+∞` at `t = 1`.
pub fn correlation_length(p: &ScalingParams, t: f64) -> Result<f64> {
    p.validate()?;
    if !t.is_finite() {
        return Err(Error::Domain("t must be finite"));
    }
    match p.form {
        CriticalForm::PowerLaw => {
            if t == 1.0 {
                Ok(f64::INFINITY)
            } else {
                Ok(p.xi0 * libm::pow((1.0 - t).abs(), -p.nu))
            }
        }
        CriticalForm::KosterlitzThouless => {
            if t <= 1.0 {
                Err(Error::Domain("the KT correlation length needs t > 1"))
            } else {
                Ok(libm::exp(core::f64::consts::PI / libm::sqrt(t - 1.0)))
            }
        }
    }
}

/// `e^{-r/ξ(t)} / r`, equal to `1/r` at `t = 1`.
pub fn gamma_far(p: &ScalingParams, t: f64) -> Result<f64> {
    let xi = correlation_length(p, t)?;
    Ok(libm::exp(-p.r / xi) / p.r)
}

/// `Γ(1) - (Γ(1) - Γ(0)) |1 - t|^{1-α}` on the window `0 ≤ t ≤ 2`.
pub fn gamma_nn(p: &ScalingParams, t: f64) -> Result<f64> {
    p.validate()?;
    if !(0.0..=2.0).contains(&t) {
        return Err(Error::Domain("t must lie in [0, 2]"));
    }
    Ok(p.gamma_c - (p.gamma_c - p.gamma_0) * libm::pow((1.0 - t).abs(), 1.0 - p.alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    NearestNeighbour,
    Far,
}

impl Pair {
    pub fn as_str(self) -> &'static str {
        match self {
            Pair::NearestNeighbour => "NN",
            Pair::Far => "FAR",
        }
    }
}

/// `Γᴰ(t)` of the chosen pair. The far pair carries the antiferromagnetic
/// sign of the nearest-neighbour one.
pub fn pair_gamma(p: &ScalingParams, t: f64, pair: Pair) -> Result<f64> {
    match pair {
        Pair::NearestNeighbour => gamma_nn(p, t),
        Pair::Far => Ok(-gamma_far(p, t)?),
    }
}

/// `(t, D_t / D_{t=1})` from the isotropic discord at the model `Γᴰ(t)`.
/// Kosterlitz-Thouless curves only cover `t > 1`; other points are dropped.
pub fn normalized_discord_curve(
    p: &ScalingParams,
    ts: &[f64],
    pair: Pair,
) -> Result<Vec<(f64, f64)>> {
    p.validate()?;
    let reference = match (p.form, pair) {
        // ξ is infinite at t = 1 for both forms
        (CriticalForm::KosterlitzThouless, Pair::Far) => isotropic_discord(-1.0 / p.r)?,
        _ => isotropic_discord(pair_gamma(p, 1.0, pair)?)?,
    };
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        if p.form == CriticalForm::KosterlitzThouless && t <= 1.0 {
            continue;
        }
        let d = if t == 1.0 {
            reference
        } else {
            isotropic_discord(pair_gamma(p, t, pair)?)?
        };
        out.push((t, d / reference));
    }
    Ok(out)
}

/// `n` points evenly spaced on `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn correlation_length_values() {
        let p = ScalingParams::default();
        assert_abs_diff_eq!(correlation_length(&p, 0.0).unwrap(), 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            correlation_length(&p, 1.5).unwrap(),
            6.062_866_266_041_592,
            epsilon = 1e-12
        );
        assert_eq!(correlation_length(&p, 1.0).unwrap(), f64::INFINITY);
        let kt = ScalingParams {
            form: CriticalForm::KosterlitzThouless,
            ..p
        };
        let t = 1.0 + core::f64::consts::PI * core::f64::consts::PI;
        assert_abs_diff_eq!(
            correlation_length(&kt, t).unwrap(),
            core::f64::consts::E,
            epsilon = 1e-12
        );
        assert!(correlation_length(&kt, 1.0).is_err());
        assert!(correlation_length(&kt, 0.5).is_err());
    }

    #[test]
    fn far_correlations() {
        let p = ScalingParams::default();
        assert_eq!(gamma_far(&p, 1.0).unwrap(), 0.05);
        assert_abs_diff_eq!(
            gamma_far(&p, 0.0).unwrap(),
            3.368_973_499_542_734e-4,
            epsilon = 1e-16
        );
        let g1 = gamma_far(&p, 1.0).unwrap();
        for t in linspace(0.5, 1.5, 101) {
            assert!(gamma_far(&p, t).unwrap() <= g1);
        }
    }

    #[test]
    fn nearest_neighbour_correlations() {
        let p = ScalingParams::default();
        assert_eq!(gamma_nn(&p, 1.0).unwrap(), -0.25);
        assert_abs_diff_eq!(gamma_nn(&p, 0.0).unwrap(), -1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(gamma_nn(&p, 0.5).unwrap(), -0.205_342_772_394_321_1, epsilon = 1e-12);
        assert!(gamma_nn(&p, 2.5).is_err());
        assert!(gamma_nn(&p, -0.1).is_err());
    }

    #[test]
    fn slopes_diverge_at_the_critical_point() {
        let p = ScalingParams::default();
        let slope = |h: f64| (gamma_nn(&p, 1.0 + h).unwrap() - gamma_nn(&p, 1.0).unwrap()) / h;
        let mut last = 0.0;
        for k in 1..8 {
            let s = slope(libm::pow(10.0, -(k as f64))).abs();
            assert!(s > last);
            last = s;
        }
    }

    #[test]
    fn invalid_params() {
        let bad = ScalingParams {
            alpha: 1.0,
            ..ScalingParams::default()
        };
        assert!(gamma_nn(&bad, 0.5).is_err());
        let bad = ScalingParams {
            r: 0.5,
            ..ScalingParams::default()
        };
        assert!(gamma_far(&bad, 0.5).is_err());
    }

    #[test]
    fn normalized_curves() {
        let p = ScalingParams::default();
        let ts = linspace(0.5, 1.5, 101);
        for pair in [Pair::NearestNeighbour, Pair::Far] {
            let c = normalized_discord_curve(&p, &ts, pair).unwrap();
            assert_eq!(c.len(), 101);
            for &(t, d) in &c {
                if t == 1.0 {
                    assert_eq!(d, 1.0);
                } else {
                    assert!(d < 1.0, "{pair:?} t={t} d={d}");
                }
            }
        }
    }

    #[test]
    fn far_curve_follows_quadratic_law() {
        // Γ(t=1) = 1/r must itself be small for the quadratic law to hold
        let p = ScalingParams {
            r: 1000.0,
            ..ScalingParams::default()
        };
        let g1 = gamma_far(&p, 1.0).unwrap();
        let ts = linspace(0.5, 1.5, 41);
        for (t, d) in normalized_discord_curve(&p, &ts, Pair::Far).unwrap() {
            let g = gamma_far(&p, t).unwrap();
            let q = (g / g1) * (g / g1);
            // below this the discord drowns in cancellation
            if q >= 1e-4 {
                assert!((d / q - 1.0).abs() < 0.01, "t={t} d={d} q={q}");
            }
        }
    }

    #[test]
    fn far_discord_is_quadratic_for_small_gamma() {
        let p = ScalingParams::default();
        for t in linspace(0.5, 1.5, 41) {
            let g = pair_gamma(&p, t, Pair::Far).unwrap();
            if g.abs() <= 1e-3 {
                let quad = 16.0 * g * g / core::f64::consts::LN_2;
                let d = isotropic_discord(g).unwrap();
                assert!((d / quad - 1.0).abs() < 0.01, "t={t} d={d} q={quad}");
            }
        }
    }

    #[test]
    fn kt_curves_cover_only_the_high_side() {
        let p = ScalingParams {
            form: CriticalForm::KosterlitzThouless,
            ..ScalingParams::default()
        };
        let c = normalized_discord_curve(&p, &linspace(0.5, 1.5, 11), Pair::Far).unwrap();
        assert!(c.iter().all(|&(t, d)| t > 1.0 && d < 1.0));
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.5, 1.5, 101);
        assert_eq!(v[0], 0.5);
        assert_eq!(v[50], 1.0);
        assert_eq!(v[100], 1.5);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }
}
