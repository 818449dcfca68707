//! Two-qubit X states: conditional entropy under a projective measurement of
//! qubit B and the closed-form quantum discord.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩`, identified with
//! `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩`. The first qubit is A, the second is B. The
//! density matrix is
//!
//! ```text
//!         |00⟩  |01⟩  |10⟩  |11⟩
//! ⟨00|  [  u     0     0     y* ]
//! ⟨01|  [  0     w1    x*    0  ]
//! ⟨10|  [  0     x     w2    0  ]
//! ⟨11|  [  y     0     0     v  ]
//! ```

use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;

use crate::entropy::{entropy_of_spectrum, h2, xlog2x};
use crate::{Error, Result};

/// Tolerance on `Tr ρ = 1`.
pub const TRACE_TOL: f64 = 1e-12;
/// Tolerance on nonnegativity of weights and eigenvalues.
pub const POSITIVITY_TOL: f64 = 1e-12;
/// `c00` and `c90` closer than this count as a tie, resolved to [`ChosenTheta::Zero`].
pub const TIE_TOL: f64 = 1e-12;

/// Measurement outcomes with smaller probability contribute nothing.
const ZERO_PROBABILITY: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub u: f64,
    pub v: f64,
    pub w1: f64,
    pub w2: f64,
    pub x: Complex64,
    pub y: Complex64,
}

impl XState {
    /// Builds a state and checks trace and positivity.
    pub fn new(u: f64, v: f64, w1: f64, w2: f64, x: Complex64, y: Complex64) -> Result<Self> {
        let s = XState { u, v, w1, w2, x, y };
        s.validate()?;
        Ok(s)
    }

    /// State with real off-diagonal amplitudes.
    pub fn real(u: f64, v: f64, w1: f64, w2: f64, x: f64, y: f64) -> Result<Self> {
        Self::new(u, v, w1, w2, Complex64::new(x, 0.0), Complex64::new(y, 0.0))
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        XState {
            u: 0.5,
            v: 0.5,
            w1: 0.0,
            w2: 0.0,
            x: Complex64::new(0.0, 0.0),
            y: Complex64::new(0.5, 0.0),
        }
    }

    pub fn maximally_mixed() -> Self {
        XState {
            u: 0.25,
            v: 0.25,
            w1: 0.25,
            w2: 0.25,
            x: Complex64::new(0.0, 0.0),
            y: Complex64::new(0.0, 0.0),
        }
    }

    /// Translation- and time-reversal-symmetric pair state with no local
    /// magnetization: `u = v = 1/4 + Γᴰ`, `w1 = w2 = 1/4 - Γᴰ`, `x = Γᴼ`.
    pub fn symmetric(gamma_d: f64, gamma_o: f64) -> Result<Self> {
        Self::real(
            0.25 + gamma_d,
            0.25 + gamma_d,
            0.25 - gamma_d,
            0.25 - gamma_d,
            gamma_o,
            0.0,
        )
    }

    pub fn trace(&self) -> f64 {
        self.u + self.v + self.w1 + self.w2
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.u, self.v, self.w1, self.w2, self.x.re, self.x.im, self.y.re, self.y.im]
            .iter()
            .all(|c| c.is_finite());
        if !finite {
            return Err(Error::InvalidState("non-finite entry"));
        }
        if (self.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState("trace differs from one"));
        }
        if [self.u, self.v, self.w1, self.w2]
            .iter()
            .any(|&d| d < -POSITIVITY_TOL)
        {
            return Err(Error::InvalidState("negative diagonal weight"));
        }
        if joint_eigenvalues(self).iter().any(|&l| l < -POSITIVITY_TOL) {
            return Err(Error::InvalidState("negative eigenvalue"));
        }
        Ok(())
    }

    /// Dense 4×4 matrix in the `|00⟩, |01⟩, |10⟩, |11⟩` basis, row-major.
    pub fn to_matrix(&self) -> [[Complex64; 4]; 4] {
        let z = Complex64::new(0.0, 0.0);
        let r = |a: f64| Complex64::new(a, 0.0);
        [
            [r(self.u), z, z, self.y.conj()],
            [z, r(self.w1), self.x.conj(), z],
            [z, self.x, r(self.w2), z],
            [self.y, z, z, r(self.v)],
        ]
    }

    /// Eigenvalues `u + w2` and `v + w1` of the diagonal reduced state of B.
    pub fn rho_b(&self) -> [f64; 2] {
        [self.u + self.w2, self.v + self.w1]
    }
}

/// Measurement basis on qubit B: `|0̃⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        MeasurementBasis { theta, phi }
    }

    pub fn from_degrees(theta: f64, phi: f64) -> Self {
        MeasurementBasis {
            theta: theta.to_radians(),
            phi: phi.to_radians(),
        }
    }
}

/// Which closed-form candidate attains the minimal conditional entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChosenTheta {
    /// θ = 0, the `s^z` basis.
    Zero,
    /// θ = π/2 at the optimal φ, an `s^x`-like basis.
    Ninety,
}

impl ChosenTheta {
    pub fn as_str(self) -> &'static str {
        match self {
            ChosenTheta::Zero => "ZERO",
            ChosenTheta::Ninety => "NINETY",
        }
    }
}

impl core::fmt::Display for ChosenTheta {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    pub c00: f64,
    pub c90: f64,
    pub phi_star: f64,
    pub chosen_theta: ChosenTheta,
    pub s_joint: f64,
    pub s_b: f64,
}

impl DiscordResult {
    pub fn min_conditional_entropy(&self) -> f64 {
        self.c00.min(self.c90)
    }
}

/// The four eigenvalues of ρ_AB: the `{u, v}` block pair, then the `{w1, w2}`
/// block pair.
pub fn joint_eigenvalues(s: &XState) -> [f64; 4] {
    let ry = libm::sqrt((s.u - s.v) * (s.u - s.v) + 4.0 * s.y.norm_sqr());
    let rx = libm::sqrt((s.w1 - s.w2) * (s.w1 - s.w2) + 4.0 * s.x.norm_sqr());
    [
        0.5 * (s.u + s.v + ry),
        0.5 * (s.u + s.v - ry),
        0.5 * (s.w1 + s.w2 + rx),
        0.5 * (s.w1 + s.w2 - rx),
    ]
}

/// Von Neumann entropy of ρ_AB in bits.
pub fn joint_entropy(s: &XState) -> f64 {
    entropy_of_spectrum(&joint_eigenvalues(s))
}

/// Entropy of one measurement branch, weighted by its probability:
/// `p · H(λ⁺)` with `λ± = (p ± √(b² + 4|z|²)) / 2p`.
#[inline]
fn branch(p: f64, b: f64, z2: f64) -> f64 {
    if p <= ZERO_PROBABILITY {
        return 0.0;
    }
    let gap = libm::sqrt(b * b + 4.0 * z2) / p;
    p * h2(0.5 * (1.0 + gap))
}

/// Conditional entropy `C_{θ,φ}` of A after measuring B in basis `m`.
pub fn conditional_entropy(s: &XState, m: MeasurementBasis) -> f64 {
    let (sh, ch) = libm::sincos(0.5 * m.theta);
    let (a2, b2) = (ch * ch, sh * sh);
    let (sp, cp) = libm::sincos(m.phi);
    let e = Complex64::new(cp, sp);
    let z = (s.x * e + s.y * e.conj()) * (ch * sh);
    let z2 = z.norm_sqr();

    let p0 = a2 * (s.u + s.w2) + b2 * (s.w1 + s.v);
    let p1 = b2 * (s.u + s.w2) + a2 * (s.w1 + s.v);
    let b0 = a2 * (s.u - s.w2) + b2 * (s.w1 - s.v);
    let b1 = b2 * (s.u - s.w2) + a2 * (s.w1 - s.v);
    branch(p0, b0, z2) + branch(p1, b1, z2)
}

/// Conditional entropy in the `s^z` basis (θ = 0).
pub fn c00(s: &XState) -> f64 {
    let cond = |a: f64, b: f64| {
        let t = a + b;
        if t <= ZERO_PROBABILITY {
            0.0
        } else {
            // -a log2(a/t) - b log2(b/t)
            xlog2x(a) + xlog2x(b) - xlog2x(t)
        }
    };
    cond(s.u, s.w2) + cond(s.v, s.w1)
}

/// Conditional entropy at θ = π/2 minimized over φ. Returns the value and the
/// optimal angle φ* in `[0, π)`.
///
/// The entropy falls as `|x e^{iφ} + y e^{-iφ}|` grows, so φ* is whichever
/// of the two stationary angles of `tan 2φ = -Im(x y*)/Re(x y*)` maximizes it.
pub fn c90(s: &XState) -> (f64, f64) {
    let xy = s.x * s.y.conj();
    let phi_star = if xy.norm() == 0.0 {
        0.0
    } else {
        let base = if xy.re == 0.0 {
            0.25 * PI
        } else {
            0.5 * libm::atan(-xy.im / xy.re)
        };
        let amp = |phi: f64| {
            let (sp, cp) = libm::sincos(phi);
            let e = Complex64::new(cp, sp);
            (s.x * e + s.y * e.conj()).norm()
        };
        let other = base + FRAC_PI_2;
        let best = if amp(other) > amp(base) { other } else { base };
        let m = libm::fmod(best, PI);
        if m < 0.0 {
            m + PI
        } else {
            m
        }
    };
    let (sp, cp) = libm::sincos(phi_star);
    let e = Complex64::new(cp, sp);
    let zmax = (s.x * e + s.y * e.conj()).norm();
    let d = s.u - s.v + s.w1 - s.w2;
    let gap = libm::sqrt(d * d + 4.0 * zmax * zmax);
    (h2(0.5 * (1.0 + gap)), phi_star)
}

/// Closed-form quantum discord `min(C₀,₀, C₉₀,φ*) - S(ρ_AB) + S(ρ_B)`.
pub fn discord(s: &XState) -> Result<DiscordResult> {
    s.validate()?;
    let c00 = c00(s);
    let (c90, phi_star) = c90(s);
    let s_joint = joint_entropy(s);
    let [pb0, pb1] = s.rho_b();
    let s_b = xlog2x(pb0) + xlog2x(pb1);
    let (min, chosen_theta) = if c00 <= c90 + TIE_TOL {
        (c00, ChosenTheta::Zero)
    } else {
        (c90, ChosenTheta::Ninety)
    };
    Ok(DiscordResult {
        discord: min - s_joint + s_b,
        c00,
        c90,
        phi_star,
        chosen_theta,
        s_joint,
        s_b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridReport {
    pub grid_min: f64,
    pub closed_form_min: f64,
    pub argmin: MeasurementBasis,
    /// `closed_form_min - grid_min`. Large positive values mean the closed
    /// form missed a better basis.
    pub discrepancy: f64,
}

/// Brute-force minimum of the conditional entropy over a `(θ, φ)` grid on
/// `[0, π] × [0, 2π)`, compared against the closed-form candidates.
///
/// Ties in the minimum keep the lexicographically first `(θ, φ)`.
pub fn discord_grid_verify(s: &XState, n_theta: usize, n_phi: usize) -> Result<GridReport> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::Domain("grid needs at least 2 points per axis"));
    }
    let mut grid_min = f64::INFINITY;
    let mut argmin = MeasurementBasis::new(0.0, 0.0);
    for i in 0..n_theta {
        let theta = PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            let m = MeasurementBasis::new(theta, phi);
            let c = conditional_entropy(s, m);
            if c < grid_min {
                grid_min = c;
                argmin = m;
            }
        }
    }
    let closed_form_min = c00(s).min(c90(s).0);
    Ok(GridReport {
        grid_min,
        closed_form_min,
        argmin,
        discrepancy: closed_form_min - grid_min,
    })
}

/// Schmidt weight `p = (1 + √(1 - |2(bc - ad)|²)) / 2` and discord `H(p)` of
/// the pure state `a|00⟩ + b|01⟩ + c|10⟩ + d|11⟩`.
pub fn pure_state_discord(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> Result<(f64, f64)> {
    let norm = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    let conc2 = ((b * c - a * d) * 2.0).norm_sqr();
    let p = 0.5 * (1.0 + libm::sqrt((1.0 - conc2).max(0.0)));
    Ok((p, h2(p)))
}

/// Random valid X state. Diagonal weights are flat on the simplex,
/// `|x| ≤ √(w1 w2)` and `|y| ≤ √(u v)` with uniform phases, so the state is
/// positive by construction.
pub fn random_xstate<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let mut e = [0.0f64; 4];
    for v in e.iter_mut() {
        *v = -libm::log(1.0 - rng.random::<f64>());
    }
    let total: f64 = e.iter().sum();
    let [u, v, w1, w2] = e.map(|x| x / total);
    let mut draws = [0.0f64; 4];
    for d in draws.iter_mut() {
        *d = rng.random::<f64>();
    }
    let [rx, ax, ry, ay] = draws;
    let x = Complex64::from_polar(libm::sqrt(w1 * w2) * rx, 2.0 * PI * ax);
    let y = Complex64::from_polar(libm::sqrt(u * v) * ry, 2.0 * PI * ay);
    XState { u, v, w1, w2, x, y }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn validation_rejects_bad_states() {
        assert!(XState::real(0.5, 0.5, 0.1, 0.0, 0.0, 0.0).is_err());
        assert!(XState::real(1.1, -0.1, 0.0, 0.0, 0.0, 0.0).is_err());
        // |y| > √(uv)
        assert!(XState::real(0.5, 0.5, 0.0, 0.0, 0.0, 0.6).is_err());
        assert!(XState::real(0.25, 0.25, 0.25, 0.25, f64::NAN, 0.0).is_err());
        assert!(XState::bell().validate().is_ok());
    }

    #[test]
    fn joint_eigenvalues_simple_states() {
        let mut e = joint_eigenvalues(&XState::bell());
        e.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_abs_diff_eq!(e[0], 1.0, epsilon = 1e-15);
        assert!(e[1..].iter().all(|v| v.abs() < 1e-15));
        for l in joint_eigenvalues(&XState::maximally_mixed()) {
            assert_abs_diff_eq!(l, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn c00_examples() {
        assert_abs_diff_eq!(c00(&XState::maximally_mixed()), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c00(&XState::bell()), 0.0, epsilon = 1e-15);
        let s = XState::real(0.3, 0.3, 0.2, 0.2, 0.0, 0.0).unwrap();
        // both branches are H(0.6)
        assert_abs_diff_eq!(c00(&s), 0.970_950_594_454_668_6, epsilon = 1e-12);
        let m = MeasurementBasis::new(0.0, 1.3);
        assert_abs_diff_eq!(conditional_entropy(&s, m), c00(&s), epsilon = 1e-12);
    }

    #[test]
    fn c90_examples() {
        let (v, phi) = c90(&XState::bell());
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        assert_eq!(phi, 0.0);

        let s = XState::real(0.4, 0.2, 0.3, 0.1, 0.1, 0.0).unwrap();
        let d: f64 = 0.4 - 0.2 + 0.3 - 0.1;
        let expected = h2(0.5 * (1.0 + (d * d + 4.0 * 0.01f64).sqrt()));
        let (v, phi) = c90(&s);
        assert_abs_diff_eq!(v, expected, epsilon = 1e-14);
        assert_eq!(phi, 0.0);
    }

    #[test]
    fn c90_real_same_sign_has_zero_phi() {
        let s = XState::real(0.3, 0.2, 0.25, 0.25, 0.1, 0.05).unwrap();
        let (_, phi) = c90(&s);
        assert_abs_diff_eq!(phi, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn c90_beats_every_phi_on_fine_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s = random_xstate(&mut rng);
            let (v, _) = c90(&s);
            let mut grid_min = f64::INFINITY;
            for j in 0..10_000 {
                let phi = 2.0 * PI * j as f64 / 10_000.0;
                let g = conditional_entropy(&s, MeasurementBasis::new(FRAC_PI_2, phi));
                assert!(v <= g + 1e-12);
                grid_min = grid_min.min(g);
            }
            assert!(grid_min - v < 1e-6, "{grid_min} vs {v}");
        }
    }

    #[test]
    fn conditional_entropy_branch_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = random_xstate(&mut rng);
            let t = rng.random::<f64>() * PI;
            let p = rng.random::<f64>() * 2.0 * PI;
            let a = conditional_entropy(&s, MeasurementBasis::new(t, p));
            let b = conditional_entropy(&s, MeasurementBasis::new(t + PI, p));
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn bell_state_pure_conditionals_at_ninety() {
        let v = conditional_entropy(&XState::bell(), MeasurementBasis::new(FRAC_PI_2, 0.0));
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_probability_branch_is_not_nan() {
        let s = XState::real(1.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let v = conditional_entropy(&s, MeasurementBasis::new(0.0, 0.0));
        assert_eq!(v, 0.0);
        assert_eq!(c00(&s), 0.0);
    }

    #[test]
    fn discord_examples() {
        let r = discord(&XState::bell()).unwrap();
        assert_abs_diff_eq!(r.discord, 1.0, epsilon = 1e-12);

        let diag = XState::real(0.1, 0.2, 0.3, 0.4, 0.0, 0.0).unwrap();
        let r = discord(&diag).unwrap();
        assert_abs_diff_eq!(r.discord, 0.0, epsilon = 1e-12);
        assert_eq!(r.chosen_theta, ChosenTheta::Zero);

        // singlet-like pair of the 4-site ring
        let s = XState::real(1.0 / 12.0, 1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, -1.0 / 3.0, 0.0)
            .unwrap();
        let r = discord(&s).unwrap();
        // 1 + (3/12) log2(1/12) + (3/4) log2(3/4) + H(1/6)
        assert_abs_diff_eq!(r.discord, 0.442_503_672_008_932_3, epsilon = 1e-12);
        assert_abs_diff_eq!(r.c00, r.c90, epsilon = 1e-12);
        assert_eq!(r.chosen_theta, ChosenTheta::Zero);
        assert_abs_diff_eq!(
            r.discord,
            r.min_conditional_entropy() - r.s_joint + r.s_b,
            epsilon = 1e-12
        );
    }

    #[test]
    fn discord_rejects_invalid_state() {
        let s = XState {
            u: 0.7,
            ..XState::maximally_mixed()
        };
        assert!(discord(&s).is_err());
    }

    #[test]
    fn grid_verify_bell_and_diagonal() {
        let r = discord_grid_verify(&XState::bell(), 181, 360).unwrap();
        assert!(r.discrepancy.abs() <= 1e-9);

        let s = XState::real(0.1, 0.2, 0.3, 0.4, 0.0, 0.0).unwrap();
        let r = discord_grid_verify(&s, 19, 36).unwrap();
        for j in 0..36 {
            let phi = 2.0 * PI * j as f64 / 36.0;
            assert_abs_diff_eq!(
                conditional_entropy(&s, MeasurementBasis::new(0.0, phi)),
                c00(&s),
                epsilon = 1e-14
            );
        }
        assert_abs_diff_eq!(r.grid_min, c00(&s), epsilon = 1e-12);
        assert!(discord_grid_verify(&s, 1, 10).is_err());
    }

    #[test]
    fn pure_state_examples() {
        let z = c(0.0, 0.0);
        let (p, d) = pure_state_discord(c(1.0, 0.0), z, z, z).unwrap();
        assert_eq!((p, d), (1.0, 0.0));

        let h = core::f64::consts::FRAC_1_SQRT_2;
        let (p, d) = pure_state_discord(c(h, 0.0), z, z, c(h, 0.0)).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-12);

        let (p, d) = pure_state_discord(c(0.6, 0.0), z, z, c(0.8, 0.0)).unwrap();
        assert_abs_diff_eq!(p, 0.64, epsilon = 1e-12);
        assert_abs_diff_eq!(d, 0.942_683_189_255_492_2, epsilon = 1e-12);

        assert!(matches!(
            pure_state_discord(c(1.0, 0.0), c(1.0, 0.0), z, z),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let s = random_xstate(&mut rng);
            s.validate().unwrap();
            let r = discord(&s).unwrap();
            assert!(r.discord >= -1e-9 && r.discord <= 1.0 + 1e-9);
        }
    }
}
