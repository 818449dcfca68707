use approx::assert_abs_diff_eq;

use spindiscord_core::correlators::{discord_at, discord_profile_vs_r, ring_distance};
use spindiscord_core::spinchain::{ground_state, lanczos, XxzRing};
use spindiscord_core::xstate::{c00, c90};
use spindiscord_core::{pair_correlations, two_site_rdm};

#[test]
fn reduced_states_are_translation_invariant() {
    for delta in [0.3, 1.0, 1.8] {
        let gs = ground_state(12, delta, 1e-11).unwrap();
        for r in 1..=6 {
            let a = two_site_rdm(&gs, 1, 1 + r).unwrap();
            for i in 2..=12 {
                let j = (i + r - 1) % 12 + 1;
                let b = two_site_rdm(&gs, i, j).unwrap();
                assert_abs_diff_eq!(a.u, b.u, epsilon = 1e-8);
                assert_abs_diff_eq!(a.w1, b.w1, epsilon = 1e-8);
                assert_abs_diff_eq!(a.w2, b.w2, epsilon = 1e-8);
                assert_abs_diff_eq!(a.v, b.v, epsilon = 1e-8);
                assert_abs_diff_eq!(a.x.re, b.x.re, epsilon = 1e-8);
            }
        }
    }
}

#[test]
fn isotropic_ground_state_is_a_singlet() {
    // Σ_{i<j} ⟨S_i·S_j⟩ = -3N/8 when the total spin vanishes
    for n in [8usize, 10, 12] {
        let gs = ground_state(n, 1.0, 1e-11).unwrap();
        let mut total = 0.0;
        for i in 1..=n {
            for j in i + 1..=n {
                let c = pair_correlations(&gs, i, j).unwrap();
                total += c.gamma_d + c.gamma_o.re;
            }
        }
        assert_abs_diff_eq!(total, -3.0 * n as f64 / 8.0, epsilon = 1e-8);
    }
}

#[test]
fn isotropic_point_needs_no_minimization() {
    let gs = ground_state(12, 1.0, 1e-11).unwrap();
    for r in 1..=6 {
        let s = two_site_rdm(&gs, 1, 1 + r).unwrap();
        assert_abs_diff_eq!(c00(&s), c90(&s).0, epsilon = 1e-9);
    }
}

#[test]
fn discord_is_symmetric_under_reflection_of_separation() {
    let gs = ground_state(12, 0.6, 1e-11).unwrap();
    for r in 1..12 {
        let a = discord_at(&gs, r).unwrap();
        let b = discord_at(&gs, 12 - r).unwrap();
        assert_abs_diff_eq!(a.discord, b.discord, epsilon = 1e-9);
        assert_eq!(a.r, ring_distance(12, 1, 1 + r));
    }
    assert_eq!(discord_profile_vs_r(&gs).unwrap().len(), 6);
}

#[test]
fn positivity_window_holds_for_measured_correlators() {
    for delta in [-0.8, -0.3, 0.2, 0.9, 1.4, 2.5] {
        let gs = ground_state(10, delta, 1e-11).unwrap();
        for r in 1..=5 {
            let c = pair_correlations(&gs, 1, 1 + r).unwrap();
            let (g, o) = (c.gamma_d, c.gamma_o.re);
            for l in [0.25 + g, 0.25 - g + o, 0.25 - g - o] {
                assert!(l >= -1e-10, "Δ={delta} r={r} Γ={g} Γo={o}");
            }
            assert!(c.y_corr.norm() < 1e-12);
        }
    }
}

#[test]
fn ritz_values_decrease_monotonically() {
    let basis = spindiscord_core::build_sector(12, 6).unwrap();
    let h = XxzRing::new(&basis, 0.8);
    let opts = lanczos::LanczosOptions {
        krylov_dim: 20,
        ..Default::default()
    };
    let pair = lanczos::lowest_eigenpair(&h, &opts, &[]).unwrap();
    assert!(pair.history.len() > 3);
    for w in pair.history.windows(2) {
        assert!(w[1] <= w[0] + 1e-12);
    }
}
