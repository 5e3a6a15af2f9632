//! Property tests over random inverted-oscillator parameters.

use proptest::prelude::*;
use std::f64::consts::FRAC_PI_4;
use swanson_csm::eigen::{biorthogonality_matrix, eigenvalue, EigenstateId, Side};
use swanson_csm::model::derive_quantities;
use swanson_csm::packets::{moments, persistence_q, survival_probability, PacketKind};
use swanson_csm::propagator::kernel_k;
use swanson_csm::rhs::{g_n, g_plain, GSide, GeneralizedEigenfunction};
use swanson_csm::special::QuadraturePolicy;
use swanson_csm::wigner::{uv_coords, wigner_mn};
use swanson_csm::{Branch, Complex64, DerivedQuantities, ModelParams};

/// `ω = 1`, `α ∈ [−2, −0.6]`, `β` chosen so that `4αβ − 1 = κ²`.
fn inverted() -> impl Strategy<Value = DerivedQuantities> {
    (-2.0f64..-0.6, 0.05f64..1.5).prop_map(|(alpha, kappa)| {
        let beta = (1.0 + kappa * kappa) / (4.0 * alpha);
        derive_quantities(&ModelParams::new(1.0, alpha, beta)).unwrap()
    })
}

fn kind() -> impl Strategy<Value = PacketKind> {
    prop_oneof![Just(PacketKind::Cosh), Just(PacketKind::Sinh), Just(PacketKind::Gaussian)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn survival_in_unit_interval_and_nonincreasing(k in kind(), a in 0.0f64..6.0, b in 0.0f64..6.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (p_lo, p_hi) = (survival_probability(k, lo), survival_probability(k, hi));
        prop_assert!((0.0..=1.0).contains(&p_lo));
        prop_assert!(p_hi <= p_lo);
    }

    #[test]
    fn persistence_grows_with_box(d in inverted(), k in kind(), l in 0.1f64..20.0, kt in 0.0f64..3.0) {
        let t = kt / d.kappa();
        let a = persistence_q(k, &d, FRAC_PI_4, l, t).unwrap().re;
        let b = persistence_q(k, &d, FRAC_PI_4, 1.5 * l, t).unwrap().re;
        prop_assert!(b >= a - 1e-15);
        prop_assert!(a <= 1.0 + 1e-15);
    }

    #[test]
    fn gaussian_variance_is_constant(kt in 0.0f64..4.0) {
        let m = moments(PacketKind::Gaussian, kt);
        prop_assert!((m.var_x - 0.5).abs() < 1e-9 * m.mean_x2.max(1.0));
    }

    #[test]
    fn kernel_is_symmetric(d in inverted(), x in -4.0f64..4.0, xp in -4.0f64..4.0, t in 0.05f64..2.0) {
        let a = kernel_k(&d, FRAC_PI_4, x, xp, t).unwrap();
        let b = kernel_k(&d, FRAC_PI_4, xp, x, t).unwrap();
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1e-300));
    }

    #[test]
    fn rhs_and_csm_spectra_coincide(d in inverted(), n in 0usize..50) {
        for (branch, side, gside) in [
            (Branch::Plus, Side::Tilde, GSide::GTilde),
            (Branch::Minus, Side::Tilde, GSide::GTilde),
            (Branch::Plus, Side::Bar, GSide::GBar),
            (Branch::Minus, Side::Bar, GSide::GBar),
        ] {
            let csm = eigenvalue(EigenstateId::new(n, branch, side), &d).value;
            let rhs = GeneralizedEigenfunction { n, branch, side: gside }.eigenvalue(&d);
            prop_assert_eq!(csm, rhs);
        }
    }

    #[test]
    fn rhs_dressings_cancel(d in inverted(), m in 0usize..6, n in 0usize..6, x in -6.0f64..6.0) {
        let p = g_n(&d, m, Branch::Plus, GSide::GBar, x).unwrap().conj() * g_n(&d, n, Branch::Plus, GSide::GTilde, x).unwrap();
        let xc = Complex64::new(x, 0.0);
        let q = g_plain(&d, m, Branch::Plus, xc).unwrap() * g_plain(&d, n, Branch::Plus, xc).unwrap();
        prop_assert!((p - q).norm() <= 1e-12 * q.norm().max(1e-300));
    }

    #[test]
    fn uv_product_is_real_at_quarter_pi(d in inverted(), x in -5.0f64..5.0, p in -5.0f64..5.0) {
        let c = uv_coords(&d, FRAC_PI_4, x, p);
        let uv = c.u * c.v;
        prop_assert!(uv.im.abs() <= 1e-12 * uv.norm().max(1.0));
        prop_assert!(uv.re >= -1e-12);
    }

    #[test]
    fn diagonal_wigner_is_real_and_time_independent(d in inverted(), n in 0usize..6, x in -3.0f64..3.0, p in -3.0f64..3.0, t in 0.0f64..3.0) {
        let a = wigner_mn(&d, FRAC_PI_4, n, n, Branch::Minus, x, p, 0.0).unwrap();
        let b = wigner_mn(&d, FRAC_PI_4, n, n, Branch::Minus, x, p, t).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.im.abs() <= 1e-12 * a.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn biorthonormal_for_random_parameters(d in inverted(), theta in 0.1f64..1.4) {
        let g = biorthogonality_matrix(&d, theta, 6, Branch::Minus, &QuadraturePolicy::default().with_tolerances(1e-10, 1e-10)).unwrap();
        for (m, row) in g.iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                let want = if m == n { 1.0 } else { 0.0 };
                prop_assert!((v - want).norm() < 1e-8, "({}, {}) {}", m, n, v);
            }
        }
    }
}
