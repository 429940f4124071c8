use helicoid_ends::geometry::{helicoid_distance, level_curve, total_curvature_check};
use helicoid_ends::weierstrass::helicoid_closed_form;
use helicoid_ends::{Complex64, EndDescriptor};
use proptest::prelude::*;

const A1: f64 = -3.670_492_660_530_974;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn level_curves_stay_at_height_alpha(alpha in 1.5f64..8.0, sign in prop::bool::ANY) {
        let alpha = if sign { alpha } else { -alpha };
        let c = level_curve(&EndDescriptor::simple_family(A1), alpha, (-4.0, 4.0), 80).unwrap();
        for h in &c.heights {
            prop_assert!((h - alpha).abs() < 1e-9);
        }
    }

    /// Signed curvature agrees with the turning rate of the sampled tangent.
    #[test]
    fn curvature_matches_tangent_turning(alpha in 1.5f64..6.0, a in -6.0f64..6.0) {
        let c = level_curve(&EndDescriptor::simple_family(a), alpha, (-3.0, 3.0), 3000).unwrap();
        let h = c.ts[1] - c.ts[0];
        let angle = |v: [f64; 2]| v[1].atan2(v[0]);
        for i in (1..c.len() - 1).step_by(97) {
            let mut dtheta = angle(c.tangents[i + 1]) - angle(c.tangents[i - 1]);
            dtheta = helicoid_ends::geometry::wrap_angle(dtheta);
            let rate = dtheta / (2.0 * h);
            let want = c.kappa[i] * c.speed[i];
            prop_assert!((rate - want).abs() < 1e-4 * (1.0 + want.abs()), "t={} {} vs {}", c.ts[i], rate, want);
        }
    }

    /// For e^(z + a/z) the total absolute curvature of a level curve over the
    /// whole line is exactly 2|a|/|alpha|; a wide window captures all but the tail.
    #[test]
    fn single_coefficient_total_curvature(alpha in 2.0f64..6.0, a in 0.5f64..5.0) {
        let c = level_curve(&EndDescriptor::simple_family(-a), alpha, (-400.0, 400.0), 20000).unwrap();
        let exact = 2.0 * a / alpha;
        // Tails beyond |t| = 400 carry 2 a alpha / 400^2; the rest is trapezoid error.
        let tail = 2.0 * a * alpha / 400.0f64.powi(2);
        let total = c.total_absolute_curvature();
        prop_assert!((total - exact).abs() < tail + 1e-3 * exact, "{} vs {} (tail {})", total, exact, tail);
        prop_assert!(total_curvature_check(&c, a, 1.0).passed());
    }

    #[test]
    fn helicoid_points_have_zero_distance(t in -5.0f64..5.0, alpha in -10.0f64..10.0) {
        let x = helicoid_closed_form(Complex64::new(t, alpha));
        prop_assert!(helicoid_distance(x) < 1e-9 * (1.0 + t.abs().exp()));
    }
}
