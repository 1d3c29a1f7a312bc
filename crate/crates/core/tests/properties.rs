use std::f64::consts::PI;

use proptest::prelude::*;

use polysection::matching::bottleneck_distance;
use polysection::multisection::{multisect, orbit_expand, orbit_symmetry_defect};
use polysection::poly::sign_changes;
use polysection::rays::{
    bracket_positive_roots, sample_conforming, theta_inverse, theta_map, verify_on_rays, RayFamily,
    RegionSpec, ThetaContext,
};
use polysection::rootfind::roots;
use polysection::{c64, Complex64, Polynomial, SectionParams};

fn separated(points: Vec<Complex64>, sep: f64) -> Vec<Complex64> {
    let mut kept: Vec<Complex64> = Vec::new();
    for z in points {
        if kept.iter().all(|w| (w - z).norm() >= sep) {
            kept.push(z);
        }
    }
    kept
}

fn root_set(max: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0f64..2.0, -PI..PI), 1..=max).prop_map(|v| {
        separated(
            v.into_iter()
                .map(|(e, a)| Complex64::from_polar(10f64.powf(e), a))
                .collect(),
            1e-2,
        )
    })
}

/// Real polynomial from real roots and conjugate pairs.
fn real_root_set() -> impl Strategy<Value = Vec<Complex64>> {
    (
        prop::collection::vec(-3.0f64..3.0, 0..6),
        prop::collection::vec((-3.0f64..3.0, 0.1f64..3.0), 0..4),
    )
        .prop_map(|(reals, pairs)| {
            let mut zs = separated(reals.into_iter().map(|x| c64(x, 0.0)).collect(), 0.05);
            for (re, im) in pairs {
                zs.push(c64(re, im));
                zs.push(c64(re, -im));
            }
            zs
        })
        .prop_filter("nonconstant", |zs| !zs.is_empty())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_recovers_separated_roots(zs in root_set(30)) {
        let p = Polynomial::from_roots(&zs, c64(1.0, 0.0));
        let found = roots(&p).unwrap();
        prop_assert!(found.converged);
        let err = bottleneck_distance(&zs, &found.roots).unwrap();
        prop_assert!(err < 1e-8, "matching error {err:e}");
    }

    #[test]
    fn real_input_gives_conjugate_closed_roots(zs in real_root_set()) {
        let p = Polynomial::new(
            Polynomial::from_roots(&zs, c64(1.0, 0.0)).real_coeffs().into_iter().map(|a| c64(a, 0.0)).collect(),
        );
        let found = roots(&p).unwrap().roots;
        let conj: Vec<Complex64> = found.iter().map(|z| z.conj()).collect();
        let defect = bottleneck_distance(&found, &conj).unwrap();
        prop_assert!(defect <= 1e-9, "conjugate defect {defect:e}");
    }

    #[test]
    fn descartes_bounds_positive_roots(zs in real_root_set()) {
        let p = Polynomial::from_roots(&zs, c64(1.0, 0.0));
        let found = roots(&p).unwrap().roots;
        let positive = found
            .iter()
            .filter(|z| z.re > 0.0 && z.im.abs() <= 1e-7 * (1.0 + z.norm()))
            .count();
        let changes = sign_changes(&p.real_coeffs());
        prop_assert!(positive <= changes);
        prop_assert_eq!((changes - positive) % 2, 0);
    }

    #[test]
    fn theta_inverse_round_trips(seed in any::<u64>(), degree in 1usize..10, t in 0.05f64..0.95, m in 3usize..6) {
        let zeros = sample_conforming(RegionSpec::OpenLeftHalfPlane, degree, seed).roots;
        let ctx = ThetaContext::new(zeros, m).unwrap();
        let target = t * ctx.theta_sup();
        let x = theta_inverse(&ctx, target).unwrap();
        prop_assert!((theta_map(&ctx, x) - target).abs() <= 1e-12 * ctx.n() as f64 * 10.0);
    }

    #[test]
    fn sector_sections_lie_on_three_rays(seed in any::<u64>(), degree in 0usize..=12) {
        let p = sample_conforming(RegionSpec::sector(2.0 * PI / 3.0).unwrap(), degree, seed).poly;
        for params in SectionParams::all(3).unwrap() {
            let section = multisect(&p, params);
            if section.degree().unwrap_or(0) == 0 {
                continue;
            }
            let found = roots(&section).unwrap();
            let report = verify_on_rays(&found.roots, RayFamily::negative(3), 1e-6);
            prop_assert!(report.passed, "r={} max {:e}", params.r(), report.max_relative_distance);
            prop_assert!(orbit_symmetry_defect(&found.roots, 3) <= 1e-7 * (1.0 + found.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)));
        }
    }

    #[test]
    fn half_plane_sections_lie_on_four_rays(seed in any::<u64>(), degree in 0usize..=12) {
        let p = sample_conforming(RegionSpec::OpenLeftHalfPlane, degree, seed).poly;
        for params in SectionParams::all(4).unwrap() {
            let section = multisect(&p, params);
            if section.degree().unwrap_or(0) == 0 {
                continue;
            }
            let found = roots(&section).unwrap();
            let report = verify_on_rays(&found.roots, RayFamily::negative(4), 1e-6);
            prop_assert!(report.passed, "r={} max {:e}", params.r(), report.max_relative_distance);
        }
    }

    #[test]
    fn brackets_agree_with_oracle(seed in any::<u64>(), degree in 1usize..=10, m in 3usize..=4, r in 0usize..4) {
        prop_assume!(r < m);
        let region = RegionSpec::required_for(m);
        let sample = sample_conforming(region, degree, seed);
        let params = SectionParams::new(m, r).unwrap();
        let ctx = ThetaContext::new(sample.roots.clone(), m).unwrap();
        let report = bracket_positive_roots(&sample.poly, params, &ctx).unwrap();
        prop_assert!(report.passed, "{:?}", report.diagnostics);
        let section = multisect(&sample.poly, params);
        if section.is_zero() {
            prop_assert!(report.refined_roots.is_empty());
            return Ok(());
        }
        let oracle = if section.degree() == Some(0) {
            Vec::new()
        } else {
            roots(&section).unwrap().roots
        };
        let orbit = orbit_expand(&report.refined_roots, params).unwrap();
        let scale = 1.0 + oracle.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let gap = bottleneck_distance(&orbit, &oracle).unwrap_or(f64::INFINITY);
        prop_assert!(gap <= 1e-7 * scale, "gap {gap:e}");
    }
}
