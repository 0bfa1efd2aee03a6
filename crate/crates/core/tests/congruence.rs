use num_complex::Complex64;
use proptest::prelude::*;

use cmc1::congruence::{
    beltrami_angles, calo_congruence_sample, calo_metrics, calo_pair, envelope, metric_data, CaloSurface,
    EnvelopeBranch, Vec3,
};
use cmc1::{bianchi_calo_point, bicalo_via_congruence, eval_jet, parse, Error};

fn catalog_point() -> impl Strategy<Value = (&'static str, Complex64)> {
    prop_oneof![
        (0.5f64..2.0).prop_map(|r| ("tau^2", r)),
        (0.5f64..2.0).prop_map(|r| ("log(tau)", r)),
        (0.5f64..1.0).prop_map(|r| ("exp(tau)", r)),
        (0.8f64..2.0).prop_map(|r| ("tau^3+tau", r)),
    ]
    .prop_flat_map(|(src, r)| (Just(src), (-3.0f64..3.0).prop_map(move |t| Complex64::from_polar(r, t))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minus_envelope_is_the_closed_form((src, tau) in catalog_point()) {
        let e = parse(src).unwrap();
        let direct = bianchi_calo_point(&eval_jet(&e, tau).unwrap(), tau).unwrap();
        let via = bicalo_via_congruence(&e, tau).unwrap();
        prop_assert!(via.distance(direct) < 1e-8, "{via:?} vs {direct:?}");
    }

    #[test]
    fn plus_envelope_is_the_plane((src, tau) in catalog_point()) {
        let e = parse(src).unwrap();
        let f = eval_jet(&e, tau).unwrap().val;
        let p = envelope(&calo_congruence_sample(&e, tau, CaloSurface::Support).unwrap(), EnvelopeBranch::Plus).unwrap();
        prop_assert!((p - Vec3::new(f.re, f.im, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn pair_is_isometric_and_on_the_sphere((src, tau) in catalog_point()) {
        let e = parse(src).unwrap();
        let m = calo_metrics(&e, tau).unwrap();
        prop_assert!(m.isometry_defect() < 1e-6, "{m:?}");
        prop_assert!(m.conformality_defect() < 1e-6);
        prop_assert!(m.projection_defect() < 1e-6);
        let p = calo_pair(&eval_jet(&e, tau).unwrap(), tau).unwrap();
        let s2 = p.rolled.norm_squared();
        prop_assert!((s2 - p.support.z * p.support.z).abs() <= 1e-12 * (1.0 + s2));
        prop_assert!(p.support.z > 0.0);
    }

    #[test]
    fn beltrami_angles_survive_rolling((src, tau) in catalog_point()) {
        let e = parse(src).unwrap();
        let a = beltrami_angles(&calo_congruence_sample(&e, tau, CaloSurface::Rolled).unwrap()).unwrap();
        let b = beltrami_angles(&calo_congruence_sample(&e, tau, CaloSurface::Support).unwrap()).unwrap();
        prop_assert!((a.cos_omega1 - b.cos_omega1).abs() < 1e-8);
        prop_assert!((a.cos_omega2 - b.cos_omega2).abs() < 1e-8);
        prop_assert!((a.cos_sigma - b.cos_sigma).abs() < 1e-8);
    }

    /// Every sphere of the congruence touches both envelope points.
    #[test]
    fn envelopes_lie_on_their_spheres((src, tau) in catalog_point()) {
        let e = parse(src).unwrap();
        for which in [CaloSurface::Support, CaloSurface::Rolled] {
            let s = calo_congruence_sample(&e, tau, which).unwrap();
            let m = metric_data(&s).unwrap();
            for branch in [EnvelopeBranch::Plus, EnvelopeBranch::Minus] {
                let p = envelope(&s, branch).unwrap();
                prop_assert!(((p - s.center).norm() - s.radius).abs() < 1e-9 * (1.0 + s.radius));
            }
            prop_assert!((m.normal.norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn log_on_the_cut() {
    let e = parse("log(tau)").unwrap();
    let tau = Complex64::new(-1.0, 0.0);
    assert!(matches!(
        calo_congruence_sample(&e, tau, CaloSurface::Support),
        Err(Error::Domain(_))
    ));
    assert!(matches!(bicalo_via_congruence(&e, tau), Err(Error::Domain(_))));
}
