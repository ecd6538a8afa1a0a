//! Property-based invariants over randomly generated bodies: support
//! homogeneity and subadditivity, the duality identity, the involution, and
//! frame determinism.

use proptest::prelude::*;

use ballbody::body::{c_dual, Body, TrigTerm};
use ballbody::curvature::curvature_duality_residual;
use ballbody::linalg::{dot, norm};
use ballbody::sphere::{make_grid, tangent_frame, Direction, GridScheme};

fn ball_strategy() -> impl Strategy<Value = Body> {
    (
        prop::collection::vec(-0.2..0.2f64, 2),
        0.05..0.95f64,
    )
        .prop_map(|(center, radius)| Body::ball(center, radius).unwrap())
}

fn trig_strategy() -> impl Strategy<Value = Body> {
    (0.3..0.7f64, 2u32..6, -1.0..1.0f64).prop_map(|(a, k, t)| {
        // scale the coefficient so the curvature radius stays in [0.05, 0.95]
        let margin = (a.min(1.0 - a) - 0.05).max(0.0);
        let eps = t * margin / ((k as f64).powi(2) - 1.0);
        Body::trig2d(a, vec![TrigTerm { k, eps }]).unwrap()
    })
}

fn body_strategy() -> impl Strategy<Value = Body> {
    prop_oneof![
        ball_strategy(),
        trig_strategy(),
        (ball_strategy(), trig_strategy(), 0.1..0.9f64).prop_map(|(b, t, w)| {
            Body::minkowski(vec![(w, b), (1.0 - w, t)]).unwrap()
        }),
        trig_strategy().prop_map(|t| c_dual(&t)),
    ]
}

fn vector_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 2).prop_filter("nonzero", |v| norm(v) > 0.1)
}

proptest! {
    #[test]
    fn support_is_positively_homogeneous(body in body_strategy(), x in vector_strategy()) {
        let h = body.support(&x).unwrap();
        for lambda in [0.5, 2.0] {
            let lx: Vec<f64> = x.iter().map(|v| lambda * v).collect();
            let hl = body.support(&lx).unwrap();
            prop_assert!((hl - lambda * h).abs() < 1e-10);
        }
    }

    #[test]
    fn support_is_subadditive(
        body in body_strategy(),
        x in vector_strategy(),
        y in vector_strategy(),
    ) {
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        if norm(&sum) > 0.1 {
            let hs = body.support(&sum).unwrap();
            let hx = body.support(&x).unwrap();
            let hy = body.support(&y).unwrap();
            prop_assert!(hs <= hx + hy + 1e-10);
        }
    }

    #[test]
    fn dual_support_identity(body in body_strategy(), angle in 0.0..std::f64::consts::TAU) {
        let dual = c_dual(&body);
        let u = [angle.cos(), angle.sin()];
        let neg = [-u[0], -u[1]];
        let s = body.support(&u).unwrap() + dual.support(&neg).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn double_dual_support_matches(body in body_strategy(), angle in 0.0..std::f64::consts::TAU) {
        let double = c_dual(&c_dual(&body));
        let u = [angle.cos(), angle.sin()];
        let a = body.support(&u).unwrap();
        let b = double.support(&u).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn contact_points_attain_the_support(body in body_strategy(), angle in 0.0..std::f64::consts::TAU) {
        let u = Direction::from_angle(angle);
        let cp = body.contact_point(&u).unwrap();
        let h = body.support(u.coords()).unwrap();
        prop_assert!((dot(&cp.point, u.coords()) - h).abs() < 1e-9);
        prop_assert!(body.contains(&cp.point, 1e-8));
    }

    #[test]
    fn curvature_duality_on_random_smooth_bodies(
        body in body_strategy(),
        angle in 0.0..std::f64::consts::TAU,
    ) {
        let u = Direction::from_angle(angle);
        let check = curvature_duality_residual(&body, &u).unwrap();
        prop_assert!(check.residual < 1e-9, "residual {}", check.residual);
    }

    #[test]
    fn tangent_frames_are_deterministic_and_orthonormal(
        seed in prop::array::uniform4(-1.0..1.0f64),
        dim in 2usize..6,
    ) {
        let v: Vec<f64> = seed.iter().take(dim).copied().collect();
        if norm(&v) > 0.1 {
            let u = Direction::normalized(&v).unwrap();
            let f1 = tangent_frame(&u);
            let f2 = tangent_frame(&u);
            prop_assert_eq!(&f1, &f2);
            for (i, b) in f1.basis.iter().enumerate() {
                prop_assert!((norm(b) - 1.0).abs() < 1e-12);
                prop_assert!(dot(b, u.coords()).abs() < 1e-12);
                for b2 in &f1.basis[i + 1..] {
                    prop_assert!(dot(b, b2).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn serialization_round_trip_preserves_support(body in body_strategy(), angle in 0.0..std::f64::consts::TAU) {
        let spec = ballbody::BodySpec::from_body(&body);
        let text = serde_json::to_string(&spec).unwrap();
        let back: ballbody::BodySpec = serde_json::from_str(&text).unwrap();
        let body2 = back.into_body().unwrap();
        let u = [angle.cos(), angle.sin()];
        prop_assert!((body.support(&u).unwrap() - body2.support(&u).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn mean_width_complement_on_random_grid_bodies() {
    // deterministic sample of the strategy space, checked on a full grid
    let g = make_grid(2, 2048, GridScheme::UniformAngle2D).unwrap();
    let bodies = [
        Body::ball(vec![0.05, -0.1], 0.3).unwrap(),
        Body::trig2d(0.45, vec![TrigTerm { k: 3, eps: 0.01 }]).unwrap(),
        Body::ball_intersection(vec![vec![-0.4, 0.2], vec![0.5, 0.0], vec![0.0, -0.45]]).unwrap(),
    ];
    for body in &bodies {
        let dual = c_dual(body);
        let m = ballbody::mean_width_half(body, &g).unwrap()
            + ballbody::mean_width_half(&dual, &g).unwrap();
        assert!((m - 1.0).abs() < 1e-10, "{body:?}");
    }
}
