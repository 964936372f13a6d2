use blursr::bench::{
    estimate_edge_offset, localize_point_source, metrics, simulate_edge, PointScene1D,
};
use blursr::forward::{capture_grid, capture_moving, capture_static, ImagingOperator, SensorSpec};
use blursr::motion::{
    occupancy, traj_random_walk, traj_vibration, trajectory_from_csv, trajectory_to_csv, Dwell,
    OccupancyMap, VibrationParams,
};
use blursr::raster::{boxsum, interlace, Image};
use proptest::prelude::*;

fn image(rows: usize, cols: usize) -> impl Strategy<Value = Image> {
    prop::collection::vec(-1.0f64..1.0, rows * cols)
        .prop_map(move |d| Image::new(rows, cols, d).unwrap())
}

fn factor() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 4, 8])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn interlacing_matches_boxsum(j in image(64, 64), f in factor()) {
        let spec = SensorSpec::for_target((64, 64), f).unwrap();
        let h = interlace(&capture_grid(&j, &spec).unwrap(), f).unwrap();
        prop_assert!(h.max_abs_diff(&boxsum(&j, f).unwrap()).unwrap() <= 1e-12);
    }

    #[test]
    fn capture_is_linear(a in image(32, 32), b in image(32, 32), s in -3.0f64..3.0, seed in 0u64..1000) {
        let spec = SensorSpec::for_target((32, 32), 4).unwrap();
        let q = occupancy(&traj_random_walk(30, (32, 32), seed).unwrap(), (32, 32)).unwrap();
        let mut combo = a.clone();
        combo.axpy(s, &b).unwrap();
        let lhs = capture_moving(&combo, &q, &spec).unwrap();
        let mut rhs = capture_moving(&a, &q, &spec).unwrap();
        rhs.axpy(s, &capture_moving(&b, &q, &spec).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
    }

    #[test]
    fn capture_preserves_total_intensity(j in image(32, 32), amp in 0.0f64..10.0) {
        let spec = SensorSpec::for_target((32, 32), 4).unwrap();
        let p = VibrationParams { amp_x: amp, amp_y: 0.8 * amp, ..VibrationParams::default() };
        let q = occupancy(&traj_vibration(&p, p.default_samples()).unwrap(), (32, 32)).unwrap();
        let i = capture_moving(&j, &q, &spec).unwrap();
        prop_assert!((i.sum() - j.sum()).abs() <= 1e-9);
    }

    #[test]
    fn adjoint_identity(x in image(32, 32), y0 in image(8, 8), y1 in image(8, 8), seed in 0u64..500) {
        let spec = SensorSpec::for_target((32, 32), 4).unwrap();
        let q0 = occupancy(&traj_random_walk(40, (32, 32), seed).unwrap(), (32, 32)).unwrap();
        let q1 = OccupancyMap::at_offset(32, 32, 1, 3);
        let op = ImagingOperator::new(&[q0, q1], &spec).unwrap();
        let ax = op.apply(&x).unwrap();
        let ys = [y0, y1];
        let lhs: f64 = ax.iter().zip(&ys).map(|(a, y)| a.dot(y).unwrap()).sum();
        let rhs = x.dot(&op.adjoint(&ys).unwrap()).unwrap();
        let scale = ax.iter().map(|a| a.norm_sq()).sum::<f64>().sqrt()
            * ys.iter().map(|y| y.norm_sq()).sum::<f64>().sqrt();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * scale.max(1e-300));
    }

    #[test]
    fn delta_motion_is_static(j in image(16, 16), k in 0i64..16, l in 0i64..16) {
        let spec = SensorSpec::for_target((16, 16), 4).unwrap();
        let q = OccupancyMap::at_offset(16, 16, k, l);
        prop_assert_eq!(capture_moving(&j, &q, &spec).unwrap(), capture_static(&j, (k, l), &spec).unwrap());
    }

    #[test]
    fn localization_round_trip(k in 1usize..12, frac in 0.001f64..0.999, pitch in 0.1f64..5.0, a in 0.1f64..10.0) {
        let lo = (k as f64 + 0.5) * pitch;
        let t0 = lo + frac * pitch;
        let profile = PointScene1D::new(pitch, t0, a).unwrap().capture(16).unwrap();
        let loc = localize_point_source(&profile, pitch).unwrap();
        prop_assert!((loc.t0 - t0).abs() <= 1e-6 * pitch);
        prop_assert!((loc.intensity - a).abs() <= 1e-9 * a);
    }

    #[test]
    fn edge_round_trip(edge in 2.0f64..8.0, motion in any::<bool>()) {
        let e = estimate_edge_offset(&simulate_edge(edge, 12, motion), 8).unwrap();
        prop_assert!((e.position - edge).abs() <= 1e-9);
    }

    #[test]
    fn trajectory_csv_round_trip(seed in 0u64..1000, n in 1usize..30) {
        let t = traj_random_walk(n, (16, 16), seed).unwrap();
        let back = trajectory_from_csv(trajectory_to_csv(&t).as_bytes(), Dwell::Linear).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn metrics_symmetric(a in image(4, 4), b in image(4, 4)) {
        prop_assert_eq!(metrics(&a, &b).unwrap(), metrics(&b, &a).unwrap());
    }
}
