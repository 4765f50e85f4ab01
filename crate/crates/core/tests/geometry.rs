use approx::assert_relative_eq;
use gapfield::geometry::{fixed_points, image_chains, kelvin_map_r1, kelvin_map_r2, x_sequence};

// reference values below come from 40-digit evaluations

#[test]
fn p2_reference_value() {
    let g = fixed_points(0.01_f64).unwrap();
    assert_relative_eq!(g.p2, 1.105_124_921_972_503_9, max_relative = 1e-15);
    assert_relative_eq!(g.p1 * g.p2, 1.0, epsilon = 1e-13);
    assert_relative_eq!(g.p1 + g.p2, 2.01, epsilon = 1e-13);
}

#[test]
fn r1_reference_value() {
    let r = kelvin_map_r1(0.005_f64, 0.01).unwrap();
    assert_relative_eq!(r, -0.014_900_990_099_009_901, max_relative = 1e-13);
}

#[test]
fn sequence_reference_values() {
    let g = fixed_points(1e-4_f64).unwrap();
    assert_relative_eq!(
        x_sequence(&g, 50).unwrap(),
        1.004_552_430_123_486_4,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        x_sequence(&g, 400).unwrap(),
        1.010_043_213_492_731,
        max_relative = 1e-13
    );
    assert_eq!(x_sequence(&g, 1).unwrap(), 1.0);
    assert_relative_eq!(x_sequence(&g, 2).unwrap(), 1.0001, max_relative = 1e-15);
}

#[test]
fn sequence_stays_below_upper_fixed_point() {
    let g = fixed_points(1e-3_f64).unwrap();
    let mut prev = 0.0;
    for n in 1..2000 {
        let x = g.x(n);
        // strict until the iterates reach p₂ in double precision
        if n <= 60 {
            assert!(x > prev && x < g.p2);
        } else {
            assert!(x >= prev && x <= g.p2);
        }
        prev = x;
    }
    assert!((g.x(100_000) - g.p2).abs() < 1e-12);
}

#[test]
fn maps_are_mirror_images() {
    for x in [-0.004, 0.0, 0.003, 0.005] {
        let a = kelvin_map_r1(x, 0.01_f64).unwrap();
        let b = kelvin_map_r2(-x, 0.01_f64).unwrap();
        assert_relative_eq!(a, -b, epsilon = 1e-15);
    }
}

#[test]
fn chains_from_off_centre_points() {
    let e = 1e-3_f64;
    let ch = image_chains(0.3 * e, e, 100).unwrap();
    for (a, b) in ch.a.iter().zip(&ch.b) {
        assert!(*a > 0.0 && *b > 0.0);
        assert!(*a <= 2.0 * e.sqrt() && *b <= 2.0 * e.sqrt());
    }
    // the first image in B₂ of a point right of centre is closer to the gap
    assert!(ch.a[0] < ch.b[0]);
}
