use approx::assert_relative_eq;
use gapfield::solver::{p_trace, solve};
use gapfield::trace::{
    reflect_about_sphere, reflect_unit_dx, reflect_unit_dy, AxisTrace, Sphere, TraceKind,
};
use gapfield::{Error, GapConfig};

#[test]
fn inverse_cube_at_two() {
    let t = AxisTrace::build(|x| 0.5 / (x * x * x), 1.0, 3.0, 1e-13).unwrap();
    assert!((t.evaluate(2.0).unwrap() - 1.0 / 16.0).abs() <= t.accuracy());
    assert!(matches!(t.evaluate(3.5), Err(Error::OutOfDomain { .. })));
}

#[test]
fn moment_integrals() {
    let one = AxisTrace::constant(1.0, 0.0, 2.0).unwrap();
    assert_relative_eq!(one.moment_integral(1.5).unwrap(), 1.125, max_relative = 1e-14);
    let s = AxisTrace::build(|x| x, 0.0, 1.0, 1e-14).unwrap();
    assert_relative_eq!(s.moment_integral(1.0).unwrap(), 1.0 / 3.0, max_relative = 1e-13);
    assert!(s.moment_integral(2.0).is_err());
}

#[test]
fn derivative_order_is_capped() {
    let t = AxisTrace::build(|x| x.exp(), 0.0, 1.0, 1e-13).unwrap();
    assert!(matches!(t.derivative(5), Err(Error::DerivativeOrder(5))));
    let d4 = t.derivative(4).unwrap();
    assert!((d4.value(0.5) - 0.5f64.exp()).abs() < 1e-8);
}

#[test]
fn p_decreases_near_the_pole() {
    let sol = solve(&GapConfig::y_linear(1e-3)).unwrap();
    let dp = p_trace(&sol).unwrap().derivative(1).unwrap();
    for i in 1..=100 {
        let x = 1.0 + 0.5 * i as f64 / 100.0;
        assert!(dp.value(x) < 0.0, "P' >= 0 at {x}");
    }
}

#[test]
fn image_of_a_uniform_field() {
    for e in [0.1, 0.01] {
        let g = AxisTrace::constant(1.0, -1.0 - e / 2.0, 1.0 + e / 2.0).unwrap();
        let r = reflect_about_sphere(&g, Sphere::B1, e, TraceKind::Dy).unwrap();
        for i in 0..=20 {
            let x = -e / 2.0 + 0.2 * i as f64;
            let exact = 0.5 / (1.0 + e / 2.0 + x).powi(3);
            assert_relative_eq!(r.value(x), exact, max_relative = 1e-10);
        }
    }
}

#[test]
fn unit_reflections_of_constants() {
    let g = AxisTrace::constant(1.0, 0.0, 1.0).unwrap();
    let dy = reflect_unit_dy(&g).unwrap();
    let dx = reflect_unit_dx(&g).unwrap();
    for x in [1.0, 1.7, 2.5, 4.0] {
        assert_relative_eq!(dy.value(x), 0.5 / x.powi(3), max_relative = 1e-12);
        assert_relative_eq!(dx.value(x), -1.0 / x.powi(3), max_relative = 1e-12);
    }
    let short = AxisTrace::constant(1.0, 0.5, 1.0).unwrap();
    assert!(reflect_unit_dy(&short).is_err());
}

#[test]
fn csv_has_header_and_rows() {
    let t = AxisTrace::build(|x| x * x, 0.0, 1.0, 1e-13).unwrap();
    let mut buf = Vec::new();
    t.write_csv(&mut buf, &[0.0, 0.5, 1.0]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    let row: Vec<f64> = lines[2].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[0], 0.5);
    assert!((row[1] - 0.25).abs() < 1e-14);
}
