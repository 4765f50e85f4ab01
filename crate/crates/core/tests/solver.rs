use approx::assert_relative_eq;
use gapfield::geometry::KelvinGeometry;
use gapfield::solver::checks::{
    chain_sides, derivative_ratio_constants, fundamental_equation_residual_of,
    gamma_inequality, linear_grid, p_extended, FunctionalEquation,
};
use gapfield::solver::{
    dx_series, f_trace, gradient_on_segment, p_trace, segment_grid, solve, solve_with_depth,
};
use gapfield::{AxisTrace, Error, GapConfig};

#[test]
fn mirror_symmetry() {
    let sol = solve(&GapConfig::y_linear(1e-3)).unwrap();
    let acc = sol.rb1_dy.accuracy().max(sol.rb2_dy.accuracy());
    for x in linear_grid(-5e-4, 5e-4, 41) {
        let d = (sol.rb1_dy.value(x) - sol.rb2_dy.value(-x)).abs();
        assert!(d <= 2.0 * acc + 1e-13, "{x}: {d}");
    }
}

#[test]
fn partial_sums_increase() {
    let sol = solve(&GapConfig::y_linear(1e-3)).unwrap();
    assert!(sol.partial_sums_at_0.len() > 10);
    for w in sol.partial_sums_at_0.windows(2) {
        assert!(w[1] >= w[0]);
    }
    let gy = gradient_on_segment(&sol, 0.0).unwrap().gy;
    assert!((gy - sol.partial_sums_at_0.last().unwrap()).abs() <= 1e-12 * gy);
}

#[test]
fn f_and_p_agree_at_the_pole() {
    let e = 1e-3;
    let sol = solve(&GapConfig::y_linear(e)).unwrap();
    let p1 = p_trace(&sol).unwrap().value(1.0);
    assert_relative_eq!(f_trace(&sol).unwrap().value(0.0), p1, max_relative = 1e-13);
    assert_relative_eq!(sol.rb1_dy.value(-e / 2.0), p1, max_relative = 1e-13);
}

#[test]
fn p_at_the_pole_reference() {
    // direct spectral collocation of the functional equation
    let sol = solve(&GapConfig::y_linear(1e-2)).unwrap();
    let p1 = p_trace(&sol).unwrap().value(1.0);
    assert_relative_eq!(p1, 2.138_349_883_700_69, max_relative = 1e-9);
}

#[test]
fn p_vanishes_far_away() {
    let sol = solve(&GapConfig::y_linear(1e-2)).unwrap();
    let far = p_extended(&sol, 1e4).unwrap();
    assert!(far.abs() < 10.0 * sol.config.tol, "{far}");
    let near = p_extended(&sol, 3.0).unwrap();
    assert_relative_eq!(near, p_trace(&sol).unwrap().value(3.0), max_relative = 1e-9);
}

#[test]
fn functional_equation_at_the_fixed_point() {
    let e = 1e-2;
    let sol = solve(&GapConfig::y_linear(e)).unwrap();
    let p = p_trace(&sol).unwrap();
    let eq = FunctionalEquation::new(&p, e).unwrap();
    let p2 = KelvinGeometry::new(e).unwrap().p2;
    let r = eq.residual(p2);
    assert!(r.abs() <= 5.0 * sol.tail_bound);
    for dx in [-1e-6, 1e-6] {
        assert!((eq.residual(p2 + dx) - r).abs() <= 5.0 * sol.tail_bound);
    }
}

#[test]
fn shifted_trace_breaks_the_equation() {
    let e = 1e-2;
    let sol = solve(&GapConfig::y_linear(e)).unwrap();
    let bad = p_trace(&sol).unwrap().plus_constant(0.1);
    let r = fundamental_equation_residual_of(&bad, e, &linear_grid(1.0, 1.5, 50)).unwrap();
    assert!(r >= 0.05, "{r}");
    assert!(fundamental_equation_residual_of(&bad, e, &[0.9]).is_err());
}

#[test]
fn shortest_chain_is_the_equation_at_one() {
    let e = 1e-3;
    let sol = solve(&GapConfig::y_linear(e)).unwrap();
    let p = p_trace(&sol).unwrap();
    let (lhs, rhs) = chain_sides(&p, e, 1).unwrap();
    let eq = FunctionalEquation::new(&p, e).unwrap();
    assert!(((lhs - rhs) + eq.residual(1.0)).abs() < 1e-13);
    assert!(chain_sides(&p, e, 0).is_err());
}

#[test]
fn comparison_with_a_scaled_linear_field() {
    // H = y + 0.1·x has |∂_y H| <= 2 near the gap
    let e = 1e-3;
    let (lo, hi) = (-1.0 - e / 2.0, 1.0 + e / 2.0);
    let cfg = GapConfig::custom(
        e,
        AxisTrace::constant(1.0, lo, hi).unwrap(),
        AxisTrace::constant(0.1, lo, hi).unwrap(),
    );
    let mixed = solve(&cfg).unwrap();
    let linear = solve(&GapConfig::y_linear(e)).unwrap();
    for x in segment_grid(e, 21) {
        let a = gradient_on_segment(&mixed, x).unwrap();
        let b = gradient_on_segment(&linear, x).unwrap();
        assert!(a.gy.abs() <= 2.0 * b.gy);
        assert!(a.gz.is_none());
    }
}

#[test]
fn derivative_ratios_stay_bounded() {
    let k0 = derivative_ratio_constants(&solve(&GapConfig::y_linear(1e-2)).unwrap(), 60).unwrap();
    for e in [1e-3, 1e-4] {
        let k = derivative_ratio_constants(&solve(&GapConfig::y_linear(e)).unwrap(), 60).unwrap();
        for n in 0..4 {
            assert!(k[n] <= 2.0 * k0[n], "n={} eps={e}: {} vs {}", n + 1, k[n], k0[n]);
        }
    }
}

#[test]
fn gamma_range() {
    let sol = solve(&GapConfig::y_linear(1e-4)).unwrap();
    let g = gamma_inequality(&sol, 60).unwrap().unwrap();
    assert!(g.pass && g.min_relative > 0.0);
    let wide = solve(&GapConfig::y_linear(0.01)).unwrap();
    assert!(gamma_inequality(&wide, 10).unwrap().is_none());
}

#[test]
fn depth_cap_is_reported() {
    let cfg = GapConfig::y_linear(1e-3).with_max_depth(5);
    assert!(matches!(solve(&cfg), Err(Error::DepthExceeded { .. })));
    let sol = solve_with_depth(&GapConfig::y_linear(1e-3), 5).unwrap();
    assert_eq!(sol.depth_used, 5);
}

#[test]
fn x_field_gradient() {
    let e = 4e-3;
    let sol = solve(&GapConfig::x_linear(e)).unwrap();
    for x in segment_grid(e, 11) {
        let g = gradient_on_segment(&sol, x).unwrap();
        assert_eq!(g.gy, 0.0);
        assert!(g.gx.is_finite() && g.gx.abs() <= 1.0);
    }
    assert!(gradient_on_segment(&sol, e).is_err());
    let (total, terms) = dx_series(&GapConfig::y_linear(e), 0.0).unwrap();
    assert_eq!(total, 0.0);
    assert!(!terms.is_empty());
}
