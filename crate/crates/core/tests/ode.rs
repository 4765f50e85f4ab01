use approx::assert_relative_eq;
use gapfield::ode::{
    apply_operator, compute_g, euler_inverse, eval_homogeneous, fit_decomposition, fit_exponent,
    homogeneous_trace, integral_mass, local_slope, FitOptions, HomogeneousKind,
};
use gapfield::oracle::quad;
use gapfield::solver::checks::log_grid;
use gapfield::solver::{f_trace, p_trace, solve};
use gapfield::trace::{AxisTrace, BuildOptions, Coordinate};
use gapfield::GapConfig;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn log_opts() -> BuildOptions {
    BuildOptions {
        coord: Coordinate::Log { anchor: 0.0 },
        ..Default::default()
    }
}

#[test]
fn series_reference_values() {
    // 40-digit sums of the same series
    let a = eval_homogeneous(HomogeneousKind::Alpha, 1e-4, 0.1).unwrap();
    assert_relative_eq!(a, 3.830_853_636_075_897, max_relative = 1e-13);
    let b = eval_homogeneous(HomogeneousKind::Beta, 1e-4, 0.2).unwrap();
    assert_relative_eq!(b, 244.415_879_162_966_1, max_relative = 1e-13);
}

#[test]
fn spectral_residual_of_homogeneous_traces() {
    let e: f64 = 1e-6;
    let lo = 1.5 * 10.0 * e.sqrt();
    for kind in [HomogeneousKind::Alpha, HomogeneousKind::Beta] {
        let f = homogeneous_trace(kind, e, lo, 0.1).unwrap();
        let r = apply_operator(&f, e, lo, 0.1).unwrap();
        let (d1, d2) = (f.derivative(1).unwrap(), f.derivative(2).unwrap());
        for t in log_grid(lo, 0.1, 30) {
            // relative to the size of the terms that cancel
            let scale = (t * t - e) * d2.value(t).abs() + 5.0 * t * d1.value(t).abs() + 2.0 * f.value(t);
            assert!(r.value(t).abs() <= 1e-8 * scale, "{kind:?} {t}");
        }
    }
}

#[test]
fn beta_over_alpha() {
    let t: f64 = 0.2;
    for e in [1e-4f64, 1e-5, 1e-6] {
        let a = eval_homogeneous(HomogeneousKind::Alpha, e, t).unwrap();
        let b = eval_homogeneous(HomogeneousKind::Beta, e, t).unwrap();
        let r = b / a * t.powf(2.0 * SQRT2);
        assert!(a > 0.0 && b > 0.0);
        assert!((r - 1.0).abs() <= 10.0 * e / (t * t));
    }
}

#[test]
fn g_of_a_constant() {
    // L[1] = 2
    let e: f64 = 1e-4;
    let one = AxisTrace::constant(1.0, 0.0, 0.4).unwrap();
    let g = compute_g(&one, e, 0.3).unwrap();
    for t in [0.1, 0.2, 0.3] {
        assert_relative_eq!(g.g.value(t), 2.0 + (1.0 + t).powi(-3), max_relative = 1e-10);
    }
    assert_relative_eq!(g.relative_size, (2.0 + 1.1f64.powi(-3)) / 0.1, max_relative = 1e-6);
}

#[test]
fn g_relative_size_is_stable() {
    let size = |e: f64| {
        let f = f_trace(&solve(&GapConfig::y_linear(e)).unwrap()).unwrap();
        compute_g(&f, e, 0.3).unwrap().relative_size
    };
    let k = size(1e-4);
    let k5 = size(1e-5);
    assert!(k5 <= 2.0 * k, "{k} {k5}");
    let f = f_trace(&solve(&GapConfig::y_linear(1e-4)).unwrap()).unwrap();
    let g = compute_g(&f, 1e-4, 0.3).unwrap();
    assert!(g.g.value(0.2).abs() < 0.2 * f.value(0.1));
    assert!(compute_g(&f, 1e-3, 0.3).is_err());
}

#[test]
fn euler_inverse_against_nested_quadrature() {
    let l = 0.05;
    let g = AxisTrace::build_with(|_| -1.0, l, 0.3, &log_opts()).unwrap();
    let fp = euler_inverse(&g, l).unwrap();
    for t in [0.08, 0.2, 0.3] {
        let inner = |w: f64| quad::adaptive(&|s| -s.powf(1.0 - SQRT2), l, w, 0.0, 1e-14).unwrap();
        let outer = quad::adaptive(&|w| w.powf(2.0 * SQRT2 - 1.0) * inner(w), l, t, 0.0, 1e-13).unwrap();
        let oracle = t.powf(-2.0 - SQRT2) * outer;
        assert_relative_eq!(fp.value(t), oracle, max_relative = 1e-8);
    }
    // 40-digit nested quadrature
    assert_relative_eq!(fp.value(0.2), -0.232_971_446_743_893_3, max_relative = 1e-10);
}

#[test]
fn decomposition_of_the_solution() {
    let mut ca = Vec::new();
    let mut m = Vec::new();
    for e in [1e-4, 1e-5] {
        let f = f_trace(&solve(&GapConfig::y_linear(e)).unwrap()).unwrap();
        let d = fit_decomposition(&f, e, &FitOptions::default()).unwrap();
        assert!(d.residual_norm <= 1e-6);
        assert!(d.c_alpha > 0.0);
        let edge = 10.0 * e.sqrt();
        assert!(d.c_beta.abs() * edge.powf(-2.0 - SQRT2) < d.c_alpha * edge.powf(-2.0 + SQRT2));
        // the equation closes: f_p + fitted homogeneous part reproduces f
        let (w0, w1) = d.window;
        for t in log_grid(w0, w1, 10) {
            let fa = eval_homogeneous(HomogeneousKind::Alpha, e, t).unwrap();
            let fb = eval_homogeneous(HomogeneousKind::Beta, e, t).unwrap();
            let model = d.f_p.value(t) + d.c_alpha * fa + d.c_beta * fb;
            assert!((model - f.value(t)).abs() <= 1e-6 * f.value(t));
        }
        ca.push(d.c_alpha);
        m.push((d.m_fit, d.m_fit_prime));
    }
    assert!(ca[1] / ca[0] <= 2.0 && ca[0] / ca[1] <= 2.0);
    assert!(m[1].0 <= 2.0 * m[0].0 && m[1].1 <= 2.0 * m[0].1, "{m:?}");
}

#[test]
fn empty_window_is_rejected() {
    let f = f_trace(&solve(&GapConfig::y_linear(1e-3)).unwrap()).unwrap();
    assert!(fit_decomposition(&f, 1e-3, &FitOptions::default()).is_err());
}

#[test]
fn p1_exponent() {
    let pts: Vec<(f64, f64)> = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5]
        .iter()
        .map(|&e| {
            let sol = solve(&GapConfig::y_linear(e)).unwrap();
            (e, p_trace(&sol).unwrap().value(1.0))
        })
        .collect();
    let fit = fit_exponent(&pts).unwrap();
    assert!((fit.slope + 0.292_893).abs() <= 0.03, "{}", fit.slope);
}

#[test]
fn alpha_slope() {
    let fa = homogeneous_trace(HomogeneousKind::Alpha, 1e-6, 0.01, 0.3).unwrap();
    let s = local_slope(&fa, 0.05).unwrap();
    assert!((s + 2.0 - SQRT2).abs() <= 0.02, "{s}");
}

#[test]
fn alpha_is_close_to_its_power_law() {
    let t: f64 = 0.1;
    let v = eval_homogeneous(HomogeneousKind::Alpha, 1e-6, t).unwrap();
    assert!((v / t.powf(-2.0 + SQRT2) - 1.0).abs() <= 1e-3);
}

#[test]
fn integral_mass_stays_positive() {
    let mut mass = Vec::new();
    for e in [1e-3, 1e-4, 1e-5] {
        let f = f_trace(&solve(&GapConfig::y_linear(e)).unwrap()).unwrap();
        mass.push(integral_mass(&f, e, 1.0, 0.1).unwrap());
    }
    // bounded below, so the smallest gap never loses mass
    assert!(mass[0] > 0.0, "{mass:?}");
    assert!(mass.windows(2).all(|w| w[1] >= w[0]), "{mass:?}");
}
