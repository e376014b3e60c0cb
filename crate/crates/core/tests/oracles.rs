//! The solver against references computed by unrelated routes.

use kdv_airy::airy::{leading_profile_w, AiryEvalConfig};
use kdv_airy::initial_data::{make_builtin, Builtin};
use kdv_airy::solver::{eta, eval_u, sample, time_scale, QuadratureConfig, SplitConfig};
use kdv_airy::verify::{oracle_u_bruteforce, oracle_u_fourier};
use kdv_airy::Error;

#[test]
fn heavy_tailed_data_against_direct_quadrature() {
    let (sc, qc) = (SplitConfig::default(), QuadratureConfig::default());
    let cfg = AiryEvalConfig::default();
    for (name, x, t) in [
        ("atan", 1.0, 10.0),
        ("sigmoid_alg", -2.0, 3.0),
        ("rational", 0.5, 2.0),
    ] {
        let f = make_builtin(name, &[]).unwrap();
        let u = eval_u(&f, x, t, &sc, &qc).unwrap();
        let o = oracle_u_bruteforce(&f, x, t, 1000.0, 0.004, &cfg).unwrap();
        let diff = (u.value - o.value).abs();
        assert!(
            diff <= u.error + o.error(),
            "{name}: {diff:e} vs {:e}",
            u.error + o.error()
        );
    }
}

#[test]
fn residual_of_sigmoid_at_large_time() {
    // The residual that the decay fit sees, confirmed by direct quadrature.
    let (sc, qc) = (SplitConfig::default(), QuadratureConfig::default());
    let cfg = AiryEvalConfig::default();
    let f = make_builtin("sigmoid_alg", &[]).unwrap();
    let t = 1e3;
    let x = 0.5 * time_scale(t);
    let s = sample(&f, x, t, &sc, &qc).unwrap();
    let o = oracle_u_bruteforce(&f, x, t, 1e4, 0.04, &cfg).unwrap();
    assert!((s.u - o.value).abs() <= s.error_estimate + o.error());
    assert!(
        o.error() < 1e-2 * s.residual.abs(),
        "{:e} vs {:e}",
        o.error(),
        s.residual
    );
}

#[test]
fn fourier_oracle_needs_decaying_data() {
    let f = make_builtin("rational", &[]).unwrap();
    assert!(matches!(
        oracle_u_fourier(&f, 0.0, 1.0),
        Err(Error::InapplicableOracle(_))
    ));
    let g = make_builtin("gaussian", &[]).unwrap();
    let (sc, qc) = (SplitConfig::default(), QuadratureConfig::default());
    for (x, t) in [(-12.0, 0.2), (0.3, 30.0), (7.0, 2.0)] {
        let u = eval_u(&g, x, t, &sc, &qc).unwrap().value;
        let o = oracle_u_fourier(&g, x, t).unwrap();
        assert!((u - o).abs() < 1e-10, "({x}, {t}): {u} vs {o}");
    }
}

#[test]
fn oracle_triangle_on_spot_grid() {
    let (sc, qc) = (SplitConfig::default(), QuadratureConfig::default());
    let cfg = AiryEvalConfig::default();
    let r: f64 = 300.0;
    for kind in Builtin::ALL {
        let f = make_builtin(kind.name(), &[]).unwrap();
        for t in [0.5, 2.0, 8.0] {
            let c = time_scale(t);
            for x in [-4.0f64, -2.0, 0.0, 2.0, 4.0] {
                let h = 0.09 * c / ((r + x.abs()) / c).sqrt().max(1.0);
                let u = eval_u(&f, x, t, &sc, &qc).unwrap();
                let o = oracle_u_bruteforce(&f, x, t, r, h, &cfg).unwrap();
                let diff = (u.value - o.value).abs();
                assert!(
                    diff <= u.error + o.error(),
                    "{} at ({x}, {t}): {diff:e} vs {:e}",
                    kind.name(),
                    u.error + o.error()
                );
            }
        }
    }
}

#[test]
fn fourier_oracle_conserves_mass() {
    // ∫ e^{-x²} = √π; what leaves [-8, 8] through the dispersive tail is
    // bounded by the envelope of 1 - F at -8/c.
    let g = make_builtin("gaussian", &[]).unwrap();
    let h = 0.02;
    let mass: f64 = (0..=800)
        .map(|i| {
            let x = -8.0 + h * i as f64;
            let w = if i == 0 || i == 800 { 0.5 } else { 1.0 };
            w * oracle_u_fourier(&g, x, 0.2).unwrap()
        })
        .sum::<f64>()
        * h;
    let leak = (8.0 / time_scale(0.2)).powf(-0.75);
    assert!((mass - std::f64::consts::PI.sqrt()).abs() < leak, "{mass}");
}

#[test]
fn direct_quadrature_reproduces_step_solution() {
    let cfg = AiryEvalConfig::default();
    let f = make_builtin("step", &[]).unwrap();
    for (x, t) in [(-4.0, 0.5), (1.5, 3.0), (0.0, 1.0)] {
        let exact = 0.5 + leading_profile_w(eta(x, t), &cfg).unwrap();
        let o = oracle_u_bruteforce(&f, x, t, 200.0, 0.003, &cfg).unwrap();
        assert!(
            (o.value - exact).abs() <= 1e-6,
            "({x}, {t}): {}",
            o.value - exact
        );
    }
}
