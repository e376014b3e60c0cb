//! Independent checks of the solver and of the asymptotic statements:
//! reference solutions computed by other routes, a finite-difference
//! residual of `u_t + u_xxx`, and least-squares rate fits.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::airy::{ai_integral_complement, AiryEvalConfig};
use crate::asymptotics::{self, b_n};
use crate::error::{ensure_finite, Error, Result};
use crate::initial_data::{PowerTailFunction, Side};
use crate::quadrature::{integrate, Estimate, Tolerance};
use crate::solver::{eval_u, time_scale, QuadratureConfig, SplitConfig};

const AI_ZERO_50: &str = "0.35502805388781723926006318600418317639797917419918";
const NEG_AI_PRIME_ZERO_50: &str = "0.25881940379280679840518356018920396347909113835493";

/// Fixed-point scale of the oracle: values are integers times `10^-DIGITS`.
const DIGITS: u32 = 80;

/// Largest `|x|` accepted by [`ai_series_oracle`]. The 50-digit constants
/// times the largest series term (about `e^{2|x|^{3/2}/3}`) stay below 1e-23.
pub const SERIES_ORACLE_RANGE: f64 = 20.0;

fn fixed_decimal(s: &str) -> BigInt {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    digits * BigInt::from(10).pow(DIGITS - frac.len() as u32)
}

fn fixed_to_f64(v: &BigInt) -> f64 {
    // The decimal parser rounds correctly.
    format!("{v}e-{DIGITS}").parse().unwrap_or(f64::NAN)
}

/// `(Ai(x), Ai'(x))` from the Maclaurin pair summed in 80-digit fixed-point
/// integer arithmetic with 50-digit values of `Ai(0)` and `Ai'(0)`.
pub fn ai_series_oracle(x: f64) -> Result<(f64, f64)> {
    ensure_finite(x, "x")?;
    if x.abs() > SERIES_ORACLE_RANGE {
        return Err(Error::OutOfValidatedRange(x));
    }
    // x = num / den exactly, with den a power of two.
    let xr = BigRational::from_float(x).expect("finite");
    let (num, den) = (xr.numer().clone(), xr.denom().clone());
    let (num3, den3) = (&num * &num * &num, &den * &den * &den);
    let unit = BigInt::from(10).pow(DIGITS);
    let cutoff = BigInt::from(10).pow(DIGITS - 70);

    // f = Σ a_k x^{3k}, g = Σ b_k x^{3k+1}, and their derivatives.
    let (mut f, mut fp) = (unit.clone(), BigInt::zero());
    let mut g = &unit * &num / &den;
    let mut gp = unit.clone();
    let mut a_term = unit.clone(); // a_k x^{3k}
    let mut b_term = g.clone(); // b_k x^{3k+1}
    let mut ap_term = BigInt::zero(); // 3k a_k x^{3k-1}
    let mut bp_term = unit.clone(); // (3k+1) b_k x^{3k}
    let mut k = 1u64;
    loop {
        let k3 = BigInt::from(3 * k);
        a_term = &a_term * &num3 / (&den3 * &k3 * (&k3 - 1));
        b_term = &b_term * &num3 / (&den3 * &k3 * (&k3 + 1));
        ap_term = if k == 1 {
            &unit * &num * &num / (&den * &den * 2)
        } else {
            &ap_term * &num3 / (&den3 * (&k3 - 3) * (&k3 - 1))
        };
        bp_term = &bp_term * &num3 / (&den3 * &k3 * (&k3 - 2));
        f += &a_term;
        g += &b_term;
        fp += &ap_term;
        gp += &bp_term;
        if k > 3 && a_term.abs() < cutoff && b_term.abs() < cutoff && ap_term.abs() < cutoff {
            break;
        }
        k += 1;
    }
    let c1 = fixed_decimal(AI_ZERO_50);
    let c2 = fixed_decimal(NEG_AI_PRIME_ZERO_50);
    let ai = (&c1 * f - &c2 * g) / &unit;
    let aip = (c1 * fp - c2 * gp) / &unit;
    Ok((fixed_to_f64(&ai), fixed_to_f64(&aip)))
}

/// Reference value with separate quadrature and truncation error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: f64,
    pub quadrature_error: f64,
    pub tail_error: f64,
}

impl OracleValue {
    pub fn error(&self) -> f64 {
        self.quadrature_error + self.tail_error
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, h: f64) -> f64 {
    let n = (((b - a) / h).ceil() as usize).max(1);
    let n = n + n % 2;
    let step = (b - a) / n as f64;
    // One-sided limits at the panel ends, which may be jumps of the data.
    let mut sum = f(a.next_up()) + f(b.next_down());
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * step);
    }
    sum * step / 3.0
}

/// `(3t)^{-1/3} ∫ f(y) Ai((x - y)/(3t)^{1/3}) dy` by composite Simpson on
/// `[-R, R]` (split at the breakpoints of `f`) with one Richardson step.
/// Beyond `±R` the kernel mass is closed through `F` with `f` frozen at
/// `f(±R)`; `tail_error` bounds the effect of that freezing.
pub fn oracle_u_bruteforce(
    f: &PowerTailFunction,
    x: f64,
    t: f64,
    r: f64,
    h: f64,
    cfg: &AiryEvalConfig,
) -> Result<OracleValue> {
    ensure_finite(x, "x")?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if !(r > x.abs() && h > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "need R > |x| and h > 0, got R = {r}, h = {h}"
        )));
    }
    let c = time_scale(t);
    let edge = (x.abs() + r) / c;
    let h_max = 0.1 * c / edge.sqrt().max(1.0);
    if h > h_max {
        return Err(Error::OracleUnreliable(format!(
            "step {h} does not resolve the kernel oscillation (need h <= {h_max:.3e})"
        )));
    }

    let kernel = |y: f64| f.eval(y) * crate::airy::ai_unchecked((x - y) / c, cfg) / c;
    let mut cuts = vec![-r];
    cuts.extend(f.breakpoints().iter().copied().filter(|&b| b > -r && b < r));
    cuts.push(r);
    let composite = |h: f64| -> f64 {
        cuts.windows(2)
            .map(|w| simpson(&kernel, w[0], w[1], h))
            .sum()
    };
    let coarse = composite(h);
    let fine = composite(0.5 * h);
    let central = fine + (fine - coarse) / 15.0;
    let quadrature_error = (fine - coarse).abs() / 15.0;

    // ∫_R^∞ Ai((x-y)/c) dy/c = 1 - F((x-R)/c);  ∫_{-∞}^{-R} = F((x+R)/c)
    let z_plus = (x - r) / c;
    let z_minus = (x + r) / c;
    let mass_plus = 1.0 - ai_integral_complement(z_plus, cfg)?;
    let mass_minus = ai_integral_complement(z_minus, cfg)?;
    let (f_r, f_mr) = (f.eval(r), f.eval(-r));
    let tails = f_r * mass_plus + f_mr * mass_minus;

    // Integration by parts against 1 - F: the frozen-f error is at most the
    // total variation of f beyond R times sup |1 - F| there.
    let envelope = |z: f64| {
        if z < -1.0 {
            PI.powf(-0.5) * z.abs().powf(-0.75)
        } else {
            1.0
        }
    };
    let variation = |side: Side, at: f64| (f.tail_coeffs(side)[0] - at).abs();
    let tail_error = variation(Side::Plus, f_r) * envelope(z_plus)
        + variation(Side::Minus, f_mr) * mass_minus.abs().max(f64::EPSILON);

    Ok(OracleValue {
        value: central + tails,
        quadrature_error,
        tail_error,
    })
}

/// Integrates a complex-valued function over `[a, b]` by splitting it into
/// real and imaginary parts.
fn integrate_complex<G: Fn(f64) -> Complex64>(
    g: G,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<(Estimate, Estimate)> {
    let re = integrate(|k| g(k).re, a, b, breaks, tol)?;
    let im = integrate(|k| g(k).im, a, b, breaks, tol)?;
    Ok((re, im))
}

/// Numerical `f̂(k) = ∫ f(y) e^{-iky} dy` for data without a closed form.
fn numeric_transform(f: &PowerTailFunction) -> Result<impl Fn(f64) -> Complex64 + '_> {
    let mut l = 4.0;
    while f.eval(l).abs().max(f.eval(-l).abs()) > 1e-18 {
        l *= 2.0;
        if l > 1e3 {
            return Err(Error::OracleUnreliable(
                "data does not decay fast enough for a numerical transform".into(),
            ));
        }
    }
    let breaks: Vec<f64> = f.breakpoints().to_vec();
    Ok(move |k: f64| {
        let tol = Tolerance::new(1e-13, 1e-12, 4000);
        let re = integrate(|y| f.eval(y) * (k * y).cos(), -l, l, &breaks, tol);
        let im = integrate(|y| -f.eval(y) * (k * y).sin(), -l, l, &breaks, tol);
        match (re, im) {
            (Ok(re), Ok(im)) => Complex64::new(re.value, im.value),
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    })
}

/// `(1/2π) ∫ f̂(k) e^{i(kx + k³t)} dk` for data with all-zero tails.
///
/// The `k`-axis is cut at the stationary points `k² = -x/(3t)` and then
/// every `π` of phase. The imaginary part is computed and must vanish.
pub fn oracle_u_fourier(f: &PowerTailFunction, x: f64, t: f64) -> Result<f64> {
    ensure_finite(x, "x")?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if !f.has_zero_tails() {
        return Err(Error::InapplicableOracle(format!(
            "`{}` has non-zero tail coefficients",
            f.label()
        )));
    }
    let numeric;
    let transform: &dyn Fn(f64) -> Complex64 = match f.fourier_transform() {
        Some(tr) => tr.as_ref(),
        None => {
            numeric = numeric_transform(f)?;
            &numeric
        }
    };

    let scale = transform(0.0).norm().max(1e-300);
    let mut k_max = 1.0;
    while transform(k_max).norm().max(transform(-k_max).norm()) > 1e-17 * scale {
        k_max *= 1.25;
        if k_max > 1e3 {
            return Err(Error::OracleUnreliable(
                "transform does not decay on |k| <= 1000".into(),
            ));
        }
    }

    let phase = |k: f64| k * x + k * k * k * t;
    let mut breaks = Vec::new();
    if x < 0.0 {
        let ks = (-x / (3.0 * t)).sqrt();
        if ks < k_max {
            breaks.extend([-ks, ks]);
        }
    }
    for sign in [-1.0, 1.0] {
        let mut last = phase(0.0);
        let mut k = 0.0;
        let dk = 1e-3 * k_max;
        while k < k_max {
            k += dk;
            let p = phase(sign * k);
            if (p - last).abs() >= PI {
                breaks.push(sign * k);
                last = p;
            }
        }
    }
    breaks.sort_by(f64::total_cmp);

    let tol = Tolerance::new(1e-13, 1e-12, 20_000);
    let integrand = |k: f64| transform(k) * Complex64::from_polar(1.0, phase(k));
    let (re, im) = integrate_complex(integrand, -k_max, k_max, &breaks, tol)?;
    let (re, im) = (re.value / (2.0 * PI), im.value / (2.0 * PI));
    if im.abs() > 1e-8 {
        return Err(Error::OracleUnreliable(format!(
            "imaginary part {im:e} of a real solution"
        )));
    }
    Ok(re)
}

/// Largest `|η|` accepted by [`oracle_w_direct`].
pub const W_DIRECT_MAX_ETA: f64 = 12.0;
/// Upper limit of the twice-integrated outer integral; the neglected tail
/// is below `3 Θ^{-6}`.
const W_DIRECT_CUTOFF: f64 = 60.0;

/// `(1/π) ∫_0^∞ sin(θ³/3 + ηθ)/θ dθ` computed directly.
///
/// The line is split at `a` (`η^{-1/2}` for `η ≥ 1`, past the stationary
/// point otherwise). `[0, a]` is integrated as is; on `[a, ∞)` two
/// integrations by parts against the phase leave an absolutely convergent
/// integrand of order `θ^{-7}`.
pub fn oracle_w_direct(eta: f64) -> Result<f64> {
    ensure_finite(eta, "eta")?;
    if eta.abs() > W_DIRECT_MAX_ETA {
        return Err(Error::OutOfValidatedRange(eta));
    }
    let a = if eta >= 1.0 {
        eta.powf(-0.5)
    } else {
        (2.0 * (-eta).max(0.0)).sqrt() + 1.0
    };
    let phase = |th: f64| th * th * th / 3.0 + eta * th;
    let dphase = |th: f64| th * th + eta;
    let tol = Tolerance::new(1e-12, 1e-12, 20_000);

    let inner_fn = |th: f64| {
        if th == 0.0 {
            eta
        } else {
            phase(th).sin() / th
        }
    };
    let inner = integrate(inner_fn, 0.0, a, &[], tol)?;

    // v = 1/(θ φ'),  u = v'/φ' = -(3θ² + η)/(θ² φ'³)
    let v = |th: f64| 1.0 / (th * dphase(th));
    let u = |th: f64| -(3.0 * th * th + eta) / (th * th * dphase(th).powi(3));
    let du = |th: f64| {
        let p = dphase(th);
        let q = 3.0 * th * th + eta;
        -(6.0 * th.powi(3) * p - q * (2.0 * th * p + 6.0 * th.powi(3))) / (th.powi(4) * p.powi(4))
    };
    let boundary = v(a) * phase(a).cos() - u(a) * phase(a).sin();

    let mut breaks = Vec::new();
    let mut z = (phase(a) / PI).ceil() * PI;
    while z < phase(W_DIRECT_CUTOFF) {
        breaks.push(phase_inverse_w(z, eta, a, W_DIRECT_CUTOFF));
        z += PI;
    }
    let outer = integrate(
        |th| du(th) * phase(th).sin(),
        a,
        W_DIRECT_CUTOFF,
        &breaks,
        tol,
    )?;

    Ok((inner.value + boundary - outer.value) / PI)
}

/// Solves `θ³/3 + ηθ = z` on `[lo, hi]`, where the phase is increasing.
fn phase_inverse_w(z: f64, eta: f64, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let mut th = 0.5 * (lo + hi);
    for _ in 0..100 {
        let p = th * th * th / 3.0 + eta * th - z;
        if p > 0.0 {
            hi = th;
        } else {
            lo = th;
        }
        let d = th * th + eta;
        let newton = th - p / d;
        th = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo) < 1e-15 * hi || p.abs() < 1e-14 * z.abs().max(1.0) {
            break;
        }
    }
    th
}

/// `max |D_t u + D_xxx u|` over the nodes `xs × ts`, with centred
/// second-order differences of step `dx` (five points) and `dt` (three
/// points) around each node.
pub fn pde_residual(
    f: &PowerTailFunction,
    xs: &[f64],
    ts: &[f64],
    dx: f64,
    dt: f64,
    sc: &SplitConfig,
    qc: &QuadratureConfig,
) -> Result<f64> {
    if xs.is_empty() || ts.is_empty() {
        return Err(Error::Stencil("no nodes given".into()));
    }
    if !(dx > 0.0 && dt > 0.0) {
        return Err(Error::Stencil(format!(
            "steps must be positive, got dx = {dx}, dt = {dt}"
        )));
    }
    if let Some(&t) = ts.iter().find(|&&t| t - dt <= 0.0) {
        return Err(Error::Stencil(format!(
            "t - dt must stay positive, got t = {t}, dt = {dt}"
        )));
    }
    let nodes: Vec<(f64, f64)> = ts
        .iter()
        .flat_map(|&t| xs.iter().map(move |&x| (x, t)))
        .collect();
    let residuals: Vec<Result<f64>> = nodes
        .par_iter()
        .map(|&(x, t)| {
            let u = |x: f64, t: f64| eval_u(f, x, t, sc, qc).map(|e| e.value);
            let d3 = (u(x + 2.0 * dx, t)? - 2.0 * u(x + dx, t)? + 2.0 * u(x - dx, t)?
                - u(x - 2.0 * dx, t)?)
                / (2.0 * dx.powi(3));
            let d1 = (u(x, t + dt)? - u(x, t - dt)?) / (2.0 * dt);
            Ok((d1 + d3).abs())
        })
        .collect();
    let mut worst: f64 = 0.0;
    for r in residuals {
        worst = worst.max(r?);
    }
    Ok(worst)
}

/// Residual decay `sup_η |u - leading|` along a time ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub t_ladder: Vec<f64>,
    pub residual_sup: Vec<f64>,
    /// Slope of `log residual_sup` against `log t`.
    pub fitted_slope: f64,
    /// Exponent `k` of `(ln t)^k` when that regressor is added.
    pub fitted_log_coeff: f64,
    /// 95% least-squares band for `fitted_slope`.
    pub slope_ci: (f64, f64),
    pub eta_window: (f64, f64),
    /// Power of `t` in the fit that includes the `ln t` regressor.
    pub fitted_slope_with_log: f64,
}

/// Ordinary least squares; returns coefficients and their standard errors.
fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let p = rows.first()?.len();
    let n = rows.len();
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..p {
            xty[i] += row[i] * yi;
            for j in 0..p {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    let inv = invert(xtx)?;
    let beta: Vec<f64> = (0..p)
        .map(|i| (0..p).map(|j| inv[i][j] * xty[j]).sum())
        .collect();
    let rss: f64 = rows
        .iter()
        .zip(y)
        .map(|(row, &yi)| {
            let fit: f64 = row.iter().zip(&beta).map(|(a, b)| a * b).sum();
            (yi - fit).powi(2)
        })
        .sum();
    let dof = n.saturating_sub(p).max(1) as f64;
    let s2 = rss / dof;
    let se = (0..p).map(|i| (s2 * inv[i][i]).max(0.0).sqrt()).collect();
    Some((beta, se))
}

/// Gauss-Jordan inverse of a small symmetric positive matrix.
fn invert(mut m: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let d = m[col][col];
        for j in 0..n {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..n {
            if row != col {
                let factor = m[row][col];
                for j in 0..n {
                    m[row][j] -= factor * m[col][j];
                    inv[row][j] -= factor * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

/// Number of `η` samples taken across the window by [`estimate_next_order`].
pub const DEFAULT_ETA_SAMPLES: usize = 21;

/// Fits the decay of `sup_{η ∈ window} |u - leading|` over `t_ladder`.
pub fn estimate_next_order(
    f: &PowerTailFunction,
    t_ladder: &[f64],
    eta_window: (f64, f64),
    eta_samples: usize,
    sc: &SplitConfig,
    qc: &QuadratureConfig,
) -> Result<ConvergenceReport> {
    if t_ladder.len() < 5 {
        return Err(Error::InvalidConfig(format!(
            "the time ladder needs at least 5 points, got {}",
            t_ladder.len()
        )));
    }
    if t_ladder.iter().any(|&t| !(t > 1.0 && t.is_finite())) {
        return Err(Error::InvalidConfig("ladder times must exceed 1".into()));
    }
    let (t_lo, t_hi) = t_ladder
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &t| {
            (lo.min(t), hi.max(t))
        });
    if t_hi / t_lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::InvalidConfig(
            "the time ladder must span at least two decades".into(),
        ));
    }
    if eta_samples < 2 || eta_window.0.is_nan() || eta_window.0 >= eta_window.1 {
        return Err(Error::InvalidConfig("empty eta window".into()));
    }
    if f.tail_coeffs_plus().len() < 2 || f.tail_coeffs_minus().len() < 2 {
        return Err(Error::IncompleteData(
            "tail coefficients up to order 1 are required".into(),
        ));
    }
    let etas: Vec<f64> = (0..eta_samples)
        .map(|i| eta_window.0 + (eta_window.1 - eta_window.0) * i as f64 / (eta_samples - 1) as f64)
        .collect();

    let per_t: Vec<Result<(f64, f64)>> = t_ladder
        .par_iter()
        .map(|&t| {
            let c = time_scale(t);
            let mut sup: f64 = 0.0;
            let mut err: f64 = 0.0;
            for &eta in &etas {
                let x = eta * c;
                let u = eval_u(f, x, t, sc, qc)?;
                let lead = asymptotics::leading(f, x, t, &qc.airy)?;
                sup = sup.max((u.value - lead).abs());
                err = err.max(u.error);
            }
            Ok((sup, err))
        })
        .collect();
    let mut residual_sup = Vec::with_capacity(t_ladder.len());
    let mut worst_error: f64 = 0.0;
    for r in per_t {
        let (sup, err) = r?;
        residual_sup.push(sup);
        worst_error = worst_error.max(err);
    }

    let floor = (100.0 * worst_error).max(1e-11);
    let smallest = residual_sup.iter().copied().fold(f64::INFINITY, f64::min);
    if smallest < floor {
        return Err(Error::SignalTooSmall {
            max_residual: residual_sup.iter().copied().fold(0.0, f64::max),
            floor,
        });
    }

    let y: Vec<f64> = residual_sup.iter().map(|r| r.ln()).collect();
    let plain: Vec<Vec<f64>> = t_ladder.iter().map(|&t| vec![1.0, t.ln()]).collect();
    let with_log: Vec<Vec<f64>> = t_ladder
        .iter()
        .map(|&t| vec![1.0, t.ln(), t.ln().ln()])
        .collect();
    let singular = || Error::InvalidConfig("degenerate time ladder".into());
    let (beta, se) = least_squares(&plain, &y).ok_or_else(singular)?;
    let (beta_log, _) = least_squares(&with_log, &y).ok_or_else(singular)?;

    let dof = (t_ladder.len() - 2) as f64;
    let q = StudentsT::new(0.0, 1.0, dof)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(f64::NAN);
    let slope = beta[1];
    Ok(ConvergenceReport {
        t_ladder: t_ladder.to_vec(),
        residual_sup,
        fitted_slope: slope,
        fitted_log_coeff: beta_log[2],
        slope_ci: (slope - q * se[1], slope + q * se[1]),
        eta_window,
        fitted_slope_with_log: beta_log[1],
    })
}

/// Log-log growth of `|B_n|` on one side and one sign of `η`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub n: usize,
    pub side_plus: bool,
    pub eta_positive: bool,
    pub slope: f64,
}

/// Slopes of `log max|B_n|` against `log|η|` over `|η| ∈ [lo, hi]`, for both
/// sides and both signs of `η`. `B_n` oscillates for `η < 0`, so maxima over
/// `bins` logarithmic bins are fitted rather than raw values.
pub fn bn_growth(
    n: usize,
    range: (f64, f64),
    bins: usize,
    per_bin: usize,
    cfg: &AiryEvalConfig,
) -> Result<Vec<GrowthFit>> {
    if !(range.0 > 0.0 && range.1 > range.0) || bins < 2 || per_bin == 0 {
        return Err(Error::InvalidConfig("invalid growth sampling".into()));
    }
    let ratio = (range.1 / range.0).ln();
    let mut fits = Vec::new();
    for side in [Side::Minus, Side::Plus] {
        for positive in [false, true] {
            let sign = if positive { 1.0 } else { -1.0 };
            let maxima: Vec<Result<(f64, f64)>> = (0..bins)
                .into_par_iter()
                .map(|b| {
                    let lo = range.0 * (ratio * b as f64 / bins as f64).exp();
                    let hi = range.0 * (ratio * (b + 1) as f64 / bins as f64).exp();
                    let mut m: f64 = 0.0;
                    for i in 0..=per_bin {
                        let e = lo + (hi - lo) * i as f64 / per_bin as f64;
                        m = m.max(b_n(n, sign * e, side, cfg)?.abs());
                    }
                    Ok(((lo * hi).sqrt().ln(), m))
                })
                .collect();
            let mut rows = Vec::new();
            let mut y = Vec::new();
            for r in maxima {
                let (le, m) = r?;
                rows.push(vec![1.0, le]);
                y.push(m.max(f64::MIN_POSITIVE).ln());
            }
            let (beta, _) = least_squares(&rows, &y)
                .ok_or_else(|| Error::InvalidConfig("degenerate bins".into()))?;
            fits.push(GrowthFit {
                n,
                side_plus: side == Side::Plus,
                eta_positive: positive,
                slope: beta[1],
            });
        }
    }
    Ok(fits)
}

/// Largest of the fitted growth slopes.
pub fn max_growth_slope(fits: &[GrowthFit]) -> f64 {
    fits.iter()
        .map(|g| g.slope)
        .fold(f64::NEG_INFINITY, f64::max)
}
