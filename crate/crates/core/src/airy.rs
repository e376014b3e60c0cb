//! Airy function of the first kind on the real line.
//!
//! `Ai` is evaluated from convergent power series near the origin (the
//! Maclaurin pair, re-centred at fixed nodes further out) and from the
//! large-argument expansions beyond the switch radius.
//! Derivatives come from the Airy equation `Ai'' = x Ai`.
//!
//! The complementary integral `F(z) = ∫_z^∞ Ai` and the transition profile
//! `W(z) = 1/2 - F(z)` are built on top of these by quadrature.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{ensure_finite, Error, Result};
use crate::oscillatory;
use crate::quadrature::{integrate, Tolerance};

/// Ai(0) = 3^{-2/3} / Γ(2/3).
#[allow(clippy::excessive_precision)]
pub const AI_ZERO: f64 = 0.355_028_053_887_817_239_260_063_186_004_183;
/// Ai'(0) = -3^{-1/3} / Γ(1/3).
#[allow(clippy::excessive_precision)]
pub const AI_PRIME_ZERO: f64 = -0.258_819_403_792_806_798_405_183_560_189_204;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Below this argument `F` is closed with the oscillatory tail sum rather
/// than direct quadrature from 0.
const F_OSCILLATORY_SWITCH: f64 = -12.0;

/// Away from the origin the convergent series is re-centred at fixed nodes:
/// the Maclaurin sum loses digits to cancellation beyond `x ≈ -4` and
/// `x ≈ 1`. Negative nodes are stepped outward from the Maclaurin value at
/// `-4`; positive nodes are stepped inward from the expansion at `10`, the
/// direction in which the recessive solution `Ai` is stable.
struct NodeTable {
    first: f64,
    step: f64,
    count: usize,
}

const NEGATIVE_NODES: NodeTable = NodeTable {
    first: -4.0,
    step: -0.5,
    count: 17,
};
const POSITIVE_NODES: NodeTable = NodeTable {
    first: 10.0,
    step: -0.5,
    count: 19,
};
const TAYLOR_TERMS: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct AiryEvalConfig {
    /// `|x|` above which the asymptotic expansions replace the convergent
    /// series.
    pub series_switch_radius: f64,
    /// Cap on the number of terms taken from either series.
    pub max_series_terms: usize,
    pub abs_tol: f64,
    /// Highest derivative order accepted by [`ai_deriv`].
    pub max_deriv_order: usize,
}

impl Default for AiryEvalConfig {
    fn default() -> Self {
        Self {
            series_switch_radius: 8.0,
            max_series_terms: 90,
            abs_tol: 1e-10,
            max_deriv_order: 12,
        }
    }
}

impl AiryEvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_switch_radius > 0.0 && self.series_switch_radius.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "series_switch_radius must be positive, got {}",
                self.series_switch_radius
            )));
        }
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_series_terms == 0 {
            return Err(Error::InvalidConfig(
                "max_series_terms must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn quad_tolerance(&self) -> Tolerance {
        Tolerance::new(1e-2 * self.abs_tol, 1e-13, 4000)
    }
}

/// Which expansion is used to evaluate `Ai`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pathway {
    /// Maclaurin series, re-centred at tabulated nodes on `[-12, -4]` and
    /// `[1, 10]`.
    Convergent,
    Asymptotic,
}

/// `(Ai(x), Ai'(x))` from the Maclaurin pair `Ai = Ai(0) f + Ai'(0) g`.
fn maclaurin_pair(x: f64, max_terms: usize) -> (f64, f64) {
    let x2 = x * x;
    let x3 = x2 * x;
    // f = Σ a_k x^{3k},  g = Σ b_k x^{3k+1};  p tracks x^{3(k-1)}.
    let (mut f, mut fp) = (1.0, 0.0);
    let (mut g, mut gp) = (x, 1.0);
    let (mut a, mut b) = (1.0, 1.0);
    let mut p = 1.0;
    for k in 1..=max_terms {
        let k3 = (3 * k) as f64;
        a /= k3 * (k3 - 1.0);
        b /= (k3 + 1.0) * k3;
        let tf = a * p * x3;
        let tg = b * p * x3 * x;
        f += tf;
        g += tg;
        fp += a * k3 * p * x2;
        gp += b * (k3 + 1.0) * p * x3;
        p *= x3;
        if tf.abs() <= 1e-18 * f.abs().max(1.0) && tg.abs() <= 1e-18 * g.abs().max(1.0) {
            break;
        }
    }
    (
        AI_ZERO * f + AI_PRIME_ZERO * g,
        AI_ZERO * fp + AI_PRIME_ZERO * gp,
    )
}

/// Taylor expansion of the Airy equation solution with `(y, y')(x0) = (a0, a1)`,
/// evaluated at `x0 + h`.
fn taylor_step(x0: f64, a0: f64, a1: f64, h: f64) -> (f64, f64) {
    // c_{k+2} = (x0 c_k + c_{k-1}) / ((k+2)(k+1))
    let (mut cm1, mut c0, mut c1) = (0.0, a0, a1);
    let (mut val, mut der) = (a0 + a1 * h, a1);
    let mut hk = h; // h^{k+1} for the newest coefficient c_{k+1}
    let mut small = 0;
    for k in 0..TAYLOR_TERMS {
        let kf = k as f64;
        let c2 = (x0 * c0 + cm1) / ((kf + 2.0) * (kf + 1.0));
        der += (kf + 2.0) * c2 * hk;
        hk *= h;
        let term = c2 * hk;
        val += term;
        (cm1, c0, c1) = (c0, c1, c2);
        if term.abs() <= 1e-19 * val.abs().max(1e-3) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

impl NodeTable {
    fn node(&self, j: usize) -> f64 {
        self.first + self.step * j as f64
    }

    fn values(&self, seed: (f64, f64)) -> Vec<(f64, f64)> {
        let mut v = Vec::with_capacity(self.count);
        v.push(seed);
        for j in 1..self.count {
            let (a0, a1) = v[j - 1];
            v.push(taylor_step(self.node(j - 1), a0, a1, self.step));
        }
        v
    }

    /// Index of the node nearest to `x`, if `x` is within half a step of
    /// the table.
    fn nearest(&self, x: f64) -> Option<usize> {
        let r = (x - self.first) / self.step;
        (r > -0.5 && r < self.count as f64 - 0.5).then(|| (r.round() as usize).min(self.count - 1))
    }
}

/// `(Ai, Ai')` at each node of the negative and positive tables.
type NodeValues = (Vec<(f64, f64)>, Vec<(f64, f64)>);

fn node_values() -> &'static NodeValues {
    static VALUES: OnceLock<NodeValues> = OnceLock::new();
    VALUES.get_or_init(|| {
        let neg = NEGATIVE_NODES.values(maclaurin_pair(NEGATIVE_NODES.first, 200));
        let pos = POSITIVE_NODES.values(asymptotic_pair(POSITIVE_NODES.first, 200));
        (neg, pos)
    })
}

fn convergent_pair(x: f64, max_terms: usize) -> (f64, f64) {
    let (neg, pos) = node_values();
    for (table, values) in [(&NEGATIVE_NODES, neg), (&POSITIVE_NODES, pos)] {
        if let Some(j) = table.nearest(x) {
            let x0 = table.node(j);
            let (a0, a1) = values[j];
            return taylor_step(x0, a0, a1, x - x0);
        }
    }
    maclaurin_pair(x, max_terms)
}

/// Coefficient `Γ(3n + 1/2) / (9^n (2n)!)` of the large-argument expansions.
pub fn asymptotic_coefficient(n: usize) -> f64 {
    let mut a = SQRT_PI;
    for k in 0..n {
        let k = k as f64;
        a *= (3.0 * k + 2.5) * (3.0 * k + 1.5) * (3.0 * k + 0.5)
            / (9.0 * (2.0 * k + 1.0) * (2.0 * k + 2.0));
    }
    a
}

/// Coefficients of the matching expansions of `Ai'`.
fn derivative_coefficient(n: usize, a_n: f64) -> f64 {
    if n == 0 {
        a_n
    } else {
        let n = n as f64;
        -a_n * (6.0 * n + 1.0) / (6.0 * n - 1.0)
    }
}

/// `(Ai(x), Ai'(x))` from the large-argument expansions, truncated once the
/// terms stop decreasing or drop below working precision.
fn asymptotic_pair(x: f64, max_terms: usize) -> (f64, f64) {
    let ax = x.abs();
    let zeta = 2.0 / 3.0 * ax * ax.sqrt();
    let step = ax.powf(-1.5);
    let (mut s, mut sp) = (0.0, 0.0);
    let (mut s_odd, mut sp_odd) = (0.0, 0.0);
    let mut a = SQRT_PI;
    let mut pw = 1.0;
    let mut last = f64::INFINITY;
    for n in 0..max_terms.max(1) {
        if n > 0 {
            let k = (n - 1) as f64;
            a *= (3.0 * k + 2.5) * (3.0 * k + 1.5) * (3.0 * k + 0.5)
                / (9.0 * (2.0 * k + 1.0) * (2.0 * k + 2.0));
            pw *= step;
        }
        let env = a * pw;
        if env > last {
            break;
        }
        last = env;
        let envp = derivative_coefficient(n, a) * pw;
        if x > 0.0 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * env;
            sp += sign * envp;
        } else {
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if n % 2 == 0 {
                s += sign * env;
                sp += sign * envp;
            } else {
                s_odd += sign * env;
                sp_odd += sign * envp;
            }
        }
        if env < 1e-18 * SQRT_PI {
            break;
        }
    }
    if x > 0.0 {
        let e = (-zeta).exp() / (2.0 * PI);
        (ax.powf(-0.25) * e * s, -ax.powf(0.25) * e * sp)
    } else {
        let (sn, cs) = (zeta + FRAC_PI_4).sin_cos();
        // sin(ζ - π/4) = -cos(ζ + π/4)
        let ai = ax.powf(-0.25) / PI * (s * sn - s_odd * cs);
        let aip = -ax.powf(0.25) / PI * (sp * cs + sp_odd * sn);
        (ai, aip)
    }
}

/// `(Ai(x), Ai'(x))` via an explicitly chosen pathway.
pub fn ai_pair_via(x: f64, pathway: Pathway, cfg: &AiryEvalConfig) -> Result<(f64, f64)> {
    ensure_finite(x, "Airy argument")?;
    Ok(match pathway {
        Pathway::Convergent => convergent_pair(x, cfg.max_series_terms),
        Pathway::Asymptotic => {
            if x == 0.0 {
                return Err(Error::OutOfAsymptoticRange { x, range: "x != 0" });
            }
            asymptotic_pair(x, cfg.max_series_terms)
        }
    })
}

pub fn pathway_for(x: f64, cfg: &AiryEvalConfig) -> Pathway {
    if x.abs() <= cfg.series_switch_radius {
        Pathway::Convergent
    } else {
        Pathway::Asymptotic
    }
}

/// `(Ai(x), Ai'(x))`.
pub fn ai_pair(x: f64, cfg: &AiryEvalConfig) -> Result<(f64, f64)> {
    ai_pair_via(x, pathway_for(x, cfg), cfg)
}

pub fn ai(x: f64, cfg: &AiryEvalConfig) -> Result<f64> {
    ai_pair(x, cfg).map(|p| p.0)
}

/// Hot-path evaluation for integrands whose arguments are already known to
/// be finite.
#[inline]
pub(crate) fn ai_unchecked(x: f64, cfg: &AiryEvalConfig) -> f64 {
    match pathway_for(x, cfg) {
        Pathway::Convergent => convergent_pair(x, cfg.max_series_terms).0,
        Pathway::Asymptotic => asymptotic_pair(x, cfg.max_series_terms).0,
    }
}

/// `Ai^{(0)}(x), ..., Ai^{(n)}(x)` from the recurrence
/// `Ai^{(k+2)} = x Ai^{(k)} + k Ai^{(k-1)}`; no order cap.
pub(crate) fn ai_derivatives(x: f64, n: usize, cfg: &AiryEvalConfig) -> Result<Vec<f64>> {
    let (a0, a1) = ai_pair(x, cfg)?;
    let mut d = Vec::with_capacity(n + 1);
    d.push(a0);
    if n >= 1 {
        d.push(a1);
    }
    for k in 0..n.saturating_sub(1) {
        let prev = if k >= 1 { k as f64 * d[k - 1] } else { 0.0 };
        d.push(x * d[k] + prev);
    }
    Ok(d)
}

/// `n`-th derivative of `Ai` at `x`.
pub fn ai_deriv(x: f64, n: usize, cfg: &AiryEvalConfig) -> Result<f64> {
    if n > cfg.max_deriv_order {
        return Err(Error::UnsupportedOrder {
            order: n,
            max: cfg.max_deriv_order,
        });
    }
    ai_derivatives(x, n, cfg).map(|d| d[n])
}

/// Partial sum of the expansion of `Ai` as `x → +∞` with `n_terms` terms.
pub fn ai_asymp_plus(x: f64, n_terms: usize) -> Result<f64> {
    ensure_finite(x, "Airy argument")?;
    if x < 1.0 {
        return Err(Error::OutOfAsymptoticRange { x, range: "x >= 1" });
    }
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let sum: f64 = (0..n_terms)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign * asymptotic_coefficient(n) * x.powf(-1.5 * n as f64)
        })
        .sum();
    Ok(x.powf(-0.25) / (2.0 * PI) * (-zeta).exp() * sum)
}

/// Partial sum of the expansion of `Ai` as `x → -∞` with `n_terms` terms.
pub fn ai_asymp_minus(x: f64, n_terms: usize) -> Result<f64> {
    ensure_finite(x, "Airy argument")?;
    if x > -2.0 {
        return Err(Error::OutOfAsymptoticRange {
            x,
            range: "x <= -2",
        });
    }
    let ax = -x;
    let zeta = 2.0 / 3.0 * ax.powf(1.5);
    let sum: f64 = (0..n_terms)
        .map(|n| {
            let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let phase = if n % 2 == 0 { FRAC_PI_4 } else { -FRAC_PI_4 };
            sign * asymptotic_coefficient(n) * (zeta + phase).sin() * ax.powf(-1.5 * n as f64)
        })
        .sum();
    Ok(ax.powf(-0.25) / PI * sum)
}

/// Magnitude of the `n`-th term of either large-argument expansion, with the
/// oscillating factor replaced by its envelope on the negative side.
pub fn asymptotic_term_envelope(x: f64, n: usize) -> f64 {
    let ax = x.abs();
    let base = asymptotic_coefficient(n) * ax.powf(-1.5 * n as f64) * ax.powf(-0.25);
    if x > 0.0 {
        base * (-2.0 / 3.0 * ax.powf(1.5)).exp() / (2.0 * PI)
    } else {
        base / PI
    }
}

/// `F(η) = ∫_η^∞ Ai(s) ds`.
///
/// Uses `∫_0^∞ Ai = 1/3` for moderate negative arguments and the
/// normalisation `∫_{-∞}^{∞} Ai = 1` with an accelerated oscillatory tail
/// further left.
pub fn ai_integral_complement(eta: f64, cfg: &AiryEvalConfig) -> Result<f64> {
    ai_integral_complement_estimate(eta, cfg).map(|(v, _)| v)
}

/// [`ai_integral_complement`] together with its quadrature error estimate.
pub(crate) fn ai_integral_complement_estimate(
    eta: f64,
    cfg: &AiryEvalConfig,
) -> Result<(f64, f64)> {
    ensure_finite(eta, "F argument")?;
    let tol = cfg.quad_tolerance();
    let kernel = |s: f64| ai_unchecked(s, cfg);
    if eta >= 0.0 {
        let e = integrate(kernel, eta, eta + 20.0, &[], tol)?;
        Ok((e.value, e.error))
    } else if eta >= F_OSCILLATORY_SWITCH {
        let e = integrate(kernel, eta, 0.0, &[], tol)?;
        Ok((1.0 / 3.0 + e.value, e.error))
    } else {
        // ∫_{-∞}^{η} Ai(s) ds = ∫_{-η}^{∞} Ai(0 - θ) dθ
        let e = oscillatory::airy_tail(|_| 1.0, 0.0, -eta, &[], 10.0, cfg, tol)?;
        Ok((1.0 - e.value, e.error))
    }
}

/// Transition profile `W(η) = 1/2 - F(η)`, equal to
/// `(1/π) ∫_0^∞ sin(θ³/3 + ηθ) / θ dθ`.
pub fn leading_profile_w(eta: f64, cfg: &AiryEvalConfig) -> Result<f64> {
    ai_integral_complement(eta, cfg).map(|f| 0.5 - f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> AiryEvalConfig {
        AiryEvalConfig::default()
    }

    #[test]
    fn anchors_at_origin() {
        let (a, ap) = ai_pair(0.0, &cfg()).unwrap();
        assert_eq!(a, AI_ZERO);
        assert_eq!(ap, AI_PRIME_ZERO);
    }

    #[test]
    fn ai_at_one() {
        assert!((ai(1.0, &cfg()).unwrap() - 0.135_292_416_312_881_4).abs() < 1e-14);
    }

    #[test]
    fn non_finite_argument_is_a_domain_error() {
        assert!(matches!(ai(f64::NAN, &cfg()), Err(Error::Domain(_))));
        assert!(matches!(
            ai_integral_complement(f64::INFINITY, &cfg()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn derivative_recurrence_low_orders() {
        let c = cfg();
        for &x in &[-3.5, 0.7, 2.0, 9.0] {
            let a = ai(x, &c).unwrap();
            assert!((ai_deriv(x, 2, &c).unwrap() - x * a).abs() < 1e-15);
        }
        let lhs = ai_deriv(2.0, 3, &c).unwrap();
        let rhs = 2.0 * ai_deriv(2.0, 1, &c).unwrap() + ai(2.0, &c).unwrap();
        assert!((lhs - rhs).abs() < 1e-16);
    }

    #[test]
    fn derivative_order_cap() {
        let err = ai_deriv(0.0, 13, &cfg()).unwrap_err();
        assert_eq!(err, Error::UnsupportedOrder { order: 13, max: 12 });
        assert!(ai_deriv(0.0, 12, &cfg()).is_ok());
    }

    #[test]
    fn single_term_asymptotics() {
        let x: f64 = 4.0;
        let one = ai_asymp_plus(x, 1).unwrap();
        let expect = x.powf(-0.25) / (2.0 * PI.sqrt()) * (-2.0 / 3.0 * x.powf(1.5)).exp();
        assert!((one - expect).abs() < 1e-15 * expect);

        let x: f64 = -5.0;
        let one = ai_asymp_minus(x, 1).unwrap();
        let zeta = 2.0 / 3.0 * 5f64.powf(1.5);
        let expect = 5f64.powf(-0.25) / PI.sqrt() * (zeta + FRAC_PI_4).sin();
        assert!((one - expect).abs() < 1e-15);
    }

    #[test]
    fn leading_sine_zero() {
        // (2/3)|x|^{3/2} + π/4 = 3π  =>  |x| = (15π/4 · 3/2)^{2/3}
        let ax = (3.0 / 2.0 * (3.0 * PI - FRAC_PI_4)).powf(2.0 / 3.0);
        assert!(ai_asymp_minus(-ax, 1).unwrap().abs() < 1e-15);
    }

    #[test]
    fn asymptotic_range_errors() {
        assert!(matches!(
            ai_asymp_plus(0.5, 2),
            Err(Error::OutOfAsymptoticRange { .. })
        ));
        assert!(matches!(
            ai_asymp_minus(-1.0, 2),
            Err(Error::OutOfAsymptoticRange { .. })
        ));
    }

    #[test]
    fn asymptotic_plus_at_25() {
        let exact = ai(25.0, &cfg()).unwrap();
        let approx = ai_asymp_plus(25.0, 2).unwrap();
        assert!(((approx - exact) / exact).abs() < 1e-4);
    }

    #[test]
    fn complement_anchors() {
        let c = cfg();
        assert!((ai_integral_complement(0.0, &c).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        // Reference value from 30-digit quadrature; the distance to 1 is set
        // by the oscillation envelope π^{-1/2} 30^{-3/4} ≈ 0.044.
        let f30 = ai_integral_complement(-30.0, &c).unwrap();
        assert!((f30 - 1.041_048_702_207_62).abs() < 1e-11);
        assert!((f30 - 1.0).abs() < 30f64.powf(-0.75) / PI.sqrt());
        assert!(ai_integral_complement(10.0, &c).unwrap().abs() < 1e-9);
        assert!((leading_profile_w(0.0, &c).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!((leading_profile_w(10.0, &c).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn complement_is_continuous_across_branches() {
        let c = cfg();
        let s = F_OSCILLATORY_SWITCH;
        let d = 1e-9;
        let l = ai_integral_complement(s - d, &c).unwrap();
        let r = ai_integral_complement(s + d, &c).unwrap();
        let jump = l - r - 2.0 * d * ai(s, &c).unwrap();
        assert!(jump.abs() < 1e-12, "{l} vs {r}");
    }

    #[test]
    fn pathways_agree_on_switch_bands() {
        let c = cfg();
        for i in 0..=40 {
            let x = 7.0 + 0.05 * i as f64;
            for x in [x, -x] {
                let (a, ap) = ai_pair_via(x, Pathway::Convergent, &c).unwrap();
                let (b, bp) = ai_pair_via(x, Pathway::Asymptotic, &c).unwrap();
                assert!((a - b).abs() <= 10.0 * c.abs_tol, "x = {x}");
                if x.abs() >= 7.8 {
                    assert!((a - b).abs() < 1e-14 && (ap - bp).abs() < 5e-14, "x = {x}");
                }
            }
        }
    }

    #[test]
    fn node_handover_is_continuous() {
        use crate::verify::ai_series_oracle;
        let c = cfg();
        for table in [&NEGATIVE_NODES, &POSITIVE_NODES] {
            for j in 0..=table.count {
                let mid = table.node(j) - 0.5 * table.step;
                for x in [mid - 1e-9, mid + 1e-9] {
                    let (o, op) = ai_series_oracle(x).unwrap();
                    let (a, ap) = ai_pair(x, &c).unwrap();
                    assert!((a - o).abs() < 2e-14 && (ap - op).abs() < 5e-14, "x = {x}");
                }
            }
        }
    }
}
