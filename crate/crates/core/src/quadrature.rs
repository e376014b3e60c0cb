//! Adaptive Gauss-Kronrod quadrature and Wynn epsilon acceleration.
//!
//! The 21-point Kronrod rule and its error scaling follow QUADPACK (`qk21`).
//! The adaptive driver is a global bisection scheme: the panel with the
//! largest error estimate is always split next.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances for [`integrate`]. The loop stops once the summed error
/// estimate is below `max(abs, rel * |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64, max_subdivisions: usize) -> Self {
        Self {
            abs,
            rel,
            max_subdivisions,
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-13, 1e-13, 4000)
    }
}

/// Result of a quadrature: value and an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self::new(self.value * factor, self.error * factor.abs())
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate::new(self.value + rhs.value, self.error + rhs.error)
    }
}

impl std::ops::AddAssign for Estimate {
    fn add_assign(&mut self, rhs: Estimate) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for Estimate {
    fn sum<I: Iterator<Item = Estimate>>(iter: I) -> Self {
        iter.fold(Estimate::default(), |a, b| a + b)
    }
}

/// One application of the 21-point Gauss-Kronrod rule on `[a, b]`.
pub fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_gauss = 0.0;
    let mut res_kronrod = fc * WGK[10];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    #[allow(clippy::needless_range_loop)]
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Estimate::new(value, err)
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Integrates `f` over `[a, b]`, starting from the panels delimited by the
/// interior `breakpoints` (points outside `(a, b)` are ignored).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Estimate::default());
    }
    if a > b {
        return integrate(f, b, a, breakpoints, tol).map(|e| e.scaled(-1.0));
    }

    let mut nodes = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > a && p < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    nodes.extend(inner);
    nodes.push(b);

    let mut heap = BinaryHeap::with_capacity(nodes.len() + 64);
    let mut total = Estimate::default();
    for w in nodes.windows(2) {
        let est = gk21(&f, w[0], w[1]);
        total += est;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            est,
        });
    }

    let mut splits = 0usize;
    loop {
        if !(total.value.is_finite() && total.error.is_finite()) {
            return Err(Error::AccuracyNotReached {
                value: total.value,
                error_estimate: f64::INFINITY,
            });
        }
        if total.error <= tol.target(total.value) {
            break;
        }
        if splits >= tol.max_subdivisions {
            return Err(Error::AccuracyNotReached {
                value: total.value,
                error_estimate: total.error,
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel can no longer be bisected in f64; keep its estimate.
            heap.push(worst);
            return Err(Error::AccuracyNotReached {
                value: total.value,
                error_estimate: total.error,
            });
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            est: right,
        });
        splits += 1;
    }

    // Re-sum in interval order to shed the drift of the incremental updates.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels.iter().map(|p| p.est).sum())
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the extrapolated limit from the deepest even column of the
/// epsilon table, with the difference to the previous even-column entry as
/// the error estimate.
pub fn wynn_epsilon(partial_sums: &[f64]) -> Estimate {
    let n = partial_sums.len();
    match n {
        0 => return Estimate::default(),
        1 => return Estimate::new(partial_sums[0], partial_sums[0].abs()),
        _ => {}
    }
    // prev holds column k-1, cur holds column k (column 0 is the sequence,
    // column -1 is all zeros).
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = Estimate::new(
        partial_sums[n - 1],
        (partial_sums[n - 1] - partial_sums[n - 2]).abs(),
    );
    let mut last_even = partial_sums[n - 1];
    let mut column = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 || !diff.is_finite() {
                // Sequence has converged to working precision along this diagonal.
                return best;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        column += 1;
        prev = cur;
        cur = next;
        if column.is_multiple_of(2) {
            let candidate = *cur.last().expect("non-empty column");
            if !candidate.is_finite() {
                return best;
            }
            let err = (candidate - last_even).abs();
            if err <= best.error {
                best = Estimate::new(candidate, err);
            }
            last_even = candidate;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(
            |x| x.powi(5) - 2.0 * x,
            -1.0,
            2.0,
            &[],
            Tolerance::default(),
        )
        .unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (4.0 - 1.0);
        assert!((e.value - exact).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let tol = Tolerance::default();
        let fwd = integrate(f64::exp, 0.0, 1.0, &[], tol).unwrap();
        let back = integrate(f64::exp, 1.0, 0.0, &[], tol).unwrap();
        assert_eq!(fwd.value, -back.value);
        assert!((fwd.value - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn breakpoint_resolves_jump() {
        let step = |x: f64| if x >= 0.3 { 1.0 } else { 0.0 };
        let e = integrate(step, 0.0, 1.0, &[0.3], Tolerance::default()).unwrap();
        assert!((e.value - 0.7).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_integrand_converges() {
        let e = integrate(|x| (50.0 * x).cos(), 0.0, 3.0, &[], Tolerance::default()).unwrap();
        assert!((e.value - (150f64).sin() / 50.0).abs() < 1e-12);
    }

    #[test]
    fn subdivision_budget_is_reported() {
        let tol = Tolerance::new(1e-15, 0.0, 3);
        let err = integrate(|x: f64| x.sqrt().recip(), 0.0, 1.0, &[], tol).unwrap_err();
        assert!(matches!(err, Error::AccuracyNotReached { .. }));
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let sums: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let e = wynn_epsilon(&sums);
        assert!((e.value - 2f64.ln()).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn wynn_handles_converged_sequence() {
        let e = wynn_epsilon(&[1.0, 1.5, 1.5, 1.5]);
        assert_eq!(e.value, 1.5);
    }
}
