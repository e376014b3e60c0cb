//! Initial data with two-sided inverse-power expansions
//! `f(x) ~ Σ f_n^± x^{-n}` as `x → ±∞`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Transform = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

pub const DEFAULT_TAIL_RADIUS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Initial datum `f` together with its tail coefficients.
#[derive(Clone)]
pub struct PowerTailFunction {
    evaluator: Evaluator,
    tail_plus: Vec<f64>,
    tail_minus: Vec<f64>,
    tail_radius: f64,
    label: String,
    breakpoints: Vec<f64>,
    fourier: Option<Transform>,
}

impl fmt::Debug for PowerTailFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerTailFunction")
            .field("label", &self.label)
            .field("tail_plus", &self.tail_plus)
            .field("tail_minus", &self.tail_minus)
            .field("tail_radius", &self.tail_radius)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl PowerTailFunction {
    /// User-supplied datum. At least `f_0^±` must be given on each side.
    pub fn new(
        label: impl Into<String>,
        evaluator: Evaluator,
        tail_plus: Vec<f64>,
        tail_minus: Vec<f64>,
        tail_radius: f64,
    ) -> Result<Self> {
        if tail_plus.is_empty() || tail_minus.is_empty() {
            return Err(Error::IncompleteData(
                "at least the constant tail coefficient f_0 is required on each side".into(),
            ));
        }
        if tail_plus.iter().chain(&tail_minus).any(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig(
                "tail coefficients must be finite".into(),
            ));
        }
        if !(tail_radius > 0.0 && tail_radius.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tail_radius must be positive, got {tail_radius}"
            )));
        }
        Ok(Self {
            evaluator,
            tail_plus,
            tail_minus,
            tail_radius,
            label: label.into(),
            breakpoints: Vec::new(),
            fourier: None,
        })
    }

    /// Points where `f` or its derivative jumps; quadrature splits there.
    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.sort_by(f64::total_cmp);
        points.dedup();
        self.breakpoints = points;
        self
    }

    /// Closed-form `f̂(k) = ∫ f(y) e^{-iky} dy`, when known.
    pub fn with_fourier_transform(mut self, transform: Transform) -> Self {
        self.fourier = Some(transform);
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    pub fn tail_coeffs(&self, side: Side) -> &[f64] {
        match side {
            Side::Plus => &self.tail_plus,
            Side::Minus => &self.tail_minus,
        }
    }

    pub fn tail_coeffs_plus(&self) -> &[f64] {
        &self.tail_plus
    }

    pub fn tail_coeffs_minus(&self) -> &[f64] {
        &self.tail_minus
    }

    pub fn f0_plus(&self) -> f64 {
        self.tail_plus[0]
    }

    pub fn f0_minus(&self) -> f64 {
        self.tail_minus[0]
    }

    pub fn tail_radius(&self) -> f64 {
        self.tail_radius
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn fourier_transform(&self) -> Option<&Transform> {
        self.fourier.as_ref()
    }

    /// True when every tail coefficient vanishes on both sides.
    pub fn has_zero_tails(&self) -> bool {
        self.tail_plus
            .iter()
            .chain(&self.tail_minus)
            .all(|&c| c == 0.0)
    }

    /// Truncated expansion `Σ_{n<n_terms} f_n^± x^{-n}` on the side of `x`.
    pub fn tail_expansion(&self, x: f64, n_terms: usize) -> f64 {
        let side = if x >= 0.0 { Side::Plus } else { Side::Minus };
        let coeffs = self.tail_coeffs(side);
        let inv = 1.0 / x;
        // Horner in 1/x.
        coeffs[..n_terms.min(coeffs.len())]
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * inv + c)
    }
}

/// Built-in test data with exactly known tail coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    Constant,
    Step,
    Atan,
    SigmoidAlg,
    Gaussian,
    Rational,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::Constant,
        Builtin::Step,
        Builtin::Atan,
        Builtin::SigmoidAlg,
        Builtin::Gaussian,
        Builtin::Rational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Constant => "constant",
            Builtin::Step => "step",
            Builtin::Atan => "atan",
            Builtin::SigmoidAlg => "sigmoid_alg",
            Builtin::Gaussian => "gaussian",
            Builtin::Rational => "rational",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnsupportedFunction(s.to_string()))
    }
}

/// Builds one of the named built-in data. Only `constant` takes a parameter
/// (its value, default 1).
pub fn make_builtin(name: &str, params: &[f64]) -> Result<PowerTailFunction> {
    let kind: Builtin = name.parse()?;
    builtin(kind, params)
}

pub fn builtin(kind: Builtin, params: &[f64]) -> Result<PowerTailFunction> {
    let expect_params = usize::from(kind == Builtin::Constant);
    if params.len() > expect_params {
        return Err(Error::InvalidConfig(format!(
            "`{kind}` takes at most {expect_params} parameter(s), got {}",
            params.len()
        )));
    }
    let r = DEFAULT_TAIL_RADIUS;
    let f = match kind {
        Builtin::Constant => {
            let c = params.first().copied().unwrap_or(1.0);
            ensure_finite(c, "constant value")?;
            PowerTailFunction::new(
                kind.name(),
                Arc::new(move |_| c),
                vec![c, 0.0, 0.0, 0.0],
                vec![c, 0.0, 0.0, 0.0],
                r,
            )?
        }
        Builtin::Step => PowerTailFunction::new(
            kind.name(),
            Arc::new(|x| if x >= 0.0 { 1.0 } else { 0.0 }),
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            r,
        )?
        .with_breakpoints(vec![0.0]),
        // atan x = ±π/2 - 1/x + 1/(3x³) - ...
        Builtin::Atan => PowerTailFunction::new(
            kind.name(),
            Arc::new(f64::atan),
            vec![FRAC_PI_2, -1.0, 0.0, 1.0 / 3.0],
            vec![-FRAC_PI_2, -1.0, 0.0, 1.0 / 3.0],
            r,
        )?,
        // x/√(1+x²) = ±(1 - 1/(2x²) + ...)
        Builtin::SigmoidAlg => PowerTailFunction::new(
            kind.name(),
            Arc::new(|x: f64| x / (1.0 + x * x).sqrt()),
            vec![1.0, 0.0, -0.5],
            vec![-1.0, 0.0, 0.5],
            r,
        )?,
        Builtin::Gaussian => PowerTailFunction::new(
            kind.name(),
            Arc::new(|x: f64| (-x * x).exp()),
            vec![0.0; 4],
            vec![0.0; 4],
            r,
        )?
        .with_fourier_transform(Arc::new(|k: f64| {
            Complex64::new(PI.sqrt() * (-0.25 * k * k).exp(), 0.0)
        })),
        // 1/(1+x²) = x^{-2} - x^{-4} + ...
        Builtin::Rational => PowerTailFunction::new(
            kind.name(),
            Arc::new(|x: f64| 1.0 / (1.0 + x * x)),
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            r,
        )?,
    };
    Ok(f)
}

/// `f(x) - Σ_{n<n_terms} f_n^± x^{-n}`.
pub fn tail_remainder(f: &PowerTailFunction, x: f64, n_terms: usize) -> Result<f64> {
    ensure_finite(x, "x")?;
    if x.abs() < f.tail_radius() {
        return Err(Error::InsideCore {
            x,
            tail_radius: f.tail_radius(),
        });
    }
    let side = if x >= 0.0 { Side::Plus } else { Side::Minus };
    let available = f.tail_coeffs(side).len();
    if n_terms == 0 || n_terms > available {
        return Err(Error::IncompleteData(format!(
            "requested {n_terms} tail terms, {available} available"
        )));
    }
    Ok(f.eval(x) - f.tail_expansion(x, n_terms))
}

/// JSON descriptor for initial data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DataDescriptor {
    Builtin {
        name: String,
        #[serde(default)]
        params: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail_radius: Option<f64>,
    },
    /// Piecewise-linear data on `points`, continued outside the table by the
    /// declared tail expansions.
    Table {
        name: String,
        points: Vec<[f64; 2]>,
        tail_plus: Vec<f64>,
        tail_minus: Vec<f64>,
        tail_radius: f64,
    },
}

impl DataDescriptor {
    pub fn builtin(name: &str, params: Vec<f64>) -> Self {
        DataDescriptor::Builtin {
            name: name.to_string(),
            params,
            tail_radius: None,
        }
    }

    pub fn build(&self) -> Result<PowerTailFunction> {
        match self {
            DataDescriptor::Builtin {
                name,
                params,
                tail_radius,
            } => {
                let mut f = make_builtin(name, params)?;
                if let Some(r) = tail_radius {
                    if !(*r > 0.0 && r.is_finite()) {
                        return Err(Error::InvalidConfig(format!(
                            "tail_radius must be positive, got {r}"
                        )));
                    }
                    f.tail_radius = *r;
                }
                Ok(f)
            }
            DataDescriptor::Table {
                name,
                points,
                tail_plus,
                tail_minus,
                tail_radius,
            } => table(name, points, tail_plus, tail_minus, *tail_radius),
        }
    }
}

fn table(
    name: &str,
    points: &[[f64; 2]],
    tail_plus: &[f64],
    tail_minus: &[f64],
    tail_radius: f64,
) -> Result<PowerTailFunction> {
    if points.len() < 2 {
        return Err(Error::InvalidConfig(
            "a table needs at least two points".into(),
        ));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig("table entries must be finite".into()));
    }
    if points.windows(2).any(|w| w[1][0] <= w[0][0]) {
        return Err(Error::InvalidConfig(
            "table abscissae must be strictly increasing".into(),
        ));
    }
    let (lo, hi) = (points[0][0], points[points.len() - 1][0]);
    if lo > -tail_radius || hi < tail_radius {
        return Err(Error::InvalidConfig(format!(
            "table range [{lo}, {hi}] must cover [-{tail_radius}, {tail_radius}]"
        )));
    }

    let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
    let plus = tail_plus.to_vec();
    let minus = tail_minus.to_vec();
    let horner = |coeffs: &[f64], x: f64| coeffs.iter().rev().fold(0.0, |acc, &c| acc / x + c);
    let evaluator: Evaluator = Arc::new(move |x: f64| {
        if x > hi {
            return horner(&plus, x);
        }
        if x < lo {
            return horner(&minus, x);
        }
        let i = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
        let (x0, x1) = (xs[i - 1], xs[i]);
        let w = (x - x0) / (x1 - x0);
        ys[i - 1] * (1.0 - w) + ys[i] * w
    });
    let nodes = points.iter().map(|p| p[0]).collect();
    Ok(PowerTailFunction::new(
        name,
        evaluator,
        tail_plus.to_vec(),
        tail_minus.to_vec(),
        tail_radius,
    )?
    .with_breakpoints(nodes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atan_coefficients() {
        let f = make_builtin("atan", &[]).unwrap();
        assert_eq!(f.tail_coeffs_plus(), &[FRAC_PI_2, -1.0, 0.0, 1.0 / 3.0]);
        assert_eq!(f.f0_minus(), -FRAC_PI_2);
    }

    #[test]
    fn constant_and_sigmoid_coefficients() {
        let c = make_builtin("constant", &[5.0]).unwrap();
        assert_eq!(c.tail_coeffs_minus(), &[5.0, 0.0, 0.0, 0.0]);
        let s = make_builtin("sigmoid_alg", &[]).unwrap();
        assert_eq!(s.tail_coeffs_minus(), &[-1.0, 0.0, 0.5]);
    }

    #[test]
    fn unknown_builtin() {
        assert_eq!(
            make_builtin("sinc", &[]).unwrap_err(),
            Error::UnsupportedFunction("sinc".into())
        );
        assert!(make_builtin("atan", &[1.0]).is_err());
    }

    #[test]
    fn remainders() {
        let c = make_builtin("constant", &[2.5]).unwrap();
        assert_eq!(tail_remainder(&c, 11.0, 1).unwrap(), 0.0);
        let g = make_builtin("gaussian", &[]).unwrap();
        assert_eq!(tail_remainder(&g, 9.0, 1).unwrap(), (-81f64).exp());
        let a = make_builtin("atan", &[]).unwrap();
        let ratio = tail_remainder(&a, 10.0, 2).unwrap() / tail_remainder(&a, 20.0, 2).unwrap();
        assert!((ratio - 8.0).abs() < 0.1, "{ratio}");
    }

    #[test]
    fn remainder_inside_core() {
        let a = make_builtin("atan", &[]).unwrap();
        assert!(matches!(
            tail_remainder(&a, 3.0, 2),
            Err(Error::InsideCore { .. })
        ));
        assert!(matches!(
            tail_remainder(&a, 9.0, 5),
            Err(Error::IncompleteData(_))
        ));
    }

    #[test]
    fn side_symmetry_of_builtins() {
        for kind in [Builtin::Gaussian, Builtin::Rational] {
            let f = builtin(kind, &[]).unwrap();
            assert_eq!(f.tail_coeffs_plus(), f.tail_coeffs_minus());
        }
        // odd data: f_n^- = (-1)^{n+1} f_n^+
        for kind in [Builtin::Atan, Builtin::SigmoidAlg] {
            let f = builtin(kind, &[]).unwrap();
            for (n, (p, m)) in f
                .tail_coeffs_plus()
                .iter()
                .zip(f.tail_coeffs_minus())
                .enumerate()
            {
                let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
                assert_eq!(*m, sign * p, "{kind} n={n}");
            }
        }
    }

    #[test]
    fn table_descriptor() {
        let json = r#"{"kind":"table","name":"ramp","points":[[-10,0],[0,0.5],[10,1]],
            "tail_plus":[1],"tail_minus":[0],"tail_radius":10}"#;
        let d: DataDescriptor = serde_json::from_str(json).unwrap();
        let f = d.build().unwrap();
        assert_eq!(f.eval(5.0), 0.75);
        assert_eq!(f.eval(50.0), 1.0);
        assert_eq!(f.eval(-50.0), 0.0);
        assert_eq!(f.breakpoints(), &[-10.0, 0.0, 10.0]);
    }

    #[test]
    fn table_must_cover_core() {
        let d = DataDescriptor::Table {
            name: "short".into(),
            points: vec![[-1.0, 0.0], [1.0, 1.0]],
            tail_plus: vec![1.0],
            tail_minus: vec![0.0],
            tail_radius: 8.0,
        };
        assert!(matches!(d.build(), Err(Error::InvalidConfig(_))));
    }
}
