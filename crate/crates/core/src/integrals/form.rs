use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::Poly2;
use crate::arrangement::Side;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rational_map::RationalMap;

/// Exact complex rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRational {
    #[serde(with = "rational")]
    pub re: Rational,
    #[serde(with = "rational")]
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational::to_f64(&self.re), rational::to_f64(&self.im))
    }
}

/// `G = g / Π_{k ∈ denominator} R_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub numerator: Poly2,
    pub denominator: Vec<usize>,
}

impl RationalFunction {
    pub fn polynomial(numerator: Poly2) -> Self {
        Self { numerator, denominator: vec![] }
    }

    /// `g / Q` for the family behind `map`.
    pub fn over_q(numerator: Poly2, map: &RationalMap) -> Self {
        let denominator = (0..map.line_count()).filter(|&i| map.side(i) == Side::Q).collect();
        Self { numerator, denominator }
    }

    pub fn eval(&self, map: &RationalMap, x: f64, y: f64) -> f64 {
        let den: f64 = self.denominator.iter().map(|&k| map.line_value(k, x, y)).product();
        self.numerator.eval(x, y) / den
    }

    /// `∇G = (∇g − g ∇log D) / D`.
    pub fn eval_grad(&self, map: &RationalMap, x: f64, y: f64) -> (f64, [f64; 2]) {
        let (g, dg) = self.numerator.eval_grad(x, y);
        let mut den = 1.0;
        let mut dlog = [0.0; 2];
        for &k in &self.denominator {
            let [a, b, _] = map.line_coeffs(k);
            let r = map.line_value(k, x, y);
            den *= r;
            dlog[0] += a / r;
            dlog[1] += b / r;
        }
        (g / den, [(dg[0] - g * dlog[0]) / den, (dg[1] - g * dlog[1]) / den])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OneForm {
    /// `F (Σ_{k≤d} λ_k dR_k/R_k + λ_{d+1} dQ/Q) + dG`.
    LogFamily { lambda: Vec<ComplexRational>, g: RationalFunction },
    /// `dG`.
    ExactForm { g: RationalFunction },
    /// `A dx + B dy`.
    RawPolynomial { a: Poly2, b: Poly2 },
}

impl OneForm {
    /// Builds a member of the logarithmic family after checking
    /// `Σ_{k≤d} λ_k + (d+1) λ_{d+1} = 0` exactly.
    pub fn log_family(d: usize, lambda: Vec<ComplexRational>, g: RationalFunction) -> Result<Self> {
        if lambda.len() != d + 2 {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                d + 2,
                lambda.len()
            )));
        }
        let weight = rational::int(d as i64 + 1);
        let mut re = &lambda[d + 1].re * &weight;
        let mut im = &lambda[d + 1].im * &weight;
        for l in &lambda[..=d] {
            re += &l.re;
            im += &l.im;
        }
        if !(re.is_zero() && im.is_zero()) {
            return Err(Error::InvalidParameter(format!(
                "coefficient constraint violated: {} + {}i",
                rational::format(&re),
                rational::format(&im)
            )));
        }
        Ok(Self::LogFamily { lambda, g })
    }

    /// Line indices where a denominator of the form vanishes.
    pub fn pole_lines(&self, map: &RationalMap) -> Vec<usize> {
        match self {
            Self::LogFamily { g, .. } => {
                let mut all: Vec<usize> = (0..map.line_count()).collect();
                all.extend(&g.denominator);
                all.sort_unstable();
                all.dedup();
                all
            }
            Self::ExactForm { g } => g.denominator.clone(),
            Self::RawPolynomial { .. } => vec![],
        }
    }

    /// Components `(ω_x, ω_y)` of the form at `(x, y)`, without the `dG`
    /// part when `with_exact` is false.
    pub fn components(&self, map: &RationalMap, x: f64, y: f64, with_exact: bool) -> [Complex64; 2] {
        match self {
            Self::LogFamily { lambda, g } => {
                let d = lambda.len() - 2;
                let f = map.value(x, y);
                let mut w = [Complex64::zero(); 2];
                let lq = lambda[d + 1].to_c64();
                for k in 0..map.line_count() {
                    let coeff = match map.side(k) {
                        Side::P if k <= d => lambda[k].to_c64(),
                        Side::P => continue,
                        Side::Q => lq,
                    };
                    let [a, b, _] = map.line_coeffs(k);
                    let r = map.line_value(k, x, y);
                    w[0] += coeff * (a / r);
                    w[1] += coeff * (b / r);
                }
                w[0] *= f;
                w[1] *= f;
                if with_exact {
                    let (_, dg) = g.eval_grad(map, x, y);
                    w[0] += dg[0];
                    w[1] += dg[1];
                }
                w
            }
            Self::ExactForm { g } => {
                if !with_exact {
                    return [Complex64::zero(); 2];
                }
                let (_, dg) = g.eval_grad(map, x, y);
                [dg[0].into(), dg[1].into()]
            }
            Self::RawPolynomial { a, b } => [a.eval(x, y).into(), b.eval(x, y).into()],
        }
    }

    /// Closed-form primitive of the exact part, if any.
    pub fn exact_part(&self) -> Option<&RationalFunction> {
        match self {
            Self::LogFamily { g, .. } => Some(g),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::build_lines;
    use crate::rational::{int, rat};

    fn map(d: usize) -> RationalMap {
        RationalMap::new(&build_lines(d, &Rational::zero()).unwrap())
    }

    #[test]
    fn constraint_is_exact() {
        let g = RationalFunction::polynomial(Poly2::zero(0));
        // d = 2: λ₀ + λ₁ + λ₂ + 3 λ₃ = 0
        let ok = vec![
            ComplexRational::new(rat(1, 3), int(1)),
            ComplexRational::real(rat(2, 3)),
            ComplexRational::new(int(2), int(-4)),
            ComplexRational::new(int(-1), int(1)),
        ];
        assert!(OneForm::log_family(2, ok.clone(), g.clone()).is_ok());
        let mut bad = ok;
        bad[0].re += rat(1, 1_000_000_007);
        assert!(OneForm::log_family(2, bad, g).is_err());
    }

    #[test]
    fn log_family_components_by_hand() {
        // d = 1, λ = (1, 0, -1/2): ω = F (dR₀/R₀ − ½ dQ/Q), R₀ = 3x
        let m = map(1);
        let lambda = vec![
            ComplexRational::real(int(1)),
            ComplexRational::real(int(0)),
            ComplexRational::real(rat(-1, 2)),
        ];
        let form = OneForm::log_family(1, lambda, RationalFunction::polynomial(Poly2::zero(0))).unwrap();
        let (x, y) = (0.3, 0.4);
        let f = m.value(x, y);
        let r2 = x + 2.0 * y - 2.0;
        let want_x = f * (1.0 / x - 0.5 * (1.0 / r2));
        let want_y = f * (-0.5 * (2.0 / r2 + 1.0 / y));
        let w = form.components(&m, x, y, true);
        assert!((w[0].re - want_x).abs() < 1e-12 && (w[1].re - want_y).abs() < 1e-12);
    }

    #[test]
    fn rational_gradient_matches_differences() {
        let m = map(2);
        let g = RationalFunction::over_q(
            Poly2::from_terms(2, &[(0, 0, 1.0), (1, 1, 2.0), (0, 2, -0.5)]),
            &m,
        );
        let (x, y, h) = (0.2, 3.3, 1e-6);
        let (_, dg) = g.eval_grad(&m, x, y);
        let fx = (g.eval(&m, x + h, y) - g.eval(&m, x - h, y)) / (2.0 * h);
        let fy = (g.eval(&m, x, y + h) - g.eval(&m, x, y - h)) / (2.0 * h);
        assert!((dg[0] - fx).abs() < 1e-6 * (1.0 + fx.abs()));
        assert!((dg[1] - fy).abs() < 1e-6 * (1.0 + fy.abs()));
    }
}
