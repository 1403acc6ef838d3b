use rand::Rng;
use serde::{Deserialize, Serialize};

/// Dense bivariate polynomial in the shifted monomials
/// `(x - x₀)^i (y - y₀)^j`, `i + j ≤ degree`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly2 {
    pub degree: usize,
    pub origin: (f64, f64),
    /// Graded order: `1, x, y, x², xy, y², …`.
    pub coeffs: Vec<f64>,
}

fn index(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Self { degree, origin: (0.0, 0.0), coeffs: vec![0.0; index(0, degree) + 1] }
    }

    pub fn from_terms(degree: usize, terms: &[(usize, usize, f64)]) -> Self {
        let mut p = Self::zero(degree);
        for &(i, j, c) in terms {
            assert!(i + j <= degree, "monomial above degree");
            p.coeffs[index(i, j)] += c;
        }
        p
    }

    /// Coefficients uniform in `[-1, 1]`, expanded about `origin`.
    pub fn random<R: Rng>(rng: &mut R, degree: usize, origin: (f64, f64)) -> Self {
        let n = index(0, degree) + 1;
        Self { degree, origin, coeffs: (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect() }
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs.get(index(i, j)).copied().unwrap_or(0.0)
    }

    /// Value and gradient.
    pub fn eval_grad(&self, x: f64, y: f64) -> (f64, [f64; 2]) {
        let (u, v) = (x - self.origin.0, y - self.origin.1);
        let mut pu = vec![1.0; self.degree + 1];
        let mut pv = vec![1.0; self.degree + 1];
        for k in 1..=self.degree {
            pu[k] = pu[k - 1] * u;
            pv[k] = pv[k - 1] * v;
        }
        let (mut val, mut gx, mut gy) = (0.0, 0.0, 0.0);
        for n in 0..=self.degree {
            for j in 0..=n {
                let i = n - j;
                let c = self.coeffs[index(i, j)];
                if c == 0.0 {
                    continue;
                }
                val += c * pu[i] * pv[j];
                if i > 0 {
                    gx += c * i as f64 * pu[i - 1] * pv[j];
                }
                if j > 0 {
                    gy += c * j as f64 * pu[i] * pv[j - 1];
                }
            }
        }
        (val, [gx, gy])
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.eval_grad(x, y).0
    }
}
