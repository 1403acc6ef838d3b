//! Floating-point evaluation of `F = P/Q` and its derivatives in the chart
//! `z = 1`.

use crate::arrangement::{Line, Side};

#[derive(Clone, Debug)]
pub struct RationalMap {
    coeffs: Vec<[f64; 3]>,
    sides: Vec<Side>,
}

impl RationalMap {
    pub fn new(lines: &[Line]) -> Self {
        Self {
            coeffs: lines.iter().map(Line::coeffs_f64).collect(),
            sides: lines.iter().map(|l| l.side).collect(),
        }
    }

    /// The map `1/F = Q/P`.
    pub fn inverted(&self) -> Self {
        let flip = |s: &Side| match s {
            Side::P => Side::Q,
            Side::Q => Side::P,
        };
        Self { coeffs: self.coeffs.clone(), sides: self.sides.iter().map(flip).collect() }
    }

    pub fn line_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn line_coeffs(&self, i: usize) -> [f64; 3] {
        self.coeffs[i]
    }

    pub fn side(&self, i: usize) -> Side {
        self.sides[i]
    }

    pub fn line_value(&self, i: usize, x: f64, y: f64) -> f64 {
        let [a, b, c] = self.coeffs[i];
        a * x + b * y + c
    }

    fn sign_of(&self, i: usize) -> f64 {
        match self.sides[i] {
            Side::P => 1.0,
            Side::Q => -1.0,
        }
    }

    pub fn side_product(&self, side: Side, x: f64, y: f64) -> f64 {
        (0..self.coeffs.len())
            .filter(|&i| self.sides[i] == side)
            .map(|i| self.line_value(i, x, y))
            .product()
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.side_product(Side::P, x, y) / self.side_product(Side::Q, x, y)
    }

    /// `∇ log|F| = Σ_P ∇R/R − Σ_Q ∇R/R`.
    pub fn log_gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let mut g = [0.0; 2];
        for i in 0..self.coeffs.len() {
            let [a, b, _] = self.coeffs[i];
            let s = self.sign_of(i) / self.line_value(i, x, y);
            g[0] += s * a;
            g[1] += s * b;
        }
        g
    }

    pub fn log_hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let mut h = [[0.0; 2]; 2];
        for i in 0..self.coeffs.len() {
            let [a, b, _] = self.coeffs[i];
            let r = self.line_value(i, x, y);
            let s = -self.sign_of(i) / (r * r);
            h[0][0] += s * a * a;
            h[0][1] += s * a * b;
            h[1][1] += s * b * b;
        }
        h[1][0] = h[0][1];
        h
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let f = self.value(x, y);
        let g = self.log_gradient(x, y);
        [f * g[0], f * g[1]]
    }

    /// `Hess F = F (Hess log F + ∇log F ∇log Fᵀ)`.
    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let f = self.value(x, y);
        let g = self.log_gradient(x, y);
        let h = self.log_hessian(x, y);
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = f * (h[i][j] + g[i] * g[j]);
            }
        }
        out
    }

    /// Smallest Euclidean distance to any line and the index of that line.
    pub fn nearest_line(&self, x: f64, y: f64) -> (usize, f64) {
        (0..self.coeffs.len())
            .map(|i| {
                let [a, b, _] = self.coeffs[i];
                (i, self.line_value(i, x, y).abs() / a.hypot(b))
            })
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }
}

/// Eigenvalues of a symmetric 2×2 matrix, ascending.
pub fn sym_eigenvalues(h: [[f64; 2]; 2]) -> [f64; 2] {
    let tr = h[0][0] + h[1][1];
    let diff = h[0][0] - h[1][1];
    let disc = (diff * diff / 4.0 + h[0][1] * h[0][1]).sqrt();
    [tr / 2.0 - disc, tr / 2.0 + disc]
}
