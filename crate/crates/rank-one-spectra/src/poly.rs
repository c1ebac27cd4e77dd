//! Complex polynomials in one variable (dense, ascending coefficients)
//! with companion-matrix root finding.

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{eigenvalues, CMatrix, EigOptions};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense polynomial `c₀ + c₁ z + … + c_d z^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    pub coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = CPoly { coeffs };
        if p.coeffs.is_empty() {
            p.coeffs.push(ZERO);
        }
        p
    }

    pub fn constant(c: Complex64) -> Self {
        CPoly { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        CPoly::constant(Complex64::new(1.0, 0.0))
    }

    /// Degree after trimming an exactly-zero leading tail.
    pub fn degree(&self) -> usize {
        let mut d = self.coeffs.len() - 1;
        while d > 0 && self.coeffs[d] == ZERO {
            d -= 1;
        }
        d
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Multiply by the linear factor `(z − r)` in place.
    pub fn mul_linear(&mut self, r: Complex64) {
        let mut out = vec![ZERO; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[k + 1] += c;
            out[k] -= c * r;
        }
        self.coeffs = out;
    }

    pub fn add_scaled(&mut self, other: &CPoly, scale: Complex64) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), ZERO);
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            self.coeffs[k] += scale * c;
        }
    }

    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::constant(ZERO);
        }
        CPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k + 1) as f64)
                .collect(),
        )
    }

    /// All roots, counted with multiplicity, via a balanced companion
    /// matrix. Leading coefficients below `1e-14·max|coeff|` are trimmed.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Ok(vec![]);
        }
        let mut d = self.coeffs.len() - 1;
        while d > 0 && self.coeffs[d].norm() <= 1e-14 * scale {
            d -= 1;
        }
        if d == 0 {
            return Ok(vec![]);
        }
        let lead = self.coeffs[d];
        if d == 1 {
            return Ok(vec![-self.coeffs[0] / lead]);
        }
        if d == 2 {
            let b = self.coeffs[1] / lead;
            let c = self.coeffs[0] / lead;
            return Ok(quadratic_roots(b, c));
        }
        let mut companion = CMatrix::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            companion[(i, d - 1)] = -self.coeffs[i] / lead;
        }
        let res = eigenvalues(
            &companion,
            EigOptions {
                balance: true,
                certify: false,
            },
        )?;
        Ok(res.values)
    }
}

/// Roots of the monic quadratic `z² + b z + c`, cancellation-free.
pub fn quadratic_roots(b: Complex64, c: Complex64) -> Vec<Complex64> {
    let half = b * (-0.5);
    let disc = (half * half - c).sqrt();
    let r = if half.re * disc.re + half.im * disc.im >= 0.0 {
        half + disc
    } else {
        half - disc
    };
    if r == ZERO {
        vec![ZERO, ZERO]
    } else {
        vec![r, c / r]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_and_derivative() {
        // p = 1 − 2z + z²  (= (z−1)²)
        let p = CPoly::new(vec![c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.eval(c(1.0, 0.0)), ZERO);
        assert_eq!(p.derivative().eval(c(1.0, 0.0)), ZERO);
        assert_eq!(p.eval(c(3.0, 0.0)), c(4.0, 0.0));
    }

    #[test]
    fn product_of_linear_factors_has_those_roots() {
        let rs = [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0), c(4.0, -1.0)];
        let mut p = CPoly::one();
        for &r in &rs {
            p.mul_linear(r);
        }
        let mut roots = p.roots().unwrap();
        assert_eq!(roots.len(), 4);
        for want in rs {
            let (k, _) = roots
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (*a - want).norm().partial_cmp(&(*b - want).norm()).unwrap()
                })
                .unwrap();
            assert!((roots[k] - want).norm() < 1e-9, "missing root {want}");
            roots.remove(k);
        }
    }

    #[test]
    fn double_root_resolved_by_quadratic_formula() {
        // (z−i)² = z² − 2i z − 1
        let p = CPoly::new(vec![c(-1.0, 0.0), c(0.0, -2.0), c(1.0, 0.0)]);
        let roots = p.roots().unwrap();
        for r in roots {
            assert!((r - c(0.0, 1.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(CPoly::one().roots().unwrap().is_empty());
        assert!(CPoly::constant(ZERO).roots().unwrap().is_empty());
    }
}
