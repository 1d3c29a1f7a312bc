//! Dense complex polynomials in ascending coefficient order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Above this degree, evaluation outside the unit disk goes through the
/// reversed polynomial in `1/z` so intermediate powers cannot overflow.
const SCALED_EVAL_DEGREE: usize = 200;

/// A polynomial `Σ a_j z^j` with complex coefficients.
///
/// `coeffs[j]` holds `a_j`. The highest stored coefficient is nonzero; the
/// zero polynomial is the empty sequence. Only exact `0.0` coefficients are
/// trimmed from the top, numerically tiny ones are kept.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

/// Outcome of [`Polynomial::realness`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealnessReport {
    pub is_real: bool,
    /// Largest `|Im a_j|`.
    pub max_imag: f64,
}

impl From<Vec<Complex64>> for Polynomial {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Polynomial::new(coeffs)
    }
}

impl From<Polynomial> for Vec<Complex64> {
    fn from(p: Polynomial) -> Self {
        p.coeffs
    }
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// `leading · Π (z − root)`, expanded one linear factor at a time.
    pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Self {
        let mut coeffs = Vec::with_capacity(roots.len() + 1);
        coeffs.push(leading);
        for &root in roots {
            coeffs.push(Complex64::new(0.0, 0.0));
            for j in (1..coeffs.len()).rev() {
                coeffs[j] = coeffs[j - 1] - root * coeffs[j];
            }
            coeffs[0] = -root * coeffs[0];
        }
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Coefficient of `z^j`; zero beyond the degree.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_default()
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Number of exactly-zero low-order coefficients, i.e. the multiplicity
    /// of the origin as a root. Zero for the zero polynomial.
    pub fn origin_multiplicity(&self) -> usize {
        self.coeffs
            .iter()
            .take_while(|c| c.re == 0.0 && c.im == 0.0)
            .count()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = match self.degree() {
            None => return Complex64::new(0.0, 0.0),
            Some(n) => n,
        };
        if n > SCALED_EVAL_DEGREE && z.norm() > 1.0 {
            return self.eval_scaled(z);
        }
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `z^n · Σ a_j (1/z)^(n−j)`, recombined in log space.
    fn eval_scaled(&self, z: Complex64) -> Complex64 {
        let n = self.coeffs.len() - 1;
        let y = z.inv();
        let rev = self
            .coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * y + a);
        if rev.re == 0.0 && rev.im == 0.0 {
            return rev;
        }
        (z.ln() * n as f64 + rev.ln()).exp()
    }

    /// `P(z)` and `P'(z)` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &a in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    }

    /// Backward-error style residual `|P(z)| / Σ |a_j| |z|^j`.
    ///
    /// Computed on the reversed polynomial for `|z| > 1` so that it stays
    /// finite at any degree. Returns 0 when the denominator vanishes.
    pub fn normalized_residual(&self, z: Complex64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (num, den) = if z.norm() <= 1.0 {
            let r = z.norm();
            let num = self
                .coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
            let den = self.coeffs.iter().rev().fold(0.0, |acc, a| acc * r + a.norm());
            (num.norm(), den)
        } else {
            let y = z.inv();
            let r = y.norm();
            let num = self
                .coeffs
                .iter()
                .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * y + a);
            let den = self.coeffs.iter().fold(0.0, |acc, a| acc * r + a.norm());
            (num.norm(), den)
        };
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &a)| a * j as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&a| a * s).collect())
    }

    /// The same polynomial with leading coefficient 1.
    pub fn monic(&self) -> Option<Polynomial> {
        let lead = self.leading()?;
        Some(self.scale(lead.inv()))
    }

    pub fn realness(&self, tol: f64) -> RealnessReport {
        let max_imag = self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        RealnessReport {
            is_real: max_imag <= tol,
            max_imag,
        }
    }

    /// Real parts of the coefficients.
    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.re).collect()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&a| -a).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, a) in self.coeffs.iter().enumerate().rev() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if a.im == 0.0 {
                write!(f, "{}", a.re)?;
            } else {
                write!(f, "({}{:+}i)", a.re, a.im)?;
            }
            match j {
                0 => {}
                1 => write!(f, "·z")?,
                _ => write!(f, "·z^{j}")?,
            }
        }
        Ok(())
    }
}

/// Number of sign changes in `coeffs` after dropping zeros (Descartes).
pub fn sign_changes(coeffs: &[f64]) -> usize {
    coeffs
        .iter()
        .filter(|&&c| c != 0.0)
        .map(|&c| c > 0.0)
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| w[0] != w[1])
        .count()
}
