//! Arithmetic-progression sections and the rotated section `H`.
//!
//! For `P(z) = Σ a_j z^j` and `0 ≤ r < m`:
//!
//! - `P_r(z) = Σ_{j ≡ r (mod m)} a_j z^j`
//! - `H(z) = e^{-rπi/m} P_r(e^{πi/m} z) = Σ_j (−1)^j a_{jm+r} z^{jm+r}`
//!
//! `H` is also `(1/m) Σ_k ω_k^{-r} P(ω_k z)` with `ω_k = e^{(2k−1)πi/m}` the
//! m-th roots of −1. Positive zeros `x` of `H` give the zeros
//! `x·e^{(2k+1)πi/m}` of `P_r`, which lie on `Im z^m = 0, Re z^m ≤ 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matching::bottleneck_distance;
use crate::poly::Polynomial;

/// The progression `j ≡ r (mod m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SectionParams {
    m: usize,
    r: usize,
}

impl SectionParams {
    pub fn new(m: usize, r: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m must be positive"));
        }
        if r >= m {
            return Err(Error::invalid(format!("r = {r} must satisfy 0 ≤ r < m = {m}")));
        }
        Ok(SectionParams { m, r })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Every residue for modulus `m`.
    pub fn all(m: usize) -> Result<Vec<Self>> {
        (0..m).map(|r| SectionParams::new(m, r)).collect()
    }

    /// Exponents `jm + r ≤ degree`, in increasing order.
    fn exponents(&self, degree: usize) -> impl Iterator<Item = usize> {
        (self.r..=degree).step_by(self.m)
    }
}

/// `P_r`: the coefficients of `P` at exponents `≡ r (mod m)`; every other
/// coefficient is exactly zero.
pub fn multisect(p: &Polynomial, params: SectionParams) -> Polynomial {
    let Some(n) = p.degree() else {
        return Polynomial::zero();
    };
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for e in params.exponents(n) {
        out[e] = p.coeff(e);
    }
    Polynomial::new(out)
}

/// `H(z) = Σ_j (−1)^j a_{jm+r} z^{jm+r}`, by sign flips on the coefficients.
///
/// Real whenever `P` is real. The zero polynomial when no exponent of `P`
/// is `≡ r (mod m)`.
pub fn rotate_to_h(p: &Polynomial, params: SectionParams) -> Polynomial {
    let Some(n) = p.degree() else {
        return Polynomial::zero();
    };
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (j, e) in params.exponents(n).enumerate() {
        let a = p.coeff(e);
        out[e] = if j % 2 == 0 { a } else { -a };
    }
    Polynomial::new(out)
}

/// Real coefficients `b_j = (−1)^j Re a_{jm+r}`, so that on the positive
/// axis `H(x) = x^r Σ_j b_j x^{jm}`.
pub fn reduced_h_coeffs(p: &Polynomial, params: SectionParams) -> Vec<f64> {
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    let mut b: Vec<f64> = params
        .exponents(n)
        .enumerate()
        .map(|(j, e)| {
            let a = p.coeff(e).re;
            if j % 2 == 0 {
                a
            } else {
                -a
            }
        })
        .collect();
    while b.last() == Some(&0.0) {
        b.pop();
    }
    b
}

/// `ω_k = e^{(2k−1)πi/m}`, `k = 0..m`.
pub fn roots_of_minus_one(m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::from_polar(1.0, (2.0 * k as f64 - 1.0) * PI / m as f64))
        .collect()
}

/// `|(1/m) Σ_k ω_k^{-r} P(ω_k z) − H(z)|`; zero up to rounding.
pub fn hformula_check(p: &Polynomial, params: SectionParams, z: Complex64) -> f64 {
    let m = params.m as f64;
    let filtered: Complex64 = roots_of_minus_one(params.m)
        .into_iter()
        .map(|w| w.powi(-(params.r as i32)) * p.eval(w * z))
        .sum::<Complex64>()
        / m;
    (filtered - rotate_to_h(p, params).eval(z)).norm()
}

/// Zero set of `P_r` generated from positive zeros of `H`: the origin with
/// multiplicity `r` plus the m-point orbit of each generator.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitZeroSet {
    pub origin_multiplicity: usize,
    pub generators: Vec<f64>,
    pub m: usize,
}

impl OrbitZeroSet {
    pub fn new(generators: &[f64], params: SectionParams) -> Result<Self> {
        if let Some(&g) = generators.iter().find(|&&g| !(g > 0.0 && g.is_finite())) {
            return Err(Error::invalid(format!(
                "orbit generators must be positive and finite, got {g}"
            )));
        }
        Ok(OrbitZeroSet {
            origin_multiplicity: params.r,
            generators: generators.to_vec(),
            m: params.m,
        })
    }

    pub fn len(&self) -> usize {
        self.origin_multiplicity + self.m * self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Origin copies first, then each generator's orbit at angles
    /// `(2k+1)π/m`, `k = 0..m`.
    pub fn points(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.origin_multiplicity];
        let m = self.m as f64;
        for &x in &self.generators {
            for k in 0..self.m {
                out.push(Complex64::from_polar(x, (2 * k + 1) as f64 * PI / m));
            }
        }
        out
    }
}

/// [`OrbitZeroSet::points`] for the given generators.
pub fn orbit_expand(generators: &[f64], params: SectionParams) -> Result<Vec<Complex64>> {
    Ok(OrbitZeroSet::new(generators, params)?.points())
}

/// Bottleneck distance between a root multiset and its rotation by
/// `e^{2πi/m}`; zero for an orbit-symmetric set.
pub fn orbit_symmetry_defect(roots: &[Complex64], m: usize) -> f64 {
    let turn = Complex64::from_polar(1.0, 2.0 * PI / m as f64);
    let rotated: Vec<Complex64> = roots.iter().map(|&z| z * turn).collect();
    bottleneck_distance(roots, &rotated).unwrap_or(f64::INFINITY)
}
