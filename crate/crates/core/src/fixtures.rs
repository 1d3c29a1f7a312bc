//! Built-in worked examples.

use std::f64::consts::LN_2;

use num_complex::Complex64;

use crate::entire::WeierstrassSpec;
use crate::poly::Polynomial;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Zeros of `(z+1+i)²(z+1−i)²(z+1)³(z+4+2i)(z+4−2i)`.
pub fn degree9_roots() -> Vec<Complex64> {
    vec![
        c(-1.0, -1.0),
        c(-1.0, -1.0),
        c(-1.0, 1.0),
        c(-1.0, 1.0),
        c(-1.0, 0.0),
        c(-1.0, 0.0),
        c(-1.0, 0.0),
        c(-4.0, -2.0),
        c(-4.0, 2.0),
    ]
}

/// `z⁹ + 15z⁸ + 99z⁷ + 369z⁶ + 876z⁵ + 1392z⁴ + 1492z³ + 1044z² + 432z + 80`.
pub fn degree9_polynomial() -> Polynomial {
    Polynomial::from_real(&[
        80.0, 432.0, 1044.0, 1492.0, 1392.0, 876.0, 369.0, 99.0, 15.0, 1.0,
    ])
}

/// `z⁹ + 369z⁶ + 1492z³ + 80`, the `(m, r) = (3, 0)` section.
pub fn degree9_section_m3() -> Polynomial {
    Polynomial::from_real(&[80.0, 0.0, 0.0, 1492.0, 0.0, 0.0, 369.0, 0.0, 0.0, 1.0])
}

/// `15z⁸ + 1392z⁴ + 80`, the `(m, r) = (4, 0)` section.
pub fn degree9_section_m4() -> Polynomial {
    Polynomial::from_real(&[80.0, 0.0, 0.0, 0.0, 1392.0, 0.0, 0.0, 0.0, 15.0])
}

/// Zeros of `((z+1)² + 10²)³`: `−1 ± 10i`, each triple. They lie in the
/// left half-plane but outside the sector `2π/3 < |Arg z| ≤ π`.
pub fn counterexample_roots() -> Vec<Complex64> {
    vec![c(-1.0, 10.0), c(-1.0, -10.0)]
        .into_iter()
        .cycle()
        .take(6)
        .collect()
}

/// `z⁶ + 6z⁵ + 315z⁴ + 1220z³ + 31815z² + 61206z + 1030301`.
pub fn counterexample_polynomial() -> Polynomial {
    Polynomial::from_real(&[1030301.0, 61206.0, 31815.0, 1220.0, 315.0, 6.0, 1.0])
}

/// `z⁶ + 1220z³ + 1030301`, whose zeros leave the three rays.
pub fn counterexample_section() -> Polynomial {
    Polynomial::from_real(&[1030301.0, 0.0, 0.0, 1220.0, 0.0, 0.0, 1.0])
}

/// `f(z) = e^{2z}(z+1+i)(z+1−i) = 2 e^{2z} (1 − z/(−1+i))(1 − z/(−1−i))`.
pub fn entire_m3_spec() -> WeierstrassSpec {
    WeierstrassSpec {
        p: 0,
        a: 0.0,
        b_eff: 2.0,
        c: LN_2,
        zeros: vec![c(-1.0, 1.0), c(-1.0, -1.0)],
    }
}

/// `f(z) = e^{z²+2z}(z+1+i)(z+1−i)`.
pub fn entire_m4_spec() -> WeierstrassSpec {
    WeierstrassSpec {
        a: 1.0,
        ..entire_m3_spec()
    }
}
