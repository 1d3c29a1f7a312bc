//! Zero-location geometry and the constructive bracketing of `H`'s positive
//! zeros.
//!
//! Hypotheses are [`RegionSpec`]s (a sector around the negative axis, or the
//! open left half-plane); conclusions are [`RayFamily`]s. The bracketing
//! machinery follows the q-product / Θ-map argument: with `z_j` the zeros of
//! `P` and `ω_k = e^{(2k−1)πi/m}`,
//!
//! - `q_{j,k}(x) = (ω_k x − z_j) / (ω_0 x − conj z_j)` for `x > 0`,
//! - `Θ(x) = Σ_j Arg(ω_1 x − z_j)`, strictly increasing from 0 to `nπ/m`,
//! - `m H(x) / Π_j |ω_1 x − z_j| = Σ_k ω_k^{-r} Π_j q_{j,k} e^{-iΘ}`, whose
//!   `k = 0, 1` terms add up to `2 cos(Θ − rπ/m)` and dominate when `m ≤ 4`.
//!
//! Sampling `Θ` where that cosine is `±1` therefore brackets every positive
//! zero of `H`, and Descartes' rule caps the count.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matching::bottleneck_distance;
use crate::multisection::{reduced_h_coeffs, roots_of_minus_one, SectionParams};
use crate::poly::{sign_changes, Polynomial};

/// Margin used by the fuzz generator to keep sampled zeros off region
/// boundaries.
pub const SAMPLE_MARGIN: f64 = 0.01;

/// Relative shrink of a sample point that lands on the top of Θ's range.
const ENDPOINT_NUDGE: f64 = 1e-12;

/// Relative width at which bisection of a bracket stops.
const BRACKET_RTOL: f64 = 1e-12;

/// A zero-location hypothesis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RegionSpec {
    /// `alpha < |Arg z| ≤ π`, with `π/2 ≤ alpha < π`.
    Sector { alpha: f64 },
    /// `Re z < 0`.
    OpenLeftHalfPlane,
}

impl RegionSpec {
    pub fn sector(alpha: f64) -> Result<Self> {
        if !(FRAC_PI_2..PI).contains(&alpha) {
            return Err(Error::invalid(format!(
                "sector half-angle {alpha} outside [π/2, π)"
            )));
        }
        Ok(RegionSpec::Sector { alpha })
    }

    /// The region that the m-ray conclusion needs: the half-plane for even
    /// `m`, the sector `π − π/m < |Arg z| ≤ π` otherwise.
    pub fn required_for(m: usize) -> Self {
        if m.is_multiple_of(2) {
            RegionSpec::OpenLeftHalfPlane
        } else {
            RegionSpec::Sector {
                alpha: (PI - PI / m as f64).max(FRAC_PI_2),
            }
        }
    }
}

/// Membership test. Closed at `|Arg z| = π`, open at the sector edge and at
/// `Re z = 0`. A positive `boundary_tol` shrinks the region: by that many
/// radians for a sector, and to `Re z < −boundary_tol·|z|` for the
/// half-plane. The origin belongs to neither region.
pub fn region_contains(z: Complex64, region: RegionSpec, boundary_tol: f64) -> bool {
    if z.re == 0.0 && z.im == 0.0 {
        return false;
    }
    match region {
        RegionSpec::Sector { alpha } => z.arg().abs() > alpha + boundary_tol,
        RegionSpec::OpenLeftHalfPlane => z.re < -boundary_tol * z.norm(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayOrientation {
    /// `Im z^m = 0, Re z^m ≤ 0`: directions `e^{i(2k+1)π/m}`.
    NegativeAxisPower,
    /// `Im z^m = 0, Re z^m ≥ 0`: directions `e^{2πik/m}`.
    PositiveAxisPower,
}

/// The `m` half-lines from the origin on which `z^m` is real with a fixed
/// sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RayFamily {
    pub m: usize,
    pub orientation: RayOrientation,
}

impl RayFamily {
    pub fn negative(m: usize) -> Self {
        RayFamily {
            m,
            orientation: RayOrientation::NegativeAxisPower,
        }
    }

    pub fn positive(m: usize) -> Self {
        RayFamily {
            m,
            orientation: RayOrientation::PositiveAxisPower,
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        let m = self.m as f64;
        (0..self.m)
            .map(|k| match self.orientation {
                RayOrientation::NegativeAxisPower => (2 * k + 1) as f64 * PI / m,
                RayOrientation::PositiveAxisPower => 2.0 * PI * k as f64 / m,
            })
            .collect()
    }

    pub fn directions(&self) -> Vec<Complex64> {
        self.angles()
            .into_iter()
            .map(|a| Complex64::from_polar(1.0, a))
            .collect()
    }
}

/// Distance from `z` to the nearest ray, and that ray's index.
fn nearest_ray(z: Complex64, family: RayFamily) -> (usize, f64) {
    family
        .directions()
        .into_iter()
        .map(|u| {
            let w = z * u.conj();
            if w.re >= 0.0 {
                w.im.abs()
            } else {
                z.norm()
            }
        })
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, z.norm()))
}

/// Euclidean distance from `z` to the union of the family's rays.
pub fn ray_distance(z: Complex64, family: RayFamily) -> f64 {
    nearest_ray(z, family).1
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroDistance {
    pub zero: Complex64,
    pub nearest_ray: usize,
    pub distance: f64,
    /// `distance / (1 + |zero|)`.
    pub relative_distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub per_zero: Vec<ZeroDistance>,
    pub max_relative_distance: f64,
    pub passed: bool,
    pub tolerance: f64,
}

/// Ray-membership certificate for a set of zeros. Empty input passes.
pub fn verify_on_rays(roots: &[Complex64], family: RayFamily, tol: f64) -> VerificationReport {
    let per_zero: Vec<ZeroDistance> = roots
        .iter()
        .map(|&zero| {
            let (nearest_ray, distance) = nearest_ray(zero, family);
            ZeroDistance {
                zero,
                nearest_ray,
                distance,
                relative_distance: distance / (1.0 + zero.norm()),
            }
        })
        .collect();
    let max_relative_distance = per_zero
        .iter()
        .map(|d| d.relative_distance)
        .fold(0.0, f64::max);
    VerificationReport {
        passed: max_relative_distance <= tol,
        per_zero,
        max_relative_distance,
        tolerance: tol,
    }
}

/// The zeros `z_j` of `P` together with the modulus `m`, as consumed by the
/// q-products and the Θ-map.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaContext {
    zeros: Vec<Complex64>,
    m: usize,
}

impl ThetaContext {
    /// Every zero must satisfy `Re z_j < 0`.
    pub fn new(zeros: Vec<Complex64>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m must be positive"));
        }
        if let Some(z) = zeros.iter().find(|z| !(z.re < 0.0)) {
            return Err(Error::invalid(format!(
                "Θ-map zeros must lie in Re z < 0, got {z}"
            )));
        }
        Ok(ThetaContext { zeros, m })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.zeros.len()
    }

    /// `(r_j, φ_j) = (|z_j|, Arg z_j)`.
    pub fn polar(&self) -> Vec<(f64, f64)> {
        self.zeros.iter().map(|z| z.to_polar()).collect()
    }

    /// Upper end `nπ/m` of Θ's range.
    pub fn theta_sup(&self) -> f64 {
        self.n() as f64 * PI / self.m as f64
    }

    /// Bottleneck distance between the zeros and their conjugates.
    pub fn conjugate_defect(&self) -> f64 {
        let conj: Vec<Complex64> = self.zeros.iter().map(|z| z.conj()).collect();
        bottleneck_distance(&self.zeros, &conj).unwrap_or(f64::INFINITY)
    }
}

/// `Π_j |ω_k x − z_j| / |ω_0 x − conj z_j|`.
pub fn q_product(ctx: &ThetaContext, k: usize, x: f64) -> Result<f64> {
    if k >= ctx.m {
        return Err(Error::invalid(format!("k = {k} must be below m = {}", ctx.m)));
    }
    if !(x > 0.0) {
        return Err(Error::invalid(format!("x = {x} must be positive")));
    }
    let w = roots_of_minus_one(ctx.m);
    // Accumulate in log space: each factor is O(1) but n can be large.
    let log: f64 = ctx
        .zeros
        .iter()
        .map(|&z| ((w[k] * x - z).norm() / (w[0] * x - z.conj()).norm()).ln())
        .sum();
    Ok(log.exp())
}

/// `Θ(x) = Σ_j Arg(ω_1 x − z_j)`, each term in `(−π/2, π/2)`.
pub fn theta_map(ctx: &ThetaContext, x: f64) -> f64 {
    let w1 = Complex64::from_polar(1.0, PI / ctx.m as f64);
    ctx.zeros.iter().map(|&z| (w1 * x - z).arg()).sum()
}

/// The unique `x > 0` with `Θ(x) = target`, by bisection in `log x` on an
/// exponentially grown bracket.
pub fn theta_inverse(ctx: &ThetaContext, target: f64) -> Result<f64> {
    let sup = ctx.theta_sup();
    if !(target > 0.0 && target < sup) {
        return Err(Error::invalid(format!(
            "target {target} outside the open range (0, {sup})"
        )));
    }
    let tol = 1e-12 * ctx.n() as f64;
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    while theta_map(ctx, lo) > target {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::invalid("Θ-map bracket underflowed"));
        }
    }
    while theta_map(ctx, hi) < target {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::invalid("Θ-map bracket overflowed"));
        }
    }
    loop {
        let mid = (lo * hi).sqrt();
        let val = theta_map(ctx, mid);
        if (val - target).abs() <= tol || hi - lo <= 2.0 * f64::EPSILON * hi {
            return Ok(mid);
        }
        if val < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Normalized `m H(x) / (lead · Π_j |ω_1 x − z_j|)` computed from the zeros.
/// Real up to rounding; its sign matches `H(x)` for a positive leading
/// coefficient.
pub fn normalized_g(ctx: &ThetaContext, r: usize, x: f64) -> Complex64 {
    let w = roots_of_minus_one(ctx.m);
    let w1 = w.get(1).copied().unwrap_or(w[0]);
    w.iter()
        .map(|&wk| {
            let term: Complex64 = ctx
                .zeros
                .iter()
                .map(|&z| (wk * x - z) / (w1 * x - z).norm())
                .product();
            wk.powi(-(r as i32)) * term
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketSample {
    pub h: usize,
    /// `Θ_h = (h + r/m)π`, nudged inward at the top of the range.
    pub theta: f64,
    pub x: f64,
    /// Sign of `H(x)`: −1, 0 or 1.
    pub sign: i8,
    /// Diagnostic value of the normalized `g` at `x`.
    pub g: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketReport {
    pub samples: Vec<BracketSample>,
    pub brackets: Vec<(f64, f64)>,
    /// Positive zeros of `H`, increasing.
    pub refined_roots: Vec<f64>,
    /// Number of exponents `jm + r` in `(r, n]`: the count the argument
    /// guarantees.
    pub expected_count: usize,
    pub descartes_count: usize,
    pub passed: bool,
    /// `m ∈ {3, 4}`; other moduli run the same machinery without a guarantee.
    pub in_theorem_scope: bool,
    pub diagnostics: Vec<String>,
}

/// Sign of `Σ_j b_j x^{jm}` without overflow: for `x > 1` the sum is scaled
/// by `x^{-Jm}` and evaluated in `x^{-m}`.
fn reduced_sign(b: &[f64], m: usize, x: f64) -> i8 {
    let v = if x <= 1.0 {
        let t = x.powi(m as i32);
        b.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    } else {
        let t = x.powi(-(m as i32));
        b.iter().fold(0.0, |acc, &c| acc * t + c)
    };
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn bisect_reduced(b: &[f64], m: usize, mut lo: f64, mut hi: f64, sign_lo: i8) -> f64 {
    while hi - lo > BRACKET_RTOL * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = reduced_sign(b, m, mid);
        if s == 0 {
            return mid;
        }
        if s == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locate the positive real zeros of `H = rotate_to_h(P)` by sampling the
/// Θ-map at `Θ_h = (h + r/m)π`, `h = 1..=⌊(n−r)/m⌋`.
///
/// The origin limit `H(x)/x^r → a_r` supplies the sign before the first
/// sample; the bracket it closes is the one pinned down by Descartes' count.
/// Each sign change is bisected to `1e-12` relative width. If Descartes
/// still allows one more zero past the last sample, the tail is searched
/// against the sign at infinity.
pub fn bracket_positive_roots(
    p: &Polynomial,
    params: SectionParams,
    ctx: &ThetaContext,
) -> Result<BracketReport> {
    if ctx.m() != params.m() {
        return Err(Error::invalid(format!(
            "context modulus {} differs from section modulus {}",
            ctx.m(),
            params.m()
        )));
    }
    let scale = p.max_abs_coeff();
    let realness = p.realness(1e-12 * scale);
    if !realness.is_real {
        return Err(Error::invalid(format!(
            "bracketing needs a real polynomial, max |Im a_j| = {}",
            realness.max_imag
        )));
    }
    let (m, r) = (params.m(), params.r());
    let in_theorem_scope = m == 3 || m == 4;
    let mut diagnostics = Vec::new();
    if !in_theorem_scope {
        diagnostics.push(format!("m = {m} is outside theorem scope (m ∈ {{3, 4}})"));
    }

    let b = reduced_h_coeffs(p, params);
    if b.is_empty() {
        diagnostics.push("H is the zero polynomial; vacuous pass".into());
        return Ok(BracketReport {
            samples: Vec::new(),
            brackets: Vec::new(),
            refined_roots: Vec::new(),
            expected_count: 0,
            descartes_count: 0,
            passed: true,
            in_theorem_scope,
            diagnostics,
        });
    }

    let n = p.degree().unwrap_or(0);
    if ctx.n() != n {
        diagnostics.push(format!("context has {} zeros for degree {n}", ctx.n()));
    }
    let required = RegionSpec::required_for(m);
    for z in ctx.zeros() {
        if !region_contains(*z, required, 0.0) {
            diagnostics.push(format!("zero {z} lies outside {required:?}"));
        }
    }
    let defect = ctx.conjugate_defect();
    if defect > 1e-6 * (1.0 + ctx.zeros().iter().map(|z| z.norm()).fold(0.0, f64::max)) {
        diagnostics.push(format!("zeros are not conjugate-closed (defect {defect:e})"));
    }

    let expected_count = if n >= r { (n - r) / m } else { 0 };
    let descartes_count = sign_changes(&b);
    let lead_sign = p.leading().map_or(1.0, |c| c.re.signum());

    let sup = ctx.theta_sup();
    let mut samples = Vec::with_capacity(expected_count);
    for h in 1..=expected_count {
        let mut theta = (h as f64 + r as f64 / m as f64) * PI;
        if theta >= sup {
            theta = sup * (1.0 - ENDPOINT_NUDGE);
        }
        let x = theta_inverse(ctx, theta)?;
        let g = normalized_g(ctx, r, x);
        samples.push(BracketSample {
            h,
            theta,
            x,
            sign: reduced_sign(&b, m, x),
            g: g.re * lead_sign,
        });
    }

    let origin_sign = reduced_sign(&b, m, 0.0);
    let mut points: Vec<(f64, i8)> = vec![(0.0, origin_sign)];
    points.extend(samples.iter().map(|s| (s.x, s.sign)));
    for (h, w) in points.windows(2).enumerate() {
        let want = if h % 2 == 0 { -origin_sign } else { origin_sign };
        if w[1].1 != want {
            diagnostics.push(format!(
                "sample h = {} has sign {} where alternation predicts {}",
                h + 1,
                w[1].1,
                want
            ));
        }
    }

    let mut brackets = Vec::new();
    let mut refined_roots = Vec::new();
    for w in points.windows(2) {
        let ((lo, s_lo), (hi, s_hi)) = (w[0], w[1]);
        if s_hi == 0 {
            refined_roots.push(hi);
        } else if s_lo != 0 && s_lo != s_hi {
            brackets.push((lo, hi));
            refined_roots.push(bisect_reduced(&b, m, lo, hi, s_lo));
        }
    }

    // Tail: one more zero allowed by Descartes, beyond the last sample.
    let &(last_x, last_sign) = points.last().unwrap_or(&(0.0, origin_sign));
    let inf_sign = b.last().map_or(0, |&c| if c > 0.0 { 1 } else { -1 });
    if refined_roots.len() < descartes_count && last_sign != 0 && last_sign != inf_sign {
        let mut hi = last_x.max(1.0) * 2.0;
        while reduced_sign(&b, m, hi) == last_sign && hi.is_finite() {
            hi *= 2.0;
        }
        if hi.is_finite() {
            diagnostics.push(format!("tail zero located past x = {last_x}"));
            brackets.push((last_x, hi));
            refined_roots.push(bisect_reduced(&b, m, last_x, hi, last_sign));
        }
    }

    let passed = refined_roots.len() == expected_count && descartes_count == expected_count;
    if descartes_count != expected_count {
        diagnostics.push(format!(
            "Descartes allows {descartes_count} positive zeros, expected {expected_count}"
        ));
    }
    Ok(BracketReport {
        samples,
        brackets,
        refined_roots,
        expected_count,
        descartes_count,
        passed,
        in_theorem_scope,
        diagnostics,
    })
}

/// A sampled real monic polynomial and the zeros it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformingSample {
    pub roots: Vec<Complex64>,
    pub poly: Polynomial,
}

/// Real monic polynomial of the given degree whose zeros lie strictly inside
/// `region`, deterministic per seed.
///
/// A random number of conjugate pairs is drawn with argument uniform in the
/// admissible interval shrunk by [`SAMPLE_MARGIN`] and modulus log-uniform
/// in `[0.1, 10]`; the remaining degree is filled with negative reals.
pub fn sample_conforming(region: RegionSpec, degree: usize, seed: u64) -> ConformingSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = match region {
        RegionSpec::Sector { alpha } => alpha + SAMPLE_MARGIN,
        // cos(π/2 + δ) ≤ −0.01 needs δ ≥ asin(0.01) > 0.01.
        RegionSpec::OpenLeftHalfPlane => FRAC_PI_2 + SAMPLE_MARGIN.asin() + 1e-6,
    };
    let hi = PI - SAMPLE_MARGIN;
    let pairs = rng.gen_range(0..=degree / 2);
    let mut roots = Vec::with_capacity(degree);
    for _ in 0..pairs {
        let modulus = 10f64.powf(rng.gen_range(-1.0..=1.0));
        let angle = rng.gen_range(lo..hi);
        let z = Complex64::from_polar(modulus, angle);
        roots.push(z);
        roots.push(z.conj());
    }
    for _ in 0..degree - 2 * pairs {
        let modulus = 10f64.powf(rng.gen_range(-1.0..=1.0));
        roots.push(Complex64::new(-modulus, 0.0));
    }
    let poly = Polynomial::from_roots(&roots, Complex64::new(1.0, 0.0));
    ConformingSample { roots, poly }
}

/// [`sample_conforming`] without the zero list.
pub fn sample_conforming_polynomial(region: RegionSpec, degree: usize, seed: u64) -> Polynomial {
    sample_conforming(region, degree, seed).poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::fixtures;
    use crate::multisection::{multisect, orbit_expand};
    use crate::rootfind::roots;

    const SQRT3_2: f64 = 0.866_025_403_784_438_6;

    #[test]
    fn ray_distance_examples() {
        let on = Complex64::from_polar(1.0, PI / 3.0);
        assert!(ray_distance(on, RayFamily::negative(3)) < 1e-16);
        let d = ray_distance(c64(1.0, 0.0), RayFamily::negative(3));
        assert!((d - SQRT3_2).abs() < 1e-15);
        let d = ray_distance(c64(-2.0, 0.0), RayFamily::negative(4));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(ray_distance(c64(0.0, 0.0), RayFamily::negative(5)), 0.0);
        // Behind every ray: the distance is |z| to the origin.
        assert_eq!(ray_distance(c64(3.0, 0.0), RayFamily::negative(1)), 3.0);
    }

    #[test]
    fn ray_distance_zero_on_constructed_points() {
        for m in 1..8 {
            for fam in [RayFamily::negative(m), RayFamily::positive(m)] {
                for a in fam.angles() {
                    let z = Complex64::from_polar(2.5, a);
                    assert!(ray_distance(z, fam) < 1e-14);
                }
            }
        }
        assert!(ray_distance(c64(1.0, 0.0), RayFamily::positive(3)) == 0.0);
    }

    #[test]
    fn region_examples() {
        let sector = RegionSpec::sector(2.0 * PI / 3.0).unwrap();
        assert!(region_contains(c64(-1.0, 1.0), sector, 0.0));
        assert!(!region_contains(c64(-1.0, 10.0), sector, 0.0));
        assert!(region_contains(c64(-1.0, 10.0), RegionSpec::OpenLeftHalfPlane, 0.0));
        assert!(!region_contains(c64(0.0, 0.0), RegionSpec::OpenLeftHalfPlane, 0.0));
        assert!(!region_contains(c64(0.0, 0.0), sector, 0.0));
        assert!(!region_contains(c64(0.0, 1.0), RegionSpec::OpenLeftHalfPlane, 0.0));
        assert!(region_contains(c64(-1.0, 0.0), sector, 0.0));
        // closed at π, open at the edge
        let edge = Complex64::from_polar(1.0, 2.0 * PI / 3.0 + 1e-9);
        assert!(region_contains(edge, sector, 0.0));
        assert!(!region_contains(edge, sector, 1e-6));
        assert!(RegionSpec::sector(PI).is_err());
        assert!(RegionSpec::sector(1.0).is_err());
    }

    #[test]
    fn verify_on_rays_examples() {
        let good = roots(&fixtures::degree9_section_m3()).unwrap();
        assert!(verify_on_rays(&good.roots, RayFamily::negative(3), 1e-7).passed);
        let bad = roots(&fixtures::counterexample_section()).unwrap();
        let rep = verify_on_rays(&bad.roots, RayFamily::negative(3), 1e-7);
        assert!(!rep.passed);
        assert!(rep.max_relative_distance > 0.05);
        let empty = verify_on_rays(&[], RayFamily::negative(4), 0.0);
        assert!(empty.passed && empty.per_zero.is_empty());
    }

    fn pair_ctx(m: usize) -> ThetaContext {
        ThetaContext::new(vec![c64(-1.0, 1.0), c64(-1.0, -1.0)], m).unwrap()
    }

    #[test]
    fn q_product_examples() {
        let ctx = pair_ctx(3);
        for x in [0.01, 0.5, 1.0, 7.0, 300.0] {
            assert!((q_product(&ctx, 0, x).unwrap() - 1.0).abs() < 1e-12);
            assert!((q_product(&ctx, 1, x).unwrap() - 1.0).abs() < 1e-12);
        }
        // Direct evaluation at x = 1: ω_2 = e^{iπ} = −1, ω_0 = e^{−iπ/3}.
        let w0 = Complex64::from_polar(1.0, -PI / 3.0);
        let direct = [c64(-1.0, 1.0), c64(-1.0, -1.0)]
            .iter()
            .map(|&z| (c64(-1.0, 0.0) - z).norm() / (w0 - z.conj()).norm())
            .product::<f64>();
        let q2 = q_product(&ctx, 2, 1.0).unwrap();
        assert!((q2 - direct).abs() < 1e-15);
        assert!(q2 < 1.0);
        assert!(q_product(&ctx, 3, 1.0).is_err());
        assert!(q_product(&ctx, 0, 0.0).is_err());
    }

    #[test]
    fn theta_map_limits() {
        let ctx = pair_ctx(3);
        assert!((theta_map(&ctx, 1e8) - 2.0 * PI / 3.0).abs() < 1e-6);
        assert!(theta_map(&ctx, 1e-9).abs() < 1e-6);
        let mut prev = theta_map(&ctx, 1e-3);
        for k in 1..60 {
            let t = theta_map(&ctx, 1e-3 * 1.3f64.powi(k));
            assert!(t > prev);
            prev = t;
        }
    }

    #[test]
    fn theta_inverse_round_trip_and_bisection_oracle() {
        let ctx = pair_ctx(3);
        for x0 in [0.03, 0.7, 2.0, 45.0] {
            let x = theta_inverse(&ctx, theta_map(&ctx, x0)).unwrap();
            assert!((x - x0).abs() <= 1e-9 * x0);
        }
        // Independent oracle: plain bisection on [1e-6, 1e6].
        let target = PI / 3.0;
        let (mut lo, mut hi) = (1e-6, 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if theta_map(&ctx, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = theta_inverse(&ctx, target).unwrap();
        assert!((x - lo).abs() <= 1e-9 * lo);
        assert!((theta_map(&ctx, x) - target).abs() <= 2e-12);
        assert!(theta_inverse(&ctx, ctx.theta_sup()).is_err());
        assert!(theta_inverse(&ctx, 0.0).is_err());
    }

    #[test]
    fn theta_context_rejects_right_half_plane() {
        assert!(ThetaContext::new(vec![c64(1.0, 0.0)], 3).is_err());
        assert!(ThetaContext::new(vec![c64(0.0, 1.0), c64(0.0, -1.0)], 3).is_err());
    }

    fn degree9_ctx(m: usize) -> ThetaContext {
        ThetaContext::new(fixtures::degree9_roots(), m).unwrap()
    }

    #[test]
    fn bracket_degree9_m3() {
        let p = fixtures::degree9_polynomial();
        let params = SectionParams::new(3, 0).unwrap();
        let rep = bracket_positive_roots(&p, params, &degree9_ctx(3)).unwrap();
        assert!(rep.passed, "{:?}", rep.diagnostics);
        assert_eq!(rep.refined_roots.len(), 3);
        assert_eq!(rep.descartes_count, 3);
        let signs: Vec<i8> = rep.samples.iter().map(|s| s.sign).collect();
        assert_eq!(signs, vec![-1, 1, -1]);
        for s in &rep.samples {
            assert_eq!(s.g.signum() as i8, s.sign);
        }
    }

    #[test]
    fn bracket_degree9_m4_matches_quadratic_formula() {
        let p = fixtures::degree9_polynomial();
        let params = SectionParams::new(4, 0).unwrap();
        let rep = bracket_positive_roots(&p, params, &degree9_ctx(4)).unwrap();
        assert!(rep.passed, "{:?}", rep.diagnostics);
        // H(x) = 80 − 1392 x^4 + 15 x^8: x^4 = (1392 ± √(1392² − 4800)) / 30.
        let disc = (1392.0f64 * 1392.0 - 4.0 * 15.0 * 80.0).sqrt();
        let small = (2.0 * 80.0 / (1392.0 + disc)).powf(0.25);
        let large = ((1392.0 + disc) / 30.0).powf(0.25);
        assert!((rep.refined_roots[0] - small).abs() <= 1e-11 * small);
        assert!((rep.refined_roots[1] - large).abs() <= 1e-11 * large);
    }

    #[test]
    fn bracket_nonzero_residues() {
        let p = fixtures::degree9_polynomial();
        for m in [3, 4] {
            for r in 1..m {
                let params = SectionParams::new(m, r).unwrap();
                let rep = bracket_positive_roots(&p, params, &degree9_ctx(m)).unwrap();
                assert!(rep.passed, "m={m} r={r} {:?}", rep.diagnostics);
                assert_eq!(rep.expected_count, (9 - r) / m);
                let orbit = orbit_expand(&rep.refined_roots, params).unwrap();
                let oracle = roots(&multisect(&p, params)).unwrap();
                let d = bottleneck_distance(&orbit, &oracle.roots).unwrap();
                assert!(d < 1e-7, "m={m} r={r} d={d}");
            }
        }
    }

    #[test]
    fn bracket_trivial_cases() {
        let p = Polynomial::from_real(&[2.0, 1.0]);
        let ctx = ThetaContext::new(vec![c64(-2.0, 0.0)], 3).unwrap();
        let rep = bracket_positive_roots(&p, SectionParams::new(3, 0).unwrap(), &ctx).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.expected_count, 0);
        assert!(rep.refined_roots.is_empty());

        let rep = bracket_positive_roots(&p, SectionParams::new(3, 2).unwrap(), &ctx).unwrap();
        assert!(rep.passed);
        assert!(rep.diagnostics.iter().any(|d| d.contains("vacuous")));
    }

    #[test]
    fn bracket_flags_scope_and_region() {
        let p = fixtures::degree9_polynomial();
        let rep =
            bracket_positive_roots(&p, SectionParams::new(5, 0).unwrap(), &degree9_ctx(5)).unwrap();
        assert!(!rep.in_theorem_scope);
        let rep = bracket_positive_roots(&p, SectionParams::new(3, 0).unwrap(), &degree9_ctx(4));
        assert!(rep.is_err());
    }

    #[test]
    fn bracket_rejects_complex_input() {
        let p = Polynomial::new(vec![c64(1.0, 1.0), c64(1.0, 0.0)]);
        let ctx = ThetaContext::new(vec![c64(-1.0, -1.0)], 3).unwrap();
        assert!(bracket_positive_roots(&p, SectionParams::new(3, 0).unwrap(), &ctx).is_err());
    }

    #[test]
    fn sampler_examples() {
        let sector = RegionSpec::sector(2.0 * PI / 3.0).unwrap();
        let s = sample_conforming(sector, 4, 11);
        assert_eq!(s.poly.degree(), Some(4));
        assert_eq!(s.poly.realness(0.0).max_imag, 0.0);
        assert!(s.roots.iter().all(|&z| region_contains(z, sector, SAMPLE_MARGIN)));

        for seed in 0..20 {
            let s = sample_conforming(RegionSpec::OpenLeftHalfPlane, 5, seed);
            assert!(s.roots.iter().any(|z| z.im == 0.0));
            assert!(s.roots.iter().all(|z| z.re <= -0.01 * z.norm()));
        }
        let c = sample_conforming_polynomial(sector, 0, 3);
        assert_eq!(c, Polynomial::constant(c64(1.0, 0.0)));
        assert_eq!(sample_conforming(sector, 9, 5), sample_conforming(sector, 9, 5));
    }

    #[test]
    fn sampled_roots_survive_the_oracle() {
        let s = sample_conforming(RegionSpec::OpenLeftHalfPlane, 10, 99);
        let found = roots(&s.poly).unwrap();
        for z in &found.roots {
            assert!(region_contains(*z, RegionSpec::OpenLeftHalfPlane, 0.009));
        }
    }
}
