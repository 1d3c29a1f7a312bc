//! Sections of entire functions in collected Weierstrass form.
//!
//! `f(z) = z^p e^C exp(A z² + B_eff z) Π_j (1 − z/z_j)` over a finite,
//! conjugate-closed zero list, where `B_eff` is the collected linear
//! coefficient `B + Σ 1/z_j`. The polynomials
//! `P_n(z) = z^p e^C (1 + (A z² + B_eff z)/n)^n Π_j (1 − z/z_j)` converge to
//! `f` locally uniformly, so by Hurwitz the zeros of their sections converge
//! to those of `f_r` on compact sets.
//!
//! Truncation error is `O(1/n)`, far too slow for tight tolerances at
//! practical `n`. Each truncation zero is therefore continued to a zero of
//! `f_r` along the family `exp(log(1 + s w)/s)`, `w = A z² + B_eff z`, which
//! is the truncation at `s = 1/n` and the exponential at `s = 0`, and
//! stabilization is judged on the continued sets.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matching::{bottleneck_distance, hausdorff_distance};
use crate::multisection::{multisect, SectionParams};
use crate::poly::Polynomial;
use crate::rays::{region_contains, verify_on_rays, RayFamily, RegionSpec, VerificationReport};
use crate::rootfind::{find_roots, DEFAULT_TOL};

pub const DEFAULT_SCHEDULE: [usize; 4] = [16, 32, 64, 128];
pub const DEFAULT_STABILIZATION_TOL: f64 = 1e-6;

/// Truncation zeros up to this multiple of the disk radius are refined, so
/// that zeros drifting across the boundary between levels are not lost.
const POOL_FACTOR: f64 = 1.5;
const NEWTON_MAX_STEPS: usize = 80;
/// Continuation from `s = 1/n` to `s = 0`: initial number of steps, how
/// often a step may be halved, corrector iterations per step, and the
/// largest accepted relative move per step.
const CONTINUATION_STEPS: usize = 32;
const CONTINUATION_HALVINGS: u32 = 10;
const CORRECTOR_STEPS: usize = 12;
const CONTINUATION_MAX_MOVE: f64 = 0.05;
/// Refined zeros closer than this (relative) are merged.
const MERGE_RTOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassSpec {
    /// Multiplicity of the zero at the origin.
    pub p: usize,
    pub a: f64,
    /// `B + Σ 1/z_j`.
    pub b_eff: f64,
    pub c: f64,
    /// Nonzero, conjugate-closed.
    pub zeros: Vec<Complex64>,
}

impl WeierstrassSpec {
    /// Violated structural clauses, independent of `m`.
    fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let finite = |x: f64| x.is_finite();
        if !(finite(self.a) && finite(self.b_eff) && finite(self.c)) {
            out.push("A, B_eff and C must be finite".to_string());
        }
        if !(self.b_eff > 0.0) {
            out.push(format!("B_eff = {} must be positive", self.b_eff));
        }
        if !(self.a >= 0.0) {
            out.push(format!("A = {} must be nonnegative", self.a));
        }
        if self.zeros.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            out.push("zeros must be finite".to_string());
        }
        if self.zeros.iter().any(|z| z.re == 0.0 && z.im == 0.0) {
            out.push("zeros must be nonzero (use p for the origin)".to_string());
        }
        let conj: Vec<Complex64> = self.zeros.iter().map(|z| z.conj()).collect();
        let scale = 1.0 + self.zeros.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let defect = bottleneck_distance(&self.zeros, &conj).unwrap_or(f64::INFINITY);
        if defect > 1e-12 * scale {
            out.push(format!("zeros must be conjugate-closed (defect {defect:e})"));
        }
        out
    }

    fn check_structure(&self) -> Result<()> {
        let v = self.structural_violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(v))
        }
    }

    /// `z^p Π (1 − z/z_j)` with real coefficients.
    fn finite_part(&self) -> Polynomial {
        let lead: Complex64 = self.zeros.iter().map(|z| -z.inv()).product();
        let prod = Polynomial::from_roots(&self.zeros, lead);
        let mut coeffs = vec![0.0; self.p];
        coeffs.extend(prod.real_coeffs());
        Polynomial::from_real(&coeffs)
    }

    /// `f(z)` from the closed form.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        ClosedForm::new(self).eval(z, 0.0).0
    }
}

/// Accepts iff the spec meets the hypotheses for `m`:
///
/// - `m = 3`: `A = 0`, every zero in `2π/3 < |Arg z| ≤ π`;
/// - `m = 4`: `A ≥ 0`, every zero in `Re z < 0`;
///
/// plus `B_eff > 0` and a left-half-plane quadratic `A z² + B_eff z + 1`.
/// Every violated clause is reported.
pub fn validate_spec(spec: &WeierstrassSpec, m: usize) -> Result<()> {
    let mut v = spec.structural_violations();
    let region = match m {
        3 => {
            if spec.a != 0.0 {
                v.push(format!("A = {} must be 0 for m = 3", spec.a));
            }
            RegionSpec::Sector {
                alpha: 2.0 * PI / 3.0,
            }
        }
        4 => RegionSpec::OpenLeftHalfPlane,
        _ => {
            v.push(format!("m = {m} is not covered (m ∈ {{3, 4}})"));
            return Err(Error::InvalidSpec(v));
        }
    };
    for z in &spec.zeros {
        if !region_contains(*z, region, 0.0) {
            v.push(format!("zero {z} lies outside {region:?}"));
        }
    }
    for w in quadratic_zeros(spec.a, spec.b_eff, 1.0) {
        if !region_contains(w, region, 0.0) {
            v.push(format!("zero {w} of A z² + B_eff z + 1 lies outside {region:?}"));
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(v))
    }
}

/// Zeros of `a z² + b z + c` (one zero when `a = 0`).
fn quadratic_zeros(a: f64, b: f64, c: f64) -> Vec<Complex64> {
    if a == 0.0 {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![Complex64::new(-c / b, 0.0)];
    }
    let disc = Complex64::new(b * b - 4.0 * a * c, 0.0).sqrt();
    let sign = if b >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (disc * sign + b);
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / a, Complex64::new(c, 0.0) / q]
}

/// `P_n`; degree `p + |zeros| + n` when `A = 0`, `+ 2n` when `A > 0`.
pub fn truncate(spec: &WeierstrassSpec, n: usize) -> Result<Polynomial> {
    spec.check_structure()?;
    if n == 0 {
        return Err(Error::invalid("truncation level n must be positive"));
    }
    let nf = n as f64;
    let base = Polynomial::from_real(&[1.0, spec.b_eff / nf, spec.a / nf]);
    let mut power = Polynomial::constant(Complex64::new(spec.c.exp(), 0.0));
    for _ in 0..n {
        power = &power * &base;
    }
    Ok(&power * &spec.finite_part())
}

/// The family `F_s(z) = z^p e^C exp(log(1 + s w)/s) Π_j (1 − z/z_j)` with
/// `w = A z² + B_eff z`. It equals `P_n` at `s = 1/n` and `f` at `s = 0`.
struct ClosedForm<'a> {
    spec: &'a WeierstrassSpec,
    finite: Polynomial,
}

impl<'a> ClosedForm<'a> {
    fn new(spec: &'a WeierstrassSpec) -> Self {
        ClosedForm {
            spec,
            finite: spec.finite_part(),
        }
    }

    /// `(F_s(z), F_s'(z))`.
    fn eval(&self, z: Complex64, s: f64) -> (Complex64, Complex64) {
        let spec = self.spec;
        let w = z * z * spec.a + z * spec.b_eff;
        let dw = z * (2.0 * spec.a) + spec.b_eff;
        let (log_base, dlog) = if s == 0.0 {
            (w, dw)
        } else {
            let u = w * s + 1.0;
            (u.ln() / s, dw / u)
        };
        let expo = (log_base + spec.c).exp();
        let (g, dg) = self.finite.eval_with_derivative(z);
        (expo * g, expo * (dlog * g + dg))
    }

    /// `r`-th section of `F_s` and its derivative,
    /// `(1/m) Σ_k ζ^{-kr} F_s(ζ^k z)` with `ζ = e^{2πi/m}`.
    fn eval_section(&self, params: SectionParams, z: Complex64, s: f64) -> (Complex64, Complex64) {
        let m = params.m();
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for k in 0..m {
            let zeta = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
            let weight = zeta.powi(-(params.r() as i32));
            let (f, df) = self.eval(zeta * z, s);
            v += weight * f;
            dv += weight * zeta * df;
        }
        (v / m as f64, dv / m as f64)
    }

    /// Newton on the section of `F_s` from `z0`; `None` unless it settles
    /// within `max_steps`.
    fn newton(&self, params: SectionParams, z0: Complex64, s: f64, max_steps: usize) -> Option<Complex64> {
        let mut z = z0;
        let mut last_step = f64::INFINITY;
        for _ in 0..max_steps {
            let (v, dv) = self.eval_section(params, z, s);
            if v.re == 0.0 && v.im == 0.0 {
                return Some(z);
            }
            let step = v / dv;
            if !(step.re.is_finite() && step.im.is_finite()) {
                return None;
            }
            z -= step;
            let size = step.norm();
            if size <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
                return Some(z);
            }
            // Rounding floor reached: steps stopped shrinking.
            if size <= 1e-10 * (1.0 + z.norm()) && size >= 0.5 * last_step {
                return Some(z);
            }
            last_step = size;
        }
        None
    }

    /// Follow a zero of the section of `F_{s0}` to a zero of `f_r` as `s`
    /// decreases to 0. Steps in `s` are halved whenever the corrector fails
    /// or moves the zero by more than `CONTINUATION_MAX_MOVE·(1 + |z|)`.
    fn track(&self, params: SectionParams, z0: Complex64, s0: f64) -> Option<Complex64> {
        let mut z = z0;
        let mut s = s0;
        let mut ds = s0 / CONTINUATION_STEPS as f64;
        let min_ds = s0 / (CONTINUATION_STEPS << CONTINUATION_HALVINGS) as f64;
        while s > 0.0 {
            let next_s = if s - ds < 0.5 * ds { 0.0 } else { s - ds };
            let moved = self
                .newton(params, z, next_s, CORRECTOR_STEPS)
                .filter(|w| (w - z).norm() <= CONTINUATION_MAX_MOVE * (1.0 + z.norm()));
            match moved {
                Some(w) => {
                    z = w;
                    s = next_s;
                }
                None if ds > min_ds => ds *= 0.5,
                None => return None,
            }
        }
        self.newton(params, z, 0.0, NEWTON_MAX_STEPS)
    }
}

/// `f_r(z)` from the closed form.
pub fn eval_section(spec: &WeierstrassSpec, params: SectionParams, z: Complex64) -> Complex64 {
    ClosedForm::new(spec).eval_section(params, z, 0.0).0
}

/// One truncation level of [`section_zeros_in_disk`].
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationLevel {
    pub n: usize,
    pub degree: usize,
    pub oracle_converged: bool,
    /// Truncation zeros in the disk, before refinement.
    pub raw_zeros: Vec<Complex64>,
    /// Refined zeros of `f_r` in the disk.
    pub zeros: Vec<Complex64>,
    /// Truncation zeros whose refinement did not settle.
    pub unrefined: usize,
    /// Hausdorff distance of `zeros` to the previous level (∞ for the first).
    pub gap: f64,
    /// Same, on `raw_zeros`.
    pub raw_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizedZeros {
    pub zeros_in_disk: Vec<Complex64>,
    pub disk_radius: f64,
    pub n_final: usize,
    pub hausdorff_gap: f64,
    /// Gap between the unrefined truncation zeros of the last two levels.
    pub raw_gap: f64,
    pub stabilized: bool,
    pub levels: Vec<TruncationLevel>,
    pub report: VerificationReport,
}

/// Zeros of `f_r` in `|z| ≤ radius`, stabilized over the truncation schedule.
///
/// At each level `n` the section of `P_n` is solved by the root-finding
/// oracle; zeros within `1.5·radius` are continued to zeros of `f_r` and those
/// landing in `|z| ≤ radius·(1 + 10·tol)` are kept. The schedule stops at
/// the first level whose kept set is within Hausdorff distance `tol` of the
/// previous one, ignoring zeros within `10·tol` of the boundary circle. The
/// final set is certified against the m negative-power rays at `tol`.
pub fn section_zeros_in_disk(
    spec: &WeierstrassSpec,
    params: SectionParams,
    radius: f64,
    tol: f64,
    schedule: &[usize],
) -> Result<StabilizedZeros> {
    validate_spec(spec, params.m())?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("disk radius {radius} must be positive")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) || schedule[0] == 0 {
        return Err(Error::invalid("schedule must be a nonempty increasing list of positive n"));
    }

    let closed = ClosedForm::new(spec);
    let keep_radius = radius * (1.0 + 10.0 * tol);
    let interior = |zs: &[Complex64]| -> Vec<Complex64> {
        zs.iter()
            .copied()
            .filter(|z| (z.norm() - radius).abs() > 10.0 * tol)
            .collect()
    };

    let mut levels: Vec<TruncationLevel> = Vec::new();
    for &n in schedule {
        let section = multisect(&truncate(spec, n)?, params);
        let degree = section.degree().unwrap_or(0);
        let oracle = find_roots(&section, DEFAULT_TOL, 100 + 4 * degree)?;

        let raw_zeros: Vec<Complex64> = oracle
            .roots
            .iter()
            .copied()
            .filter(|z| z.norm() <= keep_radius)
            .collect();
        let mut unrefined = 0;
        let mut refined = Vec::new();
        for &z0 in oracle.roots.iter().filter(|z| z.norm() <= POOL_FACTOR * radius) {
            match closed.track(params, z0, 1.0 / n as f64) {
                Some(z) if z.norm() <= keep_radius => refined.push(z),
                Some(_) => {}
                None => unrefined += 1,
            }
        }
        let zeros = merge_duplicates(refined);

        let (gap, raw_gap) = match levels.last() {
            Some(prev) => (
                hausdorff_distance(&interior(&prev.zeros), &interior(&zeros)),
                hausdorff_distance(&interior(&prev.raw_zeros), &interior(&raw_zeros)),
            ),
            None => (f64::INFINITY, f64::INFINITY),
        };
        levels.push(TruncationLevel {
            n,
            degree,
            oracle_converged: oracle.converged,
            raw_zeros,
            zeros,
            unrefined,
            gap,
            raw_gap,
        });
        if gap <= tol {
            break;
        }
    }

    let last = levels.last().expect("schedule is nonempty");
    let report = verify_on_rays(&last.zeros, RayFamily::negative(params.m()), tol);
    Ok(StabilizedZeros {
        zeros_in_disk: last.zeros.clone(),
        disk_radius: radius,
        n_final: last.n,
        hausdorff_gap: last.gap,
        raw_gap: last.raw_gap,
        stabilized: last.gap <= tol,
        report,
        levels,
    })
}

/// Collapse refined zeros that converged to the same point. Exact zeros at
/// the origin keep their multiplicity.
fn merge_duplicates(mut zs: Vec<Complex64>) -> Vec<Complex64> {
    zs.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    let mut out: Vec<Complex64> = Vec::with_capacity(zs.len());
    for z in zs {
        let origin = z.re == 0.0 && z.im == 0.0;
        let dup = !origin
            && out
                .iter()
                .any(|w| (w - z).norm() <= MERGE_RTOL * (1.0 + z.norm()));
        if !dup {
            out.push(z);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::fixtures;
    use crate::rootfind::roots;

    #[test]
    fn validate_examples() {
        let spec = fixtures::entire_m3_spec();
        assert!(validate_spec(&spec, 3).is_ok());

        let with_a = WeierstrassSpec { a: 1.0, ..spec.clone() };
        let err = validate_spec(&with_a, 3).unwrap_err();
        assert!(err.to_string().contains("must be 0 for m = 3"));
        assert!(validate_spec(&with_a, 4).is_ok());

        let neg_b = WeierstrassSpec { b_eff: -1.0, ..spec.clone() };
        assert!(validate_spec(&neg_b, 3).is_err());
        assert!(validate_spec(&neg_b, 4).is_err());

        let far = WeierstrassSpec {
            zeros: vec![c64(-1.0, 10.0), c64(-1.0, -10.0)],
            ..spec.clone()
        };
        assert!(validate_spec(&far, 3).is_err());
        assert!(validate_spec(&far, 4).is_ok());

        assert!(validate_spec(&spec, 5).is_err());
    }

    #[test]
    fn validate_reports_each_clause() {
        let bad = WeierstrassSpec {
            p: 0,
            a: 2.0,
            b_eff: 0.0,
            c: 0.0,
            zeros: vec![c64(1.0, 1.0)],
        };
        match validate_spec(&bad, 3) {
            Err(Error::InvalidSpec(v)) => assert!(v.len() >= 4, "{v:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn truncate_pure_exponential() {
        let spec = WeierstrassSpec {
            p: 0,
            a: 0.0,
            b_eff: 2.0,
            c: 0.0,
            zeros: vec![],
        };
        assert_eq!(truncate(&spec, 2).unwrap(), Polynomial::from_real(&[1.0, 2.0, 1.0]));
    }

    #[test]
    fn truncate_level_one_direct_expansion() {
        // 2 (1 + 2z)(1 − z/(−1−i))(1 − z/(−1+i)) = 2 (1 + 2z)(1 + z + z²/2) = 2 + 6z + 5z² + 2z³
        let p = truncate(&fixtures::entire_m3_spec(), 1).unwrap();
        let expect = [2.0, 6.0, 5.0, 2.0];
        assert_eq!(p.degree(), Some(3));
        for (j, e) in expect.iter().enumerate() {
            assert!((p.coeff(j).re - e).abs() < 1e-14, "{p}");
            assert_eq!(p.coeff(j).im, 0.0);
        }
    }

    #[test]
    fn truncation_converges_pointwise() {
        let spec = fixtures::entire_m4_spec();
        let z = c64(0.5, 0.5);
        let f = spec.eval(z);
        // closed form: e^{z² + 2z} (z² + 2z + 2)
        let direct = (z * z + 2.0 * z).exp() * (z * z + 2.0 * z + 2.0);
        assert!((f - direct).norm() < 1e-13);
        let errs: Vec<f64> = (1..=8)
            .map(|k| (truncate(&spec, 1 << k).unwrap().eval(z) - f).norm())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn degree_bookkeeping() {
        for (a, p, zeros) in [(0.0, 0, 2), (1.0, 0, 2), (0.5, 3, 0), (0.0, 2, 4)] {
            let spec = WeierstrassSpec {
                p,
                a,
                b_eff: 1.5,
                c: 0.1,
                zeros: fixtures::entire_m3_spec().zeros.into_iter().cycle().take(zeros).collect(),
            };
            for n in [1, 7, 32] {
                let expect = p + zeros + if a > 0.0 { 2 * n } else { n };
                assert_eq!(truncate(&spec, n).unwrap().degree(), Some(expect));
            }
        }
    }

    #[test]
    fn truncation_zeros_lie_in_hypothesis_region() {
        for (spec, region) in [
            (fixtures::entire_m3_spec(), RegionSpec::Sector { alpha: 2.0 * PI / 3.0 }),
            (fixtures::entire_m4_spec(), RegionSpec::OpenLeftHalfPlane),
        ] {
            let res = roots(&truncate(&spec, 6).unwrap()).unwrap();
            for z in &res.roots {
                assert!(region_contains(*z, region, 0.0), "{z}");
            }
        }
    }

    #[test]
    fn quadratic_zero_helper() {
        let z = quadratic_zeros(1.0, 2.0, 1.0);
        assert!(z.iter().all(|w| (w - c64(-1.0, 0.0)).norm() < 1e-12));
        let z = quadratic_zeros(1.0, 2.0, 2.0);
        assert!(bottleneck_distance(&z, &[c64(-1.0, 1.0), c64(-1.0, -1.0)]).unwrap() < 1e-15);
        assert_eq!(quadratic_zeros(0.0, 4.0, 1.0), vec![c64(-0.25, 0.0)]);
    }

    #[test]
    fn section_eval_matches_truncation_limit() {
        let spec = fixtures::entire_m3_spec();
        let params = SectionParams::new(3, 1).unwrap();
        let z = c64(0.3, -0.2);
        let exact = eval_section(&spec, params, z);
        let approx = multisect(&truncate(&spec, 4096).unwrap(), params).eval(z);
        assert!((exact - approx).norm() < 1e-3 * exact.norm());
    }

    #[test]
    fn stabilization_rejects_bad_arguments() {
        let spec = fixtures::entire_m3_spec();
        let params = SectionParams::new(3, 0).unwrap();
        assert!(section_zeros_in_disk(&spec, params, 0.0, 1e-6, &DEFAULT_SCHEDULE).is_err());
        assert!(section_zeros_in_disk(&spec, params, 2.0, 1e-6, &[]).is_err());
        assert!(section_zeros_in_disk(&spec, params, 2.0, 1e-6, &[32, 16]).is_err());
        let far = WeierstrassSpec {
            zeros: vec![c64(-1.0, 10.0), c64(-1.0, -10.0)],
            ..spec
        };
        assert!(section_zeros_in_disk(&far, params, 2.0, 1e-6, &DEFAULT_SCHEDULE).is_err());
    }

    #[test]
    fn small_disk_stabilizes_quickly() {
        let spec = fixtures::entire_m3_spec();
        for r in 0..3 {
            let params = SectionParams::new(3, r).unwrap();
            let res = section_zeros_in_disk(&spec, params, 2.0, 1e-6, &DEFAULT_SCHEDULE).unwrap();
            assert!(res.stabilized, "r={r} gap {}", res.hausdorff_gap);
            assert!(res.report.passed);
            assert!(res.zeros_in_disk.len() >= r);
        }
    }
}
