//! Aberth–Ehrlich simultaneous root finding.
//!
//! The solver is deliberately independent of the multisection machinery: it
//! sees a bare coefficient vector and knows nothing about rays, sections or
//! symmetry, so it can serve as the oracle for every zero-location claim.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Angular offset of the initial guesses; breaks the symmetry between the
/// starting circle and real or conjugate-symmetric root sets.
const START_ANGLE: f64 = 0.4;
const POLISH_STEPS: usize = 5;

/// Roots are grouped in [`RootResult::clusters`] when closer than this times
/// `1 + |root|`.
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// Linkage radius (relative) for treating nearby approximations as one
/// multiple root when recentring.
const RECENTER_RADIUS: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct RootResult {
    /// With multiplicity, sorted by argument then modulus.
    pub roots: Vec<Complex64>,
    /// Normalized residual `|P(z)| / Σ|a_j||z|^j` per root.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl RootResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Index groups of roots within [`CLUSTER_RADIUS`] of each other
    /// (single linkage). Singletons are included.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let n = self.roots.len();
        let mut group: Vec<usize> = (0..n).collect();
        fn find(group: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while group[i] != i {
                group[i] = group[group[i]];
                i = group[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.roots[i], self.roots[j]);
                if (a - b).norm() <= CLUSTER_RADIUS * (1.0 + a.norm().max(b.norm())) {
                    let (gi, gj) = (find(&mut group, i), find(&mut group, j));
                    group[gi.max(gj)] = gi.min(gj);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let g = find(&mut group, i);
            if slot[g] == usize::MAX {
                slot[g] = out.len();
                out.push(Vec::new());
            }
            out[slot[g]].push(i);
        }
        out
    }
}

/// All complex zeros of `p` with the default tolerance and iteration cap.
pub fn roots(p: &Polynomial) -> Result<RootResult> {
    find_roots(p, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// All complex zeros of `p`, with multiplicity.
///
/// Exact zeros at the origin are deflated first by stripping exactly-zero
/// low-order coefficients. The remaining roots start on the Newton-polygon
/// circles of the coefficient moduli (a single circle of radius
/// `(|a_0/a_n|)^{1/n}` for balanced coefficients) and are refined by Aberth–Ehrlich sweeps, then polished
/// by Newton steps that are kept only when they lower the residual.
/// Failure to converge is reported through `converged`, never hidden.
pub fn find_roots(p: &Polynomial, tol: f64, max_iter: usize) -> Result<RootResult> {
    if p.is_zero() {
        return Err(Error::invalid("the zero polynomial has no finite root set"));
    }
    if !p.is_finite() {
        return Err(Error::invalid("polynomial has non-finite coefficients"));
    }
    let origin = p.origin_multiplicity();
    let (q, shift) = balanced(&p.coeffs()[origin..]);
    let n = q.degree().unwrap_or(0);

    let mut zs = initial_guesses(&q);
    let mut frozen = vec![false; n];
    let mut iterations = 0;
    while iterations < max_iter && frozen.iter().any(|f| !f) {
        iterations += 1;
        for i in 0..n {
            if frozen[i] {
                continue;
            }
            let z = zs[i];
            let Some(inv_newton) = inverse_newton_ratio(&q, z) else {
                frozen[i] = true;
                continue;
            };
            let repulsion: Complex64 = zs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| (z - zj).inv())
                .sum();
            let step = (inv_newton - repulsion).inv();
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            let next = z - step;
            zs[i] = next;
            if step.norm() <= 4.0 * f64::EPSILON * next.norm() {
                frozen[i] = true;
            }
        }
    }

    for z in zs.iter_mut() {
        *z = polish(&q, *z);
    }
    recenter_clusters(&q, &mut zs);

    let scale = pow2(1.0, shift);
    let mut pairs: Vec<(Complex64, f64)> = zs
        .into_iter()
        .map(|z| (z * scale, q.normalized_residual(z)))
        .chain(std::iter::repeat_n((Complex64::new(0.0, 0.0), 0.0), origin))
        .collect();
    pairs.sort_by(|a, b| {
        a.0.arg()
            .total_cmp(&b.0.arg())
            .then(a.0.norm().total_cmp(&b.0.norm()))
    });
    let converged = pairs
        .iter()
        .all(|(z, res)| z.re.is_finite() && z.im.is_finite() && *res <= tol);
    let (roots, residuals) = pairs.into_iter().unzip();
    Ok(RootResult {
        roots,
        residuals,
        iterations,
        converged,
    })
}

/// `x · 2^e` without intermediate overflow.
fn pow2(x: f64, e: i32) -> f64 {
    let mut x = x;
    let mut e = e;
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        x *= 2f64.powi(step);
        e -= step;
    }
    x
}

/// `q(2^s · w)` with `s` chosen so that `|a_0| ≈ |a_n| 2^{sn}`, and `s`.
///
/// Scaling by a power of two is exact, and the normalized residual is
/// invariant under it, so all work is done on the balanced polynomial.
fn balanced(coeffs: &[Complex64]) -> (Polynomial, i32) {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return (Polynomial::new(coeffs.to_vec()), 0);
    }
    let ratio = (coeffs[0].norm().log2() - coeffs[n].norm().log2()) / n as f64;
    let shift = ratio.round() as i32;
    let scaled = coeffs
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let e = shift * j as i32;
            Complex64::new(pow2(a.re, e), pow2(a.im, e))
        })
        .collect();
    (Polynomial::new(scaled), shift)
}

/// Starting points on the circles of the Newton polygon of `q`.
///
/// Each edge of the upper convex hull of `(j, log|a_j|)` from `j_0` to `j_1`
/// gets `j_1 − j_0` points on the circle of radius `|a_{j_0}/a_{j_1}|^{1/(j_1 − j_0)}`.
/// When the hull is one edge this is the single circle `(|a_0/a_n|)^{1/n}`.
fn initial_guesses(q: &Polynomial) -> Vec<Complex64> {
    let n = q.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let logs: Vec<(usize, f64)> = q
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(j, a)| (j, a.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &logs {
        while hull.len() >= 2 {
            let (j0, l0) = hull[hull.len() - 2];
            let (j1, l1) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly above the chord
            let cross = (j1 - j0) as f64 * (pt.1 - l0) - (pt.0 - j0) as f64 * (l1 - l0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut zs = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let ((j0, l0), (j1, l1)) = (w[0], w[1]);
        let count = j1 - j0;
        let radius = ((l0 - l1) / count as f64).exp();
        let offset = START_ANGLE + 2.0 * PI * j0 as f64 / n as f64;
        zs.extend((0..count).map(|k| {
            Complex64::from_polar(radius, 2.0 * PI * k as f64 / count as f64 + offset)
        }));
    }
    zs
}

/// `P'(z)/P(z)`, or `None` when `z` is an exact zero.
///
/// Outside the unit disk this goes through the reversed polynomial
/// `R(y) = y^n P(1/y)`, using `P/P' = z R / (n R − y R')`.
fn inverse_newton_ratio(q: &Polynomial, z: Complex64) -> Option<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    if z.norm() <= 1.0 {
        let (p, dp) = q.eval_with_derivative(z);
        if p == zero {
            return None;
        }
        Some(dp / p)
    } else {
        let n = q.coeffs().len() - 1;
        let y = z.inv();
        let mut r = zero;
        let mut dr = zero;
        for &a in q.coeffs() {
            dr = dr * y + r;
            r = r * y + a;
        }
        if r == zero {
            return None;
        }
        Some((r * n as f64 - y * dr) / (z * r))
    }
}

fn polish(q: &Polynomial, mut z: Complex64) -> Complex64 {
    let mut res = q.normalized_residual(z);
    for _ in 0..POLISH_STEPS {
        let Some(inv) = inverse_newton_ratio(q, z) else {
            break;
        };
        let next = z - inv.inv();
        if !(next.re.is_finite() && next.im.is_finite()) {
            break;
        }
        let next_res = q.normalized_residual(next);
        if next_res > res {
            break;
        }
        let moved = (next - z).norm();
        z = next;
        res = next_res;
        if moved <= f64::EPSILON * z.norm() {
            break;
        }
    }
    z
}

/// Group indices by single linkage at `radius · (1 + |z|)`.
fn single_linkage(zs: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let n = zs.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + zs[i].norm().max(zs[j].norm());
            if (zs[i] - zs[j]).norm() <= radius * scale && label[i] != label[j] {
                let (from, to) = (label[j].max(label[i]), label[j].min(label[i]));
                label.iter_mut().filter(|l| **l == from).for_each(|l| *l = to);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        if slot[label[i]] == usize::MAX {
            slot[label[i]] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[label[i]]].push(i);
    }
    groups
}

/// Near a k-fold root the individual approximations scatter over a ball of
/// radius about `ε^{1/k}`, and so does their mean. The mean is pulled back
/// onto the simple zero of `P^{(k−1)}` it approximates and the whole cluster
/// is shifted by that correction, which leaves the symmetric functions of the
/// cluster accurate to second order in its spread.
fn recenter_clusters(q: &Polynomial, zs: &mut [Complex64]) {
    for group in single_linkage(zs, RECENTER_RADIUS) {
        let k = group.len();
        if k < 2 {
            continue;
        }
        let mean = group.iter().map(|&i| zs[i]).sum::<Complex64>() / k as f64;
        let spread = group.iter().map(|&i| (zs[i] - mean).norm()).fold(0.0, f64::max);
        let mut d = q.clone();
        for _ in 1..k {
            d = d.derivative();
        }
        let mut c = mean;
        let mut best = d.eval(c).norm();
        for _ in 0..POLISH_STEPS * 2 {
            let (v, dv) = d.eval_with_derivative(c);
            let next = c - v / dv;
            let val = d.eval(next).norm();
            if !(next.re.is_finite() && next.im.is_finite()) || val > best {
                break;
            }
            c = next;
            best = val;
        }
        let shift = c - mean;
        if shift.norm() <= spread.max(RECENTER_RADIUS * (1.0 + mean.norm())) {
            for &i in &group {
                zs[i] += shift;
            }
        }
    }
}

/// Larger of the worst normalized residual and the coefficientwise deviation
/// of `leading · Π (z − root)` from `p`, relative to `max |a_j|`.
pub fn verify_roots(p: &Polynomial, roots: &[Complex64]) -> Result<f64> {
    let Some(n) = p.degree() else {
        return Err(Error::invalid("cannot verify roots of the zero polynomial"));
    };
    if roots.len() != n {
        return Err(Error::invalid(format!(
            "expected {n} roots for a degree-{n} polynomial, got {}",
            roots.len()
        )));
    }
    let residual = roots
        .iter()
        .map(|&z| p.normalized_residual(z))
        .fold(0.0, f64::max);
    let lead = p.leading().unwrap_or_default();
    let rebuilt = Polynomial::from_roots(roots, lead);
    let scale = p.max_abs_coeff();
    let deviation = (0..=n)
        .map(|j| (rebuilt.coeff(j) - p.coeff(j)).norm())
        .fold(0.0, f64::max)
        / scale;
    Ok(residual.max(deviation))
}
