//! Seeded mass-testing of the ray conclusion on sampled conforming inputs.
//!
//! Case `i` of a run with seed `s` draws its degree and sample seed from a
//! ChaCha8 stream `(s, i)`, so a case never depends on which worker ran it or
//! on how many cases there are.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::PolynomialFile;
use crate::multisection::{multisect, SectionParams};
use crate::poly::Polynomial;
use crate::rays::{sample_conforming_polynomial, verify_on_rays, RayFamily, RegionSpec};
use crate::rootfind::roots;

/// Outcome of checking every section of one polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionCheck {
    pub r: usize,
    pub degree: Option<usize>,
    pub oracle_converged: bool,
    pub max_relative_distance: f64,
    pub passed: bool,
}

/// Solve all `m` sections of `p` and check their zeros against the negative
/// ray family at `tol`. A section passes when the oracle converged and all
/// zeros are within `tol`; constant and zero sections pass vacuously.
pub fn check_sections(p: &Polynomial, m: usize, tol: f64) -> Result<Vec<SectionCheck>> {
    SectionParams::all(m)?
        .into_iter()
        .map(|params| {
            let section = multisect(p, params);
            let degree = section.degree();
            if degree.unwrap_or(0) == 0 {
                return Ok(SectionCheck {
                    r: params.r(),
                    degree,
                    oracle_converged: true,
                    max_relative_distance: 0.0,
                    passed: true,
                });
            }
            let found = roots(&section)?;
            let report = verify_on_rays(&found.roots, RayFamily::negative(m), tol);
            Ok(SectionCheck {
                r: params.r(),
                degree,
                oracle_converged: found.converged,
                max_relative_distance: report.max_relative_distance,
                passed: found.converged && report.passed,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzFailure {
    pub index: u64,
    pub sample_seed: u64,
    pub degree: usize,
    pub max_relative_distance: f64,
    pub failing_sections: Vec<usize>,
    /// The sampled polynomial, ready to be written out and replayed.
    pub polynomial: PolynomialFile,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzReport {
    pub region: String,
    pub m: usize,
    pub count: u64,
    pub degree_min: usize,
    pub degree_max: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub passed_cases: u64,
    /// 1 for an empty run.
    pub pass_rate: f64,
    pub worst_relative_distance: f64,
    pub worst_case: Option<u64>,
    pub failures: Vec<FuzzFailure>,
}

pub fn region_label(region: RegionSpec) -> String {
    match region {
        RegionSpec::Sector { alpha } => format!("sector({alpha:.16e})"),
        RegionSpec::OpenLeftHalfPlane => "half-plane".to_string(),
    }
}

/// Degree and sample seed of case `index`.
pub fn case_inputs(seed: u64, index: u64, degrees: &RangeInclusive<usize>) -> (usize, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let degree = rng.gen_range(degrees.clone());
    (degree, rng.gen())
}

struct CaseResult {
    index: u64,
    sample_seed: u64,
    degree: usize,
    poly: Polynomial,
    checks: Vec<SectionCheck>,
}

pub fn run_fuzz(
    region: RegionSpec,
    m: usize,
    count: u64,
    degrees: RangeInclusive<usize>,
    seed: u64,
    tol: f64,
) -> Result<FuzzReport> {
    if m < 2 {
        return Err(Error::invalid(format!("m = {m} must be at least 2")));
    }
    if degrees.is_empty() {
        return Err(Error::invalid("empty degree range"));
    }
    let mut cases: Vec<CaseResult> = (0..count)
        .into_par_iter()
        .map(|index| {
            let (degree, sample_seed) = case_inputs(seed, index, &degrees);
            let poly = sample_conforming_polynomial(region, degree, sample_seed);
            let checks = check_sections(&poly, m, tol)?;
            Ok(CaseResult {
                index,
                sample_seed,
                degree,
                poly,
                checks,
            })
        })
        .collect::<Result<_>>()?;
    cases.sort_by_key(|c| c.index);

    let worst = |c: &CaseResult| {
        c.checks
            .iter()
            .map(|s| s.max_relative_distance)
            .fold(0.0, f64::max)
    };
    let mut worst_relative_distance = 0.0;
    let mut worst_case = None;
    let mut failures = Vec::new();
    for c in &cases {
        let w = worst(c);
        if w > worst_relative_distance {
            worst_relative_distance = w;
            worst_case = Some(c.index);
        }
        let failing: Vec<usize> = c.checks.iter().filter(|s| !s.passed).map(|s| s.r).collect();
        if !failing.is_empty() {
            failures.push(FuzzFailure {
                index: c.index,
                sample_seed: c.sample_seed,
                degree: c.degree,
                max_relative_distance: w,
                failing_sections: failing,
                polynomial: PolynomialFile::from_polynomial(&c.poly),
            });
        }
    }
    let passed_cases = count - failures.len() as u64;
    Ok(FuzzReport {
        region: region_label(region),
        m,
        count,
        degree_min: *degrees.start(),
        degree_max: *degrees.end(),
        seed,
        tolerance: tol,
        passed_cases,
        pass_rate: if count == 0 { 1.0 } else { passed_cases as f64 / count as f64 },
        worst_relative_distance,
        worst_case,
        failures,
    })
}
