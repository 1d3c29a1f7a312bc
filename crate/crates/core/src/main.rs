use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polysection::entire::{section_zeros_in_disk, validate_spec, StabilizedZeros, WeierstrassSpec};
use polysection::fuzz::{region_label, run_fuzz};
use polysection::io::{
    emit_polynomial, pairs, parse_polynomial_file, parse_spec_file, to_json, write_text,
    PolynomialFile, RunReport, SpecFile,
};
use polysection::multisection::multisect;
use polysection::rays::{
    bracket_positive_roots, region_contains, verify_on_rays, BracketReport, RayFamily, RegionSpec,
    ThetaContext, VerificationReport,
};
use polysection::rootfind::{find_roots, RootResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
use polysection::svg::render_svg;
use polysection::{fixtures, Complex64, Error, Polynomial, Result, SectionParams};

#[derive(Parser)]
#[command(name = "polysection", version, about = "Sections of polynomials and the rays their zeros lie on")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the (m, r) section of a polynomial file.
    Multisect {
        file: PathBuf,
        #[arg(short)]
        m: usize,
        #[arg(short, default_value_t = 0)]
        r: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// All zeros of a polynomial file, with residuals.
    Roots {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that the zeros of the (m, r) section lie on the m negative rays.
    Verify {
        file: PathBuf,
        #[arg(short)]
        m: usize,
        #[arg(short, default_value_t = 0)]
        r: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bracket the positive zeros of the rotated section H through the Θ-map.
    Bracket {
        file: PathBuf,
        #[arg(short)]
        m: usize,
        #[arg(short, default_value_t = 0)]
        r: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Stabilized zeros of a section of a Weierstrass-form entire function.
    Entire {
        spec: PathBuf,
        #[arg(short)]
        m: usize,
        #[arg(short, default_value_t = 0)]
        r: usize,
        #[arg(long, default_value_t = 6.0)]
        radius: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [16usize, 32, 64, 128])]
        schedule: Vec<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample conforming polynomials and check every section.
    Fuzz {
        #[arg(long, value_enum, default_value_t = Region::Sector)]
        region: Region,
        /// Sector half-angle in radians; defaults to π − π/m.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(short)]
        m: usize,
        #[arg(long, default_value_t = 500)]
        count: u64,
        #[arg(long, default_value_t = 3)]
        min_degree: usize,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write each failing case here as a polynomial file.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Regenerate the worked examples: data and plots for the degree-9
    /// polynomial, the counterexample and the two entire functions.
    Demo {
        #[arg(long, default_value = "demo")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Region {
    Sector,
    HalfPlane,
}

/// What a command produced and whether it counts as a pass.
struct Outcome {
    report: RunReport,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match cli.command {
        Command::Multisect { file, m, r, output } => (multisect_cmd(&file, m, r), output),
        Command::Roots { file, tol, max_iter, output } => (roots_cmd(&file, tol, max_iter), output),
        Command::Verify { file, m, r, tol, svg, output } => {
            (verify_cmd(&file, m, r, tol, svg.as_deref()), output)
        }
        Command::Bracket { file, m, r, output } => (bracket_cmd(&file, m, r), output),
        Command::Entire { spec, m, r, radius, tol, schedule, svg, output } => {
            (entire_cmd(&spec, m, r, radius, tol, &schedule, svg.as_deref()), output)
        }
        Command::Fuzz { region, alpha, m, count, min_degree, max_degree, seed, tol, dump_dir, output } => (
            fuzz_cmd(region, alpha, m, count, min_degree, max_degree, seed, tol, dump_dir.as_deref()),
            output,
        ),
        Command::Demo { out_dir } => {
            let report = out_dir.join("report.json");
            (demo_cmd(&out_dir), Some(report))
        }
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = outcome.report.to_json();
    match output {
        Some(path) => {
            if let Err(e) = write_text(&path, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load(file: &Path) -> Result<Polynomial> {
    let parsed = parse_polynomial_file(file)?;
    for w in &parsed.warnings {
        eprintln!("warning: {}: {w}", file.display());
    }
    Ok(parsed.value)
}

fn echo(file: &Path, p: &Polynomial) -> Value {
    json!({ "file": file.display().to_string(), "polynomial": PolynomialFile::from_polynomial(p) })
}

fn roots_json(res: &RootResult) -> Value {
    json!({
        "roots": pairs(&res.roots),
        "residuals": res.residuals,
        "iterations": res.iterations,
        "converged": res.converged,
        "clusters": res.clusters().into_iter().filter(|c| c.len() > 1).collect::<Vec<_>>(),
    })
}

fn verification_json(v: &VerificationReport) -> Value {
    let per_zero: Vec<Value> = v
        .per_zero
        .iter()
        .map(|d| {
            json!({
                "zero": [d.zero.re, d.zero.im],
                "nearest_ray": d.nearest_ray,
                "distance": d.distance,
                "relative_distance": d.relative_distance,
            })
        })
        .collect();
    json!({
        "per_zero": per_zero,
        "max_relative_distance": v.max_relative_distance,
        "passed": v.passed,
        "tolerance": v.tolerance,
    })
}

fn bracket_json(b: &BracketReport) -> Value {
    let samples: Vec<Value> = b
        .samples
        .iter()
        .map(|s| json!({ "h": s.h, "theta": s.theta, "x": s.x, "sign": s.sign, "g": s.g }))
        .collect();
    json!({
        "samples": samples,
        "brackets": b.brackets.iter().map(|&(lo, hi)| [lo, hi]).collect::<Vec<_>>(),
        "refined_roots": b.refined_roots,
        "expected_count": b.expected_count,
        "descartes_count": b.descartes_count,
        "passed": b.passed,
        "in_theorem_scope": b.in_theorem_scope,
        "diagnostics": b.diagnostics,
    })
}

fn stabilized_json(s: &StabilizedZeros) -> Value {
    let levels: Vec<Value> = s
        .levels
        .iter()
        .map(|l| {
            json!({
                "n": l.n,
                "degree": l.degree,
                "oracle_converged": l.oracle_converged,
                "truncation_zeros_in_disk": l.raw_zeros.len(),
                "zeros_in_disk": l.zeros.len(),
                "unrefined": l.unrefined,
                "gap": l.gap,
                "truncation_gap": l.raw_gap,
            })
        })
        .collect();
    json!({
        "zeros_in_disk": pairs(&s.zeros_in_disk),
        "disk_radius": s.disk_radius,
        "n_final": s.n_final,
        "hausdorff_gap": s.hausdorff_gap,
        "truncation_gap": s.raw_gap,
        "stabilized": s.stabilized,
        "levels": levels,
        "rays": verification_json(&s.report),
    })
}

/// Zeros of `p` outside the region the m-ray conclusion assumes.
fn hypothesis_json(p: &Polynomial, m: usize) -> Result<(Value, bool)> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok((json!({ "region": region_label(RegionSpec::required_for(m)), "satisfied": true }), true));
    }
    let region = RegionSpec::required_for(m);
    let found = find_roots(p, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let outside: Vec<Complex64> = found
        .roots
        .iter()
        .copied()
        .filter(|&z| !region_contains(z, region, 0.0))
        .collect();
    let real = p.realness(0.0).is_real;
    let ok = outside.is_empty() && real && (3..=4).contains(&m);
    Ok((
        json!({
            "region": region_label(region),
            "real_coefficients": real,
            "m_in_theorem_scope": (3..=4).contains(&m),
            "zeros_outside_region": pairs(&outside),
            "satisfied": ok,
        }),
        ok,
    ))
}

fn multisect_cmd(file: &Path, m: usize, r: usize) -> Result<Outcome> {
    let p = load(file)?;
    let params = SectionParams::new(m, r)?;
    let section = multisect(&p, params);
    Ok(Outcome {
        report: RunReport::new(
            "multisect",
            echo(file, &p),
            json!({ "m": m, "r": r }),
            json!({ "section": PolynomialFile::from_polynomial(&section), "degree": section.degree() }),
        ),
        passed: true,
    })
}

fn roots_cmd(file: &Path, tol: f64, max_iter: usize) -> Result<Outcome> {
    let p = load(file)?;
    let res = find_roots(&p, tol, max_iter)?;
    Ok(Outcome {
        passed: res.converged,
        report: RunReport::new(
            "roots",
            echo(file, &p),
            json!({ "tol": tol, "max_iter": max_iter }),
            roots_json(&res),
        ),
    })
}

fn verify_cmd(file: &Path, m: usize, r: usize, tol: f64, svg: Option<&Path>) -> Result<Outcome> {
    let p = load(file)?;
    let params = SectionParams::new(m, r)?;
    let section = multisect(&p, params);
    let (hypothesis, _) = hypothesis_json(&p, m)?;
    let (zeros, oracle) = if section.degree().unwrap_or(0) == 0 {
        (Vec::new(), json!({ "vacuous": true }))
    } else {
        let res = find_roots(&section, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        (res.roots.clone(), roots_json(&res))
    };
    let family = RayFamily::negative(m);
    let report = verify_on_rays(&zeros, family, tol);
    if let Some(path) = svg {
        render_svg(&zeros, family, path)?;
    }
    let converged = oracle.get("converged").and_then(Value::as_bool).unwrap_or(true);
    Ok(Outcome {
        passed: report.passed && converged,
        report: RunReport::new(
            "verify",
            echo(file, &p),
            json!({ "m": m, "r": r, "tol": tol }),
            json!({
                "section": PolynomialFile::from_polynomial(&section),
                "hypothesis": hypothesis,
                "oracle": oracle,
                "rays": verification_json(&report),
            }),
        ),
    })
}

fn bracket_cmd(file: &Path, m: usize, r: usize) -> Result<Outcome> {
    let p = load(file)?;
    let params = SectionParams::new(m, r)?;
    let zeros = if p.degree().unwrap_or(0) == 0 {
        Vec::new()
    } else {
        find_roots(&p, DEFAULT_TOL, DEFAULT_MAX_ITER)?.roots
    };
    let ctx = ThetaContext::new(zeros, m)?;
    let report = bracket_positive_roots(&p, params, &ctx)?;
    Ok(Outcome {
        passed: report.passed,
        report: RunReport::new("bracket", echo(file, &p), json!({ "m": m, "r": r }), bracket_json(&report)),
    })
}

fn entire_cmd(
    spec_path: &Path,
    m: usize,
    r: usize,
    radius: f64,
    tol: f64,
    schedule: &[usize],
    svg: Option<&Path>,
) -> Result<Outcome> {
    let spec = parse_spec_file(spec_path)?;
    let stab = entire_run(&spec, m, r, radius, tol, schedule)?;
    if let Some(path) = svg {
        render_svg(&stab.zeros_in_disk, RayFamily::negative(m), path)?;
    }
    Ok(Outcome {
        passed: stab.stabilized && stab.report.passed,
        report: RunReport::new(
            "entire",
            json!({ "file": spec_path.display().to_string(), "spec": SpecFile::from(&spec) }),
            json!({ "m": m, "r": r, "radius": radius, "tol": tol, "schedule": schedule }),
            stabilized_json(&stab),
        ),
    })
}

fn entire_run(
    spec: &WeierstrassSpec,
    m: usize,
    r: usize,
    radius: f64,
    tol: f64,
    schedule: &[usize],
) -> Result<StabilizedZeros> {
    let params = SectionParams::new(m, r)?;
    validate_spec(spec, m)?;
    section_zeros_in_disk(spec, params, radius, tol, schedule)
}

#[allow(clippy::too_many_arguments)]
fn fuzz_cmd(
    region: Region,
    alpha: Option<f64>,
    m: usize,
    count: u64,
    min_degree: usize,
    max_degree: usize,
    seed: u64,
    tol: f64,
    dump_dir: Option<&Path>,
) -> Result<Outcome> {
    let region = match region {
        Region::HalfPlane => RegionSpec::OpenLeftHalfPlane,
        Region::Sector => RegionSpec::sector(alpha.unwrap_or(PI - PI / m.max(2) as f64))?,
    };
    let report = run_fuzz(region, m, count, min_degree..=max_degree, seed, tol)?;
    if let Some(dir) = dump_dir {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
        for f in &report.failures {
            write_text(&dir.join(format!("case-{:06}.json", f.index)), &to_json(&f.polynomial))?;
        }
    }
    Ok(Outcome {
        passed: report.pass_rate == 1.0,
        report: RunReport::new(
            "fuzz",
            json!({ "region": report.region, "m": m }),
            json!({
                "count": count,
                "min_degree": min_degree,
                "max_degree": max_degree,
                "seed": seed,
                "tol": tol,
            }),
            serde_json::to_value(&report).expect("fuzz report serializes"),
        ),
    })
}

/// One item of the demo: whether the computed verdict matched the expected
/// one, and the data behind it.
fn demo_item(name: &str, expect_pass: bool, got_pass: bool, data: Value) -> (bool, Value) {
    let ok = expect_pass == got_pass;
    println!(
        "{name}: {} (expected {}) {}",
        if got_pass { "on rays" } else { "off rays" },
        if expect_pass { "on rays" } else { "off rays" },
        if ok { "ok" } else { "MISMATCH" }
    );
    (ok, json!({ "name": name, "expected_on_rays": expect_pass, "on_rays": got_pass, "matches": ok, "data": data }))
}

fn demo_cmd(dir: &Path) -> Result<Outcome> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })?;
    let mut items = Vec::new();
    let mut all_ok = true;

    let expected_expansion = Polynomial::from_real(&[1030301.0, 61206.0, 31815.0, 1220.0, 315.0, 6.0, 1.0]);
    let expansion = Polynomial::from_roots(&fixtures::counterexample_roots(), Complex64::new(1.0, 0.0));
    let exact = expansion == expected_expansion;
    println!("counterexample expansion exact: {exact}");
    all_ok &= exact;
    write_text(&dir.join("counterexample.json"), &emit_polynomial(&expansion))?;
    items.push(json!({ "name": "counterexample_expansion", "exact": exact, "polynomial": PolynomialFile::from_polynomial(&expansion) }));

    let polys = [
        ("figure1_left", fixtures::degree9_polynomial(), 3, true),
        ("figure1_right", fixtures::degree9_polynomial(), 4, true),
        ("figure2", expansion.clone(), 3, false),
    ];
    for (name, p, m, expect) in polys {
        let section = multisect(&p, SectionParams::new(m, 0)?);
        let res = find_roots(&section, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let family = RayFamily::negative(m);
        let report = verify_on_rays(&res.roots, family, 1e-7);
        render_svg(&res.roots, family, &dir.join(format!("{name}.svg")))?;
        let data = json!({
            "m": m,
            "r": 0,
            "section": PolynomialFile::from_polynomial(&section),
            "oracle": roots_json(&res),
            "rays": verification_json(&report),
        });
        write_text(&dir.join(format!("{name}.json")), &to_json(&data))?;
        let (ok, item) = demo_item(name, expect, report.passed && res.converged, data);
        all_ok &= ok;
        items.push(item);
    }

    let entire = [
        ("figure3", fixtures::entire_m3_spec(), 3, 6.0),
        ("figure4", fixtures::entire_m4_spec(), 4, 5.0),
    ];
    for (name, spec, m, radius) in entire {
        let stab = entire_run(&spec, m, 0, radius, 1e-6, &[16, 32, 64, 128])?;
        render_svg(&stab.zeros_in_disk, RayFamily::negative(m), &dir.join(format!("{name}.svg")))?;
        let data = json!({ "m": m, "r": 0, "spec": SpecFile::from(&spec), "stabilized": stabilized_json(&stab) });
        write_text(&dir.join(format!("{name}.json")), &to_json(&data))?;
        let (ok, item) = demo_item(name, true, stab.stabilized && stab.report.passed, data);
        all_ok &= ok;
        items.push(item);
    }

    Ok(Outcome {
        passed: all_ok,
        report: RunReport::new(
            "demo",
            json!({ "builtin_fixtures": true }),
            json!({ "out_dir": dir.display().to_string(), "verify_tol": 1e-7, "entire_tol": 1e-6 }),
            json!({ "items": items, "all_as_expected": all_ok }),
        ),
    })
}
