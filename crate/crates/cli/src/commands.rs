//! Command dispatch. Each command loads its inputs, calls into the library,
//! and emits one deterministic report: JSON everywhere, CSV additionally for
//! the point-sweep commands (analyze, rho-grid).
//!
//! Exit codes: 0 when the run succeeds and any verdict is positive, 2 when a
//! scan or fit reaches a negative verdict, 1 for errors of any kind.

use std::fmt::Write as _;
use std::fs;

use serde::Serialize;

use germscan::loja::{self, EquivCrossCheck, LojaEstimate, WeightReport};
use germscan::map::AnalyticMap;
use germscan::milnor::{self, ConditionReport, MilnorPairEstimate, SimpleFactsReport};
use germscan::region::RegionSpec;
use germscan::spectra;
use germscan::verify::{self, PropertyReport};

use crate::config::{self, Cli, Command, Format, Job, JobConfig};

pub fn run_cli(cli: Cli) -> Result<u8, String> {
    let file = match &cli.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str::<JobConfig>(&text)
                .map_err(|e| format!("{}: parse error: {e}", path.display()))?
        }
        None => JobConfig::default(),
    };
    let job = config::resolve(cli, file)?;
    run(&job)
}

pub fn run(job: &Job) -> Result<u8, String> {
    match job.command {
        Command::Analyze => analyze(job),
        Command::LojaFit => loja_fit(job),
        Command::Weight => weight(job),
        Command::MilnorScan => milnor_scan(job),
        Command::PairScan => pair_scan(job),
        Command::ConditionC => condition_c(job),
        Command::RhoGrid => rho_grid(job),
        Command::Verify => verify_cmd(job),
    }
}

fn load_map(job: &Job) -> Result<AnalyticMap, String> {
    let path = job
        .map_path
        .as_ref()
        .ok_or("this command needs a map; pass --map or set map_path in the config")?;
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    AnalyticMap::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn region_for(job: &Job, map: &AnalyticMap) -> Result<RegionSpec, String> {
    job.region_spec(map.n())
}

fn emit(job: &Job, text: &str) -> Result<(), String> {
    match &job.output_path {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(job: &Job, report: &T) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| format!("report serialization failed: {e}"))?;
    text.push('\n');
    emit(job, &text)
}

fn reject_csv(job: &Job, command: &str) -> Result<(), String> {
    if job.format == Format::Csv {
        return Err(format!(
            "csv output is only available for analyze and rho-grid; {command} reports json"
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct AnalyzePoint {
    x: Vec<f64>,
    radius: f64,
    f_norm: f64,
    sigmas: Vec<f64>,
    sigma_k_norm: f64,
    sigma_aug_norm: f64,
    /// Weight at the point; -1 where every gradient vanishes.
    rho: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    map: String,
    n: usize,
    k: usize,
    samples: usize,
    /// Points where the weight is undefined.
    excluded: usize,
    rho_min: Option<f64>,
    rho_max: Option<f64>,
    min_sigma_k_norm: f64,
    points: Vec<AnalyzePoint>,
}

fn analyze(job: &Job) -> Result<u8, String> {
    let map = load_map(job)?;
    let region = region_for(job, &map)?;
    let mut points = Vec::new();
    let mut excluded = 0usize;
    let mut rho_min = f64::INFINITY;
    let mut rho_max = f64::NEG_INFINITY;
    let mut min_dep = f64::INFINITY;
    for point in region.samples() {
        let probe = milnor::probe(&map, &point).map_err(|e| e.to_string())?;
        let frame = map.gradient_frame(point.coords()).map_err(|e| e.to_string())?;
        let spectrum = spectra::singular_values(&frame.a).map_err(|e| e.to_string())?;
        let weight = spectra::rho(&frame);
        let rho = if weight.defined {
            rho_min = rho_min.min(weight.rho);
            rho_max = rho_max.max(weight.rho);
            weight.rho
        } else {
            excluded += 1;
            -1.0
        };
        min_dep = min_dep.min(probe.sigma_k_norm);
        points.push(AnalyzePoint {
            x: point.coords().to_vec(),
            radius: probe.radius,
            f_norm: probe.f_norm,
            sigmas: spectrum.sigmas,
            sigma_k_norm: probe.sigma_k_norm,
            sigma_aug_norm: probe.sigma_aug_norm,
            rho,
        });
    }
    let report = AnalyzeReport {
        map: map.label().to_string(),
        n: map.n(),
        k: map.k(),
        samples: points.len(),
        excluded,
        rho_min: (rho_min.is_finite()).then_some(rho_min),
        rho_max: (rho_max.is_finite()).then_some(rho_max),
        min_sigma_k_norm: min_dep,
        points,
    };
    match job.format {
        Format::Json => emit_json(job, &report)?,
        Format::Csv => emit(job, &analyze_csv(&report))?,
    }
    Ok(0)
}

fn analyze_csv(report: &AnalyzeReport) -> String {
    let mut out = String::new();
    for i in 0..report.n {
        let _ = write!(out, "x{i},");
    }
    out.push_str("radius,f_norm,");
    for j in 1..=report.k {
        let _ = write!(out, "sigma_{j},");
    }
    out.push_str("sigma_k_norm,sigma_aug_norm,rho\n");
    for p in &report.points {
        for c in &p.x {
            let _ = write!(out, "{c},");
        }
        let _ = write!(out, "{},{},", p.radius, p.f_norm);
        for s in &p.sigmas {
            let _ = write!(out, "{s},");
        }
        let _ = writeln!(out, "{},{},{}", p.sigma_k_norm, p.sigma_aug_norm, p.rho);
    }
    out
}

fn loja_fit(job: &Job) -> Result<u8, String> {
    reject_csv(job, "loja-fit")?;
    let map = load_map(job)?;
    let region = region_for(job, &map)?;
    let estimate: LojaEstimate =
        loja::loja_fit(&map, &region.center, &region, job.variant, job.c_mode)
            .map_err(|e| e.to_string())?;
    let valid = estimate.valid;
    emit_json(job, &estimate)?;
    Ok(if valid { 0 } else { 2 })
}

#[derive(Serialize)]
struct WeightCommandReport {
    weight: WeightReport,
    /// True when the Gram matrix stays scalar and the weight stays at one
    /// across the region.
    simple: bool,
    crosscheck: EquivCrossCheck,
}

fn weight(job: &Job) -> Result<u8, String> {
    reject_csv(job, "weight")?;
    let map = load_map(job)?;
    let region = region_for(job, &map)?;
    let weight = loja::rho_inf_estimate(&map, &region).map_err(|e| e.to_string())?;
    let crosscheck = loja::jacequiv_crosscheck(&map, &region).map_err(|e| e.to_string())?;
    let simple = weight.rho_inf_hat >= 1.0 - loja::tol::SIMPLE_DEVIATION
        && weight.simple_deviation <= loja::tol::SIMPLE_DEVIATION;
    emit_json(
        job,
        &WeightCommandReport {
            weight,
            simple,
            crosscheck,
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct MilnorScanReport {
    condition_a: ConditionReport,
    condition_b: ConditionReport,
    holds: bool,
}

fn milnor_scan(job: &Job) -> Result<u8, String> {
    reject_csv(job, "milnor-scan")?;
    let map = load_map(job)?;
    let region = region_for(job, &map)?;
    let condition_a = milnor::milnor_a_scan(&map, &region, job.tol_dep, job.tol_f)
        .map_err(|e| e.to_string())?;
    let condition_b = milnor::milnor_b_scan(
        &map,
        &region,
        job.tol_dep,
        job.tol_f,
        job.effective_r_min(),
    )
    .map_err(|e| e.to_string())?;
    let holds = condition_a.verdict.holds() && condition_b.verdict.holds();
    emit_json(
        job,
        &MilnorScanReport {
            condition_a,
            condition_b,
            holds,
        },
    )?;
    Ok(if holds { 0 } else { 2 })
}

fn pair_scan(job: &Job) -> Result<u8, String> {
    reject_csv(job, "pair-scan")?;
    let map = load_map(job)?;
    let estimate: MilnorPairEstimate =
        milnor::milnor_pair_scan(&map, job.epsilon, job.delta, job.tube_samples, job.seed)
            .map_err(|e| e.to_string())?;
    let holds = estimate.verdict.holds();
    emit_json(job, &estimate)?;
    Ok(if holds { 0 } else { 2 })
}

#[derive(Serialize)]
struct ConditionCReport {
    scan: ConditionReport,
    /// Present when the simple-pair diagnostics apply; errors inside the
    /// diagnostics never mask the scan itself.
    simple_facts: Option<SimpleFactsReport>,
}

fn condition_c(job: &Job) -> Result<u8, String> {
    reject_csv(job, "condition-c")?;
    let map = load_map(job)?;
    let region = region_for(job, &map)?;
    let scan = milnor::condition_c_scan(&map, &region, job.span_tol)
        .map_err(|e| e.to_string())?;
    let simple_facts = milnor::simple_c_facts(&map, &region).ok();
    let holds = scan.verdict.holds();
    emit_json(job, &ConditionCReport { scan, simple_facts })?;
    Ok(if holds { 0 } else { 2 })
}

/// Weight samples on a coordinate plane, row-major: `values[r * resolution
/// + c]` is the weight at axis-0 coordinate `lerp(c)` and axis-1 coordinate
/// `lerp(r)`, with every other coordinate at the region center. Undefined
/// cells carry -1.
#[derive(Serialize)]
pub struct RhoGrid {
    map: String,
    axes: [usize; 2],
    bounds: [f64; 2],
    resolution: usize,
    values: Vec<f64>,
}

fn rho_grid(job: &Job) -> Result<u8, String> {
    let map = load_map(job)?;
    let n = map.n();
    let [i, j] = job.axes;
    if i == j || i >= n || j >= n {
        return Err(format!(
            "grid axes {i},{j} must be distinct indices below the map dimension {n}"
        ));
    }
    if job.grid_res < 2 {
        return Err("grid resolution must be at least 2".into());
    }
    let [lo, hi] = job.grid_bounds();
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("grid bounds {lo},{hi} must be finite and increasing"));
    }
    let base = match &job.center {
        Some(coords) if coords.len() != n => {
            return Err(format!(
                "region center has {} coordinates but the map takes {n}",
                coords.len()
            ));
        }
        Some(coords) => coords.clone(),
        None => vec![0.0; n],
    };
    let res = job.grid_res;
    let lerp = |t: usize| lo + (hi - lo) * (t as f64) / ((res - 1) as f64);
    let mut values = Vec::with_capacity(res * res);
    for r in 0..res {
        for c in 0..res {
            let mut x = base.clone();
            x[i] = lerp(c);
            x[j] = lerp(r);
            let frame = map.gradient_frame(&x).map_err(|e| e.to_string())?;
            let weight = spectra::rho(&frame);
            if weight.defined && !(0.0..=1.0 + 1e-10).contains(&weight.rho) {
                return Err(format!(
                    "weight {} at grid cell ({r},{c}) escapes [0, 1]",
                    weight.rho
                ));
            }
            values.push(if weight.defined { weight.rho } else { -1.0 });
        }
    }
    let grid = RhoGrid {
        map: map.label().to_string(),
        axes: [i, j],
        bounds: [lo, hi],
        resolution: res,
        values,
    };
    match job.format {
        Format::Json => emit_json(job, &grid)?,
        Format::Csv => {
            let mut out = format!("x{i},x{j},rho\n");
            for r in 0..res {
                for c in 0..res {
                    let _ = writeln!(
                        out,
                        "{},{},{}",
                        lerp(c),
                        lerp(r),
                        grid.values[r * res + c]
                    );
                }
            }
            emit(job, &out)?;
        }
    }
    Ok(0)
}

fn verify_cmd(job: &Job) -> Result<u8, String> {
    reject_csv(job, "verify")?;
    let reports: Vec<PropertyReport> =
        verify::run_suite(job.suite, job.trials, job.seed).map_err(|e| e.to_string())?;
    let mut summary = String::new();
    for r in &reports {
        let _ = writeln!(
            summary,
            "{}: {}/{} trials pass",
            r.name,
            r.trials - r.failures,
            r.trials
        );
    }
    let failing: Vec<&PropertyReport> = reports.iter().filter(|r| !r.passed()).collect();
    for r in &failing {
        let _ = writeln!(
            summary,
            "violation in {}: {}",
            r.name,
            r.example.as_deref().unwrap_or("(no example captured)")
        );
    }
    let _ = writeln!(
        summary,
        "{}/{} properties pass",
        reports.len() - failing.len(),
        reports.len()
    );
    print!("{summary}");
    if job.output_path.is_some() {
        emit_json(job, &reports)?;
    }
    Ok(if failing.is_empty() { 0 } else { 2 })
}
