//! Randomized self-checks for the spectral inequalities, the envelope
//! fitter, and the condition scanners.
//!
//! Each property draws seeded instances, replays a claimed invariant, and
//! reports trial/failure counts plus a serialized description of the first
//! violating instance so it can be replayed by hand. The suites are what
//! the command-line `verify` command runs.

use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::loja::{self, CMode, Variant};
use crate::map::{AnalyticMap, Point};
use crate::mat::Mat;
use crate::milnor;
use crate::region::RegionSpec;
use crate::sampling::{norm, Sampler};
use crate::spectra::{self, singular_values, GradientFrame};

/// Which property family to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Spectra,
    Loja,
    Milnor,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "spectra" => Ok(Suite::Spectra),
            "loja" => Ok(Suite::Loja),
            "milnor" => Ok(Suite::Milnor),
            other => Err(Error::InvalidInput(format!("unknown suite '{other}'"))),
        }
    }
}

/// Outcome of one property.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// First violating instance, serialized for replay.
    pub example: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Checker {
    trials: usize,
    failures: usize,
    example: Option<String>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            trials: 0,
            failures: 0,
            example: None,
        }
    }

    fn check<F: FnOnce() -> String>(&mut self, ok: bool, describe: F) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.example.is_none() {
                self.example = Some(describe());
            }
        }
    }

    fn finish(self, name: &str) -> PropertyReport {
        PropertyReport {
            name: name.to_string(),
            trials: self.trials,
            failures: self.failures,
            example: self.example,
        }
    }
}

fn pick(s: &mut Sampler, upper: usize) -> usize {
    ((s.uniform01() * upper as f64) as usize).min(upper - 1)
}

fn random_mat(s: &mut Sampler, rows: usize, cols: usize) -> Mat {
    let rows_data: Vec<Vec<f64>> = (0..rows)
        .map(|_| (0..cols).map(|_| s.gaussian()).collect())
        .collect();
    Mat::from_rows(&rows_data).expect("gaussian entries are finite")
}

fn mat_json(m: &Mat) -> String {
    serde_json::to_string(m).expect("matrix serializes")
}

fn orthonormal_columns(s: &mut Sampler, n: usize, k: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    while basis.len() < k {
        let mut v: Vec<f64> = (0..n).map(|_| s.gaussian()).collect();
        for _ in 0..2 {
            for q in &basis {
                let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= d * qi;
                }
            }
        }
        let len = norm(&v);
        if len > 1e-6 {
            for vi in v.iter_mut() {
                *vi /= len;
            }
            basis.push(v);
        }
    }
    basis
}

fn doubled(map: &AnalyticMap) -> AnalyticMap {
    let comps: Vec<Expr> = map
        .components()
        .iter()
        .map(|c| Expr::Mul(vec![Expr::con(2.0), c.clone()]))
        .collect();
    AnalyticMap::new(map.n(), map.k(), comps, format!("{}-doubled", map.label()))
        .expect("scaling preserves validity")
}

/// Random planar quadratic pair with coefficients in [-2, 2].
fn random_quadratic_pair(s: &mut Sampler) -> AnalyticMap {
    let component = |s: &mut Sampler| -> Expr {
        let c = |s: &mut Sampler| Expr::con(4.0 * s.uniform01() - 2.0);
        let x = Expr::var(0);
        let y = Expr::var(1);
        Expr::Add(vec![
            Expr::Mul(vec![c(s), x.clone()]),
            Expr::Mul(vec![c(s), y.clone()]),
            Expr::Mul(vec![c(s), x.clone(), x.clone()]),
            Expr::Mul(vec![c(s), x, y.clone()]),
            Expr::Mul(vec![c(s), y.clone(), y]),
        ])
    };
    let g = component(s);
    let h = component(s);
    AnalyticMap::new(2, 2, vec![g, h], "random-quadratic").expect("valid random pair")
}

fn pair_corpus() -> Vec<AnalyticMap> {
    corpus::all().into_iter().filter(|m| m.k() == 2).collect()
}

fn simple_pair_corpus() -> Vec<AnalyticMap> {
    vec![corpus::z_power(2), corpus::z_power(3), corpus::zbar_w2()]
}

// ---------------------------------------------------------------------------
// spectra properties
// ---------------------------------------------------------------------------

fn prop_sigma1_trace_bounds(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 101);
    let mut c = Checker::new();
    for _ in 0..trials {
        let n = 1 + pick(&mut s, 6);
        let k = 1 + pick(&mut s, 4);
        let a = random_mat(&mut s, n, k);
        let spec = singular_values(&a).expect("finite");
        if spec.trace <= spectra::tol::ZERO_FLOOR {
            continue;
        }
        let ratio = spec.sigma_max() / spec.trace.sqrt();
        let lo = 1.0 / (k as f64).sqrt();
        c.check(ratio >= lo - 1e-10 && ratio <= 1.0 + 1e-10, || {
            format!("sigma1/sqrt(tr) = {ratio} outside [{lo}, 1] for A = {}", mat_json(&a))
        });
    }
    c.finish("sigma1-trace-bounds")
}

fn prop_transpose_spectrum(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 102);
    let mut c = Checker::new();
    for _ in 0..trials {
        let n = 1 + pick(&mut s, 6);
        let k = 1 + pick(&mut s, 4);
        let a = random_mat(&mut s, n, k);
        let direct = singular_values(&a).expect("finite").sigmas;
        let transposed = singular_values(&a.transpose()).expect("finite").sigmas;
        let shared = direct.len().min(transposed.len());
        let sigma1 = direct.first().copied().unwrap_or(0.0);
        let tol = 1e-10 * (1.0 + sigma1);
        // Rank-deficient frames carry numerical zeros of order
        // sqrt(ulp * trace), so the padding check is looser.
        let zero_tol = 1e-7 * (1.0 + sigma1);
        let mut ok = true;
        for i in 0..shared {
            ok &= (direct[i] - transposed[i]).abs() <= tol;
        }
        for extra in direct.iter().skip(shared) {
            ok &= *extra <= zero_tol;
        }
        for extra in transposed.iter().skip(shared) {
            ok &= *extra <= zero_tol;
        }
        c.check(ok, || {
            format!(
                "spectra {:?} vs {:?} for A = {}",
                direct,
                transposed,
                mat_json(&a)
            )
        });
    }
    c.finish("transpose-spectrum")
}

fn prop_prodsv_chain(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 103);
    let mut c = Checker::new();
    for _ in 0..trials {
        let n = 1 + pick(&mut s, 6);
        let k = 1 + pick(&mut s, 4);
        let m = 1 + pick(&mut s, 6);
        let a = random_mat(&mut s, n, k);
        let b = random_mat(&mut s, m, n);
        let report = spectra::check_prodsv(&a, &b).expect("conforming shapes");
        c.check(report.holds, || {
            format!(
                "product bound violated: {report:?} for A = {}, B = {}",
                mat_json(&a),
                mat_json(&b)
            )
        });
    }
    c.finish("prodsv-chain")
}

fn prop_trace_sandwich(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 104);
    let mut c = Checker::new();
    for _ in 0..trials {
        let n = 1 + pick(&mut s, 6);
        let k = 1 + pick(&mut s, 4);
        let m = 1 + pick(&mut s, 6);
        let a = random_mat(&mut s, n, k);
        let b = random_mat(&mut s, m, n);
        let report = spectra::check_trace_sandwich(&a, &b).expect("conforming shapes");
        c.check(report.holds, || {
            format!(
                "trace sandwich violated: {report:?} for A = {}, B = {}",
                mat_json(&a),
                mat_json(&b)
            )
        });
    }
    c.finish("trace-sandwich")
}

fn prop_slw_lower_bound(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 105);
    let mut c = Checker::new();
    for _ in 0..trials {
        let n = 1 + pick(&mut s, 6);
        let k = 1 + pick(&mut s, 4);
        let m = 1 + pick(&mut s, 6);
        let a = random_mat(&mut s, n, k);
        let b = random_mat(&mut s, m, n);
        match spectra::check_slw_bound(&a, &b) {
            Ok(report) => c.check(report.holds, || {
                format!(
                    "weight bound violated: {report:?} for A = {}, B = {}",
                    mat_json(&a),
                    mat_json(&b)
                )
            }),
            Err(Error::Precondition(_)) => continue,
            Err(other) => c.check(false, || format!("unexpected error {other}")),
        }
    }
    c.finish("slw-lower-bound")
}

fn prop_geom_mean(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 106);
    let mut c = Checker::new();
    for trial in 0..trials {
        let k = 1 + pick(&mut s, 4);
        let n = k + pick(&mut s, 3);
        let m = if trial % 3 == 0 {
            let scale = 0.5 + 1.5 * s.uniform01();
            let cols: Vec<Vec<f64>> = orthonormal_columns(&mut s, n, k)
                .into_iter()
                .map(|col| col.into_iter().map(|v| v * scale).collect())
                .collect();
            Mat::from_columns(&cols).expect("finite columns").gram()
        } else {
            random_mat(&mut s, n, k).gram()
        };
        let report = spectra::check_geom_mean(&m).expect("gram is symmetric");
        let mut ok = report.holds && report.characterization_consistent;
        if trial % 3 == 0 {
            ok &= report.equality;
        }
        c.check(ok, || format!("geom-mean check {report:?} for M = {}", mat_json(&m)));
    }
    c.finish("geom-mean-amgm")
}

fn prop_oracle_upper_bound(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 107);
    let mut c = Checker::new();
    for trial in 0..trials {
        let n = 1 + pick(&mut s, 6);
        let k = 1 + pick(&mut s, 4);
        let a = random_mat(&mut s, n, k);
        let spec = singular_values(&a).expect("finite");
        let oracle = spectra::sigma_min_oracle(&a, 200, seed ^ trial as u64);
        c.check(
            oracle >= spec.sigma_min() - 1e-6 && oracle <= spec.sigma_max() + 1e-9,
            || {
                format!(
                    "oracle {oracle} vs sigma_min {} for A = {}",
                    spec.sigma_min(),
                    mat_json(&a)
                )
            },
        );
    }
    c.finish("oracle-upper-bound")
}

fn prop_sigma_continuity(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 108);
    let mut c = Checker::new();
    for _ in 0..trials {
        let n = 1 + pick(&mut s, 6);
        let k = 1 + pick(&mut s, 4);
        let a = random_mat(&mut s, n, k);
        let mut rows = a.to_rows();
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                *v += 2e-8 * s.uniform01() - 1e-8;
            }
        }
        let b = Mat::from_rows(&rows).expect("finite");
        let sa = singular_values(&a).expect("finite").sigmas;
        let sb = singular_values(&b).expect("finite").sigmas;
        let ok = sa.iter().zip(&sb).all(|(x, y)| (x - y).abs() <= 1e-6);
        c.check(ok, || {
            format!("perturbed spectrum moved: {sa:?} vs {sb:?} for A = {}", mat_json(&a))
        });
    }
    c.finish("sigma-continuity")
}

fn prop_rho_angle_agreement(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 109);
    let mut c = Checker::new();
    for _ in 0..trials {
        let n = 2 + pick(&mut s, 5);
        let a = random_mat(&mut s, n, 2);
        let frame = GradientFrame::new(Point::origin(n), a.clone()).expect("finite");
        if frame.m.trace() <= spectra::tol::ZERO_FLOOR {
            continue;
        }
        let direct = spectra::rho(&frame).rho;
        let angled = spectra::rho_f_angle(&frame).expect("pair frame");
        c.check((direct - angled).abs() <= 1e-8, || {
            format!("rho {direct} vs angle form {angled} for A = {}", mat_json(&a))
        });
    }
    c.finish("rho-angle-agreement")
}

// ---------------------------------------------------------------------------
// loja properties
// ---------------------------------------------------------------------------

fn random_region(s: &mut Sampler, n: usize) -> RegionSpec {
    let radius = 0.25 + 0.5 * s.uniform01();
    let levels = 4 + pick(s, 8) as u32;
    let dirs = 4 + pick(s, 8) as u32;
    let seed = (s.uniform01() * 1e9) as u64;
    RegionSpec::origin(n, radius, levels, dirs, seed).expect("valid region")
}

fn prop_envelope_feasible(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 201);
    let mut c = Checker::new();
    let maps = corpus::all();
    for _ in 0..trials {
        let map = &maps[pick(&mut s, maps.len())];
        let region = random_region(&mut s, map.n());
        let variant = if s.uniform01() < 0.5 {
            Variant::Strong
        } else {
            Variant::Weak
        };
        let c_mode = if s.uniform01() < 0.5 {
            CMode::FixedOne
        } else {
            CMode::TwoParam
        };
        match loja::loja_fit(map, &Point::origin(map.n()), &region, variant, c_mode) {
            Ok(est) => c.check(
                est.theta_hat >= 0.0 && est.max_residual <= loja::tol::RESIDUAL_SLACK,
                || format!("infeasible fit {est:?} on {}", map.label()),
            ),
            Err(Error::InsufficientData { .. }) => continue,
            Err(other) => c.check(false, || format!("unexpected error {other}")),
        }
    }
    c.finish("envelope-feasible")
}

fn prop_envelope_level_monotone(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 202);
    let mut c = Checker::new();
    let maps = [
        corpus::z_power(2),
        corpus::z_power(3),
        corpus::z_power(4),
        corpus::identity2(),
    ];
    for _ in 0..trials {
        let map = &maps[pick(&mut s, maps.len())];
        let base_levels = 4 + pick(&mut s, 8) as u32;
        let extra = 1 + pick(&mut s, 8) as u32;
        let dirs = 4 + pick(&mut s, 12) as u32;
        let region_seed = (s.uniform01() * 1e9) as u64;
        let fit = |levels: u32| {
            let region =
                RegionSpec::origin(2, 0.5, levels, dirs, region_seed).expect("valid region");
            loja::loja_fit(
                map,
                &Point::origin(2),
                &region,
                Variant::Strong,
                CMode::FixedOne,
            )
        };
        match (fit(base_levels), fit(base_levels + extra)) {
            (Ok(shallow), Ok(deep)) => {
                c.check(shallow.theta_hat <= deep.theta_hat + 1e-12, || {
                    format!(
                        "theta dropped from {} to {} on {} when deepening {} -> {}",
                        shallow.theta_hat,
                        deep.theta_hat,
                        map.label(),
                        base_levels,
                        base_levels + extra
                    )
                });
            }
            _ => continue,
        }
    }
    c.finish("envelope-level-monotone")
}

fn prop_strong_weak_simple(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 203);
    let mut c = Checker::new();
    for _ in 0..trials.min(24) {
        let d = 2 + pick(&mut s, 3);
        let map = corpus::z_power(d as u32);
        let region_seed = (s.uniform01() * 1e9) as u64;
        let region = RegionSpec::origin(2, 0.5, 20, 8, region_seed).expect("valid region");
        let strong = loja::loja_fit(
            &map,
            &Point::origin(2),
            &region,
            Variant::Strong,
            CMode::FixedOne,
        );
        let weak = loja::loja_fit(
            &map,
            &Point::origin(2),
            &region,
            Variant::Weak,
            CMode::FixedOne,
        );
        match (strong, weak) {
            (Ok(a), Ok(b)) => c.check((a.theta_hat - b.theta_hat).abs() <= 0.01, || {
                format!(
                    "strong {} vs weak {} exponents diverge on z^{d}",
                    a.theta_hat, b.theta_hat
                )
            }),
            _ => c.check(false, || format!("fit failed on z^{d}")),
        }
    }
    c.finish("strong-weak-simple")
}

fn prop_rho_inf_range(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 204);
    let mut c = Checker::new();
    let maps = corpus::all();
    for _ in 0..trials {
        let map = &maps[pick(&mut s, maps.len())];
        let region = random_region(&mut s, map.n());
        match loja::rho_inf_estimate(map, &region) {
            Ok(report) => c.check(
                report.rho_inf_hat >= 0.0 && report.rho_inf_hat <= 1.0 + 1e-10,
                || format!("weight {} out of range on {}", report.rho_inf_hat, map.label()),
            ),
            Err(Error::DegenerateMap(_)) => continue,
            Err(other) => c.check(false, || format!("unexpected error {other}")),
        }
    }
    c.finish("rho-inf-range")
}

fn prop_simple_detect_corpus(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 205);
    let mut c = Checker::new();
    let simple = [
        corpus::z_power(2),
        corpus::z_power(3),
        corpus::zbar_w2(),
        corpus::identity2(),
    ];
    let crooked = [
        corpus::shear_z2(),
        corpus::linear_12_34(),
        corpus::parallel_pair(),
        corpus::sphere_plus_x(),
        corpus::x_xy(),
    ];
    for _ in 0..trials.min(12) {
        let region_seed = (s.uniform01() * 1e9) as u64;
        for map in &simple {
            let region =
                RegionSpec::origin(map.n(), 0.5, 5, 8, region_seed).expect("valid region");
            let report = loja::rho_inf_estimate(map, &region).expect("nondegenerate");
            c.check(
                report.rho_inf_hat >= 1.0 - 1e-9
                    && report.simple_deviation <= loja::tol::SIMPLE_DEVIATION,
                || format!("simple map {} misdetected: {report:?}", map.label()),
            );
        }
        for map in &crooked {
            let region =
                RegionSpec::origin(map.n(), 0.5, 5, 8, region_seed).expect("valid region");
            let report = loja::rho_inf_estimate(map, &region).expect("nondegenerate");
            c.check(
                report.simple_deviation > loja::tol::SIMPLE_DEVIATION
                    || report.rho_inf_hat < 1.0 - 1e-9,
                || format!("{} wrongly detected simple: {report:?}", map.label()),
            );
        }
    }
    c.finish("simple-detect-corpus")
}

fn prop_jacequiv_consistent(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 206);
    let mut c = Checker::new();
    let comparable = [
        corpus::z_power(2),
        corpus::z_power(3),
        corpus::zbar_w2(),
        corpus::shear_z2(),
        corpus::linear_12_34(),
        corpus::identity2(),
        corpus::parallel_pair(),
    ];
    for _ in 0..trials.min(24) {
        let region_seed = (s.uniform01() * 1e9) as u64;
        for map in &comparable {
            let region =
                RegionSpec::origin(map.n(), 0.5, 5, 8, region_seed).expect("valid region");
            let cross = loja::jacequiv_crosscheck(map, &region).expect("pair corpus");
            c.check(
                cross.applicable
                    && cross.verdicts_agree == Some(true)
                    && cross.bracket_respected == Some(true),
                || format!("crosscheck inconsistent on {}: {cross:?}", map.label()),
            );
        }
    }
    c.finish("jacequiv-consistent")
}

fn prop_easycomp_equality(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 207);
    let mut c = Checker::new();
    for _ in 0..trials.min(20) {
        let region_seed = (s.uniform01() * 1e9) as u64;
        let region = RegionSpec::origin(2, 0.5, 5, 10, region_seed).expect("valid region");
        let report =
            loja::composition_weight_check(&corpus::linear_12_34(), &corpus::z_power(2), &region)
                .expect("composable");
        c.check(
            report.h_simple
                && report.holds
                && report.equality_max_dev.map_or(false, |d| d <= 1e-8),
            || format!("composition equality failed: {report:?}"),
        );
    }
    c.finish("easycomp-equality")
}

fn prop_composition_bound(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 208);
    let mut c = Checker::new();
    for _ in 0..trials {
        let outer = random_quadratic_pair(&mut s);
        let inner = if s.uniform01() < 0.5 {
            corpus::z_power(2)
        } else {
            random_quadratic_pair(&mut s)
        };
        let region_seed = (s.uniform01() * 1e9) as u64;
        let region = RegionSpec::origin(2, 0.5, 4, 8, region_seed).expect("valid region");
        match loja::composition_weight_check(&outer, &inner, &region) {
            Ok(report) => c.check(report.bound_violations == 0, || {
                format!(
                    "composition bound violated: {report:?} with outer {:?}",
                    outer.components()
                )
            }),
            Err(Error::DegenerateMap(_)) => continue,
            Err(other) => c.check(false, || format!("unexpected error {other}")),
        }
    }
    c.finish("composition-bound")
}

// ---------------------------------------------------------------------------
// milnor properties
// ---------------------------------------------------------------------------

fn prop_probe_scale_invariant(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 301);
    let mut c = Checker::new();
    let maps = corpus::all();
    for _ in 0..trials {
        let map = &maps[pick(&mut s, maps.len())];
        let twice = doubled(map);
        let x = Point::new(s.in_ball(map.n(), 1.0)).expect("finite draw");
        let p1 = milnor::probe(map, &x).expect("probe");
        let p2 = milnor::probe(&twice, &x).expect("probe");
        let ok = (p1.sigma_k_norm - p2.sigma_k_norm).abs() <= 1e-9
            && (p1.f_norm * 2.0 - p2.f_norm).abs() <= 1e-12 * (1.0 + p2.f_norm)
            && p1.radius == p2.radius;
        c.check(ok, || {
            format!(
                "scaling changed probe on {} at {:?}: {p1:?} vs {p2:?}",
                map.label(),
                x
            )
        });
    }
    c.finish("probe-scale-invariant")
}

fn prop_simple_a_holds(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 302);
    let mut c = Checker::new();
    let mut maps = simple_pair_corpus();
    maps.push(corpus::identity2());
    for trial in 0..trials.min(16) {
        let map = &maps[trial % maps.len()];
        let region_seed = (s.uniform01() * 1e9) as u64;
        let region = RegionSpec::origin(map.n(), 0.5, 4, 8, region_seed).expect("valid region");
        let report = milnor::milnor_a_scan(
            map,
            &region,
            milnor::defaults::TOL_DEP,
            milnor::defaults::TOL_F,
        )
        .expect("scan");
        c.check(report.verdict.holds(), || {
            format!("condition (a) failed on simple map {}: {report:?}", map.label())
        });
    }
    c.finish("simple-a-holds")
}

fn prop_simple_c_holds(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 303);
    let mut c = Checker::new();
    let maps = simple_pair_corpus();
    for trial in 0..trials.min(30) {
        let map = &maps[trial % maps.len()];
        let region_seed = (s.uniform01() * 1e9) as u64;
        let region = RegionSpec::origin(map.n(), 0.5, 5, 10, region_seed).expect("valid region");
        let report = milnor::condition_c_scan(map, &region, milnor::defaults::SPAN_TOL)
            .expect("pair scan");
        c.check(report.verdict.holds(), || {
            format!("condition (c) failed on simple map {}: {report:?}", map.label())
        });
    }
    c.finish("simple-c-holds")
}

fn prop_pair_delta_monotone(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 304);
    let mut c = Checker::new();
    let maps = [corpus::z_power(2), corpus::z_power(3), corpus::shear_z2()];
    for trial in 0..trials.min(6) {
        let map = &maps[trial % maps.len()];
        let delta = 0.005 + 0.01 * s.uniform01();
        let scan_seed = (s.uniform01() * 1e9) as u64;
        let first = milnor::milnor_pair_scan(map, 1.0, delta, 1000, scan_seed);
        let Ok(first) = first else { continue };
        if !first.verdict.holds() {
            continue;
        }
        let smaller = delta * (0.5 + 0.49 * s.uniform01());
        match milnor::milnor_pair_scan(map, 1.0, smaller, 1000, scan_seed) {
            Ok(second) => c.check(second.verdict.holds(), || {
                format!(
                    "pair verdict flipped on {} from delta {delta} to {smaller}: {second:?}",
                    map.label()
                )
            }),
            Err(err) => c.check(false, || format!("rescan failed: {err}")),
        }
    }
    c.finish("pair-delta-monotone")
}

fn prop_omega_vanishes_on_zero_set(trials: usize, seed: u64) -> PropertyReport {
    let mut s = Sampler::substream(seed, 305);
    let mut c = Checker::new();
    let maps = pair_corpus();
    for _ in 0..trials {
        let map = &maps[pick(&mut s, maps.len())];
        let x = Point::new(s.in_ball(map.n(), 1e-8)).expect("finite draw");
        let value = map.eval(x.coords()).expect("eval");
        if norm(&value) > 1e-14 {
            continue;
        }
        let omega = milnor::omega_field(map, &x).expect("pair");
        c.check(norm(&omega) <= 1e-12, || {
            format!("omega = {omega:?} off zero at {:?} on {}", x, map.label())
        });
    }
    c.finish("omega-vanishes-on-zero-set")
}

// ---------------------------------------------------------------------------
// suite runner
// ---------------------------------------------------------------------------

fn spectra_suite(trials: usize, seed: u64) -> Vec<PropertyReport> {
    vec![
        prop_sigma1_trace_bounds(trials, seed),
        prop_transpose_spectrum(trials, seed),
        prop_prodsv_chain(trials, seed),
        prop_trace_sandwich(trials, seed),
        prop_slw_lower_bound(trials, seed),
        prop_geom_mean(trials, seed),
        prop_oracle_upper_bound(trials, seed),
        prop_sigma_continuity(trials, seed),
        prop_rho_angle_agreement(trials, seed),
    ]
}

fn loja_suite(trials: usize, seed: u64) -> Vec<PropertyReport> {
    vec![
        prop_envelope_feasible(trials, seed),
        prop_envelope_level_monotone(trials, seed),
        prop_strong_weak_simple(trials, seed),
        prop_rho_inf_range(trials, seed),
        prop_simple_detect_corpus(trials, seed),
        prop_jacequiv_consistent(trials, seed),
        prop_easycomp_equality(trials, seed),
        prop_composition_bound(trials, seed),
    ]
}

fn milnor_suite(trials: usize, seed: u64) -> Vec<PropertyReport> {
    vec![
        prop_probe_scale_invariant(trials, seed),
        prop_simple_a_holds(trials, seed),
        prop_simple_c_holds(trials, seed),
        prop_pair_delta_monotone(trials, seed),
        prop_omega_vanishes_on_zero_set(trials, seed),
    ]
}

/// Runs the selected property suite with `trials` seeded instances per
/// property (corpus sweeps are capped internally) and returns one report
/// per property.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> Result<Vec<PropertyReport>> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    Ok(match suite {
        Suite::Spectra => spectra_suite(trials, seed),
        Suite::Loja => loja_suite(trials, seed),
        Suite::Milnor => milnor_suite(trials, seed),
        Suite::All => {
            let mut all = spectra_suite(trials, seed);
            all.extend(loja_suite(trials, seed));
            all.extend(milnor_suite(trials, seed));
            all
        }
    })
}
