//! Sampled detectors for the fibration conditions of a map germ G at the
//! origin.
//!
//! Two dependence sets drive everything. At a point x let A(x) be the
//! gradient frame. The set where the gradients are linearly dependent is
//! flagged by the normalized smallest singular value `sigma_k_norm`
//! dropping below a tolerance; the set where the radial direction joins the
//! dependence, i.e. the columns of the augmented frame [2x | A] are
//! dependent, is flagged by `sigma_aug_norm`.
//!
//! Condition (a) asks that gradient dependence only happens on the zero set
//! X = {G = 0} near the origin; condition (b) asks that augmented
//! dependence does not accumulate on X away from the origin. Both are
//! checked on seeded region samples, condition (a) additionally with a
//! local search that hunts for thin dependence loci the raw grid misses.
//! [`milnor_pair_scan`] checks the pair version on the tube {|G| = delta}
//! inside the ball of radius epsilon, and [`condition_c_scan`] evaluates
//! the projection inequality built from the field omega = -h grad g +
//! g grad h for pairs.
//!
//! Verdicts are sampled statements, never proofs: `holds-on-samples` means
//! no witness was found at the given tolerances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{AnalyticMap, Point};
use crate::region::RegionSpec;
use crate::sampling::{norm, Sampler};
use crate::spectra::{self, singular_values};

/// Default thresholds for the scans.
pub mod defaults {
    /// Normalized singular values below this count as dependent.
    pub const TOL_DEP: f64 = 1e-8;
    /// |G(x)| above this counts as off the zero set; at or below (but
    /// positive) counts as near it.
    pub const TOL_F: f64 = 1e-8;
    /// Span-membership residual bound for the condition (c) scan.
    pub const SPAN_TOL: f64 = 1e-6;
    /// Witnesses for condition (b) must sit outside this fraction of the
    /// region radius.
    pub const R_MIN_FRACTION: f64 = 0.01;
}

/// Which fibration condition a report speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    A,
    B,
    C,
    Pair,
}

/// Outcome of a sampled scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnSamples,
    Fails,
}

impl Verdict {
    pub fn holds(self) -> bool {
        matches!(self, Verdict::HoldsOnSamples)
    }
}

/// Thresholds a scan ran with. For the condition (c) scan `tol_dep` carries
/// the span residual bound and the other two fields are inert.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanTolerances {
    pub tol_dep: f64,
    pub tol_f: f64,
    pub r_min: f64,
}

/// Dependence measurements at a single point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DependenceProbe {
    pub x: Point,
    /// sigma_k(A) / sigma_1(A), or 0 when sigma_1 = 0.
    pub sigma_k_norm: f64,
    /// sigma_{k+1}([2x | A]) / sigma_1([2x | A]), or 0.
    pub sigma_aug_norm: f64,
    /// |G(x)|.
    pub f_norm: f64,
    /// |x|.
    pub radius: f64,
}

/// Builds the dependence probe at `x`: the normalized smallest singular
/// values of the gradient frame and of the radially augmented frame.
pub fn probe(map: &AnalyticMap, x: &Point) -> Result<DependenceProbe> {
    let value = map.eval(x.coords())?;
    let frame = map.gradient_frame(x.coords())?;
    let spec = singular_values(&frame.a)?;
    let radial: Vec<f64> = x.coords().iter().map(|c| 2.0 * c).collect();
    let aug_spec = singular_values(&frame.a.with_prepended_column(&radial))?;
    Ok(DependenceProbe {
        x: x.clone(),
        sigma_k_norm: ratio_or_zero(spec.sigma_min(), spec.sigma_max()),
        sigma_aug_norm: ratio_or_zero(aug_spec.sigma_min(), aug_spec.sigma_max()),
        f_norm: norm(&value),
        radius: x.norm(),
    })
}

fn ratio_or_zero(min: f64, max: f64) -> f64 {
    if max <= spectra::tol::ZERO_FLOOR {
        0.0
    } else {
        min / max
    }
}

fn probe_coords(map: &AnalyticMap, coords: &[f64]) -> Result<DependenceProbe> {
    probe(map, &Point::new(coords.to_vec())?)
}

/// Outcome of a condition scan over a sampled region.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: Verdict,
    /// Up to 32 witnessing probes; nonempty exactly when the verdict fails.
    pub witnesses: Vec<DependenceProbe>,
    pub tolerances: ScanTolerances,
    pub samples_scanned: usize,
}

fn push_witness(witnesses: &mut Vec<DependenceProbe>, probe: DependenceProbe) {
    if witnesses.len() < 32 {
        witnesses.push(probe);
    }
}

fn finish_report(
    condition: Condition,
    witnesses: Vec<DependenceProbe>,
    tolerances: ScanTolerances,
    samples_scanned: usize,
) -> ConditionReport {
    let verdict = if witnesses.is_empty() {
        Verdict::HoldsOnSamples
    } else {
        Verdict::Fails
    };
    ConditionReport {
        condition,
        verdict,
        witnesses,
        tolerances,
        samples_scanned,
    }
}

fn check_scan_inputs(map: &AnalyticMap, region: &RegionSpec, tols: &[f64]) -> Result<()> {
    if region.dim() != map.n() {
        return Err(Error::DimensionMismatch {
            context: "scan region",
            expected: map.n(),
            got: region.dim(),
        });
    }
    if tols.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::InvalidInput(
            "scan tolerances must be positive and finite".into(),
        ));
    }
    Ok(())
}

fn is_a_witness(p: &DependenceProbe, tol_dep: f64, tol_f: f64) -> bool {
    p.sigma_k_norm < tol_dep && p.f_norm > tol_f
}

/// Direction set for pattern search: all signed coordinate directions,
/// padded with seeded unit vectors up to twelve entries.
fn direction_set(n: usize, sampler: &mut Sampler) -> Vec<Vec<f64>> {
    let mut dirs = Vec::with_capacity(12.max(2 * n));
    for i in 0..n {
        let mut d = vec![0.0; n];
        d[i] = 1.0;
        dirs.push(d.clone());
        d[i] = -1.0;
        dirs.push(d);
    }
    while dirs.len() < 12 {
        dirs.push(sampler.unit_vector(n));
    }
    dirs
}

/// Compass pattern search. `eval` maps a trial point to a feasible
/// representative and its objective value, or `None` when infeasible. The
/// step halves whenever no direction improves; the search stops once the
/// value drops below `stop_below` or the step underflows.
fn pattern_minimize<F>(
    start: Vec<f64>,
    start_value: f64,
    initial_step: f64,
    dirs: &[Vec<f64>],
    max_rounds: usize,
    stop_below: f64,
    mut eval: F,
) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> Option<(Vec<f64>, f64)>,
{
    let mut x = start;
    let mut value = start_value;
    let mut step = initial_step;
    let min_step = initial_step * 1e-14;
    for _ in 0..max_rounds {
        if value < stop_below || step < min_step {
            break;
        }
        let mut improved = false;
        for d in dirs {
            let trial: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + step * b).collect();
            if let Some((representative, v)) = eval(&trial) {
                if v < value {
                    x = representative;
                    value = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, value)
}

/// Coordinate-zeroed variants of a point; dependence loci often sit on
/// coordinate hyperplanes, where cancellation-free arithmetic yields exact
/// singular-value zeros.
fn axis_snaps(coords: &[f64]) -> Vec<Vec<f64>> {
    (0..coords.len())
        .filter(|&i| coords[i] != 0.0)
        .map(|i| {
            let mut snapped = coords.to_vec();
            snapped[i] = 0.0;
            snapped
        })
        .collect()
}

/// Scans condition (a): gradient dependence is only tolerated on the zero
/// set. Witnesses have `sigma_k_norm < tol_dep` while `f_norm > tol_f`.
/// After the raw pass, a pattern search descends from the most dependent
/// raw samples to catch measure-zero dependence loci.
pub fn milnor_a_scan(
    map: &AnalyticMap,
    region: &RegionSpec,
    tol_dep: f64,
    tol_f: f64,
) -> Result<ConditionReport> {
    check_scan_inputs(map, region, &[tol_dep, tol_f])?;
    let mut witnesses = Vec::new();
    let mut scanned = 0usize;
    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();
    for point in region.samples() {
        let p = probe(map, &point)?;
        scanned += 1;
        if is_a_witness(&p, tol_dep, tol_f) {
            push_witness(&mut witnesses, p);
        } else if p.f_norm > tol_f {
            candidates.push((p.sigma_k_norm, point.coords().to_vec()));
        }
    }

    if witnesses.is_empty() {
        candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite measures"));
        candidates.truncate(8);
        let dirs = direction_set(map.n(), &mut Sampler::substream(region.seed, 11));
        let radius = region.radius;
        'seeds: for (seed_value, seed_coords) in candidates {
            let mut feasible = |coords: &[f64]| -> Option<(Vec<f64>, f64)> {
                if norm(coords) > radius {
                    return None;
                }
                let p = probe_coords(map, coords).ok()?;
                scanned += 1;
                if p.f_norm > tol_f {
                    Some((coords.to_vec(), p.sigma_k_norm))
                } else {
                    None
                }
            };
            let mut start = (seed_coords, seed_value);
            for snap in axis_snaps(&start.0) {
                if let Some((coords, value)) = feasible(&snap) {
                    if value < start.1 {
                        start = (coords, value);
                    }
                }
            }
            let (found, value) = pattern_minimize(
                start.0,
                start.1,
                radius / 4.0,
                &dirs,
                200,
                tol_dep,
                &mut feasible,
            );
            if value < tol_dep {
                let p = probe_coords(map, &found)?;
                if is_a_witness(&p, tol_dep, tol_f) {
                    push_witness(&mut witnesses, p);
                    break 'seeds;
                }
            }
        }
    }

    Ok(finish_report(
        Condition::A,
        witnesses,
        ScanTolerances {
            tol_dep,
            tol_f,
            r_min: 0.0,
        },
        scanned,
    ))
}

/// Scans condition (b): augmented dependence accumulating on the zero set
/// away from the origin. Witnesses have `sigma_aug_norm < tol_dep` at
/// points with 0 < |G| <= tol_f and |x| > r_min. Raw samples only; the
/// verdict speaks strictly about the seeded grid.
pub fn milnor_b_scan(
    map: &AnalyticMap,
    region: &RegionSpec,
    tol_dep: f64,
    tol_f: f64,
    r_min: f64,
) -> Result<ConditionReport> {
    check_scan_inputs(map, region, &[tol_dep, tol_f, r_min])?;
    let mut witnesses = Vec::new();
    let mut scanned = 0usize;
    for point in region.samples() {
        let p = probe(map, &point)?;
        scanned += 1;
        let near_zero_set = p.f_norm > spectra::tol::ZERO_FLOOR && p.f_norm <= tol_f;
        if p.sigma_aug_norm < tol_dep && near_zero_set && p.radius > r_min {
            push_witness(&mut witnesses, p);
        }
    }
    Ok(finish_report(
        Condition::B,
        witnesses,
        ScanTolerances {
            tol_dep,
            tol_f,
            r_min,
        },
        scanned,
    ))
}

/// One ball radius tried by [`milnor_radius_estimate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadiusTrial {
    pub epsilon: f64,
    pub condition_a: ConditionReport,
    pub condition_b: ConditionReport,
}

/// Outcome of the admissible-radius search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MilnorRadiusReport {
    /// Largest tried radius whose ball passes both scans, if any.
    pub admissible_epsilon: Option<f64>,
    pub trials: Vec<RadiusTrial>,
}

/// Runs both condition scans at every radius in `epsilons` (strictly
/// descending) with a shared seed and default tolerances, reporting the
/// largest radius passing both.
pub fn milnor_radius_estimate(
    map: &AnalyticMap,
    epsilons: &[f64],
    levels: u32,
    directions: u32,
    seed: u64,
) -> Result<MilnorRadiusReport> {
    if epsilons.is_empty() {
        return Err(Error::InvalidInput("need at least one radius".into()));
    }
    if epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidInput("radii must be positive and finite".into()));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("radii must be strictly descending".into()));
    }
    let mut trials = Vec::with_capacity(epsilons.len());
    let mut admissible = None;
    for &epsilon in epsilons {
        let region = RegionSpec::origin(map.n(), epsilon, levels, directions, seed)?;
        let condition_a = milnor_a_scan(map, &region, defaults::TOL_DEP, defaults::TOL_F)?;
        let condition_b = milnor_b_scan(
            map,
            &region,
            defaults::TOL_DEP,
            defaults::TOL_F,
            epsilon * defaults::R_MIN_FRACTION,
        )?;
        if admissible.is_none()
            && condition_a.verdict.holds()
            && condition_b.verdict.holds()
        {
            admissible = Some(epsilon);
        }
        trials.push(RadiusTrial {
            epsilon,
            condition_a,
            condition_b,
        });
    }
    Ok(MilnorRadiusReport {
        admissible_epsilon: admissible,
        trials,
    })
}

/// Transversality survey of the tube {|G| = delta} inside the epsilon ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MilnorPairEstimate {
    pub epsilon: f64,
    pub delta: f64,
    /// Draws successfully projected onto the tube.
    pub tube_points: usize,
    pub failed_projections: usize,
    pub interior_checked: usize,
    pub boundary_checked: usize,
    /// Minimum over tube samples of the applicable normalized singular
    /// value: sigma_k_norm strictly inside the ball, sigma_aug_norm in the
    /// boundary band where the sphere must also be crossed transversally.
    pub transversality_margin: f64,
    pub verdict: Verdict,
}

/// Projects `x` onto {|G| = delta} by Newton steps on |G|^2 - delta^2,
/// halving the step while the residual would grow. `None` when the run
/// does not converge inside the ball within 25 iterations.
fn project_to_tube(
    map: &AnalyticMap,
    mut x: Vec<f64>,
    delta: f64,
    epsilon: f64,
) -> Option<Vec<f64>> {
    let target = delta * delta;
    let value_sq = |coords: &[f64]| -> Option<f64> {
        let value = map.eval(coords).ok()?;
        let s: f64 = value.iter().map(|v| v * v).sum();
        s.is_finite().then_some(s)
    };
    let mut norm_sq = value_sq(&x)?;
    for _ in 0..25 {
        if (norm_sq.sqrt() - delta).abs() <= 1e-9 * delta {
            return (norm(&x) <= epsilon * (1.0 + 1e-9)).then_some(x);
        }
        let phi = norm_sq - target;
        let value = map.eval(&x).ok()?;
        let frame = map.gradient_frame(&x).ok()?;
        let grad: Vec<f64> = frame.a.apply(&value).iter().map(|v| 2.0 * v).collect();
        let grad_sq: f64 = grad.iter().map(|v| v * v).sum();
        if grad_sq <= spectra::tol::ZERO_FLOOR {
            return None;
        }
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<f64> = x
                .iter()
                .zip(&grad)
                .map(|(a, g)| a - scale * phi / grad_sq * g)
                .collect();
            if trial.iter().all(|c| c.is_finite()) {
                if let Some(trial_sq) = value_sq(&trial) {
                    if (trial_sq - target).abs() <= phi.abs() {
                        x = trial;
                        norm_sq = trial_sq;
                        accepted = true;
                        break;
                    }
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    None
}

/// Smallest applicable transversality measure at a tube point.
fn tube_margin(p: &DependenceProbe, epsilon: f64) -> f64 {
    let mut margin = f64::INFINITY;
    if p.radius < epsilon * (1.0 - 1e-6) {
        margin = margin.min(p.sigma_k_norm);
    }
    if p.radius >= epsilon * (1.0 - 1e-3) {
        margin = margin.min(p.sigma_aug_norm);
    }
    margin
}

/// Scans the Milnor pair condition for (epsilon, delta): draws points in
/// the ball, projects them onto the tube {|G| = delta}, and requires the
/// applicable dependence measure to stay above the tolerance, both at raw
/// tube points and under an adversarial projected pattern search from the
/// worst ones.
pub fn milnor_pair_scan(
    map: &AnalyticMap,
    epsilon: f64,
    delta: f64,
    tube_samples: usize,
    seed: u64,
) -> Result<MilnorPairEstimate> {
    if !(epsilon.is_finite() && epsilon > 0.0) || !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidInput(
            "epsilon and delta must be positive and finite".into(),
        ));
    }
    if tube_samples < 1000 {
        return Err(Error::InvalidInput(
            "tube scan needs at least 1000 draws".into(),
        ));
    }
    let n = map.n();
    let mut sampler = Sampler::substream(seed, 2);
    let mut tube: Vec<Vec<f64>> = Vec::new();
    let mut failed = 0usize;
    for _ in 0..tube_samples {
        match project_to_tube(map, sampler.in_ball(n, epsilon), delta, epsilon) {
            Some(x) => tube.push(x),
            None => failed += 1,
        }
    }
    if failed * 2 > tube_samples {
        return Err(Error::InsufficientData {
            operation: "milnor_pair_scan",
            detail: format!(
                "{failed} of {tube_samples} projections missed the tube; it may be empty"
            ),
        });
    }

    let mut margin = f64::INFINITY;
    let mut interior = 0usize;
    let mut boundary = 0usize;
    let mut ranked: Vec<(f64, Vec<f64>)> = Vec::with_capacity(tube.len());
    for coords in tube.iter() {
        let p = probe_coords(map, coords)?;
        if p.radius < epsilon * (1.0 - 1e-6) {
            interior += 1;
        }
        if p.radius >= epsilon * (1.0 - 1e-3) {
            boundary += 1;
        }
        let m = tube_margin(&p, epsilon);
        margin = margin.min(m);
        ranked.push((m, coords.clone()));
    }

    ranked.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite margins"));
    ranked.truncate(6);
    let dirs = direction_set(n, &mut Sampler::substream(seed, 5));
    let reproject = |coords: &[f64]| -> Option<(Vec<f64>, f64)> {
        let projected = project_to_tube(map, coords.to_vec(), delta, epsilon)?;
        let p = probe_coords(map, &projected).ok()?;
        Some((projected, tube_margin(&p, epsilon)))
    };
    for (value, coords) in ranked {
        let mut start = (coords, value);
        for snap in axis_snaps(&start.0) {
            if let Some((projected, v)) = reproject(&snap) {
                if v < start.1 {
                    start = (projected, v);
                }
            }
        }
        let (_, refined) = pattern_minimize(
            start.0,
            start.1,
            epsilon / 8.0,
            &dirs,
            120,
            defaults::TOL_DEP * 1e-4,
            reproject,
        );
        margin = margin.min(refined);
        if margin <= defaults::TOL_DEP {
            break;
        }
    }

    let verdict = if margin > defaults::TOL_DEP {
        Verdict::HoldsOnSamples
    } else {
        Verdict::Fails
    };
    Ok(MilnorPairEstimate {
        epsilon,
        delta,
        tube_points: tube.len(),
        failed_projections: failed,
        interior_checked: interior,
        boundary_checked: boundary,
        transversality_margin: margin,
        verdict,
    })
}

fn require_pair(map: &AnalyticMap, context: &'static str) -> Result<()> {
    if map.k() != 2 {
        return Err(Error::DimensionMismatch {
            context,
            expected: 2,
            got: map.k(),
        });
    }
    Ok(())
}

fn omega_from(a: &crate::mat::Mat, value: &[f64]) -> Vec<f64> {
    let g = value[0];
    let h = value[1];
    (0..a.rows()).map(|i| -h * a.get(i, 0) + g * a.get(i, 1)).collect()
}

/// The field omega = -h grad g + g grad h of a pair map; vanishes on the
/// zero set and spans the tangent of the phase circle elsewhere.
pub fn omega_field(map: &AnalyticMap, x: &Point) -> Result<Vec<f64>> {
    require_pair(map, "omega field")?;
    let value = map.eval(x.coords())?;
    let frame = map.gradient_frame(x.coords())?;
    Ok(omega_from(&frame.a, &value))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fraction of |x| left after projecting x onto the column span of `a`,
/// computed from an orthonormalized column basis.
pub fn span_residual(a: &crate::mat::Mat, x: &[f64]) -> f64 {
    let x_norm = norm(x);
    if x_norm <= spectra::tol::ZERO_FLOOR {
        return 0.0;
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for j in 0..a.cols() {
        let original = a.column(j);
        let scale = norm(&original);
        let mut col = original;
        for _ in 0..2 {
            for q in &basis {
                let d = dot(&col, q);
                for (c, qi) in col.iter_mut().zip(q) {
                    *c -= d * qi;
                }
            }
        }
        let remaining = norm(&col);
        if remaining > 1e-12 * (1.0 + scale) {
            for c in col.iter_mut() {
                *c /= remaining;
            }
            basis.push(col);
        }
    }
    let mut rest: Vec<f64> = x.to_vec();
    for _ in 0..2 {
        for q in &basis {
            let d = dot(&rest, q);
            for (r, qi) in rest.iter_mut().zip(q) {
                *r -= d * qi;
            }
        }
    }
    norm(&rest) / x_norm
}

/// Scans condition (c) for a pair: at samples off the zero set whose
/// position vector lies in the gradient span (residual below `span_tol`),
/// the strict inequality
/// |omega|^2 (x . grad|f|^2) > (grad|f|^2 . omega)(x . omega)
/// must hold. Violations (with relative slack 1e-12) become witnesses.
pub fn condition_c_scan(
    map: &AnalyticMap,
    region: &RegionSpec,
    span_tol: f64,
) -> Result<ConditionReport> {
    require_pair(map, "condition (c) scan")?;
    check_scan_inputs(map, region, &[span_tol])?;
    let mut witnesses = Vec::new();
    let mut scanned = 0usize;
    for point in region.samples() {
        scanned += 1;
        let value = map.eval(point.coords())?;
        if norm(&value) <= spectra::tol::ZERO_FLOOR {
            continue;
        }
        let frame = map.gradient_frame(point.coords())?;
        if span_residual(&frame.a, point.coords()) >= span_tol {
            continue;
        }
        let omega = omega_from(&frame.a, &value);
        let grad_sq: Vec<f64> = frame.a.apply(&value).iter().map(|v| 2.0 * v).collect();
        let lhs = dot(&omega, &omega) * dot(point.coords(), &grad_sq);
        let rhs = dot(&grad_sq, &omega) * dot(point.coords(), &omega);
        let slack = 1e-12 * lhs.abs().max(rhs.abs()).max(spectra::tol::ZERO_FLOOR);
        if lhs <= rhs + slack {
            push_witness(&mut witnesses, probe(map, &point)?);
        }
    }
    Ok(finish_report(
        Condition::C,
        witnesses,
        ScanTolerances {
            tol_dep: span_tol,
            tol_f: spectra::tol::ZERO_FLOOR,
            r_min: 0.0,
        },
        scanned,
    ))
}

/// The two pointwise facts that make condition (c) automatic for simple
/// pairs: the radial derivative of |f|^2 is positive off the zero set, and
/// grad|f|^2 is orthogonal to omega.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimpleFactsReport {
    /// True when the map was detected simple on the region.
    pub applicable: bool,
    pub simple_deviation: f64,
    pub samples_checked: usize,
    /// Minimum of x . grad|f|^2 over checked samples.
    pub min_radial_slope: f64,
    pub radial_positive: bool,
    /// Maximum of |grad|f|^2 . omega| / (1 + |grad|f|^2||omega|).
    pub max_orthogonality_dev: f64,
    pub orthogonal: bool,
    pub holds: bool,
}

pub fn simple_c_facts(map: &AnalyticMap, region: &RegionSpec) -> Result<SimpleFactsReport> {
    require_pair(map, "simple pair facts")?;
    check_scan_inputs(map, region, &[])?;
    let weight = crate::loja::rho_inf_estimate(map, region)?;
    let applicable = weight.simple_deviation <= crate::loja::tol::SIMPLE_DEVIATION;
    if !applicable {
        return Ok(SimpleFactsReport {
            applicable: false,
            simple_deviation: weight.simple_deviation,
            samples_checked: 0,
            min_radial_slope: 0.0,
            radial_positive: false,
            max_orthogonality_dev: 0.0,
            orthogonal: false,
            holds: false,
        });
    }
    let mut checked = 0usize;
    let mut min_radial = f64::INFINITY;
    let mut max_dev: f64 = 0.0;
    for point in region.samples() {
        let value = map.eval(point.coords())?;
        if norm(&value) <= spectra::tol::ZERO_FLOOR {
            continue;
        }
        let frame = map.gradient_frame(point.coords())?;
        let omega = omega_from(&frame.a, &value);
        let grad_sq: Vec<f64> = frame.a.apply(&value).iter().map(|v| 2.0 * v).collect();
        checked += 1;
        min_radial = min_radial.min(dot(point.coords(), &grad_sq));
        let scale = norm(&grad_sq) * norm(&omega);
        max_dev = max_dev.max(dot(&grad_sq, &omega).abs() / (1.0 + scale));
    }
    if checked == 0 {
        return Err(Error::InsufficientData {
            operation: "simple_c_facts",
            detail: "every sample landed on the zero set".into(),
        });
    }
    let radial_positive = min_radial > 0.0;
    let orthogonal = max_dev <= 1e-9;
    Ok(SimpleFactsReport {
        applicable: true,
        simple_deviation: weight.simple_deviation,
        samples_checked: checked,
        min_radial_slope: min_radial,
        radial_positive,
        max_orthogonality_dev: max_dev,
        orthogonal,
        holds: radial_positive && orthogonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use approx::assert_relative_eq;

    fn region(n: usize, radius: f64, levels: u32, dirs: u32) -> RegionSpec {
        RegionSpec::origin(n, radius, levels, dirs, 42).unwrap()
    }

    #[test]
    fn probe_of_squaring_at_unit_point() {
        let p = probe(&corpus::z_power(2), &Point::new(vec![1.0, 0.0]).unwrap()).unwrap();
        assert_relative_eq!(p.sigma_k_norm, 1.0, epsilon = 1e-12);
        assert!(p.sigma_aug_norm <= 1e-10, "aug {}", p.sigma_aug_norm);
        assert_relative_eq!(p.f_norm, 1.0, epsilon = 1e-12);
        assert_relative_eq!(p.radius, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn probe_at_origin_reports_zero_ratios() {
        let p = probe(&corpus::z_power(2), &Point::origin(2)).unwrap();
        assert_eq!(p.sigma_k_norm, 0.0);
        assert_eq!(p.sigma_aug_norm, 0.0);
        assert_eq!(p.f_norm, 0.0);
    }

    #[test]
    fn probe_sees_dependent_gradients_off_zero_set() {
        let p = probe(
            &corpus::sphere_plus_x(),
            &Point::new(vec![1.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert!(p.sigma_k_norm <= 1e-12, "got {}", p.sigma_k_norm);
        assert_relative_eq!(p.f_norm, 2.0_f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn condition_a_holds_for_squaring() {
        let report = milnor_a_scan(
            &corpus::z_power(2),
            &region(2, 0.5, 8, 16),
            defaults::TOL_DEP,
            defaults::TOL_F,
        )
        .unwrap();
        assert!(report.verdict.holds());
        assert!(report.witnesses.is_empty());
    }

    #[test]
    fn condition_a_fails_where_gradients_collapse_off_zero_set() {
        let report = milnor_a_scan(
            &corpus::sphere_plus_x(),
            &region(2, 0.5, 8, 16),
            defaults::TOL_DEP,
            defaults::TOL_F,
        )
        .unwrap();
        assert!(!report.verdict.holds());
        let w = &report.witnesses[0];
        assert!(w.sigma_k_norm < defaults::TOL_DEP);
        assert!(w.f_norm > defaults::TOL_F);
        assert!(w.x.coords()[1].abs() < 1e-6, "witness off axis: {:?}", w.x);
    }

    #[test]
    fn condition_a_holds_for_submersion() {
        let report = milnor_a_scan(
            &corpus::identity2(),
            &region(2, 0.5, 6, 8),
            defaults::TOL_DEP,
            defaults::TOL_F,
        )
        .unwrap();
        assert!(report.verdict.holds());
    }

    #[test]
    fn condition_b_holds_for_squaring_and_regression_pair() {
        let zb = milnor_b_scan(
            &corpus::z_power(2),
            &region(2, 0.5, 8, 16),
            defaults::TOL_DEP,
            defaults::TOL_F,
            0.005,
        )
        .unwrap();
        assert!(zb.verdict.holds());
        let xy = milnor_b_scan(
            &corpus::x_xy(),
            &region(2, 0.5, 8, 16),
            defaults::TOL_DEP,
            defaults::TOL_F,
            0.005,
        )
        .unwrap();
        assert!(xy.verdict.holds());
    }

    #[test]
    fn radius_estimate_returns_largest_passing() {
        let report =
            milnor_radius_estimate(&corpus::z_power(2), &[1.0, 0.5, 0.1], 6, 12, 7).unwrap();
        assert_eq!(report.admissible_epsilon, Some(1.0));
        assert_eq!(report.trials.len(), 3);

        let none = milnor_radius_estimate(&corpus::sphere_plus_x(), &[1.0, 0.1], 6, 12, 7)
            .unwrap();
        assert_eq!(none.admissible_epsilon, None);
        assert!(none
            .trials
            .iter()
            .all(|t| !t.condition_a.verdict.holds()));
    }

    #[test]
    fn radius_estimate_rejects_bad_sequences() {
        assert!(milnor_radius_estimate(&corpus::z_power(2), &[], 4, 4, 1).is_err());
        assert!(milnor_radius_estimate(&corpus::z_power(2), &[0.1, 0.5], 4, 4, 1).is_err());
    }

    #[test]
    fn pair_scan_of_squaring_tube_holds() {
        let est = milnor_pair_scan(&corpus::z_power(2), 1.0, 0.01, 1200, 7).unwrap();
        assert!(est.verdict.holds());
        assert!(est.transversality_margin > 0.9, "margin {}", est.transversality_margin);
        assert!(est.tube_points > 0);
        assert_eq!(est.boundary_checked, 0);
    }

    #[test]
    fn pair_scan_fails_on_dependence_locus_in_tube() {
        // The gradients of (x^2 + y^2, x) are dependent exactly on y = 0,
        // which threads every tube: the refinement stage must find it.
        let est = milnor_pair_scan(&corpus::sphere_plus_x(), 0.5, 0.05, 1200, 7).unwrap();
        assert!(!est.verdict.holds());
        assert!(est.transversality_margin <= defaults::TOL_DEP);
    }

    #[test]
    fn pair_scan_on_empty_tube_is_insufficient() {
        let err = milnor_pair_scan(&corpus::z_power(2), 0.5, 2.0, 1000, 7).unwrap_err();
        assert!(matches!(err, Error::InsufficientData { .. }));
    }

    #[test]
    fn pair_scan_validates_draw_count() {
        assert!(matches!(
            milnor_pair_scan(&corpus::z_power(2), 1.0, 0.01, 999, 7),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn omega_of_squaring_matches_closed_form() {
        let f = corpus::z_power(2);
        let (x, y) = (0.3, -0.7);
        let omega = omega_field(&f, &Point::new(vec![x, y]).unwrap()).unwrap();
        let r2 = x * x + y * y;
        assert_relative_eq!(omega[0], -2.0 * y * r2, epsilon = 1e-12);
        assert_relative_eq!(omega[1], 2.0 * x * r2, epsilon = 1e-12);
    }

    #[test]
    fn omega_of_identity_at_ones() {
        let omega = omega_field(&corpus::identity2(), &Point::new(vec![1.0, 1.0]).unwrap())
            .unwrap();
        assert_eq!(omega, vec![-1.0, 1.0]);
    }

    #[test]
    fn omega_vanishes_on_zero_set() {
        let omega = omega_field(&corpus::z_power(2), &Point::origin(2)).unwrap();
        assert_eq!(omega, vec![0.0, 0.0]);
    }

    #[test]
    fn condition_c_holds_for_squaring_and_identity() {
        let zc = condition_c_scan(&corpus::z_power(2), &region(2, 0.5, 8, 16), defaults::SPAN_TOL)
            .unwrap();
        assert!(zc.verdict.holds());
        assert_eq!(zc.condition, Condition::C);
        let id = condition_c_scan(&corpus::identity2(), &region(2, 0.5, 8, 16), defaults::SPAN_TOL)
            .unwrap();
        assert!(id.verdict.holds());
    }

    #[test]
    fn condition_c_rejects_triples() {
        assert!(condition_c_scan(
            &crate::map::nap_map(3, 3).unwrap(),
            &region(3, 0.5, 4, 4),
            defaults::SPAN_TOL
        )
        .is_err());
    }

    #[test]
    fn simple_facts_hold_for_simple_corpus_pairs() {
        for map in [corpus::z_power(2), corpus::z_power(3), corpus::zbar_w2()] {
            let n = map.n();
            let report = simple_c_facts(&map, &region(n, 0.5, 6, 12)).unwrap();
            assert!(report.applicable, "{} not simple", map.label());
            assert!(report.holds, "{} facts fail", map.label());
            assert!(report.min_radial_slope > 0.0);
        }
    }

    #[test]
    fn simple_facts_not_applicable_to_sheared_pair() {
        let report = simple_c_facts(&corpus::shear_z2(), &region(2, 0.5, 6, 12)).unwrap();
        assert!(!report.applicable);
        assert!(!report.holds);
    }

    #[test]
    fn span_residual_detects_membership() {
        let a = crate::mat::Mat::from_columns(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
            .unwrap();
        assert!(span_residual(&a, &[0.3, -0.2, 0.0]) <= 1e-15);
        assert_relative_eq!(span_residual(&a, &[0.0, 0.0, 2.0]), 1.0, epsilon = 1e-15);
        assert_relative_eq!(
            span_residual(&a, &[1.0, 0.0, 1.0]),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }
}
