//! Singular spectra of gradient frames and the trace/determinant
//! inequalities that connect them.
//!
//! For a map G = (g_1, ..., g_k) the frame at x is the n x k matrix A whose
//! columns are the gradients of the components. Its singular values
//! sigma_1 >= ... >= sigma_k are computed through the k x k Gram matrix
//! M = A^T A: the sigma_i are the square roots of the eigenvalues of M.
//! The smallest one equals the minimum of |A t| over unit vectors t, which is
//! the quantity the independent sampling oracle below estimates.
//!
//! Eigenvalues of the Gram matrix come from the closed form for k <= 2 and
//! from cyclic Jacobi rotations for larger k. At desk scale (k <= 9) Jacobi
//! converges in a handful of sweeps and keeps symmetric accuracy, which is
//! what the normalized weight
//!
//! ```text
//! rho = k det(M)^(1/k) / tr(M)
//! ```
//!
//! needs: rho lives in [0, 1], equals 1 exactly when the gradients are
//! pairwise orthogonal with equal lengths, and vanishes exactly when they
//! are linearly dependent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::Point;
use crate::mat::Mat;
use crate::sampling::{normalize, Sampler};

/// Numerical floors and slacks used throughout the spectral code.
pub mod tol {
    /// Values at or below this are treated as exact zero (guards logarithms).
    pub const ZERO_FLOOR: f64 = 1e-300;
    /// Relative off-diagonal target for the Jacobi iteration.
    pub const JACOBI_OFFDIAG_REL: f64 = 1e-13;
    /// Eigenvalues of a Gram matrix below the negation of this (relative to
    /// the trace) indicate a logic error; anything negative above it is
    /// rounding noise and is clamped to zero.
    pub const EIG_CLAMP_REL: f64 = 1e-12;
    /// Slack for the inequality checks: lhs >= rhs - SLACK * (1 + |rhs|).
    pub const INEQ_SLACK: f64 = 1e-9;
    /// Equality tolerance for the arithmetic/geometric mean characterization.
    pub const EQUALITY_TOL: f64 = 1e-8;
}

/// Gradient data of a map at a point: the n x k column frame and its Gram
/// matrix, which is symmetric by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientFrame {
    pub x: Point,
    pub a: Mat,
    pub m: Mat,
}

impl GradientFrame {
    pub fn new(x: Point, a: Mat) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::NonFinite("gradient frame"));
        }
        let m = a.gram();
        Ok(GradientFrame { x, a, m })
    }

    pub fn k(&self) -> usize {
        self.a.cols()
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }
}

/// Descending singular values of a column frame, with the trace and
/// determinant of the underlying Gram matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub sigmas: Vec<f64>,
    pub trace: f64,
    pub det_gram: f64,
}

impl SingularSpectrum {
    pub fn sigma_max(&self) -> f64 {
        self.sigmas[0]
    }

    pub fn sigma_min(&self) -> f64 {
        *self.sigmas.last().expect("spectrum is never empty")
    }
}

/// Eigenvalues of a symmetric matrix, descending. The input is symmetrized
/// first, so tiny asymmetries from accumulation order are harmless.
pub fn symmetric_eigenvalues(m: &Mat) -> Vec<f64> {
    assert_eq!(m.rows(), m.cols(), "eigenvalues of a non-square matrix");
    let k = m.rows();
    if k == 1 {
        return vec![m.get(0, 0)];
    }
    if k == 2 {
        let (a, c) = (m.get(0, 0), m.get(1, 1));
        let b = 0.5 * (m.get(0, 1) + m.get(1, 0));
        // discriminant in the cancellation-free form (a-c)^2 + 4b^2
        let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
        return vec![0.5 * (a + c + disc), 0.5 * (a + c - disc)];
    }

    let mut d = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            d[i][j] = 0.5 * (m.get(i, j) + m.get(j, i));
        }
    }
    let scale: f64 = (0..k).map(|i| d[i][i].abs()).sum::<f64>().max(m.max_abs());
    let target = tol::JACOBI_OFFDIAG_REL * scale.max(tol::ZERO_FLOOR);

    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..k {
            for q in (p + 1)..k {
                off += d[p][q] * d[p][q];
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = d[p][q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (d[q][q] - d[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..k {
                    let dip = d[i][p];
                    let diq = d[i][q];
                    d[i][p] = c * dip - s * diq;
                    d[i][q] = s * dip + c * diq;
                }
                for i in 0..k {
                    let dpi = d[p][i];
                    let dqi = d[q][i];
                    d[p][i] = c * dpi - s * dqi;
                    d[q][i] = s * dpi + c * dqi;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..k).map(|i| d[i][i]).collect();
    eigs.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    eigs
}

fn clamped_gram_eigenvalues(m: &Mat) -> Vec<f64> {
    let eigs = symmetric_eigenvalues(m);
    eigs.into_iter().map(|l| l.max(0.0)).collect()
}

/// Geometric mean of the eigenvalues, i.e. det(M)^(1/k), evaluated in log
/// space so products of many small eigenvalues do not underflow. Eigenvalues
/// at the zero floor make the determinant an exact zero.
pub fn det_root(eigs: &[f64]) -> f64 {
    if eigs.iter().any(|l| *l < tol::ZERO_FLOOR) {
        return 0.0;
    }
    let mean_log = eigs.iter().map(|l| l.ln()).sum::<f64>() / eigs.len() as f64;
    mean_log.exp()
}

/// Singular values of an n x k column frame through its Gram matrix.
pub fn singular_values(a: &Mat) -> Result<SingularSpectrum> {
    if !a.is_finite() {
        return Err(Error::NonFinite("singular value input"));
    }
    let m = a.gram();
    let trace = m.trace();
    let eigs = clamped_gram_eigenvalues(&m);
    let det_gram = eigs.iter().product();
    let sigmas = eigs.iter().map(|l| l.sqrt()).collect();
    Ok(SingularSpectrum {
        sigmas,
        trace,
        det_gram,
    })
}

/// Independent estimate of the smallest singular value: the minimum of |A t|
/// over a seeded set of unit directions t.
///
/// The direction set contains `directions` uniform sphere samples, the
/// signed basis vectors, the normalized two-coordinate combinations
/// (e_i +/- e_j)/sqrt(2), and a deterministic coordinate descent around the
/// best direction found. Every evaluation is an upper bound on sigma_min, so
/// the estimate approaches the true value from above as the budget grows.
pub fn sigma_min_oracle(a: &Mat, directions: u32, seed: u64) -> f64 {
    let k = a.cols();
    let eval = |t: &[f64]| -> f64 {
        let mut acc = 0.0;
        for r in 0..a.rows() {
            let mut row = 0.0;
            for c in 0..k {
                row += a.get(r, c) * t[c];
            }
            acc += row * row;
        }
        acc.sqrt()
    };

    let mut best_t = vec![0.0; k];
    best_t[0] = 1.0;
    let mut best = eval(&best_t);

    let consider = |t: Vec<f64>, best: &mut f64, best_t: &mut Vec<f64>| {
        let v = eval(&t);
        if v < *best {
            *best = v;
            *best_t = t;
        }
    };

    // Signed basis directions and pairwise combinations: these hit exact
    // column duplications and sign-flips that random sampling only
    // approaches.
    for i in 0..k {
        let mut t = vec![0.0; k];
        t[i] = 1.0;
        consider(t.clone(), &mut best, &mut best_t);
        t[i] = -1.0;
        consider(t, &mut best, &mut best_t);
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..k {
        for j in (i + 1)..k {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0)] {
                let mut t = vec![0.0; k];
                t[i] = si * inv_sqrt2;
                t[j] = sj * inv_sqrt2;
                consider(t, &mut best, &mut best_t);
            }
        }
    }

    let mut sampler = Sampler::new(seed);
    for _ in 0..directions {
        consider(sampler.unit_vector(k), &mut best, &mut best_t);
    }

    // Deterministic local descent from the incumbent: signed coordinate
    // steps on the sphere with a halving radius. The sampled incumbent can
    // sit far out along the flattest curvature direction, so sweeps repeat
    // at each radius for as long as they keep helping.
    let mut eta = 0.25_f64;
    let mut evals = 0usize;
    while eta > 1e-9 && evals < 60_000 {
        let mut improved = true;
        while improved && evals < 60_000 {
            improved = false;
            for i in 0..k {
                for sign in [1.0, -1.0] {
                    let mut t = best_t.clone();
                    t[i] += sign * eta;
                    if !normalize(&mut t) {
                        continue;
                    }
                    evals += 1;
                    let v = eval(&t);
                    if v < best {
                        best = v;
                        best_t = t;
                        improved = true;
                    }
                }
            }
        }
        eta *= 0.5;
    }

    best
}

/// The normalized weight k det(M)^(1/k) / tr(M) at a frame. Undefined where
/// every gradient vanishes (trace at the zero floor).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhoValue {
    pub rho: f64,
    pub defined: bool,
}

pub fn rho(frame: &GradientFrame) -> RhoValue {
    let trace = frame.m.trace();
    if !(trace > tol::ZERO_FLOOR) {
        return RhoValue {
            rho: 0.0,
            defined: false,
        };
    }
    let eigs = clamped_gram_eigenvalues(&frame.m);
    let k = eigs.len() as f64;
    RhoValue {
        rho: k * det_root(&eigs) / trace,
        defined: true,
    }
}

/// For component pairs, the weight in angle form:
/// 2 |grad g| |grad h| sin(eta) / (|grad g|^2 + |grad h|^2),
/// where eta is the angle between the gradients. Agrees with [`rho`] and is
/// cheaper and better conditioned when the gradients are nearly parallel.
pub fn rho_f_angle(frame: &GradientFrame) -> Result<f64> {
    if frame.k() != 2 {
        return Err(Error::DimensionMismatch {
            context: "angle-form weight",
            expected: 2,
            got: frame.k(),
        });
    }
    let gg = frame.m.get(0, 0);
    let hh = frame.m.get(1, 1);
    let gh = frame.m.get(0, 1);
    let denom = gg + hh;
    if !(denom > tol::ZERO_FLOOR) {
        return Ok(0.0);
    }
    let (ng, nh) = (gg.sqrt(), hh.sqrt());
    if ng <= tol::ZERO_FLOOR || nh <= tol::ZERO_FLOOR {
        return Ok(0.0);
    }
    let cos = (gh / (ng * nh)).clamp(-1.0, 1.0);
    let sin = (1.0 - cos * cos).max(0.0).sqrt();
    Ok(2.0 * ng * nh * sin / denom)
}

fn slack_for(scale: f64) -> f64 {
    tol::INEQ_SLACK * (1.0 + scale.abs())
}

/// Product bound report: sigma_min(BA) against sigma_min(B) sigma_min(A),
/// and the determinant chain through det(A^T B^T B A)^(1/k).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductBoundCheck {
    pub sigma_min_product: f64,
    pub lower_bound: f64,
    pub det_root: f64,
    pub holds: bool,
}

/// Verifies the squared chain
/// det(A^T B^T B A)^(1/k) >= sigma_k(BA)^2 >= sigma_n(B)^2 sigma_k(A)^2
/// for A of shape n x k and B of shape m x n. Squared quantities keep the
/// numerical zeros of rank-deficient shapes at rounding scale, where the
/// slack absorbs them.
pub fn check_prodsv(a: &Mat, b: &Mat) -> Result<ProductBoundCheck> {
    if b.cols() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "frame product",
            expected: a.rows(),
            got: b.cols(),
        });
    }
    let ba = b.matmul(a);
    let spec_ba = singular_values(&ba)?;
    let spec_a = singular_values(a)?;
    let spec_b = singular_values(b)?;
    let lower = spec_b.sigma_min() * spec_a.sigma_min();
    let eigs: Vec<f64> = spec_ba.sigmas.iter().map(|s| s * s).collect();
    let droot = det_root(&eigs);
    let smin = spec_ba.sigma_min();
    let smin_sq = smin * smin;
    let lower_sq = lower * lower;
    let holds = smin_sq >= lower_sq - slack_for(lower_sq.max(smin_sq))
        && droot >= smin_sq - slack_for(smin_sq.max(droot));
    Ok(ProductBoundCheck {
        sigma_min_product: smin,
        lower_bound: lower,
        det_root: droot,
        holds,
    })
}

/// Two-sided trace bound report for tr(A^T B^T B A).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceSandwichCheck {
    pub lower: f64,
    pub trace: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Verifies n sigma_min(A^T)^2 sigma_min(B)^2 <= tr(A^T B^T B A)
/// <= n sigma_max(A)^2 sigma_max(B)^2 with relative slack.
pub fn check_trace_sandwich(a: &Mat, b: &Mat) -> Result<TraceSandwichCheck> {
    if b.cols() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "trace sandwich",
            expected: a.rows(),
            got: b.cols(),
        });
    }
    let n = a.rows() as f64;
    let ba = b.matmul(a);
    let trace = ba.gram().trace();
    let spec_at = singular_values(&a.transpose())?;
    let spec_a = singular_values(a)?;
    let spec_b = singular_values(b)?;
    let lower = n * spec_at.sigma_min().powi(2) * spec_b.sigma_min().powi(2);
    let upper = n * spec_a.sigma_max().powi(2) * spec_b.sigma_max().powi(2);
    let holds = lower <= trace + slack_for(trace) && trace <= upper + slack_for(upper);
    Ok(TraceSandwichCheck {
        lower,
        trace,
        upper,
        holds,
    })
}

/// Normalized-weight lower bound report for a composed frame.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightBoundCheck {
    pub weight: f64,
    pub lower_bound: f64,
    pub holds: bool,
}

/// Verifies k det(A^T B^T B A)^(1/k) / tr(A^T B^T B A) >=
/// k sigma_min(B)^2 sigma_min(A)^2 / (n sigma_max(B)^2 sigma_max(A)^2).
/// Requires BA nonzero.
pub fn check_slw_bound(a: &Mat, b: &Mat) -> Result<WeightBoundCheck> {
    if b.cols() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: "weight bound",
            expected: a.rows(),
            got: b.cols(),
        });
    }
    let k = a.cols() as f64;
    let n = a.rows() as f64;
    let ba = b.matmul(a);
    let gram = ba.gram();
    let trace = gram.trace();
    if !(trace > tol::ZERO_FLOOR) {
        return Err(Error::Precondition(
            "weight bound needs a nonzero product frame".into(),
        ));
    }
    let eigs = clamped_gram_eigenvalues(&gram);
    let weight = k * det_root(&eigs) / trace;
    let spec_a = singular_values(a)?;
    let spec_b = singular_values(b)?;
    let denom = n * spec_b.sigma_max().powi(2) * spec_a.sigma_max().powi(2);
    let lower_bound = if denom > tol::ZERO_FLOOR {
        k * spec_b.sigma_min().powi(2) * spec_a.sigma_min().powi(2) / denom
    } else {
        0.0
    };
    let holds = weight >= lower_bound - slack_for(lower_bound);
    Ok(WeightBoundCheck {
        weight,
        lower_bound,
        holds,
    })
}

/// Arithmetic/geometric mean report for a symmetric positive semidefinite
/// matrix: k det(M)^(1/k) <= tr(M), with equality exactly when all
/// eigenvalues agree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeomMeanCheck {
    pub scaled_det_root: f64,
    pub trace: f64,
    pub holds: bool,
    pub equality: bool,
    pub eigenvalues_equal: bool,
    pub characterization_consistent: bool,
}

pub fn check_geom_mean(m: &Mat) -> Result<GeomMeanCheck> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch {
            context: "mean inequality",
            expected: m.rows(),
            got: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite("mean inequality input"));
    }
    if m.asymmetry() > 1e-12 * (1.0 + m.max_abs()) {
        return Err(Error::InvalidInput(
            "mean inequality needs a symmetric matrix".into(),
        ));
    }
    let k = m.rows() as f64;
    let trace = m.trace();
    let eigs = clamped_gram_eigenvalues(m);
    let scaled = k * det_root(&eigs);
    let holds = scaled <= trace + slack_for(trace);
    let equality = (scaled - trace).abs() <= tol::EQUALITY_TOL * (1.0 + trace.abs());
    let spread = eigs[0] - eigs[eigs.len() - 1];
    let eigenvalues_equal = spread <= tol::EQUALITY_TOL * (1.0 + eigs[0].abs());
    Ok(GeomMeanCheck {
        scaled_det_root: scaled,
        trace,
        holds,
        equality,
        eigenvalues_equal,
        characterization_consistent: equality == eigenvalues_equal,
    })
}
