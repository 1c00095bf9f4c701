//! The verification laboratory: MSE/bias/variance probes against domains with
//! known densities, the tangent blow-up diagnostic, convergence-rate fitting,
//! and the ambient-invariance report.
//!
//! Randomness discipline: every probe derives all of its draws from named
//! substreams of one master seed (`test`, `train:{n}:{rep}`, `mc:{h}:{rep}`),
//! so adding repetitions or reordering work never perturbs existing cells and
//! results are identical for any worker-pool size.
//!
//! The bias and blow-up probes estimate expectations by stratified Monte
//! Carlo: 8 independent replicates of jittered strata on the domain's primary
//! latent coordinate. The estimand is untouched and the standard error comes
//! from the spread of the replicate means; stratification is what lets 10⁶
//! samples resolve biases of order 10⁻⁵ on the circle.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dataset::Dataset;
use crate::domains::{DomainError, DomainModel};
use crate::estimator::{BandwidthRule, DensityEstimator, EstimatorError};
use crate::kernels::{normalize, KernelError, KernelKind, NormalizedKernel};
use crate::numeric::{integrate, mean_se, ols, sphere_surface_area};
use crate::rng::substream;
use crate::spatial::IndexKind;
use rand::Rng;

/// Replicate count for the stratified Monte-Carlo probes; the standard error
/// is estimated from the spread of these replicate means.
const MC_REPLICATES: usize = 8;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("cell n={n} rep={rep} produced NaN; {} cells completed", partial.len())]
    NanCell {
        n: usize,
        rep: usize,
        partial: Vec<ExperimentRecord>,
    },
    #[error("R too small: need at least {need} repetitions, got {got}")]
    RepetitionsTooSmall { got: usize, need: usize },
    #[error("Monte-Carlo budget too small: need at least {need} samples, got {got}")]
    BudgetTooSmall { got: usize, need: usize },
    #[error("rate fit needs at least 4 distinct n values with positive MSE")]
    InsufficientRatePoints,
    #[error("need records for at least 2 ambient dimensions")]
    NeedTwoAmbients,
    #[error("no records at n* = {n_star} for D = {ambient} (mismatched grids)")]
    MissingNStar { ambient: usize, n_star: usize },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// One full sweep specification.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub domain: DomainModel,
    pub kernel: KernelKind,
    pub bandwidth: BandwidthRule,
    pub n_grid: Vec<usize>,
    pub repetitions: usize,
    pub test_points: usize,
    pub seed: u64,
    pub index: IndexKind,
}

impl ExperimentPlan {
    fn validate(&self) -> Result<(), ExperimentError> {
        if self.n_grid.is_empty() {
            return Err(ExperimentError::InvalidPlan("empty n grid".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExperimentError::InvalidPlan(
                "n grid must be strictly increasing".into(),
            ));
        }
        if self.repetitions == 0 {
            return Err(ExperimentError::InvalidPlan("need at least one repetition".into()));
        }
        if self.test_points == 0 {
            return Err(ExperimentError::InvalidPlan("need at least one test point".into()));
        }
        Ok(())
    }
}

/// One (domain, D, d, n, repetition) cell of a sweep.
///
/// `bias_sq` and `variance` are the across-repetition decomposition at this
/// cell's n (identical for rows sharing n): per test point, bias²(x) is
/// (mean_r p̂ − p)² and variance(x) is the population variance of p̂ across
/// repetitions, both averaged over the test set. With the population (1/R)
/// normalization the identity mean_r MSE_r = bias² + variance is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub domain: String,
    pub ambient: usize,
    pub intrinsic: usize,
    pub n: usize,
    pub rep: usize,
    pub h: f64,
    pub mse: f64,
    pub bias_sq: f64,
    pub variance: f64,
    pub seconds: f64,
}

/// Per-test-point decomposition retained alongside the per-cell records.
#[derive(Debug, Clone)]
pub struct PerPointDecomposition {
    pub n: usize,
    pub bias_sq: Vec<f64>,
    pub variance: Vec<f64>,
}

#[derive(Debug)]
pub struct MseProbeOutput {
    pub records: Vec<ExperimentRecord>,
    pub per_point: Vec<PerPointDecomposition>,
    /// Mean of the exact density over the test set; the scale that makes MSE
    /// levels comparable across ambient dimensions.
    pub mean_test_density: f64,
}

/// Runs the full (n, repetition) sweep of `plan`.
///
/// The test set is drawn once from the `test` substream and shared by every
/// cell; each cell trains on its own `train:{n}:{rep}` substream. Cells are
/// independent jobs executed on the worker pool; the output is in canonical
/// (n, rep) order regardless of scheduling.
pub fn mse_probe(plan: &ExperimentPlan) -> Result<MseProbeOutput, ExperimentError> {
    plan.validate()?;
    let dim = plan.domain.ambient_dim();
    let d = plan.domain.intrinsic_dim();
    let kernel = normalize(plan.kernel, d)?;

    let mut test_rng = substream(plan.seed, "test");
    let test_set = plan.domain.sample(plan.test_points, &mut test_rng);
    let true_density: Vec<f64> = test_set
        .iter()
        .map(|x| {
            plan.domain
                .exact_density(x)
                .expect("sampled test points lie on the support")
        })
        .collect();
    let mean_test_density = true_density.iter().sum::<f64>() / true_density.len() as f64;

    struct Cell {
        n: usize,
        rep: usize,
        h: f64,
        mse: f64,
        predictions: Vec<f64>,
        seconds: f64,
        nan: bool,
    }

    let cells: Vec<(usize, usize)> = plan
        .n_grid
        .iter()
        .flat_map(|&n| (0..plan.repetitions).map(move |rep| (n, rep)))
        .collect();

    let results: Vec<Cell> = cells
        .par_iter()
        .map(|&(n, rep)| -> Result<Cell, ExperimentError> {
            let start = Instant::now();
            let mut rng = substream(plan.seed, &format!("train:{n}:{rep}"));
            let train = plan.domain.sample(n, &mut rng);
            let estimator =
                DensityEstimator::build(train, kernel, plan.bandwidth, plan.index)?;
            let h = estimator.h();
            let predictions = estimator.density_batch(test_set.as_flat())?;
            let nan = predictions.iter().any(|v| !v.is_finite());
            let mse = predictions
                .iter()
                .zip(&true_density)
                .map(|(e, t)| (e - t) * (e - t))
                .sum::<f64>()
                / predictions.len() as f64;
            Ok(Cell {
                n,
                rep,
                h,
                mse,
                predictions,
                seconds: start.elapsed().as_secs_f64(),
                nan,
            })
        })
        .collect::<Result<_, _>>()?;

    // across-repetition decomposition per n, then the canonical record list
    let mut records = Vec::with_capacity(results.len());
    let mut per_point = Vec::with_capacity(plan.n_grid.len());
    let reps = plan.repetitions as f64;
    for (gi, &n) in plan.n_grid.iter().enumerate() {
        let group = &results[gi * plan.repetitions..(gi + 1) * plan.repetitions];
        let t = plan.test_points;
        let mut bias_sq_points = vec![0.0; t];
        let mut var_points = vec![0.0; t];
        for ti in 0..t {
            let mean_pred = group.iter().map(|c| c.predictions[ti]).sum::<f64>() / reps;
            bias_sq_points[ti] = (mean_pred - true_density[ti]).powi(2);
            var_points[ti] = group
                .iter()
                .map(|c| (c.predictions[ti] - mean_pred).powi(2))
                .sum::<f64>()
                / reps;
        }
        let bias_sq = bias_sq_points.iter().sum::<f64>() / t as f64;
        let variance = var_points.iter().sum::<f64>() / t as f64;
        for cell in group {
            records.push(ExperimentRecord {
                domain: plan.domain.id().to_string(),
                ambient: dim,
                intrinsic: d,
                n: cell.n,
                rep: cell.rep,
                h: cell.h,
                mse: cell.mse,
                bias_sq,
                variance,
                seconds: cell.seconds,
            });
        }
        per_point.push(PerPointDecomposition {
            n,
            bias_sq: bias_sq_points,
            variance: var_points,
        });
    }

    if let Some(bad) = results.iter().find(|c| c.nan) {
        let partial = records
            .iter()
            .filter(|r| !(r.n == bad.n && r.rep == bad.rep))
            .cloned()
            .collect();
        return Err(ExperimentError::NanCell {
            n: bad.n,
            rep: bad.rep,
            partial,
        });
    }

    Ok(MseProbeOutput {
        records,
        per_point,
        mean_test_density,
    })
}

/// Writes records as CSV with the pinned header.
pub fn write_records_csv<W: Write>(records: &[ExperimentRecord], mut w: W) -> std::io::Result<()> {
    writeln!(w, "domain,D,d,n,rep,h,mse,bias2,var,seconds")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.domain, r.ambient, r.intrinsic, r.n, r.rep, r.h, r.mse, r.bias_sq, r.variance,
            r.seconds
        )?;
    }
    Ok(())
}

/// Least-squares fit of log(mean MSE over repetitions) against log(n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub slope_se: f64,
    pub slope_theory: f64,
    pub intercept: f64,
}

impl RateFit {
    /// Flat key=value block, one entry per line.
    pub fn to_key_value(&self) -> String {
        format!(
            "slope={}\nslope_se={}\nslope_theory={}\nintercept={}\n",
            self.slope, self.slope_se, self.slope_theory, self.intercept
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain floats always serialize")
    }
}

/// Fits the convergence rate from sweep records; the theoretical slope is
/// −2m/(d+2m). Needs at least 4 distinct n values, all with positive mean MSE.
pub fn fit_rate(records: &[ExperimentRecord], d: usize, m: f64) -> Result<RateFit, ExperimentError> {
    let mut by_n: Vec<(usize, Vec<f64>)> = Vec::new();
    for r in records {
        match by_n.iter_mut().find(|(n, _)| *n == r.n) {
            Some((_, v)) => v.push(r.mse),
            None => by_n.push((r.n, vec![r.mse])),
        }
    }
    by_n.sort_unstable_by_key(|(n, _)| *n);
    if by_n.len() < 4 {
        return Err(ExperimentError::InsufficientRatePoints);
    }
    let mut xs = Vec::with_capacity(by_n.len());
    let mut ys = Vec::with_capacity(by_n.len());
    for (n, mses) in &by_n {
        let mean = mses.iter().sum::<f64>() / mses.len() as f64;
        if !(mean > 0.0) || !mean.is_finite() {
            return Err(ExperimentError::InsufficientRatePoints);
        }
        xs.push((*n as f64).ln());
        ys.push(mean.ln());
    }
    let (slope, intercept, slope_se) = ols(&xs, &ys);
    Ok(RateFit {
        slope,
        slope_se,
        slope_theory: -2.0 * m / (d as f64 + 2.0 * m),
        intercept,
    })
}

/// One |bias| estimate at a bandwidth, with its Monte-Carlo standard error.
#[derive(Debug, Clone, Copy)]
pub struct BiasPoint {
    pub h: f64,
    pub bias_abs: f64,
    /// Signed estimate, kept for diagnostics; bias_abs = |signed|.
    pub signed: f64,
    pub se: f64,
}

/// Stratified mean of g(X) over `n_mc` domain draws: MC_REPLICATES independent
/// replicates of jittered strata on the primary latent. Returns (mean, se).
fn stratified_mean<G>(
    domain: &DomainModel,
    n_mc: usize,
    seed: u64,
    label: &str,
    g: G,
) -> (f64, f64)
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    let per_rep = (n_mc / MC_REPLICATES).max(1);
    let dim = domain.ambient_dim();
    let means: Vec<f64> = (0..MC_REPLICATES)
        .into_par_iter()
        .map(|rep| {
            let mut rng = substream(seed, &format!("{label}:{rep}"));
            let mut buf = vec![0.0; dim];
            let mut acc = 0.0;
            for s in 0..per_rep {
                let u = (s as f64 + rng.random::<f64>()) / per_rep as f64;
                domain.sample_with_primary_into(u, &mut rng, &mut buf);
                acc += g(&buf);
            }
            acc / per_rep as f64
        })
        .collect();
    mean_se(&means)
}

/// Monte-Carlo estimate of E[(1/h^d) K(‖X−x‖/h)] − p(x) for each h in the
/// decreasing grid, using n_mc fresh samples per h. This targets the bias of
/// the estimator exactly, independent of its variance. Requires a regular
/// point (one with a tangent frame) and n_mc ≥ 10⁵.
pub fn bias_probe(
    domain: &DomainModel,
    kernel_kind: KernelKind,
    x: &[f64],
    h_grid: &[f64],
    n_mc: usize,
    seed: u64,
) -> Result<Vec<BiasPoint>, ExperimentError> {
    if n_mc < 100_000 {
        return Err(ExperimentError::BudgetTooSmall {
            got: n_mc,
            need: 100_000,
        });
    }
    if h_grid.is_empty() || h_grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(ExperimentError::InvalidPlan(
            "h grid must be non-empty and strictly decreasing".into(),
        ));
    }
    domain.tangent_frame(x)?; // regular-point precondition
    let p = domain.exact_density(x)?;
    let d = domain.intrinsic_dim();
    let kernel = normalize(kernel_kind, d)?;
    let mut out = Vec::with_capacity(h_grid.len());
    for (hi, &h) in h_grid.iter().enumerate() {
        let inv_hd = h.powi(-(d as i32));
        let (mean, se) = stratified_mean(domain, n_mc, seed, &format!("mc:bias:{hi}"), |y| {
            let dist: f64 = y
                .iter()
                .zip(x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist <= h {
                kernel.evaluate(dist / h) * inv_hd
            } else {
                0.0
            }
        });
        let signed = mean - p;
        out.push(BiasPoint {
            h,
            bias_abs: signed.abs(),
            signed,
            se,
        });
    }
    Ok(out)
}

/// One variance estimate at a sample size, with the predicted leading-order
/// scale p(x)·s_d/(n h^d) for comparison.
#[derive(Debug, Clone, Copy)]
pub struct VariancePoint {
    pub n: usize,
    pub h: f64,
    pub variance: f64,
    pub predicted: f64,
    /// Standard error of the variance estimate (normal-theory s²·√(2/(R−1))).
    pub se: f64,
}

/// Sample variance of p̂_n(x) across R independent training sets per n.
/// Requires R ≥ 30 for stable variance estimates.
#[allow(clippy::too_many_arguments)]
pub fn variance_probe(
    domain: &DomainModel,
    kernel_kind: KernelKind,
    x: &[f64],
    n_grid: &[usize],
    rule: BandwidthRule,
    repetitions: usize,
    seed: u64,
    index: IndexKind,
) -> Result<Vec<VariancePoint>, ExperimentError> {
    if repetitions < 30 {
        return Err(ExperimentError::RepetitionsTooSmall {
            got: repetitions,
            need: 30,
        });
    }
    if n_grid.is_empty() {
        return Err(ExperimentError::InvalidPlan("empty n grid".into()));
    }
    let p = domain.exact_density(x)?;
    let d = domain.intrinsic_dim();
    let kernel = normalize(kernel_kind, d)?;
    let mut out = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let h = rule.bandwidth(n)?;
        let estimates: Vec<f64> = (0..repetitions)
            .into_par_iter()
            .map(|rep| -> Result<f64, ExperimentError> {
                let mut rng = substream(seed, &format!("train:{n}:{rep}"));
                let train = domain.sample(n, &mut rng);
                let estimator = DensityEstimator::build(train, kernel, rule, index)?;
                Ok(estimator.density_at(x)?)
            })
            .collect::<Result<_, _>>()?;
        let mean = estimates.iter().sum::<f64>() / repetitions as f64;
        let variance = estimates
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / (repetitions - 1) as f64;
        let predicted = p * kernel.sq_integral() / (n as f64 * h.powi(d as i32));
        let se = variance * (2.0 / (repetitions as f64 - 1.0)).sqrt();
        out.push(VariancePoint {
            n,
            h,
            variance,
            predicted,
            se,
        });
    }
    Ok(out)
}

/// Radial test functions for the blow-up diagnostic: the normalized kernel
/// profiles themselves (unit radial integral by construction) and the zero
/// function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BumpFunction {
    NormalizedKernel(KernelKind),
    Zero,
}

impl std::str::FromStr for BumpFunction {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "zero" {
            return Ok(BumpFunction::Zero);
        }
        Ok(BumpFunction::NormalizedKernel(s.parse()?))
    }
}

/// One blow-up comparison at a bandwidth: the Monte-Carlo estimate of
/// ∫_{(Ω−x)/h} f(y) p(x+hy) dH^d(y) against its h→0 limit p(x)·∫_{T_xΩ} f.
#[derive(Debug, Clone, Copy)]
pub struct BlowupPoint {
    pub h: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub se: f64,
}

/// Estimates the blow-up integral LHS as E[f((X−x)/h)]/h^d per h (valid by the
/// change of variables that converts the expectation into the blow-up integral)
/// and computes the RHS as exact_density(x) times the radial integral of f.
///
/// At a stratum crossing of a SubspaceCross the single tangent plane does not
/// exist; the RHS then uses the weighted sum over the strata's tangent planes,
/// which for radial f collapses to the same exact_density(x)·∫f formula.
pub fn tangent_blowup_probe(
    domain: &DomainModel,
    x: &[f64],
    f: BumpFunction,
    h_grid: &[f64],
    n_mc: usize,
    seed: u64,
) -> Result<Vec<BlowupPoint>, ExperimentError> {
    if h_grid.is_empty() || h_grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(ExperimentError::InvalidPlan(
            "h grid must be non-empty and strictly decreasing".into(),
        ));
    }
    match domain.tangent_frame(x) {
        Ok(_) => {}
        // a crossing has a generalized (varifold) frame: sum over strata
        Err(DomainError::SingularPoint)
            if matches!(domain, DomainModel::SubspaceCross { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    let p = domain.exact_density(x)?;
    let d = domain.intrinsic_dim();
    let (bump, radial_integral): (Option<NormalizedKernel>, f64) = match f {
        BumpFunction::Zero => (None, 0.0),
        BumpFunction::NormalizedKernel(kind) => {
            let k = normalize(kind, d)?;
            let integral = sphere_surface_area(d)
                * integrate(|r| r.powf((d - 1) as f64) * k.evaluate(r), 0.0, 1.0, 1e-12);
            (Some(k), integral)
        }
    };
    let rhs = p * radial_integral;
    let mut out = Vec::with_capacity(h_grid.len());
    for (hi, &h) in h_grid.iter().enumerate() {
        let inv_hd = h.powi(-(d as i32));
        let (lhs, se) = match bump {
            None => (0.0, 0.0),
            Some(k) => stratified_mean(domain, n_mc, seed, &format!("mc:blowup:{hi}"), |y| {
                let dist: f64 = y
                    .iter()
                    .zip(x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if dist <= h {
                    k.evaluate(dist / h) * inv_hd
                } else {
                    0.0
                }
            }),
        };
        out.push(BlowupPoint { h, lhs, rhs, se });
    }
    Ok(out)
}

/// One ambient dimension's sweep, as consumed by the invariance check.
#[derive(Debug)]
pub struct InvarianceArm {
    pub records: Vec<ExperimentRecord>,
    pub mean_test_density: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceEntry {
    pub ambient: usize,
    pub mean_mse: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_test_density: f64,
}

/// Comparison of mean MSE across ambient dimensions at a common n*.
///
/// `ratio_raw` is the extreme ratio (largest mean MSE over smallest) of the raw
/// values; the violation flag is raised when it falls outside [1/2, 2].
/// `ratio_normalized` divides each arm's MSE by its mean test density first,
/// removing the 1/C(D,d) density-level scale, and is reported as context.
#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub n_star: usize,
    pub entries: Vec<InvarianceEntry>,
    pub ratio_raw: f64,
    pub ratio_normalized: f64,
    pub violation: bool,
}

impl InvarianceReport {
    pub fn to_key_value(&self) -> String {
        let mut s = format!("n_star={}\n", self.n_star);
        for e in &self.entries {
            s.push_str(&format!(
                "D{}_mean_mse={}\nD{}_ci_low={}\nD{}_ci_high={}\nD{}_mean_test_density={}\n",
                e.ambient, e.mean_mse, e.ambient, e.ci_low, e.ambient, e.ci_high, e.ambient,
                e.mean_test_density
            ));
        }
        s.push_str(&format!(
            "ratio_raw={}\nratio_normalized={}\nviolation={}\n",
            self.ratio_raw, self.ratio_normalized, self.violation
        ));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report always serializes")
    }
}

/// Compares mean MSE across ambient-dimension arms at a common n*.
pub fn ambient_invariance_check(
    arms: &[InvarianceArm],
    n_star: usize,
) -> Result<InvarianceReport, ExperimentError> {
    if arms.len() < 2 {
        return Err(ExperimentError::NeedTwoAmbients);
    }
    let mut entries = Vec::with_capacity(arms.len());
    for arm in arms {
        let ambient = arm
            .records
            .first()
            .ok_or(ExperimentError::NeedTwoAmbients)?
            .ambient;
        let at_n: Vec<f64> = arm
            .records
            .iter()
            .filter(|r| r.n == n_star)
            .map(|r| r.mse)
            .collect();
        if at_n.is_empty() {
            return Err(ExperimentError::MissingNStar { ambient, n_star });
        }
        let (mean, se) = mean_se(&at_n);
        entries.push(InvarianceEntry {
            ambient,
            mean_mse: mean,
            ci_low: mean - 1.96 * se,
            ci_high: mean + 1.96 * se,
            mean_test_density: arm.mean_test_density,
        });
    }
    if entries.iter().any(|e| !(e.mean_mse > 0.0)) {
        return Err(ExperimentError::InvalidPlan(
            "mean MSE must be positive at n* for every ambient dimension".into(),
        ));
    }
    let raw: Vec<f64> = entries.iter().map(|e| e.mean_mse).collect();
    let normalized: Vec<f64> = entries
        .iter()
        .map(|e| e.mean_mse / e.mean_test_density)
        .collect();
    let extreme = |v: &[f64]| {
        let max = v.iter().cloned().fold(f64::MIN, f64::max);
        let min = v.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    };
    let ratio_raw = extreme(&raw);
    let ratio_normalized = extreme(&normalized);
    Ok(InvarianceReport {
        n_star,
        entries,
        ratio_raw,
        ratio_normalized,
        violation: !(0.5..=2.0).contains(&ratio_raw),
    })
}

/// Convenience: test set of a plan, drawn exactly as mse_probe draws it.
pub fn draw_test_set(plan: &ExperimentPlan) -> Dataset {
    let mut rng = substream(plan.seed, "test");
    plan.domain.sample(plan.test_points, &mut rng)
}
