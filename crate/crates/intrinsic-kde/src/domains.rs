//! Synthetic ground-truth worlds: samplers over rectifiable sets with
//! closed-form densities with respect to H^d, and tangent-space bases at
//! regular points. These are the oracles every experiment measures against.
//!
//! At points lying on several strata (the origin of a subspace cross, the
//! sparse vectors with fewer than d nonzeros) `exact_density` sums the
//! contributions of every stratum containing the point. That is the value the
//! kernel estimator converges to there: each stratum through the kernel ball
//! contributes one full unit of normalized kernel mass.

use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use thiserror::Error;

use crate::dataset::Dataset;
use crate::numeric::{
    ball_volume, bessel_i, binomial, inverse_normal_cdf, sphere_surface_area, unrank_combination,
};

/// Points farther than this from the support are rejected by `exact_density`
/// (accommodates round-trips through CSV).
pub const SUPPORT_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("invalid domain parameters: {0}")]
    InvalidParams(String),
    #[error("point is off the support (distance {distance:e})")]
    OffSupport { distance: f64 },
    #[error("singular point: no single tangent plane exists there")]
    SingularPoint,
}

/// Orthonormal basis of the tangent space at a base point, rows spanning T_xΩ.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    base: Vec<f64>,
    basis: Vec<f64>, // d × D, row-major
    dim: usize,      // d
}

impl TangentFrame {
    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.base.len();
        &self.basis[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.basis.chunks_exact(self.base.len())
    }

    /// max |B Bᵀ − I| entry, for orthonormality checks.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let dot: f64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// A synthetic world: sampler + exact density + tangent frames.
///
/// Models are immutable; every sampling call takes an explicit generator, so
/// there is no hidden RNG state and parallel use is a caller-side concern.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainModel {
    /// d-sparse vectors in R^D: a coordinate hyperplane chosen uniformly among
    /// C(D, d), then a standard d-dimensional normal inside it.
    SparseGaussian { ambient: usize, intrinsic: usize },
    /// Uniform distribution on the unit sphere S^{D-1}.
    UniformSphere { ambient: usize },
    /// Von Mises–Fisher distribution on S^{D-1} with mean direction μ and
    /// concentration κ.
    VonMisesFisher { mu: Vec<f64>, kappa: f64 },
    /// A union of axis-aligned d-dimensional subspaces, each carrying a
    /// uniform distribution on the radius-ρ ball inside it, mixed with the
    /// given weights. The simplest rectifiable-but-not-manifold example: two
    /// lines crossing at the origin.
    SubspaceCross {
        ambient: usize,
        intrinsic: usize,
        patterns: Vec<Vec<usize>>,
        weights: Vec<f64>,
        radius: f64,
    },
}

impl DomainModel {
    pub fn sparse_gaussian(ambient: usize, intrinsic: usize) -> Result<Self, DomainError> {
        if intrinsic == 0 || intrinsic > ambient {
            return Err(DomainError::InvalidParams(format!(
                "need 1 <= d <= D, got d={intrinsic}, D={ambient}"
            )));
        }
        Ok(DomainModel::SparseGaussian { ambient, intrinsic })
    }

    pub fn uniform_sphere(ambient: usize) -> Result<Self, DomainError> {
        if ambient < 2 {
            return Err(DomainError::InvalidParams(
                "sphere needs ambient dimension >= 2".into(),
            ));
        }
        Ok(DomainModel::UniformSphere { ambient })
    }

    pub fn von_mises_fisher(mu: Vec<f64>, kappa: f64) -> Result<Self, DomainError> {
        if mu.len() < 2 {
            return Err(DomainError::InvalidParams(
                "vMF needs ambient dimension >= 2".into(),
            ));
        }
        if !(kappa >= 0.0) || !kappa.is_finite() {
            return Err(DomainError::InvalidParams(format!(
                "concentration must be finite and >= 0, got {kappa}"
            )));
        }
        let norm = mu.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(DomainError::InvalidParams(
                "mean direction must be nonzero".into(),
            ));
        }
        let mu = mu.into_iter().map(|v| v / norm).collect();
        Ok(DomainModel::VonMisesFisher { mu, kappa })
    }

    pub fn subspace_cross(
        ambient: usize,
        patterns: Vec<Vec<usize>>,
        weights: Option<Vec<f64>>,
        radius: f64,
    ) -> Result<Self, DomainError> {
        if patterns.is_empty() {
            return Err(DomainError::InvalidParams("need at least one subspace".into()));
        }
        let intrinsic = patterns[0].len();
        if intrinsic == 0 {
            return Err(DomainError::InvalidParams(
                "subspaces must have dimension >= 1".into(),
            ));
        }
        for p in &patterns {
            if p.len() != intrinsic {
                return Err(DomainError::InvalidParams(
                    "all subspaces must share one dimension".into(),
                ));
            }
            if p.iter().any(|&i| i >= ambient) {
                return Err(DomainError::InvalidParams("axis index out of range".into()));
            }
            if p.windows(2).any(|w| w[0] >= w[1]) {
                return Err(DomainError::InvalidParams(
                    "subspace axes must be strictly increasing".into(),
                ));
            }
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(DomainError::InvalidParams("radius must be positive".into()));
        }
        let weights = match weights {
            Some(w) => {
                if w.len() != patterns.len() || w.iter().any(|&v| !(v > 0.0)) {
                    return Err(DomainError::InvalidParams(
                        "weights must be positive, one per subspace".into(),
                    ));
                }
                let total: f64 = w.iter().sum();
                w.into_iter().map(|v| v / total).collect()
            }
            None => vec![1.0 / patterns.len() as f64; patterns.len()],
        };
        Ok(DomainModel::SubspaceCross {
            ambient,
            intrinsic,
            patterns,
            weights,
            radius,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            DomainModel::SparseGaussian { ambient, .. } => *ambient,
            DomainModel::UniformSphere { ambient } => *ambient,
            DomainModel::VonMisesFisher { mu, .. } => mu.len(),
            DomainModel::SubspaceCross { ambient, .. } => *ambient,
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            DomainModel::SparseGaussian { intrinsic, .. } => *intrinsic,
            DomainModel::UniformSphere { ambient } => ambient - 1,
            DomainModel::VonMisesFisher { mu, .. } => mu.len() - 1,
            DomainModel::SubspaceCross { intrinsic, .. } => *intrinsic,
        }
    }

    /// Short identifier used in result CSVs.
    pub fn id(&self) -> &'static str {
        match self {
            DomainModel::SparseGaussian { .. } => "sparse",
            DomainModel::UniformSphere { .. } => "sphere",
            DomainModel::VonMisesFisher { .. } => "vmf",
            DomainModel::SubspaceCross { .. } => "cross",
        }
    }

    /// Draws one point into `out` (length D).
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        self.sample_with_primary_into(rng.random::<f64>(), rng, out);
    }

    /// Draws one point whose *primary latent coordinate* is pinned to `u` in
    /// [0, 1); all remaining latents come from `rng`. With u uniform this is an
    /// ordinary draw, which is what `sample_into` does. Stratifying u across a
    /// grid slashes Monte-Carlo variance for the diagnostic probes on domains
    /// whose primary latent carries most of the geometry (the circle's angle, a
    /// line's position, the sparse pattern choice). Domains without a useful
    /// 1-D parametrization consume `u` as an ordinary uniform.
    pub fn sample_with_primary_into<R: Rng + ?Sized>(&self, u: f64, rng: &mut R, out: &mut [f64]) {
        debug_assert!((0.0..1.0).contains(&u));
        debug_assert_eq!(out.len(), self.ambient_dim());
        match self {
            DomainModel::SparseGaussian { ambient, intrinsic } => {
                let total = binomial(*ambient, *intrinsic);
                let scaled = u * total as f64;
                let pattern_rank = (scaled as u64).min(total - 1);
                let frac = (scaled - pattern_rank as f64).clamp(1e-16, 1.0 - 1e-16);
                let mut pattern = Vec::with_capacity(*intrinsic);
                unrank_combination(*ambient, *intrinsic, pattern_rank, &mut pattern);
                out.fill(0.0);
                for (slot, &axis) in pattern.iter().enumerate() {
                    out[axis] = if slot == 0 {
                        inverse_normal_cdf(frac)
                    } else {
                        StandardNormal.sample(rng)
                    };
                }
            }
            DomainModel::UniformSphere { ambient } => {
                if *ambient == 2 {
                    let angle = 2.0 * std::f64::consts::PI * u - std::f64::consts::PI;
                    out[0] = angle.cos();
                    out[1] = angle.sin();
                } else {
                    sample_unit_sphere(rng, out);
                }
            }
            DomainModel::VonMisesFisher { mu, kappa } => {
                sample_vmf(mu, *kappa, rng, out);
            }
            DomainModel::SubspaceCross {
                intrinsic,
                patterns,
                weights,
                radius,
                ..
            } => {
                // flatten (subspace choice, first in-ball latent) into u
                let mut j = patterns.len() - 1;
                let mut v = u;
                let mut acc = 0.0;
                for (idx, &w) in weights.iter().enumerate() {
                    if u < acc + w || idx == patterns.len() - 1 {
                        j = idx;
                        v = ((u - acc) / w).clamp(0.0, 1.0 - 1e-16);
                        break;
                    }
                    acc += w;
                }
                out.fill(0.0);
                let pattern = &patterns[j];
                if *intrinsic == 1 {
                    out[pattern[0]] = radius * (2.0 * v - 1.0);
                } else {
                    // direction from rng, radius from the stratified latent
                    let mut dir = vec![0.0f64; *intrinsic];
                    let mut norm_sq = 0.0;
                    while norm_sq == 0.0 {
                        norm_sq = 0.0;
                        for c in dir.iter_mut() {
                            *c = StandardNormal.sample(rng);
                            norm_sq += *c * *c;
                        }
                    }
                    let scale = radius * v.powf(1.0 / *intrinsic as f64) / norm_sq.sqrt();
                    for (slot, &axis) in pattern.iter().enumerate() {
                        out[axis] = dir[slot] * scale;
                    }
                }
            }
        }
    }

    /// n i.i.d. draws as a Dataset.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Dataset {
        assert!(n >= 1, "sample count must be positive");
        let dim = self.ambient_dim();
        let mut flat = vec![0.0; n * dim];
        for row in flat.chunks_exact_mut(dim) {
            self.sample_into(rng, row);
        }
        Dataset::from_rows(flat, dim).expect("sampled rows are finite by construction")
    }

    /// Distance from `x` to the support (0 for exact members).
    pub fn support_distance(&self, x: &[f64]) -> f64 {
        match self {
            DomainModel::SparseGaussian { intrinsic, .. } => {
                let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
                mags.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
                mags[*intrinsic..].iter().map(|v| v * v).sum::<f64>().sqrt()
            }
            DomainModel::UniformSphere { .. } | DomainModel::VonMisesFisher { .. } => {
                (x.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs()
            }
            DomainModel::SubspaceCross {
                patterns, radius, ..
            } => {
                let mut best = f64::INFINITY;
                for pattern in patterns {
                    let mut off_sq = 0.0;
                    let mut in_sq = 0.0;
                    for (i, &v) in x.iter().enumerate() {
                        if pattern.contains(&i) {
                            in_sq += v * v;
                        } else {
                            off_sq += v * v;
                        }
                    }
                    let radial_excess = (in_sq.sqrt() - radius).max(0.0);
                    best = best.min((off_sq + radial_excess * radial_excess).sqrt());
                }
                best
            }
        }
    }

    /// Closed-form density with respect to H^d at an on-support point; sums the
    /// contributions of every stratum containing `x`.
    pub fn exact_density(&self, x: &[f64]) -> Result<f64, DomainError> {
        debug_assert_eq!(x.len(), self.ambient_dim());
        let distance = self.support_distance(x);
        if distance > SUPPORT_TOL {
            return Err(DomainError::OffSupport { distance });
        }
        Ok(match self {
            DomainModel::SparseGaussian { ambient, intrinsic } => {
                let support = x.iter().filter(|v| v.abs() > SUPPORT_TOL).count();
                let containing = binomial(ambient - support, intrinsic - support) as f64;
                let total = binomial(*ambient, *intrinsic) as f64;
                let norm_sq: f64 = x.iter().map(|v| v * v).sum();
                let gauss = (-norm_sq / 2.0).exp()
                    / (2.0 * std::f64::consts::PI).powf(*intrinsic as f64 / 2.0);
                containing / total * gauss
            }
            DomainModel::UniformSphere { ambient } => 1.0 / sphere_surface_area(*ambient),
            DomainModel::VonMisesFisher { mu, kappa } => vmf_density(mu, *kappa, x),
            DomainModel::SubspaceCross {
                intrinsic,
                patterns,
                weights,
                radius,
                ..
            } => {
                let per_volume = ball_volume(*intrinsic) * radius.powi(*intrinsic as i32);
                let mut density = 0.0;
                for (pattern, &w) in patterns.iter().zip(weights) {
                    if pattern_contains(pattern, x) {
                        density += w / per_volume;
                    }
                }
                density
            }
        })
    }

    /// Orthonormal tangent basis at a regular point; errors on points where
    /// several strata meet (no single tangent plane) or off the support.
    pub fn tangent_frame(&self, x: &[f64]) -> Result<TangentFrame, DomainError> {
        debug_assert_eq!(x.len(), self.ambient_dim());
        let distance = self.support_distance(x);
        if distance > SUPPORT_TOL {
            return Err(DomainError::OffSupport { distance });
        }
        let ambient = self.ambient_dim();
        match self {
            DomainModel::SparseGaussian { intrinsic, .. } => {
                let support: Vec<usize> = (0..ambient)
                    .filter(|&i| x[i].abs() > SUPPORT_TOL)
                    .collect();
                if support.len() < *intrinsic {
                    return Err(DomainError::SingularPoint);
                }
                Ok(axis_frame(x, &support))
            }
            DomainModel::UniformSphere { .. } | DomainModel::VonMisesFisher { .. } => {
                Ok(sphere_tangent_frame(x))
            }
            DomainModel::SubspaceCross { patterns, .. } => {
                let containing: Vec<&Vec<usize>> = patterns
                    .iter()
                    .filter(|p| pattern_contains(p, x))
                    .collect();
                match containing.len() {
                    0 => Err(DomainError::OffSupport { distance }),
                    1 => Ok(axis_frame(x, containing[0])),
                    _ => Err(DomainError::SingularPoint),
                }
            }
        }
    }
}

fn pattern_contains(pattern: &[usize], x: &[f64]) -> bool {
    x.iter()
        .enumerate()
        .all(|(i, v)| pattern.contains(&i) || v.abs() <= SUPPORT_TOL)
}

/// Frame whose rows are the coordinate axes in `axes`.
fn axis_frame(x: &[f64], axes: &[usize]) -> TangentFrame {
    let ambient = x.len();
    let mut basis = vec![0.0; axes.len() * ambient];
    for (row, &axis) in axes.iter().enumerate() {
        basis[row * ambient + axis] = 1.0;
    }
    TangentFrame {
        base: x.to_vec(),
        basis,
        dim: axes.len(),
    }
}

/// Tangent frame of the unit sphere at x: the orthonormal completion of x̂,
/// taken from the Householder reflector that maps e₀ to ±x̂.
fn sphere_tangent_frame(x: &[f64]) -> TangentFrame {
    let ambient = x.len();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let unit: Vec<f64> = x.iter().map(|v| v / norm).collect();
    let sign = if unit[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut v = unit.clone();
    v[0] += sign;
    let v_sq: f64 = v.iter().map(|c| c * c).sum();
    let mut basis = vec![0.0; (ambient - 1) * ambient];
    for row in 0..ambient - 1 {
        let j = row + 1;
        // column j of H = I − 2 v vᵀ / (vᵀ v)
        for i in 0..ambient {
            let identity = if i == j { 1.0 } else { 0.0 };
            basis[row * ambient + i] = identity - 2.0 * v[i] * v[j] / v_sq;
        }
    }
    TangentFrame {
        base: x.to_vec(),
        basis,
        dim: ambient - 1,
    }
}

fn sample_unit_sphere<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut norm_sq = 0.0;
        for c in out.iter_mut() {
            *c = StandardNormal.sample(rng);
            norm_sq += *c * *c;
        }
        if norm_sq > 0.0 {
            let inv = 1.0 / norm_sq.sqrt();
            for c in out.iter_mut() {
                *c *= inv;
            }
            return;
        }
    }
}

/// Von Mises–Fisher density c(κ) e^{κ μ·x} with
/// c(κ) = κ^{D/2-1} / ((2π)^{D/2} I_{D/2-1}(κ)).
fn vmf_density(mu: &[f64], kappa: f64, x: &[f64]) -> f64 {
    let ambient = mu.len();
    if kappa == 0.0 {
        return 1.0 / sphere_surface_area(ambient);
    }
    let nu = ambient as f64 / 2.0 - 1.0;
    let log_c = nu * kappa.ln()
        - (ambient as f64 / 2.0) * (2.0 * std::f64::consts::PI).ln()
        - bessel_i(nu, kappa).ln();
    let dot: f64 = mu.iter().zip(x).map(|(a, b)| a * b).sum();
    (log_c + kappa * dot).exp()
}

/// Wood's rejection sampler for the von Mises–Fisher distribution on S^{D-1}.
fn sample_vmf<R: Rng + ?Sized>(mu: &[f64], kappa: f64, rng: &mut R, out: &mut [f64]) {
    let ambient = mu.len();
    if kappa == 0.0 {
        sample_unit_sphere(rng, out);
        return;
    }
    let m = (ambient - 1) as f64;
    let b = (-2.0 * kappa + (4.0 * kappa * kappa + m * m).sqrt()) / m;
    let x0 = (1.0 - b) / (1.0 + b);
    let c = kappa * x0 + m * (1.0 - x0 * x0).ln();
    let beta = Beta::new(m / 2.0, m / 2.0).expect("valid beta parameters");
    let w = loop {
        let z: f64 = beta.sample(rng);
        let u: f64 = rng.random();
        let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        if kappa * w + m * (1.0 - x0 * w).ln() - c >= u.ln() {
            break w;
        }
    };
    // tangential direction uniform on the sphere of μ's orthogonal complement
    let frame = sphere_tangent_frame(mu);
    let mut tangential = vec![0.0f64; ambient - 1];
    sample_unit_sphere(rng, &mut tangential);
    let planar = (1.0 - w * w).max(0.0).sqrt();
    for i in 0..ambient {
        let mut coord = w * mu[i];
        for (row, &t) in tangential.iter().enumerate() {
            coord += planar * t * frame.row(row)[i];
        }
        out[i] = coord;
    }
    // renormalize against accumulated rounding
    let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in out.iter_mut() {
        *v /= norm;
    }
}
