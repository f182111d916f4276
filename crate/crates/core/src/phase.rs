//! Phase-space numerics for torus actions on `R^{2n}`.
//!
//! A [`PhasePoint`] is a base point `x` and a covector `u`, both laid out
//! plane by plane (`x[2j]`, `x[2j+1]` span plane `j`). Cosphere points are
//! represented by unit covectors. Per plane the invariants are
//!
//! ```text
//! p1 = |x_j|² + |u_j|²    p2 = 2 x_j·u_j
//! p3 = |u_j|² − |x_j|²    p4 = x_j1 u_j2 − x_j2 u_j1
//! ```
//!
//! and the contact momentum map is `J_i = Σ_j A[i][j] p4_j`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::action::{TorusActionSpec, TorusModel};
use crate::error::{Error, Result};
use crate::poset::Label;
use crate::tolerance::{COSPHERE_NORM, KERNEL_RESIDUAL, SUPPORT_THRESHOLD};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

impl PhasePoint {
    /// A point of `T*R^{2n}` off the zero section; `u` need not be unit.
    pub fn new(x: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if x.len() != u.len() || x.len() % 2 != 0 || x.is_empty() {
            return Err(Error::InvalidPoint(format!(
                "base and covector must have the same even length, got {} and {}",
                x.len(),
                u.len()
            )));
        }
        if x.iter().chain(&u).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        if norm(&u) == 0.0 {
            return Err(Error::InvalidPoint("covector is zero".into()));
        }
        Ok(Self { x, u })
    }

    /// A cosphere representative: requires `|u| = 1` to [`COSPHERE_NORM`].
    pub fn cosphere(x: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        let p = Self::new(x, u)?;
        if !p.is_cosphere() {
            return Err(Error::InvalidPoint(format!(
                "|u| = {} is not 1",
                norm(&p.u)
            )));
        }
        Ok(p)
    }

    pub fn planes(&self) -> usize {
        self.x.len() / 2
    }

    pub fn is_cosphere(&self) -> bool {
        (norm(&self.u) - 1.0).abs() <= COSPHERE_NORM
    }

    /// Projects onto the cosphere by positive rescaling of `u`.
    pub fn normalized(&self) -> Self {
        let n = norm(&self.u);
        Self {
            x: self.x.clone(),
            u: self.u.iter().map(|v| v / n).collect(),
        }
    }

    pub fn scale_covector(&self, lambda: f64) -> Self {
        Self {
            x: self.x.clone(),
            u: self.u.iter().map(|v| v * lambda).collect(),
        }
    }

    /// Planes where `(x_j, u_j)` is nonzero beyond [`SUPPORT_THRESHOLD`].
    pub fn support(&self) -> BTreeSet<usize> {
        (0..self.planes())
            .filter(|&j| {
                let s = &[
                    self.x[2 * j],
                    self.x[2 * j + 1],
                    self.u[2 * j],
                    self.u[2 * j + 1],
                ];
                norm(s) > SUPPORT_THRESHOLD
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PlaneInvariants {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl PlaneInvariants {
    /// `p1² − p2² − p3² − 4p4²`, relative to `max(1, p1²)`.
    pub fn cone_residual(&self) -> f64 {
        let r = self.p1 * self.p1 - self.p2 * self.p2 - self.p3 * self.p3 - 4.0 * self.p4 * self.p4;
        r.abs() / (self.p1 * self.p1).max(1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantVector {
    pub planes: Vec<PlaneInvariants>,
}

impl InvariantVector {
    /// `Σ_j (p1_j + p3_j) = 2|u|²`, equal to 2 on the cosphere.
    pub fn cosphere_sum(&self) -> f64 {
        self.planes.iter().map(|p| p.p1 + p.p3).sum()
    }

    pub fn max_cone_residual(&self) -> f64 {
        self.planes
            .iter()
            .map(PlaneInvariants::cone_residual)
            .fold(0.0, f64::max)
    }

    /// `(p1, p2, p3)` per plane, in plane order.
    pub fn hilbert_coordinates(&self) -> Vec<f64> {
        self.planes
            .iter()
            .flat_map(|p| [p.p1, p.p2, p.p3])
            .collect()
    }
}

pub fn invariants(p: &PhasePoint) -> InvariantVector {
    let planes = (0..p.planes())
        .map(|j| {
            let (x1, x2) = (p.x[2 * j], p.x[2 * j + 1]);
            let (u1, u2) = (p.u[2 * j], p.u[2 * j + 1]);
            let xx = x1 * x1 + x2 * x2;
            let uu = u1 * u1 + u2 * u2;
            PlaneInvariants {
                p1: xx + uu,
                p2: 2.0 * (x1 * u1 + x2 * u2),
                p3: uu - xx,
                p4: x1 * u2 - x2 * u1,
            }
        })
        .collect();
    InvariantVector { planes }
}

fn check_dims(spec: &TorusActionSpec, p: &PhasePoint) -> Result<()> {
    if p.planes() != spec.n {
        return Err(Error::InvalidPoint(format!(
            "point has {} planes, action has {}",
            p.planes(),
            spec.n
        )));
    }
    Ok(())
}

/// Contact momentum `J_i = Σ_j A[i][j] (x_j1 u_j2 − x_j2 u_j1)`.
pub fn momentum(spec: &TorusActionSpec, p: &PhasePoint) -> Result<Vec<f64>> {
    check_dims(spec, p)?;
    let inv = invariants(p);
    Ok(spec
        .weights
        .iter()
        .map(|row| {
            row.iter()
                .zip(&inv.planes)
                .map(|(&a, q)| a as f64 * q.p4)
                .sum()
        })
        .collect())
}

/// Image of the reduced Hilbert map, `(p1, p2, p3)` per plane. The fourth
/// invariant is dropped because it vanishes on the zero level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertImage(pub Vec<f64>);

impl HilbertImage {
    pub fn planes(&self) -> usize {
        self.0.len() / 3
    }

    pub fn plane(&self, j: usize) -> [f64; 3] {
        [self.0[3 * j], self.0[3 * j + 1], self.0[3 * j + 2]]
    }
}

pub fn hilbert_map(spec: &TorusActionSpec, p: &PhasePoint, tolerance: f64) -> Result<HilbertImage> {
    let j = momentum(spec, p)?;
    let size = j.iter().map(|v| v * v).sum::<f64>().sqrt();
    if size >= tolerance {
        return Err(Error::NotOnZeroLevel(size));
    }
    Ok(HilbertImage(invariants(p).hilbert_coordinates()))
}

/// Orbit type of the stabilizer of the pair `(x, u)`.
pub fn classify_point<'m>(model: &'m TorusModel, p: &PhasePoint) -> Result<&'m Label> {
    check_dims(model.spec(), p)?;
    model.label_of_support(&p.support())
}

/// Per-plane base projection `(p1 − c_j, 0, c_j − p1)`.
///
/// The offsets `c_j` are chart data of the fixture the image comes from.
pub fn k0_project(image: &HilbertImage, offsets: &[f64]) -> Result<Vec<f64>> {
    if offsets.len() != image.planes() {
        return Err(Error::Precondition(format!(
            "{} offsets for {} planes",
            offsets.len(),
            image.planes()
        )));
    }
    Ok((0..image.planes())
        .flat_map(|j| {
            let p1 = image.0[3 * j];
            [p1 - offsets[j], 0.0, offsets[j] - p1]
        })
        .collect())
}

/// Planes allowed to be nonzero in the base point and in the covector.
/// `None` leaves every plane active.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SupportPattern {
    pub base: Option<BTreeSet<usize>>,
    pub covector: Option<BTreeSet<usize>>,
}

impl SupportPattern {
    pub fn generic() -> Self {
        Self::default()
    }

    pub fn new(base: Option<&[usize]>, covector: Option<&[usize]>) -> Self {
        Self {
            base: base.map(|b| b.iter().copied().collect()),
            covector: covector.map(|c| c.iter().copied().collect()),
        }
    }

    fn active(set: &Option<BTreeSet<usize>>, j: usize) -> bool {
        set.as_ref().map_or(true, |s| s.contains(&j))
    }
}

pub const MAX_SAMPLE_RETRIES: usize = 64;

/// Exact sampler for the zero level `J⁻¹(0)` on the cosphere.
///
/// For fixed `x`, `J` is linear in `u`: `J = M(x) u` with `M(x)` the `k × 2n`
/// matrix whose plane-`j` block of row `i` is `A[i][j] (−x_j2, x_j1)`. A
/// Gaussian covector projected onto `ker M(x)` and normalized lands on the
/// zero level to rounding error. Each sample index draws from its own
/// ChaCha stream, so results depend only on `(seed, index)`.
#[derive(Clone, Debug)]
pub struct ZeroLevelSampler {
    spec: TorusActionSpec,
    pattern: SupportPattern,
}

impl ZeroLevelSampler {
    pub fn new(spec: TorusActionSpec, pattern: SupportPattern) -> Result<Self> {
        let n = spec.n;
        for set in [&pattern.base, &pattern.covector].into_iter().flatten() {
            if let Some(j) = set.iter().find(|&&j| j >= n) {
                return Err(Error::Precondition(format!(
                    "plane {j} out of range for n = {n}"
                )));
            }
        }
        if pattern.covector.as_ref().is_some_and(BTreeSet::is_empty) {
            return Err(Error::Precondition(
                "covector support must be nonempty".into(),
            ));
        }
        Ok(Self { spec, pattern })
    }

    pub fn spec(&self) -> &TorusActionSpec {
        &self.spec
    }

    pub fn sample(&self, seed: u64, count: usize) -> Result<Vec<PhasePoint>> {
        if count == 0 {
            return Err(Error::Precondition(
                "sample count must be at least 1".into(),
            ));
        }
        (0..count as u64).map(|i| self.sample_at(seed, i)).collect()
    }

    pub fn sample_at(&self, seed: u64, index: u64) -> Result<PhasePoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        for _ in 0..MAX_SAMPLE_RETRIES {
            match self.try_sample(&mut rng) {
                Ok(p) => return Ok(p),
                Err(Error::EmptyKernel) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::RetriesExhausted(MAX_SAMPLE_RETRIES))
    }

    /// One attempt: draw `x`, then a unit covector in `ker M(x)`.
    pub fn try_sample<R: Rng>(&self, rng: &mut R) -> Result<PhasePoint> {
        let n = self.spec.n;
        let mut x = vec![0.0; 2 * n];
        for j in 0..n {
            if SupportPattern::active(&self.pattern.base, j) {
                x[2 * j] = rng.sample(StandardNormal);
                x[2 * j + 1] = rng.sample(StandardNormal);
            }
        }
        let cols: Vec<usize> = (0..n)
            .filter(|&j| SupportPattern::active(&self.pattern.covector, j))
            .flat_map(|j| [2 * j, 2 * j + 1])
            .collect();
        let rows = self.momentum_rows(&x, &cols);
        let basis = orthonormal_rows(&rows);
        if basis.len() >= cols.len() {
            return Err(Error::EmptyKernel);
        }
        let mut g: Vec<f64> = cols.iter().map(|_| rng.sample(StandardNormal)).collect();
        // Two projection passes keep the residual at rounding level.
        for _ in 0..2 {
            for b in &basis {
                let d = dot(b, &g);
                g.iter_mut().zip(b).for_each(|(gi, bi)| *gi -= d * bi);
            }
        }
        let len = norm(&g);
        if len < 1e-8 {
            return Err(Error::EmptyKernel);
        }
        let mut u = vec![0.0; 2 * n];
        for (c, v) in cols.iter().zip(&g) {
            u[*c] = v / len;
        }
        let p = PhasePoint::new(x, u)?;
        let j = momentum(&self.spec, &p)?;
        if j.iter().any(|v| v.abs() >= KERNEL_RESIDUAL) {
            return Err(Error::EmptyKernel);
        }
        Ok(p)
    }

    fn momentum_rows(&self, x: &[f64], cols: &[usize]) -> Vec<Vec<f64>> {
        self.spec
            .weights
            .iter()
            .map(|row| {
                cols.iter()
                    .map(|&c| {
                        let j = c / 2;
                        let a = row[j] as f64;
                        if c % 2 == 0 {
                            -a * x[2 * j + 1]
                        } else {
                            a * x[2 * j]
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis of the row space (modified Gram-Schmidt, two passes).
fn orthonormal_rows(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = rows.iter().map(|r| norm(r)).fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for _ in 0..2 {
            for b in &basis {
                let d = dot(b, &v);
                v.iter_mut().zip(b).for_each(|(vi, bi)| *vi -= d * bi);
            }
        }
        let len = norm(&v);
        if len > 1e-12 * scale.max(1.0) {
            basis.push(v.into_iter().map(|a| a / len).collect());
        }
    }
    basis
}
