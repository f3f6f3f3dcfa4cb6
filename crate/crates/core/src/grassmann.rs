//! The Grassmannian `Gr(k, d)` as a metric space: principal angles, the
//! unit-ball Hausdorff distance, and randomized epsilon-nets with a stored
//! coverage audit.
//!
//! Everything here is binary64. Comparisons carry [`TOL`].

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::limits;

/// Comparison tolerance for floating geometry.
pub const TOL: f64 = 1e-9;
/// Maximum Gram-matrix deviation accepted for an orthonormal basis.
pub const ORTHO_TOL: f64 = 1e-12;

/// A k-dimensional linear subspace of `R^d`, stored as a `d x k` matrix with
/// orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Wraps an orthonormal basis, given as `k` vectors of length `d`.
    pub fn new(vectors: &[Vec<f64>]) -> Result<Self> {
        let basis = columns(vectors)?;
        let dev = gram_deviation(&basis);
        if !(dev <= ORTHO_TOL) {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Subspace { basis })
    }

    /// Orthonormal basis of `span(vectors)`; errors when they are dependent.
    pub fn span(vectors: &[Vec<f64>]) -> Result<Self> {
        let m = columns(vectors)?;
        let basis = orthonormalize(&m).ok_or_else(|| Error::Degenerate("spanning vectors are dependent".into()))?;
        Ok(Subspace { basis })
    }

    /// Haar-uniform sample: QR of a Gaussian `d x k` matrix.
    pub fn random<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Self {
        loop {
            let g = DMatrix::from_fn(d, k, |_, _| rng.sample::<f64, _>(StandardNormal));
            if let Some(basis) = orthonormalize(&g) {
                return Subspace { basis };
            }
        }
    }

    pub fn d(&self) -> usize {
        self.basis.nrows()
    }

    pub fn k(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.basis.column(i).iter().copied().collect()
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.k()).map(|i| self.vector(i)).collect()
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let x = DVector::from_column_slice(x);
        let p = &self.basis * (self.basis.transpose() * x);
        p.iter().copied().collect()
    }

    /// Distance from `x` to the subspace.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let p = self.project(x);
        x.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    /// Orthonormal basis of the orthogonal complement, by Gram-Schmidt of the
    /// standard basis against this one.
    pub fn complement_vectors(&self) -> Vec<Vec<f64>> {
        complement_of(&self.vectors(), self.d())
    }

    fn same_shape(&self, other: &Subspace) -> Result<()> {
        check_dim(self.d(), other.d())?;
        check_dim(self.k(), other.k())
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vectors().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Vec<f64>>::deserialize(d)?;
        Subspace::new(&v).map_err(D::Error::custom)
    }
}

fn columns(vectors: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let Some(first) = vectors.first() else {
        return Err(Error::InvalidInput("subspace needs at least one vector".into()));
    };
    let d = first.len();
    for v in vectors {
        check_dim(d, v.len())?;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
    }
    if vectors.len() > d {
        return Err(Error::InvalidInput(format!("{} vectors in R^{d}", vectors.len())));
    }
    Ok(DMatrix::from_fn(d, vectors.len(), |i, j| vectors[j][i]))
}

fn gram_deviation(m: &DMatrix<f64>) -> f64 {
    let g = m.transpose() * m;
    let mut dev: f64 = 0.0;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((g[(i, j)] - target).abs());
        }
    }
    dev
}

/// Modified Gram-Schmidt with one reorthogonalisation pass.
fn orthonormalize(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let mut q = m.clone();
    for j in 0..q.ncols() {
        let scale = q.column(j).norm();
        for _ in 0..2 {
            for i in 0..j {
                let qi = q.column(i).clone_owned();
                let c = qi.dot(&q.column(j));
                q.column_mut(j).axpy(-c, &qi, 1.0);
            }
        }
        let n = q.column(j).norm();
        if !(n > 1e-10 * scale.max(1e-300)) || n == 0.0 {
            return None;
        }
        q.column_mut(j).scale_mut(1.0 / n);
    }
    Some(q)
}

pub(crate) fn complement_of(span: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<DVector<f64>> = span.iter().map(|v| DVector::from_column_slice(v)).collect();
    let start = basis.len();
    for axis in 0..d {
        let mut w = DVector::zeros(d);
        w[axis] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let n = w.norm();
        if n > 1e-6 {
            basis.push(w / n);
        }
        if basis.len() == d {
            break;
        }
    }
    basis[start..].iter().map(|v| v.iter().copied().collect()).collect()
}

/// Singular values of `u^T v`, descending, clamped to `[0, 1]`.
fn cosines(u: &Subspace, v: &Subspace) -> Vec<f64> {
    let m = u.basis.transpose() * &v.basis;
    let mut s: Vec<f64> = m.singular_values().iter().map(|x| x.clamp(0.0, 1.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Singular values of `(I - v v^T) u`, ascending, clamped to `[0, 1]`.
fn sines(u: &Subspace, v: &Subspace) -> Vec<f64> {
    let r = &u.basis - &v.basis * (v.basis.transpose() * &u.basis);
    let mut s: Vec<f64> = r.singular_values().iter().map(|x| x.clamp(0.0, 1.0)).collect();
    s.sort_by(|a, b| a.total_cmp(b));
    s
}

/// Principal angles between `u` and `v`, ascending in `[0, pi/2]`.
pub fn principal_angles(u: &Subspace, v: &Subspace) -> Result<Vec<f64>> {
    u.same_shape(v)?;
    for w in [u, v] {
        let dev = gram_deviation(&w.basis);
        if dev > ORTHO_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
    }
    let c = cosines(u, v);
    let s = sines(u, v);
    Ok(c.iter().zip(&s).map(|(c, s)| s.atan2(*c)).collect())
}

/// Jordan angle: the largest principal angle.
pub fn max_angle(u: &Subspace, v: &Subspace) -> Result<f64> {
    Ok(principal_angles(u, v)?.last().copied().unwrap_or(0.0))
}

/// Hausdorff distance of the unit-ball slices, equal to the sine of the
/// largest principal angle.
pub fn gr_distance(u: &Subspace, v: &Subspace) -> Result<f64> {
    u.same_shape(v)?;
    Ok(*sines(u, v).last().unwrap_or(&0.0))
}

/// Monotone proxy for closeness: the cosine of the largest principal angle.
fn cos_max_angle(u: &Subspace, v: &Subspace) -> f64 {
    let k = u.k();
    if k == 1 {
        let a = u.basis.as_slice();
        let b = v.basis.as_slice();
        return a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().abs().min(1.0);
    }
    if k == 2 {
        let n = u.d();
        let (ua, va) = (u.basis.as_slice(), v.basis.as_slice());
        let (u0, u1) = ua.split_at(n);
        let (v0, v1) = va.split_at(n);
        let ip = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
        let (a, b, c, d) = (ip(u0, v0), ip(u0, v1), ip(u1, v0), ip(u1, v1));
        let t = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        let disc = (t * t - 4.0 * det * det).max(0.0).sqrt();
        let smin_sq = (t - disc) / 2.0;
        // t - disc cancels badly when the smaller value is tiny; use det^2 / smax^2.
        let smax_sq = (t + disc) / 2.0;
        let alt = if smax_sq > 0.0 { det * det / smax_sq } else { 0.0 };
        let s = if smin_sq < 1e-4 { alt } else { smin_sq };
        return s.max(0.0).sqrt().min(1.0);
    }
    let m = u.basis.transpose() * &v.basis;
    m.singular_values().iter().fold(1.0f64, |acc, x| acc.min(*x)).clamp(0.0, 1.0)
}

/// Coverage audit of a net, stored with the net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetAudit {
    pub samples: usize,
    pub max_observed_gap: f64,
}

#[derive(Clone, Debug)]
pub struct NetConfig {
    /// Stop after this many consecutive random candidates are already covered.
    pub stall: usize,
    pub audit_samples: usize,
    pub max_size: usize,
    /// Rounds in which uncovered audit samples are added before re-auditing.
    pub repair_rounds: usize,
    /// Greedy packing radius as a fraction of `eps`.
    pub packing: f64,
}

impl Default for NetConfig {
    fn default() -> Self {
        NetConfig { stall: 2000, audit_samples: 100_000, max_size: limits::max_net_size(), repair_rounds: 3, packing: 0.75 }
    }
}

/// A finite subset of `Gr(k, d)` audited to lie within angle `eps` of every
/// sampled subspace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetRepr", into = "NetRepr")]
pub struct EpsNet {
    pub d: usize,
    pub k: usize,
    pub eps: f64,
    pub seed: u64,
    pub elements: Vec<Subspace>,
    pub audit: NetAudit,
}

#[derive(Serialize, Deserialize)]
struct NetRepr {
    format: u32,
    d: usize,
    k: usize,
    eps: f64,
    seed: u64,
    elements: Vec<Subspace>,
    audit: NetAudit,
}

impl TryFrom<NetRepr> for EpsNet {
    type Error = Error;
    fn try_from(r: NetRepr) -> Result<Self> {
        if r.format != 1 {
            return Err(Error::Format(format!("unsupported net format {}", r.format)));
        }
        for e in &r.elements {
            check_dim(r.d, e.d())?;
            check_dim(r.k, e.k())?;
        }
        Ok(EpsNet { d: r.d, k: r.k, eps: r.eps, seed: r.seed, elements: r.elements, audit: r.audit })
    }
}

impl From<EpsNet> for NetRepr {
    fn from(n: EpsNet) -> Self {
        NetRepr { format: 1, d: n.d, k: n.k, eps: n.eps, seed: n.seed, elements: n.elements, audit: n.audit }
    }
}

/// Greedy packing at angular radius `packing * eps` from Haar-random candidates,
/// followed by a coverage audit. See [`NetConfig`] for the knobs.
pub fn build_eps_net(d: usize, k: usize, eps: f64, seed: u64) -> Result<EpsNet> {
    build_eps_net_with(d, k, eps, seed, &NetConfig::default())
}

pub fn build_eps_net_with(d: usize, k: usize, eps: f64, seed: u64, cfg: &NetConfig) -> Result<EpsNet> {
    if k == 0 || k >= d {
        return Err(Error::InvalidInput(format!("need 0 < k < d, got k = {k}, d = {d}")));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    if !(cfg.packing > 0.0 && cfg.packing <= 1.0) {
        return Err(Error::InvalidInput(format!("packing fraction {} outside (0, 1]", cfg.packing)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = Subspace::random(d, k, &mut rng);
    let mut index = Finder::new(&first, eps);
    index.insert(&first, 0);
    let mut net = EpsNet { d, k, eps, seed, elements: vec![first], audit: NetAudit { samples: 0, max_observed_gap: 0.0 } };
    let cover_cos = (eps * cfg.packing).min(FRAC_PI_2).cos();
    let add = |net: &mut EpsNet, index: &mut Finder, s: Subspace| -> Result<()> {
        index.insert(&s, net.elements.len());
        net.elements.push(s);
        if net.elements.len() > cfg.max_size {
            return Err(Error::ResourceCap(format!("net exceeds {} elements", cfg.max_size)));
        }
        Ok(())
    };
    if eps <= FRAC_PI_2 {
        let mut stall = 0;
        while stall < cfg.stall {
            let cand = Subspace::random(d, k, &mut rng);
            if index.best_cos(&net, &cand, cover_cos, false) >= cover_cos {
                stall += 1;
            } else {
                add(&mut net, &mut index, cand)?;
                stall = 0;
            }
        }
    }
    let audit_cos = eps.min(FRAC_PI_2).cos();
    for round in 0..=cfg.repair_rounds {
        let samples: Vec<Subspace> = (0..cfg.audit_samples).map(|_| Subspace::random(d, k, &mut rng)).collect();
        let gaps: Vec<f64> = samples.par_iter().map(|s| index.best_cos(&net, s, audit_cos, true)).collect();
        let worst_cos = gaps.iter().copied().fold(1.0f64, f64::min);
        let gap = worst_cos.clamp(-1.0, 1.0).acos();
        net.audit = NetAudit { samples: cfg.audit_samples, max_observed_gap: gap };
        if gap < eps {
            return Ok(net);
        }
        if round == cfg.repair_rounds {
            break;
        }
        for (s, c) in samples.into_iter().zip(&gaps) {
            if *c < cover_cos && index.best_cos(&net, &s, cover_cos, false) < cover_cos {
                add(&mut net, &mut index, s)?;
            }
        }
    }
    Err(Error::AuditFailed { gap: net.audit.max_observed_gap, eps })
}

/// Candidate lookup for net construction. Lines, and hyperplanes through
/// their normals, are indexed on a grid over unit vectors (both signs), so a
/// query inspects only the `3^d` cells around it. Other shapes scan.
enum Finder {
    Grid { side: f64, normal: bool, cells: HashMap<Vec<i64>, Vec<usize>> },
    Scan,
}

impl Finder {
    /// Exact for every element within angle `radius` of a query.
    fn new(shape: &Subspace, radius: f64) -> Self {
        let (d, k) = (shape.d(), shape.k());
        if k != 1 && k + 1 != d {
            return Finder::Scan;
        }
        // chord of the radius, padded against rounding
        let side = 2.0 * (radius.min(FRAC_PI_2) / 2.0).sin() * 1.01 + 1e-12;
        Finder::Grid { side, normal: k != 1, cells: HashMap::new() }
    }

    fn key_line(normal: bool, s: &Subspace) -> Vec<f64> {
        if normal {
            s.complement_vectors().swap_remove(0)
        } else {
            s.vector(0)
        }
    }

    fn cell(side: f64, v: &[f64]) -> Vec<i64> {
        v.iter().map(|x| (x / side).floor() as i64).collect()
    }

    fn insert(&mut self, s: &Subspace, idx: usize) {
        if let Finder::Grid { side, normal, cells } = self {
            let v = Self::key_line(*normal, s);
            let neg: Vec<f64> = v.iter().map(|x| -x).collect();
            for w in [v, neg] {
                cells.entry(Self::cell(*side, &w)).or_default().push(idx);
            }
        }
    }

    /// Largest `cos` of the max angle to an element. Exact when it is at
    /// least `threshold` or `exact` is set; otherwise some value below it.
    fn best_cos(&self, net: &EpsNet, s: &Subspace, threshold: f64, exact: bool) -> f64 {
        let Finder::Grid { side, normal, cells } = self else { return net.nearest_cos(s).1 };
        let v = Self::key_line(*normal, s);
        let base = Self::cell(*side, &v);
        let mut best = -1.0f64;
        let mut offset = vec![-1i64; base.len()];
        loop {
            let key: Vec<i64> = base.iter().zip(&offset).map(|(b, o)| b + o).collect();
            if let Some(list) = cells.get(&key) {
                for &i in list {
                    best = best.max(cos_max_angle(&net.elements[i], s));
                }
            }
            // odometer over {-1, 0, 1}^d
            let mut pos = 0;
            while pos < offset.len() && offset[pos] == 1 {
                offset[pos] = -1;
                pos += 1;
            }
            if pos == offset.len() {
                break;
            }
            offset[pos] += 1;
        }
        if best >= threshold || !exact {
            best
        } else {
            net.nearest_cos(s).1
        }
    }
}

impl EpsNet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn nearest_cos(&self, v: &Subspace) -> (usize, f64) {
        let mut best = (0, -1.0);
        for (i, e) in self.elements.iter().enumerate() {
            let c = cos_max_angle(e, v);
            if c > best.1 {
                best = (i, c);
            }
        }
        best
    }

    /// Adds extra elements; coverage can only improve, so the audit is kept.
    pub fn with_elements(mut self, extra: Vec<Subspace>) -> Result<Self> {
        for e in &extra {
            check_dim(self.d, e.d())?;
            check_dim(self.k, e.k())?;
        }
        self.elements.extend(extra);
        Ok(self)
    }
}

/// The element minimising the largest principal angle to `v`, with that angle.
pub fn nearest_in_net(net: &EpsNet, v: &Subspace) -> Result<(usize, f64)> {
    if net.is_empty() {
        return Err(Error::InvalidInput("empty net".into()));
    }
    check_dim(net.d, v.d())?;
    check_dim(net.k, v.k())?;
    let (i, _) = net.nearest_cos(v);
    Ok((i, max_angle(&net.elements[i], v)?))
}

/// Outcome of [`near_orthogonal_pick`].
#[derive(Clone, Debug)]
pub struct OrthoPick {
    pub index: usize,
    pub subspace: Subspace,
    /// Angle between the chosen element and the target subspace in the complement.
    pub angle: f64,
    /// `max |u . v|` over unit `u` in the element and unit `v` in the span.
    pub bound: f64,
}

/// Net element almost orthogonal to `span(v_span)`: take the first `k`
/// vectors of the complement basis as a target and return its nearest
/// element. The reported `bound` is measured, not assumed.
pub fn near_orthogonal_pick(net: &EpsNet, v_span: &[Vec<f64>]) -> Result<OrthoPick> {
    let span = Subspace::span(v_span)?;
    check_dim(net.d, span.d())?;
    let s = span.k();
    if s + net.k > net.d {
        return Err(Error::InvalidInput(format!("span dimension {s} exceeds d - k = {}", net.d - net.k)));
    }
    let comp = span.complement_vectors();
    let target = Subspace::span(&comp[..net.k])?;
    let (index, angle) = nearest_in_net(net, &target)?;
    let subspace = net.elements[index].clone();
    let cross = subspace.basis.transpose() * &span.basis;
    let bound = cross.singular_values().iter().fold(0.0f64, |a, x| a.max(*x));
    Ok(OrthoPick { index, subspace, angle, bound })
}
