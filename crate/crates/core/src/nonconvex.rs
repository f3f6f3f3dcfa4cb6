//! Families that are not in convex position.
//!
//! Three constructions: the perturbed octahedron arrangement with an exact
//! proof of non-convexity, a procedure that defeats any candidate polyhedral
//! cone for a fine net of subspaces, and the section taking such a net to a
//! family of affine flats.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combin::Combinations;
use crate::convexpos::{hyperplanes_general_position, ConvexityCertificate, SignVector};
use crate::error::{check_dim, Error, Result};
use crate::geom::{linalg, lp_feasible, lp_maximize, rat, Constraint, Flat, Hyperplane, LpOptimum, RVec, Rat};
use crate::grassmann::{max_angle, near_orthogonal_pick, nearest_in_net, EpsNet, Subspace};

/// Floating margin below which a point counts as on the boundary.
pub const TAU: f64 = 1e-6;

/// `min(1/(12d), 1/(4 d!))`: nets finer than this cannot be cut out by a cone.
pub fn eps_threshold(d: usize) -> f64 {
    let fact: f64 = (1..=d).map(|i| i as f64).product();
    (1.0 / (12.0 * d as f64)).min(1.0 / (4.0 * fact))
}

/// For a square matrix with unit diagonal and off-diagonal entries at most
/// `delta <= 1` in absolute value, checks `det >= 1 - t! delta` (with 1e-9 slack).
pub fn det_bound_check(m: &DMatrix<f64>, delta: f64) -> Result<bool> {
    let t = m.nrows();
    if m.ncols() != t {
        return Err(Error::DimensionMismatch { expected: t, found: m.ncols() });
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidInput(format!("delta = {delta} outside [0, 1]")));
    }
    for i in 0..t {
        for j in 0..t {
            let x = m[(i, j)];
            let ok = if i == j { (x - 1.0).abs() <= 1e-12 } else { x.abs() <= delta + 1e-12 };
            if !ok {
                return Err(Error::InvalidInput(format!("entry ({i},{j}) = {x} violates the hypothesis")));
            }
        }
    }
    let fact: f64 = (1..=t).map(|i| i as f64).product();
    Ok(m.determinant() >= 1.0 - fact * delta - 1e-9)
}

/// A polyhedral cone: the positive hull of `generators`, intersected with
/// `{x : n.x >= 0}` for each normal in `halfspaces`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConeRepr", into = "ConeRepr")]
pub struct Cone {
    pub d: usize,
    pub generators: Vec<Vec<f64>>,
    pub halfspaces: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    format: u32,
    d: usize,
    #[serde(default)]
    generators: Vec<Vec<f64>>,
    #[serde(default)]
    halfspaces: Vec<Vec<f64>>,
}

impl TryFrom<ConeRepr> for Cone {
    type Error = Error;
    fn try_from(r: ConeRepr) -> Result<Self> {
        if r.format != 1 {
            return Err(Error::Format(format!("unsupported cone format {}", r.format)));
        }
        Cone::new(r.d, r.generators, r.halfspaces)
    }
}

impl From<Cone> for ConeRepr {
    fn from(c: Cone) -> Self {
        ConeRepr { format: 1, d: c.d, generators: c.generators, halfspaces: c.halfspaces }
    }
}

impl Cone {
    pub fn new(d: usize, generators: Vec<Vec<f64>>, halfspaces: Vec<Vec<f64>>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("cone dimension {d} < 2")));
        }
        if generators.is_empty() && halfspaces.is_empty() {
            return Err(Error::InvalidInput("cone needs generators or halfspaces".into()));
        }
        for v in generators.iter().chain(&halfspaces) {
            check_dim(d, v.len())?;
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite cone data".into()));
            }
        }
        Ok(Cone { d, generators, halfspaces })
    }

    pub fn from_generators(generators: Vec<Vec<f64>>) -> Result<Self> {
        let d = generators.first().map_or(0, Vec::len);
        Cone::new(d, generators, Vec::new())
    }

    /// Facet normals (inward, exact) and a certified interior direction.
    pub fn prepare(&self) -> Result<PreparedCone> {
        let mut normals: Vec<RVec> = Vec::new();
        if !self.generators.is_empty() {
            let gens: Vec<RVec> = self.generators.iter().map(|g| RVec::from_f64(g)).collect::<Result<_>>()?;
            if linalg::rank(&gens) < self.d {
                return Err(Error::Degenerate("generators do not span: the cone has empty interior".into()));
            }
            for sub in Combinations::new(gens.len(), self.d - 1) {
                let rows: Vec<Vec<Rat>> = sub.iter().map(|&i| gens[i].coords().to_vec()).collect();
                let null = linalg::nullspace(&rows, self.d);
                if null.len() != 1 {
                    continue;
                }
                let n = &null[0];
                let signs: Vec<Rat> = gens.iter().map(|g| n.dot(g)).collect();
                let n = if signs.iter().all(|s| !s.is_negative()) {
                    n.clone()
                } else if signs.iter().all(|s| !s.is_positive()) {
                    -n
                } else {
                    continue;
                };
                let n = canonical(&n);
                if !normals.contains(&n) {
                    normals.push(n);
                }
            }
        }
        for h in &self.halfspaces {
            let n = RVec::from_f64(h)?;
            if n.is_zero() {
                return Err(Error::InvalidInput("zero halfspace normal".into()));
            }
            let n = canonical(&n);
            if !normals.contains(&n) {
                normals.push(n);
            }
        }
        let units: Vec<Vec<f64>> = normals.iter().map(|n| unit(&n.to_f64())).collect();
        let mut cone = PreparedCone { d: self.d, normals, units, interior: Vec::new(), interior_margin: 0.0 };
        let identity: Vec<Vec<f64>> = (0..self.d).map(|i| (0..self.d).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        let (value, t) = cone.max_margin(&identity)?;
        let g = unit(&t);
        let margin = cone.margin(&g);
        if !(value > 0.0) || !(margin > TAU) {
            return Err(Error::Degenerate(format!("cone interior too thin: margin {margin:e}")));
        }
        cone.interior = g;
        cone.interior_margin = margin;
        Ok(cone)
    }
}

fn canonical(n: &RVec) -> RVec {
    let lead = n.coords().iter().find(|x| !x.is_zero()).expect("nonzero").abs();
    n.scale(&lead.recip())
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A cone with inward facet normals and a unit interior direction.
#[derive(Clone, Debug)]
pub struct PreparedCone {
    pub d: usize,
    pub normals: Vec<RVec>,
    pub units: Vec<Vec<f64>>,
    pub interior: Vec<f64>,
    pub interior_margin: f64,
}

/// How a subspace meets a cone.
#[derive(Clone, Debug, PartialEq)]
pub enum Probe {
    /// A unit vector of the subspace with interior margin above [`TAU`].
    Interior(Vec<f64>, f64),
    /// The subspace meets the cone only at the origin.
    Trivial,
    /// A unit vector of the subspace on the boundary of the cone.
    Boundary(Vec<f64>),
}

impl PreparedCone {
    /// `min_i n_i . x` over unit facet normals (`+inf` without facets).
    pub fn margin(&self, x: &[f64]) -> f64 {
        self.units.iter().map(|n| dot(n, x)).fold(f64::INFINITY, f64::min)
    }

    /// Maximizes `m` subject to `n_i . (Q t) >= m`, `|t_l| <= 1`, `m <= 1`,
    /// with the columns of `Q` given as vectors.
    fn max_margin(&self, q: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
        let m = q.len();
        let rows = self.restricted_rows(q)?;
        let mut cons = Vec::new();
        for r in &rows {
            let mut c = r.coords().to_vec();
            c.push(-rat::one());
            cons.push(Constraint::ge(RVec::new(c)?, rat::zero()));
        }
        for l in 0..=m {
            cons.push(Constraint::le(RVec::unit(m + 1, l), rat::one()));
            if l < m {
                cons.push(Constraint::ge(RVec::unit(m + 1, l), -rat::one()));
            }
        }
        match lp_maximize(m + 1, &cons, &RVec::unit(m + 1, m))? {
            LpOptimum::Optimal { point, value } => {
                let t: Vec<f64> = point.to_f64()[..m].to_vec();
                Ok((rat::to_f64(&value), combine(q, &t)))
            }
            _ => Err(Error::Degenerate("margin LP has no optimum".into())),
        }
    }

    /// Facet normals restricted to `span(q)`: rows `n_i^T Q`, exact in the
    /// binary64 inputs.
    fn restricted_rows(&self, q: &[Vec<f64>]) -> Result<Vec<RVec>> {
        let qr: Vec<RVec> = q.iter().map(|v| RVec::from_f64(v)).collect::<Result<_>>()?;
        self.normals.iter().map(|n| RVec::new(qr.iter().map(|v| n.dot(v)).collect())).collect()
    }

    /// Classifies `span(q)` against the cone by exact LPs on its coordinates.
    pub fn probe(&self, q: &[Vec<f64>]) -> Result<Probe> {
        let (value, x) = self.max_margin(q)?;
        if value > 0.0 {
            let u = unit(&x);
            let m = self.margin(&u);
            if m > TAU {
                return Ok(Probe::Interior(u, m));
            }
        }
        let rows = self.restricted_rows(q)?;
        let k = q.len();
        for l in 0..k {
            for s in [-1i64, 1] {
                let mut cons: Vec<Constraint> = rows.iter().map(|r| Constraint::ge(r.clone(), rat::zero())).collect();
                cons.push(Constraint::eq(RVec::unit(k, l), rat::int(s)));
                for j in 0..k {
                    cons.push(Constraint::le(RVec::unit(k, j), rat::one()));
                    cons.push(Constraint::ge(RVec::unit(k, j), -rat::one()));
                }
                if let crate::geom::LpStatus::Feasible(t) = lp_feasible(k, &cons)? {
                    return Ok(Probe::Boundary(unit(&combine(q, &t.to_f64()))));
                }
            }
        }
        Ok(Probe::Trivial)
    }
}

fn combine(q: &[Vec<f64>], t: &[f64]) -> Vec<f64> {
    let d = q.first().map_or(0, Vec::len);
    let mut out = vec![0.0; d];
    for (v, c) in q.iter().zip(t) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// A net element violating one of the two conditions every element must
/// satisfy if the cone cut it in a face: `U ∩ C ≠ {0}` (1) and
/// `U ∩ int C = ∅` (2).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EarlyRefutation {
    pub net_index: usize,
    pub condition: u8,
    /// For condition (2): a unit vector of the element inside the cone.
    pub witness: Option<Vec<f64>>,
    /// Interior margin of the witness, or for condition (1) the best margin
    /// over unit vectors of a line element (negative).
    pub margin: Option<f64>,
    pub stage: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x: Vec<f64>,
    pub y_c: Vec<f64>,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dets {
    pub det_m: f64,
    pub det_mtm: f64,
    pub det_mstar_t_mstar: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    /// Net indices of the elements the boundary vectors `a_1, ...` came from.
    pub picks: Vec<usize>,
    pub a_vectors: Vec<Vec<f64>>,
    pub b_vectors: Vec<Vec<f64>>,
    pub c_vectors: Vec<Vec<f64>>,
    pub c_star: Vec<Vec<f64>>,
    pub b_star: Vec<f64>,
    pub eta: f64,
    /// Largest principal angle between the chosen element and `W`.
    pub angle_uw: f64,
    pub max_a_dot: f64,
    pub max_b_dot: f64,
    pub solution: Solution,
    pub dets: Dets,
}

/// A net element `U` and a point `z ∈ U ∩ int C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub net_index: usize,
    pub witness_z: Vec<f64>,
    pub margin_interior: f64,
    pub membership_residual: f64,
    pub trace: Trace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    Certificate(RefutationCertificate),
    Early(EarlyRefutation),
}

#[derive(Clone, Debug)]
pub struct RefuteOptions {
    /// Scan the whole net for a violated condition before constructing.
    pub scan_first: bool,
}

impl Default for RefuteOptions {
    fn default() -> Self {
        RefuteOptions { scan_first: true }
    }
}

/// Shows that the cone does not cut every net element in a face.
pub fn refute_cone(cone: &Cone, net: &EpsNet) -> Result<Refutation> {
    refute_cone_with(cone, net, &RefuteOptions::default())
}

pub fn refute_cone_with(cone: &Cone, net: &EpsNet, opts: &RefuteOptions) -> Result<Refutation> {
    check_dim(net.d, cone.d)?;
    if net.is_empty() {
        return Err(Error::InvalidInput("empty net".into()));
    }
    let (d, k) = (net.d, net.k);
    if net.eps >= eps_threshold(d) {
        log::warn!("net eps {} is not below the threshold {} for d = {d}", net.eps, eps_threshold(d));
    }
    let pc = cone.prepare()?;
    if opts.scan_first {
        if let Some(early) = scan(&pc, net)? {
            return Ok(Refutation::Early(early));
        }
    }

    let a0 = boundary_vector(cone, &pc)?;
    let mut a = vec![a0];
    let mut picks = Vec::new();
    for j in 1..=d - k {
        let pick = near_orthogonal_pick(net, &a)?;
        match pc.probe(&pick.subspace.vectors())? {
            Probe::Interior(u, m) => {
                return Ok(Refutation::Early(EarlyRefutation {
                    net_index: pick.index,
                    condition: 2,
                    witness: Some(u),
                    margin: Some(m),
                    stage: format!("boundary vector a_{j}"),
                }));
            }
            Probe::Trivial => {
                return Ok(Refutation::Early(EarlyRefutation {
                    net_index: pick.index,
                    condition: 1,
                    witness: None,
                    margin: None,
                    stage: format!("boundary vector a_{j}"),
                }));
            }
            Probe::Boundary(u) => {
                picks.push(pick.index);
                a.push(u);
            }
        }
    }
    let max_a_dot = max_pair_dot(&a);
    if max_a_dot >= net.eps {
        return Err(Error::Refutation(format!("boundary vectors not almost orthogonal: {max_a_dot:e} >= {}", net.eps)));
    }

    let mut eta = net.eps / (8.0 * (d as f64 + 1.0));
    let b = loop {
        let b: Vec<Vec<f64>> =
            a.iter().map(|ai| unit(&ai.iter().zip(&pc.interior).map(|(x, g)| x + eta * g).collect::<Vec<_>>())).collect();
        if max_pair_dot(&b) < net.eps && b.iter().all(|bi| pc.margin(bi) > 0.0) {
            break b;
        }
        eta /= 2.0;
        if eta < 1e-300 {
            return Err(Error::Refutation("could not push boundary vectors into the interior".into()));
        }
    };
    let max_b_dot = max_pair_dot(&b);

    let v = Subspace::span(&b)?;
    let mut c = v.complement_vectors();
    let mut m = columns(b.iter().chain(&c), d);
    if k >= 2 && m.determinant() < 0.0 {
        c[0].iter_mut().for_each(|x| *x = -*x);
        m = columns(b.iter().chain(&c), d);
    }
    let det_m = m.determinant();
    let mtm = m.transpose() * &m;
    let det_mtm = mtm.determinant();
    guard_gram(&mtm, "M")?;

    let b_sum: Vec<f64> = (0..d).map(|i| b.iter().map(|bi| bi[i]).sum()).collect();
    let mut w_vecs = c.clone();
    w_vecs.push(b_sum.clone());
    let w = Subspace::span(&w_vecs)?;
    let (net_index, _) = nearest_in_net(net, &w)?;
    let u = &net.elements[net_index];
    let angle_uw = max_angle(u, &w)?;

    let c_star: Vec<Vec<f64>> = c.iter().map(|cj| unit(&u.project(cj))).collect();
    let pb = u.project(&b_sum);
    let scale = norm(&b_sum) / norm(&pb);
    let b_star: Vec<f64> = pb.iter().map(|x| x * scale).collect();

    let ms = columns(b.iter().chain(&c_star), d);
    let mstm = ms.transpose() * &ms;
    let det_mstar_t_mstar = mstm.determinant();
    guard_gram(&mstm, "M*")?;

    let sol = ms
        .clone()
        .lu()
        .solve(&DVector::from_column_slice(&b_star))
        .ok_or_else(|| Error::Refutation("M* is singular".into()))?;
    let mut all: Vec<f64> = sol.iter().copied().collect();
    all.push(1.0);
    let pivot = all.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    all.iter_mut().for_each(|x| *x /= pivot);
    let nb = d - k + 1;
    let solution = Solution { x: all[..nb].to_vec(), y_c: all[nb..d].to_vec(), y: all[d] };

    for (j, yj) in solution.y_c.iter().enumerate() {
        if !(yj.abs() < 0.25) {
            return Err(Error::Refutation(format!("|y_{}| = {} is not below 1/4", j + 1, yj.abs())));
        }
    }
    for (i, xi) in solution.x.iter().enumerate() {
        if !((xi - solution.y).abs() <= 0.25) {
            return Err(Error::Refutation(format!("|x_{i} - y| = {} exceeds 1/4", (xi - solution.y).abs())));
        }
        if !(*xi > 0.5) {
            return Err(Error::Refutation(format!("x_{i} = {xi} is not above 1/2")));
        }
    }

    let z = combine(&b, &solution.x);
    let margin_interior = pc.margin(&z);
    let membership_residual = u.residual(&z);
    if !(margin_interior > 0.0) {
        return Err(Error::Refutation(format!("z has interior margin {margin_interior:e}")));
    }

    Ok(Refutation::Certificate(RefutationCertificate {
        net_index,
        witness_z: z,
        margin_interior,
        membership_residual,
        trace: Trace {
            picks,
            a_vectors: a,
            b_vectors: b,
            c_vectors: c,
            c_star,
            b_star,
            eta,
            angle_uw,
            max_a_dot,
            max_b_dot,
            solution,
            dets: Dets { det_m, det_mtm, det_mstar_t_mstar },
        },
    }))
}

fn columns<'a>(vs: impl Iterator<Item = &'a Vec<f64>>, d: usize) -> DMatrix<f64> {
    let vs: Vec<&Vec<f64>> = vs.collect();
    DMatrix::from_fn(d, vs.len(), |i, j| vs[j][i])
}

fn max_pair_dot(vs: &[Vec<f64>]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            best = best.max(dot(&vs[i], &vs[j]).abs());
        }
    }
    best
}

/// `det(G) > 1/4` for a Gram matrix, cross-checked against the determinant bound.
fn guard_gram(g: &DMatrix<f64>, name: &str) -> Result<()> {
    let det = g.determinant();
    if !(det > 0.25) {
        return Err(Error::Refutation(format!("det({name}^T {name}) = {det} is not above 1/4")));
    }
    let t = g.nrows();
    let mut delta = 0.0f64;
    let mut h = g.clone();
    for i in 0..t {
        for j in 0..t {
            if i != j {
                delta = delta.max(g[(i, j)].abs());
            }
        }
        h[(i, i)] = 1.0;
    }
    if delta <= 1.0 && !det_bound_check(&h, delta)? {
        return Err(Error::Refutation(format!("determinant bound fails for {name}^T {name}")));
    }
    Ok(())
}

/// First generator on the boundary, else a nonzero point of some facet.
fn boundary_vector(cone: &Cone, pc: &PreparedCone) -> Result<Vec<f64>> {
    for g in &cone.generators {
        let u = unit(g);
        if pc.margin(&u) <= TAU {
            return Ok(u);
        }
    }
    for n in &pc.normals {
        let rows = vec![n.coords().to_vec()];
        let basis: Vec<Vec<f64>> = linalg::nullspace(&rows, pc.d).iter().map(|v| unit(&v.to_f64())).collect();
        if let Probe::Boundary(u) = pc.probe(&basis)? {
            return Ok(u);
        }
    }
    Err(Error::Refutation("no boundary vector found".into()))
}

/// Looks for an element violating condition (1) or (2).
fn scan(pc: &PreparedCone, net: &EpsNet) -> Result<Option<EarlyRefutation>> {
    let early = |i: usize, condition: u8, witness: Option<Vec<f64>>, margin: Option<f64>| EarlyRefutation {
        net_index: i,
        condition,
        witness,
        margin,
        stage: "scan".into(),
    };
    for (i, e) in net.elements.iter().enumerate() {
        if net.k == 1 {
            let u = e.vector(0);
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            let (mp, mn) = (pc.margin(&u), pc.margin(&neg));
            if mp > TAU {
                return Ok(Some(early(i, 2, Some(u), Some(mp))));
            }
            if mn > TAU {
                return Ok(Some(early(i, 2, Some(neg), Some(mn))));
            }
            if mp < -TAU && mn < -TAU {
                return Ok(Some(early(i, 1, None, Some(mp.max(mn)))));
            }
        } else {
            match pc.probe(&e.vectors())? {
                Probe::Interior(u, m) => return Ok(Some(early(i, 2, Some(u), Some(m)))),
                Probe::Trivial => return Ok(Some(early(i, 1, None, None))),
                Probe::Boundary(_) => {}
            }
        }
    }
    Ok(None)
}

/// Checks a refutation against the cone and net from scratch.
pub fn check_refutation(cone: &Cone, net: &EpsNet, r: &Refutation) -> Result<bool> {
    let pc = cone.prepare()?;
    Ok(match r {
        Refutation::Certificate(c) => {
            let Some(u) = net.elements.get(c.net_index) else { return Ok(false) };
            let z = &c.witness_z;
            pc.margin(z) > 0.0 && u.residual(z) <= TAU * norm(z).max(1.0) && c.trace.solution.x.iter().all(|x| *x > 0.5)
        }
        Refutation::Early(e) => {
            let Some(u) = net.elements.get(e.net_index) else { return Ok(false) };
            match (e.condition, &e.witness) {
                (2, Some(z)) => pc.margin(z) > TAU && u.residual(z) <= 1e-9,
                (1, _) => pc.probe(&u.vectors())? == Probe::Trivial,
                _ => false,
            }
        }
    })
}

/// The perturbed octahedron arrangement: `d` hyperplanes near `x_i = 0`
/// followed by `2^d` near `δ.x = 1`, with `δ` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OctaRepr", into = "OctaRepr")]
pub struct OctaFamily {
    pub d: usize,
    pub hyperplanes: Vec<Hyperplane>,
    pub seed: u64,
    pub magnitude: Rat,
}

#[derive(Serialize, Deserialize)]
struct OctaRepr {
    format: u32,
    d: usize,
    hyperplanes: Vec<Hyperplane>,
    seed: u64,
    #[serde(with = "rat")]
    magnitude: Rat,
}

impl TryFrom<OctaRepr> for OctaFamily {
    type Error = Error;
    fn try_from(r: OctaRepr) -> Result<Self> {
        if r.format != 1 {
            return Err(Error::Format(format!("unsupported family format {}", r.format)));
        }
        if r.hyperplanes.len() != r.d + (1 << r.d) {
            return Err(Error::Format(format!("{} hyperplanes for d = {}", r.hyperplanes.len(), r.d)));
        }
        for h in &r.hyperplanes {
            check_dim(r.d, h.dim())?;
        }
        Ok(OctaFamily { d: r.d, hyperplanes: r.hyperplanes, seed: r.seed, magnitude: r.magnitude })
    }
}

impl From<OctaFamily> for OctaRepr {
    fn from(f: OctaFamily) -> Self {
        OctaRepr { format: 1, d: f.d, hyperplanes: f.hyperplanes, seed: f.seed, magnitude: f.magnitude }
    }
}

/// Denominator of the random perturbations.
const PERTURB_DENOM: i64 = 1_000_000;
const OCTA_RETRIES: u64 = 32;

/// The family with perturbations of size at most `1/1000`.
pub fn octa_family(d: usize, seed: u64) -> Result<OctaFamily> {
    octa_family_with(d, seed, &rat::frac(1, 1000))
}

/// The family with perturbations of size at most `magnitude`, retried with
/// fresh seeds until it is in general position.
pub fn octa_family_with(d: usize, seed: u64, magnitude: &Rat) -> Result<OctaFamily> {
    if !(2..=4).contains(&d) {
        return Err(Error::InvalidInput(format!("octahedron family supported for 2 <= d <= 4, got {d}")));
    }
    if magnitude.is_negative() {
        return Err(Error::InvalidInput("negative perturbation".into()));
    }
    let bound: i64 = (magnitude * rat::int(PERTURB_DENOM)).floor().to_integer().try_into().unwrap_or(i64::MAX / 2);
    for attempt in 0..OCTA_RETRIES {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut jitter = || Rat::new(BigInt::from(rng.random_range(-bound..=bound)), BigInt::from(PERTURB_DENOM));
        let mut bases: Vec<(Vec<i64>, i64)> = (0..d).map(|i| ((0..d).map(|j| i64::from(i == j)).collect(), 0)).collect();
        bases.extend(SignVector::all(d).map(|delta| (delta.signs().iter().map(|&x| i64::from(x)).collect(), 1)));
        let hyperplanes: Vec<Hyperplane> = bases
            .iter()
            .map(|(n, c)| {
                let normal = RVec::new(n.iter().map(|&x| rat::int(x) + jitter()).collect())?;
                Hyperplane::new(normal, rat::int(*c) + jitter())
            })
            .collect::<Result<_>>()?;
        if hyperplanes_general_position(&hyperplanes).is_ok() {
            return Ok(OctaFamily { d, hyperplanes, seed: s, magnitude: magnitude.clone() });
        }
    }
    Err(Error::RetriesExhausted(OCTA_RETRIES as usize, "no perturbation in general position".into()))
}

/// One step of the non-convexity proof: the region cut out by the
/// coordinate-like hyperplanes with signs `sigma` misses the opposite
/// octahedron hyperplane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OctaCheck {
    pub sigma: SignVector,
    pub opposite: usize,
    pub infeasible: bool,
    pub witness: Option<RVec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OctaProof {
    pub certified: bool,
    pub checks: Vec<OctaCheck>,
}

/// Runs all `2^d` exact checks; `certified` iff all are infeasible.
pub fn verify_octa_nonconvex(fam: &OctaFamily) -> Result<OctaProof> {
    let d = fam.d;
    if fam.hyperplanes.len() != d + (1 << d) {
        return Err(Error::InvalidInput(format!("{} hyperplanes for d = {d}", fam.hyperplanes.len())));
    }
    hyperplanes_general_position(&fam.hyperplanes)?;
    let sigmas: Vec<SignVector> = SignVector::all(d).collect();
    let checks: Vec<OctaCheck> = sigmas
        .par_iter()
        .map(|sigma| {
            // h_δ sits at position d + (index of δ in lexicographic order)
            let neg = sigma.negated();
            let opposite = d + sigmas.iter().position(|s| *s == neg).expect("all sign vectors listed");
            let mut cons: Vec<Constraint> = fam.hyperplanes[..d]
                .iter()
                .zip(sigma.signs())
                .map(|(h, &s)| {
                    let s = rat::int(s.into());
                    Constraint::gt(h.normal().scale(&s), h.offset() * &s)
                })
                .collect();
            let h = &fam.hyperplanes[opposite];
            cons.push(Constraint::eq(h.normal().clone(), h.offset().clone()));
            let status = lp_feasible(d, &cons)?;
            Ok(OctaCheck {
                sigma: sigma.clone(),
                opposite,
                infeasible: !status.is_feasible(),
                witness: match status {
                    crate::geom::LpStatus::Feasible(x) => Some(x),
                    crate::geom::LpStatus::Infeasible => None,
                },
            })
        })
        .collect::<Result<_>>()?;
    Ok(OctaProof { certified: checks.iter().all(|c| c.infeasible), checks })
}

/// Affine flats cut from a net by `x_{d+1} = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SectionRepr", into = "SectionRepr")]
pub struct Section {
    pub flats: Vec<Flat>,
    /// Net index of each flat.
    pub source: Vec<usize>,
    /// Net elements (almost) parallel to the section hyperplane.
    pub rejected: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SectionRepr {
    format: u32,
    flats: Vec<Flat>,
    source: Vec<usize>,
    rejected: Vec<usize>,
}

impl TryFrom<SectionRepr> for Section {
    type Error = Error;
    fn try_from(r: SectionRepr) -> Result<Self> {
        if r.format != 1 {
            return Err(Error::Format(format!("unsupported section format {}", r.format)));
        }
        if r.flats.len() != r.source.len() {
            return Err(Error::Format("flats and source differ in length".into()));
        }
        Ok(Section { flats: r.flats, source: r.source, rejected: r.rejected })
    }
}

impl From<Section> for SectionRepr {
    fn from(s: Section) -> Self {
        SectionRepr { format: 1, flats: s.flats, source: s.source, rejected: s.rejected }
    }
}

/// Rationalization denominator for sectioned flats.
pub const SECTION_DENOM: i64 = 1 << 30;
/// Elements with `|last row| <= PARALLEL_TOL` count as parallel to the section.
pub const PARALLEL_TOL: f64 = 1e-9;

/// Intersects every element of a net over `Gr(k+1, d+1)` with `x_{d+1} = 1`
/// and drops the last coordinate.
pub fn section_to_affine(net: &EpsNet) -> Result<Section> {
    let d = net.d.checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| Error::InvalidInput("net dimension too small".into()))?;
    let k = net.k - 1;
    let mut flats = Vec::new();
    let mut source = Vec::new();
    let mut rejected = Vec::new();
    for (idx, e) in net.elements.iter().enumerate() {
        let q: Vec<Vec<f64>> = e.vectors();
        let last: Vec<f64> = q.iter().map(|v| v[d]).collect();
        let ln = norm(&last);
        if ln <= PARALLEL_TOL {
            rejected.push(idx);
            continue;
        }
        let base_w: Vec<f64> = last.iter().map(|x| x / (ln * ln)).collect();
        let base = combine(&q, &base_w);
        let dirs: Vec<Vec<f64>> = if k == 0 {
            Vec::new()
        } else {
            let l = Subspace::span(&[last.clone()])?;
            l.complement_vectors().iter().map(|r| combine(&q, r)).collect()
        };
        let to_rat = |v: &[f64]| -> Result<RVec> { RVec::new(v[..d].iter().map(|x| rat::round_to(*x, SECTION_DENOM)).collect::<Result<_>>()?) };
        match Flat::new(to_rat(&base)?, dirs.iter().map(|v| to_rat(v)).collect::<Result<_>>()?) {
            Ok(f) => {
                flats.push(f);
                source.push(idx);
            }
            Err(_) => rejected.push(idx),
        }
    }
    if rejected.len() * 100 > net.len() {
        return Err(Error::Degenerate(format!(
            "{} of {} net elements are parallel to the section; re-seed the net",
            rejected.len(),
            net.len()
        )));
    }
    Ok(Section { flats, source, rejected })
}

/// Lifts a certificate for affine flats in `R^d` to one for the linear
/// spans of `flat × {1}` in `R^{d+1}`: the origin joins every touch set and
/// the interior block, and each support passes through the origin.
pub fn homogenize_certificate(c: &ConvexityCertificate) -> Result<ConvexityCertificate> {
    let lift = |p: &RVec| RVec::new(p.coords().iter().cloned().chain([rat::one()]).collect());
    let origin = |d: usize| RVec::zeros(d + 1);
    let d = c.flats.first().map(Flat::d).ok_or_else(|| Error::InvalidInput("empty certificate".into()))?;
    let flats = c
        .flats
        .iter()
        .map(|f| {
            let mut dirs = vec![lift(f.base())?];
            for v in f.dirs() {
                dirs.push(RVec::new(v.coords().iter().cloned().chain([rat::zero()]).collect())?);
            }
            Flat::new(origin(d), dirs)
        })
        .collect::<Result<_>>()?;
    let touch_sets = c
        .touch_sets
        .iter()
        .map(|t| std::iter::once(Ok(origin(d))).chain(t.iter().map(lift)).collect())
        .collect::<Result<_>>()?;
    let supports = c
        .supports
        .iter()
        .map(|h| Hyperplane::new(RVec::new(h.normal().coords().iter().cloned().chain([-h.offset().clone()]).collect())?, rat::zero()))
        .collect::<Result<_>>()?;
    let interior_block = std::iter::once(Ok(origin(d))).chain(c.interior_block.iter().map(lift)).collect::<Result<_>>()?;
    Ok(ConvexityCertificate { flats, touch_sets, supports, interior_block })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexpos::{cell_bounded_by_all, hyperplanes_convex_position, lines_convex_position_2d, verify_certificate};
    use crate::eskit::hyperplane_pipeline;
    use crate::grassmann::{build_eps_net_with, NetAudit, NetConfig};
    use std::sync::OnceLock;

    fn quick() -> NetConfig {
        NetConfig { stall: 500, audit_samples: 5_000, ..NetConfig::default() }
    }

    fn line_net() -> &'static EpsNet {
        static NET: OnceLock<EpsNet> = OnceLock::new();
        NET.get_or_init(|| build_eps_net_with(3, 1, 1.0 / 40.0, 9, &quick()).unwrap())
    }

    fn axes(k: usize) -> Vec<Subspace> {
        let e = |i: usize| (0..3).map(|j| f64::from(u8::from(i == j))).collect::<Vec<f64>>();
        match k {
            1 => (0..3).map(|i| Subspace::new(&[e(i)]).unwrap()).collect(),
            _ => vec![
                Subspace::new(&[e(1), e(2)]).unwrap(),
                Subspace::new(&[e(0), e(2)]).unwrap(),
                Subspace::new(&[e(0), e(1)]).unwrap(),
            ],
        }
    }

    fn orthant() -> Cone {
        Cone::from_generators(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap()
    }

    #[test]
    fn thresholds() {
        assert_eq!(eps_threshold(2), 1.0 / 24.0);
        assert_eq!(eps_threshold(3), 1.0 / 36.0);
        assert_eq!(eps_threshold(4), 1.0 / 96.0);
    }

    #[test]
    fn determinant_bound() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.1, 1.0]);
        assert!((m.determinant() - 0.99).abs() < 1e-12);
        assert!(det_bound_check(&m, 0.1).unwrap());
        assert!(det_bound_check(&DMatrix::identity(4, 4), 0.0).unwrap());
        assert!(det_bound_check(&m, 0.05).is_err());
        let bad_diag = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!(det_bound_check(&bad_diag, 0.1).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let delta = 0.01;
            let m = DMatrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { rng.random_range(-delta..=delta) });
            assert!(m.determinant() >= 1.0 - 6.0 * delta);
            assert!(det_bound_check(&m, delta).unwrap());
        }
    }

    #[test]
    fn orthant_facets() {
        let pc = orthant().prepare().unwrap();
        assert_eq!(pc.normals.len(), 3);
        for n in &pc.normals {
            assert_eq!(n.coords().iter().filter(|x| x.is_zero()).count(), 2);
        }
        let s = 1.0 / 3f64.sqrt();
        for x in &pc.interior {
            assert!((x - s).abs() < 1e-12);
        }
        assert!(matches!(pc.probe(&[vec![1.0, 0.0, 0.0]]).unwrap(), Probe::Boundary(_)));
        assert!(matches!(pc.probe(&[vec![s, s, s]]).unwrap(), Probe::Interior(..)));
        let anti = [vec![1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0]];
        assert_eq!(pc.probe(&anti).unwrap(), Probe::Trivial);
    }

    #[test]
    fn flat_cones_rejected() {
        let flat = Cone::from_generators(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]]).unwrap();
        assert!(matches!(flat.prepare(), Err(Error::Degenerate(_))));
        let half = Cone::new(3, Vec::new(), vec![vec![0.0, 0.0, 1.0], vec![0.0, 0.0, -1.0]]).unwrap();
        assert!(half.prepare().is_err());
    }

    fn assert_full(r: &Refutation, net: &EpsNet) -> RefutationCertificate {
        let Refutation::Certificate(c) = r else { panic!("expected a full certificate, got {r:?}") };
        assert!(c.margin_interior > 0.0);
        assert!(c.membership_residual <= 1e-6);
        assert!(c.trace.solution.x.iter().all(|x| *x > 0.5));
        assert!(c.trace.solution.y_c.iter().all(|y| y.abs() < 0.25));
        assert!(c.trace.solution.x.iter().all(|x| (x - c.trace.solution.y).abs() <= 0.25));
        assert!(c.trace.dets.det_mtm > 0.25 && c.trace.dets.det_mstar_t_mstar > 0.25);
        assert!(c.trace.max_a_dot < net.eps && c.trace.max_b_dot < net.eps);
        c.clone()
    }

    #[test]
    fn orthant_full_certificate_lines() {
        let net = line_net().clone().with_elements(axes(1)).unwrap();
        let r = refute_cone_with(&orthant(), &net, &RefuteOptions { scan_first: false }).unwrap();
        let c = assert_full(&r, &net);
        assert!(check_refutation(&orthant(), &net, &r).unwrap());
        // the element hit is close to the diagonal
        let u = net.elements[c.net_index].vector(0);
        assert!(u.iter().all(|x| (x.abs() - 1.0 / 3f64.sqrt()).abs() < 0.05));
    }

    #[test]
    fn orthant_full_certificate_planes() {
        let net = build_eps_net_with(3, 2, 1.0 / 40.0, 4, &quick()).unwrap().with_elements(axes(2)).unwrap();
        let r = refute_cone_with(&orthant(), &net, &RefuteOptions { scan_first: false }).unwrap();
        let c = assert_full(&r, &net);
        assert_eq!(c.trace.c_vectors.len(), 1);
        assert!(check_refutation(&orthant(), &net, &r).unwrap());
    }

    #[test]
    fn scan_finds_interior_line() {
        let cone = Cone::from_generators(vec![
            vec![1.0, 0.2, 0.3],
            vec![-0.4, 1.0, 0.5],
            vec![0.1, -0.9, 1.0],
            vec![-1.0, -0.5, 0.8],
        ])
        .unwrap();
        let r = refute_cone(&cone, line_net()).unwrap();
        assert!(matches!(r, Refutation::Early(_)));
        assert!(check_refutation(&cone, line_net(), &r).unwrap());

        // every line off the plane z = 0 enters the open halfspace
        let wide = Cone::new(3, Vec::new(), vec![vec![0.0, 0.0, 1.0]]).unwrap();
        let r = refute_cone(&wide, line_net()).unwrap();
        let Refutation::Early(e) = &r else { panic!("{r:?}") };
        assert_eq!(e.condition, 2);
        assert!(check_refutation(&wide, line_net(), &r).unwrap());
    }

    #[test]
    fn scan_finds_missing_line() {
        let u = vec![1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
        let net = EpsNet {
            d: 3,
            k: 1,
            eps: 0.02,
            seed: 0,
            elements: vec![Subspace::new(&[u]).unwrap()],
            audit: NetAudit { samples: 0, max_observed_gap: 0.0 },
        };
        let r = refute_cone(&orthant(), &net).unwrap();
        assert!(matches!(&r, Refutation::Early(EarlyRefutation { condition: 1, net_index: 0, .. })));
        assert!(check_refutation(&orthant(), &net, &r).unwrap());
    }

    #[test]
    fn refutation_json_round_trip() {
        let net = line_net().clone().with_elements(axes(1)).unwrap();
        let r = refute_cone_with(&orthant(), &net, &RefuteOptions { scan_first: false }).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"kind\":\"certificate\""));
        assert_eq!(serde_json::from_str::<Refutation>(&s).unwrap(), r);
        let cone_json = serde_json::to_string(&orthant()).unwrap();
        assert_eq!(serde_json::from_str::<Cone>(&cone_json).unwrap(), orthant());
    }

    #[test]
    fn octa_sizes_and_ranges() {
        assert_eq!(octa_family(2, 0).unwrap().hyperplanes.len(), 6);
        assert_eq!(octa_family(3, 0).unwrap().hyperplanes.len(), 11);
        let f4 = octa_family(4, 0).unwrap();
        assert_eq!(f4.hyperplanes.len(), 20);
        assert_eq!(hyperplanes_general_position(&f4.hyperplanes).unwrap().len(), 4845);
        assert!(octa_family(5, 0).is_err());
        assert!(octa_family(1, 0).is_err());
        let bound = rat::frac(1, 1000);
        for h in &octa_family(3, 7).unwrap().hyperplanes {
            let near: Vec<Rat> = h.normal().coords().iter().map(|x| x.round()).collect();
            for (x, n) in h.normal().coords().iter().zip(&near) {
                assert!((x - n).abs() <= bound);
            }
            assert!((h.offset() - h.offset().round()).abs() <= bound);
        }
    }

    #[test]
    fn unperturbed_orthant_misses_opposite_line() {
        let cons = vec![
            Constraint::gt(RVec::from_ints(&[1, 0]), rat::zero()),
            Constraint::gt(RVec::from_ints(&[0, 1]), rat::zero()),
            Constraint::eq(RVec::from_ints(&[-1, -1]), rat::one()),
        ];
        assert!(!lp_feasible(2, &cons).unwrap().is_feasible());
    }

    #[test]
    fn octa_certified_and_deciders_agree() {
        for d in [2, 3] {
            let fam = octa_family(d, 1).unwrap();
            let proof = verify_octa_nonconvex(&fam).unwrap();
            assert!(proof.certified);
            assert_eq!(proof.checks.len(), 1 << d);
            assert!(!hyperplanes_convex_position(&fam.hyperplanes, 0).unwrap().is_convex());
        }
        let fam = octa_family(2, 2).unwrap();
        assert!(!lines_convex_position_2d(&fam.hyperplanes).unwrap().convex);
    }

    #[test]
    fn large_perturbations_are_rejected() {
        // lines x = -1/2, y = -1/2, and -x - y = 1/2 meet the orthant-like region
        let mut fam = octa_family(2, 0).unwrap();
        fam.hyperplanes[0] = Hyperplane::new(RVec::from_ints(&[1, 0]), rat::frac(-1, 2)).unwrap();
        fam.hyperplanes[1] = Hyperplane::new(RVec::new(vec![rat::frac(1, 50), rat::one()]).unwrap(), rat::frac(-1, 2)).unwrap();
        fam.hyperplanes[2] = Hyperplane::new(RVec::new(vec![rat::int(-1), rat::frac(-51, 50)]).unwrap(), rat::frac(1, 2)).unwrap();
        let proof = verify_octa_nonconvex(&fam).unwrap();
        assert!(!proof.certified);
        let bad = proof.checks.iter().find(|c| !c.infeasible).unwrap();
        assert_eq!(bad.sigma.signs(), &[1, 1]);
        let rejected = (0..40).any(|s| !verify_octa_nonconvex(&octa_family_with(2, s, &rat::frac(1, 2)).unwrap()).unwrap().certified);
        assert!(rejected);
    }

    #[test]
    fn octa_json_round_trip() {
        let fam = octa_family(2, 3).unwrap();
        let s = serde_json::to_string(&fam).unwrap();
        assert!(s.starts_with("{\"format\":1,"));
        assert_eq!(serde_json::from_str::<OctaFamily>(&s).unwrap(), fam);
    }

    fn net_of(d: usize, k: usize, elements: Vec<Subspace>) -> EpsNet {
        EpsNet { d, k, eps: 1.0, seed: 0, elements, audit: NetAudit { samples: 0, max_observed_gap: 0.0 } }
    }

    #[test]
    fn section_of_lines_gives_points() {
        let u = unit(&[3.0, 2.0]);
        let net = net_of(2, 1, vec![Subspace::new(&[u]).unwrap()]);
        let s = section_to_affine(&net).unwrap();
        assert_eq!(s.flats.len(), 1);
        assert_eq!(s.flats[0].k(), 0);
        assert!((rat::to_f64(&s.flats[0].base()[0]) - 1.5).abs() < 1e-8);
        let flat = net_of(2, 1, vec![Subspace::new(&[vec![1.0, 0.0]]).unwrap()]);
        assert!(section_to_affine(&flat).is_err());
    }

    #[test]
    fn section_of_planes_gives_lines() {
        // the plane x + y - z = 0 meets z = 1 in the line x + y = 1
        let w = Subspace::span(&[vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]]).unwrap();
        let s = section_to_affine(&net_of(3, 2, vec![w])).unwrap();
        let f = &s.flats[0];
        assert_eq!((f.d(), f.k()), (2, 1));
        let on_line = |p: &RVec| (rat::to_f64(&p[0]) + rat::to_f64(&p[1]) - 1.0).abs() < 1e-8;
        assert!(on_line(f.base()));
        assert!(on_line(&f.point_at(&[rat::int(3)])));
    }

    #[test]
    fn sectioned_net_has_no_parallel_elements() {
        let net = build_eps_net_with(3, 2, 0.2, 5, &quick()).unwrap();
        let s = section_to_affine(&net).unwrap();
        assert_eq!(s.flats.len() + s.rejected.len(), net.len());
        assert!(s.flats.iter().all(|f| f.k() == 1 && f.d() == 2));
    }

    #[test]
    fn homogenized_certificates_verify() {
        let tetra: Vec<Hyperplane> = [([1, 0, 0], 0), ([0, 1, 0], 0), ([0, 0, 1], 0), ([1, 1, 1], 1)]
            .iter()
            .map(|(n, c)| Hyperplane::from_ints(n, *c).unwrap())
            .collect();
        let r = hyperplane_pipeline(&tetra, 4, 0).unwrap();
        let lifted = homogenize_certificate(&r.certificate).unwrap();
        assert_eq!(verify_certificate(&lifted), Ok(()));
        assert!(lifted.flats.iter().all(|f| f.base().is_zero() && f.k() == 3));

        let lines: Vec<Hyperplane> = vec![
            Hyperplane::from_ints(&[0, 1], 0).unwrap(),
            Hyperplane::from_ints(&[1, 0], 0).unwrap(),
            Hyperplane::from_ints(&[1, 1], 1).unwrap(),
        ];
        let sigma = SignVector::new(vec![1, 1, -1]).unwrap();
        assert!(cell_bounded_by_all(&lines, &sigma).unwrap());
        let cert = crate::convexpos::lift_cell_certificate(&lines, &sigma).unwrap();
        assert_eq!(verify_certificate(&homogenize_certificate(&cert).unwrap()), Ok(()));
    }
}
