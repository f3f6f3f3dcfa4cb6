//! Deciding and certifying convex position.
//!
//! A [`ConvexityCertificate`] lists, for every flat, a touch set inside the
//! flat and a hyperplane containing the flat, plus an interior block. With
//! `V` the union of all listed points and `P = conv V`, acceptance by
//! [`verify_certificate`] means every flat meets `P` in exactly the convex
//! hull of its touch set, a face of the right dimension.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::Combinations;
use crate::error::{Error, Result};
use crate::geom::{linalg, lp_feasible, rat, vertex_enumeration, Constraint, Flat, HalfSpace, Hyperplane, LpStatus, RVec, Rat};
use crate::random;

/// Budget for random section planes and transversal flats.
pub const RETRIES: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CertRepr", into = "CertRepr")]
pub struct ConvexityCertificate {
    pub flats: Vec<Flat>,
    pub touch_sets: Vec<Vec<RVec>>,
    pub supports: Vec<Hyperplane>,
    pub interior_block: Vec<RVec>,
}

#[derive(Serialize, Deserialize)]
struct CertRepr {
    format: u32,
    flats: Vec<Flat>,
    touch_sets: Vec<Vec<RVec>>,
    supports: Vec<Hyperplane>,
    interior_block: Vec<RVec>,
}

impl TryFrom<CertRepr> for ConvexityCertificate {
    type Error = Error;
    fn try_from(r: CertRepr) -> Result<Self> {
        if r.format != 1 {
            return Err(Error::Format(format!("unsupported certificate format {}", r.format)));
        }
        Ok(ConvexityCertificate {
            flats: r.flats,
            touch_sets: r.touch_sets,
            supports: r.supports,
            interior_block: r.interior_block,
        })
    }
}

impl From<ConvexityCertificate> for CertRepr {
    fn from(c: ConvexityCertificate) -> Self {
        CertRepr { format: 1, flats: c.flats, touch_sets: c.touch_sets, supports: c.supports, interior_block: c.interior_block }
    }
}

/// Where a point of `V` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointRef {
    Interior(usize),
    Touch { flat: usize, index: usize },
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Interior(i) => write!(f, "interior_block[{i}]"),
            PointRef::Touch { flat, index } => write!(f, "touch_sets[{flat}][{index}]"),
        }
    }
}

/// First clause a certificate fails.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("malformed certificate: {0}")]
    Shape(String),
    #[error("(a) touch_sets[{flat}][{index}] is not on flat {flat}")]
    TouchOutsideFlat { flat: usize, index: usize },
    #[error("(b) supports[{flat}] does not contain flat {flat}")]
    SupportMissesFlat { flat: usize },
    #[error("(c) {point} lies on supports[{flat}] but not in its touch set")]
    PointOnSupport { flat: usize, point: PointRef },
    #[error("(c) {first} and {second} lie on opposite sides of supports[{flat}]")]
    OppositeSides { flat: usize, first: PointRef, second: PointRef },
    #[error("(d) touch set {flat} spans dimension {found:?}, expected {expected}")]
    TouchSetDimension { flat: usize, expected: usize, found: Option<usize> },
    #[error("interior block spans dimension {found:?}, expected {expected}")]
    InteriorDimension { expected: usize, found: Option<usize> },
}

/// Exact check of the certificate clauses; `Ok(())` is a proof of convex position.
pub fn verify_certificate(c: &ConvexityCertificate) -> std::result::Result<(), Violation> {
    let n = c.flats.len();
    if c.touch_sets.len() != n || c.supports.len() != n {
        return Err(Violation::Shape(format!(
            "{} flats, {} touch sets, {} supports",
            n,
            c.touch_sets.len(),
            c.supports.len()
        )));
    }
    let Some(d) = c.flats.first().map(Flat::d).or_else(|| c.interior_block.first().map(RVec::dim)) else {
        return Err(Violation::Shape("empty certificate".into()));
    };
    let dims_ok = c.flats.iter().all(|f| f.d() == d)
        && c.supports.iter().all(|h| h.dim() == d)
        && c.touch_sets.iter().flatten().chain(&c.interior_block).all(|p| p.dim() == d);
    if !dims_ok {
        return Err(Violation::Shape(format!("mixed ambient dimensions, expected {d}")));
    }

    let mut all: Vec<(PointRef, &RVec)> = c.interior_block.iter().enumerate().map(|(i, p)| (PointRef::Interior(i), p)).collect();
    for (fi, ts) in c.touch_sets.iter().enumerate() {
        for (index, p) in ts.iter().enumerate() {
            all.push((PointRef::Touch { flat: fi, index }, p));
        }
    }

    for (i, ((flat, touch), support)) in c.flats.iter().zip(&c.touch_sets).zip(&c.supports).enumerate() {
        for (index, p) in touch.iter().enumerate() {
            if !flat.contains(p).unwrap_or(false) {
                return Err(Violation::TouchOutsideFlat { flat: i, index });
            }
        }
        if !support.contains_flat(flat).unwrap_or(false) {
            return Err(Violation::SupportMissesFlat { flat: i });
        }
        let own: BTreeSet<&RVec> = touch.iter().collect();
        let mut side: Option<(Ordering, PointRef)> = None;
        for (r, p) in &all {
            if own.contains(p) {
                continue;
            }
            match support.side(p) {
                Ordering::Equal => return Err(Violation::PointOnSupport { flat: i, point: *r }),
                s => match side {
                    None => side = Some((s, *r)),
                    Some((s0, r0)) if s0 != s => {
                        return Err(Violation::OppositeSides { flat: i, first: r0, second: *r });
                    }
                    _ => {}
                },
            }
        }
        let found = linalg::affine_dim(touch);
        if found != Some(flat.k()) {
            return Err(Violation::TouchSetDimension { flat: i, expected: flat.k(), found });
        }
    }
    let found = linalg::affine_dim(&c.interior_block);
    if found != Some(d) {
        return Err(Violation::InteriorDimension { expected: d, found });
    }
    Ok(())
}

fn check_same_dim(pts: &[RVec]) -> Result<usize> {
    let d = pts.first().map(RVec::dim).ok_or_else(|| Error::InvalidInput("no points".into()))?;
    for p in pts {
        crate::error::check_dim(d, p.dim())?;
    }
    Ok(d)
}

/// True iff every point is a vertex of the convex hull of all of them.
/// Fewer than three points are trivially in convex position.
pub fn points_convex_position(pts: &[RVec]) -> Result<bool> {
    if pts.is_empty() {
        return Ok(true);
    }
    let d = check_same_dim(pts)?;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return Err(Error::DuplicatePoints(i, j));
            }
        }
    }
    if pts.len() < 3 {
        return Ok(true);
    }
    for i in 0..pts.len() {
        if in_hull_of_others(pts, i, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is `pts[i]` a convex combination of the other points?
fn in_hull_of_others(pts: &[RVec], i: usize, d: usize) -> Result<bool> {
    let others: Vec<&RVec> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
    let m = others.len();
    let mut cons = Vec::with_capacity(m + d + 1);
    for j in 0..m {
        cons.push(Constraint::ge(RVec::unit(m, j), rat::zero()));
    }
    cons.push(Constraint::eq(RVec::new(vec![rat::one(); m])?, rat::one()));
    for c in 0..d {
        let row = RVec::new(others.iter().map(|p| p[c].clone()).collect())?;
        cons.push(Constraint::eq(row, pts[i][c].clone()));
    }
    Ok(lp_feasible(m, &cons)?.is_feasible())
}

/// Certificate for points in convex position: each support exposes its point
/// alone, and the interior block sits around the centroid. `None` when some
/// point is not a vertex. Points must affinely span their space.
pub fn points_certificate(pts: &[RVec]) -> Result<Option<ConvexityCertificate>> {
    if !points_convex_position(pts)? {
        return Ok(None);
    }
    let d = check_same_dim(pts)?;
    if linalg::affine_dim(pts) != Some(d) {
        return Err(Error::Degenerate(format!("points do not span R^{d}")));
    }
    let mut supports = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        // w . (q - p) <= -1 for every other q
        let cons: Vec<Constraint> =
            pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| Constraint::le(q - p, -rat::one())).collect();
        let LpStatus::Feasible(w) = lp_feasible(d, &cons)? else {
            return Err(Error::Degenerate(format!("point {i} is not exposed")));
        };
        let offset = w.dot(p);
        supports.push(Hyperplane::new(w, offset)?);
    }
    let center = RVec::centroid(pts).expect("nonempty");
    let inside = |q: &RVec| supports.iter().all(|h| h.side(q) == Ordering::Less);
    let interior_block = shrink_simplex(&center, d, inside);
    let certificate = ConvexityCertificate {
        flats: pts.iter().cloned().map(Flat::point).collect(),
        touch_sets: pts.iter().map(|p| vec![p.clone()]).collect(),
        supports,
        interior_block,
    };
    verify_certificate(&certificate).map_err(|v| Error::Degenerate(format!("point certificate rejected: {v}")))?;
    Ok(Some(certificate))
}

/// A choice of side, `+1` or `-1`, for each hyperplane of an arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Self {
        s.0
    }
}

impl SignVector {
    pub fn new(v: Vec<i8>) -> Result<Self> {
        if v.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput(format!("sign entries must be +1/-1: {v:?}")));
        }
        Ok(SignVector(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn negated(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| -s).collect())
    }

    /// All `2^n` sign vectors in lexicographic order (`-1 < +1`).
    pub fn all(n: usize) -> impl Iterator<Item = SignVector> {
        (0..1u64 << n).map(move |mask| {
            SignVector((0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { 1 } else { -1 }).collect())
        })
    }
}

/// `sign * (normal . x - offset) > 0`
fn strict_side(h: &Hyperplane, sign: i8) -> Constraint {
    let s = rat::int(sign.into());
    Constraint::gt(h.normal().scale(&s), h.offset() * &s)
}

/// Checks that `lines` are pairwise non-parallel with no three concurrent.
pub fn lines_general_position(lines: &[Hyperplane]) -> Result<()> {
    for l in lines {
        crate::error::check_dim(2, l.dim())?;
    }
    let n = lines.len();
    let mut points: Vec<Option<RVec>> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            match meet2(&lines[i], &lines[j]) {
                None => return Err(Error::GeneralPosition(format!("lines {i} and {j} are parallel"))),
                Some(p) => {
                    index.insert((i, j), points.len());
                    points.push(Some(p));
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let p = points[index[&(i, j)]].as_ref().expect("set above");
            for (l, line) in lines.iter().enumerate().skip(j + 1) {
                if line.contains_point(p) {
                    return Err(Error::GeneralPosition(format!("lines {i}, {j}, {l} are concurrent")));
                }
            }
        }
    }
    Ok(())
}

/// Intersection point of two lines in the plane, if unique.
pub(crate) fn meet2(a: &Hyperplane, b: &Hyperplane) -> Option<RVec> {
    let m = vec![a.normal().coords().to_vec(), b.normal().coords().to_vec()];
    let x = linalg::solve(&m, &[a.offset().clone(), b.offset().clone()])?;
    RVec::new(x).ok()
}

/// Does the open cell with sign vector `sigma` exist, and does its closure
/// meet every line in a segment of positive length?
pub fn cell_bounded_by_all(lines: &[Hyperplane], sigma: &SignVector) -> Result<bool> {
    if sigma.len() != lines.len() {
        return Err(Error::DimensionMismatch { expected: lines.len(), found: sigma.len() });
    }
    let dim = lines.first().map_or(2, Hyperplane::dim);
    let open: Vec<Constraint> = lines.iter().zip(sigma.signs()).map(|(l, &s)| strict_side(l, s)).collect();
    if !lp_feasible(dim, &open)?.is_feasible() {
        return Ok(false);
    }
    for (i, line) in lines.iter().enumerate() {
        // Strict constraints cut a relatively open set out of the line, so a
        // single solution already gives a segment of positive length.
        let mut cons: Vec<Constraint> = open.clone();
        cons[i] = Constraint::eq(line.normal().clone(), line.offset().clone());
        if !lp_feasible(dim, &cons)?.is_feasible() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sign vectors of the four cells around every vertex of the arrangement.
/// In general position each cell has a vertex, so this lists every cell.
pub fn candidate_cells(lines: &[Hyperplane]) -> BTreeSet<SignVector> {
    let n = lines.len();
    let mut out = BTreeSet::new();
    if n < 2 {
        out.extend(SignVector::all(n));
        return out;
    }
    for i in 0..n {
        for j in i + 1..n {
            let Some(v) = meet2(&lines[i], &lines[j]) else { continue };
            let base: Vec<i8> = lines
                .iter()
                .map(|l| match l.side(&v) {
                    Ordering::Greater => 1,
                    Ordering::Less => -1,
                    Ordering::Equal => 0,
                })
                .collect();
            if base.iter().enumerate().any(|(l, &s)| s == 0 && l != i && l != j) {
                continue;
            }
            for (si, sj) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
                let mut s = base.clone();
                s[i] = si;
                s[j] = sj;
                out.insert(SignVector(s));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinesVerdict {
    pub convex: bool,
    pub witness: Option<SignVector>,
}

/// Decides convex position of lines in the plane: true iff some cell of the
/// arrangement has every line as an edge. Candidates are tried in
/// lexicographic order; the first success is the witness.
pub fn lines_convex_position_2d(lines: &[Hyperplane]) -> Result<LinesVerdict> {
    lines_general_position(lines)?;
    for sigma in candidate_cells(lines) {
        if cell_bounded_by_all(lines, &sigma)? {
            return Ok(LinesVerdict { convex: true, witness: Some(sigma) });
        }
    }
    Ok(LinesVerdict { convex: false, witness: None })
}

/// The `C(n, d)` vertices of a hyperplane arrangement; errors unless every
/// d-subset meets in exactly one point and all those points are distinct.
pub fn hyperplanes_general_position(hps: &[Hyperplane]) -> Result<Vec<RVec>> {
    let d = hps.first().map(Hyperplane::dim).ok_or_else(|| Error::InvalidInput("no hyperplanes".into()))?;
    for h in hps {
        crate::error::check_dim(d, h.dim())?;
    }
    if hps.len() < d {
        return Err(Error::InvalidInput(format!("{} hyperplanes in R^{d}; need at least {d}", hps.len())));
    }
    let mut seen: std::collections::BTreeMap<RVec, Vec<usize>> = std::collections::BTreeMap::new();
    for subset in Combinations::new(hps.len(), d) {
        let a: Vec<Vec<Rat>> = subset.iter().map(|&i| hps[i].normal().coords().to_vec()).collect();
        let b: Vec<Rat> = subset.iter().map(|&i| hps[i].offset().clone()).collect();
        let Some(x) = linalg::solve(&a, &b) else {
            return Err(Error::GeneralPosition(format!("hyperplanes {subset:?} do not meet in a single point")));
        };
        let x = RVec::new(x)?;
        if let Some(prev) = seen.get(&x) {
            return Err(Error::GeneralPosition(format!("hyperplanes {prev:?} and {subset:?} share a vertex")));
        }
        seen.insert(x, subset);
    }
    Ok(seen.into_keys().collect())
}

/// Lines cut from `hps` by the 2-flat `plane`, in the plane's coordinates.
pub fn section_lines(hps: &[Hyperplane], plane: &Flat) -> Result<Vec<Hyperplane>> {
    hps.iter()
        .map(|h| {
            let n = RVec::new(plane.dirs().iter().map(|v| h.normal().dot(v)).collect())?;
            Hyperplane::new(n, -h.eval(plane.base()))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum HyperplaneVerdict {
    /// Certified: the certificate passes [`verify_certificate`].
    Convex { certificate: ConvexityCertificate, witness: SignVector, section: Option<Flat> },
    /// No cell bounded by all section lines. Not a proof unless the family
    /// was certified non-convex some other way.
    NotFound { section: Option<Flat> },
}

impl HyperplaneVerdict {
    pub fn is_convex(&self) -> bool {
        matches!(self, HyperplaneVerdict::Convex { .. })
    }
}

/// Picks a random 2-plane on which the hyperplanes cut lines in general
/// position. `d = 2` uses the plane itself.
pub(crate) fn generic_section(hps: &[Hyperplane], rng: &mut ChaCha8Rng) -> Result<(Option<Flat>, Vec<Hyperplane>)> {
    let d = hps[0].dim();
    if d == 2 {
        return Ok((None, hps.to_vec()));
    }
    for _ in 0..RETRIES {
        let plane = random::plane(rng, d);
        let Ok(lines) = section_lines(hps, &plane) else { continue };
        if lines_general_position(&lines).is_ok() {
            return Ok((Some(plane), lines));
        }
    }
    Err(Error::RetriesExhausted(RETRIES, "no section plane in general position".into()))
}

/// Decides convex position of hyperplanes through a random planar section;
/// a positive answer comes with a verified certificate.
pub fn hyperplanes_convex_position(hps: &[Hyperplane], seed: u64) -> Result<HyperplaneVerdict> {
    hyperplanes_general_position(hps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (section, lines) = generic_section(hps, &mut rng)?;
    let verdict = lines_convex_position_2d(&lines)?;
    match verdict.witness {
        Some(sigma) => {
            let certificate = lift_cell_certificate(hps, &sigma)?;
            Ok(HyperplaneVerdict::Convex { certificate, witness: sigma, section })
        }
        None => Ok(HyperplaneVerdict::NotFound { section }),
    }
}

/// Builds a certificate from a cell of the arrangement that has every
/// hyperplane as a facet: clip the closed cell with a box, enumerate its
/// vertices, and use each facet's vertices as the touch set.
pub fn lift_cell_certificate(hps: &[Hyperplane], sigma: &SignVector) -> Result<ConvexityCertificate> {
    let d = hps[0].dim();
    let arrangement = hyperplanes_general_position(hps)?;
    let mut max_abs = rat::zero();
    for p in &arrangement {
        for c in p.coords() {
            if c.abs() > max_abs {
                max_abs = c.abs();
            }
        }
    }
    let half = if max_abs.is_positive() { max_abs * rat::int(2) } else { rat::one() };
    let mut halfspaces: Vec<HalfSpace> = hps
        .iter()
        .zip(sigma.signs())
        .map(|(h, &s)| {
            let s = rat::int(s.into());
            HalfSpace::new(-&h.normal().scale(&s), -(h.offset() * &s))
        })
        .collect();
    for j in 0..d {
        halfspaces.push(HalfSpace::new(RVec::unit(d, j), half.clone()));
        halfspaces.push(HalfSpace::new(-&RVec::unit(d, j), half.clone()));
    }
    let vertices = vertex_enumeration(d, &halfspaces)?;
    let touch_sets: Vec<Vec<RVec>> = hps
        .iter()
        .map(|h| vertices.iter().filter(|v| h.contains_point(v)).cloned().collect())
        .collect();
    for (i, t) in touch_sets.iter().enumerate() {
        if linalg::affine_dim(t) != Some(d - 1) {
            return Err(Error::Degenerate(format!("hyperplane {i} is not a facet of the chosen cell")));
        }
    }
    let center = RVec::centroid(&vertices).ok_or_else(|| Error::Degenerate("cell has no vertices".into()))?;
    let strictly_inside =
        |p: &RVec| hps.iter().zip(sigma.signs()).all(|(h, &s)| h.side(p) == if s > 0 { Ordering::Greater } else { Ordering::Less });
    if !strictly_inside(&center) {
        return Err(Error::Degenerate("cell is not full-dimensional".into()));
    }
    let interior_block = shrink_simplex(&center, d, strictly_inside);
    let certificate = ConvexityCertificate {
        flats: hps.iter().map(Flat::from_hyperplane).collect(),
        touch_sets,
        supports: hps.to_vec(),
        interior_block,
    };
    verify_certificate(&certificate).map_err(|v| Error::Degenerate(format!("lifted certificate rejected: {v}")))?;
    Ok(certificate)
}

/// `center` plus `center + t e_j`, halving `t` until `accept` holds for all.
pub(crate) fn shrink_simplex(center: &RVec, d: usize, accept: impl Fn(&RVec) -> bool) -> Vec<RVec> {
    let mut t = rat::one();
    let half = rat::frac(1, 2);
    loop {
        let mut pts = vec![center.clone()];
        pts.extend((0..d).map(|j| center.add_scaled(&t, &RVec::unit(d, j))));
        if pts.iter().all(&accept) {
            return pts;
        }
        t *= &half;
    }
}

/// Outcome of [`general_position_flats`].
#[derive(Clone, Debug, PartialEq)]
pub enum GeneralPosition {
    /// A transversal `(d-k)`-flat meeting every flat in one point; the points
    /// (in `R^d` and in the transversal's own coordinates) satisfy the
    /// non-collinearity and spanning conditions.
    Transversal { transversal: Transversal, points: Vec<RVec>, params: Vec<RVec> },
    /// Every sampled transversal failed. Probabilistic, not a proof.
    NotFound,
    /// Hyperplane input checked with the hyperplane condition instead.
    Hyperplanes(bool),
}

/// Searches seeded random transversals for the general-position witness.
pub fn general_position_flats(flats: &[Flat], seed: u64) -> Result<GeneralPosition> {
    let first = flats.first().ok_or_else(|| Error::InvalidInput("no flats".into()))?;
    let (d, k) = (first.d(), first.k());
    for f in flats {
        crate::error::check_dim(d, f.d())?;
        if f.k() != k {
            return Err(Error::InvalidInput("flats of mixed dimension".into()));
        }
    }
    if k + 1 == d {
        let hps: Vec<Hyperplane> = flats.iter().map(flat_as_hyperplane).collect::<Result<_>>()?;
        return Ok(GeneralPosition::Hyperplanes(hyperplanes_general_position(&hps).is_ok()));
    }
    if flats.len() < d - k + 1 {
        return Err(Error::InvalidInput(format!("need at least {} flats, got {}", d - k + 1, flats.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRIES {
        let transversal = if k == 0 {
            Transversal::whole_space(d)
        } else {
            let base = random::rvec(&mut rng, d, 10, random::MAX_DENOM);
            let dirs = random::independent(&mut rng, d, d - k, 10, random::MAX_DENOM);
            Transversal { base, dirs }
        };
        if let Some((points, params)) = transversal_points(flats, &transversal) {
            return Ok(GeneralPosition::Transversal { transversal, points, params });
        }
        if k == 0 {
            break;
        }
    }
    Ok(GeneralPosition::NotFound)
}

/// An affine subspace `base + span(dirs)` that may be all of `R^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transversal {
    pub base: RVec,
    pub dirs: Vec<RVec>,
}

impl Transversal {
    pub fn whole_space(d: usize) -> Self {
        Transversal { base: RVec::zeros(d), dirs: (0..d).map(|j| RVec::unit(d, j)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dirs.len()
    }

    pub fn point_at(&self, params: &[Rat]) -> RVec {
        self.dirs.iter().zip(params).fold(self.base.clone(), |acc, (v, t)| acc.add_scaled(t, v))
    }
}

/// Meets every flat with `a`; `None` unless all conditions hold.
fn transversal_points(flats: &[Flat], a: &Transversal) -> Option<(Vec<RVec>, Vec<RVec>)> {
    let mut points = Vec::with_capacity(flats.len());
    let mut params = Vec::with_capacity(flats.len());
    for f in flats {
        // base_f + F t = base_a + A s
        let mut cols: Vec<&RVec> = f.dirs().iter().collect();
        let neg: Vec<RVec> = a.dirs.iter().map(|v| -v).collect();
        cols.extend(neg.iter());
        let m = linalg::columns_to_rows(&cols);
        let rhs = &a.base - f.base();
        let sol = linalg::solve(&m, rhs.coords())?;
        let s = RVec::new(sol[f.k()..].to_vec()).ok()?;
        points.push(a.point_at(s.coords()));
        params.push(s);
    }
    for tri in Combinations::new(points.len(), 3) {
        let diffs = [&points[tri[1]] - &points[tri[0]], &points[tri[2]] - &points[tri[0]]];
        if linalg::rank(&diffs) < 2 {
            return None;
        }
    }
    if linalg::affine_dim(&points) != Some(a.dim()) {
        return None;
    }
    Some((points, params))
}

pub(crate) fn flat_as_hyperplane(f: &Flat) -> Result<Hyperplane> {
    if f.k() + 1 != f.d() {
        return Err(Error::InvalidInput(format!("a {}-flat in R^{} is not a hyperplane", f.k(), f.d())));
    }
    let rows: Vec<Vec<Rat>> = f.dirs().iter().map(|v| v.coords().to_vec()).collect();
    let normal = linalg::nullspace(&rows, f.d()).pop().expect("corank one");
    let offset = normal.dot(f.base());
    Hyperplane::new(normal, offset)
}
