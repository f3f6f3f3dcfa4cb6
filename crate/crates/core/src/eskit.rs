//! Erdős–Szekeres search and extraction of convex subfamilies of flats.

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combin::Combinations;
use crate::convexpos::{
    self, lift_cell_certificate, lines_convex_position_2d, verify_certificate, ConvexityCertificate, GeneralPosition,
    Transversal,
};
use crate::error::{check_dim, Error, Result};
use crate::geom::{linalg, lp_maximize, rat, Constraint, Flat, Hyperplane, LpOptimum, RVec, Rat};
use crate::random;

/// Subsets tried by [`hyperplane_pipeline`] before giving up.
pub const SUBSET_CAP: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExtractionRepr", into = "ExtractionRepr")]
pub struct ExtractionResult {
    pub chosen_indices: Vec<usize>,
    /// The transversal `A`; absent for hyperplanes.
    pub transversal: Option<Transversal>,
    /// The section plane used for hyperplanes in `d >= 3`.
    pub section: Option<Flat>,
    /// `U_i ∩ A` for the chosen flats; empty for hyperplanes.
    pub points: Vec<RVec>,
    pub certificate: ConvexityCertificate,
}

#[derive(Serialize, Deserialize)]
struct ExtractionRepr {
    format: u32,
    chosen_indices: Vec<usize>,
    transversal: Option<Transversal>,
    section: Option<Flat>,
    points: Vec<RVec>,
    certificate: ConvexityCertificate,
}

impl TryFrom<ExtractionRepr> for ExtractionResult {
    type Error = Error;
    fn try_from(r: ExtractionRepr) -> Result<Self> {
        if r.format != 1 {
            return Err(Error::Format(format!("unsupported extraction format {}", r.format)));
        }
        Ok(ExtractionResult {
            chosen_indices: r.chosen_indices,
            transversal: r.transversal,
            section: r.section,
            points: r.points,
            certificate: r.certificate,
        })
    }
}

impl From<ExtractionResult> for ExtractionRepr {
    fn from(e: ExtractionResult) -> Self {
        ExtractionRepr {
            format: 1,
            chosen_indices: e.chosen_indices,
            transversal: e.transversal,
            section: e.section,
            points: e.points,
            certificate: e.certificate,
        }
    }
}

/// `(a - o) x (b - o)` for planar points.
fn orient(o: &RVec, a: &RVec, b: &RVec) -> Rat {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Errors on duplicate points or any collinear triple.
pub fn check_no_three_collinear(pts: &[RVec]) -> Result<()> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return Err(Error::DuplicatePoints(i, j));
            }
        }
    }
    for t in Combinations::new(pts.len(), 3) {
        let diffs = [&pts[t[1]] - &pts[t[0]], &pts[t[2]] - &pts[t[0]]];
        if linalg::rank(&diffs) < 2 {
            return Err(Error::CollinearTriple(t[0], t[1], t[2]));
        }
    }
    Ok(())
}

/// Indices (sorted) of a largest subset in convex position.
///
/// For each anchor taken as the lowest vertex, the other candidates are
/// sorted by angle and `best[j][i]` counts the vertices of the longest convex
/// chain ending with the edge `i -> j`. Among optimal subsets the
/// lexicographically smallest index list is returned.
pub fn largest_convex_subset_2d(pts: &[RVec]) -> Result<Vec<usize>> {
    for p in pts {
        check_dim(2, p.dim())?;
    }
    check_no_three_collinear(pts)?;
    let n = pts.len();
    if n < 3 {
        return Ok((0..n).collect());
    }
    let mut best_size = 0;
    let mut best: Vec<usize> = Vec::new();
    for a in 0..n {
        let p = &pts[a];
        let mut above: Vec<usize> = (0..n)
            .filter(|&q| q != a && (pts[q][1] > p[1] || (pts[q][1] == p[1] && pts[q][0] > p[0])))
            .collect();
        if above.len() < 2 {
            continue;
        }
        above.sort_by(|&x, &y| orient(p, &pts[y], &pts[x]).cmp(&rat::zero()));
        let m = above.len();
        let q = |i: usize| &pts[above[i]];
        let mut len = vec![vec![0usize; m]; m];
        let mut parent = vec![vec![None::<usize>; m]; m];
        for j in 0..m {
            for i in 0..j {
                len[j][i] = 3;
                for h in 0..i {
                    if len[i][h] + 1 > len[j][i] && orient(q(h), q(i), q(j)).is_positive() {
                        len[j][i] = len[i][h] + 1;
                        parent[j][i] = Some(h);
                    }
                }
            }
        }
        for j in 0..m {
            for i in 0..j {
                if len[j][i] < best_size {
                    continue;
                }
                let mut chain = vec![a, above[j], above[i]];
                let (mut cj, mut ci) = (j, i);
                while let Some(h) = parent[cj][ci] {
                    chain.push(above[h]);
                    (cj, ci) = (ci, h);
                }
                chain.sort_unstable();
                if len[j][i] > best_size || chain < best {
                    best_size = len[j][i];
                    best = chain;
                }
            }
        }
    }
    Ok(best)
}

/// Seeded random linear image in the plane that keeps every triple
/// non-collinear. Planar input is returned unchanged.
pub fn generic_projection(pts: &[RVec], seed: u64) -> Result<Vec<RVec>> {
    let d = pts.first().map(RVec::dim).ok_or_else(|| Error::InvalidInput("no points".into()))?;
    for p in pts {
        check_dim(d, p.dim())?;
    }
    check_no_three_collinear(pts)?;
    if d == 2 {
        return Ok(pts.to_vec());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..convexpos::RETRIES {
        let rows = random::independent(&mut rng, d, 2, 10, random::MAX_DENOM);
        let image: Vec<RVec> = pts
            .iter()
            .map(|p| RVec::new(rows.iter().map(|r| r.dot(p)).collect()).expect("two rows"))
            .collect();
        if check_no_three_collinear(&image).is_ok() {
            return Ok(image);
        }
    }
    Err(Error::RetriesExhausted(convexpos::RETRIES, "every projection created a collinear triple".into()))
}

/// Finds `n` flats in convex position and a certificate for them.
///
/// Meets the flats with a transversal `A`, selects a convex `n`-subset of
/// the meeting points, lifts a supporting hyperplane of that polytope at
/// each chosen point so that it contains the whole flat, and places small
/// simplices inside each flat and around the centroid.
pub fn extract_convex_flats(flats: &[Flat], n: usize, seed: u64) -> Result<ExtractionResult> {
    let first = flats.first().ok_or_else(|| Error::InvalidInput("no flats".into()))?;
    let (d, k) = (first.d(), first.k());
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
    }
    if k + 1 == d {
        let hps: Vec<Hyperplane> = flats.iter().map(convexpos::flat_as_hyperplane).collect::<Result<_>>()?;
        return hyperplane_pipeline(&hps, n, seed);
    }
    let (transversal, points, params) = match convexpos::general_position_flats(flats, seed)? {
        GeneralPosition::Transversal { transversal, points, params } => (transversal, points, params),
        _ => return Err(Error::GeneralPosition("no transversal flat found".into())),
    };
    let planar = generic_projection(&params, seed.wrapping_add(1))?;
    let convex = largest_convex_subset_2d(&planar)?;
    if convex.len() < n {
        return Err(Error::Extraction(format!("largest convex subset has {} points, need {n}", convex.len())));
    }
    let chosen: Vec<usize> = convex[..n].to_vec();
    let ys: Vec<&RVec> = chosen.iter().map(|&i| &params[i]).collect();
    let bs: Vec<RVec> = chosen.iter().map(|&i| points[i].clone()).collect();

    let mut supports = Vec::with_capacity(n);
    for (pos, &i) in chosen.iter().enumerate() {
        let w = tangent_normal(&ys, pos)?;
        supports.push(lift_support(&transversal, &flats[i], &points[i], &w)?);
    }

    let b0 = RVec::centroid(&bs).expect("n >= 2");
    let mut min_sq: Option<Rat> = None;
    for (i, h) in supports.iter().enumerate() {
        for (j, b) in bs.iter().enumerate().filter(|(j, _)| *j != i).map(|(j, b)| (Some(j), b)).chain([(None, &b0)]) {
            let dist = h.dist_sq(b);
            if !dist.is_positive() {
                return Err(Error::Extraction(format!("point {j:?} lies on support {i}")));
            }
            if min_sq.as_ref().is_none_or(|m| &dist < m) {
                min_sq = Some(dist);
            }
        }
    }
    let delta_sq = min_sq.expect("n >= 2") * rat::frac(1, 4);
    assert!(delta_sq.is_positive());

    let touch_sets: Vec<Vec<RVec>> = chosen
        .iter()
        .zip(&bs)
        .map(|(&i, b)| small_simplex(b, &linalg::orthogonalize(flats[i].dirs()), &delta_sq))
        .collect();
    let axes: Vec<RVec> = (0..d).map(|j| RVec::unit(d, j)).collect();
    let interior_block = small_simplex(&b0, &axes, &delta_sq);

    let certificate = ConvexityCertificate {
        flats: chosen.iter().map(|&i| flats[i].clone()).collect(),
        touch_sets,
        supports,
        interior_block,
    };
    verify_certificate(&certificate).map_err(|v| Error::Extraction(format!("certificate rejected: {v}")))?;
    Ok(ExtractionResult { chosen_indices: chosen, transversal: Some(transversal), section: None, points: bs, certificate })
}

/// Normal `w` with `|w_l| <= 1` maximizing `min_j w.(y_j - y_pos)`.
fn tangent_normal(ys: &[&RVec], pos: usize) -> Result<RVec> {
    let m = ys[pos].dim();
    // variables: w (m entries), margin
    let mut cons = Vec::new();
    for (j, y) in ys.iter().enumerate() {
        if j == pos {
            continue;
        }
        let diff = *y - ys[pos];
        let mut c = diff.into_coords();
        c.push(-rat::one());
        cons.push(Constraint::ge(RVec::new(c)?, rat::zero()));
    }
    for l in 0..m {
        cons.push(Constraint::le(RVec::unit(m + 1, l), rat::one()));
        cons.push(Constraint::ge(RVec::unit(m + 1, l), -rat::one()));
    }
    cons.push(Constraint::le(RVec::unit(m + 1, m), rat::one()));
    match lp_maximize(m + 1, &cons, &RVec::unit(m + 1, m))? {
        LpOptimum::Optimal { point, value } if value.is_positive() => Ok(RVec::new(point.coords()[..m].to_vec())?),
        _ => Err(Error::Extraction(format!("point {pos} is not a vertex of the chosen polytope"))),
    }
}

/// The hyperplane through `flat` whose trace on `A` is `{s : w.(s - s_i) = 0}`.
fn lift_support(a: &Transversal, flat: &Flat, point: &RVec, w: &RVec) -> Result<Hyperplane> {
    let d = point.dim();
    let mut rows: Vec<Vec<Rat>> = a.dirs.iter().map(|v| v.coords().to_vec()).collect();
    rows.extend(flat.dirs().iter().map(|v| v.coords().to_vec()));
    let mut rhs = w.coords().to_vec();
    rhs.extend(std::iter::repeat_n(rat::zero(), flat.k()));
    debug_assert_eq!(rows.len(), d);
    let normal = linalg::solve(&rows, &rhs).ok_or_else(|| Error::Degenerate("flat and transversal not complementary".into()))?;
    let normal = RVec::new(normal)?;
    let offset = normal.dot(point);
    Hyperplane::new(normal, offset)
}

/// Simplex with vertices `c + t f_l` and `c - t sum f_l`, halving `t` until
/// it sits strictly inside the ball of squared radius `delta_sq / 4`.
fn small_simplex(center: &RVec, dirs: &[RVec], delta_sq: &Rat) -> Vec<RVec> {
    if dirs.is_empty() {
        return vec![center.clone()];
    }
    let limit = delta_sq * rat::frac(1, 4);
    let sum = dirs.iter().skip(1).fold(dirs[0].clone(), |acc, f| &acc + f);
    let mut t = rat::one();
    loop {
        let offsets: Vec<RVec> = dirs.iter().map(|f| f.scale(&t)).chain([sum.scale(&-t.clone())]).collect();
        if offsets.iter().all(|o| o.norm_sq() < limit) {
            return offsets.iter().map(|o| center + o).collect();
        }
        t *= rat::frac(1, 2);
    }
}

/// Finds `n` hyperplanes in convex position through a planar section and
/// lifts the witness cell.
pub fn hyperplane_pipeline(hps: &[Hyperplane], n: usize, seed: u64) -> Result<ExtractionResult> {
    convexpos::hyperplanes_general_position(hps)?;
    if n > hps.len() {
        return Err(Error::InvalidInput(format!("n = {n} exceeds {} hyperplanes", hps.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (section, lines) = convexpos::generic_section(hps, &mut rng)?;
    for (tried, subset) in Combinations::new(hps.len(), n).enumerate() {
        if tried == SUBSET_CAP {
            break;
        }
        let sub_lines: Vec<Hyperplane> = subset.iter().map(|&i| lines[i].clone()).collect();
        if let Some(sigma) = lines_convex_position_2d(&sub_lines)?.witness {
            let sub: Vec<Hyperplane> = subset.iter().map(|&i| hps[i].clone()).collect();
            let certificate = lift_cell_certificate(&sub, &sigma)?;
            return Ok(ExtractionResult { chosen_indices: subset, transversal: None, section, points: Vec::new(), certificate });
        }
    }
    Err(Error::Extraction(format!("no convex {n}-subset among the first {SUBSET_CAP} subsets")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexpos::points_convex_position;
    use crate::geom::rat::frac;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RVec {
        RVec::from_ints(c)
    }

    fn general_points(rng: &mut ChaCha8Rng, n: usize, d: usize, range: i64) -> Vec<RVec> {
        loop {
            let pts: Vec<RVec> = (0..n).map(|_| random::int_vec(rng, d, range)).collect();
            if check_no_three_collinear(&pts).is_ok() {
                return pts;
            }
        }
    }

    fn exhaustive_largest(pts: &[RVec]) -> usize {
        let n = pts.len();
        (3..=n)
            .rev()
            .find(|&size| {
                Combinations::new(n, size).any(|s| {
                    let sub: Vec<RVec> = s.iter().map(|&i| pts[i].clone()).collect();
                    points_convex_position(&sub).unwrap()
                })
            })
            .unwrap_or(n.min(2))
    }

    #[test]
    fn square_and_center() {
        let mut pts = vec![p(&[0, 0]), p(&[2, 0]), p(&[2, 2]), p(&[0, 2])];
        assert_eq!(largest_convex_subset_2d(&pts).unwrap(), vec![0, 1, 2, 3]);
        pts.insert(1, p(&[1, 1]));
        let pts: Vec<RVec> = pts.into_iter().map(|q| q.scale(&frac(1, 1))).collect();
        // the centre makes triples with opposite corners collinear
        assert!(matches!(largest_convex_subset_2d(&pts), Err(Error::CollinearTriple(..))));
        let off_center = vec![p(&[0, 0]), p(&[5, 4]), p(&[10, 0]), p(&[10, 10]), p(&[0, 10])];
        assert_eq!(largest_convex_subset_2d(&off_center).unwrap(), vec![0, 2, 3, 4]);
    }

    #[test]
    fn dp_matches_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..60 {
            let n = 3 + trial % 7;
            let pts = general_points(&mut rng, n, 2, 12);
            let got = largest_convex_subset_2d(&pts).unwrap();
            let sub: Vec<RVec> = got.iter().map(|&i| pts[i].clone()).collect();
            assert!(points_convex_position(&sub).unwrap());
            assert_eq!(got.len(), exhaustive_largest(&pts), "{pts:?}");
        }
    }

    #[test]
    fn tie_break_is_lexicographic() {
        let pts = vec![p(&[0, 0]), p(&[4, 0]), p(&[5, 3]), p(&[2, 5]), p(&[-1, 3]), p(&[2, 2])];
        let got = largest_convex_subset_2d(&pts).unwrap();
        assert_eq!(got, vec![0, 1, 2, 3, 4]);
        let quad = vec![p(&[0, 0]), p(&[4, 0]), p(&[4, 4]), p(&[0, 4]), p(&[1, 2]), p(&[3, 2])];
        let got = largest_convex_subset_2d(&quad).unwrap();
        let want = Combinations::new(quad.len(), got.len())
            .find(|s| {
                let sub: Vec<RVec> = s.iter().map(|&i| quad[i].clone()).collect();
                points_convex_position(&sub).unwrap()
            })
            .unwrap();
        assert_eq!(got, want);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn adding_a_point_never_shrinks(seed in any::<u64>(), n in 3usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts = general_points(&mut rng, n + 1, 2, 20);
            let before = largest_convex_subset_2d(&pts[..n]).unwrap().len();
            let after = largest_convex_subset_2d(&pts).unwrap().len();
            prop_assert!(after >= before);
        }
    }

    #[test]
    fn projection_of_planar_points_keeps_convexity() {
        // a convex pentagon placed in the plane z = x + y of R^3
        let flat = [[0, 0], [4, 0], [5, 3], [2, 5], [-1, 3]];
        let pts: Vec<RVec> = flat.iter().map(|&[x, y]| p(&[x, y, x + y])).collect();
        let img = generic_projection(&pts, 1).unwrap();
        assert!(points_convex_position(&img).unwrap());
        assert_eq!(largest_convex_subset_2d(&img).unwrap().len(), 5);
    }

    #[test]
    fn projection_keeps_general_position() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts = general_points(&mut rng, 5, 3, 9);
        let img = generic_projection(&pts, 2).unwrap();
        assert_eq!(img.len(), 5);
        assert!(img.iter().all(|q| q.dim() == 2));
        assert!(check_no_three_collinear(&img).is_ok());
        let planar = general_points(&mut rng, 5, 2, 9);
        assert_eq!(generic_projection(&planar, 0).unwrap(), planar);
    }

    fn check_result(flats: &[Flat], r: &ExtractionResult, n: usize) {
        assert_eq!(r.chosen_indices.len(), n);
        assert_eq!(verify_certificate(&r.certificate), Ok(()));
        for (pos, &i) in r.chosen_indices.iter().enumerate() {
            assert_eq!(r.certificate.flats[pos], flats[i]);
            assert!(flats[i].contains(&r.points[pos]).unwrap());
        }
        assert!(points_convex_position(&r.points).unwrap());
    }

    #[test]
    fn lines_in_r3() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for seed in 0..5 {
            let flats: Vec<Flat> = (0..5).map(|_| random::int_flat(&mut rng, 3, 1, 6)).collect();
            let r = extract_convex_flats(&flats, 4, seed).unwrap();
            check_result(&flats, &r, 4);
            assert!(r.certificate.touch_sets.iter().all(|t| t.len() == 2));
        }
    }

    #[test]
    fn planes_in_r4() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let flats: Vec<Flat> = (0..5).map(|_| random::int_flat(&mut rng, 4, 2, 6)).collect();
        let r = extract_convex_flats(&flats, 4, 3).unwrap();
        check_result(&flats, &r, 4);
        assert!(r.certificate.touch_sets.iter().all(|t| t.len() == 3));
    }

    #[test]
    fn points_give_singleton_touch_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let pts = general_points(&mut rng, 5, 3, 9);
        let flats: Vec<Flat> = pts.iter().cloned().map(Flat::point).collect();
        let r = extract_convex_flats(&flats, 4, 0).unwrap();
        check_result(&flats, &r, 4);
        assert!(r.certificate.touch_sets.iter().all(|t| t.len() == 1));
    }

    #[test]
    fn too_few_convex_points_is_reported() {
        let pts = vec![p(&[0, 0]), p(&[10, 0]), p(&[0, 10]), p(&[3, 2]), p(&[2, 3])];
        let flats: Vec<Flat> = pts.into_iter().map(Flat::point).collect();
        assert!(matches!(extract_convex_flats(&flats, 5, 0), Err(Error::Extraction(_))));
    }

    #[test]
    fn hyperplane_cases() {
        let tetra: Vec<Hyperplane> = [([1, 0, 0], 0), ([0, 1, 0], 0), ([0, 0, 1], 0), ([1, 1, 1], 1)]
            .iter()
            .map(|(n, c)| Hyperplane::from_ints(n, *c).unwrap())
            .collect();
        let r = hyperplane_pipeline(&tetra, 4, 0).unwrap();
        assert_eq!(r.chosen_indices, vec![0, 1, 2, 3]);
        assert_eq!(verify_certificate(&r.certificate), Ok(()));

        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let six = loop {
            let hps: Vec<Hyperplane> = (0..6).map(|_| random::int_hyperplane(&mut rng, 3, 7)).collect();
            if convexpos::hyperplanes_general_position(&hps).is_ok() {
                break hps;
            }
        };
        let r = hyperplane_pipeline(&six, 4, 1).unwrap();
        assert_eq!(verify_certificate(&r.certificate), Ok(()));

        let flats: Vec<Flat> = six.iter().map(Flat::from_hyperplane).collect();
        let via_flats = extract_convex_flats(&flats, 4, 1).unwrap();
        assert_eq!(via_flats.chosen_indices, r.chosen_indices);

        let four = loop {
            let hps: Vec<Hyperplane> = (0..4).map(|_| random::int_hyperplane(&mut rng, 2, 7)).collect();
            if convexpos::lines_general_position(&hps).is_ok() {
                break hps;
            }
        };
        assert!(hyperplane_pipeline(&four, 4, 2).is_ok());
    }

    #[test]
    fn result_json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let flats: Vec<Flat> = (0..5).map(|_| random::int_flat(&mut rng, 3, 1, 6)).collect();
        let r = extract_convex_flats(&flats, 4, 0).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: ExtractionResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
