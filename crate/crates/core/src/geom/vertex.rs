use std::collections::BTreeSet;

use super::linalg;
use super::rat::Rat;
use super::vector::RVec;
use crate::combin::Combinations;
use crate::error::{check_dim, Error, Result};

/// Closed halfspace `normal . x <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    pub normal: RVec,
    pub bound: Rat,
}

impl HalfSpace {
    pub fn new(normal: RVec, bound: Rat) -> Self {
        HalfSpace { normal, bound }
    }

    pub fn contains(&self, p: &RVec) -> bool {
        self.normal.dot(p) <= self.bound
    }

    pub fn is_tight(&self, p: &RVec) -> bool {
        self.normal.dot(p) == self.bound
    }
}

/// Every vertex of `{x : normal_i . x <= bound_i}`, sorted and deduplicated.
///
/// Enumerates all d-subsets of bounding hyperplanes, keeps the ones with a
/// unique intersection point that satisfies every halfspace.
pub fn vertex_enumeration(dim: usize, halfspaces: &[HalfSpace]) -> Result<Vec<RVec>> {
    for h in halfspaces {
        check_dim(dim, h.normal.dim())?;
    }
    if halfspaces.len() > 64 {
        return Err(Error::ResourceCap(format!("{} halfspaces is beyond subset enumeration", halfspaces.len())));
    }
    let mut found = BTreeSet::new();
    for subset in Combinations::new(halfspaces.len(), dim) {
        let a: Vec<Vec<Rat>> = subset.iter().map(|&i| halfspaces[i].normal.coords().to_vec()).collect();
        let b: Vec<Rat> = subset.iter().map(|&i| halfspaces[i].bound.clone()).collect();
        let Some(x) = linalg::solve(&a, &b) else { continue };
        let x = RVec::new(x)?;
        if halfspaces.iter().all(|h| h.contains(&x)) {
            found.insert(x);
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rat::int;

    fn hs(n: &[i64], b: i64) -> HalfSpace {
        HalfSpace::new(RVec::from_ints(n), int(b))
    }

    #[test]
    fn unit_square() {
        let sq = [hs(&[-1, 0], 0), hs(&[1, 0], 1), hs(&[0, -1], 0), hs(&[0, 1], 1)];
        let v = vertex_enumeration(2, &sq).unwrap();
        let expect: Vec<RVec> = [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|c| RVec::from_ints(c)).collect();
        assert_eq!(v, expect);
    }

    #[test]
    fn triangle() {
        let t = [hs(&[-1, 0], 0), hs(&[0, -1], 0), hs(&[1, 1], 1)];
        let v = vertex_enumeration(2, &t).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.contains(&RVec::from_ints(&[1, 0])));
        assert!(v.contains(&RVec::from_ints(&[0, 1])));
        assert!(v.contains(&RVec::from_ints(&[0, 0])));
    }

    #[test]
    fn empty_polyhedron() {
        let e = [hs(&[1, 0], -1), hs(&[-1, 0], 0), hs(&[0, 1], 1), hs(&[0, -1], 1)];
        assert!(vertex_enumeration(2, &e).unwrap().is_empty());
    }

    /// Brute force over all pairwise line intersections of the d=2 octahedron
    /// lines clipped to the open positive quadrant's closure.
    #[test]
    fn octahedron_cell_matches_pairwise_oracle() {
        let mut cell = vec![hs(&[-1, 0], 0), hs(&[0, -1], 0)];
        for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            cell.push(hs(&[a, b], 1));
        }
        let got = vertex_enumeration(2, &cell).unwrap();
        let mut oracle = BTreeSet::new();
        for i in 0..cell.len() {
            for j in i + 1..cell.len() {
                let (a, b) = (&cell[i].normal, &cell[j].normal);
                let det = &a[0] * &b[1] - &a[1] * &b[0];
                if det == int(0) {
                    continue;
                }
                let (c, e) = (&cell[i].bound, &cell[j].bound);
                let x = (c * &b[1] - e * &a[1]) / &det;
                let y = (&a[0] * e - &b[0] * c) / &det;
                let p = RVec::new(vec![x, y]).unwrap();
                if cell.iter().all(|h| h.contains(&p)) {
                    oracle.insert(p);
                }
            }
        }
        assert_eq!(got, oracle.into_iter().collect::<Vec<_>>());
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn vertices_are_tight_on_d_planes() {
        let cube: Vec<HalfSpace> = (0..3)
            .flat_map(|i| {
                let mut lo = vec![0; 3];
                lo[i] = -1;
                let mut hi = vec![0; 3];
                hi[i] = 1;
                [hs(&lo, 0), hs(&hi, 1)]
            })
            .collect();
        let v = vertex_enumeration(3, &cube).unwrap();
        assert_eq!(v.len(), 8);
        for p in &v {
            assert!(cube.iter().filter(|h| h.is_tight(p)).count() >= 3);
        }
    }
}
