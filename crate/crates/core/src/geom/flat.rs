use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg;
use super::rat::{self, Rat};
use super::vector::RVec;
use crate::error::{check_dim, Error, Result};

/// An affine k-flat `base + span(dirs)` in `Q^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FlatRepr", into = "FlatRepr")]
pub struct Flat {
    base: RVec,
    dirs: Vec<RVec>,
}

#[derive(Serialize, Deserialize)]
struct FlatRepr {
    d: usize,
    k: usize,
    base: RVec,
    dirs: Vec<RVec>,
}

impl TryFrom<FlatRepr> for Flat {
    type Error = Error;
    fn try_from(r: FlatRepr) -> Result<Self> {
        check_dim(r.d, r.base.dim())?;
        if r.dirs.len() != r.k {
            return Err(Error::Format(format!("k = {} but {} directions given", r.k, r.dirs.len())));
        }
        Flat::new(r.base, r.dirs)
    }
}

impl From<Flat> for FlatRepr {
    fn from(f: Flat) -> Self {
        FlatRepr { d: f.d(), k: f.k(), base: f.base, dirs: f.dirs }
    }
}

/// Result of cutting a flat with a hyperplane.
#[derive(Clone, Debug, PartialEq)]
pub enum FlatMeet {
    Flat(Flat),
    Empty,
    Contained,
}

impl Flat {
    /// Rejects direction sets that are not linearly independent, and `k >= d`.
    pub fn new(base: RVec, dirs: Vec<RVec>) -> Result<Self> {
        let d = base.dim();
        for v in &dirs {
            check_dim(d, v.dim())?;
        }
        if dirs.len() >= d {
            return Err(Error::InvalidInput(format!("flat dimension {} must be below d = {d}", dirs.len())));
        }
        if linalg::rank(&dirs) != dirs.len() {
            return Err(Error::Degenerate("flat directions are linearly dependent".into()));
        }
        Ok(Flat { base, dirs })
    }

    pub fn point(p: RVec) -> Self {
        Flat { base: p, dirs: Vec::new() }
    }

    /// Line through `p` with direction `dir`.
    pub fn line(p: RVec, dir: RVec) -> Result<Self> {
        Self::new(p, vec![dir])
    }

    /// The hyperplane `h` as a (d-1)-flat.
    pub fn from_hyperplane(h: &Hyperplane) -> Self {
        let d = h.dim();
        let j = (0..d).find(|&i| !h.normal[i].is_zero()).expect("hyperplane normal is nonzero");
        let mut base = RVec::zeros(d);
        base[j] = &h.offset / &h.normal[j];
        let row = vec![h.normal.coords().to_vec()];
        let dirs = linalg::nullspace(&row, d);
        Flat { base, dirs }
    }

    pub fn d(&self) -> usize {
        self.base.dim()
    }

    pub fn k(&self) -> usize {
        self.dirs.len()
    }

    pub fn base(&self) -> &RVec {
        &self.base
    }

    pub fn dirs(&self) -> &[RVec] {
        &self.dirs
    }

    /// `base + sum_i params[i] * dirs[i]`
    pub fn point_at(&self, params: &[Rat]) -> RVec {
        debug_assert_eq!(params.len(), self.k());
        let mut p = self.base.clone();
        for (t, v) in params.iter().zip(&self.dirs) {
            p = p.add_scaled(t, v);
        }
        p
    }

    pub fn contains(&self, p: &RVec) -> Result<bool> {
        check_dim(self.d(), p.dim())?;
        let mut vs = self.dirs.clone();
        vs.push(p - &self.base);
        Ok(linalg::rank(&vs) == self.k())
    }

    /// Exact intersection with `h`.
    pub fn intersect_hyperplane(&self, h: &Hyperplane) -> Result<FlatMeet> {
        check_dim(self.d(), h.dim())?;
        let resid = h.eval(&self.base);
        let slopes: Vec<Rat> = self.dirs.iter().map(|v| h.normal.dot(v)).collect();
        let Some(j) = slopes.iter().position(|s| !s.is_zero()) else {
            return Ok(if resid.is_zero() { FlatMeet::Contained } else { FlatMeet::Empty });
        };
        let pivot = &self.dirs[j];
        let base = self.base.add_scaled(&(-&resid / &slopes[j]), pivot);
        let dirs = self
            .dirs
            .iter()
            .zip(&slopes)
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, (v, s))| v.add_scaled(&(-s / &slopes[j]), pivot))
            .collect();
        Ok(FlatMeet::Flat(Flat { base, dirs }))
    }
}

/// `{x : normal . x = offset}`
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HyperplaneRepr", into = "HyperplaneRepr")]
pub struct Hyperplane {
    normal: RVec,
    offset: Rat,
}

#[derive(Serialize, Deserialize)]
struct HyperplaneRepr {
    normal: RVec,
    #[serde(with = "rat")]
    offset: Rat,
}

impl TryFrom<HyperplaneRepr> for Hyperplane {
    type Error = Error;
    fn try_from(r: HyperplaneRepr) -> Result<Self> {
        Hyperplane::new(r.normal, r.offset)
    }
}

impl From<Hyperplane> for HyperplaneRepr {
    fn from(h: Hyperplane) -> Self {
        HyperplaneRepr { normal: h.normal, offset: h.offset }
    }
}

impl Hyperplane {
    pub fn new(normal: RVec, offset: Rat) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::Degenerate("hyperplane normal is zero".into()));
        }
        Ok(Hyperplane { normal, offset })
    }

    pub fn from_ints(normal: &[i64], offset: i64) -> Result<Self> {
        Self::new(RVec::from_ints(normal), rat::int(offset))
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn normal(&self) -> &RVec {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    /// `normal . p - offset`
    pub fn eval(&self, p: &RVec) -> Rat {
        self.normal.dot(p) - &self.offset
    }

    pub fn side(&self, p: &RVec) -> Ordering {
        let v = self.eval(p);
        if v.is_zero() {
            Ordering::Equal
        } else if v.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn contains_point(&self, p: &RVec) -> bool {
        self.eval(p).is_zero()
    }

    pub fn contains_flat(&self, f: &Flat) -> Result<bool> {
        check_dim(self.dim(), f.d())?;
        Ok(self.contains_point(f.base()) && f.dirs().iter().all(|v| self.normal.dot(v).is_zero()))
    }

    pub fn flip(&self) -> Hyperplane {
        Hyperplane { normal: -&self.normal, offset: -&self.offset }
    }

    /// Squared Euclidean distance from `p`.
    pub fn dist_sq(&self, p: &RVec) -> Rat {
        let v = self.eval(p);
        &v * &v / self.normal.norm_sq()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rat::int;

    fn x_axis(d: usize) -> Flat {
        Flat::line(RVec::zeros(d), RVec::unit(d, 0)).unwrap()
    }

    #[test]
    fn contains_points() {
        let f = x_axis(2);
        assert!(f.contains(&RVec::from_ints(&[5, 0])).unwrap());
        assert!(!f.contains(&RVec::from_ints(&[0, 1])).unwrap());
        let g = Flat::line(RVec::from_ints(&[0, 0, 1]), RVec::from_ints(&[1, 1, 0])).unwrap();
        assert!(g.contains(&RVec::from_ints(&[2, 2, 1])).unwrap());
        assert!(f.contains(&RVec::from_ints(&[1, 2, 3])).is_err());
    }

    #[test]
    fn intersections() {
        let z_line = Flat::line(RVec::zeros(3), RVec::unit(3, 2)).unwrap();
        let h = Hyperplane::from_ints(&[0, 0, 1], 1).unwrap();
        match z_line.intersect_hyperplane(&h).unwrap() {
            FlatMeet::Flat(p) => {
                assert_eq!(p.k(), 0);
                assert_eq!(p.base(), &RVec::from_ints(&[0, 0, 1]));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(x_axis(3).intersect_hyperplane(&h).unwrap(), FlatMeet::Empty);
        let y0 = Hyperplane::from_ints(&[0, 1, 0], 0).unwrap();
        assert_eq!(x_axis(3).intersect_hyperplane(&y0).unwrap(), FlatMeet::Contained);
    }

    #[test]
    fn plane_meets_plane_in_line() {
        let plane = Flat::new(RVec::zeros(3), vec![RVec::unit(3, 0), RVec::unit(3, 1)]).unwrap();
        let h = Hyperplane::from_ints(&[1, 1, 1], 2).unwrap();
        let FlatMeet::Flat(line) = plane.intersect_hyperplane(&h).unwrap() else { panic!() };
        assert_eq!(line.k(), 1);
        assert!(h.contains_flat(&line).unwrap());
        assert!(plane.contains(line.base()).unwrap());
    }

    #[test]
    fn rejects_dependent_dirs() {
        let r = Flat::new(RVec::zeros(3), vec![RVec::from_ints(&[1, 2, 3]), RVec::from_ints(&[2, 4, 6])]);
        assert!(matches!(r, Err(Error::Degenerate(_))));
        assert!(Hyperplane::from_ints(&[0, 0], 1).is_err());
    }

    #[test]
    fn hyperplane_as_flat() {
        let h = Hyperplane::from_ints(&[2, -1, 3], 5).unwrap();
        let f = Flat::from_hyperplane(&h);
        assert_eq!(f.k(), 2);
        assert!(h.contains_flat(&f).unwrap());
        assert_eq!(h.dist_sq(&RVec::zeros(3)), Rat::new(25.into(), 14.into()));
        assert_eq!(h.eval(&RVec::from_ints(&[1, 0, 1])), int(0));
    }

    #[test]
    fn json_shape() {
        let f = Flat::line(RVec::from_ints(&[1, 0]), RVec::from_ints(&[1, 1])).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"d":2,"k":1,"base":["1/1","0/1"],"dirs":[["1/1","1/1"]]}"#);
        let back: Flat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"d":2,"k":1,"base":["1","0"],"dirs":[["0","0"]]}"#;
        assert!(serde_json::from_str::<Flat>(bad).is_err());
        let h: Hyperplane = serde_json::from_str(r#"{"normal":["1","-1/2"],"offset":"3/4"}"#).unwrap();
        assert_eq!(h.offset(), &Rat::new(3.into(), 4.into()));
    }

    proptest::proptest! {
        #[test]
        fn containment_ignores_the_basis(seed in proptest::prelude::any::<u64>(), a in 1i64..5, b in -4i64..5) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f = crate::random::int_flat(&mut rng, 4, 2, 9);
            let (u, v) = (&f.dirs()[0], &f.dirs()[1]);
            // same flat: shifted base, directions mixed by an invertible integer matrix
            let g = Flat::new(f.base().add_scaled(&int(b), u), vec![u.scale(&int(a)).add_scaled(&int(b), v), v.clone()]).unwrap();
            let on = f.point_at(&[int(b), int(a - b)]);
            let off = crate::random::int_vec(&mut rng, 4, 9);
            proptest::prop_assert!(g.contains(&on).unwrap());
            proptest::prop_assert_eq!(f.contains(&off).unwrap(), g.contains(&off).unwrap());
        }
    }
}
