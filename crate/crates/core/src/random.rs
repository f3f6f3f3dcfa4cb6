//! Seeded random rational instances.

use num_bigint::BigInt;
use rand::Rng;

use crate::geom::{linalg, Flat, Hyperplane, RVec, Rat};

/// Default denominator cap for random rational data.
pub const MAX_DENOM: i64 = 10_000;

/// Uniform-ish rational in `[-range, range]` with denominator at most `max_denom`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, range: i64, max_denom: i64) -> Rat {
    let q = rng.random_range(1..=max_denom);
    let p = rng.random_range(-range * q..=range * q);
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rvec<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64, max_denom: i64) -> RVec {
    RVec::new((0..dim).map(|_| rational(rng, range, max_denom)).collect()).expect("dim >= 1")
}

pub fn int_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize, range: i64) -> RVec {
    let v: Vec<i64> = (0..dim).map(|_| rng.random_range(-range..=range)).collect();
    RVec::from_ints(&v)
}

/// `count` linearly independent random rational vectors.
pub fn independent<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize, range: i64, max_denom: i64) -> Vec<RVec> {
    loop {
        let vs: Vec<RVec> = (0..count).map(|_| rvec(rng, dim, range, max_denom)).collect();
        if linalg::rank(&vs) == count {
            return vs;
        }
    }
}

/// Random k-flat with small integer data.
pub fn int_flat<R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize, range: i64) -> Flat {
    loop {
        let base = int_vec(rng, d, range);
        let dirs: Vec<RVec> = (0..k).map(|_| int_vec(rng, d, range)).collect();
        if let Ok(f) = Flat::new(base, dirs) {
            return f;
        }
    }
}

pub fn int_hyperplane<R: Rng + ?Sized>(rng: &mut R, d: usize, range: i64) -> Hyperplane {
    loop {
        let n = int_vec(rng, d, range);
        let c = rng.random_range(-range..=range);
        if let Ok(h) = Hyperplane::new(n, Rat::from_integer(c.into())) {
            return h;
        }
    }
}

/// Random 2-flat through a random point.
pub fn plane<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Flat {
    let base = rvec(rng, d, 10, MAX_DENOM);
    let dirs = independent(rng, d, 2, 10, MAX_DENOM);
    Flat::new(base, dirs).expect("independent directions")
}
