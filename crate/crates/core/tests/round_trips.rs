use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kflats_core::convexpos::{hyperplanes_convex_position, points_certificate, verify_certificate, ConvexityCertificate};
use kflats_core::eskit::{extract_convex_flats, ExtractionResult};
use kflats_core::geom::{Flat, Hyperplane, RVec};
use kflats_core::nonconvex::homogenize_certificate;
use kflats_core::random;

fn reparse<T: serde::Serialize + serde::de::DeserializeOwned>(x: &T) -> T {
    serde_json::from_str(&serde_json::to_string(x).unwrap()).unwrap()
}

#[test]
fn extraction_survives_serialization() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (d, k) in [(3, 1), (4, 2), (3, 0)] {
        let flats: Vec<Flat> = (0..5).map(|_| random::int_flat(&mut rng, d, k, 15)).collect();
        let r = extract_convex_flats(&flats, 4, 2).unwrap();
        let back: ExtractionResult = reparse(&r);
        assert_eq!(back, r);
        assert_eq!(verify_certificate(&back.certificate), Ok(()));
    }
}

#[test]
fn homogenized_certificates_stay_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let flats: Vec<Flat> = (0..5).map(|_| random::int_flat(&mut rng, 3, 1, 15)).collect();
    let r = extract_convex_flats(&flats, 4, 0).unwrap();
    let cone = homogenize_certificate(&r.certificate).unwrap();
    assert_eq!(cone.flats[0].d(), 4);
    assert_eq!(cone.flats[0].k(), 2);
    assert_eq!(verify_certificate(&cone), Ok(()));
}

#[test]
fn hyperplane_and_point_certificates() {
    let cube: Vec<Hyperplane> = (0..3)
        .flat_map(|j| {
            let e: Vec<i64> = (0..3).map(|i| i64::from(i == j)).collect();
            [Hyperplane::from_ints(&e, 0).unwrap(), Hyperplane::from_ints(&e, 1).unwrap()]
        })
        .collect();
    // opposite facets are parallel, so the exact routine refuses the input
    assert!(hyperplanes_convex_position(&cube, 0).is_err());

    let corners: Vec<RVec> =
        (0..8).map(|m: i64| RVec::from_ints(&[m & 1, (m >> 1) & 1, (m >> 2) & 1])).collect();
    let c: ConvexityCertificate = reparse(&points_certificate(&corners).unwrap().unwrap());
    assert_eq!(verify_certificate(&c), Ok(()));
}
