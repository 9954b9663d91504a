//! Characteristic numbers checked against values obtained independently:
//! classical numbers of projective spaces and products, and numbers computed
//! by a Gröbner basis over GF(2) in all facet variables (no elimination).

use std::collections::BTreeMap;

use bottbord_core::charclass::{pontryagin_numbers, sw_numbers};
use bottbord_core::charmatrix::{Mode, ReducedVectorMatrix};
use bottbord_core::cobordism::{quasitoric_sw_numbers, verdict};
use bottbord_core::poly::{Gf2, Q};
use bottbord_core::ring::{CohomologyRing, DegreeScale};

fn small_cover_numbers(dims: &[i64], rows: Vec<Vec<i64>>) -> BTreeMap<String, i64> {
    let a = ReducedVectorMatrix::parse(dims, Mode::ModTwo, rows).unwrap();
    let ring = CohomologyRing::<Gf2>::build(&a, DegreeScale::SmallCover).unwrap();
    sw_numbers(&ring).unwrap().to_map()
}

fn nonzero(map: &BTreeMap<String, i64>) -> Vec<&str> {
    map.iter().filter(|(_, &v)| v != 0).map(|(k, _)| k.as_str()).collect()
}

#[test]
fn delta3_squared_example_all_numbers() {
    let m = small_cover_numbers(&[3, 3], vec![vec![1, 1, 1, 1, 1, 1], vec![0, 0, 0, 1, 1, 1]]);
    assert_eq!(m.len(), 11);
    assert_eq!(nonzero(&m), vec!["w1 w2 w3", "w2^3", "w3^2"]);
}

#[test]
fn delta1_inside_tower_does_not_bound() {
    let m = small_cover_numbers(
        &[2, 2, 1],
        vec![vec![1, 1, 0, 0, 0], vec![0, 1, 1, 1, 0], vec![1, 0, 0, 0, 1]],
    );
    assert_eq!(nonzero(&m), vec!["w2 w3"]);
}

type Case = (&'static [i64], Vec<Vec<i64>>, Vec<&'static str>);

#[test]
fn groebner_cross_checked_instances() {
    let cases: Vec<Case> = vec![
        (&[3, 2], vec![vec![1, 1, 1, 0, 0], vec![1, 1, 1, 1, 1]], vec!["w2 w3"]),
        (
            &[2, 1, 1],
            vec![vec![1, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 0, 1, 1]],
            vec!["w1^4", "w2^2"],
        ),
        (&[2, 2], vec![vec![1, 1, 1, 1], vec![0, 0, 1, 1]], vec!["w1^4", "w4"]),
        (
            &[1, 1, 2],
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![1, 0, 1, 1]],
            vec![],
        ),
        (&[3, 1], vec![vec![1, 1, 1, 0], vec![1, 1, 1, 1]], vec![]),
        (&[2, 1], vec![vec![1, 1, 0], vec![1, 0, 1]], vec![]),
    ];
    for (dims, rows, expected) in cases {
        let m = small_cover_numbers(dims, rows.clone());
        assert_eq!(nonzero(&m), expected, "{dims:?} {rows:?}");
    }
}

#[test]
fn real_projective_spaces() {
    // RP^n bounds iff n is odd
    for n in 1..=6i64 {
        let v = verdict(&ReducedVectorMatrix::parse(&[n], Mode::ModTwo, vec![vec![1; n as usize]]).unwrap()).unwrap();
        assert_eq!(v.unoriented_boundary, n % 2 == 1, "RP^{n}");
    }
}

fn integer(dims: &[i64], rows: Vec<Vec<i64>>) -> ReducedVectorMatrix {
    ReducedVectorMatrix::parse(dims, Mode::Integer, rows).unwrap()
}

fn pont(a: &ReducedVectorMatrix) -> BTreeMap<String, i64> {
    let ring = CohomologyRing::<Q>::build(a, DegreeScale::Quasitoric).unwrap();
    pontryagin_numbers(&ring).unwrap().to_map()
}

#[test]
fn complex_projective_pontryagin_numbers() {
    // p(CP^n) = (1 + x^2)^{n+1} up to the sign of odd p_i
    let cp2 = pont(&integer(&[2], vec![vec![1, 1]]));
    assert_eq!(cp2["p1"].abs(), 3);
    let cp4 = pont(&integer(&[4], vec![vec![1; 4]]));
    assert_eq!(cp4["p1^2"], 25);
    assert_eq!(cp4["p2"], 10);
    let cp2_squared = pont(&integer(&[2, 2], vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]]));
    assert_eq!(cp2_squared["p1^2"], 18);
    assert_eq!(cp2_squared["p2"], 9);
}

#[test]
fn complex_projective_sw_numbers() {
    // w(CP^2) = (1 + x)^3: w2^2 = w4 = 1 in real-degree labels
    let m = quasitoric_sw_numbers(&integer(&[2], vec![vec![1, 1]]))
        .unwrap()
        .to_map();
    assert_eq!(m, BTreeMap::from([("w2^2".to_string(), 1), ("w4".to_string(), 1)]));
    // CP^3 bounds
    assert!(
        quasitoric_sw_numbers(&integer(&[3], vec![vec![1; 3]]))
            .unwrap()
            .all_zero
    );
}

#[test]
fn hirzebruch_surfaces() {
    // |p1| = 3|signature| = 0 for every Hirzebruch surface
    for b in -3..=3 {
        let a = integer(&[1, 1], vec![vec![1, b], vec![0, 1]]);
        let v = verdict(&a).unwrap();
        assert_eq!(v.pontryagin_all_zero, Some(true), "b = {b}");
        assert!(v.sw_all_zero);
    }
}
