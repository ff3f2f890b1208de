//! Library results against the brute-force linear-algebra oracles.

mod oracle;

use detpsi_core::{Ring, RingSpec};
use oracle::{homogeneous_ideals_equal, Alg, Outcome, Poly, Span};

fn assert_clean(o: &Outcome, min_cases: usize) {
    assert!(o.cases >= min_cases, "only {} cases", o.cases);
    assert!(o.discrepancies.is_empty(), "{:#?}", o.discrepancies);
}

fn lambda2() -> (Ring, Alg) {
    let ring = Ring::new(RingSpec::new(3, 2, &[])).unwrap();
    let alg = Alg::of(&ring);
    (ring, alg)
}

fn p(ring: &Ring, alg: &Alg, s: &str) -> Poly {
    alg.import(ring, &ring.parse(s).unwrap())
}

#[test]
fn oracle_determinant_and_spans_on_hand_cases() {
    let (ring, alg) = lambda2();
    let m = vec![vec![p(&ring, &alg, "x"), p(&ring, &alg, "y")], vec![p(&ring, &alg, "y"), p(&ring, &alg, "x")]];
    assert_eq!(alg.det(&m), p(&ring, &alg, "x^2 - y^2"));
    let a = [p(&ring, &alg, "x^2"), p(&ring, &alg, "x*y")];
    let b = [p(&ring, &alg, "x*y + x^2"), p(&ring, &alg, "x^2")];
    assert!(homogeneous_ideals_equal(&alg, &a, &b).is_ok());
    let c = [p(&ring, &alg, "x^2"), p(&ring, &alg, "y^2")];
    assert!(homogeneous_ideals_equal(&alg, &a, &c).is_err());
    let mut s: Span<u8> = Span::new(3);
    assert!(s.insert(&[(0, 1), (1, 2)].into_iter().collect()));
    assert!(s.insert(&[(1, 1)].into_iter().collect()));
    assert!(!s.insert(&[(0, 2)].into_iter().collect()));
    assert_eq!(s.dim(), 2);
}

#[test]
fn oracle_group_multiplication_wraps() {
    let ring = Ring::new(RingSpec::new(3, 2, &[3])).unwrap();
    let alg = Alg::of(&ring);
    let t2 = p(&ring, &alg, "t^2");
    assert_eq!(alg.mul(&t2, &t2), p(&ring, &alg, "t"));
    assert_eq!(alg.monos_deg(1).len(), 6);
    assert_eq!(alg.monos_below(2).len(), 9);
}

#[test]
fn fitting_ideals_match_leibniz_minors() {
    assert_clean(&oracle::fitting_suite(101, 20), 20);
}

#[test]
fn syzygies_match_degreewise_kernels() {
    assert_clean(&oracle::syzygy_suite(202, 15), 15);
}

#[test]
fn ext2_of_finite_length_modules_matches_dimension_and_annihilator() {
    assert_clean(&oracle::ext2_suite(303, 15), 15);
}

#[test]
fn torsion_submodules_match_rank_oracle() {
    assert_clean(&oracle::torsion_suite(404, 15), 15);
}
