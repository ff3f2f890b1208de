//! Property tests for algebraic invariants over randomly seeded inputs.

mod oracle;

use detpsi_core::groebner::{combine, syzygies, Gb};
use detpsi_core::matrix::Matrix;
use detpsi_core::module::{fitting_gens, ideals_equal, PresentedModule};
use detpsi_core::rng::{self, seeded, Sparsity};
use detpsi_core::{Ring, RingSpec};
use oracle::Alg;
use proptest::prelude::*;

fn ring_of(kind: u8) -> Ring {
    let spec = match kind % 6 {
        0 => RingSpec::new(3, 2, &[]),
        1 => RingSpec::new(3, 2, &[3]),
        2 => RingSpec::new(5, 1, &[2]),
        3 => RingSpec::new(2, 3, &[]),
        4 => RingSpec::new(9, 2, &[]),
        _ => RingSpec::new(4, 1, &[3]),
    };
    Ring::new(spec).unwrap()
}

fn small() -> Sparsity {
    Sparsity { max_terms: 3, min_degree: 0, max_degree: 2, zero_percent: 20, group_terms: true }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn multiplication_matches_oracle_and_is_a_commutative_ring(kind in 0u8..6, seed in any::<u64>()) {
        let ring = ring_of(kind);
        // the oracle only handles prime fields
        prop_assume!(ring.field().degree() == 1);
        let alg = Alg::of(&ring);
        let mut r = seeded(seed);
        let sp = small();
        let (a, b, c) = (rng::element(&ring, &mut r, &sp), rng::element(&ring, &mut r, &sp), rng::element(&ring, &mut r, &sp));
        let ab = ring.mul(&a, &b);
        prop_assert_eq!(alg.import(&ring, &ab), alg.mul(&alg.import(&ring, &a), &alg.import(&ring, &b)));
        prop_assert_eq!(&ab, &ring.mul(&b, &a));
        prop_assert_eq!(ring.mul(&ab, &c), ring.mul(&a, &ring.mul(&b, &c)));
        prop_assert_eq!(ring.mul(&a, &ring.add(&b, &c)), ring.add(&ab, &ring.mul(&a, &c)));
        prop_assert!(ring.add(&a, &ring.neg(&a)).is_zero());
    }

    #[test]
    fn format_then_parse_round_trips(kind in 0u8..6, seed in any::<u64>()) {
        let ring = ring_of(kind);
        let a = rng::element(&ring, &mut seeded(seed), &small());
        prop_assert_eq!(ring.parse(&ring.format(&a)).unwrap(), a);
    }

    #[test]
    fn groebner_bases_contain_generators_and_pass_buchberger(kind in 0u8..6, seed in any::<u64>(), rank in 1usize..3, n in 1usize..4) {
        let ring = ring_of(kind);
        let mut r = seeded(seed);
        let gens = rng::matrix(&ring, &mut r, rank, n, &small()).columns();
        let gb = Gb::new(&ring, rank, &gens).unwrap();
        prop_assert!(gb.satisfies_buchberger_criterion(&ring));
        prop_assert!(gb.contains_all(&ring, &gens).unwrap());
        for e in gb.elements(&ring) {
            prop_assert!(gb.reduce(&ring, &e).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn syzygies_vanish_on_generators(kind in 0u8..6, seed in any::<u64>(), rank in 1usize..3, n in 1usize..4) {
        let ring = ring_of(kind);
        let gens = rng::matrix(&ring, &mut seeded(seed), rank, n, &small()).columns();
        for s in syzygies(&ring, &gens, rank).unwrap() {
            prop_assert!(combine(&ring, &s, &gens, rank).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn fitting_ideals_ignore_redundant_relations_and_column_operations(kind in 0u8..6, seed in any::<u64>(), rank in 1usize..3) {
        let ring = ring_of(kind);
        let mut r = seeded(seed);
        let m = rng::matrix(&ring, &mut r, rank, rank + 1, &small());
        let mut cols = m.columns();
        let f = rng::element(&ring, &mut r, &small());
        let redundant = combine(&ring, &[ring.one(), f.clone()], &cols[..2], rank);
        let mut with_extra = cols.clone();
        with_extra.push(redundant);
        // add f times column 0 to column 1
        let shifted: Vec<_> = cols[1].iter().zip(&cols[0]).map(|(b, a)| ring.add(b, &ring.mul(&f, a))).collect();
        cols[1] = shifted;
        let base = PresentedModule::coker_of_matrix(&ring, &m).unwrap();
        let extra = PresentedModule::new(&ring, rank, with_extra).unwrap();
        let moved = PresentedModule::coker_of_matrix(&ring, &Matrix::from_columns(rank, &cols)).unwrap();
        for k in 0..=rank {
            let fb = fitting_gens(&ring, &base, k).unwrap();
            prop_assert!(ideals_equal(&ring, &fb, &fitting_gens(&ring, &extra, k).unwrap()).unwrap());
            prop_assert!(ideals_equal(&ring, &fb, &fitting_gens(&ring, &moved, k).unwrap()).unwrap());
        }
    }
}
