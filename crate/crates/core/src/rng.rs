//! Seeded sampling of sparse ring elements and matrices.
//!
//! All randomness flows from a ChaCha8 stream seeded by a 64-bit value, so
//! every sample is reproducible on every platform.

use alloc::vec::Vec;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use crate::ring::{Mono, Ring, RingElem};

/// The generator used throughout the crate.
pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A child seed for sample `index` of a run seeded with `seed`, so samples
/// can be generated independently and in parallel.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Shape of random sparse elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sparsity {
    /// Maximum number of terms per element.
    pub max_terms: usize,
    /// Minimum total degree in the polynomial variables.
    pub min_degree: u32,
    /// Maximum total degree in the polynomial variables.
    pub max_degree: u32,
    /// Probability (percent) that an entry is zero.
    pub zero_percent: u32,
    /// Whether group variables may appear.
    pub group_terms: bool,
}

impl Default for Sparsity {
    fn default() -> Self {
        Sparsity { max_terms: 3, min_degree: 0, max_degree: 2, zero_percent: 30, group_terms: true }
    }
}

/// A uniformly random nonzero field element.
pub fn nonzero_scalar(ring: &Ring, rng: &mut Rng) -> u32 {
    let q = ring.field().order();
    ring.field().from_code(rng.random_range(1..q))
}

/// A random monomial of total degree in `min_degree..=max_degree` in the
/// polynomial variables, optionally times a random group element.
pub fn monomial(ring: &Ring, rng: &mut Rng, min_degree: u32, max_degree: u32, group_terms: bool) -> Mono {
    let mut m = Mono::ONE;
    let deg = rng.random_range(min_degree.min(max_degree)..=max_degree);
    for _ in 0..deg {
        let v = rng.random_range(0..ring.d());
        m.0[v] += 1;
    }
    if group_terms {
        for (j, &n) in ring.group_orders().iter().enumerate() {
            m.0[ring.d() + j] = rng.random_range(0..n) as u16;
        }
    }
    m
}

/// A random element with at most `max_terms` terms (possibly zero when
/// terms cancel).
pub fn element(ring: &Ring, rng: &mut Rng, sp: &Sparsity) -> RingElem {
    let k = rng.random_range(1..=sp.max_terms.max(1));
    let terms: Vec<(Mono, u32)> =
        (0..k).map(|_| (monomial(ring, rng, sp.min_degree, sp.max_degree, sp.group_terms), nonzero_scalar(ring, rng))).collect();
    ring.normal_form_terms(terms)
}

/// A random entry: zero with probability `zero_percent`, else [`element`].
pub fn entry(ring: &Ring, rng: &mut Rng, sp: &Sparsity) -> RingElem {
    if rng.random_range(0..100) < sp.zero_percent {
        RingElem::zero()
    } else {
        element(ring, rng, sp)
    }
}

/// A random `nrows × ncols` matrix of sparse entries.
pub fn matrix(ring: &Ring, rng: &mut Rng, nrows: usize, ncols: usize, sp: &Sparsity) -> Matrix {
    let rows = (0..nrows).map(|_| (0..ncols).map(|_| entry(ring, rng, sp)).collect()).collect();
    Matrix::from_rows(ncols, rows)
}

/// A random element of Λ that is homogeneous of degree `deg` in the
/// polynomial variables.
pub fn homogeneous(ring: &Ring, rng: &mut Rng, deg: u32, max_terms: usize) -> RingElem {
    let k = rng.random_range(1..=max_terms.max(1));
    let terms: Vec<(Mono, u32)> = (0..k)
        .map(|_| {
            let mut m = Mono::ONE;
            for _ in 0..deg {
                m.0[rng.random_range(0..ring.d())] += 1;
            }
            (m, nonzero_scalar(ring, rng))
        })
        .collect();
    ring.normal_form_terms(terms)
}

/// Uniform index in `0..n`.
pub fn index(rng: &mut Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// Uniform integer in `lo..=hi`.
pub fn range(rng: &mut Rng, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}
