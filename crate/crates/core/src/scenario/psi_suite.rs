//! Random strict-mode complexes [R^a --α--> R^{a+l}] in degrees 0, 1 and the
//! checks on their Ψ maps: global kernel and cokernel laws, the reflexive
//! hull criterion, the bidual comparison, and the local statements at
//! monomial primes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{guarded, guarded_batch, ideal_witness, vector_witness};
use crate::complex::{
    bidual_det_compare, h1_torsion_pseudo_null, psi_laws, psi_map, reflexive_hull_detect, FreeComplex, PsiResult,
};
use crate::error::{Error, Result};
use crate::groebner::kernel_mod;
use crate::local::{local_ideal_gens_equal, local_vanishes, locally_free_rank, MonomialPrime};
use crate::matrix::Matrix;
use crate::module::format_ideal;
use crate::report::CheckResult;
use crate::ring::Ring;
use crate::rng::{self, Sparsity};

/// One sampled complex.
#[derive(Clone, Debug)]
pub struct PsiSample {
    pub index: usize,
    /// `generic` or `codim-one-torsion`.
    pub kind: &'static str,
    pub l: usize,
    pub complex: FreeComplex,
    pub resamples: usize,
}

impl PsiSample {
    pub fn subject(&self) -> String {
        format!("sample-{}", self.index)
    }
}

/// Samples complex `index` of a run seeded with `seed`. Every fourth sample
/// has a column scaled by a linear form, so that H¹ acquires torsion
/// supported in codimension one.
pub fn psi_sample(ring: &Ring, seed: u64, index: usize, max_resample: usize) -> Result<PsiSample> {
    let mut rng = rng::seeded(rng::child_seed(seed, index as u64));
    let l = rng::range(&mut rng, 0, 2);
    let a = rng::range(&mut rng, 1, 2);
    let torsion_kind = index % 4 == 3;
    for attempt in 0..=max_resample {
        let alpha = if torsion_kind {
            let sp = Sparsity { max_terms: 2, min_degree: 0, max_degree: 1, zero_percent: 20, group_terms: true };
            let mut base = rng::matrix(ring, &mut rng, a + l, a, &sp);
            let f = rng::homogeneous(ring, &mut rng, 1, 2);
            for r in 0..a + l {
                let e = ring.mul(base.get(r, 0), &f);
                base.set(r, 0, e);
            }
            base
        } else {
            let sp = Sparsity { max_terms: 2, min_degree: 1, max_degree: 2, zero_percent: 20, group_terms: true };
            rng::matrix(ring, &mut rng, a + l, a, &sp)
        };
        if kernel_mod(ring, &alpha.columns(), &[], a + l)?.is_empty() {
            let complex = FreeComplex::two_term(ring, 0, alpha)?;
            let kind = if torsion_kind { "codim-one-torsion" } else { "generic" };
            return Ok(PsiSample { index, kind, l, complex, resamples: attempt });
        }
    }
    Err(Error::ResampleBudget { budget: max_resample, reason: "the differential is not injective".into() })
}

fn matrix_text(ring: &Ring, m: &Matrix) -> String {
    let rows: Vec<String> =
        m.rows().iter().map(|r| format!("[{}]", r.iter().map(|e| ring.format(e)).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

/// Global checks on one sample.
fn global_checks(ring: &Ring, sample: &PsiSample, psi: &PsiResult) -> Vec<CheckResult> {
    let subject = sample.subject();
    let subject = subject.as_str();
    let mut out = Vec::new();
    let laws = match psi_laws(ring, psi) {
        Ok(l) => l,
        Err(e) => {
            for c in ["psi.kernel", "psi.cokernel"] {
                out.push(CheckResult::fail(c, subject, format!("computation error: {e}")));
            }
            return out;
        }
    };
    let image = format_ideal(ring, &psi.image_ideal);
    let fitt = format_ideal(ring, &laws.fitt_e1);
    out.push(guarded("psi.kernel", subject, || {
        let c = if laws.kernel_law {
            CheckResult::pass("psi.kernel", subject)
        } else {
            let (_, tor) = crate::module::torsion_submodule(ring, &psi.wedge)?;
            let w = vector_witness(ring, &psi.wedge, &psi.kernel_inclusion.images, &tor.images)?
                .or(vector_witness(ring, &psi.wedge, &tor.images, &psi.kernel_inclusion.images)?)
                .unwrap_or_default();
            CheckResult::fail("psi.kernel", subject, format!("kernel and torsion differ at {w}"))
        };
        Ok(c.with_detail("kernel_gens", format!("{}", psi.kernel.ngens())))
    }));
    out.push(guarded("psi.cokernel", subject, || {
        let ok = laws.cokernel_law == Some(true) && laws.minors_law == Some(true);
        let c = if ok {
            CheckResult::pass("psi.cokernel", subject)
        } else {
            let w = ideal_witness(ring, &psi.image_ideal, &laws.fitt_e1)?;
            CheckResult::fail("psi.cokernel", subject, format!("image ideal differs from Fitt(E^1(H^1)): {w}"))
        };
        Ok(c.with_ideal("image", image.clone()).with_ideal("fitt_e1_h1", fitt.clone()))
    }));
    out.push(guarded("psi.hull-torsion", subject, || {
        let hull = reflexive_hull_detect(ring, psi)?;
        let tor = h1_torsion_pseudo_null(ring, psi)?;
        Ok(CheckResult::from_bool("psi.hull-torsion", subject, hull == tor, || {
            format!("cokernel pseudo-null = {hull}, H^1 torsion pseudo-null = {tor}")
        })
        .with_detail("cokernel_pseudo_null", format!("{hull}"))
        .with_detail("h1_torsion_pseudo_null", format!("{tor}")))
    }));
    out.push(guarded("psi.bidual", subject, || {
        if psi.l == 0 {
            return Ok(CheckResult::not_met("psi.bidual", subject, "l = 0".into()));
        }
        if !h1_torsion_pseudo_null(ring, psi)? {
            return Ok(CheckResult::not_met("psi.bidual", subject, "H^1 torsion is not pseudo-null".into()));
        }
        let b = bidual_det_compare(ring, psi)?;
        Ok(CheckResult::from_bool("psi.bidual", subject, b.injective && b.surjective, || {
            format!("comparison map injective = {}, surjective = {}", b.injective, b.surjective)
        })
        .with_detail("scalar", ring.format(&b.scalar)))
    }));
    for c in &mut out {
        c.details.insert("l".into(), format!("{}", sample.l));
        c.details.insert("kind".into(), sample.kind.into());
        c.details.insert("alpha".into(), matrix_text(ring, &psi.differential));
        c.details.insert("resamples".into(), format!("{}", sample.resamples));
    }
    out
}

/// Localized checks of one sample at the given primes: the cokernel of Ψ
/// against Fitt(E¹(H¹)) at q, and bijectivity of Ψ at q when H¹_q is free
/// of rank l.
pub fn psi_local_checks(
    ring: &Ring,
    sample: &PsiSample,
    psi: &PsiResult,
    fitt_e1: &[crate::ring::RingElem],
    primes: &[MonomialPrime],
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for q in primes {
        let subject = format!("{}@{}", sample.subject(), q.format(ring));
        let subject = subject.as_str();
        out.push(guarded("psi.local.cokernel", subject, || {
            let ok = local_ideal_gens_equal(ring, &psi.image_ideal, fitt_e1, q)?;
            Ok(CheckResult::from_bool("psi.local.cokernel", subject, ok, || {
                format!(
                    "image {} and Fitt(E^1(H^1)) {} differ at q",
                    format_ideal(ring, &psi.image_ideal),
                    format_ideal(ring, fitt_e1)
                )
            }))
        }));
        out.push(guarded("psi.local.bijective", subject, || {
            match locally_free_rank(ring, &psi.h1, q)? {
                Some(r) if r == psi.l => {}
                other => {
                    let got = other.map_or("not free".into(), |r| format!("free of rank {r}"));
                    return Ok(CheckResult::not_met(
                        "psi.local.bijective",
                        subject,
                        format!("H^1 at q is {got}, need rank {}", psi.l),
                    ));
                }
            }
            let k = local_vanishes(ring, &psi.kernel, q)?;
            let c = local_vanishes(ring, &psi.cokernel, q)?;
            Ok(CheckResult::from_bool("psi.local.bijective", subject, k && c, || {
                format!("kernel vanishes at q = {k}, cokernel vanishes at q = {c}")
            }))
        }));
    }
    out
}

/// All checks for sample `index`: generation, global laws, and local
/// statements at `primes` (all monomial primes of height ≤ 2 if `None`).
pub fn psi_sample_checks(
    ring: &Ring,
    seed: u64,
    index: usize,
    primes: Option<&[MonomialPrime]>,
    max_resample: usize,
) -> Vec<CheckResult> {
    let subject = format!("sample-{index}");
    guarded_batch("psi.sample", &subject, || {
        let sample = psi_sample(ring, seed, index, max_resample)?;
        let psi = psi_map(ring, &sample.complex, sample.l)?;
        let mut out = global_checks(ring, &sample, &psi);
        let default_primes;
        let primes = match primes {
            Some(p) => p,
            None => {
                default_primes = MonomialPrime::all_up_to_height(ring, 2);
                &default_primes
            }
        };
        let fitt = psi_laws(ring, &psi)?.fitt_e1;
        out.extend(psi_local_checks(ring, &sample, &psi, &fitt, primes));
        Ok(out)
    })
}

/// Runs `count` samples sequentially.
pub fn verify_psi_suite(
    ring: &Ring,
    seed: u64,
    count: usize,
    primes: Option<&[MonomialPrime]>,
    max_resample: usize,
) -> Vec<CheckResult> {
    (0..count).flat_map(|i| psi_sample_checks(ring, seed, i, primes, max_resample)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{Summary, Verdict};
    use crate::ring::RingSpec;

    #[test]
    fn small_suite_passes() {
        let r = Ring::new(RingSpec::new(3, 2, &[])).unwrap();
        let checks = verify_psi_suite(&r, 7, 4, None, 200);
        let fails: Vec<_> = checks.iter().filter(|c| c.verdict == Verdict::Fail).collect();
        assert!(fails.is_empty(), "{fails:?}");
        assert!(Summary::of(&checks).pass > 0);
        assert!(verify_psi_suite(&r, 7, 0, None, 200).is_empty());
    }
}
