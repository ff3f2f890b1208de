//! The rank-one case l = 1: with H = H²(C_U) and the dual side D, the
//! sequence 0 → A → R/(g_1, …, g_n) → E²(B)^κ → 0 with A = Coker(f1) and
//! B = H²(D), together with the torsion-freeness criterion for H, the
//! bidual comparisons, the reflexive hull row of H, and the finite part of A.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::main_seq::{build_diagram, build_snake};
use super::{guarded, guarded_batch, Scenario};
use crate::complex::bidual_det_compare;
use crate::error::{Error, Result};
use crate::module::{
    annihilator, bidual_map, cokernel, ext, finite_part, fitting_gens, format_ideal, ideals_equal, image, is_exact_at,
    is_pseudo_null, kernel, prune, support_dim, torsion_submodule, PresentedModule,
};
use crate::report::CheckResult;
use crate::ring::Ring;

fn ann(ring: &Ring, m: &PresentedModule) -> Result<Vec<crate::ring::RingElem>> {
    Ok(annihilator(ring, m)?.ideal_gens())
}

/// Same annihilator and Fitting ideal, and the second module is cyclic.
fn cyclic_match(ring: &Ring, a: &PresentedModule, b: &PresentedModule) -> Result<Option<String>> {
    let nb = prune(ring, b)?.module.ngens();
    if nb > 1 {
        return Ok(Some(format!("E^2(B)^kappa needs {nb} generators")));
    }
    if !ideals_equal(ring, &ann(ring, a)?, &ann(ring, b)?)? {
        return Ok(Some("annihilators differ".to_string()));
    }
    if !ideals_equal(ring, &fitting_gens(ring, a, 0)?, &fitting_gens(ring, b, 0)?)? {
        return Ok(Some("Fitting ideals differ".to_string()));
    }
    Ok(None)
}

/// Checks for a scenario with l = 1. Errors if l ≠ 1.
pub fn verify_l1_sequence(s: &Scenario) -> Result<Vec<CheckResult>> {
    if s.l != 1 {
        return Err(Error::Precondition(format!("the rank-one sequence needs l = 1, got l = {}", s.l)));
    }
    let id = s.id();
    let id = id.as_str();
    let ring = &s.ring;
    Ok(guarded_batch("l1.sequence", id, || {
        let h2d = s.dual_side()?.cohomology(ring, 2)?;
        let names = ["l1.torsion-free", "l1.bidual", "l1.reflexive-row", "l1.sequence", "l1.corner", "l1.finite-part"];
        if !is_pseudo_null(ring, &h2d)? {
            let why = format!(
                "H^2 of the dual side is not pseudo-null: support of dimension {} cut out by {}",
                support_dim(ring, &h2d)?,
                format_ideal(ring, &ann(ring, &h2d)?)
            );
            return Ok(names.iter().map(|c| CheckResult::not_met(c, id, why.clone())).collect());
        }
        let h = s.global_complex()?.cohomology(ring, 2)?;
        let dg = build_diagram(s)?;
        let sn = build_snake(ring, &dg)?;
        let mut out = Vec::new();

        out.push(guarded("l1.torsion-free", id, || {
            let torsion_free = torsion_submodule(ring, &h)?.0.is_zero();
            Ok(CheckResult::from_bool("l1.torsion-free", id, torsion_free, || {
                "H^2(C_U) has torsion although H^2 of the dual side is pseudo-null".into()
            }))
        }));

        out.push(guarded("l1.bidual", id, || {
            let mut bad = Vec::new();
            let bu = bidual_det_compare(ring, &dg.psi_u)?;
            if !(bu.injective && bu.surjective) {
                bad.push("global comparison is not an isomorphism".to_string());
            }
            for (i, p) in dg.psi_l.iter().enumerate() {
                let b = bidual_det_compare(ring, p)?;
                if !(b.injective && b.surjective) {
                    bad.push(format!("local comparison {} is not an isomorphism", i + 1));
                }
            }
            Ok(if bad.is_empty() {
                CheckResult::pass("l1.bidual", id)
            } else {
                CheckResult::fail("l1.bidual", id, bad.join("; "))
            })
        }));

        let e2b = ext(ring, &h2d, 2)?.twist(ring, &s.kappa)?;
        out.push(guarded("l1.reflexive-row", id, || {
            let bm = bidual_map(ring, &h, 1)?;
            let injective = kernel(ring, &bm.map)?.0.is_zero();
            let e1_zero = ext(ring, &h2d, 1)?.is_zero();
            let q = cokernel(ring, &bm.map)?;
            let mismatch = cyclic_match(ring, &q, &e2b)?;
            let ok = injective && e1_zero && mismatch.is_none();
            Ok(CheckResult::from_bool("l1.reflexive-row", id, ok, || {
                format!(
                    "H -> H** injective = {injective}, E^1 of the dual side zero = {e1_zero}, cokernel vs E^2: {}",
                    mismatch.clone().unwrap_or_else(|| "match".into())
                )
            })
            .with_ideal("ann_h_bidual_quotient", format_ideal(ring, &ann(ring, &q)?)))
        }));

        out.push(guarded("l1.sequence", id, || {
            let mut bad = Vec::new();
            if !dg.top_right().is_zero() {
                bad.push("the local cokernel sum is nonzero".to_string());
            }
            if !sn.c12.is_injective(ring)? {
                bad.push("A -> R/(g) is not injective".to_string());
            }
            if !is_exact_at(ring, &sn.c12, &sn.c23)? {
                bad.push("not exact at R/(g)".to_string());
            }
            if !sn.c23.is_surjective(ring)? {
                bad.push("R/(g) -> C3 is not surjective".to_string());
            }
            if let Some(why) = cyclic_match(ring, sn.c3(), &e2b)? {
                bad.push(format!("C3 and E^2(B)^kappa: {why}"));
            }
            let c = if bad.is_empty() {
                CheckResult::pass("l1.sequence", id)
            } else {
                CheckResult::fail("l1.sequence", id, bad.join("; "))
            };
            Ok(c.with_ideal("g", format_ideal(ring, &dg.g))
                .with_ideal("fitt_e2b", format_ideal(ring, &fitting_gens(ring, &e2b, 0)?)))
        }));

        out.push(guarded("l1.corner", id, || {
            let (img, _) = image(ring, &sn.delta)?;
            let dim = support_dim(ring, &img)?;
            Ok(CheckResult::from_bool("l1.corner", id, dim <= 0, || format!("image of Ker f3 in A has support dimension {dim}"))
                .with_detail("corner_support_dim", format!("{dim}")))
        }));

        out.push(guarded("l1.finite-part", id, || {
            // A embeds in R/(g) modulo the corner image, so the bound on A's
            // finite part needs R/(g) itself to have no finite submodule.
            let (rg_fin, _) = finite_part(ring, sn.c2())?;
            if !rg_fin.is_zero() {
                return Ok(CheckResult::not_met(
                    "l1.finite-part",
                    id,
                    format!("R/(g) has a nonzero finite submodule (Krull dimension of R is {})", ring.d()),
                ));
            }
            let a = sn.c1();
            let (fin, _) = finite_part(ring, a)?;
            let pruned = prune(ring, &fin)?.module;
            let gens = pruned.ngens();
            let c =
                CheckResult::from_bool("l1.finite-part", id, gens <= 1, || format!("finite part of A needs {gens} generators"))
                    .with_detail("finite_part_gens", format!("{gens}"))
                    .with_detail("a_gens", format!("{}", prune(ring, a)?.module.ngens()));
            Ok(if gens == 0 { c } else { c.with_ideal("ann_finite_part", format_ideal(ring, &ann(ring, &pruned)?)) })
        }));
        Ok(out)
    }))
}

#[cfg(test)]
mod tests {
    use super::super::{generate_scenario, ScenarioParams};
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn seed_one() {
        let p = ScenarioParams::new(3, 1, &[3], 2, &[1, 1]);
        let s = generate_scenario(1, &p).unwrap();
        let checks = verify_l1_sequence(&s).unwrap();
        for c in &checks {
            assert_ne!(c.verdict, Verdict::Fail, "{c:#?}");
        }
        let p2 = ScenarioParams::new(3, 1, &[], 2, &[1, 2]);
        let s2 = generate_scenario(5, &p2).unwrap();
        assert!(matches!(verify_l1_sequence(&s2), Err(Error::Precondition(_))));
    }
}
