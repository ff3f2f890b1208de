//! The comparison diagram between the local Ψ maps and the global one, its
//! snake sequence, the localized main sequence at monomial primes, and
//! length additivity at height-two primes.
//!
//! Rows of the diagram:
//!
//! ```text
//! 0 → T1 → R^n → ⊕ R/I_i → 0        T1 = ⊕ image of Ψ_{L_i}
//!      f1↓   f2↓      f3↓
//! 0 → B1 →  R  →  R/I_U  → 0        B1 = I_U = image of Ψ_U
//! ```
//!
//! with f2(e_i) = g_i = (−1)^m det M_i and f1 determined by
//! Ψ_{L_i}(Y) ↦ Ψ_U(∧ u_i Y).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{guarded, guarded_batch, ideal_witness, Scenario};
use crate::complex::{l_alg, psi_map, PsiResult};
use crate::error::{Error, Result};
use crate::groebner::{FreeVector, Lifter};
use crate::local::{
    finite_length_at, length_at, local_ideal_gens_equal, local_pd_probe, local_vanishes, local_vanishes_in, MonomialPrime,
    DEFAULT_PD_BOUND,
};
use crate::matrix::Matrix;
use crate::module::{
    cokernel, factor_through, fitting_gens, format_ideal, ideals_equal, is_exact_at, kernel, kernel_gens, prune, ModuleHom,
    PresentedModule,
};
use crate::report::CheckResult;
use crate::ring::{Ring, RingElem};

/// The comparison diagram of a scenario.
#[derive(Clone, Debug)]
pub struct Diagram {
    /// Ψ of C_U[1] (strict mode, differential −A).
    pub psi_u: PsiResult,
    /// Ψ of L_{T_i}.
    pub psi_l: Vec<PsiResult>,
    /// g_i = (−1)^m det M_i.
    pub g: Vec<RingElem>,
    /// The normalized generators of the determinants of C_mid,i.
    pub lalg: Vec<RingElem>,
    pub t1: PresentedModule,
    /// T1 → R^n.
    pub t1_inc: ModuleHom,
    pub b1: PresentedModule,
    /// B1 → R.
    pub b1_inc: ModuleHom,
    pub f1: ModuleHom,
    pub f2: ModuleHom,
    pub f3: ModuleHom,
    /// Generators of T1 at which Ψ_U(∧ u_i Y) ≠ g_i Ψ_{L_i}(Y), as
    /// (i, wedge index, difference).
    pub commutation_failures: Vec<(usize, usize, RingElem)>,
}

impl Diagram {
    /// ⊕ R/I_i.
    pub fn top_right(&self) -> &PresentedModule {
        &self.f3.source
    }

    /// R/I_U.
    pub fn bottom_right(&self) -> &PresentedModule {
        &self.f3.target
    }
}

/// The snake sequence 0 → K1 → K2 → K3 → C1 → C2 → C3 → 0 of the diagram.
#[derive(Clone, Debug)]
pub struct Snake {
    pub k12: ModuleHom,
    pub k23: ModuleHom,
    pub delta: ModuleHom,
    pub c12: ModuleHom,
    pub c23: ModuleHom,
}

impl Snake {
    pub fn k1(&self) -> &PresentedModule {
        &self.k12.source
    }
    pub fn k2(&self) -> &PresentedModule {
        &self.k23.source
    }
    pub fn k3(&self) -> &PresentedModule {
        &self.delta.source
    }
    pub fn c1(&self) -> &PresentedModule {
        &self.c12.source
    }
    pub fn c2(&self) -> &PresentedModule {
        &self.c23.source
    }
    pub fn c3(&self) -> &PresentedModule {
        &self.c23.target
    }

    /// Failed positions of the exactness checks, empty if exact.
    pub fn exactness_failures(&self, ring: &Ring) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        if !self.k12.is_injective(ring)? {
            bad.push("K1 -> K2 is not injective".to_string());
        }
        let pairs = [
            ("K2", &self.k12, &self.k23),
            ("K3", &self.k23, &self.delta),
            ("C1", &self.delta, &self.c12),
            ("C2", &self.c12, &self.c23),
        ];
        for (name, f, g) in pairs {
            if !is_exact_at(ring, f, g)? {
                bad.push(format!("not exact at {name}"));
            }
        }
        if !self.c23.is_surjective(ring)? {
            bad.push("C2 -> C3 is not surjective".to_string());
        }
        Ok(bad)
    }
}

/// Ψ_U(v_1 ∧ … ∧ v_l) = det[−A | v_1 … v_l].
fn psi_u_of(ring: &Ring, psi_u: &PsiResult, vs: &[FreeVector]) -> RingElem {
    let rows = psi_u.differential.nrows();
    let m = Matrix::hstack(&psi_u.differential, &Matrix::from_columns(rows, vs));
    m.det(ring)
}

/// Builds the diagram of a scenario.
pub fn build_diagram(s: &Scenario) -> Result<Diagram> {
    let ring = &s.ring;
    let n = s.n();
    let l = s.l;
    let psi_u = psi_map(ring, &s.global_complex()?.shift(ring, 1), l)?;
    let mut psi_l = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut lalg = Vec::with_capacity(n);
    let sign_neg = s.m() % 2 == 1;
    for i in 0..n {
        psi_l.push(psi_map(ring, &s.local_sum(i)?, l)?);
        let det = s.mid_matrix(i).det(ring);
        g.push(if sign_neg { ring.neg(&det) } else { det });
        lalg.push(l_alg(ring, &s.mid_complex(i)?)?);
    }
    let free_n = PresentedModule::free(ring, n);
    let line = PresentedModule::free(ring, 1);

    let mut t1_gens = Vec::new();
    let mut f1_values = Vec::new();
    let mut failures = Vec::new();
    for (i, p) in psi_l.iter().enumerate() {
        for (w, subset) in crate::matrix::combinations(p.h1_cycles.len(), l).into_iter().enumerate() {
            let mut v = vec![RingElem::zero(); n];
            v[i] = p.image_ideal[w].clone();
            t1_gens.push(v);
            let images: Vec<FreeVector> = subset.iter().map(|&k| s.u[i].apply(ring, &p.h1_cycles[k])).collect();
            let value = psi_u_of(ring, &psi_u, &images);
            let expected = ring.mul(&g[i], &p.image_ideal[w]);
            if value != expected {
                failures.push((i, w, ring.sub(&value, &expected)));
            }
            f1_values.push(value);
        }
    }
    let (t1, t1_inc) = free_n.submodule(ring, t1_gens)?;
    let b1_gens: Vec<FreeVector> = psi_u.image_ideal.iter().map(|v| vec![v.clone()]).collect();
    let (b1, b1_inc) = line.submodule(ring, b1_gens)?;
    let lifter = Lifter::new(ring, &b1_inc.images, &[], 1)?;
    let f1_images = f1_values
        .iter()
        .map(|v| {
            lifter
                .lift(ring, core::slice::from_ref(v))?
                .ok_or_else(|| Error::NotWellDefined("a value of f1 lies outside I_U".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let f1 = ModuleHom::new(ring, t1.clone(), b1.clone(), f1_images)?;
    let f2 = ModuleHom::new(ring, free_n, line, g.iter().map(|x| vec![x.clone()]).collect())?;
    let tops = psi_l.iter().map(|p| PresentedModule::cyclic(ring, &p.image_ideal)).collect::<Result<Vec<_>>>()?;
    let top_right = PresentedModule::direct_sum(ring, &tops.iter().collect::<Vec<_>>())?;
    let bottom_right = PresentedModule::cyclic(ring, &psi_u.image_ideal)?;
    let f3 = ModuleHom::new(ring, top_right, bottom_right, g.iter().map(|x| vec![x.clone()]).collect())?;
    Ok(Diagram { psi_u, psi_l, g, lalg, t1, t1_inc, b1, b1_inc, f1, f2, f3, commutation_failures: failures })
}

/// The snake sequence of the diagram.
pub fn build_snake(ring: &Ring, dg: &Diagram) -> Result<Snake> {
    let (_, k1_inc) = kernel(ring, &dg.f1)?;
    let (_, k2_inc) = kernel(ring, &dg.f2)?;
    let (_, k3_inc) = kernel(ring, &dg.f3)?;
    let k12 = factor_through(ring, &k1_inc.then(ring, &dg.t1_inc), &k2_inc)?;
    let proj = ModuleHom::new(ring, dg.f2.source.clone(), dg.top_right().clone(), dg.top_right().generators(ring))?;
    let k23 = factor_through(ring, &k2_inc.then(ring, &proj), &k3_inc)?;
    let c1 = cokernel(ring, &dg.f1)?;
    let c2 = cokernel(ring, &dg.f2)?;
    let c3 = cokernel(ring, &dg.f3)?;
    let lifter = Lifter::new(ring, &dg.b1_inc.images, &[], 1)?;
    let delta_images = k3_inc
        .images
        .iter()
        .map(|v| {
            let w = dg.f2.apply(ring, v);
            lifter.lift(ring, &w)?.ok_or_else(|| Error::NotWellDefined("connecting map leaves I_U".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let delta = ModuleHom::new(ring, k3_inc.source.clone(), c1.clone(), delta_images)?;
    let c12 = ModuleHom::new(ring, c1, c2.clone(), dg.b1_inc.images.clone())?;
    let c23 = ModuleHom::new(ring, c2, c3, vec![vec![ring.one()]])?;
    Ok(Snake { k12, k23, delta, c12, c23 })
}

/// Hypotheses of the main sequence at q for every local datum in some T_i:
/// pd of R/J_p at q is at most 2 and (R/J_p)^κ vanishes at q.
fn local_hypotheses(s: &Scenario, q: &MonomialPrime) -> Result<Option<String>> {
    let ring = &s.ring;
    let mut used: Vec<usize> = (0..s.n()).flat_map(|i| s.t_set(i)).collect();
    used.sort_unstable();
    used.dedup();
    for p in used {
        let z = s.locals[p].h2(ring)?;
        let pd = local_pd_probe(ring, &z, q, DEFAULT_PD_BOUND)?;
        if !pd.at_most(2) {
            return Ok(Some(format!("pd of R/J_{} at q is {}", p + 1, pd.format())));
        }
        if !local_vanishes(ring, &z.twist(ring, &s.kappa)?, q)? {
            return Ok(Some(format!("twisted R/J_{} does not vanish at q", p + 1)));
        }
    }
    Ok(None)
}

/// Fitt(H²(D)^κ) for the dual side D.
pub fn dual_fitting(s: &Scenario) -> Result<Vec<RingElem>> {
    let h2 = s.dual_side()?.cohomology(&s.ring, 2)?.twist(&s.ring, &s.kappa)?;
    fitting_gens(&s.ring, &h2, 0)
}

fn local_check(
    s: &Scenario,
    dg: &Diagram,
    sn: &Snake,
    ker_c12: &[FreeVector],
    dual_fitt: &[RingElem],
    q: &MonomialPrime,
) -> Result<CheckResult> {
    let ring = &s.ring;
    let subject = format!("{}@{}", s.id(), q.format(ring));
    if let Some(why) = local_hypotheses(s, q)? {
        return Ok(CheckResult::not_met("main.local", &subject, why));
    }
    let mut bad = Vec::new();
    if !local_vanishes(ring, dg.top_right(), q)? {
        bad.push("the local cokernel sum does not vanish at q".to_string());
    }
    for (i, p) in dg.psi_l.iter().enumerate() {
        if !local_vanishes(ring, &p.kernel, q)? || !local_vanishes(ring, &p.cokernel, q)? {
            bad.push(format!("Psi of L_{} is not bijective at q", i + 1));
        }
    }
    if !local_vanishes_in(ring, sn.c1(), ker_c12, q)? {
        bad.push("C1 -> R/(g) is not injective at q".to_string());
    }
    let mut iu_g = dg.psi_u.image_ideal.clone();
    iu_g.extend(dg.g.iter().cloned());
    if !local_ideal_gens_equal(ring, &iu_g, dual_fitt, q)? {
        bad.push(format!("I_U + (g) and Fitt of the dual side differ at q: {}", ideal_witness(ring, &iu_g, dual_fitt)?));
    }
    let c = if bad.is_empty() {
        CheckResult::pass("main.local", &subject)
    } else {
        CheckResult::fail("main.local", &subject, bad.join("; "))
    };
    Ok(c.with_ideal("dual_fitt", format_ideal(ring, dual_fitt)))
}

fn lalg_ideals(ring: &Ring, dg: &Diagram, c: CheckResult) -> CheckResult {
    dg.lalg
        .iter()
        .enumerate()
        .fold(c, |c, (i, f)| c.with_ideal(&format!("lalg_{}", i + 1), format_ideal(ring, core::slice::from_ref(f))))
}

/// Global checks on the diagram and its snake sequence, then the localized
/// main sequence at each prime (all monomial primes of height ≤ 2 if
/// `None`).
pub fn verify_main_sequence(s: &Scenario, primes: Option<&[MonomialPrime]>) -> Vec<CheckResult> {
    let id = s.id();
    guarded_batch("main.diagram", &id, || {
        let ring = &s.ring;
        let dg = build_diagram(s)?;
        let sn = build_snake(ring, &dg)?;
        let mut out = Vec::new();
        out.push(CheckResult::from_bool("main.commutativity", &id, dg.commutation_failures.is_empty(), || {
            let (i, w, d) = &dg.commutation_failures[0];
            format!("CM-type {} wedge generator {}: difference {}", i + 1, w, ring.format(d))
        }));
        out.push(guarded("main.coker-f2", &id, || {
            let c2 = sn.c2();
            let cyclic = prune(ring, c2)?.module.ngens() <= 1;
            let fitt = fitting_gens(ring, c2, 0)?;
            let g_vs_lalg = ideals_equal(ring, &dg.g, &dg.lalg)?;
            let fitt_ok = ideals_equal(ring, &fitt, &dg.lalg)?;
            let mut principal = true;
            for (g, f) in dg.g.iter().zip(&dg.lalg) {
                principal &= ideals_equal(ring, core::slice::from_ref(g), core::slice::from_ref(f))?;
            }
            let ok = cyclic && g_vs_lalg && fitt_ok && principal;
            let c = CheckResult::from_bool("main.coker-f2", &id, ok, || {
                format!("cyclic = {cyclic}, (g) = (L) = {g_vs_lalg}, Fitt = (L) = {fitt_ok}, each g_i ~ L_i = {principal}")
            });
            Ok(lalg_ideals(ring, &dg, c).with_ideal("coker_f2_fitt", format_ideal(ring, &fitt)))
        }));
        out.push(guarded("main.snake", &id, || {
            let bad = sn.exactness_failures(ring)?;
            let c = if bad.is_empty() {
                CheckResult::pass("main.snake", &id)
            } else {
                CheckResult::fail("main.snake", &id, bad.join("; "))
            };
            Ok(c.with_ideal("image_psi_u", format_ideal(ring, &dg.psi_u.image_ideal))
                .with_detail("k3_gens", format!("{}", sn.k3().ngens()))
                .with_detail("c1_gens", format!("{}", prune(ring, sn.c1())?.module.ngens())))
        }));
        let dual_fitt = dual_fitting(s)?;
        let ker_c12 = kernel_gens(ring, &sn.c12)?;
        let default_primes;
        let primes = match primes {
            Some(p) => p,
            None => {
                default_primes = MonomialPrime::all_up_to_height(ring, 2);
                &default_primes
            }
        };
        for q in primes {
            let subject = format!("{}@{}", id, q.format(ring));
            out.push(guarded("main.local", &subject, || local_check(s, &dg, &sn, &ker_c12, &dual_fitt, q)));
        }
        for c in &mut out {
            c.details.insert("l".into(), format!("{}", s.l));
            c.details.insert("m".into(), format!("{}", s.m()));
        }
        Ok(out)
    })
}

/// Length additivity along 0 → K → C1 → R/(g) → C3 → 0, K = Coker(K2 → K3),
/// at every height-two monomial prime where all four modules have finite
/// length.
pub fn verify_chern(s: &Scenario) -> Vec<CheckResult> {
    let id = s.id();
    guarded_batch("chern.length", &id, || {
        let ring = &s.ring;
        let dg = build_diagram(s)?;
        let sn = build_snake(ring, &dg)?;
        let k = cokernel(ring, &sn.k23)?;
        let mods: [(&str, &PresentedModule); 4] = [("K", &k), ("C1", sn.c1()), ("R/(g)", sn.c2()), ("C3", sn.c3())];
        let mut out = Vec::new();
        for q in MonomialPrime::all_up_to_height(ring, 2).into_iter().filter(|q| q.height() == 2) {
            let subject = format!("{}@{}", id, q.format(ring));
            out.push(guarded("chern.length", &subject, || {
                for (name, m) in &mods {
                    if !finite_length_at(ring, m, &q)? {
                        return Ok(CheckResult::not_met(
                            "chern.length",
                            &subject,
                            format!("{name} has infinite length at q (q contains a codimension-one support component)"),
                        ));
                    }
                }
                let mut lens = Vec::new();
                for (_, m) in &mods {
                    lens.push(length_at(ring, m, &q)? as i64);
                }
                let alt = lens[0] - lens[1] + lens[2] - lens[3];
                let mut c =
                    CheckResult::from_bool("chern.length", &subject, alt == 0, || format!("alternating sum of lengths is {alt}"));
                for ((name, _), len) in mods.iter().zip(&lens) {
                    c = c.with_detail(&format!("length {name}"), format!("{len}"));
                }
                Ok(c)
            }));
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::super::{generate_scenario, ScenarioParams};
    use super::*;
    use crate::report::Verdict;

    #[test]
    fn l1_scenario_main_sequence() {
        let p = ScenarioParams::new(3, 1, &[3], 2, &[1, 1]);
        let s = generate_scenario(1, &p).unwrap();
        let checks = verify_main_sequence(&s, None);
        let fails: Vec<_> = checks.iter().filter(|c| c.verdict == Verdict::Fail).collect();
        assert!(fails.is_empty(), "{fails:#?}");
        let q = MonomialPrime::parse(&s.ring, "x").unwrap();
        let at_x = verify_main_sequence(&s, Some(&[q]));
        assert!(at_x.iter().any(|c| c.check == "main.local"));
    }

    #[test]
    fn l0_scenario_main_sequence() {
        let p = ScenarioParams::new(3, 2, &[], 2, &[1, 1]);
        let s = generate_scenario(2, &p).unwrap();
        let checks = verify_main_sequence(&s, None);
        assert!(checks.iter().all(|c| c.verdict != Verdict::Fail), "{checks:#?}");
    }
}
