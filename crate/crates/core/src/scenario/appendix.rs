//! Fitting ideals of Ext modules: modules of projective dimension one and
//! their E¹, perfect modules of grade two and their E², the randomized
//! repair of degenerate presentations, and the characteristic ideal
//! factorization over F_q[x, y].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{guarded, ideal_witness};
use crate::complex::pick_nzd;
use crate::error::{Error, Result};
use crate::groebner::Submodule;
use crate::matrix::{combinations, Matrix};
use crate::module::{
    annihilator, char_ideal, dual_resolution, ext, ext_of_resolution, fitting_gens, fitting_ideal, format_ideal, generic_rank,
    ideals_equal, is_pseudo_null, prune, pseudo_null_part, resolve, FractionalIdeal, ModuleHom, PresentedModule,
};
use crate::report::CheckResult;
use crate::ring::{Ring, RingElem};
use crate::rng::{self, Rng, Sparsity};

fn sparsity() -> Sparsity {
    Sparsity { max_terms: 2, min_degree: 1, max_degree: 2, zero_percent: 20, group_terms: true }
}

fn rng_for(seed: u64, index: usize, salt: u64) -> Rng {
    rng::seeded(rng::child_seed(rng::child_seed(seed, index as u64), salt))
}

/// The identity on generators from a module presented on the same
/// generators, certified as an isomorphism.
fn identity_iso(ring: &Ring, from: &PresentedModule, to: &PresentedModule) -> Result<bool> {
    if from.ngens() != to.ngens() {
        return Ok(false);
    }
    match ModuleHom::new(ring, from.clone(), to.clone(), to.generators(ring)) {
        Ok(h) => h.is_isomorphism(ring),
        Err(Error::NotWellDefined(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// P = coker(H) for a square H with non-zero-divisor determinant. Checks
/// E⁰(P) = 0, Fitt(E¹(P)) = Fitt(P) = (det H) by two routes, and that the
/// identity on generators E¹(E¹(P)) → P is an isomorphism.
fn pd1_fitting(ring: &Ring, seed: u64, index: usize, budget: usize) -> Result<CheckResult> {
    let subject = format!("sample-{index}");
    let mut rng = rng_for(seed, index, 1);
    let (h, tries) = if index == 0 {
        let m = Matrix::from_rows(2, vec![vec![ring.x(0), ring.x(1 % ring.d())], vec![ring.zero(), ring.x(0)]]);
        (m, 0)
    } else {
        let a = rng::range(&mut rng, 1, 2);
        let mut found = None;
        for attempt in 0..=budget {
            let m = rng::matrix(ring, &mut rng, a, a, &sparsity());
            if ring.is_non_zero_divisor(&m.det(ring)) {
                found = Some((m, attempt));
                break;
            }
        }
        found.ok_or_else(|| Error::ResampleBudget { budget, reason: "determinant is a zero-divisor".into() })?
    };
    let p = PresentedModule::coker_of_matrix(ring, &h)?;
    let det = h.det(ring);
    let res = resolve(ring, &p, 2)?;
    let mut problems: Vec<String> = Vec::new();
    if !res.maps[1].is_empty() {
        problems.push("the relations are not independent".into());
    }
    let e0 = ext_of_resolution(ring, &res, 0)?;
    if !e0.is_zero() {
        problems.push("E^0(P) is nonzero".into());
    }
    let e1 = ext_of_resolution(ring, &res, 1)?;
    let fitt_p = fitting_gens(ring, &p, 0)?;
    let fitt_e1 = fitting_gens(ring, &e1, 0)?;
    let fitt_e1_generic = fitting_gens(ring, &ext(ring, &p, 1)?, 0)?;
    if !ideals_equal(ring, &fitt_e1, &fitt_p)? {
        problems.push(format!("Fitt(E^1(P)) != Fitt(P): {}", ideal_witness(ring, &fitt_e1, &fitt_p)?));
    }
    if !ideals_equal(ring, &fitt_e1_generic, &fitt_p)? {
        problems.push(format!("Fitt of the pruned E^1(P) != Fitt(P): {}", ideal_witness(ring, &fitt_e1_generic, &fitt_p)?));
    }
    if !ideals_equal(ring, &fitt_p, core::slice::from_ref(&det))? {
        problems.push("Fitt(P) != (det H)".into());
    }
    let ee1 = ext_of_resolution(ring, &dual_resolution(&res), 1)?;
    if !identity_iso(ring, &ee1, &p)? {
        problems.push("E^1(E^1(P)) -> P is not an isomorphism".into());
    }
    let c = if problems.is_empty() {
        CheckResult::pass("appendix.pd1", &subject)
    } else {
        CheckResult::fail("appendix.pd1", &subject, problems.join("; "))
    };
    Ok(c.with_ideal("fitt_p", format_ideal(ring, &fitt_p))
        .with_ideal("fitt_e1", format_ideal(ring, &fitt_e1))
        .with_detail("resamples", format!("{tries}")))
}

/// A candidate perfect module of grade two.
fn pd2_candidate(ring: &Ring, rng: &mut Rng, index: usize) -> Result<(&'static str, PresentedModule)> {
    let sp = sparsity();
    match index % 3 {
        0 if index == 0 => Ok(("koszul", PresentedModule::cyclic(ring, &[ring.x(0), ring.x(1)])?)),
        0 => {
            let f = rng::element(ring, rng, &sp);
            let g = rng::element(ring, rng, &sp);
            Ok(("complete-intersection", PresentedModule::cyclic(ring, &[f, g])?))
        }
        1 => {
            let a = rng::matrix(ring, rng, 3, 2, &sp);
            Ok(("hilbert-burch", PresentedModule::cyclic(ring, &a.minors(ring, 2))?))
        }
        _ => {
            let m = rng::range(rng, 1, 2);
            let a = rng::matrix(ring, rng, m + 1, m, &sp);
            Ok(("transpose-cokernel", PresentedModule::coker_of_matrix(ring, &a.transpose())?))
        }
    }
}

/// M pseudo-null with pd ≤ 2. Checks E⁰(M) = E¹(M) = 0,
/// Fitt(E²(M)) = Fitt(M), and that the identity on generators
/// E²(E²(M)) → M is an isomorphism.
fn pd2_duality(ring: &Ring, seed: u64, index: usize, budget: usize) -> Result<CheckResult> {
    let subject = format!("sample-{index}");
    if ring.d() < 2 {
        return Ok(CheckResult::not_met("appendix.pd2", &subject, "pseudo-null modules need d >= 2".into()));
    }
    let mut rng = rng_for(seed, index, 2);
    let mut found = None;
    for attempt in 0..=budget {
        let (kind, m) = pd2_candidate(ring, &mut rng, index)?;
        if m.is_zero() || !is_pseudo_null(ring, &m)? {
            continue;
        }
        let res = resolve(ring, &m, 3)?;
        if res.maps[2].is_empty() {
            found = Some((kind, m, res, attempt));
            break;
        }
    }
    let (kind, m, res, tries) = found
        .ok_or_else(|| Error::ResampleBudget { budget, reason: "no pseudo-null module of projective dimension 2".into() })?;
    let mut problems: Vec<String> = Vec::new();
    for i in 0..2 {
        if !ext_of_resolution(ring, &res, i)?.is_zero() {
            problems.push(format!("E^{i}(M) is nonzero"));
        }
    }
    let e2 = ext_of_resolution(ring, &res, 2)?;
    let fitt_m = fitting_gens(ring, &m, 0)?;
    let fitt_e2 = fitting_gens(ring, &e2, 0)?;
    if !ideals_equal(ring, &fitt_e2, &fitt_m)? {
        problems.push(format!("Fitt(E^2(M)) != Fitt(M): {}", ideal_witness(ring, &fitt_e2, &fitt_m)?));
    }
    let ee2 = ext_of_resolution(ring, &dual_resolution(&res), 2)?;
    if !identity_iso(ring, &ee2, &m)? {
        problems.push("E^2(E^2(M)) -> M is not an isomorphism".into());
    }
    let c = if problems.is_empty() {
        CheckResult::pass("appendix.pd2", &subject)
    } else {
        CheckResult::fail("appendix.pd2", &subject, problems.join("; "))
    };
    Ok(c.with_ideal("fitt_m", format_ideal(ring, &fitt_m))
        .with_ideal("fitt_e2", format_ideal(ring, &fitt_e2))
        .with_detail("kind", kind.into())
        .with_detail("resamples", format!("{tries}")))
}

/// Every maximal minor of an m × k matrix (m ≥ k), one per row selection,
/// zeros and repeats included.
fn maximal_minors(ring: &Ring, m: &Matrix, k: usize) -> Vec<RingElem> {
    let cols: Vec<usize> = (0..k).collect();
    combinations(m.nrows(), k).iter().map(|rows| ring.det(&m.submatrix(rows, &cols))).collect()
}

fn all_minors_nzd(ring: &Ring, m: &Matrix, k: usize) -> bool {
    maximal_minors(ring, m, k).iter().all(|g| ring.is_non_zero_divisor(g))
}

/// A degenerate presentation H (rows are relations on n generators) and an
/// element f ∈ Ann(coker H) that is a non-zero-divisor.
fn repair_input(ring: &Ring, rng: &mut Rng, index: usize, budget: usize) -> Result<(Matrix, RingElem)> {
    if index == 0 {
        let h = Matrix::from_rows(
            2,
            vec![vec![ring.x(0), ring.zero()], vec![ring.zero(), ring.x(0)], vec![ring.zero(), ring.zero()]],
        );
        return Ok((h, ring.x(0)));
    }
    let n = rng::range(rng, 1, 2);
    for _ in 0..=budget {
        let block = rng::matrix(ring, rng, n, n, &sparsity());
        let det = block.det(ring);
        if !ring.is_non_zero_divisor(&det) {
            continue;
        }
        // a zero row or a repeated row makes some maximal minor vanish
        let extra = if rng::range(rng, 0, 1) == 0 { vec![RingElem::zero(); n] } else { block.row(rng::index(rng, n)).to_vec() };
        let mut rows = block.rows().to_vec();
        rows.insert(rng::index(rng, n + 1), extra);
        let h = Matrix::from_rows(n, rows);
        let m = PresentedModule::new(ring, n, h.rows().to_vec())?;
        let ann = annihilator(ring, &m)?.ideal_gens();
        let f = pick_nzd(ring, &ann).unwrap_or(det);
        return Ok((h, f));
    }
    Err(Error::ResampleBudget { budget, reason: "no presentation with a non-zero-divisor block".into() })
}

/// Repairs a degenerate presentation H (m × n) by H_X = [f·I_n ; H + f·λ·X₀]
/// with random X₀ over Λ, until every n × n minor of H_X is a
/// non-zero-divisor, and checks that H_X has the same row span as H.
fn minor_repair(ring: &Ring, seed: u64, index: usize, budget: usize) -> Result<CheckResult> {
    let subject = format!("sample-{index}");
    let mut rng = rng_for(seed, index, 3);
    let (h, f) = repair_input(ring, &mut rng, index, budget)?;
    let (m, n) = (h.nrows(), h.ncols());
    let lambda_sp = Sparsity { max_terms: 2, min_degree: 0, max_degree: 1, zero_percent: 0, group_terms: false };
    let mut rounds = 0;
    let mut repaired = None;
    while rounds < budget {
        rounds += 1;
        let x0 = rng::matrix(ring, &mut rng, m, n, &lambda_sp);
        if maximal_minors(ring, &x0, n).iter().any(|g| g.is_zero()) {
            continue;
        }
        let lambda = rng::element(ring, &mut rng, &lambda_sp);
        let fl = ring.mul(&f, &lambda);
        let hx = Matrix::vstack(&Matrix::identity(ring, n).scale(ring, &f), &h.add(ring, &x0.scale(ring, &fl)));
        if all_minors_nzd(ring, &hx, n) {
            repaired = Some(hx);
            break;
        }
    }
    let Some(hx) = repaired else {
        return Ok(CheckResult::fail("appendix.minor-repair", &subject, format!("no repair within {budget} rounds"))
            .with_detail("rounds", format!("{rounds}")));
    };
    let span_h = Submodule::new(ring, n, h.rows().to_vec())?;
    let span_hx = Submodule::new(ring, n, hx.rows().to_vec())?;
    let same = span_h.equals(ring, &span_hx)?;
    let degenerate = !all_minors_nzd(ring, &h, n);
    Ok(CheckResult::from_bool("appendix.minor-repair", &subject, same, || "H_X and H have different row spans".into())
        .with_detail("rounds", format!("{rounds}"))
        .with_detail("minors", format!("{}", maximal_minors(ring, &hx, n).len()))
        .with_detail("input_degenerate", format!("{degenerate}"))
        .with_ideal("f", format_ideal(ring, &[f])))
}

/// A random torsion module over F_q[x, y].
fn torsion_candidate(ring: &Ring, rng: &mut Rng, index: usize) -> Result<(&'static str, PresentedModule)> {
    let sp = Sparsity { max_terms: 2, min_degree: 1, max_degree: 2, zero_percent: 10, group_terms: false };
    if index == 0 {
        let x = ring.x(0);
        let y = ring.x(1);
        return Ok(("hand", PresentedModule::cyclic(ring, &[ring.mul(&x, &x), ring.mul(&x, &y)])?));
    }
    match index % 3 {
        1 => {
            let h = rng::homogeneous(ring, rng, 1, 2);
            let a = rng::element(ring, rng, &sp);
            let b = rng::element(ring, rng, &sp);
            Ok(("principal-times-ideal", PresentedModule::cyclic(ring, &[ring.mul(&h, &a), ring.mul(&h, &b)])?))
        }
        2 => {
            let h = rng::element(ring, rng, &sp);
            let a = rng::element(ring, rng, &sp);
            let b = rng::element(ring, rng, &sp);
            let m1 = PresentedModule::cyclic(ring, &[h])?;
            let m2 = PresentedModule::cyclic(ring, &[a, b])?;
            Ok(("sum", PresentedModule::direct_sum(ring, &[&m1, &m2])?))
        }
        _ => {
            let rels = rng::matrix(ring, rng, 3, 2, &sp);
            Ok(("three-relations", PresentedModule::new(ring, 2, rels.rows().to_vec())?))
        }
    }
}

/// Torsion M over F_q[x, y]: char(M) = Fitt(M/M_PN),
/// char(M)·Fitt(E²(M)) = Fitt(M), and Fitt(M) = Fitt(M/M_PN)·Fitt(M_PN).
fn char_fitting(ring: &Ring, seed: u64, index: usize, budget: usize) -> Result<CheckResult> {
    let subject = format!("sample-{index}");
    if ring.d() != 2 || !ring.is_lambda() {
        return Ok(CheckResult::not_met("appendix.char-fitting", &subject, "needs F_q[x, y] without group variables".into()));
    }
    let mut rng = rng_for(seed, index, 4);
    let mut found = None;
    for attempt in 0..=budget {
        let (kind, m) = torsion_candidate(ring, &mut rng, index)?;
        if !m.is_zero() && generic_rank(ring, &m)? == 0 {
            found = Some((kind, m, attempt));
            break;
        }
    }
    let (kind, m, tries) = found.ok_or_else(|| Error::ResampleBudget { budget, reason: "no torsion module".into() })?;
    let m = prune(ring, &m)?.module;
    let cha = char_ideal(ring, &m)?;
    let fitt = fitting_ideal(ring, &m, 0)?;
    let (_, pn_inc) = pseudo_null_part(ring, &m)?;
    let pn = pn_inc.source.clone();
    let quot = m.quotient(ring, &pn_inc.images)?;
    let fitt_quot = fitting_ideal(ring, &quot, 0)?;
    let fitt_pn = fitting_ideal(ring, &pn, 0)?;
    let fitt_e2 = fitting_ideal(ring, &ext(ring, &m, 2)?, 0)?;
    let mut problems: Vec<String> = Vec::new();
    if !cha.equals(ring, &fitt_quot)? {
        problems.push(format!("char ideal {} != Fitt(M/M_PN) {}", cha.format(ring), fitt_quot.format(ring)));
    }
    let lhs = cha.mul(ring, &fitt_e2)?;
    if !lhs.equals(ring, &fitt)? {
        problems.push(format!("char * Fitt(E^2) = {} != Fitt(M) = {}", lhs.format(ring), fitt.format(ring)));
    }
    let prod = fitt_quot.mul(ring, &fitt_pn)?;
    if !prod.equals(ring, &fitt)? {
        problems.push(format!("Fitt(M/M_PN) * Fitt(M_PN) = {} != Fitt(M)", prod.format(ring)));
    }
    let c = if problems.is_empty() {
        CheckResult::pass("appendix.char-fitting", &subject)
    } else {
        CheckResult::fail("appendix.char-fitting", &subject, problems.join("; "))
    };
    let ideal = |i: &FractionalIdeal| i.format(ring);
    Ok(c.with_ideal("char", ideal(&cha))
        .with_ideal("fitt_m", ideal(&fitt))
        .with_ideal("fitt_e2", ideal(&fitt_e2))
        .with_detail("kind", kind.into())
        .with_detail("resamples", format!("{tries}")))
}

/// The four appendix checks for sample `index`.
pub fn appendix_sample(ring: &Ring, seed: u64, index: usize, budget: usize) -> Vec<CheckResult> {
    let subject = format!("sample-{index}");
    vec![
        guarded("appendix.pd1", &subject, || pd1_fitting(ring, seed, index, budget)),
        guarded("appendix.pd2", &subject, || pd2_duality(ring, seed, index, budget)),
        guarded("appendix.minor-repair", &subject, || minor_repair(ring, seed, index, budget)),
        guarded("appendix.char-fitting", &subject, || char_fitting(ring, seed, index, budget)),
    ]
}

/// Runs `count` samples sequentially.
pub fn appendix_suite(ring: &Ring, seed: u64, count: usize, budget: usize) -> Vec<CheckResult> {
    (0..count).flat_map(|i| appendix_sample(ring, seed, i, budget)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use crate::ring::RingSpec;

    #[test]
    fn hand_cases() {
        let r = Ring::new(RingSpec::new(3, 2, &[])).unwrap();
        let checks = appendix_sample(&r, 7, 0, 200);
        for c in &checks {
            assert_eq!(c.verdict, Verdict::Pass, "{c:?}");
        }
        let ideals = checks[0].ideals.as_ref().unwrap();
        assert_eq!(ideals["fitt_p"], "(x^2)");
        let char_fitting = checks[3].ideals.as_ref().unwrap();
        assert_eq!(char_fitting["char"], "(x)");
        assert_eq!(checks[2].details["minors"], "10");

        let r1 = Ring::new(RingSpec::new(3, 1, &[])).unwrap();
        let checks = appendix_sample(&r1, 7, 0, 200);
        assert_eq!(checks[0].verdict, Verdict::Pass);
        assert_eq!(checks[1].verdict, Verdict::HypothesisNotMet);
        assert_eq!(checks[2].verdict, Verdict::Pass);
        assert_eq!(checks[3].verdict, Verdict::HypothesisNotMet);
    }
}
