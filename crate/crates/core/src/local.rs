//! Localization at monomial primes q = (x_i : i ∈ Q) of Λ: vanishing,
//! ideal equality, local freeness, projective-dimension probes and lengths.
//!
//! A module M satisfies M_q = 0 iff Ann_Λ(M) ⊄ q. Since q is generated by
//! variables, an element of Λ lies outside q iff it has a monomial avoiding
//! every variable of Q.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{
    contract_to_lambda, ideal_quotient, intersect, saturate, syzygies, FreeVector, Gb, Submodule, DEFAULT_SIZE_LIMIT,
};
use crate::matrix::combinations;
use crate::module::{
    annihilator_lambda, annihilator_of, fitting_gens, prune, support_dim, torsion_at_ideal, FractionalIdeal, PresentedModule,
};
use crate::ring::{Mono, MonoOrder, Ring, RingElem};

/// A prime of Λ generated by a set of polynomial variables. The empty set is
/// the generic point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonomialPrime {
    vars: Vec<usize>,
}

impl MonomialPrime {
    pub fn new(ring: &Ring, vars: &[usize]) -> Result<Self> {
        let mut vars = vars.to_vec();
        vars.sort_unstable();
        vars.dedup();
        if let Some(&v) = vars.iter().find(|&&v| v >= ring.d()) {
            return Err(Error::Precondition(format!("variable index {v} outside 0..{}", ring.d())));
        }
        Ok(MonomialPrime { vars })
    }

    pub fn generic() -> Self {
        MonomialPrime { vars: Vec::new() }
    }

    /// Parses a comma-separated list of variable names such as `x,y`.
    pub fn parse(ring: &Ring, src: &str) -> Result<Self> {
        let mut vars = Vec::new();
        for name in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let i = ring
                .var_index(name)
                .filter(|&i| i < ring.d())
                .ok_or_else(|| Error::Parse(format!("unknown polynomial variable `{name}`")))?;
            vars.push(i);
        }
        Self::new(ring, &vars)
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn height(&self) -> usize {
        self.vars.len()
    }

    /// Bit mask of the variables of q.
    pub fn mask(&self) -> u16 {
        self.vars.iter().fold(0u16, |m, &v| m | (1 << v))
    }

    pub fn generators(&self, ring: &Ring) -> Vec<RingElem> {
        self.vars.iter().map(|&v| ring.x(v)).collect()
    }

    pub fn format(&self, ring: &Ring) -> String {
        if self.vars.is_empty() {
            return "(0)".to_string();
        }
        let names: Vec<String> = self.vars.iter().map(|&v| ring.var_name(v)).collect();
        format!("({})", names.join(","))
    }

    /// q ⊆ other as ideals.
    pub fn is_subset_of(&self, other: &MonomialPrime) -> bool {
        self.vars.iter().all(|v| other.vars.contains(v))
    }

    /// Every monomial prime of height at most `h`, ordered by height then
    /// lexicographically.
    pub fn all_up_to_height(ring: &Ring, h: usize) -> Vec<MonomialPrime> {
        (0..=h.min(ring.d())).flat_map(|k| combinations(ring.d(), k)).map(|vars| MonomialPrime { vars }).collect()
    }

    /// An element of Λ lies outside q.
    pub fn avoids(&self, a: &RingElem) -> bool {
        let mask = self.mask();
        a.terms().iter().any(|(m, _)| m.degree_in(mask) == 0)
    }

    /// Some generator of the ideal (of Λ) lies outside q, so the ideal
    /// becomes the unit ideal after localization.
    pub fn ideal_avoids(&self, gens: &[RingElem]) -> bool {
        gens.iter().any(|g| self.avoids(g))
    }
}

/// M_q = 0.
pub fn local_vanishes(ring: &Ring, m: &PresentedModule, q: &MonomialPrime) -> Result<bool> {
    if m.is_zero() {
        return Ok(true);
    }
    Ok(q.ideal_avoids(&annihilator_lambda(ring, m)?))
}

/// The submodule of `m` generated by `vs` vanishes after localizing at q.
pub fn local_vanishes_in(ring: &Ring, m: &PresentedModule, vs: &[FreeVector], q: &MonomialPrime) -> Result<bool> {
    if vs.is_empty() {
        return Ok(true);
    }
    let ann = annihilator_of(ring, m, vs)?;
    Ok(q.ideal_avoids(&contract_to_lambda(ring, &ann)?))
}

/// I R_q = R_q for an ideal I ⊆ R, i.e. I ∩ Λ ⊄ q.
pub fn locally_unit(ring: &Ring, gens: &[RingElem], q: &MonomialPrime) -> Result<bool> {
    let sub = Submodule::ideal(ring, gens)?;
    Ok(q.ideal_avoids(&contract_to_lambda(ring, &sub)?))
}

/// I_q = J_q for ideals of R given by generators.
pub fn local_ideal_gens_equal(ring: &Ring, a: &[RingElem], b: &[RingElem], q: &MonomialPrime) -> Result<bool> {
    let ia = Submodule::ideal(ring, a)?;
    let ib = Submodule::ideal(ring, b)?;
    let ab = contract_to_lambda(ring, &ideal_quotient(ring, &ia, b)?)?;
    if !q.ideal_avoids(&ab) {
        return Ok(false);
    }
    let ba = contract_to_lambda(ring, &ideal_quotient(ring, &ib, a)?)?;
    Ok(q.ideal_avoids(&ba))
}

/// I_q = J_q for fractional ideals, compared after clearing denominators.
pub fn local_ideal_equal(ring: &Ring, i: &FractionalIdeal, j: &FractionalIdeal, q: &MonomialPrime) -> Result<bool> {
    let a: Vec<RingElem> = i.numerator.iter().map(|g| ring.mul(g, &j.denominator)).collect();
    let b: Vec<RingElem> = j.numerator.iter().map(|g| ring.mul(g, &i.denominator)).collect();
    local_ideal_gens_equal(ring, &a, &b, q)
}

/// The rank of M_q if M_q is a free R_q-module, decided by Fitting ideals:
/// M_q is free of rank r when Fitt_r(M)_q is the unit ideal and
/// Fitt_{r−1}(M) = 0. Over a ring R_q with several connected components this
/// test is conservative (it may report `None` for a projective module of
/// non-constant rank).
pub fn locally_free_rank(ring: &Ring, m: &PresentedModule, q: &MonomialPrime) -> Result<Option<usize>> {
    let pm = prune(ring, m)?.module;
    for r in 0..=pm.ngens() {
        if locally_unit(ring, &fitting_gens(ring, &pm, r)?, q)? {
            if r == 0 {
                return Ok(Some(0));
            }
            let lower = fitting_gens(ring, &pm, r - 1)?;
            return Ok(lower.iter().all(RingElem::is_zero).then_some(r));
        }
    }
    Ok(None)
}

/// Result of a projective-dimension probe at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum PdProbe {
    /// M_q = 0, so pd is −∞.
    Vanishes,
    /// pd_{R_q}(M_q) = k.
    Finite(usize),
    /// No syzygy up to the bound became projective.
    AtLeast(usize),
}

impl PdProbe {
    /// pd ≤ k (a vanishing module qualifies).
    pub fn at_most(&self, k: usize) -> bool {
        match *self {
            PdProbe::Vanishes => true,
            PdProbe::Finite(p) => p <= k,
            PdProbe::AtLeast(_) => false,
        }
    }

    pub fn format(&self) -> String {
        match *self {
            PdProbe::Vanishes => "-inf".to_string(),
            PdProbe::Finite(p) => format!("{p}"),
            PdProbe::AtLeast(b) => format!(">={b}"),
        }
    }
}

/// Default bound for [`local_pd_probe`].
pub const DEFAULT_PD_BOUND: usize = 6;

/// pd_{R_q}(M_q) by walking the syzygy chain S_0 = M, S_1, S_2, … and
/// returning the least k with (S_k)_q free.
pub fn local_pd_probe(ring: &Ring, m: &PresentedModule, q: &MonomialPrime, bound: usize) -> Result<PdProbe> {
    if bound == 0 {
        return Err(Error::Precondition("pd probe bound must be at least 1".to_string()));
    }
    if local_vanishes(ring, m, q)? {
        return Ok(PdProbe::Vanishes);
    }
    let mut cur = prune(ring, m)?.module;
    for k in 0..bound {
        if locally_free_rank(ring, &cur, q)?.is_some() {
            return Ok(PdProbe::Finite(k));
        }
        // next syzygy module: the submodule spanned by the relations
        let rels: Vec<Vec<RingElem>> = cur.relations().iter().filter(|r| r.iter().any(|e| !e.is_zero())).cloned().collect();
        let syz = syzygies(ring, &rels, cur.ngens())?;
        cur = prune(ring, &PresentedModule::new(ring, rels.len(), syz)?)?.module;
    }
    Ok(PdProbe::AtLeast(bound))
}

/// M_q has finite length: either M_q = 0 or q is minimal over Ann_Λ(M),
/// which holds iff (Ann_Λ(M) : q^∞) ⊄ q.
pub fn finite_length_at(ring: &Ring, m: &PresentedModule, q: &MonomialPrime) -> Result<bool> {
    if local_vanishes(ring, m, q)? {
        return Ok(true);
    }
    let ann = Submodule::ideal(ring, &annihilator_lambda(ring, m)?)?;
    let mut acc: Option<Submodule> = None;
    for g in q.generators(ring) {
        let sat = saturate(ring, &ann, &g)?;
        acc = Some(match acc {
            None => sat,
            Some(a) => intersect(ring, &a, &sat)?,
        });
    }
    match acc {
        // the generic point is minimal over every proper ideal it contains
        None => Ok(true),
        Some(a) => Ok(q.ideal_avoids(&contract_to_lambda(ring, &a)?)),
    }
}

/// length_{Λ_q}(M_q), for M whose localization at q has finite length.
///
/// The q-primary part N = 0 :_M q^∞ is computed first; its length equals the
/// dimension over K = Frac(Λ/q-free variables) of N ⊗ K, read off from the
/// standard monomials of a Groebner basis in a block order with the
/// variables of q and the group variables in the high block.
pub fn length_at(ring: &Ring, m: &PresentedModule, q: &MonomialPrime) -> Result<usize> {
    if !finite_length_at(ring, m, q)? {
        let d = ring.d() as i32;
        let sdim = support_dim(ring, m)?;
        return Err(Error::Precondition(format!(
            "module has infinite length at {} (codimension {}, height {})",
            q.format(ring),
            d - sdim,
            q.height()
        )));
    }
    if local_vanishes(ring, m, q)? {
        return Ok(0);
    }
    let (n, _) = torsion_at_ideal(ring, m, &q.generators(ring))?;
    let high = q.mask() | ring.t_mask();
    let gb = Gb::with_order(ring, n.ngens(), n.relations(), MonoOrder::Block { high }, DEFAULT_SIZE_LIMIT)?;
    let leads = gb.leading_terms();
    let high_vars: Vec<usize> = (0..16).filter(|i| high & (1 << i) != 0).collect();
    let mut total = 0usize;
    for pos in 0..n.ngens() {
        let here: Vec<Mono> = leads
            .iter()
            .filter(|(p, _)| *p == pos)
            .map(|(_, mono)| {
                let mut h = Mono::ONE;
                for &v in &high_vars {
                    h.0[v] = mono.0[v];
                }
                h
            })
            .collect();
        total += count_standard(&here, &high_vars)?;
    }
    Ok(total)
}

/// Number of monomials in `vars` not divisible by any of `leads`.
fn count_standard(leads: &[Mono], vars: &[usize]) -> Result<usize> {
    const MAX_DEGREE: usize = 512;
    let mut count = 0;
    let mut layer = vec![Mono::ONE];
    for _ in 0..MAX_DEGREE {
        let standard: Vec<Mono> = layer.into_iter().filter(|m| !leads.iter().any(|l| l.divides(m))).collect();
        if standard.is_empty() {
            return Ok(count);
        }
        count += standard.len();
        let mut next: Vec<Mono> = Vec::new();
        for m in &standard {
            for &v in vars {
                let mut n = *m;
                n.0[v] += 1;
                if !next.contains(&n) {
                    next.push(n);
                }
            }
        }
        layer = next;
    }
    Err(Error::Unsupported("localized module does not have finite length".to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn lam() -> Ring {
        Ring::new(RingSpec::new(3, 2, &[])).unwrap()
    }

    fn cyc(r: &Ring, gens: &[&str]) -> PresentedModule {
        let g: Vec<RingElem> = gens.iter().map(|s| r.parse(s).unwrap()).collect();
        PresentedModule::cyclic(r, &g).unwrap()
    }

    #[test]
    fn vanishing() {
        let r = lam();
        let x = MonomialPrime::parse(&r, "x").unwrap();
        let y = MonomialPrime::parse(&r, "y").unwrap();
        let m = MonomialPrime::parse(&r, "x,y").unwrap();
        let mx = cyc(&r, &["x"]);
        assert!(local_vanishes(&r, &mx, &y).unwrap());
        assert!(!local_vanishes(&r, &mx, &x).unwrap());
        assert!(local_vanishes(&r, &cyc(&r, &["x", "y"]), &x).unwrap());
        assert!(!local_vanishes(&r, &cyc(&r, &["x", "y"]), &m).unwrap());
        assert_eq!(MonomialPrime::all_up_to_height(&r, 2).len(), 4);
        assert_eq!(m.format(&r), "(x,y)");
    }

    #[test]
    fn ideal_equality() {
        let r = lam();
        let a: Vec<RingElem> = ["x^2", "x*y"].iter().map(|s| r.parse(s).unwrap()).collect();
        let b = vec![r.x(0)];
        let x = MonomialPrime::parse(&r, "x").unwrap();
        let m = MonomialPrime::parse(&r, "x,y").unwrap();
        assert!(local_ideal_gens_equal(&r, &a, &b, &x).unwrap());
        assert!(!local_ideal_gens_equal(&r, &a, &b, &m).unwrap());
        assert!(local_ideal_gens_equal(&r, &a, &a, &m).unwrap());
    }

    #[test]
    fn pd_probes() {
        let r = lam();
        let m = MonomialPrime::parse(&r, "x,y").unwrap();
        assert_eq!(local_pd_probe(&r, &cyc(&r, &["x", "y"]), &m, 6).unwrap(), PdProbe::Finite(2));
        assert_eq!(local_pd_probe(&r, &cyc(&r, &["x"]), &m, 6).unwrap(), PdProbe::Finite(1));
        assert_eq!(local_pd_probe(&r, &PresentedModule::free(&r, 2), &m, 6).unwrap(), PdProbe::Finite(0));
        let y = MonomialPrime::parse(&r, "y").unwrap();
        assert_eq!(local_pd_probe(&r, &cyc(&r, &["x"]), &y, 6).unwrap(), PdProbe::Vanishes);
        let g = Ring::new(RingSpec::new(3, 2, &[3])).unwrap();
        let mg = MonomialPrime::parse(&g, "x,y").unwrap();
        let tm = PresentedModule::cyclic(&g, &[g.parse("t-1").unwrap()]).unwrap();
        assert_eq!(local_pd_probe(&g, &tm, &mg, 4).unwrap(), PdProbe::AtLeast(4));
    }

    #[test]
    fn lengths() {
        let r = lam();
        let m = MonomialPrime::parse(&r, "x,y").unwrap();
        assert_eq!(length_at(&r, &cyc(&r, &["x", "y"]), &m).unwrap(), 1);
        assert_eq!(length_at(&r, &cyc(&r, &["x^2", "y"]), &m).unwrap(), 2);
        assert!(length_at(&r, &cyc(&r, &["x"]), &m).is_err());
        let x = MonomialPrime::parse(&r, "x").unwrap();
        assert_eq!(length_at(&r, &cyc(&r, &["x^2"]), &x).unwrap(), 2);
        assert_eq!(length_at(&r, &cyc(&r, &["x^2*y"]), &x).unwrap(), 2);
        // the component at (x, y-1) is not counted at the origin
        assert_eq!(length_at(&r, &cyc(&r, &["x^2", "x*y", "y^2-y"]), &m).unwrap(), 2);
        // a codimension-one component away from q does not matter
        assert_eq!(length_at(&r, &cyc(&r, &["x*y-x", "y^2-y"]), &m).unwrap(), 1);
        assert!(!finite_length_at(&r, &cyc(&r, &["x*y", "x^2"]), &m).unwrap());
    }
}
