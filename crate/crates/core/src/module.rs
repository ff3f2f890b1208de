//! Finitely presented R-modules and the module-level toolkit: kernels,
//! cokernels and images of homomorphisms, Hom and duals, Ext, exterior powers
//! and their biduals, torsion / pseudo-null / finite parts, Fitting ideals,
//! annihilators, generic rank and characteristic ideals.
//!
//! A module is presented as R^b / N with N generated by relation rows. All
//! module elements are vectors in R^b; homomorphisms record the images of the
//! generators.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::groebner::{self, combine, kernel_mod, FreeVector, Gb, Lifter, Submodule};
use crate::matrix::{combinations, minors_of_rows, Matrix};
use crate::ring::{Automorphism, Ring, RingElem};

/// R^b / ⟨relations⟩ with a cached Groebner basis of the relation module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    ngens: usize,
    rels: Vec<FreeVector>,
    gb: Gb,
}

fn unit(ring: &Ring, n: usize, i: usize) -> FreeVector {
    let mut v = vec![RingElem::zero(); n];
    v[i] = ring.one();
    v
}

fn is_zero_vec(v: &[RingElem]) -> bool {
    v.iter().all(|e| e.is_zero())
}

impl PresentedModule {
    pub fn new(ring: &Ring, ngens: usize, rels: Vec<FreeVector>) -> Result<Self> {
        for r in &rels {
            if r.len() != ngens {
                return Err(Error::RankMismatch { expected: ngens, found: r.len() });
            }
        }
        let rels: Vec<FreeVector> = rels.into_iter().filter(|r| !is_zero_vec(r)).collect();
        let gb = Gb::new(ring, ngens, &rels)?;
        Ok(PresentedModule { ngens, rels, gb })
    }

    /// The free module R^n.
    pub fn free(ring: &Ring, n: usize) -> Self {
        Self::new(ring, n, Vec::new()).expect("free module")
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::free(ring, 0)
    }

    /// The cyclic module R/I.
    pub fn cyclic(ring: &Ring, ideal: &[RingElem]) -> Result<Self> {
        Self::new(ring, 1, ideal.iter().map(|g| vec![g.clone()]).collect())
    }

    /// Cokernel of the matrix `m` viewed as a map R^{ncols} → R^{nrows}.
    pub fn coker_of_matrix(ring: &Ring, m: &Matrix) -> Result<Self> {
        Self::new(ring, m.nrows(), m.columns())
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &[FreeVector] {
        &self.rels
    }

    pub fn relation_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ngens, self.rels.clone())
    }

    pub fn gb(&self) -> &Gb {
        &self.gb
    }

    pub fn reduce(&self, ring: &Ring, v: &[RingElem]) -> Result<FreeVector> {
        self.gb.reduce(ring, v)
    }

    /// True if the element `v` ∈ R^b is zero in the module.
    pub fn is_zero_element(&self, ring: &Ring, v: &[RingElem]) -> Result<bool> {
        self.gb.contains(ring, v)
    }

    /// True if the module is zero.
    pub fn is_zero(&self) -> bool {
        self.ngens == 0 || self.gb.is_full()
    }

    /// Direct sum of modules with block-diagonal relations.
    pub fn direct_sum(ring: &Ring, parts: &[&PresentedModule]) -> Result<Self> {
        let total: usize = parts.iter().map(|m| m.ngens).sum();
        let mut rels = Vec::new();
        let mut off = 0;
        for m in parts {
            for r in &m.rels {
                let mut v = vec![RingElem::zero(); total];
                for (i, e) in r.iter().enumerate() {
                    v[off + i] = e.clone();
                }
                rels.push(v);
            }
            off += m.ngens;
        }
        Self::new(ring, total, rels)
    }

    /// The twisted module M^σ: σ applied to every relation entry.
    pub fn twist(&self, ring: &Ring, sigma: &Automorphism) -> Result<Self> {
        let rels = self.rels.iter().map(|r| r.iter().map(|e| sigma.apply(ring, e)).collect()).collect();
        Self::new(ring, self.ngens, rels)
    }

    /// Submodule generated by `vs`, with its inclusion map.
    pub fn submodule(&self, ring: &Ring, vs: Vec<FreeVector>) -> Result<(PresentedModule, ModuleHom)> {
        let rels = kernel_mod(ring, &vs, &self.rels, self.ngens)?;
        let sub = PresentedModule::new(ring, vs.len(), rels)?;
        let inc = ModuleHom::new_unchecked(sub.clone(), self.clone(), vs);
        Ok((sub, inc))
    }

    /// Quotient by the submodule generated by `vs`.
    pub fn quotient(&self, ring: &Ring, vs: &[FreeVector]) -> Result<PresentedModule> {
        let mut rels = self.rels.clone();
        rels.extend(vs.iter().cloned());
        PresentedModule::new(ring, self.ngens, rels)
    }

    /// Submodule equality ⟨us⟩ = ⟨vs⟩ inside this module.
    pub fn submodules_equal(&self, ring: &Ring, us: &[FreeVector], vs: &[FreeVector]) -> Result<bool> {
        Ok(self.submodule_contains(ring, vs, us)? && self.submodule_contains(ring, us, vs)?)
    }

    /// True if every vector of `inner` lies in ⟨outer⟩ + relations.
    pub fn submodule_contains(&self, ring: &Ring, outer: &[FreeVector], inner: &[FreeVector]) -> Result<bool> {
        let mut gens = self.rels.clone();
        gens.extend(outer.iter().cloned());
        let gb = Gb::new(ring, self.ngens, &gens)?;
        gb.contains_all(ring, inner)
    }

    /// Generators of the module as unit vectors.
    pub fn generators(&self, ring: &Ring) -> Vec<FreeVector> {
        (0..self.ngens).map(|i| unit(ring, self.ngens, i)).collect()
    }
}

/// A homomorphism of presented modules given by the images of the source
/// generators (vectors in the target's generator coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    pub source: PresentedModule,
    pub target: PresentedModule,
    pub images: Vec<FreeVector>,
}

impl ModuleHom {
    /// Builds a homomorphism, verifying that relations of the source map into
    /// the relations of the target.
    pub fn new(ring: &Ring, source: PresentedModule, target: PresentedModule, images: Vec<FreeVector>) -> Result<Self> {
        if images.len() != source.ngens {
            return Err(Error::RankMismatch { expected: source.ngens, found: images.len() });
        }
        for v in &images {
            if v.len() != target.ngens {
                return Err(Error::RankMismatch { expected: target.ngens, found: v.len() });
            }
        }
        let h = ModuleHom { source, target, images };
        if let Some(i) = h.certificate_failure(ring)? {
            return Err(Error::NotWellDefined(format!("relation {i} does not map into the target relations")));
        }
        Ok(h)
    }

    pub(crate) fn new_unchecked(source: PresentedModule, target: PresentedModule, images: Vec<FreeVector>) -> Self {
        ModuleHom { source, target, images }
    }

    /// Index of the first source relation whose image is nonzero, if any.
    pub fn certificate_failure(&self, ring: &Ring) -> Result<Option<usize>> {
        let imgs: Vec<FreeVector> = self.source.rels.iter().map(|r| combine(ring, r, &self.images, self.target.ngens)).collect();
        let red = self.target.gb.reduce_many(ring, &imgs)?;
        Ok(red.iter().position(|v| !is_zero_vec(v)))
    }

    pub fn identity(ring: &Ring, m: &PresentedModule) -> Self {
        ModuleHom::new_unchecked(m.clone(), m.clone(), m.generators(ring))
    }

    pub fn zero(source: &PresentedModule, target: &PresentedModule) -> Self {
        let images = vec![vec![RingElem::zero(); target.ngens]; source.ngens];
        ModuleHom::new_unchecked(source.clone(), target.clone(), images)
    }

    /// Image of an element of the source.
    pub fn apply(&self, ring: &Ring, v: &[RingElem]) -> FreeVector {
        combine(ring, v, &self.images, self.target.ngens)
    }

    /// Composition `other ∘ self`.
    pub fn then(&self, ring: &Ring, other: &ModuleHom) -> ModuleHom {
        let images = self.images.iter().map(|v| other.apply(ring, v)).collect();
        ModuleHom::new_unchecked(self.source.clone(), other.target.clone(), images)
    }

    /// Equality as maps: images agree modulo the target relations.
    pub fn equals(&self, ring: &Ring, other: &ModuleHom) -> Result<bool> {
        let diffs: Vec<FreeVector> =
            self.images.iter().zip(&other.images).map(|(a, b)| a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()).collect();
        self.target.gb.contains_all(ring, &diffs)
    }

    pub fn is_zero(&self, ring: &Ring) -> Result<bool> {
        self.target.gb.contains_all(ring, &self.images)
    }

    pub fn is_injective(&self, ring: &Ring) -> Result<bool> {
        Ok(kernel_gens(ring, self)?.is_empty())
    }

    pub fn is_surjective(&self, ring: &Ring) -> Result<bool> {
        Ok(cokernel(ring, self)?.is_zero())
    }

    pub fn is_isomorphism(&self, ring: &Ring) -> Result<bool> {
        Ok(self.is_injective(ring)? && self.is_surjective(ring)?)
    }
}

/// Cokernel: target generators, target relations plus the images.
pub fn cokernel(ring: &Ring, h: &ModuleHom) -> Result<PresentedModule> {
    h.target.quotient(ring, &h.images)
}

/// Image as a submodule of the target, with its inclusion.
pub fn image(ring: &Ring, h: &ModuleHom) -> Result<(PresentedModule, ModuleHom)> {
    h.target.submodule(ring, h.images.clone())
}

/// Kernel as a submodule of the source, with its inclusion.
pub fn kernel(ring: &Ring, h: &ModuleHom) -> Result<(PresentedModule, ModuleHom)> {
    let k = kernel_gens(ring, h)?;
    h.source.submodule(ring, k)
}

/// Generators of the kernel as vectors over the source generators, without
/// computing relations among them. Empty iff the map is injective.
pub fn kernel_gens(ring: &Ring, h: &ModuleHom) -> Result<Vec<FreeVector>> {
    let k = kernel_mod(ring, &h.images, &h.target.rels, h.target.ngens)?;
    let red = h.source.gb.reduce_many(ring, &k)?;
    Ok(k.into_iter().zip(red).filter(|(_, r)| !is_zero_vec(r)).map(|(v, _)| v).collect())
}

/// Result of [`prune`]: an equivalent presentation with fewer generators and
/// mutually inverse maps between the old and new generators.
#[derive(Clone, Debug)]
pub struct Pruned {
    pub module: PresentedModule,
    /// Image of each old generator in the new coordinates.
    pub old_to_new: Vec<FreeVector>,
    /// Image of each new generator in the old coordinates.
    pub new_to_old: Vec<FreeVector>,
}

impl Pruned {
    pub fn forward(&self, ring: &Ring, old: &PresentedModule) -> ModuleHom {
        let _ = ring;
        ModuleHom::new_unchecked(old.clone(), self.module.clone(), self.old_to_new.clone())
    }

    pub fn backward(&self, old: &PresentedModule) -> ModuleHom {
        ModuleHom::new_unchecked(self.module.clone(), old.clone(), self.new_to_old.clone())
    }
}

/// Removes generators that a relation expresses through the others (unit
/// pivots c·t^e), including pivots exposed by the Groebner basis.
pub fn prune(ring: &Ring, m: &PresentedModule) -> Result<Pruned> {
    let n0 = m.ngens;
    let mut alive: Vec<usize> = (0..n0).collect();
    let mut rows: Vec<FreeVector> = m.rels.clone();
    // old_to_new in current coordinates (columns indexed by `alive`)
    let mut o2n: Vec<FreeVector> = (0..n0).map(|i| unit(ring, n0, i)).collect();
    let mut gb_round_done = false;
    loop {
        let mut progress = false;
        loop {
            let pivot =
                rows.iter().enumerate().find_map(|(ri, r)| r.iter().position(|e| ring.is_monomial_unit(e)).map(|j| (ri, j)));
            let Some((ri, j)) = pivot else { break };
            progress = true;
            let prow = rows.swap_remove(ri);
            let uinv = ring.monomial_unit_inverse(&prow[j]).expect("unit");
            // e_j = -u^{-1} Σ_{i≠j} prow_i e_i
            let w: FreeVector = prow.iter().map(|e| ring.neg(&ring.mul(&uinv, e))).collect();
            let elim = |v: &mut FreeVector| {
                let c = v[j].clone();
                if !c.is_zero() {
                    for (i, wi) in w.iter().enumerate() {
                        if i != j && !wi.is_zero() {
                            v[i] = ring.add(&v[i], &ring.mul(&c, wi));
                        }
                    }
                }
                v.remove(j);
            };
            for r in rows.iter_mut() {
                elim(r);
            }
            for v in o2n.iter_mut() {
                elim(v);
            }
            alive.remove(j);
            rows.retain(|r| !is_zero_vec(r));
        }
        if gb_round_done && !progress {
            break;
        }
        // look for relations with a constant leading entry in the basis
        let gb = Gb::new(ring, alive.len(), &rows)?;
        let extra: Vec<FreeVector> =
            gb.elements(ring).into_iter().filter(|v| v.iter().any(|e| ring.is_monomial_unit(e))).collect();
        gb_round_done = true;
        if extra.is_empty() {
            break;
        }
        rows.extend(extra);
    }
    // drop duplicate rows
    let mut uniq: Vec<FreeVector> = Vec::new();
    for r in rows {
        if !uniq.contains(&r) {
            uniq.push(r);
        }
    }
    let module = PresentedModule::new(ring, alive.len(), uniq)?;
    let new_to_old = alive.iter().map(|&i| unit(ring, n0, i)).collect();
    Ok(Pruned { module, old_to_new: o2n, new_to_old })
}

/// Homology of R^p --a--> R^q --b--> R^r at the middle, where `a_cols` are the
/// images of the basis of R^p and `b_cols` those of R^q. Returns the
/// presented module together with the kernel generators in R^q.
pub fn homology(
    ring: &Ring,
    q: usize,
    a_cols: &[FreeVector],
    b_cols: &[FreeVector],
    r: usize,
) -> Result<(PresentedModule, Vec<FreeVector>)> {
    if q == 0 {
        return Ok((PresentedModule::zero(ring), Vec::new()));
    }
    let kgens: Vec<FreeVector> = if b_cols.iter().all(|c| is_zero_vec(c)) {
        (0..q).map(|i| unit(ring, q, i)).collect()
    } else {
        kernel_mod(ring, b_cols, &[], r)?
    };
    if kgens.is_empty() {
        return Ok((PresentedModule::zero(ring), Vec::new()));
    }
    let lifter = Lifter::new(ring, &kgens, &[], q)?;
    let mut rels = lifter.kernel(ring);
    for a in a_cols {
        match lifter.lift(ring, a)? {
            Some(c) => rels.push(c),
            None => {
                return Err(Error::NotAComplex(0));
            }
        }
    }
    Ok((PresentedModule::new(ring, kgens.len(), rels)?, kgens))
}

/// A free resolution ... → F_2 → F_1 → F_0 → M → 0 in row convention:
/// `maps[j]` lists the images in F_j of the basis of F_{j+1}.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub ranks: Vec<usize>,
    pub maps: Vec<Vec<FreeVector>>,
}

/// Resolution of length `len` (computes F_0..F_len).
pub fn resolve(ring: &Ring, m: &PresentedModule, len: usize) -> Result<Resolution> {
    let mut ranks = vec![m.ngens];
    let mut maps: Vec<Vec<FreeVector>> = Vec::new();
    let mut cur: Vec<FreeVector> = m.rels.clone();
    for j in 0..len {
        ranks.push(cur.len());
        maps.push(cur.clone());
        if j + 1 == len {
            break;
        }
        let next = if cur.is_empty() { Vec::new() } else { groebner::syzygies(ring, &cur, ranks[j])? };
        let next = minimize_generators(ring, next, cur.len())?;
        cur = next;
    }
    Ok(Resolution { ranks, maps })
}

/// Drops generators that lie in the span of the others (cheap pass).
fn minimize_generators(ring: &Ring, gens: Vec<FreeVector>, rank: usize) -> Result<Vec<FreeVector>> {
    let gens: Vec<FreeVector> = gens.into_iter().filter(|g| !is_zero_vec(g)).collect();
    if gens.len() <= 1 {
        return Ok(gens);
    }
    let mut keep: Vec<FreeVector> = gens.clone();
    let mut i = keep.len();
    while i > 0 {
        i -= 1;
        let others: Vec<FreeVector> = keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| v.clone()).collect();
        let gb = Gb::new(ring, rank, &others)?;
        if gb.contains(ring, &keep[i])? {
            keep.remove(i);
        }
    }
    Ok(keep)
}

/// Ext^i_R(M, R), computed from a free resolution dualized by transposition.
pub fn ext(ring: &Ring, m: &PresentedModule, i: usize) -> Result<PresentedModule> {
    let m = prune(ring, m)?.module;
    let res = resolve(ring, &m, i + 1)?;
    Ok(prune(ring, &ext_of_resolution(ring, &res, i)?)?.module)
}

/// H^i of the dual of a resolution F_• (which must have at least i + 1
/// maps), presented on the basis of F_i* without simplification, so that the
/// generators are the coordinate functionals of F_i.
pub fn ext_of_resolution(ring: &Ring, res: &Resolution, i: usize) -> Result<PresentedModule> {
    if res.maps.len() <= i {
        return Err(Error::Precondition(format!("resolution has {} maps, need {}", res.maps.len(), i + 1)));
    }
    // δ_j : F_j* → F_{j+1}* sends the j-th unit functional to column j of the
    // matrix whose rows are maps[j].
    let delta_cols = |j: usize| -> Vec<FreeVector> {
        let rows = &res.maps[j];
        (0..res.ranks[j]).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
    };
    let b_cols = delta_cols(i);
    let a_cols = if i == 0 { Vec::new() } else { delta_cols(i - 1) };
    Ok(homology(ring, res.ranks[i], &a_cols, &b_cols, res.ranks[i + 1])?.0)
}

/// The dual complex F_0* → F_1* → … → F_n* of a resolution of length n,
/// read as a resolution G_0 = F_n*, G_1 = F_{n−1}*, …, G_n = F_0* (of
/// E^n(M) when M is perfect of grade n). Trailing zero terms of the input
/// are dropped and one zero term is appended to the output.
pub fn dual_resolution(res: &Resolution) -> Resolution {
    let mut n = res.maps.len();
    while n > 0 && res.ranks[n] == 0 {
        n -= 1;
    }
    let mut ranks: Vec<usize> = res.ranks[..=n].iter().rev().cloned().collect();
    ranks.push(0);
    let mut maps: Vec<Vec<FreeVector>> = (0..n)
        .map(|k| {
            // G_{k+1} = F_j* → G_k = F_{j+1}* with j = n − k − 1: the unit
            // functionals of F_j map to the columns of maps[j].
            let j = n - k - 1;
            let rows = &res.maps[j];
            (0..res.ranks[j]).map(|c| rows.iter().map(|r| r[c].clone()).collect::<FreeVector>()).collect()
        })
        .collect();
    maps.push(Vec::new());
    Resolution { ranks, maps }
}

/// Factors `h : X → Y` through an injective `inc : K → Y` whose image
/// contains the image of `h`, returning `X → K`.
pub fn factor_through(ring: &Ring, h: &ModuleHom, inc: &ModuleHom) -> Result<ModuleHom> {
    let y = &inc.target;
    let lifter = if inc.images.is_empty() { None } else { Some(Lifter::new(ring, &inc.images, &y.rels, y.ngens)?) };
    let mut images = Vec::with_capacity(h.images.len());
    for v in &h.images {
        let c = match &lifter {
            Some(lf) => lf.lift(ring, v)?,
            None => y.is_zero_element(ring, v)?.then(Vec::new),
        };
        images.push(c.ok_or_else(|| Error::NotWellDefined("image does not lie in the submodule".to_string()))?);
    }
    ModuleHom::new(ring, h.source.clone(), inc.source.clone(), images)
}

/// The dual M* = Hom_R(M, R) together with its generators as functionals
/// (vectors φ ∈ R^b with φ(e_j) = φ[j]).
#[derive(Clone, Debug)]
pub struct Dual {
    pub module: PresentedModule,
    pub functionals: Vec<FreeVector>,
}

/// Computes M* as the kernel of the transposed relation matrix.
pub fn dual(ring: &Ring, m: &PresentedModule) -> Result<Dual> {
    let b = m.ngens;
    let s = m.rels.len();
    let functionals: Vec<FreeVector> = if s == 0 {
        (0..b).map(|i| unit(ring, b, i)).collect()
    } else {
        let cols: Vec<FreeVector> = (0..b).map(|j| m.rels.iter().map(|r| r[j].clone()).collect()).collect();
        let k = kernel_mod(ring, &cols, &[], s)?;
        minimize_generators(ring, k, b)?
    };
    let rels = if functionals.is_empty() { Vec::new() } else { groebner::syzygies(ring, &functionals, b)? };
    let module = PresentedModule::new(ring, functionals.len(), rels)?;
    Ok(Dual { module, functionals })
}

/// Evaluates a functional (vector in R^b) on an element of M.
pub fn evaluate(ring: &Ring, phi: &[RingElem], x: &[RingElem]) -> RingElem {
    let mut acc = RingElem::zero();
    for (a, b) in phi.iter().zip(x) {
        if !a.is_zero() && !b.is_zero() {
            acc = ring.add(&acc, &ring.mul(a, b));
        }
    }
    acc
}

/// Hom_R(M, N) as a submodule of N^b, with the inclusion. An element
/// (v_1..v_b) is the homomorphism e_i ↦ v_i.
pub fn hom(ring: &Ring, m: &PresentedModule, n: &PresentedModule) -> Result<(PresentedModule, ModuleHom)> {
    let b = m.ngens;
    let bn = n.ngens;
    let copies: Vec<&PresentedModule> = (0..b).map(|_| n).collect();
    let nb = PresentedModule::direct_sum(ring, &copies)?;
    let s = m.rels.len();
    let rcopies: Vec<&PresentedModule> = (0..s).map(|_| n).collect();
    let ns = PresentedModule::direct_sum(ring, &rcopies)?;
    // generator (i, k) of N^b maps to Σ_r rel_r[i] · e_{(r, k)}
    let mut images = Vec::with_capacity(b * bn);
    for i in 0..b {
        for k in 0..bn {
            let mut v = vec![RingElem::zero(); s * bn];
            for (ri, r) in m.rels.iter().enumerate() {
                v[ri * bn + k] = r[i].clone();
            }
            images.push(v);
        }
    }
    let phi = ModuleHom::new_unchecked(nb, ns, images);
    kernel(ring, &phi)
}

/// Index of a sorted subset in the list of l-subsets of 0..n.
fn subset_index(subsets: &[Vec<usize>], s: &[usize]) -> usize {
    subsets.binary_search_by(|x| x.as_slice().cmp(s)).expect("subset present")
}

/// ∧^l M on the l-subsets of the generators (lexicographic order).
pub fn exterior_power(ring: &Ring, m: &PresentedModule, l: usize) -> Result<PresentedModule> {
    let b = m.ngens;
    if l == 0 {
        return Ok(PresentedModule::free(ring, 1));
    }
    if l > b {
        return Ok(PresentedModule::zero(ring));
    }
    let subsets = combinations(b, l);
    let smaller = combinations(b, l - 1);
    let mut rels = Vec::new();
    for r in &m.rels {
        for u in &smaller {
            let mut v = vec![RingElem::zero(); subsets.len()];
            let mut any = false;
            for (i, ri) in r.iter().enumerate() {
                if ri.is_zero() || u.contains(&i) {
                    continue;
                }
                // e_i ∧ e_U = (-1)^{#{u < i}} e_{U ∪ {i}}
                let before = u.iter().filter(|&&x| x < i).count();
                let mut s = u.clone();
                s.push(i);
                s.sort_unstable();
                let idx = subset_index(&subsets, &s);
                v[idx] = if before % 2 == 0 { ring.add(&v[idx], ri) } else { ring.sub(&v[idx], ri) };
                any = true;
            }
            if any {
                rels.push(v);
            }
        }
    }
    PresentedModule::new(ring, subsets.len(), rels)
}

/// The bidual map α^l_M : ∧^l M → (∧^l M*)* with x_J ↦ (φ_I ↦ det(φ_i(x_j))).
#[derive(Clone, Debug)]
pub struct BidualMap {
    pub map: ModuleHom,
    /// Functionals generating (∧^l M*)* as vectors on the l-subsets of M*'s
    /// generators.
    pub target_functionals: Vec<FreeVector>,
}

pub fn bidual_map(ring: &Ring, m: &PresentedModule, l: usize) -> Result<BidualMap> {
    if l == 0 {
        return Err(Error::Precondition("bidual map needs l >= 1".to_string()));
    }
    let dm = dual(ring, m)?;
    let s = dm.functionals.len();
    let wedge_m = exterior_power(ring, m, l)?;
    let wedge_dual = exterior_power(ring, &dm.module, l)?;
    let target = dual(ring, &wedge_dual)?;
    let isub = combinations(s, l);
    let jsub = combinations(m.ngens, l);
    let mut images = Vec::with_capacity(jsub.len());
    let lifter =
        if target.functionals.is_empty() { None } else { Some(Lifter::new(ring, &target.functionals, &[], isub.len())?) };
    for jset in &jsub {
        let w: FreeVector = isub
            .iter()
            .map(|iset| {
                let sub: Vec<Vec<RingElem>> =
                    iset.iter().map(|&i| jset.iter().map(|&j| dm.functionals[i][j].clone()).collect()).collect();
                ring.det(&sub)
            })
            .collect();
        let coeffs = match &lifter {
            None => Vec::new(),
            Some(lf) => lf
                .lift(ring, &w)?
                .ok_or_else(|| Error::NotWellDefined("determinant functional outside the bidual".to_string()))?,
        };
        images.push(coeffs);
    }
    let map = ModuleHom::new(ring, wedge_m, target.module, images)?;
    Ok(BidualMap { map, target_functionals: target.functionals })
}

/// M_tor as the kernel of M → R^s, x ↦ (φ_k(x)), with the inclusion into M.
pub fn torsion_submodule(ring: &Ring, m: &PresentedModule) -> Result<(PresentedModule, ModuleHom)> {
    let dm = dual(ring, m)?;
    let s = dm.functionals.len();
    let images: Vec<FreeVector> = (0..m.ngens).map(|j| dm.functionals.iter().map(|phi| phi[j].clone()).collect()).collect();
    let h = ModuleHom::new_unchecked(m.clone(), PresentedModule::free(ring, s), images);
    kernel(ring, &h)
}

/// Ann_R(M) as an ideal.
pub fn annihilator(ring: &Ring, m: &PresentedModule) -> Result<Submodule> {
    let b = m.ngens;
    let basis: Vec<FreeVector> = (0..b).map(|j| unit(ring, b, j)).collect();
    annihilator_of(ring, m, &basis)
}

/// Annihilator of the submodule of `m` generated by `vs`.
pub fn annihilator_of(ring: &Ring, m: &PresentedModule, vs: &[FreeVector]) -> Result<Submodule> {
    let b = m.ngens;
    let k = vs.len();
    if k == 0 {
        return Submodule::ideal(ring, &[ring.one()]);
    }
    // a ↦ (a·v_1, ..., a·v_k) ∈ M^k
    let target: FreeVector = vs.iter().flat_map(|v| v.iter().cloned()).collect();
    let mut modulo = Vec::new();
    for j in 0..k {
        for r in &m.rels {
            let mut v = vec![RingElem::zero(); k * b];
            for (i, e) in r.iter().enumerate() {
                v[j * b + i] = e.clone();
            }
            modulo.push(v);
        }
    }
    let gens = kernel_mod(ring, &[target], &modulo, k * b)?;
    Submodule::new(ring, 1, gens)
}

/// Ann_Λ(M) = Ann_R(M) ∩ Λ.
pub fn annihilator_lambda(ring: &Ring, m: &PresentedModule) -> Result<Vec<RingElem>> {
    let ann = annihilator(ring, m)?;
    groebner::contract_to_lambda(ring, &ann)
}

/// dim Λ/Ann_Λ(M); -1 for the zero module.
pub fn support_dim(ring: &Ring, m: &PresentedModule) -> Result<i32> {
    if m.is_zero() {
        return Ok(-1);
    }
    groebner::krull_dim(ring, &annihilator_lambda(ring, m)?)
}

/// M is pseudo-null iff dim Λ/Ann_Λ(M) ≤ d − 2.
pub fn is_pseudo_null(ring: &Ring, m: &PresentedModule) -> Result<bool> {
    Ok(support_dim(ring, m)? <= ring.d() as i32 - 2)
}

/// Generators of Fitt_r(M): the (b−r)-minors of the relation matrix.
pub fn fitting_gens(ring: &Ring, m: &PresentedModule, r: usize) -> Result<Vec<RingElem>> {
    let b = m.ngens;
    if r >= b {
        return Ok(vec![ring.one()]);
    }
    let pm = prune(ring, m)?;
    let m2 = &pm.module;
    let b2 = m2.ngens;
    if r >= b2 {
        return Ok(vec![ring.one()]);
    }
    Ok(minors_of_rows(ring, &m2.rels, b2, b2 - r))
}

/// Fitt_r(M) as a fractional ideal with denominator 1.
pub fn fitting_ideal(ring: &Ring, m: &PresentedModule, r: usize) -> Result<FractionalIdeal> {
    FractionalIdeal::integral(ring, fitting_gens(ring, m, r)?)
}

/// True if the ideal contains a non-zero-divisor, i.e. (0 : I) = 0.
pub fn contains_nzd(ring: &Ring, gens: &[RingElem]) -> Result<bool> {
    let gens: Vec<RingElem> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Ok(false);
    }
    if gens.iter().any(|g| ring.is_non_zero_divisor(g)) {
        return Ok(true);
    }
    let k = kernel_mod(ring, core::slice::from_ref(&gens), &[], gens.len())?;
    Ok(k.is_empty())
}

/// Least r with Fitt_r(M) containing a non-zero-divisor.
pub fn generic_rank(ring: &Ring, m: &PresentedModule) -> Result<usize> {
    let pm = prune(ring, m)?;
    let m2 = &pm.module;
    for r in 0..=m2.ngens {
        if contains_nzd(ring, &fitting_gens(ring, m2, r)?)? {
            return Ok(r);
        }
    }
    Ok(m2.ngens)
}

/// 0 :_M g^∞ as generators in R^b (including the relations).
fn saturate_zero(ring: &Ring, m: &PresentedModule, g: &RingElem) -> Result<Vec<FreeVector>> {
    let b = m.ngens;
    let mut cur: Vec<FreeVector> = m.rels.clone();
    let mut cur_gb = m.gb.clone();
    loop {
        let images: Vec<FreeVector> = (0..b)
            .map(|j| {
                let mut v = vec![RingElem::zero(); b];
                v[j] = g.clone();
                v
            })
            .collect();
        let next = kernel_mod(ring, &images, &cur, b)?;
        if cur_gb.contains_all(ring, &next)? {
            return Ok(cur);
        }
        let mut all = cur.clone();
        all.extend(next);
        cur_gb = Gb::new(ring, b, &all)?;
        cur = cur_gb.elements(ring);
    }
}

/// 0 :_M I^∞ for I generated by `ideal`, with inclusion into M.
pub fn torsion_at_ideal(ring: &Ring, m: &PresentedModule, ideal: &[RingElem]) -> Result<(PresentedModule, ModuleHom)> {
    let b = m.ngens;
    if b == 0 {
        return m.submodule(ring, Vec::new());
    }
    let mut acc: Option<Submodule> = None;
    for g in ideal.iter().filter(|g| !g.is_zero()) {
        let sat = Submodule::new(ring, b, saturate_zero(ring, m, g)?)?;
        acc = Some(match acc {
            None => sat,
            Some(a) => groebner::intersect(ring, &a, &sat)?,
        });
    }
    let gens = match acc {
        // empty ideal: every element is killed by a power of (0)
        None => m.generators(ring),
        Some(a) => a.gens,
    };
    let red = m.gb.reduce_many(ring, &gens)?;
    let gens: Vec<FreeVector> = gens.into_iter().zip(red).filter(|(_, r)| !is_zero_vec(r)).map(|(v, _)| v).collect();
    m.submodule(ring, gens)
}

/// Maximal pseudo-null submodule M_PN with its inclusion.
///
/// Elements supported in codimension ≥ 2 are exactly those killed by a power
/// of I = ∏_{i≥2} Ann_Λ(Ext^i(M, R)), since the support of Ext^i has
/// codimension ≥ i and every associated prime of height h ≥ 2 lies in the
/// support of Ext^h.
pub fn pseudo_null_part(ring: &Ring, m: &PresentedModule) -> Result<(PresentedModule, ModuleHom)> {
    let d = ring.d();
    if d < 2 || m.is_zero() {
        return m.submodule(ring, Vec::new());
    }
    if is_pseudo_null(ring, m)? {
        return m.submodule(ring, m.generators(ring));
    }
    let mut prod: Vec<RingElem> = vec![ring.one()];
    let mut any_nonzero = false;
    for i in 2..=d {
        let e = ext(ring, m, i)?;
        if e.is_zero() {
            continue;
        }
        any_nonzero = true;
        let ann = annihilator_lambda(ring, &e)?;
        let mut next = Vec::new();
        for a in &prod {
            for g in &ann {
                next.push(ring.mul(a, g));
            }
        }
        let sub = Submodule::ideal(ring, &next)?;
        prod = sub.gb.elements(ring).into_iter().map(|v| v[0].clone()).collect();
    }
    if !any_nonzero {
        return m.submodule(ring, Vec::new());
    }
    torsion_at_ideal(ring, m, &prod)
}

/// Maximal submodule of finite length: 0 :_M (x_1, ..., x_d)^∞.
pub fn finite_part(ring: &Ring, m: &PresentedModule) -> Result<(PresentedModule, ModuleHom)> {
    let xs: Vec<RingElem> = (0..ring.d()).map(|i| ring.x(i)).collect();
    torsion_at_ideal(ring, m, &xs)
}

/// Characteristic ideal of a torsion module over Λ = F_q[x, y], the
/// divisorial hull (f) : ((f) : Fitt_0(M)).
pub fn char_ideal(ring: &Ring, m: &PresentedModule) -> Result<FractionalIdeal> {
    if ring.d() != 2 || !ring.is_lambda() {
        return Err(Error::Precondition("characteristic ideals need Λ with exactly two variables".to_string()));
    }
    let fitt = fitting_gens(ring, m, 0)?;
    let fsub = Submodule::ideal(ring, &fitt)?;
    let order = ring.order();
    let f = fsub
        .gb
        .elements(ring)
        .into_iter()
        .map(|v| v[0].clone())
        .min_by(|a, b| {
            let la = ring.leading_term(a).map(|t| t.0).unwrap_or_default();
            let lb = ring.leading_term(b).map(|t| t.0).unwrap_or_default();
            order.cmp(&la, &lb)
        })
        .ok_or_else(|| Error::Precondition("module is not torsion".to_string()))?;
    let fi = Submodule::ideal(ring, core::slice::from_ref(&f))?;
    let j = groebner::ideal_quotient(ring, &fi, &fitt)?;
    let hull = groebner::ideal_quotient(ring, &fi, &j.ideal_gens())?;
    let gens: Vec<RingElem> = hull.gb.elements(ring).into_iter().map(|v| v[0].clone()).collect();
    if gens.len() != 1 {
        return Err(Error::Unsupported(format!("divisorial hull is not principal ({} generators)", gens.len())));
    }
    FractionalIdeal::integral(ring, vec![ring.monic(&gens[0])])
}

/// An R-ideal over a non-zero-divisor denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalIdeal {
    pub numerator: Vec<RingElem>,
    pub denominator: RingElem,
}

impl FractionalIdeal {
    pub fn new(ring: &Ring, numerator: Vec<RingElem>, denominator: RingElem) -> Result<Self> {
        if !ring.is_non_zero_divisor(&denominator) {
            return Err(Error::Precondition("denominator must be a non-zero-divisor".to_string()));
        }
        let numerator = numerator.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(FractionalIdeal { numerator, denominator })
    }

    pub fn integral(ring: &Ring, numerator: Vec<RingElem>) -> Result<Self> {
        Self::new(ring, numerator, ring.one())
    }

    pub fn principal(ring: &Ring, a: RingElem) -> Result<Self> {
        Self::integral(ring, vec![a])
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Equality via b·I = a·J for I/a and J/b.
    pub fn equals(&self, ring: &Ring, other: &FractionalIdeal) -> Result<bool> {
        let lhs: Vec<RingElem> = self.numerator.iter().map(|g| ring.mul(g, &other.denominator)).collect();
        let rhs: Vec<RingElem> = other.numerator.iter().map(|g| ring.mul(g, &self.denominator)).collect();
        ideals_equal(ring, &lhs, &rhs)
    }

    pub fn mul(&self, ring: &Ring, other: &FractionalIdeal) -> Result<FractionalIdeal> {
        let mut num = Vec::new();
        for a in &self.numerator {
            for b in &other.numerator {
                num.push(ring.mul(a, b));
            }
        }
        let num = reduced_ideal_gens(ring, &num)?;
        FractionalIdeal::new(ring, num, ring.mul(&self.denominator, &other.denominator))
    }

    /// True if the ideal is the unit ideal.
    pub fn is_unit_ideal(&self, ring: &Ring) -> Result<bool> {
        self.equals(ring, &FractionalIdeal::principal(ring, ring.one())?)
    }

    pub fn format(&self, ring: &Ring) -> String {
        let gens: Vec<String> = self.numerator.iter().map(|g| ring.format(g)).collect();
        let num = if gens.is_empty() { "(0)".to_string() } else { format!("({})", gens.join(", ")) };
        if self.denominator == ring.one() {
            num
        } else {
            format!("{} / ({})", num, ring.format(&self.denominator))
        }
    }
}

/// Exactness of M --f--> N --g--> P at N: g∘f = 0 and ker g ⊆ im f.
pub fn is_exact_at(ring: &Ring, f: &ModuleHom, g: &ModuleHom) -> Result<bool> {
    if !f.then(ring, g).is_zero(ring)? {
        return Ok(false);
    }
    let k = kernel_gens(ring, g)?;
    f.target.submodule_contains(ring, &f.images, &k)
}

/// The unique c with c·b = a, for a non-zero-divisor b; `None` if b does
/// not divide a.
pub fn exact_divide(ring: &Ring, a: &RingElem, b: &RingElem) -> Result<Option<RingElem>> {
    if a.is_zero() {
        return Ok(Some(RingElem::zero()));
    }
    let lifter = Lifter::new(ring, &[vec![b.clone()]], &[], 1)?;
    Ok(lifter.lift(ring, core::slice::from_ref(a))?.map(|mut c| c.remove(0)))
}

/// Ideal equality by mutual containment.
pub fn ideals_equal(ring: &Ring, a: &[RingElem], b: &[RingElem]) -> Result<bool> {
    let ia = Submodule::ideal(ring, a)?;
    let ib = Submodule::ideal(ring, b)?;
    ia.equals(ring, &ib)
}

/// Ideal containment a ⊆ b.
pub fn ideal_contains(ring: &Ring, b: &[RingElem], a: &[RingElem]) -> Result<bool> {
    let ia = Submodule::ideal(ring, a)?;
    let ib = Submodule::ideal(ring, b)?;
    ia.is_subset_of(ring, &ib)
}

/// Reduced Groebner generators of an ideal (canonical for a fixed order).
pub fn reduced_ideal_gens(ring: &Ring, gens: &[RingElem]) -> Result<Vec<RingElem>> {
    let s = Submodule::ideal(ring, gens)?;
    Ok(s.gb.elements(ring).into_iter().map(|v| v[0].clone()).collect())
}

/// Human-readable list of ideal generators in canonical form.
pub fn format_ideal(ring: &Ring, gens: &[RingElem]) -> String {
    match reduced_ideal_gens(ring, gens) {
        Ok(g) if g.is_empty() => "(0)".to_string(),
        Ok(g) => format!("({})", g.iter().map(|e| ring.format(e)).collect::<Vec<_>>().join(", ")),
        Err(_) => "(?)".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn lam() -> Ring {
        Ring::new(RingSpec::new(3, 2, &[])).unwrap()
    }

    fn p(r: &Ring, s: &str) -> RingElem {
        r.parse(s).unwrap()
    }

    fn cyc(r: &Ring, gens: &[&str]) -> PresentedModule {
        PresentedModule::cyclic(r, &gens.iter().map(|g| p(r, g)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn kernel_cokernel_examples() {
        let r = lam();
        let l = PresentedModule::free(&r, 1);
        let h = ModuleHom::new(&r, l.clone(), l.clone(), vec![vec![p(&r, "x")]]).unwrap();
        let c = cokernel(&r, &h).unwrap();
        assert!(ideals_equal(&r, &fitting_gens(&r, &c, 0).unwrap(), &[p(&r, "x")]).unwrap());
        assert!(kernel(&r, &h).unwrap().0.is_zero());
        let l2 = PresentedModule::free(&r, 2);
        let h = ModuleHom::new(&r, l2, l, vec![vec![p(&r, "x")], vec![p(&r, "y")]]).unwrap();
        let (k, inc) = kernel(&r, &h).unwrap();
        assert_eq!(k.ngens(), 1);
        assert!(k.relations().is_empty());
        let v = &inc.images[0];
        assert!(r.add(&r.mul(&v[0], &p(&r, "x")), &r.mul(&v[1], &p(&r, "y"))).is_zero());
    }

    #[test]
    fn duals_and_hom() {
        let r = lam();
        assert!(dual(&r, &cyc(&r, &["x"])).unwrap().module.is_zero());
        let d2 = dual(&r, &PresentedModule::free(&r, 2)).unwrap();
        assert_eq!(d2.module.ngens(), 2);
        assert!(d2.module.relations().is_empty());
        let m = cyc(&r, &["x"]);
        let (h, _) = hom(&r, &m, &m).unwrap();
        let h = prune(&r, &h).unwrap().module;
        assert_eq!(h.ngens(), 1);
        assert!(ideals_equal(&r, &fitting_gens(&r, &h, 0).unwrap(), &[p(&r, "x")]).unwrap());
    }

    #[test]
    fn ext_examples() {
        let r = lam();
        let e1 = ext(&r, &cyc(&r, &["x"]), 1).unwrap();
        assert!(ideals_equal(&r, &fitting_gens(&r, &e1, 0).unwrap(), &[p(&r, "x")]).unwrap());
        assert_eq!(e1.ngens(), 1);
        let kos = cyc(&r, &["x", "y"]);
        let e2 = ext(&r, &kos, 2).unwrap();
        assert_eq!(e2.ngens(), 1);
        assert!(ideals_equal(&r, &fitting_gens(&r, &e2, 0).unwrap(), &[p(&r, "x"), p(&r, "y")]).unwrap());
        assert!(ext(&r, &kos, 1).unwrap().is_zero());
        assert!(ext(&r, &kos, 0).unwrap().is_zero());
    }

    #[test]
    fn exterior_powers() {
        let r = lam();
        let w = exterior_power(&r, &PresentedModule::free(&r, 2), 2).unwrap();
        assert_eq!(w.ngens(), 1);
        assert!(w.relations().is_empty());
        let m = PresentedModule::direct_sum(&r, &[&cyc(&r, &["x"]), &cyc(&r, &["y"])]).unwrap();
        let w = exterior_power(&r, &m, 2).unwrap();
        assert!(ideals_equal(&r, &fitting_gens(&r, &w, 0).unwrap(), &[p(&r, "x"), p(&r, "y")]).unwrap());
    }

    #[test]
    fn torsion_and_parts() {
        let r = lam();
        let m = PresentedModule::direct_sum(&r, &[&cyc(&r, &["x"]), &PresentedModule::free(&r, 1)]).unwrap();
        let (t, inc) = torsion_submodule(&r, &m).unwrap();
        assert!(m.submodules_equal(&r, &inc.images, &[vec![r.one(), r.zero()]]).unwrap());
        assert!(!t.is_zero());
        let m = PresentedModule::direct_sum(&r, &[&cyc(&r, &["x"]), &cyc(&r, &["x", "y"])]).unwrap();
        let (_, inc) = finite_part(&r, &m).unwrap();
        assert!(m.submodules_equal(&r, &inc.images, &[vec![r.zero(), r.one()]]).unwrap());
        let (_, inc) = pseudo_null_part(&r, &m).unwrap();
        assert!(m.submodules_equal(&r, &inc.images, &[vec![r.zero(), r.one()]]).unwrap());
        let r3 = Ring::new(RingSpec::new(3, 2, &[3])).unwrap();
        let m = cyc(&r3, &["t-1"]);
        assert!(torsion_submodule(&r3, &m).unwrap().0.is_zero());
        assert!(is_pseudo_null(&r3, &cyc(&r3, &["t-1", "x", "y"])).unwrap());
    }

    #[test]
    fn pseudo_null_tests() {
        let r = lam();
        assert!(is_pseudo_null(&r, &cyc(&r, &["x", "y"])).unwrap());
        assert!(!is_pseudo_null(&r, &cyc(&r, &["x"])).unwrap());
    }

    #[test]
    fn fitting_and_rank() {
        let r = lam();
        let diag = PresentedModule::new(&r, 2, vec![vec![p(&r, "x"), r.zero()], vec![r.zero(), p(&r, "y")]]).unwrap();
        assert!(ideals_equal(&r, &fitting_gens(&r, &diag, 0).unwrap(), &[p(&r, "x*y")]).unwrap());
        assert!(fitting_gens(&r, &PresentedModule::free(&r, 1), 0).unwrap().is_empty());
        let c = PresentedModule::new(&r, 2, vec![vec![p(&r, "x"), p(&r, "y")]]).unwrap();
        assert_eq!(generic_rank(&r, &c).unwrap(), 1);
        assert_eq!(generic_rank(&r, &PresentedModule::free(&r, 1)).unwrap(), 1);
        let ann = annihilator(&r, &cyc(&r, &["x"])).unwrap();
        assert!(ideals_equal(&r, &ann.ideal_gens(), &[p(&r, "x")]).unwrap());
    }

    #[test]
    fn characteristic_ideals() {
        let r = lam();
        let c = char_ideal(&r, &cyc(&r, &["x*y"])).unwrap();
        assert_eq!(c.numerator, vec![p(&r, "x*y")]);
        let c = char_ideal(&r, &cyc(&r, &["x^2", "x*y"])).unwrap();
        assert_eq!(c.numerator, vec![p(&r, "x")]);
        let c = char_ideal(&r, &cyc(&r, &["x", "y"])).unwrap();
        assert_eq!(c.numerator, vec![r.one()]);
    }

    #[test]
    fn bidual_examples() {
        let r = lam();
        let free = PresentedModule::free(&r, 2);
        assert!(bidual_map(&r, &free, 1).unwrap().map.is_isomorphism(&r).unwrap());
        let t = cyc(&r, &["x"]);
        let b = bidual_map(&r, &t, 1).unwrap();
        assert!(b.map.target.is_zero());
        let c = PresentedModule::new(&r, 2, vec![vec![p(&r, "x"), p(&r, "y")]]).unwrap();
        let b = bidual_map(&r, &c, 1).unwrap();
        assert!(b.map.is_injective(&r).unwrap());
        let coker = cokernel(&r, &b.map).unwrap();
        assert!(!coker.is_zero());
        assert!(is_pseudo_null(&r, &coker).unwrap());
    }
}
