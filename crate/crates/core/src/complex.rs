//! Bounded complexes of finite free R-modules: cohomology, Euler
//! characteristic, shifts, cones, duals, determinant trivializations, the
//! algebraic L-function generator and the map Ψ_C from the l-th exterior
//! power of H¹ to the determinant line.
//!
//! Differentials use the column convention: `d^i` is an `r_{i+1} × r_i`
//! matrix acting on column vectors.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::groebner::{kernel_mod, FreeVector, Lifter};
use crate::matrix::{combinations, minors_of_rows, Matrix};
use crate::module::{
    self, annihilator, bidual_map, cokernel, exact_divide, ext, exterior_power, fitting_gens, ideals_equal, is_pseudo_null,
    kernel, torsion_submodule, FractionalIdeal, ModuleHom, PresentedModule,
};
use crate::ring::{Automorphism, Ring, RingElem};

/// A complex R^{r_lo} → R^{r_lo+1} → … → R^{r_hi}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    lo: i32,
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
}

fn unit(ring: &Ring, n: usize, i: usize) -> FreeVector {
    let mut v = vec![RingElem::zero(); n];
    v[i] = ring.one();
    v
}

impl FreeComplex {
    /// Builds a complex, checking matrix shapes and d∘d = 0.
    pub fn new(ring: &Ring, lo: i32, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::Precondition("a complex needs at least one term".to_string()));
        }
        if diffs.len() + 1 != ranks.len() {
            return Err(Error::RankMismatch { expected: ranks.len() - 1, found: diffs.len() });
        }
        for (k, m) in diffs.iter().enumerate() {
            if m.ncols() != ranks[k] || m.nrows() != ranks[k + 1] {
                return Err(Error::RankMismatch { expected: ranks[k], found: m.ncols() });
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].mul(ring, &diffs[k - 1]).is_zero() {
                return Err(Error::NotAComplex(lo + k as i32 - 1));
            }
        }
        Ok(FreeComplex { lo, ranks, diffs })
    }

    /// The two-term complex R^{ncols} --m--> R^{nrows} in degrees lo, lo+1.
    pub fn two_term(ring: &Ring, lo: i32, m: Matrix) -> Result<Self> {
        Self::new(ring, lo, vec![m.ncols(), m.nrows()], vec![m])
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.ranks.len() as i32 - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.diffs
    }

    /// Rank of C^i (0 outside the stored range).
    pub fn rank(&self, i: i32) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    /// d^i : C^i → C^{i+1} (a zero matrix outside the stored range).
    pub fn diff(&self, i: i32) -> Matrix {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zero(self.rank(i + 1), self.rank(i))
        }
    }

    /// Smallest and largest degree with a nonzero term, if any.
    pub fn support(&self) -> Option<(i32, i32)> {
        let nz: Vec<i32> = (self.lo..=self.hi()).filter(|&i| self.rank(i) > 0).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// H^i together with cycle representatives in C^i for its generators.
    pub fn cohomology_with_cycles(&self, ring: &Ring, i: i32) -> Result<(PresentedModule, Vec<FreeVector>)> {
        let q = self.rank(i);
        let a_cols = self.diff(i - 1).columns();
        let b_cols = self.diff(i).columns();
        module::homology(ring, q, &a_cols, &b_cols, self.rank(i + 1)).map_err(|e| match e {
            Error::NotAComplex(_) => Error::NotAComplex(i - 1),
            other => other,
        })
    }

    /// H^i(C) = ker d^i / im d^{i-1}.
    pub fn cohomology(&self, ring: &Ring, i: i32) -> Result<PresentedModule> {
        Ok(self.cohomology_with_cycles(ring, i)?.0)
    }

    /// χ(C) = Σ (−1)^{i−1} rank C^i.
    pub fn euler_char(&self) -> i64 {
        (self.lo..=self.hi())
            .map(|i| {
                let r = self.rank(i) as i64;
                if (i - 1).rem_euclid(2) == 0 {
                    r
                } else {
                    -r
                }
            })
            .sum()
    }

    /// C[k] with C[k]^i = C^{i+k} and d_{C[k]} = (−1)^k d_C.
    pub fn shift(&self, ring: &Ring, k: i32) -> FreeComplex {
        let diffs = if k.rem_euclid(2) == 0 { self.diffs.clone() } else { self.diffs.iter().map(|m| m.neg(ring)).collect() };
        FreeComplex { lo: self.lo - k, ranks: self.ranks.clone(), diffs }
    }

    /// Hom(C, R) in degrees −hi..−lo with transposed differentials, optionally
    /// twisted entrywise by an automorphism.
    pub fn dual(&self, ring: &Ring, twist: Option<&Automorphism>) -> FreeComplex {
        let ranks: Vec<usize> = self.ranks.iter().rev().copied().collect();
        let diffs = self
            .diffs
            .iter()
            .rev()
            .map(|m| {
                let t = m.transpose();
                match twist {
                    Some(s) => t.twist(ring, s),
                    None => t,
                }
            })
            .collect();
        FreeComplex { lo: -self.hi(), ranks, diffs }
    }

    /// Applies an automorphism to every differential.
    pub fn twist(&self, ring: &Ring, sigma: &Automorphism) -> FreeComplex {
        FreeComplex { lo: self.lo, ranks: self.ranks.clone(), diffs: self.diffs.iter().map(|m| m.twist(ring, sigma)).collect() }
    }

    /// Re-indexes the stored range to [lo, hi], padding with zero terms.
    pub fn widen(&self, lo: i32, hi: i32) -> FreeComplex {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let ranks: Vec<usize> = (lo..=hi).map(|i| self.rank(i)).collect();
        let diffs = (lo..hi).map(|i| self.diff(i)).collect();
        FreeComplex { lo, ranks, diffs }
    }

    /// Termwise direct sum with block-diagonal differentials.
    pub fn direct_sum(ring: &Ring, parts: &[&FreeComplex]) -> Result<FreeComplex> {
        let lo = parts.iter().map(|c| c.lo).min().ok_or_else(|| Error::Precondition("empty direct sum".to_string()))?;
        let hi = parts.iter().map(|c| c.hi()).max().unwrap_or(lo);
        let ranks: Vec<usize> = (lo..=hi).map(|i| parts.iter().map(|c| c.rank(i)).sum()).collect();
        let mut diffs = Vec::new();
        for i in lo..hi {
            let mut m = Matrix::zero(ranks[(i + 1 - lo) as usize], ranks[(i - lo) as usize]);
            let (mut ro, mut co) = (0, 0);
            for c in parts {
                let d = c.diff(i);
                for r in 0..d.nrows() {
                    for k in 0..d.ncols() {
                        m.set(ro + r, co + k, d.get(r, k).clone());
                    }
                }
                ro += c.rank(i + 1);
                co += c.rank(i);
            }
            diffs.push(m);
        }
        FreeComplex::new(ring, lo, ranks, diffs)
    }

    /// True if every cohomology module vanishes.
    pub fn is_acyclic(&self, ring: &Ring) -> Result<bool> {
        for i in self.lo..=self.hi() {
            if !self.cohomology(ring, i)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A morphism of complexes given by one matrix per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: FreeComplex,
    pub target: FreeComplex,
    maps: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    /// Builds a chain map; degrees missing from `maps` are zero. Checks
    /// shapes and the commutation d_T f = f d_S in every degree.
    pub fn new(ring: &Ring, source: FreeComplex, target: FreeComplex, maps: BTreeMap<i32, Matrix>) -> Result<Self> {
        for (&i, m) in &maps {
            if m.ncols() != source.rank(i) || m.nrows() != target.rank(i) {
                return Err(Error::RankMismatch { expected: source.rank(i), found: m.ncols() });
            }
        }
        let f = ChainMap { source, target, maps };
        let lo = f.source.lo.min(f.target.lo) - 1;
        let hi = f.source.hi().max(f.target.hi()) + 1;
        for i in lo..=hi {
            let lhs = f.target.diff(i).mul(ring, &f.get(i));
            let rhs = f.get(i + 1).mul(ring, &f.source.diff(i));
            if lhs != rhs {
                return Err(Error::NotAChainMap(i));
            }
        }
        Ok(f)
    }

    pub fn zero(ring: &Ring, source: FreeComplex, target: FreeComplex) -> Self {
        ChainMap::new(ring, source, target, BTreeMap::new()).expect("zero map commutes")
    }

    pub fn identity(ring: &Ring, c: &FreeComplex) -> Self {
        let maps = (c.lo..=c.hi()).map(|i| (i, Matrix::identity(ring, c.rank(i)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    /// The matrix in degree i.
    pub fn get(&self, i: i32) -> Matrix {
        match self.maps.get(&i) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.target.rank(i), self.source.rank(i)),
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = (&i32, &Matrix)> {
        self.maps.iter()
    }

    /// The induced map H^i(source) → H^i(target).
    pub fn on_cohomology(&self, ring: &Ring, i: i32) -> Result<ModuleHom> {
        let (hs, zs) = self.source.cohomology_with_cycles(ring, i)?;
        let (ht, zt) = self.target.cohomology_with_cycles(ring, i)?;
        let f = self.get(i);
        let images = lift_cycles(ring, &zt, self.target.rank(i), zs.iter().map(|z| f.apply(ring, z)))?;
        ModuleHom::new(ring, hs, ht, images)
    }
}

/// Expresses cycles in terms of the given cycle generators.
fn lift_cycles(
    ring: &Ring,
    gens: &[FreeVector],
    rank: usize,
    cycles: impl Iterator<Item = FreeVector>,
) -> Result<Vec<FreeVector>> {
    let cycles: Vec<FreeVector> = cycles.collect();
    if gens.is_empty() {
        return Ok(vec![Vec::new(); cycles.len()]);
    }
    let lifter = Lifter::new(ring, gens, &[], rank)?;
    cycles
        .iter()
        .map(|c| lifter.lift(ring, c)?.ok_or_else(|| Error::NotWellDefined("image is not a cycle".to_string())))
        .collect()
}

/// The cone of f : A → B, with cone^i = B^i ⊕ A^{i+1} and
/// d(b, a) = (d_B b + f a, −d_A a).
pub fn cone(ring: &Ring, f: &ChainMap) -> Result<FreeComplex> {
    let a = &f.source;
    let b = &f.target;
    let lo = b.lo.min(a.lo - 1);
    let hi = b.hi().max(a.hi() - 1);
    let ranks: Vec<usize> = (lo..=hi).map(|i| b.rank(i) + a.rank(i + 1)).collect();
    let diffs = (lo..hi)
        .map(|i| {
            let z = Matrix::zero(a.rank(i + 2), b.rank(i));
            Matrix::block(&b.diff(i), &f.get(i + 1), &z, &a.diff(i + 1).neg(ring))
        })
        .collect();
    FreeComplex::new(ring, lo, ranks, diffs)
}

/// The maps B → cone(f) and cone(f) → A[1] of the cone triangle.
pub fn cone_maps(ring: &Ring, f: &ChainMap) -> Result<(FreeComplex, ChainMap, ChainMap)> {
    let c = cone(ring, f)?;
    let a = &f.source;
    let b = &f.target;
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for i in c.lo..=c.hi() {
        let (rb, ra) = (b.rank(i), a.rank(i + 1));
        let mut m = Matrix::zero(rb + ra, rb);
        let mut p = Matrix::zero(ra, rb + ra);
        for k in 0..rb {
            m.set(k, k, ring.one());
        }
        for k in 0..ra {
            p.set(k, rb + k, ring.one());
        }
        inc.insert(i, m);
        proj.insert(i, p);
    }
    let a1 = a.shift(ring, 1);
    let inc = ChainMap::new(ring, b.clone(), c.clone(), inc)?;
    let proj = ChainMap::new(ring, c.clone(), a1, proj)?;
    Ok((c, inc, proj))
}

/// How Ψ_C was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiMode {
    /// C = [C⁰ --α--> C¹] in degrees 0, 1 with H⁰ = 0.
    Strict,
    /// C = [C¹ --β--> C²] in degrees 1, 2 with H² pseudo-null.
    Amplitude12,
}

/// Ψ_C : ∧^l H¹(C) → Det^{-1}(C) ≅ R, with its kernel and cokernel.
#[derive(Clone, Debug)]
pub struct PsiResult {
    pub mode: PsiMode,
    pub l: usize,
    /// H¹(C) as a presented module.
    pub h1: PresentedModule,
    /// Cycle representatives of the generators of H¹(C).
    pub h1_cycles: Vec<FreeVector>,
    /// ∧^l H¹(C) on the l-subsets of the generators of H¹.
    pub wedge: PresentedModule,
    /// Ψ_C as a homomorphism ∧^l H¹(C) → R.
    pub map: ModuleHom,
    pub kernel: PresentedModule,
    /// Inclusion of the kernel into ∧^l H¹(C).
    pub kernel_inclusion: ModuleHom,
    /// R / image ideal.
    pub cokernel: PresentedModule,
    /// The values of Ψ_C on the wedge generators.
    pub image_ideal: Vec<RingElem>,
    /// The differential α (strict mode) or β (amplitude [1,2]).
    pub differential: Matrix,
}

/// Evaluates Ψ_C. Supported representatives: two-term complexes in degrees
/// [0,1] with H⁰ = 0 (the Ψ value of e_J is det[α | e_J]), and two-term
/// complexes in degrees [1,2] with pseudo-null H² (the value of Y is
/// det[Y | e_K] / det β_K for a column set K with det β_K a non-zero-divisor).
pub fn psi_map(ring: &Ring, c: &FreeComplex, l: usize) -> Result<PsiResult> {
    let chi = c.euler_char();
    if chi != l as i64 {
        return Err(Error::Precondition(format!("Euler characteristic {chi} differs from l = {l}")));
    }
    let (slo, shi) = c.support().unwrap_or((0, 0));
    if slo >= 0 && shi <= 1 {
        psi_strict(ring, c, l)
    } else if slo >= 1 && shi <= 2 {
        psi_amplitude12(ring, c, l)
    } else {
        Err(Error::Unsupported(format!("no two-term representative in degrees [0,1] or [1,2] (support [{slo},{shi}])")))
    }
}

fn psi_strict(ring: &Ring, c: &FreeComplex, l: usize) -> Result<PsiResult> {
    let alpha = c.diff(0);
    let a = alpha.ncols();
    let b = alpha.nrows();
    let cols = alpha.columns();
    if a > 0 && !kernel_mod(ring, &cols, &[], b)?.is_empty() {
        return Err(Error::Precondition("H^0(C) is nonzero".to_string()));
    }
    let h1 = PresentedModule::new(ring, b, cols.clone())?;
    let h1_cycles = h1.generators(ring);
    let wedge = exterior_power(ring, &h1, l)?;
    let subsets = combinations(b, l);
    let values: Vec<RingElem> = subsets
        .iter()
        .map(|j| {
            let mut m = alpha.clone();
            for &k in j {
                let e = Matrix::from_columns(b, &[unit(ring, b, k)]);
                m = Matrix::hstack(&m, &e);
            }
            m.det(ring)
        })
        .collect();
    finish_psi(ring, PsiMode::Strict, l, h1, h1_cycles, wedge, values, alpha)
}

fn psi_amplitude12(ring: &Ring, c: &FreeComplex, l: usize) -> Result<PsiResult> {
    let beta = c.diff(1);
    let r = beta.ncols();
    let s = beta.nrows();
    let h2 = PresentedModule::coker_of_matrix(ring, &beta)?;
    if !is_pseudo_null(ring, &h2)? {
        return Err(Error::Precondition("H^2(C) is not pseudo-null".to_string()));
    }
    let (h1, h1_cycles) = c.cohomology_with_cycles(ring, 1)?;
    let wedge = exterior_power(ring, &h1, l)?;
    // a column set K whose minor is a non-zero-divisor
    let (kset, dk) = combinations(r, s)
        .into_iter()
        .find_map(|k| {
            let rows: Vec<usize> = (0..s).collect();
            let d = ring.det(&beta.submatrix(&rows, &k));
            ring.is_non_zero_divisor(&d).then_some((k, d))
        })
        .ok_or_else(|| Error::Precondition("no maximal minor of the differential is a non-zero-divisor".to_string()))?;
    let mut values = Vec::new();
    for subset in combinations(h1_cycles.len(), l) {
        let mut cols: Vec<FreeVector> = subset.iter().map(|&i| h1_cycles[i].clone()).collect();
        cols.extend(kset.iter().map(|&k| unit(ring, r, k)));
        let num = Matrix::from_columns(r, &cols).det(ring);
        let v = exact_divide(ring, &num, &dk)?.ok_or_else(|| Error::NotWellDefined("Ψ value is not integral".to_string()))?;
        values.push(v);
    }
    finish_psi(ring, PsiMode::Amplitude12, l, h1, h1_cycles, wedge, values, beta)
}

#[allow(clippy::too_many_arguments)]
fn finish_psi(
    ring: &Ring,
    mode: PsiMode,
    l: usize,
    h1: PresentedModule,
    h1_cycles: Vec<FreeVector>,
    wedge: PresentedModule,
    values: Vec<RingElem>,
    differential: Matrix,
) -> Result<PsiResult> {
    let line = PresentedModule::free(ring, 1);
    let map = ModuleHom::new(ring, wedge.clone(), line, values.iter().map(|v| vec![v.clone()]).collect())?;
    let (kernel, kernel_inclusion) = kernel(ring, &map)?;
    let cokernel = cokernel(ring, &map)?;
    Ok(PsiResult { mode, l, h1, h1_cycles, wedge, map, kernel, kernel_inclusion, cokernel, image_ideal: values, differential })
}

/// Evaluates Ψ on an element of ∧^l H¹ given in wedge-generator coordinates.
pub fn psi_apply(ring: &Ring, psi: &PsiResult, w: &[RingElem]) -> RingElem {
    psi.map.apply(ring, w).into_iter().next().unwrap_or_default()
}

/// Outcome of the global kernel and cokernel laws for Ψ_C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiLaws {
    /// Ker Ψ equals the torsion submodule of ∧^l H¹.
    pub kernel_law: bool,
    /// Image ideal equals Fitt(E¹(H¹)) and Ann(Coker Ψ) equals it too
    /// (strict mode only).
    pub cokernel_law: Option<bool>,
    /// Image ideal equals the ideal of a×a minors of α (strict mode only).
    pub minors_law: Option<bool>,
    /// Fitt(E¹(H¹)) generators.
    pub fitt_e1: Vec<RingElem>,
}

pub fn psi_laws(ring: &Ring, psi: &PsiResult) -> Result<PsiLaws> {
    let (_, tor_inc) = torsion_submodule(ring, &psi.wedge)?;
    let kernel_law = psi.wedge.submodules_equal(ring, &tor_inc.images, &psi.kernel_inclusion.images)?;
    let e1 = ext(ring, &psi.h1, 1)?;
    let fitt_e1 = fitting_gens(ring, &e1, 0)?;
    let (cokernel_law, minors_law) = if psi.mode == PsiMode::Strict {
        let image_ok = ideals_equal(ring, &psi.image_ideal, &fitt_e1)?;
        let ann = annihilator(ring, &psi.cokernel)?.ideal_gens();
        let ann_ok = ideals_equal(ring, &ann, &fitt_e1)?;
        let a = psi.differential.ncols();
        let minors = minors_of_rows(ring, psi.differential.rows(), a, a);
        (Some(image_ok && ann_ok), Some(ideals_equal(ring, &psi.image_ideal, &minors)?))
    } else {
        (None, None)
    };
    Ok(PsiLaws { kernel_law, cokernel_law, minors_law, fitt_e1 })
}

/// Coker Ψ_C is pseudo-null, i.e. Ψ_C is a reflexive hull of ∧^l H¹.
pub fn reflexive_hull_detect(ring: &Ring, psi: &PsiResult) -> Result<bool> {
    is_pseudo_null(ring, &psi.cokernel)
}

/// The right-hand side of the reflexive-hull criterion: H¹(C)_tor is
/// pseudo-null.
pub fn h1_torsion_pseudo_null(ring: &Ring, psi: &PsiResult) -> Result<bool> {
    let (t, _) = torsion_submodule(ring, &psi.h1)?;
    is_pseudo_null(ring, &t)
}

/// The comparison map ∩^l H¹(C) → Det^{-1}(C) ≅ R and its certificate.
#[derive(Clone, Debug)]
pub struct BidualDet {
    pub map: ModuleHom,
    pub injective: bool,
    pub surjective: bool,
    /// The non-zero-divisor used to clear denominators.
    pub scalar: RingElem,
}

/// Extends Ψ_C to the exterior power bidual. Every generator ψ of ∩^l H¹
/// satisfies s·ψ = α^l(w) for a non-zero-divisor s annihilating the cokernel
/// of α^l; its image is Ψ(w)/s.
pub fn bidual_det_compare(ring: &Ring, psi: &PsiResult) -> Result<BidualDet> {
    if psi.l == 0 {
        return Err(Error::Precondition("the bidual comparison needs l >= 1".to_string()));
    }
    if !h1_torsion_pseudo_null(ring, psi)? {
        return Err(Error::Precondition("H^1(C)_tor is not pseudo-null".to_string()));
    }
    let bm = bidual_map(ring, &psi.h1, psi.l)?;
    let target = bm.map.target.clone();
    let coker = cokernel(ring, &bm.map)?;
    let ann = annihilator(ring, &coker)?.ideal_gens();
    let scalar =
        pick_nzd(ring, &ann).ok_or_else(|| Error::Precondition("cokernel of the bidual map is not torsion".to_string()))?;
    let lifter = if bm.map.images.is_empty() {
        None
    } else {
        Some(Lifter::new(ring, &bm.map.images, target.relations(), target.ngens())?)
    };
    let mut images = Vec::with_capacity(target.ngens());
    for k in 0..target.ngens() {
        let mut v = vec![RingElem::zero(); target.ngens()];
        v[k] = scalar.clone();
        let w = match &lifter {
            Some(lf) => {
                lf.lift(ring, &v)?.ok_or_else(|| Error::NotWellDefined("scalar does not kill the bidual cokernel".to_string()))?
            }
            None => Vec::new(),
        };
        let val = psi_apply(ring, psi, &w);
        let q = exact_divide(ring, &val, &scalar)?
            .ok_or_else(|| Error::NotWellDefined("bidual comparison is not integral".to_string()))?;
        images.push(vec![q]);
    }
    let map = ModuleHom::new(ring, target, PresentedModule::free(ring, 1), images)?;
    let injective = map.is_injective(ring)?;
    let surjective = map.is_surjective(ring)?;
    Ok(BidualDet { map, injective, surjective, scalar })
}

/// A non-zero-divisor among the generators, their pairwise sums, or their
/// sum.
pub fn pick_nzd(ring: &Ring, gens: &[RingElem]) -> Option<RingElem> {
    let gens: Vec<&RingElem> = gens.iter().filter(|g| !g.is_zero()).collect();
    if let Some(g) = gens.iter().find(|g| ring.is_non_zero_divisor(g)) {
        return Some((*g).clone());
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let s = ring.add(gens[i], gens[j]);
            if ring.is_non_zero_divisor(&s) {
                return Some(s);
            }
        }
    }
    let total = gens.iter().fold(RingElem::zero(), |acc, g| ring.add(&acc, g));
    ring.is_non_zero_divisor(&total).then_some(total)
}

/// d_R(C) for a complex that is acyclic over the total ring of fractions,
/// computed from non-zero-divisor minors Δ_i of the differentials (rows
/// I_i, columns complementary to I_{i−1}) as ∏ Δ_i^{(−1)^{i+1}}.
pub fn det_trivialization(ring: &Ring, c: &FreeComplex) -> Result<FractionalIdeal> {
    let deltas = trivializing_minors(ring, c)?;
    let mut num = ring.one();
    let mut den = ring.one();
    for (i, d) in deltas {
        if (i + 1).rem_euclid(2) == 0 {
            num = ring.mul(&num, &d);
        } else {
            den = ring.mul(&den, &d);
        }
    }
    FractionalIdeal::new(ring, vec![num], den)
}

/// The minors Δ_i used by [`det_trivialization`], keyed by degree.
pub fn trivializing_minors(ring: &Ring, c: &FreeComplex) -> Result<Vec<(i32, RingElem)>> {
    let mut out = Vec::new();
    if search_minors(ring, c, c.lo(), Vec::new(), &mut out)? {
        Ok(out)
    } else {
        Err(Error::Precondition("cohomology is not torsion (no non-zero-divisor minors)".to_string()))
    }
}

fn search_minors(ring: &Ring, c: &FreeComplex, i: i32, prev_rows: Vec<usize>, out: &mut Vec<(i32, RingElem)>) -> Result<bool> {
    let r = c.rank(i);
    let cols: Vec<usize> = (0..r).filter(|k| !prev_rows.contains(k)).collect();
    if i > c.hi() {
        return Ok(cols.is_empty());
    }
    let d = c.diff(i);
    for rows in combinations(d.nrows(), cols.len()) {
        let m = ring.det(&d.submatrix(&rows, &cols));
        if !ring.is_non_zero_divisor(&m) {
            continue;
        }
        out.push((i, m));
        if search_minors(ring, c, i + 1, rows, out)? {
            return Ok(true);
        }
        out.pop();
    }
    Ok(false)
}

/// The normalized generator of d_R(C) = Fitt(H²(C)) for C in degrees [1,2]
/// with H¹(C) = 0 and torsion H².
pub fn l_alg(ring: &Ring, c: &FreeComplex) -> Result<RingElem> {
    let (slo, shi) = c.support().ok_or_else(|| Error::Precondition("zero complex".to_string()))?;
    if slo < 1 || shi > 2 {
        return Err(Error::Precondition("complex is not concentrated in degrees [1,2]".to_string()));
    }
    if !c.cohomology(ring, 1)?.is_zero() {
        return Err(Error::Precondition("H^1(C) is nonzero".to_string()));
    }
    let d = det_trivialization(ring, c)?;
    if d.denominator != ring.one() || d.numerator.len() != 1 {
        return Err(Error::Unsupported("determinant ideal is not integral principal".to_string()));
    }
    Ok(ring.monic(&d.numerator[0]))
}
