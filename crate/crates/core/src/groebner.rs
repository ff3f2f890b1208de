//! Groebner bases for submodules of free R-modules.
//!
//! Computations run over the polynomial cover S = F_q[x, t] of R: every
//! generating set is extended by the relations (t_j^{n_j} - 1)·e_p for every
//! position p, so a basis in S describes a submodule of R^m. Module terms are
//! ordered position-over-term with smaller positions ranked higher, which
//! makes position elimination (kernels, lifts, intersections) a matter of
//! reading off basis elements whose leading position lies in a trailing
//! block.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::ring::{Mono, MonoOrder, Ring, RingElem};

/// Default cap on the number of basis vectors kept during Buchberger.
pub const DEFAULT_SIZE_LIMIT: usize = 20_000;

/// Element of a free module R^m: one ring element per position.
pub type FreeVector = Vec<RingElem>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Term {
    pos: u32,
    mono: Mono,
    c: Fq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly {
    terms: Vec<Term>,
    sugar: u32,
}

impl Poly {
    fn lead(&self) -> &Term {
        &self.terms[0]
    }
}

#[inline]
fn tcmp(order: MonoOrder, a: &Term, b: &Term) -> Ordering {
    match b.pos.cmp(&a.pos) {
        Ordering::Equal => order.cmp(&a.mono, &b.mono),
        o => o,
    }
}

struct Engine<'a> {
    ring: &'a Ring,
    order: MonoOrder,
}

impl<'a> Engine<'a> {
    fn to_poly(&self, v: &[RingElem]) -> Poly {
        let mut terms: Vec<Term> = v
            .iter()
            .enumerate()
            .flat_map(|(p, e)| e.terms().iter().map(move |&(mono, c)| Term { pos: p as u32, mono, c }))
            .collect();
        terms.sort_unstable_by(|a, b| tcmp(self.order, b, a));
        let sugar = terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0);
        Poly { terms, sugar }
    }

    fn to_vector(&self, p: &[Term], rank: usize) -> FreeVector {
        let mut buckets: Vec<Vec<(Mono, Fq)>> = vec![Vec::new(); rank];
        for t in p {
            buckets[t.pos as usize].push((t.mono, t.c));
        }
        buckets.into_iter().map(|b| self.ring.normal_form_terms(b)).collect()
    }

    /// `a - c·m·b` on sorted term lists.
    fn sub_mul(&self, a: &[Term], c: Fq, m: &Mono, b: &[Term]) -> Vec<Term> {
        let f = self.ring.field();
        let nc = f.neg(c);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let bt = Term { pos: b[j].pos, mono: b[j].mono.mul(m), c: f.mul(b[j].c, nc) };
            match tcmp(self.order, &a[i], &bt) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bt);
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(a[i].c, bt.c);
                    if s != 0 {
                        out.push(Term { c: s, ..a[i] });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            out.push(Term { pos: t.pos, mono: t.mono.mul(m), c: f.mul(t.c, nc) });
        }
        out
    }

    fn make_monic(&self, p: &mut Poly) {
        let f = self.ring.field();
        if let Some(lead) = p.terms.first() {
            if lead.c != 1 {
                let inv = f.inv(lead.c);
                for t in p.terms.iter_mut() {
                    t.c = f.mul(t.c, inv);
                }
            }
        }
    }
}

/// Divisor lookup table over a growing list of basis vectors.
struct Basis {
    polys: Vec<Poly>,
    active: Vec<bool>,
    by_pos: Vec<Vec<usize>>,
}

impl Basis {
    fn new(rank: usize) -> Self {
        Basis { polys: Vec::new(), active: Vec::new(), by_pos: vec![Vec::new(); rank] }
    }

    fn find_divisor(&self, t: &Term, only_active: bool, skip: Option<usize>) -> Option<usize> {
        self.by_pos[t.pos as usize]
            .iter()
            .copied()
            .find(|&i| Some(i) != skip && (!only_active || self.active[i]) && self.polys[i].lead().mono.divides(&t.mono))
    }
}

/// Full reduction of `p` modulo the basis; returns the remainder.
fn reduce_full(eng: &Engine<'_>, basis: &Basis, p: Vec<Term>, skip: Option<usize>, only_active: bool) -> Vec<Term> {
    let f = eng.ring.field();
    let mut rem: Vec<Term> = Vec::new();
    let mut cur = p;
    let mut start = 0;
    while start < cur.len() {
        let lt = cur[start];
        match basis.find_divisor(&lt, only_active, skip) {
            Some(i) => {
                let g = &basis.polys[i];
                let gl = g.lead();
                let m = gl.mono.quotient_of(&lt.mono);
                let c = f.div(lt.c, gl.c);
                cur = eng.sub_mul(&cur[start + 1..], c, &m, &g.terms[1..]);
                start = 0;
            }
            None => {
                rem.push(lt);
                start += 1;
            }
        }
    }
    rem
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    pos: u32,
    sugar: u32,
}

fn run_buchberger(eng: &Engine<'_>, rank: usize, gens: Vec<Poly>, limit: usize) -> Result<Basis> {
    let mut basis = Basis::new(rank);
    let mut pairs: Vec<Pair> = Vec::new();
    let mut gens = gens;
    gens.retain(|g| !g.terms.is_empty());
    // smaller leading terms first tends to reduce later generators early
    gens.sort_by(|a, b| tcmp(eng.order, a.lead(), b.lead()).then(a.terms.len().cmp(&b.terms.len())));
    for g in gens {
        let sugar = g.sugar;
        let r = reduce_full(eng, &basis, g.terms, None, false);
        if !r.is_empty() {
            let mut p = Poly { terms: r, sugar };
            eng.make_monic(&mut p);
            insert(&mut basis, &mut pairs, p);
        }
    }
    while !pairs.is_empty() {
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            let better = match a.sugar.cmp(&b.sugar) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    let ta = Term { pos: a.pos, mono: a.lcm, c: 1 };
                    let tb = Term { pos: b.pos, mono: b.lcm, c: 1 };
                    tcmp(eng.order, &ta, &tb) == Ordering::Less
                }
            };
            if better {
                best = k;
            }
        }
        let pair = pairs.swap_remove(best);
        let (gi, gj) = (&basis.polys[pair.i], &basis.polys[pair.j]);
        let mi = gi.lead().mono.quotient_of(&pair.lcm);
        let mj = gj.lead().mono.quotient_of(&pair.lcm);
        // leads are monic, so S = mi*gi - mj*gj with the leads cancelling
        let first: Vec<Term> = gi.terms[1..].iter().map(|t| Term { pos: t.pos, mono: t.mono.mul(&mi), c: t.c }).collect();
        let s = eng.sub_mul(&first, 1, &mj, &gj.terms[1..]);
        let r = reduce_full(eng, &basis, s, None, false);
        if !r.is_empty() {
            let mut p = Poly { terms: r, sugar: pair.sugar };
            eng.make_monic(&mut p);
            insert(&mut basis, &mut pairs, p);
            let live = basis.active.iter().filter(|&&a| a).count();
            if live > limit {
                return Err(Error::GbSizeLimit { limit, size: live });
            }
        }
    }
    Ok(basis)
}

/// Gebauer-Moeller update without the product criterion (which is unsound
/// for modules).
fn insert(basis: &mut Basis, pairs: &mut Vec<Pair>, h: Poly) {
    let k = basis.polys.len();
    let hl = *h.lead();
    let hdeg = hl.mono.degree();
    let pos = hl.pos as usize;
    // candidate new pairs
    let mut cands: Vec<Pair> = basis.by_pos[pos]
        .iter()
        .copied()
        .filter(|&i| basis.active[i])
        .map(|i| {
            let g = &basis.polys[i];
            let gl = g.lead().mono;
            let lcm = gl.lcm(&hl.mono);
            let sugar = (g.sugar + lcm.degree() - gl.degree()).max(h.sugar + lcm.degree() - hdeg);
            Pair { i, j: k, lcm, pos: hl.pos, sugar }
        })
        .collect();
    // M and F criteria on the new pairs
    let mut kept: Vec<Pair> = Vec::new();
    while let Some(p) = cands.pop() {
        let dominated = cands.iter().chain(kept.iter()).any(|o| o.lcm.divides(&p.lcm));
        if !dominated {
            kept.push(p);
        }
    }
    // B criterion on old pairs
    pairs.retain(|p| {
        if p.pos != hl.pos || !hl.mono.divides(&p.lcm) {
            return true;
        }
        let li = basis.polys[p.i].lead().mono.lcm(&hl.mono);
        let lj = basis.polys[p.j].lead().mono.lcm(&hl.mono);
        li == p.lcm || lj == p.lcm
    });
    // retire basis elements made redundant by h
    for &i in &basis.by_pos[pos] {
        if basis.active[i] && hl.mono.divides(&basis.polys[i].lead().mono) {
            basis.active[i] = false;
        }
    }
    kept.reverse();
    pairs.extend(kept);
    basis.polys.push(h);
    basis.active.push(true);
    basis.by_pos[pos].push(k);
}

/// Reduced Groebner basis of a submodule of R^rank (relations of R included).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gb {
    rank: usize,
    order: MonoOrder,
    polys: Vec<Poly>,
}

/// Relations (t_j^{n_j} - 1)·e_p for all positions.
fn relation_polys(ring: &Ring, rank: usize, order: MonoOrder) -> Vec<Poly> {
    let d = ring.d();
    let f = ring.field();
    let mut out = Vec::new();
    for p in 0..rank {
        for (j, &n) in ring.group_orders().iter().enumerate() {
            let mut m = Mono::ONE;
            m.0[d + j] = n as u16;
            let mut terms = vec![Term { pos: p as u32, mono: m, c: 1 }, Term { pos: p as u32, mono: Mono::ONE, c: f.neg(1) }];
            if n == 0 {
                continue;
            }
            terms.sort_unstable_by(|a, b| tcmp(order, b, a));
            out.push(Poly { terms, sugar: n });
        }
    }
    out
}

impl Gb {
    /// Computes the reduced Groebner basis of the submodule of R^rank
    /// generated by `gens`, using the ring's term order.
    pub fn new(ring: &Ring, rank: usize, gens: &[FreeVector]) -> Result<Self> {
        Self::with_order(ring, rank, gens, ring.order(), DEFAULT_SIZE_LIMIT)
    }

    /// As [`Gb::new`] with an explicit monomial order and size safeguard.
    pub fn with_order(ring: &Ring, rank: usize, gens: &[FreeVector], order: MonoOrder, limit: usize) -> Result<Self> {
        for g in gens {
            if g.len() != rank {
                return Err(Error::RankMismatch { expected: rank, found: g.len() });
            }
        }
        let eng = Engine { ring, order };
        let mut polys: Vec<Poly> = gens.iter().map(|g| eng.to_poly(g)).collect();
        polys.extend(relation_polys(ring, rank, order));
        let basis = run_buchberger(&eng, rank, polys, limit)?;
        // interreduce the active (minimal) elements
        let mut out = Vec::new();
        let actives: Vec<usize> = (0..basis.polys.len()).filter(|&i| basis.active[i]).collect();
        for &i in &actives {
            let p = &basis.polys[i];
            let tail = reduce_full(&eng, &basis, p.terms[1..].to_vec(), Some(i), true);
            let mut terms = Vec::with_capacity(tail.len() + 1);
            terms.push(p.terms[0]);
            terms.extend(tail);
            out.push(Poly { terms, sugar: p.sugar });
        }
        out.sort_by(|a, b| tcmp(order, b.lead(), a.lead()));
        Ok(Gb { rank, order, polys: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> MonoOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn as_basis(&self) -> Basis {
        let mut b = Basis::new(self.rank);
        for (i, p) in self.polys.iter().enumerate() {
            b.by_pos[p.lead().pos as usize].push(i);
            b.polys.push(p.clone());
            b.active.push(true);
        }
        b
    }

    /// Normal form of `v` modulo the submodule; zero iff `v` is a member.
    pub fn reduce(&self, ring: &Ring, v: &[RingElem]) -> Result<FreeVector> {
        if v.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: v.len() });
        }
        let eng = Engine { ring, order: self.order };
        let basis = self.as_basis();
        let r = reduce_full(&eng, &basis, eng.to_poly(v).terms, None, false);
        Ok(eng.to_vector(&r, self.rank))
    }

    /// Normal forms of many vectors, reusing the divisor table.
    pub fn reduce_many(&self, ring: &Ring, vs: &[FreeVector]) -> Result<Vec<FreeVector>> {
        let eng = Engine { ring, order: self.order };
        let basis = self.as_basis();
        vs.iter()
            .map(|v| {
                if v.len() != self.rank {
                    return Err(Error::RankMismatch { expected: self.rank, found: v.len() });
                }
                let r = reduce_full(&eng, &basis, eng.to_poly(v).terms, None, false);
                Ok(eng.to_vector(&r, self.rank))
            })
            .collect()
    }

    pub fn contains(&self, ring: &Ring, v: &[RingElem]) -> Result<bool> {
        Ok(self.reduce(ring, v)?.iter().all(|e| e.is_zero()))
    }

    /// True if every vector in `vs` is a member.
    pub fn contains_all(&self, ring: &Ring, vs: &[FreeVector]) -> Result<bool> {
        Ok(self.reduce_many(ring, vs)?.iter().all(|v| v.iter().all(|e| e.is_zero())))
    }

    /// Basis vectors as elements of R^rank, dropping those that vanish in R
    /// (the adjoined group relations).
    pub fn elements(&self, ring: &Ring) -> Vec<FreeVector> {
        let eng = Engine { ring, order: self.order };
        self.polys.iter().map(|p| eng.to_vector(&p.terms, self.rank)).filter(|v| v.iter().any(|e| !e.is_zero())).collect()
    }

    /// Leading (position, monomial) pairs.
    pub fn leading_terms(&self) -> Vec<(usize, Mono)> {
        self.polys.iter().map(|p| (p.lead().pos as usize, p.lead().mono)).collect()
    }

    /// True if the module is all of R^rank.
    pub fn is_full(&self) -> bool {
        (0..self.rank).all(|pos| self.polys.iter().any(|p| p.lead().pos as usize == pos && p.lead().mono.is_one()))
    }

    /// Checks Buchberger's criterion directly: every S-vector reduces to 0.
    pub fn satisfies_buchberger_criterion(&self, ring: &Ring) -> bool {
        let eng = Engine { ring, order: self.order };
        let basis = self.as_basis();
        for i in 0..self.polys.len() {
            for j in (i + 1)..self.polys.len() {
                let (a, b) = (&self.polys[i], &self.polys[j]);
                if a.lead().pos != b.lead().pos {
                    continue;
                }
                let lcm = a.lead().mono.lcm(&b.lead().mono);
                let ma = a.lead().mono.quotient_of(&lcm);
                let mb = b.lead().mono.quotient_of(&lcm);
                let first: Vec<Term> = a.terms[1..].iter().map(|t| Term { pos: t.pos, mono: t.mono.mul(&ma), c: t.c }).collect();
                let s = eng.sub_mul(&first, 1, &mb, &b.terms[1..]);
                if !reduce_full(&eng, &basis, s, None, false).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Line-oriented text dump: one basis vector per line as
    /// `pos:poly | pos:poly ...`.
    pub fn dump(&self, ring: &Ring) -> String {
        let eng = Engine { ring, order: self.order };
        let mut s = String::new();
        for p in &self.polys {
            let v = eng.to_vector(&p.terms, self.rank);
            let parts: Vec<String> =
                v.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(i, e)| format!("{}:{}", i, ring.format(e))).collect();
            let _ = writeln!(s, "{}", parts.join(" | "));
        }
        s
    }
}

/// A generating set of a submodule of R^rank together with its reduced
/// Groebner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub rank: usize,
    pub gens: Vec<FreeVector>,
    pub gb: Gb,
}

impl Submodule {
    pub fn new(ring: &Ring, rank: usize, gens: Vec<FreeVector>) -> Result<Self> {
        let gb = Gb::new(ring, rank, &gens)?;
        Ok(Submodule { rank, gens, gb })
    }

    /// Ideal of R generated by `gens`.
    pub fn ideal(ring: &Ring, gens: &[RingElem]) -> Result<Self> {
        Self::new(ring, 1, gens.iter().map(|g| vec![g.clone()]).collect())
    }

    pub fn contains(&self, ring: &Ring, v: &[RingElem]) -> Result<bool> {
        self.gb.contains(ring, v)
    }

    /// Submodule inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, ring: &Ring, other: &Submodule) -> Result<bool> {
        other.gb.contains_all(ring, &self.gens)
    }

    pub fn equals(&self, ring: &Ring, other: &Submodule) -> Result<bool> {
        Ok(self.is_subset_of(ring, other)? && other.is_subset_of(ring, self)?)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(|v| v.iter().all(|e| e.is_zero()))
    }

    /// Generators of a rank-1 submodule as ring elements.
    pub fn ideal_gens(&self) -> Vec<RingElem> {
        assert_eq!(self.rank, 1);
        self.gens.iter().map(|v| v[0].clone()).collect()
    }
}

/// Position-elimination engine: a Groebner basis of
/// {(ψ_j, e_j)} ∪ {(n, 0)} in R^{m+k}. Used for lifting vectors through the
/// map R^k → R^m/N and for kernels of that map.
#[derive(Clone, Debug)]
pub struct Lifter {
    m: usize,
    k: usize,
    gb: Gb,
}

impl Lifter {
    pub fn new(ring: &Ring, targets: &[FreeVector], modulo: &[FreeVector], m: usize) -> Result<Self> {
        let k = targets.len();
        let mut gens = Vec::with_capacity(k + modulo.len());
        for (j, t) in targets.iter().enumerate() {
            if t.len() != m {
                return Err(Error::RankMismatch { expected: m, found: t.len() });
            }
            let mut v = t.clone();
            v.resize(m + k, RingElem::zero());
            v[m + j] = ring.one();
            gens.push(v);
        }
        for n in modulo {
            if n.len() != m {
                return Err(Error::RankMismatch { expected: m, found: n.len() });
            }
            let mut v = n.clone();
            v.resize(m + k, RingElem::zero());
            gens.push(v);
        }
        let gb = Gb::new(ring, m + k, &gens)?;
        Ok(Lifter { m, k, gb })
    }

    /// Coefficients c with v - Σ c_j ψ_j ∈ N, or `None` if v ∉ ⟨ψ⟩ + N.
    pub fn lift(&self, ring: &Ring, v: &[RingElem]) -> Result<Option<Vec<RingElem>>> {
        if v.len() != self.m {
            return Err(Error::RankMismatch { expected: self.m, found: v.len() });
        }
        let mut w = v.to_vec();
        w.resize(self.m + self.k, RingElem::zero());
        let r = self.gb.reduce(ring, &w)?;
        if r[..self.m].iter().any(|e| !e.is_zero()) {
            return Ok(None);
        }
        Ok(Some(r[self.m..].iter().map(|e| ring.neg(e)).collect()))
    }

    /// Generators of {λ ∈ R^k : Σ λ_j ψ_j ∈ N}.
    pub fn kernel(&self, ring: &Ring) -> Vec<FreeVector> {
        self.gb
            .elements(ring)
            .into_iter()
            .filter(|v| v[..self.m].iter().all(|e| e.is_zero()))
            .map(|v| v[self.m..].to_vec())
            .filter(|v| v.iter().any(|e| !e.is_zero()))
            .collect()
    }
}

/// Generators of {λ ∈ R^k : Σ λ_j ψ_j ∈ ⟨modulo⟩} for vectors ψ_j ∈ R^m.
pub fn kernel_mod(ring: &Ring, targets: &[FreeVector], modulo: &[FreeVector], m: usize) -> Result<Vec<FreeVector>> {
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    Ok(Lifter::new(ring, targets, modulo, m)?.kernel(ring))
}

/// Full syzygy module of `gens ⊆ R^m`, including syzygies forced by the
/// group relations.
pub fn syzygies(ring: &Ring, gens: &[FreeVector], m: usize) -> Result<Vec<FreeVector>> {
    kernel_mod(ring, gens, &[], m)
}

/// `target : f = {v : f·v ∈ target}`.
pub fn colon(ring: &Ring, target: &Submodule, f: &RingElem) -> Result<Submodule> {
    let m = target.rank;
    let images: Vec<FreeVector> = (0..m)
        .map(|i| {
            let mut v = vec![RingElem::zero(); m];
            v[i] = f.clone();
            v
        })
        .collect();
    let gens = kernel_mod(ring, &images, &target.gens, m)?;
    Submodule::new(ring, m, gens)
}

/// `target : f^∞`, by iterating colons until the chain stabilizes.
pub fn saturate(ring: &Ring, target: &Submodule, f: &RingElem) -> Result<Submodule> {
    let mut cur = target.clone();
    loop {
        let next = colon(ring, &cur, f)?;
        if next.is_subset_of(ring, &cur)? {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Ideal quotient (I : J) = {a : a·J ⊆ I}.
pub fn ideal_quotient(ring: &Ring, i: &Submodule, j: &[RingElem]) -> Result<Submodule> {
    let k = j.len();
    if k == 0 {
        return Submodule::ideal(ring, &[ring.one()]);
    }
    let target = vec![j.to_vec()];
    let mut modulo = Vec::new();
    for p in 0..k {
        for g in &i.gens {
            let mut v = vec![RingElem::zero(); k];
            v[p] = g[0].clone();
            modulo.push(v);
        }
    }
    let gens = kernel_mod(ring, &target, &modulo, k)?;
    Submodule::new(ring, 1, gens)
}

/// Intersection of two submodules of R^m.
pub fn intersect(ring: &Ring, a: &Submodule, b: &Submodule) -> Result<Submodule> {
    let m = a.rank;
    // λ ∈ R^{|a|} with Σ λ_i a_i ∈ ⟨b⟩; image Σ λ_i a_i spans a ∩ b
    let lam = kernel_mod(ring, &a.gens, &b.gens, m)?;
    let gens = lam.iter().map(|l| combine(ring, l, &a.gens, m)).filter(|v| v.iter().any(|e| !e.is_zero())).collect();
    Submodule::new(ring, m, gens)
}

/// Σ λ_j v_j for vectors v_j ∈ R^m.
pub fn combine(ring: &Ring, coeffs: &[RingElem], vs: &[FreeVector], m: usize) -> FreeVector {
    let mut out = vec![RingElem::zero(); m];
    for (c, v) in coeffs.iter().zip(vs) {
        if c.is_zero() {
            continue;
        }
        for (o, e) in out.iter_mut().zip(v) {
            if !e.is_zero() {
                *o = ring.add(o, &ring.mul(c, e));
            }
        }
    }
    out
}

/// Generators of I ∩ Λ for an ideal I of R, by eliminating the group
/// variables with a block order.
pub fn contract_to_lambda(ring: &Ring, ideal: &Submodule) -> Result<Vec<RingElem>> {
    assert_eq!(ideal.rank, 1);
    if ring.group_rank() == 0 {
        return Ok(ideal.gb.elements(ring).into_iter().map(|v| v[0].clone()).collect());
    }
    let order = MonoOrder::Block { high: ring.t_mask() };
    let gb = Gb::with_order(ring, 1, &ideal.gens, order, DEFAULT_SIZE_LIMIT)?;
    Ok(gb.elements(ring).into_iter().map(|v| v[0].clone()).filter(|e| ring.in_lambda(e)).collect())
}

/// Krull dimension of Λ/I for an ideal I ⊆ Λ given by generators; -1 for
/// the unit ideal.
pub fn krull_dim(ring: &Ring, gens: &[RingElem]) -> Result<i32> {
    if gens.iter().any(|g| !ring.in_lambda(g)) {
        return Err(Error::NotInLambda);
    }
    let ideal = Submodule::ideal(ring, gens)?;
    let xmask = ring.x_mask();
    let leads: Vec<Mono> = ideal.gb.leading_terms().into_iter().map(|(_, m)| m).filter(|m| m.supported_in(xmask)).collect();
    if leads.iter().any(|m| m.is_one()) {
        return Ok(-1);
    }
    let d = ring.d();
    let mut best = 0;
    for subset in 0u16..(1 << d) {
        let size = subset.count_ones() as i32;
        if size <= best {
            continue;
        }
        if leads.iter().all(|m| !m.supported_in(subset)) {
            best = size;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn lam() -> Ring {
        Ring::new(RingSpec::new(3, 2, &[])).unwrap()
    }

    fn r3() -> Ring {
        Ring::new(RingSpec::new(3, 2, &[3])).unwrap()
    }

    fn p(r: &Ring, s: &str) -> RingElem {
        r.parse(s).unwrap()
    }

    #[test]
    fn small_bases() {
        let r = lam();
        let gb = Gb::new(&r, 1, &[vec![p(&r, "x")], vec![p(&r, "y")]]).unwrap();
        assert_eq!(gb.elements(&r), vec![vec![p(&r, "x")], vec![p(&r, "y")]]);
        let gb = Gb::new(&r, 1, &[vec![p(&r, "x^2+x*y")]]).unwrap();
        assert_eq!(gb.elements(&r), vec![vec![p(&r, "x^2+x*y")]]);
        let gb = Gb::new(&r, 2, &[vec![p(&r, "x"), p(&r, "y")]]).unwrap();
        assert_eq!(gb.elements(&r), vec![vec![p(&r, "x"), p(&r, "y")]]);
    }

    #[test]
    fn reductions() {
        let r = lam();
        let gx = Gb::new(&r, 1, &[vec![p(&r, "x")]]).unwrap();
        assert!(gx.reduce(&r, &[p(&r, "x^2")]).unwrap()[0].is_zero());
        assert_eq!(gx.reduce(&r, &[p(&r, "x*y+y")]).unwrap()[0], p(&r, "y"));
        let gxy = Gb::new(&r, 1, &[vec![p(&r, "x")], vec![p(&r, "y")]]).unwrap();
        assert_eq!(gxy.reduce(&r, &[r.one()]).unwrap()[0], r.one());
        assert!(gxy.reduce(&r, &[r.one(), r.one()]).is_err());
    }

    #[test]
    fn syzygy_examples() {
        let r = lam();
        let s = syzygies(&r, &[vec![p(&r, "x")], vec![p(&r, "y")]], 1).unwrap();
        assert_eq!(s.len(), 1);
        let v = &s[0];
        assert_eq!(r.add(&r.mul(&v[0], &p(&r, "x")), &r.mul(&v[1], &p(&r, "y"))), r.zero());
        assert!(v[0] == p(&r, "y") || v[0] == p(&r, "-y"));
        assert!(syzygies(&r, &[vec![p(&r, "x")]], 1).unwrap().is_empty());
        let r = r3();
        let s = syzygies(&r, &[vec![p(&r, "t-1")]], 1).unwrap();
        let expect = Submodule::ideal(&r, &[p(&r, "(t-1)^2")]).unwrap();
        let got = Submodule::new(&r, 1, s).unwrap();
        assert!(got.equals(&r, &expect).unwrap());
    }

    #[test]
    fn colon_and_saturation() {
        let r = lam();
        let i = Submodule::ideal(&r, &[p(&r, "x^2*y")]).unwrap();
        let c = colon(&r, &i, &p(&r, "y")).unwrap();
        assert!(c.equals(&r, &Submodule::ideal(&r, &[p(&r, "x^2")]).unwrap()).unwrap());
        let s = saturate(&r, &i, &p(&r, "y")).unwrap();
        assert!(s.equals(&r, &Submodule::ideal(&r, &[p(&r, "x^2")]).unwrap()).unwrap());
        let r = r3();
        let zero = Submodule::new(&r, 1, vec![]).unwrap();
        let ann = colon(&r, &zero, &p(&r, "t-1")).unwrap();
        assert!(ann.equals(&r, &Submodule::ideal(&r, &[p(&r, "(t-1)^2")]).unwrap()).unwrap());
    }

    #[test]
    fn krull_dimensions() {
        let r = lam();
        assert_eq!(krull_dim(&r, &[p(&r, "x")]).unwrap(), 1);
        assert_eq!(krull_dim(&r, &[p(&r, "x"), p(&r, "y")]).unwrap(), 0);
        assert_eq!(krull_dim(&r, &[]).unwrap(), 2);
        assert_eq!(krull_dim(&r, &[p(&r, "x+1"), p(&r, "x")]).unwrap(), -1);
        let r = r3();
        assert_eq!(krull_dim(&r, &[p(&r, "t")]), Err(Error::NotInLambda));
    }

    #[test]
    fn lifting_recovers_coefficients() {
        let r = lam();
        let targets = vec![vec![p(&r, "x")], vec![p(&r, "y")]];
        let l = Lifter::new(&r, &targets, &[], 1).unwrap();
        let v = vec![p(&r, "x^2 + x*y + 2*y")];
        let c = l.lift(&r, &v).unwrap().unwrap();
        assert_eq!(combine(&r, &c, &targets, 1), v);
        assert!(l.lift(&r, &[r.one()]).unwrap().is_none());
    }

    #[test]
    fn elimination_to_lambda() {
        let r = r3();
        let i = Submodule::ideal(&r, &[p(&r, "t-1"), p(&r, "x*t - y")]).unwrap();
        let c = contract_to_lambda(&r, &i).unwrap();
        let ci = Submodule::ideal(&r, &c).unwrap();
        assert!(ci.equals(&r, &Submodule::ideal(&r, &[p(&r, "x-y")]).unwrap()).unwrap());
    }

    #[test]
    fn criterion_holds() {
        let r = r3();
        let gb = Gb::new(
            &r,
            2,
            &[vec![p(&r, "x*t+y"), p(&r, "t-1")], vec![p(&r, "y^2"), p(&r, "x*y+t^2")], vec![p(&r, "x-1"), r.zero()]],
        )
        .unwrap();
        assert!(gb.satisfies_buchberger_criterion(&r));
    }
}
