//! Brute-force F_p linear-algebra oracles, independent of the Gröbner
//! engine. Polynomials are dense exponent maps multiplied by hand, ideals
//! and submodules are compared degree by degree as F_p-spans, and Fitting
//! ideals come from Leibniz expansion. Only prime fields are supported.

#![allow(dead_code)]

use std::collections::BTreeMap;

use detpsi_core::groebner::syzygies;
use detpsi_core::module::{annihilator, ext, fitting_gens, torsion_submodule, PresentedModule};
use detpsi_core::rng::{child_seed, seeded, Rng};
use detpsi_core::{Ring, RingElem, RingSpec};
use rand::Rng as _;

pub type Exp = Vec<u16>;
pub type Poly = BTreeMap<Exp, u32>;

/// Arithmetic in F_p[x_1..x_d][t_1..t_k]/(t_j^{n_j} − 1).
#[derive(Clone, Debug)]
pub struct Alg {
    pub p: u32,
    pub d: usize,
    pub orders: Vec<u32>,
}

impl Alg {
    pub fn of(ring: &Ring) -> Self {
        Alg { p: ring.spec().q, d: ring.d(), orders: ring.group_orders().to_vec() }
    }

    fn nvars(&self) -> usize {
        self.d + self.orders.len()
    }

    pub fn xdeg(&self, e: &Exp) -> u32 {
        e[..self.d].iter().map(|&v| v as u32).sum()
    }

    fn push(&self, out: &mut Poly, e: Exp, c: u32) {
        let slot = out.entry(e.clone()).or_insert(0);
        *slot = (*slot + c) % self.p;
        if *slot == 0 {
            out.remove(&e);
        }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = a.clone();
        for (e, c) in b {
            self.push(&mut out, e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, a: &Poly, c: u32) -> Poly {
        a.iter()
            .filter_map(|(e, v)| {
                let w = (v * c) % self.p;
                (w != 0).then(|| (e.clone(), w))
            })
            .collect()
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.scale(a, self.p - 1)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Exp = (0..self.nvars())
                    .map(|i| {
                        let s = ea[i] + eb[i];
                        if i < self.d {
                            s
                        } else {
                            s % self.orders[i - self.d] as u16
                        }
                    })
                    .collect();
                self.push(&mut out, e, (ca * cb) % self.p);
            }
        }
        out
    }

    pub fn mono(&self, e: &Exp) -> Poly {
        Poly::from([(e.clone(), 1)])
    }

    pub fn import(&self, ring: &Ring, a: &RingElem) -> Poly {
        ring.to_term_list(a).into_iter().collect()
    }

    pub fn export(&self, ring: &Ring, a: &Poly) -> RingElem {
        let terms: Vec<(Vec<u16>, u32)> = a.iter().map(|(e, c)| (e.clone(), *c)).collect();
        ring.from_term_list(&terms).expect("valid terms")
    }

    /// Every exponent vector of the group part, with zero x-part.
    fn group_monos(&self) -> Vec<Exp> {
        let mut out = vec![vec![0u16; self.nvars()]];
        for (j, &n) in self.orders.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..n as u16).map(move |k| {
                        let mut f = e.clone();
                        f[self.d + j] = k;
                        f
                    })
                })
                .collect();
        }
        out
    }

    /// All monomials of x-degree exactly `deg`, times every group element.
    pub fn monos_deg(&self, deg: u32) -> Vec<Exp> {
        let mut xs: Vec<Exp> = vec![vec![0u16; self.nvars()]];
        for i in 0..self.d {
            let mut next = Vec::new();
            for e in &xs {
                let used: u32 = e[..i].iter().map(|&v| v as u32).sum();
                let range = if i + 1 == self.d { (deg - used)..=(deg - used) } else { 0..=(deg - used) };
                for k in range {
                    let mut f = e.clone();
                    f[i] = k as u16;
                    next.push(f);
                }
            }
            xs = next;
        }
        if self.d == 0 && deg > 0 {
            xs.clear();
        }
        let gs = self.group_monos();
        xs.iter()
            .flat_map(|x| {
                gs.iter().map(move |g| {
                    let mut e = x.clone();
                    e[self.d..].copy_from_slice(&g[self.d..]);
                    e
                })
            })
            .collect()
    }

    pub fn monos_below(&self, k: u32) -> Vec<Exp> {
        (0..k).flat_map(|e| self.monos_deg(e)).collect()
    }

    pub fn hom_part(&self, a: &Poly, deg: u32) -> Poly {
        a.iter().filter(|(e, _)| self.xdeg(e) == deg).map(|(e, c)| (e.clone(), *c)).collect()
    }

    pub fn degrees(&self, a: &Poly) -> Vec<u32> {
        let mut ds: Vec<u32> = a.keys().map(|e| self.xdeg(e)).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn truncate(&self, a: &Poly, k: u32) -> Poly {
        a.iter().filter(|(e, _)| self.xdeg(e) < k).map(|(e, c)| (e.clone(), *c)).collect()
    }

    /// Leibniz expansion over all permutations.
    pub fn det(&self, m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        if n == 0 {
            return self.mono(&vec![0; self.nvars()]);
        }
        let mut total = Poly::new();
        for perm in permutations(n) {
            let mut term = self.mono(&vec![0; self.nvars()]);
            for (i, &j) in perm.iter().enumerate() {
                term = self.mul(&term, &m[i][j]);
            }
            if inversions(&perm) % 2 == 1 {
                term = self.neg(&term);
            }
            total = self.add(&total, &term);
        }
        total
    }

    fn inv(&self, c: u32) -> u32 {
        (1..self.p).find(|v| v * c % self.p == 1).expect("prime field")
    }

    /// Random element, homogeneous of x-degree `deg`, with random group
    /// exponents on every term.
    pub fn random_hom(&self, rng: &mut Rng, deg: u32, max_terms: usize) -> Poly {
        let monos = self.monos_deg(deg);
        let mut out = Poly::new();
        for _ in 0..rng.random_range(1..=max_terms) {
            let e = monos[rng.random_range(0..monos.len())].clone();
            self.push(&mut out, e, rng.random_range(1..self.p));
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Row-echelon span over F_p of sparse vectors with ordered keys. Each row
/// is normalized at its smallest key.
#[derive(Clone, Debug)]
pub struct Span<K: Ord + Clone> {
    p: u32,
    rows: BTreeMap<K, BTreeMap<K, u32>>,
}

impl<K: Ord + Clone> Span<K> {
    pub fn new(p: u32) -> Self {
        Span { p, rows: BTreeMap::new() }
    }

    pub fn reduce(&self, v: &BTreeMap<K, u32>) -> BTreeMap<K, u32> {
        let mut v = v.clone();
        while let Some((k, c)) = v.iter().find(|(k, _)| self.rows.contains_key(*k)).map(|(k, c)| (k.clone(), *c)) {
            for (kk, rc) in &self.rows[&k] {
                let slot = v.entry(kk.clone()).or_insert(0);
                *slot = (*slot + self.p - (rc * c) % self.p) % self.p;
                if *slot == 0 {
                    v.remove(kk);
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether it was independent.
    pub fn insert(&mut self, v: &BTreeMap<K, u32>) -> bool {
        let r = self.reduce(v);
        let Some((k, c)) = r.iter().next().map(|(k, c)| (k.clone(), *c)) else {
            return false;
        };
        let inv = (1..self.p).find(|x| x * c % self.p == 1).expect("prime field");
        let row = r.into_iter().map(|(kk, x)| (kk, x * inv % self.p)).collect();
        self.rows.insert(k, row);
        true
    }

    pub fn contains(&self, v: &BTreeMap<K, u32>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &BTreeMap<K, u32>> {
        self.rows.values()
    }
}

pub type Vector = Vec<Poly>;
type VKey = (usize, Exp);

fn keyed(v: &[Poly]) -> BTreeMap<VKey, u32> {
    v.iter().enumerate().flat_map(|(i, p)| p.iter().map(move |(e, c)| ((i, e.clone()), *c))).collect()
}

fn vec_mul(alg: &Alg, f: &Poly, v: &[Poly]) -> Vector {
    v.iter().map(|p| alg.mul(f, p)).collect()
}

/// Splits a vector into pieces of total degree e, where entry i has x-degree `e - shift_i`.
fn graded_parts(alg: &Alg, v: &[Poly], shifts: &[u32]) -> BTreeMap<u32, Vector> {
    let mut out: BTreeMap<u32, Vector> = BTreeMap::new();
    for (i, p) in v.iter().enumerate() {
        for (e, c) in p {
            let deg = alg.xdeg(e) + shifts[i];
            let entry = out.entry(deg).or_insert_with(|| vec![Poly::new(); v.len()]);
            entry[i].insert(e.clone(), *c);
        }
    }
    out
}

/// Degree-`deg` part of the ideal generated by homogeneous `gens`.
fn ideal_span(alg: &Alg, gens: &[Poly], deg: u32) -> Span<Exp> {
    let mut s = Span::new(alg.p);
    for g in gens {
        let Some(&dg) = alg.degrees(g).first() else { continue };
        if dg > deg {
            continue;
        }
        for m in alg.monos_deg(deg - dg) {
            s.insert(&alg.mul(&alg.mono(&m), g));
        }
    }
    s
}

fn homogeneous_parts(alg: &Alg, gens: &[Poly]) -> Vec<Poly> {
    gens.iter().flat_map(|g| alg.degrees(g).into_iter().map(move |d| alg.hom_part(g, d))).collect()
}

/// Equality of homogeneous ideals: every generator of one side lies in the
/// degree-matching span of the other.
pub fn homogeneous_ideals_equal(alg: &Alg, a: &[Poly], b: &[Poly]) -> Result<(), String> {
    let a = homogeneous_parts(alg, a);
    let b = homogeneous_parts(alg, b);
    for (x, y, name) in [(&a, &b, "first"), (&b, &a, "second")] {
        for g in x {
            let deg = alg.degrees(g)[0];
            if !ideal_span(alg, y, deg).contains(g) {
                return Err(format!("a generator of the {name} ideal of degree {deg} is missing from the other"));
            }
        }
    }
    Ok(())
}

/// Outcome of one oracle family.
#[derive(Debug, Default)]
pub struct Outcome {
    /// Random modules built.
    pub modules: usize,
    /// Comparisons made; a module may be compared more than once.
    pub cases: usize,
    pub discrepancies: Vec<String>,
}

impl Outcome {
    fn record(&mut self, case: String, r: Result<(), String>) {
        self.cases += 1;
        if let Err(e) = r {
            self.discrepancies.push(format!("{case}: {e}"));
        }
    }

    pub fn merge(&mut self, other: Outcome) {
        self.modules += other.modules;
        self.cases += other.cases;
        self.discrepancies.extend(other.discrepancies);
    }
}

fn ring_for(index: usize, with_group: bool) -> Ring {
    let spec = match index % if with_group { 3 } else { 2 } {
        0 => RingSpec::new(3, 1, &[]),
        1 => RingSpec::new(3, 2, &[]),
        _ => RingSpec::new(3, 2, &[3]),
    };
    Ring::new(spec).expect("ring")
}

fn lib_module(alg: &Alg, ring: &Ring, ngens: usize, rels: &[Vector]) -> PresentedModule {
    let rels = rels.iter().map(|r| r.iter().map(|p| alg.export(ring, p)).collect()).collect();
    PresentedModule::new(ring, ngens, rels).expect("module")
}

/// Random homogeneous relation columns: column c has degree `degs[c]`,
/// about a third of its entries zero.
fn random_columns(alg: &Alg, rng: &mut Rng, nrows: usize, degs: &[u32]) -> Vec<Vector> {
    degs.iter()
        .map(|&dg| {
            (0..nrows).map(|_| if rng.random_range(0..3) == 0 { Poly::new() } else { alg.random_hom(rng, dg, 2) }).collect()
        })
        .collect()
}

/// Fitt_0 and Fitt_1 of random homogeneous presentations against the
/// ideals of Leibniz minors.
pub fn fitting_suite(seed: u64, count: usize) -> Outcome {
    let mut out = Outcome::default();
    for i in 0..count {
        out.modules += 1;
        let ring = ring_for(i, true);
        let alg = Alg::of(&ring);
        let mut rng = seeded(child_seed(seed, i as u64));
        let r = rng.random_range(1..=3usize);
        let s = rng.random_range(r..=3usize);
        let degs: Vec<u32> = (0..s).map(|_| if r == 3 { 1 } else { rng.random_range(1..=2) }).collect();
        let cols = random_columns(&alg, &mut rng, r, &degs);
        let m = lib_module(&alg, &ring, r, &cols);
        for fitt in 0..=1usize.min(r) {
            let size = r - fitt;
            let mut minors = Vec::new();
            for rows in subsets(r, size) {
                for cs in subsets(s, size) {
                    let sub: Vec<Vec<Poly>> = rows.iter().map(|&a| cs.iter().map(|&b| cols[b][a].clone()).collect()).collect();
                    minors.push(alg.det(&sub));
                }
            }
            let lib: Vec<Poly> = match fitting_gens(&ring, &m, fitt) {
                Ok(g) => g.iter().map(|g| alg.import(&ring, g)).collect(),
                Err(e) => {
                    out.record(format!("fitting case {i} Fitt_{fitt}"), Err(format!("library error: {e}")));
                    continue;
                }
            };
            out.record(format!("fitting case {i} Fitt_{fitt}"), homogeneous_ideals_equal(&alg, &lib, &minors));
        }
    }
    out
}

/// Syzygies of random homogeneous vectors against degree-wise kernels of
/// the multiplication map, up to degree 4.
pub fn syzygy_suite(seed: u64, count: usize) -> Outcome {
    let mut out = Outcome::default();
    for i in 0..count {
        out.modules += 1;
        let ring = ring_for(i, true);
        let alg = Alg::of(&ring);
        let mut rng = seeded(child_seed(seed ^ 0x5159, i as u64));
        let r = rng.random_range(1..=2usize);
        let k = rng.random_range(2..=3usize);
        let nominal: Vec<u32> = (0..k).map(|_| rng.random_range(1..=2)).collect();
        let gens = random_columns(&alg, &mut rng, r, &nominal);
        // a zero generator contributes the syzygy e_j in degree 0
        let degs: Vec<u32> = gens.iter().map(|v| v.iter().flat_map(|p| alg.degrees(p)).next().unwrap_or(0)).collect();
        let lib_gens: Vec<Vec<RingElem>> = gens.iter().map(|v| v.iter().map(|p| alg.export(&ring, p)).collect()).collect();
        let result = syzygies(&ring, &lib_gens, r).map_err(|e| format!("library error: {e}")).and_then(|syz| {
            let syz: Vec<Vector> = syz.iter().map(|s| s.iter().map(|e| alg.import(&ring, e)).collect()).collect();
            let parts: Vec<(u32, Vector)> = syz.iter().flat_map(|s| graded_parts(&alg, s, &degs)).collect();
            for (_, s) in &parts {
                let mut total = vec![Poly::new(); r];
                for (j, c) in s.iter().enumerate() {
                    for (row, t) in total.iter_mut().enumerate() {
                        *t = alg.add(t, &alg.mul(c, &gens[j][row]));
                    }
                }
                if total.iter().any(|t| !t.is_empty()) {
                    return Err("a returned syzygy does not vanish".to_string());
                }
            }
            for deg in 0..=4u32 {
                let mut image = Span::new(alg.p);
                let mut ncols = 0;
                for (j, &dj) in degs.iter().enumerate() {
                    if dj > deg {
                        continue;
                    }
                    for m in alg.monos_deg(deg - dj) {
                        ncols += 1;
                        image.insert(&keyed(&vec_mul(&alg, &alg.mono(&m), &gens[j])));
                    }
                }
                let oracle_dim = ncols - image.dim();
                let mut lib_span = Span::new(alg.p);
                for (e, s) in &parts {
                    if *e > deg {
                        continue;
                    }
                    for m in alg.monos_deg(deg - e) {
                        lib_span.insert(&keyed(&vec_mul(&alg, &alg.mono(&m), s)));
                    }
                }
                if lib_span.dim() != oracle_dim {
                    return Err(format!(
                        "degree {deg}: syzygy space has dimension {oracle_dim}, library spans {}",
                        lib_span.dim()
                    ));
                }
            }
            Ok(())
        });
        out.record(format!("syzygy case {i}"), result);
    }
    out
}

/// F_p-quotient (R^n / N) / m^k with m = (x_1..x_d).
struct Truncated {
    k: u32,
    ngens: usize,
    span: Span<VKey>,
    basis_size: usize,
}

impl Truncated {
    fn new(alg: &Alg, ngens: usize, rels: &[Vector], k: u32) -> Self {
        let below = alg.monos_below(k);
        let mut span = Span::new(alg.p);
        for r in rels {
            for m in &below {
                let v: Vector = r.iter().map(|p| alg.truncate(&alg.mul(&alg.mono(m), p), k)).collect();
                span.insert(&keyed(&v));
            }
        }
        Truncated { k, ngens, span, basis_size: ngens * below.len() }
    }

    fn dim(&self) -> usize {
        self.basis_size - self.span.dim()
    }

    /// {r ∈ R/m^k : r·M ⊆ m^k M}.
    fn annihilator(&self, alg: &Alg) -> Span<Exp> {
        // Gaussian elimination on [image | tag] with image keys first; rows
        // whose pivot falls in the tag part span the kernel.
        // image block i holds the normal form of r·e_i
        let mut aug: Span<(u8, usize, VKey)> = Span::new(alg.p);
        for m in alg.monos_below(self.k) {
            let mut row = BTreeMap::new();
            for i in 0..self.ngens {
                let img = self.span.reduce(&BTreeMap::from([((i, m.clone()), 1)]));
                for (key, c) in img {
                    row.insert((0u8, i, key), c);
                }
            }
            row.insert((1u8, 0, (0, m.clone())), 1);
            aug.insert(&row);
        }
        let mut ann = Span::new(alg.p);
        for row in aug.rows() {
            if row.keys().next().is_some_and(|(tag, _, _)| *tag == 1) {
                ann.insert(&row.iter().map(|((_, _, (_, e)), c)| (e.clone(), *c)).collect());
            }
        }
        ann
    }
}

/// Smallest truncation at which dim (M/m^k M) stops growing.
fn stable_truncation(alg: &Alg, ngens: usize, rels: &[Vector], max_k: u32) -> Option<Truncated> {
    let mut prev = Truncated::new(alg, ngens, rels, 1);
    for k in 2..=max_k {
        let next = Truncated::new(alg, ngens, rels, k);
        if next.dim() == prev.dim() {
            return Some(prev);
        }
        prev = next;
    }
    None
}

fn ideal_mod_mk(alg: &Alg, gens: &[Poly], k: u32) -> Span<Exp> {
    let mut s = Span::new(alg.p);
    for g in gens {
        for m in alg.monos_below(k) {
            s.insert(&alg.truncate(&alg.mul(&alg.mono(&m), g), k));
        }
    }
    s
}

fn same_space<K: Ord + Clone>(a: &Span<K>, b: &Span<K>) -> bool {
    a.dim() == b.dim() && a.rows().all(|r| b.contains(r))
}

/// Ext² of finite-length modules over F_p[x,y] and F_p[x,y][C_3]: the
/// F_p-dimension and the annihilator match those of the module.
pub fn ext2_suite(seed: u64, count: usize) -> Outcome {
    let mut out = Outcome::default();
    for i in 0..count {
        out.modules += 1;
        let spec = if i % 2 == 0 { RingSpec::new(3, 2, &[]) } else { RingSpec::new(3, 2, &[3]) };
        let ring = Ring::new(spec).expect("ring");
        let alg = Alg::of(&ring);
        let mut rng = seeded(child_seed(seed ^ 0xE2, i as u64));
        let n = rng.random_range(1..=2usize);
        let a = rng.random_range(1..=3u16);
        let b = rng.random_range(1..=3u16);
        let mut rels: Vec<Vector> = Vec::new();
        for g in 0..n {
            for (var, pow) in [(0usize, a), (1usize, b)] {
                let mut e = vec![0u16; ring.nvars()];
                e[var] = pow;
                let mut v = vec![Poly::new(); n];
                v[g] = alg.mono(&e);
                rels.push(v);
            }
        }
        for _ in 0..rng.random_range(1..=2) {
            let v = (0..n)
                .map(|_| {
                    let lo = alg.random_hom(&mut rng, 1, 2);
                    let hi = alg.random_hom(&mut rng, 2, 2);
                    if rng.random_range(0..2) == 0 {
                        lo
                    } else {
                        alg.add(&lo, &hi)
                    }
                })
                .collect();
            rels.push(v);
        }
        let m = lib_module(&alg, &ring, n, &rels);
        let result = (|| {
            let tm = Truncated::new(&alg, n, &rels, (a + b) as u32);
            let e2 = ext(&ring, &m, 2).map_err(|e| format!("library error: {e}"))?;
            let e_rels: Vec<Vector> = e2.relations().iter().map(|r| r.iter().map(|x| alg.import(&ring, x)).collect()).collect();
            let te = stable_truncation(&alg, e2.ngens(), &e_rels, 14).ok_or("Ext^2 is not of finite length")?;
            if te.dim() != tm.dim() {
                return Err(format!("dim_F M = {}, dim_F Ext^2 = {}", tm.dim(), te.dim()));
            }
            let k = tm.k.max(te.k);
            let tm = Truncated::new(&alg, n, &rels, k);
            let te = Truncated::new(&alg, e2.ngens(), &e_rels, k);
            let ann_m = tm.annihilator(&alg);
            if !same_space(&ann_m, &te.annihilator(&alg)) {
                return Err("Ann(M) and Ann(Ext^2 M) differ".to_string());
            }
            let lib_ann: Vec<Poly> = annihilator(&ring, &m)
                .map_err(|e| format!("library error: {e}"))?
                .ideal_gens()
                .iter()
                .map(|g| alg.import(&ring, g))
                .collect();
            if !same_space(&ann_m, &ideal_mod_mk(&alg, &lib_ann, k)) {
                return Err("library annihilator differs from the linear-algebra annihilator".to_string());
            }
            Ok(())
        })();
        out.record(format!("ext2 case {i}"), result);
    }
    out
}

/// Torsion submodules over F_p[x] and F_p[x,y] against the kernel of
/// M → Frac ⊗ M, written as the common zero set of left-kernel vectors of
/// the relation matrix built from Leibniz minors.
pub fn torsion_suite(seed: u64, count: usize) -> Outcome {
    let mut out = Outcome::default();
    for i in 0..count {
        out.modules += 1;
        let ring = ring_for(i, false);
        let alg = Alg::of(&ring);
        let mut rng = seeded(child_seed(seed ^ 0x7075, i as u64));
        let r = rng.random_range(1..=3usize);
        let s = rng.random_range(1..=3usize);
        let degs: Vec<u32> = (0..s).map(|_| rng.random_range(1..=2)).collect();
        let cols: Vec<Vector> = if rng.random_range(0..2) == 0 {
            // multiples of one vector, which then becomes torsion
            let base_deg = rng.random_range(0..=1);
            let u: Vector = (0..r).map(|_| alg.random_hom(&mut rng, base_deg, 2)).collect();
            degs.iter()
                .map(|&dg| {
                    let f = alg.random_hom(&mut rng, dg.max(1), 2);
                    vec_mul(&alg, &f, &u)
                })
                .collect()
        } else {
            random_columns(&alg, &mut rng, r, &degs)
        };
        let shifts: Vec<u32> = vec![0; r];
        let col_degs: Vec<u32> = cols.iter().map(|c| c.iter().flat_map(|p| alg.degrees(p)).next().unwrap_or(0)).collect();
        let m = lib_module(&alg, &ring, r, &cols);
        let result = (|| {
            let entry = |row: usize, col: usize| cols[col][row].clone();
            let (mut rank, mut rows_sel, mut cols_sel) = (0usize, Vec::new(), Vec::new());
            'search: for size in (1..=r.min(s)).rev() {
                for rs in subsets(r, size) {
                    for cs in subsets(s, size) {
                        let sub: Vec<Vec<Poly>> = rs.iter().map(|&a| cs.iter().map(|&b| entry(a, b)).collect()).collect();
                        if !alg.det(&sub).is_empty() {
                            (rank, rows_sel, cols_sel) = (size, rs, cs);
                            break 'search;
                        }
                    }
                }
            }
            let mut ws: Vec<Vector> = Vec::new();
            for k in (0..r).filter(|k| !rows_sel.contains(k)) {
                let mut l = rows_sel.clone();
                l.push(k);
                l.sort_unstable();
                let mut w = vec![Poly::new(); r];
                for (pos, &row) in l.iter().enumerate() {
                    let rest: Vec<usize> = l.iter().copied().filter(|&x| x != row).collect();
                    let sub: Vec<Vec<Poly>> = rest.iter().map(|&a| cols_sel.iter().map(|&b| entry(a, b)).collect()).collect();
                    let minor = alg.det(&sub);
                    w[row] = if pos % 2 == 1 { alg.neg(&minor) } else { minor };
                }
                ws.push(w);
            }
            debug_assert_eq!(ws.len(), r - rank);
            let pair = |w: &Vector, v: &Vector| w.iter().zip(v).fold(Poly::new(), |acc, (a, b)| alg.add(&acc, &alg.mul(a, b)));
            let (_, inc) = torsion_submodule(&ring, &m).map_err(|e| format!("library error: {e}"))?;
            let tgens: Vec<Vector> = inc.images.iter().map(|v| v.iter().map(|x| alg.import(&ring, x)).collect()).collect();
            let parts: Vec<(u32, Vector)> = tgens.iter().flat_map(|v| graded_parts(&alg, v, &shifts)).collect();
            for (_, v) in &parts {
                if ws.iter().any(|w| !pair(w, v).is_empty()) {
                    return Err("a torsion generator is not torsion".to_string());
                }
            }
            for deg in 0..=4u32 {
                let mut n_span = Span::new(alg.p);
                for (c, &dc) in cols.iter().zip(&col_degs) {
                    if dc <= deg {
                        for mo in alg.monos_deg(deg - dc) {
                            n_span.insert(&keyed(&vec_mul(&alg, &alg.mono(&mo), c)));
                        }
                    }
                }
                let monos = alg.monos_deg(deg);
                let mut image: Span<(usize, Exp)> = Span::new(alg.p);
                for g in 0..r {
                    for mo in &monos {
                        let mut v = vec![Poly::new(); r];
                        v[g] = alg.mono(mo);
                        let img: Vector = ws.iter().map(|w| pair(w, &v)).collect();
                        image.insert(&keyed(&img));
                    }
                }
                let oracle = r * monos.len() - image.dim() - n_span.dim();
                let mut t_span = n_span.clone();
                for (e, v) in &parts {
                    if *e <= deg {
                        for mo in alg.monos_deg(deg - e) {
                            t_span.insert(&keyed(&vec_mul(&alg, &alg.mono(&mo), v)));
                        }
                    }
                }
                let lib = t_span.dim() - n_span.dim();
                if lib != oracle {
                    return Err(format!("degree {deg}: torsion has dimension {oracle}, library gives {lib}"));
                }
            }
            Ok(())
        })();
        out.record(format!("torsion case {i}"), result);
    }
    out
}
