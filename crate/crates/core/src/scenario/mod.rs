//! Synthetic CM-type scenarios and the verification suites.
//!
//! A scenario over R = F_q[x_1..x_{d+1}][G] consists of
//!
//! * local data p with degrees deg(p) and ideals J_p generated by
//!   r_p = deg(p) + 1 elements, giving local complexes
//!   L_p = [R^{r_p} → R] in degrees 1, 2 with H²(L_p) = R/J_p;
//! * CM-types S_1..S_n, index sets with Σ_{p∈S_i} deg(p) = d, and their
//!   complements T_i;
//! * a global complex C_U = [R^m --A--> R^{m+l}] in degrees 1, 2 with
//!   l = Σ_p deg(p) − d;
//! * connecting maps u_i : L_{T_i}[−1] → C_U whose cones C_mid,i have
//!   vanishing H¹ and torsion H²;
//! * a unit-character twist κ of the group variables.
//!
//! Everything is sampled from one seed and re-verified after sampling.

mod appendix;
mod l1;
mod main_seq;
mod psi_suite;

pub use appendix::{appendix_sample, appendix_suite};
pub use l1::verify_l1_sequence;
pub use main_seq::{build_diagram, build_snake, dual_fitting, verify_chern, verify_main_sequence, Diagram, Snake};
pub use psi_suite::{psi_local_checks, psi_sample, psi_sample_checks, verify_psi_suite, PsiSample};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::complex::{cone, ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::groebner::{kernel_mod, FreeVector, Gb, Submodule};
use crate::matrix::Matrix;
use crate::module::{generic_rank, is_pseudo_null, torsion_submodule, PresentedModule};
use crate::report::CheckResult;
use crate::ring::{Automorphism, Ring, RingElem, RingSpec};
use crate::rng::{self, Rng, Sparsity};

/// Default resampling budget per sampled object.
pub const DEFAULT_MAX_RESAMPLE: usize = 200;

fn default_max_resample() -> usize {
    DEFAULT_MAX_RESAMPLE
}

/// Parameters of [`generate_scenario`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub q: u32,
    /// The CM rank: every CM-type has total degree d. The ring has d + 1
    /// polynomial variables.
    pub d: usize,
    #[serde(default)]
    pub group_orders: Vec<u32>,
    /// Number of CM-types.
    pub n: usize,
    /// Degrees of the local data.
    pub degs: Vec<usize>,
    #[serde(default = "default_max_resample")]
    pub max_resample: usize,
}

impl ScenarioParams {
    pub fn new(q: u32, d: usize, group_orders: &[u32], n: usize, degs: &[usize]) -> Self {
        ScenarioParams { q, d, group_orders: group_orders.to_vec(), n, degs: degs.to_vec(), max_resample: DEFAULT_MAX_RESAMPLE }
    }

    /// l = Σ deg(p) − d.
    pub fn l(&self) -> usize {
        self.degs.iter().sum::<usize>().saturating_sub(self.d)
    }

    /// The ring F_q[x_1..x_{d+1}][G].
    pub fn ring_spec(&self) -> RingSpec {
        RingSpec::new(self.q, self.d + 1, &self.group_orders)
    }
}

/// A local datum p: an ideal J_p with r_p = deg(p) + 1 generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDatum {
    pub index: usize,
    pub deg: usize,
    pub generators: Vec<RingElem>,
}

impl LocalDatum {
    pub fn rank(&self) -> usize {
        self.deg + 1
    }

    /// L_p = [R^{r_p} --(J_p generators)--> R] in degrees 1, 2.
    pub fn complex(&self, ring: &Ring) -> Result<FreeComplex> {
        let m = Matrix::from_rows(self.generators.len(), vec![self.generators.clone()]);
        FreeComplex::two_term(ring, 1, m)
    }

    /// H²(L_p) = R/J_p.
    pub fn h2(&self, ring: &Ring) -> Result<PresentedModule> {
        PresentedModule::cyclic(ring, &self.generators)
    }
}

/// How often each sampled object was redrawn.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResampleCounts {
    pub local: Vec<usize>,
    pub global: usize,
    pub connecting: Vec<usize>,
}

/// A generated scenario. See the module documentation.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub seed: u64,
    pub params: ScenarioParams,
    pub ring: Ring,
    pub kappa: Automorphism,
    pub locals: Vec<LocalDatum>,
    /// The CM-types S_i as sorted index lists into `locals`.
    pub cm_types: Vec<Vec<usize>>,
    pub l: usize,
    /// The differential A of C_U, an (m + l) × m matrix.
    pub a: Matrix,
    /// u_i : L¹_{T_i} → C_U², an (m + l) × r_{T_i} matrix.
    pub u: Vec<Matrix>,
    pub resamples: ResampleCounts,
}

impl Scenario {
    pub fn id(&self) -> String {
        format!("scenario-{}", self.seed)
    }

    pub fn m(&self) -> usize {
        self.a.ncols()
    }

    pub fn n(&self) -> usize {
        self.cm_types.len()
    }

    /// T_i, the complement of S_i.
    pub fn t_set(&self, i: usize) -> Vec<usize> {
        (0..self.locals.len()).filter(|p| !self.cm_types[i].contains(p)).collect()
    }

    /// C_U in degrees 1, 2.
    pub fn global_complex(&self) -> Result<FreeComplex> {
        FreeComplex::two_term(&self.ring, 1, self.a.clone())
    }

    /// The block-diagonal differential β_{T_i} of L_{T_i}.
    pub fn local_differential(&self, i: usize) -> Matrix {
        let t = self.t_set(i);
        let r: usize = t.iter().map(|&p| self.locals[p].rank()).sum();
        let mut m = Matrix::zero(t.len(), r);
        let mut off = 0;
        for (row, &p) in t.iter().enumerate() {
            for (k, g) in self.locals[p].generators.iter().enumerate() {
                m.set(row, off + k, g.clone());
            }
            off += self.locals[p].rank();
        }
        m
    }

    /// L_{T_i} = ⊕_{p∈T_i} L_p in degrees 1, 2.
    pub fn local_sum(&self, i: usize) -> Result<FreeComplex> {
        FreeComplex::two_term(&self.ring, 1, self.local_differential(i))
    }

    /// The chain map u_i : L_{T_i}[−1] → C_U.
    pub fn connecting_map(&self, i: usize) -> Result<ChainMap> {
        let src = self.local_sum(i)?.shift(&self.ring, -1);
        let mut maps = BTreeMap::new();
        maps.insert(2, self.u[i].clone());
        ChainMap::new(&self.ring, src, self.global_complex()?, maps)
    }

    /// C_mid,i = cone(u_i).
    pub fn mid_complex(&self, i: usize) -> Result<FreeComplex> {
        cone(&self.ring, &self.connecting_map(i)?)
    }

    /// M_i = [[A, u_i], [0, β_{T_i}]], the square differential of C_mid,i up
    /// to the sign of the lower block.
    pub fn mid_matrix(&self, i: usize) -> Matrix {
        let beta = self.local_differential(i);
        let zero = Matrix::zero(beta.nrows(), self.m());
        Matrix::block(&self.a, &self.u[i], &zero, &beta)
    }

    /// The dual side D = RHom(C_U, R)^κ[−3], in degrees 1, 2, with
    /// H²(D) = coker κ(A)ᵀ.
    pub fn dual_side(&self) -> Result<FreeComplex> {
        Ok(self.global_complex()?.dual(&self.ring, Some(&self.kappa)).shift(&self.ring, -3))
    }

    /// Re-verifies the scenario invariants from scratch and lists the
    /// violated ones.
    pub fn violations(&self) -> Result<Vec<String>> {
        let ring = &self.ring;
        let mut bad = Vec::new();
        let cu = self.global_complex()?;
        if cu.euler_char() != -(self.l as i64) {
            bad.push(format!("chi(C_U) = {} but l = {}", cu.euler_char(), self.l));
        }
        if !cu.cohomology(ring, 1)?.is_zero() {
            bad.push("H^1(C_U) is nonzero".to_string());
        }
        for p in &self.locals {
            if p.generators.len() != p.rank() {
                bad.push(format!("J_{} has {} generators, expected {}", p.index + 1, p.generators.len(), p.rank()));
            }
            if !is_pseudo_null(ring, &p.h2(ring)?)? {
                bad.push(format!("R/J_{} is not pseudo-null", p.index + 1));
            }
            let h1 = p.complex(ring)?.cohomology(ring, 1)?;
            if !torsion_submodule(ring, &h1)?.0.is_zero() {
                bad.push(format!("H^1(L_{}) has torsion", p.index + 1));
            }
            let rank = generic_rank(ring, &h1)?;
            if rank != p.deg {
                bad.push(format!("H^1(L_{}) has rank {rank}, expected {}", p.index + 1, p.deg));
            }
        }
        for (i, s) in self.cm_types.iter().enumerate() {
            let total: usize = s.iter().map(|&p| self.locals[p].deg).sum();
            if total != self.params.d {
                bad.push(format!("CM-type {} has degree {total}", i + 1));
            }
            let mid = self.mid_complex(i)?;
            if !mid.cohomology(ring, 1)?.is_zero() {
                bad.push(format!("H^1(C_mid,{}) is nonzero", i + 1));
            }
            if generic_rank(ring, &mid.cohomology(ring, 2)?)? != 0 {
                bad.push(format!("H^2(C_mid,{}) is not torsion", i + 1));
            }
        }
        Ok(bad)
    }

    /// The serializable form.
    pub fn to_file(&self) -> ScenarioFile {
        let ring = &self.ring;
        ScenarioFile {
            schema_version: SCENARIO_SCHEMA_VERSION,
            seed: self.seed,
            params: self.params.clone(),
            ring: ring.spec().clone(),
            kappa: self.kappa.clone(),
            locals: self
                .locals
                .iter()
                .map(|p| LocalDatumFile {
                    index: p.index,
                    deg: p.deg,
                    generators: p.generators.iter().map(|g| ring.format(g)).collect(),
                })
                .collect(),
            cm_types: self.cm_types.clone(),
            l: self.l,
            global_differential: MatrixText::of(ring, &self.a),
            connecting: self.u.iter().map(|u| MatrixText::of(ring, u)).collect(),
            resamples: self.resamples.clone(),
        }
    }

    /// Rebuilds a scenario from its file form and re-verifies it.
    pub fn from_file(file: &ScenarioFile) -> Result<Self> {
        let ring = Ring::new(file.ring.clone())?;
        file.kappa.validate(&ring)?;
        let locals = file
            .locals
            .iter()
            .map(|p| {
                Ok(LocalDatum {
                    index: p.index,
                    deg: p.deg,
                    generators: p.generators.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let a = file.global_differential.to_matrix(&ring)?;
        let u = file.connecting.iter().map(|t| t.to_matrix(&ring)).collect::<Result<Vec<_>>>()?;
        if u.len() != file.cm_types.len() {
            return Err(Error::Parse(format!("{} connecting maps for {} CM-types", u.len(), file.cm_types.len())));
        }
        for s in &file.cm_types {
            if let Some(&p) = s.iter().find(|&&p| p >= locals.len()) {
                return Err(Error::Parse(format!("CM-type refers to unknown local datum {p}")));
            }
        }
        let s = Scenario {
            seed: file.seed,
            params: file.params.clone(),
            ring,
            kappa: file.kappa.clone(),
            locals,
            cm_types: file.cm_types.clone(),
            l: file.l,
            a,
            u,
            resamples: file.resamples.clone(),
        };
        for i in 0..s.n() {
            let m = s.mid_matrix(i);
            if m.nrows() != m.ncols() {
                return Err(Error::Parse(format!("connecting map {} has the wrong shape", i + 1)));
            }
        }
        let bad = s.violations()?;
        if !bad.is_empty() {
            return Err(Error::Precondition(format!("scenario invariants fail: {}", bad.join("; "))));
        }
        Ok(s)
    }
}

/// Version of the scenario file layout.
pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

/// A matrix with entries written as polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixText {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<Vec<String>>,
}

impl MatrixText {
    pub fn of(ring: &Ring, m: &Matrix) -> Self {
        MatrixText {
            nrows: m.nrows(),
            ncols: m.ncols(),
            rows: m.rows().iter().map(|r| r.iter().map(|e| ring.format(e)).collect()).collect(),
        }
    }

    pub fn to_matrix(&self, ring: &Ring) -> Result<Matrix> {
        if self.rows.len() != self.nrows || self.rows.iter().any(|r| r.len() != self.ncols) {
            return Err(Error::Parse(format!("matrix text does not have shape {}x{}", self.nrows, self.ncols)));
        }
        let rows =
            self.rows.iter().map(|r| r.iter().map(|e| ring.parse(e)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_rows(self.ncols, rows))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDatumFile {
    pub index: usize,
    pub deg: usize,
    pub generators: Vec<String>,
}

/// Scenario file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub seed: u64,
    pub params: ScenarioParams,
    pub ring: RingSpec,
    pub kappa: Automorphism,
    pub locals: Vec<LocalDatumFile>,
    pub cm_types: Vec<Vec<usize>>,
    pub l: usize,
    pub global_differential: MatrixText,
    pub connecting: Vec<MatrixText>,
    pub resamples: ResampleCounts,
}

/// Sparse entries of degree 1 or 2 for scenario matrices.
fn scenario_sparsity() -> Sparsity {
    Sparsity { max_terms: 2, min_degree: 1, max_degree: 2, zero_percent: 25, group_terms: true }
}

/// A twist κ: t_j ↦ c_j·t_j^{-1} with c_j^{n_j} = 1, an involution.
fn sample_kappa(ring: &Ring, rng: &mut Rng) -> Result<Automorphism> {
    let f = ring.field();
    let orders = ring.group_orders().to_vec();
    let mut images = Vec::with_capacity(orders.len());
    for (j, &n) in orders.iter().enumerate() {
        let roots: Vec<u32> = f.elements().filter(|&c| c != 0 && f.pow(c, n as u64) == 1).collect();
        let c = roots[rng::index(rng, roots.len())];
        let mut e = vec![0u32; orders.len()];
        e[j] = (n - 1) % n;
        images.push((c, e));
    }
    crate::ring::automorphism(ring, images)
}

/// J_p: two distinct variables, then further variables or augmentation
/// elements t_j − 1, then random elements of the ideal.
fn sample_local(ring: &Ring, rng: &mut Rng, index: usize, deg: usize, budget: usize) -> Result<(LocalDatum, usize)> {
    let nx = ring.d();
    if nx < 2 {
        return Err(Error::Precondition("local data need at least two polynomial variables".to_string()));
    }
    for attempt in 0..=budget {
        let mut vars: Vec<usize> = (0..nx).collect();
        shuffle(rng, &mut vars);
        let mut gens = vec![ring.x(vars[0]), ring.x(vars[1])];
        let mut pool: Vec<RingElem> = vars[2..].iter().map(|&v| ring.x(v)).collect();
        for j in 0..ring.group_rank() {
            pool.push(ring.sub(&ring.t(j), &ring.one()));
        }
        while gens.len() < deg + 1 && !pool.is_empty() {
            let k = rng::index(rng, pool.len());
            gens.push(pool.remove(k));
        }
        let sp = Sparsity { max_terms: 2, min_degree: 0, max_degree: 1, zero_percent: 0, group_terms: true };
        while gens.len() < deg + 1 {
            let a = rng::element(ring, rng, &sp);
            let b = rng::element(ring, rng, &sp);
            let g = ring.add(&ring.mul(&a, &gens[0]), &ring.mul(&b, &gens[1]));
            if !g.is_zero() {
                gens.push(g);
            }
        }
        let datum = LocalDatum { index, deg, generators: gens };
        if is_pseudo_null(ring, &datum.h2(ring)?)? {
            return Ok((datum, attempt));
        }
    }
    Err(Error::ResampleBudget { budget, reason: format!("R/J_{} not pseudo-null", index + 1) })
}

fn shuffle<T>(rng: &mut Rng, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        let j = rng::range(rng, 0, i);
        v.swap(i, j);
    }
}

/// Index sets of total degree `d`, in increasing bit-mask order.
fn cm_type_candidates(degs: &[usize], d: usize) -> Vec<Vec<usize>> {
    let k = degs.len();
    (0u32..(1u32 << k))
        .filter_map(|mask| {
            let s: Vec<usize> = (0..k).filter(|&p| mask & (1 << p) != 0).collect();
            (s.iter().map(|&p| degs[p]).sum::<usize>() == d).then_some(s)
        })
        .collect()
}

/// Samples a scenario deterministically from `seed`. CM-types are drawn
/// without repetition while distinct ones remain, then reused cyclically.
pub fn generate_scenario(seed: u64, params: &ScenarioParams) -> Result<Scenario> {
    if params.degs.is_empty() {
        return Err(Error::Precondition("degs must be nonempty".to_string()));
    }
    if params.degs.contains(&0) {
        return Err(Error::Precondition("local degrees must be at least 1".to_string()));
    }
    if params.n < 2 {
        return Err(Error::Precondition("at least two CM-types are needed".to_string()));
    }
    if params.d == 0 {
        return Err(Error::Precondition("d must be at least 1".to_string()));
    }
    let total: usize = params.degs.iter().sum();
    if total < params.d {
        return Err(Error::Precondition(format!("sum of degrees {total} is below d = {}", params.d)));
    }
    if params.degs.len() > 16 {
        return Err(Error::Unsupported("at most 16 local data".to_string()));
    }
    let mut candidates = cm_type_candidates(&params.degs, params.d);
    if candidates.is_empty() {
        return Err(Error::Precondition(format!("no CM-type of degree {} exists for degrees {:?}", params.d, params.degs)));
    }
    let ring = Ring::new(params.ring_spec())?;
    let budget = params.max_resample;
    let mut rng = rng::seeded(seed);
    let kappa = sample_kappa(&ring, &mut rng)?;
    let mut resamples = ResampleCounts::default();
    let mut locals = Vec::with_capacity(params.degs.len());
    for (index, &deg) in params.degs.iter().enumerate() {
        let (datum, tries) = sample_local(&ring, &mut rng, index, deg, budget)?;
        resamples.local.push(tries);
        locals.push(datum);
    }
    shuffle(&mut rng, &mut candidates);
    let cm_types: Vec<Vec<usize>> = (0..params.n).map(|i| candidates[i % candidates.len()].clone()).collect();
    let l = total - params.d;
    let sp = scenario_sparsity();

    // C_U: A injective, and for l = 0 with non-zero-divisor determinant.
    let m = rng::range(&mut rng, 1, 2);
    let mut a = None;
    for attempt in 0..=budget {
        let cand = rng::matrix(&ring, &mut rng, m + l, m, &sp);
        let ok = if l == 0 {
            ring.is_non_zero_divisor(&cand.det(&ring))
        } else {
            kernel_mod(&ring, &cand.columns(), &[], m + l)?.is_empty()
        };
        if ok {
            resamples.global = attempt;
            a = Some(cand);
            break;
        }
    }
    let a = a.ok_or_else(|| Error::ResampleBudget { budget, reason: "A is not injective".to_string() })?;

    let mut s = Scenario { seed, params: params.clone(), ring, kappa, locals, cm_types, l, a, u: Vec::new(), resamples };
    for i in 0..params.n {
        let r: usize = s.t_set(i).iter().map(|&p| s.locals[p].rank()).sum();
        let mut found = None;
        for attempt in 0..=budget {
            let u = rng::matrix(&s.ring, &mut rng, m + l, r, &sp);
            s.u.push(u);
            let det = s.mid_matrix(i).det(&s.ring);
            let u = s.u.pop().expect("pushed");
            if s.ring.is_non_zero_divisor(&det) {
                found = Some((u, attempt));
                break;
            }
        }
        let (u, tries) =
            found.ok_or_else(|| Error::ResampleBudget { budget, reason: format!("det M_{} is a zero-divisor", i + 1) })?;
        s.u.push(u);
        s.resamples.connecting.push(tries);
    }
    let bad = s.violations()?;
    if !bad.is_empty() {
        return Err(Error::Precondition(format!("generated scenario violates: {}", bad.join("; "))));
    }
    Ok(s)
}

/// Runs a check, turning a computation error into a failing result.
pub(crate) fn guarded(check: &str, subject: &str, f: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    f().unwrap_or_else(|e| CheckResult::fail(check, subject, format!("computation error: {e}")))
}

/// A generator of one ideal outside the other, for failure witnesses.
pub(crate) fn ideal_witness(ring: &Ring, a: &[RingElem], b: &[RingElem]) -> Result<String> {
    let ia = Submodule::ideal(ring, a)?;
    let ib = Submodule::ideal(ring, b)?;
    if let Some(g) = a.iter().find(|g| !ib.contains(ring, &[(*g).clone()]).unwrap_or(true)) {
        return Ok(format!("{} lies in the first ideal but not the second", ring.format(g)));
    }
    if let Some(g) = b.iter().find(|g| !ia.contains(ring, &[(*g).clone()]).unwrap_or(true)) {
        return Ok(format!("{} lies in the second ideal but not the first", ring.format(g)));
    }
    Ok("ideals are equal".to_string())
}

/// The first vector of `inner` outside ⟨outer⟩ + relations of `m`, with its
/// nonzero reduction.
pub(crate) fn vector_witness(
    ring: &Ring,
    m: &PresentedModule,
    outer: &[FreeVector],
    inner: &[FreeVector],
) -> Result<Option<String>> {
    let mut gens = m.relations().to_vec();
    gens.extend(outer.iter().cloned());
    let gb = Gb::new(ring, m.ngens(), &gens)?;
    for v in inner {
        let r = gb.reduce(ring, v)?;
        if r.iter().any(|e| !e.is_zero()) {
            let f = |x: &FreeVector| x.iter().map(|e| ring.format(e)).collect::<Vec<_>>().join(", ");
            return Ok(Some(format!("({}) with nonzero reduction ({})", f(v), f(&r))));
        }
    }
    Ok(None)
}

/// Same as [`guarded`] for a batch of checks.
pub(crate) fn guarded_batch(check: &str, subject: &str, f: impl FnOnce() -> Result<Vec<CheckResult>>) -> Vec<CheckResult> {
    f().unwrap_or_else(|e| vec![CheckResult::fail(check, subject, format!("computation error: {e}"))])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_examples() {
        let p = ScenarioParams::new(3, 1, &[3], 2, &[1, 1]);
        let s = generate_scenario(1, &p).unwrap();
        assert_eq!(s.l, 1);
        assert_eq!(s.ring.d(), 2);
        assert!(s.violations().unwrap().is_empty());
        let again = generate_scenario(1, &p).unwrap();
        assert_eq!(s.to_file(), again.to_file());

        let p0 = ScenarioParams::new(3, 2, &[], 2, &[1, 1]);
        let s0 = generate_scenario(2, &p0).unwrap();
        assert_eq!(s0.l, 0);

        let bad = ScenarioParams::new(3, 1, &[3], 2, &[]);
        assert!(matches!(generate_scenario(1, &bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn file_round_trip() {
        let p = ScenarioParams::new(3, 1, &[], 2, &[1, 2]);
        let s = generate_scenario(5, &p).unwrap();
        assert_eq!(s.l, 2);
        let back = Scenario::from_file(&s.to_file()).unwrap();
        assert_eq!(back.to_file(), s.to_file());
    }
}
