//! The coefficient ring Λ = F_q[x_1..x_d] and the group algebra
//! R = Λ[G] = Λ[t_1..t_g]/(t_i^{n_i} - 1) for a finite abelian group G.
//!
//! Elements are sparse maps from exponent vectors to field coefficients kept
//! in normal form: group exponents are reduced modulo the group orders and
//! terms are sorted by descending exponent vector. Every ring operation keeps
//! this normal form, so structural equality is ring equality.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fq};

/// Maximum number of ring variables (polynomial plus group variables).
pub const MAX_VARS: usize = 8;

/// Exponent vector over all ring variables: x_1..x_d first, then t_1..t_g.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; MAX_VARS]);

    pub fn var(i: usize) -> Mono {
        let mut m = Mono::ONE;
        m.0[i] = 1;
        m
    }

    #[inline]
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = [0u16; MAX_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i] + other.0[i];
        }
        Mono(out)
    }

    #[inline]
    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    #[inline]
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        let mut out = [0u16; MAX_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = other.0[i] - self.0[i];
        }
        Mono(out)
    }

    #[inline]
    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut out = [0u16; MAX_VARS];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.0[i].max(other.0[i]);
        }
        Mono(out)
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Total degree restricted to the variables selected by `mask`.
    #[inline]
    pub fn degree_in(&self, mask: u16) -> u32 {
        self.0.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &e)| e as u32).sum()
    }

    /// True if the monomial only involves variables in `mask`.
    #[inline]
    pub fn supported_in(&self, mask: u16) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e == 0 || mask & (1 << i) != 0)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

/// A monomial order on [`Mono`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonoOrder {
    /// Degree reverse lexicographic with x_1 > ... > x_d > t_1 > ... > t_g.
    DegRevLex,
    /// Lexicographic with x_1 > ... > t_g.
    Lex,
    /// Block order: degrevlex on the variables in `high` first, ties broken
    /// by degrevlex on the remaining variables. Eliminates the high block.
    Block { high: u16 },
}

fn degrevlex_masked(a: &Mono, b: &Mono, mask: u16) -> Ordering {
    let (da, db) = (a.degree_in(mask), b.degree_in(mask));
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..MAX_VARS).rev() {
        if mask & (1 << i) == 0 {
            continue;
        }
        if a.0[i] != b.0[i] {
            return b.0[i].cmp(&a.0[i]);
        }
    }
    Ordering::Equal
}

impl MonoOrder {
    #[inline]
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match *self {
            MonoOrder::DegRevLex => degrevlex_masked(a, b, u16::MAX),
            MonoOrder::Lex => a.0.cmp(&b.0),
            MonoOrder::Block { high } => match degrevlex_masked(a, b, high) {
                Ordering::Equal => degrevlex_masked(a, b, !high),
                o => o,
            },
        }
    }
}

/// Global term order selector for a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TermOrder {
    #[default]
    DegRevLex,
    Lex,
}

impl TermOrder {
    pub fn mono_order(self) -> MonoOrder {
        match self {
            TermOrder::DegRevLex => MonoOrder::DegRevLex,
            TermOrder::Lex => MonoOrder::Lex,
        }
    }
}

/// Serializable description of R = F_q[x_1..x_d][G].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub q: u32,
    pub d: usize,
    #[serde(default)]
    pub group_orders: Vec<u32>,
    #[serde(default)]
    pub term_order: TermOrder,
}

impl RingSpec {
    pub fn new(q: u32, d: usize, group_orders: &[u32]) -> Self {
        RingSpec { q, d, group_orders: group_orders.to_vec(), term_order: TermOrder::DegRevLex }
    }
}

/// Element of R in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    terms: Vec<(Mono, Fq)>,
}

impl RingElem {
    pub fn zero() -> Self {
        RingElem { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted by descending exponent vector.
    pub fn terms(&self) -> &[(Mono, Fq)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant coefficient if the element is a scalar.
    pub fn as_constant(&self) -> Option<Fq> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }
}

/// A ring handle: immutable after construction and shareable across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    spec: RingSpec,
    field: Field,
    order: MonoOrder,
}

/// Builds the ring described by `spec`.
pub fn make_ring(spec: RingSpec) -> Result<Ring> {
    Ring::new(spec)
}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Self> {
        let field = Field::new(spec.q)?;
        if spec.d == 0 {
            return Err(Error::NoVariables);
        }
        if spec.group_orders.contains(&0) {
            return Err(Error::ZeroGroupOrder);
        }
        let needed = spec.d + spec.group_orders.len();
        if needed > MAX_VARS {
            return Err(Error::TooManyVariables { needed, max: MAX_VARS });
        }
        if spec.group_orders.iter().any(|&n| n > u16::MAX as u32) {
            return Err(Error::Unsupported("group order too large".to_string()));
        }
        let order = spec.term_order.mono_order();
        let ring = Ring { spec, field, order };
        // The relations t_i^{n_i} - 1 have pairwise coprime leading terms,
        // so they already form a Groebner basis and are self-reduced.
        debug_assert!(ring.relation_leads_coprime());
        Ok(ring)
    }

    fn relation_leads_coprime(&self) -> bool {
        let leads: Vec<Mono> = (0..self.group_rank())
            .map(|j| {
                let mut m = Mono::ONE;
                m.0[self.d() + j] = self.spec.group_orders[j] as u16;
                m
            })
            .collect();
        leads.iter().enumerate().all(|(i, a)| leads.iter().skip(i + 1).all(|b| a.lcm(b) == a.mul(b)))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of polynomial variables.
    pub fn d(&self) -> usize {
        self.spec.d
    }

    /// Number of cyclic group factors.
    pub fn group_rank(&self) -> usize {
        self.spec.group_orders.len()
    }

    pub fn group_orders(&self) -> &[u32] {
        &self.spec.group_orders
    }

    /// |G|, the rank of R as a free Λ-module.
    pub fn group_size(&self) -> usize {
        self.spec.group_orders.iter().map(|&n| n as usize).product()
    }

    /// Total number of ring variables.
    pub fn nvars(&self) -> usize {
        self.spec.d + self.spec.group_orders.len()
    }

    pub fn order(&self) -> MonoOrder {
        self.order
    }

    /// Bit mask of the polynomial variables x_1..x_d.
    pub fn x_mask(&self) -> u16 {
        (1u16 << self.d()) - 1
    }

    /// Bit mask of the group variables.
    pub fn t_mask(&self) -> u16 {
        ((1u16 << self.nvars()) - 1) & !self.x_mask()
    }

    /// True when G is trivial, so R = Λ.
    pub fn is_lambda(&self) -> bool {
        self.group_size() == 1
    }

    /// Name of variable `i` for display and parsing.
    pub fn var_name(&self, i: usize) -> String {
        let d = self.d();
        if i < d {
            if d <= 4 {
                ["x", "y", "z", "w"][i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        } else if self.group_rank() == 1 {
            "t".to_string()
        } else {
            format!("t{}", i - d + 1)
        }
    }

    /// Index of the variable called `name`.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        (0..self.nvars()).find(|&i| self.var_name(i) == name)
    }

    // ---- construction -------------------------------------------------

    pub fn zero(&self) -> RingElem {
        RingElem::zero()
    }

    pub fn one(&self) -> RingElem {
        self.constant(1)
    }

    pub fn constant(&self, c: Fq) -> RingElem {
        self.monomial(Mono::ONE, c)
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        self.constant(self.field.from_int(n))
    }

    /// Polynomial variable x_i (0-based).
    pub fn x(&self, i: usize) -> RingElem {
        assert!(i < self.d());
        self.monomial(Mono::var(i), 1)
    }

    /// Group variable t_j (0-based).
    pub fn t(&self, j: usize) -> RingElem {
        assert!(j < self.group_rank());
        self.monomial(Mono::var(self.d() + j), 1)
    }

    pub fn monomial(&self, m: Mono, c: Fq) -> RingElem {
        if c == 0 {
            return RingElem::zero();
        }
        RingElem { terms: vec![(self.reduce_mono(m), c)] }
    }

    /// Reduces group exponents modulo the group orders.
    #[inline]
    pub fn reduce_mono(&self, mut m: Mono) -> Mono {
        let d = self.d();
        for (j, &n) in self.spec.group_orders.iter().enumerate() {
            m.0[d + j] %= n as u16;
        }
        m
    }

    /// Canonical representative of an arbitrary term list.
    pub fn normal_form_terms(&self, terms: impl IntoIterator<Item = (Mono, Fq)>) -> RingElem {
        let mut v: Vec<(Mono, Fq)> = terms.into_iter().filter(|&(_, c)| c != 0).map(|(m, c)| (self.reduce_mono(m), c)).collect();
        v.sort_unstable_by_key(|a| core::cmp::Reverse(a.0));
        let mut out: Vec<(Mono, Fq)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == m => {
                    last.1 = self.field.add(last.1, c);
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((m, c)),
            }
        }
        RingElem { terms: out }
    }

    /// Normal form of an element: idempotent on already-normal elements.
    pub fn normal_form(&self, a: &RingElem) -> RingElem {
        self.normal_form_terms(a.terms.iter().copied())
    }

    // ---- arithmetic -----------------------------------------------------

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.combine(a, b, false)
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.combine(a, b, true)
    }

    fn combine(&self, a: &RingElem, b: &RingElem, negate_b: bool) -> RingElem {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        let bc = |c: Fq| if negate_b { f.neg(c) } else { c };
        while i < a.terms.len() && j < b.terms.len() {
            let (ma, ca) = a.terms[i];
            let (mb, cb) = b.terms[j];
            match ma.cmp(&mb) {
                Ordering::Greater => {
                    out.push((ma, ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb, bc(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(ca, bc(cb));
                    if c != 0 {
                        out.push((ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend(b.terms[j..].iter().map(|&(m, c)| (m, bc(c))));
        RingElem { terms: out }
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        RingElem { terms: a.terms.iter().map(|&(m, c)| (m, self.field.neg(c))).collect() }
    }

    pub fn scale(&self, a: &RingElem, c: Fq) -> RingElem {
        if c == 0 {
            return RingElem::zero();
        }
        RingElem { terms: a.terms.iter().map(|&(m, k)| (m, self.field.mul(k, c))).collect() }
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        if a.is_zero() || b.is_zero() {
            return RingElem::zero();
        }
        if let Some(c) = a.as_constant() {
            return self.scale(b, c);
        }
        if let Some(c) = b.as_constant() {
            return self.scale(a, c);
        }
        let f = &self.field;
        let mut prods = Vec::with_capacity(a.terms.len() * b.terms.len());
        for &(ma, ca) in &a.terms {
            for &(mb, cb) in &b.terms {
                prods.push((ma.mul(&mb), f.mul(ca, cb)));
            }
        }
        self.normal_form_terms(prods)
    }

    pub fn mul_term(&self, a: &RingElem, m: &Mono, c: Fq) -> RingElem {
        if c == 0 {
            return RingElem::zero();
        }
        let f = &self.field;
        self.normal_form_terms(a.terms.iter().map(|&(ma, ca)| (ma.mul(m), f.mul(ca, c))))
    }

    pub fn pow(&self, a: &RingElem, mut e: u32) -> RingElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a RingElem>) -> RingElem {
        items.into_iter().fold(RingElem::zero(), |acc, x| self.add(&acc, x))
    }

    /// True if no group variable occurs, i.e. `a` lies in Λ.
    pub fn in_lambda(&self, a: &RingElem) -> bool {
        let tm = self.t_mask();
        a.terms.iter().all(|(m, _)| m.supported_in(!tm))
    }

    /// Leading term of `a` under the ring's term order.
    pub fn leading_term(&self, a: &RingElem) -> Option<(Mono, Fq)> {
        a.terms.iter().copied().max_by(|x, y| self.order.cmp(&x.0, &y.0))
    }

    /// Rescales `a` so that its leading coefficient is 1.
    pub fn monic(&self, a: &RingElem) -> RingElem {
        match self.leading_term(a) {
            Some((_, c)) => self.scale(a, self.field.inv(c)),
            None => RingElem::zero(),
        }
    }

    /// A unit of the form c·t^e (nonzero scalar times a group element).
    pub fn is_monomial_unit(&self, a: &RingElem) -> bool {
        match a.terms.as_slice() {
            [(m, _)] => m.supported_in(self.t_mask()),
            _ => false,
        }
    }

    /// Inverse of a monomial unit c·t^e.
    pub fn monomial_unit_inverse(&self, a: &RingElem) -> Option<RingElem> {
        if !self.is_monomial_unit(a) {
            return None;
        }
        let (m, c) = a.terms[0];
        let d = self.d();
        let mut inv = Mono::ONE;
        for (j, &n) in self.spec.group_orders.iter().enumerate() {
            let e = m.0[d + j] as u32;
            inv.0[d + j] = ((n - e % n) % n) as u16;
        }
        Some(self.monomial(inv, self.field.inv(c)))
    }

    // ---- determinants and norm -------------------------------------------

    /// Determinant of a square matrix with entries in R (Laplace expansion
    /// memoized over column subsets; exact over any commutative ring).
    pub fn det(&self, m: &[Vec<RingElem>]) -> RingElem {
        let n = m.len();
        if n == 0 {
            return self.one();
        }
        assert!(n <= 20, "determinant too large for subset expansion");
        let mut dp: Vec<RingElem> = vec![RingElem::zero(); 1 << n];
        dp[0] = self.one();
        for s in 0usize..(1 << n) {
            if dp[s].is_zero() {
                continue;
            }
            let row = s.count_ones() as usize;
            if row >= n {
                continue;
            }
            for (j, entry) in m[row].iter().enumerate().take(n) {
                if s & (1 << j) != 0 || entry.is_zero() {
                    continue;
                }
                let greater = (s >> (j + 1)).count_ones();
                let term = self.mul(entry, &dp[s]);
                let t = s | (1 << j);
                dp[t] = if greater % 2 == 0 { self.add(&dp[t], &term) } else { self.sub(&dp[t], &term) };
            }
        }
        dp[(1 << n) - 1].clone()
    }

    /// Exponent tuples of the group basis of R over Λ, in mixed-radix order.
    pub fn group_basis(&self) -> Vec<Mono> {
        let d = self.d();
        let mut out = vec![Mono::ONE];
        for (j, &n) in self.spec.group_orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for m in &out {
                for e in 0..n {
                    let mut m2 = *m;
                    m2.0[d + j] = e as u16;
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }

    fn group_index(&self, m: &Mono) -> usize {
        let d = self.d();
        let mut idx = 0;
        for (j, &n) in self.spec.group_orders.iter().enumerate() {
            idx = idx * n as usize + m.0[d + j] as usize;
        }
        idx
    }

    /// Splits a monomial into its Λ part and its group part.
    pub fn split_mono(&self, m: &Mono) -> (Mono, Mono) {
        let d = self.d();
        let mut x = Mono::ONE;
        let mut t = Mono::ONE;
        for i in 0..MAX_VARS {
            if i < d {
                x.0[i] = m.0[i];
            } else {
                t.0[i] = m.0[i];
            }
        }
        (x, t)
    }

    /// Matrix of multiplication by `a` on R as a free Λ-module, in the group
    /// basis: entry `[h][g]` is the coefficient of basis element h in a·g.
    pub fn multiplication_matrix(&self, a: &RingElem) -> Vec<Vec<RingElem>> {
        let basis = self.group_basis();
        let n = basis.len();
        let mut cols: Vec<Vec<Vec<(Mono, Fq)>>> = vec![vec![Vec::new(); n]; n];
        for (gi, g) in basis.iter().enumerate() {
            for &(m, c) in &a.terms {
                let prod = self.reduce_mono(m.mul(g));
                let (x, t) = self.split_mono(&prod);
                cols[self.group_index(&t)][gi].push((x, c));
            }
        }
        cols.into_iter().map(|row| row.into_iter().map(|ts| self.normal_form_terms(ts)).collect()).collect()
    }

    /// Norm N_{R/Λ}(a): determinant of multiplication by `a`.
    pub fn norm(&self, a: &RingElem) -> RingElem {
        if self.is_lambda() {
            return a.clone();
        }
        self.det(&self.multiplication_matrix(a))
    }

    /// `a` is a non-zero-divisor of R iff its norm is nonzero.
    pub fn is_non_zero_divisor(&self, a: &RingElem) -> bool {
        !a.is_zero() && !self.norm(a).is_zero()
    }

    // ---- formatting and parsing -----------------------------------------

    pub fn format_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for i in 0..self.nvars() {
            match m.0[i] {
                0 => {}
                1 => parts.push(self.var_name(i)),
                e => parts.push(format!("{}^{}", self.var_name(i), e)),
            }
        }
        parts.join("*")
    }

    /// Human-readable rendering, terms in descending term order.
    pub fn format(&self, a: &RingElem) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut terms = a.terms.clone();
        terms.sort_by(|x, y| self.order.cmp(&y.0, &x.0));
        let p = self.field.characteristic();
        let mut s = String::new();
        for (k, (m, c)) in terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            // codes below p are the prime subfield and parse back as integers
            let coeff = if *c < p { format!("{c}") } else { format!("#{c}") };
            if m.is_one() {
                s.push_str(&coeff);
            } else if *c == 1 {
                s.push_str(&self.format_mono(m));
            } else {
                let _ = write!(s, "{}*{}", coeff, self.format_mono(m));
            }
        }
        s
    }

    /// Parses expressions such as `x^2*y - 2*t + 1`. Coefficients are
    /// integers mapped into the prime subfield, or `#k` for field code k.
    pub fn parse(&self, src: &str) -> Result<RingElem> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty expression".to_string()));
        }
        let mut acc = RingElem::zero();
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut sign = 1i64;
        let mut i = 0;
        if bytes[0] == b'-' || bytes[0] == b'+' {
            sign = if bytes[0] == b'-' { -1 } else { 1 };
            start = 1;
            i = 1;
        }
        let mut depth = 0;
        loop {
            let at_end = i == bytes.len();
            if !at_end {
                match bytes[i] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    _ => {}
                }
            }
            if at_end || (depth == 0 && (bytes[i] == b'+' || bytes[i] == b'-') && i > start) {
                let term = self.parse_term(&s[start..i])?;
                let term = if sign < 0 { self.neg(&term) } else { term };
                acc = self.add(&acc, &term);
                if at_end {
                    break;
                }
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            i += 1;
        }
        Ok(acc)
    }

    fn parse_term(&self, s: &str) -> Result<RingElem> {
        let mut acc = self.one();
        for factor in split_top_level(s, '*') {
            let (base, exp) = match factor.rfind('^') {
                Some(p) if !factor[p..].contains(')') => {
                    let e: u32 = factor[p + 1..].parse().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
                    (&factor[..p], e)
                }
                _ => (factor, 1),
            };
            let val = if base.starts_with('(') && base.ends_with(')') {
                self.parse(&base[1..base.len() - 1])?
            } else if let Some(code) = base.strip_prefix('#') {
                let c: u32 = code.parse().map_err(|_| Error::Parse(format!("bad field code '{base}'")))?;
                self.constant(self.field.from_code(c))
            } else if let Ok(n) = base.parse::<i64>() {
                self.from_int(n)
            } else if let Some(i) = self.var_index(base) {
                self.monomial(Mono::var(i), 1)
            } else {
                return Err(Error::Parse(format!("unknown symbol '{base}'")));
            };
            acc = self.mul(&acc, &self.pow(&val, exp));
        }
        Ok(acc)
    }

    /// Exponent-vector/coefficient pairs of length `nvars`, for serialization.
    pub fn to_term_list(&self, a: &RingElem) -> Vec<(Vec<u16>, Fq)> {
        a.terms.iter().map(|(m, c)| (m.0[..self.nvars()].to_vec(), *c)).collect()
    }

    pub fn from_term_list(&self, terms: &[(Vec<u16>, Fq)]) -> Result<RingElem> {
        let mut out = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if e.len() != self.nvars() {
                return Err(Error::RankMismatch { expected: self.nvars(), found: e.len() });
            }
            if *c >= self.field.order() {
                return Err(Error::Parse(format!("coefficient {c} outside the field")));
            }
            let mut m = Mono::ONE;
            m.0[..e.len()].copy_from_slice(e);
            out.push((m, *c));
        }
        Ok(self.normal_form_terms(out))
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Ring automorphism fixing Λ and sending each group generator t_j to a
/// unit monomial c_j·t^{e_j}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    /// `(c_j, e_j)` for each group generator; `e_j` has one entry per factor.
    pub images: Vec<(Fq, Vec<u32>)>,
}

impl Automorphism {
    pub fn identity(ring: &Ring) -> Self {
        let g = ring.group_rank();
        let images = (0..g)
            .map(|j| {
                let mut e = vec![0; g];
                e[j] = 1;
                (1, e)
            })
            .collect();
        Automorphism { images }
    }

    /// The involution ι inverting every group element.
    pub fn iota(ring: &Ring) -> Self {
        let orders = ring.group_orders();
        let images = (0..orders.len())
            .map(|j| {
                let mut e = vec![0; orders.len()];
                e[j] = (orders[j] - 1) % orders[j];
                (1, e)
            })
            .collect();
        Automorphism { images }
    }

    /// Checks that the assignment extends to a ring automorphism of R.
    pub fn validate(&self, ring: &Ring) -> Result<()> {
        let orders = ring.group_orders();
        let f = ring.field();
        if self.images.len() != orders.len() {
            return Err(Error::InvalidAutomorphism(format!(
                "{} images for {} group generators",
                self.images.len(),
                orders.len()
            )));
        }
        for (j, (c, e)) in self.images.iter().enumerate() {
            if e.len() != orders.len() {
                return Err(Error::InvalidAutomorphism("exponent vector length".to_string()));
            }
            if *c == 0 || *c >= f.order() {
                return Err(Error::InvalidAutomorphism("scalar must be a nonzero field element".to_string()));
            }
            let n = orders[j];
            if f.pow(*c, n as u64) != 1 {
                return Err(Error::InvalidAutomorphism(format!(
                    "image of generator {} has scalar {} with {}^{} != 1",
                    j + 1,
                    c,
                    c,
                    n
                )));
            }
            for (k, &ek) in e.iter().enumerate() {
                if !(n as u64 * ek as u64).is_multiple_of(orders[k] as u64) {
                    return Err(Error::InvalidAutomorphism(format!(
                        "image of generator {} does not have order dividing {}",
                        j + 1,
                        n
                    )));
                }
            }
        }
        // bijectivity on group elements
        let basis = ring.group_basis();
        let mut seen = vec![false; basis.len()];
        for g in &basis {
            let img = self.apply_mono(ring, g).0;
            let idx = ring.group_index(&img);
            if seen[idx] {
                return Err(Error::InvalidAutomorphism("not bijective on G".to_string()));
            }
            seen[idx] = true;
        }
        Ok(())
    }

    fn apply_mono(&self, ring: &Ring, m: &Mono) -> (Mono, Fq) {
        let d = ring.d();
        let orders = ring.group_orders();
        let f = ring.field();
        let mut out = *m;
        let mut coeff = 1;
        let mut exps = vec![0u64; orders.len()];
        for (j, (c, e)) in self.images.iter().enumerate() {
            let b = m.0[d + j] as u64;
            coeff = f.mul(coeff, f.pow(*c, b));
            for (k, &ek) in e.iter().enumerate() {
                exps[k] += b * ek as u64;
            }
        }
        for (k, &n) in orders.iter().enumerate() {
            out.0[d + k] = (exps[k] % n as u64) as u16;
        }
        (out, coeff)
    }

    /// Applies the automorphism to an element.
    pub fn apply(&self, ring: &Ring, a: &RingElem) -> RingElem {
        let f = ring.field();
        ring.normal_form_terms(a.terms.iter().map(|(m, c)| {
            let (m2, k) = self.apply_mono(ring, m);
            (m2, f.mul(*c, k))
        }))
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, ring: &Ring, other: &Automorphism) -> Automorphism {
        let d = ring.d();
        let images = other
            .images
            .iter()
            .map(|(c, e)| {
                let mut m = Mono::ONE;
                for (k, &ek) in e.iter().enumerate() {
                    m.0[d + k] = ek as u16;
                }
                let (m2, k) = self.apply_mono(ring, &m);
                let e2 = (0..e.len()).map(|k| m2.0[d + k] as u32).collect();
                (ring.field().mul(*c, k), e2)
            })
            .collect();
        Automorphism { images }
    }
}

/// Checked construction of an automorphism.
pub fn automorphism(ring: &Ring, images: Vec<(Fq, Vec<u32>)>) -> Result<Automorphism> {
    let a = Automorphism { images };
    a.validate(ring)?;
    Ok(a)
}

/// Applies `σ` to `a`, validating `σ` against the ring first.
pub fn automorphism_apply(ring: &Ring, sigma: &Automorphism, a: &RingElem) -> Result<RingElem> {
    sigma.validate(ring)?;
    Ok(sigma.apply(ring, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r3() -> Ring {
        Ring::new(RingSpec::new(3, 2, &[3])).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Ring::new(RingSpec::new(6, 1, &[2])), Err(Error::NotPrimePower(6)));
        assert_eq!(Ring::new(RingSpec::new(5, 1, &[0])), Err(Error::ZeroGroupOrder));
        let lam = Ring::new(RingSpec::new(5, 1, &[])).unwrap();
        assert_eq!(lam.group_size(), 1);
        assert_eq!(r3().group_size(), 3);
    }

    #[test]
    fn normal_forms() {
        let r = r3();
        assert_eq!(r.parse("t^3").unwrap(), r.one());
        assert!(r.parse("(t-1)^3").unwrap().is_zero());
        assert_eq!(r.parse("x + 0*y").unwrap(), r.x(0));
        let a = r.parse("x*t^5 + 2").unwrap();
        assert_eq!(r.normal_form(&a), a);
    }

    #[test]
    fn norms() {
        let r = r3();
        assert_eq!(r.norm(&r.x(0)), r.parse("x^3").unwrap());
        assert_eq!(r.norm(&r.t(0)), r.one());
        assert!(r.norm(&r.parse("t-1").unwrap()).is_zero());
        assert!(!r.is_non_zero_divisor(&r.parse("t-1").unwrap()));
        assert!(r.is_non_zero_divisor(&r.x(0)));
        assert!(!r.is_non_zero_divisor(&r.zero()));
    }

    #[test]
    fn automorphisms() {
        let r = r3();
        let iota = Automorphism::iota(&r);
        assert_eq!(iota.apply(&r, &r.t(0)), r.parse("t^2").unwrap());
        assert_eq!(iota.apply(&r, &r.parse("x*t + 1").unwrap()), r.parse("x*t^2 + 1").unwrap());
        let r7 = Ring::new(RingSpec::new(7, 1, &[3])).unwrap();
        let kappa = automorphism(&r7, vec![(2, vec![1])]).unwrap();
        assert_eq!(kappa.apply(&r7, &r7.parse("t^2").unwrap()), r7.parse("4*t^2").unwrap());
        assert!(automorphism(&r7, vec![(3, vec![1])]).is_err());
        assert!(automorphism(&r7, vec![(1, vec![0])]).is_err());
    }

    #[test]
    fn determinant_matches_expansion() {
        let r = r3();
        let m = vec![vec![r.x(0), r.x(1), r.one()], vec![r.t(0), r.zero(), r.x(0)], vec![r.one(), r.one(), r.x(1)]];
        // cofactor expansion along the first row
        let minor = |a: &RingElem, b: &RingElem, c: &RingElem, d: &RingElem| r.sub(&r.mul(a, d), &r.mul(b, c));
        let e = r.sum(
            [
                r.mul(&m[0][0], &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2])),
                r.neg(&r.mul(&m[0][1], &minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]))),
                r.mul(&m[0][2], &minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1])),
            ]
            .iter(),
        );
        assert_eq!(r.det(&m), e);
    }

    #[test]
    fn format_and_parse_round_trip() {
        let r = r3();
        let a = r.parse("2*x^2*y*t + x - 1").unwrap();
        assert_eq!(r.parse(&r.format(&a)).unwrap(), a);
        let tl = r.to_term_list(&a);
        assert_eq!(r.from_term_list(&tl).unwrap(), a);
    }
}
