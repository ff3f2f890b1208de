//! Finite fields GF(q) for prime powers q.
//!
//! Prime fields use plain modular arithmetic. Extension fields GF(p^k) encode
//! an element as the base-p digits of its coefficient vector over F_p and use
//! log/exp tables built from a primitive polynomial.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Element of a finite field, encoded as an integer in `0..q`.
pub type Fq = u32;

/// Largest field order supported by the table-driven extension arithmetic.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// A finite field GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// Returns `Some((p, k))` with `q = p^k` and `p` prime, or `None`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    if rest == 1 {
        Some((p, k))
    } else {
        None
    }
}

impl Field {
    /// Builds GF(q); fails unless `q` is a prime power no larger than
    /// [`MAX_FIELD_ORDER`].
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        if k == 1 {
            return Ok(Field { p, k, q, log: Vec::new(), exp: Vec::new() });
        }
        // Search monic degree-k polynomials for one whose root generates the
        // multiplicative group; the residue x then has order q - 1.
        for tail in 0..q {
            let modulus = digits(tail, p, k);
            if modulus[0] == 0 {
                continue;
            }
            if let Some((log, exp)) = build_tables(p, k, q, &modulus) {
                return Ok(Field { p, k, q, log, exp });
            }
        }
        Err(Error::NotPrimePower(q))
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            self.digitwise(a, b, |x, y, p| (x + y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            self.digitwise(0, a, |x, y, p| (x + p - y) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if self.k == 1 {
            ((a as u64 * b as u64) % self.p as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let e = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
            self.exp[e as usize]
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Fq) -> Fq {
        assert!(a != 0, "inverse of zero in GF({})", self.q);
        if self.k == 1 {
            self.pow(a, (self.p - 2) as u64)
        } else {
            let e = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
            self.exp[e as usize]
        }
    }

    pub fn div(&self, a: Fq, b: Fq) -> Fq {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Encodes an integer in `0..q` as a field element (identity on codes).
    pub fn from_code(&self, code: u32) -> Fq {
        code % self.q
    }

    /// All field elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q
    }

    fn digitwise(&self, a: Fq, b: Fq, op: impl Fn(u32, u32, u32) -> u32) -> Fq {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.k {
            out += op(a % self.p, b % self.p, self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }
}

fn digits(mut n: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = vec![0; k as usize];
    for d in out.iter_mut() {
        *d = n % p;
        n /= p;
    }
    out
}

/// Tables for the multiplicative group generated by the residue of x modulo
/// `x^k + modulus[k-1] x^{k-1} + ... + modulus[0]`, if x is primitive.
fn build_tables(p: u32, k: u32, q: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let k = k as usize;
    let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p + d);
    let mut log = vec![u32::MAX; q as usize];
    let mut exp = vec![0u32; (q - 1) as usize];
    let mut cur = vec![0u32; k];
    cur[0] = 1;
    for i in 0..(q - 1) {
        let code = encode(&cur);
        if log[code as usize] != u32::MAX {
            return None;
        }
        log[code as usize] = i;
        exp[i as usize] = code;
        // multiply by x and reduce
        let top = cur[k - 1];
        for j in (1..k).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        for j in 0..k {
            cur[j] = (cur[j] + (p - modulus[j]) * top) % p;
        }
    }
    if cur[0] != 1 || cur[1..].iter().any(|&c| c != 0) {
        return None;
    }
    log[0] = 0;
    Some((log, exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(3), Some((3, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert!(Field::new(6).is_err());
    }

    #[test]
    fn field_axioms_small() {
        for q in [2, 3, 4, 5, 7, 8, 9, 25] {
            let f = Field::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements().take(5) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn seventh_roots() {
        let f = Field::new(7).unwrap();
        assert_eq!(f.pow(2, 3), 1);
        assert_eq!(f.mul(2, 2), 4);
    }
}
