//! Arithmetic in the finite fields GF(q), q = p^k.
//!
//! Elements are stored as a single integer code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! where `c_i` are the coefficients of the reduced polynomial representative
//! (low degree first). For small fields the addition and multiplication tables
//! are precomputed at construction.

use std::fmt;

use thiserror::Error;

/// Largest field order accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get full operation tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("field order {q} exceeds the configured maximum {max}")]
    TooLarge { q: u64, max: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("coefficient vector does not describe an element of GF({0})")]
    InvalidCoefficients(u32),
}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 0;
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_some()
}

#[derive(Debug, Clone)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

/// The finite field GF(p^k) presented as GF(p)[x] / (m(x)).
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(q) with the default order limit.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        Self::with_max_order(q, DEFAULT_MAX_ORDER)
    }

    /// Builds GF(q). The modulus is the lexicographically smallest monic
    /// irreducible polynomial of degree k, comparing coefficient vectors
    /// from the constant term upward.
    pub fn with_max_order(q: u64, max_order: u64) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotAPrimePower(q))?;
        if q > max_order || q > u64::from(u32::MAX) {
            return Err(FieldError::TooLarge { q, max: max_order });
        }
        let p = p as u32;
        let modulus = smallest_irreducible(p, k);
        let mut field = Field {
            p,
            k,
            q: q as u32,
            modulus,
            tables: None,
        };
        if field.q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; length `k + 1`, leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement<'_> {
        FieldElement {
            field: self,
            code: 0,
        }
    }

    pub fn one(&self) -> FieldElement<'_> {
        FieldElement {
            field: self,
            code: 1,
        }
    }

    /// The element with the given integer code, if `code < q`.
    pub fn element(&self, code: u32) -> Option<FieldElement<'_>> {
        (code < self.q).then_some(FieldElement { field: self, code })
    }

    /// The element with polynomial coefficients `coeffs` (constant term first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement<'_>, FieldError> {
        if coeffs.len() != self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::InvalidCoefficients(self.q));
        }
        Ok(FieldElement {
            field: self,
            code: self.encode(coeffs),
        })
    }

    /// All `q` elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement<'_>> + '_ {
        (0..self.q).map(move |code| FieldElement { field: self, code })
    }

    pub(crate) fn add_codes(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.add[(a * self.q + b) as usize],
            None => self.add_slow(a, b),
        }
    }

    pub(crate) fn mul_codes(&self, a: u32, b: u32) -> u32 {
        match &self.tables {
            Some(t) => t.mul[(a * self.q + b) as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub(crate) fn neg_code(&self, a: u32) -> u32 {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => {
                let c: Vec<u32> = self
                    .decode(a)
                    .iter()
                    .map(|&x| (self.p - x) % self.p)
                    .collect();
                self.encode(&c)
            }
        }
    }

    /// Multiplicative inverse of a nonzero code.
    pub(crate) fn inv_code(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.inv[a as usize]),
            None => Some(self.inv_slow(a)),
        }
    }

    fn decode(&self, mut code: u32) -> Vec<u32> {
        let mut c = vec![0; self.k as usize];
        for slot in c.iter_mut() {
            *slot = code % self.p;
            code /= self.p;
        }
        c
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (a, b) = (self.decode(a), self.decode(b));
        let c: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&c)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let prod = poly::mul(&self.decode(a), &self.decode(b), self.p);
        let (_, rem) = poly::divrem(&prod, &self.modulus, self.p);
        let mut c = rem;
        c.resize(self.k as usize, 0);
        self.encode(&c)
    }

    fn inv_slow(&self, a: u32) -> u32 {
        let mut c = poly::inverse_mod(&self.decode(a), &self.modulus, self.p)
            .expect("nonzero element of a field is invertible");
        c.resize(self.k as usize, 0);
        self.encode(&c)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..self.q {
            for b in 0..self.q {
                let idx = a as usize * q + b as usize;
                add[idx] = self.add_slow(a, b);
                mul[idx] = self.mul_slow(a, b);
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..self.q {
            for b in 0..self.q {
                let idx = a as usize * q + b as usize;
                if add[idx] == 0 {
                    neg[a as usize] = b;
                }
                if mul[idx] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }
}

/// An element of a [`Field`], in canonical (fully reduced) form.
#[derive(Clone, Copy)]
pub struct FieldElement<'a> {
    field: &'a Field,
    code: u32,
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && same_field(self.field, other.field)
    }
}

impl Eq for FieldElement<'_> {}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})[{}]", self.field.q, self)
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            return write!(f, "{}", self.code);
        }
        let coeffs = self.coeffs();
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

fn same_field(a: &Field, b: &Field) -> bool {
    std::ptr::eq(a, b) || a == b
}

impl<'a> FieldElement<'a> {
    pub fn field(&self) -> &'a Field {
        self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    /// Polynomial coefficients, constant term first, length `k`.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.decode(self.code)
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if same_field(self.field, other.field) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, code: u32) -> Self {
        FieldElement {
            field: self.field,
            code,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.add_codes(self.code, other.code)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let negated = self.field.neg_code(other.code);
        Ok(self.with(self.field.add_codes(self.code, negated)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.mul_codes(self.code, other.code)))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(self.with(self.field.mul_codes(self.code, inv.code)))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.field
            .inv_code(self.code)
            .map(|c| self.with(c))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg_code(self.code))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.code;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.field.mul_codes(acc, base);
            }
            base = self.field.mul_codes(base, base);
            e >>= 1;
        }
        self.with(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Unary; the second operand is ignored apart from the field check.
    Inv,
    /// Unary; the second operand is ignored apart from the field check.
    Neg,
}

/// Dispatches one field operation on `a` and `b`.
pub fn field_arith<'a>(
    a: FieldElement<'a>,
    b: FieldElement<'a>,
    op: ArithOp,
) -> Result<FieldElement<'a>, FieldError> {
    match op {
        ArithOp::Add => a.add(&b),
        ArithOp::Sub => a.sub(&b),
        ArithOp::Mul => a.mul(&b),
        ArithOp::Div => a.div(&b),
        ArithOp::Inv => {
            a.check(&b)?;
            a.inv()
        }
        ArithOp::Neg => {
            a.check(&b)?;
            Ok(a.neg())
        }
    }
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let k = k as usize;
    let total = (p as u64).pow(k as u32);
    for t in 0..total {
        // c_0 is the most significant digit of t, so t runs through the
        // coefficient vectors in lexicographic order.
        let mut coeffs = vec![0u32; k + 1];
        let mut rest = t;
        for i in (0..k).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[k] = 1;
        if poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Dense polynomials over GF(p), constant term first, without trailing zeros
/// unless stated otherwise.
mod poly {
    pub(super) fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub(super) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p64 = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    pub(super) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub(super) fn inv_mod_p(a: u32, p: u32) -> u32 {
        // a^(p-2) mod p
        let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    }

    /// Quotient and remainder of `a` by a nonzero `b`.
    pub(super) fn divrem(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut rem = trim(a.to_vec());
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = inv_mod_p(*b.last().unwrap(), p) as u64;
        let mut quot = vec![0u32; rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let factor = (*rem.last().unwrap() as u64 * lead_inv % p as u64) as u32;
            quot[shift] = factor;
            for (i, &c) in b.iter().enumerate() {
                let sub = (factor as u64 * c as u64 % p as u64) as u32;
                rem[shift + i] = (rem[shift + i] + p - sub) % p;
            }
            rem = trim(rem);
        }
        (trim(quot), rem)
    }

    /// Inverse of `a` modulo the irreducible `m`, by the extended Euclidean algorithm.
    pub(super) fn inverse_mod(a: &[u32], m: &[u32], p: u32) -> Option<Vec<u32>> {
        let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
        let (mut s0, mut s1) = (Vec::new(), vec![1u32]);
        while !r1.is_empty() {
            let (quot, rem) = divrem(&r0, &r1, p);
            let next = sub(&s0, &mul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, next);
        }
        if r0.len() != 1 {
            return None;
        }
        let scale = inv_mod_p(r0[0], p);
        let scaled = mul(&s0, &[scale], p);
        Some(divrem(&scaled, m, p).1)
    }

    /// True iff the monic `f` of degree k has no monic factor of degree 1..=k/2.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = f.len() - 1;
        for d in 1..=k / 2 {
            let count = (p as u64).pow(d as u32);
            for t in 0..count {
                let mut g = vec![0u32; d + 1];
                let mut rest = t;
                for slot in g.iter_mut().take(d) {
                    *slot = (rest % p as u64) as u32;
                    rest /= p as u64;
                }
                g[d] = 1;
                if divrem(f, &g, p).1.is_empty() {
                    return false;
                }
            }
        }
        true
    }
}
