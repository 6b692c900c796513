//! Exact arithmetic in finite fields `F_{p^r}` and towers `F_q ⊆ F_{q^k}`.
//!
//! Every field element is encoded as a `u32` integer: for a field built as
//! `base[X]/(m(X))` with `deg m = k`, the element `c_0 + c_1 X + ... + c_{k-1} X^{k-1}`
//! is encoded as `Σ c_i · |base|^i`, where each `c_i` is itself the encoding of a
//! base-field element. Prime fields use the residue itself. Flattening an element
//! of a tower extension to base-field coordinates is therefore digit extraction,
//! and the coefficient list over `F_p` is the base-`p` expansion of the encoding.
//!
//! Addition only depends on the characteristic and the total degree (it is
//! digit-wise addition mod `p`), so it is never routed through the tower.
//! Multiplication uses exp/log tables for fields of moderate order and falls back
//! to schoolbook polynomial multiplication followed by reduction otherwise.

mod elem;
pub mod poly;
mod tower;

pub use elem::FieldElem;
pub use tower::Tower;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 32;

const MUL_TABLE_LIMIT: u64 = 1 << 20;
const ADD_TABLE_LIMIT: u64 = 1 << 10;

/// A finite field, cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

struct FieldInner {
    p: u32,
    degree: u32,
    order: u64,
    /// Immediate subfield this field is built over; `None` for prime fields.
    base: Option<Field>,
    /// Monic defining polynomial over `base`, low-to-high. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    mul_tables: OnceLock<Option<MulTables>>,
    add_table: OnceLock<Option<Vec<u32>>>,
}

struct MulTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, r)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut r = 0;
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge {
                order: p as u128,
                bound: MAX_FIELD_ORDER,
            });
        }
        Ok(Field(Arc::new(FieldInner {
            p: p as u32,
            degree: 1,
            order: p,
            base: None,
            modulus: vec![0, 1],
            mul_tables: OnceLock::new(),
            add_table: OnceLock::new(),
        })))
    }

    /// `F_{p^r}` defined by the smallest monic irreducible polynomial of degree `r`,
    /// where polynomials are ordered by the integer `Σ c_i p^i` of their coefficients.
    pub fn new(p: u64, r: u32) -> Result<Field> {
        if r == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        let prime = Field::prime(p)?;
        let order = (p as u128).pow(r);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge {
                order,
                bound: MAX_FIELD_ORDER,
            });
        }
        if r == 1 {
            return Ok(prime);
        }
        let modulus = poly::smallest_irreducible(&prime, r as usize);
        Field::extension(&prime, modulus)
    }

    /// `F_{p^r}` for a prime power `q = p^r`.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, r) = prime_power(q)
            .ok_or_else(|| Error::InvalidModulus(format!("{q} is not a prime power")))?;
        Field::new(p, r)
    }

    /// `base[X]/(modulus)`. The modulus must be monic and irreducible over `base`.
    /// A degree-1 modulus `X` returns `base` itself.
    pub fn extension(base: &Field, modulus: Vec<u32>) -> Result<Field> {
        let mut modulus = modulus;
        poly::trim(&mut modulus);
        for &c in &modulus {
            base.check(c)?;
        }
        let k = match poly::degree(&modulus) {
            Some(k) if k >= 1 => k,
            _ => return Err(Error::InvalidModulus("degree must be at least 1".into())),
        };
        if modulus[k] != 1 {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        if k == 1 && modulus[0] == 0 {
            return Ok(base.clone());
        }
        if k == 1 {
            return Err(Error::InvalidModulus(
                "degree-1 modulus must be X (the trivial extension)".into(),
            ));
        }
        let order = (base.order() as u128).pow(k as u32);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::FieldTooLarge {
                order,
                bound: MAX_FIELD_ORDER,
            });
        }
        if !poly::is_irreducible(base, &modulus) {
            return Err(Error::InvalidModulus("modulus is not irreducible".into()));
        }
        Ok(Field(Arc::new(FieldInner {
            p: base.p(),
            degree: base.degree() * k as u32,
            order: order as u64,
            base: Some(base.clone()),
            modulus,
            mul_tables: OnceLock::new(),
            add_table: OnceLock::new(),
        })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Degree over the immediate base field.
    pub fn ext_degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn base(&self) -> Option<&Field> {
        self.0.base.as_ref()
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.base.is_none()
    }

    /// Chain of fields from the prime field up to `self`, inclusive.
    pub fn chain(&self) -> Vec<Field> {
        let mut out = vec![self.clone()];
        while let Some(b) = out.last().unwrap().base() {
            let b = b.clone();
            out.push(b);
        }
        out.reverse();
        out
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.0.order
    }

    pub fn check(&self, a: u32) -> Result<()> {
        if self.contains(a as u64) {
            Ok(())
        } else {
            Err(Error::NotInField {
                value: a as u64,
                order: self.order(),
            })
        }
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        self.check(value)?;
        Ok(FieldElem::from_parts(self.clone(), value))
    }

    /// All elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order() as u32
    }

    /// Digits over the immediate base field (length `ext_degree`).
    pub fn digits(&self, a: u32) -> Vec<u32> {
        match self.base() {
            None => vec![a],
            Some(b) => {
                let qb = b.order();
                let mut a = a as u64;
                (0..self.ext_degree())
                    .map(|_| {
                        let d = (a % qb) as u32;
                        a /= qb;
                        d
                    })
                    .collect()
            }
        }
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        match self.base() {
            None => digits.first().copied().unwrap_or(0),
            Some(b) => {
                let qb = b.order();
                digits
                    .iter()
                    .rev()
                    .fold(0u64, |acc, &d| acc * qb + d as u64) as u32
            }
        }
    }

    /// Coefficients over `F_p`, low-to-high, of length `degree`.
    pub fn prime_coeffs(&self, a: u32) -> Vec<u32> {
        let p = self.p() as u64;
        let mut a = a as u64;
        (0..self.degree())
            .map(|_| {
                let d = (a % p) as u32;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_prime_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() != self.degree() as usize {
            return Err(crate::error::dim(format!(
                "expected {} coefficients, got {}",
                self.degree(),
                coeffs.len()
            )));
        }
        let p = self.p() as u64;
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            if c as u64 >= p {
                return Err(Error::NotInField {
                    value: c as u64,
                    order: p,
                });
            }
            acc = acc * p + c as u64;
        }
        Ok(acc as u32)
    }

    fn add_table(&self) -> Option<&Vec<u32>> {
        self.0
            .add_table
            .get_or_init(|| {
                if self.p() == 2 || self.is_prime_field() || self.order() > ADD_TABLE_LIMIT {
                    return None;
                }
                let q = self.order() as u32;
                let mut t = vec![0u32; (q as usize) * (q as usize)];
                for a in 0..q {
                    for b in 0..q {
                        t[(a * q + b) as usize] = self.add_digits(a, b);
                    }
                }
                Some(t)
            })
            .as_ref()
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let p = self.p() as u64;
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out as u32
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let p = self.p() as u64;
        let mut a = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while a > 0 {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.base.is_none() {
            let s = a as u64 + b as u64;
            return if s >= p as u64 { (s - p as u64) as u32 } else { s as u32 };
        }
        match self.add_table() {
            Some(t) => t[(a as u64 * self.0.order + b as u64) as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 || a == 0 {
            return a;
        }
        if self.0.base.is_none() {
            return p - a;
        }
        self.neg_digits(a)
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn mul_tables(&self) -> Option<&MulTables> {
        self.0
            .mul_tables
            .get_or_init(|| {
                if self.is_prime_field() || self.order() > MUL_TABLE_LIMIT {
                    None
                } else {
                    Some(self.build_tables())
                }
            })
            .as_ref()
    }

    fn build_tables(&self) -> MulTables {
        let q = self.order();
        let group = q - 1;
        let factors = prime_factors(group);
        let g = (2..q as u32)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_structural(g, group / l) != 1)
            })
            .unwrap_or(1);
        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..group as usize {
            exp[i] = x;
            exp[i + group as usize] = x;
            log[x as usize] = i as u32;
            x = self.mul_structural(x, g);
        }
        MulTables { exp, log }
    }

    /// Schoolbook product over the base field followed by reduction modulo the
    /// defining polynomial.
    pub(crate) fn mul_structural(&self, a: u32, b: u32) -> u32 {
        let Some(base) = self.base() else {
            return ((a as u64 * b as u64) % self.p() as u64) as u32;
        };
        let k = self.ext_degree();
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = base.add(prod[i + j], base.mul(x, y));
            }
        }
        let m = &self.0.modulus;
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for t in 0..k {
                prod[d - k + t] = base.sub(prod[d - k + t], base.mul(c, m[t]));
            }
            prod[d] = 0;
        }
        self.from_digits(&prod[..k])
    }

    fn pow_structural(&self, a: u32, mut e: u64) -> u32 {
        let mut result = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_structural(result, b);
            }
            b = self.mul_structural(b, b);
            e >>= 1;
        }
        result
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.0.base.is_none() {
            let p = self.0.p;
            return if p == 2 {
                a & b
            } else {
                ((a as u64 * b as u64) % p as u64) as u32
            };
        }
        if a == 0 || b == 0 {
            return 0;
        }
        match self.mul_tables() {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_structural(a, b),
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut result = 1u32;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        if let Some(t) = (!self.is_prime_field()).then(|| self.mul_tables()).flatten() {
            let group = (self.order() - 1) as u32;
            return Ok(t.exp[((group - t.log[a as usize]) % group) as usize]);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `dst += c · src`.
    pub fn axpy(&self, dst: &mut [u32], c: u32, src: &[u32]) {
        debug_assert_eq!(dst.len(), src.len());
        if c == 0 {
            return;
        }
        if self.p() == 2 && (c == 1 || self.is_prime_field()) {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d ^= s;
            }
            return;
        }
        if self.is_prime_field() {
            let p = self.p() as u64;
            let c = c as u64;
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = ((*d as u64 + c * s as u64) % p) as u32;
            }
            return;
        }
        if let Some(t) = self.mul_tables() {
            let lc = t.log[c as usize];
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    let m = t.exp[(lc + t.log[s as usize]) as usize];
                    *d = self.add(*d, m);
                }
            }
            return;
        }
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.add(*d, self.mul(c, s));
        }
    }

    pub fn scale(&self, v: &mut [u32], c: u32) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        debug_assert_eq!(a.len(), b.len());
        if self.is_prime_field() {
            let p = self.p() as u64;
            if p == 2 {
                return a.iter().zip(b).fold(0, |acc, (&x, &y)| acc ^ (x & y));
            }
            let mut acc = 0u64;
            for (&x, &y) in a.iter().zip(b) {
                acc = (acc + x as u64 * y as u64) % p;
            }
            return acc as u32;
        }
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    pub fn sum(&self, values: impl IntoIterator<Item = u32>) -> u32 {
        values.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// Frobenius `x ↦ x^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p() as u64)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.order == other.0.order
                && self.0.modulus == other.0.modulus
                && self.0.base == other.0.base)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chain = self.chain();
        if chain.len() <= 2 {
            write!(f, "F_{}", self.order())
        } else {
            let orders: Vec<String> = chain.iter().map(|c| c.order().to_string()).collect();
            write!(f, "F_{} (tower {})", self.order(), orders.join(" ⊂ "))
        }
    }
}
