//! Exact arithmetic in GF(q) for small prime powers q = p^e.
//!
//! Elements are encoded as integers in `[0, q)`: the base-p digits of the
//! encoding are the coefficients of the residue polynomial (constant term
//! first). Every field carries full add/mul/neg/inv lookup tables, built
//! from polynomial arithmetic and re-checked against it at construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version of the fixed irreducible-modulus table. Encodings of extension
/// field elements are only stable across runs that agree on this version,
/// so it participates in cache keys.
pub const MODULUS_TABLE_VERSION: u32 = 1;

const SUPPORTED_PRIMES: [u8; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// Fixed irreducible modulus for GF(p^e), constant term first.
fn fixed_modulus(p: u8, e: u8) -> Option<&'static [u8]> {
    match (p, e) {
        (2, 2) => Some(&[1, 1, 1]),       // x^2 + x + 1
        (2, 3) => Some(&[1, 1, 0, 1]),    // x^3 + x + 1
        (2, 4) => Some(&[1, 1, 0, 0, 1]), // x^4 + x + 1
        (3, 2) => Some(&[1, 0, 1]),       // x^2 + 1
        (3, 3) => Some(&[1, 2, 0, 1]),    // x^3 + 2x + 1
        (5, 2) => Some(&[2, 0, 1]),       // x^2 + 2
        _ => None,
    }
}

/// Splits a supported order q into (p, e).
fn factor_order(q: u64) -> Option<(u8, u8)> {
    for &p in &SUPPORTED_PRIMES {
        let mut power = u64::from(p);
        let mut e = 1u8;
        while power <= q {
            if power == q {
                return Some((p, e));
            }
            power *= u64::from(p);
            e += 1;
        }
    }
    None
}

/// Serializable description of a field: {p, e, modulus} plus the table
/// version, as emitted in JSON reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u8,
    pub e: u8,
    pub q: u8,
    /// Coefficients of the irreducible modulus, constant term first;
    /// empty when e = 1.
    pub modulus: Vec<u8>,
    pub table_version: u32,
}

/// An element of GF(q). Carries its field order so that operations on
/// operands from different fields can be rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u8,
    q: u8,
}

impl FieldElement {
    pub fn encoding(self) -> u8 {
        self.value
    }

    pub fn field_order(self) -> u8 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

/// GF(q) with precomputed operation tables.
#[derive(Debug, Clone)]
pub struct Field {
    p: u8,
    e: u8,
    q: u8,
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Field {
    /// Builds GF(q). Supported orders are all primes <= 31 and the prime
    /// powers 4, 8, 9, 16, 25, 27, each with a fixed irreducible modulus.
    pub fn new(q: u64) -> Result<Field> {
        let (p, e) = factor_order(q).ok_or(Error::UnsupportedField(q))?;
        let modulus: Vec<u8> = if e == 1 {
            Vec::new()
        } else {
            fixed_modulus(p, e)
                .ok_or(Error::UnsupportedField(q))?
                .to_vec()
        };
        if e > 1 {
            debug_assert_eq!(modulus.len(), e as usize + 1);
            if !poly_is_irreducible(&modulus, p) {
                // The table is fixed, so this is unreachable unless the
                // table itself is edited; keep the check as a guard.
                return Err(Error::InvalidInput(format!(
                    "modulus for GF({q}) is reducible over GF({p})"
                )));
            }
        }
        let q8 = q as u8;
        let qs = q as usize;

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            for b in 0..qs {
                add[a * qs + b] = poly_add_enc(a as u8, b as u8, p, e);
                mul[a * qs + b] = poly_mul_enc(a as u8, b as u8, p, e, &modulus);
            }
        }
        for a in 0..qs {
            let mut found_neg = None;
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    found_neg = Some(b as u8);
                }
            }
            neg[a] = found_neg.expect("additive inverse exists");
            if a != 0 {
                let mut found_inv = None;
                for b in 1..qs {
                    if mul[a * qs + b] == 1 {
                        found_inv = Some(b as u8);
                    }
                }
                inv[a] = match found_inv {
                    Some(b) => b,
                    None => {
                        return Err(Error::InvalidInput(format!(
                            "GF({q}) table construction found no inverse for {a}"
                        )))
                    }
                };
            }
        }

        let field = Field {
            p,
            e,
            q: q8,
            modulus,
            add,
            mul,
            neg,
            inv,
        };
        field.check_tables()?;
        Ok(field)
    }

    /// Re-derives every table entry from polynomial arithmetic and checks
    /// the identities 0 + a = a, 1 * a = a, a * inv(a) = 1.
    fn check_tables(&self) -> Result<()> {
        let qs = self.q as usize;
        for a in 0..qs {
            for b in 0..qs {
                let s = poly_add_enc(a as u8, b as u8, self.p, self.e);
                let m = poly_mul_enc(a as u8, b as u8, self.p, self.e, &self.modulus);
                if self.add[a * qs + b] != s || self.mul[a * qs + b] != m {
                    return Err(Error::InvalidInput(format!(
                        "GF({}) table disagrees with polynomial arithmetic at ({a},{b})",
                        self.q
                    )));
                }
            }
            if self.add[a] != a as u8 || self.mul[qs + a] != a as u8 {
                return Err(Error::InvalidInput(format!(
                    "GF({}) identity row broken at {a}",
                    self.q
                )));
            }
            if a != 0 && self.mulv(a as u8, self.inv[a]) != 1 {
                return Err(Error::InvalidInput(format!(
                    "GF({}) inverse table broken at {a}",
                    self.q
                )));
            }
        }
        Ok(())
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn characteristic(&self) -> u8 {
        self.p
    }

    pub fn extension_degree(&self) -> u8 {
        self.e
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            e: self.e,
            q: self.q,
            modulus: self.modulus.clone(),
            table_version: MODULUS_TABLE_VERSION,
        }
    }

    pub fn element(&self, encoding: u64) -> Result<FieldElement> {
        if encoding >= u64::from(self.q) {
            return Err(Error::EncodingOutOfRange {
                encoding,
                q: self.q,
            });
        }
        Ok(FieldElement {
            value: encoding as u8,
            q: self.q,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, q: self.q }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { value: 1, q: self.q }
    }

    /// All q elements in ascending encoding order. This order is the fixed
    /// convention whenever a construction asks for "the elements of F_q".
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.q)
            .map(|value| FieldElement { value, q: self.q })
            .collect()
    }

    fn check_operand(&self, a: FieldElement) -> Result<u8> {
        if a.q != self.q {
            return Err(Error::MixedFields {
                left: self.q,
                right: a.q,
            });
        }
        Ok(a.value)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let (a, b) = (self.check_operand(a)?, self.check_operand(b)?);
        Ok(FieldElement {
            value: self.addv(a, b),
            q: self.q,
        })
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let (a, b) = (self.check_operand(a)?, self.check_operand(b)?);
        Ok(FieldElement {
            value: self.subv(a, b),
            q: self.q,
        })
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let (a, b) = (self.check_operand(a)?, self.check_operand(b)?);
        Ok(FieldElement {
            value: self.mulv(a, b),
            q: self.q,
        })
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        let a = self.check_operand(a)?;
        Ok(FieldElement {
            value: self.negv(a),
            q: self.q,
        })
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        let a = self.check_operand(a)?;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElement {
            value: self.invv(a),
            q: self.q,
        })
    }

    // Raw-encoding operations used by the linear algebra inner loops.

    #[inline]
    pub(crate) fn addv(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn subv(&self, a: u8, b: u8) -> u8 {
        self.addv(a, self.neg[b as usize])
    }

    #[inline]
    pub(crate) fn mulv(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub(crate) fn negv(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub(crate) fn invv(&self, a: u8) -> u8 {
        debug_assert!(a != 0, "invv(0)");
        self.inv[a as usize]
    }
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over GF(p), used to build and audit the tables.
// ---------------------------------------------------------------------------

fn enc_to_digits(mut v: u8, p: u8, e: u8) -> Vec<u8> {
    let mut digits = vec![0u8; e as usize];
    for d in digits.iter_mut() {
        *d = v % p;
        v /= p;
    }
    digits
}

fn digits_to_enc(digits: &[u8], p: u8) -> u8 {
    let mut v = 0u32;
    for &d in digits.iter().rev() {
        v = v * u32::from(p) + u32::from(d);
    }
    v as u8
}

fn poly_add_enc(a: u8, b: u8, p: u8, e: u8) -> u8 {
    let da = enc_to_digits(a, p, e);
    let db = enc_to_digits(b, p, e);
    let sum: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    digits_to_enc(&sum, p)
}

fn poly_mul_enc(a: u8, b: u8, p: u8, e: u8, modulus: &[u8]) -> u8 {
    let da = enc_to_digits(a, p, e);
    let db = enc_to_digits(b, p, e);
    let mut prod = vec![0u16; 2 * e as usize];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u16::from(x) * u16::from(y)) % u16::from(p);
        }
    }
    let mut prod: Vec<u8> = prod.into_iter().map(|x| x as u8).collect();
    if e > 1 {
        // Reduce by the monic modulus of degree e.
        for i in (e as usize..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &m) in modulus.iter().enumerate().take(e as usize) {
                let idx = i - e as usize + j;
                let sub = (u16::from(c) * u16::from(m)) % u16::from(p);
                prod[idx] = ((u16::from(prod[idx]) + u16::from(p) - sub) % u16::from(p)) as u8;
            }
        }
    }
    digits_to_enc(&prod[..e as usize], p)
}

/// Remainder of `a` modulo `b` over GF(p); coefficient vectors, constant
/// term first, `b` non-zero.
fn poly_rem(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
    let deg = |v: &[u8]| v.iter().rposition(|&c| c != 0);
    let db = deg(b).expect("divisor must be non-zero");
    let lead_inv = mod_inv(b[db], p);
    let mut r = a.to_vec();
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let factor = (u16::from(r[dr]) * u16::from(lead_inv) % u16::from(p)) as u8;
        let shift = dr - db;
        for (j, &c) in b.iter().enumerate().take(db + 1) {
            let sub = (u16::from(factor) * u16::from(c)) % u16::from(p);
            r[j + shift] = ((u16::from(r[j + shift]) + u16::from(p) - sub) % u16::from(p)) as u8;
        }
    }
    r
}

fn mod_inv(a: u8, p: u8) -> u8 {
    (1..p).find(|&b| (u16::from(a) * u16::from(b)) % u16::from(p) == 1).expect("p prime")
}

/// Exhaustive irreducibility test: no monic polynomial of degree
/// 1..=deg/2 divides `m`. Feasible for the tiny moduli used here.
fn poly_is_irreducible(m: &[u8], p: u8) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        // All monic polynomials of degree d over GF(p).
        let count = u32::from(p).pow(d as u32);
        for idx in 0..count {
            let mut divisor = enc_to_digits_u32(idx, p, d);
            divisor.push(1); // monic
            let rem = poly_rem(m, &divisor, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn enc_to_digits_u32(mut v: u32, p: u8, len: usize) -> Vec<u8> {
    let mut digits = vec![0u8; len];
    for d in digits.iter_mut() {
        *d = (v % u32::from(p)) as u8;
        v /= u32::from(p);
    }
    digits
}

/// Every supported field order, ascending.
pub fn supported_orders() -> Vec<u64> {
    let mut orders: Vec<u64> = SUPPORTED_PRIMES.iter().map(|&p| u64::from(p)).collect();
    orders.extend([4, 8, 9, 16, 25, 27]);
    orders.sort_unstable();
    orders
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf3_addition() {
        let f = Field::new(3).unwrap();
        let two = f.element(2).unwrap();
        assert_eq!(f.add(two, two).unwrap().encoding(), 1);
    }

    #[test]
    fn gf4_mul_and_inv() {
        // modulus x^2 + x + 1: x * x = x + 1, x * (x + 1) = 1
        let f = Field::new(4).unwrap();
        let x = f.element(2).unwrap();
        let x1 = f.element(3).unwrap();
        assert_eq!(f.mul(x, x).unwrap(), x1);
        assert_eq!(f.inv(x).unwrap(), x1);
        assert_eq!(f.add(x, x1).unwrap().encoding(), 1);
    }

    #[test]
    fn gf5_inverse() {
        let f = Field::new(5).unwrap();
        assert_eq!(f.inv(f.element(2).unwrap()).unwrap().encoding(), 3);
        for a in 1..5 {
            let a = f.element(a).unwrap();
            assert_eq!(f.inv(f.inv(a).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn zero_inverse_is_error() {
        let f = Field::new(7).unwrap();
        assert!(matches!(f.inv(f.zero()), Err(Error::ZeroInverse)));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f3 = Field::new(3).unwrap();
        let f5 = Field::new(5).unwrap();
        let a = f3.element(2).unwrap();
        let b = f5.element(2).unwrap();
        assert!(matches!(f3.add(a, b), Err(Error::MixedFields { .. })));
    }

    #[test]
    fn elements_enumeration() {
        let f = Field::new(4).unwrap();
        let enc: Vec<u8> = f.elements().iter().map(|x| x.encoding()).collect();
        assert_eq!(enc, vec![0, 1, 2, 3]);
        assert_eq!(Field::new(9).unwrap().elements().len(), 9);
    }

    #[test]
    fn unsupported_orders_rejected() {
        for q in [0u64, 1, 6, 12, 32, 49, 1024] {
            assert!(Field::new(q).is_err(), "q={q} should be unsupported");
        }
    }

    #[test]
    fn axioms_exhaustive_small() {
        for q in supported_orders() {
            if q > 9 {
                continue;
            }
            let f = Field::new(q).unwrap();
            let els = f.elements();
            for &a in &els {
                for &b in &els {
                    assert_eq!(f.add(a, b).unwrap(), f.add(b, a).unwrap());
                    assert_eq!(f.mul(a, b).unwrap(), f.mul(b, a).unwrap());
                    for &c in &els {
                        let lhs = f.add(f.add(a, b).unwrap(), c).unwrap();
                        let rhs = f.add(a, f.add(b, c).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                        let dl = f.mul(a, f.add(b, c).unwrap()).unwrap();
                        let dr = f.add(f.mul(a, b).unwrap(), f.mul(a, c).unwrap()).unwrap();
                        assert_eq!(dl, dr);
                    }
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()).unwrap(), f.one());
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_cyclic() {
        for q in supported_orders() {
            if q > 32 {
                continue;
            }
            let f = Field::new(q).unwrap();
            let ord = |a: FieldElement| -> u64 {
                let mut x = a;
                let mut n = 1u64;
                while x != f.one() {
                    x = f.mul(x, a).unwrap();
                    n += 1;
                }
                n
            };
            let mut found_generator = false;
            for a in f.elements().into_iter().skip(1) {
                let o = ord(a);
                assert_eq!((q - 1) % o, 0, "element order divides q-1");
                if o == q - 1 {
                    found_generator = true;
                }
            }
            assert!(found_generator, "GF({q})* must be cyclic");
        }
    }
}
