//! Exact coefficient arithmetic: rationals, prime fields, Z/p^2, and
//! polynomial or truncated series in the formal parameter hbar.
//!
//! Invariants: rationals are stored in lowest terms with positive denominator
//! (enforced by `num_rational`), modular representatives are canonical in
//! 0..m, and hbar-series never store exponents above their truncation order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A scalar coefficient ring: Q, F_p, or Z/p^2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ScalarRing {
    Q,
    Fp(u64),
    Zp2(u64),
}

impl ScalarRing {
    pub fn modulus(&self) -> Option<u64> {
        match self {
            ScalarRing::Q => None,
            ScalarRing::Fp(p) => Some(*p),
            ScalarRing::Zp2(p) => Some(p * p),
        }
    }

    /// The characteristic prime, if positive characteristic.
    pub fn prime(&self) -> Option<u64> {
        match self {
            ScalarRing::Q => None,
            ScalarRing::Fp(p) | ScalarRing::Zp2(p) => Some(*p),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, ScalarRing::Zp2(_))
    }
}

impl fmt::Display for ScalarRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarRing::Q => write!(f, "Q"),
            ScalarRing::Fp(p) => write!(f, "F{}", p),
            ScalarRing::Zp2(p) => write!(f, "Z/{}^2", p),
        }
    }
}

/// A coefficient ring, possibly extended by the formal parameter hbar.
///
/// `trunc: None` is the exact polynomial ring R[h]; `trunc: Some(k)` is
/// R[h]/(h^{k+1}), where products silently drop exponents above k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Ring {
    Scalar(ScalarRing),
    Hbar { base: ScalarRing, trunc: Option<u32> },
}

pub const Q: Ring = Ring::Scalar(ScalarRing::Q);

pub fn fp(p: u64) -> Ring {
    Ring::Scalar(ScalarRing::Fp(p))
}

pub fn zp2(p: u64) -> Ring {
    Ring::Scalar(ScalarRing::Zp2(p))
}

/// Q[h], exact in hbar.
pub const QH: Ring = Ring::Hbar { base: ScalarRing::Q, trunc: None };

/// Q[h]/(h^{k+1}).
pub fn qh_trunc(k: u32) -> Ring {
    Ring::Hbar { base: ScalarRing::Q, trunc: Some(k) }
}

impl Ring {
    pub fn base(&self) -> ScalarRing {
        match self {
            Ring::Scalar(s) => *s,
            Ring::Hbar { base, .. } => *base,
        }
    }

    pub fn trunc(&self) -> Option<u32> {
        match self {
            Ring::Scalar(_) => None,
            Ring::Hbar { trunc, .. } => *trunc,
        }
    }

    pub fn has_hbar(&self) -> bool {
        matches!(self, Ring::Hbar { .. })
    }

    pub fn prime(&self) -> Option<u64> {
        self.base().prime()
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Ring::Scalar(s) => Coeff::scalar_zero(*s),
            Ring::Hbar { base, trunc } => Coeff::Hbar(HbarCoeff {
                base: *base,
                trunc: *trunc,
                terms: BTreeMap::new(),
            }),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            Ring::Scalar(s) => scalar_from_bigint(*s, v),
            Ring::Hbar { base, trunc } => {
                let s = scalar_from_bigint(*base, v);
                let mut terms = BTreeMap::new();
                if !s.is_zero() {
                    terms.insert(0, s);
                }
                Coeff::Hbar(HbarCoeff { base: *base, trunc: *trunc, terms })
            }
        }
    }

    pub fn from_rational(&self, v: &BigRational) -> Result<Coeff> {
        let s = match self.base() {
            ScalarRing::Q => Coeff::Rat(v.clone()),
            base @ (ScalarRing::Fp(p) | ScalarRing::Zp2(p)) => {
                if bigint_mod_u64(v.denom(), p) == 0 {
                    return Err(Error::BadPrime(format!(
                        "denominator of {} divisible by {}",
                        v, p
                    )));
                }
                let m = base.modulus().unwrap();
                let num = bigint_mod_u64(v.numer(), m);
                let den_inv = inv_mod(bigint_mod_u64(v.denom(), m), m).unwrap();
                let val = mul_mod(num, den_inv, m);
                match base {
                    ScalarRing::Fp(p) => Coeff::Fp { p, v: val },
                    ScalarRing::Zp2(p) => Coeff::Zp2 { p, v: val },
                    ScalarRing::Q => unreachable!(),
                }
            }
        };
        Ok(match self {
            Ring::Scalar(_) => s,
            Ring::Hbar { base, trunc } => {
                let mut terms = BTreeMap::new();
                if !s.is_zero() {
                    terms.insert(0, s);
                }
                Coeff::Hbar(HbarCoeff { base: *base, trunc: *trunc, terms })
            }
        })
    }

    /// The formal parameter h as a ring element. Panics on scalar rings.
    pub fn hbar(&self) -> Coeff {
        match self {
            Ring::Scalar(_) => panic!("scalar ring has no hbar"),
            Ring::Hbar { base, trunc } => {
                let mut terms = BTreeMap::new();
                if trunc.map_or(true, |k| k >= 1) {
                    terms.insert(1, scalar_from_bigint(*base, &BigInt::one()));
                }
                Coeff::Hbar(HbarCoeff { base: *base, trunc: *trunc, terms })
            }
        }
    }

}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Scalar(s) => write!(f, "{}", s),
            Ring::Hbar { base, trunc: None } => write!(f, "{}[h]", base),
            Ring::Hbar { base, trunc: Some(k) } => write!(f, "{}[h]/h^{}", base, k + 1),
        }
    }
}

/// Least non-negative residue of a BigInt mod m.
pub fn bigint_mod_u64(v: &BigInt, m: u64) -> u64 {
    let m_big = BigInt::from(m);
    let r = v % &m_big;
    let r = if r.sign() == Sign::Minus { r + &m_big } else { r };
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn scalar_from_bigint(s: ScalarRing, v: &BigInt) -> Coeff {
    match s {
        ScalarRing::Q => Coeff::Rat(BigRational::from(v.clone())),
        ScalarRing::Fp(p) => Coeff::Fp { p, v: bigint_mod_u64(v, p) },
        ScalarRing::Zp2(p) => Coeff::Zp2 { p, v: bigint_mod_u64(v, p * p) },
    }
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of a mod m, if gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if a == 0 {
        return None;
    }
    let (g, x, _) = extended_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some((((x % m as i128) + m as i128) % m as i128) as u64)
}

/// Polynomial (or truncated series) in hbar over a scalar ring.
///
/// Values in `terms` are always scalar coefficients of ring `base`; keys never
/// exceed `trunc` when it is set, and no stored value is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HbarCoeff {
    base: ScalarRing,
    trunc: Option<u32>,
    terms: BTreeMap<u32, Coeff>,
}

impl HbarCoeff {
    pub fn base(&self) -> ScalarRing {
        self.base
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Coeff)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Scalar coefficient at h^k.
    pub fn coeff_at(&self, k: u32) -> Coeff {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Coeff::scalar_zero(self.base))
    }

    pub fn max_exp(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }
}

/// An exact coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Coeff {
    Rat(BigRational),
    Fp { p: u64, v: u64 },
    Zp2 { p: u64, v: u64 },
    Hbar(HbarCoeff),
}

impl Coeff {
    fn scalar_zero(s: ScalarRing) -> Coeff {
        match s {
            ScalarRing::Q => Coeff::Rat(BigRational::zero()),
            ScalarRing::Fp(p) => Coeff::Fp { p, v: 0 },
            ScalarRing::Zp2(p) => Coeff::Zp2 { p, v: 0 },
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Coeff::Rat(_) => Ring::Scalar(ScalarRing::Q),
            Coeff::Fp { p, .. } => Ring::Scalar(ScalarRing::Fp(*p)),
            Coeff::Zp2 { p, .. } => Ring::Scalar(ScalarRing::Zp2(*p)),
            Coeff::Hbar(h) => Ring::Hbar { base: h.base, trunc: h.trunc },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Fp { v, .. } | Coeff::Zp2 { v, .. } => *v == 0,
            Coeff::Hbar(h) => h.terms.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_one(),
            Coeff::Fp { v, .. } | Coeff::Zp2 { v, .. } => *v == 1,
            Coeff::Hbar(h) => {
                h.terms.len() == 1 && h.terms.get(&0).map_or(false, |c| c.is_one())
            }
        }
    }

    fn assert_same_ring(&self, other: &Coeff) {
        assert_eq!(
            self.ring(),
            other.ring(),
            "coefficient ring mismatch (checked at API boundaries)"
        );
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        self.assert_same_ring(other);
        match (self, other) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a + b),
            (Coeff::Fp { p, v: a }, Coeff::Fp { v: b, .. }) => {
                Coeff::Fp { p: *p, v: add_mod(*a, *b, *p) }
            }
            (Coeff::Zp2 { p, v: a }, Coeff::Zp2 { v: b, .. }) => {
                Coeff::Zp2 { p: *p, v: add_mod(*a, *b, p * p) }
            }
            (Coeff::Hbar(a), Coeff::Hbar(b)) => {
                let mut terms = a.terms.clone();
                for (k, c) in &b.terms {
                    let entry = terms
                        .entry(*k)
                        .or_insert_with(|| Coeff::scalar_zero(a.base));
                    *entry = entry.add(c);
                }
                terms.retain(|_, c| !c.is_zero());
                Coeff::Hbar(HbarCoeff { base: a.base, trunc: a.trunc, terms })
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rat(a) => Coeff::Rat(-a),
            Coeff::Fp { p, v } => Coeff::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
            Coeff::Zp2 { p, v } => Coeff::Zp2 {
                p: *p,
                v: if *v == 0 { 0 } else { p * p - v },
            },
            Coeff::Hbar(h) => Coeff::Hbar(HbarCoeff {
                base: h.base,
                trunc: h.trunc,
                terms: h.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
            }),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        self.assert_same_ring(other);
        match (self, other) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            (Coeff::Fp { p, v: a }, Coeff::Fp { v: b, .. }) => {
                Coeff::Fp { p: *p, v: mul_mod(*a, *b, *p) }
            }
            (Coeff::Zp2 { p, v: a }, Coeff::Zp2 { v: b, .. }) => {
                Coeff::Zp2 { p: *p, v: mul_mod(*a, *b, p * p) }
            }
            (Coeff::Hbar(a), Coeff::Hbar(b)) => {
                let mut terms: BTreeMap<u32, Coeff> = BTreeMap::new();
                for (ka, ca) in &a.terms {
                    for (kb, cb) in &b.terms {
                        let k = ka + kb;
                        if let Some(t) = a.trunc {
                            if k > t {
                                continue; // dropped, never an error
                            }
                        }
                        let prod = ca.mul(cb);
                        if prod.is_zero() {
                            continue;
                        }
                        let entry = terms
                            .entry(k)
                            .or_insert_with(|| Coeff::scalar_zero(a.base));
                        *entry = entry.add(&prod);
                    }
                }
                terms.retain(|_, c| !c.is_zero());
                Coeff::Hbar(HbarCoeff { base: a.base, trunc: a.trunc, terms })
            }
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse. Defined for nonzero rationals, units of F_p and
    /// Z/p^2, and hbar elements that are units of the base ring (no h part).
    pub fn inv(&self) -> Result<Coeff> {
        match self {
            Coeff::Rat(a) => {
                if a.is_zero() {
                    Err(Error::SingularMatrix)
                } else {
                    Ok(Coeff::Rat(a.recip()))
                }
            }
            Coeff::Fp { p, v } => inv_mod(*v, *p)
                .map(|w| Coeff::Fp { p: *p, v: w })
                .ok_or(Error::SingularMatrix),
            Coeff::Zp2 { p, v } => inv_mod(*v, p * p)
                .map(|w| Coeff::Zp2 { p: *p, v: w })
                .ok_or(Error::SingularMatrix),
            Coeff::Hbar(h) => {
                if h.terms.len() == 1 && h.terms.contains_key(&0) {
                    let inv = h.terms[&0].inv()?;
                    let mut terms = BTreeMap::new();
                    terms.insert(0, inv);
                    Ok(Coeff::Hbar(HbarCoeff { base: h.base, trunc: h.trunc, terms }))
                } else {
                    Err(Error::SingularMatrix)
                }
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Coeff {
        let mut result = self.ring().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Shift by h^k: multiply by the k-th power of hbar. Panics on scalars.
    pub fn hbar_shift(&self, k: u32) -> Coeff {
        match self {
            Coeff::Hbar(h) => {
                let mut terms = BTreeMap::new();
                for (e, c) in &h.terms {
                    let ne = e + k;
                    if let Some(t) = h.trunc {
                        if ne > t {
                            continue;
                        }
                    }
                    terms.insert(ne, c.clone());
                }
                Coeff::Hbar(HbarCoeff { base: h.base, trunc: h.trunc, terms })
            }
            _ => panic!("hbar_shift on scalar coefficient"),
        }
    }

    /// Scalar coefficient at h^k; for scalar coefficients, k = 0 returns self.
    pub fn hbar_coeff_at(&self, k: u32) -> Coeff {
        match self {
            Coeff::Hbar(h) => h.coeff_at(k),
            c if k == 0 => c.clone(),
            c => Coeff::scalar_zero(c.ring().base()),
        }
    }

    pub fn as_hbar(&self) -> Option<&HbarCoeff> {
        match self {
            Coeff::Hbar(h) => Some(h),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Residue value for modular scalars.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Coeff::Fp { v, .. } | Coeff::Zp2 { v, .. } => Some(*v),
            _ => None,
        }
    }

    /// Re-interpret in another ring of the same base kind, or embed a scalar
    /// into an hbar ring at h^0, or map Q data into F_p / Z/p^2 / their hbar
    /// extensions. Fails if a denominator is not invertible.
    pub fn convert_to(&self, ring: &Ring) -> Result<Coeff> {
        if &self.ring() == ring {
            return Ok(self.clone());
        }
        match self {
            Coeff::Rat(r) => ring.from_rational(r),
            Coeff::Fp { p, v } | Coeff::Zp2 { p, v } => match ring {
                Ring::Scalar(ScalarRing::Fp(q)) if q == p => Ok(Coeff::Fp { p: *p, v: v % p }),
                Ring::Scalar(ScalarRing::Zp2(q)) if q == p => {
                    // Zp2 -> Zp2 handled by equality above; Fp -> Zp2 uses the
                    // least non-negative representative 0..p-1.
                    Ok(Coeff::Zp2 { p: *p, v: *v })
                }
                Ring::Hbar { .. } if ring.base().prime() == Some(*p) => {
                    let s = self.convert_to(&Ring::Scalar(ring.base()))?;
                    let mut terms = BTreeMap::new();
                    if !s.is_zero() {
                        terms.insert(0, s);
                    }
                    Ok(Coeff::Hbar(HbarCoeff {
                        base: ring.base(),
                        trunc: ring.trunc(),
                        terms,
                    }))
                }
                _ => Err(Error::RingMismatch {
                    left: self.ring().to_string(),
                    right: ring.to_string(),
                }),
            },
            Coeff::Hbar(h) => match ring {
                Ring::Hbar { base, trunc } if *base == h.base => {
                    // Retruncation: only dropping is allowed implicitly.
                    let mut terms = BTreeMap::new();
                    for (k, c) in &h.terms {
                        if trunc.map_or(true, |t| *k <= t) {
                            terms.insert(*k, c.clone());
                        }
                    }
                    Ok(Coeff::Hbar(HbarCoeff { base: *base, trunc: *trunc, terms }))
                }
                _ => Err(Error::RingMismatch {
                    left: self.ring().to_string(),
                    right: ring.to_string(),
                }),
            },
        }
    }

    /// Canonical text: "a" or "a/b" for rationals, the residue for modular
    /// scalars. hbar coefficients have no single-token form.
    pub fn to_text(&self) -> String {
        match self {
            Coeff::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Coeff::Fp { v, .. } | Coeff::Zp2 { v, .. } => v.to_string(),
            Coeff::Hbar(_) => panic!("hbar coefficient has no scalar text form"),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Hbar(h) => {
                if h.terms.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (k, c) in &h.terms {
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match k {
                        0 => write!(f, "{}", c.to_text())?,
                        1 => write!(f, "{}*h", c.to_text())?,
                        _ => write!(f, "{}*h^{}", c.to_text(), k)?,
                    }
                }
                Ok(())
            }
            _ => write!(f, "{}", self.to_text()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_lowest_terms() {
        let r = Q.from_rational(&BigRational::new(BigInt::from(4), BigInt::from(-6))).unwrap();
        assert_eq!(r.to_text(), "-2/3");
    }

    #[test]
    fn fp_canonical() {
        let c = fp(5).from_i64(-3);
        assert_eq!(c.residue(), Some(2));
        let half = fp(5).from_rational(&BigRational::new(BigInt::from(1), BigInt::from(2))).unwrap();
        assert_eq!(half.residue(), Some(3)); // 2 * 3 = 6 = 1 mod 5
    }

    #[test]
    fn fp_denominator_hits_p() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert!(matches!(fp(2).from_rational(&r), Err(Error::BadPrime(_))));
    }

    #[test]
    fn hbar_truncation_drops() {
        let ring = qh_trunc(2);
        let h = ring.hbar();
        let h2 = h.mul(&h);
        let h3 = h2.mul(&h);
        assert!(!h2.is_zero());
        assert!(h3.is_zero());
    }

    #[test]
    fn hbar_exact_keeps_all() {
        let h = QH.hbar();
        let h5 = h.pow(5);
        assert_eq!(h5.hbar_coeff_at(5), Q.one());
    }

    #[test]
    fn zp2_arithmetic() {
        let ring = zp2(2);
        let two = ring.from_i64(2);
        let six = ring.from_i64(6);
        assert_eq!(six.residue(), Some(2));
        assert_eq!(two.mul(&two).residue(), Some(0));
    }

    #[test]
    fn inverse_mod_p2() {
        let ring = zp2(3);
        let two = ring.from_i64(2);
        let inv = two.inv().unwrap();
        assert_eq!(two.mul(&inv).residue(), Some(1));
        assert!(ring.from_i64(3).inv().is_err());
    }
}
