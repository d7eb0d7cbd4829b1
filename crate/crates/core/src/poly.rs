//! Sparse multivariate polynomials over an exact coefficient ring.
//!
//! No zero coefficients are stored, all coefficients of one polynomial share a
//! ring, and terms iterate in lexicographic order on exponent vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::{Coeff, Ring};
use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// Total degree of a polynomial; `NegInf` is the degree of 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

/// Height of a polynomial (minimal degree of a nonzero homogeneous
/// component); `Inf` is the height of 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Height {
    Finite(u32),
    Inf,
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{}", d),
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Inf => write!(f, "inf"),
            Height::Finite(h) => write!(f, "{}", h),
        }
    }
}

/// Variable naming scheme for the canonical text form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarNames {
    /// v1..vN
    Plain,
    /// x1..xn, p1..pn (requires an even variable count)
    Darboux,
    /// X1..Xn, Y1..Yn (Weyl generator symbols)
    Weyl,
}

impl VarNames {
    pub fn name(&self, n_vars: usize, i: usize) -> String {
        match self {
            VarNames::Plain => format!("v{}", i + 1),
            VarNames::Darboux => {
                let n = n_vars / 2;
                if i < n {
                    format!("x{}", i + 1)
                } else {
                    format!("p{}", i - n + 1)
                }
            }
            VarNames::Weyl => {
                let n = n_vars / 2;
                if i < n {
                    format!("X{}", i + 1)
                } else {
                    format!("Y{}", i - n + 1)
                }
            }
        }
    }

    /// Darboux names for even arity, plain names otherwise.
    pub fn default_for(n_vars: usize) -> VarNames {
        if n_vars >= 2 && n_vars % 2 == 0 {
            VarNames::Darboux
        } else {
            VarNames::Plain
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    n_vars: usize,
    ring: Ring,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero(ring: Ring, n_vars: usize) -> Poly {
        Poly { n_vars, ring, terms: BTreeMap::new() }
    }

    pub fn one(ring: Ring, n_vars: usize) -> Poly {
        Poly::constant(ring, n_vars, ring.one())
    }

    pub fn constant(ring: Ring, n_vars: usize, c: Coeff) -> Poly {
        let mut p = Poly::zero(ring, n_vars);
        p.insert_add(Monomial::one(n_vars), c);
        p
    }

    pub fn var(ring: Ring, n_vars: usize, i: usize) -> Result<Poly> {
        if i >= n_vars {
            return Err(Error::IndexOutOfRange { index: i, len: n_vars });
        }
        let mut p = Poly::zero(ring, n_vars);
        p.insert_add(Monomial::var(n_vars, i), ring.one());
        Ok(p)
    }

    pub fn from_terms<I>(ring: Ring, n_vars: usize, terms: I) -> Result<Poly>
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut p = Poly::zero(ring, n_vars);
        for (m, c) in terms {
            if m.n_vars() != n_vars {
                return Err(Error::ArityMismatch { expected: n_vars, found: m.n_vars() });
            }
            if c.ring() != ring {
                return Err(Error::RingMismatch {
                    left: ring.to_string(),
                    right: c.ring().to_string(),
                });
            }
            p.insert_add(m, c);
        }
        Ok(p)
    }

    fn insert_add(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one(self.n_vars))
                .map_or(false, |c| c.is_one())
    }

    /// Some(coefficient) if the polynomial is a constant (including 0).
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(self.ring.zero()),
            1 => self.terms.get(&Monomial::one(self.n_vars)).cloned(),
            _ => None,
        }
    }

    pub fn coeff_of(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    fn check_compat(&self, other: &Poly) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::ArityMismatch { expected: self.n_vars, found: other.n_vars });
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compat(other)?;
        let mut out = Poly::zero(self.ring, self.n_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_add(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Product with all monomials of total degree above `cap` dropped.
    pub fn mul_truncated(&self, other: &Poly, cap: u32) -> Result<Poly> {
        self.check_compat(other)?;
        let mut out = Poly::zero(self.ring, self.n_vars);
        for (ma, ca) in &self.terms {
            let da = ma.total_degree();
            if da > cap {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.total_degree() > cap {
                    continue;
                }
                out.insert_add(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn negate(&self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &Coeff) -> Result<Poly> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: c.ring().to_string(),
            });
        }
        let mut out = Poly::zero(self.ring, self.n_vars);
        for (m, a) in &self.terms {
            out.insert_add(m.clone(), a.mul(c));
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.ring, self.n_vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            if e > 1 {
                base = &base * &base;
            }
            e >>= 1;
        }
        result
    }

    pub fn pow_truncated(&self, e: u32, cap: u32) -> Poly {
        let mut result = Poly::one(self.ring, self.n_vars);
        let mut base = self.truncate_degree(cap);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_truncated(&base, cap).expect("compatible by construction");
            }
            if e > 1 {
                base = base.mul_truncated(&base, cap).expect("compatible by construction");
            }
            e >>= 1;
        }
        result
    }

    /// Drop all monomials of total degree above `cap`.
    pub fn truncate_degree(&self, cap: u32) -> Poly {
        Poly {
            n_vars: self.n_vars,
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Poly> {
        if i >= self.n_vars {
            return Err(Error::IndexOutOfRange { index: i, len: self.n_vars });
        }
        let mut out = Poly::zero(self.ring, self.n_vars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let factor = self.ring.from_i64(e as i64);
            out.insert_add(m.with_exp(i, e - 1), c.mul(&factor));
        }
        Ok(out)
    }

    /// The homogeneous component of total degree exactly `k`.
    pub fn homogeneous_component(&self, k: u32) -> Poly {
        Poly {
            n_vars: self.n_vars,
            ring: self.ring,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .map_or(Degree::NegInf, Degree::Finite)
    }

    pub fn height(&self) -> Height {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .min()
            .map_or(Height::Inf, Height::Finite)
    }

    /// Substitute `images[i]` for variable i. The images must share a ring
    /// and arity among themselves (the target ring may differ from the source
    /// ring only by hbar extension of the same base).
    pub fn eval(&self, images: &[Poly]) -> Result<Poly> {
        self.eval_impl(images, None)
    }

    /// Substitution with all intermediate products truncated above `cap`.
    /// Exact on every monomial of total degree <= cap provided the images
    /// have no constant part.
    pub fn eval_truncated(&self, images: &[Poly], cap: u32) -> Result<Poly> {
        self.eval_impl(images, Some(cap))
    }

    fn eval_impl(&self, images: &[Poly], cap: Option<u32>) -> Result<Poly> {
        if images.len() != self.n_vars {
            return Err(Error::ArityMismatch { expected: self.n_vars, found: images.len() });
        }
        let (tring, tn) = match images.first() {
            Some(f) => (f.ring(), f.n_vars()),
            None => (self.ring, 0),
        };
        for f in images {
            if f.ring() != tring || f.n_vars() != tn {
                return Err(Error::RingMismatch {
                    left: tring.to_string(),
                    right: f.ring().to_string(),
                });
            }
        }
        // Cache powers of each image as they are needed.
        let mut powers: Vec<BTreeMap<u32, Poly>> = vec![BTreeMap::new(); images.len()];
        let mut out = Poly::zero(tring, tn);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(tring, tn, c.convert_to(&tring)?);
            for i in 0..self.n_vars {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                if !powers[i].contains_key(&e) {
                    let p = match cap {
                        Some(cap) => images[i].pow_truncated(e, cap),
                        None => images[i].pow(e),
                    };
                    powers[i].insert(e, p);
                }
                let pw = &powers[i][&e];
                acc = match cap {
                    Some(cap) => acc.mul_truncated(pw, cap)?,
                    None => acc.checked_mul(pw)?,
                };
            }
            out = out.checked_add(&acc)?;
        }
        Ok(out)
    }

    /// Apply `f` to every coefficient, building a polynomial over `ring`.
    pub fn map_coeffs<F>(&self, ring: Ring, mut f: F) -> Result<Poly>
    where
        F: FnMut(&Coeff) -> Result<Coeff>,
    {
        let mut out = Poly::zero(ring, self.n_vars);
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Canonical text form, leading (lex-greatest) term first.
    pub fn to_text(&self, names: VarNames) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = coeff_sign_split(c);
            if idx == 0 {
                if sign {
                    out.push('-');
                }
            } else if sign {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let vars = monomial_text(m, names);
            match (vars.is_empty(), mag == "1") {
                (true, _) => out.push_str(&mag),
                (false, true) => out.push_str(&vars),
                (false, false) => {
                    out.push_str(&mag);
                    out.push('*');
                    out.push_str(&vars);
                }
            }
        }
        out
    }
}

fn monomial_text(m: &Monomial, names: VarNames) -> String {
    let mut parts = Vec::new();
    for i in 0..m.n_vars() {
        let e = m.exp(i);
        if e == 0 {
            continue;
        }
        let name = names.name(m.n_vars(), i);
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{}^{}", name, e));
        }
    }
    parts.join("*")
}

/// Split a scalar coefficient into (is_negative, magnitude text). Modular
/// residues are never negative.
fn coeff_sign_split(c: &Coeff) -> (bool, String) {
    match c.as_rational() {
        Some(r) if r.numer().sign() == num_bigint::Sign::Minus => {
            (true, c.neg().to_text())
        }
        _ => (false, c.to_text()),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(VarNames::default_for(self.n_vars)))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial ring/arity mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial ring/arity mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial ring/arity mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.negate()
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first row. Division-free, hence exact over any ring.
pub fn poly_det(rows: &[Vec<Poly>]) -> Result<Poly> {
    let n = rows.len();
    for r in rows {
        if r.len() != n {
            return Err(Error::ArityMismatch { expected: n, found: r.len() });
        }
    }
    if n == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    Ok(poly_det_rec(rows, &(0..n).collect::<Vec<_>>(), 0))
}

fn poly_det_rec(rows: &[Vec<Poly>], cols: &[usize], row: usize) -> Poly {
    let first = &rows[row][cols[0]];
    if cols.len() == 1 {
        return first.clone();
    }
    let ring = first.ring();
    let n_vars = first.n_vars();
    let mut acc = Poly::zero(ring, n_vars);
    for (k, &j) in cols.iter().enumerate() {
        let entry = &rows[row][j];
        if entry.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> =
            cols.iter().copied().filter(|&c| c != j).collect();
        let minor = poly_det_rec(rows, &sub_cols, row + 1);
        let term = entry * &minor;
        if k % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
    }
    acc
}

/// Determinant of the Jacobian matrix of a polynomial map given by `images`.
pub fn jacobian_det(images: &[Poly]) -> Result<Poly> {
    let n = images.len();
    if n == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    for f in images {
        if f.n_vars() != n {
            return Err(Error::ArityMismatch { expected: n, found: f.n_vars() });
        }
    }
    let mut rows = Vec::with_capacity(n);
    for f in images {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(f.partial_derivative(j)?);
        }
        rows.push(row);
    }
    poly_det(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{fp, Q};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(Q, n, i).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let xv = x(1, 0);
        let one = Poly::one(Q, 1);
        let lhs = &(&xv + &one) * &(&xv - &one);
        let rhs = &xv.pow(2) - &one;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_identity() {
        let f = &x(2, 0).pow(3) + &x(2, 1);
        assert_eq!(f.checked_add(&Poly::zero(Q, 2)).unwrap(), f);
    }

    #[test]
    fn frobenius_in_char_two() {
        let ring = fp(2);
        let f = Poly::var(ring, 2, 0)
            .unwrap()
            .checked_add(&Poly::var(ring, 2, 1).unwrap())
            .unwrap();
        let sq = f.pow(2);
        let expected = Poly::var(ring, 2, 0)
            .unwrap()
            .pow(2)
            .checked_add(&Poly::var(ring, 2, 1).unwrap().pow(2))
            .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn power_rule() {
        // d(x^2 p)/dx = 2 x p
        let f = &x(2, 0).pow(2) * &x(2, 1);
        let df = f.partial_derivative(0).unwrap();
        let expected = (&x(2, 0) * &x(2, 1))
            .scalar_mul(&Q.from_i64(2))
            .unwrap();
        assert_eq!(df, expected);
        assert!(Poly::one(Q, 2).partial_derivative(0).unwrap().is_zero());
        assert!(x(2, 0).pow(3).partial_derivative(1).unwrap().is_zero());
    }

    #[test]
    fn homogeneous_components() {
        let f = &(&x(1, 0).pow(2) + &x(1, 0)) + &Poly::one(Q, 1);
        assert_eq!(f.homogeneous_component(1), x(1, 0));
        assert!(f.homogeneous_component(3).is_zero());
        let g = &(&x(2, 0) * &x(2, 1)) + &x(2, 1).pow(2);
        assert_eq!(g.homogeneous_component(2), g);
    }

    #[test]
    fn degree_and_height() {
        let f = &x(1, 0).pow(3) + &x(1, 0).pow(5);
        assert_eq!(f.height(), Height::Finite(3));
        assert_eq!(f.degree(), Degree::Finite(5));
        let zero = Poly::zero(Q, 1);
        assert_eq!(zero.height(), Height::Inf);
        assert_eq!(zero.degree(), Degree::NegInf);
        let c = Poly::constant(Q, 1, Q.from_i64(7));
        assert_eq!(c.height(), Height::Finite(0));
        assert_eq!(c.degree(), Degree::Finite(0));
        assert!(Height::Finite(3) < Height::Inf);
        assert!(Degree::NegInf < Degree::Finite(0));
    }

    #[test]
    fn jacobian_of_triangular_map() {
        // (x, p + x^2) has unit Jacobian.
        let images = vec![x(2, 0), &x(2, 1) + &x(2, 0).pow(2)];
        assert!(jacobian_det(&images).unwrap().is_one());
        let ident = vec![x(2, 0), x(2, 1)];
        assert!(jacobian_det(&ident).unwrap().is_one());
    }

    #[test]
    fn text_form() {
        // 3/2 x1^2 p1 - x2 over 4 variables
        let ring = Q;
        let m1 = Monomial::new(vec![2, 0, 1, 0]);
        let m2 = Monomial::new(vec![0, 1, 0, 0]);
        let f = Poly::from_terms(
            ring,
            4,
            vec![
                (m1, Q.from_rational(&num_rational::BigRational::new(3.into(), 2.into())).unwrap()),
                (m2, Q.from_i64(-1)),
            ],
        )
        .unwrap();
        assert_eq!(f.to_text(VarNames::Darboux), "3/2*x1^2*p1 - x2");
    }

    #[test]
    fn truncated_mul_is_exact_below_cap() {
        let f = &x(2, 0).pow(3) + &x(2, 1);
        let g = &x(2, 0) + &x(2, 1).pow(2);
        let exact = &f * &g;
        let trunc = f.mul_truncated(&g, 3).unwrap();
        assert_eq!(trunc, exact.truncate_degree(3));
    }
}
