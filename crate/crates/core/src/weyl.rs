//! Normal-ordered arithmetic in the n-th Weyl algebra over Q[h], F_p, and
//! Z/p^2, with the characteristic-p center machinery.
//!
//! Elements are stored with all x-generators left of all y-generators. The
//! defining relation is [y_i, x_j] = rel * delta_{ij}, where the relation
//! parameter is either the formal hbar (deformed family) or a ring constant
//! (1 for the classical algebra). Products rewrite through the identity
//!
//!   y^b x^g = sum_k k! C(b,k) C(g,k) rel^k x^{g-k} y^{b-k}
//!
//! applied independently per conjugate pair.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::coeff::{fp, zp2, Coeff, Ring};
use crate::error::{Error, Result};
use crate::poly::{Poly, VarNames};
use crate::symplectic::{ElementaryAuto, Endo, TameWord};
use crate::monomial::Monomial;

/// Ambient data of a Weyl algebra: n conjugate pairs, coefficient ring, and
/// the central relation constant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylRing {
    pub n: usize,
    pub coeff: Ring,
    pub rel: Coeff,
}

impl WeylRing {
    /// W_n(hbar) over Q[h] with [y_i, x_j] = h delta_{ij}.
    pub fn q_hbar(n: usize) -> WeylRing {
        WeylRing { n, coeff: crate::coeff::QH, rel: crate::coeff::QH.hbar() }
    }

    /// Truncated W_n(hbar) over Q[h]/(h^{K+1}).
    pub fn q_hbar_trunc(n: usize, k: u32) -> WeylRing {
        let ring = crate::coeff::qh_trunc(k);
        WeylRing { n, coeff: ring, rel: ring.hbar() }
    }

    /// Classical W_n over F_p with [y_i, x_j] = delta_{ij}.
    pub fn fp(n: usize, p: u64) -> WeylRing {
        WeylRing { n, coeff: fp(p), rel: fp(p).one() }
    }

    /// W_n over Z/p^2 with [y_i, x_j] = delta_{ij}, used for center lifts.
    pub fn zp2(n: usize, p: u64) -> WeylRing {
        WeylRing { n, coeff: zp2(p), rel: zp2(p).one() }
    }
}

/// A normal-ordered element sum c_{ab} x^a y^b.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElt {
    ring: WeylRing,
    terms: BTreeMap<(Monomial, Monomial), Coeff>,
}

impl WeylElt {
    pub fn zero(ring: WeylRing) -> WeylElt {
        WeylElt { ring, terms: BTreeMap::new() }
    }

    pub fn one(ring: WeylRing) -> WeylElt {
        let one = ring.coeff.one();
        let mut e = WeylElt::zero(ring);
        e.insert_add(
            (Monomial::one(e.ring.n), Monomial::one(e.ring.n)),
            one,
        );
        e
    }

    pub fn scalar(ring: WeylRing, c: Coeff) -> WeylElt {
        let mut e = WeylElt::zero(ring);
        e.insert_add(
            (Monomial::one(e.ring.n), Monomial::one(e.ring.n)),
            c,
        );
        e
    }

    /// The generator x_i.
    pub fn x_gen(ring: WeylRing, i: usize) -> Result<WeylElt> {
        let n = ring.n;
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let one = ring.coeff.one();
        let mut e = WeylElt::zero(ring);
        e.insert_add((Monomial::var(n, i), Monomial::one(n)), one);
        Ok(e)
    }

    /// The generator y_i.
    pub fn y_gen(ring: WeylRing, i: usize) -> Result<WeylElt> {
        let n = ring.n;
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let one = ring.coeff.one();
        let mut e = WeylElt::zero(ring);
        e.insert_add((Monomial::one(n), Monomial::var(n, i)), one);
        Ok(e)
    }

    pub fn monomial(ring: WeylRing, x_exp: Monomial, y_exp: Monomial, c: Coeff) -> Result<WeylElt> {
        if x_exp.n_vars() != ring.n || y_exp.n_vars() != ring.n {
            return Err(Error::ArityMismatch { expected: ring.n, found: x_exp.n_vars() });
        }
        if c.ring() != ring.coeff {
            return Err(Error::RingMismatch {
                left: ring.coeff.to_string(),
                right: c.ring().to_string(),
            });
        }
        let mut e = WeylElt::zero(ring);
        e.insert_add((x_exp, y_exp), c);
        Ok(e)
    }

    fn insert_add(&mut self, key: (Monomial, Monomial), c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn ring(&self) -> &WeylRing {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.ring.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Coeff)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff_of(&self, x_exp: &Monomial, y_exp: &Monomial) -> Coeff {
        self.terms
            .get(&(x_exp.clone(), y_exp.clone()))
            .cloned()
            .unwrap_or_else(|| self.ring.coeff.zero())
    }

    /// Total degree in the generators (hbar not counted).
    pub fn generator_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|(a, b)| a.total_degree() + b.total_degree())
            .max()
    }

    fn check_compat(&self, other: &WeylElt) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: format!("{:?}", self.ring),
                right: format!("{:?}", other.ring),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &WeylElt) -> Result<WeylElt> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &WeylElt) -> Result<WeylElt> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_add(k.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn negate(&self) -> WeylElt {
        WeylElt {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn scalar_mul(&self, c: &Coeff) -> Result<WeylElt> {
        if c.ring() != self.ring.coeff {
            return Err(Error::RingMismatch {
                left: self.ring.coeff.to_string(),
                right: c.ring().to_string(),
            });
        }
        let mut out = WeylElt::zero(self.ring.clone());
        for (k, a) in &self.terms {
            out.insert_add(k.clone(), a.mul(c));
        }
        Ok(out)
    }

    /// Normal-ordered product.
    pub fn checked_mul(&self, other: &WeylElt) -> Result<WeylElt> {
        self.check_compat(other)?;
        let n = self.ring.n;
        let mut out = WeylElt::zero(self.ring.clone());
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                // x^{a1} y^{b1} x^{a2} y^{b2}: rewrite y^{b1} x^{a2}.
                let base = c1.mul(c2);
                distribute_rewrite(&mut out, n, a1, b1, a2, b2, &base, &self.ring);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &WeylElt) -> Result<WeylElt> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    pub fn pow(&self, e: u32) -> Result<WeylElt> {
        let mut result = WeylElt::one(self.ring.clone());
        for _ in 0..e {
            result = result.checked_mul(self)?;
        }
        Ok(result)
    }

    /// True iff the element commutes with all 2n generators.
    pub fn is_central(&self) -> Result<bool> {
        for i in 0..self.ring.n {
            let x = WeylElt::x_gen(self.ring.clone(), i)?;
            let y = WeylElt::y_gen(self.ring.clone(), i)?;
            if !self.commutator(&x)?.is_zero() || !self.commutator(&y)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Map each coefficient, changing the coefficient ring.
    pub fn map_coeffs<F>(&self, ring: WeylRing, mut f: F) -> Result<WeylElt>
    where
        F: FnMut(&Coeff) -> Result<Coeff>,
    {
        let mut out = WeylElt::zero(ring);
        for (k, c) in &self.terms {
            out.insert_add(k.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Drop hbar exponents above `k`, re-tagging into the truncated ring.
    pub fn truncate_hbar(&self, k: u32) -> Result<WeylElt> {
        let base = self.ring.coeff.base();
        let target = Ring::Hbar { base, trunc: Some(k) };
        let ring = WeylRing {
            n: self.ring.n,
            coeff: target,
            rel: self.ring.rel.convert_to(&target)?,
        };
        self.map_coeffs(ring, |c| c.convert_to(&target))
    }

    /// Canonical text with X/Y generator names; hbar prints as h.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for ((a, b), c) in self.terms.iter().rev() {
            let mut vars = Vec::new();
            for i in 0..self.ring.n {
                let e = a.exp(i);
                if e == 1 {
                    vars.push(format!("X{}", i + 1));
                } else if e > 1 {
                    vars.push(format!("X{}^{}", i + 1, e));
                }
            }
            for i in 0..self.ring.n {
                let e = b.exp(i);
                if e == 1 {
                    vars.push(format!("Y{}", i + 1));
                } else if e > 1 {
                    vars.push(format!("Y{}^{}", i + 1, e));
                }
            }
            let vtxt = vars.join("*");
            let ctxt = format!("({})", c);
            if vtxt.is_empty() {
                parts.push(ctxt);
            } else {
                parts.push(format!("{}*{}", ctxt, vtxt));
            }
        }
        parts.join(" + ")
    }
}

impl fmt::Display for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Accumulate the normal-ordered expansion of
/// coeff * x^{a1} (y^{b1} x^{a2}) y^{b2} into `out`.
fn distribute_rewrite(
    out: &mut WeylElt,
    n: usize,
    a1: &Monomial,
    b1: &Monomial,
    a2: &Monomial,
    b2: &Monomial,
    coeff: &Coeff,
    ring: &WeylRing,
) {
    // Enumerate contraction vectors k with k_i <= min(b1_i, a2_i).
    let maxes: Vec<u32> = (0..n).map(|i| b1.exp(i).min(a2.exp(i))).collect();
    let mut k = vec![0u32; n];
    loop {
        // scalar factor prod_i k_i! C(b1_i, k_i) C(a2_i, k_i)
        let mut factor = BigInt::one();
        let mut ktot = 0u32;
        for i in 0..n {
            factor *= contraction_count(b1.exp(i), a2.exp(i), k[i]);
            ktot += k[i];
        }
        let mut c = coeff.mul(&ring.coeff.from_bigint(&factor));
        if ktot > 0 {
            c = c.mul(&ring.rel.pow(ktot));
        }
        if !c.is_zero() {
            let xm = Monomial::new(
                (0..n).map(|i| a1.exp(i) + a2.exp(i) - k[i]).collect(),
            );
            let ym = Monomial::new(
                (0..n).map(|i| b1.exp(i) + b2.exp(i) - k[i]).collect(),
            );
            out.insert_add((xm, ym), c);
        }
        // advance the contraction vector
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if k[i] < maxes[i] {
                k[i] += 1;
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

/// k! C(b,k) C(g,k) as a big integer.
fn contraction_count(b: u32, g: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..k {
        // (b-t)(g-t)/(t+1) stays integral term by term via falling factorials:
        // k! C(b,k) C(g,k) = prod_t (b-t)(g-t)/(t+1)
        acc = acc * BigInt::from(b - t) * BigInt::from(g - t) / BigInt::from(t + 1);
    }
    acc
}

/// A Weyl-algebra endomorphism given by images of x_1..x_n, y_1..y_n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylAuto {
    ring: WeylRing,
    images: Vec<WeylElt>,
}

impl WeylAuto {
    pub fn new(ring: WeylRing, images: Vec<WeylElt>) -> Result<WeylAuto> {
        if images.len() != 2 * ring.n {
            return Err(Error::ArityMismatch { expected: 2 * ring.n, found: images.len() });
        }
        for img in &images {
            if img.ring != ring {
                return Err(Error::RingMismatch {
                    left: format!("{:?}", ring),
                    right: format!("{:?}", img.ring),
                });
            }
        }
        Ok(WeylAuto { ring, images })
    }

    pub fn identity(ring: WeylRing) -> WeylAuto {
        let n = ring.n;
        let mut images = Vec::with_capacity(2 * n);
        for i in 0..n {
            images.push(WeylElt::x_gen(ring.clone(), i).expect("index in range"));
        }
        for i in 0..n {
            images.push(WeylElt::y_gen(ring.clone(), i).expect("index in range"));
        }
        WeylAuto { ring, images }
    }

    pub fn ring(&self) -> &WeylRing {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.ring.n
    }

    pub fn images(&self) -> &[WeylElt] {
        &self.images
    }

    pub fn image(&self, l: usize) -> &WeylElt {
        &self.images[l]
    }

    /// Evaluate a normal-form element on the images: x^a y^b goes to the
    /// ordered product of image powers (x-block then y-block). Well defined
    /// on relation-satisfying image sets because same-block images commute.
    pub fn apply(&self, u: &WeylElt) -> Result<WeylElt> {
        if u.ring != self.ring {
            return Err(Error::RingMismatch {
                left: format!("{:?}", self.ring),
                right: format!("{:?}", u.ring),
            });
        }
        let n = self.ring.n;
        let mut power_cache: BTreeMap<(usize, u32), WeylElt> = BTreeMap::new();
        let mut out = WeylElt::zero(self.ring.clone());
        for ((a, b), c) in &u.terms {
            let mut acc = WeylElt::scalar(self.ring.clone(), c.clone());
            for i in 0..n {
                let e = a.exp(i);
                if e > 0 {
                    let pw = cached_pow(&mut power_cache, &self.images, i, e)?;
                    acc = acc.checked_mul(&pw)?;
                }
            }
            for i in 0..n {
                let e = b.exp(i);
                if e > 0 {
                    let pw = cached_pow(&mut power_cache, &self.images, n + i, e)?;
                    acc = acc.checked_mul(&pw)?;
                }
            }
            out = out.checked_add(&acc)?;
        }
        Ok(out)
    }

    /// Composition by substitution of `other`'s images into `self`'s images.
    pub fn compose(&self, other: &WeylAuto) -> Result<WeylAuto> {
        let images = self
            .images
            .iter()
            .map(|img| other.apply(img))
            .collect::<Result<Vec<_>>>()?;
        WeylAuto::new(self.ring.clone(), images)
    }

    /// True iff the images satisfy all pairwise Weyl commutation relations:
    /// [Y_i, X_j] = rel delta_{ij}, [X_i, X_j] = [Y_i, Y_j] = 0.
    pub fn check(&self) -> Result<bool> {
        let n = self.ring.n;
        for i in 0..n {
            for j in 0..n {
                let yx = self.images[n + i].commutator(&self.images[j])?;
                let expected = if i == j {
                    WeylElt::scalar(self.ring.clone(), self.ring.rel.clone())
                } else {
                    WeylElt::zero(self.ring.clone())
                };
                if yx != expected {
                    return Ok(false);
                }
                if i < j {
                    if !self.images[i].commutator(&self.images[j])?.is_zero() {
                        return Ok(false);
                    }
                    if !self.images[n + i].commutator(&self.images[n + j])?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Specialize hbar to 1 and reduce coefficients mod p, landing in the
    /// classical W_n over F_p. Fails on denominators divisible by p.
    pub fn reduce_mod_p(&self, p: u64) -> Result<WeylAuto> {
        let target = WeylRing::fp(self.ring.n, p);
        let tring = target.coeff;
        let images = self
            .images
            .iter()
            .map(|img| img.map_coeffs(target.clone(), |c| flatten_hbar_mod_p(c, &tring)))
            .collect::<Result<Vec<_>>>()?;
        WeylAuto::new(target, images)
    }
}

fn cached_pow(
    cache: &mut BTreeMap<(usize, u32), WeylElt>,
    images: &[WeylElt],
    idx: usize,
    e: u32,
) -> Result<WeylElt> {
    if let Some(p) = cache.get(&(idx, e)) {
        return Ok(p.clone());
    }
    let p = images[idx].pow(e)?;
    cache.insert((idx, e), p.clone());
    Ok(p)
}

/// Sum the hbar expansion at h = 1 and reduce the resulting rational mod p.
fn flatten_hbar_mod_p(c: &Coeff, target: &Ring) -> Result<Coeff> {
    match c.as_hbar() {
        None => c
            .as_rational()
            .ok_or_else(|| Error::Json("expected rational coefficient".into()))
            .and_then(|r| target.from_rational(r)),
        Some(h) => {
            let mut acc = target.zero();
            for (_, part) in h.terms() {
                let r = part.as_rational().ok_or_else(|| {
                    Error::Json("expected rational hbar coefficients".into())
                })?;
                acc = acc.add(&target.from_rational(r)?);
            }
            Ok(acc)
        }
    }
}

/// Coefficientwise reduction of a tame word from Q to F_p. Fails if a
/// denominator is divisible by p or a linear factor becomes singular mod p.
pub fn reduce_word_mod_p(w: &TameWord, p: u64) -> Result<TameWord> {
    let target = fp(p);
    let mut out = TameWord::empty(target, w.n_vars());
    for e in w.factors() {
        let reduced = match e {
            ElementaryAuto::Linear(m) => {
                let mut rows = Vec::with_capacity(m.rows());
                for i in 0..m.rows() {
                    let mut row = Vec::with_capacity(m.cols());
                    for j in 0..m.cols() {
                        row.push(reduce_coeff_mod_p(m.get(i, j), &target)?);
                    }
                    rows.push(row);
                }
                let rm = crate::matrix::Mat::from_rows(target, rows)?;
                ElementaryAuto::linear(rm).map_err(|e| match e {
                    Error::SingularMatrix => {
                        Error::BadPrime(format!("linear factor singular mod {}", p))
                    }
                    other => other,
                })?
            }
            ElementaryAuto::Transvection { target: t, poly } => {
                let rp = poly.map_coeffs(target, |c| reduce_coeff_mod_p(c, &target))?;
                ElementaryAuto::Transvection { target: *t, poly: rp }
            }
        };
        out.push(reduced)?;
    }
    Ok(out)
}

fn reduce_coeff_mod_p(c: &Coeff, target: &Ring) -> Result<Coeff> {
    let r = c
        .as_rational()
        .ok_or_else(|| Error::Json("expected rational coefficient".into()))?;
    target.from_rational(r)
}

/// Lift a tame word over F_p to a Weyl automorphism of the classical W_n
/// over F_p (relation constant 1). Linear factors keep their matrices,
/// transvections substitute Weyl generators for the commuting variables.
pub fn lift_word_fp(w: &TameWord, p: u64) -> Result<WeylAuto> {
    let n = w.n_vars() / 2;
    if w.n_vars() % 2 != 0 {
        return Err(Error::ArityMismatch { expected: 2 * n, found: w.n_vars() });
    }
    let ring = WeylRing::fp(n, p);
    let mut acc = WeylAuto::identity(ring.clone());
    for e in w.factors() {
        let lifted = lift_elementary_raw(e, &ring)?;
        acc = acc.compose(&lifted)?;
    }
    Ok(acc)
}

/// Substitute Weyl generators into an elementary factor's images, without a
/// symplecticity gate; used by both the char-p and the hbar lifts.
pub(crate) fn lift_elementary_raw(e: &ElementaryAuto, ring: &WeylRing) -> Result<WeylAuto> {
    let n = ring.n;
    match e {
        ElementaryAuto::Linear(m) => {
            let mut images = Vec::with_capacity(2 * n);
            for i in 0..2 * n {
                let mut acc = WeylElt::zero(ring.clone());
                for j in 0..2 * n {
                    let c = m.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    let gen = if j < n {
                        WeylElt::x_gen(ring.clone(), j)?
                    } else {
                        WeylElt::y_gen(ring.clone(), j - n)?
                    };
                    acc = acc.checked_add(&gen.scalar_mul(&c.convert_to(&ring.coeff)?)?)?;
                }
                images.push(acc);
            }
            WeylAuto::new(ring.clone(), images)
        }
        ElementaryAuto::Transvection { target, poly } => {
            let added = weyl_from_commutative(poly, ring)?;
            let mut auto = WeylAuto::identity(ring.clone());
            auto.images[*target] = auto.images[*target].checked_add(&added)?;
            Ok(auto)
        }
    }
}

/// Read a commutative polynomial in the 2n Darboux variables as a
/// normal-ordered Weyl element (x-block to x-generators, p-block to
/// y-generators).
pub fn weyl_from_commutative(f: &Poly, ring: &WeylRing) -> Result<WeylElt> {
    let n = ring.n;
    if f.n_vars() != 2 * n {
        return Err(Error::ArityMismatch { expected: 2 * n, found: f.n_vars() });
    }
    let mut out = WeylElt::zero(ring.clone());
    for (m, c) in f.terms() {
        let x_exp = Monomial::new((0..n).map(|i| m.exp(i)).collect());
        let y_exp = Monomial::new((0..n).map(|i| m.exp(n + i)).collect());
        let cc = c.convert_to(&ring.coeff)?;
        out = out.checked_add(&WeylElt::monomial(ring.clone(), x_exp, y_exp, cc)?)?;
    }
    Ok(out)
}

/// The commutative polynomial with the same exponent data (normal symbols);
/// only valid for scalar coefficient rings.
pub fn commutative_symbol(u: &WeylElt) -> Result<Poly> {
    let n = u.ring().n;
    let ring = u.ring().coeff;
    if ring.has_hbar() {
        return Err(Error::Json("symbol of an hbar element is an HbarPoly".into()));
    }
    let mut terms = Vec::new();
    for ((a, b), c) in u.terms() {
        let mut exps = Vec::with_capacity(2 * n);
        exps.extend(a.exps().iter().copied());
        exps.extend(b.exps().iter().copied());
        terms.push((Monomial::new(exps), c.clone()));
    }
    Poly::from_terms(ring, 2 * n, terms)
}

/// Restrict a relation-1 automorphism over F_p to the center
/// F_p[x_1^p, ..., y_n^p]: the map X_i -> images[i]^p, Y_i -> images[n+i]^p
/// read in the 2n central variables.
pub fn restrict_to_center(auto: &WeylAuto, p: u64) -> Result<Endo> {
    let ring = auto.ring();
    if ring.coeff != fp(p) {
        return Err(Error::RingMismatch {
            left: fp(p).to_string(),
            right: ring.coeff.to_string(),
        });
    }
    if !ring.rel.is_one() {
        return Err(Error::NotCentral("relation parameter must be 1".into()));
    }
    let n = ring.n;
    let mut images = Vec::with_capacity(2 * n);
    for l in 0..2 * n {
        let powered = auto.image(l).pow(p as u32)?;
        if !powered.is_central()? {
            return Err(Error::NotCentral(format!(
                "p-th power of image {} is not central",
                l
            )));
        }
        let mut terms = Vec::new();
        for ((a, b), c) in powered.terms() {
            let (Some(ar), Some(br)) = (a.div_exps(p as u32), b.div_exps(p as u32)) else {
                return Err(Error::NotCentral(format!(
                    "image {} has exponents not divisible by {}",
                    l, p
                )));
            };
            let mut exps = Vec::with_capacity(2 * n);
            exps.extend(ar.exps().iter().copied());
            exps.extend(br.exps().iter().copied());
            terms.push((Monomial::new(exps), c.clone()));
        }
        images.push(Poly::from_terms(fp(p), 2 * n, terms)?);
    }
    Endo::new(images)
}

/// The Poisson bracket induced on the characteristic-p center: lift the
/// central-coordinate polynomials to W_n over Z/p^2, take the commutator,
/// divide by p, and reduce. The sign is normalized so central generator
/// pairs reproduce the classical table, {Y_i, X_j} = delta_{ij}; the raw
/// lifted commutator gives [y^p, x^p] = p (p-1)! = -p mod p^2 by Wilson's
/// theorem, so the normalization multiplies by (p-1)!^{-1} = -1.
pub fn induced_poisson_bracket(a: &Poly, b: &Poly, p: u64) -> Result<Poly> {
    let fpring = fp(p);
    for f in [a, b] {
        if f.ring() != fpring {
            return Err(Error::RingMismatch {
                left: fpring.to_string(),
                right: f.ring().to_string(),
            });
        }
    }
    if a.n_vars() != b.n_vars() || a.n_vars() % 2 != 0 {
        return Err(Error::ArityMismatch { expected: a.n_vars(), found: b.n_vars() });
    }
    let n = a.n_vars() / 2;
    let ring = WeylRing::zp2(n, p);
    let la = lift_central(a, &ring, p)?;
    let lb = lift_central(b, &ring, p)?;
    for (name, l) in [("a", &la), ("b", &lb)] {
        let red = l.map_coeffs(WeylRing::fp(n, p), |c| {
            Ok(fpring.from_i64(c.residue().unwrap() as i64))
        })?;
        if !red.is_central()? {
            return Err(Error::NotCentral(format!("lift of {} is not central mod {}", name, p)));
        }
    }
    let comm = la.commutator(&lb)?;
    let mut terms = Vec::new();
    for ((xe, ye), c) in comm.terms() {
        let v = c.residue().expect("Z/p^2 coefficient");
        if v % p != 0 {
            return Err(Error::NonDivisible(format!(
                "coefficient {} of commutator term not divisible by {}",
                v, p
            )));
        }
        let w = (v / p) % p;
        if w == 0 {
            continue;
        }
        let (Some(ar), Some(br)) = (xe.div_exps(p as u32), ye.div_exps(p as u32)) else {
            return Err(Error::NotCentral(
                "commutator term leaves the center".into(),
            ));
        };
        let mut exps = Vec::with_capacity(2 * n);
        exps.extend(ar.exps().iter().copied());
        exps.extend(br.exps().iter().copied());
        terms.push((Monomial::new(exps), fpring.from_i64(w as i64)));
    }
    let raw = Poly::from_terms(fpring, 2 * n, terms)?;
    raw.scalar_mul(&fpring.from_i64(-1))
}

/// Lift a polynomial in the central coordinates X_i = x_i^p, Y_i = y_i^p to
/// a Weyl element over Z/p^2 using least non-negative representatives.
fn lift_central(f: &Poly, ring: &WeylRing, p: u64) -> Result<WeylElt> {
    let n = ring.n;
    let mut out = WeylElt::zero(ring.clone());
    for (m, c) in f.terms() {
        let x_exp = Monomial::new((0..n).map(|i| m.exp(i) * p as u32).collect());
        let y_exp = Monomial::new((0..n).map(|i| m.exp(n + i) * p as u32).collect());
        let lifted = ring.coeff.from_i64(c.residue().unwrap() as i64);
        out = out.checked_add(&WeylElt::monomial(ring.clone(), x_exp, y_exp, lifted)?)?;
    }
    Ok(out)
}

/// The Frobenius twist of a classical map read in the central variables:
/// coefficients reduced into F_p (the p-th power is the identity on
/// prime-field residues), exponent data unchanged.
pub fn frobenius_twist(sigma: &Endo, p: u64) -> Result<Endo> {
    let target = fp(p);
    let images = sigma
        .images()
        .iter()
        .map(|f| f.map_coeffs(target, |c| reduce_coeff_mod_p(c, &target)))
        .collect::<Result<Vec<_>>>()?;
    Endo::new(images)
}

/// Render an F_p endomorphism in the central variable names X_i, Y_i.
pub fn center_map_text(e: &Endo) -> Vec<String> {
    e.images().iter().map(|f| f.to_text(VarNames::Weyl)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Q, QH};
    use crate::symplectic::PoissonStructure;

    fn wq(n: usize) -> WeylRing {
        WeylRing::q_hbar(n)
    }

    #[test]
    fn basic_relation() {
        let r = wq(1);
        let x = WeylElt::x_gen(r.clone(), 0).unwrap();
        let y = WeylElt::y_gen(r.clone(), 0).unwrap();
        // y x = x y + h
        let yx = y.checked_mul(&x).unwrap();
        let xy = x.checked_mul(&y).unwrap();
        let diff = yx.checked_sub(&xy).unwrap();
        assert_eq!(diff, WeylElt::scalar(r.clone(), QH.hbar()));
        // x y is already normal ordered
        assert_eq!(
            xy,
            WeylElt::monomial(r, Monomial::var(1, 0), Monomial::var(1, 0), QH.one()).unwrap()
        );
    }

    #[test]
    fn squared_rewrite() {
        // y^2 x^2 = x^2 y^2 + 4 h x y + 2 h^2
        let r = wq(1);
        let x = WeylElt::x_gen(r.clone(), 0).unwrap();
        let y = WeylElt::y_gen(r.clone(), 0).unwrap();
        let lhs = y.pow(2).unwrap().checked_mul(&x.pow(2).unwrap()).unwrap();
        let h = QH.hbar();
        let four_h = h.mul(&QH.from_i64(4));
        let two_h2 = h.mul(&h).mul(&QH.from_i64(2));
        let expected = x
            .pow(2)
            .unwrap()
            .checked_mul(&y.pow(2).unwrap())
            .unwrap()
            .checked_add(
                &x.checked_mul(&y)
                    .unwrap()
                    .scalar_mul(&four_h)
                    .unwrap(),
            )
            .unwrap()
            .checked_add(&WeylElt::scalar(r, two_h2))
            .unwrap();
        assert_eq!(lhs, expected);
    }

    #[test]
    fn centrality_in_char_p() {
        let r2 = WeylRing::fp(1, 2);
        let x = WeylElt::x_gen(r2.clone(), 0).unwrap();
        assert!(x.pow(2).unwrap().is_central().unwrap());
        assert!(WeylElt::one(r2).is_central().unwrap());
        // over Q, x^2 is not central
        let xq = WeylElt::x_gen(wq(1), 0).unwrap();
        assert!(!xq.pow(2).unwrap().is_central().unwrap());
    }

    #[test]
    fn induced_bracket_generators() {
        // {Y, X} = 1 for p in {2, 3, 5}
        for p in [2u64, 3, 5] {
            let fpring = fp(p);
            let yc = Poly::var(fpring, 2, 1).unwrap();
            let xc = Poly::var(fpring, 2, 0).unwrap();
            let br = induced_poisson_bracket(&yc, &xc, p).unwrap();
            assert_eq!(br, Poly::one(fpring, 2), "p = {}", p);
            // antisymmetry on equal arguments
            assert!(induced_poisson_bracket(&xc, &xc, p).unwrap().is_zero());
        }
    }

    #[test]
    fn restrict_shear_char_two() {
        // Psi = (x + y^2, y) over F_2 restricts to (X + Y^2, Y).
        let p = 2u64;
        let ring = WeylRing::fp(1, p);
        let x = WeylElt::x_gen(ring.clone(), 0).unwrap();
        let y = WeylElt::y_gen(ring.clone(), 0).unwrap();
        let auto =
            WeylAuto::new(ring, vec![x.checked_add(&y.pow(2).unwrap()).unwrap(), y]).unwrap();
        assert!(auto.check().unwrap());
        let center = restrict_to_center(&auto, p).unwrap();
        let fp2 = fp(p);
        let cx = Poly::var(fp2, 2, 0).unwrap();
        let cy = Poly::var(fp2, 2, 1).unwrap();
        assert_eq!(center.image(0), &cx.checked_add(&cy.pow(2)).unwrap());
        assert_eq!(center.image(1), &cy);
    }

    #[test]
    fn restrict_linear_char_three() {
        // A = [[1,1],[0,1]] over F_3 restricts to (X + Y, Y).
        let p = 3u64;
        let fp3 = fp(p);
        let m = crate::matrix::Mat::from_rows(
            fp3,
            vec![
                vec![fp3.from_i64(1), fp3.from_i64(1)],
                vec![fp3.from_i64(0), fp3.from_i64(1)],
            ],
        )
        .unwrap();
        let e = ElementaryAuto::linear(m).unwrap();
        let w = TameWord::new(fp3, 2, vec![e]).unwrap();
        let auto = lift_word_fp(&w, p).unwrap();
        assert!(auto.check().unwrap());
        let center = restrict_to_center(&auto, p).unwrap();
        let cx = Poly::var(fp3, 2, 0).unwrap();
        let cy = Poly::var(fp3, 2, 1).unwrap();
        assert_eq!(center.image(0), &cx.checked_add(&cy).unwrap());
        assert_eq!(center.image(1), &cy);
    }

    #[test]
    fn auto_check_detects_scaling() {
        let r = wq(1);
        let x = WeylElt::x_gen(r.clone(), 0).unwrap();
        let y = WeylElt::y_gen(r.clone(), 0).unwrap();
        let good = WeylAuto::new(
            r.clone(),
            vec![x.checked_add(&y.pow(2).unwrap()).unwrap(), y.clone()],
        )
        .unwrap();
        assert!(good.check().unwrap());
        let bad =
            WeylAuto::new(r, vec![x.scalar_mul(&QH.from_i64(2)).unwrap(), y]).unwrap();
        assert!(!bad.check().unwrap());
    }

    #[test]
    fn word_reduction_mod_p() {
        let ps = PoissonStructure::new(1);
        let half = Q
            .from_rational(&num_rational::BigRational::new(1.into(), 2.into()))
            .unwrap();
        let poly = Poly::var(Q, 2, 1)
            .unwrap()
            .pow(2)
            .scalar_mul(&half)
            .unwrap();
        let e = ElementaryAuto::symplectic_transvection(&ps, 0, poly).unwrap();
        let w = TameWord::new(Q, 2, vec![e]).unwrap();
        assert!(matches!(reduce_word_mod_p(&w, 2), Err(Error::BadPrime(_))));
        let w5 = reduce_word_mod_p(&w, 5).unwrap();
        assert_eq!(w5.ring(), fp(5));
    }
}
