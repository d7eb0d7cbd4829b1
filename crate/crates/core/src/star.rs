//! Terminating star products on polynomials in 2n Darboux variables and the
//! gauge transform between the normal and Moyal orderings.
//!
//! Signs are pinned by [y, x] = +h matched with {p, x} = +1 from the bracket
//! table: p (*) x - x (*) p = h in both orderings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::coeff::{Coeff, Ring, Q};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Which terminating star product to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StarOrdering {
    Normal,
    Moyal,
}

/// Direction for the ordering transform T = exp((h/2) sum_i d^2/dx_i dp_i).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TransformDirection {
    /// Apply T.
    MoyalToNormal,
    /// Apply T^{-1}.
    NormalToMoyal,
}

/// A polynomial in hbar whose coefficients are commutative polynomials in
/// the 2n Darboux variables, stored by hbar exponent with no zero entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HbarPoly {
    n_vars: usize,
    coeffs: BTreeMap<u32, Poly>,
}

impl HbarPoly {
    pub fn zero(n_vars: usize) -> HbarPoly {
        HbarPoly { n_vars, coeffs: BTreeMap::new() }
    }

    pub fn from_poly(f: Poly) -> HbarPoly {
        HbarPoly::from_poly_at(f, 0)
    }

    /// f * h^k.
    pub fn from_poly_at(f: Poly, k: u32) -> HbarPoly {
        let mut out = HbarPoly::zero(f.n_vars());
        if !f.is_zero() {
            out.coeffs.insert(k, f);
        }
        out
    }

    pub fn from_parts(n_vars: usize, parts: Vec<(u32, Poly)>) -> Result<HbarPoly> {
        let mut out = HbarPoly::zero(n_vars);
        for (k, f) in parts {
            if f.n_vars() != n_vars {
                return Err(Error::ArityMismatch { expected: n_vars, found: f.n_vars() });
            }
            if f.ring() != Q {
                return Err(Error::RingMismatch {
                    left: Q.to_string(),
                    right: f.ring().to_string(),
                });
            }
            out.add_part(k, f);
        }
        Ok(out)
    }

    fn add_part(&mut self, k: u32, f: Poly) {
        if f.is_zero() {
            return;
        }
        match self.coeffs.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(&f).expect("same ring");
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

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (u32, &Poly)> {
        self.coeffs.iter().map(|(k, f)| (*k, f))
    }

    /// The polynomial coefficient of h^k.
    pub fn hbar_coeff(&self, k: u32) -> Poly {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Poly::zero(Q, self.n_vars))
    }

    pub fn max_hbar_exp(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    fn check_compat(&self, other: &HbarPoly) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::ArityMismatch { expected: self.n_vars, found: other.n_vars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &HbarPoly) -> Result<HbarPoly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (k, f) in &other.coeffs {
            out.add_part(*k, f.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &HbarPoly) -> Result<HbarPoly> {
        self.checked_add(&other.negate())
    }

    pub fn negate(&self) -> HbarPoly {
        HbarPoly {
            n_vars: self.n_vars,
            coeffs: self.coeffs.iter().map(|(k, f)| (*k, f.negate())).collect(),
        }
    }

    /// Commutative product (hbar is central).
    pub fn checked_mul(&self, other: &HbarPoly) -> Result<HbarPoly> {
        self.check_compat(other)?;
        let mut out = HbarPoly::zero(self.n_vars);
        for (ka, fa) in &self.coeffs {
            for (kb, fb) in &other.coeffs {
                out.add_part(ka + kb, fa.checked_mul(fb)?);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &BigRational) -> HbarPoly {
        if c == &BigRational::from(BigInt::from(0)) {
            return HbarPoly::zero(self.n_vars);
        }
        let coeff = Q.from_rational(c).expect("rational into Q");
        HbarPoly {
            n_vars: self.n_vars,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, f)| (*k, f.scalar_mul(&coeff).expect("same ring")))
                .collect(),
        }
    }

    pub fn hbar_shift(&self, k: u32) -> HbarPoly {
        HbarPoly {
            n_vars: self.n_vars,
            coeffs: self.coeffs.iter().map(|(e, f)| (e + k, f.clone())).collect(),
        }
    }

    /// Coefficient-wise partial derivative with respect to variable i.
    pub fn partial_derivative(&self, i: usize) -> Result<HbarPoly> {
        let mut out = HbarPoly::zero(self.n_vars);
        for (k, f) in &self.coeffs {
            out.add_part(*k, f.partial_derivative(i)?);
        }
        Ok(out)
    }
}

/// f (*) g in the chosen ordering; both series terminate on polynomials.
pub fn star(f: &HbarPoly, g: &HbarPoly, ord: StarOrdering) -> Result<HbarPoly> {
    match ord {
        StarOrdering::Normal => star_normal(f, g),
        StarOrdering::Moyal => star_moyal(f, g),
    }
}

/// Normal-ordered composition: sum over multi-indices gamma on the conjugate
/// pairs of (h^{|gamma|} / gamma!) (d_p^gamma f)(d_x^gamma g).
fn star_normal(f: &HbarPoly, g: &HbarPoly) -> Result<HbarPoly> {
    f.check_compat(g)?;
    let n = f.n_vars() / 2;
    let mut out = HbarPoly::zero(f.n_vars());
    star_normal_rec(f.clone(), g.clone(), 0, n, 0, BigRational::one(), &mut out)?;
    Ok(out)
}

fn star_normal_rec(
    f: HbarPoly,
    g: HbarPoly,
    pair: usize,
    n: usize,
    order: u32,
    inv_factorial: BigRational,
    out: &mut HbarPoly,
) -> Result<()> {
    if pair == n {
        let prod = f.checked_mul(&g)?.hbar_shift(order);
        *out = out.checked_add(&prod.scalar_mul(&inv_factorial))?;
        return Ok(());
    }
    let mut fcur = f;
    let mut gcur = g;
    let mut t = 0u32;
    let mut inv = inv_factorial;
    loop {
        star_normal_rec(fcur.clone(), gcur.clone(), pair + 1, n, order + t, inv.clone(), out)?;
        fcur = fcur.partial_derivative(n + pair)?; // d/dp_pair
        gcur = gcur.partial_derivative(pair)?; // d/dx_pair
        if fcur.is_zero() || gcur.is_zero() {
            return Ok(());
        }
        t += 1;
        inv /= BigRational::from(BigInt::from(t));
    }
}

/// Moyal composition: sum over bidirection multi-indices (gamma, delta) of
/// (h/2)^{|gamma|+|delta|} (-1)^{|delta|} / (gamma! delta!)
/// (d_p^gamma d_x^delta f)(d_x^gamma d_p^delta g).
fn star_moyal(f: &HbarPoly, g: &HbarPoly) -> Result<HbarPoly> {
    f.check_compat(g)?;
    let n = f.n_vars() / 2;
    let mut out = HbarPoly::zero(f.n_vars());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    star_moyal_rec(f.clone(), g.clone(), 0, 2 * n, n, 0, BigRational::one(), &half, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn star_moyal_rec(
    f: HbarPoly,
    g: HbarPoly,
    dir: usize,
    n_dirs: usize,
    n: usize,
    order: u32,
    weight: BigRational,
    half: &BigRational,
    out: &mut HbarPoly,
) -> Result<()> {
    if dir == n_dirs {
        let prod = f.checked_mul(&g)?.hbar_shift(order);
        *out = out.checked_add(&prod.scalar_mul(&weight))?;
        return Ok(());
    }
    // Directions 0..n are (d_p x d_x) with weight +h/2, directions n..2n are
    // (d_x x d_p) with weight -h/2, one per conjugate pair.
    let (fi, gi, sign) = if dir < n {
        (n + dir, dir, 1)
    } else {
        (dir - n, dir, -1)
    };
    let mut fcur = f;
    let mut gcur = g;
    let mut t = 0u32;
    let mut w = weight;
    loop {
        star_moyal_rec(fcur.clone(), gcur.clone(), dir + 1, n_dirs, n, order + t, w.clone(), half, out)?;
        fcur = fcur.partial_derivative(fi)?;
        gcur = gcur.partial_derivative(gi)?;
        if fcur.is_zero() || gcur.is_zero() {
            return Ok(());
        }
        t += 1;
        w = w * half * BigRational::from(BigInt::from(sign)) / BigRational::from(BigInt::from(t));
    }
}

/// The ordering transform T^{+-1} with T = exp((h/2) sum_i d^2/dx_i dp_i).
/// T intertwines the products: T(T^{-1} f *_M T^{-1} g) = f *_N g.
pub fn ordering_transform(f: &HbarPoly, dir: TransformDirection) -> Result<HbarPoly> {
    let n = f.n_vars() / 2;
    let sign = match dir {
        TransformDirection::MoyalToNormal => 1,
        TransformDirection::NormalToMoyal => -1,
    };
    let step = BigRational::new(BigInt::from(sign), BigInt::from(2));
    let mut out = HbarPoly::zero(f.n_vars());
    let mut cur = f.clone();
    let mut weight = BigRational::one();
    let mut m = 0u32;
    loop {
        out = out.checked_add(&cur.hbar_shift(m).scalar_mul(&weight))?;
        // apply L = sum_i d^2/dx_i dp_i
        let mut next = HbarPoly::zero(f.n_vars());
        for i in 0..n {
            next = next.checked_add(&cur.partial_derivative(i)?.partial_derivative(n + i)?)?;
        }
        if next.is_zero() {
            return Ok(out);
        }
        cur = next;
        m += 1;
        weight = weight * &step / BigRational::from(BigInt::from(m));
    }
}

/// hbar-linearity bridge: interpret a Weyl element over Q[h] as an HbarPoly
/// through normal symbols (x^a y^b <-> x^a p^b).
pub fn hbar_poly_from_weyl(u: &crate::weyl::WeylElt) -> Result<HbarPoly> {
    let n = u.ring().n;
    let mut parts: Vec<(u32, Poly)> = Vec::new();
    let mut by_exp: BTreeMap<u32, Vec<(crate::monomial::Monomial, Coeff)>> = BTreeMap::new();
    for ((a, b), c) in u.terms() {
        let mut exps = Vec::with_capacity(2 * n);
        exps.extend(a.exps().iter().copied());
        exps.extend(b.exps().iter().copied());
        let mono = crate::monomial::Monomial::new(exps);
        match c.as_hbar() {
            Some(h) => {
                for (k, s) in h.terms() {
                    by_exp.entry(k).or_default().push((mono.clone(), s.clone()));
                }
            }
            None => by_exp.entry(0).or_default().push((mono.clone(), c.clone())),
        }
    }
    for (k, terms) in by_exp {
        parts.push((k, Poly::from_terms(Q, 2 * n, terms)?));
    }
    HbarPoly::from_parts(2 * n, parts)
}

/// Inverse bridge: realize an HbarPoly as a normal-ordered Weyl element over
/// the given hbar Weyl ring.
pub fn weyl_from_hbar_poly(f: &HbarPoly, ring: &crate::weyl::WeylRing) -> Result<crate::weyl::WeylElt> {
    use crate::weyl::WeylElt;
    let n = ring.n;
    if f.n_vars() != 2 * n {
        return Err(Error::ArityMismatch { expected: 2 * n, found: f.n_vars() });
    }
    let hring: Ring = ring.coeff;
    if !hring.has_hbar() {
        return Err(Error::RingMismatch {
            left: "hbar ring".into(),
            right: hring.to_string(),
        });
    }
    let mut out = WeylElt::zero(ring.clone());
    for (k, poly) in f.parts() {
        for (m, c) in poly.terms() {
            let x_exp = crate::monomial::Monomial::new((0..n).map(|i| m.exp(i)).collect());
            let y_exp = crate::monomial::Monomial::new((0..n).map(|i| m.exp(n + i)).collect());
            let coeff = c.convert_to(&hring)?.hbar_shift(k);
            if coeff.is_zero() {
                continue;
            }
            out = out.checked_add(&WeylElt::monomial(ring.clone(), x_exp, y_exp, coeff)?)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{poisson_bracket, PoissonStructure};

    fn hvar(n_vars: usize, i: usize) -> HbarPoly {
        HbarPoly::from_poly(Poly::var(Q, n_vars, i).unwrap())
    }

    #[test]
    fn normal_product_on_generators() {
        // p * x = xp + h, x * p = xp
        let x = hvar(2, 0);
        let p = hvar(2, 1);
        let px = star(&p, &x, StarOrdering::Normal).unwrap();
        let xp_poly = Poly::var(Q, 2, 0).unwrap().checked_mul(&Poly::var(Q, 2, 1).unwrap()).unwrap();
        let expected = HbarPoly::from_parts(
            2,
            vec![(0, xp_poly.clone()), (1, Poly::one(Q, 2))],
        )
        .unwrap();
        assert_eq!(px, expected);
        let xp = star(&x, &p, StarOrdering::Normal).unwrap();
        assert_eq!(xp, HbarPoly::from_poly(xp_poly));
    }

    #[test]
    fn moyal_commutator_is_hbar() {
        let x = hvar(2, 0);
        let p = hvar(2, 1);
        let lhs = star(&p, &x, StarOrdering::Moyal)
            .unwrap()
            .checked_sub(&star(&x, &p, StarOrdering::Moyal).unwrap())
            .unwrap();
        let expected = HbarPoly::from_poly_at(Poly::one(Q, 2), 1);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn normal_matches_weyl_squares() {
        // p^2 * x^2 under normal ordering = x^2 p^2 + 4 h x p + 2 h^2
        let x = Poly::var(Q, 2, 0).unwrap();
        let p = Poly::var(Q, 2, 1).unwrap();
        let f = HbarPoly::from_poly(p.pow(2));
        let g = HbarPoly::from_poly(x.pow(2));
        let got = star(&f, &g, StarOrdering::Normal).unwrap();
        let expected = HbarPoly::from_parts(
            2,
            vec![
                (0, x.pow(2).checked_mul(&p.pow(2)).unwrap()),
                (1, x.checked_mul(&p).unwrap().scalar_mul(&Q.from_i64(4)).unwrap()),
                (2, Poly::constant(Q, 2, Q.from_i64(2))),
            ],
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn first_order_term_is_poisson_bracket() {
        let ps = PoissonStructure::new(2);
        let x1 = Poly::var(Q, 4, 0).unwrap();
        let p1 = Poly::var(Q, 4, 2).unwrap();
        let p2 = Poly::var(Q, 4, 3).unwrap();
        let f = x1.pow(2).checked_mul(&p2).unwrap();
        let g = p1.checked_mul(&x1).unwrap();
        for ord in [StarOrdering::Normal, StarOrdering::Moyal] {
            let hf = HbarPoly::from_poly(f.clone());
            let hg = HbarPoly::from_poly(g.clone());
            let comm = star(&hf, &hg, ord)
                .unwrap()
                .checked_sub(&star(&hg, &hf, ord).unwrap())
                .unwrap();
            let br = poisson_bracket(&ps, &f, &g).unwrap();
            assert_eq!(comm.hbar_coeff(1), br);
        }
    }

    #[test]
    fn transform_basics() {
        let x = hvar(2, 0);
        assert_eq!(ordering_transform(&x, TransformDirection::MoyalToNormal).unwrap(), x);
        // T(xp) = xp + h/2
        let xp = Poly::var(Q, 2, 0).unwrap().checked_mul(&Poly::var(Q, 2, 1).unwrap()).unwrap();
        let txp = ordering_transform(&HbarPoly::from_poly(xp.clone()), TransformDirection::MoyalToNormal)
            .unwrap();
        let half = Q
            .from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)))
            .unwrap();
        let expected = HbarPoly::from_parts(
            2,
            vec![(0, xp), (1, Poly::constant(Q, 2, half))],
        )
        .unwrap();
        assert_eq!(txp, expected);
    }

    #[test]
    fn intertwining_on_generators() {
        // T(T^{-1}x *_M T^{-1}p) = x *_N p = xp
        let x = hvar(2, 0);
        let p = hvar(2, 1);
        let tx = ordering_transform(&x, TransformDirection::NormalToMoyal).unwrap();
        let tp = ordering_transform(&p, TransformDirection::NormalToMoyal).unwrap();
        let m = star(&tx, &tp, StarOrdering::Moyal).unwrap();
        let back = ordering_transform(&m, TransformDirection::MoyalToNormal).unwrap();
        assert_eq!(back, star(&x, &p, StarOrdering::Normal).unwrap());
    }

    #[test]
    fn weyl_bridge_round_trip() {
        let ring = crate::weyl::WeylRing::q_hbar(1);
        let x = Poly::var(Q, 2, 0).unwrap();
        let p = Poly::var(Q, 2, 1).unwrap();
        let f = HbarPoly::from_parts(
            2,
            vec![(0, x.checked_mul(&p.pow(2)).unwrap()), (2, x)],
        )
        .unwrap();
        let w = weyl_from_hbar_poly(&f, &ring).unwrap();
        assert_eq!(hbar_poly_from_weyl(&w).unwrap(), f);
    }

    #[test]
    fn normal_star_tracks_weyl_product() {
        // The symbol of a Weyl product equals the normal star of symbols.
        let ring = crate::weyl::WeylRing::q_hbar(2);
        let x2 = Poly::var(Q, 4, 1).unwrap();
        let p1 = Poly::var(Q, 4, 2).unwrap();
        let p2 = Poly::var(Q, 4, 3).unwrap();
        let f = HbarPoly::from_poly(p1.checked_mul(&p2).unwrap().checked_add(&x2.pow(2)).unwrap());
        let g = HbarPoly::from_poly(
            Poly::var(Q, 4, 0).unwrap().checked_mul(&x2).unwrap().checked_add(&p2).unwrap(),
        );
        let wf = weyl_from_hbar_poly(&f, &ring).unwrap();
        let wg = weyl_from_hbar_poly(&g, &ring).unwrap();
        let wprod = wf.checked_mul(&wg).unwrap();
        let sprod = star(&f, &g, StarOrdering::Normal).unwrap();
        assert_eq!(hbar_poly_from_weyl(&wprod).unwrap(), sprod);
    }
}
