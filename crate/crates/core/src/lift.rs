//! Lifting tame symplectomorphisms to automorphisms of W_n(hbar), the
//! classical limit, and the transported star product.
//!
//! The normal-order symbol map (x^a p^b <-> x^a y^b) is the identity on
//! exponent data, which makes lift and limit exact inverses on tame words.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::star::{hbar_poly_from_weyl, weyl_from_hbar_poly, HbarPoly};
use crate::symplectic::{
    elementary_is_symplectic, ElementaryAuto, Endo, PoissonStructure, TameWord,
};
use crate::weyl::{lift_elementary_raw, WeylAuto, WeylRing};
use crate::coeff::Q;
use crate::monomial::Monomial;

/// Lift an elementary symplectic factor to W_n(hbar) over Q[h]: linear
/// factors keep their matrices on Weyl generators, transvections substitute
/// generators for the commuting variables. Rejects non-symplectic factors.
pub fn lift_elementary(ps: &PoissonStructure, e: &ElementaryAuto) -> Result<WeylAuto> {
    if !elementary_is_symplectic(ps, e)? {
        return Err(Error::NotSymplectic("elementary factor fails bracket preservation".into()));
    }
    let ring = WeylRing::q_hbar(ps.n());
    let lifted = lift_elementary_raw(e, &ring)?;
    debug_assert!(lifted.check()?);
    Ok(lifted)
}

/// Lift a tame symplectic word by composing lifted factors.
pub fn lift_tame(ps: &PoissonStructure, w: &TameWord) -> Result<WeylAuto> {
    if w.n_vars() != ps.n_vars() {
        return Err(Error::ArityMismatch { expected: ps.n_vars(), found: w.n_vars() });
    }
    let ring = WeylRing::q_hbar(ps.n());
    let mut acc = WeylAuto::identity(ring);
    for e in w.factors() {
        let lifted = lift_elementary(ps, e)?;
        acc = acc.compose(&lifted)?;
    }
    Ok(acc)
}

/// The hbar -> 0 part of each image as a commutative polynomial; for lifted
/// tame words this is exactly the classical evaluation.
pub fn classical_limit(auto: &WeylAuto) -> Result<Endo> {
    let n = auto.n();
    let mut images = Vec::with_capacity(2 * n);
    for img in auto.images() {
        let mut terms = Vec::new();
        for ((a, b), c) in img.terms() {
            let scalar = c.hbar_coeff_at(0);
            if scalar.is_zero() {
                continue;
            }
            let mut exps = Vec::with_capacity(2 * n);
            exps.extend(a.exps().iter().copied());
            exps.extend(b.exps().iter().copied());
            terms.push((Monomial::new(exps), scalar));
        }
        images.push(Poly::from_terms(Q, 2 * n, terms)?);
    }
    Endo::new(images)
}

/// The Poly coefficient of h^k in image l, read through normal symbols.
pub fn hbar_coefficient(auto: &WeylAuto, l: usize, k: u32) -> Result<Poly> {
    if l >= auto.images().len() {
        return Err(Error::IndexOutOfRange { index: l, len: auto.images().len() });
    }
    Ok(hbar_poly_from_weyl(auto.image(l))?.hbar_coeff(k))
}

/// The transported product f *_sigma g = Psi^{-1}(Psi(f) * Psi(g)) with
/// Psi = lift(w) acting by substitution on normal symbols and Psi^{-1}
/// obtained from the inverted word, never by series inversion.
pub fn transported_star(
    ps: &PoissonStructure,
    w: &TameWord,
    f: &HbarPoly,
    g: &HbarPoly,
) -> Result<HbarPoly> {
    let psi = lift_tame(ps, w)?;
    let psi_inv = lift_tame(ps, &w.invert()?)?;
    let ring = WeylRing::q_hbar(ps.n());
    let wf = weyl_from_hbar_poly(f, &ring)?;
    let wg = weyl_from_hbar_poly(g, &ring)?;
    let prod = psi.apply(&wf)?.checked_mul(&psi.apply(&wg)?)?;
    let back = psi_inv.apply(&prod)?;
    hbar_poly_from_weyl(&back)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::{star, StarOrdering};
    use crate::weyl::WeylElt;

    fn setup_word() -> (PoissonStructure, TameWord) {
        // w = [T(p, x^2), T(x, p^2)]
        let ps = PoissonStructure::new(1);
        let x = Poly::var(Q, 2, 0).unwrap();
        let p = Poly::var(Q, 2, 1).unwrap();
        let e1 = ElementaryAuto::symplectic_transvection(&ps, 1, x.pow(2)).unwrap();
        let e2 = ElementaryAuto::symplectic_transvection(&ps, 0, p.pow(2)).unwrap();
        (ps, TameWord::new(Q, 2, vec![e1, e2]).unwrap())
    }

    #[test]
    fn lift_composed_word() {
        // images (X+Y^2, Y+(X+Y^2)^2) with (X+Y^2)^2 = X^2+2XY^2+Y^4+2hY
        let (ps, w) = setup_word();
        let auto = lift_tame(&ps, &w).unwrap();
        assert!(auto.check().unwrap());
        let ring = WeylRing::q_hbar(1);
        let x = WeylElt::x_gen(ring.clone(), 0).unwrap();
        let y = WeylElt::y_gen(ring.clone(), 0).unwrap();
        let inner = x.checked_add(&y.pow(2).unwrap()).unwrap();
        assert_eq!(auto.image(0), &inner);
        let expected_second = y.checked_add(&inner.pow(2).unwrap()).unwrap();
        assert_eq!(auto.image(1), &expected_second);
        // the h^1 coefficient of the second image is 2p
        let c1 = hbar_coefficient(&auto, 1, 1).unwrap();
        let p = Poly::var(Q, 2, 1).unwrap();
        assert_eq!(c1, p.scalar_mul(&Q.from_i64(2)).unwrap());
        // a single lifted elementary has no h^1 part
        let single = lift_elementary(&ps, &w.factors()[0]).unwrap();
        assert!(hbar_coefficient(&single, 1, 1).unwrap().is_zero());
        // k = 0 recovers the classical image
        assert_eq!(
            hbar_coefficient(&auto, 1, 0).unwrap(),
            classical_limit(&auto).unwrap().image(1).clone()
        );
    }

    #[test]
    fn classical_limit_round_trip() {
        let (ps, w) = setup_word();
        let auto = lift_tame(&ps, &w).unwrap();
        assert_eq!(classical_limit(&auto).unwrap(), w.evaluate().unwrap());
        // empty word lifts to the identity
        let empty = TameWord::empty(Q, 2);
        let id = lift_tame(&ps, &empty).unwrap();
        assert_eq!(id, WeylAuto::identity(WeylRing::q_hbar(1)));
    }

    #[test]
    fn lift_is_homomorphic() {
        let (ps, w) = setup_word();
        let mut w1 = TameWord::empty(Q, 2);
        w1.push(w.factors()[0].clone()).unwrap();
        let mut w2 = TameWord::empty(Q, 2);
        w2.push(w.factors()[1].clone()).unwrap();
        let lhs = lift_tame(&ps, &w).unwrap();
        let rhs = lift_tame(&ps, &w1).unwrap().compose(&lift_tame(&ps, &w2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_symplectic_factor_rejected() {
        let ps = PoissonStructure::new(1);
        let m = crate::matrix::Mat::from_rows(
            Q,
            vec![
                vec![Q.from_i64(2), Q.from_i64(0)],
                vec![Q.from_i64(0), Q.from_i64(1)],
            ],
        )
        .unwrap();
        let e = ElementaryAuto::linear(m).unwrap();
        assert!(matches!(
            lift_elementary(&ps, &e),
            Err(Error::NotSymplectic(_))
        ));
    }

    #[test]
    fn transported_star_properties() {
        let (ps, w) = setup_word();
        let x = HbarPoly::from_poly(Poly::var(Q, 2, 0).unwrap());
        let p = HbarPoly::from_poly(Poly::var(Q, 2, 1).unwrap());
        // empty word gives back the normal product
        let empty = TameWord::empty(Q, 2);
        assert_eq!(
            transported_star(&ps, &empty, &p, &x).unwrap(),
            star(&p, &x, StarOrdering::Normal).unwrap()
        );
        // the commutation relation transports: p *_s x - x *_s p = h
        let comm = transported_star(&ps, &w, &p, &x)
            .unwrap()
            .checked_sub(&transported_star(&ps, &w, &x, &p).unwrap())
            .unwrap();
        assert_eq!(comm, HbarPoly::from_poly_at(Poly::one(Q, 2), 1));
        // x *_s x = x^2
        let xx = transported_star(&ps, &w, &x, &x).unwrap();
        assert_eq!(xx, HbarPoly::from_poly(Poly::var(Q, 2, 0).unwrap().pow(2)));
    }
}
