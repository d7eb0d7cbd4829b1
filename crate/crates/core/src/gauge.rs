//! Gauge conjugation of truncated hbar-series automorphisms by 1 + hbar Q,
//! and the n = 1 normalization that removes y-free defect terms by taking
//! primitives.
//!
//! All arithmetic runs over Q[h]/(h^{K+1}); the inverse of 1 + hQ is the
//! finite geometric series, which the truncation terminates.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::{qh_trunc, Coeff, Ring};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::weyl::{WeylAuto, WeylElt, WeylRing};

/// An automorphism of the truncated deformed Weyl algebra, all products
/// computed mod h^{K+1}. The constructor verifies the commutation relations
/// at that truncation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedAuto {
    n: usize,
    order: u32,
    auto: WeylAuto,
}

impl TruncatedAuto {
    pub fn new(n: usize, order: u32, images: Vec<WeylElt>) -> Result<TruncatedAuto> {
        let ring = WeylRing::q_hbar_trunc(n, order);
        let auto = WeylAuto::new(ring, images)?;
        if !auto.check()? {
            return Err(Error::RelationViolation(format!(
                "images fail the truncated Weyl relations at order {}",
                order
            )));
        }
        Ok(TruncatedAuto { n, order, auto })
    }

    /// Truncate an exact automorphism over Q[h] to order K.
    pub fn from_exact(auto: &WeylAuto, order: u32) -> Result<TruncatedAuto> {
        let images = auto
            .images()
            .iter()
            .map(|img| img.truncate_hbar(order))
            .collect::<Result<Vec<_>>>()?;
        TruncatedAuto::new(auto.n(), order, images)
    }

    pub fn identity(n: usize, order: u32) -> TruncatedAuto {
        let ring = WeylRing::q_hbar_trunc(n, order);
        TruncatedAuto { n, order, auto: WeylAuto::identity(ring) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn images(&self) -> &[WeylElt] {
        self.auto.images()
    }

    pub fn image(&self, l: usize) -> &WeylElt {
        self.auto.image(l)
    }

    pub fn as_weyl_auto(&self) -> &WeylAuto {
        &self.auto
    }

    pub fn ring(&self) -> &WeylRing {
        self.auto.ring()
    }
}

/// A gauge element Q; conjugation uses u = 1 + h Q, which is unipotent in
/// hbar and therefore invertible at every truncation order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaugeElt {
    q: WeylElt,
}

impl GaugeElt {
    pub fn new(q: WeylElt) -> Result<GaugeElt> {
        if !q.ring().coeff.has_hbar() {
            return Err(Error::RingMismatch {
                left: "truncated hbar ring".into(),
                right: q.ring().coeff.to_string(),
            });
        }
        Ok(GaugeElt { q })
    }

    pub fn q(&self) -> &WeylElt {
        &self.q
    }

    /// u = 1 + h Q.
    pub fn unit(&self) -> Result<WeylElt> {
        let ring = self.q.ring().clone();
        let h = ring.coeff.hbar();
        WeylElt::one(ring).checked_add(&self.q.scalar_mul(&h)?)
    }

    /// u^{-1} = sum_j (-h Q)^j, a finite sum mod h^{K+1}.
    pub fn unit_inverse(&self) -> Result<WeylElt> {
        let ring = self.q.ring().clone();
        let h = ring.coeff.hbar();
        let neg_hq = self.q.scalar_mul(&h)?.negate();
        let mut acc = WeylElt::one(ring.clone());
        let mut power = WeylElt::one(ring);
        loop {
            power = power.checked_mul(&neg_hq)?;
            if power.is_zero() {
                return Ok(acc);
            }
            acc = acc.checked_add(&power)?;
        }
    }

    /// The combined gauge for successive conjugation: conjugating by `first`
    /// then by `second` equals conjugating by (1 + h Q2)(1 + h Q1), whose
    /// gauge element is Q1 + Q2 + h Q2 Q1.
    pub fn combine(first: &GaugeElt, second: &GaugeElt) -> Result<GaugeElt> {
        let h = first.q.ring().coeff.hbar();
        let cross = second.q.checked_mul(&first.q)?.scalar_mul(&h)?;
        GaugeElt::new(first.q.checked_add(&second.q)?.checked_add(&cross)?)
    }
}

/// Conjugate every image by 1 + h Q. Conjugation by a unit is an algebra
/// automorphism, so the result again satisfies the truncated relations.
pub fn gauge_conjugate(psi: &TruncatedAuto, gauge: &GaugeElt) -> Result<TruncatedAuto> {
    if gauge.q.ring() != psi.ring() {
        return Err(Error::RingMismatch {
            left: format!("{:?}", psi.ring()),
            right: format!("{:?}", gauge.q.ring()),
        });
    }
    let u = gauge.unit()?;
    let u_inv = gauge.unit_inverse()?;
    let images = psi
        .images()
        .iter()
        .map(|img| u.checked_mul(img)?.checked_mul(&u_inv))
        .collect::<Result<Vec<_>>>()?;
    TruncatedAuto::new(psi.n, psi.order, images)
}

/// Least k >= 1 such that the h^k coefficient of the image of y contains a
/// monomial free of y; None if no such k up to the truncation order.
/// Requires n = 1 and the image of x to be exactly x.
pub fn defect_order(psi: &TruncatedAuto) -> Result<Option<u32>> {
    if psi.n != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: psi.n });
    }
    let x_gen = WeylElt::x_gen(psi.ring().clone(), 0)?;
    if psi.image(0) != &x_gen {
        return Err(Error::PreconditionX);
    }
    let mut best: Option<u32> = None;
    for ((_, y_exp), c) in psi.image(1).terms() {
        if y_exp.total_degree() != 0 {
            continue;
        }
        if let Some(h) = c.as_hbar() {
            for (k, s) in h.terms() {
                if k >= 1 && !s.is_zero() {
                    best = Some(best.map_or(k, |b| b.min(k)));
                }
            }
        }
    }
    Ok(best)
}

/// Remove y-free defects by iterated conjugation: at defect order k the
/// amending gauge is Q = h^{k-2} q(x) with q the x-primitive of the y-free
/// part c(x) of the h^k coefficient, so that the leading conjugation term
/// h^{k-1}[q(x), Y] = -h^k q'(x) cancels c exactly. The defect order
/// strictly increases each iteration; a defect at order 1 is out of reach of
/// 1 + hQ conjugation and is reported as an error.
pub fn normalize(psi: &TruncatedAuto) -> Result<(Vec<GaugeElt>, TruncatedAuto)> {
    let order = psi.order;
    let mut current = psi.clone();
    let mut gauges = Vec::new();
    let mut previous_defect: Option<u32> = None;
    loop {
        let defect = defect_order(&current)?;
        let Some(k) = defect else {
            return Ok((gauges, current));
        };
        if k == 1 {
            return Err(Error::DefectOrderOne);
        }
        if let Some(prev) = previous_defect {
            assert!(k > prev, "defect order must strictly increase");
        }
        previous_defect = Some(k);
        if k > order {
            return Ok((gauges, current));
        }
        let q = amending_gauge(&current, k)?;
        current = gauge_conjugate(&current, &q)?;
        gauges.push(q);
        if gauges.len() as u32 > order + 1 {
            unreachable!("normalization failed to terminate within the truncation order");
        }
    }
}

/// Build Q = h^{k-2} q(x), q the zero-constant x-primitive of the y-free
/// part of the h^k coefficient of the image of y.
fn amending_gauge(psi: &TruncatedAuto, k: u32) -> Result<GaugeElt> {
    let ring = psi.ring().clone();
    let coeff_ring: Ring = ring.coeff;
    let mut q = WeylElt::zero(ring.clone());
    for ((x_exp, y_exp), c) in psi.image(1).terms() {
        if y_exp.total_degree() != 0 {
            continue;
        }
        let scalar = c.hbar_coeff_at(k);
        if scalar.is_zero() {
            continue;
        }
        let a = x_exp.exp(0);
        // primitive of c x^a is c/(a+1) x^{a+1}, constant term zero
        let rat = scalar
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::Json("expected rational coefficient".into()))?;
        let prim = rat / BigRational::from(BigInt::from(a as i64 + 1));
        let coeff = coeff_ring.from_rational(&prim)?.hbar_shift(k - 2);
        let term = WeylElt::monomial(
            ring.clone(),
            Monomial::new(vec![a + 1]),
            Monomial::one(1),
            coeff,
        )?;
        q = q.checked_add(&term)?;
    }
    GaugeElt::new(q)
}

/// Convenience: a truncated automorphism with image of x fixed and image of
/// y equal to Y plus the given hbar pieces c_k(x) (each free of y).
pub fn planted_auto(order: u32, defects: &[(u32, crate::poly::Poly)]) -> Result<TruncatedAuto> {
    let ring = WeylRing::q_hbar_trunc(1, order);
    let coeff_ring: Ring = qh_trunc(order);
    let x = WeylElt::x_gen(ring.clone(), 0)?;
    let mut y = WeylElt::y_gen(ring.clone(), 0)?;
    for (k, c) in defects {
        for (m, s) in c.terms() {
            if m.n_vars() != 1 {
                return Err(Error::ArityMismatch { expected: 1, found: m.n_vars() });
            }
            let rat = s
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::Json("expected rational coefficient".into()))?;
            let coeff: Coeff = coeff_ring.from_rational(&rat)?.hbar_shift(*k);
            if coeff.is_zero() {
                continue;
            }
            let term = WeylElt::monomial(
                ring.clone(),
                Monomial::new(vec![m.exp(0)]),
                Monomial::one(1),
                coeff,
            )?;
            y = y.checked_add(&term)?;
        }
    }
    TruncatedAuto::new(1, order, vec![x, y])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Q;
    use crate::poly::Poly;

    fn univar(coeffs: &[(i64, u32)]) -> Poly {
        // sum c x^e over one variable
        let mut f = Poly::zero(Q, 1);
        for (c, e) in coeffs {
            let term = Poly::var(Q, 1, 0)
                .unwrap()
                .pow(*e)
                .scalar_mul(&Q.from_i64(*c))
                .unwrap();
            f = f.checked_add(&term).unwrap();
        }
        f
    }

    #[test]
    fn zero_gauge_is_identity() {
        let psi = planted_auto(4, &[(2, univar(&[(1, 2)]))]).unwrap();
        let q = GaugeElt::new(WeylElt::zero(psi.ring().clone())).unwrap();
        assert_eq!(gauge_conjugate(&psi, &q).unwrap(), psi);
    }

    #[test]
    fn defect_orders() {
        let clean = planted_auto(4, &[]).unwrap();
        assert_eq!(defect_order(&clean).unwrap(), None);
        let with_defect = planted_auto(4, &[(2, univar(&[(1, 3)]))]).unwrap();
        assert_eq!(defect_order(&with_defect).unwrap(), Some(2));
    }

    #[test]
    fn defect_ignores_y_full_terms() {
        // Psi(y) = Y + h^3 X^2 Y has no y-free defect. Built at order 3 so
        // the relation check cannot see the h^4 commutator term.
        let ring = WeylRing::q_hbar_trunc(1, 3);
        let cring = qh_trunc(3);
        let x = WeylElt::x_gen(ring.clone(), 0).unwrap();
        let y = WeylElt::y_gen(ring.clone(), 0).unwrap();
        let extra = WeylElt::monomial(
            ring.clone(),
            Monomial::new(vec![2]),
            Monomial::new(vec![1]),
            cring.one().hbar_shift(3),
        )
        .unwrap();
        let psi = TruncatedAuto::new(1, 3, vec![x, y.checked_add(&extra).unwrap()]).unwrap();
        assert_eq!(defect_order(&psi).unwrap(), None);
    }

    #[test]
    fn precondition_x_enforced() {
        let ring = WeylRing::q_hbar_trunc(1, 3);
        let x = WeylElt::x_gen(ring.clone(), 0).unwrap();
        let y = WeylElt::y_gen(ring.clone(), 0).unwrap();
        let shifted = TruncatedAuto::new(
            1,
            3,
            vec![x.checked_add(&y.pow(2).unwrap()).unwrap(), y],
        )
        .unwrap();
        assert!(matches!(defect_order(&shifted), Err(Error::PreconditionX)));
    }

    #[test]
    fn first_step_takes_primitive() {
        // Psi(y) = Y + h^2 X^2: the first gauge is q = X^3/3, and the h^2
        // defect is gone after one conjugation (the geometric tail of
        // (1 + hQ)^{-1} parks fresh y-free terms at h^3 and above, which
        // later iterations sweep up).
        let psi = planted_auto(5, &[(2, univar(&[(1, 2)]))]).unwrap();
        let (gauges, result) = normalize(&psi).unwrap();
        assert!(!gauges.is_empty());
        let third = Q
            .from_rational(&BigRational::new(BigInt::from(1), BigInt::from(3)))
            .unwrap();
        let q0 = gauges[0].q();
        assert_eq!(
            q0.coeff_of(&Monomial::new(vec![3]), &Monomial::one(1)).hbar_coeff_at(0),
            third
        );
        assert_eq!(defect_order(&result).unwrap(), None);
        // after the final sweep nothing y-free survives below the cutoff, so
        // the image of y is exactly Y
        let y = WeylElt::y_gen(result.ring().clone(), 0).unwrap();
        assert_eq!(result.image(1), &y);
        let after_one = gauge_conjugate(&psi, &gauges[0]).unwrap();
        assert!(defect_order(&after_one).unwrap().map_or(true, |k| k >= 3));
    }

    #[test]
    fn multi_defect_normalization() {
        // Psi(y) = Y + h^2 X + h^3 X^2, K = 4: the sweep needs one iteration
        // per live order (2, 3, then the tail parked at 4).
        let psi = planted_auto(
            4,
            &[(2, univar(&[(1, 1)])), (3, univar(&[(1, 2)]))],
        )
        .unwrap();
        let (gauges, result) = normalize(&psi).unwrap();
        assert_eq!(gauges.len(), 3);
        assert_eq!(defect_order(&result).unwrap(), None);
    }

    #[test]
    fn unchanged_without_defect() {
        let psi = planted_auto(4, &[]).unwrap();
        let (gauges, result) = normalize(&psi).unwrap();
        assert!(gauges.is_empty());
        assert_eq!(result, psi);
    }

    #[test]
    fn conjugation_moves_only_higher_orders() {
        // With hbar-free order-0 images, the gauged difference starts at h^2.
        let psi = planted_auto(4, &[]).unwrap();
        let ring = psi.ring().clone();
        let q = GaugeElt::new(
            WeylElt::monomial(
                ring.clone(),
                Monomial::new(vec![1]),
                Monomial::new(vec![1]),
                qh_trunc(4).one(),
            )
            .unwrap(),
        )
        .unwrap();
        let conj = gauge_conjugate(&psi, &q).unwrap();
        for l in 0..2 {
            let diff = conj.image(l).checked_sub(psi.image(l)).unwrap();
            for ((_, _), c) in diff.terms() {
                if let Some(h) = c.as_hbar() {
                    for (k, s) in h.terms() {
                        assert!(s.is_zero() || k >= 2, "difference below h^2 at image {}", l);
                    }
                }
            }
        }
    }

    #[test]
    fn gauge_composition_combines() {
        let psi = planted_auto(5, &[(2, univar(&[(2, 2)])), (4, univar(&[(1, 1)]))]).unwrap();
        let ring = psi.ring().clone();
        let cring = qh_trunc(5);
        let q1 = GaugeElt::new(
            WeylElt::monomial(ring.clone(), Monomial::new(vec![2]), Monomial::one(1), cring.one())
                .unwrap(),
        )
        .unwrap();
        let q2 = GaugeElt::new(
            WeylElt::monomial(ring.clone(), Monomial::new(vec![1]), Monomial::new(vec![1]), cring.one())
                .unwrap(),
        )
        .unwrap();
        let stepwise = gauge_conjugate(&gauge_conjugate(&psi, &q1).unwrap(), &q2).unwrap();
        let combined = gauge_conjugate(&psi, &GaugeElt::combine(&q1, &q2).unwrap()).unwrap();
        assert_eq!(stepwise, combined);
    }
}
