//! The Poisson algebra on 2n variables with the standard constant bracket,
//! polynomial endomorphisms, the height metric, and elementary / tame
//! symplectomorphisms.
//!
//! Variable layout: indices 0..n are the position generators x_1..x_n,
//! indices n..2n are p_1..p_n. The bracket table is the constant
//! b(i,j) = [i = j+n] - [j = i+n], which makes {x_i, p_i} = -1 and
//! {p_i, x_i} = +1; every derived sign in the crate is fixed against it.

use std::fmt;

use crate::coeff::Ring;
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::poly::{jacobian_det, Height, Poly};

/// The standard constant Poisson structure on 2n generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoissonStructure {
    n: usize,
}

impl PoissonStructure {
    pub fn new(n: usize) -> PoissonStructure {
        PoissonStructure { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_vars(&self) -> usize {
        2 * self.n
    }

    /// b(i, j) for 0-based generator indices.
    pub fn bracket_constant(&self, i: usize, j: usize) -> i64 {
        let mut v = 0;
        if i == j + self.n {
            v += 1;
        }
        if j == i + self.n {
            v -= 1;
        }
        v
    }

    /// The bracket matrix J with J[i][j] = b(i, j).
    pub fn j_matrix(&self, ring: Ring) -> Mat {
        let nv = self.n_vars();
        let mut m = Mat::zero(ring, nv, nv);
        for i in 0..nv {
            for j in 0..nv {
                let b = self.bracket_constant(i, j);
                if b != 0 {
                    m.set(i, j, ring.from_i64(b));
                }
            }
        }
        m
    }

    /// Index of the conjugate variable (x_i <-> p_i).
    pub fn conjugate(&self, k: usize) -> usize {
        if k < self.n {
            k + self.n
        } else {
            k - self.n
        }
    }
}

/// {f, g} = sum_i (df/dp_i)(dg/dx_i) - (df/dx_i)(dg/dp_i), the expansion of
/// the constant bracket table through the derivation property.
pub fn poisson_bracket(ps: &PoissonStructure, f: &Poly, g: &Poly) -> Result<Poly> {
    let nv = ps.n_vars();
    if f.n_vars() != nv {
        return Err(Error::ArityMismatch { expected: nv, found: f.n_vars() });
    }
    if g.n_vars() != nv {
        return Err(Error::ArityMismatch { expected: nv, found: g.n_vars() });
    }
    let mut acc = Poly::zero(f.ring(), nv);
    for i in 0..ps.n {
        let fp = f.partial_derivative(i + ps.n)?;
        let gx = g.partial_derivative(i)?;
        let fx = f.partial_derivative(i)?;
        let gp = g.partial_derivative(i + ps.n)?;
        acc = acc.checked_add(&fp.checked_mul(&gx)?)?;
        acc = acc.checked_sub(&fx.checked_mul(&gp)?)?;
    }
    Ok(acc)
}

/// A polynomial endomorphism, identified with its tuple of generator images.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Endo {
    n_vars: usize,
    ring: Ring,
    images: Vec<Poly>,
}

impl Endo {
    pub fn new(images: Vec<Poly>) -> Result<Endo> {
        let n_vars = images.len();
        let ring = images
            .first()
            .map(|f| f.ring())
            .ok_or(Error::ArityMismatch { expected: 1, found: 0 })?;
        for f in &images {
            if f.n_vars() != n_vars {
                return Err(Error::ArityMismatch { expected: n_vars, found: f.n_vars() });
            }
            if f.ring() != ring {
                return Err(Error::RingMismatch {
                    left: ring.to_string(),
                    right: f.ring().to_string(),
                });
            }
        }
        Ok(Endo { n_vars, ring, images })
    }

    pub fn identity(ring: Ring, n_vars: usize) -> Endo {
        let images = (0..n_vars)
            .map(|i| Poly::var(ring, n_vars, i).expect("index in range"))
            .collect();
        Endo { n_vars, ring, images }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Poly {
        &self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        *self == Endo::identity(self.ring, self.n_vars)
    }

    /// Apply to a polynomial: substitute the images for the variables.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        f.eval(&self.images)
    }

    /// Composition by substitution of `other`'s images into `self`'s images:
    /// (self o other)(x_i) = self(x_i) evaluated at other's images.
    pub fn compose(&self, other: &Endo) -> Result<Endo> {
        self.check_compat(other)?;
        let images = self
            .images
            .iter()
            .map(|f| f.eval(&other.images))
            .collect::<Result<Vec<_>>>()?;
        Endo::new(images)
    }

    /// Composition with all intermediate products truncated above `cap` in
    /// total degree. Exact on heights <= cap when both maps have zero
    /// constant part.
    pub fn compose_truncated(&self, other: &Endo, cap: u32) -> Result<Endo> {
        self.check_compat(other)?;
        let images = self
            .images
            .iter()
            .map(|f| f.eval_truncated(&other.images, cap))
            .collect::<Result<Vec<_>>>()?;
        Endo::new(images)
    }

    fn check_compat(&self, other: &Endo) -> Result<()> {
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
}

/// Ht(phi - psi): the minimum over coordinates of the height of the
/// coordinate difference.
pub fn height_of(phi: &Endo, psi: &Endo) -> Result<Height> {
    phi.check_compat(psi)?;
    let mut h = Height::Inf;
    for (f, g) in phi.images.iter().zip(&psi.images) {
        h = h.min(f.checked_sub(g)?.height());
    }
    Ok(h)
}

/// The power-series-topology distance, kept symbolic as e^{-Ht} so that all
/// comparisons stay exact.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Distance(pub Height);

impl Distance {
    /// d <= e^{-k} iff Ht >= k.
    pub fn at_most_exp_neg(&self, k: u32) -> bool {
        self.0 >= Height::Finite(k)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Height::Inf => write!(f, "0"),
            Height::Finite(0) => write!(f, "1"),
            Height::Finite(k) => write!(f, "e^-{}", k),
        }
    }
}

pub fn distance(phi: &Endo, psi: &Endo) -> Result<Distance> {
    Ok(Distance(height_of(phi, psi)?))
}

/// True iff phi and psi_inv compose to the identity both ways.
pub fn is_automorphism_certificate(phi: &Endo, psi_inv: &Endo) -> Result<bool> {
    let id = Endo::identity(phi.ring(), phi.n_vars());
    Ok(phi.compose(psi_inv)? == id && psi_inv.compose(phi)? == id)
}

/// True iff the Jacobian determinant of the images is the constant 1.
pub fn jacobian_is_unit_constant(phi: &Endo) -> Result<bool> {
    Ok(jacobian_det(phi.images())?.is_one())
}

/// True iff {phi(x_i), phi(x_j)} = b(i,j) for all generator pairs; the
/// derivation property makes checking on generators sufficient.
pub fn is_symplectomorphism(ps: &PoissonStructure, phi: &Endo) -> Result<bool> {
    let nv = ps.n_vars();
    if phi.n_vars() != nv {
        return Err(Error::ArityMismatch { expected: nv, found: phi.n_vars() });
    }
    for i in 0..nv {
        for j in (i + 1)..nv {
            let br = poisson_bracket(ps, phi.image(i), phi.image(j))?;
            let expected =
                Poly::constant(phi.ring(), nv, phi.ring().from_i64(ps.bracket_constant(i, j)));
            if br != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An elementary automorphism: an invertible linear change of generators, or
/// a transvection adding to one generator a polynomial free of it.
///
/// A `Linear` factor with matrix A sends x_i to the linear combination given
/// by row i of A.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ElementaryAuto {
    Linear(Mat),
    Transvection { target: usize, poly: Poly },
}

impl ElementaryAuto {
    pub fn linear(m: Mat) -> Result<ElementaryAuto> {
        if m.rows() != m.cols() {
            return Err(Error::ArityMismatch { expected: m.rows(), found: m.cols() });
        }
        m.inverse()?; // invertibility is part of the constructor contract
        Ok(ElementaryAuto::Linear(m))
    }

    pub fn transvection(target: usize, poly: Poly) -> Result<ElementaryAuto> {
        if target >= poly.n_vars() {
            return Err(Error::IndexOutOfRange { index: target, len: poly.n_vars() });
        }
        if poly.terms().any(|(m, _)| m.exp(target) > 0) {
            return Err(Error::NotSymplectic(format!(
                "transvection polynomial involves the target variable {}",
                target
            )));
        }
        Ok(ElementaryAuto::Transvection { target, poly })
    }

    /// Constructor for symplectic use: the polynomial must depend only on the
    /// conjugate variable of the target. This is strictly stronger than
    /// freedom from all same-type generators, which for n > 1 admits maps
    /// that fail bracket preservation.
    pub fn symplectic_transvection(
        ps: &PoissonStructure,
        target: usize,
        poly: Poly,
    ) -> Result<ElementaryAuto> {
        if poly.n_vars() != ps.n_vars() {
            return Err(Error::ArityMismatch { expected: ps.n_vars(), found: poly.n_vars() });
        }
        let conj = ps.conjugate(target);
        for (m, _) in poly.terms() {
            for i in 0..m.n_vars() {
                if i != conj && m.exp(i) > 0 {
                    return Err(Error::NotSymplectic(format!(
                        "transvection polynomial must depend only on the conjugate variable {}",
                        conj
                    )));
                }
            }
        }
        ElementaryAuto::transvection(target, poly)
    }

    pub fn n_vars(&self) -> usize {
        match self {
            ElementaryAuto::Linear(m) => m.rows(),
            ElementaryAuto::Transvection { poly, .. } => poly.n_vars(),
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            ElementaryAuto::Linear(m) => m.ring(),
            ElementaryAuto::Transvection { poly, .. } => poly.ring(),
        }
    }

    pub fn to_endo(&self) -> Endo {
        match self {
            ElementaryAuto::Linear(m) => {
                let nv = m.rows();
                let ring = m.ring();
                let images = (0..nv)
                    .map(|i| {
                        let mut f = Poly::zero(ring, nv);
                        for j in 0..nv {
                            let c = m.get(i, j);
                            if !c.is_zero() {
                                let term = Poly::var(ring, nv, j)
                                    .expect("index in range")
                                    .scalar_mul(c)
                                    .expect("same ring");
                                f = f.checked_add(&term).expect("same ring");
                            }
                        }
                        f
                    })
                    .collect();
                Endo::new(images).expect("well-formed by construction")
            }
            ElementaryAuto::Transvection { target, poly } => {
                let nv = poly.n_vars();
                let ring = poly.ring();
                let mut images = Endo::identity(ring, nv).images;
                images[*target] = images[*target].checked_add(poly).expect("same ring");
                Endo::new(images).expect("well-formed by construction")
            }
        }
    }

    pub fn inverse(&self) -> Result<ElementaryAuto> {
        match self {
            ElementaryAuto::Linear(m) => Ok(ElementaryAuto::Linear(m.inverse()?)),
            ElementaryAuto::Transvection { target, poly } => {
                Ok(ElementaryAuto::Transvection { target: *target, poly: poly.negate() })
            }
        }
    }
}

/// True iff the factor preserves the bracket: A J A^T = J for linear factors,
/// the full generator-pair check for transvections.
pub fn elementary_is_symplectic(ps: &PoissonStructure, e: &ElementaryAuto) -> Result<bool> {
    if e.n_vars() != ps.n_vars() {
        return Err(Error::ArityMismatch { expected: ps.n_vars(), found: e.n_vars() });
    }
    match e {
        ElementaryAuto::Linear(m) => {
            let j = ps.j_matrix(m.ring());
            Ok(m.mul(&j)?.mul(&m.transpose())? == j)
        }
        ElementaryAuto::Transvection { .. } => is_symplectomorphism(ps, &e.to_endo()),
    }
}

/// A word in elementary automorphisms; the word spells the composition from
/// left to right, so evaluate([e1, e2]) = e1 o e2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TameWord {
    n_vars: usize,
    ring: Ring,
    factors: Vec<ElementaryAuto>,
}

impl TameWord {
    pub fn empty(ring: Ring, n_vars: usize) -> TameWord {
        TameWord { n_vars, ring, factors: Vec::new() }
    }

    pub fn new(ring: Ring, n_vars: usize, factors: Vec<ElementaryAuto>) -> Result<TameWord> {
        let mut w = TameWord::empty(ring, n_vars);
        for e in factors {
            w.push(e)?;
        }
        Ok(w)
    }

    pub fn push(&mut self, e: ElementaryAuto) -> Result<()> {
        if e.n_vars() != self.n_vars {
            return Err(Error::ArityMismatch { expected: self.n_vars, found: e.n_vars() });
        }
        if e.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: e.ring().to_string(),
            });
        }
        self.factors.push(e);
        Ok(())
    }

    pub fn extend(&mut self, other: &TameWord) -> Result<()> {
        for e in &other.factors {
            self.push(e.clone())?;
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[ElementaryAuto] {
        &self.factors
    }

    pub fn evaluate(&self) -> Result<Endo> {
        let mut acc = Endo::identity(self.ring, self.n_vars);
        for e in &self.factors {
            acc = acc.compose(&e.to_endo())?;
        }
        Ok(acc)
    }

    /// Degree-truncated evaluation; exact on heights <= cap for words whose
    /// factors have zero constant part.
    pub fn evaluate_truncated(&self, cap: u32) -> Result<Endo> {
        let mut acc = Endo::identity(self.ring, self.n_vars);
        for e in &self.factors {
            acc = acc.compose_truncated(&e.to_endo(), cap)?;
        }
        Ok(acc)
    }

    /// Reverse the sequence and invert each factor.
    pub fn invert(&self) -> Result<TameWord> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for e in self.factors.iter().rev() {
            factors.push(e.inverse()?);
        }
        Ok(TameWord { n_vars: self.n_vars, ring: self.ring, factors })
    }
}

/// The corrected Nagata automorphism of K[x, y, z] together with its
/// verified inverse: with D = x^2 - yz,
/// (x + Dz, y + 2Dx + D^2 z, z) and (x - Dz, y - 2Dx + D^2 z, z).
pub fn nagata() -> (Endo, Endo) {
    (nagata_signed(1), nagata_signed(-1))
}

/// The map as printed in the source material, (x + Dx, y + 2Dx + D^2 z, z).
/// It fails D-invariance and is kept only as a constructible variant.
pub fn nagata_printed() -> Endo {
    let ring = crate::coeff::Q;
    let x = Poly::var(ring, 3, 0).unwrap();
    let y = Poly::var(ring, 3, 1).unwrap();
    let z = Poly::var(ring, 3, 2).unwrap();
    let delta = &x.pow(2) - &(&y * &z);
    let two = ring.from_i64(2);
    let img_x = &x + &(&delta * &x);
    let img_y = &(&y + &(&delta * &x).scalar_mul(&two).unwrap()) + &(&delta.pow(2) * &z);
    Endo::new(vec![img_x, img_y, z]).unwrap()
}

fn nagata_signed(sign: i64) -> Endo {
    let ring = crate::coeff::Q;
    let x = Poly::var(ring, 3, 0).unwrap();
    let y = Poly::var(ring, 3, 1).unwrap();
    let z = Poly::var(ring, 3, 2).unwrap();
    let delta = &x.pow(2) - &(&y * &z);
    let s = ring.from_i64(sign);
    let two_s = ring.from_i64(2 * sign);
    let img_x = &x + &(&delta * &z).scalar_mul(&s).unwrap();
    let img_y = &(&y + &(&delta * &x).scalar_mul(&two_s).unwrap()) + &(&delta.pow(2) * &z);
    Endo::new(vec![img_x, img_y, z]).unwrap()
}

/// The defining invariant D = x^2 - yz of the Nagata map.
pub fn nagata_delta() -> Poly {
    let ring = crate::coeff::Q;
    let x = Poly::var(ring, 3, 0).unwrap();
    let y = Poly::var(ring, 3, 1).unwrap();
    let z = Poly::var(ring, 3, 2).unwrap();
    &x.pow(2) - &(&y * &z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Q;

    fn xv(i: usize) -> Poly {
        Poly::var(Q, 2, i).unwrap()
    }

    #[test]
    fn bracket_generators() {
        let ps = PoissonStructure::new(1);
        // {x, p} = -1 under the constant table
        let br = poisson_bracket(&ps, &xv(0), &xv(1)).unwrap();
        assert_eq!(br, Poly::constant(Q, 2, Q.from_i64(-1)));
        // {x^2, p} = -2x
        let br2 = poisson_bracket(&ps, &xv(0).pow(2), &xv(1)).unwrap();
        assert_eq!(br2, xv(0).scalar_mul(&Q.from_i64(-2)).unwrap());
        // n=2: {x_1, p_2} = 0
        let ps2 = PoissonStructure::new(2);
        let x1 = Poly::var(Q, 4, 0).unwrap();
        let p2 = Poly::var(Q, 4, 3).unwrap();
        assert!(poisson_bracket(&ps2, &x1, &p2).unwrap().is_zero());
    }

    #[test]
    fn compose_substitutes_right_into_left() {
        // (x+p^2, p) o (x, p+x^2) = (x + (p+x^2)^2, p + x^2)
        let phi = Endo::new(vec![&xv(0) + &xv(1).pow(2), xv(1)]).unwrap();
        let psi = Endo::new(vec![xv(0), &xv(1) + &xv(0).pow(2)]).unwrap();
        let comp = phi.compose(&psi).unwrap();
        let inner = &xv(1) + &xv(0).pow(2);
        assert_eq!(comp.image(0), &(&xv(0) + &inner.pow(2)));
        assert_eq!(comp.image(1), &inner);
        // phi o id = phi
        let id = Endo::identity(Q, 2);
        assert_eq!(phi.compose(&id).unwrap(), phi);
        // apply((x+p^2, p), x) = x+p^2
        assert_eq!(phi.apply(&xv(0)).unwrap(), &xv(0) + &xv(1).pow(2));
    }

    #[test]
    fn heights_and_distance() {
        let id = Endo::identity(Q, 2);
        let phi = Endo::new(vec![&xv(0) + &xv(0).pow(3), xv(1)]).unwrap();
        assert_eq!(height_of(&phi, &id).unwrap(), Height::Finite(3));
        assert_eq!(distance(&phi, &id).unwrap().to_string(), "e^-3");
        assert_eq!(height_of(&phi, &phi).unwrap(), Height::Inf);
        assert_eq!(distance(&phi, &phi).unwrap().to_string(), "0");
        let shifted = Endo::new(vec![&xv(0) + &Poly::one(Q, 2), xv(1)]).unwrap();
        assert_eq!(height_of(&shifted, &id).unwrap(), Height::Finite(0));
        assert_eq!(distance(&shifted, &id).unwrap().to_string(), "1");
    }

    #[test]
    fn automorphism_certificates() {
        let phi = Endo::new(vec![xv(0), &xv(1) + &xv(0).pow(2)]).unwrap();
        let inv = Endo::new(vec![xv(0), &xv(1) - &xv(0).pow(2)]).unwrap();
        assert!(is_automorphism_certificate(&phi, &inv).unwrap());
        let not_inj = Endo::new(vec![xv(0).pow(2), xv(1)]).unwrap();
        assert!(!is_automorphism_certificate(&not_inj, &inv).unwrap());
    }

    #[test]
    fn jacobian_unit_checks() {
        let id = Endo::identity(Q, 2);
        assert!(jacobian_is_unit_constant(&id).unwrap());
        let scaled = Endo::new(vec![xv(0).scalar_mul(&Q.from_i64(2)).unwrap(), xv(1)]).unwrap();
        assert!(!jacobian_is_unit_constant(&scaled).unwrap());
        let shear = Endo::new(vec![&xv(0) + &xv(1).pow(2), xv(1)]).unwrap();
        assert!(jacobian_is_unit_constant(&shear).unwrap());
    }

    #[test]
    fn symplectomorphism_checks() {
        let ps = PoissonStructure::new(1);
        let shear = Endo::new(vec![&xv(0) + &xv(1).pow(2), xv(1)]).unwrap();
        assert!(is_symplectomorphism(&ps, &shear).unwrap());
        let scaled = Endo::new(vec![xv(0).scalar_mul(&Q.from_i64(2)).unwrap(), xv(1)]).unwrap();
        assert!(!is_symplectomorphism(&ps, &scaled).unwrap());
        // n=2: (x_1 + p_2, x_2, p_1, p_2) is not symplectic
        let ps2 = PoissonStructure::new(2);
        let v = |i| Poly::var(Q, 4, i).unwrap();
        let phi = Endo::new(vec![&v(0) + &v(3), v(1), v(2), v(3)]).unwrap();
        assert!(!is_symplectomorphism(&ps2, &phi).unwrap());
    }

    #[test]
    fn elementary_symplectic_checks() {
        let ps = PoissonStructure::new(1);
        // SL(2) = Sp(2)
        let m = Mat::from_rows(
            Q,
            vec![
                vec![Q.from_i64(1), Q.from_i64(1)],
                vec![Q.from_i64(0), Q.from_i64(1)],
            ],
        )
        .unwrap();
        let lin = ElementaryAuto::linear(m).unwrap();
        assert!(elementary_is_symplectic(&ps, &lin).unwrap());
        // x -> x + p^3 depends only on the conjugate variable
        let t = ElementaryAuto::symplectic_transvection(&ps, 0, xv(1).pow(3)).unwrap();
        assert!(elementary_is_symplectic(&ps, &t).unwrap());
        // n=2: x_1 -> x_1 + p_2 satisfies the same-type-freedom condition but
        // fails bracket preservation.
        let ps2 = PoissonStructure::new(2);
        let p2 = Poly::var(Q, 4, 3).unwrap();
        let bad = ElementaryAuto::transvection(0, p2.clone()).unwrap();
        assert!(!elementary_is_symplectic(&ps2, &bad).unwrap());
        assert!(ElementaryAuto::symplectic_transvection(&ps2, 0, p2).is_err());
    }

    #[test]
    fn tame_words_evaluate_and_invert() {
        let ps = PoissonStructure::new(1);
        assert!(TameWord::empty(Q, 2).evaluate().unwrap().is_identity());
        // w = [T(p, x^2), T(x, p^2)]
        let e1 = ElementaryAuto::symplectic_transvection(&ps, 1, xv(0).pow(2)).unwrap();
        let e2 = ElementaryAuto::symplectic_transvection(&ps, 0, xv(1).pow(2)).unwrap();
        let w = TameWord::new(Q, 2, vec![e1, e2]).unwrap();
        let sigma = w.evaluate().unwrap();
        // evaluates to (x+p^2, p+(x+p^2)^2)
        let inner = &xv(0) + &xv(1).pow(2);
        assert_eq!(sigma.image(0), &inner);
        assert_eq!(sigma.image(1), &(&xv(1) + &inner.pow(2)));
        let winv = w.invert().unwrap();
        let round = sigma.compose(&winv.evaluate().unwrap()).unwrap();
        assert!(round.is_identity());
        // single-factor inversion negates the polynomial
        match &winv.factors()[1] {
            ElementaryAuto::Transvection { target, poly } => {
                assert_eq!(*target, 1);
                assert_eq!(*poly, xv(0).pow(2).negate());
            }
            _ => panic!("expected transvection"),
        }
    }

    #[test]
    fn nagata_map() {
        let (phi, phi_inv) = nagata();
        let delta = nagata_delta();
        // D is invariant
        assert_eq!(phi.apply(&delta).unwrap(), delta);
        // explicit inverse
        assert!(is_automorphism_certificate(&phi, &phi_inv).unwrap());
        // unit Jacobian
        assert!(jacobian_is_unit_constant(&phi).unwrap());
        // the printed variant breaks D-invariance
        assert_ne!(nagata_printed().apply(&delta).unwrap(), delta);
    }
}
