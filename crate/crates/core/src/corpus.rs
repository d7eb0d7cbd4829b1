//! Deterministic corpus generation for the property suites. Regeneration
//! from the same spec and seed is bit-identical.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::approx::flow_word;
use crate::coeff::{Coeff, Q};
use crate::error::Result;
use crate::gauge::{planted_auto, TruncatedAuto};
use crate::matrix::Mat;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::star::HbarPoly;
use crate::symplectic::{ElementaryAuto, Endo, PoissonStructure, TameWord};
use crate::weyl::{WeylElt, WeylRing};

/// Parameters for corpus generation.
#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub seed: u64,
    pub n: usize,
    pub word_len: (usize, usize),
    pub factor_degree: (u32, u32),
    pub coeff_bound: i64,
    pub primes: Vec<u64>,
    /// Restrict to integer data whose linear factors stay invertible mod
    /// every prime (shears, rotations, and -I only).
    pub integer_only: bool,
    /// Cap on the product of transvection degrees of a word, which bounds
    /// the degree of its evaluation; words over the cap are resampled.
    pub degree_product_cap: u32,
}

impl CorpusSpec {
    pub fn symplectic_words(seed: u64, n: usize) -> CorpusSpec {
        CorpusSpec {
            seed,
            n,
            word_len: (1, 6),
            factor_degree: (1, 3),
            coeff_bound: 3,
            primes: vec![2, 3, 5],
            integer_only: false,
            degree_product_cap: 32,
        }
    }

    pub fn integer_words(seed: u64, n: usize) -> CorpusSpec {
        CorpusSpec {
            seed,
            n,
            word_len: (1, 4),
            factor_degree: (1, 3),
            coeff_bound: 2,
            primes: vec![2, 3],
            integer_only: true,
            degree_product_cap: 18,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn nonzero_coeff(rng: &mut ChaCha8Rng, bound: i64) -> Coeff {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return Q.from_i64(c);
        }
    }
}

/// A random polynomial in one chosen variable only, degree within the range.
fn univariate_in(
    rng: &mut ChaCha8Rng,
    n_vars: usize,
    var: usize,
    deg: (u32, u32),
    bound: i64,
) -> Poly {
    let d = rng.gen_range(deg.0..=deg.1);
    let n_terms = rng.gen_range(1..=2.min(d as usize + 1));
    let mut f = Poly::zero(Q, n_vars);
    for t in 0..n_terms {
        let e = if t == 0 { d } else { rng.gen_range(1..=d) };
        let mono = Monomial::one(n_vars).with_exp(var, e);
        let c = nonzero_coeff(rng, bound);
        f = f
            .checked_add(&Poly::from_terms(Q, n_vars, vec![(mono, c)]).unwrap())
            .unwrap();
    }
    f
}

/// A random linear symplectic factor built from generators of Sp(2n):
/// conjugate-variable shears, the per-pair rotation (x, p) -> (p, -x),
/// -I, and (over Q only) the scaling diag(2, 1/2) on one pair.
fn random_sp_matrix(rng: &mut ChaCha8Rng, ps: &PoissonStructure, integer_only: bool) -> Mat {
    let nv = ps.n_vars();
    let n = ps.n();
    let mut m = Mat::identity(Q, nv);
    let steps = rng.gen_range(1..=3);
    for _ in 0..steps {
        let kind_max = if integer_only { 2 } else { 3 };
        let factor = match rng.gen_range(0..=kind_max) {
            0 => {
                // shear x_i += c p_i or p_i += c x_i
                let i = rng.gen_range(0..n);
                let c = nonzero_coeff(rng, 2);
                let mut s = Mat::identity(Q, nv);
                if rng.gen_bool(0.5) {
                    s.set(i, n + i, c);
                } else {
                    s.set(n + i, i, c);
                }
                s
            }
            1 => {
                // rotation on pair i: x -> p, p -> -x
                let i = rng.gen_range(0..n);
                let mut s = Mat::identity(Q, nv);
                s.set(i, i, Q.zero());
                s.set(i, n + i, Q.one());
                s.set(n + i, n + i, Q.zero());
                s.set(n + i, i, Q.from_i64(-1));
                s
            }
            2 => {
                // -I
                let mut s = Mat::zero(Q, nv, nv);
                for i in 0..nv {
                    s.set(i, i, Q.from_i64(-1));
                }
                s
            }
            _ => {
                // diag(2, 1/2) on pair i
                let i = rng.gen_range(0..n);
                let mut s = Mat::identity(Q, nv);
                s.set(i, i, Q.from_i64(2));
                let half = Q.from_i64(2).inv().unwrap();
                s.set(n + i, n + i, half);
                s
            }
        };
        m = m.mul(&factor).unwrap();
    }
    m
}

/// A random tame symplectic word within the spec's ranges; every factor
/// passes `elementary_is_symplectic` by construction.
pub fn random_symplectic_word(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> Result<TameWord> {
    let ps = PoissonStructure::new(spec.n);
    let nv = ps.n_vars();
    loop {
        let len = rng.gen_range(spec.word_len.0..=spec.word_len.1);
        let mut word = TameWord::empty(Q, nv);
        let mut degree_product = 1u32;
        for _ in 0..len {
            if rng.gen_bool(0.4) {
                let m = random_sp_matrix(rng, &ps, spec.integer_only);
                word.push(ElementaryAuto::linear(m)?)?;
            } else {
                let target = rng.gen_range(0..nv);
                let conj = ps.conjugate(target);
                let poly =
                    univariate_in(rng, nv, conj, spec.factor_degree, spec.coeff_bound);
                degree_product = degree_product.saturating_mul(match poly.degree() {
                    crate::poly::Degree::Finite(d) => d.max(1),
                    crate::poly::Degree::NegInf => 1,
                });
                word.push(ElementaryAuto::symplectic_transvection(&ps, target, poly)?)?;
            }
        }
        if degree_product <= spec.degree_product_cap {
            return Ok(word);
        }
    }
}

/// A random polynomial over Q with bounded degree and term count.
pub fn random_poly(
    rng: &mut ChaCha8Rng,
    n_vars: usize,
    max_degree: u32,
    max_terms: usize,
    bound: i64,
) -> Poly {
    let n_terms = rng.gen_range(1..=max_terms);
    let mut f = Poly::zero(Q, n_vars);
    for _ in 0..n_terms {
        let d = rng.gen_range(0..=max_degree);
        let mut exps = vec![0u32; n_vars];
        let mut rest = d;
        for e in exps.iter_mut().take(n_vars - 1) {
            *e = rng.gen_range(0..=rest);
            rest -= *e;
        }
        exps[n_vars - 1] = rest;
        let c = nonzero_coeff(rng, bound);
        f = f
            .checked_add(&Poly::from_terms(Q, n_vars, vec![(Monomial::new(exps), c)]).unwrap())
            .unwrap();
    }
    f
}

/// A random hbar polynomial: up to two hbar orders with bounded coefficients.
pub fn random_hbar_poly(rng: &mut ChaCha8Rng, n_vars: usize, max_degree: u32) -> HbarPoly {
    let mut parts = Vec::new();
    parts.push((0u32, random_poly(rng, n_vars, max_degree, 3, 3)));
    if rng.gen_bool(0.3) {
        parts.push((rng.gen_range(1..=2), random_poly(rng, n_vars, max_degree.saturating_sub(1), 2, 2)));
    }
    HbarPoly::from_parts(n_vars, parts).unwrap()
}

/// A random normal-ordered Weyl element over Q[h].
pub fn random_weyl_elt(rng: &mut ChaCha8Rng, n: usize, max_degree: u32) -> WeylElt {
    let ring = WeylRing::q_hbar(n);
    let n_terms = rng.gen_range(1..=3);
    let mut out = WeylElt::zero(ring.clone());
    for _ in 0..n_terms {
        let dx = rng.gen_range(0..=max_degree);
        let dy = rng.gen_range(0..=max_degree.saturating_sub(dx).min(max_degree));
        let mut xe = vec![0u32; n];
        let mut ye = vec![0u32; n];
        let mut rest = dx;
        for e in xe.iter_mut() {
            *e = rng.gen_range(0..=rest);
            rest -= *e;
        }
        let mut rest = dy;
        for e in ye.iter_mut() {
            *e = rng.gen_range(0..=rest);
            rest -= *e;
        }
        let c = nonzero_coeff(rng, 3).convert_to(&ring.coeff).unwrap();
        out = out
            .checked_add(
                &WeylElt::monomial(ring.clone(), Monomial::new(xe), Monomial::new(ye), c).unwrap(),
            )
            .unwrap();
    }
    out
}

/// A near-identity symplectomorphism built as a composition of exact
/// monomial-Hamiltonian flows, together with the word that produced it.
pub fn random_flow_composition(
    rng: &mut ChaCha8Rng,
    n: usize,
    count: usize,
) -> Result<(Endo, TameWord)> {
    let ps = PoissonStructure::new(n);
    let nv = ps.n_vars();
    let mut word = TameWord::empty(Q, nv);
    for _ in 0..count {
        let d = rng.gen_range(3..=4);
        let c = nonzero_coeff(rng, 2);
        // single-variable or two-variable linear form
        let form = if rng.gen_bool(0.6) {
            Poly::var(Q, nv, rng.gen_range(0..nv))?
        } else {
            let i = rng.gen_range(0..nv);
            let mut j = rng.gen_range(0..nv);
            while j == i {
                j = rng.gen_range(0..nv);
            }
            Poly::var(Q, nv, i)?
                .checked_add(&Poly::var(Q, nv, j)?.scalar_mul(&nonzero_coeff(rng, 2))?)?
        };
        word.extend(&flow_word(&ps, &c, &form, d, 0)?)?;
    }
    let sigma = word.evaluate()?;
    Ok((sigma, word))
}

/// A random n = 1 truncated automorphism with y-free defects planted at a
/// random nonempty subset of orders 2..=4.
pub fn random_planted_auto(rng: &mut ChaCha8Rng, order: u32) -> Result<TruncatedAuto> {
    let mut defects = Vec::new();
    loop {
        for k in 2..=4u32 {
            if rng.gen_bool(0.6) {
                let deg = rng.gen_range(1..=4);
                let f = univariate_in(rng, 1, 0, (1, deg), 3);
                defects.push((k, f));
            }
        }
        if !defects.is_empty() {
            break;
        }
    }
    planted_auto(order, &defects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{elementary_is_symplectic, is_symplectomorphism};

    #[test]
    fn regeneration_is_identical() {
        let spec = CorpusSpec::symplectic_words(99, 2);
        let mut r1 = spec.rng();
        let mut r2 = spec.rng();
        let w1 = random_symplectic_word(&mut r1, &spec).unwrap();
        let w2 = random_symplectic_word(&mut r2, &spec).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn factors_are_symplectic() {
        let spec = CorpusSpec::symplectic_words(7, 1);
        let ps = PoissonStructure::new(1);
        let mut rng = spec.rng();
        for _ in 0..10 {
            let w = random_symplectic_word(&mut rng, &spec).unwrap();
            for e in w.factors() {
                assert!(elementary_is_symplectic(&ps, e).unwrap());
            }
        }
    }

    #[test]
    fn flow_compositions_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (sigma, word) = random_flow_composition(&mut rng, 1, 2).unwrap();
        let ps = PoissonStructure::new(1);
        assert!(is_symplectomorphism(&ps, &sigma).unwrap());
        assert_eq!(word.evaluate().unwrap(), sigma);
    }
}
