//! Constructive tame approximation: given a near-identity polynomial
//! symplectomorphism, produce a tame symplectic word agreeing with it to a
//! prescribed height.
//!
//! The loop factors out the linear part, then repeatedly extracts the lowest
//! homogeneous deviation, realizes it as a Hamiltonian field, splits the
//! Hamiltonian into powers of linear forms (Waring), and appends the exact
//! time-1 flow of each power as a short tame word. Every round strictly
//! increases the deviation height.
//!
//! Remainders are computed with compositions truncated above degree K+1;
//! for constant-free maps truncation only discards components of height
//! above the cutoff, so every reported height is exact.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::{Coeff, Q};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::monomial::Monomial;
use crate::poly::{Degree, Height, Poly};
use crate::symplectic::{
    poisson_bracket, ElementaryAuto, Endo, PoissonStructure, TameWord,
};

/// The lowest nonzero homogeneous part of sigma - id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Deviation {
    pub height: u32,
    pub parts: Vec<Poly>,
}

/// An exact decomposition H = sum c_m l_m^d into powers of linear forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WaringDecomp {
    pub degree: u32,
    pub terms: Vec<(Coeff, Poly)>,
}

impl WaringDecomp {
    /// Re-expand the decomposition; used to verify exactness.
    pub fn expand(&self, n_vars: usize) -> Result<Poly> {
        let mut acc = Poly::zero(Q, n_vars);
        for (c, form) in &self.terms {
            acc = acc.checked_add(&form.pow(self.degree).scalar_mul(c)?)?;
        }
        Ok(acc)
    }
}

/// The degree-1 coefficient matrix of a constant-free map; errors if the
/// constant part is nonzero or the matrix is not in Sp(2n).
pub fn linear_part(ps: &PoissonStructure, sigma: &Endo) -> Result<Mat> {
    let nv = ps.n_vars();
    if sigma.n_vars() != nv {
        return Err(Error::ArityMismatch { expected: nv, found: sigma.n_vars() });
    }
    for img in sigma.images() {
        if !img.homogeneous_component(0).is_zero() {
            return Err(Error::TranslationPresent);
        }
    }
    let ring = sigma.ring();
    let mut m = Mat::zero(ring, nv, nv);
    for (i, img) in sigma.images().iter().enumerate() {
        let lin = img.homogeneous_component(1);
        for (mono, c) in lin.terms() {
            let j = (0..nv).find(|&j| mono.exp(j) == 1).expect("degree-1 monomial");
            m.set(i, j, c.clone());
        }
    }
    let j = ps.j_matrix(ring);
    if m.mul(&j)?.mul(&m.transpose())? != j {
        return Err(Error::NotSymplecticLinear);
    }
    Ok(m)
}

/// Lowest nonzero homogeneous vector of sigma - id; requires the linear part
/// to be the identity, so the height is always >= 2.
pub fn deviation(sigma: &Endo) -> Result<Deviation> {
    let nv = sigma.n_vars();
    let id = Endo::identity(sigma.ring(), nv);
    let mut height = Height::Inf;
    let mut diffs = Vec::with_capacity(nv);
    for (img, idv) in sigma.images().iter().zip(id.images()) {
        let d = img.checked_sub(idv)?;
        height = height.min(d.height());
        diffs.push(d);
    }
    let k = match height {
        Height::Inf => return Err(Error::IsIdentity),
        Height::Finite(k) => k,
    };
    if k < 2 {
        return Err(Error::LinearPartNotIdentity);
    }
    let parts = diffs.iter().map(|d| d.homogeneous_component(k)).collect();
    Ok(Deviation { height: k, parts })
}

/// The homogeneous Hamiltonian H of degree k+1 with X_H = d, where
/// X_H(g) = {H, g}. Under the bracket table this means dH/dp_j = d_j and
/// dH/dx_j = -d_{n+j}, so Euler's formula gives the candidate
/// H = (1/(k+1)) sum_j (p_j d_j - x_j d_{n+j}); the construction is verified
/// by re-expanding the bracket, and failure of that check reports the input
/// as non-Hamiltonian.
pub fn hamiltonian_of(ps: &PoissonStructure, d: &Deviation) -> Result<Poly> {
    let n = ps.n();
    let nv = ps.n_vars();
    if d.parts.len() != nv {
        return Err(Error::ArityMismatch { expected: nv, found: d.parts.len() });
    }
    let mut h = Poly::zero(Q, nv);
    for j in 0..n {
        let pj = Poly::var(Q, nv, n + j)?;
        let xj = Poly::var(Q, nv, j)?;
        h = h.checked_add(&pj.checked_mul(&d.parts[j])?)?;
        h = h.checked_sub(&xj.checked_mul(&d.parts[n + j])?)?;
    }
    let denom = Q.from_i64(d.height as i64 + 1);
    let h = h.scalar_mul(&denom.inv()?)?;
    // verification by re-expansion of the field
    for j in 0..nv {
        let gen = Poly::var(Q, nv, j)?;
        let got = poisson_bracket(ps, &h, &gen)?;
        if got != d.parts[j] {
            return Err(Error::NonHamiltonian(format!(
                "closedness fails on generator {}",
                j
            )));
        }
    }
    Ok(h)
}

/// Decompose a homogeneous form of degree d over Q as an exact linear
/// combination of d-th powers of integer linear forms, by sampling forms
/// and solving the exact linear system. Pure powers short-circuit.
pub fn waring(h: &Poly, seed: u64) -> Result<WaringDecomp> {
    let nv = h.n_vars();
    let d = match h.degree() {
        Degree::NegInf => {
            return Ok(WaringDecomp { degree: 0, terms: Vec::new() });
        }
        Degree::Finite(d) => d,
    };
    if h.height() != Height::Finite(d) {
        return Err(Error::NonHamiltonian("Waring input must be homogeneous".into()));
    }
    // single-variable monomial: already a pure power
    if h.n_terms() == 1 {
        let (mono, c) = h.terms().next().expect("one term");
        let support: Vec<usize> = (0..nv).filter(|&i| mono.exp(i) > 0).collect();
        if support.len() == 1 && mono.exp(support[0]) == d {
            return Ok(WaringDecomp {
                degree: d,
                terms: vec![(c.clone(), Poly::var(Q, nv, support[0])?)],
            });
        }
    }
    let basis = monomial_basis(nv, d);
    let dim = basis.len();
    let target: Vec<Coeff> = basis.iter().map(|m| h.coeff_of(m)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms: Vec<Poly> = Vec::new();
    let mut columns: Vec<Vec<Coeff>> = Vec::new();
    const ROUNDS: usize = 12;
    for _ in 0..ROUNDS {
        for _ in 0..dim + 2 {
            let form = random_form(&mut rng, nv);
            let powered = form.pow(d);
            columns.push(basis.iter().map(|m| powered.coeff_of(m)).collect());
            forms.push(form);
        }
        let mut a = Mat::zero(Q, dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                a.set(i, j, v.clone());
            }
        }
        if let Some(sol) = a.solve_any(&target)? {
            let mut terms = Vec::new();
            for (c, form) in sol.into_iter().zip(&forms) {
                if !c.is_zero() {
                    terms.push((c, form.clone()));
                }
            }
            let decomp = WaringDecomp { degree: d, terms };
            debug_assert_eq!(decomp.expand(nv)?, *h);
            return Ok(decomp);
        }
    }
    Err(Error::SamplerExhausted { seed })
}

fn monomial_basis(nv: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nv];
    fill_basis(&mut out, &mut exps, 0, d);
    out
}

fn fill_basis(out: &mut Vec<Monomial>, exps: &mut Vec<u32>, i: usize, rest: u32) {
    if i + 1 == exps.len() {
        exps[i] = rest;
        out.push(Monomial::new(exps.clone()));
        return;
    }
    for e in 0..=rest {
        exps[i] = e;
        fill_basis(out, exps, i + 1, rest - e);
    }
    exps[i] = 0;
}

fn random_form(rng: &mut ChaCha8Rng, nv: usize) -> Poly {
    loop {
        let mut f = Poly::zero(Q, nv);
        for i in 0..nv {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                let term = Poly::var(Q, nv, i)
                    .expect("index in range")
                    .scalar_mul(&Q.from_i64(c))
                    .expect("same ring");
                f = f.checked_add(&term).expect("same ring");
            }
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// The exact time-1 Hamiltonian flow of c l^d as a tame word. For l a single
/// variable the flow is one transvection on the conjugate variable; for a
/// mixed form the word is [S^{-1}, E, S] with S a symplectic linear
/// completion whose first image is l. Along the flow of c l^d the form l is
/// constant, so the time-1 map is exactly id + X_{c l^d}.
pub fn flow_word(
    ps: &PoissonStructure,
    c: &Coeff,
    form: &Poly,
    d: u32,
    seed_note: u64,
) -> Result<TameWord> {
    let _ = seed_note;
    let n = ps.n();
    let nv = ps.n_vars();
    if form.is_zero() {
        return Err(Error::ZeroForm);
    }
    if form.n_vars() != nv || form.degree() != Degree::Finite(1) {
        return Err(Error::ArityMismatch { expected: nv, found: form.n_vars() });
    }
    let support: Vec<usize> = (0..nv)
        .filter(|&i| !form.coeff_of(&Monomial::var(nv, i)).is_zero())
        .collect();
    if support.len() == 1 {
        // flow of c (a x_i)^d: p_i -> p_i - c a^d d x_i^{d-1}; for l = a p_i
        // the sign flips through the bracket table.
        let i = support[0];
        let a = form.coeff_of(&Monomial::var(nv, i));
        let scale = c.mul(&a.pow(d)).mul(&Q.from_i64(d as i64));
        let (target, sign) = if i < n { (i + n, -1) } else { (i - n, 1) };
        let f = Poly::var(Q, nv, i)?
            .pow(d - 1)
            .scalar_mul(&scale.mul(&Q.from_i64(sign)))?;
        let e = ElementaryAuto::symplectic_transvection(ps, target, f)?;
        return TameWord::new(Q, nv, vec![e]);
    }
    // conjugate the x_1-monomial flow by a symplectic change of basis
    let s = symplectic_completion(ps, form)?;
    let s_inv = s.inverse()?;
    let f = Poly::var(Q, nv, 0)?
        .pow(d - 1)
        .scalar_mul(&c.mul(&Q.from_i64(d as i64)).neg())?;
    let e = ElementaryAuto::symplectic_transvection(ps, n, f)?;
    TameWord::new(
        Q,
        nv,
        vec![
            ElementaryAuto::linear(s_inv)?,
            e,
            ElementaryAuto::linear(s)?,
        ],
    )
}

/// Extend a nonzero linear form to a symplectic matrix whose first row is
/// the form's coefficient vector: rows (q_1..q_n, P_1..P_n) pair under
/// omega(u, v) = u J v^T exactly as the generators do.
pub fn symplectic_completion(ps: &PoissonStructure, form: &Poly) -> Result<Mat> {
    let n = ps.n();
    let nv = ps.n_vars();
    let j = ps.j_matrix(Q);
    let omega = |u: &[Coeff], v: &[Coeff]| -> Coeff {
        let mut acc = Q.zero();
        for a in 0..nv {
            for b in 0..nv {
                let c = ps.bracket_constant(a, b);
                if c != 0 {
                    acc = acc.add(&u[a].mul(&v[b]).mul(&Q.from_i64(c)));
                }
            }
        }
        acc
    };
    let coeff_vec: Vec<Coeff> = (0..nv).map(|i| form.coeff_of(&Monomial::var(nv, i))).collect();
    let mut pool: Vec<Vec<Coeff>> = Vec::new();
    pool.push(coeff_vec);
    for i in 0..nv {
        let mut e = vec![Q.zero(); nv];
        e[i] = Q.one();
        pool.push(e);
    }
    let mut q_rows: Vec<Vec<Coeff>> = Vec::new();
    let mut p_rows: Vec<Vec<Coeff>> = Vec::new();
    while q_rows.len() < n {
        let a_idx = pool
            .iter()
            .position(|v| v.iter().any(|c| !c.is_zero()))
            .ok_or(Error::SingularMatrix)?;
        let a = pool.remove(a_idx);
        let b_idx = pool
            .iter()
            .position(|v| !omega(&a, v).is_zero())
            .ok_or(Error::SingularMatrix)?;
        let b_raw = pool.remove(b_idx);
        // normalize so omega(a, b) = b(q_i, p_i) = -1
        let w = omega(&a, &b_raw);
        let scale = w.neg().inv()?;
        let b: Vec<Coeff> = b_raw.iter().map(|c| c.mul(&scale)).collect();
        // project the rest of the pool onto the omega-complement of (a, b):
        // z' = z + omega(z, b) a - omega(z, a) b  (uses omega(a, b) = -1)
        for z in pool.iter_mut() {
            let za = omega(z, &a);
            let zb = omega(z, &b);
            for t in 0..nv {
                let corr = zb.mul(&a[t]).sub(&za.mul(&b[t]));
                z[t] = z[t].add(&corr);
            }
        }
        pool.retain(|z| z.iter().any(|c| !c.is_zero()));
        q_rows.push(a);
        p_rows.push(b);
    }
    let mut rows = q_rows;
    rows.extend(p_rows);
    let s = Mat::from_rows(Q, rows)?;
    debug_assert_eq!(s.mul(&j).unwrap().mul(&s.transpose()).unwrap(), j);
    Ok(s)
}

/// The certified height of tame_evaluate(invert(tau)) o sigma - id.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AchievedHeight {
    /// The height computed exactly (possibly infinite: exact word match).
    Exact(Height),
    /// No nonzero component at or below the stated bound; the exact height
    /// is at least this value, but full expansion was not affordable.
    AtLeast(u32),
}

impl AchievedHeight {
    pub fn exceeds(&self, k: u32) -> bool {
        match self {
            AchievedHeight::Exact(h) => *h > Height::Finite(k),
            AchievedHeight::AtLeast(m) => *m > k,
        }
    }
}

/// A tame word approximating a target symplectomorphism, with its height
/// certificate and the per-round deviation heights of the construction loop.
#[derive(Clone, Debug)]
pub struct ApproxResult {
    pub word: TameWord,
    pub achieved: AchievedHeight,
    pub target: u32,
    pub seed: u64,
    /// Deviation height processed in each round.
    pub rounds: Vec<u32>,
    /// Word length after each round, for partial-word certificates.
    pub round_word_lens: Vec<usize>,
}

/// Recompute the certificate height from scratch: the remainder is built by
/// truncated composition with cutoff target+1, which is exact at every
/// height it can report; when the truncated remainder is clean and the word
/// is small enough, a full exact composition decides between a finite bound
/// and an exact infinity.
pub fn certify(sigma: &Endo, word: &TameWord, target: u32) -> Result<AchievedHeight> {
    let cutoff = target + 1;
    let inv = word.invert()?;
    let mut rem = sigma.clone();
    for e in inv.factors().iter().rev() {
        // remainder = e_k^{-1} o ... o e_1^{-1} o sigma, folded right to left
        rem = e.to_endo().compose_truncated(&rem, cutoff)?;
    }
    let id = Endo::identity(sigma.ring(), sigma.n_vars());
    let mut h = Height::Inf;
    for (f, g) in rem.images().iter().zip(id.images()) {
        h = h.min(f.checked_sub(g)?.height());
    }
    if let Height::Finite(k) = h {
        return Ok(AchievedHeight::Exact(Height::Finite(k)));
    }
    // clean up to the cutoff; attempt a budgeted exact composition
    if let Some(exact) = exact_remainder_budgeted(sigma, &inv, 40, 20_000)? {
        let mut h = Height::Inf;
        for (f, g) in exact.images().iter().zip(id.images()) {
            h = h.min(f.checked_sub(g)?.height());
        }
        return Ok(AchievedHeight::Exact(h));
    }
    Ok(AchievedHeight::AtLeast(cutoff + 1))
}

fn exact_remainder_budgeted(
    sigma: &Endo,
    inv: &TameWord,
    max_factors: usize,
    max_terms: usize,
) -> Result<Option<Endo>> {
    if inv.len() > max_factors {
        return Ok(None);
    }
    let mut rem = sigma.clone();
    for e in inv.factors().iter().rev() {
        rem = e.to_endo().compose(&rem)?;
        if rem.images().iter().map(|f| f.n_terms()).sum::<usize>() > max_terms {
            return Ok(None);
        }
    }
    Ok(Some(rem))
}

/// The approximation loop. `sigma` must be symplectic with zero constant
/// part and symplectic linear part; non-symplectic inputs surface as
/// NonHamiltonian once the deviation fails closedness.
pub fn approximate(
    ps: &PoissonStructure,
    sigma: &Endo,
    target: u32,
    seed: u64,
) -> Result<ApproxResult> {
    let nv = ps.n_vars();
    if sigma.n_vars() != nv {
        return Err(Error::ArityMismatch { expected: nv, found: sigma.n_vars() });
    }
    let cutoff = target + 1;
    let lin = linear_part(ps, sigma)?;
    let mut word = TameWord::empty(Q, nv);
    if !lin.is_identity() {
        word.push(ElementaryAuto::linear(lin)?)?;
    }
    let mut rounds = Vec::new();
    let mut round_word_lens = Vec::new();
    let mut waring_seed = seed;
    loop {
        let rem = truncated_remainder(sigma, &word, cutoff)?;
        let h = crate::symplectic::height_of(&rem, &Endo::identity(Q, nv))?;
        match h {
            Height::Inf => break,
            Height::Finite(k) if k > target => break,
            Height::Finite(k) => {
                if let Some(&prev) = rounds.last() {
                    assert!(k > prev, "deviation height must strictly increase");
                }
                rounds.push(k);
                let dev = deviation(&rem)?;
                debug_assert_eq!(dev.height, k);
                let ham = hamiltonian_of(ps, &dev)?;
                let decomp = waring(&ham, waring_seed)?;
                waring_seed = waring_seed.wrapping_add(1);
                for (c, form) in &decomp.terms {
                    let fw = flow_word(ps, c, form, dev.height + 1, seed)?;
                    word.extend(&fw)?;
                }
                round_word_lens.push(word.len());
            }
        }
        assert!(
            rounds.len() as u32 <= target + 1,
            "approximation loop exceeded its round budget"
        );
    }
    let achieved = certify(sigma, &word, target)?;
    assert!(achieved.exceeds(target), "certificate must exceed the target height");
    Ok(ApproxResult { word, achieved, target, seed, rounds, round_word_lens })
}

/// tame_evaluate(invert(word)) o sigma, all compositions truncated at the
/// cutoff degree.
pub fn truncated_remainder(sigma: &Endo, word: &TameWord, cutoff: u32) -> Result<Endo> {
    let inv = word.invert()?;
    let mut rem = sigma.clone();
    for e in inv.factors().iter().rev() {
        rem = e.to_endo().compose_truncated(&rem, cutoff)?;
    }
    Ok(rem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{is_symplectomorphism, jacobian_is_unit_constant};

    fn ps1() -> PoissonStructure {
        PoissonStructure::new(1)
    }

    fn xv(i: usize) -> Poly {
        Poly::var(Q, 2, i).unwrap()
    }

    #[test]
    fn linear_part_cases() {
        let ps = ps1();
        // id + higher -> identity matrix
        let sigma = Endo::new(vec![&xv(0) + &xv(1).pow(3), xv(1)]).unwrap();
        assert!(linear_part(&ps, &sigma).unwrap().is_identity());
        // diag(2, 1/2) is symplectic
        let half = Q
            .from_rational(&BigRational::new(BigInt::from(1), BigInt::from(2)))
            .unwrap();
        let sigma2 = Endo::new(vec![
            xv(0).scalar_mul(&Q.from_i64(2)).unwrap(),
            xv(1).scalar_mul(&half).unwrap(),
        ])
        .unwrap();
        assert!(!linear_part(&ps, &sigma2).unwrap().is_identity());
        // (2x, p) is not
        let sigma3 =
            Endo::new(vec![xv(0).scalar_mul(&Q.from_i64(2)).unwrap(), xv(1)]).unwrap();
        assert!(matches!(linear_part(&ps, &sigma3), Err(Error::NotSymplecticLinear)));
        // translations rejected
        let sigma4 = Endo::new(vec![&xv(0) + &Poly::one(Q, 2), xv(1)]).unwrap();
        assert!(matches!(linear_part(&ps, &sigma4), Err(Error::TranslationPresent)));
    }

    #[test]
    fn deviation_cases() {
        let sigma = Endo::new(vec![&xv(0) + &xv(1).pow(2), xv(1)]).unwrap();
        let d = deviation(&sigma).unwrap();
        assert_eq!(d.height, 2);
        assert_eq!(d.parts[0], xv(1).pow(2));
        assert!(d.parts[1].is_zero());
        // minimum over coordinates
        let sigma2 = Endo::new(vec![
            &(&xv(0) + &xv(1).pow(2)) + &xv(1).pow(3),
            &xv(1) + &xv(0).pow(3),
        ])
        .unwrap();
        let d2 = deviation(&sigma2).unwrap();
        assert_eq!(d2.height, 2);
        assert_eq!(d2.parts[0], xv(1).pow(2));
        assert!(d2.parts[1].is_zero());
        assert!(matches!(deviation(&Endo::identity(Q, 2)), Err(Error::IsIdentity)));
    }

    #[test]
    fn hamiltonian_solves_field() {
        let ps = ps1();
        // d = (p^2, 0) gives H = p^3/3: {H, x} = p^2, {H, p} = 0
        let d = Deviation { height: 2, parts: vec![xv(1).pow(2), Poly::zero(Q, 2)] };
        let h = hamiltonian_of(&ps, &d).unwrap();
        let third = Q
            .from_rational(&BigRational::new(BigInt::from(1), BigInt::from(3)))
            .unwrap();
        assert_eq!(h, xv(1).pow(3).scalar_mul(&third).unwrap());
        assert_eq!(poisson_bracket(&ps, &h, &xv(0)).unwrap(), xv(1).pow(2));
        assert!(poisson_bracket(&ps, &h, &xv(1)).unwrap().is_zero());
        // d = (0, -3x^2) gives H = x^3
        let d2 = Deviation {
            height: 2,
            parts: vec![Poly::zero(Q, 2), xv(0).pow(2).scalar_mul(&Q.from_i64(-3)).unwrap()],
        };
        assert_eq!(hamiltonian_of(&ps, &d2).unwrap(), xv(0).pow(3));
        // a non-closed deviation is rejected
        let bad = Deviation { height: 2, parts: vec![xv(0).pow(2), Poly::zero(Q, 2)] };
        assert!(matches!(hamiltonian_of(&ps, &bad), Err(Error::NonHamiltonian(_))));
    }

    #[test]
    fn waring_reference_identity() {
        // x^2 p = ((p+x)^3 + (p-x)^3 - 2p^3)/6 is one witness; any verified
        // decomposition is acceptable, so only exactness is asserted.
        let h = xv(0).pow(2).checked_mul(&xv(1)).unwrap();
        let w = waring(&h, 7).unwrap();
        assert_eq!(w.expand(2).unwrap(), h);
        assert!(w.terms.len() >= 2);
        // pure powers short-circuit
        let pure = waring(&xv(0).pow(3), 7).unwrap();
        assert_eq!(pure.terms.len(), 1);
        assert_eq!(pure.terms[0].1, xv(0));
        // zero gives the empty decomposition
        assert!(waring(&Poly::zero(Q, 2), 7).unwrap().terms.is_empty());
    }

    #[test]
    fn flow_words_match_fields() {
        let ps = ps1();
        // flow of x^3: p -> p - 3x^2
        let w = flow_word(&ps, &Q.one(), &xv(0), 3, 0).unwrap();
        assert_eq!(w.len(), 1);
        let e = w.evaluate().unwrap();
        assert_eq!(e.image(0), &xv(0));
        assert_eq!(
            e.image(1),
            &(&xv(1) - &xv(0).pow(2).scalar_mul(&Q.from_i64(3)).unwrap())
        );
        // flow of p^2: x -> x + 2p
        let w2 = flow_word(&ps, &Q.one(), &xv(1), 2, 0).unwrap();
        let e2 = w2.evaluate().unwrap();
        assert_eq!(e2.image(0), &(&xv(0) + &xv(1).scalar_mul(&Q.from_i64(2)).unwrap()));
        assert_eq!(e2.image(1), &xv(1));
        // mixed form: evaluation equals id + X_{(x+p)^d}
        let form = &xv(0) + &xv(1);
        let d = 3u32;
        let w3 = flow_word(&ps, &Q.one(), &form, d, 0).unwrap();
        let e3 = w3.evaluate().unwrap();
        for e in w3.factors() {
            assert!(crate::symplectic::elementary_is_symplectic(&ps, e).unwrap());
        }
        // X_H(x) = dH/dp, X_H(p) = -dH/dx for H = (x+p)^3
        let ham = form.pow(d);
        let expected_x = &xv(0) + &ham.partial_derivative(1).unwrap();
        let expected_p = &xv(1) - &ham.partial_derivative(0).unwrap();
        assert_eq!(e3.image(0), &expected_x);
        assert_eq!(e3.image(1), &expected_p);
    }

    #[test]
    fn completion_first_row_is_form() {
        let ps = PoissonStructure::new(2);
        let form = Poly::var(Q, 4, 0)
            .unwrap()
            .checked_add(
                &Poly::var(Q, 4, 3)
                    .unwrap()
                    .scalar_mul(&Q.from_i64(2))
                    .unwrap(),
            )
            .unwrap();
        let s = symplectic_completion(&ps, &form).unwrap();
        assert_eq!(s.get(0, 0), &Q.one());
        assert_eq!(s.get(0, 3), &Q.from_i64(2));
        let j = ps.j_matrix(Q);
        assert_eq!(s.mul(&j).unwrap().mul(&s.transpose()).unwrap(), j);
    }

    #[test]
    fn approximate_exact_flow() {
        // sigma = (x, p - 3x^2) is the exact flow of x^3: single factor,
        // achieved height infinite.
        let ps = ps1();
        let sigma = Endo::new(vec![
            xv(0),
            &xv(1) - &xv(0).pow(2).scalar_mul(&Q.from_i64(3)).unwrap(),
        ])
        .unwrap();
        let res = approximate(&ps, &sigma, 8, 42).unwrap();
        assert_eq!(res.word.len(), 1);
        assert_eq!(res.achieved, AchievedHeight::Exact(Height::Inf));
    }

    #[test]
    fn approximate_composed_flows() {
        let ps = ps1();
        // composition of two monomial flows with a mixed remainder
        let w1 = flow_word(&ps, &Q.one(), &xv(0), 3, 0).unwrap();
        let w2 = flow_word(&ps, &Q.from_i64(2), &xv(1), 3, 0).unwrap();
        let mut w = w1.clone();
        w.extend(&w2).unwrap();
        let sigma = w.evaluate().unwrap();
        assert!(is_symplectomorphism(&ps, &sigma).unwrap());
        let res = approximate(&ps, &sigma, 5, 11).unwrap();
        assert!(res.achieved.exceeds(5));
        // certificate is recomputed from scratch and sound
        let recheck = certify(&sigma, &res.word, 5).unwrap();
        assert!(recheck.exceeds(5));
        // every factor is elementary symplectic and the evaluation is a
        // unit-Jacobian symplectomorphism
        for e in res.word.factors() {
            assert!(crate::symplectic::elementary_is_symplectic(&ps, e).unwrap());
        }
        let eval = res.word.evaluate_truncated(6).unwrap();
        let _ = eval;
        assert!(jacobian_is_unit_constant(&sigma).unwrap());
        // strictly increasing rounds
        for pair in res.rounds.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }
}
