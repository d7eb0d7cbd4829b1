//! The aggregated property suite: one function per acceptance-level check,
//! shared by the `suite` CLI subcommand and the acceptance test target.
//! Every comparison is exact; failures carry a reproducible description.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::approx::{approximate, certify, truncated_remainder};
use crate::coeff::{fp, qh_trunc, Q};
use crate::corpus::{
    random_flow_composition, random_hbar_poly, random_planted_auto, random_poly,
    random_symplectic_word, random_weyl_elt, CorpusSpec,
};
use crate::error::Result;
use crate::gauge::{defect_order, gauge_conjugate, GaugeElt};
use crate::lift::{classical_limit, hbar_coefficient, lift_tame};
use crate::monomial::Monomial;
use crate::poly::{Degree, Height, Poly, VarNames};
use crate::reference::{jacobian_det_permutation, naive_weyl_mul};
use crate::star::{
    hbar_poly_from_weyl, ordering_transform, star, HbarPoly, StarOrdering, TransformDirection,
};
use crate::symplectic::{
    distance, height_of, is_symplectomorphism, jacobian_is_unit_constant, nagata, nagata_delta,
    poisson_bracket, Endo, PoissonStructure, TameWord,
};
use crate::weyl::{
    frobenius_twist, induced_poisson_bracket, restrict_to_center, WeylElt, WeylRing,
};

/// Outcome of one property check.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl PropertyReport {
    fn new(name: &'static str) -> PropertyReport {
        PropertyReport { name, cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 8 {
            self.failures.push(describe());
        }
    }
}

fn corpus_words(seed: u64) -> Vec<(PoissonStructure, TameWord)> {
    let mut out = Vec::with_capacity(100);
    for (n, count) in [(1usize, 50usize), (2, 50)] {
        let spec = CorpusSpec::symplectic_words(seed ^ n as u64, n);
        let mut rng = spec.rng();
        for _ in 0..count {
            let w = random_symplectic_word(&mut rng, &spec).expect("corpus word");
            out.push((PoissonStructure::new(n), w));
        }
    }
    out
}

/// Criterion 1: every corpus evaluation is a unit-Jacobian symplectomorphism.
pub fn check_bracket_jacobian(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("bracket_jacobian");
    for (idx, (ps, w)) in corpus_words(seed).iter().enumerate() {
        let sigma = w.evaluate()?;
        let symp = is_symplectomorphism(ps, &sigma)?;
        let jac = jacobian_is_unit_constant(&sigma)?;
        report.check(symp && jac, || {
            format!("word {}: symplectic={} jacobian_one={}", idx, symp, jac)
        });
    }
    Ok(report)
}

/// Criterion 2: classical_limit(lift(w)) = evaluate(w) and the lift passes
/// the Weyl relation check, on the same corpus.
pub fn check_lift_round_trip(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("lift_round_trip");
    for (idx, (ps, w)) in corpus_words(seed).iter().enumerate() {
        let lifted = lift_tame(ps, w)?;
        let relations = lifted.check()?;
        let round = classical_limit(&lifted)? == w.evaluate()?;
        report.check(relations && round, || {
            format!("word {}: relations={} round_trip={}", idx, relations, round)
        });
    }
    Ok(report)
}

/// Criterion 3: star-product associativity (both orderings), the
/// first-order Moyal correspondence with the Poisson bracket, and the
/// ordering-transform intertwining contract.
pub fn check_star_products(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("star_products");
    for n in [1usize, 2] {
        let nv = 2 * n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x57a5 + n as u64));
        for case in 0..100 {
            let f = random_hbar_poly(&mut rng, nv, 4);
            let g = random_hbar_poly(&mut rng, nv, 4);
            let h = random_hbar_poly(&mut rng, nv, 4);
            for ord in [StarOrdering::Normal, StarOrdering::Moyal] {
                let lhs = star(&star(&f, &g, ord)?, &h, ord)?;
                let rhs = star(&f, &star(&g, &h, ord)?, ord)?;
                report.check(lhs == rhs, || {
                    format!("associativity n={} case={} ord={:?}", n, case, ord)
                });
            }
        }
        let ps = PoissonStructure::new(n);
        for case in 0..50 {
            let f = random_poly(&mut rng, nv, 4, 3, 3);
            let g = random_poly(&mut rng, nv, 4, 3, 3);
            let hf = HbarPoly::from_poly(f.clone());
            let hg = HbarPoly::from_poly(g.clone());
            let comm = star(&hf, &hg, StarOrdering::Moyal)?
                .checked_sub(&star(&hg, &hf, StarOrdering::Moyal)?)?;
            let br = poisson_bracket(&ps, &f, &g)?;
            report.check(comm.hbar_coeff(1) == br, || {
                format!("first-order n={} case={}", n, case)
            });
        }
        for case in 0..25 {
            let f = random_hbar_poly(&mut rng, nv, 3);
            let g = random_hbar_poly(&mut rng, nv, 3);
            let tf = ordering_transform(&f, TransformDirection::NormalToMoyal)?;
            let tg = ordering_transform(&g, TransformDirection::NormalToMoyal)?;
            let lhs = ordering_transform(
                &star(&tf, &tg, StarOrdering::Moyal)?,
                TransformDirection::MoyalToNormal,
            )?;
            let rhs = star(&f, &g, StarOrdering::Normal)?;
            report.check(lhs == rhs, || format!("intertwining n={} case={}", n, case));
        }
    }
    Ok(report)
}

/// Criterion 4: the closed-form normal-ordering product agrees with the
/// word-by-word rewriting oracle.
pub fn check_weyl_oracle(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("weyl_oracle");
    for n in [1usize, 2] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xe41 + n as u64));
        for case in 0..50 {
            let u = random_weyl_elt(&mut rng, n, 4);
            let v = random_weyl_elt(&mut rng, n, 4);
            let fast = u.checked_mul(&v)?;
            let slow = naive_weyl_mul(&u, &v)?;
            report.check(fast == slow, || format!("weyl_mul n={} case={}", n, case));
        }
    }
    Ok(report)
}

/// Criterion 5: x_i^p and y_i^p are central and the induced bracket on the
/// center reproduces the classical pairing, for p in {2, 3, 5}, n in {1, 2}.
pub fn check_char_p_center() -> Result<PropertyReport> {
    let mut report = PropertyReport::new("char_p_center");
    for p in [2u64, 3, 5] {
        for n in [1usize, 2] {
            let ring = WeylRing::fp(n, p);
            for i in 0..n {
                let xp = WeylElt::x_gen(ring.clone(), i)?.pow(p as u32)?;
                let yp = WeylElt::y_gen(ring.clone(), i)?.pow(p as u32)?;
                report.check(xp.is_central()?, || format!("x_{}^{} central p={} n={}", i, p, p, n));
                report.check(yp.is_central()?, || format!("y_{}^{} central p={} n={}", i, p, p, n));
            }
            let fpring = fp(p);
            for i in 0..n {
                for j in 0..n {
                    let yc = Poly::var(fpring, 2 * n, n + i)?;
                    let xc = Poly::var(fpring, 2 * n, j)?;
                    let br = induced_poisson_bracket(&yc, &xc, p)?;
                    let expected = if i == j {
                        Poly::one(fpring, 2 * n)
                    } else {
                        Poly::zero(fpring, 2 * n)
                    };
                    report.check(br == expected, || {
                        format!("induced bracket (Y_{}, X_{}) p={} n={}: got {}", i, j, p, n, br)
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Extra center laws: antisymmetry and Leibniz for the induced bracket on
/// random central elements.
pub fn check_center_bracket_laws(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("center_bracket_laws");
    for p in [2u64, 3] {
        let fpring = fp(p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xce0 + p));
        for case in 0..12 {
            let nv = 2;
            let rand_central = |rng: &mut ChaCha8Rng| {
                let f = random_poly(rng, nv, 2, 2, 2);
                f.map_coeffs(fpring, |c| {
                    fpring.from_rational(c.as_rational().unwrap())
                })
                .unwrap()
            };
            let a = rand_central(&mut rng);
            let b = rand_central(&mut rng);
            let c = rand_central(&mut rng);
            let ab = induced_poisson_bracket(&a, &b, p)?;
            let ba = induced_poisson_bracket(&b, &a, p)?;
            report.check(ab == ba.negate(), || format!("antisymmetry p={} case={}", p, case));
            // Leibniz: {a, bc} = {a,b} c + b {a,c}
            let bc = b.checked_mul(&c)?;
            let lhs = induced_poisson_bracket(&a, &bc, p)?;
            let rhs = induced_poisson_bracket(&a, &b, p)?
                .checked_mul(&c)?
                .checked_add(&b.checked_mul(&induced_poisson_bracket(&a, &c, p)?)?)?;
            report.check(lhs == rhs, || format!("Leibniz p={} case={}", p, case));
        }
    }
    Ok(report)
}

/// Criterion 6: the center restriction of the reduced lift equals the
/// Frobenius twist of the classical evaluation, and restriction is
/// functorial over composition.
pub fn check_direct_homomorphism(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("direct_homomorphism");
    let mut words = Vec::new();
    for (n, count) in [(1usize, 13usize), (2, 12)] {
        let spec = CorpusSpec::integer_words(seed ^ (0xd17 + n as u64), n);
        let mut rng = spec.rng();
        for _ in 0..count {
            words.push((PoissonStructure::new(n), random_symplectic_word(&mut rng, &spec)?));
        }
    }
    for p in [2u64, 3] {
        for (idx, (ps, w)) in words.iter().enumerate() {
            let lifted = lift_tame(ps, w)?;
            let reduced = lifted.reduce_mod_p(p)?;
            let center = restrict_to_center(&reduced, p)?;
            let twist = frobenius_twist(&w.evaluate()?, p)?;
            report.check(center == twist, || {
                format!("center map vs twist: word {} p={}", idx, p)
            });
        }
        // functoriality on consecutive pairs with matching arity
        for pair in words.chunks(2) {
            if pair.len() < 2 || pair[0].0 != pair[1].0 {
                continue;
            }
            let (ps, w1) = &pair[0];
            let (_, w2) = &pair[1];
            let l1 = lift_tame(ps, w1)?.reduce_mod_p(p)?;
            let l2 = lift_tame(ps, w2)?.reduce_mod_p(p)?;
            let composed = l1.compose(&l2)?;
            let lhs = restrict_to_center(&composed, p)?;
            let rhs = restrict_to_center(&l1, p)?.compose(&restrict_to_center(&l2, p)?)?;
            report.check(lhs == rhs, || format!("functoriality p={}", p));
        }
    }
    Ok(report)
}

/// Criterion 7: the approximation loop reaches height > 6 on seeded
/// flow-composition targets, with an independently recomputed certificate
/// and the partial-word metric bound d(tau_k, sigma) <= e^{-k}.
pub fn check_approximation(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("approximation");
    let target = 6u32;
    let mut case = 0usize;
    for n in [1usize, 2] {
        let ps = PoissonStructure::new(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xa11 + n as u64));
        for _ in 0..10 {
            let (sigma, _) = random_flow_composition(&mut rng, n, 2)?;
            let res = approximate(&ps, &sigma, target, seed.wrapping_add(case as u64))?;
            report.check(res.achieved.exceeds(target), || {
                format!("case {}: achieved {:?}", case, res.achieved)
            });
            let recheck = certify(&sigma, &res.word, target)?;
            report.check(recheck.exceeds(target), || {
                format!("case {}: recomputed certificate {:?}", case, recheck)
            });
            // strictly increasing rounds and the metric bound per round
            for pair in res.rounds.windows(2) {
                report.check(pair[1] > pair[0], || {
                    format!("case {}: non-monotone rounds {:?}", case, res.rounds)
                });
            }
            for (round, (&k, &len)) in
                res.rounds.iter().zip(&res.round_word_lens).enumerate()
            {
                let mut partial = TameWord::empty(Q, 2 * n);
                for e in res.word.factors()[..len].iter() {
                    partial.push(e.clone())?;
                }
                let tau = partial.evaluate_truncated(target + 1)?;
                let sigma_trunc = Endo::new(
                    sigma
                        .images()
                        .iter()
                        .map(|f| f.truncate_degree(target + 1))
                        .collect(),
                )?;
                let d = distance(&tau, &sigma_trunc)?;
                report.check(d.at_most_exp_neg(k), || {
                    format!("case {} round {}: d > e^-{}", case, round, k)
                });
            }
            // every produced factor is elementary symplectic
            for e in res.word.factors() {
                report.check(
                    crate::symplectic::elementary_is_symplectic(&ps, e)?,
                    || format!("case {}: non-symplectic factor", case),
                );
            }
            case += 1;
        }
    }
    Ok(report)
}

/// Criterion 8: gauge normalization clears all y-free defects up to the
/// truncation order with strictly increasing defect orders, and conjugation
/// preserves the truncated relations.
pub fn check_gauge_normalization(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("gauge_normalization");
    let order = 6u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9a93);
    for case in 0..20 {
        let psi = random_planted_auto(&mut rng, order)?;
        let (gauges, result) = crate::gauge::normalize(&psi)?;
        report.check(defect_order(&result)?.is_none(), || {
            format!("case {}: defect remains after normalization", case)
        });
        // replay the gauges and watch the defect order strictly increase
        let mut current = psi.clone();
        let mut last = 0u32;
        let mut monotone = true;
        for g in &gauges {
            let Some(k) = defect_order(&current)? else {
                monotone = false;
                break;
            };
            if k <= last {
                monotone = false;
                break;
            }
            last = k;
            current = gauge_conjugate(&current, g)?;
        }
        report.check(monotone, || format!("case {}: defect order not increasing", case));
        // conjugation by a random gauge preserves the truncated relations
        let q = GaugeElt::new(
            WeylElt::monomial(
                psi.ring().clone(),
                Monomial::new(vec![rng.gen_range(0..3)]),
                Monomial::new(vec![rng.gen_range(0..2)]),
                qh_trunc(order).from_i64(rng.gen_range(1..=2)),
            )?,
        )?;
        let conj = gauge_conjugate(&psi, &q)?;
        report.check(conj.as_weyl_auto().check()?, || {
            format!("case {}: conjugation broke the relations", case)
        });
    }
    Ok(report)
}

/// Criterion 9: on corpus words with Deg sigma >= 2, every first-order hbar
/// coefficient of the lift has total degree strictly below Deg sigma.
pub fn check_lemma3_degree(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("lemma3_degree");
    for (idx, (ps, w)) in corpus_words(seed).iter().enumerate() {
        let sigma = w.evaluate()?;
        let deg = sigma
            .images()
            .iter()
            .map(|f| match f.degree() {
                Degree::Finite(d) => d,
                Degree::NegInf => 0,
            })
            .max()
            .unwrap_or(0);
        if deg < 2 {
            continue;
        }
        let lifted = lift_tame(ps, w)?;
        for l in 0..2 * ps.n() {
            let c1 = hbar_coefficient(&lifted, l, 1)?;
            let ok = match c1.degree() {
                Degree::NegInf => true,
                Degree::Finite(d) => d < deg,
            };
            report.check(ok, || {
                format!(
                    "word {} image {}: deg(h^1 coeff) = {} not < Deg sigma = {}",
                    idx,
                    l,
                    c1.degree(),
                    deg
                )
            });
        }
    }
    Ok(report)
}

/// Criterion 10: the corrected Nagata map has an exact inverse, unit
/// Jacobian by two determinant routes, and preserves its defining quadric.
pub fn check_nagata() -> Result<PropertyReport> {
    let mut report = PropertyReport::new("nagata");
    let (phi, phi_inv) = nagata();
    let delta = nagata_delta();
    report.check(
        crate::symplectic::is_automorphism_certificate(&phi, &phi_inv)?,
        || "inverse composition is not the identity".to_string(),
    );
    let jac = crate::poly::jacobian_det(phi.images())?;
    report.check(jac.is_one(), || format!("jacobian = {}", jac.to_text(VarNames::Plain)));
    let jac_oracle = jacobian_det_permutation(phi.images())?;
    report.check(jac == jac_oracle, || "determinant routes disagree".to_string());
    report.check(phi.apply(&delta)? == delta, || "delta is not invariant".to_string());
    Ok(report)
}

/// Kernel ring laws on randomized triples over all coefficient rings.
pub fn check_ring_laws(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("kernel_ring_laws");
    let rings = [Q, fp(5), crate::coeff::zp2(3), qh_trunc(3)];
    for (ridx, ring) in rings.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x717 + ridx as u64));
        for case in 0..25 {
            let rp = |rng: &mut ChaCha8Rng| {
                let f = random_poly(rng, 3, 3, 3, 4);
                f.map_coeffs(*ring, |c| c.convert_to(ring)).unwrap()
            };
            let f = rp(&mut rng);
            let g = rp(&mut rng);
            let h = rp(&mut rng);
            let assoc = f.checked_mul(&g)?.checked_mul(&h)? == f.checked_mul(&g.checked_mul(&h)?)?;
            let distrib = f.checked_mul(&g.checked_add(&h)?)?
                == f.checked_mul(&g)?.checked_add(&f.checked_mul(&h)?)?;
            let comm = f.checked_mul(&g)? == g.checked_mul(&f)?;
            report.check(assoc && distrib && comm, || {
                format!("ring {} case {}: assoc={} distrib={} comm={}", ring, case, assoc, distrib, comm)
            });
            // Leibniz for the derivative
            let fg = f.checked_mul(&g)?;
            let lhs = fg.partial_derivative(0)?;
            let rhs = f
                .partial_derivative(0)?
                .checked_mul(&g)?
                .checked_add(&f.checked_mul(&g.partial_derivative(0)?)?)?;
            report.check(lhs == rhs, || format!("Leibniz ring {} case {}", ring, case));
        }
    }
    // degree/height multiplicativity over Q
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xde6);
    for case in 0..25 {
        let f = random_poly(&mut rng, 2, 4, 3, 3);
        let g = random_poly(&mut rng, 2, 4, 3, 3);
        let fg = f.checked_mul(&g)?;
        let (Degree::Finite(df), Degree::Finite(dg), Degree::Finite(dfg)) =
            (f.degree(), g.degree(), fg.degree())
        else {
            continue;
        };
        report.check(dfg == df + dg, || format!("degree multiplicativity case {}", case));
        let (Height::Finite(hf), Height::Finite(hg), Height::Finite(hfg)) =
            (f.height(), g.height(), fg.height())
        else {
            continue;
        };
        report.check(hfg == hf + hg, || format!("height multiplicativity case {}", case));
        report.check(
            f.height() <= Height::Finite(df),
            || format!("height/degree order case {}", case),
        );
    }
    Ok(report)
}

/// Metric axioms and the ultrametric inequality on randomized endomorphism
/// triples, plus near-identity composition heights.
pub fn check_metric_laws(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("metric_laws");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3e7);
    for case in 0..30 {
        let nv = 2;
        let re = |rng: &mut ChaCha8Rng| -> Result<Endo> {
            let mut images = Vec::new();
            for i in 0..nv {
                let mut f = Poly::var(Q, nv, i)?;
                if rng.gen_bool(0.8) {
                    f = f.checked_add(&random_poly(rng, nv, 3, 2, 2))?;
                }
                images.push(f);
            }
            Endo::new(images)
        };
        let a = re(&mut rng)?;
        let b = re(&mut rng)?;
        let c = re(&mut rng)?;
        // identity of indiscernibles
        report.check(
            (height_of(&a, &b)? == Height::Inf) == (a == b),
            || format!("indiscernibles case {}", case),
        );
        // symmetry
        report.check(height_of(&a, &b)? == height_of(&b, &a)?, || {
            format!("symmetry case {}", case)
        });
        // ultrametric: Ht(a-b) >= min(Ht(a-c), Ht(c-b))
        let ab = height_of(&a, &b)?;
        let ac = height_of(&a, &c)?;
        let cb = height_of(&c, &b)?;
        report.check(ab >= ac.min(cb), || format!("ultrametric case {}", case));
    }
    // Ht(phi o psi - id) >= min(Ht(phi - id), Ht(psi - id)) near the identity
    let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0x8f1);
    for case in 0..15 {
        let (phi, _) = random_flow_composition(&mut rng2, 1, 1)?;
        let (psi, _) = random_flow_composition(&mut rng2, 1, 1)?;
        let id = Endo::identity(Q, 2);
        let comp = phi.compose(&psi)?;
        let lhs = height_of(&comp, &id)?;
        let rhs = height_of(&phi, &id)?.min(height_of(&psi, &id)?);
        report.check(lhs >= rhs, || format!("composition height case {}", case));
    }
    Ok(report)
}

/// Weyl product associativity on randomized triples (exact).
pub fn check_weyl_associativity(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("weyl_associativity");
    for n in [1usize, 2] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xacc + n as u64));
        for case in 0..25 {
            let u = random_weyl_elt(&mut rng, n, 3);
            let v = random_weyl_elt(&mut rng, n, 3);
            let w = random_weyl_elt(&mut rng, n, 3);
            let lhs = u.checked_mul(&v)?.checked_mul(&w)?;
            let rhs = u.checked_mul(&v.checked_mul(&w)?)?;
            report.check(lhs == rhs, || format!("n={} case={}", n, case));
        }
    }
    Ok(report)
}

/// Classical-limit compatibility: the h^1 coefficient of a commutator of
/// hbar-free elements equals the Poisson bracket of their symbols.
pub fn check_commutator_bracket(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("commutator_bracket");
    for n in [1usize, 2] {
        let ps = PoissonStructure::new(n);
        let ring = WeylRing::q_hbar(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xcb + n as u64));
        for case in 0..25 {
            let f = random_poly(&mut rng, 2 * n, 3, 3, 3);
            let g = random_poly(&mut rng, 2 * n, 3, 3, 3);
            let wf = crate::weyl::weyl_from_commutative(&f, &ring)?;
            let wg = crate::weyl::weyl_from_commutative(&g, &ring)?;
            let comm = wf.commutator(&wg)?;
            let h1 = hbar_poly_from_weyl(&comm)?.hbar_coeff(1);
            let br = poisson_bracket(&ps, &f, &g)?;
            report.check(h1 == br, || format!("n={} case={}", n, case));
        }
    }
    Ok(report)
}

/// The remainder heights reported during approximation agree between loop
/// and certificate (spot check of the truncation machinery).
pub fn check_truncation_soundness(seed: u64) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("truncation_soundness");
    let ps = PoissonStructure::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
    for case in 0..10 {
        let (sigma, word) = random_flow_composition(&mut rng, 1, 2)?;
        // exact and truncated remainders agree on every height <= cutoff
        let cutoff = 7u32;
        let trunc = truncated_remainder(&sigma, &word, cutoff)?;
        let exact = word.invert()?.evaluate()?.compose(&sigma)?;
        for (ft, fe) in trunc.images().iter().zip(exact.images()) {
            report.check(
                ft == &fe.truncate_degree(cutoff),
                || format!("case {}: truncated remainder mismatch", case),
            );
        }
    }
    Ok(report)
}

/// Run every suite check with a shared base seed.
pub fn run_all(seed: u64) -> Result<Vec<PropertyReport>> {
    Ok(vec![
        check_bracket_jacobian(seed)?,
        check_lift_round_trip(seed)?,
        check_star_products(seed)?,
        check_weyl_oracle(seed)?,
        check_char_p_center()?,
        check_center_bracket_laws(seed)?,
        check_direct_homomorphism(seed)?,
        check_approximation(seed)?,
        check_gauge_normalization(seed)?,
        check_lemma3_degree(seed)?,
        check_nagata()?,
        check_ring_laws(seed)?,
        check_metric_laws(seed)?,
        check_weyl_associativity(seed)?,
        check_commutator_bracket(seed)?,
        check_truncation_soundness(seed)?,
    ])
}
