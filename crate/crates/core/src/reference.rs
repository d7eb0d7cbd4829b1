//! Slow reference implementations used by the property suite. Each function
//! computes by a route independent of the production code it is checked
//! against: products by word-by-word rewriting instead of the closed-form
//! contraction identity, determinants by the permutation sum instead of
//! cofactor expansion.

use crate::coeff::Coeff;
use crate::error::Result;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::weyl::WeylElt;

/// One generator letter in a noncommutative word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Gen {
    X(usize),
    Y(usize),
}

/// Multiply two Weyl elements by concatenating generator words and rewriting
/// adjacent inversions y_i x_j -> x_j y_i + rel delta_{ij} one at a time.
pub fn naive_weyl_mul(u: &WeylElt, v: &WeylElt) -> Result<WeylElt> {
    let ring = u.ring().clone();
    let mut pending: Vec<(Coeff, Vec<Gen>)> = Vec::new();
    for ((a1, b1), c1) in u.terms() {
        for ((a2, b2), c2) in v.terms() {
            let mut word = Vec::new();
            push_block(&mut word, a1, true);
            push_block(&mut word, b1, false);
            push_block(&mut word, a2, true);
            push_block(&mut word, b2, false);
            pending.push((c1.mul(c2), word));
        }
    }
    let mut acc = WeylElt::zero(ring.clone());
    while let Some((c, word)) = pending.pop() {
        if c.is_zero() {
            continue;
        }
        match first_inversion(&word) {
            None => {
                let (xm, ym) = sorted_exponents(&word, ring.n);
                acc = acc.checked_add(&WeylElt::monomial(ring.clone(), xm, ym, c)?)?;
            }
            Some(t) => {
                // word[t] = Y(i), word[t+1] = X(j): swap, plus the delta term
                let (i, j) = match (word[t], word[t + 1]) {
                    (Gen::Y(i), Gen::X(j)) => (i, j),
                    _ => unreachable!(),
                };
                let mut swapped = word.clone();
                swapped.swap(t, t + 1);
                pending.push((c.clone(), swapped));
                if i == j {
                    let mut contracted = word.clone();
                    contracted.drain(t..t + 2);
                    pending.push((c.mul(&ring.rel), contracted));
                }
            }
        }
    }
    Ok(acc)
}

fn push_block(word: &mut Vec<Gen>, exps: &Monomial, is_x: bool) {
    for i in 0..exps.n_vars() {
        for _ in 0..exps.exp(i) {
            word.push(if is_x { Gen::X(i) } else { Gen::Y(i) });
        }
    }
}

fn first_inversion(word: &[Gen]) -> Option<usize> {
    word.windows(2).position(|w| matches!((w[0], w[1]), (Gen::Y(_), Gen::X(_))))
}

fn sorted_exponents(word: &[Gen], n: usize) -> (Monomial, Monomial) {
    let mut x = vec![0u32; n];
    let mut y = vec![0u32; n];
    for g in word {
        match g {
            Gen::X(i) => x[*i] += 1,
            Gen::Y(i) => y[*i] += 1,
        }
    }
    (Monomial::new(x), Monomial::new(y))
}

/// Commutator through the naive product.
pub fn naive_weyl_commutator(u: &WeylElt, v: &WeylElt) -> Result<WeylElt> {
    naive_weyl_mul(u, v)?.checked_sub(&naive_weyl_mul(v, u)?)
}

/// Determinant of a square polynomial matrix as the signed permutation sum.
pub fn poly_det_permutation(rows: &[Vec<Poly>]) -> Result<Poly> {
    let n = rows.len();
    let first = &rows[0][0];
    let mut acc = Poly::zero(first.ring(), first.n_vars());
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |perm, sign| {
        let mut prod = Poly::one(first.ring(), first.n_vars());
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.checked_mul(&rows[i][j])?;
        }
        if sign {
            acc = acc.checked_sub(&prod)?;
        } else {
            acc = acc.checked_add(&prod)?;
        }
        Ok(())
    })?;
    Ok(acc)
}

fn permute<F>(perm: &mut Vec<usize>, k: usize, visit: &mut F) -> Result<()>
where
    F: FnMut(&[usize], bool) -> Result<()>,
{
    let n = perm.len();
    if k == n {
        let mut sign = false;
        for i in 0..n {
            for j in (i + 1)..n {
                if perm[i] > perm[j] {
                    sign = !sign;
                }
            }
        }
        return visit(perm, sign);
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, visit)?;
        perm.swap(k, i);
    }
    Ok(())
}

/// Jacobian determinant via the permutation-sum determinant.
pub fn jacobian_det_permutation(images: &[Poly]) -> Result<Poly> {
    let n = images.len();
    let mut rows = Vec::with_capacity(n);
    for f in images {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(f.partial_derivative(j)?);
        }
        rows.push(row);
    }
    poly_det_permutation(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::QH;
    use crate::weyl::WeylRing;
    use crate::poly::jacobian_det;
    use crate::symplectic::nagata;

    #[test]
    fn naive_product_matches_relation() {
        let ring = WeylRing::q_hbar(1);
        let x = WeylElt::x_gen(ring.clone(), 0).unwrap();
        let y = WeylElt::y_gen(ring.clone(), 0).unwrap();
        let yx = naive_weyl_mul(&y, &x).unwrap();
        assert_eq!(yx, y.checked_mul(&x).unwrap());
        let y2x2 = naive_weyl_mul(&y.pow(2).unwrap(), &x.pow(2).unwrap()).unwrap();
        assert_eq!(y2x2, y.pow(2).unwrap().checked_mul(&x.pow(2).unwrap()).unwrap());
        // scalar sanity: [y, x] = h
        let comm = naive_weyl_commutator(&y, &x).unwrap();
        assert_eq!(comm, WeylElt::scalar(ring, QH.hbar()));
    }

    #[test]
    fn permutation_det_matches_cofactor() {
        let (phi, _) = nagata();
        let cof = jacobian_det(phi.images()).unwrap();
        let perm = jacobian_det_permutation(phi.images()).unwrap();
        assert_eq!(cof, perm);
        assert!(cof.is_one());
    }
}
