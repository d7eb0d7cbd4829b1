//! Exponent vectors of fixed length.

/// A monomial as a per-variable exponent vector. The derived ordering is
/// lexicographic on the exponent vector, which is the canonical term order
/// everywhere in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// The constant monomial in `n_vars` variables.
    pub fn one(n_vars: usize) -> Self {
        Monomial { exps: vec![0; n_vars] }
    }

    /// The single variable x_i.
    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut exps = vec![0; n_vars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn n_vars(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial { exps: self.exps.iter().map(|e| e * k).collect() }
    }

    pub fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] = e;
        Monomial { exps }
    }

    /// Divide every exponent by k; requires divisibility.
    pub fn div_exps(&self, k: u32) -> Option<Monomial> {
        if self.exps.iter().all(|e| e % k == 0) {
            Some(Monomial { exps: self.exps.iter().map(|e| e / k).collect() })
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_is_derived() {
        let a = Monomial::new(vec![2, 0, 1]);
        let b = Monomial::new(vec![0, 1, 0]);
        assert!(a > b);
        assert_eq!(a.total_degree(), 3);
    }
}
