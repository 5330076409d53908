//! Fine grading by `Z^n / L`, where `L` is the lattice spanned by the
//! exponent differences between terms of the same polynomial.
//!
//! Every polynomial used to build `L` is homogeneous for this grading, so
//! every ideal generated by such polynomials splits into blocks of monomials
//! sharing a class in `Z^n / L`, and multiplication by any of them maps blocks
//! to blocks. Degree slices can then be row-reduced block by block. For a
//! monomial ideal `L = 0` and every block is a single monomial; for
//! `x^4 + y^4 + z^4` a degree slice splits into 16 blocks.

use crate::poly::{Monomial, Poly};

/// Canonical representative of a class in `Z^n / L`.
pub type BlockKey = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    nvars: usize,
    /// Row Hermite form of `L`: echelon, positive pivots.
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Grading {
    pub fn new<'a>(nvars: usize, polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let mut gens = Vec::new();
        for p in polys {
            let mut terms = p.terms().map(|(m, _)| m);
            let Some(first) = terms.next() else { continue };
            for m in terms {
                gens.push(
                    m.exponents()
                        .iter()
                        .zip(first.exponents())
                        .map(|(&a, &b)| a as i64 - b as i64)
                        .collect(),
                );
            }
        }
        let (rows, pivots) = hermite_rows(nvars, gens);
        Self {
            nvars,
            rows,
            pivots,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Rank of `L`.
    pub fn lattice_rank(&self) -> usize {
        self.rows.len()
    }

    pub fn key_of_vec(&self, mut v: Vec<i64>) -> BlockKey {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let k = v[c].div_euclid(row[c]);
            if k != 0 {
                for (a, b) in v[c..].iter_mut().zip(&row[c..]) {
                    *a -= k * b;
                }
            }
        }
        v
    }

    pub fn key(&self, m: &Monomial) -> BlockKey {
        self.key_of_vec(m.exponents().iter().map(|&e| e as i64).collect())
    }

    /// Class of `m * t` where `t` is any term of `shift`.
    pub fn key_shifted(&self, m: &Monomial, shift: &[i64]) -> BlockKey {
        self.key_of_vec(
            m.exponents()
                .iter()
                .zip(shift)
                .map(|(&e, &s)| e as i64 + s)
                .collect(),
        )
    }
}

/// Exponent vector of some term of `p` (all terms share one class).
pub fn shift_of(p: &Poly) -> Vec<i64> {
    p.terms()
        .next()
        .map(|(m, _)| m.exponents().iter().map(|&e| e as i64).collect())
        .unwrap_or_else(|| vec![0; p.nvars()])
}

/// Integer row echelon form with positive pivots.
fn hermite_rows(ncols: usize, mut rows: Vec<Vec<i64>>) -> (Vec<Vec<i64>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|&x| x != 0));
    let mut done: Vec<Vec<i64>> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..ncols {
        loop {
            // Euclid on column c among remaining rows.
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            let pivot = rows[best].clone();
            for &i in &nonzero {
                if i != best {
                    let k = rows[i][c].div_euclid(pivot[c]);
                    for (a, b) in rows[i].iter_mut().zip(&pivot) {
                        *a -= k * b;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i][c] != 0) {
            let mut r = rows.swap_remove(i);
            if r[c] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            done.push(r);
            pivots.push(c);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }
    (done, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{monomials_of_degree, RingSpec};
    use std::collections::HashSet;

    #[test]
    fn fermat_quartic_splits_into_sixteen_classes() {
        let spec = RingSpec::parse(7, &["x", "y", "z"], &["x^4+y^4+z^4"]).unwrap();
        let g = Grading::new(3, spec.relations());
        assert_eq!(g.lattice_rank(), 2);
        let keys: HashSet<_> = monomials_of_degree(3, 20, None).iter().map(|m| g.key(m)).collect();
        assert_eq!(keys.len(), 16);
    }

    #[test]
    fn generic_quartic_has_one_class_per_degree() {
        let spec =
            RingSpec::parse(2, &["x", "y", "z"], &["x^4+y^4+z^4+x^3*y+y^3*z+z^3*x"]).unwrap();
        let g = Grading::new(3, spec.relations());
        let keys: HashSet<_> = monomials_of_degree(3, 9, None).iter().map(|m| g.key(m)).collect();
        assert_eq!(keys.len(), 1);
    }

    #[test]
    fn monomial_ideals_are_finely_graded() {
        let g = Grading::new(3, std::iter::empty());
        let ms = monomials_of_degree(3, 4, None);
        let keys: HashSet<_> = ms.iter().map(|m| g.key(m)).collect();
        assert_eq!(keys.len(), ms.len());
    }

    #[test]
    fn keys_respect_lattice_translation() {
        let spec = RingSpec::parse(5, &["x", "y", "z", "w"], &["x*y - z*w", "x^3 - y^2*z"]).unwrap();
        let g = Grading::new(4, spec.relations());
        let a = Monomial::new(vec![3, 1, 0, 2]);
        // a * (x*y) and a * (z*w) must land in the same class.
        assert_eq!(
            g.key(&a.mul(&Monomial::new(vec![1, 1, 0, 0]))),
            g.key(&a.mul(&Monomial::new(vec![0, 0, 1, 1])))
        );
        assert_eq!(
            g.key(&Monomial::new(vec![3, 0, 0, 0])),
            g.key(&Monomial::new(vec![0, 2, 1, 0]))
        );
        assert_ne!(
            g.key(&Monomial::new(vec![1, 0, 0, 0])),
            g.key(&Monomial::new(vec![0, 1, 0, 0]))
        );
    }
}
