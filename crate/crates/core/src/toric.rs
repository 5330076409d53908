//! Defining ideals of projective monomial curves `[s^a_0 t^b_0 : ... : s^a_n t^b_n]`.
//!
//! The ideal is the kernel of `x_i -> s^a_i t^b_i`. It is spanned in each
//! degree by binomials `m - m'` with equal image, so a degree-by-degree scan
//! over image fibers finds minimal generators: a binomial is new when it is
//! not in the span of lower-degree generators times monomials.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, PrimeField};
use crate::poly::{monomials_of_degree, Monomial, Poly};

fn image(curve: &[[u32; 2]], m: &Monomial) -> (u64, u64) {
    m.exponents()
        .iter()
        .zip(curve)
        .fold((0, 0), |(s, t), (&e, ab)| {
            (s + e as u64 * ab[0] as u64, t + e as u64 * ab[1] as u64)
        })
}

/// Minimal binomial generators of the ideal of the curve, by degree.
///
/// The scan runs through degree `e + 1`, where `e = a_i + b_i` is the degree
/// of the curve; minimal generators of such an ideal live in degrees below
/// `e`, and the last two scanned degrees must contribute nothing.
pub fn monomial_curve_ideal(field: PrimeField, curve: &[[u32; 2]]) -> Result<Vec<Poly>> {
    let Some(first) = curve.first() else {
        return Err(Error::Invalid("empty monomial curve".into()));
    };
    let e = first[0] + first[1];
    if e == 0 || curve.iter().any(|ab| ab[0] + ab[1] != e) {
        return Err(Error::Invalid(
            "monomial curve exponents must all have the same positive total degree".into(),
        ));
    }
    monomial_curve_ideal_to(field, curve, e + 1)
}

pub fn monomial_curve_ideal_to(field: PrimeField, curve: &[[u32; 2]], max_degree: u32) -> Result<Vec<Poly>> {
    let n = curve.len();
    let minus_one = field.neg(1);
    let mut gens: Vec<(u32, Poly)> = Vec::new();
    let mut last_new = 0;
    for k in 1..=max_degree {
        let mut fibers: HashMap<(u64, u64), Vec<Monomial>> = HashMap::new();
        for m in monomials_of_degree(n, k, None) {
            fibers.entry(image(curve, &m)).or_default().push(m);
        }
        let mut spans: HashMap<(u64, u64), (HashMap<Monomial, usize>, Echelon)> = fibers
            .iter()
            .map(|(key, ms)| {
                let index = ms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
                (*key, (index, Echelon::empty(field, ms.len())))
            })
            .collect();
        for (dg, g) in &gens {
            for m in monomials_of_degree(n, k - dg, None) {
                let prod = g.mul_monomial(&m);
                let (lead, _) = prod.leading().unwrap();
                let (index, ech) = spans.get_mut(&image(curve, lead)).unwrap();
                let mut v = vec![0; index.len()];
                for (t, c) in prod.terms() {
                    v[index[t]] = c;
                }
                ech.insert(&v);
            }
        }
        let mut keys: Vec<&(u64, u64)> = fibers.keys().collect();
        keys.sort();
        for key in keys {
            let ms = &fibers[key];
            let (_, ech) = spans.get_mut(key).unwrap();
            for j in 1..ms.len() {
                let mut v = vec![0; ms.len()];
                v[0] = 1;
                v[j] = minus_one;
                if ech.insert(&v) {
                    let g = Poly::from_terms(field, n, [(ms[0].clone(), 1), (ms[j].clone(), minus_one)]);
                    gens.push((k, g));
                    last_new = k;
                }
            }
        }
    }
    if last_new + 2 > max_degree {
        return Err(Error::NotStabilized(format!(
            "curve ideal gained generators in degree {last_new}, scanned only to {max_degree}"
        )));
    }
    Ok(gens.into_iter().map(|(_, g)| g).collect())
}
