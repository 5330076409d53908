//! Closed-form counting for hypersurfaces with minimal Hilbert-Kunz function.
//!
//! Here `n` is the projective dimension (the ring has `n + 1` variables), `d`
//! the degree of the hypersurface and `q` a power of the characteristic.
//! `Γ(i)` is the coefficient of `t^i` in `(1 + t + ... + t^(q-1))^(n+1)`, i.e.
//! the Hilbert function of `F_p[x_0..x_n] / m^[q]`. All arithmetic is exact.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, FpMatrix, PrimeField};
use crate::poly::{monomials_of_degree, Monomial};

/// `C(top, k)`, zero when `top < k` or `top < 0`.
pub fn binomial(top: i64, k: u32) -> BigInt {
    if top < 0 || (k as i64) > top {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k as i64 {
        acc = acc * BigInt::from(top - j) / BigInt::from(j + 1);
    }
    acc
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `⌊((n+1)(q-1) + (d-1)) / 2⌋`.
pub fn m_of_q(n: u32, d: u32, q: u64) -> u64 {
    ((n as u64 + 1) * (q - 1) + (d as u64 - 1)) / 2
}

/// Coefficient of `t^m(q)` in `(1 - t^d)(1 - t^q)^(n+1) / (1 - t)^(n+2)`.
pub fn l_of_q(n: u32, d: u32, q: u64) -> BigInt {
    let m = m_of_q(n, d, q) as i64;
    let q = q as i64;
    let mut acc = BigInt::zero();
    for i in 0..=n + 1 {
        let k = m - q * i as i64;
        if k < 0 {
            break;
        }
        // Coefficient of t^k in (1 - t^d) / (1 - t)^(n+2).
        let inner = binomial(k + n as i64 + 1, n + 1) - binomial(k - d as i64 + n as i64 + 1, n + 1);
        let term = binomial(n as i64 + 1, i) * inner;
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `Γ(i)`; zero outside `0..=(n+1)(q-1)`.
pub fn gamma(i: i64, n: u32, q: u64) -> BigInt {
    if i < 0 {
        return BigInt::zero();
    }
    let q = q as i64;
    let mut acc = BigInt::zero();
    for j in 0..=n + 1 {
        let k = i - q * j as i64;
        if k < 0 {
            break;
        }
        let term = binomial(n as i64 + 1, j) * binomial(k + n as i64, n);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `0` when `n` is odd, otherwise `(q mod 2) / 2`.
pub fn epsilon(n: u32, q: u64) -> BigRational {
    if n % 2 == 1 || q % 2 == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::one(), BigInt::from(2))
    }
}

/// The shift `ξ` with `m = (n+1)q/2 + ξ + ε(q)`.
pub fn xi_from_m(n: u32, q: u64, m: u64) -> BigRational {
    rat(m as i64) - BigRational::new(BigInt::from((n as u64 + 1) * q), BigInt::from(2)) - epsilon(n, q)
}

/// `m(q) = (n+1)q/2 + ξ + ε(q)`, required to be an integer.
pub fn m_from_xi(n: u32, q: u64, xi: &BigRational) -> Result<i64> {
    let m = BigRational::new(BigInt::from((n as u64 + 1) * q), BigInt::from(2)) + xi + epsilon(n, q);
    if !m.is_integer() {
        return Err(Error::Invalid(format!("m({q}) = {m} is not an integer for this shift")));
    }
    Ok(m.to_integer().to_i64().expect("m(q) fits in i64"))
}

/// `h(q) = Γ(m(q)) - Γ(m(q) - d)` with `m(q)` built from `ξ`.
pub fn h_of_q(n: u32, d: u32, q: u64, xi: &BigRational) -> Result<BigInt> {
    let m = m_from_xi(n, q, xi)?;
    Ok(gamma(m, n, q) - gamma(m - d as i64, n, q))
}

/// `Σ_i (-1)^i C(n+1, i) (ν' - i)^(n-2)` over the `i` with `iq <= m(q)`:
/// `i < ν` with `ν' = ν` for odd `n = 2ν-1`, and `i <= ν` with `ν' = ν + 1/2`
/// for even `n = 2ν` (there `m(q) - νq` still grows like `q/2`).
fn alternating_power_sum(n: u32) -> BigRational {
    let (terms, nu, offset) = if n % 2 == 1 {
        ((n + 1) / 2, (n + 1) / 2, BigRational::zero())
    } else {
        (n / 2 + 1, n / 2, BigRational::new(BigInt::one(), BigInt::from(2)))
    };
    let mut acc = BigRational::zero();
    for i in 0..terms {
        let base = rat(nu as i64 - i as i64) + &offset;
        let term = BigRational::from_integer(binomial(n as i64 + 1, i)) * pow_rat(&base, n.saturating_sub(2));
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn pow_rat(b: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * b)
}

fn factorial(n: u32) -> BigInt {
    (1..=n as i64).fold(BigInt::one(), |acc, k| acc * k)
}

/// Leading coefficient `c` of `h(q) = c q^(n-2) + O(q^(n-3))` for a given
/// shift `ξ` and parity correction `ε`.
pub fn h_asymptotic(n: u32, d: u32, xi: &BigRational, eps: &BigRational) -> BigRational {
    let lin = rat(2) * xi + rat(2) * eps + rat(n as i64 - d as i64 + 1);
    BigRational::new(BigInt::from(d), factorial(n))
        * BigRational::from_integer(binomial(n as i64, 2))
        * lin
        * alternating_power_sum(n)
}

/// Leading coefficient of the socle length of `R / m^[q]` for a degree-`d`
/// hypersurface in `n + 1` variables attaining the minimal Hilbert-Kunz
/// function: `d((-1)^(n-d) - 3) / (2 n!) * C(n, 2) * Σ`.
pub fn socle_constant(n: u32, d: u32) -> Result<BigRational> {
    if n < 1 {
        return Err(Error::Invalid("socle constant needs n >= 1".into()));
    }
    let sign = if (n as i64 - d as i64).rem_euclid(2) == 0 { 1 } else { -1 };
    let pre = BigRational::new(BigInt::from(d as i64 * (sign - 3)), BigInt::from(2) * factorial(n));
    Ok(pre * BigRational::from_integer(binomial(n as i64, 2)) * alternating_power_sum(n))
}

/// Signed Stirling numbers of the first kind `s(n, k)`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingRow {
    pub n: u32,
    pub coefficients: Vec<BigInt>,
}

impl StirlingRow {
    /// Evaluates `Σ s(n,k) x^k`.
    pub fn eval(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + c)
    }
}

/// Coefficients of `x(x-1)...(x-n+1)`.
pub fn stirling_row(n: u32) -> StirlingRow {
    let mut coeffs = vec![BigInt::one()];
    for j in 0..n as i64 {
        // multiply by (x - j)
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * j;
        }
        coeffs = next;
    }
    StirlingRow { n, coefficients: coeffs }
}

fn alternating<F: Fn(u32) -> BigInt>(range: std::ops::RangeInclusive<u32>, f: F) -> BigInt {
    range.fold(BigInt::zero(), |acc, i| if i % 2 == 0 { acc + f(i) } else { acc - f(i) })
}

fn ipow(b: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

/// `Σ_{i=0}^{n} (-1)^i C(2n, i) (n-i)^(2n-2)`, for `n >= 2`.
pub fn identity_c1(n: u32) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::Invalid("the half-range sum is only defined for n >= 2".into()));
    }
    Ok(alternating(0..=n, |i| binomial(2 * n as i64, i) * ipow(n as i64 - i as i64, 2 * n - 2)))
}

/// `2^(2n-1) Σ_{i=0}^{n} (-1)^i C(2n+1, i) (n-i+1/2)^(2n-1)`, for `n >= 2`.
pub fn identity_c2(n: u32) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::Invalid("the half-range sum is only defined for n >= 2".into()));
    }
    Ok(alternating(0..=n, |i| {
        binomial(2 * n as i64 + 1, i) * ipow(2 * (n as i64 - i as i64) + 1, 2 * n - 1)
    }))
}

/// `Σ_{i=0}^{2n} (-1)^i C(2n, i) (x + 2n - i)^(2n-2)` at `x = -n`, with
/// `0^0 = 1`. Vanishes for every `n >= 1`.
pub fn forward_difference_sum(n: u32) -> BigInt {
    alternating(0..=2 * n, |i| {
        binomial(2 * n as i64, i) * ipow(n as i64 - i as i64, 2 * n - 2)
    })
}

/// Result of the brute-force socle computation for
/// `M = coker(R -> R^(n+1), r -> r(x_0..x_n))`, `R = F_p[x_0..x_n]/(x_i^t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaSoc {
    pub n: u32,
    pub t: u32,
    pub p: u32,
    /// Per-degree socle dimensions of `M`.
    pub socle: Vec<usize>,
    /// Smallest degree with a nonzero socle element.
    pub min_socle_degree: u32,
    /// `n (t - 1)`.
    pub bound: u32,
}

/// Largest `(n+1) t` the brute-force oracle accepts.
pub const LEMMA_SOC_SCALE: u32 = 10;

pub fn lemma_soc_oracle(n: u32, t: u32, p: u32) -> Result<LemmaSoc> {
    if t == 0 || (n + 1) * t > LEMMA_SOC_SCALE {
        return Err(Error::ResourceExhausted(format!(
            "(n+1)t = {} exceeds the brute-force limit {LEMMA_SOC_SCALE}",
            (n + 1) * t
        )));
    }
    let field = PrimeField::new(p)?;
    let nv = n as usize + 1;
    let caps = vec![Some(t); nv];
    let top = (t - 1) * (n + 1);
    let basis: Vec<Vec<Monomial>> = (0..=top + 1)
        .map(|d| monomials_of_degree(nv, d, Some(&caps)))
        .collect();
    let index: Vec<HashMap<Monomial, usize>> = basis
        .iter()
        .map(|b| b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
        .collect();
    // Image of φ in R_d^(n+1), coordinates j * dim R_d + idx.
    let image = |d: u32| -> Echelon {
        let width = basis[d as usize].len();
        let mut rows = FpMatrix::zeros(field, 0, nv * width);
        if d > 0 {
            for r in &basis[d as usize - 1] {
                let mut v = vec![0; nv * width];
                for j in 0..nv {
                    let m = r.mul_var(j);
                    if let Some(&k) = index[d as usize].get(&m) {
                        v[j * width + k] = 1;
                    }
                }
                rows.push_row(&v);
            }
        }
        rows.rref()
    };
    let mut socle = Vec::new();
    let mut im_d = image(0);
    for d in 0..=top {
        let width = basis[d as usize].len();
        let next_width = basis[d as usize + 1].len();
        let im_next = image(d + 1);
        // Rows: for each x_i, the reduced image of a basis vector of R_d^(n+1).
        let dim = nv * width;
        let mut stacked = FpMatrix::zeros(field, dim, nv * nv * next_width);
        for j in 0..nv {
            for (k, m) in basis[d as usize].iter().enumerate() {
                let src = j * width + k;
                for i in 0..nv {
                    let mut v = vec![0; nv * next_width];
                    if let Some(&idx) = index[d as usize + 1].get(&m.mul_var(i)) {
                        v[j * next_width + idx] = 1;
                    }
                    im_next.reduce(&mut v);
                    for (c, x) in v.into_iter().enumerate() {
                        if x != 0 {
                            stacked.set(src, i * nv * next_width + c, x);
                        }
                    }
                }
            }
        }
        let killed = dim - stacked.rank();
        socle.push(killed - im_d.rank());
        im_d = im_next;
    }
    let min_socle_degree = socle
        .iter()
        .position(|&s| s > 0)
        .expect("a nonzero Artinian module has a socle") as u32;
    Ok(LemmaSoc {
        n,
        t,
        p,
        socle,
        min_socle_degree,
        bound: n * (t - 1),
    })
}

/// Exact value of `Σ_i Γ(i)`, i.e. `q^(n+1)`; exposed for sanity checks.
pub fn gamma_total(n: u32, q: u64) -> BigInt {
    let top = (n as i64 + 1) * (q as i64 - 1);
    (0..=top).map(|i| gamma(i, n, q)).sum()
}
