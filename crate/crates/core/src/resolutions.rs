//! Low homological degrees of Frobenius powers: minimal generators and first
//! syzygies of `I^[q]`, `Hom(R/a, R/I^[q])`, and `Tor_1(R/I, F^e R) ⊗ R/a`
//! through the colon description `(J^[q] : u^q) / (J:u)^[q]`.
//!
//! Everything is graded and computed one degree at a time in the ambient
//! ring `R`, which need not be Artinian; scans run to explicit degree bounds
//! and check that the last two degrees contribute nothing.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, FpMatrix, FpScalar};
use crate::poly::{Monomial, Poly, RingSpec};
use crate::quotient::{frobenius_gens, QuotientRing, Slice};

/// Per-degree minimal generator counts of one module in a resolution.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BettiSlice {
    /// Homological index.
    pub i: u32,
    /// `(degree, count)` with positive counts, increasing degree.
    pub counts: Vec<(u32, usize)>,
}

impl BettiSlice {
    pub fn total(&self) -> usize {
        self.counts.iter().map(|(_, c)| c).sum()
    }
}

/// Caches slices of one ring by degree.
struct Slices<'a> {
    ring: &'a QuotientRing,
    cache: HashMap<u32, Slice>,
}

impl<'a> Slices<'a> {
    fn new(ring: &'a QuotientRing) -> Self {
        Self {
            ring,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, d: u32) -> Result<&Slice> {
        if !self.cache.contains_key(&d) {
            let s = self.ring.slice(d)?;
            self.cache.insert(d, s);
        }
        Ok(&self.cache[&d])
    }

    /// Matrix of multiplication by `g` (degree `e`) from degree `d` to `d + e`.
    fn mult(&mut self, d: u32, g: &Poly, e: u32) -> Result<FpMatrix> {
        let sources = self.get(d)?.standard_monomials();
        let ring = self.ring;
        Ok(self.get(d + e)?.image_matrix(ring, &sources, g))
    }

    fn dim(&mut self, d: u32) -> Result<usize> {
        Ok(self.get(d)?.dim())
    }

    fn lift(&mut self, d: u32, coords: &[FpScalar]) -> Result<Poly> {
        let monos: Vec<Monomial> = self.get(d)?.standard_monomials();
        let f = self.ring.field();
        Ok(Poly::from_terms(
            f,
            self.ring.nvars(),
            monos.into_iter().zip(coords.iter().copied()).filter(|(_, c)| *c != 0),
        ))
    }
}

fn degree_of(spec: &RingSpec, g: &Poly) -> Result<u32> {
    g.homogeneous_degree()
        .ok_or_else(|| Error::NonHomogeneous(spec.format_poly(g)))
}

/// Minimal generators of the ideal `(gens)` of `R = spec`, keeping the first
/// of any dependent family in degree order.
pub fn minimalize(spec: &RingSpec, gens: &[Poly]) -> Result<Vec<Poly>> {
    let ring = QuotientRing::ambient(spec, &[])?;
    let mut slices = Slices::new(&ring);
    let mut order: Vec<(u32, &Poly)> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| Ok((degree_of(spec, g)?, g)))
        .collect::<Result<_>>()?;
    order.sort_by_key(|(e, _)| *e);
    let mut kept: Vec<(u32, Poly)> = Vec::new();
    let mut current: Option<(u32, Echelon)> = None;
    for (e, g) in order {
        if current.as_ref().map(|(d, _)| *d) != Some(e) {
            let mut span = Echelon::empty(ring.field(), slices.dim(e)?);
            for (ek, k) in &kept {
                let m = slices.mult(e - ek, k, *ek)?;
                for c in 0..m.cols() {
                    let col: Vec<FpScalar> = (0..m.rows()).map(|r| m.get(r, c)).collect();
                    span.insert(&col);
                }
            }
            current = Some((e, span));
        }
        let v = {
            let slice = slices.get(e)?;
            slice.coordinates(&ring, g)
        };
        let (_, span) = current.as_mut().unwrap();
        if span.insert(&v) {
            kept.push((e, g.clone()));
        }
    }
    Ok(kept.into_iter().map(|(_, g)| g).collect())
}

/// Minimal generator and first-syzygy counts of `I^[q]` in `R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiReport {
    pub q: u64,
    pub beta1: BettiSlice,
    pub beta2: BettiSlice,
    /// Last degree scanned for syzygies.
    pub degree_bound: u32,
}

/// `β_1` and `β_2` of `R / I^[q]` over `R`.
///
/// Syzygies in degree `d` are the kernel of `⊕ R_{d - e_j} -> R_d`; the new
/// minimal ones are those outside `m` times the syzygies of degree `d - 1`.
/// The scan stops at `q max deg + t.s.d(R/I^[q]) + 1 + 2`.
pub fn betti(spec: &RingSpec, ideal_gens: &[Poly], q: u64) -> Result<BettiReport> {
    let powered = frobenius_gens(spec, ideal_gens, q)?;
    let gens = minimalize(spec, &powered)?;
    let degs: Vec<u32> = gens.iter().map(|g| degree_of(spec, g)).collect::<Result<_>>()?;
    let tsd = QuotientRing::frobenius(spec, ideal_gens, q)?
        .hilbert()?
        .top_degree()
        .ok_or_else(|| Error::Invalid("quotient is zero".into()))?;
    let max_deg = degs.iter().copied().max().unwrap_or(0);
    let bound = max_deg + tsd + 1 + 2;

    let ring = QuotientRing::ambient(spec, &[])?;
    let mut slices = Slices::new(&ring);
    let vars: Vec<Poly> = spec.maximal_ideal();
    let mut beta1 = BettiSlice { i: 1, counts: Vec::new() };
    for &e in &degs {
        match beta1.counts.last_mut() {
            Some((d, c)) if *d == e => *c += 1,
            _ => beta1.counts.push((e, 1)),
        }
    }
    let mut beta2 = BettiSlice { i: 2, counts: Vec::new() };
    let mut prev: Vec<Vec<FpScalar>> = Vec::new();
    let mut prev_blocks: Vec<usize> = Vec::new();
    let mut new_by_degree: Vec<usize> = Vec::new();
    for d in 0..=bound {
        // Source layout: one block of coordinates per generator.
        let widths: Vec<usize> = degs
            .iter()
            .map(|&e| if e <= d { slices.dim(d - e) } else { Ok(0) })
            .collect::<Result<_>>()?;
        let total: usize = widths.iter().sum();
        let rows = slices.dim(d)?;
        let mut phi = FpMatrix::zeros(ring.field(), rows, total);
        let mut col = 0;
        for (j, g) in gens.iter().enumerate() {
            if widths[j] == 0 {
                continue;
            }
            let m = slices.mult(d - degs[j], g, degs[j])?;
            for c in 0..m.cols() {
                for r in 0..m.rows() {
                    let x = m.get(r, c);
                    if x != 0 {
                        phi.set(r, col + c, x);
                    }
                }
            }
            col += widths[j];
        }
        let kernel = phi.nullspace();
        // m times the syzygies of degree d - 1.
        let mut span = Echelon::empty(ring.field(), total);
        if !prev.is_empty() {
            for x in &vars {
                let mut pieces: Vec<Option<FpMatrix>> = Vec::new();
                for (j, &e) in degs.iter().enumerate() {
                    pieces.push(if prev_blocks[j] > 0 {
                        Some(slices.mult(d - 1 - e, x, 1)?)
                    } else {
                        None
                    });
                }
                for z in &prev {
                    let mut image = Vec::with_capacity(total);
                    let mut offset = 0;
                    for (j, piece) in pieces.iter().enumerate() {
                        let part = &z[offset..offset + prev_blocks[j]];
                        offset += prev_blocks[j];
                        match piece {
                            Some(m) => image.extend(m.mul_vec(part)),
                            None => image.extend(std::iter::repeat(0).take(widths[j])),
                        }
                    }
                    span.insert(&image);
                }
            }
        }
        let new = kernel.len() - span.rank();
        if new > 0 {
            beta2.counts.push((d, new));
        }
        new_by_degree.push(new);
        prev = kernel;
        prev_blocks = widths;
    }
    let n = new_by_degree.len();
    if n >= 2 && (new_by_degree[n - 1] != 0 || new_by_degree[n - 2] != 0) {
        return Err(Error::NotStabilized(format!(
            "new syzygies still appearing at degree {bound}"
        )));
    }
    Ok(BettiReport {
        q,
        beta1,
        beta2,
        degree_bound: bound,
    })
}

/// Number of minimal first syzygies of `I^[q]` in `R`.
pub fn beta2(spec: &RingSpec, ideal_gens: &[Poly], q: u64) -> Result<usize> {
    Ok(betti(spec, ideal_gens, q)?.beta2.total())
}

/// `λ(Hom(R/a, R/I^[q]))`: the joint kernel of multiplication by every
/// generator of `a` on `R / I^[q]`.
pub fn hom_length(spec: &RingSpec, a_gens: &[Poly], ideal_gens: &[Poly], q: u64) -> Result<usize> {
    let a: Vec<(u32, &Poly)> = a_gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| Ok((degree_of(spec, g)?, g)))
        .collect::<Result<_>>()?;
    let graded: Vec<&Poly> = a.iter().map(|(_, g)| *g).collect();
    let ring = QuotientRing::frobenius_graded(spec, ideal_gens, q, &graded)?;
    let top = ring
        .hilbert()?
        .top_degree()
        .ok_or_else(|| Error::Invalid("quotient is zero".into()))?;
    let mut slices = Slices::new(&ring);
    let mut total = 0;
    for d in 0..=top {
        let dim = slices.dim(d)?;
        let mut stacked = FpMatrix::zeros(ring.field(), 0, dim);
        for &(e, g) in &a {
            let m = slices.mult(d, g, e)?;
            for r in 0..m.rows() {
                stacked.push_row(m.row(r));
            }
        }
        total += dim - stacked.rank();
    }
    Ok(total)
}

/// Generators of `J : u` in `R`: the generators of `J` followed by lifts of
/// minimal generators of `(0 :_{R/J} u)`.
///
/// The colon module is scanned through the safety bound of `R / J`, which
/// must end with two empty degrees.
pub fn colon_ideal(spec: &RingSpec, j_gens: &[Poly], u: &Poly) -> Result<Vec<Poly>> {
    let e = degree_of(spec, u)?;
    let mut all = spec.relations().to_vec();
    all.extend(j_gens.iter().cloned());
    let ring = QuotientRing::new(spec.field(), spec.nvars(), all, &[u])?;
    let bound = ring.artinian_bound();
    let vars = spec.maximal_ideal();
    let mut slices = Slices::new(&ring);
    let mut out: Vec<Poly> = j_gens.to_vec();
    let mut prev: Vec<Vec<FpScalar>> = Vec::new();
    let mut dims = Vec::new();
    for d in 0..=bound {
        let kernel = slices.mult(d, u, e)?.nullspace();
        let dim = slices.dim(d)?;
        let mut span = Echelon::empty(ring.field(), dim);
        if d > 0 {
            for x in &vars {
                let m = slices.mult(d - 1, x, 1)?;
                for z in &prev {
                    span.insert(&m.mul_vec(z));
                }
            }
        }
        for z in &kernel {
            if span.insert(z) {
                out.push(slices.lift(d, z)?);
            }
        }
        dims.push(kernel.len());
        prev = kernel;
    }
    let n = dims.len();
    if n >= 2 && (dims[n - 1] != 0 || dims[n - 2] != 0) {
        return Err(Error::NotStabilized(format!(
            "(J : u) / J still nonzero near degree {bound}"
        )));
    }
    Ok(out)
}

/// `λ( (J^[q] : u^q) / (J:u)^[q] ⊗ R/a )`.
///
/// `N = (J^[q] : u^q) / (J:u)^[q]` is the kernel of multiplication by `u^q`
/// from `R/(J:u)^[q]` to `R/J^[q]`; its tensor with `R/a` has length
/// `Σ_d dim N_d - dim (aN)_d`.
pub fn tor1_tensor_length(spec: &RingSpec, j_gens: &[Poly], u: &Poly, a_gens: &[Poly], q: u64) -> Result<usize> {
    let uq = u.frobenius_power(q)?;
    let shift = degree_of(spec, &uq)?;
    let k_gens = colon_ideal(spec, j_gens, u)?;
    let src = QuotientRing::frobenius_graded(spec, &k_gens, q, &[&uq])?;
    let dst = QuotientRing::frobenius_graded(spec, j_gens, q, &[&uq])?;
    let a: Vec<(u32, &Poly)> = a_gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| Ok((degree_of(spec, g)?, g)))
        .collect::<Result<_>>()?;
    let src_artinian = src.caps().iter().all(Option::is_some);
    let bound = src.artinian_bound().max(dst.artinian_bound());
    let mut s = Slices::new(&src);
    let mut t = Slices::new(&dst);
    let mut kernels: HashMap<u32, Vec<Vec<FpScalar>>> = HashMap::new();
    let mut last = Vec::new();
    for d in 0..=bound {
        if src_artinian && s.dim(d)? == 0 {
            break;
        }
        let sources = s.get(d)?.standard_monomials();
        let kernel = t.get(d + shift)?.image_matrix(&dst, &sources, &uq).nullspace();
        last.push(kernel.len());
        kernels.insert(d, kernel);
    }
    let n = last.len();
    if !src_artinian && (n < 2 || last[n - 1] != 0 || last[n - 2] != 0) {
        return Err(Error::NotStabilized(format!(
            "colon module still nonzero near degree {bound}"
        )));
    }
    total_contribution(&kernels, &a, &mut s, src.field())
}

fn total_contribution(
    kernels: &HashMap<u32, Vec<Vec<FpScalar>>>,
    a: &[(u32, &Poly)],
    s: &mut Slices<'_>,
    field: crate::linalg::PrimeField,
) -> Result<usize> {
    let mut total = 0;
    let mut degrees: Vec<u32> = kernels.keys().copied().collect();
    degrees.sort();
    for d in degrees {
        let kernel = &kernels[&d];
        if kernel.is_empty() {
            continue;
        }
        let mut span = Echelon::empty(field, kernel[0].len());
        for &(e, g) in a {
            if e > d {
                continue;
            }
            if let Some(lower) = kernels.get(&(d - e)).filter(|k| !k.is_empty()) {
                let m = s.mult(d - e, g, e)?;
                for z in lower {
                    span.insert(&m.mul_vec(z));
                }
            }
        }
        total += kernel.len() - span.rank();
    }
    Ok(total)
}
