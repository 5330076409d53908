//! Degree-by-degree linear algebra on graded quotients `S / (C + I^[q])`.
//!
//! A degree-`d` slice is `S_d` modulo the span of `g * m` over generators `g`
//! and monomials `m` of complementary degree. Generators that are pure powers
//! `x_i^e` are not expanded into rows; they become exponent caps, so the
//! slice only enumerates monomials with `exp_i < e`. The remaining rows are
//! split into blocks by the fine grading of [`crate::grading`] and each block
//! is row-reduced on its own. Non-pivot columns of a block's reduced echelon
//! form are its standard monomials: they form a basis of the quotient.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grading::{BlockKey, Grading};
use crate::linalg::{Echelon, FpMatrix, FpScalar, PrimeField};
use crate::poly::{is_power_of, monomials_of_degree, Monomial, Poly, RingSpec};

/// Widest block (number of monomials) a slice may row-reduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_block_width: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_block_width: 8192,
        }
    }
}

impl Budget {
    /// Largest square `u32` matrix fitting in `megabytes`.
    pub fn from_megabytes(megabytes: usize) -> Self {
        let bytes = megabytes.saturating_mul(1 << 20) as f64;
        Self {
            max_block_width: ((bytes / 4.0).sqrt() as usize).max(16),
        }
    }
}

#[derive(Debug, Clone)]
struct Generator {
    poly: Poly,
    degree: u32,
}

/// `S / (gens)` where `S = F_p[x_0..x_{n-1}]` and every generator is
/// homogeneous.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    field: PrimeField,
    nvars: usize,
    caps: Vec<Option<u32>>,
    gens: Vec<Generator>,
    grading: Grading,
    budget: Budget,
    bound: u32,
}

impl QuotientRing {
    /// `graded_with` lists further polynomials that will later act by
    /// multiplication on this ring; they are folded into the fine grading so
    /// that their action maps blocks to blocks.
    pub fn new(field: PrimeField, nvars: usize, gens: Vec<Poly>, graded_with: &[&Poly]) -> Result<Self> {
        let mut caps: Vec<Option<u32>> = vec![None; nvars];
        let mut kept: Vec<Generator> = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            let Some(degree) = g.homogeneous_degree() else {
                let names: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();
                return Err(Error::NonHomogeneous(g.display(&names)));
            };
            if g.len() == 1 {
                let (m, _) = g.leading().unwrap();
                if let Some((i, e)) = m.as_pure_power() {
                    caps[i] = Some(caps[i].map_or(e, |c| c.min(e)));
                    continue;
                }
                if m.degree() == 0 {
                    // A unit: everything is killed.
                    caps = vec![Some(0); nvars];
                    continue;
                }
            }
            kept.push(Generator { poly: g, degree });
        }
        let grading = Grading::new(
            nvars,
            kept.iter().map(|g| &g.poly).chain(graded_with.iter().copied()),
        );
        let bound = if caps.iter().all(Option::is_some) {
            caps.iter().map(|c| c.unwrap().saturating_sub(1)).sum::<u32>() + 1
        } else {
            kept.iter().map(|g| g.degree).sum::<u32>()
                + caps.iter().flatten().sum::<u32>()
                + nvars as u32
        };
        Ok(Self {
            field,
            nvars,
            caps,
            gens: kept,
            grading,
            budget: Budget::default(),
            bound,
        })
    }

    /// `R / I^[q]` for `R = spec`.
    pub fn frobenius(spec: &RingSpec, ideal_gens: &[Poly], q: u64) -> Result<Self> {
        Self::frobenius_graded(spec, ideal_gens, q, &[])
    }

    pub fn frobenius_graded(
        spec: &RingSpec,
        ideal_gens: &[Poly],
        q: u64,
        graded_with: &[&Poly],
    ) -> Result<Self> {
        let gens = frobenius_gens(spec, ideal_gens, q)?;
        let mut all = spec.relations().to_vec();
        all.extend(gens);
        Self::new(spec.field(), spec.nvars(), all, graded_with)
    }

    /// The ring `R = spec` itself (not Artinian unless it has no positive
    /// dimension).
    pub fn ambient(spec: &RingSpec, graded_with: &[&Poly]) -> Result<Self> {
        Self::new(spec.field(), spec.nvars(), spec.relations().to_vec(), graded_with)
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn caps(&self) -> &[Option<u32>] {
        &self.caps
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    /// Degree by which a nonzero slice proves the quotient non-Artinian.
    pub fn artinian_bound(&self) -> u32 {
        self.bound
    }

    pub fn generators(&self) -> impl Iterator<Item = &Poly> {
        self.gens.iter().map(|g| &g.poly)
    }

    /// The degree-`d` slice.
    pub fn slice(&self, d: u32) -> Result<Slice> {
        let monos = monomials_of_degree(self.nvars, d, Some(&self.caps));
        let mut blocks: Vec<Block> = Vec::new();
        let mut by_key: HashMap<BlockKey, usize> = HashMap::new();
        let mut locate: HashMap<Monomial, (usize, usize)> = HashMap::with_capacity(monos.len());
        let mut members: Vec<Vec<Monomial>> = Vec::new();
        for m in monos {
            let key = self.grading.key(&m);
            let b = *by_key.entry(key.clone()).or_insert_with(|| {
                blocks.push(Block::placeholder(key, self.field));
                members.push(Vec::new());
                blocks.len() - 1
            });
            locate.insert(m.clone(), (b, members[b].len()));
            members[b].push(m);
        }
        for (b, ms) in members.iter().enumerate() {
            if ms.len() > self.budget.max_block_width {
                return Err(Error::ResourceExhausted(format!(
                    "degree {d} block has {} monomials, budget allows {}",
                    ms.len(),
                    self.budget.max_block_width
                )));
            }
            blocks[b].echelon = Echelon::empty(self.field, ms.len());
        }
        let mut rows: Vec<FpMatrix> = members
            .iter()
            .map(|ms| FpMatrix::zeros(self.field, 0, ms.len()))
            .collect();
        let mut row = Vec::new();
        for g in &self.gens {
            if g.degree > d {
                continue;
            }
            for m in monomials_of_degree(self.nvars, d - g.degree, Some(&self.caps)) {
                let mut target: Option<usize> = None;
                for (t, c) in g.poly.terms() {
                    let prod = m.mul(t);
                    if prod.exceeds(&self.caps) {
                        continue;
                    }
                    let (b, idx) = locate[&prod];
                    if target.is_none() {
                        target = Some(b);
                        row.clear();
                        row.resize(members[b].len(), 0);
                    }
                    debug_assert_eq!(target, Some(b), "generator not homogeneous for the grading");
                    row[idx] = self.field.add(row[idx], c);
                }
                if let Some(b) = target {
                    rows[b].push_row(&row);
                }
            }
        }
        for (b, ms) in members.into_iter().enumerate() {
            let ech = rows[b].rref();
            blocks[b].finish(ms, ech);
        }
        Ok(Slice {
            degree: d,
            blocks,
            by_key,
            locate,
        })
    }

    /// Hilbert function of an Artinian quotient, scanning degrees until the
    /// first zero slice.
    pub fn hilbert(&self) -> Result<HilbertTable> {
        let mut dims = Vec::new();
        for d in 0..=self.bound {
            let dim = self.slice(d)?.dim();
            if dim == 0 {
                return Ok(HilbertTable::new(dims));
            }
            dims.push(dim);
        }
        Err(Error::NonArtinian { bound: self.bound })
    }

    /// Hilbert function over `0..=max_degree` without requiring Artinian-ness.
    pub fn hilbert_truncated(&self, max_degree: u32) -> Result<Vec<usize>> {
        (0..=max_degree).map(|d| Ok(self.slice(d)?.dim())).collect()
    }

    /// Per-degree socle dimensions: the joint kernel of multiplication by
    /// every variable from slice `d` to slice `d + 1`.
    pub fn socle(&self) -> Result<SocleProfile> {
        let vars: Vec<Poly> = (0..self.nvars)
            .map(|i| Poly::var(self.field, self.nvars, i))
            .collect();
        let mut dims = Vec::new();
        let mut cur = self.slice(0)?;
        for d in 0..=self.bound {
            if cur.dim() == 0 {
                return Ok(SocleProfile::new(dims));
            }
            let next = self.slice(d + 1)?;
            let mut total = 0;
            for block in &cur.blocks {
                total += joint_kernel_dim(self, block.standard_monomials(), &vars, &next);
            }
            dims.push(total);
            cur = next;
        }
        Err(Error::NonArtinian { bound: self.bound })
    }
}

/// Number of independent combinations of `sources` (standard monomials of
/// some slice) killed by every `mult` in `target`.
pub(crate) fn joint_kernel_dim(
    ring: &QuotientRing,
    sources: &[Monomial],
    mults: &[Poly],
    target: &Slice,
) -> usize {
    if sources.is_empty() {
        return 0;
    }
    let mut stacked = FpMatrix::zeros(ring.field, 0, sources.len());
    for g in mults {
        for (_, m) in target.images(ring, sources, g) {
            for r in 0..m.rows() {
                stacked.push_row(m.row(r));
            }
        }
    }
    sources.len() - stacked.rank()
}

/// `q`-th powers of the generators, after checking `q` and homogeneity.
pub fn frobenius_gens(spec: &RingSpec, ideal_gens: &[Poly], q: u64) -> Result<Vec<Poly>> {
    if !is_power_of(q, spec.p()) {
        return Err(Error::NotPowerOfP { q, p: spec.p() });
    }
    ideal_gens
        .iter()
        .map(|g| {
            if !g.is_homogeneous() {
                return Err(Error::NonHomogeneous(spec.format_poly(g)));
            }
            g.frobenius_power(q)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Block {
    key: BlockKey,
    monos: Vec<Monomial>,
    echelon: Echelon,
    standard: Vec<Monomial>,
    /// Column index -> position among standard monomials.
    std_pos: Vec<Option<usize>>,
}

impl Block {
    fn placeholder(key: BlockKey, field: PrimeField) -> Self {
        Self {
            key,
            monos: Vec::new(),
            echelon: Echelon::empty(field, 0),
            standard: Vec::new(),
            std_pos: Vec::new(),
        }
    }

    fn finish(&mut self, monos: Vec<Monomial>, echelon: Echelon) {
        let mut std_pos = vec![None; monos.len()];
        let free = echelon.free_columns();
        for (k, &c) in free.iter().enumerate() {
            std_pos[c] = Some(k);
        }
        self.standard = free.iter().map(|&c| monos[c].clone()).collect();
        self.monos = monos;
        self.echelon = echelon;
        self.std_pos = std_pos;
    }

    pub fn key(&self) -> &BlockKey {
        &self.key
    }

    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    /// All monomials of the block that survive the exponent caps.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monos
    }

    /// Coset representatives forming a basis of this block of the quotient.
    pub fn standard_monomials(&self) -> &[Monomial] {
        &self.standard
    }

    pub fn relation_rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Coordinates over the standard monomials of a vector given over all
    /// block monomials.
    pub fn project(&self, mut v: Vec<FpScalar>) -> Vec<FpScalar> {
        self.echelon.reduce(&mut v);
        let mut out = vec![0; self.standard.len()];
        for (c, x) in v.into_iter().enumerate() {
            if let Some(k) = self.std_pos[c] {
                out[k] = x;
            }
        }
        out
    }
}

/// One graded piece of a quotient, split into fine-grading blocks.
#[derive(Debug, Clone)]
pub struct Slice {
    degree: u32,
    blocks: Vec<Block>,
    by_key: HashMap<BlockKey, usize>,
    locate: HashMap<Monomial, (usize, usize)>,
}

impl Slice {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Block::dim).sum()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_index(&self, key: &BlockKey) -> Option<usize> {
        self.by_key.get(key).copied()
    }

    /// Standard monomials of every block, largest first.
    pub fn basis(&self) -> Vec<Monomial> {
        let mut all: Vec<Monomial> = self
            .blocks
            .iter()
            .flat_map(|b| b.standard.iter().cloned())
            .collect();
        all.sort_by(|a, b| b.cmp(a));
        all
    }

    /// Standard monomials block after block. Global coordinate vectors of
    /// this slice (see [`Slice::image_matrix`]) follow this order.
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        self.blocks
            .iter()
            .flat_map(|b| b.standard.iter().cloned())
            .collect()
    }

    /// Start of each block in global coordinates.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.blocks
            .iter()
            .map(|b| {
                let o = acc;
                acc += b.dim();
                o
            })
            .collect()
    }

    /// Global coordinates of a homogeneous polynomial of this degree.
    pub fn coordinates(&self, ring: &QuotientRing, p: &Poly) -> Vec<FpScalar> {
        let offsets = self.offsets();
        let mut v = vec![0; self.dim()];
        for (b, coords) in self.normal_form(ring, p) {
            v[offsets[b]..offsets[b] + coords.len()].copy_from_slice(&coords);
        }
        v
    }

    /// Multiplication by `g` from the span of `sources` into this slice as
    /// one matrix over global coordinates (`self.dim()` rows).
    pub fn image_matrix(&self, ring: &QuotientRing, sources: &[Monomial], g: &Poly) -> FpMatrix {
        let offsets = self.offsets();
        let mut out = FpMatrix::zeros(ring.field, self.dim(), sources.len());
        for (b, m) in self.images(ring, sources, g) {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let x = m.get(i, j);
                    if x != 0 {
                        out.set(offsets[b] + i, j, x);
                    }
                }
            }
        }
        out
    }

    /// Dimension of the span of the relations in this degree.
    pub fn relation_rank(&self) -> usize {
        self.blocks.iter().map(Block::relation_rank).sum()
    }

    /// Number of monomials surviving the caps.
    pub fn ambient_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.monos.len()).sum()
    }

    /// Normal form of a homogeneous polynomial of this degree: standard
    /// coordinates for each block it touches.
    pub fn normal_form(&self, ring: &QuotientRing, p: &Poly) -> Vec<(usize, Vec<FpScalar>)> {
        let mut acc: HashMap<usize, Vec<FpScalar>> = HashMap::new();
        for (m, c) in p.terms() {
            if m.exceeds(&ring.caps) {
                continue;
            }
            let Some(&(b, idx)) = self.locate.get(m) else {
                continue;
            };
            let v = acc
                .entry(b)
                .or_insert_with(|| vec![0; self.blocks[b].monos.len()]);
            v[idx] = ring.field.add(v[idx], c);
        }
        let mut out: Vec<(usize, Vec<FpScalar>)> = acc
            .into_iter()
            .map(|(b, v)| (b, self.blocks[b].project(v)))
            .filter(|(_, v)| v.iter().any(|&x| x != 0))
            .collect();
        out.sort_by_key(|(b, _)| *b);
        out
    }

    /// Matrices of multiplication by `g` from the span of `sources` into this
    /// slice, one per target block hit: rows are the block's standard
    /// coordinates, columns follow `sources`.
    pub fn images(&self, ring: &QuotientRing, sources: &[Monomial], g: &Poly) -> Vec<(usize, FpMatrix)> {
        let f = ring.field;
        let mut cols: HashMap<usize, Vec<Vec<FpScalar>>> = HashMap::new();
        for (j, u) in sources.iter().enumerate() {
            let mut per_block: HashMap<usize, Vec<FpScalar>> = HashMap::new();
            for (t, c) in g.terms() {
                let prod = u.mul(t);
                if prod.exceeds(&ring.caps) {
                    continue;
                }
                let Some(&(b, idx)) = self.locate.get(&prod) else {
                    continue;
                };
                let v = per_block
                    .entry(b)
                    .or_insert_with(|| vec![0; self.blocks[b].monos.len()]);
                v[idx] = f.add(v[idx], c);
            }
            for (b, v) in per_block {
                let projected = self.blocks[b].project(v);
                let slot = cols
                    .entry(b)
                    .or_insert_with(|| vec![Vec::new(); sources.len()]);
                slot[j] = projected;
            }
        }
        let mut out: Vec<(usize, FpMatrix)> = cols
            .into_iter()
            .map(|(b, columns)| {
                let h = self.blocks[b].dim();
                let mut m = FpMatrix::zeros(f, h, sources.len());
                for (j, col) in columns.iter().enumerate() {
                    for (i, &x) in col.iter().enumerate() {
                        if x != 0 {
                            m.set(i, j, x);
                        }
                    }
                }
                (b, m)
            })
            .filter(|(_, m)| m.rows() > 0)
            .collect();
        out.sort_by_key(|(b, _)| *b);
        out
    }
}

/// Degree -> dimension for a graded quotient, indices `0..=top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertTable {
    dims: Vec<usize>,
}

impl HilbertTable {
    pub fn new(mut dims: Vec<usize>) -> Self {
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Self { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn get(&self, d: u32) -> usize {
        self.dims.get(d as usize).copied().unwrap_or(0)
    }

    /// Total length `sum_d dim_d`.
    pub fn length(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Largest degree with a nonzero piece; `None` for the zero module.
    pub fn top_degree(&self) -> Option<u32> {
        self.dims.len().checked_sub(1).map(|d| d as u32)
    }

    /// Coefficients of the Hilbert series (a polynomial).
    pub fn series(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }
}

/// Degree -> socle dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocleProfile {
    dims: Vec<usize>,
}

impl SocleProfile {
    pub fn new(mut dims: Vec<usize>) -> Self {
        while dims.last() == Some(&0) {
            dims.pop();
        }
        Self { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn get(&self, d: u32) -> usize {
        self.dims.get(d as usize).copied().unwrap_or(0)
    }

    pub fn length(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn top_degree(&self) -> Option<u32> {
        self.dims.len().checked_sub(1).map(|d| d as u32)
    }

    /// Degrees carrying a nonzero socle.
    pub fn support(&self) -> Vec<u32> {
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, _)| i as u32)
            .collect()
    }

    pub fn concentrated_in(&self, degree: u32) -> bool {
        self.support() == vec![degree]
    }
}

/// All slices of `R / I^[q]` up to its top degree.
pub fn quotient_slices(spec: &RingSpec, ideal_gens: &[Poly], q: u64) -> Result<Vec<Slice>> {
    let ring = QuotientRing::frobenius(spec, ideal_gens, q)?;
    let mut out = Vec::new();
    for d in 0..=ring.bound {
        let s = ring.slice(d)?;
        if s.dim() == 0 {
            return Ok(out);
        }
        out.push(s);
    }
    Err(Error::NonArtinian { bound: ring.bound })
}

/// Hilbert function of `R / I^[q]`; its length is the Hilbert-Kunz value.
pub fn hilbert_kunz(spec: &RingSpec, ideal_gens: &[Poly], q: u64) -> Result<HilbertTable> {
    QuotientRing::frobenius(spec, ideal_gens, q)?.hilbert()
}

pub fn socle_profile(spec: &RingSpec, ideal_gens: &[Poly], q: u64) -> Result<SocleProfile> {
    QuotientRing::frobenius(spec, ideal_gens, q)?.socle()
}

/// Top socle degree of `R / I^[q]`, i.e. the largest `r` with
/// `m^r` not contained in `I^[q]`.
pub fn top_socle_degree(spec: &RingSpec, ideal_gens: &[Poly], q: u64) -> Result<u32> {
    hilbert_kunz(spec, ideal_gens, q)?
        .top_degree()
        .ok_or_else(|| Error::Invalid("quotient is zero".into()))
}

/// Per-degree dimensions of `(J^[q] : u^q) / J^[q]`: the kernel of
/// multiplication by `u^q` on `R / J^[q]`.
///
/// When `R / J^[q]` is not Artinian the scan runs to the quotient's safety
/// bound and the last two degrees must be empty.
pub fn colon_slice(spec: &RingSpec, modulus_gens: &[Poly], divisor: &Poly, q: u64) -> Result<HilbertTable> {
    let uq = divisor.frobenius_power(q)?;
    let shift = uq
        .homogeneous_degree()
        .ok_or_else(|| Error::NonHomogeneous(spec.format_poly(divisor)))?;
    let ring = QuotientRing::frobenius_graded(spec, modulus_gens, q, &[&uq])?;
    let bound = ring.bound;
    let mut dims = Vec::new();
    let mut slices: HashMap<u32, Slice> = HashMap::new();
    for d in 0..=bound {
        let src = match slices.remove(&d) {
            Some(s) => s,
            None => ring.slice(d)?,
        };
        if src.dim() == 0 && ring.caps.iter().all(Option::is_some) {
            return Ok(HilbertTable::new(dims));
        }
        let dst = ring.slice(d + shift)?;
        let mut total = 0;
        for block in &src.blocks {
            total += joint_kernel_dim(&ring, block.standard_monomials(), std::slice::from_ref(&uq), &dst);
        }
        dims.push(total);
        if shift > 0 {
            slices.insert(d + shift, dst);
        }
    }
    let n = dims.len();
    if n >= 2 && dims[n - 1] == 0 && dims[n - 2] == 0 {
        Ok(HilbertTable::new(dims))
    } else {
        Err(Error::NotStabilized(format!(
            "colon quotient still nonzero near degree {bound}"
        )))
    }
}
