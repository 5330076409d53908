//! Dense linear algebra over a prime field `F_p`.
//!
//! Elements are plain `u32` residues in `[0, p)`; the modulus lives in a
//! [`PrimeField`] context rather than in every element. Row reduction always
//! picks the first nonzero entry scanning columns left to right and rows top
//! to bottom, so every echelon form (and everything derived from one) is
//! reproducible bit for bit.

use crate::error::Error;

/// A residue in `[0, p)`. The modulus is carried by [`PrimeField`].
pub type FpScalar = u32;

/// Largest supported characteristic. Products of two residues must fit in a
/// `u32` before reduction.
pub const MAX_PRIME: u32 = 65_521;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, Error> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::Invalid(format!(
                "characteristic {p} exceeds the supported maximum {MAX_PRIME}"
            )));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> FpScalar {
        (v % self.p as u64) as u32
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(&self, v: i64) -> FpScalar {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: FpScalar, b: FpScalar) -> FpScalar {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: FpScalar, b: FpScalar) -> FpScalar {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: FpScalar) -> FpScalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: FpScalar, b: FpScalar) -> FpScalar {
        (a * b) % self.p
    }

    pub fn pow(&self, a: FpScalar, mut e: u64) -> FpScalar {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: FpScalar) -> FpScalar {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-major dense matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FpScalar>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    /// Builds a matrix from row vectors; entries are reduced mod `p`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().map(|&v| v % field.p()));
        }
        Self {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_i64_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Self {
        let rows: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, &rows)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FpScalar {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FpScalar) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[FpScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[FpScalar]) {
        assert_eq!(row.len(), self.cols, "ragged row");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[FpScalar]) -> Vec<FpScalar> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|r| {
                let acc = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                acc as u32
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let mut work = self.clone();
        let pivots = work.reduce_in_place();
        let rank = pivots.len();
        work.data.truncate(rank * work.cols);
        work.rows = rank;
        Echelon { rows: work, pivots }
    }

    /// Basis of `{v : self * v = 0}`, itself in reduced echelon form (each
    /// vector has leading entry 1 and zeros in the other vectors' leading
    /// positions).
    pub fn nullspace(&self) -> Vec<Vec<FpScalar>> {
        let ech = self.rref();
        let f = self.field;
        let raw: Vec<Vec<u32>> = ech
            .free_columns()
            .into_iter()
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &pc) in ech.pivots.iter().enumerate() {
                    v[pc] = f.neg(ech.rows.get(i, free));
                }
                v
            })
            .collect();
        if raw.is_empty() {
            return raw;
        }
        let basis = FpMatrix::from_rows(f, self.cols, &raw).rref();
        (0..basis.rank()).map(|i| basis.rows.row(i).to_vec()).collect()
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[FpScalar]) -> Option<Vec<FpScalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMatrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols]
                .copy_from_slice(self.row(r));
            aug.data[r * (self.cols + 1) + self.cols] = b[r] % self.field.p();
        }
        let ech = aug.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.rows.get(i, self.cols);
        }
        Some(x)
    }

    /// Gauss-Jordan elimination in place; returns pivot columns. Rows beyond
    /// the rank are left zero at the bottom.
    fn reduce_in_place(&mut self) -> Vec<usize> {
        // Extension point: for p = 2 the rows could be bit-packed words and
        // the inner loop replaced by XOR.
        let f = self.field;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..cols {
            if prow == self.rows {
                break;
            }
            let Some(found) = (prow..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if found != prow {
                for k in 0..cols {
                    self.data.swap(found * cols + k, prow * cols + k);
                }
            }
            let inv = f.inv(self.data[prow * cols + c]);
            if inv != 1 {
                for k in c..cols {
                    let v = &mut self.data[prow * cols + k];
                    *v = f.mul(*v, inv);
                }
            }
            let (head, tail) = self.data.split_at_mut(prow * cols);
            let (pivot_row, rest) = tail.split_at_mut(cols);
            for row in head.chunks_exact_mut(cols).chain(rest.chunks_exact_mut(cols)) {
                let factor = row[c];
                if factor != 0 {
                    eliminate(f, row, pivot_row, factor, c);
                }
            }
            pivots.push(c);
            prow += 1;
        }
        pivots
    }
}

/// `row -= factor * pivot_row`, touching columns `from..`.
#[inline]
fn eliminate(f: PrimeField, row: &mut [u32], pivot_row: &[u32], factor: u32, from: usize) {
    let p = f.p();
    let m = p - factor;
    for (a, &b) in row[from..].iter_mut().zip(&pivot_row[from..]) {
        if b != 0 {
            *a = (*a + m * b) % p;
        }
    }
}

/// Reduced row echelon form of some matrix: `rows` has exactly `rank` rows
/// and row `i` has a leading 1 in column `pivots[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    rows: FpMatrix,
    pivots: Vec<usize>,
}

impl Echelon {
    /// Echelon form of the zero subspace of `F_p^cols`.
    pub fn empty(field: PrimeField, cols: usize) -> Self {
        Self {
            rows: FpMatrix::zeros(field, 0, cols),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.rows.cols()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.rows
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols()];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.cols()).filter(|&c| !is_pivot[c]).collect()
    }

    /// Reduces `v` modulo the row space, leaving zeros in every pivot column.
    pub fn reduce(&self, v: &mut [FpScalar]) {
        let f = self.rows.field();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let factor = v[pc];
            if factor != 0 {
                eliminate(f, v, self.rows.row(i), factor, pc);
            }
        }
    }

    pub fn contains(&self, v: &[FpScalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the row space if it is independent; returns whether the
    /// rank grew. The result stays fully reduced.
    pub fn insert(&mut self, v: &[FpScalar]) -> bool {
        let f = self.rows.field();
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        let cols = self.cols();
        for r in 0..self.rows.rows() {
            let factor = self.rows.data[r * cols + pc];
            if factor != 0 {
                eliminate(f, &mut self.rows.data[r * cols..(r + 1) * cols], &w, factor, pc);
            }
        }
        let at = self.pivots.partition_point(|&c| c < pc);
        self.pivots.insert(at, pc);
        let mut data = Vec::with_capacity(self.rows.data.len() + cols);
        data.extend_from_slice(&self.rows.data[..at * cols]);
        data.extend_from_slice(&w);
        data.extend_from_slice(&self.rows.data[at * cols..]);
        self.rows.data = data;
        self.rows.rows += 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(FpMatrix::identity(fp(5), 3).rank(), 3);
        assert_eq!(FpMatrix::zeros(fp(3), 2, 4).rank(), 0);
        let m = FpMatrix::from_rows(fp(7), 2, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(FpMatrix::identity(fp(5), 4).nullspace().is_empty());
        assert_eq!(FpMatrix::zeros(fp(2), 2, 3).nullspace().len(), 3);
        let m = FpMatrix::from_rows(fp(3), 2, &[vec![1, 1]]);
        assert_eq!(m.nullspace(), vec![vec![1, 2]]);
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(matches!(PrimeField::new(9), Err(Error::NotPrime(9))));
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(101).is_ok());
    }

    #[test]
    fn scalar_axioms_exhaustive_small_primes() {
        for p in [2u32, 3, 5, 7] {
            let f = fp(p);
            for a in 0..p {
                assert_eq!(f.pow(a, p as u64), a, "Fermat a^p = a");
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..p {
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in 0..p {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn solve_finds_solution_or_reports_inconsistency() {
        let f = fp(5);
        let m = FpMatrix::from_rows(f, 2, &[vec![1, 2], vec![2, 4]]);
        assert!(m.solve(&[1, 3]).is_none());
        let x = m.solve(&[1, 2]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 2]);
    }

    #[test]
    fn insert_matches_batch_rref() {
        let f = fp(7);
        let rows = vec![vec![0, 3, 1, 4], vec![2, 1, 0, 0], vec![2, 4, 1, 4], vec![1, 1, 1, 1]];
        let mut ech = Echelon::empty(f, 4);
        for r in &rows {
            ech.insert(r);
        }
        assert_eq!(ech, FpMatrix::from_rows(f, 4, &rows).rref());
    }

    fn matrix_strategy() -> impl Strategy<Value = (u32, usize, usize, Vec<u32>)> {
        (prop::sample::select(vec![2u32, 3, 5, 7, 101]), 1usize..7, 1usize..7).prop_flat_map(
            |(p, r, c)| (Just(p), Just(r), Just(c), prop::collection::vec(0..p, r * c)),
        )
    }

    proptest! {
        #[test]
        fn rank_nullity((p, r, c, data) in matrix_strategy()) {
            let rows: Vec<Vec<u32>> = data.chunks(c).map(|s| s.to_vec()).collect();
            let m = FpMatrix::from_rows(fp(p), c, &rows);
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), c);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert!(m.rank() <= r.min(c));
        }
    }
}
