//! Uncapped reference computations: every degree-d piece of an ideal is the
//! full span of `m * g` over all monomials `m`, reduced by a plain
//! row-echelon routine that shares nothing with the library's slices.
#![allow(dead_code)]

use std::collections::HashMap;

use frobsoc::poly::{Poly, RingSpec};

pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials(nvars - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn inv(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row echelon form kept fully reduced on pivot columns.
#[derive(Clone)]
pub struct Span {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Span {
    pub fn new(p: u32) -> Self {
        Self { p: p as u64, rows: Vec::new() }
    }

    pub fn reduce(&self, v: &mut [u64]) {
        for (piv, row) in &self.rows {
            let c = v[*piv] % self.p;
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (self.p - c) * r) % self.p;
                }
            }
        }
    }

    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let s = inv(v[piv], self.p);
        for x in v.iter_mut() {
            *x = *x * s % self.p;
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + (self.p - c) * r) % self.p;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub struct Naive {
    pub p: u32,
    pub nvars: usize,
    /// Relations together with the ideal generators, all as plain forms.
    pub gens: Vec<(u32, Vec<(Vec<u32>, u64)>)>,
}

fn form(g: &Poly) -> (u32, Vec<(Vec<u32>, u64)>) {
    let terms: Vec<(Vec<u32>, u64)> = g.terms().map(|(m, c)| (m.exponents().to_vec(), c as u64)).collect();
    let deg = terms.first().map(|(m, _)| m.iter().sum()).unwrap_or(0);
    (deg, terms)
}

impl Naive {
    pub fn new(spec: &RingSpec, extra: &[Poly]) -> Self {
        Self {
            p: spec.p(),
            nvars: spec.nvars(),
            gens: spec.relations().iter().chain(extra).filter(|g| !g.is_zero()).map(form).collect(),
        }
    }

    pub fn index(&self, d: u32) -> (Vec<Vec<u32>>, HashMap<Vec<u32>, usize>) {
        let mons = monomials(self.nvars, d);
        let idx = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        (mons, idx)
    }

    /// Degree-d part of the ideal in the polynomial ring.
    pub fn ideal(&self, d: u32) -> Span {
        let (_, idx) = self.index(d);
        let mut span = Span::new(self.p);
        for (gd, terms) in &self.gens {
            if *gd > d {
                continue;
            }
            for m in monomials(self.nvars, d - gd) {
                let mut v = vec![0u64; idx.len()];
                for (e, c) in terms {
                    let prod: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                    v[idx[&prod]] = (v[idx[&prod]] + c) % self.p as u64;
                }
                span.insert(v);
            }
        }
        span
    }

    pub fn quotient_dim(&self, d: u32) -> usize {
        monomials(self.nvars, d).len() - self.ideal(d).rank()
    }

    /// Dimension of `{v in S_d : f v in I}` for a monomial multiplier list
    /// `fs` (each a form of degree `e`), jointly.
    pub fn annihilated(&self, d: u32, fs: &[(u32, Vec<(Vec<u32>, u64)>)]) -> usize {
        let (mons, _) = self.index(d);
        let targets: Vec<(Span, HashMap<Vec<u32>, usize>, usize)> = fs
            .iter()
            .map(|(e, _)| {
                let (m, i) = self.index(d + e);
                (self.ideal(d + e), i, m.len())
            })
            .collect();
        // Row per source monomial: concatenated reduced images.
        let width: usize = targets.iter().map(|t| t.2).sum();
        let mut span = Span::new(self.p);
        for m in &mons {
            let mut row = Vec::with_capacity(width);
            for ((_, terms), (ideal, idx, len)) in fs.iter().zip(&targets) {
                let mut v = vec![0u64; *len];
                for (e, c) in terms {
                    let prod: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
                    v[idx[&prod]] = (v[idx[&prod]] + c) % self.p as u64;
                }
                ideal.reduce(&mut v);
                row.extend(v);
            }
            span.insert(row);
        }
        mons.len() - span.rank()
    }

    /// Socle dimension of `S/I` in degree d.
    pub fn socle_dim(&self, d: u32) -> usize {
        let vars: Vec<(u32, Vec<(Vec<u32>, u64)>)> = (0..self.nvars)
            .map(|i| {
                let mut e = vec![0; self.nvars];
                e[i] = 1;
                (1, vec![(e, 1)])
            })
            .collect();
        self.annihilated(d, &vars) - self.ideal(d).rank()
    }

    /// `dim ((I : f) / I)_d`.
    pub fn colon_dim(&self, d: u32, f: &Poly) -> usize {
        self.annihilated(d, &[form(f)]) - self.ideal(d).rank()
    }
}

impl Naive {
    /// Basis of `{v in S_d : f v in I}` (coordinates over `monomials(nvars, d)`).
    pub fn colon_basis(&self, d: u32, f: &Poly) -> Vec<Vec<u64>> {
        let (e, terms) = form(f);
        let (mons, _) = self.index(d);
        let ideal = self.ideal(d + e);
        let (img, idx) = self.index(d + e);
        let width = img.len();
        let mut span = Span::new(self.p);
        for (k, m) in mons.iter().enumerate() {
            let mut row = vec![0u64; width + mons.len()];
            for (t, c) in &terms {
                let prod: Vec<u32> = t.iter().zip(m).map(|(a, b)| a + b).collect();
                row[idx[&prod]] = (row[idx[&prod]] + c) % self.p as u64;
            }
            ideal.reduce(&mut row[..width]);
            row[width + k] = 1;
            span.insert(row);
        }
        span.rows_from(width).into_iter().map(|r| r[width..].to_vec()).collect()
    }

    /// Basis of the degree-d part of the ideal.
    pub fn ideal_basis(&self, d: u32) -> Vec<Vec<u64>> {
        self.ideal(d).rows_from(0)
    }
}

impl Span {
    /// Rows whose pivot lies at or beyond `col`; with full reduction these
    /// vanish before `col`.
    pub fn rows_from(&self, col: usize) -> Vec<Vec<u64>> {
        self.rows.iter().filter(|(piv, _)| *piv >= col).map(|(_, r)| r.clone()).collect()
    }
}
