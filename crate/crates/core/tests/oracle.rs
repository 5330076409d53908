mod common;

use common::{monomials, Naive, Span};
use frobsoc::linalg::PrimeField;
use frobsoc::poly::{Monomial, Poly, RingSpec};
use frobsoc::quotient::{colon_slice, QuotientRing};
use frobsoc::resolutions::tor1_tensor_length;
use frobsoc::Error;
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

/// A random form: `(degree, coefficient per monomial)`.
fn form_strategy(nvars: usize, deg: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = (u32, Vec<u32>)> {
    deg.prop_flat_map(move |d| {
        let n = monomials(nvars, d).len();
        (Just(d), prop::collection::vec(0u32..3, n))
    })
}

fn to_poly(field: PrimeField, nvars: usize, (d, coeffs): &(u32, Vec<u32>)) -> Poly {
    Poly::from_terms(
        field,
        nvars,
        monomials(nvars, *d)
            .into_iter()
            .zip(coeffs)
            .map(|(m, &c)| (Monomial::new(m), c % field.p())),
    )
}

/// `g^q` over `F_p`: exponents scale, coefficients are fixed by Frobenius.
fn frob(g: &Poly, q: u64) -> Poly {
    Poly::from_terms(
        g.field(),
        g.nvars(),
        g.terms().map(|(m, c)| (Monomial::new(m.exponents().iter().map(|e| e * q as u32).collect()), c)),
    )
}

#[derive(Debug, Clone)]
struct Case {
    p: u32,
    nvars: usize,
    relation: Option<(u32, Vec<u32>)>,
    powers: Vec<Option<u32>>,
    extra: Vec<(u32, Vec<u32>)>,
    divisor: (u32, Vec<u32>),
    q_exp: u32,
}

fn case_strategy() -> impl Strategy<Value = Case> {
    (prop_oneof![Just(2u32), Just(3u32)], 1usize..=3).prop_flat_map(|(p, nvars)| {
        let max_exp = if p == 2 { 2 } else { 1 };
        (
            prop::option::of(form_strategy(nvars, 1..=3)),
            prop::collection::vec(prop::option::weighted(0.75, 1u32..=3), nvars),
            prop::collection::vec(form_strategy(nvars, 1..=2), 0..=2),
            form_strategy(nvars, 1..=2),
            0u32..=max_exp,
        )
            .prop_map(move |(relation, powers, extra, divisor, q_exp)| Case {
                p,
                nvars,
                relation,
                powers,
                extra,
                divisor,
                q_exp,
            })
    })
}

impl Case {
    fn build(&self) -> (RingSpec, Vec<Poly>, Poly, u64) {
        let field = PrimeField::new(self.p).unwrap();
        let vars: Vec<String> = VARS[..self.nvars].iter().map(|s| s.to_string()).collect();
        let relations: Vec<Poly> = self
            .relation
            .iter()
            .map(|f| to_poly(field, self.nvars, f))
            .filter(|f| !f.is_zero())
            .collect();
        let spec = RingSpec::new(self.p, vars, relations).unwrap();
        let mut gens: Vec<Poly> = self
            .powers
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|a| Poly::var(field, self.nvars, i).pow(a)))
            .collect();
        gens.extend(self.extra.iter().map(|f| to_poly(field, self.nvars, f)).filter(|f| !f.is_zero()));
        let divisor = to_poly(field, self.nvars, &self.divisor);
        (spec, gens, divisor, (self.p as u64).pow(self.q_exp))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn capped_slices_agree_with_naive_span(case in case_strategy()) {
        let (spec, gens, divisor, q) = case.build();
        let ring = QuotientRing::frobenius(&spec, &gens, q).unwrap();
        let table = match ring.hilbert() {
            Ok(t) => t,
            Err(Error::NonArtinian { .. }) => {
                // The naive span must then still be nonzero at the bound.
                let powered: Vec<Poly> = gens.iter().map(|g| frob(g, q)).collect();
                let naive = Naive::new(&spec, &powered);
                prop_assert!(naive.quotient_dim(ring.artinian_bound()) > 0);
                return Ok(());
            }
            Err(e) => panic!("{e}"),
        };
        let powered: Vec<Poly> = gens.iter().map(|g| frob(g, q)).collect();
        let naive = Naive::new(&spec, &powered);
        let top = table.top_degree().unwrap_or(0);
        for d in 0..=top + 2 {
            prop_assert_eq!(table.get(d), naive.quotient_dim(d), "hilbert, degree {}", d);
        }
        let socle = ring.socle().unwrap();
        for d in 0..=top {
            prop_assert_eq!(socle.get(d), naive.socle_dim(d), "socle, degree {}", d);
        }
        prop_assert_eq!(socle.top_degree(), table.top_degree());

        if divisor.is_zero() {
            return Ok(());
        }
        let colon = colon_slice(&spec, &gens, &divisor, q).unwrap();
        let dq = frob(&divisor, q);
        for d in 0..=top + 1 {
            prop_assert_eq!(colon.get(d), naive.colon_dim(d, &dq), "colon, degree {}", d);
        }
    }
}

fn quadric() -> RingSpec {
    RingSpec::parse(2, &["x", "y", "z", "w"], &["x*y - z*w"]).unwrap()
}

#[test]
fn colon_on_the_quadric_matches_naive() {
    let spec = quadric();
    let j = spec.parse_ideal("x, y, z").unwrap();
    let w = spec.parse_poly("w").unwrap();
    let q = 2;
    let table = colon_slice(&spec, &j, &w, q).unwrap();
    let powered: Vec<Poly> = j.iter().map(|g| frob(g, q)).collect();
    let naive = Naive::new(&spec, &powered);
    let wq = frob(&w, q);
    for d in 0..12 {
        assert_eq!(table.get(d), naive.colon_dim(d, &wq), "degree {d}");
    }
}

/// Multiplies a degree-d coordinate vector by the variable `i`.
fn shift(v: &[u64], nvars: usize, d: u32, i: usize) -> Vec<u64> {
    let src = monomials(nvars, d);
    let dst = monomials(nvars, d + 1);
    let mut out = vec![0; dst.len()];
    for (m, &c) in src.iter().zip(v) {
        if c != 0 {
            let mut e = m.clone();
            e[i] += 1;
            out[dst.iter().position(|x| *x == e).unwrap()] = c;
        }
    }
    out
}

/// Tor_1 length on the quadric with `J = (x, y, z)`, `u = w`, `a = m`,
/// computed in the polynomial ring `S`. Frobenius is flat on `S`, so
/// `(J:u)^[q] R` lifts to `((J^[q] + C^[q]) : w^q) + C` with `C = (xy - zw)`.
fn naive_tor1(q: u64) -> usize {
    let spec = quadric();
    let field = spec.field();
    let c = spec.relations()[0].clone();
    let jq: Vec<Poly> = spec.parse_ideal("x, y, z").unwrap().iter().map(|g| frob(g, q)).collect();
    let wq = frob(&spec.parse_poly("w").unwrap(), q);
    let no_rel = RingSpec::polynomial_ring(2, &["x", "y", "z", "w"]).unwrap();
    let mut a_gens = jq.clone();
    a_gens.push(frob(&c, q));
    let a_side = Naive::new(&no_rel, &a_gens);
    let b_side = Naive::new(&spec, &jq);
    let c_only = Naive::new(&spec, &[]);
    let _ = field;

    let bound = 3 * q as u32 + 3;
    let mut prev_b: Vec<Vec<u64>> = Vec::new();
    let mut contributions = Vec::new();
    for d in 0..=bound {
        let b = b_side.colon_basis(d, &wq);
        let mut span = Span::new(2);
        for v in a_side.colon_basis(d, &wq) {
            span.insert(v);
        }
        for v in c_only.ideal_basis(d) {
            span.insert(v);
        }
        if d > 0 {
            for v in &prev_b {
                for i in 0..4 {
                    span.insert(shift(v, 4, d - 1, i));
                }
            }
        }
        contributions.push(b.len() - span.rank());
        prev_b = b;
    }
    let n = contributions.len();
    assert_eq!(&contributions[n - 2..], &[0, 0], "naive Tor_1 not stabilized");
    contributions.iter().sum()
}

#[test]
fn tor1_matches_naive_lift() {
    let spec = quadric();
    let j = spec.parse_ideal("x, y, z").unwrap();
    let w = spec.parse_poly("w").unwrap();
    for q in [2, 4] {
        let lib = tor1_tensor_length(&spec, &j, &w, &spec.maximal_ideal(), q).unwrap();
        assert_eq!(lib, naive_tor1(q), "q = {q}");
    }
}
