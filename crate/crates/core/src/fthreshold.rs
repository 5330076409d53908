//! Diagonal F-thresholds `c^I(R) = lim t.s.d(R/I^[q]) / q` from finitely
//! many samples, plus the bounds that bracket them.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Poly, RingSpec};
use crate::quotient::{Budget, QuotientRing};

/// `a(R) = Σ deg f_i - (number of variables)` for a complete intersection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AInvariantReport {
    pub a: i64,
    pub relation_degrees: Vec<u32>,
    pub nvars: usize,
}

/// Coefficients of `∏ (1 - t^e_i) / (1 - t)^n` up to `t^top`.
fn ci_hilbert_series(nvars: usize, degrees: &[u32], top: u32) -> Vec<i64> {
    let len = top as usize + 1;
    let mut s = vec![0i64; len];
    s[0] = 1;
    for &e in degrees {
        for k in (e as usize..len).rev() {
            s[k] -= s[k - e as usize];
        }
    }
    for _ in 0..nvars {
        for k in 1..len {
            s[k] += s[k - 1];
        }
    }
    s
}

/// Certifies that the relations form a regular sequence by comparing the
/// Hilbert function of `S / C` with the complete-intersection series through
/// degree `Σ deg f_i`, then returns the a-invariant.
pub fn a_invariant(spec: &RingSpec) -> Result<AInvariantReport> {
    let degrees = spec.relation_degrees();
    let top: u32 = degrees.iter().sum();
    let expected = ci_hilbert_series(spec.nvars(), &degrees, top);
    let ring = QuotientRing::ambient(spec, &[])?;
    for (d, &want) in expected.iter().enumerate() {
        let got = ring.slice(d as u32)?.dim() as i64;
        if got != want {
            return Err(Error::NotCompleteIntersection(format!(
                "degree {d} piece has dimension {got}, a complete intersection would give {want}"
            )));
        }
    }
    Ok(AInvariantReport {
        a: top as i64 - spec.nvars() as i64,
        relation_degrees: degrees,
        nvars: spec.nvars(),
    })
}

/// `t.s.d(q) = ⌊α q⌋ + β` for every sample with `q >= valid_from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffineLaw {
    #[serde(serialize_with = "ser_ratio")]
    pub alpha: Rational64,
    pub beta: i64,
    pub valid_from: u64,
}

impl AffineLaw {
    pub fn eval(&self, q: u64) -> i64 {
        (self.alpha * Rational64::from_integer(q as i64)).floor().to_integer() + self.beta
    }
}

pub(crate) fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Point value when a law fits, otherwise a closed interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CEstimate {
    Exact(Rational64),
    Interval(Rational64, Rational64),
}

impl CEstimate {
    pub fn exact(&self) -> Option<Rational64> {
        match self {
            CEstimate::Exact(c) => Some(*c),
            CEstimate::Interval(..) => None,
        }
    }

    pub fn contains(&self, x: Rational64) -> bool {
        match self {
            CEstimate::Exact(c) => *c == x,
            CEstimate::Interval(lo, hi) => *lo <= x && x <= *hi,
        }
    }

    /// Upper end: the value itself or the interval's right endpoint.
    pub fn upper(&self) -> Rational64 {
        match self {
            CEstimate::Exact(c) | CEstimate::Interval(_, c) => *c,
        }
    }
}

impl std::fmt::Display for CEstimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CEstimate::Exact(c) => write!(f, "{c}"),
            CEstimate::Interval(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

impl Serialize for CEstimate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FThresholdEstimate {
    /// `(q, t.s.d(R/I^[q]))`, increasing in `q`.
    pub samples: Vec<(u64, u32)>,
    /// `None` when the relations are not a complete intersection.
    pub a_invariant: Option<i64>,
    /// `(q, (t.s.d - a)/q)`; complete intersections only.
    #[serde(serialize_with = "ser_pairs")]
    pub lower_bounds: Vec<(u64, Rational64)>,
    pub law: Option<AffineLaw>,
    pub c: CEstimate,
    /// `c >= -a(R)`.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub a_bound: Option<Rational64>,
    /// `c >= (number of variables)/2` for hypersurfaces and `I = m`.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub hypersurface_bound: Option<Rational64>,
    /// `K L` where `m^K ⊆ I` and `L` counts generators of `m^K`.
    pub trivial_upper_bound: Option<u64>,
    /// True when no complete-intersection structure backs the limit.
    pub empirical: bool,
    /// Why sampling stopped before `q_max`, if it did.
    pub stopped: Option<String>,
}

fn ser_pairs<S: serde::Serializer>(v: &[(u64, Rational64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (q, r) in v {
        seq.serialize_element(&(q, r.to_string()))?;
    }
    seq.end()
}

impl FThresholdEstimate {
    pub fn lower_bounds_nondecreasing(&self) -> bool {
        self.lower_bounds.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    /// Largest of every reported lower bound.
    pub fn best_lower_bound(&self) -> Option<Rational64> {
        self.lower_bounds
            .iter()
            .map(|(_, r)| *r)
            .chain(self.a_bound)
            .chain(self.hypersurface_bound)
            .max()
    }
}

/// Powers `1, p, p^2, ...` (from `p` unless `include_one`) up to `q_max`.
pub fn q_schedule(p: u32, q_max: u64, include_one: bool) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = if include_one { 1 } else { p as u64 };
    while q <= q_max {
        out.push(q);
        match q.checked_mul(p as u64) {
            Some(n) => q = n,
            None => break,
        }
    }
    out
}

/// Fits `t.s.d = ⌊α q⌋ + β` through the last two samples, taking the
/// smallest denominator `<= max_den` that reproduces their difference, ties
/// broken by closeness to the secant slope. `valid_from` is the first sample
/// from which every later sample obeys the law.
pub fn fit_affine(samples: &[(u64, u32)], max_den: i64) -> Option<AffineLaw> {
    let n = samples.len();
    if n < 2 {
        return None;
    }
    let (q1, t1) = samples[n - 2];
    let (q2, t2) = samples[n - 1];
    let (q1, q2) = (q1 as i64, q2 as i64);
    let delta = t2 as i64 - t1 as i64;
    let span = q2 - q1;
    let slope = Rational64::new(delta, span);
    let floor = |a: i64, b: i64, q: i64| Integer::div_floor(&(a * q), &b);
    for b in 1..=max_den {
        let lo = (delta - 1) * b / span - 1;
        let hi = (delta + 1) * b / span + 1;
        let best = (lo..=hi)
            .filter(|&a| a.gcd(&b) == 1)
            .filter(|&a| floor(a, b, q2) - floor(a, b, q1) == delta)
            .min_by_key(|&a| (Rational64::new(a, b) - slope).abs());
        if let Some(a) = best {
            let alpha = Rational64::new(a, b);
            let beta = t2 as i64 - floor(a, b, q2);
            let mut law = AffineLaw {
                alpha,
                beta,
                valid_from: q1 as u64,
            };
            for &(q, t) in samples[..n - 2].iter().rev() {
                if law.eval(q) == t as i64 {
                    law.valid_from = q;
                } else {
                    break;
                }
            }
            return Some(law);
        }
    }
    None
}

/// Top socle degrees of `R / I^[q]` for each `q`, stopping at the first
/// failure; the error message is returned alongside the partial samples.
pub fn tsd_samples(
    spec: &RingSpec,
    ideal_gens: &[Poly],
    qs: &[u64],
    budget: Budget,
) -> Result<(Vec<(u64, u32)>, Option<String>)> {
    let mut samples = Vec::new();
    for &q in qs {
        let ring = QuotientRing::frobenius(spec, ideal_gens, q)?.with_budget(budget);
        match ring.hilbert() {
            Ok(h) => samples.push((
                q,
                h.top_degree().ok_or_else(|| Error::Invalid("quotient is zero".into()))?,
            )),
            Err(Error::ResourceExhausted(msg)) => return Ok((samples, Some(format!("q = {q}: {msg}")))),
            Err(e) => return Err(e),
        }
    }
    Ok((samples, None))
}

/// Samples at `q = p, p^2, ... <= q_max`.
pub fn estimate_c(spec: &RingSpec, ideal_gens: &[Poly], q_max: u64) -> Result<FThresholdEstimate> {
    let qs = q_schedule(spec.p(), q_max, false);
    estimate_c_at(spec, ideal_gens, &qs, Budget::default())
}

/// Same as [`estimate_c`] on an explicit increasing list of `q`.
pub fn estimate_c_at(spec: &RingSpec, ideal_gens: &[Poly], qs: &[u64], budget: Budget) -> Result<FThresholdEstimate> {
    let (samples, stopped) = tsd_samples(spec, ideal_gens, qs, budget)?;
    if samples.is_empty() {
        return Err(Error::ResourceExhausted(
            stopped.unwrap_or_else(|| "no q values to sample".into()),
        ));
    }
    let a = a_invariant(spec).ok().map(|r| r.a);
    let is_max = is_maximal_ideal(spec, ideal_gens);
    let hypersurface = spec.relations().len() == 1 && is_max;
    Ok(from_samples(
        samples,
        spec.p(),
        spec.nvars(),
        a,
        hypersurface,
        trivial_upper_bound(spec, ideal_gens).ok(),
        stopped,
    ))
}

fn is_maximal_ideal(spec: &RingSpec, gens: &[Poly]) -> bool {
    let mut vars: Vec<Poly> = spec.maximal_ideal();
    gens.len() == vars.len() && {
        vars.retain(|v| !gens.contains(v));
        vars.is_empty()
    }
}

/// `K L` with `m^K ⊆ I` and `L = dim R_K`, the generator count of `m^K`.
pub fn trivial_upper_bound(spec: &RingSpec, ideal_gens: &[Poly]) -> Result<u64> {
    let quotient = QuotientRing::frobenius(spec, ideal_gens, 1)?.hilbert()?;
    let k = quotient.top_degree().map_or(0, |t| t + 1);
    let l = QuotientRing::ambient(spec, &[])?.slice(k)?.dim();
    Ok(k as u64 * l as u64)
}

/// Assembles an estimate from precomputed samples.
pub fn from_samples(
    samples: Vec<(u64, u32)>,
    p: u32,
    nvars: usize,
    a: Option<i64>,
    hypersurface_max_ideal: bool,
    trivial_upper_bound: Option<u64>,
    stopped: Option<String>,
) -> FThresholdEstimate {
    let lower_bounds: Vec<(u64, Rational64)> = match a {
        Some(a) => samples
            .iter()
            .map(|&(q, t)| (q, Rational64::new(t as i64 - a, q as i64)))
            .collect(),
        None => Vec::new(),
    };
    let max_den = 2 * (p as i64) * (p as i64);
    let law = fit_affine(&samples, max_den);
    let a_bound = a.map(|a| Rational64::from_integer(-a));
    let hypersurface_bound = hypersurface_max_ideal.then(|| Rational64::new(nvars as i64, 2));
    let mut est = FThresholdEstimate {
        samples,
        a_invariant: a,
        lower_bounds,
        law,
        c: CEstimate::Exact(Rational64::from_integer(0)),
        a_bound,
        hypersurface_bound,
        trivial_upper_bound,
        empirical: a.is_none(),
        stopped,
    };
    est.c = match law {
        Some(l) => CEstimate::Exact(l.alpha),
        None => {
            let &(q, t) = est.samples.last().unwrap();
            // m^(t+1) ⊆ I^[q] gives t.s.d(q q') < (t + 1 + nvars) q'.
            let hi = Rational64::new(t as i64 + 1 + nvars as i64, q as i64);
            let lo = est.best_lower_bound().unwrap_or(Rational64::from_integer(0)).min(hi);
            CEstimate::Interval(lo, hi)
        }
    };
    est
}

/// `h (c^2 - 3c + 3)`.
pub fn ehk_from_c(h: u32, c: Rational64) -> Rational64 {
    Rational64::from_integer(h as i64) * (c * c - Rational64::from_integer(3) * c + Rational64::from_integer(3))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KvRow {
    pub q: u64,
    pub tsd: u32,
    /// `(s - a) q + a`.
    pub bound: i64,
    pub holds: bool,
    pub slack: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KvReport {
    /// `t.s.d(R/I)`.
    pub s: u32,
    pub a: i64,
    pub rows: Vec<KvRow>,
    /// Every sampled `q` has positive slack.
    pub strict_everywhere: bool,
}

/// Checks `t.s.d(R/I^[q]) >= (s - a) q + a` at each `q`.
pub fn kv_bound_check(spec: &RingSpec, ideal_gens: &[Poly], qs: &[u64]) -> Result<KvReport> {
    let a = a_invariant(spec)?.a;
    let s = QuotientRing::frobenius(spec, ideal_gens, 1)?
        .hilbert()?
        .top_degree()
        .ok_or_else(|| Error::Invalid("quotient is zero".into()))?;
    let mut rows = Vec::new();
    for &q in qs {
        let tsd = QuotientRing::frobenius(spec, ideal_gens, q)?
            .hilbert()?
            .top_degree()
            .ok_or_else(|| Error::Invalid("quotient is zero".into()))?;
        let bound = (s as i64 - a) * q as i64 + a;
        let slack = tsd as i64 - bound;
        rows.push(KvRow {
            q,
            tsd,
            bound,
            holds: slack >= 0,
            slack,
        });
    }
    let strict_everywhere = !rows.is_empty() && rows.iter().all(|r| r.slack > 0);
    Ok(KvReport {
        s,
        a,
        rows,
        strict_everywhere,
    })
}
