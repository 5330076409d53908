//! Strong semistability of the syzygy bundle of `(x^d, y^d, z^d)` on the
//! Fermat curve `x^n + y^n + z^n = 0` over `F_p`.
//!
//! Projective dimension of `I^[q]` is probed through the Hilbert series: when
//! `pd I^[q] < ∞` the resolution is `0 -> R(-b1) ⊕ R(-b2) -> R(-qd)^3 -> R`,
//! so `P(t) (1-t)^3 / (1-t^n) = 1 - 3t^(qd) + t^(b1) + t^(b2)`.

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fthreshold::{estimate_c_at, q_schedule, CEstimate, FThresholdEstimate};
use crate::poly::{Poly, RingSpec};
use crate::quotient::{hilbert_kunz, Budget, QuotientRing};

/// `F_p[x,y,z] / (x^n + y^n + z^n)` and `I = (x^d, y^d, z^d)`.
pub fn fermat_ring(p: u32, n: u32, d: u32) -> Result<(RingSpec, Vec<Poly>)> {
    if n < 3 {
        return Err(Error::Invalid(format!("Fermat degree n = {n} must be at least 3")));
    }
    if d < 1 {
        return Err(Error::Invalid("d must be at least 1".into()));
    }
    if n % p == 0 {
        return Err(Error::Invalid(format!("p = {p} divides n = {n}: the curve is singular")));
    }
    let spec = RingSpec::parse(p, &["x", "y", "z"], &[&format!("x^{n} + y^{n} + z^{n}")])?;
    let gens = spec.parse_ideal(&format!("x^{d}, y^{d}, z^{d}"))?;
    Ok((spec, gens))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "pd", rename_all = "lowercase")]
pub enum PdVerdict {
    Finite { b1: u64, b2: u64 },
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdProbe {
    pub q: u64,
    pub verdict: PdVerdict,
    /// Hilbert function of `R / I^[q]`.
    pub hilbert: Vec<usize>,
}

impl PdProbe {
    pub fn is_finite(&self) -> bool {
        matches!(self.verdict, PdVerdict::Finite { .. })
    }
}

/// Exact division of `num` by `den` (integer coefficients, `den[0] = ±1`).
fn divide_exact(num: &[i64], den: &[i64]) -> Option<Vec<i64>> {
    let dl = den.len();
    if num.len() < dl {
        return num.iter().all(|&c| c == 0).then(Vec::new);
    }
    let lead = den[dl - 1];
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dl + 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dl - 1];
        if c % lead != 0 {
            return None;
        }
        let f = c / lead;
        quot[k] = f;
        for (j, &dc) in den.iter().enumerate() {
            rem[k + j] -= f * dc;
        }
    }
    rem.iter().all(|&c| c == 0).then_some(quot)
}

fn mul_poly(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Reads `(b1, b2)` off a Hilbert function, or `None` when the series does
/// not have the finite-resolution shape.
pub fn back_twists(hilbert: &[usize], n: u32, qd: u64) -> Option<(u64, u64)> {
    let p: Vec<i64> = hilbert.iter().map(|&x| x as i64).collect();
    let cube = mul_poly(&mul_poly(&[1, -1], &[1, -1]), &[1, -1]);
    let num = mul_poly(&p, &cube);
    let mut den = vec![0i64; n as usize + 1];
    den[0] = 1;
    den[n as usize] = -1;
    let mut q = divide_exact(&num, &den)?;
    while q.last() == Some(&0) {
        q.pop();
    }
    // q - 1 + 3 t^(qd) must be t^b1 + t^b2.
    let qd = qd as usize;
    if q.len() <= qd {
        q.resize(qd + 1, 0);
    }
    q[0] -= 1;
    q[qd] += 3;
    if q.iter().any(|&c| c < 0) || q.iter().sum::<i64>() != 2 {
        return None;
    }
    let mut bs = Vec::new();
    for (k, &c) in q.iter().enumerate() {
        for _ in 0..c {
            bs.push(k as u64);
        }
    }
    Some((bs[0], bs[1]))
}

pub fn pd_probe(p: u32, n: u32, d: u32, q: u64) -> Result<PdProbe> {
    pd_probe_with(p, n, d, q, Budget::default())
}

pub fn pd_probe_with(p: u32, n: u32, d: u32, q: u64, budget: Budget) -> Result<PdProbe> {
    let (spec, gens) = fermat_ring(p, n, d)?;
    let table = QuotientRing::frobenius(&spec, &gens, q)?.with_budget(budget).hilbert()?;
    let verdict = match back_twists(table.dims(), n, q * d as u64) {
        Some((b1, b2)) => PdVerdict::Finite { b1, b2 },
        None => PdVerdict::Infinite,
    };
    Ok(PdProbe {
        q,
        verdict,
        hilbert: table.dims().to_vec(),
    })
}

/// Integer square root when exact.
fn exact_isqrt(v: i64) -> Option<u32> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|&s| s >= 0 && s * s == v).map(|s| s as u32)
}

/// Syzygy gap of `(x^a, y^a, (x+y)^a)` in `F_p[x,y]`:
/// `δ² = 4 λ(k[x,y]/(x^a, y^a, (x+y)^a)) - 3a²`.
pub fn syzygy_gap(a: u32, p: u32) -> Result<u32> {
    if a < 1 {
        return Err(Error::Invalid("a must be at least 1".into()));
    }
    let spec = RingSpec::polynomial_ring(p, &["x", "y"])?;
    let gens = spec.parse_ideal(&format!("x^{a}, y^{a}, (x + y)^{a}"))?;
    let len = hilbert_kunz(&spec, &gens, 1)?.length() as i64;
    let sq = 4 * len - 3 * (a as i64) * (a as i64);
    exact_isqrt(sq).ok_or_else(|| {
        Error::Invalid(format!(
            "4λ - 3a² = {sq} is not a perfect square (a = {a}, p = {p}, λ = {len})"
        ))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "SS")]
    Ss,
    #[serde(rename = "NotSS")]
    NotSs,
    #[serde(rename = "SS-empirical")]
    SsEmpirical,
    Inconclusive,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Ss => "SS",
            Status::NotSs => "NotSS",
            Status::SsEmpirical => "SS-empirical",
            Status::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub rule: String,
    pub data: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemistabilityVerdict {
    pub p: u32,
    pub n: u32,
    pub d: u32,
    pub status: Status,
    pub evidence: Vec<Evidence>,
    pub probes: Vec<PdProbe>,
    pub syzygy_gap: Option<u32>,
    pub c_estimate: Option<CEstimate>,
    pub estimate: Option<FThresholdEstimate>,
    pub notes: Vec<String>,
}

impl SemistabilityVerdict {
    /// `3d/2`, the threshold value exactly when the bundle is strongly
    /// semistable.
    pub fn semistable_threshold(&self) -> Rational64 {
        Rational64::new(3 * self.d as i64, 2)
    }

    pub fn first_finite(&self) -> Option<&PdProbe> {
        self.probes.iter().find(|p| p.is_finite())
    }
}

/// Default largest probe: 128 for `p = 2`, else `p^3`.
pub fn default_q_max(p: u32) -> u64 {
    if p == 2 {
        128
    } else {
        (p as u64).pow(3)
    }
}

pub fn classify(p: u32, n: u32, d: u32, q_max: u64) -> Result<SemistabilityVerdict> {
    classify_with(p, n, d, q_max, Budget::default())
}

/// Decision procedure:
/// 1. `n | d`: strongly semistable iff the syzygy gap of `a = d/n` vanishes.
/// 2. Otherwise probe `q = 1, p, p^2, ... <= q_max`; the first finite probe
///    decides by `b1 = b2`, with `c = max(b1, b2)/q`. One further probe checks
///    that finiteness persists.
/// 3. All probes infinite: `SS-empirical`, with `c` estimated from t.s.d
///    data; an estimate above `3d/2` downgrades to `Inconclusive`.
pub fn classify_with(p: u32, n: u32, d: u32, q_max: u64, budget: Budget) -> Result<SemistabilityVerdict> {
    let (spec, gens) = fermat_ring(p, n, d)?;
    let mut v = SemistabilityVerdict {
        p,
        n,
        d,
        status: Status::Inconclusive,
        evidence: Vec::new(),
        probes: Vec::new(),
        syzygy_gap: None,
        c_estimate: None,
        estimate: None,
        notes: Vec::new(),
    };
    if p == 2 {
        v.notes.push(
            "p = 2: only the Hilbert-series division test is trusted; no digit-set criterion is applied".into(),
        );
    }
    let half = v.semistable_threshold();
    if d % n == 0 {
        let a = d / n;
        let delta = syzygy_gap(a, p)?;
        v.syzygy_gap = Some(delta);
        v.status = if delta == 0 { Status::Ss } else { Status::NotSs };
        v.evidence.push(Evidence {
            rule: "n | d: syzygy gap".into(),
            data: format!("a = {a}, delta = {delta}"),
        });
        return Ok(v);
    }
    let schedule = q_schedule(p, q_max, true);
    let mut finite_at: Option<usize> = None;
    for (k, &q) in schedule.iter().enumerate() {
        if finite_at.is_some_and(|f| k > f + 1) {
            break;
        }
        let probe = match pd_probe_with(p, n, d, q, budget) {
            Ok(probe) => probe,
            Err(Error::ResourceExhausted(msg)) => {
                v.notes.push(format!("probe at q = {q} skipped: {msg}"));
                break;
            }
            Err(e) => return Err(e),
        };
        if let Some(f) = finite_at {
            if !probe.is_finite() {
                return Err(Error::Invalid(format!(
                    "projective dimension finite at q = {} but infinite at q = {q}",
                    schedule[f]
                )));
            }
        }
        if finite_at.is_none() && probe.is_finite() {
            finite_at = Some(k);
        }
        v.probes.push(probe);
    }
    if let Some(f) = finite_at {
        let probe = &v.probes[f];
        let PdVerdict::Finite { b1, b2 } = probe.verdict else { unreachable!() };
        let c = Rational64::new(b2.max(b1) as i64, probe.q as i64);
        v.c_estimate = Some(CEstimate::Exact(c));
        v.status = if b1 == b2 { Status::Ss } else { Status::NotSs };
        v.evidence.push(Evidence {
            rule: "finite projective dimension: back twists".into(),
            data: format!("q = {}, b1 = {b1}, b2 = {b2}, c = max(b)/q = {c}", probe.q),
        });
        return Ok(v);
    }
    let qs = q_schedule(p, q_max, false);
    let est = estimate_c_at(&spec, &gens, &qs, budget)?;
    v.evidence.push(Evidence {
        rule: "all probes infinite projective dimension".into(),
        data: format!(
            "q <= {}, c estimate {}",
            v.probes.last().map_or(1, |p| p.q),
            est.c
        ),
    });
    let above = match est.c {
        CEstimate::Exact(c) => c > half,
        CEstimate::Interval(lo, _) => lo > half,
    };
    v.status = if above { Status::Inconclusive } else { Status::SsEmpirical };
    if above {
        v.evidence.push(Evidence {
            rule: "c estimate exceeds 3d/2 without a finite probe".into(),
            data: format!("{} > {half}", est.c),
        });
    }
    v.c_estimate = Some(est.c);
    v.estimate = Some(est);
    Ok(v)
}
