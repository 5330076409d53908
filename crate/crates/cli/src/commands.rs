use std::path::{Path, PathBuf};
use std::time::Instant;

use frobsoc::bc;
use frobsoc::fermat::{self, PdVerdict};
use frobsoc::fthreshold::{estimate_c_at, kv_bound_check, q_schedule};
use frobsoc::poly::{is_power_of, Poly, RingFile, RingSpec};
use frobsoc::quotient::{Budget, QuotientRing};
use frobsoc::resolutions::{beta2, hom_length, tor1_tensor_length};
use frobsoc::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Command, QArgs, RingArgs};
use crate::report::Report;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::ResourceExhausted(_)) => 3,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub struct Ctx {
    pub budget: Budget,
    pub jobs: usize,
    pub verbose: u8,
}

/// A report plus whether some q was dropped for lack of memory.
pub struct Outcome {
    pub report: Report,
    pub exhausted: bool,
}

struct Loaded {
    spec: RingSpec,
    gens: Vec<Poly>,
    label: String,
    ideal: String,
}

fn bundled_rings() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../rings")
}

fn find_ring(name: &str) -> CliResult<PathBuf> {
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return Ok(direct);
    }
    let mut dirs: Vec<PathBuf> = std::env::var_os("FROBSOC_RINGS")
        .map(|v| std::env::split_paths(&v).collect())
        .unwrap_or_default();
    dirs.push(PathBuf::from("rings"));
    dirs.push(bundled_rings());
    dirs.into_iter()
        .map(|d| d.join(name))
        .find(|p| p.is_file())
        .ok_or_else(|| CliError::Usage(format!("ring file `{name}` not found")))
}

fn read_ring_file(name: &str) -> CliResult<RingFile> {
    let path = find_ring(name)?;
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_ideal(spec: &RingSpec, text: &str) -> CliResult<Vec<Poly>> {
    if text.trim() == "m" {
        Ok(spec.maximal_ideal())
    } else {
        Ok(spec.parse_ideal(text)?)
    }
}

fn load(args: &RingArgs) -> CliResult<Loaded> {
    let inline = [args.p, args.n, args.d];
    match (&args.ring, inline.iter().filter(|v| v.is_some()).count()) {
        (Some(name), 0) => {
            let file = read_ring_file(name)?;
            let spec = file.into_spec()?;
            let ideal = args
                .ideal
                .clone()
                .or(file.ideal.clone())
                .unwrap_or_else(|| "m".into());
            let gens = parse_ideal(&spec, &ideal)?;
            Ok(Loaded {
                spec,
                gens,
                label: name.clone(),
                ideal,
            })
        }
        (None, 3) => {
            let (p, n, d) = (args.p.unwrap(), args.n.unwrap(), args.d.unwrap());
            let (spec, default) = fermat::fermat_ring(p, n, d)?;
            let (gens, ideal) = match &args.ideal {
                Some(text) => (parse_ideal(&spec, text)?, text.clone()),
                None => (default, format!("x^{d}, y^{d}, z^{d}")),
            };
            Ok(Loaded {
                spec,
                gens,
                label: format!("fermat p={p} n={n} d={d}"),
                ideal,
            })
        }
        _ => Err(CliError::Usage(
            "give exactly one ring source: --ring FILE, or all of --p --n --d".into(),
        )),
    }
}

fn resolve_qs(p: u32, args: &QArgs) -> CliResult<Vec<u64>> {
    let qs = match (args.q.is_empty(), args.q_max) {
        (false, None) => args.q.clone(),
        (true, Some(max)) => q_schedule(p, max, false),
        (true, None) => return Err(CliError::Usage("give --q or --q-max".into())),
        (false, Some(_)) => return Err(CliError::Usage("give --q or --q-max, not both".into())),
    };
    validate_qs(p, &qs)?;
    Ok(qs)
}

fn validate_qs(p: u32, qs: &[u64]) -> CliResult<()> {
    match qs.iter().find(|&&q| !is_power_of(q, p)) {
        Some(&q) => Err(Error::NotPowerOfP { q, p }.into()),
        None => Ok(()),
    }
}

/// Runs `f` over `xs` on `ctx.jobs` threads, keeping input order. Values
/// that exhaust the memory budget become warnings.
fn sweep<T, F>(ctx: &Ctx, xs: &[u64], f: F) -> CliResult<(Vec<(u64, T)>, Vec<String>)>
where
    T: Send,
    F: Fn(u64) -> frobsoc::Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let results: Vec<(u64, frobsoc::Result<T>)> = pool.install(|| {
        xs.par_iter()
            .map(|&x| {
                let start = Instant::now();
                let r = f(x);
                if ctx.verbose > 0 {
                    eprintln!("q = {x}: {:.3}s", start.elapsed().as_secs_f64());
                }
                (x, r)
            })
            .collect()
    });
    let mut done = Vec::new();
    let mut warnings = Vec::new();
    for (x, r) in results {
        match r {
            Ok(v) => done.push((x, v)),
            Err(Error::ResourceExhausted(m)) => warnings.push(format!("q = {x} skipped: {m}")),
            Err(e) => return Err(e.into()),
        }
    }
    Ok((done, warnings))
}

fn finish(mut report: Report, warnings: Vec<String>) -> Outcome {
    let exhausted = !warnings.is_empty();
    report.warnings.extend(warnings);
    Outcome { report, exhausted }
}

fn quotient(ctx: &Ctx, l: &Loaded, q: u64) -> frobsoc::Result<QuotientRing> {
    Ok(QuotientRing::frobenius(&l.spec, &l.gens, q)?.with_budget(ctx.budget))
}

fn ring_params(report: &mut Report, l: &Loaded) {
    report.param("ring", &l.label);
    report.param("p", l.spec.p());
    report.param("ideal", &l.ideal);
}

pub fn run(ctx: &Ctx, command: &Command) -> CliResult<Outcome> {
    match command {
        Command::Tsd { ring, q } => {
            let l = load(ring)?;
            let qs = resolve_qs(l.spec.p(), q)?;
            let (rows, warnings) = sweep(ctx, &qs, |q| {
                quotient(ctx, &l, q)?
                    .hilbert()?
                    .top_degree()
                    .ok_or_else(|| Error::Invalid("R/I^[q] is zero".into()))
            })?;
            let mut r = Report::new("tsd", &["q", "tsd"]);
            ring_params(&mut r, &l);
            r.rows = rows.into_iter().map(|(q, t)| vec![q.into(), t.into()]).collect();
            Ok(finish(r, warnings))
        }
        Command::Hk { ring, q } => {
            let l = load(ring)?;
            let qs = resolve_qs(l.spec.p(), q)?;
            let (rows, warnings) = sweep(ctx, &qs, |q| quotient(ctx, &l, q)?.hilbert())?;
            let mut r = Report::new("hk", &["q", "length", "hilbert"]);
            ring_params(&mut r, &l);
            r.rows = rows
                .into_iter()
                .map(|(q, h)| vec![q.into(), h.length().into(), json!(h.dims())])
                .collect();
            Ok(finish(r, warnings))
        }
        Command::Socle { ring, q } => {
            let l = load(ring)?;
            let qs = resolve_qs(l.spec.p(), q)?;
            let (rows, warnings) = sweep(ctx, &qs, |q| quotient(ctx, &l, q)?.socle())?;
            let mut r = Report::new("socle", &["q", "length", "top_degree", "support", "dims"]);
            ring_params(&mut r, &l);
            r.rows = rows
                .into_iter()
                .map(|(q, s)| {
                    vec![
                        q.into(),
                        s.length().into(),
                        json!(s.top_degree()),
                        json!(s.support()),
                        json!(s.dims()),
                    ]
                })
                .collect();
            Ok(finish(r, warnings))
        }
        Command::Cthreshold { ring, q } => {
            let l = load(ring)?;
            let qs = resolve_qs(l.spec.p(), q)?;
            let est = estimate_c_at(&l.spec, &l.gens, &qs, ctx.budget)?;
            let mut r = Report::new("cthreshold", &["q", "tsd", "lower_bound"]);
            ring_params(&mut r, &l);
            r.rows = est
                .samples
                .iter()
                .map(|&(q, t)| {
                    let lb = est.lower_bounds.iter().find(|(lq, _)| *lq == q).map(|(_, b)| b.to_string());
                    vec![q.into(), t.into(), json!(lb)]
                })
                .collect();
            let mut detail = json!({
                "c": est.c.to_string(),
                "law": est.law.map(|law| format!("floor({} q) + {}", law.alpha, law.beta)),
                "empirical": est.empirical,
                "estimate": est,
            });
            if est.a_invariant.is_some() {
                let sampled: Vec<u64> = est.samples.iter().map(|s| s.0).collect();
                let kv = kv_bound_check(&l.spec, &l.gens, &sampled)?;
                detail["kv_strict"] = json!(kv.strict_everywhere);
                detail["kv"] = json!(kv);
            }
            r.detail = Some(detail);
            let warnings = est.stopped.clone().into_iter().collect();
            Ok(finish(r, warnings))
        }
        Command::Bc { n, d, q, ring } => bc_table(ctx, *n, *d, q, ring.as_deref()),
        Command::Identities { n_max } => {
            let mut r = Report::new("identities", &["n", "c1", "c2"]);
            r.param("n_max", n_max);
            for n in 2..=*n_max {
                let c1 = bc::identity_c1(n)?;
                let c2 = bc::identity_c2(n)?;
                if c1 != 0.into() || c2 != 0.into() {
                    r.ok = false;
                }
                r.rows.push(vec![n.into(), c1.to_string().into(), c2.to_string().into()]);
            }
            Ok(finish(r, Vec::new()))
        }
        Command::Fermat { p, n, d, q_max } => {
            let q_max = q_max.unwrap_or_else(|| fermat::default_q_max(*p));
            let v = fermat::classify_with(*p, *n, *d, q_max, ctx.budget)?;
            let mut r = Report::new("fermat", &["q", "pd", "b1", "b2"]);
            r.param("p", p);
            r.param("n", n);
            r.param("d", d);
            r.param("q_max", q_max);
            r.rows = v
                .probes
                .iter()
                .map(|probe| match probe.verdict {
                    PdVerdict::Finite { b1, b2 } => vec![probe.q.into(), "finite".into(), b1.into(), b2.into()],
                    PdVerdict::Infinite => vec![probe.q.into(), "infinite".into(), Value::Null, Value::Null],
                })
                .collect();
            let warnings = v.notes.iter().filter(|n| n.contains("skipped")).cloned().collect();
            r.detail = Some(json!(v));
            Ok(finish(r, warnings))
        }
        Command::SyzygyGap { p, a_min, a_max } => {
            if a_min > a_max || *a_min == 0 {
                return Err(CliError::Usage("need 1 <= a-min <= a-max".into()));
            }
            let as_: Vec<u64> = (*a_min as u64..=*a_max as u64).collect();
            let (rows, warnings) = sweep(ctx, &as_, |a| fermat::syzygy_gap(a as u32, *p))?;
            let mut r = Report::new("syzygy-gap", &["a", "delta"]);
            r.param("p", p);
            r.rows = rows.into_iter().map(|(a, g)| vec![a.into(), g.into()]).collect();
            Ok(finish(r, warnings))
        }
        Command::Betti { ring, j, u, a, q } => {
            let file = read_ring_file(ring)?;
            let spec = file.into_spec()?;
            let qs = resolve_qs(spec.p(), q)?;
            let j_gens = parse_ideal(&spec, j)?;
            let u_poly = spec.parse_poly(u)?;
            let a_gens = parse_ideal(&spec, a)?;
            let mut i_gens = j_gens.clone();
            i_gens.push(u_poly.clone());
            let (rows, warnings) = sweep(ctx, &qs, |q| {
                let hom = hom_length(&spec, &a_gens, &i_gens, q)?;
                let tor = tor1_tensor_length(&spec, &j_gens, &u_poly, &a_gens, q)?;
                let b2 = beta2(&spec, &i_gens, q)?;
                Ok((hom as i64, tor as i64, b2 as i64))
            })?;
            let mut r = Report::new(
                "betti",
                &["q", "hom", "tor1", "beta2", "beta2_minus_hom", "hom_minus_tor1", "beta2_minus_tor1"],
            );
            r.param("ring", ring);
            r.param("J", j);
            r.param("u", u);
            r.param("a", a);
            r.rows = rows
                .iter()
                .map(|&(q, (h, t, b))| vec![q.into(), h.into(), t.into(), b.into(), (b - h).into(), (h - t).into(), (b - t).into()])
                .collect();
            let diffs: Vec<[i64; 3]> = rows.iter().map(|&(_, (h, t, b))| [b - h, h - t, b - t]).collect();
            let stable = diffs.len() >= 2 && diffs[diffs.len() - 1] == diffs[diffs.len() - 2];
            r.detail = Some(json!({ "differences_stable": stable }));
            Ok(finish(r, warnings))
        }
    }
}

fn bc_table(ctx: &Ctx, n: u32, d: u32, qs: &[u64], ring: Option<&str>) -> CliResult<Outcome> {
    let loaded = match ring {
        Some(name) => {
            let file = read_ring_file(name)?;
            let spec = file.into_spec()?;
            validate_qs(spec.p(), qs)?;
            if spec.relations().len() != 1 || spec.nvars() != n as usize + 1 {
                return Err(CliError::Usage(format!(
                    "{name} is not a hypersurface in {} variables",
                    n + 1
                )));
            }
            let gens = spec.maximal_ideal();
            Some(Loaded {
                spec,
                gens,
                label: name.to_string(),
                ideal: "m".into(),
            })
        }
        None => None,
    };
    let mut columns = vec!["q", "m", "L", "h"];
    if loaded.is_some() {
        columns.extend(["tsd", "length", "socle_length", "attains", "socle_concentrated"]);
    }
    let mut r = Report::new("bc", &columns);
    r.param("n", n);
    r.param("d", d);
    r.param("socle_constant", bc::socle_constant(n, d)?.to_string());
    let (rows, warnings) = sweep(ctx, qs, |q| {
        let m = bc::m_of_q(n, d, q);
        let l = bc::l_of_q(n, d, q);
        let h = bc::h_of_q(n, d, q, &bc::xi_from_m(n, q, m))?;
        let mut row = vec![json!(q), json!(m), json!(l.to_string()), json!(h.to_string())];
        if let Some(ld) = &loaded {
            let ring = QuotientRing::frobenius(&ld.spec, &ld.gens, q)?.with_budget(ctx.budget);
            let hilb = ring.hilbert()?;
            let soc = ring.socle()?;
            let tsd = hilb.top_degree().unwrap_or(0);
            let attains = tsd as u64 == m && l == (hilb.length() as u64).into();
            row.extend([
                json!(tsd),
                json!(hilb.length()),
                json!(soc.length()),
                json!(attains),
                json!(soc.concentrated_in(tsd)),
            ]);
        }
        Ok(row)
    })?;
    if let Some(ld) = &loaded {
        r.param("ring", &ld.label);
    }
    r.rows = rows.into_iter().map(|(_, row)| row).collect();
    Ok(finish(r, warnings))
}
