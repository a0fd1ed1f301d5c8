use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use bispectral_core::bispectral::necessary_condition;
use bispectral_core::darboux::{
    conjugate_by_t, geronimus_transform, ul_factorize, ul_factorize_strict, Bidiagonal, BidiagonalPair, GammaSequence,
};
use bispectral_core::diffop::DiffOperator;
use bispectral_core::eigenpoly::{
    eigen_triangle, eigenpoly_backsub, eigenpoly_explicit_capped, verify_eigen, CoeffTriangle, DEFAULT_COMPOSITION_CAP,
};
use bispectral_core::hermite::{
    gamma_closed, gamma_sequence, hermite_operator, hermite_recurrence_matrix, sigma_h, GammaMode, SigmaMode,
};
use bispectral_core::recurrence::{fit_recurrence, polys_from_recurrence, BandedHessenberg, FitOutcome};
use bispectral_core::{Error, Poly, Rational};

use crate::args::{
    Command, DarbouxCommand, GammaKind, GammaSource, HermiteCommand, MatrixSource, Method, OpCommand, RecCommand,
    SigmaSelect, TestCommand,
};
use crate::output::Emitter;

pub const CAP_VAR: &str = "BSL_CAP";

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    FileNotFound(PathBuf),
    Io(String),
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> &'static str {
        match self {
            Failure::Core(e) => e.code(),
            Failure::FileNotFound(_) => "FileNotFound",
            Failure::Io(_) => "IoError",
            Failure::Usage(_) => "UsageError",
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::FileNotFound(p) => write!(f, "no such file: {}", p.display()),
            Failure::Io(m) | Failure::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Whether every checked identity held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Held,
    Violated,
}

impl Verdict {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Verdict::Held
        } else {
            Verdict::Violated
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        Verdict::from_ok(self == Verdict::Held && other == Verdict::Held)
    }
}

type Outcome = Result<Verdict, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => Failure::FileNotFound(path.to_path_buf()),
        _ => Failure::Io(format!("{}: {e}", path.display())),
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()).into())
}

fn load_op(path: &Path) -> Result<DiffOperator, Failure> {
    Ok(DiffOperator::from_json(&read(path)?)?)
}

/// A bare triangle, or any object carrying it under `coeffs`.
fn load_triangle(path: &Path) -> Result<CoeffTriangle, Failure> {
    let value: Value = parse_json(&read(path)?)?;
    let rows = match value {
        Value::Object(mut m) => m.remove("coeffs").unwrap_or(Value::Null),
        other => other,
    };
    serde_json::from_value(rows).map_err(|e| Error::Parse(e.to_string()).into())
}

fn load_matrix(source: &MatrixSource) -> Result<BandedHessenberg, Failure> {
    match (&source.rec, source.hermite) {
        (Some(path), _) => Ok(BandedHessenberg::from_json(&read(path)?)?),
        (None, Some(n_max)) => Ok(hermite_recurrence_matrix(n_max)),
        (None, None) => Err(Failure::Usage("give --rec FILE or --hermite N".into())),
    }
}

/// A list of factors, or a factor pair as written by `darboux factorize`.
fn load_factors(path: &Path) -> Result<Vec<Bidiagonal>, Failure> {
    let value: Value = parse_json(&read(path)?)?;
    let factors: Vec<Bidiagonal> = if value.is_array() {
        serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        let pair: BidiagonalPair = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        vec![pair.upper, pair.lower]
    };
    factors
        .into_iter()
        .map(|f| Ok(Bidiagonal::new(f.kind, f.diag, f.offdiag)?))
        .collect()
}

fn load_gammas(source: &GammaSource, top: usize) -> Result<GammaSequence, Failure> {
    match (&source.gammas, &source.hermite_gamma1) {
        (Some(list), _) => Ok(GammaSequence::new(list.clone())),
        (None, Some(g1)) => Ok(gamma_sequence(g1, top, &GammaMode::Constrained)?),
        (None, None) => Err(Failure::Usage("give --gammas LIST or --hermite-gamma1 G".into())),
    }
}

fn composition_cap() -> Result<usize, Failure> {
    match std::env::var(CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{CAP_VAR} must be a non-negative integer, got {v:?}")).into()),
        Err(_) => Ok(DEFAULT_COMPOSITION_CAP),
    }
}

fn text(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn texts(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(text).collect())
}

fn opt_text(r: &Option<Rational>) -> Value {
    r.as_ref().map_or(Value::Null, text)
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("rows are built with json!({{..}})"),
    }
}

fn poly_value(p: &Poly) -> Value {
    json!({ "coeffs": texts(p.coeffs()), "poly": p.to_string() })
}

/// Computes rows for each `n` in order, `workers` rows at a time, and emits
/// them as soon as their batch is done.
fn run_grid<W: Write>(
    out: &mut Emitter<W>,
    workers: usize,
    ns: RangeInclusive<usize>,
    cell: impl Fn(usize) -> Result<Vec<(Map<String, Value>, Verdict)>, Failure> + Sync,
) -> Outcome {
    let ns: Vec<usize> = ns.collect();
    let mut verdict = Verdict::Held;
    for batch in ns.chunks(workers.max(1)) {
        let results: Vec<_> = batch.par_iter().map(|&n| cell(n)).collect();
        for rows in results {
            for (row, v) in rows? {
                verdict = verdict.and(v);
                out.row(row)?;
            }
        }
    }
    Ok(verdict)
}

pub fn run<W: Write>(command: &Command, workers: usize, out: &mut Emitter<W>) -> Outcome {
    match command {
        Command::Op(c) => op(c, workers, out),
        Command::Rec(c) => rec(c, out),
        Command::Darboux(c) => darboux(c, out),
        Command::Test(c) => test(c, workers, out),
        Command::Hermite(c) => hermite(c, workers, out),
    }
}

fn op<W: Write>(command: &OpCommand, workers: usize, out: &mut Emitter<W>) -> Outcome {
    match command {
        OpCommand::Spectrum { op, n } => {
            let s = load_op(op)?.spectrum(*n);
            out.document(json!({ "n": n, "lambdas": texts(&s.lambdas), "distinct": s.distinct }))?;
            Ok(Verdict::Held)
        }
        OpCommand::Delta { op, n } => {
            let op = load_op(op)?;
            let dt = op.delta_table(*n);
            for m in 0..=*n {
                for k in 0..=m.min(op.order()) {
                    out.row(object(json!({ "n": m, "k": k, "delta": text(&dt.get(m, k)) })))?;
                }
            }
            Ok(Verdict::Held)
        }
        OpCommand::Eigenpoly { op, n, method } => {
            let op = load_op(op)?;
            let lambda = op.spectrum(*n).lambdas[*n].clone();
            let explicit = || -> Result<Poly, Failure> { Ok(eigenpoly_explicit_capped(&op, *n, composition_cap()?)?) };
            let (p, agree) = match method {
                Method::Backsub => (eigenpoly_backsub(&op, *n)?, None),
                Method::Explicit => (explicit()?, None),
                Method::Both => {
                    let a = eigenpoly_backsub(&op, *n)?;
                    let b = explicit()?;
                    let same = a == b;
                    (a, Some(same))
                }
            };
            let mut doc = object(json!({ "n": n, "lambda": text(&lambda) }));
            doc.extend(object(poly_value(&p)));
            if let Some(same) = agree {
                doc.insert("agree".into(), Value::Bool(same));
            }
            out.document(Value::Object(doc))?;
            Ok(Verdict::from_ok(agree != Some(false)))
        }
        OpCommand::Verify { op, n_max, family } => {
            let op = load_op(op)?;
            let polys = match family {
                Some(path) => load_triangle(path)?.polys(),
                None => eigen_triangle(&op, *n_max)?.polys(),
            };
            let lambdas = op.spectrum(polys.len() - 1).lambdas;
            run_grid(out, workers, 0..=polys.len() - 1, |n| {
                let ok = verify_eigen(&op, &polys[n], &lambdas[n]);
                let row = json!({ "n": n, "lambda": text(&lambdas[n]), "poly": polys[n].to_string(), "ok": ok });
                Ok(vec![(object(row), Verdict::from_ok(ok))])
            })
        }
    }
}

fn rec<W: Write>(command: &RecCommand, out: &mut Emitter<W>) -> Outcome {
    match command {
        RecCommand::Gen { source, n } => {
            let j = load_matrix(source)?;
            let polys = polys_from_recurrence(&j, *n)?;
            let triangle = CoeffTriangle::from_polys(&polys)?;
            let pretty: Vec<Value> = polys.iter().map(|p| Value::String(p.to_string())).collect();
            out.document(json!({
                "n": n,
                "coeffs": serde_json::to_value(&triangle).expect("rationals serialize"),
                "polys": pretty,
            }))?;
            Ok(Verdict::Held)
        }
        RecCommand::Fit { family, p, p_max } => {
            let polys = load_triangle(family)?.polys();
            let fit_row = |p: usize| -> Result<(Map<String, Value>, bool), Failure> {
                let row = match fit_recurrence(&polys, p)? {
                    FitOutcome::Fitted(j) => json!({
                        "p": p, "fitted": true, "matrix": serde_json::to_value(j.to_document()).expect("serializable"),
                    }),
                    FitOutcome::Failed(f) => json!({
                        "p": p, "fitted": false, "n": f.n, "index": f.index, "residual": text(&f.residual),
                    }),
                };
                let fitted = row["fitted"] == Value::Bool(true);
                Ok((object(row), fitted))
            };
            match (p, p_max) {
                (Some(p), _) => {
                    let (row, fitted) = fit_row(*p)?;
                    out.document(Value::Object(row))?;
                    Ok(Verdict::from_ok(fitted))
                }
                (None, Some(p_max)) => {
                    let mut any = false;
                    for p in 1..=*p_max {
                        let (mut row, fitted) = fit_row(p)?;
                        row.remove("matrix");
                        any |= fitted;
                        out.row(row)?;
                    }
                    Ok(Verdict::from_ok(any))
                }
                (None, None) => Err(Failure::Usage("give --p P or --p-max P".into())),
            }
        }
    }
}

fn darboux<W: Write>(command: &DarbouxCommand, out: &mut Emitter<W>) -> Outcome {
    match command {
        DarbouxCommand::Factorize {
            source,
            c,
            gamma1,
            n_max,
            strict,
        } => {
            let j = load_matrix(source)?;
            let n_max = n_max.unwrap_or(j.n_max());
            let (pair, singular) = if *strict {
                (ul_factorize_strict(&j, c, gamma1, n_max)?, Vec::new())
            } else {
                let f = ul_factorize(&j, c, gamma1, n_max)?;
                (f.pair, f.singular_truncations)
            };
            let reconstructs = pair.reconstruct(c) == j.truncate(n_max);
            let mut doc = object(serde_json::to_value(&pair).expect("serializable"));
            doc.insert("c".into(), text(c));
            doc.insert("singular_truncations".into(), json!(singular));
            doc.insert("reconstructs".into(), Value::Bool(reconstructs));
            out.document(Value::Object(doc))?;
            Ok(Verdict::from_ok(reconstructs))
        }
        DarbouxCommand::Transform { factors, c, s, block } => {
            let factors = load_factors(factors)?;
            let j = geronimus_transform(&factors, c, *s, *block)?;
            out.document(serde_json::to_value(j.to_document()).expect("serializable"))?;
            Ok(Verdict::Held)
        }
        DarbouxCommand::Conjugate { source, gammas, n_max } => {
            let j = load_matrix(source)?;
            let n_max = n_max.unwrap_or(j.n_max());
            let gammas = load_gammas(gammas, n_max + 1)?;
            let d = conjugate_by_t(&j, &gammas, n_max)?;
            let bandwidth = (1..=n_max.max(1))
                .find(|&p| d.band_violation(p).is_none())
                .unwrap_or(n_max.max(1));
            let matrix = d.to_banded(bandwidth).expect("bandwidth checked");
            out.document(json!({
                "n_max": n_max,
                "bandwidth": bandwidth,
                "tridiagonal": bandwidth == 1,
                "matrix": serde_json::to_value(matrix.to_document()).expect("serializable"),
            }))?;
            Ok(Verdict::Held)
        }
    }
}

fn test<W: Write>(command: &TestCommand, workers: usize, out: &mut Emitter<W>) -> Outcome {
    let TestCommand::Necessary {
        op,
        n_range,
        k_range,
        gammas,
        expect_zero,
    } = command;
    let op = match op {
        Some(path) => load_op(path)?,
        None => hermite_operator(),
    };
    let n_hi = *n_range.end();
    let b = eigen_triangle(&op, n_hi)?;
    let gammas = load_gammas(gammas, n_hi)?;
    gammas.require(n_hi)?;
    run_grid(out, workers, n_range.clone(), |n| {
        k_range
            .clone()
            .filter(|&k| k >= 1 && k <= n)
            .map(|k| {
                let value = necessary_condition(&op, &b, &gammas, n, k)?;
                let nonzero = !value.is_zero();
                let row = json!({ "n": n, "k": k, "value": text(&value), "nonzero": nonzero });
                Ok((object(row), Verdict::from_ok(!(nonzero && *expect_zero))))
            })
            .collect()
    })
}

/// One `Sigma_H` row; the verdict fails when computed modes disagree.
fn sigma_row(
    n: usize,
    k: usize,
    gamma1: &Rational,
    select: SigmaSelect,
) -> Result<(Map<String, Value>, Verdict), Failure> {
    let wanted = |m: SigmaSelect| select == SigmaSelect::All || select == m;
    let compute = |m: SigmaSelect, mode: SigmaMode| -> Result<Option<Rational>, Failure> {
        if !wanted(m) {
            return Ok(None);
        }
        match sigma_h(n, k, gamma1, mode) {
            Ok(v) => Ok(Some(v)),
            Err(Error::Parity { .. }) if select == SigmaSelect::All => Ok(None),
            Err(e) => Err(e.into()),
        }
    };
    let brute = compute(SigmaSelect::Bruteforce, SigmaMode::Bruteforce)?;
    let sum = compute(SigmaSelect::Sum, SigmaMode::Sum)?;
    let closed = compute(SigmaSelect::Closed, SigmaMode::Closed)?;
    let mut ok = true;
    if let (Some(a), Some(b)) = (&brute, &sum) {
        ok &= a == b;
    }
    if let (Some(a), Some(c)) = (sum.as_ref().or(brute.as_ref()), &closed) {
        ok &= a.abs() == c.abs();
    }
    let reference = sum.as_ref().or(brute.as_ref()).or(closed.as_ref());
    let row = json!({
        "n": n,
        "k": k,
        "sigma_bruteforce": opt_text(&brute),
        "sigma_sum": opt_text(&sum),
        "sigma_closed": opt_text(&closed),
        "nonzero": reference.is_some_and(|v| !v.is_zero()),
    });
    Ok((object(row), Verdict::from_ok(ok)))
}

fn hermite<W: Write>(command: &HermiteCommand, workers: usize, out: &mut Emitter<W>) -> Outcome {
    match command {
        HermiteCommand::Sigma { n, k, gamma1, mode } => {
            let (row, verdict) = sigma_row(*n, *k, gamma1, *mode)?;
            out.document(Value::Object(row))?;
            Ok(verdict)
        }
        HermiteCommand::Gamma {
            gamma1,
            m_max,
            mode,
            gamma2,
        } => {
            let mode = match (mode, gamma2) {
                (GammaKind::Constrained, _) => GammaMode::Constrained,
                (GammaKind::General, Some(g2)) => GammaMode::General(g2.clone()),
                (GammaKind::General, None) => return Err(Failure::Usage("general mode needs --gamma2".into())),
            };
            let g = gamma_sequence(gamma1, *m_max, &mode)?;
            let mut verdict = Verdict::Held;
            for m in 1..=g.len() {
                let mut row = object(json!({ "m": m, "gamma": text(&g.get(m)) }));
                if mode == GammaMode::Constrained {
                    let closed = gamma_closed(gamma1, m)?;
                    verdict = verdict.and(Verdict::from_ok(closed == g.get(m)));
                    row.insert("closed".into(), text(&closed));
                }
                out.row(row)?;
            }
            Ok(verdict)
        }
        HermiteCommand::Table {
            n_range,
            k_range,
            gamma1,
        } => run_grid(out, workers, n_range.clone(), |n| {
            k_range
                .clone()
                .filter(|&k| k >= 1 && k <= n)
                .map(|k| sigma_row(n, k, gamma1, SigmaSelect::All))
                .collect()
        }),
    }
}
