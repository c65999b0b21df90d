//! Command-line front end.
//!
//! Exit codes: 0 success, 1 an identity or route comparison failed, 2 usage
//! or input error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{brute_z_total, is_realizable, z_twisted_routes, z_untwisted_routes};
use crate::lattice::{equivariant_z, EquivariantSpec};
use crate::modular::{
    delta, eisenstein, eta, f_dimension_by_rank, fit, j_function, r64, space_basis, theta, SpaceKind,
};
use crate::qseries::{RationalSeries, SeriesJson};
use crate::verify::{verify, Check};
use crate::virasoro::vacuum_zpoint;

/// Order below which the both-sector state oracle runs in `lattice-trace`.
pub const LATTICE_ORACLE_CAP: i64 = 4;

#[derive(Parser, Debug)]
#[command(name = "moonshine", about = "Exact q-expansions, trace functions and identity checks")]
struct Cli {
    /// Truncation order: series are computed below q^N.
    #[arg(long, global = true, default_value_t = 20)]
    order: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Skip the slow state-by-state oracle routes.
    #[arg(long, global = true)]
    skip_oracle: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand eta, delta, eisenstein:k, theta:i or jfunction.
    Expand {
        #[arg(long)]
        what: String,
    },
    /// Check a named identity.
    Verify {
        #[arg(long)]
        identity: String,
    },
    /// 1-point function of L[-2]^k 1 on the Moonshine module.
    VacuumTrace {
        #[arg(long)]
        k: i64,
    },
    /// 1-point function Z(v(λ)) on the Leech lattice theory for ⟨λ,λ⟩ = L.
    LatticeTrace {
        #[arg(long)]
        norm: i64,
    },
    /// Equivariant 1-point function from a JSON spec file.
    Equivariant {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        norm: i64,
    },
    /// Basis of M_k, S_k or F_k.
    Spaces {
        #[arg(long)]
        kind: SpaceKind,
        #[arg(long)]
        weight: i64,
    },
}

impl clap::builder::ValueParserFactory for SpaceKind {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<SpaceKind>().map_err(|e| e.to_string()))
    }
}

struct Output {
    body: String,
    ok: bool,
    warnings: Vec<String>,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, ok: true, warnings: Vec::new() }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Parses `argv` (including the program name), writes results to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if cli.order < 1 {
        let _ = writeln!(err, "error: --order must be at least 1, got {}", cli.order);
        return 2;
    }
    match dispatch(&cli) {
        Ok(o) => {
            for w in &o.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let _ = writeln!(out, "{}", o.body);
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(Error::RouteMismatch(m)) => {
            let _ = writeln!(err, "verification failed: routes disagree: {m}");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let n = cli.order;
    let text = cli.format == Format::Text;
    match &cli.command {
        Command::Expand { what } => expand(what, n, text),
        Command::Verify { identity } => {
            let c = verify(identity, n, cli.skip_oracle)?;
            let body = if text { check_text(&c) } else { to_json(&c) };
            Ok(Output { body, ok: c.holds, warnings: Vec::new() })
        }
        Command::VacuumTrace { k } => vacuum_trace(*k, n, text),
        Command::LatticeTrace { norm } => lattice_trace(*norm, n, cli.skip_oracle, text),
        Command::Equivariant { spec, norm } => equivariant(spec, *norm, n, text),
        Command::Spaces { kind, weight } => spaces(*kind, *weight, n, text),
    }
}

fn check_text(c: &Check) -> String {
    let mut s = format!(
        "{}: {} (certified below q^{})",
        c.identity,
        if c.holds { "holds" } else { "FAILS" },
        c.certified_order
    );
    for note in &c.notes {
        s.push_str("\n  ");
        s.push_str(note);
    }
    s
}

fn certified(s: &RationalSeries, requested: i64) -> String {
    s.order().unwrap_or(r64(requested)).to_string()
}

fn parse_index(what: &str, raw: &str) -> Result<i64> {
    raw.parse()
        .map_err(|_| Error::InvalidArgument(format!("bad index {raw:?} in {what:?}")))
}

fn expand(what: &str, n: i64, text: bool) -> Result<Output> {
    let s = match what.split_once(':') {
        None => match what {
            "eta" => eta(n),
            "delta" => delta(n),
            "jfunction" => j_function(n)?,
            _ => return Err(Error::InvalidArgument(format!("cannot expand {what:?}"))),
        },
        Some(("eisenstein", k)) => eisenstein(parse_index(what, k)?, n)?,
        Some(("theta", i)) => {
            let i = parse_index(what, i)?;
            let i = u8::try_from(i).map_err(|_| Error::InvalidArgument(format!("bad theta index {i}")))?;
            theta(i, n)?
        }
        Some(_) => return Err(Error::InvalidArgument(format!("cannot expand {what:?}"))),
    };
    let body = if text { s.to_string() } else { s.to_json_string() };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct FitJson {
    space: String,
    dim: usize,
    coefficients: Option<Vec<String>>,
    labels: Vec<String>,
}

fn fit_json(s: &RationalSeries, kind: SpaceKind, weight: i64, n: i64) -> Result<FitJson> {
    let space = space_basis(kind, weight, n)?;
    let coeffs = fit(s, &space)?;
    Ok(FitJson {
        space: space.name(),
        dim: space.dim(),
        coefficients: coeffs.map(|v| v.iter().map(ToString::to_string).collect()),
        labels: space.labels,
    })
}

fn fit_text(f: &FitJson) -> String {
    match &f.coefficients {
        None => format!("not in {} (dim {})", f.space, f.dim),
        Some(c) if c.is_empty() => format!("in {} (dim 0): zero", f.space),
        Some(c) => {
            let parts: Vec<String> = c.iter().zip(&f.labels).map(|(c, l)| format!("({c})*{l}")).collect();
            format!("in {} (dim {}): {}", f.space, f.dim, parts.join(" + "))
        }
    }
}

#[derive(Serialize)]
struct VacuumJson {
    k: i64,
    certified_order: String,
    series: SeriesJson,
    fits: FitJson,
}

fn vacuum_trace(k: i64, n: i64, text: bool) -> Result<Output> {
    let z = vacuum_zpoint(k, n)?;
    let f = fit_json(&z, SpaceKind::F, 2 * k, n)?;
    let ok = f.coefficients.is_some();
    let body = if text {
        format!("Z(L[-2]^{k} 1) = {z}\ncertified below q^{}\n{}", certified(&z, n), fit_text(&f))
    } else {
        to_json(&VacuumJson { k, certified_order: certified(&z, n), series: SeriesJson::from(&z), fits: f })
    };
    Ok(Output { body, ok, warnings: Vec::new() })
}

#[derive(Serialize)]
struct RoutesJson {
    names: Vec<String>,
    agree: bool,
}

#[derive(Serialize)]
struct OracleJson {
    order: String,
    agree: bool,
}

#[derive(Serialize)]
struct LatticeTraceJson {
    norm: i64,
    realizable: bool,
    certified_order: String,
    series: SeriesJson,
    routes: LatticeRoutes,
    fits: FitJson,
}

#[derive(Serialize)]
struct LatticeRoutes {
    untwisted: RoutesJson,
    twisted: RoutesJson,
    oracle: Option<OracleJson>,
}

fn lattice_trace(norm: i64, n: i64, skip_oracle: bool, text: bool) -> Result<Output> {
    let mut warnings = Vec::new();
    if !is_realizable(norm) {
        warnings.push(format!(
            "L = {norm} is not 4⟨α,α⟩ for a nonzero Leech vector α; the series is computed formally"
        ));
    }
    let untwisted = z_untwisted_routes(norm, n)?;
    let twisted = z_twisted_routes(norm, n)?;
    let names = |r: &crate::fock::RouteReport| r.routes.iter().map(|(k, _)| k.to_string()).collect();
    let routes_agree = untwisted.agree() && twisted.agree();
    let z = untwisted.value()?.add(&twisted.value()?);
    let oracle = if skip_oracle {
        None
    } else {
        let m = n.min(LATTICE_ORACLE_CAP);
        let agree = brute_z_total(norm, m)? == z.truncate(r64(m));
        Some(OracleJson { order: m.to_string(), agree })
    };
    let mut ok = routes_agree && oracle.as_ref().is_none_or(|o| o.agree);
    let fits = fit_json(&z, SpaceKind::S, norm / 2, n)?;
    if fits.coefficients.is_none() {
        if is_realizable(norm) {
            ok = false;
        } else {
            warnings.push(format!("series is not in {}", fits.space));
        }
    }
    let body = if text {
        let mut s = format!("Z(v(λ)) for L = {norm}: {z}\ncertified below q^{}\n", certified(&z, n));
        s.push_str(&format!("closed-form routes agree: {routes_agree}\n"));
        if let Some(o) = &oracle {
            s.push_str(&format!("state oracle agrees below q^{}: {}\n", o.order, o.agree));
        }
        s.push_str(&fit_text(&fits));
        s
    } else {
        to_json(&LatticeTraceJson {
            norm,
            realizable: is_realizable(norm),
            certified_order: certified(&z, n),
            series: SeriesJson::from(&z),
            routes: LatticeRoutes {
                untwisted: RoutesJson { names: names(&untwisted), agree: untwisted.agree() },
                twisted: RoutesJson { names: names(&twisted), agree: twisted.agree() },
                oracle,
            },
            fits,
        })
    };
    Ok(Output { body, ok, warnings })
}

#[derive(Serialize)]
struct EquivariantJson {
    norm: i64,
    phase: i64,
    fixed_rank: usize,
    certified_order: String,
    series: SeriesJson,
}

fn equivariant(path: &PathBuf, norm: i64, n: i64, text: bool) -> Result<Output> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let spec = EquivariantSpec::from_json_str(&raw)?;
    let z = equivariant_z(&spec, norm, n)?;
    let phase = spec.alpha_phase()?;
    let body = if text {
        format!(
            "Z(v(λ), h) for L = {norm}: {z}\ncertified below q^{}\nphase {phase}, fixed sublattice rank {}",
            certified(&z, n),
            spec.fixed.lattice.rank()
        )
    } else {
        to_json(&EquivariantJson {
            norm,
            phase,
            fixed_rank: spec.fixed.lattice.rank(),
            certified_order: certified(&z, n),
            series: SeriesJson::from(&z),
        })
    };
    Ok(Output::ok(body))
}

fn spaces(kind: SpaceKind, weight: i64, n: i64, text: bool) -> Result<Output> {
    let space = space_basis(kind, weight, n)?;
    let mut ok = true;
    let mut warnings = Vec::new();
    if kind == SpaceKind::F {
        let other = f_dimension_by_rank(weight, n)?;
        if other != space.dim() {
            ok = false;
            warnings.push(format!("kernel dimension {} but rank count {other}", space.dim()));
        }
    }
    let body = if text {
        let mut s = format!("{} has dimension {}", space.name(), space.dim());
        for (b, l) in space.basis.iter().zip(&space.labels) {
            s.push_str(&format!("\n  {l}: {b}"));
        }
        s
    } else {
        space.to_json_string()
    };
    Ok(Output { body, ok, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("moonshine").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&[]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["expand", "--what", "eta", "--order", "0"]).0, 2);
        assert_eq!(call(&["expand", "--what", "zeta"]).0, 2);
        assert_eq!(call(&["expand", "--what", "theta:9"]).0, 2);
        assert_eq!(call(&["expand", "--what", "eta", "--format", "xml"]).0, 2);
        let (code, _, err) = call(&["spaces", "--kind", "Q", "--weight", "4"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("lattice-trace"));
    }

    #[test]
    fn expand_text_and_json() {
        let (code, out, _) = call(&["expand", "--what", "eisenstein:4", "--order", "3", "--format", "text"]);
        assert_eq!(code, 0);
        assert!(out.contains("O(q^3)"), "{out}");
        let (code, out, _) = call(&["expand", "--what", "theta:3", "--order", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["denominator"], 2);
    }

    #[test]
    fn unrealizable_norm_warns() {
        let (code, _, err) = call(&["lattice-trace", "--norm", "20", "--order", "4", "--skip-oracle"]);
        assert!(err.contains("warning"), "{err}");
        assert_eq!(code, 0);
    }
}
