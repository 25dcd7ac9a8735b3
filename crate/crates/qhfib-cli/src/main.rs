use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qhfib::error::QhError;
use qhfib::expr::{parse_class, parse_exp};
use qhfib::fibration::{product_fixture, ring_split_check, Nonsqueeze, SectionData};
use qhfib::fixture::{load_path, Fixture, FixtureDocument};
use qhfib::manifold::QHClass;
use qhfib::novikov::Exp;
use qhfib::quantum::QuantumRing;
use qhfib::rational::{fmt_q, parse_q, Q};
use qhfib::report::{Report, Status};
use qhfib::validator::{run_suite, Target};

#[derive(Parser)]
#[command(name = "qhfib", version, about = "Exact quantum homology of symplectic manifolds and fibrations over S²")]
struct Cli {
    /// Print exact values as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Energy cutoff for truncated products.
    #[arg(long, global = true, env = "QHFIB_CUTOFF", default_value = "10", value_parser = rational)]
    cutoff: Q,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quantum product a * b in the fiber (or manifold) of a fixture.
    Product {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Ψ(a) for the section σ_ref + B (default B = 0).
    Psi {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long)]
        a: String,
        /// Offset B in fiber generators, e.g. "(7/12)F".
        #[arg(long, default_value = "0")]
        offset: String,
        /// Use the normalized section σ_φ.
        #[arg(long, conflicts_with = "offset")]
        sigma_phi: bool,
    },
    /// σ_φ and ρ(φ).
    Rho {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Ī_c, Ī_u and I_k for k = 0..n+1.
    Invariants {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Ring splitting test.
    Split {
        #[arg(long)]
        fixture: PathBuf,
    },
    /// Ball-embedding bound from n_P([M],[M],[pt]; σ_φ).
    Nonsqueeze {
        #[arg(long)]
        fixture: PathBuf,
        /// Area of the base.
        #[arg(long, value_parser = rational)]
        kappa: Q,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Ψ of a composite loop, from a second fixture or from the inverse.
    Compose {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long, required_unless_present = "mirror")]
        fixture2: Option<PathBuf>,
        #[arg(long, conflicts_with = "fixture2")]
        mirror: bool,
    },
    /// Fixture of the trivial fibration M × S².
    ProductBundle {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn rational(s: &str) -> Result<Q, String> {
    parse_q(s).map_err(|e| e.to_string())
}

enum Failure {
    Error(QhError),
    Checks,
}

impl From<QhError> for Failure {
    fn from(e: QhError) -> Self {
        Failure::Error(e)
    }
}

fn exit_code(e: &QhError) -> u8 {
    match e {
        QhError::TableIncomplete { .. } => 3,
        QhError::Parse(_)
        | QhError::UnknownBasisLabel(_)
        | QhError::Malformed(_)
        | QhError::UnknownSuite(_)
        | QhError::FiberMismatch(_)
        | QhError::PrimingInvalid(_)
        | QhError::DegeneratePairing
        | QhError::MissingTripleData
        | QhError::DimensionRuleViolation(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(cli: &Cli, value: Value, text: &str) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        println!("{text}");
    }
}

fn report_out(cli: &Cli, r: &Report) -> Result<(), Failure> {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(r).expect("json"));
    } else {
        for c in &r.checks {
            if c.status != Status::Pass {
                let tag = if c.status == Status::Fail { "FAIL" } else { "skip" };
                println!("{tag} {} {}: {} | {}", c.label, c.instance, c.lhs, c.rhs);
            }
        }
        println!(
            "suite {}: {} pass, {} fail, {} skipped (cutoff {}, completeness {})",
            r.suite,
            r.count(Status::Pass),
            r.count(Status::Fail),
            r.count(Status::Skipped),
            r.cutoff,
            r.table_completeness
        );
    }
    if r.all_pass() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn section(path: &PathBuf) -> Result<(Fixture, SectionData), Failure> {
    let fx = load_path(path)?;
    let data = fx.fibration()?.section_data()?;
    Ok((fx, data))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cutoff = &cli.cutoff;
    match &cli.cmd {
        Cmd::Product { fixture, a, b } => {
            let fx = load_path(fixture)?;
            let (m, gw) = fx.fiber();
            let x = parse_class(a, m, &m.h2)?;
            let y = parse_class(b, m, &m.h2)?;
            let p = QuantumRing::new(m, gw).product(&x, &y, cutoff)?.format(m);
            emit(cli, json!({ "a": a, "b": b, "cutoff": fmt_q(cutoff), "product": p }), &p);
        }
        Cmd::Psi { fixture, a, offset, sigma_phi } => {
            let (_, data) = section(fixture)?;
            let m = &data.fiber;
            let off = if *sigma_phi { data.sigma_phi()? } else { parse_exp(offset, &m.h2)? };
            let x = parse_class(a, m, &m.h2)?;
            let v = data.psi(&off, &x, cutoff)?.format(m);
            let sec = data.format_section(&off);
            emit(cli, json!({ "section": sec, "a": a, "cutoff": fmt_q(cutoff), "psi": v }), &v);
        }
        Cmd::Rho { fixture } => {
            let (_, data) = section(fixture)?;
            let m = &data.fiber;
            let s = data.format_section(&data.sigma_phi()?);
            let r = data.rho(cutoff)?.format(m);
            emit(cli, json!({ "sigma_phi": s, "rho": r, "cutoff": fmt_q(cutoff) }), &format!("sigma_phi = {s}\nrho = {r}"));
        }
        Cmd::Invariants { fixture } => {
            let fx = load_path(fixture)?;
            let f = fx.fibration()?;
            let ic = f.ic()?.to_string();
            let iu = f.format_iu(&f.iu()?);
            let mut ik = Vec::new();
            for k in 0..=f.fiber.n + 1 {
                ik.push(fmt_q(&f.ik(k)?));
            }
            let text = std::iter::once(format!("Ic = {ic}"))
                .chain(std::iter::once(format!("Iu = {iu}")))
                .chain(ik.iter().enumerate().map(|(k, v)| format!("I_{k} = {v}")))
                .collect::<Vec<_>>()
                .join("\n");
            emit(cli, json!({ "Ic": ic, "Iu": iu, "Ik": ik }), &text);
        }
        Cmd::Split { fixture } => {
            let fx = load_path(fixture)?;
            let f = fx.fibration()?;
            let r = match ring_split_check(f, cutoff) {
                Ok(r) => r,
                Err(QhError::HypothesisFailed(why)) => {
                    let text = std::iter::once("splits = false".to_string()).chain(why.iter().cloned()).collect::<Vec<_>>().join("\n");
                    emit(cli, json!({ "splits": false, "reasons": why }), &text);
                    return Err(Failure::Checks);
                }
                Err(e) => return Err(e.into()),
            };
            let p = &f.total;
            let rows: Vec<Value> = (0..f.fiber.dim())
                .map(|i| json!([f.fiber.label(i), QHClass::classical(r.s_a[i].clone()).format(p)]))
                .collect();
            let data = f.section_data()?;
            let mut text = vec![
                format!("splits = {}", r.all_pass()),
                format!("hypothesis = {}", r.hypothesis),
                format!("mu = {}", r.mu),
                format!("A = {}", f.fiber.h2.format_exp(&r.a)),
                format!("sigma_A = {}", data.format_section(&r.sigma_a)),
                format!("Ic = {}", r.ic),
                format!("Iu = {}", f.format_iu(&r.iu)),
                format!("rho shape = {}", r.shape.describe(&f.fiber)),
            ];
            for i in 0..f.fiber.dim() {
                text.push(format!("s_A({}) = {}", f.fiber.label(i), QHClass::classical(r.s_a[i].clone()).format(p)));
            }
            let failed: Vec<_> = r.checks.iter().filter(|c| c.status != Status::Pass).collect();
            for c in &failed {
                text.push(format!("{:?} {} {}: {} | {}", c.status, c.label, c.instance, c.lhs, c.rhs));
            }
            emit(
                cli,
                json!({
                    "splits": r.all_pass(),
                    "hypothesis": r.hypothesis.to_string(),
                    "mu": fmt_q(&r.mu),
                    "A": f.fiber.h2.format_exp(&r.a),
                    "sigma_A": data.format_section(&r.sigma_a),
                    "Ic": r.ic.to_string(),
                    "Iu": f.format_iu(&r.iu),
                    "rho_shape": r.shape.describe(&f.fiber),
                    "s_A": rows,
                    "checks": r.checks,
                }),
                &text.join("\n"),
            );
            if !r.all_pass() {
                return Err(Failure::Checks);
            }
        }
        Cmd::Nonsqueeze { fixture, kappa } => {
            let fx = load_path(fixture)?;
            let (v, text) = match fx.fibration()?.nonsqueezing_bound(kappa)? {
                Nonsqueeze::Bound(b) => (json!({ "bound": fmt_q(&b) }), format!("capacity <= {b}")),
                Nonsqueeze::None(why) => (json!({ "bound": null, "reason": why }), format!("none: {why}")),
            };
            emit(cli, v, &text);
        }
        Cmd::Verify { fixture, suite } => {
            let fx = load_path(fixture)?;
            let target = match &fx {
                Fixture::Manifold { m, gw } => Target::Manifold(m, gw),
                Fixture::Fibration(f) => Target::Fibration(f),
            };
            report_out(cli, &run_suite(target, suite, cutoff)?)?;
        }
        Cmd::Compose { fixture, fixture2, mirror } => {
            let (_, first) = section(fixture)?;
            let second = match fixture2 {
                Some(p) => section(p)?.1,
                None => {
                    debug_assert!(*mirror);
                    first.mirror(&(cutoff + first.psi_margin(&Exp::zero()) + Q::from_integer(1.into())))?
                }
            };
            let comp = first.compose(&second)?;
            let m = &first.fiber;
            let d = m.dim();
            let zero = Exp::zero();
            let mut lines = Vec::new();
            let mut psi = Vec::new();
            for i in 0..d {
                let v = comp.psi(&zero, &QHClass::basis(d, i), cutoff)?.format(m);
                lines.push(format!("Psi({}) = {v}", m.label(i)));
                psi.push(json!([m.label(i), v]));
            }
            let mut checks = SectionData::composition_checks(&first, &second, &comp, cutoff);
            checks.push(SectionData::sigma_additivity_check(&first, &second, &comp));
            let rho = comp.rho(cutoff).map(|r| r.format(m));
            match &rho {
                Ok(r) => lines.push(format!("rho = {r}")),
                Err(e) => lines.push(format!("rho: {e}")),
            }
            let bad = checks.iter().filter(|c| c.status == Status::Fail).count();
            lines.push(format!("composition checks: {} pass, {bad} fail", checks.iter().filter(|c| c.status == Status::Pass).count()));
            emit(
                cli,
                json!({
                    "section": comp.label,
                    "psi": psi,
                    "rho": rho.as_ref().ok(),
                    "checks": checks,
                }),
                &lines.join("\n"),
            );
            if bad > 0 {
                return Err(Failure::Checks);
            }
        }
        Cmd::ProductBundle { fixture, out } => {
            let fx = load_path(fixture)?;
            let (m, gw) = fx.fiber();
            let f = product_fixture(m, gw)?;
            let doc = FixtureDocument::from_fibration(&f)?.to_json();
            match out {
                Some(p) => {
                    std::fs::write(p, doc + "\n").map_err(|e| QhError::Parse(format!("{}: {e}", p.display())))?;
                    emit(cli, json!({ "written": p.display().to_string() }), &format!("wrote {}", p.display()));
                }
                None => println!("{doc}"),
            }
        }
    }
    Ok(())
}
