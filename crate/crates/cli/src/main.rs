//! polya-lab: exact computation of Pólya groups of number fields and
//! certification of dihedral extensions.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use polya_core::config::{OutputFormat, RunConfig};
use polya_core::dihedral::{
    self, build_instance, certify_dihedral, divisibility_audit, CertifyConfig, SweepOutcome,
    Verdict,
};
use polya_core::numfield::embed::QElem;
use polya_core::numfield::{build_field, class_group, NumFieldError};
use polya_core::poly::IntPoly;
use polya_core::polya::{self, default_polya_bound};
use polya_core::quadratic;
use polya_core::report;

#[derive(Parser)]
#[command(
    name = "polya-lab",
    about = "Pólya groups of number fields and Pólya dihedral extensions, exactly",
    version
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "text"])]
    format: String,
    /// RNG seed recorded in reports (results are deterministic regardless)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Effort multiplier for relation search and witness budgets
    #[arg(long, global = true, default_value_t = 1)]
    effort: u32,
    /// Pólya prime bound B (default: per-field formula)
    #[arg(long, global = true)]
    bound: Option<u64>,
    /// Stabilization window W
    #[arg(long, global = true, default_value_t = 25)]
    window: u32,
    /// Worker threads for sweeps
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a number field: maximal order, discriminant, signature
    Field(PolyArg),
    /// Class group with certification data
    Classgroup(PolyArg),
    /// Pólya group of a field
    Polya(PolyaArgs),
    /// Quadratic field fast path: forms, unit, Hilbert formula
    Quad {
        #[arg(short = 'd', long = "d", allow_hyphen_values = true)]
        d: i64,
    },
    /// Brumer quintic f(s,t,X) and its quadratic resolvent radicand
    Brumer {
        #[arg(allow_hyphen_values = true)]
        s: i64,
        #[arg(allow_hyphen_values = true)]
        t: i64,
    },
    /// One-parameter quintic family member and its data
    Lavallee {
        #[arg(allow_hyphen_values = true)]
        s: i64,
    },
    /// Certify the Pólya status of a dihedral closure
    Certify(CertifyArgs),
    /// Sweep the quintic family over a parameter range
    Sweep(SweepArgs),
    /// Divisibility audit: totally ramified primes vs l | #Po(K)
    Audit(AuditArgs),
    /// Relative Pólya group Po(L/K) from an explicit embedding
    Relative(RelativeArgs),
}

#[derive(Args)]
struct PolyArg {
    /// Comma-separated integer coefficients, ascending degree
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
}

#[derive(Args)]
struct PolyaArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Caller evidence that the field is Galois over Q
    #[arg(long)]
    galois: bool,
}

#[derive(Args)]
struct CertifyArgs {
    /// Brumer parameters s t
    #[arg(long, num_args = 2, value_names = ["S", "T"], allow_hyphen_values = true)]
    brumer: Option<Vec<i64>>,
    /// Family parameter s
    #[arg(long, allow_hyphen_values = true)]
    lavallee: Option<i64>,
    /// Explicit degree-l polynomial (with --radicand)
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Radicand of the quadratic resolvent field
    #[arg(long, allow_hyphen_values = true)]
    radicand: Option<String>,
    /// Also compute h(L) for cubic closures
    #[arg(long)]
    closure_h: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    from: i64,
    #[arg(long, allow_hyphen_values = true)]
    to: i64,
    /// Expected-verdict file: headings [polya] / [notpolya], one s per line
    #[arg(long)]
    expect: Option<String>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Radicand of the resolvent quadratic (defaults to disc(f))
    #[arg(long, allow_hyphen_values = true)]
    radicand: Option<String>,
    /// Search for a non-pure complex cubic with two totally ramified primes
    #[arg(long)]
    search_nonpure_cubic: bool,
    /// Coefficient box for the search
    #[arg(long, default_value_t = 20)]
    box_bound: i64,
}

#[derive(Args)]
struct RelativeArgs {
    /// Defining polynomial of the top field L
    #[arg(long, allow_hyphen_values = true)]
    top: String,
    /// Defining polynomial of the subfield K
    #[arg(long, allow_hyphen_values = true)]
    sub: String,
    /// Image of K's generator in L's power basis: "c0,c1,.../den"
    #[arg(long, allow_hyphen_values = true)]
    image: String,
    /// Caller evidence that L/K is Galois
    #[arg(long)]
    galois: bool,
}

fn parse_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| std::env::var("POLYA_LAB_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn run_config(cli: &Cli) -> Result<RunConfig, String> {
    let cfg = RunConfig {
        effort: cli.effort,
        polya_bound: cli.bound,
        window: cli.window,
        sampling_primes: 200,
        format: if cli.format == "text" { OutputFormat::Text } else { OutputFormat::Json },
        seed: parse_seed(cli.seed),
        jobs: cli.jobs,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn emit<T: serde::Serialize>(cfg: &RunConfig, value: &T, text: impl FnOnce() -> String) {
    match cfg.format {
        OutputFormat::Json => {
            let env = report::envelope(cfg, value);
            println!("{}", serde_json::to_string_pretty(&env).expect("serialization"));
        }
        OutputFormat::Text => println!("{}", text()),
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn parse_poly(s: &str) -> Result<IntPoly, String> {
    IntPoly::parse(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match run_config(&cli) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match &cli.command {
        Command::Field(a) => cmd_field(&cfg, a),
        Command::Classgroup(a) => cmd_classgroup(&cfg, a),
        Command::Polya(a) => cmd_polya(&cfg, a),
        Command::Quad { d } => cmd_quad(&cfg, *d),
        Command::Brumer { s, t } => cmd_brumer(&cfg, *s, *t),
        Command::Lavallee { s } => cmd_lavallee(&cfg, *s),
        Command::Certify(a) => cmd_certify(&cfg, a),
        Command::Sweep(a) => cmd_sweep(&cfg, a),
        Command::Audit(a) => cmd_audit(&cfg, a),
        Command::Relative(a) => cmd_relative(&cfg, a),
    }
}

fn cmd_field(cfg: &RunConfig, a: &PolyArg) -> ExitCode {
    let f = match parse_poly(&a.poly) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    match build_field(&f) {
        Ok(k) => {
            let rep = report::field_report(&k);
            emit(cfg, &rep, || {
                format!(
                    "field Q[X]/({})\n  degree {}\n  disc {}\n  index {}\n  signature ({}, {})",
                    k.defining_poly(),
                    k.degree(),
                    k.field_disc,
                    k.index,
                    k.signature.0,
                    k.signature.1
                )
            });
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn cmd_classgroup(cfg: &RunConfig, a: &PolyArg) -> ExitCode {
    let f = match parse_poly(&a.poly) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let k = match build_field(&f) {
        Ok(k) => k,
        Err(e) => return fail(e),
    };
    match class_group(&k, &cfg.class_group_config()) {
        Ok(cg) => {
            let certified = cg.certified;
            let rep = report::class_group_report(&cg);
            emit(cfg, &rep, || {
                format!(
                    "class group of Q[X]/({})\n  h = {}\n  invariant factors {:?}\n  certified {}",
                    k.defining_poly(),
                    cg.h,
                    cg.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    cg.certified
                )
            });
            if certified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(NumFieldError::RelationSearchIncomplete(partial)) => {
            let rep = report::class_group_report(&partial);
            emit(cfg, &rep, || "relation search incomplete".to_string());
            ExitCode::from(2)
        }
        Err(e) => fail(e),
    }
}

fn cmd_polya(cfg: &RunConfig, a: &PolyaArgs) -> ExitCode {
    let f = match parse_poly(&a.poly) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let k = match build_field(&f) {
        Ok(k) => k,
        Err(e) => return fail(e),
    };
    let cg = match class_group(&k, &cfg.class_group_config()) {
        Ok(cg) => cg,
        Err(NumFieldError::RelationSearchIncomplete(_)) => {
            eprintln!("class group relation search incomplete; raise --effort");
            return ExitCode::from(2);
        }
        Err(e) => return fail(e),
    };
    let bound = cfg.polya_bound.unwrap_or_else(|| default_polya_bound(&k));
    match polya::polya_group(&k, &cg, bound, cfg.window, a.galois) {
        Ok(po) => {
            let order = po.order.clone();
            let stabilized = po.stabilized;
            let rep = report::polya_report(&po);
            emit(cfg, &rep, || {
                format!(
                    "Polya group of Q[X]/({})\n  order {}\n  invariant factors {:?}\n  \
                     stabilized {} complete {}",
                    k.defining_poly(),
                    order,
                    po.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    po.stabilized,
                    po.certified_complete
                )
            });
            if stabilized || po.certified_complete {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => fail(e),
    }
}

fn cmd_quad(cfg: &RunConfig, d: i64) -> ExitCode {
    match quadratic::quad_polya_group(d) {
        Ok(summary) => {
            let unit = if d > 1 { quadratic::fundamental_unit(d).ok() } else { None };
            let rep = report::quad_report(&summary, unit.as_ref());
            emit(cfg, &rep, || {
                format!(
                    "Q(sqrt {d}): D = {}, h = {}, s = {}, #Po = {}, polya = {}",
                    summary.disc,
                    summary.class_number,
                    summary.s_count,
                    summary.explicit_order,
                    summary.is_polya
                )
            });
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn cmd_brumer(cfg: &RunConfig, s: i64, t: i64) -> ExitCode {
    let (f, radicand) = dihedral::brumer_quintic(s, t);
    #[derive(serde::Serialize)]
    struct BrumerOut {
        s: i64,
        t: i64,
        f: Vec<String>,
        radicand: String,
        kernel: Option<String>,
        degenerate: bool,
    }
    let degenerate = radicand == BigInt::from(0)
        || !matches!(polya_core::poly::is_irreducible_over_q(&f), Ok(true));
    let kernel = if radicand == BigInt::from(0) {
        None
    } else {
        Some(polya_core::arith::squarefree_kernel(&radicand).to_string())
    };
    let out = BrumerOut {
        s,
        t,
        f: f.coeffs().iter().map(|c| c.to_string()).collect(),
        radicand: radicand.to_string(),
        kernel,
        degenerate,
    };
    emit(cfg, &out, || {
        format!("f = {f}\nradicand = {radicand}\ndegenerate = {degenerate}")
    });
    ExitCode::SUCCESS
}

fn cmd_lavallee(cfg: &RunConfig, s: i64) -> ExitCode {
    let (f, d, radicand) = dihedral::lavallee_quintic(s);
    #[derive(serde::Serialize)]
    struct LavalleeOut {
        s: i64,
        f: Vec<String>,
        disc_root: String,
        radicand: String,
    }
    let out = LavalleeOut {
        s,
        f: f.coeffs().iter().map(|c| c.to_string()).collect(),
        disc_root: d.to_string(),
        radicand: radicand.to_string(),
    };
    emit(cfg, &out, || format!("f_{s} = {f}\nD(s) = {d}\nradicand = {radicand}"));
    ExitCode::SUCCESS
}

fn certify_config(cfg: &RunConfig, closure_h: bool) -> CertifyConfig {
    CertifyConfig {
        class_cfg: cfg.class_group_config(),
        sampling_primes: cfg.sampling_primes,
        compute_closure_h: closure_h,
    }
}

fn cmd_certify(cfg: &RunConfig, a: &CertifyArgs) -> ExitCode {
    let (f, radicand, lavallee_family) = if let Some(st) = &a.brumer {
        let (f, r) = dihedral::brumer_quintic(st[0], st[1]);
        (f, r, false)
    } else if let Some(s) = a.lavallee {
        let (f, _, r) = dihedral::lavallee_quintic(s);
        (f, r, true)
    } else if let (Some(p), Some(r)) = (&a.poly, &a.radicand) {
        let f = match parse_poly(p) {
            Ok(f) => f,
            Err(e) => return fail(e),
        };
        let r: BigInt = match r.trim().parse() {
            Ok(v) => v,
            Err(e) => return fail(format!("bad radicand: {e}")),
        };
        (f, r, false)
    } else {
        return fail("specify --brumer S T, --lavallee S, or --poly + --radicand");
    };
    let ccfg = certify_config(cfg, a.closure_h);
    let inst = match build_instance(&f, &radicand, lavallee_family, ccfg.sampling_primes) {
        Ok(i) => i,
        Err(e) => return fail(e),
    };
    match certify_dihedral(&inst, &ccfg) {
        Ok(cert) => {
            let verdict = cert.verdict;
            let rep = report::certificate_report(&cert);
            emit(cfg, &rep, || {
                format!(
                    "f = {}\nE = Q(sqrt {})\nverdict: {}\n  t_K = {}, s_L = {}, #Po(E) = {}{}",
                    cert.f,
                    cert.d_e,
                    cert.verdict,
                    cert.t_k,
                    cert.s_l,
                    cert.po_e.explicit_order,
                    cert.h_k
                        .as_ref()
                        .map(|h| format!(", h(K) = {h}"))
                        .unwrap_or_default()
                )
            });
            match verdict {
                Verdict::Undecided => ExitCode::from(2),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => fail(e),
    }
}

fn parse_expect_file(path: &str) -> Result<(Vec<i64>, Vec<i64>), String> {
    let mut content = String::new();
    std::fs::File::open(path)
        .map_err(|e| format!("cannot open {path}: {e}"))?
        .read_to_string(&mut content)
        .map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut polya = Vec::new();
    let mut notpolya = Vec::new();
    let mut section = None;
    for line in content.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        match t {
            "[polya]" => section = Some(true),
            "[notpolya]" => section = Some(false),
            _ => {
                let v: i64 = t
                    .parse()
                    .map_err(|e| format!("bad integer {t:?} in {path}: {e}"))?;
                match section {
                    Some(true) => polya.push(v),
                    Some(false) => notpolya.push(v),
                    None => return Err(format!("value {t} before any section in {path}")),
                }
            }
        }
    }
    Ok((polya, notpolya))
}

fn cmd_sweep(cfg: &RunConfig, a: &SweepArgs) -> ExitCode {
    if a.from > a.to {
        return fail("empty range");
    }
    let ccfg = certify_config(cfg, false);
    let values: Vec<i64> = (a.from..=a.to).collect();
    let rows: Vec<dihedral::SweepRow> = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            values
                .par_iter()
                .map(|&s| {
                    let mut one = dihedral::lavallee_sweep([s], &ccfg);
                    one.pop().unwrap()
                })
                .collect()
        })
    } else {
        dihedral::lavallee_sweep(values.iter().copied(), &ccfg)
    };
    let reports: Vec<report::SweepRowReport> = rows.iter().map(report::sweep_row_report).collect();
    emit(cfg, &reports, || {
        let mut out = String::new();
        for r in &rows {
            let line = match &r.outcome {
                SweepOutcome::Skipped(reason) => {
                    format!("s = {:>4}: SKIPPED ({reason})", r.s)
                }
                SweepOutcome::Done(cert) => format!(
                    "s = {:>4}: {} (E = Q(sqrt {}), #Po(E) = {})",
                    r.s, cert.verdict, cert.d_e, cert.po_e.explicit_order
                ),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    });
    if let Some(path) = &a.expect {
        let (expect_polya, expect_not) = match parse_expect_file(path) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let mut mismatches = Vec::new();
        let verdict_of = |s: i64| -> Option<Verdict> {
            rows.iter().find(|r| r.s == s).and_then(|r| r.verdict())
        };
        for (list, want) in [(&expect_polya, Verdict::Polya), (&expect_not, Verdict::NotPolya)] {
            for &s in list.iter() {
                match verdict_of(s) {
                    Some(v) if v == want => {}
                    other => mismatches.push(format!(
                        "s = {s}: expected {want}, computed {:?}",
                        other.map(|v| v.to_string())
                    )),
                }
            }
        }
        if !mismatches.is_empty() {
            eprintln!("expectation mismatches:");
            for m in &mismatches {
                eprintln!("  {m}");
            }
            return ExitCode::from(1);
        }
        eprintln!("expectations satisfied: {} polya, {} not polya", expect_polya.len(), expect_not.len());
    }
    ExitCode::SUCCESS
}

fn cmd_audit(cfg: &RunConfig, a: &AuditArgs) -> ExitCode {
    let inst = if a.search_nonpure_cubic {
        match dihedral::find_nonpure_cubic(2, a.box_bound, cfg.sampling_primes) {
            Some(i) => i,
            None => return fail("no non-pure cubic with two totally ramified primes in the box"),
        }
    } else if let Some(p) = &a.poly {
        let f = match parse_poly(p) {
            Ok(f) => f,
            Err(e) => return fail(e),
        };
        let radicand = match &a.radicand {
            Some(r) => match r.trim().parse::<BigInt>() {
                Ok(v) => v,
                Err(e) => return fail(format!("bad radicand: {e}")),
            },
            None => match f.discriminant() {
                Ok(d) => d,
                Err(e) => return fail(e),
            },
        };
        match build_instance(&f, &radicand, false, cfg.sampling_primes) {
            Ok(i) => i,
            Err(e) => return fail(e),
        }
    } else {
        return fail("specify --poly or --search-nonpure-cubic");
    };
    let cg = match class_group(&inst.k, &cfg.class_group_config()) {
        Ok(cg) => cg,
        Err(NumFieldError::RelationSearchIncomplete(_)) => {
            eprintln!("class group incomplete; audit is conditional");
            return ExitCode::from(2);
        }
        Err(e) => return fail(e),
    };
    let bound = cfg.polya_bound.unwrap_or_else(|| default_polya_bound(&inst.k));
    match divisibility_audit(&inst, &cg, bound, cfg.window) {
        Ok(rep) => {
            let conditional = !cg.certified || !rep.po_k_stabilized;
            let json = report::audit_report_json(&rep);
            emit(cfg, &json, || {
                format!(
                    "audit of Q[X]/({})\n  t_K = {} (threshold {}), hypothesis holds: {}\n  \
                     #Po(K) = {:?}, divisibility asserted: {:?}",
                    inst.f, rep.t_k, rep.threshold, rep.hypothesis_holds,
                    rep.po_k_order.as_ref().map(|x| x.to_string()),
                    rep.divisibility_checked
                )
            });
            if conditional {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(e),
    }
}

fn parse_image(s: &str) -> Result<QElem, String> {
    let (num_part, den_part) = match s.split_once('/') {
        Some((n, d)) => (n, d.trim()),
        None => (s, "1"),
    };
    let num = IntPoly::parse(num_part).or_else(|_| {
        // allow the zero polynomial image (e.g. rational subfield generator)
        if num_part.split(',').all(|c| c.trim() == "0") {
            Ok(IntPoly::zero())
        } else {
            Err("bad image numerator".to_string())
        }
    })?;
    let den: BigInt = den_part.parse().map_err(|e| format!("bad image denominator: {e}"))?;
    Ok(QElem { num, den })
}

fn cmd_relative(cfg: &RunConfig, a: &RelativeArgs) -> ExitCode {
    let top = match parse_poly(&a.top) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let sub = match parse_poly(&a.sub) {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    let img = match parse_image(&a.image) {
        Ok(i) => i,
        Err(e) => return fail(e),
    };
    let l = match build_field(&top) {
        Ok(k) => k,
        Err(e) => return fail(e),
    };
    let k_sub = match build_field(&sub) {
        Ok(k) => k,
        Err(e) => return fail(e),
    };
    let cg = match class_group(&l, &cfg.class_group_config()) {
        Ok(cg) => cg,
        Err(NumFieldError::RelationSearchIncomplete(_)) => {
            eprintln!("class group of the top field incomplete; raise --effort");
            return ExitCode::from(2);
        }
        Err(e) => return fail(e),
    };
    let bound = cfg.polya_bound.unwrap_or_else(|| default_polya_bound(&l));
    match polya::relative_polya_group(&l, &k_sub, &img, &cg, bound, cfg.window, a.galois) {
        Ok(po) => {
            let ok = po.stabilized || po.certified_complete;
            let rep = report::polya_report(&po);
            emit(cfg, &rep, || {
                format!(
                    "relative Polya group\n  order {}\n  invariant factors {:?}\n  \
                     stabilized {} complete {}",
                    po.order,
                    po.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    po.stabilized,
                    po.certified_complete
                )
            });
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => fail(e),
    }
}
