//! `mrees`: defining equations of multi-Rees algebras and their checks.

mod format;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use format::Format;
use mrees_core::grobner::{
    buchberger_check, default_order_suite, generic_s_bar_a, universal_gb_check, BuchbergerReport, ReductionStrategy,
};
use mrees_core::oracle::{monomial_syzygy_kernel, multidegrees, span_compare, OracleCaps, DEFAULT_MONOMIAL_CAP};
use mrees_core::rees::{
    build_presentation, squarefree_normality_report, Family, IndexingMode, ReesPresentation, ReesSpec, SpecFile,
};
use mrees_core::sseq::{syzygy_generators, taylor_complex, SMonomial, SeqMode};
use mrees_core::{parse_poly, Block, Coefficient, Domain, Error, OrderKind, Poly, VarUniverse};

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "mrees", version, about = "Defining equations of multi-Rees algebras")]
struct Cli {
    /// Worker threads for independent pieces and pairs (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Seed for randomized order suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print E_a and the generator list.
    Generators {
        spec: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        /// Also write `e_a.txt` and `generators.<ext>` into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that every generator vanishes and compare with the kernel.
    Verify {
        spec: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        #[command(flatten)]
        caps: CapArgs,
        /// Skip the kernel comparison.
        #[arg(long)]
        phi_only: bool,
        /// Flip the sign of one term of generator K (0-based) before checking.
        #[arg(long, value_name = "K")]
        inject_sign_flip: Option<usize>,
    },
    /// Pairwise S'-reduction of the generators across an order suite.
    Groebner {
        /// Spec file; omit when using --matrix.
        spec: Option<PathBuf>,
        /// Use the generic matrix (s | A) with A of shape ROWSxCOLS.
        #[arg(long, value_name = "ROWSxCOLS")]
        matrix: Option<String>,
        #[command(flatten)]
        build: BuildArgs,
        /// Restrict the suite to one order kind.
        #[arg(long)]
        order: Option<OrderKind>,
        /// Rankings per order kind (the first is the standard ranking).
        #[arg(long, default_value_t = 5)]
        perms: usize,
        /// Keep only the first N generators.
        #[arg(long, value_name = "N")]
        truncate: Option<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::First)]
        strategy: StrategyArg,
    },
    /// Taylor complex, pairwise syzygies and the syzygy kernel comparison.
    Taylor {
        /// Monomials such as `x^2*y`.
        #[arg(required = true)]
        monomials: Vec<String>,
        /// Degree bound for the kernel comparison.
        #[arg(long, default_value_t = 8)]
        degree: u32,
        #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
        monomial_cap: usize,
    },
    /// Graded comparison of the generated ideal with the kernel.
    Oracle {
        spec: PathBuf,
        #[command(flatten)]
        build: BuildArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Args, Clone)]
struct BuildArgs {
    /// `restricted` by default; `full` for `groebner`.
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    max_minor_size: Option<usize>,
    #[arg(long)]
    reduced_indexing: bool,
}

impl BuildArgs {
    fn family(&self) -> Family {
        self.family.unwrap_or(Family::Restricted)
    }
}

#[derive(Args, Clone)]
struct CapArgs {
    #[arg(long, default_value_t = 3)]
    t_degree_cap: u32,
    /// Defaults to 3 * max(a) + 2.
    #[arg(long)]
    s_degree_cap: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_MONOMIAL_CAP)]
    monomial_cap: usize,
}

impl CapArgs {
    fn caps(&self) -> OracleCaps {
        OracleCaps {
            max_monomials: self.monomial_cap,
            t_degree: self.t_degree_cap,
            aux_degree: self.s_degree_cap,
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum StrategyArg {
    First,
    Smallest,
}

impl From<StrategyArg> for ReductionStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::First => ReductionStrategy::FirstMatch,
            StrategyArg::Smallest => ReductionStrategy::SmallestLeading,
        }
    }
}

/// Outcome of a subcommand: output text and whether the check passed.
struct Outcome {
    text: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CapExceeded { .. } | Error::GuardExceeded { .. } => EXIT_CAP,
                _ => EXIT_INVALID,
            })
        }
    }
}

fn read_spec(path: &Path) -> Result<SpecFile, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    SpecFile::from_json(&text)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Groebner { spec: None, matrix, .. } => {
            let Some(shape) = matrix else {
                return Err(Error::InvalidSpec("groebner needs a spec file or --matrix".into()));
            };
            groebner_matrix(cli, shape)
        }
        Command::Taylor {
            monomials,
            degree,
            monomial_cap,
        } => taylor(cli, monomials, *degree, *monomial_cap),
        Command::Generators { spec, .. }
        | Command::Verify { spec, .. }
        | Command::Oracle { spec, .. }
        | Command::Groebner { spec: Some(spec), .. } => {
            let file = read_spec(spec)?;
            match file.coefficients {
                Domain::Integers => with_spec::<BigInt>(cli, &file),
                Domain::Rationals => with_spec::<BigRational>(cli, &file),
            }
        }
    }
}

fn presentation<C: Coefficient>(file: &SpecFile, build: &BuildArgs) -> Result<ReesPresentation<C>, Error> {
    let spec = ReesSpec::<C>::from_file(file)?;
    let mode = if build.reduced_indexing {
        IndexingMode::Reduced
    } else {
        IndexingMode::Primary
    };
    build_presentation(&spec, mode)
}

fn with_spec<C: Coefficient>(cli: &Cli, file: &SpecFile) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Generators { build, out, .. } => {
            let pres = presentation::<C>(file, build)?;
            let gens = pres.defining_generators(build.family(), build.max_minor_size)?;
            let text = format::generators(&pres, &gens, build.family(), cli.seed, cli.format);
            if let Some(dir) = out {
                write_outputs(dir, &pres, &text, cli.format)?;
            }
            Ok(Outcome { text, passed: true })
        }
        Command::Verify {
            build,
            caps,
            phi_only,
            inject_sign_flip,
            ..
        } => {
            let pres = presentation::<C>(file, build)?;
            let mut gens = pres.defining_generators(build.family(), build.max_minor_size)?;
            if let Some(k) = inject_sign_flip {
                let g = gens
                    .get_mut(*k)
                    .ok_or_else(|| Error::OutOfRange(format!("no generator {k}")))?;
                *g = flip_last_term(g);
            }
            verify(cli, &pres, &gens, build.family(), &caps.caps(), *phi_only)
        }
        Command::Oracle { build, caps, .. } => {
            let pres = presentation::<C>(file, build)?;
            let gens = pres.defining_generators(build.family(), build.max_minor_size)?;
            let caps = caps.caps();
            let report = span_compare(&gens, &pres, &multidegrees(&pres, &caps), &caps)?;
            let text = match cli.format {
                Format::Json => {
                    let v = json!({"seed": cli.seed, "caps": caps, "report": report});
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
                _ => format!(
                    "# mrees oracle seed={} generators={}\n{}{}\n",
                    cli.seed,
                    gens.len(),
                    report.to_table(),
                    if report.equal { "PASS" } else { "FAIL" }
                ),
            };
            Ok(Outcome {
                text,
                passed: report.equal,
            })
        }
        Command::Groebner {
            build,
            order,
            perms,
            truncate,
            strategy,
            ..
        } => {
            let pres = presentation::<C>(file, build)?;
            let mut gens = pres.defining_generators(build.family.unwrap_or(Family::FullIbin), build.max_minor_size)?;
            if let Some(n) = truncate {
                gens.truncate(*n);
            }
            let gens: Vec<Poly<C>> = gens.iter().map(|g| pres.concretize(g)).collect::<Result<_, _>>()?;
            let orders: Vec<_> = default_order_suite(&pres.universe, cli.seed, (*perms).max(1))
                .into_iter()
                .filter(|o| order.is_none_or(|k| o.kind() == k))
                .collect();
            let reports = orders
                .iter()
                .map(|ord| buchberger_check(&gens, ord, (*strategy).into()))
                .collect::<Result<Vec<_>, _>>()?;
            let mut out = groebner_text(cli, gens.len(), &reports);
            if cli.format == Format::Text && pres.spec.seq.mode == SeqMode::Generic {
                for kind in [OrderKind::Lex, OrderKind::GrevLex] {
                    let ord = pres.pure_first_order(kind);
                    let rep = squarefree_normality_report(&pres, &gens, &ord)?;
                    out.text.push_str(&format!("squarefree leading terms ({kind}, pure powers first): {:?}\n", rep.verdict));
                }
            }
            Ok(out)
        }
        Command::Taylor { .. } => unreachable!("handled without a spec"),
    }
}

fn write_outputs<C: Coefficient>(dir: &Path, pres: &ReesPresentation<C>, text: &str, format: Format) -> Result<(), Error> {
    let io = |e: std::io::Error| Error::InvalidSpec(format!("cannot write to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("e_a.txt"), pres.render_e()).map_err(io)?;
    let ext = match format {
        Format::Text => "txt",
        Format::Json => "json",
        Format::Cas => "m2",
    };
    std::fs::write(dir.join(format!("generators.{ext}")), text).map_err(io)
}

/// Negates the last displayed term.
fn flip_last_term<C: Coefficient>(g: &Poly<C>) -> Poly<C> {
    let terms = g.display_terms();
    let (m, c) = terms.last().expect("generators are nonzero");
    let twice = (*c).clone() + (*c).clone();
    g - &Poly::term(g.universe(), twice, (*m).clone())
}

fn verify<C: Coefficient>(
    cli: &Cli,
    pres: &ReesPresentation<C>,
    gens: &[Poly<C>],
    family: Family,
    caps: &OracleCaps,
    phi_only: bool,
) -> Result<Outcome, Error> {
    let mut failures = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let img = pres.phi_apply(g)?;
        if !img.is_zero() {
            failures.push(json!({"generator": k, "polynomial": g.to_string(), "image": img.to_string()}));
        }
    }
    let kernel = if phi_only || pres.spec.seq.mode == SeqMode::Concrete {
        None
    } else {
        Some(span_compare(gens, pres, &multidegrees(pres, caps), caps)?)
    };
    let passed = failures.is_empty() && kernel.as_ref().is_none_or(|r| r.equal);
    let text = match cli.format {
        Format::Json => {
            let v = json!({
                "seed": cli.seed,
                "family": format!("{family:?}"),
                "generators": gens.len(),
                "phi_vanishing": failures.is_empty(),
                "phi_witnesses": failures,
                "kernel": kernel,
                "result": if passed { "PASS" } else { "FAIL" },
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        _ => {
            let mut s = format!("# mrees verify seed={} family={family:?} generators={}\n", cli.seed, gens.len());
            s.push_str(&format!(
                "phi-vanishing: {}\n",
                if failures.is_empty() { "PASS" } else { "FAIL" }
            ));
            for f in &failures {
                s.push_str(&format!(
                    "  witness: generator {} = {} maps to {}\n",
                    f["generator"], f["polynomial"].as_str().unwrap_or(""), f["image"].as_str().unwrap_or("")
                ));
            }
            match &kernel {
                Some(r) => {
                    s.push_str("kernel comparison:\n");
                    s.push_str(&r.to_table());
                }
                None => s.push_str("kernel comparison: skipped\n"),
            }
            s.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            s
        }
    };
    Ok(Outcome { text, passed })
}

fn groebner_text(cli: &Cli, generators: usize, reports: &[BuchbergerReport]) -> Outcome {
    let passed = reports.iter().all(BuchbergerReport::passed);
    let text = match cli.format {
        Format::Json => {
            let v = json!({"seed": cli.seed, "generators": generators, "reports": reports,
                "result": if passed { "PASS" } else { "FAIL" }});
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        _ => {
            let mut s = format!("# mrees groebner seed={} generators={generators}\n", cli.seed);
            for r in reports {
                s.push_str(&format!(
                    "{}: pairs={} inconclusive={} {}\n",
                    r.order,
                    r.pairs_checked,
                    r.inconclusive.len(),
                    if r.passed() { "PASS" } else { "FAIL" }
                ));
                for p in &r.inconclusive {
                    s.push_str(&format!(
                        "  INCONCLUSIVE ({}, {}): {}\n",
                        p.i,
                        p.j,
                        p.residual.as_deref().unwrap_or("")
                    ));
                }
            }
            s.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            s
        }
    };
    Outcome { text, passed }
}

fn groebner_matrix(cli: &Cli, shape: &str) -> Result<Outcome, Error> {
    let Command::Groebner {
        order, perms, strategy, ..
    } = &cli.command
    else {
        unreachable!()
    };
    let (r, c) = shape
        .split_once('x')
        .and_then(|(r, c)| Some((r.trim().parse::<usize>().ok()?, c.trim().parse::<usize>().ok()?)))
        .ok_or_else(|| Error::InvalidSpec(format!("matrix shape `{shape}` is not ROWSxCOLS")))?;
    if r == 0 || c == 0 {
        return Err(Error::InvalidSpec("matrix shape must be positive".into()));
    }
    let (universe, b) = generic_s_bar_a(r, c)?;
    let orders: Vec<_> = default_order_suite(&universe, cli.seed, (*perms).max(1))
        .into_iter()
        .filter(|o| order.is_none_or(|k| o.kind() == k))
        .collect();
    let report = universal_gb_check::<BigInt>(&b, &universe, &orders, (*strategy).into())?;
    Ok(groebner_text(cli, report.generators, &report.reports))
}

/// Parses monomials over the variable names they mention, in order of
/// first appearance.
fn parse_monomials(texts: &[String]) -> Result<(Vec<String>, Vec<SMonomial>), Error> {
    let mut names: Vec<String> = Vec::new();
    for t in texts {
        let mut cur = String::new();
        for ch in t.chars().chain(std::iter::once(' ')) {
            if ch.is_alphanumeric() || ch == '_' {
                if !(cur.is_empty() && ch.is_ascii_digit()) {
                    cur.push(ch);
                }
            } else if !cur.is_empty() {
                if !names.contains(&cur) {
                    names.push(cur.clone());
                }
                cur.clear();
            }
        }
    }
    let universe = VarUniverse::builder().x_vars(names.iter().cloned()).build()?;
    let mut out = Vec::new();
    for t in texts {
        let p: Poly<BigInt> = parse_poly(t, &universe)?;
        let mono = match p.terms().collect::<Vec<_>>().as_slice() {
            [(m, c)] if **c == BigInt::from(1) => (*m).clone(),
            _ => return Err(Error::Parse(format!("`{t}` is not a monomial"))),
        };
        let exps = universe
            .x_vars()
            .iter()
            .map(|&v| {
                debug_assert_eq!(universe.block(v), Block::X);
                mono.exponent(v)
            })
            .collect();
        out.push(SMonomial::new(exps));
    }
    Ok((names, out))
}

fn taylor(cli: &Cli, texts: &[String], degree: u32, monomial_cap: usize) -> Result<Outcome, Error> {
    let (names, gens) = parse_monomials(texts)?;
    let complex = taylor_complex(&gens)?;
    let syz = syzygy_generators(&gens)?;
    let caps = OracleCaps {
        max_monomials: monomial_cap,
        ..Default::default()
    };
    let kernel = monomial_syzygy_kernel(&gens, degree, &caps)?;
    let is_complex = complex.is_complex();
    let annihilate = syz.iter().all(|s| s.annihilates(&gens));
    let passed = is_complex && annihilate && kernel.equal;
    let show = |m: &SMonomial| m.display_with(&names);
    let text = match cli.format {
        Format::Json => {
            let diffs: Vec<_> = (1..=complex.len())
                .map(|p| {
                    let d = complex.differential(p);
                    let entries: Vec<_> = d
                        .entries
                        .iter()
                        .map(|(&(r, c), e)| json!({"row": r, "col": c, "sign": e.sign, "monomial": show(&e.mono)}))
                        .collect();
                    json!({"p": p, "rows": d.rows, "cols": d.cols, "entries": entries})
                })
                .collect();
            let syzygies: Vec<_> = syz
                .iter()
                .map(|s| json!({"i": s.i, "j": s.j, "coeff_i": show(&s.coeff_i), "coeff_j": show(&s.coeff_j)}))
                .collect();
            let v = json!({
                "seed": cli.seed,
                "generators": gens.iter().map(show).collect::<Vec<_>>(),
                "differentials": diffs,
                "d_squared_zero": is_complex,
                "syzygies": syzygies,
                "oracle": kernel,
                "result": if passed { "PASS" } else { "FAIL" },
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        _ => {
            let mut s = format!("# mrees taylor seed={} generators={}\n", cli.seed, gens.len());
            for p in 1..=complex.len() {
                let d = complex.differential(p);
                s.push_str(&format!("d{p}: rank {} -> rank {}\n", d.cols, d.rows));
                for c in 0..d.cols {
                    let parts: Vec<String> = d
                        .entries
                        .iter()
                        .filter(|((_, col), _)| *col == c)
                        .map(|(&(r, _), e)| {
                            let sign = if e.sign < 0 { "-" } else { "+" };
                            let label = basis_label(&complex.basis[p - 1][r]);
                            if e.mono.is_one() {
                                format!("{sign} {label}")
                            } else if p == 1 {
                                format!("{sign} {}", show(&e.mono))
                            } else {
                                format!("{sign} {}*{label}", show(&e.mono))
                            }
                        })
                        .collect();
                    s.push_str(&format!("  d({}) = {}\n", basis_label(&complex.basis[p][c]), parts.join(" ")));
                }
            }
            s.push_str(&format!("d o d = 0: {}\n", if is_complex { "yes" } else { "NO" }));
            s.push_str("syzygies:\n");
            for z in &syz {
                s.push_str(&format!(
                    "  {}*e{} - {}*e{}\n",
                    show(&z.coeff_i),
                    z.i + 1,
                    show(&z.coeff_j),
                    z.j + 1
                ));
            }
            s.push_str(&format!("oracle up to degree {degree}:\n"));
            for p in &kernel.pieces {
                s.push_str(&format!(
                    "  degree {}: kernel {} pairwise {} {}\n",
                    p.degree,
                    p.kernel_dim,
                    p.pairwise_dim,
                    if p.equal { "ok" } else { "MISMATCH" }
                ));
            }
            s.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            s
        }
    };
    Ok(Outcome { text, passed })
}

fn basis_label(subset: &[usize]) -> String {
    if subset.is_empty() {
        return "1".into();
    }
    let idx: Vec<String> = subset.iter().map(|i| (i + 1).to_string()).collect();
    format!("e{}", idx.join(""))
}
