//! Command dispatch for the `ssmthom` binary.
//!
//! [`run_command`] never touches the process: it returns the exit code, the
//! text meant for stdout and stderr, and the files it wrote.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ssmthom::interpolation::{solve, verify_table, SolveOptions, SolveReport};
use ssmthom::io::{self, fixtures};
use ssmthom::mond::{component_denominators, image_milnor, k_polynomials, WeightData};
use ssmthom::structure::{assemble_source, assemble_target, ff_map};
use ssmthom::{
    build_prototype, AlgebraName, Catalog, IoError, Multisingularity, PrototypeOptions, Rational, RenderOptions,
    Series, SolveError, Table,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    /// Files written through `--out`/`--report`.
    pub files: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Partition notation, `s_{211}`.
    #[default]
    Tpp,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "ssmthom", version, about = "Exact SSM-Thom polynomials of multisingularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct OutputArgs {
    /// Stdout rendering.
    #[arg(long, value_enum, default_value_t = Format::Tpp)]
    format: Format,
    /// Also write canonical JSON to FILE.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write repeated parts with exponents, s_{31^2}.
    #[arg(long)]
    compress: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the master series S_1 up to a degree.
    Master {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        degree: u32,
        /// Write the per-stage rank report as JSON.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve for S of every sub-multisingularity of A0^j.
    Tower {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Assemble a Thom polynomial from an S table (and an R table for source ones).
    Thom {
        /// Multisingularity, e.g. `A0^2*A1` or `A1:A0*A1` for a source polynomial.
        #[arg(long)]
        psi: String,
        #[arg(long)]
        degree: u32,
        /// S table; defaults to the bundled l = 1 S table.
        #[arg(long, value_name = "FILE")]
        table: Option<PathBuf>,
        /// R table for source polynomials; defaults to the bundled l = 1 R table.
        #[arg(long, value_name = "FILE")]
        r_table: Option<PathBuf>,
        /// Print FF of the source polynomial instead.
        #[arg(long)]
        pushforward: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Image Milnor number of a quasihomogeneous germ (C^m,0) -> (C^{m+1},0).
    Milnor {
        /// Source weights, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        /// Component degrees, comma separated; one more than the weights.
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<u64>,
        /// Master series JSON; defaults to the bundled degree-14 series.
        #[arg(long, value_name = "FILE")]
        master: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Tpp)]
        format: Format,
    },
    /// K polynomials K_1..K_d from the master series.
    Kpoly {
        #[arg(long)]
        max_degree: u32,
        #[arg(long, value_name = "FILE")]
        master: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Torus-weighted prototype of a catalog algebra.
    Prototype {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        jet_bound: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Tpp)]
        format: Format,
    },
    /// Check the prototype condition and the low-degree vanishing on an S table.
    Verify {
        #[arg(long, value_name = "FILE")]
        table: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long, value_name = "FILE")]
        catalog: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Tpp)]
        format: Format,
    },
    /// List bundled fixtures, or re-derive them with --selftest.
    Fixtures {
        #[arg(long)]
        selftest: bool,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Read { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

macro_rules! compute_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Compute(e.to_string())
            }
        }
    )*};
}
impl From<ssmthom::MondError> for Failure {
    fn from(e: ssmthom::MondError) -> Self {
        match e {
            ssmthom::MondError::InvalidWeights(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

compute_error!(
    ssmthom::StructureError,
    ssmthom::PrototypeError,
    ssmthom::SingularityError
);

impl From<ssmthom::ParseError> for Failure {
    fn from(e: ssmthom::ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Ctx {
    res: CommandResult,
}

impl Ctx {
    fn write_file(&mut self, path: &Path, text: &str) -> Result<(), Failure> {
        std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        self.res.files.push(path.to_path_buf());
        Ok(())
    }
}

/// Parses `argv` (without the program name) and runs the command.
pub fn run_command<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("ssmthom")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CommandResult {
                    code: EXIT_OK,
                    stdout: text,
                    ..Default::default()
                },
                _ => CommandResult {
                    code: EXIT_USAGE,
                    stderr: text,
                    ..Default::default()
                },
            };
        }
    };
    let mut ctx = Ctx {
        res: CommandResult::default(),
    };
    match dispatch(cli.command, &mut ctx) {
        Ok(code) => ctx.res.code = code,
        Err(Failure::Usage(msg)) => {
            ctx.res.code = EXIT_USAGE;
            ctx.res.stderr = format!("error: {msg}\n");
        }
        Err(Failure::Compute(msg)) => {
            ctx.res.code = EXIT_COMPUTE;
            ctx.res.stderr = format!("error: {msg}\n");
        }
    }
    ctx.res
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<i32, Failure> {
    match cmd {
        Command::Master {
            l,
            degree,
            report,
            output,
        } => {
            let out = solve::<Rational>(&Multisingularity::empty(), l, degree, &Catalog::bundled(), SolveOptions::default())?;
            write_report(ctx, report.as_deref(), &out.report)?;
            let s = out.table.require(&Multisingularity::empty()).map_err(SolveError::from)?;
            emit_series(ctx, s, &output)?;
        }
        Command::Tower {
            l,
            j,
            degree,
            report,
            output,
        } => {
            let out = solve::<Rational>(&Multisingularity::a0_power(j), l, degree, &Catalog::bundled(), SolveOptions::default())?;
            write_report(ctx, report.as_deref(), &out.report)?;
            emit_table(ctx, &out.table, &output)?;
        }
        Command::Thom {
            psi,
            degree,
            table,
            r_table,
            pushforward,
            output,
        } => {
            let psi = Multisingularity::parse(&psi)?;
            let s_table = match table {
                Some(p) => io::load_table::<Rational>(&p)?,
                None => fixtures::fig_sl1()?,
            };
            if psi.distinguished().is_some() {
                let r = match r_table {
                    Some(p) => io::load_table::<Rational>(&p)?,
                    None => fixtures::fig_rl1()?,
                };
                let th = assemble_source(&r, &s_table, &psi, degree)?;
                let th = if pushforward { ff_map(&th, degree + s_table.l)? } else { th };
                emit_series(ctx, &th, &output)?;
            } else {
                let all = assemble_target(&s_table, &psi, degree)?;
                emit_series(ctx, all.require(&psi)?, &output)?;
            }
        }
        Command::Milnor {
            weights,
            degrees,
            master,
            format,
        } => {
            let w = WeightData::new(weights, degrees)?;
            let master = load_master(master.as_deref())?;
            let kset = k_polynomials(&master, w.m() as u32 + 1)?;
            let r = image_milnor(&w, &kset)?;
            match format {
                Format::Tpp => writeln!(ctx.res.stdout, "{r}").unwrap(),
                Format::Json => {
                    let v = json!({"value": r.value.to_string(), "verdict": r.verdict});
                    writeln!(ctx.res.stdout, "{}", pretty(&v)).unwrap();
                }
            }
        }
        Command::Kpoly {
            max_degree,
            master,
            output,
        } => {
            let master = load_master(master.as_deref())?;
            let kset = k_polynomials(&master, max_degree)?;
            let opts = RenderOptions {
                compress: output.compress,
            };
            let json_list = Value::Array((1..=max_degree as usize).map(|d| io::series_to_value(kset.k(d))).collect());
            let canonical = pretty(&json!({ "k_polynomials": json_list }));
            match output.format {
                Format::Tpp => {
                    for d in 1..=max_degree as usize {
                        writeln!(ctx.res.stdout, "K_{d} = {}", kset.k(d).render(opts)).unwrap();
                    }
                }
                Format::Json => writeln!(ctx.res.stdout, "{canonical}").unwrap(),
            }
            if let Some(p) = &output.out {
                ctx.write_file(p, &(canonical + "\n"))?;
            }
        }
        Command::Prototype {
            algebra,
            l,
            jet_bound,
            format,
        } => {
            let name: AlgebraName = algebra.parse()?;
            let alg = Catalog::bundled().get(name)?.clone();
            let model = build_prototype(&alg, l, PrototypeOptions { jet_bound })?;
            let v = json!({
                "name": model.name,
                "l": model.l,
                "rank": model.rank,
                "algebra_dim": model.algebra_dim,
                "scodim": model.scodim,
                "tcodim": model.tcodim,
                "generator_weights": model.generator_weights,
                "component_weights": model.component_weights,
                "complement": model.complement,
                "source_weights": model.source_weights,
                "target_weights": model.target_weights,
            });
            match format {
                Format::Json => writeln!(ctx.res.stdout, "{}", pretty(&v)).unwrap(),
                Format::Tpp => {
                    let o = &mut ctx.res.stdout;
                    writeln!(o, "{} (l = {}), dim Q = {}", model.name, model.l, model.algebra_dim).unwrap();
                    writeln!(o, "source dim {}, target dim {}", model.scodim, model.tcodim).unwrap();
                    writeln!(o, "source weights {}", weights_text(&model.source_weights)).unwrap();
                    writeln!(o, "target weights {}", weights_text(&model.target_weights)).unwrap();
                }
            }
        }
        Command::Verify {
            table,
            degree,
            catalog,
            format,
        } => {
            let t = io::load_table::<Rational>(&table)?;
            let cat = match catalog {
                Some(p) => Catalog::from_json(&io::read_file(&p)?)?,
                None => Catalog::bundled(),
            };
            let rep = verify_table(&t, degree, &cat)?;
            match format {
                Format::Json => writeln!(ctx.res.stdout, "{}", serde_json::to_string_pretty(&rep).unwrap()).unwrap(),
                Format::Tpp => {
                    for c in &rep.checks {
                        let status = if c.pass { "ok" } else { "FAIL" };
                        write!(ctx.res.stdout, "{status} {} {} degree {}", c.multisingularity, c.check, c.degree).unwrap();
                        if let Some(r) = &c.residual {
                            write!(ctx.res.stdout, ": residual {r}").unwrap();
                        }
                        ctx.res.stdout.push('\n');
                    }
                    let failed = rep.failures().count();
                    writeln!(ctx.res.stdout, "{} checks, {failed} failed", rep.checks.len()).unwrap();
                }
            }
            return Ok(if rep.passed() { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::Fixtures { selftest } => {
            if !selftest {
                for n in io::fixture_names() {
                    writeln!(ctx.res.stdout, "{n}").unwrap();
                }
                return Ok(EXIT_OK);
            }
            let results = selftest_checks();
            let mut ok = true;
            for (name, r) in results {
                match r {
                    Ok(detail) => writeln!(ctx.res.stdout, "ok {name}: {detail}").unwrap(),
                    Err(detail) => {
                        ok = false;
                        writeln!(ctx.res.stdout, "FAIL {name}: {detail}").unwrap();
                    }
                }
            }
            return Ok(if ok { EXIT_OK } else { EXIT_VERIFY });
        }
    }
    Ok(EXIT_OK)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn weights_text(ws: &[Vec<i64>]) -> String {
    let parts: Vec<String> = ws
        .iter()
        .map(|w| format!("({})", w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    parts.join(" ")
}

fn load_master(path: Option<&Path>) -> Result<Series, Failure> {
    Ok(match path {
        Some(p) => io::load_series::<Rational>(p)?,
        None => fixtures::master_l1()?,
    })
}

fn write_report(ctx: &mut Ctx, path: Option<&Path>, report: &SolveReport) -> Result<(), Failure> {
    if let Some(p) = path {
        // Timings would make the file differ between runs.
        let mut v = serde_json::to_value(report).expect("reports serialize");
        if let Some(stages) = v.get_mut("stages").and_then(Value::as_array_mut) {
            for s in stages {
                if let Some(o) = s.as_object_mut() {
                    o.remove("micros");
                }
            }
        }
        ctx.write_file(p, &(pretty(&v) + "\n"))?;
    }
    Ok(())
}

fn emit_series(ctx: &mut Ctx, s: &Series, output: &OutputArgs) -> Result<(), Failure> {
    let canonical = io::series_to_json(s);
    match output.format {
        Format::Tpp => {
            let opts = RenderOptions {
                compress: output.compress,
            };
            writeln!(ctx.res.stdout, "{}", s.render(opts)).unwrap();
        }
        Format::Json => writeln!(ctx.res.stdout, "{canonical}").unwrap(),
    }
    if let Some(p) = &output.out {
        ctx.write_file(p, &(canonical + "\n"))?;
    }
    Ok(())
}

fn emit_table(ctx: &mut Ctx, t: &Table, output: &OutputArgs) -> Result<(), Failure> {
    let canonical = io::table_to_json(t);
    match output.format {
        Format::Tpp => {
            let opts = RenderOptions {
                compress: output.compress,
            };
            for (psi, s) in t.entries() {
                writeln!(ctx.res.stdout, "S_{psi} = {}", s.render(opts)).unwrap();
            }
        }
        Format::Json => writeln!(ctx.res.stdout, "{canonical}").unwrap(),
    }
    if let Some(p) = &output.out {
        ctx.write_file(p, &(canonical + "\n"))?;
    }
    Ok(())
}

type Check = Result<String, String>;

/// Re-derivations behind `fixtures --selftest`.
pub fn selftest_checks() -> Vec<(&'static str, Check)> {
    vec![
        ("ff-of-rl1", check_ff_rl1()),
        ("verify-sl1", check_verify_sl1()),
        ("master-prefix", check_master_prefix()),
        ("norlund-denominators", check_denominators()),
    ]
}

fn check_ff_rl1() -> Check {
    let s = fixtures::fig_sl1().map_err(|e| e.to_string())?;
    let r = fixtures::fig_rl1().map_err(|e| e.to_string())?;
    let mut bad = Vec::new();
    for (psi, row) in r.entries() {
        let k = (row.truncation() + r.l).min(s.truncation);
        let ff = ff_map(row, k).map_err(|e| e.to_string())?;
        let want = s.require(psi).map_err(|e| e.to_string())?.with_truncation(k);
        if ff != want {
            bad.push(psi.to_string());
        }
    }
    if bad.is_empty() {
        Ok(format!("{} rows", r.len()))
    } else {
        Err(format!("FF(R) differs from S for {}", bad.join(", ")))
    }
}

fn check_verify_sl1() -> Check {
    let s = fixtures::fig_sl1().map_err(|e| e.to_string())?;
    let rep = verify_table(&s, s.truncation, &Catalog::bundled()).map_err(|e| e.to_string())?;
    if rep.passed() {
        Ok(format!("{} checks", rep.checks.len()))
    } else {
        let mut rows: Vec<String> = rep.failures().map(|c| c.multisingularity.clone()).collect();
        rows.dedup();
        Err(format!("condition checks fail for {}", rows.join(", ")))
    }
}

fn check_master_prefix() -> Check {
    let k = 6;
    let out = solve::<Rational>(&Multisingularity::empty(), 1, k, &Catalog::bundled(), SolveOptions::default())
        .map_err(|e| e.to_string())?;
    let solved = out.table.require(&Multisingularity::empty()).map_err(|e| e.to_string())?;
    let bundled = fixtures::master_l1().map_err(|e| e.to_string())?;
    if *solved == bundled.with_truncation(k) {
        Ok(format!("degrees 0..={k}"))
    } else {
        Err("solved master differs from the bundled series".into())
    }
}

fn check_denominators() -> Check {
    let master = fixtures::master_l1().map_err(|e| e.to_string())?;
    let want = fixtures::norlund_denominators().map_err(|e| e.to_string())?;
    let got: Vec<String> = component_denominators(&master, want.len() as u32)
        .iter()
        .map(|d| d.to_string())
        .collect();
    let want: Vec<String> = want.iter().map(|d| d.to_string()).collect();
    if got == want {
        Ok(got.join(","))
    } else {
        Err(format!("got {}, expected {}", got.join(","), want.join(",")))
    }
}
