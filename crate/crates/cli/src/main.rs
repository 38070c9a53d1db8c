use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cdforge::cdnum::{basis_product_oracle, multiply, AlgebraSignature, BasisProduct, Element, MAX_T};
use cdforge::diractest::{build_f, verify_hyperholomorphic, DiracError, GeneratedF};
use cdforge::isomap::{normalize_json, normalize_signature};
use cdforge::ratexpr::parse;
use cdforge::rational::{format_rational, int};
use cdforge::twistlab::render::{render_csv, render_json, render_pretty, render_sign_grid, GammaMode};
use cdforge::twistlab::{derive_twist_automaton, shuffle, twist_sign, SignTable};
use cdforge::SCHEMA;

#[derive(Parser)]
#[command(name = "cdforge", version, about = "Cayley-Dickson tables, products and hyperholomorphic checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the basis multiplication table.
    Table(TableArgs),
    /// Multiply two basis elements by both the twist walk and the recursion.
    Prod(ProdArgs),
    /// Generate F_t for a rational function v as JSON.
    Genf(GenfArgs),
    /// Check a generated F_t for exact Dirac zeros at random points.
    Verify(VerifyArgs),
    /// Reduce a signature to signs plus a coordinate rescaling.
    Normalize(NormalizeArgs),
    /// Time sign-table construction and dense products.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    t: usize,
    /// Comma-separated rationals, or `g1,g2,…` for symbolic entries; default all -1.
    #[arg(long, allow_hyphen_values = true)]
    gammas: Option<String>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    /// Print only the ±1 grid of the (-1, …, -1) table.
    #[arg(long)]
    signs: bool,
}

#[derive(Args)]
struct ProdArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, allow_hyphen_values = true)]
    gammas: Option<String>,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
struct GenfArgs {
    #[arg(long)]
    t: usize,
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// GeneratedF JSON file, `-` for stdin.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 25)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
struct NormalizeArgs {
    #[arg(long)]
    t: usize,
    #[arg(long, allow_hyphen_values = true)]
    gammas: String,
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 12)]
    t_max: usize,
    #[arg(long, default_value_t = 2)]
    t_min: usize,
}

/// Exit 1 for a failed check, 2 for bad input.
enum Failure {
    Check(anyhow::Error),
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Table(a) => table(a),
        Cmd::Prod(a) => prod(a),
        Cmd::Genf(a) => genf(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Normalize(a) => normalize(a),
        Cmd::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("cdforge: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("cdforge: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn check_t(t: usize, limit: usize, what: &str) -> anyhow::Result<()> {
    if t == 0 || t > limit {
        bail!("{what} needs 1 <= t <= {limit}, got {t}");
    }
    Ok(())
}

fn signature(t: usize, gammas: Option<&str>) -> anyhow::Result<AlgebraSignature> {
    let sig = match gammas {
        None => AlgebraSignature::uniform(t, -1),
        Some(text) => AlgebraSignature::parse(text).map_err(|e| anyhow!("bad --gammas {text:?}: {e}"))?,
    };
    if sig.t() != t {
        bail!("--t {t} needs {t} gammas, got {}", sig.t());
    }
    Ok(sig)
}

fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn table(a: TableArgs) -> Outcome {
    if a.signs {
        check_t(a.t, 8, "--signs")?;
        return Ok(emit(&render_sign_grid(a.t).map_err(anyhow::Error::from)?)?);
    }
    check_t(a.t, if a.format == Format::Pretty { 8 } else { 14 }, "table")?;
    let mode = match &a.gammas {
        None => GammaMode::Numeric(AlgebraSignature::uniform(a.t, -1)),
        Some(text) => GammaMode::parse(text).map_err(|e| anyhow!("bad --gammas: {e}"))?,
    };
    if mode.t() != a.t {
        return Err(anyhow!("--t {} needs {} gammas, got {}", a.t, a.t, mode.t()).into());
    }
    let text = match a.format {
        Format::Pretty => render_pretty(&mode),
        Format::Csv => render_csv(&mode),
        Format::Json => render_json(&mode).map(|v| serde_json::to_string_pretty(&v).expect("json")),
    }
    .map_err(anyhow::Error::from)?;
    Ok(emit(&text)?)
}

fn prod(a: ProdArgs) -> Outcome {
    check_t(a.t, MAX_T, "prod")?;
    let sig = signature(a.t, a.gammas.as_deref())?;
    let dim = sig.dim();
    if a.p >= dim || a.q >= dim {
        return Err(anyhow!("--p and --q must be below 2^t = {dim}").into());
    }
    // the automaton does not depend on t; derive it at a modest width
    let aut = derive_twist_automaton(a.t.clamp(3, 8)).map_err(anyhow::Error::from)?;
    let seq = shuffle(a.p, a.q, a.t);
    let sign = twist_sign(a.p, a.q, a.t, &aut);
    let twist = BasisProduct { index: a.p ^ a.q, coefficient: sig.gamma_product(a.p & a.q) * int(sign.into()) };
    let oracle = basis_product_oracle(a.p, a.q, &sig).map_err(anyhow::Error::from)?;
    let walk = aut.trace(&seq);
    let agree = twist == oracle;
    if a.format == Format::Json {
        let doc = json!({
            "schema": SCHEMA,
            "t": a.t,
            "p": a.p,
            "q": a.q,
            "gammas": sig.to_strings(),
            "shuffle": seq.to_string(),
            "walk": walk,
            "twist": { "index": twist.index, "coefficient": format_rational(&twist.coefficient) },
            "oracle": { "index": oracle.index, "coefficient": format_rational(&oracle.coefficient) },
            "agree": agree,
        });
        emit(&serde_json::to_string_pretty(&doc).expect("json"))?;
    } else {
        emit(&format!(
            "{oracle}\ntwist   {twist}\nshuffle {seq}\nwalk    {walk}\noracle  {oracle}\n"
        ))?;
    }
    if !agree {
        return Err(Failure::Check(anyhow!("twist path gives {twist}, oracle gives {oracle}")));
    }
    Ok(())
}

fn genf(a: GenfArgs) -> Outcome {
    check_t(a.t, MAX_T, "genf")?;
    let v = parse(&a.v).map_err(|e| anyhow!("bad --v {:?}: {e}", a.v))?;
    let text = build_f(a.t, &v).to_json();
    match a.out {
        Some(path) => fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => emit(&text)?,
    }
    Ok(())
}

fn read_input(path: &PathBuf) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn verify(a: VerifyArgs) -> Outcome {
    let text = read_input(&a.input)?;
    let f = GeneratedF::from_json(&text).map_err(|e| anyhow!("{}: {e}", a.input.display()))?;
    let report = match verify_hyperholomorphic(&f, a.points, a.seed) {
        Ok(r) => r,
        Err(e @ DiracError::PoleExhausted { .. }) => return Err(Failure::Check(e.into())),
        Err(e) => return Err(Failure::Usage(e.into())),
    };
    if a.format == Format::Json {
        emit(&report.to_json())?;
    } else {
        let zeros = report.points.iter().filter(|p| p.zero).count();
        emit(&format!(
            "t={} v={} seed={} points={} resamples={}\nexact zero residuals: {zeros}/{}",
            report.t,
            report.v,
            report.seed,
            report.points.len(),
            report.resamples,
            report.points.len()
        ))?;
    }
    if let Some((i, p)) = report.first_failure() {
        return Err(Failure::Check(anyhow!(
            "point {i} has nonzero residual [{}] at x = [{}]",
            p.residual.join(", "),
            p.coords.join(", ")
        )));
    }
    Ok(())
}

fn normalize(a: NormalizeArgs) -> Outcome {
    check_t(a.t, MAX_T, "normalize")?;
    let sig = signature(a.t, Some(&a.gammas))?;
    if a.format == Format::Json {
        return Ok(emit(&serde_json::to_string_pretty(&normalize_json(&sig)).expect("json"))?);
    }
    let (signs, tr) = normalize_signature(&sig);
    let factors: Vec<String> = tr.scale_factors.iter().map(ToString::to_string).collect();
    let mut text = format!("signs {signs}\nfactors ({})\n", factors.join(", "));
    if tr.is_identity() {
        text.push_str("identity\n");
    }
    Ok(emit(&text)?)
}

fn bench(a: BenchArgs) -> Outcome {
    check_t(a.t_max, 14, "bench")?;
    let mut out = String::from("t  entries       table_ms   product_ms\n");
    for t in a.t_min.max(1)..=a.t_max {
        let start = Instant::now();
        let table = SignTable::build(t, usize::MAX).map_err(anyhow::Error::from)?;
        let table_ms = start.elapsed().as_secs_f64() * 1e3;
        let entries = table.dim() * table.dim();
        drop(table);

        let sig = Arc::new(AlgebraSignature::uniform(t, -1));
        let dim = sig.dim();
        let coeffs = |salt: usize| -> Vec<i64> { (0..dim).map(|i| ((i * 7919 + salt) % 201) as i64 - 100).collect() };
        let x = Element::from_ints(sig.clone(), &coeffs(3)).map_err(anyhow::Error::from)?;
        let y = Element::from_ints(sig, &coeffs(11)).map_err(anyhow::Error::from)?;
        // warm the shared table so the timing covers the product only
        multiply(&x, &x).map_err(anyhow::Error::from)?;
        let start = Instant::now();
        multiply(&x, &y).map_err(anyhow::Error::from)?;
        let product_ms = start.elapsed().as_secs_f64() * 1e3;
        out.push_str(&format!("{t:<2} {entries:<13} {table_ms:<10.3} {product_ms:.3}\n"));
    }
    Ok(emit(&out)?)
}
