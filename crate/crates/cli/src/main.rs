use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use quatjordan::check::Residual;
use quatjordan::generate::{default_grid, random_spec};
use quatjordan::io::{self, Style};
use quatjordan::spectral::verify_cayley_hamilton;
use quatjordan::{
    additive_jcd, char_poly, exp_jcd_relation, generate, hexp, hlog, jordan_form, multiplicative_jcd, spectrum, Error,
    HMatrix, Tolerances,
};

#[derive(Parser, Debug)]
#[command(name = "quatjordan", version, about = "Jordan forms and Jordan-Chevalley decompositions of quaternion matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Relative threshold for rank decisions.
    #[arg(long, global = true, default_value_t = Tolerances::default().rank)]
    tol_rank: f64,
    /// Distance below which eigenvalues are merged.
    #[arg(long, global = true, default_value_t = Tolerances::default().eig)]
    tol_eig: f64,
    /// Relative bound for verification residuals.
    #[arg(long, global = true, default_value_t = Tolerances::default().residual)]
    tol_residual: f64,
    /// Render quaternion entries as aligned "a+bi+cj+dk" strings.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct Input {
    /// Matrix JSON file; reads standard input when omitted or "-".
    path: Option<PathBuf>,
    /// Inline matrix JSON instead of a file.
    #[arg(long, conflicts_with = "path")]
    matrix: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complex adjoint [[Y, -Z], [conj Z, conj Y]] of A = Y + Z j.
    Adjoint(Input),
    /// Characteristic polynomial of the adjoint, ascending coefficients.
    Charpoly(Input),
    /// Eigenvalues with multiplicities.
    Spectrum(Input),
    /// Jordan canonical form and transition matrix.
    Jordan(Input),
    /// Additive Jordan-Chevalley decomposition A = S + N.
    Jcd(Input),
    /// Multiplicative Jordan-Chevalley decomposition A = S U.
    Mjcd(Input),
    /// Matrix exponential.
    Exp(Input),
    /// Principal matrix logarithm.
    Log(Input),
    /// Compares exp of the additive parts with the multiplicative parts of exp A.
    Expjcd(Input),
    /// Runs every verification on the input and reports each residual.
    Check(Input),
    /// Generates A = P J P^-1 for a Jordan spec.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Seed for the transition matrix (and the spec when --n is used).
    #[arg(long)]
    seed: u64,
    /// Jordan spec JSON, [{"re": .., "im": .., "size": ..}, ...], inline or a file path.
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    spec: Option<String>,
    /// Draw a random spec of this dimension from the default eigenvalue grid.
    #[arg(long)]
    n: Option<usize>,
    /// Upper bound on the condition number of P.
    #[arg(long, default_value_t = 1e3)]
    cond: f64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Dimension(_) | Error::NonFinite => 2,
        Error::VerificationFailed { .. } => 3,
        _ => 1,
    }
}

fn read_input(input: &Input) -> Result<HMatrix, Error> {
    let text = match (&input.matrix, &input.path) {
        (Some(inline), _) => inline.clone(),
        (None, Some(p)) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
            s
        }
    };
    io::parse_matrix(&text)
}

fn read_spec(arg: &str) -> Result<quatjordan::JordanSpec, Error> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")))?
    };
    io::parse_spec(&text)
}

fn residual_entry(r: &Residual) -> Value {
    let mut entry = json!({ "name": r.name, "value": r.value, "bound": r.bound, "passed": r.passed() });
    if r.advisory {
        entry["advisory"] = json!(true);
    }
    entry
}

fn failed_entry(name: &str, e: &Error) -> Value {
    json!({ "name": name, "passed": false, "error": e.to_string() })
}

/// Every verification on `a`; never fails, failures are recorded.
fn check(a: &HMatrix, tol: &Tolerances) -> (Value, bool) {
    let mut checks = Vec::new();
    let norm = a.norm_max();
    let dim = a.n() as i32;
    match verify_cayley_hamilton(a, tol) {
        Ok(v) => checks.push(residual_entry(&Residual::new("p(A) = 0", v, tol.residual * (1.0 + norm).powi(2 * dim)))),
        Err(e) => checks.push(failed_entry("p(A) = 0", &e)),
    }
    match jordan_form(a, tol) {
        Ok(jr) => checks.push(residual_entry(&Residual::new(
            "P^-1 A P = J",
            jr.residual,
            tol.residual * (1.0 + norm),
        ))),
        Err(e) => checks.push(failed_entry("P^-1 A P = J", &e)),
    }
    match additive_jcd(a, tol) {
        Ok(d) => checks.extend(d.residuals.iter().map(residual_entry)),
        Err(e) => checks.push(failed_entry("additive decomposition", &e)),
    }
    match multiplicative_jcd(a, tol) {
        Ok(d) => checks.extend(d.residuals.iter().map(residual_entry)),
        Err(Error::Singular) => checks.push(json!({ "name": "multiplicative decomposition", "skipped": "singular" })),
        Err(e) => checks.push(failed_entry("multiplicative decomposition", &e)),
    }
    match hlog(a, tol) {
        Ok(l) => checks.push(residual_entry(&Residual::new(
            "exp(log A) = A",
            (&hexp(&l) - a).norm_max(),
            tol.residual * (1.0 + norm),
        ))),
        Err(Error::Singular) => checks.push(json!({ "name": "exp(log A) = A", "skipped": "singular" })),
        Err(e) => checks.push(failed_entry("exp(log A) = A", &e)),
    }
    let passed = checks
        .iter()
        .filter(|c| c.get("advisory").is_none())
        .all(|c| c.get("passed").is_none_or(|p| p == &json!(true)));
    (json!({ "checks": checks, "passed": passed }), passed)
}

fn run(cli: &Cli) -> Result<(Value, u8), Error> {
    let tol = Tolerances { rank: cli.tol_rank, eig: cli.tol_eig, residual: cli.tol_residual, ..Tolerances::default() };
    let style = if cli.pretty { Style::Pretty } else { Style::Machine };
    let out = match &cli.command {
        Command::Adjoint(i) => io::cmatrix_to_json(read_input(i)?.complex_adjoint().matrix()),
        Command::Charpoly(i) => io::charpoly_to_json(&char_poly(&read_input(i)?, &tol)?),
        Command::Spectrum(i) => io::spectrum_to_json(&spectrum(&read_input(i)?, &tol)?),
        Command::Jordan(i) => io::jordan_to_json(&jordan_form(&read_input(i)?, &tol)?, style),
        Command::Jcd(i) => io::additive_to_json(&additive_jcd(&read_input(i)?, &tol)?, style),
        Command::Mjcd(i) => io::multiplicative_to_json(&multiplicative_jcd(&read_input(i)?, &tol)?, style),
        Command::Exp(i) => io::matrix_to_json(&hexp(&read_input(i)?), style),
        Command::Log(i) => io::matrix_to_json(&hlog(&read_input(i)?, &tol)?, style),
        Command::Expjcd(i) => io::exp_jcd_to_json(&exp_jcd_relation(&read_input(i)?, &tol)?, style),
        Command::Check(i) => {
            let (report, passed) = check(&read_input(i)?, &tol);
            return Ok((report, if passed { 0 } else { 3 }));
        }
        Command::Gen(g) => {
            let spec = match (&g.spec, g.n) {
                (Some(s), _) => read_spec(s)?,
                (None, Some(n)) => random_spec(n, &default_grid(), &mut ChaCha8Rng::seed_from_u64(g.seed))?,
                (None, None) => return Err(Error::Parse("gen needs --spec or --n".into())),
            };
            if spec.dim() > 16 {
                return Err(Error::Dimension(format!("spec dimension {} exceeds 16", spec.dim())));
            }
            io::generated_to_json(&generate(&spec, g.seed, g.cond)?, style)
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, code)) => {
            println!("{value}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            println!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(exit_code(&e))
        }
    }
}
