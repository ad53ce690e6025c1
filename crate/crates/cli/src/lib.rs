//! The `qsylv` command line: solve quaternion Sylvester equations and
//! two-sided interpolation problems stored in text files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qsylv_core::format::{parse_chain, parse_matrix, parse_nodes, parse_poly, render_matrix, render_poly};
use qsylv_core::interp::InterpProblem;
use qsylv_core::matrix::uniqueness_check;
use qsylv_core::regular::{self, Method};
use qsylv_core::singular::null_basis;
use qsylv_core::{Error, DEFAULT_TOL};

/// Exit code for a completed command.
pub const EXIT_OK: i32 = 0;
/// Exit code when the problem has no solution.
pub const EXIT_NO_SOLUTION: i32 = 1;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qsylv", version, about = "Quaternion Sylvester equations AX - XB = C")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report whether AX - XB = C has a unique solution for every C.
    Check {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Solve AX - XB = C.
    Solve {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Write X here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Write a real basis of the solutions of J_alpha Y = Y J_beta^T.
    Nullbasis {
        alpha: PathBuf,
        beta: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Find f with f - g in p·H[z] and f - g~ in H[z]·q.
    Interp {
        alpha: PathBuf,
        beta: PathBuf,
        g: PathBuf,
        g_tilde: PathBuf,
        /// Write the coefficients of f here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Lift,
    Poly,
    Jordan,
    Tridiag,
    Rows,
    Cols,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Lift => Method::Lift,
            MethodArg::Poly => Method::PolyFormula,
            MethodArg::Jordan => Method::Jordan,
            MethodArg::Tridiag => Method::TwoDiagonal,
            MethodArg::Rows => Method::Rows,
            MethodArg::Cols => Method::Cols,
        }
    }
}

/// A failed command, with the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    NoSolution(Vec<f64>),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::NoSolution { obstructions } => Failure::NoSolution(obstructions),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: qsylv_core::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| match e {
        Error::Parse { .. } | Error::InvalidChain { .. } | Error::DegenerateChain { .. } => {
            Failure::Input(format!("{}: {e}", path.display()))
        }
        other => other.into(),
    })
}

/// Parses `args` and runs the command, writing results to `out` and
/// diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::NoSolution(obstructions)) => {
            let _ = writeln!(out, "no solution");
            for (j, s) in obstructions.iter().enumerate() {
                let _ = writeln!(out, "|S_{}| = {s:.3e}", j + 1);
            }
            EXIT_NO_SOLUTION
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn check_tol(tol: f64) -> CmdResult {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::Input(format!("--tol must be positive, got {tol}")))
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Check { a, b, tol } => {
            check_tol(tol)?;
            let am = in_file(&a, parse_matrix(&read(&a)?))?;
            let bm = in_file(&b, parse_matrix(&read(&b)?))?;
            if !am.is_square() || !bm.is_square() {
                return Err(Failure::Input("A and B must be square".into()));
            }
            writeln!(out, "{}", if uniqueness_check(&am, &bm, tol)? { "unique" } else { "singular" })?;
            writeln!(out, "tol: {tol:e}")?;
        }
        Command::Solve { a, b, c, method, output, tol } => {
            check_tol(tol)?;
            let am = in_file(&a, parse_matrix(&read(&a)?))?;
            let bm = in_file(&b, parse_matrix(&read(&b)?))?;
            let cm = in_file(&c, parse_matrix(&read(&c)?))?;
            let report = regular::solve(&am, &bm, &cm, method.into(), tol)?;
            writeln!(out, "method: {}", report.method)?;
            writeln!(out, "residual: {:.3e}", report.residual)?;
            writeln!(out, "tol: {tol:e}")?;
            match output {
                Some(path) => fs::write(path, render_matrix(&report.x))?,
                None => write!(out, "{}", render_matrix(&report.x))?,
            }
        }
        Command::Nullbasis { alpha, beta, output, tol } => {
            check_tol(tol)?;
            let a = in_file(&alpha, parse_chain(&read(&alpha)?, tol))?;
            let b = in_file(&beta, parse_chain(&read(&beta)?, tol))?;
            let basis = null_basis(&a, &b, tol)?;
            fs::create_dir_all(&output)?;
            let mut manifest = String::from("# file j plane_index\n");
            for (i, e) in basis.iter().enumerate() {
                let name = format!("basis_{:02}.qm", i + 1);
                fs::write(output.join(&name), render_matrix(&e.y))?;
                manifest.push_str(&format!("{name} {} {}\n", e.j, e.plane_index));
            }
            fs::write(output.join("manifest.txt"), manifest)?;
            writeln!(out, "basis elements: {}", basis.len())?;
            writeln!(out, "directory: {}", output.display())?;
            writeln!(out, "tol: {tol:e}")?;
        }
        Command::Interp { alpha, beta, g, g_tilde, output, tol } => {
            check_tol(tol)?;
            let a = in_file(&alpha, parse_nodes(&read(&alpha)?))?;
            let b = in_file(&beta, parse_nodes(&read(&beta)?))?;
            let gp = in_file(&g, parse_poly(&read(&g)?))?;
            let gt = in_file(&g_tilde, parse_poly(&read(&g_tilde)?))?;
            let problem = InterpProblem::new(a, b, gp, gt, tol)?;
            let res = problem.interpolate()?;
            writeln!(out, "method: {}", res.method)?;
            writeln!(out, "degree: {}", res.f.degree().map_or("-inf".to_string(), |d| d.to_string()))?;
            writeln!(out, "p-membership residual: {:.3e}", res.p_residual)?;
            writeln!(out, "q-membership residual: {:.3e}", res.q_residual)?;
            writeln!(out, "forms gap: {:.3e}", res.forms_gap)?;
            writeln!(out, "free real parameters: {}", problem.homogeneous_interpolants()?.len())?;
            writeln!(out, "tol: {tol:e}")?;
            match output {
                Some(path) => fs::write(path, render_poly(&res.f))?,
                None => write!(out, "{}", render_poly(&res.f))?,
            }
        }
    }
    Ok(())
}
