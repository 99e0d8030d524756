//! `ccsfa` command-line driver: Coulomb-shift scans, momentum distributions,
//! complex-trajectory runs and the oracle self-check.

mod check;
mod scan;
mod settings;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scan::Axis;
use settings::{RawSettings, Settings, SpecError, SpecResult};
use table::{emit, plot_script, Panel, Table};

const EXIT_SPEC: u8 = 1;
const EXIT_CHECK: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "ccsfa", version, about = "Coulomb momentum shift of tunnel-ionized electrons in a half-cycle pulse")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    params: Params,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Peak shift and probability versus f = E0/kappa^3 at fixed gamma.
    ScanField,
    /// Peak shift and probability versus gamma at fixed omega (or fixed E0).
    ScanGamma,
    /// Momentum distribution for one pulse.
    Pmd,
    /// Complex classical trajectory for one pulse, or versus f with --f-range.
    Hqa,
    /// Run the oracle suite; exits with status 2 on any failure.
    Check,
}

#[derive(Args, Debug, Default)]
struct Params {
    /// Bound-state momentum, kappa = sqrt(2 Ip) [default 1]
    #[arg(long, global = true)]
    kappa: Option<String>,
    /// Core charge [default 1]
    #[arg(long = "Z", global = true)]
    z: Option<String>,
    /// Peak field strength
    #[arg(long = "E0", global = true)]
    e0: Option<String>,
    /// Pulse frequency
    #[arg(long, global = true)]
    omega: Option<String>,
    /// Keldysh parameter
    #[arg(long, global = true)]
    gamma: Option<String>,
    /// Reduced field range a:b:n[:log]
    #[arg(long = "f-range", global = true, value_name = "A:B:N")]
    f_range: Option<String>,
    /// Keldysh parameter range a:b:n[:log]
    #[arg(long = "gamma-range", global = true, value_name = "A:B:N")]
    gamma_range: Option<String>,
    /// Momentum grid for pmd [default p0 +- 3 widths, 121 points]
    #[arg(long = "p-range", global = true, value_name = "A:B:N")]
    p_range: Option<String>,
    /// Comma-separated list from S0,S1,S2qc,S2qu,ARM,PPT,HQA [default S0,S1,S2qc,S2qu]
    #[arg(long, global = true)]
    variants: Option<String>,
    /// CSV output path; a gnuplot script is written next to it. Stdout when absent.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Params {
    fn settings(self) -> SpecResult<Settings> {
        let base = match &self.config {
            Some(path) => RawSettings::from_config(path)?,
            None => RawSettings::default(),
        };
        let flags = RawSettings {
            kappa: self.kappa,
            z: self.z,
            e0: self.e0,
            omega: self.omega,
            gamma: self.gamma,
            f_range: self.f_range,
            gamma_range: self.gamma_range,
            p_range: self.p_range,
            variants: self.variants,
            out: self.out,
        };
        base.overlay(flags).resolve()
    }
}

fn write(table: &Table, s: &Settings, xlabel: &str, xcol: &str, panels: Vec<Panel>, logx: bool) -> SpecResult<()> {
    let script = |csv: &std::path::Path| plot_script(csv, xlabel, xcol, &panels, logx);
    let gp = emit(table, s.out.as_deref(), script).map_err(|e| SpecError(format!("cannot write output: {e}")))?;
    if let (Some(csv), Some(gp)) = (&s.out, gp) {
        eprintln!("wrote {} and {}", csv.display(), gp.display());
    }
    let errors = table.column("error").map_or(0, |c| table.rows.iter().filter(|r| !r[c].is_empty()).count());
    if errors > 0 {
        eprintln!("{errors} of {} rows carry errors", table.rows.len());
    }
    Ok(())
}

fn run(command: Command, s: Settings) -> SpecResult<u8> {
    match command {
        Command::ScanField => {
            let t = scan::shift_scan(&s, Axis::Field)?;
            let logx = s.f_range.is_some_and(|r| r.spacing == settings::Spacing::Log);
            write(&t, &s, "f = E0/kappa^3", "f", scan::shift_panels(&t), logx)?;
        }
        Command::ScanGamma => {
            let t = scan::shift_scan(&s, Axis::Gamma)?;
            let logx = s.gamma_range.is_some_and(|r| r.spacing == settings::Spacing::Log);
            write(&t, &s, "gamma", "gamma", scan::shift_panels(&t), logx)?;
        }
        Command::Pmd => {
            let t = scan::pmd_scan(&s)?;
            write(&t, &s, "p (a.u.)", "p", scan::pmd_panels(&t), false)?;
        }
        Command::Hqa => {
            let t = scan::hqa_scan(&s)?;
            write(&t, &s, "f = E0/kappa^3", "f", scan::hqa_panels(), false)?;
        }
        Command::Check => {
            let pulse = if s.e0.is_none() && s.omega.is_none() {
                ccsfa::HalfCyclePulse::from_gamma_f(&s.atom, s.gamma_or(0.1)?, 0.02)?
            } else {
                s.pulse()?
            };
            let lines = check::run(&s.atom, &pulse);
            print!("{}", check::render(&lines));
            if lines.iter().any(|l| l.status == check::Status::Fail) {
                return Ok(EXIT_CHECK);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SPEC } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = cli.params.settings().and_then(|s| {
        for w in warnings(&s) {
            eprintln!("warning: {w}");
        }
        run(cli.command, s)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_SPEC)
        }
    }
}

fn warnings(s: &Settings) -> Vec<String> {
    match s.pulse() {
        Ok(p) => ccsfa::DerivedParams::new(&s.atom, &p).warnings(),
        Err(_) => Vec::new(),
    }
}
