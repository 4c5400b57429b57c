//! `qconv`: synthesize and verify encoders for quantum convolutional codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qconv::io::{format_circuit, parse_program, parse_stabilizer};
use qconv::poly::DEFAULT_MAX_SPAN;
use qconv::stabilizer::{StabilizerError, StabilizerMatrix};
use qconv::synthesis::{synthesize_with_limit, SynthesisError, SynthesisResult};
use qconv::verify::{
    check_encoder, propagation_report, subcode_rows, Verdict, VerifyError, WindowProgram,
};

const EXIT_INTERNAL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_NON_CLEARABLE: u8 = 4;
const EXIT_VERIFY: u8 = 5;

const FAIL_LINES: usize = 5;

#[derive(Parser)]
#[command(
    name = "qconv",
    version,
    about = "Encoder synthesis for quantum convolutional codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a stabilizer file into an encoding circuit.
    Synth(SynthArgs),
    /// Check a circuit against a code on finite windows.
    Verify(VerifyArgs),
    /// Print code parameters and validity.
    Info(InfoArgs),
}

#[derive(Args)]
struct SynthArgs {
    input: PathBuf,
    /// Write the circuit here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the matrix after each reduction step.
    #[arg(long)]
    checkpoints: bool,
    /// Largest exponent magnitude allowed during reduction.
    #[arg(long, default_value_t = DEFAULT_MAX_SPAN)]
    max_span: u64,
}

#[derive(Args)]
struct VerifyArgs {
    code: PathBuf,
    circuit: PathBuf,
    /// Window sizes in blocks.
    #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 20])]
    windows: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_SPAN)]
    max_span: u64,
}

#[derive(Args)]
struct InfoArgs {
    input: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Synth(a) => synth(a),
        Command::Verify(a) => verify(a),
        Command::Info(a) => info(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprint!("{}", f.message);
            if !f.message.ends_with('\n') {
                eprintln!();
            }
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> Result<StabilizerMatrix, Failure> {
    parse_stabilizer(&read(path)?)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<WindowProgram, Failure> {
    parse_program(&read(path)?)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn witness_lines(s: &StabilizerMatrix) -> String {
    let mut out = String::new();
    for w in s.check_symplectic().witnesses() {
        let _ = writeln!(out, "witness ({},{}) = {}", w.row + 1, w.col + 1, w.value);
    }
    out
}

fn run_synthesis(s: &StabilizerMatrix, max_span: u64) -> Result<SynthesisResult, Failure> {
    synthesize_with_limit(s, max_span).map_err(|e| {
        let code = match &e {
            SynthesisError::Precondition(_) => EXIT_PRECONDITION,
            SynthesisError::NonClearable { .. } => EXIT_NON_CLEARABLE,
            SynthesisError::LoopLimit(_) | SynthesisError::Smith(_) => EXIT_INTERNAL,
        };
        let mut message = format!("{e}\n");
        if let SynthesisError::Precondition(StabilizerError::NotSymplectic(_)) = e {
            message.push_str(&witness_lines(s));
        }
        Failure::new(code, message)
    })
}

fn synth(a: &SynthArgs) -> Outcome {
    let s = load_code(&a.input)?;
    let res = run_synthesis(&s, a.max_span)?;
    let mut out = String::new();
    if a.checkpoints {
        for c in &res.checkpoints {
            let _ = writeln!(out, "{c}");
        }
    }
    let circuit = format_circuit(&res.encoder);
    match &a.out {
        Some(path) => fs::write(path, &circuit)
            .map_err(|e| Failure::new(EXIT_INTERNAL, format!("{}: {e}", path.display())))?,
        None => out.push_str(&circuit),
    }
    out.push_str(&res.report());
    Ok(out)
}

fn verify(a: &VerifyArgs) -> Outcome {
    let s = load_code(&a.code)?;
    let prog = load_program(&a.circuit)?;
    if prog.n != s.n() {
        let e = VerifyError::Dimension {
            code: s.n(),
            circuit: prog.n,
        };
        return Err(Failure::new(EXIT_PRECONDITION, e.to_string()));
    }
    let memory = s.memory();
    if let Some(&w) = a.windows.iter().find(|&&w| w < memory + 1) {
        return Err(Failure::new(
            EXIT_PRECONDITION,
            format!(
                "window of {w} blocks is shorter than code memory + 1 = {}",
                memory + 1
            ),
        ));
    }
    // the subcode and its divisor scaling come from the code itself
    let res = run_synthesis(&s, a.max_span)?;
    let s0 = subcode_rows(&res);

    let prop = propagation_report(&prog, &a.windows)
        .map_err(|e| Failure::new(EXIT_PRECONDITION, e.to_string()))?;
    let mut out = prop.table();
    out.push_str(&prop.records());
    let mut ok = prop.verdict == Verdict::Bounded;
    let mut conclusive = 0;
    let mut failed = false;
    for &w in &a.windows {
        match check_encoder(&s, &s0, &prog, w) {
            Ok(rep) => {
                out.push_str(&rep.records());
                if rep.failures() > 0 {
                    failed = true;
                    let listing = rep.listing();
                    let fails: Vec<&str> =
                        listing.lines().filter(|l| l.ends_with("FAIL")).collect();
                    for line in fails.iter().take(FAIL_LINES) {
                        let _ = writeln!(out, "  {line}");
                    }
                    if fails.len() > FAIL_LINES {
                        let _ = writeln!(out, "  ... {} more", fails.len() - FAIL_LINES);
                    }
                } else if rep.passed(s0.r(), s.r()) {
                    conclusive += 1;
                } else {
                    let _ = writeln!(
                        out,
                        "encoder N={w} inconclusive: some generator never cleared the window edge"
                    );
                }
            }
            Err(VerifyError::WindowTooSmall { blocks, needed }) => {
                let _ = writeln!(
                    out,
                    "encoder N={blocks} skipped: needs at least {needed} blocks"
                );
            }
            Err(e) => return Err(Failure::new(EXIT_PRECONDITION, e.to_string())),
        }
    }
    if !failed && conclusive == 0 {
        out.push_str("encoder: no window covered every generator\n");
    }
    ok &= !failed && conclusive > 0;
    let _ = writeln!(out, "result={}", if ok { "pass" } else { "fail" });
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::new(EXIT_VERIFY, "verification failed"))
    }
}

fn info(a: &InfoArgs) -> Outcome {
    let s = load_code(&a.input)?;
    let check = s.check_symplectic();
    let mut out = format!(
        "{} symplectic={}\n",
        s.params(),
        if check.is_ok() { "ok" } else { "violated" }
    );
    out.push_str(&witness_lines(&s));
    if let Some(self_dual) = s.systematic_self_dual() {
        let _ = writeln!(
            out,
            "systematic self-dual={}",
            if self_dual { "yes" } else { "no" }
        );
    }
    match s.validate() {
        Ok(()) => out.push_str("valid\n"),
        Err(StabilizerError::ZeroRate { r, n }) => {
            let _ = writeln!(out, "rejected: r < n violated (r={r}, n={n})");
        }
        Err(e) => {
            let _ = writeln!(out, "rejected: {e}");
        }
    }
    Ok(out)
}
