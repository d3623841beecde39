use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hptk::commands::{self, DeformOptions, Mode, Output, SplittingChoice, Status, TransferOptions, DEFAULT_MAX_SLOTS};
use hptk::corpus;
use hptk::perturbation::InitiatorKind;

/// Exact homotopy transfer for finite-dimensional graded algebras.
///
/// FILE is an algebra document; if no such file exists and FILE names a built-in model
/// (T2, D2, H3CE, H3GBV, MAT2), the built-in model is used.
///
/// Exit codes: 0 success, 1 structure invalid, 2 verification failure, 3 parse or usage error.
#[derive(Parser)]
#[command(name = "hptk", version)]
struct Cli {
    /// Refuse jobs needing more coefficient slots than this
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_SLOTS)]
    max_slots: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every law of the declared structure
    Validate {
        file: String,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Betti numbers, harmonic representatives and the induced product
    Cohomology {
        file: String,
        #[arg(long, value_enum, default_value_t = SplittingArg::Auto)]
        splitting: SplittingArg,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Transfer to cohomology: ω, ∂ and the m_n or l_n tables
    Transfer {
        file: String,
        #[arg(long, default_value_t = 4)]
        arity: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Ainfty)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = SplittingArg::Auto)]
        splitting: SplittingArg,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Two-stage deformation through the perturbation lemma
    Deform {
        file: String,
        /// Tensor word length (arity of the deformed operations)
        #[arg(long, default_value_t = 4)]
        word_bound: usize,
        /// Word length in the coefficient ring
        #[arg(long, default_value_t = 2)]
        sym_bound: usize,
        #[arg(long, value_enum, default_value_t = InitiatorArg::AL)]
        initiator: InitiatorArg,
        #[arg(long, value_enum, default_value_t = SplittingArg::Auto)]
        splitting: SplittingArg,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// m3(x, y, z) on cohomology classes named by their labels
    Massey {
        file: String,
        x: String,
        y: String,
        z: String,
        #[arg(long, value_enum, default_value_t = SplittingArg::Auto)]
        splitting: SplittingArg,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// List the built-in models, or print one
    Corpus { name: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum SplittingArg {
    Auto,
    Hodge,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ainfty,
    Linfty,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitiatorArg {
    /// ∂^L + ad ω^L over the symmetric coalgebra
    #[value(name = "aL")]
    AL,
    /// ∂^L alone
    #[value(name = "L")]
    L,
    /// ∂^a over the tensor coalgebra (no bracket needed)
    #[value(name = "a")]
    A,
}

impl From<SplittingArg> for SplittingChoice {
    fn from(s: SplittingArg) -> Self {
        match s {
            SplittingArg::Auto => SplittingChoice::Auto,
            SplittingArg::Hodge => SplittingChoice::Hodge,
        }
    }
}

fn read_input(file: &str) -> Result<String, String> {
    let path = Path::new(file);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| format!("cannot read {file}: {e}"));
    }
    corpus::source(file)
        .map(str::to_owned)
        .ok_or_else(|| format!("no file {file:?} and no built-in model of that name"))
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("HPTK_THREADS") else { return Ok(()) };
    let n: usize =
        value.trim().parse().map_err(|_| format!("HPTK_THREADS must be a positive integer, got {value:?}"))?;
    if n == 0 {
        return Err("HPTK_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn finish(out: Output, certificate: Option<&Path>) -> ExitCode {
    let text = out.text.trim_end();
    if out.certificate.is_none() && out.status != Status::Success {
        eprintln!("error: {text}");
    } else {
        println!("{text}");
    }
    if let (Some(path), Some(cert)) = (certificate, &out.certificate) {
        if let Err(e) = std::fs::write(path, cert.render()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(Status::Usage.code() as u8);
        }
    }
    ExitCode::from(out.status.code() as u8)
}

fn usage(message: String) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(Status::Usage.code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage.code() as u8 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        return usage(e);
    }
    let max_slots = cli.max_slots;
    let (file, certificate) = match &cli.command {
        Command::Validate { file, certificate }
        | Command::Cohomology { file, certificate, .. }
        | Command::Transfer { file, certificate, .. }
        | Command::Deform { file, certificate, .. }
        | Command::Massey { file, certificate, .. } => (file.clone(), certificate.clone()),
        Command::Corpus { name: None } => {
            for (name, _) in corpus::ALL {
                println!("{name}");
            }
            return ExitCode::SUCCESS;
        }
        Command::Corpus { name: Some(name) } => {
            return match corpus::source(name) {
                Some(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                None => usage(format!("no built-in model named {name:?}")),
            };
        }
    };
    let text = match read_input(&file) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    let out = match cli.command {
        Command::Validate { .. } => commands::validate(&text),
        Command::Cohomology { splitting, .. } => commands::cohomology_command(&text, splitting.into()),
        Command::Transfer { arity, mode, splitting, .. } => commands::transfer(
            &text,
            TransferOptions {
                arity,
                mode: match mode {
                    ModeArg::Ainfty => Mode::AInfty,
                    ModeArg::Linfty => Mode::LInfty,
                },
                splitting: splitting.into(),
                max_slots,
            },
        ),
        Command::Deform { word_bound, sym_bound, initiator, splitting, .. } => commands::deform(
            &text,
            DeformOptions {
                word_bound,
                sym_bound,
                initiator: match initiator {
                    InitiatorArg::AL => InitiatorKind::LieAdjoint,
                    InitiatorArg::L => InitiatorKind::Lie,
                    InitiatorArg::A => InitiatorKind::Associative,
                },
                splitting: splitting.into(),
                max_slots,
            },
        ),
        Command::Massey { x, y, z, splitting, .. } => {
            commands::massey(&text, [x.as_str(), y.as_str(), z.as_str()], splitting.into())
        }
        Command::Corpus { .. } => unreachable!(),
    };
    finish(out, certificate.as_deref())
}
