//! The `bhs` command-line tool.
//!
//! Row, column and cell indices on the command line and in reports are
//! 1-based. Exit codes: 0 success, 1 verification failure, 2 plan error,
//! 3 I/O or parse error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::butson::{fourier, ButsonMatrix, Strategy};
use crate::error::{Error, Result};
use crate::format::{
    matrix_digest, parse_latin_set, read_matrix_file, sha256_hex, write_latin_set, write_matrix,
    MatrixDocument, MatrixFormat, Provenance,
};
use crate::latin::{classical_lsesc_set, encode, is_pairwise_lsesc, is_pairwise_mols, LatinTensor};
use crate::scarpis::{
    complete_lsesc_tensors, count_phi_outputs, count_psi_outputs, phi, psi_detailed, PhiPlan,
    PsiPlan,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_PLAN: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "bhs",
    version,
    about = "Butson Hadamard matrices: generate, verify, construct"
)]
pub struct Cli {
    /// Verify on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the Fourier matrix F_n.
    Fourier {
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check orthogonality of a matrix file.
    Verify {
        path: PathBuf,
        /// Also report C1 row pairs, C2 cells and d_H.
        #[arg(long)]
        analyze: bool,
    },
    /// Build a larger matrix from one or two inputs.
    Construct(ConstructArgs),
    /// Evaluate the output-count formulas.
    Count {
        #[command(subcommand)]
        kind: CountKind,
    },
    /// Latin square sets.
    Lsesc {
        #[command(subcommand)]
        action: LsescAction,
    },
    /// Re-encode a matrix file.
    Convert {
        input: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long)]
        dephase: bool,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output path; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Defaults to json for `.json` paths, text otherwise.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Kind {
    Phi,
    Psi,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    kind: Kind,
    /// Single input, or the x-source when a second input follows.
    first: PathBuf,
    /// Matrix supplying the core (phi) or the T block (psi).
    second: Option<PathBuf>,
    /// phi: row of the x-source to delete.
    #[arg(long, value_name = "ROW")]
    delete_row: Option<usize>,
    /// psi: C1 row pair on the x-source, e.g. `1,4`.
    #[arg(long, value_name = "T,S")]
    c1_pair: Option<String>,
    /// psi: C2 cell, e.g. `4,4`.
    #[arg(long, value_name = "I,J")]
    c2_cell: Option<String>,
    /// `classical` or a Latin square set file.
    #[arg(long, default_value = "classical")]
    lsesc: String,
    /// Column permutation applied to the x-source first, e.g. `2,1,3,4`.
    #[arg(long, value_name = "PERM")]
    pre_permute_cols: Option<String>,
    /// Dephase the result.
    #[arg(long)]
    dephase: bool,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Subcommand, Debug)]
enum CountKind {
    Phi {
        #[arg(long)]
        mols: u64,
        #[arg(long)]
        card: u64,
        #[arg(long)]
        n: u64,
    },
    Psi {
        #[arg(long)]
        mols: u64,
        #[arg(long)]
        card2: u64,
        /// One value per admissible matrix, comma separated or repeated.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        dh: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum LsescAction {
    /// The classical complete set of prime-power order q.
    Classical {
        q: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report whether a set is pairwise LSESC and pairwise MOLS.
    Check { path: PathBuf },
    /// Swap row index and symbol in every square.
    Conjugate {
        path: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::Parse(_) | Error::MalformedLatin(_) => EXIT_IO,
        Error::ExponentOutOfRange { .. } | Error::LengthMismatch { .. } | Error::Shape(_) => {
            EXIT_IO
        }
        Error::NotButson(_) | Error::OutputNotButson => EXIT_VERIFY,
        _ => EXIT_PLAN,
    }
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { EXIT_OK } else { EXIT_IO };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let strategy = if cli.sequential {
        Strategy::Sequential
    } else {
        Strategy::Parallel
    };
    match &cli.command {
        Command::Fourier { n, out: dest } => {
            if *n == 0 {
                return Err(Error::Plan("n must be at least 1".into()));
            }
            let doc = MatrixDocument::from_matrix(&fourier(*n), None);
            emit_matrix(&doc, dest, out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { path, analyze } => cmd_verify(path, *analyze, strategy, out),
        Command::Construct(args) => cmd_construct(args, out),
        Command::Count { kind } => {
            let value = match kind {
                CountKind::Phi { mols, card, n } => count_phi_outputs(*mols, *card, *n),
                CountKind::Psi { mols, card2, dh } => count_psi_outputs(*mols, *card2, dh),
            };
            writeln!(out, "{value}")?;
            Ok(EXIT_OK)
        }
        Command::Lsesc { action } => cmd_lsesc(action, out),
        Command::Convert {
            input,
            out: dest,
            dephase,
        } => {
            let mut doc = read_matrix_file(input)?;
            if *dephase {
                doc = MatrixDocument::from_matrix(&doc.to_matrix()?.dephase(), doc.provenance);
            }
            emit_matrix(&doc, dest, out)?;
            Ok(EXIT_OK)
        }
    }
}

fn write_target(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_matrix(doc: &MatrixDocument, dest: &OutputArgs, out: &mut dyn Write) -> Result<()> {
    let format = match (dest.format, &dest.output) {
        (Some(FormatArg::Json), _) => MatrixFormat::Json,
        (Some(FormatArg::Text), _) => MatrixFormat::Text,
        (None, Some(p)) => MatrixFormat::from_path(p),
        (None, None) => MatrixFormat::Text,
    };
    write_target(dest.output.as_deref(), &write_matrix(doc, format)?, out)
}

fn fmt_pairs(pairs: &[(usize, usize)]) -> String {
    if pairs.is_empty() {
        return "none".into();
    }
    pairs
        .iter()
        .map(|(a, b)| format!("({},{})", a + 1, b + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_verify(path: &Path, analyze: bool, strategy: Strategy, out: &mut dyn Write) -> Result<i32> {
    let b = read_matrix_file(path)?.to_matrix()?;
    let report = b.verify_with(strategy);
    writeln!(
        out,
        "BH({}, {}): {}",
        b.m(),
        b.order(),
        if report.ok { "ok" } else { "FAILED" }
    )?;
    if let Some((i, j)) = report.row_failure {
        writeln!(out, "first failing row pair: ({},{})", i + 1, j + 1)?;
    }
    if let Some((i, j)) = report.column_failure {
        writeln!(out, "first failing column pair: ({},{})", i + 1, j + 1)?;
    }
    if analyze {
        match b.find_c1_pairs() {
            Ok(pairs) => {
                writeln!(out, "C1 pairs: {}", fmt_pairs(&pairs))?;
                writeln!(out, "d_H: {}", pairs.len())?;
            }
            Err(e) => writeln!(out, "C1 pairs: n/a ({e})")?,
        }
        match b.find_c2_cells() {
            Ok(cells) => writeln!(out, "C2 cells: {}", fmt_pairs(&cells))?,
            Err(e) => writeln!(out, "C2 cells: n/a ({e})")?,
        }
    }
    Ok(if report.ok { EXIT_OK } else { EXIT_VERIFY })
}

fn parse_index_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Error::Parse(format!(
                "invalid {what}: {s:?} (1-based indices expected)"
            ))),
        })
        .collect()
}

fn parse_pair(s: &str, what: &str) -> Result<(usize, usize)> {
    match parse_index_list(s, what)?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(Error::Parse(format!(
            "{what} needs exactly two indices: {s:?}"
        ))),
    }
}

fn load_tensors(
    spec: &str,
    order: usize,
    params: &mut BTreeMap<String, String>,
) -> Result<Vec<LatinTensor>> {
    if spec == "classical" {
        params.insert("lsesc".into(), "classical".into());
        return complete_lsesc_tensors(order);
    }
    let text = std::fs::read_to_string(spec)?;
    let squares = parse_latin_set(&text)?;
    params.insert(
        "lsesc".into(),
        format!("file sha256:{}", sha256_hex(text.as_bytes())),
    );
    Ok(squares.iter().map(encode).collect())
}

fn cmd_construct(args: &ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let first = read_matrix_file(&args.first)?.to_matrix()?;
    let second = args
        .second
        .as_ref()
        .map(|p| read_matrix_file(p))
        .transpose()?
        .map(|d| d.to_matrix())
        .transpose()?;
    let mut inputs = vec![matrix_digest(&first)];
    inputs.extend(second.as_ref().map(matrix_digest));

    let mut params = BTreeMap::new();
    let mut x_source: Option<ButsonMatrix> = None;
    if let Some(perm) = &args.pre_permute_cols {
        let perm = parse_index_list(perm, "column permutation")?;
        x_source = Some(first.permute_columns(&perm)?);
        params.insert(
            "pre_permute_cols".into(),
            args.pre_permute_cols.clone().unwrap_or_default(),
        );
    }
    // With two inputs the first is the x-source and the second the core or T source.
    let (h, g) = match second {
        Some(h) => (h, Some(x_source.unwrap_or(first))),
        None => (first, x_source),
    };
    let n = h.order();

    let (matrix, summary) = match args.kind {
        Kind::Phi => {
            if args.c1_pair.is_some() || args.c2_cell.is_some() {
                return Err(Error::Plan(
                    "--c1-pair and --c2-cell apply to psi only".into(),
                ));
            }
            let tensors = load_tensors(&args.lsesc, n.saturating_sub(1), &mut params)?;
            let deleted = match args.delete_row {
                Some(0) => return Err(Error::Parse("--delete-row is 1-based".into())),
                Some(r) => r - 1,
                None => 0,
            };
            params.insert("deleted_row".into(), (deleted + 1).to_string());
            let mut plan = PhiPlan::new(h, tensors).with_deleted_row(deleted);
            if let Some(g) = g {
                plan = plan.with_x_source(g);
            }
            (phi(&plan)?, format!("deleted row {}", deleted + 1))
        }
        Kind::Psi => {
            if args.delete_row.is_some() {
                return Err(Error::Plan("--delete-row applies to phi only".into()));
            }
            let tensors = load_tensors(&args.lsesc, (n / 2).saturating_sub(1), &mut params)?;
            let mut plan = PsiPlan::new(h, tensors);
            if let Some(g) = g {
                plan = plan.with_x_source(g);
            }
            if let Some(s) = &args.c1_pair {
                plan = plan.with_c1_pair(parse_pair(s, "--c1-pair")?);
            }
            if let Some(s) = &args.c2_cell {
                plan = plan.with_c2_cell(parse_pair(s, "--c2-cell")?);
            }
            let built = psi_detailed(&plan)?;
            let (t, s) = built.c1_pair;
            let (i, j) = built.c2_cell;
            params.insert("c1_pair".into(), format!("{},{}", t + 1, s + 1));
            params.insert("c2_cell".into(), format!("{},{}", i + 1, j + 1));
            (
                built.matrix,
                format!(
                    "C1 pair ({},{}), C2 cell ({},{})",
                    t + 1,
                    s + 1,
                    i + 1,
                    j + 1
                ),
            )
        }
    };
    let matrix = if args.dephase {
        matrix.dephase()
    } else {
        matrix
    };
    params.insert("dephase".into(), args.dephase.to_string());

    let construction = match args.kind {
        Kind::Phi => "phi",
        Kind::Psi => "psi",
    };
    writeln!(
        out,
        "{construction}: BH({}, {}) from BH({}, {}); {summary}; lsesc {}{}",
        matrix.m(),
        matrix.order(),
        matrix.m(),
        n,
        params["lsesc"],
        if args.dephase { "; dephased" } else { "" }
    )?;
    let provenance = Provenance {
        construction: construction.into(),
        inputs,
        parameters: params,
    };
    let doc = MatrixDocument::from_matrix(&matrix, Some(provenance));
    let dest = OutputArgs {
        output: Some(args.output.clone()),
        format: args.format,
    };
    emit_matrix(&doc, &dest, out)?;
    Ok(EXIT_OK)
}

fn cmd_lsesc(action: &LsescAction, out: &mut dyn Write) -> Result<i32> {
    match action {
        LsescAction::Classical { q, output } => {
            let set = classical_lsesc_set(*q)?;
            write_target(output.as_deref(), &write_latin_set(&set), out)?;
            Ok(EXIT_OK)
        }
        LsescAction::Check { path } => {
            let set = parse_latin_set(&std::fs::read_to_string(path)?)?;
            let lsesc = is_pairwise_lsesc(&set)?;
            let mols = is_pairwise_mols(&set)?;
            let yn = |b: bool| if b { "yes" } else { "no" };
            writeln!(out, "squares: {}", set.len())?;
            writeln!(out, "pairwise LSESC: {}", yn(lsesc))?;
            writeln!(out, "pairwise MOLS: {}", yn(mols))?;
            Ok(if lsesc || mols { EXIT_OK } else { EXIT_VERIFY })
        }
        LsescAction::Conjugate { path, output } => {
            let set = parse_latin_set(&std::fs::read_to_string(path)?)?;
            let conj: Vec<_> = set.iter().map(|l| l.conjugate()).collect();
            write_target(output.as_deref(), &write_latin_set(&conj), out)?;
            Ok(EXIT_OK)
        }
    }
}
