//! `reshape` command line: profile a column, synthesize a program for a
//! target pattern, apply a saved program, or serve the HTTP API.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use reshape_core::profile::{build_hierarchy, ClusterTree, ProfileConfig};
use reshape_core::program::RowStatus;
use reshape_core::{synthesize, Pattern, Program, SynthConfig};
use reshape_service::export::{program_json, transform_rows, transformed_csv};
use reshape_service::ingest::{self, Column, Format};
use reshape_service::session::HierarchyView;
use reshape_service::ServiceConfig;
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_UNMATCHED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "reshape", version, about = "Profile string columns and synthesize transformations into a target pattern")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the pattern hierarchy of a column.
    Profile {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: bool,
    },
    /// Synthesize a program that rewrites the column into the target pattern.
    Synth {
        #[command(flatten)]
        input: InputArgs,
        /// Target pattern, e.g. "<D>3'-'<D>3'-'<D>4".
        #[arg(long)]
        target: String,
        /// Alternates kept per branch.
        #[arg(short, default_value_t = 5)]
        k: usize,
        #[arg(long)]
        json: bool,
        /// Also write the program JSON here, for `apply`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a saved program over a column.
    Apply {
        #[command(flatten)]
        input: InputArgs,
        /// Program JSON written by `synth --out` or the service export.
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        json: bool,
        /// Exit with status 3 if any row is left unmatched.
        #[arg(long)]
        strict: bool,
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        /// Persist sessions here and reload them on start.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input file, one value per line, or CSV when --column is given. `-` reads standard input.
    #[arg(long)]
    pub input: PathBuf,
    /// CSV column to read.
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) => m,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

/// Parse `argv` (program name first) and run. Returns the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "reshape: {}", f.message());
            f.code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Profile { input, json } => profile(&input, json, out),
        Command::Synth {
            input,
            target,
            k,
            json,
            out: path,
        } => synth(&input, &target, k, json, path.as_deref(), out),
        Command::Apply {
            input,
            program,
            json,
            strict,
            out: path,
        } => apply(&input, &program, json, strict, path.as_deref(), out),
        Command::Serve { listen, data_dir } => serve(listen, data_dir),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(data)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
    }
}

/// Lines by default; the named CSV column when `--column` is given.
pub fn read_column(input: &InputArgs) -> Result<Column, String> {
    read_column_inner(input).map_err(|f| f.message().to_string())
}

fn read_column_inner(input: &InputArgs) -> Result<Column, Failure> {
    let text = read_text(&input.input)?;
    let format = if input.column.is_some() { Format::Csv } else { Format::Lines };
    ingest::parse(&text, format, input.column.as_deref(), ServiceConfig::default().row_cap).map_err(data)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(data)
}

fn write_tree(buf: &mut String, node: &ClusterTree, depth: usize) {
    let _ = writeln!(
        buf,
        "{:indent$}[{}] {}  ({} rows)  e.g. {}",
        "",
        node.id,
        node.pattern,
        node.count,
        node.sample.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(", "),
        indent = depth * 2
    );
    for child in &node.children {
        write_tree(buf, child, depth + 1);
    }
}

fn profile(input: &InputArgs, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let column = read_column_inner(input)?;
    let h = build_hierarchy(&column.rows, &ProfileConfig::default());
    let view = HierarchyView {
        id: column.name.clone(),
        row_count: h.row_count,
        empty_rows: h.empty_rows.len(),
        layers: h.layers.len(),
        roots: h.to_tree(&column.rows),
    };
    let text = if json {
        format!("{}\n", serde_json::to_string_pretty(&view).map_err(data)?)
    } else {
        let mut buf = format!("{} rows, {} empty\n", view.row_count, view.empty_rows);
        for root in &view.roots {
            write_tree(&mut buf, root, 0);
        }
        buf
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn synth(
    input: &InputArgs,
    target: &str,
    k: usize,
    json: bool,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let target = Pattern::parse(target).map_err(|e| Failure::Usage(format!("--target: {e}")))?;
    let column = read_column_inner(input)?;
    let h = build_hierarchy(&column.rows, &ProfileConfig::default());
    let config = SynthConfig {
        k,
        ..SynthConfig::default()
    };
    let result = synthesize(&h, &target, &config);
    if let Some(path) = path {
        fs::write(path, program_json(&result.program)).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    }
    let summary = result.summary(&column.name);
    let text = if json {
        let value = json!({ "synthesis": summary, "program": result.program });
        format!("{}\n", serde_json::to_string_pretty(&value).map_err(data)?)
    } else {
        let mut buf = String::new();
        for line in &summary.script {
            let _ = writeln!(buf, "{line}");
        }
        for (i, branch) in summary.branches.iter().enumerate() {
            let _ = writeln!(buf, "\nbranch {i}: {}", branch.source);
            let best = branch.alternates.first().map(|a| a.dl).unwrap_or(0.0);
            for (j, alt) in branch.alternates.iter().enumerate() {
                let mark = if j == branch.default_index { '*' } else { ' ' };
                let _ = writeln!(buf, "  {mark} {j}  +{:.2}  {}", alt.dl - best, alt.plan);
            }
            if branch.overflow {
                let _ = writeln!(buf, "    (enumeration capped)");
            }
        }
        if !summary.unmatched.is_empty() {
            let _ = writeln!(buf, "\nunmatched:");
            for p in &summary.unmatched {
                let _ = writeln!(buf, "  {p}");
            }
        }
        buf
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn apply(
    input: &InputArgs,
    program: &Path,
    json: bool,
    strict: bool,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let text = read_text(program)?;
    let program: Program =
        serde_json::from_str(&text).map_err(|e| Failure::Data(format!("{}: {e}", program.display())))?;
    program.check().map_err(data)?;
    let column = read_column_inner(input)?;
    let results = transform_rows(&column.rows, &program);
    let unmatched = results.iter().filter(|(_, s)| *s == RowStatus::Unmatched).count();
    let body = if json {
        let rows: Vec<_> = results
            .iter()
            .map(|(value, status)| json!({ "value": value, "status": status }))
            .collect();
        format!("{}\n", serde_json::to_string_pretty(&rows).map_err(data)?)
    } else {
        transformed_csv(&column.rows, &program, &column.name)
    };
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Data(format!("{}: {e}", p.display())))?,
        None => emit(out, &body)?,
    }
    Ok(if strict && unmatched > 0 { EXIT_UNMATCHED } else { EXIT_OK })
}

fn serve(listen: SocketAddr, data_dir: Option<PathBuf>) -> Result<i32, Failure> {
    let config = ServiceConfig {
        data_dir,
        ..ServiceConfig::default()
    };
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(data)?;
    runtime.block_on(reshape_service::serve(listen, config)).map_err(data)?;
    Ok(EXIT_OK)
}
