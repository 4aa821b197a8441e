//! The `studio` command line.

use std::fs;
use std::io::{self, Write};
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use studio_core::catalog::{Category, SearchQuery};
use studio_core::codegen::GenerateError;
use studio_core::fui::{parse_fui, validate_fui, FuiDocument, ValidationReport};
use studio_core::generate;

use crate::api::{self, AppState, DEFAULT_PORT};
use crate::output::{write_output, OutputError};
use crate::pack::load_pack;
use crate::store::CatalogStore;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const IO: u8 = 3;
    pub const NON_EMPTY_OUTPUT: u8 = 4;
    pub const GENERATION: u8 = 5;
    pub const USAGE: u8 = 64;
}

#[derive(Debug, Parser)]
#[command(name = "studio", version, about = "Component catalog, FUI validation and template-pack code generation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a FUI document against a catalog.
    Validate {
        fui: PathBuf,
        /// Catalog store root.
        #[arg(long)]
        catalog: PathBuf,
    },
    /// Validate, generate and write a source tree.
    Generate {
        fui: PathBuf,
        /// Template pack directory.
        #[arg(long)]
        pack: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
        /// Output directory; must be empty or absent.
        #[arg(long)]
        out: PathBuf,
    },
    /// Search catalog head versions.
    Search {
        /// Substring of the component id or name.
        text: Option<String>,
        #[arg(long)]
        category: Option<Category>,
        #[arg(long)]
        tag: Option<String>,
        #[arg(long)]
        catalog: PathBuf,
    },
    /// List components placed at most `--threshold` times.
    Stats {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long, default_value_t = 0)]
        threshold: u64,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        catalog: PathBuf,
        /// Template pack directory; repeatable.
        #[arg(long)]
        pack: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Directory with a designer UI build to serve at `/`.
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, stage: &str, message: impl std::fmt::Display) -> Failure {
    Failure {
        code,
        message: format!("{stage}: {message}"),
    }
}

fn read_document(path: &Path) -> Result<FuiDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(exit::IO, "read", format_args!("{}: {e}", path.display())))?;
    parse_fui(&text).map_err(|e| fail(exit::PARSE, "parse", format_args!("{}: {e}", path.display())))
}

fn open_store(root: &Path) -> Result<CatalogStore, Failure> {
    CatalogStore::open(root).map_err(|e| fail(exit::IO, "catalog", e))
}

fn print_report(out: &mut dyn Write, report: &ValidationReport) -> io::Result<()> {
    for issue in &report.issues {
        writeln!(out, "{issue}")?;
    }
    writeln!(
        out,
        "{} error(s), {} warning(s)",
        report.error_count(),
        report.warnings().count()
    )
}

/// Runs `cli` and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "studio: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8, Failure> {
    let io_fail = |e: io::Error| fail(exit::IO, "output", e);
    match cli.command {
        Command::Validate { fui, catalog } => {
            let doc = read_document(&fui)?;
            let store = open_store(&catalog)?;
            let report = validate_fui(&doc, store.catalog());
            print_report(out, &report).map_err(io_fail)?;
            Ok(if report.is_valid() { exit::OK } else { exit::INVALID })
        }
        Command::Generate {
            fui,
            pack,
            catalog,
            out: out_dir,
        } => {
            let doc = read_document(&fui)?;
            let store = open_store(&catalog)?;
            let pack = load_pack(&pack).map_err(|e| fail(exit::IO, "pack", e))?;
            let result = match generate(&doc, &pack, store.catalog()) {
                Ok(r) => r,
                Err(GenerateError::Invalid(report)) => {
                    print_report(out, &report).map_err(io_fail)?;
                    return Err(fail(exit::INVALID, "validate", "document has validation errors; nothing written"));
                }
                Err(e) => return Err(fail(exit::GENERATION, "generate", format_args!("[{}] {e}", e.code()))),
            };
            let manifest = write_output(&result, &out_dir).map_err(|e| {
                let code = match e {
                    OutputError::NonEmpty(_) => exit::NON_EMPTY_OUTPUT,
                    OutputError::UnsafePath(_) | OutputError::DuplicatePath(_) => exit::GENERATION,
                    OutputError::Io { .. } => exit::IO,
                };
                fail(code, "write", format_args!("[{}] {e}", e.code()))
            })?;
            writeln!(
                out,
                "generated {} artifacts into {} (manifest {})",
                result.artifacts.len(),
                out_dir.display(),
                manifest.display()
            )
            .map_err(io_fail)?;
            Ok(exit::OK)
        }
        Command::Search {
            text,
            category,
            tag,
            catalog,
        } => {
            let store = open_store(&catalog)?;
            let query = SearchQuery {
                text,
                category,
                domain_tag: tag,
            };
            for d in store.search(&query) {
                let tags: Vec<&str> = d.domain_tags.iter().map(|t| t.as_str()).collect();
                writeln!(
                    out,
                    "{}\tv{}\t{}\t{}\t{}",
                    d.id,
                    d.version,
                    d.category,
                    d.name,
                    tags.join(",")
                )
                .map_err(io_fail)?;
            }
            Ok(exit::OK)
        }
        Command::Stats { catalog, threshold } => {
            let store = open_store(&catalog)?;
            for rare in store.rarely_used_report(threshold) {
                writeln!(out, "{}\t{}", rare.id, rare.placements).map_err(io_fail)?;
            }
            Ok(exit::OK)
        }
        Command::Serve {
            catalog,
            pack,
            port,
            ui,
        } => {
            let store = open_store(&catalog)?;
            let packs = pack
                .iter()
                .map(|p| load_pack(p).map_err(|e| fail(exit::IO, "pack", e)))
                .collect::<Result<Vec<_>, _>>()?;
            let state = AppState::new(store, packs, ui);
            let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
            let runtime = tokio::runtime::Runtime::new().map_err(|e| fail(exit::IO, "serve", e))?;
            writeln!(out, "listening on http://{addr}").map_err(io_fail)?;
            out.flush().map_err(io_fail)?;
            runtime
                .block_on(api::serve(addr, state))
                .map_err(|e| fail(exit::IO, "serve", e))?;
            Ok(exit::OK)
        }
    }
}
