use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use notakto::oracle::Oracle;
use notakto::quotient::ValueTable;
use notakto_cli::commands::{self, DictFormat};
use notakto_cli::dictionary::{self, DictError};
use notakto_cli::{http, play, CmdError};

#[derive(Parser)]
#[command(
    name = "notakto",
    version,
    about = "Perfect play for multi-board misere X-only tic-tac-toe"
)]
struct Cli {
    /// Dictionary cache file; created or repaired as needed.
    #[arg(long, global = true, env = "NOTAKTO_DICT")]
    dict: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Outcome, value and winning moves of a position.
    Solve {
        /// Boards joined by '/' ("....X..../.........") or masks joined by ','.
        position: String,
    },
    /// The engine's move in a position.
    Best { position: String },
    /// Export the 102-class value dictionary.
    Dict {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the dictionary against exhaustive search.
    Verify {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=4))]
        max_boards: u8,
    },
    /// Play against the engine in the terminal.
    Play {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=6))]
        boards: u8,
        #[arg(long)]
        human_first: bool,
    },
    /// Serve the JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory of static web assets served at '/'.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
    /// Export the monoid multiplication table as CSV.
    Monoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn load(dict: Option<&std::path::Path>, oracle: &Oracle) -> Result<ValueTable, DictError> {
    let (table, source) = dictionary::load_or_build(dict, oracle)?;
    if let Some(note) = source.note() {
        eprintln!("{note}");
    }
    Ok(table)
}

fn run(cli: Cli) -> Result<(), CmdError> {
    let oracle = Oracle::new();
    let dict = cli.dict.as_deref();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Solve { position } => {
            let p = commands::parse_position(&position)?;
            commands::solve(&p, &load(dict, &oracle)?, &mut out)
        }
        Command::Best { position } => {
            let p = commands::parse_position(&position)?;
            commands::best(&p, &load(dict, &oracle)?, &mut out)
        }
        Command::Dict { format, out: path } => {
            let t = load(dict, &oracle)?;
            let format = match format {
                Format::Json => DictFormat::Json,
                Format::Csv => DictFormat::Csv,
            };
            match path {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path)?);
                    commands::dict(&t, format, &mut w)?;
                    w.flush()?;
                    Ok(())
                }
                None => commands::dict(&t, format, &mut out),
            }
        }
        Command::Verify { max_boards } => {
            let t = load(dict, &oracle)?;
            commands::verify(&t, &oracle, max_boards as usize, &mut out)
        }
        Command::Play {
            boards,
            human_first,
        } => {
            let t = load(dict, &oracle)?;
            match play::play(
                boards as usize,
                human_first,
                &t,
                io::stdin().lock(),
                &mut out,
            ) {
                Ok(_) => Ok(()),
                Err(play::PlayError::InputClosed) => {
                    eprintln!("input closed; game abandoned");
                    Ok(())
                }
                Err(play::PlayError::Io(e)) => Err(e.into()),
            }
        }
        Command::Serve { port, host, assets } => {
            let t = Arc::new(load(dict, &oracle)?);
            let app = http::router(t, assets);
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(addr).await?;
                eprintln!("listening on http://{}", listener.local_addr()?);
                axum::serve(listener, app).await
            })?;
            Ok(())
        }
        Command::Monoid => commands::monoid(&mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
