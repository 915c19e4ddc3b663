use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use scenecast::api::Server;
use scenecast::demos::{self, DemoName};
use scenecast::headless::{ConnectOptions, HeadlessClient};
use scenecast::schema::builtin_client_declarations;
use scenecast::transport::server::{DEFAULT_HOST, DEFAULT_PORT};
use tracing_subscriber::EnvFilter;

#[derive(Debug, Parser)]
#[command(name = "scenecast", version, about = "Server-side 3D visualization: demos, schema codegen and a headless client")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one of the bundled demos until interrupted.
    Demo {
        /// pointcloud_frustums, slider_double, counter or kinematic_chain.
        name: DemoName,
        #[arg(long, default_value = DEFAULT_HOST)]
        host: String,
        #[arg(long, default_value_t = DEFAULT_PORT, value_parser = clap::value_parser!(u16).range(1..))]
        port: u16,
    },
    /// Write TypeScript declarations for the message schema.
    GenSchema {
        out: PathBuf,
        /// Do not write; exit 1 if `out` differs from what would be written.
        #[arg(long)]
        check: bool,
    },
    /// Headless client utilities.
    Headless {
        #[command(subcommand)]
        command: HeadlessCommand,
    },
}

#[derive(Debug, Subcommand)]
enum HeadlessCommand {
    /// Connect, apply the snapshot and report what was received.
    Connect {
        /// WebSocket URL, for example ws://127.0.0.1:8080/ws.
        url: String,
        /// Print the mirror's canonical state.
        #[arg(long)]
        dump_state: bool,
        /// Simulated round-trip time in milliseconds.
        #[arg(long, default_value_t = 0)]
        rtt: u64,
        /// How long to keep receiving before reporting, in milliseconds.
        #[arg(long, default_value_t = 500)]
        wait: u64,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match cli.command {
        Command::Demo { name, host, port } => run_demo(name, &host, port),
        Command::GenSchema { out, check } => gen_schema(&out, check),
        Command::Headless {
            command:
                HeadlessCommand::Connect {
                    url,
                    dump_state,
                    rtt,
                    wait,
                },
        } => headless_connect(&url, dump_state, rtt, wait),
    }
}

fn run_demo(name: DemoName, host: &str, port: u16) -> ExitCode {
    let server = match Server::start(host, port) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let _animator = match demos::install(name, &server) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    println!("{name} running at {}", server.http_url());
    println!("websocket endpoint {}", server.ws_url());
    loop {
        std::thread::sleep(Duration::from_secs(1));
    }
}

fn gen_schema(out: &PathBuf, check: bool) -> ExitCode {
    let generated = builtin_client_declarations();
    if check {
        return match std::fs::read_to_string(out) {
            Ok(existing) if existing == generated => ExitCode::SUCCESS,
            Ok(_) => {
                eprintln!("{} is stale; rerun `scenecast gen-schema {}`", out.display(), out.display());
                ExitCode::FAILURE
            }
            Err(e) => {
                eprintln!("cannot read {}: {e}", out.display());
                ExitCode::FAILURE
            }
        };
    }
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        if let Err(e) = std::fs::create_dir_all(dir) {
            eprintln!("cannot create {}: {e}", dir.display());
            return ExitCode::FAILURE;
        }
    }
    match std::fs::write(out, generated) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cannot write {}: {e}", out.display());
            ExitCode::FAILURE
        }
    }
}

fn headless_connect(url: &str, dump_state: bool, rtt: u64, wait: u64) -> ExitCode {
    let options = ConnectOptions {
        rtt: Duration::from_millis(rtt),
        ..Default::default()
    };
    let client = match HeadlessClient::connect_with(url, options) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    std::thread::sleep(Duration::from_millis(wait));
    if dump_state {
        print!("{}", client.canonical_state());
    } else {
        let (nodes, elements) = client.with_mirror(|m| (m.scene.len(), m.gui.len()));
        let stats = client.stats();
        println!("client {}", client.client_id());
        println!("nodes {nodes}");
        println!("gui elements {elements}");
        println!("frames {} messages {} bytes {}", stats.frames_received, stats.messages_received, stats.bytes_received);
    }
    ExitCode::SUCCESS
}
