//! `tgd`: command-line front end. Every command talks to a discovery
//! service, either the one at `--server` or one started in-process.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use tgd_api::*;
use tgd_client::Client;
use tgd_core::adversaries::AdversaryKind;
use tgd_core::datasets::{write_networks, Bucketing, Reduction};
use tgd_core::discoverers::DiscovererKind;
use tgd_core::experiments::SweepConfig;
use tgd_core::game::{Feedback, Goal, Knowledge};
use tgd_core::infection::{Seed, SeedSet, TiePolicy};
use tgd_core::{TemporalGraph, Time, Variant};

#[derive(Parser, Debug)]
#[command(name = "tgd", version, about = "Temporal graph discovery games and experiments")]
struct Cli {
    /// Service to use; an in-process server is started when absent.
    #[arg(long, global = true)]
    server: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the HTTP service in the foreground.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
    },
    /// Write a generated graph in the text format.
    Generate {
        #[command(subcommand)]
        family: Family,
        /// Output file; stdout when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Play one game and print the outcome.
    Play {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "discovery-follow")]
        discoverer: DiscovererKind,
        #[arg(long, default_value = "honest")]
        adversary: AdversaryKind,
        #[arg(long, default_value = "full")]
        feedback: Feedback,
        #[arg(long, default_value = "static")]
        knowledge: Knowledge,
        #[arg(long, default_value = "full")]
        goal: Goal,
        /// Read the graph file as this variant.
        #[arg(long)]
        variant: Option<Variant>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        delta: Time,
        #[arg(long)]
        round_budget: Option<usize>,
        /// Also print the potential after every round.
        #[arg(long)]
        potential: bool,
        /// Print the full response as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run one infection chain and print its log.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        /// Seeds as `node:time`; repeat or separate with commas.
        #[arg(long = "seed", value_delimiter = ',', required = true, value_parser = parse_seed)]
        seeds: Vec<Seed>,
        #[arg(long, default_value_t = 1)]
        delta: Time,
        #[arg(long, default_value = "lowest")]
        policy: TiePolicy,
    },
    /// Print the delta-edge connected components of a graph.
    Components {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        delta: Time,
    },
    /// Check that the one-seed-per-edge schedule witnesses a graph.
    Witness {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1)]
        delta: Time,
    },
    /// Run a parameter sweep and write its CSV.
    Sweep {
        /// Flat `key = value` file; defaults apply when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit and summarize a sweep CSV.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// Report file; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Convert interaction records into graph files.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "raw")]
        bucketing: Bucketing,
        #[arg(long, default_value = "first")]
        reduction: Reduction,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// Random temporal graph: each pair present with probability p, one
    /// uniform label.
    Ert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        lifetime: Time,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
    },
    /// A member of the path-and-hubs lower-bound family.
    Thm52 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lifetime: Time,
        /// Labels of the open path edges, comma separated; all 1 when absent.
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<Time>>,
    },
    /// The zig-zag family with Theta(m) components.
    Omega {
        #[arg(long)]
        x: usize,
    },
}

fn parse_seed(s: &str) -> std::result::Result<Seed, String> {
    let (node, time) = s
        .split_once(':')
        .ok_or_else(|| format!("expected node:time, got `{s}`"))?;
    Ok(Seed::new(
        node.trim().parse().map_err(|e| format!("bad node in `{s}`: {e}"))?,
        time.trim().parse().map_err(|e| format!("bad time in `{s}`: {e}"))?,
    ))
}

fn read_graph(path: &Path) -> Result<TemporalGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    TemporalGraph::from_text(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn connect(server: Option<String>) -> Result<Client> {
    let url = match server {
        Some(url) => url,
        None => tgd_service::spawn_embedded().context("starting embedded server")?.url(),
    };
    Ok(Client::new(url))
}

fn main() -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    if let Command::Serve { addr } = &cli.command {
        return serve(addr);
    }
    let client = connect(cli.server)?;
    run(&client, cli.command)
}

fn serve(addr: &str) -> Result<()> {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("binding {addr}"))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        tgd_service::serve(listener).await?;
        Ok(())
    })
}

fn run(client: &Client, command: Command) -> Result<()> {
    match command {
        Command::Serve { .. } => unreachable!("handled before connecting"),
        Command::Generate { family, out } => {
            let req = match family {
                Family::Ert {
                    n,
                    p,
                    lifetime,
                    rng_seed,
                } => GenerateRequest::Ert {
                    n,
                    p,
                    lifetime,
                    rng_seed,
                },
                Family::Thm52 { n, lifetime, labels } => GenerateRequest::Thm52 { n, lifetime, labels },
                Family::Omega { x } => GenerateRequest::Omega { x },
            };
            let resp = client.generate(&req)?;
            if let Some(delta) = resp.delta {
                eprintln!("built for delta = {delta}");
            }
            emit(out.as_deref(), &resp.graph.to_text())
        }
        Command::Play {
            graph,
            discoverer,
            adversary,
            feedback,
            knowledge,
            goal,
            variant,
            k,
            delta,
            round_budget,
            potential,
            json,
        } => {
            let mut graph = read_graph(&graph)?;
            if let Some(v) = variant {
                graph = graph.as_variant(v)?;
            }
            let settings = GameSettings {
                adversary,
                delta,
                k,
                feedback,
                knowledge,
                goal,
                round_budget,
            };
            let resp = client.play(&PlayRequest {
                graph,
                discoverer,
                settings,
                potential,
            })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&resp)?);
                return Ok(());
            }
            println!("discoverer  {}", resp.discoverer);
            println!("adversary   {}", resp.adversary);
            println!("winner      {}", resp.winner);
            println!("rounds      {}", resp.rounds_used);
            if let Some(p) = resp.phases {
                println!(
                    "phases      discovery {}  exploration {}  skipped {}",
                    p.discovery, p.exploration, p.skipped_redundant
                );
            }
            if let Some(lazy) = &resp.lazy {
                println!("lazy        {}", serde_json::to_string(lazy)?);
            }
            if let Some(trace) = &resp.potential {
                println!("potential   {}", serde_json::to_string(trace)?);
            }
            Ok(())
        }
        Command::Simulate {
            graph,
            seeds,
            delta,
            policy,
        } => {
            let graph = read_graph(&graph)?;
            let seeds: SeedSet = seeds.into_iter().collect();
            let resp = client.simulate(&SimulateRequest {
                graph,
                seeds,
                delta,
                policy: Some(policy),
            })?;
            print!("{}", resp.log.to_text());
            Ok(())
        }
        Command::Components { graph, delta } => {
            let graph = read_graph(&graph)?;
            let resp = client.delta_ecc(&DeltaEccRequest { graph, delta })?;
            println!("components {}  mean size {:.4}", resp.component_count, resp.mean_size);
            for (i, group) in resp.partition.groups().iter().enumerate() {
                let members: Vec<String> = group.iter().map(|(r, t)| format!("{r}@{t}")).collect();
                println!("{i}: {}", members.join(" "));
            }
            Ok(())
        }
        Command::Witness { graph, delta } => {
            let graph = read_graph(&graph)?;
            let resp = client.witness(&WitnessRequest {
                graph,
                delta,
                schedule: None,
            })?;
            println!(
                "schedule of {} rounds witnesses: {}",
                resp.schedule.len(),
                resp.witnessing
            );
            if !resp.witnessing {
                bail!("schedule does not witness the graph");
            }
            Ok(())
        }
        Command::Sweep { config, out } => {
            let config = match config {
                Some(path) => fs::read_to_string(&path)
                    .with_context(|| format!("reading {}", path.display()))?
                    .parse::<SweepConfig>()?,
                None => SweepConfig::default(),
            };
            let resp = client.sweep(&config)?;
            fs::write(&out, &resp.csv).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("{} runs written to {}", resp.records.len(), out.display());
            Ok(())
        }
        Command::Analyze { input, report } => {
            let csv = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let resp = client.analyze(&csv)?;
            emit(report.as_deref(), &resp.text)
        }
        Command::Ingest {
            input,
            bucketing,
            reduction,
            out,
        } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let resp = client.ingest(&IngestRequest {
                text,
                bucketing,
                reduction,
            })?;
            for path in write_networks(&out, &resp.networks)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}
