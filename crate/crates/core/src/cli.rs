//! Command-line front end. Exit status: 0 success, 1 validation failure,
//! 2 I/O or format error.

use std::io::Write;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::learning::synthetic::{default_planted_model, generate_synthetic_events, SyntheticConfig, DEFAULT_SEED};
use crate::learning::{compile_target_cpt, ingest_events, learn_naive_bayes, write_events_csv, Granularity, NaiveBayesModel};
use crate::maturity::{build_network, Assessment, DriftNetwork, FrameworkConfig};
use crate::network::{xmlbif, Network, NetworkDocument};
use crate::server::{self, AppState, Provenance, DEFAULT_PORT};
use crate::simulation::{maturity_sweep, rank_actions, what_if, SweepMode};

#[derive(Debug, Parser)]
#[command(name = "driftnet", version, about = "Maturity-to-overcost Bayesian network toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a network file (JSON, or XMLBIF by `.xml`/`.xmlbif` extension).
    Validate {
        #[arg(long)]
        network: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Learn the naive-Bayes overcost model from an event CSV.
    Learn {
        #[arg(long)]
        events: PathBuf,
        #[command(flatten)]
        framework: FrameworkArg,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = Granularity::Event)]
        granularity: Granularity,
        #[command(flatten)]
        out: OutArg,
    },
    /// Assemble the network from a framework file and a learned model.
    Build {
        #[command(flatten)]
        framework: FrameworkArg,
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Overcost and drift posteriors for an assessment.
    Infer {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        assessment: PathBuf,
        #[command(flatten)]
        framework: FrameworkArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Overcost distribution per maturity level, as CSV.
    Sweep {
        #[arg(long)]
        network: PathBuf,
        #[arg(long, value_enum, default_value_t = SweepMode::Cumulative)]
        sweep: SweepMode,
        #[command(flatten)]
        out: OutArg,
    },
    /// Rank unanswered or `No` questions by tail-risk reduction.
    Rank {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        assessment: PathBuf,
        #[command(flatten)]
        framework: FrameworkArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Generate a synthetic event CSV from the planted model.
    Gen {
        #[command(flatten)]
        framework: FrameworkArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = crate::learning::synthetic::DEFAULT_PROJECTS)]
        projects: usize,
        #[arg(long = "n-events", default_value_t = crate::learning::synthetic::DEFAULT_EVENTS)]
        n_events: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Write a network as XMLBIF 0.3.
    #[command(name = "export-xmlbif")]
    ExportXmlbif {
        #[arg(long)]
        network: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Serve the HTTP API over one network.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FrameworkArg {
    /// Framework, weights and drift catalogue; the bundled default when omitted.
    #[arg(long)]
    pub framework: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Prebuilt network. Built from `--model` when omitted.
    #[arg(long)]
    pub network: Option<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub framework: FrameworkArg,
    #[arg(long, default_value_t = DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
    pub host: IpAddr,
    /// Origin allowed for cross-origin requests; repeatable, `*` for any.
    #[arg(long = "cors-origin")]
    pub cors_origins: Vec<String>,
}

/// Runs one subcommand and returns the process exit status.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } | Error::Format { .. } | Error::Json(_) | Error::Csv(_) => 2,
        _ => 1,
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Validate { network, out } => {
            let mut doc = load_network_document(&network)?;
            doc.renormalize();
            let report = doc.validate();
            emit(&out, stdout, &json(&report))?;
            if report.is_empty() {
                Ok(0)
            } else {
                let _ = write!(stderr, "{report}");
                Ok(1)
            }
        }
        Command::Learn { events, framework, alpha, granularity, out } => {
            let cfg = load_framework(&framework)?;
            let catalogue = cfg.drift_ids();
            let ingested = ingest_events(&events, Some(&catalogue))?;
            for r in &ingested.rejects {
                let _ = writeln!(stderr, "{}:{r}", events.display());
            }
            let model = learn_naive_bayes(&ingested.records, &catalogue, alpha, granularity)?;
            emit(&out, stdout, &model.to_json())?;
            Ok(0)
        }
        Command::Build { framework, model, out } => {
            let cfg = load_framework(&framework)?;
            let model = NaiveBayesModel::load(&model)?;
            let net = build_from(&cfg, &model)?;
            emit(&out, stdout, &net.network().to_json())?;
            Ok(0)
        }
        Command::Infer { network, assessment, framework, out } => {
            let cfg = load_framework(&framework)?;
            let net = load_drift_network(&network)?;
            let a = Assessment::load(&assessment)?;
            let r = what_if(&net, &cfg.framework, &a)?;
            emit(&out, stdout, &json(&r))?;
            Ok(0)
        }
        Command::Sweep { network, sweep, out } => {
            let net = load_drift_network(&network)?;
            let table = maturity_sweep(&net, sweep)?;
            match &out.out {
                Some(path) => {
                    write_file(path, &table.to_csv())?;
                    write_stdout(stdout, &table.to_string())?;
                }
                None => write_stdout(stdout, &table.to_csv())?,
            }
            Ok(0)
        }
        Command::Rank { network, assessment, framework, out } => {
            let cfg = load_framework(&framework)?;
            let net = load_drift_network(&network)?;
            let a = Assessment::load(&assessment)?;
            let ranked = rank_actions(&net, &cfg.framework, &a)?;
            emit(&out, stdout, &json(&ranked))?;
            Ok(0)
        }
        Command::Gen { framework, seed, projects, n_events, out } => {
            let cfg = load_framework(&framework)?;
            let planted = default_planted_model(&cfg.drift_ids());
            let syn = SyntheticConfig {
                seed,
                n_projects: projects,
                n_events,
                ..SyntheticConfig::new(cfg.drift_factors.clone())
            };
            let events = generate_synthetic_events(&syn, &planted)?;
            emit(&out, stdout, &write_events_csv(&events))?;
            Ok(0)
        }
        Command::ExportXmlbif { network, out } => {
            let net = load_network(&network)?;
            let name = network.file_stem().and_then(|s| s.to_str()).unwrap_or("network");
            emit(&out, stdout, &xmlbif::to_xmlbif(&net, name))?;
            Ok(0)
        }
        Command::Serve(args) => {
            let state = serve_state(&args)?;
            let addr = SocketAddr::new(args.host, args.port);
            let rt = tokio::runtime::Runtime::new().map_err(|e| Error::io("tokio runtime", e))?;
            rt.block_on(server::serve(state, addr, &args.cors_origins))?;
            Ok(0)
        }
    }
}

/// Compiles the overcost CPT for the catalogue's drifts and assembles the network.
pub fn build_from(cfg: &FrameworkConfig, model: &NaiveBayesModel) -> Result<DriftNetwork> {
    let target = compile_target_cpt(model, &cfg.drift_ids())?;
    build_network(&cfg.framework, &cfg.drift_factors, &cfg.weights, target)
}

fn serve_state(args: &ServeArgs) -> Result<AppState> {
    let mut prov = Provenance::default();
    let cfg = match &args.framework.framework {
        Some(path) => {
            prov.record_file("framework", &read_bytes(path)?);
            FrameworkConfig::load(path)?
        }
        None => {
            prov.record_file("framework", FrameworkConfig::bundled_text().as_bytes());
            FrameworkConfig::bundled()
        }
    };
    let model = match &args.model {
        Some(path) => {
            prov.record_file("model", &read_bytes(path)?);
            let m = NaiveBayesModel::load(path)?;
            prov.record_model(&m);
            Some(m)
        }
        None => None,
    };
    let net = match (&args.network, &model) {
        (Some(path), _) => {
            prov.record_file("network", &read_bytes(path)?);
            load_drift_network(path)?
        }
        (None, Some(m)) => build_from(&cfg, m)?,
        (None, None) => return Err(Error::input("serve needs --network or --model")),
    };
    AppState::new(net, cfg, prov)
}

fn is_xml(path: &Path) -> bool {
    matches!(path.extension().and_then(|e| e.to_str()), Some("xml" | "xmlbif"))
}

fn load_network_document(path: &Path) -> Result<NetworkDocument> {
    if is_xml(path) {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        xmlbif::from_xmlbif(&text).map_err(|e| match e {
            Error::Format { message, .. } => Error::format(path.display(), message),
            other => other,
        })
    } else {
        NetworkDocument::load(path)
    }
}

fn load_network(path: &Path) -> Result<Network> {
    load_network_document(path)?.into_network()
}

fn load_drift_network(path: &Path) -> Result<DriftNetwork> {
    DriftNetwork::from_network(load_network(path)?)
}

fn load_framework(arg: &FrameworkArg) -> Result<FrameworkConfig> {
    match &arg.framework {
        Some(path) => FrameworkConfig::load(path),
        None => Ok(FrameworkConfig::bundled()),
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn emit(out: &OutArg, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => write_file(path, text),
        None => write_stdout(stdout, text),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_stdout(stdout: &mut dyn Write, text: &str) -> Result<()> {
    stdout.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("driftnet").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(cli, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn missing_file_is_exit_two() {
        let (code, _, err) = run_args(&["validate", "--network", "/nonexistent/net.json"]);
        assert_eq!(code, 2);
        assert!(err.contains("/nonexistent/net.json"));
    }

    #[test]
    fn invalid_network_is_exit_one() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"variables":[{"id":"A","states":["T","F"]}],"cpts":[{"child":"A","parents":[],"rows":[[0.5,0.4]]}]}"#,
        )
        .unwrap();
        let (code, out, err) = run_args(&["validate", "--network", path.to_str().unwrap()]);
        assert_eq!(code, 1);
        assert!(out.contains("row-sum"));
        assert!(err.contains("row-sum: A"));
    }

    #[test]
    fn gen_writes_csv() {
        let (code, out, _) = run_args(&["gen", "--n-events", "10", "--projects", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 11);
    }

    #[test]
    fn serve_requires_a_model() {
        let cli = Cli::try_parse_from(["driftnet", "serve"]).unwrap();
        let Command::Serve(args) = cli.command else { unreachable!() };
        assert!(serve_state(&args).is_err());
    }
}
