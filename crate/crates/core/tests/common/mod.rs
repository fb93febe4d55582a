#![allow(dead_code)]

use driftnet::learning::synthetic::bundled_events_csv;
use driftnet::learning::{compile_target_cpt, ingest_events_from_reader, learn_naive_bayes, Granularity};
use driftnet::maturity::{build_network, DriftNetwork, FrameworkConfig};
use driftnet::network::{Cpt, Evidence, Network, Variable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn two(a: &str, b: &str) -> Vec<String> {
    vec![a.to_string(), b.to_string()]
}

/// A -> B -> C
pub fn serial() -> Network {
    Network::new(
        vec![Variable::binary("A"), Variable::binary("B"), Variable::binary("C")],
        vec![
            Cpt::prior("A", vec![0.4, 0.6]),
            Cpt::new("B", vec!["A".into()], vec![vec![0.9, 0.1], vec![0.25, 0.75]]),
            Cpt::new("C", vec!["B".into()], vec![vec![0.7, 0.3], vec![0.15, 0.85]]),
        ],
    )
    .unwrap()
}

/// A <- B -> C
pub fn diverging() -> Network {
    Network::new(
        vec![Variable::binary("A"), Variable::binary("B"), Variable::binary("C")],
        vec![
            Cpt::prior("B", vec![0.35, 0.65]),
            Cpt::new("A", vec!["B".into()], vec![vec![0.8, 0.2], vec![0.3, 0.7]]),
            Cpt::new("C", vec!["B".into()], vec![vec![0.6, 0.4], vec![0.05, 0.95]]),
        ],
    )
    .unwrap()
}

/// A -> C <- B
pub fn converging() -> Network {
    Network::new(
        vec![Variable::binary("A"), Variable::binary("B"), Variable::binary("C")],
        vec![
            Cpt::prior("A", vec![0.3, 0.7]),
            Cpt::prior("B", vec![0.6, 0.4]),
            Cpt::new(
                "C",
                two("A", "B"),
                vec![vec![0.95, 0.05], vec![0.7, 0.3], vec![0.4, 0.6], vec![0.02, 0.98]],
            ),
        ],
    )
    .unwrap()
}

pub fn basic_dags() -> Vec<(&'static str, Network)> {
    vec![("serial", serial()), ("diverging", diverging()), ("converging", converging())]
}

fn random_row(rng: &mut ChaCha8Rng, card: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..card).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

/// Random DAG over `n` nodes named `V00..`, at most `max_parents` parents per
/// node, each chosen among earlier nodes of a shuffled order. States are
/// binary unless `max_card` > 2.
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, max_parents: usize, max_card: usize) -> Network {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cards: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=max_card.max(2))).collect();
    let name = |i: usize| format!("V{i:02}");
    let variables: Vec<Variable> = (0..n)
        .map(|i| Variable::new(name(i), (0..cards[i]).map(|s| format!("s{s}")).collect::<Vec<_>>()).unwrap())
        .collect();
    let mut cpts = Vec::new();
    for (pos, &child) in order.iter().enumerate() {
        let k = rng.gen_range(0..=max_parents.min(pos));
        let mut earlier: Vec<usize> = order[..pos].to_vec();
        earlier.shuffle(rng);
        let parents: Vec<usize> = earlier.into_iter().take(k).collect();
        let rows_n: usize = parents.iter().map(|&p| cards[p]).product();
        let rows = (0..rows_n).map(|_| random_row(rng, cards[child])).collect();
        cpts.push(Cpt::new(name(child), parents.iter().map(|&p| name(p)).collect(), rows));
    }
    Network::new(variables, cpts).unwrap()
}

/// Random query and evidence: the query is one variable, each other variable
/// is observed with probability one third.
pub fn random_query(rng: &mut ChaCha8Rng, net: &Network) -> (String, Evidence) {
    let q = rng.gen_range(0..net.len());
    let mut e = Evidence::new();
    for (i, v) in net.variables().iter().enumerate() {
        if i != q && rng.gen_bool(1.0 / 3.0) {
            let s = rng.gen_range(0..v.cardinality());
            e.insert(v.id(), v.states()[s].clone());
        }
    }
    (net.variables()[q].id().to_string(), e)
}

/// Joint probability of a full assignment, read straight off the CPT rows.
pub fn joint(net: &Network, states: &[usize]) -> f64 {
    let pos = |id: &str| net.variables().iter().position(|v| v.id() == id).unwrap();
    net.cpts()
        .iter()
        .map(|c| {
            let mut row = 0;
            for p in c.parents() {
                let i = pos(p);
                row = row * net.variables()[i].cardinality() + states[i];
            }
            c.rows()[row][states[pos(c.child())]]
        })
        .product()
}

/// Sum of the joint over every full assignment that agrees with `fixed`
/// (pairs of variable index and state index).
pub fn marginal(net: &Network, fixed: &[(usize, usize)]) -> f64 {
    let cards: Vec<usize> = net.variables().iter().map(Variable::cardinality).collect();
    let total: usize = cards.iter().product();
    let mut sum = 0.0;
    let mut states = vec![0; cards.len()];
    for mut idx in 0..total {
        for i in (0..cards.len()).rev() {
            states[i] = idx % cards[i];
            idx /= cards[i];
        }
        if fixed.iter().all(|&(v, s)| states[v] == s) {
            sum += joint(net, &states);
        }
    }
    sum
}

/// Posterior of `query` by summing the joint, independent of the library's
/// enumeration and elimination code.
pub fn oracle_posterior(net: &Network, query: &str, evidence: &Evidence) -> Vec<f64> {
    let idx = |id: &str| net.variables().iter().position(|v| v.id() == id).unwrap();
    let fixed: Vec<(usize, usize)> = evidence
        .iter()
        .map(|(v, s)| (idx(v), net.variables()[idx(v)].state_index(s).unwrap()))
        .collect();
    let q = idx(query);
    let mass: Vec<f64> = (0..net.variables()[q].cardinality())
        .map(|s| {
            let mut f = fixed.clone();
            f.push((q, s));
            marginal(net, &f)
        })
        .collect();
    let z: f64 = mass.iter().sum();
    mass.iter().map(|m| m / z).collect()
}

pub fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// The full network from the bundled framework and synthetic events, learned
/// per event with unit pseudo-counts.
pub fn bundled_network() -> (FrameworkConfig, DriftNetwork) {
    let cfg = FrameworkConfig::bundled();
    let ids = cfg.drift_ids();
    let events = ingest_events_from_reader(bundled_events_csv().as_bytes(), Some(&ids)).unwrap().records;
    let model = learn_naive_bayes(&events, &ids, 1.0, Granularity::Event).unwrap();
    let target = compile_target_cpt(&model, &ids).unwrap();
    let net = build_network(&cfg.framework, &cfg.drift_factors, &cfg.weights, target).unwrap();
    (cfg, net)
}

/// Reference `P(Drift = True)` for the 32 level configurations under the
/// default weights, LV1 slowest and LV5 fastest.
pub const REFERENCE_DRIFT_TRUE: [f64; 32] = [
    1.0, 0.6, 0.7, 0.3, 0.85, 0.45, 0.55, 0.15, 0.9, 0.5, 0.6, 0.2, 0.75, 0.35, 0.45, 0.05, //
    0.95, 0.55, 0.65, 0.25, 0.8, 0.4, 0.5, 0.1, 0.85, 0.45, 0.55, 0.15, 0.7, 0.3, 0.4, 0.0,
];

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_driftnet")
}

pub fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs the command-line tool and returns (exit code, stdout, stderr).
pub fn driftnet(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = std::process::Command::new(bin()).args(args).output().expect("spawn driftnet");
    (out.status.code().unwrap_or(-1), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

/// A running `driftnet serve`, killed on drop.
pub struct Server {
    child: std::process::Child,
    pub port: u16,
}

impl Server {
    pub fn start(args: &[&str]) -> Server {
        let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
        let child = std::process::Command::new(bin())
            .arg("serve")
            .args(args)
            .args(["--port", &port.to_string()])
            .stdout(std::process::Stdio::null())
            .stderr(std::process::Stdio::null())
            .spawn()
            .expect("spawn server");
        let deadline = std::time::Instant::now() + std::time::Duration::from_secs(60);
        while std::net::TcpStream::connect(("127.0.0.1", port)).is_err() {
            assert!(std::time::Instant::now() < deadline, "server did not start");
            std::thread::sleep(std::time::Duration::from_millis(50));
        }
        Server { child, port }
    }

    /// One HTTP/1.1 request over a fresh connection; returns status and body.
    pub fn request(&self, method: &str, path: &str, body: &str) -> (u16, String) {
        use std::io::{Read, Write};
        let mut s = std::net::TcpStream::connect(("127.0.0.1", self.port)).unwrap();
        write!(
            s,
            "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
            body.len()
        )
        .unwrap();
        let mut raw = String::new();
        s.read_to_string(&mut raw).unwrap();
        let (head, body) = raw.split_once("\r\n\r\n").unwrap();
        let status = head.split(' ').nth(1).unwrap().parse().unwrap();
        (status, body.to_string())
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
