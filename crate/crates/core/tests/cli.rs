mod common;

use common::{data, driftnet, Server};
use driftnet::learning::synthetic::bundled_events_csv;
use driftnet::simulation::{SweepTable, SWEEP_CSV_HEADER};

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).unwrap()
}

struct Work {
    dir: tempfile::TempDir,
}

impl Work {
    fn new() -> Self {
        Work { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }

    fn write(&self, name: &str, content: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, content).unwrap();
        p
    }

    /// learn + build from the bundled events; returns the network path.
    fn network(&self) -> String {
        let (model, net) = (self.path("model.json"), self.path("net.json"));
        assert_eq!(driftnet(&["learn", "--events", &data("synthetic_events.csv"), "--out", &model]).0, 0);
        assert_eq!(driftnet(&["build", "--model", &model, "--out", &net]).0, 0);
        net
    }
}

#[test]
fn gen_reproduces_bundled_events() {
    let (code, out, _) = driftnet(&["gen"]);
    assert_eq!(code, 0);
    assert_eq!(text(&out), bundled_events_csv());
}

#[test]
fn validate_accepts_json_and_xmlbif() {
    let w = Work::new();
    let (code, out, _) = driftnet(&["validate", "--network", &data("drift_demo.json")]);
    assert_eq!((code, text(&out).contains("\"violations\": []")), (0, true));

    let xml = w.path("demo.xml");
    assert_eq!(driftnet(&["export-xmlbif", "--network", &data("drift_demo.json"), "--out", &xml]).0, 0);
    assert_eq!(driftnet(&["validate", "--network", &xml]).0, 0);
}

#[test]
fn validate_reports_every_violation() {
    let w = Work::new();
    let bad = w.write(
        "bad.json",
        r#"{"variables":[{"id":"A","states":["T","F"]},{"id":"B","states":["T","F"]}],
            "cpts":[{"child":"A","parents":["B"],"rows":[[0.5,0.5],[0.5,0.5]]},
                    {"child":"B","parents":["A"],"rows":[[1.5,-0.5],[0.5,0.5]]}]}"#,
    );
    let (code, out, _) = driftnet(&["validate", "--network", &bad]);
    assert_eq!(code, 1);
    let out = text(&out);
    assert!(out.contains("cycle"), "{out}");
    assert!(out.contains("probability-range"), "{out}");
}

#[test]
fn format_errors_exit_two() {
    let w = Work::new();
    let junk = w.write("junk.json", "{ not json");
    let (code, _, err) = driftnet(&["validate", "--network", &junk]);
    assert_eq!(code, 2);
    assert!(err.contains("junk.json"), "{err}");
    let header = w.write("events.csv", "a,b,c\n1,2,3\n");
    assert_eq!(driftnet(&["learn", "--events", &header]).0, 2);
    assert_eq!(driftnet(&["learn", "--events", &w.path("missing.csv")]).0, 2);
}

#[test]
fn learn_reports_rejected_rows() {
    let w = Work::new();
    let events = w.write(
        "events.csv",
        "project_id,description,drift_id,loss,project_cost\nP1,a,1.2,5,100\nP1,b,9.9,5,100\nP2,c,2.1,x,100\n",
    );
    let (code, out, err) = driftnet(&["learn", "--events", &events]);
    assert_eq!(code, 0);
    assert!(err.contains("line 3: unknown drift id `9.9`"), "{err}");
    assert!(err.contains("line 4:"), "{err}");
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["instances"], 1);
}

#[test]
fn sweep_writes_csv_and_table() {
    let w = Work::new();
    let net = w.network();
    let csv = w.path("sweep.csv");
    let (code, out, _) = driftnet(&["sweep", "--network", &net, "--out", &csv]);
    assert_eq!(code, 0);
    assert!(text(&out).starts_with("level"));
    let written = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(written.lines().next(), Some(SWEEP_CSV_HEADER));
    assert_eq!(SweepTable::parse_csv(&written).unwrap().len(), 6);

    let (_, stdout_csv, _) = driftnet(&["sweep", "--network", &net]);
    assert_eq!(text(&stdout_csv), written);
}

#[test]
fn infer_and_rank() {
    let w = Work::new();
    let net = w.network();
    let a = w.write("a.json", r#"{"answers":{"PR.Interface.LV1":"Yes"}}"#);
    let (code, out, _) = driftnet(&["infer", "--network", &net, "--assessment", &a]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    let total: f64 = v["overcost"]["probabilities"].as_array().unwrap().iter().map(|p| p.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);

    let (code, out, _) = driftnet(&["rank", "--network", &net, "--assessment", &a]);
    assert_eq!(code, 0);
    let ranked: Vec<serde_json::Value> = serde_json::from_slice(&out).unwrap();
    assert_eq!(ranked.len(), 64);

    let bad = w.write("bad.json", r#"{"answers":{"PR.Nowhere.LV1":"Yes"}}"#);
    let (code, _, err) = driftnet(&["infer", "--network", &net, "--assessment", &bad]);
    assert_eq!(code, 1);
    assert!(err.contains("PR.Nowhere.LV1"), "{err}");
}

#[test]
fn infer_rejects_non_drift_networks() {
    let w = Work::new();
    let a = w.write("a.json", "{}");
    let (code, _, err) = driftnet(&["infer", "--network", &data("drift_demo.json"), "--assessment", &a]);
    assert_eq!(code, 1);
    assert!(err.contains("Overcost"), "{err}");
}

#[test]
fn serve_answers_over_tcp() {
    let w = Work::new();
    let net = w.network();
    let s = Server::start(&["--network", &net]);
    let (status, body) = s.request("POST", "/whatif", r#"{"answers":{"PR.Interface.LV1":"Yes"}}"#);
    assert_eq!(status, 200);
    assert!(body.contains("drift_risks"));
    let (status, body) = s.request("POST", "/whatif", r#"{"answers":{"XX":"Yes"}}"#);
    assert_eq!(status, 400);
    assert!(body.contains("unknown question"));
    assert_eq!(s.request("GET", "/missing", "").0, 404);
}

#[test]
fn serve_without_model_fails() {
    let (code, _, err) = driftnet(&["serve"]);
    assert_eq!(code, 1);
    assert!(err.contains("--network or --model"), "{err}");
}
