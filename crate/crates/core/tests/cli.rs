use mixlink::cli::{run, run_with_stdin};
use serde_json::Value;

const FAMILY_T4: &str = "z1^6*zb1^3 - 2*z2^4*zb2^2 + (4+0i)*z2^4*zb1^3";

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> mixlink::cli::CliOutput {
    run(std::iter::once("mixlink").chain(args.iter().copied()).map(String::from).collect::<Vec<_>>())
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = cli(&all);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn solve_reads_json_document() {
    let path = data("family_t0.json");
    let v = json(&["solve", "--poly", &path]);
    assert_eq!(v["command"], "solve");
    assert_eq!(v["results"]["components"], 1);
}

#[test]
fn solve_reads_text_file_at_fold() {
    let path = data("family_t_minus3.txt");
    let v = json(&["solve", "--weights", "2,3", "--poly", &path]);
    assert_eq!(v["results"]["components"], 2);
    assert_eq!(v["results"]["report"]["degenerate"], true);
}

#[test]
fn solve_reads_stdin() {
    let args: Vec<String> = ["mixlink", "solve", "--poly", "-", "--json"].map(String::from).to_vec();
    let out = run_with_stdin(args, &mut "z1^3 - z2^2\n".as_bytes());
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["results"]["n_pos"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["solve", "--expr", "z1^3 - z2^2"]).code, 0);
    assert_eq!(cli(&["solve", "--expr", "z1^^2"]).code, 2);
    assert_eq!(cli(&["solve", "--poly", "/definitely/not/here.json"]).code, 2);
    assert_eq!(cli(&["no-such-command"]).code, 2);
    assert_eq!(cli(&["construct", "--orbits", "0.3:+,-0.4:-"]).code, 2);
    // Orbit on the link: the fiber count has no base point.
    assert_eq!(cli(&["fiber-count", "--expr", "z1^3 - z2^2", "--z1", "0.7548776662466926", "--z2", "0.6558656180971423"]).code, 3);
}

#[test]
fn error_report_has_null_results() {
    let out = cli(&["solve", "--expr", "z1^^2", "--json"]);
    assert_eq!(out.code, 2);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v["results"].is_null());
    assert_eq!(v["diagnostics"]["error"]["code"], "SyntaxError");
}

#[test]
fn sweep_finds_one_elimination() {
    let v = json(&["sweep", "--from", "-3.5", "--to", "-2.5", "--steps", "40"]);
    let events = v["results"]["events"].as_array().unwrap();
    assert_eq!(events.len(), 1);
    assert_eq!(events[0]["kind"], "pair_elimination");
}

#[test]
fn euler_both_modes() {
    let v = json(&["euler", "--d", "1", "--r", "1"]);
    assert_eq!(v["results"]["chi_paper"], -13);
    assert_eq!(v["results"]["chi_covering"], -13);
}

#[test]
fn rank_check_defaults() {
    let v = json(&["rank-check", "--weights", "3,5"]);
    assert_eq!(v["results"]["rank"], 3);
}

#[test]
fn text_summary_without_json() {
    let out = cli(&["solve", "--expr", "z1^3 - z2^2"]);
    assert!(out.stdout.starts_with("solve: ok"));
    assert!(out.stdout.contains("components: 1"));
}

#[test]
fn sigma_svg_is_xml() {
    let out = cli(&["sigma", "--n", "128", "--out", "svg"]);
    assert_eq!(out.code, 0);
    let doc = roxmltree::Document::parse(&out.stdout).unwrap();
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("sigma")));
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("cusp")));
}

#[test]
fn projection_outside_has_one_negative_component() {
    let out = cli(&["project", "--weights", "2,3", "--expr", FAMILY_T4, "--out", "svg"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = roxmltree::Document::parse(&out.stdout).unwrap();
    let paths: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("id").is_some_and(|id| id.starts_with("component-")))
        .collect();
    assert_eq!(paths.len(), 3);
    let dashed = paths.iter().filter(|n| n.attribute("stroke-dasharray").is_some()).count();
    assert_eq!(dashed, 1);
}

#[test]
fn linking_matrix_from_orbits() {
    let v = json(&["linking", "--weights", "2,3", "--orbits", "0.3+0.2i:+,-0.4+0.3i:-"]);
    let text = v["results"].to_string();
    assert!(text.contains("-6"), "{text}");
}
