use std::io::Write;
use std::process::{Command, Output, Stdio};

use kahler_graph::spectra::make_circulant_regular;
use kahler_graph::DirectedCyclicGraph;
use kahler_graph_cli::{generate, parse_graph, Family};
use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kahler-graph"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn binary");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(args: &[&str]) -> String {
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    let o = run(&full, "");
    assert!(o.status.success());
    stdout(&o)
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid json")
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn generate_round_trips() {
    for n in 3..=12 {
        let g = parse_graph(&generate(Family::Ngon(n)).unwrap()).unwrap();
        assert_eq!(g, DirectedCyclicGraph::directed_ngon(n).unwrap());
        let g = parse_graph(&generate(Family::BidirectedNgon(n)).unwrap()).unwrap();
        assert_eq!(g, DirectedCyclicGraph::bidirected_ngon(n).unwrap());
        for d in 1..n {
            let g = parse_graph(&generate(Family::Circulant(n, d)).unwrap()).unwrap();
            assert_eq!(g, make_circulant_regular(n, d).unwrap());
        }
    }
    assert_eq!(gen(&["ngon", "5"]).lines().count(), 6);
    assert_eq!(gen(&["circulant", "5", "2"]).lines().count(), 11);
    assert_eq!(gen(&["bidirected-ngon", "3"]).lines().count(), 7);
}

#[test]
fn spectrum_examples() {
    let ngon4 = gen(&["ngon", "4"]);
    let ev = numbers(&json(&run(&["spectrum"], &ngon4))["eigenvalues"]);
    for (a, b) in ev.iter().zip([0.0, 2.0, 2.0, 4.0]) {
        assert!((a - b).abs() < 1e-9, "{ev:?}");
    }
    let circ = gen(&["circulant", "4", "2"]);
    let ev = numbers(&json(&run(&["spectrum"], &circ))["eigenvalues"]);
    assert!((ev.last().unwrap() - 9.0).abs() < 1e-9);
    let ev = numbers(&json(&run(&["spectrum", "--potential", "zero"], &circ))["eigenvalues"]);
    assert!(ev.iter().all(|v| (v - 1.0).abs() < 1e-12));
}

#[test]
fn closed_form_flag() {
    let o = run(&["spectrum", "--closed-form"], &gen(&["ngon", "7"]));
    let v = json(&o);
    assert_eq!(numbers(&v["closed_form"]).len(), 7);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-9);
    let o = run(&["spectrum", "--closed-form"], &gen(&["bidirected-ngon", "4"]));
    assert!(o.status.success());
    assert!(json(&o).get("closed_form").is_none());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn csv_matches_json() {
    let graph = gen(&["circulant", "6", "3"]);
    let j = numbers(&json(&run(&["spectrum"], &graph))["eigenvalues"]);
    let c: Vec<f64> = csv_rows(&run(&["spectrum", "--format", "csv"], &graph))
        .iter()
        .map(|r| r[1].parse().unwrap())
        .collect();
    assert_eq!(j, c);

    let lj = json(&run(&["laplacian"], &graph));
    let dim = lj["dim"].as_u64().unwrap() as usize;
    let rows = csv_rows(&run(&["laplacian", "--format", "csv"], &graph));
    assert_eq!(rows.len(), dim * dim);
    for r in rows {
        let (i, k): (usize, usize) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        assert_eq!(lj["re"][i][k].as_f64().unwrap(), r[2].parse::<f64>().unwrap());
        assert_eq!(lj["im"][i][k].as_f64().unwrap(), r[3].parse::<f64>().unwrap());
    }

    let single = "n 4\n0 1\n1 2\n";
    let dj = json(&run(&["distance"], single));
    for r in csv_rows(&run(&["distance", "--format", "csv"], single)) {
        let (mu, nu): (usize, usize) = (r[0].parse().unwrap(), r[1].parse().unwrap());
        let cell = &dj["distances"][mu][nu];
        match cell.as_str() {
            Some(s) => assert_eq!(s, r[2]),
            None => assert_eq!(cell.as_f64().unwrap(), r[2].parse::<f64>().unwrap()),
        }
    }
}

#[test]
fn distance_examples() {
    let v = json(&run(&["distance"], &gen(&["ngon", "5"])));
    assert_eq!(v["n"], 5);
    let rows = v["distances"].as_array().unwrap();
    let mut max = 0.0f64;
    for (mu, row) in rows.iter().enumerate() {
        let r = numbers(row);
        assert_eq!(r[mu], 0.0);
        for (nu, d) in r.iter().enumerate() {
            let cyc = ((mu as i64 - nu as i64).rem_euclid(5)).min((nu as i64 - mu as i64).rem_euclid(5));
            assert_eq!(*d, cyc as f64);
            max = max.max(*d);
        }
    }
    assert_eq!(max, 2.0);

    let o = run(&["distance"], "n 3\n0 1\n");
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let v = json(&o);
    assert_eq!(v["distances"][1][2], "inf");
    assert_eq!(v["distances"][2][2], 0);
}

#[test]
fn numeric_distance_bracket() {
    let v = json(&run(&["distance", "--numeric"], &gen(&["ngon", "6"])));
    for mu in 0..6 {
        for nu in 0..6 {
            let d = v["distances"][mu][nu].as_f64().unwrap();
            let lo = v["lower"][mu][nu].as_f64().unwrap();
            let hi = v["upper"][mu][nu].as_f64().unwrap();
            assert!(lo <= d + 1e-12 && d <= hi + 1e-12);
            assert!(hi - lo < 1e-6);
        }
    }
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "--graph", "-"], &gen(&["ngon", "3"]));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.split(' ').nth(1) == Some("PASS")), "{out}");

    let o = run(&["verify", "--graph", "-"], &gen(&["ngon", "6"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("spectra.kernel-parity PASS")));

    let o = run(&["verify", "--corrupt-wedge-sign"], "");
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).lines().any(|l| l.starts_with("hodge.metric-basis FAIL")));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bogus"], "").status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--format", "xml"], "").status.code(), Some(1));
    assert_eq!(run(&["verify", "--tol", "-1"], "").status.code(), Some(1));
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
    assert_eq!(run(&["spectrum"], "n 3\n0 1\n0 1\n").status.code(), Some(2));
    assert_eq!(run(&["spectrum"], "n 2\n0 1\n").status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--graph", "/nonexistent/graph"], "").status.code(), Some(2));
    assert_eq!(run(&["generate", "circulant", "4", "4"], "").status.code(), Some(2));
    let o = run(&["spectrum"], "n 3\n0 1\n0 1\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn potential_file_input() {
    let dir = std::env::temp_dir().join(format!("kg-potential-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.txt");
    std::fs::write(&path, "# zero everywhere but one key\n1 2 1 0 0\n").unwrap();
    let p = path.to_str().unwrap();
    // a single zero coefficient leaves L = Id
    let v = json(&run(&["spectrum", "--potential", p], &gen(&["ngon", "3"])));
    assert!(numbers(&v["eigenvalues"]).iter().all(|x| (x - 1.0).abs() < 1e-12));
    std::fs::write(&path, "0 2 1 1 0\n").unwrap();
    let o = run(&["spectrum", "--potential", p], &gen(&["ngon", "3"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mu=0, nu=2, nu'=1"));
    std::fs::remove_dir_all(&dir).unwrap();
}
