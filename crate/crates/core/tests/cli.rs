mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::C5_HCP;
use hcma::generate::{petersen, planted_cubic};
use hcma::graph::{parse_hcp, verify_hc};
use hcma::rng::stream;
use hcma::tour::parse_tour;

fn hcma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcma"))
        .args(args)
        .env_remove("HCMA_SEED")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn solve_writes_a_verifiable_tour() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c5.hcp");
    let tour = dir.path().join("c5.tour");
    fs::write(&graph, C5_HCP).unwrap();
    let out = hcma(&["solve", path_str(&graph), "--tour-out", path_str(&tour)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("solved=true phase=dp"));
    let cycle = parse_tour(&fs::read_to_string(&tour).unwrap()).unwrap();
    assert!(verify_hc(&parse_hcp(C5_HCP).unwrap(), &cycle));

    let out = hcma(&["verify", path_str(&graph), path_str(&tour)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn memetic_path_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("cubic.hcp");
    let (g, _) = planted_cubic(300, &mut stream(1, &[]));
    fs::write(&graph, g.to_hcp("cubic")).unwrap();
    let out = hcma(&["solve", path_str(&graph), "--no-dp", "--seed", "4", "--workers", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("phase=ma"));
    assert!(stdout.contains("seed=4"));
    assert!(verify_hc(&g, &parse_tour(&stdout).unwrap()));
}

#[test]
fn unsolved_and_input_errors_use_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("petersen.hcp");
    fs::write(&graph, petersen().to_hcp("petersen")).unwrap();
    assert_eq!(hcma(&["solve", path_str(&graph)]).status.code(), Some(1));
    assert_eq!(hcma(&["solve", "/nonexistent.hcp"]).status.code(), Some(2));
    assert_eq!(hcma(&["solve", path_str(&graph), "--mutation-rate", "1.5"]).status.code(), Some(2));
    assert_eq!(hcma(&["solve", path_str(&graph), "--dp-width-cap", "99"]).status.code(), Some(2));

    let bad = dir.path().join("bad.hcp");
    fs::write(&bad, "DIMENSION : 3\nEDGE_DATA_SECTION\n1 7\n-1\n").unwrap();
    let out = hcma(&["solve", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside"));
}

#[test]
fn verify_rejects_a_non_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c5.hcp");
    let tour = dir.path().join("t.tour");
    fs::write(&graph, C5_HCP).unwrap();
    fs::write(&tour, "TOUR_SECTION\n1\n3\n2\n4\n5\n-1\n").unwrap();
    assert_eq!(hcma(&["verify", path_str(&graph), path_str(&tour)]).status.code(), Some(1));
    fs::write(&tour, "TOUR_SECTION\n1\n2\n3\n-1\n").unwrap();
    assert_eq!(hcma(&["verify", path_str(&graph), path_str(&tour)]).status.code(), Some(2));
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c5.hcp");
    fs::write(&graph, C5_HCP).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hcma"))
        .args(["solve", path_str(&graph)])
        .env("HCMA_SEED", "77")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("seed=77"));
    let out = Command::new(env!("CARGO_BIN_EXE_hcma"))
        .args(["solve", path_str(&graph), "--seed", "3"])
        .env("HCMA_SEED", "77")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("seed=3"));
}

#[test]
fn reduce_prints_tsplib_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("c5.hcp");
    fs::write(&graph, C5_HCP).unwrap();
    let sr = String::from_utf8(hcma(&["reduce", path_str(&graph), "--method", "sr"]).stdout).unwrap();
    assert!(sr.contains("EDGE_WEIGHT_FORMAT : FULL_MATRIX"));
    assert!(sr.contains("\n6 1 2 2 1\n"));
    let tc = String::from_utf8(hcma(&["reduce", path_str(&graph), "--method", "tc", "--compact"]).stdout).unwrap();
    assert!(tc.contains("\n2 1 6 1 2\n"));
    assert_eq!(hcma(&["reduce", path_str(&graph), "--method", "xx"]).status.code(), Some(2));
}

#[test]
fn decompose_prints_pace_format() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("p.hcp");
    fs::write(&graph, petersen().to_hcp("p")).unwrap();
    let out = String::from_utf8(hcma(&["decompose", path_str(&graph)]).stdout).unwrap();
    let header: Vec<&str> = out.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(&header[..2], ["s", "td"]);
    assert_eq!(header[3], "5");
    assert_eq!(header[4], "10");
    let bags: usize = header[2].parse().unwrap();
    assert_eq!(out.lines().filter(|l| l.starts_with("b ")).count(), bags);
}

#[test]
fn batch_empty_directory_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = hcma(&["batch", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "name,n,m,solved,phase,time_ms,generations,seed\n");
}

fn without_time(csv: &str) -> Vec<String> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f[5] = "_";
            f.join(",")
        })
        .collect()
}

#[test]
fn batch_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = stream(8, &[]);
    fs::write(dir.path().join("a_c5.hcp"), C5_HCP).unwrap();
    fs::write(dir.path().join("b_cubic.hcp"), planted_cubic(200, &mut rng).0.to_hcp("b")).unwrap();
    fs::write(dir.path().join("c_petersen.hcp"), petersen().to_hcp("c")).unwrap();
    fs::write(dir.path().join("d_broken.hcp"), "nonsense").unwrap();
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let csv1 = dir.path().join("run1.csv");
    let csv2 = dir.path().join("run2.csv");
    for csv in [&csv1, &csv2] {
        let out = hcma(&["batch", path_str(dir.path()), "--csv", path_str(csv), "--no-dp", "--workers", "1", "--seed", "9"]);
        assert_eq!(out.status.code(), Some(1));
    }
    let (a, b) = (fs::read_to_string(&csv1).unwrap(), fs::read_to_string(&csv2).unwrap());
    assert_eq!(without_time(&a), without_time(&b));
    let names: Vec<&str> = a.lines().skip(1).take(4).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names, ["a_c5", "b_cubic", "c_petersen", "d_broken"]);
    assert!(a.contains("d_broken,0,0,false,parse_error,"));
    assert!(a.contains("# solved 2/4"));
}
