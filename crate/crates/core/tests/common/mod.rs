#![allow(dead_code)]

use std::process::{Command, Output};

pub const BIN: &str = env!("CARGO_BIN_EXE_coinkit");

/// Runs the binary, optionally pinning the rayon pool size.
pub fn coinkit(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("RAYON_NUM_THREADS", t.to_string()),
        None => cmd.env_remove("RAYON_NUM_THREADS"),
    };
    cmd.output().expect("binary runs")
}

/// One invocation of every subcommand (and every mode of the multi-mode
/// ones), each with a fixed seed where randomness is involved.
pub fn seeded_invocations() -> Vec<Vec<&'static str>> {
    let flagship = ["--lhs", "12^1000001 + 7^442", "--rhs", "143^500001 + 197"];
    vec![
        [&["eqtest"][..], &flagship, &["--seed", "01"]].concat(),
        [&["eqtest"][..], &flagship, &["--no-precheck", "--seed", "0b"]].concat(),
        vec!["eqtest", "--lhs", "(2+3)^2 - 5*5", "--rhs", "0", "--seed", "0a"],
        vec!["prime", "--test", "29111881", "--seed", "0c"],
        vec!["prime", "--test", "1000000007", "--rounds", "20", "--seed", "0c"],
        vec!["prime", "--random", "1000000", "2000000", "--seed", "0d"],
        vec!["factor", "600851475143"],
        vec!["pairwise", "--k", "10", "--seed", "2a5"],
        vec!["pairwise", "--k", "6", "--emit", "40", "--format", "text", "--seed", "2a"],
        vec!["pairwise", "--k", "4", "--verify"],
        vec!["pairwise", "--k", "3", "--verify-triple"],
        vec!["extract", "--n", "10", "--m", "4", "--input", "2cb", "--seed", "1abc"],
        vec!["prg-enum", "--n", "10", "--m", "4", "--input", "2cb"],
        vec!["keyrecover", "--key", "3a5", "--leaked", "0,2,4,6,8", "--m", "3", "--seed", "1234"],
        vec!["area", "--region", "quarter-disk", "--n", "200000", "--seed", "07"],
        vec!["area", "--region", "annulus", "--n", "100000", "--confidence", "0.99", "--seed", "07"],
        vec!["area", "--region", "box", "--n", "10", "--seed", "07"],
        vec!["poll", "--p", "0.57", "--n", "400", "--runs", "2000", "--seed", "03"],
        vec!["samplesize", "--eps", "0.05", "--delta", "0.05", "--method", "normal"],
        vec!["balance", "--tasks", "1000", "--machines", "10", "--runs", "200", "--seed", "04"],
    ]
}
