//! Drive the report pipeline from code: the same JSON and CSV files the
//! `wavestab` binary writes, here into a temporary directory.

use clap::Parser;
use wavestab::cli::{run, Cli};

fn main() -> wavestab::Result<()> {
    let dir = std::env::temp_dir().join("wavestab-reports");
    let out = dir.to_str().expect("utf-8 temp path");
    for args in [
        vec!["profile", "--model", "kgz", "--c", "0.5", "--N", "256"],
        vec!["index", "--model", "kgz", "--c", "0.5", "--N", "256", "--trace"],
        vec!["scan", "--model", "boussinesq", "--p", "3", "--c-lo", "0.6", "--c-hi", "0.8", "--dc", "0.05", "--N", "256", "--no-roots"],
    ] {
        let mut full = vec!["wavestab"];
        full.extend(args);
        full.extend(["--out", out]);
        run(Cli::parse_from(full))?;
    }
    for name in ["index.json", "scan.json", "scan.csv"] {
        println!("== {name}");
        print!("{}", std::fs::read_to_string(dir.join(name))?);
    }
    Ok(())
}
