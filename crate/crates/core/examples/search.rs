//! Prints a random CWS code with a verified distance.
//!
//! cargo run --example search -- <n> <K> <min-distance> [seed] [additive]

use cws_cluster::oracle::OracleConfig;
use cws_cluster::sim::{search_random_code, seeded_rng, RandomCodeSpec};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, default: u64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let mut spec = RandomCodeSpec::new(num(0, 6) as usize, num(1, 2) as usize, num(2, 3) as usize);
    if args.get(4).is_some_and(|s| s == "additive") {
        spec = spec.additive();
    }
    let mut rng = seeded_rng(num(3, 0));
    match search_random_code(&spec, &mut rng, &OracleConfig::default()) {
        Ok(code) => print!("{}", code.to_code_file()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
