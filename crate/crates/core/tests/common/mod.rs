#![allow(dead_code)]

use std::path::PathBuf;

use cws_cluster::{BinaryVector, CwsCode, Graph};

pub fn bv(s: &str) -> BinaryVector {
    BinaryVector::parse_bitstring(s).unwrap()
}

pub fn code_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("codes").join(name)
}

pub fn load(name: &str) -> CwsCode {
    CwsCode::load(code_path(name)).unwrap()
}

pub fn five_cycle() -> CwsCode {
    CwsCode::new(Graph::cycle(5), vec![bv("00000"), bv("11111")], Some(3)).unwrap()
}

/// Codes with distance >= 3 shipped in `codes/`.
pub fn correcting_codes() -> Vec<CwsCode> {
    [
        "five_cycle.cws",
        "six_qubit.cws",
        "six_qubit_state.cws",
        "seven_qubit.cws",
    ]
    .into_iter()
    .map(load)
    .collect()
}
