mod common;

use common::{bv, correcting_codes, five_cycle};
use cws_cluster::channel::graph_basis_action;
use cws_cluster::graph_code::{
    classical_map, enumerate_errors, enumerate_errors_with_identity, standard_form_stabilizer,
};
use cws_cluster::oracle::{self, knill_laflamme, OracleConfig};
use cws_cluster::{BinaryVector, CwsCode, Error, Graph, PauliOperator};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph(n: usize) -> impl Strategy<Value = Graph> {
    (any::<u64>(), 0.0f64..1.0).prop_map(move |(seed, p)| Graph::random(n, p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (
        proptest::collection::vec(any::<bool>(), n),
        proptest::collection::vec(any::<bool>(), n),
        0u8..4,
    )
        .prop_map(|(x, z, phase)| {
            PauliOperator::from_parts(BinaryVector::from_bits(x), BinaryVector::from_bits(z), phase).unwrap()
        })
}

proptest! {
    #[test]
    fn classical_map_is_linear(
        (g, a, b) in (1usize..=8).prop_flat_map(|n| (graph(n), pauli(n), pauli(n)))
    ) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(
            classical_map(&g, &ab).unwrap(),
            classical_map(&g, &a).unwrap().xor(&classical_map(&g, &b).unwrap())
        );
    }

    #[test]
    fn stabilizer_generators_map_to_zero(g in (1usize..=8).prop_flat_map(graph)) {
        for s in standard_form_stabilizer(&g).generators() {
            prop_assert!(classical_map(&g, s).unwrap().is_zero());
        }
    }

    #[test]
    fn graph_basis_action_matches_dense(
        (g, p, x) in (1usize..=6).prop_flat_map(|n| (graph(n), pauli(n), proptest::collection::vec(any::<bool>(), n)))
    ) {
        let cfg = OracleConfig::default();
        let x = BinaryVector::from_bits(x);
        let s = oracle::prepare_graph_state(&g, &cfg).unwrap();
        let before = oracle::apply_pauli(&PauliOperator::z_type(x.clone()), &s).unwrap();
        let dense = oracle::apply_pauli(&p, &before).unwrap();
        let (phase, y) = graph_basis_action(&g, &p, &x).unwrap();
        let i = Complex64::new(0.0, 1.0).powu(phase as u32);
        let sparse = oracle::apply_pauli(&PauliOperator::z_type(y), &s).unwrap();
        let expected = sparse.amplitudes().map(|a| a * i);
        prop_assert!((dense.amplitudes() - expected).norm() < 1e-12);
        prop_assert_eq!(classical_map(&g, &p).unwrap(), graph_basis_action(&g, &p, &BinaryVector::zeros(g.num_vertices())).unwrap().1);
    }

    #[test]
    fn code_file_round_trip(
        (g, words) in (1usize..=7).prop_flat_map(|n| (graph(n), proptest::collection::btree_set(proptest::collection::vec(any::<bool>(), n), 1..5)))
    ) {
        let words: Vec<BinaryVector> = words.into_iter().map(BinaryVector::from_bits).collect();
        let code = CwsCode::new(g, words, Some(1)).unwrap();
        prop_assert_eq!(CwsCode::parse(&code.to_code_file()).unwrap(), code);
    }
}

#[test]
fn five_cycle_examples() {
    let code = five_cycle();
    let p = |s: &str| PauliOperator::parse(s, 5).unwrap();
    assert_eq!(code.classical_map(&p("X1")).unwrap(), bv("01001"));
    assert_eq!(code.classical_map(&p("Z3")).unwrap(), bv("00100"));
    assert_eq!(code.classical_map(&p("X3")).unwrap(), bv("01010"));
    assert!(!code.degenerate(&p("Z1"), &p("Z2")).unwrap());
    assert!(code.degenerate(&p("X1"), &p("Z2 Z5")).unwrap());
    let cfg = OracleConfig::default();
    // same map, but X1 Z2 Z5 has weight d = 3 and flips the logical phase
    let e = p("X1").dagger().multiply(&p("Z2 Z5")).unwrap();
    assert!(!knill_laflamme(&code, &e, &cfg).unwrap().detectable);
    let e = p("X3").dagger().multiply(&p("X3")).unwrap();
    assert!(knill_laflamme(&code, &e, &cfg).unwrap().acts_trivially);
    let e = p("Z1").dagger().multiply(&p("Z2")).unwrap();
    assert!(!knill_laflamme(&code, &e, &cfg).unwrap().acts_trivially);
}

/// Same classical map exactly when `E1^dagger E2` acts as a scalar on the code.
#[test]
fn degeneracy_matches_trivial_action() {
    let cfg = OracleConfig::default();
    // the unentangled state makes many weight-1 errors degenerate
    let mut codes = correcting_codes();
    codes.push(common::load("trivial3.cws"));
    for code in codes {
        let n = code.num_qubits();
        let errors: Vec<PauliOperator> = enumerate_errors_with_identity(n, 1).collect();
        for a in &errors {
            for b in &errors {
                let same = code.degenerate(a, b).unwrap();
                let trivial = knill_laflamme(&code, &a.dagger().multiply(b).unwrap(), &cfg)
                    .unwrap()
                    .acts_trivially;
                assert_eq!(same, trivial, "{a} vs {b} on n={n}");
            }
        }
    }
}

/// Corrupted spaces of correctable errors with different maps are orthogonal.
#[test]
fn corrupted_spaces_are_orthogonal() {
    let cfg = OracleConfig::default();
    for code in correcting_codes() {
        let n = code.num_qubits();
        let basis = oracle::code_basis(&code, &cfg).unwrap();
        let errors: Vec<PauliOperator> = enumerate_errors_with_identity(n, 1).collect();
        let moved: Vec<Vec<_>> = errors
            .iter()
            .map(|e| basis.iter().map(|w| oracle::apply_pauli(e, w).unwrap()).collect())
            .collect();
        for (i, a) in errors.iter().enumerate() {
            for (j, b) in errors.iter().enumerate().skip(i + 1) {
                if code.degenerate(a, b).unwrap() {
                    continue;
                }
                for u in &moved[i] {
                    for v in &moved[j] {
                        assert!(u.inner(v).norm() < 1e-10, "{a} vs {b}");
                    }
                }
            }
        }
    }
}

#[test]
fn error_enumeration_sizes() {
    assert_eq!(enumerate_errors(5, 1).count(), 15);
    assert_eq!(enumerate_errors(5, 2).count(), 15 + 90);
    assert_eq!(enumerate_errors(4, 0).count(), 0);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let cases = [
        ("n=3 K=1\nedges:\n1 1\ncodewords:\n000\n", 3),
        ("n=3 K=1\nedges:\n1 2\n2 1\ncodewords:\n000\n", 4),
        ("n=3 K=1\nedges:\n1 4\ncodewords:\n000\n", 3),
        ("n=3 K=2\nedges:\ncodewords:\n000\n0010\n", 5),
        ("n=3 K=1 q=2\nedges:\ncodewords:\n000\n", 1),
        ("# comment\n\nn=3 K=2\nedges:\ncodewords:\n000\n000\n", 7),
    ];
    for (text, line) in cases {
        match CwsCode::parse(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("expected a parse error for {text:?}, got {other:?}"),
        }
    }
}
