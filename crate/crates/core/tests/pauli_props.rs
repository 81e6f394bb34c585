use cws_cluster::oracle::pauli_matrix;
use cws_cluster::{BinaryVector, PauliOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

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

fn pair() -> impl Strategy<Value = (PauliOperator, PauliOperator)> {
    (1usize..=4).prop_flat_map(|n| (pauli(n), pauli(n)))
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn product_matches_matrices((a, b) in pair()) {
        let ab = a.multiply(&b).unwrap();
        prop_assert!(max_diff(&pauli_matrix(&ab), &(pauli_matrix(&a) * pauli_matrix(&b))) < 1e-12);
    }

    #[test]
    fn commutation_matches_matrices((a, b) in pair()) {
        let (ma, mb) = (pauli_matrix(&a), pauli_matrix(&b));
        let commutator = max_diff(&(&ma * &mb), &(&mb * &ma));
        prop_assert_eq!(a.commutes(&b).unwrap(), commutator < 1e-12);
    }

    #[test]
    fn dagger_matches_adjoint(a in (1usize..=4).prop_flat_map(pauli)) {
        prop_assert!(max_diff(&pauli_matrix(&a.dagger()), &pauli_matrix(&a).adjoint()) < 1e-12);
    }

    #[test]
    fn hermitian_flag_matches_matrix(a in (1usize..=4).prop_flat_map(pauli)) {
        let m = pauli_matrix(&a);
        prop_assert_eq!(a.is_hermitian(), max_diff(&m, &m.adjoint()) < 1e-12);
    }

    #[test]
    fn conjugation_matches_matrices((a, b) in pair()) {
        let conj = a.conjugated_by(&b).unwrap();
        let (ma, mb) = (pauli_matrix(&a), pauli_matrix(&b));
        prop_assert!(max_diff(&pauli_matrix(&conj), &(&mb * ma * mb.adjoint())) < 1e-12);
    }

    #[test]
    fn text_round_trip(a in (1usize..=6).prop_flat_map(pauli)) {
        let text = a.to_string();
        prop_assert_eq!(PauliOperator::parse(&text, a.num_qubits()).unwrap(), a);
    }

    #[test]
    fn multiplication_is_associative(
        (a, b, c) in (1usize..=5).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))
    ) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn x_times_z_is_minus_i_y() {
    let x = PauliOperator::parse("X1", 1).unwrap();
    let z = PauliOperator::parse("Z1", 1).unwrap();
    assert_eq!(x.multiply(&z).unwrap().to_string(), "-iY1");
}

#[test]
fn two_qubit_product_against_four_by_four() {
    let a = PauliOperator::parse("X1 Z2", 2).unwrap();
    let b = PauliOperator::parse("Z1 X2", 2).unwrap();
    let ab = a.multiply(&b).unwrap();
    assert!(max_diff(&pauli_matrix(&ab), &(pauli_matrix(&a) * pauli_matrix(&b))) < 1e-12);
    assert!(a.commutes(&b).unwrap());
}

#[test]
fn mismatched_lengths_are_rejected() {
    let a = PauliOperator::parse("X1", 2).unwrap();
    let b = PauliOperator::parse("X1", 3).unwrap();
    assert!(a.multiply(&b).is_err());
    assert!(a.commutes(&b).is_err());
    assert!(PauliOperator::parse("X4", 3).is_err());
    assert!(PauliOperator::parse("Q1", 3).is_err());
}
