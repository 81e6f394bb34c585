//! Measurement channels: the decoder only sees `±1` outcomes.
//!
//! [`GraphBasisChannel`] keeps the state as a sparse superposition over the
//! graph basis `Z^x |s>`. Every decoder measurement is built from products of
//! graph-state stabilizers, which are diagonal in that basis, so the channel
//! simulates them exactly at any qubit count.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::BinaryVector;
use crate::graph_code::{CwsCode, Graph};
use crate::pauli::PauliOperator;
use crate::ust::MeasurementExpr;

/// Probabilities within this distance of 0 or 1 are treated as certain.
pub const DETERMINISTIC_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.sign())
    }
}

pub trait MeasurementChannel {
    fn num_qubits(&self) -> usize;

    /// Projects the hidden state onto the `+1` or `-1` space of `expr`.
    fn measure(&mut self, expr: &MeasurementExpr) -> Result<Outcome>;
}

/// Picks an outcome from `p_plus`, drawing from `rng` only when it is not
/// already decided.
pub(crate) fn choose_outcome<R: Rng>(p_plus: f64, rng: &mut R) -> Outcome {
    if p_plus >= 1.0 - DETERMINISTIC_TOLERANCE {
        Outcome::Plus
    } else if p_plus <= DETERMINISTIC_TOLERANCE {
        Outcome::Minus
    } else if rng.random::<f64>() < p_plus {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

fn i_pow(e: u8) -> Complex64 {
    match e % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `P Z^x |s> = i^phase Z^{x'} |s>`; returns `(phase, x')`.
pub fn graph_basis_action(graph: &Graph, p: &PauliOperator, x: &BinaryVector) -> Result<(u8, BinaryVector)> {
    let n = graph.num_vertices();
    if p.num_qubits() != n || x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if p.num_qubits() != n { p.num_qubits() } else { x.len() },
        });
    }
    // i^e X^u Z^{v+x} |s> = i^e (-1)^{u.(v+x)} Z^{v+x} X^u |s>,
    // and X^u |s> = (-1)^{edges inside u} Z^{sum_i u_i R_i} |s>
    let u = p.x_bits();
    let vx = p.z_bits().xor(x);
    let mut phase = p.phase_exponent();
    if u.dot(&vx) {
        phase += 2;
    }
    if graph.edges_within(u) % 2 == 1 {
        phase += 2;
    }
    let mut target = vx;
    for i in u.ones() {
        target.xor_assign(graph.neighbors(i));
    }
    Ok((phase % 4, target))
}

/// Exact sparse simulator in the graph basis.
#[derive(Clone, Debug)]
pub struct GraphBasisChannel {
    graph: Graph,
    amplitudes: BTreeMap<BinaryVector, Complex64>,
    rng: ChaCha8Rng,
}

impl GraphBasisChannel {
    pub fn new(graph: Graph, amplitudes: BTreeMap<BinaryVector, Complex64>, seed: u64) -> Result<Self> {
        let n = graph.num_vertices();
        if let Some(x) = amplitudes.keys().find(|x| x.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let mut ch = Self {
            graph,
            amplitudes,
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        ch.normalize()?;
        Ok(ch)
    }

    /// `sum_i logical[i] Z^{c_i} |s>`.
    pub fn from_code_state(code: &CwsCode, logical: &[Complex64], seed: u64) -> Result<Self> {
        if logical.len() != code.dimension() {
            return Err(Error::DimensionMismatch {
                expected: code.dimension(),
                found: logical.len(),
            });
        }
        let amplitudes = code.codewords().iter().cloned().zip(logical.iter().copied()).collect();
        Self::new(code.graph().clone(), amplitudes, seed)
    }

    pub fn amplitudes(&self) -> &BTreeMap<BinaryVector, Complex64> {
        &self.amplitudes
    }

    fn normalize(&mut self) -> Result<()> {
        self.amplitudes.retain(|_, a| a.norm_sqr() > 0.0);
        let norm: f64 = self.amplitudes.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput("zero state".into()));
        }
        for a in self.amplitudes.values_mut() {
            *a /= norm;
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        let mut next = BTreeMap::new();
        for (x, a) in &self.amplitudes {
            let (phase, y) = graph_basis_action(&self.graph, p, x)?;
            *next.entry(y).or_insert(Complex64::new(0.0, 0.0)) += a * i_pow(phase);
        }
        self.amplitudes = next;
        Ok(())
    }

    /// `<other|self>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .filter_map(|(x, a)| other.amplitudes.get(x).map(|b| b.conj() * a))
            .sum()
    }

    /// `|<other|self>|`, insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    fn stabilizes(&self, expr: &MeasurementExpr, x: &BinaryVector) -> Result<bool> {
        expr.evaluate(&mut |leaf: &PauliOperator| {
            let (phase, y) = graph_basis_action(&self.graph, leaf, x)?;
            if &y != x {
                return Err(Error::UnsupportedMeasurement(format!(
                    "leaf {leaf} is not diagonal in the graph basis"
                )));
            }
            match phase {
                0 => Ok(true),
                2 => Ok(false),
                _ => Err(Error::NotHermitian(leaf.to_string())),
            }
        })
    }
}

impl MeasurementChannel for GraphBasisChannel {
    fn num_qubits(&self) -> usize {
        self.graph.num_vertices()
    }

    fn measure(&mut self, expr: &MeasurementExpr) -> Result<Outcome> {
        expr.validate()?;
        let mut plus = Vec::with_capacity(self.amplitudes.len());
        let mut p_plus = 0.0;
        for (x, a) in &self.amplitudes {
            let s = self.stabilizes(expr, x)?;
            if s {
                p_plus += a.norm_sqr();
            }
            plus.push(s);
        }
        let outcome = choose_outcome(p_plus, &mut self.rng);
        let keep = outcome == Outcome::Plus;
        let mut flags = plus.into_iter();
        self.amplitudes.retain(|_, _| flags.next() == Some(keep));
        self.normalize()?;
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ust::additive_measurement;

    fn bv(s: &str) -> BinaryVector {
        BinaryVector::parse_bitstring(s).unwrap()
    }

    fn five_cycle() -> CwsCode {
        CwsCode::new(Graph::cycle(5), vec![bv("00000"), bv("11111")], Some(3)).unwrap()
    }

    #[test]
    fn stabilizer_generators_fix_graph_state() {
        let g = Graph::cycle(5);
        let s = crate::graph_code::standard_form_stabilizer(&g);
        let zero = BinaryVector::zeros(5);
        for gen in s.generators() {
            assert_eq!(graph_basis_action(&g, gen, &zero).unwrap(), (0, zero.clone()));
        }
    }

    #[test]
    fn x_error_maps_to_neighbor_row() {
        let g = Graph::cycle(5);
        let x1 = PauliOperator::parse("X1", 5).unwrap();
        let (_, y) = graph_basis_action(&g, &x1, &BinaryVector::zeros(5)).unwrap();
        assert_eq!(y, bv("01001"));
    }

    #[test]
    fn code_state_is_stabilized_by_code_measurement() {
        let code = five_cycle();
        let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut ch = GraphBasisChannel::from_code_state(&code, &[amp, amp], 1).unwrap();
        let m = crate::ust::UstCode::from_cws(&code).unwrap().measurement().unwrap();
        assert_eq!(ch.measure(&m).unwrap(), Outcome::Plus);
        ch.apply_pauli(&PauliOperator::parse("Z1", 5).unwrap()).unwrap();
        assert_eq!(ch.measure(&m).unwrap(), Outcome::Minus);
    }

    #[test]
    fn non_diagonal_leaf_is_rejected() {
        let code = five_cycle();
        let mut ch =
            GraphBasisChannel::from_code_state(&code, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], 1)
                .unwrap();
        let m = additive_measurement(&[PauliOperator::parse("Z1", 5).unwrap()]).unwrap();
        assert!(matches!(ch.measure(&m), Err(Error::UnsupportedMeasurement(_))));
    }

    #[test]
    fn random_outcome_projects_state() {
        // |s> + Z1|s> measured by S_1: the two branches have opposite eigenvalues
        let g = Graph::cycle(5);
        let amps = [
            (bv("00000"), Complex64::new(1.0, 0.0)),
            (bv("10000"), Complex64::new(1.0, 0.0)),
        ]
        .into_iter()
        .collect();
        let mut ch = GraphBasisChannel::new(g.clone(), amps, 7).unwrap();
        let s1 =
            MeasurementExpr::leaf(crate::graph_code::standard_form_stabilizer(&g).generators()[0].clone()).unwrap();
        let first = ch.measure(&s1).unwrap();
        assert_eq!(ch.amplitudes().len(), 1);
        for _ in 0..5 {
            assert_eq!(ch.measure(&s1).unwrap(), first);
        }
    }
}
