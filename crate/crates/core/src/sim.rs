//! Error-injection trials and random code search.

use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channel::GraphBasisChannel;
use crate::decoder::{DecodeReport, Decoder, Strategy};
use crate::error::{Error, Result};
use crate::gf2::{gf2_basis, BinaryVector};
use crate::graph_code::{enumerate_errors, CwsCode, Graph};
use crate::oracle::{self, DenseChannel, OracleConfig};
use crate::pauli::PauliOperator;

/// Recovered states closer than this to the original count as exact.
pub const FIDELITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Dense state vector; capped by [`OracleConfig::max_qubits`].
    Dense,
    /// Sparse graph-basis simulation; any size.
    GraphBasis,
}

#[derive(Clone, Debug)]
pub struct Trial {
    pub error: PauliOperator,
    pub report: DecodeReport,
    /// `|<psi| R^dagger E |psi>|` after recovery `R`.
    pub fidelity: f64,
}

impl Trial {
    pub fn fidelity_ok(&self) -> bool {
        self.fidelity >= 1.0 - FIDELITY_TOLERANCE
    }
}

/// Normalized Gaussian amplitudes.
pub fn random_logical_state<R: Rng + ?Sized>(dimension: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dimension)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

/// Uniform over the non-identity errors of weight `<= t`.
pub fn random_error<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Option<PauliOperator> {
    let all: Vec<PauliOperator> = enumerate_errors(n, t).collect();
    all.choose(rng).cloned()
}

/// Encodes `logical`, applies `error`, decodes, applies the recovery and
/// compares with the uncorrupted state.
pub fn run_trial(
    decoder: &Decoder,
    strategy: Strategy,
    error: &PauliOperator,
    logical: &[Complex64],
    seed: u64,
    backend: Backend,
    config: &OracleConfig,
) -> Result<Trial> {
    let code = decoder.code();
    let (report, fidelity) = match backend {
        Backend::Dense => {
            let clean = oracle::code_state(code, logical, config)?;
            let mut ch = DenseChannel::new(clean.clone(), seed, config)?;
            ch.apply_pauli(error)?;
            let report = decoder.decode(strategy, &mut ch)?;
            ch.apply_pauli(&report.recovery)?;
            let f = ch.fidelity(&clean);
            (report, f)
        }
        Backend::GraphBasis => {
            let clean = GraphBasisChannel::from_code_state(code, logical, seed)?;
            let mut ch = clean.clone();
            ch.apply_pauli(error)?;
            let report = decoder.decode(strategy, &mut ch)?;
            ch.apply_pauli(&report.recovery)?;
            let f = ch.fidelity(&clean);
            (report, f)
        }
    };
    Ok(Trial {
        error: error.clone(),
        report,
        fidelity,
    })
}

/// Parameters for [`search_random_code`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomCodeSpec {
    pub n: usize,
    /// Number of codewords; a power of two when `additive`.
    pub dimension: usize,
    pub min_distance: usize,
    /// Codewords form a linear code containing zero.
    pub additive: bool,
    pub edge_probability: f64,
    pub max_attempts: usize,
}

impl RandomCodeSpec {
    pub fn new(n: usize, dimension: usize, min_distance: usize) -> Self {
        Self {
            n,
            dimension,
            min_distance,
            additive: false,
            edge_probability: 0.5,
            max_attempts: 20_000,
        }
    }

    pub fn additive(mut self) -> Self {
        self.additive = true;
        self
    }
}

fn random_codewords<R: Rng + ?Sized>(spec: &RandomCodeSpec, rng: &mut R) -> Option<Vec<BinaryVector>> {
    let n = spec.n;
    let random_word = |rng: &mut R| BinaryVector::from_bits((0..n).map(|_| rng.random_bool(0.5)));
    if spec.additive {
        let k = spec.dimension.trailing_zeros() as usize;
        let gens: Vec<BinaryVector> = (0..k).map(|_| random_word(rng)).collect();
        if k > 0 && gf2_basis(&gens).ok()?.num_rows() < k {
            return None;
        }
        Some(
            (0..spec.dimension)
                .map(|mask| {
                    let mut w = BinaryVector::zeros(n);
                    for (j, g) in gens.iter().enumerate() {
                        if (mask >> j) & 1 == 1 {
                            w.xor_assign(g);
                        }
                    }
                    w
                })
                .collect(),
        )
    } else {
        let mut words: Vec<BinaryVector> = Vec::with_capacity(spec.dimension);
        while words.len() < spec.dimension {
            let w = random_word(rng);
            if !words.contains(&w) {
                words.push(w);
            }
        }
        Some(words)
    }
}

/// Draws random graphs and codeword sets until the dense oracle confirms the
/// requested distance. The returned code carries the verified distance.
pub fn search_random_code<R: Rng + ?Sized>(
    spec: &RandomCodeSpec,
    rng: &mut R,
    config: &OracleConfig,
) -> Result<CwsCode> {
    if spec.dimension == 0 || spec.dimension > 1 << spec.n {
        return Err(Error::InvalidInput(format!(
            "cannot place {} codewords on {} qubits",
            spec.dimension, spec.n
        )));
    }
    if spec.additive && !spec.dimension.is_power_of_two() {
        return Err(Error::InvalidInput(
            "additive codes need a power-of-two dimension".into(),
        ));
    }
    config.check_state(spec.n)?;
    for _ in 0..spec.max_attempts {
        let graph = Graph::random(spec.n, spec.edge_probability, rng);
        let Some(words) = random_codewords(spec, rng) else {
            continue;
        };
        let code = CwsCode::new(graph, words, None)?;
        if let Some(d) = oracle::verify_distance(&code, spec.n, config)? {
            if d >= spec.min_distance {
                return Ok(code.with_declared_distance(Some(d)));
            }
        }
    }
    Err(Error::InvalidInput(format!(
        "no (({}, {}, >={})) code found in {} attempts",
        spec.n, spec.dimension, spec.min_distance, spec.max_attempts
    )))
}

/// A seeded generator so callers can derive per-item streams.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
