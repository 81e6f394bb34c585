//! Dense state-vector reference simulator for small qubit counts.
//!
//! Everything here works on explicit `2^n` amplitude vectors and
//! `2^n x 2^n` matrices, so it is slow but shares no algebra with the
//! symplectic code paths it is used to check. Qubit `q` is bit `q` of a
//! basis-state index.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::channel::{choose_outcome, MeasurementChannel, Outcome};
use crate::error::{Error, Result};
use crate::graph_code::{enumerate_errors, CwsCode, Graph};
use crate::pauli::{PauliLetter, PauliOperator};
use crate::ust::{MeasurementExpr, UstCode};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Largest state vector, counting ancillas.
    pub max_qubits: usize,
    /// Largest dense operator matrix.
    pub max_matrix_qubits: usize,
    pub state_tol: f64,
    pub scalar_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_qubits: 12,
            max_matrix_qubits: 10,
            state_tol: 1e-10,
            scalar_tol: 1e-8,
        }
    }
}

impl OracleConfig {
    pub fn check_state(&self, n: usize) -> Result<()> {
        if n > self.max_qubits {
            return Err(Error::SizeCap {
                qubits: n,
                cap: self.max_qubits,
            });
        }
        Ok(())
    }

    pub fn check_matrix(&self, n: usize) -> Result<()> {
        let cap = self.max_matrix_qubits.min(self.max_qubits);
        if n > cap {
            return Err(Error::SizeCap { qubits: n, cap });
        }
        Ok(())
    }
}

/// Largest entry modulus.
fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn i_pow(e: usize) -> Complex64 {
    match e % 4 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => -ONE,
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amplitudes: DVector<Complex64>,
}

impl DenseState {
    pub fn new(n: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: amplitudes.len(),
            });
        }
        Ok(Self { n, amplitudes })
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amplitudes = DVector::from_element(1 << n, ZERO);
        amplitudes[index] = ONE;
        Self { n, amplitudes }
    }

    /// Haar-like random unit vector.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let amplitudes = DVector::from_fn(1 << n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let mut s = Self { n, amplitudes };
        s.normalize();
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm();
        if norm > 0.0 {
            self.amplitudes.unscale_mut(norm);
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|<self|other>|`, blind to global phase.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// Componentwise distance, sensitive to phase.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.amplitudes - &other.amplitudes).norm()
    }

    /// `|a> (x) |self>` with the extra qubits above the existing ones.
    pub fn tensor_ancillas(&self, ancillas: usize, pattern: usize) -> Self {
        let dim = 1 << self.n;
        let mut amplitudes = DVector::from_element(dim << ancillas, ZERO);
        amplitudes.rows_mut(pattern * dim, dim).copy_from(&self.amplitudes);
        Self {
            n: self.n + ancillas,
            amplitudes,
        }
    }

    /// The unnormalized system vector multiplying ancilla pattern `pattern`
    /// when the top `ancillas` qubits are ancillas.
    pub fn ancilla_branch(&self, ancillas: usize, pattern: usize) -> Self {
        let n = self.n - ancillas;
        let dim = 1 << n;
        Self {
            n,
            amplitudes: self.amplitudes.rows(pattern * dim, dim).into_owned(),
        }
    }

    pub fn apply_matrix(&self, m: &DMatrix<Complex64>) -> Result<Self> {
        if m.ncols() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: m.ncols(),
            });
        }
        Ok(Self {
            n: self.n,
            amplitudes: m * &self.amplitudes,
        })
    }
}

/// Matrix of a Pauli as a Kronecker product of its single-qubit letters.
pub fn pauli_matrix(p: &PauliOperator) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, i_pow(p.letter_phase() as usize));
    for letter in p.letters() {
        let local = match letter {
            PauliLetter::I => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
            PauliLetter::X => DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            PauliLetter::Y => DMatrix::from_row_slice(2, 2, &[ZERO, -i_pow(1), i_pow(1), ZERO]),
            PauliLetter::Z => DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        };
        m = local.kronecker(&m);
    }
    m
}

/// `P|psi>` by permuting amplitudes: `Z^z` phases first, then `X^x` flips.
pub fn apply_pauli(p: &PauliOperator, state: &DenseState) -> Result<DenseState> {
    if p.num_qubits() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            found: p.num_qubits(),
        });
    }
    let x = p.x_bits().to_u64() as usize;
    let z = p.z_bits().to_u64() as usize;
    let global = i_pow(p.phase_exponent() as usize);
    let mut out = DVector::from_element(state.amplitudes.len(), ZERO);
    for (b, a) in state.amplitudes.iter().enumerate() {
        let sign = if (b & z).count_ones() % 2 == 1 { -global } else { global };
        out[b ^ x] += sign * a;
    }
    Ok(DenseState {
        n: state.n,
        amplitudes: out,
    })
}

/// `|+>^n` followed by a controlled-Z on every edge.
pub fn prepare_graph_state(graph: &Graph, config: &OracleConfig) -> Result<DenseState> {
    let n = graph.num_vertices();
    config.check_state(n)?;
    let scale = (1u64 << n) as f64;
    let mut amplitudes = DVector::from_element(1 << n, Complex64::new(1.0 / scale.sqrt(), 0.0));
    for (i, j) in graph.edges() {
        for (b, a) in amplitudes.iter_mut().enumerate() {
            if (b >> i) & 1 == 1 && (b >> j) & 1 == 1 {
                *a = -*a;
            }
        }
    }
    Ok(DenseState { n, amplitudes })
}

/// `|w_i> = Z^{c_i} |s>`.
pub fn code_basis(code: &CwsCode, config: &OracleConfig) -> Result<Vec<DenseState>> {
    let s = prepare_graph_state(code.graph(), config)?;
    code.codewords()
        .iter()
        .map(|c| apply_pauli(&PauliOperator::z_type(c.clone()), &s))
        .collect()
}

/// `sum_i logical[i] |w_i>`, normalized.
pub fn code_state(code: &CwsCode, logical: &[Complex64], config: &OracleConfig) -> Result<DenseState> {
    if logical.len() != code.dimension() {
        return Err(Error::DimensionMismatch {
            expected: code.dimension(),
            found: logical.len(),
        });
    }
    let basis = code_basis(code, config)?;
    let mut amplitudes = DVector::from_element(1 << code.num_qubits(), ZERO);
    for (w, a) in basis.iter().zip(logical) {
        amplitudes.axpy(*a, &w.amplitudes, ONE);
    }
    let mut s = DenseState {
        n: code.num_qubits(),
        amplitudes,
    };
    if s.norm() == 0.0 {
        return Err(Error::InvalidInput("zero logical state".into()));
    }
    s.normalize();
    Ok(s)
}

/// Hermitian idempotent matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseProjector {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl DenseProjector {
    /// Checks `P = P^dagger` and `P^2 = P` to `tol`.
    pub fn new(n: usize, matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if matrix.nrows() != 1 << n || matrix.ncols() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: matrix.nrows(),
            });
        }
        if max_abs(&(&matrix - matrix.adjoint())) > tol {
            return Err(Error::InvalidCode("projector is not Hermitian".into()));
        }
        if max_abs(&(&matrix * &matrix - &matrix)) > tol {
            return Err(Error::InvalidCode("projector is not idempotent".into()));
        }
        Ok(Self { n, matrix })
    }

    fn unchecked(n: usize, matrix: DMatrix<Complex64>) -> Self {
        Self { n, matrix }
    }

    pub fn identity(n: usize) -> Self {
        Self::unchecked(n, DMatrix::identity(1 << n, 1 << n))
    }

    pub fn zero(n: usize) -> Self {
        Self::unchecked(n, DMatrix::from_element(1 << n, 1 << n, ZERO))
    }

    /// `(I + P) / 2` for a Hermitian Pauli.
    pub fn from_pauli(p: &PauliOperator) -> Result<Self> {
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        let dim = 1 << p.num_qubits();
        let m = (DMatrix::identity(dim, dim) + pauli_matrix(p)).scale(0.5);
        Ok(Self::unchecked(p.num_qubits(), m))
    }

    /// `sum |v><v|` over orthonormal `vectors`.
    pub fn from_orthonormal(n: usize, vectors: &[DenseState], tol: f64) -> Result<Self> {
        let mut m = DMatrix::from_element(1 << n, 1 << n, ZERO);
        for v in vectors {
            m += &v.amplitudes * v.amplitudes.adjoint();
        }
        Self::new(n, m, tol)
    }

    /// Projector onto the `+1` space of a measurement `M`.
    pub fn from_measurement_operator(n: usize, m: &DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let dim = 1 << n;
        Self::new(n, (DMatrix::identity(dim, dim) + m).scale(0.5), tol)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Number of eigenvalues above one half.
    pub fn rank(&self) -> usize {
        self.spectrum().iter().filter(|&&e| e > 0.5).count()
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// `I - P`.
    pub fn complement(&self) -> Self {
        let dim = self.matrix.nrows();
        Self::unchecked(self.n, DMatrix::identity(dim, dim) - &self.matrix)
    }

    /// `M = 2P - I`.
    pub fn measurement_operator(&self) -> DMatrix<Complex64> {
        let dim = self.matrix.nrows();
        self.matrix.scale(2.0) - DMatrix::identity(dim, dim)
    }

    pub fn commutes_with(&self, other: &Self, tol: f64) -> bool {
        max_abs(&(&self.matrix * &other.matrix - &other.matrix * &self.matrix)) <= tol
    }

    /// `P1 P0`; the inputs must commute.
    pub fn and(&self, other: &Self, tol: f64) -> Result<Self> {
        if !self.commutes_with(other, tol) {
            return Err(Error::NonCommuting("left projector".into(), "right projector".into()));
        }
        Ok(Self::unchecked(self.n, &self.matrix * &other.matrix))
    }

    /// `P1 + P0 - 2 P1 P0`; the inputs must commute.
    pub fn xor(&self, other: &Self, tol: f64) -> Result<Self> {
        if !self.commutes_with(other, tol) {
            return Err(Error::NonCommuting("left projector".into(), "right projector".into()));
        }
        let prod = &self.matrix * &other.matrix;
        Ok(Self::unchecked(self.n, &self.matrix + &other.matrix - prod.scale(2.0)))
    }

    pub fn max_difference(&self, other: &Self) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    pub fn apply(&self, state: &DenseState) -> Result<DenseState> {
        state.apply_matrix(&self.matrix)
    }

    /// Writes `index,eigenvalue` rows.
    pub fn write_spectrum_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "eigenvalue"])
            .map_err(|e| Error::Io(e.to_string()))?;
        for (i, e) in self.spectrum().iter().enumerate() {
            w.write_record([i.to_string(), format!("{e:.12}")])
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `P_Q = sum_i |w_i><w_i|`.
pub fn code_projector(code: &CwsCode, config: &OracleConfig) -> Result<DenseProjector> {
    config.check_matrix(code.num_qubits())?;
    let basis = code_basis(code, config)?;
    let p = DenseProjector::from_orthonormal(code.num_qubits(), &basis, config.state_tol)?;
    if (p.trace() - code.dimension() as f64).abs() > config.state_tol {
        return Err(Error::InvalidCode(format!(
            "projector trace {} differs from K = {}",
            p.trace(),
            code.dimension()
        )));
    }
    Ok(p)
}

/// Projector onto the span of `g t_j |s>` over all group elements `g` and
/// translations `t_j`.
pub fn ust_projector(ust: &UstCode, config: &OracleConfig) -> Result<DenseProjector> {
    let n = ust.num_qubits();
    config.check_matrix(n)?;
    let s = prepare_graph_state(ust.graph(), config)?;
    let k = ust.group_rank();
    let mut vectors = Vec::with_capacity(ust.num_translations() << k);
    for t in ust.translations() {
        for mask in 0..(1usize << k) {
            let mut op = t.clone();
            for (j, g) in ust.group_generators().iter().enumerate() {
                if (mask >> j) & 1 == 1 {
                    op = g.multiply(&op)?;
                }
            }
            vectors.push(apply_pauli(&op, &s)?);
        }
    }
    DenseProjector::from_orthonormal(n, &vectors, config.state_tol)
}

/// Projector of a measurement expression built from the projector algebra.
pub fn expr_projector(expr: &MeasurementExpr, n: usize, config: &OracleConfig) -> Result<DenseProjector> {
    config.check_matrix(n)?;
    let tol = config.state_tol;
    match expr {
        MeasurementExpr::Leaf(p) => {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.num_qubits(),
                });
            }
            DenseProjector::from_pauli(p)
        }
        MeasurementExpr::And(children) => {
            let mut acc = DenseProjector::identity(n);
            for c in children {
                acc = acc.and(&expr_projector(c, n, config)?, tol)?;
            }
            Ok(acc)
        }
        MeasurementExpr::Xor(children) => {
            let mut acc = DenseProjector::zero(n);
            for c in children {
                acc = acc.xor(&expr_projector(c, n, config)?, tol)?;
            }
            Ok(acc)
        }
    }
}

/// `M_expr |psi>` without forming matrices, via `M_AND = 2 prod P - I` and
/// `M_XOR = (-1)^{L-1} prod M_j`.
fn apply_expr_measurement(expr: &MeasurementExpr, state: &DenseState) -> Result<DenseState> {
    let p = apply_expr_projector(expr, state)?;
    Ok(DenseState {
        n: state.n,
        amplitudes: p.amplitudes.scale(2.0) - &state.amplitudes,
    })
}

/// `P_expr |psi>` without forming matrices.
pub fn apply_expr_projector(expr: &MeasurementExpr, state: &DenseState) -> Result<DenseState> {
    match expr {
        MeasurementExpr::Leaf(p) => {
            let moved = apply_pauli(p, state)?;
            Ok(DenseState {
                n: state.n,
                amplitudes: (&state.amplitudes + moved.amplitudes).scale(0.5),
            })
        }
        MeasurementExpr::And(children) => {
            let mut v = state.clone();
            for c in children {
                v = apply_expr_projector(c, &v)?;
            }
            Ok(v)
        }
        MeasurementExpr::Xor(children) => {
            if children.is_empty() {
                return Ok(DenseState {
                    n: state.n,
                    amplitudes: DVector::from_element(state.amplitudes.len(), ZERO),
                });
            }
            let mut v = state.clone();
            for c in children {
                v = apply_expr_measurement(c, &v)?;
            }
            if children.len() % 2 == 0 {
                v.amplitudes.neg_mut();
            }
            Ok(DenseState {
                n: state.n,
                amplitudes: (&state.amplitudes + v.amplitudes).scale(0.5),
            })
        }
    }
}

/// Probability of `+1` when measuring `expr` on `state`.
pub fn plus_probability(expr: &MeasurementExpr, state: &DenseState) -> Result<f64> {
    Ok(apply_expr_projector(expr, state)?.amplitudes.norm_squared())
}

/// Born-rule measurement with projection and renormalization.
pub fn measure<R: Rng>(expr: &MeasurementExpr, state: &DenseState, rng: &mut R) -> Result<(Outcome, DenseState)> {
    expr.validate()?;
    let projected = apply_expr_projector(expr, state)?;
    let p_plus = projected.amplitudes.norm_squared() / state.amplitudes.norm_squared();
    let outcome = choose_outcome(p_plus, rng);
    let mut post = match outcome {
        Outcome::Plus => projected,
        Outcome::Minus => DenseState {
            n: state.n,
            amplitudes: &state.amplitudes - projected.amplitudes,
        },
    };
    post.normalize();
    Ok((outcome, post))
}

/// Measurement channel backed by a dense state vector.
#[derive(Clone, Debug)]
pub struct DenseChannel {
    state: DenseState,
    rng: ChaCha8Rng,
}

impl DenseChannel {
    pub fn new(state: DenseState, seed: u64, config: &OracleConfig) -> Result<Self> {
        config.check_state(state.n)?;
        Ok(Self {
            state,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn state(&self) -> &DenseState {
        &self.state
    }

    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.state = apply_pauli(p, &self.state)?;
        Ok(())
    }

    pub fn fidelity(&self, other: &DenseState) -> f64 {
        self.state.fidelity(other)
    }
}

impl MeasurementChannel for DenseChannel {
    fn num_qubits(&self) -> usize {
        self.state.n
    }

    fn measure(&mut self, expr: &MeasurementExpr) -> Result<Outcome> {
        let (outcome, post) = measure(expr, &self.state, &mut self.rng)?;
        self.state = post;
        Ok(outcome)
    }
}

/// Result of a Knill-Laflamme test `P E P = c P`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KnillLaflamme {
    pub constant_re: f64,
    pub constant_im: f64,
    /// Frobenius norm of `A - cI` for `A_ij = <w_i|E|w_j>`.
    pub residual: f64,
    pub detectable: bool,
    /// Detectable with `|c| = 1`: `E` is a scalar on the code.
    pub acts_trivially: bool,
}

pub fn knill_laflamme(code: &CwsCode, e: &PauliOperator, config: &OracleConfig) -> Result<KnillLaflamme> {
    let basis = code_basis(code, config)?;
    knill_laflamme_with_basis(&basis, e, config)
}

fn knill_laflamme_with_basis(basis: &[DenseState], e: &PauliOperator, config: &OracleConfig) -> Result<KnillLaflamme> {
    let k = basis.len();
    let moved: Vec<DenseState> = basis.iter().map(|w| apply_pauli(e, w)).collect::<Result<_>>()?;
    let a = DMatrix::from_fn(k, k, |i, j| basis[i].inner(&moved[j]));
    let c = a.trace() / k as f64;
    let residual = (a - DMatrix::identity(k, k).scale(1.0) * c).norm();
    let detectable = residual < config.scalar_tol;
    Ok(KnillLaflamme {
        constant_re: c.re,
        constant_im: c.im,
        residual,
        detectable,
        acts_trivially: detectable && (c.norm() - 1.0).abs() < config.scalar_tol,
    })
}

pub fn knill_laflamme_detectable(code: &CwsCode, e: &PauliOperator, config: &OracleConfig) -> Result<bool> {
    Ok(knill_laflamme(code, e, config)?.detectable)
}

/// Code distance by enumerating errors by weight, up to `max_weight`.
///
/// For `K >= 2` this is the smallest weight of an undetectable error. A
/// single state (`K = 1`) detects everything, so there it is the smallest
/// weight of an error acting as a scalar on the state.
pub fn verify_distance(code: &CwsCode, max_weight: usize, config: &OracleConfig) -> Result<Option<usize>> {
    let basis = code_basis(code, config)?;
    let n = code.num_qubits();
    let single = code.dimension() == 1;
    for w in 1..=max_weight.min(n) {
        for e in enumerate_errors(n, w).filter(|e| e.weight() == w) {
            let kl = knill_laflamme_with_basis(&basis, &e, config)?;
            if (single && kl.acts_trivially) || (!single && !kl.detectable) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Random pair of commuting projectors: random diagonal 0/1 patterns in a
/// shared random unitary frame.
pub fn random_commuting_projectors<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (DenseProjector, DenseProjector) {
    let dim = 1 << n;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let u = g.qr().q();
    let diag = |rng: &mut R| {
        let d = DVector::from_fn(dim, |_, _| if rng.random_bool(0.5) { ONE } else { ZERO });
        &u * DMatrix::from_diagonal(&d) * u.adjoint()
    };
    let p1 = diag(rng);
    let p0 = diag(rng);
    (DenseProjector::unchecked(n, p1), DenseProjector::unchecked(n, p0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigCircuit {
    And,
    Xor,
}

/// Joint ancilla+system states after each gate group.
#[derive(Clone, Debug)]
pub struct CircuitRun {
    pub stages: Vec<(String, DenseState)>,
    pub ancillas: usize,
}

impl CircuitRun {
    pub fn final_state(&self) -> &DenseState {
        &self.stages.last().expect("circuit has stages").1
    }

    pub fn stage(&self, name: &str) -> Option<&DenseState> {
        self.stages.iter().find(|(s, _)| s == name).map(|(_, st)| st)
    }
}

/// Gate-level simulator on `n` system qubits plus ancillas stacked above them.
struct Register {
    n: usize,
    state: DenseState,
}

impl Register {
    fn hadamard(&mut self, q: usize) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bit = 1 << q;
        let amps = &mut self.state.amplitudes;
        for b in 0..amps.len() {
            if b & bit == 0 {
                let (a0, a1) = (amps[b], amps[b | bit]);
                amps[b] = (a0 + a1) * h;
                amps[b | bit] = (a0 - a1) * h;
            }
        }
    }

    fn not(&mut self, q: usize) {
        let bit = 1 << q;
        let amps = &mut self.state.amplitudes;
        for b in 0..amps.len() {
            if b & bit == 0 {
                amps.swap_rows(b, b | bit);
            }
        }
    }

    fn toffoli(&mut self, c1: usize, c2: usize, target: usize) {
        let (m1, m2, bit) = (1 << c1, 1 << c2, 1 << target);
        let amps = &mut self.state.amplitudes;
        for b in 0..amps.len() {
            if b & m1 != 0 && b & m2 != 0 && b & bit == 0 {
                amps.swap_rows(b, b | bit);
            }
        }
    }

    /// Applies `u` to the system qubits where ancilla `control` is 1.
    fn controlled(&mut self, control: usize, u: &DMatrix<Complex64>) {
        let dim = 1 << self.n;
        let blocks = self.state.amplitudes.len() / dim;
        for block in 0..blocks {
            if (block << self.n) & (1 << control) != 0 {
                let mut rows = self.state.amplitudes.rows_mut(block * dim, dim);
                let next = u * &rows;
                rows.copy_from(&next);
            }
        }
    }

    /// `H; controlled-M; H` on one ancilla: `|0>P + |1>Q` from `|0>`.
    fn project_onto(&mut self, ancilla: usize, m: &DMatrix<Complex64>) {
        self.hadamard(ancilla);
        self.controlled(ancilla, m);
        self.hadamard(ancilla);
    }
}

/// Runs the ancilla circuit for `M_1 AND M_0` or `M_1 XOR M_0` on `psi`.
///
/// AND uses three ancillas `a1 a2 a3` (qubits `n, n+1, n+2`) and ends in
/// `|1>_{a3} P1 P0 |psi> + |0>_{a3} (I - P1 P0) |psi>` with `a1 a2` back in
/// `|00>`. XOR uses one ancilla and ends in
/// `|1>(Q1 P0 + P1 Q0)|psi> + |0>(P1 P0 + Q1 Q0)|psi>`.
pub fn simulate_fig_circuit(
    which: FigCircuit,
    p1: &DenseProjector,
    p0: &DenseProjector,
    psi: &DenseState,
    config: &OracleConfig,
) -> Result<CircuitRun> {
    let n = psi.n;
    if p1.n != n || p0.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if p1.n != n { p1.n } else { p0.n },
        });
    }
    if !p1.commutes_with(p0, config.state_tol) {
        return Err(Error::NonCommuting("P1".into(), "P0".into()));
    }
    let ancillas = match which {
        FigCircuit::And => 3,
        FigCircuit::Xor => 1,
    };
    config.check_state(n + ancillas)?;
    let m1 = p1.measurement_operator();
    let m0 = p0.measurement_operator();
    let mut reg = Register {
        n,
        state: psi.tensor_ancillas(ancillas, 0),
    };
    let mut stages = Vec::new();
    match which {
        FigCircuit::And => {
            let (a1, a2, a3) = (n, n + 1, n + 2);
            reg.project_onto(a1, &m1);
            stages.push(("a".to_string(), reg.state.clone()));
            reg.project_onto(a2, &m0);
            stages.push(("b".to_string(), reg.state.clone()));
            reg.not(a1);
            reg.not(a2);
            reg.toffoli(a1, a2, a3);
            reg.not(a1);
            reg.not(a2);
            stages.push(("c".to_string(), reg.state.clone()));
            reg.project_onto(a2, &m0);
            reg.project_onto(a1, &m1);
            stages.push(("f".to_string(), reg.state.clone()));
        }
        FigCircuit::Xor => {
            let a = n;
            reg.hadamard(a);
            reg.controlled(a, &m1);
            reg.controlled(a, &m0);
            reg.hadamard(a);
            stages.push(("f".to_string(), reg.state.clone()));
        }
    }
    Ok(CircuitRun { stages, ancillas })
}

/// Ancilla pattern flagging the `+1` outcome at the end of a circuit.
pub fn accept_pattern(which: FigCircuit) -> usize {
    match which {
        // a3 = 1 with a1 = a2 = 0
        FigCircuit::And => 0b100,
        FigCircuit::Xor => 0b1,
    }
}

/// The operator the circuit applies on its accepting branch, assembled
/// column by column from runs on computational basis inputs.
pub fn circuit_projector(
    which: FigCircuit,
    p1: &DenseProjector,
    p0: &DenseProjector,
    config: &OracleConfig,
) -> Result<DMatrix<Complex64>> {
    let n = p1.n;
    let dim = 1 << n;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        let run = simulate_fig_circuit(which, p1, p0, &DenseState::basis(n, col), config)?;
        let branch = run.final_state().ancilla_branch(run.ancillas, accept_pattern(which));
        m.set_column(col, &branch.amplitudes);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BinaryVector;
    use crate::graph_code::standard_form_stabilizer;

    fn bv(s: &str) -> BinaryVector {
        BinaryVector::parse_bitstring(s).unwrap()
    }

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn single_vertex_is_plus_state() {
        let s = prepare_graph_state(&Graph::empty(1), &cfg()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes[0].re - h).abs() < 1e-12 && (s.amplitudes[1].re - h).abs() < 1e-12);
    }

    #[test]
    fn edge_state_has_one_negative_amplitude() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let s = prepare_graph_state(&g, &cfg()).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (a, e) in s.amplitudes.iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn cycle_state_fixed_by_generators() {
        let g = Graph::cycle(5);
        let s = prepare_graph_state(&g, &cfg()).unwrap();
        for gen in standard_form_stabilizer(&g).generators() {
            let moved = s.apply_matrix(&pauli_matrix(gen)).unwrap();
            assert!(moved.distance(&s) < 1e-12);
        }
    }

    #[test]
    fn matrix_and_permutation_routes_agree() {
        let p = PauliOperator::parse("-iY1 X2 Z3", 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = DenseState::random(3, &mut rng);
        let a = psi.apply_matrix(&pauli_matrix(&p)).unwrap();
        let b = apply_pauli(&p, &psi).unwrap();
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn five_cycle_projector_rank_two() {
        let code = CwsCode::new(Graph::cycle(5), vec![bv("00000"), bv("11111")], Some(3)).unwrap();
        let p = code_projector(&code, &cfg()).unwrap();
        assert_eq!(p.rank(), 2);
        assert!((p.trace() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn five_cycle_distance() {
        let code = CwsCode::new(Graph::cycle(5), vec![bv("00000"), bv("11111")], Some(3)).unwrap();
        assert_eq!(verify_distance(&code, 5, &cfg()).unwrap(), Some(3));
        let state = CwsCode::new(Graph::cycle(5), vec![bv("00000")], None).unwrap();
        assert_eq!(verify_distance(&state, 5, &cfg()).unwrap(), Some(3));
    }

    #[test]
    fn empty_graph_single_state_distance_one() {
        let code = CwsCode::new(Graph::empty(3), vec![bv("000")], None).unwrap();
        assert_eq!(verify_distance(&code, 3, &cfg()).unwrap(), Some(1));
    }

    #[test]
    fn identity_is_detectable_with_unit_constant() {
        let code = CwsCode::new(Graph::cycle(5), vec![bv("00000"), bv("11111")], Some(3)).unwrap();
        let kl = knill_laflamme(&code, &PauliOperator::identity(5), &cfg()).unwrap();
        assert!(kl.detectable && kl.acts_trivially);
        assert!((kl.constant_re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_and_circuit() {
        let psi = DenseState::random(1, &mut ChaCha8Rng::seed_from_u64(2));
        let id = DenseProjector::identity(1);
        let run = simulate_fig_circuit(FigCircuit::And, &id, &id, &psi, &cfg()).unwrap();
        // ancilla pattern a3=1, a1=a2=0 is 0b100
        let branch = run.final_state().ancilla_branch(3, 0b100);
        assert!(branch.distance(&psi) < 1e-12);
    }

    #[test]
    fn expr_routes_agree() {
        let code = CwsCode::new(Graph::cycle(5), vec![bv("00000"), bv("11111")], Some(3)).unwrap();
        let m = UstCode::from_cws(&code).unwrap().measurement().unwrap();
        let p = expr_projector(&m, 5, &cfg()).unwrap();
        let psi = DenseState::random(5, &mut ChaCha8Rng::seed_from_u64(4));
        assert!(
            p.apply(&psi)
                .unwrap()
                .distance(&apply_expr_projector(&m, &psi).unwrap())
                < 1e-12
        );
        assert!(p.max_difference(&code_projector(&code, &cfg()).unwrap()) < 1e-12);
    }

    #[test]
    fn size_cap_is_an_error() {
        let small = OracleConfig {
            max_qubits: 4,
            ..OracleConfig::default()
        };
        assert!(matches!(
            prepare_graph_state(&Graph::cycle(5), &small),
            Err(Error::SizeCap { qubits: 5, cap: 4 })
        ));
    }

    #[test]
    fn spectrum_csv_has_header_and_rows() {
        let mut out = Vec::new();
        DenseProjector::identity(1).write_spectrum_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("index,eigenvalue"));
    }
}
