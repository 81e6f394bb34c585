//! Union-stabilizer codes and the AND/XOR measurement calculus.
//!
//! A USt code is spanned by the translates `t_j Q_0` of an additive code
//! `Q_0 = span{ g |s> : g in <g_1..g_k> }`. Its projective measurement is the
//! XOR over translations of the AND over the translated code-stabilizer
//! generators `t_j G_i t_j^dagger`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{gf2_basis, gf2_solve, BinaryMatrix, BinaryVector};
use crate::graph_code::{classical_map, standard_form_stabilizer, symplectic_row, CwsCode, Graph, WordStabilizer};
use crate::pauli::PauliOperator;

/// Two-qubit gates charged for one Toffoli.
pub const TOFFOLI_TWO_QUBIT_COST: u64 = 6;

/// XOR-of-AND tree over commuting Hermitian Pauli measurements.
///
/// Build through [`MeasurementExpr::leaf`], [`MeasurementExpr::and`] and
/// [`MeasurementExpr::xor`], which check the invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeasurementExpr {
    Leaf(PauliOperator),
    And(Vec<MeasurementExpr>),
    Xor(Vec<MeasurementExpr>),
}

impl MeasurementExpr {
    pub fn leaf(p: PauliOperator) -> Result<Self> {
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        Ok(MeasurementExpr::Leaf(p))
    }

    pub fn and(children: Vec<MeasurementExpr>) -> Result<Self> {
        let e = MeasurementExpr::And(children);
        e.validate()?;
        Ok(e)
    }

    pub fn xor(children: Vec<MeasurementExpr>) -> Result<Self> {
        let e = MeasurementExpr::Xor(children);
        e.validate()?;
        Ok(e)
    }

    /// Measurement whose stabilized space is the whole Hilbert space.
    pub fn trivial() -> Self {
        MeasurementExpr::And(Vec::new())
    }

    pub fn leaves(&self) -> Vec<&PauliOperator> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a PauliOperator>) {
        match self {
            MeasurementExpr::Leaf(p) => out.push(p),
            MeasurementExpr::And(c) | MeasurementExpr::Xor(c) => c.iter().for_each(|e| e.collect_leaves(out)),
        }
    }

    /// Qubit count of the leaves, `None` when there are none.
    pub fn num_qubits(&self) -> Option<usize> {
        self.leaves().first().map(|p| p.num_qubits())
    }

    /// Checks that leaves are Hermitian, act on the same qubits and pairwise commute.
    pub fn validate(&self) -> Result<()> {
        let leaves = self.leaves();
        for (i, a) in leaves.iter().enumerate() {
            if !a.is_hermitian() {
                return Err(Error::NotHermitian(a.to_string()));
            }
            for b in &leaves[..i] {
                if !a.commutes(b)? {
                    return Err(Error::NonCommuting(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(())
    }

    /// Replaces every leaf `L` by `by L by^dagger`.
    pub fn conjugated(&self, by: &PauliOperator) -> Result<Self> {
        Ok(match self {
            MeasurementExpr::Leaf(p) => MeasurementExpr::Leaf(p.conjugated_by(by)?),
            MeasurementExpr::And(c) => MeasurementExpr::And(c.iter().map(|e| e.conjugated(by)).collect::<Result<_>>()?),
            MeasurementExpr::Xor(c) => MeasurementExpr::Xor(c.iter().map(|e| e.conjugated(by)).collect::<Result<_>>()?),
        })
    }

    /// Whether every eigenvector `v` common to the leaves lies in the
    /// stabilized space, given the leaf eigenvalues `+1 -> true`.
    pub fn evaluate<F>(&self, leaf_plus: &mut F) -> Result<bool>
    where
        F: FnMut(&PauliOperator) -> Result<bool>,
    {
        match self {
            MeasurementExpr::Leaf(p) => leaf_plus(p),
            MeasurementExpr::And(c) => {
                for e in c {
                    if !e.evaluate(leaf_plus)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            MeasurementExpr::Xor(c) => {
                let mut parity = false;
                for e in c {
                    parity ^= e.evaluate(leaf_plus)?;
                }
                Ok(parity)
            }
        }
    }

    /// s-expression text, e.g. `(xor (and "X1 Z2" "Z1 X2") (and ...))`.
    pub fn to_sexpr(&self) -> String {
        self.to_string()
    }

    pub fn parse_sexpr(text: &str, n: usize) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut pos = 0;
        let expr = parse_node(&tokens, &mut pos, n)?;
        if pos != tokens.len() {
            return Err(sexpr_error("trailing input after expression"));
        }
        expr.validate()?;
        Ok(expr)
    }
}

impl fmt::Display for MeasurementExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasurementExpr::Leaf(p) => write!(f, "\"{p}\""),
            MeasurementExpr::And(c) | MeasurementExpr::Xor(c) => {
                let op = if matches!(self, MeasurementExpr::And(_)) {
                    "and"
                } else {
                    "xor"
                };
                write!(f, "({op}")?;
                for e in c {
                    write!(f, " {e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
    Quoted(String),
}

fn sexpr_error(message: &str) -> Error {
    Error::Parse {
        line: 0,
        message: format!("measurement expression: {message}"),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err(sexpr_error("unterminated string")),
                    }
                }
                tokens.push(Token::Quoted(s));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"' {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                tokens.push(Token::Word(s));
            }
        }
    }
    Ok(tokens)
}

fn parse_node(tokens: &[Token], pos: &mut usize, n: usize) -> Result<MeasurementExpr> {
    match tokens.get(*pos) {
        Some(Token::Quoted(s)) => {
            *pos += 1;
            MeasurementExpr::leaf(PauliOperator::parse(s, n)?)
        }
        Some(Token::Open) => {
            *pos += 1;
            let is_and = match tokens.get(*pos) {
                Some(Token::Word(w)) if w == "and" => true,
                Some(Token::Word(w)) if w == "xor" => false,
                _ => return Err(sexpr_error("expected 'and' or 'xor' after '('")),
            };
            *pos += 1;
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Token::Close) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => children.push(parse_node(tokens, pos, n)?),
                    None => return Err(sexpr_error("missing ')'")),
                }
            }
            Ok(if is_and {
                MeasurementExpr::And(children)
            } else {
                MeasurementExpr::Xor(children)
            })
        }
        _ => Err(sexpr_error("expected '(' or a quoted Pauli string")),
    }
}

/// Two-qubit gate ledger for one measurement circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GateCost {
    pub controlled_pauli_count: u64,
    pub toffoli_count: u64,
    pub two_qubit_total: u64,
    pub ancilla_count: u64,
}

/// Cost model: an AND over `L` leaves uses `2L` controlled n-qubit Paulis
/// (compute and uncompute) and `L - 1` Toffolis; a controlled n-qubit Pauli
/// is `n` two-qubit gates and a Toffoli is 6. XOR is concatenation and adds
/// no gates. A lone leaf is charged as an AND of one.
pub fn gate_cost(expr: &MeasurementExpr) -> GateCost {
    let n = expr.num_qubits().unwrap_or(0) as u64;
    let (cp, toff, anc) = cost_counts(expr);
    GateCost {
        controlled_pauli_count: cp,
        toffoli_count: toff,
        two_qubit_total: cp * n + TOFFOLI_TWO_QUBIT_COST * toff,
        ancilla_count: anc,
    }
}

fn cost_counts(expr: &MeasurementExpr) -> (u64, u64, u64) {
    match expr {
        MeasurementExpr::Leaf(_) => (2, 0, 1),
        MeasurementExpr::And(children) => {
            if children.is_empty() {
                return (0, 0, 0);
            }
            let (mut cp, mut toff, mut anc) = (0, children.len() as u64 - 1, 1);
            for c in children {
                let (ccp, ctoff, canc) = cost_counts(c);
                // an XOR result feeding an AND has to be uncomputed as well
                let factor = if matches!(c, MeasurementExpr::Xor(_)) { 2 } else { 1 };
                cp += factor * ccp;
                toff += factor * ctoff;
                anc += canc;
            }
            (cp, toff, anc)
        }
        MeasurementExpr::Xor(children) => {
            let (mut cp, mut toff, mut anc) = (0, 0, 0);
            for c in children {
                let (ccp, ctoff, canc) = cost_counts(c);
                cp += ccp;
                toff += ctoff;
                anc = anc.max(canc);
            }
            if children.len() >= 2 {
                anc += 1;
            }
            (cp, toff, anc)
        }
    }
}

/// `2 m (n - k) (n + 3)`: gate bound for measuring a USt code.
pub fn ust_gate_bound(n: usize, k: usize, m: usize) -> u64 {
    2 * m as u64 * n.saturating_sub(k) as u64 * (n as u64 + 3)
}

/// `2 K (n - 1) (n + 3)`: per-measurement gate bound of the clustered decoder.
pub fn cws_gate_bound(n: usize, dimension: usize) -> u64 {
    2 * dimension as u64 * n.saturating_sub(1) as u64 * (n as u64 + 3)
}

/// Word stabilizer generators recombined against a group `g_1..g_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orthogonalized {
    /// `partners[j]` anticommutes with `g_j` and commutes with every other `g`.
    pub partners: Vec<PauliOperator>,
    /// The remaining `n - k` generators, commuting with all `g_j`.
    pub code_generators: Vec<PauliOperator>,
}

impl Orthogonalized {
    /// All `n` generators, partners first.
    pub fn into_stabilizer(self) -> Result<WordStabilizer> {
        let mut all = self.partners;
        all.extend(self.code_generators);
        WordStabilizer::new(all)
    }
}

/// Symplectic Gram-Schmidt of the stabilizer generators against `group`.
///
/// For each `g_j` in order the first remaining generator anticommuting with it
/// becomes its partner, and every other generator (earlier partners included)
/// anticommuting with `g_j` is multiplied by that partner.
pub fn orthogonalize(stabilizer: &WordStabilizer, group: &[PauliOperator]) -> Result<Orthogonalized> {
    let n = stabilizer
        .generators()
        .first()
        .map(PauliOperator::num_qubits)
        .unwrap_or(0);
    for (i, g) in group.iter().enumerate() {
        if g.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.num_qubits(),
            });
        }
        for h in &group[..i] {
            if !g.commutes(h)? {
                return Err(Error::Orthogonalization(format!(
                    "group generators {h} and {g} anticommute"
                )));
            }
        }
    }
    let mut pool: Vec<PauliOperator> = stabilizer.generators().to_vec();
    let mut partners: Vec<PauliOperator> = Vec::with_capacity(group.len());
    for g in group {
        let mut pivot = None;
        for (idx, s) in pool.iter().enumerate() {
            if !s.commutes(g)? {
                pivot = Some(idx);
                break;
            }
        }
        let Some(idx) = pivot else {
            return Err(Error::Orthogonalization(format!(
                "no generator anticommutes with {g}; the group is dependent or not a set of word operators"
            )));
        };
        let partner = pool.remove(idx);
        for s in pool.iter_mut().chain(partners.iter_mut()) {
            if !s.commutes(g)? {
                *s = s.multiply(&partner)?;
            }
        }
        partners.push(partner);
    }
    Ok(Orthogonalized {
        partners,
        code_generators: pool,
    })
}

/// AND over the code stabilizer generators.
pub fn additive_measurement(generators: &[PauliOperator]) -> Result<MeasurementExpr> {
    match generators {
        [] => Ok(MeasurementExpr::trivial()),
        [g] => MeasurementExpr::leaf(g.clone()),
        _ => MeasurementExpr::and(
            generators
                .iter()
                .cloned()
                .map(MeasurementExpr::leaf)
                .collect::<Result<_>>()?,
        ),
    }
}

/// A union-stabilizer code on a graph state: word operators `t_j * g^alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UstCode {
    graph: Graph,
    group_generators: Vec<PauliOperator>,
    translations: Vec<PauliOperator>,
}

impl UstCode {
    pub fn new(graph: Graph, group_generators: Vec<PauliOperator>, translations: Vec<PauliOperator>) -> Result<Self> {
        let n = graph.num_vertices();
        if translations.is_empty() {
            return Err(Error::InvalidCode("a USt code needs at least one translation".into()));
        }
        let words: Vec<&PauliOperator> = group_generators.iter().chain(&translations).collect();
        for (i, w) in words.iter().enumerate() {
            if w.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: w.num_qubits(),
                });
            }
            for v in &words[..i] {
                if !w.commutes(v)? {
                    return Err(Error::InvalidCode(format!("word operators {v} and {w} anticommute")));
                }
            }
        }
        let images: Vec<BinaryVector> = group_generators
            .iter()
            .map(|g| classical_map(&graph, g))
            .collect::<Result<_>>()?;
        let basis = if images.is_empty() {
            BinaryMatrix::empty(n)
        } else {
            gf2_basis(&images)?
        };
        if basis.num_rows() != group_generators.len() {
            return Err(Error::InvalidCode(
                "group generators are not independent on the code".into(),
            ));
        }
        let shifts: Vec<BinaryVector> = translations
            .iter()
            .map(|t| classical_map(&graph, t))
            .collect::<Result<_>>()?;
        for i in 0..shifts.len() {
            for j in 0..i {
                if gf2_solve(&basis, &shifts[i].xor(&shifts[j]))?.is_some() {
                    return Err(Error::OverlappingTranslations(j, i));
                }
            }
        }
        Ok(Self {
            graph,
            group_generators,
            translations,
        })
    }

    /// Z-type group `<Z^g>` with Z-type translations `Z^t`.
    pub fn from_binary(graph: Graph, group: &BinaryMatrix, translations: &[BinaryVector]) -> Result<Self> {
        Self::new(
            graph,
            group.rows().iter().cloned().map(PauliOperator::z_type).collect(),
            translations.iter().cloned().map(PauliOperator::z_type).collect(),
        )
    }

    /// The code itself as a USt code: the group is the translation symmetry
    /// of its codewords and the translations are coset representatives.
    pub fn from_cws(code: &CwsCode) -> Result<Self> {
        let periods = code.periods();
        let reps = coset_representatives(code.codewords(), &periods)?;
        Self::from_binary(code.graph().clone(), &periods, &reps)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn group_generators(&self) -> &[PauliOperator] {
        &self.group_generators
    }

    pub fn translations(&self) -> &[PauliOperator] {
        &self.translations
    }

    /// `k`, the number of group generators.
    pub fn group_rank(&self) -> usize {
        self.group_generators.len()
    }

    /// `m`, the number of translations.
    pub fn num_translations(&self) -> usize {
        self.translations.len()
    }

    /// `K = m 2^k`.
    pub fn dimension(&self) -> usize {
        self.translations.len() << self.group_generators.len()
    }

    pub fn orthogonalized(&self) -> Result<Orthogonalized> {
        orthogonalize(&standard_form_stabilizer(&self.graph), &self.group_generators)
    }

    pub fn measurement(&self) -> Result<MeasurementExpr> {
        ust_measurement(self)
    }

    /// `2 m (n - k) (n + 3)`.
    pub fn gate_bound(&self) -> u64 {
        ust_gate_bound(self.num_qubits(), self.group_rank(), self.num_translations())
    }
}

/// First-seen representatives of the cosets of `span(group)` among `words`.
pub fn coset_representatives(words: &[BinaryVector], group: &BinaryMatrix) -> Result<Vec<BinaryVector>> {
    let mut reps: Vec<BinaryVector> = Vec::new();
    for w in words {
        let mut new_coset = true;
        for r in &reps {
            if gf2_solve(group, &w.xor(r))?.is_some() {
                new_coset = false;
                break;
            }
        }
        if new_coset {
            reps.push(w.clone());
        }
    }
    Ok(reps)
}

/// XOR over translations `t_j` of the AND over `t_j G_i t_j^dagger`.
pub fn ust_measurement(code: &UstCode) -> Result<MeasurementExpr> {
    let gens = code.orthogonalized()?.code_generators;
    let mut terms = Vec::with_capacity(code.translations.len());
    for t in &code.translations {
        let conjugated: Vec<PauliOperator> = gens.iter().map(|g| g.conjugated_by(t)).collect::<Result<_>>()?;
        terms.push(additive_measurement(&conjugated)?);
    }
    if terms.len() == 1 {
        return Ok(terms.pop().expect("one term"));
    }
    MeasurementExpr::xor(terms)
}

/// Checks a USt measurement against `2 m (n - k) (n + 3)`.
pub fn check_ust_bound(code: &UstCode, cost: &GateCost) -> Result<()> {
    let bound = code.gate_bound();
    if cost.two_qubit_total > bound {
        return Err(Error::CostBound {
            cost: cost.two_qubit_total,
            bound,
            which: "2m(n-k)(n+3)",
        });
    }
    Ok(())
}

/// Rank of the Pauli operators in the symplectic space.
pub fn symplectic_rank(ops: &[PauliOperator]) -> usize {
    if ops.is_empty() {
        return 0;
    }
    let rows: Vec<BinaryVector> = ops.iter().map(symplectic_row).collect();
    gf2_basis(&rows).map(|b| b.num_rows()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> PauliOperator {
        PauliOperator::parse(s, n).unwrap()
    }

    fn bv(s: &str) -> BinaryVector {
        BinaryVector::parse_bitstring(s).unwrap()
    }

    fn five_cycle_stabilizer() -> WordStabilizer {
        standard_form_stabilizer(&Graph::cycle(5))
    }

    #[test]
    fn orthogonalize_without_group_is_identity() {
        let s = five_cycle_stabilizer();
        let o = orthogonalize(&s, &[]).unwrap();
        assert!(o.partners.is_empty());
        assert_eq!(o.code_generators, s.generators());
    }

    #[test]
    fn orthogonalize_five_cycle_all_ones() {
        let g = PauliOperator::z_type(bv("11111"));
        let o = orthogonalize(&five_cycle_stabilizer(), std::slice::from_ref(&g)).unwrap();
        assert_eq!(o.code_generators.len(), 4);
        for c in &o.code_generators {
            assert!(c.commutes(&g).unwrap());
            assert!(c.is_hermitian());
        }
        assert!(!o.partners[0].commutes(&g).unwrap());
        o.into_stabilizer().unwrap();
    }

    #[test]
    fn orthogonalize_rejects_dependent_group() {
        let g = PauliOperator::z_type(bv("11000"));
        let err = orthogonalize(&five_cycle_stabilizer(), &[g.clone(), g]).unwrap_err();
        assert!(matches!(err, Error::Orthogonalization(_)));
    }

    #[test]
    fn orthogonalize_rejects_anticommuting_group() {
        let err = orthogonalize(&five_cycle_stabilizer(), &[p("X1", 5), p("Z1", 5)]).unwrap_err();
        assert!(matches!(err, Error::Orthogonalization(_)));
    }

    #[test]
    fn additive_measurement_shapes() {
        assert_eq!(additive_measurement(&[]).unwrap(), MeasurementExpr::trivial());
        assert!(matches!(
            additive_measurement(&[p("X1", 2)]).unwrap(),
            MeasurementExpr::Leaf(_)
        ));
        assert!(additive_measurement(&[p("X1", 2), p("Z1", 2)]).is_err());
        let gens = [p("X1 X2", 2), p("Z1 Z2", 2)];
        assert!(matches!(additive_measurement(&gens).unwrap(), MeasurementExpr::And(ref c) if c.len() == 2));
    }

    #[test]
    fn single_translation_reduces_to_and_tree() {
        let g = Graph::cycle(5);
        let code = UstCode::from_binary(g.clone(), &BinaryMatrix::empty(5), &[bv("00000")]).unwrap();
        let expr = ust_measurement(&code).unwrap();
        let direct = additive_measurement(standard_form_stabilizer(&g).generators()).unwrap();
        assert_eq!(expr, direct);
    }

    #[test]
    fn overlapping_translations_rejected() {
        let g = Graph::cycle(5);
        let group = BinaryMatrix::from_rows(5, vec![bv("11000")]).unwrap();
        let err = UstCode::from_binary(g, &group, &[bv("00000"), bv("11000")]).unwrap_err();
        assert_eq!(err, Error::OverlappingTranslations(0, 1));
    }

    #[test]
    fn cost_single_leaf() {
        let c = gate_cost(&MeasurementExpr::leaf(p("X1 Z2 Z5", 5)).unwrap());
        assert_eq!(c.controlled_pauli_count, 2);
        assert_eq!(c.toffoli_count, 0);
        assert_eq!(c.two_qubit_total, 10);
        assert!(c.two_qubit_total <= ust_gate_bound(5, 4, 1));
    }

    #[test]
    fn cost_and_of_four() {
        let g = PauliOperator::z_type(bv("11111"));
        let o = orthogonalize(&five_cycle_stabilizer(), &[g]).unwrap();
        let c = gate_cost(&additive_measurement(&o.code_generators).unwrap());
        assert_eq!(c.controlled_pauli_count, 8);
        assert_eq!(c.toffoli_count, 3);
        assert_eq!(c.two_qubit_total, 58);
        assert_eq!(c.ancilla_count, 5);
        assert!(c.two_qubit_total <= ust_gate_bound(5, 1, 1));
        assert_eq!(ust_gate_bound(5, 1, 1), 64);
    }

    #[test]
    fn cost_xor_is_additive() {
        let tree = additive_measurement(five_cycle_stabilizer().generators()).unwrap();
        let single = gate_cost(&tree);
        for m in 1..5 {
            let xor = MeasurementExpr::Xor(vec![tree.clone(); m]);
            assert_eq!(gate_cost(&xor).two_qubit_total, m as u64 * single.two_qubit_total);
        }
        assert_eq!(gate_cost(&MeasurementExpr::trivial()), GateCost::default());
    }

    #[test]
    fn sexpr_round_trip() {
        let text = r#"(xor (and "X1 Z2 Z5" "-Z1 X2 Z3") (and "X1 Z2 Z5" "Z1 X2 Z3"))"#;
        let e = MeasurementExpr::parse_sexpr(text, 5).unwrap();
        assert_eq!(e.to_sexpr(), text);
        assert_eq!(
            MeasurementExpr::parse_sexpr(r#""X1""#, 2).unwrap().to_sexpr(),
            r#""X1""#
        );
        assert_eq!(
            MeasurementExpr::parse_sexpr("(and)", 2).unwrap(),
            MeasurementExpr::trivial()
        );
        assert!(MeasurementExpr::parse_sexpr(r#"(and "X1" "Z1")"#, 1).is_err());
        assert!(MeasurementExpr::parse_sexpr(r#"(or "X1")"#, 1).is_err());
        assert!(MeasurementExpr::parse_sexpr(r#"(and "X1""#, 1).is_err());
        assert!(MeasurementExpr::parse_sexpr(r#"(and "X1") "X1""#, 1).is_err());
    }

    #[test]
    fn from_cws_uses_period_group() {
        let code = CwsCode::new(Graph::cycle(5), vec![bv("00000"), bv("11111")], Some(3)).unwrap();
        let ust = UstCode::from_cws(&code).unwrap();
        assert_eq!(ust.group_rank(), 1);
        assert_eq!(ust.num_translations(), 1);
        assert_eq!(ust.dimension(), 2);
        let cost = gate_cost(&ust.measurement().unwrap());
        check_ust_bound(&ust, &cost).unwrap();
    }
}
