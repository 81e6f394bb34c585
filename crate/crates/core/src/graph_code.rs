//! Standard-form codeword-stabilized codes: a graph state `|s>` with
//! stabilizer generators `S_i = X_i Z^{R_i}` and word operators `Z^c` for the
//! codewords `c` of a classical binary code.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{gf2_basis, BinaryMatrix, BinaryVector};
use crate::pauli::{PauliLetter, PauliOperator};

/// Simple undirected graph stored as a symmetric adjacency matrix with zero
/// diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: BinaryMatrix,
}

impl Graph {
    pub fn new(adjacency: BinaryMatrix) -> Result<Self> {
        let n = adjacency.num_rows();
        if n == 0 || adjacency.num_cols() != n {
            return Err(Error::InvalidInput(format!(
                "adjacency must be square and non-empty, got {}x{}",
                n,
                adjacency.num_cols()
            )));
        }
        for i in 0..n {
            if adjacency.get(i, i) {
                return Err(Error::InvalidInput(format!("self-loop on vertex {}", i + 1)));
            }
            for j in (i + 1)..n {
                if adjacency.get(i, j) != adjacency.get(j, i) {
                    return Err(Error::InvalidInput(format!(
                        "adjacency not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { adjacency })
    }

    /// Builds a graph from 0-indexed edges; rejects self-loops and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("graph needs at least one vertex".into()));
        }
        let mut adjacency = BinaryMatrix::zeros(n, n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidInput(format!("edge ({}, {}) out of range", a + 1, b + 1)));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop on vertex {}", a + 1)));
            }
            if adjacency.get(a, b) {
                return Err(Error::InvalidInput(format!("duplicate edge ({}, {})", a + 1, b + 1)));
            }
            adjacency.set(a, b, true);
            adjacency.set(b, a, true);
        }
        Ok(Self { adjacency })
    }

    pub fn empty(n: usize) -> Self {
        Self::from_edges(n, &[]).expect("empty graph is valid")
    }

    /// Ring `1-2-...-n-1`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle is valid")
    }

    /// Erdos-Renyi graph with edge probability `p`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        Self::from_edges(n, &edges).expect("random graph is valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.num_rows()
    }

    pub fn adjacency(&self) -> &BinaryMatrix {
        &self.adjacency
    }

    /// Row `R_i` of the adjacency matrix.
    pub fn neighbors(&self, i: usize) -> &BinaryVector {
        self.adjacency.row(i)
    }

    /// Edges as 0-indexed pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.num_vertices();
        (0..n)
            .flat_map(|i| self.neighbors(i).ones().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    /// Number of edges with both endpoints in `subset`.
    pub fn edges_within(&self, subset: &BinaryVector) -> usize {
        let twice: usize = subset.ones().map(|i| self.neighbors(i).and(subset).count_ones()).sum();
        twice / 2
    }
}

/// Generators `S_i` of the graph-state stabilizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordStabilizer {
    generators: Vec<PauliOperator>,
}

impl WordStabilizer {
    /// Wraps generators after checking they are Hermitian, commute and are
    /// independent.
    pub fn new(generators: Vec<PauliOperator>) -> Result<Self> {
        let Some(n) = generators.first().map(PauliOperator::num_qubits) else {
            return Err(Error::InvalidInput("stabilizer needs generators".into()));
        };
        for (i, g) in generators.iter().enumerate() {
            if g.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.num_qubits(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::NotHermitian(g.to_string()));
            }
            for h in &generators[..i] {
                if !g.commutes(h)? {
                    return Err(Error::NonCommuting(g.to_string(), h.to_string()));
                }
            }
        }
        let rows: Vec<BinaryVector> = generators.iter().map(symplectic_row).collect();
        if gf2_basis(&rows)?.num_rows() != generators.len() {
            return Err(Error::InvalidInput("stabilizer generators are dependent".into()));
        }
        Ok(Self { generators })
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// `(x | z)` concatenated, for rank computations over the symplectic space.
pub(crate) fn symplectic_row(p: &PauliOperator) -> BinaryVector {
    let n = p.num_qubits();
    let mut row = BinaryVector::zeros(2 * n);
    for i in p.x_bits().ones() {
        row.set(i, true);
    }
    for i in p.z_bits().ones() {
        row.set(n + i, true);
    }
    row
}

/// Generators `S_i = X_i Z^{R_i}` for a graph.
pub fn standard_form_stabilizer(graph: &Graph) -> WordStabilizer {
    let n = graph.num_vertices();
    let generators = (0..n)
        .map(|i| {
            let x = BinaryVector::unit(n, i);
            // R_ii = 0, so X and Z parts never overlap and the phase stays 0
            PauliOperator::from_parts(x, graph.neighbors(i).clone(), 0).expect("n >= 1")
        })
        .collect();
    WordStabilizer { generators }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwsCode {
    graph: Graph,
    codewords: Vec<BinaryVector>,
    declared_distance: Option<usize>,
}

impl CwsCode {
    pub fn new(graph: Graph, codewords: Vec<BinaryVector>, declared_distance: Option<usize>) -> Result<Self> {
        let n = graph.num_vertices();
        if codewords.is_empty() {
            return Err(Error::InvalidCode("a code needs at least one codeword".into()));
        }
        let mut seen = HashSet::new();
        for c in &codewords {
            if c.len() != n {
                return Err(Error::InvalidCode(format!(
                    "codeword {} has length {}, expected {n}",
                    c,
                    c.len()
                )));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::InvalidCode(format!("duplicate codeword {c}")));
            }
        }
        if declared_distance == Some(0) {
            return Err(Error::InvalidCode("distance must be positive".into()));
        }
        Ok(Self {
            graph,
            codewords,
            declared_distance,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.num_vertices()
    }

    /// Code dimension `K`.
    pub fn dimension(&self) -> usize {
        self.codewords.len()
    }

    pub fn codewords(&self) -> &[BinaryVector] {
        &self.codewords
    }

    pub fn declared_distance(&self) -> Option<usize> {
        self.declared_distance
    }

    /// `floor((d - 1) / 2)` from the declared distance.
    pub fn correctable_weight(&self) -> Option<usize> {
        self.declared_distance.map(|d| (d - 1) / 2)
    }

    pub fn with_declared_distance(mut self, d: Option<usize>) -> Self {
        self.declared_distance = d;
        self
    }

    pub fn stabilizer(&self) -> WordStabilizer {
        standard_form_stabilizer(&self.graph)
    }

    pub fn word_operators(&self) -> Vec<PauliOperator> {
        self.codewords.iter().cloned().map(PauliOperator::z_type).collect()
    }

    pub fn classical_map(&self, e: &PauliOperator) -> Result<BinaryVector> {
        classical_map(&self.graph, e)
    }

    pub fn degenerate(&self, e1: &PauliOperator, e2: &PauliOperator) -> Result<bool> {
        Ok(self.classical_map(e1)? == self.classical_map(e2)?)
    }

    /// Basis of the group of shifts `v` with `C + v = C`.
    pub fn periods(&self) -> BinaryMatrix {
        let n = self.num_qubits();
        let set: HashSet<&BinaryVector> = self.codewords.iter().collect();
        let base = &self.codewords[0];
        let periods: Vec<BinaryVector> = self
            .codewords
            .iter()
            .map(|c| c.xor(base))
            .filter(|v| !v.is_zero() && self.codewords.iter().all(|c| set.contains(&c.xor(v))))
            .collect();
        if periods.is_empty() {
            return BinaryMatrix::empty(n);
        }
        gf2_basis(&periods).expect("uniform lengths")
    }

    /// Whether the word operators form a group.
    pub fn is_additive(&self) -> bool {
        let has_zero = self.codewords.iter().any(BinaryVector::is_zero);
        let k = self.periods().num_rows();
        has_zero && k < usize::BITS as usize && (1usize << k) == self.dimension()
    }

    /// Parses the line-oriented code file format.
    pub fn parse(text: &str) -> Result<Self> {
        parse_code_file(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn to_code_file(&self) -> String {
        let mut out = format!("n={} K={}", self.num_qubits(), self.dimension());
        if let Some(d) = self.declared_distance {
            let _ = write!(out, " d={d}");
        }
        out.push_str("\nedges:\n");
        for (i, j) in self.graph.edges() {
            let _ = writeln!(out, "{} {}", i + 1, j + 1);
        }
        out.push_str("codewords:\n");
        for c in &self.codewords {
            let _ = writeln!(out, "{c}");
        }
        out
    }
}

/// `Cl_G(E) = v + sum_i u_i R_i` for `E = Z^v X^u` up to phase.
pub fn classical_map(graph: &Graph, e: &PauliOperator) -> Result<BinaryVector> {
    let n = graph.num_vertices();
    if e.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: e.num_qubits(),
        });
    }
    let mut out = e.z_bits().clone();
    for i in e.x_bits().ones() {
        out.xor_assign(graph.neighbors(i));
    }
    Ok(out)
}

/// All non-identity Paulis of weight `<= max_weight`, ordered by weight, then
/// lexicographically by support, then by letters with `X < Y < Z`.
pub fn enumerate_errors(n: usize, max_weight: usize) -> impl Iterator<Item = PauliOperator> {
    let max_weight = max_weight.min(n);
    (1..=max_weight).flat_map(move |w| {
        (0..n).combinations(w).flat_map(move |support| {
            std::iter::repeat_n([PauliLetter::X, PauliLetter::Y, PauliLetter::Z], w)
                .multi_cartesian_product()
                .map(move |letters| {
                    let mut all = vec![PauliLetter::I; n];
                    for (&q, &l) in support.iter().zip(&letters) {
                        all[q] = l;
                    }
                    PauliOperator::from_letters(&all)
                })
        })
    })
}

/// Same as [`enumerate_errors`] with the identity first.
pub fn enumerate_errors_with_identity(n: usize, max_weight: usize) -> impl Iterator<Item = PauliOperator> {
    std::iter::once(PauliOperator::identity(n)).chain(enumerate_errors(n, max_weight))
}

fn parse_code_file(text: &str) -> Result<CwsCode> {
    #[derive(PartialEq)]
    enum Section {
        Header,
        Edges,
        Codewords,
    }
    let err = |line: usize, message: String| Error::Parse { line, message };

    let mut section = Section::Header;
    let mut header: Option<(usize, usize, Option<usize>)> = None;
    let mut edges = Vec::new();
    let mut codewords = Vec::new();
    let mut seen_edges = HashSet::new();
    let mut seen_codewords = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "edges:" => {
                if header.is_none() {
                    return Err(err(lineno, "'edges:' before the header line".into()));
                }
                if section != Section::Header {
                    return Err(err(lineno, "unexpected 'edges:' section".into()));
                }
                section = Section::Edges;
                continue;
            }
            "codewords:" => {
                if header.is_none() {
                    return Err(err(lineno, "'codewords:' before the header line".into()));
                }
                if section == Section::Codewords {
                    return Err(err(lineno, "repeated 'codewords:' section".into()));
                }
                section = Section::Codewords;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => {
                if header.is_some() {
                    return Err(err(lineno, format!("unexpected line '{line}'")));
                }
                let (mut n, mut k, mut d) = (None, None, None);
                for tok in line.split_whitespace() {
                    let (key, value) = tok
                        .split_once('=')
                        .ok_or_else(|| err(lineno, format!("expected key=value, got '{tok}'")))?;
                    let value: usize = value
                        .parse()
                        .map_err(|_| err(lineno, format!("invalid integer in '{tok}'")))?;
                    let slot = match key {
                        "n" => &mut n,
                        "K" => &mut k,
                        "d" => &mut d,
                        other => return Err(err(lineno, format!("unknown header key '{other}'"))),
                    };
                    if slot.replace(value).is_some() {
                        return Err(err(lineno, format!("repeated header key '{key}'")));
                    }
                }
                let n = n.ok_or_else(|| err(lineno, "header is missing n".into()))?;
                let k = k.ok_or_else(|| err(lineno, "header is missing K".into()))?;
                if n == 0 {
                    return Err(err(lineno, "n must be positive".into()));
                }
                if k == 0 {
                    return Err(err(lineno, "K must be positive".into()));
                }
                if d == Some(0) {
                    return Err(err(lineno, "d must be positive".into()));
                }
                header = Some((n, k, d));
            }
            Section::Edges => {
                let n = header.expect("checked above").0;
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(err(lineno, format!("expected 'i j', got '{line}'")));
                }
                let parse_vertex = |s: &str| -> Result<usize> {
                    let v: usize = s.parse().map_err(|_| err(lineno, format!("invalid vertex '{s}'")))?;
                    if v == 0 || v > n {
                        return Err(err(lineno, format!("vertex {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let (a, b) = (parse_vertex(parts[0])?, parse_vertex(parts[1])?);
                if a == b {
                    return Err(err(lineno, format!("self-loop on vertex {}", a + 1)));
                }
                if !seen_edges.insert((a.min(b), a.max(b))) {
                    return Err(err(lineno, format!("duplicate edge {} {}", a + 1, b + 1)));
                }
                edges.push((a, b));
            }
            Section::Codewords => {
                let n = header.expect("checked above").0;
                let c = BinaryVector::parse_bitstring(line).map_err(|e| match e {
                    Error::Parse { message, .. } => err(lineno, message),
                    other => other,
                })?;
                if c.len() != n {
                    return Err(err(lineno, format!("codeword has length {}, expected {n}", c.len())));
                }
                if !seen_codewords.insert(c.clone()) {
                    return Err(err(lineno, format!("duplicate codeword {c}")));
                }
                codewords.push(c);
            }
        }
    }
    let (n, k, d) = header.ok_or_else(|| err(0, "missing header line".into()))?;
    if section != Section::Codewords {
        return Err(err(0, "missing 'codewords:' section".into()));
    }
    if codewords.len() != k {
        return Err(err(
            0,
            format!("header declares K={k} but {} codewords follow", codewords.len()),
        ));
    }
    let graph = Graph::from_edges(n, &edges)?;
    CwsCode::new(graph, codewords, d)
}
