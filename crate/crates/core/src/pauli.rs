//! Pauli group elements in the symplectic representation.
//!
//! An operator is stored as `i^phase * X^x * Z^z` (the Z part acts first on a
//! ket). A `Y` on qubit `j` therefore has `x_j = z_j = 1` and contributes one
//! factor of `i` to the stored phase, since `Y = i X Z`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::BinaryVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    fn xz(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    x: BinaryVector,
    z: BinaryVector,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BinaryVector::zeros(n),
            z: BinaryVector::zeros(n),
            phase: 0,
        }
    }

    /// `i^phase * X^x * Z^z`.
    pub fn from_parts(x: BinaryVector, z: BinaryVector, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::InvalidInput("Pauli operators need at least one qubit".into()));
        }
        Ok(Self { x, z, phase: phase % 4 })
    }

    /// The operator `Z^v`.
    pub fn z_type(v: BinaryVector) -> Self {
        let n = v.len();
        Self {
            x: BinaryVector::zeros(n),
            z: v,
            phase: 0,
        }
    }

    /// The operator `X^u`.
    pub fn x_type(u: BinaryVector) -> Self {
        let n = u.len();
        Self {
            x: u,
            z: BinaryVector::zeros(n),
            phase: 0,
        }
    }

    /// A single-qubit Pauli `letter` on `qubit` (0-indexed), Hermitian.
    pub fn single(n: usize, qubit: usize, letter: PauliLetter) -> Self {
        let mut p = Self::identity(n);
        p.set_letter(qubit, letter);
        p
    }

    /// Builds a Hermitian operator from per-qubit letters.
    pub fn from_letters(letters: &[PauliLetter]) -> Self {
        let mut p = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            p.set_letter(q, l);
        }
        p
    }

    fn set_letter(&mut self, qubit: usize, letter: PauliLetter) {
        let had_y = self.letter(qubit) == PauliLetter::Y;
        let (x, z) = letter.xz();
        self.x.set(qubit, x);
        self.z.set(qubit, z);
        // keep the letter coefficient unchanged
        let delta = (letter == PauliLetter::Y) as u8 + 4 - had_y as u8;
        self.phase = (self.phase + delta) % 4;
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BinaryVector {
        &self.x
    }

    pub fn z_bits(&self) -> &BinaryVector {
        &self.z
    }

    /// Exponent `e` in `i^e * X^x * Z^z`.
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn letter(&self, qubit: usize) -> PauliLetter {
        match (self.x.get(qubit), self.z.get(qubit)) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    pub fn letters(&self) -> Vec<PauliLetter> {
        (0..self.num_qubits()).map(|q| self.letter(q)).collect()
    }

    fn y_count(&self) -> usize {
        self.x.and(&self.z).count_ones()
    }

    /// Exponent `c` such that the operator equals `i^c` times the tensor
    /// product of its letters.
    pub fn letter_phase(&self) -> u8 {
        ((self.phase as usize + 4 - self.y_count() % 4) % 4) as u8
    }

    pub fn support(&self) -> BinaryVector {
        self.x.or(&self.z)
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    pub fn is_hermitian(&self) -> bool {
        self.letter_phase().is_multiple_of(2)
    }

    /// Same X/Z parts with phase exponent 0.
    pub fn without_phase(&self) -> Self {
        Self {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: 0,
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: (self.phase + 2) % 4,
        }
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: phase % 4,
        }
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                found: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Exact product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        // X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
        let sign = if self.z.dot(&other.x) { 2 } else { 0 };
        Ok(Self {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            phase: (self.phase + other.phase + sign) % 4,
        })
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_dims(other)?;
        Ok(self.x.dot(&other.z) == self.z.dot(&other.x))
    }

    pub fn dagger(&self) -> Self {
        // (X^u Z^v)^dagger = Z^v X^u = (-1)^{u.v} X^u Z^v
        let sign = if self.x.dot(&self.z) { 2 } else { 0 };
        Self {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: (4 - self.phase + sign) % 4,
        }
    }

    /// `by * self * by^dagger`, which is `+-self` for Pauli operators.
    pub fn conjugated_by(&self, by: &Self) -> Result<Self> {
        if by.commutes(self)? {
            Ok(self.clone())
        } else {
            Ok(self.negated())
        }
    }

    /// Parses the text form, e.g. `"X1 Z3 Y4"`, `"-X1 Z2"`, `"+i Y2"` or `"I"`.
    /// Qubits are 1-indexed; omitted qubits are identity.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let err = |message: String| Error::Parse { line: 0, message };
        if n == 0 {
            return Err(err("Pauli operators need at least one qubit".into()));
        }
        let mut tokens: Vec<&str> = text.split_whitespace().collect();
        let mut coefficient = 0u8;
        if let Some(first) = tokens.first().copied() {
            let standalone = match first {
                "+" => Some(0),
                "+i" => Some(1),
                "-" => Some(2),
                "-i" => Some(3),
                _ => None,
            };
            if let Some(c) = standalone {
                coefficient = c;
                tokens.remove(0);
            } else {
                for (prefix, c) in [("+i", 1u8), ("-i", 3), ("+", 0), ("-", 2)] {
                    if let Some(rest) = first.strip_prefix(prefix) {
                        if rest.starts_with(['X', 'Y', 'Z', 'I']) {
                            coefficient = c;
                            tokens[0] = rest;
                            break;
                        }
                    }
                }
            }
        }
        let mut letters = vec![PauliLetter::I; n];
        let mut seen = vec![false; n];
        for tok in tokens {
            let mut chars = tok.chars();
            let letter = match chars.next() {
                Some('X') => PauliLetter::X,
                Some('Y') => PauliLetter::Y,
                Some('Z') => PauliLetter::Z,
                Some('I') => PauliLetter::I,
                _ => return Err(err(format!("invalid Pauli token '{tok}'"))),
            };
            let index = chars.as_str();
            if index.is_empty() {
                if letter == PauliLetter::I {
                    continue;
                }
                return Err(err(format!("missing qubit index in '{tok}'")));
            }
            let q: usize = index
                .parse()
                .map_err(|_| err(format!("invalid qubit index in '{tok}'")))?;
            if q == 0 || q > n {
                return Err(err(format!("qubit index {q} outside 1..={n}")));
            }
            if seen[q - 1] {
                return Err(err(format!("qubit {q} appears twice")));
            }
            seen[q - 1] = true;
            letters[q - 1] = letter;
        }
        let p = Self::from_letters(&letters);
        Ok(p.with_phase(p.phase + coefficient))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.letter_phase() {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        if self.is_identity() {
            return f.write_str("I");
        }
        let mut first = true;
        for q in 0..self.num_qubits() {
            let l = self.letter(q);
            if l == PauliLetter::I {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}{}", l.as_char(), q + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli[{}; n={}]", self, self.num_qubits())
    }
}

impl serde::Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
