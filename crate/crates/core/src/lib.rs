//! Clustered error correction for codeword-stabilized (CWS) quantum codes.
//!
//! A CWS code in standard form is a graph `G` on `n` vertices plus a set of
//! binary codewords. Errors are classified through the graph-induced map
//! [`graph_code::classical_map`], and decoding is carried out by measuring
//! union-stabilizer codes built with the AND/XOR calculus in [`ust`].
//! [`decoder`] implements both exhaustive screening and the clustered
//! strategy; [`oracle`] is a dense simulator used to check everything else.

pub mod channel;
pub mod cli;
pub mod counts;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod graph_code;
pub mod oracle;
pub mod pauli;
pub mod sim;
pub mod ust;

pub use channel::{GraphBasisChannel, MeasurementChannel, Outcome};
pub use decoder::{DecodeOptions, DecodeReport, Decoder, Strategy};
pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, BinaryVector};
pub use graph_code::{CwsCode, Graph};
pub use pauli::{PauliLetter, PauliOperator};
pub use ust::{MeasurementExpr, UstCode};
