//! Syndrome extraction for blocks of CSS-encoded logical qubits through the
//! Kronecker product of a classical parity-check matrix with a quantum one.

pub mod analytics;
pub mod circuit;
pub mod classical;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod product;
pub mod quantum;
pub mod registry;
pub mod sim;

pub use analytics::{ErrorModel, FailureMode};
pub use classical::{ClassicalCode, CodeKind};
pub use decoder::{BkTree, LocalizationResult, Nearest};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use product::{ErrorPattern, LookupTable, Mode, ProductCode, ProductSyndrome};
pub use quantum::{CssCode, ErrorType, PauliOp};
pub use sim::{SplitMix64, TrialConfig, TrialReport};
