//! Z^d subshifts of finite type at desk scale: local validity, pattern
//! languages, torus completion, asymptotic pairs and exchangeability,
//! entropy bounds, and the Worm and Good Wave example shifts.

pub mod alphabet;
pub mod code;
pub mod error;
pub mod format;
pub mod lattice;
pub mod pattern;
pub mod spec;

pub use alphabet::{Alphabet, Symbol, SymbolId, SymbolSet};
pub use code::{apply_code, BlockCode};
pub use error::{Error, Result};
pub use lattice::{box_support, Coord, Support};
pub use pattern::{Pattern, TorusConfig};
pub use spec::{compile_wang, ForbiddenPattern, ShiftSpec};
pub mod par;
pub mod solver;
pub mod zoo;
pub mod entropy;
pub mod asymptotics;
pub mod claims;

pub use solver::{CustomValidator, Outcome, SearchBudget, Shift};
