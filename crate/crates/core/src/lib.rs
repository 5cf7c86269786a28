pub mod analysis;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod multiindex;
pub mod ring;
pub mod ringmatrix;
pub mod statespace;

pub use error::{Error, Result};
pub use multiindex::{MultiIndex, TruncationSpec};
pub use ring::{Complex, EvalPoint, RingElement};
pub use ringmatrix::RingMatrix;
pub use statespace::{SignalSequence, StateSpaceSystem, TransferSeries};
