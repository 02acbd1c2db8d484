//! Constant-weight self-synchronizing tags for framing qutrit streams.
//!
//! A tag is a small set of marker positions inside a frame of length `v`.
//! When every frame carries the same pattern, a receiver that sees only a
//! window of `v` consecutive measurement outcomes can recover the frame
//! boundary, provided the pattern's cyclic shifts stay far apart. This crate
//! covers the whole pipeline:
//!
//! * [`algebra`]: small finite fields, traces, and power residues.
//! * [`tags`]: tag vectors, correlation profiles, the comma-free index and
//!   its upper bound, and splice-based metrics for tag codes.
//! * [`constructions`]: difference-set families (trace-based, power-residue,
//!   sixth-power-class, twin-prime, complement) that hit the bound.
//! * [`search`]: exhaustive searches for optimal tags, orthogonal codes,
//!   and low-sidelobe headers.
//! * [`syncdec`]: nearest-shift and orthogonal decoders plus header location.
//! * [`sim`]: framed-stream builder, measurement, noise injection, and
//!   deterministic campaigns.
//! * [`tagfile`]: the line-oriented JSON interchange format for tags.
//! * [`cli`]: the `qutag` command line tool.

pub mod algebra;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod search;
pub mod sim;
pub mod syncdec;
pub mod tagfile;
pub mod tags;

pub use error::{Error, ErrorCategory, Result};
pub use tags::{OrthogonalTagSet, QuantumTag, TagVector};
