//! Proximity testing for codes whose symbols live on the edges of a graph.
//!
//! The library builds regular indexed multigraphs (RIMs) from Cayley graphs,
//! derives the cut/fold schedule that shrinks such a graph down to a single
//! vertex (the flower), and runs the folding IOPP over that schedule: a prover
//! commits successive foldings of a word behind Merkle oracles, and a verifier
//! spot-checks fold consistency plus one final low-degree check.
//!
//! Modules follow the pipeline:
//!
//! * [`field`] - prime fields with a canonical byte encoding.
//! * [`rim`] - multigraphs, cuts, words on edges, distances, weights.
//! * [`group`] - finite groups, Cayley graphs, blossoming sequences.
//! * [`lps`] - the Lubotzky-Phillips-Sarnak Ramanujan family.
//! * [`code`] - Reed-Solomon base codes and graph codes with exact oracles.
//! * [`fold`] - the folding operator and the exhaustive fold-distance check.
//! * [`merkle`] - SHA-256 Merkle commitments.
//! * [`transcript`] - deterministic challenge derivation.
//! * [`protocol`] - prover, verifier, counters, soundness simulation.
//! * [`wire`] - the proof byte format.
//! * [`analysis`] - spectra, expansion bounds, parameter reports.
//! * [`io`] - text formats for graphs and words.

pub mod group;
pub mod io;
pub mod lps;
pub mod merkle;
pub mod protocol;
pub mod transcript;
pub mod wire;
pub mod analysis;
pub mod code;
pub mod field;
pub mod fold;






pub mod rim;



pub use field::{FieldElement, PrimeField};
pub use rim::{CutCollection, EdgeWord, Rim, WeightFn};
