//! Upper tails of the triangle count `T` in the Erdős–Rényi graph G(n, p).
//!
//! * [`graph`]: bit-packed graphs, the seeded sampler, triangle and
//!   common-neighbour counts, exhaustive enumeration for small `n`;
//! * [`classify`]: good/bad edges and vertices, and the split
//!   `T <= T' + T0 + T1 + T2 + T3`;
//! * [`bounds`]: closed-form tail bounds and their auxiliary inequalities;
//! * [`matchings`]: `t(F)` sums, greedy matching colorings, event detectors;
//! * [`estimate`]: exact, plain Monte Carlo, tilted Monte Carlo and
//!   clique-planting estimates of `P(T >= t)`;
//! * [`harness`]: the localized family for triangles with all good edges and
//!   checkers for the concentration theorem's conditions;
//! * [`cli`]: run configurations and table emitters behind the `tritail` binary.
//!
//! All logarithms are natural.

pub mod bounds;
pub mod classify;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod graph;
pub mod harness;
pub mod matchings;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{GnpParams, Graph};
pub use rng::SeededRng;
