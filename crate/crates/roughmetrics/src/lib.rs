//! Analysis of finite metric spaces against the small-rough-angle (SRA) family
//! of conditions.
//!
//! A metric space satisfies SRA(α) for 0 ≤ α ≤ 1 if every triple obeys the
//! strengthened triangle inequality
//! d(x,y) ≤ max{d(x,z) + α d(z,y), α d(x,z) + d(z,y)}.
//! SRA(0) is the ultrametric condition and SRA(1) the plain triangle
//! inequality. The crate provides:
//!
//! * exact finite metric spaces with validation, snowflaking d ↦ d^α,
//!   L^p-metric exponents, comparison angles and doubling probes ([`space`]);
//! * SRA quantification, uniform non-convexity checks and the constants
//!   linking SRA spaces to snowflakes ([`sra`]);
//! * ordered finite sets with rough self-contraction/expansion, medial
//!   ordered SRA, bounded turning and discrete length ([`ordered`]);
//! * builders for the example families: geometric SRA sequences, Cantor
//!   approximations, Laakso levels, metric trees and more ([`constructions`]);
//! * exact maximum SRA(α)-subset search by branch and bound ([`search`]);
//! * the rectifiability machinery for rough self-monotone sets: derived
//!   constants, the index-walk iteration, triple coloring and end-to-end
//!   SRA-subset extraction ([`witness`]);
//! * isometric ultrametric embeddings and explicit low-distortion maps into
//!   normed spaces, with measured bi-Lipschitz distortion ([`embed`]).

pub mod constructions;
pub mod embed;
pub mod error;
pub mod ordered;
pub mod search;
pub mod space;
pub mod sra;
pub mod witness;

pub use error::Error;
pub use ordered::OrderedSet;
pub use space::{FiniteMetricSpace, Norm, ValidationReport};

/// Default tolerance for inequality checks throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-9;
