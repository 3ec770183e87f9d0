//! Exact combinatorics of torus GIT quotients `X ⫽ G` for a torus `G`
//! acting linearly on a vector space `X`, and of the moduli of gauged maps
//! built from them.
//!
//! The crate is organised bottom-up:
//!
//! * [`ratlin`]: exact rational linear algebra (cone membership with Farkas
//!   certificates, Smith normal form).
//! * [`gitq`]: semistable supports, chambers, properness, fixed points.
//! * [`inertia`]: twisted sectors of the inertia stack.
//! * [`quasimap`]: quasimap spaces `X(d)` and affine gauged maps.
//! * [`mundet`]: abelian Mundet stability and the large-area threshold.
//! * [`treecomb`]: colored trees of stable scaled affine curves.
//! * [`cli`]: problem files, reports and the `toricq` command line.

pub mod cli;
pub mod error;
pub mod gitq;
pub mod inertia;
pub mod mundet;
pub mod quasimap;
pub mod ratlin;
pub mod treecomb;

pub use error::{Error, Result};
pub use gitq::{Support, WeightSystem};
