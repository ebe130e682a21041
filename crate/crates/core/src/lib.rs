//! Rate-region boundaries for the two-user MISO interference channel with
//! optional successive interference cancellation at each receiver.
//!
//! Each receiver either treats the other link's signal as noise (`n`) or
//! decodes and cancels it first (`d`), giving four regions NN, DN, ND and
//! DD. For every region the crate computes the Pareto boundary with a fast
//! method and with a brute-force grid oracle used for validation.
//!
//! ```
//! use miso_pareto::{boundary_dn::boundary_dn, Preset};
//!
//! let k = Preset::Fig4.constants();
//! let b = boundary_dn(&k, 50).unwrap();
//! assert_eq!(b.len(), 50);
//! assert!(b.is_monotone());
//! ```

pub mod ascent;
pub mod boundary_dd;
pub mod boundary_dn;
pub mod boundary_nn;
pub mod channel;
pub mod complexity;
pub mod cubic;
pub mod error;
pub mod oracle;
pub mod pareto;
pub mod rates;
pub mod vector;

pub use ascent::{AscentConfig, SweepMode, DEFAULT_EPSILON};
pub use channel::{ChannelConstants, ChannelRealization, Preset};
pub use error::{Error, Result};
pub use oracle::OracleConfig;
pub use pareto::{Boundary, BoundaryMeta, BoundaryTag};
pub use rates::{Beamformer, DecodingScenario, RateParams, RatePoint};
