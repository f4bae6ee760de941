//! Rate-region toolkit for two-user broadcast channels under privacy
//! leakage constraints.
//!
//! A sender broadcasts a common message and two private messages; each
//! private message may leak at most a budgeted rate to the opposite
//! receiver. Setting a budget to zero makes that message confidential,
//! and letting it grow unbounded recovers the classic no-secrecy setting,
//! so one model covers the whole secrecy spectrum.
//!
//! The crate provides:
//!
//! - exact probability and information measures over small discrete
//!   alphabets ([`pmf`]),
//! - channel models, auxiliary-variable chains, and special-channel
//!   constructors ([`channel`]),
//! - the named inner/outer rate regions and their numeric polytopes for a
//!   fixed distribution ([`regions`]),
//! - symbolic inequality systems with Fourier–Motzkin elimination over
//!   exact rationals ([`symbolic`]),
//! - union-over-distributions frontiers traced by randomized search
//!   ([`union`]),
//! - closed-form machinery for the Blackwell channel, including its
//!   leakage thresholds and sum-rate envelope ([`blackwell`]),
//! - reduction and lifting checks connecting the general bounds to their
//!   special cases ([`lab`]).

pub mod blackwell;
pub mod channel;
pub mod lab;
pub mod pmf;
pub mod regions;
pub mod symbolic;
pub mod union;

pub use blackwell::{BlackwellParams, SumRateCurve};
pub use channel::{AuxChain, ChannelClass, Dmbc, OuterChain};
pub use pmf::{JointPmf, Pmf};
pub use regions::{LeakagePair, RatePoint, RatePolytope, RegionId};
pub use symbolic::{IneqSystem, Inequality, InfoSymbol};
pub use union::{FrontierCurve, FrontierPoint, SearchBudget};
