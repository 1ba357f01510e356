//! System-level Monte Carlo simulator of a hexagonal cellular network
//! hosting one cognitive UAV user, comparing conventional,
//! sensing-assisted, and perfect-CSI-optimal inter-cell interference
//! coordination for the UAV downlink and uplink, including worst-case
//! robust uplink power control.

pub mod allocation;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod metrics;
pub mod scenario;
pub mod units;

pub use error::{Result, SimError};
