//! Random multipath channels and the CIR text format.
//!
//! [`generate`] draws cluster/ray (Saleh-Valenzuela family) impulse
//! responses; [`ingest`] and [`write_cir_file`] read and write the `#cirv1`
//! text format so that externally produced channel sets can be swept too.

mod cirfile;
mod generator;

pub use cirfile::{format_cir, ingest, parse_cir, write_cir_file};
pub use generator::{generate, generate_one, ClusterModelParams};

use std::path::PathBuf;

use crate::sigkit::ImpulseResponse;

/// Where a realization came from.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordSource {
    Generated(ClusterModelParams),
    File(PathBuf),
}

/// One channel realization `h^(i)`: unit energy, supported on `[0, Ds]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirRecord<T> {
    pub id: usize,
    pub response: ImpulseResponse<T>,
    pub source: RecordSource,
}
