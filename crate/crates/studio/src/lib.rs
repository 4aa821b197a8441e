//! Filesystem, command-line and HTTP side of the studio: the on-disk
//! catalog store, template packs, output trees, the shipped fixtures and
//! the API service.

pub mod api;
pub mod cli;
pub mod fixtures;
mod fsutil;
pub mod output;
pub mod pack;
pub mod store;

pub use fsutil::write_atomic;
