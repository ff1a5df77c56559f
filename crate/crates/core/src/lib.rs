//! Surface bundles over surfaces through their homological monodromy, and
//! the obstructions that keep a surface-by-surface group extension from being
//! the fundamental group of a Kodaira fibration.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod linalg;
pub mod meyer;
pub mod monodromy;
pub mod obstructions;
pub mod surface;

pub use error::Error;
