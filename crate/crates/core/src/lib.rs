//! Kähler differentials of pure extensions of valued fields, computed
//! through final segments of the value group.

pub mod error;
pub mod io;
pub mod ordgrp;
pub mod keypoly;
pub mod omega;
pub mod oracle;
pub mod poly;
pub mod segment;
pub mod selftest;
pub mod valfield;

pub use error::{Error, Result};
