//! Exact computations around the Leech lattice: the Golay code and M24,
//! invariant alternating forms, fixed-point lattices, linking quadratic
//! spaces, root lattices, theta coefficients and standard parameters.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod extalg;
pub mod golay;
pub mod intmat;
pub mod lattice;
pub mod linkform;
pub mod niemeier_alt;
pub mod params;
pub mod permgrp;
pub mod poly;
pub mod report;
pub mod rootlat;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
