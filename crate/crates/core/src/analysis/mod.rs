//! Measurements on finite balls: distortion, incompressibility, QI
//! constants, retract extensions and orbit growth.

pub mod distortion;
pub mod incompressibility;
pub mod orbit;
pub mod qi;
pub mod retract;
