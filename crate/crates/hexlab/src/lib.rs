//! hexlab: word algebra for the modular group and its derived series,
//! continued-fraction and Sturmian codecs, the eta-power coefficient
//! function, and numerical evaluation of the hexponential map.

pub mod num;
pub mod modgroup;
pub mod contfrac;
pub mod psi;
pub mod hexpnum;
