//! Exact Gröbner-basis kernel for the determinantal ideals I₁(XY).

pub mod coeff;
pub mod ring;
pub mod groebner;
pub mod error;
pub mod ideal;
pub mod detlab;
pub mod verify;
