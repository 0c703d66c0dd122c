//! Packed GF(2) vectors and matrices.

mod bitmatrix;
mod bitvec;

pub use bitmatrix::{BitMatrix, Echelon};
pub use bitvec::BitVector;
