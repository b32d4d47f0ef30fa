//! HOMFLY-PT invariants of two-strand braid closures, computed exactly over
//! a Laurent-polynomial radical ring and numerically at the unitary point
//! `q = exp(4*pi*i/(k+N))`, `A = q^N`, together with a simulator of a
//! reconfigurable Mach-Zehnder interferometer that estimates the same matrix
//! elements from normalized detector powers.

pub mod braidval;
pub mod cli;
pub mod operators;
pub mod photonics;
pub mod ring;
