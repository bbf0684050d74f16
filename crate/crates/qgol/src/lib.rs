//! Simulator for a one-dimensional quantum Game of Life.
//!
//! A chain of L two-level sites evolves under a Hamiltonian of
//! neighbour-gated spin flips: site i flips only on components where exactly
//! two or three of its four neighbours (i-2, i-1, i+1, i+2) are alive. The
//! two outermost sites on each end never flip (frozen boundary) but still
//! count as neighbours. Setting every amplitude on a classical configuration
//! and replacing the continuous flip with a conditional bit flip recovers a
//! reversible classical cellular automaton, implemented alongside for
//! comparison.
//!
//! Backends:
//! * [`dense`] — state vector with split-step integration, plus an exact
//!   diagonalization reference for small chains;
//! * [`mps`] — matrix-product state with windowed gate application and
//!   singular-value truncation, for chains beyond state-vector reach;
//! * [`classical`] — the reversible automaton.
//!
//! [`observables`] derives populations, visibility, discretized patterns,
//! cluster statistics, density, and diversity; [`ensemble`] averages them
//! over random initial configurations; [`config`] and [`output`] provide the
//! TOML-driven command-line front end's configuration and writers.

pub mod classical;
pub mod config;
pub mod dense;
pub mod ensemble;
pub mod error;
pub mod lattice;
pub mod mps;
pub mod observables;
pub mod output;
pub mod splitting;

pub use error::{Error, Result};
