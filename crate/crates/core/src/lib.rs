//! Exact analysis of translation surfaces and their Z-covers: homology,
//! holonomy, cylinder decompositions and multi-twists, lifting criteria,
//! first-kind certificates, and straight-line flow with a deck cocycle.

pub mod exactnum;
pub mod lattice;
pub mod surface;
pub mod trace;
pub mod homology;
pub mod cylinders;
pub mod automorph;
pub mod zcover;
pub mod catalog;
pub mod flowsim;
pub mod reproduce;
