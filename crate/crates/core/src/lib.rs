//! Exact computer algebra for the interplay of modular forms, their
//! derivatives, and Rankin-Cohen brackets.
//!
//! The crate keeps every q-expansion over the rationals, with the
//! transcendental factor (2·pi·i/h)^e tracked as a formal grade
//! ([`qseries`]). On top of that sit the level-one generator forms
//! ([`forms`]), the polynomial calculus with its mutually inverse weight
//! maps and slash actions ([`jets`]), Rankin-Cohen brackets together with
//! the scalar constants that relate them to the polynomial calculus
//! ([`brackets`]), and formal Dirichlet coefficient sequences with the
//! verification harnesses that check, coefficient by coefficient, how the
//! Dirichlet series of a product of derivatives decomposes into shifted
//! Dirichlet series of brackets ([`dirichlet`]).

pub mod brackets;
pub mod dirichlet;
pub mod error;
pub mod factorial;
pub mod forms;
pub mod jets;
pub mod qseries;
pub mod rational;
pub mod report;

pub use error::{Error, ErrorClass, Result};
pub use rational::Rational;
