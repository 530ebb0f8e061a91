//! Exact computer algebra for diagonals of multivariate rational functions.
//!
//! The crate connects two views of the same data: analytically, the diagonal
//! of a rational function is a D-finite power series annihilated by a linear
//! ODE; geometrically, intersecting the vanishing set of the denominator with
//! the hyperbola p = x·y·… yields a planar curve whose j-invariant controls
//! that ODE's pullbacked hypergeometric solutions. Everything is computed over
//! the rationals with no floating point and no numerical tolerance.
//!
//! Module map:
//! - [`rational`], [`poly`], [`unirat`]: exact scalars, dense univariate
//!   polynomials, reduced univariate rational functions.
//! - [`multipoly`], [`parse`], [`curve`]: sparse multivariate polynomials,
//!   the expression parser, hyperbola elimination and curve utilities.
//! - [`series`]: truncated power series, hypergeometric generators,
//!   algebraic prefactors, pullbacked solutions.
//! - [`diagonal`]: multi-Taylor expansion, diagonal extraction, monomial
//!   transforms.
//! - [`lattice`]: Newton polygons and the generic-genus count.
//! - [`elliptic`]: quadratic splits, binary-quartic invariants, j-invariant
//!   and Hauptmodul, modular-relation checks.
//! - [`ode`]: differential operators, series ODE guessing, symmetric squares.

#![no_std]

extern crate alloc;

pub mod curve;
pub mod diagonal;
pub mod elliptic;
pub mod lattice;
pub mod multipoly;
pub mod ode;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod series;
pub mod unirat;

pub use rational::BigRat;
