//! The book chapters, compiled so that every Rust listing in them runs as a
//! doctest. Each chapter gets its own module, which makes a failing listing
//! easier to trace back to its file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/rounding.md")]
pub mod rounding {}

#[doc = include_str!("../../../book/src/derandomization.md")]
pub mod derandomization {}

#[doc = include_str!("../../../book/src/linear-programs.md")]
pub mod linear_programs {}

#[doc = include_str!("../../../book/src/routing.md")]
pub mod routing {}

#[doc = include_str!("../../../book/src/coverage.md")]
pub mod coverage {}

#[doc = include_str!("../../../book/src/ptas.md")]
pub mod ptas {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
