//! The chapters of `book/` as doc comments, so that `cargo test` runs every
//! code block in the guide against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/exponents.md")]
pub mod exponents {}
#[doc = include_str!("../../../book/src/loewner.md")]
pub mod loewner {}
#[doc = include_str!("../../../book/src/estimation.md")]
pub mod estimation {}
#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}
#[doc = include_str!("../../../book/src/lab.md")]
pub mod lab {}
#[doc = include_str!("../../../book/src/reproducibility.md")]
pub mod reproducibility {}
