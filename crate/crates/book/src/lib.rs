//! The guide in `book/`, compiled so that its Rust listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}

#[doc = include_str!("../../../book/src/efficiency.md")]
pub mod efficiency {}

#[doc = include_str!("../../../book/src/quotes.md")]
pub mod quotes {}

#[doc = include_str!("../../../book/src/coin.md")]
pub mod coin {}

#[doc = include_str!("../../../book/src/kelly.md")]
pub mod kelly {}

#[doc = include_str!("../../../book/src/estimation.md")]
pub mod estimation {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
