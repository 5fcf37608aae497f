//! The guide's code listings, compiled and run by `cargo test --doc`.
//!
//! mdbook cannot link listings against workspace crates, so each chapter is
//! pulled in as the docs of an empty module instead.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/statevector.md")]
pub mod statevector {}
#[doc = include_str!("../../../book/src/ghz-like-states.md")]
pub mod ghz_like_states {}
#[doc = include_str!("../../../book/src/protocol.md")]
pub mod protocol {}
#[doc = include_str!("../../../book/src/eavesdroppers.md")]
pub mod eavesdroppers {}
#[doc = include_str!("../../../book/src/entangle-measure.md")]
pub mod entangle_measure {}
#[doc = include_str!("../../../book/src/post-processing.md")]
pub mod post_processing {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
