//! Acceptance criteria for geoquant live in `tests/acceptance.rs`.
