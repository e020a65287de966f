//! Property and oracle tests that span several modules. They live in the
//! library's unit-test target so they run ahead of the acceptance suite.

mod numerics;
mod structure;
