//! Command-line front end for the subshift library.

pub mod app;
pub mod render;
