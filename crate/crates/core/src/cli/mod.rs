//! Expression language and command-line frontend.

pub mod commands;
pub mod expr;
