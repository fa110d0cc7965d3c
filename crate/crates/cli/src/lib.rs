//! Script language and command-line front end for `chow-core`.

pub mod schema;
pub mod session;
pub mod syntax;
