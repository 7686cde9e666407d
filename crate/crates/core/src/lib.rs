pub mod cli;
pub mod encoder;
pub mod gridmodel;
pub mod kripke;
pub mod semantics;
pub mod syntax;
pub mod turing;
