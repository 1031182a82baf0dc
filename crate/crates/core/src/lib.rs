pub mod circle;
pub mod cli;
pub mod cyclotomic;
pub mod distribution;
pub mod error;
pub mod format;
pub mod fuzz;
pub mod oracle;
pub mod rational;
pub mod titchmarsh;
