pub mod config;
pub mod document;
pub mod error;
pub mod matrix_file;
pub mod run;
pub mod scan;
