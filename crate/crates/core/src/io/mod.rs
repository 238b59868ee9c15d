//! File formats, configuration and the deterministic generator.

pub mod config;
pub mod csv;
pub mod factorization_text;
pub mod matrix_market;
pub mod rng;

pub use config::RunConfig;
pub use csv::{format_sweep_csv, write_sweep_csv};
pub use factorization_text::{format_factorization, parse_factorization, read_factorization, write_factorization};
pub use matrix_market::{format_matrix_market, parse_matrix_market, read_matrix_market, read_vector, write_matrix_market, write_vector};
pub use rng::Lcg;
