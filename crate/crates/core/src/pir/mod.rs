//! The retrieval scheme: code suites, query generation, the server
//! product, and recovery with the uniqueness check.

pub mod database;
pub mod fixture;
pub mod params;
pub mod query;
pub mod recover;
pub mod suite;

pub use database::Database;
pub use params::SchemeParams;
pub use query::{
    assemble_query, enforce_repair, lambda_check, query_gen, server_respond, LambdaCheck, Query,
    QueryOptions, QuerySecrets, Response,
};
pub use recover::{final_systems, recover, recovery_matrix, FinalSystem};
pub use suite::{build_gout, validate_suite, CodeSuite, ValidationReport};
