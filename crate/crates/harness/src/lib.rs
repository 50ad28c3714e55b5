//! Generators, file formats, exact oracles and the benchmark runner around the
//! `daride-core` solvers.

pub mod bench;
pub mod format;
pub mod gen;
pub mod oracle;

pub use bench::{bench, Algorithm, BenchConfig, BenchError, BenchRow};
pub use format::{read_instance, read_schedule, write_instance, write_schedule, FormatError};
pub use gen::{gen, Cage, GenError, GenSpec, Load};
pub use oracle::{oracle_cvrp, oracle_makespan, OracleError, OracleSolution};
