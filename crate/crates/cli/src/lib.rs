//! Command implementations and scenario parsing behind the `relbell`
//! binary. Kept as a library so integration tests can call the commands
//! without spawning processes.

pub mod commands;
pub mod scenario;
pub mod text;
