//! Independence in databases and teams, decided directly and through finite
//! Boolean algebras, with a workbench for the countable atomless algebra.

pub mod algebra;
pub mod atomless;
pub mod cli;
pub mod dsl;
pub mod report;
pub mod team;
