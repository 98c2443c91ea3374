pub mod cli;
pub mod error;
pub mod group;
pub mod hom;
pub mod input;
pub mod period;
pub mod report;
pub mod scan;
pub mod strings;
pub mod theorem;
pub mod word;
