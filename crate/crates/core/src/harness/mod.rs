pub mod config;
pub mod csvio;
pub mod generators;
pub mod run;
pub mod svg;
