//! Configuration ingestion and result serialization for the `stin-sim`
//! command-line runner.
//!
//! The config format is flat `key = value` text with dotted section names,
//! one-to-one with `--set key=value` overrides. Results go out as one CSV
//! per curve plus a JSON manifest that embeds the canonical config text, so
//! a manifest alone reproduces the run bit-for-bit.

pub mod config_text;
pub mod output;
