//! Sim-to-real optimization with a learned transferability function.
//!
//! A cheap simulator and an expensive, noisy "real" evaluator disagree on
//! parts of the search space. The search maximizes simulated fitness
//! together with a regression estimate of how well simulation matches
//! reality, refining that estimate with a handful of real trials.
//!
//! Modules, bottom-up:
//! - [`controller`]: sinusoidal motor set-points driven by two parameters.
//! - [`testbed`]: paired simulator / pseudo-reality evaluators.
//! - [`behavior`]: descriptors, disparity measures, transferability score.
//! - [`regression`]: inverse distance weighting and ordinary Kriging.
//! - [`moea`]: NSGA-II sorting, crowding and variation.
//! - [`treatments`]: the transferability loop and baseline treatments.
//! - [`landscape`]: full-grid maps, CSV and SVG heatmaps.
//! - [`harness`]: configuration, replicates, statistics and reports.

pub mod behavior;
pub mod controller;
pub mod error;
pub mod exec;
pub mod harness;
pub mod landscape;
pub mod moea;
pub mod regression;
pub mod seed;
pub mod testbed;
pub mod treatments;

pub use error::{Error, Result};
