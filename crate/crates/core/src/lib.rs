//! Power-law tails of PageRank and In-Degree.
//!
//! The crate couples three views of the same quantity:
//!
//! * [`graph`]: PageRank of an explicit directed graph, computed by power
//!   iteration in the "mean one" scaling `PR(i) = c Σ_{j→i} PR(j)/d_j + (1−c)`.
//! * [`fixedpoint`]: the law of the PageRank of a random page modelled as the
//!   solution of `R = (c/d) Σ_{j=1}^{N} R_j + (1−c)`, where the in-degree `N`
//!   is a Poisson count over a regularly varying interval `T` ([`rvmodel`]).
//!   Solved by population dynamics.
//! * [`theory`]: the asymptotic tail factor `c^α / (d^α − c^α d)` relating the
//!   two tails, and a numerical solver for the Laplace–Stieltjes transform of
//!   `R`.
//!
//! [`tailstats`] supplies the empirical side (CCDF tables, maximum-likelihood
//! tail index), and [`growingnet`] generates preferential-attachment graphs
//! with uniform mixing.
//!
//! Numerical code is generic over a [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix `f64`, which is what the CLI and the acceptance suite
//! use.

pub mod error;
pub mod fixedpoint;
pub mod graph;
pub mod growingnet;
pub mod rvmodel;
pub mod sample;
pub mod scalar;
pub mod seed;
pub mod tailstats;
pub mod theory;

pub use error::{Error, Result};

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use scalar::Scalar;

pub use fixedpoint::{iterate_generation, lower_bound_samples, solve_r, GenerationDiagnostics, SolveConfig};
pub use graph::{
    degree_histograms, pagerank, parse_edge_list, Dangling, DirectedGraph, Duplicates, PageRankConfig, ParsedGraph,
};
pub use growingnet::{attachment_probabilities, generate, GrowthParams};
pub use rvmodel::{
    pareto_scale_for_mean, sample_in_degree, sample_t, FixedInDegree, InDegreeSampler, IntervalLaw, SlowlyVarying,
};
pub use sample::{SampleSet, SampleSource};
pub use tailstats::{ccdf, fit_tail_mle, log_ccdf_offset, top_decade_fit, xmin_for_top_fraction, QuantileBand};
pub use theory::{factor, predicted_ccdf_ratio, solve_lst, write_factor_table, LstGridSpec, LstOracle};

/// Double-precision model parameters `(c, d, α)`.
pub type ModelParams = fixedpoint::ModelParams<f64>;
/// Double-precision pool of `R` samples.
pub type GenerationPool = fixedpoint::GenerationPool<f64>;
/// Double-precision result of a fixed-point run.
pub type RSolution = fixedpoint::RSolution<f64>;
/// Double-precision tail specification of `T`.
pub type TailSpec = rvmodel::TailSpec<f64>;
/// Double-precision in-degree model `N(T)`.
pub type InDegreeModel = rvmodel::InDegreeModel<f64>;
/// Double-precision sample set.
pub type Samples = SampleSet<f64>;
/// Double-precision PageRank vector.
pub type PageRankVector = graph::PageRankVector<f64>;
/// Double-precision CCDF table.
pub type CcdfTable = tailstats::CcdfTable<f64>;
/// Double-precision tail fit.
pub type TailFit = tailstats::TailFit<f64>;
/// Double-precision factor prediction.
pub type FactorPrediction = theory::FactorPrediction<f64>;
/// Double-precision LST grid.
pub type LstGrid = theory::LstGrid<f64>;
