//! End-to-end numerical experiments.
//!
//! Every experiment draws sample `i` from its own random stream
//! ([`stream_rng`](crate::measures::stream_rng)) and merges results in index
//! order, so reports do not depend on the number of worker threads.

mod counterexample;
mod crosscheck;
mod escape;
mod haar;
mod profile;

pub use counterexample::EMPTY_WINDOW;
pub use counterexample::{counterexample_44, counterexample_case, CounterexampleCase, CounterexampleReport};
pub use crosscheck::{dual_oracle_batch, random_case, DualOracleCase, DualOracleReport};
pub use escape::{escape_measure, escape_scan, nondiv_decay_scan, DecayReport, SlopeFit};
pub use haar::{
    equidist_stability, equidist_test_k2, haar_points_k2, haar_sample_k2, haar_volume_k2, translate_mass,
    EquidistReport, HaarPoint, StabilityReport, HAAR_TRUNCATED_MASS, HAAR_Y_MAX,
};
pub use profile::{lambda1_profile, singular_profile, NamedInput, ProfilePoint, ProfileReport};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::WeightVector;
use crate::numeric::binomial_half_width;

/// One `(t, eps)` cell of an experiment report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub experiment: String,
    pub seed: u64,
    pub t: Vec<f64>,
    pub floor_t: f64,
    pub norm_t: f64,
    pub eps: f64,
    pub fraction: f64,
    pub ci: f64,
    pub n: usize,
    pub boundary_n: usize,
}

impl ReportRecord {
    /// Builds a record from `hits` out of `n` decided samples.
    pub fn from_counts(
        experiment: &str,
        seed: u64,
        t: &WeightVector,
        eps: f64,
        hits: usize,
        n: usize,
        boundary_n: usize,
    ) -> Self {
        let fraction = if n == 0 { f64::NAN } else { hits as f64 / n as f64 };
        ReportRecord {
            experiment: experiment.to_string(),
            seed,
            t: t.as_slice().to_vec(),
            floor_t: t.floor(),
            norm_t: t.norm(),
            eps,
            fraction,
            ci: binomial_half_width(hits, n),
            n,
            boundary_n,
        }
    }

    pub const CSV_HEADER: &'static str = "experiment,seed,t,floor_t,norm_t,eps,fraction,ci,n,boundary_n";

    /// CSV row; the `t` column joins coordinates with `;`.
    pub fn csv_row(&self) -> String {
        let t: Vec<String> = self.t.iter().map(|x| x.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.seed,
            t.join(";"),
            self.floor_t,
            self.norm_t,
            self.eps,
            self.fraction,
            self.ci,
            self.n,
            self.boundary_n
        )
    }
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T, F>(workers: usize, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    if workers == 0 {
        return Err(Error::argument("workers", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::argument("workers", e.to_string()))?;
    Ok(pool.install(f))
}
