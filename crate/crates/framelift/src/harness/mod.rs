//! Corpus generation and end-to-end verification runs.

pub mod corpus;
pub mod dowling;
pub mod pipeline;
pub mod verify;

pub use corpus::{generate_corpus, CorpusSpec, GainKind, Instance};
pub use dowling::{dowling, DowlingReport};
pub use pipeline::{
    expansion_pipeline_affino, expansion_pipeline_frame, subgroup_fiber_points, PipelineReport,
};
pub use verify::{
    verify_canonical, verify_instance, verify_menelaean, verify_menelaean_rep, TheoremTag,
    VerificationReport,
};

use crate::error::Result;
use rayon::prelude::*;

/// Verifies every applicable (tag, instance) pair, in parallel when asked;
/// reports come back sorted by (instance id, tag) regardless of scheduling.
pub fn verify_corpus(
    tags: &[TheoremTag],
    instances: &[Instance],
    cap: usize,
    seed: u64,
    jobs: usize,
) -> Result<Vec<VerificationReport>> {
    let work: Vec<(TheoremTag, &Instance)> = instances
        .iter()
        .flat_map(|inst| {
            tags.iter()
                .filter(|t| t.applies_to(&inst.phi))
                .map(move |t| (*t, inst))
        })
        .collect();
    let run = |(tag, inst): &(TheoremTag, &Instance)| verify_instance(*tag, inst, cap, seed);
    let mut reports: Vec<VerificationReport> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| crate::error::Error::input(format!("thread pool: {e}")))?;
        pool.install(|| work.par_iter().map(run).collect::<Result<Vec<_>>>())?
    } else {
        work.iter().map(|w| run(w)).collect::<Result<Vec<_>>>()?
    };
    reports.sort_by(|a, b| (&a.instance, &a.tag).cmp(&(&b.instance, &b.tag)));
    Ok(reports)
}
