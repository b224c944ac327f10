//! Recursive GDC constructions (filling groups, adjoining points, the
//! fundamental construction, inflation), shortening, and the pipeline runner.

mod ops;
pub mod pipeline;

pub use ops::{adjoin_points, fill_groups, fundamental, inflate, shorten};
pub use pipeline::{run_pipeline, write_artifacts, Context, Pipeline, PipelineReport, StepStatus};
