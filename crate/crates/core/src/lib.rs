//! Sums of dilates `A + t·A` in `Z/pZ` and in `Z`.
//!
//! The crate is organised along the lower-bound argument for `|A + t·A|`:
//!
//! * [`residue`]: exact set arithmetic, dilation, sumsets, affine canonical forms.
//! * [`bounds`]: the bound functions `f_t`, the critical densities `c_t^(0)`,
//!   the concentration function `M(β, η)` and the constants `w(t)`.
//! * [`fourier`]: spectra of indicator functions and the Fourier bias bound.
//! * [`localize`]: best cyclic windows and the concentration guarantee.
//! * [`rectify`]: lifting short windows to the integers and the full pipeline.
//! * [`search`]: exhaustive and sampled ground truth.

pub mod bitset;
pub mod bounds;
pub mod error;
pub mod fourier;
pub mod literal;
pub mod localize;
pub mod rectify;
pub mod residue;
pub mod roots;
pub mod search;

pub use bounds::{BoundProfile, ConcentrationBound, ReferenceRule, WTable};
pub use error::{Error, Result};
pub use fourier::FourierSpectrum;
pub use localize::{ConcentrationCheck, DichotomyBranch, IntervalWindow};
pub use rectify::{PipelineTrace, RectificationCheck, StepRecord, Verdict};
pub use residue::{IntegerSet, ResidueSet};
pub use search::{LowerBoundReport, SampleMode, SearchReport};
