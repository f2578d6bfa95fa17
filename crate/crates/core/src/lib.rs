//! Compound-tree parallel rendering without GPUs: a declarative resource and
//! display configuration, per-frame task decomposition, software compositing
//! kernels and schedules, image codecs, reactive load balancing, and a
//! deterministic discrete-event cluster simulator that executes the real
//! kernels.
//!
//! Everything is reproducible by construction: simulated time is integer
//! nanoseconds, renderers are pure functions of their context, and parallel
//! execution merges worker results in a fixed order.

pub mod codecs;
pub mod compositing;
pub mod config;
pub mod equalizers;
pub mod geometry;
pub mod runner;
pub mod simrender;
pub mod tasking;
pub mod util;
