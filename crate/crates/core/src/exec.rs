//! Data-parallel task driver.
//!
//! Verification suites are embarrassingly parallel over (margins, case,
//! trial) tasks and every task is a pure function, so the driver just maps a
//! closure over a task list. The rayon path is compiled behind the `parallel`
//! feature (default on); the sequential path is always available and is what
//! the feature falls back to. Output order equals input order either way, so
//! reports are byte-identical across modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to drive a task list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Data-parallel over the tasks; `jobs` caps the worker count, `None`
    /// uses the available parallelism. Falls back to sequential when the
    /// crate is built without the `parallel` feature.
    Parallel {
        jobs: Option<usize>,
    },
}

impl Default for ExecMode {
    fn default() -> Self {
        ExecMode::Parallel { jobs: None }
    }
}

/// Order-preserving map over the tasks.
pub fn map_tasks<T, R, F>(tasks: Vec<T>, mode: ExecMode, f: F) -> Vec<R>
where
    T: Send + Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        ExecMode::Sequential => tasks.iter().map(f).collect(),
        ExecMode::Parallel { jobs } => run_parallel(tasks, jobs, f),
    }
}

#[cfg(feature = "parallel")]
fn run_parallel<T, R, F>(tasks: Vec<T>, jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Send + Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match jobs {
        None => tasks.par_iter().map(f).collect(),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .expect("thread pool construction");
            pool.install(|| tasks.par_iter().map(f).collect())
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<T, R, F>(tasks: Vec<T>, _jobs: Option<usize>, f: F) -> Vec<R>
where
    T: Send + Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    tasks.iter().map(f).collect()
}
