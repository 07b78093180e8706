//! Weighted set multi-cover over a small item universe.
//!
//! Given `n` weighted sets over `ell` items and per-item demands `Q_g`,
//! select a minimum-total-weight sub-family covering every item `g` at least
//! `Q_g` times, each input set usable at most once. The universe is assumed
//! small: item subsets live in machine-word bitmasks, and the exact solver's
//! state space is the demand box.
//!
//! Solvers:
//! - [`exact::solve_dp`]: exact optimum by dynamic programming over residual
//!   demand vectors; [`exact::solve_bruteforce`] is a small-`n` oracle.
//! - [`approx::solve_two_approx`]: LP relaxation with one variable per set,
//!   then deterministic rounding; factor 2.
//! - [`approx::solve_two_eps`]: the same rounding driven by a piecewise-linear
//!   compression of each bucket's cost curve; factor 2+ε with an LP whose size
//!   is independent of `n` up to log factors.
//! - [`baselines::solve_greedy`] and [`baselines::solve_rrlp`]: comparison
//!   baselines (cover-to-weight greedy; LP randomized rounding with repair).
//!
//! [`generate`] provides seeded instance generators and the RSS
//! over-satisfaction metric; [`lp`] is the self-contained bounded-variable
//! simplex used by the LP pipelines.
//!
//! ```
//! use multicover::instance::{Instance, SetRecord};
//!
//! let inst = Instance::new(
//!     vec!["a".into(), "b".into()],
//!     vec![1, 1],
//!     vec![SetRecord::new(1.0, &[0]), SetRecord::new(1.5, &[0, 1])],
//! )
//! .unwrap();
//! let opt = multicover::exact::solve_dp(&inst).unwrap();
//! assert_eq!(opt.selected, vec![1]);
//! assert_eq!(opt.total_weight, 1.5);
//! ```

pub mod approx;
pub mod baselines;
pub mod error;
pub mod exact;
pub mod generate;
pub mod instance;
pub mod lp;
pub mod piecewise;

pub use error::{Error, Result};
