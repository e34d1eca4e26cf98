//! Exact rational arithmetic: truncated power series over the rationals,
//! half-integer beta moments, and exact series generators for K, E, 2F1 and
//! the diagonal susceptibility sectors.

mod generators;
mod moments;
mod phi0;
mod series;

pub use generators::{ff_exact_series, series_2f1, series_chid, series_e, series_k};
pub use moments::{beta_moment, half_moment};
pub use phi0::{phi0_transform, QSeriesSparse};
pub use series::{rat, rat_from_str, rat_to_f64, ExactSeries, Rat, Variable};
