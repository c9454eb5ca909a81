//! Δ⁻¹ on powers: the Bernoulli asymptotic series with optimal truncation,
//! the Hankel contour integral that sums it, and a cross-check of both
//! against the Hurwitz zeta function.

mod borel;
mod hankel;
mod series;

pub use borel::{
    borel_compare, leading_asymptote_residual, AsymptotePoint, AsymptoteReport, BorelComparison,
    RouteValue, MIN_ASYMPTOTE_X,
};
pub use hankel::{hankel_quadrature, HankelContour, HankelValue};
pub use series::{asymptotic_series, SeriesTruncation, Truncation};
