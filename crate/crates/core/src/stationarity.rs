//! Unique extensions and stationary types.
//!
//! `tp(a/C)` has a unique extension to `C ∪ {b}` exactly when
//! `d_max(a, b/C) = d*_min(a, b/C)`, in which case that extension is also the
//! only nonforking one. A type over a finite `C` is stationary iff every
//! coordinate lies in the closure of `C`, which for a finite set means at
//! distance 0 from one of its points.

use alloc::vec::Vec;

use crate::dist::Dist;
use crate::error::Result;
use crate::independence::{dedup, dmax_at, dstar_min_at};
use crate::space::FiniteMetricSpace;

/// `max_{c ∈ C} |d(a, c) - d(b, c)|`, 0 for empty `C`.
pub fn dstar_min(space: &FiniteMetricSpace, a: &str, b: &str, c: &[&str]) -> Result<Dist> {
    let (i, j) = (space.index(a)?, space.index(b)?);
    Ok(dstar_min_at(space, i, j, &space.labels().resolve_all(c)?))
}

pub(crate) fn unique_at(s: &FiniteMetricSpace, a: usize, b: usize, c: &[usize]) -> bool {
    dmax_at(s, a, b, c) == dstar_min_at(s, a, b, c)
}

/// Is the distance from a realization of `tp(a/C)` to `b` forced?
pub fn has_unique_extension(space: &FiniteMetricSpace, a: &str, b: &str, c: &[&str]) -> Result<bool> {
    let (i, j) = (space.index(a)?, space.index(b)?);
    Ok(unique_at(space, i, j, &space.labels().resolve_all(c)?))
}

/// Every coordinate sits at distance 0 from some point of `C`.
pub fn is_stationary(space: &FiniteMetricSpace, a: &[&str], c: &[&str]) -> Result<bool> {
    let labels = space.labels();
    let (a, c) = (labels.resolve_all(a)?, labels.resolve_all(c)?);
    Ok(a.iter().all(|&x| c.iter().any(|&y| space.d(x, y).is_zero())))
}

/// Does `tp(a/C)` have a unique extension to `B`? Points of `C` missing from
/// `B` are added to it.
pub fn unique_extension_to(space: &FiniteMetricSpace, a: &[&str], c: &[&str], b: &[&str]) -> Result<bool> {
    let labels = space.labels();
    let (a, c) = (labels.resolve_all(a)?, labels.resolve_all(c)?);
    let b: Vec<usize> = dedup(labels.resolve_all(b)?.into_iter().chain(c.iter().copied()).collect());
    Ok(a.iter().all(|&x| b.iter().all(|&y| unique_at(space, x, y, &c))))
}
