//! Brute-force rechecks of the closed forms, built on consistency testing.
//!
//! Each oracle constructs explicit witnesses (copies of an indiscernible
//! sequence, a candidate extension) and asks only whether the resulting
//! partial distance table extends to a metric.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::completion::is_consistent;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::extension::{Candidate, ExtensionProblem};
use crate::independence::{dedup, dmax_at, dmin_at, gamma_witness_at, independent_at, Independence};
use crate::space::{FiniteMetricSpace, PartialSemimetric};

/// Copies of `(b1, b2)` used when probing for dividing.
pub const DIVIDING_COPIES: usize = 3;
/// Copies of `(b1, b2)` used when sweeping for Γ.
pub const INTERVAL_COPIES: usize = 4;

/// Three `C`-indiscernible copies of `(b1, b2)` plus a point `x` realizing
/// `tp(a / C b1 b2)` over every copy at once. Returns whether that table is
/// consistent.
fn amalgam_consistent(s: &FiniteMetricSpace, a: usize, b: [usize; 2], c: &[usize], gamma: &Dist) -> bool {
    let w = gamma_witness_at(s, b, c, gamma, DIVIDING_COPIES);
    if !w.is_valid() {
        return false;
    }
    let mut t = w.candidate;
    let x = t.add_fresh_point("x");
    for (&ci, &k) in c.iter().zip(&w.base) {
        t.set_at(x, k, s.d(a, ci).clone());
    }
    for copy in &w.copies {
        for i in 0..2 {
            t.set_at(x, copy[i], s.d(a, b[i]).clone());
        }
    }
    is_consistent(&t)
}

/// Does `tp(a / C b1 b2)` divide over `C`? Decided by trying to realize it
/// over three indiscernible copies of `(b1, b2)` with the cross distance at
/// either end of Γ and at its midpoint.
pub fn divides_oracle(space: &FiniteMetricSpace, a: &str, b1: &str, b2: &str, c: &[&str]) -> Result<bool> {
    let a = space.index(a)?;
    let b = [space.index(b1)?, space.index(b2)?];
    let c = dedup(space.labels().resolve_all(c)?);
    let lo = dmin_at(space, b[0], b[1], &c);
    let hi = dmax_at(space, b[0], b[1], &c);
    let mid = lo.midpoint(&hi);
    Ok([lo, mid, hi].iter().any(|g| !amalgam_consistent(space, a, b, &c, g)))
}

/// The grid points `γ ∈ {0, 1/q, ..., 1}` for which four copies of
/// `(b1, b2)` over `C` with cross distance `γ` are consistent.
pub fn interval_oracle(space: &FiniteMetricSpace, b1: &str, b2: &str, c: &[&str], q: u32) -> Result<Vec<Dist>> {
    if q == 0 {
        return Err(Error::InvalidArgument("grid denominator must be positive".into()));
    }
    let b = [space.index(b1)?, space.index(b2)?];
    let c = space.labels().resolve_all(c)?;
    Ok(Dist::grid(q)
        .filter(|g| is_consistent(&gamma_witness_at(space, b, &c, g, INTERVAL_COPIES).candidate))
        .collect())
}

/// The grid points `γ` at which a copy `a'` of `a` over `B`, placed at `γ`
/// from `b_*`, gives a metric with `a'` independent from `B b_*` over `C`.
pub fn extension_oracle(prob: &ExtensionProblem, a: &str, q: u32) -> Result<Vec<Dist>> {
    if q == 0 {
        return Err(Error::InvalidArgument("grid denominator must be positive".into()));
    }
    let a = prob.space().index(a)?;
    if let Independence::Dependent(cert) = prob.single_independence(a) {
        return Err(Error::NotIndependent(cert.into()));
    }
    Ok(Dist::grid(q)
        .filter(|g| {
            let Candidate { table, targets, base, copies } = prob.candidate(&[(a, g.clone())]);
            if !is_consistent(&table) {
                return false;
            }
            let space = table.into_metric().expect("a consistent total table is a metric");
            independent_at(&space, &copies, &targets, &base).is_independent()
        })
        .collect())
}

/// Is there exactly one way to place a realization of `tp(a/C)` relative to
/// `b`?
///
/// The feasible distances form an interval (every constraint is linear in
/// the unknown distance) containing `d(a, b)`, and its endpoints are sums or
/// differences of given distances, so they lie on the grid of the common
/// denominator `q`. The interval is a single point iff neither grid
/// neighbour of `d(a, b)` is feasible.
pub fn unique_extension_oracle(space: &FiniteMetricSpace, a: &str, b: &str, c: &[&str]) -> Result<bool> {
    let (a, b) = (space.index(a)?, space.index(b)?);
    let c = dedup(space.labels().resolve_all(c)?);
    let mut q = BigUint::one();
    for &x in c.iter().chain([&b]) {
        q = q.lcm(&space.d(a, x).denom()).lcm(&space.d(b, x).denom());
    }
    let q = q
        .to_u32()
        .ok_or_else(|| Error::InvalidArgument(format!("grid denominator {q} is too large to sweep")))?;

    let mut t = PartialSemimetric::new(c.iter().map(|&i| space.label(i)))?;
    for (x, &ci) in c.iter().enumerate() {
        for (y, &cj) in c.iter().enumerate().skip(x + 1) {
            t.set_at(x, y, space.d(ci, cj).clone());
        }
    }
    // a separate copy of b even when b is in C, so the sweep never
    // overwrites a distance fixed by the type over C
    let bi = t.add_fresh_point(space.label(b));
    for (x, &ci) in c.iter().enumerate() {
        t.set_at(bi, x, space.d(b, ci).clone());
    }
    let copy = t.add_fresh_point(&format!("{}'", space.label(a)));
    for (x, &ci) in c.iter().enumerate() {
        t.set_at(copy, x, space.d(a, ci).clone());
    }
    let at = space.d(a, b);
    let step = Dist::frac(1, u64::from(q));
    let neighbours = [at.dotminus(&step), at.truncated_add(&step)];
    let feasible = |g: &Dist| {
        let mut t = t.clone();
        t.set_at(copy, bi, g.clone());
        is_consistent(&t)
    };
    debug_assert!(feasible(at), "a itself realizes d(a, b)");
    Ok(!neighbours.iter().any(|g| g != at && feasible(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::{divides_pair, gamma_interval, Interval};
    use crate::stationarity::has_unique_extension;

    fn d(p: u64, q: u64) -> Dist {
        Dist::frac(p, q)
    }

    fn running_example() -> FiniteMetricSpace {
        FiniteMetricSpace::from_pairs(
            ["b1", "b2", "c"],
            &[("b1", "c", d(2, 5)), ("b2", "c", d(1, 2)), ("b1", "b2", d(3, 5))],
        )
        .unwrap()
    }

    fn dividing_example() -> FiniteMetricSpace {
        FiniteMetricSpace::from_pairs(
            ["b1", "b2", "c", "a"],
            &[
                ("b1", "c", d(2, 5)),
                ("b2", "c", d(1, 2)),
                ("b1", "b2", d(1, 5)),
                ("a", "b1", d(1, 10)),
                ("a", "b2", d(1, 10)),
                ("a", "c", d(2, 5)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn divides_oracle_examples() {
        let s = dividing_example();
        assert!(divides_oracle(&s, "a", "b1", "b2", &["c"]).unwrap());
        assert!(!divides_oracle(&s, "c", "b1", "b2", &["c"]).unwrap());
        let t = FiniteMetricSpace::from_pairs(
            ["a", "b1", "b2"],
            &[("a", "b1", d(1, 2)), ("a", "b2", d(1, 2)), ("b1", "b2", d(3, 5))],
        )
        .unwrap();
        assert!(!divides_oracle(&t, "a", "b1", "b2", &[]).unwrap());
        assert!(!divides_pair(&t, "a", "b1", "b2", &[]).unwrap());
    }

    #[test]
    fn interval_oracle_examples() {
        let s = running_example();
        assert_eq!(
            interval_oracle(&s, "b1", "b2", &["c"], 20).unwrap(),
            Interval::new(d(1, 5), d(9, 10)).grid_points(20)
        );
        assert_eq!(
            interval_oracle(&s, "b1", "b1", &["c"], 20).unwrap(),
            Interval::new(Dist::ZERO, d(4, 5)).grid_points(20)
        );
        assert_eq!(
            interval_oracle(&s, "b1", "b2", &[], 20).unwrap(),
            gamma_interval(&s, "b1", "b2", &[]).unwrap().grid_points(20)
        );
        assert!(interval_oracle(&s, "b1", "b2", &[], 0).is_err());
    }

    #[test]
    fn extension_oracle_examples() {
        let s = FiniteMetricSpace::from_pairs(
            ["a", "b", "s"],
            &[("a", "b", d(1, 2)), ("s", "b", d(3, 5)), ("a", "s", d(1, 2))],
        )
        .unwrap();
        let p = ExtensionProblem::new(s.clone(), &["a"], &["b"], &[], "s").unwrap();
        assert_eq!(extension_oracle(&p, "a", 20).unwrap(), Interval::new(d(1, 2), d(7, 10)).grid_points(20));
        let p = ExtensionProblem::new(s, &["a"], &[], &[], "s").unwrap();
        assert_eq!(extension_oracle(&p, "a", 20).unwrap(), Interval::new(d(1, 2), Dist::ONE).grid_points(20));
    }

    #[test]
    fn unique_extension_oracle_examples() {
        let s = running_example();
        for (a, b, c) in [("b1", "b2", &["c"][..]), ("b1", "b2", &[]), ("c", "b2", &["c"]), ("b1", "b1", &["c"])] {
            assert_eq!(
                unique_extension_oracle(&s, a, b, c).unwrap(),
                has_unique_extension(&s, a, b, c).unwrap(),
                "{a} {b} {c:?}"
            );
        }
    }
}
