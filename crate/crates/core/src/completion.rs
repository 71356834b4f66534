//! Shortest-path completion of partial semimetrics and consistency testing.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PartialSemimetric};

/// An f-sequence `(x_0, ..., x_m)` whose endpoints are further apart than
/// the sum along it: `f(x_0, x_m) > f(x_0, x_1) + ... + f(x_{m-1}, x_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSequence {
    pub points: Vec<String>,
    /// `f(x_0, x_m)`
    pub direct: Dist,
    /// Truncated sum of `f` along consecutive points.
    pub length: Dist,
}

impl fmt::Display for FSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "): f(ends) = {} > {} along the sequence", self.direct, self.length)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Consistency {
    /// Carries the shortest-path completion, which extends `f`.
    Consistent(FiniteMetricSpace),
    Inconsistent(FSequence),
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent(_))
    }

    pub fn witness(&self) -> Option<&FSequence> {
        match self {
            Consistency::Consistent(_) => None,
            Consistency::Inconsistent(w) => Some(w),
        }
    }
}

/// Edge weights for the relaxation. When every defined distance has a
/// denominator dividing a common `unit` that fits comfortably in a machine
/// word, weights are scaled to integers and 1 becomes `unit`.
enum Weights {
    Scaled { unit: u64, input: Vec<u64>, dist: Vec<u64> },
    Exact(Vec<Dist>),
}

/// Largest common denominator handled by the integer path.
const MAX_UNIT: u64 = 1 << 40;

fn scaled(p: &PartialSemimetric) -> Option<(u64, Vec<u64>)> {
    let n = p.len();
    let mut unit: u64 = 1;
    for (_, _, v) in p.defined_pairs() {
        let (_, q) = v.small_parts()?;
        let q = q as u64;
        unit = (unit / num_integer::gcd(unit, q)).checked_mul(q)?;
        if unit > MAX_UNIT {
            return None;
        }
    }
    let mut w = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            w.push(match p.get(i, j) {
                Some(v) => {
                    let (a, q) = v.small_parts().expect("checked above");
                    a as u64 * (unit / q as u64)
                }
                None => unit,
            });
        }
    }
    Some((unit, w))
}

struct Closure {
    n: usize,
    weights: Weights,
    next: Vec<Option<usize>>,
}

impl Closure {
    /// All-pairs relaxation over (min, truncated +). Undefined pairs start
    /// at 1, which is also the value of any path whose sum reaches 1.
    fn of(p: &PartialSemimetric) -> Closure {
        let n = p.len();
        let mut next = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                next.push(p.get(i, j).map(|_| j));
            }
        }
        let weights = match scaled(p) {
            Some((unit, input)) => {
                let mut dist = input.clone();
                for k in 0..n {
                    for i in 0..n {
                        let ik = dist[i * n + k];
                        if ik >= unit {
                            continue;
                        }
                        for j in 0..n {
                            let via = (ik + dist[k * n + j]).min(unit);
                            if via < dist[i * n + j] {
                                dist[i * n + j] = via;
                                next[i * n + j] = next[i * n + k];
                            }
                        }
                    }
                }
                Weights::Scaled { unit, input, dist }
            }
            None => {
                let mut dist: Vec<Dist> = (0..n * n)
                    .map(|ij| p.get(ij / n, ij % n).cloned().unwrap_or(Dist::ONE))
                    .collect();
                for k in 0..n {
                    for i in 0..n {
                        let ik = dist[i * n + k].clone();
                        if ik.is_one() {
                            continue;
                        }
                        for j in 0..n {
                            let via = ik.truncated_add(&dist[k * n + j]);
                            if via < dist[i * n + j] {
                                dist[i * n + j] = via;
                                next[i * n + j] = next[i * n + k];
                            }
                        }
                    }
                }
                Weights::Exact(dist)
            }
        };
        Closure { n, weights, next }
    }

    /// Is the completed distance strictly below the defined one?
    fn shrinks(&self, i: usize, j: usize, f: &Dist) -> bool {
        let ij = i * self.n + j;
        match &self.weights {
            Weights::Scaled { input, dist, .. } => dist[ij] < input[ij],
            Weights::Exact(dist) => dist[ij] < *f,
        }
    }

    fn value(&self, i: usize, j: usize) -> Dist {
        let ij = i * self.n + j;
        match &self.weights {
            Weights::Scaled { unit, dist, .. } => Dist::from_small_parts(dist[ij] as i64, *unit as i64),
            Weights::Exact(dist) => dist[ij].clone(),
        }
    }

    fn into_space(self, p: &PartialSemimetric) -> FiniteMetricSpace {
        let n = self.n;
        let table = (0..n * n).map(|ij| self.value(ij / n, ij % n)).collect();
        FiniteMetricSpace::from_table_unchecked(p.labels().clone(), table)
    }

    fn path(&self, i: usize, j: usize) -> Vec<usize> {
        let mut path = vec![i];
        let mut at = i;
        while at != j {
            at = self.next[at * self.n + j].expect("path exists below 1");
            path.push(at);
        }
        path
    }
}

/// Minimal-path completion: `d(x, y)` is the least truncated length of an
/// f-sequence from `x` to `y`, and 1 when none exists.
pub fn path_completion(p: &PartialSemimetric) -> FiniteMetricSpace {
    Closure::of(p).into_space(p)
}

/// Decides whether some pseudometric extends `p`. On failure the witness is
/// a shortest f-sequence beating a defined distance.
pub fn check_consistency(p: &PartialSemimetric) -> Consistency {
    let closure = Closure::of(p);
    for (i, j, f) in p.defined_pairs() {
        if closure.shrinks(i, j, f) {
            let points = closure.path(i, j).into_iter().map(|k| p.label(k).into()).collect();
            return Consistency::Inconsistent(FSequence { points, direct: f.clone(), length: closure.value(i, j) });
        }
    }
    Consistency::Consistent(closure.into_space(p))
}

pub fn is_consistent(p: &PartialSemimetric) -> bool {
    let closure = Closure::of(p);
    !p.defined_pairs().any(|(i, j, f)| closure.shrinks(i, j, f))
}

/// Direct enumeration of every f-sequence with exactly `m` steps (points may
/// repeat). Returns the first sequence violating `m`-transitivity.
pub fn m_transitivity_violation(p: &PartialSemimetric, m: usize) -> Result<Option<FSequence>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m-transitivity needs m >= 1".into()));
    }
    let n = p.len();
    let neighbours: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| p.get(i, j).is_some()).collect()).collect();

    struct Search<'a> {
        p: &'a PartialSemimetric,
        neighbours: &'a [Vec<usize>],
        m: usize,
        ceiling: Dist,
        stack: Vec<usize>,
    }

    impl Search<'_> {
        fn walk(&mut self, length: Dist) -> Option<FSequence> {
            // no target further than `ceiling` from x_0 can beat this length
            if length >= self.ceiling {
                return None;
            }
            let start = self.stack[0];
            let last = *self.stack.last().expect("nonempty");
            if self.stack.len() == self.m + 1 {
                let direct = self.p.get(start, last)?;
                if *direct > length {
                    return Some(FSequence {
                        points: self.stack.iter().map(|&k| self.p.label(k).into()).collect(),
                        direct: direct.clone(),
                        length,
                    });
                }
                return None;
            }
            for &next in &self.neighbours[last] {
                let step = self.p.get(last, next).expect("neighbour is defined");
                self.stack.push(next);
                let found = self.walk(length.truncated_add(step));
                self.stack.pop();
                if found.is_some() {
                    return found;
                }
            }
            None
        }
    }

    for start in 0..n {
        let ceiling = neighbours[start]
            .iter()
            .filter_map(|&j| p.get(start, j))
            .max()
            .cloned()
            .unwrap_or(Dist::ZERO);
        let mut search = Search { p, neighbours: &neighbours, m, ceiling, stack: vec![start] };
        if let Some(w) = search.walk(Dist::ZERO) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// `f(x_0, x_m) <= f[x]` for every f-sequence with `m` steps.
pub fn check_m_transitive(p: &PartialSemimetric, m: usize) -> Result<bool> {
    Ok(m_transitivity_violation(p, m)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: u64, q: u64) -> Dist {
        Dist::frac(p, q)
    }

    fn xyz(pairs: &[(&str, &str, Dist)]) -> PartialSemimetric {
        let mut p = PartialSemimetric::new(["x", "y", "z"]).unwrap();
        for (a, b, v) in pairs {
            p.define(a, b, v.clone()).unwrap();
        }
        p
    }

    #[test]
    fn single_forced_path() {
        let p = xyz(&[("x", "y", d(3, 10)), ("y", "z", d(2, 5))]);
        let s = path_completion(&p);
        assert_eq!(s.dist("x", "z").unwrap(), &d(7, 10));
    }

    #[test]
    fn forced_path_truncates() {
        let p = xyz(&[("x", "y", d(4, 5)), ("y", "z", d(9, 10))]);
        assert_eq!(path_completion(&p).dist("x", "z").unwrap(), &Dist::ONE);
    }

    #[test]
    fn disconnected_pair_is_one() {
        let p = PartialSemimetric::new(["x", "y"]).unwrap();
        let s = path_completion(&p);
        assert_eq!(s.dist("x", "y").unwrap(), &Dist::ONE);
        assert_eq!(s.dist("x", "x").unwrap(), &Dist::ZERO);
    }

    #[test]
    fn two_transitivity_failure() {
        let p = xyz(&[("x", "y", d(9, 10)), ("y", "z", d(1, 10)), ("x", "z", d(3, 10))]);
        let w = check_consistency(&p).witness().cloned().expect("inconsistent");
        assert_eq!(w.points, ["x", "z", "y"]);
        assert_eq!(w.direct, d(9, 10));
        assert_eq!(w.length, d(2, 5));
        assert_eq!(check_m_transitive(&p, 2), Ok(false));
        assert_eq!(check_m_transitive(&p, 1), Ok(true));
    }

    #[test]
    fn total_metric_is_consistent_and_fixed() {
        let p = xyz(&[("x", "y", d(1, 2)), ("y", "z", d(1, 3)), ("x", "z", d(2, 3))]);
        match check_consistency(&p) {
            Consistency::Consistent(s) => assert_eq!(s.to_partial(), p),
            Consistency::Inconsistent(w) => panic!("{w}"),
        }
        for m in 1..=3 {
            assert_eq!(check_m_transitive(&p, m), Ok(true));
        }
    }

    #[test]
    fn m_zero_rejected() {
        let p = xyz(&[]);
        assert!(matches!(check_m_transitive(&p, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn long_cycle_needs_high_m() {
        // a 4-cycle with one long edge: only the 3-step detour exposes it
        let mut p = PartialSemimetric::new(["a", "b", "c", "e"]).unwrap();
        p.define("a", "b", d(1, 10)).unwrap();
        p.define("b", "c", d(1, 10)).unwrap();
        p.define("c", "e", d(1, 10)).unwrap();
        p.define("a", "e", d(1, 2)).unwrap();
        assert_eq!(check_m_transitive(&p, 2), Ok(true));
        assert_eq!(check_m_transitive(&p, 3), Ok(false));
        let w = check_consistency(&p).witness().cloned().unwrap();
        assert_eq!(w.length, d(3, 10));
    }
}
