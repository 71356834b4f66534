//! Nonforking extension of types to one new point.
//!
//! Given parameter sets `C ⊆ B` and a point `b_*`, a copy `a'` of `a` over `B`
//! can be placed at distance `γ` from `b_*` without forking over `C` exactly
//! when `γ` lies in `[max(L(a), d_max(b_*, b_*/C) / 2), U(a)]`, where
//!
//! * `U(a) = min_{b ∈ B} (d(a, b) + δ_b)`
//! * `L(a) = max_{b ∈ B} max(ε_b ∸ d(a, b), d(a, b) ∸ δ_b)`
//!
//! with `δ_b = d_min(b_*, b/C)` and `ε_b = d_max(b_*, b/C)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::independence::{dedup, dmax_at, dmin_at, independent_at, Independence, Interval};
use crate::space::{FiniteMetricSpace, PartialSemimetric};

/// A space with roles `A`, `C ⊆ B` and a target point `b_*`.
///
/// `B` is always taken to include `C`: the constructor adds any point of `C`
/// missing from `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionProblem {
    space: FiniteMetricSpace,
    a: Vec<usize>,
    b: Vec<usize>,
    c: Vec<usize>,
    b_star: usize,
}

/// One point of an extension: the copy `label` of `source`, placed at
/// distance `gamma` from `b_*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedPoint {
    pub source: String,
    pub label: String,
    pub gamma: Dist,
}

/// The extended space on `B ∪ {b_*} ∪ A'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub space: FiniteMetricSpace,
    pub points: Vec<ExtendedPoint>,
}

/// The total table for a tentative extension, before any validation.
pub(crate) struct Candidate {
    pub table: PartialSemimetric,
    /// `B ∪ {b_*}` inside `table`.
    pub targets: Vec<usize>,
    /// `C` inside `table`.
    pub base: Vec<usize>,
    /// The copies of `A`, in order.
    pub copies: Vec<usize>,
}

impl ExtensionProblem {
    pub fn new(space: FiniteMetricSpace, a: &[&str], b: &[&str], c: &[&str], b_star: &str) -> Result<Self> {
        let labels = space.labels();
        let a = dedup(labels.resolve_all(a)?);
        let c = dedup(labels.resolve_all(c)?);
        let b = dedup(labels.resolve_all(b)?.into_iter().chain(c.iter().copied()).collect());
        let b_star = labels.resolve(b_star)?;
        Ok(ExtensionProblem { space, a, b, c, b_star })
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    fn names(&self, idx: &[usize]) -> Vec<&str> {
        idx.iter().map(|&i| self.space.label(i)).collect()
    }

    pub fn a(&self) -> Vec<&str> {
        self.names(&self.a)
    }

    pub fn b(&self) -> Vec<&str> {
        self.names(&self.b)
    }

    pub fn c(&self) -> Vec<&str> {
        self.names(&self.c)
    }

    pub fn b_star(&self) -> &str {
        self.space.label(self.b_star)
    }

    /// `δ_b = d_min(b_*, b / C)`.
    fn delta(&self, b: usize) -> Dist {
        dmin_at(&self.space, self.b_star, b, &self.c)
    }

    /// `ε_b = d_max(b_*, b / C)`.
    fn epsilon(&self, b: usize) -> Dist {
        dmax_at(&self.space, self.b_star, b, &self.c)
    }

    pub(crate) fn upper_at(&self, a: usize) -> Dist {
        let s = &self.space;
        self.b
            .iter()
            .map(|&b| s.d(a, b).truncated_add(&self.delta(b)))
            .min()
            .unwrap_or(Dist::ONE)
    }

    pub(crate) fn lower_at(&self, a: usize) -> Dist {
        let s = &self.space;
        self.b
            .iter()
            .map(|&b| {
                let dab = s.d(a, b);
                self.epsilon(b).dotminus(dab).max(dab.dotminus(&self.delta(b)))
            })
            .max()
            .unwrap_or(Dist::ZERO)
    }

    /// `d_max(b_*, b_* / C) / 2`, the least `γ` with `γ + γ ≥ d_max(b_*, b_* / C)`.
    pub fn half(&self) -> Dist {
        dmax_at(&self.space, self.b_star, self.b_star, &self.c).div_int(2)
    }

    pub fn upper_u(&self, a: &str) -> Result<Dist> {
        Ok(self.upper_at(self.space.index(a)?))
    }

    pub fn lower_l(&self, a: &str) -> Result<Dist> {
        Ok(self.lower_at(self.space.index(a)?))
    }

    /// Does `{a}` fork with `B` over `C`?
    pub(crate) fn single_independence(&self, a: usize) -> Independence {
        independent_at(&self.space, &[a], &self.b, &self.c)
    }

    pub(crate) fn admissible_at(&self, a: usize) -> Result<Interval> {
        let lo = self.lower_at(a).max(self.half());
        let interval = Interval::new(lo, self.upper_at(a));
        if interval.is_empty() {
            if let Independence::Dependent(cert) = self.single_independence(a) {
                return Err(Error::NotIndependent(cert.into()));
            }
        }
        Ok(interval)
    }

    /// The distances `γ` at which a copy of `a` over `B` can sit from `b_*`
    /// while staying independent from `B b_*` over `C`.
    pub fn admissible_gammas(&self, a: &str) -> Result<Interval> {
        self.admissible_at(self.space.index(a)?)
    }

    /// Lays out `B ∪ {b_*}` plus one copy of each listed point of `A`, with the
    /// given distance to `b_*`. Nothing is validated.
    pub(crate) fn candidate(&self, placed: &[(usize, Dist)]) -> Candidate {
        let s = &self.space;
        let mut targets = self.b.clone();
        if !targets.contains(&self.b_star) {
            targets.push(self.b_star);
        }
        let mut table = PartialSemimetric::new(targets.iter().map(|&i| s.label(i))).expect("distinct labels");
        for x in 0..targets.len() {
            for y in (x + 1)..targets.len() {
                table.set_at(x, y, s.d(targets[x], targets[y]).clone());
            }
        }
        let star = targets.iter().position(|&t| t == self.b_star).expect("b_* is a target");
        let mut copies: Vec<usize> = Vec::with_capacity(placed.len());
        for (k, (a, gamma)) in placed.iter().enumerate() {
            let me = table.add_fresh_point(&format!("{}'", s.label(*a)));
            for (x, &t) in targets.iter().enumerate() {
                if x != star {
                    table.set_at(me, x, s.d(*a, t).clone());
                }
            }
            table.set_at(me, star, gamma.clone());
            for (other, &(a2, _)) in copies.iter().zip(placed) {
                table.set_at(me, *other, s.d(*a, a2).clone());
            }
            debug_assert_eq!(copies.len(), k);
            copies.push(me);
        }
        let base = self.c.iter().map(|c| self.b.iter().position(|b| b == c).expect("C ⊆ B")).collect();
        Candidate { table, targets: (0..targets.len()).collect(), base, copies }
    }

    /// Validates a candidate: it must be a metric and its copies independent
    /// from `B ∪ {b_*}` over `C`.
    fn finish(&self, candidate: Candidate, placed: &[(usize, Dist)]) -> Result<Extension> {
        let Candidate { table, targets, base, copies } = candidate;
        let space = match table.into_metric() {
            Ok(space) => space,
            Err(Error::Triangle(v)) => return Err(Error::Postcondition(format!("extension is not a metric: {v}"))),
            Err(e) => return Err(e),
        };
        if let Independence::Dependent(cert) = independent_at(&space, &copies, &targets, &base) {
            return Err(Error::Postcondition(format!("extension forks over C: {cert}")));
        }
        let points = copies
            .iter()
            .zip(placed)
            .map(|(&i, (a, gamma))| ExtendedPoint {
                source: self.space.label(*a).to_string(),
                label: space.label(i).to_string(),
                gamma: gamma.clone(),
            })
            .collect();
        Ok(Extension { space, points })
    }

    /// Places one copy of `a` at distance `gamma` from `b_*`.
    pub fn extend_one(&self, a: &str, gamma: &Dist) -> Result<Extension> {
        let a = self.space.index(a)?;
        let admissible = self.admissible_at(a)?;
        if !admissible.contains(gamma) {
            return Err(Error::Precondition(format!(
                "gamma {gamma} is outside the admissible interval {admissible}"
            )));
        }
        let placed = [(a, gamma.clone())];
        self.finish(self.candidate(&placed), &placed)
    }

    /// Copies all of `A` at once, each `a'` at distance `U(a)` from `b_*`.
    pub fn extend_all(&self) -> Result<Extension> {
        if let Independence::Dependent(cert) = independent_at(&self.space, &self.a, &self.b, &self.c) {
            return Err(Error::NotIndependent(cert.into()));
        }
        let placed: Vec<(usize, Dist)> = self.a.iter().map(|&a| (a, self.upper_at(a))).collect();
        self.finish(self.candidate(&placed), &placed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::{d_max, independent};
    use crate::stationarity::dstar_min;

    fn d(p: u64, q: u64) -> Dist {
        Dist::frac(p, q)
    }

    /// `a` at 1/2 from `b`, `b_*` at 3/5 from `b` and 1/2 from `a`.
    fn three_points() -> FiniteMetricSpace {
        FiniteMetricSpace::from_pairs(
            ["a", "b", "s"],
            &[("a", "b", d(1, 2)), ("s", "b", d(3, 5)), ("a", "s", d(1, 2))],
        )
        .unwrap()
    }

    #[test]
    fn bounds_on_three_points() {
        let p = ExtensionProblem::new(three_points(), &["a"], &["b"], &[], "s").unwrap();
        assert_eq!(p.upper_u("a").unwrap(), d(7, 10));
        assert_eq!(p.lower_l("a").unwrap(), d(1, 2));
        assert_eq!(p.half(), d(1, 2));
        assert_eq!(p.admissible_gammas("a").unwrap(), Interval::new(d(1, 2), d(7, 10)));
    }

    #[test]
    fn empty_parameters() {
        let p = ExtensionProblem::new(three_points(), &["a"], &[], &[], "s").unwrap();
        assert_eq!(p.upper_u("a").unwrap(), Dist::ONE);
        assert_eq!(p.lower_l("a").unwrap(), Dist::ZERO);
        assert_eq!(p.admissible_gammas("a").unwrap(), Interval::new(d(1, 2), Dist::ONE));
    }

    #[test]
    fn extend_one_at_endpoints() {
        let p = ExtensionProblem::new(three_points(), &["a"], &["b"], &[], "s").unwrap();
        for gamma in [d(7, 10), d(1, 2), d(3, 5)] {
            let ext = p.extend_one("a", &gamma).unwrap();
            assert_eq!(ext.points[0].label, "a'");
            assert_eq!(ext.space.dist("a'", "s").unwrap(), &gamma);
            assert_eq!(ext.space.dist("a'", "b").unwrap(), &d(1, 2));
        }
        let err = p.extend_one("a", &d(71, 100)).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "{err:?}");
    }

    #[test]
    fn just_above_upper_bound_forks() {
        // Bypass the interval check and inspect the failure directly.
        let p = ExtensionProblem::new(three_points(), &["a"], &["b"], &[], "s").unwrap();
        let a = p.space.index("a").unwrap();
        let placed = [(a, d(71, 100))];
        let err = p.finish(p.candidate(&placed), &placed).unwrap_err();
        assert!(matches!(err, Error::Postcondition(ref m) if m.contains("d_min")), "{err:?}");
    }

    #[test]
    fn extend_all_singleton_agrees_with_extend_one() {
        let p = ExtensionProblem::new(three_points(), &["a"], &["b"], &[], "s").unwrap();
        let all = p.extend_all().unwrap();
        let one = p.extend_one("a", &p.upper_u("a").unwrap()).unwrap();
        assert_eq!(all, one);
    }

    #[test]
    fn extend_all_without_points() {
        let p = ExtensionProblem::new(three_points(), &[], &["b"], &[], "s").unwrap();
        let ext = p.extend_all().unwrap();
        assert!(ext.points.is_empty());
        assert_eq!(ext.space, three_points().restrict(&["b", "s"]).unwrap());
    }

    fn four_points() -> FiniteMetricSpace {
        FiniteMetricSpace::from_pairs(
            ["a", "c1", "c2", "s"],
            &[
                ("a", "c1", d(1, 3)),
                ("a", "c2", d(1, 2)),
                ("c1", "c2", d(1, 2)),
                ("s", "c1", d(1, 4)),
                ("s", "c2", d(2, 3)),
                ("a", "s", d(1, 2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn parameters_equal_base() {
        let s = four_points();
        let c = ["c1", "c2"];
        let p = ExtensionProblem::new(s.clone(), &["a"], &c, &c, "s").unwrap();
        assert_eq!(p.upper_u("a").unwrap(), d_max(&s, "a", "s", &c).unwrap());
        assert_eq!(p.lower_l("a").unwrap(), dstar_min(&s, "a", "s", &c).unwrap());
        let ext = p.extend_all().unwrap();
        let names: Vec<&str> = ext.space.names().iter().map(String::as_str).collect();
        assert_eq!(names, ["c1", "c2", "s", "a'"]);
        assert!(independent(&ext.space, &["a'"], &["c1", "c2", "s"], &c).unwrap().is_independent());
    }

    #[test]
    fn dependent_input_is_reported() {
        let s = four_points();
        let p = ExtensionProblem::new(s, &["a"], &["c1", "c2"], &[], "s").unwrap();
        assert!(matches!(p.extend_all(), Err(Error::NotIndependent(_))));
    }

    #[test]
    fn c_is_added_to_b() {
        let p = ExtensionProblem::new(four_points(), &["a"], &[], &["c2"], "s").unwrap();
        assert_eq!(p.b(), ["c2"]);
        assert!(matches!(
            ExtensionProblem::new(four_points(), &["zz"], &[], &[], "s"),
            Err(Error::UnknownLabel(_))
        ));
    }
}
