//! Finite metric spaces and partial semimetrics over labeled points.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::dist::Dist;
use crate::error::{Error, Result};

/// Ordered, duplicate-free point labels with a reverse index.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Labels {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Labels {
    pub fn new<I, S>(names: I) -> Result<Labels>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels = Labels::default();
        for name in names {
            labels.push(name.into())?;
        }
        Ok(labels)
    }

    pub fn push(&mut self, name: String) -> Result<usize> {
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateLabel(name));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    /// Appends primes to `base` until it names no existing point.
    pub fn fresh(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.index.contains_key(&name) {
            name.push('\'');
        }
        name
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<usize> {
        self.get(name).ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn resolve_all(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.resolve(n)).collect()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A failed triangle: `d(x, z) > d(x, y) + d(y, z)` (truncated at 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleViolation {
    pub x: String,
    pub y: String,
    pub z: String,
    /// `d(x, z)`
    pub direct: Dist,
    /// `d(x, y) + d(y, z)`, truncated
    pub detour: Dist,
}

impl fmt::Display for TriangleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d({x},{z}) = {} > {} = d({x},{y}) + d({y},{z})",
            self.direct,
            self.detour,
            x = self.x,
            y = self.y,
            z = self.z
        )
    }
}

/// First triple `(x, y, z)` of indices with `d(x,z) > d(x,y) + d(y,z)`.
pub(crate) fn find_bad_triangle<'a>(
    n: usize,
    d: impl Fn(usize, usize) -> &'a Dist,
) -> Option<(usize, usize, usize)> {
    for x in 0..n {
        for z in (x + 1)..n {
            let direct = d(x, z);
            if direct.is_zero() {
                continue;
            }
            for y in 0..n {
                if y == x || y == z {
                    continue;
                }
                if direct > &d(x, y).truncated_add(d(y, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// A finite (pseudo)metric space of diameter at most 1.
///
/// Distinct labels may sit at distance 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Labels,
    table: Vec<Dist>,
}

impl FiniteMetricSpace {
    /// Builds a space from a distance function on indices, checking every
    /// metric axiom.
    pub fn from_fn<I, S>(names: I, d: impl Fn(usize, usize) -> Dist) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels = Labels::new(names)?;
        let n = labels.len();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(d(i, j));
            }
        }
        let candidate = FiniteMetricSpace { labels, table };
        candidate.check_axioms()?;
        Ok(candidate)
    }

    /// Builds a space from an explicit list of pairs. Every unordered pair of
    /// distinct labels must appear.
    pub fn from_pairs<I, S>(names: I, pairs: &[(&str, &str, Dist)]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut partial = PartialSemimetric::new(names)?;
        for (a, b, v) in pairs {
            partial.define(a, b, v.clone())?;
        }
        partial.into_metric()
    }

    pub(crate) fn from_table_unchecked(labels: Labels, table: Vec<Dist>) -> Self {
        debug_assert_eq!(table.len(), labels.len() * labels.len());
        FiniteMetricSpace { labels, table }
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.d(i, i).is_zero() {
                return Err(Error::NonzeroDiagonal(self.labels.name(i).to_string()));
            }
            for j in (i + 1)..n {
                if self.d(i, j) != self.d(j, i) {
                    return Err(Error::Asymmetric(
                        self.labels.name(i).to_string(),
                        self.labels.name(j).to_string(),
                    ));
                }
            }
        }
        match self.triangle_violation() {
            Some(v) => Err(Error::Triangle(alloc::boxed::Box::new(v))),
            None => Ok(()),
        }
    }

    pub(crate) fn triangle_violation(&self) -> Option<TriangleViolation> {
        find_bad_triangle(self.len(), |i, j| self.d(i, j)).map(|(x, y, z)| TriangleViolation {
            x: self.labels.name(x).to_string(),
            y: self.labels.name(y).to_string(),
            z: self.labels.name(z).to_string(),
            direct: self.d(x, z).clone(),
            detour: self.d(x, y).truncated_add(self.d(y, z)),
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn names(&self) -> &[String] {
        self.labels.names()
    }

    pub fn label(&self, i: usize) -> &str {
        self.labels.name(i)
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.labels.resolve(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.labels.get(name).is_some()
    }

    /// Distance by index.
    ///
    /// # Panics
    /// If either index is out of range.
    pub fn d(&self, i: usize, j: usize) -> &Dist {
        &self.table[i * self.len() + j]
    }

    /// Distance by label.
    pub fn dist(&self, a: &str, b: &str) -> Result<&Dist> {
        Ok(self.d(self.index(a)?, self.index(b)?))
    }

    pub fn to_partial(&self) -> PartialSemimetric {
        PartialSemimetric {
            labels: self.labels.clone(),
            table: self.table.iter().cloned().map(Some).collect(),
        }
    }

    /// The subspace on the given labels, in the given order.
    pub fn restrict(&self, names: &[&str]) -> Result<FiniteMetricSpace> {
        let idx = self.labels.resolve_all(names)?;
        let labels = Labels::new(names.iter().copied())?;
        let mut table = Vec::with_capacity(idx.len() * idx.len());
        for &i in &idx {
            for &j in &idx {
                table.push(self.d(i, j).clone());
            }
        }
        Ok(FiniteMetricSpace::from_table_unchecked(labels, table))
    }

    /// Identifies points at distance 0. Returns the metric quotient, whose
    /// points are named by the first label of each class, together with the
    /// class index of every original point.
    pub fn quotient_zero_classes(&self) -> (FiniteMetricSpace, Vec<usize>) {
        let n = self.len();
        let mut class_of = Vec::with_capacity(n);
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            match reps.iter().position(|&r| self.d(r, i).is_zero()) {
                Some(c) => class_of.push(c),
                None => {
                    class_of.push(reps.len());
                    reps.push(i);
                }
            }
        }
        let names: Vec<&str> = reps.iter().map(|&r| self.label(r)).collect();
        let quotient = self.restrict(&names).expect("representatives are distinct labels");
        (quotient, class_of)
    }
}

/// A symmetric, partially defined distance function that vanishes on the
/// diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSemimetric {
    labels: Labels,
    table: Vec<Option<Dist>>,
}

impl PartialSemimetric {
    /// Only the diagonal is defined.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels = Labels::new(names)?;
        let n = labels.len();
        let mut table = alloc::vec![None; n * n];
        for i in 0..n {
            table[i * n + i] = Some(Dist::ZERO);
        }
        Ok(PartialSemimetric { labels, table })
    }

    /// Adds a point whose only defined distance is to itself.
    pub fn add_point(&mut self, name: impl Into<String>) -> Result<usize> {
        let old = self.len();
        let i = self.labels.push(name.into())?;
        let n = old + 1;
        let mut table = alloc::vec![None; n * n];
        for a in 0..old {
            for b in 0..old {
                table[a * n + b] = self.table[a * old + b].clone();
            }
        }
        table[i * n + i] = Some(Dist::ZERO);
        self.table = table;
        Ok(i)
    }

    /// Adds a point named `base` (primed until unused) and returns its index.
    pub fn add_fresh_point(&mut self, base: &str) -> usize {
        let name = self.labels.fresh(base);
        self.add_point(name).expect("fresh label is unused")
    }

    /// Defines `f(a, b) = f(b, a) = value`. Redefining a pair with a
    /// different value is an error.
    pub fn define(&mut self, a: &str, b: &str, value: Dist) -> Result<()> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        self.define_at(i, j, value)
    }

    pub fn define_at(&mut self, i: usize, j: usize, value: Dist) -> Result<()> {
        if i == j {
            if !value.is_zero() {
                return Err(Error::NonzeroDiagonal(self.label(i).to_string()));
            }
            return Ok(());
        }
        if let Some(old) = self.get(i, j) {
            if *old != value {
                return Err(Error::ConflictingDistance(
                    self.label(i).to_string(),
                    self.label(j).to_string(),
                ));
            }
        }
        self.set_at(i, j, value);
        Ok(())
    }

    /// Sets `f(i, j) = f(j, i) = value`, replacing any previous value.
    pub(crate) fn set_at(&mut self, i: usize, j: usize, value: Dist) {
        let n = self.len();
        self.table[i * n + j] = Some(value.clone());
        self.table[j * n + i] = Some(value);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn names(&self) -> &[String] {
        self.labels.names()
    }

    pub fn label(&self, i: usize) -> &str {
        self.labels.name(i)
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.labels.resolve(name)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&Dist> {
        self.table[i * self.len() + j].as_ref()
    }

    pub fn dist(&self, a: &str, b: &str) -> Result<Option<&Dist>> {
        Ok(self.get(self.index(a)?, self.index(b)?))
    }

    /// Defined pairs `(i, j, f(i, j))` with `i < j`.
    pub fn defined_pairs(&self) -> impl Iterator<Item = (usize, usize, &Dist)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| ((i + 1)..n).filter_map(move |j| self.get(i, j).map(|v| (i, j, v))))
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    /// Converts a total partial semimetric into a metric space, checking the
    /// triangle inequality.
    pub fn into_metric(self) -> Result<FiniteMetricSpace> {
        let n = self.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.get(i, j).is_none() {
                    return Err(Error::MissingDistance(
                        self.label(i).to_string(),
                        self.label(j).to_string(),
                    ));
                }
            }
        }
        let table = self.table.into_iter().map(|v| v.expect("checked total")).collect();
        let space = FiniteMetricSpace::from_table_unchecked(self.labels, table);
        match space.triangle_violation() {
            Some(v) => Err(Error::Triangle(alloc::boxed::Box::new(v))),
            None => Ok(space),
        }
    }
}
