//! `d_max` / `d_min`, Γ-intervals and dividing independence.
//!
//! Over finite parameter sets the sup/inf in the definitions are attained, so
//! every quantity here is an exact max/min.
//!
//! Dividing and forking independence coincide for complete types in the
//! Urysohn sphere, so [`independent`] decides both.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PartialSemimetric, TriangleViolation};

/// A closed interval of distances, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Interval {
    Empty,
    Closed { lo: Dist, hi: Dist },
}

impl Interval {
    /// `[lo, hi]`, or empty when `lo > hi`.
    pub fn new(lo: Dist, hi: Dist) -> Interval {
        if lo > hi {
            Interval::Empty
        } else {
            Interval::Closed { lo, hi }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty)
    }

    pub fn lo(&self) -> Option<&Dist> {
        match self {
            Interval::Empty => None,
            Interval::Closed { lo, .. } => Some(lo),
        }
    }

    pub fn hi(&self) -> Option<&Dist> {
        match self {
            Interval::Empty => None,
            Interval::Closed { hi, .. } => Some(hi),
        }
    }

    pub fn contains(&self, x: &Dist) -> bool {
        match self {
            Interval::Empty => false,
            Interval::Closed { lo, hi } => lo <= x && x <= hi,
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        match (self, other) {
            (Interval::Closed { lo: a, hi: b }, Interval::Closed { lo: c, hi: d }) => {
                Interval::new(a.max(c).clone(), b.min(d).clone())
            }
            _ => Interval::Empty,
        }
    }

    /// The members of `{0, 1/q, ..., 1}` inside the interval, ascending.
    pub fn grid_points(&self, q: u32) -> Vec<Dist> {
        Dist::grid(q).filter(|g| self.contains(g)).collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Empty => f.write_str("∅"),
            Interval::Closed { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

pub(crate) fn dedup(mut idx: Vec<usize>) -> Vec<usize> {
    idx.sort_unstable();
    idx.dedup();
    idx
}

pub(crate) fn dmax_at(s: &FiniteMetricSpace, b1: usize, b2: usize, c: &[usize]) -> Dist {
    c.iter()
        .map(|&c| s.d(b1, c).truncated_add(s.d(b2, c)))
        .min()
        .unwrap_or(Dist::ONE)
}

/// `max_{c ∈ C} |d(b1, c) - d(b2, c)|`, 0 for empty `C`.
pub(crate) fn dstar_min_at(s: &FiniteMetricSpace, b1: usize, b2: usize, c: &[usize]) -> Dist {
    c.iter()
        .map(|&c| s.d(b1, c).abs_diff(s.d(b2, c)))
        .max()
        .unwrap_or(Dist::ZERO)
}

pub(crate) fn dmin_at(s: &FiniteMetricSpace, b1: usize, b2: usize, c: &[usize]) -> Dist {
    let third = s.d(b1, b2).div_int(3);
    dstar_min_at(s, b1, b2, c).max(third)
}

/// `min_{c ∈ C} (d(b1, c) + d(b2, c))`, and 1 when `C` is empty.
pub fn d_max(space: &FiniteMetricSpace, b1: &str, b2: &str, c: &[&str]) -> Result<Dist> {
    let (i, j) = (space.index(b1)?, space.index(b2)?);
    Ok(dmax_at(space, i, j, &space.labels().resolve_all(c)?))
}

/// `max(max_{c ∈ C} |d(b1, c) - d(b2, c)|, d(b1, b2) / 3)`.
pub fn d_min(space: &FiniteMetricSpace, b1: &str, b2: &str, c: &[&str]) -> Result<Dist> {
    let (i, j) = (space.index(b1)?, space.index(b2)?);
    Ok(dmin_at(space, i, j, &space.labels().resolve_all(c)?))
}

/// Γ(b1, b2 / C): the distances `d(b1^0, b2^1)` realized by C-indiscernible
/// sequences starting with `(b1, b2)`, which is `[d_min, d_max]`.
pub fn gamma_interval(space: &FiniteMetricSpace, b1: &str, b2: &str, c: &[&str]) -> Result<Interval> {
    Ok(Interval::new(d_min(space, b1, b2, c)?, d_max(space, b1, b2, c)?))
}

/// The two ways `a` can move the pair `(bi, bj)`: pulling `d_max` down or
/// pushing `d_min` up.
fn moves_pair(s: &FiniteMetricSpace, a: usize, bi: usize, bj: usize, dmax: &Dist, dmin: &Dist) -> bool {
    let (ai, aj) = (s.d(a, bi), s.d(a, bj));
    ai.truncated_add(aj) < *dmax || ai.abs_diff(aj) > *dmin
}

pub(crate) fn divides_pair_at(s: &FiniteMetricSpace, a: usize, b: [usize; 2], c: &[usize]) -> bool {
    b.iter().any(|&bi| {
        b.iter().any(|&bj| moves_pair(s, a, bi, bj, &dmax_at(s, bi, bj, c), &dmin_at(s, bi, bj, c)))
    })
}

/// Does `tp(a / C b1 b2)` divide over `C`?
pub fn divides_pair(space: &FiniteMetricSpace, a: &str, b1: &str, b2: &str, c: &[&str]) -> Result<bool> {
    let a = space.index(a)?;
    let b = [space.index(b1)?, space.index(b2)?];
    Ok(divides_pair_at(space, a, b, &space.labels().resolve_all(c)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equation {
    DMax,
    DMin,
}

impl Equation {
    pub fn as_str(self) -> &'static str {
        match self {
            Equation::DMax => "d_max",
            Equation::DMin => "d_min",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Names a pair of `B` whose `d_max` or `d_min` moves when `A` joins `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub pair: (String, String),
    pub equation: Equation,
    /// Value over `A ∪ C`.
    pub lhs: Dist,
    /// Value over `C`.
    pub rhs: Dist,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{eq}({b1},{b2}/AC) = {} != {} = {eq}({b1},{b2}/C)",
            self.lhs,
            self.rhs,
            eq = self.equation,
            b1 = self.pair.0,
            b2 = self.pair.1
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    Independent,
    Dependent(Certificate),
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Independence::Independent => None,
            Independence::Dependent(c) => Some(c),
        }
    }
}

pub(crate) fn independent_at(s: &FiniteMetricSpace, a: &[usize], b: &[usize], c: &[usize]) -> Independence {
    let c = dedup(c.to_vec());
    let ac = dedup(a.iter().chain(c.iter()).copied().collect());
    let b = dedup(b.to_vec());
    // distinct pairs first, so certificates name a genuine pair when one fails
    let pairs = b
        .iter()
        .enumerate()
        .flat_map(|(k, &b1)| b[k + 1..].iter().map(move |&b2| (b1, b2)))
        .chain(b.iter().map(|&x| (x, x)));
    for (b1, b2) in pairs {
        {
            let checks = [
                (Equation::DMax, dmax_at(s, b1, b2, &ac), dmax_at(s, b1, b2, &c)),
                (Equation::DMin, dmin_at(s, b1, b2, &ac), dmin_at(s, b1, b2, &c)),
            ];
            for (equation, lhs, rhs) in checks {
                if lhs != rhs {
                    return Independence::Dependent(Certificate {
                        pair: (s.label(b1).to_string(), s.label(b2).to_string()),
                        equation,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    Independence::Independent
}

/// `A` is independent from `B` over `C` iff adding `A` to `C` moves neither
/// `d_max` nor `d_min` of any pair in `B`.
pub fn independent(space: &FiniteMetricSpace, a: &[&str], b: &[&str], c: &[&str]) -> Result<Independence> {
    let labels = space.labels();
    Ok(independent_at(space, &labels.resolve_all(a)?, &labels.resolve_all(b)?, &labels.resolve_all(c)?))
}

/// The same relation decided pair by pair: no `a ∈ A` divides with any
/// `b1, b2 ∈ B` over `C`.
pub fn independent_pairwise(space: &FiniteMetricSpace, a: &[&str], b: &[&str], c: &[&str]) -> Result<bool> {
    let labels = space.labels();
    let (a, b, c) = (labels.resolve_all(a)?, labels.resolve_all(b)?, labels.resolve_all(c)?);
    // (b1, b2, d_max, d_min) for every ordered pair, shared by all of A
    let bounds: Vec<(usize, usize, Dist, Dist)> = b
        .iter()
        .flat_map(|&b1| b.iter().map(move |&b2| (b1, b2)))
        .map(|(b1, b2)| (b1, b2, dmax_at(space, b1, b2, &c), dmin_at(space, b1, b2, &c)))
        .collect();
    Ok(a.iter()
        .all(|&x| !bounds.iter().any(|(b1, b2, dmax, dmin)| moves_pair(space, x, *b1, *b2, dmax, dmin))))
}

/// A metric space with three designated parameter sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedConfiguration {
    pub space: FiniteMetricSpace,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

impl TypedConfiguration {
    pub fn new(space: FiniteMetricSpace, a: &[&str], b: &[&str], c: &[&str]) -> Result<Self> {
        for name in a.iter().chain(b).chain(c) {
            space.index(name)?;
        }
        let own = |s: &[&str]| s.iter().map(|x| x.to_string()).collect();
        Ok(TypedConfiguration { a: own(a), b: own(b), c: own(c), space })
    }

    fn refs(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }

    pub fn independence(&self) -> Independence {
        independent(&self.space, &Self::refs(&self.a), &Self::refs(&self.b), &Self::refs(&self.c))
            .expect("labels checked at construction")
    }
}

/// Candidate indiscernible sequence through `(b1, b2)` with cross distance
/// `γ`, laid out on `C` plus `m` copies of the pair.
#[derive(Clone, Debug)]
pub struct GammaWitness {
    /// Total distance table; a metric exactly when `violation` is `None`.
    pub candidate: PartialSemimetric,
    pub violation: Option<TriangleViolation>,
    /// Indices of `C` inside `candidate`.
    pub base: Vec<usize>,
    /// `copies[l] = [b1^l, b2^l]` as indices into `candidate`.
    pub copies: Vec<[usize; 2]>,
}

impl GammaWitness {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    pub fn into_space(self) -> Option<FiniteMetricSpace> {
        self.candidate.into_metric().ok()
    }
}

pub(crate) fn gamma_witness_at(
    s: &FiniteMetricSpace,
    b: [usize; 2],
    c: &[usize],
    gamma: &Dist,
    m: usize,
) -> GammaWitness {
    let c = dedup(c.to_vec());
    let names: Vec<&str> = c.iter().map(|&i| s.label(i)).collect();
    let mut t = PartialSemimetric::new(names.iter().copied()).expect("distinct labels");
    for (x, &ci) in c.iter().enumerate() {
        for (y, &cj) in c.iter().enumerate() {
            if x < y {
                t.set_at(x, y, s.d(ci, cj).clone());
            }
        }
    }
    let within = s.d(b[0], b[1]).clone();
    let same_index: [Dist; 2] = core::array::from_fn(|i| {
        dmax_at(s, b[i], b[i], &c)
            .min(within.truncated_add(gamma))
            .min(gamma.truncated_add(gamma))
    });
    let mut copies = Vec::with_capacity(m);
    for l in 0..m {
        let pair: [usize; 2] = core::array::from_fn(|i| {
            t.add_fresh_point(&alloc::format!("{}^{}", s.label(b[i]), l))
        });
        for i in 0..2 {
            for (x, &ci) in c.iter().enumerate() {
                t.set_at(pair[i], x, s.d(b[i], ci).clone());
            }
        }
        t.set_at(pair[0], pair[1], within.clone());
        for earlier in &copies {
            let earlier: &[usize; 2] = earlier;
            for (i, &e) in earlier.iter().enumerate() {
                for (j, &p) in pair.iter().enumerate() {
                    let v = if i == j { same_index[i].clone() } else { gamma.clone() };
                    t.set_at(e, p, v);
                }
            }
        }
        copies.push(pair);
    }
    let violation = match t.clone().into_metric() {
        Ok(_) => None,
        Err(Error::Triangle(v)) => Some(*v),
        Err(e) => unreachable!("witness table is total: {e}"),
    };
    GammaWitness { candidate: t, violation, base: (0..c.len()).collect(), copies }
}

/// Lays out `m` copies of `(b1, b2)` over `C` with cross-copy distance `γ`
/// between different indices and
/// `min(d_max(b_i, b_i / C), d(b1, b2) + γ, 2γ)` between equal indices.
///
/// The result is flagged rather than rejected when it fails the triangle
/// inequality, which happens exactly when `γ` lies outside Γ(b1, b2 / C).
pub fn build_gamma_witness(
    space: &FiniteMetricSpace,
    b1: &str,
    b2: &str,
    c: &[&str],
    gamma: &Dist,
    m: usize,
) -> Result<GammaWitness> {
    if m < 2 {
        return Err(Error::InvalidArgument("a gamma witness needs at least 2 copies".into()));
    }
    let b = [space.index(b1)?, space.index(b2)?];
    Ok(gamma_witness_at(space, b, &space.labels().resolve_all(c)?, gamma, m))
}
