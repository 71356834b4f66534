//! Indiscernible sequences of k-tuples, described by their distance
//! templates, and n-cyclicity.
//!
//! By quantifier elimination an indiscernible sequence `(a^l)` of k-tuples is
//! determined up to isometry by two k×k matrices: `delta[i][j] = d(a^0_i,
//! a^0_j)` inside one tuple and `eps[i][j] = d(a^0_i, a^1_j)` across two
//! tuples. The sequence is n-cyclic when n copies of the two-type can be
//! chained around a cycle; this reduces to a cycle inequality on `eps`, which
//! [`is_n_cyclic`] decides with min-plus matrix powers.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PartialSemimetric};

/// Within-tuple and cross-tuple distance matrices of an indiscernible
/// sequence of k-tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTemplate {
    k: usize,
    delta: Vec<Dist>,
    eps: Vec<Dist>,
}

impl SequenceTemplate {
    /// Checks shapes, and that `delta` is symmetric with a zero diagonal.
    /// Triangle inequalities are left to [`validate_template`].
    pub fn new(delta: Vec<Vec<Dist>>, eps: Vec<Vec<Dist>>) -> Result<Self> {
        let k = delta.len();
        if k == 0 {
            return Err(Error::Dimension("templates need tuple length k >= 1".into()));
        }
        if eps.len() != k {
            return Err(Error::Dimension(format!("delta has {k} rows but eps has {}", eps.len())));
        }
        for (name, m) in [("delta", &delta), ("eps", &eps)] {
            if let Some(r) = m.iter().position(|row| row.len() != k) {
                return Err(Error::Dimension(format!("{name} row {r} has {} entries, expected {k}", m[r].len())));
            }
        }
        for (i, row) in delta.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(Error::NonzeroDiagonal(format!("delta[{i}][{i}]")));
            }
            for j in (i + 1)..k {
                if row[j] != delta[j][i] {
                    return Err(Error::Asymmetric(format!("delta[{i}][{j}]"), format!("delta[{j}][{i}]")));
                }
            }
        }
        Ok(SequenceTemplate {
            k,
            delta: delta.into_iter().flatten().collect(),
            eps: eps.into_iter().flatten().collect(),
        })
    }

    /// The constant sequence on a k-point pseudometric: `eps = delta`.
    pub fn constant(delta: Vec<Vec<Dist>>) -> Result<Self> {
        SequenceTemplate::new(delta.clone(), delta)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self, i: usize, j: usize) -> &Dist {
        &self.delta[i * self.k + j]
    }

    pub fn eps(&self, i: usize, j: usize) -> &Dist {
        &self.eps[i * self.k + j]
    }

    pub fn delta_rows(&self) -> Vec<Vec<Dist>> {
        self.delta.chunks(self.k).map(<[Dist]>::to_vec).collect()
    }

    pub fn eps_rows(&self) -> Vec<Vec<Dist>> {
        self.eps.chunks(self.k).map(<[Dist]>::to_vec).collect()
    }

    pub fn eps_matrix(&self) -> MinPlusMatrix {
        MinPlusMatrix { n: self.k, data: self.eps.clone() }
    }

    /// `copies` tuples laid out in order: `d(x^l_i, x^m_j)` is `delta[i][j]`
    /// when `l = m` and `eps[i][j]` when `l < m`.
    pub fn unfold(&self, copies: usize) -> PartialSemimetric {
        let k = self.k;
        let names = (0..copies).flat_map(|l| (0..k).map(move |i| point_label(l, i)));
        let mut p = PartialSemimetric::new(names).expect("distinct labels");
        for l in 0..copies {
            for m in l..copies {
                for i in 0..k {
                    for j in 0..k {
                        let (x, y) = (l * k + i, m * k + j);
                        if x == y {
                            continue;
                        }
                        let v = if l == m { self.delta(i, j) } else { self.eps(i, j) };
                        p.set_at(x, y, v.clone());
                    }
                }
            }
        }
        p
    }
}

fn point_label(copy: usize, coord: usize) -> String {
    format!("x{copy}.{coord}")
}

/// Checks that the template describes a sequence that exists: its 3-copy
/// unfolding must be a pseudometric. Any triangle in a longer unfolding
/// touches at most three copies and only their order matters, so three copies
/// see every triangle shape.
/// Fails with [`Error::Triangle`] naming the offending triple.
pub fn validate_template(t: &SequenceTemplate) -> Result<()> {
    t.unfold(3).into_metric().map(|_| ())
}

/// A square matrix over the (min, truncated +) semiring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPlusMatrix {
    n: usize,
    data: Vec<Dist>,
}

impl MinPlusMatrix {
    pub fn from_rows(rows: Vec<Vec<Dist>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("min-plus matrices must be square".into()));
        }
        Ok(MinPlusMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    /// 0 on the diagonal, 1 (the semiring's "no walk") elsewhere.
    pub fn identity(n: usize) -> Self {
        let data = (0..n * n).map(|x| if x / n == x % n { Dist::ZERO } else { Dist::ONE }).collect();
        MinPlusMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Dist {
        &self.data[i * self.n + j]
    }

    /// Product together with a minimizing middle index for every entry.
    fn mul_with_argmin(&self, rhs: &MinPlusMatrix) -> (MinPlusMatrix, Vec<usize>) {
        assert_eq!(self.n, rhs.n, "min-plus product of mismatched sizes");
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        let mut arg = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let (h, v) = (0..n)
                    .map(|h| (h, self.get(i, h).truncated_add(rhs.get(h, j))))
                    .min_by(|a, b| a.1.cmp(&b.1))
                    .expect("n >= 1");
                data.push(v);
                arg.push(h);
            }
        }
        (MinPlusMatrix { n, data }, arg)
    }

    /// `(A ⊗ B)[i][j] = min_h A[i][h] + B[h][j]`.
    pub fn mul(&self, rhs: &MinPlusMatrix) -> MinPlusMatrix {
        self.mul_with_argmin(rhs).0
    }

    /// `A^{⊗r}`; entry `(i, j)` is the least truncated weight of a walk with
    /// exactly `r` steps from `i` to `j`.
    pub fn pow(&self, r: usize) -> MinPlusMatrix {
        (0..r).fold(MinPlusMatrix::identity(self.n), |acc, _| acc.mul(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicityVerdict {
    pub n: usize,
    pub cyclic: bool,
    /// Coordinates `(i_1, ..., i_n)` with
    /// `eps[i_n][i_1] > eps[i_1][i_2] + ... + eps[i_{n-1}][i_n]`.
    pub violating_cycle: Option<Vec<usize>>,
}

/// Decides n-cyclicity of a valid template: the sequence is n-cyclic iff
/// `eps[j][i] <= P[i][j]` for all `i, j`, where `P` is the `(n-1)`-th min-plus
/// power of `eps`.
pub fn is_n_cyclic(t: &SequenceTemplate, n: usize) -> Result<CyclicityVerdict> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclicity is defined for n >= 1".into()));
    }
    let eps = t.eps_matrix();
    let k = t.k();
    let mut power = MinPlusMatrix::identity(k);
    let mut args = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let (next, arg) = power.mul_with_argmin(&eps);
        power = next;
        args.push(arg);
    }
    for i in 0..k {
        for j in 0..k {
            if t.eps(j, i) > power.get(i, j) {
                // walk back through the recorded middle indices
                let mut walk = vec![j];
                let mut at = j;
                for arg in args.iter().rev() {
                    at = arg[i * k + at];
                    walk.push(at);
                }
                walk.reverse();
                debug_assert_eq!(walk[0], i);
                return Ok(CyclicityVerdict { n, cyclic: false, violating_cycle: Some(walk) });
            }
        }
    }
    Ok(CyclicityVerdict { n, cyclic: true, violating_cycle: None })
}

/// Enumerates every index tuple `(i_1, ..., i_n)` and checks
/// `eps[i_n][i_1] <= eps[i_1][i_2] + ... + eps[i_{n-1}][i_n]` directly.
pub fn cyclicity_oracle(t: &SequenceTemplate, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclicity is defined for n >= 1".into()));
    }
    let k = t.k();
    let mut idx = vec![0usize; n];
    loop {
        let sum = idx.windows(2).fold(Dist::ZERO, |acc, w| acc.truncated_add(t.eps(w[0], w[1])));
        if t.eps(idx[n - 1], idx[0]) > &sum {
            return Ok(false);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(true);
            }
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// The partial semimetric whose consistency says the template is n-cyclic:
/// copies `x^1, ..., x^n` of the tuple, `delta` inside each copy, `eps`
/// between consecutive copies, and the reversed `eps` between `x^1` and `x^n`
/// to close the cycle.
///
/// For `n <= 2` the closing pair would coincide with a pair that is already
/// constrained, so the cycle instead closes through an extra copy `x^{n+1}`
/// that is tied to `x^1` by zero-distance links through a bridge copy `y`.
pub fn amalgam_space(t: &SequenceTemplate, n: usize) -> Result<PartialSemimetric> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclicity is defined for n >= 1".into()));
    }
    let k = t.k();
    let chained = if n >= 3 { n } else { n + 1 };
    let mut names: Vec<String> = (1..=chained).flat_map(|l| (0..k).map(move |i| point_label(l, i))).collect();
    if n < 3 {
        names.extend((0..k).map(|i| format!("y.{i}")));
    }
    let mut p = PartialSemimetric::new(names)?;
    let at = |l: usize, i: usize| (l - 1) * k + i;
    for l in 1..=chained {
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    p.set_at(at(l, i), at(l, j), t.delta(i, j).clone());
                }
                if l < chained {
                    p.set_at(at(l, i), at(l + 1, j), t.eps(i, j).clone());
                }
            }
        }
    }
    if n >= 3 {
        for i in 0..k {
            for j in 0..k {
                p.set_at(at(1, i), at(n, j), t.eps(j, i).clone());
            }
        }
    } else {
        let bridge = chained * k;
        for i in 0..k {
            p.set_at(at(chained, i), bridge + i, Dist::ZERO);
            p.set_at(bridge + i, at(1, i), Dist::ZERO);
        }
    }
    Ok(p)
}

/// An indiscernible sequence of n-tuples that is not n-cyclic (but is
/// (n+1)-cyclic): for `i <= j`, `eps[i][j] = (j - i + 1)/n` and
/// `delta[i][j] = (j - i + 1)/n` off the diagonal; for `i > j`,
/// `eps[i][j] = (i - j)/n`. Indices are 1-based in these formulas.
pub fn sopn_witness(n: usize) -> Result<SequenceTemplate> {
    if n == 0 {
        return Err(Error::InvalidArgument("sopn witness needs n >= 1".into()));
    }
    let q = n as u64;
    let cross = |i: usize, j: usize| {
        let (i, j) = (i as u64 + 1, j as u64 + 1);
        if i <= j {
            Dist::frac(j - i + 1, q)
        } else {
            Dist::frac(i - j, q)
        }
    };
    let within = |i: usize, j: usize| match i.cmp(&j) {
        core::cmp::Ordering::Equal => Dist::ZERO,
        core::cmp::Ordering::Less => cross(i, j),
        core::cmp::Ordering::Greater => cross(j, i),
    };
    let delta = (0..n).map(|i| (0..n).map(|j| within(i, j)).collect()).collect();
    let eps = (0..n).map(|i| (0..n).map(|j| cross(i, j)).collect()).collect();
    let t = SequenceTemplate::new(delta, eps)?;
    debug_assert!(validate_template(&t).is_ok());
    Ok(t)
}

fn tp2_label(row: usize, col: usize) -> String {
    format!("a{row}.{col}")
}

/// The array `a_{m,i}` with distance 1 inside a row and 2/3 across rows.
pub fn tp2_array(rows: usize, cols: usize) -> Result<FiniteMetricSpace> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("tp2 array needs at least one row and column".into()));
    }
    let names = (0..rows).flat_map(|m| (0..cols).map(move |i| tp2_label(m, i)));
    FiniteMetricSpace::from_fn(names, |x, y| {
        if x == y {
            Dist::ZERO
        } else if x / cols == y / cols {
            Dist::ONE
        } else {
            Dist::frac(2, 3)
        }
    })
}

/// The array plus a point `x` required to sit at 1/3 from each listed
/// `(row, col)` cell, with every other distance from `x` left open.
pub fn tp2_query(rows: usize, cols: usize, cells: &[(usize, usize)]) -> Result<PartialSemimetric> {
    let mut p = tp2_array(rows, cols)?.to_partial();
    let x = p.add_fresh_point("x");
    for &(m, i) in cells {
        if m >= rows || i >= cols {
            return Err(Error::InvalidArgument(format!("cell ({m}, {i}) outside the {rows}x{cols} array")));
        }
        p.set_at(x, m * cols + i, Dist::frac(1, 3));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::{check_consistency, is_consistent};

    fn d(p: u64, q: u64) -> Dist {
        Dist::frac(p, q)
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(SequenceTemplate::new(vec![], vec![]), Err(Error::Dimension(_))));
        let z = vec![vec![Dist::ZERO]];
        assert!(matches!(SequenceTemplate::new(z.clone(), vec![]), Err(Error::Dimension(_))));
        let bad_eps = vec![vec![Dist::ZERO, Dist::ZERO]];
        assert!(matches!(SequenceTemplate::new(z, bad_eps), Err(Error::Dimension(_))));
        let asym = vec![vec![Dist::ZERO, d(1, 2)], vec![d(1, 3), Dist::ZERO]];
        assert!(matches!(SequenceTemplate::new(asym.clone(), asym), Err(Error::Asymmetric(..))));
    }

    #[test]
    fn sopn_two_and_three() {
        let t = sopn_witness(2).unwrap();
        assert_eq!(t.eps_rows(), vec![vec![d(1, 2), Dist::ONE], vec![d(1, 2), d(1, 2)]]);
        assert_eq!(t.delta_rows(), vec![vec![Dist::ZERO, Dist::ONE], vec![Dist::ONE, Dist::ZERO]]);
        let verdict = is_n_cyclic(&t, 2).unwrap();
        assert!(!verdict.cyclic);
        // eps[0][1] = 1 > 1/2 = eps[1][0]
        assert_eq!(verdict.violating_cycle, Some(vec![1, 0]));

        let t = sopn_witness(3).unwrap();
        assert_eq!(t.eps(0, 2), &Dist::ONE);
        assert_eq!(t.eps(2, 0), &d(2, 3));
    }

    #[test]
    fn sopn_family() {
        for n in 1..=6 {
            let t = sopn_witness(n).unwrap();
            assert_eq!(validate_template(&t), Ok(()));
            assert!(!is_n_cyclic(&t, n).unwrap().cyclic, "n = {n}");
            assert!(is_n_cyclic(&t, n + 1).unwrap().cyclic, "n = {n}");
            for m in (n + 1)..=(n + 3) {
                assert!(is_n_cyclic(&t, m).unwrap().cyclic);
                if n.pow(m as u32) <= 100_000 {
                    assert!(cyclicity_oracle(&t, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn violating_cycle_really_violates() {
        for n in 2..=5 {
            let t = sopn_witness(n).unwrap();
            let cycle = is_n_cyclic(&t, n).unwrap().violating_cycle.unwrap();
            assert_eq!(cycle.len(), n);
            let sum = cycle.windows(2).fold(Dist::ZERO, |s, w| s.truncated_add(t.eps(w[0], w[1])));
            assert!(t.eps(cycle[n - 1], cycle[0]) > &sum);
        }
    }

    #[test]
    fn one_point_templates() {
        let half = SequenceTemplate::new(vec![vec![Dist::ZERO]], vec![vec![d(1, 2)]]).unwrap();
        let one = SequenceTemplate::new(vec![vec![Dist::ZERO]], vec![vec![Dist::ONE]]).unwrap();
        assert_eq!(validate_template(&half), Ok(()));
        assert_eq!(validate_template(&one), Ok(()));
        assert!(is_n_cyclic(&half, 2).unwrap().cyclic);
        assert!(!is_n_cyclic(&half, 1).unwrap().cyclic);
    }

    #[test]
    fn constant_template_is_everything_cyclic() {
        let delta = vec![
            vec![Dist::ZERO, d(1, 2), d(1, 3)],
            vec![d(1, 2), Dist::ZERO, d(1, 4)],
            vec![d(1, 3), d(1, 4), Dist::ZERO],
        ];
        let t = SequenceTemplate::constant(delta).unwrap();
        assert_eq!(validate_template(&t), Ok(()));
        for n in 1..=5 {
            assert!(is_n_cyclic(&t, n).unwrap().cyclic);
            assert!(cyclicity_oracle(&t, n).unwrap());
            assert!(is_consistent(&amalgam_space(&t, n).unwrap()));
        }
    }

    #[test]
    fn invalid_template_detected() {
        // eps[0][0] = 1 but both tuples' other point is close to everything
        let delta = vec![vec![Dist::ZERO, d(1, 10)], vec![d(1, 10), Dist::ZERO]];
        let eps = vec![vec![Dist::ONE, d(1, 10)], vec![d(1, 10), d(1, 10)]];
        let t = SequenceTemplate::new(delta, eps).unwrap();
        assert!(validate_template(&t).is_err());
    }

    #[test]
    fn amalgam_of_sop3_is_inconsistent() {
        let t = sopn_witness(3).unwrap();
        let p = amalgam_space(&t, 3).unwrap();
        assert_eq!(p.len(), 9);
        let w = check_consistency(&p).witness().cloned().expect("not 3-cyclic");
        assert!(w.direct > w.length);
        assert!(is_consistent(&amalgam_space(&t, 4).unwrap()));
    }

    #[test]
    fn small_n_amalgam_closes_through_bridge() {
        let t = sopn_witness(2).unwrap();
        assert!(!is_consistent(&amalgam_space(&t, 2).unwrap()));
        let t1 = sopn_witness(1).unwrap();
        assert!(!is_consistent(&amalgam_space(&t1, 1).unwrap()));
        assert!(is_consistent(&amalgam_space(&t1, 2).unwrap()));
    }

    #[test]
    fn min_plus_power_counts_steps() {
        let m = MinPlusMatrix::from_rows(vec![
            vec![d(1, 2), d(1, 10)],
            vec![d(1, 10), d(1, 2)],
        ])
        .unwrap();
        assert_eq!(m.pow(0), MinPlusMatrix::identity(2));
        let p2 = m.pow(2);
        assert_eq!(p2.get(0, 0), &d(1, 5));
        assert_eq!(p2.get(0, 1), &d(3, 5));
        let p3 = m.pow(3);
        assert_eq!(p3.get(0, 1), &d(3, 10));
        assert_eq!(m.pow(3), m.mul(&m.pow(2)));
    }

    #[test]
    fn tp2_examples() {
        let s = tp2_array(4, 4).unwrap();
        assert_eq!(s.len(), 16);
        assert_eq!(tp2_array(1, 1).unwrap().len(), 1);
        assert!(!is_consistent(&tp2_query(4, 4, &[(2, 0), (2, 3)]).unwrap()));
        assert!(is_consistent(&tp2_query(4, 4, &[(0, 1), (1, 3), (2, 0), (3, 2)]).unwrap()));
        assert!(tp2_query(2, 2, &[(2, 0)]).is_err());
    }
}
