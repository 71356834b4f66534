//! Shared fixtures for the integration tests: a seeded corpus of small
//! random metric spaces on Farey grids, and brute-force reference routines
//! that do not share code with the library.

#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use urysohn_core::{Dist, FiniteMetricSpace, PartialSemimetric, SequenceTemplate};

pub const SEED: u64 = 0x5eed_0259;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Every reduced fraction in `[0, 1]` with denominator at most `max_den`,
/// ascending.
pub fn farey(max_den: u64) -> Vec<Dist> {
    let mut v: Vec<Dist> = (1..=max_den).flat_map(|q| (0..=q).map(move |p| Dist::frac(p, q))).collect();
    v.sort();
    v.dedup();
    v
}

/// Grid values in `[lo, hi]`, or the endpoints themselves with some
/// probability when they are on the grid, so that boundary cases (twins,
/// truncation at 1, degenerate triangles) show up often.
fn pick(rng: &mut impl Rng, grid: &[Dist], lo: &Dist, hi: &Dist) -> Option<Dist> {
    let inside: Vec<&Dist> = grid.iter().filter(|g| *g >= lo && *g <= hi).collect();
    if inside.is_empty() {
        return None;
    }
    if rng.random_bool(0.15) {
        let end = if rng.random_bool(0.5) { inside[0] } else { inside[inside.len() - 1] };
        return Some(end.clone());
    }
    inside.choose(rng).map(|d| (*d).clone())
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// A random pseudometric on `n` points with distances on the Farey grid of
/// order `max_den`. Points are added one at a time, each new distance drawn
/// from the interval the triangle inequality still allows.
pub fn random_space(rng: &mut impl Rng, n: usize, max_den: u64) -> FiniteMetricSpace {
    let grid = farey(max_den);
    'retry: loop {
        let mut d = vec![vec![Dist::ZERO; n]; n];
        for k in 1..n {
            for i in 0..k {
                let mut lo = Dist::ZERO;
                let mut hi = Dist::ONE;
                for j in 0..i {
                    lo = lo.max(d[k][j].abs_diff(&d[i][j]));
                    hi = hi.min(d[k][j].truncated_add(&d[i][j]));
                }
                let Some(v) = pick(rng, &grid, &lo, &hi) else { continue 'retry };
                d[k][i] = v.clone();
                d[i][k] = v;
            }
        }
        return FiniteMetricSpace::from_fn(names(n), |i, j| d[i][j].clone()).expect("sampled a metric");
    }
}

/// The shared corpus: 200 spaces with 2 to 5 points and denominators at
/// most 12.
pub fn corpus() -> Vec<FiniteMetricSpace> {
    let mut rng = rng(1);
    (0..200)
        .map(|_| {
            let n = rng.random_range(2..=5);
            random_space(&mut rng, n, 12)
        })
        .collect()
}

/// Drops some pairs of a random space and nudges others, so roughly half
/// the results are inconsistent.
pub fn random_partial(rng: &mut impl Rng, n: usize, max_den: u64) -> PartialSemimetric {
    let grid = farey(max_den);
    let s = random_space(rng, n, max_den);
    let mut p = PartialSemimetric::new(names(n)).unwrap();
    let perturb = rng.random_bool(0.5);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(0.3) {
                continue;
            }
            let v = if perturb && rng.random_bool(0.25) {
                grid.choose(rng).unwrap().clone()
            } else {
                s.d(i, j).clone()
            };
            p.define_at(i, j, v).unwrap();
        }
    }
    p
}

/// Labels of the points selected by `mask`.
pub fn select(s: &FiniteMetricSpace, mask: u32) -> Vec<&str> {
    (0..s.len()).filter(|i| mask >> i & 1 == 1).map(|i| s.label(i)).collect()
}

pub fn labels(s: &FiniteMetricSpace) -> Vec<&str> {
    s.names().iter().map(String::as_str).collect()
}

/// Shortest truncated length over all simple paths of defined pairs, 1 if
/// there is none. Exponential, fine for a handful of points.
pub fn brute_completion(p: &PartialSemimetric) -> Vec<Vec<Dist>> {
    fn walk(p: &PartialSemimetric, at: usize, len: Dist, seen: &mut Vec<bool>, best: &mut [Dist]) {
        if len < best[at] {
            best[at] = len.clone();
        }
        for next in 0..p.len() {
            if seen[next] {
                continue;
            }
            if let Some(w) = p.get(at, next) {
                seen[next] = true;
                walk(p, next, len.truncated_add(w), seen, best);
                seen[next] = false;
            }
        }
    }
    let n = p.len();
    (0..n)
        .map(|start| {
            let mut best = vec![Dist::ONE; n];
            let mut seen = vec![false; n];
            seen[start] = true;
            walk(p, start, Dist::ZERO, &mut seen, &mut best);
            best
        })
        .collect()
}

/// A random template whose 3-copy unfolding is a pseudometric, entries on
/// the grid `{0, 1/q, ..., 1}`. Entries are chosen one at a time among the
/// values that keep the partially filled unfolding consistent.
pub fn random_template(rng: &mut impl Rng, k: usize, q: u32) -> SequenceTemplate {
    let grid: Vec<Dist> = Dist::grid(q).collect();
    'retry: loop {
        let mut delta = vec![vec![None::<Dist>; k]; k];
        let mut eps = vec![vec![None::<Dist>; k]; k];
        for i in 0..k {
            delta[i][i] = Some(Dist::ZERO);
        }
        let mut slots: Vec<(bool, usize, usize)> = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i < j {
                    slots.push((true, i, j));
                }
                slots.push((false, i, j));
            }
        }
        for (is_delta, i, j) in slots {
            let options: Vec<&Dist> = grid
                .iter()
                .filter(|v| {
                    let (mut dd, mut ee) = (delta.clone(), eps.clone());
                    if is_delta {
                        dd[i][j] = Some((*v).clone());
                        dd[j][i] = Some((*v).clone());
                    } else {
                        ee[i][j] = Some((*v).clone());
                    }
                    urysohn_core::is_consistent(&unfold_partial(&dd, &ee, 3))
                })
                .collect();
            let Some(v) = options.choose(rng) else { continue 'retry };
            if is_delta {
                delta[i][j] = Some((*v).clone());
                delta[j][i] = Some((*v).clone());
            } else {
                eps[i][j] = Some((*v).clone());
            }
        }
        let unwrap = |m: Vec<Vec<Option<Dist>>>| -> Vec<Vec<Dist>> {
            m.into_iter().map(|r| r.into_iter().map(Option::unwrap).collect()).collect()
        };
        return SequenceTemplate::new(unwrap(delta), unwrap(eps)).unwrap();
    }
}

fn unfold_partial(delta: &[Vec<Option<Dist>>], eps: &[Vec<Option<Dist>>], copies: usize) -> PartialSemimetric {
    let k = delta.len();
    let mut p = PartialSemimetric::new((0..copies).flat_map(|l| (0..k).map(move |i| format!("{l}.{i}")))).unwrap();
    for l in 0..copies {
        for m in l..copies {
            for i in 0..k {
                for j in 0..k {
                    let v = if l == m { &delta[i][j] } else { &eps[i][j] };
                    if let Some(v) = v {
                        if l * k + i != m * k + j {
                            p.define_at(l * k + i, m * k + j, v.clone()).unwrap();
                        }
                    }
                }
            }
        }
    }
    p
}
