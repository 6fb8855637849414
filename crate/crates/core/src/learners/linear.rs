//! Exact hard-margin separator over `tail_d` features and the stable
//! compression scheme it induces for linear CoT classes.

use itertools::Itertools;
use num_rational::{Ratio, Rational64};

use crate::classes::linear::{make_linear_generator, tail, LinearParams};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::learners::{deflate_indices, inflate, BinarySample, CotSample};

type Q = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxMargin {
    pub params: LinearParams,
    /// Examples of the input whose constraints determine the separator.
    pub support: BinarySample,
}

struct Point {
    /// Position of the first example carrying this feature vector.
    first: usize,
    z: Vec<i64>,
    y: i64,
}

fn distinct_points(a: &BinarySample, d: usize) -> Result<Vec<Point>> {
    let mut pts: Vec<Point> = Vec::new();
    for (i, e) in a.iter().enumerate() {
        let z = tail(&e.x, d);
        let y = if e.y.is_one() { 1 } else { -1 };
        match pts.iter().find(|p| p.z == z) {
            Some(p) if p.y != y => return Err(Error::NotSeparable),
            Some(_) => {}
            None => pts.push(Point { first: i, z, y }),
        }
    }
    Ok(pts)
}

/// Solves `m v = rhs` exactly; `None` when singular.
fn solve(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).find(|&r| m[r][c] != Q::from_integer(0))?;
        m.swap(c, p);
        rhs.swap(c, p);
        for r in 0..n {
            if r != c && m[r][c] != Q::from_integer(0) {
                let f = m[r][c] / m[c][c];
                for k in c..n {
                    let v = m[c][k];
                    m[r][k] -= f * v;
                }
                let v = rhs[c];
                rhs[r] -= f * v;
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

fn to_rational64(q: Q) -> Result<Rational64> {
    let n = i64::try_from(*q.numer());
    let d = i64::try_from(*q.denom());
    match (n, d) {
        (Ok(n), Ok(d)) => Ok(Rational64::new(n, d)),
        _ => Err(Error::InvalidArgument(format!("coefficient {q} out of range"))),
    }
}

/// KKT solution with every point of `set` active, if it has positive duals.
fn kkt(pts: &[Point], set: &[usize], d: usize) -> Option<(Vec<Q>, Q)> {
    let k = set.len();
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let mut m = vec![vec![Q::from_integer(0); k + 1]; k + 1];
    for (r, &i) in set.iter().enumerate() {
        for (c, &j) in set.iter().enumerate() {
            let g = pts[i].y * pts[j].y * dot(&pts[i].z, &pts[j].z);
            m[r][c] = Q::from_integer(g as i128);
        }
        m[r][k] = Q::from_integer(pts[i].y as i128);
        m[k][r] = Q::from_integer(pts[i].y as i128);
    }
    let mut rhs = vec![Q::from_integer(1); k + 1];
    rhs[k] = Q::from_integer(0);
    let sol = solve(m, rhs)?;
    if sol[..k].iter().any(|a| *a <= Q::from_integer(0)) {
        return None;
    }
    let mut w = vec![Q::from_integer(0); d];
    for (r, &i) in set.iter().enumerate() {
        for (wj, &zj) in w.iter_mut().zip(&pts[i].z) {
            *wj += sol[r] * Q::from_integer((pts[i].y * zj) as i128);
        }
    }
    Some((w, sol[k]))
}

/// The hard-margin separator of `a` in `tail_d` features, solved exactly.
///
/// Support subsets of at most `d + 1` distinct points are tried by size and
/// then lexicographically in order of first occurrence; the first whose
/// active-set solution has positive duals and separates every point with
/// margin 1 is optimal. A one-label sample gives the matching constant with
/// its first example as support; the empty sample gives the constant 0.
pub fn max_margin(a: &BinarySample, d: usize) -> Result<MaxMargin> {
    if d == 0 {
        return Err(Error::InvalidArgument("linear window d must be ≥ 1".into()));
    }
    let pts = distinct_points(a, d)?;
    let zero_w = vec![Rational64::from_integer(0); d];
    if pts.is_empty() {
        return Ok(MaxMargin {
            params: LinearParams::new(zero_w, (-1).into())?,
            support: BinarySample::default(),
        });
    }
    if pts.iter().all(|p| p.y == pts[0].y) {
        return Ok(MaxMargin {
            params: LinearParams::new(zero_w, pts[0].y.into())?,
            support: a.select(&[pts[0].first]),
        });
    }
    let feasible = |w: &[Q], b: Q| {
        pts.iter().all(|p| {
            let s: Q = w
                .iter()
                .zip(&p.z)
                .map(|(wj, &zj)| *wj * Q::from_integer(zj as i128))
                .sum::<Q>()
                + b;
            s * Q::from_integer(p.y as i128) >= Q::from_integer(1)
        })
    };
    for size in 2..=(d + 1).min(pts.len()) {
        for set in (0..pts.len()).combinations(size) {
            if set.iter().all(|&i| pts[i].y == pts[set[0]].y) {
                continue;
            }
            let Some((w, b)) = kkt(&pts, &set, d) else {
                continue;
            };
            if feasible(&w, b) {
                let w = w.into_iter().map(to_rational64).collect::<Result<Vec<_>>>()?;
                let idx: Vec<usize> = set.iter().map(|&i| pts[i].first).collect();
                return Ok(MaxMargin {
                    params: LinearParams::new(w, to_rational64(b)?)?,
                    support: a.select(&idx),
                });
            }
        }
    }
    Err(Error::NotSeparable)
}

/// Kernel of at most `d + 1` CoT examples: those owning a support point of
/// the max-margin separator of the inflated sample.
pub fn stable_compress_cot(s: &CotSample, d: usize) -> Result<(CotSample, Vec<usize>)> {
    let mm = max_margin(&inflate(s), d)?;
    let idx = deflate_indices(&mm.support)?;
    Ok((s.select(&idx), idx))
}

/// The max-margin linear generator of the inflated kernel.
pub fn stable_reconstruct_cot(k: &CotSample, d: usize, horizon: usize) -> Result<Generator> {
    let mm = max_margin(&inflate(k), d)?;
    Ok(make_linear_generator(mm.params, horizon))
}
