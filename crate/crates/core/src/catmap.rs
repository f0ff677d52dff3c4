//! Classical dynamics of integer symplectic matrices on the torus.
//!
//! Everything touching rational points is exact integer arithmetic. Floating
//! point only enters through [`analyze`] (eigen-data) and torus distances.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hn::torus_rep;

/// An integer 2x2 matrix with determinant one, stored row-major.
///
/// Construction only checks unimodularity. Hyperbolicity (`|a + d| > 2`) is
/// what makes it a cat map and is checked by [`analyze`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CatMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CatMap {
    pub const ARNOLD: CatMap = CatMap {
        a: 2,
        b: 1,
        c: 1,
        d: 1,
    };
    pub const IDENTITY: CatMap = CatMap {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(Error::NotUnimodular { det });
        }
        Ok(CatMap { a, b, c, d })
    }

    pub fn from_array(m: [i64; 4]) -> Result<Self> {
        Self::new(m[0], m[1], m[2], m[3])
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2
    }

    pub fn compose(&self, rhs: &CatMap) -> CatMap {
        CatMap {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn inverse(&self) -> CatMap {
        CatMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn transpose(&self) -> CatMap {
        CatMap {
            a: self.a,
            b: self.c,
            c: self.b,
            d: self.d,
        }
    }

    pub fn apply(&self, v: (i64, i64)) -> (i64, i64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Largest absolute entry.
    pub fn max_entry(&self) -> i64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or(0)
    }
}

/// Eigen-data of a hyperbolic map: `M = Q^{-1} D Q` with `det Q = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatMapAnalysis {
    /// Expanding eigenvalue modulus, `> 1`.
    pub lambda: f64,
    /// `+1` for trace > 2, `-1` for trace < -2 (eigenvalues `-lambda`, `-1/lambda`).
    pub sign: i8,
    /// Row-major `Q`; `Q M Q^{-1} = sign * diag(lambda, 1/lambda)`.
    pub q_matrix: [[f64; 2]; 2],
    /// Operator norm of `Q`.
    pub q_norm: f64,
}

impl CatMapAnalysis {
    pub fn q_inverse(&self) -> [[f64; 2]; 2] {
        let q = self.q_matrix;
        [[q[1][1], -q[0][1]], [-q[1][0], q[0][0]]]
    }

    /// `Q^{-1} D Q`, which should reproduce the original matrix.
    pub fn reconstruct(&self) -> [[f64; 2]; 2] {
        let s = f64::from(self.sign);
        let d = [s * self.lambda, s / self.lambda];
        let qi = self.q_inverse();
        let q = self.q_matrix;
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..2).map(|k| qi[i][k] * d[k] * q[k][j]).sum();
            }
        }
        out
    }
}

pub fn analyze(m: &CatMap) -> Result<CatMapAnalysis> {
    if m.det() != 1 {
        return Err(Error::NotUnimodular { det: m.det() });
    }
    let tr = m.trace();
    if tr.abs() <= 2 {
        return Err(Error::NotHyperbolic { trace: tr });
    }
    let sign: i8 = if tr > 0 { 1 } else { -1 };
    let t = tr.abs() as f64;
    let lambda = (t + (t * t - 4.0).sqrt()) / 2.0;

    // Right eigenvectors for sign*lambda and sign/lambda form the columns of Q^{-1}.
    let s = f64::from(sign);
    let eigvec = |mu: f64| -> [f64; 2] {
        let v = if m.b != 0 {
            [m.b as f64, mu - m.a as f64]
        } else {
            // b == 0 and hyperbolic forces c != 0
            [mu - m.d as f64, m.c as f64]
        };
        let len = v[0].hypot(v[1]);
        [v[0] / len, v[1] / len]
    };
    let mut v1 = eigvec(s * lambda);
    let mut v2 = eigvec(s / lambda);
    if v1[0] < 0.0 || (v1[0] == 0.0 && v1[1] < 0.0) {
        v1 = [-v1[0], -v1[1]];
    }
    let mut det = v1[0] * v2[1] - v2[0] * v1[1];
    if det < 0.0 {
        v2 = [-v2[0], -v2[1]];
        det = -det;
    }
    let scale = det.sqrt().recip();
    let p = [
        [v1[0] * scale, v2[0] * scale],
        [v1[1] * scale, v2[1] * scale],
    ];
    // det p == 1, so its inverse is the adjugate
    let q_matrix = [[p[1][1], -p[0][1]], [-p[1][0], p[0][0]]];
    let q_norm = operator_norm_2x2(&q_matrix);
    Ok(CatMapAnalysis {
        lambda,
        sign,
        q_matrix,
        q_norm,
    })
}

pub(crate) fn operator_norm_2x2(q: &[[f64; 2]; 2]) -> f64 {
    // largest eigenvalue of Q^T Q
    let a = q[0][0] * q[0][0] + q[1][0] * q[1][0];
    let d = q[0][1] * q[0][1] + q[1][1] * q[1][1];
    let b = q[0][0] * q[0][1] + q[1][0] * q[1][1];
    let half_tr = (a + d) / 2.0;
    let disc = (((a - d) / 2.0).powi(2) + b * b).sqrt();
    (half_tr + disc).sqrt()
}

/// Radius of the ball around the origin in which the fixed point is the only
/// periodic orbit: `1 / (4 lambda |Q|^2)`.
pub fn guard_radius(analysis: &CatMapAnalysis) -> f64 {
    1.0 / (4.0 * analysis.lambda * analysis.q_norm * analysis.q_norm)
}

/// A point `(x_num / q, y_num / q)` of the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub x_num: i64,
    pub y_num: i64,
    pub q: i64,
}

impl RationalPoint {
    /// Panics if `q < 1`.
    pub fn new(x_num: i64, y_num: i64, q: i64) -> Self {
        assert!(q >= 1, "denominator must be positive");
        RationalPoint {
            x_num: x_num.rem_euclid(q),
            y_num: y_num.rem_euclid(q),
            q,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x_num == 0 && self.y_num == 0
    }

    /// Euclidean norm of the representative in `[-1/2, 1/2)^2`.
    pub fn torus_norm(&self) -> f64 {
        let x = torus_rep(self.x_num as f64 / self.q as f64);
        let y = torus_rep(self.y_num as f64 / self.q as f64);
        x.hypot(y)
    }
}

pub fn iterate_mod_q(m: &CatMap, p: RationalPoint) -> RationalPoint {
    let q = i128::from(p.q);
    let (x, y) = (i128::from(p.x_num), i128::from(p.y_num));
    let nx = (i128::from(m.a) * x + i128::from(m.b) * y).rem_euclid(q);
    let ny = (i128::from(m.c) * x + i128::from(m.d) * y).rem_euclid(q);
    RationalPoint {
        x_num: nx as i64,
        y_num: ny as i64,
        q: p.q,
    }
}

/// Forward orbit of `p`, stopping before the first return.
pub fn orbit(m: &CatMap, p: RationalPoint) -> Vec<RationalPoint> {
    let mut out = vec![p];
    let mut cur = iterate_mod_q(m, p);
    while cur != p {
        out.push(cur);
        cur = iterate_mod_q(m, cur);
    }
    out
}

/// Orbit statistics for all nonzero points of denominator `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenominatorStats {
    pub q: i64,
    pub num_orbits: usize,
    /// Smallest (over nonzero orbits) of the largest torus norm along the orbit.
    /// Infinite when there are no nonzero points.
    pub min_orbit_max_norm: f64,
    /// First orbit lying entirely inside the open ball, if any.
    pub witness: Option<Vec<RationalPoint>>,
}

impl DenominatorStats {
    pub fn all_escape(&self) -> bool {
        self.witness.is_none()
    }
}

/// Enumerates the cycles of `m` on `(Z/q)^2 \ {0}` in lexicographic order of
/// their first point.
pub fn denominator_stats(m: &CatMap, radius: f64, q: i64) -> DenominatorStats {
    let qs = q as usize;
    let mut seen = vec![false; qs * qs];
    seen[0] = true;
    let mut num_orbits = 0;
    let mut min_max = f64::INFINITY;
    let mut witness = None;
    for x in 0..q {
        for y in 0..q {
            let idx = x as usize * qs + y as usize;
            if seen[idx] {
                continue;
            }
            let orb = orbit(m, RationalPoint::new(x, y, q));
            let mut max_norm = 0.0f64;
            for p in &orb {
                seen[p.x_num as usize * qs + p.y_num as usize] = true;
                max_norm = max_norm.max(p.torus_norm());
            }
            num_orbits += 1;
            min_max = min_max.min(max_norm);
            if witness.is_none() && max_norm < radius {
                witness = Some(orb);
            }
        }
    }
    DenominatorStats {
        q,
        num_orbits,
        min_orbit_max_norm: min_max,
        witness,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EscapeReport {
    pub all_escape: bool,
    pub witness: Option<Vec<RationalPoint>>,
    pub per_q: Vec<DenominatorStats>,
}

/// Checks that every nonzero periodic orbit with denominator `q <= q_max`
/// leaves the open ball of the given radius around the origin.
///
/// `radius` must lie in `(0, 1/2]`.
pub fn escape_check(m: &CatMap, radius: f64, q_max: i64) -> Result<EscapeReport> {
    if !(radius > 0.0 && radius <= 0.5) {
        return Err(Error::InvalidRadius(radius));
    }
    let per_q: Vec<DenominatorStats> = (1..=q_max.max(0))
        .into_par_iter()
        .map(|q| denominator_stats(m, radius, q))
        .collect();
    let witness = per_q.iter().find_map(|s| s.witness.clone());
    Ok(EscapeReport {
        all_escape: witness.is_none(),
        witness,
        per_q,
    })
}
