//! Control vectors and their admissible boxes U.

use std::fmt::Debug;

use crate::rng::RngStream;

/// A fixed-dimension actuator vector viewed as a point of R^DIM.
pub trait ControlVector: Copy + Debug + PartialEq + Send + Sync + 'static {
    const DIM: usize;

    fn to_vec(&self) -> Vec<f64>;

    /// Panics unless `xs.len() == DIM`.
    fn from_slice(xs: &[f64]) -> Self;
}

impl ControlVector for f64 {
    const DIM: usize = 1;

    fn to_vec(&self) -> Vec<f64> {
        vec![*self]
    }

    fn from_slice(xs: &[f64]) -> Self {
        assert_eq!(xs.len(), 1);
        xs[0]
    }
}

/// Componentwise interpolation `(1 - t) a + t b`; returns `a` at t = 0 and `b` at t = 1 exactly.
pub fn lerp<U: ControlVector>(a: &U, b: &U, t: f64) -> U {
    if t == 0.0 {
        return *a;
    }
    if t == 1.0 {
        return *b;
    }
    let (xa, xb) = (a.to_vec(), b.to_vec());
    let xs: Vec<f64> = xa.iter().zip(&xb).map(|(p, q)| (1.0 - t) * p + t * q).collect();
    U::from_slice(&xs)
}

/// Squared Euclidean distance.
pub fn dist2<U: ControlVector>(a: &U, b: &U) -> f64 {
    a.to_vec()
        .iter()
        .zip(b.to_vec())
        .map(|(p, q)| (p - q) * (p - q))
        .sum()
}

/// Axis-aligned actuator box `lower <= u <= upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlBox<U> {
    pub lower: U,
    pub upper: U,
}

impl<U: ControlVector> ControlBox<U> {
    pub fn new(lower: U, upper: U) -> Self {
        debug_assert!(lower.to_vec().iter().zip(upper.to_vec()).all(|(l, h)| *l <= h));
        Self { lower, upper }
    }

    pub fn contains(&self, u: &U) -> bool {
        self.contains_within(u, 0.0)
    }

    /// Membership with every face pushed out by `tol`.
    pub fn contains_within(&self, u: &U, tol: f64) -> bool {
        let (lo, hi, x) = (self.lower.to_vec(), self.upper.to_vec(), u.to_vec());
        x.iter()
            .zip(lo.iter().zip(&hi))
            .all(|(x, (l, h))| *x >= l - tol && *x <= h + tol)
    }

    /// Nearest point of the box and whether any component moved.
    /// NaN components are mapped to the lower bound.
    pub fn clamp(&self, u: &U) -> (U, bool) {
        let (lo, hi, mut x) = (self.lower.to_vec(), self.upper.to_vec(), u.to_vec());
        let mut moved = false;
        for i in 0..x.len() {
            let c = if x[i].is_nan() { lo[i] } else { x[i].clamp(lo[i], hi[i]) };
            if c != x[i] || x[i].is_nan() {
                moved = true;
            }
            x[i] = c;
        }
        if moved {
            (U::from_slice(&x), true)
        } else {
            (*u, false)
        }
    }

    pub fn center(&self) -> U {
        lerp(&self.lower, &self.upper, 0.5)
    }

    /// Uniform draw over the box.
    pub fn sample(&self, rng: &mut RngStream) -> U {
        let (lo, hi) = (self.lower.to_vec(), self.upper.to_vec());
        let xs: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| rng.uniform(*l, *h)).collect();
        U::from_slice(&xs)
    }

    /// Uniform grid with `points` values per axis (both faces included when `points >= 2`).
    pub fn grid(&self, points: usize) -> Vec<U> {
        let (lo, hi) = (self.lower.to_vec(), self.upper.to_vec());
        let axes: Vec<Vec<f64>> = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| {
                if points <= 1 {
                    vec![0.5 * (l + h)]
                } else {
                    (0..points)
                        .map(|i| {
                            if i + 1 == points {
                                *h
                            } else {
                                l + (h - l) * i as f64 / (points - 1) as f64
                            }
                        })
                        .collect()
                }
            })
            .collect();
        let mut out = Vec::with_capacity(axes.iter().map(Vec::len).product());
        let mut idx = vec![0usize; axes.len()];
        loop {
            let xs: Vec<f64> = idx.iter().enumerate().map(|(a, &i)| axes[a][i]).collect();
            out.push(U::from_slice(&xs));
            let mut a = 0;
            loop {
                if a == axes.len() {
                    return out;
                }
                idx[a] += 1;
                if idx[a] < axes[a].len() {
                    break;
                }
                idx[a] = 0;
                a += 1;
            }
        }
    }
}
