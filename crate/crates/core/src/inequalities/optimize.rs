//! Deterministic maximization over products of unit spheres.
//!
//! A coarse polar/azimuthal lattice is swept one sphere at a time from a
//! fixed set of starting configurations, then each candidate is polished by
//! coordinatewise golden-section search along tangent great circles, halving
//! the bracket until it is below the minimum step.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::quantum::{norm, Direction, Vec3};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Lattice and refinement parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereSearch {
    pub polar_steps: usize,
    pub azimuth_steps: usize,
    /// Points tried for each bounded scalar during the coarse sweep.
    pub scalar_steps: usize,
    pub starts: usize,
    pub min_step: f64,
    pub max_sweeps: usize,
}

impl Default for SphereSearch {
    fn default() -> Self {
        SphereSearch {
            polar_steps: 12,
            azimuth_steps: 24,
            scalar_steps: 11,
            starts: 8,
            min_step: 1e-8,
            max_sweeps: 20_000,
        }
    }
}

/// Best point found.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereOptimum {
    pub value: f64,
    pub dirs: Vec<Direction>,
    pub scalars: Vec<f64>,
    /// Index of the starting configuration that produced it.
    pub start: usize,
}

/// Lattice points `θ = iπ/P`, `φ = 2πj/A`, with one point per pole.
pub fn sphere_lattice(polar_steps: usize, azimuth_steps: usize) -> Vec<Vec3> {
    let mut pts = vec![[0.0, 0.0, 1.0]];
    for i in 1..polar_steps {
        let theta = PI * i as f64 / polar_steps as f64;
        for j in 0..azimuth_steps {
            let phi = 2.0 * PI * j as f64 / azimuth_steps as f64;
            pts.push(Direction::from_angles(theta, phi).vector());
        }
    }
    pts.push([0.0, 0.0, -1.0]);
    pts
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

// Orthonormal tangent basis at unit vector `d`.
fn tangent_basis(d: &Vec3) -> [Vec3; 2] {
    let k = (0..3).min_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs())).unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let p = d[k];
    let u = [e[0] - p * d[0], e[1] - p * d[1], e[2] - p * d[2]];
    let len = norm(&u);
    let u = [u[0] / len, u[1] / len, u[2] / len];
    [u, cross(d, &u)]
}

fn rotate(d: &Vec3, axis: &Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    let v = [c * d[0] + s * axis[0], c * d[1] + s * axis[1], c * d[2] + s * axis[2]];
    let len = norm(&v);
    [v[0] / len, v[1] / len, v[2] / len]
}

// Maximizes a 1-D function on [lo, hi]; returns (argmax, value).
fn golden_max(lo: f64, hi: f64, tol: f64, mut g: impl FnMut(f64) -> f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    while b - a > tol {
        if g1 >= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - GOLDEN * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + GOLDEN * (b - a);
            g2 = g(x2);
        }
    }
    if g1 >= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

struct Point {
    dirs: Vec<Vec3>,
    scalars: Vec<f64>,
    value: f64,
}

impl SphereSearch {
    /// Maximizes `f(dirs, scalars)` over `spheres` unit vectors and scalars
    /// bounded by `bounds`.
    pub fn maximize<F>(&self, spheres: usize, bounds: &[(f64, f64)], f: F) -> SphereOptimum
    where
        F: Fn(&[Vec3], &[f64]) -> f64 + Sync,
    {
        let lattice = sphere_lattice(self.polar_steps, self.azimuth_steps);
        let best = (0..self.starts.max(1))
            .into_par_iter()
            .map(|start| {
                let mut p = self.coarse(start, spheres, bounds, &lattice, &f);
                self.refine(&mut p, bounds, &f);
                (start, p)
            })
            .reduce_with(|x, y| {
                // Higher value wins; ties go to the lower start index.
                if y.1.value > x.1.value || (y.1.value == x.1.value && y.0 < x.0) {
                    y
                } else {
                    x
                }
            })
            .expect("at least one start");
        let (start, p) = best;
        SphereOptimum {
            value: p.value,
            dirs: p
                .dirs
                .iter()
                .map(|&d| Direction::normalized(d).expect("unit vector"))
                .collect(),
            scalars: p.scalars,
            start,
        }
    }

    fn scalar_grid(&self, (lo, hi): (f64, f64)) -> impl Iterator<Item = f64> {
        let steps = self.scalar_steps.max(2);
        (0..steps).map(move |i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
    }

    fn coarse<F>(&self, start: usize, spheres: usize, bounds: &[(f64, f64)], lattice: &[Vec3], f: &F) -> Point
    where
        F: Fn(&[Vec3], &[f64]) -> f64,
    {
        let len = lattice.len();
        let mut dirs: Vec<Vec3> = (0..spheres)
            .map(|j| lattice[(start * 37 + j * 101 + 5 * start * j) % len])
            .collect();
        let mut scalars: Vec<f64> = bounds.iter().map(|&(_, hi)| hi).collect();
        let mut value = f(&dirs, &scalars);
        for _ in 0..self.max_sweeps {
            let before = value;
            for j in 0..spheres {
                for &cand in lattice {
                    let keep = dirs[j];
                    dirs[j] = cand;
                    let v = f(&dirs, &scalars);
                    if v > value {
                        value = v;
                    } else {
                        dirs[j] = keep;
                    }
                }
            }
            for (i, &b) in bounds.iter().enumerate() {
                for cand in self.scalar_grid(b) {
                    let keep = scalars[i];
                    scalars[i] = cand;
                    let v = f(&dirs, &scalars);
                    if v > value {
                        value = v;
                    } else {
                        scalars[i] = keep;
                    }
                }
            }
            if value <= before {
                break;
            }
        }
        Point { dirs, scalars, value }
    }

    fn refine<F>(&self, p: &mut Point, bounds: &[(f64, f64)], f: &F)
    where
        F: Fn(&[Vec3], &[f64]) -> f64,
    {
        let mut step = PI / self.polar_steps as f64;
        let mut sweeps = 0;
        while step >= self.min_step && sweeps < self.max_sweeps {
            sweeps += 1;
            let before = p.value;
            for j in 0..p.dirs.len() {
                for axis in tangent_basis(&p.dirs[j]) {
                    let base = p.dirs[j];
                    let mut trial = p.dirs.clone();
                    let (angle, v) = golden_max(-step, step, step * 1e-3, |a| {
                        trial[j] = rotate(&base, &axis, a);
                        f(&trial, &p.scalars)
                    });
                    if v > p.value {
                        p.dirs[j] = rotate(&base, &axis, angle);
                        p.value = v;
                    }
                }
            }
            for (i, &(lo, hi)) in bounds.iter().enumerate() {
                let x = p.scalars[i];
                let mut trial = p.scalars.clone();
                let (lo, hi) = ((x - step).max(lo), (x + step).min(hi));
                let (arg, v) = golden_max(lo, hi, step * 1e-3, |s| {
                    trial[i] = s;
                    f(&p.dirs, &trial)
                });
                let v_edge = [lo, hi].map(|s| {
                    trial[i] = s;
                    (s, f(&p.dirs, &trial))
                });
                let (arg, v) = v_edge.into_iter().fold((arg, v), |b, c| if c.1 > b.1 { c } else { b });
                if v > p.value {
                    p.scalars[i] = arg;
                    p.value = v;
                }
            }
            // Shrink once a sweep stops paying off at this scale.
            if p.value - before <= 1e-13 * (1.0 + p.value.abs()) {
                step *= 0.5;
            }
        }
    }
}
