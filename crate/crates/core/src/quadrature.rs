//! Gauss rules, sphere rules, and singularity-centered polar rules.
//!
//! Everything here is deterministic: node order is fixed and reductions go
//! through [`pairwise_sum`], so repeated runs produce bit-identical sums.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

/// Maximum velocity dimension supported by the polar quadrature machinery.
pub const MAX_DIM: usize = 3;

pub type Point = [f64; MAX_DIM];

/// Pairwise (cascade) summation; error grows like log n instead of n.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Surface area of the unit sphere S^{d-1}.
pub fn unit_sphere_area(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => {
            let half = dim as f64 / 2.0;
            2.0 * PI.powf(half) / statrs::function::gamma::gamma(half)
        }
    }
}

/// A one-dimensional rule: `sum(w_i g(x_i))` approximates an integral.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    /// Gauss rule on [0, 1] for the weight t^p (p > -1), via Golub-Welsch
    /// on the Jacobi recurrence with (alpha, beta) = (0, p).
    pub fn jacobi_unit(n: usize, p: f64) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        assert!(p > -1.0, "weight t^p must be integrable (p > -1), got {p}");
        if p == 0.0 {
            return Self::legendre(n).mapped(0.0, 1.0);
        }
        let alpha = 0.0;
        let beta = p;
        let ab = alpha + beta;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            let denom = (2.0 * kf + ab) * (2.0 * kf + ab + 2.0);
            let diag = if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / denom
            };
            jac[(k, k)] = diag;
            if k + 1 < n {
                let j = kf + 1.0;
                let s = 2.0 * j + ab;
                let num = 4.0 * j * (j + alpha) * (j + beta) * (j + ab);
                let den = s * s * (s + 1.0) * (s - 1.0);
                let off = (num / den).sqrt();
                jac[(k, k + 1)] = off;
                jac[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(jac);
        // mu0 = int_{-1}^{1} (1+x)^beta dx
        let mu0 = 2f64.powf(beta + 1.0) / (beta + 1.0);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let x = eig.eigenvalues[i];
                let v0 = eig.eigenvectors[(0, i)];
                (x, mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let scale = 2f64.powf(-(p + 1.0));
        GaussRule {
            nodes: pairs.iter().map(|(x, _)| 0.5 * (x + 1.0)).collect(),
            weights: pairs.iter().map(|(_, w)| w * scale).collect(),
        }
    }

    /// Affinely map a rule on [-1, 1] to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> Self {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        GaussRule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * g(*x))
            .collect();
        pairwise_sum(&terms)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Composite Gauss-Legendre over panels that shrink geometrically toward
/// `a`: [a + (b-a) r^{k+1}, a + (b-a) r^k] for k = 0..levels, plus a last
/// panel down to `a`. Suited to integrable power singularities at `a`.
pub fn graded_toward(a: f64, b: f64, ratio: f64, levels: usize, per_panel: usize) -> GaussRule {
    let base = GaussRule::legendre(per_panel);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let len = b - a;
    let mut hi = 1.0;
    for k in 0..=levels {
        let lo = if k == levels { 0.0 } else { hi * ratio };
        let panel = base.mapped(a + len * lo, a + len * hi);
        nodes.extend(panel.nodes);
        weights.extend(panel.weights);
        hi = lo;
    }
    GaussRule { nodes, weights }
}

/// Composite Gauss-Legendre with `panels` equal panels on [a, b].
pub fn composite_legendre(a: f64, b: f64, panels: usize, per_panel: usize) -> GaussRule {
    let base = GaussRule::legendre(per_panel);
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    let h = (b - a) / panels as f64;
    for k in 0..panels {
        let panel = base.mapped(a + h * k as f64, a + h * (k + 1) as f64);
        nodes.extend(panel.nodes);
        weights.extend(panel.weights);
    }
    GaussRule { nodes, weights }
}

/// Product rule on S^{d-1} for d = 2 or 3. The polar angle (d = 3) uses
/// Gauss-Legendre in cos(theta) and the azimuth the periodic trapezoid rule,
/// so the directions come in antipodal pairs.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub dim: usize,
    pub directions: Vec<Point>,
    pub weights: Vec<f64>,
    /// cos of the polar angle relative to the rule's axis, per node (d = 3),
    /// or cos of the angle in the plane (d = 2).
    pub cos_polar: Vec<f64>,
}

impl SphereRule {
    pub fn new(dim: usize, polar_nodes: usize) -> Self {
        let mut directions = Vec::new();
        let mut weights = Vec::new();
        let mut cos_polar = Vec::new();
        match dim {
            2 => {
                let n = 2 * polar_nodes;
                let w = 2.0 * PI / n as f64;
                for k in 0..n {
                    let phi = (k as f64 + 0.5) * 2.0 * PI / n as f64;
                    directions.push([phi.cos(), phi.sin(), 0.0]);
                    weights.push(w);
                    cos_polar.push(phi.cos());
                }
            }
            3 => {
                let gl = GaussRule::legendre(polar_nodes);
                let n_phi = 2 * polar_nodes;
                let w_phi = 2.0 * PI / n_phi as f64;
                for (c, wc) in gl.nodes.iter().zip(&gl.weights) {
                    let s = (1.0 - c * c).max(0.0).sqrt();
                    for k in 0..n_phi {
                        let phi = (k as f64 + 0.5) * 2.0 * PI / n_phi as f64;
                        directions.push([s * phi.cos(), s * phi.sin(), *c]);
                        weights.push(wc * w_phi);
                        cos_polar.push(*c);
                    }
                }
            }
            _ => panic!("sphere rules are implemented for d = 2 and d = 3 only"),
        }
        SphereRule { dim, directions, weights, cos_polar }
    }

    /// Same rule with its polar axis rotated onto `axis` (unit vector).
    pub fn aligned_to(&self, axis: &Point) -> Vec<Point> {
        let (e1, e2) = orthonormal_complement(self.dim, axis);
        self.directions
            .iter()
            .map(|d| match self.dim {
                2 => {
                    // d = (cos, sin) in the (axis, e1) frame
                    let mut p = [0.0; MAX_DIM];
                    for i in 0..2 {
                        p[i] = d[0] * axis[i] + d[1] * e1[i];
                    }
                    p
                }
                _ => {
                    let mut p = [0.0; MAX_DIM];
                    for i in 0..3 {
                        p[i] = d[2] * axis[i] + d[0] * e1[i] + d[1] * e2[i];
                    }
                    p
                }
            })
            .collect()
    }

    /// Copy of the rule with its polar axis moved onto `axis`.
    pub fn rotated(&self, axis: &Point) -> SphereRule {
        SphereRule {
            dim: self.dim,
            directions: self.aligned_to(axis),
            weights: self.weights.clone(),
            cos_polar: self.cos_polar.clone(),
        }
    }

    /// Rule with its polar axis pointing from `v` toward the origin, which
    /// concentrates nodes where centered fields carry their mass.
    pub fn toward_origin(&self, v: &Point) -> SphereRule {
        let r = norm3(v);
        if r == 0.0 {
            return self.clone();
        }
        self.rotated(&[-v[0] / r, -v[1] / r, -v[2] / r])
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// Unit vectors completing `axis` to an orthonormal frame (e2 unused for d = 2).
pub fn orthonormal_complement(dim: usize, axis: &Point) -> (Point, Point) {
    if dim == 2 {
        return ([-axis[1], axis[0], 0.0], [0.0; MAX_DIM]);
    }
    let helper = if axis[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dot = dot3(&helper, axis);
    let mut e1 = [0.0; MAX_DIM];
    for i in 0..3 {
        e1[i] = helper[i] - dot * axis[i];
    }
    let n1 = norm3(&e1);
    for x in e1.iter_mut() {
        *x /= n1;
    }
    let e2 = cross3(axis, &e1);
    (e1, e2)
}

#[inline]
pub fn dot3(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm3(a: &Point) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub fn cross3(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Copy a slice of length d <= 3 into a padded point.
pub fn to_point(v: &[f64]) -> Point {
    let mut p = [0.0; MAX_DIM];
    p[..v.len()].copy_from_slice(v);
    p
}

/// Parameter interval of the ray `v + r*dir` (|dir| = 1) inside the ball |w| <= radius.
pub fn ray_ball_segment(v: &Point, dir: &Point, radius: f64) -> Option<(f64, f64)> {
    let b = dot3(v, dir);
    let c = dot3(v, v) - radius * radius;
    let disc = b * b - c;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let hi = -b + sq;
    if hi <= 0.0 {
        return None;
    }
    let lo = (-b - sq).max(0.0);
    Some((lo, hi))
}

/// One node of a polar rule centered at a point `v`.
#[derive(Debug, Clone, Copy)]
pub struct PolarNode {
    pub point: Point,
    /// unit direction from v to point
    pub direction: Point,
    pub radius: f64,
    pub weight: f64,
}

/// Nodes approximating `int_{|w| <= V} g(w) |w - v|^power dw` with polar
/// coordinates centered at `v`. Inside `inner_radius` the radial factor
/// r^{power + d - 1} is absorbed into a Gauss-Jacobi rule, so integrable
/// singularities at w = v cost nothing; outside, composite Gauss-Legendre
/// panels run out to where each ray leaves the ball.
#[derive(Debug, Clone)]
pub struct CenteredBallRule {
    pub dim: usize,
    pub nodes: Vec<PolarNode>,
}

impl CenteredBallRule {
    pub fn new(
        dim: usize,
        center: &[f64],
        outer_radius: f64,
        inner_radius: f64,
        power: f64,
        radial_nodes: usize,
        sphere: &SphereRule,
    ) -> Self {
        let v = to_point(center);
        let p = power + dim as f64 - 1.0;
        let jacobi = GaussRule::jacobi_unit(radial_nodes.div_ceil(2).max(2), p);
        let per_panel = 8usize.min(radial_nodes.max(2));
        let panels = radial_nodes.div_ceil(per_panel).max(1);
        let base = GaussRule::legendre(per_panel);
        let mut nodes = Vec::new();
        for (dir, aw) in sphere.directions.iter().zip(&sphere.weights) {
            let Some((lo, hi)) = ray_ball_segment(&v, dir, outer_radius) else {
                continue;
            };
            let mut outer_start = lo;
            if lo == 0.0 {
                let a = inner_radius.min(hi);
                let scale = a.powf(p + 1.0);
                for (t, w) in jacobi.nodes.iter().zip(&jacobi.weights) {
                    let r = a * t;
                    nodes.push(PolarNode {
                        point: offset(&v, dir, r),
                        direction: *dir,
                        radius: r,
                        weight: aw * w * scale,
                    });
                }
                outer_start = a;
            }
            if hi > outer_start {
                let h = (hi - outer_start) / panels as f64;
                for k in 0..panels {
                    let panel = base.mapped(outer_start + h * k as f64, outer_start + h * (k + 1) as f64);
                    for (r, w) in panel.nodes.iter().zip(&panel.weights) {
                        nodes.push(PolarNode {
                            point: offset(&v, dir, *r),
                            direction: *dir,
                            radius: *r,
                            weight: aw * w * r.powf(p),
                        });
                    }
                }
            }
        }
        CenteredBallRule { dim, nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[inline]
pub fn offset(v: &Point, dir: &Point, r: f64) -> Point {
    [v[0] + r * dir[0], v[1] + r * dir[1], v[2] + r * dir[2]]
}
