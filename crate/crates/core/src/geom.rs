//! Small fixed-capacity vectors and matrices for dimensions 1 to 3.
//!
//! Everything in this crate works in ambient or chart dimension n <= 3, so a
//! stack-allocated vector with a runtime dimension avoids generics spreading
//! through every signature.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Vector (or point) in 1, 2 or 3 dimensions.
#[derive(Clone, Copy, PartialEq)]
pub struct VecN {
    dim: usize,
    data: [f64; 3],
}

impl VecN {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=3).contains(&dim), "dimension must be 1..=3");
        VecN { dim, data: [0.0; 3] }
    }

    pub fn v1(x: f64) -> Self {
        VecN { dim: 1, data: [x, 0.0, 0.0] }
    }

    pub fn v2(x: f64, y: f64) -> Self {
        VecN { dim: 2, data: [x, y, 0.0] }
    }

    pub fn v3(x: f64, y: f64, z: f64) -> Self {
        VecN { dim: 3, data: [x, y, z] }
    }

    pub fn from_slice(s: &[f64]) -> Self {
        assert!((1..=3).contains(&s.len()));
        let mut data = [0.0; 3];
        data[..s.len()].copy_from_slice(s);
        VecN { dim: s.len(), data }
    }

    /// Standard basis vector `e_i` (0-based index).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = VecN::zero(dim);
        v[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data[..self.dim]
    }

    pub fn dot(&self, other: &VecN) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn dist(&self, other: &VecN) -> f64 {
        (*self - *other).norm()
    }

    pub fn scale(&self, c: f64) -> VecN {
        let mut out = *self;
        for i in 0..self.dim {
            out.data[i] *= c;
        }
        out
    }

    /// Unit vector in the same direction; `None` if the norm is below `floor`.
    pub fn unit(&self, floor: f64) -> Option<VecN> {
        let n = self.norm();
        if n <= floor {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_finite())
    }

    /// Cross product, dimension 3 only.
    pub fn cross(&self, other: &VecN) -> VecN {
        debug_assert_eq!(self.dim, 3);
        debug_assert_eq!(other.dim, 3);
        let a = &self.data;
        let b = &other.data;
        VecN::v3(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    }

    /// Angle between two unit-ish vectors, in radians.
    pub fn angle_to(&self, other: &VecN) -> f64 {
        let c = self.dot(other) / (self.norm() * other.norm());
        c.clamp(-1.0, 1.0).acos()
    }

    /// Tail components `(v[1], .., v[dim-1])` as a lower-dimensional vector.
    /// Only meaningful for dim >= 2.
    pub fn tangential(&self) -> VecN {
        debug_assert!(self.dim >= 2);
        VecN::from_slice(&self.data[1..self.dim])
    }

    /// Build a dim-n vector from a first component and a tail vector.
    pub fn from_normal_tangential(first: f64, tail: &VecN) -> VecN {
        let mut data = [0.0; 3];
        data[0] = first;
        data[1..=tail.dim].copy_from_slice(tail.as_slice());
        VecN { dim: tail.dim + 1, data }
    }
}

impl Index<usize> for VecN {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        debug_assert!(i < self.dim);
        &self.data[i]
    }
}

impl IndexMut<usize> for VecN {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        debug_assert!(i < self.dim);
        &mut self.data[i]
    }
}

impl Add for VecN {
    type Output = VecN;
    fn add(self, other: VecN) -> VecN {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self;
        for i in 0..self.dim {
            out.data[i] += other.data[i];
        }
        out
    }
}

impl Sub for VecN {
    type Output = VecN;
    fn sub(self, other: VecN) -> VecN {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self;
        for i in 0..self.dim {
            out.data[i] -= other.data[i];
        }
        out
    }
}

impl Neg for VecN {
    type Output = VecN;
    fn neg(self) -> VecN {
        self.scale(-1.0)
    }
}

impl Mul<f64> for VecN {
    type Output = VecN;
    fn mul(self, c: f64) -> VecN {
        self.scale(c)
    }
}

impl fmt::Debug for VecN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.as_slice().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Square matrix of the same runtime dimension as [`VecN`].
/// Stored row-major; `cols[j]` access goes through [`MatN::col`].
#[derive(Clone, Copy, Debug)]
pub struct MatN {
    dim: usize,
    rows: [[f64; 3]; 3],
}

impl MatN {
    pub fn zero(dim: usize) -> Self {
        assert!((1..=3).contains(&dim));
        MatN { dim, rows: [[0.0; 3]; 3] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = MatN::zero(dim);
        for i in 0..dim {
            m.rows[i][i] = 1.0;
        }
        m
    }

    pub fn from_cols(cols: &[VecN]) -> Self {
        let dim = cols.len();
        assert!((1..=3).contains(&dim));
        let mut m = MatN::zero(dim);
        for (j, c) in cols.iter().enumerate() {
            debug_assert_eq!(c.dim(), dim);
            for i in 0..dim {
                m.rows[i][j] = c[i];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.rows[i][j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn col(&self, j: usize) -> VecN {
        let mut v = VecN::zero(self.dim);
        for i in 0..self.dim {
            v[i] = self.rows[i][j];
        }
        v
    }

    pub fn mul_vec(&self, v: &VecN) -> VecN {
        debug_assert_eq!(self.dim, v.dim());
        let mut out = VecN::zero(self.dim);
        for i in 0..self.dim {
            let mut s = 0.0;
            for j in 0..self.dim {
                s += self.rows[i][j] * v[j];
            }
            out[i] = s;
        }
        out
    }

    pub fn det(&self) -> f64 {
        let r = &self.rows;
        match self.dim {
            1 => r[0][0],
            2 => r[0][0] * r[1][1] - r[0][1] * r[1][0],
            _ => {
                r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                    - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                    + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
            }
        }
    }

    /// Solve `self * x = b` by Gaussian elimination with partial pivoting.
    /// Returns `None` for a (numerically) singular matrix.
    pub fn solve(&self, b: &VecN) -> Option<VecN> {
        let n = self.dim;
        let mut a = self.rows;
        let mut rhs = [0.0; 3];
        rhs[..n].copy_from_slice(b.as_slice());

        for k in 0..n {
            let mut piv = k;
            for i in (k + 1)..n {
                if a[i][k].abs() > a[piv][k].abs() {
                    piv = i;
                }
            }
            if a[piv][k].abs() < 1e-300 {
                return None;
            }
            a.swap(k, piv);
            rhs.swap(k, piv);
            for i in (k + 1)..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                rhs[i] -= f * rhs[k];
            }
        }
        let mut x = [0.0; 3];
        for k in (0..n).rev() {
            let mut s = rhs[k];
            for j in (k + 1)..n {
                s -= a[k][j] * x[j];
            }
            x[k] = s / a[k][k];
        }
        Some(VecN::from_slice(&x[..n]))
    }
}

/// Wrap an angle into (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut w = a % two_pi;
    if w <= -std::f64::consts::PI {
        w += two_pi;
    } else if w > std::f64::consts::PI {
        w -= two_pi;
    }
    w
}

/// 2-D unit vector at the given angle.
pub fn unit2(angle: f64) -> VecN {
    VecN::v2(angle.cos(), angle.sin())
}

/// Angle of a 2-D vector via atan2.
pub fn angle2(v: &VecN) -> f64 {
    v[1].atan2(v[0])
}

/// Two unit vectors completing `n` (unit, 3-D) to a right-handed frame:
/// `det[n, t2, t3] = +1`.
pub fn orthonormal_frame(n: &VecN) -> (VecN, VecN) {
    debug_assert_eq!(n.dim(), 3);
    // pick the axis least aligned with n to seed Gram-Schmidt
    let mut best = 0;
    for i in 1..3 {
        if n[i].abs() < n[best].abs() {
            best = i;
        }
    }
    let seed = VecN::basis(3, best);
    let t2 = (seed - n.scale(seed.dot(n))).unit(1e-12).expect("frame seed");
    let t3 = n.cross(&t2);
    (t2, t3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_3x3() {
        let m = MatN::from_cols(&[
            VecN::v3(2.0, 0.0, 1.0),
            VecN::v3(0.0, 3.0, 0.0),
            VecN::v3(1.0, 0.0, 4.0),
        ]);
        let x = VecN::v3(1.0, -2.0, 0.5);
        let b = m.mul_vec(&x);
        let got = m.solve(&b).unwrap();
        assert!(got.dist(&x) < 1e-12);
    }

    #[test]
    fn frame_is_right_handed() {
        let n = VecN::v3(0.3, -0.4, 0.8).unit(0.0).unwrap();
        let (t2, t3) = orthonormal_frame(&n);
        let det = MatN::from_cols(&[n, t2, t3]).det();
        assert!((det - 1.0).abs() < 1e-12);
        assert!(n.dot(&t2).abs() < 1e-12);
        assert!(n.dot(&t3).abs() < 1e-12);
        assert!(t2.dot(&t3).abs() < 1e-12);
    }

    #[test]
    fn wrap_angle_range() {
        for k in -20..20 {
            let a = 0.7 + k as f64 * 1.3;
            let w = wrap_angle(a);
            assert!(w > -std::f64::consts::PI - 1e-12 && w <= std::f64::consts::PI + 1e-12);
            assert!(((a - w) / std::f64::consts::TAU).round() * std::f64::consts::TAU - (a - w) < 1e-9);
        }
    }
}
