use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

/// A vector of the ambient Euclidean space ℝ⁵.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Point5(pub [f64; 5]);

impl Point5 {
    pub const ZERO: Point5 = Point5([0.0; 5]);

    pub const fn new(c: [f64; 5]) -> Self {
        Point5(c)
    }

    /// The i-th standard basis vector.
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 5];
        c[i] = 1.0;
        Point5(c)
    }

    pub fn dot(&self, other: &Point5) -> f64 {
        dot(self, other)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, s: f64) -> Self {
        Point5(self.0.map(|c| c * s))
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Point5) -> Self {
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o += s * b;
        }
        out
    }

    pub fn as_array(&self) -> &[f64; 5] {
        &self.0
    }
}

/// Canonical inner product of ℝ⁵.
pub fn dot(a: &Point5, b: &Point5) -> f64 {
    a.0.iter().zip(b.0.iter()).map(|(x, y)| x * y).sum()
}

impl fmt::Debug for Point5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point5{:?}", self.0)
    }
}

impl From<[f64; 5]> for Point5 {
    fn from(c: [f64; 5]) -> Self {
        Point5(c)
    }
}

impl Index<usize> for Point5 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Point5 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for Point5 {
    type Output = Point5;
    fn add(mut self, rhs: Point5) -> Point5 {
        self += rhs;
        self
    }
}

impl AddAssign for Point5 {
    fn add_assign(&mut self, rhs: Point5) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a += b;
        }
    }
}

impl Sub for Point5 {
    type Output = Point5;
    fn sub(mut self, rhs: Point5) -> Point5 {
        self -= rhs;
        self
    }
}

impl SubAssign for Point5 {
    fn sub_assign(&mut self, rhs: Point5) {
        for (a, b) in self.0.iter_mut().zip(rhs.0.iter()) {
            *a -= b;
        }
    }
}

impl Mul<f64> for Point5 {
    type Output = Point5;
    fn mul(self, s: f64) -> Point5 {
        self.scale(s)
    }
}

impl Mul<Point5> for f64 {
    type Output = Point5;
    fn mul(self, p: Point5) -> Point5 {
        p.scale(self)
    }
}

impl Neg for Point5 {
    type Output = Point5;
    fn neg(self) -> Point5 {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&Point5::basis(0), &Point5::basis(1)), 0.0);
        let ones = Point5([1.0; 5]);
        assert_eq!(ones.dot(&ones), 5.0);
        let c1 = Point5([std::f64::consts::FRAC_1_SQRT_2, 0.0, 0.0, 0.0, 0.0]);
        assert!((c1.dot(&c1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn arithmetic() {
        let a = Point5([1.0, 2.0, 3.0, 4.0, 5.0]);
        let b = Point5([5.0, 4.0, 3.0, 2.0, 1.0]);
        assert_eq!((a + b).0, [6.0; 5]);
        assert_eq!((a - a).0, [0.0; 5]);
        assert_eq!((2.0 * a).0, [2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(a.axpy(-1.0, &a).0, [0.0; 5]);
        assert_eq!(b.max_abs(), 5.0);
    }
}
