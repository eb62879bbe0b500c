use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// An element of ℝ, ℂ or ℍ stored as quaternion coordinates `re + i·i + j·j + k·k`.
///
/// Reals and complex numbers are the subalgebras with trailing coordinates
/// equal to zero, so one arithmetic covers every full-matrix algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quat {
    pub const ZERO: Quat = Quat { re: 0.0, i: 0.0, j: 0.0, k: 0.0 };
    pub const ONE: Quat = Quat { re: 1.0, i: 0.0, j: 0.0, k: 0.0 };

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Quat { re, i, j, k }
    }

    pub const fn real(re: f64) -> Self {
        Quat { re, i: 0.0, j: 0.0, k: 0.0 }
    }

    pub fn conj(self) -> Self {
        Quat::new(self.re, -self.i, -self.j, -self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quat::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    pub fn inv(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// Coordinate `c` in the basis (1, i, j, k).
    pub fn coord(self, c: usize) -> f64 {
        match c {
            0 => self.re,
            1 => self.i,
            2 => self.j,
            3 => self.k,
            _ => panic!("quaternion coordinate {c} out of range"),
        }
    }

    pub fn coord_mut(&mut self, c: usize) -> &mut f64 {
        match c {
            0 => &mut self.re,
            1 => &mut self.i,
            2 => &mut self.j,
            3 => &mut self.k,
            _ => panic!("quaternion coordinate {c} out of range"),
        }
    }

    /// Matrix of `x ↦ self·x` acting on the coordinates (1, i, j, k).
    pub fn left_matrix(self) -> [[f64; 4]; 4] {
        let Quat { re: a, i: b, j: c, k: d } = self;
        [
            [a, -b, -c, -d],
            [b, a, -d, c],
            [c, d, a, -b],
            [d, -c, b, a],
        ]
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl AddAssign for Quat {
    fn add_assign(&mut self, o: Quat) {
        *self = *self + o;
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl SubAssign for Quat {
    fn sub_assign(&mut self, o: Quat) {
        *self = *self - o;
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl Mul for Quat {
    type Output = Quat;
    // Hamilton product; not commutative.
    fn mul(self, o: Quat) -> Quat {
        Quat::new(
            self.re * o.re - self.i * o.i - self.j * o.j - self.k * o.k,
            self.re * o.i + self.i * o.re + self.j * o.k - self.k * o.j,
            self.re * o.j - self.i * o.k + self.j * o.re + self.k * o.i,
            self.re * o.k + self.i * o.j - self.j * o.i + self.k * o.re,
        )
    }
}

impl Mul<f64> for Quat {
    type Output = Quat;
    fn mul(self, s: f64) -> Quat {
        self.scale(s)
    }
}

impl Div<f64> for Quat {
    type Output = Quat;
    fn div(self, s: f64) -> Quat {
        self.scale(1.0 / s)
    }
}
