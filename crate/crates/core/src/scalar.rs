//! Complex and quaternion scalars and the standard real/complex matrix
//! representations of `C` and `H`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

/// A complex number `re + im·i`.
pub type ComplexScalar = nalgebra::Complex<f64>;

/// A real quaternion `a + b·i + c·j + d·k`.
///
/// Stored in `(a, b, c, d)` order, the argument order of the 4×4 real
/// representation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    pub fn from_complex(z: ComplexScalar) -> Self {
        Self::new(z.re, z.im, 0.0, 0.0)
    }

    /// Builds `z + w·j` from its two complex coordinates.
    pub fn from_complex_pair(z: ComplexScalar, w: ComplexScalar) -> Self {
        // (w.re + w.im i) j = w.re j + w.im k
        Self::new(z.re, z.im, w.re, w.im)
    }

    /// The `(z, w)` with `self = z + w·j`.
    pub fn complex_pair(self) -> (ComplexScalar, ComplexScalar) {
        (
            ComplexScalar::new(self.a, self.b),
            ComplexScalar::new(self.c, self.d),
        )
    }

    pub fn coeffs(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_coeffs(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Two-sided inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            None
        } else {
            Some(self.conj().scale(1.0 / n2))
        }
    }

    pub fn scale(self, r: f64) -> Self {
        Self::new(self.a * r, self.b * r, self.c * r, self.d * r)
    }

    pub fn is_real(self) -> bool {
        self.b == 0.0 && self.c == 0.0 && self.d == 0.0
    }

    pub fn is_complex(self) -> bool {
        self.c == 0.0 && self.d == 0.0
    }

    /// A quaternion with independent standard normal coefficients.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }
}

/// Hamilton product.
pub fn quat_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
        p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
        p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
        p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
    )
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        quat_mul(self, o)
    }
}

impl Zero for Quaternion {
    fn zero() -> Self {
        Self::ZERO
    }
    fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.a, self.b, self.c, self.d)
    }
}

/// `a + bi ↦ [[a, −b], [b, a]]`, row-major.
pub fn embed_c_m2r(z: ComplexScalar) -> [[f64; 2]; 2] {
    [[z.re, -z.im], [z.im, z.re]]
}

/// `z + wj ↦ [[z, w], [−w̄, z̄]]`, row-major.
pub fn embed_h_m2c(q: Quaternion) -> [[ComplexScalar; 2]; 2] {
    let (z, w) = q.complex_pair();
    [[z, w], [-w.conj(), z.conj()]]
}

/// The 4×4 real representation of `a + bi + cj + dk`, row-major.
pub fn embed_h_m4r(q: Quaternion) -> [[f64; 4]; 4] {
    let Quaternion { a, b, c, d } = q;
    [
        [a, -b, c, -d],
        [b, a, d, c],
        [-c, -d, a, b],
        [d, -c, -b, a],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(p: Quaternion, q: Quaternion, tol: f64) -> bool {
        (p - q).norm() <= tol
    }

    #[test]
    fn defining_relations() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::J * Q::I, -Q::K);
        assert_eq!(Q::I * Q::I, -Q::ONE);
        let q = Q::new(2.0, 3.0, -1.0, 1.0);
        assert_eq!(q * Q::ONE, q);
        assert_eq!(Q::ONE * q, q);
    }

    #[test]
    fn one_plus_i_times_one_plus_j() {
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let q = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(p * q, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conj_times_self_is_norm_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let q = Quaternion::random(&mut rng);
            let p = q.conj() * q;
            assert!(close(p, Quaternion::real(q.norm_sqr()), 1e-12));
            let inv = q.inv().unwrap();
            assert!(close(inv * q, Quaternion::ONE, 1e-12));
        }
        assert!(Quaternion::ZERO.inv().is_none());
    }

    #[test]
    fn associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let (p, q, r) = (
                Quaternion::random(&mut rng),
                Quaternion::random(&mut rng),
                Quaternion::random(&mut rng),
            );
            assert!(close((p * q) * r, p * (q * r), 1e-12));
        }
    }

    #[test]
    fn printed_embedding_values() {
        assert_eq!(
            embed_c_m2r(ComplexScalar::new(0.0, 1.0)),
            [[0.0, -1.0], [1.0, 0.0]]
        );
        let j = embed_h_m2c(Quaternion::J);
        let z = ComplexScalar::new(0.0, 0.0);
        let one = ComplexScalar::new(1.0, 0.0);
        assert_eq!(j, [[z, one], [-one, z]]);
        assert_eq!(
            embed_h_m4r(Quaternion::I),
            [
                [0.0, -1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0, 0.0]
            ]
        );
    }

    #[test]
    fn complex_pair_round_trip() {
        let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
        let (z, w) = q.complex_pair();
        assert_eq!(Quaternion::from_complex_pair(z, w), q);
        // z + w j with w = 3 + 4i equals 3j + 4k
        let wj = Quaternion::from_complex(w) * Quaternion::J;
        assert_eq!(Quaternion::from_complex(z) + wj, q);
    }
}
