use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{PSD_TOL, STATE_TOL};
use crate::{Error, Result};

/// Real 3-vector `r` of a qubit density operator `½(I + r·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };
    pub const NORTH: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };

    /// Checked constructor; rejects vectors outside the Bloch ball.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = BlochVector { x, y, z };
        if !v.norm().is_finite() || v.norm() > 1.0 + STATE_TOL {
            return Err(Error::Domain(format!("Bloch vector ({x}, {y}, {z}) has norm {} > 1", v.norm())));
        }
        Ok(v)
    }

    /// Pure state `(cos α sin β, sin α sin β, cos β)`.
    pub fn from_angles(alpha: f64, beta: f64) -> Self {
        let (sa, ca) = alpha.sin_cos();
        let (sb, cb) = beta.sin_cos();
        BlochVector { x: ca * sb, y: sa * sb, z: cb }
    }

    pub(crate) fn from_vector(v: Vector3<f64>) -> Self {
        BlochVector { x: v[0], y: v[1], z: v[2] }
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        (self.to_vector() - other.to_vector()).norm()
    }

    pub fn is_pure(&self) -> bool {
        (self.norm() - 1.0).abs() <= STATE_TOL
    }

    pub fn is_valid(&self) -> bool {
        self.norm() <= 1.0 + STATE_TOL
    }

    /// Unit vector in the same direction, or `None` for (near) zero vectors.
    pub fn normalized(&self) -> Option<BlochVector> {
        let n = self.norm();
        (n > 1e-300).then(|| BlochVector { x: self.x / n, y: self.y / n, z: self.z / n })
    }

    pub fn antipode(&self) -> BlochVector {
        BlochVector { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}, {:.6})", self.x, self.y, self.z)
    }
}

/// Hermitian qubit operator `e0·I + e·σ`, used for POVM elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Effect {
    pub e0: f64,
    #[serde(with = "vec3_serde")]
    pub e: Vector3<f64>,
}

impl Effect {
    pub const ZERO: Effect = Effect { e0: 0.0, e: Vector3::new(0.0, 0.0, 0.0) };
    pub const IDENTITY: Effect = Effect { e0: 1.0, e: Vector3::new(0.0, 0.0, 0.0) };

    /// Checked constructor: `0 ≤ E ≤ I`.
    pub fn new(e0: f64, e: Vector3<f64>) -> Result<Self> {
        let effect = Effect { e0, e };
        effect.validate()?;
        Ok(effect)
    }

    /// Rank-one projector `½(I + n·σ)` onto the pure state `n`.
    pub fn projector(n: &BlochVector) -> Self {
        Effect { e0: 0.5, e: n.to_vector() * 0.5 }
    }

    /// `Tr[E ρ]` for `ρ = ½(I + r·σ)`.
    pub fn expectation(&self, r: &BlochVector) -> f64 {
        self.e0 + self.e.dot(&r.to_vector())
    }

    /// Eigenvalues `(e0 − |e|, e0 + |e|)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let n = self.e.norm();
        (self.e0 - n, self.e0 + n)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.e.norm();
        if !(self.e0.is_finite() && n.is_finite()) {
            return Err(Error::Validation("effect has non-finite entries".into()));
        }
        if self.e0 < n - PSD_TOL {
            return Err(Error::Validation(format!("effect not positive: e0 = {} < |e| = {n}", self.e0)));
        }
        if 1.0 - self.e0 < n - PSD_TOL {
            return Err(Error::Validation(format!("effect exceeds identity: 1 - e0 = {} < |e| = {n}", 1.0 - self.e0)));
        }
        Ok(())
    }

    /// `I − E`.
    pub fn complement(&self) -> Effect {
        Effect { e0: 1.0 - self.e0, e: -self.e }
    }

    /// `X · self · X` for Hermitian `X = x0·I + x·σ`.
    pub(crate) fn sandwich(&self, x0: f64, x: &Vector3<f64>) -> Effect {
        let (a0, a) = (self.e0, &self.e);
        let xa = x.dot(a);
        let xx = x.norm_squared();
        Effect { e0: a0 * (x0 * x0 + xx) + 2.0 * x0 * xa, e: a * (x0 * x0 - xx) + x * (2.0 * (x0 * a0 + xa)) }
    }
}

impl std::ops::Add for Effect {
    type Output = Effect;
    fn add(self, rhs: Effect) -> Effect {
        Effect { e0: self.e0 + rhs.e0, e: self.e + rhs.e }
    }
}

impl std::ops::Mul<f64> for Effect {
    type Output = Effect;
    fn mul(self, rhs: f64) -> Effect {
        Effect { e0: self.e0 * rhs, e: self.e * rhs }
    }
}

mod vec3_serde {
    use nalgebra::Vector3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vector3<f64>, s: S) -> Result<S::Ok, S::Error> {
        [v[0], v[1], v[2]].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vector3<f64>, D::Error> {
        let a = <[f64; 3]>::deserialize(d)?;
        Ok(Vector3::new(a[0], a[1], a[2]))
    }
}
