use std::fmt;

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Vector3};

use super::{BlochVector, Effect, PSD_TOL};
use crate::{Error, Result};

type C64 = Complex<f64>;

/// Unnormalized Choi matrix, `Tr J = 2` for trace-preserving maps.
pub type Choi = Matrix4<C64>;
/// A Kraus operator of a qubit channel.
pub type Kraus = Matrix2<C64>;

/// Qubit channel as an affine map of the Bloch ball, `r ↦ M·r + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitChannel {
    matrix: Matrix3<f64>,
    translation: Vector3<f64>,
    label: String,
}

impl QubitChannel {
    /// Raw affine map with no CPTP check. Use [`QubitChannel::checked`] for
    /// untrusted input.
    pub fn from_affine(matrix: Matrix3<f64>, translation: Vector3<f64>, label: impl Into<String>) -> Self {
        QubitChannel { matrix, translation, label: label.into() }
    }

    /// Affine map that must pass [`QubitChannel::is_cptp`] at [`PSD_TOL`].
    pub fn checked(matrix: Matrix3<f64>, translation: Vector3<f64>, label: impl Into<String>) -> Result<Self> {
        let channel = Self::from_affine(matrix, translation, label);
        if !channel.is_cptp(PSD_TOL) {
            return Err(Error::Parameter(format!(
                "{} is not completely positive (min Choi eigenvalue {:.3e})",
                channel.label,
                channel.choi_min_eigenvalue()
            )));
        }
        Ok(channel)
    }

    pub fn identity() -> Self {
        Self::from_affine(Matrix3::identity(), Vector3::zeros(), "identity")
    }

    /// `ρ ↦ p·I/2 + (1 − p)·ρ`: isotropic shrink of the Bloch ball.
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("depolarizing p = {p} not in [0, 1]")));
        }
        Ok(Self::from_affine(Matrix3::identity() * (1.0 - p), Vector3::zeros(), format!("depolarizing(p={p})")))
    }

    /// The splaying channel: `M = diag(1/3, √3/3, 0)`, `t = (1/3, 0, 0)`.
    /// It flattens the Bloch sphere onto a displaced ellipse in the xy-plane.
    pub fn splaying() -> Self {
        let third = 1.0 / 3.0;
        Self::from_affine(
            Matrix3::from_diagonal(&Vector3::new(third, 3f64.sqrt() * third, 0.0)),
            Vector3::new(third, 0.0, 0.0),
            "splaying",
        )
    }

    /// King–Nathanson–Ruskai channel: `M = diag(s, s, μ)`, `t = (0, 0, 1 − μ)`,
    /// valid for `0 ≤ μ ≤ 1` and `μ ≤ s ≤ √μ`.
    pub fn knr(mu: f64, s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::Parameter(format!("knr mu = {mu} not in [0, 1]")));
        }
        if !(s >= mu && s <= mu.sqrt()) {
            return Err(Error::Parameter(format!("knr requires mu <= s <= sqrt(mu), got mu = {mu}, s = {s}")));
        }
        Ok(Self::from_affine(
            Matrix3::from_diagonal(&Vector3::new(s, s, mu)),
            Vector3::new(0.0, 0.0, 1.0 - mu),
            format!("knr(mu={mu},s={s})"),
        ))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_unital(&self) -> bool {
        self.translation.norm() == 0.0
    }

    pub fn apply(&self, state: &BlochVector) -> BlochVector {
        BlochVector::from_vector(self.matrix * state.to_vector() + self.translation)
    }

    /// Heisenberg-picture dual: `N†(E) = (e0 + e·t, Mᵀ·e)`, so that
    /// `Tr[E·N(ρ)] = Tr[N†(E)·ρ]`.
    pub fn adjoint_apply(&self, effect: &Effect) -> Effect {
        Effect { e0: effect.e0 + effect.e.dot(&self.translation), e: self.matrix.transpose() * effect.e }
    }

    /// Largest distance between two output states: `2·σ_max(M)`. The image of
    /// the ball is an ellipsoid whose semi-axes are the singular values of `M`.
    pub fn image_diameter(&self) -> f64 {
        let sv = self.matrix.singular_values();
        2.0 * sv.iter().cloned().fold(0.0, f64::max)
    }

    /// Action on an arbitrary (complex) operator given by Pauli coefficients
    /// `x0·I + x·σ`, by linear extension of the affine Bloch map.
    fn apply_operator(&self, x0: C64, x: &Vector3<C64>) -> Matrix2<C64> {
        let m = self.matrix.map(C64::from);
        let t = self.translation.map(C64::from);
        let v = t * x0 + m * x;
        pauli_matrix(x0, &v)
    }

    /// `J = Σ_ij |i⟩⟨j| ⊗ N(|i⟩⟨j|)`, rows indexed `2·i + k` (input `i`,
    /// output `k`).
    pub fn choi(&self) -> Choi {
        let h = C64::new(0.5, 0.0);
        let z = C64::new(0.0, 0.0);
        let ih = C64::new(0.0, 0.5);
        // Pauli coefficients of the matrix units |i><j|.
        let units: [[(C64, Vector3<C64>); 2]; 2] = [
            [(h, Vector3::new(z, z, h)), (z, Vector3::new(h, ih, z))],
            [(z, Vector3::new(h, -ih, z)), (h, Vector3::new(z, z, -h))],
        ];
        let mut j = Choi::zeros();
        for (i, row) in units.iter().enumerate() {
            for (jj, (x0, x)) in row.iter().enumerate() {
                let block = self.apply_operator(*x0, x);
                for k in 0..2 {
                    for l in 0..2 {
                        j[(2 * i + k, 2 * jj + l)] = block[(k, l)];
                    }
                }
            }
        }
        j
    }

    /// Eigenvalues of the Choi matrix in ascending order.
    pub fn choi_eigenvalues(&self) -> [f64; 4] {
        let eig = self.choi().symmetric_eigen();
        let mut ev = [0.0; 4];
        for (slot, v) in ev.iter_mut().zip(eig.eigenvalues.iter()) {
            *slot = *v;
        }
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    fn choi_min_eigenvalue(&self) -> f64 {
        self.choi_eigenvalues()[0]
    }

    /// Completely positive (Choi PSD within `tol`) and trace preserving
    /// (output-side partial trace of the Choi matrix equals `I₂` within `tol`).
    pub fn is_cptp(&self, tol: f64) -> bool {
        let j = self.choi();
        if (0..4).any(|r| !j[(r, r)].re.is_finite()) {
            return false;
        }
        for i in 0..2 {
            for jj in 0..2 {
                let tr = j[(2 * i, 2 * jj)] + j[(2 * i + 1, 2 * jj + 1)];
                let want = if i == jj { 1.0 } else { 0.0 };
                if (tr - C64::new(want, 0.0)).norm() > tol {
                    return false;
                }
            }
        }
        self.choi_min_eigenvalue() >= -tol
    }

    /// Kraus operators read off the Choi eigendecomposition: each eigenpair
    /// `(λ, v)` with `λ > 1e-12` gives `K[k][i] = √λ·v[2i + k]`.
    pub fn kraus(&self) -> Vec<Kraus> {
        let eig = self.choi().symmetric_eigen();
        let mut ops = Vec::new();
        for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda <= 1e-12 {
                continue;
            }
            let v = eig.eigenvectors.column(idx);
            let scale = C64::from(lambda.sqrt());
            let mut k = Kraus::zeros();
            for i in 0..2 {
                for out in 0..2 {
                    k[(out, i)] = v[2 * i + out] * scale;
                }
            }
            ops.push(k);
        }
        ops
    }
}

impl fmt::Display for QubitChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// `x0·I + x·σ` as a 2×2 matrix.
pub(crate) fn pauli_matrix(x0: C64, x: &Vector3<C64>) -> Matrix2<C64> {
    let i = C64::new(0.0, 1.0);
    Matrix2::new(x0 + x[2], x[0] - i * x[1], x[0] + i * x[1], x0 - x[2])
}
