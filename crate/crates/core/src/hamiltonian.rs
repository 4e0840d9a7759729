//! The anisotropic exchange Hamiltonian of two spins in a z-axis field, its
//! exact spectrum, and the unitary propagator `U(t) = e^{-iHt}`.
//!
//! With ħ = 1 and `S_q = σ_q/2`,
//!
//! ```text
//! H = (ω₁/2) σz⊗I + (ω₂/2) I⊗σz + 2λ (aₓ σx⊗σx + a_y σy⊗σy + a_z σz⊗σz)
//! ```
//!
//! The matrix only couples `|++⟩ ↔ |−−⟩` (the corner block) and
//! `|+−⟩ ↔ |−+⟩` (the center block), so its spectrum is obtained from two
//! closed-form 2×2 problems. Arbitrary Hermitian inputs fall back to a
//! complex Jacobi iteration.

use std::ops::Mul;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian2_eigen, jacobi_hermitian4, max_abs};
use crate::qstate::TwoQubitState;

pub const HERMITIAN_TOLERANCE: f64 = 1e-14;

/// Basis indices of the two invariant subspaces.
const CORNER: [usize; 2] = [0, 3];
const CENTER: [usize; 2] = [1, 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianParams {
    /// Larmor frequency of spin 1
    pub omega1: f64,
    /// Larmor frequency of spin 2
    pub omega2: f64,
    /// Interaction strength
    pub lambda: f64,
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl HamiltonianParams {
    pub fn new(omega1: f64, omega2: f64, lambda: f64, ax: f64, ay: f64, az: f64) -> Result<Self> {
        let p = Self {
            omega1,
            omega2,
            lambda,
            ax,
            ay,
            az,
        };
        p.validate()?;
        Ok(p)
    }

    /// Isotropic exchange `2λ S⁽¹⁾·S⁽²⁾` with no field.
    pub fn heisenberg(lambda: f64) -> Self {
        Self {
            omega1: 0.0,
            omega2: 0.0,
            lambda,
            ax: 0.25,
            ay: 0.25,
            az: 0.25,
        }
    }

    /// Two independent spins precessing in the field.
    pub fn free(omega1: f64, omega2: f64) -> Self {
        Self {
            omega1,
            omega2,
            lambda: 0.0,
            ax: 0.25,
            ay: 0.25,
            az: 0.25,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("lambda", self.lambda),
            ("ax", self.ax),
            ("ay", self.ay),
            ("az", self.az),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        Ok(())
    }

    /// Exact match of the isotropic, field-free pattern (`ω₁ = ω₂ = 0`,
    /// `aₓ = a_y = a_z`). Near misses return `None`. Otherwise returns the
    /// effective coupling `λ_eff = 4λa` such that `H = 2λ_eff S⁽¹⁾·S⁽²⁾`.
    pub fn isotropic_coupling(&self) -> Option<f64> {
        if self.omega1 == 0.0 && self.omega2 == 0.0 && self.ax == self.ay && self.ay == self.az {
            Some(4.0 * self.lambda * self.ax)
        } else {
            None
        }
    }
}

/// A 4×4 matrix equal to its conjugate transpose within
/// [`HERMITIAN_TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix4(Matrix4<Complex64>);

impl HermitianMatrix4 {
    /// Rejects the input if any pair `(i, j)`, `(j, i)` violates Hermiticity.
    pub fn new(m: Matrix4<Complex64>) -> Result<Self> {
        for i in 0..4 {
            if !m[(i, i)].re.is_finite() {
                return Err(Error::NonFinite("matrix entry"));
            }
            for j in i..4 {
                let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
                if !dev.is_finite() {
                    return Err(Error::NonFinite("matrix entry"));
                }
                if dev > HERMITIAN_TOLERANCE {
                    return Err(Error::NonHermitian {
                        row: i,
                        col: j,
                        deviation: dev,
                    });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    /// Whether every entry coupling the corner and center blocks is exactly zero.
    fn is_block_structured(&self) -> bool {
        CORNER.iter().all(|&i| {
            CENTER.iter().all(|&j| {
                self.0[(i, j)] == Complex64::new(0.0, 0.0)
                    && self.0[(j, i)] == Complex64::new(0.0, 0.0)
            })
        })
    }

    fn block(&self, idx: [usize; 2]) -> Matrix2<Complex64> {
        Matrix2::new(
            self.0[(idx[0], idx[0])],
            self.0[(idx[0], idx[1])],
            self.0[(idx[1], idx[0])],
            self.0[(idx[1], idx[1])],
        )
    }
}

pub fn build_hamiltonian(p: &HamiltonianParams) -> HermitianMatrix4 {
    let zeeman_sum = 0.5 * (p.omega1 + p.omega2);
    let zeeman_diff = 0.5 * (p.omega1 - p.omega2);
    let zz = 2.0 * p.lambda * p.az;
    let corner = 2.0 * p.lambda * (p.ax - p.ay);
    let center = 2.0 * p.lambda * (p.ax + p.ay);

    let r = |x: f64| Complex64::new(x, 0.0);
    let mut h = Matrix4::<Complex64>::zeros();
    h[(0, 0)] = r(zeeman_sum + zz);
    h[(1, 1)] = r(zeeman_diff - zz);
    h[(2, 2)] = r(-zeeman_diff - zz);
    h[(3, 3)] = r(-zeeman_sum + zz);
    h[(0, 3)] = r(corner);
    h[(3, 0)] = r(corner);
    h[(1, 2)] = r(center);
    h[(2, 1)] = r(center);
    HermitianMatrix4(h)
}

/// Eigenvalues in ascending order with orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum4 {
    eigenvalues: [f64; 4],
    eigenvectors: Matrix4<Complex64>,
}

impl Spectrum4 {
    pub fn eigenvalues(&self) -> &[f64; 4] {
        &self.eigenvalues
    }

    /// Column `k` is the eigenvector of `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> &Matrix4<Complex64> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> TwoQubitState {
        let col = self.eigenvectors.column(k);
        TwoQubitState::from_raw([col[0], col[1], col[2], col[3]])
    }

    /// `Σ_k f(E_k) |k⟩⟨k|`
    fn apply_function(&self, f: impl Fn(f64) -> Complex64) -> Matrix4<Complex64> {
        let diag = Vector4::from_iterator(self.eigenvalues.iter().map(|&e| f(e)));
        let v = &self.eigenvectors;
        v * Matrix4::from_diagonal(&diag) * v.adjoint()
    }

    pub fn reconstruct(&self) -> Matrix4<Complex64> {
        self.apply_function(|e| Complex64::new(e, 0.0))
    }

    /// `U(t) = Σ_k e^{-iE_k t} |k⟩⟨k|`
    pub fn propagator(&self, t: f64) -> Propagator4 {
        Propagator4(self.apply_function(|e| Complex64::from_polar(1.0, -e * t)))
    }
}

pub fn spectrum(h: &HermitianMatrix4) -> Spectrum4 {
    // (eigenvalue, block rank, eigenvector)
    let mut pairs: Vec<(f64, u8, Vector4<Complex64>)> = Vec::with_capacity(4);

    if h.is_block_structured() {
        for (rank, idx) in [CORNER, CENTER].into_iter().enumerate() {
            let b = h.block(idx);
            let (vals, vecs) = hermitian2_eigen(b[(0, 0)].re, b[(0, 1)], b[(1, 1)].re);
            for (val, vec) in vals.into_iter().zip(vecs) {
                let mut full = Vector4::zeros();
                full[idx[0]] = vec[0];
                full[idx[1]] = vec[1];
                pairs.push((val, rank as u8, full));
            }
        }
    } else {
        let (vals, v) = jacobi_hermitian4(h.matrix());
        for (k, val) in vals.into_iter().enumerate() {
            pairs.push((val, 0, v.column(k).into_owned()));
        }
    }

    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut eigenvectors = Matrix4::zeros();
    let mut eigenvalues = [0.0; 4];
    for (k, (val, _, vec)) in pairs.into_iter().enumerate() {
        eigenvalues[k] = val;
        eigenvectors.set_column(k, &vec);
    }
    Spectrum4 {
        eigenvalues,
        eigenvectors,
    }
}

/// A 4×4 unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator4(Matrix4<Complex64>);

impl Propagator4 {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `max |(U†U − I)_ij|`
    pub fn unitarity_defect(&self) -> f64 {
        max_abs(&(self.0.adjoint() * self.0 - Matrix4::identity()))
    }

    /// Entrywise maximum modulus of `self − other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        max_abs(&(self.0 - other.0))
    }
}

impl Mul for Propagator4 {
    type Output = Propagator4;

    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

pub fn propagator(h: &HermitianMatrix4, t: f64) -> Propagator4 {
    spectrum(h).propagator(t)
}

const ORACLE_SCALED_NORM: f64 = 0.5;
const ORACLE_TERM_CUTOFF: f64 = 1e-16;

/// `e^{-iHt}` by scaling and squaring a truncated Taylor series.
///
/// Independent of [`spectrum`]; used to cross-check [`propagator`].
pub fn propagator_oracle(h: &HermitianMatrix4, t: f64) -> Propagator4 {
    let x = h.matrix() * Complex64::new(0.0, -t);
    // infinity norm (max absolute row sum)
    let norm = (0..4)
        .map(|i| (0..4).map(|j| x[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);

    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm >= ORACLE_SCALED_NORM {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let scaled = x / Complex64::new(2f64.powi(squarings as i32), 0.0);

    let mut sum = Matrix4::<Complex64>::identity();
    let mut term = Matrix4::<Complex64>::identity();
    for k in 1..64 {
        term = term * scaled / Complex64::new(k as f64, 0.0);
        sum += term;
        if max_abs(&term) < ORACLE_TERM_CUTOFF {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    Propagator4(sum)
}

pub fn evolve(u: &Propagator4, psi: &TwoQubitState) -> TwoQubitState {
    let a = psi.amps();
    let v = u.0 * Vector4::new(a[0], a[1], a[2], a[3]);
    TwoQubitState::from_raw([v[0], v[1], v[2], v[3]])
}
