//! Schmidt decomposition and von Neumann entanglement entropy.
//!
//! Every two-qubit pure state can be written as
//!
//! ```text
//! |Ψ⟩ = e^{-iβ/2} cos(α/2) |n⟩₁|m⟩₂ + e^{+iβ/2} sin(α/2) |−n⟩₁|−m⟩₂
//! ```
//!
//! where `|−n⟩` is the antipodal state of [`BlochAngles::antipode`]. The
//! Schmidt angle `α` alone fixes the entanglement.
//!
//! Two conventions for `α` live here. [`SchmidtForm`] is canonical: the larger
//! coefficient comes first, so `α ∈ [0, π/2]`. [`FixedBasisSchmidt`] reads
//! `α, β` directly off the `|+−⟩, |−+⟩` amplitudes and lets `α` run over
//! `[0, π]`, which is what a trajectory through that subspace needs when the
//! weights of the two basis states cross.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitian2_eigen_matrix;
use crate::qstate::{
    half_angle_sin_cos, tensor, wrap_pi, BlochAngles, SingleQubitState, TwoQubitState,
    NORM_TOLERANCE,
};

/// Largest `|amps[0]|² + |amps[3]|²` accepted by [`schmidt_fixed_basis`].
pub const LEAKAGE_BOUND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// One-qubit reduced density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensity2(Matrix2<Complex64>);

impl ReducedDensity2 {
    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0[(0, 0)].re + self.0[(1, 1)].re
    }

    /// Eigenvalues in descending order, clamped to `[0, 1]`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (large, _) = self.largest_eigenpair();
        // det/large keeps the small eigenvalue accurate near product states
        let det = (self.0[(0, 0)].re * self.0[(1, 1)].re - self.0[(0, 1)].norm_sqr()).max(0.0);
        let small = if large > 0.0 { det / large } else { 0.0 };
        [large.clamp(0.0, 1.0), small.clamp(0.0, 1.0)]
    }

    fn largest_eigenpair(&self) -> (f64, [Complex64; 2]) {
        let (vals, vecs) = hermitian2_eigen_matrix(&self.0);
        (vals[1], vecs[1])
    }
}

pub fn reduced_density(psi: &TwoQubitState, subsystem: Subsystem) -> ReducedDensity2 {
    let c = psi.coefficient_matrix();
    let m = Matrix2::new(c[0][0], c[0][1], c[1][0], c[1][1]);
    let rho = match subsystem {
        // ρ₁ = C C†
        Subsystem::First => m * m.adjoint(),
        // ρ₂ = Cᵀ C*
        Subsystem::Second => m.transpose() * m.conjugate(),
    };
    // enforce exact Hermiticity
    let rho = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    ReducedDensity2(rho)
}

/// Canonical Schmidt data with `cos(α/2) ≥ sin(α/2)`.
///
/// For product states (`α = 0`) `β` has no meaning and is reported as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtForm {
    pub alpha: f64,
    pub beta: f64,
    pub n: BlochAngles,
    pub m: BlochAngles,
}

impl SchmidtForm {
    /// Schmidt coefficients `(cos(α/2), sin(α/2))`.
    pub fn coefficients(&self) -> [f64; 2] {
        let (s, c) = (0.5 * self.alpha).sin_cos();
        [c, s]
    }

    pub fn entropy(&self) -> f64 {
        entropy_from_alpha(self.alpha)
    }
}

fn ensure_normalized(psi: &TwoQubitState) -> Result<()> {
    let norm_sq = psi.norm().powi(2);
    if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized {
            norm_sq,
            tolerance: NORM_TOLERANCE,
        });
    }
    Ok(())
}

/// Decomposes `psi` into canonical Schmidt form.
///
/// `|n⟩` is the dominant eigenvector of the spin-1 reduced density matrix and
/// `|m⟩` the matching partner on spin 2. Both are stored as Bloch angles, so
/// their phases are fixed by the Bloch parameterization; the coefficients'
/// relative phase is what remains in `β`. At `α = π/2` the eigenbasis is
/// degenerate and whichever pair the 2×2 solver returns is used.
pub fn schmidt_decompose(psi: &TwoQubitState) -> Result<SchmidtForm> {
    ensure_normalized(psi)?;
    let rho = reduced_density(psi, Subsystem::First);
    let (_, u0) = rho.largest_eigenpair();

    let n = SingleQubitState::new(u0[0], u0[1])?.bloch_angles();

    // partner on spin 2: Σ_i conj(u0_i) C_ij
    let c = psi.coefficient_matrix();
    let u = SingleQubitState::from_bloch(&n);
    let w = [
        u.up().conj() * c[0][0] + u.down().conj() * c[1][0],
        u.up().conj() * c[0][1] + u.down().conj() * c[1][1],
    ];
    let w_norm = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    let m = SingleQubitState::new(w[0] / w_norm, w[1] / w_norm)?.bloch_angles();

    let first = tensor(
        &SingleQubitState::from_bloch(&n),
        &SingleQubitState::from_bloch(&m),
    );
    let second = tensor(
        &SingleQubitState::from_bloch(&n.antipode()),
        &SingleQubitState::from_bloch(&m.antipode()),
    );
    let c0 = first.inner(psi);
    let c1 = second.inner(psi);

    let alpha = (2.0 * c1.norm().atan2(c0.norm())).clamp(0.0, FRAC_PI_2);
    let beta = if c1.norm() == 0.0 || c0.norm() == 0.0 {
        0.0
    } else {
        wrap_pi(c1.arg() - c0.arg())
    };
    Ok(SchmidtForm { alpha, beta, n, m })
}

/// `e^{-iβ/2} cos(α/2) |n⟩|m⟩ + e^{+iβ/2} sin(α/2) |−n⟩|−m⟩`
pub fn recompose(f: &SchmidtForm) -> TwoQubitState {
    compose_branches(f.alpha, f.beta, &f.n, &f.m)
}

pub(crate) fn compose_branches(
    alpha: f64,
    beta: f64,
    n: &BlochAngles,
    m: &BlochAngles,
) -> TwoQubitState {
    combine_branches(
        alpha,
        beta,
        &tensor(
            &SingleQubitState::from_bloch(n),
            &SingleQubitState::from_bloch(m),
        ),
        &tensor(
            &SingleQubitState::from_bloch(&n.antipode()),
            &SingleQubitState::from_bloch(&m.antipode()),
        ),
    )
}

pub(crate) fn combine_branches(
    alpha: f64,
    beta: f64,
    first: &TwoQubitState,
    second: &TwoQubitState,
) -> TwoQubitState {
    let (s, c) = (0.5 * alpha).sin_cos();
    let w0 = Complex64::from_polar(c, -0.5 * beta);
    let w1 = Complex64::from_polar(s, 0.5 * beta);
    let a = first.amps();
    let b = second.amps();
    TwoQubitState::from_raw(std::array::from_fn(|i| w0 * a[i] + w1 * b[i]))
}

/// `−Σ p log₂ p` over a two-outcome distribution with `0 log 0 = 0`,
/// clamped to `[0, 1]` to absorb rounding.
fn entropy_bits(p: f64, q: f64) -> f64 {
    let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    (h(p) + h(q)).clamp(0.0, 1.0)
}

/// Entanglement entropy in bits from the Schmidt angle.
pub fn entropy_from_alpha(alpha: f64) -> f64 {
    let (s, c) = half_angle_sin_cos(alpha);
    entropy_bits(c * c, s * s)
}

/// Von Neumann entropy (bits) of the spin-1 reduced state.
pub fn entanglement_entropy(psi: &TwoQubitState) -> f64 {
    entanglement_entropy_of(psi, Subsystem::First)
}

pub fn entanglement_entropy_of(psi: &TwoQubitState, subsystem: Subsystem) -> f64 {
    let [p, q] = reduced_density(psi, subsystem).eigenvalues();
    entropy_bits(p, q)
}

/// `α ∈ [0, π]`, `β ∈ (−π, π]` read from the `|+−⟩, |−+⟩` amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedBasisSchmidt {
    pub alpha: f64,
    pub beta: f64,
}

impl FixedBasisSchmidt {
    /// From amplitudes `(u, v)` of `|+−⟩, |−+⟩`; the global phase is dropped.
    pub fn from_amplitudes(u: Complex64, v: Complex64) -> Self {
        let alpha = 2.0 * v.norm().atan2(u.norm());
        let beta = if u.norm() == 0.0 || v.norm() == 0.0 {
            0.0
        } else {
            wrap_pi(v.arg() - u.arg())
        };
        Self {
            alpha: alpha.clamp(0.0, PI),
            beta,
        }
    }

    pub fn entropy(&self) -> f64 {
        entropy_from_alpha(self.alpha)
    }

    /// `e^{-iβ/2} cos(α/2) |+−⟩ + e^{+iβ/2} sin(α/2) |−+⟩`
    pub fn to_state(&self) -> TwoQubitState {
        let (s, c) = (0.5 * self.alpha).sin_cos();
        let zero = Complex64::new(0.0, 0.0);
        TwoQubitState::from_raw([
            zero,
            Complex64::from_polar(c, -0.5 * self.beta),
            Complex64::from_polar(s, 0.5 * self.beta),
            zero,
        ])
    }
}

/// Fixed-basis Schmidt angles for states in `span{|+−⟩, |−+⟩}`.
pub fn schmidt_fixed_basis(psi: &TwoQubitState) -> Result<FixedBasisSchmidt> {
    let a = psi.amps();
    let (amp0_sq, amp3_sq) = (a[0].norm_sqr(), a[3].norm_sqr());
    if amp0_sq + amp3_sq >= LEAKAGE_BOUND {
        return Err(Error::Leakage { amp0_sq, amp3_sq });
    }
    Ok(FixedBasisSchmidt::from_amplitudes(a[1], a[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::fidelity;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn counterexample_state(a: f64) -> TwoQubitState {
        let (ca, sa) = ((a / 2.0).cos(), (a / 2.0).sin());
        TwoQubitState::from_real([
            0.0,
            (ca + sa) * FRAC_1_SQRT_2,
            (ca - sa) * FRAC_1_SQRT_2,
            0.0,
        ])
        .unwrap()
    }

    // Exact single-qubit unitary from ZYZ Euler angles.
    fn local_unitary(x: [f64; 3]) -> [[Complex64; 2]; 2] {
        let rz = |t: f64| {
            [
                [Complex64::from_polar(1.0, -t / 2.0), c(0.0, 0.0)],
                [c(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)],
            ]
        };
        let ry = |t: f64| {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        };
        let mul = |a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]| {
            let mut o = [[c(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            o
        };
        mul(mul(rz(x[0]), ry(x[1])), rz(x[2]))
    }

    fn apply_local(
        psi: &TwoQubitState,
        u1: &[[Complex64; 2]; 2],
        u2: &[[Complex64; 2]; 2],
    ) -> TwoQubitState {
        let a = psi.amps();
        let mut out = [c(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[2 * i + j] += u1[i][k] * u2[j][l] * a[2 * k + l];
                    }
                }
            }
        }
        TwoQubitState::from_raw(out)
    }

    #[test]
    fn reduced_density_examples() {
        let rho = reduced_density(&TwoQubitState::basis(1), Subsystem::First);
        assert_eq!(
            *rho.matrix(),
            Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0))
        );

        let rho = reduced_density(&TwoQubitState::singlet(), Subsystem::Second);
        let half = Matrix2::identity() * c(0.5, 0.0);
        assert!((rho.matrix() - half).norm() < 1e-15);

        let a = 0.7;
        let rho = reduced_density(&counterexample_state(a), Subsystem::First);
        let half_alpha =
            (((a / 2.0).cos() - (a / 2.0).sin()) / ((a / 2.0).cos() + (a / 2.0).sin())).atan();
        let [p, q] = rho.eigenvalues();
        assert_abs_diff_eq!(p, half_alpha.cos().powi(2), epsilon = 1e-13);
        assert_abs_diff_eq!(q, half_alpha.sin().powi(2), epsilon = 1e-13);
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn decompose_examples() {
        let f = schmidt_decompose(&TwoQubitState::basis(1)).unwrap();
        assert_eq!(f.alpha, 0.0);
        assert_eq!(f.beta, 0.0);
        assert_eq!(f.n, BlochAngles::north());
        assert_eq!(f.m.theta(), PI);
        assert_eq!(entropy_from_alpha(f.alpha), 0.0);

        let f = schmidt_decompose(&TwoQubitState::singlet()).unwrap();
        assert_abs_diff_eq!(f.alpha, FRAC_PI_2, epsilon = 1e-12);

        let f = schmidt_decompose(&counterexample_state(0.0)).unwrap();
        assert_abs_diff_eq!(f.alpha, FRAC_PI_2, epsilon = 1e-12);

        assert!(schmidt_decompose(&TwoQubitState::from_raw([c(1.0, 0.0); 4])).is_err());
    }

    #[test]
    fn recompose_examples() {
        let n = BlochAngles::new(1.2, 0.3).unwrap();
        let m = BlochAngles::new(2.2, 4.1).unwrap();
        let f = SchmidtForm {
            alpha: 0.0,
            beta: 0.7,
            n,
            m,
        };
        let prod = tensor(
            &SingleQubitState::from_bloch(&n),
            &SingleQubitState::from_bloch(&m),
        );
        let rec = recompose(&f);
        for (x, y) in rec.amps().iter().zip(prod.amps()) {
            assert!((x * Complex64::from_polar(1.0, 0.35) - y).norm() < 1e-15);
        }

        // |−z⟩ = antipode of north = (π, π) carries a factor i, so the second
        // branch of n = m = north is −|−−⟩ and β = π gives the symmetric Bell state
        let north = BlochAngles::north();
        let plus = TwoQubitState::from_real([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
        let minus = TwoQubitState::from_real([FRAC_1_SQRT_2, 0.0, 0.0, -FRAC_1_SQRT_2]).unwrap();
        let bell = |beta| {
            recompose(&SchmidtForm {
                alpha: FRAC_PI_2,
                beta,
                n: north,
                m: north,
            })
        };
        for (x, y) in bell(0.0).amps().iter().zip(minus.amps()) {
            assert!((x - y).norm() < 1e-15);
        }
        assert_abs_diff_eq!(fidelity(&bell(PI), &plus), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_from_alpha(0.0), 0.0);
        assert_abs_diff_eq!(entropy_from_alpha(FRAC_PI_2), 1.0, epsilon = 1e-15);
        // binary entropy of 3/4
        assert_abs_diff_eq!(
            entropy_from_alpha(FRAC_PI_3),
            0.811_278_124_459_132_9,
            epsilon = 1e-6
        );
        assert_abs_diff_eq!(
            entropy_from_alpha(FRAC_PI_3),
            0.811_278_124_459_132_9,
            epsilon = 1e-14
        );
        assert_eq!(entropy_from_alpha(PI), 0.0);
        assert_eq!(
            entropy_from_alpha(FRAC_PI_2 - 0.3),
            entropy_from_alpha(FRAC_PI_2 + 0.3)
        );
        assert_abs_diff_eq!(
            entropy_bits(0.75, 0.25),
            0.811_278_124_459_132_9,
            epsilon = 1e-15
        );
    }

    #[test]
    fn entanglement_entropy_examples() {
        assert_eq!(entanglement_entropy(&TwoQubitState::basis(2)), 0.0);
        assert_abs_diff_eq!(
            entanglement_entropy(&TwoQubitState::singlet()),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            entanglement_entropy(&TwoQubitState::triplet_zero()),
            1.0,
            epsilon = 1e-15
        );
        // binary entropy of (1 + sin(π/4))/2
        let e = entanglement_entropy(&counterexample_state(FRAC_PI_4));
        assert_abs_diff_eq!(e, 0.600_876_036_692_856, epsilon = 1e-4);
        assert_abs_diff_eq!(e, 0.600_876_036_692_856, epsilon = 1e-13);
    }

    #[test]
    fn fixed_basis_examples() {
        let a = 0.9;
        let f = schmidt_fixed_basis(&counterexample_state(a)).unwrap();
        assert_abs_diff_eq!(f.alpha.cos(), a.sin(), epsilon = 1e-14);
        assert_eq!(f.beta, 0.0);

        let psi = TwoQubitState::new([
            c(0.0, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, FRAC_1_SQRT_2),
            c(0.0, 0.0),
        ])
        .unwrap();
        let f = schmidt_fixed_basis(&psi).unwrap();
        assert_abs_diff_eq!(f.alpha, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(f.beta, FRAC_PI_2, epsilon = 1e-15);

        let bell = TwoQubitState::from_real([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).unwrap();
        assert!(matches!(
            schmidt_fixed_basis(&bell),
            Err(Error::Leakage { .. })
        ));
    }

    #[test]
    fn fixed_basis_roundtrip() {
        let f = FixedBasisSchmidt {
            alpha: 2.5,
            beta: -1.1,
        };
        let back = schmidt_fixed_basis(&f.to_state()).unwrap();
        assert_abs_diff_eq!(back.alpha, 2.5, epsilon = 1e-14);
        assert_abs_diff_eq!(back.beta, -1.1, epsilon = 1e-14);
    }

    fn random_state() -> impl Strategy<Value = TwoQubitState> {
        prop::array::uniform8(-1.0..1.0f64)
            .prop_filter("nonzero", |x| x.iter().map(|v| v * v).sum::<f64>() > 1e-3)
            .prop_map(|x| {
                let amps = [c(x[0], x[1]), c(x[2], x[3]), c(x[4], x[5]), c(x[6], x[7])];
                let n: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                TwoQubitState::new(amps.map(|z| z / n)).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn roundtrip_fidelity(psi in random_state()) {
            let f = schmidt_decompose(&psi).unwrap();
            prop_assert!(fidelity(&recompose(&f), &psi) >= 1.0 - 1e-12);
            let [c0, c1] = f.coefficients();
            prop_assert!(c0 >= c1 && c1 >= 0.0);
            prop_assert!((c0 * c0 + c1 * c1 - 1.0).abs() < 1e-12);
        }

        #[test]
        fn entropy_routes_agree(psi in random_state()) {
            let e1 = entanglement_entropy_of(&psi, Subsystem::First);
            let e2 = entanglement_entropy_of(&psi, Subsystem::Second);
            prop_assert!((e1 - e2).abs() < 1e-10);
            let f = schmidt_decompose(&psi).unwrap();
            prop_assert!((e1 - entropy_from_alpha(f.alpha)).abs() < 1e-10);
        }

        #[test]
        fn entropy_local_unitary_invariant(
            psi in random_state(),
            x in prop::array::uniform3(-7.0..7.0f64),
            y in prop::array::uniform3(-7.0..7.0f64),
        ) {
            let moved = apply_local(&psi, &local_unitary(x), &local_unitary(y));
            prop_assert!((entanglement_entropy(&moved) - entanglement_entropy(&psi)).abs() < 1e-10);
        }

        #[test]
        fn entropy_from_alpha_symmetric(alpha in 0.0..PI) {
            // exact up to the rounding of π − α itself
            prop_assert!((entropy_from_alpha(alpha) - entropy_from_alpha(PI - alpha)).abs() < 1e-15);
        }

        #[test]
        fn reduced_density_is_a_state(psi in random_state()) {
            for sub in [Subsystem::First, Subsystem::Second] {
                let rho = reduced_density(&psi, sub);
                let m = rho.matrix();
                prop_assert!((m - m.adjoint()).norm() < 1e-13);
                prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
                let [p, q] = rho.eigenvalues();
                prop_assert!(p >= q && q >= 0.0 && p <= 1.0);
            }
        }

        #[test]
        fn fixed_basis_entropy_matches(u in prop::array::uniform4(-1.0..1.0f64)) {
            let n = (u.iter().map(|x| x * x).sum::<f64>()).sqrt();
            prop_assume!(n > 1e-3);
            let psi = TwoQubitState::new([c(0.0, 0.0), c(u[0] / n, u[1] / n), c(u[2] / n, u[3] / n), c(0.0, 0.0)]).unwrap();
            let f = schmidt_fixed_basis(&psi).unwrap();
            prop_assert!((entropy_from_alpha(f.alpha) - entanglement_entropy(&psi)).abs() < 1e-10);
            prop_assert!(fidelity(&f.to_state(), &psi) >= 1.0 - 1e-12);
        }
    }
}
