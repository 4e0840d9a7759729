//! Single- and two-qubit pure states.
//!
//! A single spin pointing along the Bloch direction `(θ, φ)` is
//!
//! ```text
//! |n⟩ = e^{-iφ/2} cos(θ/2) |+z⟩ + e^{+iφ/2} sin(θ/2) |−z⟩
//! ```
//!
//! and two-qubit states carry four amplitudes in the order
//! `|+z,+z⟩, |+z,−z⟩, |−z,+z⟩, |−z,−z⟩`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Norm tolerance for states handed to library operations.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Norm tolerance applied when loading a state from text; inputs within it
/// are renormalized.
pub const LOAD_NORM_TOLERANCE: f64 = 1e-6;

fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(name))
    }
}

/// Wraps an angle into `[0, 2π)`.
pub(crate) fn wrap_2pi(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Wraps an angle into `(−π, π]`.
pub(crate) fn wrap_pi(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Polar angle `theta ∈ [0, π]` and azimuth `phi ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    /// Rejects `theta` outside `[0, π]`; `phi` is wrapped into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        ensure_finite("theta", theta)?;
        ensure_finite("phi", phi)?;
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                range: "[0, π]",
            });
        }
        Ok(Self {
            theta,
            phi: wrap_2pi(phi),
        })
    }

    pub const fn north() -> Self {
        Self {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub const fn south() -> Self {
        Self {
            theta: PI,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The diametrically opposite direction `(π − θ, φ + π)`.
    pub fn antipode(&self) -> Self {
        Self {
            theta: PI - self.theta,
            phi: wrap_2pi(self.phi + PI),
        }
    }
}

pub fn antipode(angles: &BlochAngles) -> BlochAngles {
    angles.antipode()
}

/// A normalized single-qubit state `up |+z⟩ + down |−z⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitState {
    up: Amplitude,
    down: Amplitude,
}

impl SingleQubitState {
    pub fn new(up: Amplitude, down: Amplitude) -> Result<Self> {
        ensure_finite("amplitude", up.re + up.im + down.re + down.im)?;
        let norm_sq = up.norm_sqr() + down.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm_sq,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(Self { up, down })
    }

    pub fn from_bloch(angles: &BlochAngles) -> Self {
        let (s, c) = half_angle_sin_cos(angles.theta);
        Self {
            up: Complex64::from_polar(c, -0.5 * angles.phi),
            down: Complex64::from_polar(s, 0.5 * angles.phi),
        }
    }

    pub fn up(&self) -> Amplitude {
        self.up
    }

    pub fn down(&self) -> Amplitude {
        self.down
    }

    pub fn amplitudes(&self) -> [Amplitude; 2] {
        [self.up, self.down]
    }

    /// Bloch angles of the ray. At the poles the azimuth is undefined and
    /// reported as 0.
    pub fn bloch_angles(&self) -> BlochAngles {
        let theta = 2.0 * self.down.norm().atan2(self.up.norm());
        let phi = if self.up.norm() == 0.0 || self.down.norm() == 0.0 {
            0.0
        } else {
            self.down.arg() - self.up.arg()
        };
        BlochAngles {
            theta: theta.clamp(0.0, PI),
            phi: wrap_2pi(phi),
        }
    }

    /// Larmor precession about z for a time `t`: `φ → φ + ωt` without wrapping.
    pub fn precess(&self, omega: f64, t: f64) -> Self {
        let half = 0.5 * omega * t;
        Self {
            up: self.up * Complex64::from_polar(1.0, -half),
            down: self.down * Complex64::from_polar(1.0, half),
        }
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Amplitude {
        self.up.conj() * other.up + self.down.conj() * other.down
    }
}

/// `(sin(θ/2), cos(θ/2))`, evaluated from whichever pole is nearer so both
/// poles give exact zeros.
pub(crate) fn half_angle_sin_cos(theta: f64) -> (f64, f64) {
    if theta <= FRAC_PI_2 {
        (0.5 * theta).sin_cos()
    } else {
        let (c, s) = (0.5 * (PI - theta)).sin_cos();
        (s, c)
    }
}

/// `e^{-iφ/2} cos(θ/2) |+z⟩ + e^{+iφ/2} sin(θ/2) |−z⟩`
pub fn single_qubit_state(angles: &BlochAngles) -> SingleQubitState {
    SingleQubitState::from_bloch(angles)
}

/// Kronecker product of two (not necessarily normalized) qubit vectors.
pub fn kron2(a: &[Amplitude; 2], b: &[Amplitude; 2]) -> [Amplitude; 4] {
    [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
}

pub fn tensor(s1: &SingleQubitState, s2: &SingleQubitState) -> TwoQubitState {
    TwoQubitState {
        amps: kron2(&s1.amplitudes(), &s2.amplitudes()),
    }
}

/// A normalized pure state of two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amps: [Amplitude; 4],
}

impl TwoQubitState {
    pub fn new(amps: [Amplitude; 4]) -> Result<Self> {
        Self::with_tolerance(amps, NORM_TOLERANCE, false)
    }

    /// Accepts amplitudes within `tolerance` of unit norm and rescales them.
    pub fn normalized(amps: [Amplitude; 4], tolerance: f64) -> Result<Self> {
        Self::with_tolerance(amps, tolerance, true)
    }

    fn with_tolerance(amps: [Amplitude; 4], tolerance: f64, rescale: bool) -> Result<Self> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("amplitude"));
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tolerance {
            return Err(Error::NotNormalized { norm_sq, tolerance });
        }
        let amps = if rescale {
            let n = norm_sq.sqrt();
            amps.map(|z| z / n)
        } else {
            amps
        };
        Ok(Self { amps })
    }

    /// Builds a state from amplitudes known to be unit norm up to rounding.
    pub(crate) fn from_raw(amps: [Amplitude; 4]) -> Self {
        Self { amps }
    }

    pub fn from_real(amps: [f64; 4]) -> Result<Self> {
        Self::new(amps.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn basis(index: usize) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// `(|+−⟩ − |−+⟩)/√2`
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_raw([0.0, h, -h, 0.0].map(|x| Complex64::new(x, 0.0)))
    }

    /// `(|+−⟩ + |−+⟩)/√2`
    pub fn triplet_zero() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_raw([0.0, h, h, 0.0].map(|x| Complex64::new(x, 0.0)))
    }

    pub fn amps(&self) -> &[Amplitude; 4] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Amplitude {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn with_global_phase(&self, gamma: f64) -> Self {
        let p = Complex64::from_polar(1.0, gamma);
        Self {
            amps: self.amps.map(|z| z * p),
        }
    }

    /// The amplitudes as the 2×2 coefficient matrix `c[i][j]` of `|i⟩₁|j⟩₂`.
    pub fn coefficient_matrix(&self) -> [[Amplitude; 2]; 2] {
        [[self.amps[0], self.amps[1]], [self.amps[2], self.amps[3]]]
    }

    /// Parses the four-line `re im` text format. Lines starting with `#` and
    /// blank lines are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut amps = Vec::with_capacity(4);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line_no = idx + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::StateFormat {
                    line: line_no,
                    message: format!("expected two numbers \"re im\", found {}", fields.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::StateFormat {
                    line: line_no,
                    message: format!("malformed number {s:?}: {e}"),
                })
            };
            if amps.len() == 4 {
                return Err(Error::StateFormat {
                    line: line_no,
                    message: "more than four amplitude lines".into(),
                });
            }
            amps.push(Complex64::new(parse(fields[0])?, parse(fields[1])?));
        }
        let amps: [Amplitude; 4] = amps.try_into().map_err(|v: Vec<_>| Error::StateFormat {
            line: text.lines().count(),
            message: format!("expected four amplitude lines, found {}", v.len()),
        })?;
        Self::normalized(amps, LOAD_NORM_TOLERANCE)
    }

    /// Writes the text format with full double precision.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# two-qubit state: re im per line, basis ++ +- -+ --\n");
        for z in &self.amps {
            writeln!(out, "{:.16e} {:.16e}", z.re, z.im).unwrap();
        }
        out
    }
}

/// Phase-insensitive overlap `|⟨psi|chi⟩|`, clamped to `[0, 1]`.
pub fn fidelity(psi: &TwoQubitState, chi: &TwoQubitState) -> f64 {
    psi.inner(chi).norm().min(1.0)
}
