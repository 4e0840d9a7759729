//! The product-precession ansatz and its comparison with exact evolution.
//!
//! The ansatz keeps the Schmidt angle and phase of the initial state fixed
//! and lets each branch Larmor-precess independently:
//!
//! ```text
//! |Ψ(t)⟩ = e^{-iβ/2} cos(α/2) |n(t)⟩|m(t)⟩ + e^{+iβ/2} sin(α/2) |−n(t)⟩|−m(t)⟩
//! ```
//!
//! It is exact when the spins do not interact and wrong as soon as they do,
//! because interaction changes the Schmidt angle.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use crate::dynamics::{fmt_float, simulate_trajectory, TimeGrid};
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianParams;
use crate::qstate::{tensor, wrap_pi, BlochAngles, SingleQubitState, TwoQubitState};
use crate::schmidt::combine_branches;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Schmidt data of the shared initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzParams {
    alpha: f64,
    beta: f64,
    n0: BlochAngles,
    m0: BlochAngles,
}

impl AnsatzParams {
    /// `alpha` must lie in `[0, π]`; `beta` is wrapped into `(−π, π]`.
    pub fn new(alpha: f64, beta: f64, n0: BlochAngles, m0: BlochAngles) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite("alpha"));
        }
        if !beta.is_finite() {
            return Err(Error::NonFinite("beta"));
        }
        if !(0.0..=PI).contains(&alpha) {
            return Err(Error::OutOfRange {
                name: "alpha",
                value: alpha,
                range: "[0, π]",
            });
        }
        Ok(Self {
            alpha,
            beta: wrap_pi(beta),
            n0,
            m0,
        })
    }

    /// Parameters whose initial state is the counterexample state for `a`:
    /// `n₀ = +z`, `m₀ = −z`, `α = |π/2 − a|`, `β ∈ {0, π}`.
    pub fn for_counterexample(a: f64) -> Result<Self> {
        let alpha = (std::f64::consts::FRAC_PI_2 - a).abs();
        let beta = if a > std::f64::consts::FRAC_PI_2 {
            PI
        } else {
            0.0
        };
        if !(0.0..=PI).contains(&a) {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                range: "[0, π]",
            });
        }
        Self::new(alpha, beta, BlochAngles::north(), BlochAngles::south())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n0(&self) -> &BlochAngles {
        &self.n0
    }

    pub fn m0(&self) -> &BlochAngles {
        &self.m0
    }

    pub fn initial_state(&self) -> TwoQubitState {
        gw_ansatz_state(self, 0.0, 0.0, 0.0)
    }
}

/// The ansatz state at time `t`.
///
/// Each of `|±n⟩, |±m⟩` is built once at `t = 0` (antipodes via
/// [`BlochAngles::antipode`]) and then precessed with an unwrapped azimuth
/// `φ(t) = φ(0) + ωt`, so the relative sign of the two branches is continuous
/// in `t`.
pub fn gw_ansatz_state(ap: &AnsatzParams, omega1: f64, omega2: f64, t: f64) -> TwoQubitState {
    let n = SingleQubitState::from_bloch(&ap.n0).precess(omega1, t);
    let m = SingleQubitState::from_bloch(&ap.m0).precess(omega2, t);
    let n_bar = SingleQubitState::from_bloch(&ap.n0.antipode()).precess(omega1, t);
    let m_bar = SingleQubitState::from_bloch(&ap.m0.antipode()).precess(omega2, t);
    combine_branches(ap.alpha, ap.beta, &tensor(&n, &m), &tensor(&n_bar, &m_bar))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FalsificationReport {
    pub min_fidelity: f64,
    pub argmin_t: f64,
    /// `max_t |E_exact(t) − E_exact(t₀)|` in bits.
    pub max_entropy_deviation: f64,
    pub argmax_t: f64,
    pub verdict: Verdict,
    pub grid: TimeGrid,
    pub tolerance: f64,
}

impl FalsificationReport {
    pub const CSV_HEADER: &'static str =
        "min_fidelity,argmin_t,max_entropy_deviation,argmax_t,verdict";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            fmt_float(self.min_fidelity),
            fmt_float(self.argmin_t),
            fmt_float(self.max_entropy_deviation),
            fmt_float(self.argmax_t),
            self.verdict
        )
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        writeln!(w, "{}", self.csv_row())
    }

    pub fn render_text(&self) -> String {
        format!(
            "product-precession ansatz vs exact evolution\n\
             \x20 grid                  t in [{}, {}], {} samples\n\
             \x20 tolerance             {:e}\n\
             \x20 min fidelity          {:.10}  at t = {:.10}\n\
             \x20 max |E(t) - E(0)|     {:.10}  at t = {:.10}\n\
             \x20 verdict               {}\n",
            self.grid.t_start(),
            self.grid.t_end(),
            self.grid.samples(),
            self.tolerance,
            self.min_fidelity,
            self.argmin_t,
            self.max_entropy_deviation,
            self.argmax_t,
            self.verdict
        )
    }
}

/// Compares exact evolution of the ansatz's own initial state with the ansatz
/// over `grid`. The ansatz precesses with the Larmor frequencies of `hp`.
pub fn falsify(
    ap: &AnsatzParams,
    hp: &HamiltonianParams,
    grid: &TimeGrid,
    tolerance: f64,
) -> Result<FalsificationReport> {
    if !tolerance.is_finite() || tolerance < 0.0 {
        return Err(Error::OutOfRange {
            name: "tolerance",
            value: tolerance,
            range: "[0, ∞)",
        });
    }
    let psi0 = gw_ansatz_state(ap, hp.omega1, hp.omega2, 0.0);
    let traj = simulate_trajectory(hp, &psi0, grid, Some(ap))?;

    let mut min_fidelity = f64::INFINITY;
    let mut argmin_t = grid.t_start();
    for p in &traj.points {
        let f = p
            .gw_fidelity
            .expect("ansatz fidelity is recorded when gw is supplied");
        if f < min_fidelity {
            min_fidelity = f;
            argmin_t = p.t;
        }
    }
    let (max_entropy_deviation, argmax_t) = traj.max_entropy_deviation();

    let verdict = if 1.0 - min_fidelity <= tolerance && max_entropy_deviation <= tolerance {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(FalsificationReport {
        min_fidelity,
        argmin_t,
        max_entropy_deviation,
        argmax_t,
        verdict,
        grid: *grid,
        tolerance,
    })
}
