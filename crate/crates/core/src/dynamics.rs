//! Entanglement along exact trajectories, and the isotropic-exchange
//! counterexample with its closed-form Schmidt angles.
//!
//! Under `H = 2λ S⁽¹⁾·S⁽²⁾` the state
//! `cos(a/2)|1,0⟩ + sin(a/2)|0,0⟩` evolves as
//! `e^{-iλt/2} cos(a/2)|1,0⟩ + e^{+3iλt/2} sin(a/2)|0,0⟩`, so in the
//! `|+−⟩, |−+⟩` basis its Schmidt angle obeys `cos α(t) = sin a · cos 2λt`
//! and its relative phase `tan β(t) = −tan a · sin 2λt`. The entanglement
//! therefore oscillates whenever `0 < a < π`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::falsifier::{gw_ansatz_state, AnsatzParams};
use crate::hamiltonian::{build_hamiltonian, evolve, spectrum, HamiltonianParams};
use crate::qstate::{fidelity, wrap_pi, TwoQubitState, NORM_TOLERANCE};
use crate::schmidt::{
    entanglement_entropy, schmidt_decompose, schmidt_fixed_basis, FixedBasisSchmidt,
};

/// Parameters of the isotropic-exchange counterexample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleParams {
    a: f64,
    lambda: f64,
}

impl CounterexampleParams {
    pub fn new(a: f64, lambda: f64) -> Result<Self> {
        check_mixing_angle(a)?;
        if !lambda.is_finite() {
            return Err(Error::NonFinite("lambda"));
        }
        Ok(Self { a, lambda })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

fn check_mixing_angle(a: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::NonFinite("a"));
    }
    if !(0.0..=PI).contains(&a) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            range: "[0, π]",
        });
    }
    Ok(())
}

/// `cos(a/2)|1,0⟩ + sin(a/2)|0,0⟩` with `|1,0⟩, |0,0⟩ = (|+−⟩ ± |−+⟩)/√2`.
pub fn counterexample_initial(a: f64) -> Result<TwoQubitState> {
    check_mixing_angle(a)?;
    let (s, c) = (0.5 * a).sin_cos();
    TwoQubitState::from_real([0.0, (c + s) * FRAC_1_SQRT_2, (c - s) * FRAC_1_SQRT_2, 0.0])
}

/// Amplitudes of `|+−⟩` and `|−+⟩` at time `t` with the global phase
/// `e^{iλt/2}` removed.
pub fn closed_form_amplitudes(p: &CounterexampleParams, t: f64) -> (Complex64, Complex64) {
    let (s, c) = (0.5 * p.a).sin_cos();
    let minus = Complex64::from_polar(c * FRAC_1_SQRT_2, -p.lambda * t);
    let plus = Complex64::from_polar(s * FRAC_1_SQRT_2, p.lambda * t);
    (minus + plus, minus - plus)
}

/// Branch-correct `α(t) ∈ [0, π]` and `β(t) ∈ (−π, π]` of the counterexample.
pub fn closed_form_alpha_beta(p: &CounterexampleParams, t: f64) -> FixedBasisSchmidt {
    let (u, v) = closed_form_amplitudes(p, t);
    FixedBasisSchmidt::from_amplitudes(u, v)
}

/// Recognizes `e^{iγ}(cos(a/2)|1,0⟩ + sin(a/2)|0,0⟩)` with `a ∈ [0, π]` and
/// returns `a`.
pub fn detect_counterexample_angle(psi: &TwoQubitState) -> Option<f64> {
    const TOL: f64 = 1e-10;
    let amps = psi.amps();
    if amps[0].norm() > TOL || amps[3].norm() > TOL {
        return None;
    }
    let (u, v) = (amps[1], amps[2]);
    // remove the global phase carried by the |+−⟩ amplitude
    let phase = if u.norm() > 0.0 {
        u / u.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let (x1, x2) = (u / phase, v / phase);
    if x1.im.abs() > TOL || x2.im.abs() > TOL {
        return None;
    }
    let a = FRAC_PI_2 - 2.0 * x2.re.atan2(x1.re);
    if (-TOL..=PI + TOL).contains(&a) {
        Some(a.clamp(0.0, PI))
    } else {
        None
    }
}

/// Uniform time grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    samples: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, samples: usize) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidGrid("endpoints must be finite".into()));
        }
        if t_end < t_start {
            return Err(Error::InvalidGrid(format!(
                "t_end ({t_end}) precedes t_start ({t_start})"
            )));
        }
        if samples < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            samples,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn time(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            return self.t_end;
        }
        let frac = i as f64 / (self.samples - 1) as f64;
        self.t_start + (self.t_end - self.t_start) * frac
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |i| self.time(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    /// Entanglement entropy in bits.
    pub entropy: f64,
    /// Fixed-basis α ∈ [0, π] when `fixed_basis`, canonical Schmidt α otherwise.
    pub alpha: f64,
    pub beta: f64,
    pub fixed_basis: bool,
    pub alpha_closed: Option<f64>,
    pub beta_closed: Option<f64>,
    pub gw_fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub params: HamiltonianParams,
    pub initial: TwoQubitState,
    pub grid: TimeGrid,
    /// Set when the closed-form reference columns are attached.
    pub counterexample: Option<CounterexampleParams>,
    pub ansatz: Option<AnsatzParams>,
}

impl Trajectory {
    /// `max_t |cos α(t) − cos α_closed(t)|`
    pub fn max_cos_alpha_discrepancy(&self) -> Option<f64> {
        self.counterexample?;
        Some(
            self.points
                .iter()
                .filter_map(|p| p.alpha_closed.map(|ac| (p.alpha.cos() - ac.cos()).abs()))
                .fold(0.0, f64::max),
        )
    }

    /// `max_t |wrap(β(t) − β_closed(t))|`
    pub fn max_beta_discrepancy(&self) -> Option<f64> {
        self.counterexample?;
        Some(
            self.points
                .iter()
                .filter_map(|p| p.beta_closed.map(|bc| wrap_pi(p.beta - bc).abs()))
                .fold(0.0, f64::max),
        )
    }

    /// `max_t |E(t) − E(t₀)|` and the first time it is attained.
    pub fn max_entropy_deviation(&self) -> (f64, f64) {
        let e0 = self.points[0].entropy;
        let mut best = (0.0, self.points[0].t);
        for p in &self.points {
            let d = (p.entropy - e0).abs();
            if d > best.0 {
                best = (d, p.t);
            }
        }
        best
    }

    /// Writes the trajectory CSV: `#` metadata lines, then
    /// `t,entropy,alpha,beta,alpha_closed,beta_closed,gw_fidelity`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let p = &self.params;
        writeln!(w, "# spinpair trajectory")?;
        writeln!(
            w,
            "# omega1={} omega2={} lambda={} ax={} ay={} az={}",
            fmt_float(p.omega1),
            fmt_float(p.omega2),
            fmt_float(p.lambda),
            fmt_float(p.ax),
            fmt_float(p.ay),
            fmt_float(p.az)
        )?;
        writeln!(
            w,
            "# t_start={} t_end={} samples={}",
            fmt_float(self.grid.t_start),
            fmt_float(self.grid.t_end),
            self.grid.samples
        )?;
        let init: Vec<String> = self
            .initial
            .amps()
            .iter()
            .map(|z| format!("{} {}", fmt_float(z.re), fmt_float(z.im)))
            .collect();
        writeln!(w, "# initial={}", init.join(";"))?;
        if let Some(ce) = &self.counterexample {
            writeln!(
                w,
                "# counterexample a={} lambda_eff={}",
                fmt_float(ce.a),
                fmt_float(ce.lambda)
            )?;
        }
        if let Some(ap) = &self.ansatz {
            writeln!(
                w,
                "# ansatz alpha={} beta={} n_theta={} n_phi={} m_theta={} m_phi={}",
                fmt_float(ap.alpha()),
                fmt_float(ap.beta()),
                fmt_float(ap.n0().theta()),
                fmt_float(ap.n0().phi()),
                fmt_float(ap.m0().theta()),
                fmt_float(ap.m0().phi())
            )?;
        }
        let canonical = self.points.iter().filter(|p| !p.fixed_basis).count();
        if canonical == 0 {
            writeln!(
                w,
                "# alpha convention: fixed basis |+->,|-+> at every point"
            )?;
        } else {
            writeln!(
                w,
                "# alpha convention: canonical Schmidt angle at {canonical} of {} points (state outside span{{|+->,|-+>}})",
                self.points.len()
            )?;
        }
        writeln!(
            w,
            "t,entropy,alpha,beta,alpha_closed,beta_closed,gw_fidelity"
        )?;
        for pt in &self.points {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt_float(pt.t),
                fmt_float(pt.entropy),
                fmt_float(pt.alpha),
                fmt_float(pt.beta),
                fmt_opt(pt.alpha_closed),
                fmt_opt(pt.beta_closed),
                fmt_opt(pt.gw_fidelity)
            )?;
        }
        Ok(())
    }
}

/// 17 significant digits.
pub(crate) fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Evolves `psi0` exactly over `grid`, recording entropy and Schmidt angles.
///
/// Closed-form reference columns are attached only when `hp` is exactly
/// isotropic and field-free and `psi0` belongs to the counterexample family.
/// When `gw` is given, the fidelity against the product-precession ansatz
/// (with the Larmor frequencies of `hp`) is recorded too.
pub fn simulate_trajectory(
    hp: &HamiltonianParams,
    psi0: &TwoQubitState,
    grid: &TimeGrid,
    gw: Option<&AnsatzParams>,
) -> Result<Trajectory> {
    hp.validate()?;
    let norm_sq = psi0.norm().powi(2);
    if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized {
            norm_sq,
            tolerance: NORM_TOLERANCE,
        });
    }

    let counterexample = match (hp.isotropic_coupling(), detect_counterexample_angle(psi0)) {
        (Some(lambda_eff), Some(a)) => Some(CounterexampleParams::new(a, lambda_eff)?),
        _ => None,
    };

    let spec = spectrum(&build_hamiltonian(hp));
    let mut points = Vec::with_capacity(grid.samples());
    for t in grid.times() {
        let psi = evolve(&spec.propagator(t - grid.t_start()), psi0);
        let entropy = entanglement_entropy(&psi);
        let (alpha, beta, fixed_basis) = match schmidt_fixed_basis(&psi) {
            Ok(f) => (f.alpha, f.beta, true),
            Err(Error::Leakage { .. }) => {
                let f = schmidt_decompose(&psi)?;
                (f.alpha, f.beta, false)
            }
            Err(e) => return Err(e),
        };
        let closed = counterexample.map(|ce| closed_form_alpha_beta(&ce, t - grid.t_start()));
        let gw_fidelity = gw.map(|ap| {
            fidelity(
                &psi,
                &gw_ansatz_state(ap, hp.omega1, hp.omega2, t - grid.t_start()),
            )
        });
        points.push(TrajectoryPoint {
            t,
            entropy,
            alpha,
            beta,
            fixed_basis,
            alpha_closed: closed.map(|f| f.alpha),
            beta_closed: closed.map(|f| f.beta),
            gw_fidelity,
        });
    }

    Ok(Trajectory {
        points,
        params: *hp,
        initial: *psi0,
        grid: *grid,
        counterexample,
        ansatz: gw.copied(),
    })
}
