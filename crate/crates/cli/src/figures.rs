//! Data behind each published figure panel: the numeric curve plus the closed
//! forms drawn with it, on the panel's fixed parameters.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use udwf_core::asymptotics::{pointlike_contact_limit, ComponentKind, Contribution, Distance, StateKind, TimeRegime, VelocityRegime};
use udwf_core::{
    asymptote, force_free, force_plate, lorentz_gamma, Boundary, DetectorParams, DetectorState, Normalization, PlateForce, Regime, RegimeKey,
    SwitchingWindow, ToleranceSpec,
};

use crate::error::CliError;
use crate::output::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Fig1,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Fig3,
    Fig4,
    Fig5,
    Fig6a,
    Fig6b,
    Fig7,
    Fig8,
    Fig9,
    Fig10a,
    Fig10b,
}

pub const ALL_FIGURES: [FigureId; 15] = [
    FigureId::Fig1,
    FigureId::Fig2a,
    FigureId::Fig2b,
    FigureId::Fig2c,
    FigureId::Fig2d,
    FigureId::Fig3,
    FigureId::Fig4,
    FigureId::Fig5,
    FigureId::Fig6a,
    FigureId::Fig6b,
    FigureId::Fig7,
    FigureId::Fig8,
    FigureId::Fig9,
    FigureId::Fig10a,
    FigureId::Fig10b,
];

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format!("{self:?}").to_lowercase();
        f.write_str(&s)
    }
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        ALL_FIGURES
            .iter()
            .copied()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| CliError::Input(format!("unknown figure `{s}`; known ids: {}", ALL_FIGURES.map(|i| i.to_string()).join(", "))))
    }
}

const VELOCITY: f64 = 0.999;
const SHORT_OMEGA_DT: f64 = 1e-3;

fn tol() -> ToleranceSpec {
    ToleranceSpec { rel_tol: 1e-9, abs_tol: 0.0, max_evals: 20_000_000 }
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn reflection() -> Complex64 {
    Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)
}

pub fn generate(id: FigureId) -> Result<Table, CliError> {
    use FigureId::*;
    match id {
        Fig1 => free_ground(),
        Fig2a => free_excited(1e-2),
        Fig2b => free_excited(1e-1),
        Fig2c => free_excited(1.0),
        Fig2d => free_excited(5.0),
        Fig3 => plate_figure(id, &FIG3),
        Fig4 => plate_figure(id, &FIG4),
        Fig5 => plate_figure(id, &FIG5),
        Fig6a => plate_figure(id, &FIG6A),
        Fig6b => plate_figure(id, &FIG6B),
        Fig7 => plate_figure(id, &FIG7),
        Fig8 => plate_figure(id, &FIG8),
        Fig9 => plate_figure(id, &FIG9),
        Fig10a => plate_figure(id, &FIG10A),
        Fig10b => plate_figure(id, &FIG10B),
    }
}

/// Free-space F_x in units of λ²Ω²γv/(2π²) against ΩΔτ, with σ = 1.
fn free_curve(sigma_omega: f64, state: StateKind) -> Result<Vec<[f64; 4]>, CliError> {
    let v = 0.5;
    let p = DetectorParams::simple(sigma_omega, 1.0)?;
    let st = match state {
        StateKind::Ground => DetectorState::ground(),
        StateKind::Excited => DetectorState::excited(),
    };
    let div = Normalization::FrictionUnits.divisor(&p, v)?;
    let key = |t| RegimeKey::new(state, ComponentKind::FrictionX, t, Distance::FreeSpace, VelocityRegime::Any, Contribution::Total);
    let (short, long) = (key(TimeRegime::Short)?, key(TimeRegime::Long)?);
    log_grid(1e-2, 1e2, 241)
        .par_iter()
        .map(|&t| {
            let w = SwitchingWindow::new(t / sigma_omega)?;
            let f = force_free(&p, &st, v, &w, Regime::FiniteTime, &tol())?.x();
            let z = Complex64::default();
            Ok([t, f / div, asymptote(short, &p, v, 0.0, z, &w)? / div, asymptote(long, &p, v, 0.0, z, &w)? / div])
        })
        .collect()
}

fn free_ground() -> Result<Table, CliError> {
    let mut t = Table::new(["sigma_omega", "omega_delta_tau", "f_numeric", "f_short_asymptote", "f_long_asymptote"].map(String::from).to_vec());
    t.meta("figure", "fig1");
    t.meta("description", "ground-state free-space friction F_x / (lambda^2 Omega^2 gamma v / (2 pi^2)) against Omega dtau; upper panel sigma_omega = 1, lower sigma_omega = 5");
    t.meta("velocity", 0.5);
    for so in [1.0, 5.0] {
        for r in free_curve(so, StateKind::Ground)? {
            t.rows.push(vec![so, r[0], r[1], r[2], r[3]]);
        }
    }
    Ok(t)
}

fn free_excited(sigma_omega: f64) -> Result<Table, CliError> {
    let mut t = Table::new(["omega_delta_tau", "f_numeric", "f_short_asymptote", "f_long_asymptote", "f_long_constant"].map(String::from).to_vec());
    t.meta("figure", format!("fig2 panel sigma_omega = {sigma_omega}"));
    t.meta("description", "excited-state free-space friction F_x / (lambda^2 Omega^2 gamma v / (2 pi^2)) against Omega dtau");
    t.meta("sigma_omega", sigma_omega);
    t.meta("velocity", 0.5);
    // −γvλ²Ω²e^{−σ²Ω²/2}/(2π) in the same units.
    let constant = -PI * (-0.5 * sigma_omega * sigma_omega).exp();
    for r in free_curve(sigma_omega, StateKind::Excited)? {
        t.rows.push(vec![r[0], r[1], r[2], r[3], constant]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Total,
    Principal,
    Delta,
}

/// Part of R fed to a closed form, to split out the Δτ and Δτ² terms.
#[derive(Debug, Clone, Copy)]
enum RPart {
    Full,
    Re,
    Im,
}

#[derive(Debug, Clone, Copy)]
enum Reference {
    /// Small-distance closed form (the contact value).
    SmallD,
    /// Numeric curve at d = σ.
    NumericAtSigma,
    /// Small-distance closed form at d = σ.
    SmallDAtSigma,
}

struct Curve {
    name: &'static str,
    distance: Distance,
    velocity: VelocityRegime,
    part: RPart,
}

struct PlateFigure {
    description: &'static str,
    state: StateKind,
    component: ComponentKind,
    time: TimeRegime,
    contribution: Contribution,
    v: f64,
    reference: Reference,
    curves: &'static [Curve],
    pointlike: bool,
}

const fn curve(name: &'static str, distance: Distance, part: RPart) -> Curve {
    Curve { name, distance, velocity: VelocityRegime::Any, part }
}

use ComponentKind::{CasimirZ, FrictionX};
use Distance::{LargeD, Pointlike, SmallD};
use StateKind::{Excited, Ground};
use TimeRegime::{Long, Short};

const FIG3: PlateFigure = PlateFigure {
    description: "ground-state friction F_x at Omega dtau = 1e-3 over its contact value, against d/sigma",
    state: Ground,
    component: FrictionX,
    time: Short,
    contribution: Contribution::Total,
    v: VELOCITY,
    reference: Reference::SmallD,
    curves: &[
        curve("small_d", SmallD, RPart::Full),
        curve("large_d", LargeD, RPart::Full),
        curve("small_d_dtau2", SmallD, RPart::Im),
        curve("large_d_dtau2", LargeD, RPart::Im),
    ],
    pointlike: false,
};

const FIG4: PlateFigure = PlateFigure {
    description: "ground-state long-time friction F_x over its contact value, against d/sigma",
    state: Ground,
    component: FrictionX,
    time: Long,
    contribution: Contribution::Total,
    v: VELOCITY,
    reference: Reference::SmallD,
    curves: &[curve("small_d", SmallD, RPart::Full), curve("large_d", LargeD, RPart::Full)],
    pointlike: false,
};

const FIG5: PlateFigure = PlateFigure {
    description: "ground-state Casimir F_z at Omega dtau = 1e-3 over its value at d = sigma, against d/sigma",
    state: Ground,
    component: CasimirZ,
    time: Short,
    contribution: Contribution::Total,
    v: VELOCITY,
    reference: Reference::NumericAtSigma,
    curves: &[
        curve("small_d", SmallD, RPart::Full),
        curve("large_d", LargeD, RPart::Full),
        curve("small_d_dtau2", SmallD, RPart::Re),
        curve("large_d_dtau2", LargeD, RPart::Re),
    ],
    pointlike: false,
};

const FIG6A: PlateFigure = PlateFigure {
    description: "ground-state long-time Casimir F_z over its value at d = sigma, against d/sigma, v = 0",
    state: Ground,
    component: CasimirZ,
    time: Long,
    contribution: Contribution::Total,
    v: 0.0,
    reference: Reference::NumericAtSigma,
    curves: &[
        curve("small_d", SmallD, RPart::Full),
        Curve { name: "large_d_small_v", distance: LargeD, velocity: VelocityRegime::SmallV, part: RPart::Full },
        Curve { name: "pointlike", distance: Pointlike, velocity: VelocityRegime::SmallV, part: RPart::Full },
    ],
    pointlike: true,
};

const FIG6B: PlateFigure = PlateFigure {
    description: "ground-state long-time Casimir F_z over its value at d = sigma, against d/sigma, v = 0.999",
    v: VELOCITY,
    curves: &[
        curve("small_d", SmallD, RPart::Full),
        Curve { name: "large_d_high_v", distance: LargeD, velocity: VelocityRegime::HighV, part: RPart::Full },
        Curve { name: "pointlike", distance: Pointlike, velocity: VelocityRegime::SmallV, part: RPart::Full },
    ],
    ..FIG6A
};

const FIG7: PlateFigure = PlateFigure {
    description: "excited-state friction F_x at Omega dtau = 1e-3 over its contact value, against d/sigma",
    state: Excited,
    component: FrictionX,
    time: Short,
    contribution: Contribution::Total,
    v: VELOCITY,
    reference: Reference::SmallD,
    curves: &[
        curve("small_d", SmallD, RPart::Full),
        curve("large_d", LargeD, RPart::Full),
        curve("small_d_dtau2", SmallD, RPart::Im),
        curve("large_d_dtau2", LargeD, RPart::Im),
        curve("small_d_dtau", SmallD, RPart::Re),
        curve("large_d_dtau", LargeD, RPart::Re),
    ],
    pointlike: false,
};

const FIG8: PlateFigure = PlateFigure {
    description: "excited-state long-time on-shell friction F_x over its contact value, against d/sigma",
    state: Excited,
    component: FrictionX,
    time: Long,
    contribution: Contribution::Delta,
    v: VELOCITY,
    reference: Reference::SmallD,
    curves: &[curve("small_d", SmallD, RPart::Full), curve("large_d", LargeD, RPart::Full)],
    pointlike: false,
};

const FIG9: PlateFigure = PlateFigure {
    description: "excited-state long-time principal-value friction F_x over its contact value, against d/sigma",
    contribution: Contribution::Pv,
    ..FIG8
};

const FIG10A: PlateFigure = PlateFigure {
    description: "excited-state long-time on-shell Casimir F_z over the small-distance form at d = sigma, against d/sigma",
    state: Excited,
    component: CasimirZ,
    time: Long,
    contribution: Contribution::Delta,
    v: VELOCITY,
    reference: Reference::SmallDAtSigma,
    curves: &[curve("small_d", SmallD, RPart::Full), curve("large_d", LargeD, RPart::Full)],
    pointlike: false,
};

const FIG10B: PlateFigure = PlateFigure {
    description: "excited-state long-time principal-value Casimir F_z over the small-distance form at d = sigma, against d/sigma",
    contribution: Contribution::Pv,
    ..FIG10A
};

struct PlateSetup {
    params: DetectorParams,
    state: DetectorState,
    window: SwitchingWindow,
    regime: Regime,
    r: Complex64,
}

impl PlateFigure {
    fn setup(&self) -> Result<PlateSetup, CliError> {
        let (window, regime) = match self.time {
            Short => (SwitchingWindow::new(SHORT_OMEGA_DT)?, Regime::FiniteTime),
            Long => (SwitchingWindow::new(0.0)?, Regime::LongTime),
        };
        let state = match self.state {
            Ground => DetectorState::ground(),
            Excited => DetectorState::excited(),
        };
        Ok(PlateSetup { params: DetectorParams::simple(1.0, 1.0)?, state, window, regime, r: reflection() })
    }

    fn numeric(&self, s: &PlateSetup, d: f64) -> Result<f64, CliError> {
        let f: PlateForce = force_plate(&s.params, &s.state, self.v, &Boundary::plate(d, s.r)?, &s.window, s.regime, &tol())?;
        let piece = match self.piece() {
            Piece::Total => f.total,
            Piece::Principal => f.principal,
            Piece::Delta => f.delta,
        };
        Ok(match self.component {
            FrictionX => piece.x(),
            CasimirZ => piece.z(),
        })
    }

    fn piece(&self) -> Piece {
        match self.contribution {
            Contribution::Total => Piece::Total,
            Contribution::Pv => Piece::Principal,
            Contribution::Delta => Piece::Delta,
        }
    }

    fn key(&self, distance: Distance, velocity: VelocityRegime) -> Result<RegimeKey, CliError> {
        Ok(RegimeKey::new(self.state, self.component, self.time, distance, velocity, self.contribution)?)
    }

    fn closed(&self, s: &PlateSetup, c: &Curve, d: f64) -> Result<f64, CliError> {
        let r = match c.part {
            RPart::Full => s.r,
            RPart::Re => Complex64::new(s.r.re, 0.0),
            RPart::Im => Complex64::new(0.0, s.r.im),
        };
        Ok(asymptote(self.key(c.distance, c.velocity)?, &s.params, self.v, d, r, &s.window)?)
    }
}

fn plate_figure(id: FigureId, fig: &PlateFigure) -> Result<Table, CliError> {
    let s = fig.setup()?;
    lorentz_gamma(fig.v)?;
    let small = Curve { name: "", distance: SmallD, velocity: VelocityRegime::Any, part: RPart::Full };
    let reference = match fig.reference {
        Reference::SmallD => fig.closed(&s, &small, 1e-2)?,
        Reference::NumericAtSigma => fig.numeric(&s, 1.0)?,
        Reference::SmallDAtSigma => fig.closed(&s, &small, 1.0)?,
    };
    let mut cols = vec!["d_over_sigma".to_string(), "ratio_numeric".to_string()];
    cols.extend(fig.curves.iter().map(|c| format!("ratio_{}", c.name)));
    if fig.pointlike {
        cols.push("ratio_pointlike_contact".into());
    }
    let rows: Vec<Vec<f64>> = log_grid(1e-2, 1e2, 61)
        .par_iter()
        .map(|&d| {
            let mut row = vec![d, fig.numeric(&s, d)? / reference];
            for c in fig.curves {
                row.push(fig.closed(&s, c, d)? / reference);
            }
            if fig.pointlike {
                row.push(pointlike_contact_limit(&s.params, d, s.r) / reference);
            }
            Ok(row)
        })
        .collect::<Result<_, CliError>>()?;
    let mut t = Table::new(cols);
    t.meta("figure", id.to_string());
    t.meta("description", fig.description);
    t.meta("sigma_omega", 1.0);
    t.meta("velocity", fig.v);
    t.meta("reflection", [s.r.re, s.r.im]);
    match fig.time {
        Short => t.meta("omega_delta_tau", SHORT_OMEGA_DT),
        Long => t.meta("regime", "long_time"),
    }
    t.meta("reference_value", reference);
    t.rows = rows;
    Ok(t)
}
