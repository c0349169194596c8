use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use udwf_core::asymptotics::{validity_warnings, ComponentKind, StateKind, TimeRegime};
use udwf_core::verify::{run_criterion, CriterionReport, Suite};
use udwf_core::{asymptote, force_free, force_plate, to_dimensionless, Boundary, ForceComponents, Normalization, RegimeKey, Regime};

use crate::config::{Format, Resolved, RunConfig, SweepVariable};
use crate::error::CliError;
use crate::output::{json_f64, Table};

const UNITS_NOTE: &str = "natural units c = hbar = 1; lengths in the input length unit; forces lower-index (t, x, y, z)";

/// One force evaluation with the closed forms that apply to it.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub total: ForceComponents,
    /// Principal and on-shell pieces; present only with a plate.
    pub split: Option<(ForceComponents, ForceComponents)>,
    pub asymptotes: Vec<(RegimeKey, f64)>,
}

/// Keys whose closed form describes the configuration. Mixed states have none.
/// In free space both time limits are shown for finite windows.
pub fn applicable_keys(r: &Resolved) -> Vec<RegimeKey> {
    let state = match r.state.excited_pop {
        0.0 => StateKind::Ground,
        1.0 => StateKind::Excited,
        _ => return Vec::new(),
    };
    let free = matches!(r.boundary, Boundary::Free);
    let times: &[TimeRegime] = match (r.regime, free) {
        (Regime::FiniteTime, true) => &[TimeRegime::Short, TimeRegime::Long],
        (Regime::FiniteTime, false) => &[TimeRegime::Short],
        (Regime::LongTime, _) => &[TimeRegime::Long],
    };
    let mut keys = Vec::new();
    for comp in [ComponentKind::FrictionX, ComponentKind::CasimirZ] {
        for &t in times {
            keys.extend(RegimeKey::applicable(state, comp, t, free));
        }
    }
    keys
}

fn plate_geometry(b: &Boundary) -> (f64, num_complex::Complex64) {
    match *b {
        Boundary::Free => (0.0, num_complex::Complex64::default()),
        Boundary::Plate { distance, reflection } => (distance, reflection),
    }
}

pub fn evaluate(r: &Resolved) -> Result<Evaluation, CliError> {
    let norm = |f: ForceComponents| f.normalized(r.normalization, &r.params, r.v);
    let (total, split) = match r.boundary {
        Boundary::Free => (norm(force_free(&r.params, &r.state, r.v, &r.window, r.regime, &r.tol)?)?, None),
        Boundary::Plate { .. } => {
            let p = force_plate(&r.params, &r.state, r.v, &r.boundary, &r.window, r.regime, &r.tol)?;
            (norm(p.total)?, Some((norm(p.principal)?, norm(p.delta)?)))
        }
    };
    let divisor = r.normalization.divisor(&r.params, r.v)?;
    let (d, refl) = plate_geometry(&r.boundary);
    let asymptotes = applicable_keys(r)
        .into_iter()
        .map(|k| (k, asymptote(k, &r.params, r.v, d, refl, &r.window).map_or(f64::NAN, |a| a / divisor)))
        .collect();
    Ok(Evaluation { total, split, asymptotes })
}

fn groups_json(r: &Resolved) -> Result<Value, CliError> {
    let g = to_dimensionless(&r.params, &r.boundary, r.v, &r.window)?;
    Ok(json!({
        "y": json_f64(g.y),
        "sigma_omega": json_f64(g.x_gap),
        "omega_delta_tau": json_f64(g.t_gap),
        "d_over_sigma": json_f64(g.d_ratio),
        "beta": json_f64(g.beta_v),
        "gamma": json_f64(g.gamma_lorentz),
    }))
}

fn components_json(f: &ForceComponents) -> Value {
    json!({
        "f": f.f.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
        "err": f.err.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
    })
}

fn force_columns(prefix: &str) -> Vec<String> {
    let mut c: Vec<String> = ["t", "x", "y", "z"].iter().map(|a| format!("{prefix}f_{a}")).collect();
    c.extend(["t", "x", "y", "z"].iter().map(|a| format!("{prefix}err_{a}")));
    c
}

fn push_force(row: &mut Vec<f64>, f: &ForceComponents) {
    row.extend(f.f);
    row.extend(f.err);
}

fn snake<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("enum serializes")
}

pub fn cmd_force(config: &RunConfig, format: Format) -> Result<String, CliError> {
    let r = config.resolve()?;
    let ev = evaluate(&r)?;
    let groups = groups_json(&r)?;
    match format {
        Format::Json => {
            let mut force = serde_json::Map::new();
            force.insert("total".into(), components_json(&ev.total));
            if let Some((p, d)) = &ev.split {
                force.insert("principal".into(), components_json(p));
                force.insert("delta".into(), components_json(d));
            }
            let asym: Vec<Value> = ev
                .asymptotes
                .iter()
                .map(|(k, a)| {
                    let (d, _) = plate_geometry(&r.boundary);
                    json!({ "key": k.to_string(), "value": json_f64(*a), "warnings": validity_warnings(k, &r.params, r.v, d, &r.window) })
                })
                .collect();
            let mut rec = json!({
                "command": "force",
                "config": config,
                "units": UNITS_NOTE,
                "regime": snake(&r.regime),
                "normalization": snake(&r.normalization),
                "groups": groups,
                "force": force,
                "asymptotes": asym,
            });
            if r.scales.unit_mode == udwf_core::UnitMode::Si && r.normalization == Normalization::RawNatural {
                rec["total_si_newton"] = json!(ev.total.f.iter().map(|&x| json_f64(r.scales.force_from_natural(x))).collect::<Vec<_>>());
            }
            Ok(serde_json::to_string_pretty(&rec).expect("record serializes") + "\n")
        }
        Format::Csv => {
            let mut cols = force_columns("");
            let mut row = Vec::new();
            push_force(&mut row, &ev.total);
            if let Some((p, d)) = &ev.split {
                cols.extend(force_columns("pv_"));
                cols.extend(force_columns("delta_"));
                push_force(&mut row, p);
                push_force(&mut row, d);
            }
            for (k, a) in &ev.asymptotes {
                cols.push(format!("asym:{k}"));
                row.push(*a);
            }
            let mut t = Table::new(cols);
            t.meta("command", "force");
            t.meta("config", config);
            t.meta("units", UNITS_NOTE);
            t.meta("normalization", r.normalization);
            t.meta("groups", groups);
            t.rows.push(row);
            Ok(t.to_csv())
        }
    }
}

fn variable_name(v: SweepVariable) -> &'static str {
    match v {
        SweepVariable::DeltaTau => "delta_tau",
        SweepVariable::D => "d",
        SweepVariable::V => "v",
        SweepVariable::SigmaOmega => "sigma_omega",
    }
}

/// Rows come back in grid order whatever the thread count.
pub fn cmd_sweep(config: &RunConfig, format: Format) -> Result<String, CliError> {
    config.resolve()?;
    let sweep = config.sweep.as_ref().ok_or_else(|| CliError::field("sweep", "the sweep command needs a sweep block".into()))?;
    let grid = sweep.grid()?;
    let first = config.resolve_at(sweep.variable, grid[0])?;
    let keys = applicable_keys(&first);
    let plate = !matches!(first.boundary, Boundary::Free);
    let evals: Vec<Evaluation> = grid
        .par_iter()
        .map(|&x| config.resolve_at(sweep.variable, x).and_then(|r| evaluate(&r)))
        .collect::<Result<_, _>>()?;
    let mut cols = vec![variable_name(sweep.variable).to_string()];
    cols.extend(force_columns(""));
    if plate {
        cols.extend(force_columns("pv_"));
        cols.extend(force_columns("delta_"));
    }
    cols.extend(keys.iter().map(|k| format!("asym:{k}")));
    let mut t = Table::new(cols);
    t.meta("command", "sweep");
    t.meta("config", config);
    t.meta("units", UNITS_NOTE);
    t.meta("normalization", first.normalization);
    for (&x, ev) in grid.iter().zip(&evals) {
        let mut row = vec![x];
        push_force(&mut row, &ev.total);
        if let Some((p, d)) = &ev.split {
            push_force(&mut row, p);
            push_force(&mut row, d);
        }
        row.extend(ev.asymptotes.iter().map(|(_, a)| a));
        t.rows.push(row);
    }
    Ok(t.render(format))
}

/// Reports in suite order; the caller prints them and sets the exit status.
pub fn cmd_verify(suite: Suite) -> Vec<CriterionReport> {
    suite
        .criteria()
        .par_iter()
        .map(|&id| {
            run_criterion(id).unwrap_or_else(|e| CriterionReport {
                id,
                name: "evaluation error".into(),
                measured: f64::NAN,
                target: f64::NAN,
                tolerance: f64::NAN,
                pass: false,
                details: e.to_string(),
            })
        })
        .collect()
}

pub fn render_reports(reports: &[CriterionReport], format: Format) -> String {
    match format {
        Format::Csv => reports.iter().map(|r| format!("{r}\n")).collect(),
        Format::Json => {
            let v: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "name": r.name,
                        "measured": json_f64(r.measured),
                        "target": json_f64(r.target),
                        "tolerance": json_f64(r.tolerance),
                        "pass": r.pass,
                        "details": r.details,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v).expect("reports serialize") + "\n"
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> RunConfig {
        RunConfig::from_json(text).unwrap()
    }

    #[test]
    fn free_ground_finite_window_lists_both_time_limits() {
        let r = cfg(r#"{"dimensionless": {"sigma_omega": 1, "omega_delta_tau": 1}, "velocity": 0.5}"#).resolve().unwrap();
        let keys: Vec<String> = applicable_keys(&r).iter().map(|k| k.to_string()).collect();
        assert_eq!(keys.len(), 2);
        assert!(keys.iter().all(|k| k.starts_with("ground/friction_x/")));
    }

    #[test]
    fn mixed_state_has_no_closed_forms() {
        let r = cfg(r#"{"dimensionless": {"sigma_omega": 1}, "state": {"excited_pop": 0.5}}"#).resolve().unwrap();
        assert!(applicable_keys(&r).is_empty());
    }

    #[test]
    fn plate_with_zero_reflection_gives_zero() {
        let r = cfg(r#"{"dimensionless": {"sigma_omega": 1, "omega_delta_tau": 1, "d_over_sigma": 1}, "velocity": 0.5}"#).resolve().unwrap();
        let ev = evaluate(&r).unwrap();
        assert_eq!(ev.total.f, [0.0; 4]);
    }

    #[test]
    fn small_distance_record_matches_its_closed_form() {
        let r = cfg(r#"{"dimensionless": {"sigma_omega": 1, "d_over_sigma": 0.01}, "velocity": 0.999, "reflection": [1, 0], "regime": "long_time"}"#)
            .resolve()
            .unwrap();
        let ev = evaluate(&r).unwrap();
        let (_, a) = ev.asymptotes.iter().find(|(k, _)| k.to_string() == "ground/casimir_z/long/small_d/any/total").unwrap();
        assert!((ev.total.z() / a - 1.0).abs() < 0.03);
    }
}
