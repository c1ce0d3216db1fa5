//! Sweeps, figure fixtures and oracle-vs-numeric verification.
//!
//! Everything here returns plain data or text; `main.rs` only parses
//! arguments and routes output.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::channels::{evolve_joint, kraus_set, ChannelKind};
use crate::error::{Error, Result};
use crate::measures::{coherence_split, joint_entanglement};
use crate::oracles::predict;
use crate::states::{
    density_from_bloch, sample_bloch_batch, sample_random_bloch, BlochVector, StateKind,
};

pub const CSV_HEADER: &str = "p,C_total,C_S,C_E,C_l,C_nl,E_ent,gap";
pub const DEFAULT_STEPS: usize = 101;
pub const DEFAULT_N_STATES: usize = 1000;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 2017;

/// Uniform grid `k/(steps − 1)`, `k = 0..steps`.
pub fn p_grid(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidConfig(format!(
            "p grid needs at least 2 points, got {steps}"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 / last).collect())
}

/// One numeric evaluation of the pipeline at `(r, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub c_total: f64,
    pub c_system: f64,
    pub c_environment: f64,
    pub c_local: f64,
    pub c_nonlocal: f64,
    /// Concurrence for two-level environments, twice the negativity otherwise.
    pub entanglement: f64,
    /// `c_nonlocal − entanglement`.
    pub gap: f64,
}

impl SweepRow {
    fn csv_line(&self) -> String {
        [
            self.p,
            self.c_total,
            self.c_system,
            self.c_environment,
            self.c_local,
            self.c_nonlocal,
            self.entanglement,
            self.gap,
        ]
        .iter()
        .map(|x| format!("{x:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Dilation, partial traces, coherence split and entanglement at one point.
pub fn evaluate_point(kind: ChannelKind, r: BlochVector, p: f64) -> Result<SweepRow> {
    let joint = evolve_joint(&density_from_bloch(r), &kraus_set(kind, p)?)?;
    let split = coherence_split(&joint);
    let entanglement = joint_entanglement(&joint)?;
    Ok(SweepRow {
        p,
        c_total: split.total,
        c_system: split.system,
        c_environment: split.environment,
        c_local: split.local,
        c_nonlocal: split.nonlocal,
        entanglement,
        gap: split.nonlocal - entanglement,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub channel: ChannelKind,
    /// Initial state; when absent a mixed state is drawn from `seed`.
    pub bloch: Option<BlochVector>,
    pub p_steps: usize,
    pub seed: Option<u64>,
}

impl SweepConfig {
    pub fn new(channel: ChannelKind, bloch: BlochVector) -> Self {
        Self {
            channel,
            bloch: Some(bloch),
            p_steps: DEFAULT_STEPS,
            seed: None,
        }
    }

    pub fn initial_state(&self) -> Result<BlochVector> {
        match (self.bloch, self.seed) {
            (Some(r), _) => Ok(r),
            (None, Some(seed)) => Ok(sample_random_bloch(seed, StateKind::Mixed)),
            (None, None) => Err(Error::InvalidConfig(
                "sweep needs --bloch or --seed".to_string(),
            )),
        }
    }
}

/// Rows in ascending `p`; grid points are evaluated in parallel.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let r = cfg.initial_state()?;
    let grid = p_grid(cfg.p_steps)?;
    grid.par_iter()
        .map(|&p| evaluate_point(cfg.channel, r, p))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    out.flush()
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig2Inset,
    Fig3,
    Fig4,
    Fig4Inset,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig2Inset,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig4Inset,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig2Inset => "fig2_inset",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig4Inset => "fig4_inset",
        }
    }

    /// Channel and initial states of the figure, one fixture per plotted series.
    pub fn fixtures(self) -> Vec<FigureFixture> {
        let fx = |channel, r: [f64; 3]| FigureFixture {
            figure_id: self,
            channel,
            bloch: BlochVector::from_array(r).expect("fixture states lie in the Bloch ball"),
        };
        match self {
            FigureId::Fig1 => vec![
                fx(ChannelKind::Pdc, [-0.41, 0.80, -0.38]),
                fx(ChannelKind::Pdc, [0.03, -0.15, -0.19]),
            ],
            FigureId::Fig2 => vec![fx(ChannelKind::Bfc, [-0.11, -0.61, 0.77])],
            FigureId::Fig2Inset => vec![fx(ChannelKind::Bfc, [0.37, -0.08, -0.49])],
            FigureId::Fig3 => vec![fx(ChannelKind::Pfc, [-0.11, -0.61, 0.77])],
            FigureId::Fig4 => vec![fx(ChannelKind::Dc, [0.0, 0.0, 0.0])],
            FigureId::Fig4Inset => vec![fx(ChannelKind::Dc, [-0.58, -0.76, 0.11])],
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.code() == s)
            .ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureFixture {
    pub figure_id: FigureId,
    pub channel: ChannelKind,
    pub bloch: BlochVector,
}

/// Looks up series `series` (0-based) of a figure.
pub fn figure_fixture(id: &str, series: usize) -> Result<FigureFixture> {
    let figure: FigureId = id.parse()?;
    let fixtures = figure.fixtures();
    let count = fixtures.len();
    fixtures.into_iter().nth(series).ok_or_else(|| {
        Error::InvalidConfig(format!(
            "{figure} has {count} series, asked for index {series}"
        ))
    })
}

/// Sweep of the fixture's channel and state on the default grid.
pub fn reproduce_figure(fixture: &FigureFixture, p_steps: usize) -> Result<Vec<SweepRow>> {
    run_sweep(&SweepConfig {
        channel: fixture.channel,
        bloch: Some(fixture.bloch),
        p_steps,
        seed: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub channels: Vec<ChannelKind>,
    pub n_states: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub p_steps: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            channels: ChannelKind::ALL.to_vec(),
            n_states: DEFAULT_N_STATES,
            seed: DEFAULT_SEED,
            tolerance: DEFAULT_TOLERANCE,
            p_steps: DEFAULT_STEPS,
        }
    }
}

/// Worst oracle-vs-numeric deviation seen for one quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub quantity: &'static str,
    pub max_abs: f64,
    pub worst_r: BlochVector,
    pub worst_p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    pub kind: ChannelKind,
    pub deviations: Vec<Deviation>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub n_states: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub p_steps: usize,
    pub channels: Vec<ChannelReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.channels.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verify: n_states={} seed={} p_steps={} tolerance={:e}",
            self.n_states, self.seed, self.p_steps, self.tolerance
        )?;
        for ch in &self.channels {
            writeln!(
                f,
                "[{}] {}",
                if ch.passed { "PASS" } else { "FAIL" },
                ch.kind
            )?;
            for d in &ch.deviations {
                writeln!(
                    f,
                    "  {:<8} max_abs_dev={:.3e} worst_r=({:.12}, {:.12}, {:.12}) worst_p={:.4}",
                    d.quantity, d.max_abs, d.worst_r.r1, d.worst_r.r2, d.worst_r.r3, d.worst_p
                )?;
            }
        }
        write!(
            f,
            "overall: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

const QUANTITIES: [&str; 5] = ["C_total", "C_S", "C_E", "C_nl", "E_c"];

/// Per-state maxima; the quantity list is fixed, entanglement only
/// compared where the oracle has a closed form.
fn state_deviations(kind: ChannelKind, r: BlochVector, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut worst = vec![(0.0_f64, 0.0_f64); QUANTITIES.len()];
    for &p in grid {
        let num = evaluate_point(kind, r, p)?;
        let pred = predict(kind, r, p)?;
        let mut devs = vec![
            (num.c_total - pred.c_total).abs(),
            (num.c_system - pred.c_system).abs(),
            (num.c_environment - pred.c_environment).abs(),
            (num.c_nonlocal - pred.c_nonlocal).abs(),
        ];
        if let Some(e) = pred.entanglement {
            devs.push((num.entanglement - e).abs());
        }
        for (slot, dev) in worst.iter_mut().zip(devs) {
            if dev > slot.0 {
                *slot = (dev, p);
            }
        }
    }
    Ok(worst)
}

/// Oracle-vs-numeric comparison over seeded random mixed states.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerificationReport> {
    if cfg.n_states == 0 {
        return Err(Error::InvalidConfig(
            "n_states must be at least 1".to_string(),
        ));
    }
    if cfg.tolerance.is_nan() || cfg.tolerance < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "bad tolerance {}",
            cfg.tolerance
        )));
    }
    let grid = p_grid(cfg.p_steps)?;
    let states = sample_bloch_batch(cfg.seed, cfg.n_states, StateKind::Mixed);
    let mut channels = Vec::with_capacity(cfg.channels.len());
    for &kind in &cfg.channels {
        let per_state: Vec<Vec<(f64, f64)>> = states
            .par_iter()
            .map(|&r| state_deviations(kind, r, &grid))
            .collect::<Result<_>>()?;
        let n_quantities = if predict(kind, states[0], 0.0)?.entanglement.is_some() {
            QUANTITIES.len()
        } else {
            QUANTITIES.len() - 1
        };
        // Sequential reduction in state order keeps the report deterministic.
        let deviations: Vec<Deviation> = (0..n_quantities)
            .map(|qi| {
                let mut best = Deviation {
                    quantity: QUANTITIES[qi],
                    max_abs: 0.0,
                    worst_r: states[0],
                    worst_p: 0.0,
                };
                for (r, devs) in states.iter().zip(&per_state) {
                    if devs[qi].0 > best.max_abs {
                        best.max_abs = devs[qi].0;
                        best.worst_r = *r;
                        best.worst_p = devs[qi].1;
                    }
                }
                best
            })
            .collect();
        let passed = deviations.iter().all(|d| d.max_abs <= cfg.tolerance);
        channels.push(ChannelReport {
            kind,
            deviations,
            passed,
        });
    }
    Ok(VerificationReport {
        n_states: cfg.n_states,
        seed: cfg.seed,
        tolerance: cfg.tolerance,
        p_steps: cfg.p_steps,
        channels,
    })
}
