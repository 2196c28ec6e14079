//! Data behind the three qubit figures, one CSV per panel plus an index of
//! the panel amplitudes.

use std::path::{Path, PathBuf};

use clap::ValueEnum;

use quncert::toymodel::{pauli, preset, qubit_scenario, standard_observables, tick_tock, Axis, ExtremumKind};
use quncert::uncertainty::{mt_series, Extended};
use quncert::{evolve, QubitPreset, Scenario};

use crate::error::CliError;
use crate::table::{format_number, Table};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
        }
    }

    /// `(panel, preset)` pairs.
    pub fn panels(self) -> &'static [(&'static str, &'static str)] {
        match self {
            FigureId::Fig1 => &[("A", "fig1A"), ("B", "fig1B"), ("C", "fig1C"), ("D", "fig1D")],
            FigureId::Fig2 => &[("A", "fig2A"), ("B", "fig2B"), ("C", "fig2C"), ("D", "fig2D")],
            FigureId::Fig3 => &[("A", "fig3AB"), ("B", "fig3AB"), ("C", "fig3CD"), ("D", "fig3CD")],
        }
    }
}

fn write_table(dir: &Path, file: &str, table: &Table, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let path = dir.join(file);
    std::fs::write(&path, table.to_bytes()?).map_err(|e| CliError::io(&path, e))?;
    written.push(path);
    Ok(())
}

fn setup(name: &str) -> Result<(QubitPreset, Scenario), CliError> {
    let p = preset(name)?;
    let s = qubit_scenario(&p, standard_observables())?;
    Ok((p, s))
}

fn index_table(id: FigureId) -> Result<Table, CliError> {
    let mut t = Table::new(["panel", "preset", "alpha1_re", "alpha1_im", "alpha2_re", "alpha2_im", "coherence"]);
    for &(panel, name) in id.panels() {
        let p: QubitPreset = preset(name)?;
        t.push(vec![
            panel.to_string(),
            name.to_string(),
            format_number(p.alpha1.re),
            format_number(p.alpha1.im),
            format_number(p.alpha2.re),
            format_number(p.alpha2.im),
            format_number(p.coherence().coherence),
        ]);
    }
    Ok(t)
}

/// Energy projector expectations `⟨↑z|…⟩`, `⟨↓z|…⟩`.
fn fig1_panel(name: &str) -> Result<Table, CliError> {
    let (p, s) = setup(name)?;
    let tr = evolve(&s)?;
    let (up, down) = (tr.means("sz_up")?, tr.means("sz_down")?);
    let mut t = Table::new(["t", "omega_t", "sz_up", "sz_down"]);
    for (i, &time) in tr.times.iter().enumerate() {
        t.push(vec![format_number(time), format_number(p.omega * time), format_number(up[i]), format_number(down[i])]);
    }
    Ok(t)
}

/// σx projector series and `⟨σx⟩` with tick/tock markers, plus the refined
/// extremum list.
fn fig2_panel(name: &str) -> Result<(Table, Table), CliError> {
    let (p, s) = setup(name)?;
    let tr = evolve(&s)?;
    let (up, down, sx) = (tr.means("sx_up")?, tr.means("sx_down")?, tr.means("sx")?);
    let extrema = tick_tock(&tr, "sx").map(|r| r.extrema).unwrap_or_default();
    let step = s.grid().step();

    let mut markers = vec![""; tr.len()];
    let mut ticks = Table::new(["kind", "t", "omega_t", "sx"]);
    for e in &extrema {
        let kind = match e.kind {
            ExtremumKind::Tick => "tick",
            ExtremumKind::Tock => "tock",
        };
        let nearest = ((e.t - s.grid().start) / step).round() as usize;
        markers[nearest.min(tr.len() - 1)] = kind;
        ticks.push(vec![kind.to_string(), format_number(e.t), format_number(p.omega * e.t), format_number(e.value)]);
    }

    let mut t = Table::new(["t", "omega_t", "sx_up", "sx_down", "sx", "marker"]);
    for (i, &time) in tr.times.iter().enumerate() {
        t.push(vec![
            format_number(time),
            format_number(p.omega * time),
            format_number(up[i]),
            format_number(down[i]),
            format_number(sx[i]),
            markers[i].to_string(),
        ]);
    }
    Ok((t, ticks))
}

/// `ΔT` in units of `1/ω` (`product = false`) or `ΔE·ΔT` in units of `ħ/2`.
fn fig3_panel(name: &str, product: bool) -> Result<Table, CliError> {
    let (p, s) = setup(name)?;
    let series = mt_series(&pauli(Axis::X), &s)?;
    let column = if product { "dE_dT_over_half_hbar" } else { "dT_times_omega" };
    let mut t = Table::new(["t", "omega_t", column]);
    for m in &series {
        let value = if product { m.product.map(|v| v / (p.hbar / 2.0)) } else { m.delta_t.map(|v| v * p.omega) };
        let cell = match value {
            Extended::Finite(v) => format_number(v),
            Extended::Infinite => "inf".to_string(),
        };
        t.push(vec![format_number(m.t), format_number(p.omega * m.t), cell]);
    }
    Ok(t)
}

/// Writes every panel of `id` into `dir` and returns the paths written.
pub fn write_figure(id: FigureId, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    let fig = id.name();
    write_table(dir, &format!("{fig}_panels.csv"), &index_table(id)?, &mut written)?;
    for &(panel, name) in id.panels() {
        let file = format!("{fig}{panel}.csv");
        match id {
            FigureId::Fig1 => write_table(dir, &file, &fig1_panel(name)?, &mut written)?,
            FigureId::Fig2 => {
                let (series, ticks) = fig2_panel(name)?;
                write_table(dir, &file, &series, &mut written)?;
                write_table(dir, &format!("{fig}{panel}_ticks.csv"), &ticks, &mut written)?;
            }
            FigureId::Fig3 => write_table(dir, &file, &fig3_panel(name, matches!(panel, "B" | "D"))?, &mut written)?,
        }
    }
    Ok(written)
}
