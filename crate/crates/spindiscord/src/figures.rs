//! Data tables behind each figure.

use rayon::prelude::*;
use serde_json::json;

use spindiscord_core::correlators::{delta_rows, discord_at, pair_correlations, RATIO_EPS};
use spindiscord_core::distribution::{moments_at, sample_distribution, Scheme};
use spindiscord_core::scaling::{normalized_discord_curve, pair_gamma, Pair, ScalingParams};
use spindiscord_core::spinchain::GroundStateSource;
use spindiscord_core::{two_site_rdm, Error, Result};

use crate::cache::CachedSolver;
use crate::output::{Cell, Table};

/// A table together with the error that cut it short, if any.
#[derive(Debug)]
pub struct FigureOutput {
    pub table: Table,
    pub error: Option<Error>,
}

impl FigureOutput {
    fn complete(table: Table) -> Self {
        FigureOutput { table, error: None }
    }
}

/// Solve-dependent work for one anisotropy.
struct DeltaResult {
    rows: Vec<Vec<Cell>>,
    /// `(delta, energy, residual)` when a solve happened.
    solve: Option<(f64, f64, f64)>,
}

/// Runs `work` for every anisotropy in parallel and keeps results in grid
/// order up to the first failure.
fn sweep<F>(solver: &CachedSolver, deltas: &[f64], work: F) -> (Vec<DeltaResult>, Option<Error>)
where
    F: Fn(&mut CachedSolver, f64) -> Result<DeltaResult> + Sync,
{
    let results: Vec<Result<DeltaResult>> = deltas
        .par_iter()
        .map(|&d| {
            let mut s = solver.clone();
            work(&mut s, d)
        })
        .collect();
    let mut done = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(r) => done.push(r),
            Err(e) => return (done, Some(e)),
        }
    }
    (done, None)
}

fn finish(mut table: Table, results: Vec<DeltaResult>, error: Option<Error>) -> FigureOutput {
    let mut solves = Vec::new();
    for r in results {
        table.rows.extend(r.rows);
        if let Some((delta, energy, residual)) = r.solve {
            solves.push(json!({"delta": delta, "energy": energy, "residual": residual}));
        }
    }
    table.provenance.insert("solves".into(), json!(solves));
    if let Some(e) = &error {
        table.incomplete = Some(e.to_string());
    }
    FigureOutput { table, error }
}

/// Normalized discord against reduced temperature for a nearest-neighbour
/// and a far pair.
pub fn fig1(params: &ScalingParams, ts: &[f64]) -> Result<FigureOutput> {
    let mut table = Table::new(&["t", "pair", "normalized_discord", "gamma_d"]);
    for pair in [Pair::NearestNeighbour, Pair::Far] {
        for (t, d) in normalized_discord_curve(params, ts, pair)? {
            table.push(vec![
                t.into(),
                pair.as_str().into(),
                d.into(),
                pair_gamma(params, t, pair)?.into(),
            ]);
        }
    }
    table.provenance.insert(
        "params".into(),
        json!({
            "alpha": params.alpha,
            "nu": params.nu,
            "xi0": params.xi0,
            "r": params.r,
            "form": format!("{:?}", params.form),
            "gamma_c": params.gamma_c,
            "gamma_0": params.gamma_0,
        }),
    );
    Ok(FigureOutput::complete(table))
}

/// Discord against separation `r = 1..=N/2`, with the symmetric-state closed
/// form next to it.
pub fn fig2(solver: &CachedSolver, n_sites: usize, deltas: &[f64]) -> FigureOutput {
    let table = Table::new(&[
        "delta", "r", "discord", "gamma_d", "gamma_o", "k", "closed_form", "basis",
    ]);
    let (results, error) = sweep(solver, deltas, |s, delta| {
        if delta <= -1.0 {
            return Err(Error::FerromagneticRegime(delta));
        }
        let gs = s.ground_state(n_sites, delta)?;
        let mut rows = Vec::new();
        for r in 1..=n_sites / 2 {
            let p = discord_at(&gs, r)?;
            rows.push(vec![
                delta.into(),
                r.into(),
                p.discord.into(),
                p.gamma_d.into(),
                p.gamma_o.into(),
                p.k.into(),
                p.closed_form.into(),
                p.chosen_theta.as_str().into(),
            ]);
        }
        Ok(DeltaResult {
            rows,
            solve: Some((delta, gs.energy, gs.residual)),
        })
    });
    finish(table, results, error)
}

/// Discord against anisotropy for several separations. `Δ ≤ -1` rows carry
/// `D = 0` and no basis.
pub fn fig3(solver: &CachedSolver, n_sites: usize, deltas: &[f64], rs: &[usize]) -> FigureOutput {
    let table = Table::new(&["delta", "r", "discord", "k", "basis"]);
    let (results, error) = sweep(solver, deltas, |s, delta| {
        let rows = delta_rows(s, n_sites, delta, rs)?;
        Ok(DeltaResult {
            rows: rows
                .into_iter()
                .map(|row| {
                    vec![
                        row.delta.into(),
                        row.r.into(),
                        row.discord.into(),
                        row.k.into(),
                        row.chosen_theta.map(|c| c.as_str()).into(),
                    ]
                })
                .collect(),
            solve: None,
        })
    });
    finish(table, results, error)
}

/// `k = Γᴼ/Γᴰ` against anisotropy. Points without a unique ground state are
/// skipped; vanishing `Γᴰ` leaves `k` empty.
pub fn fig4(solver: &CachedSolver, n_sites: usize, deltas: &[f64], rs: &[usize]) -> FigureOutput {
    let table = Table::new(&["delta", "r", "k", "gamma_d", "gamma_o"]);
    let (results, error) = sweep(solver, deltas, |s, delta| {
        if delta <= -1.0 {
            return Ok(DeltaResult {
                rows: Vec::new(),
                solve: None,
            });
        }
        let gs = s.ground_state(n_sites, delta)?;
        let mut rows = Vec::new();
        for &r in rs {
            let c = pair_correlations(&gs, 1, 1 + r)?;
            let k = (c.gamma_d.abs() >= RATIO_EPS).then(|| c.gamma_o.re / c.gamma_d);
            rows.push(vec![
                delta.into(),
                r.into(),
                k.into(),
                c.gamma_d.into(),
                c.gamma_o.re.into(),
            ]);
        }
        Ok(DeltaResult {
            rows,
            solve: Some((delta, gs.energy, gs.residual)),
        })
    });
    finish(table, results, error)
}

/// Histogram of the conditional entropy for the pair `(1, 1 + r)`.
pub fn fig5(
    solver: &mut CachedSolver,
    n_sites: usize,
    delta: f64,
    r: usize,
    scheme: Scheme,
) -> Result<FigureOutput> {
    let gs = solver.ground_state(n_sites, delta)?;
    let s = two_site_rdm(&gs, 1, 1 + r)?;
    let h = sample_distribution(&s, scheme)?;
    let mut table = Table::new(&["bin_left", "bin_right", "mass"]);
    for (l, rr, m) in h.rows() {
        table.push(vec![l.into(), rr.into(), m.into()]);
    }
    let seed = match scheme {
        Scheme::UniformSphere { seed, .. } => Some(seed),
        _ => None,
    };
    let peaks: Vec<_> = h
        .peaks()
        .into_iter()
        .map(|(b, m)| json!({"bin_left": b as f64 * h.bin_width, "mass": m}))
        .collect();
    table.provenance.insert(
        "summary".into(),
        json!({
            "n_sites": n_sites,
            "delta": delta,
            "r": r,
            "mean": h.mean,
            "variance": h.variance,
            "min": h.min_c,
            "max": h.max_c,
            "bin_width": h.bin_width,
            "n_samples": h.n_samples,
            "scheme": h.scheme.name(),
            "seed": seed,
            "peaks": peaks,
            "energy": gs.energy,
            "residual": gs.residual,
        }),
    );
    Ok(FigureOutput::complete(table))
}

/// Mean, variance and extrema of the conditional entropy against anisotropy.
pub fn fig6(
    solver: &CachedSolver,
    n_sites: usize,
    deltas: &[f64],
    rs: &[usize],
    scheme: Scheme,
) -> FigureOutput {
    let table = Table::new(&["delta", "r", "mean", "variance", "min_c", "max_c"]);
    let (results, error) = sweep(solver, deltas, |s, delta| {
        if delta <= -1.0 {
            return Ok(DeltaResult {
                rows: Vec::new(),
                solve: None,
            });
        }
        let rows = moments_at(s, n_sites, delta, rs, scheme)?;
        Ok(DeltaResult {
            rows: rows
                .into_iter()
                .map(|m| {
                    vec![
                        m.delta.into(),
                        m.r.into(),
                        m.mean.into(),
                        m.variance.into(),
                        m.min_c.into(),
                        m.max_c.into(),
                    ]
                })
                .collect(),
            solve: None,
        })
    });
    finish(table, results, error)
}
