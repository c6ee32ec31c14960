use pssmp_core::exit_laws::{
    exit_density_one_sided, exit_density_two_sided, extrema_cdf_star, extrema_density_star, max_cdf_down, min_cdf_up,
    Direction, ExitLawQuery, ExitWindow, ExtremaFormula, Extremum, Window,
};
use pssmp_core::expfun::{
    density_i, density_i_star, entrance_density, neg_moment_i, tail_exponent_check, ExpFunctionalCase,
    ExpFunctionalModel, TailKind,
};
use pssmp_core::hitting::{hit_closed_ratio, hit_matrix_method, HitQuery};
use pssmp_core::scale::{psi_down, psi_up, ruin_probability, scale_fn, triple_law_cross_check};
use pssmp_core::stable::rogozin_overshoot_density;
use pssmp_core::{Error, LampertiKind, ScaleCase, SpectralCase, StableParams};

use crate::args::{Grid, RunConfig};
use crate::csv::{Cell, Table};
use crate::error::{CliError, Result};

pub const LAWS: [&str; 15] = [
    "rogozin-density",
    "exit-two-sided",
    "exit-one-sided",
    "min-cdf-up",
    "max-cdf-down",
    "extrema-star",
    "scale-fn",
    "psi",
    "ruin",
    "triple-law",
    "hit-two-point",
    "expfun-density",
    "expfun-moments",
    "entrance-density",
    "tails",
];

fn default_grid(law: &str) -> Grid {
    let (start, stop, points, log) = match law {
        "min-cdf-up" | "max-cdf-down" | "extrema-star" => (0.0, 5.0, 51, false),
        "psi" => (0.0, 5.0, 51, false),
        "scale-fn" | "ruin" => (0.0, 5.0, 51, false),
        "triple-law" => (0.25, 3.0, 12, false),
        "hit-two-point" => (0.1, 4.0, 40, false),
        "expfun-moments" => (1.0, 8.0, 8, false),
        "expfun-density" | "entrance-density" => (0.01, 100.0, 41, true),
        _ => (0.001, 10.0, 41, true),
    };
    Grid { start, stop, points, log }
}

fn direction(cfg: &RunConfig) -> Direction {
    if cfg.side == "down" {
        Direction::Down
    } else {
        Direction::Up
    }
}

fn spectral(cfg: &RunConfig) -> Result<SpectralCase> {
    let mut s = match cfg.m {
        Some(m) => SpectralCase::new(cfg.case, cfg.alpha, m)?,
        None => {
            let p = match cfg.case {
                ScaleCase::UpNeg | ScaleCase::DownNeg => StableParams::spectrally_negative(cfg.alpha, cfg.c_minus)?,
                ScaleCase::DownPos => StableParams::spectrally_positive(cfg.alpha, cfg.c_plus)?,
            };
            SpectralCase::from_params(cfg.case, &p)?
        }
    };
    if let Some(q) = cfg.q_ladder {
        s = s.with_q_ladder(q)?;
    }
    Ok(s)
}

fn expfun_model(cfg: &RunConfig) -> Result<ExpFunctionalModel> {
    let case = match cfg.kind {
        LampertiKind::Up => ExpFunctionalCase::UpSpectrallyNegative,
        LampertiKind::Star => ExpFunctionalCase::StarSpectrallyPositive,
        LampertiKind::Down => {
            return Err(Error::Unsupported("no closed-form law of the exponential functional for kind=down".into()).into())
        }
    };
    Ok(ExpFunctionalModel::from_jump_constant(case, cfg.alpha, cfg.c_minus)?)
}

fn num(x: f64) -> Cell {
    Cell::Num(x)
}

/// Tabulate `law` on the configured grid.
pub fn evaluate(law: &str, cfg: &RunConfig) -> Result<Table> {
    if !LAWS.contains(&law) {
        return Err(CliError::Usage(format!("unknown law '{law}'; known laws: {}", LAWS.join(", "))));
    }
    let grid = cfg.grid.unwrap_or_else(|| default_grid(law));
    let xs = grid.points();
    let p = cfg.params()?;
    let tol = cfg.tol;
    let mut t = match law {
        "rogozin-density" => {
            // Stable process from 1, overshoot above a = e^u before leaving (0, ∞).
            let a = cfg.u.exp();
            let mut t = Table::new(&["y", "density"]);
            for &y in &xs {
                t.rows.push(vec![num(y), num(rogozin_overshoot_density(&p, a, 1.0, y)?)]);
            }
            t.meta("a", a);
            t
        }
        "exit-two-sided" | "exit-one-sided" => {
            let dir = direction(cfg);
            let window = if law == "exit-two-sided" {
                Window::TwoSided(ExitWindow::new(cfg.v, cfg.u)?)
            } else if dir == Direction::Up {
                Window::Above(cfg.u)
            } else {
                Window::Below(cfg.v)
            };
            let mut t = Table::new(&["theta", "density"]);
            for &theta in &xs {
                let q = ExitLawQuery { kind: cfg.kind, params: p, window, direction: dir, theta };
                let d = if law == "exit-two-sided" { exit_density_two_sided(&q)? } else { exit_density_one_sided(&q)? };
                t.rows.push(vec![num(theta), num(d)]);
            }
            t.meta("side", &cfg.side);
            t
        }
        "min-cdf-up" | "max-cdf-down" => {
            let mut t = Table::new(&["z", "cdf"]);
            for &z in &xs {
                let v = if law == "min-cdf-up" { min_cdf_up(&p, z)? } else { max_cdf_down(&p, z)? };
                t.rows.push(vec![num(z), num(v)]);
            }
            t
        }
        "extrema-star" => {
            let mut t = Table::new(&["z", "max_density", "max_cdf", "min_density", "min_cdf"]);
            for &z in &xs {
                t.rows.push(vec![
                    num(z),
                    num(extrema_density_star(&p, z, Extremum::Max, ExtremaFormula::Derived)?),
                    num(extrema_cdf_star(&p, z, Extremum::Max)?),
                    num(extrema_density_star(&p, z, Extremum::Min, ExtremaFormula::Derived)?),
                    num(extrema_cdf_star(&p, z, Extremum::Min)?),
                ]);
            }
            t
        }
        "scale-fn" | "psi" | "ruin" => {
            let s = spectral(cfg)?;
            let mut t = Table::new(match law {
                "scale-fn" => &["x", "w"],
                "psi" => &["theta", "psi"],
                _ => &["y", "probability"],
            });
            for &x in &xs {
                let v = match law {
                    "scale-fn" => scale_fn(&s, x)?,
                    "psi" => match s.case {
                        ScaleCase::UpNeg => psi_up(&s, x)?,
                        ScaleCase::DownNeg => psi_down(&s, x)?,
                        ScaleCase::DownPos => {
                            return Err(Error::Unsupported("psi is tabulated for up-neg and down-neg".into()).into())
                        }
                    },
                    // Reach y before going below v.
                    _ => ruin_probability(&s, -cfg.v, x)?,
                };
                t.rows.push(vec![num(x), num(v)]);
            }
            t.meta("case", format!("{:?}", s.case));
            t.meta("m", s.m);
            t
        }
        "triple-law" => {
            let s = spectral(cfg)?;
            let mut t = Table::new(&["barrier", "k", "k_reduced", "k_quoted"]);
            for &len in &xs {
                let b = if s.case == ScaleCase::DownPos { len } else { -len };
                let c = triple_law_cross_check(&s, b)?;
                t.rows.push(vec![num(b), num(c.k_quadrature), num(c.k_reduced), c.k_printed.map_or(Cell::Empty, num)]);
            }
            t.meta("case", format!("{:?}", s.case));
            t
        }
        "hit-two-point" => {
            // Hit a = e^v before b = e^u, from x.
            let (a, b) = (cfg.v.exp(), cfg.u.exp());
            let mut t = Table::new(&["x", "matrix", "closed_ratio"]);
            for &x in &xs {
                let q = HitQuery::new(cfg.alpha, x, a, b)?;
                t.rows.push(vec![num(x), num(hit_matrix_method(&q)?), num(hit_closed_ratio(&q)?)]);
            }
            t.meta("a", a);
            t.meta("b", b);
            t
        }
        "expfun-density" | "entrance-density" => {
            let md = expfun_model(cfg)?;
            let mut t = Table::new(&["x", "density", "error_bound"]);
            for &x in &xs {
                let s = match (law, md.case) {
                    ("entrance-density", _) => entrance_density(&md, cfg.time, x, tol)?,
                    (_, ExpFunctionalCase::UpSpectrallyNegative) => density_i(&md, x, tol)?,
                    _ => density_i_star(&md, x, tol)?,
                };
                t.rows.push(vec![num(x), num(s.value), num(s.error_bound())]);
            }
            t.meta("c", md.c);
            if law == "entrance-density" {
                t.meta("time", cfg.time);
            }
            t
        }
        "expfun-moments" => {
            let md = expfun_model(cfg)?;
            let mut t = Table::new(&["k", "negative_moment"]);
            for &k in &xs {
                if k < 1.0 || k.fract() != 0.0 {
                    return Err(CliError::Usage(format!("moment orders must be positive integers, got {k}")));
                }
                t.rows.push(vec![Cell::Int(k as u64), num(neg_moment_i(&md, k as u32)?)]);
            }
            t.meta("c", md.c);
            t
        }
        "tails" => {
            let md = expfun_model(cfg)?;
            let which = if md.case == ExpFunctionalCase::UpSpectrallyNegative { TailKind::UpRight } else { TailKind::StarLeft };
            let fit = tail_exponent_check(&md, which)?;
            let mut t = Table::new(&["x", "value"]);
            for (x, v) in fit.xs.iter().zip(&fit.values) {
                t.rows.push(vec![num(*x), num(*v)]);
            }
            t.meta("tail", format!("{which:?}"));
            t.meta("fitted_slope", fit.slope);
            t.meta("stated_exponent", fit.stated_exponent);
            return Ok(with_metadata(t, law, cfg, None));
        }
        _ => unreachable!("law list checked above"),
    };
    t = with_metadata(t, law, cfg, Some(&grid));
    Ok(t)
}

fn with_metadata(mut t: Table, law: &str, cfg: &RunConfig, grid: Option<&Grid>) -> Table {
    let mut meta = cfg.metadata();
    meta.insert(2, ("law".into(), law.into()));
    if let Some(g) = grid {
        meta.push(("grid".into(), g.spec()));
    }
    meta.append(&mut t.metadata);
    t.metadata = meta;
    t
}
