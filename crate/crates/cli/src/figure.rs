//! Data grids behind the standard figures. Values are log det unless noted:
//! figure 3 is minus half the log det, figures 4 and 5 the free energy.

use lensdet::detcore::Coupling;
use lensdet::kernels::{GeneralLensSpec, LensSpec, Quotient};
use lensdet::thermo::{casimir_energy_real, thermodynamics, ThermoState};
use rayon::prelude::*;

use crate::args::{ContourArgs, FieldArg, FigureArgs, Format};
use crate::det::{evaluate, field_factor, CouplingChoice, Target};
use crate::error::CliError;
use crate::grid::{linspace, parse_grid, GridParam};
use crate::output::{emit, Table};
use crate::thermo::to_field;

pub fn default_field(n: u8) -> FieldArg {
    if (3..=5).contains(&n) {
        FieldArg::Complex
    } else {
        FieldArg::Real
    }
}

fn primary(n: u8) -> GridParam {
    match n {
        1 | 7 => GridParam::Q,
        2 => GridParam::Mu,
        3 => GridParam::Twist,
        4 | 5 => GridParam::Temperature,
        _ => GridParam::Nu,
    }
}

fn default_grid(n: u8) -> Vec<f64> {
    match n {
        1 => linspace(1.0, 8.0, 0.1),
        2 => linspace(0.0, 6.0, 0.1),
        3 => Ok((0..200).map(|i| i as f64 * 0.02).collect()),
        4 | 5 => linspace(0.02, 2.0, 0.02),
        6 => linspace(1.0, 28.0, 1.0),
        _ => linspace(1.0, 8.0, 0.25),
    }
    .expect("static grid")
}

fn lens_target(q: f64, r: f64) -> Result<Target, CliError> {
    Ok(Target::Space { quotient: Quotient::Lens(LensSpec::with_real_order(q, r)?) })
}

/// One grid point: row prefix, target and coupling for a log det evaluation.
type DetPoint = (Vec<f64>, Target, CouplingChoice);

fn det_rows(points: Vec<DetPoint>, scale: f64, flag_order: bool, contour: &ContourArgs, jobs: Option<usize>) -> Result<Vec<Vec<f64>>, CliError> {
    crate::parallel(jobs, || {
        points
            .par_iter()
            .map(|(prefix, target, coupling)| {
                let ev = evaluate(target, *coupling, contour)?;
                let mut row = prefix.clone();
                row.push(-scale * ev.zprime0);
                row.push(scale * ev.error);
                if flag_order {
                    row.push(if ev.non_integer_order { 1.0 } else { 0.0 });
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?
}

fn thermo_rows(points: Vec<(Vec<f64>, LensSpec, f64)>, field: FieldArg, jobs: Option<usize>) -> Result<Vec<Vec<f64>>, CliError> {
    crate::parallel(jobs, || {
        points
            .par_iter()
            .map(|(prefix, spec, temperature)| {
                let state = ThermoState::new(1.0 / temperature, to_field(field))?;
                let t = thermodynamics(spec, &state)?;
                // truncation bound of the winding sum
                let error = state.series_tol * (t.free_energy.abs() + state.field_factor() * casimir_energy_real(spec).abs());
                let mut row = prefix.clone();
                row.push(t.free_energy);
                row.push(error);
                Ok(row)
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?
}

pub fn figure_table(args: &FigureArgs) -> Result<Table, CliError> {
    let n = args.number;
    let grid = match &args.grid {
        Some(spec) => {
            let g = parse_grid(spec)?;
            if g.param != primary(n) {
                return Err(CliError::Usage(format!("figure {n} is gridded in {}", primary(n).name())));
            }
            g.values
        }
        None => default_grid(n),
    };
    let field = args.field.unwrap_or_else(|| default_field(n));
    let f = field_factor(field);
    let jobs = args.output.jobs;
    let contour = &args.contour;
    let shift = |a2: f64| CouplingChoice::Shift(Coupling::new(a2).expect("finite"));
    let (header, rows): (&[&str], _) = match n {
        1 => {
            let mut points = Vec::new();
            for a2 in [0.0, 0.25] {
                for &q in &grid {
                    points.push((vec![q, a2], lens_target(q, 0.0)?, shift(a2)));
                }
            }
            (&["q", "alpha2", "value", "error", "non_integer_order"], det_rows(points, f, true, contour, jobs)?)
        }
        2 => {
            let mut points = Vec::new();
            for q in [1.0, 2.0, 3.0] {
                for &mu in &grid {
                    points.push((vec![mu, q], lens_target(q, 0.0)?, CouplingChoice::Shift(Coupling::mass(mu))));
                }
            }
            (&["mu", "q", "value", "error"], det_rows(points, f, false, contour, jobs)?)
        }
        3 => {
            let q = 4.0;
            let points = grid
                .iter()
                .map(|&r| Ok((vec![r], lens_target(q, r.rem_euclid(q))?, CouplingChoice::Shift(Coupling::conformal3()))))
                .collect::<Result<Vec<_>, CliError>>()?;
            // minus half the log det
            (&["twist", "value", "error"], det_rows(points, -0.5 * f, false, contour, jobs)?)
        }
        4 => {
            let mut points = Vec::new();
            for q in [1u32, 2, 3] {
                for &t in &grid {
                    points.push((vec![t, q as f64], LensSpec::untwisted(q), t));
                }
            }
            (&["T", "q", "value", "error"], thermo_rows(points, field, jobs)?)
        }
        5 => {
            let mut points = Vec::new();
            for r in 0..4u32 {
                for &t in &grid {
                    points.push((vec![t, r as f64], LensSpec::new(4, r as f64)?, t));
                }
            }
            (&["T", "twist", "value", "error"], thermo_rows(points, field, jobs)?)
        }
        6 => {
            let q = 29;
            let points = grid
                .iter()
                .map(|&nu| {
                    if nu.fract() != 0.0 || nu < 1.0 {
                        return Err(CliError::Usage(format!("nu = {nu} is not a positive integer")));
                    }
                    let spec = GeneralLensSpec::new(q, 1, nu as u32 % q)?;
                    Ok((vec![nu], Target::Space { quotient: Quotient::General(spec) }, shift(0.0)))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            (&["nu", "value", "error"], det_rows(points, f, false, contour, jobs)?)
        }
        _ => {
            let mut points = Vec::new();
            for (a2, coupling) in [(1.0, CouplingChoice::Minimal), (0.0, shift(0.0))] {
                for &q in &grid {
                    points.push((vec![q, a2], lens_target(q, 0.0)?, coupling));
                }
            }
            (&["q", "alpha2", "value", "error", "non_integer_order"], det_rows(points, f, true, contour, jobs)?)
        }
    };
    let mut table = Table::new(header);
    table.rows = rows;
    Ok(table)
}

pub fn cmd_figure(args: &FigureArgs) -> Result<(), CliError> {
    if args.output.format == Some(Format::Json) {
        return Err(CliError::Usage("figure grids are emitted as CSV".into()));
    }
    emit(&figure_table(args)?.to_csv(), args.output.out.as_deref())
}
