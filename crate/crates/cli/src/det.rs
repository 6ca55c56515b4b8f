use lensdet::contour::{default_line, ContourLine};
use lensdet::detcore::{minimal_logdet, zprime0, Coupling, Quantity};
use lensdet::kernels::{GeneralLensSpec, HigherLensSpec, LensSpec, Quotient};
use lensdet::polyhedral::{decompose, PolyhedralGroup, RepLabel};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{ContourArgs, CouplingArgs, DetArgs, FieldArg, Format, NamedCoupling, QuotientArgs};
use crate::error::CliError;
use crate::grid::{parse_grid, GridParam};
use crate::output::{emit, to_json, ConventionEcho, Table, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Target {
    #[serde(rename = "quotient")]
    Space { quotient: Quotient },
    Polyhedral { group: PolyhedralGroup, rep: String, #[serde(skip)] label: RepLabel },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingChoice {
    /// `α² = 1` through the zero-mode subtraction.
    Minimal,
    Shift(Coupling),
}

impl CouplingChoice {
    pub fn alpha_sq(&self) -> f64 {
        match self {
            CouplingChoice::Minimal => 1.0,
            CouplingChoice::Shift(c) => c.alpha_sq(),
        }
    }
}

/// `Z'(0)` (or `Z̄'(0)` at minimal coupling) for a real scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub zprime0: f64,
    pub error: f64,
    pub quantity: Quantity,
    pub formula_extended: bool,
    pub non_integer_order: bool,
}

fn parse_nu(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("cannot parse --nu {s:?}"))))
        .collect()
}

fn integer_q(q: f64) -> Result<u32, CliError> {
    if q.fract() != 0.0 || q < 1.0 || q > u32::MAX as f64 {
        return Err(CliError::Usage(format!("this family needs a positive integer q, got {q}")));
    }
    Ok(q as u32)
}

pub fn resolve_target(args: &QuotientArgs) -> Result<Target, CliError> {
    if let Some(group) = args.poly {
        let label = args.rep.clone().unwrap_or_else(|| "1".parse().expect("trivial label"));
        return Ok(Target::Polyhedral { group, rep: label.to_string(), label });
    }
    let q = args.q.ok_or_else(|| CliError::Usage("give --q or --poly".into()))?;
    let quotient = match (&args.nu, args.e) {
        (None, None) => Quotient::Lens(LensSpec::with_real_order(q, args.twist)?),
        (None, Some(_)) => return Err(CliError::Usage("--e needs --nu".into())),
        (Some(nu), e) => {
            if args.twist != 0.0 {
                return Err(CliError::Usage("--twist applies to homogeneous lens spaces only".into()));
            }
            let nu = parse_nu(nu)?;
            let q = integer_q(q)?;
            match e {
                Some(e) if e != nu.len() => {
                    return Err(CliError::Usage(format!("--e {e} but {} rotation numbers", nu.len())));
                }
                Some(_) => Quotient::Higher(HigherLensSpec::new(q, nu)?),
                None if nu.len() == 2 => Quotient::General(GeneralLensSpec::new(q, nu[0], nu[1])?),
                None => Quotient::Higher(HigherLensSpec::new(q, nu)?),
            }
        }
    };
    Ok(Target::Space { quotient })
}

pub fn resolve_coupling(args: &CouplingArgs) -> Result<CouplingChoice, CliError> {
    Ok(match (args.coupling, args.alpha2, args.mass) {
        (Some(NamedCoupling::Minimal), _, _) => CouplingChoice::Minimal,
        (Some(NamedCoupling::Conformal3), _, _) => CouplingChoice::Shift(Coupling::conformal3()),
        (Some(NamedCoupling::Conformal4), _, _) | (None, None, None) => CouplingChoice::Shift(Coupling::conformal4()),
        (None, Some(a2), _) => CouplingChoice::Shift(Coupling::new(a2)?),
        (None, None, Some(mu)) => {
            if !mu.is_finite() {
                return Err(CliError::Usage(format!("mass {mu} is not finite")));
            }
            CouplingChoice::Shift(Coupling::mass(mu))
        }
    })
}

/// The default line for the quotient, with any user overrides applied.
pub fn contour_for(quotient: &Quotient, coupling: &Coupling, overrides: &ContourArgs) -> Result<Option<ContourLine>, CliError> {
    if overrides.delta.is_none() && overrides.abs_tol.is_none() && overrides.rel_tol.is_none() {
        return Ok(None);
    }
    let mut line = default_line(quotient, coupling)?;
    if let Some(delta) = overrides.delta {
        line = line.with_delta(delta);
    }
    let abs_tol = overrides.abs_tol.unwrap_or(line.abs_tol);
    let rel_tol = overrides.rel_tol.unwrap_or(line.rel_tol);
    if !(abs_tol > 0.0 && rel_tol > 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    Ok(Some(line.with_tolerances(abs_tol, rel_tol)))
}

pub fn evaluate(target: &Target, coupling: CouplingChoice, overrides: &ContourArgs) -> Result<Evaluation, CliError> {
    match target {
        Target::Space { quotient } => {
            let result = match coupling {
                CouplingChoice::Minimal => {
                    let spec = quotient
                        .as_lens()
                        .ok_or_else(|| CliError::Usage("minimal coupling is implemented for homogeneous lens spaces".into()))?;
                    let line = contour_for(quotient, &Coupling::conformal4(), overrides)?;
                    minimal_logdet(spec, line.as_ref())?
                }
                CouplingChoice::Shift(c) => {
                    let line = contour_for(quotient, &c, overrides)?;
                    zprime0(quotient, &c, line.as_ref())?
                }
            };
            Ok(Evaluation {
                zprime0: result.value,
                error: result.abs_error_estimate,
                quantity: result.quantity,
                formula_extended: result.formula_extended,
                non_integer_order: result.non_integer_order,
            })
        }
        Target::Polyhedral { group, label, .. } => {
            let CouplingChoice::Shift(c) = coupling else {
                return Err(CliError::Usage("minimal coupling is not available for polyhedral quotients".into()));
            };
            let (value, error) = decompose(*group, label)?.combine(|spec| {
                let quotient = Quotient::Lens(*spec);
                let line = contour_for(&quotient, &c, overrides).map_err(|e| {
                    lensdet::polyhedral::PolyhedralError::InvalidQuantity(e.to_string())
                })?;
                let r = zprime0(&quotient, &c, line.as_ref())?;
                Ok((r.value, r.abs_error_estimate))
            })?;
            Ok(Evaluation {
                zprime0: value,
                error,
                quantity: Quantity::ZPrime0,
                formula_extended: false,
                non_integer_order: false,
            })
        }
    }
}

pub fn field_factor(field: FieldArg) -> f64 {
    match field {
        FieldArg::Real => 1.0,
        FieldArg::Complex => 2.0,
    }
}

#[derive(Debug, Serialize)]
struct Flags {
    formula_extended: bool,
    non_integer_order: bool,
}

#[derive(Debug, Serialize)]
struct DetRecord<'a> {
    schema_version: u32,
    command: &'static str,
    convention: ConventionEcho,
    quantity: Quantity,
    target: &'a Target,
    alpha_sq: f64,
    value: f64,
    det: f64,
    logdet: f64,
    zprime0: f64,
    abs_error_estimate: f64,
    det_error: f64,
    flags: Flags,
}

/// Single evaluation as JSON or one CSV row.
pub fn det_output(args: &DetArgs) -> Result<String, CliError> {
    let target = resolve_target(&args.quotient)?;
    let coupling = resolve_coupling(&args.coupling)?;
    let f = field_factor(args.field);
    let ev = evaluate(&target, coupling, &args.contour)?;
    let zp = f * ev.zprime0;
    let err = f * ev.error;
    let det = (-zp).exp();
    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&DetRecord {
            schema_version: SCHEMA_VERSION,
            command: "det",
            convention: ConventionEcho::new(args.field == FieldArg::Complex),
            quantity: ev.quantity,
            target: &target,
            alpha_sq: coupling.alpha_sq(),
            value: det,
            det,
            logdet: -zp,
            zprime0: zp,
            abs_error_estimate: err,
            det_error: det * err,
            flags: Flags { formula_extended: ev.formula_extended, non_integer_order: ev.non_integer_order },
        }),
        Format::Csv => {
            let mut t = Table::new(&["det", "logdet", "zprime0", "error"]);
            t.rows.push(vec![det, -zp, zp, err]);
            Ok(t.to_csv())
        }
    }
}

/// `param,value,error` with value the log det.
pub fn sweep_table(args: &DetArgs, spec: &str) -> Result<Table, CliError> {
    let grid = parse_grid(spec)?;
    let coupling = resolve_coupling(&args.coupling)?;
    let f = field_factor(args.field);
    let base = &args.quotient;
    if base.poly.is_some() {
        return Err(CliError::Usage("polyhedral quotients have no sweep parameter".into()));
    }
    let targets: Vec<Target> = grid
        .values
        .iter()
        .map(|&x| {
            let mut point = base.clone();
            match grid.param {
                GridParam::Q => {
                    if base.nu.is_some() {
                        return Err(CliError::Usage("q sweeps are for homogeneous lens spaces".into()));
                    }
                    point.q = Some(x);
                }
                GridParam::Twist => {
                    let q = base.q.ok_or_else(|| CliError::Usage("twist sweep needs --q".into()))?;
                    // the twist is periodic with period q
                    point.twist = x.rem_euclid(q);
                }
                GridParam::Nu => {
                    let q = integer_q(base.q.ok_or_else(|| CliError::Usage("nu sweep needs --q".into()))?)?;
                    if x.fract() != 0.0 || x < 1.0 {
                        return Err(CliError::Usage(format!("nu = {x} is not a positive integer")));
                    }
                    point.nu = Some(format!("1,{}", x as u32 % q));
                }
                other => return Err(CliError::Usage(format!("det cannot sweep {}", other.name()))),
            }
            resolve_target(&point)
        })
        .collect::<Result<_, _>>()?;
    let values = crate::parallel(args.output.jobs, || {
        targets.par_iter().map(|t| evaluate(t, coupling, &args.contour)).collect::<Result<Vec<_>, _>>()
    })??;
    let mut table = Table::new(&["param", "value", "error"]);
    for (x, ev) in grid.values.iter().zip(values) {
        table.rows.push(vec![*x, -f * ev.zprime0, f * ev.error]);
    }
    Ok(table)
}

pub fn cmd_det(args: &DetArgs) -> Result<(), CliError> {
    let text = match &args.sweep {
        Some(spec) => {
            if args.output.format == Some(Format::Json) {
                return Err(CliError::Usage("sweeps are emitted as CSV".into()));
            }
            sweep_table(args, spec)?.to_csv()
        }
        None => det_output(args)?,
    };
    emit(&text, args.output.out.as_deref())
}
