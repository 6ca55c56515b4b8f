use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridParam {
    Q,
    Twist,
    Nu,
    Mu,
    Temperature,
}

impl GridParam {
    pub fn name(self) -> &'static str {
        match self {
            GridParam::Q => "q",
            GridParam::Twist => "twist",
            GridParam::Nu => "nu",
            GridParam::Mu => "mu",
            GridParam::Temperature => "T",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub param: GridParam,
    pub values: Vec<f64>,
}

/// Points `start + i·step` up to and including `end` (to within 10⁻⁹ steps).
pub fn linspace(start: f64, end: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step.is_finite() && step > 0.0 && start.is_finite() && end.is_finite() && end >= start) {
        return Err(CliError::Usage(format!("bad grid {start}:{end}:{step}")));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(CliError::Usage(format!("grid {start}:{end}:{step} has more than 10⁶ points")));
    }
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// Parses `name=START:END[:STEP]`; the step defaults to 1.
pub fn parse_grid(spec: &str) -> Result<Grid, CliError> {
    let bad = || CliError::Usage(format!("cannot parse grid {spec:?}; expected name=START:END[:STEP]"));
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    let param = match name.trim() {
        "q" => GridParam::Q,
        "twist" | "r" => GridParam::Twist,
        "nu" => GridParam::Nu,
        "mu" | "mass" => GridParam::Mu,
        "T" | "temperature" => GridParam::Temperature,
        other => return Err(CliError::Usage(format!("unknown grid parameter {other:?}"))),
    };
    let parts: Vec<f64> = range.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let (start, end, step) = match parts[..] {
        [a, b] => (a, b, 1.0),
        [a, b, s] => (a, b, s),
        _ => return Err(bad()),
    };
    Ok(Grid { param, values: linspace(start, end, step)? })
}
