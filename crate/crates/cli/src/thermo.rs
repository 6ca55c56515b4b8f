use lensdet::kernels::LensSpec;
use lensdet::thermo::{casimir_energy_real, thermodynamics, Field, ThermoState};
use serde::Serialize;

use crate::args::{FieldArg, Format, ThermoArgs};
use crate::error::CliError;
use crate::output::{emit, to_json, ConventionEcho, Table, SCHEMA_VERSION};

pub fn to_field(field: FieldArg) -> Field {
    match field {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
    }
}

#[derive(Debug, Serialize)]
struct ThermoRecord {
    schema_version: u32,
    command: &'static str,
    convention: ConventionEcho,
    lens: LensSpec,
    beta: f64,
    temperature: f64,
    free_energy: f64,
    internal_energy: f64,
    entropy: f64,
    casimir_energy: f64,
    terms: usize,
}

pub fn thermo_output(args: &ThermoArgs) -> Result<String, CliError> {
    let beta = match (args.beta, args.temperature) {
        (Some(b), None) => b,
        (None, Some(t)) if t > 0.0 => 1.0 / t,
        _ => return Err(CliError::Usage("give a positive --beta or --temperature".into())),
    };
    let spec = LensSpec::new(args.q.unwrap_or(1), args.twist)?;
    let state = ThermoState::new(beta, to_field(args.field))?;
    let t = thermodynamics(&spec, &state)?;
    match args.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&ThermoRecord {
            schema_version: SCHEMA_VERSION,
            command: "thermo",
            convention: ConventionEcho::new(args.field == FieldArg::Complex),
            lens: spec,
            beta,
            temperature: 1.0 / beta,
            free_energy: t.free_energy,
            internal_energy: t.internal_energy,
            entropy: t.entropy,
            casimir_energy: state.field_factor() * casimir_energy_real(&spec),
            terms: t.terms,
        }),
        Format::Csv => {
            let mut table = Table::new(&["beta", "free_energy", "internal_energy", "entropy"]);
            table.rows.push(vec![beta, t.free_energy, t.internal_energy, t.entropy]);
            Ok(table.to_csv())
        }
    }
}

pub fn cmd_thermo(args: &ThermoArgs) -> Result<(), CliError> {
    emit(&thermo_output(args)?, args.output.out.as_deref())
}
