use lensdet::contour::QuadratureError;
use lensdet::detcore::DetError;
use lensdet::kernels::KernelError;
use lensdet::polyhedral::PolyhedralError;
use lensdet::thermo::ThermoError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or inconsistent arguments; exit status 2.
    #[error("{0}")]
    Usage(String),
    /// The numerics did not deliver a trustworthy value; exit status 1.
    #[error("{0}")]
    Numerical(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::InvalidSpec(_) | KernelError::NonIntegral { .. } => CliError::Usage(e.to_string()),
            KernelError::PoleProximity { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        match e {
            QuadratureError::InvalidLine(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<DetError> for CliError {
    fn from(e: DetError) -> Self {
        match e {
            DetError::Kernel(k) => k.into(),
            DetError::Quadrature(q) => q.into(),
            DetError::InvalidCoupling(_) | DetError::Unsupported(_) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ThermoError> for CliError {
    fn from(e: ThermoError) -> Self {
        match e {
            ThermoError::TermCap { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<PolyhedralError> for CliError {
    fn from(e: PolyhedralError) -> Self {
        match e {
            PolyhedralError::Det(d) => d.into(),
            PolyhedralError::Thermo(t) => t.into(),
            PolyhedralError::Kernel(k) => k.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lensdet::contour::QuadratureResult;

    #[test]
    fn exit_codes() {
        let bad_spec: CliError = DetError::Kernel(KernelError::InvalidSpec("q".into())).into();
        assert_eq!(bad_spec.exit_code(), 2);
        let bad_line: CliError = QuadratureError::InvalidLine("Δ".into()).into();
        assert_eq!(bad_line.exit_code(), 2);
        let stuck = QuadratureResult { value: 0.0, abs_error_estimate: 1.0, evaluations: 10, converged: false };
        let diverged: CliError = DetError::Quadrature(QuadratureError::NonConvergence(stuck)).into();
        assert_eq!(diverged.exit_code(), 1);
        let capped: CliError = PolyhedralError::Thermo(ThermoError::TermCap { terms: 5 }).into();
        assert_eq!(capped.exit_code(), 1);
        let slow: CliError = ThermoError::SlowConvergence { beta: 1e-3, beta_min: 1e-2 }.into();
        assert_eq!(slow.exit_code(), 2);
    }
}
