//! Binary polyhedral quotients, with or without a flat bundle, expressed as
//! signed combinations of twisted cyclic lens-space blocks.
//!
//! `S(r; Z_k)` denotes the spectral quantity of the lens space of order `k`
//! with twist `r`, `k` being the order of the generator in the binary group.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detcore::{z_at_1, zprime0, Coupling, DetError, Quantity, SpectralResult};
use crate::kernels::{degeneracies_oracle, DegeneracySpec, KernelError, LensSpec, Quotient};
use crate::thermo::{free_energy, ThermoError, ThermoState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyhedralError {
    #[error("representation {rep} is not supported for the {group} group")]
    Unsupported { group: PolyhedralGroup, rep: RepLabel },
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error(transparent)]
    Det(#[from] DetError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("{0}")]
    InvalidQuantity(String),
}

/// Binary tetrahedral, octahedral or icosahedral group `(2, 3, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolyhedralGroup {
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl PolyhedralGroup {
    pub fn symbol(self) -> (u32, u32, u32) {
        (2, 3, self.n())
    }

    fn n(self) -> u32 {
        match self {
            PolyhedralGroup::Tetrahedral => 3,
            PolyhedralGroup::Octahedral => 4,
            PolyhedralGroup::Icosahedral => 5,
        }
    }

    pub fn order(self) -> u32 {
        match self {
            PolyhedralGroup::Tetrahedral => 24,
            PolyhedralGroup::Octahedral => 48,
            PolyhedralGroup::Icosahedral => 120,
        }
    }

    /// Orders of `R`, `S`, `T` and the central element `RST`.
    pub fn generator_orders(self) -> [u32; 4] {
        [4, 6, 2 * self.n(), 2]
    }
}

impl fmt::Display for PolyhedralGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PolyhedralGroup::Tetrahedral => "T",
            PolyhedralGroup::Octahedral => "O",
            PolyhedralGroup::Icosahedral => "I",
        };
        f.write_str(name)
    }
}

impl FromStr for PolyhedralGroup {
    type Err = PolyhedralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "T" | "t" | "tetrahedral" => Ok(PolyhedralGroup::Tetrahedral),
            "O" | "o" | "octahedral" => Ok(PolyhedralGroup::Octahedral),
            "I" | "i" | "icosahedral" => Ok(PolyhedralGroup::Icosahedral),
            other => Err(PolyhedralError::Parse(other.to_string())),
        }
    }
}

/// Irreducible representations used for flat bundles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Irrep {
    Trivial,
    /// The defining SU(2) doublet `2_s`.
    Spinor,
    /// Its Galois conjugate `2_s'` (icosahedral only).
    SpinorPrime,
    Three,
    ThreePrime,
}

impl Irrep {
    pub fn dimension(self) -> u32 {
        match self {
            Irrep::Trivial => 1,
            Irrep::Spinor | Irrep::SpinorPrime => 2,
            Irrep::Three | Irrep::ThreePrime => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Irrep::Trivial => "1",
            Irrep::Spinor => "2s",
            Irrep::SpinorPrime => "2sp",
            Irrep::Three => "3",
            Irrep::ThreePrime => "3p",
        }
    }
}

/// A direct sum of irreps, written like `1+2s` or `3p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepLabel {
    components: Vec<Irrep>,
}

impl RepLabel {
    pub fn irrep(irrep: Irrep) -> Self {
        RepLabel { components: vec![irrep] }
    }

    pub fn sum(components: Vec<Irrep>) -> Self {
        assert!(!components.is_empty(), "a representation needs at least one component");
        RepLabel { components }
    }

    pub fn components(&self) -> &[Irrep] {
        &self.components
    }

    pub fn dimension(&self) -> u32 {
        self.components.iter().map(|c| c.dimension()).sum()
    }
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.components.iter().map(|c| c.name()).collect();
        f.write_str(&names.join("+"))
    }
}

impl FromStr for RepLabel {
    type Err = PolyhedralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let components = s
            .split('+')
            .map(|part| match part.trim() {
                "1" => Ok(Irrep::Trivial),
                "2s" | "2_s" => Ok(Irrep::Spinor),
                "2sp" | "2s'" | "2_s'" => Ok(Irrep::SpinorPrime),
                "3" => Ok(Irrep::Three),
                "3p" | "3'" => Ok(Irrep::ThreePrime),
                _ => Err(PolyhedralError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RepLabel { components })
    }
}

/// `coefficient × S(twist; Z_order)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub coefficient: Ratio<i64>,
    pub order: u32,
    pub twist: u32,
}

impl Block {
    fn new(numer: i64, denom: i64, order: u32, twist: u32) -> Self {
        Block { coefficient: Ratio::new(numer, denom), order, twist }
    }

    pub fn lens(&self) -> LensSpec {
        LensSpec::new(self.order, self.twist as f64).expect("decomposition twists are below the block order")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicDecomposition {
    pub blocks: Vec<Block>,
}

/// A linear spectral functional evaluated block by block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Functional {
    ZPrime0,
    ZAt1,
    FreeEnergy { beta: f64 },
}

pub fn decompose(group: PolyhedralGroup, rep: &RepLabel) -> Result<CyclicDecomposition, PolyhedralError> {
    let two_n = 2 * group.n();
    let icosahedral = group == PolyhedralGroup::Icosahedral;
    let mut blocks = Vec::new();
    for &irrep in rep.components() {
        match irrep {
            Irrep::Trivial | Irrep::Spinor => {
                let r = if irrep == Irrep::Spinor { 1 } else { 0 };
                blocks.extend([
                    Block::new(1, 2, 4, r),
                    Block::new(1, 2, 6, r),
                    Block::new(1, 2, two_n, r),
                    Block::new(-1, 2, 2, r),
                ]);
            }
            Irrep::SpinorPrime if icosahedral => {
                blocks.extend([Block::new(1, 1, 6, 1), Block::new(-1, 2, 10, 5), Block::new(-1, 1, 10, 1)]);
            }
            Irrep::ThreePrime if icosahedral => {
                blocks.extend([Block::new(1, 2, 4, 2), Block::new(-1, 1, 10, 2)]);
            }
            Irrep::Three if icosahedral => {
                blocks.extend([Block::new(1, 2, 4, 2), Block::new(-1, 1, 10, 4)]);
            }
            _ => return Err(PolyhedralError::Unsupported { group, rep: rep.clone() }),
        }
    }
    Ok(CyclicDecomposition { blocks })
}

impl CyclicDecomposition {
    /// `Σ coefficient × f(block)` with absolute errors combined as
    /// `Σ |coefficient| × error`. Each distinct block is evaluated once.
    pub fn combine<F>(&self, mut f: F) -> Result<(f64, f64), PolyhedralError>
    where
        F: FnMut(&LensSpec) -> Result<(f64, f64), PolyhedralError>,
    {
        let mut cache: BTreeMap<(u32, u32), (f64, f64)> = BTreeMap::new();
        let (mut value, mut error) = (0.0, 0.0);
        for block in &self.blocks {
            let key = (block.order, block.twist);
            let (v, e) = match cache.get(&key) {
                Some(&hit) => hit,
                None => {
                    let computed = f(&block.lens())?;
                    cache.insert(key, computed);
                    computed
                }
            };
            let c = *block.coefficient.numer() as f64 / *block.coefficient.denom() as f64;
            value += c * v;
            error += c.abs() * e;
        }
        Ok((value, error))
    }

    /// Level degeneracies `l = 1..=l_max` implied by the decomposition, exact.
    pub fn degeneracies(&self, l_max: usize) -> Result<Vec<Ratio<i64>>, PolyhedralError> {
        let mut out = vec![Ratio::from_integer(0); l_max];
        for block in &self.blocks {
            let spec = block.lens();
            let d = degeneracies_oracle(DegeneracySpec::Homogeneous(&spec), l_max)?;
            for (acc, dl) in out.iter_mut().zip(d) {
                *acc += block.coefficient * dl;
            }
        }
        Ok(out)
    }
}

/// A spectral functional of the polyhedral quotient with a flat bundle.
pub fn evaluate(
    group: PolyhedralGroup,
    rep: &RepLabel,
    functional: Functional,
    coupling: &Coupling,
) -> Result<SpectralResult, PolyhedralError> {
    let decomposition = decompose(group, rep)?;
    let (value, error, quantity) = match functional {
        Functional::ZPrime0 => {
            let (v, e) = decomposition.combine(|spec| {
                let r = zprime0(&Quotient::Lens(*spec), coupling, None)?;
                Ok((r.value, r.abs_error_estimate))
            })?;
            (v, e, Quantity::ZPrime0)
        }
        Functional::ZAt1 => {
            let (v, e) = decomposition.combine(|spec| {
                let r = z_at_1(spec, coupling, None)?;
                Ok((r.value, r.abs_error_estimate))
            })?;
            (v, e, Quantity::ZAt1)
        }
        Functional::FreeEnergy { beta } => {
            if coupling.alpha_sq() != 0.0 {
                return Err(PolyhedralError::InvalidQuantity(
                    "free energies are implemented for the conformal (α² = 0) scalar only".into(),
                ));
            }
            let state = ThermoState::real(beta)?;
            let (v, e) = decomposition.combine(|spec| Ok((free_energy(spec, &state)?, 0.0)))?;
            (v, e, Quantity::FreeEnergy)
        }
    };
    let mut result = SpectralResult::new(value, error, quantity);
    result.coupling = Some(*coupling);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(PolyhedralGroup::Tetrahedral.order(), 24);
        assert_eq!(PolyhedralGroup::Octahedral.order(), 48);
        assert_eq!(PolyhedralGroup::Icosahedral.order(), 120);
        assert_eq!(PolyhedralGroup::Icosahedral.generator_orders(), [4, 6, 10, 2]);
    }

    #[test]
    fn parse_labels() {
        let rep: RepLabel = "1+2sp".parse().unwrap();
        assert_eq!(rep.components(), &[Irrep::Trivial, Irrep::SpinorPrime]);
        assert_eq!(rep.dimension(), 3);
        assert_eq!(rep.to_string(), "1+2sp");
        assert!("4".parse::<RepLabel>().is_err());
        assert_eq!("I".parse::<PolyhedralGroup>().unwrap(), PolyhedralGroup::Icosahedral);
    }

    #[test]
    fn reference_blocks() {
        let i = PolyhedralGroup::Icosahedral;
        let d = decompose(i, &RepLabel::irrep(Irrep::Trivial)).unwrap();
        assert_eq!(
            d.blocks,
            vec![Block::new(1, 2, 4, 0), Block::new(1, 2, 6, 0), Block::new(1, 2, 10, 0), Block::new(-1, 2, 2, 0)]
        );
        let d = decompose(i, &RepLabel::irrep(Irrep::Three)).unwrap();
        assert_eq!(d.blocks, vec![Block::new(1, 2, 4, 2), Block::new(-1, 1, 10, 4)]);
        let t = PolyhedralGroup::Tetrahedral;
        let single = decompose(t, &RepLabel::irrep(Irrep::Trivial)).unwrap();
        let double = decompose(t, &"1+1".parse().unwrap()).unwrap();
        assert_eq!(double.blocks.len(), 2 * single.blocks.len());
        assert!(decompose(PolyhedralGroup::Octahedral, &RepLabel::irrep(Irrep::Three)).is_err());
    }

    #[test]
    fn trivial_bundle_degeneracies_are_integral() {
        for g in [PolyhedralGroup::Tetrahedral, PolyhedralGroup::Octahedral, PolyhedralGroup::Icosahedral] {
            let d = decompose(g, &RepLabel::irrep(Irrep::Trivial)).unwrap().degeneracies(30).unwrap();
            assert_eq!(d[0], Ratio::from_integer(1));
            assert!(d.iter().all(|x| x.is_integer() && *x >= Ratio::from_integer(0)));
        }
    }
}
