use serde::Serialize;

use super::{hhat_wave_residual, lichnerowicz_residual, vorticity_evolution_residual, GridField4, Residual};
use crate::error::Result;
use crate::registry::Registry;
use crate::thermo::ThermalClosure;

/// Summary of one residual evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub check: String,
    pub max_norm: f64,
    pub points: usize,
    pub time_slices: [usize; 2],
    pub normalization_defect: f64,
    pub notes: Vec<String>,
}

/// A residual identity that sampled solutions should satisfy.
pub trait ResidualCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn residual(&self, field: &GridField4, closure: Option<&dyn ThermalClosure>) -> Result<Residual>;
    fn notes(&self) -> Vec<String> {
        Vec::new()
    }

    fn evaluate(&self, field: &GridField4, closure: Option<&dyn ThermalClosure>) -> Result<ResidualReport> {
        let r = self.residual(field, closure)?;
        let (a, b) = field.geom.valid_slices();
        Ok(ResidualReport {
            check: self.name().to_string(),
            max_norm: r.max_norm,
            points: field.geom.valid_points().len(),
            time_slices: [a, b],
            normalization_defect: field.normalization_defect(),
            notes: self.notes(),
        })
    }
}

pub struct Lichnerowicz;
pub struct VortEvo;
pub struct HhatWave;

impl ResidualCheck for Lichnerowicz {
    fn name(&self) -> &'static str {
        "lichnerowicz"
    }
    fn residual(&self, field: &GridField4, closure: Option<&dyn ThermalClosure>) -> Result<Residual> {
        lichnerowicz_residual(field, closure)
    }
}

impl ResidualCheck for VortEvo {
    fn name(&self) -> &'static str {
        "vort-evo"
    }
    fn residual(&self, field: &GridField4, closure: Option<&dyn ThermalClosure>) -> Result<Residual> {
        vorticity_evolution_residual(field, closure)
    }
}

impl ResidualCheck for HhatWave {
    fn name(&self) -> &'static str {
        "hhat-wave"
    }
    fn residual(&self, field: &GridField4, closure: Option<&dyn ThermalClosure>) -> Result<Residual> {
        hhat_wave_residual(field, closure)
    }
    fn notes(&self) -> Vec<String> {
        vec!["the entropy-transport source term is contracted with the gradient of the log-enthalpy".into()]
    }
}

pub fn check_registry() -> Registry<dyn ResidualCheck> {
    Registry::<dyn ResidualCheck>::new("residual check")
        .with("lichnerowicz", |_| Ok(Box::new(Lichnerowicz)))
        .with("vort-evo", |_| Ok(Box::new(VortEvo)))
        .with("hhat-wave", |_| Ok(Box::new(HhatWave)))
}
