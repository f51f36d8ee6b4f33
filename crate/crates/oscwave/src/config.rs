//! Run configuration, read from JSON.
//!
//! Every field has a default, so `{}` is a valid configuration. Unknown keys
//! are rejected. Lebesgue exponents are numbers or the string `"inf"`.

use std::f64::consts::PI;
use std::path::PathBuf;

use oscwave_core::kernels::TruncationPolicy;
use oscwave_core::transforms::DyadicPartition;
use oscwave_core::OperatorParams;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::verify::{GridShape, ScanGrid};

/// An exponent in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(Exponent(x)),
            Raw::Name(s) if s == "inf" || s == "infinity" => Ok(Exponent(f64::INFINITY)),
            Raw::Name(s) => Err(serde::de::Error::custom(format!(
                "exponent `{s}` is neither a number nor \"inf\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationConfig {
    pub tail_tol: f64,
    pub k_max_cap: usize,
    /// Sum the difference series around the closed-form `a = 0` kernel.
    pub split: bool,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        let p = TruncationPolicy::default();
        TruncationConfig {
            tail_tol: p.tail_tol(),
            k_max_cap: p.k_max_cap(),
            split: p.split(),
        }
    }
}

impl TruncationConfig {
    pub fn policy(&self) -> Result<TruncationPolicy> {
        Ok(TruncationPolicy::new(self.tail_tol, self.k_max_cap)?.with_split(self.split))
    }
}

/// Transition interval `[lo, hi]` of the cutoff `χ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartitionConfig {
    pub lo: f64,
    pub hi: f64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        let p = DyadicPartition::default();
        PartitionConfig {
            lo: p.lo(),
            hi: p.hi(),
        }
    }
}

impl PartitionConfig {
    pub fn build(&self) -> Result<DyadicPartition> {
        Ok(DyadicPartition::new(self.lo, self.hi)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    Heat,
    Schrodinger,
    /// `K(ρ, u)`; the `r` list holds the values of `ρ`.
    K,
}

/// Points for `eval-kernel`: the tensor product `t × r × r × u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub t: Vec<f64>,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            kind: KernelKind::Heat,
            t: vec![0.1, 0.5, 1.0, 2.0],
            r: vec![0.5, 1.0, 2.0, 4.0],
            u: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KScanConfig {
    pub rho_max: f64,
    pub rho_count: usize,
    pub u_count: usize,
    pub refine: usize,
}

impl Default for KScanConfig {
    fn default() -> Self {
        KScanConfig {
            rho_max: 40.0,
            rho_count: 400,
            u_count: 81,
            refine: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumConfig {
    pub lambda_max: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { lambda_max: 12.0 }
    }
}

/// Random band-limited data: coefficients uniform in the unit square on
/// every mode with `λ ≤ lambda_max`, from a seeded ChaCha stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
    pub lambda_max: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            count: 5,
            seed: 1,
            lambda_max: 12.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrichartzConfig {
    pub q: Exponent,
    pub r: Exponent,
    pub interval: (f64, f64),
    pub time_nodes: usize,
}

impl Default for StrichartzConfig {
    fn default() -> Self {
        StrichartzConfig {
            q: Exponent(4.0),
            r: Exponent(4.0),
            interval: (0.1, PI - 0.1),
            time_nodes: 64,
        }
    }
}

/// Parameters of `verify`; each estimate reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Points and times for the Schrödinger, multiplier and Bernstein scans.
    pub scan: ScanGrid,
    pub heat_scan: ScanGrid,
    /// Half-wave scan; `None` means [`ScanGrid::halfwave`] for the chosen `j`.
    pub halfwave_scan: Option<ScanGrid>,
    /// Times for the wave dispersive estimate.
    pub wave_times: ScanGrid,
    pub j: i32,
    pub k: i32,
    /// Decay order `N` for multiplier decay, `m` for block interaction.
    pub order: u32,
    pub p: Exponent,
    pub q: Exponent,
    pub s: f64,
    /// Second partition for Besov equivalence and block interaction.
    pub alt_partition: PartitionConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            scan: ScanGrid::standard(),
            heat_scan: ScanGrid::heat(),
            halfwave_scan: None,
            wave_times: ScanGrid {
                t_min: 0.1,
                t_max: PI - 0.1,
                ..ScanGrid::standard()
            },
            j: 2,
            k: 2,
            order: 2,
            p: Exponent(1.0),
            q: Exponent(f64::INFINITY),
            s: 0.0,
            alt_partition: PartitionConfig { lo: 1.2, hi: 1.8 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub a: f64,
    pub truncation: TruncationConfig,
    pub grid: GridShape,
    pub partition: PartitionConfig,
    pub kernel: KernelConfig,
    pub k_scan: KScanConfig,
    pub spectrum: SpectrumConfig,
    pub samples: SampleConfig,
    pub verify: VerifyConfig,
    pub strichartz: StrichartzConfig,
    pub out: PathBuf,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            a: 1.0,
            truncation: TruncationConfig::default(),
            grid: GridShape::default(),
            partition: PartitionConfig::default(),
            kernel: KernelConfig::default(),
            k_scan: KScanConfig::default(),
            spectrum: SpectrumConfig::default(),
            samples: SampleConfig::default(),
            verify: VerifyConfig::default(),
            strichartz: StrichartzConfig::default(),
            out: PathBuf::from("out"),
            workers: None,
        }
    }
}

fn check_exponent(name: &str, e: Exponent) -> Result<()> {
    if !(e.0 >= 1.0) {
        return Err(Error::config(format!(
            "{name} = {} must lie in [1, inf]",
            e.0
        )));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Format {
            what: "configuration",
            detail: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks ranges that serde cannot express.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.truncation.policy()?;
        self.grid.to_spec()?;
        self.partition.build()?;
        self.verify.alt_partition.build()?;
        for g in [
            &self.verify.scan,
            &self.verify.heat_scan,
            &self.verify.wave_times,
        ] {
            g.validate()?;
        }
        if let Some(g) = &self.verify.halfwave_scan {
            g.validate()?;
        }
        for (name, e) in [
            ("verify.p", self.verify.p),
            ("verify.q", self.verify.q),
            ("strichartz.q", self.strichartz.q),
            ("strichartz.r", self.strichartz.r),
        ] {
            check_exponent(name, e)?;
        }
        if !self.verify.s.is_finite() {
            return Err(Error::config("verify.s must be finite"));
        }
        if !(self.spectrum.lambda_max.is_finite() && self.samples.lambda_max.is_finite()) {
            return Err(Error::config("spectral cutoffs must be finite"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers must be at least 1"));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<OperatorParams> {
        Ok(OperatorParams::new(self.a)?)
    }
}
