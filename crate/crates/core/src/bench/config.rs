//! Declarative benchmark configurations (TOML, schema version 1).

use crate::cutcell::CutCellOptions;
use crate::error::{Error, Result};
use crate::mesh::ElementKind;
use crate::offset::{OffsetMethod, OptimizerSettings};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkConfig {
    #[serde(default = "schema")]
    pub version: u32,
    /// Output directory; the CLI `--out` flag takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub benchmark: Benchmark,
}

fn schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum Benchmark {
    OffsetValidate(OffsetValidateConfig),
    PatchTest(PatchTestConfig),
    BendingBeam(BeamConfig),
    ConvergenceBlock(ConvergenceConfig),
    Hertz(HertzConfig),
    Custom(CustomConfig),
}

impl Benchmark {
    pub fn id(&self) -> &'static str {
        match self {
            Benchmark::OffsetValidate(_) => "offset-validate",
            Benchmark::PatchTest(_) => "patch-test",
            Benchmark::BendingBeam(_) => "bending-beam",
            Benchmark::ConvergenceBlock(_) => "convergence-block",
            Benchmark::Hertz(_) => "hertz",
            Benchmark::Custom(_) => "custom",
        }
    }

    /// Default configuration of a built-in benchmark by id.
    pub fn default_for(id: &str) -> Result<Self> {
        Ok(match id {
            "offset-validate" => Benchmark::OffsetValidate(Default::default()),
            "patch-test" => Benchmark::PatchTest(Default::default()),
            "bending-beam" => Benchmark::BendingBeam(Default::default()),
            "convergence-block" => Benchmark::ConvergenceBlock(Default::default()),
            "hertz" => Benchmark::Hertz(Default::default()),
            other => return Err(Error::Config(format!("unknown benchmark '{other}'"))),
        })
    }
}

impl BenchmarkConfig {
    pub fn new(benchmark: Benchmark) -> Self {
        Self { version: SCHEMA_VERSION, output: None, benchmark }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::Config(format!("unsupported config version {}", self.version)));
        }
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        let nu = |v: f64| {
            if (-1.0..0.5).contains(&v) {
                Ok(())
            } else {
                Err(Error::Config(format!("Poisson ratio {v} outside [-1, 0.5)")))
            }
        };
        let nonempty = |name: &str, n: usize| if n > 0 { Ok(()) } else { Err(Error::Config(format!("{name} must not be empty"))) };
        match &self.benchmark {
            Benchmark::OffsetValidate(c) => {
                nonempty("distances", c.distances.len())?;
                for &d in &c.distances {
                    pos("distance", d)?;
                }
                pos("surface_distance", c.surface_distance)?;
                if c.samples_per_span < 2 {
                    return Err(Error::Config("samples_per_span must be at least 2".into()));
                }
            }
            Benchmark::PatchTest(c) => {
                pos("a", c.a)?;
                pos("E", c.e)?;
                nu(c.nu)?;
                pos("epsilon", c.epsilon)?;
                nonempty("variants", c.variants.len())?;
                if !(c.layer_depth > 0.0 && c.layer_depth < c.a) {
                    return Err(Error::Config("layer_depth must lie in (0, a)".into()));
                }
                if c.background_cells == 0 || c.layer_elements == 0 {
                    return Err(Error::Config("cell counts must be positive".into()));
                }
            }
            Benchmark::BendingBeam(c) => {
                pos("length", c.length)?;
                pos("height", c.height)?;
                pos("E", c.e)?;
                nu(c.nu)?;
                pos("epsilon", c.epsilon)?;
                nonempty("variants", c.variants.len())?;
                if !(c.interface_x > 0.0 && c.interface_x < c.length) {
                    return Err(Error::Config("interface_x must lie inside the beam".into()));
                }
                for v in &c.variants {
                    pos("h_ratio", v.h_ratio)?;
                    pos("E_layer", v.e_layer)?;
                }
            }
            Benchmark::ConvergenceBlock(c) => {
                pos("width", c.width)?;
                pos("height", c.height)?;
                pos("E", c.e)?;
                nu(c.nu)?;
                pos("epsilon", c.epsilon)?;
                if c.levels.len() < 3 {
                    return Err(Error::Config("convergence ladder needs at least 3 levels".into()));
                }
                if c.levels.iter().any(|&n| n == 0 || n >= c.reference_cells) {
                    return Err(Error::Config("levels must be coarser than the reference".into()));
                }
                nonempty("background kinds", c.kinds.len())?;
                if c.kinds.iter().any(|k| !matches!(k, ElementKind::Quad4 | ElementKind::Quad8)) {
                    return Err(Error::Config("background kinds must be quad4 or quad8".into()));
                }
                if !(c.interface_end_height > 0.0 && c.interface_end_height < c.height && c.interface_mid_height > 0.0) {
                    return Err(Error::Config("interface heights must lie inside the block".into()));
                }
            }
            Benchmark::Hertz(c) => {
                pos("radius", c.radius)?;
                pos("E", c.e)?;
                nu(c.nu)?;
                pos("distance", c.distance)?;
                pos("epsilon", c.epsilon)?;
                nonempty("loads", c.loads.len())?;
                nonempty("levels", c.levels.len())?;
                for &p in &c.loads {
                    pos("load", p)?;
                }
                for &l in &c.levels {
                    pos("level", l)?;
                }
                if c.distance >= 0.5 * c.radius {
                    return Err(Error::Config("layer thickness must be below half the radius".into()));
                }
                if c.load_steps == 0 {
                    return Err(Error::Config("load_steps must be positive".into()));
                }
            }
            Benchmark::Custom(c) => {
                nonempty("base", c.base.len())?;
                pos("distance", c.distance)?;
                pos("background_h", c.background_h)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OffsetValidateConfig {
    /// Curve patch file; empty uses the built-in quadratic test curve.
    pub curve: String,
    pub distances: Vec<f64>,
    pub methods: Vec<OffsetMethod>,
    /// Also run the bicubic surface table.
    pub surface: bool,
    pub surface_distance: f64,
    /// Also check exact reproduction of circular-arc offsets.
    pub arc_exactness: bool,
    pub samples_per_span: usize,
    pub optimizer: OptimizerSettings,
    pub surface_optimizer: OptimizerSettings,
}

impl Default for OffsetValidateConfig {
    fn default() -> Self {
        Self {
            curve: String::new(),
            distances: vec![0.1, 0.15, 0.2, 0.25],
            methods: OffsetMethod::ALL.to_vec(),
            surface: true,
            surface_distance: 3.0,
            arc_exactness: true,
            samples_per_span: 200,
            optimizer: OptimizerSettings::default(),
            surface_optimizer: OptimizerSettings { samples: 50, ..OptimizerSettings::default() },
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum PatchVariant {
    Straight,
    Inclined,
    Curved,
}

impl PatchVariant {
    pub fn name(self) -> &'static str {
        match self {
            PatchVariant::Straight => "straight",
            PatchVariant::Inclined => "inclined",
            PatchVariant::Curved => "curved",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PatchTestConfig {
    pub a: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub nu: f64,
    /// Pressure on the top face (negative compresses).
    pub p: f64,
    pub epsilon: f64,
    pub variants: Vec<PatchVariant>,
    /// Mean depth of Γ* below the top face.
    pub layer_depth: f64,
    /// Cartesian cells per side.
    pub background_cells: usize,
    /// Layer elements along the top face.
    pub layer_elements: usize,
    pub cut: CutCellOptions,
}

impl Default for PatchTestConfig {
    fn default() -> Self {
        Self {
            a: 3.0,
            e: 1.0,
            nu: 0.3,
            p: -0.01,
            epsilon: 1000.0,
            variants: vec![PatchVariant::Straight, PatchVariant::Inclined, PatchVariant::Curved],
            layer_depth: 0.4,
            background_cells: 3,
            layer_elements: 3,
            cut: CutCellOptions { prune_threshold: 0.0, ..CutCellOptions::default() },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BeamVariant {
    pub name: String,
    /// Background cell size over layer element size.
    pub h_ratio: f64,
    #[serde(rename = "E_layer")]
    pub e_layer: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct BeamConfig {
    pub length: f64,
    pub height: f64,
    /// Background (bulk) modulus.
    #[serde(rename = "E")]
    pub e: f64,
    pub nu: f64,
    pub epsilon: f64,
    pub interface_x: f64,
    /// End load p(y) = load_slope · y.
    pub load_slope: f64,
    /// Background mesh file; empty uses the bundled cross-hatched mesh.
    pub mesh: String,
    pub variants: Vec<BeamVariant>,
    pub cut: CutCellOptions,
}

impl Default for BeamConfig {
    fn default() -> Self {
        Self {
            length: 1.5,
            height: 1.0,
            e: 50.0,
            nu: 0.0,
            epsilon: 1e6,
            interface_x: 0.625,
            load_slope: -0.2,
            mesh: String::new(),
            variants: vec![
                BeamVariant { name: "ratio-1.2".into(), h_ratio: 1.2, e_layer: 50.0 },
                BeamVariant { name: "ratio-4.2".into(), h_ratio: 4.2, e_layer: 50.0 },
                BeamVariant { name: "ratio-4.2-stiff".into(), h_ratio: 4.2, e_layer: 50000.0 },
            ],
            cut: CutCellOptions { prune_threshold: 0.0, ..CutCellOptions::default() },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub width: f64,
    pub height: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub nu: f64,
    pub epsilon: f64,
    /// Top load f_y = -load_coefficient · x⁴ (pressing the block down).
    pub load_coefficient: f64,
    /// Background cells per side of each ladder level.
    pub levels: Vec<usize>,
    pub reference_cells: usize,
    pub kinds: Vec<ElementKind>,
    /// Γ* height at the block sides and at its middle control point.
    pub interface_end_height: f64,
    pub interface_mid_height: f64,
    pub cut: CutCellOptions,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            width: 3.0,
            height: 3.0,
            e: 1.0,
            nu: 0.0,
            epsilon: 1e4,
            load_coefficient: 0.1,
            levels: vec![4, 8, 16, 32],
            reference_cells: 128,
            kinds: vec![ElementKind::Quad4, ElementKind::Quad8],
            interface_end_height: 0.6,
            interface_mid_height: 0.2,
            cut: CutCellOptions { prune_threshold: 0.0, ..CutCellOptions::default() },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SelectiveConfig {
    /// Layer elements along the central patch.
    pub center_elements: usize,
    pub side_elements: usize,
    pub thickness_elements: usize,
    pub background_h: f64,
}

impl Default for SelectiveConfig {
    fn default() -> Self {
        Self { center_elements: 44, side_elements: 8, thickness_elements: 1, background_h: 0.85 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct HertzConfig {
    pub radius: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub nu: f64,
    /// Layer thickness ℓ.
    pub distance: f64,
    pub epsilon: f64,
    pub loads: Vec<f64>,
    /// Refinement levels 1/h.
    pub levels: Vec<f64>,
    pub load_steps: usize,
    pub background_kind: ElementKind,
    /// Contact normal penalty-like parameter of the active-set update.
    pub c_n: f64,
    pub selective: Option<SelectiveConfig>,
    pub cut: CutCellOptions,
}

impl Default for HertzConfig {
    fn default() -> Self {
        Self {
            radius: 10.0,
            e: 250.0,
            nu: 0.0,
            distance: 0.1,
            epsilon: 1e4,
            loads: vec![0.3, 0.5],
            levels: vec![2.0, 4.0, 8.0, 16.0],
            load_steps: 2,
            background_kind: ElementKind::Quad4,
            c_n: 250.0,
            selective: Some(SelectiveConfig::default()),
            cut: CutCellOptions { prune_threshold: 0.0, ..CutCellOptions::default() },
        }
    }
}

/// Mesh-only run: layer from base curve files embedded in a Cartesian background.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct CustomConfig {
    pub base: Vec<String>,
    pub distance: f64,
    pub method: OffsetMethod,
    pub refinement: Vec<usize>,
    pub thickness_elements: usize,
    pub background_h: f64,
    pub background_kind: ElementKind,
    /// Bulk polygon vertices after Γ* (clockwise continuation).
    pub closure: Vec<[f64; 2]>,
    pub cut: CutCellOptions,
}

impl Default for CustomConfig {
    fn default() -> Self {
        Self {
            base: Vec::new(),
            distance: 0.1,
            method: OffsetMethod::Interpolation,
            refinement: Vec::new(),
            thickness_elements: 1,
            background_h: 0.1,
            background_kind: ElementKind::Quad4,
            closure: Vec::new(),
            cut: CutCellOptions::default(),
        }
    }
}
