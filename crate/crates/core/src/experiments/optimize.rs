//! Maximizing the Pearson sum over local measurement directions.
//!
//! Qubit observables n·σ are parametrized by Bloch directions, and |C| is
//! evaluated from the state's Bloch data.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::export::{fmt_float, Exportable};
use super::{map_chunks, AUX_STREAM};
use crate::criteria::{ppt_oracle, BlochData, SLACK};
use crate::error::{Error, Result};
use crate::states::{random_bipartite, RngStream, StateEnsemble};

pub type Vec3 = [f64; 3];
pub type Rotation = [[f64; 3]; 3];

const EX: Vec3 = [1.0, 0.0, 0.0];
const EY: Vec3 = [0.0, 1.0, 0.0];
const EZ: Vec3 = [0.0, 0.0, 1.0];
const IDENTITY: Rotation = [EX, EY, EZ];

pub const HISTOGRAM_BINS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizationMode {
    /// σ_z then σ_x on both sides.
    Fixed,
    /// σ_z, σ_x, σ_y on both sides.
    Fixed3Mub,
    /// σ_z first; second observable the best of the equatorial directions.
    OptimizeSecond,
    /// Both observables: the `OptimizeSecond` grid plus rotated frames, each
    /// with its own set of perpendicular second directions.
    OptimizeBoth,
    /// Three orthogonal directions per side, from independent random frames.
    Optimize3Mub,
}

impl OptimizationMode {
    pub const ALL: [OptimizationMode; 5] =
        [Self::Fixed, Self::Fixed3Mub, Self::OptimizeSecond, Self::OptimizeBoth, Self::Optimize3Mub];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fixed => "fixed",
            Self::Fixed3Mub => "fixed_3mub",
            Self::OptimizeSecond => "optimize_second",
            Self::OptimizeBoth => "optimize_both",
            Self::Optimize3Mub => "optimize_3mub",
        }
    }

    pub fn n_mubs(self) -> usize {
        match self {
            Self::Fixed3Mub | Self::Optimize3Mub => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for OptimizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OptimizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown optimization mode '{s}'") })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizationSpec {
    pub n_states: usize,
    /// Modes evaluated on the same state sample.
    pub modes: Vec<OptimizationMode>,
    /// Equatorial second directions, half-circle spacing.
    pub second_directions: usize,
    /// Frames for `OptimizeBoth`, the identity frame included.
    pub frames: usize,
    /// Second directions per rotated frame.
    pub frame_directions: usize,
    /// Random frame pairs for `Optimize3Mub`, on top of the fixed frame.
    pub n_directions: usize,
    pub seed: u64,
    pub ensemble: StateEnsemble,
    pub threads: Option<usize>,
}

impl OptimizationSpec {
    pub fn new(n_states: usize, modes: Vec<OptimizationMode>, seed: u64) -> Self {
        Self {
            n_states,
            modes,
            second_directions: 80,
            frames: 40,
            frame_directions: 40,
            n_directions: 1000,
            seed,
            ensemble: StateEnsemble::default(),
            threads: None,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_states", self.n_states),
            ("second_directions", self.second_directions),
            ("frames", self.frames),
            ("frame_directions", self.frame_directions),
            ("n_directions", self.n_directions),
        ] {
            if v == 0 {
                return Err(Error::OutOfRange { name, value: 0.0, min: 1.0, max: f64::INFINITY });
            }
        }
        if self.modes.is_empty() {
            return Err(Error::Parse { line: 0, message: "no optimization mode given".into() });
        }
        Ok(())
    }
}

/// Haar-random rotation from a uniformly random unit quaternion.
pub fn random_rotation(rng: &mut RngStream) -> Rotation {
    let mut q = [0.0; 4];
    loop {
        for x in q.iter_mut() {
            *x = rng.gaussian();
        }
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            q.iter_mut().for_each(|x| *x /= n);
            break;
        }
    }
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

pub fn rotate(r: &Rotation, v: &Vec3) -> Vec3 {
    [0, 1, 2].map(|i| r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2])
}

/// `n` directions in the x-y plane at angles kπ/n.
pub fn equatorial_directions(n: usize) -> Vec<Vec3> {
    (0..n)
        .map(|k| {
            let phi = k as f64 * std::f64::consts::PI / n as f64;
            [phi.cos(), phi.sin(), 0.0]
        })
        .collect()
}

/// A first direction and the candidate second directions perpendicular to
/// it, same observables on both sides.
#[derive(Clone, Debug, PartialEq)]
struct Frame {
    first: Vec3,
    seconds: Vec<Vec3>,
}

#[derive(Clone, Debug, PartialEq)]
struct Grids {
    second: Frame,
    both: Vec<Frame>,
    frame_pairs: Vec<(Rotation, Rotation)>,
}

impl Grids {
    fn build(spec: &OptimizationSpec) -> Self {
        let mut rng = RngStream::new(spec.seed, AUX_STREAM);
        let second = Frame { first: EZ, seconds: equatorial_directions(spec.second_directions) };
        let frame_dirs = equatorial_directions(spec.frame_directions);
        let mut both = vec![second.clone()];
        for _ in 1..spec.frames {
            let r = random_rotation(&mut rng);
            both.push(Frame { first: rotate(&r, &EZ), seconds: frame_dirs.iter().map(|d| rotate(&r, d)).collect() });
        }
        let mut rng3 = RngStream::new(spec.seed, AUX_STREAM - 1);
        let mut frame_pairs = vec![(IDENTITY, IDENTITY)];
        for _ in 0..spec.n_directions {
            let a = random_rotation(&mut rng3);
            let b = random_rotation(&mut rng3);
            frame_pairs.push((a, b));
        }
        Self { second, both, frame_pairs }
    }
}

fn pc(b: &BlochData, n: &Vec3, m: &Vec3) -> Option<f64> {
    b.pearson_abs(n, m)
}

fn best_in_frame(b: &BlochData, f: &Frame) -> Option<f64> {
    let first = pc(b, &f.first, &f.first)?;
    let best = f.seconds.iter().filter_map(|d| pc(b, d, d)).fold(f64::NEG_INFINITY, f64::max);
    best.is_finite().then_some(first + best)
}

fn best_over_frames<'a>(b: &BlochData, frames: impl Iterator<Item = &'a Frame>) -> Option<f64> {
    frames.filter_map(|f| best_in_frame(b, f)).reduce(f64::max)
}

fn triple(b: &BlochData, ra: &Rotation, rb: &Rotation) -> Option<f64> {
    [EX, EY, EZ].iter().map(|e| pc(b, &rotate(ra, e), &rotate(rb, e))).sum()
}

fn statistic(mode: OptimizationMode, b: &BlochData, g: &Grids) -> Option<f64> {
    match mode {
        OptimizationMode::Fixed => Some(pc(b, &EZ, &EZ)? + pc(b, &EX, &EX)?),
        OptimizationMode::Fixed3Mub => triple(b, &IDENTITY, &IDENTITY),
        OptimizationMode::OptimizeSecond => best_in_frame(b, &g.second),
        OptimizationMode::OptimizeBoth => best_over_frames(b, g.both.iter()),
        OptimizationMode::Optimize3Mub => g.frame_pairs.iter().filter_map(|(a, c)| triple(b, a, c)).reduce(f64::max),
    }
}

/// Outcome of one mode over the state sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeResult {
    pub mode: OptimizationMode,
    pub n_states: u64,
    pub n_entangled: u64,
    pub detected_entangled: u64,
    /// PPT states with the maximized statistic above 1.
    pub detected_separable: u64,
    pub undefined: u64,
    /// Histogram range is [0, histogram_max] in 200 bins.
    pub histogram_max: f64,
    pub histogram_entangled: Vec<u64>,
    pub histogram_separable: Vec<u64>,
}

impl ModeResult {
    fn empty(mode: OptimizationMode) -> Self {
        Self {
            mode,
            n_states: 0,
            n_entangled: 0,
            detected_entangled: 0,
            detected_separable: 0,
            undefined: 0,
            histogram_max: mode.n_mubs() as f64,
            histogram_entangled: vec![0; HISTOGRAM_BINS],
            histogram_separable: vec![0; HISTOGRAM_BINS],
        }
    }

    fn record(&mut self, value: Option<f64>, entangled: bool) {
        self.n_states += 1;
        self.n_entangled += entangled as u64;
        let Some(v) = value else {
            self.undefined += 1;
            return;
        };
        if v > 1.0 + SLACK {
            if entangled {
                self.detected_entangled += 1;
            } else {
                self.detected_separable += 1;
            }
        }
        let bin = ((v / self.histogram_max * HISTOGRAM_BINS as f64).floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1);
        if entangled {
            self.histogram_entangled[bin] += 1;
        } else {
            self.histogram_separable[bin] += 1;
        }
    }

    fn merge(&mut self, o: &ModeResult) {
        self.n_states += o.n_states;
        self.n_entangled += o.n_entangled;
        self.detected_entangled += o.detected_entangled;
        self.detected_separable += o.detected_separable;
        self.undefined += o.undefined;
        self.histogram_entangled.iter_mut().zip(&o.histogram_entangled).for_each(|(a, b)| *a += b);
        self.histogram_separable.iter_mut().zip(&o.histogram_separable).for_each(|(a, b)| *a += b);
    }

    /// Fraction of entangled states detected.
    pub fn detected_fraction(&self) -> f64 {
        if self.n_entangled == 0 {
            0.0
        } else {
            self.detected_entangled as f64 / self.n_entangled as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizationSummary {
    pub n_states: u64,
    pub modes: Vec<ModeResult>,
}

impl OptimizationSummary {
    pub fn mode(&self, m: OptimizationMode) -> Option<&ModeResult> {
        self.modes.iter().find(|r| r.mode == m)
    }
}

impl Exportable for OptimizationSummary {
    fn csv_header(&self) -> Vec<String> {
        ["mode", "n_states", "n_entangled", "detected_entangled", "detected_separable", "undefined", "detected_fraction"]
            .map(String::from)
            .to_vec()
    }

    fn csv_records(&self) -> Vec<Vec<String>> {
        self.modes
            .iter()
            .map(|m| {
                vec![
                    m.mode.name().to_string(),
                    m.n_states.to_string(),
                    m.n_entangled.to_string(),
                    m.detected_entangled.to_string(),
                    m.detected_separable.to_string(),
                    m.undefined.to_string(),
                    fmt_float(m.detected_fraction()),
                ]
            })
            .collect()
    }
}

/// Draws `n_states` random two-qubit states (the same sample as a Monte
/// Carlo run with the same seed and ensemble) and evaluates each mode.
pub fn run_basis_optimization(spec: &OptimizationSpec) -> Result<OptimizationSummary> {
    spec.validate()?;
    let grids = Grids::build(spec);
    let chunks = map_chunks(spec.n_states, spec.seed, spec.threads, |rng, count| -> Result<Vec<ModeResult>> {
        let mut out: Vec<_> = spec.modes.iter().map(|&m| ModeResult::empty(m)).collect();
        for _ in 0..count {
            let s = random_bipartite(spec.ensemble, 2, rng)?;
            let entangled = ppt_oracle(&s).detected_entangled;
            let bloch = BlochData::new(&s)?;
            for r in out.iter_mut() {
                r.record(statistic(r.mode, &bloch, &grids), entangled);
            }
        }
        Ok(out)
    })?;
    let mut modes: Vec<_> = spec.modes.iter().map(|&m| ModeResult::empty(m)).collect();
    for c in chunks {
        for (total, part) in modes.iter_mut().zip(c?) {
            total.merge(&part);
        }
    }
    Ok(OptimizationSummary { n_states: spec.n_states as u64, modes })
}
