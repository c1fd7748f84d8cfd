//! Rademacher draws and unit-scale randomized initial data.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds;
use crate::spectral::{
    dump, spectral_l2_norm, BlockIndex, BlockSpectrum, Field, Grid, Representation, UnitPartition,
};

/// Blocks with `|P_k phi0|_2 + |P_k phi1|_2` at or below this, relative to
/// `max(1, |phi0|_2 + |phi1|_2)`, are dropped.
pub const BLOCK_THRESHOLD: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Channel {
    /// Signs multiplying the `phi0` blocks.
    Epsilon,
    /// Signs multiplying the `phi1` blocks.
    Nu,
}

/// Independent signs per `(block, channel)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RademacherDraw {
    seed: u64,
    values: BTreeMap<(BlockIndex, Channel), i8>,
}

/// Sign for one `(block, channel)` under `seed`; counter-based, so any
/// subset of blocks can be drawn in any order.
pub fn rademacher_sign(seed: u64, k: BlockIndex, channel: Channel) -> i8 {
    let c = match channel {
        Channel::Epsilon => 0,
        Channel::Nu => 1,
    };
    if seeds::key2(seed, k.0[0], k.0[1], c) >> 63 == 1 {
        1
    } else {
        -1
    }
}

pub fn draw_rademacher(seed: u64, blocks: &[BlockIndex]) -> Result<RademacherDraw> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("empty block set".into()));
    }
    let mut values = BTreeMap::new();
    for &k in blocks {
        for ch in [Channel::Epsilon, Channel::Nu] {
            values.insert((k, ch), rademacher_sign(seed, k, ch));
        }
    }
    Ok(RademacherDraw { seed, values })
}

impl RademacherDraw {
    /// A draw with explicitly chosen signs (seed recorded as given).
    pub fn from_values(seed: u64, values: impl IntoIterator<Item = ((BlockIndex, Channel), i8)>) -> Result<Self> {
        let values: BTreeMap<_, _> = values.into_iter().collect();
        if values.values().any(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidArgument("Rademacher values must be +1 or -1".into()));
        }
        Ok(Self { seed, values })
    }

    /// All signs equal to `sign` on the given blocks.
    pub fn constant(blocks: &[BlockIndex], sign: i8) -> Result<Self> {
        Self::from_values(
            0,
            blocks
                .iter()
                .flat_map(|&k| [((k, Channel::Epsilon), sign), ((k, Channel::Nu), sign)]),
        )
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get(&self, k: BlockIndex, channel: Channel) -> Option<i8> {
        self.values.get(&(k, channel)).copied()
    }

    pub fn epsilon(&self, k: BlockIndex) -> Option<i8> {
        self.get(k, Channel::Epsilon)
    }

    pub fn values(&self) -> impl Iterator<Item = (&(BlockIndex, Channel), &i8)> {
        self.values.iter()
    }
}

/// Block decomposition of `(phi0, phi1)`, independent of any draw.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    grid: Grid,
    blocks: Vec<BlockIndex>,
    phi0_blocks: Vec<BlockSpectrum>,
    phi1_blocks: Vec<BlockSpectrum>,
}

impl BlockDecomposition {
    pub fn new(phi0: &Field, phi1: &Field) -> Result<Self> {
        let grid = phi0.grid();
        if phi1.grid() != grid {
            return Err(Error::GridMismatch("phi0 and phi1 live on different grids".into()));
        }
        let partition = UnitPartition::new(grid);
        let s0 = phi0.to_spectral();
        let s1 = phi1.to_spectral();
        let scale = 1f64.max(spectral_l2_norm(&s0) + spectral_l2_norm(&s1));
        let mut blocks = Vec::new();
        let mut phi0_blocks = Vec::new();
        let mut phi1_blocks = Vec::new();
        for k in partition.blocks() {
            let b0 = partition.project_sparse(&s0, k)?;
            let b1 = partition.project_sparse(&s1, k)?;
            if b0.l2_norm(&grid) + b1.l2_norm(&grid) > BLOCK_THRESHOLD * scale {
                blocks.push(k);
                phi0_blocks.push(b0);
                phi1_blocks.push(b1);
            }
        }
        Ok(Self {
            grid,
            blocks,
            phi0_blocks,
            phi1_blocks,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn blocks(&self) -> &[BlockIndex] {
        &self.blocks
    }

    pub fn phi0_blocks(&self) -> &[BlockSpectrum] {
        &self.phi0_blocks
    }

    pub fn phi1_blocks(&self) -> &[BlockSpectrum] {
        &self.phi1_blocks
    }

    /// Whether every `phi1` block vanishes identically.
    pub fn phi1_is_zero(&self) -> bool {
        self.phi1_blocks
            .iter()
            .all(|b| b.entries.iter().all(|(_, z)| *z == Complex64::default()))
    }

    /// `sqrt(sum_k |P_k phi0|_{H^1}^2)`.
    pub fn phi0_block_h1(&self) -> Vec<f64> {
        self.phi0_blocks
            .iter()
            .map(|b| b.sobolev_norm(&self.grid, 1.0))
            .collect()
    }

    pub fn randomize(&self, draw: &RademacherDraw) -> Result<RandomizedData> {
        let mut phi0 = Field::zeros(self.grid, Representation::Spectral);
        let mut phi1 = Field::zeros(self.grid, Representation::Spectral);
        for ((k, b0), b1) in self.blocks.iter().zip(&self.phi0_blocks).zip(&self.phi1_blocks) {
            let eps = draw
                .get(*k, Channel::Epsilon)
                .ok_or_else(|| Error::InvalidArgument(format!("draw has no epsilon for block {k}")))?;
            let nu = draw
                .get(*k, Channel::Nu)
                .ok_or_else(|| Error::InvalidArgument(format!("draw has no nu for block {k}")))?;
            let d0 = phi0.data_mut();
            for &(i, z) in &b0.entries {
                d0[i] += z * eps as f64;
            }
            let d1 = phi1.data_mut();
            for &(i, z) in &b1.entries {
                d1[i] += z * nu as f64;
            }
        }
        Ok(RandomizedData {
            decomposition: self.clone(),
            draw: draw.clone(),
            phi0_rand: phi0,
            phi1_rand: phi1,
        })
    }

    /// Draw fresh signs for the active blocks and randomize.
    pub fn sample(&self, seed: u64) -> Result<RandomizedData> {
        let draw = draw_rademacher(seed, &self.blocks)?;
        self.randomize(&draw)
    }
}

/// Randomized data `(sum eps_k P_k phi0, sum nu_k P_k phi1)` together with
/// its block decomposition and the draw that produced it.
#[derive(Clone, Debug)]
pub struct RandomizedData {
    decomposition: BlockDecomposition,
    draw: RademacherDraw,
    phi0_rand: Field,
    phi1_rand: Field,
}

impl RandomizedData {
    pub fn grid(&self) -> Grid {
        self.decomposition.grid
    }

    pub fn decomposition(&self) -> &BlockDecomposition {
        &self.decomposition
    }

    pub fn draw(&self) -> &RademacherDraw {
        &self.draw
    }

    pub fn blocks(&self) -> &[BlockIndex] {
        &self.decomposition.blocks
    }

    /// Spectral `phi0^omega`.
    pub fn phi0_rand(&self) -> &Field {
        &self.phi0_rand
    }

    pub fn phi1_rand(&self) -> &Field {
        &self.phi1_rand
    }

    pub fn phi0_block(&self, k: BlockIndex) -> Option<&BlockSpectrum> {
        let i = self.decomposition.blocks.iter().position(|&b| b == k)?;
        Some(&self.decomposition.phi0_blocks[i])
    }
}

pub fn randomize(phi0: &Field, phi1: &Field, draw: &RademacherDraw) -> Result<RandomizedData> {
    BlockDecomposition::new(phi0, phi1)?.randomize(draw)
}

/// Built-in families of deterministic initial data `phi0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DataFamily {
    /// `amplitude * exp(-|x - x0|^2 / (2 sigma^2))`, centred in the box
    /// unless `center` is given.
    Gaussian {
        amplitude: f64,
        sigma: f64,
        #[serde(default)]
        center: Option<[f64; 2]>,
    },
    /// Real random field with spectrum in `0 < |xi| <= max_frequency`,
    /// rescaled to the requested homogeneous H^1 norm.
    BandLimited {
        seed: u64,
        max_frequency: f64,
        h1_norm: f64,
    },
    /// `amplitude * cos(k . x)`.
    PlaneWave { amplitude: f64, k: [f64; 2] },
    /// Field read from a dump file.
    File { path: PathBuf },
    Zero,
}

impl DataFamily {
    pub fn build(&self, grid: Grid) -> Result<Field> {
        match self {
            DataFamily::Gaussian {
                amplitude,
                sigma,
                center,
            } => {
                if !(*sigma > 0.0) {
                    return Err(Error::InvalidArgument("gaussian sigma must be positive".into()));
                }
                let c = center.unwrap_or([grid.box_length() / 2.0; 2]);
                let (a, s) = (*amplitude, *sigma);
                Ok(Field::from_real_fn(grid, |x1, x2| {
                    let r2 = (x1 - c[0]).powi(2) + (x2 - c[1]).powi(2);
                    a * (-r2 / (2.0 * s * s)).exp()
                }))
            }
            DataFamily::BandLimited {
                seed,
                max_frequency,
                h1_norm,
            } => band_limited(grid, *seed, *max_frequency, *h1_norm),
            DataFamily::PlaneWave { amplitude, k } => {
                let (a, k) = (*amplitude, *k);
                Ok(Field::from_real_fn(grid, |x1, x2| a * (k[0] * x1 + k[1] * x2).cos()))
            }
            DataFamily::File { path } => {
                let named = dump::read_field(path)?;
                if named.field.grid() != grid {
                    return Err(Error::GridMismatch(format!(
                        "{} holds a {:?} field, config asks for {:?}",
                        path.display(),
                        named.field.grid(),
                        grid
                    )));
                }
                Ok(named.field)
            }
            DataFamily::Zero => Ok(Field::zeros(grid, Representation::Physical)),
        }
    }

    /// Centre and radius outside which the datum is below `1e-14` of its
    /// peak, for families that are localized.
    pub fn localization(&self, grid: Grid) -> Option<([f64; 2], f64)> {
        match self {
            DataFamily::Gaussian { sigma, center, .. } => {
                let c = center.unwrap_or([grid.box_length() / 2.0; 2]);
                Some((c, sigma * (2.0 * (1e14f64).ln()).sqrt()))
            }
            _ => None,
        }
    }
}

fn band_limited(grid: Grid, seed: u64, max_frequency: f64, h1_norm: f64) -> Result<Field> {
    if !(max_frequency > 0.0) || !(h1_norm >= 0.0) {
        return Err(Error::InvalidArgument(
            "band-limited data needs max_frequency > 0 and h1_norm >= 0".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seeds::derive(seed, seeds::Domain::DataFamily, 0));
    let mut spec = Field::zeros(grid, Representation::Spectral);
    let n = grid.len();
    {
        let data = spec.data_mut();
        for i in 0..n {
            let j = grid.conjugate_index(i);
            if j < i {
                continue;
            }
            let xi = grid.frequency(i);
            let w = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            if w == 0.0 || w > max_frequency || j == i {
                continue;
            }
            let r: f64 = rng.gen::<f64>();
            let theta = 2.0 * PI * rng.gen::<f64>();
            let z = Complex64::from_polar(r, theta);
            data[i] = z;
            data[j] = z.conj();
        }
    }
    let current = crate::spectral::sobolev_norm(&spec, 1.0);
    if current == 0.0 {
        return Err(Error::InvalidArgument("band contains no lattice modes".into()));
    }
    let scaled = spec.scaled((h1_norm / current).into());
    let mut phys = scaled.into_physical();
    for z in phys.data_mut() {
        z.im = 0.0;
    }
    Ok(phys)
}
