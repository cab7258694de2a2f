//! Staggered radial grid and the fixed-`j` sector basis.

use crate::angular::{Channel, HalfInteger};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Default number of cells per channel.
pub const DEFAULT_CELLS: usize = 2000;
/// Default extent in units of the Bohr radius `1/(M a)`.
pub const DEFAULT_EXTENT: f64 = 200.0;

/// Uniform staggered grid with `n` cells of width `h` on `(0, n h]`.
///
/// The A-side points sit at cell midpoints `p_i = (i + 1/2) h` and the
/// B-side points at cell edges `q_i = (i + 1) h`, so the merged grid has
/// spacing `h/2` and starts at `r_min = h/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    cells: usize,
    h: f64,
}

/// Which of the two interleaved point sets a component lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stagger {
    /// Cell midpoints.
    Mid,
    /// Cell edges.
    Edge,
}

impl RadialGrid {
    pub fn new(cells: usize, r_max: f64) -> Result<Self> {
        if cells < 4 {
            return Err(Error::Domain(format!("grid needs at least 4 cells, got {cells}")));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::Domain(format!("r_max = {r_max} must be positive")));
        }
        Ok(Self { cells, h: r_max / cells as f64 })
    }

    /// Default grid: 2000 cells out to `200/(M a)`, stretched by `n_max` for excited windows.
    pub fn default_for(c: &PhysicalConstants, n_max: u32) -> Result<Self> {
        Self::new(DEFAULT_CELLS, DEFAULT_EXTENT * f64::from(n_max.max(1)) / c.a())
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn r_min(&self) -> f64 {
        0.5 * self.h
    }

    pub fn r_max(&self) -> f64 {
        self.cells as f64 * self.h
    }

    /// Radius of point `i` on the given point set.
    pub fn r(&self, stagger: Stagger, i: usize) -> f64 {
        match stagger {
            Stagger::Mid => (i as f64 + 0.5) * self.h,
            Stagger::Edge => (i + 1) as f64 * self.h,
        }
    }

    /// Same extent with twice as many cells.
    pub fn refined(&self) -> Self {
        Self { cells: 2 * self.cells, h: 0.5 * self.h }
    }
}

/// One of the four internal channels of an `m_j` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    /// Upper (beta = +1) component on `phi^A`.
    UpperA,
    /// Upper component on `phi^B`.
    UpperB,
    /// Lower (beta = -1) component on `phi^A`.
    LowerA,
    /// Lower component on `phi^B`.
    LowerB,
}

impl Component {
    pub const ALL: [Self; 4] = [Self::UpperA, Self::UpperB, Self::LowerA, Self::LowerB];

    pub fn offset(self) -> usize {
        match self {
            Self::UpperA => 0,
            Self::UpperB => 1,
            Self::LowerA => 2,
            Self::LowerB => 3,
        }
    }

    pub fn channel(self) -> Channel {
        match self {
            Self::UpperA | Self::LowerA => Channel::A,
            Self::UpperB | Self::LowerB => Channel::B,
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(self, Self::UpperA | Self::UpperB)
    }

    /// `phi^A` components live on cell midpoints, `phi^B` on cell edges.
    pub fn stagger(self) -> Stagger {
        match self.channel() {
            Channel::A => Stagger::Mid,
            Channel::B => Stagger::Edge,
        }
    }

    /// The `gamma^5` partner (upper and lower exchanged).
    pub fn gamma5_partner(self) -> Self {
        match self {
            Self::UpperA => Self::LowerA,
            Self::UpperB => Self::LowerB,
            Self::LowerA => Self::UpperA,
            Self::LowerB => Self::UpperB,
        }
    }

    /// Sign of the `K` eigenvalue on this component.
    pub fn k_sign(self) -> f64 {
        match self {
            Self::UpperA | Self::LowerB => 1.0,
            Self::UpperB | Self::LowerA => -1.0,
        }
    }

    pub fn beta(self) -> f64 {
        if self.is_upper() {
            1.0
        } else {
            -1.0
        }
    }
}

/// Sign of `K` selecting one of the two radial blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KBlock {
    /// `K = +(j + 1/2)`: upper on `phi^A`, lower on `phi^B`.
    Plus,
    /// `K = -(j + 1/2)`: upper on `phi^B`, lower on `phi^A`.
    Minus,
}

impl KBlock {
    pub const BOTH: [Self; 2] = [Self::Plus, Self::Minus];

    /// `(upper, lower)` components of the block.
    pub fn components(self) -> (Component, Component) {
        match self {
            Self::Plus => (Component::UpperA, Component::LowerB),
            Self::Minus => (Component::UpperB, Component::LowerA),
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// Fixed-`j` Hilbert space: `m_j` blocks x 4 channels x grid points.
///
/// Index layout is `(block * 4 + channel) * cells + point`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpace {
    j: HalfInteger,
    m_list: Vec<HalfInteger>,
    grid: RadialGrid,
}

impl SectorSpace {
    pub fn new(j: HalfInteger, m_list: Vec<HalfInteger>, grid: RadialGrid) -> Result<Self> {
        if !j.is_half_odd() || j.twice() < 1 {
            return Err(Error::Domain(format!("j = {j} must be a positive odd half-integer")));
        }
        if m_list.is_empty() {
            return Err(Error::Domain("empty m_j list".into()));
        }
        for (k, m) in m_list.iter().enumerate() {
            if m.twice().abs() > j.twice() || !m.is_half_odd() || m_list[..k].contains(m) {
                return Err(Error::Domain(format!("invalid or repeated m_j = {m} for j = {j}")));
            }
        }
        Ok(Self { j, m_list, grid })
    }

    /// A single `m_j = j` block.
    pub fn single(j: HalfInteger, grid: RadialGrid) -> Result<Self> {
        Self::new(j, vec![j], grid)
    }

    /// All `2j + 1` blocks, `m_j` ascending.
    pub fn multiplet(j: HalfInteger, grid: RadialGrid) -> Result<Self> {
        let m = (-j.twice()..=j.twice()).step_by(2).map(HalfInteger::from_twice).collect();
        Self::new(j, m, grid)
    }

    pub fn j(&self) -> HalfInteger {
        self.j
    }

    /// `|kappa| = j + 1/2`.
    pub fn kappa_abs(&self) -> f64 {
        self.j.value() + 0.5
    }

    pub fn m_list(&self) -> &[HalfInteger] {
        &self.m_list
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn is_full_multiplet(&self) -> bool {
        self.m_list.len() as i32 == self.j.twice() + 1
    }

    /// Dimension of one `m_j` block.
    pub fn block_dim(&self) -> usize {
        4 * self.grid.cells
    }

    pub fn dim(&self) -> usize {
        self.block_dim() * self.m_list.len()
    }

    pub fn index(&self, block: usize, comp: Component, point: usize) -> usize {
        (block * 4 + comp.offset()) * self.grid.cells + point
    }

    /// Copy of this space on the refined grid.
    pub fn refined(&self) -> Self {
        Self { grid: self.grid.refined(), ..self.clone() }
    }

    /// Same grid with only the first `m_j` block.
    pub fn first_block(&self) -> Self {
        Self { m_list: vec![self.m_list[0]], ..self.clone() }
    }
}
