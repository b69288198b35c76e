//! Ordered input families `i_0 .. i_{n-1}` fed to the coefficient pipeline.
//!
//! The Gray family writes the reflected binary Gray code `j ^ (j >> 1)` of each
//! index, most significant bit first, as a `w = bit_width(n - 1)` cell pattern
//! centred in a zero background (offset `floor((W - w) / 2)`). Consecutive
//! members therefore differ in exactly one cell and member 0 is blank.
//!
//! The random family draws every cell independently from a ChaCha8 stream
//! seeded with `seed` (`ChaCha8Rng::seed_from_u64`), member by member and
//! left to right; a member equal to an earlier one is redrawn from the same
//! stream.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{Boundary, Configuration, LifeGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "scheme")]
pub enum Scheme {
    Gray,
    Random { seed: u64, density: f64 },
}

impl Scheme {
    pub fn label(&self) -> String {
        match self {
            Scheme::Gray => "gray".to_string(),
            Scheme::Random { seed, density } => format!("random(seed={seed},density={density})"),
        }
    }
}

/// Shape and provenance of a family, recorded next to every result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub scheme: Scheme,
    pub n: usize,
    pub width: usize,
    /// Present for 2-D families.
    pub height: Option<usize>,
    pub boundary: Boundary,
}

/// Ordered collection of inputs for one model.
pub trait Family: Sync {
    type Member: Sync;

    fn members(&self) -> &[Self::Member];

    fn descriptor(&self) -> FamilyDescriptor;

    fn len(&self) -> usize {
        self.members().len()
    }

    fn is_empty(&self) -> bool {
        self.members().is_empty()
    }
}

/// Ordered 1-D input rows of a common width.
#[derive(Debug, Clone, PartialEq)]
pub struct InputFamily {
    members: Vec<Configuration>,
    scheme: Scheme,
    width: usize,
}

impl InputFamily {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn boundary(&self) -> Boundary {
        self.members[0].boundary()
    }

    /// Same members read under a different boundary.
    pub fn with_boundary(self, boundary: Boundary) -> Result<Self> {
        let members = self
            .members
            .into_iter()
            .map(|m| m.with_boundary(boundary))
            .collect::<Result<Vec<_>>>()?;
        Ok(InputFamily { members, ..self })
    }

    /// The same binary patterns as colour-1 cells of a `colors`-colour row.
    pub fn recolor(self, colors: u8) -> Result<Self> {
        let members = self
            .members
            .iter()
            .map(|m| Configuration::from_cells(colors, &m.cells())?.with_boundary(m.boundary()))
            .collect::<Result<Vec<_>>>()?;
        Ok(InputFamily { members, ..self })
    }

    /// Members in reverse order.
    pub fn reversed(&self) -> Self {
        let mut members = self.members.clone();
        members.reverse();
        InputFamily {
            members,
            ..self.clone()
        }
    }
}

impl Family for InputFamily {
    type Member = Configuration;

    fn members(&self) -> &[Configuration] {
        &self.members
    }

    fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor {
            scheme: self.scheme,
            n: self.members.len(),
            width: self.width,
            height: None,
            boundary: self.boundary(),
        }
    }
}

fn bit_width(v: usize) -> usize {
    (usize::BITS - v.leading_zeros()) as usize
}

fn gray(j: usize) -> usize {
    j ^ (j >> 1)
}

/// Gray code of `j` as `bits` cells, most significant first.
fn gray_bits(j: usize, bits: usize) -> impl Iterator<Item = u8> {
    let g = gray(j);
    (0..bits).rev().map(move |b| ((g >> b) & 1) as u8)
}

/// `n` binary rows of width `width` enumerating the reflected Gray code.
pub fn gray_initials(n: usize, width: usize) -> Result<InputFamily> {
    if n < 2 {
        return Err(Error::arg(format!("a Gray family needs n >= 2, got {n}")));
    }
    let bits = bit_width(n - 1);
    if width < bits {
        return Err(Error::arg(format!(
            "width {width} cannot hold {bits}-bit Gray patterns for n={n}"
        )));
    }
    let offset = (width - bits) / 2;
    let members = (0..n)
        .map(|j| {
            let mut row = Configuration::zeros(2, width)?;
            for (i, bit) in gray_bits(j, bits).enumerate() {
                row.set(offset + i, bit)?;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InputFamily {
        members,
        scheme: Scheme::Gray,
        width,
    })
}

/// `n` distinct binary rows with each cell alive with probability `density`.
pub fn random_initials(n: usize, width: usize, seed: u64, density: f64) -> Result<InputFamily> {
    if n < 1 {
        return Err(Error::arg("a random family needs n >= 1"));
    }
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::arg(format!("density must lie in (0, 1), got {density}")));
    }
    if width == 0 {
        return Err(Error::arg("configuration width must be >= 1"));
    }
    if width < usize::BITS as usize && n > (1usize << width) {
        return Err(Error::arg(format!(
            "cannot draw {n} distinct rows of width {width}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut members = Vec::with_capacity(n);
    while members.len() < n {
        let cells: Vec<u8> = (0..width).map(|_| rng.random_bool(density) as u8).collect();
        if seen.insert(cells.clone()) {
            members.push(Configuration::from_cells(2, &cells)?);
        }
    }
    Ok(InputFamily {
        members,
        scheme: Scheme::Random { seed, density },
        width,
    })
}

/// Ordered Game of Life inputs on an H×W torus.
#[derive(Debug, Clone, PartialEq)]
pub struct LifeFamily {
    members: Vec<LifeGrid>,
    scheme: Scheme,
    height: usize,
    width: usize,
}

impl LifeFamily {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

impl Family for LifeFamily {
    type Member = LifeGrid;

    fn members(&self) -> &[LifeGrid] {
        &self.members
    }

    fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor {
            scheme: self.scheme,
            n: self.members.len(),
            width: self.width,
            height: Some(self.height),
            boundary: Boundary::Cyclic,
        }
    }
}

/// `n` distinct random H×W grids drawn like [`random_initials`] over the
/// row-major cells.
pub fn random_grids(n: usize, height: usize, width: usize, seed: u64, density: f64) -> Result<LifeFamily> {
    if height == 0 || width == 0 {
        return Err(Error::arg(format!("life grid must be at least 1x1, got {height}x{width}")));
    }
    let flat = random_initials(n, height * width, seed, density)?;
    let members = flat
        .members
        .iter()
        .map(|m| LifeGrid::from_cells(height, width, m.cells()))
        .collect::<Result<Vec<_>>>()?;
    Ok(LifeFamily {
        members,
        scheme: flat.scheme,
        height,
        width,
    })
}

/// Gray patterns written row-major into a centred `s×s` patch,
/// `s = ceil(sqrt(bit_width(n - 1)))`.
pub fn gray_patches(n: usize, height: usize, width: usize) -> Result<LifeFamily> {
    if n < 2 {
        return Err(Error::arg(format!("a Gray family needs n >= 2, got {n}")));
    }
    let bits = bit_width(n - 1);
    let side = (1..).find(|s| s * s >= bits).expect("bits is finite");
    if height < side || width < side {
        return Err(Error::arg(format!(
            "{height}x{width} grid cannot hold a {side}x{side} Gray patch for n={n}"
        )));
    }
    let (top, left) = ((height - side) / 2, (width - side) / 2);
    let members = (0..n)
        .map(|j| {
            let mut grid = LifeGrid::empty(height, width)?;
            for (i, bit) in gray_bits(j, bits).enumerate() {
                grid.set(top + i / side, left + i % side, bit == 1);
            }
            Ok(grid)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LifeFamily {
        members,
        scheme: Scheme::Gray,
        height,
        width,
    })
}
