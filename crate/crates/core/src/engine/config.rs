use serde::{Deserialize, Serialize};

use super::RuleTable;
use crate::{Error, Result};

/// How cells beyond either end of a row are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "color")]
pub enum Boundary {
    #[default]
    Cyclic,
    /// Every cell outside the row has this colour.
    Fixed(u8),
}

impl Boundary {
    pub fn label(&self) -> String {
        match self {
            Boundary::Cyclic => "cyclic".to_string(),
            Boundary::Fixed(c) => format!("fixed-{c}"),
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(Boundary::Cyclic),
            _ => s
                .strip_prefix("fixed-")
                .or_else(|| s.strip_prefix("fixed:"))
                .and_then(|c| c.parse().ok())
                .map(Boundary::Fixed)
                .ok_or_else(|| Error::arg(format!("unknown boundary `{s}` (cyclic | fixed-<colour>)"))),
        }
    }
}

/// Cell storage: binary rows live in 64-bit words, cell `i` at bit `63 - i % 64`
/// of word `i / 64`; padding bits past the width are always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Cells {
    Packed(Vec<u64>),
    Bytes(Vec<u8>),
}

/// One row of a 1-D cellular automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    colors: u8,
    width: usize,
    boundary: Boundary,
    cells: Cells,
}

fn words_for(width: usize) -> usize {
    width.div_ceil(64)
}

fn tail_mask(width: usize) -> u64 {
    match width % 64 {
        0 => u64::MAX,
        rem => !(u64::MAX >> rem),
    }
}

impl Configuration {
    pub fn zeros(colors: u8, width: usize) -> Result<Self> {
        if colors < 2 {
            return Err(Error::arg(format!("colour count must be >= 2, got {colors}")));
        }
        if width == 0 {
            return Err(Error::arg("configuration width must be >= 1"));
        }
        let cells = if colors == 2 {
            Cells::Packed(vec![0; words_for(width)])
        } else {
            Cells::Bytes(vec![0; width])
        };
        Ok(Configuration {
            colors,
            width,
            boundary: Boundary::Cyclic,
            cells,
        })
    }

    pub fn from_cells(colors: u8, cells: &[u8]) -> Result<Self> {
        let mut config = Self::zeros(colors, cells.len())?;
        for (i, &c) in cells.iter().enumerate() {
            config.set(i, c)?;
        }
        Ok(config)
    }

    /// Binary row from a string of `0`/`1` characters.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let cells = bits
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::arg(format!("`{other}` is not a binary cell"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_cells(2, &cells)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Result<Self> {
        if let Boundary::Fixed(c) = boundary {
            if c >= self.colors {
                return Err(Error::Domain {
                    color: c,
                    colors: self.colors,
                });
            }
        }
        self.boundary = boundary;
        Ok(self)
    }

    pub fn colors(&self) -> u8 {
        self.colors
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        match &self.cells {
            Cells::Packed(words) => ((words[i / 64] >> (63 - i % 64)) & 1) as u8,
            Cells::Bytes(bytes) => bytes[i],
        }
    }

    pub fn set(&mut self, i: usize, color: u8) -> Result<()> {
        if i >= self.width {
            return Err(Error::arg(format!("cell {i} outside width {}", self.width)));
        }
        if color >= self.colors {
            return Err(Error::Domain {
                color,
                colors: self.colors,
            });
        }
        match &mut self.cells {
            Cells::Packed(words) => {
                let bit = 1u64 << (63 - i % 64);
                if color == 1 {
                    words[i / 64] |= bit;
                } else {
                    words[i / 64] &= !bit;
                }
            }
            Cells::Bytes(bytes) => bytes[i] = color,
        }
        Ok(())
    }

    /// Packed words of a binary row, `None` for k > 2.
    pub fn words(&self) -> Option<&[u64]> {
        match &self.cells {
            Cells::Packed(words) => Some(words),
            Cells::Bytes(_) => None,
        }
    }

    pub fn cells(&self) -> Vec<u8> {
        (0..self.width).map(|i| self.get(i)).collect()
    }

    pub fn count(&self, color: u8) -> usize {
        match (&self.cells, color) {
            (Cells::Packed(words), 1) => words.iter().map(|w| w.count_ones() as usize).sum(),
            (Cells::Packed(words), 0) => {
                self.width - words.iter().map(|w| w.count_ones() as usize).sum::<usize>()
            }
            (Cells::Packed(_), _) => 0,
            (Cells::Bytes(bytes), c) => bytes.iter().filter(|&&b| b == c).count(),
        }
    }

    /// Number of positions where the two rows differ; rows of unequal width
    /// are compared over the shorter one, with the excess counted as differing.
    pub fn hamming(&self, other: &Configuration) -> usize {
        let common = self.width.min(other.width);
        let diff = match (&self.cells, &other.cells) {
            (Cells::Packed(a), Cells::Packed(b)) if self.width == other.width => {
                a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
            }
            _ => (0..common).filter(|&i| self.get(i) != other.get(i)).count(),
        };
        diff + self.width.abs_diff(other.width)
    }

    /// Cellwise `c -> k-1-c`.
    pub fn complement(&self) -> Configuration {
        let cells = match &self.cells {
            Cells::Packed(words) => {
                let mut out: Vec<u64> = words.iter().map(|w| !w).collect();
                if let Some(last) = out.last_mut() {
                    *last &= tail_mask(self.width);
                }
                Cells::Packed(out)
            }
            Cells::Bytes(bytes) => Cells::Bytes(bytes.iter().map(|&b| self.colors - 1 - b).collect()),
        };
        let boundary = match self.boundary {
            Boundary::Fixed(c) => Boundary::Fixed(self.colors - 1 - c),
            b => b,
        };
        Configuration {
            colors: self.colors,
            width: self.width,
            boundary,
            cells,
        }
    }

    #[inline]
    fn read(&self, i: isize) -> u8 {
        let w = self.width as isize;
        if (0..w).contains(&i) {
            return self.get(i as usize);
        }
        match self.boundary {
            Boundary::Cyclic => self.get(i.rem_euclid(w) as usize),
            Boundary::Fixed(c) => c,
        }
    }

    fn ghost(&self) -> u64 {
        match self.boundary {
            Boundary::Fixed(1) => 1,
            _ => 0,
        }
    }
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.width {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

/// Applies `rule` once to every cell of `config`.
pub fn step(config: &Configuration, rule: &RuleTable) -> Result<Configuration> {
    if config.colors != rule.colors() {
        return Err(Error::Domain {
            color: config.colors - 1,
            colors: rule.colors(),
        });
    }
    if rule.is_elementary() {
        Ok(step_elementary(config, rule))
    } else {
        Ok(step_general(config, rule))
    }
}

/// Cell-by-cell update for any k and r.
pub(crate) fn step_general(config: &Configuration, rule: &RuleTable) -> Configuration {
    let k = config.colors as usize;
    let r = rule.radius() as isize;
    let modulus = rule.table().len();
    let mut out = config.clone();
    let mut index = 0usize;
    for o in -r..r {
        index = index * k + config.read(o) as usize;
    }
    for i in 0..config.width {
        index = (index * k + config.read(i as isize + r) as usize) % modulus;
        let value = rule.output(index);
        match &mut out.cells {
            Cells::Packed(words) => {
                let bit = 1u64 << (63 - i % 64);
                if value == 1 {
                    words[i / 64] |= bit;
                } else {
                    words[i / 64] &= !bit;
                }
            }
            Cells::Bytes(bytes) => bytes[i] = value,
        }
    }
    out
}

/// Word-parallel update for k = 2, r = 1: each rule bit that is set contributes
/// the conjunction of the matching left/centre/right literals.
fn step_elementary(config: &Configuration, rule: &RuleTable) -> Configuration {
    let Cells::Packed(words) = &config.cells else {
        unreachable!("binary rows are packed");
    };
    let width = config.width;
    let n = words.len();
    let last_bit = (width - 1) % 64;
    let (first_in, last_in) = match config.boundary {
        Boundary::Cyclic => (config.get(width - 1) as u64, config.get(0) as u64),
        Boundary::Fixed(_) => (config.ghost(), config.ghost()),
    };

    let mut next = vec![0u64; n];
    let table = rule.table();
    for w in 0..n {
        let centre = words[w];
        let carry_left = if w == 0 { first_in } else { words[w - 1] & 1 };
        let left = (centre >> 1) | (carry_left << 63);
        let mut right = centre << 1;
        if w + 1 < n {
            right |= words[w + 1] >> 63;
        }
        if w == n - 1 {
            let slot = 1u64 << (63 - last_bit);
            right = (right & !slot) | if last_in == 1 { slot } else { 0 };
        }
        let mut acc = 0u64;
        for (d, &out) in table.iter().enumerate() {
            if out == 1 {
                let l = if d & 4 != 0 { left } else { !left };
                let c = if d & 2 != 0 { centre } else { !centre };
                let r = if d & 1 != 0 { right } else { !right };
                acc |= l & c & r;
            }
        }
        next[w] = acc;
    }
    if let Some(last) = next.last_mut() {
        *last &= tail_mask(width);
    }
    Configuration {
        colors: 2,
        width,
        boundary: config.boundary,
        cells: Cells::Packed(next),
    }
}
