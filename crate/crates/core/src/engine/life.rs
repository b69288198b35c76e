use crate::{Error, Result};

/// Binary H×W grid on a torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LifeGrid {
    height: usize,
    width: usize,
    cells: Vec<u8>,
}

impl LifeGrid {
    pub fn empty(height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::arg(format!("life grid must be at least 1x1, got {height}x{width}")));
        }
        Ok(LifeGrid {
            height,
            width,
            cells: vec![0; height * width],
        })
    }

    /// Builds a grid from row-major cells.
    pub fn from_cells(height: usize, width: usize, cells: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 || cells.len() != height * width {
            return Err(Error::arg(format!(
                "{} cells do not form a {height}x{width} grid",
                cells.len()
            )));
        }
        if let Some(&color) = cells.iter().find(|&&c| c > 1) {
            return Err(Error::Domain { color, colors: 2 });
        }
        Ok(LifeGrid {
            height,
            width,
            cells,
        })
    }

    /// Parses rows of `.`/`0` (dead) and `#`/`O`/`1` (alive) separated by newlines.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut cells = Vec::with_capacity(rows.len() * width);
        for row in &rows {
            if row.chars().count() != width {
                return Err(Error::arg("life grid rows have unequal length"));
            }
            for ch in row.chars() {
                cells.push(match ch {
                    '.' | '0' => 0,
                    '#' | 'O' | '1' => 1,
                    other => return Err(Error::arg(format!("`{other}` is not a life cell"))),
                });
            }
        }
        Self::from_cells(rows.len(), width, cells)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, alive: bool) {
        self.cells[row * self.width + col] = alive as u8;
    }

    pub fn population(&self) -> usize {
        self.cells.iter().map(|&c| c as usize).sum()
    }

    pub fn hamming(&self, other: &LifeGrid) -> usize {
        self.cells.iter().zip(&other.cells).filter(|(a, b)| a != b).count()
    }
}

/// Outer-totalistic rule on the Moore neighbourhood: bit `c` of `birth`
/// (`survive`) is set when a dead (live) cell with `c` live neighbours is
/// alive in the next generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LifeRule {
    birth: u16,
    survive: u16,
}

impl Default for LifeRule {
    fn default() -> Self {
        Self::CONWAY
    }
}

impl LifeRule {
    /// B3/S23.
    pub const CONWAY: LifeRule = LifeRule {
        birth: 1 << 3,
        survive: (1 << 2) | (1 << 3),
    };

    /// Rules that ignore their input after one step or copy it verbatim:
    /// `B/S` (blank), `B012345678/S012345678` (full), `B/S012345678`
    /// (identity) and `B012345678/S` (inversion).
    pub const INERT: [LifeRule; 4] = [
        LifeRule { birth: 0, survive: 0 },
        LifeRule { birth: 0x1FF, survive: 0x1FF },
        LifeRule { birth: 0, survive: 0x1FF },
        LifeRule { birth: 0x1FF, survive: 0 },
    ];

    /// Builds a rule from neighbour counts, e.g. `(&[3], &[2, 3])`.
    pub fn new(birth: &[u8], survive: &[u8]) -> Result<Self> {
        let mask = |counts: &[u8]| -> Result<u16> {
            counts.iter().try_fold(0u16, |m, &c| {
                if c > 8 {
                    Err(Error::arg(format!("neighbour count {c} exceeds 8")))
                } else {
                    Ok(m | 1 << c)
                }
            })
        };
        Ok(LifeRule {
            birth: mask(birth)?,
            survive: mask(survive)?,
        })
    }

    /// Parses `B3/S23` notation (case-insensitive, either part may be empty).
    pub fn parse(text: &str) -> Result<Self> {
        let upper = text.trim().to_ascii_uppercase();
        let bad = || Error::arg(format!("`{text}` is not B<digits>/S<digits> notation"));
        let (b, s) = upper.split_once('/').ok_or_else(bad)?;
        let digits = |part: &str, prefix: char| -> Result<Vec<u8>> {
            part.strip_prefix(prefix)
                .ok_or_else(bad)?
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                .collect()
        };
        Self::new(&digits(b, 'B')?, &digits(s, 'S')?)
    }

    /// `B3/S23`-style notation.
    pub fn notation(&self) -> String {
        let digits = |m: u16| -> String {
            (0..9).filter(|c| m >> c & 1 == 1).map(|c| char::from(b'0' + c as u8)).collect()
        };
        format!("B{}/S{}", digits(self.birth), digits(self.survive))
    }

    pub fn id(&self) -> String {
        if *self == Self::CONWAY {
            "life-b3s23".to_string()
        } else {
            format!("life-{}", self.notation().replace('/', "").to_lowercase())
        }
    }

    /// One generation on the torus.
    pub fn step(&self, grid: &LifeGrid) -> LifeGrid {
        let (h, w) = (grid.height, grid.width);
        let mut next = vec![0u8; h * w];
        for r in 0..h {
            let rows = [(r + h - 1) % h, r, (r + 1) % h];
            for c in 0..w {
                let cols = [(c + w - 1) % w, c, (c + 1) % w];
                let mut live = 0u16;
                for &rr in &rows {
                    for &cc in &cols {
                        live += grid.cells[rr * w + cc] as u16;
                    }
                }
                let me = grid.cells[r * w + c];
                live -= me as u16;
                let mask = if me == 1 { self.survive } else { self.birth };
                next[r * w + c] = (mask >> live & 1) as u8;
            }
        }
        LifeGrid {
            height: h,
            width: w,
            cells: next,
        }
    }

    pub fn evolve(&self, init: &LifeGrid, steps: usize) -> Result<LifeEvolution> {
        if steps == 0 {
            return Err(Error::arg("an evolution needs at least one step (t >= 1)"));
        }
        let mut frames = Vec::with_capacity(steps + 1);
        frames.push(init.clone());
        for s in 0..steps {
            frames.push(self.step(&frames[s]));
        }
        Ok(LifeEvolution { frames })
    }
}

/// One Game of Life (B3/S23) generation on the torus.
pub fn life_step(grid: &LifeGrid) -> LifeGrid {
    LifeRule::CONWAY.step(grid)
}

/// Frames 0..=t of a Game of Life run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LifeEvolution {
    frames: Vec<LifeGrid>,
}

impl LifeEvolution {
    pub fn frames(&self) -> &[LifeGrid] {
        &self.frames
    }

    pub fn steps(&self) -> usize {
        self.frames.len() - 1
    }
}
