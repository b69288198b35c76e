use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest neighbourhood table we are willing to materialise.
const MAX_TABLE_LEN: usize = 1 << 24;

/// Local update map of a 1-D cellular automaton with `k` colours and radius `r`.
///
/// `table[d]` is the output for the neighbourhood whose base-`k` value is `d`,
/// the leftmost cell being the most significant digit. The Wolfram number is
/// `sum(table[d] * k^d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleTable {
    colors: u8,
    radius: u8,
    table: Vec<u8>,
}

fn table_len(colors: u8, radius: u8) -> Result<usize> {
    if colors < 2 {
        return Err(Error::arg(format!("colour count must be >= 2, got {colors}")));
    }
    if radius < 1 {
        return Err(Error::arg("radius must be >= 1"));
    }
    let span = 2 * radius as u32 + 1;
    (colors as usize)
        .checked_pow(span)
        .filter(|&len| len <= MAX_TABLE_LEN)
        .ok_or_else(|| {
            Error::arg(format!(
                "neighbourhood table for k={colors}, r={radius} exceeds {MAX_TABLE_LEN} entries"
            ))
        })
}

/// Decodes a Wolfram rule number for `k` colours and radius `r`.
pub fn rule_from_number(number: &BigUint, colors: u8, radius: u8) -> Result<RuleTable> {
    let len = table_len(colors, radius)?;
    let limit = BigUint::from(colors).pow(len as u32);
    if number >= &limit {
        return Err(Error::RuleRange {
            number: number.to_string(),
            limit: limit.to_string(),
            colors,
            radius,
        });
    }
    let mut table = number.to_radix_le(colors as u32);
    table.resize(len, 0);
    Ok(RuleTable {
        colors,
        radius,
        table,
    })
}

impl RuleTable {
    /// One of the 256 elementary rules (k = 2, r = 1).
    pub fn elementary(number: u8) -> Self {
        RuleTable {
            colors: 2,
            radius: 1,
            table: (0..8).map(|d| (number >> d) & 1).collect(),
        }
    }

    pub fn from_table(colors: u8, radius: u8, table: Vec<u8>) -> Result<Self> {
        let len = table_len(colors, radius)?;
        if table.len() != len {
            return Err(Error::arg(format!(
                "rule table has {} entries, expected {len}",
                table.len()
            )));
        }
        if let Some(&color) = table.iter().find(|&&c| c >= colors) {
            return Err(Error::Domain { color, colors });
        }
        Ok(RuleTable {
            colors,
            radius,
            table,
        })
    }

    pub fn colors(&self) -> u8 {
        self.colors
    }

    pub fn radius(&self) -> u8 {
        self.radius
    }

    pub fn span(&self) -> usize {
        2 * self.radius as usize + 1
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn is_elementary(&self) -> bool {
        self.colors == 2 && self.radius == 1
    }

    pub fn number(&self) -> BigUint {
        if self.table.iter().all(|&c| c == 0) {
            return BigUint::zero();
        }
        BigUint::from_radix_le(&self.table, self.colors as u32).expect("digits are below k")
    }

    /// The Wolfram number when this is an elementary rule.
    pub fn elementary_number(&self) -> Option<u8> {
        if self.is_elementary() {
            self.number().to_u8()
        } else {
            None
        }
    }

    /// Output for a neighbourhood given as its base-`k` index.
    #[inline]
    pub fn output(&self, index: usize) -> u8 {
        self.table[index]
    }

    /// Output for an explicit neighbourhood tuple, leftmost cell first.
    pub fn apply(&self, neighbourhood: &[u8]) -> Result<u8> {
        if neighbourhood.len() != self.span() {
            return Err(Error::arg(format!(
                "neighbourhood has {} cells, expected {}",
                neighbourhood.len(),
                self.span()
            )));
        }
        let mut index = 0usize;
        for &c in neighbourhood {
            if c >= self.colors {
                return Err(Error::Domain {
                    color: c,
                    colors: self.colors,
                });
            }
            index = index * self.colors as usize + c as usize;
        }
        Ok(self.table[index])
    }

    /// Rules that ignore their input or copy it: blank, full (colour k-1),
    /// identity and colour complement. For ECA these are 0, 255, 204 and 51.
    pub fn inert(colors: u8, radius: u8) -> Result<[RuleTable; 4]> {
        let len = table_len(colors, radius)?;
        let k = colors as usize;
        let centre = |d: usize| (d / k.pow(radius as u32) % k) as u8;
        let build = |f: &dyn Fn(usize) -> u8| RuleTable {
            colors,
            radius,
            table: (0..len).map(f).collect(),
        };
        Ok([
            build(&|_| 0),
            build(&|_| colors - 1),
            build(&|d| centre(d)),
            build(&|d| colors - 1 - centre(d)),
        ])
    }

    /// Conjugate under the colour map `c -> k-1-c`.
    pub fn complement(&self) -> Self {
        let top = self.colors - 1;
        let last = self.table.len() - 1;
        // For the symmetric colour map the conjugated neighbourhood index is `last - d`.
        let table = (0..self.table.len())
            .map(|d| top - self.table[last - d])
            .collect();
        RuleTable {
            colors: self.colors,
            radius: self.radius,
            table,
        }
    }

    /// Left-right reflection of the rule.
    pub fn mirror(&self) -> Self {
        let k = self.colors as usize;
        let span = self.span();
        let table = (0..self.table.len())
            .map(|d| {
                let mut rest = d;
                let mut reflected = 0;
                for _ in 0..span {
                    reflected = reflected * k + rest % k;
                    rest /= k;
                }
                self.table[reflected]
            })
            .collect();
        RuleTable {
            colors: self.colors,
            radius: self.radius,
            table,
        }
    }

    /// Stable identifier used in reports, e.g. `eca-110` or `k3r1-12345`.
    pub fn id(&self) -> String {
        match self.elementary_number() {
            Some(n) => format!("eca-{n}"),
            None => format!("k{}r{}-{}", self.colors, self.radius, self.number()),
        }
    }
}
