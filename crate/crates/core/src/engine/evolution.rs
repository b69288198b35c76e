use super::{step, Boundary, Configuration, RuleTable};
use crate::{Error, Result};

/// Space-time diagram: row 0 is the input, row `s + 1` is `step(row s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evolution {
    rule_id: String,
    boundary: Boundary,
    rows: Vec<Configuration>,
}

/// Runs `rule` for `steps` transitions, yielding `steps + 1` rows.
pub fn evolve(rule: &RuleTable, init: &Configuration, steps: usize) -> Result<Evolution> {
    if steps == 0 {
        return Err(Error::arg("an evolution needs at least one step (t >= 1)"));
    }
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(init.clone());
    for s in 0..steps {
        let next = step(&rows[s], rule)?;
        rows.push(next);
    }
    Ok(Evolution {
        rule_id: rule.id(),
        boundary: init.boundary(),
        rows,
    })
}

impl Evolution {
    pub fn rule_id(&self) -> &str {
        &self.rule_id
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn rows(&self) -> &[Configuration] {
        &self.rows
    }

    /// Number of transitions (`rows - 1`).
    pub fn steps(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn width(&self) -> usize {
        self.rows[0].width()
    }

    pub fn colors(&self) -> u8 {
        self.rows[0].colors()
    }

    pub fn last(&self) -> &Configuration {
        self.rows.last().expect("evolutions are never empty")
    }

    /// Recomputes every transition and checks it against the stored rows.
    pub fn replays(&self, rule: &RuleTable) -> bool {
        rule.id() == self.rule_id
            && self
                .rows
                .windows(2)
                .all(|pair| step(&pair[0], rule).is_ok_and(|next| next == pair[1]))
    }
}
