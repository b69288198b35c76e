//! Behavioural predicates on coefficients and the elementary-rule sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficient::{coefficient, CoefficientParams, CoefficientResult, GridKey, Model, Normalization};
use crate::engine::{Boundary, LifeRule, RuleTable};
use crate::enumeration::{gray_initials, random_initials, Family, InputFamily, LifeFamily, Scheme};
use crate::{Error, Result};

/// Rules that provably ignore their input: blank, black, identity, complement.
pub const INERT_RULES: [u8; 4] = [0, 255, 204, 51];

/// Zero band used when every inert rule yields exactly zero.
pub const EPSILON_FLOOR: f64 = 1e-12;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::arg(format!("epsilon must be positive and finite, got {epsilon}")))
    }
}

/// `|C| < epsilon`: the system cannot transfer information from input to output.
pub fn is_zero_computer(res: &CoefficientResult, epsilon: f64) -> Result<bool> {
    check_epsilon(epsilon)?;
    Ok(res.c_value.abs() < epsilon)
}

/// `C > epsilon`: the system reacts to its input increasingly with runtime.
pub fn computes(res: &CoefficientResult, epsilon: f64) -> Result<bool> {
    check_epsilon(epsilon)?;
    Ok(res.c_value > epsilon)
}

fn ensure_comparable(a: &GridKey, b: &GridKey) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Incomparable(format!(
            "parameter grids differ: {} vs {}",
            describe(a),
            describe(b)
        )))
    }
}

fn describe(k: &GridKey) -> String {
    format!(
        "t={}..{} step {} n={} W={}{} {} {} {} input={} norm={}",
        k.t_min,
        k.t_max,
        k.stride,
        k.n,
        k.width,
        k.height.map(|h| format!(" H={h}")).unwrap_or_default(),
        k.boundary.label(),
        k.scheme.label(),
        k.compressor_id,
        k.include_input,
        k.normalization.label()
    )
}

/// `|C(a) - C(b)| < c` on a shared parameter point.
pub fn c_equivalent(a: &CoefficientResult, b: &CoefficientResult, c: f64) -> Result<bool> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::arg(format!("tolerance c must be positive, got {c}")));
    }
    ensure_comparable(&a.params.grid_key(), &b.params.grid_key())?;
    Ok((a.c_value - b.c_value).abs() < c)
}

/// Coefficients of one system over a finite grid of `(t, n)` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientGrid {
    pub model_id: String,
    pub points: Vec<CoefficientResult>,
}

impl CoefficientGrid {
    /// Gray-family coefficients of an elementary-style rule at every `(t, n)`.
    pub fn for_rule(
        rule: &RuleTable,
        t_values: &[usize],
        n_values: &[usize],
        width: usize,
        boundary: Boundary,
    ) -> Result<Self> {
        let mut points = Vec::with_capacity(t_values.len() * n_values.len());
        for &n in n_values {
            let family = gray_initials(n, width)?.with_boundary(boundary)?;
            for &t in t_values {
                points.push(coefficient(rule, &family, &CoefficientParams::new(t))?);
            }
        }
        Ok(CoefficientGrid {
            model_id: rule.id(),
            points,
        })
    }

    pub fn keys(&self) -> Vec<GridKey> {
        self.points.iter().map(|p| p.params.grid_key()).collect()
    }
}

/// Equality of the coefficient at every point of a shared grid.
pub fn behaviourally_equivalent(a: &CoefficientGrid, b: &CoefficientGrid) -> Result<bool> {
    if a.points.len() != b.points.len() {
        return Err(Error::Incomparable(format!(
            "grids have {} and {} points",
            a.points.len(),
            b.points.len()
        )));
    }
    for (pa, pb) in a.points.iter().zip(&b.points) {
        ensure_comparable(&pa.params.grid_key(), &pb.params.grid_key())?;
    }
    Ok(a.points.iter().zip(&b.points).all(|(pa, pb)| pa.c_value == pb.c_value))
}

/// `2 * max |C|` over the inert rules, floored at [`EPSILON_FLOOR`].
pub fn epsilon_from_inert(values: impl IntoIterator<Item = f64>) -> f64 {
    let max = values.into_iter().map(f64::abs).fold(0.0, f64::max);
    (2.0 * max).max(EPSILON_FLOOR)
}

/// Zero band calibrated on systems known to ignore their input.
pub fn zero_band<M, F>(inert: &[M], family: &F, params: &CoefficientParams) -> Result<f64>
where
    M: Model,
    F: Family<Member = M::Input>,
{
    let values = inert
        .par_iter()
        .map(|m| coefficient(m, family, params).map(|res| res.c_value))
        .collect::<Result<Vec<_>>>()?;
    Ok(epsilon_from_inert(values))
}

/// Zero band from the inert rules of the family's colour count (radius 1),
/// i.e. [`INERT_RULES`] for binary families.
pub fn calibrate_epsilon(family: &InputFamily, params: &CoefficientParams) -> Result<f64> {
    let colors = family.members().first().map_or(2, |m| m.colors());
    zero_band(&RuleTable::inert(colors, 1)?, family, params)
}

/// Zero band from [`LifeRule::INERT`] for a 2-D family.
pub fn calibrate_life_epsilon(family: &LifeFamily, params: &CoefficientParams) -> Result<f64> {
    zero_band(&LifeRule::INERT, family, params)
}

/// Lloyd's k-means on scalars, seeded deterministically.
///
/// Seeding starts from the lower median and repeatedly adds the value farthest
/// from every chosen centre (smallest such value on ties). Returned labels are
/// `1..=k` in ascending centroid order and depend only on the values, not on
/// their order.
pub fn kmeans_1d(values: &[f64], k: usize) -> Vec<u8> {
    if values.is_empty() || k == 0 {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut centres = vec![sorted[(sorted.len() - 1) / 2]];
    while centres.len() < k {
        let mut best: Option<(f64, f64)> = None;
        for &v in &sorted {
            let d = centres.iter().map(|c| (v - c).abs()).fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, v));
            }
        }
        match best {
            Some((d, v)) if d > 0.0 => centres.push(v),
            _ => break,
        }
    }

    let nearest = |v: f64, centres: &[f64]| -> usize {
        let mut best = 0;
        for (i, c) in centres.iter().enumerate() {
            if (v - c).abs() < (v - centres[best]).abs() {
                best = i;
            }
        }
        best
    };

    centres.sort_by(f64::total_cmp);
    let mut assignment: Vec<usize> = sorted.iter().map(|&v| nearest(v, &centres)).collect();
    for _ in 0..1000 {
        let mut sums = vec![0.0; centres.len()];
        let mut counts = vec![0usize; centres.len()];
        for (&v, &a) in sorted.iter().zip(&assignment) {
            sums[a] += v;
            counts[a] += 1;
        }
        for (i, c) in centres.iter_mut().enumerate() {
            if counts[i] > 0 {
                *c = sums[i] / counts[i] as f64;
            }
        }
        centres.sort_by(f64::total_cmp);
        let next: Vec<usize> = sorted.iter().map(|&v| nearest(v, &centres)).collect();
        if next == assignment {
            break;
        }
        assignment = next;
    }
    values.iter().map(|&v| nearest(v, &centres) as u8 + 1).collect()
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// How inputs are drawn for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub t_max: usize,
    pub n: usize,
    pub width: usize,
    pub boundary: Boundary,
    pub scheme: Scheme,
    pub include_input: bool,
    pub normalization: Normalization,
    /// Overrides the calibrated zero band.
    pub epsilon: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            t_max: 200,
            n: 40,
            width: 61,
            boundary: Boundary::Cyclic,
            scheme: Scheme::Gray,
            include_input: true,
            normalization: Normalization::Horizon,
            epsilon: None,
        }
    }
}

impl SweepConfig {
    pub fn family(&self) -> Result<InputFamily> {
        let family = match self.scheme {
            Scheme::Gray => gray_initials(self.n, self.width)?,
            Scheme::Random { seed, density } => random_initials(self.n, self.width, seed, density)?,
        };
        family.with_boundary(self.boundary)
    }

    pub fn params(&self) -> CoefficientParams {
        CoefficientParams {
            include_input: self.include_input,
            normalization: self.normalization,
            ..CoefficientParams::new(self.t_max)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub rule: u8,
    pub result: CoefficientResult,
}

/// Whether a rule groups with the inert rules 0 and 255.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertGrouping {
    pub rule: u8,
    pub shares_cluster: bool,
    pub near_zero_band: bool,
}

impl InertGrouping {
    pub fn holds(&self) -> bool {
        self.shares_cluster || self.near_zero_band
    }
}

/// Coefficients of all 256 elementary rules on one parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    /// Indexed by rule number.
    pub entries: Vec<SweepEntry>,
    /// Rule numbers by descending coefficient, ties by ascending rule number.
    pub ranking: Vec<u8>,
    /// Cluster label (1 = lowest centroid) indexed by rule number.
    pub clusters: Vec<u8>,
    pub epsilon: f64,
    pub grid: GridKey,
    pub manifest_ref: Option<String>,
}

/// Runs every elementary rule on the configured family.
pub fn sweep_eca(config: &SweepConfig) -> Result<SweepReport> {
    if let Some(eps) = config.epsilon {
        check_epsilon(eps)?;
    }
    let family = config.family()?;
    let params = config.params();
    params.validate()?;
    let results = (0..=255u8)
        .into_par_iter()
        .map(|r| coefficient(&RuleTable::elementary(r), &family, &params))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::assemble(results, config.epsilon))
}

impl SweepReport {
    /// Ranks, clusters and calibrates 256 results given in rule order.
    pub fn assemble(results: Vec<CoefficientResult>, epsilon: Option<f64>) -> Self {
        assert_eq!(results.len(), 256, "a sweep covers every elementary rule");
        let values: Vec<f64> = results.iter().map(|r| r.c_value).collect();
        let epsilon =
            epsilon.unwrap_or_else(|| epsilon_from_inert(INERT_RULES.iter().map(|&r| values[r as usize])));
        let mut ranking: Vec<u8> = (0..=255).collect();
        ranking.sort_by(|&a, &b| {
            values[b as usize]
                .total_cmp(&values[a as usize])
                .then(a.cmp(&b))
        });
        let clusters = kmeans_1d(&values, 4);
        let grid = results[0].params.grid_key();
        let entries = results
            .into_iter()
            .enumerate()
            .map(|(r, result)| SweepEntry {
                rule: r as u8,
                result,
            })
            .collect();
        SweepReport {
            entries,
            ranking,
            clusters,
            epsilon,
            grid,
            manifest_ref: None,
        }
    }

    pub fn c_value(&self, rule: u8) -> f64 {
        self.entries[rule as usize].result.c_value
    }

    pub fn result(&self, rule: u8) -> &CoefficientResult {
        &self.entries[rule as usize].result
    }

    /// 0-based position in the ranking (0 = largest coefficient).
    pub fn rank_of(&self, rule: u8) -> usize {
        self.ranking.iter().position(|&r| r == rule).expect("ranking is a permutation")
    }

    pub fn cluster_of(&self, rule: u8) -> u8 {
        self.clusters[rule as usize]
    }

    fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|e| e.result.c_value).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn quartiles(&self) -> (f64, f64, f64) {
        let v = self.sorted_values();
        (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75))
    }

    /// Width of the inter-quartile range of the coefficient distribution.
    pub fn iqr(&self) -> f64 {
        let (q1, _, q3) = self.quartiles();
        q3 - q1
    }

    pub fn inert_grouping(&self, rule: u8) -> InertGrouping {
        let label = self.cluster_of(rule);
        InertGrouping {
            rule,
            shares_cluster: label == self.cluster_of(0) || label == self.cluster_of(255),
            near_zero_band: self.c_value(rule).abs() < 3.0 * self.epsilon,
        }
    }
}
