//! Variability curve and the programmability coefficient.
//!
//! For a runtime `t'` let `D(t') = sum_{j=0}^{n-2} |C(M_t'(i_j)) - C(M_t'(i_{j+1}))|`,
//! with `C` the compressed size in bits. Each curve point is `D(t')` divided by
//! `t (n - 1)`, where `t` is the horizon `t_max` of the curve
//! ([`Normalization::Horizon`], the default) or the point's own runtime `t'`
//! ([`Normalization::PerPoint`]). The coefficient is the slope of the ordinary
//! least-squares line through the points `(t', S(t'))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexity::{compressed_size, serialize_rows, truncate_payload, SpaceTime, COMPRESSOR_ID};
use crate::engine::{evolve, Boundary, Configuration, Evolution, LifeRule, LifeEvolution, LifeGrid, RuleTable};
use crate::enumeration::{Family, FamilyDescriptor, Scheme};
use crate::{Error, Result};

/// A deterministic system that can be run from an input for a number of steps.
pub trait Model: Sync {
    type Input: Sync;
    type Run: SpaceTime;

    fn model_id(&self) -> String;

    fn run(&self, input: &Self::Input, steps: usize) -> Result<Self::Run>;
}

impl Model for RuleTable {
    type Input = Configuration;
    type Run = Evolution;

    fn model_id(&self) -> String {
        self.id()
    }

    fn run(&self, input: &Configuration, steps: usize) -> Result<Evolution> {
        evolve(self, input, steps)
    }
}

impl Model for LifeRule {
    type Input = LifeGrid;
    type Run = LifeEvolution;

    fn model_id(&self) -> String {
        self.id()
    }

    fn run(&self, input: &LifeGrid, steps: usize) -> Result<LifeEvolution> {
        self.evolve(input, steps)
    }
}

/// Divisor applied to the difference sums of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Every point is divided by `t_max (n - 1)`.
    #[default]
    Horizon,
    /// Each point is divided by its own `t' (n - 1)`.
    PerPoint,
}

impl Normalization {
    pub fn label(&self) -> &'static str {
        match self {
            Normalization::Horizon => "horizon",
            Normalization::PerPoint => "per-point",
        }
    }
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "horizon" => Ok(Normalization::Horizon),
            "per-point" => Ok(Normalization::PerPoint),
            _ => Err(Error::arg(format!("unknown normalization `{s}` (horizon | per-point)"))),
        }
    }
}

/// Sampling of runtimes for the variability curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientParams {
    pub t_min: usize,
    pub t_max: usize,
    pub stride: usize,
    /// Whether the input row is part of the compressed payload.
    pub include_input: bool,
    pub normalization: Normalization,
}

impl CoefficientParams {
    /// Defaults for a horizon `t_max`: `t_min = max(4, t_max / 8)` and a stride
    /// giving at least 16 points when the range allows it.
    pub fn new(t_max: usize) -> Self {
        let t_min = (t_max / 8).max(4).min(t_max.saturating_sub(1)).max(1);
        let stride = (t_max.saturating_sub(t_min) / 15).max(1);
        CoefficientParams {
            t_min,
            t_max,
            stride,
            include_input: true,
            normalization: Normalization::Horizon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_min < 1 || self.t_min >= self.t_max {
            return Err(Error::arg(format!(
                "need 1 <= t_min < t_max, got t_min={} t_max={}",
                self.t_min, self.t_max
            )));
        }
        if self.stride < 1 {
            return Err(Error::arg("stride must be >= 1"));
        }
        Ok(())
    }

    /// `t_min, t_min + stride, ...` up to `t_max`.
    pub fn sample_times(&self) -> Result<Vec<usize>> {
        self.validate()?;
        Ok((self.t_min..=self.t_max).step_by(self.stride).collect())
    }
}

/// Compressed sizes `C[j][p]` of member `j` run for `times[p]` steps.
///
/// Each member is evolved once to the largest time; shorter runs are prefixes
/// of that diagram and their payloads are cut from the full payload.
pub fn complexity_matrix<M, F>(model: &M, family: &F, times: &[usize], include_input: bool) -> Result<Vec<Vec<u64>>>
where
    M: Model,
    F: Family<Member = M::Input>,
{
    let horizon = *times
        .iter()
        .max()
        .ok_or_else(|| Error::arg("no runtimes sampled"))?;
    if times.contains(&0) {
        return Err(Error::arg("an evolution needs at least one step (t >= 1)"));
    }
    family
        .members()
        .par_iter()
        .map(|input| {
            let run = model.run(input, horizon)?;
            let first = usize::from(!include_input);
            let full = serialize_rows(&run, first, horizon);
            Ok(times
                .iter()
                .map(|&t| {
                    let rows = t + 1 - first;
                    compressed_size(&truncate_payload(&full, run.colors(), run.row_cells(), rows))
                })
                .collect())
        })
        .collect()
}

/// `D / (divisor (n - 1))` from the compressed sizes of consecutive family members.
pub fn normalized_sum(sizes: impl IntoIterator<Item = u64>, divisor: usize) -> Result<f64> {
    let sizes: Vec<u64> = sizes.into_iter().collect();
    if sizes.len() < 2 {
        return Err(Error::arg(format!(
            "difference sum needs n >= 2 inputs, got {}",
            sizes.len()
        )));
    }
    let total: u64 = sizes.windows(2).map(|p| p[0].abs_diff(p[1])).sum();
    Ok(total as f64 / (divisor as f64 * (sizes.len() - 1) as f64))
}

/// Normalized difference sum `S(t)` over the family.
pub fn difference_sum<M, F>(model: &M, family: &F, steps: usize, include_input: bool) -> Result<f64>
where
    M: Model,
    F: Family<Member = M::Input>,
{
    if family.len() < 2 {
        return Err(Error::arg(format!("difference sum needs n >= 2 inputs, got {}", family.len())));
    }
    let matrix = complexity_matrix(model, family, &[steps], include_input)?;
    normalized_sum(matrix.iter().map(|row| row[0]), steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: usize,
    pub s: f64,
}

/// Points `(t', S(t'))` feeding the regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariabilityCurve {
    pub points: Vec<CurvePoint>,
    pub n: usize,
    pub family: FamilyDescriptor,
    pub model_id: String,
    pub include_input: bool,
    pub normalization: Normalization,
}

pub fn variability_curve<M, F>(model: &M, family: &F, params: &CoefficientParams) -> Result<VariabilityCurve>
where
    M: Model,
    F: Family<Member = M::Input>,
{
    let times = params.sample_times()?;
    if family.len() < 2 {
        return Err(Error::arg(format!("difference sum needs n >= 2 inputs, got {}", family.len())));
    }
    let matrix = complexity_matrix(model, family, &times, params.include_input)?;
    let points = times
        .iter()
        .enumerate()
        .map(|(p, &t)| {
            let divisor = match params.normalization {
                Normalization::Horizon => params.t_max,
                Normalization::PerPoint => t,
            };
            Ok(CurvePoint {
                t,
                s: normalized_sum(matrix.iter().map(|row| row[p]), divisor)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VariabilityCurve {
        points,
        n: family.len(),
        family: family.descriptor(),
        model_id: model.model_id(),
        include_input: params.include_input,
        normalization: params.normalization,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub rmse: f64,
    pub point_count: usize,
}

/// Ordinary least-squares line through `(x, y)` pairs.
pub fn least_squares(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::arg(format!("a fit needs >= 2 points, got {}", points.len())));
    }
    let n = points.len() as f64;
    let sum = |f: &dyn Fn(&(f64, f64)) -> f64| points.iter().map(f).fold(0.0, |acc, v| acc + v);
    let mean_x = sum(&|p| p.0) / n;
    let mean_y = sum(&|p| p.1) / n;
    let sxx = sum(&|p| (p.0 - mean_x) * (p.0 - mean_x));
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae are identical".to_string()));
    }
    let sxy = sum(&|p| (p.0 - mean_x) * (p.1 - mean_y));
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse = sum(&|p| {
        let r = p.1 - (intercept + slope * p.0);
        r * r
    });
    Ok(FitResult {
        slope,
        intercept,
        rmse: (sse / n).sqrt(),
        point_count: points.len(),
    })
}

pub fn fit_phi(curve: &VariabilityCurve) -> Result<FitResult> {
    let points: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.t as f64, p.s)).collect();
    least_squares(&points)
}

/// Every parameter needed to reproduce a coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub model_id: String,
    pub t_max: usize,
    pub t_min: usize,
    pub stride: usize,
    pub n: usize,
    pub width: usize,
    pub height: Option<usize>,
    pub boundary: Boundary,
    pub compressor_id: String,
    pub scheme: Scheme,
    pub include_input: bool,
    pub normalization: Normalization,
}

/// The parameters two results must share to be comparable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridKey {
    pub t_max: usize,
    pub t_min: usize,
    pub stride: usize,
    pub n: usize,
    pub width: usize,
    pub height: Option<usize>,
    pub boundary: Boundary,
    pub compressor_id: String,
    pub scheme: Scheme,
    pub include_input: bool,
    pub normalization: Normalization,
}

impl RunParams {
    pub fn grid_key(&self) -> GridKey {
        GridKey {
            t_max: self.t_max,
            t_min: self.t_min,
            stride: self.stride,
            n: self.n,
            width: self.width,
            height: self.height,
            boundary: self.boundary,
            compressor_id: self.compressor_id.clone(),
            scheme: self.scheme,
            include_input: self.include_input,
            normalization: self.normalization,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientResult {
    /// The fitted slope, equal to `fit.slope`.
    pub c_value: f64,
    pub fit: FitResult,
    pub params: RunParams,
    pub curve: VariabilityCurve,
}

/// The programmability coefficient of `model` over `family`.
pub fn coefficient<M, F>(model: &M, family: &F, params: &CoefficientParams) -> Result<CoefficientResult>
where
    M: Model,
    F: Family<Member = M::Input>,
{
    let curve = variability_curve(model, family, params)?;
    let fit = fit_phi(&curve)?;
    let desc = family.descriptor();
    Ok(CoefficientResult {
        c_value: fit.slope,
        fit,
        params: RunParams {
            model_id: model.model_id(),
            t_max: params.t_max,
            t_min: params.t_min,
            stride: params.stride,
            n: desc.n,
            width: desc.width,
            height: desc.height,
            boundary: desc.boundary,
            compressor_id: COMPRESSOR_ID.to_string(),
            scheme: desc.scheme,
            include_input: params.include_input,
            normalization: params.normalization,
        },
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexity::complexity;
    use crate::enumeration::gray_initials;

    fn pts(v: &[(f64, f64)]) -> FitResult {
        least_squares(v).unwrap()
    }

    #[test]
    fn ols_flat_line() {
        let f = pts(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        assert_eq!((f.slope, f.intercept, f.rmse, f.point_count), (0.0, 0.0, 0.0, 3));
    }

    #[test]
    fn ols_exact_line() {
        let f = pts(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        assert_eq!(f.slope, 1.0);
        assert_eq!(f.intercept, 0.0);
        assert_eq!(f.rmse, 0.0);
    }

    #[test]
    fn ols_by_hand() {
        // x̄ = 2, ȳ = 5/3, Sxx = 2, Sxy = 1; residuals -1/6, 1/3, -1/6.
        let f = pts(&[(1.0, 1.0), (2.0, 2.0), (3.0, 2.0)]);
        assert!((f.slope - 0.5).abs() < 1e-15);
        assert!((f.intercept - 2.0 / 3.0).abs() < 1e-15);
        assert!((f.rmse - (1.0f64 / 18.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ols_degenerate() {
        assert!(matches!(least_squares(&[(2.0, 1.0), (2.0, 3.0)]), Err(Error::DegenerateFit(_))));
        assert!(matches!(least_squares(&[(2.0, 1.0)]), Err(Error::Argument(_))));
    }

    #[test]
    fn default_sampling() {
        let p = CoefficientParams::new(200);
        assert_eq!((p.t_min, p.stride), (25, 11));
        let times = p.sample_times().unwrap();
        assert_eq!(times.len(), 16);
        assert_eq!((times[0], times[15]), (25, 190));
        assert!(CoefficientParams::new(100).sample_times().unwrap().len() >= 16);
        let small = CoefficientParams::new(3);
        assert_eq!(small.sample_times().unwrap(), vec![2, 3]);
        assert!(CoefficientParams::new(1).sample_times().is_err());
        let bad = CoefficientParams { stride: 0, ..CoefficientParams::new(50) };
        assert!(bad.sample_times().is_err());
    }

    #[test]
    fn difference_sum_needs_pairs() {
        let f = gray_initials(2, 8).unwrap();
        assert!(difference_sum(&RuleTable::elementary(30), &f, 5, true).is_ok());
        assert!(normalized_sum([5u64], 3).is_err());
    }

    #[test]
    fn difference_sum_matches_direct_complexities() {
        let rule = RuleTable::elementary(110);
        let family = gray_initials(8, 31).unwrap();
        let t = 20;
        let sizes: Vec<u64> = family
            .members()
            .iter()
            .map(|m| complexity(&rule, m, t).unwrap().bits)
            .collect();
        let direct: u64 = sizes.windows(2).map(|p| p[0].abs_diff(p[1])).sum();
        let expected = direct as f64 / (t as f64 * 7.0);
        assert_eq!(difference_sum(&rule, &family, t, true).unwrap(), expected);
    }

    #[test]
    fn difference_sum_symmetric_under_reversal() {
        let family = gray_initials(16, 41).unwrap();
        for rule in [30u8, 54, 110, 250] {
            let rule = RuleTable::elementary(rule);
            assert_eq!(
                difference_sum(&rule, &family, 33, true).unwrap(),
                difference_sum(&rule, &family.reversed(), 33, true).unwrap()
            );
        }
    }

    #[test]
    fn identical_sizes_give_zero() {
        // Rule 0 without the input row: every evolution is blank.
        let family = gray_initials(8, 16).unwrap();
        assert_eq!(difference_sum(&RuleTable::elementary(0), &family, 10, false).unwrap(), 0.0);
    }

    #[test]
    fn curve_deterministic_and_nonnegative() {
        let family = gray_initials(10, 33).unwrap();
        let params = CoefficientParams::new(48);
        let rule = RuleTable::elementary(90);
        let a = variability_curve(&rule, &family, &params).unwrap();
        assert_eq!(a, variability_curve(&rule, &family, &params).unwrap());
        assert!(a.points.iter().all(|p| p.s >= 0.0));
        assert!(a.points.windows(2).all(|w| w[0].t < w[1].t));
    }

    #[test]
    fn result_records_params() {
        let family = gray_initials(6, 21).unwrap();
        let res = coefficient(&RuleTable::elementary(30), &family, &CoefficientParams::new(40)).unwrap();
        assert_eq!(res.c_value, res.fit.slope);
        assert_eq!(res.params.model_id, "eca-30");
        assert_eq!(res.params.n, 6);
        assert_eq!(res.params.width, 21);
        assert_eq!(res.params.compressor_id, COMPRESSOR_ID);
        assert_eq!(res.params.scheme, Scheme::Gray);
    }
}
