use std::path::Path;

use num_bigint::BigUint;
use progc_core::{
    c_equivalent, coefficient, computes, gray_initials, gray_patches, is_zero_computer, random_grids,
    random_initials, rule_from_number, serialize, sweep_eca, zero_band, Boundary, CoefficientGrid,
    CoefficientParams, CoefficientResult, Configuration, Family, InputFamily, LifeFamily, LifeGrid,
    LifeRule, Normalization, RuleTable, Scheme, SweepConfig, COMPRESSOR_ID,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{
    CoeffArgs, Command, CompareArgs, EvolveArgs, FamilyArgs, FamilyKind, MeasureArgs, ModelArgs, ModelKind,
    ReplayArgs, SweepArgs,
};
use crate::error::{exit, CliError, CliResult};
use crate::manifest::{sha256_hex, Artifacts, RunManifest};
use crate::pbm;
use crate::report::{self, EpsilonSource, Side, Verdict, EVOLVE_SCHEMA};

const GRAY_WIDTH: usize = 61;
const RANDOM_WIDTH: usize = 40;
const LIFE_SIDE: usize = 32;

pub(crate) fn dispatch(command: Command, argv: &[String]) -> CliResult<i32> {
    match command {
        Command::Evolve(a) => evolve(&a, argv),
        Command::Coeff(a) => coeff(&a, argv),
        Command::Sweep(a) => sweep(&a, argv),
        Command::Compare(a) => compare(&a, argv),
        Command::Replay(a) => replay(&a),
    }
}

fn parse_rule(number: &str, k: u8, radius: u8) -> CliResult<RuleTable> {
    let n: BigUint = number
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("rule `{number}` is not a nonnegative integer")))?;
    Ok(rule_from_number(&n, k, radius)?)
}

fn ca_rule(model: &ModelArgs) -> CliResult<RuleTable> {
    let number = model
        .rule
        .as_deref()
        .ok_or_else(|| CliError::usage("--rule is required for --model ca"))?;
    parse_rule(number, model.k, model.radius)
}

fn boundary(text: &str) -> CliResult<Boundary> {
    Ok(text.parse()?)
}

fn scheme(family: &FamilyArgs) -> Scheme {
    match family.family {
        FamilyKind::Gray => Scheme::Gray,
        FamilyKind::Random => Scheme::Random {
            seed: family.seed,
            density: family.density,
        },
    }
}

fn input_family(
    scheme: Scheme,
    n: usize,
    width: usize,
    colors: u8,
    boundary: Boundary,
) -> CliResult<InputFamily> {
    let family = match scheme {
        Scheme::Gray => gray_initials(n, width)?,
        Scheme::Random { seed, density } => random_initials(n, width, seed, density)?,
    };
    let family = if colors == 2 { family } else { family.recolor(colors)? };
    Ok(family.with_boundary(boundary)?)
}

fn life_family(scheme: Scheme, n: usize, height: usize, width: usize) -> CliResult<LifeFamily> {
    Ok(match scheme {
        Scheme::Gray => gray_patches(n, height, width)?,
        Scheme::Random { seed, density } => random_grids(n, height, width, seed, density)?,
    })
}

fn params(t: usize, measure: &MeasureArgs) -> CliResult<CoefficientParams> {
    let normalization: Normalization = measure.normalization.parse()?;
    let params = CoefficientParams {
        include_input: !measure.exclude_input,
        normalization,
        ..CoefficientParams::new(t)
    };
    params.validate()?;
    Ok(params)
}

fn check_epsilon(eps: Option<f64>) -> CliResult<()> {
    match eps {
        Some(e) if !(e > 0.0 && e.is_finite()) => {
            Err(CliError::usage(format!("--epsilon must be positive and finite, got {e}")))
        }
        _ => Ok(()),
    }
}

fn print(bytes: &[u8]) {
    print!("{}", String::from_utf8_lossy(bytes));
}

fn evolve(args: &EvolveArgs, argv: &[String]) -> CliResult<i32> {
    if args.t == 0 {
        return Err(CliError::usage("--t must be >= 1"));
    }
    let scheme = match args.random_inputs {
        Some(_) => Scheme::Random {
            seed: args.seed,
            density: args.density,
        },
        None => Scheme::Gray,
    };
    let count = args.gray_inputs.or(args.random_inputs);
    let mut artifacts = Artifacts::new();
    let mut params = json!({
        "model": args.model.model,
        "t": args.t,
        "raw": args.raw,
    });
    match args.model.model {
        ModelKind::Ca => {
            let rule = ca_rule(&args.model)?;
            let bound = boundary(&args.model.boundary)?;
            let inputs: Vec<Configuration> = match (&args.input, count) {
                (Some(text), _) => vec![explicit_row(text, &rule, args.t, args.width, bound)?],
                (None, Some(n)) => {
                    let default = if args.random_inputs.is_some() { RANDOM_WIDTH } else { GRAY_WIDTH };
                    let width = args.width.unwrap_or(default);
                    params["family"] = json!({ "scheme": scheme, "n": n });
                    input_family(scheme, n, width, rule.colors(), bound)?.members().to_vec()
                }
                (None, None) => unreachable!("clap requires one input source"),
            };
            params["rule"] = json!(rule.number().to_string());
            params["k"] = json!(rule.colors());
            params["radius"] = json!(rule.radius());
            params["width"] = json!(inputs[0].width());
            params["boundary"] = json!(bound.label());
            let evolutions = inputs
                .par_iter()
                .map(|init| progc_core::evolve(&rule, init, args.t))
                .collect::<Result<Vec<_>, _>>()?;
            for (j, evo) in evolutions.iter().enumerate() {
                let rows: Vec<Vec<u8>> = evo.rows().iter().map(Configuration::cells).collect();
                let comments = evolve_comments(&rule.id(), j, &bound.label());
                artifacts.add(format!("evolution-{j:03}.pbm"), pbm::encode(&rows, &comments));
                if args.raw {
                    artifacts.add(format!("evolution-{j:03}.bin"), serialize(evo));
                }
            }
        }
        ModelKind::Life => {
            let rule = LifeRule::parse(&args.model.life_rule)?;
            let inputs: Vec<LifeGrid> = match (&args.input, count) {
                (Some(text), _) => vec![explicit_grid(text, args.height, args.width)?],
                (None, Some(n)) => {
                    let width = args.width.unwrap_or(LIFE_SIDE);
                    let height = args.height.unwrap_or(width);
                    params["family"] = json!({ "scheme": scheme, "n": n });
                    life_family(scheme, n, height, width)?.members().to_vec()
                }
                (None, None) => unreachable!("clap requires one input source"),
            };
            params["life_rule"] = json!(rule.notation());
            params["height"] = json!(inputs[0].height());
            params["width"] = json!(inputs[0].width());
            params["boundary"] = json!("cyclic");
            let evolutions = inputs
                .par_iter()
                .map(|init| rule.evolve(init, args.t))
                .collect::<Result<Vec<_>, _>>()?;
            for (j, evo) in evolutions.iter().enumerate() {
                let rows: Vec<Vec<u8>> = evo
                    .frames()
                    .iter()
                    .flat_map(|f| f.cells().chunks(f.width()).map(<[u8]>::to_vec).collect::<Vec<_>>())
                    .collect();
                let comments = evolve_comments(&rule.id(), j, "cyclic");
                artifacts.add(format!("evolution-{j:03}.pbm"), pbm::encode(&rows, &comments));
                if args.raw {
                    artifacts.add(format!("evolution-{j:03}.bin"), serialize(evo));
                }
            }
        }
    }
    if args.input.is_some() {
        params["input"] = json!(args.input);
    }
    artifacts.commit(&args.out, argv, params)?;
    Ok(exit::SUCCESS)
}

fn evolve_comments(model_id: &str, index: usize, boundary: &str) -> Vec<String> {
    vec![
        format!("schema={EVOLVE_SCHEMA} manifest={}", crate::manifest::MANIFEST_FILE),
        format!("model={model_id} input={index} boundary={boundary}"),
    ]
}

/// A digit string centred in a row wide enough to contain its light cone.
fn explicit_row(
    text: &str,
    rule: &RuleTable,
    t: usize,
    width: Option<usize>,
    bound: Boundary,
) -> CliResult<Configuration> {
    let cells: Vec<u8> = text
        .trim()
        .chars()
        .map(|c| {
            c.to_digit(10)
                .filter(|&d| d < rule.colors() as u32)
                .map(|d| d as u8)
                .ok_or_else(|| {
                    CliError::usage(format!("`{c}` is not a colour of a {}-colour rule", rule.colors()))
                })
        })
        .collect::<CliResult<_>>()?;
    if cells.is_empty() {
        return Err(CliError::usage("--input is empty"));
    }
    let width = width.unwrap_or(cells.len() + 2 * rule.radius() as usize * t);
    if width < cells.len() {
        return Err(CliError::usage(format!(
            "--width {width} is narrower than the {}-cell input",
            cells.len()
        )));
    }
    let fill = match bound {
        Boundary::Fixed(c) => c,
        Boundary::Cyclic => 0,
    };
    let mut row = vec![fill; width];
    let left = (width - cells.len()) / 2;
    row[left..left + cells.len()].copy_from_slice(&cells);
    Ok(Configuration::from_cells(rule.colors(), &row)?.with_boundary(bound)?)
}

/// A `/`-separated pattern centred on a torus (at least the pattern's size).
fn explicit_grid(text: &str, height: Option<usize>, width: Option<usize>) -> CliResult<LifeGrid> {
    let pattern = LifeGrid::parse(&text.replace('/', "\n"))?;
    if pattern.width() == 0 {
        return Err(CliError::usage("--input is empty"));
    }
    let width = width.unwrap_or(pattern.width().max(LIFE_SIDE));
    let height = height.unwrap_or(pattern.height().max(width));
    if height < pattern.height() || width < pattern.width() {
        return Err(CliError::usage(format!(
            "{height}x{width} grid cannot hold the {}x{} input",
            pattern.height(),
            pattern.width()
        )));
    }
    let (top, left) = ((height - pattern.height()) / 2, (width - pattern.width()) / 2);
    let mut grid = LifeGrid::empty(height, width)?;
    for r in 0..pattern.height() {
        for c in 0..pattern.width() {
            grid.set(top + r, left + c, pattern.get(r, c) == 1);
        }
    }
    Ok(grid)
}

fn coeff(args: &CoeffArgs, argv: &[String]) -> CliResult<i32> {
    check_epsilon(args.measure.epsilon)?;
    let scheme = scheme(&args.family);
    let life = args.model.model == ModelKind::Life;
    let t = args.t.unwrap_or(if life { 100 } else { 200 });
    let n = args.n.unwrap_or(if life { 16 } else { 40 });
    let params = params(t, &args.measure)?;

    let (res, calibrated) = if life {
        let rule = LifeRule::parse(&args.model.life_rule)?;
        let width = args.width.unwrap_or(LIFE_SIDE);
        let height = args.height.unwrap_or(width);
        let family = life_family(scheme, n, height, width)?;
        let res = coefficient(&rule, &family, &params)?;
        let eps = match args.measure.epsilon {
            Some(_) => None,
            None => Some(zero_band(&LifeRule::INERT, &family, &params)?),
        };
        (res, eps)
    } else {
        let rule = ca_rule(&args.model)?;
        let width = args.width.unwrap_or(GRAY_WIDTH);
        let family = input_family(scheme, n, width, rule.colors(), boundary(&args.model.boundary)?)?;
        let res = coefficient(&rule, &family, &params)?;
        let eps = match args.measure.epsilon {
            Some(_) => None,
            None => Some(zero_band(&RuleTable::inert(rule.colors(), rule.radius())?, &family, &params)?),
        };
        (res, eps)
    };
    let (epsilon, source) = match (args.measure.epsilon, calibrated) {
        (Some(e), _) => (e, EpsilonSource::User),
        (None, Some(e)) => (e, EpsilonSource::InertCalibration),
        (None, None) => unreachable!("epsilon is either given or calibrated"),
    };
    let zero = is_zero_computer(&res, epsilon)?;
    let comp = computes(&res, epsilon)?;
    let json = report::coeff_json(&res, epsilon, source, zero, comp)?;

    let mut artifacts = Artifacts::new();
    artifacts.add("coeff.json", json.clone());
    artifacts.add("curve.csv", report::curve_csv(&res.curve)?);
    let mut manifest_params = serde_json::to_value(&res.params)?;
    manifest_params["epsilon"] = json!(epsilon);
    manifest_params["epsilon_source"] = json!(source);
    if !life {
        manifest_params["rule"] = json!(args.model.rule);
    }
    artifacts.commit(&args.out, argv, manifest_params)?;
    print(&json);
    Ok(exit::SUCCESS)
}

fn sweep(args: &SweepArgs, argv: &[String]) -> CliResult<i32> {
    check_epsilon(args.measure.epsilon)?;
    let p = params(args.t, &args.measure)?;
    let config = SweepConfig {
        t_max: args.t,
        n: args.n,
        width: args.width,
        boundary: boundary(&args.boundary)?,
        scheme: scheme(&args.family),
        include_input: p.include_input,
        normalization: p.normalization,
        epsilon: args.measure.epsilon,
    };
    let mut report = sweep_eca(&config)?;
    report.manifest_ref = Some(crate::manifest::MANIFEST_FILE.to_string());
    let source = if args.measure.epsilon.is_some() {
        EpsilonSource::User
    } else {
        EpsilonSource::InertCalibration
    };
    let mut artifacts = Artifacts::new();
    artifacts.add("sweep.csv", report::sweep_csv(&report)?);
    artifacts.add("sweep.json", report::sweep_json(&report, source)?);
    let mut manifest_params = serde_json::to_value(&report.grid)?;
    manifest_params["epsilon"] = json!(report.epsilon);
    manifest_params["epsilon_source"] = json!(source);
    manifest_params["rules"] = json!("eca-0..255");
    artifacts.commit(&args.out, argv, manifest_params)?;
    let r30 = report.inert_grouping(30);
    eprintln!(
        "swept 256 rules: epsilon={} iqr={} rank(110)={} rank(30)={} r30-grouping={}",
        report.epsilon,
        report.iqr(),
        report.rank_of(110) + 1,
        report.rank_of(30) + 1,
        match (r30.shares_cluster, r30.near_zero_band) {
            (true, true) => "cluster+band",
            (true, false) => "cluster",
            (false, true) => "band",
            (false, false) => "none",
        }
    );
    Ok(exit::SUCCESS)
}

struct GridShape {
    t: Vec<usize>,
    n: Vec<usize>,
    width: usize,
    boundary: Boundary,
}

fn coefficient_grid(
    rule: &RuleTable,
    shape: &GridShape,
    scheme: Scheme,
    measure: &MeasureArgs,
) -> CliResult<CoefficientGrid> {
    if shape.t.is_empty() || shape.n.is_empty() {
        return Err(CliError::usage("--t and --n need at least one value"));
    }
    let mut points = Vec::with_capacity(shape.t.len() * shape.n.len());
    for &n in &shape.n {
        let family = input_family(scheme, n, shape.width, rule.colors(), shape.boundary)?;
        for &t in &shape.t {
            points.push(coefficient(rule, &family, &params(t, measure)?)?);
        }
    }
    Ok(CoefficientGrid {
        model_id: rule.id(),
        points,
    })
}

fn side(grid: &CoefficientGrid) -> Side<'_> {
    Side {
        model_id: grid.model_id.clone(),
        grid: grid.keys(),
        c_values: grid.points.iter().map(|p| p.c_value).collect(),
        points: &grid.points,
    }
}

fn compare(args: &CompareArgs, argv: &[String]) -> CliResult<i32> {
    if let Some(c) = args.c {
        if !(c > 0.0 && c.is_finite()) {
            return Err(CliError::usage(format!("--c must be positive and finite, got {c}")));
        }
    }
    let rule_a = parse_rule(&args.a, args.k, args.radius)?;
    let rule_b = parse_rule(&args.b, args.k, args.radius)?;
    let scheme = scheme(&args.family);
    let shape_a = GridShape {
        t: args.t.clone(),
        n: args.n.clone(),
        width: args.width,
        boundary: boundary(&args.boundary)?,
    };
    let shape_b = GridShape {
        t: args.b_t.clone().unwrap_or_else(|| args.t.clone()),
        n: args.b_n.clone().unwrap_or_else(|| args.n.clone()),
        width: args.b_width.unwrap_or(args.width),
        boundary: match &args.b_boundary {
            Some(b) => boundary(b)?,
            None => shape_a.boundary,
        },
    };
    let (ga, gb) = rayon::join(
        || coefficient_grid(&rule_a, &shape_a, scheme, &args.measure),
        || coefficient_grid(&rule_b, &shape_b, scheme, &args.measure),
    );
    let (ga, gb) = (ga?, gb?);

    let relation = if args.c.is_some() { "c-equivalent" } else { "behavioural" };
    let outcome = match args.c {
        Some(c) => c_equivalent_grid(&ga.points, &gb.points, c),
        None => progc_core::behaviourally_equivalent(&ga, &gb),
    };
    let (verdict, reason, max_diff) = match outcome {
        Ok(eq) => {
            let diff = ga
                .points
                .iter()
                .zip(&gb.points)
                .map(|(a, b)| (a.c_value - b.c_value).abs())
                .fold(0.0, f64::max);
            let v = if eq { Verdict::Equivalent } else { Verdict::NotEquivalent };
            (v, None, Some(diff))
        }
        Err(progc_core::Error::Incomparable(msg)) => (Verdict::Incomparable, Some(msg), None),
        Err(e) => return Err(e.into()),
    };
    let json = report::compare_json(
        verdict,
        relation,
        args.c,
        max_diff,
        reason.as_deref(),
        &side(&ga),
        &side(&gb),
        args.out.is_some(),
    )?;
    if let Some(out) = &args.out {
        let mut artifacts = Artifacts::new();
        artifacts.add("compare.json", json.clone());
        let params = json!({
            "a": rule_a.number().to_string(),
            "b": rule_b.number().to_string(),
            "k": args.k,
            "radius": args.radius,
            "c": args.c,
            "grid_a": ga.keys(),
            "grid_b": gb.keys(),
            "compressor_id": COMPRESSOR_ID,
        });
        artifacts.commit(out, argv, params)?;
    }
    print(&json);
    Ok(match verdict {
        Verdict::Incomparable => {
            eprintln!("progc: incomparable: {}", reason.unwrap_or_default());
            exit::INCOMPARABLE
        }
        _ => exit::SUCCESS,
    })
}

fn c_equivalent_grid(a: &[CoefficientResult], b: &[CoefficientResult], c: f64) -> progc_core::Result<bool> {
    if a.len() != b.len() {
        return Err(progc_core::Error::Incomparable(format!(
            "grids have {} and {} points",
            a.len(),
            b.len()
        )));
    }
    let mut all = true;
    for (pa, pb) in a.iter().zip(b) {
        all &= c_equivalent(pa, pb, c)?;
    }
    Ok(all)
}

fn replay(args: &ReplayArgs) -> CliResult<i32> {
    let manifest = RunManifest::load(&args.manifest)?;
    if manifest.command.first().map(String::as_str) == Some("replay") {
        return Err(CliError::usage("a replay manifest cannot be replayed"));
    }
    let command = manifest.command_with_out(&args.out);
    let code = crate::run(command)?;
    if code != exit::SUCCESS {
        return Ok(code);
    }
    let mismatched: Vec<Value> = manifest
        .artifacts
        .iter()
        .filter_map(|rec| {
            let actual = std::fs::read(Path::new(&args.out).join(&rec.path))
                .map(|b| sha256_hex(&b))
                .unwrap_or_default();
            (actual != rec.sha256).then(|| json!({ "path": rec.path, "expected": rec.sha256, "actual": actual }))
        })
        .collect();
    let verdict = json!({
        "replayed": manifest.command,
        "artifacts": manifest.artifacts.len(),
        "identical": mismatched.is_empty(),
        "mismatched": mismatched,
    });
    println!("{}", serde_json::to_string_pretty(&verdict)?);
    if mismatched.is_empty() {
        Ok(exit::SUCCESS)
    } else {
        Err(CliError::Internal(anyhow::anyhow!(
            "{} artifact(s) differ from the manifest",
            mismatched.len()
        )))
    }
}
