//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed even when all
//! criteria pass; the process exits nonzero if any criterion fails.

#[path = "../../core/tests/support/reference.rs"]
mod reference;

use std::fmt::Write as _;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use progc_cli::manifest::{sha256_hex, RunManifest};
use progc_core::{
    calibrate_epsilon, calibrate_life_epsilon, coefficient, computes, deserialize, evolve, gray_initials,
    gray_patches, is_zero_computer, random_initials, serialize, sweep_eca, Boundary, CoefficientParams,
    Configuration, Dims, Family, LifeRule, Normalization, RuleTable, SweepConfig, SweepReport,
};
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reference::{naive_curve, naive_evolution, naive_gray, naive_slope};

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Result<(), String> + 'a>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed < budget
}

fn inert_zero_band() -> Outcome {
    let start = Instant::now();
    let family = gray_initials(40, 61).unwrap();
    let params = CoefficientParams::new(200);
    let eps = calibrate_epsilon(&family, &params).unwrap();
    let mut detail = format!("eps={eps:.3e}");
    let mut ok = true;
    for r in [0u8, 255, 204, 51] {
        let res = coefficient(&RuleTable::elementary(r), &family, &params).unwrap();
        let zero = is_zero_computer(&res, eps).unwrap();
        ok &= zero && res.c_value.abs() < eps;
        write!(detail, " R{r}={:.3e}", res.c_value).unwrap();
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, Duration::from_secs(10));
    write!(detail, " in {:.2}s (budget 10s)", elapsed.as_secs_f64()).unwrap();
    check(ok, detail)
}

fn exemplar_ordering(report: &SweepReport, elapsed: Duration) -> Outcome {
    let c = |r| report.c_value(r);
    let top = |r| report.rank_of(r) < 64;
    let iqr = report.iqr();
    let gap = (c(122) - c(89)).abs();
    let claims = [
        ("C(110)>C(0)", c(110) > c(0)),
        ("C(110)>C(255)", c(110) > c(255)),
        ("C(110)>C(30)", c(110) > c(30)),
        ("R110 top quartile", top(110)),
        ("R122 top quartile", top(122)),
        ("R89 top quartile", top(89)),
        (
            "R122~R89 at c=IQR",
            progc_core::c_equivalent(report.result(122), report.result(89), iqr).unwrap(),
        ),
        ("sweep < 5 min", within(elapsed, Duration::from_secs(300))),
    ];
    let mut detail = format!(
        "ranks 110:{} 122:{} 89:{} 30:{}; |C122-C89|={gap:.3e} IQR={iqr:.3e}; sweep {:.1}s;",
        report.rank_of(110) + 1,
        report.rank_of(122) + 1,
        report.rank_of(89) + 1,
        report.rank_of(30) + 1,
        elapsed.as_secs_f64()
    );
    let failed: Vec<&str> = claims.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    if failed.is_empty() {
        detail.push_str(" all sub-claims hold");
    } else {
        write!(detail, " failing: {}", failed.join(", ")).unwrap();
    }
    check(failed.is_empty(), detail)
}

fn r30_grouping(report: &SweepReport) -> Outcome {
    let g = report.inert_grouping(30);
    let which = match (g.shares_cluster, g.near_zero_band) {
        (true, true) => "both disjuncts",
        (true, false) => "shares k-means cluster with R0/R255",
        (false, true) => "within 2 eps of the zero band",
        (false, false) => "neither disjunct",
    };
    check(
        g.holds(),
        format!(
            "{which}; clusters R30:{} R0:{} R255:{}; C(30)={:.3e} eps={:.3e}",
            report.cluster_of(30),
            report.cluster_of(0),
            report.cluster_of(255),
            report.c_value(30),
            report.epsilon
        ),
    )
}

fn r132_parity() -> Outcome {
    let rule = RuleTable::elementary(132);
    let width = 40;
    let mut detail = String::from("survivors");
    let mut ok = true;
    for size in 2..=9usize {
        let mut cells = vec![0u8; width];
        let left = (width - size) / 2;
        cells[left..left + size].fill(1);
        let init = Configuration::from_cells(2, &cells).unwrap();
        let steps = size + 4;
        let evo = evolve(&rule, &init, steps).unwrap();
        let survivors = evo.last().count(1);
        let naive = naive_evolution(132, &cells, steps, None);
        let naive_survivors = naive.last().unwrap().iter().filter(|&&c| c == 1).count();
        ok &= survivors == size % 2 && naive_survivors == survivors;
        write!(detail, " {size}:{survivors}").unwrap();
    }
    check(ok, detail)
}

fn gol_positivity() -> Outcome {
    let start = Instant::now();
    let family = gray_patches(16, 32, 32).unwrap();
    let params = CoefficientParams::new(100);
    let res = coefficient(&LifeRule::CONWAY, &family, &params).unwrap();
    let eps = calibrate_life_epsilon(&family, &params).unwrap();
    let ok = computes(&res, eps).unwrap();
    let elapsed = start.elapsed();
    check(
        ok && within(elapsed, Duration::from_secs(60)),
        format!("C={:.3e} eps={eps:.3e} in {:.2}s (budget 60s)", res.c_value, elapsed.as_secs_f64()),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0A4C);
    let instances = 24;
    for i in 0..instances {
        let rule: u8 = rng.random();
        let n = rng.random_range(2..14);
        let width = rng.random_range(8..80);
        let t_max = rng.random_range(6..80);
        let fixed = [None, Some(0), None, Some(1)][i % 4];
        let family = if i % 3 == 2 {
            random_initials(n, width, rng.random(), 0.5).unwrap()
        } else {
            gray_initials(n, width).unwrap()
        };
        let family = family.with_boundary(fixed.map_or(Boundary::Cyclic, Boundary::Fixed)).unwrap();
        let inputs: Vec<Vec<u8>> = family.members().iter().map(|m| m.cells()).collect();
        if i % 3 != 2 && inputs != naive_gray(n, width) {
            return Err(format!("instance {i}: Gray family differs from reference"));
        }
        let normalization = if i % 5 == 4 { Normalization::PerPoint } else { Normalization::Horizon };
        let include_input = i % 7 != 6;
        let params = CoefficientParams {
            include_input,
            normalization,
            ..CoefficientParams::new(t_max)
        };
        let res = coefficient(&RuleTable::elementary(rule), &family, &params).unwrap();
        let times = params.sample_times().unwrap();
        let expected = naive_curve(rule, &inputs, &times, fixed, include_input, |t| match normalization {
            Normalization::Horizon => t_max,
            Normalization::PerPoint => t,
        });
        let xs: Vec<f64> = times.iter().map(|&t| t as f64).collect();
        let naive_c = naive_slope(&xs, &expected);
        let curve_ok = res.curve.points.iter().zip(&expected).all(|(p, e)| p.s.to_bits() == e.to_bits());
        if !curve_ok || res.c_value.to_bits() != naive_c.to_bits() {
            return Err(format!(
                "instance {i} (rule {rule}, n {n}, W {width}, t {t_max}): {} vs reference {naive_c}",
                res.c_value
            ));
        }
    }
    Ok(format!("{instances} randomized instances bit-identical"))
}

fn gray_exhaustive() -> Result<(), String> {
    for n in 2..=1024usize {
        let bits = (usize::BITS - (n - 1).leading_zeros()) as usize;
        let family = gray_initials(n, bits).unwrap();
        let m = family.members();
        for j in 0..n - 1 {
            if m[j].hamming(&m[j + 1]) != 1 {
                return Err(format!("n={n}: members {j},{} differ in more than one cell", j + 1));
            }
        }
        let mut cells: Vec<Vec<u8>> = m.iter().map(Configuration::cells).collect();
        cells.sort();
        cells.dedup();
        if cells.len() != n {
            return Err(format!("n={n}: duplicate members"));
        }
    }
    Ok(())
}

fn light_cone() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11_6E7);
    for case in 0..200 {
        let rule = RuleTable::elementary(rng.random());
        let width = rng.random_range(16..200);
        let steps = rng.random_range(1..60);
        let cells: Vec<u8> = (0..width).map(|_| rng.random_bool(0.5) as u8).collect();
        let p = rng.random_range(0..width);
        let mut flipped = cells.clone();
        flipped[p] ^= 1;
        let a = evolve(&rule, &Configuration::from_cells(2, &cells).unwrap(), steps).unwrap();
        let b = evolve(&rule, &Configuration::from_cells(2, &flipped).unwrap(), steps).unwrap();
        for (s, (ra, rb)) in a.rows().iter().zip(b.rows()).enumerate() {
            for i in 0..width {
                let d = (i as isize - p as isize).rem_euclid(width as isize) as usize;
                let dist = d.min(width - d);
                if dist > s && ra.get(i) != rb.get(i) {
                    return Err(format!("case {case}: cell {i} changed at step {s}, {dist} cells from the flip"));
                }
            }
        }
    }
    Ok(())
}

fn serialization_roundtrip() -> Result<(), String> {
    let mut runner = TestRunner::new(PropConfig {
        cases: 256,
        failure_persistence: None,
        ..PropConfig::default()
    });
    let strategy = (2u8..=4, 1usize..150, 1usize..20, any::<u64>(), any::<u8>());
    runner
        .run(&strategy, |(colors, width, steps, seed, rule_seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cells: Vec<u8> = (0..width).map(|_| rng.random_range(0..colors)).collect();
            let init = Configuration::from_cells(colors, &cells).unwrap();
            let len = (colors as usize).pow(3);
            let mut trng = ChaCha8Rng::seed_from_u64(rule_seed as u64);
            let table: Vec<u8> = (0..len).map(|_| trng.random_range(0..colors)).collect();
            let rule = RuleTable::from_table(colors, 1, table).unwrap();
            let evo = evolve(&rule, &init, steps).unwrap();
            let dims = Dims {
                rows: steps + 1,
                width,
                colors,
            };
            let back = deserialize(&serialize(&evo), dims).unwrap();
            prop_assert_eq!(back.as_slice(), evo.rows());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn progc(args: &[&str], workers: Option<&str>) -> Result<(), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_progc"));
    cmd.args(args);
    match workers {
        Some(w) => cmd.env("PROGC_WORKERS", w),
        None => cmd.env_remove("PROGC_WORKERS"),
    };
    let out = cmd.output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))
    }
}

fn file_hashes(dir: &Path, names: &[&str]) -> Result<Vec<String>, String> {
    names
        .iter()
        .map(|n| fs::read(dir.join(n)).map(|b| sha256_hex(&b)).map_err(|e| e.to_string()))
        .collect()
}

fn manifest_reproducibility(root: &Path) -> Result<(), String> {
    let first = root.join("coeff-a");
    let again = root.join("coeff-b");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let first_s = s(&first);
    progc(&["coeff", "--rule", "110", "--out", &first_s], None)?;
    let manifest = RunManifest::load(&first.join("manifest.json")).map_err(|e| e.to_string())?;
    for rec in &manifest.artifacts {
        if sha256_hex(&fs::read(first.join(&rec.path)).map_err(|e| e.to_string())?) != rec.sha256 {
            return Err(format!("{} does not match its manifest hash", rec.path));
        }
    }
    let args = manifest.command_with_out(&again);
    progc(&args.iter().map(String::as_str).collect::<Vec<_>>(), None)?;
    let names: Vec<&str> = manifest.artifacts.iter().map(|a| a.path.as_str()).collect();
    if file_hashes(&first, &names)? != file_hashes(&again, &names)? {
        return Err("re-run from manifest produced different artifacts".into());
    }
    Ok(())
}

fn scheduling_independence(root: &Path) -> Result<(), String> {
    let one = root.join("sweep-1");
    let many = root.join("sweep-n");
    progc(&["sweep", "--out", one.to_str().unwrap()], Some("1"))?;
    progc(&["sweep", "--out", many.to_str().unwrap()], Some("8"))?;
    let names = ["sweep.csv", "sweep.json"];
    if file_hashes(&one, &names)? != file_hashes(&many, &names)? {
        return Err("1-worker and 8-worker sweeps differ".into());
    }
    Ok(())
}

fn invariant_suite() -> Outcome {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let parts: [(&str, Check); 5] = [
        ("gray hamming-1 n<=1024", Box::new(gray_exhaustive)),
        ("light cone x200", Box::new(light_cone)),
        ("serialization roundtrip x256", Box::new(serialization_roundtrip)),
        ("manifest reproducibility", Box::new(|| manifest_reproducibility(root.path()))),
        ("1 vs 8 workers", Box::new(|| scheduling_independence(root.path()))),
    ];
    let mut passed = Vec::new();
    let mut failed = Vec::new();
    for (name, part) in parts.iter() {
        match part() {
            Ok(()) => passed.push(*name),
            Err(e) => failed.push(format!("{name}: {e}")),
        }
    }
    if failed.is_empty() {
        Ok(passed.join("; "))
    } else {
        Err(failed.join("; "))
    }
}

fn run(label: &str, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    match outcome {
        Ok(detail) => {
            println!("PASS [{label}] {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL [{label}] {detail}");
            false
        }
    }
}

fn main() {
    let start = Instant::now();
    let report = sweep_eca(&SweepConfig::default()).unwrap();
    let sweep_time = start.elapsed();

    let results = [
        run("1 inert zero band", inert_zero_band),
        run("2 exemplar ordering", || exemplar_ordering(&report, sweep_time)),
        run("3 R30 grouping", || r30_grouping(&report)),
        run("4 R132 parity", r132_parity),
        run("5 GoL positivity", gol_positivity),
        run("6 oracle equivalence", oracle_equivalence),
        run("7 invariant suite", invariant_suite),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
