//! Acceptance criteria, one line of output per criterion. Runs without the test
//! harness so the lines always show: `cargo test -p ramop --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ramop_core::cooperad::cooperad_checks;
use ramop_core::dual::{conjecture_verdict, DualWorkspace};
use ramop_core::forms::{claimed_in_forms, relation_survey, DEFAULT_SEED};
use ramop_core::graph::{self, arnold_series, lemma_checks, GraphPresentation, GraphWorkspace, Mode};
use ramop_core::ram::{self, distributive_check, hopf_check, Which};
use ramop_core::ramanujan::predicted_dims;
use ramop_core::report::SuiteReport;
use ramop_core::{BiDegree, DimTable, Limits};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("{what} took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs()))
}

fn suite_passes(r: &SuiteReport) -> Result<(), String> {
    match r.checks.iter().find(|c| !c.passed) {
        None => Ok(()),
        Some(c) => Err(format!("[{} n={}] {}: {}", r.suite, r.n, c.name, c.witness.clone().unwrap_or_default())),
    }
}

fn criterion_1() -> Outcome {
    let mut ws = ram::workspace(Which::Ram, Limits::default());
    let start = Instant::now();
    for n in 1..=3 {
        let d = ws.dims(n).map_err(|e| e.to_string())?;
        ensure(d == predicted_dims(n), || format!("n={n}: {d} vs {}", predicted_dims(n)))?;
    }
    within(start, Duration::from_secs(1), "n <= 3")?;
    let d = ws.dims(4).map_err(|e| e.to_string())?;
    ensure(d == predicted_dims(4), || format!("n=4: {d} vs {}", predicted_dims(4)))?;
    within(start, Duration::from_secs(300), "n = 4")?;
    Ok(format!("Ram(n) = psi_n for n = 1..4, total {} at n = 4", d.total()))
}

fn criterion_2() -> Outcome {
    let mut ws = ram::workspace(Which::Ram, Limits::default());
    let c = ws.component(3).map_err(|e| e.to_string())?;
    let want = DimTable::from_pairs([((0, 0), 1), ((0, 1), 3), ((0, 2), 2), ((1, 1), 3), ((1, 2), 5), ((2, 2), 3)]);
    ensure(c.dims == want, || format!("table {}", c.dims))?;
    ensure(c.dims.total() == 17, || format!("total {}", c.dims.total()))?;
    ensure(c.monomials.len() == 27, || format!("{} free monomials", c.monomials.len()))?;
    ensure(c.ideal_rank() == 10, || format!("relation rank {}", c.ideal_rank()))?;
    let psi11 = ramop_core::ramanujan::psi(3).eval(1, 1);
    ensure(psi11 == (27 - 10).into(), || format!("psi_3(1,1) = {psi11}"))?;
    Ok("Ram(3) table matches, 27 - rank 10 = 17 = psi_3(1,1)".into())
}

fn criterion_3() -> Outcome {
    let mut ram = ram::workspace(Which::Ram, Limits::default());
    let mut r = GraphWorkspace::r(Mode::Forest, Limits::default());
    for n in 1..=4 {
        let (a, b) = (ram.dims(n).map_err(|e| e.to_string())?, r.dims(n).map_err(|e| e.to_string())?);
        ensure(a == b, || format!("n={n}: Ram {a}, R {b}"))?;
    }
    Ok("R(n) and Ram(n) bigraded dims agree for n = 1..4".into())
}

fn criterion_4() -> Outcome {
    let mut dw = DualWorkspace::new(Limits::default());
    for n in 1..=3 {
        let v = conjecture_verdict(&mut dw, n).map_err(|e| e.to_string())?;
        ensure(v.well_defined.passed, || format!("n={n}: {:?}", v.well_defined.witness))?;
        ensure(v.isomorphism, || format!("n={n}: blocks {:?}", v.blocks))?;
    }
    let start = Instant::now();
    let v = conjecture_verdict(&mut dw, 4).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(1800), "n = 4 verdict")?;
    ensure(v.well_defined.passed, || format!("n=4: {:?}", v.well_defined.witness))?;
    Ok(format!("isomorphism for n = 1..3; n = 4 verdict: isomorphism = {}", v.isomorphism))
}

fn criterion_5() -> Outcome {
    let mut p = ram::workspace(Which::Poisson, Limits::default());
    let mut totals = Vec::new();
    for n in 1..=5 {
        let d = p.dims(n).map_err(|e| e.to_string())?;
        let want = predicted_dims(n).filter(|b| b.h == 0);
        ensure(d == want, || format!("Poisson n={n}: {d} vs {want}"))?;
        totals.push(d.total());
    }
    ensure(totals == [1, 2, 6, 24, 120], || format!("Poisson totals {totals:?}"))?;
    let mut b = ram::workspace(Which::Bessel, Limits::default());
    for n in 1..=4 {
        let d = b.dims(n).map_err(|e| e.to_string())?;
        let want = predicted_dims(n).filter(|x| x.h == x.w);
        ensure(d == want, || format!("Bessel n={n}: {d} vs {want}"))?;
    }
    Ok("Poisson = psi_n(0,y) for n <= 5, Bessel = diagonal for n <= 4".into())
}

fn criterion_6() -> Outcome {
    for n in 1..=4 {
        let (c, direct, via) = distributive_check(Limits::default(), n).map_err(|e| e.to_string())?;
        ensure(c.passed, || format!("n={n}: direct {direct}, partitions {via}"))?;
    }
    let lg3 = ram::workspace(Which::LieGriess, Limits::default()).dims(3).map_err(|e| e.to_string())?;
    ensure(lg3.total() == 10, || format!("dim LieGriess(3) = {}", lg3.total()))?;
    Ok("dim Ram(n) = sum over partitions of LieGriess blocks, n <= 4; dim LieGriess(3) = 10".into())
}

fn criterion_7() -> Outcome {
    let limits = Limits::default();
    let mut ram_ws = ram::workspace(Which::Ram, limits);
    let mut r_ws = GraphWorkspace::r(Mode::Forest, limits);
    let mut cases = 0;
    for n in 1..=4 {
        for rep in [
            ram::differential_checks(&mut ram_ws, n),
            hopf_check(&mut ram_ws, n),
            graph::differential_checks(&mut r_ws, n),
            cooperad_checks(&mut r_ws, n),
        ] {
            let rep = rep.map_err(|e| e.to_string())?;
            suite_passes(&rep)?;
            cases += rep.checks.iter().map(|c| c.cases).sum::<usize>();
        }
    }
    let lemmas = lemma_checks(limits, 4).map_err(|e| e.to_string())?;
    suite_passes(&lemmas)?;
    for name in ["sum of (aab) over permutations vanishes", "sum of (abb) over permutations vanishes"] {
        ensure(lemmas.check(name).is_some_and(|c| c.passed), || format!("missing {name}"))?;
    }
    let mut arnold = GraphWorkspace::new(GraphPresentation::arnold(), Mode::Full, limits);
    for n in 1..=5 {
        let d = arnold.dims(n).map_err(|e| e.to_string())?;
        let series: Vec<u64> = (0..n as u32).map(|k| d.get(BiDegree::new(k, k)) as u64).collect();
        ensure(series == arnold_series(n) && d.total() as u64 == series.iter().sum::<u64>(), || {
            format!("Arnold n={n}: {d}")
        })?;
    }
    Ok(format!("differentials, Laplacians, ideals, Theta, lemmas, forest = full, Arnold n <= 5 ({cases} cases)"))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    for n in 1..=5 {
        for v in relation_survey(n, 20, DEFAULT_SEED).map_err(|e| e.to_string())? {
            if v.claimed {
                ensure(v.holds, || format!("n={n} {}: {}", v.family, v.witness.clone().unwrap_or_default()))?;
                instances += v.instances;
            }
        }
    }
    within(start, Duration::from_secs(30), "forms survey")?;
    let claimed: Vec<&str> = graph::RelationFamily::R
        .iter()
        .filter(|f| claimed_in_forms(**f))
        .map(|f| f.name())
        .collect();
    Ok(format!("{} vanish at 20 seeded points, n <= 5 ({instances} instance evaluations per point)", claimed.join(", ")))
}

fn run_cli(cache: &Path) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ramop"))
        .args(["verify", "--suite", "all", "--n", "3"])
        .env("RAMOP_CACHE_DIR", cache)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let (cold, code) = run_cli(dir.path())?;
    within(start, Duration::from_secs(60), "verify --suite all --n 3")?;
    ensure(code == 0, || format!("exit code {code}"))?;
    let (warm, _) = run_cli(dir.path())?;
    let other = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (fresh, _) = run_cli(other.path())?;
    ensure(cold == warm && cold == fresh, || "reports differ between runs".into())?;
    let v: serde_json::Value = serde_json::from_slice(&cold).map_err(|e| e.to_string())?;
    ensure(v["schema_version"] == 1 && v["passed"] == true, || "report header".into())?;
    Ok(format!("three runs byte-identical ({} bytes)", cold.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 dimension match Ram(n) = psi_n, n <= 4", criterion_1),
        ("2 Ram(3) table and relation rank", criterion_2),
        ("3 dual-side dimension match R(n) = Ram(n), n <= 4", criterion_3),
        ("4 conjecture verdicts", criterion_4),
        ("5 Poisson and Bessel sub-operads", criterion_5),
        ("6 distributive-law factorization", criterion_6),
        ("7 property suites", criterion_7),
        ("8 forms oracle", criterion_8),
        ("9 determinism of verify --suite all --n 3", criterion_9),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match &out {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{secs:.2} s]"),
            Err(msg) => {
                println!("FAIL  criterion {name}: {msg} [{secs:.2} s]");
                failed.push(name);
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
