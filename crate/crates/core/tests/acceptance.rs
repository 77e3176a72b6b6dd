//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use stratbundle::doc::to_canonical_string;
use stratbundle::fincat::CatFunctor;
use stratbundle::funcspace::associated_bundle;
use stratbundle::oracle::{gen_instance, gen_pair, run_suite, InstanceSpec, Suite, SuiteConfig, SuiteReport};
use stratbundle::strabundle::catalog::{double_cover_c3, double_cover_c3_z2, trivial_2sheet};
use stratbundle::strabundle::{fiberwise_product, realize_total, validate_bundle, StratBundle};
use stratbundle::triviality::covering_space;

const SEEDS: usize = 100;
const PAIRS: u64 = 50;
const PULLBACK_LIMIT: f64 = 60.0;
const BUNDLE_LIMIT: f64 = 60.0;
const PRINCIPAL_LIMIT: f64 = 120.0;
const PRODUCT_LIMIT: f64 = 30.0;

struct Line {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn suite(s: Suite, timing: bool) -> SuiteReport {
    run_suite(&SuiteConfig {
        suite: s,
        spec: InstanceSpec::default(),
        seeds: SEEDS,
        negative_control: false,
        timing,
    })
    .expect("suite runs")
}

fn suite_line(name: &'static str, s: Suite, limit: f64) -> Line {
    let r = suite(s, true);
    let t = r.wall_time.unwrap_or(f64::INFINITY);
    let mut detail = format!(
        "{}/{} seeds pass, {} violations, {} rejected inputs, {} checks, {:.2} s (limit {limit} s)",
        r.passes,
        r.seeds,
        r.failures.len(),
        r.invalid_inputs.len(),
        r.checks,
        t
    );
    if let Some(f) = r.failures.first().or(r.invalid_inputs.first()) {
        detail.push_str(&format!("; first: seed {} {:?}", f.seed, f.outcome));
    }
    Line {
        name,
        ok: r.passes == SEEDS && t < limit,
        detail,
    }
}

fn covering_line() -> Line {
    let c = covering_space(&double_cover_c3()).expect("double cover");
    let cycles: Vec<&str> = c.monodromy.iter().map(|m| m.cycles.as_str()).collect();
    let t = covering_space(&trivial_2sheet()).expect("trivial cover");
    let ok = c.num_components == 1
        && c.counts_by_dim == [6, 6]
        && cycles == ["(1 2)"]
        && c.even_covering.holds()
        && t.num_components == 2;
    Line {
        name: "covering space of the circle",
        ok,
        detail: format!(
            "double cover: {} component(s), counts {:?}, monodromy {:?}; trivial cover: {} components",
            c.num_components, c.counts_by_dim, cycles, t.num_components
        ),
    }
}

/// Fibre element ids of a product bundle are `(x,y)`.
fn split_pair(id: &str) -> (&str, &str) {
    id.strip_prefix('(').and_then(|s| s.strip_suffix(')')).and_then(|s| s.split_once(',')).expect("pair element")
}

/// Compares the total complex of the fiberwise product with the fibred
/// product of the two total complexes over the base.
fn product_matches(x: &StratBundle, xp: &StratBundle, p: &StratBundle) -> Result<(), String> {
    let (tx, txp, tp) = (realize_total(x), realize_total(xp), realize_total(p));
    let b = x.base();
    let name = |y: &StratBundle, c: usize, v: usize| y.structure().ff.fibre(y.fibre_obj(c))[v].clone();
    let mut fibred = BTreeSet::new();
    for c in 0..b.len() {
        for e in tx.fibre(c) {
            for ep in txp.fibre(c) {
                fibred.insert((e, ep));
            }
        }
    }
    let mut to_pair = HashMap::new();
    for (e, &(c, v)) in tp.elements.iter().enumerate() {
        let id = name(p, c, v);
        let (a, bb) = split_pair(&id);
        let i = (0..x.fibre_size(c)).find(|&i| name(x, c, i) == a).ok_or("unknown first coordinate")?;
        let j = (0..xp.fibre_size(c)).find(|&j| name(xp, c, j) == bb).ok_or("unknown second coordinate")?;
        to_pair.insert(e, (tx.element_index(c, i), txp.element_index(c, j)));
    }
    let image: BTreeSet<_> = to_pair.values().copied().collect();
    if image != fibred || to_pair.len() != fibred.len() {
        return Err("elements are not the fibred product".into());
    }
    let rx: BTreeSet<_> = tx.relations.iter().copied().collect();
    let rxp: BTreeSet<_> = txp.relations.iter().copied().collect();
    let mut expected = BTreeSet::new();
    for &(lo, hi) in &rx {
        for &(lop, hip) in &rxp {
            if tx.projection(lo) == txp.projection(lop) && tx.projection(hi) == txp.projection(hip) {
                expected.insert(((lo, lop), (hi, hip)));
            }
        }
    }
    let got: BTreeSet<_> = tp.relations.iter().map(|(lo, hi)| (to_pair[lo], to_pair[hi])).collect();
    if got != expected {
        return Err("relations are not the fibred product".into());
    }
    Ok(())
}

fn product_line() -> Line {
    let start = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..PAIRS {
        let (x, xp) = gen_pair(&InstanceSpec::default().with_seed(seed)).expect("pair");
        let outcome = fiberwise_product(&x, &xp).map_err(|e| e.to_string()).and_then(|p| {
            let report = validate_bundle(&p);
            if !report.is_valid() {
                return Err(report.summary());
            }
            product_matches(&x, &xp, &p)
        });
        if let Err(e) = outcome {
            failures.push(format!("seed {seed}: {e}"));
        }
    }
    let t = start.elapsed().as_secs_f64();
    Line {
        name: "fiberwise product",
        ok: failures.is_empty() && t < PRODUCT_LIMIT,
        detail: format!(
            "{}/{PAIRS} pairs match the fibred product, {t:.2} s (limit {PRODUCT_LIMIT} s){}",
            PAIRS as usize - failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    }
}

fn associated_line() -> Line {
    let mut failures = Vec::new();
    for seed in 0..PAIRS {
        let x = gen_instance(&InstanceSpec::default().with_seed(seed)).expect("instance").bundle;
        let phi = CatFunctor::identity(&x.structure().cat);
        match associated_bundle(&x, &phi, x.structure_arc().clone()) {
            Ok(a) if a.bundle.equivalent(&x) => {}
            Ok(_) => failures.push(format!("seed {seed}: result differs from the input")),
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    let x = double_cover_c3_z2();
    let cat = &x.structure().cat;
    let e = cat.identity(0);
    let trivial = CatFunctor {
        on_objects: vec![0],
        on_morphisms: vec![e; cat.num_morphisms()],
    };
    let killed = associated_bundle(&x, &trivial, x.structure_arc().clone())
        .and_then(|a| covering_space(&a.bundle))
        .map(|c| (c.num_components, c.monodromy.iter().map(|m| m.cycles.clone()).collect::<Vec<_>>()));
    let kill_ok = matches!(&killed, Ok((2, m)) if m.iter().all(|c| c == "()"));
    Line {
        name: "associated bundle",
        ok: failures.is_empty() && kill_ok,
        detail: format!(
            "identity functor reproduces {}/{PAIRS} inputs; trivial homomorphism on the double cover gives {:?}{}",
            PAIRS as usize - failures.len(),
            killed.map_err(|e| e.to_string()),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    }
}

fn determinism_line() -> Line {
    let mut differing = Vec::new();
    for s in Suite::ALL {
        let a = to_canonical_string(&suite(s, false)).expect("report");
        let b = to_canonical_string(&suite(s, false)).expect("report");
        if a != b {
            differing.push(s.name());
        }
    }
    Line {
        name: "deterministic reports",
        ok: differing.is_empty(),
        detail: if differing.is_empty() {
            "re-running every suite gives byte-identical JSON".into()
        } else {
            format!("reports differ for {differing:?}")
        },
    }
}

fn main() -> ExitCode {
    let lines = [
        suite_line("pull-back suite", Suite::Pullback, PULLBACK_LIMIT),
        suite_line("bundle suite", Suite::Bundle, BUNDLE_LIMIT),
        suite_line("principal suite", Suite::Principal, PRINCIPAL_LIMIT),
        covering_line(),
        product_line(),
        associated_line(),
        determinism_line(),
    ];
    for l in &lines {
        println!("{} {}: {}", if l.ok { "PASS" } else { "FAIL" }, l.name, l.detail);
    }
    if lines.iter().all(|l| l.ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
