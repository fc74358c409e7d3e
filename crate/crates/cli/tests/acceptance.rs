//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if
//! any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use dicycle::bounds::{
    hstar_lower_bound, hstar_lower_bound_ceil, known_bounds, Function, Rational, Status,
};
use dicycle::gen::{self, enumerate_all, enumerate_regular_rooted};
use dicycle::{
    check_lemma_2_4, condense, critical_core, feasibility_floor, find_packing, moon_cycle,
    PackingSpec, Tournament,
};
use dicycle_oracle as oracle;

type Outcome = Result<String, String>;
type Brute = Box<dyn Fn(&Tournament, &[bool]) -> bool>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every vertex of every strong labeled tournament on at most 6 vertices
/// lies on cycles of every length.
fn moon_cross_validation() -> Outcome {
    let mut checked = 0u64;
    for n in 3..=6usize {
        for t in enumerate_all(n).unwrap() {
            if !oracle::strongly_connected(&t) {
                continue;
            }
            let cyclic = oracle::cyclic_subsets(&t);
            for v in 0..n {
                for len in 3..=n {
                    let c = moon_cycle(&t, v, len)
                        .map_err(|e| format!("n={n} v={v} len={len}: {e} on {t:?}"))?;
                    ensure(c.is_valid_in(&t) && c.len() == len && c.contains(v), || {
                        format!(
                            "invalid cycle {:?} for v={v} len={len} on {t:?}",
                            c.vertices()
                        )
                    })?;
                    ensure(oracle::cycle_through_exists(&cyclic, v, len), || {
                        format!("oracle disagrees for v={v} len={len} on {t:?}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (tournament, vertex, length) triples"))
}

fn check_condensation(t: &Tournament) -> Result<(), String> {
    let d = condense(t).map_err(|e| e.to_string())?;
    for (i, x) in d.components.iter().enumerate() {
        for y in &d.components[i + 1..] {
            ensure(t.dominates_set(x, y).unwrap(), || {
                format!("component {i} does not dominate a later one in {t:?}")
            })?;
        }
        let sub = t.induced(x).unwrap().tournament;
        ensure(x.len() == 1 || oracle::strongly_connected(&sub), || {
            format!("component {i} not strong in {t:?}")
        })?;
    }
    Ok(())
}

fn condensation_transitivity() -> Outcome {
    let mut checked = 0u64;
    for n in 1..=6usize {
        for t in enumerate_all(n).unwrap() {
            check_condensation(&t)?;
            checked += 1;
        }
    }
    for i in 0..10_000u64 {
        let n = 1 + (i % 32) as usize;
        check_condensation(&gen::random_tournament(n, 0xC0DE + i))?;
        checked += 1;
    }
    Ok(format!("{checked} tournaments"))
}

fn critical_core_strong() -> Outcome {
    let mut pairs = 0u64;
    for i in 0..1000u64 {
        let n = 1 + (i % 20) as usize;
        let seed = 0x5EED + i;
        // Alternate uniform instances with ones forced to larger minimum
        // out-degree so that every r up to (n-1)/2 gets exercised.
        let t = if i % 2 == 0 {
            gen::random_tournament(n, seed)
        } else {
            gen::random_min_outdegree(n, (i as usize / 2) % ((n - 1) / 2 + 1), seed).unwrap()
        };
        let delta = t.min_out_degree().unwrap();
        for r in 1..=delta {
            let ok = check_lemma_2_4(&t, r).map_err(|e| e.to_string())?;
            ensure(ok, || format!("critical core not strong: r={r} on {t:?}"))?;
            let core = critical_core(&t, r).unwrap();
            ensure(oracle::strongly_connected(&core.core.tournament), || {
                format!("oracle: critical core not strong: r={r} on {t:?}")
            })?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (tournament, r) pairs"))
}

fn sharpness_certificate() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("sharpness.jsonl");
    let bin = env!("CARGO_BIN_EXE_dicycle");
    let start = Instant::now();
    let status = Command::new(bin)
        .args(["certify-sharpness", "--out"])
        .arg(&path)
        .status()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(status.success(), || {
        format!("certify-sharpness exited with {status}")
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;

    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let cert: serde_json::Value =
        serde_json::from_str(text.lines().next().ok_or("empty certificate")?)
            .map_err(|e| e.to_string())?;
    ensure(cert["verdict"] == "exhausted-none", || {
        format!("verdict {}", cert["verdict"])
    })?;
    ensure(cert["stats"]["min_out_degree"] == 5, || {
        "stated min out-degree is not 5".into()
    })?;
    ensure(cert.get("witness").is_none(), || "witness present".into())?;

    let t = dicycle::io::decode_digraph6(cert["instance"]["digraph6"].as_str().unwrap()).unwrap();
    ensure(t == gen::paley(11).unwrap(), || {
        "instance is not Paley-11".into()
    })?;
    let scan = (0..11)
        .map(|v| (0..11).filter(|&u| t.dominates(v, u)).count())
        .min();
    ensure(scan == Some(5), || {
        format!("scanned min out-degree {scan:?}")
    })?;
    let floor = feasibility_floor(&PackingSpec::min_distinct(3, 3).unwrap());
    ensure(floor == 12 && floor > t.order(), || {
        format!("floor {floor}")
    })?;
    let cyclic = oracle::cyclic_subsets(&t);
    ensure(
        !oracle::packing_exists_min_distinct(&t, &cyclic, 3, 3),
        || "oracle found a packing".into(),
    )?;

    let revalidated = Command::new(bin)
        .arg("revalidate")
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(revalidated.status.success(), || {
        "revalidate rejected the certificate".into()
    })?;
    Ok(format!("exhausted-none in {elapsed:?}, revalidated"))
}

fn sample_packings(
    k: usize,
    l: usize,
    orders: (usize, usize),
    d: usize,
    count: u64,
    seed: u64,
) -> Outcome {
    let spec = PackingSpec::min_distinct(k, l).unwrap();
    let span = (orders.1 - orders.0 + 1) as u64;
    for i in 0..count {
        let n = orders.0 + (i % span) as usize;
        let t = gen::random_min_outdegree(n, d, seed + i).map_err(|e| e.to_string())?;
        ensure(t.min_out_degree().unwrap() >= d, || {
            format!("instance {i} below degree {d}")
        })?;
        let p = find_packing(&t, &spec)
            .ok_or_else(|| format!("no packing for instance {i} (n={n}) {t:?}"))?;
        p.validate(&t, &spec)?;
    }
    Ok(format!("{count} instances, all with witnesses"))
}

fn hstar_2_2_desk_check() -> Outcome {
    let spec = PackingSpec::min_distinct(2, 2).unwrap();
    let regular9 = enumerate_regular_rooted(9).map_err(|e| e.to_string())?;
    for (i, t) in regular9.iter().enumerate() {
        ensure(t.min_out_degree().unwrap() == 4, || {
            format!("instance {i} not 4-regular")
        })?;
        let p = find_packing(t, &spec)
            .ok_or_else(|| format!("no packing in 4-regular instance {i}: {t:?}"))?;
        p.validate(t, &spec)?;
    }
    let mut regular7 = 0u64;
    let mut exceptions = 0u64;
    for t in enumerate_all(7).unwrap().filter(|t| t.is_regular()) {
        regular7 += 1;
        let cyclic = oracle::cyclic_subsets(&t);
        let brute = oracle::packing_exists_min_distinct(&t, &cyclic, 2, 2);
        let found = find_packing(&t, &spec).is_some();
        ensure(brute == found, || {
            format!("search and oracle disagree on {t:?}")
        })?;
        exceptions += u64::from(!found);
    }
    ensure(exceptions > 0, || {
        "every 3-regular 7-vertex tournament has the pair".into()
    })?;
    Ok(format!(
        "{} rooted 4-regular 9-vertex tournaments all packed; {exceptions} of {regular7} labeled 3-regular 7-vertex tournaments have none",
        regular9.len()
    ))
}

fn bounds_consistency() -> Outcome {
    for k in 1..=12u32 {
        for l in 1..=k {
            let spec = PackingSpec::min_distinct(k as usize, l as usize).unwrap();
            let floor = feasibility_floor(&spec) as i64;
            let lb = hstar_lower_bound(k, l).unwrap();
            ensure(lb == Rational::new(floor - 1, 2), || {
                format!("({k},{l}): {lb} vs floor {floor}")
            })?;
        }
    }
    let exact = known_bounds(Function::HStar, &[3, 3]).map_err(|e| e.to_string())?;
    ensure(
        exact.status == Status::Exact && exact.upper == Some(6),
        || format!("h*(3,3) entry {exact:?}"),
    )?;
    ensure(hstar_lower_bound_ceil(3, 3).unwrap() == 6, || {
        "ceil of h*(3,3) lower bound is not 6".into()
    })?;
    Ok("78 pairs; h*(3,3) = 6".into())
}

fn packing_completeness() -> Outcome {
    let mut specs: Vec<(PackingSpec, Brute)> = Vec::new();
    for (k, l) in [(1usize, 1usize), (2, 1), (2, 2)] {
        specs.push((
            PackingSpec::min_distinct(k, l).unwrap(),
            Box::new(move |t, c| oracle::packing_exists_min_distinct(t, c, k, l)),
        ));
    }
    for a in 3..=7usize {
        specs.push((
            PackingSpec::exact(vec![a]).unwrap(),
            Box::new(move |t, c| oracle::packing_exists_exact(t, c, &[a])),
        ));
        for b in a..=7usize {
            specs.push((
                PackingSpec::exact(vec![a, b]).unwrap(),
                Box::new(move |t, c| oracle::packing_exists_exact(t, c, &[a, b])),
            ));
        }
    }
    let mut checks = 0u64;
    for n in 1..=7usize {
        for t in enumerate_all(n).unwrap() {
            let cyclic = oracle::cyclic_subsets(&t);
            for (spec, brute) in &specs {
                let found = find_packing(&t, spec);
                if let Some(p) = &found {
                    p.validate(&t, spec)?;
                }
                ensure(found.is_some() == brute(&t, &cyclic), || {
                    format!("disagree on {spec} for {t:?}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{checks} (tournament, spec) pairs over {} specs",
        specs.len()
    ))
}

fn main() {
    // Skip when invoked by `cargo test -- --list` style discovery.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 10] = [
        ("moon cross-validation", moon_cross_validation),
        ("condensation transitivity", condensation_transitivity),
        ("critical cores strongly connected", critical_core_strong),
        ("sharpness certificate at Paley-11", sharpness_certificate),
        ("k=3 l=3 sampling at d=6", || {
            sample_packings(3, 3, (13, 20), 6, 1000, 0x1_0000)
        }),
        ("h*(2,2) = 4 desk check", hstar_2_2_desk_check),
        ("k=3 l=2 sampling at d>=5", || {
            sample_packings(3, 2, (11, 16), 5, 1000, 0x2_0000)
        }),
        ("k=5 l=3 sampling at d=9", || {
            sample_packings(5, 3, (19, 24), 9, 100, 0x3_0000)
        }),
        ("bounds consistency", bounds_consistency),
        ("packing completeness vs oracle", packing_completeness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
