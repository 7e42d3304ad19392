//! Acceptance gate: one PASS/FAIL line per criterion, with its time budget.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use retwords::beta::{beta_integers, dominant_root, gap_word_matches_fixed_point, rm_conditions_sweep};
use retwords::factors::FactorClass;
use retwords::returns::{build_return_trie, conjugate_left, default_depth_cap, reduce_right, return_sets_of_length};
use retwords::rm::{check_complexity_criterion, check_product_structure, check_rm, Method};
use retwords::source::{builtin, BUILTINS};
use retwords::{build_factor_table, return_set, GrowingTable, Word, WordSource};

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    budget_secs: u64,
    run: fn() -> Outcome,
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn render_set(src: &WordSource, set: &BTreeSet<Word>) -> BTreeSet<String> {
    set.iter().map(|w| src.alphabet().render(w)).collect()
}

fn strings(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn golden_return_sets() -> Outcome {
    let src = builtin("r4_example").map_err(e)?;
    let cases: [(&str, &[&str]); 5] = [
        ("1", &["13", "1323", "1424", "142324"]),
        ("2", &["23", "2314", "2413", "241314"]),
        ("23", &["2314", "2314241314", "232413", "232413142413"]),
        ("2413", &["241314", "24131423", "24132314", "2413231423"]),
        ("2413142", &["24131423", "24131424132314", "241314232413231423", "241314241323142324132314"]),
    ];
    for (w, expected) in cases {
        let word = src.alphabet().parse(w).map_err(e)?;
        let got = render_set(&src, &return_set(&src, &word).map_err(e)?.as_set());
        ensure!(got == strings(expected), "R({w}) = {got:?}");
    }
    Ok("5 sets equal".into())
}

fn thue_morse_trie() -> Outcome {
    let src = builtin("thue_morse").map_err(e)?;
    let w = src.alphabet().parse("01").map_err(e)?;
    let mut g = GrowingTable::build(&src, 8).map_err(e)?;
    let trie = build_return_trie(&mut g, &w, default_depth_cap(&w)).map_err(e)?;
    let a = src.alphabet();
    let internal: BTreeSet<String> = trie.internal().map(|n| a.render(&n.label)).collect();
    let leaves: BTreeSet<String> = trie.leaves().map(|n| a.render(&n.label)).collect();
    ensure!(internal == strings(&["01", "010", "011", "0100", "0110", "01100"]), "internal {internal:?}");
    ensure!(leaves == strings(&["0101", "01001", "01101", "011001"]), "leaves {leaves:?}");
    let returns = render_set(&src, &trie.returns());
    ensure!(returns == strings(&["01", "010", "011", "0110"]), "returns {returns:?}");
    let scanned = render_set(&src, &return_set(&src, &w).map_err(e)?.as_set());
    ensure!(scanned == returns, "scan {scanned:?}");
    ensure!(trie.leaf_identity(), "leaf identity");
    Ok("6 internal nodes, 4 leaves".into())
}

fn sturmian_r2() -> Outcome {
    let directives: [&[u32]; 5] = [&[1], &[2, 1], &[1, 2], &[3, 1, 2], &[1, 1, 2]];
    for d in directives {
        let src = WordSource::sturmian(d.to_vec()).map_err(e)?;
        let v = check_rm(&src, 2, 40, Method::FullScan).map_err(e)?;
        ensure!(v.holds(), "{} fails: {:?}", src.name(), v.witness);
    }
    let a = retwords::word::Alphabet::digits(2).map_err(e)?;
    let periodic = WordSource::eventually_periodic(a.clone(), Word::empty(), a.parse("01").map_err(e)?).map_err(e)?;
    let v = check_rm(&periodic, 2, 40, Method::FullScan).map_err(e)?;
    let w = v.witness.ok_or("periodic word satisfies R2")?;
    ensure!(w.return_count == 1, "witness has {} returns", w.return_count);
    Ok(format!("5 Sturmian words hold; (01)^inf fails at {}", a.render(&w.factor)))
}

fn r3_instances() -> Outcome {
    let trib = builtin("tribonacci").map_err(e)?;
    let t = build_factor_table(&trib, 30).map_err(e)?;
    for n in 0..=30 {
        ensure!(t.complexity(n).map_err(e)? == 2 * n + 1, "tribonacci C({n})");
        for r in t.reports(n).map_err(e)? {
            ensure!(r.class != FactorClass::WeakBispecial, "tribonacci weak bispecial");
        }
    }
    let v = check_rm(&trib, 3, 30, Method::FullScan).map_err(e)?;
    ensure!(v.holds(), "tribonacci R3 fails: {:?}", v.witness);

    let chacon = builtin("chacon_recoded").map_err(e)?;
    let t = build_factor_table(&chacon, 20).map_err(e)?;
    let mut weak = 0;
    for n in 0..=20 {
        ensure!(t.complexity(n).map_err(e)? == 2 * n + 1, "chacon C({n})");
        weak += t.reports(n).map_err(e)?.iter().filter(|r| r.class == FactorClass::WeakBispecial).count();
    }
    ensure!(weak >= 1, "no weak bispecial factor in chacon");
    let mut many = None;
    'outer: for n in 0..=20 {
        for w in t.factors(n).map_err(e)? {
            let count = return_set(&chacon, w).map_err(e)?.len();
            if count >= 4 {
                many = Some((chacon.alphabet().render(w), count));
                break 'outer;
            }
        }
    }
    let (w, count) = many.ok_or("no chacon factor with 4 or more returns")?;
    Ok(format!("tribonacci R3 to 30; chacon {weak} weak bispecials, #R({w}) = {count}"))
}

fn r4_anomaly() -> Outcome {
    let src = builtin("r4_example").map_err(e)?;
    let v = check_rm(&src, 4, 16, Method::FullScan).map_err(e)?;
    ensure!(v.holds(), "R4 fails: {:?}", v.witness);
    let t = build_factor_table(&src, 20).map_err(e)?;
    for n in 1..=20 {
        let c = t.complexity(n).map_err(e)?;
        // 3n+1 is odd for even n, so there C(n) differs from it.
        ensure!(c % 2 == 0, "C({n}) = {c} is odd");
    }
    let l2: BTreeSet<String> = t.factors(2).map_err(e)?.iter().map(|w| src.alphabet().render(w)).collect();
    ensure!(l2 == strings(&["13", "14", "23", "24", "31", "32", "41", "42"]), "L2 = {l2:?}");

    // φ swaps 1 <-> 4 and 2 <-> 3, i.e. letter l -> 3 - l.
    let phi = |w: &Word| w.map_letters(|l| 3 - l);
    let mut sets = BTreeMap::new();
    let mut len = 0;
    for n in 0..=10 {
        let (rows, used) = return_sets_of_length(&src, &t, n, len).map_err(e)?;
        len = used;
        for r in rows {
            let set = r.as_set();
            sets.insert(r.factor, set);
        }
    }
    for (w, set) in &sets {
        let image: BTreeSet<Word> = set.iter().map(phi).collect();
        let other = sets.get(&phi(w)).ok_or_else(|| format!("φ({}) is not a factor", src.alphabet().render(w)))?;
        ensure!(*other == image, "R(φ({})) differs", src.alphabet().render(w));
    }
    Ok(format!("R4 to 16, C(20) = {}, φ checked on {} factors", t.complexity(20).map_err(e)?, sets.len()))
}

fn structural_identities() -> Outcome {
    let mut checked = 0;
    for name in BUILTINS {
        let src = builtin(name).map_err(e)?;
        let t = build_factor_table(&src, 20).map_err(e)?;
        for n in 0..=20 {
            ensure!(t.second_difference_identity(n).map_err(e)?, "{name}: second difference at {n}");
        }
        let mut g = GrowingTable::new(&src, t.clone());
        for n in 0..=12 {
            for w in t.factors(n).map_err(e)? {
                let label = src.alphabet().render(w);
                ensure!(t.kirchhoff_identity(w).map_err(e)?, "{name}: Kirchhoff at {label}");
                let scan = return_set(&src, w).map_err(e)?;
                let trie = build_return_trie(&mut g, w, default_depth_cap(w)).map_err(e)?;
                ensure!(trie.leaf_identity(), "{name}: leaf identity at {label}");
                ensure!(trie.leaf_count() == scan.len(), "{name}: leaf count at {label}");
                let complete: BTreeSet<Word> = scan.complete_returns().into_iter().collect();
                ensure!(trie.complete_returns() == complete, "{name}: trie vs scan at {label}");

                let right = t.right_extensions(w).map_err(e)?;
                if right.only().is_some() {
                    let reduced = reduce_right(&mut g, w).map_err(e)?;
                    ensure!(reduced.as_set() == scan.as_set(), "{name}: R(w) = R(wb) at {label}");
                }
                if let Some(a) = t.left_extensions(w).map_err(e)?.only() {
                    let conj = conjugate_left(&mut g, a, w).map_err(e)?;
                    let direct = return_set(&src, &w.push_front(a)).map_err(e)?;
                    ensure!(conj.as_set() == direct.as_set(), "{name}: R(aw) = aR(w)a⁻¹ at {label}");
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} factors over {} builtins", BUILTINS.len()))
}

fn return_count_bounds() -> Outcome {
    for (name, m) in [("fibonacci", 2), ("tribonacci", 3)] {
        let src = builtin(name).map_err(e)?;
        let r = check_complexity_criterion(&src, m, 20).map_err(e)?;
        ensure!(r.no_weak_bispecial, "{name} has a weak bispecial factor");
        ensure!(r.lower_bound_checked && r.upper_bound_checked, "{name}: bounds not checked");
        ensure!(r.rm_holds && r.complexity_matches, "{name}: {r:?}");
    }
    Ok("fibonacci and tribonacci to 20".into())
}

fn rm_conditions_agree() -> Outcome {
    let rows = rm_conditions_sweep(4, 3, 14).map_err(e)?;
    let bad: Vec<String> = rows
        .iter()
        .filter(|r| !r.agrees())
        .map(|r| {
            format!("{:?} predicted {} observed {} witness {:?}", r.coefficients, r.predicted, r.observed, r.witness)
        })
        .collect();
    ensure!(bad.is_empty(), "{}", bad.join("; "));
    let holding = rows.iter().filter(|r| r.observed).count();
    Ok(format!("{} Parry vectors agree, {holding} satisfy R_m", rows.len()))
}

fn beta_coding() -> Outcome {
    for t in [&[1, 1][..], &[1, 0, 1], &[1, 1, 1], &[2, 1]] {
        ensure!(gap_word_matches_fixed_point(t, 200).map_err(e)?, "{t:?}: gap word differs");
        let beta = dominant_root(t).map_err(e)?.beta;
        let list = beta_integers(t, 201).map_err(e)?;
        for (pair, &k) in list.integers.windows(2).zip(&list.gaps) {
            let k = k as usize;
            let expected: f64 = (k + 1..=t.len()).map(|i| t[i - 1] as f64 / beta.powi((i - k) as i32)).sum();
            let gap = pair[1].value - pair[0].value;
            ensure!((gap - expected).abs().le(&1e-9), "{t:?}: gap {gap} vs {expected}");
        }
    }
    Ok("4 vectors, 200 letters each".into())
}

fn product_witness() -> Outcome {
    let src = builtin("r4_example").map_err(e)?;
    let a = src.alphabet();
    let mut found = Vec::new();
    for w in ["1", "23"] {
        let word = a.parse(w).map_err(e)?;
        let p = check_product_structure(&src, &word, 8).map_err(e)?.ok_or_else(|| format!("no witness for {w}"))?;
        let v: Vec<String> = p.v.iter().map(|x| a.render(x)).collect();
        found.push(format!("{w}: w1={} w2={} v={}", a.render(&p.w1), a.render(&p.w2), v.join("/")));
    }
    Ok(found.join("; "))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "golden return sets of r4_example", budget_secs: 5, run: golden_return_sets },
        Criterion { name: "return trie of 01 in thue_morse", budget_secs: 1, run: thue_morse_trie },
        Criterion { name: "R2 on Sturmian words, (01)^inf fails", budget_secs: 30, run: sturmian_r2 },
        Criterion { name: "R3 on tribonacci, chacon_recoded contrast", budget_secs: 30, run: r3_instances },
        Criterion { name: "R4 on r4_example with even complexity", budget_secs: 60, run: r4_anomaly },
        Criterion { name: "structural identities over builtins", budget_secs: 60, run: structural_identities },
        Criterion { name: "return-count bounds without weak bispecials", budget_secs: 10, run: return_count_bounds },
        Criterion { name: "R_m conditions vs observed verdicts", budget_secs: 180, run: rm_conditions_agree },
        Criterion { name: "β-integer gap coding", budget_secs: 10, run: beta_coding },
        Criterion { name: "product structure around weak bispecials", budget_secs: 30, run: product_witness },
    ];
    let mut failures = 0;
    for (i, Criterion { name, budget_secs: budget, run }) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over budget; {d}")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} [{:>2}] {name} ({:.2}s / {budget}s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
