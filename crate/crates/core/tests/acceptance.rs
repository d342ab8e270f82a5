//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or overruns its time limit.

mod support {
    pub mod gen;
    pub mod golden;
}

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relcon::cone::{add_ray, common_cone_completion, path_consistent};
use relcon::consistency::{
    chain_consistent, common_completion, completion_unique, consistently_extends, generated_preorder,
    minimal_extension_at,
};
use relcon::io::{parse_document, MarketDoc, RelationPairDoc};
use relcon::oracle::{oracle_chain_consistent, oracle_enumerate_completions, total_preorder_ranks};
use relcon::pareto::{pareto_improvement, verify_improvement};
use relcon::{Chain, Cone, ConeError, LinkTag, Market, Membership, RationalVector, Relation, Universe};
use support::gen::{all_transitive, random_cone, random_transitive, universe};

const SEED: u64 = 0x5eed_c0de;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every transitive relation on `n ≤ 4` elements, the empty one included.
fn transitive_with_empty(n: usize) -> Vec<Relation> {
    let u = universe(n);
    let mut all = vec![Relation::empty(u.clone())];
    all.extend(all_transitive(&u));
    all
}

fn sparse_transitive(rng: &mut ChaCha8Rng, u: &Arc<Universe>, density: std::ops::Range<f64>) -> Relation {
    let p = rng.gen_range(density);
    random_transitive(rng, u, p)
}

fn mask(r: &Relation) -> u64 {
    let n = r.size();
    r.pairs().fold(0, |m, (a, b)| m | 1 << (a * n + b))
}

fn golden_pair(name: &str) -> (Relation, Relation) {
    let text = std::fs::read_to_string(support::golden::golden_dir().join(name)).unwrap();
    parse_document::<RelationPairDoc>(&text).unwrap().to_relations().unwrap()
}

fn golden_market(name: &str) -> Market {
    let text = std::fs::read_to_string(support::golden::golden_dir().join(name)).unwrap();
    parse_document::<MarketDoc>(&text).unwrap().to_market().unwrap()
}

fn matches_up_to_rotation(found: &Chain, expected: &Chain) -> bool {
    found.len() == expected.len() && (0..expected.len()).any(|k| &expected.rotated(k) == found)
}

fn counterexample_fidelity() -> Outcome {
    let (sim, prec) = golden_pair("gamma_pair.json");
    let syms = sim.symmetric_part().union(&prec.symmetric_part()).unwrap();
    let stricts = sim.asymmetric_part().union(&prec.asymmetric_part()).unwrap();
    ensure(syms.pairs().all(|(a, b)| !stricts.contains(a, b)), || "symmetric and strict parts overlap".into())?;

    let g = |s: &str| s.to_owned();
    let expected = Chain::new(
        vec![g("γ1"), g("γ3"), g("γ2"), g("γ4"), g("γ1")],
        vec![LinkTag::Strict2, LinkTag::Sym1, LinkTag::Strict2, LinkTag::Sym1],
    )
    .unwrap();
    let verdict = chain_consistent(&sim, &prec).unwrap();
    let witness = verdict.witness().ok_or("reported consistent")?;
    ensure(matches_up_to_rotation(witness, &expected), || format!("library witness {witness}"))?;

    let (mut out, mut err) = (Vec::new(), Vec::new());
    let path = support::golden::golden_dir().join("gamma_pair.json");
    let args = ["relcon".into(), "consistent".into(), path.into_os_string()];
    let code = relcon::cli::run::<_, std::ffi::OsString>(args, &mut out, &mut err);
    ensure(code == relcon::cli::EXIT_NEGATIVE, || format!("exit code {code}"))?;
    let doc: serde_json::Value = serde_json::from_slice(&out).unwrap();
    ensure(doc["consistent"] == false, || "cli reported consistent".into())?;
    let cli_chain: Chain = serde_json::from_value(doc["witness"].clone()).unwrap();
    ensure(matches_up_to_rotation(&cli_chain, &expected), || format!("cli witness {cli_chain}"))?;
    Ok(format!("witness {witness}"))
}

/// Checks the three equivalent verdicts and the oracle on one pair; returns
/// whether the pair is consistent.
fn check_pair(r1: &Relation, r2: &Relation, oracle_disagreements: &mut usize) -> Result<bool, String> {
    let verdict = chain_consistent(r1, r2).unwrap();
    let consistent = verdict.is_consistent();
    if let Some(w) = verdict.witness() {
        ensure(w.replays(r1, r2), || format!("witness {w} does not replay"))?;
    }
    let g = generated_preorder(r1, r2).unwrap();
    let by_closure = consistently_extends(&g, r1).unwrap() && consistently_extends(&g, r2).unwrap();
    let completion = common_completion(r1, r2);
    ensure(by_closure == consistent && completion.is_ok() == consistent, || {
        format!("verdicts differ on {:?} / {:?}", r1.id_pairs(), r2.id_pairs())
    })?;
    if let Ok(t) = completion {
        ensure(
            t.classify().total_preorder
                && consistently_extends(&t, r1).unwrap()
                && consistently_extends(&t, r2).unwrap(),
            || format!("bad completion for {:?} / {:?}", r1.id_pairs(), r2.id_pairs()),
        )?;
    }
    if oracle_chain_consistent(r1, r2).unwrap().is_consistent() != consistent {
        *oracle_disagreements += 1;
    }
    Ok(consistent)
}

struct MainCorpus {
    pairs: usize,
    consistent: usize,
    oracle_disagreements: usize,
}

fn verdict_corpus(rng: &mut ChaCha8Rng) -> Result<MainCorpus, String> {
    let mut c = MainCorpus {
        pairs: 0,
        consistent: 0,
        oracle_disagreements: 0,
    };
    let all = transitive_with_empty(3);
    ensure(all.len() == 171, || format!("{} transitive relations on 3 elements", all.len()))?;
    for r1 in &all {
        for r2 in &all {
            c.consistent += check_pair(r1, r2, &mut c.oracle_disagreements)? as usize;
            c.pairs += 1;
        }
    }
    for i in 0..10_000 {
        let u = universe(5 + i % 2);
        let r1 = sparse_transitive(rng, &u, 0.05..0.35);
        let r2 = sparse_transitive(rng, &u, 0.05..0.35);
        c.consistent += check_pair(&r1, &r2, &mut c.oracle_disagreements)? as usize;
        c.pairs += 1;
    }
    Ok(c)
}

/// Completion sets as bitmasks over the total preorders of one universe.
/// Consistent extension is checked against each input separately, so the
/// common completions of a pair are the intersection of the two sets.
fn completion_sets(all: &[Relation], u: &Arc<Universe>) -> Vec<u128> {
    let n = u.len();
    let index: HashMap<u64, usize> = total_preorder_ranks(n)
        .iter()
        .enumerate()
        .map(|(k, rank)| {
            let pairs = (0..n).flat_map(|a| (0..n).map(move |b| (a, b)));
            let t = Relation::from_index_pairs(u.clone(), pairs.filter(|&(a, b)| rank[a] <= rank[b])).unwrap();
            (mask(&t), k)
        })
        .collect();
    all.iter()
        .map(|r| {
            oracle_enumerate_completions(r, r)
                .unwrap()
                .iter()
                .fold(0u128, |s, t| s | 1 << index[&mask(t)])
        })
        .collect()
}

fn uniqueness(rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0usize;
    let mut unique = 0usize;
    for n in 1..=4 {
        let u = universe(n);
        let all = transitive_with_empty(n);
        let sets = completion_sets(&all, &u);
        // the factorisation against direct oracle calls
        for _ in 0..300 {
            let (i, j) = (rng.gen_range(0..all.len()), rng.gen_range(0..all.len()));
            let direct = oracle_enumerate_completions(&all[i], &all[j]).unwrap().len();
            let factored = (sets[i] & sets[j]).count_ones() as usize;
            ensure(direct == factored, || format!("factorisation fails on n = {n}"))?;
        }
        for i in 0..all.len() {
            for j in i..all.len() {
                let (r1, r2) = (&all[i], &all[j]);
                let count = (sets[i] & sets[j]).count_ones();
                let verdict = chain_consistent(r1, r2).unwrap().is_consistent();
                ensure(verdict == (count > 0), || {
                    format!("consistency {verdict} but {count} completions on n = {n}")
                })?;
                if !verdict {
                    continue;
                }
                checked += 1;
                let is_unique = completion_unique(r1, r2).unwrap();
                ensure(is_unique == (count == 1), || {
                    format!("unique = {is_unique} with {count} completions: {:?} / {:?}", r1.id_pairs(), r2.id_pairs())
                })?;
                if is_unique {
                    unique += 1;
                    let closure = r1.union(r2).unwrap().reflexive_closure().transitive_closure();
                    ensure(common_completion(r1, r2).unwrap() == closure, || {
                        format!("unique completion differs from closure: {:?} / {:?}", r1.id_pairs(), r2.id_pairs())
                    })?;
                }
            }
        }
    }
    Ok(format!("{checked} consistent unordered pairs, {unique} with a unique completion"))
}

fn cone_corpus(rng: &mut ChaCha8Rng) -> Vec<(Cone, Cone)> {
    (0..1200)
        .map(|i| {
            let d = 1 + i % 4;
            (random_cone(rng, d, 6), random_cone(rng, d, 6))
        })
        .collect()
}

fn path_consistency(corpus: &[(Cone, Cone)]) -> Outcome {
    let c1 = Cone::from_i64s(2, &[&[1, 0], &[-1, 0], &[0, 1]]).unwrap();
    let c2 = Cone::from_i64s(2, &[&[1, 0], &[-1, 0], &[0, -1]]).unwrap();
    let verdict = path_consistent(&c1, &c2).unwrap();
    let w = verdict.witness().ok_or("halfplanes reported consistent")?;
    let e2 = RationalVector::from_i64s(&[0, 1]);
    ensure(
        (w.delta1 == e2 || w.delta1 == -&e2) && w.delta2 == -&w.delta1 && w.validates(&c1, &c2),
        || format!("halfplane witness {w}"),
    )?;

    let mut inconsistent = 0;
    for (c1, c2) in corpus {
        let consistent = path_consistent(c1, c2).unwrap().is_consistent();
        match common_cone_completion(c1, c2) {
            Ok(f) => {
                ensure(consistent, || "completion for an inconsistent pair".into())?;
                for l in c1.linear_part_basis().iter().chain(&c2.linear_part_basis()) {
                    ensure(f.eval(l).is_zero(), || format!("functional nonzero on linear part {l}"))?;
                }
                let strict: Vec<RationalVector> =
                    c1.strict_generators().into_iter().chain(c2.strict_generators()).collect();
                for (i, a) in strict.iter().enumerate() {
                    ensure(f.eval(a).is_positive(), || format!("functional not positive on {a}"))?;
                    for b in &strict[i + 1..] {
                        let s = a + b;
                        ensure(f.eval(&s).is_positive(), || format!("functional not positive on {s}"))?;
                    }
                }
            }
            Err(ConeError::Inconsistent(w)) => {
                ensure(!consistent, || "no completion for a consistent pair".into())?;
                ensure(w.validates(c1, c2), || format!("witness {w} does not validate"))?;
                inconsistent += 1;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("{} cone pairs, {inconsistent} path-inconsistent", corpus.len()))
}

fn extension_invariants(rng: &mut ChaCha8Rng) -> Outcome {
    let mut calls = 0;
    while calls < 500 {
        let u = universe(rng.gen_range(3..=7));
        let r = sparse_transitive(rng, &u, 0.05..0.25);
        let n = r.size();
        let open: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && !r.contains(a, b) && !r.contains(b, a))
            .collect();
        if open.is_empty() {
            continue;
        }
        let (a, b) = open[rng.gen_range(0..open.len())];
        let e = minimal_extension_at(&r, a, b).unwrap();
        ensure(e.symmetric_part() == r.symmetric_part(), || "symmetric part changed".into())?;
        ensure(e.contains(a, b) && !e.contains(b, a), || "added pair not strict".into())?;
        ensure(e.is_transitive() && consistently_extends(&e, &r).unwrap(), || "not a consistent extension".into())?;
        calls += 1;
    }
    let mut rays = 0;
    while rays < 500 {
        let d = rng.gen_range(2..=4);
        let c = random_cone(rng, d, 4);
        let v = RationalVector::from_i64s(&(0..d).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>());
        if c.contains(&v).unwrap() || c.contains(&-&v).unwrap() {
            continue;
        }
        let e = add_ray(&c, &v).unwrap();
        ensure(e.linear_part_basis() == c.linear_part_basis(), || format!("linear part changed adding {v}"))?;
        ensure(e.membership(&v).unwrap() == Membership::StrictPart, || format!("{v} not strict"))?;
        ensure(c.generators().iter().all(|g| e.contains(g).unwrap()), || "cone shrank".into())?;
        rays += 1;
    }
    Ok(format!("{calls} minimal extensions, {rays} added rays"))
}

fn no_arbitrage() -> Outcome {
    let mut markets = 0;
    let mut free = 0;
    for n in 1..=4 {
        let all = transitive_with_empty(n);
        let fairs: Vec<&Relation> = all.iter().filter(|r| r.classify().equivalence).collect();
        let downs: Vec<&Relation> = all.iter().filter(|r| r.is_empty() || r.classify().strict_partial_order).collect();
        for fair in &fairs {
            for down in &downs {
                let m = Market::from_relations((*fair).clone(), (*down).clone()).unwrap();
                let no_chain = match m.detect_arbitrage() {
                    None => true,
                    Some(chain) => {
                        ensure(chain.replays(&m), || format!("chain {chain} does not replay"))?;
                        false
                    }
                };
                let consistent = chain_consistent(fair, down).unwrap().is_consistent();
                let t = m.attainable_trades();
                let extends = consistently_extends(&t, fair).unwrap() && consistently_extends(&t, down).unwrap();
                let prefs = m.complete_preferences();
                ensure(no_chain == consistent && no_chain == extends && no_chain == prefs.is_ok(), || {
                    format!("statements differ on {:?} / {:?}", fair.id_pairs(), down.id_pairs())
                })?;
                if let Ok(p) = prefs {
                    ensure(
                        p.order.classify().total_preorder
                            && consistently_extends(&p.order, fair).unwrap()
                            && consistently_extends(&p.order, down).unwrap(),
                        || "preferences do not extend the market".into(),
                    )?;
                }
                markets += 1;
                free += no_chain as usize;
            }
        }
    }
    for name in ["gamma_market.json", "two_goods_market.json"] {
        let m = golden_market(name);
        let chain = m.detect_arbitrage().ok_or_else(|| format!("{name}: no arbitrage found"))?;
        ensure(chain.replays(&m), || format!("{name}: chain {chain} does not replay"))?;
    }
    Ok(format!("{markets} markets, {free} arbitrage-free"))
}

fn pareto(corpus: &[(Cone, Cone)]) -> Outcome {
    let factors = [
        BigRational::from_integer(BigInt::from(2)),
        BigRational::from_integer(BigInt::from(7)),
        BigRational::new(BigInt::from(1), BigInt::from(3)),
    ];
    let mut found = 0;
    for (c1, c2) in corpus {
        let consistent = path_consistent(c1, c2).unwrap().is_consistent();
        let imp = pareto_improvement(c1, c2).unwrap();
        ensure(imp.is_some() != consistent, || "improvement presence disagrees with consistency".into())?;
        if let Some(imp) = imp {
            found += 1;
            ensure(verify_improvement(c1, c2, &imp.delta).unwrap(), || format!("delta {} fails", imp.delta))?;
            for k in &factors {
                let scaled = imp.delta.scale(k);
                ensure(verify_improvement(c1, c2, &scaled).unwrap(), || format!("rescaled delta {scaled} fails"))?;
            }
        }
    }
    Ok(format!("{} cone pairs, {found} improvements", corpus.len()))
}

fn golden() -> Outcome {
    let failures: Vec<String> = support::golden::CASES
        .iter()
        .filter_map(|c| support::golden::check(c).err())
        .collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{} cases", support::golden::CASES.len()))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = true;
    let mut report = |id: u32, name: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let result = result.and_then(|m| {
            ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
            Ok(m)
        });
        match &result {
            Ok(m) => println!("PASS criterion {id} {name}: {m} ({took:.2?})"),
            Err(m) => println!("FAIL criterion {id} {name}: {m} ({took:.2?})"),
        }
        ok &= result.is_ok();
    };
    let secs = Duration::from_secs;

    report(1, "counterexample fidelity", secs(1), &mut counterexample_fidelity);

    let mut corpus = None;
    report(2, "equivalent verdicts", secs(120), &mut || {
        let c = verdict_corpus(&mut rng)?;
        let m = format!("{} pairs, {} consistent", c.pairs, c.consistent);
        corpus = Some(c);
        Ok(m)
    });
    report(3, "uniqueness", secs(120), &mut || uniqueness(&mut rng));
    report(4, "oracle equivalence", secs(1), &mut || {
        let c = corpus.as_ref().ok_or("criterion 2 corpus unavailable")?;
        ensure(c.oracle_disagreements == 0, || format!("{} disagreements", c.oracle_disagreements))?;
        Ok(format!("{} pairs, no disagreements", c.pairs))
    });

    let cones = cone_corpus(&mut rng);
    report(5, "cone path consistency", secs(180), &mut || path_consistency(&cones));
    report(6, "extension invariants", secs(60), &mut || extension_invariants(&mut rng));
    report(7, "no-arbitrage", secs(120), &mut no_arbitrage);
    report(8, "pareto", secs(60), &mut || pareto(&cones));
    report(9, "cli golden files", secs(10), &mut golden);

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
