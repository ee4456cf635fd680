//! Acceptance gate: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the output.

mod common;

use std::time::{Duration, Instant};

use logicspace::builders::{
    boolean_algebra, enumerate_posets, godel_witness, heyting_from_upsets, logic_from_lattice_filters, samples,
    FilterOptions, FinitePoset,
};
use logicspace::connectives::{check_degenerate_primes, prime_extension};
use logicspace::corpus::{all_logics, all_spaces, degenerate_logics, random_extension_pair, sample_logics, NamedLogic};
use logicspace::duality::{
    enumerate_logic_maps, logic_space, roundtrip_logic, roundtrip_space, stable_iff_disjunction, LogicMap,
};
use logicspace::{verify_connectives, AbstractLogic, FiniteSpace, Subset};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;

struct Outcome {
    failures: Vec<String>,
    checked: usize,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: Vec::new(), checked: 0 }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn poset_corpus() -> Vec<(String, FinitePoset, AbstractLogic)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        for (i, p) in enumerate_posets(n).unwrap().into_iter().enumerate() {
            let logic =
                logic_from_lattice_filters(&heyting_from_upsets(&p).unwrap(), FilterOptions::default()).unwrap();
            out.push((format!("poset{n}-{i}"), p, logic));
        }
    }
    out
}

fn corpus() -> Vec<NamedLogic> {
    all_logics(4).unwrap()
}

fn distributive(logic: &AbstractLogic) -> bool {
    verify_connectives(logic).distributive
}

fn canonical_relation(n: usize, leq: impl Fn(usize, usize) -> bool) -> u64 {
    common::permutations(n)
        .iter()
        .map(|p| {
            let mut bits = 0u64;
            for i in 0..n {
                for j in 0..n {
                    if leq(i, j) {
                        bits |= 1 << (p[i] * n + p[j]);
                    }
                }
            }
            bits
        })
        .min()
        .unwrap_or(0)
}

fn logic_roundtrip() -> Outcome {
    let mut out = Outcome::new();
    for (n, expected) in [(1, 1), (2, 2), (3, 5), (4, 16)] {
        let got = enumerate_posets(n).unwrap().len();
        let oracle = common::poset_count(n);
        out.check(got == expected && oracle == expected, || format!("{n} points: {got} posets, oracle {oracle}"));
    }
    for (name, poset, logic) in poset_corpus() {
        let id = LogicMap::identity(&logic);
        match roundtrip_logic(&logic, Some(&id)) {
            Ok(r) => out.check(r.iso_ok && r.ok(), || format!("{name}: {:?}", r.failures)),
            Err(e) => out.check(false, || format!("{name}: {e}")),
        }
        // the primes of an upset algebra are the principal upsets, ordered as the poset
        let space = logic_space(&logic).unwrap();
        let basis = common::basis_masks(&space);
        let up = common::specialization_up(&basis, space.point_count());
        let same_order = space.point_count() == poset.len()
            && canonical_relation(poset.len(), |a, b| poset.leq(a, b))
                == canonical_relation(up.len(), |x, y| up[x] >> y & 1 == 1);
        out.check(same_order, || format!("{name}: prime space order differs from the poset"));
    }
    out
}

fn space_roundtrip() -> Outcome {
    let mut out = Outcome::new();
    for (name, _, logic) in poset_corpus() {
        let space = logic_space(&logic).unwrap();
        match roundtrip_space(&space, None) {
            Ok(r) => out.check(r.iso_ok, || format!("F({name}): {:?}", r.failures)),
            Err(e) => out.check(false, || format!("F({name}): {e}")),
        }
        let filters = common::prime_filters(&common::basis_masks(&space), space.point_count());
        out.check(filters.len() == space.point_count(), || {
            format!("F({name}): {} prime filters for {} points", filters.len(), space.point_count())
        });
    }
    out
}

fn spectrality() -> Outcome {
    let mut out = Outcome::new();
    for l in corpus() {
        let class = verify_connectives(&l.logic);
        if !class.distributive {
            continue;
        }
        let space = logic_space(&l.logic).unwrap();
        let n = space.point_count();
        let basis = common::basis_masks(&space);
        let theories = common::theory_masks(&l.logic);
        let has_valid = common::valid_formulas(&theories, l.logic.universe()) != 0;
        let has_inconsistent = common::inconsistent_formulas(&theories, l.logic.universe()) != 0;
        let carrier = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        out.check(basis.contains(&carrier) == has_valid, || format!("{}: carrier basic iff valid formula", l.name));
        out.check(basis.contains(&0) == has_inconsistent, || {
            format!("{}: empty set basic iff inconsistent formula", l.name)
        });
        if class.bounded {
            out.check(space.analyze().is_spectral, || format!("{}: space is not spectral", l.name));
            let mut with_empty = basis.clone();
            with_empty.push(0);
            with_empty.sort_unstable();
            with_empty.dedup();
            out.check(with_empty == common::opens(&basis), || {
                format!("{}: basis plus empty set is not every open", l.name)
            });
        }
    }
    out
}

fn generic_points() -> Outcome {
    let mut out = Outcome::new();
    for l in corpus().into_iter().filter(|l| distributive(&l.logic)) {
        let space = logic_space(&l.logic).unwrap();
        let n = space.point_count();
        let basis = common::basis_masks(&space);
        let primes = common::primes(&common::theory_masks(&l.logic));
        let points = common::masks(l.logic.primes());
        let mut irreducible = common::irreducible_closed_sets(&basis, n);
        let mut listed: Vec<u64> = space.irreducible_closed_sets().iter().map(|s| s.bits()).collect();
        irreducible.sort_unstable();
        listed.sort_unstable();
        out.check(irreducible == listed, || format!("{}: irreducible closed sets differ from the oracle", l.name));
        for f in irreducible {
            let union = (0..n).filter(|x| f >> x & 1 == 1).fold(0, |m, x| m | points[x]);
            out.check(primes.contains(&union), || format!("{}: union over {f:#b} is not prime", l.name));
            let generic: Vec<usize> = (0..n).filter(|&y| common::closure(&basis, n, 1 << y) == f).collect();
            let union_point = points.iter().position(|&p| p == union);
            out.check(generic.len() == 1 && union_point == generic.first().copied(), || {
                format!("{}: generic points {generic:?} for {f:#b}, union point {union_point:?}", l.name)
            });
            let library = space.generic_point(&Subset::from_bits(n, f).unwrap());
            out.check(library == Ok(generic.first().map(|&y| (y, true))), || {
                format!("{}: library generic point {library:?}", l.name)
            });
        }
    }
    out
}

fn prime_extensions() -> Outcome {
    let mut out = Outcome::new();
    for l in corpus().into_iter().filter(|l| l.logic.universe() <= 10 && distributive(&l.logic)) {
        let Some(join) = l.logic.connectives().join.clone() else { continue };
        let primes = common::primes(&common::theory_masks(&l.logic));
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for _ in 0..1000 {
            let Some((t, s)) = random_extension_pair(&l.logic, &mut rng) else { break };
            let (tb, sb) = (t.bits(), s.bits());
            let n = l.logic.universe();
            let join_closed =
                (0..n).all(|a| (0..n).all(|b| sb >> a & sb >> b & 1 == 0 || sb >> join.get(a, b) & 1 == 1));
            out.check(join_closed && tb & sb == 0, || format!("{}: sampled pair ({t}, {s}) is not valid", l.name));
            let candidates: Vec<u64> = primes.iter().copied().filter(|&p| tb & !p == 0 && p & sb == 0).collect();
            match prime_extension(&l.logic, &t, &s) {
                Ok(p) => out.check(!candidates.is_empty() && candidates.contains(&p.bits()), || {
                    format!("{}: extension of {t} avoiding {s} gave {p}", l.name)
                }),
                Err(e) => out.check(false, || format!("{}: {e}", l.name)),
            }
        }
    }
    out
}

fn stability() -> Outcome {
    let mut out = Outcome::new();
    let small: Vec<NamedLogic> = corpus()
        .into_iter()
        .filter(|l| l.logic.universe() <= 6 && distributive(&l.logic) && l.logic.connectives().join.is_some())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for a in &small {
        let source_primes = common::primes(&common::theory_masks(&a.logic));
        let join_a = a.logic.connectives().join.clone().unwrap();
        for b in &small {
            let target_theories = common::theory_masks(&b.logic);
            let target_primes = common::primes(&target_theories);
            let join_b = b.logic.connectives().join.clone().unwrap();
            let maps = enumerate_logic_maps(&a.logic, &b.logic);
            for _ in 0..500 {
                let Some(map) = maps.choose(&mut rng) else { break };
                let stable = target_primes.iter().all(|&p| source_primes.contains(&common::preimage(map, p)));
                let joins = common::preserves_join_up_to_equivalence(
                    &|x, y| join_a.get(x, y),
                    &|x, y| join_b.get(x, y),
                    map,
                    &target_theories,
                );
                let h = LogicMap { source: a.logic.clone(), target: b.logic.clone(), map: map.clone() };
                match stable_iff_disjunction(&h) {
                    Ok(c) => out
                        .check(stable == joins && c.stable == stable && c.preserves_join == joins && c.agree, || {
                            format!("{} -> {}: {map:?} oracle ({stable}, {joins}) library {c:?}", a.name, b.name)
                        }),
                    Err(e) => out.check(false, || format!("{} -> {}: {e}", a.name, b.name)),
                }
            }
        }
    }
    out
}

fn spaces() -> Vec<(String, FiniteSpace)> {
    all_spaces(&corpus()).into_iter().map(|s| (s.name, s.space)).collect()
}

fn spectral_distributive() -> Outcome {
    let mut out = Outcome::new();
    for (name, space) in spaces().into_iter().filter(|(_, s)| s.analyze().is_spectral) {
        let n = space.point_count();
        let basis = common::basis_masks(&space);
        out.check(space.is_distributive_space(), || format!("{name}: not a distributive space"));
        let mut filters = common::prime_filters(&basis, n);
        let mut point_filters: Vec<u64> = (0..n).map(|x| common::point_filter(&basis, x)).collect();
        filters.sort_unstable();
        point_filters.sort_unstable();
        let distinct = point_filters.windows(2).all(|w| w[0] != w[1]);
        out.check(distinct && filters == point_filters, || format!("{name}: points and prime filters differ"));
        let up = common::specialization_up(&basis, n);
        let adjunction = basis.iter().all(|&u| {
            basis.iter().all(|&v| {
                let imp = common::implication(&up, u, v);
                basis.iter().all(|&w| (w & !imp == 0) == (w & u & !v == 0))
            })
        });
        out.check(adjunction && space.check_adjunction() == Ok(None), || format!("{name}: adjunction fails"));
    }
    out
}

fn heyting() -> Outcome {
    let mut out = Outcome::new();
    for (name, space) in spaces() {
        let n = space.point_count();
        let basis = common::basis_masks(&space);
        let implication = common::has_implication(&basis, n);
        let heyting = common::heyting_basis(&basis, n);
        out.check(implication == heyting, || format!("{name}: implication {implication}, Heyting {heyting}"));
        out.check(space.has_implication().is_ok() == implication, || format!("{name}: library implication differs"));
        let library = space.is_heyting_basis();
        out.check(library.as_ref().map_or(!heyting, |&h| h == heyting), || {
            format!("{name}: library Heyting verdict {library:?}")
        });
        if space.analyze().is_boolean {
            let boolean = space.heyting_verdict().map(|v| v.boolean_lattice);
            out.check(common::complemented_basis(&basis) && boolean == Ok(true), || {
                format!("{name}: Boolean space with non-Boolean basis")
            });
        }
    }
    out
}

fn godel() -> Outcome {
    let mut out = Outcome::new();
    // hand evaluation on the upsets of r ≤ b, r ≤ c (bits r=1, b=2, c=4)
    let upsets = [0b000u64, 0b010, 0b100, 0b110, 0b111];
    let neg = |u: u64| upsets.iter().copied().filter(|&w| w & u == 0).max_by_key(|w| w.count_ones()).unwrap();
    let (p, q) = (0b010, 0b100);
    let lhs = neg(neg(p) & neg(q));
    let rhs = neg(neg(p)) | neg(neg(q));
    out.check((lhs, rhs) == (0b111, 0b110), || format!("hand evaluation gave ({lhs:#b}, {rhs:#b})"));
    let v = heyting_from_upsets(&FinitePoset::v_frame()).unwrap();
    match godel_witness(&v) {
        Ok(Some(w)) => {
            let names = [&v.names()[w.p], &v.names()[w.q], &v.names()[w.lhs], &v.names()[w.rhs]];
            out.check(names == ["{b}", "{c}", "{r,b,c}", "{b,c}"], || format!("V-frame witness {names:?}"));
        }
        other => out.check(false, || format!("V-frame gave {other:?}")),
    }
    for k in 0..=4 {
        let algebra = boolean_algebra(k).unwrap();
        let m = algebra.len();
        let neg = |x: usize| algebra.negation(x).unwrap();
        let identity =
            (0..m).all(|p| (0..m).all(|q| neg(algebra.meet(neg(p), neg(q))) == algebra.join(neg(neg(p)), neg(neg(q)))));
        let result = godel_witness(&algebra);
        out.check(identity && matches!(result, Ok(None)), || format!("{m}-element Boolean algebra gave {result:?}"));
    }
    out
}

fn constructible() -> Outcome {
    let mut out = Outcome::new();
    for (name, space) in spaces().into_iter().filter(|(_, s)| s.analyze().is_spectral) {
        match space.constructible_topology() {
            Ok(c) => {
                let opens = common::opens(&common::basis_masks(&c));
                let discrete = (0..c.point_count()).all(|x| opens.contains(&(1 << x)));
                out.check(c.analyze().is_boolean && discrete, || {
                    format!("{name}: constructible topology is not Boolean")
                });
            }
            Err(e) => out.check(false, || format!("{name}: {e}")),
        }
    }
    let c = samples::sierpinski().constructible_topology().unwrap();
    let opens = common::opens(&common::basis_masks(&c));
    out.check(opens == [0b00, 0b01, 0b10, 0b11], || format!("Sierpinski constructible opens {opens:?}"));
    out
}

fn degenerate() -> Outcome {
    let mut out = Outcome::new();
    let mut logics = degenerate_logics().unwrap();
    logics.extend(sample_logics());
    for l in logics {
        let n = l.logic.universe();
        let theories = common::theory_masks(&l.logic);
        let primes = common::primes(&theories);
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let no_valid = common::valid_formulas(&theories, n) == 0;
        let no_inconsistent = common::inconsistent_formulas(&theories, n) == 0;
        let (empty_prime, full_prime) = (primes.contains(&0), primes.contains(&full));
        out.check(no_valid == empty_prime && no_inconsistent == full_prime, || {
            format!("{}: oracle biconditional fails", l.name)
        });
        match check_degenerate_primes(&l.logic) {
            Ok(r) => out.check(
                r.holds()
                    && (r.no_valid_formula, r.empty_is_prime, r.no_inconsistent_formula, r.full_set_is_prime)
                        == (no_valid, empty_prime, no_inconsistent, full_prime),
                || format!("{}: {r:?}", l.name),
            ),
            Err(e) => out.check(false, || format!("{}: {e}", l.name)),
        }
    }
    out
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 11] = [
        (1, "logic round trip", logic_roundtrip, Some(Duration::from_secs(60))),
        (2, "space round trip", space_roundtrip, Some(Duration::from_secs(60))),
        (3, "spectrality", spectrality, None),
        (4, "generic points", generic_points, None),
        (5, "prime extension", prime_extensions, Some(Duration::from_secs(120))),
        (6, "stability", stability, None),
        (7, "spectral spaces are distributive", spectral_distributive, None),
        (8, "Heyting characterization", heyting, None),
        (9, "non-stability witness", godel, None),
        (10, "constructible topology", constructible, None),
        (11, "degenerate primes", degenerate, None),
    ];
    let mut all_passed = true;
    for (id, title, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed < b);
        let passed = outcome.failures.is_empty() && outcome.checked > 0 && in_time;
        all_passed &= passed;
        println!(
            "criterion {id:>2} {title}: {} ({} checks, {:.2} s)",
            if passed { "PASS" } else { "FAIL" },
            outcome.checked,
            elapsed.as_secs_f64()
        );
        for f in outcome.failures.iter().take(5) {
            println!("    {f}");
        }
        if !in_time {
            println!("    over the {:?} budget", budget.unwrap());
        }
    }
    if !all_passed {
        std::process::exit(1);
    }
}
