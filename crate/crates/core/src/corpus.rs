//! Built-in instance generators and the verification suites run over them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::builders::{
    boolean_algebra, enumerate_posets, godel_witness, heyting_from_upsets, logic_from_lattice_filters, samples,
    BuildError, FilterOptions, FinitePoset,
};
use crate::connectives::{check_degenerate_primes, disjunctive_closure, prime_extension, verify_connectives};
use crate::duality::{
    analyze_logic_map, enumerate_logic_maps, logic_space, roundtrip_logic, roundtrip_space, stable_iff_disjunction,
    LogicMap,
};
use crate::logic::AbstractLogic;
use crate::subset::Subset;
use crate::topology::FiniteSpace;

#[derive(Debug, Clone)]
pub struct NamedLogic {
    pub name: String,
    pub logic: AbstractLogic,
}

#[derive(Debug, Clone)]
pub struct NamedSpace {
    pub name: String,
    pub space: FiniteSpace,
}

fn named(name: impl Into<String>, logic: AbstractLogic) -> NamedLogic {
    NamedLogic { name: name.into(), logic }
}

/// Upset-algebra filter logic of every poset on `1..=max_points` points.
pub fn poset_logics(max_points: usize) -> Result<Vec<NamedLogic>, BuildError> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        for (i, p) in enumerate_posets(n)?.iter().enumerate() {
            let lattice = heyting_from_upsets(p)?;
            out.push(named(format!("poset{n}-{i}"), logic_from_lattice_filters(&lattice, FilterOptions::default())?));
        }
    }
    Ok(out)
}

/// Distributive logics lacking a valid or an inconsistent formula.
pub fn degenerate_logics() -> Result<Vec<NamedLogic>, BuildError> {
    let mut out = vec![
        named("no-valid-chain", samples::no_valid_chain()),
        named("singular-chain", samples::singular_chain()),
        named("fully-degenerate-chain", samples::fully_degenerate_chain()),
    ];
    let frames =
        [("chain2", FinitePoset::chain(2)), ("v", FinitePoset::v_frame()), ("anti2", FinitePoset::antichain(2))];
    for (name, frame) in frames {
        let lattice = heyting_from_upsets(&frame)?;
        for (tag, options) in [
            ("empty", FilterOptions { include_empty: true, include_improper: false }),
            ("improper", FilterOptions { include_empty: false, include_improper: true }),
            ("both", FilterOptions { include_empty: true, include_improper: true }),
        ] {
            out.push(named(format!("{name}-{tag}"), logic_from_lattice_filters(&lattice, options)?));
        }
    }
    Ok(out)
}

/// Filter logics of the Boolean algebras with `2^k` elements.
pub fn boolean_logics(max_atoms: usize) -> Result<Vec<NamedLogic>, BuildError> {
    (0..=max_atoms)
        .map(|k| {
            Ok(named(
                format!("boolean{k}"),
                logic_from_lattice_filters(&boolean_algebra(k)?, FilterOptions::default())?,
            ))
        })
        .collect()
}

pub fn sample_logics() -> Vec<NamedLogic> {
    vec![
        named("l3", samples::l3()),
        named("l22", samples::l22()),
        named("lv3", samples::lv3()),
        named("l3-duplicate", samples::l3_with_duplicate()),
    ]
}

/// Every built-in logic: poset logics, samples, degenerate logics and
/// Boolean algebras up to 16 elements.
pub fn all_logics(max_points: usize) -> Result<Vec<NamedLogic>, BuildError> {
    let mut out = poset_logics(max_points)?;
    out.extend(sample_logics());
    out.extend(degenerate_logics()?);
    out.extend(boolean_logics(4)?);
    Ok(out)
}

pub fn hand_spaces() -> Vec<NamedSpace> {
    let s = |name: &str, space: FiniteSpace| NamedSpace { name: name.into(), space };
    vec![
        s("sierpinski", samples::sierpinski()),
        s("discrete2", samples::discrete2()),
        s("indiscrete2", samples::indiscrete2()),
        s("one-point", samples::one_point()),
        s("v-spectrum", samples::v_spectrum()),
    ]
}

/// `F(L)` for every distributive logic, followed by the hand-built spaces.
pub fn all_spaces(logics: &[NamedLogic]) -> Vec<NamedSpace> {
    let mut out: Vec<NamedSpace> = logics
        .iter()
        .filter_map(|l| logic_space(&l.logic).ok().map(|space| NamedSpace { name: format!("F({})", l.name), space }))
        .collect();
    out.extend(hand_spaces());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusConfig {
    pub max_points: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Random samples per instance or instance pair.
    pub samples: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { max_points: 4, seed: 0, jobs: 1, samples: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every suite; results come back in a fixed order regardless of
/// `jobs`.
pub fn run_suites(config: &CorpusConfig) -> Result<Vec<SuiteResult>, BuildError> {
    let logics = all_logics(config.max_points)?;
    let spaces = all_spaces(&logics);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs.max(1)).build().expect("thread pool");
    let suites: Vec<(&'static str, Suite<'_>)> = vec![
        ("logic-roundtrip", Box::new(|| per_logic(&logics, logic_roundtrip))),
        ("space-roundtrip", Box::new(|| per_space(&spaces, space_roundtrip))),
        ("spectrality", Box::new(|| per_logic(&logics, spectrality))),
        ("generic-points", Box::new(|| per_logic(&logics, generic_points))),
        ("prime-extension", Box::new(|| per_logic(&logics, |l| prime_extensions(l, config)))),
        ("stability", Box::new(|| stability(&logics, config))),
        ("spectral-distributive", Box::new(|| per_space(&spaces, spectral_distributive))),
        ("heyting", Box::new(|| per_space(&spaces, heyting))),
        ("godel", Box::new(godel)),
        ("constructible", Box::new(|| per_space(&spaces, constructible))),
        ("degenerate", Box::new(|| per_logic(&logics, degenerate))),
    ];
    Ok(pool.install(|| {
        suites
            .par_iter()
            .map(|(name, run)| {
                let checks = run();
                SuiteResult {
                    name,
                    checked: checks.len(),
                    failures: checks.into_iter().filter_map(|c| c.err()).collect(),
                }
            })
            .collect()
    }))
}

/// `Ok(())` or a failure description.
type Check = Result<(), String>;

type Suite<'a> = Box<dyn Fn() -> Vec<Check> + Sync + Send + 'a>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn per_logic(logics: &[NamedLogic], f: impl Fn(&NamedLogic) -> Vec<Check> + Sync) -> Vec<Check> {
    logics.par_iter().flat_map_iter(&f).collect()
}

fn per_space(spaces: &[NamedSpace], f: impl Fn(&NamedSpace) -> Vec<Check> + Sync) -> Vec<Check> {
    spaces.par_iter().flat_map_iter(&f).collect()
}

fn logic_roundtrip(l: &NamedLogic) -> Vec<Check> {
    if !verify_connectives(&l.logic).distributive {
        return Vec::new();
    }
    let id = LogicMap::identity(&l.logic);
    vec![match roundtrip_logic(&l.logic, Some(&id)) {
        Ok(r) => ensure(r.ok(), || format!("{}: {:?}", l.name, r.failures)),
        Err(e) => Err(format!("{}: {e}", l.name)),
    }]
}

fn space_roundtrip(s: &NamedSpace) -> Vec<Check> {
    if !s.space.is_distributive_space() {
        return Vec::new();
    }
    vec![match roundtrip_space(&s.space, None) {
        Ok(r) => ensure(r.ok(), || format!("{}: {:?}", s.name, r.failures)),
        Err(e) => Err(format!("{}: {e}", s.name)),
    }]
}

fn spectrality(l: &NamedLogic) -> Vec<Check> {
    let class = verify_connectives(&l.logic);
    let Ok(space) = logic_space(&l.logic) else { return Vec::new() };
    let report = space.analyze();
    let name = &l.name;
    let mut out = vec![
        ensure((space.basis_index(&space.carrier()).is_some()) == !l.logic.valid_formulas().is_empty(), || {
            format!("{name}: carrier basic iff valid formula fails")
        }),
        ensure((space.basis_index(&space.empty()).is_some()) == !l.logic.inconsistent_formulas().is_empty(), || {
            format!("{name}: empty set basic iff inconsistent formula fails")
        }),
    ];
    if class.bounded {
        out.push(ensure(report.is_spectral, || format!("{name}: space is not spectral: {report:?}")));
        let mut basis: Vec<Subset> = space.basis_sets().collect();
        basis.push(space.empty());
        basis.sort();
        basis.dedup();
        out.push(ensure(basis == space.opens(), || format!("{name}: basis plus empty set differs from the opens")));
    }
    out
}

fn generic_points(l: &NamedLogic) -> Vec<Check> {
    let Ok(space) = logic_space(&l.logic) else { return Vec::new() };
    let primes = l.logic.primes();
    space
        .irreducible_closed_sets()
        .into_iter()
        .map(|f| {
            let union = f.iter().fold(l.logic.empty_set(), |acc, x| acc.union(&primes[x]));
            let Ok(y) = primes.binary_search(&union) else {
                return Err(format!("{}: union over {f} is not a prime theory", l.name));
            };
            ensure(space.closure(&Subset::singleton(space.point_count(), y)) == f, || {
                format!("{}: closure of the union point differs from {f}", l.name)
            })?;
            ensure(space.generic_point(&f) == Ok(Some((y, true))), || {
                format!("{}: generic point of {f} is not unique", l.name)
            })
        })
        .collect()
}

/// A random theory `T` and a non-empty join-closed `S` disjoint from it.
pub fn random_extension_pair(logic: &AbstractLogic, rng: &mut impl Rng) -> Option<(Subset, Subset)> {
    let n = logic.universe();
    let theories = logic.theories().theories();
    for _ in 0..32 {
        let t = *theories.choose(rng)?;
        let outside = t.complement().to_vec();
        if outside.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=outside.len());
        let seed = Subset::from_indices(n, outside.choose_multiple(rng, k).copied()).ok()?;
        let s = disjunctive_closure(logic, &seed).ok()?;
        if s.is_disjoint(&t) {
            return Some((t, s));
        }
    }
    None
}

fn prime_extensions(l: &NamedLogic, config: &CorpusConfig) -> Vec<Check> {
    let logic = &l.logic;
    if logic.universe() > 10 || !verify_connectives(logic).distributive {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.samples)
        .filter_map(|_| random_extension_pair(logic, &mut rng))
        .map(|(t, s)| match prime_extension(logic, &t, &s) {
            Ok(p) => ensure(logic.spectrum().is_prime(&p) && t.is_subset(&p) && p.is_disjoint(&s), || {
                format!("{}: extension of {t} avoiding {s} gave {p}", l.name)
            }),
            Err(e) => Err(format!("{}: extension of {t} avoiding {s}: {e}", l.name)),
        })
        .collect()
}

fn stability(logics: &[NamedLogic], config: &CorpusConfig) -> Vec<Check> {
    let small: Vec<&NamedLogic> = logics
        .iter()
        .filter(|l| {
            l.logic.universe() <= 6 && verify_connectives(&l.logic).distributive && l.logic.connectives().join.is_some()
        })
        .collect();
    let pairs: Vec<(&NamedLogic, &NamedLogic)> =
        small.iter().flat_map(|a| small.iter().map(move |b| (*a, *b))).collect();
    pairs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (a, b))| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(i as u64));
            let maps = enumerate_logic_maps(&a.logic, &b.logic);
            let mut out = Vec::new();
            for _ in 0..config.samples {
                let Some(map) = maps.choose(&mut rng) else { break };
                let h = LogicMap { source: a.logic.clone(), target: b.logic.clone(), map: map.clone() };
                out.push(match stable_iff_disjunction(&h) {
                    Ok(c) => ensure(c.agree, || format!("{} → {}: map {map:?} gives {c:?}", a.name, b.name)),
                    Err(e) => Err(format!("{} → {}: {e}", a.name, b.name)),
                });
            }
            // arbitrary maps: stable ones still preserve joins
            for _ in 0..config.samples {
                let map: Vec<usize> = (0..a.logic.universe()).map(|_| rng.gen_range(0..b.logic.universe())).collect();
                let h = LogicMap { source: a.logic.clone(), target: b.logic.clone(), map: map.clone() };
                if let Ok(c) = stable_iff_disjunction(&h) {
                    out.push(ensure(!c.stable || c.preserves_join, || {
                        format!("{} → {}: stable map {map:?} breaks a join", a.name, b.name)
                    }));
                    out.push(ensure(!c.stable || analyze_logic_map(&h).is_logic_map, || {
                        format!("{} → {}: stable map {map:?} is not a logic map", a.name, b.name)
                    }));
                }
            }
            out
        })
        .collect()
}

fn spectral_distributive(s: &NamedSpace) -> Vec<Check> {
    if !s.space.analyze().is_spectral {
        return Vec::new();
    }
    let v = s.space.distributive_verdict();
    vec![
        ensure(v.distributive && v.bounded, || format!("{}: spectral but {v:?}", s.name)),
        match s.space.check_adjunction() {
            Ok(None) => Ok(()),
            Ok(Some(w)) => Err(format!("{}: adjunction fails at {w:?}", s.name)),
            Err(e) => Err(format!("{}: {e}", s.name)),
        },
    ]
}

fn heyting(s: &NamedSpace) -> Vec<Check> {
    if !s.space.is_distributive_space() {
        return Vec::new();
    }
    let report = s.space.analyze();
    let verdict = match s.space.heyting_verdict() {
        Ok(v) => v,
        Err(e) => return vec![Err(format!("{}: {e}", s.name))],
    };
    let mut out = vec![ensure(report.has_implication == verdict.heyting, || {
        format!("{}: implication {} but Heyting {}", s.name, report.has_implication, verdict.heyting)
    })];
    if report.is_boolean {
        out.push(ensure(verdict.boolean_lattice, || format!("{}: Boolean space with non-Boolean basis", s.name)));
    }
    out
}

fn godel() -> Vec<Check> {
    let mut out = Vec::new();
    match heyting_from_upsets(&FinitePoset::v_frame()).map(|v| godel_witness(&v)) {
        Ok(Ok(Some(w))) => {
            out.push(ensure((w.p, w.q, w.lhs, w.rhs) == (1, 2, 4, 3), || format!("V-frame witness {w:?}")))
        }
        other => out.push(Err(format!("V-frame gave {other:?}"))),
    }
    for k in 0..=4 {
        let result = boolean_algebra(k).map(|b| godel_witness(&b));
        out.push(ensure(matches!(result, Ok(Ok(None))), || format!("boolean{k} gave {result:?}")));
    }
    out
}

fn constructible(s: &NamedSpace) -> Vec<Check> {
    if !s.space.analyze().is_spectral {
        return Vec::new();
    }
    vec![match s.space.constructible_topology() {
        Ok(c) => ensure(c.analyze().is_boolean, || format!("{}: constructible topology is not Boolean", s.name)),
        Err(e) => Err(format!("{}: {e}", s.name)),
    }]
}

fn degenerate(l: &NamedLogic) -> Vec<Check> {
    match check_degenerate_primes(&l.logic) {
        Ok(r) => vec![ensure(r.holds(), || format!("{}: {r:?}", l.name))],
        Err(_) => Vec::new(),
    }
}
