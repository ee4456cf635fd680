//! Corpus construction: posets, finite lattices, the logics they induce,
//! poset enumeration and seeded random intersection structures.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::connectives::{BinaryTable, ConnectiveTables};
use crate::logic::{AbstractLogic, LogicError, TheoryFamily};
use crate::subset::{PointSet, Subset, SubsetError, MAX_UNIVERSE};
use crate::topology::FiniteSpace;

/// Largest `n` accepted by [`enumerate_posets`].
pub const MAX_ENUMERATED_POINTS: usize = 5;
/// Largest universe accepted by [`random_logic`].
pub const MAX_RANDOM_EXPRESSIONS: usize = 12;
/// Largest poset whose upsets are enumerated.
pub const MAX_FRAME_POINTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("relation is not antisymmetric: {0} and {1} are mutually below each other")]
    NotAntisymmetric(String, String),
    #[error("{op} of {a} and {b} does not exist")]
    NotLattice { op: &'static str, a: usize, b: usize },
    #[error("lattice is not distributive at ({a}, {b}, {c})")]
    NotDistributiveLattice { a: usize, b: usize, c: usize },
    #[error("lattice is not a Heyting algebra")]
    NotHeyting,
    #[error("{what} of {got} exceeds the bound {bound}")]
    BoundExceeded { what: &'static str, bound: usize, got: usize },
    #[error(transparent)]
    Subset(#[from] SubsetError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// A finite partial order, stored as principal up-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    up: Vec<PointSet>,
}

impl FinitePoset {
    /// Reflexive-transitive closure of `pairs` (read as `a ≤ b`), rejected
    /// unless antisymmetric.
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, BuildError> {
        let n = names.len();
        if n > MAX_UNIVERSE {
            return Err(BuildError::BoundExceeded { what: "poset size", bound: MAX_UNIVERSE, got: n });
        }
        let mut up: Vec<PointSet> = (0..n).map(|x| Subset::singleton(n, x)).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(SubsetError::OutOfRange { index: a.max(b), universe: n }.into());
            }
            up[a].insert(b);
        }
        loop {
            let next: Vec<PointSet> = (0..n).map(|x| up[x].iter().fold(up[x], |acc, y| acc.union(&up[y]))).collect();
            if next == up {
                break;
            }
            up = next;
        }
        for x in 0..n {
            for y in x + 1..n {
                if up[x].contains(y) && up[y].contains(x) {
                    return Err(BuildError::NotAntisymmetric(names[x].clone(), names[y].clone()));
                }
            }
        }
        Ok(FinitePoset { names, up })
    }

    pub fn from_named_pairs<S: AsRef<str>>(names: Vec<String>, pairs: &[(S, S)]) -> Result<Self, BuildError> {
        let find = |s: &str| names.iter().position(|n| n == s).ok_or_else(|| BuildError::UnknownElement(s.to_string()));
        let idx = pairs
            .iter()
            .map(|(a, b)| Ok((find(a.as_ref())?, find(b.as_ref())?)))
            .collect::<Result<Vec<_>, BuildError>>()?;
        FinitePoset::from_pairs(names, &idx)
    }

    pub fn chain(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::from_pairs(indexed_names(n), &pairs).expect("chains are partial orders")
    }

    pub fn antichain(n: usize) -> Self {
        FinitePoset::from_pairs(indexed_names(n), &[]).expect("antichains are partial orders")
    }

    /// `r ≤ b`, `r ≤ c`.
    pub fn v_frame() -> Self {
        FinitePoset::from_named_pairs(names(&["r", "b", "c"]), &[("r", "b"), ("r", "c")])
            .expect("the V-frame is a partial order")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn up(&self, a: usize) -> PointSet {
        self.up[a]
    }

    /// All pairs `a ≤ b` with `a ≠ b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|a| self.up[a].iter().filter(move |&b| b != a).map(move |b| (a, b))).collect()
    }

    /// Covering pairs `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.len()).any(|z| z != a && z != b && self.leq(a, z) && self.leq(z, b)))
            .collect()
    }

    /// Up-closed subsets in [`Subset`] order.
    pub fn upsets(&self) -> Result<Vec<PointSet>, BuildError> {
        let n = self.len();
        if n > MAX_FRAME_POINTS {
            return Err(BuildError::BoundExceeded { what: "frame size", bound: MAX_FRAME_POINTS, got: n });
        }
        let mut out = Vec::new();
        for bits in 0u64..(1u64 << n) {
            let s = Subset::from_bits(n, bits)?;
            if s.iter().all(|x| self.up[x].is_subset(&s)) {
                out.push(s);
            }
        }
        Ok(out)
    }

    pub fn is_strongly_connected(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| self.up[a].iter().all(|b| self.up[a].iter().all(|c| self.leq(b, c) || self.leq(c, b))))
    }

    /// Smallest strict-order code over all relabellings; equal codes mean
    /// isomorphic posets.
    pub fn canonical_code(&self) -> u64 {
        let n = self.len();
        let pairs = self.strict_pairs();
        let mut best = u64::MAX;
        for perm in permutations(n) {
            let code = pairs.iter().fold(0u64, |acc, &(a, b)| acc | 1 << (perm[a] * n + perm[b]));
            best = best.min(code);
        }
        best
    }
}

pub(crate) fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn indexed_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut current, &mut out);
    out
}

fn heap_permute(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, items, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, items, out);
}

/// Every poset on `n` unlabelled points exactly once, ordered by canonical
/// code. Points are named `x0`, `x1`, ...
pub fn enumerate_posets(n: usize) -> Result<Vec<FinitePoset>, BuildError> {
    if n > MAX_ENUMERATED_POINTS {
        return Err(BuildError::BoundExceeded { what: "poset size", bound: MAX_ENUMERATED_POINTS, got: n });
    }
    // every poset has a natural labelling, so upper-triangular relations suffice
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let pairs: Vec<(usize, usize)> =
            slots.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &p)| p).collect();
        let transitive =
            pairs.iter().all(|&(a, b)| pairs.iter().filter(|&&(c, _)| c == b).all(|&(_, d)| pairs.contains(&(a, d))));
        if !transitive {
            continue;
        }
        let poset = FinitePoset::from_pairs(indexed_names(n), &pairs)?;
        if seen.insert(poset.canonical_code()) {
            out.push(poset);
        }
    }
    out.sort_by_key(|p| p.canonical_code());
    Ok(out)
}

/// A seeded intersection structure on `n` expressions without connectives.
pub fn random_logic(n: usize, seed: u64) -> Result<AbstractLogic, BuildError> {
    if n > MAX_RANDOM_EXPRESSIONS {
        return Err(BuildError::BoundExceeded { what: "expression count", bound: MAX_RANDOM_EXPRESSIONS, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=n + 1);
    let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let generators =
        (0..count).map(|_| Subset::from_bits(n, rng.gen::<u64>() & full)).collect::<Result<Vec<_>, _>>()?;
    Ok(AbstractLogic::bare(TheoryFamily::close_under_intersection(n, generators)?))
}

/// A finite lattice with its operation tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    /// `up[a]` is the set of elements above `a`.
    up: Vec<Subset>,
    join: BinaryTable,
    meet: BinaryTable,
    implication: Option<BinaryTable>,
    top: Option<usize>,
    bottom: Option<usize>,
}

impl FiniteLattice {
    /// Derives join and meet from the order; fails on a missing bound.
    pub fn from_poset(order: &FinitePoset) -> Result<Self, BuildError> {
        let n = order.len();
        let lub = |a: usize, b: usize, up: &dyn Fn(usize) -> Subset| {
            let common = up(a).intersection(&up(b));
            common.iter().find(|&c| common.is_subset(&up(c)))
        };
        let up_of = |x: usize| order.up(x);
        let down_of = |x: usize| Subset::from_indices(n, (0..n).filter(|&y| order.leq(y, x))).unwrap();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] = lub(a, b, &up_of).ok_or(BuildError::NotLattice { op: "join", a, b })?;
                meet[a * n + b] = lub(a, b, &down_of).ok_or(BuildError::NotLattice { op: "meet", a, b })?;
            }
        }
        let top = (0..n).find(|&t| (0..n).all(|x| order.leq(x, t)));
        let bottom = (0..n).find(|&b| order.up(b).is_full());
        Ok(FiniteLattice {
            names: order.names().to_vec(),
            up: (0..n).map(|x| order.up(x)).collect(),
            join: BinaryTable::from_fn(n, |a, b| join[a * n + b]),
            meet: BinaryTable::from_fn(n, |a, b| meet[a * n + b]),
            implication: None,
            top,
            bottom,
        })
    }

    /// Attaches the relative pseudo-complement when every one exists.
    pub fn with_heyting_implication(mut self) -> Result<Self, BuildError> {
        let n = self.len();
        let mut cells = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let below: Vec<usize> = (0..n).filter(|&z| self.leq(self.meet.get(z, a), b)).collect();
                let max = below.iter().find(|&&z| below.iter().all(|&w| self.leq(w, z)));
                cells[a * n + b] = *max.ok_or(BuildError::NotHeyting)?;
            }
        }
        self.implication = Some(BinaryTable::from_fn(n, |a, b| cells[a * n + b]));
        Ok(self)
    }

    /// Lattice of a family of sets ordered by inclusion, with `∪`, `∩` and
    /// the given implication. The family must be closed under both.
    fn of_sets(names: Vec<String>, sets: &[PointSet], implication: impl Fn(&PointSet, &PointSet) -> PointSet) -> Self {
        let n = sets.len();
        let idx = |s: PointSet| sets.binary_search(&s).expect("family is closed under the operation");
        let up =
            (0..n).map(|a| Subset::from_indices(n, (0..n).filter(|&b| sets[a].is_subset(&sets[b]))).unwrap()).collect();
        let top = (0..n).find(|&t| sets.iter().all(|s| s.is_subset(&sets[t])));
        let bottom = (0..n).find(|&b| sets.iter().all(|s| sets[b].is_subset(s)));
        FiniteLattice {
            names,
            up,
            join: BinaryTable::from_fn(n, |a, b| idx(sets[a].union(&sets[b]))),
            meet: BinaryTable::from_fn(n, |a, b| idx(sets[a].intersection(&sets[b]))),
            implication: Some(BinaryTable::from_fn(n, |a, b| idx(implication(&sets[a], &sets[b])))),
            top,
            bottom,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join.get(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet.get(a, b)
    }

    pub fn implication(&self) -> Option<&BinaryTable> {
        self.implication.as_ref()
    }

    pub fn top(&self) -> Option<usize> {
        self.top
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    /// `x → ⊥`, when both exist.
    pub fn negation(&self, x: usize) -> Option<usize> {
        Some(self.implication.as_ref()?.get(x, self.bottom?))
    }

    /// First triple violating `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`.
    pub fn distributivity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_failure().is_none()
    }

    /// `z ≤ x → y` iff `z ∧ x ≤ y` for all triples.
    pub fn satisfies_adjunction(&self) -> bool {
        let Some(imp) = &self.implication else { return false };
        let n = self.len();
        (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| self.leq(z, imp.get(x, y)) == self.leq(self.meet(z, x), y))))
    }

    pub fn is_boolean(&self) -> bool {
        let (Some(top), Some(bottom)) = (self.top, self.bottom) else { return false };
        let n = self.len();
        (0..n).all(|a| (0..n).any(|c| self.meet(a, c) == bottom && self.join(a, c) == top))
    }

    pub fn connective_tables(&self) -> ConnectiveTables {
        ConnectiveTables {
            join: Some(self.join.clone()),
            meet: Some(self.meet.clone()),
            implication: self.implication.clone(),
            negation: self
                .implication
                .as_ref()
                .and(self.bottom)
                .map(|_| (0..self.len()).map(|x| self.negation(x).expect("checked")).collect()),
            top: self.top,
            bottom: self.bottom,
        }
    }
}

/// Upsets of `frame` with `∪`, `∩` and `A → B = {t | ↑t ∩ A ⊆ B}`.
pub fn heyting_from_upsets(frame: &FinitePoset) -> Result<FiniteLattice, BuildError> {
    let sets = frame.upsets()?;
    if sets.len() > MAX_UNIVERSE {
        return Err(BuildError::BoundExceeded { what: "upset count", bound: MAX_UNIVERSE, got: sets.len() });
    }
    let n = frame.len();
    let names = sets.iter().map(|s| s.display_with(frame.names())).collect();
    let lattice = FiniteLattice::of_sets(names, &sets, |a, b| {
        Subset::from_indices(n, (0..n).filter(|&t| frame.up(t).intersection(a).is_subset(b))).unwrap()
    });
    debug_assert!(lattice.satisfies_adjunction(), "upset implication violates the adjunction");
    Ok(lattice)
}

/// The Boolean algebra of all subsets of `k` atoms.
pub fn boolean_algebra(k: usize) -> Result<FiniteLattice, BuildError> {
    heyting_from_upsets(&FinitePoset::antichain(k))
}

/// Which degenerate filters join the theory family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FilterOptions {
    /// Add the improper filter (the whole lattice); the result is singular.
    pub include_improper: bool,
    /// Add the empty filter; the result has no valid formula.
    pub include_empty: bool,
}

/// Filter logic of a distributive lattice: expressions are the elements,
/// theories the proper principal filters. Tables are copied from the
/// lattice and `∼a = a → ⊥`. Constants that a degenerate filter would
/// violate are left undesignated.
pub fn logic_from_lattice_filters(
    lattice: &FiniteLattice,
    options: FilterOptions,
) -> Result<AbstractLogic, BuildError> {
    if let Some((a, b, c)) = lattice.distributivity_failure() {
        return Err(BuildError::NotDistributiveLattice { a, b, c });
    }
    let n = lattice.len();
    let mut theories: Vec<Subset> =
        (0..n).filter(|&a| options.include_improper || Some(a) != lattice.bottom).map(|a| lattice.up[a]).collect();
    if options.include_empty {
        theories.push(Subset::empty(n));
    }
    if theories.is_empty() {
        // the one-element lattice has no proper filter
        theories.push(Subset::full(n));
    }
    let family = TheoryFamily::new(n, theories)?;
    let mut tables = lattice.connective_tables();
    if options.include_improper {
        tables.bottom = None;
        tables.negation = None;
    }
    if options.include_empty {
        tables.top = None;
        tables.negation = None;
        tables.implication = None;
    }
    Ok(AbstractLogic::new(lattice.names.clone(), family, tables)?)
}

/// Filter logic of the open-set lattice, with `U → V = int(Uᶜ ∪ V)`.
pub fn logic_from_topology(space: &FiniteSpace) -> Result<AbstractLogic, BuildError> {
    let opens = space.opens().to_vec();
    if opens.len() > MAX_UNIVERSE {
        return Err(BuildError::BoundExceeded { what: "open count", bound: MAX_UNIVERSE, got: opens.len() });
    }
    let names = opens.iter().map(|o| o.display_with(space.point_names())).collect();
    let lattice = FiniteLattice::of_sets(names, &opens, |u, v| space.interior(&u.complement().union(v)));
    logic_from_lattice_filters(&lattice, FilterOptions::default())
}

/// First `(p, q)` in index order where `¬(¬p ∧ ¬q) ≠ ¬¬p ∨ ¬¬q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GodelWitness {
    pub p: usize,
    pub q: usize,
    pub lhs: usize,
    pub rhs: usize,
}

pub fn godel_witness(algebra: &FiniteLattice) -> Result<Option<GodelWitness>, BuildError> {
    if algebra.implication.is_none() || algebra.bottom.is_none() {
        return Err(BuildError::NotHeyting);
    }
    let neg = |x: usize| algebra.negation(x).expect("checked above");
    let n = algebra.len();
    for p in 0..n {
        for q in 0..n {
            let lhs = neg(algebra.meet(neg(p), neg(q)));
            let rhs = algebra.join(neg(neg(p)), neg(neg(q)));
            if lhs != rhs {
                return Ok(Some(GodelWitness { p, q, lhs, rhs }));
            }
        }
    }
    Ok(None)
}

/// Named instances shared by tests, the corpus and the CLI.
pub mod samples {
    use super::*;
    pub use crate::topology::samples::*;

    fn family(n: usize, theories: &[&[usize]]) -> TheoryFamily {
        TheoryFamily::new(n, theories.iter().map(|t| Subset::from_indices(n, t.iter().copied()).unwrap())).unwrap()
    }

    fn chain_tables(n: usize) -> ConnectiveTables {
        ConnectiveTables {
            join: Some(BinaryTable::from_fn(n, |a, b| a.max(b))),
            meet: Some(BinaryTable::from_fn(n, |a, b| a.min(b))),
            ..Default::default()
        }
    }

    /// Three-element chain `bot < m < top` with its Heyting operations.
    pub fn l3() -> AbstractLogic {
        let tables = ConnectiveTables {
            implication: Some(BinaryTable::from_rows(vec![vec![2, 2, 2], vec![0, 2, 2], vec![0, 1, 2]]).unwrap()),
            negation: Some(vec![2, 0, 0]),
            top: Some(2),
            bottom: Some(0),
            ..chain_tables(3)
        };
        AbstractLogic::new(names(&["bot", "m", "top"]), family(3, &[&[2], &[1, 2]]), tables).unwrap()
    }

    /// Four-element Boolean algebra; expression bits are `a = 1`, `b = 2`.
    pub fn l22() -> AbstractLogic {
        let tables = ConnectiveTables {
            join: Some(BinaryTable::from_fn(4, |a, b| a | b)),
            meet: Some(BinaryTable::from_fn(4, |a, b| a & b)),
            implication: Some(BinaryTable::from_fn(4, |a, b| (!a | b) & 3)),
            negation: Some((0..4).map(|a| !a & 3).collect()),
            top: Some(3),
            bottom: Some(0),
        };
        AbstractLogic::new(names(&["bot", "a", "b", "top"]), family(4, &[&[3], &[1, 3], &[2, 3]]), tables).unwrap()
    }

    /// Upset algebra of the V-frame: `{}`, `{b}`, `{c}`, `{b,c}`, `{r,b,c}`.
    pub fn lv3() -> AbstractLogic {
        let lattice = heyting_from_upsets(&FinitePoset::v_frame()).unwrap();
        logic_from_lattice_filters(&lattice, FilterOptions::default()).unwrap()
    }

    /// `l3` plus expression 3, logically equivalent to `m`.
    pub fn l3_with_duplicate() -> AbstractLogic {
        let base = l3();
        let c = base.connectives().clone();
        let f = |a: usize| if a == 3 { 1 } else { a };
        let lift = |t: &Option<BinaryTable>| t.as_ref().map(|t| BinaryTable::from_fn(4, |a, b| t.get(f(a), f(b))));
        let tables = ConnectiveTables {
            join: lift(&c.join),
            meet: lift(&c.meet),
            implication: lift(&c.implication),
            negation: c.negation.as_ref().map(|neg| (0..4).map(|a| neg[f(a)]).collect()),
            top: c.top,
            bottom: c.bottom,
        };
        AbstractLogic::new(names(&["bot", "m", "top", "m2"]), family(4, &[&[2], &[1, 2, 3]]), tables).unwrap()
    }

    /// Two-chain whose full expression set is a theory: no inconsistent formula.
    pub fn singular_chain() -> AbstractLogic {
        let tables = ConnectiveTables { top: Some(1), ..chain_tables(2) };
        AbstractLogic::new(names(&["bot", "top"]), family(2, &[&[1], &[0, 1]]), tables).unwrap()
    }

    /// Three-chain whose empty set is a theory: no valid formula.
    pub fn no_valid_chain() -> AbstractLogic {
        let tables = ConnectiveTables { bottom: Some(0), ..chain_tables(3) };
        AbstractLogic::new(names(&["bot", "m", "top"]), family(3, &[&[], &[2], &[1, 2]]), tables).unwrap()
    }

    /// Two-chain with both degenerate theories.
    pub fn fully_degenerate_chain() -> AbstractLogic {
        AbstractLogic::new(names(&["bot", "top"]), family(2, &[&[], &[1], &[0, 1]]), chain_tables(2)).unwrap()
    }
}
