//! Finite topological spaces given by a distinguished basis.
//!
//! The opens are the unions of basis elements together with `∅`. Points and
//! basis elements are indexed; a basis never holds the same point set twice
//! (duplicates are merged and keep all their display names).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::subset::{PointSet, Subset, MAX_UNIVERSE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("{0} is not closed")]
    NotClosed(PointSet),
    #[error("{0} is not a basic open")]
    NotBasic(PointSet),
    #[error("basis is not a lattice: {op} of {a} and {b} leaves the basis")]
    BasisNotLattice { op: &'static str, a: PointSet, b: PointSet },
    #[error("the space has no implication (first failure at {0} → {1})")]
    NoImplication(PointSet, PointSet),
    #[error("the space is not spectral")]
    NotSpectral,
    #[error("basis element {0} does not live on {1} points")]
    UniverseMismatch(PointSet, usize),
    #[error("{0} exceeds the supported size of {MAX_UNIVERSE}")]
    TooLarge(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicOpen {
    pub names: Vec<String>,
    pub points: PointSet,
}

impl BasicOpen {
    pub fn label(&self) -> String {
        self.names.join("|")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    point_names: Vec<String>,
    basis: Vec<BasicOpen>,
    opens: Vec<PointSet>,
}

impl FiniteSpace {
    /// Builds a space from named basis elements. The basis is sorted in
    /// canonical order and equal point sets are merged.
    pub fn new<I>(point_names: Vec<String>, basis: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = (String, PointSet)>,
    {
        let n = point_names.len();
        if n > MAX_UNIVERSE {
            return Err(SpaceError::TooLarge("point count"));
        }
        let mut merged: BTreeMap<PointSet, Vec<String>> = BTreeMap::new();
        for (name, points) in basis {
            if points.universe() != n {
                return Err(SpaceError::UniverseMismatch(points, n));
            }
            merged.entry(points).or_default().push(name);
        }
        let basis: Vec<BasicOpen> = merged.into_iter().map(|(points, names)| BasicOpen { names, points }).collect();
        if basis.len() > MAX_UNIVERSE {
            return Err(SpaceError::TooLarge("basis size"));
        }
        let opens = union_closure(n, basis.iter().map(|b| b.points));
        Ok(FiniteSpace { point_names, basis, opens })
    }

    /// Basis elements named by their member points, e.g. `{s1}`.
    pub fn from_sets<I>(point_names: Vec<String>, basis: I) -> Result<Self, SpaceError>
    where
        I: IntoIterator<Item = PointSet>,
    {
        let named: Vec<(String, PointSet)> = basis.into_iter().map(|s| (s.display_with(&point_names), s)).collect();
        FiniteSpace::new(point_names, named)
    }

    pub fn point_count(&self) -> usize {
        self.point_names.len()
    }

    pub fn point_names(&self) -> &[String] {
        &self.point_names
    }

    pub fn basis(&self) -> &[BasicOpen] {
        &self.basis
    }

    pub fn basis_sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.basis.iter().map(|b| b.points)
    }

    pub fn basis_index(&self, set: &PointSet) -> Option<usize> {
        self.basis.binary_search_by(|b| b.points.cmp(set)).ok()
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn carrier(&self) -> PointSet {
        Subset::full(self.point_count())
    }

    pub fn empty(&self) -> PointSet {
        Subset::empty(self.point_count())
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        self.opens.binary_search(set).is_ok()
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        self.is_open(&set.complement())
    }

    pub fn closed_sets(&self) -> Vec<PointSet> {
        let mut c: Vec<PointSet> = self.opens.iter().map(|o| o.complement()).collect();
        c.sort();
        c
    }

    /// Smallest closed set containing `a`.
    pub fn closure(&self, a: &PointSet) -> PointSet {
        self.basis_sets().filter(|b| b.is_disjoint(a)).fold(self.empty(), |acc, b| acc.union(&b)).complement()
    }

    /// Largest open set inside `a`.
    pub fn interior(&self, a: &PointSet) -> PointSet {
        self.basis_sets().filter(|b| b.is_subset(a)).fold(self.empty(), |acc, b| acc.union(&b))
    }

    /// Basis indices of the basic opens containing `x`.
    pub fn point_filter(&self, x: usize) -> Subset {
        let idx = self.basis.iter().enumerate().filter(|(_, b)| b.points.contains(x)).map(|(i, _)| i);
        Subset::from_indices(self.basis.len(), idx).expect("basis size checked on construction")
    }

    pub fn irreducible_closed_sets(&self) -> Vec<PointSet> {
        let closed = self.closed_sets();
        closed
            .iter()
            .filter(|f| !f.is_empty())
            .filter(|f| {
                let parts: Vec<&PointSet> = closed.iter().filter(|c| c.is_strict_subset(f)).collect();
                !parts.iter().enumerate().any(|(i, a)| parts[i..].iter().any(|b| a.union(b) == **f))
            })
            .copied()
            .collect()
    }

    /// A point whose closure is `f`, and whether it is the only one.
    pub fn generic_point(&self, f: &PointSet) -> Result<Option<(usize, bool)>, SpaceError> {
        if !self.is_closed(f) || f.is_empty() {
            return Err(SpaceError::NotClosed(*f));
        }
        let mut hits = f.iter().filter(|&y| self.closure(&Subset::singleton(self.point_count(), y)) == *f);
        Ok(hits.next().map(|y| (y, hits.next().is_none())))
    }

    pub fn specialization_order(&self) -> SpecializationOrder {
        let n = self.point_count();
        let filters: Vec<Subset> = (0..n).map(|x| self.point_filter(x)).collect();
        // x ≤ y iff every basic open containing x contains y
        let up = (0..n)
            .map(|x| {
                let ys = (0..n).filter(|&y| filters[x].is_subset(&filters[y]));
                Subset::from_indices(n, ys).expect("points in range")
            })
            .collect();
        SpecializationOrder { up }
    }

    /// `{x | ↑x ∩ U ⊆ V}` for basic `U`, `V`.
    pub fn implication_open(&self, u: &PointSet, v: &PointSet) -> Result<PointSet, SpaceError> {
        for s in [u, v] {
            if self.basis_index(s).is_none() {
                return Err(SpaceError::NotBasic(*s));
            }
        }
        Ok(self.implication_with(&self.specialization_order(), u, v))
    }

    fn implication_with(&self, order: &SpecializationOrder, u: &PointSet, v: &PointSet) -> PointSet {
        let xs = (0..self.point_count()).filter(|&x| order.up(x).intersection(u).is_subset(v));
        Subset::from_indices(self.point_count(), xs).expect("points in range")
    }

    /// Every basic pair has its implication open in the basis; otherwise the
    /// first failing pair.
    pub fn has_implication(&self) -> Result<(), (PointSet, PointSet)> {
        let order = self.specialization_order();
        for u in self.basis_sets() {
            for v in self.basis_sets() {
                if self.basis_index(&self.implication_with(&order, &u, &v)).is_none() {
                    return Err((u, v));
                }
            }
        }
        Ok(())
    }

    /// Checks that the basis is closed under `∪` and `∩`.
    pub fn check_lattice(&self) -> Result<(), SpaceError> {
        for a in self.basis_sets() {
            for b in self.basis_sets() {
                if self.basis_index(&a.union(&b)).is_none() {
                    return Err(SpaceError::BasisNotLattice { op: "union", a, b });
                }
                if self.basis_index(&a.intersection(&b)).is_none() {
                    return Err(SpaceError::BasisNotLattice { op: "intersection", a, b });
                }
            }
        }
        Ok(())
    }

    /// Whether a set of basis indices is a prime filter on the basis lattice.
    ///
    /// A prime filter is upward closed, closed under intersection and
    /// join-prime; it never contains `∅` and must contain the carrier when
    /// the carrier is basic. These are exactly the properties every point
    /// filter has.
    pub fn is_prime_filter(&self, filter: &Subset) -> bool {
        let sets: Vec<PointSet> = self.basis_sets().collect();
        let member = |s: &PointSet| self.basis_index(s).is_some_and(|i| filter.contains(i));
        if member(&self.empty()) {
            return false;
        }
        if self.basis_index(&self.carrier()).is_some() && !member(&self.carrier()) {
            return false;
        }
        for i in filter.iter() {
            let u = sets[i];
            if sets.iter().any(|w| u.is_subset(w) && !member(w)) {
                return false;
            }
            for j in filter.iter() {
                if !member(&u.intersection(&sets[j])) {
                    return false;
                }
            }
        }
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i..] {
                if member(&a.union(b)) && !member(a) && !member(b) {
                    return false;
                }
            }
        }
        true
    }

    /// All prime filters on the basis lattice, as sets of basis indices.
    ///
    /// Non-empty filters on a finite lattice are principal, so the
    /// candidates are `↑U` for each basic `U` plus the empty filter.
    pub fn prime_filters_on_basis(&self) -> Result<Vec<PrimeFilter>, SpaceError> {
        self.check_lattice()?;
        let k = self.basis.len();
        let mut candidates = vec![Subset::empty(k)];
        for u in self.basis_sets() {
            let above = (0..k).filter(|&j| u.is_subset(&self.basis[j].points));
            candidates.push(Subset::from_indices(k, above).expect("basis indices in range"));
        }
        candidates.sort();
        candidates.dedup();
        Ok(candidates
            .into_iter()
            .filter(|f| self.is_prime_filter(f))
            .map(|elements| PrimeFilter { elements })
            .collect())
    }

    fn is_t0_with(&self, order: &SpecializationOrder) -> Result<(), (usize, usize)> {
        let n = self.point_count();
        for x in 0..n {
            for y in x + 1..n {
                if order.leq(x, y) && order.leq(y, x) {
                    return Err((x, y));
                }
            }
        }
        Ok(())
    }

    pub fn analyze(&self) -> SpaceReport {
        let order = self.specialization_order();
        let n = self.point_count();
        let t0 = self.is_t0_with(&order);
        let covered = self.basis_sets().fold(self.empty(), |acc, b| acc.union(&b));
        let covers_carrier = covered.is_full();
        let is_compact = self.is_open(&self.carrier());
        // every open of a finite space is compact, the empty one included
        let basis_is_compact_opens = self.opens.iter().all(|o| self.basis_index(o).is_some());
        let basis_intersection_closed = self.basis_sets().all(|a| {
            self.basis_sets().all(|b| {
                let m = a.intersection(&b);
                self.basis_index(&m).is_some()
            })
        });
        let mut sober_witness = None;
        for f in self.irreducible_closed_sets() {
            match self.generic_point(&f) {
                Ok(Some((_, true))) => {}
                _ => {
                    sober_witness = Some(f);
                    break;
                }
            }
        }
        let is_sober = sober_witness.is_none();
        let is_spectral = t0.is_ok()
            && covers_carrier
            && is_compact
            && basis_is_compact_opens
            && basis_intersection_closed
            && is_sober;
        let mut hausdorff_witness = None;
        'outer: for x in 0..n {
            for y in x + 1..n {
                let nx = self.basis_sets().filter(|b| b.contains(x)).fold(self.carrier(), |a, b| a.intersection(&b));
                let ny = self.basis_sets().filter(|b| b.contains(y)).fold(self.carrier(), |a, b| a.intersection(&b));
                let separated =
                    !self.point_filter(x).is_empty() && !self.point_filter(y).is_empty() && nx.is_disjoint(&ny);
                if !separated {
                    hausdorff_witness = Some((x, y));
                    break 'outer;
                }
            }
        }
        let is_hausdorff = hausdorff_witness.is_none() && (n == 0 || covers_carrier);
        let implication = self.has_implication();
        SpaceReport {
            is_t0: t0.is_ok(),
            t0_witness: t0.err(),
            covers_carrier,
            is_compact,
            basis_is_compact_opens,
            basis_intersection_closed,
            is_sober,
            sober_witness,
            is_spectral,
            is_hausdorff,
            hausdorff_witness,
            is_boolean: is_spectral && is_hausdorff,
            has_implication: implication.is_ok(),
            implication_witness: implication.err(),
        }
    }

    /// Distributive-space verdict: T0, the basis lists every compact open,
    /// the basis is a lattice, and points correspond one-to-one with prime
    /// filters on the basis.
    pub fn distributive_verdict(&self) -> DistributiveVerdict {
        let order = self.specialization_order();
        let bounded = self.basis_index(&self.empty()).is_some() && self.basis_index(&self.carrier()).is_some();
        let fail = |w: DistributiveFailure| DistributiveVerdict { distributive: false, bounded, witness: Some(w) };
        if let Err((x, y)) = self.is_t0_with(&order) {
            return fail(DistributiveFailure::NotT0(x, y));
        }
        if let Some(o) = self.opens.iter().find(|o| !o.is_empty() && self.basis_index(o).is_none()) {
            return fail(DistributiveFailure::MissingCompactOpen(*o));
        }
        let filters = match self.prime_filters_on_basis() {
            Ok(f) => f,
            Err(SpaceError::BasisNotLattice { op, a, b }) => return fail(DistributiveFailure::NotLattice { op, a, b }),
            Err(_) => unreachable!("prime filter enumeration only fails on non-lattices"),
        };
        let point_filters: Vec<Subset> = (0..self.point_count()).map(|x| self.point_filter(x)).collect();
        for f in &filters {
            if !point_filters.contains(&f.elements) {
                return fail(DistributiveFailure::UnrealizedFilter(f.elements));
            }
        }
        DistributiveVerdict { distributive: true, bounded, witness: None }
    }

    pub fn is_distributive_space(&self) -> bool {
        self.distributive_verdict().distributive
    }

    /// `W ⊆ U→V` iff `W ∩ U ⊆ V` over all basic triples; the first failing
    /// triple otherwise.
    pub fn check_adjunction(&self) -> Result<Option<(PointSet, PointSet, PointSet)>, SpaceError> {
        if let Err((u, v)) = self.has_implication() {
            return Err(SpaceError::NoImplication(u, v));
        }
        let order = self.specialization_order();
        for u in self.basis_sets() {
            for v in self.basis_sets() {
                let imp = self.implication_with(&order, &u, &v);
                for w in self.basis_sets() {
                    if w.is_subset(&imp) != w.intersection(&u).is_subset(&v) {
                        return Ok(Some((u, v, w)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Same points, with the Boolean algebra generated by the sets
    /// `U ∩ Vᶜ` (`U`, `V` basic or the carrier) as basis.
    pub fn constructible_topology(&self) -> Result<FiniteSpace, SpaceError> {
        if !self.analyze().is_spectral {
            return Err(SpaceError::NotSpectral);
        }
        let mut generators: Vec<PointSet> = self.basis_sets().collect();
        generators.push(self.carrier());
        let mut pieces = Vec::new();
        for u in &generators {
            for v in &generators {
                pieces.push(u.intersection(&v.complement()));
            }
        }
        let mut basis = union_closure(self.point_count(), pieces);
        basis.retain(|s| !s.is_empty());
        basis.push(self.empty());
        let space = FiniteSpace::from_sets(self.point_names.clone(), basis)?;
        debug_assert!(space.analyze().is_boolean, "constructible topology is not Boolean");
        Ok(space)
    }

    /// Whether the basis with `∪`, `∩` and the implication open is a
    /// Heyting algebra, plus the purely order-theoretic view of the basis
    /// lattice.
    pub fn heyting_verdict(&self) -> Result<HeytingVerdict, SpaceError> {
        self.check_lattice()?;
        let sets: Vec<PointSet> = self.basis_sets().collect();
        let order = self.specialization_order();
        let mut abstract_heyting = true;
        let mut heyting = true;
        for u in &sets {
            for v in &sets {
                // relative pseudo-complement: the largest W with W ∩ U ⊆ V
                let below: Vec<&PointSet> = sets.iter().filter(|w| w.intersection(u).is_subset(v)).collect();
                let rpc = below.iter().find(|w| below.iter().all(|x| x.is_subset(w)));
                match rpc {
                    None => {
                        abstract_heyting = false;
                        heyting = false;
                    }
                    Some(w) => {
                        if **w != self.implication_with(&order, u, v) {
                            heyting = false;
                        }
                    }
                }
            }
        }
        let bottom = sets.first().copied();
        let top = sets.iter().fold(self.empty(), |acc, s| acc.union(s));
        let boolean = match bottom {
            None => false,
            Some(bottom) => sets.iter().all(|u| sets.iter().any(|c| u.intersection(c) == bottom && u.union(c) == top)),
        };
        Ok(HeytingVerdict { heyting, abstract_heyting, boolean_lattice: boolean })
    }

    pub fn is_heyting_basis(&self) -> Result<bool, SpaceError> {
        Ok(self.heyting_verdict()?.heyting)
    }
}

fn union_closure<I: IntoIterator<Item = PointSet>>(n: usize, sets: I) -> Vec<PointSet> {
    let mut all: std::collections::BTreeSet<PointSet> = sets.into_iter().collect();
    all.insert(Subset::empty(n));
    let mut frontier: Vec<PointSet> = all.iter().copied().collect();
    while !frontier.is_empty() {
        let snapshot: Vec<PointSet> = all.iter().copied().collect();
        let mut next = Vec::new();
        for f in &frontier {
            for s in &snapshot {
                let u = f.union(s);
                if all.insert(u) {
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    all.into_iter().collect()
}

/// Reflexive-transitive specialization relation, stored as up-sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationOrder {
    up: Vec<PointSet>,
}

impl SpecializationOrder {
    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// `↑x`.
    pub fn up(&self, x: usize) -> PointSet {
        self.up[x]
    }

    pub fn up_of(&self, set: &PointSet) -> PointSet {
        set.iter().fold(Subset::empty(self.len()), |acc, x| acc.union(&self.up[x]))
    }

    pub fn is_upset(&self, set: &PointSet) -> bool {
        self.up_of(set) == *set
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.len()).all(|x| (x + 1..self.len()).all(|y| !(self.leq(x, y) && self.leq(y, x))))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceReport {
    pub is_t0: bool,
    pub t0_witness: Option<(usize, usize)>,
    pub covers_carrier: bool,
    pub is_compact: bool,
    pub basis_is_compact_opens: bool,
    pub basis_intersection_closed: bool,
    pub is_sober: bool,
    /// Irreducible closed set without a unique generic point.
    pub sober_witness: Option<PointSet>,
    pub is_spectral: bool,
    pub is_hausdorff: bool,
    pub hausdorff_witness: Option<(usize, usize)>,
    pub is_boolean: bool,
    pub has_implication: bool,
    pub implication_witness: Option<(PointSet, PointSet)>,
}

/// A prime filter on the basis lattice, as a set of basis indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimeFilter {
    pub elements: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistributiveFailure {
    NotT0(usize, usize),
    MissingCompactOpen(PointSet),
    NotLattice {
        op: &'static str,
        a: PointSet,
        b: PointSet,
    },
    /// A prime filter that is no point's filter.
    UnrealizedFilter(Subset),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributiveVerdict {
    pub distributive: bool,
    pub bounded: bool,
    pub witness: Option<DistributiveFailure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeytingVerdict {
    /// Every relative pseudo-complement exists in the basis and equals the
    /// implication open.
    pub heyting: bool,
    /// Every relative pseudo-complement exists in the basis lattice.
    pub abstract_heyting: bool,
    /// The basis lattice is complemented.
    pub boolean_lattice: bool,
}

/// Hand-sized spaces used throughout the tests and the corpus.
pub mod samples {
    use super::*;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn sets(n: usize, xs: &[&[usize]]) -> Vec<PointSet> {
        xs.iter().map(|s| Subset::from_indices(n, s.iter().copied()).unwrap()).collect()
    }

    /// Points `s0`, `s1`; basis `∅`, `{s1}`, `X`.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::from_sets(names(&["s0", "s1"]), sets(2, &[&[], &[1], &[0, 1]])).unwrap()
    }

    /// Points `x`, `y` with the full powerset as basis.
    pub fn discrete2() -> FiniteSpace {
        FiniteSpace::from_sets(names(&["x", "y"]), sets(2, &[&[], &[0], &[1], &[0, 1]])).unwrap()
    }

    pub fn indiscrete2() -> FiniteSpace {
        FiniteSpace::from_sets(names(&["x", "y"]), sets(2, &[&[0, 1]])).unwrap()
    }

    pub fn one_point() -> FiniteSpace {
        FiniteSpace::from_sets(names(&["p"]), sets(1, &[&[], &[0]])).unwrap()
    }

    /// The prime-theory space of the V-frame logic.
    pub fn v_spectrum() -> FiniteSpace {
        FiniteSpace::from_sets(names(&["p0", "p1", "p2"]), sets(3, &[&[], &[1], &[2], &[1, 2], &[0, 1, 2]])).unwrap()
    }
}
