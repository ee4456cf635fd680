//! Finite abstract logics as intersection structures.
//!
//! A logic is a finite expression universe together with a family of
//! theories closed under non-empty intersections. Consequence, consistency,
//! the primality hierarchy and logical equivalence are all computed from the
//! extensional theory family.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use thiserror::Error;

use crate::connectives::{ConnectiveTables, TableError};
use crate::subset::{intersect_all, ExprSet, Subset, SubsetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("generator set is empty")]
    EmptyGeneratorSet,
    #[error("set {set} does not live in a universe of size {universe}")]
    UniverseMismatch { set: ExprSet, universe: usize },
    #[error("theory family is not closed under intersection: {a} ∩ {b} is missing")]
    NotIntersectionClosed { a: ExprSet, b: ExprSet },
    #[error("{names} expression names for a universe of {universe}")]
    NameCountMismatch { names: usize, universe: usize },
    #[error("{0} is not a theory")]
    NotTheories(ExprSet),
    #[error("expression index {index} out of range for {universe} expressions")]
    ExprOutOfRange { index: usize, universe: usize },
    #[error(transparent)]
    Subset(#[from] SubsetError),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// A non-empty family of expression sets closed under non-empty intersections.
///
/// Theories are kept sorted in [`Subset`] order without duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryFamily {
    universe: usize,
    theories: Vec<ExprSet>,
}

impl TheoryFamily {
    /// The smallest intersection-closed family containing `generators`.
    pub fn close_under_intersection<I>(universe: usize, generators: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = ExprSet>,
    {
        let mut all = BTreeSet::new();
        for g in generators {
            if g.universe() != universe {
                return Err(LogicError::UniverseMismatch { set: g, universe });
            }
            all.insert(g);
        }
        if all.is_empty() {
            return Err(LogicError::EmptyGeneratorSet);
        }
        // Semi-naive fixpoint: only intersect newly found sets against the rest.
        let mut frontier: Vec<ExprSet> = all.iter().copied().collect();
        while !frontier.is_empty() {
            let snapshot: Vec<ExprSet> = all.iter().copied().collect();
            let mut next = Vec::new();
            for f in &frontier {
                for s in &snapshot {
                    let m = f.intersection(s);
                    if all.insert(m) {
                        next.push(m);
                    }
                }
            }
            frontier = next;
        }
        Ok(TheoryFamily { universe, theories: all.into_iter().collect() })
    }

    /// Wraps an explicit family, verifying the intersection axiom.
    pub fn new<I>(universe: usize, theories: I) -> Result<Self, LogicError>
    where
        I: IntoIterator<Item = ExprSet>,
    {
        let mut set = BTreeSet::new();
        for t in theories {
            if t.universe() != universe {
                return Err(LogicError::UniverseMismatch { set: t, universe });
            }
            set.insert(t);
        }
        if set.is_empty() {
            return Err(LogicError::EmptyGeneratorSet);
        }
        let theories: Vec<ExprSet> = set.into_iter().collect();
        for (i, a) in theories.iter().enumerate() {
            for b in &theories[i + 1..] {
                if theories.binary_search(&a.intersection(b)).is_err() {
                    return Err(LogicError::NotIntersectionClosed { a: *a, b: *b });
                }
            }
        }
        Ok(TheoryFamily { universe, theories })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn theories(&self) -> &[ExprSet] {
        &self.theories
    }

    pub fn len(&self) -> usize {
        self.theories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theories.is_empty()
    }

    pub fn contains(&self, set: &ExprSet) -> bool {
        self.theories.binary_search(set).is_ok()
    }

    pub fn index_of(&self, set: &ExprSet) -> Option<usize> {
        self.theories.binary_search(set).ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExprSet> {
        self.theories.iter()
    }
}

/// The primality hierarchy of a logic's theories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySpectrum {
    pub primes: Vec<ExprSet>,
    pub totally_primes: Vec<ExprSet>,
    pub maximals: Vec<ExprSet>,
    pub minimal_generators: Vec<ExprSet>,
}

impl TheorySpectrum {
    fn compute(family: &TheoryFamily) -> Self {
        let ts = family.theories();
        let mut primes = Vec::new();
        let mut totally_primes = Vec::new();
        let mut maximals = Vec::new();
        for t in ts {
            let above: Vec<ExprSet> = ts.iter().filter(|s| t.is_strict_subset(s)).copied().collect();
            if above.is_empty() {
                maximals.push(*t);
            }
            // Over arbitrary families: T is the meet of some family avoiding T
            // exactly when it is the meet of everything strictly above it.
            if intersect_all(&above) != Some(*t) {
                totally_primes.push(*t);
            }
            // Over finite families: intersection closure reduces any witnessing
            // family to two upper covers of T.
            let covers: Vec<ExprSet> =
                above.iter().filter(|c| !above.iter().any(|d| d.is_strict_subset(c))).copied().collect();
            let split = covers.iter().enumerate().any(|(i, a)| covers[i + 1..].iter().any(|b| a.intersection(b) == *t));
            if !split {
                primes.push(*t);
            }
        }
        debug_assert_eq!(primes, totally_primes, "prime and totally prime differ on a finite family");
        TheorySpectrum { minimal_generators: totally_primes.clone(), primes, totally_primes, maximals }
    }

    pub fn is_prime(&self, t: &ExprSet) -> bool {
        self.primes.binary_search(t).is_ok()
    }
}

/// A finite abstract logic: named expressions, a theory family and
/// optional connective tables.
#[derive(Debug, Clone)]
pub struct AbstractLogic {
    expr_names: Vec<String>,
    theories: TheoryFamily,
    connectives: ConnectiveTables,
    spectrum: OnceLock<TheorySpectrum>,
}

impl PartialEq for AbstractLogic {
    fn eq(&self, other: &Self) -> bool {
        self.expr_names == other.expr_names && self.theories == other.theories && self.connectives == other.connectives
    }
}

impl Eq for AbstractLogic {}

impl AbstractLogic {
    pub fn new(
        expr_names: Vec<String>,
        theories: TheoryFamily,
        connectives: ConnectiveTables,
    ) -> Result<Self, LogicError> {
        let universe = theories.universe();
        if expr_names.len() != universe {
            return Err(LogicError::NameCountMismatch { names: expr_names.len(), universe });
        }
        connectives.validate(universe)?;
        Ok(AbstractLogic { expr_names, theories, connectives, spectrum: OnceLock::new() })
    }

    /// Logic without connectives, with expressions named `e0`, `e1`, ...
    pub fn bare(theories: TheoryFamily) -> Self {
        let names = (0..theories.universe()).map(|i| format!("e{i}")).collect();
        AbstractLogic::new(names, theories, ConnectiveTables::default())
            .expect("generated names always match the universe")
    }

    pub fn with_connectives(&self, connectives: ConnectiveTables) -> Result<Self, LogicError> {
        AbstractLogic::new(self.expr_names.clone(), self.theories.clone(), connectives)
    }

    pub fn universe(&self) -> usize {
        self.theories.universe()
    }

    pub fn expr_names(&self) -> &[String] {
        &self.expr_names
    }

    pub fn name(&self, expr: usize) -> &str {
        &self.expr_names[expr]
    }

    pub fn theories(&self) -> &TheoryFamily {
        &self.theories
    }

    pub fn connectives(&self) -> &ConnectiveTables {
        &self.connectives
    }

    pub fn empty_set(&self) -> ExprSet {
        Subset::empty(self.universe())
    }

    pub fn full_set(&self) -> ExprSet {
        Subset::full(self.universe())
    }

    pub fn set<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<ExprSet, LogicError> {
        Ok(Subset::from_indices(self.universe(), indices)?)
    }

    fn check_fits(&self, a: &ExprSet) {
        assert_eq!(a.universe(), self.universe(), "expression set from another universe");
    }

    pub fn is_regular(&self) -> bool {
        !self.theories.contains(&self.full_set())
    }

    pub fn is_singular(&self) -> bool {
        !self.is_regular()
    }

    /// True iff some theory contains `a`.
    pub fn is_consistent(&self, a: &ExprSet) -> bool {
        self.check_fits(a);
        self.theories.iter().any(|t| a.is_subset(t))
    }

    /// Intersection of all theories containing `a`; the full expression set
    /// when no theory does.
    pub fn consequence(&self, a: &ExprSet) -> ExprSet {
        self.check_fits(a);
        intersect_all(self.theories.iter().filter(|t| a.is_subset(t))).unwrap_or_else(|| self.full_set())
    }

    pub fn entails(&self, a: &ExprSet, b: usize) -> bool {
        self.consequence(a).contains(b)
    }

    pub fn is_theory(&self, s: &ExprSet) -> bool {
        self.check_fits(s);
        let member = self.theories.contains(s);
        debug_assert_eq!(member, self.is_consistent(s) && self.consequence(s) == *s);
        member
    }

    /// Expressions contained in every theory.
    pub fn valid_formulas(&self) -> ExprSet {
        self.consequence(&self.empty_set())
    }

    /// Expressions contained in no theory.
    pub fn inconsistent_formulas(&self) -> ExprSet {
        let covered = self.theories.iter().fold(self.empty_set(), |acc, t| acc.union(t));
        covered.complement()
    }

    pub fn spectrum(&self) -> &TheorySpectrum {
        self.spectrum.get_or_init(|| TheorySpectrum::compute(&self.theories))
    }

    pub fn primes(&self) -> &[ExprSet] {
        &self.spectrum().primes
    }

    /// True iff every theory is the intersection of a non-empty subfamily of `gens`.
    pub fn is_generator_set(&self, gens: &[ExprSet]) -> Result<bool, LogicError> {
        for g in gens {
            if g.universe() != self.universe() || !self.theories.contains(g) {
                return Err(LogicError::NotTheories(*g));
            }
        }
        Ok(self.theories.iter().all(|t| intersect_all(gens.iter().filter(|g| t.is_subset(g))) == Some(*t)))
    }

    fn check_expr(&self, e: usize) -> Result<(), LogicError> {
        if e >= self.universe() {
            Err(LogicError::ExprOutOfRange { index: e, universe: self.universe() })
        } else {
            Ok(())
        }
    }

    /// `{a} ⊩ b` and `{b} ⊩ a`.
    pub fn logically_equivalent(&self, a: usize, b: usize) -> Result<bool, LogicError> {
        self.check_expr(a)?;
        self.check_expr(b)?;
        let u = self.universe();
        let eq = self.entails(&Subset::singleton(u, a), b) && self.entails(&Subset::singleton(u, b), a);
        debug_assert_eq!(eq, self.membership_column(a) == self.membership_column(b));
        Ok(eq)
    }

    /// Which theories (by index) contain `expr`.
    pub fn membership_column(&self, expr: usize) -> Vec<bool> {
        self.theories.iter().map(|t| t.contains(expr)).collect()
    }

    /// Class representative (smallest equivalent index) for every expression.
    pub fn representatives(&self) -> Vec<usize> {
        let cols: Vec<Vec<bool>> = (0..self.universe()).map(|e| self.membership_column(e)).collect();
        (0..self.universe()).map(|e| (0..=e).find(|&r| cols[r] == cols[e]).unwrap_or(e)).collect()
    }

    /// One expression per `=_L` class, with theories and connectives carried
    /// through the projection. Returns the quotient and the projection.
    pub fn quotient(&self) -> (AbstractLogic, Vec<usize>) {
        let reps = self.representatives();
        let kept: Vec<usize> = (0..self.universe()).filter(|&e| reps[e] == e).collect();
        let new_index = |e: usize| kept.binary_search(&reps[e]).expect("representative is kept");
        let projection: Vec<usize> = (0..self.universe()).map(new_index).collect();
        let n = kept.len();
        let theories = self
            .theories
            .iter()
            .map(|t| Subset::from_indices(n, t.iter().map(|e| projection[e])).expect("projection stays in range"));
        let theories = TheoryFamily::new(n, theories).expect("projected family stays intersection-closed");
        let names = kept.iter().map(|&e| self.expr_names[e].clone()).collect();
        let connectives = self.connectives.transport(&kept, &projection);
        let q = AbstractLogic::new(names, theories, connectives).expect("quotient is well formed");
        (q, projection)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::samples;

    fn set(n: usize, xs: &[usize]) -> ExprSet {
        Subset::from_indices(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn closure_examples() {
        let f = TheoryFamily::close_under_intersection(3, [set(3, &[0, 1]), set(3, &[1, 2])]).unwrap();
        assert_eq!(f.theories(), &[set(3, &[1]), set(3, &[0, 1]), set(3, &[1, 2])]);
        let f = TheoryFamily::close_under_intersection(2, [set(2, &[0, 1])]).unwrap();
        assert_eq!(f.theories(), &[set(2, &[0, 1])]);
        let f = TheoryFamily::close_under_intersection(2, [set(2, &[0]), set(2, &[1])]).unwrap();
        assert_eq!(f.theories(), &[set(2, &[]), set(2, &[0]), set(2, &[1])]);
        assert_eq!(TheoryFamily::close_under_intersection(2, []), Err(LogicError::EmptyGeneratorSet));
    }

    #[test]
    fn explicit_family_must_be_closed() {
        let err = TheoryFamily::new(2, [set(2, &[0]), set(2, &[1])]).unwrap_err();
        assert!(matches!(err, LogicError::NotIntersectionClosed { .. }));
    }

    #[test]
    fn consistency_on_three_chain() {
        let l3 = samples::l3();
        assert!(l3.is_consistent(&set(3, &[1])));
        assert!(!l3.is_consistent(&set(3, &[0])));
        assert!(l3.is_consistent(&set(3, &[])));
    }

    #[test]
    fn consequence_on_four_element_boolean() {
        let l22 = samples::l22();
        assert_eq!(l22.consequence(&set(4, &[1])), set(4, &[1, 3]));
        assert_eq!(l22.consequence(&set(4, &[])), set(4, &[3]));
        assert_eq!(l22.consequence(&set(4, &[0])), set(4, &[0, 1, 2, 3]));
    }

    #[test]
    fn theory_membership() {
        let l3 = samples::l3();
        assert!(l3.is_theory(&set(3, &[1, 2])));
        assert!(!l3.is_theory(&set(3, &[1])));
        assert_eq!(l3.consequence(&set(3, &[1])), set(3, &[1, 2]));
        assert!(!l3.is_theory(&set(3, &[0, 1, 2])));
    }

    #[test]
    fn spectra_of_samples() {
        let s = samples::l3().spectrum().clone();
        assert_eq!(s.primes, vec![set(3, &[2]), set(3, &[1, 2])]);
        assert_eq!(s.totally_primes, s.primes);
        assert_eq!(s.maximals, vec![set(3, &[1, 2])]);

        let s = samples::l22().spectrum().clone();
        assert_eq!(s.primes, vec![set(4, &[1, 3]), set(4, &[2, 3])]);

        let s = samples::lv3().spectrum().clone();
        assert_eq!(s.primes, vec![set(5, &[4]), set(5, &[1, 3, 4]), set(5, &[2, 3, 4])]);
        assert!(!s.is_prime(&set(5, &[3, 4])));
    }

    #[test]
    fn generator_sets() {
        let l22 = samples::l22();
        assert!(l22.is_generator_set(&[set(4, &[1, 3]), set(4, &[2, 3])]).unwrap());
        assert!(!l22.is_generator_set(&[set(4, &[1, 3])]).unwrap());
        assert!(l22.is_generator_set(l22.theories().theories()).unwrap());
        assert_eq!(l22.is_generator_set(&[set(4, &[1])]), Err(LogicError::NotTheories(set(4, &[1]))));
    }

    #[test]
    fn equivalence() {
        assert!(samples::l3().logically_equivalent(2, 2).unwrap());
        assert!(!samples::l22().logically_equivalent(1, 2).unwrap());
        let dup = samples::l3_with_duplicate();
        assert!(dup.logically_equivalent(1, 3).unwrap());
        assert!(samples::l3().logically_equivalent(0, 5).is_err());
    }

    #[test]
    fn quotients() {
        let (q, p) = samples::l22().quotient();
        assert_eq!(q, samples::l22());
        assert_eq!(p, vec![0, 1, 2, 3]);

        let (q, p) = samples::l3_with_duplicate().quotient();
        assert_eq!(q, samples::l3());
        assert_eq!(p, vec![0, 1, 2, 1]);
    }

    #[test]
    fn regularity() {
        assert!(samples::l3().is_regular());
        assert!(samples::singular_chain().is_singular());
    }
}
