//! Connective tables and the conditions that classify a logic as
//! distributive, bounded, intuitionistic or classical.
//!
//! Every condition quantifies over the totally prime theories. A condition
//! whose connective is missing is reported as not applicable rather than
//! silently holding.

use std::fmt;

use thiserror::Error;

use crate::logic::AbstractLogic;
use crate::subset::ExprSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("{table} table has the wrong shape for {universe} expressions")]
    Shape { table: &'static str, universe: usize },
    #[error("{table} table entry {value} is not an expression index")]
    Entry { table: &'static str, value: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectiveError {
    #[error("the logic has no {0} table")]
    MissingTable(&'static str),
    #[error("the logic has no join table")]
    MissingJoin,
    #[error("the logic is not distributive")]
    NotDistributive,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("maximal theory {0} avoiding the set is not prime")]
    PrimalityFailure(ExprSet),
}

/// A total binary operation on expression indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryTable {
    n: usize,
    cells: Vec<usize>,
}

impl BinaryTable {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let cells = (0..n * n).map(|k| f(k / n.max(1), k % n.max(1))).collect();
        BinaryTable { n, cells }
    }

    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self, TableError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(TableError::Shape { table: "binary", universe: n });
        }
        Ok(BinaryTable { n, cells: rows.into_iter().flatten().collect() })
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.cells[a * self.n + b]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }
}

/// Tables for `∨`, `∧`, `→`, `∼` and the constants `⊤`, `⊥`; each optional.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConnectiveTables {
    pub join: Option<BinaryTable>,
    pub meet: Option<BinaryTable>,
    pub implication: Option<BinaryTable>,
    pub negation: Option<Vec<usize>>,
    pub top: Option<usize>,
    pub bottom: Option<usize>,
}

impl ConnectiveTables {
    pub fn is_empty(&self) -> bool {
        *self == ConnectiveTables::default()
    }

    pub fn validate(&self, universe: usize) -> Result<(), TableError> {
        let binaries = [("join", &self.join), ("meet", &self.meet), ("impl", &self.implication)];
        for (table, t) in binaries {
            if let Some(t) = t {
                if t.size() != universe {
                    return Err(TableError::Shape { table, universe });
                }
                if let Some(&value) = t.cells.iter().find(|&&v| v >= universe) {
                    return Err(TableError::Entry { table, value });
                }
            }
        }
        if let Some(neg) = &self.negation {
            if neg.len() != universe {
                return Err(TableError::Shape { table: "neg", universe });
            }
            if let Some(&value) = neg.iter().find(|&&v| v >= universe) {
                return Err(TableError::Entry { table: "neg", value });
            }
        }
        for (table, c) in [("top", self.top), ("bottom", self.bottom)] {
            if let Some(value) = c.filter(|&v| v >= universe) {
                return Err(TableError::Entry { table, value });
            }
        }
        Ok(())
    }

    /// Restricts the tables to the `kept` expressions, renumbering results
    /// through `projection`.
    pub(crate) fn transport(&self, kept: &[usize], projection: &[usize]) -> ConnectiveTables {
        let n = kept.len();
        let bin = |t: &BinaryTable| BinaryTable::from_fn(n, |a, b| projection[t.get(kept[a], kept[b])]);
        ConnectiveTables {
            join: self.join.as_ref().map(bin),
            meet: self.meet.as_ref().map(bin),
            implication: self.implication.as_ref().map(bin),
            negation: self.negation.as_ref().map(|t| kept.iter().map(|&a| projection[t[a]]).collect()),
            top: self.top.map(|t| projection[t]),
            bottom: self.bottom.map(|b| projection[b]),
        }
    }
}

/// The six connective conditions, in order (i) to (vi).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    Join,
    Meet,
    Negation,
    Implication,
    Top,
    Bottom,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::Join,
        Condition::Meet,
        Condition::Negation,
        Condition::Implication,
        Condition::Top,
        Condition::Bottom,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Condition::Join => "join",
            Condition::Meet => "meet",
            Condition::Negation => "negation",
            Condition::Implication => "implication",
            Condition::Top => "top",
            Condition::Bottom => "bottom",
        }
    }
}

/// Counterexample to a connective condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Pair {
        theory: ExprSet,
        a: usize,
        b: usize,
    },
    Single {
        theory: ExprSet,
        a: usize,
    },
    /// No expression with the required property exists.
    NoSuchFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The condition holds. For the constants, `formula` names the
    /// expression that realises it.
    Holds {
        formula: Option<usize>,
    },
    Fails(Witness),
    NotApplicable {
        missing: &'static str,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogicClass {
    None,
    Distributive,
    BoundedDistributive,
    Intuitionistic,
    Classical,
}

impl fmt::Display for LogicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicClass::None => "none",
            LogicClass::Distributive => "distributive",
            LogicClass::BoundedDistributive => "bounded-distributive",
            LogicClass::Intuitionistic => "intuitionistic",
            LogicClass::Classical => "classical",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    /// Verdicts for conditions (i) to (vi), indexed like [`Condition::ALL`].
    pub verdicts: [Verdict; 6],
    pub maximal_equals_totally_prime: bool,
    pub distributive: bool,
    pub bounded: bool,
    pub intuitionistic: bool,
    pub classical: bool,
    pub class: LogicClass,
}

impl ClassificationReport {
    pub fn verdict(&self, c: Condition) -> &Verdict {
        &self.verdicts[c as usize]
    }
}

fn check_binary(
    tps: &[ExprSet],
    n: usize,
    table: &BinaryTable,
    rule: impl Fn(&ExprSet, usize, usize, bool) -> bool,
) -> Verdict {
    for t in tps {
        for a in 0..n {
            for b in 0..n {
                if !rule(t, a, b, t.contains(table.get(a, b))) {
                    return Verdict::Fails(Witness::Pair { theory: *t, a, b });
                }
            }
        }
    }
    Verdict::Holds { formula: None }
}

/// Evaluates conditions (i)–(vi) over the totally prime theories.
///
/// Witnesses are the first violation in (theory, a, b) order, with theories
/// in canonical order.
pub fn verify_connectives(logic: &AbstractLogic) -> ClassificationReport {
    let n = logic.universe();
    let spectrum = logic.spectrum();
    let tps = &spectrum.totally_primes;
    let c = logic.connectives();

    let join = match &c.join {
        Some(t) => check_binary(tps, n, t, |th, a, b, inside| inside == (th.contains(a) || th.contains(b))),
        None => Verdict::NotApplicable { missing: "join" },
    };
    let meet = match &c.meet {
        Some(t) => check_binary(tps, n, t, |th, a, b, inside| inside == (th.contains(a) && th.contains(b))),
        None => Verdict::NotApplicable { missing: "meet" },
    };
    let negation = match &c.negation {
        Some(neg) => {
            let mut v = Verdict::Holds { formula: None };
            'outer: for t in tps {
                for (a, &na) in neg.iter().enumerate() {
                    let inconsistent = !logic.is_consistent(&t.with(a));
                    if t.contains(na) != inconsistent {
                        v = Verdict::Fails(Witness::Single { theory: *t, a });
                        break 'outer;
                    }
                }
            }
            v
        }
        None => Verdict::NotApplicable { missing: "neg" },
    };
    let implication = match &c.implication {
        Some(t) => check_binary(tps, n, t, |th, a, b, inside| {
            let forced = tps.iter().filter(|u| th.is_subset(u)).all(|u| !u.contains(a) || u.contains(b));
            inside == forced
        }),
        None => Verdict::NotApplicable { missing: "impl" },
    };
    let top = constant_verdict(tps, n, c.top, |t, e| t.contains(e));
    let bottom = constant_verdict(tps, n, c.bottom, |t, e| !t.contains(e));

    let maximal_equals_totally_prime = spectrum.maximals == spectrum.totally_primes;
    let distributive = join.holds() && meet.holds();
    let bounded = distributive && top.holds() && bottom.holds();
    let intuitionistic = distributive && negation.holds() && implication.holds();
    let classical = intuitionistic && maximal_equals_totally_prime;
    let class = if classical {
        LogicClass::Classical
    } else if intuitionistic {
        LogicClass::Intuitionistic
    } else if bounded {
        LogicClass::BoundedDistributive
    } else if distributive {
        LogicClass::Distributive
    } else {
        LogicClass::None
    };
    ClassificationReport {
        verdicts: [join, meet, negation, implication, top, bottom],
        maximal_equals_totally_prime,
        distributive,
        bounded,
        intuitionistic,
        classical,
        class,
    }
}

/// (v)/(vi): a designated constant must have the property; without one,
/// any expression having it suffices.
fn constant_verdict(
    tps: &[ExprSet],
    n: usize,
    designated: Option<usize>,
    property: impl Fn(&ExprSet, usize) -> bool,
) -> Verdict {
    match designated {
        Some(e) => match tps.iter().find(|t| !property(t, e)) {
            Some(t) => Verdict::Fails(Witness::Single { theory: *t, a: e }),
            None => Verdict::Holds { formula: Some(e) },
        },
        None => match (0..n).find(|&e| tps.iter().all(|t| property(t, e))) {
            Some(e) => Verdict::Holds { formula: Some(e) },
            None => Verdict::Fails(Witness::NoSuchFormula),
        },
    }
}

/// `a ∨ b ∈ T` iff `a ∈ T` or `b ∈ T`, for all expressions.
pub fn is_join_stable(logic: &AbstractLogic, t: &ExprSet) -> Result<bool, ConnectiveError> {
    let join = logic.connectives().join.as_ref().ok_or(ConnectiveError::MissingJoin)?;
    let n = logic.universe();
    Ok((0..n).all(|a| (0..n).all(|b| t.contains(join.get(a, b)) == (t.contains(a) || t.contains(b)))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegenerateReport {
    pub no_valid_formula: bool,
    pub empty_is_prime: bool,
    pub no_inconsistent_formula: bool,
    pub full_set_is_prime: bool,
    /// For the empty set and the full set, whenever they are theories, the
    /// join-stability reading of prime agrees with the order-theoretic one.
    pub readings_agree: bool,
}

impl DegenerateReport {
    pub fn valid_biconditional(&self) -> bool {
        self.no_valid_formula == self.empty_is_prime
    }

    pub fn inconsistent_biconditional(&self) -> bool {
        self.no_inconsistent_formula == self.full_set_is_prime
    }

    pub fn holds(&self) -> bool {
        self.valid_biconditional() && self.inconsistent_biconditional() && self.readings_agree
    }
}

/// Checks when the empty set or the full expression set is a prime theory.
pub fn check_degenerate_primes(logic: &AbstractLogic) -> Result<DegenerateReport, ConnectiveError> {
    if !verify_connectives(logic).distributive {
        return Err(ConnectiveError::NotDistributive);
    }
    let stable_theory = |s: &ExprSet| -> Result<(bool, bool), ConnectiveError> {
        if !logic.theories().contains(s) {
            return Ok((false, true));
        }
        let stable = is_join_stable(logic, s)?;
        Ok((stable, stable == logic.spectrum().is_prime(s)))
    };
    let (empty_is_prime, agree_empty) = stable_theory(&logic.empty_set())?;
    let (full_set_is_prime, agree_full) = stable_theory(&logic.full_set())?;
    Ok(DegenerateReport {
        no_valid_formula: logic.valid_formulas().is_empty(),
        empty_is_prime,
        no_inconsistent_formula: logic.inconsistent_formulas().is_empty(),
        full_set_is_prime,
        readings_agree: agree_empty && agree_full,
    })
}

/// Least superset of `b` closed under the join table.
pub fn disjunctive_closure(logic: &AbstractLogic, b: &ExprSet) -> Result<ExprSet, ConnectiveError> {
    let join = logic.connectives().join.as_ref().ok_or(ConnectiveError::MissingJoin)?;
    let mut acc = *b;
    loop {
        let mut next = acc;
        for x in acc.iter() {
            for y in acc.iter() {
                next.insert(join.get(x, y));
            }
        }
        if next == acc {
            return Ok(acc);
        }
        acc = next;
    }
}

/// Extends theory `t` to a prime theory avoiding the join-closed set `s`.
///
/// Grows `t` inside the theories that contain it and miss `s`, always
/// stepping to the first admissible strict superset in canonical order,
/// until no step remains. The maximal element reached must be prime in a
/// distributive logic.
pub fn prime_extension(logic: &AbstractLogic, t: &ExprSet, s: &ExprSet) -> Result<ExprSet, ConnectiveError> {
    if !logic.theories().contains(t) {
        return Err(ConnectiveError::PreconditionViolated(format!("{t} is not a theory")));
    }
    if s.is_empty() {
        return Err(ConnectiveError::PreconditionViolated("avoided set is empty".into()));
    }
    if !t.is_disjoint(s) {
        return Err(ConnectiveError::PreconditionViolated(format!("{t} meets {s}")));
    }
    if disjunctive_closure(logic, s)? != *s {
        return Err(ConnectiveError::PreconditionViolated(format!("{s} is not closed under join")));
    }
    let mut current = *t;
    while let Some(next) = logic.theories().iter().find(|u| current.is_strict_subset(u) && u.is_disjoint(s)) {
        current = *next;
    }
    if logic.spectrum().is_prime(&current) {
        Ok(current)
    } else {
        Err(ConnectiveError::PrimalityFailure(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::samples;
    use crate::logic::TheoryFamily;
    use crate::subset::Subset;

    fn set(n: usize, xs: &[usize]) -> ExprSet {
        Subset::from_indices(n, xs.iter().copied()).unwrap()
    }

    #[test]
    fn three_chain_is_intuitionistic_not_classical() {
        let r = verify_connectives(&samples::l3());
        assert!(r.verdicts.iter().all(Verdict::holds), "{r:?}");
        assert_eq!(r.class, LogicClass::Intuitionistic);
        assert!(!r.classical);
        assert!(r.bounded);
    }

    #[test]
    fn boolean_square_is_classical() {
        let r = verify_connectives(&samples::l22());
        assert_eq!(r.class, LogicClass::Classical);
    }

    #[test]
    fn constant_join_breaks_condition_one() {
        let l3 = samples::l3();
        let mut c = l3.connectives().clone();
        c.join = Some(BinaryTable::from_fn(3, |_, _| 2));
        let broken = l3.with_connectives(c).unwrap();
        let r = verify_connectives(&broken);
        // first violation in (theory, a, b) order
        assert_eq!(r.verdict(Condition::Join), &Verdict::Fails(Witness::Pair { theory: set(3, &[2]), a: 0, b: 0 }));
        // the pair (1,1) also violates it: 1∨1 = ⊤ ∈ {2} but 1 ∉ {2}
        let j = broken.connectives().join.as_ref().unwrap();
        let t = set(3, &[2]);
        assert!(t.contains(j.get(1, 1)) && !t.contains(1));
        assert_eq!(r.class, LogicClass::None);
    }

    #[test]
    fn missing_tables_are_not_applicable() {
        let bare = AbstractLogic::bare(samples::l3().theories().clone());
        let r = verify_connectives(&bare);
        assert_eq!(r.verdict(Condition::Join), &Verdict::NotApplicable { missing: "join" });
        assert_eq!(r.verdict(Condition::Implication), &Verdict::NotApplicable { missing: "impl" });
        // constants are existential and need no table
        assert_eq!(r.verdict(Condition::Top), &Verdict::Holds { formula: Some(2) });
        assert_eq!(r.class, LogicClass::None);
    }

    #[test]
    fn degenerate_flags() {
        let r = check_degenerate_primes(&samples::l3()).unwrap();
        assert!(!r.no_valid_formula && !r.no_inconsistent_formula);
        assert!(r.holds());
        let r = check_degenerate_primes(&samples::l22()).unwrap();
        assert!(!r.no_valid_formula);
        let r = check_degenerate_primes(&samples::singular_chain()).unwrap();
        assert!(r.no_inconsistent_formula && r.full_set_is_prime);
        assert!(r.holds());
        let bare = AbstractLogic::bare(samples::l3().theories().clone());
        assert_eq!(check_degenerate_primes(&bare), Err(ConnectiveError::NotDistributive));
    }

    #[test]
    fn closures() {
        assert_eq!(disjunctive_closure(&samples::l22(), &set(4, &[1, 2])).unwrap(), set(4, &[1, 2, 3]));
        assert_eq!(disjunctive_closure(&samples::l3(), &set(3, &[2])).unwrap(), set(3, &[2]));
        assert_eq!(disjunctive_closure(&samples::lv3(), &set(5, &[1, 2])).unwrap(), set(5, &[1, 2, 3]));
        let bare = AbstractLogic::bare(TheoryFamily::new(1, [set(1, &[0])]).unwrap());
        assert_eq!(disjunctive_closure(&bare, &set(1, &[0])), Err(ConnectiveError::MissingJoin));
    }

    #[test]
    fn prime_extensions() {
        let l22 = samples::l22();
        assert_eq!(prime_extension(&l22, &set(4, &[3]), &set(4, &[1])).unwrap(), set(4, &[2, 3]));
        let l3 = samples::l3();
        assert_eq!(prime_extension(&l3, &set(3, &[2]), &set(3, &[1])).unwrap(), set(3, &[2]));
        assert!(matches!(
            prime_extension(&l22, &set(4, &[3]), &set(4, &[1, 2, 3])),
            Err(ConnectiveError::PreconditionViolated(_))
        ));
        // {1,2} is not closed under join in L22
        assert!(matches!(
            prime_extension(&l22, &set(4, &[]).with(3), &set(4, &[1, 2])),
            Err(ConnectiveError::PreconditionViolated(_))
        ));
        assert!(matches!(
            prime_extension(&l22, &set(4, &[1]), &set(4, &[2])),
            Err(ConnectiveError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn prime_extension_reports_non_distributive_inputs() {
        // {0} = {0,1} ∩ {0,2}, and both covers meet the join-closed {1,2,3}
        let theories = TheoryFamily::close_under_intersection(4, [set(4, &[0, 1]), set(4, &[0, 2])]).unwrap();
        let tables = ConnectiveTables {
            join: Some(BinaryTable::from_fn(4, |a, b| if a == b { a } else { 3 })),
            ..Default::default()
        };
        let logic = AbstractLogic::new((0..4).map(|i| format!("e{i}")).collect(), theories, tables).unwrap();
        assert_eq!(
            prime_extension(&logic, &set(4, &[0]), &set(4, &[1, 2, 3])),
            Err(ConnectiveError::PrimalityFailure(set(4, &[0])))
        );
    }
}
