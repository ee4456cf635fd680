//! The functors between logics and spaces, the natural maps `τ` and `σ`,
//! and the analysis of logic maps.
//!
//! `F` sends a distributive logic to the space of its prime theories and a
//! stable map `h: L → L'` to `P' ↦ h⁻¹(P')`. `G` sends a distributive space
//! to the filter logic of its basis and a spectral map `f: X → X'` to
//! `U' ↦ f⁻¹(U')`. Both are contravariant, so every map records its source
//! and target explicitly and composites check that they line up.

use thiserror::Error;

use crate::connectives::{verify_connectives, BinaryTable, ConnectiveTables};
use crate::logic::{AbstractLogic, LogicError, TheoryFamily};
use crate::subset::{ExprSet, PointSet, Subset};
use crate::topology::{DistributiveFailure, FiniteSpace, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("logic is not distributive")]
    NotDistributive,
    #[error("space is not distributive: {0:?}")]
    NotDistributiveSpace(Option<DistributiveFailure>),
    #[error("preimage of theory {0} is not a theory")]
    NotLogicMap(ExprSet),
    #[error("preimage of prime theory {0} is not prime")]
    NotStable(ExprSet),
    #[error("preimage of basic open {0} is not basic")]
    NotSpectralMap(PointSet),
    #[error("a join table is required")]
    MissingJoin,
    #[error("map has {got} entries but its source has {expected}")]
    MapShape { expected: usize, got: usize },
    #[error("map value {value} is outside a codomain of size {bound}")]
    MapOutOfRange { value: usize, bound: usize },
    #[error("direction mismatch: {0}")]
    DirectionMismatch(&'static str),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// An expression function `h: source → target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicMap {
    pub source: AbstractLogic,
    pub target: AbstractLogic,
    pub map: Vec<usize>,
}

impl LogicMap {
    pub fn new(source: AbstractLogic, target: AbstractLogic, map: Vec<usize>) -> Result<Self, DualityError> {
        check_shape(&map, source.universe(), target.universe())?;
        Ok(LogicMap { source, target, map })
    }

    pub fn identity(logic: &AbstractLogic) -> Self {
        LogicMap { source: logic.clone(), target: logic.clone(), map: (0..logic.universe()).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `h⁻¹(B)` for a target expression set `B`.
    pub fn preimage(&self, b: &ExprSet) -> ExprSet {
        let hits = (0..self.map.len()).filter(|&a| b.contains(self.map[a]));
        Subset::from_indices(self.source.universe(), hits).expect("source indices in range")
    }

    /// `next ∘ self`; `next` must start where `self` ends.
    pub fn then(&self, next: &LogicMap) -> Result<LogicMap, DualityError> {
        if next.source != self.target {
            return Err(DualityError::DirectionMismatch("second map does not start at the first map's target"));
        }
        Ok(LogicMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&b| next.map[b]).collect(),
        })
    }
}

/// A point function `f: source → target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMap {
    pub source: FiniteSpace,
    pub target: FiniteSpace,
    pub map: Vec<usize>,
}

impl SpaceMap {
    pub fn new(source: FiniteSpace, target: FiniteSpace, map: Vec<usize>) -> Result<Self, DualityError> {
        check_shape(&map, source.point_count(), target.point_count())?;
        Ok(SpaceMap { source, target, map })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        SpaceMap { source: space.clone(), target: space.clone(), map: (0..space.point_count()).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn preimage(&self, u: &PointSet) -> PointSet {
        let hits = (0..self.map.len()).filter(|&x| u.contains(self.map[x]));
        Subset::from_indices(self.source.point_count(), hits).expect("source points in range")
    }

    pub fn image(&self, u: &PointSet) -> PointSet {
        let hits = u.iter().map(|x| self.map[x]);
        Subset::from_indices(self.target.point_count(), hits).expect("target points in range")
    }
}

fn check_shape(map: &[usize], expected: usize, bound: usize) -> Result<(), DualityError> {
    if map.len() != expected {
        return Err(DualityError::MapShape { expected, got: map.len() });
    }
    match map.iter().find(|&&v| v >= bound) {
        Some(&value) => Err(DualityError::MapOutOfRange { value, bound }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapAnalysis {
    pub is_logic_map: bool,
    /// Target theory whose preimage is not a theory.
    pub logic_map_witness: Option<ExprSet>,
    pub is_stable: bool,
    /// Target prime whose preimage is not prime.
    pub stable_witness: Option<ExprSet>,
    pub is_normal: bool,
    /// Source theory that is no preimage.
    pub normal_witness: Option<ExprSet>,
    pub is_l_surjective: bool,
    /// Target expression equivalent to no image.
    pub surjective_witness: Option<usize>,
    pub is_isomorphism: bool,
}

/// Every logic map `source → target`, as expression maps in lexicographic
/// order. Preimages are tracked incrementally, one source expression at a
/// time.
pub fn enumerate_logic_maps(source: &AbstractLogic, target: &AbstractLogic) -> Vec<Vec<usize>> {
    let n = source.universe();
    let m = target.universe();
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let theories: Vec<ExprSet> = target.theories().iter().copied().collect();
    let mut map = vec![0usize; n];
    let mut pre = vec![Subset::empty(n); theories.len()];
    fn go(
        a: usize,
        source: &AbstractLogic,
        theories: &[ExprSet],
        m: usize,
        map: &mut Vec<usize>,
        pre: &mut Vec<ExprSet>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if a == map.len() {
            if pre.iter().all(|p| source.theories().contains(p)) {
                out.push(map.clone());
            }
            return;
        }
        for b in 0..m {
            map[a] = b;
            let saved = pre.clone();
            for (p, t) in pre.iter_mut().zip(theories) {
                if t.contains(b) {
                    p.insert(a);
                }
            }
            go(a + 1, source, theories, m, map, pre, out);
            *pre = saved;
        }
    }
    go(0, source, &theories, m, &mut map, &mut pre, &mut out);
    out
}

/// Checks a map against the four conditions on theory preimages and images.
pub fn analyze_logic_map(h: &LogicMap) -> MapAnalysis {
    let source = &h.source;
    let target = &h.target;
    let logic_map_witness = target.theories().iter().find(|t| !source.theories().contains(&h.preimage(t))).copied();
    let is_logic_map = logic_map_witness.is_none();
    let stable_witness = target.primes().iter().find(|p| !source.spectrum().is_prime(&h.preimage(p))).copied();
    let normal_witness = if is_logic_map {
        let preimages: Vec<ExprSet> = target.theories().iter().map(|t| h.preimage(t)).collect();
        source.theories().iter().find(|t| !preimages.contains(t)).copied()
    } else {
        None
    };
    let is_normal = is_logic_map && normal_witness.is_none();
    let reps = target.representatives();
    let reached: Vec<usize> = h.map.iter().map(|&b| reps[b]).collect();
    let surjective_witness = (0..target.universe()).find(|&b| !reached.contains(&reps[b]));
    let is_l_surjective = surjective_witness.is_none();
    MapAnalysis {
        is_logic_map,
        logic_map_witness,
        is_stable: stable_witness.is_none(),
        stable_witness,
        is_normal,
        normal_witness,
        is_l_surjective,
        surjective_witness,
        is_isomorphism: is_normal && is_l_surjective,
    }
}

/// `T' ↦ h⁻¹(T')`, indexed by target theory and valued in source theory
/// indices.
pub fn inverse_complement(h: &LogicMap) -> Result<Vec<usize>, DualityError> {
    h.target
        .theories()
        .iter()
        .map(|t| {
            let pre = h.preimage(t);
            h.source.theories().index_of(&pre).ok_or(DualityError::NotLogicMap(*t))
        })
        .collect()
}

/// Both sides of "stable iff joins are preserved up to `=_L'`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityCheck {
    pub stable: bool,
    pub preserves_join: bool,
    pub agree: bool,
    /// First `(a, b)` with `h(a ∨ b) ≠_L' h(a) ∨' h(b)`.
    pub join_witness: Option<(usize, usize)>,
    /// First target prime whose preimage is not prime.
    pub prime_witness: Option<ExprSet>,
}

pub fn stable_iff_disjunction(h: &LogicMap) -> Result<StabilityCheck, DualityError> {
    let (Some(join), Some(join_t)) = (&h.source.connectives().join, &h.target.connectives().join) else {
        return Err(DualityError::MissingJoin);
    };
    if !verify_connectives(&h.source).distributive || !verify_connectives(&h.target).distributive {
        return Err(DualityError::NotDistributive);
    }
    let reps = h.target.representatives();
    let n = h.source.universe();
    let join_witness = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| reps[h.map[join.get(a, b)]] != reps[join_t.get(h.map[a], h.map[b])]);
    let analysis = analyze_logic_map(h);
    let preserves_join = join_witness.is_none();
    Ok(StabilityCheck {
        stable: analysis.is_stable,
        preserves_join,
        agree: analysis.is_stable == preserves_join,
        join_witness,
        prime_witness: analysis.stable_witness,
    })
}

/// Which connectives a map preserves up to `=_L'`; `None` when either side
/// lacks the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreservationReport {
    pub join: Option<bool>,
    pub meet: Option<bool>,
    pub implication: Option<bool>,
    pub negation: Option<bool>,
}

pub fn connective_preservation(h: &LogicMap) -> PreservationReport {
    let reps = h.target.representatives();
    let n = h.source.universe();
    let (s, t) = (h.source.connectives(), h.target.connectives());
    let binary = |x: &Option<BinaryTable>, y: &Option<BinaryTable>| match (x, y) {
        (Some(x), Some(y)) => {
            Some((0..n).all(|a| (0..n).all(|b| reps[h.map[x.get(a, b)]] == reps[y.get(h.map[a], h.map[b])])))
        }
        _ => None,
    };
    let negation = match (&s.negation, &t.negation) {
        (Some(x), Some(y)) => Some((0..n).all(|a| reps[h.map[x[a]]] == reps[y[h.map[a]]])),
        _ => None,
    };
    PreservationReport {
        join: binary(&s.join, &t.join),
        meet: binary(&s.meet, &t.meet),
        implication: binary(&s.implication, &t.implication),
        negation,
    }
}

/// `F` on objects: prime theories in canonical order, basis `{a^X}`.
pub fn logic_space(logic: &AbstractLogic) -> Result<FiniteSpace, DualityError> {
    if !verify_connectives(logic).distributive {
        return Err(DualityError::NotDistributive);
    }
    Ok(space_of_primes(logic))
}

fn space_of_primes(logic: &AbstractLogic) -> FiniteSpace {
    let primes = logic.primes();
    let points = primes.iter().map(|p| p.display_with(logic.expr_names())).collect();
    let basis = (0..logic.universe()).map(|a| (logic.name(a).to_string(), expr_extension(logic, a)));
    FiniteSpace::new(points, basis).expect("prime and expression counts fit the universe bound")
}

/// `a^X`: the primes containing `a`, as point indices of `F(L)`.
pub fn expr_extension(logic: &AbstractLogic, a: usize) -> PointSet {
    let primes = logic.primes();
    let hits = (0..primes.len()).filter(|&i| primes[i].contains(a));
    Subset::from_indices(primes.len(), hits).expect("prime count fits the universe bound")
}

/// `F` on morphisms: `P' ↦ h⁻¹(P')`, from `F(target)` to `F(source)`.
pub fn functor_f_mor(h: &LogicMap) -> Result<SpaceMap, DualityError> {
    let source_space = logic_space(&h.target)?;
    let target_space = logic_space(&h.source)?;
    let source_primes = h.source.primes();
    let map = h
        .target
        .primes()
        .iter()
        .map(|p| {
            let pre = h.preimage(p);
            source_primes.binary_search(&pre).map_err(|_| DualityError::NotStable(*p))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f = SpaceMap { source: source_space, target: target_space, map };
    debug_assert!(
        (0..h.source.universe())
            .all(|a| f.preimage(&expr_extension(&h.source, a)) == expr_extension(&h.target, h.map[a])),
        "preimage of a^X differs from h(a)^X'"
    );
    Ok(f)
}

/// `F(h)⁻¹(a^X) = h(a)^X'` for every source expression.
pub fn preimage_identity_holds(h: &LogicMap) -> Result<bool, DualityError> {
    let f = functor_f_mor(h)?;
    Ok((0..h.source.universe())
        .all(|a| f.preimage(&expr_extension(&h.source, a)) == expr_extension(&h.target, h.map[a])))
}

/// `G` on objects: the filter logic of the basis lattice.
///
/// Expressions are basis elements in basis order; theories are the
/// non-empty intersections of point filters. Implication and negation are
/// present only when every implication open is basic; `⊤` and `⊥` only
/// when the carrier and `∅` are basic.
pub fn functor_g_obj(space: &FiniteSpace) -> Result<AbstractLogic, DualityError> {
    let verdict = space.distributive_verdict();
    if !verdict.distributive || space.point_count() == 0 {
        return Err(DualityError::NotDistributiveSpace(verdict.witness));
    }
    let k = space.basis().len();
    let sets: Vec<PointSet> = space.basis_sets().collect();
    let idx = |s: PointSet| space.basis_index(&s).expect("basis is a lattice");
    let filters = (0..space.point_count()).map(|x| space.point_filter(x));
    let theories = TheoryFamily::close_under_intersection(k, filters)?;
    let has_implication = space.has_implication().is_ok();
    let implication = has_implication.then(|| {
        let order = space.specialization_order();
        BinaryTable::from_fn(k, |u, v| {
            let imp = (0..space.point_count()).filter(|&x| order.up(x).intersection(&sets[u]).is_subset(&sets[v]));
            idx(Subset::from_indices(space.point_count(), imp).expect("points in range"))
        })
    });
    let bottom = space.basis_index(&space.empty());
    let negation = match (&implication, bottom) {
        (Some(imp), Some(b)) => Some((0..k).map(|u| imp.get(u, b)).collect()),
        _ => None,
    };
    let tables = ConnectiveTables {
        join: Some(BinaryTable::from_fn(k, |u, v| idx(sets[u].union(&sets[v])))),
        meet: Some(BinaryTable::from_fn(k, |u, v| idx(sets[u].intersection(&sets[v])))),
        implication,
        negation,
        top: space.basis_index(&space.carrier()),
        bottom,
    };
    let names = space.basis().iter().map(|b| b.label()).collect();
    Ok(AbstractLogic::new(names, theories, tables)?)
}

/// First basic open of the target whose preimage is not basic in the source.
pub fn spectral_map_failure(f: &SpaceMap) -> Option<PointSet> {
    f.target.basis_sets().find(|u| f.source.basis_index(&f.preimage(u)).is_none())
}

/// Preimages of basic opens are basic, so `G(f)` is total.
pub fn is_spectral_map(f: &SpaceMap) -> bool {
    spectral_map_failure(f).is_none()
}

/// `G` on morphisms: `U' ↦ f⁻¹(U')`, from `G(target)` to `G(source)`.
pub fn functor_g_mor(f: &SpaceMap) -> Result<LogicMap, DualityError> {
    if let Some(u) = spectral_map_failure(f) {
        return Err(DualityError::NotSpectralMap(u));
    }
    let source = functor_g_obj(&f.target)?;
    let target = functor_g_obj(&f.source)?;
    let map = f.target.basis_sets().map(|u| f.source.basis_index(&f.preimage(&u)).expect("checked spectral")).collect();
    Ok(LogicMap { source, target, map })
}

/// `τ_L: a ↦ a^X`, from `L` into `G(F(L))`.
pub fn tau(logic: &AbstractLogic) -> Result<LogicMap, DualityError> {
    let space = logic_space(logic)?;
    let target = functor_g_obj(&space)?;
    let map = (0..logic.universe())
        .map(|a| space.basis_index(&expr_extension(logic, a)).expect("a^X is basic by construction"))
        .collect();
    Ok(LogicMap { source: logic.clone(), target, map })
}

/// `σ_X: x ↦ x^Λ`, from `X` into `F(G(X))`.
///
/// Fails with [`DualityError::NotStable`] naming the filter when some
/// point filter is not a prime theory of `G(X)`.
pub fn sigma(space: &FiniteSpace) -> Result<SpaceMap, DualityError> {
    let logic = functor_g_obj(space)?;
    let target = logic_space(&logic)?;
    let primes = logic.primes();
    let map = (0..space.point_count())
        .map(|x| {
            let filter = space.point_filter(x);
            primes.binary_search(&filter).map_err(|_| DualityError::NotStable(filter))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpaceMap { source: space.clone(), target, map })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LogicRoundtrip,
    SpaceRoundtrip,
}

/// `Intuitionistic` runs with all connectives; `Distributive` with join and
/// meet only, for unbounded or implication-free inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Intuitionistic,
    Distributive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub direction: Direction,
    pub mode: Mode,
    pub iso_ok: bool,
    /// `None` when no morphism was supplied.
    pub square_ok: Option<bool>,
    /// Correspondence rows, e.g. expression name against basic open label.
    pub detail: Vec<(String, String)>,
    pub failures: Vec<String>,
}

impl DualityReport {
    pub fn ok(&self) -> bool {
        self.iso_ok && self.square_ok != Some(false)
    }
}

/// Checks that `τ_L` is a stable logic isomorphism and, given `h: L → L'`,
/// that `τ_L' ∘ h = G(F(h)) ∘ τ_L` exactly.
pub fn roundtrip_logic(logic: &AbstractLogic, h: Option<&LogicMap>) -> Result<DualityReport, DualityError> {
    let class = verify_connectives(logic);
    if !class.distributive {
        return Err(DualityError::NotDistributive);
    }
    let mode = if class.intuitionistic { Mode::Intuitionistic } else { Mode::Distributive };
    let t = tau(logic)?;
    let analysis = analyze_logic_map(&t);
    let mut failures = Vec::new();
    if !analysis.is_isomorphism {
        failures.push(format!("tau is not a logic isomorphism: {analysis:?}"));
    }
    if !analysis.is_stable {
        failures.push(format!("tau is not stable at {:?}", analysis.stable_witness));
    }
    let detail =
        (0..logic.universe()).map(|a| (logic.name(a).to_string(), t.target.name(t.map[a]).to_string())).collect();
    let square_ok = match h {
        None => None,
        Some(h) => {
            if h.source != *logic {
                return Err(DualityError::DirectionMismatch("map does not start at the given logic"));
            }
            Some(logic_square(&t, h, &mut failures)?)
        }
    };
    Ok(DualityReport {
        direction: Direction::LogicRoundtrip,
        mode,
        iso_ok: analysis.is_isomorphism && analysis.is_stable,
        square_ok,
        detail,
        failures,
    })
}

fn logic_square(tau_l: &LogicMap, h: &LogicMap, failures: &mut Vec<String>) -> Result<bool, DualityError> {
    let tau_target = tau(&h.target)?;
    let fh = match functor_f_mor(h) {
        Ok(fh) => fh,
        Err(DualityError::NotStable(p)) => {
            failures.push(format!("map is not stable: preimage of {p} is not prime"));
            return Ok(false);
        }
        Err(e) => return Err(e),
    };
    let gfh = functor_g_mor(&fh)?;
    if gfh.source != tau_l.target || gfh.target != tau_target.target {
        return Err(DualityError::DirectionMismatch("G(F(h)) does not connect the two τ codomains"));
    }
    let mut ok = true;
    for a in 0..h.source.universe() {
        let left = tau_target.map[h.map[a]];
        let right = gfh.map[tau_l.map[a]];
        if left != right {
            ok = false;
            failures.push(format!(
                "square fails at {}: {} vs {}",
                h.source.name(a),
                gfh.target.name(left),
                gfh.target.name(right)
            ));
        }
    }
    Ok(ok)
}

/// Checks that `σ_X` is a homeomorphism and, given `f: X → X'`, that
/// `σ_X' ∘ f = F(G(f)) ∘ σ_X` exactly.
pub fn roundtrip_space(space: &FiniteSpace, f: Option<&SpaceMap>) -> Result<DualityReport, DualityError> {
    let verdict = space.distributive_verdict();
    if !verdict.distributive {
        return Err(DualityError::NotDistributiveSpace(verdict.witness));
    }
    let report = space.analyze();
    let mode = if report.is_spectral && report.has_implication { Mode::Intuitionistic } else { Mode::Distributive };
    let mut failures = Vec::new();
    let s = match sigma(space) {
        Ok(s) => s,
        Err(DualityError::NotStable(filter)) => {
            failures.push(format!("point filter {filter} is not a prime theory"));
            return Ok(DualityReport {
                direction: Direction::SpaceRoundtrip,
                mode,
                iso_ok: false,
                square_ok: f.map(|_| false),
                detail: Vec::new(),
                failures,
            });
        }
        Err(e) => return Err(e),
    };
    let iso_ok = homeomorphism_failures(&s, &mut failures);
    let detail = (0..space.point_count())
        .map(|x| (space.point_names()[x].clone(), s.target.point_names()[s.map[x]].clone()))
        .collect();
    let square_ok = match f {
        None => None,
        Some(f) => {
            if f.source != *space {
                return Err(DualityError::DirectionMismatch("map does not start at the given space"));
            }
            Some(space_square(&s, f, &mut failures)?)
        }
    };
    Ok(DualityReport { direction: Direction::SpaceRoundtrip, mode, iso_ok, square_ok, detail, failures })
}

/// Bijective, continuous and open; failures are appended.
pub fn homeomorphism_failures(s: &SpaceMap, failures: &mut Vec<String>) -> bool {
    let start = failures.len();
    let n = s.source.point_count();
    let image = s.image(&s.source.carrier());
    if n != s.target.point_count() || image.len() != n {
        failures.push(format!("map is not bijective: image {image}"));
    }
    if let Some(u) = s.target.basis_sets().find(|u| !s.source.is_open(&s.preimage(u))) {
        failures.push(format!("map is not continuous at {u}"));
    }
    if let Some(u) = s.source.basis_sets().find(|u| !s.target.is_open(&s.image(u))) {
        failures.push(format!("map is not open at {u}"));
    }
    failures.len() == start
}

fn space_square(sigma_x: &SpaceMap, f: &SpaceMap, failures: &mut Vec<String>) -> Result<bool, DualityError> {
    let sigma_target = sigma(&f.target)?;
    let gf = match functor_g_mor(f) {
        Ok(gf) => gf,
        Err(DualityError::NotSpectralMap(u)) => {
            failures.push(format!("map is not spectral at {u}"));
            return Ok(false);
        }
        Err(e) => return Err(e),
    };
    let fgf = functor_f_mor(&gf)?;
    if fgf.source != sigma_x.target || fgf.target != sigma_target.target {
        return Err(DualityError::DirectionMismatch("F(G(f)) does not connect the two σ codomains"));
    }
    let mut ok = true;
    for x in 0..f.source.point_count() {
        let left = sigma_target.map[f.map[x]];
        let right = fgf.map[sigma_x.map[x]];
        if left != right {
            ok = false;
            failures.push(format!("square fails at point {}", f.source.point_names()[x]));
        }
    }
    Ok(ok)
}
