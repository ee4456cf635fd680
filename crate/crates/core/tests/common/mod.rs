//! Brute-force oracles shared by the integration targets. They work on raw
//! bitmasks and never call the library's own decision procedures.

#![allow(dead_code)]

use logicspace::{AbstractLogic, FiniteSpace, Subset};

pub fn masks<'a>(sets: impl IntoIterator<Item = &'a Subset>) -> Vec<u64> {
    sets.into_iter().map(|s| s.bits()).collect()
}

pub fn theory_masks(logic: &AbstractLogic) -> Vec<u64> {
    masks(logic.theories().theories())
}

pub fn basis_masks(space: &FiniteSpace) -> Vec<u64> {
    space.basis_sets().map(|s| s.bits()).collect()
}

fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

/// Number of unlabeled posets on `n` points, by filtering every binary
/// relation and grouping isomorphic ones.
pub fn poset_count(n: usize) -> usize {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    for code in 0u64..(1u64 << cells.len()) {
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in cells.iter().enumerate() {
            rel[i][j] = code >> k & 1 == 1;
        }
        let antisymmetric = (0..n).all(|i| (0..n).all(|j| i == j || !(rel[i][j] && rel[j][i])));
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(rel[i][j] && rel[j][k]) || rel[i][k])));
        if !(antisymmetric && transitive) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut bits = 0u64;
                for i in 0..n {
                    for j in 0..n {
                        if rel[i][j] {
                            bits |= 1 << (p[i] * n + p[j]);
                        }
                    }
                }
                bits
            })
            .min()
            .unwrap_or(0);
        seen.insert(canon);
    }
    seen.len()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Theories that are not the intersection of any non-empty family of other
/// theories, found by trying every family of strict supertheories.
pub fn primes(theories: &[u64]) -> Vec<u64> {
    theories
        .iter()
        .copied()
        .filter(|&t| {
            let above: Vec<u64> = theories.iter().copied().filter(|&s| s != t && subset(t, s)).collect();
            assert!(above.len() < 24, "family too large for the exhaustive oracle");
            (1u64..(1 << above.len())).all(|pick| {
                let meet = (0..above.len()).filter(|i| pick >> i & 1 == 1).fold(u64::MAX, |m, i| m & above[i]);
                meet != t
            })
        })
        .collect()
}

pub fn valid_formulas(theories: &[u64], n: usize) -> u64 {
    theories.iter().fold(full(n), |m, t| m & t)
}

/// Expressions lying in no theory.
pub fn inconsistent_formulas(theories: &[u64], n: usize) -> u64 {
    full(n) & !theories.iter().fold(0, |m, t| m | t)
}

/// Every union of basic opens, the empty union included.
pub fn opens(basis: &[u64]) -> Vec<u64> {
    let mut all = std::collections::BTreeSet::from([0u64]);
    for &b in basis {
        let current: Vec<u64> = all.iter().copied().collect();
        for o in current {
            all.insert(o | b);
        }
    }
    all.into_iter().collect()
}

pub fn closure(basis: &[u64], n: usize, a: u64) -> u64 {
    // complement of the largest open missing `a`
    let outside = opens(basis).into_iter().filter(|&o| o & a == 0).fold(0, |m, o| m | o);
    full(n) & !outside
}

pub fn irreducible_closed_sets(basis: &[u64], n: usize) -> Vec<u64> {
    let closed: Vec<u64> = opens(basis).into_iter().map(|o| full(n) & !o).collect();
    closed
        .iter()
        .copied()
        .filter(|&f| {
            f != 0
                && !closed
                    .iter()
                    .any(|&a| a != f && subset(a, f) && closed.iter().any(|&b| b != f && subset(b, f) && a | b == f))
        })
        .collect()
}

/// `up[x]`: points lying in every basic open that contains `x`.
pub fn specialization_up(basis: &[u64], n: usize) -> Vec<u64> {
    (0..n).map(|x| basis.iter().filter(|&&b| b >> x & 1 == 1).fold(full(n), |m, b| m & b)).collect()
}

pub fn implication(up: &[u64], u: u64, v: u64) -> u64 {
    (0..up.len()).filter(|&x| subset(up[x] & u, v)).fold(0, |m, x| m | 1 << x)
}

/// Prime filters on the basis lattice by testing every set of basic opens.
pub fn prime_filters(basis: &[u64], n: usize) -> Vec<u64> {
    let k = basis.len();
    assert!(k < 24, "basis too large for the exhaustive oracle");
    let idx = |s: u64| basis.iter().position(|&b| b == s);
    (0u64..(1 << k))
        .filter(|&f| {
            let member = |s: u64| idx(s).is_some_and(|i| f >> i & 1 == 1);
            let elems: Vec<u64> = (0..k).filter(|i| f >> i & 1 == 1).map(|i| basis[i]).collect();
            f != 0
                && !member(0)
                && (idx(full(n)).is_none() || member(full(n)))
                && elems.iter().all(|&u| basis.iter().all(|&w| !subset(u, w) || member(w)))
                && elems.iter().all(|&u| elems.iter().all(|&v| member(u & v)))
                && basis.iter().all(|&a| basis.iter().all(|&b| !member(a | b) || member(a) || member(b)))
        })
        .collect()
}

/// The basic opens containing `x`, as basis-index bits.
pub fn point_filter(basis: &[u64], x: usize) -> u64 {
    (0..basis.len()).filter(|&i| basis[i] >> x & 1 == 1).fold(0, |m, i| m | 1 << i)
}

/// Whether every basic pair has a largest basic `W` with `W ∩ U ⊆ V`, and
/// that `W` equals the implication open.
pub fn heyting_basis(basis: &[u64], n: usize) -> bool {
    let up = specialization_up(basis, n);
    basis.iter().all(|&u| {
        basis.iter().all(|&v| {
            let below: Vec<u64> = basis.iter().copied().filter(|&w| subset(w & u, v)).collect();
            let largest = below.iter().copied().find(|&w| below.iter().all(|&x| subset(x, w)));
            largest == Some(implication(&up, u, v))
        })
    })
}

pub fn has_implication(basis: &[u64], n: usize) -> bool {
    let up = specialization_up(basis, n);
    basis.iter().all(|&u| basis.iter().all(|&v| basis.contains(&implication(&up, u, v))))
}

/// Every basic open has a basic complement within the union of the basis.
pub fn complemented_basis(basis: &[u64]) -> bool {
    let top = basis.iter().fold(0, |m, b| m | b);
    let bottom = basis.iter().fold(top, |m, b| m & b);
    basis.iter().all(|&u| basis.iter().any(|&c| u & c == bottom && u | c == top))
}

/// Whether `h(a ∨ b)` and `h(a) ∨' h(b)` lie in exactly the same target
/// theories for every pair.
pub fn preserves_join_up_to_equivalence(
    join: &dyn Fn(usize, usize) -> usize,
    join_target: &dyn Fn(usize, usize) -> usize,
    map: &[usize],
    target_theories: &[u64],
) -> bool {
    let equiv = |x: usize, y: usize| target_theories.iter().all(|t| (t >> x & 1) == (t >> y & 1));
    let n = map.len();
    (0..n).all(|a| (0..n).all(|b| equiv(map[join(a, b)], join_target(map[a], map[b]))))
}

pub fn preimage(map: &[usize], t: u64) -> u64 {
    (0..map.len()).filter(|&a| t >> map[a] & 1 == 1).fold(0, |m, a| m | 1 << a)
}
