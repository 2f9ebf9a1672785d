//! Exact approximability by endomorphisms and affine maps.
//!
//! The worst-case value `min_f max_A |{x : f(x) = A(x)}|` is found by
//! iterative deepening on a threshold `k`: a depth-first search assigns
//! `f(x)` one argument at a time while keeping one agreement counter per
//! family member, and abandons a branch as soon as some counter exceeds `k`.
//! The first `k` for which a complete assignment survives is the value, and
//! that assignment is the witness.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Group, GroupFunction};
use crate::morphism::{self, AffineMap, Morphism};

/// Default search budget in nodes.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Endo,
    Affine,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Endo => "endo",
            FamilyKind::Affine => "affine",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "endo" | "enapp" => Ok(FamilyKind::Endo),
            "affine" | "affapp" => Ok(FamilyKind::Affine),
            other => Err(Error::Argument(format!("unknown family {other:?}"))),
        }
    }
}

/// A family of maps on a group, materialized as evaluation tables.
///
/// Affine members are ordered endomorphism-major: member `i` is
/// `x -> c * endos[i / n](x)` with `c = i % n`.
#[derive(Debug, Clone)]
pub struct Family {
    kind: FamilyKind,
    group: Group,
    endos: Vec<Morphism>,
    tables: Vec<u32>,
}

impl Family {
    pub fn new(group: &Group, kind: FamilyKind) -> Result<Self> {
        let endos = morphism::enumerate_endomorphisms(group)?;
        Ok(Self::from_endos(group, kind, endos))
    }

    pub fn from_endos(group: &Group, kind: FamilyKind, endos: Vec<Morphism>) -> Self {
        let n = group.order();
        let mut tables = Vec::new();
        match kind {
            FamilyKind::Endo => {
                for e in &endos {
                    tables.extend(e.images().iter().map(|&y| y as u32));
                }
            }
            FamilyKind::Affine => {
                for e in &endos {
                    for c in 0..n {
                        tables.extend(e.images().iter().map(|&y| group.mul(c, y) as u32));
                    }
                }
            }
        }
        Family {
            kind,
            group: group.clone(),
            endos,
            tables,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn endomorphisms(&self) -> &[Morphism] {
        &self.endos
    }

    pub fn len(&self) -> usize {
        self.tables.len() / self.group.order()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn table(&self, i: usize) -> &[u32] {
        let n = self.group.order();
        &self.tables[i * n..(i + 1) * n]
    }

    /// Member `i` as an affine map (endomorphisms have constant 1).
    pub fn member(&self, i: usize) -> AffineMap {
        match self.kind {
            FamilyKind::Endo => AffineMap {
                constant: 0,
                endo: self.endos[i].clone(),
            },
            FamilyKind::Affine => {
                let n = self.group.order();
                AffineMap {
                    constant: i % n,
                    endo: self.endos[i / n].clone(),
                }
            }
        }
    }

    pub fn agreement(&self, i: usize, images: &[usize]) -> usize {
        self.table(i)
            .iter()
            .zip(images)
            .filter(|(&a, &b)| a as usize == b)
            .count()
    }

    /// Maximum agreement with `images` over the family and the first member
    /// attaining it.
    pub fn approximability(&self, images: &[usize]) -> (usize, usize) {
        let mut best = (0, 0);
        for i in 0..self.len() {
            let a = self.agreement(i, images);
            if a > best.0 {
                best = (a, i);
            }
        }
        best
    }
}

/// `app_F(f)` for the endomorphism or affine family of `f`'s group, with one
/// maximizing map.
pub fn approximability(f: &GroupFunction, kind: FamilyKind) -> Result<(usize, AffineMap)> {
    let family = Family::new(f.group(), kind)?;
    let (value, i) = family.approximability(f.images());
    Ok((value, family.member(i)))
}

/// Kind of argument behind a lower bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// Every function agrees with a constant map somewhere (affine >= 1).
    Constants,
    /// Abelian groups have a universal element (endo >= 1, affine >= 2).
    Abelian,
    /// A universal l-tuple (endo >= l, affine >= l + 1).
    UniversalTuple { tuple: Vec<usize> },
    /// A nontrivial automorphism orbit with more than (|G| - 1) / 2 elements
    /// (affine >= 2).
    DominatingOrbit { size: usize, representative: usize },
    /// Nothing better than the trivial bound.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub value: usize,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBounds {
    pub endo: LowerBound,
    pub affine: LowerBound,
    /// Every certificate that was found, not just the best ones.
    pub evidence: Vec<Evidence>,
}

impl LowerBounds {
    pub fn for_kind(&self, kind: FamilyKind) -> &LowerBound {
        match kind {
            FamilyKind::Endo => &self.endo,
            FamilyKind::Affine => &self.affine,
        }
    }
}

/// Precomputed endomorphisms and orbits shared by the certificate searches.
struct Structure<'a> {
    group: &'a Group,
    endos: &'a [Morphism],
    orbits: Vec<Vec<usize>>,
    exponent: usize,
    orders: Vec<usize>,
}

impl<'a> Structure<'a> {
    fn new(group: &'a Group, endos: &'a [Morphism]) -> Self {
        Structure {
            group,
            endos,
            orbits: morphism::orbits_from(group, endos),
            exponent: group.exponent(),
            orders: group.element_orders(),
        }
    }

    /// Whether the evaluation map End(G) -> G^l is onto at `tuple`.
    fn is_universal(&self, tuple: &[usize]) -> bool {
        let n = self.group.order();
        let Some(total) = n.checked_pow(tuple.len() as u32) else {
            return false;
        };
        if self.endos.len() < total {
            return false;
        }
        let mut seen = vec![false; total];
        let mut hit = 0;
        for e in self.endos {
            let code = tuple.iter().fold(0, |acc, &u| acc * n + e.apply(u));
            if !std::mem::replace(&mut seen[code], true) {
                hit += 1;
                if hit == total {
                    return true;
                }
            }
        }
        false
    }

    fn universal_tuple(&self, l: usize) -> Option<Vec<usize>> {
        let n = self.group.order();
        if l == 0 {
            return Some(Vec::new());
        }
        match n.checked_pow(l as u32) {
            Some(total) if total <= self.endos.len() => {}
            _ => return None,
        }
        let candidates: Vec<usize> = (0..n).filter(|&x| self.orders[x] == self.exponent).collect();
        // Tuples in one diagonal Aut(G)-orbit are equivalent, so the first
        // entry ranges over orbit representatives only.
        let reps: Vec<usize> = self
            .orbits
            .iter()
            .map(|o| o[0])
            .filter(|&x| self.orders[x] == self.exponent)
            .collect();
        let mut tuple = Vec::with_capacity(l);
        for &u in &reps {
            tuple.push(u);
            if self.is_universal(&tuple) && self.extend_universal(&mut tuple, l, &candidates) {
                return Some(tuple);
            }
            tuple.pop();
        }
        None
    }

    fn extend_universal(&self, tuple: &mut Vec<usize>, l: usize, candidates: &[usize]) -> bool {
        if tuple.len() == l {
            return true;
        }
        for &u in candidates {
            if tuple.contains(&u) {
                continue;
            }
            tuple.push(u);
            if self.is_universal(tuple) && self.extend_universal(tuple, l, candidates) {
                return true;
            }
            tuple.pop();
        }
        false
    }

    fn dominating_orbit(&self) -> Option<&Vec<usize>> {
        let n = self.group.order();
        self.orbits
            .iter()
            .filter(|o| o[0] != 0)
            .find(|o| 2 * o.len() > n - 1)
    }

    fn lower_bounds(&self) -> LowerBounds {
        let n = self.group.order();
        if n == 1 {
            // The only function is the identity, which is itself an
            // endomorphism agreeing on the single element.
            let ev = Evidence::UniversalTuple { tuple: vec![0] };
            return LowerBounds {
                endo: LowerBound { value: 1, evidence: ev.clone() },
                affine: LowerBound { value: 1, evidence: Evidence::Constants },
                evidence: vec![Evidence::Constants, ev],
            };
        }
        let mut evidence = vec![Evidence::Constants];
        let mut endo = LowerBound { value: 0, evidence: Evidence::None };
        let mut affine = LowerBound { value: 1, evidence: Evidence::Constants };
        if self.group.is_abelian() {
            evidence.push(Evidence::Abelian);
            endo = LowerBound { value: 1, evidence: Evidence::Abelian };
            affine = LowerBound { value: 2, evidence: Evidence::Abelian };
        }
        if let Some(orbit) = self.dominating_orbit() {
            let ev = Evidence::DominatingOrbit {
                size: orbit.len(),
                representative: orbit[0],
            };
            evidence.push(ev.clone());
            if affine.value < 2 {
                affine = LowerBound { value: 2, evidence: ev };
            }
        }
        let mut best_tuple = None;
        let mut l = 1;
        while let Some(t) = self.universal_tuple(l) {
            best_tuple = Some(t);
            l += 1;
        }
        if let Some(tuple) = best_tuple {
            let l = tuple.len();
            let ev = Evidence::UniversalTuple { tuple };
            evidence.push(ev.clone());
            if l > endo.value || matches!(endo.evidence, Evidence::Abelian) {
                endo = LowerBound { value: l, evidence: ev.clone() };
            }
            if l + 1 > affine.value || matches!(affine.evidence, Evidence::Abelian) {
                affine = LowerBound { value: l + 1, evidence: ev };
            }
        }
        LowerBounds { endo, affine, evidence }
    }
}

/// A universal `l`-tuple of pairwise distinct elements, if one exists.
/// The first entry is the smallest element of its automorphism orbit.
pub fn find_universal_tuple(group: &Group, l: usize) -> Result<Option<Vec<usize>>> {
    let endos = morphism::enumerate_endomorphisms(group)?;
    Ok(Structure::new(group, &endos).universal_tuple(l))
}

pub fn lower_bound_certificates(group: &Group) -> Result<LowerBounds> {
    let endos = morphism::enumerate_endomorphisms(group)?;
    Ok(Structure::new(group, &endos).lower_bounds())
}

pub fn lower_bounds_from(group: &Group, endos: &[Morphism]) -> LowerBounds {
    Structure::new(group, endos).lower_bounds()
}

/// An affine map agreeing with `f` on all of `x_set`, if one exists.
///
/// Fixes the smallest `x` in the set and looks for an endomorphism with
/// `phi(y^-1 x) = f(y)^-1 f(x)` for every `y` in the set; the constant is
/// then `f(x) phi(x)^-1`.
pub fn difference_criterion(
    group: &Group,
    f: &GroupFunction,
    x_set: &[usize],
) -> Result<Option<AffineMap>> {
    let endos = morphism::enumerate_endomorphisms(group)?;
    difference_criterion_with(group, &endos, f, x_set)
}

pub fn difference_criterion_with(
    group: &Group,
    endos: &[Morphism],
    f: &GroupFunction,
    x_set: &[usize],
) -> Result<Option<AffineMap>> {
    let &x = x_set
        .iter()
        .min()
        .ok_or_else(|| Error::Argument("the argument set is empty".into()))?;
    if let Some(&bad) = x_set.iter().find(|&&y| y >= group.order()) {
        return Err(Error::Argument(format!("element {bad} out of range")));
    }
    let fx = f.apply(x);
    let targets: Vec<(usize, usize)> = x_set
        .iter()
        .map(|&y| {
            let d = group.mul(group.inv(y), x);
            let e = group.mul(group.inv(f.apply(y)), fx);
            (d, e)
        })
        .collect();
    Ok(endos
        .iter()
        .find(|phi| targets.iter().all(|&(d, e)| phi.apply(d) == e))
        .map(|phi| AffineMap {
            constant: group.mul(fx, group.inv(phi.apply(x))),
            endo: phi.clone(),
        }))
}

/// A function with endomorphic approximability 0, when the group has no
/// universal element. Each `f(x)` is the smallest element that no
/// endomorphism sends `x` to.
pub fn enapp_zero_witness(group: &Group) -> Result<Option<GroupFunction>> {
    let endos = morphism::enumerate_endomorphisms(group)?;
    let n = group.order();
    let mut images = Vec::with_capacity(n);
    for x in 0..n {
        let mut reach = vec![false; n];
        for e in &endos {
            reach[e.apply(x)] = true;
        }
        match reach.iter().position(|&r| !r) {
            Some(y) => images.push(y),
            None => return Ok(None),
        }
    }
    GroupFunction::new(group, images).map(Some)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub duration_ms: f64,
    /// Thresholds proven infeasible before the value was reached.
    pub refuted_thresholds: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxCertificate {
    pub metric: FamilyKind,
    pub exact: bool,
    /// The exact value, when the search finished.
    pub value: Option<usize>,
    pub lower: usize,
    pub upper: usize,
    /// A function attaining the value.
    pub witness: Option<GroupFunction>,
    /// One family member attaining the witness's approximability.
    pub best_map: Option<AffineMap>,
    pub lower_bound: LowerBound,
    pub stats: SearchStats,
}

/// Exact worst-case approximability over all functions on `group`.
///
/// `budget` caps the number of search nodes; when it runs out the
/// certificate is returned with `exact = false` and only bounds.
pub fn worst_case_value(group: &Group, kind: FamilyKind, budget: u64) -> Result<ApproxCertificate> {
    let endos = morphism::enumerate_endomorphisms(group)?;
    let bounds = lower_bounds_from(group, &endos);
    let family = Family::from_endos(group, kind, endos);
    Ok(worst_case_with(&family, bounds.for_kind(kind).clone(), budget))
}

pub fn worst_case_with(family: &Family, lower_bound: LowerBound, budget: u64) -> ApproxCertificate {
    let start = Instant::now();
    let n = family.group().order();
    let problem = Problem::new(family);
    let nodes = AtomicU64::new(0);
    let mut refuted = Vec::new();
    let mut k = lower_bound.value;
    let mut outcome = None;
    while k <= n {
        match problem.feasible(k, budget, &nodes) {
            Outcome::Found(f) => {
                outcome = Some(Ok((k, f)));
                break;
            }
            Outcome::Infeasible => {
                refuted.push(k);
                k += 1;
            }
            Outcome::Budget => {
                outcome = Some(Err(k));
                break;
            }
        }
    }
    let stats = SearchStats {
        nodes: nodes.load(Ordering::Relaxed),
        duration_ms: start.elapsed().as_secs_f64() * 1e3,
        refuted_thresholds: refuted,
    };
    match outcome.expect("threshold n is always feasible") {
        Ok((value, images)) => {
            let (measured, best) = family.approximability(&images);
            debug_assert_eq!(measured, value);
            let witness = GroupFunction::new(family.group(), images).expect("valid images");
            ApproxCertificate {
                metric: family.kind(),
                exact: true,
                value: Some(value),
                lower: value,
                upper: value,
                witness: Some(witness),
                best_map: Some(family.member(best)),
                lower_bound,
                stats,
            }
        }
        Err(k) => ApproxCertificate {
            metric: family.kind(),
            exact: false,
            value: None,
            lower: k,
            upper: n,
            witness: None,
            best_map: None,
            lower_bound,
            stats,
        },
    }
}

enum Outcome {
    Found(Vec<usize>),
    Infeasible,
    Budget,
}

/// Branching data for one argument of the search.
struct Slot {
    element: usize,
    /// `(value, members agreeing with f(element) = value)`.
    choices: Vec<(usize, Vec<u32>)>,
}

struct Problem {
    n: usize,
    members: usize,
    slots: Vec<Slot>,
}

const PREFIX_TARGET: usize = 256;
const FLUSH_EVERY: u64 = 4096;

impl Problem {
    fn new(family: &Family) -> Self {
        let n = family.group().order();
        let members = family.len();
        let mut buckets: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); n]; n];
        for m in 0..members {
            for (x, &v) in family.table(m).iter().enumerate() {
                buckets[x][v as usize].push(m as u32);
            }
        }
        let discrimination =
            |x: usize| buckets[x].iter().filter(|b| !b.is_empty()).count();
        let mut order: Vec<usize> = (0..n).collect();
        let fix_identity = family.kind() == FamilyKind::Affine;
        order.sort_by_key(|&x| {
            let pinned = fix_identity && x == 0;
            (!pinned, std::cmp::Reverse(discrimination(x)), x)
        });
        let slots = order
            .into_iter()
            .map(|x| {
                let mut b = std::mem::take(&mut buckets[x]);
                let choices = if fix_identity && x == 0 {
                    // Left translations are bijective affine maps and do not
                    // change affine approximability, so f(1) = 1 loses nothing.
                    vec![(0, std::mem::take(&mut b[0]))]
                } else if let Some(free) = b.iter().position(Vec::is_empty) {
                    // A value no member takes here dominates every other.
                    vec![(free, Vec::new())]
                } else {
                    b.into_iter().enumerate().collect()
                };
                Slot { element: x, choices }
            })
            .collect();
        Problem { n, members, slots }
    }

    fn feasible(&self, k: usize, budget: u64, nodes: &AtomicU64) -> Outcome {
        // Breadth-first expansion of a few levels yields independent
        // subproblems, kept in lexicographic order.
        let mut prefixes: Vec<Vec<usize>> = vec![Vec::new()];
        let mut depth = 0;
        while depth < self.n && prefixes.len() < PREFIX_TARGET {
            let mut next = Vec::new();
            for p in &prefixes {
                for c in 0..self.slots[depth].choices.len() {
                    let mut q = p.clone();
                    q.push(c);
                    if self.prefix_ok(&q, k) {
                        next.push(q);
                    }
                }
            }
            nodes.fetch_add(next.len() as u64, Ordering::Relaxed);
            prefixes = next;
            depth += 1;
            if prefixes.is_empty() {
                return Outcome::Infeasible;
            }
        }
        let winner = AtomicUsize::new(usize::MAX);
        let out_of_budget = AtomicBool::new(false);
        let results: Vec<Option<Vec<usize>>> = prefixes
            .par_iter()
            .enumerate()
            .map(|(idx, prefix)| {
                if winner.load(Ordering::Relaxed) < idx || out_of_budget.load(Ordering::Relaxed) {
                    return None;
                }
                let mut dfs = Dfs {
                    problem: self,
                    k,
                    counters: vec![0u16; self.members],
                    choice: prefix.clone(),
                    local_nodes: 0,
                    nodes,
                    budget,
                    idx,
                    winner: &winner,
                    out_of_budget: &out_of_budget,
                };
                for (d, &c) in prefix.iter().enumerate() {
                    let ok = dfs.apply(d, c);
                    debug_assert!(ok);
                }
                let found = dfs.run(prefix.len());
                dfs.flush();
                if found {
                    winner.fetch_min(idx, Ordering::Relaxed);
                    Some(dfs.choice)
                } else {
                    None
                }
            })
            .collect();
        if let Some(choice) = results.into_iter().flatten().next() {
            let mut images = vec![0; self.n];
            for (d, &c) in choice.iter().enumerate() {
                images[self.slots[d].element] = self.slots[d].choices[c].0;
            }
            return Outcome::Found(images);
        }
        if out_of_budget.load(Ordering::Relaxed) {
            Outcome::Budget
        } else {
            Outcome::Infeasible
        }
    }

    fn prefix_ok(&self, prefix: &[usize], k: usize) -> bool {
        let mut counters = vec![0u16; self.members];
        for (d, &c) in prefix.iter().enumerate() {
            for &m in &self.slots[d].choices[c].1 {
                counters[m as usize] += 1;
                if counters[m as usize] as usize > k {
                    return false;
                }
            }
        }
        true
    }
}

struct Dfs<'a> {
    problem: &'a Problem,
    k: usize,
    counters: Vec<u16>,
    choice: Vec<usize>,
    local_nodes: u64,
    nodes: &'a AtomicU64,
    budget: u64,
    idx: usize,
    winner: &'a AtomicUsize,
    out_of_budget: &'a AtomicBool,
}

impl Dfs<'_> {
    /// Adds the agreements of choice `c` at depth `d`; on overflow the
    /// counters are restored and false is returned.
    fn apply(&mut self, d: usize, c: usize) -> bool {
        let bucket = &self.problem.slots[d].choices[c].1;
        let limit = self.k as u16;
        for (i, &m) in bucket.iter().enumerate() {
            let slot = &mut self.counters[m as usize];
            *slot += 1;
            if *slot > limit {
                for &m in &bucket[..=i] {
                    self.counters[m as usize] -= 1;
                }
                return false;
            }
        }
        true
    }

    fn undo(&mut self, d: usize, c: usize) {
        for &m in &self.problem.slots[d].choices[c].1 {
            self.counters[m as usize] -= 1;
        }
    }

    fn flush(&mut self) {
        if self.local_nodes > 0 {
            let total = self.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
            self.local_nodes = 0;
            if total > self.budget {
                self.out_of_budget.store(true, Ordering::Relaxed);
            }
        }
    }

    fn cancelled(&self) -> bool {
        self.out_of_budget.load(Ordering::Relaxed) || self.winner.load(Ordering::Relaxed) < self.idx
    }

    fn run(&mut self, d: usize) -> bool {
        if d == self.problem.n {
            return true;
        }
        self.local_nodes += 1;
        if self.local_nodes >= FLUSH_EVERY {
            self.flush();
            if self.cancelled() {
                return false;
            }
        }
        for c in 0..self.problem.slots[d].choices.len() {
            if self.apply(d, c) {
                self.choice.push(c);
                if self.run(d + 1) {
                    return true;
                }
                self.choice.pop();
                self.undo(d, c);
                if self.cancelled() {
                    return false;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::construct;

    fn g(s: &str) -> Group {
        construct(&s.parse().unwrap()).unwrap()
    }

    /// Exhaustive min-max over all |G|^|G| functions.
    fn brute_force_worst_case(family: &Family) -> usize {
        let n = family.group().order();
        let mut f = vec![0usize; n];
        let mut best = usize::MAX;
        loop {
            best = best.min(family.approximability(&f).0);
            let mut i = n;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                f[i] += 1;
                if f[i] < n {
                    break;
                }
                f[i] = 0;
            }
        }
    }

    #[test]
    fn search_matches_brute_force_up_to_order_five() {
        for s in ["cyclic(1)", "cyclic(2)", "cyclic(3)", "cyclic(4)", "elemabelian(2,2)", "cyclic(5)"] {
            let group = g(s);
            for kind in [FamilyKind::Endo, FamilyKind::Affine] {
                let family = Family::new(&group, kind).unwrap();
                let cert = worst_case_with(
                    &family,
                    LowerBound { value: 0, evidence: Evidence::None },
                    DEFAULT_BUDGET,
                );
                assert_eq!(cert.value, Some(brute_force_worst_case(&family)), "{s} {kind}");
                let w = cert.witness.unwrap();
                assert_eq!(family.approximability(w.images()).0, cert.value.unwrap());
            }
        }
    }

    #[test]
    fn identity_on_cyclic_three() {
        let c3 = g("cyclic(3)");
        let (v, map) = approximability(&GroupFunction::identity(&c3), FamilyKind::Endo).unwrap();
        assert_eq!(v, 3);
        assert_eq!(map.table(&c3), vec![0, 1, 2]);
    }

    #[test]
    fn small_witnesses() {
        let klein = g("elemabelian(2,2)");
        let f = GroupFunction::new(&klein, vec![1, 1, 2, 2]).unwrap();
        assert_eq!(approximability(&f, FamilyKind::Endo).unwrap().0, 2);
        let s3 = g("dihedral(6)");
        let f = GroupFunction::new(&s3, vec![0, 1, 1, 0, 2, 2]).unwrap();
        assert_eq!(approximability(&f, FamilyKind::Affine).unwrap().0, 2);
    }

    #[test]
    fn trivial_and_cyclic_eight() {
        let t = worst_case_value(&g("cyclic(1)"), FamilyKind::Affine, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.value, Some(1));
        let c8 = worst_case_value(&g("cyclic(8)"), FamilyKind::Affine, DEFAULT_BUDGET).unwrap();
        assert_eq!(c8.value, Some(2));
        assert!(c8.exact);
    }

    #[test]
    fn budget_exhaustion_is_inexact() {
        let cert = worst_case_value(&g("cyclic(7)"), FamilyKind::Affine, 10).unwrap();
        assert!(!cert.exact);
        assert_eq!(cert.value, None);
        assert!(cert.witness.is_none());
        assert!(cert.lower <= cert.upper);
    }

    #[test]
    fn universal_tuples() {
        assert_eq!(find_universal_tuple(&g("elemabelian(2,2)"), 2).unwrap(), Some(vec![1, 2]));
        assert_eq!(find_universal_tuple(&g("elemabelian(2,3)"), 3).unwrap(), Some(vec![1, 2, 4]));
        assert_eq!(find_universal_tuple(&g("sym(3)"), 1).unwrap(), None);
        let c6 = g("cyclic(6)");
        let u = find_universal_tuple(&c6, 1).unwrap().unwrap();
        assert_eq!(c6.element_order(u[0]), 6);
        assert_eq!(find_universal_tuple(&g("elemabelian(2,2)"), 3).unwrap(), None);
    }

    #[test]
    fn certificates() {
        let alt4 = lower_bound_certificates(&g("alt(4)")).unwrap();
        assert_eq!(alt4.endo.value, 0);
        assert_eq!(alt4.affine.value, 2);
        assert_eq!(
            alt4.affine.evidence,
            Evidence::DominatingOrbit { size: 8, representative: alt4_first_order_three() }
        );
        let e8 = lower_bound_certificates(&g("elemabelian(2,3)")).unwrap();
        assert_eq!((e8.endo.value, e8.affine.value), (3, 4));
        assert!(matches!(e8.affine.evidence, Evidence::UniversalTuple { .. }));
        let heis = lower_bound_certificates(&g("heis(3)")).unwrap();
        assert!(heis.affine.value >= 2);
        assert!(heis
            .evidence
            .iter()
            .any(|e| matches!(e, Evidence::DominatingOrbit { size: 24, .. })));
    }

    fn alt4_first_order_three() -> usize {
        let a = g("alt(4)");
        (0..12).find(|&x| a.element_order(x) == 3).unwrap()
    }

    #[test]
    fn difference_criterion_cases() {
        let c5 = g("cyclic(5)");
        let f = GroupFunction::new(&c5, vec![3, 1, 4, 1, 0]).unwrap();
        let a = difference_criterion(&c5, &f, &[2]).unwrap().unwrap();
        assert_eq!(a.table(&c5), vec![4; 5]);
        assert!(difference_criterion(&c5, &f, &[]).is_err());

        let s3 = g("dihedral(6)");
        let f = GroupFunction::new(&s3, vec![0, 1, 1, 0, 2, 2]).unwrap();
        assert!(difference_criterion(&s3, &f, &[0, 1, 2]).unwrap().is_none());
    }

    #[test]
    fn zero_witnesses() {
        for s in ["sym(3)", "alt(4)"] {
            let group = g(s);
            let f = enapp_zero_witness(&group).unwrap().unwrap();
            assert_eq!(approximability(&f, FamilyKind::Endo).unwrap().0, 0, "{s}");
        }
        assert!(enapp_zero_witness(&g("cyclic(4)")).unwrap().is_none());
    }
}
