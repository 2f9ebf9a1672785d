//! Endomorphisms, automorphisms and affine maps of dense carriers.
//!
//! Endomorphisms are enumerated by backtracking over the images of a
//! minimal generating sequence. After each generator image is chosen the
//! partial map is closed under products with the generators fixed so far;
//! any product whose image is already fixed to a different value prunes the
//! branch.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;

/// Default largest order accepted by [`enumerate_endomorphisms`].
pub const DEFAULT_MAX_ORDER: usize = 64;
/// Default cap on the number of endomorphisms materialized.
pub const DEFAULT_MAX_COUNT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_order: usize,
    pub max_count: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_order: DEFAULT_MAX_ORDER,
            max_count: DEFAULT_MAX_COUNT,
        }
    }
}

/// An endomorphism given by its image table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Morphism {
    images: Vec<usize>,
    is_automorphism: bool,
}

impl Morphism {
    /// Wraps an image table after checking the homomorphism identity on all
    /// pairs.
    pub fn new(group: &Group, images: Vec<usize>) -> Result<Self> {
        if images.len() != group.order() || images.iter().any(|&y| y >= group.order()) {
            return Err(Error::Argument("image table does not fit the group".into()));
        }
        if !is_homomorphism(group, &images) {
            return Err(Error::Argument("image table is not a homomorphism".into()));
        }
        Ok(Self::from_images_unchecked(images))
    }

    fn from_images_unchecked(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        let is_automorphism = images.iter().all(|&y| !std::mem::replace(&mut seen[y], true));
        Morphism {
            images,
            is_automorphism,
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_automorphism(&self) -> bool {
        self.is_automorphism
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Self::from_images_unchecked(other.images.iter().map(|&y| self.images[y]).collect())
    }
}

/// The map `x -> constant * endo(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineMap {
    pub constant: usize,
    pub endo: Morphism,
}

impl AffineMap {
    pub fn apply(&self, group: &Group, x: usize) -> usize {
        group.mul(self.constant, self.endo.apply(x))
    }

    pub fn table(&self, group: &Group) -> Vec<usize> {
        (0..group.order()).map(|x| self.apply(group, x)).collect()
    }

    pub fn is_bijective(&self) -> bool {
        self.endo.is_automorphism()
    }
}

pub fn is_homomorphism(group: &Group, images: &[usize]) -> bool {
    let n = group.order();
    (0..n).all(|a| (0..n).all(|b| images[group.mul(a, b)] == group.mul(images[a], images[b])))
}

/// Greedy generating sequence: repeatedly adjoin the element whose addition
/// gives the largest generated subgroup (smallest index on ties). Each step
/// at least doubles the subgroup, so the length is at most log2 |G|.
pub fn minimal_generating_sequence(group: &Group) -> Vec<usize> {
    let n = group.order();
    let mut gens: Vec<usize> = Vec::new();
    let mut current = vec![false; n];
    current[0] = true;
    let mut size = 1;
    while size < n {
        let mut best = (0, usize::MAX);
        for x in 0..n {
            if current[x] {
                continue;
            }
            gens.push(x);
            let s = group.closure(&gens).len();
            gens.pop();
            if s > best.0 {
                best = (s, x);
            }
        }
        gens.push(best.1);
        current.fill(false);
        for y in group.closure(&gens) {
            current[y] = true;
        }
        size = best.0;
    }
    gens
}

pub fn enumerate_endomorphisms(group: &Group) -> Result<Vec<Morphism>> {
    enumerate_endomorphisms_with(group, EnumerationLimits::default())
}

/// All endomorphisms, sorted lexicographically by image table (so the
/// trivial endomorphism comes first).
pub fn enumerate_endomorphisms_with(
    group: &Group,
    limits: EnumerationLimits,
) -> Result<Vec<Morphism>> {
    let n = group.order();
    if !group.is_dense() || n > limits.max_order {
        return Err(Error::Capacity(format!(
            "endomorphism enumeration of {} (order {n}) exceeds the limit of {}",
            group.name(),
            limits.max_order
        )));
    }
    let gens = minimal_generating_sequence(group);
    if gens.is_empty() {
        return Ok(vec![Morphism::from_images_unchecked(vec![0])]);
    }
    let orders = group.element_orders();
    let ctx = Backtrack {
        group,
        gens: &gens,
        orders: &orders,
        count: AtomicUsize::new(0),
        overflow: AtomicBool::new(false),
        max_count: limits.max_count,
    };
    let first_candidates: Vec<usize> = (0..n)
        .filter(|&c| orders[gens[0]] % orders[c] == 0)
        .collect();
    let mut all: Vec<Morphism> = first_candidates
        .par_iter()
        .flat_map_iter(|&c| {
            let mut state = State::new(n);
            let mut out = Vec::new();
            ctx.assign(&mut state, 0, c, &mut out);
            out
        })
        .collect();
    if ctx.overflow.load(Ordering::Relaxed) {
        return Err(Error::Capacity(format!(
            "{} has more than {} endomorphisms",
            group.name(),
            limits.max_count
        )));
    }
    all.sort_unstable_by(|a, b| a.images.cmp(&b.images));
    Ok(all)
}

const UNSET: usize = usize::MAX;

struct State {
    images: Vec<usize>,
    known: Vec<usize>,
}

impl State {
    fn new(n: usize) -> Self {
        let mut images = vec![UNSET; n];
        images[0] = 0;
        State {
            images,
            known: vec![0],
        }
    }
}

struct Backtrack<'a> {
    group: &'a Group,
    gens: &'a [usize],
    orders: &'a [usize],
    count: AtomicUsize,
    overflow: AtomicBool,
    max_count: usize,
}

impl Backtrack<'_> {
    fn assign(&self, st: &mut State, level: usize, image: usize, out: &mut Vec<Morphism>) {
        if self.overflow.load(Ordering::Relaxed) {
            return;
        }
        let mark = st.known.len();
        let g = self.gens[level];
        let consistent = if st.images[g] == UNSET {
            st.images[g] = image;
            st.known.push(g);
            self.propagate(st, level)
        } else {
            st.images[g] == image && self.propagate(st, level)
        };
        if consistent {
            if level + 1 == self.gens.len() {
                debug_assert!(st.images.iter().all(|&y| y != UNSET));
                if self.count.fetch_add(1, Ordering::Relaxed) >= self.max_count {
                    self.overflow.store(true, Ordering::Relaxed);
                } else {
                    out.push(Morphism::from_images_unchecked(st.images.clone()));
                }
            } else {
                let next = self.gens[level + 1];
                let want = self.orders[next];
                for c in 0..st.images.len() {
                    if want % self.orders[c] == 0 {
                        self.assign(st, level + 1, c, out);
                    }
                }
            }
        }
        for &x in &st.known[mark..] {
            st.images[x] = UNSET;
        }
        st.known.truncate(mark);
    }

    /// Closes the domain under right multiplication by the generators fixed
    /// so far, checking every product against already fixed images.
    fn propagate(&self, st: &mut State, level: usize) -> bool {
        let gens = &self.gens[..=level];
        let mut i = 0;
        while i < st.known.len() {
            let x = st.known[i];
            let fx = st.images[x];
            for &g in gens {
                let y = self.group.mul(x, g);
                let fy = self.group.mul(fx, st.images[g]);
                if st.images[y] == UNSET {
                    st.images[y] = fy;
                    st.known.push(y);
                } else if st.images[y] != fy {
                    return false;
                }
            }
            i += 1;
        }
        true
    }
}

/// All `|G| * |End(G)|` affine maps, ordered by endomorphism then constant.
pub fn enumerate_affine_maps(group: &Group) -> Result<Vec<AffineMap>> {
    let endos = enumerate_endomorphisms(group)?;
    Ok(affine_maps_from(group, &endos))
}

pub fn affine_maps_from(group: &Group, endos: &[Morphism]) -> Vec<AffineMap> {
    endos
        .iter()
        .flat_map(|e| {
            (0..group.order()).map(move |c| AffineMap {
                constant: c,
                endo: e.clone(),
            })
        })
        .collect()
}

pub fn automorphism_orbits(group: &Group) -> Result<Vec<Vec<usize>>> {
    let endos = enumerate_endomorphisms(group)?;
    Ok(orbits_from(group, &endos))
}

/// Orbits of the automorphisms among `endos`, each sorted, ordered by their
/// smallest element (so `{identity}` comes first).
pub fn orbits_from(group: &Group, endos: &[Morphism]) -> Vec<Vec<usize>> {
    let n = group.order();
    let autos: Vec<&Morphism> = endos.iter().filter(|e| e.is_automorphism()).collect();
    let mut assigned = vec![false; n];
    let mut orbits = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut orbit = vec![x];
        assigned[x] = true;
        for a in &autos {
            let y = a.apply(x);
            if !assigned[y] {
                assigned[y] = true;
                orbit.push(y);
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}
