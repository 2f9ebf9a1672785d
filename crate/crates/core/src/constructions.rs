//! Explicit hard functions and partition-avoiding permutations.

use crate::approx::FamilyKind;
use crate::error::{Error, Result};
use crate::group::{self, Group, GroupFunction};
use crate::morphism;
use crate::util::{gcd, is_prime, next_permutation};

/// On `Z/n`: non-generators go to 1, each generator `x` goes to `x * x mod n`.
/// Its endomorphic approximability is 1.
pub fn cyclic_enapp_witness(n: usize) -> Result<GroupFunction> {
    if n < 2 {
        return Err(Error::Parameter(format!("cyclic witness needs n >= 2, got {n}")));
    }
    let g = group::cyclic(n)?;
    let images = (0..n)
        .map(|x| if gcd(x, n) == 1 { x * x % n } else { 1 })
        .collect();
    GroupFunction::new(&g, images)
}

/// The ring square `x -> x^2` on `Z/p`, whose affine approximability is 2.
pub fn prime_square_witness(p: usize) -> Result<GroupFunction> {
    if !is_prime(p as u64) {
        return Err(Error::Argument(format!("{p} is not prime")));
    }
    let g = group::cyclic(p)?;
    GroupFunction::new(&g, (0..p).map(|x| x * x % p).collect())
}

/// `x -> (x mod p) + (x div p)` on `Z/p^k`, with affine approximability at
/// most `p`.
pub fn rem_quot_witness(p: usize, k: u32) -> Result<GroupFunction> {
    if p < 2 || k == 0 {
        return Err(Error::Parameter(format!("rem-quot witness needs p >= 2 and k >= 1, got ({p},{k})")));
    }
    let n = p
        .checked_pow(k)
        .filter(|&n| n <= group::DENSE_LIMIT)
        .ok_or_else(|| Error::Capacity(format!("{p}^{k} exceeds {}", group::DENSE_LIMIT)))?;
    let g = group::cyclic(n)?;
    GroupFunction::new(&g, (0..n).map(|x| (x % p + x / p) % n).collect())
}

/// A named witness together with the metric and value it is known to attain.
#[derive(Debug, Clone)]
pub struct NamedWitness {
    pub name: &'static str,
    pub function: GroupFunction,
    pub metric: FamilyKind,
    pub value: usize,
}

/// The component swap on `Z/2 x Z/3`, the Klein four-group table and the
/// `Sym3` table.
///
/// Carriers: `product(cyclic(2),cyclic(3))` with `(x, y)` at index `x + 2y`;
/// `elemabelian(2,2)` with `(x, y)` at index `x + 2y`; `dihedral(6)` with
/// `r^k` at `k` and `s r^k` at `3 + k`.
pub fn small_group_witnesses() -> Vec<NamedWitness> {
    let z6 = Group::direct_product(&group::cyclic(2).unwrap(), &group::cyclic(3).unwrap())
        .unwrap()
        .renamed("product(cyclic(2),cyclic(3))");
    let swap = (0..6)
        .map(|i| {
            let (x, y) = (i % 2, i / 2);
            y % 2 + 2 * x
        })
        .collect();
    let klein = group::elem_abelian(2, 2).unwrap();
    let sym3 = group::dihedral(6).unwrap();
    vec![
        NamedWitness {
            name: "z6-swap",
            function: GroupFunction::new(&z6, swap).unwrap(),
            metric: FamilyKind::Affine,
            value: 2,
        },
        NamedWitness {
            name: "klein",
            function: GroupFunction::new(&klein, vec![1, 1, 2, 2]).unwrap(),
            metric: FamilyKind::Endo,
            value: 2,
        },
        NamedWitness {
            name: "sym3",
            function: GroupFunction::new(&sym3, vec![0, 1, 1, 0, 2, 2]).unwrap(),
            metric: FamilyKind::Affine,
            value: 2,
        },
    ]
}

/// A partition of `{0..m-1}` into nonempty classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    m: usize,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(m: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m];
        for class in &classes {
            if class.is_empty() {
                return Err(Error::Argument("partition has an empty class".into()));
            }
            for &x in class {
                if x >= m {
                    return Err(Error::Argument(format!("element {x} outside 0..{m}")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Argument(format!("element {x} appears twice")));
                }
            }
        }
        if let Some(x) = seen.iter().position(|&s| !s) {
            return Err(Error::Argument(format!("element {x} is in no class")));
        }
        let classes = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Ok(Partition { m, classes })
    }

    /// Consecutive classes of the given sizes: `[3, 2]` gives
    /// `{0,1,2}, {3,4}`.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut next = 0;
        let classes = sizes
            .iter()
            .map(|&s| {
                let c: Vec<usize> = (next..next + s).collect();
                next += s;
                c
            })
            .collect();
        Partition::new(next, classes)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Class index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.m];
        for (i, c) in self.classes.iter().enumerate() {
            for &x in c {
                label[x] = i;
            }
        }
        label
    }

    pub fn max_class(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether `perm` sends every element into a different class.
    pub fn is_avoiding(&self, perm: &[usize]) -> bool {
        if perm.len() != self.m {
            return false;
        }
        let mut seen = vec![false; self.m];
        if !perm.iter().all(|&y| y < self.m && !std::mem::replace(&mut seen[y], true)) {
            return false;
        }
        let label = self.labels();
        (0..self.m).all(|x| label[x] != label[perm[x]])
    }
}

/// A permutation moving every element out of its class, or `None` when some
/// class holds more than half the elements.
///
/// While at least six elements remain, the smallest elements of the two
/// largest classes are swapped and removed; the last five or fewer are
/// handled by a lexicographic search.
pub fn build_avoiding_permutation(partition: &Partition) -> Option<Vec<usize>> {
    if 2 * partition.max_class() > partition.m {
        return None;
    }
    let mut perm = vec![usize::MAX; partition.m];
    let mut classes: Vec<Vec<usize>> = partition.classes.clone();
    let mut remaining = partition.m;
    while remaining >= 6 {
        let mut idx: Vec<usize> = (0..classes.len()).collect();
        idx.sort_by_key(|&i| (std::cmp::Reverse(classes[i].len()), i));
        let (i, j) = (idx[0], idx[1]);
        let a = classes[i].remove(0);
        let b = classes[j].remove(0);
        perm[a] = b;
        perm[b] = a;
        remaining -= 2;
    }
    let mut rest: Vec<(usize, usize)> = classes
        .iter()
        .enumerate()
        .flat_map(|(c, xs)| xs.iter().map(move |&x| (x, c)))
        .collect();
    rest.sort_unstable();
    let mut local: Vec<usize> = (0..rest.len()).collect();
    loop {
        if (0..rest.len()).all(|i| rest[i].1 != rest[local[i]].1) {
            for (i, &j) in local.iter().enumerate() {
                perm[rest[i].0] = rest[j].0;
            }
            return Some(perm);
        }
        if !next_permutation(&mut local) {
            return None;
        }
    }
}

/// A bijection fixing the identity and moving every other element out of
/// its automorphism orbit, if one exists.
pub fn find_aoa_permutation(group: &Group) -> Result<Option<GroupFunction>> {
    let orbits = morphism::automorphism_orbits(group)?;
    let nontrivial: Vec<Vec<usize>> = orbits
        .into_iter()
        .filter(|o| o[0] != 0)
        .map(|o| o.into_iter().map(|x| x - 1).collect())
        .collect();
    let partition = Partition::new(group.order() - 1, nontrivial)?;
    Ok(build_avoiding_permutation(&partition).map(|perm| {
        let images = std::iter::once(0).chain(perm.into_iter().map(|y| y + 1)).collect();
        GroupFunction::new(group, images).expect("permutation of the group")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::construct;

    #[test]
    fn cyclic_witness_tables() {
        assert_eq!(cyclic_enapp_witness(5).unwrap().images(), &[1, 1, 4, 4, 1]);
        assert_eq!(cyclic_enapp_witness(2).unwrap().images(), &[1, 1]);
        assert!(cyclic_enapp_witness(1).is_err());
    }

    #[test]
    fn ring_witness_tables() {
        assert_eq!(prime_square_witness(5).unwrap().images(), &[0, 1, 4, 4, 1]);
        assert_eq!(prime_square_witness(2).unwrap().images(), &[0, 1]);
        assert!(prime_square_witness(6).is_err());
        assert_eq!(rem_quot_witness(2, 3).unwrap().images(), &[0, 1, 1, 2, 2, 3, 3, 4]);
        assert_eq!(rem_quot_witness(3, 2).unwrap().images(), &[0, 1, 2, 1, 2, 3, 2, 3, 4]);
        assert_eq!(rem_quot_witness(2, 1).unwrap().images(), &[0, 1]);
    }

    #[test]
    fn small_witness_entries() {
        let w = small_group_witnesses();
        // (1,2) -> (0,1)
        assert_eq!(w[0].function.apply(1 + 2 * 2), 2);
        // (1,1) -> (0,1)
        assert_eq!(w[1].function.apply(3), 2);
        // s r -> r^2
        assert_eq!(w[2].function.apply(4), 2);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn avoiding_examples() {
        let p = Partition::new(2, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(build_avoiding_permutation(&p), Some(vec![1, 0]));
        assert_eq!(build_avoiding_permutation(&Partition::from_sizes(&[3, 2]).unwrap()), None);
        let p = Partition::from_sizes(&[3, 3]).unwrap();
        assert!(p.is_avoiding(&build_avoiding_permutation(&p).unwrap()));
    }

    #[test]
    fn aoa_examples() {
        assert!(find_aoa_permutation(&construct(&"alt(4)".parse().unwrap()).unwrap())
            .unwrap()
            .is_none());
        assert!(find_aoa_permutation(&group::cyclic(3).unwrap()).unwrap().is_none());
        // The 18 elements of order 9 form one orbit, more than half of 26.
        assert!(find_aoa_permutation(&group::modmax(3).unwrap()).unwrap().is_none());
        let g = group::cyclic(12).unwrap();
        let f = find_aoa_permutation(&g).unwrap().unwrap();
        assert!(f.is_bijective());
        assert_eq!(f.apply(0), 0);
    }
}
