//! One representative of every isomorphism class of groups of order at most
//! 15, from the classical classification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{construct, Group, GroupSpec};

pub const CATALOG_MAX_ORDER: usize = 15;

const ENTRIES: &[(usize, &str, &str)] = &[
    (1, "{1}", "cyclic(1)"),
    (2, "Z/2", "cyclic(2)"),
    (3, "Z/3", "cyclic(3)"),
    (4, "Z/4", "cyclic(4)"),
    (4, "(Z/2)^2", "elemabelian(2,2)"),
    (5, "Z/5", "cyclic(5)"),
    (6, "Z/6", "cyclic(6)"),
    (6, "Sym3", "dihedral(6)"),
    (7, "Z/7", "cyclic(7)"),
    (8, "Z/8", "cyclic(8)"),
    (8, "Z/4 x Z/2", "product(cyclic(4),cyclic(2))"),
    (8, "(Z/2)^3", "elemabelian(2,3)"),
    (8, "D8", "dihedral(8)"),
    (8, "Q8", "dicyclic(8)"),
    (9, "Z/9", "cyclic(9)"),
    (9, "(Z/3)^2", "elemabelian(3,2)"),
    (10, "Z/10", "cyclic(10)"),
    (10, "D10", "dihedral(10)"),
    (11, "Z/11", "cyclic(11)"),
    (12, "Z/12", "cyclic(12)"),
    (12, "Z/2 x Z/6", "product(cyclic(2),cyclic(6))"),
    (12, "Dic12", "dicyclic(12)"),
    (12, "Alt4", "alt(4)"),
    (12, "D12", "dihedral(12)"),
    (13, "Z/13", "cyclic(13)"),
    (14, "Z/14", "cyclic(14)"),
    (14, "D14", "dihedral(14)"),
    (15, "Z/15", "cyclic(15)"),
];

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    /// Conventional short name, e.g. `Sym3`.
    pub label: &'static str,
    pub spec: GroupSpec,
    pub group: Group,
}

pub fn catalog_up_to(n: usize) -> Result<Vec<CatalogEntry>> {
    if n > CATALOG_MAX_ORDER {
        return Err(Error::UnsupportedOrder(n));
    }
    ENTRIES
        .iter()
        .filter(|(order, _, _)| *order <= n)
        .map(|&(_, label, spec)| {
            let spec: GroupSpec = spec.parse()?;
            let group = construct(&spec)?;
            Ok(CatalogEntry { label, spec, group })
        })
        .collect()
}

/// Isomorphism invariants that separate all groups of order at most 15.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub order_multiset: Vec<usize>,
    pub center_size: usize,
    pub exponent: usize,
}

pub fn fingerprint(group: &Group) -> Fingerprint {
    let mut orders = group.element_orders();
    orders.sort_unstable();
    Fingerprint {
        order: group.order(),
        exponent: orders.iter().copied().fold(1, crate::util::lcm),
        order_multiset: orders,
        center_size: group.center().len(),
    }
}
