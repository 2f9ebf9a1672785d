//! Finite group carriers.
//!
//! Elements are indices `0..order`, and index 0 is always the identity.
//! Small groups (up to [`DENSE_LIMIT`] elements) carry a full Cayley table;
//! larger structured groups such as the JK groups supply multiplication and
//! inversion by formula through [`GroupRule`].

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jk::{self, JkParams};
use crate::util::{self, is_prime, lcm};

/// Largest order for which a dense Cayley table is materialized.
pub const DENSE_LIMIT: usize = 2048;

/// Largest order for which associativity is checked on every triple.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;

/// Number of random triples drawn by the sampled associativity audit.
pub const ASSOC_SAMPLES: u64 = 1_000_000;

/// Multiplication and inversion supplied by formula.
pub trait GroupRule: Send + Sync + fmt::Debug {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;
    /// The center, when the rule knows it in closed form.
    fn center(&self) -> Option<Vec<usize>> {
        None
    }
}

#[derive(Debug)]
enum Repr {
    Dense { table: Vec<u32>, inv: Vec<u32> },
    Rule(Arc<dyn GroupRule>),
}

#[derive(Debug)]
struct Inner {
    name: String,
    order: usize,
    generators: Vec<usize>,
    repr: Repr,
}

/// An immutable finite group; cloning is cheap.
#[derive(Debug, Clone)]
pub struct Group(Arc<Inner>);

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.order() == other.order()
            && match (&self.0.repr, &other.0.repr) {
                (Repr::Dense { table: a, .. }, Repr::Dense { table: b, .. }) => a == b,
                _ => false,
            }
    }
}

impl Group {
    /// Builds a dense carrier from a multiplication rule on `0..order`.
    ///
    /// Used by the built-in constructors; the axioms are checked cheaply
    /// (associativity exhaustively up to order 64, sampled above).
    pub(crate) fn dense_from_fn(
        name: String,
        order: usize,
        generators: Vec<usize>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Group> {
        if order == 0 {
            return Err(Error::Parameter("a group has at least one element".into()));
        }
        if order > DENSE_LIMIT {
            return Err(Error::Capacity(format!(
                "{name} has order {order}, above the dense limit {DENSE_LIMIT}"
            )));
        }
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                debug_assert!(c < order);
                table.push(c as u32);
            }
        }
        let report = check_table(order, &table, &generators, 64, 20_000);
        if let Some(msg) = report.first_failure() {
            return Err(Error::GroupAxiom(format!("{name}: {msg}")));
        }
        Ok(Self::from_checked_table(name, order, table, generators))
    }

    /// Builds a dense carrier from a raw table, running the full validation.
    pub fn from_table(
        name: impl Into<String>,
        order: usize,
        table: Vec<u32>,
        generators: Option<Vec<usize>>,
    ) -> Result<Group> {
        let name = name.into();
        if order == 0 {
            return Err(Error::Parameter("a group has at least one element".into()));
        }
        if order > DENSE_LIMIT {
            return Err(Error::Capacity(format!(
                "order {order} is above the dense limit {DENSE_LIMIT}"
            )));
        }
        if table.len() != order * order {
            return Err(Error::Argument(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v as usize >= order) {
            return Err(Error::Argument(format!("table entry {bad} out of range")));
        }
        let generators = generators.unwrap_or_else(|| (0..order).collect());
        if let Some(bad) = generators.iter().find(|&&g| g >= order) {
            return Err(Error::Argument(format!("generator {bad} out of range")));
        }
        let report = check_table(
            order,
            &table,
            &generators,
            EXHAUSTIVE_ASSOC_LIMIT,
            ASSOC_SAMPLES,
        );
        if let Some(msg) = report.first_failure() {
            return Err(Error::GroupAxiom(msg));
        }
        Ok(Self::from_checked_table(name, order, table, generators))
    }

    fn from_checked_table(
        name: String,
        order: usize,
        table: Vec<u32>,
        generators: Vec<usize>,
    ) -> Group {
        let mut inv = vec![0u32; order];
        for a in 0..order {
            let row = &table[a * order..(a + 1) * order];
            inv[a] = row.iter().position(|&c| c == 0).expect("checked") as u32;
        }
        let generators = if generators.is_empty() {
            vec![0]
        } else {
            generators
        };
        Group(Arc::new(Inner {
            name,
            order,
            generators,
            repr: Repr::Dense { table, inv },
        }))
    }

    /// Wraps a rule-based carrier. The rule is audited by [`Group::validate`],
    /// not here.
    pub fn from_rule(
        name: impl Into<String>,
        rule: Arc<dyn GroupRule>,
        generators: Vec<usize>,
    ) -> Group {
        let order = rule.order();
        Group(Arc::new(Inner {
            name: name.into(),
            order,
            generators,
            repr: Repr::Rule(rule),
        }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.0.generators
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.0.repr, Repr::Dense { .. })
    }

    /// Row-major Cayley table (`table[a * n + b] = a * b`) for dense carriers.
    pub fn table(&self) -> Option<&[u32]> {
        match &self.0.repr {
            Repr::Dense { table, .. } => Some(table),
            Repr::Rule(_) => None,
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.0.repr {
            Repr::Dense { table, .. } => table[a * self.0.order + b] as usize,
            Repr::Rule(rule) => rule.mul(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        match &self.0.repr {
            Repr::Dense { inv, .. } => inv[a] as usize,
            Repr::Rule(rule) => rule.inv(a),
        }
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements commuting with every element, in increasing order.
    ///
    /// Rule-based carriers report their closed-form center; dense ones are
    /// scanned exhaustively (it suffices to test against the generators).
    pub fn center(&self) -> Vec<usize> {
        if let Repr::Rule(rule) = &self.0.repr {
            if let Some(c) = rule.center() {
                return c;
            }
        }
        let gens = self.generators();
        (0..self.order())
            .filter(|&x| gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x)))
            .collect()
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
            assert!(k <= self.order(), "element {x} has no finite order");
        }
        k
    }

    pub fn element_orders(&self) -> Vec<usize> {
        (0..self.order()).map(|x| self.element_order(x)).collect()
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, x| lcm(acc, self.element_order(x)))
    }

    /// Elements of the subgroup generated by `gens`, in breadth-first order
    /// starting from the identity.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out
    }

    /// Full axiom audit. Associativity is exhaustive up to order 512 and
    /// checked on 10^6 random triples above; the other checks are exhaustive.
    pub fn validate(&self) -> ValidationReport {
        match &self.0.repr {
            Repr::Dense { table, .. } => check_table(
                self.order(),
                table,
                self.generators(),
                EXHAUSTIVE_ASSOC_LIMIT,
                ASSOC_SAMPLES,
            ),
            Repr::Rule(_) => check_with(
                self.order(),
                |a, b| self.mul(a, b),
                self.generators(),
                EXHAUSTIVE_ASSOC_LIMIT,
                ASSOC_SAMPLES,
            ),
        }
    }

    /// Componentwise product; element `(i, j)` has index `i + |a| * j`.
    pub fn direct_product(a: &Group, b: &Group) -> Result<Group> {
        if !a.is_dense() || !b.is_dense() {
            return Err(Error::Capacity(
                "direct products need dense factors".into(),
            ));
        }
        let (na, nb) = (a.order(), b.order());
        let n = na
            .checked_mul(nb)
            .filter(|&n| n <= DENSE_LIMIT)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "product of orders {na} and {nb} exceeds the dense limit {DENSE_LIMIT}"
                ))
            })?;
        let mut gens: Vec<usize> = a.generators().iter().copied().filter(|&g| g != 0).collect();
        gens.extend(b.generators().iter().filter(|&&g| g != 0).map(|&g| na * g));
        let name = format!("product({},{})", a.name(), b.name());
        Group::dense_from_fn(name, n, gens, |x, y| {
            let (xi, xj) = (x % na, x / na);
            let (yi, yj) = (y % na, y / na);
            a.mul(xi, yi) + na * b.mul(xj, yj)
        })
    }

    /// Returns the same group under a different display name.
    pub fn renamed(&self, name: impl Into<String>) -> Group {
        let inner = &self.0;
        let repr = match &inner.repr {
            Repr::Dense { table, inv } => Repr::Dense {
                table: table.clone(),
                inv: inv.clone(),
            },
            Repr::Rule(rule) => Repr::Rule(Arc::clone(rule)),
        };
        Group(Arc::new(Inner {
            name: name.into(),
            order: inner.order,
            generators: inner.generators.clone(),
            repr,
        }))
    }
}

/// Outcome of one axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub passed: bool,
    pub exhaustive: bool,
    pub checked: u64,
    pub failure: Option<String>,
}

impl Check {
    fn pass(exhaustive: bool, checked: u64) -> Self {
        Check {
            passed: true,
            exhaustive,
            checked,
            failure: None,
        }
    }

    fn fail(exhaustive: bool, checked: u64, failure: String) -> Self {
        Check {
            passed: false,
            exhaustive,
            checked,
            failure: Some(failure),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub order: usize,
    pub identity: Check,
    /// The identity must be the only idempotent element.
    pub identity_uniqueness: Check,
    pub inverses: Check,
    pub associativity: Check,
    pub generation: Check,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    fn checks(&self) -> [&Check; 5] {
        [
            &self.identity,
            &self.identity_uniqueness,
            &self.inverses,
            &self.associativity,
            &self.generation,
        ]
    }

    pub fn first_failure(&self) -> Option<String> {
        const NAMES: [&str; 5] = [
            "identity",
            "identity uniqueness",
            "inverses",
            "associativity",
            "generation",
        ];
        self.checks()
            .iter()
            .zip(NAMES)
            .find(|(c, _)| !c.passed)
            .map(|(c, name)| format!("{name}: {}", c.failure.clone().unwrap_or_default()))
    }
}

fn check_table(
    n: usize,
    table: &[u32],
    gens: &[usize],
    exhaustive_limit: usize,
    samples: u64,
) -> ValidationReport {
    check_with(n, |a, b| table[a * n + b] as usize, gens, exhaustive_limit, samples)
}

fn check_with(
    n: usize,
    mul: impl Fn(usize, usize) -> usize,
    gens: &[usize],
    exhaustive_limit: usize,
    samples: u64,
) -> ValidationReport {
    let nn = n as u64;
    let identity = match (0..n).find(|&x| mul(0, x) != x || mul(x, 0) != x) {
        None => Check::pass(true, nn),
        Some(x) => Check::fail(true, nn, format!("0 is not neutral for {x}")),
    };
    let identity_uniqueness = match (1..n).find(|&x| mul(x, x) == x) {
        None => Check::pass(true, nn),
        Some(x) => Check::fail(true, nn, format!("{x} * {x} = {x}, so {x} acts as a second identity")),
    };
    let inverses = {
        let mut failure = None;
        if n <= DENSE_LIMIT {
            for x in 0..n {
                if !(0..n).any(|y| mul(x, y) == 0 && mul(y, x) == 0) {
                    failure = Some(format!("{x} has no two-sided inverse"));
                    break;
                }
            }
        } else {
            // Too large for a quadratic scan: x^(m-1) is the only candidate.
            for x in 0..n {
                let mut y = x;
                let mut prev = 0;
                let mut steps = 0;
                while y != 0 && steps <= n {
                    prev = y;
                    y = mul(y, x);
                    steps += 1;
                }
                let inv = if x == 0 { 0 } else { prev };
                if y != 0 || mul(x, inv) != 0 || mul(inv, x) != 0 {
                    failure = Some(format!("{x} has no two-sided inverse"));
                    break;
                }
            }
        }
        match failure {
            None => Check::pass(true, nn),
            Some(f) => Check::fail(true, nn, f),
        }
    };
    let associativity = if n <= exhaustive_limit {
        let mut failure = None;
        'outer: for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        failure = Some(format!("({a}*{b})*{c} != {a}*({b}*{c})"));
                        break 'outer;
                    }
                }
            }
        }
        let count = nn * nn * nn;
        match failure {
            None => Check::pass(true, count),
            Some(f) => Check::fail(true, count, f),
        }
    } else {
        let mut rng = util::seeded_rng(0x5eed_a550c);
        let mut failure = None;
        for _ in 0..samples {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                failure = Some(format!("({a}*{b})*{c} != {a}*({b}*{c})"));
                break;
            }
        }
        match failure {
            None => Check::pass(false, samples),
            Some(f) => Check::fail(false, samples, f),
        }
    };
    let generation = {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut count = 1;
        let mut queue = VecDeque::from([0usize]);
        let mut bad_gen = None;
        for &g in gens {
            if g >= n {
                bad_gen = Some(g);
            }
        }
        if bad_gen.is_none() {
            while let Some(x) = queue.pop_front() {
                for &g in gens {
                    let y = mul(x, g);
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        match bad_gen {
            Some(g) => Check::fail(true, nn, format!("generator {g} out of range")),
            None if count == n => Check::pass(true, nn),
            None => Check::fail(
                true,
                nn,
                format!("generators span only {count} of {n} elements"),
            ),
        }
    };
    ValidationReport {
        order: n,
        identity,
        identity_uniqueness,
        inverses,
        associativity,
        generation,
    }
}

/// A total function on a group, stored as an image table.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    group: Group,
    images: Vec<usize>,
}

impl GroupFunction {
    pub fn new(group: &Group, images: Vec<usize>) -> Result<Self> {
        if images.len() != group.order() {
            return Err(Error::Argument(format!(
                "function table has {} entries for a group of order {}",
                images.len(),
                group.order()
            )));
        }
        if let Some(bad) = images.iter().find(|&&v| v >= group.order()) {
            return Err(Error::Argument(format!("image {bad} out of range")));
        }
        Ok(GroupFunction {
            group: group.clone(),
            images,
        })
    }

    pub fn identity(group: &Group) -> Self {
        GroupFunction {
            group: group.clone(),
            images: (0..group.order()).collect(),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupFunction) -> GroupFunction {
        GroupFunction {
            group: self.group.clone(),
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }
}

impl Serialize for GroupFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

/// A group construction expression.
///
/// The textual form is either `name(a,b,...)` or `name:a,b,...`; display
/// always uses the parenthesized canonical form, so equal specs print
/// identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    ElemAbelian { p: u64, rank: u32 },
    /// Dihedral group of the given order `2n`.
    Dihedral(usize),
    /// Dicyclic group of the given order `4n`.
    Dicyclic(usize),
    Sym(usize),
    Alt(usize),
    /// Nonabelian group of order p^3 and exponent p.
    Heis(u64),
    /// Nonabelian group of order p^3 and exponent p^2.
    ModMax(u64),
    Jk(JkParams),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    File(PathBuf),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::ElemAbelian { p, rank } => write!(f, "elemabelian({p},{rank})"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupSpec::Dicyclic(n) => write!(f, "dicyclic({n})"),
            GroupSpec::Sym(n) => write!(f, "sym({n})"),
            GroupSpec::Alt(n) => write!(f, "alt({n})"),
            GroupSpec::Heis(p) => write!(f, "heis({p})"),
            GroupSpec::ModMax(p) => write!(f, "modmax({p})"),
            GroupSpec::Jk(params) => {
                write!(f, "jk({},{},{})", params.p(), params.lambda().0, params.lambda().1)
            }
            GroupSpec::Product(a, b) => write!(f, "product({a},{b})"),
            GroupSpec::File(path) => write!(f, "file({})", path.display()),
        }
    }
}

fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parameter(format!("unbalanced parentheses in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parameter(format!("unbalanced parentheses in {s:?}")));
    }
    parts.push(s[start..].trim());
    Ok(parts)
}

fn parse_num<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parameter(format!("expected an integer, found {s:?}")))
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(GroupSpec::File(PathBuf::from(path)));
        }
        let (name, args) = if let Some(open) = s.find('(') {
            let colon = s.find(':');
            if colon.is_some_and(|c| c < open) {
                let c = colon.unwrap();
                (&s[..c], &s[c + 1..])
            } else {
                if !s.ends_with(')') {
                    return Err(Error::Parameter(format!("malformed group spec {s:?}")));
                }
                (&s[..open], &s[open + 1..s.len() - 1])
            }
        } else if let Some(c) = s.find(':') {
            (&s[..c], &s[c + 1..])
        } else {
            (s, "")
        };
        let name = name.trim().to_ascii_lowercase();
        if name == "file" {
            return Ok(GroupSpec::File(PathBuf::from(args.trim())));
        }
        let args = if args.trim().is_empty() {
            Vec::new()
        } else {
            split_top_level(args)?
        };
        let want = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{name} takes {k} argument(s), got {}",
                    args.len()
                )))
            }
        };
        let spec = match name.as_str() {
            "cyclic" => {
                want(1)?;
                GroupSpec::Cyclic(parse_num(args[0])?)
            }
            "trivial" => {
                want(0)?;
                GroupSpec::Cyclic(1)
            }
            "elemabelian" => {
                want(2)?;
                GroupSpec::ElemAbelian {
                    p: parse_num(args[0])?,
                    rank: parse_num(args[1])?,
                }
            }
            "dihedral" => {
                want(1)?;
                GroupSpec::Dihedral(parse_num(args[0])?)
            }
            "dicyclic" => {
                want(1)?;
                GroupSpec::Dicyclic(parse_num(args[0])?)
            }
            "sym" => {
                want(1)?;
                GroupSpec::Sym(parse_num(args[0])?)
            }
            "alt" => {
                want(1)?;
                GroupSpec::Alt(parse_num(args[0])?)
            }
            "heis" => {
                want(1)?;
                GroupSpec::Heis(parse_num(args[0])?)
            }
            "modmax" => {
                want(1)?;
                GroupSpec::ModMax(parse_num(args[0])?)
            }
            "jk" => {
                want(3)?;
                GroupSpec::Jk(JkParams::new(
                    parse_num(args[0])?,
                    parse_num(args[1])?,
                    parse_num(args[2])?,
                )?)
            }
            "product" => {
                want(2)?;
                GroupSpec::Product(Box::new(args[0].parse()?), Box::new(args[1].parse()?))
            }
            other => return Err(Error::Parameter(format!("unknown group family {other:?}"))),
        };
        Ok(spec)
    }
}

/// Options for [`construct_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstructOptions {
    /// Permit JK groups with p > 3 (order p^8).
    pub allow_large_jk: bool,
}

/// Builds the group described by `spec`.
pub fn construct(spec: &GroupSpec) -> Result<Group> {
    construct_with(spec, ConstructOptions::default())
}

pub fn construct_with(spec: &GroupSpec, options: ConstructOptions) -> Result<Group> {
    let name = spec.to_string();
    match spec {
        GroupSpec::Cyclic(n) => cyclic(*n),
        GroupSpec::ElemAbelian { p, rank } => elem_abelian(*p, *rank),
        GroupSpec::Dihedral(m) => dihedral(*m),
        GroupSpec::Dicyclic(m) => dicyclic(*m),
        GroupSpec::Sym(n) => symmetric(*n, false),
        GroupSpec::Alt(n) => symmetric(*n, true),
        GroupSpec::Heis(p) => heis(*p),
        GroupSpec::ModMax(p) => modmax(*p),
        GroupSpec::Jk(params) => jk::jk_group(params, options.allow_large_jk),
        GroupSpec::Product(a, b) => {
            let a = construct_with(a, options)?;
            let b = construct_with(b, options)?;
            Group::direct_product(&a, &b)
        }
        GroupSpec::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            crate::cayley::parse_cayley_named(&text, name.clone())
        }
    }
    .map(|g| if g.name() == name { g } else { g.renamed(name) })
}

pub fn cyclic(n: usize) -> Result<Group> {
    if n == 0 {
        return Err(Error::Parameter("cyclic(n) needs n >= 1".into()));
    }
    let gens = if n == 1 { vec![0] } else { vec![1] };
    Group::dense_from_fn(format!("cyclic({n})"), n, gens, |a, b| (a + b) % n)
}

/// `(Z/p)^rank`, element index = base-p digits with the first coordinate
/// least significant.
pub fn elem_abelian(p: u64, rank: u32) -> Result<Group> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("elemabelian: {p} is not prime")));
    }
    if rank == 0 {
        return Err(Error::Parameter("elemabelian: rank must be positive".into()));
    }
    let p = p as usize;
    let order = p
        .checked_pow(rank)
        .filter(|&n| n <= DENSE_LIMIT)
        .ok_or_else(|| Error::Capacity(format!("elemabelian({p},{rank}) is too large")))?;
    let gens: Vec<usize> = (0..rank).map(|i| p.pow(i)).collect();
    Group::dense_from_fn(format!("elemabelian({p},{rank})"), order, gens, |a, b| {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..rank {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    })
}

/// Dihedral group of order `m = 2n`: index `k` is r^k, index `n + k` is s r^k.
pub fn dihedral(m: usize) -> Result<Group> {
    if m % 2 != 0 || m < 4 {
        return Err(Error::Parameter(format!(
            "dihedral(m) needs an even order m >= 4, got {m}"
        )));
    }
    let n = m / 2;
    Group::dense_from_fn(format!("dihedral({m})"), m, vec![1, n], |a, b| {
        let (ea, ka) = (a / n, a % n);
        let (eb, kb) = (b / n, b % n);
        // s^ea r^ka s^eb r^kb = s^(ea+eb) r^((-1)^eb ka + kb)
        let k = if eb == 0 { ka + kb } else { n - ka + kb } % n;
        ((ea + eb) % 2) * n + k
    })
}

/// Dicyclic group of order `m = 4n`: index `k` is a^k, index `2n + k` is
/// x a^k, with a^(2n) = 1, x^2 = a^n and x a x^-1 = a^-1.
pub fn dicyclic(m: usize) -> Result<Group> {
    if m % 4 != 0 || m < 8 {
        return Err(Error::Parameter(format!(
            "dicyclic(m) needs m divisible by 4 and m >= 8, got {m}"
        )));
    }
    let n = m / 4;
    let h = 2 * n;
    Group::dense_from_fn(format!("dicyclic({m})"), m, vec![1, h], |a, b| {
        let (ea, ka) = (a / h, a % h);
        let (eb, kb) = (b / h, b % h);
        let k = if eb == 0 { ka + kb } else { h - ka + kb };
        if ea + eb == 2 {
            (k + n) % h
        } else {
            (ea + eb) * h + k % h
        }
    })
}

/// Symmetric (or alternating) group on `n` points. Elements are the image
/// vectors in lexicographic order; the product is composition
/// `(a * b)(i) = a(b(i))`.
pub fn symmetric(n: usize, alternating: bool) -> Result<Group> {
    let label = if alternating { "alt" } else { "sym" };
    if n == 0 {
        return Err(Error::Parameter(format!("{label}(n) needs n >= 1")));
    }
    if n > 6 {
        return Err(Error::Capacity(format!(
            "{label}({n}) exceeds the dense limit {DENSE_LIMIT}"
        )));
    }
    let mut perms = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        if !alternating || is_even(&p) {
            perms.push(p.clone());
        }
        if !util::next_permutation(&mut p) {
            break;
        }
    }
    let index: BTreeMap<Vec<usize>, usize> =
        perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let gen_perms: Vec<Vec<usize>> = if alternating {
        (2..n).map(|i| cycle(n, &[0, 1, i])).collect()
    } else if n >= 2 {
        vec![cycle(n, &[0, 1]), cycle(n, &(0..n).collect::<Vec<_>>())]
    } else {
        Vec::new()
    };
    let mut gens: Vec<usize> = gen_perms.iter().map(|p| index[p]).filter(|&g| g != 0).collect();
    gens.dedup();
    if gens.is_empty() {
        gens.push(0);
    }
    let order = perms.len();
    Group::dense_from_fn(format!("{label}({n})"), order, gens, |a, b| {
        let (pa, pb) = (&perms[a], &perms[b]);
        let c: Vec<usize> = (0..n).map(|i| pa[pb[i]]).collect();
        index[&c]
    })
}

fn cycle(n: usize, points: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for w in 0..points.len() {
        p[points[w]] = points[(w + 1) % points.len()];
    }
    p
}

fn is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn odd_prime(p: u64, family: &str) -> Result<usize> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Parameter(format!("{family}: {p} is not an odd prime")));
    }
    Ok(p as usize)
}

/// `<x, y, t | x^p = y^p = t^p = [x,y] = [x,t] = 1, t y t^-1 = x y>`.
/// Index `a + p b + p^2 c` is x^a y^b t^c.
pub fn heis(p: u64) -> Result<Group> {
    let p = odd_prime(p, "heis")?;
    let order = p * p * p;
    let split = move |v: usize| (v % p, (v / p) % p, v / (p * p));
    Group::dense_from_fn(format!("heis({p})"), order, vec![p, p * p], move |u, v| {
        let (a, b, c) = split(u);
        let (a2, b2, c2) = split(v);
        // t^c y^b2 = x^(c b2) y^b2 t^c
        let x = (a + a2 + c * b2) % p;
        x + p * ((b + b2) % p) + p * p * ((c + c2) % p)
    })
}

/// `<x, t | x^(p^2) = t^p = 1, t x t^-1 = x^(1+p)>`. Index `a + p^2 c` is
/// x^a t^c.
pub fn modmax(p: u64) -> Result<Group> {
    let p = odd_prime(p, "modmax")?;
    let q = p * p;
    let order = q * p;
    // (1+p)^c mod p^2 = 1 + c p
    Group::dense_from_fn(format!("modmax({p})"), order, vec![1, q], move |u, v| {
        let (a, c) = (u % q, u / q);
        let (d, f) = (v % q, v / q);
        let twisted = d * (1 + c * p) % q;
        (a + twisted) % q + q * ((c + f) % p)
    })
}
