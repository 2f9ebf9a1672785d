//! The Jonah-Konvisser groups `J_{p,λ}` of order `p^8`.
//!
//! `J_{p,λ}` is generated by `a1, a2, b1, b2` subject to
//! `a1^p = [a1,b1]`, `a2^p = [a1, b1^λ1 b2^λ2]`, `b1^p = [a2, b1 b2]`,
//! `b2^p = [a2,b2]`, `[a1,a2] = [b1,b2] = 1`, with all commutators central.
//! Every element has the normal form
//! `a1^k1 a2^k2 b1^l1 b2^l2 [a1,b1]^r1 [a1,b2]^r2 [a2,b1]^r3 [a2,b2]^r4`
//! with digits in `0..p`, and commutators are `[x,y] = x^-1 y^-1 x y`.
//!
//! Element indices are `sum digit_i * p^i` over the digit order
//! `(k1, k2, l1, l2, r1, r2, r3, r4)`, so the center (which equals the
//! derived subgroup) is exactly the multiples of `p^4`.
//!
//! The endomorphism classification used by [`endo_reachable`] is taken as
//! given: for `λ2 = 1` every endomorphism is either a homomorphism `φ` into
//! the center or `g -> g φ(g)` for such a `φ`.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Group, GroupFunction, GroupRule};
use crate::util::{is_prime, seeded_rng};

/// Largest order accepted when large primes are allowed.
pub const MAX_LARGE_ORDER: usize = 10_000_000;

/// Violations kept in a verification report before the scan stops.
pub const MAX_REPORTED_VIOLATIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct JkParams {
    p: u64,
    lambda: (u64, u64),
}

impl JkParams {
    pub fn new(p: u64, lambda1: u64, lambda2: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Parameter(format!("p = {p} is not an odd prime")));
        }
        let ok = (lambda1, lambda2) == (1, 0) || (lambda2 == 1 && lambda1 < p);
        if !ok {
            return Err(Error::Parameter(format!(
                "lambda = ({lambda1},{lambda2}) is not (1,0) or (l,1) with 0 <= l < p"
            )));
        }
        Ok(JkParams {
            p,
            lambda: (lambda1, lambda2),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> (u64, u64) {
        self.lambda
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(8)
    }

    fn p4(&self) -> usize {
        (self.p as usize).pow(4)
    }

    fn require_classified(&self) -> Result<()> {
        if self.lambda.1 == 1 {
            Ok(())
        } else {
            Err(Error::Scope(format!(
                "lambda = ({},{}) is outside the endomorphism classification (needs lambda2 = 1)",
                self.lambda.0, self.lambda.1
            )))
        }
    }

    /// Central value of the p-th power of each generator, in the order
    /// a1, a2, b1, b2.
    fn carries(&self) -> [[u64; 4]; 4] {
        let (l1, l2) = self.lambda;
        [[1, 0, 0, 0], [l1, l2, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]
    }
}

/// An octuple `(k1, k2, l1, l2, r1, r2, r3, r4)` in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct JkElement(pub [u64; 8]);

impl JkElement {
    pub const IDENTITY: JkElement = JkElement([0; 8]);

    pub fn decode(params: &JkParams, mut index: usize) -> JkElement {
        let p = params.p as usize;
        let mut d = [0u64; 8];
        for digit in &mut d {
            *digit = (index % p) as u64;
            index /= p;
        }
        JkElement(d)
    }

    pub fn encode(&self, params: &JkParams) -> usize {
        let p = params.p as usize;
        self.0.iter().rev().fold(0, |acc, &d| acc * p + d as usize)
    }

    /// The `(k1, k2, l1, l2)` part, i.e. the image in the Frattini quotient.
    pub fn head(&self) -> [u64; 4] {
        [self.0[0], self.0[1], self.0[2], self.0[3]]
    }

    /// The central `(r1, r2, r3, r4)` part.
    pub fn tail(&self) -> [u64; 4] {
        [self.0[4], self.0[5], self.0[6], self.0[7]]
    }

    pub fn from_parts(head: [u64; 4], tail: [u64; 4]) -> JkElement {
        JkElement([head[0], head[1], head[2], head[3], tail[0], tail[1], tail[2], tail[3]])
    }

    pub fn is_central(&self) -> bool {
        self.head() == [0; 4]
    }
}

impl fmt::Display for JkElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.0;
        write!(
            f,
            "({},{},{},{},{},{},{},{})",
            d[0], d[1], d[2], d[3], d[4], d[5], d[6], d[7]
        )
    }
}

/// Central contribution of moving the a-part of `y` past the b-part of `x`:
/// `-(l_i of x)(k_j of y)` on the `[a_j, b_i]` coordinate.
fn cross_term(p: u64, x: &JkElement, y: &JkElement) -> [u64; 4] {
    let mut r = [0u64; 4];
    for j in 0..2 {
        for i in 0..2 {
            let t = x.0[2 + i] * y.0[j] % p;
            r[j * 2 + i] = (p - t) % p;
        }
    }
    r
}

pub fn jk_multiply(params: &JkParams, x: &JkElement, y: &JkElement) -> JkElement {
    let p = params.p;
    let carries = params.carries();
    let mut out = [0u64; 8];
    let mut tail = [0u64; 4];
    for i in 0..4 {
        tail[i] = x.0[4 + i] + y.0[4 + i];
    }
    for i in 0..4 {
        let s = x.0[i] + y.0[i];
        if s >= p {
            for (t, c) in tail.iter_mut().zip(carries[i]) {
                *t += c;
            }
        }
        out[i] = s % p;
    }
    for (t, c) in tail.iter_mut().zip(cross_term(p, x, y)) {
        *t += c;
    }
    for i in 0..4 {
        out[4 + i] = tail[i] % p;
    }
    JkElement(out)
}

pub fn jk_inverse(params: &JkParams, x: &JkElement) -> JkElement {
    let p = params.p;
    let carries = params.carries();
    let head = x.head().map(|u| (p - u) % p);
    let y = JkElement::from_parts(head, [0; 4]);
    // x * y has trivial head; its tail is what y's tail must cancel.
    let mut tail = x.tail();
    for i in 0..4 {
        if x.0[i] != 0 {
            for (t, c) in tail.iter_mut().zip(carries[i]) {
                *t += c;
            }
        }
    }
    for (t, c) in tail.iter_mut().zip(cross_term(p, x, &y)) {
        *t += c;
    }
    JkElement::from_parts(head, tail.map(|t| (p - t % p) % p))
}

/// `x^e` by repeated multiplication.
pub fn jk_power(params: &JkParams, x: &JkElement, e: u64) -> JkElement {
    (0..e).fold(JkElement::IDENTITY, |acc, _| jk_multiply(params, &acc, x))
}

/// The p-th power of `x` in closed form: central with tail
/// `(k1 + λ1 k2, k2, l1, l1 + l2)`.
pub fn jk_power_formula(params: &JkParams, x: &JkElement) -> Result<JkElement> {
    params.require_classified()?;
    Ok(JkElement::from_parts([0; 4], power_tail(params, x.head())))
}

fn power_tail(params: &JkParams, h: [u64; 4]) -> [u64; 4] {
    let p = params.p;
    let [k1, k2, l1, l2] = h;
    [(k1 + params.lambda.0 * k2) % p, k2, l1, (l1 + l2) % p]
}

#[derive(Debug)]
struct JkRule {
    params: JkParams,
}

impl GroupRule for JkRule {
    fn order(&self) -> usize {
        self.params.order()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let x = JkElement::decode(&self.params, a);
        let y = JkElement::decode(&self.params, b);
        jk_multiply(&self.params, &x, &y).encode(&self.params)
    }

    fn inv(&self, a: usize) -> usize {
        jk_inverse(&self.params, &JkElement::decode(&self.params, a)).encode(&self.params)
    }

    fn center(&self) -> Option<Vec<usize>> {
        let p4 = self.params.p4();
        Some((0..p4).map(|r| r * p4).collect())
    }
}

/// The rule-based carrier for `J_{p,λ}` with generators `a1, a2, b1, b2`.
/// Primes above 3 need `allow_large`.
pub fn jk_group(params: &JkParams, allow_large: bool) -> Result<Group> {
    if params.p > 3 && !allow_large {
        return Err(Error::Capacity(format!(
            "jk group with p = {} has order {}; pass the large-group flag to allow it",
            params.p,
            (params.p as u128).pow(8)
        )));
    }
    if params.p > 3 && (params.p as u128).pow(8) > MAX_LARGE_ORDER as u128 {
        return Err(Error::Capacity(format!(
            "jk group with p = {} exceeds {MAX_LARGE_ORDER} elements",
            params.p
        )));
    }
    let p = params.p as usize;
    let (l1, l2) = params.lambda;
    Ok(Group::from_rule(
        format!("jk({},{},{})", params.p, l1, l2),
        Arc::new(JkRule { params: *params }),
        vec![1, p, p * p, p * p * p],
    ))
}

fn mat_mul(p: u64, a: &[[u64; 4]; 4], b: &[[u64; 4]; 4]) -> [[u64; 4]; 4] {
    let mut c = [[0u64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum::<u64>() % p;
        }
    }
    c
}

const IDENTITY_MATRIX: [[u64; 4]; 4] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn mat_pow(p: u64, a: &[[u64; 4]; 4], mut e: u64) -> [[u64; 4]; 4] {
    let mut result = IDENTITY_MATRIX;
    let mut base = *a;
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(p, &result, &base);
        }
        base = mat_mul(p, &base, &base);
        e >>= 1;
    }
    result
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) for prime p.
    let mut result = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Determinant over `F_p` by Gaussian elimination.
pub fn det_mod(p: u64, m: &[[u64; 4]; 4]) -> u64 {
    let mut a = m.map(|row| row.map(|v| v % p));
    let mut det = 1u64;
    for col in 0..4 {
        let Some(pivot) = (col..4).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            a.swap(pivot, col);
            det = (p - det) % p;
        }
        det = det * a[col][col] % p;
        let inv = inv_mod(a[col][col], p);
        for r in col + 1..4 {
            let factor = a[r][col] * inv % p;
            for c in col..4 {
                a[r][c] = (a[r][c] + p * p - factor * a[col][c] % p) % p;
            }
        }
    }
    det
}

fn apply_matrix(p: u64, m: &[[u64; 4]; 4], v: [u64; 4]) -> [u64; 4] {
    let mut out = [0u64; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|j| m[i][j] * v[j]).sum::<u64>() % p;
    }
    out
}

/// An invertible linear map of `F_p^4` without nonzero fixed vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaMap {
    p: u64,
    matrix: [[u64; 4]; 4],
}

impl SigmaMap {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn matrix(&self) -> &[[u64; 4]; 4] {
        &self.matrix
    }

    pub fn apply(&self, v: [u64; 4]) -> [u64; 4] {
        apply_matrix(self.p, &self.matrix, v)
    }

    /// Multiplicative order of the matrix.
    pub fn order(&self) -> u64 {
        let mut m = self.matrix;
        let mut k = 1;
        while m != IDENTITY_MATRIX {
            m = mat_mul(self.p, &m, &self.matrix);
            k += 1;
        }
        k
    }
}

pub fn make_sigma(p: u64, matrix: [[u64; 4]; 4]) -> Result<SigmaMap> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    let matrix = matrix.map(|row| row.map(|v| v % p));
    if det_mod(p, &matrix) == 0 {
        return Err(Error::Argument("sigma is not invertible".into()));
    }
    let mut shifted = matrix;
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] = (row[i] + p - 1) % p;
    }
    if det_mod(p, &shifted) == 0 {
        return Err(Error::Argument("sigma is not fixed-point free".into()));
    }
    Ok(SigmaMap { p, matrix })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Companion matrix of the first primitive polynomial
/// `x^4 + c3 x^3 + c2 x^2 + c1 x + c0` in lexicographic order of
/// `(c0, c1, c2, c3)`; it acts as a Singer cycle of order `p^4 - 1`.
pub fn singer_sigma(p: u64) -> Result<SigmaMap> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    let target = p.pow(4) - 1;
    let factors = prime_factors(target);
    for code in 0..p.pow(4) {
        let c = [code % p, code / p % p, code / (p * p) % p, code / (p * p * p)];
        if c[0] == 0 {
            continue;
        }
        let mut m = [[0u64; 4]; 4];
        for i in 0..3 {
            m[i + 1][i] = 1;
        }
        for (i, ci) in c.iter().enumerate() {
            m[i][3] = (p - ci) % p;
        }
        let primitive = mat_pow(p, &m, target) == IDENTITY_MATRIX
            && factors.iter().all(|&q| mat_pow(p, &m, target / q) != IDENTITY_MATRIX);
        if primitive {
            return make_sigma(p, m);
        }
    }
    unreachable!("primitive polynomials exist over every prime field")
}

/// Images of `x -> (σ(k1,k2,l1,l2) | σ(r))` for an arbitrary matrix, used
/// as given without validation.
pub fn final_prop_images(params: &JkParams, matrix: &[[u64; 4]; 4]) -> Vec<usize> {
    let p = params.p;
    (0..params.order())
        .map(|i| {
            let x = JkElement::decode(params, i);
            JkElement::from_parts(apply_matrix(p, matrix, x.head()), apply_matrix(p, matrix, x.tail()))
                .encode(params)
        })
        .collect()
}

/// The bijection `(k, l | r) -> (σ(k, l) | σ(r))` on `group`, which must be
/// the carrier of `params`.
pub fn final_prop_function(group: &Group, params: &JkParams, sigma: &SigmaMap) -> Result<GroupFunction> {
    params.require_classified()?;
    if sigma.p != params.p {
        return Err(Error::Argument(format!(
            "sigma is over F_{} but the group has p = {}",
            sigma.p, params.p
        )));
    }
    if group.order() != params.order() {
        return Err(Error::Argument("group does not match the jk parameters".into()));
    }
    GroupFunction::new(group, final_prop_images(params, &sigma.matrix))
}

/// Whether some endomorphism maps `d` to `e`, according to the
/// classification of endomorphisms.
pub fn endo_reachable(params: &JkParams, d: &JkElement, e: &JkElement) -> Result<bool> {
    params.require_classified()?;
    Ok(reachable(d, e))
}

fn reachable(d: &JkElement, e: &JkElement) -> bool {
    if *d == JkElement::IDENTITY {
        *e == JkElement::IDENTITY
    } else if d.is_central() {
        *e == JkElement::IDENTITY || e == d
    } else {
        e.is_central() || e.head() == d.head()
    }
}

fn reachable_idx(p4: usize, d: usize, e: usize) -> bool {
    if d == 0 {
        e == 0
    } else if d % p4 == 0 {
        e == 0 || e == d
    } else {
        e % p4 == 0 || e % p4 == d % p4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum VerifyMode {
    Full,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: JkElement,
    pub y: JkElement,
    /// `y^-1 x`.
    pub d: JkElement,
    /// `f(y)^-1 f(x)`.
    pub e: JkElement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub params: JkParams,
    pub mode: VerifyMode,
    pub pairs_scanned: u64,
    pub violation_count: u64,
    /// At most [`MAX_REPORTED_VIOLATIONS`], sorted by `(x, y)` index.
    pub violations: Vec<Violation>,
    /// True when the scan stopped early after enough violations.
    pub truncated: bool,
    pub duration_ms: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks that no two distinct elements `x, y` have `y^-1 x` mapped to
/// `f(y)^-1 f(x)` by an endomorphism. Success means `f` agrees with every
/// affine map in at most one argument.
pub fn verify_affapp_one(params: &JkParams, f: &GroupFunction, mode: VerifyMode) -> Result<VerifyReport> {
    params.require_classified()?;
    let group = f.group();
    let n = params.order();
    if group.order() != n {
        return Err(Error::Argument("function is not on the jk group of these parameters".into()));
    }
    let start = Instant::now();
    let p4 = params.p4();
    let elems: Vec<JkElement> = (0..n).map(|i| JkElement::decode(params, i)).collect();
    let inverses: Vec<JkElement> = elems.iter().map(|x| jk_inverse(params, x)).collect();
    let images = f.images();
    let found: Mutex<Vec<(usize, usize)>> = Mutex::new(Vec::new());
    let count = AtomicU64::new(0);
    let scanned = AtomicU64::new(0);
    let stop = AtomicBool::new(false);

    let check = |x: usize, y: usize| -> bool {
        let d = jk_multiply(params, &inverses[y], &elems[x]).encode(params);
        let e = jk_multiply(params, &inverses[images[y]], &elems[images[x]]).encode(params);
        reachable_idx(p4, d, e)
    };
    let record = |x: usize, y: usize| {
        let c = count.fetch_add(1, Ordering::Relaxed) + 1;
        let mut list = found.lock().expect("violation list");
        if list.len() < MAX_REPORTED_VIOLATIONS {
            list.push((x, y));
        }
        if c >= MAX_REPORTED_VIOLATIONS as u64 {
            stop.store(true, Ordering::Relaxed);
        }
    };

    match mode {
        VerifyMode::Full => {
            (0..n).into_par_iter().for_each(|y| {
                if stop.load(Ordering::Relaxed) {
                    return;
                }
                for x in 0..n {
                    if x != y && check(x, y) {
                        record(x, y);
                    }
                }
                scanned.fetch_add(n as u64 - 1, Ordering::Relaxed);
            });
        }
        VerifyMode::Sampled { samples, seed } => {
            const CHUNK: u64 = 1 << 14;
            let chunks = samples.div_ceil(CHUNK);
            (0..chunks).into_par_iter().for_each(|c| {
                if stop.load(Ordering::Relaxed) {
                    return;
                }
                let mut rng = seeded_rng(seed ^ c.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let todo = CHUNK.min(samples - c * CHUNK);
                for _ in 0..todo {
                    let x = rng.gen_range(0..n);
                    let mut y = rng.gen_range(0..n - 1);
                    if y >= x {
                        y += 1;
                    }
                    if check(x, y) {
                        record(x, y);
                    }
                }
                scanned.fetch_add(todo, Ordering::Relaxed);
            });
        }
    }

    let mut pairs = found.into_inner().expect("violation list");
    pairs.sort_unstable();
    pairs.dedup();
    let violations = pairs
        .into_iter()
        .map(|(x, y)| Violation {
            x: elems[x],
            y: elems[y],
            d: jk_multiply(params, &inverses[y], &elems[x]),
            e: jk_multiply(params, &inverses[images[y]], &elems[images[x]]),
        })
        .collect();
    Ok(VerifyReport {
        params: *params,
        mode,
        pairs_scanned: scanned.load(Ordering::Relaxed),
        violation_count: count.load(Ordering::Relaxed),
        violations,
        truncated: stop.load(Ordering::Relaxed),
        duration_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// A function that no endomorphism agrees with anywhere.
pub fn jk_enapp_zero_witness(group: &Group, params: &JkParams) -> Result<GroupFunction> {
    params.require_classified()?;
    let n = params.order();
    if group.order() != n {
        return Err(Error::Argument("group does not match the jk parameters".into()));
    }
    let p4 = params.p4();
    let images = (0..n)
        .map(|g| {
            if g == 0 {
                1
            } else if g % p4 == 0 {
                if g == p4 {
                    2 * p4
                } else {
                    p4
                }
            } else if g % p4 == 1 {
                2
            } else {
                1
            }
        })
        .collect();
    GroupFunction::new(group, images)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub samples: u64,
    pub failures: u64,
}

/// Draws random linear maps `ψ` from the Frattini quotient to the center and
/// random pairs, and checks that both `φ = ψ ∘ π` and `g -> g φ(g)` are
/// multiplicative on them.
pub fn sample_check_classification(params: &JkParams, samples: u64, seed: u64) -> Result<ClassificationReport> {
    params.require_classified()?;
    let p = params.p;
    let n = params.order();
    const CHUNK: u64 = 1 << 12;
    let failures = AtomicU64::new(0);
    (0..samples.div_ceil(CHUNK)).into_par_iter().for_each(|c| {
        let mut rng = seeded_rng(seed ^ c.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let todo = CHUNK.min(samples - c * CHUNK);
        for _ in 0..todo {
            let mut psi = [[0u64; 4]; 4];
            for v in psi.iter_mut().flatten() {
                *v = rng.gen_range(0..p);
            }
            let x = JkElement::decode(params, rng.gen_range(0..n));
            let y = JkElement::decode(params, rng.gen_range(0..n));
            let phi = |g: &JkElement| JkElement::from_parts([0; 4], apply_matrix(p, &psi, g.head()));
            let central = |g: &JkElement| jk_multiply(params, g, &phi(g));
            let xy = jk_multiply(params, &x, &y);
            let ok = phi(&xy) == jk_multiply(params, &phi(&x), &phi(&y))
                && central(&xy) == jk_multiply(params, &central(&x), &central(&y));
            if !ok {
                failures.fetch_add(1, Ordering::Relaxed);
            }
        }
    });
    Ok(ClassificationReport {
        samples,
        failures: failures.into_inner(),
    })
}
