//! Hamming-ball counting and general approximability bounds for function
//! families `M1 -> M2`.

use std::f64::consts::{E, LN_2};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::util::gcd;

/// Largest function space `m2^m1` the brute-force oracle accepts.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `(γ_k, ν_k)`: the number of functions at Hamming distance exactly `k`
/// from a fixed one, `C(m1,k) (m2-1)^k`, and at distance at most `k`.
pub fn circle_and_ball_sizes(m1: usize, m2: usize, k: usize) -> Result<(BigUint, BigUint)> {
    if k > m1 {
        return Err(Error::Argument(format!("k = {k} exceeds m1 = {m1}")));
    }
    let mut ball = BigUint::zero();
    let mut circle = BigUint::zero();
    for i in 0..=k {
        circle = circle_size(m1, m2, i);
        ball += &circle;
    }
    Ok((circle, ball))
}

fn circle_size(m1: usize, m2: usize, k: usize) -> BigUint {
    binomial(m1, k) * BigUint::from(m2.saturating_sub(1)).pow(k as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperBranch {
    /// `e^2 m1 / m2`.
    ESquared,
    /// `fval ln m2 + ln m1`.
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub m1: usize,
    pub m2: usize,
    pub fval: f64,
    /// `log_{m2} m1`.
    pub log_ratio: f64,
    /// `γ_0 ..= γ_{m1}` as decimal strings.
    pub gamma: Vec<String>,
    /// `ν_0 ..= ν_{m1}` as decimal strings.
    pub nu: Vec<String>,
    /// `max{1, m1/m2}` as a reduced fraction.
    pub lower_exact: String,
    pub lower: f64,
    pub upper: f64,
    pub upper_branch: UpperBranch,
}

/// Bounds for a family `F` of functions `M1 -> M2` with
/// `|F| <= m2^fval`: every function is approximated on at least
/// `max{1, m1/m2}` arguments when `F` holds the constants, and some function
/// on at most `max{e^2 m1/m2, fval ln m2 + ln m1}`.
pub fn gen_app_bounds(m1: usize, m2: usize, fval: f64) -> Result<BoundReport> {
    if m1 < 2 || m2 < 2 {
        return Err(Error::Parameter(format!("sets need at least 2 elements, got ({m1},{m2})")));
    }
    if !(fval > 0.0 && fval.is_finite()) {
        return Err(Error::Parameter(format!("fval must be positive, got {fval}")));
    }
    let mut gamma = Vec::with_capacity(m1 + 1);
    let mut nu = Vec::with_capacity(m1 + 1);
    let mut ball = BigUint::zero();
    for k in 0..=m1 {
        let c = circle_size(m1, m2, k);
        ball += &c;
        gamma.push(c.to_string());
        nu.push(ball.to_string());
    }
    let lower_exact = if m1 <= m2 {
        "1".to_string()
    } else {
        let d = gcd(m1, m2);
        if m2 / d == 1 {
            (m1 / d).to_string()
        } else {
            format!("{}/{}", m1 / d, m2 / d)
        }
    };
    let (x1, x2) = (m1 as f64, m2 as f64);
    let e_branch = E * E * x1 / x2;
    let log_branch = fval * x2.ln() + x1.ln();
    let (upper, upper_branch) = if e_branch >= log_branch {
        (e_branch, UpperBranch::ESquared)
    } else {
        (log_branch, UpperBranch::Logarithmic)
    };
    Ok(BoundReport {
        m1,
        m2,
        fval,
        log_ratio: x1.ln() / x2.ln(),
        gamma,
        nu,
        lower_exact,
        lower: (x1 / x2).max(1.0),
        upper,
        upper_branch,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTheoremBounds {
    pub n: usize,
    /// `(1/ln 2 + 1/ln n) ln^2 n`.
    pub endo: f64,
    /// `(1/ln 2 + 2/ln n) ln^2 n`.
    pub affine: f64,
}

/// Upper bounds on the worst-case endomorphic and affine approximability of
/// any group of order `n`.
pub fn main_theorem_bounds(n: usize) -> Result<MainTheoremBounds> {
    if n < 2 {
        return Err(Error::Parameter(format!("group order must be at least 2, got {n}")));
    }
    let l = (n as f64).ln();
    let bounds = MainTheoremBounds {
        n,
        endo: (1.0 / LN_2 + 1.0 / l) * l * l,
        affine: (1.0 / LN_2 + 2.0 / l) * l * l,
    };
    if n >= 8 {
        assert!(bounds.endo >= E * E, "bound below e^2 at n = {n}");
    }
    Ok(bounds)
}

fn check_instance(m1: usize, m2: usize, family: &[Vec<usize>]) -> Result<()> {
    let size = (m2 as u64).checked_pow(m1 as u32);
    if m2 == 0 || size.is_none_or(|s| s > BRUTE_FORCE_LIMIT) {
        return Err(Error::Capacity(format!(
            "{m2}^{m1} functions exceed the brute-force limit {BRUTE_FORCE_LIMIT}"
        )));
    }
    for f in family {
        if f.len() != m1 || f.iter().any(|&v| v >= m2) {
            return Err(Error::Argument("family member is not a function M1 -> M2".into()));
        }
    }
    Ok(())
}

/// `min_g max_{h in F} |{x : g(x) = h(x)}|` over all `g: M1 -> M2`, by
/// depth-first search that abandons `g` once some member already agrees on
/// as many arguments as the best `g` found so far. A value taken by no
/// member at `x` is never worse than any other, so it is the only one tried.
pub fn brute_force_app(m1: usize, m2: usize, family: &[Vec<usize>]) -> Result<usize> {
    check_instance(m1, m2, family)?;
    if family.is_empty() {
        return Ok(0);
    }
    let choices: Vec<Vec<Vec<usize>>> = (0..m1)
        .map(|x| {
            let mut buckets = vec![Vec::new(); m2];
            for (i, h) in family.iter().enumerate() {
                buckets[h[x]].push(i);
            }
            match buckets.iter().position(Vec::is_empty) {
                Some(_) => vec![Vec::new()],
                None => buckets,
            }
        })
        .collect();
    let mut counters = vec![0usize; family.len()];
    let mut best = m1;
    search(0, &choices, &mut counters, 0, &mut best);
    Ok(best)
}

fn search(x: usize, choices: &[Vec<Vec<usize>>], counters: &mut [usize], current: usize, best: &mut usize) {
    if current >= *best {
        return;
    }
    if x == choices.len() {
        *best = current;
        return;
    }
    for members in &choices[x] {
        let mut next = current;
        for &i in members {
            counters[i] += 1;
            next = next.max(counters[i]);
        }
        search(x + 1, choices, counters, next, best);
        for &i in members {
            counters[i] -= 1;
        }
    }
}

/// The same value by plain enumeration of every `g`.
pub fn brute_force_app_plain(m1: usize, m2: usize, family: &[Vec<usize>]) -> Result<usize> {
    check_instance(m1, m2, family)?;
    let total = m2.pow(m1 as u32);
    let mut g = vec![0usize; m1];
    let mut best = usize::MAX;
    for mut code in 0..total {
        for slot in g.iter_mut() {
            *slot = code % m2;
            code /= m2;
        }
        let app = family
            .iter()
            .map(|h| h.iter().zip(&g).filter(|(a, b)| a == b).count())
            .max()
            .unwrap_or(0);
        best = best.min(app);
    }
    Ok(best)
}

/// All `m2` constant functions on `m1` arguments.
pub fn constants(m1: usize, m2: usize) -> Vec<Vec<usize>> {
    (0..m2).map(|v| vec![v; m1]).collect()
}
