//! Modular arithmetic over `Z_N` and the integer-ring sieve.
//!
//! The sieve looks for elements of `Z_N^x` that can seed the second column of
//! an exponent matrix: type-I wants a cyclic subgroup of order `m - 1`,
//! type-II wants a root of `a^2 - a + 1 = 0 (mod N)` (equivalently
//! `a(1 - a) = 1 (mod N)`). Candidates are reported one representative per
//! subgroup, smallest generator first, so downstream search order is
//! deterministic.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest supported lifting degree; keeps products of two reduced elements
/// inside `u64`.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZringError {
    #[error("modulus must lie in [2, 2^31 - 1], got {0}")]
    BadModulus(u64),
    #[error("{a} is not a unit modulo {n}")]
    NotAUnit { a: u64, n: u64 },
    #[error("{a} is not an admissible type-{irs_type} generator for m = {m} modulo {n}")]
    NotAdmissible {
        a: u64,
        n: u64,
        m: usize,
        irs_type: IrsType,
    },
}

/// A lifting degree `N >= 2`. All ring elements are kept reduced to
/// `[0, N - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self, ZringError> {
        if !(2..=MAX_MODULUS).contains(&n) {
            return Err(ZringError::BadModulus(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u64 {
        x % self.0
    }

    /// Reduces a signed value into `[0, N - 1]`.
    #[inline]
    pub fn reduce_signed(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    /// Product of two reduced elements; both are `< 2^31` so this cannot
    /// overflow.
    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `base^exp mod N` by square-and-multiply.
pub fn pow_mod(base: u64, exp: u64, n: Modulus) -> u64 {
    let mut b = n.reduce(base);
    let mut e = exp;
    let mut acc = n.reduce(1);
    while e != 0 {
        if e & 1 == 1 {
            acc = n.mul(acc, b);
        }
        b = n.mul(b, b);
        e >>= 1;
    }
    acc
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Carmichael function: the exponent of `Z_N^x`. Every unit's order divides
/// this value.
fn carmichael(n: u64) -> u64 {
    let mut out = 1;
    for (p, e) in factorize(n) {
        let lam = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1 << (e - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1)
        };
        out = lcm(out, lam);
    }
    out
}

/// Smallest `t > 0` with `a^t = 1 (mod N)`.
///
/// Starts from the Carmichael exponent and divides out primes, so it is fast
/// enough to sweep every unit of every `N` up to 10^4 and beyond.
pub fn multiplicative_order(a: u64, n: Modulus) -> Result<u64, ZringError> {
    let a = n.reduce(a);
    if gcd(a, n.get()) != 1 {
        return Err(ZringError::NotAUnit { a, n: n.get() });
    }
    let mut order = carmichael(n.get());
    for (p, _) in factorize(order) {
        while order.is_multiple_of(p) && pow_mod(a, order / p, n) == 1 {
            order /= p;
        }
    }
    Ok(order)
}

/// The cyclic subgroup `{1, a, a^2, ...}` in generation order.
pub fn cyclic_subgroup(a: u64, n: Modulus) -> Result<Vec<u64>, ZringError> {
    let a = n.reduce(a);
    if gcd(a, n.get()) != 1 {
        return Err(ZringError::NotAUnit { a, n: n.get() });
    }
    let mut out = vec![1];
    let mut x = a;
    while x != 1 {
        out.push(x);
        x = n.mul(x, a);
    }
    Ok(out)
}

/// Checks `order(a) == t` for a small fixed `t` without computing the full
/// order: `a^t = 1` and `a^d != 1` for every proper divisor `d` of `t`.
fn has_order(a: u64, t: u64, n: Modulus) -> bool {
    if pow_mod(a, t, n) != 1 {
        return false;
    }
    for d in 1..t {
        if t.is_multiple_of(d) && pow_mod(a, d, n) == 1 {
            return false;
        }
    }
    true
}

/// Which of the two structured column constructions a generator serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IrsType {
    /// `a` has multiplicative order `m - 1`; serves any row count `m >= 4`.
    TypeI,
    /// `a(1 - a) = 1 (mod N)`; serves `m = 3` only.
    TypeII,
}

impl fmt::Display for IrsType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrsType::TypeI => write!(f, "I"),
            IrsType::TypeII => write!(f, "II"),
        }
    }
}

impl FromStr for IrsType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "i" | "1" => Ok(IrsType::TypeI),
            "II" | "ii" | "2" => Ok(IrsType::TypeII),
            other => Err(format!(
                "unknown structure type {other:?} (expected I or II)"
            )),
        }
    }
}

/// A sieve hit: a generator `a` admissible for the given structure type and
/// row count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IrsCandidate {
    modulus: Modulus,
    generator: u64,
    irs_type: IrsType,
    rows: usize,
}

impl IrsCandidate {
    pub fn new(
        modulus: Modulus,
        generator: u64,
        irs_type: IrsType,
        rows: usize,
    ) -> Result<Self, ZringError> {
        let a = modulus.reduce(generator);
        let n = modulus.get();
        let bad = || ZringError::NotAdmissible {
            a,
            n,
            m: rows,
            irs_type,
        };
        if gcd(a, n) != 1 {
            return Err(ZringError::NotAUnit { a, n });
        }
        match irs_type {
            IrsType::TypeI => {
                if rows < 3 || !has_order(a, rows as u64 - 1, modulus) {
                    return Err(bad());
                }
            }
            IrsType::TypeII => {
                let root = modulus.mul(a, modulus.sub(1, a)) == 1;
                if rows != 3 || n <= 3 || !root {
                    return Err(bad());
                }
            }
        }
        Ok(IrsCandidate {
            modulus,
            generator: a,
            irs_type,
            rows,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn irs_type(&self) -> IrsType {
        self.irs_type
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// The structured second column `(0, 1, a, a^2, ..., a^{m-2})`.
    pub fn base_column(&self) -> Vec<u64> {
        let mut col = Vec::with_capacity(self.rows);
        col.push(0);
        let mut x = 1;
        for _ in 1..self.rows {
            col.push(x);
            x = self.modulus.mul(x, self.generator);
        }
        col
    }

    /// The subgroup generated by `a`, in generation order.
    pub fn subgroup(&self) -> Vec<u64> {
        cyclic_subgroup(self.generator, self.modulus).expect("candidate generator is a unit")
    }
}

/// All type-I candidates for row count `m`: one representative (the smallest
/// generator) per distinct cyclic subgroup of order `m - 1`, ascending.
pub fn find_type1_generators(n: Modulus, m: usize) -> Vec<IrsCandidate> {
    assert!(m >= 3, "type-I structures need at least 3 rows");
    let t = m as u64 - 1;
    let mut seen: Vec<Vec<u64>> = Vec::new();
    let mut out = Vec::new();
    for a in 2..n.get() {
        if !has_order(a, t, n) {
            continue;
        }
        let mut subgroup = cyclic_subgroup(a, n).expect("finite order implies unit");
        subgroup.sort_unstable();
        if seen.contains(&subgroup) {
            continue;
        }
        seen.push(subgroup);
        out.push(IrsCandidate::new(n, a, IrsType::TypeI, m).expect("order checked"));
    }
    out
}

/// All type-II candidates: roots of `a^2 - a + 1 = 0 (mod N)` grouped by the
/// subgroup they generate, one representative (the smallest root) each,
/// ascending. Empty for `N <= 3`.
pub fn find_type2_generators(n: Modulus) -> Vec<IrsCandidate> {
    if n.get() <= 3 {
        return Vec::new();
    }
    let mut seen: Vec<Vec<u64>> = Vec::new();
    let mut out = Vec::new();
    for a in 2..n.get() {
        if n.mul(a, n.sub(1, a)) != 1 {
            continue;
        }
        let mut subgroup = cyclic_subgroup(a, n).expect("root of a unit equation");
        subgroup.sort_unstable();
        if seen.contains(&subgroup) {
            continue;
        }
        seen.push(subgroup);
        out.push(IrsCandidate::new(n, a, IrsType::TypeII, 3).expect("root checked"));
    }
    out
}
