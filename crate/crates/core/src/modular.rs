//! Exact modular arithmetic over `Z_n` for the equation `x1 + x2 = k*x3`.
//!
//! Everything here works on plain `u64` residues. Moduli are desk-scale, so
//! primality and factorization use trial division.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest modulus for which [`enumerate_triples`] materializes a list.
/// Above it, use the streaming [`triples`] iterator.
pub const MATERIALIZE_CAP: u64 = 4096;

/// The equation `x1 + x2 = k*x3` over `Z_n`, with `k` stored reduced mod `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicInstance {
    n: u64,
    k: u64,
}

impl CyclicInstance {
    /// Builds an instance from any integer coefficient; `k` is reduced into `[0, n)`.
    pub fn new(n: u64, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("modulus n must be at least 1"));
        }
        let k = k.rem_euclid(n as i64) as u64;
        Ok(Self { n, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// The same coefficient viewed in `Z_{n/m}`.
    pub fn quotient(&self, m: u64) -> Result<Self> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(invalid(format!("{m} does not divide n = {}", self.n)));
        }
        let n = self.n / m;
        Ok(Self { n, k: self.k % n })
    }

    fn check_residue(&self, x: u64) -> Result<()> {
        if x >= self.n {
            return Err(invalid(format!(
                "residue {x} out of range for Z_{}",
                self.n
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CyclicInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x1 + x2 = {}*x3 in Z_{}", self.k, self.n)
    }
}

/// A solution `(x1, x2, x3)`. Repeated coordinates are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub x1: u64,
    pub x2: u64,
    pub x3: u64,
}

impl Triple {
    pub fn new(x1: u64, x2: u64, x3: u64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn coords(&self) -> [u64; 3] {
        [self.x1, self.x2, self.x3]
    }

    fn holds_in(&self, inst: &CyclicInstance) -> bool {
        let n = inst.n as u128;
        (self.x1 as u128 + self.x2 as u128) % n == (inst.k as u128 * self.x3 as u128) % n
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x1, self.x2, self.x3)
    }
}

/// Canonical prime factorization: primes strictly increasing, exponents at least 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.0.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// Primes repeated by multiplicity, in increasing order.
    pub fn primes_with_multiplicity(&self) -> Vec<u64> {
        self.0
            .iter()
            .flat_map(|&(p, e)| std::iter::repeat_n(p, e as usize))
            .collect()
    }
}

/// `x3` values for each right-hand side residue, i.e. `buckets[s]` lists every
/// `x3` with `k*x3 = s`, ascending.
pub(crate) fn solutions_by_residue(inst: &CyclicInstance) -> Vec<Vec<u64>> {
    let n = inst.n;
    let mut buckets = vec![Vec::new(); n as usize];
    for x3 in 0..n {
        let s = ((inst.k as u128 * x3 as u128) % n as u128) as usize;
        buckets[s].push(x3);
    }
    buckets
}

/// Lexicographic stream over every triple of an instance.
pub struct TripleIter {
    n: u64,
    buckets: Vec<Vec<u64>>,
    x1: u64,
    x2: u64,
    slot: usize,
}

impl Iterator for TripleIter {
    type Item = Triple;

    fn next(&mut self) -> Option<Triple> {
        while self.x1 < self.n {
            let s = ((self.x1 + self.x2) % self.n) as usize;
            if let Some(&x3) = self.buckets[s].get(self.slot) {
                self.slot += 1;
                return Some(Triple::new(self.x1, self.x2, x3));
            }
            self.slot = 0;
            self.x2 += 1;
            if self.x2 == self.n {
                self.x2 = 0;
                self.x1 += 1;
            }
        }
        None
    }
}

/// Streams all triples of `inst` in lexicographic order.
pub fn triples(inst: &CyclicInstance) -> TripleIter {
    TripleIter {
        n: inst.n,
        buckets: solutions_by_residue(inst),
        x1: 0,
        x2: 0,
        slot: 0,
    }
}

/// All triples of `inst`, lexicographically ordered. Refuses moduli above
/// [`MATERIALIZE_CAP`]; stream those with [`triples`] instead.
pub fn enumerate_triples(inst: &CyclicInstance) -> Result<Vec<Triple>> {
    if inst.n > MATERIALIZE_CAP {
        return Err(invalid(format!(
            "Z_{} has {} triples; use the streaming iterator above n = {MATERIALIZE_CAP}",
            inst.n,
            inst.n as u128 * inst.n as u128
        )));
    }
    Ok(triples(inst).collect())
}

pub fn is_triple(inst: &CyclicInstance, x1: u64, x2: u64, x3: u64) -> Result<bool> {
    for x in [x1, x2, x3] {
        inst.check_residue(x)?;
    }
    Ok(Triple::new(x1, x2, x3).holds_in(inst))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

fn require_prime(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(invalid(format!("{q} is not prime")));
    }
    Ok(())
}

/// Smallest `e >= 1` with `a^e = 1 (mod q)`, for prime `q`.
pub fn multiplicative_order(a: u64, q: u64) -> Result<u64> {
    require_prime(q)?;
    let a = a % q;
    if a == 0 {
        return Err(invalid(format!("{a} is not a unit modulo {q}")));
    }
    let mut e = 1;
    let mut x = a;
    while x != 1 {
        x = mul_mod(x, a, q);
        e += 1;
    }
    Ok(e)
}

/// Whether `a` generates the multiplicative group `Z_q^*`.
pub fn generates_full_group(a: u64, q: u64) -> Result<bool> {
    Ok(multiplicative_order(a, q)? == q - 1)
}

/// Divides every coordinate of `t` by `m`, returning the triple together with
/// the quotient instance `Z_{n/m}` it lives in.
pub fn project_triple(
    t: &Triple,
    inst: &CyclicInstance,
    m: u64,
) -> Result<(CyclicInstance, Triple)> {
    let reduced = inst.quotient(m)?;
    if !t.holds_in(inst) {
        return Err(invalid(format!("{t} is not a triple of {inst}")));
    }
    if t.coords().iter().any(|x| x % m != 0) {
        return Err(invalid(format!(
            "{m} does not divide every coordinate of {t}"
        )));
    }
    Ok((reduced, Triple::new(t.x1 / m, t.x2 / m, t.x3 / m)))
}

/// How many coordinates of `t` are divisible by `q`.
pub fn divisibility_count(t: &Triple, q: u64) -> u8 {
    t.coords().iter().filter(|&&x| x % q == 0).count() as u8
}

pub fn prime_factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(invalid("cannot factor 0"));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= rest {
        let mut e = 0;
        while rest.is_multiple_of(d) {
            rest /= d;
            e += 1;
        }
        if e > 0 {
            factors.push((d, e));
        }
        d += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization(factors))
}

/// `S = -S` in `Z_q`.
pub fn is_symmetric_subset(s: &BTreeSet<u64>, q: u64) -> bool {
    s.iter().all(|&x| s.contains(&((q - x % q) % q)))
}

/// Whether `S ⊆ Z_q^*` is a union of cosets of `<k>`, i.e. `k*S = S`.
pub fn is_k_periodic_subset(s: &BTreeSet<u64>, k: u64, q: u64) -> Result<bool> {
    require_prime(q)?;
    if k.is_multiple_of(q) {
        return Err(invalid(format!("{k} is not coprime to {q}")));
    }
    if s.iter().any(|&x| x % q == 0) {
        return Err(invalid(
            "periodicity is defined on Z_q^*; the set contains 0",
        ));
    }
    // multiplication by a unit is injective, so k*S ⊆ S already gives equality
    Ok(s.iter().all(|&x| s.contains(&mul_mod(x % q, k, q))))
}
