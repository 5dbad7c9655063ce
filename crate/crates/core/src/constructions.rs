//! Builders for rainbow-free colorings that realize the lower bounds.
//!
//! Every builder checks its output for rainbow triples before returning it.

use std::sync::OnceLock;

use crate::certificate::Certificate;
use crate::coloring::{find_rainbow_triple, ColorId, Coloring};
use crate::error::{invalid, Error, Result};
use crate::formulas::{rb_q_p, TWO_POWER_ORACLE_MAX_ALPHA};
use crate::modular::{is_prime, mul_mod, prime_factorize, CyclicInstance};
use crate::search::{max_rainbow_free_r, SearchConfig};

/// Rainbow-free exact 3-coloring of `Z_9` for `k = 3`, found by exhaustive
/// search (lexicographically least canonical witness).
const Z9_K3_CERTIFICATE: &str = include_str!("../data/z9_k3.json");

fn verified(construction: &'static str, c: Coloring, k: i64) -> Result<Coloring> {
    match find_rainbow_triple(&c, k) {
        None => Ok(c),
        Some(triple) => Err(Error::Unverified {
            construction,
            triple,
        }),
    }
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// Checks a lift base: exact ids `0..r` and rainbow-free. Returns `r`.
fn check_base(base: &Coloring, k: i64) -> Result<ColorId> {
    if !base.is_exact() {
        return Err(invalid("base coloring must use exactly the color ids 0..r"));
    }
    if let Some(t) = find_rainbow_triple(base, k) {
        return Err(invalid(format!("base coloring has rainbow triple {t}")));
    }
    Ok(base.num_colors() as ColorId)
}

/// `Z_p`, `k = 1`, `p >= 5`: `{0}`, `{1, p-1}`, and everything else.
pub fn witness_schur_prime(p: u64) -> Result<Coloring> {
    require_prime(p)?;
    if p < 5 {
        return Err(invalid(format!(
            "Z_{p} has no rainbow-free exact 3-coloring for k = 1"
        )));
    }
    let c = Coloring::from_fn(p, |x| match x {
        0 => 0,
        x if x == 1 || x == p - 1 => 1,
        _ => 2,
    })?;
    verified("witness_schur_prime", c, 1)
}

/// Lifts a rainbow-free coloring of `Z_t` (k = 1) to `Z_{pt}`: multiples of
/// `p` copy the base, `x = ±1 mod p` get one fresh color and the remaining
/// residues another.
pub fn lift_schur(base: &Coloring, p: u64) -> Result<Coloring> {
    require_prime(p)?;
    let r = check_base(base, 1)?;
    let c = Coloring::from_fn(p * base.n(), |x| match x % p {
        0 => base.color(x / p),
        m if m == 1 || m == p - 1 => r,
        _ => r + 1,
    })?;
    verified("lift_schur", c, 1)
}

/// Rainbow-free coloring of `Z_n` for `k = 1` with `rb(Z_n, 1) - 1` colors.
pub fn witness_schur(n: u64) -> Result<Coloring> {
    if n < 2 {
        return Err(invalid(format!("witness_schur needs n >= 2, got {n}")));
    }
    let primes = prime_factorize(n)?.primes_with_multiplicity();
    let (&first, rest) = primes.split_first().expect("n >= 2 has a prime factor");
    let mut c = if first >= 5 {
        witness_schur_prime(first)?
    } else {
        Coloring::from_fn(first, |x| u32::from(x != 0))?
    };
    for &p in rest {
        c = lift_schur(&c, p)?;
    }
    Ok(c)
}

/// `Z_p`, `k = p`: `c(x) = min(x, p - x)`.
pub fn witness_k_equals_p(p: u64) -> Result<Coloring> {
    require_prime(p)?;
    if p == 2 {
        return Err(invalid("witness_k_equals_p needs an odd prime"));
    }
    let c = Coloring::from_fn(p, |x| x.min(p - x) as ColorId)?;
    verified("witness_k_equals_p", c, p as i64)
}

/// `{±p^i}` as a sorted membership table over `Z_q`.
fn signed_orbit(q: u64, p: u64) -> Vec<bool> {
    let mut member = vec![false; q as usize];
    let mut x = 1;
    loop {
        member[x as usize] = true;
        member[(q - x) as usize] = true;
        x = mul_mod(x, p, q);
        if x == 1 {
            break;
        }
    }
    member
}

/// `Z_q`, `k = p`: `{0}`, the orbit `{±p^i}`, and the rest of `Z_q^*`.
/// Only exists when the rest is nonempty, i.e. when `rb(Z_q, p) = 4`.
pub fn witness_q_p(q: u64, p: u64) -> Result<Coloring> {
    let rb = rb_q_p(q, p)?;
    if rb.value != 4 {
        return Err(invalid(format!(
            "±<{p}> covers Z_{q}^* ({}), so there is no third class",
            rb.explain()
        )));
    }
    let orbit = signed_orbit(q, p % q);
    let c = Coloring::from_fn(q, |x| match x {
        0 => 0,
        x if orbit[x as usize] => 1,
        _ => 2,
    })?;
    verified("witness_q_p", c, p as i64)
}

/// The cached `Z_9`, `k = 3` witness.
pub fn z9_k3_witness() -> &'static Coloring {
    static CELL: OnceLock<Coloring> = OnceLock::new();
    CELL.get_or_init(|| {
        Certificate::parse(Z9_K3_CERTIFICATE)
            .and_then(|c| c.coloring())
            .expect("bundled Z_9 certificate is valid")
    })
}

/// `Z_{p^a}`, `k = p`, for odd `p`.
pub fn witness_prime_power(p: u64, alpha: u32) -> Result<Coloring> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::Unsupported(
            "no prime-power construction for p = 2; use the search".into(),
        ));
    }
    if alpha == 0 {
        return Err(invalid("prime power exponent must be at least 1"));
    }
    let n = p
        .checked_pow(alpha)
        .ok_or_else(|| invalid("prime power overflows"))?;
    let c = match (p, alpha) {
        (3, 1) => Coloring::new(vec![0, 1, 1])?,
        (3, _) => {
            let w = z9_k3_witness();
            Coloring::from_fn(n, |x| w.color(x % 9))?
        }
        _ => Coloring::from_fn(n, |x| {
            let m = x % p;
            m.min(p - m) as ColorId
        })?,
    };
    verified("witness_prime_power", c, p as i64)
}

/// A maximum rainbow-free coloring of `Z_q` (for `k = p`) with `{0}` as a
/// class and every class symmetric.
pub fn max_coloring_q_symmetric(q: u64, p: u64) -> Result<Coloring> {
    if rb_q_p(q, p)?.value == 4 {
        witness_q_p(q, p)
    } else {
        let c = Coloring::from_fn(q, |x| u32::from(x != 0))?;
        verified("max_coloring_q_symmetric", c, p as i64)
    }
}

/// Lifts a rainbow-free coloring of `Z_t` (k = p) to `Z_{qt}` for a prime
/// `q != p`: multiples of `q` copy the base, the rest take fresh colors from
/// a symmetric maximum coloring of `Z_q`.
pub fn lift_general(base: &Coloring, p: u64, q: u64) -> Result<Coloring> {
    require_prime(p)?;
    require_prime(q)?;
    if p == q {
        return Err(invalid("lift_general needs q != p"));
    }
    let r = check_base(base, p as i64)?;
    // the class of 0 in `m` is never used off the multiples of q; shift the rest down to r..
    let m = max_coloring_q_symmetric(q, p)?;
    let c = Coloring::from_fn(q * base.n(), |x| match x % q {
        0 => base.color(x / q),
        res => r + m.color(res) - 1,
    })?;
    verified("lift_general", c, p as i64)
}

fn two_power_base(alpha: u32) -> Result<Coloring> {
    if alpha > TWO_POWER_ORACLE_MAX_ALPHA {
        return Err(Error::Unsupported(format!(
            "no construction for Z_{}, k = 2",
            1u64 << alpha
        )));
    }
    let inst = CyclicInstance::new(1 << alpha, 2)?;
    let out = max_rainbow_free_r(&inst, &SearchConfig::default())?;
    if !out.is_exact() {
        return Err(Error::Unsupported(format!(
            "search for Z_{}, k = 2 did not finish",
            1u64 << alpha
        )));
    }
    Ok(out.witness)
}

/// Rainbow-free coloring of `Z_n` for `k = p` with `rb(Z_n, p) - 1` colors:
/// the `p`-power part first, then one lift per remaining prime factor.
pub fn witness_general(n: u64, p: u64) -> Result<Coloring> {
    require_prime(p)?;
    if n < 2 {
        return Err(invalid(format!("witness_general needs n >= 2, got {n}")));
    }
    let fact = prime_factorize(n)?;
    let alpha = fact.exponent_of(p);
    let mut c = match (alpha, p) {
        (0, _) => Coloring::new(vec![0])?,
        (_, 2) => two_power_base(alpha)?,
        _ => witness_prime_power(p, alpha)?,
    };
    for q in fact.primes_with_multiplicity() {
        if q != p {
            c = lift_general(&c, p, q)?;
        }
    }
    verified("witness_general", c, p as i64)
}
