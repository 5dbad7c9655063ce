//! Closed-form rainbow numbers.
//!
//! * `k = 1`: `rb(Z_p, 1)` is 3 for `p` in {2, 3} and 4 otherwise, and
//!   `rb(Z_n, 1) = 2 + sum_i a_i * (rb(Z_{p_i}, 1) - 2)` over `n = prod p_i^a_i`.
//! * `k = p` prime: `rb(Z_n, p) = rb(Z_{p^a}, p) + sum_i a_i * (rb(Z_{q_i}, p) - 2)`
//!   over `n = p^a * prod q_i^a_i`, with the first term read as 2 when `a = 0`.
//!   The prime-power term for `p = 2` is not known in closed form here and
//!   comes from a [`TwoPowerTable`].

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::modular::{is_prime, multiplicative_order, prime_factorize, CyclicInstance};
use crate::search::{rb_oracle, OracleVerdict, SearchConfig, SearchOutcome};

/// How a rainbow number was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FormulaSchurPrime,
    FormulaSchurFactorization,
    FormulaQP,
    FormulaPrimePower,
    FormulaGeneralRecursion,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::FormulaSchurPrime => "schur-prime",
            Method::FormulaSchurFactorization => "schur-factorization",
            Method::FormulaQP => "cross-prime",
            Method::FormulaPrimePower => "prime-power",
            Method::FormulaGeneralRecursion => "general-recursion",
            Method::Oracle => "oracle",
        };
        f.write_str(s)
    }
}

/// One prime's share of a factorization formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub prime: u64,
    pub exponent: u32,
    /// Rainbow number of the single-prime piece this term is built from.
    pub component_rb: u64,
    /// Amount added to the running total.
    pub added: u64,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub r_max: u32,
    pub nodes_explored: u64,
    pub elapsed_ms: u128,
    pub exhausted: bool,
}

impl SearchStats {
    pub fn from_outcome(o: &SearchOutcome) -> Self {
        Self {
            r_max: o.r_max,
            nodes_explored: o.nodes_explored,
            elapsed_ms: o.elapsed.as_millis(),
            exhausted: o.exhausted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Detail {
    /// Base value plus per-prime contributions.
    Components {
        base: u64,
        terms: Vec<Contribution>,
    },
    Search(SearchStats),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbResult {
    pub value: u64,
    pub method: Method,
    pub detail: Detail,
}

impl RbResult {
    fn single(value: u64, method: Method, prime: u64, exponent: u32, source: &str) -> Self {
        Self {
            value,
            method,
            detail: Detail::Components {
                base: 0,
                terms: vec![Contribution {
                    prime,
                    exponent,
                    component_rb: value,
                    added: value,
                    source: source.to_owned(),
                }],
            },
        }
    }

    /// Human-readable breakdown such as `2 + 2*(3-2) + 1*(3-2)`.
    pub fn explain(&self) -> String {
        match &self.detail {
            Detail::Components { base, terms } => {
                let mut parts = Vec::new();
                if *base > 0 {
                    parts.push(base.to_string());
                }
                for (i, t) in terms.iter().enumerate() {
                    if i == 0 && *base == 0 {
                        parts.push(format!("{} [{}]", t.added, t.source));
                    } else {
                        parts.push(format!("{}*({}-2)", t.exponent, t.component_rb));
                    }
                }
                parts.join(" + ")
            }
            Detail::Search(s) => format!(
                "r_max={} nodes={} elapsed_ms={}",
                s.r_max, s.nodes_explored, s.elapsed_ms
            ),
        }
    }
}

fn require_prime(p: u64, what: &str) -> Result<()> {
    if !is_prime(p) {
        return Err(invalid(format!("{what} = {p} is not prime")));
    }
    Ok(())
}

/// `rb(Z_p, 1)` for prime `p`.
pub fn rb_schur_prime(p: u64) -> Result<RbResult> {
    require_prime(p, "p")?;
    let value = if p <= 3 { 3 } else { 4 };
    Ok(RbResult::single(
        value,
        Method::FormulaSchurPrime,
        p,
        1,
        "schur-prime",
    ))
}

/// `rb(Z_n, 1) = 2 + sum a_i * (rb(Z_{p_i}, 1) - 2)`.
pub fn rb_schur(n: u64) -> Result<RbResult> {
    if n < 2 {
        return Err(invalid(format!("rb(Z_n, 1) needs n >= 2, got {n}")));
    }
    let mut value = 2;
    let mut terms = Vec::new();
    for &(p, e) in prime_factorize(n)?.factors() {
        let component = rb_schur_prime(p)?.value;
        let added = e as u64 * (component - 2);
        value += added;
        terms.push(Contribution {
            prime: p,
            exponent: e,
            component_rb: component,
            added,
            source: "schur-prime".into(),
        });
    }
    Ok(RbResult {
        value,
        method: Method::FormulaSchurFactorization,
        detail: Detail::Components { base: 2, terms },
    })
}

/// `rb(Z_q, p)` for distinct primes: 3 when `p` generates `Z_q^*`, or when its
/// order is `(q-1)/2` and that is odd; 4 otherwise.
pub fn rb_q_p(q: u64, p: u64) -> Result<RbResult> {
    require_prime(q, "q")?;
    require_prime(p, "p")?;
    if p == q {
        return Err(invalid(format!(
            "rb_q_p needs distinct primes, got p = q = {p}"
        )));
    }
    let order = multiplicative_order(p % q, q)?;
    let half = (q - 1) / 2;
    let generator = order == q - 1;
    let odd_half = order == half && half % 2 == 1;
    let value = if generator || odd_half { 3 } else { 4 };
    let source = if generator {
        format!("ord_{q}({p}) = {order} generates")
    } else if odd_half {
        format!("ord_{q}({p}) = {order} = (q-1)/2, odd")
    } else {
        format!("ord_{q}({p}) = {order}")
    };
    Ok(RbResult::single(value, Method::FormulaQP, q, 1, &source))
}

/// `rb(Z_{p^a}, p)` for an odd prime `p` and `a >= 1`.
pub fn rb_prime_power(p: u64, alpha: u32) -> Result<RbResult> {
    require_prime(p, "p")?;
    if p == 2 {
        return Err(Error::Unsupported(
            "rb(Z_{2^a}, 2) has no closed form here; supply a two-power table".into(),
        ));
    }
    if alpha == 0 {
        return Err(invalid("prime power exponent must be at least 1"));
    }
    let value = match (p, alpha) {
        (3, 1) => 3,
        (3, _) => 4,
        _ => p.div_ceil(2) + 1,
    };
    Ok(RbResult::single(
        value,
        Method::FormulaPrimePower,
        p,
        alpha,
        "prime-power",
    ))
}

/// Values of `rb(Z_{2^a}, 2)` keyed by `a`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoPowerTable {
    values: BTreeMap<u32, u64>,
    source: String,
}

/// Largest exponent the search fallback will attempt.
pub const TWO_POWER_ORACLE_MAX_ALPHA: u32 = 4;

impl TwoPowerTable {
    pub fn new(values: BTreeMap<u32, u64>, source: impl Into<String>) -> Result<Self> {
        for (&alpha, &v) in &values {
            if alpha == 0 || alpha > 62 {
                return Err(Error::Config(format!("exponent {alpha} out of range")));
            }
            let upper = (1u64 << alpha) + 1;
            if !(2..=upper).contains(&v) {
                return Err(Error::Config(format!(
                    "rb(Z_{{2^{alpha}}}, 2) = {v} outside [2, {upper}]"
                )));
            }
        }
        Ok(Self {
            values,
            source: source.into(),
        })
    }

    /// Parses a JSON object mapping exponents (as strings) to values, e.g. `{"1": 3, "2": 4}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BTreeMap<String, u64> = serde_json::from_str(text)?;
        let mut values = BTreeMap::new();
        for (key, v) in raw {
            let alpha: u32 = key
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("table key `{key}` is not an exponent")))?;
            values.insert(alpha, v);
        }
        Self::new(values, "table")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut table = Self::from_json(&text)?;
        table.source = format!("table {}", path.display());
        Ok(table)
    }

    /// Fills the table by exhaustive search for `a <= max_alpha`.
    pub fn from_oracle(max_alpha: u32, cfg: &SearchConfig) -> Result<Self> {
        if max_alpha > TWO_POWER_ORACLE_MAX_ALPHA {
            return Err(Error::Config(format!(
                "search fallback only covers exponents up to {TWO_POWER_ORACLE_MAX_ALPHA}"
            )));
        }
        let mut values = BTreeMap::new();
        for alpha in 1..=max_alpha {
            let inst = CyclicInstance::new(1 << alpha, 2)?;
            match rb_oracle(&inst, cfg)? {
                OracleVerdict::Exact { result, .. } => {
                    values.insert(alpha, result.value);
                }
                OracleVerdict::Inconclusive { .. } => {
                    return Err(Error::Config(format!(
                        "search for rb(Z_{}, 2) ran out of budget",
                        1u64 << alpha
                    )))
                }
            }
        }
        Self::new(values, "search")
    }

    pub fn get(&self, alpha: u32) -> Option<u64> {
        self.values.get(&alpha).copied()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// `rb(Z_n, p)` for prime `p` via the factorization recursion.
pub fn rb_general(n: u64, p: u64, two_powers: Option<&TwoPowerTable>) -> Result<RbResult> {
    require_prime(p, "p")?;
    if n < 2 {
        return Err(invalid(format!("rb(Z_n, p) needs n >= 2, got {n}")));
    }
    let fact = prime_factorize(n)?;
    let alpha = fact.exponent_of(p);
    let mut terms = Vec::new();
    let base = if alpha == 0 {
        2
    } else if p == 2 {
        let table = two_powers.ok_or_else(|| {
            Error::Config(format!(
                "rb(Z_{}, 2) needs a two-power table for exponent {alpha}",
                1u64 << alpha
            ))
        })?;
        let v = table.get(alpha).ok_or_else(|| {
            Error::Config(format!("two-power table has no entry for exponent {alpha}"))
        })?;
        terms.push(Contribution {
            prime: 2,
            exponent: alpha,
            component_rb: v,
            added: v,
            source: table.source().to_owned(),
        });
        v
    } else {
        let v = rb_prime_power(p, alpha)?.value;
        terms.push(Contribution {
            prime: p,
            exponent: alpha,
            component_rb: v,
            added: v,
            source: "prime-power".into(),
        });
        v
    };
    let mut value = base;
    for &(q, e) in fact.factors() {
        if q == p {
            continue;
        }
        let component = rb_q_p(q, p)?.value;
        let added = e as u64 * (component - 2);
        value += added;
        terms.push(Contribution {
            prime: q,
            exponent: e,
            component_rb: component,
            added,
            source: "cross-prime".into(),
        });
    }
    Ok(RbResult {
        value,
        method: Method::FormulaGeneralRecursion,
        detail: Detail::Components {
            base: if alpha == 0 { 2 } else { 0 },
            terms,
        },
    })
}
