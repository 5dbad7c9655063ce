//! Colorings of `Z_n` and the structural predicates stated about them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::modular::{gcd, is_prime, mul_mod, solutions_by_residue, CyclicInstance, Triple};

pub type ColorId = u32;

/// Set of colors seen on one residue class.
pub type Palette = BTreeSet<ColorId>;

/// A coloring `c: Z_n -> ColorId`. Ids need not be canonical; use
/// [`Coloring::canonical`] for the restricted-growth form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring {
    colors: Vec<ColorId>,
}

impl Coloring {
    pub fn new(colors: Vec<ColorId>) -> Result<Self> {
        if colors.is_empty() {
            return Err(invalid("a coloring of Z_n needs n >= 1 entries"));
        }
        Ok(Self { colors })
    }

    /// Coloring built from a per-residue function.
    pub fn from_fn(n: u64, f: impl FnMut(u64) -> ColorId) -> Result<Self> {
        Self::new((0..n).map(f).collect())
    }

    pub fn n(&self) -> u64 {
        self.colors.len() as u64
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn into_colors(self) -> Vec<ColorId> {
        self.colors
    }

    /// Color of `x mod n`.
    pub fn color(&self, x: u64) -> ColorId {
        self.colors[(x % self.n()) as usize]
    }

    pub fn color_set(&self) -> BTreeSet<ColorId> {
        self.colors.iter().copied().collect()
    }

    /// Number of distinct colors used.
    pub fn num_colors(&self) -> usize {
        self.color_set().len()
    }

    /// Ids are exactly `0..r` for `r` distinct colors.
    pub fn is_exact(&self) -> bool {
        let set = self.color_set();
        set.iter().enumerate().all(|(i, &c)| i as ColorId == c)
    }

    /// Restricted-growth relabeling: scanning from 0, each new color gets the
    /// smallest unused id.
    pub fn canonical(&self) -> Coloring {
        let mut map = BTreeMap::new();
        let colors = self
            .colors
            .iter()
            .map(|c| {
                let next = map.len() as ColorId;
                *map.entry(*c).or_insert(next)
            })
            .collect();
        Coloring { colors }
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 0;
        for &c in &self.colors {
            if c > next {
                return false;
            }
            if c == next {
                next += 1;
            }
        }
        true
    }

    /// Color classes keyed by color id.
    pub fn classes(&self) -> BTreeMap<ColorId, BTreeSet<u64>> {
        let mut classes: BTreeMap<ColorId, BTreeSet<u64>> = BTreeMap::new();
        for (x, &c) in self.colors.iter().enumerate() {
            classes.entry(c).or_default().insert(x as u64);
        }
        classes
    }

    /// Class sizes in ascending order.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut counts: BTreeMap<ColorId, usize> = BTreeMap::new();
        for &c in &self.colors {
            *counts.entry(c).or_default() += 1;
        }
        let mut sizes: Vec<usize> = counts.into_values().collect();
        sizes.sort_unstable();
        sizes
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.colors.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn instance_for(c: &Coloring, k: i64) -> CyclicInstance {
    CyclicInstance::new(c.n(), k).expect("colorings are nonempty")
}

/// Lexicographically least triple whose three entries get pairwise distinct
/// colors, if there is one.
pub fn find_rainbow_triple(c: &Coloring, k: i64) -> Option<Triple> {
    let inst = instance_for(c, k);
    let n = inst.n();
    let buckets = solutions_by_residue(&inst);
    for x1 in 0..n {
        let c1 = c.color(x1);
        for x2 in 0..n {
            let c2 = c.color(x2);
            if c1 == c2 {
                continue;
            }
            let s = ((x1 + x2) % n) as usize;
            for &x3 in &buckets[s] {
                let c3 = c.color(x3);
                if c3 != c1 && c3 != c2 {
                    return Some(Triple::new(x1, x2, x3));
                }
            }
        }
    }
    None
}

/// Same answer as `find_rainbow_triple(c, k).is_none()`, without allocating.
pub fn is_rainbow_free(c: &Coloring, k: i64) -> bool {
    let n = c.n();
    let k = k.rem_euclid(n as i64) as u64;
    let colors = c.colors();
    for x3 in 0..n {
        let s = mul_mod(k, x3, n);
        let c3 = colors[x3 as usize];
        for x1 in 0..n {
            let c1 = colors[x1 as usize];
            if c1 == c3 {
                continue;
            }
            let x2 = if s >= x1 { s - x1 } else { s + n - x1 };
            let c2 = colors[x2 as usize];
            if c2 != c1 && c2 != c3 {
                return false;
            }
        }
    }
    true
}

/// `x -> c(m*x)`. Requires `gcd(m, n) = 1`.
pub fn dilate(c: &Coloring, m: u64) -> Result<Coloring> {
    let n = c.n();
    if gcd(m % n, n) != 1 {
        return Err(invalid(format!(
            "dilation factor {m} is not coprime to {n}"
        )));
    }
    Coloring::from_fn(n, |x| c.color(((m as u128 * x as u128) % n as u128) as u64))
}

/// Colors present on at least one side of every cyclically adjacent pair of
/// differing colors.
pub fn dominant_colors(c: &Coloring) -> BTreeSet<ColorId> {
    let n = c.n();
    let mut dominant = c.color_set();
    for i in 0..n {
        let (a, b) = (c.color(i), c.color(i + 1));
        if a != b {
            dominant.retain(|&d| d == a || d == b);
        }
    }
    dominant
}

/// `P_i = { c(j) : j = i mod t }` for `0 <= i < t`.
pub fn residue_palettes(c: &Coloring, t: u64) -> Result<Vec<Palette>> {
    let n = c.n();
    if t == 0 || !n.is_multiple_of(t) {
        return Err(invalid(format!("{t} does not divide n = {n}")));
    }
    let mut palettes = vec![Palette::new(); t as usize];
    for x in 0..n {
        palettes[(x % t) as usize].insert(c.color(x));
    }
    Ok(palettes)
}

/// `c(x) = c(-x)` for all `x`.
pub fn check_symmetry(c: &Coloring) -> bool {
    let n = c.n();
    (0..n).all(|x| c.color(x) == c.color((n - x) % n))
}

/// Collapse `c` to `Z_t`: residue `i` gets the single color of `P_i \ P_base`,
/// or a fresh color (one past the largest id in `c`) when that set is empty.
fn project_against(c: &Coloring, t: u64, base: usize) -> Result<Coloring> {
    let palettes = residue_palettes(c, t)?;
    let fresh = c.colors().iter().max().copied().unwrap_or(0) + 1;
    let mut out = Vec::with_capacity(t as usize);
    for (i, p) in palettes.iter().enumerate() {
        let extra: Vec<ColorId> = p.difference(&palettes[base]).copied().collect();
        match extra.as_slice() {
            [] => out.push(fresh),
            [only] => out.push(*only),
            _ => {
                return Err(Error::Precondition {
                    index: i,
                    reason: format!(
                        "palette {i} has {} colors outside palette {base}",
                        extra.len()
                    ),
                })
            }
        }
    }
    Coloring::new(out)
}

/// Projection of a coloring of `Z_{st}` onto `Z_t` relative to `P_0`.
pub fn project_schur(c: &Coloring, t: u64) -> Result<Coloring> {
    project_against(c, t, 0)
}

/// Index of the largest palette, ties broken toward the smallest index.
pub fn largest_palette_index(palettes: &[Palette]) -> usize {
    let mut best = 0;
    for (i, p) in palettes.iter().enumerate() {
        if p.len() > palettes[best].len() {
            best = i;
        }
    }
    best
}

/// Projection of a coloring of `Z_{qt}` (for `k = p`) onto `Z_t`, relative to
/// the largest palette. `n/t` must be a prime other than `p`.
pub fn project_general(c: &Coloring, t: u64, p: u64) -> Result<Coloring> {
    let n = c.n();
    if t == 0 || !n.is_multiple_of(t) {
        return Err(invalid(format!("{t} does not divide n = {n}")));
    }
    let q = n / t;
    if !is_prime(q) || !is_prime(p) || q == p {
        return Err(invalid(format!(
            "n/t = {q} must be a prime different from the prime coefficient {p}"
        )));
    }
    let palettes = residue_palettes(c, t)?;
    project_against(c, t, largest_palette_index(&palettes))
}
