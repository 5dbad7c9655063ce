//! Exhaustive search over exact colorings of `Z_n`.
//!
//! Positions are assigned in order `0..n` with color ids in restricted-growth
//! order, so each set partition is visited exactly once and leaves come out in
//! lexicographic order of their canonical form. Every position keeps a color
//! domain: once a triple has two differently colored assigned entries, its
//! third entry may only take one of those two colors. A position whose domain
//! was never restricted is "open" and is the only place a new color can go,
//! which bounds how many colors any completion can still reach.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicU32, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{ColorId, Coloring};
use crate::error::{invalid, Result};
use crate::formulas::{Detail, Method, RbResult, SearchStats};
use crate::modular::{triples, CyclicInstance};

/// Color ids are tracked as bits of a `u64`; the all-ones mask marks an open domain.
pub const MAX_SEARCH_COLORS: u32 = 62;

/// Largest modulus the search accepts; the triple index alone is quadratic in `n`.
pub const MAX_SEARCH_N: u64 = 2048;

const OPEN: u64 = u64::MAX;
const UNASSIGNED: ColorId = ColorId::MAX;
const BUDGET_CHECK_INTERVAL: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub time_budget: Duration,
    /// Never look for colorings with more than this many colors.
    pub max_r: Option<u32>,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            time_budget: Duration::from_secs(60),
            max_r: None,
            parallel: false,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(time_budget: Duration) -> Self {
        Self {
            time_budget,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.time_budget.is_zero() {
            return Err(invalid("time budget must be positive"));
        }
        if self.max_r == Some(0) {
            return Err(invalid("max_r must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Largest number of colors of a rainbow-free exact coloring found.
    pub r_max: u32,
    /// Lexicographically least canonical coloring achieving `r_max`.
    pub witness: Coloring,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    /// The whole space was searched. When false, `r_max` is only a lower bound.
    pub exhausted: bool,
    /// The color cap was reached, so larger colorings were never tried.
    pub capped: bool,
}

impl SearchOutcome {
    /// `r_max` is the true maximum.
    pub fn is_exact(&self) -> bool {
        self.exhausted && !self.capped
    }
}

/// For every position, the pairs of other positions that complete a triple
/// of three distinct elements with it. Triples with a repeated element can
/// never be rainbow and are left out.
#[derive(Clone, Debug)]
pub struct TripleIndex {
    partners: Vec<Vec<(u32, u32)>>,
}

impl TripleIndex {
    pub fn new(inst: &CyclicInstance) -> Self {
        let n = inst.n() as usize;
        let mut partners: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for t in triples(inst) {
            let [a, b, c] = t.coords().map(|x| x as u32);
            if a == b || b == c || a == c {
                continue;
            }
            for (x, y, z) in [(a, b, c), (b, a, c), (c, a, b)] {
                let pair = if y < z { (y, z) } else { (z, y) };
                partners[x as usize].push(pair);
            }
        }
        for list in &mut partners {
            list.sort_unstable();
            list.dedup();
        }
        Self { partners }
    }

    pub fn n(&self) -> usize {
        self.partners.len()
    }

    pub fn partners(&self, x: usize) -> &[(u32, u32)] {
        &self.partners[x]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Goal {
    /// Maximize the number of colors.
    Maximize,
    /// Visit every exact coloring with this many colors.
    Exactly(u32),
}

struct Kernel<'a> {
    index: &'a TripleIndex,
    goal: Goal,
    limit: u32,
    colors: Vec<ColorId>,
    domain: Vec<u64>,
    open: usize,
    used: u32,
    trail: Vec<(u32, u64)>,
    nodes: u64,
    deadline: Instant,
    aborted: bool,
}

struct Checkpoint {
    trail: usize,
    open: usize,
    used: u32,
}

impl<'a> Kernel<'a> {
    fn new(index: &'a TripleIndex, goal: Goal, limit: u32, deadline: Instant) -> Self {
        let n = index.n();
        Self {
            index,
            goal,
            limit,
            colors: vec![UNASSIGNED; n],
            domain: vec![OPEN; n],
            open: n,
            used: 0,
            trail: Vec::new(),
            nodes: 0,
            deadline,
            aborted: false,
        }
    }

    fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            trail: self.trail.len(),
            open: self.open,
            used: self.used,
        }
    }

    fn undo(&mut self, x: usize, cp: Checkpoint) {
        while self.trail.len() > cp.trail {
            let (pos, old) = self.trail.pop().expect("trail entry");
            self.domain[pos as usize] = old;
        }
        self.open = cp.open;
        self.used = cp.used;
        self.colors[x] = UNASSIGNED;
    }

    fn restrict(&mut self, z: usize, mask: u64) -> bool {
        let old = self.domain[z];
        let new = old & mask;
        if new != old {
            self.trail.push((z as u32, old));
            if old == OPEN {
                self.open -= 1;
            }
            self.domain[z] = new;
        }
        new != 0
    }

    /// Assigns `color` to `x` and propagates. Returns false on a conflict; the
    /// caller undoes either way.
    fn assign(&mut self, x: usize, color: ColorId) -> bool {
        self.colors[x] = color;
        if self.domain[x] == OPEN {
            self.open -= 1;
        }
        self.used = self.used.max(color + 1);
        let index = self.index;
        for &(y, z) in index.partners(x) {
            let (y, z) = (y as usize, z as usize);
            let (cy, cz) = (self.colors[y], self.colors[z]);
            match (cy == UNASSIGNED, cz == UNASSIGNED) {
                (false, false) => {
                    if cy != color && cz != color && cy != cz {
                        return false;
                    }
                }
                (false, true) => {
                    if cy != color && !self.restrict(z, (1 << cy) | (1 << color)) {
                        return false;
                    }
                }
                (true, false) => {
                    if cz != color && !self.restrict(y, (1 << cz) | (1 << color)) {
                        return false;
                    }
                }
                (true, true) => {}
            }
        }
        true
    }

    /// Most colors any completion of the current partial coloring can use.
    fn upper_bound(&self) -> u32 {
        (self.used as usize + self.open).min(self.limit as usize) as u32
    }

    fn candidates(&self, x: usize) -> u64 {
        let d = self.domain[x];
        if d == OPEN {
            let top = self.used.min(self.limit - 1);
            (1u64 << (top + 1)) - 1
        } else {
            d
        }
    }

    fn tick(&mut self) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(BUDGET_CHECK_INTERVAL) && Instant::now() >= self.deadline {
            self.aborted = true;
        }
    }

    fn replay(&mut self, prefix: &[ColorId]) -> bool {
        prefix.iter().enumerate().all(|(x, &c)| self.assign(x, c))
    }
}

/// Best coloring found in one subtree.
struct MaxState<'g> {
    best: u32,
    witness: Option<Vec<ColorId>>,
    global: Option<&'g AtomicU32>,
}

impl MaxState<'_> {
    fn prunes(&self, bound: u32) -> bool {
        bound <= self.best
            || self
                .global
                .is_some_and(|g| bound < g.load(Ordering::Relaxed))
    }
}

fn dfs_max(k: &mut Kernel<'_>, x: usize, st: &mut MaxState<'_>) {
    k.tick();
    if k.aborted {
        return;
    }
    if x == k.colors.len() {
        if k.used > st.best {
            st.best = k.used;
            st.witness = Some(k.colors.clone());
            if let Some(g) = st.global {
                g.fetch_max(k.used, Ordering::Relaxed);
            }
        }
        return;
    }
    let mut cands = k.candidates(x);
    while cands != 0 && !k.aborted {
        let color = cands.trailing_zeros();
        cands &= cands - 1;
        let cp = k.checkpoint();
        if k.assign(x, color) && !st.prunes(k.upper_bound()) {
            dfs_max(k, x + 1, st);
        }
        k.undo(x, cp);
        if st.best == k.limit {
            // nothing can beat the cap, and the first hit is the least witness
            return;
        }
    }
}

fn dfs_exact<F>(k: &mut Kernel<'_>, x: usize, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[ColorId]) -> ControlFlow<()>,
{
    k.tick();
    if k.aborted {
        return ControlFlow::Break(());
    }
    let Goal::Exactly(r) = k.goal else {
        unreachable!("exact enumeration kernel")
    };
    if x == k.colors.len() {
        if k.used == r {
            return visit(&k.colors);
        }
        return ControlFlow::Continue(());
    }
    let mut cands = k.candidates(x);
    while cands != 0 {
        let color = cands.trailing_zeros();
        cands &= cands - 1;
        let cp = k.checkpoint();
        let flow = if k.assign(x, color) && k.upper_bound() >= r {
            dfs_exact(k, x + 1, visit)
        } else {
            ControlFlow::Continue(())
        };
        k.undo(x, cp);
        flow?;
    }
    ControlFlow::Continue(())
}

/// Surviving prefixes of length `depth`, in lexicographic order.
fn frontier(k: &mut Kernel<'_>, x: usize, depth: usize, out: &mut Vec<Vec<ColorId>>) {
    k.tick();
    if x == depth {
        out.push(k.colors[..depth].to_vec());
        return;
    }
    let mut cands = k.candidates(x);
    while cands != 0 {
        let color = cands.trailing_zeros();
        cands &= cands - 1;
        let cp = k.checkpoint();
        if k.assign(x, color) {
            frontier(k, x + 1, depth, out);
        }
        k.undo(x, cp);
    }
}

fn check_size(inst: &CyclicInstance) -> Result<()> {
    if inst.n() > MAX_SEARCH_N {
        return Err(invalid(format!(
            "Z_{} is beyond the search limit n <= {MAX_SEARCH_N}",
            inst.n()
        )));
    }
    Ok(())
}

fn color_limit(n: u64, cfg: &SearchConfig) -> u32 {
    let n = n.min(MAX_SEARCH_COLORS as u64) as u32;
    cfg.max_r.map_or(n, |cap| cap.min(n))
}

/// Largest `r` admitting a rainbow-free exact `r`-coloring, with the
/// lexicographically least canonical witness.
pub fn max_rainbow_free_r(inst: &CyclicInstance, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    check_size(inst)?;
    let start = Instant::now();
    let deadline = start + cfg.time_budget;
    let index = TripleIndex::new(inst);
    let n = index.n();
    let limit = color_limit(inst.n(), cfg);

    let (best, witness, nodes, aborted) = if cfg.parallel && n > 12 {
        search_parallel(&index, limit, deadline)
    } else {
        let mut k = Kernel::new(&index, Goal::Maximize, limit, deadline);
        let mut st = MaxState {
            best: 0,
            witness: None,
            global: None,
        };
        dfs_max(&mut k, 0, &mut st);
        (st.best, st.witness, k.nodes, k.aborted)
    };

    // the constant coloring is always rainbow-free, so only an abort leaves us empty-handed
    let witness = witness.unwrap_or_else(|| vec![0; n]);
    let r_max = best.max(1);
    Ok(SearchOutcome {
        r_max,
        witness: Coloring::new(witness)?,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
        exhausted: !aborted,
        capped: r_max == limit && (limit as u64) < inst.n(),
    })
}

fn search_parallel(
    index: &TripleIndex,
    limit: u32,
    deadline: Instant,
) -> (u32, Option<Vec<ColorId>>, u64, bool) {
    let n = index.n();
    let depth = (n / 2).min(10);
    let mut root = Kernel::new(index, Goal::Maximize, limit, deadline);
    let mut prefixes = Vec::new();
    frontier(&mut root, 0, depth, &mut prefixes);

    let global = AtomicU32::new(0);
    let results: Vec<_> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut k = Kernel::new(index, Goal::Maximize, limit, deadline);
            let mut st = MaxState {
                best: 0,
                witness: None,
                global: Some(&global),
            };
            if k.replay(prefix) {
                dfs_max(&mut k, prefix.len(), &mut st);
            }
            (st.best, st.witness, k.nodes, k.aborted)
        })
        .collect();

    // first subtree (in lexicographic order) reaching the maximum wins
    let mut best = 0;
    let mut witness = None;
    let mut nodes = root.nodes;
    let mut aborted = false;
    for (b, w, k_nodes, k_aborted) in results {
        nodes += k_nodes;
        aborted |= k_aborted;
        if b > best {
            best = b;
            witness = w;
        }
    }
    (best, witness, nodes, aborted)
}

/// Result of asking the search for `rb(Z_n, k)`.
#[derive(Clone, Debug)]
pub enum OracleVerdict {
    Exact {
        result: RbResult,
        outcome: SearchOutcome,
    },
    /// The search ran out of budget (or hit its color cap); `rb` is at least `lower_bound`.
    Inconclusive {
        lower_bound: u64,
        outcome: SearchOutcome,
    },
}

impl OracleVerdict {
    pub fn exact_value(&self) -> Option<u64> {
        match self {
            OracleVerdict::Exact { result, .. } => Some(result.value),
            OracleVerdict::Inconclusive { .. } => None,
        }
    }

    pub fn outcome(&self) -> &SearchOutcome {
        match self {
            OracleVerdict::Exact { outcome, .. } | OracleVerdict::Inconclusive { outcome, .. } => {
                outcome
            }
        }
    }
}

/// `rb(Z_n, k) = r_max + 1`: merging two classes of a rainbow-free exact
/// `(r+1)`-coloring gives a rainbow-free exact `r`-coloring, so rainbow-free
/// colorings exist for exactly the color counts `1..=r_max`.
pub fn rb_oracle(inst: &CyclicInstance, cfg: &SearchConfig) -> Result<OracleVerdict> {
    let outcome = max_rainbow_free_r(inst, cfg)?;
    let value = (outcome.r_max as u64 + 1).min(inst.n() + 1);
    if !outcome.is_exact() {
        return Ok(OracleVerdict::Inconclusive {
            lower_bound: value,
            outcome,
        });
    }
    Ok(OracleVerdict::Exact {
        result: RbResult {
            value,
            method: Method::Oracle,
            detail: Detail::Search(SearchStats::from_outcome(&outcome)),
        },
        outcome,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub yielded: u64,
    pub nodes_explored: u64,
    /// False when the budget ran out or the visitor stopped early.
    pub complete: bool,
}

/// Calls `visit` on every canonical rainbow-free exact `r`-coloring, in
/// lexicographic order, until it breaks or the budget runs out.
pub fn for_each_rainbow_free<F>(
    inst: &CyclicInstance,
    r: u32,
    cfg: &SearchConfig,
    mut visit: F,
) -> Result<EnumerationSummary>
where
    F: FnMut(&Coloring) -> ControlFlow<()>,
{
    cfg.validate()?;
    check_size(inst)?;
    if r == 0 || r as u64 > inst.n() || r > MAX_SEARCH_COLORS {
        return Err(invalid(format!(
            "r = {r} must lie in [1, min(n, {MAX_SEARCH_COLORS})] for n = {}",
            inst.n()
        )));
    }
    let index = TripleIndex::new(inst);
    let deadline = Instant::now() + cfg.time_budget;
    let mut k = Kernel::new(&index, Goal::Exactly(r), r, deadline);
    let mut yielded = 0;
    let flow = dfs_exact(&mut k, 0, &mut |colors: &[ColorId]| {
        yielded += 1;
        let c = Coloring::new(colors.to_vec()).expect("nonempty");
        visit(&c)
    });
    Ok(EnumerationSummary {
        yielded,
        nodes_explored: k.nodes,
        complete: flow.is_continue() && !k.aborted,
    })
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub colorings: Vec<Coloring>,
    /// False when the list was truncated by the budget.
    pub complete: bool,
}

pub fn enumerate_rainbow_free(
    inst: &CyclicInstance,
    r: u32,
    cfg: &SearchConfig,
) -> Result<Enumeration> {
    let mut colorings = Vec::new();
    let summary = for_each_rainbow_free(inst, r, cfg, |c| {
        colorings.push(c.clone());
        ControlFlow::Continue(())
    })?;
    Ok(Enumeration {
        colorings,
        complete: summary.complete,
    })
}

/// Whether some rainbow-free exact `r`-coloring exists. `None` if the budget ran out first.
pub fn exists_rainbow_free(
    inst: &CyclicInstance,
    r: u32,
    cfg: &SearchConfig,
) -> Result<Option<bool>> {
    let summary = for_each_rainbow_free(inst, r, cfg, |_| ControlFlow::Break(()))?;
    Ok(match (summary.yielded, summary.complete) {
        (0, true) => Some(false),
        (0, false) => None,
        _ => Some(true),
    })
}
