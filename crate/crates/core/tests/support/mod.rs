//! Exhaustive checks shared by the property tests and the acceptance runner.
//!
//! Each check returns a one-line summary on success and a description of the
//! first counterexample on failure.
//!
//! Families of rainbow-free colorings are enumerated by the search for three
//! or more colors. Exact 2-colorings are always rainbow-free and there are
//! 2^(n-1) - 1 of them, so they are enumerated only up to
//! `TWO_COLOR_FULL_N`; for the palette and projection statements a
//! 2-coloring satisfies the property for a structural reason noted at each
//! call site.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::Duration;

use rainbow_lab::coloring::{
    check_symmetry, dilate, dominant_colors, project_general, project_schur, residue_palettes,
};
use rainbow_lab::modular::{divisibility_count, gcd, is_prime, triples};
use rainbow_lab::search::for_each_rainbow_free;
use rainbow_lab::{
    classify_3coloring_lm, is_rainbow_free, max_rainbow_free_r, Coloring, CyclicInstance, LmCase,
    SearchConfig,
};

pub type Check = Result<String, String>;

pub const TWO_COLOR_FULL_N: u64 = 16;

pub fn long_budget() -> SearchConfig {
    SearchConfig::with_budget(Duration::from_secs(600))
}

pub fn inst(n: u64, k: i64) -> CyclicInstance {
    CyclicInstance::new(n, k).unwrap()
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Calls `f` on every restricted-growth string of length `n`, in lexicographic order.
pub fn for_each_canonical(n: usize, mut f: impl FnMut(&[u32])) {
    fn go(colors: &mut Vec<u32>, n: usize, next: u32, f: &mut dyn FnMut(&[u32])) {
        if colors.len() == n {
            f(colors);
            return;
        }
        for c in 0..=next {
            colors.push(c);
            go(colors, n, next.max(c + 1), f);
            colors.pop();
        }
    }
    if n == 0 {
        return;
    }
    let mut colors = vec![0];
    go(&mut colors, n, 1, &mut f);
}

/// Plain triple scan, independent of the library's checker.
pub fn naive_rainbow_free(colors: &[u32], k: u64) -> bool {
    let n = colors.len() as u64;
    for x1 in 0..n {
        for x3 in 0..n {
            let x2 = ((k as u128 * x3 as u128 + 2 * n as u128 - x1 as u128) % n as u128) as u64;
            let (a, b, c) = (
                colors[x1 as usize],
                colors[x2 as usize],
                colors[x3 as usize],
            );
            if a != b && b != c && a != c {
                return false;
            }
        }
    }
    true
}

/// Visits every rainbow-free exact coloring of `Z_n` with `min_r` or more colors.
/// Returns the number visited.
pub fn rainbow_free_family(
    n: u64,
    k: i64,
    min_r: u32,
    mut f: impl FnMut(&Coloring) -> Result<(), String>,
) -> Result<u64, String> {
    let cfg = long_budget();
    let instance = inst(n, k);
    let r_max = max_rainbow_free_r(&instance, &cfg).map_err(|e| e.to_string())?;
    if !r_max.is_exact() {
        return Err(format!("search for Z_{n}, k={k} did not finish"));
    }
    let mut count = 0;
    let mut failure = None;
    for r in min_r.max(1)..=r_max.r_max {
        let summary = for_each_rainbow_free(&instance, r, &cfg, |c| {
            count += 1;
            match f(c) {
                Ok(()) => ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })
        .map_err(|e| e.to_string())?;
        if let Some(e) = failure.take() {
            return Err(format!("Z_{n}, k={k}: {e}"));
        }
        if !summary.complete {
            return Err(format!("enumeration of Z_{n}, k={k}, r={r} did not finish"));
        }
    }
    Ok(count)
}

/// Smallest color count that must be enumerated for `n`.
fn min_r_for(n: u64) -> u32 {
    if n <= TWO_COLOR_FULL_N {
        1
    } else {
        3
    }
}

pub fn triple_counts() -> Check {
    for n in 1..=30u64 {
        for k in 0..n as i64 {
            let count = triples(&inst(n, k)).count() as u64;
            if count != n * n {
                return Err(format!("Z_{n}, k={k}: {count} triples, expected {}", n * n));
            }
        }
    }
    Ok("every Z_n with n <= 30 has n^2 triples for each k".into())
}

pub fn divisibility_counts() -> Check {
    let mut checked = 0u64;
    for n in 2..=30u64 {
        for q in primes_up_to(n).into_iter().filter(|q| n % q == 0) {
            for k in 0..n as i64 {
                if gcd(q, k as u64) != 1 {
                    continue;
                }
                for t in triples(&inst(n, k)) {
                    checked += 1;
                    if divisibility_count(&t, q) == 2 {
                        return Err(format!(
                            "Z_{n}, k={k}, q={q}: {t} has exactly two multiples of q"
                        ));
                    }
                }
            }
        }
    }
    Ok(format!(
        "{checked} (triple, q) pairs with n <= 30, none with exactly two multiples"
    ))
}

pub fn dilation_invariance() -> Check {
    let mut checked = 0u64;
    for n in 1..=12u64 {
        let units: Vec<u64> = (1..n.max(2)).filter(|&m| gcd(m, n) == 1).collect();
        let mut failure = None;
        for_each_canonical(n as usize, |colors| {
            if failure.is_some() {
                return;
            }
            let c = Coloring::new(colors.to_vec()).unwrap();
            let free: Vec<bool> = (0..n as i64).map(|k| is_rainbow_free(&c, k)).collect();
            let sizes = c.class_sizes();
            for &m in &units {
                let d = dilate(&c, m).unwrap();
                checked += 1;
                if d.class_sizes() != sizes {
                    failure = Some(format!("Z_{n}: {c} dilated by {m} changes class sizes"));
                    return;
                }
                for k in 0..n as i64 {
                    if is_rainbow_free(&d, k) != free[k as usize] {
                        failure = Some(format!(
                            "Z_{n}, k={k}: {c} and its dilation by {m} disagree"
                        ));
                        return;
                    }
                }
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(format!(
        "{checked} (coloring, unit) pairs over n <= 12, all k"
    ))
}

pub fn dominance() -> Check {
    let mut total = 0;
    for n in 1..=12 {
        total += rainbow_free_family(n, 1, 1, |c| {
            if dominant_colors(c).contains(&c.color(1)) {
                Ok(())
            } else {
                Err(format!("{c}: c(1) is not dominant"))
            }
        })?;
    }
    Ok(format!(
        "c(1) dominant in all {total} rainbow-free colorings, k=1, n <= 12"
    ))
}

/// Colors appearing on some cyclically adjacent equal pair.
fn doubled_colors(c: &Coloring) -> BTreeSet<u32> {
    (0..c.n())
        .filter(|&i| c.color(i) == c.color(i + 1))
        .map(|i| c.color(i))
        .collect()
}

pub fn no_two_doubled_minor_colors() -> Check {
    let mut total = 0;
    for n in 3..=12 {
        total += rainbow_free_family(n, 1, 3, |c| {
            let d = c.color(1);
            let minor: Vec<u32> = doubled_colors(c).into_iter().filter(|&x| x != d).collect();
            if minor.len() >= 2 {
                Err(format!(
                    "{c}: colors {minor:?} both sit on adjacent equal pairs"
                ))
            } else {
                Ok(())
            }
        })?;
    }
    Ok(format!(
        "{total} rainbow-free colorings with r >= 3, k=1, n <= 12"
    ))
}

pub fn singleton_class_in_prime_3colorings() -> Check {
    let mut total = 0;
    // Z_2 has no 3-colorings
    for p in primes_up_to(13).into_iter().filter(|&p| p >= 3) {
        let mut failure = None;
        let summary = for_each_rainbow_free(&inst(p, 1), 3, &long_budget(), |c| {
            total += 1;
            if c.class_sizes()[0] == 1 {
                ControlFlow::Continue(())
            } else {
                failure = Some(format!("Z_{p}: {c} has no singleton class"));
                ControlFlow::Break(())
            }
        })
        .map_err(|e| e.to_string())?;
        if let Some(f) = failure {
            return Err(f);
        }
        if !summary.complete {
            return Err(format!("enumeration of Z_{p} did not finish"));
        }
    }
    Ok(format!(
        "all {total} rainbow-free 3-colorings of Z_p, p <= 13, have a singleton class"
    ))
}

pub fn prime_symmetry() -> Check {
    let mut total = 0;
    for p in primes_up_to(13) {
        total += rainbow_free_family(p, 1, 3, |c| {
            if check_symmetry(c) {
                Ok(())
            } else {
                Err(format!("{c} is not symmetric"))
            }
        })?;
    }
    Ok(format!(
        "all {total} rainbow-free colorings with r >= 3 of Z_p, p <= 13, are symmetric"
    ))
}

fn outside(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> usize {
    a.difference(b).count()
}

/// With two colors `P_0` is nonempty, so `P_i \ P_0` has at most one color;
/// 2-colorings above `TWO_COLOR_FULL_N` are therefore skipped.
pub fn limited_colors() -> Check {
    let mut total = 0;
    for n in 2..=24u64 {
        let divisors: Vec<u64> = (1..=n).filter(|t| n % t == 0).collect();
        total += rainbow_free_family(n, 1, min_r_for(n), |c| {
            for &t in &divisors {
                let ps = residue_palettes(c, t).unwrap();
                if let Some(i) = (1..t as usize).find(|&i| outside(&ps[i], &ps[0]) > 1) {
                    return Err(format!("{c}, t={t}: |P_{i} \\ P_0| > 1"));
                }
            }
            Ok(())
        })?;
    }
    Ok(format!(
        "{total} rainbow-free colorings of Z_st, st <= 24, k=1"
    ))
}

/// Same two-color argument as [`limited_colors`].
pub fn not_too_big() -> Check {
    let mut total = 0;
    for p in [2u64, 3, 5, 7] {
        for n in 2..=21u64 {
            let qs: Vec<u64> = primes_up_to(n)
                .into_iter()
                .filter(|&q| n % q == 0 && q != p)
                .collect();
            if qs.is_empty() {
                continue;
            }
            total += rainbow_free_family(n, p as i64, min_r_for(n), |c| {
                for &q in &qs {
                    let t = n / q;
                    let ps = residue_palettes(c, t).unwrap();
                    let largest = ps.iter().map(|p| p.len()).max().unwrap();
                    for j in (0..ps.len()).filter(|&j| ps[j].len() == largest) {
                        if let Some(i) = (0..ps.len()).find(|&i| outside(&ps[i], &ps[j]) > 1) {
                            return Err(format!("{c}, q={q}: |P_{i} \\ P_{j}| > 1"));
                        }
                    }
                }
                Ok(())
            })?;
        }
    }
    Ok(format!(
        "{total} rainbow-free colorings of Z_qt, qt <= 21, k = p in {{2,3,5,7}}"
    ))
}

/// Palettes mod `p` of colorings of `Z_{p^a}` for `k = p`: `P_i = P_{p-i}`,
/// and `P_0` is a single color as soon as some `P_i` leaves it. The first
/// statement needs a third color (a 2-coloring can recolor a lone residue),
/// so both are checked from three colors up.
pub fn prime_power_palettes(n: u64, p: u64) -> Check {
    let total = rainbow_free_family(n, p as i64, 3, |c| {
        let ps = residue_palettes(c, p).unwrap();
        for i in 1..p as usize {
            if ps[i] != ps[p as usize - i] {
                return Err(format!("{c}: P_{i} != P_{}", p as usize - i));
            }
        }
        let escapes = (1..p as usize).any(|i| outside(&ps[i], &ps[0]) >= 1);
        if escapes && ps[0].len() != 1 {
            return Err(format!(
                "{c}: some P_i leaves P_0 but |P_0| = {}",
                ps[0].len()
            ));
        }
        Ok(())
    })?;
    Ok(format!("Z_{n}, k={p}: {total} colorings"))
}

pub fn prime_power_palette_suite() -> Check {
    let mut parts = Vec::new();
    for (n, p) in [(9, 3), (27, 3), (25, 5)] {
        parts.push(prime_power_palettes(n, p)?);
    }
    Ok(parts.join("; "))
}

/// A projection only uses colors from `P_i \ P_0` plus one fresh color, so a
/// 2-coloring projects to at most two colors and cannot produce a rainbow triple.
pub fn projections() -> Check {
    let mut schur = 0;
    for n in 2..=24u64 {
        let ts: Vec<u64> = (2..n).filter(|t| n % t == 0).collect();
        if ts.is_empty() {
            continue;
        }
        schur += rainbow_free_family(n, 1, min_r_for(n), |c| {
            for &t in &ts {
                let proj = project_schur(c, t).map_err(|e| format!("{c}, t={t}: {e}"))?;
                if !is_rainbow_free(&proj, 1) {
                    return Err(format!(
                        "{c} projects to {proj} on Z_{t}, which is not rainbow-free"
                    ));
                }
            }
            Ok(())
        })?;
    }
    let mut general = 0;
    for p in [2u64, 3, 5, 7] {
        for n in 2..=24u64 {
            let qs: Vec<u64> = primes_up_to(n)
                .into_iter()
                .filter(|&q| n % q == 0 && q != p && q < n)
                .collect();
            if qs.is_empty() {
                continue;
            }
            general += rainbow_free_family(n, p as i64, min_r_for(n), |c| {
                for &q in &qs {
                    let t = n / q;
                    let proj = project_general(c, t, p).map_err(|e| format!("{c}, q={q}: {e}"))?;
                    if !is_rainbow_free(&proj, p as i64) {
                        return Err(format!(
                            "{c} projects to {proj} on Z_{t}, k={p}, which is not rainbow-free"
                        ));
                    }
                }
                Ok(())
            })?;
        }
    }
    Ok(format!(
        "{schur} colorings (k=1) and {general} colorings (k prime) over st <= 24"
    ))
}

/// Classifier and rainbow check agree on every exact 3-coloring of `Z_q`, all `k`.
pub fn lm_equivalence(qs: &[u64]) -> Check {
    let mut checked = 0u64;
    let mut free = 0u64;
    for &q in qs {
        let mut failure = None;
        for_each_canonical(q as usize, |colors| {
            if failure.is_some() || colors.iter().max() != Some(&2) {
                return;
            }
            let c = Coloring::new(colors.to_vec()).unwrap();
            for k in 1..q as i64 {
                let class = classify_3coloring_lm(&c, k).unwrap();
                let is_free = is_rainbow_free(&c, k);
                checked += 1;
                free += u64::from(is_free);
                if (class.case != LmCase::NotRainbowFreeForm) != is_free {
                    failure = Some(format!(
                        "Z_{q}, k={k}: {c} classified {:?} but rainbow-free is {is_free}",
                        class.case
                    ));
                    return;
                }
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(format!(
        "{checked} (coloring, k) pairs over q in {qs:?}, {free} rainbow-free"
    ))
}

fn expect_witness(
    label: String,
    c: rainbow_lab::Result<Coloring>,
    n: u64,
    k: i64,
    rb: u64,
) -> Result<(), String> {
    let c = c.map_err(|e| format!("{label}: {e}"))?;
    if c.n() != n {
        return Err(format!("{label}: coloring of Z_{} instead of Z_{n}", c.n()));
    }
    if !naive_rainbow_free(c.colors(), k.rem_euclid(n as i64) as u64) {
        return Err(format!("{label}: {c} is not rainbow-free"));
    }
    if c.num_colors() as u64 != rb - 1 {
        return Err(format!(
            "{label}: {} colors, expected rb - 1 = {}",
            c.num_colors(),
            rb - 1
        ));
    }
    Ok(())
}

/// Every construction over its range is rainbow-free with `rb - 1` colors.
pub fn construction_ranges() -> Check {
    use rainbow_lab::constructions::*;
    use rainbow_lab::{rb_general, rb_prime_power, rb_q_p, rb_schur, rb_schur_prime};
    let mut count = 0;
    let mut ok = |r: Result<(), String>| {
        count += 1;
        r
    };
    for p in primes_up_to(23).into_iter().filter(|&p| p >= 5) {
        let rb = rb_schur_prime(p).unwrap().value;
        ok(expect_witness(
            format!("witness_schur_prime({p})"),
            witness_schur_prime(p),
            p,
            1,
            rb,
        ))?;
    }
    for n in 2..=24 {
        let rb = rb_schur(n).unwrap().value;
        ok(expect_witness(
            format!("witness_schur({n})"),
            witness_schur(n),
            n,
            1,
            rb,
        ))?;
    }
    for p in primes_up_to(13).into_iter().filter(|&p| p > 2) {
        let rb = rb_prime_power(p, 1).unwrap().value;
        ok(expect_witness(
            format!("witness_k_equals_p({p})"),
            witness_k_equals_p(p),
            p,
            p as i64,
            rb,
        ))?;
    }
    let primes = primes_up_to(17);
    for &q in &primes {
        for &p in primes.iter().filter(|&&p| p != q) {
            let rb = rb_q_p(q, p).unwrap().value;
            if rb == 4 {
                ok(expect_witness(
                    format!("witness_q_p({q}, {p})"),
                    witness_q_p(q, p),
                    q,
                    p as i64,
                    rb,
                ))?;
            }
            ok(expect_witness(
                format!("max_coloring_q_symmetric({q}, {p})"),
                max_coloring_q_symmetric(q, p),
                q,
                p as i64,
                rb,
            ))?;
        }
    }
    for (p, a) in [(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)] {
        let rb = rb_prime_power(p, a).unwrap().value;
        let n = p.pow(a);
        ok(expect_witness(
            format!("witness_prime_power({p}, {a})"),
            witness_prime_power(p, a),
            n,
            p as i64,
            rb,
        ))?;
    }
    for p in [3u64, 5] {
        for n in 2..=45 {
            let rb = rb_general(n, p, None).unwrap().value;
            ok(expect_witness(
                format!("witness_general({n}, {p})"),
                witness_general(n, p),
                n,
                p as i64,
                rb,
            ))?;
        }
    }
    Ok(format!("{count} constructions verified"))
}

/// Lifts of every rainbow-free base on `Z_t`, `t <= 6`, stay rainbow-free and
/// gain exactly `rb(Z_p) - 2` colors.
pub fn lift_preservation() -> Check {
    use rainbow_lab::constructions::{lift_general, lift_schur};
    use rainbow_lab::{rb_q_p, rb_schur_prime};
    let mut lifts = 0;
    for t in 1..=6u64 {
        rainbow_free_family(t, 1, 1, |base| {
            for p in [2u64, 3, 5, 7] {
                let gain = rb_schur_prime(p).unwrap().value - 2;
                let rb = base.num_colors() as u64 + gain + 1;
                lifts += 1;
                expect_witness(
                    format!("lift_schur({base}, {p})"),
                    lift_schur(base, p),
                    p * t,
                    1,
                    rb,
                )?;
            }
            Ok(())
        })?;
        for p in [2u64, 3, 5, 7] {
            rainbow_free_family(t, p as i64, 1, |base| {
                for q in [2u64, 3, 5, 7, 11, 13].into_iter().filter(|&q| q != p) {
                    let gain = rb_q_p(q, p).unwrap().value - 2;
                    let rb = base.num_colors() as u64 + gain + 1;
                    lifts += 1;
                    expect_witness(
                        format!("lift_general({base}, {p}, {q})"),
                        lift_general(base, p, q),
                        q * t,
                        p as i64,
                        rb,
                    )?;
                }
                Ok(())
            })?;
        }
    }
    Ok(format!("{lifts} lifts of rainbow-free bases with t <= 6"))
}
