//! Structural classification of rainbow-free exact 3-colorings of `Z_q`, `q` prime.
//!
//! A 3-coloring `A ∪ B ∪ C` is rainbow-free for `x1 + x2 = k*x3` exactly when,
//! after some dilation `x -> a*x`, one of these holds:
//!
//! 1. `A = {0}` and `B`, `C` are symmetric and `<k>`-periodic.
//! 2. `A = {1}` and either
//!    (i) `k = 2`, with `B - 1` and `C - 1` symmetric and `<2>`-periodic, or
//!    (ii) `k = -1`, with `(B \ {-2}) + 1/2` and `(C \ {-2}) + 1/2` symmetric.
//! 3. `k = -1`, every class has at least two elements, and the classes are
//!    cyclic intervals `[a1, a2-1]`, `[a2, a3-1]`, `[a3, a1-1]` with
//!    `a1 + a2 + a3` equal to 1 or 2.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coloring::{dilate, Coloring};
use crate::error::{invalid, Result};
use crate::modular::{is_k_periodic_subset, is_prime, is_symmetric_subset, mod_inverse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LmCase {
    Case1,
    Case2i,
    Case2ii,
    Case3,
    NotRainbowFreeForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LmClassification {
    pub case: LmCase,
    /// Dilation factor `a` such that `x -> c(a*x)` has the stated form.
    pub dilation: Option<u64>,
}

type Class = BTreeSet<u64>;

fn shift(s: &Class, by: u64, q: u64) -> Class {
    s.iter().map(|&x| (x + by) % q).collect()
}

fn symmetric_periodic(s: &Class, k: u64, q: u64) -> bool {
    is_symmetric_subset(s, q) && matches!(is_k_periodic_subset(s, k, q), Ok(true))
}

/// The two classes other than the one equal to `{point}`, if such a class exists.
fn others_of_singleton(classes: &[Class; 3], point: u64) -> Option<(&Class, &Class)> {
    let idx = classes
        .iter()
        .position(|c| c.len() == 1 && c.contains(&point))?;
    let rest: Vec<&Class> = (0..3).filter(|&i| i != idx).map(|i| &classes[i]).collect();
    Some((rest[0], rest[1]))
}

fn case1(classes: &[Class; 3], k: u64, q: u64) -> bool {
    others_of_singleton(classes, 0)
        .is_some_and(|(b, c)| symmetric_periodic(b, k, q) && symmetric_periodic(c, k, q))
}

fn case2i(classes: &[Class; 3], k: u64, q: u64) -> bool {
    if k != 2 % q {
        return false;
    }
    let minus_one = q - 1;
    others_of_singleton(classes, 1).is_some_and(|(b, c)| {
        symmetric_periodic(&shift(b, minus_one, q), 2, q)
            && symmetric_periodic(&shift(c, minus_one, q), 2, q)
    })
}

fn case2ii(classes: &[Class; 3], k: u64, q: u64) -> bool {
    if k != q - 1 {
        return false;
    }
    let half = mod_inverse(2, q).expect("q is an odd prime");
    // 1 + y + z = 0 pairs y with -1 - y; the partner of 1 itself is -2
    let excluded = (q - 2) % q;
    let check = |s: &Class| {
        let mut s = s.clone();
        s.remove(&excluded);
        is_symmetric_subset(&shift(&s, half, q), q)
    };
    others_of_singleton(classes, 1).is_some_and(|(b, c)| check(b) && check(c))
}

/// Start of `s` if it is a proper cyclic interval of `Z_q`.
fn interval_start(s: &Class, q: u64) -> Option<u64> {
    let starts: Vec<u64> = s
        .iter()
        .copied()
        .filter(|&x| !s.contains(&((x + q - 1) % q)))
        .collect();
    match starts.as_slice() {
        [start] => Some(*start),
        _ => None,
    }
}

fn case3(classes: &[Class; 3], k: u64, q: u64) -> bool {
    if k != q - 1 || classes.iter().any(|c| c.len() < 2) {
        return false;
    }
    let mut sum = 0;
    for c in classes {
        match interval_start(c, q) {
            Some(s) => sum = (sum + s) % q,
            None => return false,
        }
    }
    sum == 1 % q || sum == 2 % q
}

/// Classifies an exact 3-coloring of `Z_q`. Dilations are tried in increasing
/// order and cases in the order 1, 2(i), 2(ii), 3; the first match wins.
pub fn classify_3coloring_lm(c: &Coloring, k: i64) -> Result<LmClassification> {
    let q = c.n();
    if q < 3 || !is_prime(q) {
        return Err(invalid(format!(
            "classification needs a prime q >= 3, got {q}"
        )));
    }
    let k = k.rem_euclid(q as i64) as u64;
    if k == 0 {
        return Err(invalid(format!("coefficient must be coprime to {q}")));
    }
    if c.num_colors() != 3 {
        return Err(invalid(format!(
            "expected an exact 3-coloring, found {} colors",
            c.num_colors()
        )));
    }
    for a in 1..q {
        let d = dilate(c, a)?;
        let classes: [Class; 3] = d
            .classes()
            .into_values()
            .collect::<Vec<_>>()
            .try_into()
            .expect("three classes");
        let hit = if case1(&classes, k, q) {
            Some(LmCase::Case1)
        } else if case2i(&classes, k, q) {
            Some(LmCase::Case2i)
        } else if case2ii(&classes, k, q) {
            Some(LmCase::Case2ii)
        } else if case3(&classes, k, q) {
            Some(LmCase::Case3)
        } else {
            None
        };
        if let Some(case) = hit {
            return Ok(LmClassification {
                case,
                dilation: Some(a),
            });
        }
    }
    Ok(LmClassification {
        case: LmCase::NotRainbowFreeForm,
        dilation: None,
    })
}
