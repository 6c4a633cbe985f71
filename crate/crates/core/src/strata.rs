//! Splitting-type strata in the stack of coherent sheaves on `P¹`.
//!
//! A coherent sheaf on `P¹` is `⊕ O(a_i) ⊕ T` with `T` torsion. We handle
//! locally free sheaves and torsion supported on `t` distinct reduced points.
//! The codimension of the stratum of `F` in `Coh_{P¹}(r, deg)` is taken to be
//! `dim Ext¹(F, F)`, which for a locally free sheaf is
//!
//! ```text
//! Σ_{i,j} h¹(O(a_i - a_j)) = Σ_{i,j} max(0, a_j - a_i - 1)
//! ```
//!
//! and for `V ⊕ k(p_1) ⊕ … ⊕ k(p_t)` is `ext¹(V, V) + t·(rk V + 1)`:
//! `Ext¹(k(p), V)` contributes `rk V` per point and `Ext¹(k(p), k(p))` one more.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default lower bound on the parts of an enumerated splitting type.
pub const DEFAULT_MIN_PART: i64 = -10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplittingType {
    parts: Vec<i64>,
    torsion_points: u32,
}

impl SplittingType {
    pub fn new(parts: Vec<i64>, torsion_points: u32) -> Result<Self> {
        if parts.is_empty() || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSplittingType(parts));
        }
        Ok(Self { parts, torsion_points })
    }

    pub fn locally_free(parts: Vec<i64>) -> Result<Self> {
        Self::new(parts, 0)
    }

    /// `O^{r-d} ⊕ O(-1)^d`, the generic type of rank `r` and degree `-d`.
    pub fn generic(rank: usize, d: usize) -> Self {
        let mut parts = vec![0; rank - d];
        parts.extend(std::iter::repeat_n(-1, d));
        Self {
            parts,
            torsion_points: 0,
        }
    }

    /// `O(1) ⊕ O^{r-2} ⊕ O(-1)`, the codimension-one type in degree 0.
    pub fn jumping(rank: usize) -> Self {
        let mut parts = vec![1];
        parts.extend(std::iter::repeat_n(0, rank - 2));
        parts.push(-1);
        Self {
            parts,
            torsion_points: 0,
        }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn torsion_points(&self) -> u32 {
        self.torsion_points
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn degree(&self) -> i64 {
        self.parts.iter().sum::<i64>() + i64::from(self.torsion_points)
    }

    pub fn is_locally_free(&self) -> bool {
        self.torsion_points == 0
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")?;
        if self.torsion_points > 0 {
            write!(f, "+T{}", self.torsion_points)?;
        }
        Ok(())
    }
}

/// `dim Ext¹(V, V)` for `V = ⊕ O(a_i)`.
pub fn ext1_locally_free(parts: &[i64]) -> u64 {
    let mut total = 0;
    for (i, &ai) in parts.iter().enumerate() {
        // only pairs with a_j >= a_i + 2 contribute, and at most one order of each pair does
        for &aj in &parts[i + 1..] {
            total += ((aj - ai).abs() - 1).max(0) as u64;
        }
    }
    total
}

/// Codimension of the stratum of `s`, i.e. `dim Ext¹(F, F)`.
pub fn stratum_codim(s: &SplittingType) -> u64 {
    let t = u64::from(s.torsion_points);
    ext1_locally_free(&s.parts) + t * (s.parts.len() as u64 + 1)
}

/// Visit every splitting type of the given rank and degree whose parts are
/// all `>= min_part`, in order of torsion length, then lexicographically.
pub fn for_each_splitting_type(
    rank: usize,
    deg: i64,
    min_part: i64,
    mut visit: impl FnMut(&SplittingType),
) -> Result<()> {
    if rank == 0 {
        return Err(Error::Rank { rank: 0, min: 1 });
    }
    let max_torsion = deg - rank as i64 * min_part;
    let mut current = SplittingType {
        parts: Vec::with_capacity(rank),
        torsion_points: 0,
    };
    for t in 0..=max_torsion {
        current.torsion_points = t as u32;
        current.parts.clear();
        fill(&mut current, rank, deg - t, i64::MAX, min_part, &mut visit);
    }
    Ok(())
}

/// Extend `current.parts` by `remaining` parts, each in `[floor, ceiling]`,
/// weakly decreasing, summing to `target`.
fn fill(
    current: &mut SplittingType,
    remaining: usize,
    target: i64,
    ceiling: i64,
    floor: i64,
    visit: &mut impl FnMut(&SplittingType),
) {
    if remaining == 0 {
        if target == 0 {
            visit(current);
        }
        return;
    }
    let rest = remaining as i64 - 1;
    // the head is the largest remaining part, so at least ceil(target/remaining)
    let lo = target.div_euclid(remaining as i64) + i64::from(target.rem_euclid(remaining as i64) != 0);
    let hi = ceiling.min(target - rest * floor);
    for head in lo..=hi {
        current.parts.push(head);
        fill(current, remaining - 1, target - head, head, floor, visit);
        current.parts.pop();
    }
}

pub fn enumerate_splitting_types(rank: usize, deg: i64, min_part: i64) -> Result<Vec<SplittingType>> {
    let mut out = Vec::new();
    for_each_splitting_type(rank, deg, min_part, |s| out.push(s.clone()))?;
    Ok(out)
}

/// Outcome of checking the `P¹` stratification bound for one `(r, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataReport {
    pub rank: usize,
    pub d: usize,
    pub min_part: i64,
    pub generic: SplittingType,
    pub generic_codim: u64,
    /// For `d = 0`, the jumping type `(1, 0^{r-2}, -1)` and its codimension.
    pub jumping: Option<(SplittingType, u64)>,
    /// Number of enumerated types, grouped by codimension.
    pub codim_histogram: BTreeMap<u64, u64>,
    /// Types violating the expected bound.
    pub offending: Vec<(SplittingType, u64)>,
    pub types_checked: u64,
    pub passed: bool,
}

/// Check that, among all splitting types of rank `r` and degree `-d` with
/// parts `>= min_part`: the generic type has codimension 0; for `d > 0` every
/// other type has codimension `>= 2`; for `d = 0` the jumping type has
/// codimension exactly 1 and every remaining type `>= 2`.
pub fn verify_lemma_p1(rank: usize, d: usize, min_part: i64) -> Result<StrataReport> {
    if rank < 2 || d >= rank {
        return Err(if rank < 2 {
            Error::Rank {
                rank: rank as i64,
                min: 2,
            }
        } else {
            Error::SplittingDegree {
                rank: rank as i64,
                d: d as i64,
            }
        });
    }
    let needed = if d == 0 { 0 } else { -1 };
    if min_part > needed {
        return Err(Error::WindowTooSmall { min_part });
    }
    let generic = SplittingType::generic(rank, d);
    // the jumping type needs parts down to -1
    let jumping = (d == 0 && min_part <= -1).then(|| SplittingType::jumping(rank));

    // dense counts; codimensions stay small for any sensible window
    let mut counts: Vec<u64> = Vec::new();
    let mut offending = Vec::new();
    let mut types_checked = 0;
    let mut saw_generic = false;
    let mut saw_jumping = false;
    for_each_splitting_type(rank, -(d as i64), min_part, |s| {
        types_checked += 1;
        let codim = stratum_codim(s);
        let slot = codim as usize;
        if slot >= counts.len() {
            counts.resize(slot + 1, 0);
        }
        counts[slot] += 1;
        if *s == generic {
            saw_generic = true;
            if codim != 0 {
                offending.push((s.clone(), codim));
            }
        } else if Some(s) == jumping.as_ref() {
            saw_jumping = true;
            if codim != 1 {
                offending.push((s.clone(), codim));
            }
        } else if codim < 2 {
            offending.push((s.clone(), codim));
        }
    })?;
    let histogram: BTreeMap<u64, u64> = counts
        .into_iter()
        .enumerate()
        .filter(|&(_, n)| n > 0)
        .map(|(c, n)| (c as u64, n))
        .collect();

    let passed = saw_generic && (jumping.is_none() || saw_jumping) && offending.is_empty();
    Ok(StrataReport {
        rank,
        d,
        min_part,
        generic_codim: stratum_codim(&generic),
        generic,
        jumping: jumping.map(|j| {
            let c = stratum_codim(&j);
            (j, c)
        }),
        codim_histogram: histogram,
        offending,
        types_checked,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lf(parts: &[i64]) -> SplittingType {
        SplittingType::locally_free(parts.to_vec()).unwrap()
    }

    fn locally_free_slice(rank: usize, deg: i64, min_part: i64) -> Vec<SplittingType> {
        enumerate_splitting_types(rank, deg, min_part)
            .unwrap()
            .into_iter()
            .filter(SplittingType::is_locally_free)
            .collect()
    }

    /// h¹(O(n)) on P¹, from Serre duality h¹(O(n)) = h⁰(O(-2-n)).
    fn h1_line(n: i64) -> u64 {
        let dual = -2 - n;
        if dual < 0 {
            0
        } else {
            dual as u64 + 1
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(locally_free_slice(2, -1, -2), vec![lf(&[0, -1]), lf(&[1, -2])]);
        assert_eq!(locally_free_slice(2, 0, -1), vec![lf(&[0, 0]), lf(&[1, -1])]);
        assert_eq!(enumerate_splitting_types(1, 0, 0).unwrap(), vec![lf(&[0])]);
        assert!(enumerate_splitting_types(2, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn enumeration_with_torsion() {
        let all = enumerate_splitting_types(2, -1, -2).unwrap();
        let torsion: Vec<_> = all.iter().filter(|s| !s.is_locally_free()).collect();
        // t = 1: degree -2 bundles (-1,-1), (0,-2); t = 2: (-1,-2); t = 3: (-2,-2)
        assert_eq!(torsion.len(), 4);
        for s in &all {
            assert_eq!(s.degree(), -1);
            assert!(s.parts().iter().all(|&a| a >= -2));
        }
    }

    #[test]
    fn codim_examples() {
        for r in 2..=6 {
            for d in 1..r {
                assert_eq!(stratum_codim(&SplittingType::generic(r, d)), 0);
            }
            assert_eq!(stratum_codim(&SplittingType::jumping(r)), 1);
        }
        assert_eq!(stratum_codim(&lf(&[1, -2])), 2);
        assert_eq!(stratum_codim(&SplittingType::new(vec![0, -1], 1).unwrap()), 3);
    }

    #[test]
    fn invalid_types() {
        assert!(SplittingType::locally_free(vec![]).is_err());
        assert!(SplittingType::locally_free(vec![-1, 0]).is_err());
    }

    #[test]
    fn stratification_examples() {
        assert!(verify_lemma_p1(2, 1, -10).unwrap().passed);
        let r = verify_lemma_p1(2, 0, -10).unwrap();
        assert!(r.passed);
        assert_eq!(r.jumping, Some((lf(&[1, -1]), 1)));
        assert!(verify_lemma_p1(6, 3, -8).unwrap().passed);
        assert_eq!(verify_lemma_p1(3, 1, 0), Err(Error::WindowTooSmall { min_part: 0 }));
        assert!(verify_lemma_p1(1, 0, -10).is_err());
        assert!(verify_lemma_p1(3, 3, -10).is_err());
    }

    #[test]
    fn torsion_spot_check() {
        for r in 1..=6usize {
            let s = SplittingType::new(SplittingType::generic(r, 1).parts().to_vec(), 1).unwrap();
            assert_eq!(s.degree(), 0);
            assert_eq!(stratum_codim(&s), r as u64 + 1);
        }
    }

    fn arb_type() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-10i64..=10, 1..=6).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
    }

    proptest! {
        #[test]
        fn closed_form_matches_h1_table(parts in arb_type()) {
            let table: u64 = parts
                .iter()
                .flat_map(|&ai| parts.iter().map(move |&aj| h1_line(ai - aj)))
                .sum();
            prop_assert_eq!(ext1_locally_free(&parts), table);
        }

        #[test]
        fn codim_is_twist_invariant(parts in arb_type(), shift in -5i64..=5, t in 0u32..3) {
            let s = SplittingType::new(parts.clone(), t).unwrap();
            let shifted = SplittingType::new(parts.iter().map(|a| a + shift).collect(), t).unwrap();
            prop_assert_eq!(stratum_codim(&s), stratum_codim(&shifted));
        }
    }
}
