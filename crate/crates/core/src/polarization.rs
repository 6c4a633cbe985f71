//! Polarizations `H` with `H·(K_S + f) < 0`.
//!
//! On a geometrically ruled surface with `e >= 0`, `H = aσ + bf` is ample iff
//! `a > 0` and `b > ae`, and `H·(K_S + f) = 2g - 1 + e - 2b` when `a = 1`. A
//! blowup `α: S → S₁` with exceptional curve `E` carries `H = 2α*H₁ - E`,
//! which is ample whenever `H₁` is and satisfies
//! `H·(K_S + f) = 2·H₁·(K_{S₁} + f) + 1`.
//!
//! Ampleness of arbitrary classes on blown-up surfaces is not decided: a
//! class is reported [`Ampleness::Ample`] only if it unwinds through the
//! recursion above to an ample class on the base.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{DivisorClass, RuledSurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ampleness {
    Ample,
    NotAmple,
    /// Positive on `H²` and on the curves `σ, f, E_i, f - E_i`, but with no
    /// construction certificate.
    NecessaryChecksPassed,
}

impl Ampleness {
    pub fn as_str(self) -> &'static str {
        match self {
            Ampleness::Ample => "ample",
            Ampleness::NotAmple => "not-ample",
            Ampleness::NecessaryChecksPassed => "necessary-checks-passed",
        }
    }
}

/// The integer `H·(K_S + f)`.
pub fn theorem_condition(surface: &RuledSurface, h: &DivisorClass) -> Result<i64> {
    let kf = surface.canonical_class() + surface.fiber_class();
    surface.intersect(h, &kf)
}

/// Decide ampleness on the base; on blowups, look for a certificate and
/// otherwise fall back to Nakai-style checks against a fixed curve list.
pub fn is_ample(surface: &RuledSurface, h: &DivisorClass) -> Result<Ampleness> {
    surface.check(h)?;
    if surface.is_geometrically_ruled() {
        let (a, b) = (h.sigma(), h.fiber());
        let ample = a > 0 && b > a * surface.e_invariant();
        return Ok(if ample { Ampleness::Ample } else { Ampleness::NotAmple });
    }
    if has_certificate(surface, h)? {
        return Ok(Ampleness::Ample);
    }
    Ok(if necessary_checks(surface, h)? {
        Ampleness::NecessaryChecksPassed
    } else {
        Ampleness::NotAmple
    })
}

/// Whether `h` is `2α*H₁ - E_n` with `H₁` certified on the blowdown,
/// recursively down to an ample class on the base.
fn has_certificate(surface: &RuledSurface, h: &DivisorClass) -> Result<bool> {
    let mut s = *surface;
    let mut class = h.coeffs().to_vec();
    while !s.is_geometrically_ruled() {
        if class.pop() != Some(-1) || class.iter().any(|c| c % 2 != 0) {
            return Ok(false);
        }
        class.iter_mut().for_each(|c| *c /= 2);
        s = s.blow_down()?;
    }
    Ok(is_ample(&s, &s.class(class)?)? == Ampleness::Ample)
}

fn necessary_checks(surface: &RuledSurface, h: &DivisorClass) -> Result<bool> {
    if surface.self_intersection(h)? <= 0 {
        return Ok(false);
    }
    let f = surface.fiber_class();
    let mut curves = vec![surface.section_class(), f.clone()];
    for i in 1..=surface.blowup_count() {
        let e = surface.exceptional_class(i);
        curves.push(&f - &e);
        curves.push(e);
    }
    for c in &curves {
        if surface.intersect(h, c)? <= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal `b` with `σ + bf` ample and `2g - 1 + e - 2b < 0`.
fn minimal_fiber_coefficient(genus: i64, e: i64) -> i64 {
    // b > (2g - 1 + e)/2, with the numerator possibly odd
    let from_condition = (2 * genus - 1 + e).div_euclid(2) + 1;
    from_condition.max(e + 1)
}

/// One level of the recursive construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationLevel {
    pub blowups: usize,
    pub class: DivisorClass,
    pub condition: i64,
}

/// The polarizations built on `F(g, e)`, then on each successive blowup up
/// to `surface`, with their `H·(K_S + f)` values.
pub fn polarization_tower(surface: &RuledSurface) -> Result<Vec<PolarizationLevel>> {
    let mut s = surface.base();
    let b = minimal_fiber_coefficient(s.genus(), s.e_invariant());
    let mut h = s.class(vec![1, b])?;
    let mut levels = vec![PolarizationLevel {
        blowups: 0,
        condition: theorem_condition(&s, &h)?,
        class: h.clone(),
    }];
    while s.blowup_count() < surface.blowup_count() {
        let up = s.blow_up();
        h = 2 * s.pullback_class(&h)? - up.exceptional_class(up.blowup_count());
        s = up;
        levels.push(PolarizationLevel {
            blowups: s.blowup_count(),
            condition: theorem_condition(&s, &h)?,
            class: h.clone(),
        });
    }
    Ok(levels)
}

/// An ample `H` with `H·(K_S + f) < 0`.
pub fn construct_good_polarization(surface: &RuledSurface) -> Result<DivisorClass> {
    let mut levels = polarization_tower(surface)?;
    Ok(levels.pop().expect("tower always has a base level").class)
}
