//! Chern-data bookkeeping on a ruled surface.
//!
//! Every formula here is Riemann–Roch on a surface with `χ(O_S) = 1 - g`,
//! which holds for every surface birational to a ruled surface over a
//! genus-`g` curve. The only rational output is [`slope`]; everything else is
//! an exact integer, and each halving is checked for parity.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, RuledSurface};

/// Numerical invariants `(r, c₁, c₂)` of a coherent sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernData {
    rank: i64,
    c1: DivisorClass,
    c2: i64,
}

impl ChernData {
    pub fn new(rank: i64, c1: DivisorClass, c2: i64) -> Result<Self> {
        if rank < 1 {
            return Err(Error::Rank { rank, min: 1 });
        }
        Ok(Self { rank, c1, c2 })
    }

    /// Like [`ChernData::new`] but also checks `c1` against `surface`.
    pub fn on(surface: &RuledSurface, rank: i64, c1: Vec<i64>, c2: i64) -> Result<Self> {
        Self::new(rank, surface.class(c1)?, c2)
    }

    /// Rank-zero data, for sheaves supported on curves.
    pub fn torsion(c1: DivisorClass, c2: i64) -> Self {
        Self { rank: 0, c1, c2 }
    }

    /// The structure sheaf `O_S`.
    pub fn trivial(surface: &RuledSurface) -> Self {
        Self {
            rank: 1,
            c1: surface.zero(),
            c2: 0,
        }
    }

    /// The line bundle `O_S(D)`.
    pub fn line_bundle(d: DivisorClass) -> Self {
        Self { rank: 1, c1: d, c2: 0 }
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn c1(&self) -> &DivisorClass {
        &self.c1
    }

    pub fn c2(&self) -> i64 {
        self.c2
    }
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, c1={}, c2={})", self.rank, self.c1, self.c2)
    }
}

fn half(what: &'static str, value: i64) -> Result<i64> {
    if value % 2 != 0 {
        return Err(Error::OddHalving { what, value });
    }
    Ok(value / 2)
}

fn check(surface: &RuledSurface, c: &ChernData) -> Result<()> {
    surface.check(&c.c1)
}

/// Chern data of `E ⊗ O(L)`:
/// `c₁' = c₁ + rL`, `c₂' = c₂ + (r-1)(L·c₁) + r(r-1)/2 · L²`.
pub fn chern_of_twist(surface: &RuledSurface, c: &ChernData, l: &DivisorClass) -> Result<ChernData> {
    check(surface, c)?;
    let r = c.rank;
    let l_c1 = surface.intersect(l, &c.c1)?;
    let l2 = surface.self_intersection(l)?;
    Ok(ChernData {
        rank: r,
        c1: &c.c1 + &(r * l),
        // r(r-1) is always even
        c2: c.c2 + (r - 1) * l_c1 + r * (r - 1) / 2 * l2,
    })
}

/// Chern data of a direct sum: ranks and first Chern classes add, and
/// `c₂(A ⊕ B) = c₂(A) + c₂(B) + c₁(A)·c₁(B)`.
pub fn direct_sum(surface: &RuledSurface, a: &ChernData, b: &ChernData) -> Result<ChernData> {
    check(surface, a)?;
    check(surface, b)?;
    Ok(ChernData {
        rank: a.rank + b.rank,
        c1: &a.c1 + &b.c1,
        c2: a.c2 + b.c2 + surface.intersect(&a.c1, &b.c1)?,
    })
}

/// Riemann–Roch: `χ(E) = r(1-g) + c₁·(c₁ - K)/2 - c₂`.
pub fn euler_char(surface: &RuledSurface, c: &ChernData) -> Result<i64> {
    check(surface, c)?;
    let k = surface.canonical_class();
    let c1_c1_minus_k = surface.intersect(&c.c1, &(&c.c1 - &k))?;
    Ok(c.rank * (1 - surface.genus()) + half("c1·(c1-K)", c1_c1_minus_k)? - c.c2)
}

/// `χ(A, B) = Σ (-1)^i dim Ext^i(A, B)`, from `∫ ch(A)^∨ ch(B) td(S)`:
///
/// ```text
/// χ(A,B) = r_A r_B (1-g)
///        + r_A (c₁B² - c₁B·K)/2 + r_B (c₁A² + c₁A·K)/2
///        - r_A c₂B - r_B c₂A - c₁A·c₁B
/// ```
pub fn euler_pairing(surface: &RuledSurface, a: &ChernData, b: &ChernData) -> Result<i64> {
    check(surface, a)?;
    check(surface, b)?;
    let k = surface.canonical_class();
    let b_term = surface.intersect(&b.c1, &(&b.c1 - &k))?;
    let a_term = surface.intersect(&a.c1, &(&a.c1 + &k))?;
    let cross = surface.intersect(&a.c1, &b.c1)?;
    Ok(a.rank * b.rank * (1 - surface.genus())
        + a.rank * half("c1B·(c1B-K)", b_term)?
        + b.rank * half("c1A·(c1A+K)", a_term)?
        - a.rank * b.c2
        - b.rank * a.c2
        - cross)
}

/// Bogomolov discriminant `Δ = 2r·c₂ - (r-1)·c₁²`.
pub fn discriminant(surface: &RuledSurface, c: &ChernData) -> Result<i64> {
    check(surface, c)?;
    Ok(2 * c.rank * c.c2 - (c.rank - 1) * surface.self_intersection(&c.c1)?)
}

/// `μ_H = (H·c₁)/r`.
pub fn slope(surface: &RuledSurface, h: &DivisorClass, c: &ChernData) -> Result<Ratio<i64>> {
    check(surface, c)?;
    Ok(Ratio::new(surface.intersect(h, &c.c1)?, c.rank))
}

/// Dimension of the (smooth) stack of sheaves at a point with these
/// invariants: `-χ(E, E) = Δ - r²(1-g)`. Negative values are allowed.
pub fn stack_dim(surface: &RuledSurface, c: &ChernData) -> Result<i64> {
    Ok(-euler_pairing(surface, c, c)?)
}

/// Chern data of `π*K` for a bundle `K` of rank `n` and degree `k` on the
/// base curve: `(n, k·f, 0)`.
pub fn pullback_from_curve(surface: &RuledSurface, n: i64, k: i64) -> Result<ChernData> {
    if !surface.is_geometrically_ruled() {
        return Err(Error::NotGeometricallyRuled {
            blowups: surface.blowup_count(),
        });
    }
    ChernData::new(n, k * surface.fiber_class(), 0)
}

/// Chern data `(0, t·f, 0)` of `π*T` for a torsion sheaf `T` of length `t`
/// on the base curve.
pub fn pullback_torsion_from_curve(surface: &RuledSurface, length: i64) -> Result<ChernData> {
    if !surface.is_geometrically_ruled() {
        return Err(Error::NotGeometricallyRuled {
            blowups: surface.blowup_count(),
        });
    }
    Ok(ChernData::torsion(length * surface.fiber_class(), 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surface(g: i64, e: i64, n: usize) -> RuledSurface {
        RuledSurface::with_blowups(g, e, n).unwrap()
    }

    fn cd(s: &RuledSurface, r: i64, c1: Vec<i64>, c2: i64) -> ChernData {
        ChernData::on(s, r, c1, c2).unwrap()
    }

    /// χ(O(aσ + bf)) on F(0, e), by pushing forward to P¹:
    /// π_*O(aσ) = ⊕_{i=0..a} O(-ie) for a ≥ 0, Rπ_* = 0 for a = -1, and
    /// Serre duality χ(D) = χ(K - D) for a ≤ -2.
    fn hirzebruch_line_chi(e: i64, a: i64, b: i64) -> i64 {
        match a {
            a if a >= 0 => (0..=a).map(|i| b - i * e + 1).sum(),
            -1 => 0,
            a => hirzebruch_line_chi(e, -2 - a, -2 - e - b),
        }
    }

    /// χ(⊕O(D_i), ⊕O(D'_j)) = Σ χ(O(D'_j - D_i)) on F(0, e).
    fn split_pairing_oracle(e: i64, a: &[(i64, i64)], b: &[(i64, i64)]) -> i64 {
        let mut total = 0;
        for &(a1, b1) in a {
            for &(a2, b2) in b {
                total += hirzebruch_line_chi(e, a2 - a1, b2 - b1);
            }
        }
        total
    }

    fn split_chern(s: &RuledSurface, lines: &[(i64, i64)]) -> ChernData {
        lines
            .iter()
            .map(|&(a, b)| ChernData::line_bundle(s.class(vec![a, b]).unwrap()))
            .reduce(|x, y| direct_sum(s, &x, &y).unwrap())
            .unwrap()
    }

    #[test]
    fn twist_examples() {
        let s = surface(0, 0, 1);
        let rank_one = cd(&s, 1, vec![1, 3, -2], 0);
        assert_eq!(chern_of_twist(&s, &rank_one, &s.section_class()).unwrap().c2(), 0);

        let c = cd(&s, 2, vec![1, 0, -1], 1);
        let twisted = chern_of_twist(&s, &c, &s.exceptional_class(1)).unwrap();
        assert_eq!(twisted, cd(&s, 2, vec![1, 0, 1], 1));

        let l = s.class(vec![2, -1, 3]).unwrap();
        let back = chern_of_twist(&s, &chern_of_twist(&s, &c, &l).unwrap(), &-&l).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn euler_char_examples() {
        let f20 = surface(2, 0, 0);
        assert_eq!(euler_char(&f20, &ChernData::trivial(&f20)).unwrap(), -1);
        let f00 = surface(0, 0, 0);
        assert_eq!(euler_char(&f00, &cd(&f00, 1, vec![1, 0], 0)).unwrap(), 2);
        assert_eq!(euler_char(&f00, &cd(&f00, 2, vec![1, 0], 0)).unwrap(), 3);
    }

    #[test]
    fn euler_pairing_examples() {
        for (g, e) in [(0, 0), (1, 2), (3, 4)] {
            let s = surface(g, e, 0);
            let o = ChernData::trivial(&s);
            assert_eq!(euler_pairing(&s, &o, &o).unwrap(), 1 - g);
        }
        let f00 = surface(0, 0, 0);
        let e = cd(&f00, 2, vec![-1, 0], 0);
        assert_eq!(euler_pairing(&f00, &e, &e).unwrap(), 4);
        let e = cd(&f00, 2, vec![0, 0], 1);
        assert_eq!(euler_pairing(&f00, &e, &e).unwrap(), 0);
    }

    #[test]
    fn discriminant_and_slope_examples() {
        let f00 = surface(0, 0, 0);
        assert_eq!(discriminant(&f00, &cd(&f00, 2, vec![0, 0], 1)).unwrap(), 4);
        assert_eq!(discriminant(&f00, &cd(&f00, 2, vec![1, 1], 2)).unwrap(), 6);
        let h = f00.class(vec![1, 2]).unwrap();
        assert_eq!(slope(&f00, &h, &cd(&f00, 2, vec![0, 1], 0)).unwrap(), Ratio::new(1, 2));
        assert_eq!(
            slope(&f00, &h, &ChernData::trivial(&f00)).unwrap(),
            Ratio::from_integer(0)
        );
    }

    #[test]
    fn stack_dim_examples() {
        let f00 = surface(0, 0, 0);
        assert_eq!(stack_dim(&f00, &cd(&f00, 2, vec![0, 0], 1)).unwrap(), 0);
        assert_eq!(stack_dim(&f00, &cd(&f00, 2, vec![-1, 0], 0)).unwrap(), -4);
        let b = surface(0, 0, 1);
        assert_eq!(stack_dim(&b, &cd(&b, 2, vec![1, 0, 1], 1)).unwrap(), 1);
    }

    #[test]
    fn pullback_from_curve_examples() {
        let f00 = surface(0, 0, 0);
        assert_eq!(pullback_from_curve(&f00, 1, 0).unwrap(), ChernData::trivial(&f00));
        let k = pullback_from_curve(&f00, 2, 3).unwrap();
        assert_eq!(k, cd(&f00, 2, vec![0, 3], 0));
        assert_eq!(f00.self_intersection(k.c1()).unwrap(), 0);
        for g in 0..4 {
            let s = surface(g, 0, 0);
            for deg in -5..=5 {
                let line = pullback_from_curve(&s, 1, deg).unwrap();
                assert_eq!(euler_char(&s, &line).unwrap(), deg + 1 - g);
            }
        }
        assert_eq!(
            pullback_from_curve(&surface(0, 0, 1), 1, 0),
            Err(Error::NotGeometricallyRuled { blowups: 1 })
        );
        assert_eq!(pullback_from_curve(&f00, 0, 0), Err(Error::Rank { rank: 0, min: 1 }));
    }

    #[test]
    fn euler_pairing_matches_split_bundle_oracle() {
        // exhaustive over small split bundles of rank <= 2 on F(0, e)
        let lines: Vec<(i64, i64)> = (-3..=3).flat_map(|a| (-3..=3).map(move |b| (a, b))).collect();
        for e in 0..=3 {
            let s = surface(0, e, 0);
            for &x in &lines {
                for &y in &lines {
                    let a = [x];
                    let b = [y, (x.0 + y.0 - 1, x.1 - y.1)];
                    for (lhs, rhs) in [(&a[..], &b[..1]), (&a[..], &b[..]), (&b[..], &a[..]), (&b[..], &b[..])] {
                        let expected = split_pairing_oracle(e, lhs, rhs);
                        let got = euler_pairing(&s, &split_chern(&s, lhs), &split_chern(&s, rhs)).unwrap();
                        assert_eq!(got, expected, "e={e} A={lhs:?} B={rhs:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn twist_matches_chern_character_product() {
        // 2ch = (2r, 2c1, c1² - 2c2); ch(E⊗L) = ch(E)·ch(L)
        let s = surface(1, 2, 2);
        let c = cd(&s, 3, vec![1, -2, 1, 0], 4);
        let l = s.class(vec![-1, 3, 2, -1]).unwrap();
        let t = chern_of_twist(&s, &c, &l).unwrap();
        let i = |x: &DivisorClass, y: &DivisorClass| s.intersect(x, y).unwrap();
        let two_ch2 = i(c.c1(), c.c1()) - 2 * c.c2();
        let two_ch2_twisted = two_ch2 + 2 * i(c.c1(), &l) + c.rank() * i(&l, &l);
        assert_eq!(t.c1(), &(c.c1() + &(3 * &l)));
        assert_eq!(i(t.c1(), t.c1()) - 2 * t.c2(), two_ch2_twisted);
    }

    fn arb_case() -> impl Strategy<Value = (RuledSurface, ChernData, ChernData, DivisorClass)> {
        (0i64..=3, 0i64..=4, 0usize..=5).prop_flat_map(|(g, e, n)| {
            let s = surface(g, e, n);
            let rho = s.picard_number();
            let coords = || prop::collection::vec(-8i64..=8, rho);
            (
                Just(s),
                1i64..=6,
                coords(),
                -40i64..=40,
                1i64..=6,
                coords(),
                -40i64..=40,
                coords(),
            )
                .prop_map(|(s, ra, ca, c2a, rb, cb, c2b, l)| {
                    let a = ChernData::on(&s, ra, ca, c2a).unwrap();
                    let b = ChernData::on(&s, rb, cb, c2b).unwrap();
                    let l = s.class(l).unwrap();
                    (s, a, b, l)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn euler_char_is_additive((s, a, b, _l) in arb_case()) {
            let sum = direct_sum(&s, &a, &b).unwrap();
            prop_assert_eq!(
                euler_char(&s, &sum).unwrap(),
                euler_char(&s, &a).unwrap() + euler_char(&s, &b).unwrap()
            );
        }

        #[test]
        fn euler_pairing_is_biadditive((s, a, b, l) in arb_case()) {
            let c = chern_of_twist(&s, &a, &l).unwrap();
            let bc = direct_sum(&s, &b, &c).unwrap();
            let chi = |x: &ChernData, y: &ChernData| euler_pairing(&s, x, y).unwrap();
            prop_assert_eq!(chi(&a, &bc), chi(&a, &b) + chi(&a, &c));
            prop_assert_eq!(chi(&bc, &a), chi(&b, &a) + chi(&c, &a));
            prop_assert_eq!(chi(&ChernData::trivial(&s), &b), euler_char(&s, &b).unwrap());
        }

        #[test]
        fn serre_duality_for_line_bundles((s, a, b, _l) in arb_case()) {
            let s = s.base();
            let cut = |c: &ChernData| c.c1().coeffs()[..2].to_vec();
            let la = ChernData::on(&s, 1, cut(&a), 0).unwrap();
            let lb = ChernData::on(&s, 1, cut(&b), 0).unwrap();
            let lak = chern_of_twist(&s, &la, &s.canonical_class()).unwrap();
            prop_assert_eq!(euler_pairing(&s, &la, &lb).unwrap(), euler_pairing(&s, &lb, &lak).unwrap());
        }

        #[test]
        fn twist_invariants((s, a, _b, l) in arb_case()) {
            let t = chern_of_twist(&s, &a, &l).unwrap();
            prop_assert_eq!(discriminant(&s, &t).unwrap(), discriminant(&s, &a).unwrap());
            prop_assert_eq!(stack_dim(&s, &t).unwrap(), stack_dim(&s, &a).unwrap());
            let h = s.class(l.coeffs().iter().map(|x| x + 1).collect()).unwrap();
            let shift = Ratio::from_integer(s.intersect(&h, &l).unwrap());
            prop_assert_eq!(slope(&s, &h, &t).unwrap(), slope(&s, &h, &a).unwrap() + shift);
        }

        #[test]
        fn stack_dim_is_discriminant_shift((s, a, _b, _l) in arb_case()) {
            let r = a.rank();
            prop_assert_eq!(
                stack_dim(&s, &a).unwrap(),
                discriminant(&s, &a).unwrap() - r * r * (1 - s.genus())
            );
        }
    }
}
