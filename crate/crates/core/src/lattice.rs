//! The Néron–Severi lattice of a birationally ruled surface.
//!
//! A surface is modeled as a geometrically ruled surface `π: S₀ → C` over a
//! curve of genus `g`, normalized by a section `σ` with `σ² = -e`, followed
//! by an ordered chain of blowups at general points. Divisor classes are
//! integer vectors in the basis `(σ, f, E_1, …, E_n)`, where `f` is the fiber
//! class and `E_i` is the exceptional curve of the `i`-th blowup.
//!
//! General position means every `E_i` pairs to zero with `σ`, `f` and every
//! other `E_j`, so the intersection form is
//!
//! ```text
//! (aσ + bf + Σ c_i E_i)·(a'σ + b'f + Σ c'_i E_i) = -e·aa' + ab' + a'b - Σ c_i c'_i
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A birationally ruled surface: a geometrically ruled base with invariants
/// `(g, e)` blown up at `blowups` general points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuledSurface {
    genus: i64,
    e: i64,
    blowups: usize,
}

impl RuledSurface {
    /// The geometrically ruled surface `F(g, e)` with basis `(σ, f)`.
    ///
    /// Surfaces with `e < 0` are rejected: the ampleness criterion used by
    /// [`crate::polarization`] is only available for `e >= 0`.
    pub fn geometrically_ruled(genus: i64, e: i64) -> Result<Self> {
        if genus < 0 {
            return Err(Error::NegativeGenus(genus));
        }
        if e < 0 {
            return Err(Error::UnsupportedSurface { e });
        }
        Ok(Self { genus, e, blowups: 0 })
    }

    /// `F(g, e)` blown up at `blowups` general points.
    pub fn with_blowups(genus: i64, e: i64, blowups: usize) -> Result<Self> {
        let mut s = Self::geometrically_ruled(genus, e)?;
        s.blowups = blowups;
        Ok(s)
    }

    /// Blow up one more general point. The new exceptional class is
    /// `E_{n+1}`; classes of `self` embed by [`DivisorClass::pullback`].
    pub fn blow_up(&self) -> Self {
        Self {
            blowups: self.blowups + 1,
            ..*self
        }
    }

    /// Contract the most recently created exceptional curve.
    pub fn blow_down(&self) -> Result<Self> {
        if self.blowups == 0 {
            return Err(Error::NoBlowdown);
        }
        Ok(Self {
            blowups: self.blowups - 1,
            ..*self
        })
    }

    /// The geometrically ruled surface this one was built from.
    pub fn base(&self) -> Self {
        Self { blowups: 0, ..*self }
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn e_invariant(&self) -> i64 {
        self.e
    }

    pub fn blowup_count(&self) -> usize {
        self.blowups
    }

    /// Picard number `ρ = 2 + n`.
    pub fn picard_number(&self) -> usize {
        2 + self.blowups
    }

    pub fn is_geometrically_ruled(&self) -> bool {
        self.blowups == 0
    }

    /// Wrap a coordinate vector, checking its length against `ρ`.
    pub fn class(&self, coeffs: Vec<i64>) -> Result<DivisorClass> {
        let class = DivisorClass(coeffs);
        self.check(&class)?;
        Ok(class)
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass(vec![0; self.picard_number()])
    }

    /// The minimal section `σ` (pulled back to the blowup).
    pub fn section_class(&self) -> DivisorClass {
        self.basis_vector(0)
    }

    /// The fiber class `f = (0, 1, 0, …, 0)`.
    pub fn fiber_class(&self) -> DivisorClass {
        self.basis_vector(1)
    }

    /// The exceptional class `E_i`, with `i` counted from 1.
    ///
    /// # Panics
    ///
    /// If `i` is 0 or exceeds the number of blowups.
    pub fn exceptional_class(&self, i: usize) -> DivisorClass {
        assert!(
            (1..=self.blowups).contains(&i),
            "exceptional class E_{i} does not exist on a surface with {} blowups",
            self.blowups
        );
        self.basis_vector(1 + i)
    }

    fn basis_vector(&self, idx: usize) -> DivisorClass {
        let mut v = vec![0; self.picard_number()];
        v[idx] = 1;
        DivisorClass(v)
    }

    /// Canonical class: `-2σ + (2g - 2 - e)f` on the base, and each blowup
    /// adds its exceptional class, `K_S = α*K_{S₁} + E`.
    pub fn canonical_class(&self) -> DivisorClass {
        let mut v = Vec::with_capacity(self.picard_number());
        v.push(-2);
        v.push(2 * self.genus - 2 - self.e);
        v.extend(std::iter::repeat_n(1, self.blowups));
        DivisorClass(v)
    }

    pub(crate) fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.0.len() != self.picard_number() {
            return Err(Error::DimensionMismatch {
                expected: self.picard_number(),
                found: d.0.len(),
            });
        }
        Ok(())
    }

    /// The intersection number `D1·D2`.
    pub fn intersect(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<i64> {
        self.check(d1)?;
        self.check(d2)?;
        let (a, b) = (d1.0[0], d1.0[1]);
        let (a2, b2) = (d2.0[0], d2.0[1]);
        let exceptional: i64 = d1.0[2..].iter().zip(&d2.0[2..]).map(|(x, y)| x * y).sum();
        Ok(-self.e * a * a2 + a * b2 + a2 * b - exceptional)
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> Result<i64> {
        self.intersect(d, d)
    }

    /// The Gram matrix of the form in the basis `(σ, f, E_1, …, E_n)`.
    pub fn gram_matrix(&self) -> Vec<Vec<i64>> {
        let rho = self.picard_number();
        let mut g = vec![vec![0; rho]; rho];
        g[0][0] = -self.e;
        g[0][1] = 1;
        g[1][0] = 1;
        for (i, row) in g.iter_mut().enumerate().skip(2) {
            row[i] = -1;
        }
        g
    }

    /// `α_*D` for the contraction of the last exceptional curve: drop the
    /// `E_n` coordinate. Satisfies `(α_*D)² = D² + (D·E_n)²`.
    pub fn pushforward_class(&self, d: &DivisorClass) -> Result<DivisorClass> {
        if self.blowups == 0 {
            return Err(Error::NoBlowdown);
        }
        self.check(d)?;
        let mut v = d.0.clone();
        v.pop();
        Ok(DivisorClass(v))
    }

    /// `α*D` for a class `D` on `self`, landing on `self.blow_up()`.
    pub fn pullback_class(&self, d: &DivisorClass) -> Result<DivisorClass> {
        self.check(d)?;
        Ok(d.pullback())
    }
}

impl fmt::Display for RuledSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F(g={}, e={})", self.genus, self.e)?;
        if self.blowups > 0 {
            write!(f, " blown up at {} point(s)", self.blowups)?;
        }
        Ok(())
    }
}

/// An integer class in `NS(S)`, in the basis `(σ, f, E_1, …, E_n)`.
///
/// Arithmetic between classes of different lengths panics; use
/// [`RuledSurface::class`] to validate untrusted coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(Vec<i64>);

impl DivisorClass {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Coefficient of `σ`.
    pub fn sigma(&self) -> i64 {
        self.0[0]
    }

    /// Coefficient of `f`.
    pub fn fiber(&self) -> i64 {
        self.0[1]
    }

    /// Coefficients of `E_1, …, E_n`.
    pub fn exceptional(&self) -> &[i64] {
        &self.0[2..]
    }

    /// Append a zero `E` coordinate: the pullback `α*D` to one more blowup.
    pub fn pullback(&self) -> DivisorClass {
        let mut v = self.0.clone();
        v.push(0);
        DivisorClass(v)
    }

    fn zip_with(&self, rhs: &DivisorClass, op: impl Fn(i64, i64) -> i64) -> DivisorClass {
        assert_eq!(self.0.len(), rhs.0.len(), "divisor classes live on different surfaces");
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(&a, &b)| op(a, b)).collect())
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|c| -c).collect())
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(rhs.0.iter().map(|c| self * c).collect())
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        self * &rhs
    }
}

impl fmt::Display for DivisorClass {
    /// Renders e.g. `2σ + 2f - E1`; the zero class renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = match i {
                0 => "σ".to_string(),
                1 => "f".to_string(),
                k => format!("E{}", k - 1),
            };
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            f.write_str(&name)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
