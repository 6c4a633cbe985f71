//! Numeric trace of the reduction of prioritary-sheaf data to the
//! geometrically ruled case.
//!
//! Starting from Chern data on `F(g, e)` blown up `n` times, each level
//!
//! 1. twists by `nE_last` so that `d = -c₁·E_last` lies in `[0, r)`;
//! 2. blows down `E_last`, sending `(r, c₁, c₂)` to `(r, α_*c₁, c₂ + d(d-1)/2)`
//!    and recording the `d(r - d)`-dimensional Grassmannian fiber.
//!
//! On the base, a twist by `nσ` puts `d = -c₁·f` into `[0, r)`, and the data
//! splits as `0 → π*K → E → π*L ⊗ Ω_{S/C}(σ) → 0` with `K` of rank `r - d` and
//! degree `k`, `L` of rank `d` and degree `l` on the base curve.
//!
//! Every step is audited against stack dimensions computed independently by
//! [`crate::invariants`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{
    chern_of_twist, direct_sum, discriminant, euler_char, euler_pairing, pullback_from_curve,
    pullback_torsion_from_curve, stack_dim, ChernData,
};
use crate::lattice::{DivisorClass, RuledSurface};
use crate::polarization::theorem_condition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistDirection {
    /// Twist by multiples of `σ`, normalizing `-c₁·f`.
    Fiber,
    /// Twist by multiples of the last exceptional class, normalizing `-c₁·E_n`.
    ExceptionalLast,
}

/// Twist `c` so that its `d` lies in `[0, r)`. Returns the twist amount `n`
/// (the class twisted by is `nσ` or `nE_n`) and the twisted data.
pub fn normalize_twist(surface: &RuledSurface, c: &ChernData, direction: TwistDirection) -> Result<(i64, ChernData)> {
    let r = c.rank();
    let (class, along) = match direction {
        TwistDirection::Fiber => {
            if !surface.is_geometrically_ruled() {
                return Err(Error::NotGeometricallyRuled {
                    blowups: surface.blowup_count(),
                });
            }
            (surface.section_class(), surface.fiber_class())
        }
        TwistDirection::ExceptionalLast => {
            let n = surface.blowup_count();
            if n == 0 {
                return Err(Error::NoBlowdown);
            }
            let e = surface.exceptional_class(n);
            (e.clone(), e)
        }
    };
    let d = -surface.intersect(c.c1(), &along)?;
    // twisting by n·class moves d by -r·n·(class·along): -1 for σ·f, +1 for E·E
    let step = -surface.intersect(&class, &along)?;
    let n = match step {
        -1 => d.div_euclid(r),
        1 => -d.div_euclid(r),
        _ => unreachable!("σ·f = 1 and E² = -1"),
    };
    let twisted = chern_of_twist(surface, c, &(n * &class))?;
    let d_new = -surface.intersect(twisted.c1(), &along)?;
    assert!(
        (0..r).contains(&d_new),
        "normalization left d = {d_new} outside [0, {r})"
    );
    Ok((n, twisted))
}

/// `d = -c₁·E_n` on the last exceptional curve.
fn exceptional_degree(surface: &RuledSurface, c: &ChernData) -> Result<i64> {
    let e = surface.exceptional_class(surface.blowup_count());
    Ok(-surface.intersect(c.c1(), &e)?)
}

/// Contract `E_n`. Requires `0 <= d = -c₁·E_n < r`. Returns the blown-down
/// surface, the Chern data `(r, α_*c₁, c₂ + d(d-1)/2)` there, and the
/// Grassmannian fiber dimension `d(r - d)`.
pub fn blowdown_step(surface: &RuledSurface, c: &ChernData) -> Result<(RuledSurface, ChernData, i64)> {
    let down = surface.blow_down()?;
    let r = c.rank();
    let d = exceptional_degree(surface, c)?;
    if !(0..r).contains(&d) {
        return Err(Error::NotNormalized { along: "E", d, rank: r });
    }
    let c1 = surface.pushforward_class(c.c1())?;
    let pushed = ChernData::new(r, c1, c.c2() + d * (d - 1) / 2)?;
    Ok((down, pushed, d * (r - d)))
}

/// The base-case splitting `0 → A → E → B → 0` with `A = π*K` and
/// `B = π*L ⊗ Ω_{S/C}(σ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCaseData {
    pub d: i64,
    pub k_rank: i64,
    pub k_deg: i64,
    pub l_rank: i64,
    pub l_deg: i64,
    /// `-χ(B, A)`.
    pub ext_dim_b_to_a: i64,
    /// Chern data of `A = π*K`.
    pub sub: ChernData,
    /// Chern data of `B`; rank zero when `d = 0`, where `L` is torsion.
    pub quotient: ChernData,
}

/// Class of `Ω_{S/C}(σ) = K_S - π*K_C + σ = -σ - ef` on `F(g, e)`.
pub fn relative_cotangent_class(surface: &RuledSurface) -> DivisorClass {
    let e = surface.e_invariant();
    -(surface.section_class() + e * surface.fiber_class())
}

/// Extract `(d, k, l)` on a geometrically ruled surface, for data already
/// normalized along the fiber.
pub fn base_case_data(surface: &RuledSurface, c: &ChernData) -> Result<BaseCaseData> {
    if !surface.is_geometrically_ruled() {
        return Err(Error::NotGeometricallyRuled {
            blowups: surface.blowup_count(),
        });
    }
    let r = c.rank();
    let g = surface.genus();
    let d = -surface.intersect(c.c1(), &surface.fiber_class())?;
    if !(0..r).contains(&d) {
        return Err(Error::NotNormalized { along: "f", d, rank: r });
    }
    let chi = euler_char(surface, c)?;
    let c1_sigma = surface.intersect(c.c1(), &surface.section_class())?;
    let k = chi + (r - d) * (g - 1);
    let l = -chi + c1_sigma - (r - d) * (g - 1);

    let sub = pullback_from_curve(surface, r - d, k)?;
    // for d = 0, L is torsion of length l, supported where E|_f jumps
    let l_side = if d > 0 {
        pullback_from_curve(surface, d, l)?
    } else {
        pullback_torsion_from_curve(surface, l)?
    };
    let quotient = chern_of_twist(surface, &l_side, &relative_cotangent_class(surface))?;
    let ext_dim_b_to_a = -euler_pairing(surface, &quotient, &sub)?;
    Ok(BaseCaseData {
        d,
        k_rank: r - d,
        k_deg: k,
        l_rank: d,
        l_deg: l,
        ext_dim_b_to_a,
        sub,
        quotient,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    TwistFiber,
    TwistExceptional,
    Blowdown,
    BaseCase,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::TwistFiber => "twist-fiber",
            StepKind::TwistExceptional => "twist-exceptional",
            StepKind::Blowdown => "blowdown",
            StepKind::BaseCase => "base-case",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    /// Twist amount; 0 for blowdown and base-case steps.
    pub twist_amount: i64,
    pub d: i64,
    /// `d(r - d)` for blowdowns, 0 otherwise.
    pub fiber_dim: i64,
    /// Surface carrying `before`.
    pub surface: RuledSurface,
    /// Surface carrying `after`; differs from `surface` only for blowdowns.
    pub target: RuledSurface,
    pub before: ChernData,
    pub after: ChernData,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditKind {
    /// `stack_dim` is unchanged by a twist.
    TwistStackDim,
    /// `Δ` is unchanged by a twist.
    TwistDiscriminant,
    /// `stack_dim(S, c) = stack_dim(S₁, c') + d(r - d)`.
    BlowdownDimension,
    /// `stack_dim = (r-d)²(g-1) + d²(g-1) - χ(B, A)`.
    BaseCaseDimension,
    /// `χ(A, B) = 0`.
    BaseCaseVanishing,
    /// `χ(E) = χ(A) + χ(B)`.
    BaseCaseEulerChar,
    /// `A ⊕ B` has the Chern data of `E`; compares `c₂`, and fails on any
    /// rank or `c₁` mismatch.
    BaseCaseDecomposition,
}

impl AuditKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AuditKind::TwistStackDim => "twist-stack-dim",
            AuditKind::TwistDiscriminant => "twist-discriminant",
            AuditKind::BlowdownDimension => "blowdown-dimension",
            AuditKind::BaseCaseDimension => "base-case-dimension",
            AuditKind::BaseCaseVanishing => "base-case-vanishing",
            AuditKind::BaseCaseEulerChar => "base-case-euler-char",
            AuditKind::BaseCaseDecomposition => "base-case-decomposition",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Audit {
    pub step: usize,
    pub kind: AuditKind,
    pub expected: i64,
    pub actual: i64,
    /// Summands of `actual`, when it is a sum worth displaying.
    pub terms: Vec<i64>,
    pub passed: bool,
}

impl Audit {
    fn new(step: usize, kind: AuditKind, expected: i64, actual: i64, terms: Vec<i64>) -> Self {
        Self {
            step,
            kind,
            expected,
            actual,
            terms,
            passed: expected == actual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub start: RuledSurface,
    pub input: ChernData,
    pub steps: Vec<ReductionStep>,
    pub base: BaseCaseData,
    pub audits: Vec<Audit>,
}

impl ReductionTrace {
    pub fn audits_passed(&self) -> bool {
        self.audits.iter().all(|a| a.passed)
    }

    pub fn blowdowns(&self) -> usize {
        self.steps.iter().filter(|s| s.kind == StepKind::Blowdown).count()
    }
}

/// Run the full reduction for rank `r >= 2` and attach dimension audits.
pub fn run_reduction(surface: &RuledSurface, c: &ChernData) -> Result<ReductionTrace> {
    if c.rank() < 2 {
        return Err(Error::Rank { rank: c.rank(), min: 2 });
    }
    surface.check(c.c1())?;
    let r = c.rank();
    let mut steps = Vec::new();
    let mut s = *surface;
    let mut current = c.clone();

    while !s.is_geometrically_ruled() {
        let (n, twisted) = normalize_twist(&s, &current, TwistDirection::ExceptionalLast)?;
        let d = exceptional_degree(&s, &twisted)?;
        steps.push(ReductionStep {
            kind: StepKind::TwistExceptional,
            twist_amount: n,
            d,
            fiber_dim: 0,
            surface: s,
            target: s,
            before: current,
            after: twisted.clone(),
        });
        let (down, pushed, fiber_dim) = blowdown_step(&s, &twisted)?;
        steps.push(ReductionStep {
            kind: StepKind::Blowdown,
            twist_amount: 0,
            d,
            fiber_dim,
            surface: s,
            target: down,
            before: twisted,
            after: pushed.clone(),
        });
        s = down;
        current = pushed;
    }

    let (n, twisted) = normalize_twist(&s, &current, TwistDirection::Fiber)?;
    let base = base_case_data(&s, &twisted)?;
    debug_assert!((0..r).contains(&base.d));
    steps.push(ReductionStep {
        kind: StepKind::TwistFiber,
        twist_amount: n,
        d: base.d,
        fiber_dim: 0,
        surface: s,
        target: s,
        before: current,
        after: twisted.clone(),
    });
    steps.push(ReductionStep {
        kind: StepKind::BaseCase,
        twist_amount: 0,
        d: base.d,
        fiber_dim: 0,
        surface: s,
        target: s,
        before: twisted.clone(),
        after: twisted,
    });

    let mut trace = ReductionTrace {
        start: *surface,
        input: c.clone(),
        steps,
        base,
        audits: Vec::new(),
    };
    trace.audits = audit_dimensions(&trace)?;
    Ok(trace)
}

/// Recompute every dimension identity along the trace from scratch.
pub fn audit_dimensions(trace: &ReductionTrace) -> Result<Vec<Audit>> {
    let mut audits = Vec::new();
    for (i, step) in trace.steps.iter().enumerate() {
        let (s, t) = (&step.surface, &step.target);
        match step.kind {
            StepKind::TwistFiber | StepKind::TwistExceptional => {
                audits.push(Audit::new(
                    i,
                    AuditKind::TwistStackDim,
                    stack_dim(s, &step.before)?,
                    stack_dim(t, &step.after)?,
                    vec![],
                ));
                audits.push(Audit::new(
                    i,
                    AuditKind::TwistDiscriminant,
                    discriminant(s, &step.before)?,
                    discriminant(t, &step.after)?,
                    vec![],
                ));
            }
            StepKind::Blowdown => {
                let below = stack_dim(t, &step.after)?;
                audits.push(Audit::new(
                    i,
                    AuditKind::BlowdownDimension,
                    stack_dim(s, &step.before)?,
                    below + step.fiber_dim,
                    vec![below, step.fiber_dim],
                ));
            }
            StepKind::BaseCase => audits.extend(base_case_audits(i, s, &step.before, &trace.base)?),
        }
    }
    Ok(audits)
}

fn base_case_audits(step: usize, s: &RuledSurface, c: &ChernData, base: &BaseCaseData) -> Result<Vec<Audit>> {
    let g = s.genus();
    let sub_term = base.k_rank * base.k_rank * (g - 1);
    let quot_term = base.l_rank * base.l_rank * (g - 1);
    let b = &base.quotient;
    let chi_ba = euler_pairing(s, b, &base.sub)?;
    let chi_ab = euler_pairing(s, &base.sub, b)?;
    let chi_b = euler_char(s, b)?;
    let sum = direct_sum(s, &base.sub, b)?;
    let mut decomposition = Audit::new(step, AuditKind::BaseCaseDecomposition, c.c2(), sum.c2(), vec![]);
    decomposition.passed &= sum.rank() == c.rank() && sum.c1() == c.c1();
    Ok(vec![
        Audit::new(
            step,
            AuditKind::BaseCaseDimension,
            stack_dim(s, c)?,
            sub_term + quot_term - chi_ba,
            vec![sub_term, quot_term, -chi_ba],
        ),
        Audit::new(step, AuditKind::BaseCaseVanishing, 0, chi_ab, vec![]),
        Audit::new(
            step,
            AuditKind::BaseCaseEulerChar,
            euler_char(s, c)?,
            euler_char(s, &base.sub)? + chi_b,
            vec![euler_char(s, &base.sub)?, chi_b],
        ),
        decomposition,
    ])
}

/// Dimensions attached to the moduli space of stable sheaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliDims {
    /// `stack_dim + 1`: stable sheaves have only scalar automorphisms.
    pub dim_stable_moduli: i64,
    /// `dim - 2g`, the projective-space factor of `Jac(C) × Jac(C) × P^m`.
    pub m: i64,
    /// `2r·c₂ - (r-1)·c₁² + (r²-2)g - r² + 1`.
    pub m_closed_form: i64,
    /// True iff the base curve is rational.
    pub unirational: bool,
}

impl ModuliDims {
    pub fn routes_agree(&self) -> bool {
        self.m == self.m_closed_form
    }
}

pub fn moduli_dims(surface: &RuledSurface, c: &ChernData) -> Result<ModuliDims> {
    let r = c.rank();
    if r < 2 {
        return Err(Error::Rank { rank: r, min: 2 });
    }
    let g = surface.genus();
    let dim = stack_dim(surface, c)? + 1;
    let c1_sq = surface.self_intersection(c.c1())?;
    Ok(ModuliDims {
        dim_stable_moduli: dim,
        m: dim - 2 * g,
        m_closed_form: 2 * r * c.c2() - (r - 1) * c1_sq + (r * r - 2) * g - r * r + 1,
        unirational: g == 0,
    })
}

/// `H·(K_S + f)`; negative means every `H`-semistable sheaf is prioritary.
pub fn semistable_prioritary_gap(surface: &RuledSurface, h: &DivisorClass) -> Result<i64> {
    theorem_condition(surface, h)
}
