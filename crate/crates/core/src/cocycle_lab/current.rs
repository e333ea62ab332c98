//! Current-algebra cocycles: Kac-Moody on S¹, Mickelsson-Faddeev on S³/B³,
//! its Lie-algebra coboundary, the λ-cochain and the invariance identity.
//!
//! The Mickelsson-Faddeev bracket of 1-forms is the literal one,
//! `[dx, dy] = dx∧dy − dy∧dx`; with it θ is antisymmetric in (x, y).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom_forms::{
    adjoint_action, commutator_wedge, exterior_d, gauge_transform, integrate_top, maurer_cartan, product_wedge,
    GroupMap, LieForm, Manifold, Side,
};
use crate::liealg::{c, C64, I};

/// `c₂ = i / 24π²`.
pub fn default_c2() -> C64 {
    I / (24.0 * PI * PI)
}

/// Connection plus normalization for the Mickelsson-Faddeev cocycle.
#[derive(Debug, Clone)]
pub struct MFContext {
    pub a: LieForm,
    pub c2: C64,
}

impl MFContext {
    pub fn new(a: LieForm) -> Result<Self> {
        Self::with_c2(a, default_c2())
    }

    pub fn with_c2(a: LieForm, c2: C64) -> Result<Self> {
        if a.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: a.degree(),
            });
        }
        Ok(Self { a, c2 })
    }

    /// Same normalization, different connection.
    pub fn with_connection(&self, a: LieForm) -> Result<Self> {
        Self::with_c2(a, self.c2)
    }
}

fn require_zero_forms(forms: &[&LieForm]) -> Result<()> {
    for f in forms {
        if f.degree() != 0 {
            return Err(Error::DegreeMismatch {
                expected: 0,
                found: f.degree(),
            });
        }
    }
    Ok(())
}

/// Pointwise commutator of two 0-forms.
pub fn bracket0(x: &LieForm, y: &LieForm) -> Result<LieForm> {
    commutator_wedge(x, y)
}

/// `κ(u, v) = k ∫_{S¹} tr u dv`.
pub fn kac_moody(u: &LieForm, v: &LieForm, k: C64) -> Result<C64> {
    let m = u.grid().manifold();
    if m != Manifold::S1 {
        return Err(Error::WrongManifold {
            expected: "S1".into(),
            found: m.to_string(),
        });
    }
    require_zero_forms(&[u, v])?;
    Ok(k * integrate_top(&product_wedge(u, &exterior_d(v)?)?, true)?)
}

/// `κ([u,v],w) + κ([v,w],u) + κ([w,u],v)` with k = 1.
pub fn km_cocycle_residual(u: &LieForm, v: &LieForm, w: &LieForm) -> Result<C64> {
    let one = c(1.0);
    Ok(kac_moody(&bracket0(u, v)?, w, one)?
        + kac_moody(&bracket0(v, w)?, u, one)?
        + kac_moody(&bracket0(w, u)?, v, one)?)
}

/// `θ(A; x, y) = c₂ ∫ tr A [dx, dy]`.
pub fn mickelsson_faddeev(ctx: &MFContext, x: &LieForm, y: &LieForm) -> Result<C64> {
    require_zero_forms(&[x, y])?;
    let br = commutator_wedge(&exterior_d(x)?, &exterior_d(y)?)?;
    Ok(ctx.c2 * integrate_top(&product_wedge(&ctx.a, &br)?, true)?)
}

/// `L_u A = [A, u] + du`.
pub fn lie_action(a: &LieForm, u: &LieForm) -> Result<LieForm> {
    commutator_wedge(a, u)?.add(&exterior_d(u)?)
}

/// Chevalley-Eilenberg coboundary of θ with `L_u` acting on the connection:
///
/// δθ(u,v,w) = θ(L_uA; v,w) − θ(L_vA; u,w) + θ(L_wA; u,v)
///           − θ(A; [u,v], w) + θ(A; [u,w], v) − θ(A; [v,w], u).
pub fn lie_coboundary_2(ctx: &MFContext, u: &LieForm, v: &LieForm, w: &LieForm) -> Result<C64> {
    require_zero_forms(&[u, v, w])?;
    let a = ctx.a.cached();
    let base = ctx.with_connection(a.clone())?;
    let theta_at = |shift: &LieForm, x: &LieForm, y: &LieForm| -> Result<C64> {
        mickelsson_faddeev(&ctx.with_connection(lie_action(&a, shift)?)?, x, y)
    };
    Ok(
        theta_at(u, v, w)? - theta_at(v, u, w)? + theta_at(w, u, v)? - mickelsson_faddeev(&base, &bracket0(u, v)?, w)?
            + mickelsson_faddeev(&base, &bracket0(u, w)?, v)?
            - mickelsson_faddeev(&base, &bracket0(v, w)?, u)?,
    )
}

/// `c₂ ∫_{S²} tr(x[dy,dz] − y[dx,dz] + z[dx,dy])` for fields on the boundary sphere.
pub fn mf_boundary_term(c2: C64, x: &LieForm, y: &LieForm, z: &LieForm) -> Result<C64> {
    require_zero_forms(&[x, y, z])?;
    let (dx, dy, dz) = (exterior_d(x)?, exterior_d(y)?, exterior_d(z)?);
    let t1 = product_wedge(x, &commutator_wedge(&dy, &dz)?)?;
    let t2 = product_wedge(y, &commutator_wedge(&dx, &dz)?)?;
    let t3 = product_wedge(z, &commutator_wedge(&dx, &dy)?)?;
    Ok(c2 * integrate_top(&t1.sub(&t2)?.add(&t3)?, true)?)
}

/// The two pieces of `λ(A; z)`: the part linear in A and the A-independent `ω³z` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaParts {
    pub linear: C64,
    pub constant: C64,
}

impl LambdaParts {
    pub fn total(&self) -> C64 {
        self.linear + self.constant
    }
}

/// `λ(A; z) = c₂ ∫ tr(Aω[ω,z] + [ω,A]dz − ω³z)` with `ω = dg g⁻¹`, split by A-dependence.
///
/// The `ω³z` term enters with a minus sign; with `+` the invariance identity
/// fails on S³ by exactly twice that term.
pub fn lambda_parts(ctx: &MFContext, omega: &LieForm, z: &LieForm) -> Result<LambdaParts> {
    require_zero_forms(&[z])?;
    let a = &ctx.a;
    let t1 = product_wedge(&product_wedge(a, omega)?, &commutator_wedge(omega, z)?)?;
    let t2 = product_wedge(&commutator_wedge(omega, a)?, &exterior_d(z)?)?;
    let t3 = product_wedge(&product_wedge(&product_wedge(omega, omega)?, omega)?, z)?;
    Ok(LambdaParts {
        linear: ctx.c2 * integrate_top(&t1.add(&t2)?, true)?,
        constant: -ctx.c2 * integrate_top(&t3, true)?,
    })
}

/// `λ(A; z)`.
pub fn lambda_cochain(ctx: &MFContext, g: &GroupMap, z: &LieForm) -> Result<C64> {
    let omega = maurer_cartan(g, Side::Right)?;
    Ok(lambda_parts(ctx, &omega, z)?.total())
}

/// `δλ(A; x, y) = λ₁(L_xA; y) − λ₁(L_yA; x) − λ(A; [x, y])`, where `λ₁` is
/// the linear part (λ is affine in A, so the directional derivative is exact).
pub fn lambda_coboundary(ctx: &MFContext, omega: &LieForm, x: &LieForm, y: &LieForm) -> Result<C64> {
    let a = ctx.a.cached();
    let omega = omega.cached();
    let lin = |shift: &LieForm, z: &LieForm| -> Result<C64> {
        Ok(lambda_parts(&ctx.with_connection(lie_action(&a, shift)?)?, &omega, z)?.linear)
    };
    let base = ctx.with_connection(a.clone())?;
    Ok(lin(x, y)? - lin(y, x)? - lambda_parts(&base, &omega, &bracket0(x, y)?)?.total())
}

/// How the gauge map acts on the connection slot of θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionConvention {
    /// `A ↦ g⁻¹Ag + g⁻¹dg`
    GaugeTransform,
    /// `A ↦ g⁻¹Ag`
    Adjoint,
}

impl std::fmt::Display for ActionConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ActionConvention::GaugeTransform => "A^g = g^-1 A g + g^-1 dg",
            ActionConvention::Adjoint => "Ad_{g^-1} A = g^-1 A g",
        })
    }
}

/// The three ingredients of the invariance identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceTerms {
    pub theta_g: C64,
    pub theta: C64,
    pub delta_lambda: C64,
}

impl InvarianceTerms {
    /// `θ^g − θ + sign · δλ`.
    pub fn residual(&self, sign: f64) -> C64 {
        self.theta_g - self.theta + self.delta_lambda * sign
    }
}

/// `θ^g(A; x, y) = θ(g·A; g⁻¹xg, g⁻¹yg)`, plain θ and δλ with `ω = dg g⁻¹`.
pub fn invariance_terms(
    ctx: &MFContext,
    x: &LieForm,
    y: &LieForm,
    g: &GroupMap,
    convention: ActionConvention,
) -> Result<InvarianceTerms> {
    require_zero_forms(&[x, y])?;
    g.check()?;
    let acted = match convention {
        ActionConvention::GaugeTransform => gauge_transform(&ctx.a, g)?,
        ActionConvention::Adjoint => adjoint_action(&ctx.a, g)?,
    };
    let gf = g.as_form();
    let ginv = g.inverse().as_form();
    let conj = |z: &LieForm| -> Result<LieForm> { product_wedge(&product_wedge(&ginv, z)?, &gf) };
    let theta_g = mickelsson_faddeev(&ctx.with_connection(acted)?, &conj(x)?, &conj(y)?)?;
    let theta = mickelsson_faddeev(ctx, x, y)?;
    let omega = maurer_cartan(g, Side::Right)?;
    let delta_lambda = lambda_coboundary(ctx, &omega, x, y)?;
    Ok(InvarianceTerms {
        theta_g,
        theta,
        delta_lambda,
    })
}

/// The shipped convention: full gauge transform and `+δλ`, i.e. the identity
/// `θ^g = θ − δλ`. Fixed by [`calibrate_invariance`].
pub const SHIPPED_CONVENTION: (ActionConvention, f64) = (ActionConvention::GaugeTransform, 1.0);

/// `θ^g(A;x,y) − θ(A;x,y) + δλ(A;x,y)` under the shipped convention.
pub fn invariance_residual(ctx: &MFContext, x: &LieForm, y: &LieForm, g: &GroupMap) -> Result<C64> {
    let (conv, sign) = SHIPPED_CONVENTION;
    Ok(invariance_terms(ctx, x, y, g, conv)?.residual(sign))
}

/// Residuals of all four candidate conventions and the one that vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    /// (convention, sign of δλ, |residual|) for every candidate.
    pub candidates: Vec<(ActionConvention, f64, f64)>,
    pub chosen: (ActionConvention, f64),
    /// Smallest residual divided by the second smallest.
    pub separation: f64,
}

/// Evaluate `{A^g, Ad_{g⁻¹}A} × {±δλ}` on the given data and pick the vanishing one.
pub fn calibrate_invariance(ctx: &MFContext, x: &LieForm, y: &LieForm, g: &GroupMap) -> Result<Calibration> {
    let mut candidates = Vec::new();
    for conv in [ActionConvention::GaugeTransform, ActionConvention::Adjoint] {
        let t = invariance_terms(ctx, x, y, g, conv)?;
        for sign in [1.0, -1.0] {
            candidates.push((conv, sign, t.residual(sign).norm()));
        }
    }
    let mut sorted: Vec<f64> = candidates.iter().map(|c| c.2).collect();
    sorted.sort_by(f64::total_cmp);
    let best = candidates
        .iter()
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .map(|c| (c.0, c.1))
        .expect("four candidates");
    Ok(Calibration {
        candidates,
        chosen: best,
        separation: sorted[0] / sorted[1],
    })
}
