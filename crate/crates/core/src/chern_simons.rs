//! Chern-Simons forms, winding numbers, the monopole Chern number and the
//! `c_{2k+1}` normalization table.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::forms::FormJet;
use crate::geom_forms::{
    commutator_wedge, curvature, exterior_d, integrate_top, maurer_cartan, product_wedge, FieldFn, GroupMap, LieForm,
    Manifold, ManifoldGrid, Side,
};
use crate::jet::{Jet, ScalarJet};
use crate::liealg::{c, CMat, C64, I};

/// `c_{2k+1} = −(i/2π)^{k+2} / ((k+2)! (2k+3))`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalizationTable;

impl NormalizationTable {
    pub fn coefficient(&self, k: u32) -> C64 {
        let base = I / (2.0 * PI);
        let fact: f64 = (1..=k + 2).map(f64::from).product();
        -base.powu(k + 2) / (fact * f64::from(2 * k + 3))
    }

    /// `c_n` for odd `n = 2k + 1`.
    pub fn c_odd(&self, n: u32) -> Result<C64> {
        if n.is_multiple_of(2) {
            return Err(Error::InvalidDimension(format!("c_{n}: index must be odd")));
        }
        Ok(self.coefficient((n - 1) / 2))
    }
}

fn require_one_form(a: &LieForm, min_dim: usize) -> Result<()> {
    if a.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: a.degree(),
        });
    }
    let d = a.grid().dim();
    if d < min_dim {
        return Err(Error::DegreeOverflow {
            degree: min_dim,
            dim: d,
        });
    }
    Ok(())
}

/// `(1/8π²) tr(A∧dA + ⅔ A∧A∧A)`, a scalar (1×1) 3-form.
pub fn cs3(a: &LieForm) -> Result<LieForm> {
    require_one_form(a, 3)?;
    let ada = product_wedge(a, &exterior_d(a)?)?;
    let a3 = product_wedge(&product_wedge(a, a)?, a)?;
    Ok(ada
        .add(&a3.scale(c(2.0 / 3.0)))?
        .trace()
        .scale(c(1.0 / (8.0 * PI * PI))))
}

/// `(i/24π³) tr(A(dA)² + 3/2 A³dA + 3/5 A⁵)`, a scalar 5-form.
pub fn cs5(a: &LieForm) -> Result<LieForm> {
    require_one_form(a, 5)?;
    let da = exterior_d(a)?;
    let a2 = product_wedge(a, a)?;
    let a3 = product_wedge(&a2, a)?;
    let t1 = product_wedge(&product_wedge(a, &da)?, &da)?;
    let t2 = product_wedge(&a3, &da)?;
    let t3 = product_wedge(&a3, &a2)?;
    let sum = t1.add(&t2.scale(c(1.5)))?.add(&t3.scale(c(0.6)))?;
    Ok(sum.trace().scale(I / (24.0 * PI.powi(3))))
}

/// `tr (g⁻¹dg)^n` as a scalar n-form.
pub fn maurer_cartan_power(g: &GroupMap, n: usize) -> Result<LieForm> {
    let a = maurer_cartan(g, Side::Left)?.cached();
    let mut acc = a.clone();
    for _ in 1..n {
        acc = product_wedge(&acc, &a)?;
    }
    Ok(acc.trace())
}

/// Both sides of the pure-gauge reduction `∫ CS₅(g⁻¹dg) = c₃ ∫ tr (g⁻¹dg)⁵`,
/// plus the largest pointwise difference of the integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureGaugeCs5 {
    pub cs5_integral: C64,
    pub reduced_integral: C64,
    pub pointwise: f64,
}

pub fn cs5_pure_gauge(g: &GroupMap) -> Result<PureGaugeCs5> {
    let a = maurer_cartan(g, Side::Left)?.cached();
    let lhs = cs5(&a)?;
    let rhs = maurer_cartan_power(g, 5)?.scale(NormalizationTable.c_odd(3)?);
    let diff = lhs.sub(&rhs)?;
    Ok(PureGaugeCs5 {
        cs5_integral: integrate_top(&lhs, false)?,
        reduced_integral: integrate_top(&rhs, false)?,
        pointwise: diff.max_abs(),
    })
}

/// `A = Σ_i (M_i + N_ij x^j) dx^i` on a patch of ℝ⁴.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineConnection4 {
    pub m: [CMat; 4],
    /// `n[i][j] = N_ij`.
    pub n: [[CMat; 4]; 4],
}

impl AffineConnection4 {
    pub fn new(m: [CMat; 4], n: [[CMat; 4]; 4]) -> Result<Self> {
        let s = m[0].nrows();
        let square = |x: &CMat| x.nrows() == s && x.ncols() == s;
        if !m.iter().all(square) || !n.iter().flatten().all(square) {
            return Err(Error::DimensionMismatch(
                "affine connection blocks differ in size".into(),
            ));
        }
        Ok(Self { m, n })
    }

    pub fn size(&self) -> usize {
        self.m[0].nrows()
    }

    /// The connection as a form jet at `x` (second derivatives vanish).
    pub fn jet_at(&self, x: [f64; 4]) -> FormJet {
        let s = self.size();
        let comps = (0..4)
            .map(|i| {
                let mut val = self.m[i].clone();
                for j in 0..4 {
                    val += &self.n[i][j] * c(x[j]);
                }
                let grad = (0..4).map(|j| self.n[i][j].clone()).collect();
                let hess = vec![CMat::zeros(s, s); 10];
                Jet::from_parts(val, grad, hess, 4)
            })
            .collect();
        FormJet::one_form(comps)
    }
}

/// `d tr(A dA + ⅔A³) − tr(F∧F)` at `x`, with `F = dA + A∧A`; returns the
/// largest component of the 4-form residual.
pub fn dcs_identity_residual(conn: &AffineConnection4, x: [f64; 4]) -> f64 {
    let a = conn.jet_at(x);
    let da = a.d();
    let cs = a.wedge(&da).add(&a.wedge(&a).wedge(&a).scale(c(2.0 / 3.0))).trace();
    let lhs = cs.d();
    let f = da.add(&a.wedge(&a));
    let rhs = f.wedge(&f).trace();
    let lhs = lhs.truncate(0);
    let rhs = rhs.truncate(0);
    lhs.sub(&rhs)
        .components()
        .iter()
        .map(|j| j.val()[(0, 0)].norm())
        .fold(0.0, f64::max)
}

/// The identity at the origin.
pub fn dcs_identity_check(conn: &AffineConnection4) -> f64 {
    dcs_identity_residual(conn, [0.0; 4])
}

/// Coefficient of the winding 3-form, `c₁ = 1/24π²` from the table.
pub fn winding_coefficient() -> C64 {
    NormalizationTable.coefficient(0)
}

/// `c₁ ∫_{S³} tr (g⁻¹dg)³`, oriented by the chart order (ψ, θ, φ).
pub fn winding_3(g: &GroupMap) -> Result<C64> {
    let m = g.grid().manifold();
    if m != Manifold::S3 {
        return Err(Error::WrongManifold {
            expected: "S3".into(),
            found: m.to_string(),
        });
    }
    Ok(integrate_top(&maurer_cartan_power(g, 3)?, false)? * winding_coefficient())
}

/// Distance from `z` to the nearest integer (imaginary part included).
pub fn integer_distance(z: C64) -> f64 {
    (z - c(z.re.round())).norm()
}

/// The quaternion map `y ↦ y₀ I + i(y₁σ₁ + y₂σ₂ + y₃σ₃)` as a field on S³.
pub fn quaternion_field() -> FieldFn {
    let s = crate::liealg::SpinBasis::new();
    let mats: Vec<CMat> = (0..4)
        .map(|k| if k == 0 { s.sigma(0).clone() } else { s.sigma(k) * I })
        .collect();
    Arc::new(move |y: &[ScalarJet]| {
        let mut acc = Jet::from_scalar(&y[0], &mats[0]);
        for k in 1..4 {
            acc = acc.add(&Jet::from_scalar(&y[k], &mats[k]));
        }
        acc
    })
}

/// The quaternion map raised pointwise to the power `n ≥ 1` (degree n); `n = 0` is constant.
pub fn quaternion_power(grid: &Arc<ManifoldGrid>, n: u32) -> GroupMap {
    let q = quaternion_field();
    let f: FieldFn = Arc::new(move |y| {
        let base = q(y);
        let mut acc = Jet::constant(crate::liealg::identity(2), y[0].dim(), y[0].order());
        for _ in 0..n {
            acc = acc.mul(&base);
        }
        acc
    });
    GroupMap::from_ambient(grid, 2, true, f)
}

/// First Chern number of the charge-n monopole from its two hemisphere patches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonopoleResult {
    pub north: C64,
    pub south: C64,
    pub total: C64,
    /// `max |A_N − A_S − i n dφ|` on the equator, i.e. the transition `e^{inφ}` check.
    pub transition_residual: f64,
}

fn phi_one_form(grid: &Arc<ManifoldGrid>) -> Result<LieForm> {
    let phi = LieForm::from_chart(grid, 1, Arc::new(|x| Jet::from_scalar(&x[1], &CMat::identity(1, 1))));
    exterior_d(&phi)
}

/// Patch coefficient of `dφ`: `(in/2)(1 − cos θ)` for `sign = 1` (north),
/// `−(in/2)(1 + cos θ)` for `sign = −1` (south).
fn patch_coefficient(n: i64, sign: f64, cos_theta: f64) -> C64 {
    I * (sign * n as f64 / 2.0) * (1.0 - sign * cos_theta)
}

/// `A_N = (in/2)(1 − cos θ) dφ` on the north cap, `A_S = −(in/2)(1 + cos θ) dφ` on the south cap.
pub fn monopole_patches(n: i64, order: usize) -> Result<(LieForm, LieForm)> {
    let patch = |sign: f64, m: Manifold| -> Result<LieForm> {
        let grid = ManifoldGrid::new(m, order)?;
        let unit = CMat::identity(1, 1) * patch_coefficient(n, sign, 0.0);
        // (1 − sign·cos θ) times the coefficient at the equator
        let f = LieForm::from_chart(
            &grid,
            1,
            Arc::new(move |x| Jet::from_scalar(&x[0].cos().scale(-sign).add_const(1.0), &unit)),
        );
        product_wedge(&f, &phi_one_form(&grid)?)
    };
    Ok((patch(1.0, Manifold::NorthCap)?, patch(-1.0, Manifold::SouthCap)?))
}

pub fn chern1_monopole(n: i64, order: usize) -> Result<MonopoleResult> {
    let (an, as_) = monopole_patches(n, order)?;
    let scale = 1.0 / (2.0 * PI * I);
    let north = integrate_top(&exterior_d(&an)?, true)? * scale;
    let south = integrate_top(&exterior_d(&as_)?, true)? * scale;
    let eq = (PI / 2.0).cos();
    let transition_residual = (patch_coefficient(n, 1.0, eq) - patch_coefficient(n, -1.0, eq) - I * n as f64).norm();
    Ok(MonopoleResult {
        north,
        south,
        total: north + south,
        transition_residual,
    })
}

/// The abelian field strength `(in/2) sin θ dθ∧dφ` expected on either patch,
/// compared with `curvature` of the patch connection.
pub fn monopole_curvature_residual(a: &LieForm, n: i64) -> Result<f64> {
    let f = curvature(a)?;
    let half = n as f64 / 2.0;
    let worst = (0..a.grid().n_nodes())
        .map(|i| {
            let th = a.grid().coords(i)[0];
            let got = f.eval(i, 0).top().val()[(0, 0)];
            (got - I * half * th.sin()).norm()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Boundary and bulk sides of `c₂∫_{S²} tr u[dv,dw] = c₂∫_{B³} tr du∧[dv,dw]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesSides {
    pub boundary: C64,
    pub bulk: C64,
}

impl StokesSides {
    pub fn residual(&self) -> f64 {
        (self.boundary - self.bulk).norm()
    }
}

/// Evaluate both sides for ambient fields `u, v, w` on the unit ball grid. With
/// `vanish_on_boundary` each field is multiplied by `1 − |y|²`.
pub fn transgression_stokes(
    ball: &Arc<ManifoldGrid>,
    c2: C64,
    size: usize,
    fields: [&FieldFn; 3],
    vanish_on_boundary: bool,
) -> Result<StokesSides> {
    if ball.manifold() != Manifold::B3 {
        return Err(Error::WrongManifold {
            expected: "B3".into(),
            found: ball.manifold().to_string(),
        });
    }
    let sphere = ball.boundary().expect("ball grids carry their boundary").clone();
    let wrap = |f: &FieldFn| -> FieldFn {
        if !vanish_on_boundary {
            return f.clone();
        }
        let f = f.clone();
        Arc::new(move |y: &[ScalarJet]| {
            let mut r2 = y[0].mul(&y[0]);
            for k in 1..y.len() {
                r2 = r2.add(&y[k].mul(&y[k]));
            }
            f(y).scale_jet(&r2.scale(-1.0).add_const(1.0))
        })
    };
    let fs: Vec<FieldFn> = fields.iter().map(|f| wrap(f)).collect();
    let on = |grid: &Arc<ManifoldGrid>| -> Vec<LieForm> {
        fs.iter()
            .map(|f| LieForm::from_ambient(grid, size, f.clone()))
            .collect()
    };
    let (b, s) = (on(ball), on(&sphere));
    let bracket = |x: &[LieForm]| -> Result<LieForm> { commutator_wedge(&exterior_d(&x[1])?, &exterior_d(&x[2])?) };
    let boundary = c2 * integrate_top(&product_wedge(&s[0], &bracket(&s)?)?, true)?;
    let bulk = c2 * integrate_top(&product_wedge(&exterior_d(&b[0])?, &bracket(&b)?)?, true)?;
    Ok(StokesSides { boundary, bulk })
}
