//! Seeded test data shared by the scenario runner, the acceptance suite and
//! the benches.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::chern_simons::AffineConnection4;
use crate::cocycle_lab::current::MFContext;
use crate::error::Result;
use crate::geom_forms::{maurer_cartan, FieldFn, GroupMap, LieForm, Manifold, ManifoldGrid, Side};
use crate::liealg::{build_gauge_basis, times_i, CMat, GaugeKind};
use crate::random::{
    anti_hermitian_generators, random_element, random_one_form_coeffs, random_zero_form, seeded, uniform,
    HarmonicField, TorusGaugeMap,
};
use crate::schwinger::{tilted_bump, SchwingerEngine, SchwingerInputs};

/// Anti-Hermitian su(p) or u(p) generators.
pub fn generators(p: usize, kind: GaugeKind) -> Result<Vec<CMat>> {
    Ok(anti_hermitian_generators(&build_gauge_basis(p, kind)?))
}

/// Random connection and three random su(p) fields on S³.
pub fn s3_cocycle_data(seed: u64, p: usize, order: usize) -> Result<(MFContext, Vec<LieForm>)> {
    let g = ManifoldGrid::new(Manifold::S3, order)?;
    let gens = generators(p, GaugeKind::Su)?;
    let mut rng = seeded(seed);
    let a = LieForm::one_form_from_ambient(&g, p, random_one_form_coeffs(&mut rng, &gens, 4, 0.5))?;
    let f = (0..3)
        .map(|_| LieForm::from_ambient(&g, p, HarmonicField::random(&mut rng, &gens, 4, 1.0).into_field()))
        .collect();
    Ok((MFContext::new(a)?, f))
}

/// Gauge map `exp(X(y))` close to the identity on the grid of `ctx`.
pub fn small_gauge_map(grid: &Arc<ManifoldGrid>, p: usize, seed: u64, scale: f64) -> Result<GroupMap> {
    let gens = generators(p, GaugeKind::Su)?;
    let ambient = grid.manifold().ambient_dim();
    Ok(GroupMap::from_ambient(
        grid,
        p,
        true,
        HarmonicField::random(&mut seeded(seed), &gens, ambient, scale).into_group_field(),
    ))
}

/// Connection on B³, three fields on the ball and the same fields on its boundary.
pub struct BallData {
    pub ctx: MFContext,
    pub bulk: Vec<LieForm>,
    pub boundary: Vec<LieForm>,
}

pub fn ball_cocycle_data(seed: u64, p: usize, order: usize) -> Result<BallData> {
    let g = ManifoldGrid::new(Manifold::B3, order)?;
    let s2 = g.boundary().expect("the ball has a boundary").clone();
    let gens = generators(p, GaugeKind::Su)?;
    let mut rng = seeded(seed);
    let a = LieForm::one_form_from_ambient(&g, p, random_one_form_coeffs(&mut rng, &gens, 3, 0.5))?;
    let fields: Vec<FieldFn> = (0..3).map(|_| random_zero_form(&mut rng, &gens, 3, 1.0)).collect();
    let on = |grid: &Arc<ManifoldGrid>| -> Vec<LieForm> {
        fields
            .iter()
            .map(|f| LieForm::from_ambient(grid, p, f.clone()))
            .collect()
    };
    Ok(BallData {
        ctx: MFContext::new(a)?,
        bulk: on(&g),
        boundary: on(&s2),
    })
}

/// Three random su(p) loops on S¹.
pub fn loops(seed: u64, p: usize, order: usize) -> Result<Vec<LieForm>> {
    let g = ManifoldGrid::new(Manifold::S1, order)?;
    let gens = generators(p, GaugeKind::Su)?;
    let mut rng = seeded(seed);
    Ok((0..3)
        .map(|_| LieForm::from_ambient(&g, p, random_zero_form(&mut rng, &gens, 2, 1.0)))
        .collect())
}

/// `A = m_i dx^i + n_ij x^j dx^i` with random su(p) entries.
pub fn affine_connection(seed: u64, p: usize) -> Result<AffineConnection4> {
    let gens = generators(p, GaugeKind::Su)?;
    let mut rng = seeded(seed);
    let m = std::array::from_fn(|_| random_element(&mut rng, &gens, 1.0));
    let n = std::array::from_fn(|_| std::array::from_fn(|_| random_element(&mut rng, &gens, 1.0)));
    AffineConnection4::new(m, n)
}

/// Pure gauge tensor connection `g⁻¹dg` on T³, `g` a product of three
/// one-parameter subgroups in the active `σ_μ ⊗ τ^a` directions.
pub fn schwinger_connection(eng: &SchwingerEngine, grid: &Arc<ManifoldGrid>, seed: u64) -> Result<LieForm> {
    let alg = eng.algebra();
    let gens: Vec<CMat> = (0..4)
        .flat_map(|mu| eng.active().iter().map(move |&a| times_i(alg.element(mu, a))))
        .collect();
    let map = TorusGaugeMap::random(&mut seeded(seed), &gens, 3, 0.7);
    let g = GroupMap::from_chart(grid, alg.size(), false, map.into_field());
    Ok(maurer_cartan(&g, Side::Left)?.cached())
}

/// Two tilted bumps near the centre of the chart box, supported in the ball of radius π.
pub fn schwinger_inputs(a: LieForm, seed: u64) -> SchwingerInputs {
    let mut rng = seeded(seed);
    let mut tilt = || [uniform(&mut rng, 1.0), uniform(&mut rng, 1.0), uniform(&mut rng, 1.0)];
    let centre = [PI, PI, PI];
    SchwingerInputs {
        a,
        u: tilted_bump(centre, 0.35, tilt()),
        v: tilted_bump([PI + 0.3, PI - 0.2, PI + 0.1], 0.35, tilt()),
        support: Some((centre, PI)),
    }
}

/// Representative `(μ, ν, a, b)` per case with nonzero values in u(2) and u(3).
pub const SCHWINGER_PICKS: [(usize, usize, usize, usize); 3] = [(0, 0, 0, 1), (0, 2, 0, 2), (1, 2, 1, 2)];
