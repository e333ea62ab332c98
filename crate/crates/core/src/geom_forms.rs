//! Lie-algebra-valued differential forms on quadrature grids of S¹, S², S³,
//! B³, the flat torus T³ and the product S³×S².
//!
//! A [`LieForm`] is evaluated lazily, node by node, at whatever jet order the
//! consumer needs; composite forms are closures over their inputs. Integrals
//! map nodes in parallel and reduce sequentially in ascending node order, so
//! results do not depend on the worker count.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::FormJet;
use crate::jet::{finite_difference_jet, Jet, ScalarJet, MAX_ORDER};
use crate::liealg::{c, identity, max_abs, unitarity_defect, CMat, C64};
use crate::quadrature::{gauss_legendre, neumaier_complex, trapezoid_periodic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Manifold {
    S1,
    S2,
    S3,
    B3,
    T3,
    S3xS2,
    /// Upper hemisphere θ ∈ (0, π/2) of S².
    NorthCap,
    /// Lower hemisphere θ ∈ (π/2, π) of S².
    SouthCap,
}

impl Manifold {
    pub fn dim(self) -> usize {
        match self {
            Manifold::S1 => 1,
            Manifold::S2 | Manifold::NorthCap | Manifold::SouthCap => 2,
            Manifold::S3 | Manifold::B3 | Manifold::T3 => 3,
            Manifold::S3xS2 => 5,
        }
    }

    /// Number of embedding coordinates handed to ambient fields.
    pub fn ambient_dim(self) -> usize {
        match self {
            Manifold::S1 => 2,
            Manifold::S2 | Manifold::NorthCap | Manifold::SouthCap | Manifold::B3 => 3,
            Manifold::S3 => 4,
            Manifold::T3 => 6,
            Manifold::S3xS2 => 7,
        }
    }

    /// Riemannian volume (unit radius), where it is a closed manifold or the unit ball.
    pub fn volume(self) -> f64 {
        match self {
            Manifold::S1 => 2.0 * PI,
            Manifold::S2 => 4.0 * PI,
            Manifold::S3 => 2.0 * PI * PI,
            Manifold::B3 => 4.0 * PI / 3.0,
            Manifold::T3 => (2.0 * PI).powi(3),
            Manifold::S3xS2 => 8.0 * PI.powi(3),
            Manifold::NorthCap | Manifold::SouthCap => 2.0 * PI,
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Manifold::S1 => "S1",
            Manifold::S2 => "S2",
            Manifold::S3 => "S3",
            Manifold::B3 => "B3",
            Manifold::T3 => "T3",
            Manifold::S3xS2 => "S3xS2",
            Manifold::NorthCap => "S2 north cap",
            Manifold::SouthCap => "S2 south cap",
        };
        f.write_str(s)
    }
}

/// Tensor-product quadrature grid in chart coordinates.
///
/// Weights are coordinate weights; the Riemannian density lives in
/// `jacobian` and enters integrals only through [`volume_form`].
#[derive(Debug)]
pub struct ManifoldGrid {
    manifold: Manifold,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    jacobian: Vec<f64>,
    spacing: Vec<f64>,
    boundary: Option<Arc<ManifoldGrid>>,
    boundary_link: Vec<usize>,
}

impl ManifoldGrid {
    /// Grid with `order` points per coordinate.
    pub fn new(manifold: Manifold, order: usize) -> Result<Arc<Self>> {
        if order < 2 {
            return Err(Error::InvalidConfig(format!("quadrature order {order} < 2")));
        }
        let gl = |a: f64, b: f64| gauss_legendre(order, a, b);
        let trap = || trapezoid_periodic(order);
        let rules: Vec<(Vec<f64>, Vec<f64>)> = match manifold {
            Manifold::S1 => vec![trap()],
            Manifold::S2 => vec![gl(0.0, PI), trap()],
            Manifold::NorthCap => vec![gl(0.0, PI / 2.0), trap()],
            Manifold::SouthCap => vec![gl(PI / 2.0, PI), trap()],
            Manifold::S3 => vec![gl(0.0, PI), gl(0.0, PI), trap()],
            Manifold::B3 => vec![gl(0.0, 1.0), gl(0.0, PI), trap()],
            Manifold::T3 => vec![trap(), trap(), trap()],
            Manifold::S3xS2 => vec![gl(0.0, PI), gl(0.0, PI), trap(), gl(0.0, PI), trap()],
        };
        let dim = rules.len();
        let count: usize = rules.iter().map(|r| r.0.len()).product();
        let mut nodes = Vec::with_capacity(count * dim);
        let mut weights = Vec::with_capacity(count);
        let mut idx = vec![0usize; dim];
        for _ in 0..count {
            let mut w = 1.0;
            for (k, r) in rules.iter().enumerate() {
                nodes.push(r.0[idx[k]]);
                w *= r.1[idx[k]];
            }
            weights.push(w);
            // last coordinate runs fastest
            for k in (0..dim).rev() {
                idx[k] += 1;
                if idx[k] < rules[k].0.len() {
                    break;
                }
                idx[k] = 0;
            }
        }
        let jacobian = nodes.chunks(dim).map(|x| jacobian_at(manifold, x)).collect();
        let spacing = rules
            .iter()
            .map(|r| {
                let (lo, hi) = (r.0[0], r.0[r.0.len() - 1]);
                ((hi - lo) / (r.0.len() - 1) as f64).abs()
            })
            .collect();
        let (boundary, boundary_link) = if manifold == Manifold::B3 {
            let s2 = ManifoldGrid::new(Manifold::S2, order)?;
            let shell = s2.n_nodes();
            let link = (0..shell).map(|k| (order - 1) * shell + k).collect();
            (Some(s2), link)
        } else {
            (None, Vec::new())
        };
        Ok(Arc::new(Self {
            manifold,
            order,
            nodes,
            weights,
            jacobian,
            spacing,
            boundary,
            boundary_link,
        }))
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.manifold.dim()
    }

    pub fn n_nodes(&self) -> usize {
        self.weights.len()
    }

    pub fn coords(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.nodes[i * d..(i + 1) * d]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn jacobian(&self, i: usize) -> f64 {
        self.jacobian[i]
    }

    /// The S² grid of `∂B³` (B³ grids only).
    pub fn boundary(&self) -> Option<&Arc<ManifoldGrid>> {
        self.boundary.as_ref()
    }

    /// For each boundary node, the outermost-shell B³ node with the same angles.
    pub fn boundary_link(&self) -> &[usize] {
        &self.boundary_link
    }

    /// Σ weight · jacobian, compensated.
    pub fn volume(&self) -> f64 {
        let v: Vec<C64> = (0..self.n_nodes())
            .map(|i| c(self.weights[i] * self.jacobian[i]))
            .collect();
        neumaier_complex(&v).re
    }

    /// Finite-difference step tied to the grid spacing.
    pub fn fd_step(&self) -> f64 {
        self.spacing.iter().cloned().fold(f64::INFINITY, f64::min) / 4.0
    }

    pub fn coord_jets(&self, i: usize, order: u8) -> Vec<ScalarJet> {
        let d = self.dim();
        self.coords(i)
            .iter()
            .enumerate()
            .map(|(k, &x)| ScalarJet::variable(x, k, d, order))
            .collect()
    }

    /// Embedding coordinates as jets in the chart coordinates of node `i`.
    pub fn embedding_jets(&self, i: usize, order: u8) -> Vec<ScalarJet> {
        embedding(self.manifold, &self.coord_jets(i, order))
    }
}

fn jacobian_at(m: Manifold, x: &[f64]) -> f64 {
    match m {
        Manifold::S1 | Manifold::T3 => 1.0,
        Manifold::S2 | Manifold::NorthCap | Manifold::SouthCap => x[0].sin(),
        Manifold::S3 => x[0].sin().powi(2) * x[1].sin(),
        Manifold::B3 => x[0] * x[0] * x[1].sin(),
        Manifold::S3xS2 => x[0].sin().powi(2) * x[1].sin() * x[3].sin(),
    }
}

fn sphere2(th: &ScalarJet, ph: &ScalarJet) -> Vec<ScalarJet> {
    let st = th.sin();
    vec![st.mul(&ph.cos()), st.mul(&ph.sin()), th.cos()]
}

fn sphere3(ps: &ScalarJet, th: &ScalarJet, ph: &ScalarJet) -> Vec<ScalarJet> {
    let sp = ps.sin();
    let spst = sp.mul(&th.sin());
    vec![ps.cos(), sp.mul(&th.cos()), spst.mul(&ph.cos()), spst.mul(&ph.sin())]
}

fn embedding(m: Manifold, x: &[ScalarJet]) -> Vec<ScalarJet> {
    match m {
        Manifold::S1 => vec![x[0].cos(), x[0].sin()],
        Manifold::S2 | Manifold::NorthCap | Manifold::SouthCap => sphere2(&x[0], &x[1]),
        Manifold::S3 => sphere3(&x[0], &x[1], &x[2]),
        Manifold::B3 => sphere2(&x[1], &x[2]).iter().map(|y| y.mul(&x[0])).collect(),
        Manifold::T3 => x.iter().flat_map(|t| [t.cos(), t.sin()]).collect(),
        Manifold::S3xS2 => {
            let mut v = sphere3(&x[0], &x[1], &x[2]);
            v.extend(sphere2(&x[3], &x[4]));
            v
        }
    }
}

type FormFn = dyn Fn(usize, u8) -> FormJet + Send + Sync;
type JetFn = dyn Fn(usize, u8) -> Jet + Send + Sync;

/// Matrix-valued function of jets of ambient (embedding) or chart coordinates.
pub type FieldFn = Arc<dyn Fn(&[ScalarJet]) -> Jet + Send + Sync>;

/// A matrix-valued form sampled on a grid.
#[derive(Clone)]
pub struct LieForm {
    grid: Arc<ManifoldGrid>,
    degree: usize,
    size: usize,
    max_order: u8,
    f: Arc<FormFn>,
}

impl fmt::Debug for LieForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieForm")
            .field("manifold", &self.grid.manifold())
            .field("degree", &self.degree)
            .field("size", &self.size)
            .field("max_order", &self.max_order)
            .finish()
    }
}

impl LieForm {
    /// Wrap a node evaluator. `f(i, o)` must return jets of order ≥ `o` for `o ≤ max_order`.
    pub fn new(
        grid: Arc<ManifoldGrid>,
        degree: usize,
        size: usize,
        max_order: u8,
        f: impl Fn(usize, u8) -> FormJet + Send + Sync + 'static,
    ) -> Result<Self> {
        if degree > grid.dim() {
            return Err(Error::DegreeOverflow {
                degree,
                dim: grid.dim(),
            });
        }
        Ok(Self {
            grid,
            degree,
            size,
            max_order: max_order.min(MAX_ORDER),
            f: Arc::new(f),
        })
    }

    /// 0-form from a field of the embedding coordinates.
    pub fn from_ambient(grid: &Arc<ManifoldGrid>, size: usize, field: FieldFn) -> Self {
        let g = grid.clone();
        Self {
            grid: grid.clone(),
            degree: 0,
            size,
            max_order: MAX_ORDER,
            f: Arc::new(move |i, o| FormJet::from_zero_form(field(&g.embedding_jets(i, o)))),
        }
    }

    /// 0-form from a field of the chart coordinates.
    pub fn from_chart(grid: &Arc<ManifoldGrid>, size: usize, field: FieldFn) -> Self {
        let g = grid.clone();
        Self {
            grid: grid.clone(),
            degree: 0,
            size,
            max_order: MAX_ORDER,
            f: Arc::new(move |i, o| FormJet::from_zero_form(field(&g.coord_jets(i, o)))),
        }
    }

    /// 1-form `Σ_i P_i(y) dY_i` from ambient coefficient fields, one per embedding coordinate.
    pub fn one_form_from_ambient(grid: &Arc<ManifoldGrid>, size: usize, coeffs: Vec<FieldFn>) -> Result<Self> {
        let amb = grid.manifold().ambient_dim();
        if coeffs.len() != amb {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficient fields for {amb} embedding coordinates",
                coeffs.len()
            )));
        }
        let g = grid.clone();
        let d = grid.dim();
        Self::new(grid.clone(), 1, size, MAX_ORDER - 1, move |i, o| {
            let emb = g.embedding_jets(i, o + 1);
            let low: Vec<ScalarJet> = emb.iter().map(|y| y.clone().truncate(o)).collect();
            let vals: Vec<Jet> = coeffs.iter().map(|p| p(&low)).collect();
            let comps = (0..d)
                .map(|k| {
                    let mut acc = Jet::zeros(size, d, o);
                    for (p, y) in vals.iter().zip(&emb) {
                        acc = acc.add(&p.scale_jet(&y.partial(k)));
                    }
                    acc
                })
                .collect();
            FormJet::one_form(comps)
        })
    }

    /// 0-form from plain values, derivatives by fourth-order central differences.
    pub fn from_values(
        grid: &Arc<ManifoldGrid>,
        size: usize,
        f: impl Fn(&[f64]) -> CMat + Send + Sync + 'static,
    ) -> Self {
        let g = grid.clone();
        let h = grid.fd_step();
        Self {
            grid: grid.clone(),
            degree: 0,
            size,
            max_order: MAX_ORDER,
            f: Arc::new(move |i, o| FormJet::from_zero_form(finite_difference_jet(&f, g.coords(i), h, o))),
        }
    }

    pub fn constant(grid: &Arc<ManifoldGrid>, m: CMat) -> Self {
        let d = grid.dim();
        let size = m.nrows();
        Self {
            grid: grid.clone(),
            degree: 0,
            size,
            max_order: MAX_ORDER,
            f: Arc::new(move |_, o| FormJet::from_zero_form(Jet::constant(m.clone(), d, o))),
        }
    }

    pub fn grid(&self) -> &Arc<ManifoldGrid> {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Matrix size of the values.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn max_order(&self) -> u8 {
        self.max_order
    }

    pub fn eval(&self, node: usize, order: u8) -> FormJet {
        (self.f)(node, order)
    }

    /// Evaluate every node once at `max_order` and serve later requests from memory.
    pub fn cached(&self) -> Self {
        let o = self.max_order;
        let samples: Vec<FormJet> = (0..self.grid.n_nodes())
            .into_par_iter()
            .map(|i| self.eval(i, o))
            .collect();
        let samples = Arc::new(samples);
        Self {
            grid: self.grid.clone(),
            degree: self.degree,
            size: self.size,
            max_order: o,
            f: Arc::new(move |i, _| samples[i].clone()),
        }
    }

    fn unary(
        &self,
        degree: usize,
        size: usize,
        max_order: u8,
        op: impl Fn(FormJet) -> FormJet + Send + Sync + 'static,
    ) -> Self {
        let inner = self.clone();
        Self {
            grid: self.grid.clone(),
            degree,
            size,
            max_order,
            f: Arc::new(move |i, o| op(inner.eval(i, o))),
        }
    }

    fn binary(
        &self,
        other: &Self,
        degree: usize,
        size: usize,
        op: impl Fn(FormJet, FormJet) -> FormJet + Send + Sync + 'static,
    ) -> Result<Self> {
        same_grid(self, other)?;
        if degree > self.grid.dim() {
            return Err(Error::DegreeOverflow {
                degree,
                dim: self.grid.dim(),
            });
        }
        if self.size != other.size {
            return Err(Error::DimensionMismatch(format!(
                "values {}x{0} vs {}x{1}",
                self.size, other.size
            )));
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(Self {
            grid: self.grid.clone(),
            degree,
            size,
            max_order: self.max_order.min(other.max_order),
            f: Arc::new(move |i, o| op(a.eval(i, o), b.eval(i, o))),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        self.binary(other, self.degree, self.size, |a, b| a.add(&b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        self.binary(other, self.degree, self.size, |a, b| a.sub(&b))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.unary(self.degree, self.size, self.max_order, move |f| f.scale(s))
    }

    /// Pointwise trace (a 1×1-valued form).
    pub fn trace(&self) -> Self {
        self.unary(self.degree, 1, self.max_order, |f| f.trace())
    }

    /// Pointwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.unary(self.degree, self.size, self.max_order, |f| f.adjoint())
    }

    /// Pointwise `m · value` for a constant matrix.
    pub fn lmul_const(&self, m: CMat) -> Self {
        self.unary(self.degree, self.size, self.max_order, move |f| f.lmul_const(&m))
    }

    /// Largest pointwise entry (value only) over the grid.
    pub fn max_abs(&self) -> f64 {
        (0..self.grid.n_nodes())
            .into_par_iter()
            .map(|i| {
                self.eval(i, 0)
                    .components()
                    .iter()
                    .fold(0.0f64, |m, j| m.max(max_abs(j.val())))
            })
            .reduce(|| 0.0, f64::max)
    }
}

fn same_grid(a: &LieForm, b: &LieForm) -> Result<()> {
    if Arc::ptr_eq(&a.grid, &b.grid) {
        Ok(())
    } else {
        Err(Error::GridMismatch(format!(
            "{} order {} vs {} order {}",
            a.grid.manifold(),
            a.grid.order(),
            b.grid.manifold(),
            b.grid.order()
        )))
    }
}

/// Coordinate exterior derivative.
pub fn exterior_d(f: &LieForm) -> Result<LieForm> {
    let k = f.degree + 1;
    if k > f.grid.dim() {
        return Err(Error::DegreeOverflow {
            degree: k,
            dim: f.grid.dim(),
        });
    }
    if f.max_order == 0 {
        return Err(Error::JetOrder { have: 0, need: 1 });
    }
    let inner = f.clone();
    Ok(LieForm {
        grid: f.grid.clone(),
        degree: k,
        size: f.size,
        max_order: f.max_order - 1,
        f: Arc::new(move |i, o| inner.eval(i, o + 1).d()),
    })
}

/// `α ∧ β` with matrix products of the values.
pub fn product_wedge(a: &LieForm, b: &LieForm) -> Result<LieForm> {
    a.binary(b, a.degree + b.degree, a.size, |x, y| x.wedge(&y))
}

/// Graded bracket `[α, β] = α∧β − (−1)^{kl} β∧α`.
pub fn bracket_wedge(a: &LieForm, b: &LieForm) -> Result<LieForm> {
    a.binary(b, a.degree + b.degree, a.size, |x, y| x.bracket_wedge(&y))
}

/// Literal bracket `α∧β − β∧α`.
pub fn commutator_wedge(a: &LieForm, b: &LieForm) -> Result<LieForm> {
    a.binary(b, a.degree + b.degree, a.size, |x, y| x.commutator_wedge(&y))
}

/// `jacobian · dx¹∧…∧dxⁿ`.
pub fn volume_form(grid: &Arc<ManifoldGrid>) -> LieForm {
    let g = grid.clone();
    let d = grid.dim();
    LieForm {
        grid: grid.clone(),
        degree: d,
        size: 1,
        max_order: 0,
        f: Arc::new(move |i, _| {
            FormJet::from_components(
                d,
                d,
                vec![Jet::constant(CMat::from_element(1, 1, c(g.jacobian(i))), d, 0)],
            )
        }),
    }
}

/// Integral of a top-degree form: Σ weight · coefficient, reduced in ascending
/// node order with compensated summation. With `trace_first` the matrix
/// coefficient is traced; otherwise it must be 1×1.
pub fn integrate_top(w: &LieForm, trace_first: bool) -> Result<C64> {
    let d = w.grid.dim();
    if w.degree != d {
        return Err(Error::DegreeMismatch {
            expected: d,
            found: w.degree,
        });
    }
    if !trace_first && w.size != 1 {
        return Err(Error::DimensionMismatch(format!("untraced {0}x{0} integrand", w.size)));
    }
    let vals: Vec<C64> = (0..w.grid.n_nodes())
        .into_par_iter()
        .map(|i| {
            let f = w.eval(i, 0);
            let m = f.top().val();
            let z = if trace_first { m.trace() } else { m[(0, 0)] };
            z * w.grid.weight(i)
        })
        .collect();
    Ok(neumaier_complex(&vals))
}

/// A smooth map from a grid into a unitary group.
#[derive(Clone)]
pub struct GroupMap {
    grid: Arc<ManifoldGrid>,
    size: usize,
    max_order: u8,
    special: bool,
    f: Arc<JetFn>,
}

impl fmt::Debug for GroupMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupMap")
            .field("manifold", &self.grid.manifold())
            .field("size", &self.size)
            .field("special", &self.special)
            .finish()
    }
}

pub const UNITARY_TOL: f64 = 1e-10;

impl GroupMap {
    pub fn new(
        grid: &Arc<ManifoldGrid>,
        size: usize,
        special: bool,
        max_order: u8,
        f: impl Fn(usize, u8) -> Jet + Send + Sync + 'static,
    ) -> Self {
        Self {
            grid: grid.clone(),
            size,
            max_order: max_order.min(MAX_ORDER),
            special,
            f: Arc::new(f),
        }
    }

    /// Map given as a function of the embedding coordinates (analytic partials).
    pub fn from_ambient(grid: &Arc<ManifoldGrid>, size: usize, special: bool, field: FieldFn) -> Self {
        let g = grid.clone();
        Self::new(grid, size, special, MAX_ORDER, move |i, o| {
            field(&g.embedding_jets(i, o))
        })
    }

    /// Map given as a function of the chart coordinates (analytic partials).
    pub fn from_chart(grid: &Arc<ManifoldGrid>, size: usize, special: bool, field: FieldFn) -> Self {
        let g = grid.clone();
        Self::new(grid, size, special, MAX_ORDER, move |i, o| field(&g.coord_jets(i, o)))
    }

    /// Map given by values only; partials by finite differences.
    pub fn from_values(
        grid: &Arc<ManifoldGrid>,
        size: usize,
        special: bool,
        f: impl Fn(&[f64]) -> CMat + Send + Sync + 'static,
    ) -> Self {
        let g = grid.clone();
        let h = grid.fd_step();
        Self::new(grid, size, special, MAX_ORDER, move |i, o| {
            finite_difference_jet(&f, g.coords(i), h, o)
        })
    }

    pub fn constant(grid: &Arc<ManifoldGrid>, m: CMat) -> Self {
        let d = grid.dim();
        let size = m.nrows();
        Self::new(grid, size, false, MAX_ORDER, move |_, o| Jet::constant(m.clone(), d, o))
    }

    pub fn identity(grid: &Arc<ManifoldGrid>, size: usize) -> Self {
        Self::constant(grid, identity(size))
    }

    pub fn grid(&self) -> &Arc<ManifoldGrid> {
        &self.grid
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn max_order(&self) -> u8 {
        self.max_order
    }

    pub fn is_special(&self) -> bool {
        self.special
    }

    pub fn eval(&self, node: usize, order: u8) -> Jet {
        (self.f)(node, order)
    }

    /// Check unitarity (and unit determinant when declared special) at every node.
    pub fn check(&self) -> Result<()> {
        let bad = (0..self.grid.n_nodes())
            .into_par_iter()
            .map(|i| {
                let g = self.eval(i, 0);
                let mut dev = unitarity_defect(g.val());
                if self.special {
                    dev = dev.max((g.val().determinant() - c(1.0)).norm());
                }
                (i, dev)
            })
            .filter(|(_, dev)| !(*dev <= UNITARY_TOL))
            .min_by_key(|(i, _)| *i);
        match bad {
            Some((node, deviation)) => Err(Error::NonUnitary { node, deviation }),
            None => Ok(()),
        }
    }

    /// Pointwise product `g · h`.
    pub fn mul(&self, h: &GroupMap) -> Result<GroupMap> {
        if !Arc::ptr_eq(&self.grid, &h.grid) {
            return Err(Error::GridMismatch("group maps on different grids".into()));
        }
        let (a, b) = (self.clone(), h.clone());
        Ok(Self {
            grid: self.grid.clone(),
            size: self.size,
            max_order: self.max_order.min(h.max_order),
            special: self.special && h.special,
            f: Arc::new(move |i, o| a.eval(i, o).mul(&b.eval(i, o))),
        })
    }

    /// Pointwise inverse, `g†`.
    pub fn inverse(&self) -> GroupMap {
        let a = self.clone();
        Self {
            grid: self.grid.clone(),
            size: self.size,
            max_order: self.max_order,
            special: self.special,
            f: Arc::new(move |i, o| a.eval(i, o).adjoint()),
        }
    }

    /// The map as a matrix-valued 0-form.
    pub fn as_form(&self) -> LieForm {
        let a = self.clone();
        LieForm {
            grid: self.grid.clone(),
            degree: 0,
            size: self.size,
            max_order: self.max_order,
            f: Arc::new(move |i, o| FormJet::from_zero_form(a.eval(i, o))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `g⁻¹ dg`
    Left,
    /// `dg g⁻¹`
    Right,
}

/// Maurer-Cartan form of `g`.
pub fn maurer_cartan(g: &GroupMap, side: Side) -> Result<LieForm> {
    g.check()?;
    let dg = exterior_d(&g.as_form())?;
    let ginv = g.inverse().as_form();
    match side {
        Side::Left => product_wedge(&ginv, &dg),
        Side::Right => product_wedge(&dg, &ginv),
    }
}

/// `A^g = g⁻¹ A g + g⁻¹ dg`.
pub fn gauge_transform(a: &LieForm, g: &GroupMap) -> Result<LieForm> {
    if a.degree != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: a.degree,
        });
    }
    let gf = g.as_form();
    if !Arc::ptr_eq(&a.grid, &gf.grid) {
        return Err(Error::GridMismatch(
            "connection and gauge map on different grids".into(),
        ));
    }
    let ginv = g.inverse().as_form();
    let conj = product_wedge(&product_wedge(&ginv, a)?, &gf)?;
    conj.add(&product_wedge(&ginv, &exterior_d(&gf)?)?)
}

/// `Ad_{g⁻¹} A = g⁻¹ A g` (no inhomogeneous term).
pub fn adjoint_action(a: &LieForm, g: &GroupMap) -> Result<LieForm> {
    let gf = g.as_form();
    product_wedge(&product_wedge(&g.inverse().as_form(), a)?, &gf)
}

/// `F = dA + ½[A, A]`.
pub fn curvature(a: &LieForm) -> Result<LieForm> {
    if a.degree != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: a.degree,
        });
    }
    exterior_d(a)?.add(&bracket_wedge(a, a)?.scale(c(0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_gauge_basis, times_i, GaugeKind, I};

    fn grid(m: Manifold, n: usize) -> Arc<ManifoldGrid> {
        ManifoldGrid::new(m, n).unwrap()
    }

    #[test]
    fn grid_volumes() {
        for m in [Manifold::S1, Manifold::S2, Manifold::S3, Manifold::B3, Manifold::T3] {
            let g = grid(m, 32);
            assert!((g.volume() - m.volume()).abs() < 1e-8, "{m}");
        }
        let g = grid(Manifold::S3xS2, 8);
        assert!((g.volume() - Manifold::S3xS2.volume()).abs() < 1e-4);
    }

    #[test]
    fn integrate_volume_form() {
        let g = grid(Manifold::S3, 32);
        let v = integrate_top(&volume_form(&g), false).unwrap();
        assert!((v.re - 2.0 * PI * PI).abs() < 1e-8);
        assert!(integrate_top(&LieForm::constant(&g, identity(1)), false).is_err());
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = grid(Manifold::S2, 8);
        let x = LieForm::constant(&g, identity(2));
        assert_eq!(exterior_d(&x).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn sine_loop_derivative() {
        let g = grid(Manifold::S1, 16);
        let tau = build_gauge_basis(2, GaugeKind::Su).unwrap().generator(0).clone();
        let t2 = tau.clone();
        let u = LieForm::from_chart(&g, 2, Arc::new(move |x| Jet::from_scalar(&x[0].sin(), &t2)));
        let du = exterior_d(&u).unwrap();
        for i in 0..g.n_nodes() {
            let th = g.coords(i)[0];
            let got = du.eval(i, 0).coord(0).val().clone();
            assert!(max_abs(&(got - &tau * c(th.cos()))) < 1e-15);
        }
        // the finite-difference path agrees to the stencil accuracy
        let fine = grid(Manifold::S1, 64);
        let (t3, t4) = (tau.clone(), tau.clone());
        let ufd = LieForm::from_values(&fine, 2, move |x| &t3 * c(x[0].sin()));
        let uan = LieForm::from_chart(&fine, 2, Arc::new(move |x| Jet::from_scalar(&x[0].sin(), &t4)));
        let diff = exterior_d(&ufd).unwrap().sub(&exterior_d(&uan).unwrap()).unwrap();
        assert!(diff.max_abs() < 1e-7);
    }

    #[test]
    fn degree_overflow_is_reported() {
        let g = grid(Manifold::S1, 8);
        let u = LieForm::constant(&g, identity(1));
        let du = exterior_d(&u).unwrap();
        assert!(matches!(exterior_d(&du), Err(Error::DegreeOverflow { .. })));
        assert!(matches!(product_wedge(&du, &du), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn grid_mismatch_is_reported() {
        let a = LieForm::constant(&grid(Manifold::S1, 8), identity(1));
        let b = LieForm::constant(&grid(Manifold::S1, 8), identity(1));
        assert!(matches!(product_wedge(&a, &b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn abelian_maurer_cartan() {
        let g = grid(Manifold::S1, 16);
        let m = GroupMap::from_chart(
            &g,
            1,
            false,
            Arc::new(|x| {
                let (co, si) = (x[0].cos(), x[0].sin());
                Jet::from_scalar(&co, &identity(1)).add(&Jet::from_scalar(&si, &(identity(1) * I)))
            }),
        );
        for side in [Side::Left, Side::Right] {
            let w = maurer_cartan(&m, side).unwrap();
            for i in 0..g.n_nodes() {
                assert!((w.eval(i, 0).coord(0).val()[(0, 0)] - I).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn non_unitary_map_rejected() {
        let g = grid(Manifold::S1, 8);
        let m = GroupMap::constant(&g, identity(2) * c(1.1));
        assert!(matches!(
            maurer_cartan(&m, Side::Left),
            Err(Error::NonUnitary { node: 0, .. })
        ));
    }

    fn su2_exp_map(g: &Arc<ManifoldGrid>) -> GroupMap {
        let b = build_gauge_basis(2, GaugeKind::Su).unwrap();
        let t: Vec<CMat> = b.generators().iter().map(times_i).collect();
        GroupMap::from_ambient(
            g,
            2,
            true,
            Arc::new(move |y| {
                let x = Jet::from_scalar(&y[0].mul(&y[1]), &t[0])
                    .add(&Jet::from_scalar(&y[2].scale(1.3), &t[1]))
                    .add(&Jet::from_scalar(&y[3].mul(&y[3]).sub(&y[1].mul(&y[1])), &t[2]));
                x.exp()
            }),
        )
    }

    #[test]
    fn maurer_cartan_is_flat() {
        let g = grid(Manifold::S3, 10);
        let w = maurer_cartan(&su2_exp_map(&g), Side::Left).unwrap();
        let resid = exterior_d(&w).unwrap().add(&product_wedge(&w, &w).unwrap()).unwrap();
        assert!(resid.max_abs() < 1e-12);
        assert!(curvature(&w).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn curvature_is_equivariant() {
        let g = grid(Manifold::S3, 8);
        let b = build_gauge_basis(2, GaugeKind::Su).unwrap();
        let t: Vec<CMat> = b.generators().iter().map(times_i).collect();
        let coeffs: Vec<FieldFn> = (0..4)
            .map(|k| {
                let m = &t[k % 3] * c(0.5 + k as f64);
                let f: FieldFn = Arc::new(move |y: &[ScalarJet]| Jet::from_scalar(&y[(k + 1) % 4], &m));
                f
            })
            .collect();
        let a = LieForm::one_form_from_ambient(&g, 2, coeffs).unwrap();
        let gm = su2_exp_map(&g);
        let lhs = curvature(&gauge_transform(&a, &gm).unwrap()).unwrap();
        let f = curvature(&a).unwrap();
        let rhs = product_wedge(&product_wedge(&gm.inverse().as_form(), &f).unwrap(), &gm.as_form()).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
        // A = 0 gives the left Maurer-Cartan form
        let zero = a.scale(c(0.0));
        let mc = maurer_cartan(&gm, Side::Left).unwrap();
        assert!(gauge_transform(&zero, &gm).unwrap().sub(&mc).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn stokes_on_the_ball() {
        // γ = y0 dy1∧dy2 + y1² dy2∧dy0, ∫_{B³} dγ vs ∫_{S²} γ
        let build = |g: &Arc<ManifoldGrid>| {
            let gg = g.clone();
            let d = g.dim();
            LieForm::new(g.clone(), 2, 1, 1, move |i, o| {
                let y = gg.embedding_jets(i, o + 1);
                let sc =
                    |s: &ScalarJet| FormJet::from_zero_form(Jet::from_scalar(&s.clone().truncate(o), &identity(1)));
                let dy = |k: usize| FormJet::from_zero_form(Jet::from_scalar(&y[k], &identity(1))).d();
                let t1 = sc(&y[0]).wedge(&dy(1).wedge(&dy(2)));
                let t2 = sc(&y[1].mul(&y[1])).wedge(&dy(2).wedge(&dy(0)));
                let _ = d;
                t1.add(&t2)
            })
            .unwrap()
        };
        let b3 = grid(Manifold::B3, 16);
        let s2 = b3.boundary().unwrap().clone();
        let bulk = integrate_top(&exterior_d(&build(&b3)).unwrap(), false).unwrap();
        let bdry = integrate_top(&build(&s2), false).unwrap();
        // ∫ (1 + 0) dV over the ball by the divergence theorem
        assert!((bulk.re - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!((bulk - bdry).norm() < 1e-10);
        assert_eq!(b3.boundary_link().len(), s2.n_nodes());
        let last = b3.boundary_link()[5];
        assert_eq!(&b3.coords(last)[1..], s2.coords(5));
    }

    #[test]
    fn parallel_reduction_is_stable() {
        let g = grid(Manifold::S3, 12);
        let w = maurer_cartan(&su2_exp_map(&g), Side::Left).unwrap();
        let top = product_wedge(&product_wedge(&w, &w).unwrap(), &w).unwrap();
        let a = integrate_top(&top, true).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| integrate_top(&top, true).unwrap());
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
