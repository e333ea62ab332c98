//! Anomalous current commutators on the spin ⊗ gauge algebra: the naive
//! commutator cases, the local Schwinger coefficients and their smeared
//! values, cross-checked against the Mickelsson-Faddeev cocycle.
//!
//! The smeared Schwinger term is `∫ u(x) Σ_k C_k(x) ∂_k v(x) d³x`, where
//! `C_k` multiplies `∂_kδ(x − y)`; the delta derivative has been moved onto
//! `v` by parts.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cocycle_lab::{mickelsson_faddeev, MFContext};
use crate::error::{Error, Result};
use crate::geom_forms::{LieForm, ManifoldGrid};
use crate::jet::{Jet, ScalarJet};
use crate::liealg::{
    epsilon3, epsilon3_zero, max_abs, tensor_commutator, CMat, GaugeBasis, GaugeKind, TensorAlgebra, C64, I,
};
use crate::quadrature::neumaier_complex;

/// Scalar function of chart coordinates.
pub type ScalarField = Arc<dyn Fn(&[ScalarJet]) -> ScalarJet + Send + Sync>;

/// Spin-index case of a current pair `(j^μ_a, j^ν_b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurrentCase {
    case_id: u8,
    mu: usize,
    nu: usize,
}

impl CurrentCase {
    /// Classify `(μ, ν)`: 1 when equal, 2 when exactly one is 0, 3 otherwise.
    pub fn new(mu: usize, nu: usize) -> Result<Self> {
        if mu > 3 || nu > 3 {
            return Err(Error::InvalidCase(format!("spin indices ({mu}, {nu}) outside 0..=3")));
        }
        let case_id = if mu == nu {
            1
        } else if mu == 0 || nu == 0 {
            2
        } else {
            3
        };
        Ok(Self { case_id, mu, nu })
    }

    /// Build with an explicit case id, rejecting inconsistent indices.
    pub fn with_id(case_id: u8, mu: usize, nu: usize) -> Result<Self> {
        let c = Self::new(mu, nu)?;
        if c.case_id != case_id {
            return Err(Error::InvalidCase(format!(
                "({mu}, {nu}) is case {}, not {case_id}",
                c.case_id
            )));
        }
        Ok(c)
    }

    pub fn id(&self) -> u8 {
        self.case_id
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    /// The spin index carried by the result: 0 for case 1, the nonzero index
    /// for case 2, the complementary index η for case 3.
    pub fn result_spin(&self) -> usize {
        match self.case_id {
            1 => 0,
            2 => self.mu.max(self.nu),
            _ => 6 - self.mu - self.nu,
        }
    }

    /// `ε_{μνη}` for case 3, 1 otherwise.
    pub fn epsilon(&self) -> f64 {
        if self.case_id == 3 {
            epsilon3(self.mu, self.nu, self.result_spin())
        } else {
            1.0
        }
    }
}

/// One term `coeff · j^{spin}_{gauge}` of a naive commutator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaiveTerm {
    pub coeff: C64,
    pub spin: usize,
    pub gauge: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveExpansion {
    pub case: CurrentCase,
    pub terms: Vec<NaiveTerm>,
    /// Distance between the expansion and the direct matrix commutator.
    pub matrix_residual: f64,
}

/// Smeared test data: a tensor-valued connection and two scalar test functions.
#[derive(Clone)]
pub struct SchwingerInputs {
    pub a: LieForm,
    pub u: ScalarField,
    pub v: ScalarField,
    /// Ball `(centre, radius)` in chart coordinates outside which u and v must vanish.
    pub support: Option<([f64; 3], f64)>,
}

pub const SUPPORT_TOL: f64 = 1e-12;

/// The two evaluation paths of `θ₂(A; u e_{μa}, v e_{νb})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub smeared: C64,
    pub cocycle: C64,
}

impl CrossCheck {
    pub fn residual(&self) -> f64 {
        (self.smeared - self.cocycle).norm()
    }
}

/// Coefficient engine over `σ_μ ⊗ τ^a`, with gauge indices in the completed u(p) basis.
#[derive(Debug, Clone)]
pub struct SchwingerEngine {
    alg: TensorAlgebra,
    active: Vec<usize>,
    c2: C64,
}

impl SchwingerEngine {
    /// `c₂ = i/24π²`. The coefficient sums run over the generators of `basis`
    /// (for su(p) the identity direction is excluded).
    pub fn new(basis: &GaugeBasis) -> Self {
        let alg = TensorAlgebra::new(basis);
        let active = match basis.kind() {
            GaugeKind::U => (0..alg.n_gauge()).collect(),
            GaugeKind::Su => (1..alg.n_gauge()).collect(),
        };
        Self {
            alg,
            active,
            c2: I / (24.0 * PI * PI),
        }
    }

    pub fn algebra(&self) -> &TensorAlgebra {
        &self.alg
    }

    pub fn c2(&self) -> C64 {
        self.c2
    }

    /// Gauge indices the coefficient sums run over.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    fn check_gauge(&self, a: usize, b: usize) -> Result<()> {
        let n = self.alg.n_gauge();
        if a >= n || b >= n {
            return Err(Error::InvalidCase(format!("gauge indices ({a}, {b}) outside 0..{n}")));
        }
        Ok(())
    }

    /// `[σ_μ⊗τ^a, σ_ν⊗τ^b]` expanded per case: `iλ^{ab}_c j⁰_c`, `iλ^{ab}_c j^ν_c`,
    /// or `iε_{μνη} d_{abc} j^η_c`, checked against the matrix commutator.
    pub fn naive_case_commutator(&self, case: CurrentCase, a: usize, b: usize) -> Result<NaiveExpansion> {
        self.check_gauge(a, b)?;
        let g = self.alg.gauge();
        let spin = case.result_spin();
        let mut terms = Vec::new();
        for cc in 0..self.alg.n_gauge() {
            let coeff = match case.id() {
                1 | 2 => I * g.lambda(a, b, cc),
                _ => I * case.epsilon() * g.dsym(a, b, cc),
            };
            if coeff.norm() > 0.0 {
                terms.push(NaiveTerm { coeff, spin, gauge: cc });
            }
        }
        let x = self.alg.basis_element(case.mu(), a);
        let y = self.alg.basis_element(case.nu(), b);
        let direct = tensor_commutator(&self.alg, &x, &y)?;
        let mut sum = CMat::zeros(self.alg.size(), self.alg.size());
        for t in &terms {
            sum += self.alg.element(t.spin, t.gauge) * t.coeff;
        }
        let matrix_residual = max_abs(&(&sum - direct.realized()));
        if matrix_residual > 1e-10 {
            return Err(Error::IdentityViolation {
                what: format!("naive case {} expansion", case.id()),
                residual: matrix_residual,
            });
        }
        Ok(NaiveExpansion {
            case,
            terms,
            matrix_residual,
        })
    }

    /// Gauge-trace weights `w_c` with `C_k = pref Σ_c w_c ε_ijk ∂_i A^η_{j,c}`:
    /// `tr({τ^a,τ^b}τ^c)` for cases 1-2, `tr([τ^a,τ^b]τ^c)` for case 3.
    fn trace_weights(&self, case: CurrentCase, a: usize, b: usize) -> Vec<(usize, C64)> {
        let g = self.alg.gauge();
        self.active
            .iter()
            .filter_map(|&cc| {
                let w = match case.id() {
                    1 | 2 => C64::new(0.5 * g.dsym(a, b, cc), 0.0),
                    _ => I * (0.5 * g.lambda(a, b, cc)),
                };
                (w.norm() > 0.0).then_some((cc, w))
            })
            .collect()
    }

    fn prefactor(&self, case: CurrentCase) -> C64 {
        match case.id() {
            1 | 2 => self.c2 * 2.0,
            _ => self.c2 * 2.0 * I * case.epsilon(),
        }
    }

    /// Per node, the coefficients `C_k` of `∂_kδ(x − y)` (k = 0, 1, 2).
    pub fn local_coefficient(&self, case: CurrentCase, a_field: &LieForm, a: usize, b: usize) -> Result<Vec<[C64; 3]>> {
        self.check_gauge(a, b)?;
        check_connection(a_field, self.alg.size())?;
        let weights = self.trace_weights(case, a, b);
        let pref = self.prefactor(case);
        let eta = case.result_spin();
        let grid = a_field.grid().clone();
        Ok((0..grid.n_nodes())
            .into_par_iter()
            .map(|node| {
                let mut out = [C64::new(0.0, 0.0); 3];
                if weights.is_empty() {
                    return out;
                }
                let f = a_field.eval(node, 1);
                for k in 0..3 {
                    let mut acc = C64::new(0.0, 0.0);
                    for i in 0..3 {
                        for j in 0..3 {
                            let e = epsilon3_zero(i, j, k);
                            if e == 0.0 {
                                continue;
                            }
                            let dij = f.coord(j).grad(i);
                            for &(cc, w) in &weights {
                                acc += w * e * self.alg.coefficient(dij, eta, cc);
                            }
                        }
                    }
                    out[k] = pref * acc;
                }
                out
            })
            .collect())
    }

    /// `∫ u Σ_k C_k ∂_k v` on the chart.
    pub fn smeared(&self, case: CurrentCase, inp: &SchwingerInputs, a: usize, b: usize) -> Result<C64> {
        check_support(inp)?;
        let coeff = self.local_coefficient(case, &inp.a, a, b)?;
        let grid = inp.a.grid().clone();
        Ok(smear(&grid, &coeff, &inp.u, &inp.v))
    }

    /// `θ₂(A; u σ_μ⊗τ^a, v σ_ν⊗τ^b)` through the cocycle, next to the smeared value.
    pub fn mf_cross_check(&self, case: CurrentCase, inp: &SchwingerInputs, a: usize, b: usize) -> Result<CrossCheck> {
        let smeared = self.smeared(case, inp, a, b)?;
        let grid = inp.a.grid().clone();
        let uf = self.tensor_test_function(&grid, &inp.u, case.mu(), a);
        let vf = self.tensor_test_function(&grid, &inp.v, case.nu(), b);
        let ctx = MFContext::with_c2(inp.a.clone(), self.c2)?;
        let cocycle = mickelsson_faddeev(&ctx, &uf, &vf)?;
        Ok(CrossCheck { smeared, cocycle })
    }

    /// `u(x) σ_μ ⊗ τ^a` as a 0-form.
    pub fn tensor_test_function(&self, grid: &Arc<ManifoldGrid>, u: &ScalarField, mu: usize, a: usize) -> LieForm {
        let e = self.alg.element(mu, a).clone();
        let u = u.clone();
        LieForm::from_chart(grid, self.alg.size(), Arc::new(move |x| Jet::from_scalar(&u(x), &e)))
    }

    /// The gauge-only Schwinger term smeared: `c₂ ∫ u Σ_c tr({τ^a,τ^b}τ^c) ε_ijk ∂_i A^c_j ∂_k v` with
    /// `A^c = 2 tr(A τ^c)` for a gauge-only (p×p) connection.
    pub fn classic_term(&self, a_gauge: &LieForm, u: &ScalarField, v: &ScalarField, a: usize, b: usize) -> Result<C64> {
        self.check_gauge(a, b)?;
        check_connection(a_gauge, self.alg.gauge().p())?;
        let g = self.alg.gauge();
        let weights = self.trace_weights(CurrentCase::new(0, 0)?, a, b);
        let grid = a_gauge.grid().clone();
        let c2 = self.c2;
        let coeff: Vec<[C64; 3]> = (0..grid.n_nodes())
            .into_par_iter()
            .map(|node| {
                let mut out = [C64::new(0.0, 0.0); 3];
                if weights.is_empty() {
                    return out;
                }
                let f = a_gauge.eval(node, 1);
                for (k, slot) in out.iter_mut().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for i in 0..3 {
                        for j in 0..3 {
                            let e = epsilon3_zero(i, j, k);
                            if e == 0.0 {
                                continue;
                            }
                            let dij = f.coord(j).grad(i);
                            for &(cc, w) in &weights {
                                acc += w * e * (dij * g.generator(cc)).trace() * 2.0;
                            }
                        }
                    }
                    *slot = c2 * acc;
                }
                out
            })
            .collect();
        Ok(smear(&grid, &coeff, u, v))
    }
}

fn check_connection(a: &LieForm, size: usize) -> Result<()> {
    if a.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: a.degree(),
        });
    }
    if a.grid().dim() != 3 {
        return Err(Error::WrongManifold {
            expected: "a 3-dimensional chart".into(),
            found: a.grid().manifold().to_string(),
        });
    }
    if a.size() != size {
        return Err(Error::DimensionMismatch(format!(
            "connection values {0}x{0}, expected {size}x{size}",
            a.size()
        )));
    }
    if a.max_order() < 1 {
        return Err(Error::JetOrder { have: 0, need: 1 });
    }
    Ok(())
}

fn smear(grid: &Arc<ManifoldGrid>, coeff: &[[C64; 3]], u: &ScalarField, v: &ScalarField) -> C64 {
    let vals: Vec<C64> = (0..grid.n_nodes())
        .into_par_iter()
        .map(|node| {
            let x = grid.coord_jets(node, 1);
            let (uu, vv) = (u(&x), v(&x));
            let s: C64 = (0..3).map(|k| coeff[node][k] * vv.grad[k]).sum();
            s * uu.val * grid.weight(node)
        })
        .collect();
    neumaier_complex(&vals)
}

fn check_support(inp: &SchwingerInputs) -> Result<()> {
    let Some((centre, radius)) = inp.support else {
        return Ok(());
    };
    let grid = inp.a.grid();
    for node in 0..grid.n_nodes() {
        let x = grid.coords(node);
        let r2: f64 = (0..3).map(|k| (x[k] - centre[k]).powi(2)).sum();
        if r2 <= radius * radius {
            continue;
        }
        let xj = grid.coord_jets(node, 0);
        let value = inp.u.as_ref()(&xj).val.abs().max(inp.v.as_ref()(&xj).val.abs());
        if value > SUPPORT_TOL {
            return Err(Error::SupportViolation { node, value });
        }
    }
    Ok(())
}

/// Scalar Gaussian bump `exp(−|x − centre|²/2w²)` as a test function.
pub fn bump_field(centre: [f64; 3], width: f64) -> ScalarField {
    Arc::new(crate::random::gaussian_bump(centre, width))
}

/// Bump times a random linear polynomial `1 + Σ a_k (x_k − centre_k)`, so
/// that the derivative pattern is not radial.
pub fn tilted_bump(centre: [f64; 3], width: f64, tilt: [f64; 3]) -> ScalarField {
    let bump = crate::random::gaussian_bump(centre, width);
    Arc::new(move |x: &[ScalarJet]| {
        let mut lin = ScalarJet::constant(1.0, x[0].dim(), x[0].order());
        for k in 0..3 {
            lin = lin.add(&x[k].add_const(-centre[k]).scale(tilt[k]));
        }
        bump(x).mul(&lin)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom_forms::{maurer_cartan, GroupMap, Manifold, Side};
    use crate::liealg::{build_gauge_basis, c, times_i};
    use crate::random::{seeded, uniform, TorusGaugeMap};

    fn engine(p: usize, kind: GaugeKind) -> SchwingerEngine {
        SchwingerEngine::new(&build_gauge_basis(p, kind).unwrap())
    }

    fn pure_gauge(eng: &SchwingerEngine, grid: &Arc<ManifoldGrid>, seed: u64, spins: &[usize]) -> LieForm {
        let alg = eng.algebra();
        let gens: Vec<CMat> = spins
            .iter()
            .flat_map(|&mu| eng.active.iter().map(move |&a| times_i(alg.element(mu, a))))
            .collect();
        let map = TorusGaugeMap::random(&mut seeded(seed), &gens, 3, 0.7);
        let g = GroupMap::from_chart(grid, alg.size(), false, map.into_field());
        maurer_cartan(&g, Side::Left).unwrap().cached()
    }

    fn inputs(a: LieForm, seed: u64) -> SchwingerInputs {
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

    #[test]
    fn case_classification() {
        assert_eq!(CurrentCase::new(2, 2).unwrap().id(), 1);
        assert_eq!(CurrentCase::new(0, 3).unwrap().id(), 2);
        assert_eq!(CurrentCase::new(3, 0).unwrap().result_spin(), 3);
        let c3 = CurrentCase::new(1, 2).unwrap();
        assert_eq!((c3.id(), c3.result_spin(), c3.epsilon()), (3, 3, 1.0));
        assert_eq!(CurrentCase::new(2, 1).unwrap().epsilon(), -1.0);
        assert!(CurrentCase::with_id(2, 1, 2).is_err());
        assert!(CurrentCase::new(4, 0).is_err());
    }

    #[test]
    fn naive_expansions() {
        let e = engine(2, GaugeKind::Su);
        // completed u(2) indices: 1, 2, 3 carry σ/2
        let x = e.naive_case_commutator(CurrentCase::new(1, 1).unwrap(), 1, 2).unwrap();
        assert_eq!(x.terms.len(), 1);
        assert_eq!((x.terms[0].spin, x.terms[0].gauge), (0, 3));
        assert!((x.terms[0].coeff - I).norm() < 1e-12);
        let y = e.naive_case_commutator(CurrentCase::new(1, 2).unwrap(), 1, 2).unwrap();
        assert!(y.terms.is_empty());
        let z = e.naive_case_commutator(CurrentCase::new(1, 2).unwrap(), 1, 1).unwrap();
        assert_eq!(z.terms.len(), 1);
        assert_eq!((z.terms[0].spin, z.terms[0].gauge), (3, 0));
        let u3 = engine(3, GaugeKind::U);
        for mu in 0..4 {
            for nu in 0..4 {
                let case = CurrentCase::new(mu, nu).unwrap();
                for a in 0..9 {
                    for b in 0..9 {
                        assert!(u3.naive_case_commutator(case, a, b).unwrap().matrix_residual < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn constant_connection_has_no_schwinger_term() {
        let e = engine(2, GaugeKind::U);
        let grid = ManifoldGrid::new(Manifold::T3, 6).unwrap();
        let m = times_i(e.algebra().element(0, 1));
        let comps = [m.clone(), m.clone() * c(2.0), m];
        let a = LieForm::new(grid.clone(), 1, 4, 1, move |_, o| {
            crate::forms::FormJet::one_form(comps.iter().map(|x| Jet::constant(x.clone(), 3, o)).collect())
        })
        .unwrap();
        let coeff = e.local_coefficient(CurrentCase::new(0, 0).unwrap(), &a, 0, 0).unwrap();
        assert!(coeff.iter().flatten().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn su2_cases_one_and_two_vanish() {
        let e = engine(2, GaugeKind::Su);
        let grid = ManifoldGrid::new(Manifold::T3, 8).unwrap();
        let a = pure_gauge(&e, &grid, 2, &[0, 1, 2, 3]);
        for (mu, nu) in [(0, 0), (2, 2), (0, 1), (3, 0)] {
            for x in 1..4 {
                for y in 1..4 {
                    let coeff = e
                        .local_coefficient(CurrentCase::new(mu, nu).unwrap(), &a, x, y)
                        .unwrap();
                    assert!(coeff.iter().flatten().all(|z| z.norm() == 0.0));
                }
            }
        }
    }

    #[test]
    fn probe_node_matches_index_loop() {
        let e = engine(2, GaugeKind::U);
        let grid = ManifoldGrid::new(Manifold::T3, 8).unwrap();
        let a = pure_gauge(&e, &grid, 5, &[0, 1, 2, 3]);
        let (ga, gb, node) = (1, 0, 77);
        let coeff = e
            .local_coefficient(CurrentCase::new(0, 0).unwrap(), &a, ga, gb)
            .unwrap();
        let f = a.eval(node, 1);
        let g = e.algebra().gauge();
        let tau = |k: usize| g.generator(k).clone();
        let mut want = [C64::new(0.0, 0.0); 3];
        // C_k = 2c₂ ε_ijk tr({τa,τb}τc) ∂_i A⁰_{j,c}, all sums written out
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    for cc in 0..4 {
                        let anti = &tau(ga) * &tau(gb) + &tau(gb) * &tau(ga);
                        let tr = (anti * tau(cc)).trace();
                        let sig0 = CMat::identity(2, 2).kronecker(&tau(cc));
                        let comp = (f.coord(j).grad(i) * sig0).trace();
                        want[k] += e.c2() * 2.0 * epsilon3_zero(i, j, k) * tr * comp;
                    }
                }
            }
        }
        for k in 0..3 {
            assert!((coeff[node][k] - want[k]).norm() < 1e-14);
        }
        assert!(coeff[node].iter().any(|z| z.norm() > 1e-6));
    }

    #[test]
    fn smeared_matches_cocycle_all_cases() {
        let e = engine(2, GaugeKind::U);
        let grid = ManifoldGrid::new(Manifold::T3, 32).unwrap();
        let a = pure_gauge(&e, &grid, 9, &[0, 1, 2, 3]);
        let inp = inputs(a, 10);
        for (mu, nu, ga, gb) in [
            (0, 0, 0, 1),
            (2, 2, 3, 0),
            (0, 2, 0, 2),
            (1, 0, 3, 0),
            (1, 2, 1, 2),
            (3, 1, 2, 3),
        ] {
            let case = CurrentCase::new(mu, nu).unwrap();
            let r = e.mf_cross_check(case, &inp, ga, gb).unwrap();
            assert!(r.residual() < 1e-7, "case {mu}{nu} {ga}{gb}: {r:?}");
            assert!(r.cocycle.norm() > 1e-6, "case {mu}{nu} {ga}{gb}: {r:?}");
        }
    }

    #[test]
    fn smeared_antisymmetry_and_support() {
        let e = engine(2, GaugeKind::U);
        let grid = ManifoldGrid::new(Manifold::T3, 32).unwrap();
        let a = pure_gauge(&e, &grid, 12, &[0, 1, 2, 3]);
        let inp = inputs(a.clone(), 13);
        let swapped = SchwingerInputs {
            u: inp.v.clone(),
            v: inp.u.clone(),
            ..inp.clone()
        };
        let case = CurrentCase::new(1, 2).unwrap();
        let x = e.smeared(case, &inp, 1, 2).unwrap();
        let y = e.smeared(CurrentCase::new(2, 1).unwrap(), &swapped, 2, 1).unwrap();
        assert!((x + y).norm() < 1e-8, "{x} {y}");
        let leaky = SchwingerInputs {
            support: Some(([PI; 3], 0.5)),
            ..inp
        };
        assert!(matches!(
            e.smeared(case, &leaky, 1, 2),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn case_two_without_spatial_component_is_zero() {
        let e = engine(2, GaugeKind::U);
        let grid = ManifoldGrid::new(Manifold::T3, 12).unwrap();
        let a = pure_gauge(&e, &grid, 3, &[0]);
        let inp = inputs(a, 4);
        let r = e.mf_cross_check(CurrentCase::new(0, 2).unwrap(), &inp, 1, 2).unwrap();
        assert!(r.smeared.norm() < 1e-8 && r.cocycle.norm() < 1e-8, "{r:?}");
    }

    #[test]
    fn classic_term_is_half_of_case_one() {
        let e = engine(3, GaugeKind::U);
        let grid = ManifoldGrid::new(Manifold::T3, 16).unwrap();
        let gens: Vec<CMat> = (0..9).map(|k| times_i(e.algebra().gauge().generator(k))).collect();
        let map = TorusGaugeMap::random(&mut seeded(6), &gens, 3, 0.7);
        let g = GroupMap::from_chart(&grid, 3, false, map.into_field());
        let a_gauge = maurer_cartan(&g, Side::Left).unwrap().cached();
        // the same connection embedded as σ₀ ⊗ A
        let sig0 = CMat::identity(2, 2);
        let inner = a_gauge.clone();
        let a_tensor = LieForm::new(grid.clone(), 1, 6, 1, move |i, o| {
            let f = inner.eval(i, o);
            let comps = (0..3)
                .map(|k| {
                    let j = f.coord(k);
                    let val = sig0.kronecker(j.val());
                    let grad = (0..3).map(|d| sig0.kronecker(j.grad(d))).collect();
                    let hess = vec![CMat::zeros(6, 6); 6];
                    Jet::from_parts(val, grad, hess, 3).truncate(o)
                })
                .collect();
            crate::forms::FormJet::one_form(comps)
        })
        .unwrap();
        let inp = inputs(a_tensor, 7);
        let case1 = e.smeared(CurrentCase::new(0, 0).unwrap(), &inp, 4, 4).unwrap();
        let classic = e.classic_term(&a_gauge, &inp.u, &inp.v, 4, 4).unwrap();
        assert!(classic.norm() > 1e-6);
        assert!((case1 / classic - c(2.0)).norm() < 1e-10);
    }
}
