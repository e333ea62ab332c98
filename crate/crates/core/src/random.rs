//! Seeded smooth test data.
//!
//! All randomness flows from ChaCha8 seeded with a 64-bit integer
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`). Smooth fields are linear
//! combinations of harmonic polynomials of degree ≤ 2 in the embedding
//! coordinates; group maps are their exponentials.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom_forms::FieldFn;
use crate::jet::{Jet, OneParameter, ScalarJet};
use crate::liealg::{c, times_i, CMat, GaugeBasis, TensorAlgebra};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive an independent stream for a named sub-task.
pub fn substream(seed: u64, tag: u64) -> SeededRng {
    seeded(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn uniform(rng: &mut SeededRng, scale: f64) -> f64 {
    rng.random_range(-scale..scale)
}

/// Harmonic polynomials of degree ≤ 2 in `y`: 1, y_i, y_i y_j (i < j), y_i² − y_{i+1}².
pub fn harmonic_basis(y: &[ScalarJet]) -> Vec<ScalarJet> {
    let n = y.len();
    let one = ScalarJet::constant(1.0, y[0].dim(), y[0].order());
    let mut out = vec![one];
    out.extend(y.iter().cloned());
    for i in 0..n {
        for j in i + 1..n {
            out.push(y[i].mul(&y[j]));
        }
    }
    for i in 0..n.saturating_sub(1) {
        out.push(y[i].mul(&y[i]).sub(&y[i + 1].mul(&y[i + 1])));
    }
    out
}

pub fn harmonic_count(n: usize) -> usize {
    1 + n + n * (n - 1) / 2 + n.saturating_sub(1)
}

/// Anti-Hermitian generators `iτ^a` of a gauge basis.
pub fn anti_hermitian_generators(basis: &GaugeBasis) -> Vec<CMat> {
    basis.generators().iter().map(times_i).collect()
}

/// A random constant combination `Σ c_a X_a`.
pub fn random_element(rng: &mut SeededRng, gens: &[CMat], scale: f64) -> CMat {
    let n = gens[0].nrows();
    let mut m = CMat::zeros(n, n);
    for g in gens {
        m += g * c(uniform(rng, scale));
    }
    m
}

/// `X(y) = Σ_a f_a(y) X_a` with random harmonic coefficient polynomials `f_a`.
#[derive(Debug, Clone)]
pub struct HarmonicField {
    gens: Vec<CMat>,
    // coeffs[a][h]
    coeffs: Vec<Vec<f64>>,
    drop_constant: bool,
}

impl HarmonicField {
    pub fn random(rng: &mut SeededRng, gens: &[CMat], ambient_dim: usize, scale: f64) -> Self {
        let nh = harmonic_count(ambient_dim);
        let coeffs = gens
            .iter()
            .map(|_| (0..nh).map(|_| uniform(rng, scale)).collect())
            .collect();
        Self {
            gens: gens.to_vec(),
            coeffs,
            drop_constant: false,
        }
    }

    /// Same field without the constant harmonic (so it is not trivially constant-dominated).
    pub fn without_constant(mut self) -> Self {
        self.drop_constant = true;
        self
    }

    pub fn eval(&self, y: &[ScalarJet]) -> Jet {
        let h = harmonic_basis(y);
        let start = usize::from(self.drop_constant);
        let mut acc: Option<Jet> = None;
        for (g, cs) in self.gens.iter().zip(&self.coeffs) {
            let mut s = h[start].scale(cs[start]);
            for k in start + 1..h.len() {
                s = s.add(&h[k].scale(cs[k]));
            }
            let term = Jet::from_scalar(&s, g);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.expect("at least one generator")
    }

    pub fn into_field(self) -> FieldFn {
        Arc::new(move |y| self.eval(y))
    }

    /// `exp(X(y))`.
    pub fn into_group_field(self) -> FieldFn {
        Arc::new(move |y| self.eval(y).exp())
    }
}

/// Random algebra-valued 0-form field.
pub fn random_zero_form(rng: &mut SeededRng, gens: &[CMat], ambient_dim: usize, scale: f64) -> FieldFn {
    HarmonicField::random(rng, gens, ambient_dim, scale).into_field()
}

/// Random smooth group map field `exp(Σ_a f_a(y) X_a)`.
pub fn random_group_field(rng: &mut SeededRng, gens: &[CMat], ambient_dim: usize, scale: f64) -> FieldFn {
    HarmonicField::random(rng, gens, ambient_dim, scale).into_group_field()
}

/// Coefficient fields `P_i` of a random 1-form `Σ P_i(y) dY_i`.
pub fn random_one_form_coeffs(rng: &mut SeededRng, gens: &[CMat], ambient_dim: usize, scale: f64) -> Vec<FieldFn> {
    (0..ambient_dim)
        .map(|_| random_zero_form(rng, gens, ambient_dim, scale))
        .collect()
}

/// Periodic phase `φ(x) = Σ_k a_k cos x_k + b_k sin x_k + e sin(x_p + x_q)` on T³ chart coordinates.
#[derive(Debug, Clone)]
pub struct TorusPhase {
    a: [f64; 3],
    b: [f64; 3],
    e: f64,
    pq: (usize, usize),
}

impl TorusPhase {
    pub fn random(rng: &mut SeededRng, scale: f64) -> Self {
        let mut draw = || uniform(rng, scale);
        let a = [draw(), draw(), draw()];
        let b = [draw(), draw(), draw()];
        let e = draw();
        let p = rng.random_range(0..3usize);
        let q = (p + 1 + rng.random_range(0..2usize)) % 3;
        Self { a, b, e, pq: (p, q) }
    }

    pub fn eval(&self, x: &[ScalarJet]) -> ScalarJet {
        let mut s = x[self.pq.0].add(&x[self.pq.1]).sin().scale(self.e);
        for k in 0..3 {
            s = s.add(&x[k].cos().scale(self.a[k])).add(&x[k].sin().scale(self.b[k]));
        }
        s
    }
}

/// Product of one-parameter subgroups `Π_j exp(φ_j(x) X_j)` on T³, with
/// exact jets from the spectral decomposition of each `X_j`.
#[derive(Debug, Clone)]
pub struct TorusGaugeMap {
    factors: Vec<(OneParameter, TorusPhase)>,
}

impl TorusGaugeMap {
    pub fn random(rng: &mut SeededRng, gens: &[CMat], factors: usize, scale: f64) -> Self {
        let factors = (0..factors)
            .map(|_| {
                let x = random_element(rng, gens, 1.0);
                (OneParameter::new(x), TorusPhase::random(rng, scale))
            })
            .collect();
        Self { factors }
    }

    pub fn eval(&self, x: &[ScalarJet]) -> Jet {
        let mut it = self.factors.iter().map(|(op, ph)| op.eval(&ph.eval(x)));
        let first = it.next().expect("at least one factor");
        it.fold(first, |acc, j| acc.mul(&j))
    }

    pub fn into_field(self) -> FieldFn {
        Arc::new(move |x| self.eval(x))
    }
}

/// Anti-Hermitian generators `i σ_η ⊗ τ^c` of a tensor algebra.
pub fn tensor_generators(alg: &TensorAlgebra) -> Vec<CMat> {
    let mut out = Vec::new();
    for eta in 0..4 {
        for a in 0..alg.n_gauge() {
            out.push(times_i(alg.element(eta, a)));
        }
    }
    out
}

/// Gaussian bump `exp(−|x − centre|² / 2s²)` in chart coordinates.
pub fn gaussian_bump(centre: [f64; 3], width: f64) -> impl Fn(&[ScalarJet]) -> ScalarJet + Send + Sync + Clone {
    move |x: &[ScalarJet]| {
        let mut r2 = x[0].add_const(-centre[0]).powi(2);
        for k in 1..3 {
            r2 = r2.add(&x[k].add_const(-centre[k]).powi(2));
        }
        r2.scale(-1.0 / (2.0 * width * width)).exp()
    }
}
