//! Matrix Lie algebra core: generator bases for su(p) and u(p), structure
//! constants, d-symbols, the Pauli spin basis and the spin ⊗ gauge tensor
//! algebra.
//!
//! Generators are Hermitian with `tr(τ^a τ^b) = ½δ^{ab}` and
//! `[τ^a, τ^b] = i λ^{ab}_c τ^c`. Anti-Hermitian algebra values, as used by
//! the cocycle integrands, are obtained with [`times_i`].

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance for the Hermitian / trace / normalization invariants.
pub const BASIS_TOL: f64 = 1e-12;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

pub fn trace(a: &CMat) -> C64 {
    a.trace()
}

/// Multiply by `i`: maps Hermitian generators to anti-Hermitian algebra values.
pub fn times_i(a: &CMat) -> CMat {
    a * I
}

/// Max-abs entry norm.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn hermiticity_defect(a: &CMat) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn unitarity_defect(a: &CMat) -> f64 {
    max_abs(&(a.adjoint() * a - identity(a.nrows())))
}

/// Levi-Civita symbol on indices in `{1, 2, 3}` (anything else gives 0).
pub fn epsilon3(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1.0,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1.0,
        _ => 0.0,
    }
}

/// Levi-Civita symbol on zero-based indices in `{0, 1, 2}`.
pub fn epsilon3_zero(i: usize, j: usize, k: usize) -> f64 {
    epsilon3(i + 1, j + 1, k + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaugeKind {
    Su,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraTag {
    Su(usize),
    U(usize),
    Spin2,
}

/// A validated element of su(p), u(p) or the spin algebra (Hermitian convention).
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    entries: CMat,
    tag: AlgebraTag,
}

impl AlgebraElement {
    pub fn new(entries: CMat, tag: AlgebraTag) -> Result<Self> {
        let n = match tag {
            AlgebraTag::Su(p) | AlgebraTag::U(p) => p,
            AlgebraTag::Spin2 => 2,
        };
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a {n}-dimensional algebra",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let herm = hermiticity_defect(&entries);
        if herm > BASIS_TOL {
            return Err(Error::NonHermitian(herm));
        }
        if let AlgebraTag::Su(_) = tag {
            let tr = entries.trace().norm();
            if tr > BASIS_TOL {
                return Err(Error::InvalidDimension(format!("su element has trace {tr:e}")));
            }
        }
        Ok(Self { entries, tag })
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }
}

/// Dense rank-3 table indexed `[a][b][c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table3 {
    n: usize,
    data: Vec<f64>,
}

impl Table3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        self.data[(a * self.n + b) * self.n + c] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Generators of su(p) or u(p) with their structure constants and d-symbols.
///
/// For `kind = Su` the generators are indexed `0..p²-1` and correspond to the
/// physics labels `τ¹ … τ^{p²-1}`; for su(3) they are the Gell-Mann matrices
/// halved, in Gell-Mann order. For `kind = U` index 0 holds `τ⁰ = I/√(2p)`
/// and index `a ≥ 1` holds `τ^a`, so physics label and index agree.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeBasis {
    p: usize,
    kind: GaugeKind,
    generators: Vec<CMat>,
    lambda: Table3,
    dsym: Table3,
}

impl GaugeBasis {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn kind(&self) -> GaugeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn generator(&self, a: usize) -> &CMat {
        &self.generators[a]
    }

    /// Index of the generator carrying physics label `label`.
    pub fn index_of_label(&self, label: usize) -> Option<usize> {
        let idx = match self.kind {
            GaugeKind::Su => label.checked_sub(1)?,
            GaugeKind::U => label,
        };
        (idx < self.dim()).then_some(idx)
    }

    /// λ^{ab}_c.
    pub fn lambda(&self, a: usize, b: usize, c: usize) -> f64 {
        self.lambda.get(a, b, c)
    }

    pub fn lambda_table(&self) -> &Table3 {
        &self.lambda
    }

    /// d_{abc}, the coefficients of `{τ^a, τ^b}` along `τ^c`.
    pub fn dsym(&self, a: usize, b: usize, c: usize) -> f64 {
        self.dsym.get(a, b, c)
    }

    pub fn dsym_table(&self) -> &Table3 {
        &self.dsym
    }

    /// Coefficients `2 tr(m τ^a)`; exact for matrices in the span.
    pub fn decompose(&self, m: &CMat) -> Vec<C64> {
        self.generators.iter().map(|t| (m * t).trace() * 2.0).collect()
    }

    pub fn reconstruct(&self, coeffs: &[C64]) -> CMat {
        let mut out = CMat::zeros(self.p, self.p);
        for (t, &x) in self.generators.iter().zip(coeffs) {
            out += t * x;
        }
        out
    }

    /// The u(p) basis containing this one (identity direction prepended for su).
    pub fn completed(&self) -> GaugeBasis {
        match self.kind {
            GaugeKind::U => self.clone(),
            GaugeKind::Su => {
                build_gauge_basis(self.p, GaugeKind::U).expect("p >= 2 was validated when this basis was built")
            }
        }
    }
}

/// Generalized Gell-Mann matrices (not halved), ordered so that p = 2 gives
/// the Pauli matrices and p = 3 the Gell-Mann matrices λ1..λ8.
fn gell_mann(p: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(p * p - 1);
    for k in 1..p {
        for j in 0..k {
            let mut s = CMat::zeros(p, p);
            s[(j, k)] = ONE;
            s[(k, j)] = ONE;
            out.push(s);
            let mut a = CMat::zeros(p, p);
            a[(j, k)] = -I;
            a[(k, j)] = I;
            out.push(a);
        }
        let norm = (2.0 / (k * (k + 1)) as f64).sqrt();
        let mut d = CMat::zeros(p, p);
        for i in 0..k {
            d[(i, i)] = c(norm);
        }
        d[(k, k)] = c(-(k as f64) * norm);
        out.push(d);
    }
    out
}

/// Build the normalized generator basis of su(p) or u(p).
pub fn build_gauge_basis(p: usize, kind: GaugeKind) -> Result<GaugeBasis> {
    if p < 2 {
        return Err(Error::InvalidDimension(format!("gauge dimension p = {p} < 2")));
    }
    let mut generators = Vec::with_capacity(p * p);
    if kind == GaugeKind::U {
        generators.push(identity(p) * c(1.0 / (2.0 * p as f64).sqrt()));
    }
    generators.extend(gell_mann(p).into_iter().map(|m| m * c(0.5)));
    let mut basis = GaugeBasis {
        p,
        kind,
        generators,
        lambda: Table3::zeros(0),
        dsym: Table3::zeros(0),
    };
    basis.lambda = structure_constants(&basis)?;
    basis.dsym = d_symbols(&basis)?;
    Ok(basis)
}

/// λ^{ab}_c = −2i tr([τ^a, τ^b] τ^c), with the imaginary residue checked.
pub fn structure_constants(basis: &GaugeBasis) -> Result<Table3> {
    real_trace_table(basis, |x, y| commutator(x, y) * (-I * 2.0))
}

/// d_{abc} = 2 tr({τ^a, τ^b} τ^c), the expansion coefficients of the anticommutator.
pub fn d_symbols(basis: &GaugeBasis) -> Result<Table3> {
    real_trace_table(basis, |x, y| anticommutator(x, y) * c(2.0))
}

fn real_trace_table(basis: &GaugeBasis, op: impl Fn(&CMat, &CMat) -> CMat) -> Result<Table3> {
    let n = basis.dim();
    let gens = &basis.generators;
    let mut table = Table3::zeros(n);
    for a in 0..n {
        for b in 0..n {
            let m = op(&gens[a], &gens[b]);
            for (cc, t) in gens.iter().enumerate() {
                let z = (&m * t).trace();
                if z.im.abs() > 1e-10 {
                    return Err(Error::InconsistentBasis(z.im.abs()));
                }
                let re = if z.re.abs() < BASIS_TOL { 0.0 } else { z.re };
                table.set(a, b, cc, re);
            }
        }
    }
    Ok(table)
}

/// σ₀ = I, σ₁, σ₂, σ₃.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinBasis {
    sigma: [CMat; 4],
}

impl Default for SpinBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl SpinBasis {
    pub fn new() -> Self {
        let s0 = identity(2);
        let s1 = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let s2 = CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]);
        let s3 = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        Self {
            sigma: [s0, s1, s2, s3],
        }
    }

    pub fn sigma(&self, mu: usize) -> &CMat {
        &self.sigma[mu]
    }
}

/// The algebra spanned by `σ_μ ⊗ τ^a` over a completed u(p) gauge basis.
///
/// Realized matrices are `2p × 2p` with the spin index as the outer block.
/// The basis is orthonormal for the trace form: `tr(e_{μa} e_{νb}) = δ δ`.
#[derive(Debug, Clone)]
pub struct TensorAlgebra {
    gauge: GaugeBasis,
    spin: SpinBasis,
    elements: Vec<CMat>,
}

impl TensorAlgebra {
    pub fn new(gauge: &GaugeBasis) -> Self {
        let gauge = gauge.completed();
        let spin = SpinBasis::new();
        let mut elements = Vec::with_capacity(4 * gauge.dim());
        for mu in 0..4 {
            for t in gauge.generators() {
                elements.push(spin.sigma(mu).kronecker(t));
            }
        }
        Self { gauge, spin, elements }
    }

    pub fn gauge(&self) -> &GaugeBasis {
        &self.gauge
    }

    pub fn spin(&self) -> &SpinBasis {
        &self.spin
    }

    /// Matrix size `2p`.
    pub fn size(&self) -> usize {
        2 * self.gauge.p()
    }

    pub fn n_gauge(&self) -> usize {
        self.gauge.dim()
    }

    /// `σ_μ ⊗ τ^a`.
    pub fn element(&self, mu: usize, a: usize) -> &CMat {
        &self.elements[mu * self.gauge.dim() + a]
    }

    /// Coefficient `x^μ_a = tr(m (σ_μ ⊗ τ^a))`.
    pub fn coefficient(&self, m: &CMat, mu: usize, a: usize) -> C64 {
        (m * self.element(mu, a)).trace()
    }

    pub fn decompose(&self, m: &CMat) -> TensorElement {
        let coeffs = self.elements.iter().map(|e| (m * e).trace()).collect();
        TensorElement {
            coeffs,
            realized: m.clone(),
            n_gauge: self.gauge.dim(),
        }
    }

    pub fn realize(&self, coeffs: &[C64]) -> Result<TensorElement> {
        if coeffs.len() != self.elements.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a {}-dimensional tensor algebra",
                coeffs.len(),
                self.elements.len()
            )));
        }
        let n = self.size();
        let mut realized = CMat::zeros(n, n);
        for (e, &x) in self.elements.iter().zip(coeffs) {
            realized += e * x;
        }
        Ok(TensorElement {
            coeffs: coeffs.to_vec(),
            realized,
            n_gauge: self.gauge.dim(),
        })
    }

    /// Simple tensor `σ_μ ⊗ τ^a` as an element.
    pub fn basis_element(&self, mu: usize, a: usize) -> TensorElement {
        let mut coeffs = vec![ZERO; self.elements.len()];
        coeffs[mu * self.gauge.dim() + a] = ONE;
        TensorElement {
            coeffs,
            realized: self.element(mu, a).clone(),
            n_gauge: self.gauge.dim(),
        }
    }
}

/// Coefficient table `x^μ_a` together with its realized `2p × 2p` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    coeffs: Vec<C64>,
    realized: CMat,
    n_gauge: usize,
}

impl TensorElement {
    pub fn coeff(&self, mu: usize, a: usize) -> C64 {
        self.coeffs[mu * self.n_gauge + a]
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn realized(&self) -> &CMat {
        &self.realized
    }
}

/// Commutator of two tensor elements through the split form
/// `[x_s ⊗ x^t, y_s ⊗ y^t] = [x_s, y_s] ⊗ x^t y^t + y_s x_s ⊗ [x^t, y^t]`,
/// expanded bilinearly and checked against the direct matrix commutator.
pub fn tensor_commutator(alg: &TensorAlgebra, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
    let n = alg.size();
    let ng = alg.n_gauge();
    for e in [x, y] {
        if e.n_gauge != ng || e.realized.nrows() != n {
            return Err(Error::DimensionMismatch("tensor element from another algebra".into()));
        }
    }
    let mut split = CMat::zeros(n, n);
    for mu in 0..4 {
        for a in 0..ng {
            let xa = x.coeff(mu, a);
            if xa == ZERO {
                continue;
            }
            for nu in 0..4 {
                for b in 0..ng {
                    let yb = y.coeff(nu, b);
                    if yb == ZERO {
                        continue;
                    }
                    let (sx, sy) = (alg.spin.sigma(mu), alg.spin.sigma(nu));
                    let (tx, ty) = (alg.gauge.generator(a), alg.gauge.generator(b));
                    let term = commutator(sx, sy).kronecker(&(tx * ty)) + (sy * sx).kronecker(&commutator(tx, ty));
                    split += term * (xa * yb);
                }
            }
        }
    }
    let direct = commutator(&x.realized, &y.realized);
    let residual = max_abs(&(&split - &direct));
    if residual > 1e-10 {
        return Err(Error::IdentityViolation {
            what: "split tensor commutator".into(),
            residual,
        });
    }
    Ok(alg.decompose(&split))
}
