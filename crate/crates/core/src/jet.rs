//! Truncated Taylor jets (value, gradient, Hessian) in chart coordinates.
//!
//! Every field in the toolkit is evaluated pointwise as a jet, so exterior
//! derivatives never need a stencil when analytic data is available.

use crate::liealg::{c, max_abs, CMat, C64};

/// Highest derivative order carried by a jet.
pub const MAX_ORDER: u8 = 2;

/// Position of the (i, j), i ≤ j, entry in a packed symmetric table.
#[inline]
pub fn hidx(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

#[inline]
pub fn n_hess(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

/// Real scalar jet.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarJet {
    order: u8,
    dim: usize,
    pub val: f64,
    pub grad: Vec<f64>,
    pub hess: Vec<f64>,
}

impl ScalarJet {
    pub fn constant(v: f64, dim: usize, order: u8) -> Self {
        let order = order.min(MAX_ORDER);
        let grad = if order >= 1 { vec![0.0; dim] } else { Vec::new() };
        let hess = if order >= 2 { vec![0.0; n_hess(dim)] } else { Vec::new() };
        Self {
            order,
            dim,
            val: v,
            grad,
            hess,
        }
    }

    /// The coordinate function `x_i` evaluated at `v`.
    pub fn variable(v: f64, i: usize, dim: usize, order: u8) -> Self {
        let mut j = Self::constant(v, dim, order);
        if j.order >= 1 {
            j.grad[i] = 1.0;
        }
        j
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[hidx(self.dim, i, j)]
    }

    pub fn truncate(mut self, order: u8) -> Self {
        if order < self.order {
            self.order = order;
            if order < 2 {
                self.hess.clear();
            }
            if order < 1 {
                self.grad.clear();
            }
        }
        self
    }

    fn zip(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let order = self.order.min(o.order);
        let a = self.clone().truncate(order);
        let b = o.clone().truncate(order);
        Self {
            order,
            dim: self.dim,
            val: f(a.val, b.val),
            grad: a.grad.iter().zip(&b.grad).map(|(x, y)| f(*x, *y)).collect(),
            hess: a.hess.iter().zip(&b.hess).map(|(x, y)| f(*x, *y)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x + y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x - y)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            order: self.order,
            dim: self.dim,
            val: self.val * s,
            grad: self.grad.iter().map(|x| x * s).collect(),
            hess: self.hess.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add_const(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.val += s;
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let d = self.dim;
        let mut out = Self::constant(self.val * o.val, d, order);
        if order >= 1 {
            for i in 0..d {
                out.grad[i] = self.grad[i] * o.val + self.val * o.grad[i];
            }
        }
        if order >= 2 {
            for i in 0..d {
                for j in i..d {
                    let k = hidx(d, i, j);
                    out.hess[k] = self.hess[k] * o.val
                        + self.grad[i] * o.grad[j]
                        + self.grad[j] * o.grad[i]
                        + self.val * o.hess[k];
                }
            }
        }
        out
    }

    /// `F ∘ self` given `F(v), F'(v), F''(v)`.
    pub fn compose(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let d = self.dim;
        let mut out = Self::constant(f0, d, self.order);
        if self.order >= 1 {
            for i in 0..d {
                out.grad[i] = f1 * self.grad[i];
            }
        }
        if self.order >= 2 {
            for i in 0..d {
                for j in i..d {
                    let k = hidx(d, i, j);
                    out.hess[k] = f2 * self.grad[i] * self.grad[j] + f1 * self.hess[k];
                }
            }
        }
        out
    }

    pub fn sin(&self) -> Self {
        let (s, co) = self.val.sin_cos();
        self.compose(s, co, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, co) = self.val.sin_cos();
        self.compose(co, -s, -co)
    }

    pub fn exp(&self) -> Self {
        let e = self.val.exp();
        self.compose(e, e, e)
    }

    pub fn powi(&self, n: i32) -> Self {
        let v = self.val;
        let f1 = if n == 0 { 0.0 } else { n as f64 * v.powi(n - 1) };
        let f2 = if (0..2).contains(&n) {
            0.0
        } else {
            (n * (n - 1)) as f64 * v.powi(n - 2)
        };
        self.compose(v.powi(n), f1, f2)
    }

    /// Partial derivative along coordinate `i`, one order lower.
    pub fn partial(&self, i: usize) -> Self {
        assert!(self.order >= 1, "partial of an order-0 jet");
        let d = self.dim;
        let mut out = Self::constant(self.grad[i], d, self.order - 1);
        if out.order >= 1 {
            for j in 0..d {
                out.grad[j] = self.hess(i, j);
            }
        }
        out
    }
}

/// Complex-matrix-valued jet.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    order: u8,
    dim: usize,
    val: CMat,
    grad: Vec<CMat>,
    hess: Vec<CMat>,
}

impl Jet {
    pub fn constant(m: CMat, dim: usize, order: u8) -> Self {
        let order = order.min(MAX_ORDER);
        let (r, cl) = m.shape();
        let grad = if order >= 1 {
            vec![CMat::zeros(r, cl); dim]
        } else {
            Vec::new()
        };
        let hess = if order >= 2 {
            vec![CMat::zeros(r, cl); n_hess(dim)]
        } else {
            Vec::new()
        };
        Self {
            order,
            dim,
            val: m,
            grad,
            hess,
        }
    }

    pub fn zeros(n: usize, dim: usize, order: u8) -> Self {
        Self::constant(CMat::zeros(n, n), dim, order)
    }

    /// Assemble from explicit derivative data. `hess` is packed (i ≤ j).
    pub fn from_parts(val: CMat, grad: Vec<CMat>, hess: Vec<CMat>, dim: usize) -> Self {
        let order = if grad.is_empty() {
            0
        } else if hess.is_empty() {
            1
        } else {
            2
        };
        debug_assert!(order == 0 || grad.len() == dim);
        debug_assert!(order < 2 || hess.len() == n_hess(dim));
        Self {
            order,
            dim,
            val,
            grad,
            hess,
        }
    }

    /// `s · m` for a scalar jet `s` and a constant matrix `m`.
    pub fn from_scalar(s: &ScalarJet, m: &CMat) -> Self {
        Self {
            order: s.order,
            dim: s.dim,
            val: m * c(s.val),
            grad: s.grad.iter().map(|g| m * c(*g)).collect(),
            hess: s.hess.iter().map(|h| m * c(*h)).collect(),
        }
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.val.nrows()
    }

    pub fn val(&self) -> &CMat {
        &self.val
    }

    pub fn into_val(self) -> CMat {
        self.val
    }

    pub fn grad(&self, i: usize) -> &CMat {
        &self.grad[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> &CMat {
        &self.hess[hidx(self.dim, i, j)]
    }

    pub fn truncate(mut self, order: u8) -> Self {
        if order < self.order {
            self.order = order;
            if order < 2 {
                self.hess.clear();
            }
            if order < 1 {
                self.grad.clear();
            }
        }
        self
    }

    fn zip(&self, o: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Self {
        let order = self.order.min(o.order);
        let ng = if order >= 1 { self.dim } else { 0 };
        let nh = if order >= 2 { n_hess(self.dim) } else { 0 };
        Self {
            order,
            dim: self.dim,
            val: f(&self.val, &o.val),
            grad: (0..ng).map(|i| f(&self.grad[i], &o.grad[i])).collect(),
            hess: (0..nh).map(|i| f(&self.hess[i], &o.hess[i])).collect(),
        }
    }

    fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        Self {
            order: self.order,
            dim: self.dim,
            val: f(&self.val),
            grad: self.grad.iter().map(&f).collect(),
            hess: self.hess.iter().map(&f).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    /// In-place `self += s · o`, lowering the order if needed.
    pub fn add_scaled(&mut self, o: &Self, s: C64) {
        if o.order < self.order {
            let t = std::mem::replace(self, Jet::zeros(0, 0, 0));
            *self = t.truncate(o.order);
        }
        self.val += &o.val * s;
        for (a, b) in self.grad.iter_mut().zip(&o.grad) {
            *a += b * s;
        }
        for (a, b) in self.hess.iter_mut().zip(&o.hess) {
            *a += b * s;
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|m| m * s)
    }

    pub fn neg(&self) -> Self {
        self.map(|m| -m)
    }

    pub fn adjoint(&self) -> Self {
        self.map(|m| m.adjoint())
    }

    /// Left multiplication by a constant matrix.
    pub fn lmul_const(&self, m: &CMat) -> Self {
        self.map(|x| m * x)
    }

    pub fn rmul_const(&self, m: &CMat) -> Self {
        self.map(|x| x * m)
    }

    /// Multiply by a real scalar jet.
    pub fn scale_jet(&self, s: &ScalarJet) -> Self {
        let order = self.order.min(s.order);
        let d = self.dim;
        let mut out = Self::constant(&self.val * c(s.val), d, order);
        if order >= 1 {
            for i in 0..d {
                out.grad[i] = &self.grad[i] * c(s.val) + &self.val * c(s.grad[i]);
            }
        }
        if order >= 2 {
            for i in 0..d {
                for j in i..d {
                    let k = hidx(d, i, j);
                    out.hess[k] = &self.hess[k] * c(s.val)
                        + &self.grad[i] * c(s.grad[j])
                        + &self.grad[j] * c(s.grad[i])
                        + &self.val * c(s.hess[k]);
                }
            }
        }
        out
    }

    /// Leibniz product.
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let d = self.dim;
        let val = &self.val * &o.val;
        let grad = if order >= 1 {
            (0..d)
                .map(|i| &self.grad[i] * &o.val + &self.val * &o.grad[i])
                .collect()
        } else {
            Vec::new()
        };
        let hess = if order >= 2 {
            let mut h = Vec::with_capacity(n_hess(d));
            for i in 0..d {
                for j in i..d {
                    let k = hidx(d, i, j);
                    let mut t = &self.hess[k] * &o.val + &self.val * &o.hess[k];
                    t += &self.grad[i] * &o.grad[j];
                    t += &self.grad[j] * &o.grad[i];
                    h.push(t);
                }
            }
            h
        } else {
            Vec::new()
        };
        Self {
            order,
            dim: d,
            val,
            grad,
            hess,
        }
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Trace, as a 1×1 jet.
    pub fn trace(&self) -> Self {
        self.map(|m| CMat::from_element(1, 1, m.trace()))
    }

    /// Partial derivative along coordinate `i`, one order lower.
    pub fn partial(&self, i: usize) -> Self {
        assert!(self.order >= 1, "partial of an order-0 jet");
        let d = self.dim;
        let grad = if self.order >= 2 {
            (0..d).map(|j| self.hess(i, j).clone()).collect()
        } else {
            Vec::new()
        };
        Self {
            order: self.order - 1,
            dim: d,
            val: self.grad[i].clone(),
            grad,
            hess: Vec::new(),
        }
    }

    /// Largest entry over value and all derivatives.
    pub fn max_abs(&self) -> f64 {
        std::iter::once(&self.val)
            .chain(&self.grad)
            .chain(&self.hess)
            .fold(0.0, |m, x| m.max(max_abs(x)))
    }

    /// Matrix exponential in the jet ring (Taylor series plus scaling and squaring).
    pub fn exp(&self) -> Self {
        let n = self.size();
        let norm = max_abs(&self.val) * n as f64;
        let mut s = 0;
        while norm / f64::from(1u32 << s.min(30)) > 0.25 && s < 40 {
            s += 1;
        }
        let y = self.scale(c(1.0 / 2f64.powi(s)));
        let ident = Jet::constant(CMat::identity(n, n), self.dim, self.order);
        let mut sum = ident.clone();
        let mut term = ident;
        for k in 1..=18 {
            term = term.mul(&y).scale(c(1.0 / k as f64));
            sum = sum.add(&term);
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }
}

/// `exp(φ X)` for a constant anti-Hermitian `X` and a scalar jet `φ`, via the
/// spectral decomposition of `X` (exact derivatives, no series).
#[derive(Debug, Clone)]
pub struct OneParameter {
    x: CMat,
    x2: CMat,
    vecs: CMat,
    phases: Vec<f64>,
}

impl OneParameter {
    pub fn new(x: CMat) -> Self {
        // X = iH with H Hermitian.
        let h = &x * C64::new(0.0, -1.0);
        let eig = nalgebra::SymmetricEigen::new(h);
        let x2 = &x * &x;
        Self {
            x,
            x2,
            vecs: eig.eigenvectors,
            phases: eig.eigenvalues.iter().copied().collect(),
        }
    }

    pub fn generator(&self) -> &CMat {
        &self.x
    }

    pub fn eval(&self, phi: &ScalarJet) -> Jet {
        let n = self.x.nrows();
        let mut diag = CMat::zeros(n, n);
        for (k, l) in self.phases.iter().enumerate() {
            diag[(k, k)] = C64::from_polar(1.0, l * phi.val);
        }
        let e = &self.vecs * diag * self.vecs.adjoint();
        let d = phi.dim();
        let grad = if phi.order() >= 1 {
            let xe = &self.x * &e;
            (0..d).map(|i| &xe * c(phi.grad[i])).collect()
        } else {
            Vec::new()
        };
        let hess = if phi.order() >= 2 {
            let xe = &self.x * &e;
            let x2e = &self.x2 * &e;
            let mut h = Vec::with_capacity(n_hess(d));
            for i in 0..d {
                for j in i..d {
                    h.push(&xe * c(phi.hess(i, j)) + &x2e * c(phi.grad[i] * phi.grad[j]));
                }
            }
            h
        } else {
            Vec::new()
        };
        Jet::from_parts(e, grad, hess, d)
    }
}

/// Fourth-order central-difference jet of a value closure at `x` with step `h`.
pub fn finite_difference_jet(f: &dyn Fn(&[f64]) -> CMat, x: &[f64], h: f64, order: u8) -> Jet {
    let d = x.len();
    let val = f(x);
    let order = order.min(MAX_ORDER);
    let shifted = |pairs: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, s) in pairs {
            y[i] += s;
        }
        f(&y)
    };
    let grad = if order >= 1 {
        (0..d)
            .map(|i| {
                let t = (shifted(&[(i, -2.0 * h)]) - shifted(&[(i, 2.0 * h)])) * c(1.0)
                    + (shifted(&[(i, h)]) - shifted(&[(i, -h)])) * c(8.0);
                t * c(1.0 / (12.0 * h))
            })
            .collect()
    } else {
        Vec::new()
    };
    let hess = if order >= 2 {
        let mut out = Vec::with_capacity(n_hess(d));
        for i in 0..d {
            for j in i..d {
                let m = if i == j {
                    let t = (shifted(&[(i, 2.0 * h)]) + shifted(&[(i, -2.0 * h)])) * c(-1.0)
                        + (shifted(&[(i, h)]) + shifted(&[(i, -h)])) * c(16.0)
                        - &val * c(30.0);
                    t * c(1.0 / (12.0 * h * h))
                } else {
                    // fourth-order mixed stencil from the 1-D weights applied twice
                    let w = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
                    let mut acc = CMat::zeros(val.nrows(), val.ncols());
                    for (si, wi) in w {
                        for (sj, wj) in w {
                            acc += shifted(&[(i, si * h), (j, sj * h)]) * c(wi * wj);
                        }
                    }
                    acc * c(1.0 / (144.0 * h * h))
                };
                out.push(m);
            }
        }
        out
    } else {
        Vec::new()
    };
    Jet::from_parts(val, grad, hess, d)
}
