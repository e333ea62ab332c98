//! Pointwise exterior algebra: a differential form at one node, with jet
//! coefficients so that `d` is exact.
//!
//! Components are indexed by increasing index sets, stored as bitmasks and
//! enumerated in lexicographic order of the sorted index tuples.

use std::sync::OnceLock;

use crate::jet::Jet;
use crate::liealg::{CMat, C64};

pub const MAX_DIM: usize = 5;

struct Tables {
    // [dim][k] -> masks in lex order
    subsets: Vec<Vec<Vec<u32>>>,
    // [dim][mask] -> position within its degree
    position: Vec<Vec<usize>>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut subsets = Vec::new();
        let mut position = Vec::new();
        for d in 0..=MAX_DIM {
            let mut by_k = vec![Vec::new(); d + 1];
            let mut tuples: Vec<Vec<usize>> = (0u32..(1 << d))
                .map(|m| (0..d).filter(|i| m >> i & 1 == 1).collect())
                .collect();
            tuples.sort();
            let mut pos = vec![0; 1 << d];
            for t in tuples {
                let m = t.iter().fold(0u32, |acc, i| acc | 1 << i);
                pos[m as usize] = by_k[t.len()].len();
                by_k[t.len()].push(m);
            }
            subsets.push(by_k);
            position.push(pos);
        }
        Tables { subsets, position }
    })
}

/// Index sets of size `k` in `0..dim`, lexicographic.
pub fn subsets(dim: usize, k: usize) -> &'static [u32] {
    &tables().subsets[dim][k]
}

pub fn subset_position(dim: usize, mask: u32) -> usize {
    tables().position[dim][mask as usize]
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        subsets(n, k).len()
    }
}

/// Sign of `dx_I ∧ dx_J` relative to `dx_{I∪J}` (zero overlap assumed).
#[inline]
pub fn wedge_sign(i: u32, j: u32) -> f64 {
    let mut inversions = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (i >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A matrix-valued k-form at one node of a `dim`-dimensional chart.
#[derive(Debug, Clone, PartialEq)]
pub struct FormJet {
    dim: usize,
    degree: usize,
    comps: Vec<Jet>,
}

impl FormJet {
    pub fn zero(dim: usize, degree: usize, size: usize, order: u8) -> Self {
        let n = binomial(dim, degree);
        Self {
            dim,
            degree,
            comps: vec![Jet::zeros(size, dim, order); n],
        }
    }

    pub fn from_zero_form(j: Jet) -> Self {
        Self {
            dim: j.dim(),
            degree: 0,
            comps: vec![j],
        }
    }

    /// Components in lexicographic index-set order.
    pub fn from_components(dim: usize, degree: usize, comps: Vec<Jet>) -> Self {
        assert_eq!(comps.len(), binomial(dim, degree), "component count");
        Self { dim, degree, comps }
    }

    /// The 1-form `Σ_i a_i dx^i`.
    pub fn one_form(comps: Vec<Jet>) -> Self {
        let dim = comps.len();
        Self { dim, degree: 1, comps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.comps[0].size()
    }

    pub fn order(&self) -> u8 {
        self.comps.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn components(&self) -> &[Jet] {
        &self.comps
    }

    pub fn component(&self, mask: u32) -> &Jet {
        &self.comps[subset_position(self.dim, mask)]
    }

    /// Component along `dx^{i}` of a 1-form.
    pub fn coord(&self, i: usize) -> &Jet {
        self.component(1 << i)
    }

    /// The single coefficient of a top-degree form.
    pub fn top(&self) -> &Jet {
        debug_assert_eq!(self.degree, self.dim);
        &self.comps[0]
    }

    pub fn truncate(self, order: u8) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.into_iter().map(|j| j.truncate(order)).collect(),
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(&Jet, &Jet) -> Jet) -> Self {
        assert_eq!((self.dim, self.degree), (o.dim, o.degree), "form shapes");
        Self {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Jet) -> Jet) -> Self {
        Self {
            dim: self.dim,
            degree: self.degree,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, Jet::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, Jet::sub)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|j| j.scale(s))
    }

    pub fn trace(&self) -> Self {
        self.map(Jet::trace)
    }

    pub fn adjoint(&self) -> Self {
        self.map(Jet::adjoint)
    }

    pub fn lmul_const(&self, m: &CMat) -> Self {
        self.map(|j| j.lmul_const(m))
    }

    /// Exterior derivative; the jet order drops by one.
    pub fn d(&self) -> Self {
        let k = self.degree + 1;
        assert!(k <= self.dim, "degree overflow in d");
        assert!(self.order() >= 1, "d of an order-0 form");
        let size = self.size();
        let order = self.order() - 1;
        let comps = subsets(self.dim, k)
            .iter()
            .map(|&kmask| {
                let mut acc = Jet::zeros(size, self.dim, order);
                let mut rest = kmask;
                while rest != 0 {
                    let i = rest.trailing_zeros();
                    rest &= rest - 1;
                    let sign = if (kmask & ((1 << i) - 1)).count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    let part = self.component(kmask & !(1 << i)).partial(i as usize);
                    acc.add_scaled(&part, C64::new(sign, 0.0));
                }
                acc
            })
            .collect();
        Self {
            dim: self.dim,
            degree: k,
            comps,
        }
    }

    fn product(&self, o: &Self, op: impl Fn(&Jet, &Jet) -> Jet) -> Self {
        assert_eq!(self.dim, o.dim, "form dimensions");
        let k = self.degree + o.degree;
        assert!(k <= self.dim, "degree overflow in wedge");
        let size = self.size();
        let order = self.order().min(o.order());
        let mut out = Self::zero(self.dim, k, size, order);
        for (a, &im) in self.comps.iter().zip(subsets(self.dim, self.degree)) {
            for (b, &jm) in o.comps.iter().zip(subsets(self.dim, o.degree)) {
                if im & jm != 0 {
                    continue;
                }
                let pos = subset_position(self.dim, im | jm);
                out.comps[pos].add_scaled(&op(a, b), C64::new(wedge_sign(im, jm), 0.0));
            }
        }
        out
    }

    /// `α ∧ β` with the matrix product on values.
    pub fn wedge(&self, o: &Self) -> Self {
        self.product(o, Jet::mul)
    }

    /// Literal bracket `α∧β − β∧α`.
    pub fn commutator_wedge(&self, o: &Self) -> Self {
        self.wedge(o).sub(&o.wedge(self))
    }

    /// Graded bracket `α∧β − (−1)^{kl} β∧α`.
    pub fn bracket_wedge(&self, o: &Self) -> Self {
        let sign = if (self.degree * o.degree).is_multiple_of(2) { 1.0 } else { -1.0 };
        self.wedge(o).sub(&o.wedge(self).scale(C64::new(sign, 0.0)))
    }

    /// Largest entry over all components and derivatives.
    pub fn max_abs(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, j| m.max(j.max_abs()))
    }
}
