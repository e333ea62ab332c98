//! Crossed modules `(H, G, δ, h ↦ h^g)`: structural checks and the two axioms
//! `h^{δ(h')} = h'⁻¹hh'` and `δ(h^g) = g⁻¹δ(h)g`, on finite groups
//! (exhaustively) and matrix groups (on seeded samples).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finite_group::FiniteGroup;
use crate::liealg::{c, identity, CMat, SpinBasis, I};
use crate::random::{random_element, SeededRng};

/// Group operations needed by the checks.
pub trait Group: Send + Sync {
    type Elem: Clone + Send + Sync;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Zero exactly for equal elements of a finite group.
    fn distance(&self, a: &Self::Elem, b: &Self::Elem) -> f64;
    fn describe(&self, a: &Self::Elem) -> String;
    /// Largest `distance` still counted as equal.
    fn tolerance(&self) -> f64;
}

impl Group for FiniteGroup {
    type Elem = usize;

    fn mul(&self, a: &usize, b: &usize) -> usize {
        FiniteGroup::mul(self, *a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        FiniteGroup::inv(self, *a)
    }

    fn distance(&self, a: &usize, b: &usize) -> f64 {
        if a == b {
            0.0
        } else {
            1.0
        }
    }

    fn describe(&self, a: &usize) -> String {
        self.label(*a).to_string()
    }

    fn tolerance(&self) -> f64 {
        0.0
    }
}

/// Unitary matrices of a fixed size, compared in Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGroup {
    pub name: String,
    pub size: usize,
    pub tol: f64,
}

pub const MATRIX_TOL: f64 = 1e-10;

impl MatrixGroup {
    pub fn new(name: &str, size: usize) -> Self {
        Self {
            name: name.into(),
            size,
            tol: MATRIX_TOL,
        }
    }
}

impl Group for MatrixGroup {
    type Elem = CMat;

    fn mul(&self, a: &CMat, b: &CMat) -> CMat {
        a * b
    }

    fn inv(&self, a: &CMat) -> CMat {
        a.adjoint()
    }

    fn distance(&self, a: &CMat, b: &CMat) -> f64 {
        (a - b).norm()
    }

    fn describe(&self, a: &CMat) -> String {
        let entries: Vec<String> = a.iter().take(4).map(|z| format!("{:.3}{:+.3}i", z.re, z.im)).collect();
        format!("{}[{}…]", self.name, entries.join(", "))
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }
}

type DeltaFn<H, G> = Arc<dyn Fn(&<H as Group>::Elem) -> <G as Group>::Elem + Send + Sync>;
type ActFn<H, G> = Arc<dyn Fn(&<H as Group>::Elem, &<G as Group>::Elem) -> <H as Group>::Elem + Send + Sync>;

/// `δ: H → G` and the right action `(h, g) ↦ h^g`.
pub struct CrossedModule<H: Group, G: Group> {
    pub name: String,
    pub h: H,
    pub g: G,
    delta: DeltaFn<H, G>,
    act: ActFn<H, G>,
}

impl<H: Group, G: Group> fmt::Debug for CrossedModule<H, G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CrossedModule").field("name", &self.name).finish()
    }
}

impl<H: Group, G: Group> CrossedModule<H, G> {
    pub fn new(
        name: &str,
        h: H,
        g: G,
        delta: impl Fn(&H::Elem) -> G::Elem + Send + Sync + 'static,
        act: impl Fn(&H::Elem, &G::Elem) -> H::Elem + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            h,
            g,
            delta: Arc::new(delta),
            act: Arc::new(act),
        }
    }

    pub fn delta(&self, x: &H::Elem) -> G::Elem {
        (self.delta)(x)
    }

    pub fn act(&self, x: &H::Elem, g: &G::Elem) -> H::Elem {
        (self.act)(x, g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// 1: `h^{δ(h')} = h'⁻¹hh'`; 2: `δ(h^g) = g⁻¹δ(h)g`.
    pub axiom: u8,
    pub witness: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub name: String,
    pub pairs_axiom1: usize,
    pub pairs_axiom2: usize,
    pub max_deviation: f64,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// First violation of the given axiom, if any.
    pub fn witness(&self, axiom: u8) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

/// Sample sets; for finite groups pass every element.
#[derive(Debug, Clone)]
pub struct Samples<HE, GE> {
    pub h: Vec<HE>,
    pub g: Vec<GE>,
}

const TRIPLE_LIMIT: usize = 100_000;

/// Check δ is a homomorphism and the action is a right action by automorphisms
/// (errors with a witness), then both axioms on all sample pairs.
pub fn check_axioms<H: Group, G: Group>(
    cm: &CrossedModule<H, G>,
    s: &Samples<H::Elem, G::Elem>,
) -> Result<AxiomReport> {
    let (hg, gg) = (&cm.h, &cm.g);
    let (htol, gtol) = (hg.tolerance(), gg.tolerance());
    for a in &s.h {
        for b in &s.h {
            let d = gg.distance(&cm.delta(&hg.mul(a, b)), &gg.mul(&cm.delta(a), &cm.delta(b)));
            if d > gtol {
                return Err(Error::NotHomomorphism(format!(
                    "{}: δ({}·{}) ≠ δ({})δ({})",
                    cm.name,
                    hg.describe(a),
                    hg.describe(b),
                    hg.describe(a),
                    hg.describe(b)
                )));
            }
        }
    }
    let exhaustive = s.h.len() * s.h.len() * s.g.len() <= TRIPLE_LIMIT;
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    if exhaustive {
        for i in 0..s.h.len() {
            for j in 0..s.h.len() {
                for k in 0..s.g.len() {
                    triples.push((i, j, k));
                }
            }
        }
    } else {
        let n = s.h.len().min(s.g.len());
        triples.extend((0..n).map(|i| (i, (i + 1) % s.h.len(), i)));
    }
    for (i, j, k) in triples {
        let (a, b, g) = (&s.h[i], &s.h[j], &s.g[k]);
        let lhs = cm.act(&hg.mul(a, b), g);
        let rhs = hg.mul(&cm.act(a, g), &cm.act(b, g));
        if hg.distance(&lhs, &rhs) > htol {
            return Err(Error::NotAction(format!(
                "{}: ({}·{})^{} is not a product of images",
                cm.name,
                hg.describe(a),
                hg.describe(b),
                gg.describe(g)
            )));
        }
        let g2 = &s.g[(k + 1) % s.g.len()];
        let lhs = cm.act(a, &gg.mul(g, g2));
        let rhs = cm.act(&cm.act(a, g), g2);
        if hg.distance(&lhs, &rhs) > htol {
            return Err(Error::NotAction(format!(
                "{}: {}^({}·{}) ≠ ({}^{})^{}",
                cm.name,
                hg.describe(a),
                gg.describe(g),
                gg.describe(g2),
                hg.describe(a),
                gg.describe(g),
                gg.describe(g2)
            )));
        }
    }
    let mut violations = Vec::new();
    let mut max_dev = 0.0f64;
    for x in &s.h {
        for y in &s.h {
            let lhs = cm.act(x, &cm.delta(y));
            let rhs = hg.mul(&hg.mul(&hg.inv(y), x), y);
            let d = hg.distance(&lhs, &rhs);
            max_dev = max_dev.max(d);
            if d > htol {
                violations.push(Violation {
                    axiom: 1,
                    witness: format!("h = {}, h' = {}", hg.describe(x), hg.describe(y)),
                    deviation: d,
                });
            }
        }
    }
    for x in &s.h {
        for g in &s.g {
            let lhs = cm.delta(&cm.act(x, g));
            let rhs = gg.mul(&gg.mul(&gg.inv(g), &cm.delta(x)), g);
            let d = gg.distance(&lhs, &rhs);
            max_dev = max_dev.max(d);
            if d > gtol {
                violations.push(Violation {
                    axiom: 2,
                    witness: format!("h = {}, g = {}", hg.describe(x), gg.describe(g)),
                    deviation: d,
                });
            }
        }
    }
    Ok(AxiomReport {
        name: cm.name.clone(),
        pairs_axiom1: s.h.len() * s.h.len(),
        pairs_axiom2: s.h.len() * s.g.len(),
        max_deviation: max_dev,
        violations,
    })
}

/// A central extension `A → H → G` with projection and a set-theoretic section.
pub struct CentralExtension<H: Group, G: Group> {
    pub name: String,
    pub h: H,
    pub g: G,
    /// Elements of the kernel `A ⊂ H` to test for centrality.
    pub kernel: Vec<H::Elem>,
    pub projection: Arc<dyn Fn(&H::Elem) -> G::Elem + Send + Sync>,
    pub section: Arc<dyn Fn(&G::Elem) -> H::Elem + Send + Sync>,
}

/// `δ` = projection, `h^g = s(g)⁻¹ h s(g)`. Centrality of the kernel is checked
/// against the H samples; the action does not depend on the section because of it.
pub fn from_central_extension<H, G>(ext: CentralExtension<H, G>, h_samples: &[H::Elem]) -> Result<CrossedModule<H, G>>
where
    H: Group + Clone + 'static,
    G: Group + 'static,
{
    let hg = &ext.h;
    let tol = hg.tolerance();
    for a in &ext.kernel {
        let d = ext
            .g
            .distance(&(ext.projection)(a), &(ext.projection)(&hg.mul(a, &hg.inv(a))));
        if d > ext.g.tolerance() {
            return Err(Error::NonCentral(format!(
                "{}: {} is not in the kernel",
                ext.name,
                hg.describe(a)
            )));
        }
        for x in h_samples {
            if hg.distance(&hg.mul(a, x), &hg.mul(x, a)) > tol {
                return Err(Error::NonCentral(format!(
                    "{}: {} does not commute with {}",
                    ext.name,
                    hg.describe(a),
                    hg.describe(x)
                )));
            }
        }
    }
    let hgrp = ext.h.clone();
    let section = ext.section.clone();
    let projection = ext.projection.clone();
    Ok(CrossedModule::new(
        &ext.name,
        ext.h,
        ext.g,
        move |x| projection(x),
        move |x, g| {
            let s = section(g);
            hgrp.mul(&hgrp.mul(&hgrp.inv(&s), x), &s)
        },
    ))
}

/// Every element of a finite group.
pub fn all_elements(g: &FiniteGroup) -> Vec<usize> {
    g.elements().collect()
}

/// `H = G`, `δ = id`, conjugation.
pub fn identity_module(g: FiniteGroup) -> CrossedModule<FiniteGroup, FiniteGroup> {
    let a = g.clone();
    CrossedModule::new(
        &format!("id {}", g.name()),
        g.clone(),
        g,
        |x| *x,
        move |x, y| a.mul(a.mul(a.inv(*y), *x), *y),
    )
}

/// A normal subgroup `N ⊴ G` (given by its elements in G) with conjugation.
pub fn normal_inclusion(
    g: FiniteGroup,
    elems: &[usize],
    name: &str,
) -> Result<CrossedModule<FiniteGroup, FiniteGroup>> {
    let (n, incl) = g.subgroup(elems, name)?;
    let back = incl.clone();
    let gg = g.clone();
    let incl2 = incl.clone();
    Ok(CrossedModule::new(
        &format!("{name} in {}", g.name()),
        n,
        g,
        move |x| incl[*x],
        move |x, y| {
            let conj = gg.mul(gg.mul(gg.inv(*y), incl2[*x]), *y);
            back.iter().position(|&e| e == conj).unwrap_or(usize::MAX)
        },
    ))
}

/// Trivial action `h^g = h` with the given δ; valid only when δ lands in the centre
/// and H is abelian, so it doubles as a sabotage construction.
pub fn trivial_action(
    name: &str,
    h: FiniteGroup,
    g: FiniteGroup,
    delta: impl Fn(usize) -> usize + Send + Sync + 'static,
) -> CrossedModule<FiniteGroup, FiniteGroup> {
    CrossedModule::new(name, h, g, move |x| delta(*x), |x, _| *x)
}

/// `ℤ₂ → ℤ₄ → ℤ₂`.
pub fn z2_z4_z2() -> CentralExtension<FiniteGroup, FiniteGroup> {
    CentralExtension {
        name: "Z2 -> Z4 -> Z2".into(),
        h: FiniteGroup::cyclic(4),
        g: FiniteGroup::cyclic(2),
        kernel: vec![0, 2],
        projection: Arc::new(|x| x % 2),
        section: Arc::new(|g| *g),
    }
}

/// `A → A × G → G` for cyclic A and G.
pub fn trivial_extension(a: usize, g: usize) -> CentralExtension<FiniteGroup, FiniteGroup> {
    let ga = FiniteGroup::cyclic(a);
    let gg = FiniteGroup::cyclic(g);
    CentralExtension {
        name: format!("Z{a} -> Z{a} x Z{g} -> Z{g}"),
        h: ga.direct_product(&gg),
        g: gg,
        kernel: (0..a).map(|k| k * g).collect(),
        projection: Arc::new(move |x| x % g),
        section: Arc::new(|y| *y),
    }
}

/// `R_ij = ½ tr(σ_i U σ_j U†)`, the double cover SU(2) → SO(3).
pub fn su2_to_so3(u: &CMat) -> CMat {
    let s = SpinBasis::new();
    let ud = u.adjoint();
    CMat::from_fn(3, 3, |i, j| {
        let m = s.sigma(i + 1) * u * s.sigma(j + 1) * &ud;
        c(0.5 * m.trace().re)
    })
}

/// A preimage of a rotation under [`su2_to_so3`]: `U ∝ I + Σ R_ij σ_iσ_j`,
/// routed through a fixed quarter turn when that combination degenerates.
pub fn so3_section(r: &CMat) -> CMat {
    fn combination(r: &CMat) -> CMat {
        let s = SpinBasis::new();
        let mut m = identity(2);
        for i in 0..3 {
            for j in 0..3 {
                m += s.sigma(i + 1) * s.sigma(j + 1) * r[(i, j)];
            }
        }
        m
    }
    fn normalized(m: CMat) -> CMat {
        let n = m.norm();
        m * c(2f64.sqrt() / n)
    }
    let m = combination(r);
    if m.norm() > 0.5 {
        return normalized(m);
    }
    // rotation by about π: factor off a quarter turn whose axis is not orthogonal to it
    let s = SpinBasis::new();
    (1..4)
        .map(|k| {
            let v = (s.sigma(k) * (I * std::f64::consts::FRAC_PI_4)).exp();
            (combination(&(r * su2_to_so3(&v).transpose())), v)
        })
        .max_by(|a, b| a.0.norm().total_cmp(&b.0.norm()))
        .map(|(m, v)| normalized(m) * v)
        .expect("three axes")
}

/// `ℤ₂ → SU(2) → SO(3)`.
pub fn su2_so3() -> CentralExtension<MatrixGroup, MatrixGroup> {
    CentralExtension {
        name: "Z2 -> SU(2) -> SO(3)".into(),
        h: MatrixGroup::new("SU(2)", 2),
        g: MatrixGroup::new("SO(3)", 3),
        kernel: vec![identity(2), identity(2) * c(-1.0)],
        projection: Arc::new(su2_to_so3),
        section: Arc::new(so3_section),
    }
}

/// Seeded SU(2) samples `exp(X)`, X a random su(2) element of norm up to ~π.
pub fn su2_samples(rng: &mut SeededRng, n: usize) -> Vec<CMat> {
    let s = SpinBasis::new();
    let gens: Vec<CMat> = (1..4).map(|k| s.sigma(k) * I).collect();
    (0..n).map(|_| random_element(rng, &gens, 1.8).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;

    fn finite_samples(h: &FiniteGroup, g: &FiniteGroup) -> Samples<usize, usize> {
        Samples {
            h: all_elements(h),
            g: all_elements(g),
        }
    }

    #[test]
    fn identity_module_passes() {
        let cm = identity_module(FiniteGroup::symmetric3());
        let r = check_axioms(&cm, &finite_samples(&cm.h, &cm.g)).unwrap();
        assert!(r.passes());
        assert_eq!(r.pairs_axiom1, 36);
    }

    #[test]
    fn a3_in_s3_passes() {
        let cm = normal_inclusion(FiniteGroup::symmetric3(), &FiniteGroup::alternating3_in_s3(), "A3").unwrap();
        let r = check_axioms(&cm, &finite_samples(&cm.h, &cm.g)).unwrap();
        assert!(r.passes(), "{r:?}");
        assert_eq!(r.pairs_axiom2, 18);
    }

    #[test]
    fn z4_to_z2_trivial_action_passes() {
        let cm = trivial_action("Z4 -> Z2", FiniteGroup::cyclic(4), FiniteGroup::cyclic(2), |x| x % 2);
        assert!(check_axioms(&cm, &finite_samples(&cm.h, &cm.g)).unwrap().passes());
    }

    #[test]
    fn sabotage_names_witness() {
        let s3 = FiniteGroup::symmetric3();
        let cm = trivial_action("S3 trivial", s3.clone(), s3, |x| x);
        let r = check_axioms(&cm, &finite_samples(&cm.h, &cm.g)).unwrap();
        assert!(!r.passes());
        let w = r.witness(1).unwrap();
        assert!(w.witness.contains("h = (01)"), "{w:?}");
    }

    #[test]
    fn broken_delta_is_structural_error() {
        let cm = trivial_action("bad", FiniteGroup::cyclic(3), FiniteGroup::cyclic(2), |x| {
            usize::from(x == 1)
        });
        assert!(matches!(
            check_axioms(&cm, &finite_samples(&cm.h, &cm.g)),
            Err(Error::NotHomomorphism(_))
        ));
    }

    #[test]
    fn central_extensions_pass() {
        let ext = z2_z4_z2();
        let hs = all_elements(&ext.h);
        let cm = from_central_extension(ext, &hs).unwrap();
        assert!(check_axioms(&cm, &finite_samples(&cm.h, &cm.g)).unwrap().passes());
        let ext = trivial_extension(2, 3);
        let hs = all_elements(&ext.h);
        let cm = from_central_extension(ext, &hs).unwrap();
        assert!(check_axioms(&cm, &finite_samples(&cm.h, &cm.g)).unwrap().passes());
    }

    #[test]
    fn non_central_kernel_rejected() {
        let s3 = FiniteGroup::symmetric3();
        let ext = CentralExtension {
            name: "bogus".into(),
            h: s3.clone(),
            g: FiniteGroup::trivial(),
            kernel: vec![1],
            projection: Arc::new(|_| 0),
            section: Arc::new(|_| 0),
        };
        assert!(matches!(
            from_central_extension(ext, &all_elements(&s3)),
            Err(Error::NonCentral(_))
        ));
    }

    #[test]
    fn su2_so3_passes_on_samples() {
        let mut rng = seeded(31);
        let hs = su2_samples(&mut rng, 100);
        let gs: Vec<CMat> = su2_samples(&mut rng, 100).iter().map(su2_to_so3).collect();
        for r in &gs {
            assert!((r * r.adjoint() - identity(3)).norm() < 1e-12);
            assert!((su2_to_so3(&so3_section(r)) - r).norm() < 1e-12);
        }
        // rotation by π, where the direct formula degenerates
        let flip = su2_to_so3(&(SpinBasis::new().sigma(3) * I));
        assert!((su2_to_so3(&so3_section(&flip)) - &flip).norm() < 1e-12);
        let cm = from_central_extension(su2_so3(), &hs).unwrap();
        let r = check_axioms(&cm, &Samples { h: hs, g: gs }).unwrap();
        assert!(r.passes(), "{:?}", r.violations.first());
        assert!(r.max_deviation < 1e-10);
    }
}
