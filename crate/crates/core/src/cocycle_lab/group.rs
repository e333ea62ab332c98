//! Group cohomology of finite groups with exact residue arithmetic.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::finite_group::{FiniteGroup, FiniteModule};
use crate::random::SeededRng;

/// A normalized p-cochain `G^p → A`, stored in mixed radix (first argument most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCochainTable {
    group: Arc<FiniteGroup>,
    module: Arc<FiniteModule>,
    p: usize,
    values: Vec<usize>,
}

impl GroupCochainTable {
    pub fn zero(group: &Arc<FiniteGroup>, module: &Arc<FiniteModule>, p: usize) -> Self {
        let len = group.order().pow(p as u32);
        Self {
            group: group.clone(),
            module: module.clone(),
            p,
            values: vec![module.zero(); len],
        }
    }

    /// Values given in mixed-radix order; normalization is checked.
    pub fn from_values(
        group: &Arc<FiniteGroup>,
        module: &Arc<FiniteModule>,
        p: usize,
        values: Vec<usize>,
    ) -> Result<Self> {
        let t = Self {
            group: group.clone(),
            module: module.clone(),
            p,
            values,
        };
        if t.values.len() != group.order().pow(p as u32) || t.values.iter().any(|&v| v >= module.size()) {
            return Err(Error::DimensionMismatch(format!("cochain table of degree {p}")));
        }
        if !t.is_normalized() {
            return Err(Error::InvalidDimension("cochain is not normalized".into()));
        }
        Ok(t)
    }

    /// Uniformly random normalized cochain.
    pub fn random(group: &Arc<FiniteGroup>, module: &Arc<FiniteModule>, p: usize, rng: &mut SeededRng) -> Self {
        let mut t = Self::zero(group, module, p);
        for k in 0..t.values.len() {
            if !t.args(k).contains(&group.identity()) {
                t.values[k] = rng.random_range(0..module.size());
            }
        }
        t
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn module(&self) -> &Arc<FiniteModule> {
        &self.module
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &g| acc * self.group.order() + g)
    }

    fn args(&self, mut k: usize) -> Vec<usize> {
        let n = self.group.order();
        let mut out = vec![0; self.p];
        for slot in out.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        out
    }

    pub fn get(&self, args: &[usize]) -> usize {
        self.values[self.index(args)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == self.module.zero())
    }

    pub fn is_normalized(&self) -> bool {
        let e = self.group.identity();
        (0..self.values.len()).all(|k| !self.args(k).contains(&e) || self.values[k] == self.module.zero())
    }
}

/// `(δf)(g₁,…,g_{p+1}) = g₁·f(g₂,…) + Σ_{i=1}^{p} (−1)^i f(…, g_i g_{i+1}, …) + (−1)^{p+1} f(g₁,…,g_p)`.
pub fn group_coboundary(t: &GroupCochainTable) -> GroupCochainTable {
    let (g, m, p) = (&t.group, &t.module, t.p);
    let mut out = GroupCochainTable::zero(g, m, p + 1);
    let mut args = vec![0; p + 1];
    for k in 0..out.values.len() {
        let mut rest = k;
        for slot in args.iter_mut().rev() {
            *slot = rest % g.order();
            rest /= g.order();
        }
        let mut acc = m.act(args[0], t.get(&args[1..]));
        let mut merged = Vec::with_capacity(p);
        for i in 1..=p {
            merged.clear();
            merged.extend_from_slice(&args[..i - 1]);
            merged.push(g.mul(args[i - 1], args[i]));
            merged.extend_from_slice(&args[i + 1..]);
            let v = t.get(&merged);
            acc = if i % 2 == 0 { m.add(acc, v) } else { m.sub(acc, v) };
        }
        let last = t.get(&args[..p]);
        acc = if (p + 1) % 2 == 0 {
            m.add(acc, last)
        } else {
            m.sub(acc, last)
        };
        out.values[k] = acc;
    }
    out
}

/// Every normalized p-cochain, refusing more than `limit` of them.
pub fn all_normalized_cochains(
    group: &Arc<FiniteGroup>,
    module: &Arc<FiniteModule>,
    p: usize,
    limit: usize,
) -> Result<Vec<GroupCochainTable>> {
    let zero = GroupCochainTable::zero(group, module, p);
    let free: Vec<usize> = (0..zero.values.len())
        .filter(|&k| !zero.args(k).contains(&group.identity()))
        .collect();
    let a = module.size();
    let total = (a as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if total > limit as u128 {
        return Err(Error::SizeGuard(format!(
            "{total} cochains of degree {p} exceed {limit}"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    for mut code in 0..total as usize {
        let mut t = zero.clone();
        for &k in &free {
            t.values[k] = code % a;
            code /= a;
        }
        out.push(t);
    }
    Ok(out)
}

pub const H2_GROUP_LIMIT: usize = 8;
pub const H2_MODULE_LIMIT: usize = 8;

/// Orders of Z², B² and H² from an exhaustive count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct H2Count {
    pub cocycles: u64,
    pub coboundaries: u64,
    pub order: u64,
}

/// `|H²(G, A)|` by counting normalized 2-cocycles (backtracking with the
/// cocycle condition checked as soon as a triple is fully assigned) and
/// dividing by `|B²| = |A|^{|G|−1} / |Z¹|`.
pub fn h2_brute_force(group: &FiniteGroup, module: &FiniteModule) -> Result<u64> {
    Ok(h2_count(group, module)?.order)
}

pub fn h2_count(group: &FiniteGroup, module: &FiniteModule) -> Result<H2Count> {
    let n = group.order();
    let a = module.size();
    if n > H2_GROUP_LIMIT || a > H2_MODULE_LIMIT {
        return Err(Error::SizeGuard(format!(
            "|G| = {n}, |A| = {a} (limits {H2_GROUP_LIMIT}, {H2_MODULE_LIMIT})"
        )));
    }
    let e = group.identity();
    let others: Vec<usize> = group.elements().filter(|&g| g != e).collect();
    let z1 = count_z1(group, module, &others);
    let total_1 = (a as u64).pow(others.len() as u32);
    let coboundaries = total_1 / z1;
    let cocycles = count_z2(group, module, &others);
    if !cocycles.is_multiple_of(coboundaries) {
        return Err(Error::IdentityViolation {
            what: format!("|B²| = {coboundaries} does not divide |Z²| = {cocycles}"),
            residual: (cocycles % coboundaries) as f64,
        });
    }
    Ok(H2Count {
        cocycles,
        coboundaries,
        order: cocycles / coboundaries,
    })
}

fn count_z1(group: &FiniteGroup, module: &FiniteModule, others: &[usize]) -> u64 {
    // f(g h) = g·f(h) + f(g), with f(e) = 0
    let n = group.order();
    let e = group.identity();
    let mut slot = vec![usize::MAX; n];
    for (k, &g) in others.iter().enumerate() {
        slot[g] = k;
    }
    let rank = |g: usize| if g == e { None } else { Some(slot[g]) };
    // checks[k]: pairs whose latest variable is k
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); others.len()];
    for g in group.elements() {
        for h in group.elements() {
            let last = [rank(g), rank(h), rank(group.mul(g, h))].into_iter().flatten().max();
            if let Some(k) = last {
                checks[k].push((g, h));
            }
        }
    }
    let mut f = vec![module.zero(); n];
    fn rec(
        k: usize,
        others: &[usize],
        f: &mut [usize],
        checks: &[Vec<(usize, usize)>],
        g: &FiniteGroup,
        m: &FiniteModule,
    ) -> u64 {
        if k == others.len() {
            return 1;
        }
        let mut count = 0;
        for v in 0..m.size() {
            f[others[k]] = v;
            let ok = checks[k]
                .iter()
                .all(|&(a, b)| f[g.mul(a, b)] == m.add(m.act(a, f[b]), f[a]));
            if ok {
                count += rec(k + 1, others, f, checks, g, m);
            }
        }
        f[others[k]] = m.zero();
        count
    }
    rec(0, others, &mut f, &checks, group, module)
}

fn count_z2(group: &FiniteGroup, module: &FiniteModule, others: &[usize]) -> u64 {
    // g₁·f(g₂,g₃) − f(g₁g₂,g₃) + f(g₁,g₂g₃) − f(g₁,g₂) = 0
    let n = group.order();
    let e = group.identity();
    let mut slot = vec![usize::MAX; n];
    for (k, &g) in others.iter().enumerate() {
        slot[g] = k;
    }
    let q = others.len();
    let var = |a: usize, b: usize| -> Option<usize> {
        if a == e || b == e {
            None
        } else {
            Some(slot[a] * q + slot[b])
        }
    };
    let mut checks: Vec<Vec<[usize; 3]>> = vec![Vec::new(); q * q];
    for a in group.elements() {
        for b in group.elements() {
            for c in group.elements() {
                let involved = [var(b, c), var(group.mul(a, b), c), var(a, group.mul(b, c)), var(a, b)];
                if let Some(k) = involved.into_iter().flatten().max() {
                    checks[k].push([a, b, c]);
                }
            }
        }
    }
    let pairs: Vec<(usize, usize)> = others
        .iter()
        .flat_map(|&a| others.iter().map(move |&b| (a, b)))
        .collect();
    let mut f = vec![module.zero(); n * n];
    struct Ctx<'a> {
        g: &'a FiniteGroup,
        m: &'a FiniteModule,
        pairs: Vec<(usize, usize)>,
        checks: Vec<Vec<[usize; 3]>>,
    }
    fn rec(k: usize, f: &mut [usize], cx: &Ctx) -> u64 {
        if k == cx.pairs.len() {
            return 1;
        }
        let n = cx.g.order();
        let (a, b) = cx.pairs[k];
        let mut count = 0;
        for v in 0..cx.m.size() {
            f[a * n + b] = v;
            let ok = cx.checks[k].iter().all(|&[x, y, z]| {
                let (g, m) = (cx.g, cx.m);
                let lhs = m.add(m.act(x, f[y * n + z]), f[x * n + g.mul(y, z)]);
                let rhs = m.add(f[g.mul(x, y) * n + z], f[x * n + y]);
                lhs == rhs
            });
            if ok {
                count += rec(k + 1, f, cx);
            }
        }
        f[a * n + b] = cx.m.zero();
        count
    }
    let cx = Ctx {
        g: group,
        m: module,
        pairs,
        checks,
    };
    rec(0, &mut f, &cx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;

    fn arcs(g: FiniteGroup, m: impl Fn(&FiniteGroup) -> FiniteModule) -> (Arc<FiniteGroup>, Arc<FiniteModule>) {
        let md = m(&g);
        (Arc::new(g), Arc::new(md))
    }

    #[test]
    fn degree_one_formula() {
        let (g, m) = arcs(FiniteGroup::cyclic(3), |g| FiniteModule::cyclic_trivial(5, g));
        let f = GroupCochainTable::random(&g, &m, 1, &mut seeded(1));
        let df = group_coboundary(&f);
        for a in g.elements() {
            for b in g.elements() {
                let want = m.add(m.sub(m.act(a, f.get(&[b])), f.get(&[g.mul(a, b)])), f.get(&[a]));
                assert_eq!(df.get(&[a, b]), want);
            }
        }
        assert!(group_coboundary(&GroupCochainTable::zero(&g, &m, 1)).is_zero());
    }

    #[test]
    fn delta_squared_vanishes_over_s3() {
        let s3 = FiniteGroup::symmetric3();
        let sign = |g: usize| if [1, 2, 3].contains(&g) { -1 } else { 1 };
        let (g, m) = arcs(s3, |g| FiniteModule::cyclic_with_action(4, g, sign).unwrap());
        let mut rng = seeded(3);
        for p in 0..3 {
            for _ in 0..5 {
                let f = GroupCochainTable::random(&g, &m, p, &mut rng);
                let df = group_coboundary(&f);
                assert!(df.is_normalized());
                assert!(group_coboundary(&df).is_zero(), "p = {p}");
            }
        }
    }

    #[test]
    fn h2_small_cases() {
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(h2_brute_force(&z2, &FiniteModule::cyclic_trivial(2, &z2)).unwrap(), 2);
        assert_eq!(h2_brute_force(&z2, &FiniteModule::cyclic_trivial(3, &z2)).unwrap(), 1);
        let one = FiniteGroup::trivial();
        assert_eq!(h2_brute_force(&one, &FiniteModule::cyclic_trivial(5, &one)).unwrap(), 1);
        // H²(ℤ_n, ℤ_m) = ℤ_gcd(n,m) for the trivial action
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(h2_brute_force(&z4, &FiniteModule::cyclic_trivial(6, &z4)).unwrap(), 2);
        // H²(ℤ₂×ℤ₂, ℤ₂) has order 8
        let v4 = z2.direct_product(&z2);
        assert_eq!(h2_brute_force(&v4, &FiniteModule::cyclic_trivial(2, &v4)).unwrap(), 8);
        // twisted action of ℤ₂ on ℤ₃ by inversion: H² = 0
        let tw = FiniteModule::cyclic_with_action(3, &z2, |g| if g == 1 { -1 } else { 1 }).unwrap();
        assert_eq!(h2_brute_force(&z2, &tw).unwrap(), 1);
        // twisted action of ℤ₂ on ℤ₄ by inversion: H² = ℤ₄^{ℤ₂}/N = ℤ₂
        let tw4 = FiniteModule::cyclic_with_action(4, &z2, |g| if g == 1 { -1 } else { 1 }).unwrap();
        assert_eq!(h2_brute_force(&z2, &tw4).unwrap(), 2);
    }

    #[test]
    fn h2_size_guard() {
        let z9 = FiniteGroup::cyclic(9);
        assert!(matches!(
            h2_brute_force(&z9, &FiniteModule::cyclic_trivial(2, &z9)),
            Err(Error::SizeGuard(_))
        ));
    }
}
