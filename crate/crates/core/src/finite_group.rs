//! Finite groups by multiplication table, and finite abelian modules over them.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Build from a row-major multiplication table, validating the group axioms.
    pub fn from_table(name: &str, n: usize, table: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if n == 0 || table.len() != n * n || labels.len() != n || table.iter().any(|&x| x >= n) {
            return Err(Error::InvalidDimension(format!("malformed table for {name}")));
        }
        let m = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Error::InvalidDimension(format!("{name} has no identity")))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or_else(|| Error::InvalidDimension(format!("{name}: {} has no inverse", labels[a])))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::InvalidDimension(format!("{name} is not associative")));
                    }
                }
            }
        }
        Ok(Self {
            name: name.to_string(),
            n,
            table,
            identity,
            inverse,
            labels,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::from_table(&format!("Z{n}"), n, table, labels).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        let mut g = Self::cyclic(1);
        g.name = "1".into();
        g.labels = vec!["e".into()];
        g
    }

    /// S₃ as permutations of {0,1,2}, composed right to left.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let labels = ["e", "(01)", "(02)", "(12)", "(012)", "(021)"];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
        let mut table = Vec::with_capacity(36);
        for p in &perms {
            for q in &perms {
                table.push(idx([p[q[0]], p[q[1]], p[q[2]]]));
            }
        }
        Self::from_table("S3", 6, table, labels.iter().map(|s| s.to_string()).collect()).expect("S3 table is a group")
    }

    /// Elements of A₃ inside [`FiniteGroup::symmetric3`].
    pub fn alternating3_in_s3() -> Vec<usize> {
        vec![0, 4, 5]
    }

    /// Subgroup on the listed elements, with the induced table; returns the
    /// subgroup and the inclusion map.
    pub fn subgroup(&self, elems: &[usize], name: &str) -> Result<(Self, Vec<usize>)> {
        let pos = |x: usize| elems.iter().position(|&e| e == x);
        let k = elems.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in elems {
            for &b in elems {
                table
                    .push(pos(self.mul(a, b)).ok_or_else(|| {
                        Error::InvalidDimension(format!("{name} is not closed under multiplication"))
                    })?);
            }
        }
        let labels = elems.iter().map(|&e| self.labels[e].clone()).collect();
        Ok((Self::from_table(name, k, table, labels)?, elems.to_vec()))
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        let mut table = Vec::with_capacity(n * m * n * m);
        for x in 0..n * m {
            for y in 0..n * m {
                table.push(self.mul(x / m, y / m) * m + other.mul(x % m, y % m));
            }
        }
        let labels = (0..n * m)
            .map(|x| format!("({},{})", self.labels[x / m], other.labels[x % m]))
            .collect();
        Self::from_table(&format!("{}x{}", self.name, other.name), n * m, table, labels)
            .expect("product of groups is a group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// A finite abelian group `A` with a left action of `G` by automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModule {
    name: String,
    size: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    // action[g * size + a] = g·a
    action: Vec<usize>,
}

impl FiniteModule {
    /// `ℤ_m` with `g·a = χ(g) a mod m`, where `χ(g)` is an integer multiplier.
    pub fn cyclic_with_action(m: usize, group: &FiniteGroup, chi: impl Fn(usize) -> i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidDimension("module of order 0".into()));
        }
        let add = (0..m * m).map(|k| (k / m + k % m) % m).collect();
        let neg = (0..m).map(|a| (m - a) % m).collect();
        let mut action = Vec::with_capacity(group.order() * m);
        for g in group.elements() {
            let k = chi(g).rem_euclid(m as i64) as usize;
            for a in 0..m {
                action.push(k * a % m);
            }
        }
        Self::from_tables(&format!("Z{m}"), m, add, neg, 0, action, group)
    }

    pub fn cyclic_trivial(m: usize, group: &FiniteGroup) -> Self {
        Self::cyclic_with_action(m, group, |_| 1).expect("trivial action")
    }

    /// Validate that the tables form an abelian group and the action is a
    /// group action by automorphisms.
    pub fn from_tables(
        name: &str,
        size: usize,
        add: Vec<usize>,
        neg: Vec<usize>,
        zero: usize,
        action: Vec<usize>,
        group: &FiniteGroup,
    ) -> Result<Self> {
        let md = Self {
            name: name.into(),
            size,
            add,
            neg,
            zero,
            action,
        };
        for a in 0..size {
            if md.add(a, md.zero) != a || md.add(a, md.neg(a)) != md.zero {
                return Err(Error::InvalidDimension(format!("{name}: broken zero or negation")));
            }
            for b in 0..size {
                if md.add(a, b) != md.add(b, a) {
                    return Err(Error::InvalidDimension(format!("{name} is not abelian")));
                }
            }
        }
        for g in group.elements() {
            for a in 0..size {
                for b in 0..size {
                    if md.act(g, md.add(a, b)) != md.add(md.act(g, a), md.act(g, b)) {
                        return Err(Error::NotAction(format!(
                            "{name}: g={} is not additive",
                            group.label(g)
                        )));
                    }
                }
                for h in group.elements() {
                    if md.act(group.mul(g, h), a) != md.act(g, md.act(h, a)) {
                        return Err(Error::NotAction(format!(
                            "{name}: not compatible with {}",
                            group.name()
                        )));
                    }
                }
            }
        }
        if (0..size).any(|a| md.act(group.identity(), a) != a) {
            return Err(Error::NotAction(format!("{name}: identity acts non-trivially")));
        }
        Ok(md)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn act(&self, g: usize, a: usize) -> usize {
        self.action[g * self.size + a]
    }
}
