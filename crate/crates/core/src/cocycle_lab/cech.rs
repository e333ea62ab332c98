//! Čech cochains over an abstract cover with values in ℤ_m.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::liealg::C64;
use crate::random::SeededRng;

/// Index set `0..n` with the declared nonempty intersections (a simplicial complex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    n: usize,
    declared: BTreeSet<Vec<usize>>,
}

impl Cover {
    /// Declared intersections are all nonempty subsets of the given simplices.
    pub fn new(n: usize, simplices: &[Vec<usize>]) -> Result<Self> {
        let mut declared = BTreeSet::new();
        for i in 0..n {
            declared.insert(vec![i]);
        }
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.iter().any(|&i| i >= n) {
                return Err(Error::InvalidDimension(format!("simplex {s:?} outside 0..{n}")));
            }
            for mask in 1u32..(1 << s.len()) {
                declared.insert(
                    s.iter()
                        .enumerate()
                        .filter(|(k, _)| mask >> k & 1 == 1)
                        .map(|(_, &i)| i)
                        .collect(),
                );
            }
        }
        Ok(Self { n, declared })
    }

    /// Every intersection nonempty.
    pub fn complete(n: usize) -> Self {
        Self::new(n, &[(0..n).collect()]).expect("indices in range")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn is_declared(&self, tuple: &[usize]) -> bool {
        self.declared.contains(tuple)
    }

    /// Declared increasing tuples of length `p + 1`.
    pub fn tuples(&self, p: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.declared.iter().filter(move |t| t.len() == p + 1)
    }
}

/// A p-cochain: values in ℤ_m on increasing (p+1)-tuples of declared intersections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CechCochainTable {
    cover: Arc<Cover>,
    p: usize,
    modulus: u64,
    values: BTreeMap<Vec<usize>, u64>,
}

impl CechCochainTable {
    /// Missing declared tuples default to 0; undeclared tuples are rejected.
    pub fn new(cover: &Arc<Cover>, p: usize, modulus: u64, values: BTreeMap<Vec<usize>, u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidDimension("modulus 0".into()));
        }
        for k in values.keys() {
            if k.len() != p + 1 || !cover.is_declared(k) {
                return Err(Error::UndeclaredIntersection(k.clone()));
            }
        }
        let mut full: BTreeMap<Vec<usize>, u64> = cover.tuples(p).map(|t| (t.clone(), 0)).collect();
        for (k, v) in values {
            full.insert(k, v % modulus);
        }
        Ok(Self {
            cover: cover.clone(),
            p,
            modulus,
            values: full,
        })
    }

    pub fn random(cover: &Arc<Cover>, p: usize, modulus: u64, rng: &mut SeededRng) -> Self {
        let values = cover
            .tuples(p)
            .map(|t| (t.clone(), rng.random_range(0..modulus)))
            .collect();
        Self {
            cover: cover.clone(),
            p,
            modulus,
            values,
        }
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &BTreeMap<Vec<usize>, u64> {
        &self.values
    }

    /// Value on an increasing tuple.
    pub fn get(&self, tuple: &[usize]) -> Result<u64> {
        self.values
            .get(tuple)
            .copied()
            .ok_or_else(|| Error::UndeclaredIntersection(tuple.to_vec()))
    }

    /// Value on an arbitrary ordering, extended antisymmetrically (0 on repeated indices).
    pub fn get_ordered(&self, tuple: &[usize]) -> Result<u64> {
        let mut t = tuple.to_vec();
        let mut parity = 0;
        for i in 0..t.len() {
            for j in 0..t.len() - 1 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    parity ^= 1;
                }
            }
        }
        if t.windows(2).any(|w| w[0] == w[1]) {
            return Ok(0);
        }
        let v = self.get(&t)?;
        Ok(if parity == 0 {
            v
        } else {
            (self.modulus - v) % self.modulus
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|&v| v == 0)
    }
}

/// `(δα)_{i₀…i_{p+1}} = Σ_k (−1)^k α_{i₀…î_k…i_{p+1}}`.
pub fn cech_coboundary(t: &CechCochainTable) -> Result<CechCochainTable> {
    let m = t.modulus;
    let mut values = BTreeMap::new();
    for tuple in t.cover.tuples(t.p + 1) {
        let mut acc = 0u64;
        for k in 0..tuple.len() {
            let mut face = tuple.clone();
            face.remove(k);
            let v = t.get(&face)?;
            acc = if k % 2 == 0 { (acc + v) % m } else { (acc + m - v) % m };
        }
        values.insert(tuple.clone(), acc);
    }
    Ok(CechCochainTable {
        cover: t.cover.clone(),
        p: t.p + 1,
        modulus: m,
        values,
    })
}

/// Exponent `k` with `z = e^{2πik/m}`, if `z` is such a root of unity within `tol`.
pub fn log_encode(z: C64, m: u64, tol: f64) -> Result<u64> {
    let k = (z.arg() * m as f64 / (2.0 * PI)).round().rem_euclid(m as f64) as u64;
    let back = C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
    if (back - z).norm() > tol {
        return Err(Error::IdentityViolation {
            what: format!("{z} is not an {m}-th root of unity"),
            residual: (back - z).norm(),
        });
    }
    Ok(k)
}

pub fn root_of_unity(k: u64, m: u64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded;

    #[test]
    fn constant_zero_cochain_has_zero_coboundary() {
        let cover = Arc::new(Cover::complete(3));
        let vals = (0..3).map(|i| (vec![i], 5)).collect();
        let t = CechCochainTable::new(&cover, 0, 7, vals).unwrap();
        assert!(cech_coboundary(&t).unwrap().is_zero());
    }

    #[test]
    fn delta_squared_vanishes_exhaustively() {
        let cover = Arc::new(Cover::new(4, &[vec![0, 1, 2], vec![1, 2, 3], vec![0, 3]]).unwrap());
        let mut rng = seeded(5);
        for p in 0..2 {
            for _ in 0..20 {
                let t = CechCochainTable::random(&cover, p, 6, &mut rng);
                assert!(cech_coboundary(&cech_coboundary(&t).unwrap()).unwrap().is_zero());
            }
        }
        // every 0-cochain over ℤ₂ on the complete 4-cover
        let full = Arc::new(Cover::complete(4));
        for bits in 0..16u64 {
            let vals = (0..4).map(|i| (vec![i], bits >> i & 1)).collect();
            let t = CechCochainTable::new(&full, 0, 2, vals).unwrap();
            assert!(cech_coboundary(&cech_coboundary(&t).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn undeclared_tuple_rejected() {
        let cover = Arc::new(Cover::new(3, &[vec![0, 1]]).unwrap());
        let vals = [(vec![1, 2], 1)].into_iter().collect();
        assert!(matches!(
            CechCochainTable::new(&cover, 1, 3, vals),
            Err(Error::UndeclaredIntersection(_))
        ));
    }

    #[test]
    fn multiplicative_cocycle_via_logs() {
        // transition functions c_ij = ζ^{k_j − k_i} satisfy c_ij c_jk c_ki = 1
        let m = 5;
        let k = [0u64, 3, 1];
        let cover = Arc::new(Cover::complete(3));
        let mut vals = BTreeMap::new();
        for i in 0..3 {
            for j in i + 1..3 {
                let z = root_of_unity((k[j] + m - k[i]) % m, m);
                vals.insert(vec![i, j], log_encode(z, m, 1e-12).unwrap());
            }
        }
        let t = CechCochainTable::new(&cover, 1, m, vals).unwrap();
        let prod = root_of_unity(t.get_ordered(&[0, 1]).unwrap(), m)
            * root_of_unity(t.get_ordered(&[1, 2]).unwrap(), m)
            * root_of_unity(t.get_ordered(&[2, 0]).unwrap(), m);
        assert!((prod - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(cech_coboundary(&t).unwrap().is_zero());
        assert!(log_encode(C64::new(0.5, 0.5), m, 1e-9).is_err());
    }
}
