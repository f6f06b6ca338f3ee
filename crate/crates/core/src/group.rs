//! Finite groups acting on the division machinery.
//!
//! Elements are ids `0..k` with `0` the identity. Two kinds are
//! constructible: cyclic `Z_k` and elementary abelian `(Z_p)^r`. Elementary
//! abelian elements encode digit tuples little-endian in base `p`, so for
//! the Klein four-group `(Z_2)^2` the id of `(d0, d1)` is `d0 + 2*d1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupKind {
    Cyclic { k: usize },
    ElementaryAbelian { p: usize, r: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    kind: GroupKind,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

pub(crate) fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Group {
    pub fn cyclic(k: usize) -> Result<Group> {
        if k < 2 {
            return Err(Error::InvalidGroup(format!("cyclic group needs order >= 2, got {k}")));
        }
        let table = (0..k * k).map(|i| (i / k + i % k) % k).collect();
        let inverse = (0..k).map(|g| (k - g) % k).collect();
        Ok(Group { kind: GroupKind::Cyclic { k }, order: k, table, inverse })
    }

    pub fn elementary_abelian(p: usize, r: u32) -> Result<Group> {
        if !is_prime(p) {
            return Err(Error::InvalidGroup(format!("elementary abelian base {p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidGroup("elementary abelian rank must be >= 1".into()));
        }
        let order = p.checked_pow(r).ok_or_else(|| Error::InvalidGroup("group order overflows".into()))?;
        let add = |a: usize, b: usize| -> usize {
            let (mut a, mut b, mut out, mut base) = (a, b, 0usize, 1usize);
            for _ in 0..r {
                out += ((a % p + b % p) % p) * base;
                a /= p;
                b /= p;
                base *= p;
            }
            out
        };
        let table = (0..order * order).map(|i| add(i / order, i % order)).collect();
        let neg = |a: usize| -> usize {
            let (mut a, mut out, mut base) = (a, 0usize, 1usize);
            for _ in 0..r {
                out += ((p - a % p) % p) * base;
                a /= p;
                base *= p;
            }
            out
        };
        let inverse = (0..order).map(neg).collect();
        Ok(Group { kind: GroupKind::ElementaryAbelian { p, r }, order, table, inverse })
    }

    pub fn from_kind(kind: GroupKind) -> Result<Group> {
        match kind {
            GroupKind::Cyclic { k } => Group::cyclic(k),
            GroupKind::ElementaryAbelian { p, r } => Group::elementary_abelian(p, r),
        }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    fn check(&self, id: usize) -> Result<()> {
        if id < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { id, order: self.order })
        }
    }

    pub fn multiply(&self, g: usize, h: usize) -> Result<usize> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.table[g * self.order + h])
    }

    /// Unchecked multiplication for hot paths; ids must be in range.
    pub fn mul(&self, g: usize, h: usize) -> usize {
        debug_assert!(g < self.order && h < self.order);
        self.table[g * self.order + h]
    }

    pub fn inverse(&self, g: usize) -> Result<usize> {
        self.check(g)?;
        Ok(self.inverse[g])
    }

    pub fn inv(&self, g: usize) -> usize {
        debug_assert!(g < self.order);
        self.inverse[g]
    }

    /// Exhaustively checks the group axioms on the stored table. Intended
    /// for tests and `selftest`; cost is O(k^3).
    pub fn verify_axioms(&self) -> Result<()> {
        let k = self.order;
        let e = self.identity();
        for g in 0..k {
            if self.mul(e, g) != g || self.mul(g, e) != g {
                return Err(Error::InvalidGroup(format!("identity fails at {g}")));
            }
            if self.mul(self.inv(g), g) != e || self.mul(g, self.inv(g)) != e {
                return Err(Error::InvalidGroup(format!("inverse fails at {g}")));
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        // Left translation must permute the elements (Latin square rows),
        // which is what freeness of the diagonal action reduces to.
        for g in 0..k {
            let mut seen = vec![false; k];
            for h in 0..k {
                let gh = self.mul(g, h);
                if seen[gh] {
                    return Err(Error::InvalidGroup(format!("left translation by {g} is not injective")));
                }
                seen[gh] = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_rejects_small_orders() {
        assert!(Group::cyclic(0).is_err());
        assert!(Group::cyclic(1).is_err());
        assert!(Group::cyclic(2).is_ok());
    }

    #[test]
    fn elementary_abelian_requires_prime_base() {
        assert!(Group::elementary_abelian(4, 1).is_err());
        assert!(Group::elementary_abelian(1, 2).is_err());
        assert!(Group::elementary_abelian(2, 0).is_err());
        assert!(Group::elementary_abelian(3, 2).is_ok());
    }

    #[test]
    fn cyclic_multiplication_wraps() {
        let g = Group::cyclic(5).unwrap();
        assert_eq!(g.multiply(3, 4).unwrap(), 2);
        assert_eq!(g.multiply(0, 4).unwrap(), 4);
        assert!(g.multiply(5, 0).is_err());
    }

    #[test]
    fn klein_four_componentwise_addition() {
        // (1,0)*(1,1) = (0,1): ids 1 * 3 = 2.
        let g = Group::elementary_abelian(2, 2).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.multiply(1, 3).unwrap(), 2);
        assert_eq!(g.multiply(3, 3).unwrap(), 0);
    }

    #[test]
    fn axioms_hold_for_all_constructible_kinds() {
        for k in 2..=8 {
            Group::cyclic(k).unwrap().verify_axioms().unwrap();
        }
        for (p, r) in [(2, 2), (2, 3), (3, 2), (5, 1)] {
            Group::elementary_abelian(p, r).unwrap().verify_axioms().unwrap();
        }
    }

    #[test]
    fn inverses_match_table() {
        let g = Group::cyclic(6).unwrap();
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }
}
