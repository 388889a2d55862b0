//! Finite abelian groups as short products of cyclic factors, plus the
//! dedicated Z3 scalar used for vertex weights.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Most two factors are ever needed (Z2xZ2, Z3xZ3); Z6 is kept as a single
/// cyclic factor of order 6.
pub const MAX_FACTORS: usize = 2;

/// A finite abelian group given as a product of cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    orders: Vec<u8>,
}

impl GroupSpec {
    pub fn new(orders: &[u8]) -> Result<Self> {
        if orders.is_empty() || orders.len() > MAX_FACTORS {
            return Err(Error::UnsupportedGroup(format!(
                "need 1..={MAX_FACTORS} cyclic factors, got {}",
                orders.len()
            )));
        }
        if orders.iter().any(|&o| o < 2) {
            return Err(Error::UnsupportedGroup("cyclic factor of order < 2".into()));
        }
        Ok(GroupSpec { orders: orders.to_vec() })
    }

    pub fn z2() -> Self {
        GroupSpec { orders: vec![2] }
    }

    pub fn z3() -> Self {
        GroupSpec { orders: vec![3] }
    }

    pub fn z6() -> Self {
        GroupSpec { orders: vec![6] }
    }

    pub fn z2z2() -> Self {
        GroupSpec { orders: vec![2, 2] }
    }

    pub fn z3z3() -> Self {
        GroupSpec { orders: vec![3, 3] }
    }

    pub fn orders(&self) -> &[u8] {
        &self.orders
    }

    pub fn num_factors(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u32 {
        self.orders.iter().map(|&o| o as u32).product()
    }

    pub fn zero(&self) -> GroupElem {
        GroupElem([0, 0])
    }

    pub fn elem(&self, residues: &[u8]) -> Result<GroupElem> {
        if residues.len() != self.orders.len() {
            return Err(Error::GroupMismatch(format!(
                "element has {} residues, group has {} factors",
                residues.len(),
                self.orders.len()
            )));
        }
        let mut raw = [0u8; MAX_FACTORS];
        for (i, (&r, &o)) in residues.iter().zip(&self.orders).enumerate() {
            raw[i] = r % o;
        }
        Ok(GroupElem(raw))
    }

    pub fn add(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        let mut raw = [0u8; MAX_FACTORS];
        for (i, &o) in self.orders.iter().enumerate() {
            raw[i] = (a.0[i] + b.0[i]) % o;
        }
        GroupElem(raw)
    }

    pub fn neg(&self, a: GroupElem) -> GroupElem {
        let mut raw = [0u8; MAX_FACTORS];
        for (i, &o) in self.orders.iter().enumerate() {
            raw[i] = (o - a.0[i]) % o;
        }
        GroupElem(raw)
    }

    pub fn sub(&self, a: GroupElem, b: GroupElem) -> GroupElem {
        self.add(a, self.neg(b))
    }

    /// All group elements in lexicographic residue order, zero first.
    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = [0u8; MAX_FACTORS];
        loop {
            out.push(GroupElem(cur));
            let mut i = self.orders.len();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
                if i == 0 {
                    return out;
                }
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|o| format!("Z{o}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// A group element, stored as canonical residues of the (at most two)
/// cyclic factors. Unused slots stay zero so derived Ord gives a stable
/// lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElem(pub [u8; MAX_FACTORS]);

impl GroupElem {
    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == [0, 0]
    }

    pub fn residues(self, group: &GroupSpec) -> Vec<u8> {
        self.0[..group.num_factors()].to_vec()
    }
}

/// The integers mod 3 in canonical residues {0, 1, 2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Z3(pub u8);

impl Z3 {
    pub const ZERO: Z3 = Z3(0);

    pub fn new(v: i64) -> Z3 {
        Z3(v.rem_euclid(3) as u8)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn to_elem(self) -> GroupElem {
        GroupElem([self.0, 0])
    }
}

impl std::ops::Add for Z3 {
    type Output = Z3;
    fn add(self, rhs: Z3) -> Z3 {
        Z3((self.0 + rhs.0) % 3)
    }
}

impl std::ops::Sub for Z3 {
    type Output = Z3;
    fn sub(self, rhs: Z3) -> Z3 {
        Z3((3 + self.0 - rhs.0) % 3)
    }
}

impl std::ops::Neg for Z3 {
    type Output = Z3;
    fn neg(self) -> Z3 {
        Z3((3 - self.0) % 3)
    }
}

impl std::ops::AddAssign for Z3 {
    fn add_assign(&mut self, rhs: Z3) {
        *self = *self + rhs;
    }
}

impl std::ops::SubAssign for Z3 {
    fn sub_assign(&mut self, rhs: Z3) {
        *self = *self - rhs;
    }
}

impl fmt::Display for Z3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z3_arithmetic_wraps() {
        assert_eq!(Z3(2) + Z3(2), Z3(1));
        assert_eq!(Z3(0) - Z3(1), Z3(2));
        assert_eq!(-Z3(1), Z3(2));
        assert_eq!(Z3::new(-1), Z3(2));
        assert_eq!(Z3::new(5), Z3(2));
    }

    #[test]
    fn product_group_componentwise() {
        let g = GroupSpec::z2z2();
        let a = g.elem(&[1, 0]).unwrap();
        let b = g.elem(&[1, 1]).unwrap();
        assert_eq!(g.add(a, b), g.elem(&[0, 1]).unwrap());
        assert_eq!(g.neg(a), a);
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn z3z3_negation() {
        let g = GroupSpec::z3z3();
        let a = g.elem(&[1, 2]).unwrap();
        assert_eq!(g.neg(a), g.elem(&[2, 1]).unwrap());
        assert!(g.add(a, g.neg(a)).is_zero());
    }

    #[test]
    fn element_enumeration_is_complete_and_sorted() {
        let g = GroupSpec::z3z3();
        let elems = g.elements();
        assert_eq!(elems.len(), 9);
        assert!(elems[0].is_zero());
        let mut sorted = elems.clone();
        sorted.sort();
        assert_eq!(elems, sorted);
    }

    #[test]
    fn too_many_factors_rejected() {
        assert!(GroupSpec::new(&[2, 2, 2]).is_err());
        assert!(GroupSpec::new(&[]).is_err());
        assert!(GroupSpec::new(&[1]).is_err());
    }
}
