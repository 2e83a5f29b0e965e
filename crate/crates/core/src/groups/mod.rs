//! Computable groups in additive notation.
//!
//! Every family has a canonical normal form and a fixed enumeration
//! `N -> G` starting at the identity, so every initial segment of the
//! enumeration order is finite:
//!
//! * `Z`: zigzag `0, 1, -1, 2, -2, ...`
//! * `Ck`: `0, 1, ..., k-1`
//! * `Z^k`, `A x B` with both factors infinite: Cantor pairing of the
//!   component indices
//! * `A x B` with a finite factor: blocks of the finite factor
//! * `Dinf`: `(0,0), (0,1), (1,0), (1,1), (-1,0), ...`
//! * `Fr`: reduced words by length, then lexicographically over `a, A, b, B, ...`

mod element;
pub mod enumeration;
mod parse;
mod subgroup;

use std::fmt;

pub use element::Element;
pub use parse::parse_element_list;
pub use subgroup::{SubgroupKind, SubgroupSpec};

use crate::cardinal::Cardinal;
use crate::error::{Error, Result};
use enumeration::{pair, unpair, zigzag, zigzag_index};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Group {
    Integers,
    /// `Z^k`, `k >= 2`.
    Lattice(usize),
    /// `Ck`, `k >= 1`; `C1` is the trivial group.
    Cyclic(u64),
    InfiniteDihedral,
    /// Free group on `rank` generators, `1 <= rank <= 13`.
    Free(usize),
    Product(Box<Group>, Box<Group>),
}

pub const MAX_FREE_RANK: usize = 13;

fn mismatch(g: &Group, x: &Element) -> Error {
    Error::Encoding(format!("{x} is not an element of {g}"))
}

impl Group {
    pub fn direct_product(left: Group, right: Group) -> Group {
        Group::Product(Box::new(left), Box::new(right))
    }

    pub fn trivial() -> Group {
        Group::Cyclic(1)
    }

    /// Parse a group spec such as `Z x C2` or `(Z^2) x Dinf`.
    pub fn parse(spec: &str) -> Result<Group> {
        parse::parse_group(spec)
    }

    pub fn order(&self) -> Cardinal {
        match self {
            Group::Cyclic(k) => Cardinal::Finite(*k),
            Group::Product(a, b) => a.order().product(b.order()),
            _ => Cardinal::CountablyInfinite,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.order().is_infinite()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == Cardinal::Finite(1)
    }

    pub fn factors(&self) -> Option<(&Group, &Group)> {
        match self {
            Group::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Integers | Group::Cyclic(_) => Element::Int(0),
            Group::Lattice(k) => Element::Vector(vec![0; *k]),
            Group::InfiniteDihedral => Element::Dihedral { k: 0, flip: false },
            Group::Free(_) => Element::Word(Vec::new()),
            Group::Product(a, b) => Element::pair(a.identity(), b.identity()),
        }
    }

    /// `a + b`.
    pub fn op(&self, a: &Element, b: &Element) -> Result<Element> {
        let overflow = || Error::Encoding(format!("{a} + {b} overflows in {self}"));
        match (self, a, b) {
            (Group::Integers, Element::Int(x), Element::Int(y)) => {
                x.checked_add(*y).map(Element::Int).ok_or_else(overflow)
            }
            (Group::Cyclic(k), Element::Int(x), Element::Int(y)) => {
                self.validate(a)?;
                self.validate(b)?;
                let k = *k as i128;
                Ok(Element::Int(((*x as i128 + *y as i128) % k) as i64))
            }
            (Group::Lattice(k), Element::Vector(x), Element::Vector(y))
                if x.len() == *k && y.len() == *k =>
            {
                x.iter()
                    .zip(y)
                    .map(|(p, q)| p.checked_add(*q).ok_or_else(overflow))
                    .collect::<Result<Vec<_>>>()
                    .map(Element::Vector)
            }
            (
                Group::InfiniteDihedral,
                Element::Dihedral { k: k1, flip: f1 },
                Element::Dihedral { k: k2, flip: f2 },
            ) => {
                // r^k1 s^f1 r^k2 s^f2 = r^(k1 -+ k2) s^(f1 + f2), using s r s = r^-1
                let k = if *f1 {
                    k1.checked_sub(*k2)
                } else {
                    k1.checked_add(*k2)
                };
                Ok(Element::Dihedral {
                    k: k.ok_or_else(overflow)?,
                    flip: f1 ^ f2,
                })
            }
            (Group::Free(_), Element::Word(x), Element::Word(y)) => {
                let mut w = x.clone();
                for &c in y {
                    if w.last() == Some(&(c ^ 1)) {
                        w.pop();
                    } else {
                        w.push(c);
                    }
                }
                Ok(Element::Word(w))
            }
            (Group::Product(g1, g2), Element::Pair(a1, a2), Element::Pair(b1, b2)) => {
                Ok(Element::pair(g1.op(a1, b1)?, g2.op(a2, b2)?))
            }
            _ => {
                let bad = if self.validate(a).is_err() { a } else { b };
                Err(mismatch(self, bad))
            }
        }
    }

    /// `-a`.
    pub fn inv(&self, a: &Element) -> Result<Element> {
        match (self, a) {
            (Group::Integers, Element::Int(x)) => x
                .checked_neg()
                .map(Element::Int)
                .ok_or_else(|| Error::Encoding(format!("-({x}) overflows"))),
            (Group::Cyclic(k), Element::Int(x)) => {
                self.validate(a)?;
                Ok(Element::Int(if *x == 0 { 0 } else { *k as i64 - x }))
            }
            (Group::Lattice(k), Element::Vector(x)) if x.len() == *k => {
                Ok(Element::Vector(x.iter().map(|v| -v).collect()))
            }
            (Group::InfiniteDihedral, Element::Dihedral { k, flip }) => Ok(if *flip {
                a.clone()
            } else {
                Element::Dihedral { k: -k, flip: false }
            }),
            (Group::Free(_), Element::Word(w)) => {
                Ok(Element::Word(w.iter().rev().map(|c| c ^ 1).collect()))
            }
            (Group::Product(g1, g2), Element::Pair(a1, a2)) => {
                Ok(Element::pair(g1.inv(a1)?, g2.inv(a2)?))
            }
            _ => Err(mismatch(self, a)),
        }
    }

    /// `x - y`, that is `x + (-y)`.
    pub fn diff(&self, x: &Element, y: &Element) -> Result<Element> {
        self.op(x, &self.inv(y)?)
    }

    pub fn is_identity(&self, a: &Element) -> bool {
        *a == self.identity()
    }

    /// True iff `a` has order exactly 2.
    pub fn is_involution(&self, a: &Element) -> Result<bool> {
        Ok(!self.is_identity(a) && self.is_identity(&self.op(a, a)?))
    }

    /// The element at position `i` of the enumeration order.
    pub fn enumerate(&self, i: u64) -> Result<Element> {
        if let Cardinal::Finite(order) = self.order() {
            if i >= order {
                return Err(Error::IndexOutOfRange { index: i, order });
            }
        }
        Ok(match self {
            Group::Integers => Element::Int(zigzag(i)),
            Group::Cyclic(_) => Element::Int(i as i64),
            Group::Lattice(k) => Element::Vector(lattice_point(*k, i)),
            Group::InfiniteDihedral => Element::Dihedral {
                k: zigzag(i / 2),
                flip: i % 2 == 1,
            },
            Group::Free(rank) => Element::Word(free_word(*rank, i)?),
            Group::Product(a, b) => {
                let (ia, ib) = match (a.order(), b.order()) {
                    (Cardinal::Finite(_), Cardinal::Finite(nb)) => (i / nb, i % nb),
                    (Cardinal::CountablyInfinite, Cardinal::Finite(nb)) => (i / nb, i % nb),
                    (Cardinal::Finite(na), Cardinal::CountablyInfinite) => (i % na, i / na),
                    (Cardinal::CountablyInfinite, Cardinal::CountablyInfinite) => unpair(i),
                };
                Element::pair(a.enumerate(ia)?, b.enumerate(ib)?)
            }
        })
    }

    /// Inverse of [`Group::enumerate`].
    pub fn index_of(&self, x: &Element) -> Result<u64> {
        self.validate(x)?;
        let overflow = || Error::Encoding(format!("{x} has no representable enumeration index"));
        match (self, x) {
            (Group::Integers, Element::Int(n)) => zigzag_index(*n),
            (Group::Cyclic(_), Element::Int(n)) => Ok(*n as u64),
            (Group::Lattice(_), Element::Vector(v)) => {
                let mut idx = zigzag_index(v[0])?;
                for &c in &v[1..] {
                    idx = pair(idx, zigzag_index(c)?)?;
                }
                Ok(idx)
            }
            (Group::InfiniteDihedral, Element::Dihedral { k, flip }) => zigzag_index(*k)?
                .checked_mul(2)
                .map(|i| i + u64::from(*flip))
                .ok_or_else(overflow),
            (Group::Free(rank), Element::Word(w)) => free_index(*rank, w).ok_or_else(overflow),
            (Group::Product(a, b), Element::Pair(x1, x2)) => {
                let (ia, ib) = (a.index_of(x1)?, b.index_of(x2)?);
                match (a.order(), b.order()) {
                    (Cardinal::CountablyInfinite, Cardinal::CountablyInfinite) => pair(ia, ib),
                    (Cardinal::Finite(na), Cardinal::CountablyInfinite) => ib
                        .checked_mul(na)
                        .and_then(|v| v.checked_add(ia))
                        .ok_or_else(overflow),
                    (_, Cardinal::Finite(nb)) => ia
                        .checked_mul(nb)
                        .and_then(|v| v.checked_add(ib))
                        .ok_or_else(overflow),
                }
            }
            _ => Err(mismatch(self, x)),
        }
    }

    /// All elements in enumeration order; infinite for infinite groups.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0u64..).map_while(move |i| self.enumerate(i).ok())
    }

    /// The first `n` elements (fewer if the group is smaller).
    pub fn window(&self, n: usize) -> Vec<Element> {
        self.elements().take(n).collect()
    }

    /// Checks that `x` is a normal-form element of this group.
    pub fn validate(&self, x: &Element) -> Result<()> {
        let ok = match (self, x) {
            (Group::Integers, Element::Int(_)) => true,
            (Group::Cyclic(k), Element::Int(n)) => *n >= 0 && (*n as u64) < *k,
            (Group::Lattice(k), Element::Vector(v)) => v.len() == *k,
            (Group::InfiniteDihedral, Element::Dihedral { .. }) => true,
            (Group::Free(rank), Element::Word(w)) => {
                w.iter().all(|&c| (c as usize) < 2 * rank) && w.windows(2).all(|p| p[0] != p[1] ^ 1)
            }
            (Group::Product(a, b), Element::Pair(x1, x2)) => {
                return a.validate(x1).and_then(|_| b.validate(x2));
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(mismatch(self, x))
        }
    }

    /// Parse a canonical encoding, e.g. `(3,1)` in `Z x C2` or `aB` in `F2`.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        parse::parse_element(self, s)
    }

    /// `(x, 0)` in a product group.
    pub fn embed_left(&self, x: &Element) -> Result<Element> {
        match self {
            Group::Product(_, b) => Ok(Element::pair(x.clone(), b.identity())),
            _ => Err(Error::ShapeMismatch(format!(
                "{self} is not a direct product"
            ))),
        }
    }

    /// `(0, y)` in a product group.
    pub fn embed_right(&self, y: &Element) -> Result<Element> {
        match self {
            Group::Product(a, _) => Ok(Element::pair(a.identity(), y.clone())),
            _ => Err(Error::ShapeMismatch(format!(
                "{self} is not a direct product"
            ))),
        }
    }
}

fn lattice_point(k: usize, mut i: u64) -> Vec<i64> {
    // Z^k = Z^(k-1) x Z, peeled from the last coordinate
    let mut v = vec![0; k];
    for slot in (1..k).rev() {
        let (rest, last) = unpair(i);
        v[slot] = zigzag(last);
        i = rest;
    }
    v[0] = zigzag(i);
    v
}

fn words_of_length(rank: usize, len: u32) -> Option<u64> {
    if len == 0 {
        return Some(1);
    }
    let r = 2 * rank as u64;
    (r - 1).checked_pow(len - 1)?.checked_mul(r)
}

fn free_word(rank: usize, mut i: u64) -> Result<Vec<u8>> {
    let mut len = 0u32;
    loop {
        match words_of_length(rank, len) {
            Some(c) if i >= c => {
                i -= c;
                len += 1;
            }
            _ => break,
        }
    }
    if len == 0 {
        return Ok(Vec::new());
    }
    let r = 2 * rank as u64;
    let mut digits = vec![0u64; len as usize];
    for d in digits.iter_mut().skip(1).rev() {
        *d = i % (r - 1);
        i /= r - 1;
    }
    digits[0] = i;
    let mut word: Vec<u8> = Vec::with_capacity(len as usize);
    for (pos, d) in digits.into_iter().enumerate() {
        let code = if pos == 0 {
            d as u8
        } else {
            let banned = word[pos - 1] ^ 1;
            let c = d as u8;
            if c >= banned {
                c + 1
            } else {
                c
            }
        };
        word.push(code);
    }
    Ok(word)
}

fn free_index(rank: usize, w: &[u8]) -> Option<u64> {
    let r = 2 * rank as u64;
    let mut offset = 0u64;
    for len in 0..w.len() as u32 {
        offset = offset.checked_add(words_of_length(rank, len)?)?;
    }
    let mut within = 0u64;
    for (pos, &c) in w.iter().enumerate() {
        let d = if pos == 0 {
            within = c as u64;
            continue;
        } else {
            let banned = w[pos - 1] ^ 1;
            if c > banned {
                c - 1
            } else {
                c
            }
        };
        within = within.checked_mul(r - 1)?.checked_add(d as u64)?;
    }
    offset.checked_add(within)
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Integers => f.write_str("Z"),
            Group::Lattice(k) => write!(f, "Z^{k}"),
            Group::Cyclic(k) => write!(f, "C{k}"),
            Group::InfiniteDihedral => f.write_str("Dinf"),
            Group::Free(r) => write!(f, "F{r}"),
            Group::Product(a, b) => {
                if matches!(**b, Group::Product(..)) {
                    write!(f, "{a} x ({b})")
                } else {
                    write!(f, "{a} x {b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_c2() -> Group {
        Group::direct_product(Group::Integers, Group::Cyclic(2))
    }

    fn p(a: i64, b: i64) -> Element {
        Element::pair(Element::Int(a), Element::Int(b))
    }

    fn dih(k: i64, flip: bool) -> Element {
        Element::Dihedral { k, flip }
    }

    #[test]
    fn op_examples() {
        let z = Group::Integers;
        assert_eq!(
            z.op(&Element::Int(2), &Element::Int(-5)).unwrap(),
            Element::Int(-3)
        );
        let d = Group::InfiniteDihedral;
        assert_eq!(d.op(&dih(1, true), &dih(2, false)).unwrap(), dih(-1, true));
        assert_eq!(z_c2().op(&p(3, 1), &p(4, 1)).unwrap(), p(7, 0));
    }

    #[test]
    fn op_rejects_foreign_elements() {
        let z = Group::Integers;
        assert!(matches!(
            z.op(&Element::Int(1), &dih(0, true)),
            Err(Error::Encoding(_))
        ));
        assert!(Group::Cyclic(3)
            .op(&Element::Int(5), &Element::Int(0))
            .is_err());
        assert!(z_c2().inv(&Element::Int(1)).is_err());
    }

    #[test]
    fn involution_examples() {
        let z = Group::Integers;
        assert!(!z.is_involution(&Element::Int(0)).unwrap());
        assert!(!z.is_involution(&Element::Int(5)).unwrap());
        assert!(z_c2().is_involution(&p(0, 1)).unwrap());
        let d = Group::InfiniteDihedral;
        for k in -20..20 {
            assert!(d.is_involution(&dih(k, true)).unwrap());
            assert!(!d.is_involution(&dih(k, false)).unwrap());
        }
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(Group::Integers.enumerate(4).unwrap(), Element::Int(-2));
        let zz = Group::direct_product(Group::Integers, Group::Integers);
        assert_eq!(zz.index_of(&zz.enumerate(7).unwrap()).unwrap(), 7);
        let f2 = Group::Free(2);
        assert_eq!(f2.enumerate(1).unwrap().encode(), "a");
        let prefix: Vec<String> = f2.window(10).iter().map(Element::encode).collect();
        assert_eq!(
            prefix,
            ["e", "a", "A", "b", "B", "aa", "ab", "aB", "AA", "Ab"]
        );
        let zc = z_c2();
        let got: Vec<Element> = zc.window(5);
        assert_eq!(got, vec![p(0, 0), p(0, 1), p(1, 0), p(1, 1), p(-1, 0)]);
    }

    #[test]
    fn enumeration_starts_at_identity() {
        for g in [
            Group::Integers,
            Group::Lattice(3),
            Group::Cyclic(5),
            Group::InfiniteDihedral,
            Group::Free(2),
            z_c2(),
            Group::direct_product(Group::Cyclic(3), Group::Free(1)),
        ] {
            assert_eq!(g.enumerate(0).unwrap(), g.identity(), "{g}");
        }
    }

    #[test]
    fn finite_enumeration_is_bounded() {
        let c = Group::direct_product(Group::Cyclic(2), Group::Cyclic(3));
        assert_eq!(c.window(100).len(), 6);
        assert_eq!(
            c.enumerate(6),
            Err(Error::IndexOutOfRange { index: 6, order: 6 })
        );
    }

    #[test]
    fn product_order() {
        assert_eq!(
            Group::direct_product(Group::Integers, Group::Cyclic(3)).order(),
            Cardinal::CountablyInfinite
        );
        assert_eq!(
            Group::direct_product(Group::Cyclic(2), Group::Cyclic(3)).order(),
            Cardinal::Finite(6)
        );
    }

    #[test]
    fn free_group_words_are_reduced() {
        let f = Group::Free(2);
        for x in f.window(500) {
            f.validate(&x).unwrap();
        }
        let a = f.parse_element("aB").unwrap();
        let b = f.parse_element("bA").unwrap();
        assert_eq!(f.op(&a, &b).unwrap(), f.identity());
        assert_eq!(f.inv(&a).unwrap(), b);
    }

    #[test]
    fn display_roundtrip() {
        for spec in [
            "Z",
            "Z^2",
            "C4",
            "Dinf",
            "F2",
            "Z x C2",
            "Z x C2 x Z",
            "Z x (C2 x Z)",
        ] {
            assert_eq!(Group::parse(spec).unwrap().to_string(), spec);
        }
    }
}
