use std::fmt;

use super::{Element, Group};
use crate::cardinal::Cardinal;
use crate::error::{Error, Result};

/// Built-in subgroup shapes. Products follow the product structure of the
/// parent group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SubgroupKind {
    Trivial,
    Whole,
    /// `nZ`, `nZ^k`, or the multiples of `n` in `Ck` (requires `n | k`).
    Multiples(u64),
    /// The rotation subgroup `{(k,0)}` of `Dinf`.
    Rotations,
    Product(Box<SubgroupKind>, Box<SubgroupKind>),
}

/// A subgroup of a concrete parent group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupSpec {
    parent: Group,
    kind: SubgroupKind,
}

fn fits(parent: &Group, kind: &SubgroupKind) -> bool {
    match (kind, parent) {
        (SubgroupKind::Trivial | SubgroupKind::Whole, _) => true,
        (SubgroupKind::Multiples(n), Group::Integers | Group::Lattice(_)) => *n >= 1,
        (SubgroupKind::Multiples(n), Group::Cyclic(k)) => *n >= 1 && k % n == 0,
        (SubgroupKind::Rotations, Group::InfiniteDihedral) => true,
        (SubgroupKind::Product(a, b), Group::Product(ga, gb)) => fits(ga, a) && fits(gb, b),
        _ => false,
    }
}

impl SubgroupSpec {
    pub fn new(parent: Group, kind: SubgroupKind) -> Result<SubgroupSpec> {
        let kind = match kind {
            SubgroupKind::Multiples(1) => SubgroupKind::Whole,
            k => k,
        };
        if !fits(&parent, &kind) {
            return Err(Error::ShapeMismatch(format!(
                "{kind:?} is not a subgroup of {parent}"
            )));
        }
        Ok(SubgroupSpec { parent, kind })
    }

    pub fn parse(parent: &Group, spec: &str) -> Result<SubgroupSpec> {
        let kind = super::parse::parse_subgroup(parent, spec)?;
        SubgroupSpec::new(parent.clone(), kind)
    }

    pub fn trivial(parent: Group) -> SubgroupSpec {
        SubgroupSpec {
            parent,
            kind: SubgroupKind::Trivial,
        }
    }

    pub fn whole(parent: Group) -> SubgroupSpec {
        SubgroupSpec {
            parent,
            kind: SubgroupKind::Whole,
        }
    }

    pub fn parent(&self) -> &Group {
        &self.parent
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn contains(&self, x: &Element) -> bool {
        contains(&self.parent, &self.kind, x)
    }

    pub fn order(&self) -> Cardinal {
        order(&self.parent, &self.kind)
    }

    pub fn index(&self) -> Cardinal {
        index(&self.parent, &self.kind)
    }

    pub fn is_whole(&self) -> bool {
        self.index() == Cardinal::Finite(1)
    }

    /// Members in parent enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.parent.elements().filter(|x| self.contains(x))
    }

    /// Canonical representative of the right coset `H + x`: the element `y`
    /// of least enumeration index with `y - x` in `H`. The scan stops at `x`
    /// itself at the latest.
    pub fn coset_key(&self, x: &Element) -> Result<Element> {
        let last = self.parent.index_of(x)?;
        for i in 0..=last {
            let y = self.parent.enumerate(i)?;
            if self.contains(&self.parent.diff(&y, x)?) {
                return Ok(y);
            }
        }
        unreachable!("x - x = 0 lies in every subgroup")
    }

    /// True when `G \ H` contains no non-involution, decided from the shape
    /// alone. `None` when the shape gives no certificate.
    pub fn complement_is_involutory(&self) -> Option<bool> {
        match (&self.kind, &self.parent) {
            (SubgroupKind::Whole, _) => Some(true),
            (SubgroupKind::Rotations, Group::InfiniteDihedral) => Some(true),
            (_, Group::Integers | Group::Lattice(_) | Group::Free(_)) => Some(false),
            (_, Group::InfiniteDihedral) => Some(false),
            _ => None,
        }
    }
}

fn contains(g: &Group, kind: &SubgroupKind, x: &Element) -> bool {
    match (kind, g, x) {
        (SubgroupKind::Whole, _, _) => g.validate(x).is_ok(),
        (SubgroupKind::Trivial, _, _) => g.is_identity(x),
        (SubgroupKind::Multiples(n), Group::Integers | Group::Cyclic(_), Element::Int(v)) => {
            v.rem_euclid(*n as i64) == 0
        }
        (SubgroupKind::Multiples(n), Group::Lattice(_), Element::Vector(v)) => {
            v.iter().all(|c| c.rem_euclid(*n as i64) == 0)
        }
        (SubgroupKind::Rotations, Group::InfiniteDihedral, Element::Dihedral { flip, .. }) => !flip,
        (SubgroupKind::Product(a, b), Group::Product(ga, gb), Element::Pair(x1, x2)) => {
            contains(ga, a, x1) && contains(gb, b, x2)
        }
        _ => false,
    }
}

fn order(g: &Group, kind: &SubgroupKind) -> Cardinal {
    match (kind, g) {
        (SubgroupKind::Trivial, _) => Cardinal::Finite(1),
        (SubgroupKind::Whole, _) => g.order(),
        (SubgroupKind::Multiples(n), Group::Cyclic(k)) => Cardinal::Finite(k / n),
        (SubgroupKind::Product(a, b), Group::Product(ga, gb)) => order(ga, a).product(order(gb, b)),
        _ => Cardinal::CountablyInfinite,
    }
}

fn index(g: &Group, kind: &SubgroupKind) -> Cardinal {
    match (kind, g) {
        (SubgroupKind::Trivial, _) => g.order(),
        (SubgroupKind::Whole, _) => Cardinal::Finite(1),
        (SubgroupKind::Multiples(n), Group::Lattice(k)) => {
            Cardinal::Finite(n.checked_pow(*k as u32).unwrap_or(u64::MAX))
        }
        (SubgroupKind::Multiples(n), _) => Cardinal::Finite(*n),
        (SubgroupKind::Rotations, _) => Cardinal::Finite(2),
        (SubgroupKind::Product(a, b), Group::Product(ga, gb)) => index(ga, a).product(index(gb, b)),
        _ => Cardinal::Finite(1),
    }
}

fn write_kind(f: &mut fmt::Formatter<'_>, g: &Group, kind: &SubgroupKind) -> fmt::Result {
    match (kind, g) {
        (SubgroupKind::Trivial, _) => f.write_str("{0}"),
        (SubgroupKind::Whole, Group::Product(..)) => write!(f, "({g})"),
        (SubgroupKind::Whole, _) => write!(f, "{g}"),
        (SubgroupKind::Multiples(n), _) => write!(f, "{n}{g}"),
        (SubgroupKind::Rotations, _) => f.write_str("rot"),
        (SubgroupKind::Product(a, b), Group::Product(ga, gb)) => {
            write_kind(f, ga, a)?;
            f.write_str(" x ")?;
            if matches!(**b, SubgroupKind::Product(..)) {
                f.write_str("(")?;
                write_kind(f, gb, b)?;
                f.write_str(")")
            } else {
                write_kind(f, gb, b)
            }
        }
        _ => write!(f, "{kind:?}"),
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_kind(f, &self.parent, &self.kind)
    }
}
