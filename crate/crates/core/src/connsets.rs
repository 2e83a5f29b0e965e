//! Connection sets `S = -S` in `G \ {0}`, their split into involutions and
//! non-involutions, and the cardinality classification that decides whether
//! a regular 1-factorization can be built.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{parse_element_list, Element, Group, SubgroupSpec};

/// Number of leading group elements on which a predicate's symmetry is
/// checked at construction.
pub const SYMMETRY_SAMPLE: usize = 256;

pub const DEFAULT_CLASSIFY_BUDGET: u64 = 1024;

type Membership = Arc<dyn Fn(&Element) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct Predicate {
    name: String,
    test: Membership,
    asserted_symmetric: bool,
    involutions_only: bool,
}

impl Predicate {
    /// A predicate with a caller-asserted symmetry flag.
    pub fn new(
        name: impl Into<String>,
        asserted_symmetric: bool,
        test: impl Fn(&Element) -> bool + Send + Sync + 'static,
    ) -> Predicate {
        Predicate {
            name: name.into(),
            test: Arc::new(test),
            asserted_symmetric,
            involutions_only: false,
        }
    }

    /// Marks the predicate as holding only for involutions.
    pub fn involutions_only(mut self) -> Predicate {
        self.involutions_only = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn asserted_symmetric(&self) -> bool {
        self.asserted_symmetric
    }

    /// Named built-ins available from the command line.
    pub fn builtin(group: &Group, name: &str) -> Result<Predicate> {
        let unfit = || Error::Parse {
            pos: 5,
            msg: format!("predicate '{name}' is not defined on {group}"),
        };
        let p = match name {
            "odd" if *group == Group::Integers => {
                Predicate::new("odd", true, |x| matches!(x, Element::Int(n) if n % 2 != 0))
            }
            "units" if *group == Group::Integers => Predicate::new(
                "units",
                true,
                |x| matches!(x, Element::Int(n) if n.abs() == 1),
            ),
            "rotations" if *group == Group::InfiniteDihedral => Predicate::new(
                "rotations",
                true,
                |x| matches!(x, Element::Dihedral { k, flip: false } if *k != 0),
            ),
            "reflections" if *group == Group::InfiniteDihedral => {
                Predicate::new("reflections", true, |x| {
                    matches!(x, Element::Dihedral { flip: true, .. })
                })
                .involutions_only()
            }
            "odd" | "units" | "rotations" | "reflections" => return Err(unfit()),
            _ => {
                return Err(Error::Parse {
                    pos: 5,
                    msg: format!("unknown predicate '{name}'"),
                })
            }
        };
        Ok(p)
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Predicate")
            .field("name", &self.name)
            .field("asserted_symmetric", &self.asserted_symmetric)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum SetKind {
    /// `G \ H`.
    ComplementOfSubgroup(SubgroupSpec),
    /// `G \ (H ∪ L)` for the two subgroups of an embedding construction.
    ComplementOfPair(SubgroupSpec, SubgroupSpec),
    ExplicitFinite(Vec<Element>),
    Predicate(Predicate),
    /// `S ∩ I(G)`.
    Involutions(Box<ConnectionSet>),
    /// `S \ I(G)`.
    NonInvolutions(Box<ConnectionSet>),
}

#[derive(Debug, Clone)]
pub struct ConnectionSet {
    group: Group,
    kind: SetKind,
    explicit_index: Option<Arc<HashSet<Element>>>,
}

impl ConnectionSet {
    fn raw(group: Group, kind: SetKind) -> ConnectionSet {
        let explicit_index = match &kind {
            SetKind::ExplicitFinite(v) => Some(Arc::new(v.iter().cloned().collect())),
            _ => None,
        };
        ConnectionSet {
            group,
            kind,
            explicit_index,
        }
    }

    /// `G \ H`. Symmetric and identity-free by construction.
    pub fn complement(h: SubgroupSpec) -> ConnectionSet {
        ConnectionSet::raw(h.parent().clone(), SetKind::ComplementOfSubgroup(h))
    }

    /// `G \ {0}`.
    pub fn all_nonzero(group: Group) -> ConnectionSet {
        ConnectionSet::complement(SubgroupSpec::trivial(group))
    }

    pub fn complement_of_pair(h: SubgroupSpec, l: SubgroupSpec) -> Result<ConnectionSet> {
        if h.parent() != l.parent() {
            return Err(Error::ShapeMismatch(
                "both subgroups must live in the same group".into(),
            ));
        }
        Ok(ConnectionSet::raw(
            h.parent().clone(),
            SetKind::ComplementOfPair(h, l),
        ))
    }

    /// A finite list, checked exhaustively for symmetry.
    pub fn explicit(group: Group, elements: Vec<Element>) -> Result<ConnectionSet> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for x in elements {
            group.validate(&x)?;
            if group.is_identity(&x) {
                return Err(Error::IdentityInSet);
            }
            if seen.insert(x.clone()) {
                list.push(x);
            }
        }
        for x in &list {
            if !seen.contains(&group.inv(x)?) {
                return Err(Error::SymmetryViolation(x.encode()));
            }
        }
        list.sort_by_key(|x| group.index_of(x).unwrap_or(u64::MAX));
        Ok(ConnectionSet::raw(group, SetKind::ExplicitFinite(list)))
    }

    /// A predicate set, symmetry checked on the first [`SYMMETRY_SAMPLE`]
    /// elements.
    pub fn predicate(group: Group, pred: Predicate) -> Result<ConnectionSet> {
        let s = ConnectionSet::raw(group, SetKind::Predicate(pred));
        if s.contains(&s.group.identity())? {
            return Err(Error::IdentityInSet);
        }
        s.check_symmetry(SYMMETRY_SAMPLE)?;
        Ok(s)
    }

    /// Parse `all-nonzero`, `complement(<subgroup>)`, `list[<elements>]` or
    /// `pred:<name>`.
    pub fn parse(group: &Group, spec: &str) -> Result<ConnectionSet> {
        let t = spec.trim();
        let offset = spec.len() - spec.trim_start().len();
        let shift = |e: Error, by: usize| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos: pos + by + offset,
                msg,
            },
            e => e,
        };
        if t == "all-nonzero" {
            return Ok(ConnectionSet::all_nonzero(group.clone()));
        }
        if let Some(inner) = t
            .strip_prefix("complement(")
            .and_then(|r| r.strip_suffix(')'))
        {
            let h = SubgroupSpec::parse(group, inner).map_err(|e| shift(e, 11))?;
            return Ok(ConnectionSet::complement(h));
        }
        if let Some(inner) = t.strip_prefix("list[").and_then(|r| r.strip_suffix(']')) {
            let xs = parse_element_list(group, inner).map_err(|e| shift(e, 5))?;
            return ConnectionSet::explicit(group.clone(), xs);
        }
        if let Some(name) = t.strip_prefix("pred:") {
            return ConnectionSet::predicate(group.clone(), Predicate::builtin(group, name)?);
        }
        Err(Error::Parse {
            pos: offset,
            msg: format!(
                "expected all-nonzero, complement(..), list[..] or pred:<name>, found '{t}'"
            ),
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    /// Membership test. Predicate sets also check `-x`, so asymmetry found
    /// at any point surfaces as `SymmetryViolation`.
    pub fn contains(&self, x: &Element) -> Result<bool> {
        Ok(match &self.kind {
            SetKind::ComplementOfSubgroup(h) => {
                self.group.validate(x)?;
                !h.contains(x)
            }
            SetKind::ComplementOfPair(h, l) => {
                self.group.validate(x)?;
                !h.contains(x) && !l.contains(x)
            }
            SetKind::ExplicitFinite(_) => self
                .explicit_index
                .as_ref()
                .is_some_and(|idx| idx.contains(x)),
            SetKind::Predicate(p) => {
                self.group.validate(x)?;
                let here = (p.test)(x);
                let mirror = (p.test)(&self.group.inv(x)?);
                if here != mirror {
                    let witness = if here { x.clone() } else { self.group.inv(x)? };
                    return Err(Error::SymmetryViolation(witness.encode()));
                }
                here
            }
            SetKind::Involutions(s) => s.contains(x)? && self.group.is_involution(x)?,
            SetKind::NonInvolutions(s) => s.contains(x)? && !self.group.is_involution(x)?,
        })
    }

    /// Members in group enumeration order. Stops at the first error.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        self.group
            .elements()
            .filter(move |x| self.contains(x).unwrap_or(false))
    }

    /// Checks `x ∈ S ⟺ -x ∈ S` on the first `sample` group elements.
    pub fn check_symmetry(&self, sample: usize) -> Result<()> {
        for x in self.group.elements().take(sample) {
            let here = self.contains(&x)?;
            let inv = self.group.inv(&x)?;
            if here != self.contains(&inv)? {
                let w = if here { x } else { inv };
                return Err(Error::SymmetryViolation(w.encode()));
            }
        }
        Ok(())
    }

    /// `S ∩ I(G)` and `S \ I(G)`.
    pub fn split_involutions(&self) -> Result<SplitSets> {
        if matches!(self.kind, SetKind::Predicate(_)) {
            self.check_symmetry(SYMMETRY_SAMPLE)?;
        }
        Ok(SplitSets {
            s_inv: ConnectionSet::raw(
                self.group.clone(),
                SetKind::Involutions(Box::new(self.clone())),
            ),
            s_free: ConnectionSet::raw(
                self.group.clone(),
                SetKind::NonInvolutions(Box::new(self.clone())),
            ),
        })
    }

    fn theorem_backing(&self) -> Backing {
        match &self.kind {
            SetKind::ComplementOfSubgroup(_) => Backing::SubgroupComplement,
            SetKind::ComplementOfPair(..) => Backing::EmbeddingComplement,
            SetKind::Involutions(s) | SetKind::NonInvolutions(s) => s.theorem_backing(),
            _ => Backing::Witness,
        }
    }

    /// Decides whether `|S \ I(G)|` is `0` or `|G|`, scanning at most
    /// `budget` group elements.
    pub fn classify(&self, budget: u64) -> Result<GruppiClass> {
        let g = &self.group;
        match &self.kind {
            SetKind::ComplementOfSubgroup(h) if h.is_whole() => return Ok(GruppiClass::EmptySet),
            SetKind::ExplicitFinite(list) => {
                if list.is_empty() {
                    return Ok(GruppiClass::EmptySet);
                }
                let free: Vec<&Element> = list
                    .iter()
                    .filter(|x| !g.is_involution(x).unwrap_or(true))
                    .collect();
                return Ok(match free.first() {
                    None => GruppiClass::AllInvolutions,
                    Some(w) if g.is_infinite() => GruppiClass::FiniteFree {
                        witness: (*w).clone(),
                        count: free.len() as u64,
                    },
                    Some(w) => finite_group_verdict(w, free.len() as u64),
                });
            }
            _ => {}
        }

        if !g.is_infinite() {
            let mut free = 0u64;
            let mut witness = None;
            let mut any = false;
            for x in g.elements() {
                if self.contains(&x)? {
                    any = true;
                    if !g.is_involution(&x)? {
                        free += 1;
                        witness.get_or_insert(x);
                    }
                }
            }
            return Ok(match witness {
                None if any => GruppiClass::AllInvolutions,
                None => GruppiClass::EmptySet,
                Some(w) => finite_group_verdict(&w, free),
            });
        }

        let backing = self.theorem_backing();
        let mut first = None;
        let mut late = false;
        for (pos, x) in g.elements().take(budget as usize).enumerate() {
            if self.contains(&x)? && !g.is_involution(&x)? {
                if first.is_none() {
                    first = Some(x);
                    if backing != Backing::Witness {
                        break;
                    }
                }
                if pos as u64 >= budget / 2 {
                    late = true;
                    break;
                }
            }
        }
        Ok(match first {
            Some(witness) if backing != Backing::Witness || late => {
                GruppiClass::InfiniteFree { witness, backing }
            }
            Some(_) => GruppiClass::Unknown { scanned: budget },
            None => {
                if self.certified_involutory() {
                    GruppiClass::AllInvolutions
                } else {
                    GruppiClass::Unknown { scanned: budget }
                }
            }
        })
    }

    fn certified_involutory(&self) -> bool {
        match &self.kind {
            SetKind::ComplementOfSubgroup(h) => h.complement_is_involutory() == Some(true),
            SetKind::Predicate(p) => p.involutions_only,
            SetKind::Involutions(_) => true,
            _ => false,
        }
    }
}

// In a finite group 0 ∉ S forces |S \ I(G)| < |G|.
fn finite_group_verdict(w: &Element, free: u64) -> GruppiClass {
    GruppiClass::FiniteFree {
        witness: w.clone(),
        count: free,
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SetKind::ComplementOfSubgroup(h) if h.order() == crate::Cardinal::Finite(1) => {
                f.write_str("all-nonzero")
            }
            SetKind::ComplementOfSubgroup(h) => write!(f, "complement({h})"),
            SetKind::ComplementOfPair(h, l) => write!(f, "complement(({h}) | ({l}))"),
            SetKind::ExplicitFinite(xs) => {
                f.write_str("list[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            SetKind::Predicate(p) => write!(f, "pred:{}", p.name),
            SetKind::Involutions(s) => write!(f, "involutions({s})"),
            SetKind::NonInvolutions(s) => write!(f, "non-involutions({s})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplitSets {
    pub s_inv: ConnectionSet,
    pub s_free: ConnectionSet,
}

/// What justifies an `InfiniteFree` verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backing {
    /// `S = G \ H`: one non-involution outside `H ∪ I(G)` forces `|G|` of them.
    SubgroupComplement,
    /// `S = G \ (H ∪ L)` from the embedding construction, where the product
    /// structure gives `|G|` non-involutions as soon as one exists.
    EmbeddingComplement,
    /// A witness plus evidence of unbounded growth within the scan; not a proof.
    Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GruppiClass {
    AllInvolutions,
    InfiniteFree {
        witness: Element,
        backing: Backing,
    },
    /// `0 < |S \ I(G)| < |G|`: outside every construction offered here.
    FiniteFree {
        witness: Element,
        count: u64,
    },
    EmptySet,
    Unknown {
        scanned: u64,
    },
}

impl GruppiClass {
    /// True when a regular 1-factorization may be built.
    pub fn admits_factorization(&self) -> bool {
        matches!(
            self,
            GruppiClass::AllInvolutions | GruppiClass::InfiniteFree { .. } | GruppiClass::EmptySet
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            GruppiClass::AllInvolutions => json!({"verdict": "all-involutions"}),
            GruppiClass::EmptySet => json!({"verdict": "empty-set"}),
            GruppiClass::InfiniteFree { witness, backing } => json!({
                "verdict": "infinite-free",
                "witness": witness.encode(),
                "backing": backing,
            }),
            GruppiClass::FiniteFree { witness, count } => json!({
                "verdict": "finite-free",
                "witness": witness.encode(),
                "count": count,
            }),
            GruppiClass::Unknown { scanned } => json!({"verdict": "unknown", "scanned": scanned}),
        }
    }
}
