//! G-regular 1-factorizations of `Cay[G:S]`.
//!
//! The involutions of `S` each give a factor `Inv(s) = Cay[G:{s}]`, fixed by
//! every right translation. The non-involutions are covered by the right
//! translates `Trans(g) = Γ + g` of one greedy base factor `Γ` whose
//! difference list is `S \ I(G)` with multiplicity one. Factor handles are
//! lazy: a query drives the base builder only as far as it needs.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, MutexGuard};

use serde::Serialize;

use crate::connsets::{ConnectionSet, GruppiClass, SplitSets, DEFAULT_CLASSIFY_BUDGET};
use crate::error::{Error, Result};
use crate::greedy::{BaseFactorBuilder, BaseSnapshot, DEFAULT_SCAN_LIMIT};
use crate::groups::{Element, Group, SubgroupSpec};

/// Label of a 1-factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorId {
    /// `Cay[G:{s}]` for an involution `s ∈ S`.
    Inv(Element),
    /// The right translate `Γ + g` of the base factor.
    Trans(Element),
    /// Factor number `k` of an explicit factor table.
    Listed(usize),
    /// The lift of a factor of an embedded factorization.
    Lifted(Box<FactorId>),
}

impl FactorId {
    pub fn kind(&self) -> &'static str {
        match self {
            FactorId::Inv(_) => "inv",
            FactorId::Trans(_) => "trans",
            FactorId::Listed(_) => "listed",
            FactorId::Lifted(_) => "lifted",
        }
    }

    pub fn label(&self) -> String {
        match self {
            FactorId::Inv(x) | FactorId::Trans(x) => x.encode(),
            FactorId::Listed(k) => k.to_string(),
            FactorId::Lifted(inner) => inner.to_string(),
        }
    }

    /// Parses `Inv(s)`, `Trans(g)`, `Listed(k)` or `Lifted(..)`, where a
    /// lifted label lives in the right factor of `group`.
    pub fn parse(group: &Group, s: &str) -> Result<FactorId> {
        let s = s.trim();
        let bad = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("{msg} in factor label {s:?}"),
        };
        let open = s.find('(').ok_or_else(|| bad("expected '('"))?;
        let body = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| bad("expected trailing ')'"))?;
        match &s[..open] {
            "Inv" => Ok(FactorId::Inv(group.parse_element(body)?)),
            "Trans" => Ok(FactorId::Trans(group.parse_element(body)?)),
            "Listed" => body
                .trim()
                .parse()
                .map(FactorId::Listed)
                .map_err(|_| bad("expected a factor number")),
            "Lifted" => {
                let (_, h) = group
                    .factors()
                    .ok_or_else(|| bad("lifted labels need a product group"))?;
                Ok(FactorId::Lifted(Box::new(FactorId::parse(h, body)?)))
            }
            _ => Err(bad("unknown factor kind")),
        }
    }

    pub fn to_json(&self) -> FactorLabel {
        FactorLabel {
            kind: self.kind(),
            label: self.label(),
        }
    }
}

impl fmt::Display for FactorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorId::Inv(s) => write!(f, "Inv({s})"),
            FactorId::Trans(g) => write!(f, "Trans({g})"),
            FactorId::Listed(k) => write!(f, "Listed({k})"),
            FactorId::Lifted(inner) => write!(f, "Lifted({inner})"),
        }
    }
}

/// `{"kind": ..., "label": ...}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorLabel {
    pub kind: &'static str,
    pub label: String,
}

/// Base-factor state exposed to the window verifier.
#[derive(Debug, Clone)]
pub struct BaseView {
    pub name: String,
    pub group: Group,
    pub snapshot: BaseSnapshot,
    /// The set `ΔΓ` is supposed to equal.
    pub differences: ConnectionSet,
}

/// Query surface shared by every factorization in this crate. Handles are
/// lazy views, so queries take `&self` and serialize internally.
pub trait Factorization: Send + Sync {
    fn group(&self) -> &Group;

    /// Human-readable connection set.
    fn describe_set(&self) -> String;

    fn in_connection_set(&self, d: &Element) -> Result<bool>;

    /// The factor containing the edge `{x, y}`.
    fn factor_of_edge(&self, x: &Element, y: &Element) -> Result<FactorId>;

    /// The neighbour of `v` in factor `id`.
    fn partner(&self, id: &FactorId, v: &Element) -> Result<Element>;

    /// The label of `F + t` for the factor `F` labelled `id`.
    fn translate_id(&self, id: &FactorId, t: &Element) -> Result<FactorId>;

    /// Current state of every base factor behind this handle.
    fn base_views(&self) -> Vec<BaseView>;

    /// Largest builder cursor reached so far.
    fn max_cursor(&self) -> u64 {
        self.base_views()
            .iter()
            .map(|b| b.snapshot.cursor)
            .max()
            .unwrap_or(0)
    }

    /// A new, identically configured handle with no construction state.
    fn fresh(&self) -> Result<Box<dyn Factorization>>;

    /// `K` when the connection set is `G \ K` for a subgroup `K`.
    fn complement_subgroup(&self) -> Option<SubgroupSpec> {
        None
    }

    /// For an embedding: the label of `{x, y}` in the embedded factorization,
    /// when the edge belongs to its lift.
    fn subfactor_label(&self, _x: &Element, _y: &Element) -> Result<Option<FactorId>> {
        Ok(None)
    }

    /// For an embedding: membership of `d` in the ambient and the lifted
    /// connection sets.
    fn connection_parts(&self, _d: &Element) -> Option<Result<(bool, bool)>> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Candidates scanned per greedy phase before giving up.
    pub scan_limit: u64,
    /// Group elements scanned by the classification.
    pub classify_budget: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            scan_limit: DEFAULT_SCAN_LIMIT,
            classify_budget: DEFAULT_CLASSIFY_BUDGET,
        }
    }
}

pub struct RegularFactorization {
    group: Group,
    set: ConnectionSet,
    split: SplitSets,
    verdict: GruppiClass,
    base: Option<Mutex<BaseFactorBuilder>>,
    options: BuildOptions,
    provenance: Vec<String>,
    queries: AtomicU64,
}

impl fmt::Debug for RegularFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegularFactorization")
            .field("group", &self.group.to_string())
            .field("set", &self.set.to_string())
            .field("verdict", &self.verdict)
            .finish()
    }
}

// release builds re-derive the Trans postcondition on every n-th query
const POSTCONDITION_SAMPLE: u64 = 64;

impl RegularFactorization {
    pub fn build(group: Group, set: ConnectionSet) -> Result<RegularFactorization> {
        RegularFactorization::build_with(group, set, BuildOptions::default())
    }

    /// Classifies `S` and prepares a lazy handle. Fails with
    /// `UnsupportedByTheorem` unless `|S \ I(G)|` is known to be `0` or `|G|`.
    pub fn build_with(
        group: Group,
        set: ConnectionSet,
        options: BuildOptions,
    ) -> Result<RegularFactorization> {
        if *set.group() != group {
            return Err(Error::ShapeMismatch(format!(
                "connection set lives in {}, not {group}",
                set.group()
            )));
        }
        let split = set.split_involutions()?;
        let verdict = set.classify(options.classify_budget)?;
        let mut provenance =
            vec!["involution factors Inv(s): one per involution s of S".to_string()];
        let base = match &verdict {
            GruppiClass::AllInvolutions | GruppiClass::EmptySet => None,
            GruppiClass::InfiniteFree { witness, backing } => {
                provenance.push(format!(
                    "translates Trans(g) of a greedy base factor with difference list S \\ I(G); \
                     witness {witness}, backing {backing:?}"
                ));
                let builder = BaseFactorBuilder::new(group.clone(), split.s_free.clone())?
                    .with_scan_limit(options.scan_limit);
                Some(Mutex::new(builder))
            }
            GruppiClass::FiniteFree { witness, count } => {
                return Err(Error::UnsupportedByTheorem(format!(
                    "S \\ I(G) is finite and nonempty ({count} elements, e.g. {witness})"
                )))
            }
            GruppiClass::Unknown { scanned } => {
                return Err(Error::UnsupportedByTheorem(format!(
                    "could not establish |S \\ I(G)| = |G| within {scanned} scanned elements"
                )))
            }
        };
        Ok(RegularFactorization {
            group,
            set,
            split,
            verdict,
            base,
            options,
            provenance,
            queries: AtomicU64::new(0),
        })
    }

    /// `K_m[n]` as `Cay[G : G \ H]` with `|H| = n` and index `m`.
    pub fn complete_equipartite(h: SubgroupSpec) -> Result<RegularFactorization> {
        RegularFactorization::complete_equipartite_with(h, BuildOptions::default())
    }

    pub fn complete_equipartite_with(
        h: SubgroupSpec,
        options: BuildOptions,
    ) -> Result<RegularFactorization> {
        let g = h.parent().clone();
        if !g.is_infinite() {
            return Err(Error::GroupFinite);
        }
        if h.is_whole() {
            return Err(Error::UnsupportedByTheorem(
                "H must be a proper subgroup, otherwise K_1[|G|] has no edges".into(),
            ));
        }
        let mut f =
            RegularFactorization::build_with(g, ConnectionSet::complement(h.clone()), options)?;
        f.provenance.push(format!(
            "complete equipartite graph K_{}[{}]: parts are the right cosets of {h}",
            h.index(),
            h.order()
        ));
        Ok(f)
    }

    pub fn connection_set(&self) -> &ConnectionSet {
        &self.set
    }

    pub fn split(&self) -> &SplitSets {
        &self.split
    }

    pub fn verdict(&self) -> &GruppiClass {
        &self.verdict
    }

    pub fn options(&self) -> BuildOptions {
        self.options
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn has_base(&self) -> bool {
        self.base.is_some()
    }

    fn builder(&self) -> Option<MutexGuard<'_, BaseFactorBuilder>> {
        self.base
            .as_ref()
            .map(|m| m.lock().unwrap_or_else(|e| e.into_inner()))
    }

    /// Immutable copy of the base factor built so far.
    pub fn freeze(&self) -> Option<BaseSnapshot> {
        self.builder().map(|b| b.freeze())
    }

    /// Greedy trace log of the base factor.
    pub fn trace_text(&self) -> Option<String> {
        self.builder().map(|b| b.trace_text())
    }

    /// Runs the base builder for `n` more steps.
    pub fn advance(&self, n: u64) -> Result<()> {
        match self.builder() {
            Some(mut b) => b.run(n),
            None => Ok(()),
        }
    }

    fn check_involution_factor(&self, s: &Element) -> Result<()> {
        if self.split.s_inv.contains(s)? {
            Ok(())
        } else {
            Err(Error::InvalidFactor(FactorId::Inv(s.clone()).to_string()))
        }
    }

    fn not_an_edge(x: &Element, y: &Element) -> Error {
        Error::NotAnEdge(x.encode(), y.encode())
    }
}

impl Factorization for RegularFactorization {
    fn group(&self) -> &Group {
        &self.group
    }

    fn describe_set(&self) -> String {
        self.set.to_string()
    }

    fn in_connection_set(&self, d: &Element) -> Result<bool> {
        self.set.contains(d)
    }

    fn factor_of_edge(&self, x: &Element, y: &Element) -> Result<FactorId> {
        let g = &self.group;
        g.validate(x)?;
        g.validate(y)?;
        if x == y || !self.set.contains(&g.diff(x, y)?)? {
            return Err(Self::not_an_edge(x, y));
        }
        let d = g.diff(y, x)?;
        if g.is_involution(&d)? {
            return Ok(FactorId::Inv(d));
        }
        let mut b = self.builder().ok_or_else(|| {
            Error::Internal(format!(
                "{d} is a non-involution of S but no base factor exists"
            ))
        })?;
        b.ensure_difference(&d)?;
        let (a, end) = b.edge_with_difference(&d)?;
        drop(b);
        let shift = g.op(&g.inv(&a)?, x)?;
        let n = self.queries.fetch_add(1, Ordering::Relaxed);
        if cfg!(debug_assertions) || n.is_multiple_of(POSTCONDITION_SAMPLE) {
            let image = g.op(&end, &shift)?;
            if image != *y {
                return Err(Error::Internal(format!(
                    "base edge ({a},{end}) translated by {shift} ends at {image}, not {y}"
                )));
            }
        }
        Ok(FactorId::Trans(shift))
    }

    fn partner(&self, id: &FactorId, v: &Element) -> Result<Element> {
        let g = &self.group;
        g.validate(v)?;
        match id {
            FactorId::Inv(s) => {
                self.check_involution_factor(s)?;
                g.op(s, v)
            }
            FactorId::Trans(t) => {
                g.validate(t)?;
                let mut b = self
                    .builder()
                    .ok_or_else(|| Error::InvalidFactor(id.to_string()))?;
                let w = g.diff(v, t)?;
                b.ensure_vertex(&w)?;
                let p = b
                    .partner(&w)
                    .cloned()
                    .ok_or_else(|| Error::Internal(format!("{w} unmatched after ensure_vertex")))?;
                drop(b);
                g.op(&p, t)
            }
            _ => Err(Error::InvalidFactor(id.to_string())),
        }
    }

    fn translate_id(&self, id: &FactorId, t: &Element) -> Result<FactorId> {
        self.group.validate(t)?;
        match id {
            FactorId::Inv(s) => {
                self.check_involution_factor(s)?;
                Ok(id.clone())
            }
            FactorId::Trans(g) if self.base.is_some() => Ok(FactorId::Trans(self.group.op(g, t)?)),
            _ => Err(Error::InvalidFactor(id.to_string())),
        }
    }

    fn base_views(&self) -> Vec<BaseView> {
        match self.freeze() {
            Some(snapshot) => vec![BaseView {
                name: format!("base factor of {}", self.set),
                group: self.group.clone(),
                snapshot,
                differences: self.split.s_free.clone(),
            }],
            None => Vec::new(),
        }
    }

    fn fresh(&self) -> Result<Box<dyn Factorization>> {
        Ok(Box::new(self.fresh_handle()?))
    }

    fn complement_subgroup(&self) -> Option<SubgroupSpec> {
        match self.set.kind() {
            crate::connsets::SetKind::ComplementOfSubgroup(k) => Some(k.clone()),
            _ => None,
        }
    }
}

impl RegularFactorization {
    /// Same configuration, empty construction state.
    pub fn fresh_handle(&self) -> Result<RegularFactorization> {
        let mut f =
            RegularFactorization::build_with(self.group.clone(), self.set.clone(), self.options)?;
        f.provenance = self.provenance.clone();
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Element {
        Element::Int(n)
    }

    fn p(a: i64, b: i64) -> Element {
        Element::pair(int(a), int(b))
    }

    fn z_c2() -> Group {
        Group::direct_product(Group::Integers, Group::Cyclic(2))
    }

    fn complete_z() -> RegularFactorization {
        RegularFactorization::build(Group::Integers, ConnectionSet::all_nonzero(Group::Integers))
            .unwrap()
    }

    #[test]
    fn build_examples() {
        let f = complete_z();
        assert!(f.has_base());
        let zc = z_c2();
        let f = RegularFactorization::build(zc.clone(), ConnectionSet::all_nonzero(zc.clone()))
            .unwrap();
        let inv: Vec<Element> = zc
            .window(100)
            .into_iter()
            .filter(|x| f.split().s_inv.contains(x).unwrap())
            .collect();
        assert_eq!(inv, vec![p(0, 1)]);
        assert_eq!(
            f.factor_of_edge(&p(3, 0), &p(3, 1)).unwrap(),
            FactorId::Inv(p(0, 1))
        );
    }

    #[test]
    fn finite_free_part_is_unsupported() {
        let z = Group::Integers;
        let units = ConnectionSet::parse(&z, "pred:units").unwrap();
        assert!(matches!(
            RegularFactorization::build(z.clone(), units),
            Err(Error::UnsupportedByTheorem(_))
        ));
        let listed = ConnectionSet::parse(&z, "list[1,-1]").unwrap();
        assert!(matches!(
            RegularFactorization::build(z, listed),
            Err(Error::UnsupportedByTheorem(_))
        ));
    }

    #[test]
    fn partner_examples() {
        let zc = z_c2();
        let f = RegularFactorization::build(zc.clone(), ConnectionSet::all_nonzero(zc)).unwrap();
        assert_eq!(
            f.partner(&FactorId::Inv(p(0, 1)), &p(7, 0)).unwrap(),
            p(7, 1)
        );
        assert!(matches!(
            f.partner(&FactorId::Inv(p(1, 0)), &p(7, 0)),
            Err(Error::InvalidFactor(_))
        ));

        let f = complete_z();
        assert_eq!(
            f.partner(&FactorId::Trans(int(5)), &int(2)).unwrap(),
            int(11)
        );
        for g in -5..6 {
            for v in -10..10 {
                let id = FactorId::Trans(int(g));
                let w = f.partner(&id, &int(v)).unwrap();
                assert_ne!(w, int(v));
                assert_eq!(f.partner(&id, &w).unwrap(), int(v));
            }
        }
    }

    #[test]
    fn factor_of_edge_examples() {
        let f = complete_z();
        assert_eq!(
            f.factor_of_edge(&int(5), &int(6)).unwrap(),
            FactorId::Trans(int(5))
        );
        assert_eq!(
            f.factor_of_edge(&int(0), &int(1)).unwrap(),
            FactorId::Trans(int(0))
        );
        assert_eq!(
            f.factor_of_edge(&int(4), &int(4)),
            Err(Error::NotAnEdge("4".into(), "4".into()))
        );
        let h = SubgroupSpec::parse(&Group::Integers, "3Z").unwrap();
        let k3 = RegularFactorization::complete_equipartite(h).unwrap();
        assert_eq!(
            k3.factor_of_edge(&int(0), &int(3)),
            Err(Error::NotAnEdge("0".into(), "3".into()))
        );
    }

    #[test]
    fn orientation_does_not_matter() {
        let f = complete_z();
        for x in -8..8 {
            for y in -8..8 {
                if x != y {
                    assert_eq!(
                        f.factor_of_edge(&int(x), &int(y)).unwrap(),
                        f.factor_of_edge(&int(y), &int(x)).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn equipartite_examples() {
        let zc = z_c2();
        let h = SubgroupSpec::parse(&zc, "{0} x C2").unwrap();
        let f = RegularFactorization::complete_equipartite(h).unwrap();
        assert!(matches!(
            f.factor_of_edge(&p(0, 0), &p(0, 1)),
            Err(Error::NotAnEdge(..))
        ));
        assert!(matches!(
            f.factor_of_edge(&p(0, 0), &p(1, 1)).unwrap(),
            FactorId::Trans(_)
        ));
        let trivial = SubgroupSpec::trivial(Group::Integers);
        let kz = RegularFactorization::complete_equipartite(trivial).unwrap();
        assert_eq!(kz.describe_set(), "all-nonzero");
        assert!(matches!(
            RegularFactorization::complete_equipartite(SubgroupSpec::whole(Group::Integers)),
            Err(Error::UnsupportedByTheorem(_))
        ));
        assert_eq!(
            RegularFactorization::complete_equipartite(SubgroupSpec::trivial(Group::Cyclic(4)))
                .unwrap_err(),
            Error::GroupFinite
        );
    }

    #[test]
    fn all_involution_equipartite_has_no_base() {
        let d = Group::InfiniteDihedral;
        let rot = SubgroupSpec::parse(&d, "rot").unwrap();
        let f = RegularFactorization::complete_equipartite(rot).unwrap();
        assert!(!f.has_base());
        let x = Element::Dihedral { k: 3, flip: false };
        let y = Element::Dihedral { k: -2, flip: true };
        let id = f.factor_of_edge(&x, &y).unwrap();
        assert!(matches!(id, FactorId::Inv(_)));
        assert_eq!(f.partner(&id, &x).unwrap(), y);
    }

    #[test]
    fn finite_group_with_involutions_only() {
        let c2 = Group::Cyclic(2);
        let f = RegularFactorization::build(c2.clone(), ConnectionSet::all_nonzero(c2)).unwrap();
        assert_eq!(
            f.factor_of_edge(&int(0), &int(1)).unwrap(),
            FactorId::Inv(int(1))
        );
        let c4 = Group::Cyclic(4);
        assert!(matches!(
            RegularFactorization::build(c4.clone(), ConnectionSet::all_nonzero(c4)),
            Err(Error::UnsupportedByTheorem(_))
        ));
    }

    #[test]
    fn handles_are_shareable_across_threads() {
        let f = std::sync::Arc::new(complete_z());
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let f = f.clone();
                std::thread::spawn(move || {
                    (0..20)
                        .map(|x| f.factor_of_edge(&int(x), &int(x + 1 + t)).unwrap())
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        let g = complete_z();
        for (t, ids) in results.into_iter().enumerate() {
            for (x, id) in ids.into_iter().enumerate() {
                let x = x as i64;
                assert_eq!(
                    id,
                    g.factor_of_edge(&int(x), &int(x + 1 + t as i64)).unwrap()
                );
            }
        }
    }

    #[test]
    fn factor_id_round_trip() {
        let zc = z_c2();
        for id in [
            FactorId::Inv(p(0, 1)),
            FactorId::Trans(p(-3, 1)),
            FactorId::Listed(4),
            FactorId::Lifted(Box::new(FactorId::Listed(0))),
        ] {
            assert_eq!(FactorId::parse(&zc, &id.to_string()).unwrap(), id);
        }
        assert!(FactorId::parse(&zc, "Foo(1)").is_err());
        assert!(FactorId::parse(&Group::Integers, "Trans(5").is_err());
    }

    #[test]
    fn factor_label_json() {
        let id = FactorId::Inv(p(0, 1));
        assert_eq!(
            serde_json::to_string(&id.to_json()).unwrap(),
            r#"{"kind":"inv","label":"(0,1)"}"#
        );
        let lifted = FactorId::Lifted(Box::new(FactorId::Inv(int(1))));
        assert_eq!(lifted.label(), "Inv(1)");
        assert_eq!(lifted.to_string(), "Lifted(Inv(1))");
    }
}
