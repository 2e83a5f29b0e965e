//! Brute-force checks of a factorization on a finite window: the first `N`
//! elements of the group enumeration.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::factorization::{FactorId, Factorization};
use crate::groups::{Element, Group};

pub const WINDOW_NOTE: &str =
    "edges are pairs of window elements; factor partners and translates may leave the window";

/// The first `N` elements of a group (all of them when the group is smaller).
#[derive(Debug, Clone)]
pub struct Window {
    pub group: Group,
    pub elements: Vec<Element>,
}

impl Window {
    pub fn new(group: &Group, n: usize) -> Window {
        let n = match group.order().finite() {
            Some(k) => n.min(k as usize),
            None => n,
        };
        Window {
            group: group.clone(),
            elements: group.window(n),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Unordered pairs `(x, y)` with `x` before `y` in enumeration order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Element, &Element)> + '_ {
        self.elements
            .iter()
            .enumerate()
            .flat_map(move |(i, x)| self.elements[i + 1..].iter().map(move |y| (x, y)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub elements: Vec<String>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub failures: u64,
    pub counterexample: Option<Counterexample>,
}

impl CheckResult {
    fn new(name: &'static str) -> CheckResult {
        CheckResult {
            name,
            passed: true,
            failures: 0,
            counterexample: None,
        }
    }

    fn fail(&mut self, elements: &[&Element], expected: impl ToString, actual: impl ToString) {
        self.passed = false;
        self.failures += 1;
        if self.counterexample.is_none() {
            self.counterexample = Some(Counterexample {
                elements: elements.iter().map(|e| e.encode()).collect(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowStats {
    pub edges: u64,
    pub factors_touched: u64,
    pub max_cursor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub group: String,
    pub connection_set: String,
    pub window: usize,
    pub note: &'static str,
    pub checks: Vec<CheckResult>,
    pub stats: WindowStats,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for WindowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "group {}  set {}  window {}",
            self.group, self.connection_set, self.window
        )?;
        writeln!(f, "note: {}", self.note)?;
        for c in &self.checks {
            write!(
                f,
                "{:<18} {}",
                c.name,
                if c.passed { "pass" } else { "FAIL" }
            )?;
            if let Some(ce) = &c.counterexample {
                write!(
                    f,
                    "  ({} failures; at [{}] expected {}, got {})",
                    c.failures,
                    ce.elements.join(", "),
                    ce.expected,
                    ce.actual
                )?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "edges {}  factors {}  max cursor {}",
            self.stats.edges, self.stats.factors_touched, self.stats.max_cursor
        )
    }
}

fn show<T: fmt::Display>(r: &Result<T>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => e.name().to_string(),
    }
}

/// Runs every window check against `f`. Failures become report entries.
pub fn verify_window(f: &dyn Factorization, n: usize) -> WindowReport {
    let g = f.group();
    let window = Window::new(g, n);
    let position: HashMap<&Element, usize> = window
        .elements
        .iter()
        .enumerate()
        .map(|(i, x)| (x, i))
        .collect();

    // coverage: every window edge gets one id from both orientations, and
    // non-edges are rejected
    let mut coverage = CheckResult::new("coverage");
    let mut table: Vec<((&Element, &Element), FactorId)> = Vec::new();
    for (x, y) in window.pairs() {
        let is_edge = g.diff(x, y).and_then(|d| f.in_connection_set(&d));
        match is_edge {
            Ok(true) => {
                let fwd = f.factor_of_edge(x, y);
                let back = f.factor_of_edge(y, x);
                match (&fwd, &back) {
                    (Ok(a), Ok(b)) if a == b => table.push(((x, y), a.clone())),
                    _ => coverage.fail(&[x, y], show(&fwd), show(&back)),
                }
            }
            Ok(false) => {
                if let Ok(id) = f.factor_of_edge(x, y) {
                    coverage.fail(&[x, y], "NotAnEdge", id);
                }
            }
            Err(e) => coverage.fail(&[x, y], "membership", e.name()),
        }
    }
    let ids: Vec<&FactorId> = {
        let mut seen = HashSet::new();
        table
            .iter()
            .map(|(_, id)| id)
            .filter(|id| seen.insert(*id))
            .collect()
    };

    // one-factor: partner maps are fixed-point-free involutions on the
    // window, and no window vertex lies on two window edges of one id
    let mut one_factor = CheckResult::new("one-factor");
    let mut partners: HashMap<&FactorId, HashMap<&Element, Element>> = HashMap::new();
    for id in &ids {
        let mut map = HashMap::new();
        for v in &window.elements {
            match f.partner(id, v) {
                Ok(w) => {
                    if w == *v {
                        one_factor.fail(&[v], format!("{id} moves the vertex"), "fixed point");
                    } else {
                        match f.partner(id, &w) {
                            Ok(back) if back == *v => {}
                            other => one_factor.fail(&[v, &w], v, show(&other)),
                        }
                    }
                    map.insert(v, w);
                }
                Err(e) => one_factor.fail(&[v], format!("partner in {id}"), e.name()),
            }
        }
        partners.insert(*id, map);
    }
    let mut incident: HashMap<(&FactorId, &Element), &Element> = HashMap::new();
    for ((x, y), id) in &table {
        for (v, w) in [(*x, *y), (*y, *x)] {
            if let Some(prev) = incident.insert((id, v), w) {
                one_factor.fail(&[v, prev, w], format!("one edge of {id} at {v}"), "two");
            }
        }
    }

    // uniqueness: the partner maps of all touched ids claim each window
    // edge exactly once, for the id it was assigned; Trans ids are
    // re-derived from the base factor's difference table
    let mut uniqueness = CheckResult::new("uniqueness");
    let mut claims: HashMap<(&Element, &Element), Vec<&FactorId>> = HashMap::new();
    for id in &ids {
        let map = &partners[id];
        let mut claimed = HashSet::new();
        for (v, w) in map {
            if let Some((w, &j)) = position.get_key_value(w) {
                let e = if position[v] < j { (*v, *w) } else { (*w, *v) };
                if claimed.insert(e) {
                    claims.entry(e).or_default().push(*id);
                }
            }
        }
    }
    let own_view = f
        .base_views()
        .into_iter()
        .find(|b| b.group == *g)
        .map(|b| b.snapshot);
    for ((x, y), id) in &table {
        let who = claims.get(&(*x, *y)).map(Vec::as_slice).unwrap_or(&[]);
        if who.len() != 1 || who[0] != id {
            let actual: Vec<String> = who.iter().map(|i| i.to_string()).collect();
            uniqueness.fail(&[x, y], id, format!("claimed by [{}]", actual.join(", ")));
        }
        if let FactorId::Trans(shift) = id {
            let derived = own_view.as_ref().and_then(|snap| {
                let d = g.diff(y, x).ok()?;
                let (a, b) = snap.edge_with_difference(&d)?;
                let s = g.op(&g.inv(a).ok()?, x).ok()?;
                (g.op(b, &s).ok()? == **y).then_some(s)
            });
            if derived.as_ref() != Some(shift) {
                let got = derived.map_or("nothing".to_string(), |s| FactorId::Trans(s).to_string());
                uniqueness.fail(&[x, y], id, got);
            }
        }
    }

    // equivariance: translating an edge by t maps its id by the
    // translation law
    let mut equivariance = CheckResult::new("equivariance");
    for ((x, y), id) in &table {
        for t in &window.elements {
            let expected = match id {
                FactorId::Inv(_) => Ok((*id).clone()),
                FactorId::Trans(s) => g.op(s, t).map(FactorId::Trans),
                _ => f.translate_id(id, t),
            };
            let actual = g
                .op(x, t)
                .and_then(|xt| Ok((xt, g.op(y, t)?)))
                .and_then(|(xt, yt)| f.factor_of_edge(&xt, &yt));
            match (&expected, &actual) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => equivariance.fail(&[x, y, t], show(&expected), show(&actual)),
            }
        }
    }

    // differences: every base factor uses each allowed difference at most
    // once and no other
    let mut differences = CheckResult::new("differences");
    for view in f.base_views() {
        let bg = &view.group;
        let mut count: BTreeMap<Element, u32> = BTreeMap::new();
        for (a, b) in &view.snapshot.edges {
            for d in [bg.diff(b, a), bg.diff(a, b)] {
                match d {
                    Ok(d) => *count.entry(d).or_default() += 1,
                    Err(e) => differences.fail(&[a, b], "difference", e.name()),
                }
            }
        }
        for (d, c) in &count {
            if *c != 1 {
                differences.fail(&[d], format!("multiplicity 1 in {}", view.name), c);
            }
            match view.differences.contains(d) {
                Ok(true) => {}
                other => differences.fail(&[d], format!("in {}", view.differences), show(&other)),
            }
        }
        for (d, (a, b)) in &view.snapshot.diffs {
            if bg.diff(b, a).ok().as_ref() != Some(d) {
                differences.fail(&[d, a, b], d, show(&bg.diff(b, a)));
            }
        }
    }

    let mut checks = vec![coverage, one_factor, uniqueness, equivariance, differences];

    // embeddings: the ambient and lifted sets partition S, and each inner
    // factor sits inside exactly one outer factor
    if f.connection_parts(&g.identity()).is_some() {
        let mut partition = CheckResult::new("partition");
        for d in &window.elements {
            let parts = f.connection_parts(d).expect("embedding");
            match (parts, f.in_connection_set(d)) {
                (Ok((a, l)), Ok(s)) if !(a && l) && (a || l) == s => {}
                (parts, s) => partition.fail(
                    &[d],
                    format!("exactly one part iff in S ({})", show(&s)),
                    match parts {
                        Ok((a, l)) => format!("ambient {a}, lifted {l}"),
                        Err(e) => e.name().to_string(),
                    },
                ),
            }
        }
        let mut sub = CheckResult::new("subfactorization");
        let mut outer_of: HashMap<FactorId, (&FactorId, (&Element, &Element))> = HashMap::new();
        let mut inner_of: HashMap<&FactorId, FactorId> = HashMap::new();
        for ((x, y), id) in &table {
            match f.subfactor_label(x, y) {
                Ok(Some(inner)) => {
                    if let Some((prev, (px, py))) = outer_of.get(&inner) {
                        if *prev != id {
                            sub.fail(&[px, py, x, y], format!("{inner} inside {prev}"), id);
                        }
                    } else {
                        outer_of.insert(inner.clone(), (id, (x, y)));
                    }
                    match inner_of.get(id) {
                        Some(prev) if *prev != inner => {
                            sub.fail(&[x, y], format!("{id} holding only {prev}"), &inner)
                        }
                        _ => {
                            inner_of.insert(id, inner);
                        }
                    }
                }
                Ok(None) => {}
                Err(e) => sub.fail(&[x, y], "inner label", e.name()),
            }
        }
        checks.push(partition);
        checks.push(sub);
    }
    checks.sort_by_key(|c| c.name);

    WindowReport {
        group: g.to_string(),
        connection_set: f.describe_set(),
        window: window.len(),
        note: WINDOW_NOTE,
        checks,
        stats: WindowStats {
            edges: table.len() as u64,
            factors_touched: ids.len() as u64,
            max_cursor: f.max_cursor(),
        },
    }
}

/// True iff `y - x` stays in the part for all window elements `x, y` of it.
pub fn check_part_closed(g: &Group, part: impl Fn(&Element) -> bool, n: usize) -> bool {
    let members: Vec<Element> = Window::new(g, n)
        .elements
        .into_iter()
        .filter(|x| part(x))
        .collect();
    members.iter().all(|x| {
        members
            .iter()
            .all(|y| g.diff(y, x).map(|d| part(&d)).unwrap_or(false))
    })
}

/// Recomputes the window's factor table on a fresh handle, querying edges in
/// reverse order, and compares it with the table from `f`.
pub fn oracle_partition(f: &dyn Factorization, n: usize) -> bool {
    let window = Window::new(f.group(), n);
    let edges: Vec<(&Element, &Element)> = window
        .pairs()
        .filter(|(x, y)| {
            f.group()
                .diff(x, y)
                .and_then(|d| f.in_connection_set(&d))
                .unwrap_or(false)
        })
        .collect();
    let Ok(other) = f.fresh() else {
        return false;
    };
    let mut theirs: Vec<Result<FactorId>> = edges
        .iter()
        .rev()
        .map(|(x, y)| other.factor_of_edge(x, y))
        .collect();
    theirs.reverse();
    edges
        .iter()
        .zip(theirs)
        .all(|((x, y), t)| matches!((f.factor_of_edge(x, y), t), (Ok(a), Ok(b)) if a == b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connsets::ConnectionSet;
    use crate::factorization::{BaseView, BuildOptions, RegularFactorization};
    use crate::groups::SubgroupSpec;

    fn int(n: i64) -> Element {
        Element::Int(n)
    }

    fn complete_z() -> RegularFactorization {
        RegularFactorization::build(Group::Integers, ConnectionSet::all_nonzero(Group::Integers))
            .unwrap()
    }

    fn failing(r: &WindowReport) -> Vec<&'static str> {
        r.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    #[test]
    fn passes_on_small_examples() {
        let r = verify_window(&complete_z(), 9);
        assert!(r.passed(), "{r}");
        assert_eq!(
            r.checks.iter().map(|c| c.name).collect::<Vec<_>>(),
            [
                "coverage",
                "differences",
                "equivariance",
                "one-factor",
                "uniqueness"
            ]
        );
        assert_eq!(r.stats.edges, 36);

        let zc = Group::direct_product(Group::Integers, Group::Cyclic(2));
        let f = RegularFactorization::build(zc.clone(), ConnectionSet::all_nonzero(zc)).unwrap();
        let r = verify_window(&f, 10);
        assert!(r.passed(), "{r}");
        let ids: HashSet<&str> = ["Inv", "Trans"].into();
        let table = crate::export::window_table(&f, 10).unwrap();
        let kinds: HashSet<&str> = table
            .iter()
            .map(|(_, _, id)| {
                if matches!(id, FactorId::Inv(_)) {
                    "Inv"
                } else {
                    "Trans"
                }
            })
            .collect();
        assert_eq!(kinds, ids);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = verify_window(&complete_z(), 20).to_json();
        let b = verify_window(&complete_z(), 20).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn part_closure_examples() {
        let z = Group::Integers;
        let three = SubgroupSpec::parse(&z, "3Z").unwrap();
        assert!(check_part_closed(&z, |x| three.contains(x), 30));
        assert!(!check_part_closed(
            &z,
            |x| matches!(x, Element::Int(0..=2)),
            10
        ));
        let zc = Group::direct_product(Group::Integers, Group::Cyclic(2));
        let h = SubgroupSpec::parse(&zc, "{0} x C2").unwrap();
        assert!(check_part_closed(&zc, |x| h.contains(x), 20));
    }

    #[test]
    fn oracle_examples() {
        assert!(oracle_partition(&complete_z(), 16));
        let small = RegularFactorization::build_with(
            Group::Integers,
            ConnectionSet::all_nonzero(Group::Integers),
            BuildOptions {
                scan_limit: 1000,
                ..BuildOptions::default()
            },
        )
        .unwrap();
        let t1 = crate::export::window_table(&small, 16).unwrap();
        let t2 = crate::export::window_table(&complete_z(), 16).unwrap();
        assert_eq!(t1, t2);
    }

    /// Delegates to a real factorization, with one fault switched on.
    struct Faulty {
        inner: Box<dyn Factorization>,
        fault: Fault,
    }

    #[derive(Clone, Copy)]
    enum Fault {
        AcceptsNonEdge,
        PartnerEscapes,
        SwappedPairs,
        WrongFarId,
        DuplicateDifference,
    }

    impl Factorization for Faulty {
        fn group(&self) -> &Group {
            self.inner.group()
        }
        fn describe_set(&self) -> String {
            self.inner.describe_set()
        }
        fn in_connection_set(&self, d: &Element) -> Result<bool> {
            self.inner.in_connection_set(d)
        }
        fn factor_of_edge(&self, x: &Element, y: &Element) -> Result<FactorId> {
            match (self.fault, x, y) {
                (Fault::AcceptsNonEdge, Element::Int(0), Element::Int(3)) => {
                    Ok(FactorId::Trans(int(0)))
                }
                (Fault::WrongFarId, Element::Int(a), Element::Int(b))
                    if a.abs().max(b.abs()) > 20 =>
                {
                    match self.inner.factor_of_edge(x, y)? {
                        FactorId::Trans(Element::Int(s)) => Ok(FactorId::Trans(int(s + 1))),
                        id => Ok(id),
                    }
                }
                _ => self.inner.factor_of_edge(x, y),
            }
        }
        fn partner(&self, id: &FactorId, v: &Element) -> Result<Element> {
            let base = FactorId::Trans(int(0));
            match self.fault {
                Fault::PartnerEscapes if *id == base && *v == int(0) => Ok(int(1000)),
                // base factor {0,1},{2,-1} rewired as {0,2},{1,-1}
                Fault::SwappedPairs if *id == base => match v {
                    Element::Int(0) => Ok(int(2)),
                    Element::Int(2) => Ok(int(0)),
                    Element::Int(1) => Ok(int(-1)),
                    Element::Int(-1) => Ok(int(1)),
                    _ => self.inner.partner(id, v),
                },
                _ => self.inner.partner(id, v),
            }
        }
        fn translate_id(&self, id: &FactorId, t: &Element) -> Result<FactorId> {
            self.inner.translate_id(id, t)
        }
        fn base_views(&self) -> Vec<BaseView> {
            let mut views = self.inner.base_views();
            if let Fault::DuplicateDifference = self.fault {
                views[0].snapshot.edges.push((int(100), int(101)));
            }
            views
        }
        fn fresh(&self) -> Result<Box<dyn Factorization>> {
            Ok(Box::new(Faulty {
                inner: self.inner.fresh()?,
                fault: self.fault,
            }))
        }
    }

    fn faulty(inner: RegularFactorization, fault: Fault) -> Faulty {
        Faulty {
            inner: Box::new(inner),
            fault,
        }
    }

    #[test]
    fn each_fault_trips_its_own_check() {
        let k3 = RegularFactorization::complete_equipartite(
            SubgroupSpec::parse(&Group::Integers, "3Z").unwrap(),
        )
        .unwrap();
        let cases = [
            (faulty(k3, Fault::AcceptsNonEdge), "coverage"),
            (faulty(complete_z(), Fault::PartnerEscapes), "one-factor"),
            (faulty(complete_z(), Fault::SwappedPairs), "uniqueness"),
            (faulty(complete_z(), Fault::WrongFarId), "equivariance"),
            (
                faulty(complete_z(), Fault::DuplicateDifference),
                "differences",
            ),
        ];
        for (f, name) in cases {
            let r = verify_window(&f, 32);
            assert_eq!(failing(&r), [name], "{r}");
            let ce = r.check(name).unwrap().counterexample.as_ref().unwrap();
            assert!(!ce.elements.is_empty());
        }
    }

    #[test]
    fn counterexample_names_the_edge() {
        let k3 = RegularFactorization::complete_equipartite(
            SubgroupSpec::parse(&Group::Integers, "3Z").unwrap(),
        )
        .unwrap();
        let r = verify_window(&faulty(k3, Fault::AcceptsNonEdge), 12);
        let ce = r.check("coverage").unwrap().counterexample.clone().unwrap();
        assert_eq!(ce.elements, ["0", "3"]);
        assert_eq!(ce.expected, "NotAnEdge");
        assert_eq!(ce.actual, "Trans(0)");
    }
}
