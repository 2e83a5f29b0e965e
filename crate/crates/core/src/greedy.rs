//! Streaming construction of a base 1-factor `Γ` of `K_G` whose difference
//! list is exactly `U`, each difference occurring once.
//!
//! Elements are processed in enumeration order. Processing `g`:
//!
//! * Phase A: if `g` is unmatched, pair it with the least-index unmatched `z`
//!   such that `z - g ∈ U` and `z - g` is not yet used.
//! * Phase B: if `g ∈ U` and `±g` is not yet used, add `{y, g + y}` for the
//!   least-index `y` with both endpoints unmatched.
//!
//! After processing `g`, `g` is a vertex of `Γ`, and `g ∈ ΔΓ` whenever
//! `g ∈ U`. Every difference is recorded with its orientation so the unique
//! edge realizing it can be looked up.

use std::collections::HashMap;
use std::fmt;

use crate::connsets::ConnectionSet;
use crate::error::{Error, Result};
use crate::groups::{Element, Group};

pub const DEFAULT_SCAN_LIMIT: u64 = 100_000;

/// What one call to [`BaseFactorBuilder::step`] did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub index: u64,
    pub g: Element,
    /// Partner chosen for `g` in phase A.
    pub phase_a: Option<Element>,
    /// Left endpoint `y` of the edge `{y, g + y}` added in phase B.
    pub phase_b: Option<(Element, Element)>,
    pub scanned_a: u64,
    pub scanned_b: u64,
}

impl StepRecord {
    pub fn edges(&self) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        if let Some(z) = &self.phase_a {
            out.push((self.g.clone(), z.clone()));
        }
        if let Some(e) = &self.phase_b {
            out.push(e.clone());
        }
        out
    }
}

impl fmt::Display for StepRecord {
    /// `step i: g=<enc> phaseA z=<enc|-> phaseB y=<enc|->`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: g={} phaseA z=", self.index, self.g)?;
        match &self.phase_a {
            Some(z) => write!(f, "{z}")?,
            None => f.write_str("-")?,
        }
        f.write_str(" phaseB y=")?;
        match &self.phase_b {
            Some((y, _)) => write!(f, "{y}"),
            None => f.write_str("-"),
        }
    }
}

/// Immutable copy of the builder state, safe to share between readers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSnapshot {
    pub partner: HashMap<Element, Element>,
    /// `d -> (a, b)` with `b - a = d`.
    pub diffs: HashMap<Element, (Element, Element)>,
    /// Edges in insertion order.
    pub edges: Vec<(Element, Element)>,
    pub cursor: u64,
}

impl BaseSnapshot {
    pub fn partner(&self, v: &Element) -> Option<&Element> {
        self.partner.get(v)
    }

    pub fn edge_with_difference(&self, d: &Element) -> Option<&(Element, Element)> {
        self.diffs.get(d)
    }
}

#[derive(Debug, Clone)]
pub struct BaseFactorBuilder {
    group: Group,
    u: ConnectionSet,
    partner: HashMap<Element, Element>,
    diffs: HashMap<Element, (Element, Element)>,
    edges: Vec<(Element, Element)>,
    cursor: u64,
    // every index below this one is matched
    low_water: u64,
    trace: Vec<StepRecord>,
    scan_limit: u64,
}

impl BaseFactorBuilder {
    /// An empty builder over an involution-free `u` with `|u| = |G|`.
    /// Involution-freeness is checked lazily on every scanned element of `u`.
    pub fn new(group: Group, u: ConnectionSet) -> Result<BaseFactorBuilder> {
        if !group.is_infinite() {
            return Err(Error::GroupFinite);
        }
        if *u.group() != group {
            return Err(Error::ShapeMismatch(format!(
                "difference set lives in {}, not {group}",
                u.group()
            )));
        }
        Ok(BaseFactorBuilder {
            group,
            u,
            partner: HashMap::new(),
            diffs: HashMap::new(),
            edges: Vec::new(),
            cursor: 0,
            low_water: 0,
            trace: Vec::new(),
            scan_limit: DEFAULT_SCAN_LIMIT,
        })
    }

    pub fn with_scan_limit(mut self, limit: u64) -> BaseFactorBuilder {
        self.scan_limit = limit;
        self
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn difference_set(&self) -> &ConnectionSet {
        &self.u
    }

    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    pub fn trace(&self) -> &[StepRecord] {
        &self.trace
    }

    /// The trace log, one line per processed element.
    pub fn trace_text(&self) -> String {
        let mut s = String::new();
        for r in &self.trace {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn edges(&self) -> &[(Element, Element)] {
        &self.edges
    }

    pub fn is_matched(&self, v: &Element) -> bool {
        self.partner.contains_key(v)
    }

    pub fn partner(&self, v: &Element) -> Option<&Element> {
        self.partner.get(v)
    }

    pub fn uses_difference(&self, d: &Element) -> bool {
        self.diffs.contains_key(d)
    }

    fn in_u(&self, d: &Element) -> Result<bool> {
        if !self.u.contains(d)? {
            return Ok(false);
        }
        if self.group.is_involution(d)? {
            return Err(Error::InvolutionInU(d.encode()));
        }
        Ok(true)
    }

    fn add_edge(&mut self, a: Element, b: Element) -> Result<()> {
        let forward = self.group.diff(&b, &a)?;
        let backward = self.group.diff(&a, &b)?;
        debug_assert!(forward != backward);
        debug_assert!(!self.diffs.contains_key(&forward) && !self.diffs.contains_key(&backward));
        debug_assert!(!self.partner.contains_key(&a) && !self.partner.contains_key(&b));
        self.diffs.insert(forward, (a.clone(), b.clone()));
        self.diffs.insert(backward, (b.clone(), a.clone()));
        self.partner.insert(a.clone(), b.clone());
        self.partner.insert(b.clone(), a.clone());
        self.edges.push((a, b));
        Ok(())
    }

    /// Least-index unmatched candidate accepted by `accept`, scanning at most
    /// `scan_limit` elements past the matched prefix.
    fn scan(&self, mut accept: impl FnMut(&Element) -> Result<bool>) -> Result<(Element, u64)> {
        let mut i = self.low_water;
        let mut scanned = 0;
        while scanned < self.scan_limit {
            let c = self.group.enumerate(i)?;
            i += 1;
            scanned += 1;
            if !self.is_matched(&c) && accept(&c)? {
                return Ok((c, scanned));
            }
        }
        Err(Error::SearchBudgetExceeded(self.scan_limit))
    }

    /// Processes the element at the cursor and advances it.
    pub fn step(&mut self) -> Result<StepRecord> {
        let g = self.group.enumerate(self.cursor)?;
        let mut record = StepRecord {
            index: self.cursor,
            g: g.clone(),
            phase_a: None,
            phase_b: None,
            scanned_a: 0,
            scanned_b: 0,
        };

        if !self.is_matched(&g) {
            let (z, scanned) = self.scan(|z| {
                if *z == g {
                    return Ok(false);
                }
                let d = self.group.diff(z, &g)?;
                Ok(self.in_u(&d)? && !self.uses_difference(&d))
            })?;
            self.add_edge(g.clone(), z.clone())?;
            record.phase_a = Some(z);
            record.scanned_a = scanned;
        }

        if self.in_u(&g)? && !self.uses_difference(&g) {
            let (y, scanned) = self.scan(|y| {
                let gy = self.group.op(&g, y)?;
                Ok(!self.is_matched(&gy))
            })?;
            let gy = self.group.op(&g, &y)?;
            self.add_edge(y.clone(), gy.clone())?;
            record.phase_b = Some((y, gy));
            record.scanned_b = scanned;
        }

        self.cursor += 1;
        while self.is_matched(&self.group.enumerate(self.low_water)?) {
            self.low_water += 1;
        }
        self.trace.push(record.clone());
        Ok(record)
    }

    /// Runs `n` more steps.
    pub fn run(&mut self, n: u64) -> Result<()> {
        for _ in 0..n {
            self.step()?;
        }
        Ok(())
    }

    /// Makes `v` a vertex of the base factor.
    pub fn ensure_vertex(&mut self, v: &Element) -> Result<()> {
        if self.is_matched(v) {
            return Ok(());
        }
        let target = self.group.index_of(v)?;
        while self.cursor <= target {
            self.step()?;
        }
        debug_assert!(self.is_matched(v));
        Ok(())
    }

    /// Makes `±d` differences of the base factor. `d` must lie in `U`.
    pub fn ensure_difference(&mut self, d: &Element) -> Result<()> {
        self.group.validate(d)?;
        if !self.in_u(d)? {
            return Err(Error::NotInU(d.encode()));
        }
        if self.uses_difference(d) {
            return Ok(());
        }
        let target = self.group.index_of(d)?;
        while self.cursor <= target {
            self.step()?;
        }
        debug_assert!(self.uses_difference(d));
        Ok(())
    }

    /// The unique base edge `(a, b)` with `b - a = d`.
    pub fn edge_with_difference(&self, d: &Element) -> Result<(Element, Element)> {
        self.diffs
            .get(d)
            .cloned()
            .ok_or_else(|| Error::DifferenceAbsent(d.encode()))
    }

    pub fn freeze(&self) -> BaseSnapshot {
        BaseSnapshot {
            partner: self.partner.clone(),
            diffs: self.diffs.clone(),
            edges: self.edges.clone(),
            cursor: self.cursor,
        }
    }

    /// Checks the structural invariants of the partial factor; returns the
    /// first violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (v, p) in &self.partner {
            if v == p {
                return Err(format!("{v} is matched to itself"));
            }
            if self.partner.get(p) != Some(v) {
                return Err(format!("partner map not symmetric at {v}"));
            }
        }
        let mut seen = HashMap::new();
        for (a, b) in &self.edges {
            for d in [
                self.group.diff(b, a).map_err(|e| e.to_string())?,
                self.group.diff(a, b).map_err(|e| e.to_string())?,
            ] {
                if !self.u.contains(&d).map_err(|e| e.to_string())? {
                    return Err(format!("difference {d} of edge {{{a},{b}}} is outside U"));
                }
                if let Some(prev) = seen.insert(d.clone(), (a.clone(), b.clone())) {
                    return Err(format!(
                        "difference {d} occurs on {{{a},{b}}} and {{{},{}}}",
                        prev.0, prev.1
                    ));
                }
            }
        }
        if seen.len() != self.diffs.len() {
            return Err("recorded differences disagree with the edges".into());
        }
        for i in 0..self.cursor {
            let g = self.group.enumerate(i).map_err(|e| e.to_string())?;
            if !self.is_matched(&g) {
                return Err(format!("{g} processed but unmatched"));
            }
            if self.u.contains(&g).map_err(|e| e.to_string())? && !self.uses_difference(&g) {
                return Err(format!("{g} processed but not a difference"));
            }
        }
        let bound = 4 * (self.cursor + 1);
        if self.partner.len() as u64 > bound {
            return Err(format!(
                "{} matched vertices after {} steps",
                self.partner.len(),
                self.cursor
            ));
        }
        Ok(())
    }
}
