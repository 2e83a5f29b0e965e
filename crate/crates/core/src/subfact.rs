//! Embedding a regular 1-factorization of `K_{m'}[n']` into one of `K_m[n]`.
//!
//! An `H`-regular factorization of `Cay[H : H \ K]` lifts to
//! `Cay[G' × H : {0} × (H \ K)]` by copying every factor into each coset
//! `{x} × H`. With `G = (G1 × L1) × H`, `L = G1 × K` and
//! `S = G \ (H ∪ L)`, the sets `S` and `{0} × (H \ K)` partition `G \ L`, so
//! the ambient factorization of `Cay[G:S]` together with the lift is a
//! regular 1-factorization of `Cay[G : G \ L] = K_m[n]` that contains the
//! inner factorization.

use std::sync::Arc;

use crate::cardinal::Cardinal;
use crate::connsets::ConnectionSet;
use crate::error::{Error, Result};
use crate::factorization::{BaseView, BuildOptions, FactorId, Factorization, RegularFactorization};
use crate::groups::{Element, Group, SubgroupKind, SubgroupSpec};

/// The lift of an `H`-factorization to `G' × H`.
#[derive(Clone)]
pub struct LiftedFactorization {
    group: Group,
    left: Group,
    inner: Arc<dyn Factorization>,
}

impl LiftedFactorization {
    /// Lifts `inner` along `G' × H` with `G' = left`.
    pub fn lift(inner: Arc<dyn Factorization>, left: Group) -> LiftedFactorization {
        let group = Group::direct_product(left.clone(), inner.group().clone());
        LiftedFactorization { group, left, inner }
    }

    /// Lifts `inner` into an existing product group, whose right component
    /// must be the group of `inner`.
    pub fn lift_into(inner: Arc<dyn Factorization>, group: &Group) -> Result<LiftedFactorization> {
        match group.factors() {
            Some((left, right)) if right == inner.group() => {
                Ok(LiftedFactorization::lift(inner, left.clone()))
            }
            _ => Err(Error::ShapeMismatch(format!(
                "{} is not the right component of {group}",
                inner.group()
            ))),
        }
    }

    pub fn inner(&self) -> &Arc<dyn Factorization> {
        &self.inner
    }

    fn split<'a>(&self, v: &'a Element) -> Result<(&'a Element, &'a Element)> {
        self.group.validate(v)?;
        v.as_pair()
            .ok_or_else(|| Error::Internal(format!("{v} is not a pair")))
    }

    fn unwrap_id<'a>(&self, id: &'a FactorId) -> Result<&'a FactorId> {
        match id {
            FactorId::Lifted(f) => Ok(f),
            _ => Err(Error::InvalidFactor(id.to_string())),
        }
    }

    /// The inner label of `{x, y}`, if the edge lies in the lift.
    pub fn inner_label(&self, x: &Element, y: &Element) -> Result<Option<FactorId>> {
        let (x1, xh) = self.split(x)?;
        let (y1, yh) = self.split(y)?;
        if x1 != y1
            || xh == yh
            || !self
                .inner
                .in_connection_set(&self.inner.group().diff(xh, yh)?)?
        {
            return Ok(None);
        }
        self.inner.factor_of_edge(xh, yh).map(Some)
    }
}

impl Factorization for LiftedFactorization {
    fn group(&self) -> &Group {
        &self.group
    }

    fn describe_set(&self) -> String {
        format!("{{0}} x {}", self.inner.describe_set())
    }

    fn in_connection_set(&self, d: &Element) -> Result<bool> {
        let (d1, dh) = self.split(d)?;
        Ok(self.left.is_identity(d1) && self.inner.in_connection_set(dh)?)
    }

    fn factor_of_edge(&self, x: &Element, y: &Element) -> Result<FactorId> {
        self.inner_label(x, y)?
            .map(|f| FactorId::Lifted(Box::new(f)))
            .ok_or_else(|| Error::NotAnEdge(x.encode(), y.encode()))
    }

    fn partner(&self, id: &FactorId, v: &Element) -> Result<Element> {
        let f = self.unwrap_id(id)?;
        let (v1, vh) = self.split(v)?;
        Ok(Element::pair(v1.clone(), self.inner.partner(f, vh)?))
    }

    fn translate_id(&self, id: &FactorId, t: &Element) -> Result<FactorId> {
        let f = self.unwrap_id(id)?;
        let (_, th) = self.split(t)?;
        Ok(FactorId::Lifted(Box::new(self.inner.translate_id(f, th)?)))
    }

    fn base_views(&self) -> Vec<BaseView> {
        self.inner
            .base_views()
            .into_iter()
            .map(|mut b| {
                b.name = format!("inner {}", b.name);
                b
            })
            .collect()
    }

    fn fresh(&self) -> Result<Box<dyn Factorization>> {
        Ok(Box::new(LiftedFactorization {
            group: self.group.clone(),
            left: self.left.clone(),
            inner: Arc::from(self.inner.fresh()?),
        }))
    }
}

/// Choices left open by the construction.
#[derive(Debug, Clone, Default)]
pub struct NestedOptions {
    /// A group of order `n/n'`; defaults to `Z` or `C_k`.
    pub g1: Option<Group>,
    /// A group of order `m/m'`; defaults to `Z` or `C_k`.
    pub l1: Option<Group>,
    pub build: BuildOptions,
}

/// Parameters of an embedding `K_{m'}[n'] ⊆ K_m[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NestedShape {
    pub m: Cardinal,
    pub n: Cardinal,
    pub m_inner: Cardinal,
    pub n_inner: Cardinal,
}

pub struct NestedFactorization {
    group: Group,
    g1: Group,
    l1: Group,
    h: SubgroupSpec,
    l: SubgroupSpec,
    shape: NestedShape,
    ambient: RegularFactorization,
    lifted: LiftedFactorization,
}

fn default_group(order: Cardinal) -> Group {
    match order {
        Cardinal::CountablyInfinite => Group::Integers,
        Cardinal::Finite(k) => Group::Cyclic(k),
    }
}

/// Regular 1-factorization of `K_m[n]` containing `inner`, a regular
/// 1-factorization of `K_{m'}[n'] = Cay[H : H \ K]`.
pub fn nested(
    inner: Arc<dyn Factorization>,
    m: Cardinal,
    n: Cardinal,
    options: NestedOptions,
) -> Result<NestedFactorization> {
    let h_group = inner.group().clone();
    let k = inner.complement_subgroup().ok_or_else(|| {
        Error::ShapeMismatch(format!(
            "the inner connection set {} is not the complement of a subgroup",
            inner.describe_set()
        ))
    })?;
    let (m_inner, n_inner) = (k.index(), k.order());
    let g1_order = n_inner.quotient_of(n).ok_or_else(|| {
        Error::DivisibilityViolation(format!("n' = {n_inner} does not divide n = {n}"))
    })?;
    let l1_order = m_inner.quotient_of(m).ok_or_else(|| {
        Error::DivisibilityViolation(format!("m' = {m_inner} does not divide m = {m}"))
    })?;
    if m.product(n).is_finite() {
        return Err(Error::FinitenessViolation(format!(
            "m n = {} is finite",
            m.product(n)
        )));
    }

    let pick = |given: Option<Group>, order: Cardinal, name: &str| -> Result<Group> {
        let g = given.unwrap_or_else(|| default_group(order));
        if g.order() != order {
            return Err(Error::ShapeMismatch(format!(
                "{name} = {g} has order {}, expected {order}",
                g.order()
            )));
        }
        Ok(g)
    };
    let g1 = pick(options.g1, g1_order, "G1")?;
    let l1 = pick(options.l1, l1_order, "L1")?;

    // G' = G1 x L1 with trivial factors dropped; L restricted to G' is G1
    let (left, l_left) = match (g1.is_trivial(), l1.is_trivial()) {
        (false, false) => (
            Group::direct_product(g1.clone(), l1.clone()),
            SubgroupKind::Product(
                Box::new(SubgroupKind::Whole),
                Box::new(SubgroupKind::Trivial),
            ),
        ),
        (false, true) => (g1.clone(), SubgroupKind::Whole),
        (true, false) => (l1.clone(), SubgroupKind::Trivial),
        (true, true) => unreachable!("m n is infinite, so G1 x L1 x H is"),
    };
    let group = Group::direct_product(left.clone(), h_group);
    let h = SubgroupSpec::new(
        group.clone(),
        SubgroupKind::Product(
            Box::new(SubgroupKind::Trivial),
            Box::new(SubgroupKind::Whole),
        ),
    )?;
    let l = SubgroupSpec::new(
        group.clone(),
        SubgroupKind::Product(Box::new(l_left), Box::new(k.kind().clone())),
    )?;

    let ambient = RegularFactorization::build_with(
        group.clone(),
        ConnectionSet::complement_of_pair(h.clone(), l.clone())?,
        options.build,
    )?;
    let lifted = LiftedFactorization::lift(inner, left);
    Ok(NestedFactorization {
        group,
        g1,
        l1,
        h,
        l,
        shape: NestedShape {
            m,
            n,
            m_inner,
            n_inner,
        },
        ambient,
        lifted,
    })
}

impl NestedFactorization {
    pub fn shape(&self) -> NestedShape {
        self.shape
    }

    pub fn g1(&self) -> &Group {
        &self.g1
    }

    pub fn l1(&self) -> &Group {
        &self.l1
    }

    /// The embedded copy `{0} × H` of the inner group.
    pub fn h(&self) -> &SubgroupSpec {
        &self.h
    }

    /// The part subgroup: `Cay[G : G \ L] = K_m[n]`.
    pub fn part(&self) -> &SubgroupSpec {
        &self.l
    }

    pub fn ambient(&self) -> &RegularFactorization {
        &self.ambient
    }

    pub fn lifted(&self) -> &LiftedFactorization {
        &self.lifted
    }

    fn ambient_contains(&self, d: &Element) -> Result<bool> {
        self.ambient.in_connection_set(d)
    }
}

impl Factorization for NestedFactorization {
    fn group(&self) -> &Group {
        &self.group
    }

    fn describe_set(&self) -> String {
        format!("complement({})", self.l)
    }

    fn in_connection_set(&self, d: &Element) -> Result<bool> {
        self.group.validate(d)?;
        Ok(!self.l.contains(d))
    }

    fn factor_of_edge(&self, x: &Element, y: &Element) -> Result<FactorId> {
        let d = self.group.diff(x, y)?;
        if self.ambient_contains(&d)? {
            self.ambient.factor_of_edge(x, y)
        } else if self.lifted.in_connection_set(&d)? {
            self.lifted.factor_of_edge(x, y)
        } else {
            Err(Error::NotAnEdge(x.encode(), y.encode()))
        }
    }

    fn partner(&self, id: &FactorId, v: &Element) -> Result<Element> {
        match id {
            FactorId::Lifted(_) => self.lifted.partner(id, v),
            _ => self.ambient.partner(id, v),
        }
    }

    fn translate_id(&self, id: &FactorId, t: &Element) -> Result<FactorId> {
        match id {
            FactorId::Lifted(_) => self.lifted.translate_id(id, t),
            _ => self.ambient.translate_id(id, t),
        }
    }

    fn base_views(&self) -> Vec<BaseView> {
        let mut views = self.ambient.base_views();
        views.extend(self.lifted.base_views());
        views
    }

    fn fresh(&self) -> Result<Box<dyn Factorization>> {
        Ok(Box::new(NestedFactorization {
            group: self.group.clone(),
            g1: self.g1.clone(),
            l1: self.l1.clone(),
            h: self.h.clone(),
            l: self.l.clone(),
            shape: self.shape,
            ambient: self.ambient.fresh_handle()?,
            lifted: LiftedFactorization {
                group: self.lifted.group.clone(),
                left: self.lifted.left.clone(),
                inner: Arc::from(self.lifted.inner.fresh()?),
            },
        }))
    }

    fn complement_subgroup(&self) -> Option<SubgroupSpec> {
        Some(self.l.clone())
    }

    fn subfactor_label(&self, x: &Element, y: &Element) -> Result<Option<FactorId>> {
        self.lifted.inner_label(x, y)
    }

    fn connection_parts(&self, d: &Element) -> Option<Result<(bool, bool)>> {
        Some(
            self.ambient_contains(d)
                .and_then(|a| Ok((a, self.lifted.in_connection_set(d)?))),
        )
    }
}
