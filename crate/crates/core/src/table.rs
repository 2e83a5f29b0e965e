//! Explicit 1-factorizations of finite Cayley graphs `Cay[H : H \ K]`,
//! used as inner factorizations for embedding.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::connsets::ConnectionSet;
use crate::error::{Error, Result};
use crate::factorization::{BaseView, FactorId, Factorization};
use crate::groups::{Element, Group, SubgroupSpec};

/// Serialized form: element encodings as strings.
///
/// ```json
/// {"group": "C4", "subgroup": "{0}",
///  "factors": [[["0","1"],["2","3"]], [["0","2"],["1","3"]], [["0","3"],["1","2"]]]}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    pub group: String,
    pub subgroup: String,
    pub factors: Vec<Vec<[String; 2]>>,
}

#[derive(Debug, Clone)]
pub struct FactorTable {
    group: Group,
    k: SubgroupSpec,
    set: ConnectionSet,
    factors: Vec<Vec<(Element, Element)>>,
    partners: Vec<HashMap<Element, Element>>,
    edge_factor: HashMap<(Element, Element), usize>,
    // translate[f][i] = factor index of F_f + (element i of H)
    translate: Vec<Vec<usize>>,
    elements: Vec<Element>,
}

fn key(a: &Element, b: &Element) -> (Element, Element) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl FactorTable {
    /// Validates that `factors` is an `H`-regular 1-factorization of
    /// `Cay[H : H \ K]`.
    pub fn new(k: SubgroupSpec, factors: Vec<Vec<(Element, Element)>>) -> Result<FactorTable> {
        let group = k.parent().clone();
        let order = group
            .order()
            .finite()
            .ok_or_else(|| Error::InvalidTable(format!("{group} is infinite")))?;
        if k.is_whole() {
            return Err(Error::InvalidTable("K = H leaves no edges".into()));
        }
        let elements = group.window(order as usize);
        let set = ConnectionSet::complement(k.clone());

        let mut partners = Vec::with_capacity(factors.len());
        let mut edge_factor = HashMap::new();
        for (f, edges) in factors.iter().enumerate() {
            let mut partner = HashMap::new();
            for (a, b) in edges {
                group.validate(a)?;
                group.validate(b)?;
                if a == b || !set.contains(&group.diff(a, b)?)? {
                    return Err(Error::InvalidTable(format!(
                        "{{{a},{b}}} in factor {f} is not an edge"
                    )));
                }
                for v in [a, b] {
                    if partner.contains_key(v) {
                        return Err(Error::InvalidTable(format!("factor {f} meets {v} twice")));
                    }
                }
                partner.insert(a.clone(), b.clone());
                partner.insert(b.clone(), a.clone());
                if let Some(other) = edge_factor.insert(key(a, b), f) {
                    return Err(Error::InvalidTable(format!(
                        "{{{a},{b}}} lies in factors {other} and {f}"
                    )));
                }
            }
            if partner.len() as u64 != order {
                return Err(Error::InvalidTable(format!(
                    "factor {f} is not a perfect matching"
                )));
            }
            partners.push(partner);
        }
        for (i, a) in elements.iter().enumerate() {
            for b in &elements[i + 1..] {
                if set.contains(&group.diff(a, b)?)? && !edge_factor.contains_key(&key(a, b)) {
                    return Err(Error::InvalidTable(format!(
                        "edge {{{a},{b}}} is in no factor"
                    )));
                }
            }
        }

        let mut translate = Vec::with_capacity(factors.len());
        for (f, edges) in factors.iter().enumerate() {
            let mut row = Vec::with_capacity(elements.len());
            for t in &elements {
                let mut image = None;
                for (a, b) in edges {
                    let e = key(&group.op(a, t)?, &group.op(b, t)?);
                    let j = edge_factor[&e];
                    match image {
                        None => image = Some(j),
                        Some(i) if i == j => {}
                        Some(_) => {
                            return Err(Error::InvalidTable(format!(
                                "factor {f} translated by {t} is not a factor"
                            )))
                        }
                    }
                }
                row.push(image.unwrap_or(f));
            }
            translate.push(row);
        }

        Ok(FactorTable {
            group,
            k,
            set,
            factors,
            partners,
            edge_factor,
            translate,
            elements,
        })
    }

    /// The factors `Cay[H : {s}]`, one per `s ∈ H \ K`. Needs every element
    /// of `H \ K` to be an involution.
    pub fn from_involutions(k: SubgroupSpec) -> Result<FactorTable> {
        let group = k.parent().clone();
        let order = group
            .order()
            .finite()
            .ok_or_else(|| Error::InvalidTable(format!("{group} is infinite")))?;
        let elements = group.window(order as usize);
        let mut factors = Vec::new();
        for s in elements.iter().filter(|s| !k.contains(s)) {
            if !group.is_involution(s)? {
                return Err(Error::InvalidTable(format!(
                    "{s} is not an involution, so a factor table is needed"
                )));
            }
            let mut seen = std::collections::HashSet::new();
            let mut edges = Vec::new();
            for v in &elements {
                if seen.contains(v) {
                    continue;
                }
                let w = group.op(s, v)?;
                seen.insert(v.clone());
                seen.insert(w.clone());
                edges.push((v.clone(), w));
            }
            factors.push(edges);
        }
        FactorTable::new(k, factors)
    }

    pub fn from_spec(spec: &TableSpec) -> Result<FactorTable> {
        let group = Group::parse(&spec.group)?;
        let k = SubgroupSpec::parse(&group, &spec.subgroup)?;
        let factors = spec
            .factors
            .iter()
            .map(|edges| {
                edges
                    .iter()
                    .map(|[a, b]| Ok((group.parse_element(a)?, group.parse_element(b)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FactorTable::new(k, factors)
    }

    pub fn from_json(text: &str) -> Result<FactorTable> {
        let spec: TableSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidTable(e.to_string()))?;
        FactorTable::from_spec(&spec)
    }

    pub fn to_spec(&self) -> TableSpec {
        TableSpec {
            group: self.group.to_string(),
            subgroup: self.k.to_string(),
            factors: self
                .factors
                .iter()
                .map(|edges| {
                    edges
                        .iter()
                        .map(|(a, b)| [a.encode(), b.encode()])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Vec<(Element, Element)>] {
        &self.factors
    }

    fn index(&self, id: &FactorId) -> Result<usize> {
        match id {
            FactorId::Listed(k) if *k < self.factors.len() => Ok(*k),
            _ => Err(Error::InvalidFactor(id.to_string())),
        }
    }
}

impl Factorization for FactorTable {
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
        self.group.validate(x)?;
        self.group.validate(y)?;
        self.edge_factor
            .get(&key(x, y))
            .map(|&k| FactorId::Listed(k))
            .ok_or_else(|| Error::NotAnEdge(x.encode(), y.encode()))
    }

    fn partner(&self, id: &FactorId, v: &Element) -> Result<Element> {
        self.group.validate(v)?;
        let k = self.index(id)?;
        Ok(self.partners[k][v].clone())
    }

    fn translate_id(&self, id: &FactorId, t: &Element) -> Result<FactorId> {
        let k = self.index(id)?;
        let i = self.group.index_of(t)? as usize;
        debug_assert_eq!(self.elements[i], *t);
        Ok(FactorId::Listed(self.translate[k][i]))
    }

    fn base_views(&self) -> Vec<BaseView> {
        Vec::new()
    }

    fn fresh(&self) -> Result<Box<dyn Factorization>> {
        Ok(Box::new(self.clone()))
    }

    fn complement_subgroup(&self) -> Option<SubgroupSpec> {
        Some(self.k.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Element {
        Element::Int(n)
    }

    fn k4_over_c4() -> TableSpec {
        let e = |a: &str, b: &str| [a.to_string(), b.to_string()];
        TableSpec {
            group: "C4".into(),
            subgroup: "{0}".into(),
            factors: vec![
                vec![e("0", "1"), e("2", "3")],
                vec![e("0", "2"), e("1", "3")],
                vec![e("0", "3"), e("1", "2")],
            ],
        }
    }

    #[test]
    fn k2_from_involutions() {
        let t = FactorTable::from_involutions(SubgroupSpec::trivial(Group::Cyclic(2))).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(
            t.factor_of_edge(&int(1), &int(0)).unwrap(),
            FactorId::Listed(0)
        );
        assert_eq!(t.partner(&FactorId::Listed(0), &int(0)).unwrap(), int(1));
        assert_eq!(
            t.translate_id(&FactorId::Listed(0), &int(1)).unwrap(),
            FactorId::Listed(0)
        );
    }

    #[test]
    fn k4_over_c4_translation_map() {
        let t = FactorTable::from_spec(&k4_over_c4()).unwrap();
        // {01,23} + 1 = {12,30}
        assert_eq!(
            t.translate_id(&FactorId::Listed(0), &int(1)).unwrap(),
            FactorId::Listed(2)
        );
        assert_eq!(
            t.translate_id(&FactorId::Listed(1), &int(1)).unwrap(),
            FactorId::Listed(1)
        );
        assert_eq!(
            t.translate_id(&FactorId::Listed(2), &int(3)).unwrap(),
            FactorId::Listed(0)
        );
        let json = serde_json::to_string(&t.to_spec()).unwrap();
        let back = FactorTable::from_json(&json).unwrap();
        assert_eq!(back.factors(), t.factors());
    }

    #[test]
    fn c4_needs_a_table() {
        assert!(matches!(
            FactorTable::from_involutions(SubgroupSpec::trivial(Group::Cyclic(4))),
            Err(Error::InvalidTable(_))
        ));
    }

    #[test]
    fn rejects_broken_tables() {
        let mut spec = k4_over_c4();
        spec.factors.pop();
        assert!(
            matches!(FactorTable::from_spec(&spec), Err(Error::InvalidTable(m)) if m.contains("no factor"))
        );

        let mut spec = k4_over_c4();
        spec.factors[0][1] = ["1".into(), "3".into()];
        assert!(matches!(
            FactorTable::from_spec(&spec),
            Err(Error::InvalidTable(_))
        ));

        // K_{2}[2] over C4 with K = 2C4: {0,2} is not an edge
        let spec = TableSpec {
            group: "C4".into(),
            subgroup: "2C4".into(),
            factors: vec![vec![["0".into(), "2".into()], ["1".into(), "3".into()]]],
        };
        assert!(
            matches!(FactorTable::from_spec(&spec), Err(Error::InvalidTable(m)) if m.contains("not an edge"))
        );

        let e = |a: &str, b: &str| [a.to_string(), b.to_string()];
        let c2c2 = TableSpec {
            group: "C2 x C2".into(),
            subgroup: "{0}".into(),
            factors: vec![
                vec![e("(0,0)", "(0,1)"), e("(1,0)", "(1,1)")],
                vec![e("(0,0)", "(1,0)"), e("(0,1)", "(1,1)")],
                vec![e("(0,0)", "(1,1)"), e("(0,1)", "(1,0)")],
            ],
        };
        assert!(FactorTable::from_spec(&c2c2).is_ok());
    }

    #[test]
    fn non_regular_decomposition_is_rejected() {
        // a 1-factorization of K_6 that translation by 1 does not preserve
        let e = |a: i64, b: i64| [a.to_string(), b.to_string()];
        let spec = TableSpec {
            group: "C6".into(),
            subgroup: "{0}".into(),
            factors: vec![
                vec![e(0, 1), e(2, 3), e(4, 5)],
                vec![e(0, 2), e(1, 5), e(3, 4)],
                vec![e(0, 3), e(1, 4), e(2, 5)],
                vec![e(0, 4), e(1, 2), e(3, 5)],
                vec![e(0, 5), e(1, 3), e(2, 4)],
            ],
        };
        assert!(matches!(
            FactorTable::from_spec(&spec),
            Err(Error::InvalidTable(m)) if m.contains("translated")
        ));
    }
}
