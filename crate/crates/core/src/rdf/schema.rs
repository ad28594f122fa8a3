//! Class and property hierarchies extracted from a graph.
//!
//! Cycles in `subClassOf` / `subPropertyOf` are tolerated: members of a
//! cycle are treated as equivalent, so none of them is a *strict* ancestor
//! of another and direct edges are computed between equivalence classes.

use std::collections::{BTreeMap, BTreeSet};

use super::graph::{transitive_reach, Graph};
use super::term::Term;
use super::vocab;

type Hierarchy = BTreeMap<Term, BTreeSet<Term>>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchemaIndex {
    subclass_edges: Hierarchy,
    subproperty_edges: Hierarchy,
    class_ancestors: Hierarchy,
    property_ancestors: Hierarchy,
    type_map: Hierarchy,
    domains: Hierarchy,
}

fn pairs(graph: &Graph, predicate: &str) -> Hierarchy {
    let mut map: Hierarchy = BTreeMap::new();
    for t in graph.match_triples(None, Some(&Term::named(predicate)), None) {
        let (s, _, o) = t.into_parts();
        map.entry(s).or_default().insert(o);
    }
    map
}

/// Strict ancestors: reachable but not mutually reachable.
fn strict(ancestors: &Hierarchy, node: &Term) -> BTreeSet<Term> {
    let Some(up) = ancestors.get(node) else {
        return BTreeSet::new();
    };
    up.iter()
        .filter(|a| *a != node && !ancestors.get(*a).is_some_and(|back| back.contains(node)))
        .cloned()
        .collect()
}

/// Direct edges: strict ancestors with no other strict ancestor in between.
fn direct_edges(ancestors: &Hierarchy) -> Hierarchy {
    let mut direct = BTreeMap::new();
    for node in ancestors.keys() {
        let above = strict(ancestors, node);
        let nearest: BTreeSet<Term> = above
            .iter()
            .filter(|candidate| {
                !above
                    .iter()
                    .any(|mid| strict(ancestors, mid).contains(*candidate))
            })
            .cloned()
            .collect();
        if !nearest.is_empty() {
            direct.insert(node.clone(), nearest);
        }
    }
    direct
}

impl SchemaIndex {
    pub fn from_graph(graph: &Graph) -> SchemaIndex {
        let class_ancestors = transitive_reach(&pairs(graph, vocab::RDFS_SUBCLASS_OF));
        let property_ancestors = transitive_reach(&pairs(graph, vocab::RDFS_SUBPROPERTY_OF));
        SchemaIndex {
            subclass_edges: direct_edges(&class_ancestors),
            subproperty_edges: direct_edges(&property_ancestors),
            class_ancestors,
            property_ancestors,
            type_map: pairs(graph, vocab::RDF_TYPE),
            domains: pairs(graph, vocab::RDFS_DOMAIN),
        }
    }

    /// Direct superclasses of `class`, sorted.
    pub fn direct_superclasses(&self, class: &Term) -> Vec<Term> {
        self.subclass_edges
            .get(class)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn direct_superproperties(&self, property: &Term) -> Vec<Term> {
        self.subproperty_edges
            .get(property)
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// True if `sub` lies strictly below `sup` in the class hierarchy.
    pub fn is_strict_subclass(&self, sub: &Term, sup: &Term) -> bool {
        sub != sup
            && self
                .class_ancestors
                .get(sub)
                .is_some_and(|a| a.contains(sup))
            && !self
                .class_ancestors
                .get(sup)
                .is_some_and(|a| a.contains(sub))
    }

    pub fn is_strict_subproperty(&self, sub: &Term, sup: &Term) -> bool {
        sub != sup
            && self
                .property_ancestors
                .get(sub)
                .is_some_and(|a| a.contains(sup))
            && !self
                .property_ancestors
                .get(sup)
                .is_some_and(|a| a.contains(sub))
    }

    /// `rdf:type` classes recorded for `entity`.
    pub fn types_of(&self, entity: &Term) -> Option<&BTreeSet<Term>> {
        self.type_map.get(entity)
    }

    /// `rdfs:domain` classes declared for `property`.
    pub fn domains_of(&self, property: &Term) -> Option<&BTreeSet<Term>> {
        self.domains.get(property)
    }

    /// Classes of `classes` that are not a strict superclass of another member.
    pub fn most_specific<'a, I>(&self, classes: I) -> Vec<Term>
    where
        I: IntoIterator<Item = &'a Term>,
    {
        let set: BTreeSet<&Term> = classes.into_iter().collect();
        set.iter()
            .filter(|c| !set.iter().any(|other| self.is_strict_subclass(other, c)))
            .map(|c| (*c).clone())
            .collect()
    }

    pub fn subclass_edges(&self) -> &BTreeMap<Term, BTreeSet<Term>> {
        &self.subclass_edges
    }

    pub fn subproperty_edges(&self) -> &BTreeMap<Term, BTreeSet<Term>> {
        &self.subproperty_edges
    }

    pub fn type_map(&self) -> &BTreeMap<Term, BTreeSet<Term>> {
        &self.type_map
    }
}
