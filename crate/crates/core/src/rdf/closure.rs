//! RDFS closure restricted to the hierarchy rules:
//!
//! - `a subClassOf b`, `b subClassOf c` ⇒ `a subClassOf c`
//! - `p subPropertyOf q`, `q subPropertyOf r` ⇒ `p subPropertyOf r`
//! - `x type c1`, `c1 subClassOf c2` ⇒ `x type c2`
//! - `s p1 o`, `p1 subPropertyOf p2` ⇒ `s p2 o`
//!
//! Each pass computes the transitive reach of both hierarchies and applies
//! the two propagation rules through it; passes repeat until nothing new is
//! derived (a pass can create new hierarchy triples when a property is
//! declared a subproperty of `rdfs:subClassOf` and the like).

use std::collections::{BTreeMap, BTreeSet};

use super::graph::{transitive_reach, Graph, Key, TermId};
use super::term::Term;
use super::vocab;

fn edges(spo: &BTreeSet<Key>, predicate: Option<TermId>) -> BTreeMap<TermId, BTreeSet<TermId>> {
    let mut map: BTreeMap<TermId, BTreeSet<TermId>> = BTreeMap::new();
    if let Some(p) = predicate {
        for &(s, q, o) in spo {
            if q == p {
                map.entry(s).or_default().insert(o);
            }
        }
    }
    map
}

fn derive_pass(
    spo: &BTreeSet<Key>,
    terms: &[Term],
    rdf_type: Option<TermId>,
    sub_class: Option<TermId>,
    sub_property: Option<TermId>,
) -> Vec<Key> {
    let class_reach = transitive_reach(&edges(spo, sub_class));
    let prop_reach = transitive_reach(&edges(spo, sub_property));
    let mut derived = Vec::new();

    if let Some(sc) = sub_class {
        for (&a, ups) in &class_reach {
            derived.extend(ups.iter().map(|&b| (a, sc, b)));
        }
    }
    if let Some(sp) = sub_property {
        for (&a, ups) in &prop_reach {
            derived.extend(ups.iter().map(|&b| (a, sp, b)));
        }
    }
    if let Some(ty) = rdf_type {
        for &(x, p, c) in spo {
            if p == ty {
                if let Some(ups) = class_reach.get(&c) {
                    derived.extend(ups.iter().map(|&c2| (x, ty, c2)));
                }
            }
        }
    }
    for &(s, p, o) in spo {
        if let Some(ups) = prop_reach.get(&p) {
            // Only IRIs may appear as predicates.
            derived.extend(
                ups.iter()
                    .filter(|&&q| terms[q as usize].is_iri())
                    .map(|&q| (s, q, o)),
            );
        }
    }
    derived.retain(|k| !spo.contains(k));
    derived
}

/// Materializes the closure. The returned graph is flagged as closed.
pub fn compute_closure(graph: Graph) -> Graph {
    let (terms, ids, mut spo) = graph.into_parts();
    let lookup = |iri: &str| ids.get(&Term::named(iri)).copied();
    let (rdf_type, sub_class, sub_property) = (
        lookup(vocab::RDF_TYPE),
        lookup(vocab::RDFS_SUBCLASS_OF),
        lookup(vocab::RDFS_SUBPROPERTY_OF),
    );
    loop {
        let derived = derive_pass(&spo, &terms, rdf_type, sub_class, sub_property);
        if derived.is_empty() {
            break;
        }
        spo.extend(derived);
    }
    Graph::from_spo(terms, ids, spo, true)
}
