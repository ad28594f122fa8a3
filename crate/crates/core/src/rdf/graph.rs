//! In-memory triple store with three index orderings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::ops::RangeInclusive;

use super::schema::SchemaIndex;
use super::term::{Term, Triple};
use super::vocab;

pub type TermId = u32;
pub(crate) type Key = (TermId, TermId, TermId);

/// Which index a lookup scans. Keys are stored permuted into the index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexOrder {
    Spo,
    Pos,
    Osp,
}

impl IndexOrder {
    pub const ALL: [IndexOrder; 3] = [IndexOrder::Spo, IndexOrder::Pos, IndexOrder::Osp];
}

/// Term dictionary plus SPO/POS/OSP indexes over the same triple set.
///
/// A graph is built once (optionally closed once) and is read-only afterwards.
#[derive(Debug, Clone)]
pub struct Graph {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    spo: BTreeSet<Key>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    entities: BTreeSet<TermId>,
    schema: SchemaIndex,
    closure_applied: bool,
}

fn prefix_range(a: Option<TermId>, b: Option<TermId>) -> RangeInclusive<Key> {
    match (a, b) {
        (Some(a), Some(b)) => (a, b, 0)..=(a, b, TermId::MAX),
        (Some(a), None) => (a, 0, 0)..=(a, TermId::MAX, TermId::MAX),
        _ => (0, 0, 0)..=(TermId::MAX, TermId::MAX, TermId::MAX),
    }
}

/// Nodes reachable from each node in one or more steps.
pub(crate) fn transitive_reach<T: Ord + Clone>(
    edges: &BTreeMap<T, BTreeSet<T>>,
) -> BTreeMap<T, BTreeSet<T>> {
    let mut reach = BTreeMap::new();
    for start in edges.keys() {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<&T> = edges[start].iter().collect();
        while let Some(node) = queue.pop_front() {
            if seen.insert(node.clone()) {
                if let Some(next) = edges.get(node) {
                    queue.extend(next.iter());
                }
            }
        }
        reach.insert(start.clone(), seen);
    }
    reach
}

impl Graph {
    /// Builds the indexes, removing duplicate triples.
    pub fn build<I: IntoIterator<Item = Triple>>(triples: I) -> Graph {
        let mut terms = Vec::new();
        let mut ids = HashMap::new();
        let mut intern = |t: Term| -> TermId {
            if let Some(id) = ids.get(&t) {
                return *id;
            }
            let id = TermId::try_from(terms.len()).expect("term dictionary overflow");
            terms.push(t.clone());
            ids.insert(t, id);
            id
        };
        let mut spo = BTreeSet::new();
        for triple in triples {
            let (s, p, o) = triple.into_parts();
            spo.insert((intern(s), intern(p), intern(o)));
        }
        Graph::from_spo(terms, ids, spo, false)
    }

    pub(crate) fn from_spo(
        terms: Vec<Term>,
        ids: HashMap<Term, TermId>,
        spo: BTreeSet<Key>,
        closure_applied: bool,
    ) -> Graph {
        let pos = spo.iter().map(|&(s, p, o)| (p, o, s)).collect();
        let osp = spo.iter().map(|&(s, p, o)| (o, s, p)).collect();
        let schema_preds: Vec<TermId> = [vocab::RDFS_SUBCLASS_OF, vocab::RDFS_SUBPROPERTY_OF]
            .iter()
            .filter_map(|iri| ids.get(&Term::named(iri)).copied())
            .collect();
        let entities = spo
            .iter()
            .filter(|(_, p, _)| !schema_preds.contains(p))
            .map(|&(s, _, _)| s)
            .collect();
        let mut graph = Graph {
            terms,
            ids,
            spo,
            pos,
            osp,
            entities,
            schema: SchemaIndex::default(),
            closure_applied,
        };
        graph.schema = SchemaIndex::from_graph(&graph);
        graph
    }

    pub(crate) fn into_parts(self) -> (Vec<Term>, HashMap<Term, TermId>, BTreeSet<Key>) {
        (self.terms, self.ids, self.spo)
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closure_applied
    }

    pub fn schema(&self) -> &SchemaIndex {
        &self.schema
    }

    pub fn term_id(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    pub(crate) fn triple_of(&self, (s, p, o): Key) -> Triple {
        Triple::new(
            self.term(s).clone(),
            self.term(p).clone(),
            self.term(o).clone(),
        )
        .expect("stored triples are valid")
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        match (
            self.term_id(triple.subject()),
            self.term_id(triple.predicate()),
            self.term_id(triple.object()),
        ) {
            (Some(s), Some(p), Some(o)) => self.spo.contains(&(s, p, o)),
            _ => false,
        }
    }

    /// All triples in subject-predicate-object order.
    pub fn triples(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().map(|&k| self.triple_of(k))
    }

    /// Distinct terms occurring in any position.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter()
    }

    /// Lookup on ids; yields keys in SPO order. Picks the index whose prefix
    /// covers the most bound positions.
    pub(crate) fn match_ids(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Box<dyn Iterator<Item = Key> + '_> {
        let order = match (s.is_some(), p.is_some(), o.is_some()) {
            (true, true, true) => {
                let key = (s.unwrap(), p.unwrap(), o.unwrap());
                return Box::new(self.spo.contains(&key).then_some(key).into_iter());
            }
            (true, true, false) | (true, false, false) | (false, false, false) => IndexOrder::Spo,
            (false, true, _) => IndexOrder::Pos,
            (_, false, true) => IndexOrder::Osp,
        };
        self.match_ids_in(order, s, p, o)
    }

    /// Lookup through a specific index. Bound positions outside the index
    /// prefix are checked by filtering.
    pub(crate) fn match_ids_in(
        &self,
        order: IndexOrder,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Box<dyn Iterator<Item = Key> + '_> {
        let accept = move |(ks, kp, ko): Key| {
            s.is_none_or(|v| v == ks) && p.is_none_or(|v| v == kp) && o.is_none_or(|v| v == ko)
        };
        match order {
            IndexOrder::Spo => {
                let range = prefix_range(s, s.and(p));
                Box::new(self.spo.range(range).copied().filter(move |&k| accept(k)))
            }
            IndexOrder::Pos => {
                let range = prefix_range(p, p.and(o));
                Box::new(
                    self.pos
                        .range(range)
                        .map(|&(p, o, s)| (s, p, o))
                        .filter(move |&k| accept(k)),
                )
            }
            IndexOrder::Osp => {
                let range = prefix_range(o, o.and(s));
                Box::new(
                    self.osp
                        .range(range)
                        .map(|&(o, s, p)| (s, p, o))
                        .filter(move |&k| accept(k)),
                )
            }
        }
    }

    fn resolve(&self, term: Option<&Term>) -> Result<Option<TermId>, ()> {
        match term {
            None => Ok(None),
            Some(t) => self.term_id(t).map(Some).ok_or(()),
        }
    }

    /// Every triple agreeing with the bound positions.
    pub fn match_triples(
        &self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Box<dyn Iterator<Item = Triple> + '_> {
        match (self.resolve(s), self.resolve(p), self.resolve(o)) {
            (Ok(s), Ok(p), Ok(o)) => Box::new(self.match_ids(s, p, o).map(|k| self.triple_of(k))),
            _ => Box::new(std::iter::empty()),
        }
    }

    /// Same as [`Graph::match_triples`] but forced through one index.
    pub fn match_triples_in(
        &self,
        order: IndexOrder,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Vec<Triple> {
        match (self.resolve(s), self.resolve(p), self.resolve(o)) {
            (Ok(s), Ok(p), Ok(o)) => self
                .match_ids_in(order, s, p, o)
                .map(|k| self.triple_of(k))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Subjects of at least one non-schema triple.
    pub fn entities(&self) -> impl Iterator<Item = &Term> {
        self.entities.iter().map(|&id| self.term(id))
    }

    pub fn is_entity(&self, term: &Term) -> bool {
        self.term_id(term)
            .is_some_and(|id| self.entities.contains(&id))
    }

    pub fn count_entities(&self) -> usize {
        self.entities.len()
    }

    /// Number of distinct subjects `e` with `<e, p, o>` in the graph.
    pub fn count_entities_with_fact(&self, p: &Term, o: &Term) -> usize {
        match (self.term_id(p), self.term_id(o)) {
            // (p, o, s) keys are unique per subject.
            (Some(p), Some(o)) => self.pos.range(prefix_range(Some(p), Some(o))).count(),
            _ => 0,
        }
    }

    /// Number of distinct subjects holding any triple with predicate `p`.
    pub fn count_entities_with_predicate(&self, p: &Term) -> usize {
        let Some(p) = self.term_id(p) else { return 0 };
        self.pos
            .range(prefix_range(Some(p), None))
            .map(|&(_, _, s)| s)
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn count_triples_with_object(&self, o: &Term) -> usize {
        match self.term_id(o) {
            Some(o) => self.osp.range(prefix_range(Some(o), None)).count(),
            None => 0,
        }
    }

    #[cfg(test)]
    pub(crate) fn index_sizes(&self) -> (usize, usize, usize) {
        (self.spo.len(), self.pos.len(), self.osp.len())
    }
}

pub fn build_graph(triples: Vec<Triple>) -> Graph {
    Graph::build(triples)
}
