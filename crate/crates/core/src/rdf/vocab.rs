//! Reserved IRIs understood by the schema index and the closure.

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const RDFS_SUBPROPERTY_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subPropertyOf";
pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";

/// Predicates whose triples describe the schema rather than an entity.
pub fn is_schema_predicate(iri: &str) -> bool {
    iri == RDFS_SUBCLASS_OF || iri == RDFS_SUBPROPERTY_OF
}
