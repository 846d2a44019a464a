//! Well-known namespaces.

use crate::model::Iri;

macro_rules! namespace {
    ($ns:literal; $($name:ident, $func:ident => $local:literal;)*) => {
        pub const NS: &str = $ns;
        $(
            pub const $name: &str = concat!($ns, $local);
            pub fn $func() -> Iri {
                Iri::from_static($name)
            }
        )*
    };
}

pub mod rdf {
    use super::*;
    namespace! { "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
        TYPE, type_ => "type";
        PROPERTY, property => "Property";
        STATEMENT, statement => "Statement";
        SUBJECT, subject => "subject";
        PREDICATE, predicate => "predicate";
        OBJECT, object => "object";
        LANG_STRING, lang_string => "langString";
    }
}

pub mod rdfs {
    use super::*;
    namespace! { "http://www.w3.org/2000/01/rdf-schema#";
        CLASS, class => "Class";
        SUB_CLASS_OF, sub_class_of => "subClassOf";
        SUB_PROPERTY_OF, sub_property_of => "subPropertyOf";
        DOMAIN, domain => "domain";
        RANGE, range => "range";
        LABEL, label => "label";
        COMMENT, comment => "comment";
        DATATYPE, datatype => "Datatype";
        LITERAL, literal => "Literal";
    }
}

pub mod owl {
    use super::*;
    namespace! { "http://www.w3.org/2002/07/owl#";
        CLASS, class => "Class";
        THING, thing => "Thing";
        NOTHING, nothing => "Nothing";
        ONTOLOGY, ontology => "Ontology";
        OBJECT_PROPERTY, object_property => "ObjectProperty";
        DATATYPE_PROPERTY, datatype_property => "DatatypeProperty";
        ANNOTATION_PROPERTY, annotation_property => "AnnotationProperty";
        RESTRICTION, restriction => "Restriction";
        ON_PROPERTY, on_property => "onProperty";
        ON_CLASS, on_class => "onClass";
        SOME_VALUES_FROM, some_values_from => "someValuesFrom";
        ALL_VALUES_FROM, all_values_from => "allValuesFrom";
        HAS_VALUE, has_value => "hasValue";
        MIN_CARDINALITY, min_cardinality => "minCardinality";
        MAX_CARDINALITY, max_cardinality => "maxCardinality";
        CARDINALITY, cardinality => "cardinality";
        MIN_QUALIFIED_CARDINALITY, min_qualified_cardinality => "minQualifiedCardinality";
        MAX_QUALIFIED_CARDINALITY, max_qualified_cardinality => "maxQualifiedCardinality";
        QUALIFIED_CARDINALITY, qualified_cardinality => "qualifiedCardinality";
        TRANSITIVE_PROPERTY, transitive_property => "TransitiveProperty";
        SYMMETRIC_PROPERTY, symmetric_property => "SymmetricProperty";
        ASYMMETRIC_PROPERTY, asymmetric_property => "AsymmetricProperty";
        REFLEXIVE_PROPERTY, reflexive_property => "ReflexiveProperty";
        IRREFLEXIVE_PROPERTY, irreflexive_property => "IrreflexiveProperty";
        FUNCTIONAL_PROPERTY, functional_property => "FunctionalProperty";
        INVERSE_FUNCTIONAL_PROPERTY, inverse_functional_property => "InverseFunctionalProperty";
    }
}

pub mod skos {
    use super::*;
    namespace! { "http://www.w3.org/2004/02/skos/core#";
        CONCEPT, concept => "Concept";
        CONCEPT_SCHEME, concept_scheme => "ConceptScheme";
        BROADER, broader => "broader";
        NARROWER, narrower => "narrower";
        RELATED, related => "related";
        IN_SCHEME, in_scheme => "inScheme";
        HAS_TOP_CONCEPT, has_top_concept => "hasTopConcept";
        TOP_CONCEPT_OF, top_concept_of => "topConceptOf";
        PREF_LABEL, pref_label => "prefLabel";
        DEFINITION, definition => "definition";
    }
}

pub mod xsd {
    use super::*;
    namespace! { "http://www.w3.org/2001/XMLSchema#";
        STRING, string => "string";
        BOOLEAN, boolean => "boolean";
        INTEGER, integer => "integer";
        DECIMAL, decimal => "decimal";
        DOUBLE, double => "double";
        FLOAT, float => "float";
        NON_NEGATIVE_INTEGER, non_negative_integer => "nonNegativeInteger";
    }

    /// Datatypes whose lexical forms are read as numbers.
    pub fn is_numeric(datatype: &str) -> bool {
        let Some(local) = datatype.strip_prefix(NS) else {
            return false;
        };
        matches!(
            local,
            "integer"
                | "decimal"
                | "double"
                | "float"
                | "int"
                | "long"
                | "short"
                | "byte"
                | "nonNegativeInteger"
                | "positiveInteger"
                | "nonPositiveInteger"
                | "negativeInteger"
                | "unsignedInt"
                | "unsignedLong"
                | "unsignedShort"
                | "unsignedByte"
        )
    }
}

/// Default base of the extension vocabulary.
pub const RDFE_DEFAULT_BASE: &str = "http://purl.org/socialparticipation/rdfe/";

/// Prefixes every document may use without declaring them. `rdfe` maps to
/// the default extension base unless the parser is told otherwise.
pub const WELL_KNOWN_PREFIXES: [(&str, &str); 6] = [
    ("rdf", rdf::NS),
    ("rdfs", rdfs::NS),
    ("owl", owl::NS),
    ("skos", skos::NS),
    ("xsd", xsd::NS),
    ("rdfe", RDFE_DEFAULT_BASE),
];

/// Namespaces whose terms are treated as modelling vocabulary rather than
/// user data.
pub fn is_reserved(iri: &Iri, rdfe_base: &str) -> bool {
    let s = iri.as_str();
    [rdf::NS, rdfs::NS, owl::NS, skos::NS, xsd::NS, rdfe_base]
        .iter()
        .any(|ns| s.starts_with(ns))
}
