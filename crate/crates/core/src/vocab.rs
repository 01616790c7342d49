//! IRI constants for the vocabularies the knowledge graph uses.
//!
//! OBO-style names are composed as `<namespace><local_name>` (for example
//! `OBI_has_specified_output`) rather than resolved to numeric OBO
//! identifiers; an alias table can remap them when loading.

use crate::rdf::Term;

pub const MORE_NS: &str = "https://w3id.org/more#";
pub const OBI_NS: &str = "http://purl.obolibrary.org/obo/OBI_";
pub const IAO_NS: &str = "http://purl.obolibrary.org/obo/IAO_";
pub const BFO_NS: &str = "http://purl.obolibrary.org/obo/BFO_";
pub const PATO_NS: &str = "http://purl.obolibrary.org/obo/PATO_";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";

/// Base under which ingestion mints instance IRIs.
pub const KG_BASE: &str = "https://w3id.org/more/kg/";

macro_rules! iris {
    ($($name:ident = $ns:literal $local:literal;)*) => {
        $(pub const $name: &str = concat!($ns, $local);)*
    };
}

iris! {
    RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#" "type";
    RDF_PROPERTY = "http://www.w3.org/1999/02/22-rdf-syntax-ns#" "Property";
    RDF_LANG_STRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#" "langString";
    RDFS_SUBCLASS_OF = "http://www.w3.org/2000/01/rdf-schema#" "subClassOf";
    RDFS_CLASS = "http://www.w3.org/2000/01/rdf-schema#" "Class";
    RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#" "label";

    XSD_STRING = "http://www.w3.org/2001/XMLSchema#" "string";
    XSD_INTEGER = "http://www.w3.org/2001/XMLSchema#" "integer";
    XSD_DECIMAL = "http://www.w3.org/2001/XMLSchema#" "decimal";
    XSD_DOUBLE = "http://www.w3.org/2001/XMLSchema#" "double";
    XSD_FLOAT = "http://www.w3.org/2001/XMLSchema#" "float";
    XSD_BOOLEAN = "http://www.w3.org/2001/XMLSchema#" "boolean";
    XSD_DATE = "http://www.w3.org/2001/XMLSchema#" "date";
    XSD_INT = "http://www.w3.org/2001/XMLSchema#" "int";
    XSD_LONG = "http://www.w3.org/2001/XMLSchema#" "long";
    XSD_NON_NEGATIVE_INTEGER = "http://www.w3.org/2001/XMLSchema#" "nonNegativeInteger";

    // MO|RE classes
    MORE_STUDY = "https://w3id.org/more#" "Study";
    MORE_TEST_ITEM = "https://w3id.org/more#" "TestItem";
    MORE_TEST_PROCESS = "https://w3id.org/more#" "TestProcess";
    MORE_HANDGRIP_TEST_PROCESS = "https://w3id.org/more#" "HandgripTestProcess";
    MORE_PERSON = "https://w3id.org/more#" "Person";

    // MO|RE properties
    MORE_MEASURES_DISPOSITION = "https://w3id.org/more#" "measures_disposition";
    MORE_HAS_AGE = "https://w3id.org/more#" "hasAge";
    MORE_HAS_HEIGHT = "https://w3id.org/more#" "hasHeight";
    MORE_HAS_WEIGHT = "https://w3id.org/more#" "hasWeight";
    MORE_HAS_BMI = "https://w3id.org/more#" "hasBMI";
    MORE_HAS_SEX = "https://w3id.org/more#" "hasSex";
    MORE_HAS_POSTAL_CODE = "https://w3id.org/more#" "hasPostalCode";
    MORE_PART_OF_STUDY = "https://w3id.org/more#" "partOfStudy";
    MORE_CONDUCTED_IN_YEAR = "https://w3id.org/more#" "conductedInYear";
    MORE_YEAR_START = "https://w3id.org/more#" "yearStart";
    MORE_YEAR_END = "https://w3id.org/more#" "yearEnd";
    MORE_DOI = "https://w3id.org/more#" "doi";
    MORE_SESSION_DATE = "https://w3id.org/more#" "sessionDate";
    MORE_TRIAL = "https://w3id.org/more#" "trial";
    MORE_SENSITIVITY_LEVEL = "https://w3id.org/more#" "sensitivityLevel";

    // IAO
    IAO_INFORMATION_CONTENT_ENTITY = "http://purl.obolibrary.org/obo/IAO_" "InformationContentEntity";
    IAO_PLAN_SPECIFICATION = "http://purl.obolibrary.org/obo/IAO_" "PlanSpecification";
    IAO_PLAN = "http://purl.obolibrary.org/obo/IAO_" "Plan";
    IAO_MEASUREMENT_DATUM = "http://purl.obolibrary.org/obo/IAO_" "MeasurementDatum";
    IAO_SCALAR_MEASUREMENT_DATUM = "http://purl.obolibrary.org/obo/IAO_" "ScalarMeasurementDatum";
    IAO_IS_ABOUT = "http://purl.obolibrary.org/obo/IAO_" "is_about";
    IAO_HAS_MEASUREMENT_UNIT_LABEL = "http://purl.obolibrary.org/obo/IAO_" "has_measurement_unit_label";

    // OBI
    OBI_ASSAY = "http://purl.obolibrary.org/obo/OBI_" "Assay";
    OBI_EVALUANT_ROLE = "http://purl.obolibrary.org/obo/OBI_" "EvaluantRole";
    OBI_VALUE_SPECIFICATION = "http://purl.obolibrary.org/obo/OBI_" "ValueSpecification";
    OBI_HAS_SPECIFIED_OUTPUT = "http://purl.obolibrary.org/obo/OBI_" "has_specified_output";
    OBI_HAS_VALUE_SPECIFICATION = "http://purl.obolibrary.org/obo/OBI_" "has_value_specification";
    OBI_SPECIFIES_VALUE_OF = "http://purl.obolibrary.org/obo/OBI_" "specifies_value_of";
    OBI_HAS_SPECIFIED_NUMERIC_VALUE = "http://purl.obolibrary.org/obo/OBI_" "has_specified_numeric_value";
    OBI_HAS_ROLE = "http://purl.obolibrary.org/obo/OBI_" "has_role";
    OBI_HAS_PARTICIPANT = "http://purl.obolibrary.org/obo/OBI_" "has_participant";
    OBI_REALIZES = "http://purl.obolibrary.org/obo/OBI_" "realizes";

    // BFO
    BFO_ENTITY = "http://purl.obolibrary.org/obo/BFO_" "Entity";
    BFO_CONTINUANT = "http://purl.obolibrary.org/obo/BFO_" "Continuant";
    BFO_OCCURRENT = "http://purl.obolibrary.org/obo/BFO_" "Occurrent";
    BFO_INDEPENDENT_CONTINUANT = "http://purl.obolibrary.org/obo/BFO_" "IndependentContinuant";
    BFO_SPECIFICALLY_DEPENDENT_CONTINUANT = "http://purl.obolibrary.org/obo/BFO_" "SpecificallyDependentContinuant";
    BFO_GENERICALLY_DEPENDENT_CONTINUANT = "http://purl.obolibrary.org/obo/BFO_" "GenericallyDependentContinuant";
    BFO_MATERIAL_ENTITY = "http://purl.obolibrary.org/obo/BFO_" "MaterialEntity";
    BFO_PROCESS = "http://purl.obolibrary.org/obo/BFO_" "Process";
    BFO_QUALITY = "http://purl.obolibrary.org/obo/BFO_" "Quality";
    BFO_REALIZABLE_ENTITY = "http://purl.obolibrary.org/obo/BFO_" "RealizableEntity";
    BFO_DISPOSITION = "http://purl.obolibrary.org/obo/BFO_" "Disposition";
    BFO_ROLE = "http://purl.obolibrary.org/obo/BFO_" "Role";
    BFO_CONCRETIZES = "http://purl.obolibrary.org/obo/BFO_" "concretizes";
    BFO_INHERES_IN = "http://purl.obolibrary.org/obo/BFO_" "inheres_in";

    // PATO
    PATO_EXECUTES = "http://purl.obolibrary.org/obo/PATO_" "executes";
}

pub fn term(iri: &'static str) -> Term {
    Term::named(iri)
}

pub fn more(local: &str) -> Term {
    Term::Iri(format!("{MORE_NS}{local}").into())
}

pub fn is_numeric_datatype(datatype: &str) -> bool {
    matches!(
        datatype,
        XSD_INTEGER | XSD_DECIMAL | XSD_DOUBLE | XSD_FLOAT | XSD_INT | XSD_LONG | XSD_NON_NEGATIVE_INTEGER
    )
}

pub fn is_integer_datatype(datatype: &str) -> bool {
    matches!(datatype, XSD_INTEGER | XSD_INT | XSD_LONG | XSD_NON_NEGATIVE_INTEGER)
}
