//! Core RDF terms: IRIs, blank nodes, literals and triples.

use std::fmt;

use thiserror::Error;

use crate::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI <{0}> has no scheme")]
    MissingScheme(String),
    #[error("IRI <{0}> contains a forbidden character {1:?}")]
    ForbiddenCharacter(String, char),
    #[error("invalid blank node identifier {0:?}")]
    InvalidBlankId(String),
    #[error("literal with datatype rdf:langString needs a language tag")]
    LangStringWithoutLanguage,
    #[error("invalid language tag {0:?}")]
    InvalidLanguage(String),
    #[error("a literal cannot be the subject of a triple")]
    LiteralSubject,
}

/// An absolute IRI. Only the scheme and the absence of whitespace and
/// delimiter characters are checked.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if let Some(c) = value.chars().find(|c| {
            c.is_whitespace()
                || c.is_control()
                || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
        }) {
            return Err(TermError::ForbiddenCharacter(value, c));
        }
        if !has_scheme(&value) {
            return Err(TermError::MissingScheme(value));
        }
        Ok(Iri(value))
    }

    /// For compile-time constants that are known to be valid.
    pub(crate) fn from_static(value: &'static str) -> Self {
        debug_assert!(has_scheme(value));
        Iri(value.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

pub(crate) fn has_scheme(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    /// Identifiers are restricted to `[A-Za-z0-9_][A-Za-z0-9_-]*` so they
    /// can always be written back as `_:id`.
    pub fn new(id: impl Into<String>) -> Result<Self, TermError> {
        let id = id.into();
        let mut chars = id.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphanumeric() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if ok {
            Ok(BlankNode(id))
        } else {
            Err(TermError::InvalidBlankId(id))
        }
    }

    pub fn id(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain string literal, datatype `xsd:string`.
    pub fn simple(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: xsd::string(),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Self, TermError> {
        if datatype.as_str() == rdf::LANG_STRING {
            return Err(TermError::LangStringWithoutLanguage);
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        })
    }

    /// Language-tagged string. The tag is stored lower-cased.
    pub fn lang(lexical: impl Into<String>, language: &str) -> Result<Self, TermError> {
        let valid = !language.is_empty()
            && language.split('-').enumerate().all(|(i, part)| {
                !part.is_empty()
                    && part.len() <= 8
                    && if i == 0 {
                        part.chars().all(|c| c.is_ascii_alphabetic())
                    } else {
                        part.chars().all(|c| c.is_ascii_alphanumeric())
                    }
            });
        if !valid {
            return Err(TermError::InvalidLanguage(language.to_owned()));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: Iri::from_static(rdf::LANG_STRING),
            language: Some(language.to_ascii_lowercase()),
        })
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: xsd::integer(),
            language: None,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// Numeric value for `xsd:integer`/`xsd:decimal`/`xsd:double` (and their
    /// common derived types); `None` for anything else or a malformed form.
    pub fn as_number(&self) -> Option<f64> {
        if !xsd::is_numeric(self.datatype.as_str()) {
            return None;
        }
        parse_number(&self.lexical)
    }
}

/// Parses the lexical space shared by xsd:integer, xsd:decimal and xsd:double.
pub(crate) fn parse_number(lexical: &str) -> Option<f64> {
    let s = lexical.trim();
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    if body.is_empty() || !body.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        return None;
    }
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        match &self.language {
            Some(lang) => write!(f, "@{lang}"),
            None if self.datatype.as_str() == xsd::STRING => Ok(()),
            None => write!(f, "^^{}", self.datatype),
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// An RDF term. `Display` renders the N-Triples form, which is also the
/// canonical text used for sorting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, TermError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn blank(id: impl Into<String>) -> Result<Self, TermError> {
        BlankNode::new(id).map(Term::Blank)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_blank(&self) -> Option<&BlankNode> {
        match self {
            Term::Blank(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::Blank(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl PartialEq<Iri> for Term {
    fn eq(&self, other: &Iri) -> bool {
        matches!(self, Term::Iri(iri) if iri == other)
    }
}

/// A subject-predicate-object statement. The subject is never a literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(
        subject: impl Into<Term>,
        predicate: Iri,
        object: impl Into<Term>,
    ) -> Result<Self, TermError> {
        let subject = subject.into();
        if subject.is_literal() {
            return Err(TermError::LiteralSubject);
        }
        Ok(Triple {
            subject,
            predicate,
            object: object.into(),
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }

    /// The three positions as terms, predicate lifted to `Term::Iri`.
    pub fn terms(&self) -> [Term; 3] {
        [
            self.subject.clone(),
            Term::Iri(self.predicate.clone()),
            self.object.clone(),
        ]
    }

    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// Canonical sort key: subject, predicate, object by canonical text.
    pub fn sort_key(&self) -> (String, String, String) {
        (
            self.subject.canonical(),
            self.predicate.to_string(),
            self.object.canonical(),
        )
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_requires_scheme() {
        assert!(Iri::new("http://example.org/a").is_ok());
        assert!(Iri::new("urn:isbn:123").is_ok());
        assert_eq!(
            Iri::new("people/mary"),
            Err(TermError::MissingScheme("people/mary".into()))
        );
        assert!(Iri::new("1http://x").is_err());
    }

    #[test]
    fn iri_rejects_whitespace() {
        assert!(matches!(
            Iri::new("http://example.org/a b"),
            Err(TermError::ForbiddenCharacter(_, ' '))
        ));
    }

    #[test]
    fn bare_literal_is_xsd_string() {
        let l = Literal::simple("Mary Shastacian");
        assert_eq!(l.datatype().as_str(), xsd::STRING);
        assert_eq!(l.language(), None);
    }

    #[test]
    fn language_iff_langstring() {
        let l = Literal::lang("chat", "FR").unwrap();
        assert_eq!(l.datatype().as_str(), rdf::LANG_STRING);
        assert_eq!(l.language(), Some("fr"));
        assert_eq!(
            Literal::typed("x", Iri::new(rdf::LANG_STRING).unwrap()),
            Err(TermError::LangStringWithoutLanguage)
        );
        assert!(Literal::lang("x", "en-").is_err());
    }

    #[test]
    fn literal_subject_rejected() {
        let p = Iri::new("http://example.org/p").unwrap();
        assert_eq!(
            Triple::new(Literal::simple("x"), p.clone(), Literal::simple("y")),
            Err(TermError::LiteralSubject)
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(Literal::integer(4).as_number(), Some(4.0));
        let dec = Literal::typed("-2.5", xsd::decimal()).unwrap();
        assert_eq!(dec.as_number(), Some(-2.5));
        assert_eq!(Literal::simple("4").as_number(), None);
        let bad = Literal::typed("four", xsd::integer()).unwrap();
        assert_eq!(bad.as_number(), None);
        assert_eq!(parse_number("inf"), None);
        assert_eq!(parse_number("NaN"), None);
    }

    #[test]
    fn display_is_ntriples() {
        let t = Triple::new(
            Term::iri("http://example.org/s").unwrap(),
            Iri::new("http://example.org/p").unwrap(),
            Literal::simple("a \"q\"\n"),
        )
        .unwrap();
        assert_eq!(
            t.to_string(),
            r#"<http://example.org/s> <http://example.org/p> "a \"q\"\n""#
        );
    }
}
