use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::graph::Dataset;
use crate::model::{has_scheme, BlankNode, Iri, Literal, Term, TermError, Triple};
use crate::vocab::{rdf, xsd, WELL_KNOWN_PREFIXES};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnresolvedPrefix(String),
    RelativeIriWithoutBase(String),
    Unsupported(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::UnresolvedPrefix(p) => write!(f, "unresolved prefix '{p}:'"),
            ParseErrorKind::RelativeIriWithoutBase(iri) => {
                write!(f, "relative IRI <{iri}> with no base to resolve it against")
            }
            ParseErrorKind::Unsupported(msg) => write!(f, "unsupported syntax: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// Turtle reader with the `GRAPH <iri> { ... }` block extension.
///
/// The prefixes `rdf`, `rdfs`, `owl`, `skos`, `xsd` and `rdfe` resolve even
/// when the document does not declare them; only declared prefixes end up in
/// [`Dataset::prefixes`].
#[derive(Debug, Clone)]
pub struct TurtleParser {
    base: Option<Iri>,
    builtin: BTreeMap<String, Iri>,
}

impl Default for TurtleParser {
    fn default() -> Self {
        TurtleParser {
            base: None,
            builtin: WELL_KNOWN_PREFIXES
                .iter()
                .map(|(p, ns)| {
                    (
                        (*p).to_owned(),
                        Iri::new(*ns).expect("well-known namespace"),
                    )
                })
                .collect(),
        }
    }
}

impl TurtleParser {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_base(mut self, base: Option<Iri>) -> Self {
        self.base = base;
        self
    }

    /// Rebinds (or adds) an implicit prefix.
    pub fn with_builtin_prefix(mut self, prefix: &str, namespace: Iri) -> Self {
        self.builtin.insert(prefix.to_owned(), namespace);
        self
    }

    pub fn parse(&self, input: &str) -> Result<Dataset, ParseError> {
        let mut state = State {
            chars: input.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            base: self.base.clone(),
            builtin: &self.builtin,
            blank_labels: HashMap::new(),
            next_blank: 0,
            graph: None,
            dataset: Dataset::new(),
        };
        state.document()?;
        Ok(state.dataset)
    }
}

/// Parses a Turtle document; relative IRIs resolve against `base`.
pub fn parse(input: &str, base: Option<&Iri>) -> Result<Dataset, ParseError> {
    TurtleParser::new().with_base(base.cloned()).parse(input)
}

struct State<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    base: Option<Iri>,
    builtin: &'a BTreeMap<String, Iri>,
    blank_labels: HashMap<String, BlankNode>,
    next_blank: usize,
    graph: Option<Iri>,
    dataset: Dataset,
}

#[derive(Clone, Copy)]
struct Mark {
    line: usize,
    column: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '%' | '\u{00B7}')
}

impl State<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn mark(&self) -> Mark {
        Mark {
            line: self.line,
            column: self.column,
        }
    }

    fn error_at(&self, mark: Mark, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: mark.line,
            column: mark.column,
            kind,
        }
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(self.error_at(self.mark(), ParseErrorKind::Syntax(msg.into())))
    }

    fn describe_next(&self) -> String {
        match self.peek() {
            None => "end of input".to_owned(),
            Some(c) => format!("{c:?}"),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, expected: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!(
                "expected '{expected}', found {}",
                self.describe_next()
            ))
        }
    }

    fn looking_at_keyword(&self, keyword: &str) -> bool {
        let n = keyword.len();
        let word: String = self.chars[self.pos..].iter().take(n).collect();
        word.eq_ignore_ascii_case(keyword)
            && self
                .peek_at(n)
                .is_none_or(|c| c.is_whitespace() || c == '<' || c == '#')
    }

    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(()),
                Some('@') => self.at_directive()?,
                Some(_) if self.looking_at_keyword("PREFIX") => {
                    self.pos_advance(6);
                    self.prefix_decl()?;
                }
                Some(_) if self.looking_at_keyword("BASE") => {
                    self.pos_advance(4);
                    self.base_decl()?;
                }
                Some(_) if self.looking_at_keyword("GRAPH") => {
                    self.pos_advance(5);
                    self.graph_block()?;
                }
                Some(_) => {
                    self.triples()?;
                    self.expect('.')?;
                }
            }
        }
    }

    fn pos_advance(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn at_directive(&mut self) -> Result<(), ParseError> {
        let mark = self.mark();
        self.bump();
        let word = self.bare_word();
        match word.as_str() {
            "prefix" => self.prefix_decl()?,
            "base" => self.base_decl()?,
            _ => {
                return Err(self.error_at(
                    mark,
                    ParseErrorKind::Syntax(format!("unknown directive @{word}")),
                ))
            }
        }
        self.expect('.')
    }

    fn bare_word(&mut self) -> String {
        let mut word = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric()) {
            word.push(c);
            self.bump();
        }
        word
    }

    fn prefix_decl(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        let mut prefix = String::new();
        while let Some(c) = self.peek().filter(|c| *c != ':' && is_name_char(*c)) {
            prefix.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            return self.syntax(format!(
                "expected ':' after prefix name, found {}",
                self.describe_next()
            ));
        }
        self.bump();
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.dataset.prefixes.insert(prefix, iri);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri);
        Ok(())
    }

    fn graph_block(&mut self) -> Result<(), ParseError> {
        if self.graph.is_some() {
            return self.syntax("GRAPH blocks cannot be nested");
        }
        self.skip_ws();
        let name = match self.peek() {
            Some('<') => self.iri_ref()?,
            Some(_) => self.prefixed_name_iri()?,
            None => return self.syntax("expected graph name, found end of input"),
        };
        self.expect('{')?;
        self.graph = Some(name.clone());
        self.dataset.named_graph_mut(name);
        loop {
            self.skip_ws();
            match self.peek() {
                Some('}') => {
                    self.bump();
                    break;
                }
                None => return self.syntax("unterminated GRAPH block, expected '}'"),
                Some(_) => {
                    self.triples()?;
                    self.skip_ws();
                    match self.peek() {
                        Some('.') => {
                            self.bump();
                        }
                        Some('}') => {}
                        _ => {
                            return self.syntax(format!(
                                "expected '.' or '}}', found {}",
                                self.describe_next()
                            ))
                        }
                    }
                }
            }
        }
        self.graph = None;
        Ok(())
    }

    fn emit(
        &mut self,
        mark: Mark,
        subject: Term,
        predicate: Iri,
        object: Term,
    ) -> Result<(), ParseError> {
        let triple = Triple::new(subject, predicate, object)
            .map_err(|e| self.error_at(mark, ParseErrorKind::Syntax(e.to_string())))?;
        match &self.graph {
            Some(g) => {
                let g = g.clone();
                self.dataset.named_graph_mut(g).insert(triple);
            }
            None => {
                self.dataset.default.insert(triple);
            }
        }
        Ok(())
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                let subject = self.blank_property_list()?;
                self.skip_ws();
                if matches!(self.peek(), Some('.') | Some('}') | None) {
                    return Ok(());
                }
                self.predicate_object_list(&subject)
            }
            Some('(') => Err(self.collections_unsupported()),
            _ => {
                let mark = self.mark();
                let subject = self.term()?;
                if subject.is_literal() {
                    return Err(self.error_at(
                        mark,
                        ParseErrorKind::Syntax(
                            "a literal cannot be the subject of a triple".into(),
                        ),
                    ));
                }
                self.predicate_object_list(&subject)
            }
        }
    }

    fn collections_unsupported(&self) -> ParseError {
        self.error_at(
            self.mark(),
            ParseErrorKind::Unsupported("RDF collections '( ... )' are not supported".into()),
        )
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                self.skip_ws();
                let mark = self.mark();
                let object = self.object()?;
                self.emit(mark, subject.clone(), predicate.clone(), object)?;
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']') | Some('}') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        if self.peek() == Some('a') && self.peek_at(1).is_none_or(|c| !is_name_char(c) || c == '.')
        {
            self.bump();
            return Ok(rdf::type_());
        }
        let mark = self.mark();
        match self.term()? {
            Term::Iri(iri) => Ok(iri),
            other => Err(self.error_at(
                mark,
                ParseErrorKind::Syntax(format!("predicate must be an IRI, found {other}")),
            )),
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('[') => self.blank_property_list(),
            Some('(') => Err(self.collections_unsupported()),
            _ => self.term(),
        }
    }

    /// `[ ... ]`, returning the fresh blank node.
    fn blank_property_list(&mut self) -> Result<Term, ParseError> {
        self.bump();
        let node = Term::Blank(self.fresh_blank());
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(node);
        }
        self.predicate_object_list(&node)?;
        self.expect(']')?;
        Ok(node)
    }

    fn fresh_blank(&mut self) -> BlankNode {
        let id = format!("b{}", self.next_blank);
        self.next_blank += 1;
        BlankNode::new(id).expect("generated id is valid")
    }

    /// IRI, prefixed name, blank node label, literal, number or boolean.
    fn term(&mut self) -> Result<Term, ParseError> {
        let mark = self.mark();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('"') | Some('\'') => self.literal(),
            Some('_') if self.peek_at(1) == Some(':') => {
                self.bump();
                self.bump();
                let mut label = String::new();
                while let Some(c) = self.peek().filter(|c| is_name_char(*c) && *c != ':') {
                    label.push(c);
                    self.bump();
                }
                while label.ends_with('.') {
                    label.pop();
                    self.pos -= 1;
                    self.column -= 1;
                }
                if label.is_empty() {
                    return Err(self.error_at(
                        mark,
                        ParseErrorKind::Syntax("empty blank node label".into()),
                    ));
                }
                let node = match self.blank_labels.get(&label) {
                    Some(node) => node.clone(),
                    None => {
                        let node = self.fresh_blank();
                        self.blank_labels.insert(label, node.clone());
                        node
                    }
                };
                Ok(Term::Blank(node))
            }
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-') => self.number(),
            Some('.') if self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => self.number(),
            Some(c) if is_name_char(c) => {
                let save = (self.pos, self.line, self.column);
                let word = self.bare_word();
                if (word == "true" || word == "false")
                    && self.peek().is_none_or(|c| !is_name_char(c) || c == '.')
                {
                    return Ok(Term::Literal(
                        Literal::typed(word, xsd::boolean()).expect("boolean datatype"),
                    ));
                }
                (self.pos, self.line, self.column) = save;
                Ok(Term::Iri(self.prefixed_name_iri()?))
            }
            _ => self.syntax(format!(
                "expected an RDF term, found {}",
                self.describe_next()
            )),
        }
    }

    fn prefixed_name_iri(&mut self) -> Result<Iri, ParseError> {
        let mark = self.mark();
        let mut prefix = String::new();
        while let Some(c) = self.peek().filter(|c| *c != ':' && is_name_char(*c)) {
            prefix.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            return Err(self.error_at(
                mark,
                ParseErrorKind::Syntax(format!(
                    "expected a prefixed name, found {}",
                    if prefix.is_empty() {
                        self.describe_next()
                    } else {
                        format!("'{prefix}'")
                    }
                )),
            ));
        }
        self.bump();
        let mut local = String::new();
        loop {
            match self.peek() {
                Some('\\') => {
                    self.bump();
                    match self.bump() {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => local.push(c),
                        _ => return self.syntax("invalid escape in local name"),
                    }
                }
                Some(c) if is_name_char(c) => {
                    local.push(c);
                    self.bump();
                }
                _ => break,
            }
        }
        // A trailing '.' terminates the statement, it is not part of the name.
        while local.ends_with('.') {
            local.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        let namespace = self
            .dataset
            .prefixes
            .get(&prefix)
            .or_else(|| self.builtin.get(&prefix))
            .ok_or_else(|| self.error_at(mark, ParseErrorKind::UnresolvedPrefix(prefix.clone())))?;
        Iri::new(format!("{}{}", namespace.as_str(), local))
            .map_err(|e| self.error_at(mark, iri_error_kind(e)))
    }

    fn iri_ref(&mut self) -> Result<Iri, ParseError> {
        let mark = self.mark();
        if self.peek() != Some('<') {
            return self.syntax(format!("expected '<', found {}", self.describe_next()));
        }
        self.bump();
        let mut raw = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(
                        self.error_at(mark, ParseErrorKind::Syntax("unterminated IRI".into()))
                    )
                }
                Some('>') => break,
                Some('\\') => {
                    let c = self.unicode_escape()?;
                    raw.push(c);
                }
                Some(c)
                    if c.is_whitespace()
                        || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') =>
                {
                    return Err(self.error_at(
                        mark,
                        ParseErrorKind::Syntax(format!("character {c:?} is not allowed in an IRI")),
                    ))
                }
                Some(c) => raw.push(c),
            }
        }
        self.resolve(&raw).map_err(|kind| self.error_at(mark, kind))
    }

    fn resolve(&self, raw: &str) -> Result<Iri, ParseErrorKind> {
        if has_scheme(raw) {
            return Iri::new(raw).map_err(iri_error_kind);
        }
        let base = self
            .base
            .as_ref()
            .ok_or_else(|| ParseErrorKind::RelativeIriWithoutBase(raw.to_owned()))?;
        let base_url = url::Url::parse(base.as_str()).map_err(|e| {
            ParseErrorKind::Syntax(format!("base {base} cannot be used for resolution: {e}"))
        })?;
        let joined = base_url.join(raw).map_err(|e| {
            ParseErrorKind::Syntax(format!("cannot resolve <{raw}> against {base}: {e}"))
        })?;
        Iri::new(String::from(joined)).map_err(iri_error_kind)
    }

    /// After a backslash: `uXXXX` or `UXXXXXXXX`.
    fn unicode_escape(&mut self) -> Result<char, ParseError> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.syntax("invalid escape sequence"),
        };
        let mut hex = String::new();
        for _ in 0..width {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                _ => return self.syntax("invalid unicode escape"),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .map_or_else(|| self.syntax("unicode escape is not a scalar value"), Ok)
    }

    fn literal(&mut self) -> Result<Term, ParseError> {
        let mark = self.mark();
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(self.error_at(
                        mark,
                        ParseErrorKind::Syntax("unterminated string literal".into()),
                    ))
                }
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        self.bump();
                        self.bump();
                        break;
                    }
                    lexical.push(c);
                }
                Some('\n') | Some('\r') if !long => {
                    return Err(self.error_at(
                        mark,
                        ParseErrorKind::Syntax("line break in a single-quoted string".into()),
                    ))
                }
                Some('\\') => {
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') | Some('U') => {
                            let c = self.unicode_escape()?;
                            lexical.push(c);
                            continue;
                        }
                        _ => return self.syntax("invalid escape sequence in string"),
                    };
                    self.bump();
                    lexical.push(c);
                }
                Some(c) => lexical.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self
                    .peek()
                    .filter(|c| c.is_ascii_alphanumeric() || *c == '-')
                {
                    tag.push(c);
                    self.bump();
                }
                Literal::lang(lexical, &tag)
                    .map(Term::Literal)
                    .map_err(|e| self.error_at(mark, ParseErrorKind::Syntax(e.to_string())))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.bump();
                self.bump();
                let datatype = match self.peek() {
                    Some('<') => self.iri_ref()?,
                    _ => self.prefixed_name_iri()?,
                };
                Literal::typed(lexical, datatype)
                    .map(Term::Literal)
                    .map_err(|e| self.error_at(mark, ParseErrorKind::Syntax(e.to_string())))
            }
            _ => Ok(Term::Literal(Literal::simple(lexical))),
        }
    }

    fn number(&mut self) -> Result<Term, ParseError> {
        let mut text = String::new();
        if let Some(sign) = self.peek().filter(|c| matches!(c, '+' | '-')) {
            text.push(sign);
            self.bump();
        }
        let digits = |s: &mut Self, text: &mut String| {
            let mut n = 0;
            while let Some(c) = s.peek().filter(char::is_ascii_digit) {
                text.push(c);
                s.bump();
                n += 1;
            }
            n
        };
        let int_digits = digits(self, &mut text);
        let mut datatype = xsd::integer();
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            text.push('.');
            self.bump();
            digits(self, &mut text);
            datatype = xsd::decimal();
        } else if int_digits == 0 {
            return self.syntax("malformed number");
        }
        if let Some(e) = self.peek().filter(|c| matches!(c, 'e' | 'E')) {
            text.push(e);
            self.bump();
            if let Some(sign) = self.peek().filter(|c| matches!(c, '+' | '-')) {
                text.push(sign);
                self.bump();
            }
            if digits(self, &mut text) == 0 {
                return self.syntax("malformed exponent");
            }
            datatype = xsd::double();
        }
        Ok(Term::Literal(
            Literal::typed(text, datatype).expect("numeric datatype"),
        ))
    }
}

fn iri_error_kind(e: TermError) -> ParseErrorKind {
    ParseErrorKind::Syntax(e.to_string())
}
