use std::collections::{HashMap, HashSet};

use crate::graph::{standard_prefixes, Graph, PrefixMap};
use crate::term::{has_scheme, BlankNode, Iri, Literal, Term, Triple};
use crate::vocab::{self, rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("Turtle syntax error at line {line}: {message}")]
pub struct TurtleError {
    pub line: usize,
    pub message: String,
}

/// Parse Turtle with the standard prefixes (rdf, rdfs, owl, xsd, sh) pre-bound.
pub fn parse_turtle(text: &str) -> Result<Graph, TurtleError> {
    TurtleParser::new().parse(text)
}

/// Configurable Turtle reader.
#[derive(Debug, Clone)]
pub struct TurtleParser {
    base: Option<String>,
    prefixes: PrefixMap,
}

impl Default for TurtleParser {
    fn default() -> Self {
        Self::new()
    }
}

impl TurtleParser {
    pub fn new() -> Self {
        TurtleParser {
            base: None,
            prefixes: standard_prefixes(),
        }
    }

    /// No prefixes bound until the document declares them.
    pub fn strict() -> Self {
        TurtleParser {
            base: None,
            prefixes: PrefixMap::new(),
        }
    }

    pub fn with_base(mut self, base: impl Into<String>) -> Self {
        self.base = Some(base.into());
        self
    }

    pub fn with_prefix(mut self, prefix: impl Into<String>, ns: impl Into<String>) -> Self {
        self.prefixes.insert(prefix.into(), ns.into());
        self
    }

    pub fn with_prefixes<'a>(mut self, prefixes: impl IntoIterator<Item = (&'a String, &'a String)>) -> Self {
        for (p, ns) in prefixes {
            self.prefixes.insert(p.clone(), ns.clone());
        }
        self
    }

    pub fn parse(&self, text: &str) -> Result<Graph, TurtleError> {
        let mut p = Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            base: self.base.clone(),
            prefixes: self.prefixes.clone(),
            graph: Graph::new(),
            labels: HashMap::new(),
            used_labels: HashSet::new(),
            anon_counter: 0,
        };
        p.document()?;
        Ok(p.graph)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    base: Option<String>,
    prefixes: PrefixMap,
    graph: Graph,
    labels: HashMap<String, BlankNode>,
    used_labels: HashSet<String>,
    anon_counter: usize,
}

type PResult<T> = Result<T, TurtleError>;

fn is_pn_chars_base(c: char) -> bool {
    c.is_ascii_alphabetic()
        || matches!(c as u32,
            0xC0..=0xD6 | 0xD8..=0xF6 | 0xF8..=0x2FF | 0x370..=0x37D | 0x37F..=0x1FFF
            | 0x200C..=0x200D | 0x2070..=0x218F | 0x2C00..=0x2FEF | 0x3001..=0xD7FF
            | 0xF900..=0xFDCF | 0xFDF0..=0xFFFD | 0x10000..=0xEFFFF)
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c) || c == '-' || c.is_ascii_digit() || matches!(c as u32, 0xB7 | 0x300..=0x36F | 0x203F..=0x2040)
}

impl Parser {
    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(TurtleError {
            line: self.line,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' || c == '\r' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> PResult<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn starts_with_keyword(&self, kw: &str, case_insensitive: bool) -> bool {
        let n = kw.chars().count();
        let slice: String = self.chars[self.pos..].iter().take(n).collect();
        let matches = if case_insensitive {
            slice.eq_ignore_ascii_case(kw)
        } else {
            slice == kw
        };
        matches && self.peek_at(n).is_none_or(|c| !(is_pn_chars(c) || c == ':'))
    }

    fn document(&mut self) -> PResult<()> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            self.statement()?;
        }
    }

    fn statement(&mut self) -> PResult<()> {
        if self.peek() == Some('@') {
            if self.starts_with_keyword("@prefix", false) {
                self.pos += "@prefix".len();
                self.prefix_decl()?;
                return self.expect('.');
            }
            if self.starts_with_keyword("@base", false) {
                self.pos += "@base".len();
                self.base_decl()?;
                return self.expect('.');
            }
            return self.err("unknown directive");
        }
        if self.starts_with_keyword("PREFIX", true) {
            self.pos += "PREFIX".len();
            return self.prefix_decl();
        }
        if self.starts_with_keyword("BASE", true) {
            self.pos += "BASE".len();
            return self.base_decl();
        }
        self.triples()?;
        self.expect('.')
    }

    fn prefix_decl(&mut self) -> PResult<()> {
        self.skip_ws();
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if is_pn_chars(c) || c == '.' {
                prefix.push(c);
                self.bump();
            } else {
                return self.err(format!("invalid character '{c}' in prefix name"));
            }
        }
        if prefix.ends_with('.') {
            return self.err("prefix name may not end with '.'");
        }
        self.expect(':')?;
        self.skip_ws();
        let ns = self.iri_ref()?;
        self.graph.set_prefix(prefix.clone(), ns.clone());
        self.prefixes.insert(prefix, ns);
        Ok(())
    }

    fn base_decl(&mut self) -> PResult<()> {
        self.skip_ws();
        let base = self.iri_ref()?;
        self.base = Some(base);
        Ok(())
    }

    fn triples(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.peek() == Some('[') {
            let subject = self.blank_node_property_list()?;
            self.skip_ws();
            if self.peek() != Some('.') {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> PResult<Term> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some('_') if self.peek_at(1) == Some(':') => Ok(Term::BlankNode(self.blank_label()?)),
            Some('(') => self.collection(),
            Some(_) => match self.pname_or_keyword()? {
                Word::Iri(iri) => Ok(Term::Iri(iri)),
                Word::Keyword(k) => self.err(format!("unexpected '{k}' in subject position")),
            },
            None => self.err("unexpected end of input"),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> PResult<()> {
        loop {
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            match self.peek() {
                Some('.') | Some(']') | None => return Ok(()),
                _ => {}
            }
        }
    }

    fn verb(&mut self) -> PResult<Iri> {
        self.skip_ws();
        match self.peek() {
            Some('<') => self.iri(),
            Some('a')
                if self
                    .peek_at(1)
                    .is_none_or(|c| !(is_pn_chars(c) || c == ':' || c == '.')) =>
            {
                self.bump();
                Ok(vocab::iri(rdf::TYPE))
            }
            Some(_) => match self.pname_or_keyword()? {
                Word::Iri(iri) => Ok(iri),
                Word::Keyword(k) => self.err(format!("expected predicate, found '{k}'")),
            },
            None => self.err("expected predicate, found end of input"),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Iri) -> PResult<()> {
        loop {
            let object = self.object()?;
            self.emit(subject.clone(), predicate.clone(), object)?;
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn emit(&mut self, s: Term, p: Iri, o: Term) -> PResult<()> {
        match Triple::try_new(s, p, o) {
            Ok(t) => {
                self.graph.insert(t);
                Ok(())
            }
            Err(e) => self.err(e.to_string()),
        }
    }

    fn object(&mut self) -> PResult<Term> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri()?)),
            Some('_') if self.peek_at(1) == Some(':') => Ok(Term::BlankNode(self.blank_label()?)),
            Some('(') => self.collection(),
            Some('[') => self.blank_node_property_list(),
            Some('"') | Some('\'') => self.rdf_literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => self.numeric_literal(),
            Some('.') if self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => self.numeric_literal(),
            Some(_) => match self.pname_or_keyword()? {
                Word::Iri(iri) => Ok(Term::Iri(iri)),
                Word::Keyword(k) if k == "true" || k == "false" => {
                    Ok(Term::Literal(Literal::typed(k, vocab::iri(xsd::BOOLEAN))))
                }
                Word::Keyword(k) => self.err(format!("unexpected '{k}' in object position")),
            },
            None => self.err("expected object, found end of input"),
        }
    }

    fn fresh_blank(&mut self) -> BlankNode {
        loop {
            self.anon_counter += 1;
            let label = format!("g{}", self.anon_counter);
            if self.used_labels.insert(label.clone()) {
                return BlankNode::new(label).expect("generated label");
            }
        }
    }

    fn blank_node_property_list(&mut self) -> PResult<Term> {
        self.expect('[')?;
        let node = Term::BlankNode(self.fresh_blank());
        self.skip_ws();
        if self.peek() != Some(']') {
            self.predicate_object_list(&node)?;
        }
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> PResult<Term> {
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.bump();
                    break;
                }
                None => return self.err("unterminated collection"),
                _ => items.push(self.object()?),
            }
        }
        if items.is_empty() {
            return Ok(vocab::term(rdf::NIL));
        }
        let nodes: Vec<Term> = items.iter().map(|_| Term::BlankNode(self.fresh_blank())).collect();
        for (i, item) in items.into_iter().enumerate() {
            self.emit(nodes[i].clone(), vocab::iri(rdf::FIRST), item)?;
            let rest = nodes.get(i + 1).cloned().unwrap_or_else(|| vocab::term(rdf::NIL));
            self.emit(nodes[i].clone(), vocab::iri(rdf::REST), rest)?;
        }
        Ok(nodes[0].clone())
    }

    fn blank_label(&mut self) -> PResult<BlankNode> {
        self.bump();
        self.bump();
        let mut label = String::new();
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                label.push(c);
                self.bump();
            }
            _ => return self.err("invalid blank node label"),
        }
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || c == '.' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
        }
        if let Some(b) = self.labels.get(&label) {
            return Ok(b.clone());
        }
        let node = if self.used_labels.insert(label.clone()) {
            BlankNode::new(label.clone()).map_err(|e| TurtleError {
                line: self.line,
                message: e.to_string(),
            })?
        } else {
            self.fresh_blank()
        };
        self.labels.insert(label, node.clone());
        Ok(node)
    }

    fn iri(&mut self) -> PResult<Iri> {
        let raw = self.iri_ref()?;
        match Iri::new(raw) {
            Ok(iri) => Ok(iri),
            Err(e) => self.err(e.to_string()),
        }
    }

    /// Reads `<...>` and resolves it against the base.
    fn iri_ref(&mut self) -> PResult<String> {
        self.skip_ws();
        if self.peek() != Some('<') {
            return self.err("expected IRI");
        }
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.err("unterminated IRI"),
                Some('>') => break,
                Some('\\') => {
                    let c = self.uchar()?;
                    out.push(c);
                }
                Some(c) if c <= ' ' || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return self.err(format!("invalid character {c:?} in IRI"));
                }
                Some(c) => out.push(c),
            }
        }
        self.resolve(out)
    }

    fn resolve(&self, iri: String) -> PResult<String> {
        if has_scheme(&iri) {
            return Ok(iri);
        }
        let Some(base) = &self.base else {
            return self.err(format!("relative IRI <{iri}> without a base"));
        };
        let base_url = match url::Url::parse(base) {
            Ok(u) => u,
            Err(e) => return self.err(format!("bad base IRI <{base}>: {e}")),
        };
        match base_url.join(&iri) {
            Ok(u) => Ok(u.to_string()),
            Err(e) => self.err(format!("cannot resolve <{iri}> against <{base}>: {e}")),
        }
    }

    fn uchar(&mut self) -> PResult<char> {
        let n = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return self.err("invalid escape in IRI"),
        };
        self.hex_char(n)
    }

    fn hex_char(&mut self, n: usize) -> PResult<char> {
        let mut v = 0u32;
        for _ in 0..n {
            match self.bump().and_then(|c| c.to_digit(16)) {
                Some(d) => v = v * 16 + d,
                None => return self.err("invalid hex escape"),
            }
        }
        match char::from_u32(v) {
            Some(c) => Ok(c),
            None => self.err(format!("invalid code point U+{v:X}")),
        }
    }

    fn pname_or_keyword(&mut self) -> PResult<Word> {
        let start_line = self.line;
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if is_pn_chars(c)
                || (c == '.'
                    && !prefix.is_empty()
                    && self.peek_at(1).is_some_and(|n| is_pn_chars(n) || n == '.' || n == ':'))
            {
                prefix.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek() != Some(':') {
            if prefix.is_empty() {
                let c = self.peek().unwrap_or(' ');
                return self.err(format!("unexpected character '{c}'"));
            }
            return Ok(Word::Keyword(prefix));
        }
        self.bump();
        let local = self.pn_local()?;
        let Some(ns) = self.prefixes.get(&prefix) else {
            return Err(TurtleError {
                line: start_line,
                message: format!("undeclared prefix '{prefix}:'"),
            });
        };
        let full = format!("{ns}{local}");
        let full = self.resolve(full)?;
        match Iri::new(full) {
            Ok(iri) => Ok(Word::Iri(iri)),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn pn_local(&mut self) -> PResult<String> {
        let mut local = String::new();
        let mut first = true;
        while let Some(c) = self.peek() {
            let ok_first = is_pn_chars_u(c) || c == ':' || c.is_ascii_digit();
            let ok_rest = is_pn_chars(c) || c == ':' || c == '.';
            if c == '%' {
                let h1 = self.peek_at(1).filter(|c| c.is_ascii_hexdigit());
                let h2 = self.peek_at(2).filter(|c| c.is_ascii_hexdigit());
                match (h1, h2) {
                    (Some(a), Some(b)) => {
                        local.push('%');
                        local.push(a);
                        local.push(b);
                        self.pos += 3;
                    }
                    _ => return self.err("invalid percent escape in local name"),
                }
            } else if c == '\\' {
                let esc = self.peek_at(1);
                match esc {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => {
                        local.push(e);
                        self.pos += 2;
                    }
                    _ => return self.err("invalid escape in local name"),
                }
            } else if (first && ok_first) || (!first && ok_rest) {
                local.push(c);
                self.bump();
            } else {
                break;
            }
            first = false;
        }
        while local.ends_with('.') {
            local.pop();
            self.pos -= 1;
        }
        Ok(local)
    }

    fn rdf_literal(&mut self) -> PResult<Term> {
        let lexical = self.string()?;
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || (c == '-' && !tag.is_empty()) {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if tag.is_empty() || !tag.chars().next().unwrap().is_ascii_alphabetic() {
                    return self.err("invalid language tag");
                }
                Ok(Term::Literal(Literal::lang(lexical, tag)))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.pos += 2;
                let dt = match self.peek() {
                    Some('<') => self.iri()?,
                    _ => match self.pname_or_keyword()? {
                        Word::Iri(iri) => iri,
                        Word::Keyword(k) => return self.err(format!("bad datatype '{k}'")),
                    },
                };
                Ok(Term::Literal(Literal::typed(lexical, dt)))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }

    fn string(&mut self) -> PResult<String> {
        let quote = self.bump().expect("caller saw a quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.pos += 2;
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return self.err("unterminated string literal");
            };
            if c == quote {
                if !long {
                    return Ok(out);
                }
                if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                    // A run of more than three quotes ends with the last three.
                    while self.peek_at(2) == Some(quote) {
                        out.push(quote);
                        self.bump();
                    }
                    self.pos += 2;
                    return Ok(out);
                }
                out.push(c);
                continue;
            }
            match c {
                '\\' => {
                    let e = self.bump();
                    match e {
                        Some('t') => out.push('\t'),
                        Some('b') => out.push('\u{8}'),
                        Some('n') => out.push('\n'),
                        Some('r') => out.push('\r'),
                        Some('f') => out.push('\u{c}'),
                        Some('"') => out.push('"'),
                        Some('\'') => out.push('\''),
                        Some('\\') => out.push('\\'),
                        Some('u') => out.push(self.hex_char(4)?),
                        Some('U') => out.push(self.hex_char(8)?),
                        _ => return self.err("invalid escape sequence in string"),
                    }
                }
                '\n' | '\r' if !long => return self.err("newline in short string literal"),
                c => out.push(c),
            }
        }
    }

    fn numeric_literal(&mut self) -> PResult<Term> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        let mut int_digits = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
            int_digits += 1;
        }
        let mut frac_digits = 0;
        let mut has_dot = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            has_dot = true;
            s.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
                frac_digits += 1;
            }
        }
        if int_digits == 0 && frac_digits == 0 {
            return self.err("invalid numeric literal");
        }
        let dt = if matches!(self.peek(), Some('e' | 'E')) {
            s.push('e');
            self.bump();
            if let Some(c @ ('+' | '-')) = self.peek() {
                s.push(c);
                self.bump();
            }
            let mut exp = 0;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                s.push(c);
                self.bump();
                exp += 1;
            }
            if exp == 0 {
                return self.err("invalid exponent");
            }
            xsd::DOUBLE
        } else if has_dot {
            xsd::DECIMAL
        } else {
            xsd::INTEGER
        };
        Ok(Term::Literal(Literal::typed(s, vocab::iri(dt))))
    }
}

enum Word {
    Iri(Iri),
    Keyword(String),
}
