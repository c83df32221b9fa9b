//! Signatures, atom sets and the formula syntax tree.
//!
//! Formulae are plain syntax trees: equality is structural, never logical.
//! Text I/O uses prefix application with no whitespace, e.g.
//! `not(and(p1,p2))`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned-ish symbol name shared between formulae.
pub type Symbol = Arc<str>;

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn identifier(s: &str) -> Result<Symbol> {
    if is_identifier(s) {
        Ok(Symbol::from(s))
    } else {
        Err(Error::InvalidIdentifier(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Connective {
    pub name: Symbol,
    pub arity: usize,
}

/// The logical constants of a language, in declaration order.
///
/// Nullary symbols are not connectives here: sentential constants such as
/// `top` or `bot` are declared as extra atoms. The same goes for first-order
/// terms, where function symbols become connectives and variables/constants
/// become atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    connectives: Vec<Connective>,
}

impl Signature {
    pub fn new<S: AsRef<str>>(entries: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut connectives = Vec::new();
        let mut seen = HashSet::new();
        for (name, arity) in entries {
            let name = identifier(name.as_ref())?;
            if arity == 0 {
                return Err(Error::NullaryConnective(name.to_string()));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateSymbol(name.to_string()));
            }
            connectives.push(Connective { name, arity });
        }
        Ok(Signature { connectives })
    }

    /// Parses the inline form `not:1,and:2`.
    pub fn parse_inline(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Signature::new(Vec::<(&str, usize)>::new());
        }
        Self::from_entries(text.split(','))
    }

    /// Parses a signature file: one `name:arity` per line. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse_file(text: &str) -> Result<Self> {
        Self::from_entries(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    fn from_entries<'a>(entries: impl Iterator<Item = &'a str>) -> Result<Self> {
        let mut parsed = Vec::new();
        for entry in entries {
            let entry = entry.trim();
            let (name, arity) = entry
                .split_once(':')
                .ok_or_else(|| Error::SignatureSyntax(entry.to_string()))?;
            let arity: usize = arity
                .trim()
                .parse()
                .map_err(|_| Error::SignatureSyntax(entry.to_string()))?;
            parsed.push((name.trim().to_string(), arity));
        }
        Signature::new(parsed)
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.connectives
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Connective> {
        self.connectives.iter().find(|c| &*c.name == name)
    }

    /// Number of connectives of the given arity.
    pub fn count_with_arity(&self, arity: usize) -> usize {
        self.connectives.iter().filter(|c| c.arity == arity).count()
    }

    /// Connectives of the given arity, in declaration order.
    pub fn with_arity(&self, arity: usize) -> impl Iterator<Item = &Connective> {
        self.connectives.iter().filter(move |c| c.arity == arity)
    }

    /// Maximum arity; 0 for the empty signature.
    pub fn max_arity(&self) -> usize {
        self.connectives.iter().map(|c| c.arity).max().unwrap_or(0)
    }

    /// Distinct arities present, ascending.
    pub fn arities(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.connectives.iter().map(|c| c.arity).collect();
        set.into_iter().collect()
    }

    /// `(arity, count)` pairs for every arity present, ascending.
    pub fn arity_profile(&self) -> Vec<(usize, usize)> {
        self.arities()
            .into_iter()
            .map(|m| (m, self.count_with_arity(m)))
            .collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.connectives.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}:{}", c.name, c.arity)?;
        }
        Ok(())
    }
}

/// Nonempty ordered set of propositional letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomSet {
    atoms: Vec<Symbol>,
}

impl AtomSet {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut seen = HashSet::new();
        for name in names {
            let name = identifier(name.as_ref().trim())?;
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateSymbol(name.to_string()));
            }
            atoms.push(name);
        }
        if atoms.is_empty() {
            return Err(Error::NoAtoms);
        }
        Ok(AtomSet { atoms })
    }

    /// Parses a comma-separated list such as `p1,p2`.
    pub fn parse_list(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::NoAtoms);
        }
        AtomSet::new(text.split(','))
    }

    /// Checks that no atom shares its name with a connective.
    pub fn check_disjoint(&self, sig: &Signature) -> Result<()> {
        match self.atoms.iter().find(|a| sig.get(a).is_some()) {
            Some(clash) => Err(Error::SymbolClash(clash.to_string())),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn atoms(&self) -> &[Symbol] {
        &self.atoms
    }

    pub fn contains(&self, name: &str) -> bool {
        self.atoms.iter().any(|a| &**a == name)
    }

    pub fn to_set(&self) -> BTreeSet<Symbol> {
        self.atoms.iter().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Symbol),
    App(Symbol, Vec<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Self {
        Formula::Atom(Symbol::from(name))
    }

    pub fn app(name: &str, args: Vec<Formula>) -> Self {
        Formula::App(Symbol::from(name), args)
    }

    /// Atoms have depth 0; an application is one deeper than its deepest argument.
    pub fn depth(&self) -> u32 {
        match self {
            Formula::Atom(_) => 0,
            Formula::App(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    pub fn atoms_used(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_atoms(out)),
        }
    }

    pub fn to_prefix(&self) -> String {
        let mut s = String::new();
        self.write_prefix(&mut s);
        s
    }

    fn write_prefix(&self, out: &mut String) {
        match self {
            Formula::Atom(a) => out.push_str(a),
            Formula::App(c, args) => {
                out.push_str(c);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    a.write_prefix(out);
                }
                out.push(')');
            }
        }
    }

    /// Checks arities and declarations against a language.
    pub fn validate(&self, sig: &Signature, atoms: &AtomSet) -> Result<()> {
        match self {
            Formula::Atom(a) if atoms.contains(a) => Ok(()),
            Formula::Atom(a) => Err(Error::Undeclared {
                pos: 0,
                name: a.to_string(),
            }),
            Formula::App(c, args) => {
                let conn = sig.get(c).ok_or_else(|| Error::Undeclared {
                    pos: 0,
                    name: c.to_string(),
                })?;
                if conn.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        pos: 0,
                        name: c.to_string(),
                        expected: conn.arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.validate(sig, atoms))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_prefix())
    }
}

/// Parses prefix text such as `and(p1,not(p2))`, checking every symbol
/// against `sig` and `atoms`. Whitespace between tokens is tolerated.
pub fn parse_prefix(text: &str, sig: &Signature, atoms: &AtomSet) -> Result<Formula> {
    let mut parser = PrefixParser {
        src: text.as_bytes(),
        pos: 0,
        sig,
        atoms,
    };
    let f = parser.formula()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.syntax("trailing input"));
    }
    Ok(f)
}

struct PrefixParser<'a> {
    src: &'a [u8],
    pos: usize,
    sig: &'a Signature,
    atoms: &'a AtomSet,
}

impl PrefixParser<'_> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn name(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.pos += 1,
            Some(_) => return Err(self.syntax("expected a symbol")),
            None => return Err(self.syntax("unexpected end of input")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        // identifier bytes are ASCII
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn formula(&mut self) -> Result<Formula> {
        self.skip_ws();
        let start = self.pos;
        let name = self.name()?.to_string();
        self.skip_ws();
        let mut args = Vec::new();
        let has_parens = self.peek() == Some(b'(');
        if has_parens {
            self.pos += 1;
            loop {
                args.push(self.formula()?);
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(_) => return Err(self.syntax("expected `,` or `)`")),
                    None => return Err(self.syntax("unexpected end of input")),
                }
            }
        }

        if let Some(conn) = self.sig.get(&name) {
            if conn.arity != args.len() {
                return Err(Error::ArityMismatch {
                    pos: start,
                    name,
                    expected: conn.arity,
                    found: args.len(),
                });
            }
            Ok(Formula::App(conn.name.clone(), args))
        } else if let Some(atom) = self.atoms.atoms().iter().find(|a| ***a == *name) {
            if has_parens {
                return Err(Error::ArityMismatch {
                    pos: start,
                    name,
                    expected: 0,
                    found: args.len(),
                });
            }
            Ok(Formula::Atom(atom.clone()))
        } else {
            Err(Error::Undeclared { pos: start, name })
        }
    }
}
