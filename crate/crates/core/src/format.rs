//! Output encodings for formulae: prefix text, s-expressions and a JSON AST.
//!
//! The JSON AST encodes an atom as `{"atom":"p"}` and an application as
//! `{"op":"and","args":[...]}`.

use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lang::{AtomSet, Formula, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Prefix,
    Sexpr,
    JsonAst,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "prefix" => Ok(Format::Prefix),
            "sexpr" => Ok(Format::Sexpr),
            "json-ast" => Ok(Format::JsonAst),
            other => Err(format!(
                "unknown format {other:?} (expected prefix, sexpr or json-ast)"
            )),
        }
    }
}

pub fn render(f: &Formula, format: Format) -> String {
    match format {
        Format::Prefix => f.to_prefix(),
        Format::Sexpr => to_sexpr(f),
        Format::JsonAst => to_json(f).to_string(),
    }
}

pub fn to_sexpr(f: &Formula) -> String {
    match f {
        Formula::Atom(a) => a.to_string(),
        Formula::App(c, args) => {
            let mut s = format!("({c}");
            for a in args {
                s.push(' ');
                s.push_str(&to_sexpr(a));
            }
            s.push(')');
            s
        }
    }
}

pub fn to_json(f: &Formula) -> Value {
    match f {
        Formula::Atom(a) => json!({ "atom": &**a }),
        Formula::App(c, args) => json!({
            "op": &**c,
            "args": args.iter().map(to_json).collect::<Vec<_>>(),
        }),
    }
}

/// Parses one JSON AST document and validates it against the language.
pub fn parse_json(text: &str, sig: &Signature, atoms: &AtomSet) -> Result<Formula> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Syntax {
        pos: e.column().saturating_sub(1),
        msg: e.to_string(),
    })?;
    let f = from_json(&value)?;
    f.validate(sig, atoms)?;
    Ok(f)
}

fn from_json(value: &Value) -> Result<Formula> {
    let bad = |msg: &str| Error::Syntax {
        pos: 0,
        msg: msg.to_string(),
    };
    let obj = value.as_object().ok_or_else(|| bad("expected an object"))?;
    if let Some(atom) = obj.get("atom") {
        let name = atom
            .as_str()
            .ok_or_else(|| bad("`atom` must be a string"))?;
        return Ok(Formula::atom(name));
    }
    let op = obj
        .get("op")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("expected `atom` or `op`"))?;
    let args = obj
        .get("args")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("`args` must be an array"))?;
    let args = args.iter().map(from_json).collect::<Result<Vec<_>>>()?;
    Ok(Formula::app(op, args))
}
