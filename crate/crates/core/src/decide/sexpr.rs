//! Just enough s-expression reading for solver responses.

use std::collections::BTreeMap;

use crate::polyring::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

impl Sexp {
    fn head(&self) -> Option<&str> {
        match self {
            Sexp::List(v) => match v.first() {
                Some(Sexp::Atom(a)) => Some(a),
                _ => None,
            },
            Sexp::Atom(_) => None,
        }
    }
}

/// Parses every top-level expression in `text`. Bare atoms at top level
/// (e.g. `sat`) are returned as atoms.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut out = Vec::new();
    loop {
        skip_ws(&chars, &mut pos);
        if pos >= chars.len() {
            return Ok(out);
        }
        out.push(parse_one(&chars, &mut pos)?);
    }
}

fn skip_ws(c: &[char], pos: &mut usize) {
    while *pos < c.len() {
        if c[*pos].is_whitespace() {
            *pos += 1;
        } else if c[*pos] == ';' {
            while *pos < c.len() && c[*pos] != '\n' {
                *pos += 1;
            }
        } else {
            break;
        }
    }
}

fn parse_one(c: &[char], pos: &mut usize) -> Result<Sexp, String> {
    skip_ws(c, pos);
    match c.get(*pos) {
        None => Err("unexpected end of input".into()),
        Some('(') => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                skip_ws(c, pos);
                match c.get(*pos) {
                    None => return Err("unclosed parenthesis".into()),
                    Some(')') => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    _ => items.push(parse_one(c, pos)?),
                }
            }
        }
        Some(')') => Err(format!("unexpected `)` at offset {pos}")),
        Some('"') => {
            let start = *pos;
            *pos += 1;
            while *pos < c.len() {
                if c[*pos] == '"' {
                    // "" escapes a quote
                    if c.get(*pos + 1) == Some(&'"') {
                        *pos += 2;
                        continue;
                    }
                    *pos += 1;
                    return Ok(Sexp::Atom(c[start..*pos].iter().collect()));
                }
                *pos += 1;
            }
            Err("unterminated string".into())
        }
        Some('|') => {
            let start = *pos + 1;
            *pos += 1;
            while *pos < c.len() && c[*pos] != '|' {
                *pos += 1;
            }
            let s: String = c[start..(*pos).min(c.len())].iter().collect();
            *pos += 1;
            Ok(Sexp::Atom(s))
        }
        Some(_) => {
            let start = *pos;
            while *pos < c.len() && !c[*pos].is_whitespace() && c[*pos] != '(' && c[*pos] != ')' {
                *pos += 1;
            }
            Ok(Sexp::Atom(c[start..*pos].iter().collect()))
        }
    }
}

/// A model value: exact, or only known approximately (algebraic numbers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelValue {
    Exact(Rational),
    Approx(Rational),
    /// An irrational value without a decimal rendering yet.
    Algebraic,
}

fn value(e: &Sexp) -> Result<ModelValue, String> {
    match e {
        Sexp::Atom(a) => {
            if let Some(d) = a.strip_suffix('?') {
                let q = parse_rational(d).map_err(|e| e.to_string())?;
                Ok(ModelValue::Approx(q))
            } else {
                parse_rational(a)
                    .map(ModelValue::Exact)
                    .map_err(|e| e.to_string())
            }
        }
        Sexp::List(items) => match e.head() {
            Some("-") if items.len() == 2 => Ok(match value(&items[1])? {
                ModelValue::Exact(q) => ModelValue::Exact(-q),
                ModelValue::Approx(q) => ModelValue::Approx(-q),
                ModelValue::Algebraic => ModelValue::Algebraic,
            }),
            Some("/") if items.len() == 3 => match (value(&items[1])?, value(&items[2])?) {
                (ModelValue::Exact(a), ModelValue::Exact(b))
                    if b != Rational::from_integer(0.into()) =>
                {
                    Ok(ModelValue::Exact(a / b))
                }
                _ => Ok(ModelValue::Algebraic),
            },
            Some("root-obj") => Ok(ModelValue::Algebraic),
            _ => Err(format!("unsupported model value {e:?}")),
        },
    }
}

/// Every `(define-fun name () Real value)` found anywhere in `e`.
pub fn collect_model(e: &Sexp, out: &mut BTreeMap<String, ModelValue>) -> Result<(), String> {
    if let Sexp::List(items) = e {
        if e.head() == Some("define-fun") && items.len() == 5 {
            if let (Sexp::Atom(name), Sexp::List(args)) = (&items[1], &items[2]) {
                if args.is_empty() {
                    out.insert(name.clone(), value(&items[4])?);
                }
            }
            return Ok(());
        }
        for i in items {
            collect_model(i, out)?;
        }
    }
    Ok(())
}

pub fn is_error(e: &Sexp) -> Option<String> {
    match e {
        Sexp::List(items) if e.head() == Some("error") => Some(
            items
                .get(1)
                .map(|s| match s {
                    Sexp::Atom(a) => a.trim_matches('"').to_string(),
                    other => format!("{other:?}"),
                })
                .unwrap_or_default(),
        ),
        _ => None,
    }
}
