use num_traits::{One, Zero};

use super::lexer::{lex, Pos, Tok, Token};
use super::ParseError;
use crate::polyring::{parse_rational, Polynomial, Rational, Vars, VectorField};
use crate::semialg::{Formula, Problem, Relation};

const SECTIONS: [&str; 6] = ["vars", "params", "field", "domain", "init", "invariant"];

struct Parser<'a> {
    toks: &'a [Token],
    i: usize,
    vars: Option<&'a Vars>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.i];
        if t.tok != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> ParseError {
        ParseError::at(
            self.pos(),
            format!("expected {what}, found {}", self.peek().describe()),
        )
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn vars(&self) -> &'a Vars {
        self.vars.expect("variables declared before expressions")
    }

    fn is_section_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if SECTIONS.contains(&s.as_str()))
            && self.toks.get(self.i + 1).map(|t| &t.tok) == Some(&Tok::Colon)
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> PResult<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> PResult<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = &acc * &self.unary()?;
            } else if self.peek() == &Tok::Slash {
                let pos = self.toks[self.i + 1].pos;
                self.bump();
                let d = self.unary()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::one() / c)),
                    Some(_) => return Err(ParseError::at(pos, "division by zero")),
                    None => {
                        return Err(ParseError::at(
                            pos,
                            "division is only allowed by a constant",
                        ))
                    }
                }
            } else if self.implicit_product() {
                return Err(ParseError::at(self.pos(), "missing `*` between factors"));
            } else {
                return Ok(acc);
            }
        }
    }

    // A factor directly after another one, as in `2x` or `x(y + 1)`. An
    // identifier followed by `:` or `'` starts the next section or equation.
    fn implicit_product(&self) -> bool {
        let next = self.toks.get(self.i + 1).map(|t| &t.tok);
        match self.peek() {
            Tok::Number(_) | Tok::LParen => true,
            Tok::Ident(s) => {
                s != "true"
                    && s != "false"
                    && next != Some(&Tok::Colon)
                    && next != Some(&Tok::Prime)
            }
            _ => false,
        }
    }

    fn unary(&mut self) -> PResult<Polynomial> {
        if self.eat(&Tok::Minus) {
            Ok(-&self.unary()?)
        } else if self.eat(&Tok::Plus) {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> PResult<Polynomial> {
        let base = self.primary()?;
        if self.eat(&Tok::Caret) {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Number(s) => {
                    self.bump();
                    let e = s
                        .parse::<u32>()
                        .ok()
                        .filter(|e| *e <= 1000)
                        .ok_or_else(|| {
                            ParseError::at(
                                pos,
                                format!("exponent `{s}` is not a small non-negative integer"),
                            )
                        })?;
                    Ok(base.pow(e))
                }
                _ => Err(self.unexpected("an integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> PResult<Polynomial> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Number(s) => {
                self.bump();
                let q = parse_rational(&s).map_err(|e| ParseError::at(pos, e.to_string()))?;
                Ok(Polynomial::constant(self.vars(), q))
            }
            Tok::Ident(name) => {
                self.bump();
                Polynomial::var_named(self.vars(), &name)
                    .ok_or_else(|| ParseError::at(pos, format!("undeclared variable `{name}`")))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn relation(&mut self) -> Option<Relation> {
        let r = match self.peek() {
            Tok::Ge => Relation::Ge,
            Tok::Gt => Relation::Gt,
            Tok::Le => Relation::Le,
            Tok::Lt => Relation::Lt,
            Tok::Eq => Relation::Eq,
            Tok::Ne => Relation::Ne,
            _ => return None,
        };
        self.bump();
        Some(r)
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.expr()?;
        let rel = self
            .relation()
            .ok_or_else(|| self.unexpected("a relation (>=, >, <=, <, =, !=)"))?;
        let rhs = self.expr()?;
        Ok(Formula::atom(&lhs - &rhs, rel))
    }

    // implies := or ('->' implies)?
    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            Ok(Formula::implies(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::Or) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.negation()?];
        while self.eat(&Tok::And) {
            parts.push(self.negation()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn negation(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Not) {
            Ok(Formula::not(self.negation()?))
        } else {
            self.basic()
        }
    }

    fn basic(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Ident(s) if s == "true" => {
                self.bump();
                return Ok(Formula::True);
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                return Ok(Formula::False);
            }
            _ => {}
        }
        if self.peek() != &Tok::LParen {
            return self.atom();
        }
        // `(` opens either a polynomial or a formula; try the atom reading
        // first and keep whichever error got further.
        let start = self.i;
        let atom_err = match self.atom() {
            Ok(a) => return Ok(a),
            Err(e) => e,
        };
        self.i = start;
        self.bump();
        let res = self
            .formula()
            .and_then(|f| self.expect(Tok::RParen, "`)`").map(|_| f));
        match res {
            Ok(f) => Ok(f),
            Err(e) if (e.line, e.col) >= (atom_err.line, atom_err.col) => Err(e),
            Err(_) => Err(atom_err),
        }
    }

    fn name_list(&mut self) -> PResult<Vec<(String, Pos)>> {
        let mut out = Vec::new();
        if self.is_section_start() || self.peek() == &Tok::Eof {
            return Ok(out);
        }
        loop {
            out.push(self.ident("a variable name")?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn end_of_section(&mut self) -> PResult<()> {
        self.eat(&Tok::Semi);
        let header = matches!(self.peek(), Tok::Ident(_))
            && self.toks.get(self.i + 1).map(|t| &t.tok) == Some(&Tok::Colon);
        if header || self.peek() == &Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of section"))
        }
    }
}

/// Parses one formula over `vars`; variables must be declared there.
pub fn parse_formula(text: &str, vars: &Vars) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        i: 0,
        vars: Some(vars),
    };
    let f = p.formula()?;
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected("end of formula"));
    }
    Ok(f)
}

/// Parses one polynomial over `vars`.
pub fn parse_polynomial(text: &str, vars: &Vars) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        i: 0,
        vars: Some(vars),
    };
    let e = p.expr()?;
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected("end of expression"));
    }
    Ok(e)
}

fn check_names(names: &[(String, Pos)], seen: &mut Vec<String>) -> PResult<()> {
    for (n, pos) in names {
        if SECTIONS.contains(&n.as_str()) || n == "true" || n == "false" {
            return Err(ParseError::at(*pos, format!("`{n}` is reserved")));
        }
        if seen.contains(n) {
            return Err(ParseError::at(*pos, format!("`{n}` declared twice")));
        }
        seen.push(n.clone());
    }
    Ok(())
}

fn formula_params(f: &Formula, vars: &Vars) -> Vec<String> {
    f.support()
        .into_iter()
        .filter(|&i| vars.is_param(i))
        .map(|i| vars.name(i).to_string())
        .collect()
}

/// Parses a problem file. Sections may appear in any order after `vars:`
/// and `params:`; `domain:` defaults to `true`.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        i: 0,
        vars: None,
    };

    // Declarations first: vars and params may come in either order but
    // before anything that mentions them.
    let mut state = None;
    let mut params = None;
    while let Tok::Ident(s) = p.peek().clone() {
        if !p.is_section_start() || !(s == "vars" || s == "params") {
            break;
        }
        let pos = p.pos();
        p.bump();
        p.bump();
        let names = p.name_list()?;
        p.end_of_section()?;
        let slot = if s == "vars" { &mut state } else { &mut params };
        if slot.is_some() {
            return Err(ParseError::at(pos, format!("duplicate `{s}:` section")));
        }
        *slot = Some(names);
    }
    let state = state
        .ok_or_else(|| ParseError::at(p.pos(), "problem must start with a `vars:` section"))?;
    let params = params.unwrap_or_default();
    if state.is_empty() {
        return Err(ParseError::at(p.pos(), "no state variables declared"));
    }
    let mut seen = Vec::new();
    check_names(&state, &mut seen)?;
    check_names(&params, &mut seen)?;
    let state_names: Vec<&str> = state.iter().map(|(n, _)| n.as_str()).collect();
    let param_names: Vec<&str> = params.iter().map(|(n, _)| n.as_str()).collect();
    let vars = Vars::new(&state_names, &param_names);
    p.vars = Some(&vars);

    let mut field: Option<(Vec<Option<Polynomial>>, Pos)> = None;
    let mut domain = None;
    let mut init = None;
    let mut invariant = None;
    while p.peek() != &Tok::Eof {
        let pos = p.pos();
        if !p.is_section_start() {
            if let (Tok::Ident(s), Some(Tok::Colon)) =
                (p.peek(), p.toks.get(p.i + 1).map(|t| &t.tok))
            {
                return Err(ParseError::at(pos, format!("unknown section `{s}:`")));
            }
            return Err(p.unexpected("a section keyword"));
        }
        let (name, _) = p.ident("a section keyword")?;
        p.bump();
        let dup = || ParseError::at(pos, format!("duplicate `{name}:` section"));
        match name.as_str() {
            "vars" | "params" => {
                return Err(ParseError::at(
                    pos,
                    format!("`{name}:` must precede the other sections"),
                ))
            }
            "field" => {
                if field.is_some() {
                    return Err(dup());
                }
                let mut comps: Vec<Option<Polynomial>> = vec![None; vars.n_state()];
                loop {
                    let (v, vpos) = p.ident("a state variable")?;
                    let idx = vars
                        .index_of(&v)
                        .filter(|&i| !vars.is_param(i))
                        .ok_or_else(|| {
                            ParseError::at(vpos, format!("`{v}` is not a state variable"))
                        })?;
                    p.expect(Tok::Prime, "`'`")?;
                    p.expect(Tok::Eq, "`=`")?;
                    let rhs_pos = p.pos();
                    let rhs = p.expr()?;
                    if let Some(i) = rhs.support().into_iter().find(|&i| vars.is_param(i)) {
                        return Err(ParseError::at(
                            rhs_pos,
                            format!("parameter `{}` in the vector field; fix system constants to rationals", vars.name(i)),
                        ));
                    }
                    if comps[idx].replace(rhs).is_some() {
                        return Err(ParseError::at(vpos, format!("two equations for `{v}'`")));
                    }
                    if !p.eat(&Tok::Semi) || p.is_section_start() || p.peek() == &Tok::Eof {
                        break;
                    }
                }
                p.end_of_section()?;
                field = Some((comps, pos));
            }
            "domain" | "init" | "invariant" => {
                let fpos = p.pos();
                let f = p.formula()?;
                p.end_of_section()?;
                if name != "invariant" {
                    if let Some(u) = formula_params(&f, &vars).first() {
                        return Err(ParseError::at(
                            fpos,
                            format!("parameter `{u}` may only occur in the invariant"),
                        ));
                    }
                }
                let slot = match name.as_str() {
                    "domain" => &mut domain,
                    "init" => &mut init,
                    _ => &mut invariant,
                };
                if slot.is_some() {
                    return Err(dup());
                }
                *slot = Some((f, fpos));
            }
            _ => unreachable!(),
        }
    }
    let end = p.pos();
    let (comps, fpos) = field.ok_or_else(|| ParseError::at(end, "missing `field:` section"))?;
    let missing: Vec<&str> = comps
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(i, _)| vars.name(i))
        .collect();
    if !missing.is_empty() {
        return Err(ParseError::at(
            fpos,
            format!(
                "field has {} equation(s) for {} state variable(s); missing {}",
                vars.n_state() - missing.len(),
                vars.n_state(),
                missing.join(", ")
            ),
        ));
    }
    let field = VectorField::new(&vars, comps.into_iter().map(Option::unwrap).collect())
        .map_err(|e| ParseError::at(fpos, e.to_string()))?;
    let (init, _) = init.ok_or_else(|| ParseError::at(end, "missing `init:` section"))?;
    let (invariant, _) =
        invariant.ok_or_else(|| ParseError::at(end, "missing `invariant:` section"))?;
    let used = formula_params(&invariant, &vars);
    if let Some((u, upos)) = params.iter().find(|(u, _)| !used.contains(u)) {
        return Err(ParseError::at(
            *upos,
            format!("parameter `{u}` does not occur in the invariant"),
        ));
    }
    Ok(Problem {
        vars,
        field,
        domain: domain.map(|(f, _)| f).unwrap_or(Formula::True),
        init,
        invariant,
    })
}

/// Prints a problem in the syntax accepted by [`parse_problem`].
pub fn print_problem(prob: &Problem) -> String {
    let v = &prob.vars;
    let mut s = format!("vars: {}\n", v.state_names().join(", "));
    if v.n_params() > 0 {
        s += &format!("params: {}\n", v.param_names().join(", "));
    }
    let eqs: Vec<String> = v
        .state_names()
        .iter()
        .zip(prob.field.components())
        .map(|(n, c)| format!("{n}' = {c}"))
        .collect();
    s += &format!("field: {}\n", eqs.join("; "));
    if !prob.domain.is_true() {
        s += &format!("domain: {}\n", prob.domain);
    }
    s += &format!("init: {}\n", prob.init);
    s += &format!("invariant: {}\n", prob.invariant);
    s
}
