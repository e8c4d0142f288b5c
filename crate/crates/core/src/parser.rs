//! Text format for diagrams and rewrite rules.
//!
//! Files are lists of `key: value` statements. `#` starts a comment running
//! to the end of the line; whitespace and line breaks are otherwise free, so
//! long terms may wrap.
//!
//! Diagram files use the keys `name` (optional), `vars` (optional), `term`.
//! Rule files use `rule` (name, optional), `mode` (`equal` or `scalar`,
//! default `equal`), `side_condition` (optional), `vars` (optional), `lhs`,
//! `rhs`.
//!
//! Terms: `seq(t, ...)`, `par(t, ...)`, `Z(n, m, angle)`, `X(n, m, angle)`
//! (angle defaults to 0 when omitted), `H`, `cup`, `cap`, `swap`, `id`,
//! `tri`, `empty`.
//!
//! Angles are sums of terms: `pi`, `3*pi/4`, integer multiples of declared
//! variables (`a`, `2*a`), the literal `0`, or real radians written with an
//! `r` suffix (`1.5r`, `2r`).

use std::collections::BTreeMap;

use crate::angle::Angle;
use crate::diagram::{AngleExpr, Diagram, Generator};
use crate::rules::{CompareMode, RuleSchema, SideCondition};
use crate::ZxError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    /// Radian literal with the `r` suffix already consumed.
    Real(f64),
    LParen,
    RParen,
    Comma,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err_at(line: usize, col: usize, message: impl Into<String>) -> ZxError {
    ZxError::Parse { line, col, message: message.into() }
}

fn tokenize(src: &str) -> Result<Vec<Spanned>, ZxError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        let tok = match c {
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            ',' => {
                bump(&mut chars);
                Tok::Comma
            }
            ':' => {
                bump(&mut chars);
                Tok::Colon
            }
            '+' => {
                bump(&mut chars);
                Tok::Plus
            }
            '-' => {
                bump(&mut chars);
                Tok::Minus
            }
            '*' => {
                bump(&mut chars);
                Tok::Star
            }
            '/' => {
                bump(&mut chars);
                Tok::Slash
            }
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        text.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                let mut is_real = false;
                if chars.peek() == Some(&'.') {
                    is_real = true;
                    text.push(bump(&mut chars));
                    if !chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(err_at(tline, tcol, "expected digits after decimal point"));
                    }
                    while let Some(&c) = chars.peek() {
                        if c.is_ascii_digit() {
                            text.push(bump(&mut chars));
                        } else {
                            break;
                        }
                    }
                }
                if chars.peek() == Some(&'r') {
                    bump(&mut chars);
                    if chars.peek().is_some_and(|c| c.is_alphanumeric() || *c == '_') {
                        return Err(err_at(tline, tcol, "malformed radian literal"));
                    }
                    let v: f64 = text
                        .parse()
                        .map_err(|_| err_at(tline, tcol, "malformed radian literal"))?;
                    Tok::Real(v)
                } else if is_real {
                    return Err(err_at(
                        tline,
                        tcol,
                        "decimal angle needs an 'r' suffix (radians)",
                    ));
                } else {
                    let v: i64 = text
                        .parse()
                        .map_err(|_| err_at(tline, tcol, format!("integer out of range: {text}")))?;
                    Tok::Int(v)
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        text.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                Tok::Ident(text)
            }
            other => return Err(err_at(tline, tcol, format!("unexpected character {other:?}"))),
        };
        out.push(Spanned { tok, line: tline, col: tcol });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Declared variable names; identifiers outside this set are rejected.
    vars: Vec<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or((1, 1), |s| (s.line, s.col))
    }

    fn next(&mut self, what: &str) -> Result<Spanned, ZxError> {
        let s = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| {
                let (l, c) = self.here();
                err_at(l, c, format!("unexpected end of input, expected {what}"))
            })?;
        self.pos += 1;
        Ok(s)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ZxError> {
        let s = self.next(what)?;
        if s.tok == tok {
            Ok(())
        } else {
            Err(err_at(s.line, s.col, format!("expected {what}")))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self, what: &str) -> Result<usize, ZxError> {
        let s = self.next(what)?;
        match s.tok {
            Tok::Int(v) if v >= 0 => Ok(v as usize),
            _ => Err(err_at(s.line, s.col, format!("expected {what}"))),
        }
    }

    fn term(&mut self) -> Result<Diagram, ZxError> {
        let s = self.next("a term")?;
        let name = match &s.tok {
            Tok::Ident(name) => name.clone(),
            _ => return Err(err_at(s.line, s.col, "expected a term")),
        };
        match name.as_str() {
            "seq" | "par" => {
                self.expect(Tok::LParen, "'('")?;
                let mut parts = vec![self.term()?];
                while self.eat(&Tok::Comma) {
                    parts.push(self.term()?);
                }
                self.expect(Tok::RParen, "')'")?;
                if name == "seq" {
                    Ok(Diagram::Seq(parts))
                } else {
                    Ok(Diagram::Par(parts))
                }
            }
            "Z" | "z" | "X" | "x" => {
                self.expect(Tok::LParen, "'('")?;
                let inputs = self.nat("input wire count")?;
                self.expect(Tok::Comma, "','")?;
                let outputs = self.nat("output wire count")?;
                let phase = if self.eat(&Tok::Comma) {
                    self.angle_expr()?
                } else {
                    AngleExpr::zero()
                };
                self.expect(Tok::RParen, "')'")?;
                if name == "Z" || name == "z" {
                    Ok(Diagram::z(inputs, outputs, phase))
                } else {
                    Ok(Diagram::x(inputs, outputs, phase))
                }
            }
            "H" | "h" => Ok(Diagram::Gen(Generator::H)),
            "cup" => Ok(Diagram::Gen(Generator::Cup)),
            "cap" => Ok(Diagram::Gen(Generator::Cap)),
            "swap" => Ok(Diagram::Gen(Generator::Swap)),
            "id" => Ok(Diagram::Gen(Generator::Id)),
            "tri" => Ok(Diagram::Gen(Generator::Triangle)),
            "empty" => Ok(Diagram::Gen(Generator::Empty)),
            other => Err(err_at(s.line, s.col, format!("unknown generator {other:?}"))),
        }
    }

    fn angle_expr(&mut self) -> Result<AngleExpr, ZxError> {
        let mut negate = self.eat(&Tok::Minus);
        let mut acc = AngleExpr::zero();
        loop {
            let t = self.angle_term()?;
            acc = acc.add(&if negate { t.neg() } else { t });
            if self.eat(&Tok::Plus) {
                negate = false;
            } else if self.eat(&Tok::Minus) {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    /// One summand: `pi` forms, `k*var`, `var`, `0`, or a radian literal.
    fn angle_term(&mut self) -> Result<AngleExpr, ZxError> {
        let s = self.next("an angle")?;
        match &s.tok {
            Tok::Real(v) => Ok(AngleExpr::constant(Angle::real(*v))),
            Tok::Int(v) => {
                if self.eat(&Tok::Star) {
                    let t = self.next("'pi' or a variable")?;
                    match &t.tok {
                        Tok::Ident(id) if id == "pi" => {
                            let den = if self.eat(&Tok::Slash) { self.nat("denominator")? } else { 1 };
                            self.pi_multiple(*v, den, &t)
                        }
                        Tok::Ident(id) => Ok(self.variable(id, &t)?.scale(*v)),
                        _ => Err(err_at(t.line, t.col, "expected 'pi' or a variable")),
                    }
                } else if *v == 0 {
                    Ok(AngleExpr::zero())
                } else {
                    Err(err_at(
                        s.line,
                        s.col,
                        "bare integers other than 0 are not angles; write multiples of pi or use an 'r' suffix",
                    ))
                }
            }
            Tok::Ident(id) if id == "pi" => {
                let den = if self.eat(&Tok::Slash) { self.nat("denominator")? } else { 1 };
                self.pi_multiple(1, den, &s)
            }
            Tok::Ident(id) => self.variable(id, &s),
            _ => Err(err_at(s.line, s.col, "expected an angle")),
        }
    }

    fn pi_multiple(&self, num: i64, den: usize, at: &Spanned) -> Result<AngleExpr, ZxError> {
        if den == 0 {
            return Err(err_at(at.line, at.col, "zero denominator"));
        }
        let a = Angle::rational(num, den as i64)
            .map_err(|_| err_at(at.line, at.col, "zero denominator"))?;
        Ok(AngleExpr::constant(a))
    }

    fn variable(&self, name: &str, at: &Spanned) -> Result<AngleExpr, ZxError> {
        if self.vars.iter().any(|v| v == name) {
            Ok(AngleExpr::variable(name))
        } else {
            Err(err_at(
                at.line,
                at.col,
                format!("variable {name:?} is not declared; add it to 'vars'"),
            ))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

/// One `key: value` statement as a token slice.
struct Stmt {
    key: String,
    line: usize,
    col: usize,
    toks: Vec<Spanned>,
}

fn split_statements(src: &str) -> Result<Vec<Stmt>, ZxError> {
    let toks = tokenize(src)?;
    let mut stmts: Vec<Stmt> = Vec::new();
    let mut i = 0;
    let mut depth = 0usize;
    while i < toks.len() {
        let starts_stmt = depth == 0
            && matches!(&toks[i].tok, Tok::Ident(_))
            && matches!(toks.get(i + 1).map(|s| &s.tok), Some(Tok::Colon));
        if starts_stmt {
            let key = match &toks[i].tok {
                Tok::Ident(k) => k.clone(),
                _ => unreachable!(),
            };
            stmts.push(Stmt { key, line: toks[i].line, col: toks[i].col, toks: Vec::new() });
            i += 2;
            continue;
        }
        match &toks[i].tok {
            Tok::LParen => depth += 1,
            Tok::RParen => depth = depth.saturating_sub(1),
            _ => {}
        }
        match stmts.last_mut() {
            Some(stmt) => stmt.toks.push(toks[i].clone()),
            None => {
                return Err(err_at(
                    toks[i].line,
                    toks[i].col,
                    "expected a 'key:' statement",
                ))
            }
        }
        i += 1;
    }
    Ok(stmts)
}

fn stmt_parser(stmt: &Stmt, vars: &[String]) -> Parser {
    Parser { toks: stmt.toks.clone(), pos: 0, vars: vars.to_vec() }
}

fn finish(mut p: Parser, stmt: &Stmt) -> Result<(), ZxError> {
    if p.at_end() {
        Ok(())
    } else {
        let s = p.next("end of statement")?;
        Err(err_at(s.line, s.col, format!("trailing input after '{}' value", stmt.key)))
    }
}

fn parse_vars(stmt: &Stmt) -> Result<Vec<String>, ZxError> {
    let mut p = stmt_parser(stmt, &[]);
    let mut vars = Vec::new();
    loop {
        let s = p.next("a variable name")?;
        match &s.tok {
            Tok::Ident(name) if name != "pi" => {
                if vars.contains(name) {
                    return Err(err_at(s.line, s.col, format!("duplicate variable {name:?}")));
                }
                vars.push(name.clone());
            }
            _ => return Err(err_at(s.line, s.col, "expected a variable name")),
        }
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    finish(p, stmt)?;
    Ok(vars)
}

fn parse_ident_value(stmt: &Stmt) -> Result<String, ZxError> {
    let mut p = stmt_parser(stmt, &[]);
    let s = p.next("an identifier")?;
    let name = match &s.tok {
        Tok::Ident(name) => name.clone(),
        _ => return Err(err_at(s.line, s.col, "expected an identifier")),
    };
    finish(p, stmt)?;
    Ok(name)
}

fn parse_term_value(stmt: &Stmt, vars: &[String]) -> Result<Diagram, ZxError> {
    let mut p = stmt_parser(stmt, vars);
    let d = p.term()?;
    finish(p, stmt)?;
    Ok(d)
}

struct Collected {
    by_key: BTreeMap<String, Stmt>,
}

fn collect(src: &str, allowed: &[&str]) -> Result<Collected, ZxError> {
    let stmts = split_statements(src)?;
    let mut by_key: BTreeMap<String, Stmt> = BTreeMap::new();
    for stmt in stmts {
        if !allowed.contains(&stmt.key.as_str()) {
            return Err(err_at(stmt.line, stmt.col, format!("unknown key {:?}", stmt.key)));
        }
        if by_key.contains_key(&stmt.key) {
            return Err(err_at(stmt.line, stmt.col, format!("duplicate key {:?}", stmt.key)));
        }
        by_key.insert(stmt.key.clone(), stmt);
    }
    Ok(Collected { by_key })
}

/// A parsed diagram file: an optional name, declared variables, one term.
#[derive(Debug, Clone)]
pub struct DiagramFile {
    pub name: Option<String>,
    pub vars: Vec<String>,
    pub term: Diagram,
}

pub fn parse_diagram_file(src: &str) -> Result<DiagramFile, ZxError> {
    let c = collect(src, &["name", "vars", "term"])?;
    let vars = match c.by_key.get("vars") {
        Some(stmt) => parse_vars(stmt)?,
        None => Vec::new(),
    };
    let name = match c.by_key.get("name") {
        Some(stmt) => Some(parse_ident_value(stmt)?),
        None => None,
    };
    let term_stmt = c
        .by_key
        .get("term")
        .ok_or_else(|| err_at(1, 1, "missing required key 'term'"))?;
    let term = parse_term_value(term_stmt, &vars)?;
    term.validate()?;
    Ok(DiagramFile { name, vars, term })
}

pub fn parse_rule_file(src: &str) -> Result<RuleSchema, ZxError> {
    let c = collect(src, &["rule", "name", "mode", "side_condition", "vars", "lhs", "rhs"])?;
    let vars = match c.by_key.get("vars") {
        Some(stmt) => parse_vars(stmt)?,
        None => Vec::new(),
    };
    let name = match c.by_key.get("rule").or_else(|| c.by_key.get("name")) {
        Some(stmt) => parse_ident_value(stmt)?,
        None => "unnamed".to_owned(),
    };
    let mode = match c.by_key.get("mode") {
        Some(stmt) => {
            let v = parse_ident_value(stmt)?;
            match v.as_str() {
                "equal" => CompareMode::Equal,
                "scalar" => CompareMode::UpToScalar,
                _ => {
                    return Err(err_at(
                        stmt.line,
                        stmt.col,
                        format!("mode must be 'equal' or 'scalar', got {v:?}"),
                    ))
                }
            }
        }
        None => CompareMode::Equal,
    };
    let side_condition = match c.by_key.get("side_condition") {
        Some(stmt) => {
            let v = parse_ident_value(stmt)?;
            match v.as_str() {
                "rule_a" => Some(SideCondition::RuleA),
                _ => {
                    return Err(err_at(
                        stmt.line,
                        stmt.col,
                        format!("unknown side condition {v:?}"),
                    ))
                }
            }
        }
        None => None,
    };
    let lhs_stmt = c.by_key.get("lhs").ok_or_else(|| err_at(1, 1, "missing required key 'lhs'"))?;
    let rhs_stmt = c.by_key.get("rhs").ok_or_else(|| err_at(1, 1, "missing required key 'rhs'"))?;
    let lhs = parse_term_value(lhs_stmt, &vars)?;
    let rhs = parse_term_value(rhs_stmt, &vars)?;
    lhs.validate()?;
    rhs.validate()?;
    let schema = RuleSchema { name, mode, side_condition, vars, lhs, rhs };
    schema.validate()?;
    Ok(schema)
}

/// Parses a bare term with the given variables in scope.
pub fn parse_term(src: &str, vars: &[String]) -> Result<Diagram, ZxError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, vars: vars.to_vec() };
    let d = p.term()?;
    if !p.at_end() {
        let s = p.next("end of input")?;
        return Err(err_at(s.line, s.col, "trailing input after term"));
    }
    d.validate()?;
    Ok(d)
}

/// Parses a constant angle (no variables), e.g. `pi/3`, `2r`, `0`.
pub fn parse_angle_value(src: &str) -> Result<Angle, ZxError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, vars: Vec::new() };
    let e = p.angle_expr()?;
    if !p.at_end() {
        let s = p.next("end of input")?;
        return Err(err_at(s.line, s.col, "trailing input after angle"));
    }
    Ok(e.as_constant().expect("no variables were in scope").clone())
}

/// Parses `name=angle` pairs separated by commas, e.g. `a=pi/3,b=0.5r`.
pub fn parse_assignments(src: &str) -> Result<BTreeMap<String, Angle>, ZxError> {
    let mut out = BTreeMap::new();
    for piece in src.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (name, value) = piece.split_once('=').ok_or_else(|| {
            ZxError::Invalid(format!("assignment {piece:?} is not of the form name=angle"))
        })?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(ZxError::Invalid(format!("bad variable name {name:?}")));
        }
        out.insert(name.to_owned(), parse_angle_value(value.trim())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::RationalAngle;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_generators_and_round_trips() {
        let srcs = [
            "Z(2, 1, pi/2)",
            "X(0, 3, 3*pi/4)",
            "seq(Z(1, 2, a), par(H, id))",
            "par(cup, cap, swap, tri, empty)",
            "seq(Z(1, 1, 2*a - b + pi), X(1, 0))",
        ];
        for src in srcs {
            let d = parse_term(src, &vars(&["a", "b"])).unwrap();
            let back = parse_term(&format!("{d}"), &vars(&["a", "b"])).unwrap();
            assert_eq!(d, back, "display round trip for {src}");
        }
    }

    #[test]
    fn angle_forms() {
        assert_eq!(
            parse_angle_value("3*pi/2").unwrap(),
            Angle::Rational(RationalAngle::of(3, 2))
        );
        assert_eq!(parse_angle_value("pi").unwrap(), Angle::Rational(RationalAngle::PI));
        assert_eq!(parse_angle_value("0").unwrap(), Angle::ZERO);
        assert_eq!(
            parse_angle_value("-pi/2").unwrap(),
            Angle::Rational(RationalAngle::of(3, 2))
        );
        assert_eq!(parse_angle_value("2r").unwrap(), Angle::real(2.0));
        assert_eq!(parse_angle_value("0.25r").unwrap(), Angle::real(0.25));
        assert_eq!(
            parse_angle_value("pi/2 + pi/3").unwrap(),
            Angle::Rational(RationalAngle::of(5, 6))
        );
    }

    #[test]
    fn diagram_file_with_comments() {
        let src = "\
# a two spider chain
name: chain
vars: a, b
term: seq(Z(2, 1, a),   # upper half
          Z(1, 2, b))
";
        let f = parse_diagram_file(src).unwrap();
        assert_eq!(f.name.as_deref(), Some("chain"));
        assert_eq!(f.vars, vars(&["a", "b"]));
        assert_eq!(f.term.arity(), (2, 2));
    }

    #[test]
    fn rule_file_defaults() {
        let src = "rule: s2\nlhs: Z(1, 1, 0)\nrhs: id\n";
        let r = parse_rule_file(src).unwrap();
        assert_eq!(r.name, "s2");
        assert_eq!(r.mode, CompareMode::Equal);
        assert!(r.side_condition.is_none());
        assert!(r.vars.is_empty());
    }

    #[test]
    fn error_positions() {
        let err = parse_term("seq(Z(1, 1, 0), bogus)", &[]).unwrap_err();
        match err {
            ZxError::Parse { line, col, message } => {
                assert_eq!((line, col), (1, 17));
                assert!(message.contains("bogus"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_diagram_file("term: Z(1, 1,\n  c)").unwrap_err();
        match err {
            ZxError::Parse { line, col, message } => {
                assert_eq!((line, col), (2, 3));
                assert!(message.contains("not declared"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_diagram_file("term: Z(1, 1, 0) term: id").is_err(), "duplicate key");
        assert!(parse_diagram_file("name: d").is_err(), "missing term");
        assert!(parse_term("Z(1, 1, 2)", &[]).is_err(), "bare int angle");
        assert!(parse_term("Z(1, 1, 0.5)", &[]).is_err(), "decimal without r");
        assert!(parse_term("seq(Z(1, 2, 0)", &[]).is_err(), "unbalanced paren");
        assert!(parse_term("seq(Z(1, 2, 0), Z(1, 1, 0))", &[]).is_err(), "arity mismatch");
        assert!(parse_rule_file("lhs: id\nrhs: id\nmode: sideways").is_err(), "bad mode");
    }

    #[test]
    fn assignments() {
        let m = parse_assignments("a=pi/3, b = 0.5r").unwrap();
        assert_eq!(m["a"], Angle::Rational(RationalAngle::of(1, 3)));
        assert_eq!(m["b"], Angle::real(0.5));
        assert!(parse_assignments("a").is_err());
    }
}
