//! Text grammars: algebra files and form expressions.
//!
//! Algebra files (UTF-8, `#` starts a line comment):
//!
//! ```text
//! file    := "dim" INT ";" (names)? (bracket | diff)*
//! names   := "generators" IDENT ("," IDENT)* ";"
//! bracket := "[" INT "," INT "]" "=" term ("+" term)* ";"
//! term    := RATIONAL "*" INT
//! diff    := "d" INT "=" form ";"        # optional differential block
//! RATIONAL := INT | INT "/" POSINT
//! ```
//!
//! A bracket `[j,i]` with `j > i` folds into `(i,j)` with negated
//! coefficients. A `d k = ...` statement declares the differential of the
//! k-th dual generator and is converted to brackets (`c_k^{ij}` is minus the
//! coefficient of `a_i^a_j`); if explicit brackets are also present the two
//! must agree.
//!
//! Form expressions:
//!
//! ```text
//! form := ("-")? term (("+"|"-") term)*
//! term := RATIONAL | (RATIONAL "*")? factor ("^" factor)*
//! factor := "a" INT | generator-name
//! ```
//!
//! Generator names are available when the algebra declares them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::algebra::StructureConstants;
use crate::exterior::Form;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, col {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Symbol(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match ch {
            '#' => {
                while let Some(&c) = chars.peek() {
                    chars.next();
                    bump(c, &mut line, &mut col);
                    if c == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let value: BigInt = digits.parse().expect("digits");
                tokens.push(Token {
                    tok: Tok::Int(value),
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        ident.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    tok: Tok::Ident(ident),
                    line: tline,
                    col: tcol,
                });
            }
            '[' | ']' | ',' | ';' | '=' | '*' | '+' | '-' | '/' | '^' => {
                chars.next();
                bump(ch, &mut line, &mut col);
                tokens.push(Token {
                    tok: Tok::Symbol(ch),
                    line: tline,
                    col: tcol,
                });
            }
            other => {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("unexpected character '{other}'"),
                ));
            }
        }
    }
    Ok(tokens)
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Cursor, ParseError> {
        let tokens = tokenize(text)?;
        let end_line = text.lines().count().max(1);
        let end_col = text.lines().last().map_or(1, |l| l.chars().count() + 1);
        Ok(Cursor {
            tokens,
            pos: 0,
            end_line,
            end_col,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map_or((self.end_line, self.end_col), |t| (t.line, t.col))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, message)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_symbol(&mut self, sym: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Symbol(c)) if *c == sym => {
                self.next();
                Ok(())
            }
            _ => Err(self.error(format!("expected '{sym}'"))),
        }
    }

    fn accept_symbol(&mut self, sym: char) -> bool {
        if matches!(self.peek(), Some(Tok::Symbol(c)) if *c == sym) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(id)) if id == word => {
                self.next();
                Ok(())
            }
            _ => Err(self.error(format!("expected keyword '{word}'"))),
        }
    }

    fn accept_keyword(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(id)) if id == word) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_unsigned(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(_)) => match self.next() {
                Some(Tok::Int(v)) => Ok(v),
                _ => unreachable!(),
            },
            _ => Err(self.error("expected an integer")),
        }
    }

    fn expect_index(&mut self, dim: usize) -> Result<usize, ParseError> {
        let err = self.error(format!("expected a generator index in 1..={dim}"));
        let value = self.expect_unsigned()?;
        let small: usize = value.try_into().map_err(|_| err.clone())?;
        if small < 1 || small > dim {
            return Err(err);
        }
        Ok(small)
    }

    /// RATIONAL with an optional leading minus sign.
    fn expect_rational(&mut self) -> Result<Rational, ParseError> {
        let negative = self.accept_symbol('-');
        let numer = self.expect_unsigned()?;
        let value = if self.accept_symbol('/') {
            let denom = self.expect_unsigned()?;
            if denom.is_zero() {
                return Err(self.error("denominator must be positive"));
            }
            Rational::new(numer, denom)
        } else {
            Rational::from_integer(numer)
        };
        Ok(if negative { -value } else { value })
    }
}

const RESERVED: &[&str] = &["dim", "generators", "d"];

/// Parses an algebra file into normalized structure constants.
pub fn parse_algebra(text: &str) -> Result<StructureConstants, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.expect_keyword("dim")?;
    let dim_big = cur.expect_unsigned()?;
    let dim: usize = dim_big
        .try_into()
        .map_err(|_| cur.error("dimension out of range"))?;
    if !(1..=crate::exterior::MAX_GENERATORS).contains(&dim) {
        return Err(cur.error(format!(
            "dimension must be in 1..={}",
            crate::exterior::MAX_GENERATORS
        )));
    }
    cur.expect_symbol(';')?;

    let mut sc = StructureConstants::abelian(dim);

    if cur.accept_keyword("generators") {
        let mut names = Vec::new();
        loop {
            match cur.peek() {
                Some(Tok::Ident(id)) => {
                    let id = id.clone();
                    if RESERVED.contains(&id.as_str()) {
                        return Err(cur.error(format!("'{id}' is reserved")));
                    }
                    if id.len() > 1
                        && id.starts_with('a')
                        && id[1..].chars().all(|c| c.is_ascii_digit())
                    {
                        return Err(
                            cur.error(format!("generator name '{id}' shadows index notation"))
                        );
                    }
                    if names.contains(&id) {
                        return Err(cur.error(format!("duplicate generator name '{id}'")));
                    }
                    names.push(id);
                    cur.next();
                }
                _ => return Err(cur.error("expected a generator name")),
            }
            if cur.accept_symbol(',') {
                continue;
            }
            cur.expect_symbol(';')?;
            break;
        }
        if names.len() != dim {
            return Err(cur.error(format!(
                "expected {dim} generator names, found {}",
                names.len()
            )));
        }
        sc.set_names(names);
    }

    let mut seen_brackets: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    let mut differentials: BTreeMap<usize, Form> = BTreeMap::new();
    let mut explicit = StructureConstants::abelian(dim);
    let mut any_bracket = false;

    loop {
        match cur.peek() {
            None => break,
            Some(Tok::Symbol('[')) => {
                let (bline, bcol) = cur.here();
                cur.next();
                let i = cur.expect_index(dim)?;
                cur.expect_symbol(',')?;
                let j = cur.expect_index(dim)?;
                cur.expect_symbol(']')?;
                cur.expect_symbol('=')?;
                let mut coeffs: Vec<(usize, Rational)> = Vec::new();
                loop {
                    let c = cur.expect_rational()?;
                    cur.expect_symbol('*')?;
                    let k = cur.expect_index(dim)?;
                    coeffs.push((k, c));
                    if cur.accept_symbol('+') {
                        continue;
                    }
                    cur.expect_symbol(';')?;
                    break;
                }
                let nontrivial = coeffs.iter().any(|(_, c)| !c.is_zero());
                if i == j {
                    if nontrivial {
                        return Err(ParseError::new(
                            bline,
                            bcol,
                            format!("[{i},{i}] must vanish"),
                        ));
                    }
                    continue;
                }
                let (lo, hi, flip) = if i < j { (i, j, false) } else { (j, i, true) };
                if seen_brackets.insert((lo, hi), ()).is_some() {
                    return Err(ParseError::new(
                        bline,
                        bcol,
                        format!("duplicate bracket for ({lo},{hi})"),
                    ));
                }
                if flip {
                    for (_, c) in coeffs.iter_mut() {
                        *c = -c.clone();
                    }
                }
                explicit.set_bracket(lo, hi, coeffs);
                any_bracket = true;
            }
            Some(Tok::Ident(id)) if id == "d" => {
                let (bline, bcol) = cur.here();
                cur.next();
                let k = cur.expect_index(dim)?;
                cur.expect_symbol('=')?;
                let form = parse_form_until_semicolon(&mut cur, &sc)?;
                cur.expect_symbol(';')?;
                if !form.is_zero() && !form.is_homogeneous_of(2) {
                    return Err(ParseError::new(
                        bline,
                        bcol,
                        "a differential statement must be a 2-form",
                    ));
                }
                if differentials.insert(k, form).is_some() {
                    return Err(ParseError::new(
                        bline,
                        bcol,
                        format!("duplicate differential for generator {k}"),
                    ));
                }
            }
            Some(_) => return Err(cur.error("expected a bracket, a differential, or end of file")),
        }
    }

    if differentials.is_empty() {
        for (&(i, j), coeffs) in explicit.stored_brackets() {
            sc.set_bracket(i, j, coeffs.clone());
        }
        return Ok(sc);
    }

    // convert d-statements: d a_k = sum q_ij a_i^a_j  =>  c_k^{ij} = -q_ij
    let mut from_diff = StructureConstants::abelian(dim);
    let mut per_pair: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
    for (&k, form) in &differentials {
        for (monomial, coeff) in form.terms() {
            let idx = monomial.indices();
            per_pair
                .entry((idx[0], idx[1]))
                .or_default()
                .push((k, -coeff.clone()));
        }
    }
    for ((i, j), coeffs) in per_pair {
        from_diff.set_bracket(i, j, coeffs);
    }
    if any_bracket {
        // consistency: generators covered by d-statements must produce the
        // same constants as the explicit brackets
        for (&(i, j), _) in explicit.stored_brackets() {
            let a = explicit.bracket(i, j);
            let b = from_diff.bracket(i, j);
            for k in differentials.keys() {
                if a[k - 1] != b[k - 1] {
                    return Err(ParseError::new(
                        1,
                        1,
                        format!(
                            "differential block disagrees with bracket [{i},{j}] on generator {k}"
                        ),
                    ));
                }
            }
        }
        for (&(i, j), _) in from_diff.stored_brackets() {
            let a = explicit.bracket(i, j);
            let b = from_diff.bracket(i, j);
            for k in differentials.keys() {
                if a[k - 1] != b[k - 1] {
                    return Err(ParseError::new(
                        1,
                        1,
                        format!(
                            "differential block disagrees with bracket [{i},{j}] on generator {k}"
                        ),
                    ));
                }
            }
        }
        for (&(i, j), coeffs) in explicit.stored_brackets() {
            sc.set_bracket(i, j, coeffs.clone());
        }
    } else {
        for (&(i, j), coeffs) in from_diff.stored_brackets() {
            sc.set_bracket(i, j, coeffs.clone());
        }
    }
    Ok(sc)
}

fn resolve_generator(
    cur: &Cursor,
    sc: &StructureConstants,
    ident: &str,
) -> Result<usize, ParseError> {
    if let Some(names) = sc.names() {
        if let Some(pos) = names.iter().position(|n| n == ident) {
            return Ok(pos + 1);
        }
    }
    if let Some(rest) = ident.strip_prefix('a') {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
            if let Ok(idx) = rest.parse::<usize>() {
                if idx >= 1 && idx <= sc.dim() {
                    return Ok(idx);
                }
                return Err(cur.error(format!(
                    "generator index {idx} out of range 1..={}",
                    sc.dim()
                )));
            }
        }
    }
    Err(cur.error(format!("unknown generator '{ident}'")))
}

fn parse_form_term(cur: &mut Cursor, sc: &StructureConstants) -> Result<Form, ParseError> {
    let dim = sc.dim();
    let mut coeff = Rational::from_integer(1.into());
    if matches!(cur.peek(), Some(Tok::Int(_))) {
        coeff = cur.expect_rational()?;
        if !cur.accept_symbol('*') {
            // bare scalar term
            return Ok(Form::scalar(dim, coeff));
        }
    }
    let mut acc = Form::one(dim);
    loop {
        match cur.peek() {
            Some(Tok::Ident(id)) => {
                let id = id.clone();
                let index = resolve_generator(cur, sc, &id)?;
                cur.next();
                let gen = Form::generator(dim, index).expect("index validated");
                acc = acc.wedge(&gen).expect("same dim");
            }
            _ => return Err(cur.error("expected a generator")),
        }
        if cur.accept_symbol('^') {
            continue;
        }
        break;
    }
    Ok(acc.scale(&coeff))
}

fn parse_form_until_semicolon(
    cur: &mut Cursor,
    sc: &StructureConstants,
) -> Result<Form, ParseError> {
    let mut total = Form::zero(sc.dim());
    let mut negate = cur.accept_symbol('-');
    loop {
        let term = parse_form_term(cur, sc)?;
        total = total
            .add(&if negate { term.neg() } else { term })
            .expect("same dim");
        if cur.accept_symbol('+') {
            negate = false;
            continue;
        }
        if cur.accept_symbol('-') {
            negate = true;
            continue;
        }
        break;
    }
    Ok(total)
}

/// Parses a form expression over the given algebra's generators.
pub fn parse_form(text: &str, sc: &StructureConstants) -> Result<Form, ParseError> {
    let mut cur = Cursor::new(text)?;
    if cur.peek().is_none() {
        return Err(cur.error("empty form expression"));
    }
    let form = parse_form_until_semicolon(&mut cur, sc)?;
    if cur.peek().is_some() {
        return Err(cur.error("trailing input after form expression"));
    }
    Ok(form)
}
