//! Tokenizer and recursive-descent parser for manifests.

use std::fmt;

use crate::manifest::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Arrow,
    Minus,
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i);
            }
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i);
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse().map_err(|_| SyntaxError { line: l0, col: c0, message: format!("integer {s} is too large") })?;
            out.push(Token { tok: Tok::Int(v), line: l0, col: c0 });
            continue;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            // `-` joins identifiers such as `s-smooth`
            while i < chars.len()
                && (is_ident_char(chars[i]) || (chars[i] == '-' && i + 1 < chars.len() && chars[i + 1].is_alphabetic()))
            {
                advance(1, &mut i);
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
            continue;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(2, &mut i);
            Tok::Arrow
        } else if c == '-' {
            advance(1, &mut i);
            Tok::Minus
        } else if "{}();:=,^".contains(c) {
            advance(1, &mut i);
            Tok::Sym(c)
        } else {
            return Err(SyntaxError { line: l0, col: c0, message: format!("unexpected character `{c}`") });
        };
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn error<T>(&self, message: String) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(SyntaxError { line: t.line, col: t.col, message })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected a name, found {t}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            t => self.error(format!("expected `{kw}`, found {t}")),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(if neg { -v } else { v })
            }
            t => self.error(format!("expected an integer, found {t}")),
        }
    }

    fn word(&mut self) -> PResult<WordAst> {
        if *self.peek() == Tok::Int(1) {
            self.bump();
            return Ok(Vec::new());
        }
        let mut w = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            // a name followed by `:` starts the next map in a `via` clause
            if *self.peek_at(1) == Tok::Sym(':') || *self.peek_at(1) == Tok::Arrow {
                break;
            }
            let g = self.ident()?;
            let e = if self.eat('^') { self.int()? } else { 1 };
            w.push((g, e));
        }
        if w.is_empty() {
            return self.error(format!("expected a word, found {}", self.peek()));
        }
        Ok(w)
    }

    fn end_statement(&mut self) {
        self.eat(';');
    }

    fn monoid(&mut self) -> PResult<MonoidDef> {
        let name = self.ident()?;
        self.expect('{')?;
        self.keyword("gens")?;
        self.expect(':')?;
        let mut gens = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            gens.push(self.ident()?);
        }
        self.expect(';')?;
        let mut inv = Vec::new();
        if *self.peek() == Tok::Ident("inv".into()) {
            self.bump();
            self.expect(':')?;
            while let Tok::Ident(_) = self.peek() {
                inv.push(self.ident()?);
            }
            self.expect(';')?;
        }
        let mut rels = Vec::new();
        while *self.peek() == Tok::Ident("rel".into()) {
            self.bump();
            self.expect(':')?;
            let l = self.word()?;
            self.expect('=')?;
            let r = self.word()?;
            self.expect(';')?;
            rels.push((l, r));
        }
        self.expect('}')?;
        Ok(MonoidDef { name, gens, inv, rels })
    }

    fn spec_call(&mut self) -> PResult<String> {
        self.keyword("spec")?;
        self.expect('(')?;
        let m = self.ident()?;
        self.expect(')')?;
        Ok(m)
    }

    fn maplist(&mut self) -> PResult<Vec<(String, WordAst)>> {
        let mut out = Vec::new();
        loop {
            let g = self.ident()?;
            if *self.peek() != Tok::Arrow {
                return self.error(format!("expected `->`, found {}", self.peek()));
            }
            self.bump();
            out.push((g, self.word()?));
            let next_is_map = matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Sym(':');
            if *self.peek() != Tok::Sym(',') || next_is_map {
                return Ok(out);
            }
            self.bump();
        }
    }

    fn glue(&mut self) -> PResult<SchemeExpr> {
        self.expect('{')?;
        let mut charts = Vec::new();
        let mut overlaps = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Sym('}') => {
                    self.bump();
                    return Ok(SchemeExpr::Glue { charts, overlaps });
                }
                Tok::Ident(k) if k == "chart" => {
                    self.bump();
                    let name = self.ident()?;
                    self.expect('=')?;
                    let monoid = self.spec_call()?;
                    self.expect(';')?;
                    charts.push(ChartDef { name, monoid });
                }
                Tok::Ident(k) if k == "overlap" => {
                    self.bump();
                    let left = self.ident()?;
                    let right = self.ident()?;
                    self.expect('=')?;
                    let monoid = self.spec_call()?;
                    self.keyword("via")?;
                    let mut maps = Vec::new();
                    for k in 0..2 {
                        if k == 1 {
                            self.expect(',')?;
                        }
                        let c = self.ident()?;
                        self.expect(':')?;
                        maps.push((c, self.maplist()?));
                    }
                    self.expect(';')?;
                    overlaps.push(OverlapDef { left, right, monoid, maps });
                }
                t => return self.error(format!("expected `chart`, `overlap` or `}}`, found {t}")),
            }
        }
    }

    fn scheme(&mut self) -> PResult<SchemeDef> {
        let name = self.ident()?;
        self.expect('=')?;
        let head = self.ident()?;
        let expr = match head.as_str() {
            "spec" => {
                self.expect('(')?;
                let m = self.ident()?;
                self.expect(')')?;
                SchemeExpr::Spec(m)
            }
            "P" => {
                self.expect('(')?;
                let n = self.int()?;
                if n < 0 {
                    return self.error("projective dimension must be nonnegative".into());
                }
                self.expect(')')?;
                SchemeExpr::Projective(n as usize)
            }
            "product" => {
                self.expect('(')?;
                let a = self.ident()?;
                self.expect(',')?;
                let b = self.ident()?;
                self.expect(')')?;
                SchemeExpr::Product(a, b)
            }
            "glue" => self.glue()?,
            other => {
                self.pos -= 1;
                return self.error(format!("unknown scheme constructor `{other}`"));
            }
        };
        Ok(SchemeDef { name, expr })
    }

    fn task(&mut self) -> PResult<Task> {
        let name = self.ident()?;
        self.expect('(')?;
        let mut args = Vec::new();
        if !self.eat(')') {
            loop {
                let a = match self.peek().clone() {
                    Tok::Ident(s) => {
                        self.bump();
                        Arg::Name(s)
                    }
                    Tok::Int(_) | Tok::Minus => Arg::Int(self.int()?),
                    t => return self.error(format!("expected an argument, found {t}")),
                };
                args.push(a);
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(Task { name, args })
    }

    fn manifest(&mut self) -> PResult<Manifest> {
        let mut items = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Eof => return Ok(Manifest { items }),
                Tok::Sym(';') => {
                    self.bump();
                }
                Tok::Ident(k) if k == "monoid" => {
                    self.bump();
                    items.push(Item::Monoid(self.monoid()?));
                    self.end_statement();
                }
                Tok::Ident(k) if k == "scheme" => {
                    self.bump();
                    items.push(Item::Scheme(self.scheme()?));
                    self.end_statement();
                }
                Tok::Ident(k) if k == "compute" => {
                    self.bump();
                    items.push(Item::Compute(self.task()?));
                    self.end_statement();
                }
                t => return self.error(format!("expected `monoid`, `scheme` or `compute`, found {t}")),
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Manifest, SyntaxError> {
    let toks = tokenize(src)?;
    Parser { toks, pos: 0 }.manifest()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_monoid() {
        let m = parse("monoid M { gens: a b e; rel: a b = a b e; rel: e e = e; }").unwrap();
        let Item::Monoid(d) = &m.items[0] else { panic!() };
        assert_eq!(d.gens, vec!["a", "b", "e"]);
        assert_eq!(d.rels[1].0, vec![("e".to_string(), 1), ("e".to_string(), 1)]);
    }

    #[test]
    fn projective_task() {
        let m = parse("scheme X = P(2); compute pic(X);").unwrap();
        assert_eq!(m.tasks().count(), 1);
        assert_eq!(m.schemes().next().unwrap().expr, SchemeExpr::Projective(2));
    }

    #[test]
    fn glue_and_comments() {
        let src = "# the projective line\n\
                   monoid L { gens: t; }\n\
                   monoid T { gens: t; inv: t; }\n\
                   scheme P = glue { chart A = spec(L); chart B = spec(L);\n\
                     overlap A B = spec(T) via A: t -> t, B: t -> t^-1; }\n\
                   compute check(s-smooth, P)";
        let m = parse(src).unwrap();
        let SchemeExpr::Glue { overlaps, .. } = &m.schemes().next().unwrap().expr else { panic!() };
        assert_eq!(overlaps[0].maps[1], ("B".to_string(), vec![("t".to_string(), vec![("t".to_string(), -1)])]));
        assert_eq!(m.tasks().next().unwrap().args[0], Arg::Name("s-smooth".into()));
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse("monoid M {\n  gens a; }").unwrap_err();
        assert_eq!((e.line, e.col), (2, 8));
        let e = parse("scheme X = Q(1);").unwrap_err();
        assert!(e.message.contains("unknown scheme constructor"));
    }

    #[test]
    fn round_trip() {
        let src = "monoid M { gens: a b e; rel: a b = a b e; rel: e^2 = e; } monoid Z { gens: t; inv: t; rel: 1 = 1; }\n\
                   scheme X = product(Y, Y); scheme Y = spec(M);\n\
                   compute cohomology(X, 2)";
        let m = parse(src).unwrap();
        assert_eq!(parse(&m.to_string()).unwrap(), m);
    }
}
