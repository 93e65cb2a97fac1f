//! Recursive descent parser for the concrete syntax:
//!
//! ```text
//! com    ::= simple (";" com)?
//! simple ::= "skip" | ident ":=" aexp
//!          | "if" bexp "then" com "else" com "end"
//!          | "while" bexp "do" com "done"
//! aexp   ::= term (("+" | "-") term)*
//! term   ::= factor ("*" factor)*
//! factor ::= "-"? integer | ident | "(" aexp ")"
//! bexp   ::= bunary ("and" bunary)*
//! bunary ::= "not" bunary | "true" | "false" | aexp ("=" | "<=") aexp | "(" bexp ")"
//! ```

use super::{AExp, BExp, Com, ImpError, KEYWORDS};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Keyword(&'static str),
    Sym(&'static str),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer {v}"),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Keyword(k) => format!("keyword {k:?}"),
            Tok::Sym(s) => format!("{s:?}"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const SYMBOLS: [&str; 9] = [":=", "<=", ";", "+", "-", "*", "(", ")", "="];

fn lex(text: &str) -> Result<Vec<Token>, ImpError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let v = digits.parse::<u64>().map_err(|_| ImpError::Syntax {
                line,
                column,
                message: format!("integer literal {digits} is too large"),
            })?;
            Tok::Int(v)
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Keyword(k),
                None => Tok::Ident(word),
            }
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(**s))
                .ok_or_else(|| ImpError::Syntax {
                    line,
                    column,
                    message: format!("unexpected character {c:?}"),
                })?;
            i += sym.len();
            Tok::Sym(sym)
        };
        out.push(Token { tok, line, column });
        column += i - start;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ImpError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ImpError::Syntax {
            line: t.line,
            column: t.column,
            message: format!("expected {expected}, found {}", t.tok.describe()),
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.error(&tok.describe())
        }
    }

    fn com(&mut self) -> PResult<Com> {
        let first = self.simple()?;
        if self.eat(&Tok::Sym(";")) {
            Ok(Com::seq(first, self.com()?))
        } else {
            Ok(first)
        }
    }

    fn simple(&mut self) -> PResult<Com> {
        match self.peek().clone() {
            Tok::Keyword("skip") => {
                self.bump();
                Ok(Com::Skip)
            }
            Tok::Ident(name) => {
                self.bump();
                self.expect(Tok::Sym(":="))?;
                Ok(Com::Assign(name, self.aexp()?))
            }
            Tok::Keyword("if") => {
                self.bump();
                let b = self.bexp()?;
                self.expect(Tok::Keyword("then"))?;
                let t = self.com()?;
                self.expect(Tok::Keyword("else"))?;
                let e = self.com()?;
                self.expect(Tok::Keyword("end"))?;
                Ok(Com::if_(b, t, e))
            }
            Tok::Keyword("while") => {
                self.bump();
                let b = self.bexp()?;
                self.expect(Tok::Keyword("do"))?;
                let body = self.com()?;
                self.expect(Tok::Keyword("done"))?;
                Ok(Com::while_(b, body))
            }
            _ => self.error("a command"),
        }
    }

    fn aexp(&mut self) -> PResult<AExp> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Sym("+")) {
                acc = AExp::plus(acc, self.term()?);
            } else if self.eat(&Tok::Sym("-")) {
                acc = AExp::minus(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<AExp> {
        let mut acc = self.factor()?;
        while self.eat(&Tok::Sym("*")) {
            acc = AExp::times(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> PResult<AExp> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                i64::try_from(v)
                    .map(AExp::IntLit)
                    .or_else(|_| self.error("a 64-bit integer"))
            }
            Tok::Sym("-") => {
                self.bump();
                match self.peek().clone() {
                    Tok::Int(v) if v <= i64::MAX as u64 + 1 => {
                        self.bump();
                        Ok(AExp::IntLit((v as i64).wrapping_neg()))
                    }
                    _ => self.error("an integer after unary -"),
                }
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(AExp::Var(name))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.aexp()?;
                self.expect(Tok::Sym(")"))?;
                Ok(e)
            }
            _ => self.error("an arithmetic expression"),
        }
    }

    fn bexp(&mut self) -> PResult<BExp> {
        let mut acc = self.bunary()?;
        while self.eat(&Tok::Keyword("and")) {
            acc = BExp::and(acc, self.bunary()?);
        }
        Ok(acc)
    }

    fn bunary(&mut self) -> PResult<BExp> {
        match self.peek() {
            Tok::Keyword("not") => {
                self.bump();
                Ok(BExp::not(self.bunary()?))
            }
            Tok::Keyword("true") => {
                self.bump();
                Ok(BExp::BoolLit(true))
            }
            Tok::Keyword("false") => {
                self.bump();
                Ok(BExp::BoolLit(false))
            }
            Tok::Sym("(") => {
                let save = self.pos;
                if let Ok(cmp) = self.comparison() {
                    return Ok(cmp);
                }
                self.pos = save;
                self.bump();
                let b = self.bexp()?;
                self.expect(Tok::Sym(")"))?;
                Ok(b)
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> PResult<BExp> {
        let l = self.aexp()?;
        if self.eat(&Tok::Sym("=")) {
            Ok(BExp::Eq(l, self.aexp()?))
        } else if self.eat(&Tok::Sym("<=")) {
            Ok(BExp::Le(l, self.aexp()?))
        } else {
            self.error("\"=\" or \"<=\"")
        }
    }
}

/// Parses a whole program.
pub fn parse(text: &str) -> Result<Com, ImpError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let c = p.com()?;
    if *p.peek() != Tok::Eof {
        return p.error("\";\" or end of input");
    }
    Ok(c)
}
