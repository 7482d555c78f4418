//! Arithmetic expressions in `x` for problem files.
//!
//! Grammar: numbers, `x`, `pi`, `e`, `alpha`, `beta`, `r`, parentheses,
//! unary `+`/`-`, binary `+ - * /` and right-associative `^`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Var {
    X,
    Alpha,
    Beta,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(Var),
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
}

/// Values of the named parameters an expression may refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Env {
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(src: &str, line: usize, col0: usize) -> Result<Lexed> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse::<f64>().map_err(|_| Error::Parse {
                line,
                column: col,
                message: format!("malformed number `{text}`"),
            })?;
            toks.push((Tok::Num(v), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(Error::Parse { line, column: col, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(Lexed { toks, end: col0 + chars.len() })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end)
    }

    fn err(&self, message: String) -> Error {
        Error::Parse { line: self.line, column: self.col(), message }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                Op::Add
            } else if self.eat('-') {
                Op::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                Op::Mul
            } else if self.eat('/') {
                Op::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Node::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.err("unexpected end of expression".into())),
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Node::Num(v))
            }
            Tok::Ident(name) => {
                let node = match name.as_str() {
                    "x" => Node::Var(Var::X),
                    "alpha" => Node::Var(Var::Alpha),
                    "beta" => Node::Var(Var::Beta),
                    "r" => Node::Var(Var::R),
                    "pi" => Node::Num(std::f64::consts::PI),
                    "e" => Node::Num(std::f64::consts::E),
                    _ => return Err(self.err(format!("unknown name `{name}`"))),
                };
                self.pos += 1;
                Ok(node)
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`".into()));
                }
                Ok(inner)
            }
            Tok::Sym(c) => Err(self.err(format!("unexpected `{c}`"))),
        }
    }
}

impl Expr {
    /// Parses `src`; `line` and `col0` place error positions in the enclosing file.
    pub fn parse_at(src: &str, line: usize, col0: usize) -> Result<Expr> {
        let lexed = lex(src, line, col0)?;
        let mut p = Parser { toks: lexed.toks, pos: 0, line, end: lexed.end };
        let root = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("unexpected trailing input".into()));
        }
        Ok(Expr { root })
    }

    pub fn parse(src: &str) -> Result<Expr> {
        Self::parse_at(src, 1, 1)
    }

    pub fn depends_on_x(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Num(_) => false,
                Node::Var(v) => *v == Var::X,
                Node::Neg(a) => walk(a),
                Node::Bin(_, a, b) => walk(a) || walk(b),
            }
        }
        walk(&self.root)
    }

    pub fn eval(&self, x: f64, env: &Env) -> f64 {
        fn go(n: &Node, x: f64, env: &Env) -> f64 {
            match n {
                Node::Num(v) => *v,
                Node::Var(Var::X) => x,
                Node::Var(Var::Alpha) => env.alpha,
                Node::Var(Var::Beta) => env.beta,
                Node::Var(Var::R) => env.r,
                Node::Neg(a) => -go(a, x, env),
                Node::Bin(op, a, b) => {
                    let (l, r) = (go(a, x, env), go(b, x, env));
                    match op {
                        Op::Add => l + r,
                        Op::Sub => l - r,
                        Op::Mul => l * r,
                        Op::Div => l / r,
                        Op::Pow => l.powf(r),
                    }
                }
            }
        }
        go(&self.root, x, env)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ENV: Env = Env { alpha: 1.5, beta: 0.75, r: 0.5 };

    fn ev(s: &str, x: f64) -> f64 {
        Expr::parse(s).unwrap().eval(x, &ENV)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2 * 3", 0.0), 7.0);
        assert_eq!(ev("2 ^ 3 ^ 2", 0.0), 512.0);
        assert_eq!(ev("-x^2", 3.0), -9.0);
        assert_eq!(ev("(1 - x) / 4", 0.2), 0.2);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("1.5e-1 + 2E1", 0.0), 20.15);
        assert_eq!(ev("x^(2 - alpha)", 0.25), 0.5);
        assert_eq!(ev("8 / 2 / 2", 0.0), 2.0);
    }

    #[test]
    fn x_dependence() {
        assert!(!Expr::parse("1 + pi * alpha").unwrap().depends_on_x());
        assert!(Expr::parse("1 + x*0").unwrap().depends_on_x());
    }

    #[test]
    fn errors_carry_positions() {
        match Expr::parse_at("1 + * 2", 4, 5) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 9)),
            other => panic!("{other:?}"),
        }
        match Expr::parse("(x + 1") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        match Expr::parse("sin(x)") {
            Err(Error::Parse { column, message, .. }) => {
                assert_eq!(column, 1);
                assert!(message.contains("sin"));
            }
            other => panic!("{other:?}"),
        }
        assert!(Expr::parse("x $ 2").is_err());
        assert!(Expr::parse("x 2").is_err());
        assert!(Expr::parse("").is_err());
    }
}
