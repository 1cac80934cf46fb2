//! Problem files: one declaration or constraint per line.
//!
//! ```text
//! format binary32
//! var x in [-inf, 10000.0]
//! const c = 1.0e12
//! z = x add c
//! z > c          # comments run to end of line
//! ```

use std::fmt;

use crate::classic::Cmp;
use crate::engine::{Network, NetworkError, Operand, VarId};
use crate::interval::FpInterval;
use crate::minifloat::{parse_literal, FpFormat, FpVal, Op};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

/// Split on whitespace, keeping `[`, `]` and `,` as separate tokens.
fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        let sep = ch.is_whitespace();
        let punct = matches!(ch, '[' | ']' | ',');
        if sep || punct {
            if let Some(s) = start.take() {
                out.push(Tok {
                    text: &line[s..i],
                    col: s + 1,
                });
            }
            if punct {
                out.push(Tok {
                    text: &line[i..i + 1],
                    col: i + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            text: &line[s..],
            col: s + 1,
        });
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !matches!(s, "inf" | "infinity" | "nan")
}

const KEYWORDS: [&str; 4] = ["format", "var", "const", "in"];

fn parse_op(s: &str) -> Option<Op> {
    Some(match s {
        "add" | "+" => Op::Add,
        "sub" | "-" => Op::Sub,
        "mul" | "*" => Op::Mul,
        "div" | "/" => Op::Div,
        _ => return None,
    })
}

struct LineCtx<'a> {
    line: usize,
    toks: Vec<Tok<'a>>,
    end_col: usize,
}

impl<'a> LineCtx<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: col,
            message: msg.into(),
        }
    }

    fn at(&self, i: usize) -> Result<Tok<'a>, ParseError> {
        self.toks
            .get(i)
            .copied()
            .ok_or_else(|| self.err(self.end_col, "unexpected end of line"))
    }

    fn expect(&self, i: usize, want: &str) -> Result<(), ParseError> {
        let t = self.at(i)?;
        if t.text == want {
            Ok(())
        } else {
            Err(self.err(t.col, format!("expected `{want}`, found `{}`", t.text)))
        }
    }

    fn done(&self, i: usize) -> Result<(), ParseError> {
        match self.toks.get(i) {
            None => Ok(()),
            Some(t) => Err(self.err(t.col, format!("unexpected `{}`", t.text))),
        }
    }
}

struct Parser {
    fmt: FpFormat,
    fixed_format: bool,
    net: Option<Network>,
}

impl Parser {
    fn net(&mut self) -> &mut Network {
        let fmt = self.fmt;
        self.net.get_or_insert_with(|| Network::new(fmt))
    }

    fn literal(&self, cx: &LineCtx, t: Tok) -> Result<FpVal, ParseError> {
        parse_literal(t.text, &self.fmt).map_err(|e| cx.err(t.col, format!("bad literal `{}`: {e}", t.text)))
    }

    fn var(&mut self, cx: &LineCtx, t: Tok) -> Result<VarId, ParseError> {
        if !is_ident(t.text) {
            return Err(cx.err(t.col, format!("expected a variable, found `{}`", t.text)));
        }
        self.net()
            .lookup(t.text)
            .ok_or_else(|| cx.err(t.col, format!("unknown variable `{}`", t.text)))
    }

    fn declare(&mut self, cx: &LineCtx, t: Tok, domain: FpInterval, constant: bool) -> Result<(), ParseError> {
        if !is_ident(t.text) || KEYWORDS.contains(&t.text) {
            return Err(cx.err(t.col, format!("`{}` is not a valid name", t.text)));
        }
        let r = if constant {
            self.net().add_const(t.text, domain.lo())
        } else {
            self.net().add_var(t.text, domain)
        };
        r.map(|_| ()).map_err(|e: NetworkError| cx.err(t.col, e.to_string()))
    }

    fn line(&mut self, cx: &LineCtx) -> Result<(), ParseError> {
        let head = cx.at(0)?;
        match head.text {
            "format" => {
                if self.net.is_some() {
                    return Err(cx.err(head.col, "`format` must come before any declaration"));
                }
                let name: Vec<&str> = cx.toks[1..].iter().map(|t| t.text).collect();
                if name.is_empty() {
                    return Err(cx.err(cx.end_col, "missing format name"));
                }
                let f: FpFormat = name
                    .join("")
                    .parse()
                    .map_err(|e| cx.err(cx.toks[1].col, format!("{e}")))?;
                if !self.fixed_format {
                    self.fmt = f;
                }
                self.net();
                Ok(())
            }
            "var" => {
                let mut i = 1;
                let mut names = vec![cx.at(i)?];
                i += 1;
                while cx.toks.get(i).is_some_and(|t| t.text == ",") {
                    names.push(cx.at(i + 1)?);
                    i += 2;
                }
                let domain = if cx.toks.get(i).is_some_and(|t| t.text == "in") {
                    cx.expect(i + 1, "[")?;
                    let lo = self.literal(cx, cx.at(i + 2)?)?;
                    cx.expect(i + 3, ",")?;
                    let hi_tok = cx.at(i + 4)?;
                    let hi = self.literal(cx, hi_tok)?;
                    cx.expect(i + 5, "]")?;
                    cx.done(i + 6)?;
                    FpInterval::new(lo, hi).map_err(|_| cx.err(hi_tok.col, "empty interval"))?
                } else {
                    cx.done(i)?;
                    FpInterval::full()
                };
                for n in names {
                    self.declare(cx, n, domain, false)?;
                }
                Ok(())
            }
            "const" => {
                let name = cx.at(1)?;
                cx.expect(2, "=")?;
                let v = self.literal(cx, cx.at(3)?)?;
                cx.done(4)?;
                self.declare(cx, name, FpInterval::singleton(v), true)
            }
            _ => {
                let lhs = self.var(cx, head)?;
                let rel = cx.at(1)?;
                if rel.text == "=" {
                    let x = self.var(cx, cx.at(2)?)?;
                    let op_tok = cx.at(3)?;
                    let op = parse_op(op_tok.text)
                        .ok_or_else(|| cx.err(op_tok.col, format!("unknown operator `{}`", op_tok.text)))?;
                    let y = self.var(cx, cx.at(4)?)?;
                    cx.done(5)?;
                    self.net().add_arith(lhs, op, x, y).expect("resolved names");
                    return Ok(());
                }
                let cmp = Cmp::from_symbol(rel.text)
                    .ok_or_else(|| cx.err(rel.col, format!("expected `=` or a comparison, found `{}`", rel.text)))?;
                let r = cx.at(2)?;
                let rhs = if is_ident(r.text) {
                    Operand::Var(self.var(cx, r)?)
                } else {
                    Operand::Const(self.literal(cx, r)?)
                };
                cx.done(3)?;
                self.net().add_compare(lhs, cmp, rhs).expect("resolved names");
                Ok(())
            }
        }
    }
}

/// Parse a problem. `format` overrides any `format` line; without either
/// the format is binary32.
pub fn parse_problem(text: &str, format: Option<FpFormat>) -> Result<Network, ParseError> {
    let mut p = Parser {
        fmt: format.unwrap_or(FpFormat::binary32()),
        fixed_format: format.is_some(),
        net: None,
    };
    for (n, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokenize(body);
        if toks.is_empty() {
            continue;
        }
        let cx = LineCtx {
            line: n + 1,
            toks,
            end_col: body.trim_end().len() + 1,
        };
        p.line(&cx)?;
    }
    let fmt = p.fmt;
    Ok(p.net.unwrap_or_else(|| Network::new(fmt)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_constants_round_to_nearest() {
        let n = parse_problem("const c = 1.0e12", None).unwrap();
        let c = n.var(n.lookup("c").unwrap());
        assert!(c.constant);
        assert_eq!(
            crate::minifloat::to_f64(&c.domain.lo(), n.format()),
            Some(999_999_995_904.0)
        );
    }

    #[test]
    fn empty_file_is_empty_network() {
        let n = parse_problem("\n# nothing\n", None).unwrap();
        assert!(n.vars().is_empty() && n.constraints().is_empty());
        assert_eq!(*n.format(), FpFormat::binary32());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_problem("format tiny\nvar x\nz = x add x\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        let e = parse_problem("var x\nx < 1.0 extra", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        let e = parse_problem("var x\nvar x", None).unwrap_err();
        assert!(e.message.contains("duplicate"));
        let e = parse_problem("var x in [2.0, 1.0]", None).unwrap_err();
        assert_eq!(e.message, "empty interval");
    }

    #[test]
    fn symbols_and_keywords_are_equivalent() {
        let a = parse_problem("var x, y, z\nz = x + y\nz <= 2.0", None).unwrap();
        let b = parse_problem("var x, y, z\nz = x add y\nz <= 2", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn format_flag_overrides_file() {
        let n = parse_problem("format binary64\nvar x", Some(FpFormat::tiny())).unwrap();
        assert_eq!(*n.format(), FpFormat::tiny());
    }
}
