//! Formula surface syntax.
//!
//! Grammar, loosest first: `->` (right-associative), `|`, `&`, `U`
//! (right-associative), then the prefix operators `!`, `X`, `F`, `G`.
//! Atoms are `[A-Za-z_][A-Za-z0-9_']*` or single-quoted strings; `true`,
//! `false`, and the operator letters are reserved. Identifiers munch
//! maximally, so `Fq` is an atom while `F q` is an application.

use super::{Formula, LtlfError};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Ident(String),
    Quoted(String),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, LtlfError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let pos = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '(' => {
                toks.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((pos, Tok::RParen));
                i += 1;
            }
            '!' => {
                toks.push((pos, Tok::Bang));
                i += 1;
            }
            '&' => {
                toks.push((pos, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((pos, Tok::Pipe));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((pos, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(LtlfError::Parse {
                        pos,
                        msg: "expected '->'".to_string(),
                    });
                }
            }
            '\'' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '\'' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(LtlfError::Parse {
                        pos,
                        msg: "unterminated quoted atom".to_string(),
                    });
                }
                toks.push((pos, Tok::Quoted(chars[start..j].iter().collect())));
                i = j + 1;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                toks.push((pos, Tok::Ident(chars[start..i].iter().collect())));
            }
            _ => {
                return Err(LtlfError::Parse {
                    pos,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        end: chars.len() + 1,
    })
}

struct Parser {
    lexer: Lexer,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lexer.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.lexer
            .toks
            .get(self.at)
            .map(|(p, _)| *p)
            .unwrap_or(self.lexer.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.lexer.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn fail<T>(&self, msg: &str) -> Result<T, LtlfError> {
        Err(LtlfError::Parse {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn implies(&mut self) -> Result<Formula, LtlfError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, LtlfError> {
        let lhs = self.and()?;
        if self.peek() == Some(&Tok::Pipe) {
            self.bump();
            let rhs = self.or()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, LtlfError> {
        let lhs = self.until()?;
        if self.peek() == Some(&Tok::Amp) {
            self.bump();
            let rhs = self.and()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula, LtlfError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Tok::Ident("U".to_string())) {
            self.bump();
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LtlfError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(id)) if id == "X" => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Some(Tok::Ident(id)) if id == "F" => {
                self.bump();
                Ok(Formula::finally(self.unary()?))
            }
            Some(Tok::Ident(id)) if id == "G" => {
                self.bump();
                Ok(Formula::globally(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, LtlfError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::LParen) => {
                let inner = self.implies()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(LtlfError::Parse {
                        pos,
                        msg: "unclosed parenthesis".to_string(),
                    }),
                }
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                "U" => Err(LtlfError::Parse {
                    pos,
                    msg: "'U' is an operator, quote it to use it as an atom".to_string(),
                }),
                _ => Ok(Formula::Atom(id)),
            },
            Some(Tok::Quoted(name)) => {
                if name.is_empty() {
                    Err(LtlfError::Parse {
                        pos,
                        msg: "empty quoted atom".to_string(),
                    })
                } else {
                    Ok(Formula::Atom(name))
                }
            }
            _ => Err(LtlfError::Parse {
                pos,
                msg: "expected a formula".to_string(),
            }),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, LtlfError> {
    let mut parser = Parser {
        lexer: lex(text)?,
        at: 0,
    };
    let formula = parser.implies()?;
    if parser.peek().is_some() {
        return parser.fail("trailing input after formula");
    }
    Ok(formula)
}

const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNTIL: u8 = 4;
const PREC_UNARY: u8 = 5;
const PREC_LEAF: u8 = 6;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(_, _) => PREC_IMPLIES,
        Formula::Or(_, _) => PREC_OR,
        Formula::And(_, _) => PREC_AND,
        Formula::Until(_, _) => PREC_UNTIL,
        Formula::Not(_) | Formula::Next(_) | Formula::Finally(_) | Formula::Globally(_) => {
            PREC_UNARY
        }
        Formula::True | Formula::False | Formula::Atom(_) => PREC_LEAF,
    }
}

fn is_plain_ident(name: &str) -> bool {
    let mut chars = name.chars();
    let reserved = matches!(name, "true" | "false" | "X" | "F" | "G" | "U");
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            !reserved
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        }
        _ => false,
    }
}

fn print_into(f: &Formula, out: &mut String) {
    let mine = prec(f);
    // Binary operators associate to the right: a same-precedence left child
    // needs parentheses, a same-precedence right child does not.
    let left = |child: &Formula, out: &mut String| {
        if prec(child) <= mine {
            out.push('(');
            print_into(child, out);
            out.push(')');
        } else {
            print_into(child, out);
        }
    };
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(name) => {
            if is_plain_ident(name) {
                out.push_str(name);
            } else {
                out.push('\'');
                out.push_str(name);
                out.push('\'');
            }
        }
        Formula::Not(x) => {
            out.push('!');
            print_tight(x, out);
        }
        Formula::Next(x) => {
            out.push_str("X ");
            print_tight(x, out);
        }
        Formula::Finally(x) => {
            out.push_str("F ");
            print_tight(x, out);
        }
        Formula::Globally(x) => {
            out.push_str("G ");
            print_tight(x, out);
        }
        Formula::Implies(a, b) => {
            left(a, out);
            out.push_str(" -> ");
            print_loose(b, out, mine);
        }
        Formula::Or(a, b) => {
            left(a, out);
            out.push_str(" | ");
            print_loose(b, out, mine);
        }
        Formula::And(a, b) => {
            left(a, out);
            out.push_str(" & ");
            print_loose(b, out, mine);
        }
        Formula::Until(a, b) => {
            left(a, out);
            out.push_str(" U ");
            print_loose(b, out, mine);
        }
    }
}

fn print_tight(child: &Formula, out: &mut String) {
    if prec(child) < PREC_UNARY {
        out.push('(');
        print_into(child, out);
        out.push(')');
    } else {
        print_into(child, out);
    }
}

fn print_loose(child: &Formula, out: &mut String, parent: u8) {
    if prec(child) < parent {
        out.push('(');
        print_into(child, out);
        out.push(')');
    } else {
        print_into(child, out);
    }
}

/// Canonical rendering; `parse_formula(print_formula(f)) == f`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    print_into(f, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::arb_formula;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shapes_from_the_surface_syntax() {
        assert_eq!(
            parse_formula("G (p -> F q)").unwrap(),
            Formula::globally(Formula::implies(
                Formula::atom("p"),
                Formula::finally(Formula::atom("q"))
            ))
        );
        assert_eq!(
            parse_formula("F (q & G !p)").unwrap(),
            Formula::finally(Formula::and(
                Formula::atom("q"),
                Formula::globally(Formula::not(Formula::atom("p")))
            ))
        );
        assert_eq!(
            parse_formula("!v U u").unwrap(),
            Formula::until(Formula::not(Formula::atom("v")), Formula::atom("u"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("p U q & r | s -> t").unwrap(),
            Formula::implies(
                Formula::or(
                    Formula::and(Formula::until(Formula::atom("p"), Formula::atom("q")), Formula::atom("r")),
                    Formula::atom("s")
                ),
                Formula::atom("t")
            )
        );
        assert_eq!(
            parse_formula("a -> b -> c").unwrap(),
            Formula::implies(
                Formula::atom("a"),
                Formula::implies(Formula::atom("b"), Formula::atom("c"))
            )
        );
        assert_eq!(
            parse_formula("p U q U r").unwrap(),
            Formula::until(
                Formula::atom("p"),
                Formula::until(Formula::atom("q"), Formula::atom("r"))
            )
        );
        // Identifier munching: "Fq" is an atom, "F q" an application.
        assert_eq!(parse_formula("Fq").unwrap(), Formula::atom("Fq"));
        assert_eq!(
            parse_formula("F q").unwrap(),
            Formula::finally(Formula::atom("q"))
        );
    }

    #[test]
    fn quoted_atoms_and_primes() {
        assert_eq!(parse_formula("x1'").unwrap(), Formula::atom("x1'"));
        assert_eq!(parse_formula("'U'").unwrap(), Formula::atom("U"));
        assert_eq!(
            print_formula(&Formula::atom("U")),
            "'U'".to_string()
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("p &") {
            Err(LtlfError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_formula("p @ q") {
            Err(LtlfError::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("p q").is_err());
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        let f = parse_formula("G (p -> F q)").unwrap();
        assert_eq!(print_formula(&f), "G (p -> F q)");
        let g = parse_formula("(p | q) & r").unwrap();
        assert_eq!(print_formula(&g), "(p | q) & r");
        let h = parse_formula("!(p & q)").unwrap();
        assert_eq!(print_formula(&h), "!(p & q)");
        // Redundant parentheses are dropped: the implication already binds
        // loosest, so its conjunction operand needs none.
        let k = parse_formula("F f & ((!n & !f) -> F y)").unwrap();
        assert_eq!(print_formula(&k), "F f & (!n & !f -> F y)");
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(f in arb_formula()) {
            let text = print_formula(&f);
            let back = parse_formula(&text);
            prop_assert_eq!(back.unwrap(), f);
        }
    }
}
