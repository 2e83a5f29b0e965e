//! Group-spec and element parsers.
//!
//! Group specs:
//!
//! ```text
//! group   := factor ("x" factor)*          left associative
//! factor  := "Z" | "Z^" k | "C" k | "Dinf" | "F" r | "(" group ")"
//! ```
//!
//! Subgroup specs follow the shape of their parent group:
//!
//! ```text
//! sub     := sfactor ("x" sfactor)*
//! sfactor := "{0}" | "0" | n "Z" | n "Z^" k | n "C" k | "rot"
//!          | <any group factor, meaning the whole factor> | "(" sub ")"
//! ```
//!
//! Elements are written in the encoding produced by `Display`: integers,
//! parenthesized tuples for products, lattices and `Dinf`, letter words for
//! free groups (`e` is the empty word, uppercase letters are inverses).

use super::subgroup::SubgroupKind;
use super::{Element, Group, MAX_FREE_RANK};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Times,
    Open,
    Close,
    Trivial,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            out.push((i, Tok::Open));
            i += 1;
        } else if c == ')' {
            out.push((i, Tok::Close));
            i += 1;
        } else if c == '×' {
            out.push((i, Tok::Times));
            i += 1;
        } else if c == '{' {
            let rest: String = bytes[i..].iter().take(3).collect();
            if rest == "{0}" {
                out.push((i, Tok::Trivial));
                i += 3;
            } else {
                return Err(Error::Parse {
                    pos: i,
                    msg: "expected '{0}'".into(),
                });
            }
        } else if c.is_ascii_alphanumeric() || c == '^' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '^') {
                i += 1;
            }
            let word: String = bytes[start..i].iter().collect();
            if word == "x" {
                out.push((start, Tok::Times));
            } else {
                out.push((start, Tok::Word(word)));
            }
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Tokens {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Tokens {
    fn new(src: &str) -> Result<Tokens> {
        Ok(Tokens {
            toks: lex(src)?,
            at: 0,
            end: src.chars().count(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.next() {
            Some((_, Tok::Close)) => Ok(()),
            Some((pos, t)) => Err(Error::Parse {
                pos,
                msg: format!("expected ')', found {t:?}"),
            }),
            None => Err(Error::Parse {
                pos: self.end,
                msg: "expected ')'".into(),
            }),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

fn parse_count(digits: &str, pos: usize, what: &str) -> Result<u64> {
    digits
        .parse::<u64>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse {
            pos,
            msg: format!("expected a positive {what}, found '{digits}'"),
        })
}

/// A single group name such as `Z^3` or `C4`.
fn group_atom(word: &str, pos: usize) -> Result<Group> {
    if word == "Z" {
        return Ok(Group::Integers);
    }
    if word == "Dinf" {
        return Ok(Group::InfiniteDihedral);
    }
    if let Some(k) = word.strip_prefix("Z^") {
        let k = parse_count(k, pos + 2, "lattice rank")?;
        return Ok(if k == 1 {
            Group::Integers
        } else {
            Group::Lattice(k as usize)
        });
    }
    if let Some(k) = word.strip_prefix('C') {
        return Ok(Group::Cyclic(parse_count(k, pos + 1, "cyclic order")?));
    }
    if let Some(r) = word.strip_prefix('F') {
        let r = parse_count(r, pos + 1, "free rank")?;
        if r as usize > MAX_FREE_RANK {
            return Err(Error::Parse {
                pos,
                msg: format!("free rank at most {MAX_FREE_RANK}"),
            });
        }
        return Ok(Group::Free(r as usize));
    }
    Err(Error::Parse {
        pos,
        msg: format!("unknown group '{word}'"),
    })
}

pub(super) fn parse_group(src: &str) -> Result<Group> {
    let mut t = Tokens::new(src)?;
    let g = group_expr(&mut t)?;
    t.finish()?;
    Ok(g)
}

fn group_expr(t: &mut Tokens) -> Result<Group> {
    let mut g = group_factor(t)?;
    while t.peek() == Some(&Tok::Times) {
        t.next();
        g = Group::direct_product(g, group_factor(t)?);
    }
    Ok(g)
}

fn group_factor(t: &mut Tokens) -> Result<Group> {
    match t.next() {
        Some((_, Tok::Open)) => {
            let g = group_expr(t)?;
            t.expect_close()?;
            Ok(g)
        }
        Some((pos, Tok::Word(w))) => group_atom(&w, pos),
        Some((pos, tok)) => Err(Error::Parse {
            pos,
            msg: format!("expected a group, found {tok:?}"),
        }),
        None => t.err("expected a group"),
    }
}

/// Subgroup syntax before it is checked against a parent group.
#[derive(Debug, Clone)]
enum SubSyntax {
    Trivial,
    Whole(Group),
    Multiples(u64, Group),
    Rotations,
    Product(Box<SubSyntax>, Box<SubSyntax>),
}

pub(super) fn parse_subgroup(parent: &Group, src: &str) -> Result<SubgroupKind> {
    let mut t = Tokens::new(src)?;
    let s = sub_expr(&mut t)?;
    t.finish()?;
    resolve(parent, &s).map_err(|msg| Error::Parse { pos: 0, msg })
}

fn sub_expr(t: &mut Tokens) -> Result<SubSyntax> {
    let mut s = sub_factor(t)?;
    while t.peek() == Some(&Tok::Times) {
        t.next();
        s = SubSyntax::Product(Box::new(s), Box::new(sub_factor(t)?));
    }
    Ok(s)
}

fn sub_factor(t: &mut Tokens) -> Result<SubSyntax> {
    match t.next() {
        Some((_, Tok::Open)) => {
            let s = sub_expr(t)?;
            t.expect_close()?;
            Ok(s)
        }
        Some((_, Tok::Trivial)) => Ok(SubSyntax::Trivial),
        Some((pos, Tok::Word(w))) => {
            if w == "0" {
                return Ok(SubSyntax::Trivial);
            }
            if w == "rot" {
                return Ok(SubSyntax::Rotations);
            }
            let digits: String = w.chars().take_while(|c| c.is_ascii_digit()).collect();
            if digits.is_empty() {
                return Ok(SubSyntax::Whole(group_atom(&w, pos)?));
            }
            let n = parse_count(&digits, pos, "multiplier")?;
            let g = group_atom(&w[digits.len()..], pos + digits.len())?;
            if matches!(g, Group::InfiniteDihedral | Group::Free(_)) {
                return Err(Error::Parse {
                    pos,
                    msg: format!("multiples are not defined in {g}"),
                });
            }
            Ok(SubSyntax::Multiples(n, g))
        }
        Some((pos, tok)) => Err(Error::Parse {
            pos,
            msg: format!("expected a subgroup, found {tok:?}"),
        }),
        None => t.err("expected a subgroup"),
    }
}

fn resolve(parent: &Group, s: &SubSyntax) -> std::result::Result<SubgroupKind, String> {
    match (s, parent) {
        (SubSyntax::Trivial, _) => Ok(SubgroupKind::Trivial),
        (SubSyntax::Whole(g), _) if g == parent => Ok(SubgroupKind::Whole),
        (SubSyntax::Rotations, Group::InfiniteDihedral) => Ok(SubgroupKind::Rotations),
        (SubSyntax::Multiples(n, g), _) if g == parent => match parent {
            Group::Cyclic(k) if k % n != 0 => Err(format!("{n} does not divide {k}")),
            _ if *n == 1 => Ok(SubgroupKind::Whole),
            _ => Ok(SubgroupKind::Multiples(*n)),
        },
        (SubSyntax::Product(a, b), Group::Product(ga, gb)) => Ok(SubgroupKind::Product(
            Box::new(resolve(ga, a)?),
            Box::new(resolve(gb, b)?),
        )),
        _ => Err(format!("subgroup spec does not fit the group {parent}")),
    }
}

struct Chars<'a> {
    src: &'a [char],
    at: usize,
}

impl Chars<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.at).is_some_and(|c| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.at).copied()
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(Error::Parse {
                pos: self.at,
                msg: format!("expected '{c}'"),
            })
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.at;
        if matches!(self.src.get(self.at), Some('-') | Some('−')) {
            self.at += 1;
        }
        while self.src.get(self.at).is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        let text: String = self.src[start..self.at]
            .iter()
            .map(|&c| if c == '−' { '-' } else { c })
            .collect();
        text.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("expected an integer, found '{text}'"),
        })
    }

    fn element(&mut self, g: &Group) -> Result<Element> {
        let start = self.at;
        let x = match g {
            Group::Integers | Group::Cyclic(_) => Element::Int(self.int()?),
            Group::Lattice(k) => {
                self.eat('(')?;
                let mut v = vec![self.int()?];
                for _ in 1..*k {
                    self.eat(',')?;
                    v.push(self.int()?);
                }
                self.eat(')')?;
                Element::Vector(v)
            }
            Group::InfiniteDihedral => {
                self.eat('(')?;
                let k = self.int()?;
                self.eat(',')?;
                let f = self.int()?;
                self.eat(')')?;
                if f != 0 && f != 1 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "reflection flag must be 0 or 1".into(),
                    });
                }
                Element::Dihedral { k, flip: f == 1 }
            }
            Group::Free(_) => {
                self.skip_ws();
                if self.src.get(self.at) == Some(&'e') {
                    self.at += 1;
                    Element::Word(Vec::new())
                } else {
                    let mut w = Vec::new();
                    while let Some(&c) = self.src.get(self.at) {
                        if !c.is_ascii_alphabetic() {
                            break;
                        }
                        let lower = c.to_ascii_lowercase() as u8 - b'a';
                        w.push(2 * lower + u8::from(c.is_ascii_uppercase()));
                        self.at += 1;
                    }
                    if w.is_empty() {
                        return Err(Error::Parse {
                            pos: start,
                            msg: "expected a word".into(),
                        });
                    }
                    Element::Word(w)
                }
            }
            Group::Product(a, b) => {
                self.eat('(')?;
                let x = self.element(a)?;
                self.eat(',')?;
                let y = self.element(b)?;
                self.eat(')')?;
                Element::pair(x, y)
            }
        };
        g.validate(&x).map_err(|e| Error::Parse {
            pos: start,
            msg: e.to_string(),
        })?;
        Ok(x)
    }
}

pub(super) fn parse_element(g: &Group, src: &str) -> Result<Element> {
    let chars: Vec<char> = src.chars().collect();
    let mut c = Chars { src: &chars, at: 0 };
    let x = c.element(g)?;
    if c.peek().is_some() {
        return Err(Error::Parse {
            pos: c.at,
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(x)
}

/// Comma-separated elements, e.g. an edge `(3,0),(3,1)`.
pub fn parse_element_list(g: &Group, src: &str) -> Result<Vec<Element>> {
    let chars: Vec<char> = src.chars().collect();
    let mut c = Chars { src: &chars, at: 0 };
    let mut out = Vec::new();
    if c.peek().is_none() {
        return Ok(out);
    }
    loop {
        out.push(c.element(g)?);
        match c.peek() {
            None => return Ok(out),
            Some(',') => c.at += 1,
            Some(_) => {
                return Err(Error::Parse {
                    pos: c.at,
                    msg: "expected ',' between elements".into(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups() {
        assert_eq!(parse_group("Z").unwrap(), Group::Integers);
        assert_eq!(parse_group("Z^2").unwrap(), Group::Lattice(2));
        assert_eq!(
            parse_group("Z x C2").unwrap(),
            Group::direct_product(Group::Integers, Group::Cyclic(2))
        );
        assert_eq!(
            parse_group("(Dinf x F2)").unwrap(),
            Group::direct_product(Group::InfiniteDihedral, Group::Free(2))
        );
    }

    #[test]
    fn unknown_token_reports_position() {
        match parse_group("Z x Q7") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_group("Z x C2 $") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_group("Z x").is_err());
        assert!(parse_group("C0").is_err());
        assert!(parse_group("(Z").is_err());
    }

    #[test]
    fn subgroups() {
        let zc2 = parse_group("Z x C2").unwrap();
        assert_eq!(
            parse_subgroup(&zc2, "{0} x C2").unwrap(),
            SubgroupKind::Product(
                Box::new(SubgroupKind::Trivial),
                Box::new(SubgroupKind::Whole)
            )
        );
        assert_eq!(
            parse_subgroup(&Group::Integers, "3Z").unwrap(),
            SubgroupKind::Multiples(3)
        );
        let zc4 = parse_group("Z x C4").unwrap();
        assert!(parse_subgroup(&zc4, "2Z x C4").is_ok());
        assert!(parse_subgroup(&zc4, "2Z x 2C4").is_ok());
        assert!(parse_subgroup(&zc4, "2Z x 3C4").is_err());
        assert!(parse_subgroup(&Group::Integers, "3C4").is_err());
        assert!(parse_subgroup(&Group::InfiniteDihedral, "rot").is_ok());
        assert!(parse_subgroup(&Group::Integers, "rot").is_err());
    }

    #[test]
    fn elements() {
        let zc2 = parse_group("Z x C2").unwrap();
        assert_eq!(
            parse_element(&zc2, "(3, 1)").unwrap(),
            Element::pair(Element::Int(3), Element::Int(1))
        );
        assert!(parse_element(&zc2, "(3,2)").is_err());
        assert!(parse_element(&zc2, "(3,1) x").is_err());
        let f = Group::Free(2);
        assert_eq!(parse_element(&f, "aB").unwrap(), Element::Word(vec![0, 3]));
        assert!(parse_element(&f, "aA").is_err());
        assert!(parse_element(&f, "c").is_err());
        let edge = parse_element_list(&zc2, "(3,0),(3,1)").unwrap();
        assert_eq!(edge.len(), 2);
        assert_eq!(
            parse_element(&Group::Integers, "−4").unwrap(),
            Element::Int(-4)
        );
    }
}
