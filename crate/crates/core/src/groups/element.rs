use std::fmt;

/// A group element in the canonical normal form of its family.
///
/// Structural equality coincides with group equality because every
/// constructor in this crate reduces to normal form. The `Display` output is
/// the canonical encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// An integer, or a residue in `0..k` for a finite cyclic group.
    Int(i64),
    /// A point of the lattice `Z^k`.
    Vector(Vec<i64>),
    /// `r^k s^flip` in the infinite dihedral group.
    Dihedral { k: i64, flip: bool },
    /// A freely reduced word. Letter `2j` is generator `j`, `2j + 1` its inverse.
    Word(Vec<u8>),
    /// A pair in a direct product.
    Pair(Box<Element>, Box<Element>),
}

impl Element {
    pub fn pair(left: Element, right: Element) -> Element {
        Element::Pair(Box::new(left), Box::new(right))
    }

    /// Components of a product element.
    pub fn as_pair(&self) -> Option<(&Element, &Element)> {
        match self {
            Element::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// The canonical encoding as a string.
    pub fn encode(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn letter_char(code: u8) -> char {
    let base = b'a' + code / 2;
    if code.is_multiple_of(2) {
        base as char
    } else {
        base.to_ascii_uppercase() as char
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Vector(v) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Element::Dihedral { k, flip } => write!(f, "({k},{})", u8::from(*flip)),
            Element::Word(w) if w.is_empty() => f.write_str("e"),
            Element::Word(w) => {
                for &c in w {
                    write!(f, "{}", letter_char(c))?;
                }
                Ok(())
            }
            Element::Pair(l, r) => write!(f, "({l},{r})"),
        }
    }
}
