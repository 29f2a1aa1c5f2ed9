//! Normal forms of group elements.
//!
//! Every built-in group stores its elements as an [`Elem`] in canonical form,
//! so element equality is structural equality. The canonical text form
//! (`Display` / `FromStr`) is group independent and is what reports store:
//!
//! | shape  | text            |
//! |--------|-----------------|
//! | `Int`  | `-3`            |
//! | `Tuple`| `(1,0)`         |
//! | `Pair` | `<a,b>`         |
//! | `Map`  | `{x:z,x:z}`     |
//! | `Word` | `[1:a,2:b]`     |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    /// An integer or a residue.
    Int(i64),
    /// A lattice vector.
    Tuple(Vec<i64>),
    /// Direct or semidirect pair.
    Pair(Box<Elem>, Box<Elem>),
    /// Finitely supported map, sorted by point, with no identity values.
    Map(Vec<(Elem, Elem)>),
    /// Reduced word of a free product: `(factor, letter)` with alternating factors.
    Word(Vec<(u8, Elem)>),
}

impl Elem {
    pub fn pair(a: Elem, b: Elem) -> Elem {
        Elem::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_pair(&self) -> Option<(&Elem, &Elem)> {
        match self {
            Elem::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Elem::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[i64]> {
        match self {
            Elem::Tuple(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_map(&self) -> Option<&[(Elem, Elem)]> {
        match self {
            Elem::Map(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&[(u8, Elem)]> {
        match self {
            Elem::Word(w) => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Int(n) => write!(f, "{n}"),
            Elem::Tuple(v) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Elem::Pair(a, b) => write!(f, "<{a},{b}>"),
            Elem::Map(m) => {
                f.write_str("{")?;
                for (i, (x, z)) in m.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}:{z}")?;
                }
                f.write_str("}")
            }
            Elem::Word(w) => {
                f.write_str("[")?;
                for (i, (k, x)) in w.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k}:{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, "expected an integer"))
    }

    /// Parses `open item (, item)* close`, allowing the empty list.
    fn seq<T>(
        &mut self,
        open: u8,
        close: u8,
        mut item: impl FnMut(&mut Self) -> Result<T>,
    ) -> Result<Vec<T>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => {
                    return Err(Error::parse(
                        self.pos,
                        format!("expected `,` or `{}`", close as char),
                    ))
                }
            }
        }
    }

    fn elem(&mut self) -> Result<Elem> {
        match self.peek() {
            Some(b'(') => Ok(Elem::Tuple(self.seq(b'(', b')', |c| c.int())?)),
            Some(b'<') => {
                self.pos += 1;
                let a = self.elem()?;
                self.expect(b',')?;
                let b = self.elem()?;
                self.expect(b'>')?;
                Ok(Elem::pair(a, b))
            }
            Some(b'{') => Ok(Elem::Map(self.seq(b'{', b'}', |c| {
                let x = c.elem()?;
                c.expect(b':')?;
                Ok((x, c.elem()?))
            })?)),
            Some(b'[') => Ok(Elem::Word(self.seq(b'[', b']', |c| {
                let at = c.pos;
                let k = u8::try_from(c.int()?).map_err(|_| Error::parse(at, "bad factor index"))?;
                c.expect(b':')?;
                Ok((k, c.elem()?))
            })?)),
            _ => Ok(Elem::Int(self.int()?)),
        }
    }
}

impl FromStr for Elem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Elem> {
        let mut c = Cursor {
            src: s.as_bytes(),
            pos: 0,
        };
        let e = c.elem()?;
        if c.pos != s.len() {
            return Err(Error::parse(c.pos, "trailing characters"));
        }
        Ok(e)
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Elem, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_elem() -> impl Strategy<Value = Elem> {
        let leaf = prop_oneof![
            any::<i64>().prop_map(Elem::Int),
            prop::collection::vec(-50i64..50, 0..4).prop_map(Elem::Tuple),
        ];
        leaf.prop_recursive(3, 24, 4, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Elem::pair(a, b)),
                prop::collection::vec((inner.clone(), inner.clone()), 0..3).prop_map(Elem::Map),
                prop::collection::vec((1u8..3, inner), 0..3).prop_map(Elem::Word),
            ]
        })
    }

    proptest! {
        #[test]
        fn canonical_text_round_trips(e in arb_elem()) {
            let text = e.to_string();
            prop_assert_eq!(text.parse::<Elem>().unwrap(), e);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!("<1,2".parse::<Elem>().is_err());
        assert!("(1,)".parse::<Elem>().is_err());
        assert!("1 ".parse::<Elem>().is_err());
        assert_eq!("{}".parse::<Elem>().unwrap(), Elem::Map(vec![]));
    }
}
