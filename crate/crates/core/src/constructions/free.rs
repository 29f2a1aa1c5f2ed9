use std::any::Any;

use crate::constructions::Integers;
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{Group, GroupRef};
use crate::literal::{parse_i64, shift};

/// Free product `G₁ ∗ G₂` over reduced words.
///
/// A word is a sequence of `(factor, letter)` with factors alternating and no
/// letter equal to its factor's identity. Literals use `a`/`b` with integer
/// exponents when a factor is `Z` (`a^2 b^-1`), `{1:lit}` otherwise, and `e`
/// for the empty word.
#[derive(Debug, Clone)]
pub struct FreeProduct {
    factors: [GroupRef; 2],
}

impl FreeProduct {
    pub fn new(first: GroupRef, second: GroupRef) -> FreeProduct {
        FreeProduct {
            factors: [first, second],
        }
    }

    pub fn factor(&self, index: u8) -> &GroupRef {
        &self.factors[usize::from(index - 1)]
    }

    /// One-letter word, or the empty word for a factor identity.
    pub fn letter(&self, index: u8, g: Elem) -> Elem {
        if g == self.factor(index).identity() {
            Elem::Word(Vec::new())
        } else {
            Elem::Word(vec![(index, g)])
        }
    }

    pub fn letters<'a>(&self, w: &'a Elem) -> &'a [(u8, Elem)] {
        w.as_word().expect("word normal form")
    }

    /// Whether the word lies in the embedded copy of factor `index`.
    pub fn in_factor(&self, index: u8, w: &Elem) -> bool {
        match self.letters(w) {
            [] => true,
            [(k, _)] => *k == index,
            _ => false,
        }
    }

    /// Appends letters one at a time, merging and cancelling at the boundary.
    fn push_reduce(&self, stack: &mut Vec<(u8, Elem)>, (k, g): (u8, Elem)) {
        match stack.last_mut() {
            Some((top, h)) if *top == k => {
                let merged = self.factor(k).op(h, &g);
                if merged == self.factor(k).identity() {
                    stack.pop();
                } else {
                    *h = merged;
                }
            }
            _ => stack.push((k, g)),
        }
    }

    fn letter_name(&self, index: u8) -> Option<char> {
        self.factor(index)
            .as_any()
            .is::<Integers>()
            .then_some(if index == 1 { 'a' } else { 'b' })
    }

    fn parse_token(&self, tok: &str) -> Result<Elem> {
        if tok == "e" {
            return Ok(Elem::Word(Vec::new()));
        }
        if let Some(inner) = tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let (k, lit) = inner
                .split_once(':')
                .ok_or_else(|| Error::parse(0, "expected `{factor:literal}`"))?;
            let k = match k.trim() {
                "1" => 1,
                "2" => 2,
                _ => return Err(Error::parse(1, "factor index must be 1 or 2")),
            };
            let g = self
                .factor(k)
                .parse(lit)
                .map_err(|e| shift(e, 2 + k.to_string().len()))?;
            return Ok(self.letter(k, g));
        }
        let mut chars = tok.chars();
        let head = chars.next().unwrap_or(' ');
        let index = (1..=2)
            .find(|&k| self.letter_name(k) == Some(head))
            .ok_or_else(|| Error::parse(0, format!("unknown letter `{head}`")))?;
        let exp = match tok[1..].strip_prefix('^') {
            Some(e) => parse_i64(e, 2)?,
            None if tok.len() == 1 => 1,
            None => return Err(Error::parse(1, "expected `^<exponent>`")),
        };
        Ok(self.letter(index, Elem::Int(exp)))
    }
}

impl Group for FreeProduct {
    fn name(&self) -> String {
        format!("({} ∗ {})", self.factors[0].name(), self.factors[1].name())
    }

    fn identity(&self) -> Elem {
        Elem::Word(Vec::new())
    }

    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        let mut stack = self.letters(a).to_vec();
        for l in self.letters(b) {
            self.push_reduce(&mut stack, l.clone());
        }
        Elem::Word(stack)
    }

    fn inv(&self, a: &Elem) -> Elem {
        Elem::Word(
            self.letters(a)
                .iter()
                .rev()
                .map(|(k, g)| (*k, self.factor(*k).inv(g)))
                .collect(),
        )
    }

    fn generators(&self) -> Vec<Elem> {
        (1..=2u8)
            .flat_map(|k| self.factor(k).generators().into_iter().map(move |g| (k, g)))
            .map(|(k, g)| self.letter(k, g))
            .collect()
    }

    fn is_element(&self, e: &Elem) -> bool {
        let Some(w) = e.as_word() else { return false };
        w.iter().all(|(k, g)| {
            (1..=2).contains(k) && self.factor(*k).is_element(g) && *g != self.factor(*k).identity()
        }) && w.windows(2).all(|p| p[0].0 != p[1].0)
    }

    fn render(&self, e: &Elem) -> String {
        let w = self.letters(e);
        if w.is_empty() {
            return "e".into();
        }
        w.iter()
            .map(|(k, g)| match (self.letter_name(*k), g.as_int()) {
                (Some(c), Some(1)) => c.to_string(),
                (Some(c), Some(n)) => format!("{c}^{n}"),
                _ => format!("{{{k}:{}}}", self.factor(*k).render(g)),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn parse(&self, s: &str) -> Result<Elem> {
        let mut acc = self.identity();
        let mut seen = false;
        let mut pos = 0;
        for tok in s.split(' ') {
            if !tok.is_empty() {
                let w = self.parse_token(tok).map_err(|e| shift(e, pos))?;
                acc = self.op(&acc, &w);
                seen = true;
            }
            pos += tok.len() + 1;
        }
        if !seen {
            return Err(Error::parse(0, "empty word literal (use `e`)"));
        }
        Ok(acc)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
