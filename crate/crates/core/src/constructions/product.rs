use std::any::Any;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{Group, GroupRef};
use crate::literal::{shift, split_top, strip_enclosing};

/// `G₁ × G₂` with componentwise operations. Literal form: `[x, y]`.
#[derive(Debug, Clone)]
pub struct DirectProduct {
    left: GroupRef,
    right: GroupRef,
}

impl DirectProduct {
    pub fn new(left: GroupRef, right: GroupRef) -> DirectProduct {
        DirectProduct { left, right }
    }

    pub fn left(&self) -> &GroupRef {
        &self.left
    }

    pub fn right(&self) -> &GroupRef {
        &self.right
    }

    pub fn split<'a>(&self, e: &'a Elem) -> (&'a Elem, &'a Elem) {
        e.as_pair().expect("pair normal form")
    }

    pub fn embed_left(&self, g: Elem) -> Elem {
        Elem::pair(g, self.right.identity())
    }

    pub fn embed_right(&self, g: Elem) -> Elem {
        Elem::pair(self.left.identity(), g)
    }
}

impl Group for DirectProduct {
    fn name(&self) -> String {
        format!("({} × {})", self.left.name(), self.right.name())
    }

    fn identity(&self) -> Elem {
        Elem::pair(self.left.identity(), self.right.identity())
    }

    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        let ((a1, a2), (b1, b2)) = (self.split(a), self.split(b));
        Elem::pair(self.left.op(a1, b1), self.right.op(a2, b2))
    }

    fn inv(&self, a: &Elem) -> Elem {
        let (a1, a2) = self.split(a);
        Elem::pair(self.left.inv(a1), self.right.inv(a2))
    }

    fn generators(&self) -> Vec<Elem> {
        let mut gens: Vec<Elem> = self
            .left
            .generators()
            .into_iter()
            .map(|g| self.embed_left(g))
            .collect();
        gens.extend(
            self.right
                .generators()
                .into_iter()
                .map(|g| self.embed_right(g)),
        );
        gens
    }

    fn is_element(&self, e: &Elem) -> bool {
        e.as_pair()
            .is_some_and(|(a, b)| self.left.is_element(a) && self.right.is_element(b))
    }

    fn render(&self, e: &Elem) -> String {
        let (a, b) = self.split(e);
        format!("[{}, {}]", self.left.render(a), self.right.render(b))
    }

    fn parse(&self, s: &str) -> Result<Elem> {
        let lead = s.len() - s.trim_start().len() + 1;
        let inner = strip_enclosing(s, '[', ']')
            .ok_or_else(|| Error::parse(0, "expected `[left, right]`"))?;
        let parts = split_top(inner, ',')?;
        let [(o1, p1), (o2, p2)] = parts[..] else {
            return Err(Error::parse(lead, "expected exactly two components"));
        };
        let a = self.left.parse(p1).map_err(|e| shift(e, lead + o1))?;
        let b = self.right.parse(p2).map_err(|e| shift(e, lead + o2))?;
        Ok(Elem::pair(a, b))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::Integers;

    #[test]
    fn z_times_z() {
        let g = DirectProduct::new(Arc::new(Integers), Arc::new(Integers));
        let x = g.parse("[1, 0]").unwrap();
        let y = g.parse("[0,1]").unwrap();
        assert_eq!(g.render(&g.op(&x, &y)), "[1, 1]");
        assert_eq!(g.identity(), Elem::pair(Elem::Int(0), Elem::Int(0)));
        // (0,0), (±1,0), (0,±1)
        assert_eq!(g.ball(1, 100).unwrap().len(), 5);
    }
}
