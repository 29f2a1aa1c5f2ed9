use std::any::Any;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::literal::{parse_i64, split_top, strip_enclosing};

/// The infinite cyclic group `Z`, generator `1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl Group for Integers {
    fn name(&self) -> String {
        "Z".into()
    }

    fn identity(&self) -> Elem {
        Elem::Int(0)
    }

    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        Elem::Int(int(a) + int(b))
    }

    fn inv(&self, a: &Elem) -> Elem {
        Elem::Int(-int(a))
    }

    fn generators(&self) -> Vec<Elem> {
        vec![Elem::Int(1)]
    }

    fn is_element(&self, e: &Elem) -> bool {
        matches!(e, Elem::Int(_))
    }

    fn render(&self, e: &Elem) -> String {
        int(e).to_string()
    }

    fn parse(&self, s: &str) -> Result<Elem> {
        Ok(Elem::Int(parse_i64(s, 0)?))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// `Z/n`, residues stored in `0..n`.
#[derive(Debug, Clone, Copy)]
pub struct Cyclic {
    order: i64,
}

impl Cyclic {
    pub fn new(order: i64) -> Result<Cyclic> {
        if order < 2 {
            return Err(Error::input("cyclic group order must be at least 2"));
        }
        Ok(Cyclic { order })
    }

    pub fn order(&self) -> i64 {
        self.order
    }
}

impl Group for Cyclic {
    fn name(&self) -> String {
        format!("Z/{}", self.order)
    }

    fn identity(&self) -> Elem {
        Elem::Int(0)
    }

    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        Elem::Int((int(a) + int(b)).rem_euclid(self.order))
    }

    fn inv(&self, a: &Elem) -> Elem {
        Elem::Int((-int(a)).rem_euclid(self.order))
    }

    fn generators(&self) -> Vec<Elem> {
        vec![Elem::Int(1)]
    }

    fn is_element(&self, e: &Elem) -> bool {
        matches!(e, Elem::Int(n) if (0..self.order).contains(n))
    }

    fn render(&self, e: &Elem) -> String {
        int(e).to_string()
    }

    fn parse(&self, s: &str) -> Result<Elem> {
        Ok(Elem::Int(parse_i64(s, 0)?.rem_euclid(self.order)))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// The lattice `Z^d` with the standard basis as generators.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    dim: usize,
}

impl Lattice {
    pub fn new(dim: usize) -> Result<Lattice> {
        if dim == 0 {
            return Err(Error::input("lattice dimension must be positive"));
        }
        Ok(Lattice { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        Elem::Tuple(v)
    }
}

impl Group for Lattice {
    fn name(&self) -> String {
        format!("Z^{}", self.dim)
    }

    fn identity(&self) -> Elem {
        Elem::Tuple(vec![0; self.dim])
    }

    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        Elem::Tuple(tuple(a).iter().zip(tuple(b)).map(|(x, y)| x + y).collect())
    }

    fn inv(&self, a: &Elem) -> Elem {
        Elem::Tuple(tuple(a).iter().map(|x| -x).collect())
    }

    fn generators(&self) -> Vec<Elem> {
        (0..self.dim).map(|i| self.basis(i)).collect()
    }

    fn is_element(&self, e: &Elem) -> bool {
        matches!(e, Elem::Tuple(v) if v.len() == self.dim)
    }

    fn render(&self, e: &Elem) -> String {
        e.to_string()
    }

    /// Accepts `(1,0)` or bare `1,0`.
    fn parse(&self, s: &str) -> Result<Elem> {
        let lead = s.len() - s.trim_start().len();
        let (inner, off) = match strip_enclosing(s, '(', ')') {
            Some(inner) => (inner, lead + 1),
            None => (s, 0),
        };
        let parts = split_top(inner, ',')?;
        if parts.len() != self.dim {
            return Err(Error::parse(
                0,
                format!("expected {} coordinates, found {}", self.dim, parts.len()),
            ));
        }
        let v = parts
            .into_iter()
            .map(|(o, p)| parse_i64(p, off + o))
            .collect::<Result<Vec<_>>>()?;
        Ok(Elem::Tuple(v))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

fn int(e: &Elem) -> i64 {
    e.as_int().expect("integer normal form")
}

fn tuple(e: &Elem) -> &[i64] {
    e.as_tuple().expect("tuple normal form")
}
