//! Semidirect products `A ⋊ K`, the actions that build them, and the base
//! group `Z^(X)` of generalized wreath products.

use std::any::Any;
use std::fmt;
use std::sync::Arc;

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{Group, GroupRef};
use crate::literal::{shift, split_top, strip_enclosing};

/// An action of `K` on `A` by automorphisms.
pub trait Action: Send + Sync + fmt::Debug {
    fn apply(&self, k: &Elem, a: &Elem) -> Elem;
    fn describe(&self) -> String;
    fn as_any(&self) -> &dyn Any;
}

/// `n ↦ Mⁿ` for an integer matrix `M` with `|det M| = 1`, acting on `Z^d`.
/// The acting group is `Z`.
#[derive(Debug, Clone)]
pub struct MatrixAction {
    matrix: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
}

impl MatrixAction {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<MatrixAction> {
        let d = matrix.len();
        if d == 0 || matrix.iter().any(|row| row.len() != d) {
            return Err(Error::input("action matrix must be square and nonempty"));
        }
        let det = determinant(&matrix);
        if det.abs() != 1 {
            return Err(Error::input(format!(
                "action matrix must have determinant ±1, found {det}"
            )));
        }
        let inverse = adjugate(&matrix)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x * det as i64).collect())
            .collect();
        Ok(MatrixAction { matrix, inverse })
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// `Mⁿ` as an explicit matrix.
    pub fn power(&self, n: i64) -> Vec<Vec<i64>> {
        let d = self.dim();
        let base = if n < 0 { &self.inverse } else { &self.matrix };
        let mut acc: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        for _ in 0..n.unsigned_abs() {
            acc = mat_mul(base, &acc);
        }
        acc
    }

    /// Smallest `p > 0` with `Mᵖ = I`, searched up to `limit`.
    pub fn order(&self, limit: u32) -> Option<u32> {
        let d = self.dim();
        let id: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut acc = self.matrix.clone();
        for p in 1..=limit {
            if acc == id {
                return Some(p);
            }
            acc = mat_mul(&self.matrix, &acc);
        }
        None
    }

    /// `det(Mⁿ − I)`; nonzero means `Mⁿ` fixes only the origin.
    pub fn fixed_point_determinant(&self, n: i64) -> i128 {
        let mut m = self.power(n);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= 1;
        }
        determinant(&m)
    }
}

impl Action for MatrixAction {
    fn apply(&self, k: &Elem, a: &Elem) -> Elem {
        let n = k.as_int().expect("matrix actions are actions of Z");
        let base = if n < 0 { &self.inverse } else { &self.matrix };
        let mut v = a.as_tuple().expect("lattice element").to_vec();
        for _ in 0..n.unsigned_abs() {
            v = base
                .iter()
                .map(|row| row.iter().zip(&v).map(|(m, x)| m * x).sum())
                .collect();
        }
        Elem::Tuple(v)
    }

    fn describe(&self) -> String {
        format!("n ↦ M^n, M = {:?}", self.matrix)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Every `k` acts as the identity.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrivialAction;

impl Action for TrivialAction {
    fn apply(&self, _k: &Elem, a: &Elem) -> Elem {
        a.clone()
    }

    fn describe(&self) -> String {
        "trivial".into()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// A set with a left `K`-action.
pub trait KSet: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn act(&self, k: &Elem, x: &Elem) -> Elem;
    fn base_point(&self) -> Elem;
    /// Points reachable from the base point by a `K`-ball of radius `r`.
    fn points(&self, r: u32, cap: usize) -> Result<Vec<Elem>>;
    fn render_point(&self, x: &Elem) -> String;
    fn parse_point(&self, s: &str) -> Result<Elem>;
}

/// `K` acting on itself by left translation.
#[derive(Debug, Clone)]
pub struct RegularKSet {
    group: GroupRef,
}

impl RegularKSet {
    pub fn new(group: GroupRef) -> RegularKSet {
        RegularKSet { group }
    }
}

impl KSet for RegularKSet {
    fn name(&self) -> String {
        self.group.name()
    }

    fn act(&self, k: &Elem, x: &Elem) -> Elem {
        self.group.op(k, x)
    }

    fn base_point(&self) -> Elem {
        self.group.identity()
    }

    fn points(&self, r: u32, cap: usize) -> Result<Vec<Elem>> {
        self.group.ball(r, cap)
    }

    fn render_point(&self, x: &Elem) -> String {
        self.group.render(x)
    }

    fn parse_point(&self, s: &str) -> Result<Elem> {
        self.group.parse(s)
    }
}

/// `Z^(X)`: finitely supported maps `X → Z` under pointwise product.
///
/// Literal form: `d0+d3` (unit value at each point), `d2*1` (explicit value),
/// `e` for the empty map.
#[derive(Debug, Clone)]
pub struct FinitelySupported {
    values: GroupRef,
    points: Arc<dyn KSet>,
}

impl FinitelySupported {
    pub fn new(values: GroupRef, points: Arc<dyn KSet>) -> FinitelySupported {
        FinitelySupported { values, points }
    }

    pub fn points(&self) -> &Arc<dyn KSet> {
        &self.points
    }

    pub fn values(&self) -> &GroupRef {
        &self.values
    }

    /// `δ_x · z`.
    pub fn delta(&self, x: Elem, z: Elem) -> Elem {
        self.normalize(vec![(x, z)])
    }

    pub fn support<'a>(&self, f: &'a Elem) -> impl Iterator<Item = &'a Elem> {
        f.as_map().expect("map normal form").iter().map(|(x, _)| x)
    }

    fn normalize(&self, mut entries: Vec<(Elem, Elem)>) -> Elem {
        let id = self.values.identity();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Elem, Elem)> = Vec::with_capacity(entries.len());
        for (x, z) in entries {
            match out.last_mut() {
                Some((y, w)) if *y == x => *w = self.values.op(w, &z),
                _ => out.push((x, z)),
            }
        }
        out.retain(|(_, z)| *z != id);
        Elem::Map(out)
    }

    /// `k·f`, i.e. `(k·f)(x) = f(k⁻¹·x)`.
    pub fn translate(&self, k: &Elem, f: &Elem) -> Elem {
        let entries = f
            .as_map()
            .expect("map normal form")
            .iter()
            .map(|(x, z)| (self.points.act(k, x), z.clone()))
            .collect();
        self.normalize(entries)
    }
}

impl Group for FinitelySupported {
    fn name(&self) -> String {
        format!("{}^({})", self.values.name(), self.points.name())
    }

    fn identity(&self) -> Elem {
        Elem::Map(Vec::new())
    }

    fn op(&self, a: &Elem, b: &Elem) -> Elem {
        let entries = a
            .as_map()
            .expect("map normal form")
            .iter()
            .chain(b.as_map().expect("map normal form"))
            .cloned()
            .collect();
        self.normalize(entries)
    }

    fn inv(&self, a: &Elem) -> Elem {
        let entries = a
            .as_map()
            .expect("map normal form")
            .iter()
            .map(|(x, z)| (x.clone(), self.values.inv(z)))
            .collect();
        self.normalize(entries)
    }

    /// Unit deltas at the base point; with a transitive `K`-action these
    /// generate the wreath product together with `K`.
    fn generators(&self) -> Vec<Elem> {
        self.values
            .generators()
            .into_iter()
            .map(|z| self.delta(self.points.base_point(), z))
            .collect()
    }

    fn is_element(&self, e: &Elem) -> bool {
        let Some(m) = e.as_map() else { return false };
        let id = self.values.identity();
        m.windows(2).all(|w| w[0].0 < w[1].0)
            && m.iter().all(|(_, z)| self.values.is_element(z) && *z != id)
    }

    fn render(&self, e: &Elem) -> String {
        let m = e.as_map().expect("map normal form");
        if m.is_empty() {
            return "e".into();
        }
        let unit = self.values.generators().into_iter().next();
        m.iter()
            .map(|(x, z)| {
                let p = self.points.render_point(x);
                if Some(z) == unit.as_ref() {
                    format!("d{p}")
                } else {
                    format!("d{p}*{}", self.values.render(z))
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    fn parse(&self, s: &str) -> Result<Elem> {
        let t = s.trim();
        if t == "e" || t == "0" {
            return Ok(self.identity());
        }
        let unit = self
            .values
            .generators()
            .into_iter()
            .next()
            .ok_or_else(|| Error::input("value group has no generator"))?;
        let mut entries = Vec::new();
        for (off, term) in split_top(s, '+')? {
            let lead = term.len() - term.trim_start().len();
            let body = term
                .trim()
                .strip_prefix('d')
                .ok_or_else(|| Error::parse(off + lead, "expected `d<point>`"))?;
            let at = off + lead + 1;
            let (point, value) = match body.split_once('*') {
                Some((p, v)) => (
                    p,
                    self.values
                        .parse(v)
                        .map_err(|e| shift(e, at + p.len() + 1))?,
                ),
                None => (body, unit.clone()),
            };
            let x = self.points.parse_point(point).map_err(|e| shift(e, at))?;
            entries.push((x, value));
        }
        Ok(self.normalize(entries))
    }

    /// Maps supported on at most `r` points of the radius-`r` point set,
    /// with values in the radius-`r` ball of the value group.
    fn ball(&self, r: u32, cap: usize) -> Result<Vec<Elem>> {
        let points = self.points.points(r, cap)?;
        let id = self.values.identity();
        let values: Vec<Elem> = self
            .values
            .ball(r, cap)?
            .into_iter()
            .filter(|z| *z != id)
            .collect();
        let mut out = vec![self.identity()];
        let mut layer: Vec<(usize, Vec<(Elem, Elem)>)> = vec![(0, Vec::new())];
        for _ in 0..r {
            let mut next = Vec::new();
            for (from, entries) in &layer {
                for (i, x) in points.iter().enumerate().skip(*from) {
                    for z in &values {
                        let mut e = entries.clone();
                        e.push((x.clone(), z.clone()));
                        out.push(self.normalize(e.clone()));
                        if out.len() > cap {
                            return Err(Error::BudgetExceeded {
                                what: self.name(),
                                cap,
                            });
                        }
                        next.push((i + 1, e));
                    }
                }
            }
            layer = next;
        }
        Ok(out)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// `K` acting on `Z^(X)` through its action on `X`.
#[derive(Debug, Clone)]
pub struct TranslationAction {
    base: Arc<FinitelySupported>,
}

impl TranslationAction {
    pub fn new(base: Arc<FinitelySupported>) -> TranslationAction {
        TranslationAction { base }
    }

    pub fn base(&self) -> &Arc<FinitelySupported> {
        &self.base
    }
}

impl Action for TranslationAction {
    fn apply(&self, k: &Elem, a: &Elem) -> Elem {
        self.base.translate(k, a)
    }

    fn describe(&self) -> String {
        format!("translation of supports in {}", self.base.points.name())
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// `A ⋊_α K` with `(a,k)(b,l) = (a·α_k(b), kl)`.
///
/// Literal form: `(a, k)`; a bare `a` means `(a, e)`.
#[derive(Debug, Clone)]
pub struct Semidirect {
    base: GroupRef,
    acting: GroupRef,
    action: Arc<dyn Action>,
}

impl Semidirect {
    /// Builds the product after sampling the action laws on radius-2 balls.
    pub fn new(base: GroupRef, acting: GroupRef, action: Arc<dyn Action>) -> Result<Semidirect> {
        let s = Semidirect {
            base,
            acting,
            action,
        };
        s.validate_action(2, 10_000)?;
        Ok(s)
    }

    pub fn base(&self) -> &GroupRef {
        &self.base
    }

    pub fn acting(&self) -> &GroupRef {
        &self.acting
    }

    pub fn action(&self) -> &Arc<dyn Action> {
        &self.action
    }

    pub fn alpha(&self, k: &Elem, a: &Elem) -> Elem {
        self.action.apply(k, a)
    }

    pub fn split<'a>(&self, e: &'a Elem) -> (&'a Elem, &'a Elem) {
        e.as_pair().expect("pair normal form")
    }

    pub fn embed_base(&self, a: Elem) -> Elem {
        Elem::pair(a, self.acting.identity())
    }

    pub fn embed_acting(&self, k: Elem) -> Elem {
        Elem::pair(self.base.identity(), k)
    }

    pub fn validate_action(&self, radius: u32, cap: usize) -> Result<()> {
        let (a_ball, k_ball) = (self.base.ball(radius, cap)?, self.acting.ball(radius, cap)?);
        let a = &self.base;
        let k = &self.acting;
        let fail = |what: &str| Err(Error::input(format!("action law violated: {what}")));
        for x in &a_ball {
            if self.alpha(&k.identity(), x) != *x {
                return fail("α_e ≠ id");
            }
            for k1 in &k_ball {
                for k2 in &k_ball {
                    if self.alpha(&k.op(k1, k2), x) != self.alpha(k1, &self.alpha(k2, x)) {
                        return fail("α_{k₁k₂} ≠ α_{k₁}α_{k₂}");
                    }
                }
                for y in &a_ball {
                    if self.alpha(k1, &a.op(x, y)) != a.op(&self.alpha(k1, x), &self.alpha(k1, y)) {
                        return fail("α_k is not a homomorphism");
                    }
                }
            }
        }
        Ok(())
    }
}

impl Group for Semidirect {
    fn name(&self) -> String {
        format!("({} ⋊ {})", self.base.name(), self.acting.name())
    }

    fn identity(&self) -> Elem {
        Elem::pair(self.base.identity(), self.acting.identity())
    }

    fn op(&self, x: &Elem, y: &Elem) -> Elem {
        let ((a, k), (b, l)) = (self.split(x), self.split(y));
        Elem::pair(self.base.op(a, &self.alpha(k, b)), self.acting.op(k, l))
    }

    fn inv(&self, x: &Elem) -> Elem {
        let (a, k) = self.split(x);
        let ki = self.acting.inv(k);
        Elem::pair(self.alpha(&ki, &self.base.inv(a)), ki)
    }

    fn generators(&self) -> Vec<Elem> {
        let mut gens: Vec<Elem> = self
            .base
            .generators()
            .into_iter()
            .map(|a| self.embed_base(a))
            .collect();
        gens.extend(
            self.acting
                .generators()
                .into_iter()
                .map(|k| self.embed_acting(k)),
        );
        gens
    }

    fn is_element(&self, e: &Elem) -> bool {
        e.as_pair()
            .is_some_and(|(a, k)| self.base.is_element(a) && self.acting.is_element(k))
    }

    fn render(&self, e: &Elem) -> String {
        let (a, k) = self.split(e);
        format!("({},{})", self.base.render(a), self.acting.render(k))
    }

    fn parse(&self, s: &str) -> Result<Elem> {
        let lead = s.len() - s.trim_start().len() + 1;
        let as_pair = strip_enclosing(s, '(', ')').and_then(|inner| {
            let parts = split_top(inner, ',').ok()?;
            let [(o1, p1), (o2, p2)] = parts[..] else {
                return None;
            };
            Some((|| {
                let a = self.base.parse(p1).map_err(|e| shift(e, lead + o1))?;
                let k = self.acting.parse(p2).map_err(|e| shift(e, lead + o2))?;
                Ok(Elem::pair(a, k))
            })())
        });
        match as_pair {
            Some(Ok(e)) => Ok(e),
            Some(Err(pair_err)) => self
                .base
                .parse(s)
                .map(|a| self.embed_base(a))
                .map_err(|_| pair_err),
            None => self.base.parse(s).map(|a| self.embed_base(a)),
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Orbit of `a` under the subgroup of the acting group generated by `gens`,
/// or `None` if it does not close within `depth` generator passes or `cap` points.
pub fn action_orbit(
    product: &Semidirect,
    gens: &[Elem],
    a: &Elem,
    depth: u32,
    cap: usize,
) -> Option<Vec<Elem>> {
    let k = product.acting();
    let steps: Vec<Elem> = gens.iter().flat_map(|g| [g.clone(), k.inv(g)]).collect();
    let mut orbit = vec![a.clone()];
    let mut frontier = vec![a.clone()];
    for level in 0..=depth {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = product.alpha(s, x);
                if !orbit.contains(&y) {
                    orbit.push(y.clone());
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return Some(orbit);
        }
        if level == depth || orbit.len() > cap {
            return None;
        }
        frontier = next;
    }
    None
}

pub(crate) fn determinant(m: &[Vec<i64>]) -> i128 {
    // Fraction-free Bareiss elimination.
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

// Writes the transpose, so index loops read clearer than iterators.
#[allow(clippy::needless_range_loop)]
fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| *x)
                        .collect()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * determinant(&minor) as i64;
        }
    }
    adj
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|t| a[i][t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{Cyclic, Integers, Lattice};

    fn rotation() -> Semidirect {
        let action = MatrixAction::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        Semidirect::new(
            Arc::new(Lattice::new(2).unwrap()),
            Arc::new(Integers),
            Arc::new(action),
        )
        .unwrap()
    }

    fn lamplighter() -> Semidirect {
        let k: GroupRef = Arc::new(Integers);
        let base = Arc::new(FinitelySupported::new(
            Arc::new(Cyclic::new(2).unwrap()),
            Arc::new(RegularKSet::new(k.clone())),
        ));
        Semidirect::new(base.clone(), k, Arc::new(TranslationAction::new(base))).unwrap()
    }

    #[test]
    fn rotation_product_rule() {
        let g = rotation();
        // ((1,0),1)·((1,0),0) = ((1,0) + M(1,0), 1) = ((1,1),1)
        let x = g.parse("((1,0),1)").unwrap();
        let y = g.parse("(1,0)").unwrap();
        assert_eq!(g.render(&g.op(&x, &y)), "((1,1),1)");
        assert_eq!(g.op(&g.inv(&x), &x), g.identity());
    }

    #[test]
    fn conjugating_base_by_acting_applies_action() {
        let g = rotation();
        let a = Elem::Tuple(vec![2, -1]);
        for n in -5..=5 {
            let k = g.embed_acting(Elem::Int(n));
            let conj = g.op(&g.op(&k, &g.embed_base(a.clone())), &g.inv(&k));
            assert_eq!(conj, g.embed_base(g.alpha(&Elem::Int(n), &a)));
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = MatrixAction::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.power(-1), vec![vec![1, -1], vec![-1, 2]]);
        assert_eq!(determinant(&[vec![0, -1], vec![1, 0]]), 1);
        assert!(MatrixAction::new(vec![vec![2, 0], vec![0, 1]]).is_err());
        let rot = MatrixAction::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        assert_eq!(rot.fixed_point_determinant(1), 2);
        assert_eq!(rot.order(10), Some(4));
    }

    #[test]
    fn translation_shifts_support() {
        let g = lamplighter();
        let base = g
            .base()
            .as_any()
            .downcast_ref::<FinitelySupported>()
            .unwrap();
        let d0 = base.parse("d0").unwrap();
        assert_eq!(base.render(&g.alpha(&Elem::Int(1), &d0)), "d1");
        assert_eq!(g.alpha(&Elem::Int(7), &base.identity()), base.identity());
        // (δ₀,0)·(δ₀,0) is the identity in the Z/2 base
        let s = g.embed_base(d0);
        assert_eq!(g.op(&s, &s), g.identity());
        let f = base.parse("d0+d3").unwrap();
        assert_eq!(base.render(&g.alpha(&Elem::Int(-2), &f)), "d-2+d1");
    }

    #[test]
    fn finitely_supported_literals() {
        let g = lamplighter();
        let base = g.base();
        assert_eq!(base.parse("d0+d0").unwrap(), base.identity());
        assert_eq!(base.render(&base.parse("d3+d-1").unwrap()), "d-1+d3");
        assert!(matches!(
            base.parse("d0+x1"),
            Err(Error::Parse { pos: 3, .. })
        ));
    }

    #[test]
    fn rejects_non_homomorphic_action() {
        #[derive(Debug)]
        struct Shift;
        impl Action for Shift {
            fn apply(&self, k: &Elem, a: &Elem) -> Elem {
                Elem::Int(a.as_int().unwrap() + k.as_int().unwrap())
            }
            fn describe(&self) -> String {
                "affine shift".into()
            }
            fn as_any(&self) -> &dyn Any {
                self
            }
        }
        let r = Semidirect::new(Arc::new(Integers), Arc::new(Integers), Arc::new(Shift));
        assert!(r.is_err());
    }

    #[test]
    fn semidirect_group_laws_on_ball() {
        for g in [rotation(), lamplighter()] {
            let ball = g.ball(2, 10_000).unwrap();
            for x in &ball {
                assert_eq!(g.op(x, &g.identity()), *x);
                assert_eq!(g.op(&g.identity(), x), *x);
                assert_eq!(g.op(x, &g.inv(x)), g.identity());
                assert_eq!(g.inv(&g.inv(x)), *x);
            }
        }
    }
}
