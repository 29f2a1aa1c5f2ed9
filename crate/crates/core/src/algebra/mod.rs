//! Finitely supported elements of the group algebra with exact Gaussian
//! rational coefficients.

mod coefficient;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use coefficient::{rational_from_pair, rational_pair, Coefficient};

use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{same_group, GroupRef, Subgroup};
use crate::literal::{parse_list, shift, split_top};

/// Serde adapter writing a rational as a `[numerator, denominator]` pair.
pub mod rational_serde {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        super::rational_pair(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let pair = <[String; 2]>::deserialize(d)?;
        super::rational_from_pair(&pair).map_err(serde::de::Error::custom)
    }
}

/// `Σ x(g)·λ_g` over a finite support; zero coefficients are never stored.
#[derive(Clone)]
pub struct AlgebraElement {
    group: GroupRef,
    support: BTreeMap<Elem, Coefficient>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({})", self)
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        same_group(&*self.group, &*other.group) && self.support == other.support
    }
}

impl Eq for AlgebraElement {}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .support
            .iter()
            .map(|(g, c)| format!("{c}*{}", self.group.render(g)))
            .collect();
        write!(f, "{}", terms.join("; "))
    }
}

impl AlgebraElement {
    pub fn zero(group: GroupRef) -> AlgebraElement {
        AlgebraElement {
            group,
            support: BTreeMap::new(),
        }
    }

    /// `λ_g`.
    pub fn delta(group: GroupRef, g: Elem) -> Result<AlgebraElement> {
        AlgebraElement::from_terms(group, [(g, Coefficient::one())])
    }

    /// Sums the given terms; repeated elements accumulate.
    pub fn from_terms(
        group: GroupRef,
        terms: impl IntoIterator<Item = (Elem, Coefficient)>,
    ) -> Result<AlgebraElement> {
        let mut support: BTreeMap<Elem, Coefficient> = BTreeMap::new();
        for (g, c) in terms {
            if !group.is_element(&g) {
                return Err(Error::input(format!(
                    "{g} is not an element of {}",
                    group.name()
                )));
            }
            *support.entry(g).or_default() += &c;
        }
        support.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement { group, support })
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn support(&self) -> &BTreeMap<Elem, Coefficient> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `x(g)`.
    pub fn coefficient(&self, g: &Elem) -> Coefficient {
        self.support.get(g).cloned().unwrap_or_default()
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<()> {
        if same_group(&*self.group, &*other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(self.group.name(), other.group.name()))
        }
    }

    fn with_support(&self, support: BTreeMap<Elem, Coefficient>) -> AlgebraElement {
        let mut support = support;
        support.retain(|_, c| !c.is_zero());
        AlgebraElement {
            group: self.group.clone(),
            support,
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        let mut support = self.support.clone();
        for (g, c) in &other.support {
            *support.entry(g.clone()).or_default() += c;
        }
        Ok(self.with_support(support))
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.scale(&Coefficient::from_int(-1)))
    }

    pub fn scale(&self, c: &Coefficient) -> AlgebraElement {
        self.with_support(
            self.support
                .iter()
                .map(|(g, x)| (g.clone(), x * c))
                .collect(),
        )
    }

    /// `(x·y)(g) = Σ_{ab=g} x(a)·y(b)`.
    pub fn convolve(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_same(other)?;
        let mut support: BTreeMap<Elem, Coefficient> = BTreeMap::new();
        for (a, x) in &self.support {
            for (b, y) in &other.support {
                *support.entry(self.group.op(a, b)).or_default() += &(x * y);
            }
        }
        Ok(self.with_support(support))
    }

    /// `x*(g) = conj(x(g⁻¹))`.
    pub fn adjoint(&self) -> AlgebraElement {
        self.with_support(
            self.support
                .iter()
                .map(|(g, c)| (self.group.inv(g), c.conj()))
                .collect(),
        )
    }

    /// `τ(x) = x(e)`.
    pub fn trace(&self) -> Coefficient {
        self.coefficient(&self.group.identity())
    }

    /// `‖x‖₂² = Σ |x(g)|²`.
    pub fn norm2_sq(&self) -> BigRational {
        self.support
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn norm2(&self) -> Norm2 {
        Norm2::of(self.norm2_sq())
    }

    /// Restriction of the support to `s`.
    pub fn cond_exp(&self, s: &Subgroup) -> Result<AlgebraElement> {
        if !same_group(&**s.parent(), &*self.group) {
            return Err(Error::GroupMismatch(s.parent().name(), self.group.name()));
        }
        Ok(self.with_support(
            self.support
                .iter()
                .filter(|(g, _)| s.contains(g))
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect(),
        ))
    }

    /// `xy − yx`.
    pub fn commutator(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.convolve(other)?.sub(&other.convolve(self)?)
    }

    /// Terms as `(element literal, coefficient)` in support order.
    pub fn terms(&self) -> Vec<Term> {
        self.support
            .iter()
            .map(|(g, c)| Term {
                element: g.clone(),
                coefficient: c.clone(),
            })
            .collect()
    }

    /// Parses `;`-separated terms `[coef*]element`, e.g. `b^-1; 1/2*a b; i*a`.
    /// The empty string is the zero element.
    pub fn parse(group: GroupRef, s: &str) -> Result<AlgebraElement> {
        if s.trim().is_empty() {
            return Ok(AlgebraElement::zero(group));
        }
        let terms = parse_list(s, |item| {
            let parts = split_top(item, '*')?;
            match parts.as_slice() {
                [(o, lit)] => Ok((
                    group.parse(lit).map_err(|e| shift(e, *o))?,
                    Coefficient::one(),
                )),
                [(oc, coef), (oe, lit)] => {
                    let c: Coefficient = coef.parse().map_err(|e| shift(e, *oc))?;
                    Ok((group.parse(lit).map_err(|e| shift(e, *oe))?, c))
                }
                _ => Err(Error::parse(
                    0,
                    "a term is `coefficient*element` or `element`",
                )),
            }
        })?;
        AlgebraElement::from_terms(group, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub element: Elem,
    pub coefficient: Coefficient,
}

/// A squared 2-norm kept exact, with a decimal rendering of its root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Norm2 {
    pub square: [String; 2],
    pub decimal: String,
}

impl Norm2 {
    pub fn of(square: BigRational) -> Norm2 {
        let root = square.to_f64().unwrap_or(f64::NAN).sqrt();
        Norm2 {
            square: rational_pair(&square),
            decimal: format!("{root:.12}"),
        }
    }
}

/// Both sides of `E_B(xuy) − E_B(E_N(x)·u·E_N(y)) = E_B([x − E_N x]·u·[y − E_N y])`
/// for `B = L(H)`, `N = L(K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WahpDefect {
    pub lhs: AlgebraElement,
    pub rhs: AlgebraElement,
    pub norm2_sq: BigRational,
}

/// Evaluates both formulas; they must agree term by term.
pub fn wahp_defect(
    x: &AlgebraElement,
    y: &AlgebraElement,
    u: &AlgebraElement,
    h: &Subgroup,
    k: &Subgroup,
) -> Result<WahpDefect> {
    if let Some(g) = u.support.keys().find(|g| !h.contains(g)) {
        return Err(Error::input(format!(
            "u must be supported in H; {} is not",
            u.group.render(g)
        )));
    }
    let (ex, ey) = (x.cond_exp(k)?, y.cond_exp(k)?);
    let lhs = x
        .convolve(u)?
        .convolve(y)?
        .cond_exp(h)?
        .sub(&ex.convolve(u)?.convolve(&ey)?.cond_exp(h)?)?;
    let rhs = x
        .sub(&ex)?
        .convolve(u)?
        .convolve(&y.sub(&ey)?)?
        .cond_exp(h)?;
    if lhs != rhs {
        return Err(Error::internal(format!(
            "conditional expectation identity fails: {lhs} vs {rhs}"
        )));
    }
    let norm2_sq = rhs.norm2_sq();
    Ok(WahpDefect { lhs, rhs, norm2_sq })
}

/// `E_{G₁}E_{G₂}x = E_{G₂}E_{G₁}x = E_{G₁∩G₂}x`.
pub fn commuting_square_check(g1: &Subgroup, g2: &Subgroup, x: &AlgebraElement) -> Result<bool> {
    let a = x.cond_exp(g2)?.cond_exp(g1)?;
    let b = x.cond_exp(g1)?.cond_exp(g2)?;
    let c = x.cond_exp(&g1.intersection(g2))?;
    Ok(a == b && b == c)
}
