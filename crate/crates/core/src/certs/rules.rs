//! Closed-form rules keyed by how a triple was constructed.
//!
//! Finiteness of orbits and stabilizers is undecidable in general; for the
//! built-in families it follows from a one-line argument, recorded in
//! [`Recipe::statement`]. Rules only ever add information that a generic
//! bounded search cannot produce, and every verdict they emit carries spot
//! checks that replay by direct computation.

use serde::{Deserialize, Serialize};

use crate::constructions::{Integers, MatrixAction, Shape, TranslationAction};
use crate::elem::Elem;
use crate::group::Triple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    /// `Z ≀_Z Z` style: `H = K = Z` translating finite supports.
    TranslationWreath,
    /// `H = K = Z` acting on `Z^d` through a finite-order matrix `M` with
    /// `det(M − I) ≠ 0`.
    FiniteOrderMatrix,
    /// `H = K` a `Z` free factor of a free product.
    FreeFactor,
    /// As `FreeFactor`, but decided through the malnormality route.
    FreeFactorMalnormal,
    /// Componentwise product of two triples.
    Product,
    /// `H = K` a normal subgroup of an abelian group.
    AbelianNormal,
    /// `H = K` acting trivially on the base.
    TrivialAction,
    Generic,
}

impl Recipe {
    pub fn key(self) -> &'static str {
        match self {
            Recipe::TranslationWreath => "translation-wreath",
            Recipe::FiniteOrderMatrix => "finite-order-matrix",
            Recipe::FreeFactor => "free-factor",
            Recipe::FreeFactorMalnormal => "free-factor-malnormal",
            Recipe::Product => "product",
            Recipe::AbelianNormal => "abelian-normal",
            Recipe::TrivialAction => "trivial-action",
            Recipe::Generic => "generic",
        }
    }

    pub fn from_key(key: &str) -> Option<Recipe> {
        ALL_RECIPES.iter().copied().find(|r| r.key() == key)
    }

    pub fn statement(self) -> &'static str {
        match self {
            Recipe::TranslationWreath => {
                "a nonempty finite support moved by a nonzero translation changes; \
                 so every a ≠ e has trivial stabilizer and an infinite orbit"
            }
            Recipe::FiniteOrderMatrix => {
                "M has finite order p, so every orbit in A has at most p points and \
                 pZ fixes everything; det(M − I) ≠ 0 leaves 0 as the only common fixed point"
            }
            Recipe::FreeFactor | Recipe::FreeFactorMalnormal => {
                "a free factor is malnormal: g aⁿ g⁻¹ with g ∉ ⟨a⟩ reduces to a word \
                 containing a second-factor letter unless n = 0"
            }
            Recipe::Product => {
                "a pair f₁hf₂ lands in H₁×H₂ only if both components do; a product of \
                 componentwise witnesses works, while (g₁,e) with g₁ ∉ K₁ has stabilizer ⊇ {e}×H₂"
            }
            Recipe::AbelianNormal => "gHg⁻¹ = H, so every coset gH is fixed by H",
            Recipe::TrivialAction => "H fixes every a, so every coset (a,e)H is fixed by H",
            Recipe::Generic => "no closed form",
        }
    }
}

pub const ALL_RECIPES: [Recipe; 8] = [
    Recipe::TranslationWreath,
    Recipe::FiniteOrderMatrix,
    Recipe::FreeFactor,
    Recipe::FreeFactorMalnormal,
    Recipe::Product,
    Recipe::AbelianNormal,
    Recipe::TrivialAction,
    Recipe::Generic,
];

/// `E(g) = gHg⁻¹ ∩ H` is trivial for every `g ∉ K`.
pub fn trivial_intersections(t: &Triple) -> bool {
    match t.recipe {
        Recipe::TranslationWreath => translation_view(t).is_some(),
        Recipe::FreeFactor | Recipe::FreeFactorMalnormal => free_view(t).is_some(),
        _ => false,
    }
}

fn translation_view(t: &Triple) -> Option<&crate::constructions::SemidirectView> {
    match &t.shape {
        Shape::Semidirect(v)
            if v.group.acting().as_any().is::<Integers>()
                && v.group.action().as_any().is::<TranslationAction>() =>
        {
            Some(v)
        }
        _ => None,
    }
}

fn free_view(t: &Triple) -> Option<&crate::constructions::FreeProduct> {
    match &t.shape {
        Shape::FreeProduct { group, factor: 1 } if group.factor(1).as_any().is::<Integers>() => {
            Some(group)
        }
        _ => None,
    }
}

pub fn matrix_action(t: &Triple) -> Option<&MatrixAction> {
    match &t.shape {
        Shape::Semidirect(v) => v.group.action().as_any().downcast_ref::<MatrixAction>(),
        _ => None,
    }
}

/// A finite list of `γ ∈ H` containing every solution of `gγh ∈ H`, when a
/// closed form pins the solutions down.
pub fn intersection_candidates(t: &Triple, g: &Elem, h: &Elem) -> Option<Vec<Elem>> {
    if t.k.contains(g) || t.k.contains(h) {
        return None;
    }
    match t.recipe {
        Recipe::TranslationWreath => {
            let v = translation_view(t)?;
            // (a₁,k₁)(e,γ)(a₂,k₂) ∈ H  ⇔  a₁·α_{k₁+γ}(a₂) = e, which forces
            // the translate of supp(a₂) onto supp(a₁).
            let (a1, k1) = v.group.split(g);
            let (a2, _) = v.group.split(h);
            let min = |a: &Elem| {
                a.as_map()
                    .and_then(|m| m.first())
                    .and_then(|(x, _)| x.as_int())
            };
            let shift = min(a1)? - min(a2)?;
            let gamma = shift - k1.as_int()?;
            Some(vec![v.group.embed_acting(Elem::Int(gamma))])
        }
        Recipe::FreeFactor | Recipe::FreeFactorMalnormal => {
            let fp = free_view(t)?;
            // g = u·aᵖ, h = a^q·v with u, v carrying second-factor letters at
            // the boundary; g·aⁿ·h is reduced outside ⟨a⟩ unless p + n + q = 0.
            let p = match fp.letters(g).last() {
                Some((1, x)) => x.as_int()?,
                _ => 0,
            };
            let q = match fp.letters(h).first() {
                Some((1, x)) => x.as_int()?,
                _ => 0,
            };
            Some(vec![fp.letter(1, Elem::Int(-p - q))])
        }
        _ => None,
    }
}

/// Closed-form description of a stabilizer `{h ∈ H : α_h(a) = a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilizerForm {
    Trivial,
    /// `{h^n : n ∈ Z}` for the given generator of infinite order.
    Periodic(Elem),
}

pub fn stabilizer_form(t: &Triple, a: &Elem) -> Option<StabilizerForm> {
    let Shape::Semidirect(v) = &t.shape else {
        return None;
    };
    if v.is_base_identity(a) {
        return None;
    }
    match t.recipe {
        Recipe::TranslationWreath if translation_view(t).is_some() => Some(StabilizerForm::Trivial),
        Recipe::FiniteOrderMatrix => {
            let m = matrix_action(t)?;
            let order = i64::from(m.order(64)?);
            (1..=order)
                .find(|&p| v.group.alpha(&Elem::Int(p), a) == *a)
                .map(|p| StabilizerForm::Periodic(Elem::Int(p)))
        }
        _ => None,
    }
}
