//! Concrete groups and the constructors that combine them.

mod basic;
mod free;
mod product;
mod semidirect;

use std::sync::Arc;

pub use basic::{Cyclic, Integers, Lattice};
pub use free::FreeProduct;
pub use product::DirectProduct;
pub use semidirect::{
    action_orbit, Action, FinitelySupported, KSet, MatrixAction, RegularKSet, Semidirect,
    TranslationAction, TrivialAction,
};

use crate::certs::rules::Recipe;
use crate::elem::Elem;
use crate::error::Result;
use crate::group::{GroupRef, Subgroup, Triple};

/// How a triple was built; closed-form rules and semidirect criteria need
/// access to the concrete construction.
#[derive(Clone, Debug)]
pub enum Shape {
    Plain,
    Semidirect(SemidirectView),
    FreeProduct { group: Arc<FreeProduct>, factor: u8 },
    Product(Box<Triple>, Box<Triple>),
}

/// A triple inside `A ⋊ K` with `H ≤ K` both living in the acting group.
#[derive(Clone, Debug)]
pub struct SemidirectView {
    pub group: Arc<Semidirect>,
    pub h_acting: Subgroup,
    pub k_acting: Subgroup,
}

impl SemidirectView {
    /// `h` as an element of the acting group.
    pub fn acting_part<'a>(&self, h: &'a Elem) -> &'a Elem {
        self.group.split(h).1
    }

    pub fn base_part<'a>(&self, g: &'a Elem) -> &'a Elem {
        self.group.split(g).0
    }

    pub fn is_base_identity(&self, a: &Elem) -> bool {
        *a == self.group.base().identity()
    }
}

pub fn direct_product(g1: GroupRef, g2: GroupRef) -> Arc<DirectProduct> {
    Arc::new(DirectProduct::new(g1, g2))
}

pub fn semidirect(a: GroupRef, k: GroupRef, action: Arc<dyn Action>) -> Result<Arc<Semidirect>> {
    Semidirect::new(a, k, action).map(Arc::new)
}

/// `Z ≀_X K` for `X = K` with left translation.
pub fn wreath(z: GroupRef, k: GroupRef) -> Result<Arc<Semidirect>> {
    let base = Arc::new(FinitelySupported::new(
        z,
        Arc::new(RegularKSet::new(k.clone())),
    ));
    semidirect(base.clone(), k, Arc::new(TranslationAction::new(base)))
}

pub fn free_product(g1: GroupRef, g2: GroupRef) -> Arc<FreeProduct> {
    Arc::new(FreeProduct::new(g1, g2))
}

/// `{(e, k) : k ∈ sub}` inside `A ⋊ K`.
pub fn embedded_acting(group: &Arc<Semidirect>, sub: &Subgroup) -> Subgroup {
    let g = group.clone();
    let inner = sub.clone();
    let gens = sub
        .generators()
        .iter()
        .map(|k| group.embed_acting(k.clone()))
        .collect();
    Subgroup::new(
        group.clone(),
        format!("{{e}}×{}", sub.name()),
        gens,
        move |x| {
            let (a, k) = g.split(x);
            *a == g.base().identity() && inner.contains(k)
        },
    )
}

/// `{(a, e)}` inside `A ⋊ K`.
pub fn embedded_base(group: &Arc<Semidirect>) -> Subgroup {
    let g = group.clone();
    let gens = group
        .base()
        .generators()
        .into_iter()
        .map(|a| group.embed_base(a))
        .collect();
    Subgroup::new(
        group.clone(),
        format!("{}×{{e}}", group.base().name()),
        gens,
        move |x| *g.split(x).1 == g.acting().identity(),
    )
}

/// The embedded copy of factor `index` in a free product.
pub fn free_factor(group: &Arc<FreeProduct>, index: u8) -> Subgroup {
    let g = group.clone();
    let gens = group
        .factor(index)
        .generators()
        .into_iter()
        .map(|x| group.letter(index, x))
        .collect();
    Subgroup::new(group.clone(), format!("factor {index}"), gens, move |w| {
        g.in_factor(index, w)
    })
}

pub fn semidirect_triple(
    id: &str,
    group: Arc<Semidirect>,
    h_acting: Subgroup,
    k_acting: Subgroup,
    recipe: Recipe,
) -> Result<Triple> {
    let h = embedded_acting(&group, &h_acting);
    let k = embedded_acting(&group, &k_acting);
    let view = SemidirectView {
        group: group.clone(),
        h_acting,
        k_acting,
    };
    Triple::new(id, group, k, h, Shape::Semidirect(view), recipe)
}

pub fn free_product_triple(id: &str, group: Arc<FreeProduct>, recipe: Recipe) -> Result<Triple> {
    let h = free_factor(&group, 1);
    Triple::new(
        id,
        group.clone(),
        h.clone(),
        h,
        Shape::FreeProduct { group, factor: 1 },
        recipe,
    )
}

/// `H₁×H₂ ≤ K₁×K₂ ≤ G₁×G₂`.
pub fn product_triple(id: &str, left: Triple, right: Triple, recipe: Recipe) -> Result<Triple> {
    let g = direct_product(left.g.clone(), right.g.clone());
    let pair_sub = |a: &Subgroup, b: &Subgroup, name: &str| {
        let (a2, b2) = (a.clone(), b.clone());
        let gens = a
            .generators()
            .iter()
            .map(|x| g.embed_left(x.clone()))
            .chain(b.generators().iter().map(|y| g.embed_right(y.clone())))
            .collect();
        Subgroup::new(g.clone(), name.to_string(), gens, move |x| {
            let (l, r) = x.as_pair().expect("pair normal form");
            a2.contains(l) && b2.contains(r)
        })
    };
    let k = pair_sub(&left.k, &right.k, "K₁×K₂");
    let h = pair_sub(&left.h, &right.h, "H₁×H₂");
    Triple::new(
        id,
        g,
        k,
        h,
        Shape::Product(Box::new(left), Box::new(right)),
        recipe,
    )
}

pub fn whole(group: GroupRef) -> Subgroup {
    Subgroup::whole(group)
}
