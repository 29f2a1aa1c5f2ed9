//! Registry of built-in triples.
//!
//! Infiniteness of `H` and `K` is attested per instance: in every built-in,
//! `H` contains an element of infinite order (`Z` or `Z×Z`), which
//! [`Triple::attest_infinite`] confirms on balls.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::certs::rules::Recipe;
use crate::constructions::{
    free_product, free_product_triple, product_triple, semidirect, semidirect_triple, whole,
    wreath, Cyclic, Integers, Lattice, MatrixAction, Shape, TrivialAction,
};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::group::{GroupRef, Subgroup, Triple};

/// A reproducible recipe for a built-in triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub id: String,
    pub recipe: Recipe,
    pub description: String,
    /// Closed-form tags declared for the instance; must name known recipes.
    pub tags: Vec<String>,
}

impl InstanceSpec {
    pub fn new(id: &str, recipe: Recipe, description: &str, tags: &[&str]) -> Result<InstanceSpec> {
        if let Some(bad) = tags.iter().find(|t| Recipe::from_key(t).is_none()) {
            return Err(Error::input(format!("unknown closed-form tag `{bad}`")));
        }
        Ok(InstanceSpec {
            id: id.to_string(),
            recipe,
            description: description.to_string(),
            tags: tags.iter().map(|t| t.to_string()).collect(),
        })
    }

    pub fn build(&self) -> Result<Triple> {
        build(&self.id)
    }
}

pub const INSTANCE_IDS: [&str; 7] = [
    "wreath-z2-z",
    "rotation4",
    "free-zz",
    "f2-cyclic",
    "prod-wreath2",
    "z2-line",
    "trivial-action",
];

pub fn specs() -> Vec<InstanceSpec> {
    let spec = |id, recipe: Recipe, desc| {
        InstanceSpec::new(id, recipe, desc, &[recipe.key()]).expect("built-in tags are known")
    };
    vec![
        spec(
            "wreath-z2-z",
            Recipe::TranslationWreath,
            "Z/2 ≀_Z Z (lamplighter), H = K = Z",
        ),
        spec(
            "rotation4",
            Recipe::FiniteOrderMatrix,
            "Z² ⋊ Z through M = [[0,-1],[1,0]], H = K = Z",
        ),
        spec(
            "free-zz",
            Recipe::FreeFactor,
            "Z ∗ Z, H = K = first factor ⟨a⟩",
        ),
        spec(
            "f2-cyclic",
            Recipe::FreeFactorMalnormal,
            "Z ∗ Z, H = K = ⟨a⟩, decided through malnormality",
        ),
        spec(
            "prod-wreath2",
            Recipe::Product,
            "direct product of two wreath-z2-z triples",
        ),
        spec("z2-line", Recipe::AbelianNormal, "Z², H = K = Z×{0}"),
        spec(
            "trivial-action",
            Recipe::TrivialAction,
            "Z² ⋊ Z with the trivial action, H = K = Z",
        ),
    ]
}

pub fn instance(id: &str) -> Result<Triple> {
    build(id)
}

fn acting_z(group: &GroupRef) -> Subgroup {
    whole(group.clone())
}

fn build(id: &str) -> Result<Triple> {
    match id {
        "wreath-z2-z" => {
            let g = wreath(Arc::new(Cyclic::new(2)?), Arc::new(Integers))?;
            let z = acting_z(g.acting());
            semidirect_triple(id, g, z.clone(), z, Recipe::TranslationWreath)
        }
        "rotation4" => rotation(id, vec![vec![0, -1], vec![1, 0]], Recipe::FiniteOrderMatrix),
        "trivial-action" => {
            let g = semidirect(
                Arc::new(Lattice::new(2)?),
                Arc::new(Integers),
                Arc::new(TrivialAction),
            )?;
            let z = acting_z(g.acting());
            semidirect_triple(id, g, z.clone(), z, Recipe::TrivialAction)
        }
        "free-zz" => free_product_triple(
            id,
            free_product(Arc::new(Integers), Arc::new(Integers)),
            Recipe::FreeFactor,
        ),
        "f2-cyclic" => free_product_triple(
            id,
            free_product(Arc::new(Integers), Arc::new(Integers)),
            Recipe::FreeFactorMalnormal,
        ),
        "prod-wreath2" => product_triple(
            id,
            build("wreath-z2-z")?,
            build("wreath-z2-z")?,
            Recipe::Product,
        ),
        "z2-line" => {
            let g: GroupRef = Arc::new(Lattice::new(2)?);
            let line = Subgroup::new(g.clone(), "Z×{0}", vec![Elem::Tuple(vec![1, 0])], |x| {
                x.as_tuple().is_some_and(|v| v[1] == 0)
            });
            Triple::new(
                id,
                g,
                line.clone(),
                line,
                Shape::Plain,
                Recipe::AbelianNormal,
            )
        }
        _ => Err(Error::UnknownInstance(id.to_string())),
    }
}

/// `Z^d ⋊ Z` through the given matrix with `H = K = Z`.
pub fn rotation(id: &str, matrix: Vec<Vec<i64>>, recipe: Recipe) -> Result<Triple> {
    let d = matrix.len();
    let g = semidirect(
        Arc::new(Lattice::new(d)?),
        Arc::new(Integers),
        Arc::new(MatrixAction::new(matrix)?),
    )?;
    let z = acting_z(g.acting());
    semidirect_triple(id, g, z.clone(), z, recipe)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_registered_instance_builds_with_infinite_h() {
        for id in INSTANCE_IDS {
            let t = instance(id).unwrap();
            assert_eq!(t.id, id);
            assert!(t.attest_infinite(25).unwrap(), "{id}");
        }
        assert_eq!(specs().len(), INSTANCE_IDS.len());
    }

    #[test]
    fn unknown_ids_and_tags_are_rejected() {
        assert!(matches!(instance("nope"), Err(Error::UnknownInstance(_))));
        assert!(InstanceSpec::new("x", Recipe::Generic, "", &["not-a-rule"]).is_err());
    }

    #[test]
    fn membership_examples() {
        let t = instance("free-zz").unwrap();
        assert!(!t.h.contains(&t.g.parse("b").unwrap()));
        assert!(t.h.contains(&t.g.parse("a^-4").unwrap()));
        let t = instance("rotation4").unwrap();
        assert!(!t.h.contains(&t.g.parse("((1,0),2)").unwrap()));
        assert!(t.h.contains(&t.g.parse("((0,0),2)").unwrap()));
    }

    #[test]
    fn recipes_rebuild_identically() {
        for spec in specs() {
            let (a, b) = (spec.build().unwrap(), spec.build().unwrap());
            assert_eq!(a.g.name(), b.g.name());
            assert_eq!(a.g.ball(3, 100_000).unwrap(), b.g.ball(3, 100_000).unwrap());
            assert_eq!(a.recipe, spec.recipe);
        }
    }
}
