//! First Hochschild-Mitchell cohomology and the Hurewicz map.
//!
//! Hom spaces are at most one-dimensional, so a derivation is a scalar
//! `lambda(e)` per basis morphism with `d(e) = lambda(e) e`.

use crate::category::{Arrow, ObjectId, SchurianCategory};
use crate::cw::build_cw;
use crate::error::{Error, Result};
use crate::exactalg::{Field, FieldMatrix, Scalar};
use crate::presentation::{pi1_presentation, Character, Pi1Presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub lambda: Vec<Scalar>,
}

impl Derivation {
    pub fn zero(field: Field, edges: usize) -> Self {
        Derivation {
            lambda: vec![Scalar::zero(field); edges],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.iter().all(Scalar::is_zero)
    }

    /// Leibniz rule on every nonzero composite.
    pub fn satisfies_constraints(&self, cat: &SchurianCategory) -> bool {
        cat.nonzero_composites().all(|(g, f, _, arrow)| {
            let sum = &self.lambda[g] + &self.lambda[f];
            match arrow {
                Arrow::Basis(h) => sum == self.lambda[h],
                Arrow::Identity(_) => sum.is_zero(),
            }
        })
    }
}

/// One row per nonzero composite: `lambda_gf - lambda_g - lambda_f` for
/// triangles, `lambda_g + lambda_f` for bigons. Zero composites impose nothing.
pub fn derivation_constraints(cat: &SchurianCategory, field: Field) -> Result<FieldMatrix> {
    let n = cat.morphisms().len();
    let mut m = FieldMatrix::zeros(field, 0, n);
    let one = Scalar::one(field);
    for (g, f, _, arrow) in cat.nonzero_composites() {
        let mut row = vec![Scalar::zero(field); n];
        let sign = match arrow {
            Arrow::Basis(h) => {
                row[h] = one.clone();
                -&one
            }
            Arrow::Identity(_) => one.clone(),
        };
        row[g] = &row[g] + &sign;
        row[f] = &row[f] + &sign;
        m.push_row(row)?;
    }
    Ok(m)
}

pub fn derivation_space(cat: &SchurianCategory, field: Field) -> Result<Vec<Derivation>> {
    Ok(derivation_constraints(cat, field)?
        .nullspace_basis()
        .into_iter()
        .map(|lambda| Derivation { lambda })
        .collect())
}

/// `lambda(e) = a_t(e) - a_s(e)`.
pub fn inner_derivation(cat: &SchurianCategory, a: &[Scalar]) -> Result<Derivation> {
    if a.len() != cat.object_count() {
        return Err(Error::Parameter(format!(
            "{} values for {} objects",
            a.len(),
            cat.object_count()
        )));
    }
    Ok(Derivation {
        lambda: cat
            .morphisms()
            .iter()
            .map(|m| &a[m.target] - &a[m.source])
            .collect(),
    })
}

/// Componentwise commutator `d1 d2 - d2 d1`, which always vanishes here since
/// both act by scalars on each one-dimensional hom space.
pub fn lie_bracket(d1: &Derivation, d2: &Derivation) -> Result<Derivation> {
    if d1.lambda.len() != d2.lambda.len() {
        return Err(Error::Parameter("derivations of different categories".into()));
    }
    let lambda = d1
        .lambda
        .iter()
        .zip(&d2.lambda)
        .map(|(x, y)| {
            if x.field() != y.field() {
                return Err(Error::FieldMismatch {
                    expected: x.field().to_string(),
                    found: y.field().to_string(),
                });
            }
            Ok(&(x * y) - &(y * x))
        })
        .collect::<Result<_>>()?;
    Ok(Derivation { lambda })
}

/// `HH^1` as derivations modulo inner ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hh1Space {
    pub field: Field,
    pub derivations: Vec<Derivation>,
    /// A basis of the inner derivations, taken from object indicators.
    pub inner: Vec<Derivation>,
    /// Derivation-space basis vectors completing `inner` to a basis.
    pub representatives: Vec<Derivation>,
}

impl Hh1Space {
    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of `d` against the representatives.
    pub fn coordinates(&self, d: &Derivation) -> Result<Vec<Scalar>> {
        let cols: Vec<&Derivation> = self.inner.iter().chain(&self.representatives).collect();
        let n = d.lambda.len();
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c.lambda[i].clone()).collect())
            .collect();
        let m = FieldMatrix::from_rows(self.field, cols.len(), rows)?;
        let c = m
            .solve(&d.lambda)
            .ok_or_else(|| Error::Parameter("not a derivation of this category".into()))?;
        Ok(c[self.inner.len()..].to_vec())
    }
}

fn rank_of(field: Field, width: usize, vectors: &[&Derivation]) -> Result<usize> {
    let rows = vectors.iter().map(|d| d.lambda.clone()).collect();
    Ok(FieldMatrix::from_rows(field, width, rows)?.rank())
}

pub fn hh1(cat: &SchurianCategory, field: Field) -> Result<Hh1Space> {
    if !cat.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = cat.morphisms().len();
    let derivations = derivation_space(cat, field)?;

    // Greedy extension in a fixed order keeps the choice reproducible.
    let mut chosen: Vec<&Derivation> = Vec::new();
    let indicators: Vec<Derivation> = (0..cat.object_count())
        .map(|x| {
            let a: Vec<Scalar> = (0..cat.object_count())
                .map(|y| if x == y { Scalar::one(field) } else { Scalar::zero(field) })
                .collect();
            inner_derivation(cat, &a)
        })
        .collect::<Result<_>>()?;
    let mut inner = Vec::new();
    for d in &indicators {
        chosen.push(d);
        if rank_of(field, n, &chosen)? == chosen.len() {
            inner.push(d.clone());
        } else {
            chosen.pop();
        }
    }
    let mut representatives = Vec::new();
    for d in &derivations {
        chosen.push(d);
        if rank_of(field, n, &chosen)? == chosen.len() {
            representatives.push(d.clone());
        } else {
            chosen.pop();
        }
    }
    assert_eq!(
        representatives.len() + cat.object_count() - 1,
        derivations.len(),
        "HH1 dimension disagrees with nullity - (objects - 1)"
    );
    Ok(Hh1Space {
        field,
        derivations,
        inner,
        representatives,
    })
}

/// `lambda(e) = chi(word of the tree loop of e)`.
pub fn hurewicz(cat: &SchurianCategory, field: Field, pi1: &Pi1Presentation, chi: &Character) -> Result<Derivation> {
    let cw = build_cw(cat)?;
    if chi.values.len() != pi1.presentation.generators().len() {
        return Err(Error::Parameter("character has the wrong number of values".into()));
    }
    let lambda = (0..cat.morphisms().len())
        .map(|e| {
            let word = pi1.word_of_walk(&pi1.tree.edge_loop(&cw, e))?;
            Ok(chi.evaluate(field, &word))
        })
        .collect::<Result<_>>()?;
    Ok(Derivation { lambda })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurewiczReport {
    pub field: Field,
    pub dim_characters: usize,
    pub dim_hh1: usize,
    /// Row `i`: HH^1 coordinates of the image of the `i`-th basis character.
    pub image_matrix: Vec<Vec<Scalar>>,
    pub rank: usize,
}

impl HurewiczReport {
    pub fn is_isomorphism(&self) -> bool {
        self.dim_characters == self.dim_hh1 && self.rank == self.dim_characters
    }

    pub fn is_injective(&self) -> bool {
        self.rank == self.dim_characters
    }

    pub fn verdict(&self) -> &'static str {
        if self.is_isomorphism() {
            "isomorphism"
        } else if self.is_injective() {
            "injective only"
        } else {
            "not injective"
        }
    }
}

pub fn verify_hurewicz_iso(cat: &SchurianCategory, field: Field, c0: ObjectId) -> Result<HurewiczReport> {
    if !cat.is_connected() {
        return Err(Error::Disconnected);
    }
    let cw = build_cw(cat)?;
    let pi1 = pi1_presentation(&cw, c0)?;
    let characters = pi1.presentation.character_space(field)?;
    let space = hh1(cat, field)?;
    let mut image_matrix = Vec::with_capacity(characters.len());
    for chi in &characters {
        let d = hurewicz(cat, field, &pi1, chi)?;
        debug_assert!(d.satisfies_constraints(cat));
        image_matrix.push(space.coordinates(&d)?);
    }
    let rank = FieldMatrix::from_rows(field, space.dimension(), image_matrix.clone())?.rank();
    Ok(HurewiczReport {
        field,
        dim_characters: characters.len(),
        dim_hh1: space.dimension(),
        image_matrix,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{broken_ladder, complete_groupoid, CategoryBuilder};

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn derivation_space_dimensions() {
        let g2 = complete_groupoid(2, Field::Rational).unwrap();
        assert_eq!(derivation_space(&g2, Field::Rational).unwrap().len(), 1);
        let l = broken_ladder(1, 0, Field::Rational).unwrap();
        assert_eq!(derivation_space(&l, Field::Rational).unwrap().len(), 4);

        let mut b = CategoryBuilder::new(Field::Rational);
        for o in ["x", "y", "z"] {
            b.object(o).unwrap();
        }
        b.morphism("f", "x", "y").unwrap();
        b.morphism("g", "z", "y").unwrap();
        let v = b.build();
        assert_eq!(derivation_space(&v, Field::Rational).unwrap().len(), 2);
    }

    #[test]
    fn inner_derivations() {
        let g2 = complete_groupoid(2, Field::Rational).unwrap();
        let q = Field::Rational;
        let d = inner_derivation(&g2, &[Scalar::zero(q), Scalar::one(q)]).unwrap();
        let e21 = g2.morphism_id("e21").unwrap();
        let e12 = g2.morphism_id("e12").unwrap();
        assert_eq!(d.lambda[e21], Scalar::one(q));
        assert_eq!(d.lambda[e12], Scalar::from_i64(q, -1));
        assert!(d.satisfies_constraints(&g2));
        let c = inner_derivation(&g2, &[Scalar::from_i64(q, 5), Scalar::from_i64(q, 5)]).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn hh1_dimensions() {
        for n in 2..=5 {
            let g = complete_groupoid(n, Field::Rational).unwrap();
            for field in [Field::Rational, gf(2), gf(7)] {
                assert_eq!(hh1(&g, field).unwrap().dimension(), 0, "n={n} {field}");
            }
        }
        let l = broken_ladder(1, 0, Field::Rational).unwrap();
        assert_eq!(hh1(&l, Field::Rational).unwrap().dimension(), 1);
        assert_eq!(hh1(&l, gf(7)).unwrap().dimension(), 1);
        let two = l.disjoint_union(&complete_groupoid(2, Field::Rational).unwrap()).unwrap();
        assert!(matches!(hh1(&two, Field::Rational), Err(Error::Disconnected)));
    }

    #[test]
    fn bracket_vanishes() {
        let l = broken_ladder(1, 0, Field::Rational).unwrap();
        let basis = derivation_space(&l, Field::Rational).unwrap();
        for a in &basis {
            for b in &basis {
                assert!(lie_bracket(a, b).unwrap().is_zero());
            }
        }
        let short = Derivation::zero(Field::Rational, 2);
        assert!(lie_bracket(&basis[0], &short).is_err());
    }

    #[test]
    fn hurewicz_on_the_ladder() {
        let l = broken_ladder(1, 0, Field::Rational).unwrap();
        let q = Field::Rational;
        let cw = build_cw(&l).unwrap();
        let pi1 = pi1_presentation(&cw, 0).unwrap();
        let gens = pi1.presentation.generators();
        let alpha1 = gens.iter().position(|g| g == "alpha1").unwrap();
        let mut chi = Character::zero(q, gens.len());
        chi.values[alpha1] = Scalar::one(q);
        assert!(chi.kills_relators(q, &pi1.presentation));
        let d = hurewicz(&l, q, &pi1, &chi).unwrap();
        for (e, v) in d.lambda.iter().enumerate() {
            let expected = i64::from(l.morphism(e).name == "alpha1");
            assert_eq!(*v, Scalar::from_i64(q, expected));
        }
        assert!(d.satisfies_constraints(&l));
        // not inner: its class has a nonzero coordinate
        let space = hh1(&l, q).unwrap();
        assert!(!space.coordinates(&d).unwrap()[0].is_zero());

        let zero = hurewicz(&l, q, &pi1, &Character::zero(q, gens.len())).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn hurewicz_reports() {
        let g3 = complete_groupoid(3, Field::Rational).unwrap();
        let r = verify_hurewicz_iso(&g3, Field::Rational, 0).unwrap();
        assert_eq!((r.dim_characters, r.dim_hh1), (0, 0));
        assert_eq!(r.verdict(), "isomorphism");

        let l = broken_ladder(1, 0, Field::Rational).unwrap();
        let r = verify_hurewicz_iso(&l, Field::Rational, 0).unwrap();
        assert_eq!((r.dim_characters, r.dim_hh1, r.rank), (1, 1, 1));
        assert!(r.is_isomorphism());

        let l2 = broken_ladder(2, 0, gf(5)).unwrap();
        let r = verify_hurewicz_iso(&l2, gf(5), 0).unwrap();
        assert_eq!((r.dim_characters, r.dim_hh1), (1, 1));
        assert!(r.is_isomorphism());
        let cw = build_cw(&l2).unwrap();
        assert_eq!(cw.cohomology_dim_h1(gf(5)).unwrap(), 1);
    }
}
