use super::{Grading, GradingGroup, GroupElement};
use crate::category::{CategoryBuilder, MorphismId, ObjectId, SchurianCategory};
use crate::error::{Error, Result};
use crate::grading::FiniteGroup;

/// The grading group as a table together with each degree's index in it.
/// Torsion abelian groups are tabulated; infinite groups are rejected.
pub fn finite_view(x: &Grading) -> Result<(FiniteGroup, Vec<usize>)> {
    match x.group() {
        GradingGroup::Finite(g) => Ok((
            g.clone(),
            x.degrees()
                .iter()
                .map(|d| match d {
                    GroupElement::Finite(a) => *a,
                    _ => unreachable!(),
                })
                .collect(),
        )),
        GradingGroup::Abelian(a) => {
            let (g, elements) = a.to_finite().ok_or_else(|| {
                Error::UnsupportedGroup("the grading group is infinite".into())
            })??;
            let degrees = x
                .degrees()
                .iter()
                .map(|d| match d {
                    GroupElement::Abelian(v) => elements.iter().position(|e| e == v).expect("normalized"),
                    _ => unreachable!(),
                })
                .collect();
            Ok((g, degrees))
        }
        GradingGroup::Presented(_) => Err(Error::UnsupportedGroup(
            "smash products need a finite grading group".into(),
        )),
    }
}

/// `C # X` with its projection onto `C`.
#[derive(Clone, Debug)]
pub struct SmashProduct {
    pub category: SchurianCategory,
    pub group: FiniteGroup,
    /// `(x, s)` for each object.
    pub object_projection: Vec<(ObjectId, usize)>,
    /// `(e, s)`: the lift of `e` starting on sheet `s`.
    pub morphism_projection: Vec<(MorphismId, usize)>,
}

impl SmashProduct {
    pub fn object(&self, x: ObjectId, s: usize) -> ObjectId {
        x * self.group.order() + s
    }
}

/// Objects `(x, s)`; the lift of `e: x -> y` at `(x, s)` ends at `(y, s deg(e)^-1)`.
pub fn smash_product(cat: &SchurianCategory, x: &Grading) -> Result<SmashProduct> {
    let (group, degrees) = finite_view(x)?;
    let n = group.order();
    let mut b = CategoryBuilder::new(cat.field());
    let mut object_projection = Vec::with_capacity(cat.object_count() * n);
    for (xi, name) in cat.objects().iter().enumerate() {
        for s in 0..n {
            b.object(&format!("{name}@{}", group.name(s)))?;
            object_projection.push((xi, s));
        }
    }
    let obj = |xi: ObjectId, s: usize| format!("{}@{}", cat.objects()[xi], group.name(s));
    let mut morphism_projection = Vec::with_capacity(cat.morphisms().len() * n);
    for (e, m) in cat.morphisms().iter().enumerate() {
        let back = group.inv(degrees[e]);
        for s in 0..n {
            b.morphism(
                &format!("{}@{}", m.name, group.name(s)),
                &obj(m.source, s),
                &obj(m.target, group.mul(s, back)),
            )?;
            morphism_projection.push((e, s));
        }
    }
    for (&(g, f), c) in cat.constants() {
        for s in 0..n {
            let t = group.mul(s, group.inv(degrees[f]));
            b.composite_by_id(g * n + t, f * n + s, c.clone())?;
        }
    }
    Ok(SmashProduct {
        category: b.build(),
        group,
        object_projection,
        morphism_projection,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    /// Object of `C # X` that each object of `C # aX` is sent to.
    pub object_map: Vec<ObjectId>,
    pub failures: Vec<String>,
}

impl IsoWitness {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `(x, s) -> (x, s a_x^-1)` is an isomorphism `C # aX -> C # X`
/// over `C`.
pub fn smash_iso_witness(cat: &SchurianCategory, x: &Grading, a: &[GroupElement]) -> Result<IsoWitness> {
    let conj = super::conjugate_grading(cat, x, a)?;
    let from = smash_product(cat, &conj)?;
    let to = smash_product(cat, x)?;
    let g = &to.group;
    let a: Vec<usize> = a
        .iter()
        .map(|e| match x.group().check(e.clone())? {
            GroupElement::Finite(i) => Ok(i),
            GroupElement::Abelian(v) => match x.group() {
                GradingGroup::Abelian(ab) => Ok(ab
                    .to_finite()
                    .expect("finite")?
                    .1
                    .iter()
                    .position(|w| *w == v)
                    .expect("normalized")),
                _ => unreachable!(),
            },
            GroupElement::Word(_) => unreachable!(),
        })
        .collect::<Result<_>>()?;

    let object_map: Vec<ObjectId> = from
        .object_projection
        .iter()
        .map(|&(xi, s)| to.object(xi, g.mul(s, g.inv(a[xi]))))
        .collect();
    let mut failures = Vec::new();
    let mut hit = vec![false; to.category.object_count()];
    for (p, &q) in object_map.iter().enumerate() {
        if std::mem::replace(&mut hit[q], true) {
            failures.push(format!("object {} is hit twice", to.category.objects()[q]));
        }
        if to.object_projection[q].0 != from.object_projection[p].0 {
            failures.push(format!("object {} changes projection", from.category.objects()[p]));
        }
    }
    if from.category.morphisms().len() != to.category.morphisms().len() {
        failures.push("different numbers of basis morphisms".into());
    }
    let mut morphism_map = Vec::with_capacity(from.category.morphisms().len());
    for (id, m) in from.category.morphisms().iter().enumerate() {
        match to.category.hom(object_map[m.source], object_map[m.target]) {
            Some(image) => {
                if to.morphism_projection[image].0 != from.morphism_projection[id].0 {
                    failures.push(format!("{} changes projection", m.name));
                }
                morphism_map.push(image);
            }
            None => {
                failures.push(format!("{} has no image", m.name));
                morphism_map.push(usize::MAX);
            }
        }
    }
    if failures.is_empty() {
        for (gm, fm) in from.category.composable_pairs() {
            let lhs = from.category.constant(gm, fm);
            let rhs = to.category.constant(morphism_map[gm], morphism_map[fm]);
            if lhs != rhs {
                failures.push(format!(
                    "structure constant of ({}, {}) is {lhs} but its image has {rhs}",
                    from.category.morphism(gm).name,
                    from.category.morphism(fm).name
                ));
            }
        }
    }
    Ok(IsoWitness {
        object_map,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{broken_ladder, complete_groupoid};
    use crate::exactalg::Field;
    use crate::grading::{check_grading, is_connected_grading, FgAbelianGroup};

    fn c2_groupoid() -> (SchurianCategory, Grading) {
        let cat = complete_groupoid(2, Field::Rational).unwrap();
        let c2 = FiniteGroup::cyclic(2).unwrap();
        let x = Grading::new(&cat, GradingGroup::Finite(c2), vec![GroupElement::Finite(1); 2]).unwrap();
        (cat, x)
    }

    fn mod2_ladder() -> (SchurianCategory, Grading) {
        let cat = broken_ladder(1, 0, Field::Rational).unwrap();
        let alpha1 = cat.morphism_id("alpha1").unwrap();
        let group = GradingGroup::Abelian(FgAbelianGroup::new(0, vec![2]).unwrap());
        let degrees = (0..cat.morphisms().len())
            .map(|e| GroupElement::Abelian(vec![i64::from(e == alpha1)]))
            .collect();
        let x = Grading::new(&cat, group, degrees).unwrap();
        (cat, x)
    }

    #[test]
    fn trivial_grading_gives_a_copy() {
        let cat = broken_ladder(1, 0, Field::Rational).unwrap();
        let sp = smash_product(&cat, &Grading::trivial(&cat)).unwrap();
        assert_eq!(sp.category.object_count(), cat.object_count());
        assert_eq!(sp.category.morphisms().len(), cat.morphisms().len());
        assert_eq!(sp.category.constants().len(), cat.constants().len());
        assert!(sp.category.validate().is_empty());
    }

    #[test]
    fn groupoid_splits_in_two() {
        let (cat, x) = c2_groupoid();
        let sp = smash_product(&cat, &x).unwrap();
        let names = sp.category.objects();
        assert_eq!(names, ["1@0", "1@1", "2@0", "2@1"]);
        let comp = sp.category.components();
        assert_eq!(sp.category.component_count(), 2);
        assert_eq!(comp[0], comp[3]);
        assert_eq!(comp[1], comp[2]);
        assert!(sp.category.validate().is_empty());
    }

    #[test]
    fn ladder_mod_two_is_connected() {
        let (cat, x) = mod2_ladder();
        assert!(check_grading(&cat, &x).unwrap().is_empty());
        let sp = smash_product(&cat, &x).unwrap();
        assert_eq!(sp.category.object_count(), 8);
        assert!(sp.category.is_connected());
        assert!(sp.category.validate().is_empty());
        assert!(is_connected_grading(&cat, &x, 0).unwrap());
    }

    #[test]
    fn covering_property() {
        let (cat, x) = mod2_ladder();
        let sp = smash_product(&cat, &x).unwrap();
        for (p, &(xi, _)) in sp.object_projection.iter().enumerate() {
            for &e in cat.outgoing(xi) {
                let lifts = sp
                    .category
                    .outgoing(p)
                    .iter()
                    .filter(|&&m| sp.morphism_projection[m].0 == e)
                    .count();
                assert_eq!(lifts, 1);
            }
        }
    }

    #[test]
    fn iso_witness_examples() {
        let (cat, x) = c2_groupoid();
        let w = smash_iso_witness(&cat, &x, &[GroupElement::Finite(0), GroupElement::Finite(0)]).unwrap();
        assert!(w.holds());
        assert_eq!(w.object_map, vec![0, 1, 2, 3]);
        let w = smash_iso_witness(&cat, &x, &[GroupElement::Finite(0), GroupElement::Finite(1)]).unwrap();
        assert!(w.holds());
        assert_eq!(w.object_map, vec![0, 1, 3, 2]);

        let (cat, x) = mod2_ladder();
        for mask in 0..(1u32 << cat.object_count()) {
            let a: Vec<GroupElement> = (0..cat.object_count())
                .map(|i| GroupElement::Abelian(vec![i64::from((mask >> i) & 1)]))
                .collect();
            assert!(smash_iso_witness(&cat, &x, &a).unwrap().holds());
        }
    }

    #[test]
    fn infinite_group_is_rejected() {
        let cat = broken_ladder(1, 0, Field::Rational).unwrap();
        let group = GradingGroup::Abelian(FgAbelianGroup::new(1, vec![]).unwrap());
        let x = Grading::new(&cat, group, vec![GroupElement::Abelian(vec![0]); 6]).unwrap();
        assert!(matches!(smash_product(&cat, &x), Err(Error::UnsupportedGroup(_))));
    }
}
