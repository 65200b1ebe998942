//! Group gradings of Schurian categories.
//!
//! A basis morphism spans its hom space, so a grading is just a degree per
//! basis morphism subject to the multiplicativity law on nonzero composites.

mod group;
mod smash;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use group::{FgAbelianGroup, FiniteGroup, GradingGroup, GroupElement};
pub use smash::{finite_view, smash_iso_witness, smash_product, IsoWitness, SmashProduct};

use crate::category::{Arrow, MorphismId, ObjectId, Quiver, SchurianCategory, Sign, Step, Walk};
use crate::cw::{build_cw, CwComplex};
use crate::error::{Error, Result};
use crate::exactalg::{solve_integer, IntMatrix};
use crate::presentation::{pi1_presentation, spanning_tree, Letter, Pi1Presentation, SpanningTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    group: GradingGroup,
    degrees: Vec<GroupElement>,
}

impl Grading {
    /// `degrees[e]` is the degree of basis morphism `e`.
    pub fn new(cat: &SchurianCategory, group: GradingGroup, degrees: Vec<GroupElement>) -> Result<Self> {
        if degrees.len() != cat.morphisms().len() {
            return Err(Error::InvalidGrading(format!(
                "{} degrees for {} basis morphisms",
                degrees.len(),
                cat.morphisms().len()
            )));
        }
        let degrees = degrees
            .into_iter()
            .map(|d| group.check(d))
            .collect::<Result<_>>()?;
        Ok(Grading { group, degrees })
    }

    /// Degrees by morphism name; every morphism must be listed exactly once.
    pub fn from_names(
        cat: &SchurianCategory,
        group: GradingGroup,
        named: &HashMap<String, GroupElement>,
    ) -> Result<Self> {
        for name in named.keys() {
            cat.morphism_id(name)?;
        }
        let degrees = cat
            .morphisms()
            .iter()
            .map(|m| {
                named.get(&m.name).cloned().ok_or_else(|| {
                    Error::InvalidGrading(format!("no degree given for `{}`", m.name))
                })
            })
            .collect::<Result<_>>()?;
        Grading::new(cat, group, degrees)
    }

    /// Everything in degree 1 of the trivial group.
    pub fn trivial(cat: &SchurianCategory) -> Self {
        Grading {
            group: GradingGroup::Finite(FiniteGroup::trivial()),
            degrees: vec![GroupElement::Finite(0); cat.morphisms().len()],
        }
    }

    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn degrees(&self) -> &[GroupElement] {
        &self.degrees
    }

    pub fn degree(&self, e: MorphismId) -> &GroupElement {
        &self.degrees[e]
    }

    pub fn step_degree(&self, step: Step) -> GroupElement {
        match step.sign {
            Sign::Forward => self.degrees[step.morphism].clone(),
            Sign::Backward => self.group.inv(&self.degrees[step.morphism]),
        }
    }
}

/// A nonzero composite whose degree is wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingViolation {
    pub g: String,
    pub f: String,
    /// Degree of the composite basis element, `1` for identities.
    pub expected: String,
    /// `deg(g) * deg(f)`.
    pub found: String,
}

impl fmt::Display for GradingViolation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            fm,
            "deg({}) * deg({}) = {} but the composite has degree {}",
            self.g, self.f, self.found, self.expected
        )
    }
}

pub fn check_grading(cat: &SchurianCategory, x: &Grading) -> Result<Vec<GradingViolation>> {
    let group = x.group();
    let mut out = Vec::new();
    for (g, f, _, arrow) in cat.nonzero_composites() {
        let found = group.mul(x.degree(g), x.degree(f));
        let expected = match arrow {
            Arrow::Basis(h) => x.degree(h).clone(),
            Arrow::Identity(_) => group.identity(),
        };
        if !group.equal(&found, &expected)? {
            out.push(GradingViolation {
                g: cat.morphism(g).name.clone(),
                f: cat.morphism(f).name.clone(),
                expected: group.display(&expected),
                found: group.display(&found),
            });
        }
    }
    Ok(out)
}

/// Product of step degrees with the first step rightmost.
pub fn walk_degree(x: &Grading, w: &Walk) -> GroupElement {
    w.steps().iter().fold(x.group().identity(), |acc, &s| {
        x.group().mul(&x.step_degree(s), &acc)
    })
}

fn tree_for(cat: &SchurianCategory, c0: ObjectId) -> Result<(CwComplex, SpanningTree)> {
    if !cat.is_connected() {
        return Err(Error::Disconnected);
    }
    let cw = build_cw(cat)?;
    let tree = spanning_tree(&cw, c0)?;
    Ok((cw, tree))
}

/// Degrees of the tree loops `path(t(e))^-1 . e . path(s(e))`, one per edge.
/// Every closed walk at `c0` has a degree in the subgroup they generate.
pub fn loop_degrees(cat: &SchurianCategory, x: &Grading, c0: ObjectId) -> Result<Vec<GroupElement>> {
    let (cw, tree) = tree_for(cat, c0)?;
    Ok((0..cw.edges().len())
        .map(|e| walk_degree(x, &tree.edge_loop(&cw, e)))
        .collect())
}

/// Degrees of closed walks at `c0`, as a sorted element list of a finite group.
pub fn closed_walk_subgroup(cat: &SchurianCategory, x: &Grading, c0: ObjectId) -> Result<Vec<usize>> {
    let GradingGroup::Finite(g) = x.group() else {
        return Err(Error::UnsupportedGroup(
            "closed-walk subgroup enumeration needs a finite group".into(),
        ));
    };
    let gens: Vec<usize> = loop_degrees(cat, x, c0)?
        .into_iter()
        .map(|d| match d {
            GroupElement::Finite(a) => a,
            _ => unreachable!(),
        })
        .collect();
    Ok(g.generated_subgroup(&gens))
}

pub fn is_connected_grading(cat: &SchurianCategory, x: &Grading, c0: ObjectId) -> Result<bool> {
    match x.group() {
        GradingGroup::Finite(g) => Ok(closed_walk_subgroup(cat, x, c0)?.len() == g.order()),
        GradingGroup::Abelian(g) => {
            let gens: Vec<Vec<i64>> = loop_degrees(cat, x, c0)?
                .into_iter()
                .map(|d| match d {
                    GroupElement::Abelian(v) => v,
                    _ => unreachable!(),
                })
                .collect();
            Ok(g.generates(&gens))
        }
        GradingGroup::Presented(_) => Err(Error::UnsupportedGroup(
            "connectedness is not decidable for presented groups".into(),
        )),
    }
}

/// One walk from the basepoint to every object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectorSet {
    pub base: ObjectId,
    pub walks: Vec<Walk>,
}

impl ConnectorSet {
    pub fn walk(&self, x: ObjectId) -> &Walk {
        &self.walks[x]
    }

    pub fn from_tree(tree: &SpanningTree, objects: usize) -> Self {
        ConnectorSet {
            base: tree.base,
            walks: (0..objects).map(|x| tree.path_to(x).clone()).collect(),
        }
    }

    /// `u_y^-1 . e . u_x`, closed at the base.
    pub fn conjugated_edge(&self, q: &impl Quiver, e: MorphismId) -> Walk {
        let (s, t) = q.endpoints(e);
        let mut w = self.walks[s].clone();
        w.push(q, Step::forward(e)).expect("connector ends at the edge source");
        w.then(&self.walks[t].inverse()).expect("connectors start at the base")
    }
}

/// Connector walks of degree 1.
pub fn connector_walks(cat: &SchurianCategory, x: &Grading, c0: ObjectId) -> Result<ConnectorSet> {
    match x.group() {
        GradingGroup::Finite(g) => finite_connectors(cat, x, g, c0),
        GradingGroup::Abelian(g) => abelian_connectors(cat, x, g, c0),
        GradingGroup::Presented(_) => Err(Error::UnsupportedGroup(
            "connector walks need a finite or abelian group".into(),
        )),
    }
}

fn element_index(d: &GroupElement) -> usize {
    match d {
        GroupElement::Finite(a) => *a,
        _ => unreachable!("finite group element expected"),
    }
}

fn finite_connectors(
    cat: &SchurianCategory,
    x: &Grading,
    g: &FiniteGroup,
    c0: ObjectId,
) -> Result<ConnectorSet> {
    let n = cat.object_count();
    if c0 >= n {
        return Err(Error::UnknownObject(format!("object index {c0}")));
    }
    let order = g.order();
    let mut incident: Vec<Vec<Step>> = vec![Vec::new(); n];
    for (id, m) in cat.morphisms().iter().enumerate() {
        incident[m.source].push(Step::forward(id));
        incident[m.target].push(Step::backward(id));
    }
    for list in incident.iter_mut() {
        list.sort_by_key(|s| {
            let m = cat.morphism(s.morphism);
            (m.source, m.target, s.morphism, s.sign)
        });
    }
    // BFS over (object, degree of the walk so far)
    let state = |v: ObjectId, d: usize| v * order + d;
    let mut parent: Vec<Option<(usize, Step)>> = vec![None; n * order];
    let mut seen = vec![false; n * order];
    let start = state(c0, g.identity());
    seen[start] = true;
    let mut queue = VecDeque::from([(c0, g.identity())]);
    while let Some((v, d)) = queue.pop_front() {
        for &step in &incident[v] {
            let w = step.target(cat);
            let nd = g.mul(element_index(&x.step_degree(step)), d);
            let s = state(w, nd);
            if !seen[s] {
                seen[s] = true;
                parent[s] = Some((state(v, d), step));
                queue.push_back((w, nd));
            }
        }
    }
    let mut walks = Vec::with_capacity(n);
    for obj in 0..n {
        let mut s = state(obj, g.identity());
        if !seen[s] {
            return Err(Error::NoConnector(cat.objects()[obj].clone()));
        }
        let mut steps = Vec::new();
        while let Some((p, step)) = parent[s] {
            steps.push(step);
            s = p;
        }
        steps.reverse();
        walks.push(Walk::new(cat, c0, steps)?);
    }
    Ok(ConnectorSet { base: c0, walks })
}

fn abelian_connectors(
    cat: &SchurianCategory,
    x: &Grading,
    g: &FgAbelianGroup,
    c0: ObjectId,
) -> Result<ConnectorSet> {
    let (cw, tree) = tree_for(cat, c0)?;
    let loops: Vec<Walk> = (0..cw.edges().len()).map(|e| tree.edge_loop(&cw, e)).collect();
    let vectors: Vec<Vec<i64>> = loops
        .iter()
        .map(|l| match walk_degree(x, l) {
            GroupElement::Abelian(v) => v,
            _ => unreachable!(),
        })
        .collect();
    let width = g.width();
    let mut m = IntMatrix::zeros(width, loops.len() + g.torsion().len());
    for (j, v) in vectors.iter().enumerate() {
        for (i, &c) in v.iter().enumerate() {
            m.set(i, j, BigInt::from(c));
        }
    }
    for (k, &t) in g.torsion().iter().enumerate() {
        m.set(g.rank() + k, loops.len() + k, BigInt::from(t));
    }

    let mut walks = Vec::with_capacity(cat.object_count());
    for obj in 0..cat.object_count() {
        let path = tree.path_to(obj);
        let GroupElement::Abelian(d) = walk_degree(x, path) else {
            unreachable!()
        };
        if d.iter().all(|&c| c == 0) {
            walks.push(path.clone());
            continue;
        }
        let rhs: Vec<BigInt> = d.iter().map(|&c| BigInt::from(-c)).collect();
        let coeffs = solve_integer(&m, &rhs)
            .ok_or_else(|| Error::NoConnector(cat.objects()[obj].clone()))?;
        let mut w = Walk::empty(c0);
        for (l, n) in loops.iter().zip(&coeffs) {
            let reps = n
                .magnitude()
                .to_usize()
                .filter(|&r| r <= 1 << 16)
                .ok_or_else(|| Error::NoConnector(format!("{}: loop multiplicity too large", cat.objects()[obj])))?;
            let piece = if n.sign() == num_bigint::Sign::Minus { l.inverse() } else { l.clone() };
            for _ in 0..reps {
                w = w.then(&piece)?;
            }
        }
        w = w.then(path)?;
        debug_assert!(x.group().is_identity(&walk_degree(x, &w)).unwrap_or(false));
        walks.push(w);
    }
    Ok(ConnectorSet { base: c0, walks })
}

/// The grading by `π1(CW, c0)` built from tree connectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalGrading {
    pub pi1: Pi1Presentation,
    pub connectors: ConnectorSet,
    pub grading: Grading,
}

/// Non-tree edges get their generator as degree, tree edges the empty word.
pub fn universal_grading(cw: &CwComplex, c0: ObjectId) -> Result<UniversalGrading> {
    if !cw.is_connected() {
        return Err(Error::Disconnected);
    }
    let pi1 = pi1_presentation(cw, c0)?;
    let degrees = pi1
        .edge_generator
        .iter()
        .map(|g| GroupElement::Word(g.map(|g| vec![Letter::new(g, false)]).unwrap_or_default()))
        .collect();
    let connectors = ConnectorSet::from_tree(&pi1.tree, cw.vertices().len());
    Ok(UniversalGrading {
        grading: Grading {
            group: GradingGroup::Presented(pi1.presentation.clone()),
            degrees,
        },
        connectors,
        pi1,
    })
}

/// Edge-by-edge comparison `φ(deg_Z e)` against `deg_X(u_y^-1 e u_x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCheck {
    pub edge: MorphismId,
    pub expected: GroupElement,
    pub found: GroupElement,
}

impl EdgeCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.found
    }
}

/// The group map from the universal grading onto `X` and its verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMorphism {
    pub universal: UniversalGrading,
    /// Image of each generator of the fundamental group.
    pub images: Vec<GroupElement>,
    pub relators_trivial: Vec<bool>,
    pub surjective: bool,
    /// `None` when `X` admits no connector walks.
    pub edge_checks: Option<Vec<EdgeCheck>>,
}

impl QuotientMorphism {
    pub fn holds(&self) -> bool {
        self.surjective
            && self.relators_trivial.iter().all(|&t| t)
            && self
                .edge_checks
                .as_ref()
                .is_some_and(|c| c.iter().all(EdgeCheck::holds))
    }
}

/// Image of a traversal-order word under generator images.
pub fn evaluate_word(group: &GradingGroup, images: &[GroupElement], word: &[Letter]) -> GroupElement {
    word.iter().fold(group.identity(), |acc, l| {
        let img = if l.inverse {
            group.inv(&images[l.generator])
        } else {
            images[l.generator].clone()
        };
        group.mul(&img, &acc)
    })
}

pub fn quotient_morphism(cat: &SchurianCategory, x: &Grading, c0: ObjectId) -> Result<QuotientMorphism> {
    let group = x.group();
    if matches!(group, GradingGroup::Presented(_)) {
        return Err(Error::UnsupportedGroup(
            "quotient maps need a finite or abelian target".into(),
        ));
    }
    let (cw, _) = tree_for(cat, c0)?;
    let universal = universal_grading(&cw, c0)?;
    let pi1 = &universal.pi1;
    let loops = loop_degrees(cat, x, c0)?;
    let images: Vec<GroupElement> = pi1
        .edge_generator
        .iter()
        .zip(&loops)
        .filter_map(|(g, d)| g.map(|_| d.clone()))
        .collect();
    let relators_trivial = pi1
        .presentation
        .relators()
        .iter()
        .map(|r| evaluate_word(group, &images, r) == group.identity())
        .collect();
    let surjective = match group {
        GradingGroup::Finite(g) => g.generated_subgroup(&images.iter().map(element_index).collect::<Vec<_>>()).len() == g.order(),
        GradingGroup::Abelian(g) => g.generates(
            &images
                .iter()
                .map(|d| match d {
                    GroupElement::Abelian(v) => v.clone(),
                    _ => unreachable!(),
                })
                .collect::<Vec<_>>(),
        ),
        GradingGroup::Presented(_) => unreachable!(),
    };
    let edge_checks = match connector_walks(cat, x, c0) {
        Ok(u) => Some(
            (0..cat.morphisms().len())
                .map(|e| {
                    let word = pi1.word_of_walk(&u.conjugated_edge(&cw, e))?;
                    Ok(EdgeCheck {
                        edge: e,
                        expected: x.degree(e).clone(),
                        found: evaluate_word(group, &images, &word),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        Err(Error::NoConnector(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(QuotientMorphism {
        universal,
        images,
        relators_trivial,
        surjective,
        edge_checks,
    })
}

/// `deg'(f) = a_{t(f)}^-1 deg(f) a_{s(f)}`.
pub fn conjugate_grading(cat: &SchurianCategory, x: &Grading, a: &[GroupElement]) -> Result<Grading> {
    if a.len() != cat.object_count() {
        return Err(Error::InvalidGrading(format!(
            "{} conjugating elements for {} objects",
            a.len(),
            cat.object_count()
        )));
    }
    let group = x.group();
    let a = a
        .iter()
        .map(|e| group.check(e.clone()))
        .collect::<Result<Vec<_>>>()?;
    let degrees = cat
        .morphisms()
        .iter()
        .zip(x.degrees())
        .map(|(m, d)| group.mul(&group.inv(&a[m.target]), &group.mul(d, &a[m.source])))
        .collect();
    Ok(Grading {
        group: group.clone(),
        degrees,
    })
}
