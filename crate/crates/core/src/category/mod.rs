//! Finite Schurian categories: every hom space has dimension zero or one.
//!
//! A category is stored as its objects, one basis morphism per nonzero
//! off-diagonal hom space, and the structure constants `c(g, f)` with
//! `g . f = c(g, f) * e` where `e` is the basis of the target hom space (or the
//! identity when `g . f` is an endomorphism). Identities are implicit and
//! missing constants are zero.

mod builders;
mod walk;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use builders::{broken_ladder, complete_groupoid};
pub use walk::{Sign, Step, Walk};

use crate::error::{Error, Result};
use crate::exactalg::{Field, Scalar};

pub type ObjectId = usize;
pub type MorphismId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMorphism {
    pub name: String,
    pub source: ObjectId,
    pub target: ObjectId,
}

/// Anything with named vertices and oriented edges that walks can run over.
pub trait Quiver {
    /// `(source, target)` of an edge.
    fn endpoints(&self, edge: MorphismId) -> (ObjectId, ObjectId);
    fn edge_name(&self, edge: MorphismId) -> &str;
    fn vertex_name(&self, vertex: ObjectId) -> &str;
}

/// Either an identity or a chosen basis morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Identity(ObjectId),
    Basis(MorphismId),
}

/// Result of composing two arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Composite {
    Zero,
    Multiple { scalar: Scalar, arrow: Arrow },
}

/// Problems found by [`SchurianCategory::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `c(g, f) != 0` although the hom space from `s(f)` to `t(g)` is zero.
    PatternClosure { g: String, f: String },
    /// `(h g) f != h (g f)`.
    Associativity {
        h: String,
        g: String,
        f: String,
        left: Scalar,
        right: Scalar,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PatternClosure { g, f } => write!(
                fmt,
                "pattern closure: {g} . {f} is nonzero but lands in a zero hom space"
            ),
            Violation::Associativity {
                h,
                g,
                f,
                left,
                right,
            } => write!(
                fmt,
                "associativity: ({h} {g}) {f} has scalar {left} but {h} ({g} {f}) has {right}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurianCategory {
    field: Field,
    objects: Vec<String>,
    morphisms: Vec<BasisMorphism>,
    hom: HashMap<(ObjectId, ObjectId), MorphismId>,
    outgoing: Vec<Vec<MorphismId>>,
    constants: BTreeMap<(MorphismId, MorphismId), Scalar>,
}

/// Incremental construction of a [`SchurianCategory`] by name.
#[derive(Clone, Debug)]
pub struct CategoryBuilder {
    cat: SchurianCategory,
    object_index: HashMap<String, ObjectId>,
    morphism_index: HashMap<String, MorphismId>,
}

impl CategoryBuilder {
    pub fn new(field: Field) -> Self {
        CategoryBuilder {
            cat: SchurianCategory {
                field,
                objects: Vec::new(),
                morphisms: Vec::new(),
                hom: HashMap::new(),
                outgoing: Vec::new(),
                constants: BTreeMap::new(),
            },
            object_index: HashMap::new(),
            morphism_index: HashMap::new(),
        }
    }

    pub fn object(&mut self, name: &str) -> Result<ObjectId> {
        if self.object_index.contains_key(name) {
            return Err(Error::Malformed(format!("duplicate object `{name}`")));
        }
        let id = self.cat.objects.len();
        self.cat.objects.push(name.to_string());
        self.cat.outgoing.push(Vec::new());
        self.object_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Declares the basis morphism of the hom space from `source` to `target`.
    pub fn morphism(&mut self, name: &str, source: &str, target: &str) -> Result<MorphismId> {
        let s = self.object_id(source)?;
        let t = self.object_id(target)?;
        if self.morphism_index.contains_key(name) || self.object_index.contains_key(name) {
            return Err(Error::Malformed(format!("duplicate name `{name}`")));
        }
        if s == t {
            return Err(Error::Malformed(format!(
                "`{name}` is an endomorphism of `{source}`; endomorphism spaces are spanned by the identity"
            )));
        }
        if let Some(&other) = self.cat.hom.get(&(s, t)) {
            return Err(Error::Malformed(format!(
                "`{name}` and `{}` both span the hom space {source} -> {target}",
                self.cat.morphisms[other].name
            )));
        }
        let id = self.cat.morphisms.len();
        self.cat.morphisms.push(BasisMorphism {
            name: name.to_string(),
            source: s,
            target: t,
        });
        self.cat.hom.insert((s, t), id);
        self.cat.outgoing[s].push(id);
        self.morphism_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Sets `c(g, f)`; zero scalars are accepted and simply not stored.
    pub fn composite(&mut self, g: &str, f: &str, scalar: Scalar) -> Result<()> {
        let gi = self.morphism_id(g)?;
        let fi = self.morphism_id(f)?;
        self.composite_by_id(gi, fi, scalar)
    }

    pub fn composite_by_id(&mut self, g: MorphismId, f: MorphismId, scalar: Scalar) -> Result<()> {
        let (gm, fm) = (&self.cat.morphisms[g], &self.cat.morphisms[f]);
        if gm.source != fm.target {
            return Err(Error::NotComposable {
                g: gm.name.clone(),
                f: fm.name.clone(),
            });
        }
        if scalar.field() != self.cat.field {
            return Err(Error::FieldMismatch {
                expected: self.cat.field.to_string(),
                found: scalar.field().to_string(),
            });
        }
        if scalar.is_zero() {
            self.cat.constants.remove(&(g, f));
        } else {
            self.cat.constants.insert((g, f), scalar);
        }
        Ok(())
    }

    pub fn object_id(&self, name: &str) -> Result<ObjectId> {
        self.object_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_id(&self, name: &str) -> Result<MorphismId> {
        self.morphism_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn build(self) -> SchurianCategory {
        self.cat
    }
}

impl Quiver for SchurianCategory {
    fn endpoints(&self, edge: MorphismId) -> (ObjectId, ObjectId) {
        let m = &self.morphisms[edge];
        (m.source, m.target)
    }

    fn edge_name(&self, edge: MorphismId) -> &str {
        &self.morphisms[edge].name
    }

    fn vertex_name(&self, vertex: ObjectId) -> &str {
        &self.objects[vertex]
    }
}

impl SchurianCategory {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphisms(&self) -> &[BasisMorphism] {
        &self.morphisms
    }

    pub fn morphism(&self, id: MorphismId) -> &BasisMorphism {
        &self.morphisms[id]
    }

    pub fn object_id(&self, name: &str) -> Result<ObjectId> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_id(&self, name: &str) -> Result<MorphismId> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    /// Basis morphism spanning the hom space from `source` to `target`, if nonzero.
    pub fn hom(&self, source: ObjectId, target: ObjectId) -> Option<MorphismId> {
        self.hom.get(&(source, target)).copied()
    }

    /// Basis morphisms with the given source, in declaration order.
    pub fn outgoing(&self, source: ObjectId) -> &[MorphismId] {
        &self.outgoing[source]
    }

    /// Stored structure constant `c(g, f)`; zero when absent.
    pub fn constant(&self, g: MorphismId, f: MorphismId) -> Scalar {
        self.constants
            .get(&(g, f))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Nonzero structure constants keyed by `(g, f)`.
    pub fn constants(&self) -> &BTreeMap<(MorphismId, MorphismId), Scalar> {
        &self.constants
    }

    pub fn arrow_source(&self, a: Arrow) -> ObjectId {
        match a {
            Arrow::Identity(x) => x,
            Arrow::Basis(m) => self.morphisms[m].source,
        }
    }

    pub fn arrow_target(&self, a: Arrow) -> ObjectId {
        match a {
            Arrow::Identity(x) => x,
            Arrow::Basis(m) => self.morphisms[m].target,
        }
    }

    pub fn arrow_name(&self, a: Arrow) -> String {
        match a {
            Arrow::Identity(x) => format!("1_{}", self.objects[x]),
            Arrow::Basis(m) => self.morphisms[m].name.clone(),
        }
    }

    /// `g . f` as a scalar multiple of a basis arrow.
    pub fn compose(&self, g: Arrow, f: Arrow) -> Result<Composite> {
        if self.arrow_source(g) != self.arrow_target(f) {
            return Err(Error::NotComposable {
                g: self.arrow_name(g),
                f: self.arrow_name(f),
            });
        }
        let one = Scalar::one(self.field);
        let (gi, fi) = match (g, f) {
            (Arrow::Identity(_), a) | (a, Arrow::Identity(_)) => {
                return Ok(Composite::Multiple {
                    scalar: one,
                    arrow: a,
                })
            }
            (Arrow::Basis(gi), Arrow::Basis(fi)) => (gi, fi),
        };
        let Some(scalar) = self.constants.get(&(gi, fi)).cloned() else {
            return Ok(Composite::Zero);
        };
        let (s, t) = (self.morphisms[fi].source, self.morphisms[gi].target);
        let arrow = if s == t {
            Arrow::Identity(s)
        } else {
            Arrow::Basis(self.hom(s, t).ok_or_else(|| {
                Error::InvalidCategory(vec![Violation::PatternClosure {
                    g: self.morphisms[gi].name.clone(),
                    f: self.morphisms[fi].name.clone(),
                }
                .to_string()])
            })?)
        };
        Ok(Composite::Multiple { scalar, arrow })
    }

    /// Every off-diagonal composable pair `(g, f)`, ordered by `f` then `g`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (MorphismId, MorphismId)> + '_ {
        (0..self.morphisms.len()).flat_map(move |f| {
            self.outgoing[self.morphisms[f].target]
                .iter()
                .map(move |&g| (g, f))
        })
    }

    /// Off-diagonal composable pairs with a nonzero composite, with that composite.
    pub fn nonzero_composites(
        &self,
    ) -> impl Iterator<Item = (MorphismId, MorphismId, Scalar, Arrow)> + '_ {
        self.composable_pairs().filter_map(move |(g, f)| {
            match self.compose(Arrow::Basis(g), Arrow::Basis(f)) {
                Ok(Composite::Multiple { scalar, arrow }) => Some((g, f, scalar, arrow)),
                _ => None,
            }
        })
    }

    /// Lists pattern-closure and associativity violations; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&(g, f), _) in &self.constants {
            let (s, t) = (self.morphisms[f].source, self.morphisms[g].target);
            if s != t && self.hom(s, t).is_none() {
                out.push(Violation::PatternClosure {
                    g: self.morphisms[g].name.clone(),
                    f: self.morphisms[f].name.clone(),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }

        for (g, f) in self.composable_pairs() {
            for &h in &self.outgoing[self.morphisms[g].target] {
                let left = self.triple_scalar(Arrow::Basis(h), Arrow::Basis(g), Arrow::Basis(f), true);
                let right = self.triple_scalar(Arrow::Basis(h), Arrow::Basis(g), Arrow::Basis(f), false);
                if left != right {
                    out.push(Violation::Associativity {
                        h: self.morphisms[h].name.clone(),
                        g: self.morphisms[g].name.clone(),
                        f: self.morphisms[f].name.clone(),
                        left,
                        right,
                    });
                }
            }
        }
        out
    }

    /// Scalar of `(h g) f` (`left`) or `h (g f)` relative to the basis of the outer hom space.
    fn triple_scalar(&self, h: Arrow, g: Arrow, f: Arrow, left: bool) -> Scalar {
        let zero = Scalar::zero(self.field);
        let (first, rest) = if left {
            (self.compose(h, g), None)
        } else {
            (self.compose(g, f), Some(h))
        };
        match first.expect("composable by construction") {
            Composite::Zero => zero,
            Composite::Multiple { scalar, arrow } => {
                let second = match rest {
                    None => self.compose(arrow, f),
                    Some(h) => self.compose(h, arrow),
                };
                match second.expect("composable by construction") {
                    Composite::Zero => zero,
                    Composite::Multiple { scalar: c, .. } => &scalar * &c,
                }
            }
        }
    }

    /// Whether objects are linked through nonzero hom spaces, ignoring direction.
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Connected-component label of every object, numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.objects.len();
        let adjacency = self.undirected_adjacency();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = next;
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &y in &adjacency[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().max().map_or(0, |m| m + 1)
    }

    fn undirected_adjacency(&self) -> Vec<Vec<ObjectId>> {
        let mut adj = vec![Vec::new(); self.objects.len()];
        for m in &self.morphisms {
            adj[m.source].push(m.target);
            adj[m.target].push(m.source);
        }
        adj
    }

    /// Replaces each basis morphism `e` by `units[e] * e` (missing entries mean 1).
    pub fn rescale_basis(&self, units: &HashMap<MorphismId, Scalar>) -> Result<SchurianCategory> {
        let one = Scalar::one(self.field);
        for (&m, mu) in units {
            if m >= self.morphisms.len() {
                return Err(Error::Parameter(format!("no basis morphism with index {m}")));
            }
            if mu.field() != self.field {
                return Err(Error::FieldMismatch {
                    expected: self.field.to_string(),
                    found: mu.field().to_string(),
                });
            }
            if mu.is_zero() {
                return Err(Error::Parameter(format!(
                    "rescaling `{}` by zero",
                    self.morphisms[m].name
                )));
            }
        }
        let unit = |a: Arrow| match a {
            Arrow::Identity(_) => one.clone(),
            Arrow::Basis(m) => units.get(&m).cloned().unwrap_or_else(|| one.clone()),
        };
        let mut out = self.clone();
        for (&(g, f), c) in &self.constants {
            let target = match self.compose(Arrow::Basis(g), Arrow::Basis(f))? {
                Composite::Multiple { arrow, .. } => arrow,
                Composite::Zero => unreachable!("stored constants are nonzero"),
            };
            let inv = unit(target).inverse().expect("units are nonzero");
            let scaled = &(&(c * &unit(Arrow::Basis(g))) * &unit(Arrow::Basis(f))) * &inv;
            out.constants.insert((g, f), scaled);
        }
        Ok(out)
    }

    /// Same category with objects listed in `order` (a permutation of object ids).
    /// Basis morphisms are re-sorted by their new (source, target) positions.
    pub fn permute_objects(&self, order: &[ObjectId]) -> Result<SchurianCategory> {
        let n = self.objects.len();
        let mut position = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            if old >= n || position[old] != usize::MAX {
                return Err(Error::Parameter("object order is not a permutation".into()));
            }
            position[old] = new;
        }
        if order.len() != n {
            return Err(Error::Parameter("object order is not a permutation".into()));
        }
        let mut b = CategoryBuilder::new(self.field);
        for &old in order {
            b.object(&self.objects[old])?;
        }
        let mut ms: Vec<&BasisMorphism> = self.morphisms.iter().collect();
        ms.sort_by_key(|m| (position[m.source], position[m.target]));
        for m in ms {
            b.morphism(&m.name, &self.objects[m.source], &self.objects[m.target])?;
        }
        for (&(g, f), c) in &self.constants {
            b.composite(&self.morphisms[g].name, &self.morphisms[f].name, c.clone())?;
        }
        Ok(b.build())
    }

    /// Disjoint union; names of `other` must not clash with names of `self`.
    pub fn disjoint_union(&self, other: &SchurianCategory) -> Result<SchurianCategory> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field.to_string(),
                found: other.field.to_string(),
            });
        }
        let mut b = CategoryBuilder::new(self.field);
        for cat in [self, other] {
            for o in &cat.objects {
                b.object(o)?;
            }
        }
        for cat in [self, other] {
            for m in &cat.morphisms {
                b.morphism(&m.name, &cat.objects[m.source], &cat.objects[m.target])?;
            }
        }
        for cat in [self, other] {
            for (&(g, f), c) in &cat.constants {
                b.composite(&cat.morphisms[g].name, &cat.morphisms[f].name, c.clone())?;
            }
        }
        Ok(b.build())
    }

    /// The same structure constants read in another field. Fails if a
    /// constant becomes zero there.
    pub fn with_field(&self, field: Field) -> Result<SchurianCategory> {
        let mut out = self.clone();
        out.field = field;
        for (key, c) in &self.constants {
            let converted = match c {
                Scalar::Rational(q) => Scalar::from_ratio(field, q.numer(), q.denom())?,
                Scalar::Residue { value, .. } => Scalar::from_i64(field, *value as i64),
            };
            if converted.is_zero() {
                return Err(Error::Parameter(format!(
                    "structure constant {c} vanishes in {field}"
                )));
            }
            out.constants.insert(*key, converted);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_i64(Field::Rational, n)
    }

    #[test]
    fn builder_rejects_non_schurian_data() {
        let mut b = CategoryBuilder::new(Field::Rational);
        b.object("x").unwrap();
        b.object("y").unwrap();
        b.morphism("f", "x", "y").unwrap();
        assert!(b.morphism("f2", "x", "y").is_err());
        assert!(b.morphism("loop", "x", "x").is_err());
        assert!(b.morphism("f", "y", "x").is_err());
        assert!(matches!(b.morphism("g", "x", "z"), Err(Error::UnknownObject(_))));
        assert!(matches!(
            b.composite("f", "f", q(1)),
            Err(Error::NotComposable { .. })
        ));
    }

    #[test]
    fn pattern_closure_violation_is_reported() {
        let mut b = CategoryBuilder::new(Field::Rational);
        for o in ["x", "y", "z"] {
            b.object(o).unwrap();
        }
        b.morphism("f", "x", "y").unwrap();
        b.morphism("g", "y", "z").unwrap();
        b.composite("g", "f", q(1)).unwrap();
        let cat = b.build();
        assert_eq!(
            cat.validate(),
            vec![Violation::PatternClosure {
                g: "g".into(),
                f: "f".into()
            }]
        );
        assert!(cat.compose(Arrow::Basis(1), Arrow::Basis(0)).is_err());
    }

    #[test]
    fn associativity_violation_is_reported() {
        // x -f-> y -g-> z -h-> w with all composites nonzero except h(gf)
        let mut b = CategoryBuilder::new(Field::Rational);
        for o in ["x", "y", "z", "w"] {
            b.object(o).unwrap();
        }
        b.morphism("f", "x", "y").unwrap();
        b.morphism("g", "y", "z").unwrap();
        b.morphism("h", "z", "w").unwrap();
        b.morphism("gf", "x", "z").unwrap();
        b.morphism("hg", "y", "w").unwrap();
        b.morphism("hgf", "x", "w").unwrap();
        b.composite("g", "f", q(1)).unwrap();
        b.composite("h", "g", q(1)).unwrap();
        b.composite("hg", "f", q(1)).unwrap();
        b.composite("h", "gf", q(2)).unwrap();
        let cat = b.build();
        let v = cat.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::Associativity { left, right, .. } if *left == q(1) && *right == q(2)));
    }

    #[test]
    fn identity_composition_is_unital() {
        let cat = complete_groupoid(2, Field::Rational).unwrap();
        let f = cat.morphism_id("e21").unwrap();
        let src = cat.morphism(f).source;
        assert_eq!(
            cat.compose(Arrow::Basis(f), Arrow::Identity(src)).unwrap(),
            Composite::Multiple {
                scalar: q(1),
                arrow: Arrow::Basis(f)
            }
        );
        assert!(cat.compose(Arrow::Basis(f), Arrow::Basis(f)).is_err());
    }

    #[test]
    fn disconnected_union() {
        let a = complete_groupoid(2, Field::Rational).unwrap();
        let mut b = CategoryBuilder::new(Field::Rational);
        b.object("3").unwrap();
        b.object("4").unwrap();
        b.morphism("e43", "3", "4").unwrap();
        b.morphism("e34", "4", "3").unwrap();
        b.composite("e34", "e43", q(1)).unwrap();
        b.composite("e43", "e34", q(1)).unwrap();
        let u = a.disjoint_union(&b.build()).unwrap();
        assert!(u.validate().is_empty());
        assert!(!u.is_connected());
        assert!(a.is_connected());
    }

    #[test]
    fn rescale_groupoid_constant() {
        let cat = complete_groupoid(2, Field::Rational).unwrap();
        let e21 = cat.morphism_id("e21").unwrap();
        let e12 = cat.morphism_id("e12").unwrap();
        let r = cat
            .rescale_basis(&HashMap::from([(e21, q(2))]))
            .unwrap();
        assert_eq!(r.constant(e12, e21), q(2));
        assert_eq!(r.constant(e21, e12), q(2));
        assert!(cat.rescale_basis(&HashMap::from([(e21, q(0))])).is_err());
        assert_eq!(cat.rescale_basis(&HashMap::new()).unwrap(), cat);
    }
}
