//! JSON interchange formats for categories and gradings.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::category::{Arrow, CategoryBuilder, Composite, SchurianCategory};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Scalar};
use crate::grading::{FgAbelianGroup, FiniteGroup, Grading, GradingGroup, GroupElement};
use crate::presentation::GroupPresentation;

/// `"rational"` or `{"gf": p}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime { gf: u64 },
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Field> {
        match self {
            FieldSpec::Named(s) => s.parse(),
            FieldSpec::Prime { gf } => Field::prime(*gf),
        }
    }

    pub fn from_field(field: Field) -> Self {
        match field {
            Field::Rational => FieldSpec::Named("rational".into()),
            Field::Prime(p) => FieldSpec::Prime { gf: p },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomEntry {
    pub from: String,
    pub to: String,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionEntry {
    pub g: String,
    pub f: String,
    /// A hom name, `"identity"` or `"zero"`.
    pub result: String,
    pub scalar: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub field: FieldSpec,
    pub objects: Vec<String>,
    pub homs: Vec<HomEntry>,
    #[serde(default)]
    pub compositions: Vec<CompositionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

impl CategoryFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("category files serialize")
    }

    /// Builds the category. Unlisted composable pairs compose to zero unless
    /// `strict`, in which case every composable pair must be listed.
    pub fn to_category(&self, strict: bool) -> Result<SchurianCategory> {
        let field = self.field.to_field()?;
        let mut b = CategoryBuilder::new(field);
        for o in &self.objects {
            b.object(o)?;
        }
        for h in &self.homs {
            b.morphism(&h.name, &h.from, &h.to)?;
        }
        let skeleton = b.clone().build();
        let mut listed = HashSet::new();
        for c in &self.compositions {
            let g = skeleton.morphism_id(&c.g)?;
            let f = skeleton.morphism_id(&c.f)?;
            if !listed.insert((g, f)) {
                return Err(Error::Malformed(format!("composition ({}, {}) listed twice", c.g, c.f)));
            }
            let (gm, fm) = (skeleton.morphism(g), skeleton.morphism(f));
            if gm.source != fm.target {
                return Err(Error::NotComposable {
                    g: c.g.clone(),
                    f: c.f.clone(),
                });
            }
            let scalar = Scalar::parse(field, &c.scalar)?;
            let expected = if gm.target == fm.source {
                "identity".to_string()
            } else {
                match skeleton.hom(fm.source, gm.target) {
                    Some(h) => skeleton.morphism(h).name.clone(),
                    None => "zero".to_string(),
                }
            };
            let consistent = if c.result == "zero" {
                scalar.is_zero()
            } else {
                c.result == expected && !scalar.is_zero()
            };
            if !consistent {
                return Err(Error::Malformed(format!(
                    "composition ({}, {}): result `{}` with scalar {} does not fit (the composite lands in `{expected}`)",
                    c.g, c.f, c.result, c.scalar
                )));
            }
            b.composite_by_id(g, f, scalar)?;
        }
        if strict {
            if let Some((g, f)) = skeleton.composable_pairs().find(|p| !listed.contains(p)) {
                return Err(Error::Malformed(format!(
                    "strict mode: composition ({}, {}) is not listed",
                    skeleton.morphism(g).name,
                    skeleton.morphism(f).name
                )));
            }
        }
        Ok(b.build())
    }

    /// Lists every composable pair, zero or not, in a fixed order.
    pub fn from_category(cat: &SchurianCategory) -> Self {
        let name = |o: usize| cat.objects()[o].clone();
        let homs = cat
            .morphisms()
            .iter()
            .map(|m| HomEntry {
                from: name(m.source),
                to: name(m.target),
                name: m.name.clone(),
            })
            .collect();
        let compositions = cat
            .composable_pairs()
            .map(|(g, f)| {
                let composite = cat
                    .compose(Arrow::Basis(g), Arrow::Basis(f))
                    .expect("composable pairs compose");
                let (result, scalar) = match composite {
                    Composite::Zero => ("zero".to_string(), "0".to_string()),
                    Composite::Multiple { scalar, arrow } => {
                        let result = match arrow {
                            Arrow::Identity(_) => "identity".to_string(),
                            Arrow::Basis(h) => cat.morphism(h).name.clone(),
                        };
                        (result, scalar.to_string())
                    }
                };
                CompositionEntry {
                    g: cat.morphism(g).name.clone(),
                    f: cat.morphism(f).name.clone(),
                    result,
                    scalar,
                }
            })
            .collect();
        CategoryFile {
            field: FieldSpec::from_field(cat.field()),
            objects: cat.objects().to_vec(),
            homs,
            compositions,
            metadata: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Finite {
        elements: Vec<String>,
        /// `table[i][j]` names the product `elements[i] * elements[j]`.
        table: Vec<Vec<String>>,
    },
    Abelian {
        rank: usize,
        #[serde(default)]
        torsion: Vec<u64>,
    },
    Presented {
        generators: Vec<String>,
        relators: Vec<Vec<String>>,
    },
}

impl GroupSpec {
    pub fn to_group(&self) -> Result<GradingGroup> {
        match self {
            GroupSpec::Finite { elements, table } => {
                let index: HashMap<&str, usize> =
                    elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
                let table = table
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| {
                                index.get(e.as_str()).copied().ok_or_else(|| {
                                    Error::InvalidGroup(format!("table mentions unknown element `{e}`"))
                                })
                            })
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                Ok(GradingGroup::Finite(FiniteGroup::new(elements.clone(), table)?))
            }
            GroupSpec::Abelian { rank, torsion } => {
                Ok(GradingGroup::Abelian(FgAbelianGroup::new(*rank, torsion.clone())?))
            }
            GroupSpec::Presented {
                generators,
                relators,
            } => {
                let skeleton = GroupPresentation::new(generators.clone(), Vec::new())?;
                let relators = relators
                    .iter()
                    .map(|r| skeleton.parse_word(r))
                    .collect::<Result<_>>()?;
                Ok(GradingGroup::Presented(GroupPresentation::new(
                    generators.clone(),
                    relators,
                )?))
            }
        }
    }

    pub fn from_group(group: &GradingGroup) -> Self {
        match group {
            GradingGroup::Finite(g) => GroupSpec::Finite {
                elements: g.names().to_vec(),
                table: g
                    .table()
                    .iter()
                    .map(|row| row.iter().map(|&x| g.name(x).to_string()).collect())
                    .collect(),
            },
            GradingGroup::Abelian(g) => GroupSpec::Abelian {
                rank: g.rank(),
                torsion: g.torsion().to_vec(),
            },
            GradingGroup::Presented(p) => GroupSpec::Presented {
                generators: p.generators().to_vec(),
                relators: p.relators().iter().map(|r| p.word_names(r)).collect(),
            },
        }
    }
}

/// A group element as JSON: a name, an integer vector, or a signed-name word.
pub fn element_from_json(group: &GradingGroup, v: &Value) -> Result<GroupElement> {
    let bad = || Error::InvalidGrading(format!("`{v}` is not an element of the grading group"));
    let e = match group {
        GradingGroup::Finite(g) => GroupElement::Finite(g.element(v.as_str().ok_or_else(bad)?)?),
        GradingGroup::Abelian(_) => {
            let coords = match v {
                Value::Number(n) => vec![n.as_i64().ok_or_else(bad)?],
                Value::Array(xs) => xs
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(bad))
                    .collect::<Result<_>>()?,
                _ => return Err(bad()),
            };
            GroupElement::Abelian(coords)
        }
        GradingGroup::Presented(p) => {
            let names = v
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_str().ok_or_else(bad))
                .collect::<Result<Vec<_>>>()?;
            GroupElement::Word(p.parse_word(&names)?)
        }
    };
    group.check(e)
}

pub fn element_to_json(group: &GradingGroup, e: &GroupElement) -> Value {
    match (group, e) {
        (GradingGroup::Finite(g), GroupElement::Finite(a)) => Value::from(g.name(*a)),
        (_, GroupElement::Abelian(v)) => Value::from(v.clone()),
        (GradingGroup::Presented(p), GroupElement::Word(w)) => Value::from(p.word_names(w)),
        _ => Value::Null,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingFile {
    pub group: GroupSpec,
    pub degrees: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

impl GradingFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grading files serialize")
    }

    pub fn to_grading(&self, cat: &SchurianCategory) -> Result<Grading> {
        let group = self.group.to_group()?;
        let named = self
            .degrees
            .iter()
            .map(|(k, v)| Ok((k.clone(), element_from_json(&group, v)?)))
            .collect::<Result<HashMap<_, _>>>()?;
        Grading::from_names(cat, group, &named)
    }

    pub fn from_grading(cat: &SchurianCategory, x: &Grading) -> Self {
        GradingFile {
            group: GroupSpec::from_group(x.group()),
            degrees: cat
                .morphisms()
                .iter()
                .zip(x.degrees())
                .map(|(m, d)| (m.name.clone(), element_to_json(x.group(), d)))
                .collect(),
            metadata: None,
        }
    }
}

/// Object name to group element; unlisted objects get the identity.
pub fn parse_conjugator(cat: &SchurianCategory, group: &GradingGroup, text: &str) -> Result<Vec<GroupElement>> {
    let map: BTreeMap<String, Value> = serde_json::from_str(text)?;
    let mut a = vec![group.identity(); cat.object_count()];
    for (name, v) in &map {
        a[cat.object_id(name)?] = element_from_json(group, v)?;
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{broken_ladder, complete_groupoid};

    #[test]
    fn category_round_trip() {
        for cat in [
            complete_groupoid(2, Field::Rational).unwrap(),
            broken_ladder(2, 1, Field::prime(7).unwrap()).unwrap(),
        ] {
            let file = CategoryFile::from_category(&cat);
            let text = file.to_json();
            let back = CategoryFile::parse(&text).unwrap();
            assert_eq!(back, file);
            let again = back.to_category(true).unwrap();
            assert_eq!(CategoryFile::from_category(&again), file);
            assert_eq!(again.constants(), cat.constants());
        }
    }

    #[test]
    fn lenient_and_strict_modes() {
        let text = r#"{"field": {"gf": 3}, "objects": ["x", "y"],
            "homs": [{"from": "x", "to": "y", "name": "f"}, {"from": "y", "to": "x", "name": "g"}],
            "compositions": [{"g": "g", "f": "f", "result": "identity", "scalar": "2"}]}"#;
        let file = CategoryFile::parse(text).unwrap();
        let cat = file.to_category(false).unwrap();
        assert_eq!(cat.constants().len(), 1);
        assert!(matches!(file.to_category(true), Err(Error::Malformed(_))));
    }

    #[test]
    fn bad_files() {
        let undeclared = r#"{"field": "rational", "objects": ["x", "y"],
            "homs": [{"from": "x", "to": "y", "name": "f"}],
            "compositions": [{"g": "h", "f": "f", "result": "zero", "scalar": "0"}]}"#;
        let err = CategoryFile::parse(undeclared).unwrap().to_category(false).unwrap_err();
        assert!(matches!(err, Error::UnknownMorphism(ref n) if n == "h"), "{err}");

        let mismatched = r#"{"field": "rational", "objects": ["x", "y"],
            "homs": [{"from": "x", "to": "y", "name": "f"}, {"from": "y", "to": "x", "name": "g"}],
            "compositions": [{"g": "g", "f": "f", "result": "zero", "scalar": "1"}]}"#;
        assert!(CategoryFile::parse(mismatched).unwrap().to_category(false).is_err());

        let err = CategoryFile::parse("{\"field\": \"rational\",\n \"objects\": [}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn grading_round_trip() {
        let cat = complete_groupoid(2, Field::Rational).unwrap();
        let text = r#"{"group": {"finite": {"elements": ["1", "g"], "table": [["1", "g"], ["g", "1"]]}},
            "degrees": {"e21": "g", "e12": "g"}}"#;
        let x = GradingFile::parse(text).unwrap().to_grading(&cat).unwrap();
        assert_eq!(x.degrees(), &[GroupElement::Finite(1), GroupElement::Finite(1)]);
        let back = GradingFile::from_grading(&cat, &x);
        assert_eq!(back.to_grading(&cat).unwrap(), x);

        let missing = r#"{"group": {"abelian": {"rank": 1}}, "degrees": {"e21": 1}}"#;
        assert!(GradingFile::parse(missing).unwrap().to_grading(&cat).is_err());
        let a = parse_conjugator(&cat, x.group(), r#"{"2": "g"}"#).unwrap();
        assert_eq!(a, vec![GroupElement::Finite(0), GroupElement::Finite(1)]);
    }
}
