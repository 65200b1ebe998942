//! Finite presentations of the fundamental group of a connected 2-complex,
//! abelianization and additive characters.
//!
//! Words are stored in traversal order, like [`Walk`]s: a word `[l1, ..., ln]`
//! stands for the loop that runs through `l1` first. Relators are closed
//! under inversion and cyclic rotation, so nothing below depends on which
//! end of a word is multiplied first.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::category::{MorphismId, ObjectId, Quiver, Sign, Step, Walk};
use crate::cw::CwComplex;
use crate::error::{Error, Result};
use crate::exactalg::{smith_normal_form, Field, FieldMatrix, IntMatrix, Scalar};

/// Free rank and torsion coefficients `d1 | d2 | ...` (each at least 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        debug_assert!(torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        AbelianInvariants { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `dim_k Hom(A, k+)`: the free rank plus, in characteristic `p`, the
    /// torsion coefficients divisible by `p`.
    pub fn character_dimension(&self, field: Field) -> usize {
        match field {
            Field::Rational => self.free_rank,
            Field::Prime(p) => {
                let p = BigInt::from(p);
                self.free_rank + self.torsion.iter().filter(|d| (*d % &p).is_zero()).count()
            }
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".into()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

pub type Word = Vec<Letter>;

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inv()).collect()
}

/// Cancels adjacent `x x^-1` pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by cancelling inverse letters at the two ends.
pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let (mut i, mut j) = (0, w.len());
    while j - i >= 2 && w[i] == w[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    w[i..j].to_vec()
}

/// Generators and relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if let Some(l) = r.iter().find(|l| l.generator >= generators.len()) {
                return Err(Error::Malformed(format!(
                    "relator uses generator {} but only {} exist",
                    l.generator,
                    generators.len()
                )));
            }
        }
        Ok(GroupPresentation {
            generators,
            relators,
        })
    }

    /// Builds a presentation from signed generator names such as `"a"` and `"-a"`.
    pub fn from_names(generators: &[&str], relators: &[&[&str]]) -> Result<Self> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let words = relators
            .iter()
            .map(|r| r.iter().map(|s| parse_letter(&gens, s)).collect())
            .collect::<Result<Vec<Word>>>()?;
        Self::new(gens, words)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Signed-name rendering of a word, e.g. `["a", "-b"]`.
    pub fn word_names(&self, w: &[Letter]) -> Vec<String> {
        w.iter()
            .map(|l| {
                let name = &self.generators[l.generator];
                if l.inverse {
                    format!("-{name}")
                } else {
                    name.clone()
                }
            })
            .collect()
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    /// Inverse of [`Self::word_names`]: `"-x"` is the inverse of generator `x`.
    pub fn parse_word<S: AsRef<str>>(&self, names: &[S]) -> Result<Word> {
        names
            .iter()
            .map(|n| parse_letter(&self.generators, n.as_ref()))
            .collect()
    }

    pub fn relator_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relators.len(), self.generators.len());
        for (i, r) in self.relators.iter().enumerate() {
            for l in r {
                let x = m.get(i, l.generator) + l.exponent();
                m.set(i, l.generator, x);
            }
        }
        m
    }

    pub fn abelianization(&self) -> AbelianInvariants {
        let form = smith_normal_form(&self.relator_matrix());
        AbelianInvariants::new(self.generators.len() - form.rank(), form.torsion())
    }

    /// Basis of the additive characters `Hom(G, k+)`: maps on generators whose
    /// exponent sums over every relator vanish.
    pub fn character_space(&self, field: Field) -> Result<Vec<Character>> {
        let m = self.relator_matrix();
        let rows = (0..m.nrows())
            .map(|i| m.row(i).iter().map(|x| Scalar::from_bigint(field, x)).collect())
            .collect();
        let basis = FieldMatrix::from_rows(field, m.ncols(), rows)?.nullspace_basis();
        Ok(basis.into_iter().map(|values| Character { values }).collect())
    }

    /// Sound Tietze simplification: drops relators that reduce to the empty
    /// word and eliminates generators occurring exactly once in some relator.
    pub fn simplify(&self) -> GroupPresentation {
        let mut generators = self.generators.clone();
        let mut relators: Vec<Word> = self.relators.clone();
        loop {
            let mut candidate = None;
            let mut order: Vec<usize> = (0..relators.len()).collect();
            order.sort_by_key(|&i| (cyclic_reduce(&relators[i]).len(), i));
            'search: for &i in &order {
                let r = cyclic_reduce(&relators[i]);
                for g in 0..generators.len() {
                    let hits: Vec<usize> = (0..r.len()).filter(|&k| r[k].generator == g).collect();
                    if hits.len() == 1 {
                        candidate = Some((i, r, hits[0]));
                        break 'search;
                    }
                }
            }
            let Some((i, r, k)) = candidate else {
                break;
            };
            // rotate so the generator comes first: x^e w = 1, hence x^e = w^-1
            let rotated: Word = r[k..].iter().chain(&r[..k]).copied().collect();
            let x = rotated[0];
            let rest = &rotated[1..];
            let image = if x.inverse {
                rest.to_vec()
            } else {
                inverse_word(rest)
            };
            let image_inv = inverse_word(&image);
            relators.remove(i);
            for rel in relators.iter_mut() {
                let substituted: Word = rel
                    .iter()
                    .flat_map(|l| {
                        if l.generator != x.generator {
                            vec![*l]
                        } else if l.inverse {
                            image_inv.clone()
                        } else {
                            image.clone()
                        }
                    })
                    .collect();
                *rel = substituted;
            }
            generators.remove(x.generator);
            for rel in relators.iter_mut() {
                for l in rel.iter_mut() {
                    if l.generator > x.generator {
                        l.generator -= 1;
                    }
                }
            }
        }
        relators = relators
            .iter()
            .map(|r| cyclic_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        let out = GroupPresentation {
            generators,
            relators,
        };
        debug_assert_eq!(out.abelianization(), self.abelianization());
        out
    }
}

fn parse_letter(generators: &[String], s: &str) -> Result<Letter> {
    let (name, inverse) = match s.strip_prefix('-') {
        Some(n) => (n, true),
        None => (s.strip_prefix('+').unwrap_or(s), false),
    };
    generators
        .iter()
        .position(|g| g == name)
        .map(|g| Letter::new(g, inverse))
        .ok_or_else(|| Error::Malformed(format!("unknown generator `{name}`")))
}

/// An additive character: one value per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<Scalar>,
}

impl Character {
    pub fn zero(field: Field, generators: usize) -> Self {
        Character {
            values: vec![Scalar::zero(field); generators],
        }
    }

    /// Sum of the signed generator values along the word.
    pub fn evaluate(&self, field: Field, w: &[Letter]) -> Scalar {
        w.iter().fold(Scalar::zero(field), |acc, l| {
            let v = &self.values[l.generator];
            if l.inverse {
                &acc - v
            } else {
                &acc + v
            }
        })
    }

    pub fn kills_relators(&self, field: Field, pres: &GroupPresentation) -> bool {
        pres.relators().iter().all(|r| self.evaluate(field, r).is_zero())
    }
}

/// Breadth-first spanning tree of the 1-skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub base: ObjectId,
    /// Tree edges in discovery order.
    pub edges: Vec<MorphismId>,
    in_tree: Vec<bool>,
    paths: Vec<Walk>,
}

impl SpanningTree {
    pub fn contains(&self, edge: MorphismId) -> bool {
        self.in_tree[edge]
    }

    /// The tree walk from the base to `vertex`.
    pub fn path_to(&self, vertex: ObjectId) -> &Walk {
        &self.paths[vertex]
    }

    /// `path(t(e))^-1 . e . path(s(e))`, a closed walk at the base.
    pub fn edge_loop(&self, q: &impl Quiver, edge: MorphismId) -> Walk {
        let (s, t) = q.endpoints(edge);
        let mut w = self.paths[s].clone();
        w.push(q, Step::forward(edge)).expect("tree path ends at the edge source");
        w.then(&self.paths[t].inverse())
            .expect("edge target is the start of the reversed tree path")
    }
}

/// Deterministic BFS tree rooted at `base`. Each vertex scans its incident
/// edges ordered by (source index, target index), then edge index.
pub fn spanning_tree(cw: &CwComplex, base: ObjectId) -> Result<SpanningTree> {
    let n = cw.vertices().len();
    if base >= n {
        return Err(Error::UnknownObject(format!("vertex index {base}")));
    }
    let mut incident: Vec<Vec<MorphismId>> = vec![Vec::new(); n];
    for (id, e) in cw.edges().iter().enumerate() {
        incident[e.source].push(id);
        if e.target != e.source {
            incident[e.target].push(id);
        }
    }
    for list in incident.iter_mut() {
        list.sort_by_key(|&id| (cw.edges()[id].source, cw.edges()[id].target, id));
    }

    let mut paths: Vec<Option<Walk>> = vec![None; n];
    let mut in_tree = vec![false; cw.edges().len()];
    let mut edges = Vec::new();
    paths[base] = Some(Walk::empty(base));
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        for &id in &incident[v] {
            let e = &cw.edges()[id];
            let (w, step) = if e.source == v {
                (e.target, Step::forward(id))
            } else {
                (e.source, Step::backward(id))
            };
            if paths[w].is_some() {
                continue;
            }
            let mut p = paths[v].clone().expect("visited");
            p.push(cw, step)?;
            paths[w] = Some(p);
            in_tree[id] = true;
            edges.push(id);
            queue.push_back(w);
        }
    }
    let paths = paths
        .into_iter()
        .collect::<Option<Vec<Walk>>>()
        .ok_or(Error::Disconnected)?;
    Ok(SpanningTree {
        base,
        edges,
        in_tree,
        paths,
    })
}

/// Presentation of `π1(CW, base)` together with the tree that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi1Presentation {
    pub presentation: GroupPresentation,
    pub tree: SpanningTree,
    /// Generator index of each edge; `None` for tree edges.
    pub edge_generator: Vec<Option<usize>>,
}

impl Pi1Presentation {
    pub fn base(&self) -> ObjectId {
        self.tree.base
    }

    /// Word of a walk: tree edges vanish, other edges become their signed generator.
    pub fn word_of_steps(&self, steps: &[Step]) -> Word {
        steps
            .iter()
            .filter_map(|s| {
                self.edge_generator[s.morphism]
                    .map(|g| Letter::new(g, s.sign == Sign::Backward))
            })
            .collect()
    }

    /// Word representing the homotopy class of a walk closed at the base.
    pub fn word_of_walk(&self, walk: &Walk) -> Result<Word> {
        if walk.source() != self.base() || walk.target() != self.base() {
            return Err(Error::Walk("walk is not closed at the base object".into()));
        }
        Ok(self.word_of_steps(walk.steps()))
    }
}

/// Non-tree edges generate; every 2-cell boundary is a relator.
pub fn pi1_presentation(cw: &CwComplex, base: ObjectId) -> Result<Pi1Presentation> {
    let tree = spanning_tree(cw, base)?;
    let mut edge_generator = vec![None; cw.edges().len()];
    let mut generators = Vec::new();
    for (id, e) in cw.edges().iter().enumerate() {
        if !tree.contains(id) {
            edge_generator[id] = Some(generators.len());
            generators.push(e.name.clone());
        }
    }
    let mut p = Pi1Presentation {
        presentation: GroupPresentation::new(generators, Vec::new())?,
        tree,
        edge_generator,
    };
    let relators = cw
        .two_cells()
        .iter()
        .map(|c| p.word_of_steps(&c.boundary_steps()))
        .collect();
    p.presentation.relators = relators;
    Ok(p)
}
