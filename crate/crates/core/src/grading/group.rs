//! Target groups for gradings.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactalg::{solve_integer, IntMatrix};
use crate::presentation::{cyclic_reduce, free_reduce, inverse_word, GroupPresentation, Word};

/// A group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    index: HashMap<String, usize>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// `table[a][b]` is the index of `a * b`. Closure, associativity,
    /// the identity and inverses are all checked.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup("a group needs at least one element".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidGroup(format!("duplicate element `{name}`")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup(format!("multiplication table must be {n}x{n}")));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry outside the element list".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("`{}` has no inverse", names[a])))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative on ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            names,
            index,
            table,
            identity,
            inverses,
        })
    }

    /// Cyclic group of order `n` with elements named `0..n`, written additively.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(names, table)
    }

    pub fn trivial() -> Self {
        FiniteGroup::new(vec!["1".into()], vec![vec![0]]).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidGrading(format!("unknown group element `{name}`")))
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                // finite, so closure under right multiplication suffices
                let y = self.mul(x, g);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// `Z^rank x Z/t_1 x ... x Z/t_k`, elements are integer vectors with the
/// torsion coordinates reduced into `0..t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<u64>,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if torsion.iter().any(|&t| t < 2) {
            return Err(Error::InvalidGroup("torsion moduli must be at least 2".into()));
        }
        if torsion.iter().any(|&t| t > i64::MAX as u64) {
            return Err(Error::InvalidGroup("torsion modulus too large".into()));
        }
        Ok(FgAbelianGroup { rank, torsion })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn width(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn normalize(&self, mut v: Vec<i64>) -> Result<Vec<i64>> {
        if v.len() != self.width() {
            return Err(Error::InvalidGrading(format!(
                "abelian element needs {} coordinates, got {}",
                self.width(),
                v.len()
            )));
        }
        for (x, &t) in v[self.rank..].iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(t as i64);
        }
        Ok(v)
    }

    fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (x, &t) in v[self.rank..].iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(t as i64);
        }
        v
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let sum = a
            .iter()
            .zip(b)
            .map(|(x, y)| x.checked_add(*y).expect("abelian degree overflow"))
            .collect();
        self.reduce(sum)
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    /// Whether the vectors generate the whole group.
    pub fn generates(&self, gens: &[Vec<i64>]) -> bool {
        // columns: the generators, then the torsion relations
        let w = self.width();
        let cols = gens.len() + self.torsion.len();
        let mut m = IntMatrix::zeros(w, cols);
        for (j, g) in gens.iter().enumerate() {
            for (i, &x) in g.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        for (k, &t) in self.torsion.iter().enumerate() {
            m.set(self.rank + k, gens.len() + k, BigInt::from(t));
        }
        (0..w).all(|i| {
            let mut e = vec![BigInt::from(0); w];
            e[i] = BigInt::from(1);
            solve_integer(&m, &e).is_some()
        })
    }

    /// Enumerates a torsion group as a table; `None` when the rank is positive.
    pub fn to_finite(&self) -> Option<Result<(FiniteGroup, Vec<Vec<i64>>)>> {
        if self.rank > 0 {
            return None;
        }
        let order: u64 = self.torsion.iter().product();
        if order > 4096 {
            return Some(Err(Error::UnsupportedGroup(format!(
                "torsion group of order {order} is too large to tabulate"
            ))));
        }
        let mut elements = vec![Vec::new()];
        for &t in &self.torsion {
            elements = elements
                .into_iter()
                .flat_map(|e: Vec<i64>| {
                    (0..t as i64).map(move |x| {
                        let mut e = e.clone();
                        e.push(x);
                        e
                    })
                })
                .collect();
        }
        let pos: HashMap<Vec<i64>, usize> =
            elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| pos[&self.add(a, b)]).collect())
            .collect();
        let names = elements.iter().map(|e| format_vector(e)).collect();
        Some(FiniteGroup::new(names, table).map(|g| (g, elements)))
    }
}

pub(crate) fn format_vector(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Element of a [`GradingGroup`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Finite(usize),
    Abelian(Vec<i64>),
    /// Word in traversal order, see [`crate::presentation`].
    Word(Word),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradingGroup {
    Finite(FiniteGroup),
    Abelian(FgAbelianGroup),
    Presented(GroupPresentation),
}

impl GradingGroup {
    pub fn identity(&self) -> GroupElement {
        match self {
            GradingGroup::Finite(g) => GroupElement::Finite(g.identity()),
            GradingGroup::Abelian(g) => GroupElement::Abelian(vec![0; g.width()]),
            GradingGroup::Presented(_) => GroupElement::Word(Vec::new()),
        }
    }

    /// Checks that `e` belongs to this group and puts it in normal form.
    pub fn check(&self, e: GroupElement) -> Result<GroupElement> {
        match (self, e) {
            (GradingGroup::Finite(g), GroupElement::Finite(a)) if a < g.order() => {
                Ok(GroupElement::Finite(a))
            }
            (GradingGroup::Abelian(g), GroupElement::Abelian(v)) => {
                Ok(GroupElement::Abelian(g.normalize(v)?))
            }
            (GradingGroup::Presented(p), GroupElement::Word(w))
                if w.iter().all(|l| l.generator < p.generators().len()) =>
            {
                Ok(GroupElement::Word(free_reduce(&w)))
            }
            (_, e) => Err(Error::InvalidGrading(format!(
                "element {e:?} does not belong to the grading group"
            ))),
        }
    }

    /// The product `a * b`, composition order: `b` acts first.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (GradingGroup::Finite(g), GroupElement::Finite(x), GroupElement::Finite(y)) => {
                GroupElement::Finite(g.mul(*x, *y))
            }
            (GradingGroup::Abelian(g), GroupElement::Abelian(x), GroupElement::Abelian(y)) => {
                GroupElement::Abelian(g.add(x, y))
            }
            (GradingGroup::Presented(_), GroupElement::Word(x), GroupElement::Word(y)) => {
                let mut w = y.clone();
                w.extend_from_slice(x);
                GroupElement::Word(free_reduce(&w))
            }
            _ => panic!("group element of the wrong kind"),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (GradingGroup::Finite(g), GroupElement::Finite(x)) => GroupElement::Finite(g.inv(*x)),
            (GradingGroup::Abelian(g), GroupElement::Abelian(x)) => GroupElement::Abelian(g.neg(x)),
            (GradingGroup::Presented(_), GroupElement::Word(x)) => {
                GroupElement::Word(inverse_word(x))
            }
            _ => panic!("group element of the wrong kind"),
        }
    }

    /// Decides `a == b`.
    ///
    /// For presented groups this only succeeds when `a b^-1` freely reduces to
    /// nothing, is a cyclic conjugate of a relator or its inverse, or is
    /// separated from the identity by the abelianization.
    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        let GradingGroup::Presented(p) = self else {
            return Ok(a == b);
        };
        let GroupElement::Word(x) = self.mul(a, &self.inv(b)) else {
            unreachable!()
        };
        if x.is_empty() {
            return Ok(true);
        }
        let x = cyclic_reduce(&x);
        let matches = p.relators().iter().any(|r| {
            let r = cyclic_reduce(r);
            is_rotation(&x, &r) || is_rotation(&x, &inverse_word(&r))
        });
        if matches {
            return Ok(true);
        }
        if !in_relator_lattice(p, &x) {
            return Ok(false);
        }
        Err(Error::Undecidable(format!(
            "cannot decide whether {:?} is trivial in the presented group",
            p.word_names(&x)
        )))
    }

    pub fn is_identity(&self, a: &GroupElement) -> Result<bool> {
        self.equal(a, &self.identity())
    }

    /// Human-readable element name.
    pub fn display(&self, a: &GroupElement) -> String {
        match (self, a) {
            (GradingGroup::Finite(g), GroupElement::Finite(x)) => g.name(*x).to_string(),
            (GradingGroup::Abelian(_), GroupElement::Abelian(v)) => format_vector(v),
            (GradingGroup::Presented(p), GroupElement::Word(w)) => {
                if w.is_empty() {
                    "1".into()
                } else {
                    p.word_names(w).join(" ")
                }
            }
            _ => format!("{a:?}"),
        }
    }
}

impl fmt::Display for GradingGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingGroup::Finite(g) => write!(f, "finite group of order {}", g.order()),
            GradingGroup::Abelian(g) => {
                let mut parts = Vec::new();
                if g.rank > 0 {
                    parts.push(if g.rank == 1 { "Z".to_string() } else { format!("Z^{}", g.rank) });
                }
                parts.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
            GradingGroup::Presented(p) => write!(
                f,
                "presented group with {} generators and {} relators",
                p.generators().len(),
                p.relators().len()
            ),
        }
    }
}

fn is_rotation(x: &[crate::presentation::Letter], r: &[crate::presentation::Letter]) -> bool {
    x.len() == r.len() && (x.is_empty() || (0..r.len()).any(|k| r[k..].iter().chain(&r[..k]).eq(x)))
}

fn in_relator_lattice(p: &GroupPresentation, w: &[crate::presentation::Letter]) -> bool {
    let n = p.generators().len();
    let mut v = vec![BigInt::from(0); n];
    for l in w {
        v[l.generator] += l.exponent();
    }
    // relator rows span the kernel of the abelianization map
    solve_integer(&p.relator_matrix().transpose(), &v).is_some()
}
