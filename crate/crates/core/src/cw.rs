//! The 2-dimensional CW-complex attached to a Schurian category, with
//! cellular homology and cohomology in degree one.
//!
//! One vertex per object and one oriented edge per nonzero off-diagonal hom
//! space. Each off-diagonal composable pair `(g, f)` with a nonzero composite
//! glues a 2-cell: a triangle on `f`, `g` and the basis of the composite, or a
//! bigon on `f`, `g` when the composite is a multiple of an identity.
//! Zero composites glue nothing.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::category::{Arrow, MorphismId, ObjectId, Quiver, SchurianCategory, Step, Walk};
use crate::error::{Error, Result};
use crate::exactalg::{smith_normal_form, Field, FieldMatrix, IntMatrix};
use crate::presentation::AbelianInvariants;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoCell {
    /// `g . f` is a nonzero multiple of `composite`; boundary `composite^-1 . g . f`.
    Triangle {
        g: MorphismId,
        f: MorphismId,
        composite: MorphismId,
    },
    /// `g . f` is a nonzero multiple of an identity; boundary `g . f`.
    Bigon { g: MorphismId, f: MorphismId },
}

impl TwoCell {
    /// The composable pair `(g, f)` that created the cell.
    pub fn pair(&self) -> (MorphismId, MorphismId) {
        match *self {
            TwoCell::Triangle { g, f, .. } | TwoCell::Bigon { g, f } => (g, f),
        }
    }

    /// Boundary as a closed walk starting at the source of `f`.
    pub fn boundary_steps(&self) -> Vec<Step> {
        match *self {
            TwoCell::Triangle { g, f, composite } => {
                vec![Step::forward(f), Step::forward(g), Step::backward(composite)]
            }
            TwoCell::Bigon { g, f } => vec![Step::forward(f), Step::forward(g)],
        }
    }

    /// Cellular boundary as `(edge, coefficient)` pairs.
    pub fn boundary_chain(&self) -> Vec<(MorphismId, i64)> {
        match *self {
            TwoCell::Triangle { g, f, composite } => vec![(g, 1), (f, 1), (composite, -1)],
            TwoCell::Bigon { g, f } => vec![(g, 1), (f, 1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: ObjectId,
    pub target: ObjectId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwComplex {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    two_cells: Vec<TwoCell>,
}

impl Quiver for CwComplex {
    fn endpoints(&self, edge: MorphismId) -> (ObjectId, ObjectId) {
        let e = &self.edges[edge];
        (e.source, e.target)
    }

    fn edge_name(&self, edge: MorphismId) -> &str {
        &self.edges[edge].name
    }

    fn vertex_name(&self, vertex: ObjectId) -> &str {
        &self.vertices[vertex]
    }
}

/// Builds the complex of a valid category. Edge `i` is basis morphism `i`.
pub fn build_cw(cat: &SchurianCategory) -> Result<CwComplex> {
    let violations = cat.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidCategory(
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    let two_cells = cat
        .nonzero_composites()
        .map(|(g, f, _, arrow)| match arrow {
            Arrow::Basis(composite) => TwoCell::Triangle { g, f, composite },
            Arrow::Identity(_) => TwoCell::Bigon { g, f },
        })
        .collect();
    Ok(CwComplex {
        vertices: cat.objects().to_vec(),
        edges: cat
            .morphisms()
            .iter()
            .map(|m| Edge {
                name: m.name.clone(),
                source: m.source,
                target: m.target,
            })
            .collect(),
        two_cells,
    })
}

impl CwComplex {
    /// A complex assembled directly from cells; every 2-cell boundary must close up.
    pub fn from_parts(vertices: Vec<String>, edges: Vec<Edge>, two_cells: Vec<TwoCell>) -> Result<Self> {
        if let Some(e) = edges
            .iter()
            .find(|e| e.source >= vertices.len() || e.target >= vertices.len())
        {
            return Err(Error::Malformed(format!("edge `{}` has an unknown endpoint", e.name)));
        }
        let cw = CwComplex {
            vertices,
            edges,
            two_cells,
        };
        for cell in &cw.two_cells {
            let (g, f) = cell.pair();
            if g >= cw.edges.len() || f >= cw.edges.len() {
                return Err(Error::Malformed("2-cell refers to an unknown edge".into()));
            }
            if !cw.boundary_walk(cell)?.is_closed() {
                return Err(Error::Malformed("2-cell boundary is not closed".into()));
            }
        }
        Ok(cw)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn two_cells(&self) -> &[TwoCell] {
        &self.two_cells
    }

    pub fn vertex_id(&self, name: &str) -> Result<ObjectId> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn boundary_walk(&self, cell: &TwoCell) -> Result<Walk> {
        let (_, f) = cell.pair();
        Walk::new(self, self.edges[f].source, cell.boundary_steps())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.two_cells.len() as i64
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `∂1`: rows are vertices, columns edges; `∂1(e) = t(e) - s(e)`.
    pub fn boundary_1(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.vertices.len(), self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            d.set(e.target, j, d.get(e.target, j) + 1);
            d.set(e.source, j, d.get(e.source, j) - 1);
        }
        d
    }

    /// `∂2`: rows are edges, columns 2-cells.
    pub fn boundary_2(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.edges.len(), self.two_cells.len());
        for (j, cell) in self.two_cells.iter().enumerate() {
            for (e, c) in cell.boundary_chain() {
                d.set(e, j, d.get(e, j) + BigInt::from(c));
            }
        }
        d
    }

    fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// `H1 = ker ∂1 / im ∂2` over the integers.
    pub fn homology_h1(&self) -> Result<AbelianInvariants> {
        self.require_connected()?;
        let rank_1 = smith_normal_form(&self.boundary_1()).rank();
        let d2 = smith_normal_form(&self.boundary_2());
        // ker ∂1 is a direct summand of the edge lattice containing im ∂2
        let cycles = self.edges.len() - rank_1;
        Ok(AbelianInvariants::new(cycles - d2.rank(), d2.torsion()))
    }

    /// `dim_k H^1(CW; k)`, from the coboundaries over `field`.
    pub fn cohomology_dim_h1(&self, field: Field) -> Result<usize> {
        self.require_connected()?;
        let rank_delta_1 = int_to_field(&self.boundary_1(), field)?.rank();
        let rank_delta_2 = int_to_field(&self.boundary_2(), field)?.rank();
        Ok(self.edges.len() - rank_delta_2 - rank_delta_1)
    }

    /// Graphviz rendering of the 1-skeleton; 2-cells are listed as comments.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cw {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{v}\";");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertices[e.source], self.vertices[e.target], e.name
            );
        }
        for cell in &self.two_cells {
            let (kind, names) = match *cell {
                TwoCell::Triangle { g, f, composite } => (
                    "triangle",
                    format!("{} {} {}", self.edges[f].name, self.edges[g].name, self.edges[composite].name),
                ),
                TwoCell::Bigon { g, f } => (
                    "bigon",
                    format!("{} {}", self.edges[f].name, self.edges[g].name),
                ),
            };
            let _ = writeln!(out, "  // {kind}: {names}");
        }
        out.push_str("}\n");
        out
    }
}

/// An integer matrix with entries read in `field`.
pub(crate) fn int_to_field(m: &IntMatrix, field: Field) -> Result<FieldMatrix> {
    use crate::exactalg::Scalar;
    let rows = (0..m.nrows())
        .map(|i| m.row(i).iter().map(|x| Scalar::from_bigint(field, x)).collect())
        .collect();
    FieldMatrix::from_rows(field, m.ncols(), rows)
}
