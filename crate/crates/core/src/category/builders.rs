use super::{CategoryBuilder, SchurianCategory};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Scalar};

/// The complete Schurian groupoid on `n` objects `1..=n`: every off-diagonal
/// hom space is one-dimensional and every composite of basis morphisms is the
/// basis morphism (or identity) with scalar 1.
///
/// The basis morphism from `x` to `y` is named `e{y}{x}` (`e{y}_{x}` once
/// `n > 9`).
pub fn complete_groupoid(n: usize, field: Field) -> Result<SchurianCategory> {
    if n < 1 {
        return Err(Error::Parameter("complete groupoid needs at least one object".into()));
    }
    let name = |y: usize, x: usize| {
        if n <= 9 {
            format!("e{y}{x}")
        } else {
            format!("e{y}_{x}")
        }
    };
    let mut b = CategoryBuilder::new(field);
    for x in 1..=n {
        b.object(&x.to_string())?;
    }
    for x in 1..=n {
        for y in (1..=n).filter(|&y| y != x) {
            b.morphism(&name(y, x), &x.to_string(), &y.to_string())?;
        }
    }
    for x in 1..=n {
        for y in (1..=n).filter(|&y| y != x) {
            for z in (1..=n).filter(|&z| z != y) {
                b.composite(&name(z, y), &name(y, x), Scalar::one(field))?;
            }
        }
    }
    Ok(b.build())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Node {
    A(usize),
    B(usize),
}

/// Finite truncation of the broken ladder with levels `0..=m`, broken between
/// levels `s` and `s + 1`.
///
/// Objects are `a0..am, b0..bm`. Nonzero hom spaces: `a_i -> a_j` for `i > j`,
/// `b_i -> b_j` for `i < j`, and `a_i -> b_j` for all `i, j`. The quiver arrows
/// are named `beta{i}: a_i -> a_{i-1}`, `alpha{i}: a_i -> b_i` and
/// `gamma{i}: b_i -> b_{i+1}`; every other basis morphism is named
/// `{source}_{target}`, e.g. `a1_b0`.
///
/// The cross morphism `a_i -> b_j` crosses at level `min(i, j)`. A composite
/// producing a cross morphism `a_i -> b_j` vanishes exactly when `i > s`,
/// `j > s` and its cross factor crosses at a level `<= s`; all other composites
/// have scalar 1.
pub fn broken_ladder(m: usize, s: usize, field: Field) -> Result<SchurianCategory> {
    if m < 1 || s >= m {
        return Err(Error::Parameter(format!(
            "broken ladder needs m >= 1 and 0 <= s < m, got m = {m}, s = {s}"
        )));
    }
    let label = |n: Node| match n {
        Node::A(i) => format!("a{i}"),
        Node::B(i) => format!("b{i}"),
    };
    let name = |x: Node, y: Node| match (x, y) {
        (Node::A(i), Node::A(j)) if i == j + 1 => format!("beta{i}"),
        (Node::A(i), Node::B(j)) if i == j => format!("alpha{i}"),
        (Node::B(i), Node::B(j)) if j == i + 1 => format!("gamma{i}"),
        _ => format!("{}_{}", label(x), label(y)),
    };
    let nonzero = |x: Node, y: Node| match (x, y) {
        (Node::A(i), Node::A(j)) => i > j,
        (Node::B(i), Node::B(j)) => i < j,
        (Node::A(_), Node::B(_)) => true,
        (Node::B(_), Node::A(_)) => false,
    };
    let crossing = |x: Node, y: Node| match (x, y) {
        (Node::A(i), Node::B(j)) => Some(i.min(j)),
        _ => None,
    };

    let nodes: Vec<Node> = (0..=m).map(Node::A).chain((0..=m).map(Node::B)).collect();
    let mut b = CategoryBuilder::new(field);
    for &n in &nodes {
        b.object(&label(n))?;
    }
    for &x in &nodes {
        for &y in &nodes {
            if x != y && nonzero(x, y) {
                b.morphism(&name(x, y), &label(x), &label(y))?;
            }
        }
    }
    for &x in &nodes {
        for &y in &nodes {
            for &z in &nodes {
                if x == y || y == z || !nonzero(x, y) || !nonzero(y, z) {
                    continue;
                }
                // every nonzero composite here lands off the diagonal
                debug_assert!(x != z && nonzero(x, z));
                let level = crossing(x, y).or(crossing(y, z));
                let vanishes = match (x, z, level) {
                    (Node::A(i), Node::B(j), Some(t)) => i > s && j > s && t <= s,
                    _ => false,
                };
                if !vanishes {
                    b.composite(&name(y, z), &name(x, y), Scalar::one(field))?;
                }
            }
        }
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{Arrow, Composite};

    fn one() -> Scalar {
        Scalar::one(Field::Rational)
    }

    #[test]
    fn groupoid_shapes() {
        let g1 = complete_groupoid(1, Field::Rational).unwrap();
        assert_eq!(g1.object_count(), 1);
        assert!(g1.morphisms().is_empty());

        let g3 = complete_groupoid(3, Field::Rational).unwrap();
        assert_eq!(g3.morphisms().len(), 6);
        assert_eq!(g3.composable_pairs().count(), 12);
        assert_eq!(g3.nonzero_composites().count(), 12);

        assert!(complete_groupoid(0, Field::Rational).is_err());
    }

    #[test]
    fn groupoid_two_composites_are_identities() {
        let g = complete_groupoid(2, Field::Rational).unwrap();
        let e12 = g.morphism_id("e12").unwrap();
        let e21 = g.morphism_id("e21").unwrap();
        let one_id = |o: &str| Arrow::Identity(g.object_id(o).unwrap());
        assert_eq!(
            g.compose(Arrow::Basis(e12), Arrow::Basis(e21)).unwrap(),
            Composite::Multiple { scalar: one(), arrow: one_id("1") }
        );
        assert_eq!(
            g.compose(Arrow::Basis(e21), Arrow::Basis(e12)).unwrap(),
            Composite::Multiple { scalar: one(), arrow: one_id("2") }
        );
    }

    #[test]
    fn ladder_one_zero_composites() {
        let c = broken_ladder(1, 0, Field::Rational).unwrap();
        let names: Vec<&str> = c.morphisms().iter().map(|m| m.name.as_str()).collect();
        assert_eq!(names.len(), 6);
        for n in ["beta1", "alpha0", "alpha1", "gamma0", "a1_b0", "a0_b1"] {
            assert!(names.contains(&n), "missing {n}");
        }
        let id = |n: &str| Arrow::Basis(c.morphism_id(n).unwrap());
        let cmp = |g: &str, f: &str| c.compose(id(g), id(f)).unwrap();
        assert_eq!(cmp("alpha0", "beta1"), Composite::Multiple { scalar: one(), arrow: id("a1_b0") });
        assert_eq!(cmp("gamma0", "alpha0"), Composite::Multiple { scalar: one(), arrow: id("a0_b1") });
        assert_eq!(cmp("gamma0", "a1_b0"), Composite::Zero);
        assert_eq!(cmp("a0_b1", "beta1"), Composite::Zero);
        assert_eq!(c.nonzero_composites().count(), 2);
        assert!(c.validate().is_empty());
        assert!(c.is_connected());
    }

    #[test]
    fn ladder_two_zero_relations() {
        let c = broken_ladder(2, 0, Field::Rational).unwrap();
        let id = |n: &str| Arrow::Basis(c.morphism_id(n).unwrap());
        let step = |g: Arrow, f: Arrow| match c.compose(g, f).unwrap() {
            Composite::Multiple { arrow, .. } => Some(arrow),
            Composite::Zero => None,
        };
        // gamma1 alpha1 beta2 = alpha2
        let inner = step(id("alpha1"), id("beta2")).unwrap();
        assert_eq!(step(id("gamma1"), inner), Some(id("alpha2")));
        // gamma1 gamma0 alpha0 beta1 beta2 = 0
        let down = step(id("beta1"), id("beta2")).unwrap();
        let cross = step(id("alpha0"), down).unwrap();
        let up = step(id("gamma0"), cross);
        let result = up.and_then(|u| step(id("gamma1"), u));
        assert_eq!(result, None);
    }

    #[test]
    fn ladder_parameter_bounds() {
        assert!(broken_ladder(0, 0, Field::Rational).is_err());
        assert!(broken_ladder(2, 2, Field::Rational).is_err());
    }

    #[test]
    fn builders_validate_across_suite() {
        for n in 1..=6 {
            assert!(complete_groupoid(n, Field::Rational).unwrap().validate().is_empty());
        }
        for m in 1..=8 {
            for s in 0..m {
                let c = broken_ladder(m, s, Field::Prime(7)).unwrap();
                assert!(c.validate().is_empty(), "ladder ({m},{s}) invalid");
                assert!(c.is_connected());
            }
        }
    }
}
