use super::{MorphismId, ObjectId, Quiver};
use crate::error::{Error, Result};

/// Direction in which a basis morphism is traversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Forward,
    Backward,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Forward => Sign::Backward,
            Sign::Backward => Sign::Forward,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Forward => 1,
            Sign::Backward => -1,
        }
    }
}

/// A virtual morphism `(f, +1)` or `(f, -1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub morphism: MorphismId,
    pub sign: Sign,
}

impl Step {
    pub fn forward(morphism: MorphismId) -> Self {
        Step {
            morphism,
            sign: Sign::Forward,
        }
    }

    pub fn backward(morphism: MorphismId) -> Self {
        Step {
            morphism,
            sign: Sign::Backward,
        }
    }

    pub fn source(self, cat: &impl Quiver) -> ObjectId {
        let (s, t) = cat.endpoints(self.morphism);
        match self.sign {
            Sign::Forward => s,
            Sign::Backward => t,
        }
    }

    pub fn target(self, cat: &impl Quiver) -> ObjectId {
        let (s, t) = cat.endpoints(self.morphism);
        match self.sign {
            Sign::Forward => t,
            Sign::Backward => s,
        }
    }

    pub fn inverse(self) -> Self {
        Step {
            morphism: self.morphism,
            sign: self.sign.flip(),
        }
    }
}

/// A walk, stored in traversal order: `steps[0]` is taken first.
///
/// Written as a composite the first step is the rightmost factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    start: ObjectId,
    end: ObjectId,
    steps: Vec<Step>,
}

impl Walk {
    pub fn empty(at: ObjectId) -> Self {
        Walk {
            start: at,
            end: at,
            steps: Vec::new(),
        }
    }

    /// Checks that consecutive steps meet.
    pub fn new(cat: &impl Quiver, start: ObjectId, steps: Vec<Step>) -> Result<Self> {
        let mut at = start;
        for (i, step) in steps.iter().enumerate() {
            if step.source(cat) != at {
                return Err(Error::Walk(format!(
                    "step {i} ({}) leaves `{}` but the walk is at `{}`",
                    cat.edge_name(step.morphism),
                    cat.vertex_name(step.source(cat)),
                    cat.vertex_name(at)
                )));
            }
            at = step.target(cat);
        }
        Ok(Walk {
            start,
            end: at,
            steps,
        })
    }

    pub fn source(&self) -> ObjectId {
        self.start
    }

    pub fn target(&self) -> ObjectId {
        self.end
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Walk) -> Result<Walk> {
        if self.end != next.start {
            return Err(Error::Walk(format!(
                "cannot concatenate: walk ends at object {} but the next starts at {}",
                self.end, next.start
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&next.steps);
        Ok(Walk {
            start: self.start,
            end: next.end,
            steps,
        })
    }

    /// Appends one step without re-checking the whole walk.
    pub fn push(&mut self, cat: &impl Quiver, step: Step) -> Result<()> {
        if step.source(cat) != self.end {
            return Err(Error::Walk(format!(
                "step {} does not leave the current end of the walk",
                cat.edge_name(step.morphism)
            )));
        }
        self.end = step.target(cat);
        self.steps.push(step);
        Ok(())
    }

    pub fn inverse(&self) -> Walk {
        Walk {
            start: self.end,
            end: self.start,
            steps: self.steps.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    /// Human-readable form in composition order, e.g. `(m2,-1)(alpha1,+1)(beta1,-1)`.
    pub fn display(&self, cat: &impl Quiver) -> String {
        if self.steps.is_empty() {
            return format!("1_{}", cat.vertex_name(self.start));
        }
        self.steps
            .iter()
            .rev()
            .map(|s| {
                let sign = if s.sign == Sign::Forward { "+1" } else { "-1" };
                format!("({},{sign})", cat.edge_name(s.morphism))
            })
            .collect()
    }
}
