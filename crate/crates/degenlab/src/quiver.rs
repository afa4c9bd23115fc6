//! Quivers and paths. A path stores its arrows in application order, so the
//! written word `a*w` (first w, then a) is the reversed arrow list `[w, a]`.

use crate::Error;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertex_ids: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_ids: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Quiver, Error> {
        let mut q = Quiver {
            vertex_ids: Vec::new(),
            arrows: Vec::new(),
        };
        for id in vertex_ids {
            if q.vertex_ids.contains(&id) {
                return Err(Error::BadInput(format!("duplicate vertex id `{id}`")));
            }
            q.vertex_ids.push(id);
        }
        for (name, src, dst) in arrows {
            if q.arrows.iter().any(|a| a.name == name) {
                return Err(Error::BadInput(format!("duplicate arrow name `{name}`")));
            }
            let source = q.vertex_index(&src)?;
            let target = q.vertex_index(&dst)?;
            q.arrows.push(Arrow {
                name,
                source,
                target,
            });
        }
        Ok(q)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize, Error> {
        self.vertex_ids
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| Error::BadInput(format!("unknown vertex `{id}`")))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize, Error> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::BadInput(format!("unknown arrow `{name}`")))
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arrows
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.source == v)
            .map(|(i, _)| i)
    }
}

/// A composable sequence of arrows, stored first-applied-first. Length zero
/// paths are the vertex idempotents e_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn idempotent(v: usize) -> Path {
        Path {
            start: v,
            arrows: Vec::new(),
        }
    }

    pub fn from_arrows(quiver: &Quiver, arrows: Vec<usize>) -> Result<Path, Error> {
        if arrows.is_empty() {
            return Err(Error::BadInput("empty arrow sequence".into()));
        }
        let start = quiver.arrows[arrows[0]].source;
        let mut at = start;
        for &a in &arrows {
            if quiver.arrows[a].source != at {
                return Err(Error::BadInput(format!(
                    "non-composable path through `{}`",
                    quiver.arrows[a].name
                )));
            }
            at = quiver.arrows[a].target;
        }
        Ok(Path { start, arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_idempotent(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn end(&self, quiver: &Quiver) -> usize {
        match self.arrows.last() {
            Some(&a) => quiver.arrows[a].target,
            None => self.start,
        }
    }

    /// `self` after `other`: the product self·other in the path algebra.
    /// Returns None when the endpoints do not match.
    pub fn compose_after(&self, other: &Path, quiver: &Quiver) -> Option<Path> {
        if self.start != other.end(quiver) {
            return None;
        }
        let mut arrows = other.arrows.clone();
        arrows.extend(self.arrows.iter().copied());
        Some(Path {
            start: other.start,
            arrows,
        })
    }

    /// The fixed path order: by length, then lexicographically on arrow
    /// names in written (right-to-left composition) order.
    pub fn order_key(&self, quiver: &Quiver) -> (usize, Vec<String>, usize) {
        let names: Vec<String> = self
            .arrows
            .iter()
            .rev()
            .map(|&a| quiver.arrows[a].name.clone())
            .collect();
        (self.len(), names, self.start)
    }

    pub fn display(&self, quiver: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e{}", quiver.vertex_ids[self.start]);
        }
        self.arrows
            .iter()
            .rev()
            .map(|&a| quiver.arrows[a].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}
