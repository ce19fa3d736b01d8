//! Instances and coverings.
//!
//! An instance has a universe of weighted elements. The first `n` of them are
//! the required labels; the rest are auxiliary elements that carry weight
//! (and therefore cost) but never need to be covered. Edges are nonempty
//! subsets of the universe.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bitset::ElementSet;
use crate::cost::BigCost;

/// Position of an element in the universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementIdx(pub usize);

/// Position of an edge in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeIdx(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub name: String,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// Members in the order they were declared.
    pub elements: Vec<ElementIdx>,
    set: ElementSet,
}

impl Edge {
    pub fn set(&self) -> &ElementSet {
        &self.set
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("invalid id {0:?}: ids must be nonempty and contain no whitespace or '#'")]
    InvalidId(String),
    #[error("duplicate element id {0:?}")]
    DuplicateElement(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("element {0:?} has weight 0; weights must be positive")]
    ZeroWeight(String),
    #[error("edge {edge:?} references unknown element {element:?}")]
    UnknownElement { edge: String, element: String },
    #[error("edge {edge:?} lists element {element:?} more than once")]
    RepeatedElement { edge: String, element: String },
    #[error("edge {0:?} is empty")]
    EmptyEdge(String),
    #[error("auxiliary element {0:?} appears in no edge")]
    UnusedElement(String),
    #[error("labels not covered by any edge: {0:?}")]
    Uncoverable(Vec<String>),
    #[error("unknown edge id {0:?}")]
    UnknownEdge(String),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
}

/// Ids are single whitespace-free tokens so that every instance has a
/// textual form.
pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(|c| c.is_whitespace() || c == '#')
}

/// Incremental construction of an [`OcpInstance`]; all invariants are
/// checked in [`InstanceBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct InstanceBuilder {
    labels: Vec<(String, u64)>,
    extras: Vec<(String, u64)>,
    edges: Vec<(String, Vec<String>)>,
    budget: Option<BigCost>,
    allow_uncoverable: bool,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn label(mut self, name: impl Into<String>, weight: u64) -> Self {
        self.labels.push((name.into(), weight));
        self
    }

    /// An element outside the required set.
    pub fn extra(mut self, name: impl Into<String>, weight: u64) -> Self {
        self.extras.push((name.into(), weight));
        self
    }

    pub fn edge<I, S>(mut self, name: impl Into<String>, elements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.edges
            .push((name.into(), elements.into_iter().map(Into::into).collect()));
        self
    }

    pub fn budget(mut self, budget: Option<BigCost>) -> Self {
        self.budget = budget;
        self
    }

    /// Accept instances whose edges leave some label uncovered. Such
    /// instances are admitted only with this explicit marker.
    pub fn allow_uncoverable(mut self, allow: bool) -> Self {
        self.allow_uncoverable = allow;
        self
    }

    pub fn build(self) -> Result<OcpInstance, InstanceError> {
        let required = self.labels.len();
        let mut elements = Vec::with_capacity(required + self.extras.len());
        let mut element_index = HashMap::new();
        for (name, weight) in self.labels.into_iter().chain(self.extras) {
            if !is_valid_id(&name) {
                return Err(InstanceError::InvalidId(name));
            }
            if weight == 0 {
                return Err(InstanceError::ZeroWeight(name));
            }
            if element_index
                .insert(name.clone(), ElementIdx(elements.len()))
                .is_some()
            {
                return Err(InstanceError::DuplicateElement(name));
            }
            elements.push(Element { name, weight });
        }

        let universe = elements.len();
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_index = HashMap::new();
        let mut union = ElementSet::new(universe);
        for (name, members) in self.edges {
            if !is_valid_id(&name) {
                return Err(InstanceError::InvalidId(name));
            }
            if members.is_empty() {
                return Err(InstanceError::EmptyEdge(name));
            }
            let mut set = ElementSet::new(universe);
            let mut idxs = Vec::with_capacity(members.len());
            for m in members {
                let Some(&idx) = element_index.get(&m) else {
                    return Err(InstanceError::UnknownElement {
                        edge: name,
                        element: m,
                    });
                };
                if !set.insert(idx.0) {
                    return Err(InstanceError::RepeatedElement {
                        edge: name,
                        element: m,
                    });
                }
                idxs.push(idx);
            }
            union.union_with(&set);
            if edge_index.insert(name.clone(), EdgeIdx(edges.len())).is_some() {
                return Err(InstanceError::DuplicateEdge(name));
            }
            edges.push(Edge {
                name,
                elements: idxs,
                set,
            });
        }

        if let Some(unused) = (required..universe).find(|&i| !union.contains(i)) {
            return Err(InstanceError::UnusedElement(elements[unused].name.clone()));
        }
        let uncovered: Vec<String> = (0..required)
            .filter(|&i| !union.contains(i))
            .map(|i| elements[i].name.clone())
            .collect();
        let coverable = uncovered.is_empty();
        if !coverable && !self.allow_uncoverable {
            return Err(InstanceError::Uncoverable(uncovered));
        }

        Ok(OcpInstance {
            required_set: ElementSet::from_indices(universe, 0..required),
            required,
            elements,
            edges,
            budget: self.budget,
            element_index,
            edge_index,
            coverable,
        })
    }
}

/// An ordered covering instance. Immutable once built.
#[derive(Debug, Clone)]
pub struct OcpInstance {
    elements: Vec<Element>,
    required: usize,
    required_set: ElementSet,
    edges: Vec<Edge>,
    budget: Option<BigCost>,
    element_index: HashMap<String, ElementIdx>,
    edge_index: HashMap<String, EdgeIdx>,
    coverable: bool,
}

impl PartialEq for OcpInstance {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
            && self.required == other.required
            && self.edges == other.edges
            && self.budget == other.budget
    }
}

impl Eq for OcpInstance {}

impl OcpInstance {
    pub fn builder() -> InstanceBuilder {
        InstanceBuilder::new()
    }

    /// All elements: required labels first, then auxiliary elements.
    pub fn universe(&self) -> &[Element] {
        &self.elements
    }

    pub fn universe_size(&self) -> usize {
        self.elements.len()
    }

    pub fn required_labels(&self) -> &[Element] {
        &self.elements[..self.required]
    }

    pub fn extra_elements(&self) -> &[Element] {
        &self.elements[self.required..]
    }

    pub fn required_set(&self) -> &ElementSet {
        &self.required_set
    }

    pub fn is_required(&self, element: ElementIdx) -> bool {
        element.0 < self.required
    }

    pub fn element(&self, idx: ElementIdx) -> &Element {
        &self.elements[idx.0]
    }

    pub fn weight(&self, idx: ElementIdx) -> u64 {
        self.elements[idx.0].weight
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: EdgeIdx) -> Result<&Edge, InstanceError> {
        self.edges
            .get(idx.0)
            .ok_or(InstanceError::EdgeOutOfRange(idx.0))
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeIdx> {
        self.edge_index.get(name).copied()
    }

    pub fn element_by_name(&self, name: &str) -> Option<ElementIdx> {
        self.element_index.get(name).copied()
    }

    pub fn budget(&self) -> Option<&BigCost> {
        self.budget.as_ref()
    }

    /// Same instance with a different budget.
    pub fn with_budget(&self, budget: Option<BigCost>) -> OcpInstance {
        OcpInstance {
            budget,
            ..self.clone()
        }
    }

    /// Whether the union of all edges contains every required label.
    pub fn is_coverable(&self) -> bool {
        self.coverable
    }

    /// Sum of weights over a set, `None` on overflow.
    pub fn set_weight(&self, set: &ElementSet) -> Option<u64> {
        set.iter()
            .try_fold(0u64, |acc, i| acc.checked_add(self.elements[i].weight))
    }

    /// Weight of the part of `edge` outside `covered`, `None` on overflow.
    /// Zero exactly when the edge adds nothing.
    pub fn residual_weight(&self, edge: &Edge, covered: &ElementSet) -> Option<u64> {
        edge.set
            .iter_difference(covered)
            .try_fold(0u64, |acc, i| acc.checked_add(self.elements[i].weight))
    }

    /// Resolves edge ids into a covering.
    pub fn covering<S: AsRef<str>>(&self, names: &[S]) -> Result<Covering, InstanceError> {
        names
            .iter()
            .map(|n| {
                self.edge_by_name(n.as_ref())
                    .ok_or_else(|| InstanceError::UnknownEdge(n.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Covering::new)
    }

    pub fn edge_names(&self, covering: &Covering) -> Result<Vec<&str>, InstanceError> {
        covering
            .iter()
            .map(|e| self.edge(e).map(|edge| edge.name.as_str()))
            .collect()
    }
}

/// An ordered sequence of edges; repetitions are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Covering {
    pub sequence: Vec<EdgeIdx>,
}

impl Covering {
    pub fn new(sequence: Vec<EdgeIdx>) -> Self {
        Covering { sequence }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeIdx> + '_ {
        self.sequence.iter().copied()
    }
}

impl fmt::Display for ElementIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for EdgeIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
