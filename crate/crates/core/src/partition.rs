//! Connected k-partitions, validation, and lower bounds on the min-max optimum.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;

use crate::error::{contract, BcpError, Result};
use crate::graph::{components, is_connected, Vertex, VertexSet, Weight, WeightedGraph};

/// Exact non-negative rational used for bounds and approximation ratios.
pub type Frac = Ratio<u128>;

/// A partition of `V` into nonempty classes that each induce a connected subgraph.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<VertexSet>,
}

impl Partition {
    /// Validates and wraps `classes`.
    pub fn new(g: &WeightedGraph, classes: Vec<VertexSet>) -> Result<Self> {
        let raw: Vec<Vec<Vertex>> = classes.iter().map(VertexSet::to_vec).collect();
        let report = validate(g, &raw, classes.len());
        if !report.is_valid() {
            return contract(format!("not a connected partition: {report}"));
        }
        Ok(Partition { classes })
    }

    /// Builds a partition from plain vertex lists.
    pub fn from_lists(g: &WeightedGraph, lists: &[Vec<Vertex>]) -> Result<Self> {
        let report = validate(g, lists, lists.len());
        if !report.is_valid() {
            return Err(BcpError::InvalidInput(format!(
                "not a connected partition: {report}"
            )));
        }
        let classes = lists.iter().map(|c| g.set_of(c.iter().copied())).collect();
        Ok(Partition { classes })
    }

    pub(crate) fn new_unchecked(classes: Vec<VertexSet>) -> Self {
        Partition { classes }
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn into_classes(self) -> Vec<VertexSet> {
        self.classes
    }

    /// Weight of the heaviest class, `w⁺`.
    pub fn max_weight(&self) -> Weight {
        self.classes.iter().map(VertexSet::weight).max().unwrap_or(0)
    }

    /// Weight of the lightest class, `w⁻`.
    pub fn min_weight(&self) -> Weight {
        self.classes.iter().map(VertexSet::weight).min().unwrap_or(0)
    }

    /// `w⁺` under an alternative weight vector (used after rescaling).
    pub fn max_weight_under(&self, weights: &[Weight]) -> Weight {
        self.classes
            .iter()
            .map(|c| c.weight_under(weights))
            .max()
            .unwrap_or(0)
    }

    /// Re-evaluates the same classes on a graph with identical topology.
    pub fn reweighted(&self, g: &WeightedGraph) -> Partition {
        Partition {
            classes: self
                .classes
                .iter()
                .map(|c| g.set_of(c.iter()))
                .collect(),
        }
    }

    /// Classes sorted by `(weight, smallest vertex)` ascending.
    pub fn sorted(&self) -> Vec<&VertexSet> {
        let mut out: Vec<&VertexSet> = self.classes.iter().collect();
        out.sort_by(|a, b| class_order(a, b));
        out
    }

    pub fn to_lists(&self) -> Vec<Vec<Vertex>> {
        self.sorted().into_iter().map(VertexSet::to_vec).collect()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.sorted()).finish()
    }
}

/// Ascending weight, ties broken by smallest member id.
pub fn class_order(a: &VertexSet, b: &VertexSet) -> Ordering {
    (a.weight(), a.min()).cmp(&(b.weight(), b.min()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongClassCount { expected: usize, found: usize },
    EmptyClass { class: usize },
    OutOfRange { class: usize, vertex: Vertex },
    Overlap { vertex: Vertex },
    Uncovered { vertex: Vertex },
    Disconnected { class: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongClassCount { expected, found } => {
                write!(f, "expected {expected} classes, found {found}")
            }
            Violation::EmptyClass { class } => write!(f, "class {class} is empty"),
            Violation::OutOfRange { class, vertex } => {
                write!(f, "class {class} names unknown vertex {vertex}")
            }
            Violation::Overlap { vertex } => write!(f, "vertex {vertex} is in several classes"),
            Violation::Uncovered { vertex } => write!(f, "vertex {vertex} is uncovered"),
            Violation::Disconnected { class } => write!(f, "class {class} is disconnected"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Reports every way `candidate` fails to be a connected `k`-partition of `g`.
pub fn validate(g: &WeightedGraph, candidate: &[Vec<Vertex>], k: usize) -> ValidationReport {
    let mut violations = Vec::new();
    if candidate.len() != k {
        violations.push(Violation::WrongClassCount {
            expected: k,
            found: candidate.len(),
        });
    }
    let mut owner: Vec<Option<usize>> = vec![None; g.n()];
    let mut overlapping = g.empty_set();
    for (i, class) in candidate.iter().enumerate() {
        if class.is_empty() {
            violations.push(Violation::EmptyClass { class: i });
        }
        let mut set = g.empty_set();
        for &v in class {
            if v >= g.n() {
                violations.push(Violation::OutOfRange { class: i, vertex: v });
                continue;
            }
            match owner[v] {
                Some(j) if j != i => overlapping.insert(g, v),
                _ => owner[v] = Some(i),
            }
            set.insert(g, v);
        }
        if !set.is_empty() && !is_connected(g, &set) {
            violations.push(Violation::Disconnected { class: i });
        }
    }
    violations.extend(overlapping.iter().map(|vertex| Violation::Overlap { vertex }));
    violations.extend(
        owner
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_none())
            .map(|(vertex, _)| Violation::Uncovered { vertex }),
    );
    ValidationReport { violations }
}

/// A connected 3-partition with `w(V₁) ≤ w(V₂) ≤ w(V₃)`.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderedPartition3 {
    classes: [VertexSet; 3],
}

impl OrderedPartition3 {
    /// Orders three classes, validating that they form a connected 3-partition.
    pub fn new(g: &WeightedGraph, classes: [VertexSet; 3]) -> Result<Self> {
        let p = Partition::new(g, classes.to_vec())?;
        order3(&p)
    }

    pub(crate) fn order_unchecked(mut classes: [VertexSet; 3]) -> Self {
        classes.sort_by(class_order);
        OrderedPartition3 { classes }
    }

    pub fn v1(&self) -> &VertexSet {
        &self.classes[0]
    }

    pub fn v2(&self) -> &VertexSet {
        &self.classes[1]
    }

    pub fn v3(&self) -> &VertexSet {
        &self.classes[2]
    }

    /// Class by 1-based index, matching `V₁, V₂, V₃`.
    pub fn class(&self, i: usize) -> &VertexSet {
        &self.classes[i - 1]
    }

    pub fn classes(&self) -> &[VertexSet; 3] {
        &self.classes
    }

    pub fn to_partition(&self) -> Partition {
        Partition::new_unchecked(self.classes.to_vec())
    }
}

impl fmt::Debug for OrderedPartition3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.classes.iter()).finish()
    }
}

/// Sorts the classes of a 3-partition by `(weight, smallest vertex)`.
pub fn order3(p: &Partition) -> Result<OrderedPartition3> {
    if p.k() != 3 {
        return contract(format!("order3 needs 3 classes, got {}", p.k()));
    }
    let c = p.classes();
    Ok(OrderedPartition3::order_unchecked([
        c[0].clone(),
        c[1].clone(),
        c[2].clone(),
    ]))
}

/// `w(G)/k`: no connected k-partition has a heaviest class below this.
pub fn average_bound(g: &WeightedGraph, k: usize) -> Frac {
    assert!(k >= 1 && k <= g.n(), "average_bound: k must lie in 1..=n");
    Frac::new(g.total_weight() as u128, k as u128)
}

/// Components of `G − u`, lightest first (ties by smallest vertex).
pub fn components_without(g: &WeightedGraph, u: Vertex) -> Vec<VertexSet> {
    let mut rest = g.full_set();
    rest.remove(g, u);
    if rest.is_empty() {
        return Vec::new();
    }
    let mut comps = components(g, &rest);
    comps.sort_by(class_order);
    comps
}

/// `w(u)` plus the weight of the `ℓ − k + 1` lightest components of `G − u`.
///
/// Whenever `u` is a cut vertex whose removal leaves `ℓ ≥ k − 1` components,
/// the class holding `u` must swallow at least that many whole components,
/// so this lower-bounds the min-max optimum.
pub fn cut_vertex_bound(g: &WeightedGraph, k: usize, u: Vertex) -> Result<Weight> {
    let comps = components_without(g, u);
    let ell = comps.len();
    if ell < 2 {
        return contract(format!("vertex {u} is not a cut vertex"));
    }
    if ell + 1 < k {
        return contract(format!(
            "G - {u} has {ell} components, fewer than k - 1 = {}",
            k - 1
        ));
    }
    let t = ell + 1 - k;
    Ok(g.weight(u) + comps[..t].iter().map(VertexSet::weight).sum::<Weight>())
}

/// A cut vertex together with the components of `G − u`, proving the
/// structure the min-max 3-partition loop stops on.
#[derive(Clone, PartialEq, Eq)]
pub struct StarCenterCertificate {
    pub center: Vertex,
    /// Components of `G − center`, weights non-decreasing; the last two are
    /// the classes `V₁` and `V₂` of the terminal 3-partition.
    pub components: Vec<VertexSet>,
}

impl StarCenterCertificate {
    /// `ℓ`, the number of components of `G − center`.
    pub fn ell(&self) -> usize {
        self.components.len()
    }
}

impl fmt::Debug for StarCenterCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StarCenterCertificate")
            .field("center", &self.center)
            .field("components", &self.components)
            .finish()
    }
}
