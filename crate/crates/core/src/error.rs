use thiserror::Error;

use crate::morphism::Category;
use crate::tree::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: &'static str },
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("vertex 0 must be the root")]
    RootHasParent,
    #[error("vertex {vertex} has no parent but is not vertex 0")]
    ExtraRoot { vertex: VertexId },
    #[error("vertex {vertex} has parent {parent}, which does not precede it")]
    ParentNotEarlier { vertex: VertexId, parent: VertexId },
    #[error("vertex {vertex} breaks the preorder numbering")]
    NotPreorder { vertex: VertexId },
    #[error("record says n = {n} but lists {len} parents")]
    LengthMismatch { n: usize, len: usize },
    #[error("vertex {vertex} out of range for a tree with {len} vertices")]
    InvalidVertex { vertex: VertexId, len: usize },
    #[error("tree size {n} exceeds the enumeration budget of {max}")]
    Budget { n: usize, max: usize },
    #[error("graft anchor {vertex} appears more than once")]
    DuplicateAnchor { vertex: VertexId },
    #[error("{anchors} anchors but {forests} forests")]
    GraftArity { anchors: usize, forests: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("map has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("map value {value} at {at} is outside the target")]
    OutOfRange { at: VertexId, value: VertexId },
    #[error("map is not surjective: {missing} has no preimage")]
    NotSurjective { missing: VertexId },
    #[error("trees do not match: {0}")]
    Mismatch(&'static str),
    #[error("cannot compose {0:?} with {1:?}")]
    CategoryMismatch(Category, Category),
    #[error("not a valid {0:?} morphism: {1}")]
    Invalid(Category, &'static str),
    #[error("composite failed re-validation ({0}); this is a bug")]
    CompositeInvalid(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("vertex {vertex} is not in the marked set")]
    OutsideMarkedSet { vertex: VertexId },
    #[error("the source tree has a single vertex")]
    SingleVertex,
    #[error("the pruned bit is 0; gamma needs a morphism with i(v) != i_s(v)")]
    BitNotSet,
    #[error("{0:?} morphisms carry no embedding/surjection pair")]
    InertHalf(Category),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("target has {size} vertices, budget allows {max}")]
    TreeBudget { size: usize, max: usize },
    #[error("Hom-set exceeds the budget of {max} morphisms")]
    HomBudget { max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("Hom({0}) is empty; the arrow relation is degenerate")]
    EmptyHom(&'static str),
    #[error("need at least one color")]
    NoColors,
    #[error("precondition failed: {0}")]
    Precondition(String),
}
