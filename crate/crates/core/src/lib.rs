//! Ordered trees, their embeddings, rigid surjections and connections, and
//! exhaustive Ramsey-style searches over colorings of small Hom-sets.

pub mod cli;
pub mod config;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod export;
pub mod functors;
pub mod morphism;
pub mod search;
pub mod tree;

pub use config::{Budget, OutputFormat, RunConfig, SearchMode};
pub use error::{EnumError, FunctorError, MorphismError, SearchError, TreeError};
pub use morphism::{Category, Connection, PscHom, TreeMap};
pub use tree::{Forest, OrderedTree, VertexId};
