//! Restricted deontic norms compiled into CP-nets with indifference.
//!
//! Norm files are parsed by [`norm_lang`], turned into a prescriptive
//! [`cpnet::CpNet`] by [`compiler`], and the ceteris-paribus preorder the net
//! induces over outcomes is materialised by [`preorder`]. [`reasoner`]
//! answers dominance, consistency, satisfaction, permission and
//! contrary-to-duty queries on top of those.
//!
//! ```
//! use normnet::{compile, parse_norms, PreferenceGraph};
//!
//! let norms = parse_norms("O(phi)\nO(psi IF not phi)\nO(not psi IF phi)").unwrap();
//! let net = compile(&norms).unwrap();
//! let graph = PreferenceGraph::build(&net).unwrap();
//! assert_eq!(graph.optimal_outcomes().len(), 1);
//! ```

pub mod cli;
pub mod compiler;
pub mod cpnet;
pub mod dot;
pub mod export;
pub mod norm_lang;
pub mod preorder;
pub mod reasoner;

pub use compiler::{compile, compile_with_warnings, CompileError, ConflictReport};
pub use cpnet::{CpNet, CptRowKind, FlipVerdict, Outcome};
pub use norm_lang::{format_norm, parse_norms, Atom, Condition, Literal, Norm, NormKind, NormSet, ParseError};
pub use preorder::{BuildOptions, Comparison, MergeMode, PreferenceGraph};
pub use reasoner::{
    check_norm, consistent, ctd_pairs, dominance, permission_status, DominanceVerdict, PermissionStatus,
};
