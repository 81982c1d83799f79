//! Text front end for dynamic equilibrium logic on finite traces: concrete
//! syntax for formulas, traces, and temporal logic programs, plus the
//! telingo `&del` bridge. The binary in this package wires these onto the
//! core library's semantics, translation, and enumeration.

pub mod parser;
pub mod program_text;
pub mod telingo;
pub mod trace_text;
