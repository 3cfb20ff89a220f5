//! Quasipositivity of pretzel and braidzel surfaces.
//!
//! The crate covers exact braid-group computation ([`braid_core`]), the
//! braidzel surface model ([`braidzel`]), the isotopy rewrite moves with
//! replayable traces ([`moves`]), quasipositivity decisions ([`qp`]),
//! slice Euler characteristic bounds ([`slice`]), a classical Seifert-form
//! oracle ([`seifert_oracle`]) and the command-line front end ([`cli`]).

pub mod braid_core;
pub mod braidzel;
pub mod moves;
pub mod qp;
pub mod slice;
pub mod seifert_oracle;
pub mod cli;
