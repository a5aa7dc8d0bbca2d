//! Exact solvers for quorum planted motif search.
//!
//! Given n sequences over an alphabet Σ and parameters (l, d, q), find every
//! l-mer M such that at least q of the sequences contain a window within
//! Hamming distance d of M.
//!
//! ```
//! use qpms_core::model::{parse_fasta, validate_instance, Alphabet};
//! use qpms_core::solvers::{solve_sigma, SolverOptions};
//!
//! let dna = Alphabet::dna();
//! let seqs = parse_fasta(b">a\nACGTTGCA\n>b\nTTGCAACG\n>c\nCAACGTTG\n", &dna).unwrap();
//! let inst = validate_instance(dna.clone(), seqs, 3, 0, 3).unwrap();
//! let found = solve_sigma(&inst, &SolverOptions::default()).unwrap();
//! assert_eq!(found.motifs.render(&dna), "ACG\t3\nTTG\t3\n");
//! ```

pub mod bitpack;
pub mod consensus;
pub mod datagen;
pub mod error;
pub mod model;
pub mod neighborhood;
pub mod schedule;
pub mod solvers;

pub use error::{Error, Result};
pub use model::{Alphabet, Instance, Lmer, MotifSet, Sequence};
pub use solvers::{Algorithm, Solution, SolveStats, SolverOptions};
