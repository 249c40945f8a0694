//! Alphabet and group arithmetic, distributions, and the method-of-types
//! toolkit: type enumeration, exact class sizes, and in-class
//! ranking/unranking. Everything here is a pure function on immutable
//! values.

mod alphabet;
mod distribution;
mod sequence;
mod typevector;

pub use alphabet::{group_op, Alphabet, GroupOp, Symbol};
pub use distribution::{binary_entropy, Distribution, SUM_TOL};
pub use sequence::{all_sequences, Sequence, SequenceIter};
pub use typevector::{
    enumerate_types, num_types, rank_in_class, unrank_in_class, TypeVector,
};

pub(crate) use typevector::{big_to_f64, find_type};
