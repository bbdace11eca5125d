//! Exact combinatorics of finite posets: signed linearization counts in the
//! group ring ℕ{1,ζ}, closed forms for lexicographic sums, order-chromatic
//! counting polynomials with their denominator-prime guarantees, order
//! strengthenings that chain a complement, and the free-ring expansion whose
//! coefficients those chromatic counts reproduce.
//!
//! Everything is exact (big integers and rationals); every closed form has a
//! brute-force oracle next to it.

pub mod hochschild;
pub mod io;
pub mod lexsum;
pub mod linearization;
pub mod orderchrom;
pub mod polynomials;
pub mod poset;
pub mod strengthen;

pub use linearization::{
    enumerate_linearizations, group_ring_l, group_ring_l_ideal_dp, GroupRingElement,
};
pub use poset::{ConstraintSystem, Poset};
