use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::linalg::{cokernel_structure, IntMatrix};

/// Structure of the coinvariants `H₁(Σ_g;ℤ)_{Π_b}` and the numbers read off
/// from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvariantsReport {
    pub fiber_genus: usize,
    pub base_genus: usize,
    /// Free rank of the coinvariant group.
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    /// `g − rank/2`, defined when the rank is even.
    pub s: Option<usize>,
    /// Relative irregularity `rank/2`, defined when the rank is even.
    pub q_f: Option<usize>,
    /// First Betti number of the total space, `2b + rank`.
    pub b1: usize,
}

impl CoinvariantsReport {
    pub fn from_rank(fiber_genus: usize, base_genus: usize, rank: usize, torsion: Vec<BigInt>) -> Self {
        let even = rank.is_multiple_of(2);
        CoinvariantsReport {
            fiber_genus,
            base_genus,
            rank,
            torsion,
            s: even.then(|| fiber_genus - rank / 2),
            q_f: even.then_some(rank / 2),
            b1: 2 * base_genus + rank,
        }
    }
}

/// `ℤ^{2g} / ⟨(M − I)v⟩` over all images `M`, computed from the Smith form
/// of the matrices `M − I` placed side by side.
pub fn coinvariants(images: &[IntMatrix], g: usize, b: usize) -> CoinvariantsReport {
    let id = IntMatrix::identity(2 * g);
    let blocks: Vec<IntMatrix> = images.iter().filter(|m| !m.is_identity()).map(|m| m - &id).collect();
    let stacked = IntMatrix::hstack(2 * g, &blocks).expect("images are 2g x 2g");
    let c = cokernel_structure(&stacked);
    CoinvariantsReport::from_rank(g, b, c.free_rank, c.torsion)
}
