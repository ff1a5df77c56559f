//! Signature of a surface bundle over a surface from its homological
//! monodromy, via Meyer's signature cocycle on `Sp(2g, ℤ)`.
//!
//! For symplectic `A`, `B` let `V = {(x, y) : (A⁻¹ − I)x + (B − I)y = 0}`
//! and pair `(x₁,y₁)` with `(x₂,y₂)` by `(x₁ + y₁)ᵀ J (I − B) y₂`. The
//! cocycle `τ(A, B)` is the signature of the symmetrization of that pairing.
//! All arithmetic is over `ℚ`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::linalg::IntMatrix;
use crate::monodromy::{symplectic_form, symplectic_inverse, SymplecticRep};
use crate::surface::SurfacePresentation;

/// Global sign applied when pairing the cocycle with the fundamental class
/// of the base. The literature uses both conventions and no explicit
/// representation with nonzero signature is available to calibrate against.
pub const SIGNATURE_SIGN: i64 = -1;

/// Value of the Meyer cocycle; `|tau| ≤ 2g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CocycleValue(pub i64);

type Q = BigRational;

fn to_rational(m: &IntMatrix) -> Vec<Vec<Q>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(Q::from_integer).collect()).collect()
}

/// Basis of the right kernel of `rows` (each of length `ncols`).
fn kernel_basis(mut a: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = alloc::vec![Q::zero(); ncols];
            v[f] = Q::from_integer(BigInt::from(1));
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
fn symmetric_signature(mut s: Vec<Vec<Q>>) -> i64 {
    let n = s.len();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut sig = 0i64;
    while !alive.is_empty() {
        if let Some(k) = alive.iter().position(|&i| !s[i][i].is_zero()) {
            let p = alive.remove(k);
            let d = s[p][p].clone();
            sig += if d.is_positive() { 1 } else { -1 };
            for &j in &alive {
                if s[j][p].is_zero() {
                    continue;
                }
                let f = &s[j][p] / &d;
                for &l in &alive {
                    let t = &f * &s[p][l];
                    s[j][l] -= t;
                }
            }
            continue;
        }
        let pair = alive
            .iter()
            .enumerate()
            .find_map(|(ki, &i)| alive[ki + 1..].iter().find(|&&j| !s[i][j].is_zero()).map(|&j| (i, j)));
        let Some((i, j)) = pair else { break };
        // Replace e_i by e_i + e_j; the new diagonal entry is 2·s_ij.
        for &l in &alive {
            let t = s[j][l].clone();
            s[i][l] += t;
        }
        for &l in &alive {
            let t = s[l][j].clone();
            s[l][i] += t;
        }
    }
    sig
}

fn check_pair(a: &IntMatrix, b: &IntMatrix, g: usize) -> Result<(), Error> {
    for m in [a, b] {
        if m.shape() != (2 * g, 2 * g) {
            return Err(Error::DimensionMismatch { op: "pair in the cocycle", left: m.shape(), right: (2 * g, 2 * g) });
        }
    }
    Ok(())
}

/// Meyer cocycle `τ(A, B)` for symplectic `2g × 2g` matrices.
pub fn meyer_tau(a: &IntMatrix, b: &IntMatrix, g: usize) -> Result<CocycleValue, Error> {
    check_pair(a, b, g)?;
    let n = 2 * g;
    let id = IntMatrix::identity(n);
    if a.is_identity() || b.is_identity() {
        return Ok(CocycleValue(0));
    }
    let left = to_rational(&(&symplectic_inverse(a) - &id));
    let right = to_rational(&(b - &id));
    let system: Vec<Vec<Q>> = left.into_iter().zip(right).map(|(mut l, r)| {
        l.extend(r);
        l
    }).collect();
    let basis = kernel_basis(system, 2 * n);
    if basis.is_empty() {
        return Ok(CocycleValue(0));
    }
    let w = to_rational(&(&symplectic_form(g) * &(&id - b)));
    // w · y for each basis vector, and x + y.
    let wy: Vec<Vec<Q>> = basis
        .iter()
        .map(|v| (0..n).map(|i| (0..n).fold(Q::zero(), |acc, k| acc + &w[i][k] * &v[n + k])).collect())
        .collect();
    let xy: Vec<Vec<Q>> = basis.iter().map(|v| (0..n).map(|i| &v[i] + &v[n + i]).collect()).collect();
    let k = basis.len();
    let pairing: Vec<Vec<Q>> = (0..k)
        .map(|i| (0..k).map(|j| xy[i].iter().zip(&wy[j]).fold(Q::zero(), |acc, (p, q)| acc + p * q)).collect())
        .collect();
    let sym: Vec<Vec<Q>> =
        (0..k).map(|i| (0..k).map(|j| &pairing[i][j] + &pairing[j][i]).collect()).collect();
    Ok(CocycleValue(symmetric_signature(sym)))
}

/// Signature of the total space: the cocycle evaluated on the fundamental
/// class of the base, written through the relator letters `l₁ ⋯ l_{4b}` as
/// `SIGNATURE_SIGN · Σ_j τ(l₁⋯l_j, l_{j+1})`.
pub fn bundle_signature(rep: &SymplecticRep) -> Result<i64, Error> {
    let g = rep.fiber_genus();
    let pres = SurfacePresentation::new(rep.base_genus())?;
    let letters: Vec<&IntMatrix> = pres
        .relator()
        .letters()
        .iter()
        .map(|l| if l.inverse { rep.inverse(l.generator) } else { rep.image(l.generator) })
        .collect();
    let mut prefix = letters[0].clone();
    let mut total = 0i64;
    for next in &letters[1..] {
        total += meyer_tau(&prefix, next, g)?.0;
        prefix = &prefix * next;
    }
    if !prefix.is_identity() {
        return Err(Error::RelatorViolation);
    }
    Ok(SIGNATURE_SIGN * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::{is_symplectic, kodaira_thurston_q, product_block, section_sum, trefoil_block};
    use proptest::prelude::*;

    /// Product of symplectic transvections `u ↦ u ± ω(u, v) v`.
    fn random_symplectic(g: usize, steps: &[(Vec<i64>, bool)]) -> IntMatrix {
        let n = 2 * g;
        let j = symplectic_form(g);
        let mut m = IntMatrix::identity(n);
        for (v, neg) in steps {
            let v = IntMatrix::from_i64(n, 1, &v[..n]).unwrap();
            let outer = &(&v * &v.transpose()) * &j;
            let t = if *neg { &IntMatrix::identity(n) + &outer } else { &IntMatrix::identity(n) - &outer };
            m = &m * &t;
        }
        assert!(is_symplectic(&m, g));
        m
    }

    fn steps() -> impl Strategy<Value = Vec<(Vec<i64>, bool)>> {
        proptest::collection::vec((proptest::collection::vec(-1i64..=1, 4), any::<bool>()), 1..5)
    }

    #[test]
    fn identity_pair_vanishes() {
        for g in 1..=3 {
            let id = IntMatrix::identity(2 * g);
            assert_eq!(meyer_tau(&id, &id, g).unwrap(), CocycleValue(0));
        }
    }

    #[test]
    fn signature_of_indefinite_forms() {
        let q = |x: i64| Q::from_integer(BigInt::from(x));
        // Hyperbolic plane.
        assert_eq!(symmetric_signature(alloc::vec![alloc::vec![q(0), q(1)], alloc::vec![q(1), q(0)]]), 0);
        assert_eq!(symmetric_signature(alloc::vec![alloc::vec![q(2), q(1)], alloc::vec![q(1), q(2)]]), 2);
        assert_eq!(symmetric_signature(alloc::vec![alloc::vec![q(-1), q(0)], alloc::vec![q(0), q(0)]]), -1);
    }

    #[test]
    fn elliptic_pairs_are_nonzero() {
        // τ detects rotation: the order-6 element paired with itself.
        let t = crate::monodromy::trefoil_matrix();
        let v = meyer_tau(&t, &t, 1).unwrap().0;
        assert!(v.abs() <= 2);
        assert_ne!(v, 0);
    }

    #[test]
    fn named_blocks_have_zero_signature() {
        for b in [1, 2, 9] {
            for x in [product_block(2, b), trefoil_block(b), kodaira_thurston_q(b)] {
                assert_eq!(bundle_signature(x.unwrap().explicit_rep().unwrap()).unwrap(), 0);
            }
        }
    }

    #[test]
    fn section_sum_is_additive() {
        let a = trefoil_block(2).unwrap();
        let b = kodaira_thurston_q(2).unwrap();
        let s = section_sum(&a, &b).unwrap();
        let sig = |x: &crate::monodromy::BundleSpec| bundle_signature(x.explicit_rep().unwrap()).unwrap();
        assert_eq!(sig(&s), sig(&a) + sig(&b));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn inverse_pairs_vanish(g in 1usize..=2, s in steps()) {
            let a = random_symplectic(g, &s);
            prop_assert_eq!(meyer_tau(&a, &symplectic_inverse(&a), g).unwrap(), CocycleValue(0));
        }

        #[test]
        fn cocycle_identity(g in 1usize..=2, s1 in steps(), s2 in steps(), s3 in steps()) {
            let (a, b, c) = (random_symplectic(g, &s1), random_symplectic(g, &s2), random_symplectic(g, &s3));
            let lhs = meyer_tau(&a, &b, g).unwrap().0 + meyer_tau(&(&a * &b), &c, g).unwrap().0;
            let rhs = meyer_tau(&a, &(&b * &c), g).unwrap().0 + meyer_tau(&b, &c, g).unwrap().0;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn conjugation_invariance(g in 1usize..=2, s1 in steps(), s2 in steps(), s3 in steps()) {
            let (a, b, h) = (random_symplectic(g, &s1), random_symplectic(g, &s2), random_symplectic(g, &s3));
            let hi = symplectic_inverse(&h);
            let conj = |m: &IntMatrix| &(&h * m) * &hi;
            prop_assert_eq!(meyer_tau(&conj(&a), &conj(&b), g).unwrap(), meyer_tau(&a, &b, g).unwrap());
        }

        #[test]
        fn bounded_by_dimension(g in 1usize..=2, s1 in steps(), s2 in steps()) {
            let (a, b) = (random_symplectic(g, &s1), random_symplectic(g, &s2));
            prop_assert!(meyer_tau(&a, &b, g).unwrap().0.unsigned_abs() as usize <= 2 * g);
        }
    }
}
