use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::error::Error;
use crate::linalg::IntMatrix;
use crate::surface::{CyclicCoverSpec, SurfacePresentation, Word};

/// The symplectic form on `H₁(Σ_g;ℤ)` in the basis `x₁,y₁,…,x_g,y_g`:
/// `g` diagonal copies of `[[0,1],[−1,0]]`.
pub fn symplectic_form(g: usize) -> IntMatrix {
    let n = 2 * g;
    let mut e = alloc::vec![0i64; n * n];
    for h in 0..g {
        e[(2 * h) * n + 2 * h + 1] = 1;
        e[(2 * h + 1) * n + 2 * h] = -1;
    }
    IntMatrix::from_i64(n, n, &e).expect("square form")
}

/// `Mᵀ J M = J`.
pub fn is_symplectic(m: &IntMatrix, g: usize) -> bool {
    if m.shape() != (2 * g, 2 * g) {
        return false;
    }
    let j = symplectic_form(g);
    &(&m.transpose() * &j) * m == j
}

/// Inverse of a symplectic matrix, `J⁻¹ Mᵀ J`. Only meaningful when `m`
/// is symplectic for the form of its size.
pub fn symplectic_inverse(m: &IntMatrix) -> IntMatrix {
    let j = symplectic_form(m.rows() / 2);
    &(&j.transpose() * &m.transpose()) * &j
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepViolation {
    Symplectic { generator: usize },
    Determinant { generator: usize },
    Relator,
}

impl fmt::Display for RepViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepViolation::Symplectic { generator } => write!(
                f,
                "image of {} does not preserve the symplectic form",
                crate::surface::generator_name(*generator)
            ),
            RepViolation::Determinant { generator } => {
                write!(f, "image of {} has determinant != 1", crate::surface::generator_name(*generator))
            }
            RepViolation::Relator => write!(f, "product of commutators is not the identity"),
        }
    }
}

/// Every invariant that failed, in generator order, relator last.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<RepViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<(), Error> {
        match self.violations.first() {
            None => Ok(()),
            Some(RepViolation::Symplectic { generator } | RepViolation::Determinant { generator }) => {
                Err(Error::SymplecticViolation { generator: *generator })
            }
            Some(RepViolation::Relator) => Err(Error::RelatorViolation),
        }
    }
}

fn check_shape(g: usize, count: usize, images: &[IntMatrix]) -> Result<(), Error> {
    if g == 0 {
        return Err(Error::Shape("fiber genus must be at least 1".into()));
    }
    if images.len() != count {
        return Err(Error::Shape(format!("expected {count} generator images, found {}", images.len())));
    }
    for (i, m) in images.iter().enumerate() {
        if m.shape() != (2 * g, 2 * g) {
            return Err(Error::Shape(format!(
                "image of {} is {}x{}, expected {}x{}",
                crate::surface::generator_name(i),
                m.rows(),
                m.cols(),
                2 * g,
                2 * g
            )));
        }
    }
    Ok(())
}

/// Checks a candidate homological monodromy of a genus-`g` bundle over a
/// genus-`b` surface. Shape problems are errors; invariant failures are
/// collected in the report.
pub fn validate_rep(g: usize, b: usize, images: &[IntMatrix]) -> Result<ValidationReport, Error> {
    if b == 0 {
        return Err(Error::Shape("base genus must be at least 1".into()));
    }
    check_shape(g, 2 * b, images)?;
    let mut report = ValidationReport::default();
    for (i, m) in images.iter().enumerate() {
        if !is_symplectic(m, g) {
            report.violations.push(RepViolation::Symplectic { generator: i });
        }
        if !m.det()?.is_one() {
            report.violations.push(RepViolation::Determinant { generator: i });
        }
    }
    // The inverse formula is only valid for symplectic images.
    if report.is_valid() {
        let inverses: Vec<IntMatrix> = images.iter().map(symplectic_inverse).collect();
        let pres = SurfacePresentation::new(b)?;
        if !evaluate(images, &inverses, 2 * g, pres.relator())?.is_identity() {
            report.violations.push(RepViolation::Relator);
        }
    }
    Ok(report)
}

fn evaluate(images: &[IntMatrix], inverses: &[IntMatrix], dim: usize, w: &Word) -> Result<IntMatrix, Error> {
    let mut acc = IntMatrix::identity(dim);
    for l in w.letters() {
        let m = if l.inverse { inverses.get(l.generator) } else { images.get(l.generator) };
        let m = m.ok_or(Error::GeneratorOutOfRange { index: l.generator, count: images.len() })?;
        acc = &acc * m;
    }
    Ok(acc)
}

/// Homological monodromy of a genus-`g` bundle over a genus-`b` surface: one
/// symplectic matrix per standard generator, satisfying the surface relator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticRep {
    fiber_genus: usize,
    base_genus: usize,
    images: Vec<IntMatrix>,
    inverses: Vec<IntMatrix>,
}

impl SymplecticRep {
    pub fn new(fiber_genus: usize, base_genus: usize, images: Vec<IntMatrix>) -> Result<Self, Error> {
        validate_rep(fiber_genus, base_genus, &images)?.into_result()?;
        let inverses = images.iter().map(symplectic_inverse).collect();
        Ok(SymplecticRep { fiber_genus, base_genus, images, inverses })
    }

    /// Trivial action.
    pub fn identity(fiber_genus: usize, base_genus: usize) -> Result<Self, Error> {
        let id = IntMatrix::identity(2 * fiber_genus);
        SymplecticRep::new(fiber_genus, base_genus, alloc::vec![id; 2 * base_genus])
    }

    pub fn fiber_genus(&self) -> usize {
        self.fiber_genus
    }

    pub fn base_genus(&self) -> usize {
        self.base_genus
    }

    pub fn images(&self) -> &[IntMatrix] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &IntMatrix {
        &self.images[generator]
    }

    pub fn inverse(&self, generator: usize) -> &IntMatrix {
        &self.inverses[generator]
    }

    /// Product of images along the word, left to right.
    pub fn evaluate_word(&self, w: &Word) -> Result<IntMatrix, Error> {
        evaluate(&self.images, &self.inverses, 2 * self.fiber_genus, w)
    }

    /// Generator-wise block sum `A_i ⊕ B_i`.
    pub fn direct_sum(&self, other: &SymplecticRep) -> Result<SymplecticRep, Error> {
        if self.base_genus != other.base_genus {
            return Err(Error::BaseMismatch { left: self.base_genus, right: other.base_genus });
        }
        let sum = |a: &[IntMatrix], b: &[IntMatrix]| -> Vec<IntMatrix> {
            a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect()
        };
        Ok(SymplecticRep {
            fiber_genus: self.fiber_genus + other.fiber_genus,
            base_genus: self.base_genus,
            images: sum(&self.images, &other.images),
            inverses: sum(&self.inverses, &other.inverses),
        })
    }

    /// Appends `2c` identity images: the monodromy after a fiber sum with a
    /// product bundle over a genus-`c` surface.
    pub fn extend_trivially(&self, c: usize) -> SymplecticRep {
        let id = IntMatrix::identity(2 * self.fiber_genus);
        let mut images = self.images.clone();
        let mut inverses = self.inverses.clone();
        images.extend(core::iter::repeat_n(id.clone(), 2 * c));
        inverses.extend(core::iter::repeat_n(id, 2 * c));
        SymplecticRep { fiber_genus: self.fiber_genus, base_genus: self.base_genus + c, images, inverses }
    }

    /// Images of the Schreier generators of `ker(h)`, in the order of
    /// [`crate::surface::schreier_generators`].
    pub fn restrict(&self, spec: &CyclicCoverSpec) -> Result<Vec<IntMatrix>, Error> {
        let pres = SurfacePresentation::new(self.base_genus)?;
        let (tr, gens) = crate::surface::schreier_generators_detailed(&pres, spec)?;
        let reps: Vec<IntMatrix> =
            tr.reps().iter().map(|w| self.evaluate_word(w)).collect::<Result<_, _>>()?;
        let rep_inverses: Vec<IntMatrix> = reps.iter().map(symplectic_inverse).collect();
        Ok(gens
            .iter()
            .map(|s| &(&reps[s.coset] * &self.images[s.generator]) * &rep_inverses[s.target])
            .collect())
    }
}

/// Where a generating-set representation came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverOrigin {
    /// Genus of the base that was covered.
    pub base_genus: usize,
    pub spec: CyclicCoverSpec,
}

/// Images of a generating set of a finite-index subgroup of the base group.
///
/// There is no relator to check; validity is inherited from the covered
/// representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSetRep {
    fiber_genus: usize,
    base_genus: usize,
    images: Vec<IntMatrix>,
    origin: CoverOrigin,
}

impl GeneratingSetRep {
    /// `base_genus` is the genus of the covering surface.
    pub fn new(
        fiber_genus: usize,
        base_genus: usize,
        images: Vec<IntMatrix>,
        origin: CoverOrigin,
    ) -> Result<Self, Error> {
        check_shape(fiber_genus, images.len(), &images)?;
        if let Some(i) = images.iter().position(|m| !is_symplectic(m, fiber_genus)) {
            return Err(Error::SymplecticViolation { generator: i });
        }
        Ok(GeneratingSetRep { fiber_genus, base_genus, images, origin })
    }

    pub fn fiber_genus(&self) -> usize {
        self.fiber_genus
    }

    pub fn base_genus(&self) -> usize {
        self.base_genus
    }

    pub fn images(&self) -> &[IntMatrix] {
        &self.images
    }

    pub fn origin(&self) -> &CoverOrigin {
        &self.origin
    }

    /// Always true: the relator is not checked on generating sets.
    pub fn relator_inherited(&self) -> bool {
        true
    }

    /// Image-wise block sum of two restrictions along the same cover.
    pub fn direct_sum(&self, other: &GeneratingSetRep) -> Result<GeneratingSetRep, Error> {
        if self.origin != other.origin || self.images.len() != other.images.len() {
            return Err(Error::GeneratingSetUnsupported("section sum of restrictions along different covers"));
        }
        Ok(GeneratingSetRep {
            fiber_genus: self.fiber_genus + other.fiber_genus,
            base_genus: self.base_genus,
            images: self.images.iter().zip(&other.images).map(|(a, b)| a.direct_sum(b)).collect(),
            origin: self.origin.clone(),
        })
    }
}
