//! Closed orientable surface groups and generators for kernels of maps onto
//! finite cyclic groups.
//!
//! Generators of the genus-`h` presentation are indexed `0..2h` in the order
//! `a₁, b₁, a₂, b₂, …`, so `a_i` has index `2(i-1)` and `b_i` index `2i-1`.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn inv(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// Name of generator `index` in the standard presentation (`a1`, `b1`, …).
pub fn generator_name(index: usize) -> String {
    let handle = index / 2 + 1;
    if index.is_multiple_of(2) {
        format!("a{handle}")
    } else {
        format!("b{handle}")
    }
}

/// Inverse of [`generator_name`].
pub fn parse_generator_name(name: &str) -> Option<usize> {
    let (kind, rest) = name.split_at_checked(1)?;
    let handle: usize = rest.parse().ok()?;
    if handle == 0 || rest.starts_with('0') || rest.starts_with('+') {
        return None;
    }
    match kind {
        "a" => Some(2 * (handle - 1)),
        "b" => Some(2 * (handle - 1) + 1),
        _ => None,
    }
}

/// A word in the generators, freely reduced as letters are appended.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// `g^k` for a single generator.
    pub fn power(generator: usize, k: i64) -> Self {
        let l = if k < 0 { Letter::inv(generator) } else { Letter::new(generator) };
        Word { letters: alloc::vec![l; k.unsigned_abs() as usize] }
    }

    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverted()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.letters.iter().filter(|l| l.generator == generator).map(|l| l.exponent()).sum()
    }

    /// Exponent sums of every generator `0..count`: the image in the
    /// abelianization.
    pub fn abelianize(&self, count: usize) -> Vec<i64> {
        let mut v = alloc::vec![0; count];
        for l in &self.letters {
            v[l.generator] += l.exponent();
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", generator_name(l.generator))?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Standard presentation `⟨a₁,b₁,…,a_h,b_h | [a₁,b₁]⋯[a_h,b_h]⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfacePresentation {
    genus: usize,
    relator: Word,
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Result<Self, Error> {
        if genus == 0 {
            return Err(Error::InvalidArgument("surface genus must be at least 1".into()));
        }
        let mut letters = Vec::with_capacity(4 * genus);
        for i in 0..genus {
            let (a, b) = (2 * i, 2 * i + 1);
            letters.extend([Letter::new(a), Letter::new(b), Letter::inv(a), Letter::inv(b)]);
        }
        Ok(SurfacePresentation { genus, relator: Word { letters } })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    pub fn relator(&self) -> &Word {
        &self.relator
    }
}

/// A surjection `Π_h → ℤ/n`, given by the residues of the standard generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicCoverSpec {
    degree: usize,
    images: Vec<usize>,
}

impl CyclicCoverSpec {
    /// Residues are reduced mod `degree`. Degree 1 is the trivial cover.
    pub fn new(degree: usize, images: Vec<i64>) -> Result<Self, Error> {
        if degree == 0 {
            return Err(Error::InvalidSpec("cover degree must be positive".into()));
        }
        let n = degree as i64;
        let images: Vec<usize> = images.into_iter().map(|x| x.rem_euclid(n) as usize).collect();
        let g = images.iter().fold(degree, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(Error::InvalidSpec(format!(
                "images generate a subgroup of index {g} in Z/{degree}; the map is not onto"
            )));
        }
        Ok(CyclicCoverSpec { degree, images })
    }

    /// Sends generator `index` to 1 and every other generator to 0.
    pub fn single_generator(degree: usize, generator_count: usize, index: usize) -> Result<Self, Error> {
        if index >= generator_count {
            return Err(Error::GeneratorOutOfRange { index, count: generator_count });
        }
        let mut images = alloc::vec![0; generator_count];
        images[index] = 1;
        CyclicCoverSpec::new(degree, images)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of a word in `ℤ/n`.
    pub fn evaluate(&self, w: &Word) -> usize {
        let n = self.degree as i64;
        let s: i64 = w
            .letters()
            .iter()
            .map(|l| l.exponent() * self.images[l.generator] as i64)
            .sum();
        s.rem_euclid(n) as usize
    }

    fn check_against(&self, pres: &SurfacePresentation) -> Result<(), Error> {
        if self.images.len() != pres.generator_count() {
            return Err(Error::InvalidSpec(format!(
                "{} generator images for a genus-{} presentation",
                self.images.len(),
                pres.genus()
            )));
        }
        debug_assert_eq!(self.evaluate(pres.relator()), 0);
        Ok(())
    }
}

impl fmt::Display for CyclicCoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {} (", self.degree)?;
        let mut first = true;
        for (i, &r) in self.images.iter().enumerate() {
            if r == 0 {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}->{}", generator_name(i), r)?;
        }
        write!(f, ")")
    }
}

/// Genus of the `n`-fold unramified cover of a genus-`b` surface.
pub fn cover_genus(n: usize, b: usize) -> usize {
    n * (b - 1) + 1
}

/// A prefix-closed set of coset representatives for `ker(h)`, indexed by
/// residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    reps: Vec<Word>,
}

impl Transversal {
    /// Powers `t⁰,…,t^{n−1}` of the first generator whose image is a unit
    /// mod `n`; when no single image is a unit, a breadth-first tree over
    /// positive letters in generator order.
    pub fn new(spec: &CyclicCoverSpec) -> Self {
        let n = spec.degree;
        if let Some(t) = spec.images.iter().position(|&x| x.gcd(&n) == 1) {
            let c = spec.images[t];
            let mut reps = alloc::vec![Word::empty(); n];
            for i in 0..n {
                reps[(i * c) % n] = Word::power(t, i as i64);
            }
            return Transversal { reps };
        }
        let mut reps: Vec<Option<Word>> = alloc::vec![None; n];
        reps[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(r) = queue.pop_front() {
            for (g, &c) in spec.images.iter().enumerate() {
                let next = (r + c) % n;
                if reps[next].is_none() {
                    let mut w = reps[r].clone().unwrap();
                    w.push(Letter::new(g));
                    reps[next] = Some(w);
                    queue.push_back(next);
                }
            }
        }
        Transversal { reps: reps.into_iter().map(|w| w.expect("surjective spec")).collect() }
    }

    /// Representative of the coset with the given residue.
    pub fn rep(&self, residue: usize) -> &Word {
        &self.reps[residue]
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }
}

/// One Reidemeister–Schreier generator `r · x · rep(h(r x))⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGenerator {
    pub coset: usize,
    pub generator: usize,
    pub target: usize,
    pub word: Word,
}

/// Schreier generators of `ker(h)`, skipping those that are freely trivial.
///
/// Ordered by coset residue, then generator index.
pub fn schreier_generators_detailed(
    pres: &SurfacePresentation,
    spec: &CyclicCoverSpec,
) -> Result<(Transversal, Vec<SchreierGenerator>), Error> {
    spec.check_against(pres)?;
    let n = spec.degree;
    let tr = Transversal::new(spec);
    let mut out = Vec::new();
    for coset in 0..n {
        for generator in 0..pres.generator_count() {
            let target = (coset + spec.images[generator]) % n;
            let mut w = tr.rep(coset).clone();
            w.push(Letter::new(generator));
            let w = w.concat(&tr.rep(target).inverse());
            if !w.is_empty() {
                out.push(SchreierGenerator { coset, generator, target, word: w });
            }
        }
    }
    Ok((tr, out))
}

pub fn schreier_generators(pres: &SurfacePresentation, spec: &CyclicCoverSpec) -> Result<Vec<Word>, Error> {
    let (_, gens) = schreier_generators_detailed(pres, spec)?;
    Ok(gens.into_iter().map(|g| g.word).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cokernel_structure, IntMatrix};
    use proptest::prelude::*;

    #[test]
    fn cover_genera() {
        assert_eq!(cover_genus(6, 9), 49);
        assert_eq!(cover_genus(1, 7), 7);
        assert_eq!(cover_genus(2, 2), 3);
    }

    #[test]
    fn presentation_shape() {
        let p = SurfacePresentation::new(3).unwrap();
        assert_eq!(p.generator_count(), 6);
        assert_eq!(p.relator().len(), 12);
        for g in 0..6 {
            assert_eq!(p.relator().exponent_sum(g), 0);
        }
        assert!(SurfacePresentation::new(0).is_err());
    }

    #[test]
    fn generator_names_round_trip() {
        for i in 0..40 {
            assert_eq!(parse_generator_name(&generator_name(i)), Some(i));
        }
        assert_eq!(parse_generator_name("a0"), None);
        assert_eq!(parse_generator_name("c1"), None);
        assert_eq!(parse_generator_name("a01"), None);
        assert_eq!(parse_generator_name(""), None);
    }

    #[test]
    fn words_reduce_freely() {
        let w = Word::from_letters([Letter::new(0), Letter::inv(0)]);
        assert!(w.is_empty());
        let w = Word::from_letters([Letter::new(1), Letter::new(0), Letter::inv(0), Letter::new(2)]);
        assert_eq!(w.letters(), &[Letter::new(1), Letter::new(2)]);
        assert!(w.concat(&w.inverse()).is_empty());
    }

    #[test]
    fn surjectivity_is_enforced() {
        assert!(matches!(CyclicCoverSpec::new(6, alloc::vec![2, 4, 0, 0]), Err(Error::InvalidSpec(_))));
        assert!(CyclicCoverSpec::new(6, alloc::vec![2, 3, 0, 0]).is_ok());
        assert!(CyclicCoverSpec::new(0, alloc::vec![1]).is_err());
    }

    #[test]
    fn trivial_cover_returns_ambient_generators() {
        let p = SurfacePresentation::new(2).unwrap();
        let spec = CyclicCoverSpec::new(1, alloc::vec![0; 4]).unwrap();
        let gens = schreier_generators(&p, &spec).unwrap();
        let expect: Vec<Word> = (0..4).map(|g| Word::power(g, 1)).collect();
        assert_eq!(gens, expect);
    }

    #[test]
    fn torus_double_cover() {
        let p = SurfacePresentation::new(1).unwrap();
        let spec = CyclicCoverSpec::new(2, alloc::vec![1, 0]).unwrap();
        let gens = schreier_generators(&p, &spec).unwrap();
        let a2 = Word::power(0, 2);
        let b = Word::power(1, 1);
        let aba = Word::from_letters([Letter::new(0), Letter::new(1), Letter::inv(0)]);
        assert_eq!(gens.len(), 3);
        for w in [a2, b, aba] {
            assert!(gens.contains(&w), "missing {w}");
        }
    }

    #[test]
    fn six_fold_cover_of_genus_nine() {
        let p = SurfacePresentation::new(9).unwrap();
        let spec = CyclicCoverSpec::single_generator(6, 18, 0).unwrap();
        let gens = schreier_generators(&p, &spec).unwrap();
        assert_eq!(gens.len(), 2 * 9 * 6 - 6 + 1);
        for w in &gens {
            assert_eq!(w.exponent_sum(0) % 6, 0);
            assert_eq!(spec.evaluate(w), 0);
        }
    }

    #[test]
    fn wrong_image_count_rejected() {
        let p = SurfacePresentation::new(2).unwrap();
        let spec = CyclicCoverSpec::new(3, alloc::vec![1, 0]).unwrap();
        assert!(matches!(schreier_generators(&p, &spec), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn non_unit_images_use_tree_transversal() {
        let p = SurfacePresentation::new(1).unwrap();
        let spec = CyclicCoverSpec::new(6, alloc::vec![2, 3]).unwrap();
        let (tr, gens) = schreier_generators_detailed(&p, &spec).unwrap();
        for (r, w) in tr.reps().iter().enumerate() {
            assert_eq!(spec.evaluate(w), r);
        }
        assert_eq!(gens.len(), 2 * 6 - 6 + 1);
    }

    /// Index of the lattice spanned by `vectors` in `ℤ^dim`, if full rank.
    fn lattice_index(vectors: &[Vec<i64>], dim: usize) -> Option<i64> {
        let cols = vectors.len();
        let mut e = alloc::vec![0; dim * cols];
        for (j, v) in vectors.iter().enumerate() {
            for i in 0..dim {
                e[i * cols + j] = v[i];
            }
        }
        let c = cokernel_structure(&IntMatrix::from_i64(dim, cols, &e).unwrap());
        if c.free_rank > 0 {
            return None;
        }
        Some(c.torsion.iter().map(|t| i64::try_from(t).unwrap()).product())
    }

    proptest! {
        #[test]
        fn schreier_words_lie_in_kernel_and_span_it(
            genus in 1usize..=3,
            degree in 1usize..=6,
            raw in proptest::collection::vec(0i64..6, 6),
        ) {
            let p = SurfacePresentation::new(genus).unwrap();
            let mut images: Vec<i64> = raw[..2 * genus].to_vec();
            images[0] = 1;
            let spec = CyclicCoverSpec::new(degree, images).unwrap();
            let gens = schreier_generators(&p, &spec).unwrap();
            prop_assert_eq!(gens.len(), 2 * genus * degree - degree + 1);
            for w in &gens {
                prop_assert_eq!(spec.evaluate(w), 0);
            }
            // The abelianized generators span the kernel of Z^{2h} -> Z/n,
            // which has index n.
            let ab: Vec<Vec<i64>> = gens.iter().map(|w| w.abelianize(2 * genus)).collect();
            prop_assert_eq!(lattice_index(&ab, 2 * genus), Some(degree as i64));
        }
    }
}
