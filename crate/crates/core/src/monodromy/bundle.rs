use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use core::fmt;

use super::coinvariants::{coinvariants, CoinvariantsReport};
use super::rep::{CoverOrigin, GeneratingSetRep, SymplecticRep};
use crate::error::Error;
use crate::linalg::IntMatrix;
use crate::surface::{cover_genus, CyclicCoverSpec};

/// Closed range of possible coinvariant ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RankInterval {
    pub lo: usize,
    pub hi: usize,
}

impl RankInterval {
    pub fn exact(rank: usize) -> Self {
        RankInterval { lo: rank, hi: rank }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: usize) -> bool {
        self.lo <= r && r <= self.hi
    }

    /// Even ranks in the interval, ascending.
    pub fn even_values(&self) -> impl Iterator<Item = usize> {
        (self.lo..=self.hi).filter(|r| r % 2 == 0)
    }

    pub fn shift(&self, by: usize) -> Self {
        RankInterval { lo: self.lo + by, hi: self.hi + by }
    }
}

impl core::ops::Add for RankInterval {
    type Output = RankInterval;
    fn add(self, rhs: RankInterval) -> RankInterval {
        RankInterval { lo: self.lo + rhs.lo, hi: self.hi + rhs.hi }
    }
}

impl fmt::Display for RankInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// A bundle known only through invariants asserted elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredBlock {
    pub fiber_genus: usize,
    pub base_genus: usize,
    pub coinv_rank: RankInterval,
}

impl DeclaredBlock {
    pub fn new(fiber_genus: usize, base_genus: usize, coinv_rank: RankInterval) -> Result<Self, Error> {
        if fiber_genus == 0 || base_genus == 0 {
            return Err(Error::InvalidArgument("declared genera must be positive".into()));
        }
        if coinv_rank.lo > coinv_rank.hi || coinv_rank.hi > 2 * fiber_genus {
            return Err(Error::InvalidArgument(format!(
                "coinvariant rank interval {coinv_rank} not within [0, {}]",
                2 * fiber_genus
            )));
        }
        Ok(DeclaredBlock { fiber_genus, base_genus, coinv_rank })
    }
}

/// Tracked signature of a bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Signature {
    Exact(i64),
    Range { lo: i64, hi: i64 },
    Unknown,
}

impl Signature {
    fn bounds(self) -> Option<(i64, i64)> {
        match self {
            Signature::Exact(s) => Some((s, s)),
            Signature::Range { lo, hi } => Some((lo, hi)),
            Signature::Unknown => None,
        }
    }

    fn from_bounds(lo: i64, hi: i64) -> Self {
        if lo == hi {
            Signature::Exact(lo)
        } else {
            Signature::Range { lo, hi }
        }
    }

    pub fn scale(self, n: usize) -> Signature {
        let n = n as i64;
        match self.bounds() {
            Some((lo, hi)) => Signature::from_bounds(lo * n, hi * n),
            None => Signature::Unknown,
        }
    }

    pub fn exact(self) -> Option<i64> {
        match self {
            Signature::Exact(s) => Some(s),
            _ => None,
        }
    }
}

/// Novikov additivity.
impl core::ops::Add for Signature {
    type Output = Signature;

    fn add(self, other: Signature) -> Signature {
        match (self.bounds(), other.bounds()) {
            (Some((a, b)), Some((c, d))) => Signature::from_bounds(a + c, b + d),
            _ => Signature::Unknown,
        }
    }
}

impl From<Option<i64>> for Signature {
    fn from(v: Option<i64>) -> Self {
        v.map_or(Signature::Unknown, Signature::Exact)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Exact(s) => write!(f, "{s}"),
            Signature::Range { lo, hi } => write!(f, "[{lo}, {hi}]"),
            Signature::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleContent {
    Explicit(SymplecticRep),
    GeneratingSet(GeneratingSetRep),
    Declared(DeclaredBlock),
}

/// Parity of the coinvariant rank of the declared genus-3 block, which
/// decides whether the parity-repair block is inserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A named leaf of a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Leaf {
    Product { fiber_genus: usize, base_genus: usize },
    Trefoil { base_genus: usize },
    KodairaThurston { base_genus: usize },
    Ekkos,
    Explicit { rep: SymplecticRep, signature: Option<i64>, has_zero_section: bool },
    Declared { block: DeclaredBlock, signature: i64, has_zero_section: bool },
    GeneratingSet { rep: GeneratingSetRep, signature: Option<i64>, has_zero_section: bool },
}

/// How a bundle was built. Evaluating the tree rebuilds the bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Leaf(Leaf),
    SectionSum(Box<Provenance>, Box<Provenance>),
    FiberSumProduct { input: Box<Provenance>, c: usize },
    Cover { input: Box<Provenance>, spec: CyclicCoverSpec },
}

impl Provenance {
    pub fn leaf_count(&self) -> usize {
        match self {
            Provenance::Leaf(_) => 1,
            Provenance::SectionSum(a, b) => a.leaf_count() + b.leaf_count(),
            Provenance::FiberSumProduct { input, .. } | Provenance::Cover { input, .. } => input.leaf_count(),
        }
    }

    /// Rebuilds the bundle bottom-up. Errors name the failing node by its
    /// path from the root (`root.left.input`, …).
    pub fn evaluate(&self) -> Result<BundleSpec, Error> {
        self.evaluate_at(&mut String::from("root"))
    }

    fn evaluate_at(&self, path: &mut String) -> Result<BundleSpec, Error> {
        let at = |path: &str, e: Error| match e {
            e @ Error::Node { .. } => e,
            e => Error::Node { path: path.into(), source: Box::new(e) },
        };
        let child = |p: &Provenance, name: &str, path: &mut String| {
            let len = path.len();
            path.push('.');
            path.push_str(name);
            let r = p.evaluate_at(path);
            path.truncate(len);
            r
        };
        let result = match self {
            Provenance::Leaf(leaf) => leaf.build(),
            Provenance::SectionSum(a, b) => {
                let x = child(a, "left", path)?;
                let y = child(b, "right", path)?;
                section_sum(&x, &y)
            }
            Provenance::FiberSumProduct { input, c } => {
                let x = child(input, "input", path)?;
                fiber_sum_with_product(&x, *c)
            }
            Provenance::Cover { input, spec } => {
                let x = child(input, "input", path)?;
                restrict_to_cover(&x, spec)
            }
        };
        result.map_err(|e| at(path, e))
    }
}

impl Leaf {
    pub fn build(&self) -> Result<BundleSpec, Error> {
        match self {
            Leaf::Product { fiber_genus, base_genus } => product_block(*fiber_genus, *base_genus),
            Leaf::Trefoil { base_genus } => trefoil_block(*base_genus),
            Leaf::KodairaThurston { base_genus } => kodaira_thurston_q(*base_genus),
            Leaf::Ekkos => Ok(declared_ekkos()),
            Leaf::Explicit { rep, signature, has_zero_section } => Ok(BundleSpec {
                content: BundleContent::Explicit(rep.clone()),
                signature: (*signature).into(),
                has_zero_section: *has_zero_section,
                provenance: Provenance::Leaf(self.clone()),
            }),
            Leaf::Declared { block, signature, has_zero_section } => Ok(BundleSpec {
                content: BundleContent::Declared(block.clone()),
                signature: Signature::Exact(*signature),
                has_zero_section: *has_zero_section,
                provenance: Provenance::Leaf(self.clone()),
            }),
            Leaf::GeneratingSet { rep, signature, has_zero_section } => Ok(BundleSpec {
                content: BundleContent::GeneratingSet(rep.clone()),
                signature: (*signature).into(),
                has_zero_section: *has_zero_section,
                provenance: Provenance::Leaf(self.clone()),
            }),
        }
    }
}

/// A bundle in the construction calculus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    content: BundleContent,
    signature: Signature,
    has_zero_section: bool,
    provenance: Provenance,
}

impl BundleSpec {
    pub fn content(&self) -> &BundleContent {
        &self.content
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn has_zero_section(&self) -> bool {
        self.has_zero_section
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn fiber_genus(&self) -> usize {
        match &self.content {
            BundleContent::Explicit(r) => r.fiber_genus(),
            BundleContent::GeneratingSet(r) => r.fiber_genus(),
            BundleContent::Declared(d) => d.fiber_genus,
        }
    }

    pub fn base_genus(&self) -> usize {
        match &self.content {
            BundleContent::Explicit(r) => r.base_genus(),
            BundleContent::GeneratingSet(r) => r.base_genus(),
            BundleContent::Declared(d) => d.base_genus,
        }
    }

    pub fn explicit_rep(&self) -> Option<&SymplecticRep> {
        match &self.content {
            BundleContent::Explicit(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_declared(&self) -> bool {
        matches!(self.content, BundleContent::Declared(_))
    }

    /// Coinvariants, when the monodromy is explicit.
    pub fn coinvariants(&self) -> Option<CoinvariantsReport> {
        match &self.content {
            BundleContent::Explicit(r) => Some(coinvariants(r.images(), r.fiber_genus(), r.base_genus())),
            BundleContent::GeneratingSet(r) => Some(coinvariants(r.images(), r.fiber_genus(), r.base_genus())),
            BundleContent::Declared(_) => None,
        }
    }

    pub fn coinvariant_rank(&self) -> RankInterval {
        match &self.content {
            BundleContent::Declared(d) => d.coinv_rank,
            _ => RankInterval::exact(self.coinvariants().expect("explicit content").rank),
        }
    }
}

fn explicit_leaf(leaf: Leaf, rep: SymplecticRep) -> BundleSpec {
    BundleSpec {
        content: BundleContent::Explicit(rep),
        signature: Signature::Exact(0),
        has_zero_section: true,
        provenance: Provenance::Leaf(leaf),
    }
}

fn one_twisted_generator(b: usize, twist: IntMatrix) -> Result<SymplecticRep, Error> {
    if b == 0 {
        return Err(Error::InvalidArgument("base genus must be at least 1".into()));
    }
    let mut images = alloc::vec![IntMatrix::identity(2); 2 * b];
    images[0] = twist;
    SymplecticRep::new(1, b, images)
}

/// Homological monodromy of the trefoil fibration, `[[1,1],[−1,0]]`; order 6.
pub fn trefoil_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 1], [-1, 0]]).expect("2x2")
}

/// Monodromy of the Kodaira–Thurston torus bundle, `[[1,1],[0,1]]`.
pub fn kodaira_thurston_matrix() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 1], [0, 1]]).expect("2x2")
}

/// `Σ_g × Σ_b`: trivial monodromy, signature 0, sections of square zero.
pub fn product_block(g: usize, b: usize) -> Result<BundleSpec, Error> {
    if g == 0 || b == 0 {
        return Err(Error::InvalidArgument("product block genera must be positive".into()));
    }
    let rep = SymplecticRep::identity(g, b)?;
    Ok(explicit_leaf(Leaf::Product { fiber_genus: g, base_genus: b }, rep))
}

/// Torus bundle from 0-surgery on the trefoil, times a circle, fiber-summed
/// with `T² × Σ_{b−1}`: `a₁` acts by the trefoil matrix, every other
/// generator trivially.
pub fn trefoil_block(b: usize) -> Result<BundleSpec, Error> {
    let rep = one_twisted_generator(b, trefoil_matrix())?;
    Ok(explicit_leaf(Leaf::Trefoil { base_genus: b }, rep))
}

/// The Kodaira–Thurston manifold fiber-summed with `T² × Σ_{b−1}`. Its
/// coinvariant rank is 1, so it flips the parity of a section sum.
///
/// Note: `b₁` here is `2b + 1` (19 for `b = 9`), computed from the
/// coinvariants. This differs from the value `b₁(Σ_8) + 1 = 17` one finds
/// quoted for the same block.
pub fn kodaira_thurston_q(b: usize) -> Result<BundleSpec, Error> {
    let rep = one_twisted_generator(b, kodaira_thurston_matrix())?;
    Ok(explicit_leaf(Leaf::KodairaThurston { base_genus: b }, rep))
}

/// The genus-3 bundle over a genus-9 surface with signature 4 and a section
/// of square zero. Its monodromy is not known explicitly; the coinvariant
/// rank is only known to lie in `[0, 5]` (it is below 6 because the action
/// is not homologically trivial).
pub fn declared_ekkos() -> BundleSpec {
    BundleSpec {
        content: BundleContent::Declared(DeclaredBlock {
            fiber_genus: 3,
            base_genus: 9,
            coinv_rank: RankInterval { lo: 0, hi: 5 },
        }),
        signature: Signature::Exact(4),
        has_zero_section: true,
        provenance: Provenance::Leaf(Leaf::Ekkos),
    }
}

/// Normal connected sum along sections of square zero.
///
/// Homologically the fiber splits as a direct sum, whatever gluing map is
/// used, so images combine block-diagonally and coinvariant ranks add.
pub fn section_sum(x: &BundleSpec, y: &BundleSpec) -> Result<BundleSpec, Error> {
    if x.base_genus() != y.base_genus() {
        return Err(Error::BaseMismatch { left: x.base_genus(), right: y.base_genus() });
    }
    if !x.has_zero_section || !y.has_zero_section {
        return Err(Error::MissingSection);
    }
    let content = match (&x.content, &y.content) {
        (BundleContent::Explicit(a), BundleContent::Explicit(b)) => BundleContent::Explicit(a.direct_sum(b)?),
        (BundleContent::GeneratingSet(a), BundleContent::GeneratingSet(b)) => {
            BundleContent::GeneratingSet(a.direct_sum(b)?)
        }
        (BundleContent::Declared(_), _) | (_, BundleContent::Declared(_)) => BundleContent::Declared(DeclaredBlock {
            fiber_genus: x.fiber_genus() + y.fiber_genus(),
            base_genus: x.base_genus(),
            coinv_rank: x.coinvariant_rank() + y.coinvariant_rank(),
        }),
        _ => return Err(Error::GeneratingSetUnsupported("section sum with a standard-presentation bundle")),
    };
    Ok(BundleSpec {
        content,
        signature: x.signature + y.signature,
        has_zero_section: true,
        provenance: Provenance::SectionSum(Box::new(x.provenance.clone()), Box::new(y.provenance.clone())),
    })
}

/// Fiber sum with `Σ_g × Σ_c`: the base genus grows by `c`, the new
/// generators act trivially, and coinvariants and signature are unchanged.
pub fn fiber_sum_with_product(x: &BundleSpec, c: usize) -> Result<BundleSpec, Error> {
    if c == 0 {
        return Err(Error::InvalidArgument("fiber sum with a genus-0 base is not a product block".into()));
    }
    let content = match &x.content {
        BundleContent::Explicit(r) => BundleContent::Explicit(r.extend_trivially(c)),
        BundleContent::Declared(d) => BundleContent::Declared(DeclaredBlock { base_genus: d.base_genus + c, ..d.clone() }),
        BundleContent::GeneratingSet(_) => {
            return Err(Error::GeneratingSetUnsupported("fiber sum"));
        }
    };
    Ok(BundleSpec {
        content,
        signature: x.signature,
        has_zero_section: x.has_zero_section,
        provenance: Provenance::FiberSumProduct { input: Box::new(x.provenance.clone()), c },
    })
}

/// Pulls the bundle back along the cyclic cover of the base given by `spec`.
///
/// The fiber is unchanged; the monodromy becomes the images of the Schreier
/// generators. Signature is multiplied by the degree.
pub fn restrict_to_cover(x: &BundleSpec, spec: &CyclicCoverSpec) -> Result<BundleSpec, Error> {
    let rep = match &x.content {
        BundleContent::Explicit(r) => r,
        BundleContent::Declared(_) => return Err(Error::DeclaredBlockUnsupported("cover restriction")),
        BundleContent::GeneratingSet(_) => return Err(Error::GeneratingSetUnsupported("cover restriction")),
    };
    let images = rep.restrict(spec)?;
    let origin = CoverOrigin { base_genus: rep.base_genus(), spec: spec.clone() };
    let restricted =
        GeneratingSetRep::new(rep.fiber_genus(), cover_genus(spec.degree(), rep.base_genus()), images, origin)?;
    Ok(BundleSpec {
        content: BundleContent::GeneratingSet(restricted),
        signature: x.signature.scale(spec.degree()),
        has_zero_section: x.has_zero_section,
        provenance: Provenance::Cover { input: Box::new(x.provenance.clone()), spec: spec.clone() },
    })
}

/// Fiber genus `g ≥ 4`, base genus `b ≥ 9`, signature 4, coinvariant rank
/// `2g − 2s₀` with `s₀ ∈ [1, 3]`.
///
/// Built from the declared genus-3 block by a section sum with a product
/// block (after first adding the Kodaira–Thurston block when the declared
/// rank is odd), then a fiber sum with a product to reach base genus `b`.
pub fn build_z_gb(g: usize, b: usize, parity: Parity) -> Result<BundleSpec, Error> {
    if g < 4 || b < 9 {
        return Err(Error::InvalidArgument(format!("need g >= 4 and b >= 9, got g = {g}, b = {b}")));
    }
    let h = g - 4;
    let z = declared_ekkos();
    let mut x = match parity {
        Parity::Even => section_sum(&z, &product_block(h + 1, 9)?)?,
        Parity::Odd => {
            let x = section_sum(&z, &kodaira_thurston_q(9)?)?;
            if h > 0 {
                section_sum(&x, &product_block(h, 9)?)?
            } else {
                x
            }
        }
    };
    if b > 9 {
        x = fiber_sum_with_product(&x, b - 9)?;
    }
    Ok(x)
}

/// Section sum of `Z_{g,b}` with the trefoil block: fiber genus `g + 1`,
/// same coinvariant rank, positive signature.
pub fn build_w(g_plus_1: usize, b: usize, parity: Parity) -> Result<BundleSpec, Error> {
    let g = g_plus_1
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidArgument("fiber genus must be positive".into()))?;
    section_sum(&build_z_gb(g, b, parity)?, &trefoil_block(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(x: &BundleSpec) -> usize {
        x.coinvariants().unwrap().rank
    }

    #[test]
    fn product_blocks() {
        let p = product_block(3, 9).unwrap();
        let r = p.coinvariants().unwrap();
        assert_eq!((r.rank, r.b1), (6, 24));
        assert_eq!(p.signature(), Signature::Exact(0));
        let r = product_block(1, 1).unwrap().coinvariants().unwrap();
        assert_eq!((r.rank, r.b1), (2, 4));
        assert_eq!(product_block(2, 2).unwrap().coinvariants().unwrap().q_f, Some(2));
        assert!(product_block(0, 3).is_err());
    }

    #[test]
    fn trefoil_block_data() {
        let t = trefoil_block(9).unwrap();
        assert_eq!(rank(&t), 0);
        let a1 = t.explicit_rep().unwrap().image(0).clone();
        assert!(a1.pow(6).unwrap().is_identity());
        for k in 1..6 {
            assert!(!a1.pow(k).unwrap().is_identity());
        }
        assert!(t.has_zero_section());
    }

    #[test]
    fn kodaira_thurston_data() {
        let q = kodaira_thurston_q(9).unwrap();
        let r = q.coinvariants().unwrap();
        assert_eq!((r.rank, r.b1), (1, 19));
        assert_eq!(kodaira_thurston_q(1).unwrap().coinvariants().unwrap().b1, 3);
        assert_eq!(q.signature(), Signature::Exact(0));
    }

    #[test]
    fn ekkos_declaration() {
        let z = declared_ekkos();
        assert_eq!((z.fiber_genus(), z.base_genus()), (3, 9));
        assert_eq!(z.signature(), Signature::Exact(4));
        assert_eq!(z.coinvariant_rank(), RankInterval { lo: 0, hi: 5 });
        assert!(z.coinvariant_rank().hi < 2 * z.fiber_genus());
    }

    #[test]
    fn section_sums() {
        for h in 0..4 {
            let s = section_sum(&declared_ekkos(), &product_block(h + 1, 9).unwrap()).unwrap();
            assert_eq!(s.fiber_genus(), h + 4);
            assert_eq!(s.coinvariant_rank(), RankInterval { lo: 2 * h + 2, hi: 2 * h + 7 });
            assert_eq!(s.signature(), Signature::Exact(4));
            assert!(s.is_declared());
        }
        let s = section_sum(&trefoil_block(9).unwrap(), &product_block(1, 9).unwrap()).unwrap();
        assert_eq!((s.fiber_genus(), rank(&s)), (2, 2));
        let pp = section_sum(&product_block(1, 4).unwrap(), &product_block(1, 4).unwrap()).unwrap();
        assert_eq!(pp.content(), product_block(2, 4).unwrap().content());
    }

    #[test]
    fn section_sum_errors() {
        let a = product_block(1, 2).unwrap();
        let b = product_block(1, 3).unwrap();
        assert_eq!(section_sum(&a, &b), Err(Error::BaseMismatch { left: 2, right: 3 }));
        let no_section = Leaf::Explicit { rep: SymplecticRep::identity(1, 2).unwrap(), signature: None, has_zero_section: false }
            .build()
            .unwrap();
        assert_eq!(section_sum(&a, &no_section), Err(Error::MissingSection));
    }

    #[test]
    fn fiber_sums() {
        let t = fiber_sum_with_product(&trefoil_block(1).unwrap(), 8).unwrap();
        assert_eq!(t.content(), trefoil_block(9).unwrap().content());
        let z = fiber_sum_with_product(&declared_ekkos(), 3).unwrap();
        assert_eq!((z.fiber_genus(), z.base_genus()), (3, 12));
        assert_eq!(z.signature(), Signature::Exact(4));
        assert_eq!(z.coinvariant_rank(), RankInterval { lo: 0, hi: 5 });
        let p = fiber_sum_with_product(&product_block(2, 2).unwrap(), 1).unwrap();
        assert_eq!(p.content(), product_block(2, 3).unwrap().content());
    }

    #[test]
    fn covers() {
        let t = trefoil_block(9).unwrap();
        let spec = CyclicCoverSpec::single_generator(6, 18, 0).unwrap();
        let c = restrict_to_cover(&t, &spec).unwrap();
        assert_eq!(c.base_genus(), 49);
        assert_eq!(c.fiber_genus(), 1);
        let BundleContent::GeneratingSet(r) = c.content() else { panic!() };
        assert!(r.images().iter().all(IntMatrix::is_identity));
        assert_eq!(rank(&c), 2);

        let id = product_block(1, 2).unwrap();
        let c = restrict_to_cover(&id, &CyclicCoverSpec::single_generator(2, 4, 0).unwrap()).unwrap();
        assert_eq!(rank(&c), 2);

        let one = restrict_to_cover(&t, &CyclicCoverSpec::new(1, alloc::vec![0; 18]).unwrap()).unwrap();
        let BundleContent::GeneratingSet(r) = one.content() else { panic!() };
        assert_eq!(r.images(), t.explicit_rep().unwrap().images());

        assert_eq!(
            restrict_to_cover(&declared_ekkos(), &spec),
            Err(Error::DeclaredBlockUnsupported("cover restriction"))
        );
    }

    #[test]
    fn cover_scales_signature() {
        let x = Leaf::Explicit { rep: SymplecticRep::identity(1, 2).unwrap(), signature: Some(4), has_zero_section: true }
            .build()
            .unwrap();
        let c = restrict_to_cover(&x, &CyclicCoverSpec::single_generator(3, 4, 1).unwrap()).unwrap();
        assert_eq!(c.signature(), Signature::Exact(12));
        assert_eq!(c.base_genus(), 4);
    }

    #[test]
    fn z_family() {
        for parity in [Parity::Even, Parity::Odd] {
            for g in 4..12 {
                let z = build_z_gb(g, 11, parity).unwrap();
                assert_eq!((z.fiber_genus(), z.base_genus()), (g, 11));
                assert_eq!(z.signature(), Signature::Exact(4));
                let s: alloc::vec::Vec<usize> = z.coinvariant_rank().even_values().map(|r| g - r / 2).collect();
                assert_eq!(s.iter().min(), Some(&1));
                assert_eq!(s.iter().max(), Some(&3));
            }
        }
        assert!(build_z_gb(3, 9, Parity::Even).is_err());
        assert!(build_z_gb(5, 8, Parity::Even).is_err());
    }

    #[test]
    fn w_family() {
        let z = build_z_gb(9, 9, Parity::Even).unwrap();
        let w = build_w(10, 9, Parity::Even).unwrap();
        assert_eq!(w.fiber_genus(), 10);
        assert_eq!(w.coinvariant_rank(), z.coinvariant_rank());
        assert_eq!(w.signature(), Signature::Exact(4));
    }

    #[test]
    fn provenance_rebuilds() {
        let w = build_w(8, 10, Parity::Odd).unwrap();
        assert_eq!(w.provenance().evaluate().unwrap(), w);
        assert!(w.provenance().leaf_count() >= 4);
        let spec = CyclicCoverSpec::single_generator(2, 4, 1).unwrap();
        let c = restrict_to_cover(&kodaira_thurston_q(2).unwrap(), &spec).unwrap();
        assert_eq!(c.provenance().evaluate().unwrap(), c);
    }

    #[test]
    fn evaluation_errors_name_the_node() {
        let bad = Provenance::SectionSum(
            Box::new(Provenance::Leaf(Leaf::Product { fiber_genus: 1, base_genus: 2 })),
            Box::new(Provenance::FiberSumProduct {
                input: Box::new(Provenance::Leaf(Leaf::Trefoil { base_genus: 0 })),
                c: 1,
            }),
        );
        match bad.evaluate() {
            Err(Error::Node { path, .. }) => assert_eq!(path, "root.right.input"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
