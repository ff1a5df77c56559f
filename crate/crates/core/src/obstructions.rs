//! Criteria that exclude a surface-by-surface group extension from being the
//! fundamental group of a Kodaira fibration, and the verdict that combines
//! them.
//!
//! "Unobstructed" means only that none of the implemented checks excludes
//! the bundle. It never asserts that a Kodaira fibration exists.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::error::Error;
use crate::linalg::IntMatrix;
use crate::meyer::bundle_signature;
use crate::monodromy::{
    coinvariants, restrict_to_cover, BundleContent, BundleSpec, CoinvariantsReport, RankInterval, Signature,
};
use crate::surface::{cover_genus, CyclicCoverSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObstructionKind {
    GenusBounds,
    Parity,
    Torelli,
    Xiao,
    ChiWindow,
    Signature,
    ModifiedXiao,
    CoverSweep,
}

impl ObstructionKind {
    pub fn name(self) -> &'static str {
        match self {
            ObstructionKind::GenusBounds => "genus_bounds",
            ObstructionKind::Parity => "parity",
            ObstructionKind::Torelli => "torelli",
            ObstructionKind::Xiao => "xiao",
            ObstructionKind::ChiWindow => "chi_window",
            ObstructionKind::Signature => "signature",
            ObstructionKind::ModifiedXiao => "modified_xiao",
            ObstructionKind::CoverSweep => "cover_sweep",
        }
    }

    /// Literature the criterion rests on.
    pub fn reference(self) -> &'static str {
        match self {
            ObstructionKind::GenusBounds => "Kodaira fibrations have b >= 2, g >= 3",
            ObstructionKind::Parity => "Kahler groups have even b1",
            ObstructionKind::Torelli => "Beauville: q_f = g forces a product",
            ObstructionKind::Xiao => "Xiao: q_f <= (5g+1)/6",
            ObstructionKind::ChiWindow => "3(b-1)(g-1) < 3chi < 4(b-1)(g-1)",
            ObstructionKind::Signature => "Kodaira fibrations have positive signature",
            ObstructionKind::ModifiedXiao => "modified Xiao conjecture: q_f <= g/2 + 1",
            ObstructionKind::CoverSweep => "finite covers of Kodaira fibrations are Kodaira fibrations",
        }
    }
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Excluded,
    Passed,
    Inconclusive,
    /// Excluded only if the modified Xiao conjecture holds.
    Conditional,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Excluded => "excluded",
            Status::Passed => "passed",
            Status::Inconclusive => "inconclusive",
            Status::Conditional => "conditional",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which check failed on the witnessing cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverFailure {
    Parity,
    Xiao,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverWitness {
    pub spec: CyclicCoverSpec,
    pub cover_base_genus: usize,
    pub rank: usize,
    pub failure: CoverFailure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionOutcome {
    pub kind: ObstructionKind,
    pub status: Status,
    /// The inequality that was checked, with numbers filled in.
    pub detail: String,
    pub witness: Option<CoverWitness>,
    pub warning: Option<String>,
}

impl ObstructionOutcome {
    fn new(kind: ObstructionKind, status: Status, detail: String) -> Self {
        ObstructionOutcome { kind, status, detail, witness: None, warning: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Overall {
    Excluded,
    Unobstructed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcomes: Vec<ObstructionOutcome>,
    pub overall: Overall,
}

impl Verdict {
    fn from_outcomes(outcomes: Vec<ObstructionOutcome>) -> Self {
        let overall = if outcomes.iter().any(|o| o.status == Status::Excluded) {
            Overall::Excluded
        } else {
            Overall::Unobstructed
        };
        Verdict { outcomes, overall }
    }

    pub fn outcome(&self, kind: ObstructionKind) -> Option<&ObstructionOutcome> {
        self.outcomes.iter().find(|o| o.kind == kind)
    }

    pub fn has_inconclusive(&self) -> bool {
        self.outcomes.iter().any(|o| o.status == Status::Inconclusive)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoverStrategy {
    /// One generator to 1, the rest to 0, for each degree and generator.
    SingleGenerator,
    /// Every surjective image vector, in lexicographic order, up to a cap.
    ExhaustiveCapped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub enable_modified_xiao: bool,
    pub cover_degrees: Vec<usize>,
    pub cover_strategy: CoverStrategy,
    pub exhaustive_cap: usize,
    /// Holomorphic Euler characteristic, when known.
    pub chi: Option<i64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            enable_modified_xiao: false,
            cover_degrees: alloc::vec![2, 3, 4, 5, 6],
            cover_strategy: CoverStrategy::SingleGenerator,
            exhaustive_cap: 10_000,
            chi: None,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if let Some(&d) = self.cover_degrees.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!("cover degree {d} is below 2")));
        }
        Ok(())
    }
}

/// `b ≥ 2` and `g ≥ 3`.
pub fn check_genus_bounds(g: usize, b: usize) -> ObstructionOutcome {
    let mut failures = Vec::new();
    if b < 2 {
        failures.push(format!("b = {b} < 2"));
    }
    if g < 3 {
        failures.push(format!("g = {g} < 3"));
    }
    if failures.is_empty() {
        ObstructionOutcome::new(ObstructionKind::GenusBounds, Status::Passed, format!("b = {b} >= 2, g = {g} >= 3"))
    } else {
        ObstructionOutcome::new(ObstructionKind::GenusBounds, Status::Excluded, failures.join(", "))
    }
}

/// `b₁ = 2b + rank` must be even.
pub fn check_parity(report: &CoinvariantsReport) -> ObstructionOutcome {
    let status = if report.b1.is_multiple_of(2) { Status::Passed } else { Status::Excluded };
    let word = if status == Status::Passed { "even" } else { "odd" };
    ObstructionOutcome::new(
        ObstructionKind::Parity,
        status,
        format!("b1 = 2*{} + {} = {} is {word}", report.base_genus, report.rank, report.b1),
    )
}

pub fn check_parity_interval(b: usize, rank: RankInterval) -> ObstructionOutcome {
    let (status, detail) = if rank.is_exact() {
        let b1 = 2 * b + rank.lo;
        let status = if b1.is_multiple_of(2) { Status::Passed } else { Status::Excluded };
        let word = if status == Status::Passed { "even" } else { "odd" };
        (status, format!("b1 = 2*{b} + {} = {b1} is {word}", rank.lo))
    } else {
        (Status::Inconclusive, format!("b1 = 2*{b} + rank with rank in {rank}: parity depends on the rank"))
    };
    ObstructionOutcome::new(ObstructionKind::Parity, status, detail)
}

/// Trivial homological action means `q_f = g`, which forces a product.
pub fn check_torelli_trivial(images: &[IntMatrix], g: usize) -> ObstructionOutcome {
    if images.iter().all(IntMatrix::is_identity) {
        ObstructionOutcome::new(
            ObstructionKind::Torelli,
            Status::Excluded,
            format!("every image is the identity, so q_f = g = {g} and the bundle is a product"),
        )
    } else {
        let first = images.iter().position(|m| !m.is_identity()).unwrap_or(0);
        ObstructionOutcome::new(
            ObstructionKind::Torelli,
            Status::Passed,
            format!("image of {} acts nontrivially on homology", crate::surface::generator_name(first)),
        )
    }
}

/// Declared blocks: trivial action is equivalent to coinvariant rank `2g`.
pub fn check_torelli_interval(g: usize, rank: RankInterval) -> ObstructionOutcome {
    let (status, detail) = if rank.lo == 2 * g {
        (Status::Excluded, format!("rank = 2g = {}, so q_f = g and the bundle is a product", 2 * g))
    } else if rank.hi < 2 * g {
        (Status::Passed, format!("rank <= {} < 2g = {}: the action is nontrivial", rank.hi, 2 * g))
    } else {
        (Status::Inconclusive, format!("rank in {rank} may equal 2g = {}", 2 * g))
    };
    ObstructionOutcome::new(ObstructionKind::Torelli, status, detail)
}

/// Xiao's bound in the form `g ≤ 1 + 6s`.
pub fn check_xiao(g: usize, s: usize) -> ObstructionOutcome {
    let bound = 1 + 6 * s;
    let q = g - s.min(g);
    if g > bound {
        ObstructionOutcome::new(
            ObstructionKind::Xiao,
            Status::Excluded,
            format!("g = {g} > 1 + 6s = {bound} (s = {s}, q_f = {q} > (5g+1)/6 = {}/6)", 5 * g + 1),
        )
    } else {
        ObstructionOutcome::new(ObstructionKind::Xiao, Status::Passed, format!("g = {g} <= 1 + 6s = {bound} (s = {s})"))
    }
}

pub fn check_xiao_rank(g: usize, rank: usize) -> Result<ObstructionOutcome, Error> {
    if rank % 2 == 1 {
        return Err(Error::ParityUndefined { rank });
    }
    Ok(check_xiao(g, g - rank / 2))
}

/// Excluded only when every even rank in the interval violates the bound.
/// Odd ranks are left to the parity check.
pub fn check_xiao_interval(g: usize, rank: RankInterval) -> ObstructionOutcome {
    if rank.is_exact() {
        return check_xiao_rank(g, rank.lo).unwrap_or_else(|_| {
            ObstructionOutcome::new(
                ObstructionKind::Xiao,
                Status::Inconclusive,
                format!("rank {} is odd; s is undefined (see parity)", rank.lo),
            )
        });
    }
    let s_values: Vec<usize> = rank.even_values().map(|r| g - r / 2).collect();
    let (Some(&s_min), Some(&s_max)) = (s_values.iter().min(), s_values.iter().max()) else {
        return ObstructionOutcome::new(
            ObstructionKind::Xiao,
            Status::Inconclusive,
            format!("rank in {rank} has no even value; s is undefined (see parity)"),
        );
    };
    let violated = s_values.iter().filter(|&&s| g > 1 + 6 * s).count();
    let (status, detail) = if violated == s_values.len() {
        (
            Status::Excluded,
            format!(
                "g = {g} > 1 + 6s for every s in [{s_min}, {s_max}] (largest bound {}); odd ranks fail parity",
                1 + 6 * s_max
            ),
        )
    } else if violated == 0 {
        (Status::Passed, format!("g = {g} <= 1 + 6s for every s in [{s_min}, {s_max}]"))
    } else {
        (
            Status::Inconclusive,
            format!("g = {g} violates 1 + 6s for some but not all s in [{s_min}, {s_max}]"),
        )
    };
    ObstructionOutcome::new(ObstructionKind::Xiao, status, detail)
}

fn modified_xiao_fails(g: usize, q_f: usize, b: usize) -> bool {
    2 * q_f > g + 2 || (b == 2 && q_f + 2 > g)
}

/// Conditional on the modified Xiao conjecture: `q_f ≤ g/2 + 1`, and for
/// base genus 2 also `q_f ≤ g − 2`.
pub fn check_modified_xiao(g: usize, q_f: usize, b: usize) -> ObstructionOutcome {
    let mut parts = alloc::vec![if 2 * q_f > g + 2 {
        format!("q_f = {q_f} > g/2 + 1 = {}/2", g + 2)
    } else {
        format!("q_f = {q_f} <= g/2 + 1 = {}/2", g + 2)
    }];
    if b == 2 {
        parts.push(if q_f + 2 > g {
            format!("b = 2 and q_f = {q_f} > g - 2 = {}", g as i64 - 2)
        } else {
            format!("b = 2 and q_f = {q_f} <= g - 2 = {}", g as i64 - 2)
        });
    }
    let status = if modified_xiao_fails(g, q_f, b) { Status::Conditional } else { Status::Passed };
    ObstructionOutcome::new(ObstructionKind::ModifiedXiao, status, parts.join("; "))
}

pub fn check_modified_xiao_interval(g: usize, b: usize, rank: RankInterval) -> ObstructionOutcome {
    if rank.is_exact() && rank.lo.is_multiple_of(2) {
        return check_modified_xiao(g, rank.lo / 2, b);
    }
    let q: Vec<usize> = rank.even_values().map(|r| r / 2).collect();
    let failing = q.iter().filter(|&&q| modified_xiao_fails(g, q, b)).count();
    let (status, detail) = if q.is_empty() {
        (Status::Inconclusive, format!("rank in {rank} has no even value; q_f is undefined"))
    } else if failing == q.len() {
        (Status::Conditional, format!("every q_f in [{}, {}] exceeds the conjectured bound", q[0], q[q.len() - 1]))
    } else if failing == 0 {
        (Status::Passed, format!("every q_f in [{}, {}] meets the conjectured bound", q[0], q[q.len() - 1]))
    } else {
        (Status::Inconclusive, format!("some q_f in [{}, {}] exceed the conjectured bound", q[0], q[q.len() - 1]))
    };
    ObstructionOutcome::new(ObstructionKind::ModifiedXiao, status, detail)
}

/// Invariants of a smooth surface bundle with the given holomorphic Euler
/// characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChernInvariants {
    pub chi: i64,
    /// Topological Euler characteristic `4(b−1)(g−1)`.
    pub e: i64,
    /// `4χ − e`
    pub sigma: i64,
    /// `12χ − e`
    pub k2: i64,
    /// `K²/e`
    pub slope: Ratio<i64>,
}

pub fn chern_invariants(g: usize, b: usize, chi: i64) -> Result<ChernInvariants, Error> {
    if g < 2 || b < 2 {
        return Err(Error::InvalidArgument(format!("need g >= 2 and b >= 2, got g = {g}, b = {b}")));
    }
    let e = 4 * (b as i64 - 1) * (g as i64 - 1);
    let k2 = 12 * chi - e;
    Ok(ChernInvariants { chi, e, sigma: 4 * chi - e, k2, slope: Ratio::new(k2, e) })
}

/// Open window `3(b−1)(g−1) < 3χ < 4(b−1)(g−1)`.
pub fn check_chi_window(g: usize, b: usize, chi: Option<i64>) -> ObstructionOutcome {
    if g < 2 || b < 2 {
        return ObstructionOutcome::new(
            ObstructionKind::ChiWindow,
            Status::Inconclusive,
            format!("not applicable for g = {g}, b = {b}"),
        );
    }
    let k = (b as i64 - 1) * (g as i64 - 1);
    let (lo, hi) = (3 * k, 4 * k);
    // Integers chi with k < chi and 3chi < 4k.
    let first = k + 1;
    let nonempty = 3 * first < hi;
    match chi {
        Some(chi) => {
            let inside = lo < 3 * chi && 3 * chi < hi;
            let inv = chern_invariants(g, b, chi).expect("g, b >= 2");
            let tail = format!(
                "e = {}, sigma = {}, K^2 = {}, slope = {} ({:.2})",
                inv.e,
                inv.sigma,
                inv.k2,
                inv.slope,
                *inv.slope.numer() as f64 / *inv.slope.denom() as f64
            );
            if inside {
                ObstructionOutcome::new(
                    ObstructionKind::ChiWindow,
                    Status::Passed,
                    format!("{lo} < 3chi = {} < {hi}; {tail}", 3 * chi),
                )
            } else {
                ObstructionOutcome::new(
                    ObstructionKind::ChiWindow,
                    Status::Excluded,
                    format!("3chi = {} not in ({lo}, {hi}); {tail}", 3 * chi),
                )
            }
        }
        None if nonempty => ObstructionOutcome::new(
            ObstructionKind::ChiWindow,
            Status::Passed,
            format!("({lo}, {hi}) contains 3chi for chi = {first}"),
        ),
        None => ObstructionOutcome::new(
            ObstructionKind::ChiWindow,
            Status::Excluded,
            format!("no multiple of 3 lies strictly between {lo} and {hi}"),
        ),
    }
}

pub fn check_signature_positive(sig: Signature) -> ObstructionOutcome {
    let (status, detail) = match sig {
        Signature::Exact(s) if s > 0 => (Status::Passed, format!("sigma = {s} > 0")),
        Signature::Exact(s) => (Status::Excluded, format!("sigma = {s} <= 0")),
        Signature::Range { lo, hi } if lo > 0 => (Status::Passed, format!("sigma in [{lo}, {hi}] > 0")),
        Signature::Range { lo, hi } if hi <= 0 => (Status::Excluded, format!("sigma in [{lo}, {hi}] <= 0")),
        Signature::Range { lo, hi } => (Status::Inconclusive, format!("sigma in [{lo}, {hi}] straddles 0")),
        Signature::Unknown => (Status::Inconclusive, "signature unknown".to_string()),
    };
    ObstructionOutcome::new(ObstructionKind::Signature, status, detail)
}

fn surjective(n: usize, images: &[usize]) -> bool {
    use num_integer::Integer;
    images.iter().fold(n, |acc, &x| acc.gcd(&x)) == 1
}

/// Cover specs in sweep order, and whether the list was cut at the cap.
fn sweep_specs(generators: usize, config: &CheckConfig) -> Result<(Vec<CyclicCoverSpec>, Option<u128>), Error> {
    let mut specs = Vec::new();
    match config.cover_strategy {
        CoverStrategy::SingleGenerator => {
            for &n in &config.cover_degrees {
                for i in 0..generators {
                    specs.push(CyclicCoverSpec::single_generator(n, generators, i)?);
                }
            }
            Ok((specs, None))
        }
        CoverStrategy::ExhaustiveCapped => {
            let mut total: u128 = 0;
            for &n in &config.cover_degrees {
                let count = (n as u128).checked_pow(generators as u32).unwrap_or(u128::MAX);
                total = total.saturating_add(count);
                let mut images = alloc::vec![0usize; generators];
                'outer: loop {
                    if surjective(n, &images) {
                        if specs.len() == config.exhaustive_cap {
                            break 'outer;
                        }
                        specs.push(CyclicCoverSpec::new(n, images.iter().map(|&x| x as i64).collect())?);
                    }
                    // Lexicographic successor.
                    let mut k = generators;
                    loop {
                        if k == 0 {
                            break 'outer;
                        }
                        k -= 1;
                        images[k] += 1;
                        if images[k] < n {
                            break;
                        }
                        images[k] = 0;
                    }
                }
            }
            let truncated = specs.len() == config.exhaustive_cap;
            Ok((specs, truncated.then_some(total)))
        }
    }
}

/// Applies the parity and Xiao checks to cyclic covers of the base.
pub fn cover_sweep(bundle: &BundleSpec, config: &CheckConfig) -> ObstructionOutcome {
    let kind = ObstructionKind::CoverSweep;
    let rep = match bundle.content() {
        BundleContent::Explicit(r) => r,
        BundleContent::Declared(_) => {
            return ObstructionOutcome::new(kind, Status::Inconclusive, "declared block: monodromy unknown".into());
        }
        BundleContent::GeneratingSet(_) => {
            return ObstructionOutcome::new(
                kind,
                Status::Inconclusive,
                "generating-set representation: no standard presentation to cover".into(),
            );
        }
    };
    let g = rep.fiber_genus();
    let (specs, truncated) = match sweep_specs(2 * rep.base_genus(), config) {
        Ok(v) => v,
        Err(e) => return ObstructionOutcome::new(kind, Status::Inconclusive, format!("{e}")),
    };
    for spec in &specs {
        let cover = match restrict_to_cover(bundle, spec) {
            Ok(c) => c,
            Err(e) => return ObstructionOutcome::new(kind, Status::Inconclusive, format!("{spec}: {e}")),
        };
        let BundleContent::GeneratingSet(c) = cover.content() else { unreachable!() };
        let report = coinvariants(c.images(), g, c.base_genus());
        let failure = match report.s {
            None => Some(CoverFailure::Parity),
            Some(s) if g > 1 + 6 * s => Some(CoverFailure::Xiao),
            Some(_) => None,
        };
        if let Some(failure) = failure {
            let detail = match failure {
                CoverFailure::Parity => format!(
                    "cover {spec} with base genus {}: rank {} is odd, b1 = {} odd",
                    report.base_genus, report.rank, report.b1
                ),
                CoverFailure::Xiao => format!(
                    "cover {spec} with base genus {}: rank {} = 2g - 2s with s = {}, g = {g} > 1 + 6s = {}",
                    report.base_genus,
                    report.rank,
                    report.s.unwrap(),
                    1 + 6 * report.s.unwrap()
                ),
            };
            let mut out = ObstructionOutcome::new(kind, Status::Excluded, detail);
            out.witness = Some(CoverWitness {
                spec: spec.clone(),
                cover_base_genus: cover_genus(spec.degree(), rep.base_genus()),
                rank: report.rank,
                failure,
            });
            return out;
        }
    }
    match truncated {
        Some(total) => {
            let mut out = ObstructionOutcome::new(
                kind,
                Status::Inconclusive,
                format!("no exclusion among the first {} covers", specs.len()),
            );
            out.warning = Some(format!(
                "exhaustive cap {} reached before all of at most {total} image vectors were tried",
                config.exhaustive_cap
            ));
            out
        }
        None => ObstructionOutcome::new(
            kind,
            Status::Passed,
            format!("{} covers of degrees {:?} pass parity and Xiao", specs.len(), config.cover_degrees),
        ),
    }
}

/// Runs every check that applies to the bundle.
pub fn verdict(bundle: &BundleSpec, config: &CheckConfig) -> Verdict {
    let g = bundle.fiber_genus();
    let b = bundle.base_genus();
    let mut out = alloc::vec![check_genus_bounds(g, b)];

    let rank = bundle.coinvariant_rank();
    match bundle.coinvariants() {
        Some(report) => out.push(check_parity(&report)),
        None => out.push(check_parity_interval(b, rank)),
    }

    out.push(match bundle.content() {
        BundleContent::Explicit(r) => check_torelli_trivial(r.images(), g),
        BundleContent::GeneratingSet(r) => check_torelli_trivial(r.images(), g),
        BundleContent::Declared(_) => check_torelli_interval(g, rank),
    });

    out.push(check_xiao_interval(g, rank));
    out.push(check_chi_window(g, b, config.chi));

    let signature = match (bundle.signature(), bundle.content()) {
        (Signature::Unknown, BundleContent::Explicit(r)) => match bundle_signature(r) {
            Ok(s) => {
                let mut o = check_signature_positive(Signature::Exact(s));
                o.detail.push_str(" (computed from the monodromy)");
                o
            }
            Err(e) => ObstructionOutcome::new(ObstructionKind::Signature, Status::Inconclusive, format!("{e}")),
        },
        (sig, _) => check_signature_positive(sig),
    };
    out.push(signature);

    if config.enable_modified_xiao {
        out.push(check_modified_xiao_interval(g, b, rank));
    }
    if let BundleContent::Explicit(_) = bundle.content() {
        out.push(cover_sweep(bundle, config));
    }
    Verdict::from_outcomes(out)
}
