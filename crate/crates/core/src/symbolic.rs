//! Symbolic compactifications: products of finite chains and copies of the
//! integer line closed off by `±∞`, and the one-point compactified starlet.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{median3, FiniteMedianAlgebra};
use crate::error::{MedianError, Violation};
use crate::Check;

pub const MAX_SYMBOLIC_FACTORS: usize = 8;
pub const MAX_STARLET_LEAVES: usize = 64;

/// An integer extended by two order extremes. Variant order is the order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn is_infinite(self) -> bool {
        !matches!(self, ExtInt::Fin(_))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::Fin(v) => write!(f, "{v}"),
            ExtInt::PosInf => f.write_str("+inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolicFactor {
    /// `0 < 1 < ... < k-1`; already complete.
    FiniteChain(u32),
    /// `ℤ`, compactified to `ℤ ∪ {-∞, +∞}`.
    IntegerLine,
}

impl SymbolicFactor {
    fn contains(self, c: ExtInt) -> bool {
        match (self, c) {
            (SymbolicFactor::FiniteChain(k), ExtInt::Fin(v)) => (0..k as i64).contains(&v),
            (SymbolicFactor::FiniteChain(_), _) => false,
            (SymbolicFactor::IntegerLine, _) => true,
        }
    }

    /// Number of values after truncating the line to `[-r, r]`.
    fn truncated_len(self, r: u32) -> u32 {
        match self {
            SymbolicFactor::FiniteChain(k) => k,
            SymbolicFactor::IntegerLine => 2 * r + 1,
        }
    }

    fn offset(self, r: u32) -> i64 {
        match self {
            SymbolicFactor::FiniteChain(_) => 0,
            SymbolicFactor::IntegerLine => r as i64,
        }
    }
}

impl fmt::Display for SymbolicFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicFactor::FiniteChain(k) => write!(f, "chain:{k}"),
            SymbolicFactor::IntegerLine => f.write_str("zline"),
        }
    }
}

/// A parsed symbolic description: `zline`, `chain:k`, `T^n`, `T x T x ...`,
/// or `starlet:n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolicSpec {
    Product(Vec<SymbolicFactor>),
    Starlet(usize),
}

impl FromStr for SymbolicSpec {
    type Err = MedianError;

    fn from_str(s: &str) -> Result<Self, MedianError> {
        let err = |reason| MedianError::Parse { input: s.to_string(), reason };
        let s_trim = s.trim();
        if let Some(n) = s_trim.strip_prefix("starlet:") {
            let n: usize = n.trim().parse().map_err(|_| err("starlet size is not a number"))?;
            if !(1..=MAX_STARLET_LEAVES).contains(&n) {
                return Err(err("starlet size out of range"));
            }
            return Ok(SymbolicSpec::Starlet(n));
        }
        let mut factors = Vec::new();
        for term in s_trim.split(" x ") {
            let term = term.trim();
            let (base, power) = match term.split_once('^') {
                Some((b, p)) => (b.trim(), p.trim().parse::<usize>().map_err(|_| err("exponent is not a number"))?),
                None => (term, 1),
            };
            let factor = if base == "zline" {
                SymbolicFactor::IntegerLine
            } else if let Some(k) = base.strip_prefix("chain:") {
                let k: u32 = k.trim().parse().map_err(|_| err("chain length is not a number"))?;
                if k == 0 || k > u16::MAX as u32 {
                    return Err(err("chain length out of range"));
                }
                SymbolicFactor::FiniteChain(k)
            } else {
                return Err(err("unknown factor; expected zline, chain:K or starlet:N"));
            };
            if power == 0 {
                return Err(err("exponent must be positive"));
            }
            factors.extend(core::iter::repeat_n(factor, power));
            if factors.len() > MAX_SYMBOLIC_FACTORS {
                return Err(err("too many factors"));
            }
        }
        Ok(SymbolicSpec::Product(factors))
    }
}

/// Coordinatewise compactification of a product of chains and lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicCompactification {
    factors: Vec<SymbolicFactor>,
}

pub fn symbolic_mmc(factors: &[SymbolicFactor]) -> Result<SymbolicCompactification, MedianError> {
    if factors.len() > MAX_SYMBOLIC_FACTORS {
        return Err(MedianError::DimensionOutOfRange { dim: factors.len(), max: MAX_SYMBOLIC_FACTORS });
    }
    if factors.contains(&SymbolicFactor::FiniteChain(0)) {
        return Err(MedianError::EmptyCarrier);
    }
    Ok(SymbolicCompactification { factors: factors.to_vec() })
}

fn fmt_point(p: &[ExtInt]) -> String {
    let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(","))
    }
}

impl SymbolicCompactification {
    pub fn factors(&self) -> &[SymbolicFactor] {
        &self.factors
    }

    pub fn contains(&self, p: &[ExtInt]) -> bool {
        p.len() == self.factors.len() && self.factors.iter().zip(p).all(|(f, &c)| f.contains(c))
    }

    /// A point of the compactification with some infinite coordinate.
    pub fn is_boundary(&self, p: &[ExtInt]) -> bool {
        self.contains(p) && p.iter().any(|c| c.is_infinite())
    }

    pub fn median(&self, a: &[ExtInt], b: &[ExtInt], c: &[ExtInt]) -> Vec<ExtInt> {
        (0..self.factors.len()).map(|i| median3(a[i], b[i], c[i])).collect()
    }

    fn line_count(&self) -> usize {
        self.factors.iter().filter(|f| **f == SymbolicFactor::IntegerLine).count()
    }

    /// Boundary points whose line coordinates are all infinite and whose
    /// chain coordinates range over the chain. With at most one line these
    /// are the whole boundary.
    pub fn corners(&self) -> Vec<Vec<ExtInt>> {
        let mut out: Vec<Vec<ExtInt>> = vec![Vec::new()];
        for f in &self.factors {
            let values: Vec<ExtInt> = match f {
                SymbolicFactor::FiniteChain(k) => (0..*k as i64).map(ExtInt::Fin).collect(),
                SymbolicFactor::IntegerLine => vec![ExtInt::NegInf, ExtInt::PosInf],
            };
            out = out
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        if self.line_count() == 0 {
            out.clear();
        }
        out
    }

    /// Number of boundary points when finite.
    pub fn boundary_size(&self) -> Option<usize> {
        match self.line_count() {
            0 => Some(0),
            1 => Some(self.corners().len()),
            _ => None,
        }
    }

    /// One-line description of the boundary.
    pub fn describe_boundary(&self) -> String {
        let lines = self.line_count();
        let corners = self.corners();
        let listed: Vec<String> = corners.iter().map(|p| fmt_point(p)).collect();
        match lines {
            0 => String::from("boundary: {} (empty; the algebra is already compact)"),
            1 if self.factors.len() == 1 => format!("boundary: {{{}}} (2 ends)", listed.join(", ")),
            1 => format!("boundary: {{{}}} ({} points)", listed.join(", "), listed.len()),
            _ => {
                let shown: Vec<String> = listed.iter().take(8).cloned().collect();
                let more = if listed.len() > shown.len() { ", ..." } else { "" };
                format!(
                    "boundary: infinite; points with an infinite coordinate across {lines} line factors; {} corners {{{}{more}}}",
                    listed.len(),
                    shown.join(", ")
                )
            }
        }
    }

    /// The finite truncation with each line cut to `[-r, r]`, as a product
    /// of chains. Label coordinate `c` of a line factor stands for `c - r`.
    pub fn truncation(&self, r: u32) -> Result<FiniteMedianAlgebra, MedianError> {
        let factors: Vec<u32> = self.factors.iter().map(|f| f.truncated_len(r)).collect();
        let total = factors.iter().try_fold(1usize, |acc, &k| acc.checked_mul(k as usize));
        match total {
            Some(t) if t <= crate::algebra::MAX_ELEMENTS => {}
            _ => {
                return Err(MedianError::SizeOverflow {
                    requested: total.unwrap_or(usize::MAX),
                    max: crate::algebra::MAX_ELEMENTS,
                })
            }
        }
        let mut points: Vec<Vec<u16>> = vec![Vec::new()];
        for &k in &factors {
            points = points
                .into_iter()
                .flat_map(|p| {
                    (0..k as u16).map(move |c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                })
                .collect();
        }
        FiniteMedianAlgebra::from_coords(&factors, &points)
    }

    /// The truncation label of a finite point, if it lies inside.
    pub fn to_label(&self, p: &[ExtInt], r: u32) -> Option<Vec<u16>> {
        self.factors
            .iter()
            .zip(p)
            .map(|(f, c)| match c {
                ExtInt::Fin(v) => {
                    let shifted = v + f.offset(r);
                    (0..f.truncated_len(r) as i64).contains(&shifted).then_some(shifted as u16)
                }
                _ => None,
            })
            .collect()
    }

    pub fn from_label(&self, label: &[u16], r: u32) -> Vec<ExtInt> {
        self.factors.iter().zip(label).map(|(f, &c)| ExtInt::Fin(c as i64 - f.offset(r))).collect()
    }

    /// Lowest and highest corners of the `r`-truncation.
    pub fn truncation_corners(&self, r: u32) -> (Vec<ExtInt>, Vec<ExtInt>) {
        let lo = self.factors.iter().map(|f| ExtInt::Fin(-f.offset(r))).collect();
        let hi = self.factors.iter().map(|f| ExtInt::Fin(f.truncated_len(r) as i64 - 1 - f.offset(r))).collect();
        (lo, hi)
    }

    /// The nearest point of the `r`-truncation: the median with its two
    /// extreme corners.
    pub fn project(&self, p: &[ExtInt], r: u32) -> Vec<ExtInt> {
        let (lo, hi) = self.truncation_corners(r);
        self.median(p, &lo, &hi)
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> Vec<ExtInt> {
        self.factors
            .iter()
            .map(|f| match f {
                SymbolicFactor::FiniteChain(k) => ExtInt::Fin(rng.gen_range(0..*k as i64)),
                SymbolicFactor::IntegerLine => match rng.gen_range(0..8) {
                    0 => ExtInt::NegInf,
                    1 => ExtInt::PosInf,
                    _ => ExtInt::Fin(rng.gen_range(-5..=5)),
                },
            })
            .collect()
    }

    /// M1–M3 on seeded random points, including infinite coordinates.
    pub fn sampled_axiom_check(&self, samples: usize, seed: u64) -> Check {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let [a, b, c, d]: [Vec<ExtInt>; 4] = core::array::from_fn(|_| self.random_point(&mut rng));
            let m = self.median(&a, &b, &c);
            let sym = [self.median(&b, &a, &c), self.median(&a, &c, &b), self.median(&c, &b, &a)];
            if !self.contains(&m) || sym.iter().any(|s| *s != m) {
                return Err(Violation::new(
                    format!("M1 fails at {}, {}, {}", fmt_point(&a), fmt_point(&b), fmt_point(&c)),
                    Vec::new(),
                ));
            }
            if self.median(&a, &b, &b) != b {
                return Err(Violation::new(format!("M2 fails at {}, {}", fmt_point(&a), fmt_point(&b)), Vec::new()));
            }
            let lhs = self.median(&self.median(&a, &b, &d), &c, &d);
            let rhs = self.median(&self.median(&a, &c, &d), &b, &d);
            if lhs != rhs {
                return Err(Violation::new(
                    format!("M3 fails at {}, {}, {}, {}", fmt_point(&a), fmt_point(&b), fmt_point(&c), fmt_point(&d)),
                    Vec::new(),
                ));
            }
        }
        Ok(())
    }
}

/// The starlet with `n` leaves plus a limit point `ω` of the leaves.
/// Element 0 is the centre, `1..=n` the leaves and `n + 1` is `ω`; the
/// median of any three distinct points is the centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarletCompactification {
    pub leaves: usize,
}

impl StarletCompactification {
    pub fn new(leaves: usize) -> Result<Self, MedianError> {
        if !(1..=MAX_STARLET_LEAVES).contains(&leaves) {
            return Err(MedianError::SizeOverflow { requested: leaves, max: MAX_STARLET_LEAVES });
        }
        Ok(StarletCompactification { leaves })
    }

    pub fn omega(&self) -> usize {
        self.leaves + 1
    }

    pub fn len(&self) -> usize {
        self.leaves + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn median(&self, a: usize, b: usize, c: usize) -> usize {
        if a == b || a == c {
            a
        } else if b == c {
            b
        } else {
            0
        }
    }

    /// The compactified carrier as a table algebra; construction runs the
    /// axiom check.
    pub fn algebra(&self) -> Result<FiniteMedianAlgebra, MedianError> {
        let n = self.len();
        let mut t = vec![0usize; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    t[(a * n + b) * n + c] = self.median(a, b, c);
                }
            }
        }
        FiniteMedianAlgebra::from_median_table(n, &t)
    }

    pub fn is_boundary(&self, x: usize) -> bool {
        x == self.omega()
    }

    pub fn describe_boundary(&self) -> String {
        format!("boundary: {{omega}} (1 point; one-point compactification of {} leaves)", self.leaves)
    }
}
