//! Periodic bi-infinite binary sequences under the pointwise majority.
//!
//! A sequence is stored by its minimal period, so equal sequences have
//! equal representations. Every nontrivial interval contains a square,
//! which is why no interval of this algebra is a chain.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::algebra::FiniteMedianAlgebra;
use crate::error::{MedianError, Violation};
use crate::Check;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodicBiSequence {
    bits: Vec<bool>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl PeriodicBiSequence {
    /// The sequence repeating `pattern`, reduced to its minimal period.
    pub fn new(pattern: &[bool]) -> Result<Self, MedianError> {
        if pattern.is_empty() {
            return Err(MedianError::EmptyCarrier);
        }
        let p = pattern.len();
        let period = (1..=p)
            .filter(|&d| p.is_multiple_of(d))
            .find(|&d| (0..p).all(|i| pattern[i] == pattern[i % d]))
            .expect("the full length is a period");
        Ok(PeriodicBiSequence { bits: pattern[..period].to_vec() })
    }

    pub fn period(&self) -> usize {
        self.bits.len()
    }

    /// Value at position `i ∈ ℤ`.
    pub fn at(&self, i: i64) -> bool {
        self.bits[i.rem_euclid(self.bits.len() as i64) as usize]
    }

    fn window(&self, len: usize) -> Vec<bool> {
        (0..len).map(|i| self.bits[i % self.bits.len()]).collect()
    }

    pub fn pattern(&self) -> &[bool] {
        &self.bits
    }
}

impl FromStr for PeriodicBiSequence {
    type Err = MedianError;

    fn from_str(s: &str) -> Result<Self, MedianError> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(MedianError::Parse { input: String::from(s), reason: "pattern must contain only 0 and 1" }),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        PeriodicBiSequence::new(&bits)
    }
}

impl fmt::Display for PeriodicBiSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Pointwise majority, computed over the lcm of the periods.
pub fn periodic_median(x: &PeriodicBiSequence, y: &PeriodicBiSequence, z: &PeriodicBiSequence) -> PeriodicBiSequence {
    let l = lcm(lcm(x.period(), y.period()), z.period());
    let (a, b, c) = (x.window(l), y.window(l), z.window(l));
    let bits: Vec<bool> = (0..l).map(|i| (a[i] as u8 + b[i] as u8 + c[i] as u8) >= 2).collect();
    PeriodicBiSequence::new(&bits).expect("nonempty window")
}

/// `z ∈ [x, y]`: `z` agrees with `x` and `y` wherever they agree.
pub fn periodic_interval_member(x: &PeriodicBiSequence, y: &PeriodicBiSequence, z: &PeriodicBiSequence) -> bool {
    let l = lcm(lcm(x.period(), y.period()), z.period());
    let (a, b, c) = (x.window(l), y.window(l), z.window(l));
    (0..l).all(|i| a[i] != b[i] || c[i] == a[i])
}

/// Four sequences `[z00, z01, z10, z11]` in `[x, y]` forming a square.
///
/// `zij` follows `x` except at two chosen positions of a common period,
/// where bit `i` (resp. `j`) selects `y`. The positions are two residues
/// where `x` and `y` differ, or, if they differ at a single residue `r`
/// modulo the lcm `L`, the positions `r` and `r + L` of period `2L`.
pub fn periodic_square_witness(
    x: &PeriodicBiSequence,
    y: &PeriodicBiSequence,
) -> Result<[PeriodicBiSequence; 4], MedianError> {
    if x == y {
        return Err(MedianError::Malformed { reason: String::from("square witness needs distinct sequences") });
    }
    let l = lcm(x.period(), y.period());
    let (a, b) = (x.window(l), y.window(l));
    let diff: Vec<usize> = (0..l).filter(|&i| a[i] != b[i]).collect();
    let (period, p, q) = if diff.len() >= 2 { (l, diff[0], diff[1]) } else { (2 * l, diff[0], diff[0] + l) };
    let base = x.window(period);
    let other = y.window(period);
    let make = |i: bool, j: bool| {
        let mut bits = base.clone();
        if i {
            bits[p] = other[p];
        }
        if j {
            bits[q] = other[q];
        }
        PeriodicBiSequence::new(&bits).expect("nonempty")
    };
    let square = [make(false, false), make(false, true), make(true, false), make(true, true)];
    verify_square(x, y, &square).map_err(|v| MedianError::Malformed { reason: v.reason })?;
    Ok(square)
}

/// The four sequences are distinct members of `[x, y]` whose medians are
/// those of the square `{0,1}²` (index `2i + j` ↔ `(i, j)`).
pub fn verify_square(x: &PeriodicBiSequence, y: &PeriodicBiSequence, sq: &[PeriodicBiSequence; 4]) -> Check {
    for (k, z) in sq.iter().enumerate() {
        if !periodic_interval_member(x, y, z) {
            return Err(Violation::new("square vertex outside the interval", vec![k]));
        }
        if sq[..k].contains(z) {
            return Err(Violation::new("square vertices coincide", vec![k]));
        }
    }
    let cube = FiniteMedianAlgebra::hypercube(2).expect("small cube");
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                if periodic_median(&sq[i], &sq[j], &sq[k]) != sq[cube.median(i, j, k)] {
                    return Err(Violation::new("square medians disagree with the 2-cube", vec![i, j, k]));
                }
            }
        }
    }
    Ok(())
}

/// The subalgebra on four sequences as a table algebra, in the given order.
pub fn square_algebra(sq: &[PeriodicBiSequence; 4]) -> Result<FiniteMedianAlgebra, MedianError> {
    let mut t = vec![0usize; 64];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let m = periodic_median(&sq[i], &sq[j], &sq[k]);
                t[(i * 4 + j) * 4 + k] =
                    sq.iter().position(|s| *s == m).ok_or(MedianError::NotClosed { triple: [i, j, k] })?;
            }
        }
    }
    FiniteMedianAlgebra::from_median_table(4, &t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: &str) -> PeriodicBiSequence {
        p.parse().unwrap()
    }

    #[test]
    fn minimal_periods() {
        assert_eq!(s("0101").period(), 2);
        assert_eq!(s("0101"), s("01"));
        assert_eq!(s("111").period(), 1);
    }

    #[test]
    fn medians() {
        assert_eq!(periodic_median(&s("01"), &s("1"), &s("0")), s("01"));
        assert_eq!(periodic_median(&s("01"), &s("110"), &s("110")), s("110"));
    }

    #[test]
    fn membership() {
        assert!(periodic_interval_member(&s("01"), &s("1"), &s("0111")));
        assert!(!periodic_interval_member(&s("01"), &s("1"), &s("0")));
    }

    #[test]
    fn doubled_period_square() {
        let sq = periodic_square_witness(&s("01"), &s("11")).unwrap();
        let mut got: Vec<String> = sq.iter().map(|z| alloc::format!("{z}")).collect();
        got.sort();
        assert_eq!(got, ["01", "0111", "1", "1101"].map(String::from));
    }

    #[test]
    fn two_residue_square() {
        let sq = periodic_square_witness(&s("00"), &s("11")).unwrap();
        assert!(sq.iter().all(|z| z.period() <= 2));
        let alg = square_algebra(&sq).unwrap();
        assert!(!alg.is_chain_interval(0, 3));
        assert!(periodic_square_witness(&s("0011"), &s("0111")).is_ok());
        assert!(periodic_square_witness(&s("1"), &s("1")).is_err());
    }
}
