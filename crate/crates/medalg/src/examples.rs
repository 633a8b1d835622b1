//! Fixed worked examples with known exact answers. Each one prints its
//! computed sets and compares them with the expected values.

use std::time::Instant;

use medalg_core::periodic::{periodic_square_witness, square_algebra, PeriodicBiSequence};
use medalg_core::symbolic::{symbolic_mmc, StarletCompactification, SymbolicFactor};
use medalg_core::topology::min_isolating_branches;
use medalg_core::{FiniteMedianAlgebra, SubsetMask, Violation};

use crate::report::{TheoremReport, Verdict, Witness};

pub const DEMOS: &[&str] = &["cube3-shadows", "square-nonconvex", "starlet", "periodic-square", "zline-ends"];

/// A demo's printed lines and whether every expected value matched.
pub struct Example {
    pub name: &'static str,
    pub lines: Vec<String>,
    pub result: Result<(), Violation>,
}

fn names(a: &FiniteMedianAlgebra, s: &SubsetMask) -> String {
    let parts: Vec<String> = s.iter().map(|i| a.element_name(i)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn labelled(a: &FiniteMedianAlgebra, labels: &[&[u16]]) -> SubsetMask {
    SubsetMask::from_indices(a.len(), labels.iter().map(|l| a.index_of_label(l).expect("label in carrier")))
}

fn expect(ok: bool, reason: &str) -> Result<(), Violation> {
    if ok {
        Ok(())
    } else {
        Err(Violation::new(reason, Vec::new()))
    }
}

/// Shadows and branches of `x = (0,0,0)`, `y = (1,1,0)`, `z = (1,0,0)` in
/// the 3-cube: the branch at `y` seen from `x` and from `z` differ because
/// `[x, y]` is a square.
fn cube3_shadows(lines: &mut Vec<String>) -> Result<(), Violation> {
    let a = FiniteMedianAlgebra::hypercube(3)?;
    let at = |l: &[u16]| a.index_of_label(l).expect("cube vertex");
    let (x, y, z) = (at(&[0, 0, 0]), at(&[1, 1, 0]), at(&[1, 0, 0]));
    let (s_x, b_x) = (a.shadow(y, x), a.branch(y, x)?);
    let (s_z, b_z) = (a.shadow(y, z), a.branch(y, z)?);
    lines.push(format!("x = {}, y = {}, z = {}", a.element_name(x), a.element_name(y), a.element_name(z)));
    lines.push(format!("shadow of y from x: {}", names(&a, &s_x)));
    lines.push(format!("branch of y from x: {}", names(&a, &b_x)));
    lines.push(format!("shadow of y from z: {}", names(&a, &s_z)));
    lines.push(format!("branch of y from z: {}", names(&a, &b_z)));
    expect(s_x == labelled(&a, &[&[1, 1, 0], &[1, 1, 1]]), "shadow from x")?;
    expect(
        b_x == labelled(&a, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 0, 1], &[0, 1, 1]]),
        "branch from x",
    )?;
    expect(s_z == labelled(&a, &[&[0, 1, 0], &[1, 1, 0], &[0, 1, 1], &[1, 1, 1]]), "shadow from z")?;
    expect(b_z == labelled(&a, &[&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[1, 0, 1]]), "branch from z")?;
    expect(b_x != b_z && !a.is_chain_interval(x, y), "branches agree across a square")
}

/// In the square, the half-open interval `[u, v)` from `(0,0)` to `(1,1)`
/// is not convex: `(1,1)` lies between `(1,0)` and `(0,1)`.
fn square_nonconvex(lines: &mut Vec<String>) -> Result<(), Violation> {
    let a = FiniteMedianAlgebra::hypercube(2)?;
    let at = |l: &[u16]| a.index_of_label(l).expect("square vertex");
    let (u, v, p, q) = (at(&[0, 0]), at(&[1, 1]), at(&[1, 0]), at(&[0, 1]));
    let m = a.median(p, v, q);
    let half_open = a.branch(v, u)?;
    lines.push(format!(
        "med({}, {}, {}) = {}",
        a.element_name(p),
        a.element_name(v),
        a.element_name(q),
        a.element_name(m)
    ));
    lines.push(format!("[u, v) = {}", names(&a, &half_open)));
    let witness = a.convexity_witness(&half_open);
    if let Some([s, t, w]) = witness {
        lines.push(format!(
            "not convex: {} lies between {} and {}",
            a.element_name(w),
            a.element_name(s),
            a.element_name(t)
        ));
    }
    expect(m == v, "median of the opposite corners")?;
    expect(half_open == labelled(&a, &[&[0, 0], &[1, 0], &[0, 1]]), "half-open interval")?;
    expect(witness.is_some(), "half-open interval is convex")
}

/// Distinct leaves meet at the centre; isolating the centre takes one
/// branch per leaf, finite or compactified.
fn starlet(lines: &mut Vec<String>) -> Result<(), Violation> {
    let leaves = 5;
    let a = FiniteMedianAlgebra::starlet(leaves)?;
    let m = a.median(1, 2, 3);
    let k = min_isolating_branches(&a, &a.chain_subbase(), 0)?;
    let s = StarletCompactification::new(leaves)?;
    lines.push(format!("starlet({leaves}): med(1, 2, 3) = {m}"));
    lines.push(format!("branches needed to isolate the centre: {k}"));
    lines.push(s.describe_boundary());
    let omega = s.omega();
    expect(m == 0 && s.median(1, 2, omega) == 0, "distinct leaves do not meet at the centre")?;
    expect(k == leaves, "isolation count differs from the leaf count")?;
    s.algebra()?.verify_axioms()?;
    Ok(())
}

fn periodic_square(lines: &mut Vec<String>) -> Result<(), Violation> {
    let (x, y): (PeriodicBiSequence, PeriodicBiSequence) = ("01".parse()?, "11".parse()?);
    let sq = periodic_square_witness(&x, &y)?;
    let shown: Vec<String> = sq.iter().map(|s| format!("({s})")).collect();
    lines.push(format!("x = ({x}), y = ({y})"));
    lines.push(format!("square in [x, y]: {}", shown.join(", ")));
    let alg = square_algebra(&sq)?;
    expect(!alg.is_chain_interval(0, 3), "square spans a chain")
}

fn zline_ends(lines: &mut Vec<String>) -> Result<(), Violation> {
    let line = symbolic_mmc(&[SymbolicFactor::IntegerLine])?;
    let text = line.describe_boundary();
    lines.push(text.clone());
    expect(text == "boundary: {-inf, +inf} (2 ends)", "line boundary description")
}

type DemoFn = fn(&mut Vec<String>) -> Result<(), Violation>;

/// Runs the named demo.
pub fn demo(name: &str) -> Option<Example> {
    let (name, run): (&'static str, DemoFn) = match name {
        "cube3-shadows" => ("cube3-shadows", cube3_shadows),
        "square-nonconvex" => ("square-nonconvex", square_nonconvex),
        "starlet" => ("starlet", starlet),
        "periodic-square" => ("periodic-square", periodic_square),
        "zline-ends" => ("zline-ends", zline_ends),
        _ => return None,
    };
    let mut lines = Vec::new();
    let result = run(&mut lines);
    Some(Example { name, lines, result })
}

/// Every demo as a report; element names in witnesses are plain indices.
pub fn paper_examples() -> Vec<TheoremReport> {
    DEMOS
        .iter()
        .map(|name| {
            let start = Instant::now();
            let ex = demo(name).expect("listed demo");
            let (verdict, witness) = match &ex.result {
                Ok(()) => (Verdict::Pass, None),
                Err(v) => (Verdict::Fail, Some(Witness { reason: v.reason.clone(), elements: Vec::new() })),
            };
            TheoremReport {
                check_id: "fixed-examples".into(),
                instance_id: ex.name.into(),
                verdict,
                witness,
                algebra: None,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_demo_passes() {
        for r in paper_examples() {
            assert_eq!(r.verdict, Verdict::Pass, "{}: {:?}", r.instance_id, r.witness);
        }
    }

    #[test]
    fn unknown_demo() {
        assert!(demo("nope").is_none());
    }
}
