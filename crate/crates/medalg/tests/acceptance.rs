//! The acceptance suite. Every criterion prints one `criterion N: pass`
//! or `criterion N: fail (...)` line; the test fails if any criterion does.

use std::process::Command;
use std::time::Instant;

use medalg::checks::{periodic_pairs, run_registry, starlet_scaling};
use medalg::corpus::{build_corpus, CorpusSpec, Instance};
use medalg::oracle::{convex_partitions, cube_embedding_rank};
use medalg::report::Verdict;
use medalg_core::periodic::{periodic_square_witness, square_algebra, PeriodicBiSequence};
use medalg_core::roller::{roller_check, truncation_consistency, MAX_ORIENTATION_WALLS};
use medalg_core::symbolic::{symbolic_mmc, ExtInt, SymbolicFactor};
use medalg_core::topology::min_isolating_branches;
use medalg_core::{FiniteMedianAlgebra, SubsetMask};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn require(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Bitwise majority on `{0,1}^3` encoded as `u8`.
fn maj(a: u8, b: u8, c: u8) -> u8 {
    (a & b) | (a & c) | (b & c)
}

fn bits(s: &str) -> u8 {
    u8::from_str_radix(s, 2).unwrap()
}

/// Shadow and branch values for the 3-cube and the half-open interval of
/// the square, from a standalone bit model and from the library.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (x, y, z) = (bits("000"), bits("110"), bits("100"));
    let shadow = |at: u8, from: u8| -> Vec<u8> { (0..8).filter(|&t| maj(t, at, from) == at).collect() };
    let branch = |at: u8, from: u8| -> Vec<u8> { (0..8).filter(|&t| maj(t, at, from) != at).collect() };
    let expect = |list: &[&str]| -> Vec<u8> {
        let mut v: Vec<u8> = list.iter().map(|s| bits(s)).collect();
        v.sort();
        v
    };
    require(shadow(y, x) == expect(&["110", "111"]), || "model shadow from x".into())?;
    require(branch(y, x) == expect(&["000", "100", "010", "001", "101", "011"]), || "model branch from x".into())?;
    require(shadow(y, z) == expect(&["010", "110", "011", "111"]), || "model shadow from z".into())?;
    require(branch(y, z) == expect(&["000", "100", "001", "101"]), || "model branch from z".into())?;

    let cube = FiniteMedianAlgebra::hypercube(3).map_err(|e| e.to_string())?;
    let idx = |v: u8| cube.index_of_label(&[(v >> 2 & 1) as u16, (v >> 1 & 1) as u16, (v & 1) as u16]).unwrap();
    let as_mask = |vs: Vec<u8>| SubsetMask::from_indices(8, vs.into_iter().map(idx));
    let (xi, yi, zi) = (idx(x), idx(y), idx(z));
    require(cube.shadow(yi, xi) == as_mask(shadow(y, x)), || "library shadow from x".into())?;
    require(cube.branch(yi, xi).unwrap() == as_mask(branch(y, x)), || "library branch from x".into())?;
    require(cube.shadow(yi, zi) == as_mask(shadow(y, z)), || "library shadow from z".into())?;
    require(cube.branch(yi, zi).unwrap() == as_mask(branch(y, z)), || "library branch from z".into())?;
    require(cube.shadow(yi, xi).count() == 2 && cube.branch(yi, xi).unwrap().count() == 6, || "set sizes".into())?;

    let sq = FiniteMedianAlgebra::hypercube(2).map_err(|e| e.to_string())?;
    let at = |l: &[u16]| sq.index_of_label(l).unwrap();
    require(sq.median(at(&[1, 0]), at(&[1, 1]), at(&[0, 1])) == at(&[1, 1]), || "square median".into())?;
    let half_open = SubsetMask::from_indices(4, [at(&[0, 0]), at(&[1, 0]), at(&[0, 1])]);
    require(sq.branch(at(&[1, 1]), at(&[0, 0])).unwrap() == half_open, || "half-open interval".into())?;
    require(!sq.is_convex(&half_open), || "half-open interval is convex".into())?;
    for name in medalg::examples::DEMOS {
        let ex = medalg::examples::demo(name).unwrap();
        require(ex.result.is_ok(), || format!("demo {name}"))?;
    }
    require(start.elapsed().as_secs_f64() < 1.0, || "slower than 1 s".into())
}

fn criterion_2(corpus: &[Instance]) -> Outcome {
    let (mut walls_checked, mut rank_checked) = (0, 0);
    for inst in corpus {
        let a = &inst.algebra;
        a.verify_axioms().map_err(|e| format!("{}: {e}", inst.id))?;
        let walls = a.walls().map_err(|e| format!("{}: {e}", inst.id))?;
        if let Some(parts) = convex_partitions(a) {
            let mut sides: Vec<SubsetMask> = walls.walls().iter().map(|w| w.side_of(0).clone()).collect();
            sides.sort();
            require(sides == parts, || format!("{}: walls differ from the partition oracle", inst.id))?;
            walls_checked += 1;
        }
        if let Some(r) = cube_embedding_rank(a) {
            require(walls.rank().unwrap() == r, || format!("{}: rank differs from the cube oracle", inst.id))?;
            rank_checked += 1;
        }
    }
    require(walls_checked > 0 && rank_checked > 0, || "oracles never applied".into())
}

fn criterion_3(corpus: &[Instance]) -> Outcome {
    require(corpus.len() >= 500, || format!("corpus has {} instances", corpus.len()))?;
    let reports = run_registry(corpus, None, 42).map_err(|e| e.to_string())?;
    if let Some(r) = reports.iter().find(|r| r.verdict == Verdict::Fail) {
        return Err(format!("{} on {}: {:?}", r.check_id, r.instance_id, r.witness));
    }
    for id in [
        "branch-convexity",
        "branch-equivalence",
        "star-trichotomy",
        "gate-composition",
        "gate-isomorphism",
        "preimage-rays",
        "homomorphic-image-chain",
        "median-uniform-continuity",
        "initial-uniformity",
        "hausdorff-agreement",
        "discrete-chain-solvable",
        "product-uniformity",
        "product-separation",
        "convex-restriction",
        "topology-equivalence",
        "discreteness-criterion",
        "fingerprint-injectivity",
        "equivariance",
    ] {
        let passes = reports.iter().filter(|r| r.check_id == id && r.verdict == Verdict::Pass).count();
        require(passes > 0, || format!("{id} never ran"))?;
    }
    let small = corpus.iter().filter(|i| i.algebra.len() <= 32).count();
    let equivariant = reports.iter().filter(|r| r.check_id == "equivariance" && r.verdict == Verdict::Pass).count();
    require(equivariant == small, || format!("equivariance ran on {equivariant} of {small} small algebras"))
}

fn criterion_4(corpus: &[Instance]) -> Outcome {
    let start = Instant::now();
    for inst in corpus {
        let walls = inst.algebra.walls().map_err(|e| e.to_string())?;
        if walls.len() <= MAX_ORIENTATION_WALLS {
            roller_check(&inst.algebra, &walls).map_err(|v| format!("{}: {}", inst.id, v.reason))?;
        }
    }
    let out = Command::new(env!("CARGO_BIN_EXE_medalg"))
        .args(["roller", "--symbolic", "zline"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    require(out.status.success() && text.trim() == "boundary: {-inf, +inf} (2 ends)", || {
        format!("zline printed {text:?}")
    })?;

    use ExtInt::*;
    let z = SymbolicFactor::IntegerLine;
    let plane = symbolic_mmc(&[z, z]).map_err(|e| e.to_string())?;
    require(plane.contains(&[PosInf, Fin(0)]) && plane.is_boundary(&[PosInf, Fin(0)]), || {
        "(+inf, 0) on the boundary".into()
    })?;
    require(!plane.is_boundary(&[Fin(5), Fin(7)]), || "(5, 7) on the boundary".into())?;
    require(plane.median(&[PosInf, Fin(0)], &[NegInf, Fin(0)], &[Fin(5), Fin(7)]) == [Fin(5), Fin(0)], || {
        "plane median".into()
    })?;
    for factors in [vec![z], vec![z, z], vec![z, SymbolicFactor::FiniteChain(3)]] {
        let sym = symbolic_mmc(&factors).map_err(|e| e.to_string())?;
        for r in 1..=4 {
            truncation_consistency(&sym, r).map_err(|v| format!("{factors:?} at {r}: {}", v.reason))?;
        }
    }
    require(start.elapsed().as_secs() < 30, || "slower than 30 s".into())
}

/// Independent coordinates: per colour class, the number of its walls
/// separating `x` from the point.
fn criterion_5(corpus: &[Instance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let candidates: Vec<&Instance> = corpus.iter().filter(|i| i.algebra.len() >= 2).collect();
    for _ in 0..100 {
        let inst = candidates[rng.gen_range(0..candidates.len())];
        let a = &inst.algebra;
        let n = a.len();
        let x = rng.gen_range(0..n);
        let y = (x + rng.gen_range(1..n)) % n;
        let walls = a.walls().unwrap();
        let classes = walls.dilworth_colouring(x, y).map_err(|e| e.to_string())?;
        let members = a.interval_mask(x, y);
        let (sub, _) = a.induced(&members).unwrap();
        require(classes.len() == sub.rank().unwrap(), || format!("{}: class count at ({x}, {y})", inst.id))?;
        for class in &classes {
            for (i, &p) in class.iter().enumerate() {
                for &q in &class[i + 1..] {
                    let (op, oq) = (walls.wall(p).oriented_at(x), walls.wall(q).oriented_at(x));
                    require(op.le(&oq) || oq.le(&op), || format!("{}: class not totally ordered", inst.id))?;
                }
            }
        }
        let emb = walls.interval_chain_embedding(a, x, y).map_err(|e| e.to_string())?;
        emb.verify(a).map_err(|v| v.reason)?;
        let coord = |z: usize| -> Vec<usize> {
            classes.iter().map(|c| c.iter().filter(|&&w| walls.wall(w).separates(x, z)).count()).collect()
        };
        let pts: Vec<usize> = members.iter().collect();
        let mut seen: Vec<Vec<usize>> = pts.iter().map(|&z| coord(z)).collect();
        seen.sort();
        seen.dedup();
        require(seen.len() == pts.len(), || format!("{}: coordinates collide", inst.id))?;
        for _ in 0..32 {
            let [p, q, r]: [usize; 3] = std::array::from_fn(|_| pts[rng.gen_range(0..pts.len())]);
            let m = coord(a.median(p, q, r));
            let (cp, cq, cr) = (coord(p), coord(q), coord(r));
            let maj: Vec<usize> =
                (0..m.len()).map(|i| cp[i].max(cq[i]).min(cp[i].max(cr[i])).min(cq[i].max(cr[i]))).collect();
            require(m == maj, || format!("{}: coordinates do not preserve the median", inst.id))?;
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    for n in 2..=8 {
        starlet_scaling(n).map_err(|v| v.reason)?;
        let a = FiniteMedianAlgebra::starlet(n).unwrap();
        let k = min_isolating_branches(&a, &a.chain_subbase(), 0).map_err(|e| e.to_string())?;
        require(k == n, || format!("starlet({n}) needs {k} branches"))?;
    }
    Ok(())
}

/// Square vertices re-checked against a standalone window model.
fn criterion_7() -> Outcome {
    fn window(s: &PeriodicBiSequence, len: usize) -> Vec<bool> {
        (0..len as i64).map(|i| s.at(i)).collect()
    }
    for (x, y) in periodic_pairs(7, 100, 6) {
        require(x.period() <= 6 && y.period() <= 6 && x != y, || "bad pair".into())?;
        let sq = periodic_square_witness(&x, &y).map_err(|e| format!("{x} vs {y}: {e}"))?;
        let gcd = |mut a: usize, mut b: usize| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        let len =
            [x.period(), y.period()].into_iter().chain(sq.iter().map(|s| s.period())).fold(1, |l, p| l / gcd(l, p) * p);
        let (wx, wy) = (window(&x, len), window(&y, len));
        let w: Vec<Vec<bool>> = sq.iter().map(|s| window(s, len)).collect();
        for v in &w {
            require((0..len).all(|i| wx[i] != wy[i] || v[i] == wx[i]), || format!("{x} vs {y}: vertex outside"))?;
        }
        let maj = |p: &[bool], q: &[bool], r: &[bool]| -> Vec<bool> {
            (0..len).map(|i| (p[i] as u8 + q[i] as u8 + r[i] as u8) >= 2).collect()
        };
        // index 2i + j is (i, j); 0 and 3 opposite, 1 and 2 opposite
        require(maj(&w[1], &w[2], &w[0]) == w[0] && maj(&w[1], &w[2], &w[3]) == w[3], || "diagonal".into())?;
        require(maj(&w[0], &w[3], &w[1]) == w[1] && maj(&w[0], &w[3], &w[2]) == w[2], || "antidiagonal".into())?;
        require(w[0] != w[1] && w[0] != w[2] && w[1] != w[2] && w[1] != w[3] && w[2] != w[3], || {
            "repeated vertex".into()
        })?;
        let alg = square_algebra(&sq).map_err(|e| e.to_string())?;
        require(!alg.is_chain_interval(0, 3), || format!("{x} vs {y}: chain"))?;
    }
    Ok(())
}

fn criterion_8(corpus: &[Instance]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut caught = 0;
    for k in 0..50 {
        let inst = &corpus[rng.gen_range(0..corpus.len())];
        let n = inst.algebra.len();
        if n < 2 {
            continue;
        }
        let mut table = inst.algebra.to_table().map_err(|e| e.to_string())?;
        let i = rng.gen_range(0..table.len());
        table[i] = (table[i] + rng.gen_range(1..n)) % n;
        let detected = match FiniteMedianAlgebra::from_median_table(n, &table) {
            Err(_) => true,
            Ok(mutant) => run_registry(&[Instance::new(format!("mutant-{k}"), mutant)], None, 8)
                .map_err(|e| e.to_string())?
                .iter()
                .any(|r| r.verdict == Verdict::Fail),
        };
        require(detected, || format!("mutant of {} at entry {i} survived", inst.id))?;
        caught += 1;
    }
    require(caught > 0, || "no mutants".into())
}

fn main() {
    let corpus = build_corpus(&CorpusSpec::default()).expect("default corpus");
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| criterion_2(&corpus))),
        (3, Box::new(|| criterion_3(&corpus))),
        (4, Box::new(|| criterion_4(&corpus))),
        (5, Box::new(|| criterion_5(&corpus))),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(|| criterion_8(&corpus))),
    ];
    let mut failed = Vec::new();
    for (k, run) in criteria {
        match run() {
            Ok(()) => println!("criterion {k}: pass"),
            Err(why) => {
                println!("criterion {k}: fail ({why})");
                failed.push(k);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
