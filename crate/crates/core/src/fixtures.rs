//! Bundled groups and lattices, addressable by name from the CLI and the
//! test suites.

use crate::decomp::PermutationCertificate;
use crate::group::PGroup;
use crate::lattice::{regular_lattice, Lattice};
use crate::linalg::IntMat;
use crate::{Error, Result};
use std::sync::Arc;

pub const GROUP_NAMES: [&str; 8] = [
    "c2",
    "c4",
    "c2xc2",
    "d4",
    "q8",
    "c8",
    "c3xc3",
    "heisenberg3",
];

/// All fixture names: bundled groups, the paper example, regular and trivial
/// lattices over every bundled group, the sign lattice, and the mixed
/// certificate over C2.
pub fn fixtures() -> Vec<String> {
    let mut out: Vec<String> = GROUP_NAMES.iter().map(|s| s.to_string()).collect();
    out.push("paper-example".into());
    for g in GROUP_NAMES {
        out.push(format!("regular-{g}"));
        out.push(format!("trivial-{g}"));
    }
    out.push("sign-c2".into());
    out.push("c2-mixed".into());
    out
}

pub fn group(name: &str) -> Result<Arc<PGroup>> {
    let gens: Vec<Vec<usize>> = match name {
        "c2" => vec![vec![1, 0]],
        "c4" => vec![vec![1, 2, 3, 0]],
        "c2xc2" => vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
        "d4" => vec![vec![1, 2, 3, 0], vec![2, 1, 0, 3]],
        "q8" => vec![
            vec![1, 2, 3, 0, 5, 6, 7, 4],
            vec![4, 7, 6, 5, 2, 1, 0, 3],
        ],
        "c8" => vec![vec![1, 2, 3, 4, 5, 6, 7, 0]],
        "c3xc3" => vec![vec![1, 2, 0, 3, 4, 5], vec![0, 1, 2, 4, 5, 3]],
        "heisenberg3" => heisenberg3_generators(),
        _ => return Err(Error::InvalidInput(format!("unknown group fixture {name:?}"))),
    };
    let degree = gens[0].len();
    PGroup::from_permutations(&gens, degree)
}

/// The two elementary transvections of the unitriangular group over F_3,
/// acting on the 27 vectors of F_3^3 (index v0 + 3 v1 + 9 v2).
fn heisenberg3_generators() -> Vec<Vec<usize>> {
    let idx = |v: [usize; 3]| v[0] + 3 * v[1] + 9 * v[2];
    let mut x = vec![0usize; 27];
    let mut y = vec![0usize; 27];
    for v0 in 0..3 {
        for v1 in 0..3 {
            for v2 in 0..3 {
                let i = idx([v0, v1, v2]);
                x[i] = idx([(v0 + v1) % 3, v1, v2]);
                y[i] = idx([v0, (v1 + v2) % 3, v2]);
            }
        }
    }
    vec![x, y]
}

/// The rank-3 module over C2 x C2 on the ordered basis (x, a, b):
/// c1 fixes x and swaps a, b; c2 sends x to x + a + b and negates a, b.
pub fn paper_example() -> Result<Lattice> {
    let g = group("c2xc2")?;
    let c1 = IntMat::from_rows(vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
    let c2 = IntMat::from_rows(vec![vec![1, 0, 0], vec![1, -1, 0], vec![1, 0, -1]]);
    Lattice::from_generator_action(g, &[(1, c1), (2, c2)])
}

/// Named lattice fixtures.
pub fn lattice(name: &str) -> Result<Lattice> {
    if name == "paper-example" {
        return paper_example();
    }
    if name == "sign-c2" {
        let g = group("c2")?;
        return Lattice::from_generator_action(g, &[(1, IntMat::from_rows(vec![vec![-1]]))]);
    }
    if let Some(gname) = name.strip_prefix("regular-") {
        return Ok(regular_lattice(&group(gname)?));
    }
    if let Some(gname) = name.strip_prefix("trivial-") {
        return Ok(Lattice::trivial(group(gname)?, 1));
    }
    Err(Error::InvalidInput(format!("unknown lattice fixture {name:?}")))
}

/// Named certificate fixtures (for the HNN commands). "c2-mixed" is the
/// certificate with one trivial-module block and two regular blocks over C2.
pub fn certificate(name: &str) -> Result<(PermutationCertificate, Arc<PGroup>)> {
    match name {
        "c2-mixed" => {
            let g = group("c2")?;
            let classes = g.classify_subgroups();
            let mut mults = vec![0usize; classes.class_reps.len()];
            for (ci, rep) in classes.class_reps.iter().enumerate() {
                mults[ci] = match rep.elements.len() {
                    2 => 1, // whole group: one trivial block
                    1 => 2, // trivial subgroup: two regular blocks
                    _ => 0,
                };
            }
            let canon = crate::decomp::canonical_block_lattice(&g, &mults)?;
            let cert = PermutationCertificate {
                multiplicities: mults,
                change_of_basis: IntMat::identity(canon.rank),
            };
            Ok((cert, g))
        }
        _ => Err(Error::InvalidInput(format!(
            "unknown certificate fixture {name:?}"
        ))),
    }
}
