//! Seeded verification suites shared by the acceptance tests and the CLI
//! selftest verb. Every suite builds a deterministic report string: a rerun
//! with the same parameters must reproduce it byte for byte.

use crate::decomp::{
    canonical_block_lattice, recognize_permutation, verify_certificate, PermutationCertificate,
    Verdict,
};
use crate::fixtures;
use crate::group::{PGroup, Subgroup};
use crate::hnn::{kernel_abelianization, kernel_rank, roundtrip_check, synthesize_hnn};
use crate::lattice::{invariants, permutation_lattice, Lattice, sublattice_action};
use crate::linalg::{IntMat, PrecisionContext};
use crate::weiss::{
    check_weiss_classic, check_weiss_generalized, necessity_check, trivial_part_from_certificate,
    Provenance, TrivialPartCandidate,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::sync::Arc;

pub const FULL_SEEDS: u64 = 100;
pub const FULL_HNN_SEEDS: u64 = 50;
pub const MAX_TOTAL_RANK: usize = 48;

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<String>,
    /// canonical report, byte-identical across reruns with the same seeds
    pub report: String,
}

impl SuiteOutcome {
    fn new(name: &str) -> SuiteOutcome {
        SuiteOutcome {
            name: name.into(),
            passed: true,
            cases: 0,
            failures: Vec::new(),
            report: String::new(),
        }
    }

    fn record(&mut self, line: &str) {
        self.cases += 1;
        let _ = writeln!(self.report, "{line}");
    }

    fn fail(&mut self, line: String) {
        self.passed = false;
        let _ = writeln!(self.report, "FAIL {line}");
        self.failures.push(line);
    }
}

fn ctx_for(g: &PGroup) -> PrecisionContext {
    PrecisionContext::with_default_cap(g.p).expect("bundled prime")
}

/// Seeded unimodular matrix with small entries and its exact inverse.
pub fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> (IntMat, IntMat) {
    let mut s = IntMat::identity(n);
    let mut s_inv = IntMat::identity(n);
    if n <= 1 {
        return (s, s_inv);
    }
    let mut ops: Vec<(usize, usize, i64)> = Vec::new();
    for _ in 0..(2 * n) {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n);
        while j == i {
            j = rng.random_range(0..n);
        }
        let k = if rng.random_bool(0.5) { 1i64 } else { -1i64 };
        ops.push((i, j, k));
        s.add_row_mul(i, j, &BigInt::from(k));
    }
    for &(i, j, k) in ops.iter().rev() {
        s_inv.add_row_mul(i, j, &BigInt::from(-k));
    }
    (s, s_inv)
}

/// Random multiplicity vector over the subgroup classes with total rank
/// bounded by `max_rank`; classes are restricted by an optional filter.
pub fn random_multiplicities(
    g: &Arc<PGroup>,
    rng: &mut ChaCha8Rng,
    max_rank: usize,
    allowed: impl Fn(usize) -> bool,
) -> Vec<usize> {
    let classes = g.classify_subgroups();
    let n_classes = classes.class_reps.len();
    let index_of = |ci: usize| g.order() / classes.class_reps[ci].elements.len();
    let mut mults = vec![0usize; n_classes];
    let mut total = 0usize;
    loop {
        let candidates: Vec<usize> = (0..n_classes)
            .filter(|&ci| allowed(ci) && total + index_of(ci) <= max_rank)
            .collect();
        if candidates.is_empty() {
            break;
        }
        let ci = candidates[rng.random_range(0..candidates.len())];
        mults[ci] += 1;
        total += index_of(ci);
        if rng.random_bool(0.2) {
            break;
        }
    }
    mults
}

/// Scramble the canonical block module of a multiplicity vector.
pub fn scrambled_block_sum(
    g: &Arc<PGroup>,
    mults: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<(Lattice, IntMat, IntMat)> {
    let canon = canonical_block_lattice(g, mults)?;
    let (s, s_inv) = random_unimodular(canon.rank, rng);
    Ok((canon.conjugated(&s, &s_inv)?, s, s_inv))
}

fn seed_for(group_name: &str, seed: u64, purpose: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ purpose;
    for b in group_name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn mult_string(mults: &[usize]) -> String {
    let parts: Vec<String> = mults.iter().map(usize::to_string).collect();
    parts.join(",")
}

/// Criterion: the bundled paper fixture reproduces the published facts: the
/// restriction to N = <c1> is the sum of a trivial and a regular block, the
/// fixed points are the quotient coset lattice, and the module itself is not
/// a permutation module.
pub fn suite_paper_example() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("paper-example");
    let m = fixtures::paper_example()?;
    let g = m.group.clone();
    let ctx = ctx_for(&g);
    let n = g.subgroup(vec![0, 1])?;

    // restriction shape: trivial + regular over N
    let res = crate::lattice::restrict(&m, &n)?;
    match recognize_permutation(&res, &ctx)? {
        Verdict::IsPermutation(cert) => {
            let (ng, _) = g.subgroup_as_group(&n)?;
            let classes = ng.classify_subgroups();
            let mut shape = vec![0usize; classes.class_reps.len()];
            for (ci, rep) in classes.class_reps.iter().enumerate() {
                shape[ci] = if rep.elements.len() == 2 { 1 } else { 1 };
            }
            if cert.multiplicities == shape {
                out.record(&format!("restriction mults=[{}]", mult_string(&cert.multiplicities)));
            } else {
                out.fail(format!(
                    "restriction shape [{}] != trivial+regular",
                    mult_string(&cert.multiplicities)
                ));
            }
        }
        Verdict::NotPermutation { .. } => out.fail("restriction not permutation".into()),
    }

    // fixed points are Z_2[G/N] over G/N
    let mn = crate::lattice::invariants_as_quotient_lattice(&m, &n)?;
    match recognize_permutation(&mn, &ctx_for(&mn.group))? {
        Verdict::IsPermutation(cert) => {
            let classes = mn.group.classify_subgroups();
            let ok = cert
                .multiplicities
                .iter()
                .enumerate()
                .all(|(ci, &mult)| {
                    let size = classes.class_reps[ci].elements.len();
                    (size == 1 && mult == 1) || (size != 1 && mult == 0)
                });
            if ok && mn.rank == 2 {
                out.record("invariants recognized as the regular quotient lattice");
            } else {
                out.fail(format!(
                    "invariants shape [{}] rank {}",
                    mult_string(&cert.multiplicities),
                    mn.rank
                ));
            }
        }
        Verdict::NotPermutation { .. } => out.fail("invariants not permutation".into()),
    }

    // overall verdict
    match recognize_permutation(&m, &ctx)? {
        Verdict::NotPermutation { witness, .. } => {
            out.record(&format!("overall NotPermutation witness-rank={}", witness.rank));
        }
        Verdict::IsPermutation(_) => out.fail("paper example recognized as permutation".into()),
    }
    Ok(out)
}

/// Criterion: recognition recovers the multiplicities of scrambled block
/// sums exactly, with certificates that re-verify bit-exactly after a JSON
/// roundtrip.
pub fn suite_recognition(seeds: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("recognition");
    for name in fixtures::GROUP_NAMES {
        let g = fixtures::group(name)?;
        let ctx = ctx_for(&g);
        for seed in 0..seeds {
            let mut rng = seed_for(name, seed, 2);
            let mults = random_multiplicities(&g, &mut rng, MAX_TOTAL_RANK, |_| true);
            let (scrambled, _, _) = scrambled_block_sum(&g, &mults, &mut rng)?;
            match recognize_permutation(&scrambled, &ctx)? {
                Verdict::IsPermutation(cert) => {
                    if cert.multiplicities != mults {
                        out.fail(format!(
                            "{name} seed {seed}: recovered [{}] wanted [{}]",
                            mult_string(&cert.multiplicities),
                            mult_string(&mults)
                        ));
                        continue;
                    }
                    // serialize, re-parse, verify bit-exactly
                    let json = crate::io::certificate_to_json(&g, &cert);
                    let text = serde_json::to_string(&json).expect("serialize");
                    let parsed: serde_json::Value = serde_json::from_str(&text).expect("parse");
                    let cert2 = crate::io::certificate_from_json(&parsed, &g)?;
                    if cert2.change_of_basis != cert.change_of_basis
                        || cert2.multiplicities != cert.multiplicities
                    {
                        out.fail(format!("{name} seed {seed}: JSON roundtrip drift"));
                        continue;
                    }
                    if let Err(e) = verify_certificate(&scrambled, &cert2) {
                        out.fail(format!("{name} seed {seed}: re-verification failed: {e}"));
                        continue;
                    }
                    out.record(&format!(
                        "{name} seed {seed} rank {} mults [{}]",
                        scrambled.rank,
                        mult_string(&mults)
                    ));
                }
                Verdict::NotPermutation { .. } => {
                    out.fail(format!("{name} seed {seed}: constructed module not recognized"));
                }
            }
        }
    }
    Ok(out)
}

/// Normal subgroups of order p (they are central for p-groups, but collected
/// from the classification for transparency).
fn normal_order_p_subgroups(g: &Arc<PGroup>) -> Vec<Subgroup> {
    g.classify_subgroups()
        .all_subgroups
        .iter()
        .filter(|s| s.is_normal && s.elements.len() == g.p as usize)
        .cloned()
        .collect()
}

/// Criterion: generalized checker confirms hypotheses and conclusion on
/// constructions that satisfy them by construction.
pub fn suite_weiss_generalized(seeds: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("weiss-generalized");
    for name in fixtures::GROUP_NAMES {
        let g = fixtures::group(name)?;
        let ctx = ctx_for(&g);
        let ns = normal_order_p_subgroups(&g);
        if ns.is_empty() {
            continue;
        }
        for seed in 0..seeds {
            let mut rng = seed_for(name, seed, 3);
            let n = ns[rng.random_range(0..ns.len())].clone();
            let mults = random_multiplicities(&g, &mut rng, MAX_TOTAL_RANK, |_| true);
            let (scrambled, _s, s_inv) = scrambled_block_sum(&g, &mults, &mut rng)?;
            // candidate trivial part from the construction: blocks whose
            // stabilizer contains N, pushed through the scramble (a vector
            // with old coordinates w has new coordinates s_inv w)
            let canon_cert = PermutationCertificate {
                multiplicities: mults.clone(),
                change_of_basis: IntMat::identity(scrambled.rank),
            };
            let canon = canonical_block_lattice(&g, &mults)?;
            let w_canon = trivial_part_from_certificate(&canon, &n, &canon_cert);
            let w = &s_inv * &w_canon;
            let candidate = TrivialPartCandidate {
                basis: crate::lattice::Sublattice { basis: w },
                provenance: Provenance::Supplied,
            };
            let report = check_weiss_generalized(&scrambled, &n, Some(&candidate), &ctx)?;
            if report.hypothesis_i.holds()
                && report.hypothesis_ii.holds()
                && report.conclusion.is_permutation()
                && report.consistent
            {
                out.record(&format!(
                    "{name} seed {seed} N={:?} rank {} ok",
                    n.elements, scrambled.rank
                ));
            } else {
                out.fail(format!(
                    "{name} seed {seed}: hyp_i={} hyp_ii={} concl={} consistent={}",
                    report.hypothesis_i.holds(),
                    report.hypothesis_ii.holds(),
                    report.conclusion.is_permutation(),
                    report.consistent
                ));
            }
        }
    }
    Ok(out)
}

/// Criterion: classical checker on constructions with free restriction, for
/// normal subgroups of every order including |N| > p.
pub fn suite_weiss_classic(seeds: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("weiss-classic");
    for name in fixtures::GROUP_NAMES {
        let g = fixtures::group(name)?;
        let ctx = ctx_for(&g);
        let normals: Vec<Subgroup> = g
            .classify_subgroups()
            .all_subgroups
            .iter()
            .filter(|s| s.is_normal && s.elements.len() > 1)
            .cloned()
            .collect();
        if normals.is_empty() {
            continue;
        }
        for seed in 0..seeds {
            let mut rng = seed_for(name, seed, 4);
            let n = normals[rng.random_range(0..normals.len())].clone();
            // allowed classes: K with K meeting N trivially, so that the
            // restriction of Z_p[G/K] to N is free
            let classes = g.classify_subgroups().clone();
            let allowed = |ci: usize| -> bool {
                let k = &classes.class_reps[ci];
                k.elements
                    .iter()
                    .filter(|e| n.elements.binary_search(e).is_ok())
                    .count()
                    == 1
            };
            let mut mults = random_multiplicities(&g, &mut rng, MAX_TOTAL_RANK, allowed);
            if mults.iter().all(|&m| m == 0) {
                // ensure a nonempty module: the regular class always works
                let triv_class = classes
                    .class_reps
                    .iter()
                    .position(|s| s.elements.len() == 1)
                    .expect("trivial subgroup class");
                mults[triv_class] = 1;
            }
            let (scrambled, _, _) = scrambled_block_sum(&g, &mults, &mut rng)?;
            let report = check_weiss_classic(&scrambled, &n, &ctx)?;
            if report.hypothesis_i.holds()
                && report.hypothesis_ii.holds()
                && report.conclusion.is_permutation()
                && report.consistent
            {
                out.record(&format!(
                    "{name} seed {seed} |N|={} rank {} ok",
                    n.elements.len(),
                    scrambled.rank
                ));
            } else {
                out.fail(format!(
                    "{name} seed {seed} |N|={}: hyp_i={} hyp_ii={} concl={} consistent={}",
                    n.elements.len(),
                    report.hypothesis_i.holds(),
                    report.hypothesis_ii.holds(),
                    report.conclusion.is_permutation(),
                    report.consistent
                ));
            }
        }
    }
    Ok(out)
}

/// Criterion: every recognized permutation module from the recognition and
/// Weiss families passes the necessity check for every normal order-p
/// subgroup.
pub fn suite_necessity(seeds: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("necessity");
    for name in fixtures::GROUP_NAMES {
        let g = fixtures::group(name)?;
        let ctx = ctx_for(&g);
        let ns = normal_order_p_subgroups(&g);
        if ns.is_empty() {
            continue;
        }
        // replicate the module families of the recognition and Weiss suites
        let classes = g.classify_subgroups().clone();
        let normals: Vec<Subgroup> = classes
            .all_subgroups
            .iter()
            .filter(|s| s.is_normal && s.elements.len() > 1)
            .cloned()
            .collect();
        for (purpose, label) in [(2u64, "recognition"), (3, "generalized"), (4, "classic")] {
            for seed in 0..seeds {
                let mut rng = seed_for(name, seed, purpose);
                let mults = match purpose {
                    2 => random_multiplicities(&g, &mut rng, MAX_TOTAL_RANK, |_| true),
                    3 => {
                        let _ = rng.random_range(0..ns.len());
                        random_multiplicities(&g, &mut rng, MAX_TOTAL_RANK, |_| true)
                    }
                    _ => {
                        let n4 = normals[rng.random_range(0..normals.len())].clone();
                        let allowed = |ci: usize| -> bool {
                            let k = &classes.class_reps[ci];
                            k.elements
                                .iter()
                                .filter(|e| n4.elements.binary_search(e).is_ok())
                                .count()
                                == 1
                        };
                        let mut m = random_multiplicities(&g, &mut rng, MAX_TOTAL_RANK, allowed);
                        if m.iter().all(|&x| x == 0) {
                            let triv = classes
                                .class_reps
                                .iter()
                                .position(|s| s.elements.len() == 1)
                                .expect("trivial class");
                            m[triv] = 1;
                        }
                        m
                    }
                };
                let (scrambled, _, _) = scrambled_block_sum(&g, &mults, &mut rng)?;
                {
                    for n in &ns {
                        let report = necessity_check(&scrambled, n, &ctx)?;
                        if report.hypothesis_i.holds() && report.hypothesis_ii.holds() {
                            out.record(&format!(
                                "{name} {label} seed {seed} N={:?} ok",
                                n.elements
                            ));
                        } else {
                            out.fail(format!(
                                "{name} {label} seed {seed} N={:?}: necessity failed",
                                n.elements
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Criterion: HNN synthesis roundtrip and the kernel rank law.
pub fn suite_hnn_roundtrip(seeds: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("hnn-roundtrip");
    for name in fixtures::GROUP_NAMES {
        let g = fixtures::group(name)?;
        let ctx = ctx_for(&g);
        for seed in 0..seeds {
            let mut rng = seed_for(name, seed, 6);
            let mut mults = random_multiplicities(&g, &mut rng, MAX_TOTAL_RANK, |_| true);
            if mults.iter().all(|&m| m == 0) {
                mults[0] = 1; // the whole-group class: a single central letter
            }
            let cert = PermutationCertificate {
                multiplicities: mults.clone(),
                change_of_basis: IntMat::identity(
                    canonical_block_lattice(&g, &mults)?.rank,
                ),
            };
            let pres = synthesize_hnn(&cert, &g);
            let ab = kernel_abelianization(&pres)?;
            if ab.rank != kernel_rank(&pres) {
                out.fail(format!("{name} seed {seed}: rank law violated"));
                continue;
            }
            if roundtrip_check(&cert, &g, &ctx)? {
                out.record(&format!(
                    "{name} seed {seed} edges {} kernel-rank {}",
                    pres.edges.len(),
                    kernel_rank(&pres)
                ));
            } else {
                out.fail(format!("{name} seed {seed}: roundtrip mismatch"));
            }
        }
    }
    Ok(out)
}

/// Criterion: the rank of the fixed points of a coset lattice equals the
/// brute-force orbit count, over all subgroup pairs of all bundled groups.
pub fn suite_orbit_counts() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("orbit-counts");
    for name in fixtures::GROUP_NAMES {
        let g = fixtures::group(name)?;
        let classes = g.classify_subgroups().clone();
        let mut checked = 0usize;
        for l in &classes.all_subgroups {
            let perm = permutation_lattice(&g, l)?;
            for k in &classes.all_subgroups {
                let rank = invariants(&perm, k)?.basis.cols();
                let orbits = g.orbit_count_on_cosets(k, l)?;
                if rank != orbits {
                    out.fail(format!(
                        "{name}: K={:?} L={:?} rank {rank} orbits {orbits}",
                        k.elements, l.elements
                    ));
                }
                checked += 1;
            }
        }
        out.record(&format!("{name} pairs {checked}"));
    }
    Ok(out)
}

/// Criterion: negative controls with concrete witnesses.
pub fn suite_negative_controls() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("negative-controls");
    let ctx2 = PrecisionContext::with_default_cap(2)?;

    let sign = fixtures::lattice("sign-c2")?;
    match recognize_permutation(&sign, &ctx2)? {
        Verdict::NotPermutation { witness, witness_basis } => {
            // the witness is a concrete summand: check it embeds
            if witness.rank == 1 && witness_basis.cols() == 1 {
                out.record("sign-c2 NotPermutation witness-rank=1");
            } else {
                out.fail("sign-c2 witness malformed".into());
            }
        }
        Verdict::IsPermutation(_) => out.fail("sign lattice recognized as permutation".into()),
    }
    let c = sign.group.full_subgroup();
    match crate::decomp::cp_split(&sign, &c, &ctx2) {
        Err(Error::NotPermutationOverC) => out.record("sign-c2 cp-split NotPermutationOverC"),
        other => out.fail(format!("sign-c2 cp-split: unexpected {other:?}")),
    }

    let m = fixtures::paper_example()?;
    match recognize_permutation(&m, &ctx2)? {
        Verdict::NotPermutation { witness, witness_basis } => {
            // the witness summand really is a sublattice with an action
            let sub = sublattice_action(&m, &witness_basis)?;
            if sub.rank == witness.rank {
                out.record(&format!("paper-example NotPermutation witness-rank={}", witness.rank));
            } else {
                out.fail("paper-example witness does not embed".into());
            }
        }
        Verdict::IsPermutation(_) => out.fail("paper example recognized as permutation".into()),
    }
    Ok(out)
}

/// Run every suite at the given sizes (full sizes by default elsewhere).
pub fn run_all(seeds: u64, hnn_seeds: u64) -> Result<Vec<SuiteOutcome>> {
    Ok(vec![
        suite_paper_example()?,
        suite_recognition(seeds)?,
        suite_weiss_generalized(seeds)?,
        suite_weiss_classic(seeds)?,
        suite_necessity(seeds)?,
        suite_hnn_roundtrip(hnn_seeds)?,
        suite_orbit_counts()?,
        suite_negative_controls()?,
    ])
}
