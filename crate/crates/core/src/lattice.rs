//! Lattices over the group ring: finite-rank free modules with an exact
//! integer action of a finite p-group, and the functors applied to them:
//! permutation lattices, restriction, induction, invariants, coinvariants,
//! hom spaces, direct sums.

use crate::group::{Elem, PGroup, Subgroup};
use crate::linalg::{
    kernel_z, sat_p, sat_q, smith_z, unit_part, ColumnSolver, FpMat, IntMat,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::sync::Arc;

/// A free Z_p-module of finite rank with a group acting by integer matrices.
/// Action matrices act on column vectors; the matrix of g has the images of
/// the basis vectors as its columns.
#[derive(Clone)]
pub struct Lattice {
    pub group: Arc<PGroup>,
    pub rank: usize,
    action: Vec<IntMat>,
}

/// A sublattice of an ambient lattice, given by independent basis columns.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub basis: IntMat,
}

/// Basis of the integral intertwiners source -> target.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub basis: Vec<IntMat>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(rank {}, group order {})", self.rank, self.group.order())
    }
}

impl Lattice {
    /// Build from matrices for every element. The homomorphism property is
    /// checked on generator*element pairs, which by induction on word length
    /// covers all pairs.
    pub fn new(group: Arc<PGroup>, action: Vec<IntMat>) -> Result<Lattice> {
        let n = group.order();
        if action.len() != n {
            return Err(Error::InvalidInput(format!(
                "need {n} action matrices, got {}",
                action.len()
            )));
        }
        let rank = action[0].rows();
        for m in &action {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::InvalidInput("action matrices must be square of equal rank".into()));
            }
        }
        if !action[group.identity()].is_identity() {
            return Err(Error::InvalidInput("identity must act as the identity matrix".into()));
        }
        let lat = Lattice { group, rank, action };
        lat.check_homomorphism()?;
        Ok(lat)
    }

    /// Internal constructor for actions that are homomorphisms by
    /// construction (conjugates, restrictions to invariant sublattices,
    /// block sums); skips the generator check.
    pub(crate) fn new_unchecked(group: Arc<PGroup>, action: Vec<IntMat>) -> Lattice {
        let rank = action.first().map_or(0, IntMat::rows);
        Lattice { group, rank, action }
    }

    /// Build from generator matrices by word evaluation along the canonical
    /// breadth-first enumeration.
    pub fn from_generator_action(group: Arc<PGroup>, gen_action: &[(Elem, IntMat)]) -> Result<Lattice> {
        let n = group.order();
        let rank = gen_action
            .first()
            .map(|(_, m)| m.rows())
            .unwrap_or(if n == 1 { 0 } else { usize::MAX });
        if rank == usize::MAX {
            return Err(Error::InvalidInput("no generator matrices given".into()));
        }
        let mut action: Vec<Option<IntMat>> = vec![None; n];
        action[group.identity()] = Some(IntMat::identity(rank));
        for (g, m) in gen_action {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::InvalidInput("generator matrices must be square of equal rank".into()));
            }
            if *g != group.identity() {
                action[*g] = Some(m.clone());
            } else if !m.is_identity() {
                return Err(Error::InvalidInput("identity generator must act as identity".into()));
            }
        }
        // breadth-first products
        loop {
            let mut progressed = false;
            for g in 0..n {
                if action[g].is_none() {
                    continue;
                }
                for (h, m) in gen_action {
                    let gh = group.mul(g, *h);
                    if action[gh].is_none() {
                        let prod = action[g].as_ref().unwrap() * m;
                        action[gh] = Some(prod);
                        progressed = true;
                    }
                }
            }
            if action.iter().all(Option::is_some) {
                break;
            }
            if !progressed {
                return Err(Error::InvalidInput(
                    "generator matrices do not cover the group (generators do not generate)".into(),
                ));
            }
        }
        Lattice::new(group, action.into_iter().map(Option::unwrap).collect())
    }

    fn check_homomorphism(&self) -> Result<()> {
        let g = &self.group;
        for &gen in g.generators() {
            for h in 0..g.order() {
                let lhs = &self.action[gen] * &self.action[h];
                if lhs != self.action[g.mul(gen, h)] {
                    return Err(Error::InvalidInput("action is not a group homomorphism".into()));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive homomorphism check over all element pairs.
    pub fn check_homomorphism_all_pairs(&self) -> bool {
        let g = &self.group;
        (0..g.order()).all(|a| {
            (0..g.order()).all(|b| &self.action[a] * &self.action[b] == self.action[g.mul(a, b)])
        })
    }

    #[inline]
    pub fn action(&self, g: Elem) -> &IntMat {
        &self.action[g]
    }

    /// The trivial rank-r lattice.
    pub fn trivial(group: Arc<PGroup>, r: usize) -> Lattice {
        let action = (0..group.order()).map(|_| IntMat::identity(r)).collect();
        Lattice {
            group,
            rank: r,
            action,
        }
    }

    /// Conjugate the action by an invertible basis change: g -> s^{-1} g s
    /// (columns of s are the new basis vectors in old coordinates).
    pub fn conjugated(&self, s: &IntMat, s_inv: &IntMat) -> Result<Lattice> {
        if !(s * s_inv).is_identity() {
            return Err(Error::InvalidInput("basis change is not invertible".into()));
        }
        let action = self
            .action
            .iter()
            .map(|m| &(s_inv * m) * s)
            .collect();
        Ok(Lattice::new_unchecked(self.group.clone(), action))
    }
}

/// The coset lattice Z_p[G/K]: rank [G:K], with g permuting the cosets of the
/// canonical transversal by left multiplication.
pub fn permutation_lattice(group: &Arc<PGroup>, k: &Subgroup) -> Result<Lattice> {
    let coset_of = group.coset_index_map(k)?;
    let reps = group.coset_transversal(k)?;
    let rank = reps.len();
    let action = (0..group.order())
        .map(|g| {
            let mut m = IntMat::zeros(rank, rank);
            for (c, &r) in reps.iter().enumerate() {
                m.set(coset_of[group.mul(g, r)], c, BigInt::one());
            }
            m
        })
        .collect();
    Ok(Lattice::new_unchecked(group.clone(), action))
}

/// The regular lattice Z_p[G].
pub fn regular_lattice(group: &Arc<PGroup>) -> Lattice {
    permutation_lattice(group, &group.trivial_subgroup()).expect("trivial subgroup")
}

pub fn direct_sum(a: &Lattice, b: &Lattice) -> Result<Lattice> {
    if !Arc::ptr_eq(&a.group, &b.group) && a.group.order() != b.group.order() {
        return Err(Error::GroupMismatch);
    }
    let action = (0..a.group.order())
        .map(|g| a.action(g).block_diag(b.action(g)))
        .collect();
    Ok(Lattice::new_unchecked(a.group.clone(), action))
}

/// Restrict the action to a subgroup, repackaged as a standalone group.
pub fn restrict(m: &Lattice, k: &Subgroup) -> Result<Lattice> {
    let (kg, elems) = m.group.subgroup_as_group(k)?;
    let action = elems.iter().map(|&e| m.action(e).clone()).collect();
    Lattice::new(kg, action)
}

/// Saturated fixed-point sublattice M^K: the integer kernel of the stacked
/// system (action(k) - 1) x = 0 over generators of K.
pub fn invariants(m: &Lattice, k: &Subgroup) -> Result<Sublattice> {
    if !m.group.is_subgroup(&k.elements) {
        return Err(Error::NotASubgroup);
    }
    let gens = m.group.subgroup_generators(k);
    let id = IntMat::identity(m.rank);
    let mut stacked: Option<IntMat> = None;
    for g in gens {
        let block = m.action(g) - &id;
        stacked = Some(match stacked {
            None => block,
            Some(s) => s.vstack(&block),
        });
    }
    let basis = match stacked {
        None => IntMat::identity(m.rank),
        Some(s) => kernel_z(&s),
    };
    Ok(Sublattice { basis })
}

/// M^N as a lattice over the quotient group G/N, for normal N. The basis is
/// the honest integer kernel, so coordinates of the quotient action are
/// integral.
pub fn invariants_as_quotient_lattice(m: &Lattice, n: &Subgroup) -> Result<Lattice> {
    if !n.is_normal {
        return Err(Error::NotNormal);
    }
    let inv = invariants(m, n)?;
    let (q, coset_map) = m.group.quotient(n)?;
    let reps = m.group.coset_transversal(n)?;
    debug_assert_eq!(reps.len(), q.order());
    // quotient element i corresponds to coset of reps[i] under coset_map
    let mut action = vec![IntMat::identity(inv.basis.cols()); q.order()];
    let solver = ColumnSolver::new(&inv.basis);
    for &r in &reps {
        let qi = coset_map[r];
        if qi == 0 {
            continue;
        }
        let image = m.action(r) * &inv.basis;
        action[qi] = solver.solve_mat_integral(&image)?;
    }
    debug_assert_eq!(coset_map[reps[0]], 0);
    Lattice::new(q, action)
}

/// The action of the whole group on an invariant sublattice, in the
/// coordinates of its basis columns. Solves exactly for the generators and
/// fills in the remaining elements by word evaluation.
pub fn sublattice_action(parent: &Lattice, basis: &IntMat) -> Result<Lattice> {
    let g = &parent.group;
    let n = g.order();
    let k = basis.cols();
    let solver = ColumnSolver::new(basis);
    let mut action: Vec<Option<IntMat>> = vec![None; n];
    action[g.identity()] = Some(IntMat::identity(k));
    for &gen in g.generators() {
        let image = parent.action(gen) * basis;
        action[gen] = Some(solver.solve_mat_integral(&image)?);
    }
    loop {
        let mut progressed = false;
        for e in 0..n {
            if action[e].is_none() {
                continue;
            }
            for &gen in g.generators() {
                let eg = g.mul(e, gen);
                if action[eg].is_none() {
                    let prod = action[e].as_ref().unwrap() * action[gen].as_ref().unwrap();
                    action[eg] = Some(prod);
                    progressed = true;
                }
            }
        }
        if action.iter().all(Option::is_some) {
            break;
        }
        if !progressed {
            return Err(Error::InternalInconsistency(
                "group generators do not generate".into(),
            ));
        }
    }
    Ok(Lattice::new_unchecked(
        g.clone(),
        action.into_iter().map(Option::unwrap).collect(),
    ))
}

/// Torsion exponents of a coinvariant quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionReport {
    /// positive p-adic valuations of the elementary divisors
    pub exponents: Vec<u32>,
}

impl TorsionReport {
    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// Coinvariants M_K = M / span{(action(k) - 1) m}: the free part as a lattice
/// (over G/K when K is normal, over the trivial extension of the same group
/// otherwise is not needed by any caller) plus the p-power torsion report.
pub fn coinvariants(m: &Lattice, k: &Subgroup) -> Result<(Lattice, TorsionReport)> {
    if !m.group.is_subgroup(&k.elements) {
        return Err(Error::NotASubgroup);
    }
    let gens = m.group.subgroup_generators(k);
    let id = IntMat::identity(m.rank);
    let mut span: Option<IntMat> = None;
    for g in gens {
        let block = m.action(g) - &id;
        span = Some(match span {
            None => block,
            Some(s) => s.hstack(&block),
        });
    }
    let span = span.unwrap_or_else(|| IntMat::zeros(m.rank, 0));
    let s = smith_z(&span);
    let exponents: Vec<u32> = s
        .diag
        .iter()
        .map(|d| unit_part(d, m.group.p).0)
        .filter(|&v| v > 0)
        .collect();

    // the quotient modulo the full saturation of the span is a free lattice;
    // over the localization it agrees with the free part of M_K
    let r = s.rank;
    let proj = s.u.submatrix(r..m.rank, 0..m.rank);
    let back = s.u_inv.submatrix(0..m.rank, r..m.rank);
    let free_rank = m.rank - r;

    let group = if k.is_normal {
        m.group.quotient(k)?.0
    } else {
        // coinvariants still make sense as a plain module; callers in this
        // crate always pass normal subgroups when they need the action
        m.group.quotient(&m.group.subgroup(m.group.generated_subgroup(&k.elements))?)?.0
    };
    let reps = m.group.coset_transversal(k)?;
    let coset_map = m.group.coset_index_map(k)?;
    let mut action = vec![IntMat::identity(free_rank); group.order()];
    for &rep in &reps {
        let qi = coset_map[rep];
        action[qi] = &(&proj * m.action(rep)) * &back;
    }
    Ok((Lattice::new(group, action)?, TorsionReport { exponents }))
}

/// Induced lattice: rank [G:K] * rank(L), standard construction along the
/// canonical transversal. For g, r with g*r = r'*k the block (r', r) carries
/// the action of k on L.
pub fn induce(k: &Subgroup, l: &Lattice, g: &Arc<PGroup>) -> Result<Lattice> {
    // l must be a lattice over the subgroup-as-group of k
    let (kg, elems) = g.subgroup_as_group(k)?;
    if l.group.order() != kg.order() {
        return Err(Error::GroupMismatch);
    }
    let lookup: std::collections::BTreeMap<Elem, usize> =
        elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let reps = g.coset_transversal(k)?;
    let coset_of = g.coset_index_map(k)?;
    let nblocks = reps.len();
    let lr = l.rank;
    let rank = nblocks * lr;
    let mut action = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let mut m = IntMat::zeros(rank, rank);
        for (c, &r) in reps.iter().enumerate() {
            let xr = g.mul(x, r);
            let c2 = coset_of[xr];
            // k = reps[c2]^{-1} * x * r lies in K
            let kk = g.mul(g.inv(reps[c2]), xr);
            let kl = lookup[&kk];
            let block = l.action(kl);
            for i in 0..lr {
                for j in 0..lr {
                    let v = block.get(i, j);
                    if !v.is_zero() {
                        m.set(c2 * lr + i, c * lr + j, v.clone());
                    }
                }
            }
        }
        action.push(m);
    }
    Lattice::new(g.clone(), action)
}

/// All integral intertwiners source -> target: the saturated kernel of
/// T rho_A(g) - rho_B(g) T = 0 over the generators. Computed directly for
/// small systems; via the saturated norm image for large ones. The two
/// routes agree and are cross-checked in tests.
pub fn hom_space(a: &Lattice, b: &Lattice) -> Result<HomSpace> {
    if a.group.order() != b.group.order() {
        return Err(Error::GroupMismatch);
    }
    let dim = a.rank * b.rank;
    let basis_cols = if dim <= 400 {
        hom_space_kernel_route(a, b)
    } else {
        hom_space_norm_route(a, b)
    };
    let basis = (0..basis_cols.cols())
        .map(|j| unvec(&basis_cols.col(j), b.rank, a.rank))
        .collect();
    Ok(HomSpace { basis })
}

/// vec(T) columns for the intertwiner space, via the stacked kernel.
pub(crate) fn hom_space_kernel_route(a: &Lattice, b: &Lattice) -> IntMat {
    // vec(X T Y) = (Y^t (x) X) vec(T); condition T rho_A(g) = rho_B(g) T
    // becomes (rho_A(g)^t (x) I - I (x) rho_B(g)) vec(T) = 0
    let ia = IntMat::identity(a.rank);
    let ib = IntMat::identity(b.rank);
    let mut stacked: Option<IntMat> = None;
    for &g in a.group.generators() {
        let lhs = a.action(g).transpose().kron(&ib);
        let rhs = ia.kron(b.action(g));
        let block = &lhs - &rhs;
        stacked = Some(match stacked {
            None => block,
            Some(s) => s.vstack(&block),
        });
    }
    match stacked {
        None => IntMat::identity(a.rank * b.rank),
        Some(s) => kernel_z(&s),
    }
}

/// vec(T) columns via the p-saturated image of the averaging operator
/// N = sum_g rho_A(g^{-1})^t (x) rho_B(g).
pub(crate) fn hom_space_norm_route(a: &Lattice, b: &Lattice) -> IntMat {
    let g = &a.group;
    let dim = a.rank * b.rank;
    let mut norm = IntMat::zeros(dim, dim);
    for x in 0..g.order() {
        let t = a.action(g.inv(x)).transpose().kron(b.action(x));
        norm = &norm + &t;
    }
    // independent columns mod p first; escalate once through an exact rank
    // check to guard against mod-p rank collapse
    let p = g.p;
    let mut m = FpMat::from_int(&norm, p);
    let pivots = m.rref();
    let exact_rank = smith_z(&norm).rank;
    let cols: Vec<Vec<BigInt>> = if exact_rank == pivots.len() {
        pivots.iter().map(|&j| norm.col(j)).collect()
    } else {
        // rare: the mod-p rank collapsed, select an image basis exactly
        let s = smith_z(&norm);
        (0..s.rank)
            .map(|i| {
                let mut col = s.u_inv.col(i);
                for c in col.iter_mut() {
                    *c = &*c * &s.diag[i];
                }
                col
            })
            .collect()
    };
    let sel = IntMat::from_cols(dim, &cols);
    sat_p(&sat_q(&sel), p)
}

pub(crate) fn unvec(v: &[BigInt], rows: usize, cols: usize) -> IntMat {
    // vec stacks columns: v[c * rows + r]... here we use the Kronecker
    // convention vec(T)_(j * rows + i) = T_(i, j) with j indexing source
    // basis vectors (columns of T)
    IntMat::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
}

pub(crate) fn vec_mat(t: &IntMat) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(t.rows() * t.cols());
    for j in 0..t.cols() {
        for i in 0..t.rows() {
            v.push(t.get(i, j).clone());
        }
    }
    v
}
