//! Finite p-group combinatorics: elements, subgroups up to conjugacy, cosets,
//! transversals, orbits. Groups are tiny (order <= 256) and represented by
//! full multiplication tables, so everything here is honest brute force.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::{Arc, OnceLock};

pub const ORDER_CAP: usize = 256;

pub type Elem = usize;

/// A finite p-group given by its complete multiplication table.
/// Element 0 is always the identity; the element ordering is the canonical
/// breadth-first enumeration from the generators, so all derived data
/// (subgroup classifications, transversals, certificates) is reproducible.
#[derive(Debug)]
pub struct PGroup {
    pub p: u64,
    order: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    element_orders: Vec<usize>,
    generators: Vec<Elem>,
    /// permutation images when built from permutations (empty otherwise)
    perms: Vec<Vec<usize>>,
    classification: OnceLock<SubgroupClassification>,
    /// per-class locality flags for coset-lattice endomorphism rings,
    /// filled lazily by the decomposition machinery
    pub(crate) coset_end_local: OnceLock<Vec<bool>>,
}

/// A subgroup as a sorted element-index set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    pub elements: Vec<Elem>,
    pub is_normal: bool,
}

#[derive(Debug, Clone)]
pub struct SubgroupClassification {
    pub all_subgroups: Vec<Subgroup>,
    pub class_reps: Vec<Subgroup>,
    /// index into `all_subgroups` -> index into `class_reps`
    pub class_of: Vec<usize>,
}

impl PGroup {
    /// Build the closure of permutation generators on `degree` points.
    /// The prime is inferred from the group order; a trivial group defaults
    /// to p = 2 (use `from_permutations_with_prime` when p matters).
    pub fn from_permutations(gens: &[Vec<usize>], degree: usize) -> Result<Arc<PGroup>> {
        Self::closure(gens, degree, None)
    }

    pub fn from_permutations_with_prime(
        gens: &[Vec<usize>],
        degree: usize,
        p: u64,
    ) -> Result<Arc<PGroup>> {
        Self::closure(gens, degree, Some(p))
    }

    fn closure(gens: &[Vec<usize>], degree: usize, p_hint: Option<u64>) -> Result<Arc<PGroup>> {
        for g in gens {
            if g.len() != degree || !is_permutation(g) {
                return Err(Error::InvalidInput(format!(
                    "generator {g:?} is not a permutation of 0..{degree}"
                )));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, Elem> = BTreeMap::new();
        index.insert(id, 0);
        let mut queue: VecDeque<Elem> = VecDeque::new();
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let prod = compose(&elems[i], g);
                if !index.contains_key(&prod) {
                    if elems.len() == ORDER_CAP {
                        return Err(Error::OrderCapExceeded(ORDER_CAP));
                    }
                    index.insert(prod.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(prod);
                }
            }
        }
        let order = elems.len();
        let p = match p_hint {
            Some(p) => {
                if !crate::linalg::is_prime(p) {
                    return Err(Error::InvalidInput(format!("{p} is not prime")));
                }
                if !is_p_power(order, p) {
                    return Err(Error::OrderNotPPower(order, p));
                }
                p
            }
            None => infer_prime(order)?,
        };

        let mut mul = vec![0; order * order];
        for i in 0..order {
            for j in 0..order {
                let prod = compose(&elems[i], &elems[j]);
                mul[i * order + j] = *index
                    .get(&prod)
                    .expect("closure is closed under multiplication");
            }
        }
        let generators = gens
            .iter()
            .map(|g| index[g])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let g = Self::finish(p, order, mul, generators, elems)?;
        Ok(Arc::new(g))
    }

    /// Build directly from a multiplication table (identity must be index 0).
    pub fn from_table(p: u64, mul: Vec<Elem>, generators: Vec<Elem>) -> Result<Arc<PGroup>> {
        let order = (mul.len() as f64).sqrt() as usize;
        if order * order != mul.len() {
            return Err(Error::InvalidInput("multiplication table is not square".into()));
        }
        if !is_p_power(order, p) {
            return Err(Error::OrderNotPPower(order, p));
        }
        Ok(Arc::new(Self::finish(p, order, mul, generators, Vec::new())?))
    }

    fn finish(
        p: u64,
        order: usize,
        mul: Vec<Elem>,
        generators: Vec<Elem>,
        perms: Vec<Vec<usize>>,
    ) -> Result<PGroup> {
        // identity and inverses
        if (0..order).any(|i| mul[i] != i || mul[i * order] != i) {
            return Err(Error::InvalidInput("index 0 is not an identity".into()));
        }
        let mut inv = vec![usize::MAX; order];
        for i in 0..order {
            for j in 0..order {
                if mul[i * order + j] == 0 {
                    inv[i] = j;
                }
            }
        }
        if inv.contains(&usize::MAX) {
            return Err(Error::InvalidInput("an element has no inverse".into()));
        }
        // full associativity check at this scale, sampled above order 64
        let assoc_ok = if order <= 64 {
            (0..order).all(|a| {
                (0..order).all(|b| {
                    (0..order).all(|c| {
                        mul[mul[a * order + b] * order + c] == mul[a * order + mul[b * order + c]]
                    })
                })
            })
        } else {
            (0..order).step_by(3).all(|a| {
                (0..order).step_by(2).all(|b| {
                    (0..order).all(|c| {
                        mul[mul[a * order + b] * order + c] == mul[a * order + mul[b * order + c]]
                    })
                })
            })
        };
        if !assoc_ok {
            return Err(Error::InvalidInput("multiplication table is not associative".into()));
        }
        let mut element_orders = vec![1usize; order];
        for i in 0..order {
            let mut x = i;
            let mut n = 1;
            while x != 0 {
                x = mul[x * order + i];
                n += 1;
            }
            element_orders[i] = n;
            if !is_p_power(n, p) {
                return Err(Error::OrderNotPPower(n, p));
            }
        }
        Ok(PGroup {
            p,
            order,
            mul,
            inv,
            element_orders,
            generators,
            perms,
            classification: OnceLock::new(),
            coset_end_local: OnceLock::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a]
    }

    pub fn conjugate(&self, g: Elem, x: Elem) -> Elem {
        // g x g^{-1}
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        self.element_orders[a]
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn permutation_images(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Closure of a set of elements, sorted.
    pub fn generated_subgroup(&self, seed: &[Elem]) -> Vec<Elem> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut members = vec![0];
        let mut queue: VecDeque<Elem> = VecDeque::new();
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                members.push(s);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let push = |y: Elem, in_set: &mut Vec<bool>, members: &mut Vec<Elem>, queue: &mut VecDeque<Elem>| {
                if !in_set[y] {
                    in_set[y] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            };
            push(self.inv(x), &mut in_set, &mut members, &mut queue);
            let snapshot: Vec<Elem> = members.clone();
            for &m in &snapshot {
                push(self.mul(x, m), &mut in_set, &mut members, &mut queue);
                push(self.mul(m, x), &mut in_set, &mut members, &mut queue);
            }
        }
        members.sort_unstable();
        members
    }

    pub fn is_subgroup(&self, elements: &[Elem]) -> bool {
        if elements.is_empty() || elements[0] != 0 {
            return elements.contains(&0) && self.is_subgroup_unsorted(elements);
        }
        self.is_subgroup_unsorted(elements)
    }

    fn is_subgroup_unsorted(&self, elements: &[Elem]) -> bool {
        let set: BTreeSet<Elem> = elements.iter().copied().collect();
        if !set.contains(&0) || self.order % set.len() != 0 {
            return false;
        }
        set.iter().all(|&a| {
            set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b)))
        })
    }

    pub fn subgroup(&self, elements: Vec<Elem>) -> Result<Subgroup> {
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        if !self.is_subgroup(&elements) {
            return Err(Error::NotASubgroup);
        }
        let is_normal = self.is_normal_set(&elements);
        Ok(Subgroup { elements, is_normal })
    }

    fn is_normal_set(&self, elements: &[Elem]) -> bool {
        let set: BTreeSet<Elem> = elements.iter().copied().collect();
        (0..self.order).all(|g| elements.iter().all(|&x| set.contains(&self.conjugate(g, x))))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: vec![0],
            is_normal: true,
        }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order).collect(),
            is_normal: true,
        }
    }

    /// Complete subgroup list and conjugacy classes, cached. Deterministic:
    /// subgroups sorted by (size, element list); class representatives are
    /// the smallest members of their classes in that order.
    pub fn classify_subgroups(&self) -> &SubgroupClassification {
        self.classification.get_or_init(|| self.classify_uncached())
    }

    fn classify_uncached(&self) -> SubgroupClassification {
        // breadth-first closure over element additions, seeded by cyclic
        // subgroups
        let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
        seen.insert(vec![0]);
        let mut frontier: Vec<Vec<Elem>> = vec![vec![0]];
        while let Some(h) = frontier.pop() {
            for g in 1..self.order {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut seed = h.clone();
                seed.push(g);
                let closure = self.generated_subgroup(&seed);
                if seen.insert(closure.clone()) {
                    frontier.push(closure);
                }
            }
        }
        let mut all: Vec<Vec<Elem>> = seen.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        let index_of: BTreeMap<Vec<Elem>, usize> =
            all.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut class_of = vec![usize::MAX; all.len()];
        let mut class_reps = Vec::new();
        for (i, s) in all.iter().enumerate() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let rep_idx = class_reps.len();
            // orbit of s under conjugation
            for g in 0..self.order {
                let mut conj: Vec<Elem> = s.iter().map(|&x| self.conjugate(g, x)).collect();
                conj.sort_unstable();
                let j = index_of[&conj];
                class_of[j] = rep_idx;
            }
            class_reps.push(self.subgroup(s.clone()).expect("closure is a subgroup"));
        }
        let all_subgroups = all
            .into_iter()
            .map(|s| self.subgroup(s).expect("closure is a subgroup"))
            .collect();
        SubgroupClassification {
            all_subgroups,
            class_reps,
            class_of,
        }
    }

    /// Index of the conjugacy class representative of `k`.
    pub fn class_index(&self, k: &Subgroup) -> Result<usize> {
        let c = self.classify_subgroups();
        c.all_subgroups
            .iter()
            .position(|s| s.elements == k.elements)
            .map(|i| c.class_of[i])
            .ok_or(Error::NotASubgroup)
    }

    /// Ordered left transversal of K in G: the first representative is the
    /// identity and every element factors uniquely as r*k.
    pub fn coset_transversal(&self, k: &Subgroup) -> Result<Vec<Elem>> {
        if !self.is_subgroup(&k.elements) {
            return Err(Error::NotASubgroup);
        }
        let mut covered = vec![false; self.order];
        let mut reps = Vec::with_capacity(self.order / k.elements.len());
        for g in 0..self.order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in &k.elements {
                covered[self.mul(g, x)] = true;
            }
        }
        Ok(reps)
    }

    /// Map each element to the index (within the transversal) of its left
    /// coset gK.
    pub fn coset_index_map(&self, k: &Subgroup) -> Result<Vec<usize>> {
        let reps = self.coset_transversal(k)?;
        let mut map = vec![usize::MAX; self.order];
        for (ci, &r) in reps.iter().enumerate() {
            for &x in &k.elements {
                map[self.mul(r, x)] = ci;
            }
        }
        Ok(map)
    }

    /// Number of K-orbits on the left coset space G/L.
    pub fn orbit_count_on_cosets(&self, k: &Subgroup, l: &Subgroup) -> Result<usize> {
        if !self.is_subgroup(&k.elements) || !self.is_subgroup(&l.elements) {
            return Err(Error::NotASubgroup);
        }
        let coset_of = self.coset_index_map(l)?;
        let n_cosets = self.order / l.elements.len();
        let reps = self.coset_transversal(l)?;
        let mut seen = vec![false; n_cosets];
        let mut orbits = 0;
        for c in 0..n_cosets {
            if seen[c] {
                continue;
            }
            orbits += 1;
            let mut stack = vec![c];
            seen[c] = true;
            while let Some(cur) = stack.pop() {
                for &x in &k.elements {
                    let img = coset_of[self.mul(x, reps[cur])];
                    if !seen[img] {
                        seen[img] = true;
                        stack.push(img);
                    }
                }
            }
        }
        Ok(orbits)
    }

    pub fn normalizer(&self, k: &Subgroup) -> Result<Subgroup> {
        if !self.is_subgroup(&k.elements) {
            return Err(Error::NotASubgroup);
        }
        let set: BTreeSet<Elem> = k.elements.iter().copied().collect();
        let elems: Vec<Elem> = (0..self.order)
            .filter(|&g| k.elements.iter().all(|&x| set.contains(&self.conjugate(g, x))))
            .collect();
        self.subgroup(elems)
    }

    pub fn center(&self) -> Subgroup {
        let elems: Vec<Elem> = (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        self.subgroup(elems).expect("center is a subgroup")
    }

    /// All central subgroups of order exactly p.
    pub fn central_order_p_subgroups(&self) -> Vec<Subgroup> {
        let z = self.center();
        let p = self.p as usize;
        let mut out: BTreeSet<Vec<Elem>> = BTreeSet::new();
        for &x in &z.elements {
            if self.element_order(x) == p {
                out.insert(self.generated_subgroup(&[x]));
            }
        }
        out.into_iter()
            .map(|e| self.subgroup(e).expect("cyclic central subgroup"))
            .collect()
    }

    /// A deterministic generating set for a subgroup: greedily add the
    /// smallest element that enlarges the closure.
    pub fn subgroup_generators(&self, k: &Subgroup) -> Vec<Elem> {
        let mut gens: Vec<Elem> = Vec::new();
        let mut closure = vec![0];
        for &x in &k.elements {
            if closure.binary_search(&x).is_err() {
                gens.push(x);
                let mut seed = gens.clone();
                seed.push(0);
                closure = self.generated_subgroup(&seed);
                if closure.len() == k.elements.len() {
                    break;
                }
            }
        }
        if gens.is_empty() {
            gens.push(0); // trivial subgroup: generated by the identity
        }
        gens
    }

    /// Repackage a subgroup as a standalone group with the induced table.
    /// Returns the group and the map from new indices to ambient elements.
    pub fn subgroup_as_group(&self, k: &Subgroup) -> Result<(Arc<PGroup>, Vec<Elem>)> {
        if !self.is_subgroup(&k.elements) {
            return Err(Error::NotASubgroup);
        }
        let elems = k.elements.clone(); // sorted, identity (0) first
        let lookup: BTreeMap<Elem, usize> =
            elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let n = elems.len();
        let mut mul = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = lookup[&self.mul(elems[i], elems[j])];
            }
        }
        let gens = self
            .subgroup_generators(k)
            .iter()
            .map(|g| lookup[g])
            .filter(|&g| g != 0 || n == 1)
            .collect();
        let g = PGroup::from_table(self.p, mul, gens)?;
        Ok((g, elems))
    }

    /// Quotient by a normal subgroup. Returns the quotient group together
    /// with the map element -> quotient element index. Quotient elements are
    /// ordered by their smallest member, with the coset of the identity first.
    pub fn quotient(&self, n: &Subgroup) -> Result<(Arc<PGroup>, Vec<usize>)> {
        if !self.is_subgroup(&n.elements) {
            return Err(Error::NotASubgroup);
        }
        if !n.is_normal {
            return Err(Error::NotNormal);
        }
        // cosets keyed by smallest member; identity coset = N contains 0
        let coset_map = self.coset_index_map(n)?;
        let reps = self.coset_transversal(n)?;
        let q = reps.len();
        let mut mul = vec![0usize; q * q];
        for i in 0..q {
            for j in 0..q {
                mul[i * q + j] = coset_map[self.mul(reps[i], reps[j])];
            }
        }
        let mut gens: Vec<usize> = self
            .generators
            .iter()
            .map(|&g| coset_map[g])
            .filter(|&c| c != 0)
            .collect();
        gens.sort_unstable();
        gens.dedup();
        if gens.is_empty() && q > 1 {
            gens = (1..q).collect();
        }
        let g = PGroup::from_table(self.p, mul, gens)?;
        Ok((g, coset_map))
    }
}

fn is_permutation(g: &[usize]) -> bool {
    let mut seen = vec![false; g.len()];
    g.iter().all(|&x| {
        if x < g.len() && !seen[x] {
            seen[x] = true;
            true
        } else {
            false
        }
    })
}

/// composition (a b)(x) = a(b(x))
fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn is_p_power(mut n: usize, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n > 1 {
        if n % (p as usize) != 0 {
            return false;
        }
        n /= p as usize;
    }
    true
}

fn infer_prime(order: usize) -> Result<u64> {
    if order == 1 {
        return Ok(2); // trivial group: prime is irrelevant
    }
    let mut d = 2usize;
    while d * d <= order {
        if order % d == 0 {
            return if is_p_power(order, d as u64) {
                Ok(d as u64)
            } else {
                Err(Error::OrderNotPPower(order, d as u64))
            };
        }
        d += 1;
    }
    Ok(order as u64) // prime order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<PGroup> {
        PGroup::from_permutations(&[vec![1, 0]], 2).unwrap()
    }

    fn c2xc2() -> Arc<PGroup> {
        PGroup::from_permutations(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4).unwrap()
    }

    fn d4() -> Arc<PGroup> {
        PGroup::from_permutations(&[vec![1, 2, 3, 0], vec![2, 1, 0, 3]], 4).unwrap()
    }

    fn q8() -> Arc<PGroup> {
        // regular representation: a = (0 1 2 3)(4 5 6 7), b = (0 4 2 6)(1 7 3 5)
        PGroup::from_permutations(
            &[
                vec![1, 2, 3, 0, 5, 6, 7, 4],
                vec![4, 7, 6, 5, 2, 1, 0, 3],
            ],
            8,
        )
        .unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(c2().order(), 2);
        assert_eq!(c2xc2().order(), 4);
        // oracle: brute-force closure size of <(0 1 2 3), (0 2)> is 8
        let d = d4();
        assert_eq!(d.order(), 8);
        assert_eq!(q8().order(), 8);
    }

    #[test]
    fn rejects_non_p_power() {
        // S3 = <(0 1), (0 1 2)> has order 6
        let r = PGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]], 3);
        assert!(matches!(r, Err(Error::OrderNotPPower(6, _))));
    }

    /// Independent oracle: enumerate subgroups by filtering all subsets.
    fn subgroups_by_subsets(g: &PGroup) -> Vec<Vec<Elem>> {
        let n = g.order();
        assert!(n <= 16);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let set: Vec<Elem> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if g.is_subgroup(&set) {
                out.push(set);
            }
        }
        out
    }

    #[test]
    fn classification_counts() {
        let g = c2xc2();
        let c = g.classify_subgroups();
        assert_eq!(c.all_subgroups.len(), 5);
        assert_eq!(c.class_reps.len(), 5);

        let g = d4();
        let c = g.classify_subgroups();
        assert_eq!(c.all_subgroups.len(), subgroups_by_subsets(&g).len());
        assert_eq!(c.all_subgroups.len(), 10);
        assert_eq!(c.class_reps.len(), 8);

        let g = q8();
        let c = g.classify_subgroups();
        assert_eq!(c.all_subgroups.len(), subgroups_by_subsets(&g).len());
        assert_eq!(c.all_subgroups.len(), 6);
        assert_eq!(c.class_reps.len(), 6);
    }

    #[test]
    fn classification_class_sizes_sum() {
        for g in [c2(), c2xc2(), d4(), q8()] {
            let c = g.classify_subgroups();
            assert_eq!(c.class_of.len(), c.all_subgroups.len());
            // every representative is a member of its own class
            for (r, rep) in c.class_reps.iter().enumerate() {
                let i = c
                    .all_subgroups
                    .iter()
                    .position(|s| s.elements == rep.elements)
                    .unwrap();
                assert_eq!(c.class_of[i], r);
            }
        }
    }

    #[test]
    fn transversal_examples() {
        let g = c2xc2();
        let whole = g.full_subgroup();
        assert_eq!(g.coset_transversal(&whole).unwrap(), vec![0]);
        let triv = g.trivial_subgroup();
        assert_eq!(g.coset_transversal(&triv).unwrap(), vec![0, 1, 2, 3]);
        let k = g.subgroup(vec![0, 1]).unwrap();
        assert_eq!(g.coset_transversal(&k).unwrap().len(), 2);
    }

    #[test]
    fn transversal_factorization_bijective() {
        for g in [c2xc2(), d4(), q8()] {
            let c = g.classify_subgroups().clone();
            for k in &c.all_subgroups {
                let reps = g.coset_transversal(k).unwrap();
                assert_eq!(reps[0], 0);
                let mut seen = vec![false; g.order()];
                for &r in &reps {
                    for &x in &k.elements {
                        let e = g.mul(r, x);
                        assert!(!seen[e], "factorization not unique");
                        seen[e] = true;
                    }
                }
                assert!(seen.iter().all(|&b| b));
            }
        }
    }

    #[test]
    fn orbit_count_examples() {
        let g = c2xc2();
        let triv = g.trivial_subgroup();
        let whole = g.full_subgroup();
        let k = g.subgroup(vec![0, 1]).unwrap();
        // K = 1: orbit count = index of L
        assert_eq!(g.orbit_count_on_cosets(&triv, &k).unwrap(), 2);
        // K = G: single orbit
        assert_eq!(g.orbit_count_on_cosets(&whole, &triv).unwrap(), 1);
        // K = <c1> on G/1: two orbits
        assert_eq!(g.orbit_count_on_cosets(&k, &triv).unwrap(), 2);
    }

    #[test]
    fn orbit_count_conjugation_invariant() {
        for g in [d4(), q8()] {
            let c = g.classify_subgroups().clone();
            for k1 in &c.all_subgroups {
                for k2 in &c.all_subgroups {
                    let same_class = g.class_index(k1).unwrap() == g.class_index(k2).unwrap();
                    if !same_class {
                        continue;
                    }
                    for l in &c.all_subgroups {
                        assert_eq!(
                            g.orbit_count_on_cosets(k1, l).unwrap(),
                            g.orbit_count_on_cosets(k2, l).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn center_and_normalizer() {
        let g = q8();
        let z = g.center();
        assert_eq!(z.elements.len(), 2);
        let ab = c2xc2();
        assert_eq!(ab.center().elements.len(), 4);
        assert_eq!(ab.central_order_p_subgroups().len(), 3);
        // normalizer of a non-normal subgroup of D4 is proper
        let d = d4();
        let c = d.classify_subgroups().clone();
        let non_normal = c
            .all_subgroups
            .iter()
            .find(|s| !s.is_normal)
            .expect("D4 has non-normal subgroups");
        let n = d.normalizer(non_normal).unwrap();
        assert!(n.elements.len() > non_normal.elements.len());
        assert!(n.elements.len() < d.order());
    }

    #[test]
    fn quotient_and_subgroup_as_group() {
        let g = d4();
        let z = g.center();
        let (q, _) = g.quotient(&z).unwrap();
        assert_eq!(q.order(), 4);
        // D4 / Z(D4) = C2 x C2: every nontrivial element has order 2
        for e in 1..q.order() {
            assert_eq!(q.element_order(e), 2);
        }
        let k = g
            .classify_subgroups()
            .all_subgroups
            .iter()
            .find(|s| s.elements.len() == 4 && g.element_order(s.elements[1]) == 4)
            .cloned();
        if let Some(k) = k {
            let (h, _) = g.subgroup_as_group(&k).unwrap();
            assert_eq!(h.order(), 4);
            assert!(h.generators().iter().any(|&x| h.element_order(x) == 4));
        }
    }

    #[test]
    fn trivial_group_works() {
        let t = PGroup::from_table(2, vec![0], vec![]).unwrap();
        assert!(t.is_trivial());
        let c = t.classify_subgroups();
        assert_eq!(c.all_subgroups.len(), 1);
    }
}
