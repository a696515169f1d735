//! Finite-dimensional algebras over the prime field F_p: radical computation,
//! primitive idempotents of the semisimple quotient, and the univariate
//! polynomial factorization they need. Dimensions here are tiny (endomorphism
//! rings of lattices of rank at most a few dozen), so everything is dense.

use crate::linalg::FpMat;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// An associative unital F_p-algebra given by structure constants.
/// `left_mult[i]` is the matrix of left multiplication by basis element i on
/// coordinate columns, so mul(x, y) = rep(x) * y with rep(x) = sum x_i L_i.
#[derive(Clone, Debug)]
pub struct ModPAlgebra {
    pub p: u64,
    pub dim: usize,
    pub left_mult: Vec<FpMat>,
    pub one: Vec<u64>,
}

impl ModPAlgebra {
    pub fn rep(&self, x: &[u64]) -> FpMat {
        let mut m = FpMat::zeros(self.p, self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                m = m.add(&self.left_mult[i].scale(xi));
            }
        }
        m
    }

    pub fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let rep = self.rep(x);
        (0..self.dim)
            .map(|i| {
                let mut s = 0u64;
                for (j, &yj) in y.iter().enumerate() {
                    s = (s + rep.get(i, j) * yj) % self.p;
                }
                s
            })
            .collect()
    }

    fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a + self.p - b % self.p) % self.p)
            .collect()
    }

    fn scale(&self, x: &[u64], k: u64) -> Vec<u64> {
        x.iter().map(|a| a * k % self.p).collect()
    }

    pub fn is_zero(x: &[u64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    /// e <- 3e^2 - 2e^3 until stable: turns an idempotent modulo a nilpotent
    /// ideal into an honest idempotent of the algebra.
    pub fn refine_idempotent(&self, e0: &[u64]) -> Result<Vec<u64>> {
        let mut e = e0.to_vec();
        for _ in 0..(2 * self.dim + 4) {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return Ok(e);
            }
            let e3 = self.mul(&e2, &e);
            let next = self.sub(&self.scale(&e2, 3 % self.p), &self.scale(&e3, 2 % self.p));
            e = next;
        }
        Err(Error::InternalInconsistency(
            "idempotent refinement did not converge".into(),
        ))
    }
}

/// Row-echelon subspace of F_p^n with pivot bookkeeping.
#[derive(Clone, Debug)]
pub struct FpSubspace {
    p: u64,
    n: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FpSubspace {
    pub fn new(p: u64, n: usize) -> Self {
        FpSubspace {
            p,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % self.p, self.p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    /// Reduce v against the basis; returns the remainder.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if v[piv] != 0 {
                let f = v[piv];
                for j in 0..self.n {
                    v[j] = (v[j] + (self.p - f) * row[j]) % self.p;
                }
            }
        }
        v
    }

    /// Insert v if independent; returns true when the dimension grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.inv(r[piv]);
        for x in r.iter_mut() {
            *x = *x * inv % self.p;
        }
        // back-substitute to keep reduced echelon form
        for (row, &rp) in self.rows.iter_mut().zip(&self.pivots) {
            let f = row[piv];
            if f != 0 && rp != piv {
                for j in 0..self.n {
                    row[j] = (row[j] + (self.p - f) * r[j]) % self.p;
                }
            }
        }
        let pos = self.pivots.iter().position(|&q| q > piv).unwrap_or(self.rows.len());
        self.rows.insert(pos, r);
        self.pivots.insert(pos, piv);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

/// Radical and a complete set of primitive idempotents (modulo the radical)
/// of a finite-dimensional F_p-algebra.
#[derive(Debug, Clone)]
pub struct RadicalSimples {
    /// basis of the Jacobson radical, in algebra coordinates mod p
    pub radical: Vec<Vec<u64>>,
    /// honest idempotents of the algebra lifting a complete set of orthogonal
    /// primitive idempotents of algebra/radical
    pub primitive_idempotents: Vec<Vec<u64>>,
}

/// Jacobson radical over the prime field by the characteristic-coefficient
/// chain: stage i constrains x by c_(p^i)(rep(x*y)) = 0 over y in the current
/// subspace, where c_k is the degree-k characteristic polynomial coefficient.
/// Once the earlier coefficients vanish on the subspace, the next one is
/// additive, so each stage is a kernel computation; stages run while
/// p^i <= dim. Radical elements satisfy every stage (a radical product is
/// nilpotent, so its characteristic polynomial is a power of lambda), and the
/// final subspace is verified to be a nilpotent two-sided ideal, certifying
/// equality in both directions.
pub fn radical(alg: &ModPAlgebra) -> Result<Vec<Vec<u64>>> {
    let p = alg.p;
    let n = alg.dim;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut current: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    let mut pi = 1u64; // p^i
    loop {
        if current.is_empty() {
            break;
        }
        // constraint rows: y in basis(current); columns: x in basis(current);
        // entry = c_(pi) of the regular representation of x*y
        let dim = current.len();
        let mut constraint = FpMat::zeros(p, dim, dim);
        let reps: Vec<FpMat> = current.iter().map(|v| alg.rep(v)).collect();
        for (r, ry) in reps.iter().enumerate() {
            for (c, rx) in reps.iter().enumerate() {
                let prod = rx.mul(ry);
                let coeffs = prod.char_poly();
                // coefficient of lambda^(n - pi)
                let idx = n - pi as usize;
                constraint.set(r, c, coeffs[idx]);
            }
        }
        let ker = constraint.kernel();
        current = ker
            .iter()
            .map(|coeffs| {
                let mut v = vec![0u64; n];
                for (i, &ci) in coeffs.iter().enumerate() {
                    if ci != 0 {
                        for j in 0..n {
                            v[j] = (v[j] + ci * current[i][j]) % p;
                        }
                    }
                }
                v
            })
            .collect();
        if pi.saturating_mul(p) > n as u64 {
            break;
        }
        pi *= p;
    }
    verify_nilpotent_ideal(alg, &current)?;
    Ok(current)
}

/// Check that the span is a two-sided ideal and nilpotent.
fn verify_nilpotent_ideal(alg: &ModPAlgebra, basis: &[Vec<u64>]) -> Result<()> {
    let n = alg.dim;
    let mut space = FpSubspace::new(alg.p, n);
    for v in basis {
        space.insert(v);
    }
    let unit_basis: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    for v in basis {
        for b in &unit_basis {
            if !space.contains(&alg.mul(b, v)) || !space.contains(&alg.mul(v, b)) {
                return Err(Error::InternalInconsistency("radical candidate is not an ideal".into()));
            }
        }
    }
    // nilpotency: left-multiplication chain must reach zero
    let mut layer: Vec<Vec<u64>> = basis.to_vec();
    for _ in 0..=n {
        if layer.is_empty() {
            return Ok(());
        }
        let mut next = FpSubspace::new(alg.p, n);
        for v in basis {
            for w in &layer {
                let prod = alg.mul(v, w);
                if !ModPAlgebra::is_zero(&prod) {
                    next.insert(&prod);
                }
            }
        }
        layer = next.basis().to_vec();
    }
    Err(Error::InternalInconsistency("radical candidate is not nilpotent".into()))
}

/// Dense polynomial over F_p, little-endian coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }
    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }
    pub fn one(p: u64) -> Self {
        FpPoly { p, coeffs: vec![1] }
    }
    pub fn x(p: u64) -> Self {
        FpPoly { p, coeffs: vec![0, 1] }
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn inv_scalar(p: u64, a: u64) -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = *self.coeffs.last().unwrap();
        if lead == 1 {
            return self.clone();
        }
        let inv = Self::inv_scalar(self.p, lead);
        FpPoly::new(self.p, self.coeffs.iter().map(|&c| c * inv % self.p).collect())
    }

    pub fn add(&self, rhs: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + b) % self.p;
        }
        FpPoly::new(self.p, out)
    }

    pub fn sub(&self, rhs: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + self.p - b) % self.p;
        }
        FpPoly::new(self.p, out)
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        if self.is_zero() || rhs.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        FpPoly::new(self.p, out)
    }

    /// (quotient, remainder) with divisor nonzero.
    pub fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero());
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        if self.degree() < dd || self.is_zero() {
            return (FpPoly::zero(p), self.clone());
        }
        let lead_inv = Self::inv_scalar(p, *d.coeffs.last().unwrap());
        let mut quot = vec![0u64; self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = rem.get(k + dd).copied().unwrap_or(0);
            if top == 0 {
                continue;
            }
            let q = top * lead_inv % p;
            quot[k] = q;
            for (i, &dc) in d.coeffs.iter().enumerate() {
                let idx = k + i;
                rem[idx] = (rem[idx] + (p - q * dc % p)) % p;
            }
        }
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn gcd(&self, rhs: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// x^(p^k) mod self via repeated exponentiation.
    pub fn frobenius_power(&self, poly: &FpPoly, e: u64) -> FpPoly {
        // poly^e mod self
        let mut acc = FpPoly::one(self.p);
        let mut base = poly.div_rem(self).1;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).div_rem(self).1;
            }
            base = base.mul(&base).div_rem(self).1;
            e >>= 1;
        }
        acc
    }

    /// Complete factorization into monic irreducibles (with multiplicity),
    /// by squarefree decomposition plus Berlekamp splitting. p is tiny here,
    /// so the F_p-element sweep in the splitting step is exhaustive.
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        let mut out: Vec<(FpPoly, usize)> = Vec::new();
        let mut work: Vec<(FpPoly, usize)> = vec![(self.monic(), 1)];
        while let Some((f, mult)) = work.pop() {
            if f.is_constant() {
                continue;
            }
            // squarefree reduction
            let deriv = f.derivative();
            if deriv.is_zero() {
                // f = g(x^p); take p-th root
                let p = self.p as usize;
                let root = FpPoly::new(
                    self.p,
                    f.coeffs.iter().step_by(p).copied().collect(),
                );
                work.push((root, mult * p));
                continue;
            }
            let g = f.gcd(&deriv);
            if !g.is_constant() {
                let (q, _) = f.div_rem(&g);
                work.push((q, mult));
                work.push((g, mult));
                continue;
            }
            // f squarefree: Berlekamp
            for factor in berlekamp_squarefree(&f) {
                let pos = out.iter().position(|(h, _)| *h == factor);
                match pos {
                    Some(i) => out[i].1 += mult,
                    None => out.push((factor, mult)),
                }
            }
        }
        out.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
        });
        // merge duplicates produced by the squarefree split
        let mut merged: Vec<(FpPoly, usize)> = Vec::new();
        for (f, m) in out {
            if let Some(last) = merged.last_mut() {
                if last.0 == f {
                    last.1 += m;
                    continue;
                }
            }
            merged.push((f, m));
        }
        merged
    }

    pub fn derivative(&self) -> FpPoly {
        if self.coeffs.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        FpPoly::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| (i as u64 % self.p) * c % self.p)
                .collect(),
        )
    }

    /// Evaluate on an algebra element: sum c_i z^i, with `unit` playing the
    /// role of z^0 (the identity of the corner subalgebra in question).
    pub fn eval_in_algebra(&self, alg: &ModPAlgebra, z: &[u64], unit: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; alg.dim];
        let mut power = unit.to_vec();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                for (a, pw) in acc.iter_mut().zip(&power) {
                    *a = (*a + c * pw) % alg.p;
                }
            }
            if i + 1 < self.coeffs.len() {
                power = alg.mul(&power, z);
            }
        }
        acc
    }
}

/// Berlekamp factorization of a squarefree monic polynomial.
fn berlekamp_squarefree(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let d = f.degree();
    if d <= 1 {
        return vec![f.clone()];
    }
    // Q matrix: row i = coefficients of x^(p*i) mod f
    let x = FpPoly::x(p);
    let mut q = FpMat::zeros(p, d, d);
    for i in 0..d {
        let xi = if i == 0 {
            FpPoly::one(p)
        } else {
            f.frobenius_power(&x, p * i as u64)
        };
        for (j, &c) in xi.coeffs.iter().enumerate() {
            q.set(i, j, c);
        }
    }
    // kernel of (Q - I)^T: polynomials v with v^p = v mod f
    let mut qt = FpMat::zeros(p, d, d);
    for i in 0..d {
        for j in 0..d {
            let v = (q.get(i, j) + if i == j { p - 1 } else { 0 }) % p;
            qt.set(j, i, v);
        }
    }
    let kernel = qt.kernel();
    if kernel.len() <= 1 {
        return vec![f.clone()]; // irreducible
    }
    let mut factors = vec![f.clone()];
    for v in &kernel {
        let vp = FpPoly::new(p, v.clone());
        if vp.is_constant() {
            continue;
        }
        let mut next = Vec::new();
        for g in factors {
            if g.degree() <= 1 {
                next.push(g);
                continue;
            }
            let mut remaining = g.clone();
            for s in 0..p {
                if remaining.is_constant() {
                    break;
                }
                let shifted = vp.sub(&FpPoly::new(p, vec![s]));
                let h = remaining.gcd(&shifted);
                if !h.is_constant() && h.degree() < remaining.degree() {
                    let (q2, _) = remaining.div_rem(&h);
                    next.push(h);
                    remaining = q2;
                }
            }
            if !remaining.is_constant() {
                next.push(remaining);
            }
        }
        factors = next;
        if factors.iter().all(|g| g.degree() == 1) {
            break;
        }
    }
    factors.into_iter().map(|g| g.monic()).collect()
}

/// Minimal polynomial of z inside the corner subalgebra with identity `unit`.
pub fn min_poly(alg: &ModPAlgebra, z: &[u64], unit: &[u64]) -> FpPoly {
    let mut space = FpSubspace::new(alg.p, alg.dim);
    let mut powers: Vec<Vec<u64>> = Vec::new();
    let mut cur = unit.to_vec();
    loop {
        if !space.insert(&cur) {
            // dependency: solve for coefficients over the inserted powers
            let k = powers.len();
            let mut mat = FpMat::zeros(alg.p, alg.dim, k);
            for (j, pw) in powers.iter().enumerate() {
                for i in 0..alg.dim {
                    mat.set(i, j, pw[i]);
                }
            }
            let sol = mat.solve(&cur).expect("dependency found by echelon");
            let mut coeffs = sol.iter().map(|&c| (alg.p - c) % alg.p).collect::<Vec<_>>();
            coeffs.push(1);
            return FpPoly::new(alg.p, coeffs);
        }
        powers.push(cur.clone());
        cur = alg.mul(&cur, z);
    }
}

/// A complete set of primitive idempotents of alg/rad, refined to honest
/// idempotents of alg, pairwise orthogonal modulo the radical.
pub fn primitive_idempotents(
    alg: &ModPAlgebra,
    rad: &[Vec<u64>],
    seed: u64,
) -> Result<Vec<Vec<u64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1d3a_55e7);
    let mut rad_space = FpSubspace::new(alg.p, alg.dim);
    for v in rad {
        rad_space.insert(v);
    }
    let mut out = Vec::new();
    let mut stack = vec![alg.refine_idempotent(&alg.one.clone())?];
    while let Some(e) = stack.pop() {
        if ModPAlgebra::is_zero(&e) || rad_space.contains(&e) {
            continue;
        }
        match split_idempotent(alg, &rad_space, &e, &mut rng)? {
            Some((f, g)) => {
                stack.push(f);
                stack.push(g);
            }
            None => out.push(e),
        }
    }
    // deterministic order for reproducible reports
    out.sort();
    Ok(out)
}

/// Try to write e = f + g with f, g orthogonal idempotents nonzero mod rad.
fn split_idempotent(
    alg: &ModPAlgebra,
    rad_space: &FpSubspace,
    e: &[u64],
    rng: &mut ChaCha8Rng,
) -> Result<Option<(Vec<u64>, Vec<u64>)>> {
    // corner subalgebra e * A * e
    let mut corner = FpSubspace::new(alg.p, alg.dim);
    let mut corner_elems: Vec<Vec<u64>> = Vec::new();
    for i in 0..alg.dim {
        let mut b = vec![0u64; alg.dim];
        b[i] = 1;
        let v = alg.mul(&alg.mul(e, &b), e);
        if corner.insert(&v) {
            corner_elems.push(v);
        }
    }
    // candidates: corner basis elements first, then seeded random combos
    let mut candidates = corner_elems.clone();
    for _ in 0..48 {
        let mut z = vec![0u64; alg.dim];
        for b in &corner_elems {
            let c = rng.random_range(0..alg.p);
            if c != 0 {
                for (zi, bi) in z.iter_mut().zip(b) {
                    *zi = (*zi + c * bi) % alg.p;
                }
            }
        }
        candidates.push(z);
    }
    for z in candidates {
        if ModPAlgebra::is_zero(&z) {
            continue;
        }
        // work modulo the radical: reduce z by rad to stabilize min polys is
        // not necessary; min poly in the corner may pick up radical noise but
        // a coprime split still yields idempotents after refinement
        let mu = min_poly(alg, &z, e);
        let factors = mu.factor();
        if factors.len() < 2 {
            continue;
        }
        // group into two coprime parts g1, g2
        let g1 = {
            let (f0, m0) = &factors[0];
            let mut g = FpPoly::one(alg.p);
            for _ in 0..*m0 {
                g = g.mul(f0);
            }
            g
        };
        let mut g2 = FpPoly::one(alg.p);
        for (f, m) in factors.iter().skip(1) {
            for _ in 0..*m {
                g2 = g2.mul(f);
            }
        }
        // u = g1 * (g1^{-1} mod g2): u = 0 mod g1, 1 mod g2
        let Some(inv) = poly_inverse_mod(&g1, &g2) else {
            continue;
        };
        let u = g1.mul(&inv);
        let f_raw = u.eval_in_algebra(alg, &z, e);
        let f = alg.refine_idempotent(&f_raw)?;
        // orthogonal complement within the corner
        let mut g = e.to_vec();
        for (gi, fi) in g.iter_mut().zip(&f) {
            *gi = (*gi + alg.p - fi % alg.p) % alg.p;
        }
        let g = alg.refine_idempotent(&g)?;
        if rad_space.contains(&f) || rad_space.contains(&g) {
            continue;
        }
        return Ok(Some((f, g)));
    }
    Ok(None)
}

/// Inverse of a modulo m in F_p[x], when coprime.
fn poly_inverse_mod(a: &FpPoly, m: &FpPoly) -> Option<FpPoly> {
    // extended Euclid
    let p = a.p;
    let (mut r0, mut r1) = (m.clone(), a.div_rem(m).1);
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if r0.degree() != 0 {
        return None;
    }
    // normalize by the constant gcd
    let c = FpPoly::inv_scalar(p, r0.coeffs[0]);
    Some(FpPoly::new(
        p,
        t0.coeffs.iter().map(|&x| x * c % p).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// group algebra F_p[C_n] as a ModPAlgebra: basis g^0..g^(n-1)
    fn group_algebra_cyclic(p: u64, n: usize) -> ModPAlgebra {
        let mut left_mult = Vec::new();
        for i in 0..n {
            let mut m = FpMat::zeros(p, n, n);
            for j in 0..n {
                m.set((i + j) % n, j, 1);
            }
            left_mult.push(m);
        }
        let mut one = vec![0; n];
        one[0] = 1;
        ModPAlgebra { p, dim: n, left_mult, one }
    }

    #[test]
    fn radical_of_f2_c2() {
        // F_2[C2] is local: radical spanned by 1 + g
        let alg = group_algebra_cyclic(2, 2);
        let rad = radical(&alg).unwrap();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad[0], vec![1, 1]);
        let prims = primitive_idempotents(&alg, &rad, 0).unwrap();
        assert_eq!(prims.len(), 1);
        assert_eq!(prims[0], alg.one);
    }

    #[test]
    fn radical_of_f3_c3() {
        let alg = group_algebra_cyclic(3, 3);
        let rad = radical(&alg).unwrap();
        assert_eq!(rad.len(), 2, "augmentation ideal is the radical");
        let prims = primitive_idempotents(&alg, &rad, 0).unwrap();
        assert_eq!(prims.len(), 1);
    }

    #[test]
    fn semisimple_split_group_algebra() {
        // F_3[C2] is semisimple: two primitive idempotents
        let alg = group_algebra_cyclic(3, 2);
        let rad = radical(&alg).unwrap();
        assert!(rad.is_empty());
        let prims = primitive_idempotents(&alg, &rad, 0).unwrap();
        assert_eq!(prims.len(), 2);
        for e in &prims {
            assert_eq!(alg.mul(e, e), *e);
        }
        // orthogonal and summing to 1
        let s = alg.mul(&prims[0], &prims[1]);
        assert!(ModPAlgebra::is_zero(&s));
        let sum: Vec<u64> = prims[0]
            .iter()
            .zip(&prims[1])
            .map(|(a, b)| (a + b) % 3)
            .collect();
        assert_eq!(sum, alg.one);
    }

    #[test]
    fn factor_examples() {
        // x^2 + x over F_2 = x (x + 1)
        let f = FpPoly::new(2, vec![0, 1, 1]);
        let fac = f.factor();
        assert_eq!(fac.len(), 2);
        // x^2 + x + 1 irreducible over F_2
        let f = FpPoly::new(2, vec![1, 1, 1]);
        assert_eq!(f.factor().len(), 1);
        // x^2 + 1 = (x+1)(x+2) over F_3... check: (x+1)(x+2) = x^2 + 3x + 2 = x^2 + 2
        let f = FpPoly::new(3, vec![2, 0, 1]);
        let fac = f.factor();
        assert_eq!(fac.len(), 2);
        // and x^2 + 1 over F_3 is irreducible (-1 is not a square mod 3)
        let f = FpPoly::new(3, vec![1, 0, 1]);
        assert_eq!(f.factor().len(), 1);
        // (x+1)^2 over F_2 = x^2 + 1
        let f = FpPoly::new(2, vec![1, 0, 1]);
        let fac = f.factor();
        assert_eq!(fac.len(), 1);
        assert_eq!(fac[0].1, 2);
    }

    #[test]
    fn min_poly_in_matrix_algebra() {
        // M_2(F_2) via left mult on itself: element E_11 has min poly x^2 - x
        // build M_2(F_2) as structure constants on basis E11,E12,E21,E22
        let p = 2;
        let mut left_mult = Vec::new();
        let prod = |a: usize, b: usize| -> Option<usize> {
            let (ai, aj) = (a / 2, a % 2);
            let (bi, bj) = (b / 2, b % 2);
            (aj == bi).then_some(ai * 2 + bj)
        };
        for a in 0..4 {
            let mut m = FpMat::zeros(p, 4, 4);
            for b in 0..4 {
                if let Some(c) = prod(a, b) {
                    m.set(c, b, 1);
                }
            }
            left_mult.push(m);
        }
        let alg = ModPAlgebra {
            p,
            dim: 4,
            left_mult,
            one: vec![1, 0, 0, 1],
        };
        let rad = radical(&alg).unwrap();
        assert!(rad.is_empty(), "matrix algebra is semisimple");
        let e11 = vec![1, 0, 0, 0];
        let mu = min_poly(&alg, &e11, &alg.one);
        assert_eq!(mu, FpPoly::new(2, vec![0, 1, 1]));
        let prims = primitive_idempotents(&alg, &rad, 0).unwrap();
        assert_eq!(prims.len(), 2, "M_2 has two primitive idempotents");
    }
}
