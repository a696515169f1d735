use super::{unit_part, valuation, FpMat, IntMat, PrecisionContext, RatMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer Smith normal form with full unimodular transforms:
/// u * a * v = diag(d_1, ..., d_r, 0, ...), d_1 | d_2 | ... , d_i > 0,
/// det(u) = det(v) = ±1, and u_inv, v_inv the exact inverses.
#[derive(Clone, Debug)]
pub struct SmithZ {
    pub u: IntMat,
    pub u_inv: IntMat,
    pub v: IntMat,
    pub v_inv: IntMat,
    pub diag: Vec<BigInt>,
    pub rank: usize,
    /// det(u) and det(v), each +1 or -1
    pub u_det: i8,
    pub v_det: i8,
}

/// Smith form over the localization at p: u * a * v = d with d diagonal of
/// pure p-powers p^(a_1) <= p^(a_2) <= ..., u and v exact rational matrices
/// whose determinants have p-adic valuation 0.
#[derive(Clone, Debug)]
pub struct LocalSmithForm {
    pub u: RatMat,
    pub v: RatMat,
    pub d: IntMat,
    pub elementary_exponents: Vec<u32>,
    pub rank: usize,
}

impl LocalSmithForm {
    /// Exact verification of the defining identities.
    pub fn verify(&self, a: &IntMat, ctx: &PrecisionContext) -> bool {
        let prod = &(&self.u * &RatMat::from_int(a)) * &self.v;
        if prod != RatMat::from_int(&self.d) {
            return false;
        }
        // Denominators of u, v must be p-units; diagonal must be p-powers.
        if !self.u.denominators_prime_to(ctx.p) || !self.v.denominators_prime_to(ctx.p) {
            return false;
        }
        for (i, e) in self.elementary_exponents.iter().enumerate() {
            if *self.d.get(i, i) != ctx.p_big().pow(*e) {
                return false;
            }
        }
        true
    }
}

struct Work {
    m: IntMat,
    u: IntMat,
    u_inv: IntMat,
    v: IntMat,
    v_inv: IntMat,
    u_det: i8,
    v_det: i8,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.u_det = -self.u_det;
        }
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            self.v_det = -self.v_det;
        }
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }
    /// row_i += q*row_j; inverse: col_j -= q*col_i (on u_inv).
    fn add_row_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        self.m.add_row_mul(i, j, q);
        self.u.add_row_mul(i, j, q);
        self.u_inv.add_col_mul(j, i, &-q);
    }
    fn add_col_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        self.m.add_col_mul(i, j, q);
        self.v.add_col_mul(i, j, q);
        self.v_inv.add_row_mul(j, i, &-q);
    }
    fn negate_row(&mut self, i: usize) {
        self.u_det = -self.u_det;
        self.m.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
    /// Rows (i,j) <- (x*ri + y*rj, z*ri + w*rj) with xw - yz = 1.
    /// Inverse acts on the columns of u_inv: (ci, cj) <- (w*ci - z*cj, -y*ci + x*cj).
    fn two_row(&mut self, i: usize, j: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        self.m.two_row(i, j, x, y, z, w);
        self.u.two_row(i, j, x, y, z, w);
        self.u_inv.two_col(i, j, w, &-z, &-y, x);
    }
    fn two_col(&mut self, i: usize, j: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        self.m.two_col(i, j, x, y, z, w);
        self.v.two_col(i, j, x, y, z, w);
        self.v_inv.two_row(i, j, w, &-z, &-y, x);
    }
}

/// Classical Smith normal form over Z with both transforms and their inverses
/// maintained exactly. Pivots are chosen of minimal absolute value to keep
/// intermediate entries small.
pub fn smith_z(a: &IntMat) -> SmithZ {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work {
        m: a.clone(),
        u: IntMat::identity(rows),
        u_inv: IntMat::identity(rows),
        v: IntMat::identity(cols),
        v_inv: IntMat::identity(cols),
        u_det: 1,
        v_det: 1,
    };

    let mut t = 0usize;
    while t < rows && t < cols {
        // pivot: entry of minimal |value| in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        let mut best: Option<BigInt> = None;
        for i in t..rows {
            for j in t..cols {
                let e = w.m.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let mag = e.abs();
                if best.as_ref().is_none_or(|b| &mag < b) {
                    best = Some(mag);
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            // clear column t below the pivot
            let mut col_clean = true;
            for i in (t + 1)..rows {
                if w.m.get(i, t).is_zero() {
                    continue;
                }
                let a0 = w.m.get(t, t).clone();
                let b0 = w.m.get(i, t).clone();
                let (q, r) = b0.div_rem(&a0);
                if r.is_zero() {
                    w.add_row_mul(i, t, &-q);
                } else {
                    let e = a0.extended_gcd(&b0);
                    // x*a + y*b = g; rows (t,i) <- (x rt + y ri, -(b/g) rt + (a/g) ri)
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let z = -(&b0 / &g);
                    let wcoef = &a0 / &g;
                    w.two_row(t, i, &x, &y, &z, &wcoef);
                    col_clean = false;
                }
            }
            // clear row t right of the pivot
            let mut row_clean = true;
            for j in (t + 1)..cols {
                if w.m.get(t, j).is_zero() {
                    continue;
                }
                let a0 = w.m.get(t, t).clone();
                let b0 = w.m.get(t, j).clone();
                let (q, r) = b0.div_rem(&a0);
                if r.is_zero() {
                    w.add_col_mul(j, t, &-q);
                } else {
                    let e = a0.extended_gcd(&b0);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let z = -(&b0 / &g);
                    let wcoef = &a0 / &g;
                    w.two_col(t, j, &x, &y, &z, &wcoef);
                    row_clean = false;
                }
            }
            if col_clean && row_clean {
                // both clean: check the column again, clearing the row may
                // have refilled it
                if (t + 1..rows).all(|i| w.m.get(i, t).is_zero())
                    && (t + 1..cols).all(|j| w.m.get(t, j).is_zero())
                {
                    break;
                }
            }
        }

        // divisibility: d_t must divide every entry of the trailing block
        let mut redo = false;
        'scan: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !w.m.get(i, j).mod_floor(w.m.get(t, t)).is_zero() {
                    w.add_row_mul(t, i, &BigInt::one());
                    redo = true;
                    break 'scan;
                }
            }
        }
        if redo {
            continue; // re-clear with the new row content
        }
        if w.m.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }

    let rank = t;
    let diag = (0..rank).map(|i| w.m.get(i, i).clone()).collect();
    SmithZ {
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
        diag,
        rank,
        u_det: w.u_det,
        v_det: w.v_det,
    }
}

/// Adjugate and determinant of a square matrix: a * adj = adj * a = det * I.
/// Returns None when a is singular.
pub fn adjugate(a: &IntMat) -> Option<(IntMat, BigInt)> {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let s = smith_z(a);
    if s.rank < n {
        return None;
    }
    let mut det: BigInt = s.diag.iter().product();
    if s.u_det * s.v_det < 0 {
        det = -det;
    }
    // adj = v * diag(det / d_i) * u
    let mut mid = IntMat::zeros(n, n);
    for i in 0..n {
        mid.set(i, i, &det / &s.diag[i]);
    }
    Some((&(&s.v * &mid) * &s.u, det))
}

/// Repeated exact solving against a fixed full-column-rank integer basis.
pub struct ColumnSolver {
    smith: SmithZ,
    cols: usize,
}

impl ColumnSolver {
    pub fn new(basis: &IntMat) -> ColumnSolver {
        ColumnSolver {
            smith: smith_z(basis),
            cols: basis.cols(),
        }
    }

    /// Solve basis * x = b requiring an integral solution.
    pub fn solve_integral(&self, b: &[BigInt]) -> crate::Result<Vec<BigInt>> {
        let s = &self.smith;
        let ub = s.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.cols];
        for (i, ubi) in ub.iter().enumerate() {
            if i < s.rank {
                let (q, r) = num_integer::Integer::div_rem(ubi, &s.diag[i]);
                if !r.is_zero() {
                    return Err(crate::Error::InternalInconsistency(
                        "expected an integral coordinate".into(),
                    ));
                }
                y[i] = q;
            } else if !ubi.is_zero() {
                return Err(crate::Error::InternalInconsistency(
                    "vector outside sublattice span".into(),
                ));
            }
        }
        Ok(s.v.mul_vec(&y))
    }

    /// Solve basis * X = image column by column, integrally.
    pub fn solve_mat_integral(&self, image: &IntMat) -> crate::Result<IntMat> {
        let mut out = IntMat::zeros(self.cols, image.cols());
        for j in 0..image.cols() {
            let x = self.solve_integral(&image.col(j))?;
            for (i, xi) in x.into_iter().enumerate() {
                out.set(i, j, xi);
            }
        }
        Ok(out)
    }

    /// Is basis * x = b solvable over the localization at p (denominators
    /// prime to p)?
    pub fn solvable_local(&self, b: &[BigInt], p: u64) -> bool {
        let s = &self.smith;
        let ub = s.u.mul_vec(b);
        for (i, ubi) in ub.iter().enumerate() {
            if i < s.rank {
                if ubi.is_zero() {
                    continue;
                }
                let need = unit_part(&s.diag[i], p).0;
                if valuation(ubi, p).unwrap_or(0) < need {
                    return false;
                }
            } else if !ubi.is_zero() {
                return false;
            }
        }
        true
    }

    /// All columns of image lie in the p-localized span of the basis.
    pub fn spans_local(&self, image: &IntMat, p: u64) -> bool {
        (0..image.cols()).all(|j| self.solvable_local(&image.col(j), p))
    }
}

impl SmithZ {
    /// Exact check u*a*v == diag and u*u_inv == v*v_inv == identity.
    pub fn verify(&self, a: &IntMat) -> bool {
        let prod = &(&self.u * a) * &self.v;
        for i in 0..prod.rows() {
            for j in 0..prod.cols() {
                let want = if i == j && i < self.rank {
                    self.diag[i].clone()
                } else {
                    BigInt::zero()
                };
                if *prod.get(i, j) != want {
                    return false;
                }
            }
        }
        (&self.u * &self.u_inv).is_identity() && (&self.v * &self.v_inv).is_identity()
    }
}

/// Basis of the integer kernel {x : a*x = 0}, as matrix columns. The kernel
/// of an integer matrix is automatically saturated.
pub fn kernel_z(a: &IntMat) -> IntMat {
    let s = smith_z(a);
    s.v.submatrix(0..a.cols(), s.rank..a.cols())
}

/// p-saturation of the column span: basis of {x : p^j x in span(b) for some j}.
/// Input columns must be linearly independent; output is an honest Z-basis.
/// Computed by iterated mod-p kernel refinement, which never grows entries.
pub fn sat_p(b: &IntMat, p: u64) -> IntMat {
    let n = b.rows();
    let r = b.cols();
    if r == 0 {
        return IntMat::zeros(n, 0);
    }
    let mut x = b.clone();
    let pbig = BigInt::from(p);
    loop {
        let ker = FpMat::from_int(&x, p).kernel();
        if ker.is_empty() {
            return x;
        }
        // one refinement step per pass: replace the pivot column by the
        // p-divided combination
        let c = &ker[0];
        let j = c
            .iter()
            .position(|ci| *ci != 0)
            .expect("kernel vector is nonzero");
        let mut wcol = vec![BigInt::zero(); n];
        for (k, ck) in c.iter().enumerate() {
            if *ck == 0 {
                continue;
            }
            let ck = BigInt::from(*ck);
            for i in 0..n {
                let t = x.get(i, k) * &ck;
                wcol[i] += t;
            }
        }
        for (i, wi) in wcol.iter_mut().enumerate() {
            let (q, r) = wi.div_rem(&pbig);
            debug_assert!(r.is_zero(), "kernel combination must vanish mod p");
            x.set(i, j, q);
            *wi = BigInt::zero();
        }
    }
}

/// Full saturation of the column span over Q: basis of span_Q(b) ∩ Z^n.
pub fn sat_q(b: &IntMat) -> IntMat {
    let s = smith_z(b);
    s.u_inv.submatrix(0..b.rows(), 0..s.rank)
}

/// Local Smith form at p, derived from the integer Smith form by absorbing
/// the prime-to-p unit parts of the elementary divisors into u.
pub fn local_smith(a: &IntMat, ctx: &PrecisionContext) -> LocalSmithForm {
    let s = smith_z(a);
    let mut exps = Vec::with_capacity(s.rank);
    let mut units = Vec::with_capacity(s.rank);
    for d in &s.diag {
        let (v, u) = unit_part(d, ctx.p);
        exps.push(v);
        units.push(u);
    }
    let mut u = RatMat::from_int(&s.u);
    for (i, unit) in units.iter().enumerate() {
        u.scale_row(i, &BigRational::new(BigInt::one(), unit.clone()));
    }
    let mut d = IntMat::zeros(a.rows(), a.cols());
    for (i, e) in exps.iter().enumerate() {
        d.set(i, i, ctx.p_big().pow(*e));
    }
    LocalSmithForm {
        u,
        v: RatMat::from_int(&s.v),
        d,
        elementary_exponents: exps,
        rank: s.rank,
    }
}

/// Exact solution of a*x = b over the localization at p, if one exists.
/// Entries of the solution are rationals with p-unit denominators.
pub fn solve_local(a: &IntMat, b: &[BigInt], ctx: &PrecisionContext) -> Option<Vec<BigRational>> {
    assert_eq!(b.len(), a.rows(), "dimension mismatch in solve");
    let s = smith_z(a);
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigRational::zero(); a.cols()];
    for (i, ubi) in ub.iter().enumerate() {
        if i < s.rank {
            let d = &s.diag[i];
            // y_i = ub_i / d_i must be p-integral
            let q = BigRational::new(ubi.clone(), d.clone());
            if !q.is_zero() {
                let denom_val = valuation(q.denom(), ctx.p).unwrap_or(0);
                if denom_val > 0 {
                    return None;
                }
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    let vr = RatMat::from_int(&s.v);
    Some(vr.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrecisionContext;

    fn ctx2() -> PrecisionContext {
        PrecisionContext::with_default_cap(2).unwrap()
    }

    /// Textbook recursive Smith diagonalization used as an independent oracle:
    /// repeatedly reduce with plain gcd row/column steps, no transform
    /// bookkeeping, then fix divisibility by folding rows in.
    fn oracle_smith_diag(mut rows: Vec<Vec<i64>>) -> Vec<i64> {
        fn nonzero_min(rows: &[Vec<i64>]) -> Option<(usize, usize)> {
            let mut best: Option<(usize, usize, i64)> = None;
            for (i, r) in rows.iter().enumerate() {
                for (j, &e) in r.iter().enumerate() {
                    if e != 0 && best.is_none_or(|(_, _, b)| e.abs() < b.abs()) {
                        best = Some((i, j, e));
                    }
                }
            }
            best.map(|(i, j, _)| (i, j))
        }
        let mut out = Vec::new();
        loop {
            if rows.is_empty() || rows[0].is_empty() {
                break;
            }
            let Some((pi, pj)) = nonzero_min(&rows) else { break };
            rows.swap(0, pi);
            for r in rows.iter_mut() {
                r.swap(0, pj);
            }
            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in 1..rows.len() {
                    if rows[i][0] != 0 {
                        let q = rows[i][0].div_euclid(rows[0][0]);
                        for k in 0..rows[0].len() {
                            rows[i][k] -= q * rows[0][k];
                        }
                        if rows[i][0] != 0 {
                            rows.swap(0, i);
                            dirty = true;
                        }
                    }
                }
                for j in 1..rows[0].len() {
                    if rows[0][j] != 0 {
                        let q = rows[0][j].div_euclid(rows[0][0]);
                        for r in rows.iter_mut() {
                            let t = q * r[0];
                            r[j] -= t;
                        }
                        if rows[0][j] != 0 {
                            for r in rows.iter_mut() {
                                r.swap(0, j);
                            }
                            dirty = true;
                        }
                    }
                }
            }
            // divisibility fix
            let d = rows[0][0].abs();
            let mut folded = false;
            'f: for i in 1..rows.len() {
                for j in 1..rows[0].len() {
                    if rows[i][j] % d != 0 {
                        for k in 0..rows[0].len() {
                            let t = rows[i][k];
                            rows[0][k] += t;
                        }
                        folded = true;
                        break 'f;
                    }
                }
            }
            if folded {
                continue;
            }
            out.push(d);
            rows.remove(0);
            for r in rows.iter_mut() {
                r.remove(0);
            }
        }
        out.retain(|&d| d != 0);
        out
    }

    #[test]
    fn local_smith_diag_4_6_at_2() {
        // oracle: integer smith of diag(4,6) is diag(2,12); 2-valuations (1,2)
        let oracle = oracle_smith_diag(vec![vec![4, 0], vec![0, 6]]);
        assert_eq!(oracle, vec![2, 12]);
        let a = IntMat::from_rows(vec![vec![4, 0], vec![0, 6]]);
        let f = local_smith(&a, &ctx2());
        assert_eq!(f.elementary_exponents, vec![1, 2]);
        assert!(f.verify(&a, &ctx2()));
    }

    #[test]
    fn local_smith_identity() {
        let a = IntMat::identity(3);
        for p in [2u64, 3, 5] {
            let ctx = PrecisionContext::with_default_cap(p).unwrap();
            let f = local_smith(&a, &ctx);
            assert_eq!(f.elementary_exponents, vec![0, 0, 0]);
            assert!(f.u.is_identity() && f.v.is_identity());
            assert!(f.verify(&a, &ctx));
        }
    }

    #[test]
    fn local_smith_zero() {
        let a = IntMat::zeros(2, 3);
        let f = local_smith(&a, &ctx2());
        assert!(f.elementary_exponents.is_empty());
        assert_eq!(f.rank, 0);
        assert!(f.verify(&a, &ctx2()));
    }

    #[test]
    fn smith_matches_oracle_on_samples() {
        let samples = vec![
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]],
            vec![vec![1, 2], vec![3, 4]],
            vec![vec![6, 10], vec![15, 25]],
            vec![vec![0, 0], vec![0, 3]],
        ];
        for rows in samples {
            let a = IntMat::from_rows(rows.clone());
            let s = smith_z(&a);
            assert!(s.verify(&a), "transform identity failed for {rows:?}");
            let oracle = oracle_smith_diag(rows);
            let got: Vec<i64> = s.diag.iter().map(|d| i64::try_from(d).unwrap()).collect();
            assert_eq!(got, oracle);
        }
    }

    #[test]
    fn solve_diagonal() {
        let a = IntMat::from_rows(vec![vec![2, 0], vec![0, 1]]);
        let b = vec![BigInt::from(2), BigInt::from(3)];
        let x = solve_local(&a, &b, &ctx2()).unwrap();
        assert_eq!(x[0], BigRational::from(BigInt::from(1)));
        assert_eq!(x[1], BigRational::from(BigInt::from(3)));
    }

    #[test]
    fn solve_valuation_obstruction() {
        // 2x = 1 has no solution in the 2-local integers
        let a = IntMat::from_rows(vec![vec![2]]);
        let b = vec![BigInt::one()];
        assert!(solve_local(&a, &b, &ctx2()).is_none());
    }

    #[test]
    fn solve_unit_denominator() {
        // 3x = 1 at p = 2: x = 1/3, congruent to an integer mod any 2-power
        let a = IntMat::from_rows(vec![vec![3]]);
        let b = vec![BigInt::one()];
        let x = solve_local(&a, &b, &ctx2()).unwrap();
        assert_eq!(x[0], BigRational::new(BigInt::one(), BigInt::from(3)));
        // 3*x == 1 exactly
        assert!((BigRational::from(BigInt::from(3)) * &x[0]).is_one());
    }

    #[test]
    fn kernel_examples() {
        let a = IntMat::from_rows(vec![vec![1, 1]]);
        let k = kernel_z(&a);
        assert_eq!(k.cols(), 1);
        assert!((&a * &k).is_zero());

        let id = IntMat::identity(3);
        assert_eq!(kernel_z(&id).cols(), 0);

        // kernel of [[2,2]] is spanned by (1,-1), not (2,-2)
        let a = IntMat::from_rows(vec![vec![2, 2]]);
        let k = kernel_z(&a);
        assert_eq!(k.cols(), 1);
        let g = k.get(0, 0).clone();
        assert!(g.abs().is_one());
        assert_eq!(*k.get(1, 0), -g);
    }

    #[test]
    fn saturate_examples() {
        // span{(2,2)} at p=2 saturates to span{(1,1)}
        let s = IntMat::from_rows(vec![vec![2], vec![2]]);
        let sat = sat_p(&s, 2);
        assert_eq!(sat.cols(), 1);
        assert_eq!(sat.get(0, 0), sat.get(1, 0));
        assert!(sat.get(0, 0).abs().is_one());

        // already saturated: same span
        let s = IntMat::from_rows(vec![vec![1, 0], vec![0, 1]]);
        let sat = sat_p(&s, 2);
        assert_eq!(sat, s);

        // {(2,0),(0,3)} at p=2: p-saturation spans {(1,0),(0,3)}, and since 3
        // is a 2-adic unit this equals the full lattice over the localization
        let s = IntMat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let sat = sat_p(&s, 2);
        // oracle route: all local elementary exponents of the saturation are 0
        let f = local_smith(&sat, &ctx2());
        assert_eq!(f.elementary_exponents, vec![0, 0]);
        let ctx = ctx2();
        assert!(solve_local(&sat, &[BigInt::one(), BigInt::zero()], &ctx).is_some());
        assert!(solve_local(&sat, &[BigInt::zero(), BigInt::one()], &ctx).is_some());
        // but (2,0) had its 2 divided out while (0,3) kept its unit content
        assert!(solve_local(&s, &[BigInt::one(), BigInt::zero()], &ctx).is_none());
        assert_eq!(sat_p(&sat, 2), sat, "idempotence");
    }

    #[test]
    fn sat_q_strips_units_too() {
        let s = IntMat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let sat = sat_q(&s);
        let f = smith_z(&sat);
        assert_eq!(f.diag, vec![BigInt::one(), BigInt::one()]);
    }
}
