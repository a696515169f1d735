use super::IntMat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Dense matrix over the prime field F_p, p < 2^31. Entries are reduced
/// representatives in [0, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_int(m: &IntMat, p: u64) -> Self {
        let pb = BigInt::from(p);
        let mut out = Self::zeros(p, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let r = m.get(i, j).mod_floor(&pb).to_u64().unwrap();
                out.set(i, j, r);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, rhs: &FpMat) -> FpMat {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.p, rhs.p);
        let p = self.p;
        let mut out = FpMat::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b != 0 {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = (out.data[idx] + a * b) % p;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &FpMat) -> FpMat {
        assert_eq!((self.rows, self.cols, self.p), (rhs.rows, rhs.cols, rhs.p));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a = (*a + b) % self.p;
        }
        out
    }

    pub fn scale(&self, k: u64) -> FpMat {
        let k = k % self.p;
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = (*a * k) % self.p;
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> FpMat {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = FpMat::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn inv_scalar(&self, a: u64) -> u64 {
        // Fermat; p is prime and a nonzero mod p
        let mut r = 1u64;
        let mut b = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    /// Row-reduce in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(row * self.cols + j, pr * self.cols + j);
            }
            let inv = self.inv_scalar(self.get(row, col));
            for j in col..self.cols {
                let v = self.get(row, j) * inv % p;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let f = self.get(r, col);
                    for j in col..self.cols {
                        let v = (self.get(r, j) + (p - f) * self.get(row, j)) % p;
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, entries in [0, p).
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                let c = m.get(r, free);
                if c != 0 {
                    v[pc] = self.p - c;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant, or 0 if singular.
    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        let p = self.p;
        let mut m = self.clone();
        let mut det = 1u64;
        for col in 0..m.cols {
            let Some(pr) = (col..m.rows).find(|&r| m.get(r, col) != 0) else {
                return 0;
            };
            if pr != col {
                for j in 0..m.cols {
                    m.data.swap(col * m.cols + j, pr * m.cols + j);
                }
                det = (p - det) % p;
            }
            let piv = m.get(col, col);
            det = det * piv % p;
            let inv = m.inv_scalar(piv);
            for r in (col + 1)..m.rows {
                let f = m.get(r, col);
                if f != 0 {
                    let f = f * inv % p;
                    for j in col..m.cols {
                        let v = (m.get(r, j) + (p - f) * m.get(col, j) % p) % p;
                        m.set(r, j, v);
                    }
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.det() != 0
    }

    /// Characteristic polynomial coefficients, little-endian: returns
    /// c = [c_0, ..., c_n] with det(lambda*I - self) = sum c_k lambda^k.
    /// Hessenberg reduction by similarity transforms, then the standard
    /// leading-principal-minor recurrence.
    pub fn char_poly(&self) -> Vec<u64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p = self.p;
        let mut h = self.clone();
        // similarity reduction to upper Hessenberg
        for j in 0..n.saturating_sub(2) {
            let Some(r) = ((j + 1)..n).find(|&r| h.get(r, j) != 0) else {
                continue;
            };
            if r != j + 1 {
                for c in 0..n {
                    h.data.swap((j + 1) * n + c, r * n + c);
                }
                for rr in 0..n {
                    h.data.swap(rr * n + j + 1, rr * n + r);
                }
            }
            let pivot_inv = self.inv_scalar(h.get(j + 1, j));
            for r2 in (j + 2)..n {
                let f = h.get(r2, j) * pivot_inv % p;
                if f == 0 {
                    continue;
                }
                // row r2 -= f * row (j+1); col (j+1) += f * col r2
                for c in 0..n {
                    let v = (h.get(r2, c) + (p - f) * h.get(j + 1, c)) % p;
                    h.set(r2, c, v);
                }
                for rr in 0..n {
                    let v = (h.get(rr, j + 1) + f * h.get(rr, r2)) % p;
                    h.set(rr, j + 1, v);
                }
            }
        }
        // p_0 = 1; p_k built from the Hessenberg entries (1-indexed formula)
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for k in 1..=n {
            // (lambda - h[k-1][k-1]) * p_{k-1}
            let prev = &polys[k - 1];
            let mut cur = vec![0u64; k + 1];
            for (i, &c) in prev.iter().enumerate() {
                cur[i + 1] = (cur[i + 1] + c) % p;
                cur[i] = (cur[i] + (p - h.get(k - 1, k - 1)) * c) % p;
            }
            let mut subdiag_prod = 1u64;
            for i in 1..k {
                // term: h[k-1-i][k-1] * prod_{q=k-i}^{k-1} h[q][q-1] * p_{k-1-i}
                subdiag_prod = subdiag_prod * h.get(k - i, k - i - 1) % p;
                if subdiag_prod == 0 {
                    break;
                }
                let coef = h.get(k - 1 - i, k - 1) * subdiag_prod % p;
                if coef == 0 {
                    continue;
                }
                for (q, &c) in polys[k - 1 - i].iter().enumerate() {
                    cur[q] = (cur[q] + (p - coef % p) % p * c) % p;
                }
            }
            polys.push(cur);
        }
        polys.pop().unwrap()
    }

    /// Solve self * x = b, if consistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMat::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// Entrywise reduction into [0, m).
pub fn mat_mod(a: &IntMat, m: &BigInt) -> IntMat {
    IntMat::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j).mod_floor(m))
}

/// Product reduced mod m.
pub fn matmul_mod(a: &IntMat, b: &IntMat, m: &BigInt) -> IntMat {
    mat_mod(&(a * b), m)
}
