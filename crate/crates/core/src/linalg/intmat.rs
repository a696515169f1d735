use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// JSON form: array of rows; entries are plain numbers when they fit in an
/// i64 and decimal strings otherwise, so certificates round-trip exactly.
impl Serialize for IntMat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let v = self.get(i, j);
                        match i64::try_from(v) {
                            Ok(n) => serde_json::Value::from(n),
                            Err(_) => serde_json::Value::String(v.to_string()),
                        }
                    })
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<serde_json::Value>>::deserialize(deserializer)?;
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            for v in row {
                let n = match v {
                    serde_json::Value::Number(n) => {
                        let s = n.to_string();
                        BigInt::from_str(&s)
                            .map_err(|_| D::Error::custom(format!("non-integer entry {s}")))?
                    }
                    serde_json::Value::String(s) => BigInt::from_str(s)
                        .map_err(|_| D::Error::custom(format!("bad integer string {s:?}")))?,
                    other => {
                        return Err(D::Error::custom(format!("bad matrix entry: {other}")));
                    }
                };
                data.push(n);
            }
        }
        Ok(IntMat { rows: r, cols: c, data })
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    /// Convenience constructor for tests and fixtures.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().map(BigInt::from).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> IntMat {
        let mut m = IntMat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows);
        IntMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols);
        IntMat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                other.get(i - self.rows, j).clone()
            }
        })
    }

    pub fn block_diag(&self, other: &IntMat) -> IntMat {
        IntMat::from_fn(
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| {
                if i < self.rows && j < self.cols {
                    self.get(i, j).clone()
                } else if i >= self.rows && j >= self.cols {
                    other.get(i - self.rows, j - self.cols).clone()
                } else {
                    BigInt::zero()
                }
            },
        )
    }

    pub fn submatrix(&self, row_range: std::ops::Range<usize>, col_range: std::ops::Range<usize>) -> IntMat {
        IntMat::from_fn(row_range.len(), col_range.len(), |i, j| {
            self.get(row_range.start + i, col_range.start + j).clone()
        })
    }

    pub fn scale(&self, k: &BigInt) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        if self.cols <= (1 << 13) {
            if let Some(a) = self.small_entries() {
                let small_v: Option<Vec<i64>> = v
                    .iter()
                    .map(|x| i64::try_from(x).ok().filter(|y| y.abs() <= (1 << 50)))
                    .collect();
                if let Some(sv) = small_v {
                    return (0..self.rows)
                        .map(|i| {
                            let mut s = 0i128;
                            for j in 0..self.cols {
                                s += a[i * self.cols + j] as i128 * sv[j] as i128;
                            }
                            BigInt::from(s)
                        })
                        .collect();
                }
            }
        }
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        s += a * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    /// Kronecker product self (x) other.
    pub fn kron(&self, other: &IntMat) -> IntMat {
        let mut out = IntMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Max absolute value of the entries, as a bit-size proxy in heuristics.
    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    // in-place elementary operations used by the normal-form engines

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_i += q * row_j
    pub(crate) fn add_row_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let t = self.get(j, k) * q;
            if !t.is_zero() {
                self.data[i * self.cols + k] += t;
            }
        }
    }

    /// col_i += q * col_j
    pub(crate) fn add_col_mul(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.rows {
            let t = self.get(k, j) * q;
            if !t.is_zero() {
                self.data[k * self.cols + i] += t;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + k]);
            self.data[i * self.cols + k] = -v;
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for k in 0..self.rows {
            let v = std::mem::take(&mut self.data[k * self.cols + j]);
            self.data[k * self.cols + j] = -v;
        }
    }

    /// Replace rows (i, j) by (x*row_i + y*row_j, z*row_i + w*row_j).
    pub(crate) fn two_row(&mut self, i: usize, j: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for k in 0..self.cols {
            let a = self.get(i, k).clone();
            let b = self.get(j, k).clone();
            self.set(i, k, x * &a + y * &b);
            self.set(j, k, z * &a + w * &b);
        }
    }

    /// Replace cols (i, j) by (x*col_i + y*col_j, z*col_i + w*col_j).
    pub(crate) fn two_col(&mut self, i: usize, j: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for k in 0..self.rows {
            let a = self.get(k, i).clone();
            let b = self.get(k, j).clone();
            self.set(k, i, x * &a + y * &b);
            self.set(k, j, z * &a + w * &b);
        }
    }
}

impl IntMat {
    /// Entries as i64 when they all fit comfortably below the fast-multiply
    /// bound (products of two such entries summed over any dimension used
    /// here stay within i128).
    fn small_entries(&self) -> Option<Vec<i64>> {
        const BOUND: i64 = 1 << 50;
        let mut out = Vec::with_capacity(self.data.len());
        for x in &self.data {
            let v = i64::try_from(x).ok()?;
            if v.abs() > BOUND {
                return None;
            }
            out.push(v);
        }
        Some(out)
    }
}

impl Mul for &IntMat {
    type Output = IntMat;
    fn mul(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        // fast path: single-limb entries with i128 accumulation
        if self.cols <= (1 << 13) {
            if let (Some(a), Some(b)) = (self.small_entries(), rhs.small_entries()) {
                let mut out = vec![0i128; self.rows * rhs.cols];
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let av = a[i * self.cols + k];
                        if av == 0 {
                            continue;
                        }
                        let av = av as i128;
                        let row = &b[k * rhs.cols..(k + 1) * rhs.cols];
                        let orow = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
                        for (o, &bv) in orow.iter_mut().zip(row) {
                            *o += av * bv as i128;
                        }
                    }
                }
                return IntMat {
                    rows: self.rows,
                    cols: rhs.cols,
                    data: out.into_iter().map(BigInt::from).collect(),
                };
            }
        }
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &IntMat {
    type Output = IntMat;
    fn add(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &IntMat {
    type Output = IntMat;
    fn sub(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
