//! Small dense linear algebra over F_p (u64 entries), for the residue-algebra
//! computations behind the round-2 and prime-splitting code.

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl FpMat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    #[allow(dead_code)] // exercised by tests
    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = FpMat::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.into_iter().map(|v| v % p));
        }
        FpMat { p, rows: r, cols: c, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = FpMat::zero(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.at(i, j) + mulmod(a, other.at(k, j), p)) % p;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// x * self for a row vector x.
    #[allow(dead_code)] // exercised by tests
    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows);
        let p = self.p;
        let mut out = vec![0u64; self.cols];
        for i in 0..self.rows {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] = (out[j] + mulmod(x[i], self.at(i, j), p)) % p;
            }
        }
        out
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (FpMat, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.at(i, c) != 0) else { continue };
            // swap rows
            for j in 0..m.cols {
                let (a, b) = (m.at(r, j), m.at(pr, j));
                m.set(r, j, b);
                m.set(pr, j, a);
            }
            let inv = invmod(m.at(r, c), p);
            for j in 0..m.cols {
                let v = mulmod(m.at(r, j), inv, p);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && m.at(i, c) != 0 {
                    let factor = m.at(i, c);
                    for j in 0..m.cols {
                        let v = (m.at(i, j) + p - mulmod(factor, m.at(r, j), p)) % p;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis (rows) of the left kernel {x : x * self = 0}.
    pub fn left_kernel(&self) -> FpMat {
        // kernel of x*A = 0 <=> A^T y = 0 in column convention; work on transpose
        let t = self.transpose();
        let (rr, pivots) = t.rref();
        let n = self.rows;
        let mut free_cols: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free_cols.sort_unstable();
        let p = self.p;
        let mut rows = Vec::new();
        for &fc in &free_cols {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (ri, &pc) in pivots.iter().enumerate() {
                // rr[ri][fc] is the coefficient of the free var in pivot eq
                let coef = rr.at(ri, fc);
                if coef != 0 {
                    v[pc] = (p - coef) % p;
                }
            }
            rows.push(v);
        }
        if rows.is_empty() {
            FpMat::zero(p, 0, n)
        } else {
            FpMat::from_rows(p, rows)
        }
    }

    pub fn transpose(&self) -> FpMat {
        let mut t = FpMat::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j));
            }
        }
        t
    }

    /// Solve x * self = v; None if inconsistent. Returns one solution.
    pub fn solve_left(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.cols);
        // augment transpose: A^T x^T = v^T
        let p = self.p;
        let t = self.transpose();
        let mut aug = FpMat::zero(p, t.rows, t.cols + 1);
        for i in 0..t.rows {
            for j in 0..t.cols {
                aug.set(i, j, t.at(i, j));
            }
            aug.set(i, t.cols, v[i]);
        }
        let (rr, pivots) = aug.rref();
        // inconsistent if a pivot lands in the last column
        if pivots.contains(&t.cols) {
            return None;
        }
        let mut x = vec![0u64; self.rows];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = rr.at(ri, t.cols);
        }
        Some(x)
    }
}
