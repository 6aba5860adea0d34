//! Floating-point helpers for short-element searches: complex roots of the
//! defining polynomial (Durand-Kerner), the Minkowski embedding, and textbook
//! LLL. Strictly heuristic; every candidate these produce is verified with
//! exact arithmetic by the callers.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::linalg::Mat;
use crate::poly::IntPoly;


use super::NumberField;

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    fn div(self, o: C64) -> C64 {
        let d = o.re * o.re + o.im * o.im;
        C64::new((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)
    }
    fn norm2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// All complex roots of f by Durand-Kerner iteration.
pub fn complex_roots(f: &IntPoly) -> Vec<(f64, f64)> {
    let n = f.degree();
    if n == 0 {
        return vec![];
    }
    let lc = f.lc().to_f64().unwrap();
    let coeffs: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap() / lc).collect();
    let eval = |z: C64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc.mul(z).add(C64::new(*c, 0.0));
        }
        acc
    };
    let mut zs: Vec<C64> = (0..n)
        .map(|k| {
            let mut z = C64::new(1.0, 0.0);
            let seed = C64::new(0.4, 0.9);
            for _ in 0..=k {
                z = z.mul(seed);
            }
            z
        })
        .collect();
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom = denom.mul(zs[i].sub(zs[j]));
                }
            }
            let step = eval(zs[i]).div(denom);
            zs[i] = zs[i].sub(step);
            max_step = max_step.max(step.norm2());
        }
        if max_step < 1e-30 {
            break;
        }
    }
    zs.iter().map(|z| (z.re, z.im)).collect()
}

/// Minkowski embedding helper: real embeddings once, one representative per
/// complex-conjugate pair scaled by sqrt 2, so Euclidean norm^2 = T2 norm.
pub(crate) struct Embedder {
    reals: Vec<f64>,
    pairs: Vec<(f64, f64)>,
}

impl Embedder {
    pub fn new(k: &NumberField) -> Self {
        let mut reals = Vec::new();
        let mut pairs = Vec::new();
        for &(re, im) in &k.roots {
            if im.abs() < 1e-9 {
                reals.push(re);
            } else if im > 0.0 {
                pairs.push((re, im));
            }
        }
        // pathological pairing loss shows up as a count mismatch
        debug_assert_eq!(reals.len() + 2 * pairs.len(), k.degree());
        Embedder { reals, pairs }
    }

    /// Embedding of an O_K element into R^n.
    pub fn embed(&self, k: &NumberField, coords: &[BigInt]) -> Vec<f64> {
        let (num, den) = k.elem_to_poly(coords);
        let denf = den.to_f64().unwrap();
        let poly: Vec<f64> = num.coeffs().iter().map(|c| c.to_f64().unwrap()).collect();
        let eval = |re: f64, im: f64| -> C64 {
            let z = C64::new(re, im);
            let mut acc = C64::new(0.0, 0.0);
            for c in poly.iter().rev() {
                acc = acc.mul(z).add(C64::new(*c, 0.0));
            }
            acc
        };
        let sqrt2 = std::f64::consts::SQRT_2;
        let mut out = Vec::with_capacity(k.degree());
        for &r in &self.reals {
            out.push(eval(r, 0.0).re / denf);
        }
        for &(re, im) in &self.pairs {
            let v = eval(re, im);
            out.push(sqrt2 * v.re / denf);
            out.push(sqrt2 * v.im / denf);
        }
        out
    }

    /// |N(α)| estimate from an embedding vector.
    pub fn norm_estimate(&self, v: &[f64]) -> f64 {
        let mut acc = 1.0f64;
        let mut idx = 0;
        for _ in 0..self.reals.len() {
            acc *= v[idx].abs();
            idx += 1;
        }
        for _ in 0..self.pairs.len() {
            acc *= (v[idx] * v[idx] + v[idx + 1] * v[idx + 1]) / 2.0;
            idx += 2;
        }
        acc
    }
}

/// Textbook LLL (delta = 0.99) on the embeddings of the given lattice rows;
/// returns the reduced rows (same lattice).
pub fn lll_reduce(k: &NumberField, basis_rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = basis_rows.len();
    if m <= 1 {
        return basis_rows.to_vec();
    }
    let emb = Embedder::new(k);
    let mut b: Vec<Vec<f64>> = basis_rows.iter().map(|r| emb.embed(k, r)).collect();
    let mut rows: Vec<Vec<BigInt>> = basis_rows.to_vec();
    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };
    let delta = 0.99f64;
    let gso = |b: &Vec<Vec<f64>>| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(b.len());
        let mut norms = vec![0.0; b.len()];
        for i in 0..b.len() {
            let mut v = b[i].clone();
            for j in 0..i {
                let nj: f64 = norms[j];
                let mu = if nj.abs() < 1e-300 { 0.0 } else { dot(&b[i], &star[j]) / nj };
                for (vc, sc) in v.iter_mut().zip(&star[j]) {
                    *vc -= mu * sc;
                }
            }
            norms[i] = dot(&v, &v);
            star.push(v);
        }
        (star, norms)
    };
    let mu_of = |b: &Vec<Vec<f64>>, star: &Vec<Vec<f64>>, norms: &[f64], i: usize, j: usize| -> f64 {
        if norms[j].abs() < 1e-300 {
            0.0
        } else {
            dot(&b[i], &star[j]) / norms[j]
        }
    };
    let mut kk = 1usize;
    let mut guard = 0usize;
    while kk < m {
        guard += 1;
        if guard > 20_000 {
            break; // numerical stall; callers only lose search quality
        }
        let (star, norms) = gso(&b);
        for j in (0..kk).rev() {
            let mu = mu_of(&b, &star, &norms, kk, j);
            let q = mu.round();
            if q.abs() >= 1.0 && q.is_finite() {
                let qb = BigInt::from(q as i64);
                let (head, tail) = rows.split_at_mut(kk);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= &qb * y;
                }
                let bj = b[j].clone();
                for (x, y) in b[kk].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (star, norms) = gso(&b);
        let mu = mu_of(&b, &star, &norms, kk, kk - 1);
        if norms[kk] >= (delta - mu * mu) * norms[kk - 1] {
            kk += 1;
        } else {
            rows.swap(kk, kk - 1);
            b.swap(kk, kk - 1);
            kk = if kk > 1 { kk - 1 } else { 1 };
        }
    }
    rows
}

/// Integer vectors of exact sup-norm `s` in canonical sign (first nonzero
/// entry positive), deterministic order.
pub fn shell_vectors(dim: usize, s: i64) -> Vec<Vec<i64>> {
    assert!(s >= 1);
    let mut out = Vec::new();
    let mut cur = vec![0i64; dim];
    fn rec(cur: &mut Vec<i64>, idx: usize, s: i64, hit: bool, out: &mut Vec<Vec<i64>>) {
        if idx == cur.len() {
            if hit && cur.iter().find(|&&c| c != 0).map(|&c| c > 0).unwrap_or(false) {
                out.push(cur.clone());
            }
            return;
        }
        for v in -s..=s {
            cur[idx] = v;
            rec(cur, idx + 1, s, hit || v.abs() == s, out);
        }
        cur[idx] = 0;
    }
    rec(&mut cur, 0, s, false, &mut out);
    out
}

/// Rows of a Mat as coordinate vectors.
pub fn mat_rows(m: &Mat) -> Vec<Vec<BigInt>> {
    (0..m.rows).map(|i| m.row(i).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_x2_plus_1() {
        let f = IntPoly::from_i64(&[1, 0, 1]);
        let rs = complex_roots(&f);
        assert_eq!(rs.len(), 2);
        for (re, im) in rs {
            assert!(re.abs() < 1e-8);
            assert!((im.abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn roots_of_d7_poly() {
        let f = IntPoly::from_i64(&[-1, 0, 0, 0, -7, -7, -7, 1]);
        let rs = complex_roots(&f);
        assert_eq!(rs.len(), 7);
        let real = rs.iter().filter(|(_, im)| im.abs() < 1e-6).count();
        assert_eq!(real, 1);
        let prod: f64 = rs.iter().map(|(re, im)| (re * re + im * im).sqrt()).product();
        assert!((prod - 1.0).abs() < 1e-6, "prod = {prod}");
    }

    #[test]
    fn shells_are_canonical_surfaces() {
        let s2 = shell_vectors(2, 2);
        for v in &s2 {
            assert_eq!(v.iter().map(|x| x.abs()).max().unwrap(), 2, "{v:?}");
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            assert!(!s2.contains(&neg), "{v:?}");
        }
        // surface count: ((2s+1)^d - (2s-1)^d)/2
        assert_eq!(s2.len(), (25 - 9) / 2);
    }

    #[test]
    fn norm_estimate_matches_exact() {
        let k = crate::numfield::build_field(&IntPoly::from_i64(&[1, 5, -11, 7, -2, 1])).unwrap();
        let emb = Embedder::new(&k);
        let x = k.elem_add(&k.theta(), &k.from_int(&num_bigint::BigInt::from(3)));
        let v = emb.embed(&k, &x);
        let est = emb.norm_estimate(&v);
        let exact = k.norm(&x).to_f64().unwrap().abs();
        assert!((est / exact - 1.0).abs() < 1e-6, "est {est} vs exact {exact}");
    }
}
