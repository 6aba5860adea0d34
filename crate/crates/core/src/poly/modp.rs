//! Polynomial arithmetic and factorization over F_p.
//!
//! Coefficients are u64 residues; products go through u128. Factorization is
//! the usual pipeline: squarefree decomposition (char-p aware), then
//! distinct-degree, then equal-degree splitting. The equal-degree randomness
//! is seeded from (f, p), so factorizations are reproducible.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{IntPoly, PolyError};
use crate::arith::is_prime_u64;
use crate::rng::SplitMix64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ModPPoly {
    pub p: u64,
    coeffs: Vec<u64>, // ascending, trimmed, entries in [0, p)
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_u64(mut b: u64, mut e: u64, p: u64) -> u64 {
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
    powmod_u64(a, p - 2, p)
}

impl ModPPoly {
    pub fn zero(p: u64) -> Self {
        ModPPoly { p, coeffs: vec![] }
    }

    pub fn from_coeffs(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPPoly { p, coeffs }
    }

    pub fn from_intpoly(f: &IntPoly, p: u64) -> Self {
        let pb = num_bigint::BigInt::from(p);
        ModPPoly::from_coeffs(
            p,
            f.coeffs()
                .iter()
                .map(|c| {
                    let r = c.mod_floor(&pb);
                    r.to_u64().unwrap()
                })
                .collect(),
        )
    }

    pub fn to_intpoly(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|&c| num_bigint::BigInt::from(c)).collect())
    }

    pub fn x(p: u64) -> Self {
        ModPPoly::from_coeffs(p, vec![0, 1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        ModPPoly::from_coeffs(p, vec![c])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero());
        self.coeffs.len() - 1
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().expect("lc of zero")
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, x % self.p, self.p) + c) % self.p;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + b) % self.p;
        }
        ModPPoly::from_coeffs(self.p, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + self.p - b) % self.p;
        }
        ModPPoly::from_coeffs(self.p, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return ModPPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        ModPPoly::from_coeffs(self.p, out)
    }

    pub fn mul_scalar(&self, c: u64) -> Self {
        ModPPoly::from_coeffs(self.p, self.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = invmod(self.lc(), self.p);
        self.mul_scalar(inv)
    }

    /// Division with remainder; divisor need not be monic.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero());
        let p = self.p;
        if self.is_zero() || self.degree() < divisor.degree() {
            return (ModPPoly::zero(p), self.clone());
        }
        let dinv = invmod(divisor.lc(), p);
        let d = divisor.degree();
        let mut rem = self.coeffs.clone();
        let n = self.degree();
        let mut q = vec![0u64; n - d + 1];
        for k in (0..=n - d).rev() {
            let c = mulmod(rem[k + d], dinv, p);
            if c != 0 {
                for i in 0..=d {
                    let sub = mulmod(c, divisor.coeffs[i], p);
                    rem[k + i] = (rem[k + i] + p - sub) % p;
                }
            }
            q[k] = c;
        }
        (ModPPoly::from_coeffs(p, q), ModPPoly::from_coeffs(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "mod-p division not exact");
        q
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = ModPPoly::constant(p, 1);
        let mut s1 = ModPPoly::zero(p);
        let mut t0 = ModPPoly::zero(p);
        let mut t1 = ModPPoly::constant(p, 1);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = invmod(r0.lc(), p);
        (r0.mul_scalar(inv), s0.mul_scalar(inv), t0.mul_scalar(inv))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ModPPoly::zero(self.p);
        }
        ModPPoly::from_coeffs(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(c, (i as u64) % self.p, self.p))
                .collect(),
        )
    }

    /// self^e mod m, e a u64.
    pub fn powmod(&self, e: u64, m: &Self) -> Self {
        let mut acc = ModPPoly::constant(self.p, 1);
        let mut base = self.rem(m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// self^e mod m, big exponent.
    pub fn powmod_big(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = ModPPoly::constant(self.p, 1);
        let mut base = self.rem(m);
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        acc
    }

    /// Coefficient-wise p-th root of f(X^p) (valid over the prime field).
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let mut out = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                out.push(c);
            } else {
                debug_assert_eq!(c, 0, "pth_root: not a polynomial in X^p");
            }
        }
        ModPPoly::from_coeffs(self.p, out)
    }

    /// Rabin irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        if self.is_zero() || self.degree() == 0 {
            return false;
        }
        let n = self.degree();
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let p = self.p;
        let x = ModPPoly::x(p);
        // X^{p^n} ≡ X mod f
        let mut xp = x.clone();
        for _ in 0..n {
            xp = xp.powmod(p, &f);
        }
        if xp != x.rem(&f) {
            return false;
        }
        // gcd(X^{p^{n/q}} - X, f) = 1 for prime q | n
        let mut primes = vec![];
        let mut m = n;
        let mut q = 2;
        while q * q <= m {
            if m % q == 0 {
                primes.push(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for q in primes {
            let k = n / q;
            let mut xq = x.clone();
            for _ in 0..k {
                xq = xq.powmod(p, &f);
            }
            let g = xq.sub(&x).gcd(&f);
            if g.is_zero() || g.degree() != 0 {
                return false;
            }
        }
        true
    }
}

/// f = prod g_i^{e_i} with each g_i squarefree monic and the e_i distinct.
fn squarefree_decomposition(f: &ModPPoly) -> Vec<(ModPPoly, u32)> {
    let p = f.p;
    if f.is_zero() || f.degree() == 0 {
        return vec![];
    }
    let f = f.monic();
    let d = f.derivative();
    if d.is_zero() {
        let g = f.pth_root();
        return squarefree_decomposition(&g)
            .into_iter()
            .map(|(h, e)| (h, e * p as u32))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if fac.degree() > 0 {
            out.push((fac, i));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if c.degree() > 0 {
        out.extend(squarefree_decomposition(&c));
    }
    out
}

/// Distinct-degree split of a squarefree monic f: (product of all degree-d
/// irreducible factors, d) pairs.
fn distinct_degree(f: &ModPPoly) -> Vec<(ModPPoly, usize)> {
    let p = f.p;
    let mut rem = f.clone();
    let x = ModPPoly::x(p);
    let mut w = x.clone();
    let mut out = Vec::new();
    let mut d = 0usize;
    while !rem.is_zero() && rem.degree() >= 1 {
        d += 1;
        if rem.degree() < 2 * d {
            out.push((rem.clone(), rem.degree()));
            break;
        }
        w = w.powmod(p, &rem);
        let g = w.sub(&x).gcd(&rem);
        if !g.is_zero() && g.degree() > 0 {
            out.push((g.clone(), d));
            rem = rem.div_exact(&g);
            w = w.rem(&rem);
        }
    }
    out
}

/// Equal-degree splitting: f squarefree monic, all factors of degree d.
fn equal_degree(f: &ModPPoly, d: usize, rng: &mut SplitMix64) -> Vec<ModPPoly> {
    let p = f.p;
    if f.degree() == d {
        return vec![f.clone()];
    }
    loop {
        let deg_a = f.degree() - 1;
        let a = ModPPoly::from_coeffs(
            p,
            (0..=deg_a).map(|_| rng.below(p)).collect(),
        );
        if a.is_zero() || a.degree() == 0 {
            continue;
        }
        let g0 = a.gcd(f);
        if !g0.is_zero() && g0.degree() > 0 && g0.degree() < f.degree() {
            let rest = f.div_exact(&g0);
            let mut out = equal_degree(&g0, d, rng);
            out.extend(equal_degree(&rest, d, rng));
            return out;
        }
        let b = if p == 2 {
            // trace map over F_2: a + a^2 + ... + a^{2^{d-1}}
            let mut t = ModPPoly::zero(2);
            let mut cur = a.rem(f);
            for _ in 0..d {
                t = t.add(&cur);
                cur = cur.mul(&cur).rem(f);
            }
            t
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            a.powmod_big(&e, f).sub(&ModPPoly::constant(p, 1))
        };
        let g = b.gcd(f);
        if !g.is_zero() && g.degree() > 0 && g.degree() < f.degree() {
            let rest = f.div_exact(&g);
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&rest, d, rng));
            return out;
        }
    }
}

impl ModPPoly {
    /// Monic irreducible factors with multiplicities, sorted for determinism.
    pub fn factor(&self) -> Vec<(ModPPoly, u32)> {
        if self.is_zero() || self.degree() == 0 {
            return vec![];
        }
        let mut seed_words: Vec<u64> = vec![self.p];
        seed_words.extend(self.coeffs.iter().copied());
        let mut rng = SplitMix64::from_words(seed_words);
        let mut out: Vec<(ModPPoly, u32)> = Vec::new();
        for (g, mult) in squarefree_decomposition(self) {
            for (h, d) in distinct_degree(&g) {
                for irr in equal_degree(&h, d, &mut rng) {
                    out.push((irr.monic(), mult));
                }
            }
        }
        out.sort();
        out
    }
}

/// Factor f modulo p: monic irreducible factors with multiplicities.
/// The product of the factors times lc(f) reconstructs f mod p.
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<Vec<(ModPPoly, u32)>, PolyError> {
    if !is_prime_u64(p) {
        return Err(PolyError::NotPrime(p));
    }
    if f.is_zero() {
        return Err(PolyError::DegreeTooSmall);
    }
    let fp = ModPPoly::from_intpoly(f, p);
    if fp.is_zero() || fp.degree() != f.degree() {
        return Err(PolyError::LeadingCoefficientVanishes);
    }
    Ok(fp.factor())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn check_reconstruction(f: &IntPoly, p: u64) {
        let factors = factor_mod_p(f, p).unwrap();
        let fp = ModPPoly::from_intpoly(f, p);
        let mut prod = ModPPoly::constant(p, fp.lc());
        for (g, m) in &factors {
            assert!(g.is_irreducible(), "factor {:?} not irreducible mod {p}", g.coeffs());
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, fp, "product does not reconstruct f mod {p}");
    }

    #[test]
    fn x2_plus_1_splits_per_residue() {
        // p = 5: (X+2)(X+3)
        let f = ip(&[1, 0, 1]);
        let fs = factor_mod_p(&f, 5).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|(_, m)| *m == 1));
        assert!(fs.iter().all(|(g, _)| g.degree() == 1));
        // p = 3: irreducible
        let fs = factor_mod_p(&f, 3).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0.degree(), 2);
        assert_eq!(fs[0].1, 1);
        // p = 2: (X+1)^2
        let fs = factor_mod_p(&f, 2).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0.degree(), 1);
        assert_eq!(fs[0].1, 2);
    }

    #[test]
    fn leading_coefficient_guard() {
        let f = ip(&[1, 0, 5]);
        assert_eq!(factor_mod_p(&f, 5), Err(PolyError::LeadingCoefficientVanishes));
        assert_eq!(factor_mod_p(&f, 6), Err(PolyError::NotPrime(6)));
    }

    #[test]
    fn reconstruction_random() {
        let mut rng = SplitMix64::new(0x5eed);
        let primes = [2u64, 3, 5, 7, 13, 101, 1367];
        for trial in 0..120 {
            let p = primes[trial % primes.len()];
            let deg = 1 + (rng.below(7) as usize);
            let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.range_i64(-20, 20)).collect();
            if coeffs[deg] % (p as i64) == 0 {
                coeffs[deg] = 1;
            }
            let f = ip(&coeffs);
            check_reconstruction(&f, p);
        }
    }

    #[test]
    fn repeated_factors_and_char_p_powers() {
        // (X+1)^2 (X^2+1) mod 3
        let f = ip(&[1, 2, 1]).mul(&ip(&[1, 0, 1]));
        check_reconstruction(&f, 3);
        // X^9 - X^3 = X^3 (X-1)^3 (X+1)^3 mod 3: derivative zero path
        let f = ip(&[0, 0, 0, -1, 0, 0, 0, 0, 0, 1]);
        let fs = factor_mod_p(&f, 3).unwrap();
        check_reconstruction(&f, 3);
        assert!(fs.iter().all(|(_, m)| *m == 3));
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn deterministic_factorization() {
        let f = ip(&[3, 1, 4, 1, 5, 9, 2, 1]);
        let a = factor_mod_p(&f, 1009).unwrap();
        let b = factor_mod_p(&f, 1009).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn d7_poly_mod_small_primes() {
        let f = ip(&[-1, 0, 0, 0, -7, -7, -7, 1]);
        for p in [2u64, 5, 11, 13] {
            check_reconstruction(&f, p);
        }
    }

    #[test]
    fn gf2_trace_split() {
        // X^2 + X + 1 irreducible mod 2; (X^2+X+1)(X^3+X+1) reconstruction
        let f = ip(&[1, 1, 1]).mul(&ip(&[1, 1, 0, 1]));
        check_reconstruction(&f, 2);
        let fs = factor_mod_p(&f, 2).unwrap();
        assert_eq!(fs.len(), 2);
    }

    #[test]
    fn rabin_matches_bruteforce_small() {
        // all monic cubics mod 3: irreducible iff no roots
        for a in 0..3u64 {
            for b in 0..3u64 {
                for c in 0..3u64 {
                    let f = ModPPoly::from_coeffs(3, vec![c, b, a, 1]);
                    let has_root = (0..3).any(|x| f.eval(x) == 0);
                    assert_eq!(f.is_irreducible(), !has_root, "{:?}", f.coeffs());
                }
            }
        }
    }
}
