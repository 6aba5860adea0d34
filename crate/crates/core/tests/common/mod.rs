//! Shared oracles for the integration suites. Everything here is independent
//! of the implementation paths it checks: finite-field splitting machinery
//! built only on mod-p polynomial arithmetic, plus deterministic sampling.
//!
//! Each test binary includes this module separately, so helpers used by one
//! suite look dead to the other.
#![allow(dead_code)]

use num_bigint::BigInt;
use polya_core::poly::{IntPoly, ModPPoly};
use polya_core::rng::SplitMix64;

/// F_{p^k} presented as F_p[Y]/(m); elements are ModPPoly reduced mod m.
pub struct ExtField {
    pub p: u64,
    pub modulus: ModPPoly,
}

impl ExtField {
    /// Deterministic search for an irreducible degree-k modulus.
    pub fn new(p: u64, k: usize) -> Self {
        if k == 1 {
            return ExtField { p, modulus: ModPPoly::from_coeffs(p, vec![0, 1]) };
        }
        let mut rng = SplitMix64::from_words([p, k as u64, 0xf1e1d]);
        loop {
            let mut coeffs: Vec<u64> = (0..k).map(|_| rng.below(p)).collect();
            coeffs.push(1);
            let m = ModPPoly::from_coeffs(p, coeffs);
            if m.degree() == k && m.is_irreducible() {
                return ExtField { p, modulus: m };
            }
        }
    }

    pub fn k(&self) -> usize {
        self.modulus.degree()
    }

    pub fn zero(&self) -> ModPPoly {
        ModPPoly::zero(self.p)
    }

    pub fn one(&self) -> ModPPoly {
        ModPPoly::constant(self.p, 1)
    }

    pub fn add(&self, a: &ModPPoly, b: &ModPPoly) -> ModPPoly {
        a.add(b)
    }

    pub fn sub(&self, a: &ModPPoly, b: &ModPPoly) -> ModPPoly {
        a.sub(b)
    }

    pub fn mul(&self, a: &ModPPoly, b: &ModPPoly) -> ModPPoly {
        a.mul(b).rem(&self.modulus)
    }

    pub fn inv(&self, a: &ModPPoly) -> ModPPoly {
        assert!(!a.is_zero());
        let (g, s, _) = a.xgcd(&self.modulus);
        assert_eq!(g.degree(), 0, "inverse of a zero divisor");
        s.rem(&self.modulus)
    }

    pub fn pow_big(&self, a: &ModPPoly, e: &num_bigint::BigUint) -> ModPPoly {
        a.powmod_big(e, &self.modulus)
    }

    pub fn random(&self, rng: &mut SplitMix64) -> ModPPoly {
        let coeffs: Vec<u64> = (0..self.k()).map(|_| rng.below(self.p)).collect();
        ModPPoly::from_coeffs(self.p, coeffs)
    }
}

/// Polynomials over F_{p^k}: ascending coefficient vectors of field elements.
pub struct ExtPoly(pub Vec<ModPPoly>);

impl ExtPoly {
    fn trim(mut v: Vec<ModPPoly>) -> Vec<ModPPoly> {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    }

    pub fn from_base(f: &ModPPoly) -> ExtPoly {
        ExtPoly(
            f.coeffs()
                .iter()
                .map(|&c| ModPPoly::constant(f.p, c))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        assert!(!self.0.is_empty());
        self.0.len() - 1
    }

    pub fn monic(&self, field: &ExtField) -> ExtPoly {
        let inv = field.inv(self.0.last().unwrap());
        ExtPoly(self.0.iter().map(|c| field.mul(c, &inv)).collect())
    }

    pub fn divrem(&self, field: &ExtField, div: &ExtPoly) -> (ExtPoly, ExtPoly) {
        let d = div.degree();
        let dinv = field.inv(div.0.last().unwrap());
        let mut rem = self.0.clone();
        if rem.len() <= d {
            return (ExtPoly(vec![]), ExtPoly(Self::trim(rem)));
        }
        let n = rem.len() - 1;
        let mut q = vec![field.zero(); n - d + 1];
        for kk in (0..=n - d).rev() {
            let c = field.mul(&rem[kk + d], &dinv);
            if !c.is_zero() {
                for (j, dj) in div.0.iter().enumerate() {
                    let t = field.mul(&c, dj);
                    rem[kk + j] = field.sub(&rem[kk + j], &t);
                }
            }
            q[kk] = c;
        }
        (ExtPoly(Self::trim(q)), ExtPoly(Self::trim(rem)))
    }

    pub fn gcd(&self, field: &ExtField, other: &ExtPoly) -> ExtPoly {
        let mut a = ExtPoly(Self::trim(self.0.clone()));
        let mut b = ExtPoly(Self::trim(other.0.clone()));
        while !b.0.is_empty() {
            let (_, r) = a.divrem(field, &b);
            a = b;
            b = r;
        }
        if a.0.is_empty() {
            a
        } else {
            a.monic(field)
        }
    }

    pub fn pow_mod_big(
        &self,
        field: &ExtField,
        e: &num_bigint::BigUint,
        m: &ExtPoly,
    ) -> ExtPoly {
        use num_traits::Zero as _;
        let mut acc = ExtPoly(vec![field.one()]);
        let mut base = {
            let (_, r) = self.divrem(field, m);
            r
        };
        if e.is_zero() {
            return acc;
        }
        for i in 0..e.bits() {
            if e.bit(i) {
                let prod = acc.mul(field, &base);
                acc = prod.divrem(field, m).1;
            }
            let sq = base.mul(field, &base);
            base = sq.divrem(field, m).1;
        }
        acc
    }

    pub fn mul(&self, field: &ExtField, other: &ExtPoly) -> ExtPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return ExtPoly(vec![]);
        }
        let mut out = vec![field.zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                let t = field.mul(a, b);
                out[i + j] = field.add(&out[i + j], &t);
            }
        }
        ExtPoly(Self::trim(out))
    }
}

/// All roots (with multiplicity 1 expected) of a squarefree base polynomial
/// inside F_{p^k}, by equal-degree splitting down to linear factors.
pub fn roots_in_extension(f: &ModPPoly, field: &ExtField) -> Vec<ModPPoly> {
    use num_bigint::BigUint;
    use num_traits::One as _;
    let p = field.p;
    let q: BigUint = BigUint::from(p).pow(field.k() as u32);
    let mut rng = SplitMix64::from_words(
        f.coeffs().iter().copied().chain([p, field.k() as u64, 0x5eed2]),
    );
    let mut stack = vec![ExtPoly::from_base(f).monic(field)];
    let mut roots = Vec::new();
    while let Some(g) = stack.pop() {
        if g.degree() == 0 {
            continue;
        }
        if g.degree() == 1 {
            // root = -c0 (monic)
            let neg = field.sub(&field.zero(), &g.0[0]);
            roots.push(neg);
            continue;
        }
        // random split
        let a = ExtPoly(vec![field.random(&mut rng), field.one()]);
        let b = if p == 2 {
            // absolute trace to F_2: a + a^2 + ... + a^{2^{k·deg-1}}
            let mut t = ExtPoly(vec![]);
            let mut cur = a.divrem(field, &g).1;
            let steps = field.k() as u32;
            for _ in 0..steps {
                t = add_ext(field, &t, &cur);
                let sq = cur.mul(field, &cur);
                cur = sq.divrem(field, &g).1;
            }
            t
        } else {
            let e = (&q - BigUint::one()) / BigUint::from(2u32);
            let powed = a.pow_mod_big(field, &e, &g);
            sub_one(field, &powed)
        };
        if b.0.is_empty() {
            stack.push(g);
            continue;
        }
        let d = b.gcd(field, &g);
        if d.0.is_empty() || d.degree() == 0 || d.degree() == g.degree() {
            stack.push(g);
            continue;
        }
        let (quot, rem) = g.divrem(field, &d);
        assert!(rem.0.is_empty());
        stack.push(d);
        stack.push(quot);
    }
    roots
}

fn add_ext(field: &ExtField, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
    let n = a.0.len().max(b.0.len());
    let z = field.zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.0.get(i).unwrap_or(&z);
        let y = b.0.get(i).unwrap_or(&z);
        out.push(field.add(x, y));
    }
    ExtPoly(ExtPoly::trim(out))
}

fn sub_one(field: &ExtField, a: &ExtPoly) -> ExtPoly {
    let mut out = a.0.clone();
    if out.is_empty() {
        out.push(field.zero());
    }
    out[0] = field.sub(&out[0], &field.one());
    ExtPoly(ExtPoly::trim(out))
}

/// Discriminant of f mod p computed from a splitting construction:
/// lc^{2n-2} * prod_{i<j} (r_i - r_j)^2 over the roots in F_{p^k}.
/// Returns None when f mod p is not squarefree of full degree (in which case
/// disc(f) ≡ 0 mod p is the expected relation).
pub fn disc_mod_p_by_roots(f: &IntPoly, p: u64) -> Option<u64> {
    let fp = ModPPoly::from_intpoly(f, p);
    if fp.is_zero() || fp.degree() != f.degree() {
        return None;
    }
    if fp.gcd(&fp.derivative()).degree() != 0 {
        return None;
    }
    let factors = fp.factor();
    let mut k = 1usize;
    for (g, _) in &factors {
        k = num_integer::lcm(k, g.degree());
    }
    let field = ExtField::new(p, k);
    let roots = roots_in_extension(&fp.monic(), &field);
    assert_eq!(roots.len(), fp.degree(), "splitting field must contain all roots");
    let mut disc = field.one();
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let diff = field.sub(&roots[i], &roots[j]);
            let sq = field.mul(&diff, &diff);
            disc = field.mul(&disc, &sq);
        }
    }
    // scale by lc^{2n-2}
    let n = fp.degree();
    let mut lc_pow = field.one();
    let lc = ModPPoly::constant(p, fp.lc());
    for _ in 0..2 * n - 2 {
        lc_pow = field.mul(&lc_pow, &lc);
    }
    disc = field.mul(&disc, &lc_pow);
    // the result lies in the prime field
    assert!(disc.is_zero() || disc.degree() == 0, "discriminant must be rational");
    Some(if disc.is_zero() { 0 } else { disc.coeffs()[0] })
}

/// Deterministic random monic irreducible IntPoly.
pub fn random_irreducible(rng: &mut SplitMix64, degree: usize, coeff_bound: i64) -> IntPoly {
    loop {
        let mut coeffs: Vec<BigInt> = (0..degree)
            .map(|_| BigInt::from(rng.range_i64(-coeff_bound, coeff_bound)))
            .collect();
        coeffs.push(BigInt::from(1));
        let f = IntPoly::from_coeffs(coeffs);
        if f.degree() == degree && matches!(polya_core::poly::is_irreducible_over_q(&f), Ok(true))
        {
            return f;
        }
    }
}
