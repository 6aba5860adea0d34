//! Univariate polynomials with exact integer coefficients.
//!
//! Coefficients are stored in ascending degree order ("1,5,-1,0,0,1" is
//! 1+5X-X^2+X^5); the zero polynomial is the empty list. Resultants and
//! discriminants use the subresultant PRS, so everything stays in Z.

mod irred;
mod modp;

pub use irred::is_irreducible_over_q;
pub use modp::{factor_mod_p, ModPPoly};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    DegreeTooSmall,
    LeadingCoefficientVanishes,
    ZeroRadicand,
    NotPrime(u64),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::DegreeTooSmall => write!(f, "polynomial degree too small"),
            PolyError::LeadingCoefficientVanishes => {
                write!(f, "leading coefficient vanishes modulo p")
            }
            PolyError::ZeroRadicand => write!(f, "radicand must be nonzero"),
            PolyError::NotPrime(p) => write!(f, "{p} is not prime"),
        }
    }
}

impl std::error::Error for PolyError {}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![BigInt::one()] }
    }

    pub fn x() -> Self {
        IntPoly::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// Ascending-degree coefficients; trailing zeros trimmed.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parse "a0,a1,...,an" (ascending degree).
    pub fn parse(s: &str) -> Result<Self, String> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            let t = part.trim().replace('\u{2212}', "-");
            if t.is_empty() {
                return Err("empty coefficient".to_string());
            }
            let v: BigInt = t.parse().map_err(|e| format!("bad coefficient {t:?}: {e}"))?;
            coeffs.push(v);
        }
        let p = IntPoly::from_coeffs(coeffs);
        if p.is_zero() {
            return Err("zero polynomial".to_string());
        }
        Ok(p)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; panics on the zero polynomial.
    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("lc of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.lc().is_one()
    }

    pub fn neg(&self) -> Self {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        IntPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(out)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiply by X^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: out }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        IntPoly { coeffs: self.coeffs.iter().map(|a| a / &c).collect() }
    }

    /// Exact division; panics if `other` does not divide `self` in Z[X].
    pub fn div_exact(&self, other: &Self) -> Self {
        assert!(!other.is_zero());
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut rem = self.coeffs.clone();
        let d = other.degree();
        let n = self.degree();
        assert!(n >= d, "div_exact: degree too small");
        let mut q = vec![BigInt::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let (c, r) = rem[k + d].div_rem(other.lc());
            assert!(r.is_zero(), "div_exact: not divisible (leading)");
            if !c.is_zero() {
                for i in 0..=d {
                    rem[k + i] -= &c * &other.coeffs[i];
                }
            }
            q[k] = c;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "div_exact: nonzero remainder");
        IntPoly::from_coeffs(q)
    }

    /// True division test: does `other` divide `self` exactly in Z[X]?
    pub fn divides_exactly(&self, other: &Self) -> Option<Self> {
        if other.is_zero() || self.is_zero() || self.degree() < other.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let d = other.degree();
        let n = self.degree();
        let mut q = vec![BigInt::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let (c, r) = rem[k + d].div_rem(other.lc());
            if !r.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for i in 0..=d {
                    rem[k + i] -= &c * &other.coeffs[i];
                }
            }
            q[k] = c;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly::from_coeffs(q))
        } else {
            None
        }
    }

    /// Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f = q*g + r. Returns r.
    pub fn pseudo_rem(&self, g: &Self) -> Self {
        assert!(!g.is_zero());
        if self.is_zero() || self.degree() < g.degree() {
            return self.clone();
        }
        let mut r = self.clone();
        let d = g.degree();
        let mut e = self.degree() as i64 - d as i64 + 1;
        let lcg = g.lc().clone();
        while !r.is_zero() && r.degree() >= d {
            let k = r.degree() - d;
            let lead = r.lc().clone();
            // r = lcg * r - lead * X^k * g
            r = r.mul_scalar(&lcg).sub(&g.shift(k).mul_scalar(&lead));
            e -= 1;
        }
        if e > 0 {
            let scale = num_traits::pow::pow(lcg, e as usize);
            r = r.mul_scalar(&scale);
        }
        r
    }

    /// Gcd in Z[X], primitive with positive leading coefficient
    /// (contents folded in as in standard subresultant gcd).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part().mul_scalar(&self.content().gcd(&other.content()).max(BigInt::one()));
        }
        if other.is_zero() {
            return self.primitive_part().mul_scalar(&self.content().gcd(&other.content()).max(BigInt::one()));
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part().mul_scalar(&cont)
    }

    /// Resultant via the subresultant PRS (Cohen, Algorithm 3.3.7).
    pub fn resultant(&self, other: &Self) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        if self.degree() == 0 {
            return num_traits::pow::pow(self.coeffs[0].clone(), other.degree());
        }
        if other.degree() == 0 {
            return num_traits::pow::pow(other.coeffs[0].clone(), self.degree());
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut s = BigInt::one();
        if a.degree() < b.degree() {
            if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
                s = -s;
            }
            std::mem::swap(&mut a, &mut b);
        }
        let ca = a.content();
        let cb = b.content();
        let t = num_traits::pow::pow(ca.clone(), b.degree())
            * num_traits::pow::pow(cb.clone(), a.degree());
        a = a.div_exact(&IntPoly::constant(ca));
        b = b.div_exact(&IntPoly::constant(cb));
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let da = a.degree();
            let db = b.degree();
            let delta = da - db;
            if da % 2 == 1 && db % 2 == 1 {
                s = -s;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            let denom = &g * num_traits::pow::pow(h.clone(), delta);
            b = r.div_exact(&IntPoly::constant(denom));
            g = a.lc().clone();
            h = if delta == 0 {
                h
            } else {
                // h^{1-delta} g^delta, exact in Z
                let gp = num_traits::pow::pow(g.clone(), delta);
                let hp = num_traits::pow::pow(h.clone(), delta - 1);
                gp.div_rem(&hp).0
            };
            if b.is_zero() {
                return BigInt::zero();
            }
            if b.degree() == 0 {
                let da = a.degree();
                let num = num_traits::pow::pow(b.coeffs[0].clone(), da);
                let den = num_traits::pow::pow(h.clone(), da.saturating_sub(1));
                let (q, rr) = num.div_rem(&den);
                debug_assert!(rr.is_zero());
                return s * t * q;
            }
        }
    }

    /// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f).
    pub fn discriminant(&self) -> Result<BigInt, PolyError> {
        if self.is_zero() || self.degree() < 1 {
            return Err(PolyError::DegreeTooSmall);
        }
        let n = self.degree();
        let res = self.resultant(&self.derivative());
        let (q, r) = res.div_rem(self.lc());
        debug_assert!(r.is_zero(), "Res(f, f') not divisible by lc(f)");
        let sign = if (n * (n - 1) / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        Ok(sign * q)
    }

    /// Squarefree part over Q: f / gcd(f, f'), primitive.
    pub fn squarefree_part(&self) -> Self {
        assert!(!self.is_zero());
        if self.degree() == 0 {
            return IntPoly::one();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive_part();
        }
        // division is exact over Q; over Z after clearing content
        let num = self.mul_scalar(&num_traits::pow::pow(g.lc().clone(), self.degree()));
        num.divides_exactly(&g)
            .expect("gcd must divide")
            .primitive_part()
    }

    /// Number of distinct real roots, via a Sturm chain with positive
    /// pseudo-division scaling. Input may have repeated factors.
    pub fn count_real_roots(&self) -> usize {
        assert!(!self.is_zero());
        if self.degree() == 0 {
            return 0;
        }
        let f = self.squarefree_part();
        if f.degree() == 0 {
            return 0;
        }
        let mut chain = vec![f.clone(), f.derivative()];
        loop {
            let last = &chain[chain.len() - 1];
            if last.is_zero() {
                chain.pop();
                break;
            }
            if last.degree() == 0 {
                break;
            }
            let prev = &chain[chain.len() - 2];
            let lcg = last.lc().clone();
            let e = prev.degree() - last.degree() + 1;
            let r = prev.pseudo_rem(last);
            // pseudo factor lc^e: if negative, remainder sign flipped
            let mut next = r.neg();
            if lcg.is_negative() && e % 2 == 1 {
                next = next.neg();
            }
            if next.is_zero() {
                break;
            }
            // strip positive content only: Sturm needs signs intact
            let c = next.content();
            if c > BigInt::one() {
                next = IntPoly::from_coeffs(next.coeffs.iter().map(|a| a / &c).collect());
            }
            chain.push(next);
        }
        let sign_at = |p: &IntPoly, at_minus_inf: bool| -> i32 {
            let s = if p.lc().is_negative() { -1 } else { 1 };
            if at_minus_inf && p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        };
        let variations = |at_minus_inf: bool| -> usize {
            let mut count = 0;
            let mut last = 0i32;
            for p in &chain {
                let s = sign_at(p, at_minus_inf);
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
            count
        };
        variations(true) - variations(false)
    }

    /// Substitute X -> X + a.
    pub fn taylor_shift(&self, a: &BigInt) -> Self {
        let mut out = IntPoly::zero();
        let shift = IntPoly::from_coeffs(vec![a.clone(), BigInt::one()]);
        for c in self.coeffs.iter().rev() {
            out = out.mul(&shift).add(&IntPoly::constant(c.clone()));
        }
        out
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                if i == 1 {
                    write!(f, "X")?;
                } else {
                    write!(f, "X^{i}")?;
                }
            } else if i == 1 {
                write!(f, "{mag}*X")?;
            } else {
                write!(f, "{mag}*X^{i}")?;
            }
        }
        Ok(())
    }
}

/// Squarefree kernel of a radicand: d squarefree with Q(sqrt n) = Q(sqrt d).
pub fn squarefree_radicand(n: &BigInt) -> Result<BigInt, PolyError> {
    if n.is_zero() {
        return Err(PolyError::ZeroRadicand);
    }
    Ok(arith::squarefree_kernel(n))
}

/// Minimal polynomial candidate for (root of f) + (root of g):
/// Res_Y(f(Y), g(X - Y)), degree deg(f)*deg(g). The result is the minimal
/// polynomial exactly when it is irreducible (the generic case); callers
/// check and perturb otherwise.
pub fn sum_root_resultant(f: &IntPoly, g: &IntPoly) -> IntPoly {
    assert!(f.is_monic() && g.is_monic());
    let n = f.degree();
    let m = g.degree();
    // g(X - Y) as a polynomial in Y with IntPoly (in X) coefficients:
    // coeff of Y^j = sum_{k>=j} g_k * C(k,j) * (-1)^j * X^{k-j}
    let mut gy: Vec<IntPoly> = vec![IntPoly::zero(); m + 1];
    for (k, gk) in g.coeffs().iter().enumerate() {
        if gk.is_zero() {
            continue;
        }
        let mut binom = BigInt::one();
        for j in 0..=k {
            // binom = C(k, j)
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let term = IntPoly::from_coeffs(
                std::iter::repeat(BigInt::zero())
                    .take(k - j)
                    .chain(std::iter::once(gk * &binom * sign))
                    .collect(),
            );
            gy[j] = gy[j].add(&term);
            binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
        }
    }
    // Sylvester matrix of f(Y) (constant-in-X coeffs) and g(X-Y) wrt Y
    let size = n + m;
    let mut syl: Vec<Vec<IntPoly>> = vec![vec![IntPoly::zero(); size]; size];
    for (row, item) in syl.iter_mut().enumerate().take(m) {
        // f coefficients, descending, shifted by `row`
        for k in 0..=n {
            item[row + k] = IntPoly::constant(f.coeff(n - k));
        }
    }
    for row in 0..n {
        for k in 0..=m {
            syl[m + row][row + k] = gy[m - k].clone();
        }
    }
    // Bareiss over Z[X]
    let mut prev = IntPoly::one();
    let mut sign = 1i32;
    for k in 0..size - 1 {
        if syl[k][k].is_zero() {
            let swap = (k + 1..size).find(|&i| !syl[i][k].is_zero());
            match swap {
                Some(s) => {
                    syl.swap(k, s);
                    sign = -sign;
                }
                None => return IntPoly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = syl[i][j].mul(&syl[k][k]).sub(&syl[i][k].mul(&syl[k][j]));
                syl[i][j] = num.div_exact(&prev);
            }
            syl[i][k] = IntPoly::zero();
        }
        prev = syl[k][k].clone();
    }
    let det = syl[size - 1][size - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

/// Extended-gcd constant: u with u*a ≡ r (mod h), r a nonzero integer,
/// when gcd(a, h) = 1 over Q. Integer-only (pseudo-division Bezout chain).
/// Returns None when a and h share a factor.
pub fn bezout_inverse_mod(a: &IntPoly, h: &IntPoly) -> Option<(IntPoly, BigInt)> {
    assert!(!h.is_zero() && h.degree() >= 1);
    if a.is_zero() {
        return None;
    }
    // track r_i = s_i * a mod h, with pseudo-division scalings
    let mut r0 = h.clone();
    let mut r1 = a.clone();
    let mut s0 = IntPoly::zero();
    let mut s1 = IntPoly::one();
    while !r1.is_zero() && r1.degree() >= 1 {
        if r0.degree() < r1.degree() {
            std::mem::swap(&mut r0, &mut r1);
            std::mem::swap(&mut s0, &mut s1);
            continue;
        }
        let e = r0.degree() - r1.degree() + 1;
        let scale = num_traits::pow::pow(r1.lc().clone(), e);
        // compute q, r with scale*r0 = q*r1 + r
        let mut rem = r0.mul_scalar(&scale);
        let mut q = IntPoly::zero();
        while !rem.is_zero() && rem.degree() >= r1.degree() {
            let k = rem.degree() - r1.degree();
            let (c, _) = rem.lc().div_rem(r1.lc());
            let mono = IntPoly::from_coeffs(
                std::iter::repeat(BigInt::zero())
                    .take(k)
                    .chain(std::iter::once(c))
                    .collect(),
            );
            rem = rem.sub(&mono.mul(&r1));
            q = q.add(&mono);
        }
        let new_s = s0.mul_scalar(&scale).sub(&q.mul(&s1));
        r0 = r1;
        s0 = s1;
        r1 = rem;
        s1 = new_s;
        // keep coefficient growth down
        let g = r1.content().gcd(&s1.content());
        if g > BigInt::one() {
            r1 = IntPoly::from_coeffs(r1.coeffs().iter().map(|c| c / &g).collect());
            s1 = IntPoly::from_coeffs(s1.coeffs().iter().map(|c| c / &g).collect());
        }
    }
    if r1.is_zero() {
        return None; // nontrivial common factor
    }
    // r1 is a nonzero constant: s1 * a ≡ r1 (mod h)
    Some((s1, r1.coeffs()[0].clone()))
}
