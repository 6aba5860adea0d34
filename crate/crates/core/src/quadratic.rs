//! Quadratic fields via binary quadratic forms: class groups for both
//! signatures, fundamental units by continued fractions, and Hilbert's
//! formula for the Pólya group order.
//!
//! This engine is deliberately independent of the general number-field
//! machinery in [`crate::numfield`]; the two are cross-checked against each
//! other in the test suites. Hilbert's statement concerns the ordinary class
//! group, so for d > 0 the narrow form-class group is folded down to the wide
//! one using the fundamental-unit norm.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadError {
    NotSquarefree(i64),
    BadRadicand(i64),
    InternalInconsistency(String),
}

impl fmt::Display for QuadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::NotSquarefree(d) => write!(f, "{d} is not squarefree"),
            QuadError::BadRadicand(d) => write!(f, "invalid quadratic radicand {d}"),
            QuadError::InternalInconsistency(msg) => {
                write!(f, "internal inconsistency: {msg}")
            }
        }
    }
}

impl std::error::Error for QuadError {}

/// Binary quadratic form a x^2 + b x y + c y^2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    fn inverse(&self) -> Form {
        Form { a: self.a, b: -self.b, c: self.c }
    }
}

fn isqrt_i64(n: i64) -> i64 {
    assert!(n >= 0);
    let mut r = (n as f64).sqrt() as i64;
    r = r.max(0);
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// Context for form arithmetic at a fixed discriminant.
#[derive(Clone, Debug)]
struct FormSpace {
    disc: i64,
    sq: i64, // isqrt(disc) for disc > 0, unused otherwise
}

impl FormSpace {
    fn new(disc: i64) -> Self {
        let sq = if disc > 0 { isqrt_i64(disc) } else { 0 };
        FormSpace { disc, sq }
    }

    fn principal(&self) -> Form {
        let b = if self.disc.rem_euclid(2) == 0 { 0 } else { 1 };
        let c = (b * b - self.disc) / 4;
        self.reduce(Form { a: 1, b, c })
    }

    /// Form with a = -1; principal-equivalent iff a norm -1 unit exists.
    fn minus_one_form(&self) -> Form {
        assert!(self.disc > 0);
        let b = if self.disc % 2 == 0 { 0 } else { 1 };
        let c = (b * b - self.disc) / (-4);
        Form { a: -1, b, c }
    }

    fn is_reduced(&self, f: Form) -> bool {
        if self.disc < 0 {
            let Form { a, b, c } = f;
            a > 0
                && (b.abs() < a || (b >= 0 && b.abs() == a))
                && (a < c || (a == c && b >= 0))
        } else {
            // 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b
            let Form { a, b, .. } = f;
            if b <= 0 || b > self.sq {
                return false;
            }
            let ta = 2 * a.abs();
            // sqrt(D) < 2|a| + b  <=>  D < (2|a|+b)^2
            let upper_ok = self.disc < (ta + b) * (ta + b);
            // 2|a| - b < sqrt(D)  <=>  2|a|-b <= 0 or (2|a|-b)^2 < D
            let lower_ok = ta - b <= 0 || (ta - b) * (ta - b) < self.disc;
            upper_ok && lower_ok
        }
    }

    /// Normalized b in the canonical window for modulus 2|a|.
    fn normalize_b(&self, b: i64, a_abs: i64) -> i64 {
        let m = 2 * a_abs;
        if self.disc < 0 || a_abs > self.sq {
            // into (-|a|, |a|]
            let mut r = b.rem_euclid(m);
            if r > a_abs {
                r -= m;
            }
            r
        } else {
            // into (sq - 2|a|, sq]
            let mut r = b.rem_euclid(m);
            while r > self.sq {
                r -= m;
            }
            while r + m <= self.sq {
                r += m;
            }
            r
        }
    }

    fn c_from(&self, a: i64, b: i64) -> i64 {
        let num = (b as i128) * (b as i128) - self.disc as i128;
        let den = 4 * a as i128;
        debug_assert_eq!(num % den, 0);
        i64::try_from(num / den).unwrap()
    }

    fn normalize(&self, f: Form) -> Form {
        let b = self.normalize_b(f.b, f.a.abs());
        let c = self.c_from(f.a, b);
        Form { a: f.a, b, c }
    }

    fn rho(&self, f: Form) -> Form {
        let a = f.c;
        let b = self.normalize_b(-f.b, a.abs());
        let c = self.c_from(a, b);
        Form { a, b, c }
    }

    fn reduce(&self, f: Form) -> Form {
        debug_assert_eq!(f.disc(), self.disc);
        if self.disc < 0 {
            let mut g = f;
            assert!(g.a > 0, "positive definite forms only");
            loop {
                if g.a > g.c {
                    g = Form { a: g.c, b: -g.b, c: g.a };
                    continue;
                }
                if g.b.abs() > g.a {
                    g = self.normalize(g);
                    continue;
                }
                if (g.b.abs() == g.a || g.a == g.c) && g.b < 0 {
                    g = Form { a: g.a, b: -g.b, c: g.c };
                }
                return g;
            }
        } else {
            let mut g = self.normalize(f);
            let mut steps = 0;
            while !self.is_reduced(g) {
                g = self.rho(g);
                steps += 1;
                assert!(steps < 100_000, "indefinite reduction did not terminate");
            }
            g
        }
    }

    /// Full rho-cycle of a reduced form (disc > 0).
    fn cycle(&self, f: Form) -> Vec<Form> {
        debug_assert!(self.is_reduced(f));
        let mut out = vec![f];
        let mut g = self.rho(f);
        while g != f {
            out.push(g);
            g = self.rho(g);
            assert!(out.len() < 1_000_000);
        }
        out
    }

    /// Canonical class representative.
    fn canonical(&self, f: Form) -> Form {
        let r = self.reduce(f);
        if self.disc < 0 {
            r
        } else {
            *self.cycle(r).iter().min().unwrap()
        }
    }

    /// Equivalent form with leading coefficient f(x0, y0), gcd(x0, y0) = 1.
    fn transform_to_value(&self, f: Form, x0: i64, y0: i64) -> Form {
        let (g, u0, v0) = xgcd(x0, y0);
        assert_eq!(g.abs(), 1);
        // want det [[x0, u], [y0, v]] = x0 v - y0 u = 1
        let (u, v) = (-v0 * g.signum(), u0 * g.signum());
        let (a, b, c) = (f.a as i128, f.b as i128, f.c as i128);
        let (x0, y0, u, v) = (x0 as i128, y0 as i128, u as i128, v as i128);
        let a2 = a * x0 * x0 + b * x0 * y0 + c * y0 * y0;
        let b2 = 2 * a * x0 * u + b * (x0 * v + y0 * u) + 2 * c * y0 * v;
        let c2 = a * u * u + b * u * v + c * v * v;
        let out = Form {
            a: i64::try_from(a2).unwrap(),
            b: i64::try_from(b2).unwrap(),
            c: i64::try_from(c2).unwrap(),
        };
        debug_assert_eq!(out.disc(), self.disc);
        out
    }

    /// Equivalent form whose leading coefficient is nonzero and coprime to m.
    fn coprime_rep(&self, f: Form, m: i64) -> Form {
        let m = m.abs().max(1);
        for r in 0..200i64 {
            for (x, y) in pairs_of_height(r) {
                if gcd_i64(x, y) != 1 {
                    continue;
                }
                let val = f.a as i128 * (x as i128 * x as i128)
                    + f.b as i128 * (x as i128 * y as i128)
                    + f.c as i128 * (y as i128 * y as i128);
                if val != 0 && gcd_i64((val.rem_euclid(m as i128)) as i64, m) == 1 {
                    return self.transform_to_value(f, x, y);
                }
            }
        }
        panic!("no representation coprime to {m} found for {f:?}");
    }

    /// Dirichlet composition via concordant representatives, canonicalized.
    fn compose(&self, f1: Form, f2: Form) -> Form {
        let f2 = if f1.a != 0 && gcd_i64(f1.a, f2.a) == 1 && f2.a != 0 {
            f2
        } else {
            self.coprime_rep(f2, f1.a)
        };
        debug_assert_eq!(gcd_i64(f1.a, f2.a), 1);
        let (a1, b1) = (f1.a, f1.b);
        let (a2, b2) = (f2.a, f2.b);
        // common b: b ≡ b1 (mod 2 a1), b ≡ b2 (mod 2 a2); b1 ≡ b2 (mod 2)
        debug_assert_eq!((b1 - b2).rem_euclid(2), 0);
        let diff = (b2 - b1) / 2;
        // t ≡ diff * a1^{-1} (mod a2)
        let (g, inv, _) = xgcd(a1, a2);
        debug_assert_eq!(g.abs(), 1);
        let t = mod_mul(diff, inv * g.signum(), a2);
        let a3 = a1 as i128 * a2 as i128;
        let b = b1 as i128 + 2 * a1 as i128 * t as i128;
        // reduce b mod 2|a3| to keep sizes small
        let m3 = 2 * a3.abs();
        let mut br = b.rem_euclid(m3);
        if br > a3.abs() {
            br -= m3;
        }
        let a3 = i64::try_from(a3).unwrap();
        let br = i64::try_from(br).unwrap();
        let c3 = self.c_from(a3, br);
        self.canonical(Form { a: a3, b: br, c: c3 })
    }
}

fn pairs_of_height(r: i64) -> Vec<(i64, i64)> {
    if r == 0 {
        return vec![(1, 0), (0, 1)];
    }
    let mut out = Vec::new();
    for x in -r..=r {
        for y in [-r, r] {
            out.push((x, y));
        }
    }
    for y in -r + 1..r {
        for x in [-r, r] {
            out.push((x, y));
        }
    }
    out
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return (a, 1, 0);
    }
    let (g, x, y) = xgcd(b, a % b);
    (g, y, x - (a / b) * y)
}

fn mod_mul(a: i64, b: i64, m: i64) -> i64 {
    let m = m.abs().max(1) as i128;
    let r = ((a as i128 % m) * (b as i128 % m)).rem_euclid(m);
    r as i64
}

/// Fundamental unit (x + y sqrt d)/denom of the real quadratic field Q(sqrt d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundUnit {
    pub x: BigInt,
    pub y: BigInt,
    pub denom: u8,
    pub norm: i8,
}

/// Quadratic field invariants.
#[derive(Clone, Debug)]
pub struct QuadField {
    pub d: i64,
    pub disc: i64,
    pub ramified_primes: Vec<u64>,
    pub s_count: usize,
    pub fundamental_unit: Option<FundUnit>,
    pub unit_norm: Option<i8>,
}

fn check_d(d: i64) -> Result<(), QuadError> {
    if d == 0 || d == 1 {
        return Err(QuadError::BadRadicand(d));
    }
    let fs = arith::factor_u64(d.unsigned_abs());
    if fs.iter().any(|&(_, e)| e > 1) {
        return Err(QuadError::NotSquarefree(d));
    }
    Ok(())
}

pub fn fundamental_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// Fundamental unit of Q(sqrt d), d > 1 squarefree, via the continued
/// fraction of omega = (s + sqrt D)/2, D the field discriminant, s = D mod 2.
/// Convergents h/k are scanned for the first unit; the corresponding
/// element h - k*conj(omega) is the fundamental unit.
pub fn fundamental_unit(d: i64) -> Result<FundUnit, QuadError> {
    check_d(d)?;
    if d < 0 {
        return Err(QuadError::BadRadicand(d));
    }
    let disc = BigInt::from(fundamental_discriminant(d));
    let s = if (&disc % BigInt::from(2)).is_zero() { BigInt::zero() } else { BigInt::one() };
    let sq = disc.sqrt();
    let mut p = s.clone();
    let mut q = BigInt::from(2);
    let mut h_prev = BigInt::one();
    let mut k_prev = BigInt::zero();
    let mut a = (&p + &sq).div_floor(&q);
    let mut h_cur = a.clone();
    let mut k_cur = BigInt::one();
    let four = BigInt::from(4);
    for _ in 0..2_000_000u64 {
        // 4*N(h - k conj(omega)) = (2h - sk)^2 - D k^2
        let t = BigInt::from(2) * &h_cur - &s * &k_cur;
        let n4 = &t * &t - &disc * &k_cur * &k_cur;
        if n4.clone().abs() == four {
            let norm = if n4.is_negative() { -1i8 } else { 1 };
            let (x, y) = (t, k_cur.clone());
            // unit = (x + y sqrt D)/2, rewrite over sqrt(d)
            let (x, y, denom) = if disc == BigInt::from(4) * BigInt::from(d) {
                debug_assert!((&x % BigInt::from(2)).is_zero());
                (x / BigInt::from(2), y, 1u8)
            } else if (&x % BigInt::from(2)).is_zero() && (&y % BigInt::from(2)).is_zero() {
                (x / BigInt::from(2), y / BigInt::from(2), 1u8)
            } else {
                (x, y, 2u8)
            };
            return Ok(FundUnit { x, y, denom, norm });
        }
        p = &a * &q - &p;
        q = (&disc - &p * &p) / &q;
        a = (&p + &sq).div_floor(&q);
        let h_next = &a * &h_cur + &h_prev;
        let k_next = &a * &k_cur + &k_prev;
        h_prev = std::mem::replace(&mut h_cur, h_next);
        k_prev = std::mem::replace(&mut k_cur, k_next);
    }
    Err(QuadError::InternalInconsistency(format!(
        "continued fraction for d = {d} did not close"
    )))
}

pub fn quad_field(d: i64) -> Result<QuadField, QuadError> {
    check_d(d)?;
    let disc = fundamental_discriminant(d);
    let mut ram: Vec<u64> =
        arith::factor_u64(disc.unsigned_abs()).into_iter().map(|(p, _)| p).collect();
    ram.sort_unstable();
    let (fu, norm) = if d > 1 {
        let u = fundamental_unit(d)?;
        let n = u.norm;
        (Some(u), Some(n))
    } else {
        (None, None)
    };
    Ok(QuadField {
        d,
        disc,
        s_count: ram.len(),
        ramified_primes: ram,
        fundamental_unit: fu,
        unit_norm: norm,
    })
}

/// Enumerate all reduced forms of a negative fundamental discriminant.
fn reduced_forms_neg(disc: i64) -> Vec<Form> {
    assert!(disc < 0);
    let mut out = Vec::new();
    let b0 = disc.rem_euclid(2);
    let mut b = b0;
    while b * b <= -disc / 3 {
        let m = (b * b - disc) / 4;
        let mut a = b.max(1);
        while a * a <= m {
            if m % a == 0 {
                let c = m / a;
                out.push(Form { a, b, c });
                if b > 0 && a != b && a != c {
                    out.push(Form { a, b: -b, c });
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    out
}

/// Enumerate all reduced forms of a positive non-square discriminant.
fn reduced_forms_pos(disc: i64) -> Vec<Form> {
    assert!(disc > 0);
    let sq = isqrt_i64(disc);
    let mut out = Vec::new();
    for b in 1..=sq {
        if (disc - b * b) % 4 != 0 {
            continue;
        }
        let m = (disc - b * b) / 4; // |a| * |c| with a c < 0
        if m == 0 {
            continue;
        }
        let mut aa = 1;
        while aa * aa <= m {
            if m % aa == 0 {
                let divs = if aa * aa == m { vec![aa] } else { vec![aa, m / aa] };
                for a_abs in divs {
                    let ta = 2 * a_abs;
                    let upper_ok = disc < (ta + b) * (ta + b);
                    let lower_ok = ta - b <= 0 || (ta - b) * (ta - b) < disc;
                    if upper_ok && lower_ok {
                        let c = -(m / a_abs);
                        out.push(Form { a: a_abs, b, c });
                        out.push(Form { a: -a_abs, b, c: -c });
                    }
                }
            }
            aa += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Invariant factors d_1 | d_2 | ... of a finite abelian group given as an
/// element set with composition, peeling maximal-order cyclic summands.
fn invariant_factors_of_set(
    elems: &BTreeSet<Form>,
    id: Form,
    mul: &dyn Fn(Form, Form) -> Form,
) -> Vec<u64> {
    if elems.len() <= 1 {
        return vec![];
    }
    let order = |f: Form| -> u64 {
        let mut cur = f;
        let mut k = 1u64;
        while cur != id {
            cur = mul(cur, f);
            k += 1;
        }
        k
    };
    let (gmax, omax) = elems
        .iter()
        .map(|f| (*f, order(*f)))
        .max_by_key(|&(f, o)| (o, std::cmp::Reverse(f)))
        .unwrap();
    let mut cyc = BTreeSet::new();
    let mut cur = id;
    loop {
        cyc.insert(cur);
        cur = mul(cur, gmax);
        if cur == id {
            break;
        }
    }
    debug_assert_eq!(cyc.len() as u64, omax);
    let coset_rep = |f: Form| -> Form { cyc.iter().map(|z| mul(f, *z)).min().unwrap() };
    let mut qelems = BTreeSet::new();
    for &f in elems {
        qelems.insert(coset_rep(f));
    }
    let qid = coset_rep(id);
    let qmul = |x: Form, y: Form| -> Form { coset_rep(mul(x, y)) };
    let mut out = invariant_factors_of_set(&qelems, qid, &qmul);
    out.push(omax);
    out
}

/// Wide (ordinary) form class group at the fundamental discriminant of d.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub d: i64,
    pub disc: i64,
    /// All reduced forms of the discriminant.
    pub reduced_forms: Vec<Form>,
    pub narrow_h: u64,
    pub h: u64,
    /// Invariant factor chain of the wide group (empty for h = 1).
    pub invariant_factors: Vec<u64>,
    space: FormSpace,
    /// Canonical narrow representative of the (-1,...) class when nontrivial.
    minus_one: Option<Form>,
    wide_reps: Vec<Form>,
}

impl FormClassGroup {
    /// Canonical representative of the wide class of f.
    pub fn wide_class(&self, f: Form) -> Form {
        let c1 = self.space.canonical(f);
        match self.minus_one {
            None => c1,
            Some(j) => c1.min(self.space.compose(c1, j)),
        }
    }

    pub fn compose_wide(&self, f: Form, g: Form) -> Form {
        self.wide_class(self.space.compose(f, g))
    }

    pub fn identity(&self) -> Form {
        self.wide_class(self.space.principal())
    }

    pub fn inverse_wide(&self, f: Form) -> Form {
        self.wide_class(f.inverse())
    }

    pub fn wide_representatives(&self) -> &[Form] {
        &self.wide_reps
    }

    pub fn order_of(&self, f: Form) -> u64 {
        let id = self.identity();
        let f = self.wide_class(f);
        let mut cur = f;
        let mut k = 1u64;
        while cur != id {
            cur = self.compose_wide(cur, f);
            k += 1;
            assert!(k <= self.h + 1, "order exceeded group size");
        }
        k
    }

    /// Subgroup (element set) generated by the given forms, as wide classes.
    pub fn subgroup(&self, gens: &[Form]) -> BTreeSet<Form> {
        let mut set = BTreeSet::new();
        set.insert(self.identity());
        let mut frontier: Vec<Form> = vec![self.identity()];
        while let Some(f) = frontier.pop() {
            for g in gens {
                let prod = self.compose_wide(f, self.wide_class(*g));
                if set.insert(prod) {
                    frontier.push(prod);
                }
            }
        }
        set
    }

    /// Prime form above a ramified prime p | disc.
    pub fn ramified_prime_form(&self, p: u64) -> Form {
        let p = p as i64;
        assert_eq!(self.disc.rem_euclid(p), 0, "{p} is not ramified");
        let f = if self.disc % 2 != 0 {
            // disc ≡ 1 (mod 4) odd: b = p works
            Form { a: p, b: p, c: (p * p - self.disc) / (4 * p) }
        } else if p == 2 {
            let dd = self.d.rem_euclid(4);
            if dd == 2 {
                Form { a: 2, b: 0, c: -self.d / 2 }
            } else {
                // d ≡ 3 (mod 4)
                Form { a: 2, b: 2, c: (1 - self.d) / 2 }
            }
        } else {
            // disc = 4d, odd p | d
            Form { a: p, b: 0, c: -self.d / p }
        };
        debug_assert_eq!(f.disc(), self.disc);
        f
    }
}

pub fn quad_class_group(d: i64) -> Result<FormClassGroup, QuadError> {
    check_d(d)?;
    let disc = fundamental_discriminant(d);
    let space = FormSpace::new(disc);
    let (narrow_reps, reduced): (Vec<Form>, Vec<Form>) = if disc < 0 {
        let forms = reduced_forms_neg(disc);
        (forms.clone(), forms)
    } else {
        let forms = reduced_forms_pos(disc);
        let mut reps = BTreeSet::new();
        for &f in &forms {
            reps.insert(*space.cycle(f).iter().min().unwrap());
        }
        (reps.into_iter().collect(), forms)
    };
    let narrow_h = narrow_reps.len() as u64;
    let minus_one = if disc > 0 {
        let j = space.canonical(space.minus_one_form());
        if j == space.canonical(space.principal()) {
            None
        } else {
            Some(j)
        }
    } else {
        None
    };
    let mut cg = FormClassGroup {
        d,
        disc,
        reduced_forms: reduced,
        narrow_h,
        h: 0,
        invariant_factors: vec![],
        space,
        minus_one,
        wide_reps: vec![],
    };
    let mut wide = BTreeSet::new();
    for &f in &narrow_reps {
        wide.insert(cg.wide_class(f));
    }
    cg.wide_reps = wide.iter().copied().collect();
    cg.h = cg.wide_reps.len() as u64;
    let id = cg.identity();
    let set: BTreeSet<Form> = cg.wide_reps.iter().copied().collect();
    let mul = |x: Form, y: Form| cg.compose_wide(x, y);
    cg.invariant_factors = invariant_factors_of_set(&set, id, &mul);
    let prod: u64 = cg.invariant_factors.iter().product();
    if prod.max(1) != cg.h {
        return Err(QuadError::InternalInconsistency(format!(
            "invariant factors {:?} do not multiply to h = {}",
            cg.invariant_factors, cg.h
        )));
    }
    Ok(cg)
}

/// Pólya data for a quadratic field: Hilbert's formula value and the
/// explicitly generated ramified-class subgroup. The two must agree; a
/// mismatch is an internal error, never expected.
#[derive(Clone, Debug)]
pub struct QuadPolyaSummary {
    pub d: i64,
    pub disc: i64,
    pub s_count: usize,
    pub unit_norm: Option<i8>,
    pub formula_order: u64,
    pub explicit_order: u64,
    pub generators: Vec<(u64, Form)>,
    pub is_polya: bool,
    pub class_number: u64,
    pub invariant_factors: Vec<u64>,
}

pub fn quad_polya_group(d: i64) -> Result<QuadPolyaSummary, QuadError> {
    let field = quad_field(d)?;
    let cg = quad_class_group(d)?;
    let s = field.s_count as u32;
    let formula_order = if d > 0 && field.unit_norm == Some(1) {
        if s < 2 {
            return Err(QuadError::InternalInconsistency(format!(
                "d = {d}: one ramified prime forces a norm -1 unit"
            )));
        }
        1u64 << (s - 2)
    } else {
        1u64 << (s - 1)
    };
    let gens: Vec<(u64, Form)> = field
        .ramified_primes
        .iter()
        .map(|&p| (p, cg.ramified_prime_form(p)))
        .collect();
    let gen_forms: Vec<Form> = gens.iter().map(|&(_, f)| f).collect();
    let explicit_order = cg.subgroup(&gen_forms).len() as u64;
    if explicit_order != formula_order {
        return Err(QuadError::InternalInconsistency(format!(
            "d = {d}: explicit Polya order {explicit_order} != formula {formula_order}"
        )));
    }
    Ok(QuadPolyaSummary {
        d,
        disc: field.disc,
        s_count: field.s_count,
        unit_norm: field.unit_norm,
        formula_order,
        explicit_order,
        generators: gens,
        is_polya: explicit_order == 1,
        class_number: cg.h,
        invariant_factors: cg.invariant_factors.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_numbers_imaginary() {
        assert_eq!(quad_class_group(-1).unwrap().h, 1);
        assert_eq!(quad_class_group(-23).unwrap().h, 3);
        assert_eq!(quad_class_group(-47).unwrap().h, 5);
        assert_eq!(quad_class_group(-15).unwrap().h, 2);
        assert_eq!(quad_class_group(-5).unwrap().h, 2);
        assert_eq!(quad_class_group(-163).unwrap().h, 1);
        assert_eq!(quad_class_group(-23).unwrap().invariant_factors, vec![3]);
        assert_eq!(quad_class_group(-21).unwrap().invariant_factors, vec![2, 2]);
    }

    #[test]
    fn class_numbers_real() {
        assert_eq!(quad_class_group(2).unwrap().h, 1);
        assert_eq!(quad_class_group(3).unwrap().h, 1);
        assert_eq!(quad_class_group(10).unwrap().h, 2);
        assert_eq!(quad_class_group(79).unwrap().h, 3);
        assert_eq!(quad_class_group(229).unwrap().h, 3);
        // narrow vs wide: d = 3 has norm +1 unit, narrow h = 2, wide h = 1
        let cg = quad_class_group(3).unwrap();
        assert_eq!(cg.narrow_h, 2);
        assert_eq!(cg.h, 1);
    }

    #[test]
    fn rejects_bad_radicands() {
        assert!(matches!(quad_class_group(12), Err(QuadError::NotSquarefree(_))));
        assert!(matches!(quad_class_group(0), Err(QuadError::BadRadicand(_))));
        assert!(matches!(quad_class_group(1), Err(QuadError::BadRadicand(_))));
        assert!(matches!(quad_class_group(-4), Err(QuadError::NotSquarefree(_))));
    }

    #[test]
    fn fundamental_units_known() {
        let u = fundamental_unit(2).unwrap();
        assert_eq!((u.x, u.y, u.denom, u.norm), (BigInt::from(1), BigInt::from(1), 1, -1));
        let u = fundamental_unit(3).unwrap();
        assert_eq!((u.x, u.y, u.denom, u.norm), (BigInt::from(2), BigInt::from(1), 1, 1));
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.x, u.y, u.denom, u.norm), (BigInt::from(1), BigInt::from(1), 2, -1));
        let u = fundamental_unit(13).unwrap();
        assert_eq!((u.x, u.y, u.denom, u.norm), (BigInt::from(3), BigInt::from(1), 2, -1));
        // spec example: d = 34 -> 35 + 6 sqrt(34), norm +1
        let u = fundamental_unit(34).unwrap();
        assert_eq!((u.x, u.y, u.denom, u.norm), (BigInt::from(35), BigInt::from(6), 1, 1));
    }

    #[test]
    fn pell_equation_satisfied() {
        for d in [2i64, 3, 6, 7, 11, 19, 21, 33, 94, 151, 1234, 4729] {
            if check_d(d).is_err() {
                continue;
            }
            let u = fundamental_unit(d).unwrap();
            let lhs = &u.x * &u.x - BigInt::from(d) * &u.y * &u.y;
            let denom2 = BigInt::from((u.denom as i64) * (u.denom as i64));
            assert_eq!(lhs, BigInt::from(u.norm as i64) * denom2, "d = {d}");
            assert!(u.y > BigInt::zero());
        }
    }

    #[test]
    fn unit_minimality_bruteforce() {
        // spec oracle style: scan y upward for the first (x + y sqrt d)/2 unit
        for d in [2i64, 3, 5, 6, 7, 10, 13, 34, 94] {
            let u = fundamental_unit(d).unwrap();
            let (ux, uy) = if u.denom == 2 {
                (u.x.clone(), u.y.clone())
            } else {
                (BigInt::from(2) * &u.x, BigInt::from(2) * &u.y)
            };
            'outer: for y in 1..10_000i64 {
                // both norms can be solvable at the same y; the smaller x wins
                let mut best_x: Option<i64> = None;
                for target in [4i64, -4] {
                    let x2 = target + d * y * y;
                    if x2 < 0 {
                        continue;
                    }
                    let x = isqrt_i64(x2);
                    if x * x == x2 {
                        best_x = Some(best_x.map_or(x, |b| b.min(x)));
                    }
                }
                if let Some(x) = best_x {
                    assert_eq!((BigInt::from(x), BigInt::from(y)), (ux, uy), "d = {d}");
                    break 'outer;
                }
            }
        }
    }

    #[test]
    fn composition_group_laws() {
        for d in [-23i64, -47, -21, 79, 10, 229, -119] {
            let cg = quad_class_group(d).unwrap();
            let id = cg.identity();
            let elems = cg.wide_representatives().to_vec();
            for &f in &elems {
                assert_eq!(cg.compose_wide(f, id), f, "identity law, d={d}");
                assert_eq!(cg.compose_wide(f, cg.inverse_wide(f)), id, "inverse law, d={d}");
                for &g in &elems {
                    let fg = cg.compose_wide(f, g);
                    assert_eq!(fg, cg.compose_wide(g, f), "commutativity, d={d}");
                    assert!(elems.contains(&fg), "closure, d={d}");
                }
            }
        }
    }

    #[test]
    fn hilbert_formula_small_range() {
        for d in -120i64..=120 {
            if d == 0 || d == 1 || check_d(d).is_err() {
                continue;
            }
            let s = quad_polya_group(d).unwrap();
            assert_eq!(s.explicit_order, s.formula_order, "d = {d}");
        }
    }

    #[test]
    fn paper_quadratic_examples() {
        // Example 2.1: h(Q(sqrt -23)) = 3
        assert_eq!(quad_class_group(-23).unwrap().h, 3);
        // Po(Q(sqrt -15)) = C2
        let s = quad_polya_group(-15).unwrap();
        assert_eq!(s.explicit_order, 2);
        assert!(!s.is_polya);
        // E = Q(sqrt -1367) is Polya (s = 1)
        let s = quad_polya_group(-1367).unwrap();
        assert_eq!(s.explicit_order, 1);
        assert!(s.is_polya);
        // E = Q(sqrt -7) is Polya
        assert!(quad_polya_group(-7).unwrap().is_polya);
        // d = -23: Po trivial although h = 3
        let s = quad_polya_group(-23).unwrap();
        assert!(s.is_polya);
        assert_eq!(s.class_number, 3);
    }

    #[test]
    fn unit_norm_matches_minus_one_form_principality() {
        // N(eps) = -1 iff the (-1,...) form is principal-equivalent:
        // independent cross-check of the CF engine against form reduction
        for d in [2i64, 3, 5, 6, 7, 10, 13, 15, 19, 21, 26, 29, 34, 79, 82, 94] {
            let u = fundamental_unit(d).unwrap();
            let disc = fundamental_discriminant(d);
            let space = FormSpace::new(disc);
            let j = space.canonical(space.minus_one_form());
            let principal = space.canonical(space.principal());
            assert_eq!(u.norm == -1, j == principal, "d = {d}");
        }
    }

    #[test]
    fn polya_group_elementary_two() {
        for d in [-15i64, -105, 30, 105, -1155] {
            let cg = quad_class_group(d).unwrap();
            for &(_, f) in &quad_polya_group(d).unwrap().generators {
                let w = cg.wide_class(f);
                assert_eq!(cg.compose_wide(w, w), cg.identity(), "d = {d}, form {f:?}");
            }
        }
    }
}
