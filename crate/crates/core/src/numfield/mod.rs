//! Number fields K = Q[X]/(f): maximal orders (round 2), prime decomposition,
//! exact ideal arithmetic in Hermite normal form, and class groups by
//! factor-base relation search.

mod classgroup;
mod decomp;
pub mod embed;
mod fpalg;
mod ideal;
pub(crate) mod lll;

pub use classgroup::{class_group, find_generator, is_principal, ClassGroup, ClassGroupConfig};
pub use decomp::{decompose_prime, PrimeIdealFactor};
pub use ideal::{ideal_mul, FracIdeal};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::linalg::Mat;
use crate::poly::{self, IntPoly, ModPPoly};

#[derive(Debug, Clone)]
pub enum NumFieldError {
    InvalidDefiningPolynomial(String),
    FieldMismatch,
    /// Relation search ran out of budget; partial, uncertified data attached.
    RelationSearchIncomplete(Box<ClassGroup>),
    /// Ideal not supported on the factor base.
    NotSmooth,
    Internal(String),
}

impl fmt::Display for NumFieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumFieldError::InvalidDefiningPolynomial(msg) => {
                write!(f, "invalid defining polynomial: {msg}")
            }
            NumFieldError::FieldMismatch => write!(f, "ideals belong to different fields"),
            NumFieldError::RelationSearchIncomplete(_) => {
                write!(f, "class group relation search incomplete at configured effort")
            }
            NumFieldError::NotSmooth => write!(f, "ideal is not factor-base smooth"),
            NumFieldError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for NumFieldError {}

/// A number field with its maximal order.
///
/// The integral basis is a lower-triangular matrix over a common denominator;
/// row i gives the power-basis coordinates of the basis element ω_i (so
/// ω_0 = 1 always). Elements of O_K are integer coordinate vectors against
/// this basis throughout the crate.
#[derive(Clone)]
pub struct NumberField {
    defining_poly: IntPoly,
    n: usize,
    basis_mat: Mat,
    basis_den: BigInt,
    /// flattened n^3 table: coords of ω_i ω_j at [(i*n + j)*n + k]
    mult_table: Vec<BigInt>,
    pub poly_disc: BigInt,
    pub field_disc: BigInt,
    pub index: BigInt,
    pub signature: (usize, usize),
    /// complex roots of f (f64), heuristic use only
    pub(crate) roots: Vec<(f64, f64)>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "NumberField(f = {}, disc = {}, sig = ({}, {}))",
            self.defining_poly, self.field_disc, self.signature.0, self.signature.1
        )
    }
}

impl NumberField {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn defining_poly(&self) -> &IntPoly {
        &self.defining_poly
    }

    pub fn basis_mat(&self) -> &Mat {
        &self.basis_mat
    }

    pub fn basis_den(&self) -> &BigInt {
        &self.basis_den
    }

    /// Same field structurally (same defining polynomial).
    pub fn same_field(&self, other: &NumberField) -> bool {
        self.defining_poly == other.defining_poly
    }

    pub fn one(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n];
        v[0] = BigInt::one();
        v
    }

    pub(crate) fn mult_table_entry(&self, idx: usize) -> &BigInt {
        &self.mult_table[idx]
    }

    pub fn from_int(&self, a: &BigInt) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n];
        v[0] = a.clone();
        v
    }

    /// Coordinates of θ (root of the defining polynomial).
    pub fn theta(&self) -> Vec<BigInt> {
        let x = IntPoly::x();
        self.elem_from_poly(&x, &BigInt::one())
            .expect("theta is an algebraic integer for monic f")
    }

    pub fn elem_mul(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let prod = &x[i] * &y[j];
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.mult_table[base + k];
                    if !c.is_zero() {
                        *o += &prod * c;
                    }
                }
            }
        }
        out
    }

    pub fn elem_add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        x.iter().zip(y).map(|(a, b)| a + b).collect()
    }

    /// Power-basis numerator and denominator of an O_K element.
    pub fn elem_to_poly(&self, x: &[BigInt]) -> (IntPoly, BigInt) {
        let v = self.basis_mat.mul_vec(x);
        (IntPoly::from_coeffs(v), self.basis_den.clone())
    }

    /// Coordinates of a K-element given in the power basis (num/den);
    /// None when the element is not in O_K.
    pub fn elem_from_poly(&self, num: &IntPoly, den: &BigInt) -> Option<Vec<BigInt>> {
        assert!(num.is_zero() || num.degree() < self.n, "reduce mod f first");
        let mut target: Vec<BigInt> =
            (0..self.n).map(|i| num.coeff(i) * &self.basis_den).collect();
        let scaled = self.basis_mat.scalar_mul(den);
        let sol = scaled.solve_left_lower(&target)?;
        // double-check (solve_left_lower asserts divisibility along the way)
        target.truncate(self.n);
        Some(sol)
    }

    /// Reduce an arbitrary-degree integer polynomial at θ into O_K coords
    /// (None when not integral).
    pub fn elem_from_poly_any_degree(&self, g: &IntPoly, den: &BigInt) -> Option<Vec<BigInt>> {
        let r = poly_mod_monic(g, &self.defining_poly);
        self.elem_from_poly(&r, den)
    }

    /// Field norm of an O_K element.
    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        let (num, den) = self.elem_to_poly(x);
        if num.is_zero() {
            return BigInt::zero();
        }
        if self.n == 1 {
            return num.coeff(0) / den;
        }
        if self.n == 2 {
            // N(a + bθ) = a^2 - u a b + v b^2 for f = X^2 + u X + v
            let a = num.coeff(0);
            let b = num.coeff(1);
            let u = self.defining_poly.coeff(1);
            let v = self.defining_poly.coeff(0);
            let n = &a * &a - &u * &a * &b + &v * &b * &b;
            let (q, r) = n.div_rem(&(&den * &den));
            debug_assert!(r.is_zero(), "norm not integral");
            return q;
        }
        let res = self.defining_poly.resultant(&num);
        let scale = num_traits::pow::pow(den, self.n);
        let (q, r) = res.div_rem(&scale);
        debug_assert!(r.is_zero(), "norm not integral");
        q
    }

    /// Multiplication-by-x matrix on the integral basis (row i = ω_i x).
    pub fn mult_matrix(&self, x: &[BigInt]) -> Mat {
        let n = self.n;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            rows.push(self.elem_mul(&e, x));
        }
        Mat::from_rows(rows)
    }
}

/// Remainder of g modulo a monic polynomial.
fn poly_mod_monic(g: &IntPoly, f: &IntPoly) -> IntPoly {
    assert!(f.is_monic());
    let mut r = g.clone();
    while !r.is_zero() && r.degree() >= f.degree() {
        let k = r.degree() - f.degree();
        let c = r.lc().clone();
        r = r.sub(&f.shift(k).mul_scalar(&c));
    }
    r
}

/// An order in K, as a lattice in the power basis.
#[derive(Clone, Debug)]
struct OrderLattice {
    mat: Mat,
    den: BigInt,
}

impl OrderLattice {
    fn equation_order(n: usize) -> Self {
        OrderLattice { mat: Mat::identity(n), den: BigInt::one() }
    }

    fn normalize(mut self) -> Self {
        self.mat = self.mat.hnf();
        let mut g = self.mat.content().gcd(&self.den);
        if g.is_zero() {
            g = BigInt::one();
        }
        if g > BigInt::one() {
            self.mat = self.mat.div_exact(&g);
            self.den = &self.den / &g;
        }
        self
    }

    /// Multiplication table: coords of b_i b_j in this order's basis.
    /// None if the lattice is not multiplicatively closed.
    fn mult_table(&self, f: &IntPoly) -> Option<Vec<BigInt>> {
        let n = self.mat.rows;
        let scaled = self.mat.scalar_mul(&self.den);
        let mut table = vec![BigInt::zero(); n * n * n];
        for i in 0..n {
            let pi = IntPoly::from_coeffs(self.mat.row(i).to_vec());
            for j in 0..=i {
                let pj = IntPoly::from_coeffs(self.mat.row(j).to_vec());
                let prod = poly_mod_monic(&pi.mul(&pj), f);
                // prod/den^2 = x * (mat/den)  =>  x * (mat*den) = prod coeffs
                let target: Vec<BigInt> = (0..n).map(|k| prod.coeff(k)).collect();
                let x = scaled.solve_left_lower(&target)?;
                for k in 0..n {
                    table[(i * n + j) * n + k] = x[k].clone();
                    table[(j * n + i) * n + k] = x[k].clone();
                }
            }
        }
        Some(table)
    }

    fn covolume_num_den(&self) -> (BigInt, BigInt) {
        (self.mat.det().abs(), num_traits::pow::pow(self.den.clone(), self.mat.rows))
    }
}

/// Element powering in the mod-p structure-constant algebra.
fn pow_mod_p(table: &[u64], n: usize, p: u64, x: &[u64], e: u64) -> Vec<u64> {
    let mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                let prod = (a[i] as u128 * b[j] as u128 % p as u128) as u64;
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    *o = ((*o as u128 + prod as u128 * table[base + k] as u128) % p as u128)
                        as u64;
                }
            }
        }
        out
    };
    let mut acc = vec![0u64; n];
    acc[0] = 1 % p;
    let mut base = x.to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Dedekind p-maximality test for the equation order Z[θ].
fn dedekind_p_maximal(f: &IntPoly, p: u64) -> bool {
    let factors = ModPPoly::from_intpoly(f, p).factor();
    let mut g_star = ModPPoly::constant(p, 1);
    let mut h_star = ModPPoly::constant(p, 1);
    for (g, e) in &factors {
        g_star = g_star.mul(g);
        for _ in 1..*e {
            h_star = h_star.mul(g);
        }
    }
    let g_lift = g_star.to_intpoly();
    let h_lift = h_star.to_intpoly();
    let prod = g_lift.mul(&h_lift);
    let diff = prod.sub(f);
    let fp = IntPoly::from_coeffs(
        diff.coeffs().iter().map(|c| c / BigInt::from(p)).collect(),
    );
    debug_assert!(
        diff.coeffs().iter().all(|c| (c % BigInt::from(p)).is_zero()),
        "g*h* ≡ f (mod p) must hold"
    );
    let fbar = ModPPoly::from_intpoly(&fp, p);
    let u = fbar.gcd(&g_star.gcd(&h_star));
    u.is_zero() || u.degree() == 0
}

/// One round-2 enlargement step at p. Returns the enlarged order and the
/// index gain [O' : O] (1 when already p-maximal).
fn enlarge_at_p(order: &OrderLattice, f: &IntPoly, p: u64) -> (OrderLattice, BigInt) {
    let n = f.degree();
    let table = order.mult_table(f).expect("order must be multiplicatively closed");
    let table_p: Vec<u64> = table
        .iter()
        .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap())
        .collect();
    // radical of O/pO: kernel of iterated Frobenius
    let mut frob_rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0u64; n];
        e[i] = 1;
        frob_rows.push(pow_mod_p(&table_p, n, p, &e, p));
    }
    let frob = fpalg::FpMat::from_rows(p, frob_rows);
    let mut total = frob.clone();
    let mut pk = p as u128;
    while pk < n as u128 {
        total = total.mul(&frob);
        pk *= p as u128;
    }
    let kernel = total.left_kernel();
    // radical lattice in order coords: kernel rows lifted + p * Z^n
    let mut rows: Vec<Vec<BigInt>> = (0..kernel.rows)
        .map(|i| kernel.row(i).iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    for i in 0..n {
        let mut r = vec![BigInt::zero(); n];
        r[i] = BigInt::from(p);
        rows.push(r);
    }
    let radical = Mat::from_rows(rows).hnf();
    let det_u = radical.det().abs();
    // adj(U) = det(U) * U^{-1}, rows solved exactly
    let mut adj_rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut target = vec![BigInt::zero(); n];
        target[i] = det_u.clone();
        adj_rows.push(
            radical
                .solve_left_lower(&target)
                .expect("det * U^{-1} is integral"),
        );
    }
    let adj = Mat::from_rows(adj_rows);
    // multiplier ring: w in Z^n with w * M_{r_j} * adj ≡ 0 mod p*det for all j,
    // where M_{r_j} is multiplication by the j-th radical basis element
    let q = BigInt::from(p) * &det_u;
    let mut stacked_cols: Vec<Vec<BigInt>> = vec![Vec::new(); n];
    for j in 0..n {
        let r_j: Vec<BigInt> = radical.row(j).to_vec();
        // multiplication matrix of r_j on the order, in order coords
        let mut m_rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::one();
            m_rows.push(mul_in_table(&table, n, &e, &r_j));
        }
        let m = Mat::from_rows(m_rows).mul(&adj);
        for i in 0..n {
            stacked_cols[i].extend(m.row(i).iter().cloned());
        }
    }
    let stacked = Mat::from_rows(stacked_cols);
    let w = stacked.kernel_mod(&q);
    // new order: rows w/p in order coords
    let new_mat = w.mul(&order.mat);
    let new_order = OrderLattice { mat: new_mat, den: &order.den * BigInt::from(p) }.normalize();
    let (c0, d0) = order.covolume_num_den();
    let (c1, d1) = new_order.covolume_num_den();
    // gain = covol(O)/covol(O') = (c0/d0)/(c1/d1)
    let num = &c0 * &d1;
    let den = &c1 * &d0;
    let (gain, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "index gain must be integral");
    (new_order, gain)
}

fn mul_in_table(table: &[BigInt], n: usize, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            let prod = &x[i] * &y[j];
            let base = (i * n + j) * n;
            for (k, o) in out.iter_mut().enumerate() {
                if !table[base + k].is_zero() {
                    *o += &prod * &table[base + k];
                }
            }
        }
    }
    out
}

/// Build a number field: validate the polynomial, compute the maximal order
/// by Dedekind tests plus iterated round-2 enlargement, the exact field
/// discriminant, and the signature by Sturm real-root count.
pub fn build_field(f: &IntPoly) -> Result<NumberField, NumFieldError> {
    if f.is_zero() || f.degree() < 1 {
        return Err(NumFieldError::InvalidDefiningPolynomial(
            "degree must be at least 1".to_string(),
        ));
    }
    if !f.is_monic() {
        return Err(NumFieldError::InvalidDefiningPolynomial("must be monic".to_string()));
    }
    if f.degree() > 10 {
        return Err(NumFieldError::InvalidDefiningPolynomial(
            "degrees above 10 are out of contract".to_string(),
        ));
    }
    let n = f.degree();
    if n > 1 {
        match poly::is_irreducible_over_q(f) {
            Ok(true) => {}
            Ok(false) => {
                return Err(NumFieldError::InvalidDefiningPolynomial(
                    "must be irreducible over Q".to_string(),
                ))
            }
            Err(e) => return Err(NumFieldError::InvalidDefiningPolynomial(e.to_string())),
        }
    }
    let poly_disc = if n == 1 { BigInt::one() } else { f.discriminant().unwrap() };
    let mut order = OrderLattice::equation_order(n);
    let mut index = BigInt::one();
    if n > 1 {
        for (p, e) in arith::factor_bigint(&poly_disc) {
            if e < 2 {
                continue;
            }
            let p64 = p.to_u64().unwrap_or_else(|| {
                panic!("discriminant prime too large for round-2: {p}")
            });
            if order.den.is_one() && dedekind_p_maximal(f, p64) {
                continue;
            }
            loop {
                let (next, gain) = enlarge_at_p(&order, f, p64);
                if gain.is_one() {
                    break;
                }
                index *= &gain;
                order = next;
            }
        }
    }
    let field_disc = {
        let idx2 = &index * &index;
        let (q, r) = poly_disc.div_rem(&idx2);
        assert!(r.is_zero(), "index^2 must divide disc(f)");
        q
    };
    let r1 = if n == 1 { 1 } else { f.count_real_roots() };
    let r2 = (n - r1) / 2;
    assert_eq!(r1 + 2 * r2, n);
    // sign(disc) = (-1)^{r2}
    assert_eq!(
        field_disc.is_negative(),
        r2 % 2 == 1,
        "discriminant sign must match signature"
    );
    let table = order
        .mult_table(f)
        .ok_or_else(|| NumFieldError::Internal("maximal order not closed".to_string()))?;
    let roots = lll::complex_roots(f);
    Ok(NumberField {
        defining_poly: f.clone(),
        n,
        basis_mat: order.mat,
        basis_den: order.den,
        mult_table: table,
        poly_disc,
        field_disc,
        index,
        signature: (r1, r2),
        roots,
    })
}


/// Minkowski bound used by the class-group factor base, exposed for
/// completeness arguments elsewhere.
pub fn minkowski_bound_of(k: &NumberField) -> num_bigint::BigInt {
    classgroup::minkowski_bound_public(k)
}
