//! Compositum fields and subfield embeddings.
//!
//! A compositum Q(θ, ω) is presented by the minimal polynomial h of
//! η = θ + ω (computed as a resultant, with small shifts of ω when η fails
//! to be primitive). The roots θ and ω are recovered inside Q[X]/(h) by a
//! polynomial gcd over the quotient field, so embeddings come out exact and
//! are verified by evaluating the defining polynomials on the images.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{self, IntPoly};

use super::{NumFieldError, NumberField};

/// Element of Q[X]/(h): num/den with deg(num) < deg(h), gcd(content, den) = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QElem {
    pub num: IntPoly,
    pub den: BigInt,
}

impl QElem {
    pub fn from_int(v: i64) -> Self {
        QElem { num: IntPoly::from_i64(&[v]), den: BigInt::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// Arithmetic context for Q[X]/(h), h monic of positive degree.
#[derive(Clone, Debug)]
pub struct QuotientField {
    pub h: IntPoly,
}

impl QuotientField {
    pub fn new(h: IntPoly) -> Self {
        assert!(h.is_monic() && h.degree() >= 1);
        QuotientField { h }
    }

    pub fn reduce(&self, num: IntPoly, den: BigInt) -> QElem {
        assert!(!den.is_zero());
        let mut num = poly_mod_monic(&num, &self.h);
        let mut den = den;
        if den.is_negative() {
            den = -den;
            num = num.neg();
        }
        if num.is_zero() {
            return QElem { num, den: BigInt::one() };
        }
        let g = num.content().gcd(&den);
        if g > BigInt::one() {
            num = IntPoly::from_coeffs(num.coeffs().iter().map(|c| c / &g).collect());
            den /= &g;
        }
        QElem { num, den }
    }

    pub fn generator(&self) -> QElem {
        self.reduce(IntPoly::x(), BigInt::one())
    }

    pub fn add(&self, a: &QElem, b: &QElem) -> QElem {
        let num = a.num.mul_scalar(&b.den).add(&b.num.mul_scalar(&a.den));
        self.reduce(num, &a.den * &b.den)
    }

    pub fn sub(&self, a: &QElem, b: &QElem) -> QElem {
        let num = a.num.mul_scalar(&b.den).sub(&b.num.mul_scalar(&a.den));
        self.reduce(num, &a.den * &b.den)
    }

    pub fn mul(&self, a: &QElem, b: &QElem) -> QElem {
        self.reduce(a.num.mul(&b.num), &a.den * &b.den)
    }

    pub fn inv(&self, a: &QElem) -> Option<QElem> {
        if a.is_zero() {
            return None;
        }
        let (u, r) = poly::bezout_inverse_mod(&a.num, &self.h)?;
        // u * num ≡ r (mod h)  =>  (num/den)^{-1} = den * u / r
        Some(self.reduce(u.mul_scalar(&a.den), r))
    }

    pub fn div(&self, a: &QElem, b: &QElem) -> Option<QElem> {
        Some(self.mul(a, &self.inv(b)?))
    }

    /// Evaluate an integer polynomial at a quotient-field element.
    pub fn eval_intpoly(&self, f: &IntPoly, x: &QElem) -> QElem {
        let mut acc = QElem::from_int(0);
        for c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(
                &acc,
                &QElem { num: IntPoly::from_coeffs(vec![c.clone()]), den: BigInt::one() },
            );
        }
        acc
    }
}

fn poly_mod_monic(g: &IntPoly, f: &IntPoly) -> IntPoly {
    let mut r = g.clone();
    while !r.is_zero() && r.degree() >= f.degree() {
        let k = r.degree() - f.degree();
        let c = r.lc().clone();
        r = r.sub(&f.shift(k).mul_scalar(&c));
    }
    r
}

/// Q(θ, ω) for θ a root of f and ω a root of g, both monic irreducible.
#[derive(Clone, Debug)]
pub struct Compositum {
    /// minimal polynomial of the primitive element η
    pub h: IntPoly,
    /// θ inside Q[X]/(h)
    pub root_f: QElem,
    /// ω inside Q[X]/(h)
    pub root_g: QElem,
}

/// Build the compositum via η = θ + (ω + c), retrying small shifts c until η
/// is primitive: h irreducible of degree deg(f)·deg(g). Only linearly
/// disjoint pairs are supported; degenerate pairs exhaust the shifts and
/// error out.
pub fn compositum(f: &IntPoly, g: &IntPoly) -> Result<Compositum, NumFieldError> {
    assert!(f.is_monic() && g.is_monic());
    for c in [0i64, 1, -1, 2, -2, 3, -3, 4, -4] {
        // g_c has root ω + c
        let g_c = g.taylor_shift(&BigInt::from(-c));
        let h = poly::sum_root_resultant(f, &g_c);
        if h.is_zero() || h.degree() != f.degree() * g.degree() {
            continue;
        }
        if h.gcd(&h.derivative()).degree() != 0 {
            continue;
        }
        match poly::is_irreducible_over_q(&h) {
            Ok(true) => {}
            _ => continue,
        }
        let qf = QuotientField::new(h.clone());
        let eta = qf.generator();
        let theta = common_root(&qf, f, &g_c, &eta)?;
        let omega_plus_c = qf.sub(&eta, &theta);
        let omega = qf.sub(&omega_plus_c, &QElem::from_int(c));
        // exact verification of both roots
        if !qf.eval_intpoly(f, &theta).is_zero() || !qf.eval_intpoly(g, &omega).is_zero() {
            return Err(NumFieldError::Internal(
                "compositum root verification failed".to_string(),
            ));
        }
        return Ok(Compositum { h, root_f: theta, root_g: omega });
    }
    Err(NumFieldError::Internal(format!(
        "no primitive element found for compositum of {f} and {g}"
    )))
}

/// Linear gcd of f(Y) and g(η - Y) over Q(η); returns its root θ.
fn common_root(
    qf: &QuotientField,
    f: &IntPoly,
    g: &IntPoly,
    eta: &QElem,
) -> Result<QElem, NumFieldError> {
    let to_nf = |p: &IntPoly| -> Vec<QElem> {
        p.coeffs()
            .iter()
            .map(|c| QElem { num: IntPoly::from_coeffs(vec![c.clone()]), den: BigInt::one() })
            .collect()
    };
    // g(η - Y) as a polynomial in Y over Q(η)
    let m = g.degree();
    let mut gy: Vec<QElem> = vec![QElem::from_int(0); m + 1];
    {
        let mut pow: Vec<QElem> = vec![QElem::from_int(1)]; // (η - Y)^k, in Y
        for (k, gk) in g.coeffs().iter().enumerate() {
            if !gk.is_zero() {
                let gke =
                    QElem { num: IntPoly::from_coeffs(vec![gk.clone()]), den: BigInt::one() };
                for (j, pj) in pow.iter().enumerate() {
                    gy[j] = qf.add(&gy[j], &qf.mul(&gke, pj));
                }
            }
            if k < m {
                let mut next = vec![QElem::from_int(0); pow.len() + 1];
                for (j, pj) in pow.iter().enumerate() {
                    next[j] = qf.add(&next[j], &qf.mul(pj, eta));
                    next[j + 1] = qf.sub(&next[j + 1], pj);
                }
                pow = next;
            }
        }
    }
    let trim = |mut v: Vec<QElem>| -> Vec<QElem> {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    };
    let mut r0 = trim(to_nf(f));
    let mut r1 = trim(gy);
    while r1.len() > 2 {
        let lc_inv = qf
            .inv(r1.last().unwrap())
            .ok_or_else(|| NumFieldError::Internal("zero leading coefficient".to_string()))?;
        let r1m: Vec<QElem> = r1.iter().map(|c| qf.mul(c, &lc_inv)).collect();
        let mut rem = r0.clone();
        while rem.len() >= r1m.len() && rem.len() > 1 {
            let k = rem.len() - r1m.len();
            let c = rem.last().unwrap().clone();
            for (j, bj) in r1m.iter().enumerate() {
                let t = qf.mul(&c, bj);
                rem[k + j] = qf.sub(&rem[k + j], &t);
            }
            rem = trim(rem);
            if rem.is_empty() {
                break;
            }
        }
        r0 = r1;
        r1 = trim(rem);
        if r1.is_empty() {
            break;
        }
    }
    let lin = if r1.len() == 2 {
        r1
    } else if r1.is_empty() && r0.len() == 2 {
        r0
    } else {
        return Err(NumFieldError::Internal(
            "gcd in compositum is not linear; primitive element assumption broken".to_string(),
        ));
    };
    let root = qf
        .div(&lin[0], &lin[1])
        .ok_or_else(|| NumFieldError::Internal("degenerate linear gcd".to_string()))?;
    Ok(qf.sub(&QElem::from_int(0), &root))
}

/// Is `img` a root of sub's defining polynomial inside sup? The contract for
/// a claimed embedding of `sub` into `sup`.
pub fn is_embedding(sup: &NumberField, sub: &NumberField, img: &QElem) -> bool {
    let qf = QuotientField::new(sup.defining_poly().clone());
    qf.eval_intpoly(sub.defining_poly(), img).is_zero()
}

/// Map an O_sub element through the embedding; None when the image is not
/// integral (which would mean the claimed embedding is wrong).
pub fn map_element(
    sup: &NumberField,
    sub: &NumberField,
    img: &QElem,
    x: &[BigInt],
) -> Option<Vec<BigInt>> {
    let qf = QuotientField::new(sup.defining_poly().clone());
    let (num, den) = sub.elem_to_poly(x);
    let val = qf.eval_intpoly(&num, img);
    sup.elem_from_poly(&val.num, &(&val.den * &den))
}
