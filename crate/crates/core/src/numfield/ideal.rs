//! Fractional ideals as Z-lattices in the integral basis, kept in canonical
//! lower Hermite form over a reduced positive denominator. Equality of the
//! normal forms is equality of ideals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::Mat;

use super::{NumFieldError, NumberField};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FracIdeal {
    num: Mat,
    den: BigInt,
}

impl FracIdeal {
    pub fn num(&self) -> &Mat {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    fn normalized(mut num: Mat, mut den: BigInt) -> Self {
        assert!(den.is_positive());
        num = num.hnf();
        assert_eq!(num.rows, num.cols, "ideal lattice must have full rank");
        let g = num.content().gcd(&den);
        if g > BigInt::one() {
            num = num.div_exact(&g);
            den = &den / &g;
        }
        FracIdeal { num, den }
    }

    /// The ring of integers as an ideal.
    pub fn one(k: &NumberField) -> Self {
        FracIdeal { num: Mat::identity(k.degree()), den: BigInt::one() }
    }

    /// Integral ideal from a full-rank lattice of O_K coordinates.
    pub(crate) fn from_lattice(lattice: Mat) -> Self {
        FracIdeal::normalized(lattice, BigInt::one())
    }

    /// O_K-ideal generated by elements of O_K (coordinate vectors).
    pub fn from_generators(k: &NumberField, gens: &[Vec<BigInt>]) -> Self {
        assert!(!gens.is_empty());
        let n = k.degree();
        let mut rows = Vec::with_capacity(gens.len() * n);
        for g in gens {
            for i in 0..n {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                rows.push(k.elem_mul(&e, g));
            }
        }
        FracIdeal::normalized(Mat::from_rows(rows), BigInt::one())
    }

    /// Principal ideal (x).
    pub fn principal(k: &NumberField, x: &[BigInt]) -> Self {
        FracIdeal::from_generators(k, &[x.to_vec()])
    }

    /// Ideal p*O_K + beta*O_K.
    pub fn two_generated(k: &NumberField, p: &BigInt, beta: &[BigInt]) -> Self {
        FracIdeal::from_generators(k, &[k.from_int(p), beta.to_vec()])
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_one(&self, k: &NumberField) -> bool {
        *self == FracIdeal::one(k)
    }

    /// Smallest positive rational in the ideal intersection with Q.
    pub fn rational_generator(&self) -> (BigInt, BigInt) {
        // row 0 of the lower HNF spans (ideal ∩ Q) * den
        let a = self.num.at(0, 0).clone();
        let g = a.gcd(&self.den);
        (a / &g, &self.den / &g)
    }

    pub fn mul(&self, k: &NumberField, other: &FracIdeal) -> FracIdeal {
        let n = k.degree();
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                rows.push(k.elem_mul(self.num.row(i), other.num.row(j)));
            }
        }
        FracIdeal::normalized(Mat::from_rows(rows), &self.den * &other.den)
    }

    /// Norm as a reduced fraction (num, den); integral ideals have den 1.
    pub fn norm_pair(&self, k: &NumberField) -> (BigInt, BigInt) {
        let dnum = self.num.det().abs();
        let dden = num_traits::pow::pow(self.den.clone(), k.degree());
        let g = dnum.gcd(&dden);
        (dnum / &g, dden / &g)
    }

    /// Norm of an integral ideal.
    pub fn norm(&self, k: &NumberField) -> BigInt {
        let (n, d) = self.norm_pair(k);
        assert!(d.is_one(), "norm of non-integral ideal requested");
        n
    }

    /// Membership of an O_K element (or rational multiple x/xden).
    pub fn contains(&self, _k: &NumberField, x: &[BigInt], xden: &BigInt) -> bool {
        // x/xden in num/den  <=>  x * den / xden in num-lattice
        let scaled: Vec<BigInt> = x.iter().map(|c| c * &self.den).collect();
        // require xden | each solved coordinate: solve on xden * num
        let m = self.num.scalar_mul(xden);
        m.solve_left_lower(&scaled).is_some()
    }

    /// Inverse fractional ideal.
    pub fn inverse(&self, k: &NumberField) -> FracIdeal {
        let n = k.degree();
        // invert the integral numerator lattice I: I^{-1} = (1/a){w : w I ⊆ a O}
        let a = self.num.at(0, 0).clone(); // I ∩ Z = aZ
        let mut stacked_cols: Vec<Vec<BigInt>> = vec![Vec::new(); n];
        for j in 0..n {
            let m = k.mult_matrix(self.num.row(j));
            for i in 0..n {
                stacked_cols[i].extend(m.row(i).iter().cloned());
            }
        }
        let stacked = Mat::from_rows(stacked_cols);
        let w = stacked.kernel_mod(&a);
        // I^{-1} = w-lattice / a; self = I/den, so self^{-1} = den * I^{-1}
        FracIdeal::normalized(w.scalar_mul(&self.den), a)
    }

    pub fn div(&self, k: &NumberField, other: &FracIdeal) -> FracIdeal {
        self.mul(k, &other.inverse(k))
    }

    pub fn pow(&self, k: &NumberField, e: i64) -> FracIdeal {
        if e == 0 {
            return FracIdeal::one(k);
        }
        let base = if e < 0 { self.inverse(k) } else { self.clone() };
        let mut acc = FracIdeal::one(k);
        let mut b = base;
        let mut m = e.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul(k, &b);
            }
            m >>= 1;
            if m > 0 {
                b = b.mul(k, &b);
            }
        }
        acc
    }

    /// A ⊆ B.
    pub fn contained_in(&self, k: &NumberField, other: &FracIdeal) -> bool {
        (0..self.num.rows).all(|i| other.contains(k, self.num.row(i), &self.den))
    }

    /// Scale by a rational number num/den.
    pub fn scale(&self, _k: &NumberField, num: &BigInt, den: &BigInt) -> FracIdeal {
        assert!(!num.is_zero() && !den.is_zero());
        FracIdeal::normalized(self.num.scalar_mul(&num.abs()), &self.den * den.abs())
    }
}

/// Guarded product for the public API: ideals must live in the same field.
pub fn ideal_mul(
    k: &NumberField,
    k2: &NumberField,
    a: &FracIdeal,
    b: &FracIdeal,
) -> Result<FracIdeal, NumFieldError> {
    if !k.same_field(k2) {
        return Err(NumFieldError::FieldMismatch);
    }
    Ok(a.mul(k, b))
}
