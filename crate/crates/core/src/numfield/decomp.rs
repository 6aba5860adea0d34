//! Prime decomposition p O_K = prod P_i^{e_i}.
//!
//! Primes not dividing the index [O_K : Z[θ]] go through Dedekind's theorem
//! (factor f mod p). Index primes are split inside the residue algebra
//! O_K/pO_K: radical by iterated Frobenius, then the semisimple quotient is
//! broken into fields along factorizations of minimal polynomials of
//! deterministic pseudorandom elements.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::Mat;
use crate::poly::ModPPoly;
use crate::rng::SplitMix64;

use super::fpalg::FpMat;
use super::ideal::FracIdeal;
use super::NumberField;

/// A prime ideal above p with ramification and residue data.
#[derive(Clone, Debug)]
pub struct PrimeIdealFactor {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub ideal: FracIdeal,
    /// Second generator beta with P = (p, beta), when one was found.
    pub two_elt: Option<Vec<BigInt>>,
    /// b in (p P^{-1}) \ p O_K driving the valuation iteration.
    val_elt: Vec<BigInt>,
}

impl PrimeIdealFactor {
    pub fn norm(&self) -> BigInt {
        num_traits::pow::pow(BigInt::from(self.p), self.f as usize)
    }

    /// v_P(x) for a nonzero element of O_K.
    pub fn valuation_of_elem(&self, k: &NumberField, x: &[BigInt]) -> u32 {
        debug_assert!(x.iter().any(|c| !c.is_zero()));
        let p = BigInt::from(self.p);
        let mut v = 0u32;
        let mut y = x.to_vec();
        loop {
            let z = k.elem_mul(&y, &self.val_elt);
            if z.iter().all(|c| (c % &p).is_zero()) {
                y = z.iter().map(|c| c / &p).collect();
                v += 1;
            } else {
                return v;
            }
        }
    }

    /// v_P of a fractional ideal.
    pub fn valuation_of_ideal(&self, k: &NumberField, a: &FracIdeal) -> i64 {
        let num_val = (0..a.num().rows)
            .map(|i| self.valuation_of_elem(k, a.num().row(i)) as i64)
            .min()
            .unwrap();
        let den_val = crate::arith::valuation(a.den(), &BigInt::from(self.p)) as i64;
        num_val - (self.e as i64) * den_val
    }
}

/// Decompose a rational prime in O_K. Every prime decomposes; the output is
/// sorted by (f, e, lattice) and satisfies sum e_i f_i = n.
pub fn decompose_prime(k: &NumberField, p: u64) -> Vec<PrimeIdealFactor> {
    let n = k.degree();
    if n == 1 {
        return vec![PrimeIdealFactor {
            p,
            e: 1,
            f: 1,
            ideal: FracIdeal::principal(k, &k.from_int(&BigInt::from(p))),
            two_elt: Some(k.from_int(&BigInt::from(p))),
            val_elt: k.one(),
        }];
    }
    let mut out = if (&k.index % BigInt::from(p)).is_zero() {
        decompose_index_prime(k, p)
    } else {
        decompose_dedekind(k, p)
    };
    out.sort_by(|a, b| {
        (a.f, a.e)
            .cmp(&(b.f, b.e))
            .then_with(|| a.ideal.num().rows_vec().cmp(&b.ideal.num().rows_vec()))
    });
    let total: usize = out.iter().map(|q| (q.e * q.f) as usize).sum();
    assert_eq!(total, n, "sum of e_i f_i must equal the degree at p = {p}");
    out
}

fn decompose_dedekind(k: &NumberField, p: u64) -> Vec<PrimeIdealFactor> {
    let f = k.defining_poly();
    let factors = ModPPoly::from_intpoly(f, p).factor();
    let mut out = Vec::with_capacity(factors.len());
    for (gi, ei) in &factors {
        let beta = k
            .elem_from_poly_any_degree(&gi.to_intpoly(), &BigInt::one())
            .expect("g_i(θ) is integral");
        let ideal = FracIdeal::two_generated(k, &BigInt::from(p), &beta);
        // valuation element: (f / g_i)(θ) * g_i^{e_i - 1}(θ) mod p
        let mut b = ModPPoly::constant(p, 1);
        for (gj, ej) in &factors {
            let count = if gj == gi { ei - 1 } else { *ej };
            for _ in 0..count {
                b = b.mul(gj);
            }
        }
        let val_elt = k
            .elem_from_poly_any_degree(&b.to_intpoly(), &BigInt::one())
            .expect("valuation element is integral");
        out.push(PrimeIdealFactor {
            p,
            e: *ei,
            f: gi.degree() as u32,
            ideal,
            two_elt: Some(beta),
            val_elt,
        });
    }
    out
}

/// Residue algebra O_K/pO_K with u64 structure constants.
struct ResidueAlgebra {
    p: u64,
    n: usize,
    table: Vec<u64>,
}

impl ResidueAlgebra {
    fn new(k: &NumberField, p: u64) -> Self {
        let n = k.degree();
        let pb = BigInt::from(p);
        let table: Vec<u64> = (0..n * n * n)
            .map(|idx| k.mult_table_entry(idx).mod_floor(&pb).to_u64().unwrap())
            .collect();
        ResidueAlgebra { p, n, table }
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.n];
        for i in 0..self.n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.n {
                if b[j] == 0 {
                    continue;
                }
                let prod = (a[i] as u128 * b[j] as u128 % p as u128) as u64;
                let base = (i * self.n + j) * self.n;
                for (kk, o) in out.iter_mut().enumerate() {
                    *o = ((*o as u128 + prod as u128 * self.table[base + kk] as u128)
                        % p as u128) as u64;
                }
            }
        }
        out
    }

    fn pow(&self, x: &[u64], e: u64) -> Vec<u64> {
        let mut acc = vec![0u64; self.n];
        acc[0] = 1 % self.p;
        let mut base = x.to_vec();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Radical as a row space over F_p.
    fn radical(&self) -> FpMat {
        let mut rows = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut e = vec![0u64; self.n];
            e[i] = 1;
            rows.push(self.pow(&e, self.p));
        }
        let frob = FpMat::from_rows(self.p, rows);
        let mut total = frob.clone();
        let mut pk = self.p as u128;
        while pk < self.n as u128 {
            total = total.mul(&frob);
            pk *= self.p as u128;
        }
        total.left_kernel()
    }
}

/// A quotient of the semisimple algebra B, given by the rref of the subspace
/// being quotiented out (an ideal of B, in A-coordinates extended by the
/// radical), plus a basis of coset representatives.
struct Component {
    /// rref rows of the ideal M ⊂ A (includes the radical)
    ideal_rref: FpMat,
    pivots: Vec<usize>,
    /// coordinates (in A) of the component's coset basis
    basis: Vec<Vec<u64>>,
}

fn make_component(p: u64, n: usize, ideal_rows: Vec<Vec<u64>>) -> Component {
    let m = if ideal_rows.is_empty() {
        FpMat::zero(p, 0, n)
    } else {
        FpMat::from_rows(p, ideal_rows)
    };
    let (rref, pivots) = m.rref();
    // keep only nonzero rows
    let mut rows = Vec::new();
    for i in 0..rref.rows {
        if rref.row(i).iter().any(|&x| x != 0) {
            rows.push(rref.row(i).to_vec());
        }
    }
    let rref =
        if rows.is_empty() { FpMat::zero(p, 0, n) } else { FpMat::from_rows(p, rows) };
    let mut basis = Vec::new();
    for c in 0..n {
        if !pivots.contains(&c) {
            let mut e = vec![0u64; n];
            e[c] = 1;
            basis.push(e);
        }
    }
    Component { ideal_rref: rref, pivots, basis }
}

impl Component {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduce a vector of A modulo the ideal.
    fn reduce(&self, v: &[u64], p: u64) -> Vec<u64> {
        let mut out = v.to_vec();
        for (ri, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c != 0 {
                for j in 0..out.len() {
                    let sub = (c as u128 * self.ideal_rref.at(ri, j) as u128 % p as u128) as u64;
                    out[j] = (out[j] + p - sub) % p;
                }
            }
        }
        out
    }
}

fn decompose_index_prime(k: &NumberField, p: u64) -> Vec<PrimeIdealFactor> {
    let n = k.degree();
    let alg = ResidueAlgebra::new(k, p);
    let radical = alg.radical();
    let rad_rows: Vec<Vec<u64>> = (0..radical.rows).map(|i| radical.row(i).to_vec()).collect();

    let mut seed: Vec<u64> = vec![p, 0x6465636f];
    seed.extend(k.defining_poly().coeffs().iter().map(|c| {
        c.mod_floor(&BigInt::from(u64::MAX)).to_u64().unwrap_or(0)
    }));
    let mut rng = SplitMix64::from_words(seed);

    // split A/rad into fields
    let mut finished: Vec<Component> = Vec::new();
    let mut work = vec![make_component(p, n, rad_rows.clone())];
    while let Some(comp) = work.pop() {
        let dim = comp.dim();
        assert!(dim > 0, "component collapsed");
        // candidate generators: coset basis first, then random combinations
        let mut found_split = false;
        for attempt in 0..(dim + 24) {
            let cand: Vec<u64> = if attempt < dim {
                comp.basis[attempt].clone()
            } else {
                let mut v = vec![0u64; n];
                for b in &comp.basis {
                    let c = rng.below(p);
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = ((*vi as u128 + c as u128 * *bi as u128 % p as u128)
                            % p as u128) as u64;
                    }
                }
                v
            };
            let cand = comp.reduce(&cand, p);
            if cand.iter().all(|&x| x == 0) {
                continue;
            }
            // minimal polynomial of cand in the component
            let mut pow_rows: Vec<Vec<u64>> = Vec::new();
            let mut cur = vec![0u64; n];
            cur[0] = 1;
            let minpoly;
            loop {
                let reduced = comp.reduce(&cur, p);
                pow_rows.push(reduced.clone());
                let m = FpMat::from_rows(p, pow_rows.clone());
                if m.rank() < pow_rows.len() {
                    // last power is dependent: solve for the relation
                    let head = FpMat::from_rows(p, pow_rows[..pow_rows.len() - 1].to_vec());
                    let target = pow_rows.last().unwrap().clone();
                    let sol = head.solve_left(&target).expect("dependence must be solvable");
                    // x^d = sum sol_i x^i  =>  minpoly = x^d - sum sol_i x^i
                    let d = pow_rows.len() - 1;
                    let mut coeffs = vec![0u64; d + 1];
                    for (i, s) in sol.iter().enumerate() {
                        coeffs[i] = (p - s) % p;
                    }
                    coeffs[d] = 1;
                    minpoly = ModPPoly::from_coeffs(p, coeffs);
                    break;
                }
                cur = alg.mul(&cur, &cand);
            }
            let deg = minpoly.degree();
            let factors = minpoly.factor();
            assert!(
                factors.iter().all(|(_, m)| *m == 1),
                "semisimple quotient must have squarefree minimal polynomials"
            );
            if factors.len() == 1 && deg == dim {
                finished.push(comp);
                found_split = true;
                break;
            }
            if factors.len() > 1 {
                // split along each factor: new ideal = old + (m_i(cand))
                for (mi, _) in &factors {
                    let mut gen = vec![0u64; n];
                    // evaluate m_i at cand inside A
                    for (ci, &c) in mi.coeffs().iter().enumerate().rev() {
                        let _ = ci;
                        gen = alg.mul(&gen, &cand);
                        gen[0] = (gen[0] + c) % p;
                    }
                    let mut rows = Vec::new();
                    for i in 0..comp.ideal_rref.rows {
                        rows.push(comp.ideal_rref.row(i).to_vec());
                    }
                    // ideal generated by gen: gen * every basis vector of A
                    for i in 0..n {
                        let mut e = vec![0u64; n];
                        e[i] = 1;
                        rows.push(alg.mul(&e, &gen));
                    }
                    work.push(make_component(p, n, rows));
                }
                found_split = true;
                break;
            }
            // irreducible but not generating: try the next candidate
        }
        assert!(found_split, "failed to certify or split a component at p = {p}");
    }

    // each finished component's ideal is a maximal ideal of A
    let mut out = Vec::new();
    for comp in finished {
        let f_deg = comp.dim() as u32;
        let mut rows: Vec<Vec<BigInt>> = (0..comp.ideal_rref.rows)
            .map(|i| comp.ideal_rref.row(i).iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        for i in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::from(p);
            rows.push(r);
        }
        let lattice = Mat::from_rows(rows).hnf();
        let ideal = FracIdeal::from_lattice(lattice);
        let val_elt = valuation_element(k, &ideal, p);
        // e = v_P(p O_K)
        let probe = PrimeIdealFactor {
            p,
            e: 0,
            f: f_deg,
            ideal: ideal.clone(),
            two_elt: None,
            val_elt: val_elt.clone(),
        };
        let e = probe.valuation_of_elem(k, &k.from_int(&BigInt::from(p)));
        let two_elt = find_two_element(k, &ideal, p);
        out.push(PrimeIdealFactor { p, e, f: f_deg, ideal, two_elt, val_elt });
    }
    out
}

/// b in (p P^{-1}) \ p O_K.
fn valuation_element(k: &NumberField, prime: &FracIdeal, p: u64) -> Vec<BigInt> {
    let inv = prime.inverse(k);
    // p * P^{-1} is integral; find a basis row of it outside p O_K
    let j = inv.scale(k, &BigInt::from(p), &BigInt::one());
    assert!(j.is_integral());
    let pb = BigInt::from(p);
    for i in 0..j.num().rows {
        let row = j.num().row(i);
        if row.iter().any(|c| !(c % &pb).is_zero()) {
            return row.to_vec();
        }
    }
    panic!("p P^{{-1}} = p O_K cannot happen for a prime ideal");
}

/// Opportunistic two-element representation P = (p, beta).
fn find_two_element(k: &NumberField, prime: &FracIdeal, p: u64) -> Option<Vec<BigInt>> {
    let pb = BigInt::from(p);
    let n = prime.num().rows;
    let mut candidates: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..n {
        candidates.push(prime.num().row(i).to_vec());
    }
    // pairwise sums widen the search a little
    for i in 0..n {
        for j in i + 1..n {
            let s: Vec<BigInt> =
                prime.num().row(i).iter().zip(prime.num().row(j)).map(|(a, b)| a + b).collect();
            candidates.push(s);
        }
    }
    for beta in candidates {
        if beta.iter().all(|c| (c % &pb).is_zero()) {
            continue;
        }
        let test = FracIdeal::two_generated(k, &pb, &beta);
        if test == *prime {
            return Some(beta);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::build_field;
    use crate::poly::IntPoly;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn gauss_split_inert_ramified() {
        let k = build_field(&ip(&[1, 0, 1])).unwrap();
        // 5 ≡ 1 mod 4 splits
        let d5 = decompose_prime(&k, 5);
        assert_eq!(d5.len(), 2);
        assert!(d5.iter().all(|q| q.e == 1 && q.f == 1));
        // 3 inert
        let d3 = decompose_prime(&k, 3);
        assert_eq!(d3.len(), 1);
        assert_eq!((d3[0].e, d3[0].f), (1, 2));
        // 2 ramified
        let d2 = decompose_prime(&k, 2);
        assert_eq!(d2.len(), 1);
        assert_eq!((d2[0].e, d2[0].f), (2, 1));
    }

    #[test]
    fn ramified_prime_of_sqrt_minus_23() {
        let k = build_field(&ip(&[23, 0, 1])).unwrap();
        let d23 = decompose_prime(&k, 23);
        assert_eq!(d23.len(), 1);
        assert_eq!((d23[0].e, d23[0].f), (2, 1));
        // index prime 2 splits since -23 ≡ 1 (mod 8)
        let d2 = decompose_prime(&k, 2);
        assert_eq!(d2.len(), 2);
        assert!(d2.iter().all(|q| q.e == 1 && q.f == 1));
        // recomposition: product of P^e = (p)
        for (p, dec) in [(23u64, &d23), (2u64, &d2)] {
            let mut prod = FracIdeal::one(&k);
            for q in dec.iter() {
                prod = prod.mul(&k, &q.ideal.pow(&k, q.e as i64));
            }
            let pid = FracIdeal::principal(&k, &k.from_int(&BigInt::from(p)));
            assert_eq!(prod, pid);
        }
    }

    #[test]
    fn pure_cubic_index_prime() {
        // X^3 - 19 has index 3; 3 decomposes through the residue algebra path
        let k = build_field(&ip(&[-19, 0, 0, 1])).unwrap();
        let d3 = decompose_prime(&k, 3);
        let total: u32 = d3.iter().map(|q| q.e * q.f).sum();
        assert_eq!(total, 3);
        // 3 || D_K = -3 * 19^2, so 3 ramifies but is not totally ramified
        assert!(d3.iter().any(|q| q.e == 2));
        // valuations recompose
        let mut prod = FracIdeal::one(&k);
        for q in &d3 {
            prod = prod.mul(&k, &q.ideal.pow(&k, q.e as i64));
        }
        assert_eq!(prod, FracIdeal::principal(&k, &k.from_int(&BigInt::from(3))));
        // 19 is totally ramified
        let d19 = decompose_prime(&k, 19);
        assert_eq!(d19.len(), 1);
        assert_eq!((d19[0].e, d19[0].f), (3, 1));
    }

    #[test]
    fn brumer_a_1367_shape() {
        // Prop 3.1 with e(p) = 2: p O_K = β1 β2^2 β3^2
        let k = build_field(&ip(&[1, 5, -11, 7, -2, 1])).unwrap();
        let d = decompose_prime(&k, 1367);
        let mut es: Vec<u32> = d.iter().map(|q| q.e).collect();
        es.sort_unstable();
        assert_eq!(es, vec![1, 2, 2]);
        assert!(d.iter().all(|q| q.f == 1));
    }

    #[test]
    fn example_b_5_totally_ramified() {
        let k = build_field(&ip(&[3, -5, 15, -5, 0, 1])).unwrap();
        let d5 = decompose_prime(&k, 5);
        assert_eq!(d5.len(), 1);
        assert_eq!((d5[0].e, d5[0].f), (5, 1));
        // 3 has the e = 2 shape
        let d3 = decompose_prime(&k, 3);
        let mut es: Vec<u32> = d3.iter().map(|q| q.e).collect();
        es.sort_unstable();
        assert_eq!(es, vec![1, 2, 2]);
    }

    #[test]
    fn valuations_against_norms() {
        let k = build_field(&ip(&[23, 0, 1])).unwrap();
        let d2 = decompose_prime(&k, 2);
        // ω_1 = (1+θ)/2 has norm 6 = 2*3: valuation 1 at exactly one prime above 2
        let w1 = vec![BigInt::zero(), BigInt::one()];
        let vals: Vec<u32> = d2.iter().map(|q| q.valuation_of_elem(&k, &w1)).collect();
        assert_eq!(vals.iter().sum::<u32>(), 1);
        // p itself has v_P(p) = e at every P above p
        for q in &d2 {
            assert_eq!(q.valuation_of_elem(&k, &k.from_int(&BigInt::from(2))), q.e);
        }
    }
}
