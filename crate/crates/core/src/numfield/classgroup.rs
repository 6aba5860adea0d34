//! Ideal class groups by factor-base relation search.
//!
//! The factor base is every prime of norm below the Minkowski bound plus all
//! primes above ramified rationals. Relations come from principal elements:
//! rational primes, the linear family θ - a, sup-norm shells over the
//! integral basis, and targeted short elements inside individual factor-base
//! ideals. The relation lattice is accumulated in Hermite form; Smith normal
//! form of the full-rank lattice yields invariant factors and a discrete-log
//! map for ideal classes.
//!
//! Honesty contract: `certified` is set only when the lattice is full rank,
//! the search was stable for the configured number of extra rounds, and every
//! factor-base class order has been confirmed by an explicit, exactly
//! verified principality witness.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::linalg::Mat;

use super::decomp::{decompose_prime, PrimeIdealFactor};
use super::ideal::FracIdeal;
use super::lll;
use super::{NumFieldError, NumberField};

#[derive(Clone, Debug)]
pub struct ClassGroupConfig {
    /// Sup-norm cap for relation shells over the integral basis.
    pub max_height: i64,
    /// Extra no-change rounds required after reaching full rank.
    pub stable_rounds: u32,
    /// Range of the θ - a relation family per round.
    pub linear_block: i64,
    /// Search for principality witnesses of every factor-base class order.
    pub want_witnesses: bool,
    /// Shell cap for witness / targeted element searches.
    pub witness_height: i64,
    /// Candidate cap per witness search.
    pub witness_cap: usize,
    /// Hard cap on relation rounds before giving up.
    pub max_rounds: u32,
}

impl Default for ClassGroupConfig {
    fn default() -> Self {
        ClassGroupConfig {
            max_height: 6,
            stable_rounds: 2,
            linear_block: 50,
            want_witnesses: true,
            witness_height: 5,
            witness_cap: 60_000,
            max_rounds: 12,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub factor_base: Vec<PrimeIdealFactor>,
    /// Rational primes underlying the base set (norm bound + ramified).
    pub rational_primes: Vec<u64>,
    pub minkowski_bound: BigInt,
    /// Nontrivial invariant factors d_1 | d_2 | ... (empty for h = 1).
    pub invariant_factors: Vec<BigInt>,
    pub h: BigInt,
    /// Class coordinates of each factor-base prime in ⊕ Z/d_i.
    pub generator_coords: Vec<Vec<BigInt>>,
    pub certified: bool,
    pub stabilized: bool,
    /// Principality witnesses for P_i^{ord([P_i])}, when searched and found.
    pub witnesses: Vec<Option<Vec<BigInt>>>,
    /// Full decomposition of every base rational (includes primes that were
    /// too large for the factor base; relations must avoid those).
    full_decomps: BTreeMap<u64, Vec<PrimeIdealFactor>>,
    /// Indices into factor_base keyed by (p, position within decomposition).
    fb_of_decomp: BTreeMap<(u64, usize), usize>,
    diag: Vec<BigInt>,
    nontrivial: Vec<usize>,
    v_right_inv: Mat,
}

/// Incremental lower-HNF accumulator for relation rows.
struct RelAccum {
    cols: usize,
    /// pivot column -> row (pivot = last nonzero entry of the row)
    pivots: BTreeMap<usize, Vec<BigInt>>,
}

impl RelAccum {
    fn new(cols: usize) -> Self {
        RelAccum { cols, pivots: BTreeMap::new() }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Insert a row; returns true when the lattice grew or a pivot changed.
    fn add(&mut self, mut row: Vec<BigInt>) -> bool {
        let mut changed = false;
        loop {
            let Some(c) = row.iter().rposition(|x| !x.is_zero()) else {
                return changed;
            };
            match self.pivots.get_mut(&c) {
                None => {
                    if row[c].is_negative() {
                        for x in row.iter_mut() {
                            *x = -x.clone();
                        }
                    }
                    self.pivots.insert(c, row);
                    return true;
                }
                Some(pivot) => {
                    let q = row[c].div_floor(&pivot[c]);
                    if !q.is_zero() {
                        for (x, p) in row.iter_mut().zip(pivot.iter()) {
                            *x -= &q * p;
                        }
                    }
                    if row[c].is_zero() {
                        continue;
                    }
                    // remainder is smaller: swap in as the new pivot
                    std::mem::swap(pivot, &mut row);
                    changed = true;
                }
            }
        }
    }

    /// Determinant of the lattice when full rank (product of pivots).
    fn det(&self) -> Option<BigInt> {
        if self.rank() != self.cols {
            return None;
        }
        let mut d = BigInt::one();
        for r in self.pivots.values() {
            let c = r.iter().rposition(|x| !x.is_zero()).unwrap();
            d *= &r[c];
        }
        Some(d)
    }

    fn snapshot(&self) -> Mat {
        if self.pivots.is_empty() {
            return Mat::zero(0, self.cols);
        }
        Mat::from_rows(self.pivots.values().cloned().collect()).hnf()
    }
}

pub(crate) fn minkowski_bound_public(k: &NumberField) -> BigInt {
    minkowski_bound(k)
}

fn minkowski_bound(k: &NumberField) -> BigInt {
    let n = k.degree();
    let (_, r2) = k.signature;
    let mut num = BigInt::one();
    for i in 1..=n {
        num *= BigInt::from(i);
    }
    // 4/pi < 31831/25000
    num *= num_traits::pow::pow(BigInt::from(31831), r2);
    num *= k.field_disc.abs().sqrt() + 1;
    let mut den = num_traits::pow::pow(BigInt::from(n), n);
    den *= num_traits::pow::pow(BigInt::from(25000), r2);
    // ceil
    (&num + &den - BigInt::one()) / den
}

struct SearchCtx<'a> {
    k: &'a NumberField,
    /// all rationals in the base set, ascending
    rationals: Vec<u64>,
    full_decomps: BTreeMap<u64, Vec<PrimeIdealFactor>>,
    /// (p, idx in decomposition) -> factor base column
    fb_of_decomp: BTreeMap<(u64, usize), usize>,
    fb_len: usize,
}

impl<'a> SearchCtx<'a> {
    /// Valuation row of a nonzero element when it is factor-base smooth.
    fn relation_of(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let norm = self.k.norm(x);
        debug_assert!(!norm.is_zero());
        let mut rest = norm.abs();
        if rest.is_one() {
            return None; // a unit: the zero relation
        }
        let mut row = vec![BigInt::zero(); self.fb_len];
        for &p in &self.rationals {
            let pb = BigInt::from(p);
            let mut vp = 0u32;
            while (&rest % &pb).is_zero() {
                rest /= &pb;
                vp += 1;
            }
            if vp == 0 {
                continue;
            }
            let decomp = &self.full_decomps[&p];
            let mut check = 0u32;
            for (j, q) in decomp.iter().enumerate() {
                let v = q.valuation_of_elem(self.k, x);
                if v == 0 {
                    continue;
                }
                check += v * q.f;
                match self.fb_of_decomp.get(&(p, j)) {
                    Some(&col) => row[col] += BigInt::from(v),
                    None => return None, // supported outside the factor base
                }
            }
            assert_eq!(check, vp, "valuations must account for the norm at p = {p}");
            if rest.is_one() {
                break;
            }
        }
        if !rest.is_one() {
            return None;
        }
        Some(row)
    }
}

/// Short-element scan inside an ideal: LLL-reduce the lattice, walk sup-norm
/// shells, hand every exact candidate to `visit` until it returns true.
fn scan_ideal_elements(
    k: &NumberField,
    ideal: &FracIdeal,
    height: i64,
    cap: usize,
    mut visit: impl FnMut(&[BigInt]) -> bool,
) {
    let rows = lll::lll_reduce(k, &lll::mat_rows(ideal.num()));
    let n = k.degree();
    let mut seen = 0usize;
    for s in 1..=height {
        for c in lll::shell_vectors(n, s) {
            if seen >= cap {
                return;
            }
            // skip scalar multiples of earlier shells
            let g = c.iter().fold(0i64, |acc, &x| {
                let mut a = acc.abs();
                let mut b = x.abs();
                while b != 0 {
                    let t = a % b;
                    a = b;
                    b = t;
                }
                a
            });
            if g > 1 {
                continue;
            }
            let mut x = vec![BigInt::zero(); n];
            for (ci, row) in c.iter().zip(&rows) {
                if *ci != 0 {
                    let cb = BigInt::from(*ci);
                    for (xi, ri) in x.iter_mut().zip(row) {
                        *xi += &cb * ri;
                    }
                }
            }
            if x.iter().all(|v| v.is_zero()) {
                continue;
            }
            seen += 1;
            if visit(&x) {
                return;
            }
        }
    }
}

/// Search a generator of an integral ideal by bounded enumeration with a
/// floating-point norm prefilter; exact verification by ideal equality.
pub fn find_generator(
    k: &NumberField,
    ideal: &FracIdeal,
    height: i64,
    cap: usize,
) -> Option<Vec<BigInt>> {
    assert!(ideal.is_integral());
    let target = ideal.norm(k);
    let target_f = target.to_f64().unwrap_or(f64::MAX);
    let rows = lll::lll_reduce(k, &lll::mat_rows(ideal.num()));
    let emb = lll::Embedder::new(k);
    let embeds: Vec<Vec<f64>> = rows.iter().map(|r| emb.embed(k, r)).collect();
    let n = k.degree();
    let mut seen = 0usize;
    for s in 1..=height {
        for c in lll::shell_vectors(n, s) {
            if seen >= cap {
                return None;
            }
            seen += 1;
            let mut v = vec![0.0f64; n];
            for (ci, e) in c.iter().zip(&embeds) {
                if *ci != 0 {
                    let cf = *ci as f64;
                    for (vi, ei) in v.iter_mut().zip(e) {
                        *vi += cf * ei;
                    }
                }
            }
            let est = emb.norm_estimate(&v);
            if !(est / target_f > 0.999 && est / target_f < 1.001) {
                continue;
            }
            let mut x = vec![BigInt::zero(); n];
            for (ci, row) in c.iter().zip(&rows) {
                if *ci != 0 {
                    let cb = BigInt::from(*ci);
                    for (xi, ri) in x.iter_mut().zip(row) {
                        *xi += &cb * ri;
                    }
                }
            }
            if k.norm(&x).abs() == target && FracIdeal::principal(k, &x) == *ideal {
                return Some(x);
            }
        }
    }
    None
}

/// Compute the class group. `RelationSearchIncomplete` carries partial,
/// uncertified data when the effort budget runs out before full rank.
pub fn class_group(k: &NumberField, cfg: &ClassGroupConfig) -> Result<ClassGroup, NumFieldError> {
    let n = k.degree();
    let mb = minkowski_bound(k);
    // base rationals: p <= MB plus p | D_K
    let mb_u64 = (&mb).to_u64().unwrap_or(u64::MAX).min(1 << 30);
    let mut rationals: Vec<u64> = arith::primes_up_to(mb_u64);
    for (p, _) in arith::factor_bigint(&k.field_disc) {
        let p64 = p.to_u64().expect("ramified prime too large");
        if !rationals.contains(&p64) {
            rationals.push(p64);
        }
    }
    rationals.sort_unstable();
    let mut full_decomps = BTreeMap::new();
    let mut factor_base: Vec<PrimeIdealFactor> = Vec::new();
    let mut fb_of_decomp = BTreeMap::new();
    for &p in &rationals {
        let decomp = decompose_prime(k, p);
        let ramified = (&k.field_disc % BigInt::from(p)).is_zero();
        for (j, q) in decomp.iter().enumerate() {
            if q.norm() <= mb || ramified {
                fb_of_decomp.insert((p, j), factor_base.len());
                factor_base.push(q.clone());
            }
        }
        full_decomps.insert(p, decomp);
    }
    let m = factor_base.len();
    if m == 0 {
        // no ideals of norm below the Minkowski bound: h = 1 outright
        return Ok(ClassGroup {
            factor_base,
            rational_primes: rationals,
            minkowski_bound: mb,
            invariant_factors: vec![],
            h: BigInt::one(),
            generator_coords: vec![],
            certified: true,
            stabilized: true,
            witnesses: vec![],
            full_decomps,
            fb_of_decomp,
            diag: vec![],
            nontrivial: vec![],
            v_right_inv: Mat::identity(0),
        });
    }
    let ctx = SearchCtx {
        k,
        rationals: rationals.clone(),
        full_decomps,
        fb_of_decomp,
        fb_len: m,
    };
    let mut accum = RelAccum::new(m);
    let add_element = |accum: &mut RelAccum, x: &[BigInt]| -> bool {
        match ctx.relation_of(x) {
            Some(row) => accum.add(row),
            None => false,
        }
    };

    // rational prime relations (p) = prod P^e where the whole decomposition
    // sits in the factor base
    for &p in &ctx.rationals {
        let decomp = &ctx.full_decomps[&p];
        if (0..decomp.len()).all(|j| ctx.fb_of_decomp.contains_key(&(p, j))) {
            let mut row = vec![BigInt::zero(); m];
            for (j, q) in decomp.iter().enumerate() {
                row[ctx.fb_of_decomp[&(p, j)]] = BigInt::from(q.e);
            }
            accum.add(row);
        }
    }

    let theta = k.theta();
    let mut stable_count = 0u32;
    let mut stabilized = false;
    let mut round = 0u32;
    let mut prev_shell = 0i64;
    let mut prev_targeted = 0i64;
    loop {
        let mut changed = false;
        // θ - a block
        let lo = cfg.linear_block * round as i64;
        let hi = cfg.linear_block * (round as i64 + 1);
        for a in lo..hi {
            for sign in [1i64, -1] {
                if a == 0 && sign < 0 {
                    continue;
                }
                let shifted = k.elem_add(&theta, &k.from_int(&BigInt::from(-sign * a)));
                changed |= add_element(&mut accum, &shifted);
            }
        }
        // integral-basis shell; identical shells cannot add new relations,
        // so only run when the height advanced
        let shell = (1 + round as i64).min(cfg.max_height);
        if shell != prev_shell {
            prev_shell = shell;
            for c in lll::shell_vectors(n, shell) {
                let g = c.iter().fold(0i64, |acc, &x| {
                    let mut a = acc.abs();
                    let mut b = x.abs();
                    while b != 0 {
                        let t = a % b;
                        a = b;
                        b = t;
                    }
                    a
                });
                if g > 1 {
                    continue;
                }
                let x: Vec<BigInt> = c.iter().map(|&v| BigInt::from(v)).collect();
                changed |= add_element(&mut accum, &x);
            }
        }
        // targeted short elements inside the base ideals, same skip rule
        let targeted_height = (2 + round as i64 / 2).min(cfg.witness_height);
        if targeted_height != prev_targeted {
            prev_targeted = targeted_height;
            for q in &factor_base {
                let mut local_changed = false;
                scan_ideal_elements(k, &q.ideal, targeted_height, 400, |x| {
                    if add_element(&mut accum, x) {
                        local_changed = true;
                    }
                    false
                });
                changed |= local_changed;
            }
        }

        round += 1;
        if accum.rank() == m {
            if let Some(det) = accum.det() {
                if det.is_one() {
                    stabilized = true;
                    break; // h = 1 is already forced (found lattice ⊆ true lattice)
                }
            }
            if changed {
                stable_count = 0;
            } else {
                stable_count += 1;
                if stable_count >= cfg.stable_rounds {
                    stabilized = true;
                    break;
                }
            }
        }
        if round >= cfg.max_rounds {
            break;
        }
    }

    let hnf = accum.snapshot();
    if accum.rank() < m {
        let partial = finish_class_group(
            k,
            factor_base,
            rationals,
            mb,
            ctx.full_decomps,
            ctx.fb_of_decomp,
            &hnf,
            false,
            false,
            cfg,
        );
        return Err(NumFieldError::RelationSearchIncomplete(Box::new(partial)));
    }
    Ok(finish_class_group(
        k,
        factor_base,
        rationals,
        mb,
        ctx.full_decomps,
        ctx.fb_of_decomp,
        &hnf,
        stabilized,
        true,
        cfg,
    ))
}

#[allow(clippy::too_many_arguments)]
fn finish_class_group(
    k: &NumberField,
    factor_base: Vec<PrimeIdealFactor>,
    rational_primes: Vec<u64>,
    minkowski_bound: BigInt,
    full_decomps: BTreeMap<u64, Vec<PrimeIdealFactor>>,
    fb_of_decomp: BTreeMap<(u64, usize), usize>,
    relation_hnf: &Mat,
    stabilized: bool,
    full_rank: bool,
    cfg: &ClassGroupConfig,
) -> ClassGroup {
    let m = factor_base.len();
    let (diag, v_right, v_right_inv) = if full_rank {
        let snf = relation_hnf.snf(false, true);
        (snf.diag, snf.right.unwrap(), snf.right_inv.unwrap())
    } else {
        // pad the rank-deficient case so partial data remains inspectable
        let mut padded = relation_hnf.clone();
        if padded.rows == 0 {
            padded = Mat::zero(0, m);
        }
        let zero_rows = Mat::zero(m - padded.rows, m);
        let square = padded.stack(&zero_rows);
        let snf = square.snf(false, true);
        (snf.diag, snf.right.unwrap(), snf.right_inv.unwrap())
    };
    let nontrivial: Vec<usize> = diag
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_one())
        .map(|(i, _)| i)
        .collect();
    let invariant_factors: Vec<BigInt> =
        nontrivial.iter().map(|&i| diag[i].clone()).filter(|d| !d.is_zero()).collect();
    let h: BigInt = if full_rank {
        diag.iter().product()
    } else {
        BigInt::zero()
    };
    let generator_coords: Vec<Vec<BigInt>> = (0..m)
        .map(|j| {
            nontrivial
                .iter()
                .map(|&i| {
                    let d = &diag[i];
                    if d.is_zero() {
                        v_right.at(j, i).clone()
                    } else {
                        v_right.at(j, i).mod_floor(d)
                    }
                })
                .collect()
        })
        .collect();
    let mut cg = ClassGroup {
        factor_base,
        rational_primes,
        minkowski_bound,
        invariant_factors,
        h,
        generator_coords,
        certified: false,
        stabilized,
        witnesses: vec![None; m],
        full_decomps,
        fb_of_decomp,
        diag,
        nontrivial,
        v_right_inv,
    };
    if full_rank && cfg.want_witnesses {
        let mut all = true;
        for j in 0..m {
            let ord = cg.order_of_coords(&cg.generator_coords[j]);
            let target = cg.factor_base[j].ideal.pow(k, ord.to_i64().unwrap_or(1).max(1));
            let w = find_generator(k, &target, cfg.witness_height, cfg.witness_cap);
            if w.is_none() {
                all = false;
            }
            cg.witnesses[j] = w;
        }
        cg.certified = all && stabilized;
    }
    cg
}

impl ClassGroup {
    /// Order of a coordinate vector in ⊕ Z/d_i.
    pub fn order_of_coords(&self, coords: &[BigInt]) -> BigInt {
        let mut ord = BigInt::one();
        for (i, &di_idx) in self.nontrivial.iter().enumerate() {
            let d = &self.diag[di_idx];
            if d.is_zero() {
                continue;
            }
            let g = coords[i].gcd(d);
            let o = d / &g;
            ord = &ord * &o / ord.gcd(&o);
        }
        ord
    }

    /// Class coordinates of a fractional ideal; NotSmooth when the ideal is
    /// supported outside the factor base.
    pub fn class_coords(
        &self,
        k: &NumberField,
        a: &FracIdeal,
    ) -> Result<Vec<BigInt>, NumFieldError> {
        let width = self.nontrivial.len();
        let mut out = vec![BigInt::zero(); width];
        // rationals that can carry valuation: divisors of norm(num) and den
        let (nnum, _) = a.norm_pair(k);
        let mut support: Vec<u64> = Vec::new();
        let mut rest = nnum.abs();
        for &p in &self.rational_primes {
            let pb = BigInt::from(p);
            let mut hit = false;
            while (&rest % &pb).is_zero() {
                rest /= &pb;
                hit = true;
            }
            if hit || (a.den() % &pb).is_zero() {
                support.push(p);
            }
        }
        if !rest.is_one() {
            return Err(NumFieldError::NotSmooth);
        }
        let denrest = {
            let mut d = a.den().clone();
            for &p in &support {
                let pb = BigInt::from(p);
                while (&d % &pb).is_zero() {
                    d /= &pb;
                }
            }
            d
        };
        if !denrest.is_one() {
            return Err(NumFieldError::NotSmooth);
        }
        for &p in &support {
            let decomp = &self.full_decomps[&p];
            for (j, q) in decomp.iter().enumerate() {
                let v = q.valuation_of_ideal(k, a);
                if v == 0 {
                    continue;
                }
                match self.fb_of_decomp.get(&(p, j)) {
                    None => return Err(NumFieldError::NotSmooth),
                    Some(&col) => {
                        let vb = BigInt::from(v);
                        for (o, c) in out.iter_mut().zip(&self.generator_coords[col]) {
                            *o += &vb * c;
                        }
                    }
                }
            }
        }
        for (i, &di) in self.nontrivial.iter().enumerate() {
            let d = &self.diag[di];
            if !d.is_zero() {
                out[i] = out[i].mod_floor(d);
            }
        }
        Ok(out)
    }

    /// Column of a prime (by ideal equality) in the factor base.
    pub fn find_prime(&self, ideal: &FracIdeal) -> Option<usize> {
        self.factor_base.iter().position(|q| q.ideal == *ideal)
    }

    /// Number of coordinates of a class vector (count of nontrivial d_i).
    pub fn coord_width(&self) -> usize {
        self.nontrivial.len()
    }

    /// Nontrivial invariant factors aligned with coordinate positions,
    /// zeros marking free columns in partial data.
    pub fn coord_moduli(&self) -> Vec<BigInt> {
        self.nontrivial.iter().map(|&i| self.diag[i].clone()).collect()
    }

    /// Exponent vector over the factor base whose class is the i-th SNF
    /// generator (i indexes coordinate positions).
    pub fn generator_representation(&self, i: usize) -> Vec<BigInt> {
        let col = self.nontrivial[i];
        (0..self.factor_base.len()).map(|j| self.v_right_inv.at(col, j).clone()).collect()
    }

    /// Class coordinates with a smoothing fallback: when the ideal is not
    /// factor-base smooth, find a short α in its integral part; then
    /// (α) = A·C with C smooth gives [A] = -[C]. Principal rational scalars
    /// do not move the class, so only the numerator lattice matters.
    pub fn class_coords_smoothed(
        &self,
        k: &NumberField,
        a: &FracIdeal,
        height: i64,
        cap: usize,
    ) -> Result<Vec<BigInt>, NumFieldError> {
        match self.class_coords(k, a) {
            Ok(c) => return Ok(c),
            Err(NumFieldError::NotSmooth) => {}
            Err(e) => return Err(e),
        }
        let integral = a.scale(k, a.den(), &BigInt::one());
        let mut result: Option<Vec<BigInt>> = None;
        scan_ideal_elements(k, &integral, height, cap, |x| {
            let principal = FracIdeal::principal(k, x);
            let cofactor = principal.div(k, &integral);
            debug_assert!(cofactor.is_integral());
            if let Ok(c) = self.class_coords(k, &cofactor) {
                result = Some(c);
                return true;
            }
            false
        });
        let c = result.ok_or(NumFieldError::NotSmooth)?;
        let neg: Vec<BigInt> = self
            .nontrivial
            .iter()
            .enumerate()
            .map(|(i, &di)| {
                let d = &self.diag[di];
                if d.is_zero() {
                    -c[i].clone()
                } else {
                    (-c[i].clone()).mod_floor(d)
                }
            })
            .collect();
        Ok(neg)
    }
}

/// Principality test with optional exact witness.
pub fn is_principal(
    k: &NumberField,
    cg: &ClassGroup,
    a: &FracIdeal,
    cfg: &ClassGroupConfig,
) -> Result<(bool, Option<Vec<BigInt>>), NumFieldError> {
    let coords = cg.class_coords_smoothed(k, a, cfg.witness_height, cfg.witness_cap)?;
    if coords.iter().any(|c| !c.is_zero()) {
        return Ok((false, None));
    }
    // search a generator of the integral part; for I/d a generator of I over d
    let integral = a.scale(k, a.den(), &BigInt::one());
    debug_assert!(integral.is_integral());
    let w = find_generator(k, &integral, cfg.witness_height, cfg.witness_cap);
    Ok((true, w))
}
