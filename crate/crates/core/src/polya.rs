//! Ostrowski ideals and Pólya groups, absolute and relative, as explicit
//! subgroups of class groups, plus the ideal-extension and ideal-norm maps on
//! class coordinates.
//!
//! The Ostrowski ideal at a prime power q = p^f is the product of all primes
//! of absolute norm q; relatively over a subfield K, primes of L are grouped
//! by their relative norm instead. Pólya groups are generated by the classes
//! of these products. Absolute groups over a Galois field need only ramified
//! primes (the flag `certified_complete` records when that argument applies);
//! otherwise a prime bound plus a stabilization window is reported, and the
//! two notions are never conflated.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::linalg::Mat;
use crate::numfield::embed::{is_embedding, map_element, QElem};
use crate::numfield::{
    decompose_prime, minkowski_bound_of, ClassGroup, FracIdeal, NumFieldError, NumberField,
    PrimeIdealFactor,
};

#[derive(Debug)]
pub enum PolyaError {
    RequiresCertifiedClassGroup,
    BadEmbedding,
    NotSmooth,
    NumField(NumFieldError),
}

impl fmt::Display for PolyaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyaError::RequiresCertifiedClassGroup => {
                write!(f, "operation requires a certified class group")
            }
            PolyaError::BadEmbedding => {
                write!(f, "claimed generator image is not a root of the subfield polynomial")
            }
            PolyaError::NotSmooth => write!(f, "ideal class not resolvable over the factor base"),
            PolyaError::NumField(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PolyaError {}

impl From<NumFieldError> for PolyaError {
    fn from(e: NumFieldError) -> Self {
        match e {
            NumFieldError::NotSmooth => PolyaError::NotSmooth,
            other => PolyaError::NumField(other),
        }
    }
}

/// Product of all primes of O_K with a fixed residue power q = p^f.
#[derive(Clone, Debug)]
pub struct OstrowskiIdeal {
    pub p: u64,
    pub f: u32,
    pub ideal: FracIdeal,
    pub prime_count: usize,
}

/// Group the primes above p by residue degree; one Ostrowski ideal per
/// occurring f.
pub fn ostrowski_ideals(k: &NumberField, p: u64) -> Vec<OstrowskiIdeal> {
    let decomp = decompose_prime(k, p);
    group_by_degree(k, &decomp)
}

fn group_by_degree(k: &NumberField, decomp: &[PrimeIdealFactor]) -> Vec<OstrowskiIdeal> {
    let mut fs: Vec<u32> = decomp.iter().map(|q| q.f).collect();
    fs.sort_unstable();
    fs.dedup();
    fs.into_iter()
        .map(|f| {
            let mut ideal = FracIdeal::one(k);
            let mut count = 0;
            for q in decomp.iter().filter(|q| q.f == f) {
                ideal = ideal.mul(k, &q.ideal);
                count += 1;
            }
            OstrowskiIdeal { p: decomp[0].p, f, ideal, prime_count: count }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PolyaGenerator {
    pub p: u64,
    /// residue degree (absolute case) or relative residue degree
    pub f: u32,
    pub coords: Vec<BigInt>,
}

/// A Pólya group presented inside ambient class-group coordinates.
#[derive(Clone, Debug)]
pub struct PolyaGroup {
    pub order: BigInt,
    pub invariant_factors: Vec<BigInt>,
    /// nontrivial generators only (principal Ostrowski classes are dropped)
    pub generators: Vec<PolyaGenerator>,
    pub bound_used: u64,
    pub window: u32,
    pub stabilized: bool,
    pub certified_complete: bool,
}

impl PolyaGroup {
    pub fn is_trivial(&self) -> bool {
        self.order.is_one()
    }
}

/// Order of the subgroup of ⊕ Z/d_i generated by the rows.
pub fn subgroup_order(moduli: &[BigInt], gens: &[Vec<BigInt>]) -> BigInt {
    let r = moduli.len();
    if r == 0 || gens.is_empty() {
        return BigInt::one();
    }
    let total: BigInt = moduli.iter().product();
    let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
    for (i, d) in moduli.iter().enumerate() {
        let mut row = vec![BigInt::zero(); r];
        row[i] = d.clone();
        rows.push(row);
    }
    let quotient_order: BigInt = Mat::from_rows(rows).snf(false, false).diag.iter().product();
    let (q, rem) = total.div_rem(&quotient_order);
    debug_assert!(rem.is_zero());
    q
}

/// Invariant factors of the generated subgroup (nontrivial ones, ascending).
pub fn subgroup_invariants(moduli: &[BigInt], gens: &[Vec<BigInt>]) -> Vec<BigInt> {
    if gens.is_empty() || moduli.is_empty() {
        return vec![];
    }
    let k = gens.len();
    let r = moduli.len();
    // relation lattice of the generating tuple: {x : sum x_j g_j = 0 in ⊕Z/d}
    let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
    for (i, d) in moduli.iter().enumerate() {
        let mut row = vec![BigInt::zero(); r];
        row[i] = d.clone();
        rows.push(row);
    }
    let stacked = Mat::from_rows(rows);
    let kernel = stacked.left_kernel();
    let proj: Vec<Vec<BigInt>> = (0..kernel.rows).map(|i| kernel.row(i)[..k].to_vec()).collect();
    assert!(!proj.is_empty(), "finite groups always have full relation rank");
    let snf = Mat::from_rows(proj).snf(false, false);
    let mut out: Vec<BigInt> =
        snf.diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    out.sort();
    out
}

fn scan_primes(k: &NumberField, bound: u64) -> Vec<u64> {
    let mut primes = arith::primes_up_to(bound);
    for (p, _) in arith::factor_bigint(&k.field_disc) {
        let p64 = p.to_u64().expect("ramified prime fits u64");
        if !primes.contains(&p64) {
            primes.push(p64);
        }
    }
    primes.sort_unstable();
    primes
}

/// Default prime bound for Pólya scans: max(100, 10 * ceil(ln|D_K|^2)).
pub fn default_polya_bound(k: &NumberField) -> u64 {
    let d = k.field_disc.to_f64().unwrap_or(f64::MAX).abs().max(2.0);
    let l = d.ln();
    100u64.max((10.0 * (l * l).ceil()) as u64)
}

/// The Pólya group of K: the subgroup of Cl(K) generated by Ostrowski
/// classes for p up to the bound, plus every ramified prime regardless of
/// the bound. `galois` is caller evidence that K/Q is Galois (degree <= 2
/// qualifies automatically); it makes ramified primes sufficient and the
/// result complete.
pub fn polya_group(
    k: &NumberField,
    cg: &ClassGroup,
    bound: u64,
    window: u32,
    galois: bool,
) -> Result<PolyaGroup, PolyaError> {
    if !cg.certified {
        return Err(PolyaError::RequiresCertifiedClassGroup);
    }
    let galois = galois || k.degree() <= 2;
    let moduli = cg.coord_moduli();
    let primes = scan_primes(k, bound);
    let mut gens: Vec<PolyaGenerator> = Vec::new();
    let mut order = BigInt::one();
    let mut history: Vec<BigInt> = Vec::new();
    for &p in &primes {
        let ramified = (&k.field_disc % BigInt::from(p)).is_zero();
        if galois && !ramified {
            // Galois and unramified: a single residue degree, so the
            // Ostrowski product is (p) and contributes nothing
            history.push(order.clone());
            continue;
        }
        let decomp = decompose_prime(k, p);
        for osk in group_by_degree(k, &decomp) {
            if osk.prime_count == decomp.len() && decomp.iter().all(|q| q.e == 1) {
                continue; // the product is exactly (p)
            }
            let coords = cg.class_coords_smoothed(k, &osk.ideal, 6, 80_000)?;
            if coords.iter().all(|c| c.is_zero()) {
                continue;
            }
            gens.push(PolyaGenerator { p, f: osk.f, coords });
            let vecs: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
            order = subgroup_order(&moduli, &vecs);
        }
        history.push(order.clone());
    }
    let w = window as usize;
    let stabilized =
        history.len() >= w && history[history.len() - w..].iter().all(|o| *o == order);
    let vecs: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
    let invariant_factors = subgroup_invariants(&moduli, &vecs);
    let check: BigInt = invariant_factors.iter().product();
    assert_eq!(check.max(BigInt::one()), order, "subgroup order must match invariants");
    Ok(PolyaGroup {
        order,
        invariant_factors,
        generators: gens,
        bound_used: bound,
        window,
        stabilized: stabilized || galois,
        certified_complete: galois,
    })
}

/// Relative Pólya group Po(L/K) inside Cl(L). The embedding is the image of
/// K's generator in L's power basis and is verified before use. Primes of L
/// are matched to the K-primes below them by containment and grouped by
/// relative residue degree.
pub fn relative_polya_group(
    l: &NumberField,
    k_sub: &NumberField,
    img: &QElem,
    cg_l: &ClassGroup,
    bound: u64,
    window: u32,
    galois_rel: bool,
) -> Result<PolyaGroup, PolyaError> {
    if !cg_l.certified {
        return Err(PolyaError::RequiresCertifiedClassGroup);
    }
    if !is_embedding(l, k_sub, img) {
        return Err(PolyaError::BadEmbedding);
    }
    let moduli = cg_l.coord_moduli();
    let primes = scan_primes(l, bound);
    let mut gens: Vec<PolyaGenerator> = Vec::new();
    let mut order = BigInt::one();
    let mut history: Vec<BigInt> = Vec::new();
    for &p in &primes {
        let decomp_l = decompose_prime(l, p);
        let decomp_k = decompose_prime(k_sub, p);
        let mut groups: std::collections::BTreeMap<(usize, u32), Vec<usize>> =
            std::collections::BTreeMap::new();
        for (mi, m) in decomp_l.iter().enumerate() {
            let below: Vec<usize> = (0..decomp_k.len())
                .filter(|&pi| prime_below(l, k_sub, img, &decomp_k[pi], m))
                .collect();
            assert_eq!(below.len(), 1, "each prime of L lies above exactly one prime of K");
            let pi = below[0];
            assert_eq!(m.f % decomp_k[pi].f, 0, "residue degrees must divide");
            groups.entry((pi, m.f / decomp_k[pi].f)).or_default().push(mi);
        }
        for ((_pi, f_rel), idxs) in groups {
            let mut ideal = FracIdeal::one(l);
            for &mi in &idxs {
                ideal = ideal.mul(l, &decomp_l[mi].ideal);
            }
            let coords = cg_l.class_coords_smoothed(l, &ideal, 6, 80_000)?;
            if coords.iter().all(|c| c.is_zero()) {
                continue;
            }
            gens.push(PolyaGenerator { p, f: f_rel, coords });
            let vecs: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
            order = subgroup_order(&moduli, &vecs);
        }
        history.push(order.clone());
    }
    let w = window as usize;
    let stabilized =
        history.len() >= w && history[history.len() - w..].iter().all(|o| *o == order);
    // complete when L/K is Galois and the scan also captures the extension
    // of all of Cl(K): every class of K contains an ideal of norm below K's
    // Minkowski bound, whose extensions are relative Ostrowski products
    let k_mb = minkowski_bound_of(k_sub).to_u64().unwrap_or(u64::MAX);
    let certified_complete = galois_rel && bound >= k_mb;
    let vecs: Vec<Vec<BigInt>> = gens.iter().map(|g| g.coords.clone()).collect();
    let invariant_factors = subgroup_invariants(&moduli, &vecs);
    let check: BigInt = invariant_factors.iter().product();
    assert_eq!(check.max(BigInt::one()), order);
    Ok(PolyaGroup {
        order,
        invariant_factors,
        generators: gens,
        bound_used: bound,
        window,
        stabilized: stabilized || certified_complete,
        certified_complete,
    })
}

/// Is the K-prime P below the L-prime M, through the embedding?
fn prime_below(
    l: &NumberField,
    k_sub: &NumberField,
    img: &QElem,
    p_k: &PrimeIdealFactor,
    m_l: &PrimeIdealFactor,
) -> bool {
    let n = p_k.ideal.num().rows;
    for i in 0..n {
        let x = p_k.ideal.num().row(i);
        let mapped = map_element(l, k_sub, img, x)
            .expect("integral elements must map to integral elements");
        if !m_l.ideal.contains(l, &mapped, &BigInt::one()) {
            return false;
        }
    }
    true
}

/// A homomorphism between class groups in SNF coordinates.
#[derive(Clone, Debug)]
pub struct ClassMap {
    /// row i = image of the i-th source SNF generator, in target coordinates
    pub matrix: Vec<Vec<BigInt>>,
    pub source_moduli: Vec<BigInt>,
    pub target_moduli: Vec<BigInt>,
    pub image_order: BigInt,
    pub kernel_order: BigInt,
}

impl ClassMap {
    /// Apply to a source coordinate vector.
    pub fn apply(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let width = self.target_moduli.len();
        let mut out = vec![BigInt::zero(); width];
        for (c, row) in coords.iter().zip(&self.matrix) {
            for (o, m) in out.iter_mut().zip(row) {
                *o += c * m;
            }
        }
        for (o, d) in out.iter_mut().zip(&self.target_moduli) {
            if !d.is_zero() {
                *o = o.mod_floor(d);
            }
        }
        out
    }

    pub fn is_zero_map(&self) -> bool {
        self.matrix.iter().flatten().all(|x| x.is_zero())
    }
}

fn map_from_prime_images(
    source: &ClassGroup,
    target_moduli: &[BigInt],
    prime_images: &[Vec<BigInt>],
) -> ClassMap {
    let src_moduli = source.coord_moduli();
    let width = target_moduli.len();
    let mut matrix = Vec::new();
    for i in 0..source.coord_width() {
        let rep = source.generator_representation(i);
        let mut img = vec![BigInt::zero(); width];
        for (e, h) in rep.iter().zip(prime_images) {
            if !e.is_zero() {
                for (o, hv) in img.iter_mut().zip(h) {
                    *o += e * hv;
                }
            }
        }
        for (o, d) in img.iter_mut().zip(target_moduli) {
            if !d.is_zero() {
                *o = o.mod_floor(d);
            }
        }
        matrix.push(img);
    }
    let source_order: BigInt = src_moduli.iter().product();
    let image_order = subgroup_order(target_moduli, &matrix);
    let kernel_order = &source_order / &image_order;
    ClassMap {
        matrix,
        source_moduli: src_moduli,
        target_moduli: target_moduli.to_vec(),
        image_order,
        kernel_order,
    }
}

/// Extension-of-ideals map ε: Cl(K) -> Cl(L) on class coordinates.
pub fn extend_class_map_epsilon(
    k_sub: &NumberField,
    l: &NumberField,
    img: &QElem,
    cg_k: &ClassGroup,
    cg_l: &ClassGroup,
) -> Result<ClassMap, PolyaError> {
    if !cg_k.certified || !cg_l.certified {
        return Err(PolyaError::RequiresCertifiedClassGroup);
    }
    if !is_embedding(l, k_sub, img) {
        return Err(PolyaError::BadEmbedding);
    }
    let mut prime_images = Vec::new();
    for q in &cg_k.factor_base {
        // P O_L is generated over O_L by the images of P's Z-basis
        let mut mapped = Vec::new();
        for i in 0..q.ideal.num().rows {
            mapped.push(
                map_element(l, k_sub, img, q.ideal.num().row(i))
                    .expect("integral image of an integral element"),
            );
        }
        let extended = FracIdeal::from_generators(l, &mapped);
        prime_images.push(cg_l.class_coords_smoothed(l, &extended, 6, 80_000)?);
    }
    Ok(map_from_prime_images(cg_k, &cg_l.coord_moduli(), &prime_images))
}

/// Ideal-norm map N: Cl(L) -> Cl(K) on class coordinates.
pub fn norm_class_map(
    l: &NumberField,
    k_sub: &NumberField,
    img: &QElem,
    cg_l: &ClassGroup,
    cg_k: &ClassGroup,
) -> Result<ClassMap, PolyaError> {
    if !cg_k.certified || !cg_l.certified {
        return Err(PolyaError::RequiresCertifiedClassGroup);
    }
    if !is_embedding(l, k_sub, img) {
        return Err(PolyaError::BadEmbedding);
    }
    let mut prime_images = Vec::new();
    for m in &cg_l.factor_base {
        let decomp_k = decompose_prime(k_sub, m.p);
        let below: Vec<usize> = (0..decomp_k.len())
            .filter(|&pi| prime_below(l, k_sub, img, &decomp_k[pi], m))
            .collect();
        assert_eq!(below.len(), 1);
        let pk = &decomp_k[below[0]];
        assert_eq!(m.f % pk.f, 0);
        let f_rel = (m.f / pk.f) as i64;
        // N_{L/K}(M) = P^{f_rel}
        let image_ideal = pk.ideal.pow(k_sub, f_rel);
        prime_images.push(cg_k.class_coords_smoothed(k_sub, &image_ideal, 6, 80_000)?);
    }
    Ok(map_from_prime_images(cg_l, &cg_k.coord_moduli(), &prime_images))
}

/// Compose two class maps (apply `first`, then `second`).
pub fn compose_maps(first: &ClassMap, second: &ClassMap) -> ClassMap {
    let matrix: Vec<Vec<BigInt>> = first.matrix.iter().map(|row| second.apply(row)).collect();
    let image_order = subgroup_order(&second.target_moduli, &matrix);
    let source_order: BigInt = first.source_moduli.iter().product();
    ClassMap {
        matrix,
        source_moduli: first.source_moduli.clone(),
        target_moduli: second.target_moduli.clone(),
        kernel_order: &source_order / &image_order,
        image_order,
    }
}

/// The multiplication-by-m endomorphism on ⊕ Z/d_i.
pub fn power_map(moduli: &[BigInt], m: i64) -> ClassMap {
    let width = moduli.len();
    let mut matrix = Vec::new();
    for i in 0..width {
        let mut row = vec![BigInt::zero(); width];
        row[i] = BigInt::from(m).mod_floor(&moduli[i]);
        matrix.push(row);
    }
    let image_order = subgroup_order(moduli, &matrix);
    let source_order: BigInt = moduli.iter().product();
    ClassMap {
        matrix,
        source_moduli: moduli.to_vec(),
        target_moduli: moduli.to_vec(),
        kernel_order: &source_order / &image_order,
        image_order,
    }
}
