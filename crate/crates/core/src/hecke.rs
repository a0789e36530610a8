//! Hecke algebras `End_G(Ind_H^G phi)` of linear characters and their
//! Wedderburn block signatures.
//!
//! The algebra is realized as functions `f` on `G` with
//! `f(h1 g h2) = phi(h1) f(g) phi(h2)`, with basis the indicator-like
//! functions of the supported double cosets, normalized to `1` at the double
//! coset representative. The left regular representation of a generic
//! element has characteristic polynomial `prod_rho chi_rho^{m_rho}` with
//! pairwise coprime square-free factors, so block sizes are read off either
//! from eigenvalue cluster sizes of a self-adjoint element (numeric route) or
//! from the square-free decomposition of the characteristic polynomial over
//! a prime field containing the `N`-th roots of unity (modular route).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{zu_character, ztu_character, LinChar, UnitCharacters};
use crate::cosets::{BorelCosets, BorelShape, CosetSpace, DoubleCosets};
use crate::error::{Error, Result};
use crate::group::{build_subgroup, principal_units, Gl2, Mat2, SubgroupKind};
use crate::modp::{addm, mulm, squarefree_decomposition, MatP, PrimeField};

const NONE: u32 = u32::MAX;

/// Relative tolerance for merging eigenvalues into one cluster.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Gaps between clusters below this multiple of the tolerance are reported
/// as ambiguous.
pub const AMBIGUITY_FACTOR: f64 = 10.0;

/// Multiset of block sizes `m -> number of blocks M_m`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct WedderburnSignature {
    pub blocks: BTreeMap<usize, usize>,
}

impl WedderburnSignature {
    pub fn from_pairs(pairs: &[(usize, usize)]) -> WedderburnSignature {
        let mut blocks = BTreeMap::new();
        for &(m, c) in pairs {
            if c > 0 {
                *blocks.entry(m).or_insert(0) += c;
            }
        }
        WedderburnSignature { blocks }
    }
    /// `sum count m^2`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|(m, c)| c * m * m).sum()
    }
    /// Largest block size.
    pub fn max_block(&self) -> usize {
        self.blocks.keys().next_back().copied().unwrap_or(0)
    }
    /// Number of blocks, i.e. distinct constituents.
    pub fn constituents(&self) -> usize {
        self.blocks.values().sum()
    }
    pub fn merge(&self, o: &WedderburnSignature) -> WedderburnSignature {
        let mut b = self.blocks.clone();
        for (m, c) in &o.blocks {
            *b.entry(*m).or_insert(0) += c;
        }
        WedderburnSignature { blocks: b }
    }
    pub fn is_multiplicity_free(&self) -> bool {
        self.blocks.keys().all(|&m| m == 1)
    }
    /// Text form such as `1x5 + 2x2` (count before the block size: `5 C + 2 M_2`).
    pub fn describe(&self) -> String {
        if self.blocks.is_empty() {
            return "0".into();
        }
        self.blocks.iter().map(|(m, c)| format!("{c}xM{m}")).collect::<Vec<_>>().join(" + ")
    }
}

/// The Hecke algebra of `(H, phi)`.
pub struct HeckeAlgebra {
    g: Gl2,
    cosets: Box<dyn CosetSpace>,
    phi: LinChar,
    /// Representatives `g_d` of the supported double cosets.
    pub basis_reps: Vec<Mat2>,
    /// Number of left cosets in each supported double coset.
    pub basis_sizes: Vec<usize>,
    /// Number of all double cosets `H\G/H`.
    pub double_coset_count: usize,
    coset_basis: Vec<u32>,
    coset_phase: Vec<u32>,
    inv_term: Vec<(u32, u32)>,
    star: Vec<(u32, u32)>,
}

impl HeckeAlgebra {
    /// Builds the algebra from a coset space of `H`, generators of `H` and
    /// a linear character of `H`.
    pub fn build(g: &Gl2, cosets: Box<dyn CosetSpace>, h_gens: &[Mat2], phi: LinChar) -> Result<HeckeAlgebra> {
        let n = phi.conductor();
        let dcs = DoubleCosets::compute(g, cosets.as_ref(), h_gens, Some((&phi, &phi)));
        let mut dc_basis = vec![NONE; dcs.len()];
        let mut basis_reps = Vec::new();
        let mut basis_sizes = Vec::new();
        for d in 0..dcs.len() {
            if dcs.supported[d] {
                dc_basis[d] = basis_reps.len() as u32;
                basis_reps.push(dcs.reps[d]);
                basis_sizes.push(dcs.sizes[d]);
            }
        }
        let mut coset_basis = vec![NONE; cosets.len()];
        let mut coset_phase = vec![0u32; cosets.len()];
        for i in 0..cosets.len() {
            let d = dcs.orbit_of[i] as usize;
            if dc_basis[d] == NONE {
                continue;
            }
            coset_basis[i] = dc_basis[d];
            let k = dcs.transporter[i];
            let gd = dcs.reps[d];
            let h2 = g.mul(&g.mul(&g.inv(&gd), &g.inv(&k)), cosets.rep(i));
            coset_phase[i] = (phi.exp(&k) + phi.exp(&h2)) % n;
        }
        let mut alg = HeckeAlgebra {
            g: g.clone(),
            cosets,
            phi,
            basis_reps,
            basis_sizes,
            double_coset_count: dcs.len(),
            coset_basis,
            coset_phase,
            inv_term: Vec::new(),
            star: Vec::new(),
        };
        alg.inv_term = (0..alg.cosets.len())
            .map(|j| alg.value(&g.inv(alg.cosets.rep(j))).map(|(b, e)| (b as u32, e)).unwrap_or((NONE, 0)))
            .collect();
        alg.star = alg
            .basis_reps
            .iter()
            .map(|gd| {
                let (b, e) = alg.value(&g.inv(gd)).expect("inverse of a supported double coset is supported");
                (b as u32, e)
            })
            .collect();
        Ok(alg)
    }

    /// `End_G(Ind_{ZU}^G chi (x) psi_t)`.
    pub fn dgg(g: &Gl2, chars: &UnitCharacters, chi: usize, t: u32) -> Result<HeckeAlgebra> {
        let ell = g.ring().ell();
        if t > ell {
            return Err(Error::BadParam(format!("t = {t} exceeds l = {ell}")));
        }
        let cosets = BorelCosets::new(g, BorelShape::ZtU(ell))?;
        let h = zu_generators(g);
        HeckeAlgebra::build(g, Box::new(cosets), &h, zu_character(g, chars, chi, t))
    }

    /// `End_G(Ind_{Z^t U}^G (chi, chi', psi_t))`, where `chi'` indexes the
    /// characters of `1 + w^t o`.
    pub fn w_module(g: &Gl2, chars: &UnitCharacters, chi: usize, chi2: usize, t: u32) -> Result<HeckeAlgebra> {
        let wchars = UnitCharacters::of_subgroup(g.ring(), &principal_units(g.ring(), t), g.conductor())?;
        let cosets = BorelCosets::new(g, BorelShape::ZtU(t))?;
        let h = build_subgroup(g, &SubgroupKind::ZtU(t))?;
        HeckeAlgebra::build(g, Box::new(cosets), h.generators(), ztu_character(g, chars, chi, &wchars, chi2, t))
    }

    pub fn dim(&self) -> usize {
        self.basis_reps.len()
    }
    /// `[G:H]`, the dimension of the induced module.
    pub fn module_dim(&self) -> usize {
        self.cosets.len()
    }
    pub fn conductor(&self) -> u32 {
        self.phi.conductor()
    }

    /// Basis index and value exponent of the basis function whose support
    /// contains `x`, or `None` outside the support.
    pub fn value(&self, x: &Mat2) -> Option<(usize, u32)> {
        let (i, h2) = self.cosets.locate(x);
        let b = self.coset_basis[i];
        if b == NONE {
            return None;
        }
        Some((b as usize, (self.coset_phase[i] + self.phi.exp(&h2)) % self.conductor()))
    }

    /// Visits every term of the left regular representation: the matrix of
    /// left multiplication by `f_d` has entry `zeta^e` added at `(c, b)` for
    /// each visited `(c, b, d, e)`.
    pub fn for_each_term(&self, mut f: impl FnMut(usize, usize, usize, u32)) {
        let n = self.conductor();
        for (c, gc) in self.basis_reps.iter().enumerate() {
            for j in 0..self.cosets.len() {
                let (b, ve) = self.inv_term[j];
                if b == NONE {
                    continue;
                }
                if let Some((d, e)) = self.value(&self.g.mul(gc, self.cosets.rep(j))) {
                    f(c, b as usize, d, (e + ve) % n);
                }
            }
        }
    }

    /// Coefficients of `y*` for `y = sum y_d f_d`, given a conjugation.
    fn star_coeffs<T: Clone>(&self, y: &[T], conj_times_root: impl Fn(&T, u32) -> T, zero: T, add: impl Fn(&T, &T) -> T) -> Vec<T> {
        let mut out = vec![zero; y.len()];
        for (d, yd) in y.iter().enumerate() {
            let (dp, e) = self.star[d];
            let n = self.conductor();
            let term = conj_times_root(yd, (n - e) % n);
            out[dp as usize] = add(&out[dp as usize], &term);
        }
        out
    }

    /// Left regular matrix of `x = sum x_d f_d` as complex numbers.
    pub fn left_matrix_complex(&self, x: &[Complex64]) -> DMatrix<Complex64> {
        let dim = self.dim();
        let n = self.conductor();
        let roots: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        self.for_each_term(|c, b, d, e| {
            m[(c, b)] += x[d] * roots[e as usize];
        });
        m
    }

    /// Left regular matrix of `x` over `F_P`.
    pub fn left_matrix_modp(&self, x: &[u64], field: &PrimeField) -> MatP {
        let dim = self.dim();
        let p = field.p;
        let mut m = MatP::zeros(dim);
        self.for_each_term(|c, b, d, e| {
            let v = mulm(x[d], field.root(e), p);
            m.a[c * dim + b] = addm(m.a[c * dim + b], v, p);
        });
        m
    }

    /// Block signature from eigenvalue clusters of a random self-adjoint element.
    pub fn signature_numeric(&self, seed: u64) -> Result<WedderburnSignature> {
        let mut last = None;
        for attempt in 0..3u64 {
            match self.signature_numeric_once(seed.wrapping_mul(0x9e37_79b9).wrapping_add(attempt)) {
                Ok(s) => return Ok(s),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    fn signature_numeric_once(&self, seed: u64) -> Result<WedderburnSignature> {
        let dim = self.dim();
        if dim == 0 {
            return Ok(WedderburnSignature::default());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<Complex64> = (0..dim).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let n = self.conductor();
        let ys = self.star_coeffs(
            &y,
            |v, e| v.conj() * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / n as f64),
            Complex64::new(0.0, 0.0),
            |a, b| a + b,
        );
        let x: Vec<Complex64> = y.iter().zip(&ys).map(|(a, b)| a + b).collect();
        let mut m = self.left_matrix_complex(&x);
        // similarity by diag(sqrt(size)) makes the matrix Hermitian
        for c in 0..dim {
            for b in 0..dim {
                let s = (self.basis_sizes[c] as f64 / self.basis_sizes[b] as f64).sqrt();
                m[(c, b)] *= s;
            }
        }
        let herm_err = (&m - m.adjoint()).norm() / (1.0 + m.norm());
        if herm_err > 1e-9 {
            return Err(Error::DegenerateSpectrum(format!("left multiplication is not self-adjoint (error {herm_err:.2e})")));
        }
        let m = (&m + m.adjoint()).scale(0.5);
        let eig = nalgebra::SymmetricEigen::new(m);
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        let scale = ev.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
        let tol = CLUSTER_TOL * scale;
        let mut sizes = Vec::new();
        let mut run = 1usize;
        for w in ev.windows(2) {
            let gap = w[1] - w[0];
            if gap <= tol {
                run += 1;
            } else {
                if gap < AMBIGUITY_FACTOR * tol {
                    return Err(Error::DegenerateSpectrum(format!("gap {gap:.3e} close to tolerance {tol:.3e}")));
                }
                sizes.push(run);
                run = 1;
            }
        }
        sizes.push(run);
        let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
        for s in sizes {
            *by_size.entry(s).or_insert(0) += 1;
        }
        let mut pairs = Vec::new();
        for (m, c) in by_size {
            if c % m != 0 {
                return Err(Error::DegenerateSpectrum(format!("{c} clusters of size {m}")));
            }
            pairs.push((m, c / m));
        }
        Ok(WedderburnSignature::from_pairs(&pairs))
    }

    /// Block signature from the square-free decomposition of the
    /// characteristic polynomial of a random element over `F_P`.
    pub fn signature_modp(&self, seed: u64) -> Result<WedderburnSignature> {
        let dim = self.dim();
        if dim == 0 {
            return Ok(WedderburnSignature::default());
        }
        let field = PrimeField::new(self.conductor() as u64, (seed % 3) as usize);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let x: Vec<u64> = (0..dim).map(|_| rng.random_range(1..field.p)).collect();
        let m = self.left_matrix_modp(&x, &field);
        let cp = m.charpoly(field.p);
        let mut pairs = Vec::new();
        for (i, a) in squarefree_decomposition(&cp, field.p).iter().enumerate() {
            let k = i + 1;
            let deg = a.len().saturating_sub(1);
            if deg % k != 0 {
                return Err(Error::DegenerateSpectrum(format!("square-free part of degree {deg} at multiplicity {k}")));
            }
            pairs.push((k, deg / k));
        }
        Ok(WedderburnSignature::from_pairs(&pairs))
    }

    /// Signature confirmed by both routes and two seeds each.
    pub fn signature(&self, seed: u64) -> Result<WedderburnSignature> {
        let s = self.signature_modp(seed)?;
        let s2 = self.signature_modp(seed + 1)?;
        let n1 = self.signature_numeric(seed)?;
        let n2 = self.signature_numeric(seed + 1)?;
        if s != s2 || s != n1 || s != n2 {
            return Err(Error::DegenerateSpectrum(format!(
                "routes disagree: modular {} / {}, numeric {} / {}",
                s.describe(),
                s2.describe(),
                n1.describe(),
                n2.describe()
            )));
        }
        if s.dim() != self.dim() {
            return Err(Error::DegenerateSpectrum(format!("sum of squares {} != dim {}", s.dim(), self.dim())));
        }
        Ok(s)
    }

    /// Modular-route signature from two independent seeds and primes, for
    /// algebras too large for the dense numeric eigensolver.
    pub fn signature_modp_checked(&self, seed: u64) -> Result<WedderburnSignature> {
        let s = self.signature_modp(seed)?;
        let s2 = self.signature_modp(seed + 1)?;
        if s != s2 || s.dim() != self.dim() {
            return Err(Error::DegenerateSpectrum(format!("modular seeds disagree: {} / {}", s.describe(), s2.describe())));
        }
        Ok(s)
    }
}

/// `a(t, l)` with the signatures it was computed from.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub t: u32,
    pub ell: u32,
    pub bound: usize,
    /// `(chi index, signature of End(V^t_chi))`.
    pub per_chi: Vec<(usize, WedderburnSignature)>,
}

/// Multiplicity bound of `V^t`: the largest block of `End(V^t_chi)` over the
/// given central characters (all of them when `chis` is `None`).
pub fn a_bound(g: &Gl2, t: u32, chis: Option<&[usize]>, seed: u64) -> Result<BoundReport> {
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let all: Vec<usize> = (0..chars.count()).collect();
    let chis = chis.unwrap_or(&all);
    let mut per_chi = Vec::with_capacity(chis.len());
    for &chi in chis {
        if chi >= chars.count() {
            return Err(Error::BadIndex(format!("central character {chi} of {}", chars.count())));
        }
        per_chi.push((chi, HeckeAlgebra::dgg(g, &chars, chi, t)?.signature(seed)?));
    }
    let bound = per_chi.iter().map(|(_, s)| s.max_block()).max().unwrap_or(0);
    Ok(BoundReport { t, ell: g.ring().ell(), bound, per_chi })
}

/// Per block size: computed count against both predicted counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockVerdict {
    pub m: usize,
    pub computed: usize,
    pub printed: usize,
    pub per_character: usize,
}

/// Computed `End(V^t_chi)` compared with the closed-form predictions.
#[derive(Clone, Debug, Serialize)]
pub struct EndoReport {
    pub t: u32,
    pub ell: u32,
    pub chi: usize,
    pub square: bool,
    pub computed: WedderburnSignature,
    pub printed: Option<WedderburnSignature>,
    pub per_character: Option<WedderburnSignature>,
    pub blocks: Vec<BlockVerdict>,
    /// Characters `chi_bar` of `o_{l-1}^x` for which the computed algebra is
    /// `End(V^t_chi_bar) + (regular blocks)`; `None` when there is no
    /// recursion (`t = l` or `l = 1`) or `l > 4`.
    pub matching_lower: Option<Vec<usize>>,
}

impl EndoReport {
    pub fn matches_printed(&self) -> Option<bool> {
        self.printed.as_ref().map(|p| *p == self.computed)
    }
    pub fn matches_per_character(&self) -> Option<bool> {
        self.per_character.as_ref().map(|p| *p == self.computed)
    }
}

/// Computes `End(V^t_chi)` and compares it with the predictions at this `q`.
pub fn endo_report(g: &Gl2, chi: usize, t: u32, seed: u64) -> Result<EndoReport> {
    use crate::formulas::{endo_new_part, endo_prediction, Reading};
    let ring = g.ring();
    let (q, ell) = (ring.q() as u64, ring.ell());
    let chars = UnitCharacters::new(ring, g.conductor())?;
    if chi >= chars.count() {
        return Err(Error::BadIndex(format!("central character {chi} of {}", chars.count())));
    }
    let square = chars.is_square(chi);
    let computed = HeckeAlgebra::dgg(g, &chars, chi, t)?.signature(seed)?;
    let predict = |r| if ell <= 4 { endo_prediction(q, ell, t, square, r).ok() } else { None };
    let printed = predict(Reading::AsPrinted);
    let per_character = predict(Reading::PerCharacter);
    let mut sizes: Vec<usize> = computed.blocks.keys().copied().collect();
    for p in printed.iter().chain(per_character.iter()) {
        sizes.extend(p.blocks.keys().copied());
    }
    sizes.sort_unstable();
    sizes.dedup();
    let count = |s: &Option<WedderburnSignature>, m: usize| s.as_ref().and_then(|s| s.blocks.get(&m).copied()).unwrap_or(0);
    let blocks = sizes
        .into_iter()
        .map(|m| BlockVerdict {
            m,
            computed: computed.blocks.get(&m).copied().unwrap_or(0),
            printed: count(&printed, m),
            per_character: count(&per_character, m),
        })
        .collect();
    let matching_lower = if t < ell && (2..=4).contains(&ell) {
        let new = endo_new_part(q, ell, t, Reading::PerCharacter)?;
        let lower = g.at_level(ell - 1)?;
        let lower_chars = UnitCharacters::new(lower.ring(), lower.conductor())?;
        let mut found = Vec::new();
        for cb in 0..lower_chars.count() {
            let s = HeckeAlgebra::dgg(&lower, &lower_chars, cb, t)?.signature(seed)?;
            if s.merge(&new) == computed {
                found.push(cb);
            }
        }
        Some(found)
    } else {
        None
    };
    Ok(EndoReport { t, ell, chi, square, computed, printed, per_character, blocks, matching_lower })
}

/// Generators of `ZU`.
pub fn zu_generators(g: &Gl2) -> Vec<Mat2> {
    let r = g.ring();
    let mut h: Vec<Mat2> = crate::group::unit_generators(r).into_iter().map(|u| g.scalar(u)).collect();
    h.extend(crate::group::additive_generators(r).into_iter().map(|u| g.e12(u)));
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Flavor, Ring};

    #[test]
    fn gelfand_graev_is_multiplicity_free_at_length_two() {
        let g = Gl2::new(&Ring::new(3, 2, Flavor::Zmod).unwrap()).unwrap();
        let ch = UnitCharacters::new(g.ring(), g.conductor()).unwrap();
        let mut total = WedderburnSignature::default();
        for chi in 0..ch.count() {
            let h = HeckeAlgebra::dgg(&g, &ch, chi, 2).unwrap();
            assert_eq!(h.module_dim(), 72);
            let s = h.signature(0).unwrap();
            assert!(s.is_multiplicity_free());
            total = total.merge(&s);
        }
        assert_eq!(total.blocks, BTreeMap::from([(1, 54)]));
    }

    #[test]
    fn length_one_signatures() {
        let g = Gl2::new(&Ring::new(3, 1, Flavor::Zmod).unwrap()).unwrap();
        let ch = UnitCharacters::new(g.ring(), g.conductor()).unwrap();
        for chi in 0..ch.count() {
            let s0 = HeckeAlgebra::dgg(&g, &ch, chi, 0).unwrap().signature(3).unwrap();
            if ch.is_square(chi) {
                assert_eq!(s0.blocks, BTreeMap::from([(1, 4)]));
            } else {
                assert_eq!(s0.blocks, BTreeMap::from([(2, 1)]));
            }
            let s1 = HeckeAlgebra::dgg(&g, &ch, chi, 1).unwrap().signature(3).unwrap();
            assert_eq!(s1.blocks, BTreeMap::from([(1, 3)]));
        }
    }

    #[test]
    fn trivial_algebra() {
        let g = Gl2::new(&Ring::new(3, 1, Flavor::Zmod).unwrap()).unwrap();
        let whole = build_subgroup(&g, &SubgroupKind::B).unwrap();
        let cosets = crate::cosets::TableCosets::new(&g, &whole).unwrap();
        let h = HeckeAlgebra::build(&g, Box::new(cosets), whole.generators(), LinChar::trivial(g.conductor())).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.signature(0).unwrap().blocks, BTreeMap::from([(1, 2)]));
    }

    #[test]
    fn bounds_and_predictions_at_q_five() {
        let g = Gl2::new(&Ring::new(5, 2, Flavor::Zmod).unwrap()).unwrap();
        let ch = UnitCharacters::new(g.ring(), g.conductor()).unwrap();
        let want = [4, 2, 1];
        for t in 0..=2u32 {
            let b = a_bound(&g, t, Some(&[0, 1, 2, 3]), 0).unwrap();
            assert_eq!(b.bound, want[t as usize], "t = {t}");
            for (chi, sig) in &b.per_chi {
                let pred = crate::formulas::endo_prediction(5, 2, t, ch.is_square(*chi), crate::formulas::Reading::PerCharacter).unwrap();
                assert_eq!(*sig, pred, "t = {t}, chi = {chi}");
            }
        }
    }
}
