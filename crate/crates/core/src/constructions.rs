//! Explicit regular irreducibles of `GL_2(o_l)` as induced characters:
//! split semisimple ones by Borel induction, split non-semisimple ones (odd
//! `l`) from `N C(A)`, and all regular ones for even `l` from `S_x`.
//! Also the multiplicity-one check for `U_A K^{l2}` inside `U_A K^{l1}`.

use std::sync::Arc;

use serde::Serialize;

use crate::characters::{borel_pair, extensions_over_abelian, psi_a_prime, psi_t, psi_x, LinChar, UnitCharacters};
use crate::classes::{ClassData, FiniteGroup};
use crate::classfn::ClassFunction;
use crate::cosets::SubsetCosets;
use crate::error::{Error, Result};
use crate::group::{build_subgroup, classify_matrix, Gl2, Mat2, MatrixType, Subgroup, SubgroupKind};
use crate::mackey::{dgg_module, mackey_hom_with, nonregular_part, InducedModule};
use crate::ring::Elem;

/// `Ind_B^G (chi_1, chi_2)` for a pair with `chi_1 chi_2^{-1}` injective.
pub fn ss_from_borel(g: &Gl2, chars: &UnitCharacters, c1: usize, c2: usize) -> Result<InducedModule> {
    if !chars.is_injective(chars.combine(c1, 1, c2, -1)) {
        return Err(Error::NotInjectivePair);
    }
    Ok(InducedModule::new(build_subgroup(g, &SubgroupKind::B)?, borel_pair(g, chars, c1, c2)))
}

/// `A = (alpha 1; w^j beta alpha)`.
pub fn sns_matrix(g: &Gl2, alpha: Elem, beta: Elem, j: u32) -> Mat2 {
    let r = g.ring();
    [alpha, 1, r.mul(r.pi_pow(j), beta), alpha]
}

fn require_odd(g: &Gl2) -> Result<()> {
    let ell = g.ring().ell();
    if ell.is_multiple_of(2) || ell < 3 {
        return Err(Error::BadParam(format!("needs odd l >= 3, got l = {ell}")));
    }
    Ok(())
}

/// `Ind_{N C(A)}^G psi''_A` for every extension `psi''_A` of
/// `psi'_A = psi(n_c + w^j beta n_b) mu(det n)` from `N` to `N C(A)`, where
/// `A = (alpha 1; w^j beta alpha)` and `mu` restricts to
/// `1 + w^{l2} x -> psi(w^{l2} alpha x)`.
pub fn sns_from_nca(g: &Gl2, chars: &UnitCharacters, alpha: Elem, beta: Elem, j: u32, mu: usize) -> Result<Vec<InducedModule>> {
    require_odd(g)?;
    let r = g.ring();
    if j == 0 || j > r.ell2() {
        return Err(Error::BadShape(format!("j = {j} outside 1..={}", r.ell2())));
    }
    if !chars.with_restriction(r.ell2(), alpha).contains(&mu) {
        return Err(Error::BadParam(format!("mu = {mu} does not restrict to delta_alpha")));
    }
    let a = sns_matrix(g, alpha, beta, j);
    let n = build_subgroup(g, &SubgroupKind::N(j))?;
    let c = build_subgroup(g, &SubgroupKind::Centralizer(a))?;
    let nc = build_subgroup(g, &SubgroupKind::NCA(a, j))?;
    let phi = psi_a_prime(g, beta, j, chars, mu);
    let exts = extensions_over_abelian(g, &n, &phi, &c)?;
    Ok(exts.into_iter().map(|e| InducedModule::new(nc.clone(), e)).collect())
}

/// One split non-semisimple character with the parameters that produced it.
#[derive(Clone, Debug)]
pub struct SnsCharacter {
    pub alpha: Elem,
    pub beta: Elem,
    pub j: u32,
    pub mu: usize,
    /// Index among the extensions of `psi'_A` with central character `chi`.
    pub ext: usize,
    pub character: ClassFunction,
}

/// The distinct characters `Ind_{N C(A)} psi''_A` with central character
/// `chi`, over all `beta` mod `w^{l1}`, `1 <= j <= l2`, admissible `mu` and
/// all extensions. `alpha` is fixed mod `w^{l1}` by `2 alpha = lambda_chi`.
pub fn sns_family(classes: &Arc<ClassData>, chars: &UnitCharacters, chi: usize) -> Result<Vec<SnsCharacter>> {
    let g = classes.gl2();
    require_odd(g)?;
    let r = g.ring();
    let (l1, l2) = (r.ell1(), r.ell2());
    let bound = r.p().pow(l1) as Elem;
    let lambda = chars.lambda_of(chi)?;
    let two_inv = r.inv(r.from_int(2))?;
    let alpha = r.lift(r.project(r.mul(two_inv, lambda), l1)?, l1)?;
    let z = build_subgroup(g, &SubgroupKind::Z)?;
    let on_center = |e: &LinChar| z.elements().iter().all(|m| e.exp(m) == chars.exp(chi, m[0]));
    let mut out: Vec<SnsCharacter> = Vec::new();
    for j in 1..=l2 {
        for beta in 0..bound {
            for mu in chars.with_restriction(l2, alpha) {
                let mods = sns_from_nca(g, chars, alpha, beta, j, mu)?;
                for (ext, m) in mods.into_iter().filter(|m| on_center(&m.phi)).enumerate() {
                    let character = m.character(classes)?;
                    if out.iter().all(|s| s.character != character) {
                        out.push(SnsCharacter { alpha, beta, j, mu, ext, character });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The distinct `Ind_B (chi_1, chi_2)` with `chi_1 chi_2 = chi`, one per
/// unordered injective pair, as `((chi_1, chi_2), character)`.
pub fn ss_family(classes: &Arc<ClassData>, chars: &UnitCharacters, chi: usize) -> Result<Vec<((usize, usize), ClassFunction)>> {
    let g = classes.gl2();
    let mut out: Vec<((usize, usize), ClassFunction)> = Vec::new();
    for c1 in 0..chars.count() {
        let c2 = chars.combine(chi, 1, c1, -1);
        if c2 < c1 {
            continue;
        }
        match ss_from_borel(g, chars, c1, c2) {
            Err(Error::NotInjectivePair) => continue,
            Err(e) => return Err(e),
            Ok(m) => out.push(((c1, c2), m.character(classes)?)),
        }
    }
    Ok(out)
}

/// `V^t_chi` split against explicitly constructed regular characters.
#[derive(Clone, Debug, Serialize)]
pub struct RegularDecomposition {
    pub t: u32,
    pub chi: usize,
    pub dim: i64,
    pub nonregular_dim: i64,
    /// Multiplicity of each Borel-induced character of [`ss_family`].
    pub ss: Vec<i64>,
    /// Multiplicity of each character of [`sns_family`].
    pub sns: Vec<i64>,
    /// Degree of what is left after removing the non-regular, ss and sns parts.
    pub remaining_dim: i64,
    /// Whether that remainder is identically zero.
    pub remainder_vanishes: bool,
}

/// Decomposes `V^t_chi` (odd `l >= 3`) into its non-regular part and the
/// constructed ss and sns characters with central character `chi`.
pub fn regular_decomposition(
    classes: &Arc<ClassData>,
    chars: &UnitCharacters,
    chi: usize,
    t: u32,
    ss: &[((usize, usize), ClassFunction)],
    sns: &[SnsCharacter],
) -> Result<RegularDecomposition> {
    let g = classes.gl2();
    let v = dgg_module(g, chars, chi, t)?.character(classes)?;
    let nonreg = nonregular_part(&v)?;
    let mut rest = v.add(&nonreg.scale(-1));
    let mut take = |rho: &ClassFunction| -> Result<i64> {
        let m = rest.inner_int(rho)?;
        rest = rest.add(&rho.scale(-m));
        Ok(m)
    };
    let ss_m = ss.iter().map(|(_, c)| take(c)).collect::<Result<Vec<_>>>()?;
    let sns_m = sns.iter().map(|s| take(&s.character)).collect::<Result<Vec<_>>>()?;
    let degree = |f: &ClassFunction| f.degree().ok_or_else(|| Error::NoSolution("degree".into()));
    let remaining_dim = degree(&rest)?;
    Ok(RegularDecomposition {
        t,
        chi,
        dim: degree(&v)?,
        nonregular_dim: degree(&nonreg)?,
        ss: ss_m,
        sns: sns_m,
        remaining_dim,
        remainder_vanishes: rest == ClassFunction::zero(classes),
    })
}

/// `Ind_{S_x}^G psi~_x` for every extension `psi~_x` of `psi_x` from
/// `K^{l/2}` to `S_x = C(x~) K^{l/2}`, for `x` over `o_{l/2}` (given by its
/// canonical lift) and `l` even.
pub fn regular_even_from_sa(g: &Gl2, x: &Mat2) -> Result<Vec<InducedModule>> {
    let r = g.ring();
    let ell = r.ell();
    if ell % 2 == 1 {
        return Err(Error::BadParam(format!("needs even l, got l = {ell}")));
    }
    let half = ell / 2;
    if classify_matrix(r, &g.project_mat(x, 1)) == MatrixType::NonRegular {
        return Err(Error::NotRegular);
    }
    let x = g.project_mat(x, half);
    let k = build_subgroup(g, &SubgroupKind::K(half))?;
    let c = build_subgroup(g, &SubgroupKind::Centralizer(x))?;
    let mut elems = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for a in c.elements() {
        for b in k.elements() {
            let m = g.mul(a, b);
            if seen.insert(g.key(&m)) {
                elems.push(m);
            }
        }
    }
    let sx = Subgroup::from_elements(g, "S_x", elems, None)?;
    let phi = psi_x(g, &x, half);
    Ok(extensions_over_abelian(g, &k, &phi, &c)?.into_iter().map(|e| InducedModule::new(sx.clone(), e)).collect())
}

/// Intertwining numbers of `Ind_{U_A K^{l2}}^{U_A K^{l1}} phi` with itself,
/// one per extension `phi` of `psi_A` to `U_A K^{l2}`.
#[derive(Clone, Debug, Serialize)]
pub struct MultFreeCheck {
    pub q: u32,
    pub t: u32,
    pub double_cosets: usize,
    pub intertwiners: Vec<i64>,
    /// The same numbers as norms of the induced class functions on `U_A K^{l1}`.
    pub norms: Vec<i64>,
    /// Whether each extension agrees with `psi_t` on `U ∩ U_A`.
    pub extends_psi_t: Vec<bool>,
}

impl MultFreeCheck {
    /// Every extension of `psi_A` that also extends `psi_t` has intertwiner `q`.
    pub fn holds(&self) -> bool {
        let over: Vec<i64> = self.intertwiners.iter().zip(&self.extends_psi_t).filter(|(_, &e)| e).map(|(&v, _)| v).collect();
        !over.is_empty() && over.iter().all(|&v| v == self.q as i64)
    }
    /// Every extension of `psi_A` has intertwiner `q`.
    pub fn holds_for_all(&self) -> bool {
        !self.intertwiners.is_empty() && self.intertwiners.iter().all(|&v| v == self.q as i64)
    }
    /// The Mackey sum and the character norm agree for every extension.
    pub fn routes_agree(&self) -> bool {
        self.intertwiners == self.norms
    }
    /// Every intertwiner lies in `[q, q^2]`.
    pub fn within_bounds(&self) -> bool {
        let q = self.q as i64;
        self.intertwiners.iter().all(|&v| (q..=q * q).contains(&v))
    }
}

/// For odd `l` and a split non-semisimple `A` over `o_{l1}` (given by its
/// canonical lift), `psi_A` is a character of `K^{l2}`. With `U_A` the
/// stabilizer of `psi_A` in `Z U`, computes `<Ind phi, Ind phi>` over
/// `U_A K^{l1}` for each extension `phi` of `psi_A` to `U_A K^{l2}`.
/// The lower left entry of `A` must be `w^{l-t}` mod `w^{l1}` with `t >= l2`.
pub fn check_mult_free_restriction(g: &Gl2, a: &Mat2, t: u32) -> Result<MultFreeCheck> {
    require_odd(g)?;
    let r = g.ring();
    let (l1, l2) = (r.ell1(), r.ell2());
    if t < l2 || t > r.ell() {
        return Err(Error::BadParam(format!("t = {t} outside {l2}..={}", r.ell())));
    }
    if r.project(a[2], l1)? != r.project(r.pi_pow(r.ell() - t), l1)? {
        return Err(Error::BadShape(format!("lower left entry of {} is not w^{}", g.format_mat(a), r.ell() - t)));
    }
    if classify_matrix(r, &g.project_mat(a, 1)) != MatrixType::SplitNonSemisimple {
        return Err(Error::BadShape(format!("{} is not split non-semisimple", g.format_mat(a))));
    }
    let a = g.project_mat(a, l1);
    let psi_a = psi_x(g, &a, l1);
    let k1 = build_subgroup(g, &SubgroupKind::K(l1))?;
    let k2 = build_subgroup(g, &SubgroupKind::K(l2))?;
    let zu = build_subgroup(g, &SubgroupKind::ZU)?;
    let fixes = |x: &Mat2| k2.generators().iter().all(|k| psi_a.exp(&g.conj(x, k)) == psi_a.exp(k));
    let ua = Subgroup::from_elements(g, "U_A", zu.elements().iter().filter(|x| fixes(x)).copied().collect(), None)?;
    let product = |k: &Subgroup, name: &str| -> Result<Subgroup> {
        let mut seen = std::collections::HashSet::new();
        let mut elems = Vec::new();
        for u in ua.elements() {
            for x in k.elements() {
                let m = g.mul(u, x);
                if seen.insert(g.key(&m)) {
                    elems.push(m);
                }
            }
        }
        Subgroup::from_elements(g, name, elems, None)
    };
    let h = product(&k2, "U_A K^l2")?;
    let l = product(&k1, "U_A K^l1")?;
    let cosets = SubsetCosets::new(g, &l, &h)?;
    let phis = extensions_over_abelian(g, &k2, &psi_a, &ua)?;
    let pt = psi_t(g, t);
    let unip: Vec<Mat2> = ua.elements().iter().filter(|m| m[0] == 1 && m[2] == 0 && m[3] == 1).copied().collect();
    let mut intertwiners = Vec::with_capacity(phis.len());
    let mut extends_psi_t = Vec::with_capacity(phis.len());
    let mut norms = Vec::with_capacity(phis.len());
    let mut double_cosets = 0;
    let lc = ClassData::new(FiniteGroup::subgroup(g, &l));
    for phi in &phis {
        let m = mackey_hom_with(g, &h, phi, &h, phi, &cosets)?;
        double_cosets = m.double_cosets;
        intertwiners.push(m.total);
        let ind = ClassFunction::induced(&lc, &h, phi)?;
        norms.push(ind.inner_int(&ind)?);
        extends_psi_t.push(unip.iter().all(|u| phi.exp(u) == pt.exp(u)));
    }
    Ok(MultFreeCheck { q: r.q(), t, double_cosets, intertwiners, norms, extends_psi_t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::Classifier;
    use crate::ring::{Flavor, Ring};

    fn setup(ell: u32) -> (Gl2, Arc<ClassData>, UnitCharacters) {
        let g = Gl2::new(&Ring::new(3, ell, Flavor::Zmod).unwrap()).unwrap();
        let cd = ClassData::new(FiniteGroup::whole(&g).unwrap());
        let chars = UnitCharacters::new(g.ring(), g.conductor()).unwrap();
        (g, cd, chars)
    }

    #[test]
    fn borel_induction_at_length_two() {
        let (g, cd, chars) = setup(2);
        let cl = Classifier::new(&g).unwrap();
        let mut distinct: Vec<ClassFunction> = Vec::new();
        for c1 in 0..chars.count() {
            for c2 in 0..chars.count() {
                match ss_from_borel(&g, &chars, c1, c2) {
                    Err(e) => assert_eq!(e, Error::NotInjectivePair),
                    Ok(m) => {
                        let ch = m.character(&cd).unwrap();
                        assert_eq!(ch.inner_int(&ch).unwrap(), 1);
                        assert_eq!(cl.classify(&ch).unwrap().1, MatrixType::SplitSemisimple);
                        let swapped = ss_from_borel(&g, &chars, c2, c1).unwrap().character(&cd).unwrap();
                        assert!(swapped == ch);
                        if !distinct.contains(&ch) {
                            distinct.push(ch);
                        }
                    }
                }
            }
        }
        assert_eq!(distinct.len(), 12);
        assert!(distinct.iter().all(|c| c.degree() == Some(12)));
    }

    #[test]
    fn even_length_regular_from_stabilizer() {
        let (g, cd, _) = setup(2);
        let cl = Classifier::new(&g).unwrap();
        // x = (0 1; -1 0) has irreducible characteristic polynomial over F_3
        let r = g.ring();
        let cus = [0, 1, r.neg(1), 0];
        let mods = regular_even_from_sa(&g, &cus).unwrap();
        assert!(!mods.is_empty());
        for m in &mods {
            let ch = m.character(&cd).unwrap();
            assert_eq!(ch.degree(), Some(6));
            assert_eq!(ch.inner_int(&ch).unwrap(), 1);
            assert_eq!(cl.classify(&ch).unwrap().1, MatrixType::Cuspidal);
        }
        let chars = UnitCharacters::new(r, g.conductor()).unwrap();
        let borel: Vec<ClassFunction> = (0..chars.count())
            .flat_map(|c1| (0..chars.count()).map(move |c2| (c1, c2)))
            .filter_map(|(c1, c2)| ss_from_borel(&g, &chars, c1, c2).ok())
            .map(|m| m.character(&cd).unwrap())
            .collect();
        let ss = regular_even_from_sa(&g, &g.diag(0, 1)).unwrap();
        for m in &ss {
            let ch = m.character(&cd).unwrap();
            assert_eq!(ch.degree(), Some(12));
            assert_eq!(ch.inner_int(&ch).unwrap(), 1);
            assert!(borel.contains(&ch));
        }
        assert_eq!(regular_even_from_sa(&g, &g.scalar(1)).unwrap_err(), Error::NotRegular);
    }

    #[test]
    fn split_non_semisimple_from_nca_at_length_three() {
        let (g, cd, chars) = setup(3);
        let cl = Classifier::new(&g).unwrap();
        for chi in [0usize, 1] {
            let fam = sns_family(&cd, &chars, chi).unwrap();
            assert_eq!(fam.len(), 9);
            for s in &fam {
                assert_eq!(s.character.inner_int(&s.character).unwrap(), 1);
                assert_eq!(cl.classify(&s.character).unwrap(), (24, MatrixType::SplitNonSemisimple, chi));
            }
        }
        let a = sns_from_nca(&g, &chars, 1, 0, 3, 0).unwrap_err();
        assert!(matches!(a, Error::BadShape(_)));
    }

    #[test]
    fn dgg_modules_split_into_constructed_characters() {
        let (_, cd, chars) = setup(3);
        let chi = 1;
        let ss = ss_family(&cd, &chars, chi).unwrap();
        let sns = sns_family(&cd, &chars, chi).unwrap();
        assert_eq!(ss.len(), 6);
        for t in 0..3 {
            let d = regular_decomposition(&cd, &chars, chi, t, &ss, &sns).unwrap();
            assert_eq!(d.nonregular_dim, 72);
            assert!(d.ss.iter().all(|&m| m == 2));
            assert!(d.remainder_vanishes);
            let mut got: Vec<u64> = d.sns.iter().filter(|&&m| m > 0).map(|&m| m as u64).collect();
            got.sort();
            let mut want: Vec<u64> = crate::formulas::sns_table(3, 3, t)
                .unwrap()
                .iter()
                .flat_map(|r| std::iter::repeat_n(r.mult, r.count as usize))
                .filter(|&m| m > 0)
                .collect();
            want.sort();
            assert_eq!(got, want, "t = {t}");
        }
        let gg = regular_decomposition(&cd, &chars, chi, 3, &ss, &sns).unwrap();
        assert!(gg.ss.iter().chain(&gg.sns).all(|&m| m == 1));
        assert_eq!(gg.remaining_dim, 216);
    }

    #[test]
    fn multiplicity_free_over_psi_t() {
        let g = Gl2::new(&Ring::new(3, 3, Flavor::Zmod).unwrap()).unwrap();
        for (a, t) in [([1, 1, 0, 1], 2), ([1, 0, 1, 1], 3)] {
            let c = check_mult_free_restriction(&g, &a, t).unwrap();
            assert!(c.routes_agree());
            assert!(c.within_bounds());
            assert!(c.holds());
            assert_eq!(c.holds_for_all(), t == 3);
        }
        assert!(check_mult_free_restriction(&g, &[1, 1, 0, 1], 3).is_err());
        assert!(check_mult_free_restriction(&g, &[1, 0, 0, 1], 2).is_err());
    }
}
