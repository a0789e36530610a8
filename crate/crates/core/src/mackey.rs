//! Intertwining numbers: induced characters, the Mackey double-coset sum,
//! Frobenius reciprocity checks, and the structural checks on `V^t_chi`
//! (its non-regular part, the shape of the `K^{l2}`-characters it contains,
//! and the Borel double cosets).

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_rational::Rational64;
use serde::Serialize;

use crate::characters::{det_character, psi_x, zu_character, LinChar, UnitCharacters};
use crate::classes::{ClassData, FiniteGroup};
use crate::classfn::ClassFunction;
use crate::cosets::{BorelCosets, BorelShape, CosetSpace, DoubleCosets, TableCosets};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{build_subgroup, congruence_elements, Gl2, Mat2, Subgroup, SubgroupKind};
use crate::ring::Elem;

/// `Ind_H^G phi` for a linear character `phi` of `H`.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub subgroup: Subgroup,
    pub phi: LinChar,
}

impl InducedModule {
    pub fn new(subgroup: Subgroup, phi: LinChar) -> InducedModule {
        InducedModule { subgroup, phi }
    }
    /// `[G:H]`.
    pub fn dim(&self, g: &Gl2) -> u64 {
        g.order() / self.subgroup.order() as u64
    }
    /// The induced character.
    pub fn character(&self, classes: &Arc<ClassData>) -> Result<ClassFunction> {
        ClassFunction::induced(classes, &self.subgroup, &self.phi)
    }
}

/// `V^t_chi = Ind_{ZU}^G (chi (x) psi_t)`.
pub fn dgg_module(g: &Gl2, chars: &UnitCharacters, chi: usize, t: u32) -> Result<InducedModule> {
    Ok(InducedModule::new(build_subgroup(g, &SubgroupKind::ZU)?, zu_character(g, chars, chi, t)))
}

/// Result of the Mackey sum with its per-double-coset terms.
#[derive(Clone, Debug, Serialize)]
pub struct MackeyHom {
    pub total: i64,
    /// Number of double cosets `H_1 \ G / H_2`.
    pub double_cosets: usize,
    /// Representatives of the double cosets that contribute `1`.
    pub contributing: Vec<Mat2>,
}

/// `dim Hom_G(Ind_{H_1} phi_1, Ind_{H_2} phi_2)` as the sum over double
/// cosets `H_1 x H_2` of `<phi_1, phi_2^x>` on `H_1 ∩ x H_2 x^{-1}`, where
/// `phi_2^x(z) = phi_2(x^{-1} z x)`. `cosets` is the coset space `G/H_2`.
/// Every term is an exact inner product over the full intersection.
pub fn mackey_hom_with(
    g: &Gl2,
    h1: &Subgroup,
    phi1: &LinChar,
    h2: &Subgroup,
    phi2: &LinChar,
    cosets: &dyn CosetSpace,
) -> Result<MackeyHom> {
    let n = phi1.conductor();
    let dcs = DoubleCosets::compute(g, cosets, h1.generators(), None);
    let mut total = 0;
    let mut contributing = Vec::new();
    for x in &dcs.reps {
        let xi = g.inv(x);
        let mut hist = vec![0i64; n as usize];
        let mut size = 0i64;
        for z in h1.elements() {
            let zc = g.mul(&g.mul(&xi, z), x);
            if h2.contains(g, &zc) {
                let e = (phi1.exp(z) + n - phi2.exp(&zc) % n) % n;
                hist[e as usize] += 1;
                size += 1;
            }
        }
        let s = Cyclotomic::from_dense(n, hist);
        let v = s.as_integer().ok_or_else(|| Error::NoSolution("non-rational Mackey term".into()))?;
        let term = Rational64::new(v, size);
        if !term.is_integer() || !(0..=1).contains(&term.to_integer()) {
            return Err(Error::NoSolution(format!("Mackey term {term} outside {{0, 1}}")));
        }
        if term.to_integer() == 1 {
            total += 1;
            contributing.push(*x);
        }
    }
    Ok(MackeyHom { total, double_cosets: dcs.len(), contributing })
}

/// [`mackey_hom_with`] using the coset table of `H_2` in the enumerated `G`.
pub fn mackey_hom(g: &Gl2, h1: &Subgroup, phi1: &LinChar, h2: &Subgroup, phi2: &LinChar) -> Result<MackeyHom> {
    let cosets = TableCosets::new(g, h2)?;
    mackey_hom_with(g, h1, phi1, h2, phi2, &cosets)
}

/// Both sides of Frobenius reciprocity `<Ind_H phi, rho>_G = <phi, Res rho>_H`.
pub fn frobenius_sides(classes: &Arc<ClassData>, h: &Subgroup, phi: &LinChar, rho: &ClassFunction) -> Result<(Rational64, Rational64)> {
    let ind = ClassFunction::induced(classes, h, phi)?;
    Ok((ind.inner(rho), rho.inner_with_linear_on(h.elements(), |m| phi.exp(m))))
}

pub fn frobenius_crosscheck(classes: &Arc<ClassData>, h: &Subgroup, phi: &LinChar, rho: &ClassFunction) -> Result<bool> {
    let (a, b) = frobenius_sides(classes, h, phi, rho)?;
    Ok(a == b)
}

/// The three computations of `dim End_G(Ind_H phi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PathCounts {
    pub mackey: i64,
    pub inner: i64,
    pub hecke: usize,
}

impl PathCounts {
    pub fn agree(&self) -> bool {
        self.mackey == self.inner && self.inner == self.hecke as i64
    }
}

/// Mackey sum, norm of the induced character and Hecke basis size for one
/// induced module.
pub fn path_counts(classes: &Arc<ClassData>, module: &InducedModule) -> Result<PathCounts> {
    let g = classes.gl2();
    let cosets = TableCosets::new(g, &module.subgroup)?;
    let mackey = mackey_hom_with(g, &module.subgroup, &module.phi, &module.subgroup, &module.phi, &cosets)?.total;
    let ch = module.character(classes)?;
    let inner = ch.inner_int(&ch)?;
    let hecke = crate::hecke::HeckeAlgebra::build(g, Box::new(cosets), module.subgroup.generators(), module.phi.clone())?.dim();
    Ok(PathCounts { mackey, inner, hecke })
}

/// Character of the non-regular part of a representation of `G_l`, `l >= 2`:
/// the projection onto the `psi_{lambda I}`-isotypic parts of its
/// restriction to `K^{l-1}`,
/// `chi_nr(g) = q^{-3} sum_{y in M_2(F_q), tr y = 0} chi(g (I + w^{l-1} y))`.
pub fn nonregular_part(v: &ClassFunction) -> Result<ClassFunction> {
    let cd = &v.classes;
    let g = cd.gl2();
    let r = g.ring();
    let ell = r.ell();
    if ell < 2 {
        return Err(Error::BadParam("the non-regular projection needs l >= 2".into()));
    }
    let w = r.pi_pow(ell - 1);
    let q = r.q() as Elem;
    let mut ks = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let d = (q - a) % q;
                let y = [a, b, c, d].map(|e| r.mul(w, r.lift(e, 1).expect("residue lift")));
                ks.push(g.mat_add(&g.identity(), &y));
            }
        }
    }
    let q3 = (q as i64).pow(3);
    let mut values = Vec::with_capacity(cd.count());
    for rep in &cd.reps {
        let mut s = Cyclotomic::zero(g.conductor());
        for k in &ks {
            s = s.add(v.at(&g.mul(rep, k)));
        }
        values.push(s.div_exact(q3).ok_or_else(|| Error::NoSolution("non-regular projection not integral".into()))?);
    }
    Ok(ClassFunction::new(cd, values))
}

/// Outcome of comparing the non-regular part of `V^t_chi` with the twisted
/// inflation from one level down.
#[derive(Clone, Debug, Serialize)]
pub struct NonRegularCheck {
    pub t: u32,
    pub chi: usize,
    /// Index of `delta` in the characters of `o_l^x`.
    pub delta: usize,
    /// Index of `chi_bar = chi delta^{-2}` in the characters of `o_{l-1}^x`.
    pub chi_bar: usize,
    pub degree: i64,
    pub equal: bool,
}

/// Checks `(V^t_chi)^{non-reg} = (delta o det) (x) Infl Ind_{Z U}^{G_{l-1}}(chi_bar (x) psi_t)`
/// exactly on all classes, where `delta^2 = chi` on `1 + w^{l-1} o` and
/// `chi_bar = chi delta^{-2}` viewed on `o_{l-1}^x`. For `t = l` the
/// non-regular part must vanish.
pub fn check_nonregular_part(classes: &Arc<ClassData>, lower: &Arc<ClassData>, chi: usize, t: u32) -> Result<NonRegularCheck> {
    let g = classes.gl2();
    let r = g.ring();
    let ell = r.ell();
    let n = g.conductor();
    let chars = UnitCharacters::new(r, n)?;
    let v = dgg_module(g, &chars, chi, t)?.character(classes)?;
    let nr = nonregular_part(&v)?;
    let top: Vec<Elem> = crate::group::principal_units(r, ell - 1);
    let delta = (0..chars.count())
        .find(|&d| top.iter().all(|&u| (2 * chars.exp(d, u)) % n == chars.exp(chi, u) % n))
        .ok_or_else(|| Error::NoSolution("no square root of chi on 1 + w^{l-1} o".into()))?;
    let gl = lower.gl2();
    if gl.conductor() != n || gl.ring().ell() + 1 != ell {
        return Err(Error::BadParam("lower class data must be G_{l-1} with the same conductor".into()));
    }
    let lchars = UnitCharacters::new(gl.ring(), n)?;
    let chi_bar_exp = |u: Elem| (chars.exp(chi, u) + 2 * (n - chars.exp(delta, u))) % n;
    let chi_bar = lchars
        .find_by_values(|u| chi_bar_exp(r.lift(u, ell - 1).expect("lift")))
        .first()
        .copied()
        .ok_or_else(|| Error::NoSolution("chi delta^{-2} does not factor through o_{l-1}".into()))?;
    let expected = if t == ell {
        ClassFunction::zero(classes)
    } else {
        let w = dgg_module(gl, &lchars, chi_bar, t)?.character(lower)?;
        let twist = ClassFunction::from_linear(classes, &det_character(g, &chars, delta));
        ClassFunction::inflate(&w, classes).mul(&twist)
    };
    Ok(NonRegularCheck { t, chi, delta, chi_bar, degree: nr.degree().unwrap_or(-1), equal: nr == expected })
}

/// Shape check for the `K^{l2}`-characters in `V^t_chi`.
#[derive(Clone, Debug, Serialize)]
pub struct ShapeCheck {
    pub t: u32,
    pub chi: usize,
    /// Number of `X` in `gl_2(o_{l1})` with `psi_X` occurring.
    pub occurring: usize,
    /// Occurring `X` with no conjugate of the form `(a b; w^{l-t} lambda - a)`.
    pub violations: Vec<Mat2>,
}

/// Every `psi_X` in `Res_{K^{l2}} V^t_chi` must have `X` conjugate modulo
/// `w^{l1}` to a matrix with lower-left entry `w^{l-t}` and trace `lambda`,
/// where `chi(1 + w^{l2} x) = psi(w^{l2} lambda x)`.
pub fn check_k_shapes(classes: &Arc<ClassData>, chi: usize, t: u32) -> Result<ShapeCheck> {
    let g = classes.gl2();
    let r = g.ring();
    let (ell, l1, l2) = (r.ell(), r.ell1(), r.ell2());
    if ell < 2 {
        return Err(Error::BadParam("needs l >= 2".into()));
    }
    let chars = UnitCharacters::new(r, g.conductor())?;
    let lambda = chars.lambda_of(chi)?;
    let v = dgg_module(g, &chars, chi, t)?.character(classes)?;
    let kelems = congruence_elements(g, l2);
    let low = g.at_level(l1)?;
    let md = r.p().pow(l1) as Elem;
    let lower_left = if ell - t >= l1 { 0 } else { r.pi_pow(ell - t) % md };
    let lam = lambda % md;
    let ideal: Vec<Elem> = r.elements().filter(|&x| x < md).collect();
    let mut occurring = 0;
    let mut violations = Vec::new();
    for &a in &ideal {
        for &b in &ideal {
            for &c in &ideal {
                for &d in &ideal {
                    let x = [a, b, c, d];
                    let phi = psi_x(g, &x, l1);
                    if v.inner_with_linear_on(&kelems, |m| phi.exp(m)) == Rational64::from_integer(0) {
                        continue;
                    }
                    occurring += 1;
                    let lr = low.ring();
                    let trace_ok = lr.add(a, d) == lam;
                    let shape_ok = trace_ok
                        && low.elements()?.iter().any(|h| {
                            let y = low.mul(&low.mul(h, &x), &low.inv(h));
                            y[2] == lower_left
                        });
                    if !shape_ok {
                        violations.push(x);
                    }
                }
            }
        }
    }
    Ok(ShapeCheck { t, chi, occurring, violations })
}

/// Double cosets `B \ G / ZU` against the set
/// `Delta = {(1 0; w^j z 1) : z unit, 1 <= j <= l} ∪ {(0 1; 1 0)}`.
#[derive(Clone, Debug, Serialize)]
pub struct BorelDoubleCosets {
    pub count: usize,
    /// Whether every double coset meets `Delta`.
    pub covered: bool,
    /// Whether `(1 0; w^j z 1)` and `(1 0; w^j z + w^{2j} y 1)` always share
    /// a double coset.
    pub shift_invariant: bool,
}

pub fn borel_double_cosets(g: &Gl2) -> Result<BorelDoubleCosets> {
    let r = g.ring();
    let ell = r.ell();
    let cosets = BorelCosets::new(g, BorelShape::ZtU(ell))?;
    let b = build_subgroup(g, &SubgroupKind::B)?;
    let dcs = DoubleCosets::compute(g, &cosets, b.generators(), None);
    let dc = |m: &Mat2| dcs.orbit_of[cosets.locate(m).0];
    let mut hit = HashSet::new();
    hit.insert(dc(&[0, 1, 1, 0]));
    let mut shift_invariant = true;
    for j in 1..=ell {
        let w = r.pi_pow(j);
        for z in r.units() {
            let base = dc(&g.e21(r.mul(w, z)));
            hit.insert(base);
            for y in r.elements() {
                let c = r.add(r.mul(w, z), r.mul(r.pi_pow(2 * j), y));
                shift_invariant &= dc(&g.e21(c)) == base;
            }
        }
    }
    Ok(BorelDoubleCosets { count: dcs.len(), covered: hit.len() == dcs.len(), shift_invariant })
}

/// Similarity classes in
/// `S = {(a b; w^{l-t} lambda - a) : lambda - 2a in w o, b unit}` for fixed
/// `lambda`: counted by conjugation orbits and by distinct determinants.
#[derive(Clone, Debug, Serialize)]
pub struct SnsMatrixCount {
    pub t: u32,
    pub lambda: Elem,
    pub orbits: usize,
    pub determinants: usize,
}

pub fn sns_matrix_classes(g: &Gl2, t: u32, lambda: Elem) -> Result<SnsMatrixCount> {
    let r = g.ring();
    let ell = r.ell();
    if t > ell {
        return Err(Error::BadParam(format!("t = {t} exceeds l")));
    }
    let c = if t == 0 { 0 } else { r.pi_pow(ell - t) };
    let two_inv = r.inv(2)?;
    let half = r.mul(lambda, two_inv);
    let mut s = Vec::new();
    for a in r.elements().filter(|&a| r.val(r.sub(a, half)) >= 1) {
        for b in r.units() {
            s.push([a, b, c, r.sub(lambda, a)]);
        }
    }
    let members: HashSet<u64> = s.iter().map(|m| g.key(m)).collect();
    let gens: Vec<(Mat2, Mat2)> = g.generators().into_iter().map(|x| (x, g.inv(&x))).collect();
    let mut orbit_of: HashMap<u64, usize> = HashMap::new();
    let mut orbits = 0;
    for m in &s {
        if orbit_of.contains_key(&g.key(m)) {
            continue;
        }
        let mut seen = HashSet::from([g.key(m)]);
        let mut queue = VecDeque::from([*m]);
        while let Some(x) = queue.pop_front() {
            for (h, hi) in &gens {
                let y = g.mul(&g.mul(h, &x), hi);
                if seen.insert(g.key(&y)) {
                    queue.push_back(y);
                }
            }
        }
        for k in seen.iter().filter(|k| members.contains(k)) {
            orbit_of.insert(*k, orbits);
        }
        orbits += 1;
    }
    let dets: HashSet<Elem> = s.iter().map(|m| r.sub(r.mul(m[0], m[3]), r.mul(m[1], m[2]))).collect();
    Ok(SnsMatrixCount { t, lambda, orbits, determinants: dets.len() })
}

/// Class data of `G_l` and `G_{l-1}` with a shared conductor.
pub fn class_data_pair(g: &Gl2) -> Result<(Arc<ClassData>, Arc<ClassData>)> {
    let lower = g.at_level(g.ring().ell() - 1)?;
    Ok((ClassData::new(FiniteGroup::whole(g)?), ClassData::new(FiniteGroup::whole(&lower)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::borel_pair;
    use crate::ring::{Flavor, Ring};

    fn grp(ell: u32) -> Gl2 {
        Gl2::new(&Ring::new(3, ell, Flavor::Zmod).unwrap()).unwrap()
    }

    #[test]
    fn trivial_on_whole_group() {
        let g = grp(1);
        let b = build_subgroup(&g, &SubgroupKind::B).unwrap();
        let whole = Subgroup::from_elements(&g, "G", g.elements().unwrap().to_vec(), Some(g.generators())).unwrap();
        let one = LinChar::trivial(g.conductor());
        assert_eq!(mackey_hom(&g, &whole, &one, &whole, &one).unwrap().total, 1);
        // Ind_B^G 1 = 1 + Steinberg
        assert_eq!(mackey_hom(&g, &b, &one, &b, &one).unwrap().total, 2);
    }

    #[test]
    fn paths_agree_on_dgg_modules_at_length_two() {
        let g = grp(2);
        let cd = ClassData::new(FiniteGroup::whole(&g).unwrap());
        let chars = UnitCharacters::new(g.ring(), g.conductor()).unwrap();
        for t in 0..=2 {
            for chi in [0, 1] {
                let m = dgg_module(&g, &chars, chi, t).unwrap();
                assert_eq!(m.dim(&g), 72);
                let p = path_counts(&cd, &m).unwrap();
                assert!(p.agree(), "{p:?}");
            }
        }
    }

    #[test]
    fn ss_multiplicity_two_at_length_two() {
        let g = grp(2);
        let chars = UnitCharacters::new(g.ring(), g.conductor()).unwrap();
        let zu = build_subgroup(&g, &SubgroupKind::ZU).unwrap();
        let b = build_subgroup(&g, &SubgroupKind::B).unwrap();
        let mut checked = 0;
        for c1 in 0..chars.count() {
            for c2 in 0..chars.count() {
                let quotient = chars.combine(c1, 1, c2, -1);
                if !chars.is_injective(quotient) {
                    continue;
                }
                let chi = chars.combine(c1, 1, c2, 1);
                let h = mackey_hom(&g, &zu, &zu_character(&g, &chars, chi, 1), &b, &borel_pair(&g, &chars, c1, c2)).unwrap();
                assert_eq!(h.total, 2);
                checked += 1;
            }
        }
        assert_eq!(checked, 24);
    }

    #[test]
    fn borel_double_cosets_meet_delta() {
        for ell in 1..=3 {
            let d = borel_double_cosets(&grp(ell)).unwrap();
            assert!(d.covered && d.shift_invariant, "{d:?}");
        }
        assert_eq!(borel_double_cosets(&grp(2)).unwrap().count, 4);
    }

    #[test]
    fn nonregular_part_at_length_two() {
        let g = grp(2);
        let (cd, lower) = class_data_pair(&g).unwrap();
        for chi in 0..6 {
            for t in 0..=2 {
                let c = check_nonregular_part(&cd, &lower, chi, t).unwrap();
                assert!(c.equal, "{c:?}");
                assert_eq!(c.degree, if t == 2 { 0 } else { 8 });
            }
        }
    }
}
