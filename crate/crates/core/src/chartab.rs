//! Character tables of enumerated groups by simultaneous diagonalization of
//! class sums modulo a prime, followed by an exact lift of every value to
//! `Z[zeta_N]` from eigenvalue multiplicities along power maps.
//!
//! Irreducibles of `GL_2(o_l)` are classified by the residue-field type of the
//! `psi_x` occurring in their restriction to `K^{l-1}`.

use std::sync::Arc;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{det_character, psi_x, UnitCharacters};
use crate::classes::{ClassData, FiniteGroup};
use crate::classfn::ClassFunction;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{classify_matrix, congruence_elements, principal_units, Gl2, Mat2, MatrixType, Subgroup};
use crate::hecke::{HeckeAlgebra, WedderburnSignature};
use crate::mackey::dgg_module;
use crate::modp::{addm, invm, mulm, nullspace, signed, squarefree_decomposition, split_roots, subm, PrimeField};

/// Default bound on the group order for table computations.
pub const TABLE_ORDER_BUDGET: u64 = 20_000;
/// Default bound on the number of classes.
pub const TABLE_CLASS_BUDGET: usize = 1500;

/// Image of a cyclotomic integer under `zeta_n -> omega^(m/n)` in `F_P`.
pub fn eval_mod(x: &Cyclotomic, f: &PrimeField) -> u64 {
    let step = f.m as u32 / x.conductor();
    x.coeffs().iter().enumerate().filter(|(_, &c)| c != 0).fold(0u64, |acc, (k, &c)| {
        let c = crate::modp::from_signed(c, f.p);
        addm(acc, mulm(c, f.root(k as u32 * step), f.p), f.p)
    })
}

/// The full character table of an enumerated group.
pub struct CharacterTable {
    pub classes: Arc<ClassData>,
    pub irreducibles: Vec<ClassFunction>,
    field: PrimeField,
}

impl CharacterTable {
    /// Computes the table with the default budgets.
    pub fn compute(group: FiniteGroup) -> Result<CharacterTable> {
        let order = group.order() as u64;
        if order > TABLE_ORDER_BUDGET {
            return Err(Error::BudgetExceeded(format!("character table of a group of order {order}")));
        }
        let cd = ClassData::new(group);
        CharacterTable::from_classes(&cd, 0)
    }

    /// Computes the table from precomputed class data; `seed` drives the
    /// random class-sum combinations.
    pub fn from_classes(cd: &Arc<ClassData>, seed: u64) -> Result<CharacterTable> {
        let k = cd.count();
        if k > TABLE_CLASS_BUDGET {
            return Err(Error::BudgetExceeded(format!("{k} classes")));
        }
        let n = cd.gl2().conductor();
        if !(n as u64).is_multiple_of(cd.exponent()) {
            return Err(Error::BadParam(format!("group exponent {} does not divide {n}", cd.exponent())));
        }
        let field = PrimeField::new(n as u64, 0);
        let p = field.p;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let elems = cd.group.elements();
        let cls: Vec<usize> = (0..elems.len()).map(|i| cd.class_at(i) as usize).collect();
        let inv_elems: Vec<Mat2> = elems.iter().map(|x| cd.gl2().inv(x)).collect();

        // common eigenspaces of random combinations of class-sum matrices
        let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..k).map(|i| unit_vector(k, i)).collect()];
        let mut rounds = 0;
        while spaces.iter().any(|s| s.len() > 1) {
            rounds += 1;
            if rounds > 20 {
                return Err(Error::DegenerateSpectrum("class sums do not separate characters".into()));
            }
            let coef: Vec<u64> = (0..k).map(|_| rng.random_range(1..p)).collect();
            let m = combined_class_matrix(cd, &inv_elems, &cls, &coef, p);
            let roots = eigenvalues(&m, k, p, &mut rng)?;
            let mut next = Vec::new();
            for space in spaces {
                if space.len() == 1 {
                    next.push(space);
                    continue;
                }
                let mut found = 0;
                for &mu in &roots {
                    let sub = restricted_kernel(&m, k, mu, &space, p);
                    found += sub.len();
                    if !sub.is_empty() {
                        next.push(sub);
                    }
                }
                if found != space.len() {
                    return Err(Error::DegenerateSpectrum("eigenspaces do not span".into()));
                }
            }
            spaces = next;
        }
        if spaces.len() != k {
            return Err(Error::DegenerateSpectrum(format!("{} characters for {k} classes", spaces.len())));
        }

        // power maps for the exact lift
        let id = cd.identity_class();
        let powers: Vec<Vec<usize>> =
            (0..k).map(|s| (0..cd.elem_orders[s] as u64).map(|e| cd.power(s, e) as usize).collect()).collect();
        let order = cd.order();
        let mut irreducibles = Vec::with_capacity(k);
        for space in spaces {
            let v = &space[0];
            let norm = invm(v[id], p);
            let omega: Vec<u64> = v.iter().map(|&x| mulm(x, norm, p)).collect();
            let mut s = 0u64;
            for c in 0..k {
                let t = mulm(mulm(omega[c], omega[cd.inverse[c] as usize], p), invm(cd.sizes[c] % p, p), p);
                s = addm(s, t, p);
            }
            let d2 = mulm(order % p, invm(s, p), p);
            let d = (1..=((order as f64).sqrt() as u64 + 1))
                .find(|&d| d * d % p == d2)
                .ok_or_else(|| Error::NoSolution("degree of a character".into()))?;
            let vals: Vec<u64> = (0..k).map(|c| mulm(mulm(omega[c], d, p), invm(cd.sizes[c] % p, p), p)).collect();
            let mut exact = Vec::with_capacity(k);
            for c in 0..k {
                let o = cd.elem_orders[c] as u64;
                let step = n as u64 / o;
                let inv_o = invm(o % p, p);
                let mut terms = Vec::new();
                for b in 0..o {
                    let mut acc = 0u64;
                    for (e, &pc) in powers[c].iter().enumerate() {
                        let w = field.root(((n as u64 - (b * step * e as u64) % n as u64) % n as u64) as u32);
                        acc = addm(acc, mulm(vals[pc], w, p), p);
                    }
                    let mult = signed(mulm(acc, inv_o, p), p);
                    if mult < 0 || mult as u64 > d {
                        return Err(Error::NoSolution(format!("eigenvalue multiplicity {mult} out of range")));
                    }
                    if mult > 0 {
                        terms.push(((b * step) as u32, mult));
                    }
                }
                exact.push(Cyclotomic::from_terms(n, &terms));
            }
            irreducibles.push(ClassFunction::new(cd, exact));
        }
        irreducibles.sort_by_key(|x| (x.degree().unwrap_or(0), x.values.iter().map(|v| v.coeffs().to_vec()).collect::<Vec<_>>()));
        let table = CharacterTable { classes: cd.clone(), irreducibles, field };
        table.verify()?;
        Ok(table)
    }

    /// Exact norms, `sum dim^2 = |G|`, and orthogonality of distinct rows
    /// modulo the working prime.
    pub fn verify(&self) -> Result<()> {
        let cd = &self.classes;
        let k = cd.count();
        let p = self.field.p;
        let mut sq = 0i64;
        for chi in &self.irreducibles {
            if chi.inner(chi) != Rational64::from_integer(1) {
                return Err(Error::NoSolution("row of norm different from 1".into()));
            }
            let d = chi.degree().ok_or_else(|| Error::NoSolution("non-integral degree".into()))?;
            sq += d * d;
        }
        if sq as u64 != cd.order() {
            return Err(Error::NoSolution(format!("sum of squared degrees {sq} != {}", cd.order())));
        }
        let rows: Vec<Vec<u64>> = self.irreducibles.iter().map(|c| c.values.iter().map(|v| eval_mod(v, &self.field)).collect()).collect();
        let conj_rows: Vec<Vec<u64>> =
            self.irreducibles.iter().map(|c| c.values.iter().map(|v| eval_mod(&v.conj(), &self.field)).collect()).collect();
        for i in 0..k {
            for j in 0..i {
                let s = (0..k).fold(0u64, |acc, c| addm(acc, mulm(cd.sizes[c] % p, mulm(rows[i][c], conj_rows[j][c], p), p), p));
                if s != 0 {
                    return Err(Error::NoSolution(format!("rows {i} and {j} are not orthogonal")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }
    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }
    pub fn degrees(&self) -> Vec<i64> {
        self.irreducibles.iter().map(|c| c.degree().unwrap_or(0)).collect()
    }

    /// Multiplicities `<f, chi_i>` of every irreducible in a class function,
    /// computed modulo the working prime and accepted only when the result
    /// reproduces `f` exactly.
    pub fn decompose(&self, f: &ClassFunction) -> Result<Vec<i64>> {
        let cd = &self.classes;
        let p = self.field.p;
        let fv: Vec<u64> = f.values.iter().map(|v| eval_mod(v, &self.field)).collect();
        let inv_order = invm(cd.order() % p, p);
        let mut mults = Vec::with_capacity(self.len());
        for chi in &self.irreducibles {
            let s = (0..cd.count()).fold(0u64, |acc, c| {
                acc_add(acc, cd.sizes[c] % p, fv[c], eval_mod(&chi.values[c].conj(), &self.field), p)
            });
            mults.push(signed(mulm(s, inv_order, p), p));
        }
        let mut sum = ClassFunction::zero(cd);
        for (chi, &m) in self.irreducibles.iter().zip(&mults) {
            if m != 0 {
                sum = sum.add(&chi.scale(m));
            }
        }
        if sum.values != f.values {
            return Err(Error::NoSolution("class function is not a combination of irreducibles".into()));
        }
        Ok(mults)
    }
}

fn acc_add(acc: u64, size: u64, a: u64, b: u64, p: u64) -> u64 {
    addm(acc, mulm(size, mulm(a, b, p), p), p)
}

fn unit_vector(k: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; k];
    v[i] = 1;
    v
}

/// `M[s][r] = sum_{x in G} c_{cls(x)} [cls(x^{-1} g_r) = s]`, so that
/// `M omega = omega(sum_j c_j C_j) omega` for every central character `omega`.
fn combined_class_matrix(cd: &ClassData, inv_elems: &[Mat2], cls: &[usize], coef: &[u64], p: u64) -> Vec<u64> {
    let k = cd.count();
    let g = cd.gl2();
    let mut m = vec![0u64; k * k];
    for r in 0..k {
        let gr = cd.reps[r];
        for (xi, xinv) in inv_elems.iter().enumerate() {
            let y = g.mul(xinv, &gr);
            let s = cd.class_of_mat(&y) as usize;
            m[s * k + r] = addm(m[s * k + r], coef[cls[xi]], p);
        }
    }
    m
}

fn eigenvalues(m: &[u64], k: usize, p: u64, rng: &mut ChaCha8Rng) -> Result<Vec<u64>> {
    let mat = crate::modp::MatP { n: k, a: m.to_vec() };
    let cp = mat.charpoly(p);
    let mut roots = Vec::new();
    for factor in squarefree_decomposition(&cp, p) {
        if factor.len() > 1 {
            roots.extend(split_roots(&factor, p, rng).ok_or_else(|| Error::DegenerateSpectrum("eigenvalues outside F_P".into()))?);
        }
    }
    Ok(roots)
}

/// Vectors of `span(space)` in the kernel of `M - mu`.
fn restricted_kernel(m: &[u64], k: usize, mu: u64, space: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let dim = space.len();
    // (M - mu) B, a k x dim matrix
    let mut a = vec![0u64; k * dim];
    for (j, v) in space.iter().enumerate() {
        for i in 0..k {
            let mut s = subm(0, mulm(mu, v[i], p), p);
            for (l, &vl) in v.iter().enumerate() {
                if vl != 0 {
                    s = addm(s, mulm(m[i * k + l], vl, p), p);
                }
            }
            a[i * dim + j] = s;
        }
    }
    nullspace(k, dim, &a, p)
        .into_iter()
        .map(|c| {
            let mut w = vec![0u64; k];
            for (j, v) in space.iter().enumerate() {
                if c[j] != 0 {
                    for i in 0..k {
                        w[i] = addm(w[i], mulm(c[j], v[i], p), p);
                    }
                }
            }
            w
        })
        .collect()
}

/// An irreducible of `GL_2(o_l)` with its type and central character.
#[derive(Clone, Debug, Serialize)]
pub struct IrrepRecord {
    pub index: usize,
    pub dim: i64,
    #[serde(rename = "type")]
    pub kind: MatrixType,
    /// Index of the central character in `UnitCharacters::new`.
    pub central: usize,
}

/// Type and central-character classifier for irreducibles of `G = GL_2(o_l)`.
///
/// For `l >= 2` the type is that of any `x` with `psi_x` in the restriction
/// to `K^{l-1}`. For `l = 1` the types are read off from degrees: `1` is
/// non-regular, `q` split non-semisimple, `q + 1` split semisimple and `q - 1`
/// cuspidal.
pub struct Classifier {
    g: Gl2,
    chars: UnitCharacters,
    kelems: Vec<Mat2>,
    residues: Vec<Mat2>,
}

impl Classifier {
    pub fn new(g: &Gl2) -> Result<Classifier> {
        let ell = g.ring().ell();
        let chars = UnitCharacters::new(g.ring(), g.conductor())?;
        let kelems = if ell >= 2 { congruence_elements(g, ell - 1) } else { Vec::new() };
        let residues = if ell >= 2 { residue_matrices(g) } else { Vec::new() };
        Ok(Classifier { g: g.clone(), chars, kelems, residues })
    }

    /// `(degree, type, central character)` of an irreducible character.
    pub fn classify(&self, chi: &ClassFunction) -> Result<(i64, MatrixType, usize)> {
        let g = &self.g;
        let ring = g.ring();
        let q = ring.q() as i64;
        let dim = chi.degree().ok_or_else(|| Error::NoSolution("degree".into()))?;
        let kind = if ring.ell() == 1 {
            match dim {
                1 => MatrixType::NonRegular,
                d if d == q => MatrixType::SplitNonSemisimple,
                d if d == q + 1 => MatrixType::SplitSemisimple,
                d if d == q - 1 => MatrixType::Cuspidal,
                _ => return Err(Error::NoSolution(format!("unexpected degree {dim}"))),
            }
        } else {
            let x = self
                .residues
                .iter()
                .find(|x| {
                    let phi = psi_x(g, x, 1);
                    chi.inner_with_linear_on(&self.kelems, |m| phi.exp(m)) != Rational64::from_integer(0)
                })
                .ok_or_else(|| Error::NoSolution("no psi_x in the restriction".into()))?;
            classify_matrix(ring, x)
        };
        Ok((dim, kind, central_character(chi, g, &self.chars)?))
    }
}

/// Classifies every irreducible of a table of `G = GL_2(o_l)`.
pub fn classify_all(table: &CharacterTable) -> Result<Vec<IrrepRecord>> {
    let c = Classifier::new(table.classes.gl2())?;
    table
        .irreducibles
        .iter()
        .enumerate()
        .map(|(index, chi)| {
            let (dim, kind, central) = c.classify(chi)?;
            Ok(IrrepRecord { index, dim, kind, central })
        })
        .collect()
}

/// Canonical lifts of all matrices over the residue field.
pub fn residue_matrices(g: &Gl2) -> Vec<Mat2> {
    let r = g.ring();
    let p = r.p() as u16;
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let l = |x: u16| r.lift(x, 1).expect("residue lift");
                    out.push([l(a), l(b), l(c), l(d)]);
                }
            }
        }
    }
    out
}

/// Index of the central character of an irreducible.
pub fn central_character(chi: &ClassFunction, g: &Gl2, chars: &UnitCharacters) -> Result<usize> {
    let n = g.conductor();
    let d = chi.degree().ok_or_else(|| Error::NoSolution("degree".into()))?;
    let mut exps = std::collections::HashMap::new();
    for &z in chars.elements() {
        let v = chi.at(&g.scalar(z));
        let e = (0..n)
            .find(|&e| Cyclotomic::root(n, e).scale(d) == *v)
            .ok_or_else(|| Error::NoSolution("scalar does not act by a root of unity".into()))?;
        exps.insert(z, e);
    }
    chars
        .find_by_values(|z| exps[&z])
        .first()
        .copied()
        .ok_or_else(|| Error::NoSolution("central character not found".into()))
}

/// Constituents of `V^t_chi` with their multiplicities.
#[derive(Clone, Debug, Serialize)]
pub struct DggDecomposition {
    pub t: u32,
    pub chi: usize,
    pub dim: i64,
    /// Irreducibles with non-zero multiplicity, in table order.
    pub constituents: Vec<(IrrepRecord, i64)>,
}

impl DggDecomposition {
    /// `sum m * dim` over the constituents.
    pub fn total_dim(&self) -> i64 {
        self.constituents.iter().map(|(r, m)| r.dim * m).sum()
    }
    pub fn max_multiplicity(&self) -> i64 {
        self.constituents.iter().map(|(_, m)| *m).max().unwrap_or(0)
    }
    /// Multiplicities of the constituents of one type.
    pub fn multiplicities(&self, kind: MatrixType) -> Vec<i64> {
        self.constituents.iter().filter(|(r, _)| r.kind == kind).map(|(_, m)| *m).collect()
    }
}

/// Decomposes `V^t_chi = Ind_{ZU}^G (chi (x) psi_t)` against a full table.
pub fn dgg_decompose(table: &CharacterTable, records: &[IrrepRecord], chi: usize, t: u32) -> Result<DggDecomposition> {
    let cd = &table.classes;
    let g = cd.gl2();
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    if chi >= chars.count() {
        return Err(Error::BadIndex(format!("central character {chi} of {}", chars.count())));
    }
    let v = dgg_module(g, &chars, chi, t)?.character(cd)?;
    let mults = table.decompose(&v)?;
    let constituents = records.iter().zip(mults).filter(|(_, m)| *m != 0).map(|(r, m)| (r.clone(), m)).collect();
    let dim = v.degree().ok_or_else(|| Error::NoSolution("degree".into()))?;
    Ok(DggDecomposition { t, chi, dim, constituents })
}

/// Largest multiplicity in `Ind_H^G theta` over all `theta` in `Irr(H)`.
#[derive(Clone, Debug, Serialize)]
pub struct GelfandReport {
    pub subgroup: String,
    pub subgroup_irreducibles: usize,
    pub max_multiplicity: i64,
    /// `(theta index, rho index, multiplicity)` for every multiplicity above 1.
    pub violations: Vec<(usize, usize, i64)>,
}

impl GelfandReport {
    pub fn is_strong_gelfand(&self) -> bool {
        self.max_multiplicity == 1 && self.violations.is_empty()
    }
}

/// Computes `<Ind_H^G theta, rho>` for all `theta` in `Irr(H)` and `rho` in
/// `Irr(G)` from the two character tables.
pub fn strong_gelfand(table: &CharacterTable, h: &Subgroup) -> Result<GelfandReport> {
    let g = table.classes.gl2();
    let sub = CharacterTable::compute(FiniteGroup::subgroup(g, h))?;
    let mut max_multiplicity = 0;
    let mut violations = Vec::new();
    for (i, theta) in sub.irreducibles.iter().enumerate() {
        let ind = ClassFunction::induce_class_function(&table.classes, theta)?;
        for (j, m) in table.decompose(&ind)?.into_iter().enumerate() {
            max_multiplicity = max_multiplicity.max(m);
            if m > 1 {
                violations.push((i, j, m));
            }
        }
    }
    Ok(GelfandReport { subgroup: h.name.clone(), subgroup_irreducibles: sub.len(), max_multiplicity, violations })
}

/// Signature of `End_G(Ind_{Z^t U}^G (chi, chi', psi_t))`.
#[derive(Clone, Debug, Serialize)]
pub struct WModuleCheck {
    pub t: u32,
    pub chi: usize,
    /// Index of `chi'` among the characters of `1 + w^t o`.
    pub chi2: usize,
    pub signature: WedderburnSignature,
    pub multiplicity_free: bool,
}

/// Checks that `Ind_{Z^t U}^G (chi, chi', psi_t)` is multiplicity free via
/// its Hecke algebra. Pairs whose restrictions to `Z ∩ Z^t` disagree give
/// a zero module and are skipped by the caller.
pub fn w_module_check(g: &Gl2, chi: usize, chi2: usize, t: u32, seed: u64) -> Result<WModuleCheck> {
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let signature = HeckeAlgebra::w_module(g, &chars, chi, chi2, t)?.signature(seed)?;
    let multiplicity_free = signature.is_multiplicity_free();
    Ok(WModuleCheck { t, chi, chi2, signature, multiplicity_free })
}

/// Number of characters `chi'` of `1 + w^t o`.
pub fn w_character_count(g: &Gl2, t: u32) -> Result<usize> {
    Ok(UnitCharacters::of_subgroup(g.ring(), &principal_units(g.ring(), t), g.conductor())?.count())
}

/// Non-regular irreducibles of `G_l` as twists `(c o det) Infl(sigma)` of
/// irreducibles `sigma` of `G_{l-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct TwistInflation {
    pub nonregular: usize,
    /// `(irreducible index, twisting character, lower irreducible index)`.
    pub matches: Vec<(usize, usize, usize)>,
}

impl TwistInflation {
    pub fn all_matched(&self) -> bool {
        self.matches.len() == self.nonregular
    }
}

/// Matches every non-regular irreducible of `table` (over `G_l`) against the
/// twisted inflations from `lower` (over `G_{l-1}`).
pub fn twist_inflation(table: &CharacterTable, records: &[IrrepRecord], lower: &CharacterTable) -> Result<TwistInflation> {
    let cd = &table.classes;
    let g = cd.gl2();
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let infl: Vec<ClassFunction> = lower.irreducibles.iter().map(|s| ClassFunction::inflate(s, cd)).collect();
    let twists: Vec<ClassFunction> = (0..chars.count()).map(|c| ClassFunction::from_linear(cd, &det_character(g, &chars, c))).collect();
    let mut matches = Vec::new();
    let mut nonregular = 0;
    for r in records.iter().filter(|r| r.kind == MatrixType::NonRegular) {
        nonregular += 1;
        let rho = &table.irreducibles[r.index];
        'search: for (c, tw) in twists.iter().enumerate() {
            for (s, f) in infl.iter().enumerate() {
                if f.degree() == Some(r.dim) && tw.mul(f) == *rho {
                    matches.push((r.index, c, s));
                    break 'search;
                }
            }
        }
    }
    Ok(TwistInflation { nonregular, matches })
}
