//! Class functions with exact cyclotomic values: induced characters, inner
//! products, restriction and inflation.

use std::sync::Arc;

use num_rational::Rational64;

use crate::characters::LinChar;
use crate::classes::ClassData;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{Mat2, Subgroup};

/// A class function on an enumerated group, one value per class.
#[derive(Clone)]
pub struct ClassFunction {
    pub classes: Arc<ClassData>,
    pub values: Vec<Cyclotomic>,
}

impl std::fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClassFunction(degree {:?})", self.degree())
    }
}

impl PartialEq for ClassFunction {
    fn eq(&self, o: &ClassFunction) -> bool {
        Arc::ptr_eq(&self.classes, &o.classes) && self.values == o.values
    }
}

impl ClassFunction {
    pub fn new(classes: &Arc<ClassData>, values: Vec<Cyclotomic>) -> ClassFunction {
        assert_eq!(values.len(), classes.count());
        ClassFunction { classes: classes.clone(), values }
    }

    pub fn conductor(&self) -> u32 {
        self.classes.gl2().conductor()
    }

    pub fn zero(classes: &Arc<ClassData>) -> ClassFunction {
        let n = classes.gl2().conductor();
        ClassFunction::new(classes, vec![Cyclotomic::zero(n); classes.count()])
    }

    /// Value at the identity, when it is an integer.
    pub fn degree(&self) -> Option<i64> {
        self.values[self.classes.identity_class()].as_integer()
    }

    pub fn at(&self, m: &Mat2) -> &Cyclotomic {
        &self.values[self.classes.class_of_mat(m) as usize]
    }

    pub fn add(&self, o: &ClassFunction) -> ClassFunction {
        ClassFunction::new(&self.classes, self.values.iter().zip(&o.values).map(|(a, b)| a.add(b)).collect())
    }
    pub fn scale(&self, k: i64) -> ClassFunction {
        ClassFunction::new(&self.classes, self.values.iter().map(|a| a.scale(k)).collect())
    }
    pub fn mul(&self, o: &ClassFunction) -> ClassFunction {
        ClassFunction::new(&self.classes, self.values.iter().zip(&o.values).map(|(a, b)| a.mul(b)).collect())
    }
    pub fn div_exact(&self, k: i64) -> Option<ClassFunction> {
        let vals: Option<Vec<Cyclotomic>> = self.values.iter().map(|v| v.div_exact(k)).collect();
        vals.map(|v| ClassFunction::new(&self.classes, v))
    }

    /// A linear character of the whole group as a class function.
    pub fn from_linear(classes: &Arc<ClassData>, phi: &LinChar) -> ClassFunction {
        ClassFunction::new(classes, classes.reps.iter().map(|r| phi.value(r)).collect())
    }

    /// Induced character `Ind_H^G phi`:
    /// `(|G| / (|H| |C|)) sum_{h in H ∩ C} phi(h)`.
    pub fn induced(classes: &Arc<ClassData>, h: &Subgroup, phi: &LinChar) -> Result<ClassFunction> {
        ClassFunction::induced_from(classes, h.elements(), |m| phi.exp(m))
    }

    /// Induced character from a subgroup given by its elements and a linear
    /// character exponent function.
    pub fn induced_from(classes: &Arc<ClassData>, h_elems: &[Mat2], phi: impl Fn(&Mat2) -> u32) -> Result<ClassFunction> {
        let n = classes.gl2().conductor() as usize;
        let k = classes.count();
        let mut hist = vec![vec![0i64; n]; k];
        for m in h_elems {
            let c = classes.try_class_of_mat(m)? as usize;
            hist[c][phi(m) as usize % n] += 1;
        }
        let go = classes.order() as i64;
        let ho = h_elems.len() as i64;
        let mut values = Vec::with_capacity(k);
        for (c, hc) in hist.into_iter().enumerate() {
            let centralizer = go / classes.sizes[c] as i64;
            let v = Cyclotomic::from_dense(n as u32, hc).scale(centralizer);
            values.push(v.div_exact(ho).ok_or_else(|| Error::NotASubgroup("induced value not integral".into()))?);
        }
        Ok(ClassFunction::new(classes, values))
    }

    /// Induction of a class function of a subgroup (given with its own
    /// class data, which must be a subgroup of this group).
    pub fn induce_class_function(classes: &Arc<ClassData>, sub: &ClassFunction) -> Result<ClassFunction> {
        let n = classes.gl2().conductor();
        let k = classes.count();
        let mut acc = vec![Cyclotomic::zero(n); k];
        let sub_cd = &sub.classes;
        for c in 0..sub_cd.count() {
            let target = classes.try_class_of_mat(&sub_cd.reps[c])? as usize;
            acc[target] = acc[target].add(&sub.values[c].scale(sub_cd.sizes[c] as i64));
        }
        let go = classes.order() as i64;
        let ho = sub_cd.order() as i64;
        let values: Result<Vec<Cyclotomic>> = acc
            .into_iter()
            .enumerate()
            .map(|(c, v)| {
                v.scale(go / classes.sizes[c] as i64).div_exact(ho).ok_or_else(|| Error::NotASubgroup("induced value not integral".into()))
            })
            .collect();
        Ok(ClassFunction::new(classes, values?))
    }

    /// `(1/|G|) sum_g a(g) conj(b(g))`, exact.
    pub fn inner(&self, o: &ClassFunction) -> Rational64 {
        let n = self.conductor();
        let mut s = Cyclotomic::zero(n);
        for c in 0..self.values.len() {
            if self.values[c].is_zero() || o.values[c].is_zero() {
                continue;
            }
            s = s.add(&self.values[c].mul(&o.values[c].conj()).scale(self.classes.sizes[c] as i64));
        }
        let total = s.as_integer().expect("inner product of class functions is not rational");
        Rational64::new(total, self.classes.order() as i64)
    }

    /// Integer inner product of genuine characters; errors on a non-integer.
    pub fn inner_int(&self, o: &ClassFunction) -> Result<i64> {
        let r = self.inner(o);
        if r.is_integer() {
            Ok(r.to_integer())
        } else {
            Err(Error::NotASubgroup(format!("non-integral inner product {r}")))
        }
    }

    /// `(1/|H|) sum_{h in H} phi(h) conj(self(h))` = `<phi, Res self>_H`.
    pub fn inner_with_linear_on(&self, h_elems: &[Mat2], phi: impl Fn(&Mat2) -> u32) -> Rational64 {
        let n = self.conductor();
        let mut hist: Vec<Vec<i64>> = vec![Vec::new(); self.values.len()];
        for m in h_elems {
            let c = self.classes.class_of_mat(m) as usize;
            if hist[c].is_empty() {
                hist[c] = vec![0; n as usize];
            }
            hist[c][phi(m) as usize % n as usize] += 1;
        }
        let mut s = Cyclotomic::zero(n);
        for (c, hc) in hist.into_iter().enumerate() {
            if hc.is_empty() {
                continue;
            }
            s = s.add(&Cyclotomic::from_dense(n, hc).mul(&self.values[c].conj()));
        }
        Rational64::new(s.as_integer().expect("non-rational restriction pairing"), h_elems.len() as i64)
    }

    /// Restriction to a subgroup with its own class data.
    pub fn restrict(&self, sub: &Arc<ClassData>) -> ClassFunction {
        ClassFunction::new(sub, sub.reps.iter().map(|r| self.at(r).clone()).collect())
    }

    /// Inflation of a class function of `G_{l-1}` along reduction.
    pub fn inflate(lower: &ClassFunction, classes: &Arc<ClassData>) -> ClassFunction {
        let g = classes.gl2();
        let i = lower.classes.gl2().ring().ell();
        ClassFunction::new(classes, classes.reps.iter().map(|r| lower.at(&g.project_mat(r, i)).lift(g.conductor())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{zu_character, LinChar, UnitCharacters};
    use crate::classes::FiniteGroup;
    use crate::group::{build_subgroup, Gl2, SubgroupKind};
    use crate::ring::{Flavor, Ring};

    #[test]
    fn induced_dimensions_and_norms() {
        let g = Gl2::new(&Ring::new(3, 1, Flavor::Zmod).unwrap()).unwrap();
        let cd = ClassData::new(FiniteGroup::whole(&g).unwrap());
        let u = build_subgroup(&g, &SubgroupKind::U).unwrap();
        let v0 = ClassFunction::induced(&cd, &u, &LinChar::trivial(g.conductor())).unwrap();
        assert_eq!(v0.degree(), Some(16));
        let whole = build_subgroup(&g, &SubgroupKind::K(1)).unwrap();
        assert_eq!(whole.order(), 1);
        let reg = ClassFunction::induced(&cd, &whole, &LinChar::trivial(g.conductor())).unwrap();
        assert_eq!(reg.degree(), Some(48));
        let triv = ClassFunction::new(&cd, vec![Cyclotomic::from_int(g.conductor(), 1); cd.count()]);
        assert_eq!(reg.inner_int(&triv).unwrap(), 1);
        assert_eq!(triv.inner_int(&triv).unwrap(), 1);
    }

    #[test]
    fn gelfand_graev_norm_at_length_two() {
        let g = Gl2::new(&Ring::new(3, 2, Flavor::Zmod).unwrap()).unwrap();
        let cd = ClassData::new(FiniteGroup::whole(&g).unwrap());
        let zu = build_subgroup(&g, &SubgroupKind::ZU).unwrap();
        let ch = UnitCharacters::new(g.ring(), g.conductor()).unwrap();
        let mut total = 0;
        for c in 0..ch.count() {
            let v = ClassFunction::induced(&cd, &zu, &zu_character(&g, &ch, c, 2)).unwrap();
            assert_eq!(v.degree(), Some(72));
            total += v.inner_int(&v).unwrap();
        }
        assert_eq!(total, 54);
    }
}
