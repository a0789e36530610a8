//! One function per verb; each fills a [`Report`].

use std::sync::Arc;

use serde_json::{json, Value};

use dgg_core::characters::UnitCharacters;
use dgg_core::chartab::{classify_all, dgg_decompose, strong_gelfand, w_character_count, w_module_check, CharacterTable, Classifier, IrrepRecord};
use dgg_core::classes::{ClassData, FiniteGroup};
use dgg_core::constructions::{regular_decomposition, sns_family, ss_family};
use dgg_core::error::Error;
use dgg_core::formulas;
use dgg_core::group::{build_subgroup, Gl2, MatrixType, SubgroupKind, DEFAULT_ELEMENT_BUDGET};
use dgg_core::hecke::{a_bound, endo_report, HeckeAlgebra, WedderburnSignature};
use dgg_core::mackey::{dgg_module, path_counts};
use dgg_core::ring::{Flavor, Ring};

use crate::report::{Report, Table};

/// Failure of a verb: all of these exit with status 2.
#[derive(Debug)]
pub enum VerbError {
    Usage(String),
    Core(Error),
}

impl From<Error> for VerbError {
    fn from(e: Error) -> VerbError {
        VerbError::Core(e)
    }
}

impl std::fmt::Display for VerbError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerbError::Usage(s) => write!(f, "usage: {s}"),
            VerbError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub type VResult<T> = std::result::Result<T, VerbError>;

/// Validated flags shared by every verb.
#[derive(Clone, Debug)]
pub struct Config {
    pub p: u32,
    pub ell: Option<u32>,
    pub flavor: Flavor,
    pub t: Option<u32>,
    pub chi: Option<usize>,
    pub seed: u64,
    pub budget_elems: Option<u64>,
}

impl Config {
    fn args(&self) -> Value {
        json!({
            "p": self.p,
            "ell": self.ell,
            "flavor": self.flavor,
            "t": self.t,
            "chi": self.chi,
            "seed": self.seed,
            "budget_elems": self.budget_elems,
        })
    }
    fn ell(&self) -> VResult<u32> {
        self.ell.ok_or_else(|| VerbError::Usage("--ell is required".into()))
    }
    fn ring(&self) -> VResult<Ring> {
        Ok(Ring::new(self.p, self.ell()?, self.flavor)?)
    }
    fn group(&self) -> VResult<Gl2> {
        Ok(Gl2::with_budget(&self.ring()?, self.budget_elems.unwrap_or(DEFAULT_ELEMENT_BUDGET))?)
    }
    fn q(&self) -> u64 {
        self.p as u64
    }
    /// The selected central characters, or all of them.
    fn chis(&self, chars: &UnitCharacters) -> VResult<Vec<usize>> {
        match self.chi {
            Some(c) if c >= chars.count() => Err(VerbError::Usage(format!("--chi {c} out of range 0..{}", chars.count()))),
            Some(c) => Ok(vec![c]),
            None => Ok((0..chars.count()).collect()),
        }
    }
    /// The selected `t`, or every `t` in `range`.
    fn ts(&self, range: std::ops::RangeInclusive<u32>) -> VResult<Vec<u32>> {
        match self.t {
            Some(t) if !range.contains(&t) => Err(VerbError::Usage(format!("--t {t} outside {}..={}", range.start(), range.end()))),
            Some(t) => Ok(vec![t]),
            None => Ok(range.collect()),
        }
    }
}

fn ring_summary(cfg: &Config) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("p".into(), json!(cfg.p));
    m.insert("q".into(), json!(cfg.p));
    if let Some(l) = cfg.ell {
        m.insert("ell".into(), json!(l));
    }
    m.insert("flavor".into(), json!(cfg.flavor));
    Value::Object(m)
}

fn new_report(verb: &str, cfg: &Config) -> Report {
    Report::new(verb, cfg.args(), ring_summary(cfg))
}

fn kind_name(k: MatrixType) -> &'static str {
    k.short()
}

fn require(cond: bool, msg: impl Into<String>) -> VResult<()> {
    if cond {
        Ok(())
    } else {
        Err(VerbError::Usage(msg.into()))
    }
}

fn class_data(g: &Gl2) -> VResult<Arc<ClassData>> {
    Ok(ClassData::new(FiniteGroup::whole(g)?))
}

fn full_table(g: &Gl2) -> VResult<(CharacterTable, Vec<IrrepRecord>)> {
    let t = CharacterTable::compute(FiniteGroup::whole(g)?)?;
    let recs = classify_all(&t)?;
    Ok((t, recs))
}

pub fn ring_info(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("ring-info", cfg);
    let ring = cfg.ring()?;
    let g = cfg.group()?;
    let chars = UnitCharacters::new(&ring, g.conductor())?;
    let (q, ell) = (cfg.q(), ring.ell());
    let injective = (0..chars.count()).filter(|&i| chars.is_injective(i)).count();
    let pairs = chars.count_injective_pairs();
    let enumerated = if g.is_materialized() { Some(g.elements()?.len()) } else { None };
    rep.result = json!({
        "size": ring.size(),
        "units": ring.unit_count(),
        "ell1": ring.ell1(),
        "ell2": ring.ell2(),
        "conductor": g.conductor(),
        "group_order": g.order(),
        "enumerated": enumerated,
        "central_characters": chars.count(),
        "injective_characters": injective,
        "injective_pairs": pairs,
    });
    if let Some(n) = enumerated {
        rep.check("|GL_2(o_l)| = q^(4l-3)(q-1)^2(q+1)", formulas::group_order(q, ell), Some(n));
    }
    if ell >= 2 {
        rep.check("injective pairs = (q-1)^3 q^(2l-3)", (q - 1).pow(3) * q.pow(2 * ell - 3), pairs);
    }
    rep.check("central characters = q^(l-1)(q-1)", formulas::central_count(q, ell), chars.count());
    let mut t = Table::new("Ring", &["quantity", "value"]);
    for key in ["size", "units", "ell1", "ell2", "conductor", "group_order", "enumerated", "central_characters", "injective_characters", "injective_pairs"] {
        t.push(vec![key.into(), crate::report::plain(&rep.result[key])]);
    }
    rep.tables.push(t);
    Ok(rep)
}

/// Counts per type, distinct degrees per type, and the route used.
type Computed = (Vec<usize>, Vec<Vec<i64>>, &'static str);

pub fn regular_table(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("regular-table", cfg);
    let ell = cfg.ell()?;
    require(ell >= 2, "regular-table needs --ell >= 2")?;
    let q = cfg.q();
    let rows = formulas::regular_table(q, ell)?;
    let computed: Option<Computed> = if ell == 2 && cfg.group()?.is_materialized() {
        let g = cfg.group()?;
        match full_table(&g) {
            Ok((_, recs)) => {
                let kinds = [MatrixType::SplitSemisimple, MatrixType::SplitNonSemisimple, MatrixType::Cuspidal];
                let counts = kinds.iter().map(|k| recs.iter().filter(|r| r.kind == *k).count()).collect();
                let dims = kinds
                    .iter()
                    .map(|k| {
                        let mut d: Vec<i64> = recs.iter().filter(|r| r.kind == *k).map(|r| r.dim).collect();
                        d.sort();
                        d.dedup();
                        d
                    })
                    .collect();
                Some((counts, dims, "character table"))
            }
            Err(VerbError::Core(Error::BudgetExceeded(why))) => {
                rep.notes.push(format!("character table skipped: {why}"));
                None
            }
            Err(e) => return Err(e),
        }
    } else if ell == 3 && cfg.group()?.is_materialized() {
        Some(regular_table_by_construction(cfg)?)
    } else {
        None
    };
    let mut t = Table::new("Numbers and dimensions of regular representations", &["type", "count", "dim", "computed count", "computed dims"]);
    for (i, r) in rows.iter().enumerate() {
        let (cc, cd) = match &computed {
            Some((c, d, _)) => (c[i].to_string(), format!("{:?}", d[i])),
            None => ("-".into(), "-".into()),
        };
        t.push(vec![kind_name(r.kind).into(), r.count.to_string(), r.dim.to_string(), cc, cd]);
    }
    rep.tables.push(t);
    if let Some((counts, dims, route)) = &computed {
        for (i, r) in rows.iter().enumerate() {
            rep.check(format!("{} count", kind_name(r.kind)), r.count, counts[i]);
            rep.check(format!("{} dims", kind_name(r.kind)), vec![r.dim], &dims[i]);
        }
        rep.notes.push(format!("computed via {route}"));
    } else {
        rep.notes.push("no computation route within budget; formulas only".into());
    }
    rep.result = json!({
        "rows": rows,
        "computed": computed.as_ref().map(|(c, d, route)| json!({"counts": c, "dims": d, "route": route})),
    });
    Ok(rep)
}

/// Counts at odd length 3 from the constructions: ss and sns by deduplicated
/// induced characters, cuspidal by the remainder of the Gelfand-Graev module.
fn regular_table_by_construction(cfg: &Config) -> VResult<Computed> {
    let g = cfg.group()?;
    let cd = class_data(&g)?;
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let cus_dim = formulas::regular_table(cfg.q(), 3)?[2].dim as i64;
    let (mut ss_n, mut sns_n, mut cus_n) = (0usize, 0usize, 0usize);
    let (mut ss_d, mut sns_d) = (Vec::new(), Vec::new());
    for chi in 0..chars.count() {
        let ss = ss_family(&cd, &chars, chi)?;
        let sns = sns_family(&cd, &chars, chi)?;
        ss_n += ss.len();
        sns_n += sns.len();
        ss_d.extend(ss.iter().filter_map(|(_, c)| c.degree()));
        sns_d.extend(sns.iter().filter_map(|s| s.character.degree()));
        let gg = regular_decomposition(&cd, &chars, chi, 3, &ss, &sns)?;
        cus_n += (gg.remaining_dim / cus_dim) as usize;
    }
    for d in [&mut ss_d, &mut sns_d] {
        d.sort();
        d.dedup();
    }
    Ok((vec![ss_n, sns_n, cus_n], vec![ss_d, sns_d, vec![cus_dim]], "constructions"))
}

pub fn construct_ss(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("construct-ss", cfg);
    let ell = cfg.ell()?;
    require((2..=3).contains(&ell), "construct-ss needs --ell 2 or 3")?;
    let g = cfg.group()?;
    let cd = class_data(&g)?;
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let cl = Classifier::new(&g)?;
    let row = formulas::regular_table(cfg.q(), ell)?[0];
    let per_chi = row.count / formulas::central_count(cfg.q(), ell);
    let mut t = Table::new("Borel-induced characters", &["chi", "pair", "dim", "norm", "type"]);
    let mut out = Vec::new();
    let (mut dims_ok, mut norms_ok, mut types_ok) = (true, true, true);
    for chi in cfg.chis(&chars)? {
        let fam = ss_family(&cd, &chars, chi)?;
        let mut items = Vec::new();
        for ((c1, c2), ch) in &fam {
            let (dim, kind, central) = cl.classify(ch)?;
            let norm = ch.inner_int(ch)?;
            dims_ok &= dim as u64 == row.dim;
            norms_ok &= norm == 1;
            types_ok &= kind == MatrixType::SplitSemisimple && central == chi;
            t.push(vec![chi.to_string(), format!("({c1}, {c2})"), dim.to_string(), norm.to_string(), kind_name(kind).into()]);
            items.push(json!({"pair": [c1, c2], "dim": dim, "norm": norm, "type": kind}));
        }
        rep.check(format!("chi {chi}: distinct ss characters"), per_chi, fam.len());
        out.push(json!({"chi": chi, "characters": items}));
    }
    rep.check("dimension (q+1)q^(l-1)", true, dims_ok);
    rep.check("irreducible (norm 1)", true, norms_ok);
    rep.check("classified ss with central character chi", true, types_ok);
    rep.tables.push(t);
    rep.result = json!({"per_chi": out});
    Ok(rep)
}

pub fn construct_sns(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("construct-sns", cfg);
    let ell = cfg.ell()?;
    require(ell == 3, "construct-sns needs --ell 3 (odd length within the enumeration budget)")?;
    let g = cfg.group()?;
    let cd = class_data(&g)?;
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let cl = Classifier::new(&g)?;
    let row = formulas::regular_table(cfg.q(), ell)?[1];
    let per_chi = row.count / formulas::central_count(cfg.q(), ell);
    let mut t = Table::new("Characters induced from N C(A)", &["chi", "alpha", "beta", "j", "mu", "ext", "dim", "norm", "type"]);
    let mut out = Vec::new();
    let (mut dims_ok, mut norms_ok, mut types_ok) = (true, true, true);
    for chi in cfg.chis(&chars)? {
        let fam = sns_family(&cd, &chars, chi)?;
        let mut items = Vec::new();
        for s in &fam {
            let (dim, kind, central) = cl.classify(&s.character)?;
            let norm = s.character.inner_int(&s.character)?;
            dims_ok &= dim as u64 == row.dim;
            norms_ok &= norm == 1;
            types_ok &= kind == MatrixType::SplitNonSemisimple && central == chi;
            t.push(vec![
                chi.to_string(),
                s.alpha.to_string(),
                s.beta.to_string(),
                s.j.to_string(),
                s.mu.to_string(),
                s.ext.to_string(),
                dim.to_string(),
                norm.to_string(),
                kind_name(kind).into(),
            ]);
            items.push(json!({"alpha": s.alpha, "beta": s.beta, "j": s.j, "mu": s.mu, "ext": s.ext, "dim": dim, "norm": norm, "type": kind}));
        }
        rep.check(format!("chi {chi}: distinct sns characters"), per_chi, fam.len());
        out.push(json!({"chi": chi, "characters": items}));
    }
    rep.check("dimension (q^2-1)q^(l-2)", true, dims_ok);
    rep.check("irreducible (norm 1)", true, norms_ok);
    rep.check("classified sns with central character chi", true, types_ok);
    rep.tables.push(t);
    rep.result = json!({"per_chi": out});
    Ok(rep)
}

pub fn hom(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("hom", cfg);
    let ell = cfg.ell()?;
    let g = cfg.group()?;
    require(g.is_materialized(), "hom needs the enumerated group; raise --budget-elems or lower --ell")?;
    let cd = class_data(&g)?;
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let mut t = Table::new("dim End(V^t_chi) by three routes", &["t", "chi", "mackey", "inner", "hecke"]);
    let mut out = Vec::new();
    let mut all = true;
    for tt in cfg.ts(0..=ell)? {
        for chi in cfg.chis(&chars)? {
            let pc = path_counts(&cd, &dgg_module(&g, &chars, chi, tt)?)?;
            all &= pc.agree();
            t.push(vec![tt.to_string(), chi.to_string(), pc.mackey.to_string(), pc.inner.to_string(), pc.hecke.to_string()]);
            out.push(json!({"t": tt, "chi": chi, "mackey": pc.mackey, "inner": pc.inner, "hecke": pc.hecke}));
        }
    }
    rep.check("Mackey sum = character norm = Hecke dimension", true, all);
    rep.tables.push(t);
    rep.result = json!({"modules": out});
    Ok(rep)
}

pub fn dgg(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("dgg", cfg);
    let ell = cfg.ell()?;
    require((1..=3).contains(&ell), "dgg needs --ell <= 3")?;
    let g = cfg.group()?;
    require(g.is_materialized(), "dgg needs the enumerated group; raise --budget-elems")?;
    let q = cfg.q();
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let dim = formulas::dgg_dim(q, ell) as i64;
    let mut out = Vec::new();
    if ell <= 2 {
        let (table, recs) = full_table(&g)?;
        for tt in cfg.ts(0..=ell)? {
            for chi in cfg.chis(&chars)? {
                let d = dgg_decompose(&table, &recs, chi, tt)?;
                let mut t = Table::new(format!("V^{tt}_chi, chi = {chi}"), &["type", "dim", "mult"]);
                for (r, m) in &d.constituents {
                    t.push(vec![kind_name(r.kind).into(), r.dim.to_string(), m.to_string()]);
                }
                t.push(vec!["total".into(), d.total_dim().to_string(), "".into()]);
                rep.tables.push(t);
                rep.check(format!("t={tt} chi={chi}: sum m dim"), dim, d.total_dim());
                dgg_checks(&mut rep, q, ell, tt, chi, &d.multiplicities(MatrixType::SplitSemisimple), &d.multiplicities(MatrixType::SplitNonSemisimple), d.multiplicities(MatrixType::Cuspidal).iter().sum::<i64>() > 0, d.multiplicities(MatrixType::Cuspidal).iter().all(|&m| m == 1));
                let cons: Vec<Value> = d.constituents.iter().map(|(r, m)| json!({"index": r.index, "type": r.kind, "dim": r.dim, "mult": m})).collect();
                out.push(json!({"t": tt, "chi": chi, "route": "character table", "constituents": cons}));
            }
        }
    } else {
        let cd = class_data(&g)?;
        let rows = formulas::regular_table(q, ell)?;
        let (ss_dim, sns_dim, cus_dim) = (rows[0].dim as i64, rows[1].dim as i64, rows[2].dim as i64);
        for chi in cfg.chis(&chars)? {
            let ss = ss_family(&cd, &chars, chi)?;
            let sns = sns_family(&cd, &chars, chi)?;
            for tt in cfg.ts(0..=ell)? {
                let d = regular_decomposition(&cd, &chars, chi, tt, &ss, &sns)?;
                let mut t = Table::new(format!("V^{tt}_chi, chi = {chi}"), &["type", "dim", "mult"]);
                t.push(vec!["non-reg (aggregate)".into(), d.nonregular_dim.to_string(), "1".into()]);
                for &m in d.ss.iter().filter(|&&m| m > 0) {
                    t.push(vec!["ss".into(), ss_dim.to_string(), m.to_string()]);
                }
                for &m in d.sns.iter().filter(|&&m| m > 0) {
                    t.push(vec!["sns".into(), sns_dim.to_string(), m.to_string()]);
                }
                if d.remaining_dim != 0 {
                    t.push(vec!["cus (aggregate)".into(), d.remaining_dim.to_string(), "1".into()]);
                }
                let total = d.nonregular_dim + ss_dim * d.ss.iter().sum::<i64>() + sns_dim * d.sns.iter().sum::<i64>() + d.remaining_dim;
                t.push(vec!["total".into(), total.to_string(), "".into()]);
                rep.tables.push(t);
                rep.check(format!("t={tt} chi={chi}: sum m dim"), dim, total);
                let ss_m: Vec<i64> = d.ss.iter().copied().filter(|&m| m > 0).collect();
                let sns_m: Vec<i64> = d.sns.iter().copied().filter(|&m| m > 0).collect();
                // at t = l the remainder is the cuspidal part; it is a sum of distinct
                // cuspidals exactly when its norm equals its degree over the cuspidal dimension
                let has_cus = d.remaining_dim > 0;
                dgg_checks(&mut rep, q, ell, tt, chi, &ss_m, &sns_m, has_cus, d.remaining_dim % cus_dim == 0);
                out.push(json!({
                    "t": tt, "chi": chi, "route": "constructions",
                    "nonregular_dim": d.nonregular_dim, "ss": d.ss, "sns": d.sns,
                    "remaining_dim": d.remaining_dim, "remainder_vanishes": d.remainder_vanishes,
                }));
            }
        }
    }
    rep.result = json!({"decompositions": out});
    Ok(rep)
}

/// Published statements about the regular constituents of `V^t_chi`.
#[allow(clippy::too_many_arguments)]
fn dgg_checks(rep: &mut Report, q: u64, ell: u32, t: u32, chi: usize, ss: &[i64], sns: &[i64], has_cus: bool, cus_free: bool) {
    if t < ell {
        rep.check(format!("t={t} chi={chi}: ss multiplicities all 2"), true, ss.iter().all(|&m| m == 2));
        rep.check(format!("t={t} chi={chi}: no cuspidal constituent"), false, has_cus);
        if ell >= 2 {
            rep.check(format!("t={t} chi={chi}: n_ss with multiplicity"), formulas::n_ss(q, ell) as i64, ss.iter().sum::<i64>());
            rep.check(format!("t={t} chi={chi}: n_sns with multiplicity"), formulas::n_sns(q, ell) as i64, sns.iter().sum::<i64>());
        }
        if let Ok(rows) = formulas::sns_table(q, ell, t) {
            let mut want: Vec<i64> = rows.iter().flat_map(|r| std::iter::repeat_n(r.mult as i64, r.count as usize)).filter(|&m| m > 0).collect();
            let mut got = sns.to_vec();
            want.sort();
            got.sort();
            rep.check(format!("t={t} chi={chi}: sns multiplicities"), want, got);
        }
    } else {
        rep.check(format!("t={t} chi={chi}: multiplicity free"), true, ss.iter().chain(sns).all(|&m| m == 1) && cus_free);
        rep.check(format!("t={t} chi={chi}: cuspidal constituents present"), true, has_cus);
    }
}

pub fn endo(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("endo", cfg);
    let ell = cfg.ell()?;
    let g = cfg.group()?;
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let mut t = Table::new("End(V^t_chi)", &["t", "chi", "square", "computed", "per character", "as printed", "matching lower chi"]);
    let mut out = Vec::new();
    for tt in cfg.ts(0..=ell)? {
        for chi in cfg.chis(&chars)? {
            let r = endo_report(&g, chi, tt, cfg.seed)?;
            let desc = |s: &Option<WedderburnSignature>| s.as_ref().map(|s| s.describe()).unwrap_or_else(|| "-".into());
            t.push(vec![
                tt.to_string(),
                chi.to_string(),
                r.square.to_string(),
                r.computed.describe(),
                desc(&r.per_character),
                desc(&r.printed),
                r.matching_lower.as_ref().map(|v| format!("{v:?}")).unwrap_or_else(|| "-".into()),
            ]);
            if let Some(p) = &r.per_character {
                rep.check(format!("t={tt} chi={chi}: per-character reading"), p.describe(), r.computed.describe());
            }
            if let Some(p) = &r.printed {
                if *p != r.computed {
                    rep.disputed(format!("t={tt} chi={chi}: as printed"), p.describe(), r.computed.describe());
                }
            }
            out.push(json!({
                "t": tt, "chi": chi, "square": r.square,
                "computed": r.computed.describe(),
                "per_character": r.per_character.as_ref().map(|s| s.describe()),
                "printed": r.printed.as_ref().map(|s| s.describe()),
                "printed_match": r.matches_printed(),
                "per_character_match": r.matches_per_character(),
                "matching_lower": r.matching_lower,
                "blocks": r.blocks,
            }));
        }
    }
    rep.tables.push(t);
    rep.result = json!({"algebras": out});
    Ok(rep)
}

/// Compares computed bounds with the per-character prediction and the
/// printed table.
fn bound_checks(rep: &mut Report, q: u64, ell: u32, t: u32, computed: usize) -> (Option<u64>, &'static str) {
    if let Ok(pred) = formulas::predicted_bound(q, ell, t) {
        rep.check(format!("a({t},{ell}) per-character prediction"), pred, computed);
    }
    match formulas::printed_bounds(q).into_iter().find(|e| e.t == t && e.ell == ell) {
        Some(e) if e.disputed => {
            rep.disputed(format!("a({t},{ell}) as printed"), e.printed, computed);
            (Some(e.printed), "disputed")
        }
        Some(e) => {
            let ok = rep.check(format!("a({t},{ell}) as printed"), e.printed, computed);
            (Some(e.printed), if ok { "match" } else { "mismatch" })
        }
        None => (None, "-"),
    }
}

pub fn a_bound_verb(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("a-bound", cfg);
    let ell = cfg.ell()?;
    require(ell >= 1, "--ell >= 1")?;
    let g = cfg.group()?;
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let chis = cfg.chis(&chars)?;
    let mut t = Table::new("Multiplicity bounds", &["t", "l", "computed", "printed", "status"]);
    let mut out = Vec::new();
    for tt in cfg.ts(0..=ell.saturating_sub(1))? {
        let b = a_bound(&g, tt, Some(&chis), cfg.seed)?;
        let (printed, status) = bound_checks(&mut rep, cfg.q(), ell, tt, b.bound);
        t.push(vec![tt.to_string(), ell.to_string(), b.bound.to_string(), printed.map(|p| p.to_string()).unwrap_or_else(|| "-".into()), status.into()]);
        let per: Vec<Value> = b.per_chi.iter().map(|(c, s)| json!({"chi": c, "signature": s.describe()})).collect();
        out.push(json!({"t": tt, "ell": ell, "bound": b.bound, "printed": printed, "per_chi": per}));
    }
    rep.tables.push(t);
    rep.result = json!({"bounds": out});
    Ok(rep)
}

pub fn strong_gelfand_verb(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("strong-gelfand", cfg);
    let ell = cfg.ell()?;
    require(ell <= 2, "strong-gelfand needs --ell <= 2 (full character tables); use w-check beyond")?;
    let g = cfg.group()?;
    let (table, _) = full_table(&g)?;
    let mut t = Table::new("max <Ind_H theta, rho>", &["H", "Irr(H)", "max multiplicity", "violations"]);
    let mut out = Vec::new();
    for k in [SubgroupKind::B, SubgroupKind::P2] {
        let h = build_subgroup(&g, &k)?;
        let r = strong_gelfand(&table, &h)?;
        rep.check(format!("{}: max multiplicity", r.subgroup), 1, r.max_multiplicity);
        t.push(vec![r.subgroup.clone(), r.subgroup_irreducibles.to_string(), r.max_multiplicity.to_string(), r.violations.len().to_string()]);
        out.push(json!(r));
    }
    rep.tables.push(t);
    rep.result = json!({"subgroups": out});
    Ok(rep)
}

pub fn w_check(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("w-check", cfg);
    let ell = cfg.ell()?;
    require(ell <= 3, "w-check needs --ell <= 3")?;
    let g = cfg.group()?;
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let mut t = Table::new("End(Ind_{Z^t U} (chi, chi', psi_t))", &["t", "modules", "multiplicity free", "largest block"]);
    let mut out = Vec::new();
    for tt in cfg.ts(0..=ell)? {
        let n = w_character_count(&g, tt)?;
        let (mut count, mut free, mut largest) = (0usize, 0usize, 0usize);
        let mut sigs = Vec::new();
        for chi in cfg.chis(&chars)? {
            for c2 in 0..n {
                let w = w_module_check(&g, chi, c2, tt, cfg.seed)?;
                count += 1;
                free += w.multiplicity_free as usize;
                largest = largest.max(w.signature.max_block());
                sigs.push(json!({"chi": chi, "chi2": c2, "signature": w.signature.describe()}));
            }
        }
        rep.check(format!("t={tt}: all multiplicity free"), count, free);
        t.push(vec![tt.to_string(), count.to_string(), free.to_string(), largest.to_string()]);
        out.push(json!({"t": tt, "modules": count, "multiplicity_free": free, "largest_block": largest, "signatures": sigs}));
    }
    rep.tables.push(t);
    rep.result = json!({"w_modules": out});
    Ok(rep)
}

pub fn gg_free(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("gg-free", cfg);
    let ell = cfg.ell()?;
    let g = cfg.group()?;
    let q = cfg.q();
    let chars = UnitCharacters::new(g.ring(), g.conductor())?;
    let chis = cfg.chis(&chars)?;
    let mut total = WedderburnSignature::default();
    let mut t = Table::new("End(V^l_chi)", &["chi", "signature"]);
    for &chi in &chis {
        let s = HeckeAlgebra::dgg(&g, &chars, chi, ell)?.signature(cfg.seed)?;
        rep.check(format!("chi={chi}: q^l blocks of size 1"), format!("{}xM1", q.pow(ell)), s.describe());
        t.push(vec![chi.to_string(), s.describe()]);
        total = total.merge(&s);
    }
    if chis.len() == chars.count() {
        rep.check("all chi: q^(2l-1)(q-1) blocks of size 1", format!("{}xM1", q.pow(2 * ell - 1) * (q - 1)), total.describe());
    }
    rep.tables.push(t);
    let free = total.is_multiplicity_free();
    let blocks = total.blocks.iter().map(|(m, c)| format!("{m}x{c}")).collect::<Vec<_>>().join(", ");
    rep.notes.push(format!("multiplicity-free: {free}, blocks ({blocks})"));
    rep.result = json!({"multiplicity_free": free, "signature": total.describe(), "characters": chis.len()});
    Ok(rep)
}

pub fn bound_table(cfg: &Config) -> VResult<Report> {
    let mut rep = new_report("bound-table", cfg);
    let q = cfg.q();
    let max_ell = cfg.ell.unwrap_or(4);
    require((2..=4).contains(&max_ell), "bound-table covers 2 <= l <= 4; --ell sets the largest l")?;
    let mut t = Table::new("Multiplicity bounds a(t, l)", &["t", "l", "printed", "computed", "status"]);
    let mut out = Vec::new();
    for e in formulas::printed_bounds(q).into_iter().filter(|e| e.ell <= max_ell) {
        if cfg.t.is_some_and(|tt| tt != e.t) {
            continue;
        }
        let ring = Ring::new(cfg.p, e.ell, cfg.flavor)?;
        let g = Gl2::with_budget(&ring, cfg.budget_elems.unwrap_or(DEFAULT_ELEMENT_BUDGET))?;
        let chars = UnitCharacters::new(g.ring(), g.conductor())?;
        let chis = cfg.chis(&chars)?;
        let b = a_bound(&g, e.t, Some(&chis), cfg.seed)?;
        let (_, status) = bound_checks(&mut rep, q, e.ell, e.t, b.bound);
        t.push(vec![e.t.to_string(), e.ell.to_string(), e.printed.to_string(), b.bound.to_string(), status.into()]);
        out.push(json!({"t": e.t, "ell": e.ell, "printed": e.printed, "computed": b.bound, "disputed": e.disputed}));
    }
    rep.tables.push(t);
    rep.result = json!({"entries": out});
    Ok(rep)
}
