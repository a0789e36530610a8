//! `dgg`: reproduce and check the tables of degenerate Gelfand-Graev
//! modules of `GL_2(o_l)`.
//!
//! Exit status: 0 when every comparison matches (or nothing is compared),
//! 1 when a comparison against a published value fails, 2 on usage or
//! computation errors, including an exceeded element budget.

mod report;
mod verbs;

use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use dgg_core::ring::Flavor;

use verbs::{Config, VerbError};

#[derive(Parser, Debug)]
#[command(name = "dgg", version, about = "Degenerate Gelfand-Graev modules of GL_2 over finite local rings")]
struct Cli {
    /// Residue characteristic (odd prime; q = p).
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,
    /// Length l of the ring o_l.
    #[arg(long, global = true)]
    ell: Option<u32>,
    /// Model of o_l: integers mod p^l or truncated polynomials F_p[t]/t^l.
    #[arg(long, global = true, value_enum, default_value_t = FlavorArg::Zmod)]
    flavor: FlavorArg,
    /// Restrict to one level t.
    #[arg(long, global = true)]
    t: Option<u32>,
    /// Restrict to one central character (index into the characters of o_l^x).
    #[arg(long, global = true)]
    chi: Option<usize>,
    /// Seed for the randomized algebra routines (results do not depend on it).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group that may be enumerated.
    #[arg(long, global = true)]
    budget_elems: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Zmod,
    Tpoly,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Ring and group facts, with the group order and the number of
    /// injective character pairs checked against their formulas.
    RingInfo,
    /// Numbers and degrees of regular irreducibles (l >= 2); computed from
    /// the character table at l = 2 and from the constructions at l = 3.
    RegularTable,
    /// Borel-induced split semisimple characters (l = 2 or 3).
    ConstructSs,
    /// Split non-semisimple characters induced from N C(A) (l = 3).
    ConstructSns,
    /// dim End(V^t_chi) by Mackey sum, character norm and Hecke basis.
    Hom,
    /// Decomposition of V^t_chi with multiplicities (l <= 3).
    Dgg,
    /// Wedderburn type of End(V^t_chi) against the published recursion.
    Endo,
    /// Multiplicity bound a(t, l) for t < l.
    ABound,
    /// Strong Gelfand property of the Borel and mirabolic subgroups (l <= 2).
    StrongGelfand,
    /// Multiplicity freeness of Ind_{Z^t U} (chi, chi', psi_t) (l <= 3).
    WCheck,
    /// Multiplicity freeness of the Gelfand-Graev module V^l_chi.
    GgFree,
    /// Every entry of the published bound table with l up to --ell (default 4).
    BoundTable,
}

fn run(cli: &Cli) -> Result<report::Report, VerbError> {
    let cfg = Config {
        p: cli.p,
        ell: cli.ell,
        flavor: match cli.flavor {
            FlavorArg::Zmod => Flavor::Zmod,
            FlavorArg::Tpoly => Flavor::Tpoly,
        },
        t: cli.t,
        chi: cli.chi,
        seed: cli.seed,
        budget_elems: cli.budget_elems,
    };
    match cli.verb {
        Verb::RingInfo => verbs::ring_info(&cfg),
        Verb::RegularTable => verbs::regular_table(&cfg),
        Verb::ConstructSs => verbs::construct_ss(&cfg),
        Verb::ConstructSns => verbs::construct_sns(&cfg),
        Verb::Hom => verbs::hom(&cfg),
        Verb::Dgg => verbs::dgg(&cfg),
        Verb::Endo => verbs::endo(&cfg),
        Verb::ABound => verbs::a_bound_verb(&cfg),
        Verb::StrongGelfand => verbs::strong_gelfand_verb(&cfg),
        Verb::WCheck => verbs::w_check(&cfg),
        Verb::GgFree => verbs::gg_free(&cfg),
        Verb::BoundTable => verbs::bound_table(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(rep) => {
            let text = match cli.format {
                Format::Json => rep.emit_json(),
                Format::Md => rep.emit_markdown(),
            };
            print!("{text}");
            ExitCode::from(exit_status(rep.published_match()))
        }
        Err(e) => {
            eprintln!("dgg: {e}");
            if let VerbError::Usage(_) = e {
                let mut cmd = Cli::command();
                let name = format!("{:?}", cli.verb);
                if let Some(sub) = cmd.find_subcommand_mut(kebab(&name).as_str()) {
                    eprintln!("{}", sub.render_help());
                }
            }
            ExitCode::from(2)
        }
    }
}

/// 1 when a counted comparison failed, 0 otherwise.
fn exit_status(published_match: Option<bool>) -> u8 {
    match published_match {
        Some(false) => 1,
        _ => 0,
    }
}

fn kebab(s: &str) -> String {
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if c.is_uppercase() {
            if i > 0 {
                out.push('-');
            }
            out.extend(c.to_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use report::Report;
    use serde_json::json;

    #[test]
    fn mismatch_sets_exit_one() {
        let mut r = Report::new("hom", json!({}), json!({}));
        assert_eq!(exit_status(r.published_match()), 0);
        r.check("a", 1, 1);
        r.disputed("b", 6, 2);
        assert_eq!(r.published_match(), Some(true));
        assert_eq!(exit_status(r.published_match()), 0);
        assert!(!r.check("c", 1, 2));
        assert_eq!(exit_status(r.published_match()), 1);
        assert!(r.emit_markdown().ends_with("published match: false\n"));
    }

    #[test]
    fn verb_names_are_kebab_case() {
        assert_eq!(kebab("StrongGelfand"), "strong-gelfand");
        assert_eq!(kebab("ABound"), "a-bound");
        assert!(Cli::command().find_subcommand("a-bound").is_some());
    }
}
