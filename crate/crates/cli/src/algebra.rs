//! `algebra` subcommands: monomial-ideal and Gröbner basis computations on text input.

use anyhow::{bail, Result};
use clap::Subcommand;
use ideal_rpm::groebner::{buchberger, ideal_member, TermOrder};
use ideal_rpm::io::json::resolve_schema;
use ideal_rpm::io::text::{parse_ideal, parse_polynomial, parse_polynomials, VarNames};
use ideal_rpm::{primary_decompose, Concept, QPolynomial, VariableId};

use crate::GlobalOpts;

#[derive(Subcommand, Debug, Clone)]
pub enum AlgebraOp {
    /// Primary decomposition, one component per line.
    Pd { ideal: String },
    /// Minimal generating set.
    Mingen { ideal: String },
    /// Intersection of two ideals.
    Intersect { a: String, b: String },
    /// Sum of two ideals.
    Sum { a: String, b: String },
    /// Product of two ideals.
    Product { a: String, b: String },
    /// Radical (squarefree part of every generator).
    Radical { ideal: String },
    /// Prints `true` when the monomial lies in the ideal.
    Member { ideal: String, monomial: String },
    /// Reduced Gröbner basis (grevlex, variables ranked by first appearance).
    Gb {
        /// Comma-separated polynomials, e.g. `x^2 - y, x^3 - z`.
        polys: String,
        /// Also test membership of this polynomial.
        #[arg(long)]
        member: Option<String>,
    },
}

fn names(g: &GlobalOpts) -> Result<VarNames> {
    Ok(match &g.schema {
        Some(s) => VarNames::from_schema(&resolve_schema(s)?),
        None => VarNames::new(),
    })
}

pub fn run(g: &GlobalOpts, op: AlgebraOp) -> Result<()> {
    let mut vars = names(g)?;
    let ideal = parse_ideal;
    let out: Vec<Concept> = match op {
        AlgebraOp::Pd { ideal: text } => {
            let j = ideal(&text, &mut vars)?;
            primary_decompose(&j)?.into_components()
        }
        AlgebraOp::Mingen { ideal: text } => vec![ideal(&text, &mut vars)?],
        AlgebraOp::Radical { ideal: text } => vec![ideal(&text, &mut vars)?.radical()],
        AlgebraOp::Intersect { a, b } => vec![ideal(&a, &mut vars)?.intersect(&ideal(&b, &mut vars)?)],
        AlgebraOp::Sum { a, b } => vec![ideal(&a, &mut vars)?.sum(&ideal(&b, &mut vars)?)],
        AlgebraOp::Product { a, b } => vec![ideal(&a, &mut vars)?.product(&ideal(&b, &mut vars)?)],
        AlgebraOp::Member { ideal: text, monomial } => {
            let j = ideal(&text, &mut vars)?;
            let m = ideal(&monomial, &mut vars)?;
            let [g] = m.mingen() else { bail!("`{monomial}` is not a single monomial") };
            println!("{}", j.member(g));
            return Ok(());
        }
        AlgebraOp::Gb { polys, member } => {
            let ord = TermOrder::default();
            let gens: Vec<QPolynomial> = parse_polynomials(&polys, &mut vars, &ord)?;
            let probe: Option<QPolynomial> = member.map(|p| parse_polynomial(&p, &mut vars, &ord)).transpose()?;
            let gb = buchberger(&gens, &ord)?;
            let name = |v: VariableId| vars.name(v);
            for p in gb.elements() {
                println!("{}", p.display_with(&name));
            }
            if let Some(p) = probe {
                println!("member: {}", ideal_member(&p, &gb));
            }
            return Ok(());
        }
    };
    let name = |v: VariableId| vars.name(v);
    for c in &out {
        println!("{}", c.display_with(&name));
    }
    Ok(())
}
