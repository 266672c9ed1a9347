//! Text, JSON and CAS renderings of generator lists.

use std::collections::BTreeMap;

use mrees_core::rees::{Family, ReesPresentation};
use mrees_core::{Coefficient, Poly, VarUniverse};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Cas,
}

/// `T[1;1,0]` becomes `T_1_1_0`; other names pass through.
pub fn cas_name(name: &str) -> String {
    name.chars()
        .filter_map(|c| match c {
            '[' | ';' | ',' => Some('_'),
            ']' => None,
            c => Some(c),
        })
        .collect()
}

pub fn terms_json<C: Coefficient>(p: &Poly<C>) -> Value {
    let u = p.universe();
    let terms: Vec<Value> = p
        .display_terms()
        .into_iter()
        .map(|(m, c)| {
            let mono: BTreeMap<String, u32> = m.iter().map(|(v, e)| (u.name(v).to_string(), e)).collect();
            json!({"coefficient": c.to_string(), "monomial": mono})
        })
        .collect();
    json!({"text": p.to_string(), "terms": terms})
}

fn cas_poly<C: Coefficient>(p: &Poly<C>) -> String {
    let text = p.to_string();
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == 'T' && chars.peek() == Some(&'[') {
            let mut name = String::from("T");
            for d in chars.by_ref() {
                name.push(d);
                if d == ']' {
                    break;
                }
            }
            out.push_str(&cas_name(&name));
        } else {
            out.push(c);
        }
    }
    out
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::FullIbin => "full",
        Family::Restricted => "restricted",
    }
}

fn e_rows<C: Coefficient>(pres: &ReesPresentation<C>) -> Vec<Vec<Option<String>>> {
    (0..pres.e.n_rows())
        .map(|r| {
            (0..pres.e.n_cols())
                .map(|c| pres.e.get((r, c)).map(|&v| pres.universe.name(v).to_string()))
                .collect()
        })
        .collect()
}

fn ring_variables<C: Coefficient>(pres: &ReesPresentation<C>) -> Vec<String> {
    let u: &VarUniverse = &pres.universe;
    let coeff = match pres.spec.seq.mode {
        mrees_core::sseq::SeqMode::Generic => u.s_vars(),
        mrees_core::sseq::SeqMode::Concrete => u.x_vars(),
    };
    coeff
        .iter()
        .chain(&pres.t_variables)
        .map(|&v| cas_name(u.name(v)))
        .collect()
}

pub fn generators<C: Coefficient>(
    pres: &ReesPresentation<C>,
    gens: &[Poly<C>],
    family: Family,
    seed: u64,
    format: Format,
) -> String {
    match format {
        Format::Text => {
            let mut s = format!("# mrees generators seed={seed} family={}\n", family_name(family));
            for w in &pres.warnings {
                s.push_str(&format!("# warning: {w}\n"));
            }
            s.push_str(&format!("E_a ({} x {}):\n", pres.e.n_rows(), pres.e.n_cols()));
            s.push_str(&pres.render_e());
            s.push_str(&format!("generators ({}):\n", gens.len()));
            for g in gens {
                s.push_str(&format!("{g}\n"));
            }
            s
        }
        Format::Json => {
            let v = json!({
                "seed": seed,
                "family": family_name(family),
                "coefficients": C::DOMAIN.to_string(),
                "spec": serde_json::to_value(pres.spec.to_file()).expect("spec serializes"),
                "warnings": pres.warnings,
                "e_a": e_rows(pres),
                "generators": gens.iter().map(terms_json).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Cas => {
            let mut s = format!("-- mrees generators seed={seed} family={}\n", family_name(family));
            if pres.spec.seq.mode == mrees_core::sseq::SeqMode::Concrete {
                s.push_str("-- sequence values: ");
                let vals: Vec<String> = pres
                    .spec
                    .seq
                    .names
                    .iter()
                    .zip(&pres.s_values)
                    .map(|(n, v)| format!("{n} = {v}"))
                    .collect();
                s.push_str(&vals.join(", "));
                s.push('\n');
            }
            let field = match C::DOMAIN {
                mrees_core::Domain::Integers => "ZZ",
                mrees_core::Domain::Rationals => "QQ",
            };
            s.push_str(&format!("R = {field}[{}];\n", ring_variables(pres).join(", ")));
            let body: Vec<String> = gens
                .iter()
                .map(|g| format!("  {}", cas_poly(&pres.concretize(g).expect("values live in the universe"))))
                .collect();
            s.push_str(&format!("I = ideal(\n{}\n);\n", body.join(",\n")));
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cas_names() {
        assert_eq!(cas_name("T[1;1,0]"), "T_1_1_0");
        assert_eq!(cas_name("p1"), "p1");
    }
}
