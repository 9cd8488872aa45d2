//! Text and LaTeX rendering of product tables.

use crate::coeffring::{BaseScalar, Coefficient, Monomial, QuantumScalar};
use crate::corrections::CorrectionFunction;
use crate::exactnum::rational::latex_rational;
use crate::exactnum::Cyclotomic;

use super::{ExcClass, ProductTable, TableKind};

pub trait ToLatex {
    fn to_latex(&self) -> String;
}

fn join_latex(parts: &[String]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => out.push_str(&format!(" - {rest}")),
            None => out.push_str(&format!(" + {p}")),
        }
    }
    out
}

/// A sum or difference outside any brackets.
fn is_compound(s: &str) -> bool {
    let mut depth = 0i32;
    for (k, c) in s.chars().enumerate() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            '+' | '-' if depth == 0 && k > 0 => return true,
            _ => {}
        }
    }
    false
}

/// `coeff·atom` with unit coefficients elided and compound ones wrapped.
fn latex_term(coeff: &str, atom: &str) -> String {
    if atom.is_empty() {
        return coeff.to_string();
    }
    match coeff {
        "1" => atom.to_string(),
        "-1" => format!("-{atom}"),
        c if is_compound(c) => format!("\\left({c}\\right) {atom}"),
        c => format!("{c} {atom}"),
    }
}

impl ToLatex for Cyclotomic {
    fn to_latex(&self) -> String {
        let me = self.minimized();
        let n = me.conductor();
        let parts: Vec<String> = me
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(_, c)| !num::Zero::is_zero(*c))
            .map(|(j, c)| {
                let atom = match j {
                    0 => String::new(),
                    1 => format!("\\zeta_{{{n}}}"),
                    _ => format!("\\zeta_{{{n}}}^{{{j}}}"),
                };
                latex_term(&latex_rational(c), &atom)
            })
            .collect();
        join_latex(&parts)
    }
}

impl ToLatex for CorrectionFunction {
    fn to_latex(&self) -> String {
        let mut parts = Vec::new();
        if !self.constant_term().is_zero() {
            parts.push(self.constant_term().to_latex());
        }
        for (idx, c) in self.terms() {
            parts.push(latex_term(
                &c.to_latex(),
                &format!("\\delta_{{{}{}}}", idx.mu, idx.nu),
            ));
        }
        join_latex(&parts)
    }
}

fn monomial_latex(mono: Monomial, rank: u32) -> String {
    let power = |name: &str, e: u32| match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{{{e}}}"),
    };
    if rank == 1 {
        power("K", mono.l)
    } else {
        format!("{}{}", power("L", mono.l), power("M", mono.m))
    }
}

impl ToLatex for BaseScalar {
    fn to_latex(&self) -> String {
        let parts: Vec<String> = self
            .terms()
            .iter()
            .map(|(mono, c)| latex_term(&c.to_latex(), &monomial_latex(*mono, self.rank())))
            .collect();
        join_latex(&parts)
    }
}

impl ToLatex for QuantumScalar {
    fn to_latex(&self) -> String {
        let parts: Vec<String> = self
            .terms()
            .iter()
            .map(|(mono, f)| latex_term(&f.to_latex(), &monomial_latex(*mono, self.rank())))
            .collect();
        join_latex(&parts)
    }
}

struct Names {
    basis: &'static str,
    text_op: &'static str,
    latex_op: &'static str,
}

fn names(kind: &TableKind) -> Names {
    match kind {
        TableKind::ChenRuan => Names {
            basis: "e",
            text_op: "·",
            latex_op: "\\cup_{\\rm{CR}}",
        },
        TableKind::Cup => Names {
            basis: "E",
            text_op: "·",
            latex_op: "\\cup",
        },
        TableKind::Quantum | TableKind::QuantumAt { .. } => Names {
            basis: "E",
            text_op: "*",
            latex_op: "\\ast_{\\rho}",
        },
    }
}

fn text_term(coeff: String, atom: &str) -> String {
    match coeff.as_str() {
        "1" => atom.to_string(),
        "-1" => format!("-{atom}"),
        c if is_compound(c) => format!("({c})·{atom}"),
        c => format!("{c}·{atom}"),
    }
}

fn class_text<C: Coefficient>(class: &ExcClass<C>, basis: &str) -> String {
    let mut parts = Vec::new();
    if !class.s_coeff().is_zero() {
        parts.push(text_term(class.s_coeff().to_string(), "s"));
    }
    for (l, c) in class.basis_coeffs().iter().enumerate() {
        if !c.is_zero() {
            parts.push(text_term(c.to_string(), &format!("{basis}{}", l + 1)));
        }
    }
    if parts.is_empty() {
        return "0".into();
    }
    crate::coeffring::join_signed(&parts, " ")
}

fn class_latex<C: Coefficient + ToLatex>(class: &ExcClass<C>, basis: &str) -> Vec<String> {
    let mut parts = Vec::new();
    if !class.s_coeff().is_zero() {
        parts.push(latex_term(&class.s_coeff().to_latex(), "[S]"));
    }
    for (l, c) in class.basis_coeffs().iter().enumerate() {
        if !c.is_zero() {
            let coeff = c.to_latex();
            let atom = format!("{basis}_{}", l + 1);
            parts.push(if is_compound(&coeff) {
                format!("\\left[ {coeff} \\right] {atom}")
            } else {
                latex_term(&coeff, &atom)
            });
        }
    }
    parts
}

/// One line per unordered pair `i <= j`, e.g. `E1*E2 = s + ...`.
pub fn render_text<C: Coefficient>(table: &ProductTable<C>) -> String {
    let nm = names(table.kind());
    let mut out = String::new();
    for i in 1..=table.rank() {
        for j in i..=table.rank() {
            out.push_str(&format!(
                "{b}{i}{op}{b}{j} = {}\n",
                class_text(table.entry(i, j), nm.basis),
                b = nm.basis,
                op = nm.text_op
            ));
        }
    }
    out
}

/// An `eqnarray*` block with each basis term on its own continuation line.
pub fn render_latex<C: Coefficient + ToLatex>(table: &ProductTable<C>) -> String {
    let nm = names(table.kind());
    let mut lines = Vec::new();
    for i in 1..=table.rank() {
        for j in i..=table.rank() {
            let parts = class_latex(table.entry(i, j), nm.basis);
            let lhs = format!("{b}_{i} {op} {b}_{j}", b = nm.basis, op = nm.latex_op);
            let first = parts.first().cloned().unwrap_or_else(|| "0".into());
            lines.push(format!("{lhs} &=& {first}"));
            for p in parts.iter().skip(1) {
                let signed = match p.strip_prefix('-') {
                    Some(rest) => format!("- {rest}"),
                    None => format!("+ {p}"),
                };
                lines.push(format!("    & & {signed}"));
            }
        }
    }
    format!(
        "\\begin{{eqnarray*}}\n{}\n\\end{{eqnarray*}}\n",
        lines.join(" \\\\\n")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanData;
    use crate::ringtables::{cr_table, cup_table};

    #[test]
    fn chen_ruan_text() {
        let text = render_text(&cr_table(2));
        assert_eq!(text, "e1·e1 = 1/3·L·e2\ne1·e2 = 1/3·s\ne2·e2 = 1/3·M·e1\n");
    }

    #[test]
    fn cup_text_and_latex() {
        let t = cup_table(&CartanData::build(2));
        let text = render_text(&t);
        assert!(
            text.starts_with("E1·E1 = -2·s + (2/3·L+M)·E1 + 2/3·M·E2\n"),
            "{text}"
        );
        let latex = render_latex(&t);
        assert!(
            latex.contains("E_1 \\cup E_2 &=& [S] \\\\\n    & & - \\frac{1}{3} L E_1"),
            "{latex}"
        );
    }

    #[test]
    fn cyclotomic_latex() {
        let x = &Cyclotomic::zeta(12, 1) + &Cyclotomic::zeta(12, 11);
        assert_eq!(x.to_latex(), "2 \\zeta_{12} - \\zeta_{12}^{3}");
    }
}
