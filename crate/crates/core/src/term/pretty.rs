use crate::error::TermError;

use super::{NamingContext, Term};

/// Deterministic binder names: the base names first, then the first base
/// name with numeric suffixes (`x, y, z, x1, x2, ...`), skipping anything
/// already taken.
#[derive(Debug, Clone, Copy)]
pub struct NameSupply {
    bases: &'static [&'static str],
}

impl NameSupply {
    pub const TERMS: NameSupply = NameSupply {
        bases: &["x", "y", "z"],
    };
    pub const TYPES: NameSupply = NameSupply {
        bases: &["a", "b", "c"],
    };

    pub fn fresh<'a, I>(&self, taken: I) -> String
    where
        I: IntoIterator<Item = &'a str> + Clone,
    {
        let free = |cand: &str| !taken.clone().into_iter().any(|t| t == cand);
        if let Some(base) = self.bases.iter().find(|b| free(b)) {
            return (*base).to_owned();
        }
        (1..)
            .map(|n| format!("{}{n}", self.bases[0]))
            .find(|cand| free(cand))
            .expect("unbounded name supply")
    }
}

/// Prints a term in the surface syntax accepted by [`parse`](super::parse).
pub fn pretty(t: &Term, ctx: &NamingContext) -> Result<String, TermError> {
    let mut names: Vec<String> = ctx.names().to_vec();
    let mut out = String::new();
    write_term(t, &mut names, &mut out)?;
    Ok(out)
}

fn write_term(t: &Term, names: &mut Vec<String>, out: &mut String) -> Result<(), TermError> {
    match t {
        Term::Var(i) => {
            let name = names
                .len()
                .checked_sub(i + 1)
                .map(|k| names[k].clone())
                .ok_or(TermError::IndexOutOfRange { index: *i })?;
            out.push_str(&name);
        }
        Term::Lam(body) => {
            let name = NameSupply::TERMS.fresh(names.iter().map(String::as_str));
            out.push('\\');
            out.push_str(&name);
            out.push_str(". ");
            names.push(name);
            let r = write_term(body, names, out);
            names.pop();
            r?;
        }
        Term::App(f, a) => {
            if f.is_lam() {
                out.push('(');
                write_term(f, names, out)?;
                out.push(')');
            } else {
                write_term(f, names, out)?;
            }
            out.push(' ');
            if let Term::Var(_) = **a {
                write_term(a, names, out)?;
            } else {
                out.push('(');
                write_term(a, names, out)?;
                out.push(')');
            }
        }
    }
    Ok(())
}
