use std::fmt::{self, Write};

use crate::syntax::{Side, Term};

// Binding strength of each surface form; a child printed in a slot that
// demands more gets parenthesised.
const EXPR: u8 = 0;
const SUM: u8 = 1;
const SMUL: u8 = 2;
const APP: u8 = 3;
const ATOM: u8 = 4;

fn level(t: &Term) -> u8 {
    match t {
        Term::Lam { .. } => EXPR,
        Term::Sum(..) => SUM,
        Term::Smul(..) => SMUL,
        Term::App(..) => APP,
        _ => ATOM,
    }
}

/// Render a term in the concrete syntax accepted by
/// [`parse_term`](crate::syntax::parse_term).
pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, EXPR).expect("writing to a String cannot fail");
    s
}

fn write_term(out: &mut String, t: &Term, min: u8) -> fmt::Result {
    if level(t) < min {
        out.push('(');
        write_node(out, t)?;
        out.push(')');
        Ok(())
    } else {
        write_node(out, t)
    }
}

fn write_node(out: &mut String, t: &Term) -> fmt::Result {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Sum(a, b) => {
            write_term(out, a, SUM)?;
            out.push_str(" <+> ");
            write_term(out, b, SMUL)?;
        }
        Term::Smul(s, a) => {
            write!(out, "{s} <.> ")?;
            write_term(out, a, SMUL)?;
        }
        Term::Star(s) => write!(out, "star({s})")?,
        Term::ElimOne(a, b) => {
            out.push_str("let1(");
            write_term(out, a, EXPR)?;
            out.push_str(", ");
            write_term(out, b, EXPR)?;
            out.push(')');
        }
        Term::Lam { var, ty, body } => {
            write!(out, "\\{var}:{ty}. ")?;
            write_term(out, body, EXPR)?;
        }
        Term::App(f, a) => {
            write_term(out, f, APP)?;
            out.push(' ');
            write_term(out, a, ATOM)?;
        }
        Term::Tens(a, b) | Term::Pair(a, b) => {
            out.push_str(if matches!(t, Term::Tens(..)) {
                "tens("
            } else {
                "pair("
            });
            write_term(out, a, EXPR)?;
            out.push_str(", ");
            write_term(out, b, EXPR)?;
            out.push(')');
        }
        Term::ElimTens {
            scrut,
            left,
            left_ty,
            right,
            right_ty,
            body,
        } => {
            out.push_str("lettens(");
            write_term(out, scrut, EXPR)?;
            write!(out, ", {left}:{left_ty}, {right}:{right_ty}. ")?;
            write_term(out, body, EXPR)?;
            out.push(')');
        }
        Term::Unit => out.push_str("unit"),
        Term::ElimZero { scrut, ty } => {
            out.push_str("abort");
            if let Some(ty) = ty {
                write!(out, "[{ty}]")?;
            }
            out.push('(');
            write_term(out, scrut, EXPR)?;
            out.push(')');
        }
        Term::ElimWith {
            side,
            scrut,
            var,
            ty,
            body,
        } => {
            out.push_str(match side {
                Side::Left => "fst(",
                Side::Right => "snd(",
            });
            write_term(out, scrut, EXPR)?;
            write!(out, ", {var}:{ty}. ")?;
            write_term(out, body, EXPR)?;
            out.push(')');
        }
        Term::Inj { side, arg, other } => {
            let kw = match side {
                Side::Left => "inl",
                Side::Right => "inr",
            };
            write!(out, "{kw}[{other}](")?;
            write_term(out, arg, EXPR)?;
            out.push(')');
        }
        Term::ElimPlus {
            scrut,
            left,
            left_ty,
            left_body,
            right,
            right_ty,
            right_body,
        } => {
            out.push_str("case(");
            write_term(out, scrut, EXPR)?;
            write!(out, ", {left}:{left_ty}. ")?;
            write_term(out, left_body, EXPR)?;
            write!(out, ", {right}:{right_ty}. ")?;
            write_term(out, right_body, EXPR)?;
            out.push(')');
        }
        Term::Bang(a) => {
            out.push_str("bang(");
            write_term(out, a, EXPR)?;
            out.push(')');
        }
        Term::ElimBang {
            scrut,
            var,
            ty,
            body,
        } => {
            out.push_str("letbang(");
            write_term(out, scrut, EXPR)?;
            write!(out, ", {var}:{ty}. ")?;
            write_term(out, body, EXPR)?;
            out.push(')');
        }
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Semiring;
    use crate::syntax::{parse_term, Type};

    #[test]
    fn prints_matrix_example() {
        let src = "\\x:I & I. fst(x, y:I. let1(y, pair(star(1), star(2)))) <+> snd(x, z:I. let1(z, pair(star(3), star(4))))";
        let t = parse_term(src, Semiring::Nat).unwrap();
        assert_eq!(print_term(&t), src);
    }

    #[test]
    fn parenthesises_lambda_operands() {
        let id = Term::lam("x", Type::One, Term::var("x"));
        let t = Term::sum(id.clone(), Term::app(id.clone(), Term::var("y")));
        assert_eq!(print_term(&t), "(\\x:I. x) <+> (\\x:I. x) y");
        let nested = Term::app(
            Term::var("f"),
            Term::app(Term::var("g"), Term::var("y")),
        );
        assert_eq!(print_term(&nested), "f (g y)");
        let right_sum = Term::sum(
            Term::var("a"),
            Term::sum(Term::var("b"), Term::var("c")),
        );
        assert_eq!(print_term(&right_sum), "a <+> (b <+> c)");
    }
}
