use super::{AExp, BExp, Com};

fn aexp(e: &AExp, min_prec: u8, out: &mut String) {
    let prec = match e {
        AExp::Plus(..) | AExp::Minus(..) => 1,
        AExp::Times(..) => 2,
        AExp::IntLit(_) | AExp::Var(_) => 3,
    };
    let parens = prec < min_prec;
    if parens {
        out.push('(');
    }
    match e {
        AExp::IntLit(v) => out.push_str(&v.to_string()),
        AExp::Var(x) => out.push_str(x),
        AExp::Plus(l, r) | AExp::Minus(l, r) => {
            aexp(l, 1, out);
            out.push_str(if matches!(e, AExp::Plus(..)) {
                " + "
            } else {
                " - "
            });
            aexp(r, 2, out);
        }
        AExp::Times(l, r) => {
            aexp(l, 2, out);
            out.push_str(" * ");
            aexp(r, 3, out);
        }
    }
    if parens {
        out.push(')');
    }
}

fn bexp(b: &BExp, out: &mut String) {
    match b {
        BExp::BoolLit(v) => out.push_str(if *v { "true" } else { "false" }),
        BExp::Eq(l, r) | BExp::Le(l, r) => {
            aexp(l, 1, out);
            out.push_str(if matches!(b, BExp::Eq(..)) {
                " = "
            } else {
                " <= "
            });
            aexp(r, 1, out);
        }
        BExp::Not(inner) => {
            out.push_str("not (");
            bexp(inner, out);
            out.push(')');
        }
        BExp::And(l, r) => {
            bexp(l, out);
            out.push_str(" and ");
            if matches!(**r, BExp::And(..)) {
                out.push('(');
                bexp(r, out);
                out.push(')');
            } else {
                bexp(r, out);
            }
        }
    }
}

fn com(c: &Com, out: &mut String) {
    match c {
        Com::Skip => out.push_str("skip"),
        Com::Assign(x, e) => {
            out.push_str(x);
            out.push_str(" := ");
            aexp(e, 1, out);
        }
        Com::Seq(a, b) => {
            com(a, out);
            out.push_str("; ");
            com(b, out);
        }
        Com::If(b, t, e) => {
            out.push_str("if ");
            bexp(b, out);
            out.push_str(" then ");
            com(t, out);
            out.push_str(" else ");
            com(e, out);
            out.push_str(" end");
        }
        Com::While(b, body) => {
            out.push_str("while ");
            bexp(b, out);
            out.push_str(" do ");
            com(body, out);
            out.push_str(" done");
        }
    }
}

/// Canonical single-line concrete syntax.
///
/// The grammar has no brackets for commands, so a left-nested `Seq` prints
/// the same as its right-nested form; [`super::parse`] always returns the
/// right-nested one.
pub fn pretty(c: &Com) -> String {
    let mut out = String::new();
    com(c, &mut out);
    out
}
