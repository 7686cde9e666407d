use super::{ArrowUpdate, Formula};

const IMPLIES: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

/// Renders a formula in the ASCII grammar with minimal parentheses, folding
/// expanded connectives back into `&`, `->`, `F`, `<a>` and `<*>`.
/// Duplicate update clauses are dropped.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, IMPLIES, &mut out);
    out
}

fn write(f: &Formula, level: u8, out: &mut String) {
    if let Some((a, b)) = f.as_and() {
        paren(level > AND, out, |out| {
            write(a, AND, out);
            out.push_str(" & ");
            write(b, UNARY, out);
        });
        return;
    }
    match f {
        Formula::Top => out.push('T'),
        Formula::Atom(p) => out.push_str(p.as_str()),
        Formula::Neg(inner) => match inner.as_ref() {
            Formula::Top => out.push('F'),
            Formula::Box(a, body) if matches!(body.as_ref(), Formula::Neg(_)) => {
                let Formula::Neg(x) = body.as_ref() else {
                    unreachable!()
                };
                out.push('<');
                out.push_str(a.as_str());
                out.push('>');
                write(x, UNARY, out);
            }
            Formula::Arbitrary(body) if matches!(body.as_ref(), Formula::Neg(_)) => {
                let Formula::Neg(x) = body.as_ref() else {
                    unreachable!()
                };
                out.push_str("<*>");
                write(x, UNARY, out);
            }
            _ => {
                out.push('~');
                write(inner, UNARY, out);
            }
        },
        Formula::Or(l, r) => match f.as_implies() {
            Some((a, b)) if level == IMPLIES && !folds_to_sugar(l) => {
                write(a, OR, out);
                out.push_str(" -> ");
                write(b, IMPLIES, out);
            }
            _ => paren(level > OR, out, |out| {
                write(l, OR, out);
                out.push_str(" | ");
                write(r, AND, out);
            }),
        },
        Formula::Box(a, body) => {
            out.push('[');
            out.push_str(a.as_str());
            out.push(']');
            write(body, UNARY, out);
        }
        Formula::Common(body) => {
            out.push_str("C ");
            write(body, UNARY, out);
        }
        Formula::Arbitrary(body) => {
            out.push_str("[*]");
            write(body, UNARY, out);
        }
        Formula::Update(u, body) => {
            out.push('[');
            write_update(u, out);
            out.push(']');
            write(body, UNARY, out);
        }
    }
}

/// Negations the printer renders as `&`, `F`, `<a>` or `<*>` rather than `~`.
fn folds_to_sugar(f: &Formula) -> bool {
    if f.as_and().is_some() {
        return true;
    }
    match f {
        Formula::Neg(inner) => match inner.as_ref() {
            Formula::Top => true,
            Formula::Box(_, body) | Formula::Arbitrary(body) => {
                matches!(body.as_ref(), Formula::Neg(_))
            }
            _ => false,
        },
        _ => false,
    }
}

fn write_update(u: &ArrowUpdate, out: &mut String) {
    out.push('{');
    for (i, c) in u.normalized().clauses().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('(');
        write(c.pre(), IMPLIES, out);
        out.push_str(", ");
        out.push_str(c.agent().as_str());
        out.push_str(", ");
        write(c.post(), IMPLIES, out);
        out.push(')');
    }
    out.push('}');
}

fn paren(needed: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if needed {
        out.push('(');
    }
    body(out);
    if needed {
        out.push(')');
    }
}
