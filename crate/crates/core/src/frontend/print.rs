use std::fmt::Write;

use crate::engine::{Constraint, Network, Operand};
use crate::minifloat::{to_bit_literal, to_decimal, FpVal};

fn op_word(op: crate::minifloat::Op) -> &'static str {
    use crate::minifloat::Op::*;
    match op {
        Add => "add",
        Sub => "sub",
        Mul => "mul",
        Div => "div",
    }
}

/// Render a constraint with variable names; constants print as bit literals.
pub fn constraint_text(net: &Network, c: &Constraint) -> String {
    let name = |v| net.var(v).name.as_str();
    match *c {
        Constraint::Arith { z, op, x, y } => {
            format!("{} = {} {} {}", name(z), name(x), op_word(op), name(y))
        }
        Constraint::Compare { lhs, rel, rhs } => {
            let r = match rhs {
                Operand::Var(v) => name(v).to_string(),
                Operand::Const(k) => to_bit_literal(&k, net.format()),
            };
            format!("{} {} {}", name(lhs), rel.symbol(), r)
        }
    }
}

fn lit(v: &FpVal, net: &Network) -> String {
    to_bit_literal(v, net.format())
}

/// Print a network in the problem syntax. Values are exact bit literals, so
/// parsing the output gives back the same network.
pub fn print_problem(net: &Network) -> String {
    let fmt = net.format();
    let mut out = String::new();
    writeln!(out, "format {}", fmt.name()).unwrap();
    for v in net.vars() {
        let d = v.domain;
        if v.constant {
            writeln!(
                out,
                "const {} = {}  # {}",
                v.name,
                lit(&d.lo(), net),
                to_decimal(&d.lo(), fmt)
            )
            .unwrap();
        } else if d.lo() == FpVal::NegInf && d.hi() == FpVal::PosInf {
            writeln!(out, "var {}", v.name).unwrap();
        } else {
            writeln!(out, "var {} in [{}, {}]", v.name, lit(&d.lo(), net), lit(&d.hi(), net)).unwrap();
        }
    }
    for c in net.constraints() {
        writeln!(out, "{}", constraint_text(net, c)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_problem;

    #[test]
    fn print_then_parse_is_identity() {
        let src = "format tiny\nvar x in [-0, 3.5]\nvar y\nconst c = 0.1\nvar z\nz = x * y\nz >= c\nx < y\n";
        let a = parse_problem(src, None).unwrap();
        let printed = print_problem(&a);
        let b = parse_problem(&printed, None).unwrap();
        assert_eq!(a, b, "{printed}");
    }
}
