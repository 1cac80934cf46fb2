use serde::{Deserialize, Serialize};

use crate::classic::Cmp;
use crate::interval::FpInterval;
use crate::minifloat::{FpFormat, FpVal, Op};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub domain: FpInterval,
    /// Constants are singleton variables that printers show inline.
    pub constant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    Var(VarId),
    Const(FpVal),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `z = x op y`.
    Arith { z: VarId, op: Op, x: VarId, y: VarId },
    /// `lhs rel rhs`.
    Compare { lhs: VarId, rel: Cmp, rhs: Operand },
}

impl Constraint {
    pub fn vars(&self) -> Vec<VarId> {
        match *self {
            Constraint::Arith { z, x, y, .. } => vec![z, x, y],
            Constraint::Compare {
                lhs,
                rhs: Operand::Var(r),
                ..
            } => vec![lhs, r],
            Constraint::Compare { lhs, .. } => vec![lhs],
        }
    }

    /// Check a full assignment.
    pub fn holds(&self, value: impl Fn(VarId) -> FpVal, fmt: &FpFormat) -> bool {
        match *self {
            Constraint::Arith { z, op, x, y } => op.eval(value(x), value(y), fmt) == Some(value(z)),
            Constraint::Compare { lhs, rel, rhs } => {
                let r = match rhs {
                    Operand::Var(v) => value(v),
                    Operand::Const(c) => c,
                };
                rel.holds(&value(lhs), &r)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetworkError {
    #[error("duplicate variable `{0}`")]
    Duplicate(String),
    #[error("unknown variable id {0}")]
    UnknownVar(usize),
}

/// Variables over one format plus the constraints linking them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    fmt: FpFormat,
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
    /// For each variable, the constraints mentioning it.
    watch: Vec<Vec<usize>>,
}

impl Network {
    pub fn new(fmt: FpFormat) -> Self {
        Network {
            fmt,
            vars: Vec::new(),
            constraints: Vec::new(),
            watch: Vec::new(),
        }
    }

    pub fn format(&self) -> &FpFormat {
        &self.fmt
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub(crate) fn watchers(&self, id: VarId) -> &[usize] {
        &self.watch[id.0]
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v.name == name).map(VarId)
    }

    fn push_var(&mut self, name: &str, domain: FpInterval, constant: bool) -> Result<VarId, NetworkError> {
        if self.lookup(name).is_some() {
            return Err(NetworkError::Duplicate(name.to_string()));
        }
        self.vars.push(Variable {
            name: name.to_string(),
            domain,
            constant,
        });
        self.watch.push(Vec::new());
        Ok(VarId(self.vars.len() - 1))
    }

    pub fn add_var(&mut self, name: &str, domain: FpInterval) -> Result<VarId, NetworkError> {
        self.push_var(name, domain, false)
    }

    pub fn add_const(&mut self, name: &str, value: FpVal) -> Result<VarId, NetworkError> {
        self.push_var(name, FpInterval::singleton(value), true)
    }

    fn check(&self, id: VarId) -> Result<(), NetworkError> {
        if id.0 < self.vars.len() {
            Ok(())
        } else {
            Err(NetworkError::UnknownVar(id.0))
        }
    }

    pub fn add_constraint(&mut self, c: Constraint) -> Result<usize, NetworkError> {
        for v in c.vars() {
            self.check(v)?;
        }
        let idx = self.constraints.len();
        let mut vs = c.vars();
        vs.sort();
        vs.dedup();
        for v in vs {
            self.watch[v.0].push(idx);
        }
        self.constraints.push(c);
        Ok(idx)
    }

    pub fn add_arith(&mut self, z: VarId, op: Op, x: VarId, y: VarId) -> Result<usize, NetworkError> {
        self.add_constraint(Constraint::Arith { z, op, x, y })
    }

    pub fn add_compare(&mut self, lhs: VarId, rel: Cmp, rhs: Operand) -> Result<usize, NetworkError> {
        self.add_constraint(Constraint::Compare { lhs, rel, rhs })
    }

    /// Initial domains in declaration order.
    pub fn initial_domains(&self) -> Vec<FpInterval> {
        self.vars.iter().map(|v| v.domain).collect()
    }

    /// Whether `assignment` lies in the declared domains and satisfies
    /// every constraint.
    pub fn satisfied_by(&self, assignment: &[FpVal]) -> bool {
        assignment.len() == self.vars.len()
            && self.vars.iter().zip(assignment).all(|(v, a)| v.domain.contains(a))
            && self.constraints.iter().all(|c| c.holds(|v| assignment[v.0], &self.fmt))
    }
}
