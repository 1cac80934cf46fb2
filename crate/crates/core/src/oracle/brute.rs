use std::collections::HashMap;

use super::reference::reference_eval;
use super::OracleError;
use crate::minifloat::{FpFormat, FpVal, Op};

/// Formats with more values than this are refused.
pub const MAX_ENUMERATION: u128 = 1 << 20;

/// Every value of a bounded format (no NaN), in increasing total order.
pub fn enumerate(fmt: &FpFormat) -> Result<Vec<FpVal>, OracleError> {
    Ok(Universe::new(fmt)?.values)
}

/// The enumerated values of a small bounded format, indexed by rank.
#[derive(Debug, Clone)]
pub struct Universe {
    fmt: FpFormat,
    values: Vec<FpVal>,
    base: i128,
}

impl Universe {
    pub fn new(fmt: &FpFormat) -> Result<Self, OracleError> {
        if fmt.is_unbounded() {
            return Err(OracleError::Unbounded);
        }
        let n = fmt.value_count().filter(|&n| n <= MAX_ENUMERATION);
        let Some(n) = n else {
            return Err(OracleError::TooLarge(fmt.name()));
        };
        let base = FpVal::NegInf.order_key(fmt);
        let values = (0..n as i128)
            .map(|i| FpVal::from_order_key(base + i, fmt).expect("inside format"))
            .collect();
        Ok(Universe {
            fmt: *fmt,
            values,
            base,
        })
    }

    pub fn format(&self) -> &FpFormat {
        &self.fmt
    }

    pub fn values(&self) -> &[FpVal] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index(&self, v: &FpVal) -> usize {
        (v.order_key(&self.fmt) - self.base) as usize
    }

    pub fn get(&self, i: usize) -> FpVal {
        self.values[i]
    }
}

const NAN: u32 = u32::MAX;

/// `x op y` for every pair of a universe, by reference arithmetic.
#[derive(Debug, Clone)]
pub struct OpTable {
    op: Op,
    n: usize,
    cells: Vec<u32>,
}

impl OpTable {
    pub fn build(op: Op, u: &Universe) -> Self {
        let n = u.len();
        let mut cells = Vec::with_capacity(n * n);
        for &x in u.values() {
            for &y in u.values() {
                cells.push(match reference_eval(op, x, y, u.format()) {
                    Some(r) => u.index(&r) as u32,
                    None => NAN,
                });
            }
        }
        OpTable { op, n, cells }
    }

    pub fn op(&self) -> Op {
        self.op
    }

    /// Rank of `x op y`, or `None` for NaN.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        let c = self.cells[x * self.n + y];
        (c != NAN).then_some(c as usize)
    }
}

/// Per result value, the extreme operands producing it.
#[derive(Debug, Clone)]
pub struct Support {
    /// `[min_x, max_x, min_y, max_y]` ranks per result rank.
    ext: Vec<Option<[usize; 4]>>,
}

impl Support {
    pub fn build(t: &OpTable, n: usize) -> Self {
        let mut ext: Vec<Option<[usize; 4]>> = vec![None; n];
        for x in 0..n {
            for y in 0..n {
                if let Some(r) = t.get(x, y) {
                    let e = ext[r].get_or_insert([x, x, y, y]);
                    e[0] = e[0].min(x);
                    e[1] = e[1].max(x);
                    e[2] = e[2].min(y);
                    e[3] = e[3].max(y);
                }
            }
        }
        Support { ext }
    }

    /// `(x range, y range)` as ranks for results of rank `r`.
    pub fn of(&self, r: usize) -> Option<((usize, usize), (usize, usize))> {
        self.ext[r].map(|[a, b, c, d]| ((a, b), (c, d)))
    }
}

/// The addition universe: the unbounded-exponent format restricted to
/// exponents `[e_min - p, e_max + p]`, which holds every achiever.
#[derive(Debug, Clone)]
pub struct AddWindow {
    /// Greatest non-negative left operand per reachable sum.
    best: HashMap<FpVal, FpVal>,
}

impl AddWindow {
    pub fn build(fmt: &FpFormat) -> Self {
        let unb = fmt.unbounded();
        let p = fmt.precision() as i32;
        let mut pos = vec![FpVal::pos_zero(&unb)];
        for e in fmt.e_min() - p..=fmt.e_max() + p {
            for m in fmt.one().significand().unwrap()..=(1u128 << p) - 1 {
                pos.push(FpVal::finite(false, m, e));
            }
        }
        let mut signed: Vec<FpVal> = pos.iter().map(|v| v.neg()).collect();
        signed.extend(pos.iter().copied());
        let mut best: HashMap<FpVal, FpVal> = HashMap::new();
        for &v in &pos {
            for &y in &signed {
                let Some(r) = reference_eval(Op::Add, v, y, &unb) else {
                    continue;
                };
                best.entry(r).and_modify(|b| *b = (*b).max(v)).or_insert(v);
            }
        }
        AddWindow { best }
    }

    /// Greatest non-negative `v` with `v + y = z` for some window `y`, in
    /// the unbounded format.
    pub fn ulpmax(&self, z: FpVal, fmt: &FpFormat) -> Option<FpVal> {
        if z.is_zero() {
            return Some(FpVal::pos_zero(&fmt.unbounded()));
        }
        self.best.get(&z.convert(fmt, &fmt.unbounded())).copied()
    }
}

/// Exhaustive tables for one small format.
#[derive(Debug, Clone)]
pub struct Oracle {
    universe: Universe,
    tables: [OpTable; 4],
    support: [Support; 4],
    window: AddWindow,
}

fn slot(op: Op) -> usize {
    match op {
        Op::Add => 0,
        Op::Sub => 1,
        Op::Mul => 2,
        Op::Div => 3,
    }
}

impl Oracle {
    pub fn new(fmt: &FpFormat) -> Result<Self, OracleError> {
        let universe = Universe::new(fmt)?;
        let tables = Op::ALL.map(|op| OpTable::build(op, &universe));
        let support = [0, 1, 2, 3].map(|i| Support::build(&tables[i], universe.len()));
        Ok(Oracle {
            window: AddWindow::build(fmt),
            universe,
            tables,
            support,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn format(&self) -> &FpFormat {
        self.universe.format()
    }

    pub fn table(&self, op: Op) -> &OpTable {
        &self.tables[slot(op)]
    }

    pub fn support(&self, op: Op) -> &Support {
        &self.support[slot(op)]
    }

    pub fn eval(&self, op: Op, x: FpVal, y: FpVal) -> Option<FpVal> {
        let u = &self.universe;
        self.table(op).get(u.index(&x), u.index(&y)).map(|r| u.get(r))
    }

    /// Greatest left operand of `op` producing `z`.
    ///
    /// Addition and subtraction search the non-negative exponent window of
    /// the unbounded format and answer in that format; multiplication and
    /// division search the whole bounded format.
    pub fn brute_ulpmax(&self, op: Op, z: FpVal) -> Option<FpVal> {
        match op {
            Op::Add | Op::Sub => self.window.ulpmax(z, self.format()),
            Op::Mul | Op::Div => {
                let r = self.universe.index(&z);
                self.support(op).of(r).map(|((_, hi), _)| self.universe.get(hi))
            }
        }
    }

    /// Least left operand: `-brute_ulpmax(-z)` for addition, the minimum
    /// over the bounded format otherwise.
    pub fn brute_ulpmin(&self, op: Op, z: FpVal) -> Option<FpVal> {
        match op {
            Op::Add | Op::Sub => self.window.ulpmax(z.neg(), self.format()).map(FpVal::neg),
            Op::Mul | Op::Div => {
                let r = self.universe.index(&z);
                self.support(op).of(r).map(|((lo, _), _)| self.universe.get(lo))
            }
        }
    }

    /// Greatest non-negative divisor `y` with `x / y = z` for some `x`.
    pub fn brute_max_divisor(&self, z: FpVal) -> Option<FpVal> {
        let u = &self.universe;
        let zr = u.index(&z);
        let t = self.table(Op::Div);
        let zero = u.index(&FpVal::pos_zero(self.format()));
        (zero..u.len())
            .rev()
            .find(|&y| (0..u.len()).any(|x| t.get(x, y) == Some(zr)))
            .map(|y| u.get(y))
    }
}

/// One-off form of [`Oracle::brute_ulpmax`]; builds the tables each call.
pub fn brute_ulpmax(op: Op, z: FpVal, fmt: &FpFormat) -> Result<Option<FpVal>, OracleError> {
    Ok(Oracle::new(fmt)?.brute_ulpmax(op, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_enumeration() {
        let v = enumerate(&FpFormat::tiny()).unwrap();
        assert_eq!(v.len(), 450);
        assert_eq!(v[0], FpVal::NegInf);
        assert_eq!(v[449], FpVal::PosInf);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn large_formats_are_refused() {
        assert!(matches!(
            enumerate(&FpFormat::binary32()),
            Err(OracleError::TooLarge(_))
        ));
    }

    #[test]
    fn zero_sum_has_zero_bound() {
        let f = FpFormat::tiny();
        let w = AddWindow::build(&f);
        assert_eq!(w.ulpmax(FpVal::pos_zero(&f), &f), Some(FpVal::pos_zero(&f.unbounded())));
    }
}
