// SPDX-License-Identifier: Apache-2.0

//! Classical values and the arithmetic shared by constant folding and the
//! reference interpreter.

use std::cmp::Ordering;
use std::fmt;

use super::{Opcode, ScalarKind};

#[derive(Clone, Copy, Debug)]
pub enum Value {
    Int(i64),
    Real(f64),
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Real(a), Value::Real(b)) => a.total_cmp(b),
            (Value::Int(_), Value::Real(_)) => Ordering::Less,
            (Value::Real(_), Value::Int(_)) => Ordering::Greater,
        }
    }
}

impl Value {
    pub fn as_f64(self) -> f64 {
        match self {
            Value::Int(i) => i as f64,
            Value::Real(r) => r,
        }
    }

    pub fn is_nonzero(self) -> bool {
        match self {
            Value::Int(i) => i != 0,
            Value::Real(r) => r != 0.0,
        }
    }

    pub fn zero(kind: ScalarKind) -> Value {
        match kind {
            ScalarKind::Real => Value::Real(0.0),
            _ => Value::Int(0),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Real(r) => write!(f, "{r:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not defined on REAL operands")]
    RealLogic(&'static str),
    #[error("non-finite result")]
    NonFinite,
}

/// Converts a value to the representation stored in a cell of `kind`.
/// Integer kinds keep the low bits (BIT: 1, OCTET: 8); reals truncate toward
/// zero when stored into integer cells.
pub fn store_convert(value: Value, kind: ScalarKind) -> Value {
    let as_int = |v: Value| match v {
        Value::Int(i) => i,
        Value::Real(r) => r.trunc() as i64,
    };
    match kind {
        ScalarKind::Real => Value::Real(value.as_f64()),
        ScalarKind::Integer => Value::Int(as_int(value)),
        ScalarKind::Octet => Value::Int(as_int(value) & 0xff),
        ScalarKind::Bit => Value::Int(as_int(value) & 1),
    }
}

/// `dest op src` for the two-operand arithmetic and logic opcodes. The result
/// still has to pass through [`store_convert`] for the destination kind.
pub fn binary_op(opcode: Opcode, dest: Value, src: Value) -> Result<Value, ArithError> {
    use Value::{Int, Real};
    let result = match opcode {
        Opcode::Move => src,
        Opcode::Add | Opcode::Sub | Opcode::Mul | Opcode::Div => match (dest, src) {
            (Int(a), Int(b)) => Int(match opcode {
                Opcode::Add => a.wrapping_add(b),
                Opcode::Sub => a.wrapping_sub(b),
                Opcode::Mul => a.wrapping_mul(b),
                _ => {
                    if b == 0 {
                        return Err(ArithError::DivisionByZero);
                    }
                    a.wrapping_div(b)
                }
            }),
            (a, b) => {
                let (a, b) = (a.as_f64(), b.as_f64());
                let r = match opcode {
                    Opcode::Add => a + b,
                    Opcode::Sub => a - b,
                    Opcode::Mul => a * b,
                    _ => {
                        if b == 0.0 {
                            return Err(ArithError::DivisionByZero);
                        }
                        a / b
                    }
                };
                if !r.is_finite() {
                    return Err(ArithError::NonFinite);
                }
                Real(r)
            }
        },
        Opcode::And | Opcode::Ior | Opcode::Xor => match (dest, src) {
            (Int(a), Int(b)) => Int(match opcode {
                Opcode::And => a & b,
                Opcode::Ior => a | b,
                _ => a ^ b,
            }),
            _ => return Err(ArithError::RealLogic(opcode.as_str())),
        },
        Opcode::Exchange | Opcode::Neg | Opcode::Not => {
            unreachable!("{} is not a binary operation", opcode.as_str())
        }
    };
    Ok(result)
}

pub fn unary_op(opcode: Opcode, value: Value) -> Result<Value, ArithError> {
    match (opcode, value) {
        (Opcode::Neg, Value::Int(i)) => Ok(Value::Int(i.wrapping_neg())),
        (Opcode::Neg, Value::Real(r)) => Ok(Value::Real(-r)),
        (Opcode::Not, Value::Int(i)) => Ok(Value::Int(!i)),
        (Opcode::Not, Value::Real(_)) => Err(ArithError::RealLogic("NOT")),
        _ => unreachable!("{} is not a unary operation", opcode.as_str()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_storage_keeps_low_bit() {
        assert_eq!(store_convert(Value::Int(5), ScalarKind::Bit), Value::Int(1));
        let flipped = unary_op(Opcode::Not, Value::Int(1)).unwrap();
        assert_eq!(store_convert(flipped, ScalarKind::Bit), Value::Int(0));
        let flipped = unary_op(Opcode::Not, Value::Int(0)).unwrap();
        assert_eq!(store_convert(flipped, ScalarKind::Bit), Value::Int(1));
    }

    #[test]
    fn mixed_arithmetic_promotes_to_real() {
        let r = binary_op(Opcode::Add, Value::Real(0.5), Value::Int(1)).unwrap();
        assert_eq!(r, Value::Real(1.5));
        assert_eq!(store_convert(r, ScalarKind::Integer), Value::Int(1));
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(
            binary_op(Opcode::Div, Value::Int(3), Value::Int(0)),
            Err(ArithError::DivisionByZero)
        );
        assert_eq!(
            binary_op(Opcode::Div, Value::Real(3.0), Value::Int(0)),
            Err(ArithError::DivisionByZero)
        );
    }
}
