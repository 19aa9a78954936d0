// SPDX-License-Identifier: Apache-2.0

//! Line-oriented parser for the supported Quil subset.

use super::{
    GateName, Instruction, MemoryRef, MemoryRegion, Op, Opcode, Operand, Param, Program, ScalarKind,
    ValidationError, Value,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unsupported instruction or gate `{name}`")]
    Unsupported { line: usize, name: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Parses Quil source into a validated [`Program`] with the default readout
/// convention.
pub fn parse(text: &str) -> Result<Program, ParseError> {
    let mut instructions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let code = raw.split('#').next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let op = parse_line(code).map_err(|e| e.at(line))?;
        instructions.push(Instruction::at_line(op, line));
    }
    Ok(Program::new(instructions, None)?)
}

enum LineError {
    Syntax(String),
    Unsupported(String),
}

impl LineError {
    fn at(self, line: usize) -> ParseError {
        match self {
            LineError::Syntax(message) => ParseError::Syntax { line, message },
            LineError::Unsupported(name) => ParseError::Unsupported { line, name },
        }
    }
}

fn syntax<T>(msg: impl Into<String>) -> Result<T, LineError> {
    Err(LineError::Syntax(msg.into()))
}

fn parse_line(code: &str) -> Result<Op, LineError> {
    let head_end = code
        .find(|c: char| c.is_whitespace() || c == '(')
        .unwrap_or(code.len());
    let head = &code[..head_end];
    let rest = &code[head_end..];

    if rest.starts_with('(') {
        let close = rest
            .find(')')
            .ok_or_else(|| LineError::Syntax("unclosed parameter list".into()))?;
        let params = split_params(&rest[1..close])?;
        let args: Vec<&str> = rest[close + 1..].split_whitespace().collect();
        return parse_gate(head, params, &args);
    }

    let args: Vec<&str> = rest.split_whitespace().collect();
    match head {
        "DECLARE" => parse_declare(&args),
        "MEASURE" => match args.as_slice() {
            [q] => Ok(Op::Measure {
                qubit: parse_qubit(q)?,
                target: None,
            }),
            [q, t] => Ok(Op::Measure {
                qubit: parse_qubit(q)?,
                target: Some(parse_ref(t)?),
            }),
            _ => syntax("MEASURE expects a qubit and an optional memory reference"),
        },
        "RESET" => match args.as_slice() {
            [] => Ok(Op::Reset(None)),
            [q] => Ok(Op::Reset(Some(parse_qubit(q)?))),
            _ => syntax("RESET takes at most one qubit"),
        },
        "LABEL" => Ok(Op::Label(single_label(&args)?)),
        "JUMP" => Ok(Op::Jump(single_label(&args)?)),
        "JUMP-WHEN" | "JUMP-UNLESS" => {
            let [target, cond] = args.as_slice() else {
                return syntax(format!("{head} expects a label and a memory reference"));
            };
            let target = parse_label(target)?;
            let condition = parse_ref(cond)?;
            Ok(if head == "JUMP-WHEN" {
                Op::JumpWhen { target, condition }
            } else {
                Op::JumpUnless { target, condition }
            })
        }
        "HALT" => {
            if !args.is_empty() {
                return syntax("HALT takes no operands");
            }
            Ok(Op::Halt)
        }
        _ => {
            if let Some(opcode) = Opcode::from_name(head) {
                let operands = args.iter().map(|a| parse_operand(a)).collect::<Result<_, _>>()?;
                Ok(Op::classical(opcode, operands))
            } else {
                parse_gate(head, Vec::new(), &args)
            }
        }
    }
}

fn parse_declare(args: &[&str]) -> Result<Op, LineError> {
    let [name, ty] = args else {
        return syntax("DECLARE expects a name and a type");
    };
    if !is_identifier(name) {
        return syntax(format!("invalid region name `{name}`"));
    }
    let (kind_str, length) = match ty.find('[') {
        Some(open) => {
            let close = ty
                .strip_suffix(']')
                .ok_or_else(|| LineError::Syntax(format!("malformed type `{ty}`")))?;
            let n: usize = close[open + 1..]
                .parse()
                .map_err(|_| LineError::Syntax(format!("malformed length in `{ty}`")))?;
            (&ty[..open], n)
        }
        None => (*ty, 1),
    };
    let kind = ScalarKind::from_keyword(kind_str)
        .ok_or_else(|| LineError::Syntax(format!("unknown type `{kind_str}`")))?;
    Ok(Op::Declare(MemoryRegion {
        name: name.to_string(),
        kind,
        length,
    }))
}

fn parse_gate(head: &str, params: Vec<Param>, args: &[&str]) -> Result<Op, LineError> {
    let name = GateName::from_name(head).ok_or_else(|| LineError::Unsupported(head.to_string()))?;
    if args.is_empty() {
        return syntax(format!("{head} needs at least one qubit"));
    }
    let qubits = args.iter().map(|a| parse_qubit(a)).collect::<Result<Vec<_>, _>>()?;
    Ok(Op::gate(name, params, qubits))
}

fn split_params(s: &str) -> Result<Vec<Param>, LineError> {
    s.split(',').map(|p| parse_param(p.trim())).collect()
}

fn parse_param(s: &str) -> Result<Param, LineError> {
    if s.is_empty() {
        return syntax("empty gate parameter");
    }
    let bare = s.split('[').next().unwrap_or(s);
    if is_identifier(bare) && bare != "pi" {
        return Ok(Param::Ref(parse_ref(s)?));
    }
    ExprParser::new(s).parse().map(Param::Lit)
}

fn single_label(args: &[&str]) -> Result<String, LineError> {
    match args {
        [l] => parse_label(l),
        _ => syntax("expected exactly one label"),
    }
}

fn parse_label(s: &str) -> Result<String, LineError> {
    match s.strip_prefix('@') {
        Some(name) if is_identifier(name) => Ok(name.to_string()),
        _ => syntax(format!("invalid label `{s}`")),
    }
}

fn parse_qubit(s: &str) -> Result<u32, LineError> {
    s.parse()
        .map_err(|_| LineError::Syntax(format!("invalid qubit `{s}`")))
}

fn parse_ref(s: &str) -> Result<MemoryRef, LineError> {
    let (name, index) = match s.find('[') {
        Some(open) => {
            let inner = s[open + 1..]
                .strip_suffix(']')
                .ok_or_else(|| LineError::Syntax(format!("malformed memory reference `{s}`")))?;
            let idx = inner
                .parse()
                .map_err(|_| LineError::Syntax(format!("malformed index in `{s}`")))?;
            (&s[..open], idx)
        }
        None => (s, 0),
    };
    if !is_identifier(name) {
        return syntax(format!("invalid memory reference `{s}`"));
    }
    Ok(MemoryRef::new(name, index))
}

fn parse_operand(s: &str) -> Result<Operand, LineError> {
    let first = s.chars().next().unwrap_or(' ');
    if first.is_ascii_digit() || first == '-' || first == '+' || first == '.' {
        let is_real = s.contains(['.', 'e', 'E']);
        if is_real {
            let v: f64 = s
                .parse()
                .map_err(|_| LineError::Syntax(format!("invalid literal `{s}`")))?;
            return Ok(Operand::Lit(Value::Real(v)));
        }
        let v: i64 = s
            .parse()
            .map_err(|_| LineError::Syntax(format!("invalid literal `{s}`")))?;
        return Ok(Operand::Lit(Value::Int(v)));
    }
    parse_ref(s).map(Operand::Ref)
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Constant expressions over numbers and `pi` with `+ - * /` and parentheses.
struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn new(src: &'a str) -> Self {
        ExprParser { src, pos: 0 }
    }

    fn parse(mut self) -> Result<f64, LineError> {
        let v = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return syntax(format!("unexpected input in parameter `{}`", self.src));
        }
        Ok(v)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<f64, LineError> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc += self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<f64, LineError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc *= self.factor()?;
                }
                Some('/') => {
                    self.pos += 1;
                    acc /= self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, LineError> {
        self.skip_ws();
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return syntax("unbalanced parentheses in parameter");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(_) if self.src[self.pos..].starts_with("pi") => {
                self.pos += 2;
                Ok(std::f64::consts::PI)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                let bytes = self.src.as_bytes();
                while self.pos < bytes.len() {
                    let b = bytes[self.pos];
                    let exp_sign = (b == b'-' || b == b'+')
                        && self.pos > start
                        && matches!(bytes[self.pos - 1], b'e' | b'E');
                    if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.src[start..self.pos]
                    .parse()
                    .map_err(|_| LineError::Syntax(format!("invalid number in `{}`", self.src)))
            }
            _ => syntax(format!("invalid parameter `{}`", self.src)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_with_declare() {
        let p = parse("DECLARE m BIT\nH 0\nMEASURE 0 m").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(
            p.regions(),
            &[MemoryRegion {
                name: "m".into(),
                kind: ScalarKind::Bit,
                length: 1
            }]
        );
    }

    #[test]
    fn empty_source() {
        let p = parse("").unwrap();
        assert!(p.is_empty());
        assert!(p.regions().is_empty());
        let p = parse("# only a comment\n\n").unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn undeclared_reference() {
        let err = parse("MEASURE 0 q").unwrap_err();
        assert_eq!(err, ParseError::Invalid(ValidationError::UndeclaredRegion("q".into())));
    }

    #[test]
    fn duplicate_label() {
        let err = parse("LABEL @a\nLABEL @a").unwrap_err();
        assert_eq!(err, ParseError::Invalid(ValidationError::DuplicateLabel("a".into())));
    }

    #[test]
    fn unknown_gate_and_opcode() {
        assert!(matches!(
            parse("FOO 0").unwrap_err(),
            ParseError::Unsupported { line: 1, .. }
        ));
        assert!(matches!(
            parse("H 0\nDEFGATE G:").unwrap_err(),
            ParseError::Unsupported { line: 2, .. }
        ));
        assert!(matches!(
            parse("PRAGMA foo").unwrap_err(),
            ParseError::Unsupported { .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_lines() {
        assert!(matches!(
            parse("H 0\nMEASURE").unwrap_err(),
            ParseError::Syntax { line: 2, .. }
        ));
        assert!(matches!(
            parse("DECLARE x FLOAT").unwrap_err(),
            ParseError::Syntax { line: 1, .. }
        ));
        assert!(matches!(parse("RZ(1.0 0").unwrap_err(), ParseError::Syntax { .. }));
    }

    #[test]
    fn gate_parameters() {
        let p = parse("DECLARE theta REAL[2]\nRZ(pi/2) 0\nRX(theta[1]) 1\nRY(-2*pi) 0").unwrap();
        match &p.instructions()[1].op {
            Op::Gate { params, .. } => assert!((params[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert!(matches!(p.instructions()[2].op, Op::ParamGate { .. }));
        match &p.instructions()[3].op {
            Op::Gate { params, .. } => assert!((params[0] + 2.0 * std::f64::consts::PI).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn out_of_bounds_and_arity() {
        assert!(parse("DECLARE ro BIT[2]\nMEASURE 0 ro[2]").is_err());
        assert!(parse("CNOT 0").is_err());
        assert!(parse("CNOT 1 1").is_err());
        assert!(parse("RZ 0").is_err());
        assert!(parse("DECLARE a INTEGER\nADD a").is_err());
        assert!(parse("DECLARE a INTEGER\nMOVE 3 a").is_err());
    }

    #[test]
    fn literal_operands() {
        let p = parse("DECLARE a REAL\nMOVE a -2.5\nADD a 3\nMUL a 1e-3").unwrap();
        let lits: Vec<_> = p.instructions()[1..]
            .iter()
            .map(|i| match &i.op {
                Op::Classical { operands, .. } => operands[1].clone(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(
            lits,
            vec![
                Operand::Lit(Value::Real(-2.5)),
                Operand::Lit(Value::Int(3)),
                Operand::Lit(Value::Real(1e-3))
            ]
        );
    }
}
