//! A small expression language for naming sequences.
//!
//! ```text
//! expr := theorem4(j,k,m) | theorem5phi(j) | theorem5psi(j) | const(c)
//!       | table(path) | lin(k,expr,m,expr) | dilate(expr,k)
//!       | dilateodd(expr,k) | prod(expr,expr,...)
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::sequences::Sequence;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            message: format!("column {}: {}", self.pos + 1, message.into()),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.src[start..]
            .chars()
            .take_while(|&c| pred(c))
            .map(char::len_utf8)
            .sum();
        self.pos += len;
        &self.src[start..start + len]
    }

    fn integer(&mut self) -> Result<BigInt> {
        let tok = self.take_while(|c| c.is_ascii_digit() || c == '-' || c == '+');
        tok.parse()
            .map_err(|_| self.err(format!("expected an integer, found `{tok}`")))
    }

    fn small<T: TryFrom<BigInt>>(&mut self, what: &str) -> Result<T> {
        let v = self.integer()?;
        T::try_from(v.clone()).map_err(|_| self.err(format!("{what} out of range: {v}")))
    }

    fn expr(&mut self) -> Result<Sequence> {
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if name.is_empty() {
            return Err(self.err("expected a sequence name"));
        }
        self.eat('(')?;
        let seq = match name {
            "theorem4" => {
                let j = self.small("j")?;
                self.eat(',')?;
                let k = self.small("k")?;
                self.eat(',')?;
                let m = self.small("m")?;
                Sequence::theorem4(j, k, m)?
            }
            "theorem5phi" => Sequence::theorem5_phi(self.small("j")?)?,
            "theorem5psi" => Sequence::theorem5_psi(self.small("j")?)?,
            "const" => Sequence::constant(self.integer()?),
            "table" => {
                let path = self.take_while(|c| c != ')').trim();
                if path.is_empty() {
                    return Err(self.err("table() needs a path"));
                }
                Sequence::load_table(path)?
            }
            "lin" => {
                let k = self.integer()?;
                self.eat(',')?;
                let a = self.expr()?;
                self.eat(',')?;
                let m = self.integer()?;
                self.eat(',')?;
                let b = self.expr()?;
                Sequence::linear_combine(k, &a, m, &b)
            }
            "dilate" | "dilateodd" => {
                let a = self.expr()?;
                self.eat(',')?;
                let k = self.small("dilation factor")?;
                if name == "dilate" {
                    Sequence::dilate(&a, k)?
                } else {
                    Sequence::dilate_odd(&a, k)?
                }
            }
            "prod" => {
                let mut items = vec![self.expr()?];
                loop {
                    self.skip_ws();
                    if !self.src[self.pos..].starts_with(',') {
                        break;
                    }
                    self.eat(',')?;
                    items.push(self.expr()?);
                }
                Sequence::product(&items)?
            }
            other => return Err(self.err(format!("unknown sequence `{other}`"))),
        };
        self.eat(')')?;
        Ok(seq)
    }
}

/// Parses and builds a sequence expression.
pub fn parse_sequence(src: &str) -> Result<Sequence> {
    let mut p = Parser { src, pos: 0 };
    let seq = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::SequenceKind;

    #[test]
    fn generators() {
        let s = parse_sequence("theorem4(2, 0, 1)").unwrap();
        assert_eq!(s.kind(), SequenceKind::Theorem4);
        assert_eq!(s.eval(5).unwrap(), BigInt::from(11));
        assert_eq!(
            parse_sequence("theorem5phi(2)").unwrap().eval(4).unwrap(),
            BigInt::from(35)
        );
        assert_eq!(
            parse_sequence(" theorem5psi(3) ").unwrap().eval(1).unwrap(),
            BigInt::from(3)
        );
        assert_eq!(
            parse_sequence("const(-4)").unwrap().eval(9).unwrap(),
            BigInt::from(-4)
        );
    }

    #[test]
    fn combinators_nest() {
        let s = parse_sequence("lin(3,theorem5phi(2),-1,const(2))").unwrap();
        assert_eq!(s.eval(2).unwrap(), BigInt::from(19));
        let d = parse_sequence("dilate(theorem5phi(2),2)").unwrap();
        assert_eq!(d.eval(2).unwrap(), BigInt::from(35));
        let o = parse_sequence("dilateodd(theorem5psi(2),3)").unwrap();
        assert_eq!(o.eval(1).unwrap(), BigInt::from(15));
        let p = parse_sequence("prod(theorem5psi(2), theorem5psi(2), const(2))").unwrap();
        assert_eq!(p.eval(2).unwrap(), BigInt::from(50));
        assert_eq!(p.id(), "prod(theorem5psi(2),theorem5psi(2),2)");
    }

    #[test]
    fn table_paths() {
        let dir = std::env::temp_dir().join(format!("divform-expr-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("seq.txt");
        std::fs::write(&path, "# demo\n2\n4\n8\n").unwrap();
        let s = parse_sequence(&format!("lin(1,table({}),0,const(0))", path.display())).unwrap();
        assert_eq!(s.eval(3).unwrap(), BigInt::from(8));
        assert!(s.eval(4).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn errors() {
        for bad in [
            "",
            "theorem5phi(1)",
            "theorem5phi(2",
            "theorem5phi(2))",
            "nope(1)",
            "dilateodd(theorem5psi(2),2)",
            "prod()",
            "lin(1,theorem5phi(2),x,const(1))",
            "table()",
            "theorem4(2,0)",
        ] {
            assert!(parse_sequence(bad).is_err(), "{bad:?} should fail");
        }
    }
}
