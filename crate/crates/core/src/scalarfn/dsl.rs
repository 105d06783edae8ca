//! Text form of [`ScalarFunction`], shared by the CLI and config files.
//!
//! ```text
//! f := exp | neglog1m | negpow:<p> | phi:<p> | psi:<p>
//!    | series:<a0>,<a1>,...@<radius|inf>
//!    | shift:<a>:<f> | scale:<c>:<f> | sum:(<f>|<f>|...)
//!    | reflect:<f> | deriv:<k>:<f>
//! ```

use std::fmt;

use crate::error::{Error, Result};

use super::ScalarFunction;

/// Parses the whole of `text` (surrounding whitespace is ignored).
pub fn parse_fn_spec(text: &str) -> Result<ScalarFunction> {
    let trimmed = text.trim_end();
    let start = trimmed.len() - trimmed.trim_start().len();
    let mut p = Parser { src: trimmed, pos: start };
    let f = p.function()?;
    if p.pos != p.src.len() {
        return Err(p.error("end of input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

const HEADS: &str = "exp, neglog1m, negpow, phi, psi, series, shift, scale, sum, reflect or deriv";

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error(&self, expected: &str) -> Error {
        let found = match self.rest().chars().next() {
            None => "end of input".to_string(),
            Some(_) => {
                let tok: String = self.rest().chars().take(12).collect();
                format!("{tok:?}")
            }
        };
        Error::Parse { pos: self.pos, expected: expected.to_string(), found }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(&format!("{s:?}")))
        }
    }

    fn head(&mut self) -> &'a str {
        let len = self.rest().find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(self.rest().len());
        let h = &self.rest()[..len];
        self.pos += len;
        h
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '+' | '-' | 'e' | 'E')))
            .unwrap_or(self.rest().len());
        let tok = &self.rest()[..len];
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() && !tok.is_empty() => {
                self.pos += len;
                Ok(v)
            }
            _ => {
                self.pos = start;
                Err(self.error("number"))
            }
        }
    }

    fn integer(&mut self) -> Result<u32> {
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        match self.rest()[..len].parse::<u32>() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => Err(self.error("non-negative integer")),
        }
    }

    /// Re-positions a constructor error at the start of the offending term.
    fn checked(&self, at: usize, r: Result<ScalarFunction>) -> Result<ScalarFunction> {
        r.map_err(|e| Error::Parse { pos: at, expected: "valid parameters".into(), found: e.to_string() })
    }

    fn function(&mut self) -> Result<ScalarFunction> {
        let at = self.pos;
        let head = self.head();
        match head {
            "exp" => Ok(ScalarFunction::Exp),
            "neglog1m" => Ok(ScalarFunction::NegLog1m),
            "negpow" | "phi" | "psi" => {
                self.expect(":")?;
                let p = self.number()?;
                let f = match head {
                    "negpow" => ScalarFunction::neg_power(p),
                    "phi" => ScalarFunction::abs_power(p),
                    _ => ScalarFunction::signed_power(p),
                };
                self.checked(at, f)
            }
            "series" => {
                self.expect(":")?;
                let mut coeffs = vec![self.number()?];
                while self.eat(",") {
                    coeffs.push(self.number()?);
                }
                self.expect("@")?;
                let radius_at = self.pos;
                let radius = if self.eat("inf") { f64::INFINITY } else { self.number()? };
                if !(radius > 0.0) {
                    return Err(Error::Parse {
                        pos: radius_at,
                        expected: "positive radius".into(),
                        found: radius.to_string(),
                    });
                }
                self.checked(at, ScalarFunction::power_series(coeffs, radius))
            }
            "shift" | "scale" => {
                self.expect(":")?;
                let c = self.number()?;
                self.expect(":")?;
                let inner = self.function()?;
                let f = if head == "shift" {
                    ScalarFunction::shifted(inner, c)
                } else {
                    ScalarFunction::scaled(c, inner)
                };
                self.checked(at, f)
            }
            "sum" => {
                self.expect(":")?;
                self.expect("(")?;
                let mut terms = vec![self.function()?];
                while self.eat("|") {
                    terms.push(self.function()?);
                }
                self.expect(")")?;
                self.checked(at, ScalarFunction::sum(terms))
            }
            "reflect" => {
                self.expect(":")?;
                Ok(ScalarFunction::reflected(self.function()?))
            }
            "deriv" => {
                self.expect(":")?;
                let order = self.integer()?;
                self.expect(":")?;
                let inner = self.function()?;
                Ok(ScalarFunction::Derivative { inner: Box::new(inner), order })
            }
            _ => {
                self.pos = at;
                Err(self.error(HEADS))
            }
        }
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerSeries { coeffs, radius } => {
                write!(f, "series:")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "@{radius}")
            }
            Self::AbsPower { p } => write!(f, "phi:{p}"),
            Self::SignedPower { p } => write!(f, "psi:{p}"),
            Self::Exp => write!(f, "exp"),
            Self::NegLog1m => write!(f, "neglog1m"),
            Self::NegPower { p } => write!(f, "negpow:{p}"),
            Self::Shifted { inner, shift } => write!(f, "shift:{shift}:{inner}"),
            Self::Sum(terms) => {
                write!(f, "sum:(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "|")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Self::Scaled { factor, inner } => write!(f, "scale:{factor}:{inner}"),
            Self::Reflected(inner) => write!(f, "reflect:{inner}"),
            Self::Derivative { inner, order } => write!(f, "deriv:{order}:{inner}"),
        }
    }
}
