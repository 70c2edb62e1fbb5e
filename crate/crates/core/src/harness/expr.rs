use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complexes::{
    barycentric_subdivision, boundary_simplex, cycle, even_subcomplex, join, read_complex, simplex,
    Complex,
};
use crate::error::{Error, Result};

/// Builder expression for a complex.
///
/// ```text
/// expr := boundary_simplex(n) | simplex(n) | cycle(n) | point | empty
///       | subdivide(expr) | even(expr) | join(expr, expr) | file(path)
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexExpr {
    BoundarySimplex(usize),
    Simplex(usize),
    Cycle(usize),
    Point,
    Empty,
    Subdivide(Box<ComplexExpr>),
    Even(Box<ComplexExpr>),
    Join(Box<ComplexExpr>, Box<ComplexExpr>),
    File(PathBuf),
}

impl ComplexExpr {
    /// Builds the complex; relative `file(...)` paths resolve against `base`.
    pub fn eval(&self, base: &Path) -> Result<Complex> {
        Ok(match self {
            ComplexExpr::BoundarySimplex(n) => boundary_simplex(*n)?,
            ComplexExpr::Simplex(n) => simplex(*n),
            ComplexExpr::Cycle(n) => cycle(*n)?,
            ComplexExpr::Point => Complex::from_named(&["a"], &[vec!["a"]], None)?,
            ComplexExpr::Empty => Complex::empty(),
            ComplexExpr::Subdivide(e) => barycentric_subdivision(&e.eval(base)?),
            ComplexExpr::Even(e) => even_subcomplex(&e.eval(base)?)?,
            ComplexExpr::Join(a, b) => join(&a.eval(base)?, &b.eval(base)?),
            ComplexExpr::File(p) => read_complex(&base.join(p))?,
        })
    }
}

impl fmt::Display for ComplexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexExpr::BoundarySimplex(n) => write!(f, "boundary_simplex({n})"),
            ComplexExpr::Simplex(n) => write!(f, "simplex({n})"),
            ComplexExpr::Cycle(n) => write!(f, "cycle({n})"),
            ComplexExpr::Point => f.write_str("point"),
            ComplexExpr::Empty => f.write_str("empty"),
            ComplexExpr::Subdivide(e) => write!(f, "subdivide({e})"),
            ComplexExpr::Even(e) => write!(f, "even({e})"),
            ComplexExpr::Join(a, b) => write!(f, "join({a}, {b})"),
            ComplexExpr::File(p) => write!(f, "file({})", p.display()),
        }
    }
}

impl FromStr for ComplexExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }
}

impl Serialize for ComplexExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComplexExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.s))
    }

    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.s[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.s[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.s[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.s.len() - start);
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(&self.s[start..self.pos])
    }

    fn number(&mut self) -> Result<usize> {
        self.eat('(')?;
        let text = self.ident()?.to_string();
        let n = text
            .parse()
            .map_err(|_| self.error(&format!("`{text}` is not a number")))?;
        self.eat(')')?;
        Ok(n)
    }

    fn unary(&mut self) -> Result<Box<ComplexExpr>> {
        self.eat('(')?;
        let e = self.expr()?;
        self.eat(')')?;
        Ok(Box::new(e))
    }

    fn expr(&mut self) -> Result<ComplexExpr> {
        let name = self.ident()?.to_string();
        match name.as_str() {
            "boundary_simplex" => Ok(ComplexExpr::BoundarySimplex(self.number()?)),
            "simplex" => Ok(ComplexExpr::Simplex(self.number()?)),
            "cycle" => Ok(ComplexExpr::Cycle(self.number()?)),
            "point" => Ok(ComplexExpr::Point),
            "empty" => Ok(ComplexExpr::Empty),
            "subdivide" => Ok(ComplexExpr::Subdivide(self.unary()?)),
            "even" => Ok(ComplexExpr::Even(self.unary()?)),
            "join" => {
                self.eat('(')?;
                let a = self.expr()?;
                self.eat(',')?;
                let b = self.expr()?;
                self.eat(')')?;
                Ok(ComplexExpr::Join(Box::new(a), Box::new(b)))
            }
            "file" => {
                self.eat('(')?;
                let rest = &self.s[self.pos..];
                let close = rest
                    .find(')')
                    .ok_or_else(|| self.error("unterminated file(...)"))?;
                let path = rest[..close].trim().trim_matches('"').to_string();
                if path.is_empty() {
                    return Err(self.error("empty path"));
                }
                self.pos += close;
                self.eat(')')?;
                Ok(ComplexExpr::File(PathBuf::from(path)))
            }
            other => Err(Error::Parse(format!(
                "unknown builder `{other}` in `{}`",
                self.s
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for text in [
            "subdivide(boundary_simplex(3))",
            "join(boundary_simplex(1), boundary_simplex(1))",
            "point",
        ] {
            let e: ComplexExpr = text.parse().unwrap();
            assert_eq!(e.to_string(), text);
        }
        let e: ComplexExpr = "join(file(a.json), point)".parse().unwrap();
        assert_eq!(
            e,
            ComplexExpr::Join(
                Box::new(ComplexExpr::File("a.json".into())),
                Box::new(ComplexExpr::Point)
            )
        );
        let e: ComplexExpr = " join( cycle(5) ,point ) ".parse().unwrap();
        assert_eq!(e.eval(Path::new(".")).unwrap().f_vector(), vec![6, 10, 5]);
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "",
            "subdivide(",
            "boundary_simplex(x)",
            "cube(3)",
            "point point",
            "file()",
        ] {
            assert!(bad.parse::<ComplexExpr>().is_err(), "{bad}");
        }
    }

    #[test]
    fn hexagon_is_the_subdivided_triangle() {
        let e: ComplexExpr = "subdivide(boundary_simplex(2))".parse().unwrap();
        assert_eq!(e.eval(Path::new(".")).unwrap().f_vector(), vec![6, 6]);
    }
}
