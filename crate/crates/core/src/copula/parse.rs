//! Mini-grammar for copula model and merge statistic spec strings.
//!
//! One model per string, whitespace-insensitive:
//!   `indep:n=10`, `comonotone:n=10`, `gauss:n=10,rho=0.3`,
//!   `t:n=10,rho=0.3,df=4`, `clayton:n=10,t=1.5`, `gumbel:n=10,theta=2`,
//!   `extremal:n=3,J=1;3`, `exmix:n=3,comp=(1;3)@0.4+(1)@0.6`,
//!   `exA:n=10,beta=0.5`, `exB:n=10,beta=0.5`,
//!   `mix(0.3*clayton:n=5,t=1 + 0.7*indep:n=5)`,
//!   `prod(clayton:n=3,t=1 | indep:n=2)`,
//!   `groups(base=indep:n=3; sizes=2,2,1)`, `disc(m=50; indep:n=10)`.

use super::CopulaModel;
use crate::error::{Error, Result};
use crate::merge::{MergeStatistic, Weights};

/// Parse and validate a copula model spec string.
pub fn parse_model(input: &str) -> Result<CopulaModel> {
    let mut p = Parser::new(input);
    let model = p.model()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("end of input"));
    }
    model.validate()
}

/// Parse a merge statistic spec (`rmean:r=-1`, `simes`, `cauchy`),
/// attaching equal weights of the given dimension where needed.
pub fn parse_stat(input: &str, dim: usize) -> Result<MergeStatistic> {
    let mut p = Parser::new(input);
    let name = p.ident()?;
    let stat = match name.as_str() {
        "simes" => MergeStatistic::Simes,
        "cauchy" => MergeStatistic::CauchyCombination { weights: Weights::equal(dim) },
        "rmean" => {
            p.expect(b':')?;
            let key = p.ident()?;
            if key != "r" {
                return Err(p.err("parameter r"));
            }
            p.expect(b'=')?;
            let r = p.number()?;
            MergeStatistic::rmean(r, Weights::equal(dim))?
        }
        _ => return Err(p.err("one of rmean, simes, cauchy")),
    };
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("end of input"));
    }
    Ok(stat)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser { src: input.as_bytes(), pos: 0 }
    }

    fn err(&self, expected: &str) -> Error {
        let found = match self.src.get(self.pos) {
            Some(&b) => (b as char).to_string(),
            None => "end of input".to_string(),
        };
        Error::Parse {
            position: self.pos,
            expected: expected.to_string(),
            found,
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    /// Peek past the next non-ws byte to the one after it (also non-ws).
    fn peek2(&mut self) -> Option<u8> {
        self.skip_ws();
        let mut i = self.pos + 1;
        while self.src.get(i).is_some_and(|b| b.is_ascii_whitespace()) {
            i += 1;
        }
        self.src.get(i).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("'{}'", b as char)))
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let mut seen_digit = false;
        while let Some(&b) = self.src.get(self.pos) {
            if b.is_ascii_digit() || b == b'.' {
                seen_digit |= b.is_ascii_digit();
                self.pos += 1;
            } else if (b == b'e' || b == b'E') && seen_digit {
                // exponent only when followed by digits (optionally signed)
                let mut i = self.pos + 1;
                if matches!(self.src.get(i), Some(b'+') | Some(b'-')) {
                    i += 1;
                }
                if self.src.get(i).is_some_and(|d| d.is_ascii_digit()) {
                    self.pos = i + 1;
                    while self.src.get(self.pos).is_some_and(|d| d.is_ascii_digit()) {
                        self.pos += 1;
                    }
                }
                break;
            } else {
                break;
            }
        }
        if !seen_digit {
            return Err(self.err("number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| self.err("number"))
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| self.err("integer"))
    }

    /// Semicolon-separated integers; stops when ';' is not followed by a digit.
    fn index_set(&mut self) -> Result<Vec<usize>> {
        let mut out = vec![self.integer()?];
        while self.peek() == Some(b';') && self.peek2().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
            out.push(self.integer()?);
        }
        Ok(out)
    }

    fn model(&mut self) -> Result<CopulaModel> {
        let name_pos = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident()?;
        match name.as_str() {
            "mix" => self.mixture(),
            "prod" => self.product(),
            "groups" => self.groups(),
            "disc" => self.disc(),
            _ => self.leaf(&name, name_pos),
        }
    }

    fn mixture(&mut self) -> Result<CopulaModel> {
        self.expect(b'(')?;
        let mut components = Vec::new();
        loop {
            let a = self.number()?;
            self.expect(b'*')?;
            let m = self.model()?;
            components.push((m, a));
            if !self.eat(b'+') {
                break;
            }
        }
        self.expect(b')')?;
        Ok(CopulaModel::Mixture { components })
    }

    fn product(&mut self) -> Result<CopulaModel> {
        self.expect(b'(')?;
        let mut factors = vec![self.model()?];
        while self.eat(b'|') {
            factors.push(self.model()?);
        }
        self.expect(b')')?;
        Ok(CopulaModel::Product { factors })
    }

    fn groups(&mut self) -> Result<CopulaModel> {
        self.expect(b'(')?;
        let key = self.ident()?;
        if key != "base" {
            return Err(self.err("base="));
        }
        self.expect(b'=')?;
        let base = self.model()?;
        self.expect(b';')?;
        let key = self.ident()?;
        if key != "sizes" {
            return Err(self.err("sizes="));
        }
        self.expect(b'=')?;
        let mut sizes = vec![self.integer()?];
        while self.eat(b',') {
            sizes.push(self.integer()?);
        }
        self.expect(b')')?;
        Ok(CopulaModel::ComonotoneGroups { base: Box::new(base), sizes })
    }

    fn disc(&mut self) -> Result<CopulaModel> {
        self.expect(b'(')?;
        let key = self.ident()?;
        if key != "m" {
            return Err(self.err("m="));
        }
        self.expect(b'=')?;
        let m = self.integer()? as u64;
        self.expect(b';')?;
        let base = self.model()?;
        self.expect(b')')?;
        Ok(CopulaModel::Discretized { base: Box::new(base), m })
    }

    fn leaf(&mut self, name: &str, name_pos: usize) -> Result<CopulaModel> {
        let mut params = LeafParams::default();
        if self.eat(b':') {
            loop {
                self.skip_ws();
                let key_pos = self.pos;
                let key = self.ident()?;
                self.expect(b'=')?;
                match key.as_str() {
                    "n" => params.n = Some(self.integer()?),
                    "rho" => params.rho = Some(self.number()?),
                    "df" => params.df = Some(self.number()?),
                    "t" => params.t = Some(self.number()?),
                    "theta" => params.theta = Some(self.number()?),
                    "beta" => params.beta = Some(self.number()?),
                    "J" => params.j = Some(self.index_set()?),
                    "comp" => params.comp = Some(self.exmix_components()?),
                    _ => {
                        return Err(Error::Parse {
                            position: key_pos,
                            expected: "one of n, rho, df, t, theta, beta, J, comp".to_string(),
                            found: key,
                        })
                    }
                }
                if !self.eat(b',') {
                    break;
                }
            }
        }
        params.build(name, name_pos)
    }

    /// `(1;3)@0.4+(1)@0.6` — continue past '+' only when a '(' follows,
    /// so mixtures of exmix leaves stay parseable.
    fn exmix_components(&mut self) -> Result<Vec<(Vec<usize>, f64)>> {
        let mut out = Vec::new();
        loop {
            self.expect(b'(')?;
            let j = self.index_set()?;
            self.expect(b')')?;
            self.expect(b'@')?;
            let a = self.number()?;
            out.push((j, a));
            if self.peek() == Some(b'+') && self.peek2() == Some(b'(') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(out)
    }
}

#[derive(Default)]
struct LeafParams {
    n: Option<usize>,
    rho: Option<f64>,
    df: Option<f64>,
    t: Option<f64>,
    theta: Option<f64>,
    beta: Option<f64>,
    j: Option<Vec<usize>>,
    comp: Option<Vec<(Vec<usize>, f64)>>,
}

impl LeafParams {
    fn build(self, name: &str, name_pos: usize) -> Result<CopulaModel> {
        let at = |expected: &str| Error::Parse {
            position: name_pos,
            expected: expected.to_string(),
            found: name.to_string(),
        };
        let n = self.n.ok_or_else(|| at("parameter n"))?;
        let model = match name {
            "indep" => CopulaModel::Independence { n },
            "comonotone" => CopulaModel::Comonotone { n },
            "gauss" => CopulaModel::GaussEquicorr {
                n,
                rho: self.rho.ok_or_else(|| at("parameter rho"))?,
            },
            "t" => CopulaModel::TEquicorr {
                n,
                rho: self.rho.ok_or_else(|| at("parameter rho"))?,
                df: self.df.ok_or_else(|| at("parameter df"))?,
            },
            "clayton" => CopulaModel::Clayton {
                n,
                t: self.t.ok_or_else(|| at("parameter t"))?,
            },
            "gumbel" => CopulaModel::Gumbel {
                n,
                theta: self.theta.ok_or_else(|| at("parameter theta"))?,
            },
            "extremal" => CopulaModel::Extremal {
                n,
                j: self.j.ok_or_else(|| at("parameter J"))?,
            },
            "exmix" => CopulaModel::ExtremalMixture {
                n,
                components: self.comp.ok_or_else(|| at("parameter comp"))?,
            },
            "exA" => CopulaModel::BlockExampleA {
                n,
                beta: self.beta.ok_or_else(|| at("parameter beta"))?,
            },
            "exB" => CopulaModel::BlockExampleB {
                n,
                beta: self.beta.ok_or_else(|| at("parameter beta"))?,
            },
            _ => {
                return Err(Error::Parse {
                    position: name_pos,
                    expected: "model name (indep, comonotone, gauss, t, clayton, gumbel, \
                               extremal, exmix, exA, exB, mix, prod, groups, disc)"
                        .to_string(),
                    found: name.to_string(),
                })
            }
        };
        Ok(model)
    }
}
