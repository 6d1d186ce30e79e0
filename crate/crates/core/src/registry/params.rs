use std::collections::BTreeMap;

use dashu_ratio::RBig;

use crate::error::{Error, Result};
use crate::numerics::{parse_rational, BigReal, Exact};

/// Names accepted in a parameter bag.
pub const PARAM_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "q", "n"];

/// Named rational parameters feeding an identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityParams {
    values: BTreeMap<String, RBig>,
    n: Option<usize>,
}

impl IdentityParams {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets a named parameter from a literal such as `3/7`, `-2` or `0.25`.
    pub fn set(&mut self, name: &str, literal: &str) -> Result<()> {
        if name == "n" {
            let n = literal.trim().parse::<usize>().map_err(|_| Error::Parse(literal.to_string()))?;
            self.n = Some(n);
            return Ok(());
        }
        if !PARAM_NAMES.contains(&name) {
            return Err(Error::InvalidArgument(format!("unknown parameter `{name}`")));
        }
        self.values.insert(name.to_string(), parse_rational(literal)?);
        Ok(())
    }

    pub fn with(mut self, name: &str, literal: &str) -> Result<Self> {
        self.set(name, literal)?;
        Ok(self)
    }

    pub fn set_rational(&mut self, name: &str, value: RBig) {
        self.values.insert(name.to_string(), value);
    }

    pub fn set_n(&mut self, n: usize) {
        self.n = Some(n);
    }

    /// Parses `key=value` pairs.
    pub fn parse_pairs<'a>(pairs: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut out = Self::new();
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected key=value, got `{pair}`")))?;
            out.set(k.trim(), v)?;
        }
        Ok(out)
    }

    pub fn contains(&self, name: &str) -> bool {
        if name == "n" {
            self.n.is_some()
        } else {
            self.values.contains_key(name)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty() && self.n.is_none()
    }

    pub fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::MissingParameter("n".into()))
    }

    pub fn rational(&self, name: &str) -> Result<&RBig> {
        self.values.get(name).ok_or_else(|| Error::MissingParameter(name.to_string()))
    }

    pub fn exact(&self, name: &str) -> Result<Exact> {
        self.rational(name).map(|r| Exact::new(r.clone()))
    }

    pub fn real(&self, name: &str, precision: usize) -> Result<BigReal> {
        self.rational(name).map(|r| BigReal::from_rational(r, precision))
    }

    pub fn real_opt(&self, name: &str, precision: usize) -> Option<BigReal> {
        self.values.get(name).map(|r| BigReal::from_rational(r, precision))
    }

    /// Fills in every parameter that is absent here from `defaults`.
    pub fn or_defaults(&self, defaults: &IdentityParams) -> IdentityParams {
        let mut out = defaults.clone();
        for (k, v) in &self.values {
            out.values.insert(k.clone(), v.clone());
        }
        if self.n.is_some() {
            out.n = self.n;
        }
        out
    }

    /// Parameters rendered as exact literals, sorted by name.
    pub fn to_strings(&self) -> BTreeMap<String, String> {
        let mut out: BTreeMap<String, String> =
            self.values.iter().map(|(k, v)| (k.clone(), Exact::new(v.clone()).to_string())).collect();
        if let Some(n) = self.n {
            out.insert("n".into(), n.to_string());
        }
        out
    }

    pub fn from_strings(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut out = Self::new();
        for (k, v) in map {
            out.set(k, v)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let p = IdentityParams::parse_pairs(["a=-1/2", "q=0.25", "n=3"]).unwrap();
        let s = p.to_strings();
        assert_eq!(s["a"], "-1/2");
        assert_eq!(s["q"], "1/4");
        assert_eq!(s["n"], "3");
        assert_eq!(IdentityParams::from_strings(&s).unwrap(), p);
    }

    #[test]
    fn rejects_unknown_names() {
        assert!(IdentityParams::parse_pairs(["z=1"]).is_err());
        assert!(IdentityParams::parse_pairs(["a"]).is_err());
        assert!(IdentityParams::parse_pairs(["n=-1"]).is_err());
    }

    #[test]
    fn defaults_fill_gaps_only() {
        let d = IdentityParams::parse_pairs(["q=1/2", "a=1"]).unwrap();
        let p = IdentityParams::parse_pairs(["q=1/3"]).unwrap().or_defaults(&d);
        assert_eq!(p.to_strings()["q"], "1/3");
        assert_eq!(p.to_strings()["a"], "1");
    }
}
