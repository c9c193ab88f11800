//! Resource caps, overridable through the `CLAB_CAPS` environment variable
//! as comma-separated `key=value` pairs, e.g. `max_concepts=4096,max_memo=1000000`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest class a generator may build.
    pub max_concepts: usize,
    /// Largest number of memo entries an exact search may store.
    pub max_memo: usize,
    /// Largest domain a generator may build.
    pub max_domain: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_concepts: 1 << 16, max_memo: 20_000_000, max_domain: 1 << 12 }
    }
}

impl Caps {
    pub fn from_env() -> Result<Self> {
        match std::env::var("CLAB_CAPS") {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("cap `{}` is not key=value", part)))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("cap `{}` needs an integer", k)))?;
            match k.trim() {
                "max_concepts" => caps.max_concepts = v,
                "max_memo" => caps.max_memo = v,
                "max_domain" => caps.max_domain = v,
                other => return Err(Error::InvalidParameter(format!("unknown cap `{}`", other))),
            }
        }
        Ok(caps)
    }

    pub fn check_concepts(&self, what: &str, count: u128) -> Result<()> {
        if count > self.max_concepts as u128 {
            return Err(Error::CapExceeded(format!(
                "{} would hold {} concepts (max_concepts={})",
                what, count, self.max_concepts
            )));
        }
        Ok(())
    }

    pub fn check_domain(&self, what: &str, size: u128) -> Result<()> {
        if size > self.max_domain as u128 {
            return Err(Error::CapExceeded(format!(
                "{} needs {} instances (max_domain={})",
                what, size, self.max_domain
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides() {
        let c = Caps::parse("max_concepts=10, max_memo=5").unwrap();
        assert_eq!(c.max_concepts, 10);
        assert_eq!(c.max_memo, 5);
        assert_eq!(c.max_domain, Caps::default().max_domain);
        assert!(Caps::parse("bogus=1").is_err());
        assert!(Caps::parse("max_memo").is_err());
    }
}
