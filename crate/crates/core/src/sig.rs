//! Signatures: the ordered factor orders of a free product of finite cyclic
//! groups.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The ordered list of factor orders `(n_1, ..., n_m)` of
/// `G = Z/n_1Z * ... * Z/n_mZ`. Factor indices are 0-based everywhere in the
/// API; all text rendering (`x1`, `pc:1,2`, error messages) is 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Signature {
    orders: Vec<u32>,
}

impl Signature {
    /// Requires at least one factor, every order at least 2.
    pub fn new(orders: Vec<u32>) -> Result<Signature> {
        if orders.is_empty() {
            return Err(Error::InvalidSignature("no factors".into()));
        }
        if let Some(&n) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidSignature(format!("factor order {n} < 2")));
        }
        Ok(Signature { orders })
    }

    /// Number of factors `m`.
    pub fn factor_count(&self) -> usize {
        self.orders.len()
    }

    /// Order of the `i`-th factor (0-based). Panics on a bad index; use
    /// [`Signature::check_index`] first for untrusted input.
    pub fn order(&self, i: usize) -> u32 {
        self.orders[i]
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.orders.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i + 1,
                m: self.orders.len(),
            })
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Parses the rendering `2,2,3`.
    fn from_str(s: &str) -> Result<Signature> {
        let mut orders = Vec::new();
        for part in s.split(',') {
            let n: u32 = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidSignature(format!("bad factor order {part:?}")))?;
            orders.push(n);
        }
        Signature::new(orders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_orders() {
        assert!(Signature::new(vec![]).is_err());
        assert!(Signature::new(vec![2, 1]).is_err());
        assert!(Signature::new(vec![0]).is_err());
        assert!(Signature::new(vec![2]).is_ok());
    }

    #[test]
    fn parse_display_round_trip() {
        for text in ["2", "2,2,3", "4,2", "6,6,6,6,6"] {
            let sig: Signature = text.parse().unwrap();
            assert_eq!(sig.to_string(), text);
        }
        assert!("".parse::<Signature>().is_err());
        assert!("2,x".parse::<Signature>().is_err());
        assert!("2,,3".parse::<Signature>().is_err());
    }

    #[test]
    fn index_check() {
        let sig: Signature = "2,3".parse().unwrap();
        assert!(sig.check_index(0).is_ok());
        assert!(sig.check_index(1).is_ok());
        assert_eq!(
            sig.check_index(2),
            Err(Error::IndexOutOfRange { index: 3, m: 2 })
        );
    }
}
