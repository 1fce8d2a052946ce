use std::fmt;
use std::str::FromStr;

use super::GroupError;

/// Product of powers of named generators, written `g2*g3^-1*z`. The empty
/// product is written `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(Vec<(String, i64)>);

impl Word {
    pub fn letters(&self) -> &[(String, i64)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Word {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| GroupError::BadWord {
            word: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(bad("empty word"));
        }
        if t == "1" || t == "e" {
            return Ok(Word(Vec::new()));
        }
        let mut letters = Vec::new();
        for part in t.split('*') {
            let part = part.trim();
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim().parse::<i64>().map_err(|_| bad("bad exponent"))?,
                ),
                None => (part, 1),
            };
            if name.is_empty()
                || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
                || name.chars().next().is_some_and(|c| c.is_ascii_digit())
            {
                return Err(bad(&format!("bad generator name {name:?}")));
            }
            letters.push((name.to_string(), exp));
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(n, k)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}
