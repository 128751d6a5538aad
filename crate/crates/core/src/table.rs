//! Parities and generator tables.

use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bits(bits: u32) -> Parity {
        if bits.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        self + Parity::Odd
    }

    /// `(-1)^self` as a small integer.
    pub fn sign(self) -> i64 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    /// `(-1)^(self * other)`.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A generator of a table: an index into the even or the odd list.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    Even(usize),
    Odd(usize),
}

impl Gen {
    pub fn parity(self) -> Parity {
        match self {
            Gen::Even(_) => Parity::Even,
            Gen::Odd(_) => Parity::Odd,
        }
    }
}

/// Ordered generator names of a chart.
///
/// Even generators are laid out as `[pair coordinates | params | extra]`, odd
/// generators as `[pair coordinates | extra]`. Pair `i` couples even
/// generator `i` with odd generator `i`; `flipped[i]` records that the even
/// member plays the role of `x_i` (and the odd member that of `y^i`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GeneratorTable {
    n_pairs: usize,
    n_params: usize,
    even: Vec<String>,
    odd: Vec<String>,
    flipped: Vec<bool>,
}

impl GeneratorTable {
    /// Darboux chart with coordinates `q1..qn`, `p1..pn` and no parameters.
    pub fn darboux(n: usize) -> Arc<Self> {
        TableBuilder::new(n).build().expect("standard names are distinct")
    }

    pub fn builder(n: usize) -> TableBuilder {
        TableBuilder::new(n)
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn flipped(&self, pair: usize) -> bool {
        self.flipped[pair]
    }

    pub fn pattern(&self) -> &[bool] {
        &self.flipped
    }

    /// Even index of parameter `k`.
    pub fn param(&self, k: usize) -> usize {
        self.n_pairs + k
    }

    pub fn param_names(&self) -> &[String] {
        &self.even[self.n_pairs..self.n_pairs + self.n_params]
    }

    pub fn is_param(&self, even_index: usize) -> bool {
        even_index >= self.n_pairs && even_index < self.n_pairs + self.n_params
    }

    pub fn even_name(&self, i: usize) -> &str {
        &self.even[i]
    }

    pub fn odd_name(&self, i: usize) -> &str {
        &self.odd[i]
    }

    pub fn name(&self, g: Gen) -> &str {
        match g {
            Gen::Even(i) => &self.even[i],
            Gen::Odd(i) => &self.odd[i],
        }
    }

    /// Resolve a generator name. Besides the declared names, `q<k>`/`p<k>` and
    /// `x<k>`/`y<k>` always refer to the members of pair `k` (1-based).
    pub fn lookup(&self, name: &str) -> Option<Gen> {
        if let Some(i) = self.even.iter().position(|n| n == name) {
            return Some(Gen::Even(i));
        }
        if let Some(i) = self.odd.iter().position(|n| n == name) {
            return Some(Gen::Odd(i));
        }
        let (head, tail) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
        let k: usize = tail.parse().ok()?;
        if k == 0 || k > self.n_pairs {
            return None;
        }
        let i = k - 1;
        match head {
            "q" => Some(Gen::Even(i)),
            "p" => Some(Gen::Odd(i)),
            "x" if self.flipped[i] => Some(Gen::Even(i)),
            "x" => Some(Gen::Odd(i)),
            "y" if self.flipped[i] => Some(Gen::Odd(i)),
            "y" => Some(Gen::Even(i)),
            _ => None,
        }
    }

    /// The generator playing the role of `x_i` (momentum side) of pair `i`.
    pub fn x_gen(&self, pair: usize) -> Gen {
        if self.flipped[pair] {
            Gen::Even(pair)
        } else {
            Gen::Odd(pair)
        }
    }

    /// The generator playing the role of `y^i` (position side) of pair `i`.
    pub fn y_gen(&self, pair: usize) -> Gen {
        if self.flipped[pair] {
            Gen::Odd(pair)
        } else {
            Gen::Even(pair)
        }
    }

    /// Same pairs and parameters plus extra generators, appended after the
    /// existing ones so that values embed without reindexing.
    pub fn extended(&self, extra_even: &[String], extra_odd: &[String]) -> Result<Arc<Self>> {
        let mut t = self.clone();
        t.even.extend(extra_even.iter().cloned());
        t.odd.extend(extra_odd.iter().cloned());
        t.check_distinct()?;
        Ok(Arc::new(t))
    }

    /// True if `other` starts with all of this table's generators.
    pub fn embeds_into(&self, other: &GeneratorTable) -> bool {
        self.n_pairs == other.n_pairs
            && self.n_params == other.n_params
            && other.even.starts_with(&self.even)
            && other.odd.starts_with(&self.odd)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut all: Vec<&String> = self.even.iter().chain(self.odd.iter()).collect();
        all.sort();
        for w in all.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateGenerator(w[0].clone()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TableBuilder {
    n: usize,
    params: Vec<String>,
    flipped: Vec<bool>,
    xy_names: bool,
    prefixes: (String, String),
}

impl TableBuilder {
    pub fn new(n: usize) -> Self {
        TableBuilder {
            n,
            params: Vec::new(),
            flipped: vec![false; n],
            xy_names: false,
            prefixes: ("q".into(), "p".into()),
        }
    }

    pub fn params<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        self.params = names.iter().map(|s| s.as_ref().to_string()).collect();
        self
    }

    /// Per-pair flag: `true` makes `x_i` the even member of the pair.
    pub fn pattern(mut self, flipped: &[bool]) -> Self {
        self.flipped = flipped.to_vec();
        self
    }

    /// Name generators `x<k>`/`y<k>` instead of `q<k>`/`p<k>`.
    pub fn xy_names(mut self, yes: bool) -> Self {
        self.xy_names = yes;
        self
    }

    /// Prefixes for even and odd coordinate names, e.g. `("Q", "P")`.
    pub fn prefixes(mut self, even: &str, odd: &str) -> Self {
        self.prefixes = (even.to_string(), odd.to_string());
        self
    }

    pub fn build(self) -> Result<Arc<GeneratorTable>> {
        if self.flipped.len() != self.n {
            return Err(Error::Pattern(format!(
                "pattern has {} entries for {} pairs",
                self.flipped.len(),
                self.n
            )));
        }
        let mut even = Vec::with_capacity(self.n + self.params.len());
        let mut odd = Vec::with_capacity(self.n);
        for k in 1..=self.n {
            if self.xy_names {
                let (e, o) = if self.flipped[k - 1] { ("x", "y") } else { ("y", "x") };
                even.push(format!("{e}{k}"));
                odd.push(format!("{o}{k}"));
            } else {
                even.push(format!("{}{k}", self.prefixes.0));
                odd.push(format!("{}{k}", self.prefixes.1));
            }
        }
        even.extend(self.params.iter().cloned());
        let t = GeneratorTable {
            n_pairs: self.n,
            n_params: self.params.len(),
            even,
            odd,
            flipped: self.flipped,
        };
        t.check_distinct()?;
        Ok(Arc::new(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_addition_is_mod_two() {
        use Parity::*;
        assert_eq!(Even + Even, Even);
        assert_eq!(Even + Odd, Odd);
        assert_eq!(Odd + Odd, Even);
        assert_eq!(Odd.koszul(Odd), -1);
    }

    #[test]
    fn aliases_follow_the_pattern() {
        let t = GeneratorTable::builder(2).pattern(&[false, true]).params(&["t"]).build().unwrap();
        assert_eq!(t.lookup("x1"), Some(Gen::Odd(0)));
        assert_eq!(t.lookup("y1"), Some(Gen::Even(0)));
        assert_eq!(t.lookup("x2"), Some(Gen::Even(1)));
        assert_eq!(t.lookup("y2"), Some(Gen::Odd(1)));
        assert_eq!(t.lookup("t"), Some(Gen::Even(2)));
        assert_eq!(t.lookup("q3"), None);
        assert_eq!(t.lookup("z1"), None);
    }

    #[test]
    fn rejects_clashing_names() {
        assert!(GeneratorTable::builder(1).params(&["q1"]).build().is_err());
    }
}
